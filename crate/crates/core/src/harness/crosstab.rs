use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::trace::{EndRecord, TraceEpisode};
use crate::error::{Error, Result};
use crate::world::WorldInstance;

/// Episode and correct-answer counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub count: u64,
    pub correct: u64,
}

impl Cell {
    pub fn accuracy(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.correct as f64 / self.count as f64
        }
    }

    fn add(&mut self, correct: bool) {
        self.count += 1;
        self.correct += u64::from(correct);
    }

    fn merge(&mut self, other: Cell) {
        self.count += other.count;
        self.correct += other.correct;
    }
}

/// The part of an episode the report looks at.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub template: String,
    pub kind: String,
    pub slots: BTreeMap<String, String>,
    pub label: bool,
    pub correct: bool,
    pub infeasible: bool,
}

impl Outcome {
    pub fn new(world: &WorldInstance, end: &EndRecord) -> Outcome {
        let form = &world.visible.form;
        Outcome {
            template: form.template_id.to_string(),
            kind: form.kind().name().to_string(),
            slots: form.slots.clone(),
            label: world.label,
            correct: end.correct,
            infeasible: end.infeasible,
        }
    }
}

impl From<&TraceEpisode> for Outcome {
    fn from(ep: &TraceEpisode) -> Outcome {
        Outcome::new(&ep.world, &ep.end)
    }
}

/// Accuracy overall and broken down by template, kind, slot value and label.
///
/// The template, kind and label tables each partition the episodes. A slot
/// table covers only the episodes whose hypothesis has that slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosstabReport {
    pub overall: Cell,
    /// Episodes whose agent did not flag the world as infeasible.
    pub feasible: Cell,
    pub by_template: BTreeMap<String, Cell>,
    pub by_kind: BTreeMap<String, Cell>,
    pub by_slot: BTreeMap<String, BTreeMap<String, Cell>>,
    pub by_label: BTreeMap<String, Cell>,
    pub min_cell_count: u64,
}

impl CrosstabReport {
    pub fn empty(min_cell_count: u64) -> CrosstabReport {
        CrosstabReport {
            overall: Cell::default(),
            feasible: Cell::default(),
            by_template: BTreeMap::new(),
            by_kind: BTreeMap::new(),
            by_slot: BTreeMap::new(),
            by_label: ["true", "false"]
                .map(|k| (k.to_string(), Cell::default()))
                .into(),
            min_cell_count,
        }
    }

    pub fn add(&mut self, o: &Outcome) {
        self.overall.add(o.correct);
        if !o.infeasible {
            self.feasible.add(o.correct);
        }
        self.by_template
            .entry(o.template.clone())
            .or_default()
            .add(o.correct);
        self.by_kind
            .entry(o.kind.clone())
            .or_default()
            .add(o.correct);
        for (slot, value) in &o.slots {
            self.by_slot
                .entry(slot.clone())
                .or_default()
                .entry(value.clone())
                .or_default()
                .add(o.correct);
        }
        self.by_label
            .entry(o.label.to_string())
            .or_default()
            .add(o.correct);
    }

    /// Adds another report's counts. Order does not matter.
    pub fn merge(&mut self, other: &CrosstabReport) {
        self.overall.merge(other.overall);
        self.feasible.merge(other.feasible);
        merge_table(&mut self.by_template, &other.by_template);
        merge_table(&mut self.by_kind, &other.by_kind);
        merge_table(&mut self.by_label, &other.by_label);
        for (slot, table) in &other.by_slot {
            merge_table(self.by_slot.entry(slot.clone()).or_default(), table);
        }
        self.min_cell_count = self.min_cell_count.max(other.min_cell_count);
    }

    pub fn accuracy(&self) -> f64 {
        self.overall.accuracy()
    }

    /// Cells below the declared minimum, as `table/key` names.
    pub fn undersized(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut scan = |name: &str, table: &BTreeMap<String, Cell>| {
            for (key, cell) in table {
                if cell.count < self.min_cell_count {
                    out.push(format!("{name}/{key}"));
                }
            }
        };
        scan("template", &self.by_template);
        scan("kind", &self.by_kind);
        scan("label", &self.by_label);
        for (slot, table) in &self.by_slot {
            scan(&format!("slot:{slot}"), table);
        }
        out
    }

    /// Partition tables sum back to the overall counts, and no slot table
    /// holds more episodes than exist.
    pub fn is_consistent(&self) -> bool {
        let total = |t: &BTreeMap<String, Cell>| {
            t.values().fold(Cell::default(), |mut acc, c| {
                acc.merge(*c);
                acc
            })
        };
        [&self.by_template, &self.by_kind, &self.by_label]
            .iter()
            .all(|t| total(t) == self.overall)
            && self
                .by_slot
                .values()
                .all(|t| total(t).count <= self.overall.count)
            && self.feasible.count <= self.overall.count
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let line = |s: &mut String, key: &str, c: &Cell| {
            let flag = if c.count < self.min_cell_count {
                "  (below minimum)"
            } else {
                ""
            };
            writeln!(
                s,
                "  {key:<28} {:>8} {:>8} {:>8.4}{flag}",
                c.count,
                c.correct,
                c.accuracy()
            )
            .unwrap();
        };
        writeln!(
            s,
            "  {:<28} {:>8} {:>8} {:>8}",
            "", "episodes", "correct", "accuracy"
        )
        .unwrap();
        line(&mut s, "overall", &self.overall);
        line(&mut s, "feasible", &self.feasible);
        let table = |s: &mut String, title: &str, t: &BTreeMap<String, Cell>| {
            writeln!(s, "{title}").unwrap();
            for (k, c) in t {
                line(s, k, c);
            }
        };
        table(&mut s, "by label", &self.by_label);
        table(&mut s, "by kind", &self.by_kind);
        table(&mut s, "by template", &self.by_template);
        for (slot, t) in &self.by_slot {
            table(&mut s, &format!("by slot {slot}"), t);
        }
        s
    }
}

fn merge_table(into: &mut BTreeMap<String, Cell>, from: &BTreeMap<String, Cell>) {
    for (k, c) in from {
        into.entry(k.clone()).or_default().merge(*c);
    }
}

/// Builds a report. An empty input is an error.
pub fn crosstab<I>(outcomes: I, min_cell_count: u64) -> Result<CrosstabReport>
where
    I: IntoIterator<Item = Outcome>,
{
    let mut report = CrosstabReport::empty(min_cell_count);
    for o in outcomes {
        report.add(&o);
    }
    if report.overall.count == 0 {
        return Err(Error::Trace("no episodes to tabulate".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(template: &str, color: &str, label: bool, correct: bool) -> Outcome {
        Outcome {
            template: template.into(),
            kind: "triplet".into(),
            slots: [("COLOR".to_string(), color.to_string())].into(),
            label,
            correct,
            infeasible: false,
        }
    }

    #[test]
    fn empty_is_error() {
        assert!(crosstab(Vec::new(), 0).is_err());
    }

    #[test]
    fn tables_partition() {
        let r = crosstab(
            vec![
                outcome("a", "blue", true, true),
                outcome("a", "red", false, false),
                outcome("b", "blue", false, true),
            ],
            2,
        )
        .unwrap();
        assert_eq!(
            r.overall,
            Cell {
                count: 3,
                correct: 2
            }
        );
        assert_eq!(
            r.by_slot["COLOR"]["blue"],
            Cell {
                count: 2,
                correct: 2
            }
        );
        assert_eq!(
            r.by_label["false"],
            Cell {
                count: 2,
                correct: 1
            }
        );
        assert!(r.is_consistent());
        assert!(r.undersized().contains(&"template/b".to_string()));
        assert!(r.render().contains("overall"));
    }

    #[test]
    fn merge_matches_single_pass() {
        let all = vec![
            outcome("a", "blue", true, true),
            outcome("b", "red", false, false),
            outcome("a", "green", true, false),
        ];
        let whole = crosstab(all.clone(), 0).unwrap();
        let mut left = crosstab(all[2..].to_vec(), 0).unwrap();
        left.merge(&crosstab(all[..2].to_vec(), 0).unwrap());
        assert_eq!(left, whole);
    }
}
