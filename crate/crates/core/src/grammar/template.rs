use std::collections::BTreeMap;
use std::fmt;

/// One whitespace-delimited unit of a template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Word(String),
    Slot(String),
}

/// Slot markers are uppercase-with-underscores tokens such as `COLOR` or
/// `ON_OFF_SWITCHSTATE`.
pub fn is_slot_marker(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    text: String,
    pieces: Vec<Piece>,
}

impl Template {
    /// Parses a corpus line. `""` denotes the empty template.
    pub fn new(line: &str) -> Template {
        let line = line.trim();
        let body = if line == "\"\"" { "" } else { line };
        let pieces: Vec<Piece> = body
            .split_whitespace()
            .map(|tok| {
                if is_slot_marker(tok) {
                    Piece::Slot(tok.to_string())
                } else {
                    Piece::Word(tok.to_lowercase())
                }
            })
            .collect();
        let text = pieces
            .iter()
            .map(|p| match p {
                Piece::Word(w) | Piece::Slot(w) => w.as_str(),
            })
            .collect::<Vec<_>>()
            .join(" ");
        Template { text, pieces }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Distinct slot names in order of first appearance.
    pub fn slots(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in &self.pieces {
            if let Piece::Slot(s) = p {
                if !out.contains(&s.as_str()) {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.pieces.iter().filter_map(|p| match p {
            Piece::Word(w) => Some(w.as_str()),
            Piece::Slot(_) => None,
        })
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.text.is_empty() {
            f.write_str("\"\"")
        } else {
            f.write_str(&self.text)
        }
    }
}

/// Substitutes every slot marker. Returns `None` if a slot is unbound.
pub(crate) fn fill<'a>(
    pieces: impl IntoIterator<Item = &'a Piece>,
    slots: &BTreeMap<String, String>,
) -> Option<Vec<String>> {
    pieces
        .into_iter()
        .map(|p| match p {
            Piece::Word(w) => Some(w.clone()),
            Piece::Slot(s) => slots.get(s).cloned(),
        })
        .collect()
}

/// Matches a token sequence against a piece sequence. Each slot consumes
/// exactly one token drawn from its domain; repeated slots must agree.
pub(crate) fn match_pieces(
    pieces: &[&Piece],
    tokens: &[&str],
    domains: &BTreeMap<String, Vec<String>>,
) -> Option<BTreeMap<String, String>> {
    if pieces.len() != tokens.len() {
        return None;
    }
    let mut bound = BTreeMap::new();
    for (piece, &tok) in pieces.iter().zip(tokens) {
        match piece {
            Piece::Word(w) => {
                if w != tok {
                    return None;
                }
            }
            Piece::Slot(s) => {
                if !domains.get(s).is_some_and(|d| d.iter().any(|v| v == tok)) {
                    return None;
                }
                match bound.get(s) {
                    Some(prev) if prev != tok => return None,
                    Some(_) => {}
                    None => {
                        bound.insert(s.clone(), tok.to_string());
                    }
                }
            }
        }
    }
    Some(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_markers() {
        assert!(is_slot_marker("COLOR"));
        assert!(is_slot_marker("ON_OFF_SWITCHSTATE"));
        assert!(!is_slot_marker("color"));
        assert!(!is_slot_marker("_X"));
        assert!(!is_slot_marker(""));
    }

    #[test]
    fn empty_template() {
        let t = Template::new("\"\"");
        assert!(t.is_empty());
        assert_eq!(t.text(), "");
        assert_eq!(t.to_string(), "\"\"");
    }

    #[test]
    fn slots_in_order() {
        let t =
            Template::new("an ON_OFF_SWITCHSTATE means the door is open but only if it is COLOR");
        assert_eq!(t.slots(), vec!["ON_OFF_SWITCHSTATE", "COLOR"]);
        assert_eq!(t.words().count(), 11);
    }

    #[test]
    fn repeated_slot_must_agree() {
        let t = Template::new("X and X");
        let domains = BTreeMap::from([("X".to_string(), vec!["a".into(), "b".into()])]);
        let pieces: Vec<&Piece> = t.pieces().iter().collect();
        assert!(match_pieces(&pieces, &["a", "and", "a"], &domains).is_some());
        assert!(match_pieces(&pieces, &["a", "and", "b"], &domains).is_none());
    }
}
