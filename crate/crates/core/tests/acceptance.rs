//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypverify::agents::AgentKind;
use hypverify::cartpole::{modified, push_force, CartLayout, CartSnapshot, CartState, Zone};
use hypverify::grammar::{SemanticForm, TemplateId, TripletParts};
use hypverify::gridworld::{Cell, GridState, Object, DOOR_CELL, GRID_SIZE};
use hypverify::harness::{replay, run_batch, run_episode, RunConfig, Trace};
use hypverify::truth::{
    ground_truth, interpret, Claim, Condition, Exploration, GravityChange, Region, ZoneEffect,
    SIMULATION_BUDGET,
};
use hypverify::world::{sample_world_with, Layout};
use hypverify::{
    Action, EnvId, Episode, EpisodeConfig, Error, HypothesisKind, KindMix, Law, RewardKind,
    RewardSpec, RuleSet, TemplateLibrary, WorldInstance,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("label balance", Duration::from_secs(60), label_balance),
        ("leak-freeness", Duration::from_secs(60), leak_freeness),
        (
            "truth-oracle equivalence",
            Duration::from_secs(600),
            truth_oracle_equivalence,
        ),
        ("reward case tables", Duration::from_secs(1), reward_tables),
        (
            "scripted-oracle accuracy",
            Duration::from_secs(300),
            oracle_accuracy,
        ),
        ("baseline chance", Duration::from_secs(120), baseline_chance),
        ("cartpole physics", Duration::from_secs(1), cartpole_physics),
        (
            "determinism/replay",
            Duration::from_secs(60),
            determinism_replay,
        ),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit:?} limit")),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "{} {name}: {detail} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn label_balance() -> Outcome {
    const N: u64 = 10_000;
    let mut parts = Vec::new();
    for env in EnvId::ALL {
        let lib = TemplateLibrary::builtin(env);
        let trues: Result<u64, Error> = (0..N)
            .into_par_iter()
            .map(|seed| {
                Ok(u64::from(
                    hypverify::sample_world(&lib, KindMix::EVEN, seed)?.label,
                ))
            })
            .sum();
        let p = trues.map_err(|e| e.to_string())? as f64 / N as f64;
        ensure((p - 0.5).abs() <= 0.02, || {
            format!("{env}: P(true) = {p:.4}")
        })?;
        parts.push(format!("{env} {p:.4}"));
    }
    Ok(format!(
        "P(label=true) over {N} worlds: {}",
        parts.join(", ")
    ))
}

fn leak_freeness() -> Outcome {
    const N: u64 = 1000;
    for env in EnvId::ALL {
        let lib = TemplateLibrary::builtin(env);
        let bad: Vec<u64> = (0..N)
            .into_par_iter()
            .filter(|&seed| {
                let t = sample_world_with(&lib, KindMix::EVEN, seed, Some(true)).unwrap();
                let f = sample_world_with(&lib, KindMix::EVEN, seed, Some(false)).unwrap();
                let same_world = t.ruleset == f.ruleset
                    && t.layout == f.layout
                    && t.hidden_true == f.hidden_true
                    && t.hidden_false == f.hidden_false
                    && t.label
                    && !f.label
                    && t.visible == t.hidden_true
                    && f.visible == f.hidden_false;
                let cfg = EpisodeConfig::for_env(env);
                let ot = Episode::new(&lib, t.clone(), cfg).unwrap().observation();
                let of = Episode::new(&lib, f.clone(), cfg).unwrap().observation();
                let same_obs = ot.features == of.features
                    && ot.tokens == t.visible.tokens
                    && of.tokens == f.visible.tokens;
                !(same_world && same_obs)
            })
            .collect();
        ensure(bad.is_empty(), || {
            format!(
                "{env}: {} of {N} pairs differ, first seed {}",
                bad.len(),
                bad[0]
            )
        })?;
    }
    Ok(format!(
        "{N} pairs per environment differ only in hypothesis tokens and label"
    ))
}

/// Block positions reachable by pushing, and the pushes between them. A
/// push from `p` in direction `d` needs `p + d` in the grid and free and the
/// agent's cell `p - d` in the grid and not a closed door.
fn block_graph(start: Cell, law: Region) -> (Vec<Cell>, Vec<(Cell, Cell)>) {
    let n = GRID_SIZE as isize;
    let cell = |r: isize, c: isize| (0..n).contains(&r) && (0..n).contains(&c);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some(p) = queue.pop_front() {
        let door_open = law.contains(p, GRID_SIZE);
        for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let (r, c) = (p.0 as isize, p.1 as isize);
            let (to, from) = ((r + dr, c + dc), (r - dr, c - dc));
            if !cell(to.0, to.1) || !cell(from.0, from.1) {
                continue;
            }
            let to = (to.0 as usize, to.1 as usize);
            let from = (from.0 as usize, from.1 as usize);
            if to == DOOR_CELL || (from == DOOR_CELL && !door_open) {
                continue;
            }
            edges.push((p, to));
            if seen.insert(to) {
                queue.push_back(to);
            }
        }
    }
    (seen.into_iter().collect(), edges)
}

/// Whether some reachable block configuration settles a Pushblock claim.
fn pushblock_decisive(claim: &Claim, world: &WorldInstance) -> bool {
    let Law::Block(law) = world.ruleset.law else {
        panic!("not a pushblock law")
    };
    let Layout::Grid(g) = &world.layout else {
        panic!("not a grid")
    };
    let (positions, edges) = block_graph(g.block().expect("pushblock present"), law);
    let inside = |r: Region, p| r.contains(p, GRID_SIZE);
    match claim {
        Claim::Implies(t) | Claim::NotImplies(t) => {
            let Condition::BlockIn(h) = t.pre else {
                panic!("unexpected claim {claim:?}")
            };
            positions.iter().any(|&p| inside(h, p) != inside(law, p))
                || edges.iter().any(|&(p, q)| {
                    inside(h, p) == inside(law, p)
                        && inside(h, q) == inside(law, q)
                        && inside(h, p) != inside(h, q)
                })
        }
        Claim::Independent {
            cause: Condition::BlockIn(h),
            ..
        }
        | Claim::Controls {
            cause: Condition::BlockIn(h),
            ..
        } => edges
            .iter()
            .any(|&(p, q)| inside(*h, p) != inside(*h, q) || inside(law, p) != inside(law, q)),
        _ => panic!("unexpected claim {claim:?}"),
    }
}

#[derive(Default)]
struct Agreement {
    judged: usize,
    absent: usize,
    stuck: usize,
    mismatches: Vec<String>,
}

fn truth_oracle_equivalence() -> Outcome {
    const WORLDS: u64 = 500;
    let mut parts = Vec::new();
    for env in EnvId::GRIDWORLDS {
        let lib = TemplateLibrary::builtin(env);
        let claims: Vec<(SemanticForm, Claim)> = [
            HypothesisKind::Triplet,
            HypothesisKind::General,
            HypothesisKind::Special,
        ]
        .into_iter()
        .flat_map(|k| lib.enumerate(k))
        .map(|f| {
            let c = interpret(&lib, &f).unwrap();
            (f, c)
        })
        .collect();
        let per_world: Vec<Agreement> = (0..WORLDS)
            .into_par_iter()
            .map(|seed| {
                let world = hypverify::sample_world(&lib, KindMix::EVEN, seed).unwrap();
                let explored = Exploration::explore(&world, SIMULATION_BUDGET);
                let mut a = Agreement::default();
                for (form, claim) in &claims {
                    let truth = ground_truth(claim, &world.ruleset.law).unwrap();
                    match explored.judge(&lib, claim) {
                        Ok(sim) => {
                            a.judged += 1;
                            if sim != truth {
                                a.mismatches.push(format!(
                                    "seed {seed} {}: ground {truth}, simulated {sim}",
                                    form.template_id
                                ));
                            }
                            if env == EnvId::Pushblock && !pushblock_decisive(claim, &world) {
                                a.mismatches.push(format!(
                                    "seed {seed} {}: settled in a stuck world",
                                    form.template_id
                                ));
                            }
                        }
                        Err(Error::MissingEntity(_)) => a.absent += 1,
                        Err(Error::Indeterminate(_))
                            if env == EnvId::Pushblock && !pushblock_decisive(claim, &world) =>
                        {
                            a.stuck += 1
                        }
                        Err(e) => a
                            .mismatches
                            .push(format!("seed {seed} {}: {e}", form.template_id)),
                    }
                }
                a
            })
            .collect();
        let judged: usize = per_world.iter().map(|a| a.judged).sum();
        let absent: usize = per_world.iter().map(|a| a.absent).sum();
        let stuck: usize = per_world.iter().map(|a| a.stuck).sum();
        let bad: Vec<&String> = per_world.iter().flat_map(|a| &a.mismatches).collect();
        ensure(bad.is_empty(), || {
            format!("{env}: {} disagreements, first: {}", bad.len(), bad[0])
        })?;
        parts.push(format!(
            "{env} {judged} agree ({stuck} stuck, {absent} absent-entity skipped)"
        ));
    }
    Ok(format!(
        "{WORLDS} worlds x every template: {}",
        parts.join("; ")
    ))
}

// Reward case tables.

fn triplet_form(slots: &[(&str, &str)]) -> SemanticForm {
    SemanticForm {
        template_id: TemplateId::Triplet(TripletParts {
            pre: 0,
            action: 0,
            post: 0,
        }),
        slots: slots
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    }
}

fn world(
    lib: &TemplateLibrary,
    law: Law,
    layout: Layout,
    form: &SemanticForm,
    label: bool,
) -> WorldInstance {
    let h = lib.instantiate(form).unwrap();
    WorldInstance {
        env_id: lib.env_id(),
        ruleset: RuleSet::new(law),
        layout,
        visible: h.clone(),
        label,
        hidden_true: h.clone(),
        hidden_false: h,
        seed: 0,
    }
}

fn rewards(
    lib: &TemplateLibrary,
    w: &WorldInstance,
    kind: RewardKind,
    actions: &[Action],
) -> Vec<f64> {
    let config = EpisodeConfig {
        horizon: 100,
        reward: RewardSpec::new(kind, lib.env_id()),
    };
    let mut ep = Episode::new(lib, w.clone(), config).unwrap();
    actions
        .iter()
        .map(|&a| ep.step(a).unwrap().reward)
        .collect()
}

struct Case {
    name: &'static str,
    kind: RewardKind,
    actions: Vec<Action>,
    expect: Vec<f64>,
}

fn case(name: &'static str, kind: RewardKind, actions: &[Action], expect: &[f64]) -> Case {
    Case {
        name,
        kind,
        actions: actions.to_vec(),
        expect: expect.to_vec(),
    }
}

fn reward_tables() -> Outcome {
    use Action::*;
    use RewardKind::*;
    let mut checked = 0;
    let mut run =
        |lib: &TemplateLibrary, w: &WorldInstance, cases: Vec<Case>| -> Result<(), String> {
            for c in cases {
                let got = rewards(lib, w, c.kind, &c.actions);
                ensure(got == c.expect, || {
                    format!("{} {}: {:?} != {:?}", lib.env_id(), c.name, got, c.expect)
                })?;
                checked += 1;
            }
            Ok(())
        };

    // Constants.
    for env in EnvId::ALL {
        for kind in [Pre, PrePost, IntrinsicI, IntrinsicIi] {
            ensure(RewardSpec::new(kind, env).c == 10.0, || {
                format!("{env} {kind}: C != 10")
            })?;
        }
        let dense = if env == EnvId::Crafting { 5.0 } else { 1.0 };
        for kind in [IntrinsicIii, IntrinsicIv] {
            ensure(RewardSpec::new(kind, env).c == dense, || {
                format!("{env} {kind}: C != {dense}")
            })?;
        }
        ensure(RewardSpec::new(Hyp, env).c == 1.0, || {
            format!("{env}: hyp C != 1")
        })?;
    }

    // ColorSwitch: the blue switch under the agent opens the door when on.
    let lib = TemplateLibrary::builtin(EnvId::ColorSwitch);
    let mut g = GridState::new((2, 2));
    g.put(DOOR_CELL, Object::Door { open: false });
    g.put(
        (2, 2),
        Object::Switch {
            color: "blue".into(),
            on: false,
        },
    );
    g.put(
        (2, 3),
        Object::Switch {
            color: "red".into(),
            on: false,
        },
    );
    let law = Law::Switch {
        color: "blue".into(),
        on: true,
    };
    let form = triplet_form(&[("COLOR", "blue"), ("ON_OFF_SWITCHSTATE", "on")]);
    let w = world(&lib, law.clone(), Layout::Grid(g.clone()), &form, true);
    run(
        &lib,
        &w,
        vec![
            case("hyp correct", Hyp, &[AnswerTrue], &[1.0]),
            case("hyp wrong", Hyp, &[AnswerFalse], &[-1.0]),
            case(
                "hyp world actions",
                Hyp,
                &[Toggle, Up, Stop],
                &[0.0, 0.0, 0.0],
            ),
            case("pre toggled then stop", Pre, &[Toggle, Stop], &[0.0, 10.0]),
            case(
                "pre toggled then answer",
                Pre,
                &[Toggle, AnswerTrue],
                &[0.0, 10.0],
            ),
            case("pre untouched", Pre, &[Up, Down, Stop], &[0.0, 0.0, 0.0]),
            case(
                "pre toggled on and off",
                Pre,
                &[Toggle, Toggle, Stop],
                &[0.0, 0.0, 10.0],
            ),
            case(
                "pre change K steps back",
                Pre,
                &[Toggle, Up, Down, Up, Down, Stop],
                &[0.0, 0.0, 0.0, 0.0, 0.0, 10.0],
            ),
            case(
                "pre change K+1 steps back",
                Pre,
                &[Toggle, Up, Down, Up, Down, Up, Stop],
                &[0.0; 7],
            ),
            case("pre+post composite", PrePost, &[Toggle, Stop], &[0.0, 20.0]),
            case("intrinsic i", IntrinsicI, &[Toggle, Stop], &[0.0, 10.0]),
            case(
                "intrinsic i nothing changed",
                IntrinsicI,
                &[Up, Stop],
                &[0.0, 0.0],
            ),
            case(
                "intrinsic ii referenced",
                IntrinsicIi,
                &[Toggle, Stop],
                &[0.0, 10.0],
            ),
            case(
                "intrinsic ii unreferenced",
                IntrinsicIi,
                &[Right, Toggle, Stop],
                &[0.0, 0.0, 0.0],
            ),
            case(
                "intrinsic i unreferenced",
                IntrinsicI,
                &[Right, Toggle, Stop],
                &[0.0, 0.0, 10.0],
            ),
            case(
                "intrinsic iii",
                IntrinsicIii,
                &[Toggle, Up, Down, Toggle, Stop],
                &[1.0, 0.0, 0.0, 1.0, 0.0],
            ),
            case(
                "intrinsic iii unreferenced",
                IntrinsicIii,
                &[Right, Toggle, Stop],
                &[0.0, 1.0, 0.0],
            ),
            case(
                "intrinsic iv unreferenced",
                IntrinsicIv,
                &[Right, Toggle, Stop],
                &[0.0, 0.0, 0.0],
            ),
            case(
                "intrinsic iv referenced",
                IntrinsicIv,
                &[Toggle, Stop],
                &[1.0, 0.0],
            ),
        ],
    )?;
    // The same hypothesis with the red switch as the true cause: toggling
    // the named switch changes the pre-condition but not the door.
    let red_law = Law::Switch {
        color: "red".into(),
        on: true,
    };
    let w = world(&lib, red_law, Layout::Grid(g), &form, false);
    run(
        &lib,
        &w,
        vec![
            case("false hypothesis pre", Pre, &[Toggle, Stop], &[0.0, 10.0]),
            case(
                "false hypothesis pre+post",
                PrePost,
                &[Toggle, Stop],
                &[0.0, 10.0],
            ),
            case("false hypothesis hyp", Hyp, &[AnswerFalse], &[1.0]),
        ],
    )?;

    // Pushblock: pushing the block into the right region opens the door.
    let lib = TemplateLibrary::builtin(EnvId::Pushblock);
    let mut g = GridState::new((2, 1));
    g.put(DOOR_CELL, Object::Door { open: false });
    g.put((2, 2), Object::Block);
    let form = triplet_form(&[("PUSHBLOCK_POSITION", "right")]);
    let w = world(
        &lib,
        Law::Block(Region::Right),
        Layout::Grid(g),
        &form,
        true,
    );
    run(
        &lib,
        &w,
        vec![
            case("push into region", PrePost, &[Right, Stop], &[0.0, 20.0]),
            case("walk away", PrePost, &[Left, Stop], &[0.0, 0.0]),
            case(
                "dense push",
                IntrinsicIii,
                &[Right, Right, Left, Stop],
                &[1.0, 1.0, 0.0, 0.0],
            ),
        ],
    )?;

    // Crafting: the figure's stick + craftingtable -> torch sequence.
    let lib = TemplateLibrary::builtin(EnvId::Crafting);
    let mut g = GridState::new((0, 0));
    g.put((0, 1), Object::Item("stick".into()));
    g.put((1, 1), Object::Station("craftingtable".into()));
    g.put((1, 0), Object::Item("iron".into()));
    let law = Law::Recipe {
        ingredient: "stick".into(),
        location: "craftingtable".into(),
        action: Craft,
        output: "torch".into(),
    };
    let recipe = |out: &str| {
        triplet_form(&[
            ("LOCATION", "craftingtable"),
            ("CRAFTING_ITEM", "stick"),
            ("CRAFTING_ACTION", "craft"),
            ("CREATED_ITEM", out),
        ])
    };
    let script = [Right, Pickup, Down, Craft, Stop];
    let w = world(
        &lib,
        law.clone(),
        Layout::Grid(g.clone()),
        &recipe("torch"),
        true,
    );
    run(
        &lib,
        &w,
        vec![
            case(
                "figure sequence pre+post",
                PrePost,
                &script,
                &[0.0, 0.0, 0.0, 0.0, 20.0],
            ),
            case(
                "figure sequence pre",
                Pre,
                &script,
                &[0.0, 0.0, 0.0, 0.0, 10.0],
            ),
            case(
                "craft before pickup",
                PrePost,
                &[Right, Down, Craft, Stop],
                &[0.0; 4],
            ),
            case(
                "dense crafting",
                IntrinsicIii,
                &script,
                &[0.0, 5.0, 0.0, 5.0, 0.0],
            ),
            case(
                "dense referenced",
                IntrinsicIv,
                &script,
                &[0.0, 5.0, 0.0, 5.0, 0.0],
            ),
            case(
                "dense unreferenced pickup",
                IntrinsicIv,
                &[Down, Pickup, Stop],
                &[0.0, 0.0, 0.0],
            ),
            case(
                "dense any pickup",
                IntrinsicIii,
                &[Down, Pickup, Stop],
                &[0.0, 5.0, 0.0],
            ),
            case(
                "end-of-episode crafting",
                IntrinsicI,
                &script,
                &[0.0, 0.0, 0.0, 0.0, 10.0],
            ),
        ],
    )?;
    let w = world(&lib, law, Layout::Grid(g), &recipe("bed"), false);
    run(
        &lib,
        &w,
        vec![case(
            "false recipe pre+post",
            PrePost,
            &script,
            &[0.0, 0.0, 0.0, 0.0, 10.0],
        )],
    )?;

    // Cartpole: entering the zone changes both pre- and post-condition.
    let lib = TemplateLibrary::builtin(EnvId::Cartpole);
    let layout = Layout::Cart(CartLayout {
        zones: vec![Zone {
            color: "red".into(),
            lo: 0.001,
            hi: 0.801,
        }],
        init: CartState::default(),
    });
    let effect = ZoneEffect::Gravity(GravityChange::Increased);
    let law = Law::Zone {
        color: "red".into(),
        effect,
    };
    let form = lib
        .enumerate(HypothesisKind::Triplet)
        .find(|f| matches!(interpret(&lib, f), Ok(Claim::Implies(t)) if t.pre == Condition::InZone("red".into()) && t.post == Condition::Effect(effect)))
        .ok_or("no cartpole triplet for the red zone")?;
    let w = world(&lib, law, layout, &form, true);
    run(
        &lib,
        &w,
        vec![
            case("enter zone", PrePost, &[Right, Stop], &[0.0, 20.0]),
            case("stay out", PrePost, &[Left, Stop], &[0.0, 0.0]),
        ],
    )?;

    // Timeout: no answer, no reward, episode over.
    let lib = TemplateLibrary::builtin(EnvId::ColorSwitch);
    let w = hypverify::sample_world(&lib, KindMix::TRIPLET_ONLY, 0).map_err(|e| e.to_string())?;
    let mut ep = Episode::new(
        &lib,
        w,
        EpisodeConfig {
            horizon: 3,
            reward: RewardSpec::hyp(),
        },
    )
    .unwrap();
    let rs: Vec<f64> = (0..3)
        .map(|_| ep.step(Action::Up).unwrap().reward)
        .collect();
    ensure(rs == [0.0; 3] && ep.done() && ep.answer().is_none(), || {
        "timeout case".into()
    })?;
    checked += 1;

    // Composite pretraining return never exceeds C_pre + C_prepost.
    for env in EnvId::ALL {
        let lib = TemplateLibrary::builtin(env);
        let cfg = RunConfig {
            env,
            agent: AgentKind::Random,
            reward: PrePost,
            episodes: 200,
            ..RunConfig::default()
        };
        for i in 0..cfg.episodes {
            let ep = run_episode(&lib, &cfg, i, false).map_err(|e| e.to_string())?;
            ensure(ep.end.ret <= 20.0, || {
                format!("{env} episode {i}: return {}", ep.end.ret)
            })?;
        }
    }
    Ok(format!("{checked} cases and the C table match"))
}

fn oracle_accuracy() -> Outcome {
    const N: usize = 1000;
    let mut parts = Vec::new();
    for env in EnvId::ALL {
        let lib = TemplateLibrary::builtin(env);
        let cfg = RunConfig {
            env,
            agent: AgentKind::Oracle,
            episodes: N,
            ..RunConfig::default()
        };
        let runs: Vec<_> = (0..N)
            .into_par_iter()
            .map(|i| run_episode(&lib, &cfg, i, false))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let feasible: Vec<_> = runs.iter().filter(|r| !r.end.infeasible).collect();
        let correct = feasible.iter().filter(|r| r.end.correct).count();
        ensure(correct == feasible.len(), || {
            format!(
                "{env}: {correct}/{} correct on feasible worlds",
                feasible.len()
            )
        })?;
        let flagged = runs.len() - feasible.len();
        if env == EnvId::Pushblock {
            for r in &runs {
                let claim = interpret(&lib, &r.world.visible.form).unwrap();
                let stuck = !pushblock_decisive(&claim, &r.world);
                ensure(r.end.infeasible == stuck, || {
                    format!(
                        "pushblock episode {}: flag {} but geometry says stuck = {stuck}",
                        r.index, r.end.infeasible
                    )
                })?;
            }
        } else {
            ensure(flagged == 0, || {
                format!("{env}: {flagged} worlds flagged infeasible")
            })?;
        }
        parts.push(format!(
            "{env} {correct}/{} ({flagged} infeasible)",
            feasible.len()
        ));
    }
    Ok(format!(
        "feasible triplet worlds all correct: {}",
        parts.join(", ")
    ))
}

fn baseline_chance() -> Outcome {
    const N: usize = 10_000;
    let mut parts = Vec::new();
    for agent in [AgentKind::NoAct, AgentKind::Random] {
        for env in EnvId::ALL {
            let cfg = RunConfig {
                env,
                agent,
                episodes: N,
                mix: KindMix::EVEN,
                ..RunConfig::default()
            };
            let acc = run_batch(&cfg).map_err(|e| e.to_string())?.accuracy();
            ensure((acc - 0.5).abs() <= 0.02, || {
                format!("{agent} on {env}: accuracy {acc:.4}")
            })?;
            parts.push(format!("{agent}/{env} {acc:.4}"));
        }
    }
    Ok(format!("{N} episodes each: {}", parts.join(", ")))
}

/// Classic cart-pole step, written out from the textbook equations with a
/// semi-implicit Euler update.
fn reference_step(s: [f64; 4], force: f64, gravity: f64) -> [f64; 4] {
    let (masscart, masspole, length, tau) = (1.0, 0.1, 0.5, 0.02);
    let total_mass = masspole + masscart;
    let polemass_length = masspole * length;
    let [x, x_dot, theta, theta_dot] = s;
    let (sintheta, costheta) = theta.sin_cos();
    let temp = (force + polemass_length * theta_dot.powi(2) * sintheta) / total_mass;
    let thetaacc = (gravity * sintheta - costheta * temp)
        / (length * (4.0 / 3.0 - masspole * costheta.powi(2) / total_mass));
    let xacc = temp - polemass_length * thetaacc * costheta / total_mass;
    let x_dot = x_dot + tau * xacc;
    let theta_dot = theta_dot + tau * thetaacc;
    [x + tau * x_dot, x_dot, theta + tau * theta_dot, theta_dot]
}

fn cartpole_physics() -> Outcome {
    let params = hypverify::CartParams::classic();
    let law = Law::Zone {
        color: "red".into(),
        effect: ZoneEffect::Gravity(GravityChange::Increased),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let init: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.05..0.05));
        let mut engine = CartSnapshot::new(CartState::from_array(init), Vec::new(), &law);
        let mut reference = init;
        for _ in 0..200 {
            let action = if rng.gen_bool(0.5) {
                Action::Left
            } else {
                Action::Right
            };
            let force = if action == Action::Right { 10.0 } else { -10.0 };
            engine = engine.advance(&params, action, &law);
            reference = reference_step(reference, force, 9.8);
            for (a, b) in engine.cart.to_array().iter().zip(reference) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    ensure(worst <= 1e-9, || format!("zone-free drift {worst:e}"))?;

    let zone = Zone {
        color: "red".into(),
        lo: -0.4,
        hi: 0.4,
    };
    for _ in 0..100 {
        let s = CartState::from_array(std::array::from_fn(|_| rng.gen_range(-0.2..0.2)));
        let push = push_force(&params, Action::Right);
        let (_, g2) = modified(
            &params,
            push,
            Some(ZoneEffect::Gravity(GravityChange::Increased)),
        );
        ensure(g2 == 2.0 * params.gravity, || {
            format!("modified gravity {g2}")
        })?;
        let base = params.gravity_term(&s, params.gravity);
        ensure(params.gravity_term(&s, g2) == 2.0 * base, || {
            "g-term not doubled".into()
        })?;
        let inside = CartState { x: 0.0, ..s };
        let snap = CartSnapshot::new(inside, vec![zone.clone()], &law);
        let next = snap.advance(&params, Action::Right, &law);
        ensure(
            next.cart == params.integrate(&inside, push, 2.0 * params.gravity),
            || "zone step does not use doubled gravity".into(),
        )?;
    }
    Ok(format!(
        "max deviation {worst:.1e} over 20 x 200 steps; g-term doubles exactly"
    ))
}

fn determinism_replay() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut total = 0;
    let mut per_env = BTreeMap::new();
    for env in EnvId::ALL {
        let path = dir.path().join(format!("{env}.trace"));
        let cfg = RunConfig {
            env,
            agent: AgentKind::Random,
            episodes: 25,
            seed: 2024,
            mix: KindMix::EVEN,
            out: Some(path.clone()),
            ..RunConfig::default()
        };
        run_batch(&cfg).map_err(|e| e.to_string())?;
        let trace = Trace::load(&path).map_err(|e| e.to_string())?;
        for ep in &trace.episodes {
            replay(&trace.config, ep).map_err(|e| e.to_string())?;
            total += 1;
        }
        per_env.insert(env.name(), trace.episodes.len());
    }
    ensure(total == 100, || format!("replayed {total} episodes"))?;
    Ok(format!(
        "{total} random episodes replayed bit-exactly {per_env:?}"
    ))
}
