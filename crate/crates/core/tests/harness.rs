use hypverify::agents::AgentKind;
use hypverify::harness::{
    crosstab, replay, run_batch, run_episode, Outcome, RunConfig, Trace, TRACE_HEADER,
};
use hypverify::{EnvId, Error, KindMix, RewardKind, TemplateLibrary};

fn config(env: EnvId, agent: AgentKind, episodes: usize) -> RunConfig {
    RunConfig {
        env,
        agent,
        episodes,
        seed: 11,
        workers: Some(2),
        ..RunConfig::default()
    }
}

#[test]
fn trace_round_trips_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    for env in EnvId::ALL {
        let path = dir.path().join(format!("{env}.trace"));
        let cfg = RunConfig {
            out: Some(path.clone()),
            ..config(env, AgentKind::Random, 12)
        };
        let report = run_batch(&cfg).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next(), Some(TRACE_HEADER));

        let trace = Trace::load(&path).unwrap();
        assert_eq!(trace.config, cfg);
        assert_eq!(trace.episodes.len(), 12);
        let indices: Vec<usize> = trace.episodes.iter().map(|e| e.index).collect();
        assert_eq!(indices, (0..12).collect::<Vec<_>>());

        let again = crosstab(trace.episodes.iter().map(Outcome::from), 0).unwrap();
        assert_eq!(again, report);
        for ep in &trace.episodes {
            let summary = replay(&trace.config, ep).unwrap();
            assert_eq!(summary.steps, ep.end.steps);
            let sum: f64 = ep.steps.iter().map(|s| s.reward).sum();
            assert_eq!(sum, ep.end.ret);
        }
    }
}

#[test]
fn tampered_reward_fails_replay() {
    let lib = TemplateLibrary::builtin(EnvId::ColorSwitch);
    let cfg = config(EnvId::ColorSwitch, AgentKind::Random, 1);
    let mut ep = run_episode(&lib, &cfg, 0, true).unwrap();
    replay(&cfg, &ep).unwrap();
    let last = ep.steps.last_mut().unwrap();
    last.reward += 1e-12;
    assert!(matches!(replay(&cfg, &ep), Err(Error::Trace(_))));
}

#[test]
fn batch_is_deterministic_across_worker_counts() {
    let mut cfg = config(EnvId::Crafting, AgentKind::Oracle, 40);
    cfg.mix = KindMix::EVEN;
    let a = run_batch(&cfg).unwrap();
    cfg.workers = Some(1);
    let b = run_batch(&cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.is_consistent());
    assert_eq!(a.overall.count, 40);
}

#[test]
fn oracle_crafting_triplets_are_all_correct() {
    let report = run_batch(&config(EnvId::Crafting, AgentKind::Oracle, 200)).unwrap();
    assert_eq!(report.feasible.correct, report.feasible.count);
    assert!(report.by_label["true"].count > 0 && report.by_label["false"].count > 0);
}

#[test]
fn slot_tables_are_keyed_by_value() {
    let report = run_batch(&config(EnvId::ColorSwitch, AgentKind::NoAct, 300)).unwrap();
    let colors = &report.by_slot["COLOR"];
    for c in ["blue", "red", "green", "black"] {
        assert!(colors.contains_key(c), "{c}");
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let cfg = RunConfig {
        episodes: 0,
        ..RunConfig::default()
    };
    assert!(matches!(run_batch(&cfg), Err(Error::Config(_))));
    let cfg = RunConfig {
        reward: RewardKind::PrePost,
        mix: KindMix::EVEN,
        ..RunConfig::default()
    };
    assert!(matches!(run_batch(&cfg), Err(Error::Config(_))));
}

#[test]
fn pretraining_rewards_run_end_to_end() {
    let cfg = RunConfig {
        reward: RewardKind::PrePost,
        ..config(EnvId::Crafting, AgentKind::Oracle, 20)
    };
    run_batch(&cfg).unwrap();
}
