use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hypverify::agents::AgentKind;
use hypverify::harness::{
    corpus_check, crosstab, replay, run_batch, CrosstabReport, Outcome, RunConfig, Trace,
};
use hypverify::{EnvId, KindMix, RewardKind, TemplateLibrary};

#[derive(Parser)]
#[command(
    name = "hypverify",
    version,
    about = "Run and inspect hypothesis-verification episodes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of episodes and print the accuracy report.
    Run(RunArgs),
    /// Tabulate accuracy from a trace file.
    Crosstab {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        min_cell_count: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute episodes from a trace and check them bit for bit.
    Replay {
        #[arg(long = "in")]
        input: PathBuf,
        /// Episode index; every episode when omitted.
        #[arg(long)]
        episode: Option<usize>,
    },
    /// Check that every hypothesis of a corpus parses back uniquely.
    CorpusCheck {
        #[arg(long)]
        env: EnvId,
        /// Corpus file to check instead of the built-in one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with run settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    env: Option<EnvId>,
    #[arg(long)]
    agent: Option<AgentKind>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reward: Option<RewardKind>,
    /// Reward constant C.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// triplet, even, nontriplet or a triplet fraction.
    #[arg(long)]
    mix: Option<KindMix>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Trace file to write.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    min_cell_count: Option<u64>,
    /// Leave observations out of step records.
    #[arg(long)]
    no_obs: bool,
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                RunConfig::load(path).with_context(|| format!("reading {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        set!(env, agent, episodes, seed, reward, k, mix, min_cell_count);
        if self.c.is_some() {
            cfg.c = self.c;
        }
        if self.horizon.is_some() {
            cfg.horizon = self.horizon;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.no_obs {
            cfg.trace_obs = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_report(report: &CrosstabReport, json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        print!("{}", report.render());
        let small = report.undersized();
        if !small.is_empty() {
            println!(
                "{} cells below the minimum of {}",
                small.len(),
                report.min_cell_count
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let report = run_batch(&cfg)?;
            print_report(&report, args.json)?;
            if let Some(out) = &cfg.out {
                eprintln!("trace written to {}", out.display());
            }
        }
        Command::Crosstab {
            input,
            min_cell_count,
            json,
        } => {
            let trace =
                Trace::load(&input).with_context(|| format!("reading {}", input.display()))?;
            let min = min_cell_count.unwrap_or(trace.config.min_cell_count);
            let report = crosstab(trace.episodes.iter().map(Outcome::from), min)?;
            print_report(&report, json)?;
        }
        Command::Replay { input, episode } => {
            let trace =
                Trace::load(&input).with_context(|| format!("reading {}", input.display()))?;
            let episodes = match episode {
                Some(i) => vec![trace.episode(i)?],
                None => trace.episodes.iter().collect(),
            };
            if episodes.is_empty() {
                bail!("trace has no episodes");
            }
            for ep in episodes {
                let s = replay(&trace.config, ep)?;
                println!(
                    "episode {}: ok, {} steps, return {}",
                    s.index, s.steps, s.total_reward
                );
            }
        }
        Command::CorpusCheck { env, corpus } => {
            let lib = match corpus {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    TemplateLibrary::load(env, &text)?
                }
                None => TemplateLibrary::builtin(env),
            };
            let report = corpus_check(&lib)?;
            println!("{}: vocabulary {} tokens", report.env, report.vocabulary);
            for (kind, n) in &report.instantiations {
                println!("  {kind:<8} {n} instantiations ok");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
