use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crowdnav::error::{Error, Result};
use crowdnav::io::{render_svg, resolve_scenario, write_report, write_trajectory};
use crowdnav::sim::{builtin_scenarios, run_batch, BatchSummary};
use crowdnav::{PlannerKind, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "crowdnav",
    version,
    about = "Seeded crowd-navigation scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario over consecutive seeds and write logs and a report.
    Run {
        /// Builtin scenario name or path to a JSON scenario file.
        #[arg(long)]
        scenario: String,
        /// Overrides the planner named in the scenario.
        #[arg(long)]
        planner: Option<PlannerKind>,
        /// Number of seeds, starting at the scenario's seed.
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also plot every run as SVG.
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        sim_dt: Option<f64>,
    },
    /// Print the builtin scenarios.
    ListScenarios,
    /// Run both planners on a scenario and print their metrics side by side.
    Compare {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        sim_dt: Option<f64>,
    },
}

fn load(
    scenario: &str,
    planner: Option<PlannerKind>,
    sim_dt: Option<f64>,
) -> Result<ScenarioConfig> {
    let mut cfg = resolve_scenario(scenario)?;
    if let Some(kind) = planner {
        cfg.planner.kind = kind;
    }
    if let Some(dt) = sim_dt {
        cfg.sim_dt = dt;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &ScenarioConfig, seeds: usize, out: &Path, svg: bool) -> Result<()> {
    let (runs, summary) = run_batch(cfg, seeds)?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let stem = format!("{}_{}", cfg.name, cfg.planner.kind);
    for r in &runs {
        write_trajectory(r, out.join(format!("{stem}_seed{}.csv", r.seed)))?;
        if svg {
            render_svg(r, out.join(format!("{stem}_seed{}.svg", r.seed)))?;
        }
    }
    write_report(cfg, &runs, out.join(format!("{stem}_report.json")))?;
    print_summary(&summary);
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
}

fn print_summary(s: &BatchSummary) {
    println!(
        "{} [{}] runs={} success={:.2} freezing={:.2} collision={:.2} timeout={:.2} time={} speed={} pf={:.3}",
        s.scenario,
        s.planner,
        s.seeds.len(),
        s.success_rate,
        s.freezing_rate,
        s.collision_rate,
        s.timeout_rate,
        fmt_opt(s.mean_time),
        fmt_opt(s.avg_velocity),
        s.mean_pf
    );
}

fn compare(cfg: &ScenarioConfig, seeds: usize) -> Result<()> {
    let (_, base) = run_batch(&cfg.clone().with_planner(PlannerKind::Baseline), seeds)?;
    let (_, hyb) = run_batch(&cfg.clone().with_planner(PlannerKind::Hybrid), seeds)?;
    println!("{} over {seeds} seeds", cfg.name);
    println!(
        "{:<16}{:>10}{:>10}{:>10}",
        "metric", "baseline", "hybrid", "delta"
    );
    let row = |name: &str, a: Option<f64>, b: Option<f64>| {
        let delta = a.zip(b).map(|(a, b)| b - a);
        println!(
            "{name:<16}{:>10}{:>10}{:>10}",
            fmt_opt(a),
            fmt_opt(b),
            fmt_opt(delta)
        );
    };
    row(
        "success_rate",
        Some(base.success_rate),
        Some(hyb.success_rate),
    );
    row(
        "freezing_rate",
        Some(base.freezing_rate),
        Some(hyb.freezing_rate),
    );
    row(
        "collision_rate",
        Some(base.collision_rate),
        Some(hyb.collision_rate),
    );
    row("mean_time", base.mean_time, hyb.mean_time);
    row("avg_velocity", base.avg_velocity, hyb.avg_velocity);
    row("mean_pf", Some(base.mean_pf), Some(hyb.mean_pf));
    Ok(())
}

fn list() {
    for s in builtin_scenarios() {
        let fixed = s.pedestrians.iter().filter(|p| p.fixed).count();
        let walkers = s.pedestrians.len() - fixed + s.random_crowd.as_ref().map_or(0, |c| c.count);
        println!("{:<14} pedestrians={walkers:<3} wall_discs={fixed}", s.name);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            planner,
            seeds,
            out,
            svg,
            sim_dt,
        } => {
            let cfg = load(&scenario, planner, sim_dt)?;
            run(&cfg, seeds.unwrap_or(cfg.runs), &out, svg)
        }
        Command::ListScenarios => {
            list();
            Ok(())
        }
        Command::Compare {
            scenario,
            seeds,
            sim_dt,
        } => {
            let cfg = load(&scenario, None, sim_dt)?;
            compare(&cfg, seeds.unwrap_or(cfg.runs))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
