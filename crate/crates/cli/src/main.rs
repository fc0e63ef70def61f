//! semnoma: rate-region boundaries and optimal opportunistic SemCom/BitCom
//! policies for a two-user uplink NOMA system, from the command line.

mod config;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use config::RunConfig;
use semnoma_core::csvfmt::{line, sig12};
use semnoma_core::figures::{run_figure, FigureId};
use semnoma_core::link::{sample_states, static_state, FadingState, SystemParams};
use semnoma_core::oracle::{brute_force_oracle, OracleProblem, QuantSpec};
use semnoma_core::region::{sweep_boundary, RegionObjective};
use semnoma_core::schemes::{
    solve_scheme, ModePolicy, PowerPolicy, SchemeConfig, SchemeId, SchemeSolution, TimePolicy,
};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "semnoma",
    version,
    about = "Semantics-empowered two-user uplink NOMA: rate regions and opportunistic policies"
)]
struct Cli {
    /// Configuration file (TOML); built-in defaults are used when omitted.
    #[arg(long, global = true, env = "SEMNOMA_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory for CSV files and manifests.
    #[arg(long, global = true, env = "SEMNOMA_OUT", default_value = "out")]
    out: PathBuf,
    /// Override monte_carlo.seed.
    #[arg(long, global = true, env = "SEMNOMA_SEED")]
    seed: Option<u64>,
    /// Override monte_carlo.state_count.
    #[arg(long, global = true, env = "SEMNOMA_STATES")]
    states: Option<usize>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, env = "SEMNOMA_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    S1,
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Opportunistic,
    SemcomOnly,
    BitcomOnly,
}

#[derive(Clone, Copy, ValueEnum)]
enum KnobArg {
    Continuous,
    OnOff,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the static-channel rate-region boundary for both objectives.
    Region,
    /// Solve one scheme over sampled fading states and write the policy.
    Solve {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Opportunistic)]
        mode: ModeArg,
        /// Power control (scenario 2 only; scenario 1 is always on-off).
        #[arg(long, value_enum, default_value_t = KnobArg::Continuous)]
        power: KnobArg,
        /// Time scheduling (scenario 2 only; scenario 1 is always on-off).
        #[arg(long, value_enum, default_value_t = KnobArg::Continuous)]
        time: KnobArg,
    },
    /// Emit figure data (CSV) plus a reproducibility manifest.
    Figure {
        /// region|fig2, s_vs_rbar_s1|fig5, s_vs_p0_s1|fig6, time_fractions|fig7,
        /// s_vs_rbar_s2|fig8, s_vs_pavg_s2|svp, rm_comparison|fig9, or `all`.
        id: String,
    },
    /// Compare a solver against the brute-force oracle at desk scale.
    OracleCheck {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[arg(long, default_value_t = 16)]
        instance_states: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("cannot configure the thread pool")?;
        }
    }

    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.monte_carlo.seed = seed;
    }
    if let Some(states) = cli.states {
        if states == 0 {
            bail!("monte_carlo.state_count: must be >= 1");
        }
        cfg.monte_carlo.state_count = states;
    }
    let params = cfg.to_params()?;
    fs::create_dir_all(&cli.out)
        .with_context(|| format!("cannot create output directory {}", cli.out.display()))?;

    match &cli.command {
        Command::Region => cmd_region(&cli.out, &cfg, &params),
        Command::Solve { scenario, mode, power, time } => {
            cmd_solve(&cli.out, &cfg, &params, *scenario, *mode, *power, *time)
        }
        Command::Figure { id } => cmd_figure(&cli.out, &cfg, &params, id),
        Command::OracleCheck { scenario, instances, instance_states } => {
            cmd_oracle_check(&cfg, &params, *scenario, *instances, *instance_states)
        }
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&line(row));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn cmd_region(out: &Path, cfg: &RunConfig, params: &SystemParams) -> Result<()> {
    let st = static_state(params);
    for objective in [RegionObjective::SemCom, RegionObjective::BitComEquivalent] {
        let spec = cfg.region_spec(objective)?;
        let points = sweep_boundary(&spec, &st, params)?;
        let rows: Vec<Vec<String>> = points
            .iter()
            .map(|p| {
                vec![
                    sig12(p.r_bar),
                    sig12(p.s),
                    sig12(p.p_f),
                    sig12(p.alpha_f),
                    objective.name().to_string(),
                ]
            })
            .collect();
        let path = out.join(format!("region_{}.csv", objective.name()));
        write_csv(&path, &["r_bar", "s", "p_f", "alpha_f", "objective"], &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn scheme_from_args(
    scenario: ScenarioArg,
    mode: ModeArg,
    power: KnobArg,
    time: KnobArg,
) -> Result<SchemeId> {
    let mode_policy = match mode {
        ModeArg::Opportunistic => ModePolicy::Opportunistic,
        ModeArg::SemcomOnly => ModePolicy::SemComOnly,
        ModeArg::BitcomOnly => ModePolicy::BitComOnly,
    };
    let knob = |k: KnobArg| match k {
        KnobArg::Continuous => (PowerPolicy::Continuous, TimePolicy::Continuous),
        KnobArg::OnOff => (PowerPolicy::OnOff, TimePolicy::OnOff),
    };
    Ok(match scenario {
        ScenarioArg::S1 => SchemeId {
            mode_policy,
            power_policy: PowerPolicy::OnOff,
            time_policy: TimePolicy::OnOff,
        },
        ScenarioArg::S2 => SchemeId {
            mode_policy,
            power_policy: knob(power).0,
            time_policy: knob(time).1,
        },
    })
}

fn cmd_solve(
    out: &Path,
    cfg: &RunConfig,
    params: &SystemParams,
    scenario: ScenarioArg,
    mode: ModeArg,
    power: KnobArg,
    time: KnobArg,
) -> Result<()> {
    let states = sample_states(cfg.monte_carlo.seed, cfg.monte_carlo.state_count, params)
        .map_err(|e| anyhow!("monte_carlo: {e}"))?;
    let scheme = scheme_from_args(scenario, mode, power, time)?;
    let scheme_cfg = match scenario {
        ScenarioArg::S1 => SchemeConfig::OnOff(cfg.onoff_config()?),
        ScenarioArg::S2 => SchemeConfig::Continuous(cfg.continuous_config()?),
    };
    let (solution, eval) = solve_scheme(&scheme, &states, &scheme_cfg, params)?;

    let tag = match scenario {
        ScenarioArg::S1 => "s1",
        ScenarioArg::S2 => "s2",
    };
    let states_path = out.join(format!("solve_{tag}_states.csv"));
    let rows = per_state_rows(&solution, &states, params);
    write_csv(&states_path, &["index", "rho", "alpha", "p", "r", "s"], &rows)?;

    let summary_path = out.join(format!("solve_{tag}_summary.csv"));
    match &solution {
        SchemeSolution::OnOff(s) => {
            write_csv(
                &summary_path,
                &["lambda_star", "ergodic_s", "ergodic_r", "avg_power", "off", "bitcom", "semcom"],
                &[vec![
                    sig12(s.lambda_star),
                    sig12(s.ergodic_s),
                    sig12(s.ergodic_r),
                    sig12(eval.avg_power),
                    sig12(eval.time_off),
                    sig12(eval.time_bitcom),
                    sig12(eval.time_semcom),
                ]],
            )?;
        }
        SchemeSolution::Continuous(s) => {
            write_csv(
                &summary_path,
                &[
                    "beta", "delta", "g2", "primal", "gap", "ergodic_r", "avg_power",
                    "fractional_states", "converged",
                ],
                &[vec![
                    sig12(s.duals.beta),
                    sig12(s.duals.delta),
                    sig12(s.dual_value),
                    sig12(s.ergodic_s),
                    sig12(s.dual_gap),
                    sig12(s.ergodic_r),
                    sig12(s.avg_power),
                    s.fractional_states.to_string(),
                    s.ellipsoid_converged.to_string(),
                ]],
            )?;
        }
    }
    println!("wrote {}", states_path.display());
    println!("wrote {}", summary_path.display());
    println!(
        "ergodic_s = {:.6}, ergodic_r = {:.6}, avg_power = {:.6}",
        eval.ergodic_s, eval.ergodic_r, eval.avg_power
    );
    Ok(())
}

fn per_state_rows(
    solution: &SchemeSolution,
    states: &[FadingState],
    params: &SystemParams,
) -> Vec<Vec<String>> {
    solution
        .decisions()
        .iter()
        .zip(states)
        .map(|(dec, st)| {
            let r = semnoma_core::link::n_user_bit_rate(dec.alpha, dec.power, st, params);
            let s = semnoma_core::link::f_user_semantic_rate(dec, st, params);
            vec![
                st.index.to_string(),
                if dec.use_semcom { "1" } else { "0" }.to_string(),
                sig12(dec.alpha),
                sig12(dec.power),
                sig12(r),
                sig12(s),
            ]
        })
        .collect()
}

fn cmd_figure(out: &Path, cfg: &RunConfig, params: &SystemParams, id: &str) -> Result<()> {
    let figures: Vec<FigureId> = if id == "all" {
        FigureId::all().to_vec()
    } else {
        vec![FigureId::parse(id).ok_or_else(|| anyhow!("unknown figure id: {id}"))?]
    };
    let fig_cfg = cfg.figure_config();
    for fig in figures {
        let data = run_figure(fig, &fig_cfg, params)?;
        let csv_path = out.join(format!("{}.csv", data.name));
        write_csv(&csv_path, &data.header, &data.rows)?;
        // The manifest records the full resolved configuration; a standalone
        // copy of it can be fed back through --config to reproduce the CSV
        // byte for byte.
        let config_name = format!("{}_config.toml", data.name);
        fs::write(out.join(&config_name), cfg.to_toml()?)
            .with_context(|| format!("cannot write {config_name}"))?;
        let manifest = config::Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            figure: data.name.to_string(),
            seed: cfg.monte_carlo.seed,
            state_count: cfg.monte_carlo.state_count,
            resolved_config: config_name,
            config: cfg.clone(),
        };
        let manifest_path = out.join(format!("{}_manifest.toml", data.name));
        fs::write(&manifest_path, manifest.to_toml()?)
            .with_context(|| format!("cannot write {}", manifest_path.display()))?;
        println!("wrote {}", csv_path.display());
        println!("wrote {}", manifest_path.display());
    }
    Ok(())
}

fn cmd_oracle_check(
    cfg: &RunConfig,
    params: &SystemParams,
    scenario: ScenarioArg,
    instances: usize,
    instance_states: usize,
) -> Result<()> {
    let quant = QuantSpec::default();
    let mut worst: f64 = 0.0;
    for i in 0..instances {
        let seed = cfg.monte_carlo.seed.wrapping_add(i as u64);
        let states = sample_states(seed, instance_states, params)
            .map_err(|e| anyhow!("monte_carlo: {e}"))?;
        let ceiling = states.iter().map(|s| params.rate_off(s.near_gain)).sum::<f64>()
            / states.len() as f64;
        let (solver_value, oracle, tolerance) = match scenario {
            ScenarioArg::S1 => {
                let mut oc = cfg.onoff_config()?;
                oc.r_bar = 0.5 * ceiling;
                let sol = semnoma_core::onoff::solve_s1(&states, &oc, params)?;
                let report =
                    brute_force_oracle(&states, &quant, &OracleProblem::OnOff(&oc), params)?;
                (sol.ergodic_s, report, 0.01)
            }
            ScenarioArg::S2 => {
                let mut cc = cfg.continuous_config()?;
                cc.r_bar = 0.5 * ceiling;
                let sol = semnoma_core::continuous::solve_s2(&states, &cc, params)?;
                let report =
                    brute_force_oracle(&states, &quant, &OracleProblem::Continuous(&cc), params)?;
                (sol.ergodic_s, report, 0.02)
            }
        };
        if !oracle.feasible_found {
            bail!("instance {i}: oracle found no feasible quantized policy");
        }
        let rel = (solver_value - oracle.best_primal) / oracle.best_primal.abs().max(1e-12);
        worst = worst.max(rel.abs());
        println!(
            "instance {i}: solver = {solver_value:.8}, oracle = {:.8} (dual bound {:.8}), rel = {rel:+.3e}",
            oracle.best_primal, oracle.best_dual_bound
        );
        if rel.abs() > tolerance {
            bail!("instance {i}: solver and oracle disagree by {:.3}% (> {:.0}%)",
                rel.abs() * 100.0, tolerance * 100.0);
        }
    }
    println!("oracle check passed: worst relative difference {:.3e}", worst);
    Ok(())
}
