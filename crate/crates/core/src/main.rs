use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use pitchctl::analysis::{
    controllability_matrix, modal_analysis, numerical_rank_kind, observability_matrix, MatrixKind,
};
use pitchctl::io::{
    load_aircraft, load_scenario, model_from_aircraft, parse_interpretation, write_file,
    write_trajectory_csv, Scenario,
};
use pitchctl::plot::{line_plot, Series};
use pitchctl::report;
use pitchctl::riccati::solve_care;
use pitchctl::sim::{extract_metrics, simulate, Controller, SimConfig, Trajectory};
use pitchctl::wind::Interpretation;

#[derive(Parser)]
#[command(
    name = "pitchctl",
    about = "Longitudinal model assembly, LQR pitch control synthesis and microburst encounter simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the assembled A, B, G, C, D matrices for an aircraft file.
    Model { aircraft: PathBuf },
    /// Controllability/observability ranks and modal report.
    Analyze {
        aircraft: PathBuf,
        /// Emit the report as JSON instead of plain text.
        #[arg(long)]
        json: bool,
    },
    /// Solve the Riccati equation and report S, K and diagnostics.
    Synth {
        scenario: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run uncontrolled and controlled encounters; write CSVs, metrics, plots.
    Compare {
        scenario: PathBuf,
        /// Gust frequency reading: hertz or rad.
        #[arg(long)]
        interpretation: Option<String>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        no_plots: bool,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Model { aircraft } => cmd_model(&aircraft),
        Command::Analyze { aircraft, json } => cmd_analyze(&aircraft, json),
        Command::Synth { scenario, out_dir } => cmd_synth(&scenario, out_dir),
        Command::Compare {
            scenario,
            interpretation,
            dt,
            t_final,
            out_dir,
            no_plots,
        } => cmd_compare(&scenario, interpretation, dt, t_final, out_dir, no_plots),
    }
}

fn cmd_model(aircraft: &PathBuf) -> Result<()> {
    let file = load_aircraft(aircraft)?;
    let model = model_from_aircraft(&file)?;
    print!("{}", report::format_matrix("A", &model.a));
    print!("{}", report::format_matrix("B", &model.b));
    print!("{}", report::format_matrix("G", &model.g));
    print!("{}", report::format_matrix("C", &model.c));
    print!("{}", report::format_matrix("D", &model.d));
    Ok(())
}

#[derive(Serialize)]
struct AnalysisReport {
    controllability: pitchctl::analysis::RankReport,
    observability: pitchctl::analysis::RankReport,
    modes: Vec<pitchctl::analysis::Mode>,
}

fn cmd_analyze(aircraft: &PathBuf, json: bool) -> Result<()> {
    let file = load_aircraft(aircraft)?;
    let model = model_from_aircraft(&file)?;
    let cm = controllability_matrix(&model);
    let om = observability_matrix(&model);
    let ctrb = numerical_rank_kind(&cm, None, MatrixKind::Controllability);
    let obsv = numerical_rank_kind(&om, None, MatrixKind::Observability);
    let modes = modal_analysis(&model)?;

    let n = model.a.nrows();
    if json {
        let rep = AnalysisReport { controllability: ctrb, observability: obsv, modes };
        println!("{}", serde_json::to_string_pretty(&rep)?);
        if rep.controllability.rank < n {
            bail!("system is uncontrollable: controllability rank {} < {n}", rep.controllability.rank);
        }
        if rep.observability.rank < n {
            bail!("system is unobservable: observability rank {} < {n}", rep.observability.rank);
        }
        return Ok(());
    }

    print!("{}", report::format_rank_report(&ctrb));
    print!("{}", report::format_rank_report(&obsv));
    print!("{}", report::format_modes(&modes));

    if ctrb.rank < n {
        bail!("system is uncontrollable: controllability rank {} < {n}", ctrb.rank);
    }
    if obsv.rank < n {
        bail!("system is unobservable: observability rank {} < {n}", obsv.rank);
    }
    println!("controllability rank {}, observability rank {}", ctrb.rank, obsv.rank);
    Ok(())
}

#[derive(Serialize)]
struct SynthesisDocument<'a> {
    #[serde(serialize_with = "report::serialize_matrix")]
    q: nalgebra::DMatrix<f64>,
    #[serde(serialize_with = "report::serialize_matrix")]
    r: nalgebra::DMatrix<f64>,
    #[serde(flatten)]
    synthesis: &'a pitchctl::riccati::LqrSynthesis,
}

fn cmd_synth(scenario_path: &PathBuf, out_dir: Option<PathBuf>) -> Result<()> {
    let scenario = load_scenario(scenario_path)?;
    let syn = solve_care(&scenario.model.a, &scenario.model.b, &scenario.weights)?;

    print!("{}", report::format_synthesis(&syn));

    let doc = SynthesisDocument {
        q: scenario.weights.q.clone(),
        r: scenario.weights.r.clone(),
        synthesis: &syn,
    };
    let dir = out_dir.unwrap_or_else(|| scenario.out_dir.clone());
    let path = dir.join("synthesis.json");
    write_file(&path, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_compare(
    scenario_path: &PathBuf,
    interpretation: Option<String>,
    dt: Option<f64>,
    t_final: Option<f64>,
    out_dir: Option<PathBuf>,
    no_plots: bool,
) -> Result<()> {
    let mut scenario = load_scenario(scenario_path)?;
    if let Some(s) = interpretation {
        scenario.microburst.interpretation = parse_interpretation(&s)
            .with_context(|| format!("unknown interpretation `{s}` (use hertz or rad)"))?;
    }
    if let Some(dt) = dt {
        scenario.sim.dt = dt;
    }
    if let Some(tf) = t_final {
        scenario.sim.t_final = tf;
    }
    if let Some(dir) = out_dir {
        scenario.out_dir = dir;
    }

    let syn = solve_care(&scenario.model.a, &scenario.model.b, &scenario.weights)?;
    let base = SimConfig {
        dt: scenario.sim.dt,
        t_final: scenario.sim.t_final,
        ..Default::default()
    };
    let open = simulate(&scenario.model, &scenario.microburst, &base)?;
    let closed = simulate(
        &scenario.model,
        &scenario.microburst,
        &SimConfig { controller: Controller::Lqr(syn.k.clone()), ..base },
    )?;

    let open_metrics = extract_metrics(&open, &scenario.model, &scenario.weights)?;
    let closed_metrics = extract_metrics(&closed, &scenario.model, &scenario.weights)?;

    let table = report::format_comparison(&open_metrics, &closed_metrics);
    print!("{table}");

    let dir = scenario.out_dir.clone();
    write_trajectory_csv(&dir.join("uncontrolled.csv"), &open)?;
    write_trajectory_csv(&dir.join("controlled.csv"), &closed)?;
    write_file(&dir.join("metrics.txt"), table.as_bytes())?;

    #[derive(Serialize)]
    struct MetricsDocument<'a> {
        interpretation: Interpretation,
        uncontrolled: &'a pitchctl::sim::ResponseMetrics,
        controlled: &'a pitchctl::sim::ResponseMetrics,
        pitch_reduction_percent: f64,
        altitude_loss_reduction_percent: f64,
    }
    let doc = MetricsDocument {
        interpretation: scenario.microburst.interpretation,
        uncontrolled: &open_metrics,
        controlled: &closed_metrics,
        pitch_reduction_percent: report::pitch_reduction_percent(&open_metrics, &closed_metrics),
        altitude_loss_reduction_percent: report::altitude_reduction_percent(
            &open_metrics,
            &closed_metrics,
        ),
    };
    write_file(
        &dir.join("metrics.json"),
        serde_json::to_string_pretty(&doc)?.as_bytes(),
    )?;

    if !no_plots {
        write_plots(&scenario, &open, &closed)?;
    }
    println!("wrote outputs to {}", dir.display());
    Ok(())
}

fn write_plots(scenario: &Scenario, open: &Trajectory, closed: &Trajectory) -> Result<()> {
    let dir = &scenario.out_dir;
    let deg = |traj: &Trajectory, idx: usize| -> Vec<f64> {
        traj.states.iter().map(|x| x[idx].to_degrees()).collect()
    };

    let theta = line_plot(
        "Pitching angle",
        "t (s)",
        "theta (deg)",
        &[
            Series { label: "uncontrolled", x: &open.times, y: deg(open, 3) },
            Series { label: "controlled", x: &closed.times, y: deg(closed, 3) },
        ],
    );
    write_file(&dir.join("theta.svg"), theta.as_bytes())?;

    let altitude = line_plot(
        "Altitude deviation",
        "t (s)",
        "h (m)",
        &[
            Series {
                label: "uncontrolled",
                x: &open.times,
                y: open.states.iter().map(|x| x[4]).collect(),
            },
            Series {
                label: "controlled",
                x: &closed.times,
                y: closed.states.iter().map(|x| x[4]).collect(),
            },
        ],
    );
    write_file(&dir.join("altitude.svg"), altitude.as_bytes())?;

    let elevator = line_plot(
        "Elevator deflection",
        "t (s)",
        "delta_e (deg)",
        &[Series {
            label: "controlled",
            x: &closed.times,
            y: closed.controls.iter().map(|u| u.to_degrees()).collect(),
        }],
    );
    write_file(&dir.join("elevator.svg"), elevator.as_bytes())?;

    let gusts = line_plot(
        "Gust inputs",
        "t (s)",
        "wind (m/s)",
        &[
            Series {
                label: "u_g",
                x: &open.times,
                y: open.gusts.iter().map(|g| g.u_g).collect(),
            },
            Series {
                label: "w_g",
                x: &open.times,
                y: open.gusts.iter().map(|g| g.w_g).collect(),
            },
        ],
    );
    write_file(&dir.join("gusts.svg"), gusts.as_bytes())?;
    Ok(())
}
