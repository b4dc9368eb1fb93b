use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use distroute::layout::Placement;
use distroute::{ArchSpec, Layout, RouteStatus};
use distroute_cli::opts::ParamArgs;
use distroute_cli::{
    ablation_configs, ablation_rows, ablation_table, cost_sweep, flagged_gmean, records_table, run_suite, summarize,
    summary_table, sweep_table, Config, Device, RunRecord, Workload, DEFAULT_C_TELE,
};

#[derive(Parser)]
#[command(name = "distroute", version, about = "Route circuits onto multi-core grid devices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Inputs {
    /// Device, e.g. `hgrid:2x3:4x4` or `bgrid:2x2:4x4`.
    #[arg(long)]
    arch: String,
    /// Generated circuit (`ghz:25`, `qft:64`, `graphstate:30`, `random:n:cx[:seed]`). Repeatable.
    #[arg(long)]
    circuit: Vec<String>,
    /// OpenQASM 2 file. Repeatable.
    #[arg(long)]
    qasm: Vec<PathBuf>,
    /// Layout seeds 0..N per circuit.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// Write every run record here as a JSON array.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Subcommand)]
enum Cmd {
    /// Route each circuit once per seed and report best-of-seeds.
    Route {
        #[command(flatten)]
        inputs: Inputs,
        /// Fixed initial placement, `[{logical, core, slot}]`.
        #[arg(long)]
        layout_file: Option<PathBuf>,
        /// Write the op stream of the first run as text.
        #[arg(long)]
        program: Option<PathBuf>,
    },
    /// Rerun the suite with one mechanism disabled per row.
    Ablate {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Recompute costs of stored records over a range of teleport costs.
    Sweep {
        /// JSON array written by `route --json`.
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_C_TELE)]
        c_tele: Vec<u32>,
    },
    /// Print a device description as JSON.
    Arch {
        spec: String,
        #[arg(long, default_value_t = 10)]
        w_link: u32,
    },
}

fn workloads(inputs: &Inputs) -> Result<Vec<Workload>, String> {
    let mut out = Vec::new();
    for c in &inputs.circuit {
        out.push(Workload::generated(c)?);
    }
    for q in &inputs.qasm {
        out.push(Workload::from_qasm(q)?);
    }
    if out.is_empty() {
        return Err("give at least one --circuit or --qasm".into());
    }
    Ok(out)
}

fn write_json(path: &Option<PathBuf>, records: &[RunRecord]) -> Result<(), String> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(records).map_err(|e| e.to_string())?;
        std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.cmd {
        Cmd::Route { inputs, layout_file, program } => {
            let spec: ArchSpec = inputs.arch.parse().map_err(|e| format!("{e}"))?;
            let works = workloads(&inputs)?;
            let params = inputs.params.params()?;
            let fixed = match &layout_file {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                    let entries: Vec<Placement> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?;
                    let dev = Device::new(spec, params.w_link)?;
                    Some(Layout::from_placements(&dev.arch, &entries).map_err(|e| format!("{e}"))?)
                }
                None => None,
            };
            let configs = [Config::new("full", params, inputs.params.layout())];
            let seeds: Vec<u64> = (0..inputs.seeds).collect();
            let runs = run_suite(&works, spec, &seeds, &configs, fixed.as_ref(), inputs.threads)?;
            if let (Some(p), Some(first)) = (&program, runs.first()) {
                let dag = distroute::CircuitDag::new(works[0].gates.clone(), works[0].n_logical).map_err(|e| format!("{e}"))?;
                std::fs::write(p, first.program.to_text(&dag)).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            let records: Vec<RunRecord> = runs.into_iter().map(|r| r.record).collect();
            print!("{}", records_table(&records));
            println!();
            print!("{}", summary_table(&summarize(&records)));
            println!();
            print!("{}", sweep_table(&cost_sweep(&records, &DEFAULT_C_TELE)));
            write_json(&inputs.json, &records)?;
            Ok(records.iter().all(|r| r.valid || r.status == RouteStatus::Aborted))
        }
        Cmd::Ablate { inputs } => {
            let spec: ArchSpec = inputs.arch.parse().map_err(|e| format!("{e}"))?;
            let works = workloads(&inputs)?;
            let configs = ablation_configs(&inputs.params.params()?, inputs.params.layout());
            let seeds: Vec<u64> = (0..inputs.seeds).collect();
            let runs = run_suite(&works, spec, &seeds, &configs, None, inputs.threads)?;
            let records: Vec<RunRecord> = runs.into_iter().map(|r| r.record).collect();
            print!("{}", ablation_table(&ablation_rows(&records)));
            for name in ["full", "no_relief"] {
                if let Some(g) = flagged_gmean(&records, name) {
                    println!("gmean EPR over runs with a flagged core [{name}] = {g:.2}");
                }
            }
            write_json(&inputs.json, &records)?;
            Ok(records.iter().all(|r| r.valid || r.status == RouteStatus::Aborted))
        }
        Cmd::Sweep { records, c_tele } => {
            let text = std::fs::read_to_string(&records).map_err(|e| format!("{}: {e}", records.display()))?;
            let recs: Vec<RunRecord> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", records.display()))?;
            print!("{}", sweep_table(&cost_sweep(&recs, &c_tele)));
            Ok(true)
        }
        Cmd::Arch { spec, w_link } => {
            let spec: ArchSpec = spec.parse().map_err(|e| format!("{e}"))?;
            println!("{}", Device::new(spec, w_link)?.arch.to_json());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some runs failed validation");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
