use crate::experiment::{
    arch_id, check_certificates, component_names, run_experiment, write_bundle, RunOverrides,
};
use crate::metrics::compute_metrics;
use crate::registry::{find, registry, scaled};
use crate::tables::errors_csv;
use crate::HarnessError;
use certifier::{ArchKind, ArchitectureSpec};
use clap::{Args, Parser, Subcommand};
use fv_solver::{read_series, run_simulation, write_series, FrameSeries, SolverDescriptor};
use neural::{infer, load_checkpoint};
use pde_core::make_system;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "beacons",
    about = "Reference solvers, compositional neural surrogates, and \
             machine-checkable error-bound certificates for hyperbolic PDEs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Registered problem id (see `list`).
    #[arg(long)]
    problem: String,
    /// Resolution scale factor in (0, 1]; desk-scale preset is 0.25.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered problems.
    List,
    /// Run the reference solver and archive the frame series.
    Solve(CommonArgs),
    /// Train one architecture on a problem's leading frames.
    Train {
        #[command(flatten)]
        common: CommonArgs,
        /// Architecture as kind:layers:width, e.g. beacons:6:64.
        #[arg(long)]
        arch: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit (and check) the bound certificate for one architecture.
    Certify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        arch: String,
    },
    /// Emit (and check) the solver-property proof certificates.
    Prove(CommonArgs),
    /// Recompute the metric tables of a finished run from its archived
    /// frames and checkpoints, verifying they match.
    Metrics {
        /// Directory written by `run`.
        #[arg(long)]
        run: PathBuf,
    },
    /// Full pipeline: solve, train every architecture, infer, metrics,
    /// certificates, manifest; exits nonzero unless every stage succeeds
    /// and every emitted certificate replays.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Architectures as kind:layers:width; defaults to the problem's
        /// comparison set.
        #[arg(long)]
        arch: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Table format: csv or json (json writes both).
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Replay certificates (a file or a directory of them).
    Check {
        #[arg(long)]
        path: PathBuf,
    },
}

pub fn parse_arch(s: &str) -> Result<ArchitectureSpec, HarnessError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(HarnessError::BadArgument(format!(
            "architecture `{s}` is not kind:layers:width"
        )));
    }
    let kind = ArchKind::parse(parts[0])
        .ok_or_else(|| HarnessError::BadArgument(format!("unknown kind `{}`", parts[0])))?;
    let layers = parts[1]
        .parse()
        .map_err(|_| HarnessError::BadArgument(format!("bad layer count `{}`", parts[1])))?;
    let width = parts[2]
        .parse()
        .map_err(|_| HarnessError::BadArgument(format!("bad width `{}`", parts[2])))?;
    let arch = ArchitectureSpec {
        kind,
        layers,
        width,
    };
    arch.validate()?;
    Ok(arch)
}

fn lookup(id: &str) -> Result<crate::registry::ProblemSpec, HarnessError> {
    find(id).ok_or_else(|| HarnessError::UnknownProblem(id.to_string()))
}

pub fn main_entry() -> Result<(), HarnessError> {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for p in registry() {
                println!(
                    "{:20} {:12} cells {:?}, {} frames to t = {}, {} architectures{}",
                    p.id,
                    p.system.as_str(),
                    p.grid.cells,
                    p.solver.frame_count,
                    p.solver.t_end,
                    p.architectures.len(),
                    if p.conditional { ", conditional" } else { "" }
                );
            }
            Ok(())
        }
        Command::Solve(common) => {
            let spec = scaled(&lookup(&common.problem)?, common.scale);
            let sys = make_system(spec.system.as_str(), spec.params)?;
            let series =
                run_simulation(&sys, &spec.grid, &|x| spec.initial.eval(x), &spec.solver)?;
            let names = component_names(spec.system);
            write_series(&series, &names, &common.out.join("reference"))?;
            println!(
                "solved {} at {:?} cells; {} frames written to {}",
                spec.id,
                spec.grid.cells,
                series.frames.len(),
                common.out.join("reference").display()
            );
            Ok(())
        }
        Command::Train { common, arch, seed } => {
            let spec = lookup(&common.problem)?;
            let overrides = RunOverrides {
                scale: common.scale,
                seed,
                architectures: Some(vec![parse_arch(&arch)?]),
            };
            let bundle = run_experiment(&spec, &overrides)?;
            let paths = write_bundle(&bundle, &common.out, false)?;
            check_certificates(&paths)?;
            let r = &bundle.arch_results[0];
            println!(
                "trained {} on {}: raw all-frame L-inf {:.6}, certified bound {}",
                arch_id(&r.arch),
                spec.id,
                r.raw_l_inf_all,
                r.certificate
                    .operative_bound()
                    .map(|b| format!("{b:.6}"))
                    .unwrap_or_else(|| "none (no_bound)".into())
            );
            Ok(())
        }
        Command::Certify { common, arch } => {
            let spec = lookup(&common.problem)?;
            let overrides = RunOverrides {
                scale: common.scale,
                seed: 0,
                architectures: Some(vec![parse_arch(&arch)?]),
            };
            // The smoothness refinement needs solver frames, so certify
            // runs the (desk-scale) pipeline for this architecture.
            let bundle = run_experiment(&spec, &overrides)?;
            let paths = write_bundle(&bundle, &common.out, false)?;
            check_certificates(&paths)?;
            let cert = &bundle.arch_results[0].certificate;
            println!(
                "certified {} on {}: bound_smooth {:.6}, bound_nonsmooth {}",
                arch_id(&bundle.arch_results[0].arch),
                spec.id,
                cert.bound_smooth,
                cert.bound_nonsmooth
                    .map(|b| format!("{b:.6}"))
                    .unwrap_or_else(|| "no_bound".into())
            );
            Ok(())
        }
        Command::Prove(common) => {
            let spec = lookup(&common.problem)?;
            let scheme = match spec.solver.flux {
                fv_solver::FluxKind::LaxFriedrichs => prover::SchemeFlux::LaxFriedrichs,
                fv_solver::FluxKind::Roe => prover::SchemeFlux::Roe,
            };
            let mut certs = prover::prove_solver_properties(spec.system, scheme)?;
            if spec.solver.limiter != fv_solver::LimiterKind::None {
                certs.push(prover::limiter_certificates(spec.solver.limiter.as_str())?);
            }
            let dir = common.out.join("certificates");
            std::fs::create_dir_all(&dir)?;
            let mut paths = Vec::new();
            for cert in &certs {
                let path = dir.join(format!("proof_{}.json", cert.name.replace('/', "_")));
                std::fs::write(&path, prover::proof_certificate_to_json(cert))?;
                paths.push(path);
            }
            check_certificates(&paths)?;
            println!(
                "proved {} solver properties for {}; certificates in {}",
                certs.len(),
                spec.id,
                dir.display()
            );
            Ok(())
        }
        Command::Metrics { run } => replay_metrics(&run),
        Command::Run {
            common,
            arch,
            seed,
            format,
        } => {
            let spec = lookup(&common.problem)?;
            let architectures = if arch.is_empty() {
                None
            } else {
                Some(
                    arch.iter()
                        .map(|a| parse_arch(a))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            };
            let overrides = RunOverrides {
                scale: common.scale,
                seed,
                architectures,
            };
            let bundle = run_experiment(&spec, &overrides)?;
            let json_too = match format.as_str() {
                "csv" => false,
                "json" => true,
                other => {
                    return Err(HarnessError::BadArgument(format!(
                        "unknown format `{other}`"
                    )))
                }
            };
            let paths = write_bundle(&bundle, &common.out, json_too)?;
            check_certificates(&paths)?;
            for r in &bundle.arch_results {
                println!(
                    "{:18} l2_all {:.6} l_inf_all {:.6} raw {:.6} bound {} {}",
                    arch_id(&r.arch),
                    r.metrics.l2_all,
                    r.metrics.l_inf_all,
                    r.raw_l_inf_all,
                    r.certificate
                        .operative_bound()
                        .map(|b| format!("{b:.6}"))
                        .unwrap_or_else(|| "none".into()),
                    match r.bound_respected {
                        Some(true) => "respected",
                        Some(false) => "VIOLATED",
                        None => "(no bound proved)",
                    }
                );
            }
            if bundle
                .arch_results
                .iter()
                .any(|r| r.bound_respected == Some(false))
            {
                return Err(HarnessError::Stage(
                    "an observed error exceeded its certified bound".into(),
                ));
            }
            println!("artifacts in {}", common.out.display());
            Ok(())
        }
        Command::Check { path } => {
            let mut paths = Vec::new();
            if path.is_dir() {
                collect_json(&path, &mut paths)?;
            } else {
                paths.push(path);
            }
            let certs: Vec<PathBuf> = paths
                .into_iter()
                .filter(|p| {
                    p.file_name()
                        .and_then(|n| n.to_str())
                        .map(|n| n.starts_with("bound_") || n.starts_with("proof_"))
                        .unwrap_or(false)
                })
                .collect();
            if certs.is_empty() {
                return Err(HarnessError::BadArgument(
                    "no certificates found at that path".into(),
                ));
            }
            check_certificates(&certs)?;
            println!("{} certificate(s) replayed and accepted", certs.len());
            Ok(())
        }
    }
}

fn collect_json(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), HarnessError> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_json(&p, out)?;
        } else if p.extension().and_then(|e| e.to_str()) == Some("json") {
            out.push(p);
        }
    }
    Ok(())
}

/// Recompute the error table of a finished run from its archived frames and
/// checkpoints and verify it matches the stored table byte for byte.
fn replay_metrics(run_dir: &Path) -> Result<(), HarnessError> {
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("run_manifest.json"))?)
            .map_err(|e| HarnessError::Stage(format!("run_manifest.json: {e}")))?;
    let cutoff = manifest["train_cutoff"]
        .as_u64()
        .ok_or_else(|| HarnessError::Stage("manifest missing train_cutoff".into()))? as usize;
    let (reference, _) = read_series(&run_dir.join("reference"))?;

    let mut rows = Vec::new();
    let arch_list = manifest["architectures"]
        .as_array()
        .ok_or_else(|| HarnessError::Stage("manifest missing architectures".into()))?;
    for entry in arch_list {
        let id = entry["id"]
            .as_str()
            .ok_or_else(|| HarnessError::Stage("bad architecture entry".into()))?;
        let (net, _) = load_checkpoint(&run_dir.join("checkpoints").join(format!("{id}.json")))?;
        let predicted = reinfer(&reference, cutoff, &net);
        rows.push(compute_metrics(&reference, &predicted, cutoff, 0, id)?);
    }
    let recomputed = errors_csv(&rows.iter().collect::<Vec<_>>());
    let stored = std::fs::read_to_string(run_dir.join("errors.csv"))?;
    if recomputed != stored {
        return Err(HarnessError::Stage(
            "recomputed metrics differ from the stored table".into(),
        ));
    }
    println!("metrics replayed from frames + checkpoints: tables match");
    Ok(())
}

fn reinfer(reference: &FrameSeries, cutoff: usize, net: &neural::DeepNet) -> FrameSeries {
    let grid = reference.grid().clone();
    let m = reference.m();
    let (nx, ny) = reference.frames[0].interior_extent();
    let times: Vec<f64> = reference.times[cutoff..].to_vec();
    let mut frames = Vec::new();
    for &t in &times {
        let mut flat = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                flat.push(t);
                flat.push(grid.center(0, ix));
                if grid.dim() == 2 {
                    flat.push(grid.center(1, iy));
                }
            }
        }
        let outs = infer(net, &flat);
        let mut field = fv_solver::StateField::zeros(grid.clone(), m);
        let mut it = outs.into_iter();
        for iy in 0..ny {
            for ix in 0..nx {
                field.set_interior(ix, iy, &it.next().unwrap());
            }
        }
        frames.push(field);
    }
    FrameSeries {
        times,
        frames,
        provenance: SolverDescriptor {
            flux: reference.provenance.flux,
            limiter: reference.provenance.limiter,
            cfl: reference.provenance.cfl,
            resolution: grid.cells.clone(),
        },
    }
}
