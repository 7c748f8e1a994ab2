use crate::metrics::{compute_metrics, raw_l_inf_all, MetricsRow};
use crate::registry::{scaled, ProblemSpec};
use crate::HarnessError;
use certifier::{
    bound_certificate_to_json, certify, ArchKind, ArchitectureSpec, BoundCertificate, ProblemInfo,
};
use characteristics::{
    classify_scalar, refine_with_frames, wave_blowup_times, Classification, InitialData,
    SmoothnessReport, N_CAP,
};
use fv_solver::{run_simulation, write_series, FrameSeries, SolverDescriptor};
use neural::{
    infer, save_checkpoint, train_beacons, train_plain, unnormalize_from_targets, AnalyticMap,
    BeaconsSpec, DeepNet, TrainConfig,
};
use pde_core::{make_system, PdeSystem, SystemName};
use prover::{
    check_certificate_json, limiter_certificates, proof_certificate_to_json,
    prove_solver_properties, ProofCertificate, SchemeFlux,
};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct RunOverrides {
    pub scale: f64,
    pub seed: u64,
    pub architectures: Option<Vec<ArchitectureSpec>>,
}

impl Default for RunOverrides {
    fn default() -> Self {
        RunOverrides {
            scale: 1.0,
            seed: 0,
            architectures: None,
        }
    }
}

pub fn arch_id(arch: &ArchitectureSpec) -> String {
    format!("{}-{}x{}", arch.kind.as_str(), arch.layers, arch.width)
}

#[derive(Debug)]
pub struct ArchResult {
    pub arch: ArchitectureSpec,
    pub net: DeepNet,
    pub metrics: MetricsRow,
    /// Unnormalized all-frame L-inf error of the headline component.
    pub raw_l_inf_all: f64,
    pub certificate: BoundCertificate,
    /// observed <= operative certificate bound; None when the certificate
    /// proves no bound for the non-smooth parts.
    pub bound_respected: Option<bool>,
}

#[derive(Debug)]
pub struct ExperimentBundle {
    pub problem: ProblemSpec,
    pub seed: u64,
    pub reference: FrameSeries,
    pub train_cutoff: usize,
    pub report: SmoothnessReport,
    pub arch_results: Vec<ArchResult>,
    pub solver_certificates: Vec<ProofCertificate>,
}

pub fn component_names(system: SystemName) -> Vec<&'static str> {
    match system {
        SystemName::Euler1d => vec!["rho", "mom_x", "energy"],
        SystemName::Euler2d => vec!["rho", "mom_x", "mom_y", "energy"],
        _ => vec!["u"],
    }
}

/// Smoothness report for an m > 1 system: per-wave Riccati blow-up times
/// plus jump detection on the initial data.
fn system_report(
    sys: &PdeSystem,
    initial: &InitialData,
) -> Result<SmoothnessReport, HarnessError> {
    let waves = wave_blowup_times(sys, initial)?;
    let jumps = match initial {
        InitialData::OneD(profiles) => profiles
            .iter()
            .map(|p| {
                (0..p.breakpoints.len())
                    .filter(|&bi| {
                        let (l, r) = p.one_sided(bi, 0);
                        (l - r).abs() > 1e-9 * (1.0f64.max(l.abs()).max(r.abs()))
                    })
                    .count()
            })
            .max()
            .unwrap_or(0),
        InitialData::TwoD(profiles) => {
            if profiles.iter().any(|p| p.has_jump()) {
                1
            } else {
                0
            }
        }
    };
    let finite_blowup = waves.iter().any(|w| w.t_inf.is_finite());
    let classification = if jumps > 0 {
        Classification::DiscontinuousFromStart
    } else if finite_blowup {
        Classification::BlowupAt
    } else {
        Classification::SmoothForever
    };
    Ok(SmoothnessReport {
        classification,
        n_global: if jumps > 0 { 0 } else { N_CAP },
        n_smooth_part: N_CAP,
        t_inf: waves,
        discontinuity_count_at_t0: jumps,
        notes: vec![
            "system classification from per-wave Riccati coefficients".to_string(),
        ],
    })
}

/// Training samples: cell centers of the leading frames, subsampled by the
/// problem's spatial stride, with all m conserved components as targets.
fn training_data(
    reference: &FrameSeries,
    cutoff: usize,
    stride: usize,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let grid = reference.grid();
    let m = reference.m();
    let (nx, ny) = reference.frames[0].interior_extent();
    let mut points = Vec::new();
    let mut targets = Vec::new();
    for (k, frame) in reference.frames[..cutoff].iter().enumerate() {
        let t = reference.times[k];
        for iy in (0..ny).step_by(stride) {
            for ix in (0..nx).step_by(stride) {
                let mut p = vec![t, grid.center(0, ix)];
                if grid.dim() == 2 {
                    p.push(grid.center(1, iy));
                }
                points.push(p);
                targets.extend_from_slice(frame.interior(ix, iy));
            }
        }
    }
    (points, targets)
}

/// Evaluation points for the post-cutoff frames on the full reference grid.
fn inference_frames(
    reference: &FrameSeries,
    cutoff: usize,
    net: &DeepNet,
) -> FrameSeries {
    let grid = reference.grid().clone();
    let m = reference.m();
    let (nx, ny) = reference.frames[0].interior_extent();
    let mut frames = Vec::new();
    let times: Vec<f64> = reference.times[cutoff..].to_vec();
    for &t in &times {
        let mut flat = Vec::with_capacity(nx * ny * net.d_in());
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

fn headline_range(targets: &[f64], m: usize, headline: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in targets.chunks_exact(m) {
        lo = lo.min(row[headline]);
        hi = hi.max(row[headline]);
    }
    (lo, hi)
}

/// The full pipeline for one problem: solve, split, train each architecture,
/// infer the post-cutoff frames, compute metrics, classify smoothness,
/// certify, and prove solver properties. Deterministic for a fixed seed.
pub fn run_experiment(
    spec: &ProblemSpec,
    overrides: &RunOverrides,
) -> Result<ExperimentBundle, HarnessError> {
    let problem = scaled(spec, overrides.scale);
    let sys = make_system(problem.system.as_str(), problem.params)?;
    let reference = run_simulation(&sys, &problem.grid, &|x| problem.initial.eval(x), &problem.solver)?;
    let cutoff = ((problem.solver.frame_count as f64 * problem.train_fraction).round() as usize)
        .clamp(1, problem.solver.frame_count - 1);

    // A-priori smoothness analysis, refined with the solver frames.
    let base_report = if sys.is_scalar() {
        classify_scalar(&sys, &problem.initial)?
    } else {
        system_report(&sys, &problem.initial)?
    };
    let report = refine_with_frames(&base_report, &sys, &reference);

    let (points, targets) = training_data(&reference, cutoff, problem.train_stride.max(1));
    let m = sys.m();
    let (h_lo, h_hi) = headline_range(&targets, m, problem.headline_component);
    let info = ProblemInfo {
        id: problem.id.clone(),
        linear_flux: matches!(
            problem.system,
            SystemName::Advection1d | SystemName::Advection2d
        ),
        conditional: problem.conditional,
        headline_range: (h_lo, h_hi),
        d_inputs: 1 + sys.dim(),
        reference_bounds: problem.reference_bounds,
    };

    let architectures = overrides
        .architectures
        .clone()
        .unwrap_or_else(|| problem.architectures.clone());
    let mut arch_results = Vec::new();
    for arch in architectures {
        let certificate = certify(&info, &arch, &report)?;
        let net = match arch.kind {
            ArchKind::Plain => {
                let cfg = TrainConfig {
                    seed: overrides.seed,
                    ..problem.train_plain
                };
                let (net, _) = train_plain(arch.layers, arch.width, &points, &targets, &cfg)?;
                DeepNet::Plain(net)
            }
            ArchKind::Beacons => {
                // The trained chain mirrors the certified one: same
                // suppression map, same per-component affine stages.
                let suppression = certificate
                    .chain
                    .stages
                    .iter()
                    .find_map(|s| match s {
                        certifier::Stage::Analytic { map }
                            if !matches!(map, AnalyticMap::Affine { .. }) =>
                        {
                            Some(map.clone())
                        }
                        _ => None,
                    })
                    .unwrap_or(AnalyticMap::IdentityOverC { c: 1.0 });
                let bspec = BeaconsSpec {
                    width: arch.width,
                    correctors: arch.corrector_count(),
                    suppression,
                    unnormalize: unnormalize_from_targets(&targets, m),
                };
                let cfg = TrainConfig {
                    seed: overrides.seed,
                    ..problem.train
                };
                let (net, _) = train_beacons(&bspec, &points, &targets, &cfg)?;
                DeepNet::Beacons(net)
            }
        };
        let predicted = inference_frames(&reference, cutoff, &net);
        let metrics = compute_metrics(
            &reference,
            &predicted,
            cutoff,
            problem.headline_component,
            &arch_id(&arch),
        )?;
        let raw = raw_l_inf_all(&reference, &predicted, cutoff, problem.headline_component);
        let bound_respected = certificate.operative_bound().map(|b| raw <= b);
        arch_results.push(ArchResult {
            arch,
            net,
            metrics,
            raw_l_inf_all: raw,
            certificate,
            bound_respected,
        });
    }

    let scheme = match problem.solver.flux {
        fv_solver::FluxKind::LaxFriedrichs => SchemeFlux::LaxFriedrichs,
        fv_solver::FluxKind::Roe => SchemeFlux::Roe,
    };
    let mut solver_certificates = prove_solver_properties(problem.system, scheme)?;
    if problem.solver.limiter != fv_solver::LimiterKind::None {
        solver_certificates.push(limiter_certificates(problem.solver.limiter.as_str())?);
    }

    Ok(ExperimentBundle {
        problem,
        seed: overrides.seed,
        reference,
        train_cutoff: cutoff,
        report,
        arch_results,
        solver_certificates,
    })
}

fn sanitize(name: &str) -> String {
    name.replace('/', "_")
}

/// Write the full artifact bundle: reference frames, checkpoints,
/// certificates, metric tables, and the run manifest. Returns the list of
/// certificate paths (for the post-write check pass).
pub fn write_bundle(
    bundle: &ExperimentBundle,
    dir: &Path,
    json_tables: bool,
) -> Result<Vec<std::path::PathBuf>, HarnessError> {
    std::fs::create_dir_all(dir)?;
    let names = component_names(bundle.problem.system);
    write_series(&bundle.reference, &names, &dir.join("reference"))?;

    let ckpt_dir = dir.join("checkpoints");
    std::fs::create_dir_all(&ckpt_dir)?;
    for r in &bundle.arch_results {
        save_checkpoint(
            &r.net,
            bundle.seed,
            &ckpt_dir.join(format!("{}.json", arch_id(&r.arch))),
        )?;
    }

    let cert_dir = dir.join("certificates");
    std::fs::create_dir_all(&cert_dir)?;
    let mut cert_paths = Vec::new();
    for r in &bundle.arch_results {
        let path = cert_dir.join(format!("bound_{}.json", arch_id(&r.arch)));
        std::fs::write(&path, bound_certificate_to_json(&r.certificate))?;
        cert_paths.push(path);
    }
    for cert in &bundle.solver_certificates {
        let path = cert_dir.join(format!("proof_{}.json", sanitize(&cert.name)));
        std::fs::write(&path, proof_certificate_to_json(cert))?;
        cert_paths.push(path);
    }

    let rows: Vec<&MetricsRow> = bundle.arch_results.iter().map(|r| &r.metrics).collect();
    crate::tables::write_tables(&rows, &names, dir, json_tables)?;

    std::fs::write(dir.join("run_manifest.json"), run_manifest_json(bundle))?;
    Ok(cert_paths)
}

/// Replay every certificate in a directory through the independent checker.
pub fn check_certificates(paths: &[std::path::PathBuf]) -> Result<(), HarnessError> {
    for path in paths {
        let text = std::fs::read_to_string(path)?;
        check_certificate_json(&text).map_err(|e| {
            HarnessError::Stage(format!("certificate {} rejected: {e}", path.display()))
        })?;
    }
    Ok(())
}

fn fnum(x: f64) -> String {
    format!("{x:.16e}")
}

fn run_manifest_json(bundle: &ExperimentBundle) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"problem\": \"{}\",", bundle.problem.id);
    let _ = writeln!(s, "  \"version\": \"{}\",", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "  \"seed\": {},", bundle.seed);
    let _ = writeln!(
        s,
        "  \"resolution\": [{}],",
        bundle
            .problem
            .grid
            .cells
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(s, "  \"frame_count\": {},", bundle.problem.solver.frame_count);
    let _ = writeln!(s, "  \"train_cutoff\": {},", bundle.train_cutoff);
    let _ = writeln!(s, "  \"train_stride\": {},", bundle.problem.train_stride);
    let _ = writeln!(
        s,
        "  \"classification\": \"{}\",",
        bundle.report.classification.as_str()
    );
    let _ = writeln!(s, "  \"architectures\": [");
    let n = bundle.arch_results.len();
    for (i, r) in bundle.arch_results.iter().enumerate() {
        let bound = match r.certificate.operative_bound() {
            Some(b) => fnum(b),
            None => "null".to_string(),
        };
        let respected = match r.bound_respected {
            Some(v) => v.to_string(),
            None => "null".to_string(),
        };
        let _ = writeln!(
            s,
            "    {{\"id\": \"{}\", \"raw_l_inf_all\": {}, \"certified_bound\": {}, \
             \"bound_respected\": {}}}{}",
            arch_id(&r.arch),
            fnum(r.raw_l_inf_all),
            bound,
            respected,
            if i + 1 < n { "," } else { "" }
        );
    }
    let _ = writeln!(s, "  ],");
    let _ = writeln!(
        s,
        "  \"solver_certificates\": {},",
        bundle.solver_certificates.len()
    );
    let _ = writeln!(s, "  \"stages\": \"complete\"");
    s.push('}');
    s
}
