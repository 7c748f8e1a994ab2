use certifier::{ArchKind, ArchitectureSpec};
use characteristics::{InitialData, Piece, Profile1d, Profile2d};
use fv_solver::{BoundaryKind, FluxKind, GridSpec, LimiterKind, SolverConfig};
use neural::TrainConfig;
use pde_core::{Params, SystemName};

/// One registered problem: the equation, grid, initial data, solver setup,
/// training split and presets, architectures to compare, and reference
/// metadata from the literature (never asserted as outputs).
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub id: String,
    pub system: SystemName,
    pub params: Params,
    pub grid: GridSpec,
    pub initial: InitialData,
    pub solver: SolverConfig,
    /// Leading fraction of frames used for training (split by time window,
    /// no shuffling).
    pub train_fraction: f64,
    pub architectures: Vec<ArchitectureSpec>,
    /// Unverified training solver: certificates carry the assumption flag.
    pub conditional: bool,
    /// Reported worst-case bound values for the 6-layer and 8-layer
    /// compositional architectures; reference metadata only.
    pub reference_bounds: Option<(f64, f64)>,
    /// Component whose error the headline metrics and certificates track.
    pub headline_component: usize,
    pub train: TrainConfig,
    /// Training presets for the deep plain baseline (smaller step size:
    /// end-to-end descent through a tanh stack tolerates less).
    pub train_plain: TrainConfig,
    /// Spatial subsample stride for building training sets.
    pub train_stride: usize,
}

fn paper_architectures() -> Vec<ArchitectureSpec> {
    vec![
        ArchitectureSpec {
            kind: ArchKind::Plain,
            layers: 6,
            width: 64,
        },
        ArchitectureSpec {
            kind: ArchKind::Plain,
            layers: 8,
            width: 128,
        },
        ArchitectureSpec {
            kind: ArchKind::Beacons,
            layers: 6,
            width: 64,
        },
        ArchitectureSpec {
            kind: ArchKind::Beacons,
            layers: 8,
            width: 128,
        },
    ]
}

fn two_architectures() -> Vec<ArchitectureSpec> {
    vec![
        ArchitectureSpec {
            kind: ArchKind::Plain,
            layers: 8,
            width: 128,
        },
        ArchitectureSpec {
            kind: ArchKind::Beacons,
            layers: 8,
            width: 128,
        },
    ]
}

fn stage_train() -> TrainConfig {
    TrainConfig {
        lr: 0.25,
        min_epochs: 10,
        max_epochs: 50,
        steps_per_epoch: 150,
        seed: 0,
        eps: 1e-10,
    }
}

fn plain_train() -> TrainConfig {
    TrainConfig {
        lr: 0.05,
        min_epochs: 10,
        max_epochs: 25,
        steps_per_epoch: 100,
        seed: 0,
        eps: 1e-10,
    }
}

/// The fixed problem registry: the six reference problems plus the smooth
/// periodic problem used by the convergence checks.
pub fn registry() -> Vec<ProblemSpec> {
    let mut problems = Vec::new();

    // 1D linear advection Riemann problem: a = 1, step at x = 0.
    problems.push(ProblemSpec {
        id: "advection1d".into(),
        system: SystemName::Advection1d,
        params: Params::default(),
        grid: GridSpec::new_1d(-1.0, 1.0, 1024, BoundaryKind::OutflowCopy).unwrap(),
        initial: InitialData::scalar_1d(Profile1d::step((-1.0, 1.0), 0.0, 1.0, 0.0)),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 1.0,
            t_end: 1.0,
            frame_count: 100,
        },
        train_fraction: 0.33,
        architectures: paper_architectures(),
        conditional: false,
        reference_bounds: Some((0.903602, 0.707106)),
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 2,
    });

    // 2D linear advection of a disk, moving diagonally.
    problems.push(ProblemSpec {
        id: "advection2d".into(),
        system: SystemName::Advection2d,
        params: Params::default(),
        grid: GridSpec::new_2d(
            [-1.0, -1.0],
            [1.0, 1.0],
            [256, 256],
            [BoundaryKind::OutflowCopy, BoundaryKind::OutflowCopy],
        )
        .unwrap(),
        initial: InitialData::TwoD(vec![Profile2d::Disk {
            center: (-0.5, -0.5),
            radius_sq: 0.33,
            inside: 1.0,
            outside: 0.0,
        }]),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 1.0,
            t_end: 1.0,
            frame_count: 100,
        },
        train_fraction: 0.33,
        architectures: two_architectures(),
        conditional: false,
        reference_bounds: Some((1.483672, 1.259921)),
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 4,
    });

    // 1D inviscid Burgers top-hat with two initial discontinuities.
    problems.push(ProblemSpec {
        id: "burgers1d".into(),
        system: SystemName::Burgers1d,
        params: Params::default(),
        grid: GridSpec::new_1d(0.0, 6.0, 1024, BoundaryKind::OutflowCopy).unwrap(),
        initial: InitialData::scalar_1d(Profile1d {
            domain: (0.0, 6.0),
            breakpoints: vec![2.0, 4.0],
            pieces: vec![
                Piece::Constant(-1.0),
                Piece::Constant(3.0),
                Piece::Constant(-1.0),
            ],
        }),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 1.0,
            t_end: 1.0,
            frame_count: 100,
        },
        train_fraction: 0.33,
        architectures: paper_architectures(),
        conditional: false,
        reference_bounds: Some((1.483672, 1.259921)),
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 2,
    });

    // 2D inviscid Burgers disk smearing into a comet.
    problems.push(ProblemSpec {
        id: "burgers2d".into(),
        system: SystemName::Burgers2d,
        params: Params::default(),
        grid: GridSpec::new_2d(
            [-1.0, -1.0],
            [1.0, 1.0],
            [256, 256],
            [BoundaryKind::OutflowCopy, BoundaryKind::OutflowCopy],
        )
        .unwrap(),
        initial: InitialData::TwoD(vec![Profile2d::Disk {
            center: (-0.5, -0.5),
            radius_sq: 0.33,
            inside: 1.0,
            outside: 0.0,
        }]),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 1.0,
            t_end: 1.0,
            frame_count: 100,
        },
        train_fraction: 0.33,
        architectures: two_architectures(),
        conditional: false,
        reference_bounds: Some((1.483672, 1.259921)),
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 4,
    });

    // Sod shock tube.
    problems.push(ProblemSpec {
        id: "euler1d_sod".into(),
        system: SystemName::Euler1d,
        params: Params::default(),
        grid: GridSpec::new_1d(0.0, 1.0, 2048, BoundaryKind::OutflowCopy).unwrap(),
        initial: InitialData::OneD(vec![
            Profile1d::step((0.0, 1.0), 0.5, 1.0, 0.125),
            Profile1d::uniform((0.0, 1.0), Piece::Constant(0.0)),
            Profile1d::step((0.0, 1.0), 0.5, 2.5, 0.25),
        ]),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 0.95,
            t_end: 0.2,
            frame_count: 200,
        },
        train_fraction: 0.33,
        architectures: paper_architectures(),
        conditional: true,
        reference_bounds: Some((0.903602, 0.707106)),
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 4,
    });

    // 2D Euler quadrants problem with four initial discontinuities.
    problems.push(ProblemSpec {
        id: "euler2d_quadrants".into(),
        system: SystemName::Euler2d,
        params: Params::default(),
        grid: GridSpec::new_2d(
            [0.0, 0.0],
            [1.0, 1.0],
            [256, 256],
            [BoundaryKind::OutflowCopy, BoundaryKind::OutflowCopy],
        )
        .unwrap(),
        initial: InitialData::TwoD(vec![
            Profile2d::Quadrants {
                corner: (0.8, 0.8),
                values: [1.5, 0.5323, 0.5323, 0.138],
            },
            Profile2d::Quadrants {
                corner: (0.8, 0.8),
                values: [0.0, 0.641954, 0.0, 0.166428],
            },
            Profile2d::Quadrants {
                corner: (0.8, 0.8),
                values: [0.0, 0.0, 0.641954, 0.166428],
            },
            Profile2d::Quadrants {
                corner: (0.8, 0.8),
                values: [3.75, 1.1371, 1.1371, 0.273212],
            },
        ]),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 0.95,
            t_end: 0.8,
            frame_count: 100,
        },
        train_fraction: 0.33,
        architectures: two_architectures(),
        conditional: true,
        reference_bounds: Some((1.483672, 1.259921)),
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 4,
    });

    // Smooth periodic transport for the convergence checks.
    problems.push(ProblemSpec {
        id: "advection1d_sine".into(),
        system: SystemName::Advection1d,
        params: Params::default(),
        grid: GridSpec::new_1d(-1.0, 1.0, 256, BoundaryKind::Periodic).unwrap(),
        initial: InitialData::scalar_1d(Profile1d::uniform(
            (-1.0, 1.0),
            Piece::Sine {
                amplitude: 1.0,
                frequency: std::f64::consts::PI,
                phase: 0.0,
                offset: 0.0,
            },
        )),
        solver: SolverConfig {
            flux: FluxKind::Roe,
            limiter: LimiterKind::Minmod,
            cfl: 0.45,
            t_end: 0.5,
            frame_count: 6,
        },
        train_fraction: 0.5,
        architectures: vec![ArchitectureSpec {
            kind: ArchKind::Beacons,
            layers: 4,
            width: 32,
        }],
        conditional: false,
        reference_bounds: None,
        headline_component: 0,
        train: stage_train(),
        train_plain: plain_train(),
        train_stride: 1,
    });

    problems
}

pub fn find(id: &str) -> Option<ProblemSpec> {
    registry().into_iter().find(|p| p.id == id)
}

/// Rescale a problem to a fraction of its reference resolution (desk-scale
/// presets ship at scale 0.25). Cell counts stay multiples of four and at
/// least 32.
pub fn scaled(spec: &ProblemSpec, scale: f64) -> ProblemSpec {
    let mut out = spec.clone();
    for c in &mut out.grid.cells {
        let n = ((*c as f64 * scale) as usize).max(32);
        *c = n - n % 4;
    }
    out
}
