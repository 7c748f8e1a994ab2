use characteristics::{
    classify_scalar, refine_with_frames, smoothness_order, wave_blowup_times, Classification,
    InitialData, Piece, Profile1d, N_CAP,
};
use fv_solver::{
    BoundaryKind, FluxKind, FrameSeries, GridSpec, LimiterKind, SolverDescriptor, StateField,
};
use pde_core::{make_system, Params, PdeSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn burgers() -> PdeSystem {
    make_system("burgers1d", Params::default()).unwrap()
}

fn advection() -> PdeSystem {
    make_system("advection1d", Params::default()).unwrap()
}

/// First crossing time of the straight characteristic lines
/// x0 + speed(x0) t, detected over densely seeded adjacent pairs. Burgers
/// characteristics move at u0(x0).
fn crossing_oracle(speeds: &[(f64, f64)]) -> f64 {
    let mut earliest = f64::INFINITY;
    for w in speeds.windows(2) {
        let (x0, s0) = w[0];
        let (x1, s1) = w[1];
        if s1 < s0 {
            earliest = earliest.min((x1 - x0) / (s0 - s1));
        }
    }
    earliest
}

fn burgers_oracle(profile: &Profile1d, seeds: usize) -> f64 {
    let (a, b) = profile.domain;
    let speeds: Vec<(f64, f64)> = (0..=seeds)
        .map(|i| {
            let x = a + (b - a) * i as f64 / seeds as f64;
            (x, profile.eval(x))
        })
        .collect();
    crossing_oracle(&speeds)
}

#[test]
fn advection_is_smooth_forever_for_smooth_data() {
    let data = InitialData::scalar_1d(Profile1d::uniform(
        (0.0, 6.283),
        Piece::Sine {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
            offset: 0.0,
        },
    ));
    let report = classify_scalar(&advection(), &data).unwrap();
    assert_eq!(report.classification, Classification::SmoothForever);
    assert_eq!(report.earliest_blowup(), f64::INFINITY);
}

#[test]
fn burgers_sine_blows_up_at_one() {
    // u0 = sin(x) on [0, 2 pi]: sup(-cos x) = 1 so t_inf = 1. The formula
    // must agree with the characteristic-crossing oracle to 1e-3.
    let profile = Profile1d::uniform(
        (0.0, 2.0 * std::f64::consts::PI),
        Piece::Sine {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
            offset: 0.0,
        },
    );
    let data = InitialData::scalar_1d(profile.clone());
    let report = classify_scalar(&burgers(), &data).unwrap();
    assert_eq!(report.classification, Classification::BlowupAt);
    let t = report.earliest_blowup();
    assert!((t - 1.0).abs() < 1e-6, "formula gave {t}");
    let oracle = burgers_oracle(&profile, 10_000);
    assert!((t - oracle).abs() / oracle < 1e-3, "{t} vs oracle {oracle}");
}

#[test]
fn burgers_increasing_ramp_stays_smooth() {
    let data = InitialData::scalar_1d(Profile1d::uniform(
        (-1.0, 1.0),
        Piece::Affine {
            intercept: 0.0,
            slope: 0.7,
        },
    ));
    let report = classify_scalar(&burgers(), &data).unwrap();
    assert_eq!(report.classification, Classification::SmoothForever);
}

#[test]
fn step_data_is_discontinuous_from_start() {
    let data = InitialData::scalar_1d(Profile1d::step((-1.0, 1.0), 0.0, 1.0, 0.0));
    let report = classify_scalar(&advection(), &data).unwrap();
    assert_eq!(
        report.classification,
        Classification::DiscontinuousFromStart
    );
    assert_eq!(report.discontinuity_count_at_t0, 1);
    assert_eq!(report.n_global, 0);
    assert_eq!(report.n_smooth_part, N_CAP);
}

#[test]
fn formula_tracks_oracle_on_random_sine_sums() {
    // 50 random smooth profiles built from up to 3 sine pieces summed via
    // nested composition is not in the catalog, so stack them as separate
    // frequency/phase choices of a single sine on subdomains is also out;
    // instead draw one sine piece with random parameters per trial, which
    // still exercises the sup landscape, plus random affine tilts.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..50 {
        let amplitude = rng.gen_range(0.3..2.0);
        let frequency = rng.gen_range(0.5..3.0);
        let phase = rng.gen_range(0.0..6.28);
        let offset = rng.gen_range(-0.5..0.5);
        let profile = Profile1d::uniform(
            (0.0, 6.0),
            Piece::Sine {
                amplitude,
                frequency,
                phase,
                offset,
            },
        );
        let data = InitialData::scalar_1d(profile.clone());
        let report = classify_scalar(&burgers(), &data).unwrap();
        let t = report.earliest_blowup();
        let oracle = burgers_oracle(&profile, 20_000);
        assert!(
            (t - oracle).abs() / oracle < 1e-2,
            "trial {trial}: formula {t} vs oracle {oracle}"
        );
    }
}

#[test]
fn monotone_data_under_convex_flux_never_blows_up() {
    let increasing: Vec<Profile1d> = vec![
        Profile1d::uniform((0.0, 1.0), Piece::Constant(0.4)),
        Profile1d::uniform(
            (0.0, 1.0),
            Piece::Affine {
                intercept: -1.0,
                slope: 2.0,
            },
        ),
        // sin is increasing on (-pi/2, pi/2)
        Profile1d::uniform(
            (-1.5, 1.5),
            Piece::Sine {
                amplitude: 1.0,
                frequency: 1.0,
                phase: 0.0,
                offset: 0.0,
            },
        ),
        // gaussian rising flank only
        Profile1d::uniform(
            (-3.0, 0.0),
            Piece::Gaussian {
                amplitude: 2.0,
                center: 0.0,
                width: 1.0,
            },
        ),
    ];
    for profile in increasing {
        let report =
            classify_scalar(&burgers(), &InitialData::scalar_1d(profile.clone())).unwrap();
        assert_eq!(
            report.classification,
            Classification::SmoothForever,
            "{profile:?}"
        );
    }
}

#[test]
fn blowup_time_scales_with_the_x_axis() {
    let profile = Profile1d::uniform(
        (0.0, 2.0 * std::f64::consts::PI),
        Piece::Sine {
            amplitude: 1.3,
            frequency: 1.0,
            phase: 0.4,
            offset: 0.1,
        },
    );
    let t1 = classify_scalar(&burgers(), &InitialData::scalar_1d(profile.clone()))
        .unwrap()
        .earliest_blowup();
    for k in [2.0, 5.0] {
        let tk = classify_scalar(&burgers(), &InitialData::scalar_1d(profile.stretch(k)))
            .unwrap()
            .earliest_blowup();
        assert!(
            (tk - k * t1).abs() / (k * t1) < 1e-6,
            "k = {k}: {tk} vs {}",
            k * t1
        );
    }
}

#[test]
fn smoothness_orders() {
    let step = Profile1d::step((-1.0, 1.0), 0.0, 1.0, 0.0);
    assert_eq!(smoothness_order(&step).unwrap(), (0, N_CAP));

    let sine = Profile1d::uniform(
        (-1.0, 1.0),
        Piece::Sine {
            amplitude: 1.0,
            frequency: 2.0,
            phase: 0.0,
            offset: 0.0,
        },
    );
    assert_eq!(smoothness_order(&sine).unwrap(), (N_CAP, N_CAP));

    // Continuous hat: value-continuous, kinked at 0.
    let hat = Profile1d {
        domain: (-1.0, 1.0),
        breakpoints: vec![0.0],
        pieces: vec![
            Piece::Affine {
                intercept: 1.0,
                slope: 1.0,
            },
            Piece::Affine {
                intercept: 1.0,
                slope: -1.0,
            },
        ],
    };
    assert_eq!(smoothness_order(&hat).unwrap(), (0, N_CAP));

    // Two pieces that actually join analytically: same affine on both sides.
    let seam = Profile1d {
        domain: (-1.0, 1.0),
        breakpoints: vec![0.25],
        pieces: vec![
            Piece::Affine {
                intercept: 0.5,
                slope: 2.0,
            },
            Piece::Affine {
                intercept: 0.5,
                slope: 2.0,
            },
        ],
    };
    assert_eq!(smoothness_order(&seam).unwrap(), (N_CAP, N_CAP));
}

// --- systems -------------------------------------------------------------

#[test]
fn constant_euler_data_never_steepens() {
    let sys = make_system("euler1d", Params::default()).unwrap();
    let data = InitialData::OneD(vec![
        Profile1d::uniform((0.0, 1.0), Piece::Constant(1.0)),
        Profile1d::uniform((0.0, 1.0), Piece::Constant(0.0)),
        Profile1d::uniform((0.0, 1.0), Piece::Constant(2.5)),
    ]);
    let waves = wave_blowup_times(&sys, &data).unwrap();
    assert_eq!(waves.len(), 3);
    for w in &waves {
        assert_eq!(w.t_inf, f64::INFINITY);
    }
    assert_eq!(waves[1].alpha_sign, 0); // the contact is linearly degenerate
}

#[test]
fn contact_field_is_linearly_degenerate() {
    // Density varies, velocity and pressure constant: a pure contact
    // profile. Only omega_2 is nonzero and alpha_2 = 0, so nothing steepens.
    let sys = make_system("euler1d", Params::default()).unwrap();
    let gamma = 1.4;
    // rho = 1 + 0.3 sin(x), u = 0, P = 1, so E = P/(gamma-1).
    let data = InitialData::OneD(vec![
        Profile1d::uniform(
            (0.0, 6.0),
            Piece::Sine {
                amplitude: 0.3,
                frequency: 1.0,
                phase: 0.0,
                offset: 1.0,
            },
        ),
        Profile1d::uniform((0.0, 6.0), Piece::Constant(0.0)),
        Profile1d::uniform((0.0, 6.0), Piece::Constant(1.0 / (gamma - 1.0))),
    ]);
    let waves = wave_blowup_times(&sys, &data).unwrap();
    assert_eq!(waves[1].t_inf, f64::INFINITY, "contact must not steepen");
    // With u and P constant the acoustic gradients vanish too.
    assert_eq!(waves[0].t_inf, f64::INFINITY);
    assert_eq!(waves[2].t_inf, f64::INFINITY);
}

#[test]
fn compressive_simple_wave_matches_characteristic_tracing() {
    // Exact right-moving simple wave: u(x) = -0.3 sin(x) on [0, pi], with
    // c = c0 + (gamma-1)/2 u from the constant left Riemann invariant and
    // constant entropy. Sampled onto 400 affine pieces (catalog form).
    let gamma = 1.4f64;
    let c0 = gamma.sqrt();
    let u_of = |x: f64| -0.3 * x.sin();
    let c_of = |x: f64| c0 + 0.5 * (gamma - 1.0) * u_of(x);
    let rho_of = |x: f64| (c_of(x) / c0).powf(2.0 / (gamma - 1.0));
    let p_of = |x: f64| rho_of(x).powf(gamma);
    let cons = |x: f64| {
        let (r, u, p) = (rho_of(x), u_of(x), p_of(x));
        [r, r * u, p / (gamma - 1.0) + 0.5 * r * u * u]
    };

    let pieces = 400usize;
    let (a, b) = (0.0, std::f64::consts::PI);
    let xs: Vec<f64> = (0..=pieces)
        .map(|i| a + (b - a) * i as f64 / pieces as f64)
        .collect();
    let mut comps: Vec<Profile1d> = Vec::new();
    for comp in 0..3 {
        let mut bps = Vec::new();
        let mut segs = Vec::new();
        for w in xs.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let (y0, y1) = (cons(x0)[comp], cons(x1)[comp]);
            let slope = (y1 - y0) / (x1 - x0);
            segs.push(Piece::Affine {
                intercept: y0 - slope * x0,
                slope,
            });
            if x1 < b {
                bps.push(x1);
            }
        }
        comps.push(Profile1d {
            domain: (a, b),
            breakpoints: bps,
            pieces: segs,
        });
    }
    let sys = make_system("euler1d", Params::default()).unwrap();
    let waves = wave_blowup_times(&sys, &InitialData::OneD(comps)).unwrap();

    // Oracle: straight lines x0 + lambda_3(x0) t from the exact profile.
    let lam3: Vec<(f64, f64)> = (0..=20_000)
        .map(|i| {
            let x = a + (b - a) * i as f64 / 20_000.0;
            (x, u_of(x) + c_of(x))
        })
        .collect();
    let oracle = crossing_oracle(&lam3);
    assert!(oracle.is_finite());
    let t3 = waves[2].t_inf;
    assert!(
        (t3 - oracle).abs() / oracle < 0.05,
        "formula {t3} vs oracle {oracle}"
    );
    // The other families carry no gradient in a 3-simple wave.
    assert!(waves[0].t_inf > 20.0 * t3);
    assert!(waves[1].t_inf > 20.0 * t3);
}

// --- frame-based refinement ------------------------------------------------

fn series_from_profiles(profiles: Vec<Vec<f64>>) -> FrameSeries {
    let n = profiles[0].len();
    let grid = GridSpec::new_1d(0.0, 1.0, n, BoundaryKind::OutflowCopy).unwrap();
    let frames: Vec<StateField> = profiles
        .iter()
        .map(|vals| {
            StateField::from_fn(grid.clone(), 1, |p| {
                let i = ((p[0] * n as f64) as usize).min(n - 1);
                vec![vals[i]]
            })
        })
        .collect();
    FrameSeries {
        times: (0..profiles.len()).map(|k| k as f64).collect(),
        frames,
        provenance: SolverDescriptor {
            flux: FluxKind::Roe,
            limiter: LimiterKind::None,
            cfl: 0.9,
            resolution: vec![n],
        },
    }
}

#[test]
fn decaying_jump_upgrades_to_asymptotically_smooth() {
    let sys = burgers();
    let data = InitialData::scalar_1d(Profile1d::step((0.0, 1.0), 0.5, 1.0, 0.0));
    let report = classify_scalar(&sys, &data).unwrap();
    // Jump height decays 1.0 -> 0.2 across frames.
    let mk = |h: f64| {
        (0..64)
            .map(|i| if i < 32 { h } else { 0.0 })
            .collect::<Vec<f64>>()
    };
    let series = series_from_profiles((0..20).map(|k| mk(1.0 - 0.04 * k as f64)).collect());
    let refined = refine_with_frames(&report, &sys, &series);
    assert_eq!(refined.classification, Classification::AsymptoticallySmooth);
}

#[test]
fn persistent_jump_is_not_upgraded() {
    let sys = burgers();
    let data = InitialData::scalar_1d(Profile1d::step((0.0, 1.0), 0.5, 1.0, 0.0));
    let report = classify_scalar(&sys, &data).unwrap();
    let mk = |_h: f64| {
        (0..64)
            .map(|i| if i < 32 { 1.0 } else { 0.0 })
            .collect::<Vec<f64>>()
    };
    let series = series_from_profiles((0..20).map(|k| mk(k as f64)).collect());
    let refined = refine_with_frames(&report, &sys, &series);
    assert_eq!(
        refined.classification,
        Classification::DiscontinuousFromStart
    );
}

#[test]
fn linear_flux_jumps_are_never_upgraded() {
    let sys = advection();
    let data = InitialData::scalar_1d(Profile1d::step((0.0, 1.0), 0.5, 1.0, 0.0));
    let report = classify_scalar(&sys, &data).unwrap();
    let mk = |h: f64| {
        (0..64)
            .map(|i| if i < 32 { h } else { 0.0 })
            .collect::<Vec<f64>>()
    };
    let series = series_from_profiles((0..20).map(|k| mk(1.0 - 0.04 * k as f64)).collect());
    let refined = refine_with_frames(&report, &sys, &series);
    assert_eq!(
        refined.classification,
        Classification::DiscontinuousFromStart
    );
}
