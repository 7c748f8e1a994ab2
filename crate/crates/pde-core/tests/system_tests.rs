use pde_core::{make_system, Direction, Mat, Params, PdeSystem, Primitive, SystemName};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_systems() -> Vec<PdeSystem> {
    [
        "advection1d",
        "advection2d",
        "burgers1d",
        "burgers2d",
        "euler1d",
        "euler2d",
    ]
    .iter()
    .map(|n| make_system(n, Params::default()).unwrap())
    .collect()
}

fn random_valid_state(sys: &PdeSystem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match sys.name() {
        SystemName::Euler1d => {
            let prim = Primitive::Euler {
                rho: rng.gen_range(0.1..3.0),
                velocity: vec![rng.gen_range(-2.0..2.0)],
                pressure: rng.gen_range(0.1..3.0),
            };
            sys.conserved_from_primitive(&prim)
        }
        SystemName::Euler2d => {
            let prim = Primitive::Euler {
                rho: rng.gen_range(0.1..3.0),
                velocity: vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
                pressure: rng.gen_range(0.1..3.0),
            };
            sys.conserved_from_primitive(&prim)
        }
        _ => vec![rng.gen_range(-3.0..3.0)],
    }
}

fn directions(sys: &PdeSystem) -> Vec<Direction> {
    if sys.dim() == 2 {
        vec![Direction::X, Direction::Y]
    } else {
        vec![Direction::X]
    }
}

#[test]
fn advection_flux_is_linear() {
    let sys = make_system(
        "advection1d",
        Params {
            advection_speed: 1.0,
            ..Params::default()
        },
    )
    .unwrap();
    assert_eq!(sys.flux(&[2.0], Direction::X), vec![2.0]);
}

#[test]
fn burgers_flux_is_half_u_squared() {
    let sys = make_system("burgers1d", Params::default()).unwrap();
    assert_eq!(sys.flux(&[2.0], Direction::X), vec![2.0]);
    assert_eq!(sys.flux(&[-3.0], Direction::X), vec![4.5]);
}

#[test]
fn euler_sod_left_state_eigenvalues() {
    // (rho, rho*u, E) = (1, 0, 2.5) with gamma = 1.4 gives P = 1 from the
    // EOS and sound speed c = sqrt(1.4); eigenvalues are u -/+ c and u.
    let sys = make_system("euler1d", Params::default()).unwrap();
    let u = [1.0, 0.0, 2.5];
    let c = 1.4f64.sqrt();
    assert!((c - 1.1832159566199232).abs() < 1e-15);
    let eig = sys.eigen(&u, Direction::X).unwrap();
    assert!((eig.lambda[0] + c).abs() < 1e-14);
    assert!(eig.lambda[1].abs() < 1e-14);
    assert!((eig.lambda[2] - c).abs() < 1e-14);
}

#[test]
fn unknown_name_and_bad_gamma_are_rejected() {
    assert!(make_system("advection3d", Params::default()).is_err());
    assert!(make_system(
        "euler1d",
        Params {
            gamma: 1.0,
            ..Params::default()
        }
    )
    .is_err());
}

#[test]
fn sod_states_convert_to_expected_primitives() {
    let sys = make_system("euler1d", Params::default()).unwrap();
    match sys.primitive_from_conserved(&[1.0, 0.0, 2.5]).unwrap() {
        Primitive::Euler {
            rho,
            velocity,
            pressure,
        } => {
            assert_eq!(rho, 1.0);
            assert_eq!(velocity, vec![0.0]);
            assert!((pressure - 1.0).abs() < 1e-15);
        }
        _ => panic!("expected Euler primitive"),
    }
    match sys.primitive_from_conserved(&[0.125, 0.0, 0.25]).unwrap() {
        Primitive::Euler { rho, pressure, .. } => {
            assert_eq!(rho, 0.125);
            assert!((pressure - 0.1).abs() < 1e-15);
        }
        _ => panic!("expected Euler primitive"),
    }
}

#[test]
fn scalar_primitive_is_pass_through() {
    let sys = make_system("burgers1d", Params::default()).unwrap();
    assert_eq!(
        sys.primitive_from_conserved(&[0.7]).unwrap(),
        Primitive::Scalar(0.7)
    );
}

#[test]
fn primitive_round_trip_is_tight() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sys in all_systems() {
        for _ in 0..100 {
            let u = random_valid_state(&sys, &mut rng);
            let prim = sys.primitive_from_conserved(&u).unwrap();
            let back = sys.conserved_from_primitive(&prim);
            for (a, b) in u.iter().zip(&back) {
                let denom = 1.0f64.max(a.abs());
                assert!((a - b).abs() / denom < 1e-14, "{a} vs {b}");
            }
        }
    }
}

#[test]
fn negative_pressure_is_invalid() {
    let sys = make_system("euler1d", Params::default()).unwrap();
    assert!(!sys.is_valid(&[1.0, 10.0, 2.5])); // kinetic energy exceeds total
    assert!(!sys.is_valid(&[-1.0, 0.0, 2.5]));
    assert!(sys.primitive_from_conserved(&[1.0, 10.0, 2.5]).is_err());
}

#[test]
fn max_wave_speed_examples() {
    let adv = make_system("advection1d", Params::default()).unwrap();
    assert_eq!(adv.max_wave_speed(&[123.0], Direction::X).unwrap(), 1.0);
    let bur = make_system("burgers1d", Params::default()).unwrap();
    assert_eq!(bur.max_wave_speed(&[-3.0], Direction::X).unwrap(), 3.0);
    let eul = make_system("euler1d", Params::default()).unwrap();
    let s = eul.max_wave_speed(&[1.0, 0.0, 2.5], Direction::X).unwrap();
    assert!((s - 1.4f64.sqrt()).abs() < 1e-14);
}

#[test]
fn jacobian_matches_directional_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for sys in all_systems() {
        for dir in directions(&sys) {
            for _ in 0..100 {
                let u = random_valid_state(&sys, &mut rng);
                let jac = sys.jacobian(&u, dir);
                // Random direction vector.
                let v: Vec<f64> = (0..sys.m()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let scale: f64 = 1e-6 * (1.0 + u.iter().map(|x| x.abs()).fold(0.0, f64::max));
                let up: Vec<f64> = u.iter().zip(&v).map(|(x, d)| x + scale * d).collect();
                let um: Vec<f64> = u.iter().zip(&v).map(|(x, d)| x - scale * d).collect();
                let fp = sys.flux(&up, dir);
                let fm = sys.flux(&um, dir);
                let jv = jac.mul_vec(&v);
                for i in 0..sys.m() {
                    let fd = (fp[i] - fm[i]) / (2.0 * scale);
                    let denom = 1.0f64.max(jv[i].abs());
                    assert!(
                        (jv[i] - fd).abs() / denom < 1e-5,
                        "{:?} {dir:?} comp {i}: {} vs {}",
                        sys.name(),
                        jv[i],
                        fd
                    );
                }
            }
        }
    }
}

#[test]
fn left_times_right_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for sys in all_systems().into_iter().filter(|s| s.m() > 1) {
        for dir in directions(&sys) {
            for _ in 0..100 {
                let u = random_valid_state(&sys, &mut rng);
                let eig = sys.eigen(&u, dir).unwrap();
                let prod = eig.left.mul(&eig.right);
                let diff = prod.max_abs_diff(&Mat::identity(sys.m()));
                assert!(diff < 1e-12, "{:?} {dir:?}: {diff}", sys.name());
            }
        }
    }
}

#[test]
fn eigen_reconstructs_jacobian() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for sys in all_systems().into_iter().filter(|s| s.m() > 1) {
        for dir in directions(&sys) {
            for _ in 0..100 {
                let u = random_valid_state(&sys, &mut rng);
                let eig = sys.eigen(&u, dir).unwrap();
                let mut rl = eig.right.clone();
                // R * diag(lambda) applied as column scaling, then * L.
                let n = sys.m();
                let mut rd = Mat::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        rd[(i, j)] = rl[(i, j)] * eig.lambda[j];
                    }
                }
                rl = rd.mul(&eig.left);
                let jac = sys.jacobian(&u, dir);
                let diff = rl.max_abs_diff(&jac);
                assert!(diff < 1e-10, "{:?} {dir:?}: {diff}", sys.name());
            }
        }
    }
}

#[test]
fn eigenvalues_come_back_ascending_and_finite() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for sys in all_systems() {
        for dir in directions(&sys) {
            for _ in 0..100 {
                let u = random_valid_state(&sys, &mut rng);
                let eig = sys.eigen(&u, dir).unwrap();
                for w in eig.lambda.windows(2) {
                    assert!(w[0] <= w[1]);
                }
                assert!(eig.lambda.iter().all(|l| l.is_finite()));
            }
        }
    }
}

#[test]
fn scalar_eigenvalue_equals_flux_derivative_exactly() {
    let adv = make_system("advection1d", Params::default()).unwrap();
    let bur = make_system("burgers2d", Params::default()).unwrap();
    for u in [-2.5, 0.0, 0.3, 4.0] {
        assert_eq!(adv.eigen(&[u], Direction::X).unwrap().lambda[0], 1.0);
        assert_eq!(bur.eigen(&[u], Direction::X).unwrap().lambda[0], u);
        assert_eq!(bur.eigen(&[u], Direction::Y).unwrap().lambda[0], u);
    }
}

#[test]
fn flux_hessians_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for sys in all_systems() {
        for dir in directions(&sys) {
            for _ in 0..25 {
                let u = random_valid_state(&sys, &mut rng);
                let hessians = sys.flux_hessians(&u, dir);
                let h = 1e-5 * (1.0 + u.iter().map(|x| x.abs()).fold(0.0, f64::max));
                for i in 0..sys.m() {
                    for j in 0..sys.m() {
                        // d/dU_j of jacobian column entries via central diff.
                        let mut up = u.clone();
                        up[j] += h;
                        let mut um = u.clone();
                        um[j] -= h;
                        let jp = sys.jacobian(&up, dir);
                        let jm = sys.jacobian(&um, dir);
                        for alpha in 0..sys.m() {
                            let fd = (jp[(alpha, i)] - jm[(alpha, i)]) / (2.0 * h);
                            let got = hessians[alpha][(i, j)];
                            let denom = 1.0f64.max(fd.abs());
                            assert!(
                                (got - fd).abs() / denom < 1e-5,
                                "{:?} {dir:?} H[{alpha}]({i},{j}): {got} vs {fd}",
                                sys.name()
                            );
                        }
                    }
                }
            }
        }
    }
}
