use neural::{
    infer, load_checkpoint, loss_and_grad_residual, loss_and_grad_supervised, save_checkpoint,
    train_beacons, train_plain, unnormalize_from_targets, AnalyticMap, BeaconsSpec, DeepNet,
    InputNorm, Mlp, ResidualWeights, TrainConfig,
};
use pde_core::{make_system, Mat, Params, PdeSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn probe_net(d_in: usize, n_hidden: usize, d_out: usize, seed: u64) -> Mlp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mlp::seeded(d_in, n_hidden, d_out, &mut rng)
}

#[test]
fn forward_values() {
    let mut net = Mlp::zeros(3, 4, 1);
    net.b2[0] = 0.3;
    assert_eq!(net.forward(&[5.0, -2.0, 0.1]), vec![0.3]);

    let mut unit = Mlp::zeros(1, 1, 1);
    unit.w1[0] = 1.0;
    unit.w2[0] = 1.0;
    assert_eq!(unit.forward(&[0.0]), vec![0.0]);
    let y = unit.forward(&[10.0])[0];
    assert_eq!(y, 10f64.tanh());
    assert!((y - 0.9999999959).abs() < 1e-9);
}

#[test]
fn parameter_count_matches_formula() {
    let net = Mlp::zeros(2, 64, 1);
    assert_eq!(net.param_count(), 1 + (2 + 2) * 64);
    let sys_net = Mlp::zeros(2, 16, 3);
    assert_eq!(sys_net.param_count(), 3 + (2 + 3 + 1) * 16);
    assert_eq!(sys_net.params_flat().len(), sys_net.param_count());
}

#[test]
fn input_jacobian_matches_finite_differences() {
    let net = probe_net(3, 8, 2, 7);
    let x = [0.3, -0.8, 0.5];
    let jac = net.input_jacobian(&x);
    for j in 0..3 {
        let h = 1e-6 * (1.0 + x[j].abs());
        let mut xp = x;
        xp[j] += h;
        let mut xm = x;
        xm[j] -= h;
        let fp = net.forward(&xp);
        let fm = net.forward(&xm);
        for k in 0..2 {
            let fd = (fp[k] - fm[k]) / (2.0 * h);
            let a = jac[k * 3 + j];
            assert!((a - fd).abs() <= 1e-5 * (1.0 + fd.abs()), "{a} vs {fd}");
        }
    }
    let zero = Mlp::zeros(3, 8, 2);
    assert!(zero.input_jacobian(&x).iter().all(|v| *v == 0.0));
    let mut unit = Mlp::zeros(1, 1, 1);
    unit.w1[0] = 1.0;
    unit.w2[0] = 1.0;
    assert_eq!(unit.input_jacobian(&[0.0]), vec![1.0]);
}

#[test]
fn supervised_loss_basics() {
    let net = probe_net(2, 6, 1, 3);
    let inputs = [0.1, 0.2, -0.4, 0.9];
    let targets: Vec<f64> = inputs
        .chunks_exact(2)
        .map(|x| net.forward(x)[0])
        .collect();
    let (loss, grad) = loss_and_grad_supervised(&net, &inputs, &targets, None).unwrap();
    assert_eq!(loss, 0.0);
    assert!(grad.iter().all(|g| *g == 0.0));

    // One sample: loss = r^2 exactly.
    let (loss, _) = loss_and_grad_supervised(&net, &inputs[..2], &[targets[0] + 0.5], None)
        .unwrap();
    assert!((loss - 0.25).abs() < 1e-15);
}

#[test]
fn non_psd_weight_matrix_is_rejected() {
    let net = probe_net(1, 4, 2, 1);
    let mut w = Mat::identity(2);
    w[(0, 0)] = -1.0;
    let err = loss_and_grad_supervised(&net, &[0.1], &[0.0, 0.0], Some(&w));
    assert!(err.is_err());
}

fn fd_check_gradient(
    params: &[f64],
    analytic: &[f64],
    mut eval: impl FnMut(&[f64]) -> f64,
) {
    let h = 1e-5;
    for p in 0..params.len() {
        let mut plus = params.to_vec();
        plus[p] += h;
        let mut minus = params.to_vec();
        minus[p] -= h;
        let fd = (eval(&plus) - eval(&minus)) / (2.0 * h);
        let a = analytic[p];
        let tol = 1e-4 * fd.abs().max(a.abs()).max(1e-3);
        assert!((a - fd).abs() <= tol, "param {p}: analytic {a} vs fd {fd}");
    }
}

#[test]
fn supervised_gradients_match_finite_differences_on_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for probe in 0..10 {
        let net = probe_net(2, 4, 1, 100 + probe);
        let ns = 7;
        let inputs: Vec<f64> = (0..ns * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let targets: Vec<f64> = (0..ns).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, grad) = loss_and_grad_supervised(&net, &inputs, &targets, None).unwrap();
        fd_check_gradient(&net.params_flat(), &grad, |p| {
            let mut n = net.clone();
            n.set_params_flat(p);
            loss_and_grad_supervised(&n, &inputs, &targets, None).unwrap().0
        });
    }
    // Weighted system variant.
    let mut w = Mat::identity(3);
    w[(0, 0)] = 2.0;
    w[(0, 1)] = 0.5;
    w[(1, 0)] = 0.5;
    for probe in 0..5 {
        let net = probe_net(2, 3, 3, 200 + probe);
        let ns = 5;
        let inputs: Vec<f64> = (0..ns * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let targets: Vec<f64> = (0..ns * 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, grad) = loss_and_grad_supervised(&net, &inputs, &targets, Some(&w)).unwrap();
        fd_check_gradient(&net.params_flat(), &grad, |p| {
            let mut n = net.clone();
            n.set_params_flat(p);
            loss_and_grad_supervised(&n, &inputs, &targets, Some(&w))
                .unwrap()
                .0
        });
    }
}

fn residual_probe_scalar(sys: &PdeSystem, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = probe_net(2, 4, 1, seed);
    let n_int = 6;
    let interior: Vec<f64> = (0..n_int * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let boundary: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let btargets: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let weights = ResidualWeights {
        lambda_pde: 1.0,
        lambda_bc: 0.7,
    };
    let (_, grad) =
        loss_and_grad_residual(&net, sys, &interior, &boundary, &btargets, weights, None).unwrap();
    fd_check_gradient(&net.params_flat(), &grad, |p| {
        let mut n = net.clone();
        n.set_params_flat(p);
        loss_and_grad_residual(&n, sys, &interior, &boundary, &btargets, weights, None)
            .unwrap()
            .0
    });
}

#[test]
fn residual_gradients_match_finite_differences_scalar() {
    let adv = make_system("advection1d", Params::default()).unwrap();
    let bur = make_system("burgers1d", Params::default()).unwrap();
    for probe in 0..5 {
        residual_probe_scalar(&adv, 300 + probe);
        residual_probe_scalar(&bur, 310 + probe);
    }
}

#[test]
fn residual_gradients_match_finite_differences_euler() {
    let sys = make_system("euler1d", Params::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for probe in 0..5 {
        // Bias the outputs to a valid state neighborhood so the flux
        // Jacobian and Hessians are evaluated at physical states.
        let mut net = probe_net(2, 4, 3, 400 + probe);
        for w in net.w2.iter_mut() {
            *w *= 0.05;
        }
        net.b2 = vec![1.0, 0.1, 2.5];
        let n_int = 5;
        let interior: Vec<f64> = (0..n_int * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let boundary: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let btargets = vec![1.0, 0.0, 2.5];
        let weights = ResidualWeights {
            lambda_pde: 0.9,
            lambda_bc: 0.4,
        };
        let (_, grad) =
            loss_and_grad_residual(&net, &sys, &interior, &boundary, &btargets, weights, None)
                .unwrap();
        fd_check_gradient(&net.params_flat(), &grad, |p| {
            let mut n = net.clone();
            n.set_params_flat(p);
            loss_and_grad_residual(&n, &sys, &interior, &boundary, &btargets, weights, None)
                .unwrap()
                .0
        });
    }
}

#[test]
fn residual_gradients_match_finite_differences_2d() {
    let sys = make_system("burgers2d", Params::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for probe in 0..5 {
        let net = probe_net(3, 4, 1, 500 + probe);
        let interior: Vec<f64> = (0..5 * 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let weights = ResidualWeights {
            lambda_pde: 1.0,
            lambda_bc: 0.0,
        };
        let (_, grad) =
            loss_and_grad_residual(&net, &sys, &interior, &[], &[], weights, None).unwrap();
        fd_check_gradient(&net.params_flat(), &grad, |p| {
            let mut n = net.clone();
            n.set_params_flat(p);
            loss_and_grad_residual(&n, &sys, &interior, &[], &[], weights, None)
                .unwrap()
                .0
        });
    }
}

#[test]
fn constant_net_has_zero_pde_residual() {
    let sys = make_system("advection1d", Params::default()).unwrap();
    let mut net = Mlp::zeros(2, 4, 1);
    net.b2[0] = 0.37;
    let interior = [0.1, 0.2, -0.3, 0.4, 0.9, -0.9];
    let weights = ResidualWeights {
        lambda_pde: 1.0,
        lambda_bc: 0.0,
    };
    let (loss, _) =
        loss_and_grad_residual(&net, &sys, &interior, &[], &[], weights, None).unwrap();
    assert_eq!(loss, 0.0);
}

#[test]
fn travelling_tanh_profile_is_residual_free() {
    // u(t, x) = tanh(x - a t) satisfies u_t + a u_x = 0 identically.
    let sys = make_system("advection1d", Params::default()).unwrap();
    let mut net = Mlp::zeros(2, 1, 1);
    net.w1[0] = -1.0; // t coefficient = -a with a = 1
    net.w1[1] = 1.0;
    net.w2[0] = 1.0;
    let interior: Vec<f64> = (0..40)
        .flat_map(|i| {
            let t = 0.05 * i as f64;
            vec![t, 1.7 * (i as f64).sin()]
        })
        .collect();
    let weights = ResidualWeights {
        lambda_pde: 1.0,
        lambda_bc: 0.0,
    };
    let (loss, _) =
        loss_and_grad_residual(&net, &sys, &interior, &[], &[], weights, None).unwrap();
    assert!(loss < 1e-20, "J_PDE = {loss}");
}

#[test]
fn zero_pde_weight_reduces_to_boundary_loss() {
    let sys = make_system("advection1d", Params::default()).unwrap();
    let net = probe_net(2, 5, 1, 77);
    let interior = [0.3, 0.3];
    let boundary = [0.0, -1.0, 0.0, 1.0];
    let btargets = [1.0, 0.0];
    let weights = ResidualWeights {
        lambda_pde: 0.0,
        lambda_bc: 2.5,
    };
    let (j, _) =
        loss_and_grad_residual(&net, &sys, &interior, &boundary, &btargets, weights, None)
            .unwrap();
    let mut expected = 0.0;
    for (p, t) in boundary.chunks_exact(2).zip(&btargets) {
        let r = net.forward(p)[0] - t;
        expected += r * r;
    }
    expected = 2.5 * expected / 2.0;
    assert!((j - expected).abs() < 1e-14);
}

// --- training ---------------------------------------------------------------

fn grid_points() -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut points = Vec::new();
    let mut targets = Vec::new();
    for it in 0..10 {
        for ix in 0..32 {
            let t = it as f64 / 9.0;
            let x = -1.0 + 2.0 * ix as f64 / 31.0;
            points.push(vec![t, x]);
            targets.push(if x <= 0.25 * t { 1.0 } else { 0.0 });
        }
    }
    (points, targets)
}

fn quick_cfg(seed: u64) -> TrainConfig {
    TrainConfig {
        lr: 0.2,
        min_epochs: 2,
        max_epochs: 10,
        steps_per_epoch: 60,
        seed,
        eps: 1e-12,
    }
}

#[test]
fn constant_field_trains_to_tiny_loss() {
    let points: Vec<Vec<f64>> = (0..64)
        .map(|i| vec![(i / 8) as f64 / 7.0, (i % 8) as f64 / 7.0])
        .collect();
    let targets = vec![0.7; 64];
    let cfg = TrainConfig {
        lr: 0.3,
        min_epochs: 2,
        max_epochs: 20,
        steps_per_epoch: 200,
        seed: 5,
        eps: 1e-12,
    };
    let (_, report) = train_plain(4, 8, &points, &targets, &cfg).unwrap();
    let last = *report.epoch_losses.last().unwrap();
    assert!(last < 1e-6, "loss {last}");
}

#[test]
fn training_is_bit_deterministic() {
    let (points, targets) = grid_points();
    let cfg = quick_cfg(42);
    let (a, _) = train_plain(4, 8, &points, &targets, &cfg).unwrap();
    let (b, _) = train_plain(4, 8, &points, &targets, &cfg).unwrap();
    assert_eq!(a.stack, b.stack);

    let spec = BeaconsSpec {
        width: 8,
        correctors: 1,
        suppression: AnalyticMap::ArcsinhOverC { c: 2.0 },
        unnormalize: unnormalize_from_targets(&targets, 1),
    };
    let (na, _) = train_beacons(&spec, &points, &targets, &cfg).unwrap();
    let (nb, _) = train_beacons(&spec, &points, &targets, &cfg).unwrap();
    assert_eq!(na, nb);
}

#[test]
fn beacons_head_targets_follow_the_chain_inverse() {
    // Step data with values {0, 1}: the normalized scale is the identity and
    // the head target values are sinh(2 u) in {0, sinh 2}.
    let (points, targets) = grid_points();
    let spec = BeaconsSpec {
        width: 8,
        correctors: 0,
        suppression: AnalyticMap::ArcsinhOverC { c: 2.0 },
        unnormalize: unnormalize_from_targets(&targets, 1),
    };
    assert_eq!(
        spec.unnormalize[0],
        AnalyticMap::Affine {
            scale: 1.0,
            offset: 0.0
        }
    );
    let sinh2 = 2f64.sinh();
    assert!((sinh2 - 3.626860407847019).abs() < 1e-15);
    // Chain target consistency: composing the exact stage maps reproduces
    // the training values.
    for &u in targets.iter() {
        let u01 = spec.unnormalize[0].inverse(u).unwrap();
        let g = spec.suppression.inverse(u01).unwrap();
        let back = spec.unnormalize[0].apply(spec.suppression.apply(g));
        assert!((back - u).abs() < 1e-12);
        if u == 0.0 {
            assert_eq!(g, 0.0);
        } else {
            assert!((g - sinh2).abs() < 1e-15);
        }
    }
    let _ = points;
}

#[test]
fn infer_is_bounded_by_output_bound_through_the_chain() {
    let (points, targets) = grid_points();
    let cfg = quick_cfg(9);
    let spec = BeaconsSpec {
        width: 8,
        correctors: 1,
        suppression: AnalyticMap::ArcsinhOverC { c: 1.5 },
        unnormalize: unnormalize_from_targets(&targets, 1),
    };
    let (net, _) = train_beacons(&spec, &points, &targets, &cfg).unwrap();
    // Extrapolate to three times the training horizon.
    let far: Vec<f64> = vec![3.0, 0.4, 3.0, -0.9, 5.0, 0.0];
    let deep = DeepNet::Beacons(net.clone());
    let outs = infer(&deep, &far);
    // Bound: last learned stage is the corrector (outputs on the normalized
    // scale), mapped through the affine stage.
    let last = net.correctors.last().unwrap();
    let bound = last.output_bound()[0];
    let map = &net.unnormalize[0];
    let raw_bound = map.apply(bound).abs().max(map.apply(-bound).abs());
    for o in outs {
        assert!(o[0].is_finite());
        assert!(o[0].abs() <= raw_bound + 1e-12, "{} > {raw_bound}", o[0]);
    }
}

#[test]
fn inference_at_training_points_reproduces_training_prediction() {
    let (points, targets) = grid_points();
    let cfg = quick_cfg(11);
    let (net, _) = train_plain(4, 8, &points, &targets, &cfg).unwrap();
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let deep = DeepNet::Plain(net.clone());
    let a = infer(&deep, &flat);
    for (p, o) in points.iter().zip(&a) {
        assert_eq!(net.forward(p), *o);
    }
}

#[test]
fn checkpoints_round_trip_bit_exactly() {
    let (points, targets) = grid_points();
    let cfg = quick_cfg(13);
    let dir = tempfile::tempdir().unwrap();

    let (plain, _) = train_plain(4, 8, &points, &targets, &cfg).unwrap();
    let p1 = dir.path().join("plain.json");
    save_checkpoint(&DeepNet::Plain(plain.clone()), 13, &p1).unwrap();
    let (back, seed) = load_checkpoint(&p1).unwrap();
    assert_eq!(seed, 13);
    assert_eq!(back, DeepNet::Plain(plain));

    let spec = BeaconsSpec {
        width: 8,
        correctors: 2,
        suppression: AnalyticMap::ArcsinhOverC { c: 2.0 },
        unnormalize: unnormalize_from_targets(&targets, 1),
    };
    let (b, _) = train_beacons(&spec, &points, &targets, &cfg).unwrap();
    let p2 = dir.path().join("beacons.json");
    save_checkpoint(&DeepNet::Beacons(b.clone()), 14, &p2).unwrap();
    let (back, _) = load_checkpoint(&p2).unwrap();
    assert_eq!(back, DeepNet::Beacons(b));
}

#[test]
fn inverse_domain_violations_are_reported() {
    let m = AnalyticMap::TanhOverC { c: 1.0 };
    assert!(m.inverse(1.5).is_err());
    let m = AnalyticMap::ArctanOverC { c: 2.0 };
    assert!(m.inverse(1.0).is_err());
}

#[test]
fn input_norm_maps_training_box_to_unit_box() {
    let points = vec![vec![0.0, -2.0], vec![1.0, 4.0], vec![0.5, 1.0]];
    let norm = InputNorm::from_samples(&points);
    assert_eq!(norm.apply(&[0.0, -2.0]), vec![-1.0, -1.0]);
    assert_eq!(norm.apply(&[1.0, 4.0]), vec![1.0, 1.0]);
    let mid = norm.apply(&[0.5, 1.0]);
    assert!((mid[0]).abs() < 1e-15 && (mid[1]).abs() < 1e-15);
}
