use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcontrol::control::{classical_control, controlled_output, stinespring_oracle, switch_output};
use qcontrol::discrimination::{diamond_bound, output_distance, trace_distance};
use qcontrol::implementation::{is_admissible, realize, standard_implementation};
use qcontrol::info::{binary_entropy, entropy, holevo_lower_bound};
use qcontrol::linalg::{choi_vec, unvec};
use qcontrol::random::{
    random_admissible_t, random_channel, random_density, random_env, random_isometry, random_matrix,
    random_matrix_with_norm, random_pure_density, random_unitary,
};
use qcontrol::{
    CMatrix, Channel64, ChannelImplementation, ControlState, DiscriminationInstance, Ensemble, ImplementationKind,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn control(theta: f64, phase: f64) -> ControlState<f64> {
    ControlState::new(
        Complex::new(theta.cos(), 0.0),
        Complex::from_polar(theta.sin(), phase),
    )
    .unwrap()
}

fn implementation(d: usize, k: usize, r: &mut ChaCha8Rng) -> ChannelImplementation<f64> {
    ChannelImplementation::new(random_channel(d, k, r), random_env(k, r)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn choi_vec_roundtrip(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let m: CMatrix = random_matrix(rows, cols, &mut rng(seed));
        prop_assert!(unvec(&choi_vec(&m)).approx_eq(&m, 0.0));
    }

    #[test]
    fn channel_outputs_are_states(seed in any::<u64>(), d in 2usize..5, k in 1usize..5) {
        let mut r = rng(seed);
        let ch: Channel64 = random_channel(d, k, &mut r);
        let rho: CMatrix = random_density(d, &mut r);
        let out = ch.apply(&rho).unwrap();
        prop_assert!(out.validate_density(1e-10).is_ok());
    }

    #[test]
    fn remix_preserves_action_and_t(seed in any::<u64>(), d in 2usize..4, k in 1usize..4, extra in 0usize..2) {
        let mut r = rng(seed);
        let imp = implementation(d, k, &mut r);
        let u: CMatrix = random_isometry(k + extra, k, &mut r);
        let remixed = imp.remix(&u).unwrap();
        let rho: CMatrix = random_density(d, &mut r);
        let a = imp.channel().apply(&rho).unwrap();
        let b = remixed.channel().apply(&rho).unwrap();
        prop_assert!(a.approx_eq(&b, 1e-12));
        let ta = imp.transformation_matrix().into_inner();
        let tb = remixed.transformation_matrix().into_inner();
        prop_assert!(ta.approx_eq(&tb, 1e-10));
    }

    #[test]
    fn forward_t_is_admissible(seed in any::<u64>(), d in 2usize..4, k in 1usize..5) {
        let mut r = rng(seed);
        let imp = implementation(d, k, &mut r);
        let verdict = is_admissible(imp.channel(), imp.transformation_matrix().matrix()).unwrap();
        prop_assert!(verdict.admissible, "{:?}", verdict);
    }

    #[test]
    fn realize_roundtrip(seed in any::<u64>(), d in 2usize..4, k in 1usize..5) {
        let mut r = rng(seed);
        let ch: Channel64 = random_channel(d, k, &mut r);
        let t = random_admissible_t(&ch, &mut r);
        let imp = realize(&ch, &t).unwrap();
        prop_assert!(imp.transformation_matrix().matrix().approx_eq(&t, 1e-10));
        let env_norm: f64 = imp.env().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!(env_norm <= 1.0 + 1e-10);
    }

    #[test]
    fn depolarising_membership(seed in any::<u64>(), d in 2usize..4, s in 0.0f64..2.0) {
        prop_assume!((s - 1.0).abs() > 1e-6);
        let t: CMatrix = random_matrix_with_norm(d, s / d as f64, &mut rng(seed));
        let verdict = is_admissible(&Channel64::depolarising(d).unwrap(), &t).unwrap();
        prop_assert_eq!(verdict.admissible, s <= 1.0);
    }

    #[test]
    fn dephasing_family_membership(p in 0.01f64..0.99, angle in 0.0f64..6.3, r2 in 0.0f64..1.3) {
        prop_assume!((r2 - 1.0).abs() > 1e-6);
        let radius = r2.sqrt();
        let alpha = Complex::new(radius * angle.cos(), 0.0);
        let beta = Complex::from_polar(radius * angle.sin(), angle);
        let ch = Channel64::phase_flip(p).unwrap();
        let t = &CMatrix::identity(2).scale(alpha * (1.0 - p).sqrt())
            + &qcontrol::channel::pauli_z::<f64>().scale(beta * p.sqrt());
        prop_assert_eq!(is_admissible(&ch, &t).unwrap().admissible, r2 <= 1.0);
        let built = standard_implementation(ImplementationKind::PhaseFlip { p, alpha, beta }, 2);
        prop_assert_eq!(built.is_ok(), r2 <= 1.0);
    }

    #[test]
    fn closed_form_matches_purification(seed in any::<u64>(), d in 2usize..4, theta in 0.0f64..1.58, phase in 0.0f64..6.3) {
        let mut r = rng(seed);
        let i0 = implementation(d, 1 + (seed % 3) as usize, &mut r);
        let i1 = implementation(d, 1 + (seed / 3 % 3) as usize, &mut r);
        let rho: CMatrix = random_density(d, &mut r);
        let c = control(theta, phase);
        let a = controlled_output(&i0, &i1, c, &rho).unwrap();
        let b = stinespring_oracle(&i0, &i1, c, &rho).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-10);
        prop_assert!(a.min_eigenvalue() >= -1e-10);
        prop_assert!((a.matrix().trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(a.offdiag10().approx_eq(&a.offdiag01().dagger(), 1e-14));
    }

    #[test]
    fn classical_control_is_decohered_coherent_control(seed in any::<u64>(), theta in 0.0f64..1.58) {
        let mut r = rng(seed);
        let i0 = implementation(2, 2, &mut r);
        let i1 = implementation(2, 3, &mut r);
        let rho: CMatrix = random_density(2, &mut r);
        let c = control(theta, 0.3);
        let coherent = controlled_output(&i0, &i1, c, &rho).unwrap();
        let weights = (c.a().norm_sqr(), c.b().norm_sqr());
        let classical = classical_control(&i0, &i1, weights, &rho).unwrap();
        prop_assert!(coherent.decohered().matrix().approx_eq(classical.matrix(), 1e-14));
    }

    #[test]
    fn switch_ignores_kraus_representation(seed in any::<u64>(), d in 2usize..4, theta in 0.0f64..1.58) {
        let mut r = rng(seed);
        let a: Channel64 = random_channel(d, 2, &mut r);
        let b: Channel64 = random_channel(d, 3, &mut r);
        let rho: CMatrix = random_density(d, &mut r);
        let c = control(theta, 1.1);
        let before = switch_output(&a, &b, c, &rho).unwrap();
        let ua: CMatrix = random_unitary(2, &mut r);
        let ub: CMatrix = random_isometry(4, 3, &mut r);
        let after = switch_output(&a.remix(&ua).unwrap(), &b.remix(&ub).unwrap(), c, &rho).unwrap();
        prop_assert!(before.matrix().approx_eq(after.matrix(), 1e-10));
        prop_assert!(before.min_eigenvalue() >= -1e-10);
        prop_assert!((before.matrix().trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn holevo_is_bounded(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let ch: Channel64 = random_channel(2, 2, &mut r);
        let items = (0..n).map(|_| (1.0 / n as f64, random_pure_density(2, &mut r))).collect();
        let chi = holevo_lower_bound(&ch, &Ensemble::new(items).unwrap()).unwrap();
        prop_assert!(chi >= -1e-10 && chi <= (n as f64).log2().min(1.0) + 1e-10);
    }

    #[test]
    fn entropy_bounds(seed in any::<u64>(), d in 1usize..6) {
        let h = entropy(&random_density::<f64, _>(d, &mut rng(seed))).unwrap();
        prop_assert!(h >= 0.0 && h <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn binary_entropy_symmetric(p in 0.0f64..=1.0) {
        let h = binary_entropy(p).unwrap();
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert!((h - binary_entropy(1.0 - p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let (a, b, c): (CMatrix, CMatrix, CMatrix) =
            (random_density(d, &mut r), random_density(d, &mut r), random_density(d, &mut r));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-12);
    }

    #[test]
    fn distance_closed_form_and_bound(seed in any::<u64>(), d in 2usize..4, theta in 0.05f64..1.5) {
        let mut r = rng(seed);
        let fixed = implementation(d, 2, &mut r);
        let ch: Channel64 = random_channel(d, 3, &mut r);
        let ta = ChannelImplementation::new(ch.clone(), random_env(3, &mut r)).unwrap();
        let tb = ChannelImplementation::new(ch, random_env(3, &mut r)).unwrap();
        let inst = DiscriminationInstance::new(fixed, ta.clone(), tb.clone()).unwrap();
        let rho: CMatrix = random_density(d, &mut r);
        let dist = output_distance(&inst, control(theta, 0.4), &rho).unwrap();
        prop_assert!(dist.deviation() <= 1e-10);
        let bound = diamond_bound(
            ta.transformation_matrix().matrix(),
            tb.transformation_matrix().matrix(),
        ).unwrap();
        prop_assert!(dist.direct <= bound + 1e-10);
    }
}
