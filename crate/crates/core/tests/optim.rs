use coordrate::dsbs::{dsbs_joint, f_curve, interp_channel, t_star};
use coordrate::info::{mutual_information, Axis, JointPmf};
use coordrate::optim::oracle::{
    r_opt_two_alternate_grid, r_opt_two_grid, relaxed_grid, wyner_grid, DEFAULT_RESOLUTION,
};
use coordrate::optim::{
    gamma_star, minmax_equivalence_check, pair_terms, r_opt_indv, r_opt_two, relaxed_wyner_ci,
    wyner_ci, OptimizerConfig, CONSTRAINT_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair(p: [f64; 4]) -> JointPmf {
    JointPmf::new(vec![Axis::new("X", 2), Axis::new("Y", 2)], p.to_vec()).unwrap()
}

fn random_pair(rng: &mut ChaCha8Rng) -> JointPmf {
    let w: Vec<f64> = (0..4).map(|_| -rng.random::<f64>().ln()).collect();
    JointPmf::normalized(vec![Axis::new("X", 2), Axis::new("Y", 2)], w).unwrap()
}

fn equal_bits(t: usize) -> JointPmf {
    let axes: Vec<Axis> = (1..=t).map(|i| Axis::new(&format!("X{i}"), 2)).collect();
    let mut p = vec![0.0; 1 << t];
    p[0] = 0.5;
    p[(1 << t) - 1] = 0.5;
    JointPmf::new(axes, p).unwrap()
}

fn small(k: usize) -> OptimizerConfig {
    OptimizerConfig {
        card_u: Some(k),
        ..Default::default()
    }
}

fn ixy(q: &JointPmf) -> f64 {
    mutual_information(q, &["X"], &["Y"]).unwrap()
}

#[test]
fn wyner_on_dsbs_and_independent_sources() {
    let r = wyner_ci(&dsbs_joint(0.1).unwrap(), &OptimizerConfig::default()).unwrap();
    assert!((r.value - 0.872761).abs() < 1e-3, "{}", r.value);
    assert!(r.extra("markov_residual").unwrap() <= CONSTRAINT_TOL);
    let ind = JointPmf::product(
        &JointPmf::new(vec![Axis::new("X", 2)], vec![0.3, 0.7]).unwrap(),
        &JointPmf::new(vec![Axis::new("Y", 2)], vec![0.6, 0.4]).unwrap(),
    )
    .unwrap();
    assert!(wyner_ci(&ind, &small(2)).unwrap().value.abs() < 1e-6);
}

#[test]
fn wyner_matches_grid_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let q = random_pair(&mut rng);
        let g = wyner_grid(&q, DEFAULT_RESOLUTION).unwrap();
        let o = wyner_ci(&q, &small(2)).unwrap();
        assert!((o.value - g.value).abs() < 2e-3, "{} vs {}", o.value, g.value);
    }
}

#[test]
fn relaxed_endpoints_and_grid() {
    let q = dsbs_joint(0.1).unwrap();
    let i = ixy(&q);
    assert!(relaxed_wyner_ci(&q, i, &small(2)).unwrap().value < 1e-6);
    let w = wyner_ci(&q, &small(2)).unwrap().value;
    let r0 = relaxed_wyner_ci(&q, 0.0, &small(2)).unwrap().value;
    assert!((w - r0).abs() < 1e-9);
    let r = relaxed_wyner_ci(&q, 0.3, &small(2)).unwrap();
    let g = relaxed_grid(&q, 0.3, DEFAULT_RESOLUTION).unwrap();
    assert!((r.value - g.value).abs() < 2e-3, "{} vs {}", r.value, g.value);
    assert!(r.extra("cmi").unwrap() <= 0.3 + CONSTRAINT_TOL);
    assert!(relaxed_wyner_ci(&q, -0.1, &small(2)).is_err());
}

#[test]
fn relaxed_is_nonincreasing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let q = random_pair(&mut rng);
        let i = ixy(&q);
        let vals: Vec<f64> = [0.1, 0.4, 0.7]
            .iter()
            .map(|s| relaxed_wyner_ci(&q, s * i, &small(4)).unwrap().value)
            .collect();
        assert!(vals[0] >= vals[1] - 2e-3 && vals[1] >= vals[2] - 2e-3, "{vals:?}");
    }
}

#[test]
fn r_opt_two_examples_and_bounds() {
    let ind = pair([0.18, 0.12, 0.42, 0.28]);
    assert!(r_opt_two(&ind, &small(2)).unwrap().value.abs() < 1e-6);
    let same = pair([0.5, 0.0, 0.0, 0.5]);
    assert!((r_opt_two(&same, &OptimizerConfig::default()).unwrap().value - 0.5).abs() < 1e-3);
    let q = dsbs_joint(0.2).unwrap();
    let r = r_opt_two(&q, &OptimizerConfig::default()).unwrap();
    assert!(r.value <= 0.177598 + 1e-3 && r.value >= 0.139036, "{}", r.value);
    let terms = pair_terms(&q, &r.channel).unwrap();
    assert!(r.value >= terms.primary() - 1e-9);
}

#[test]
fn r_opt_two_sits_between_information_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..4 {
        let q = random_pair(&mut rng);
        let i = ixy(&q);
        let r = r_opt_two(&q, &OptimizerConfig::default()).unwrap().value;
        let c = wyner_ci(&q, &small(2)).unwrap().value;
        assert!(r >= 0.5 * i - 1e-6, "{r} < {}", 0.5 * i);
        assert!(r <= (0.5 * c).min(i) + 2e-3, "{r} {c} {i}");
    }
}

#[test]
fn dsbs_channel_dominates_optimizer() {
    for a in [0.1, 0.2] {
        let q = dsbs_joint(a).unwrap();
        let ts = t_star(a).unwrap();
        let f = f_curve(a, ts).unwrap();
        let at = pair_terms(&q, &interp_channel(a, ts).unwrap()).unwrap().primary();
        assert!(at <= f + 1e-9, "{at} > {f}");
        let r = r_opt_two(&q, &OptimizerConfig::default()).unwrap().value;
        assert!(r <= f + 1e-6, "{r} > {f}");
    }
}

#[test]
fn r_opt_indv_reduces_and_scales() {
    let q = pair([0.4, 0.1, 0.15, 0.35]);
    let a = r_opt_two(&q, &small(3)).unwrap().value;
    let b = r_opt_indv(&q, &small(3)).unwrap().value;
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    let r3 = r_opt_indv(&equal_bits(3), &small(4)).unwrap().value;
    assert!((r3 - 2.0 / 3.0).abs() < 1e-3, "{r3}");
    let axes: Vec<Axis> = (1..=3).map(|i| Axis::new(&format!("X{i}"), 2)).collect();
    let ind = JointPmf::uniform(axes).unwrap();
    assert!(r_opt_indv(&ind, &small(2)).unwrap().value.abs() < 1e-6);
}

#[test]
fn gamma_star_examples() {
    let ind = pair([0.18, 0.12, 0.42, 0.28]);
    assert!(gamma_star(&ind, &small(2)).unwrap().0.abs() < 1e-4);
    let same = pair([0.5, 0.0, 0.0, 0.5]);
    let (g, _) = gamma_star(&same, &small(2)).unwrap();
    assert!((g - 0.5).abs() < 1e-3, "{g}");
}

#[test]
fn gamma_star_matches_r_opt_on_dsbs() {
    let q = dsbs_joint(0.1).unwrap();
    let cfg = small(2);
    let (g, res) = gamma_star(&q, &cfg).unwrap();
    assert!((0.2655..=0.3006).contains(&g), "{g}");
    assert!((res.value - g).abs() <= 1e-3);
    let c = relaxed_wyner_ci(&q, g, &cfg).unwrap().value;
    assert!((c - g).abs() <= 1e-3, "{c} vs {g}");
    let r = r_opt_two(&q, &OptimizerConfig::default()).unwrap().value;
    assert!((r - g).abs() <= 2e-3, "{r} vs {g}");
}

#[test]
fn minmax_objectives_agree() {
    let ind = pair([0.18, 0.12, 0.42, 0.28]);
    let m = minmax_equivalence_check(&ind, &small(2)).unwrap();
    assert!(m.value_a.abs() < 1e-6 && m.value_b.abs() < 1e-6);
    let m = minmax_equivalence_check(&dsbs_joint(0.1).unwrap(), &OptimizerConfig::default()).unwrap();
    assert!(m.difference <= 2e-3, "{m:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let q = random_pair(&mut rng);
    let ga = r_opt_two_grid(&q, DEFAULT_RESOLUTION).unwrap().value;
    let gb = r_opt_two_alternate_grid(&q, DEFAULT_RESOLUTION).unwrap().value;
    assert!((ga - gb).abs() <= 2e-3);
    let m = minmax_equivalence_check(&q, &OptimizerConfig::default()).unwrap();
    assert!(m.difference <= 2e-3 && (m.value_a - ga).abs() <= 2e-3, "{m:?} {ga}");
}

#[test]
fn results_are_deterministic_and_validated() {
    let q = pair([0.4, 0.1, 0.15, 0.35]);
    let a = r_opt_two(&q, &small(2)).unwrap();
    let b = r_opt_two(&q, &small(2)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.per_restart_values(), b.per_restart_values());
    let bad = OptimizerConfig {
        restarts: 0,
        ..Default::default()
    };
    assert!(r_opt_two(&q, &bad).is_err());
    assert!(wyner_ci(&equal_bits(3), &small(2)).is_err());
}
