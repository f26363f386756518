use coordrate::dsbs::{dsbs_joint, wyner_channel};
use coordrate::info::*;
use proptest::prelude::*;

fn bits(names: &[&str]) -> Vec<Axis> {
    names.iter().map(|n| Axis::new(*n, 2)).collect()
}

fn pmf_from(axes: Vec<Axis>, w: &[f64]) -> JointPmf {
    JointPmf::normalized(axes, w.iter().map(|v| v + 1e-3).collect()).unwrap()
}

/// Random joint over three axes of sizes 2, 3, 2.
fn joint3() -> impl Strategy<Value = JointPmf> {
    prop::collection::vec(0.0f64..1.0, 12)
        .prop_map(|w| pmf_from(vec![Axis::new("A", 2), Axis::new("B", 3), Axis::new("C", 2)], &w))
}

/// Random joint over `X, Y, U`, all binary.
fn joint_xyu() -> impl Strategy<Value = JointPmf> {
    prop::collection::vec(0.0f64..1.0, 8).prop_map(|w| pmf_from(bits(&["X", "Y", "U"]), &w))
}

fn h(p: &JointPmf, names: &[&str]) -> f64 {
    p.entropy_of(names).unwrap()
}

#[test]
fn entropy_examples() {
    assert_eq!(entropy(&JointPmf::uniform(bits(&["X"])).unwrap()), 1.0);
    assert_eq!(entropy(&JointPmf::point_mass(bits(&["X", "Y"]), &[1, 0]).unwrap()), 0.0);
    let q = dsbs_joint(0.1).unwrap();
    assert!((entropy(&q) - (1.0 + binary_entropy(0.1).unwrap())).abs() < 1e-12);
    assert!((entropy(&q) - 1.468996).abs() < 1e-6);
    assert!(JointPmf::new(bits(&["X"]), vec![0.7, 0.2]).is_err());
    assert!(JointPmf::new(bits(&["X"]), vec![1.2, -0.2]).is_err());
}

#[test]
fn mutual_information_examples() {
    assert!((mutual_information(&dsbs_joint(0.2).unwrap(), &["X"], &["Y"]).unwrap() - 0.278072).abs() < 1e-6);
    let prod = JointPmf::new(bits(&["X", "Y"]), vec![0.12, 0.28, 0.18, 0.42]).unwrap();
    assert!(mutual_information(&prod, &["X"], &["Y"]).unwrap().abs() < 1e-12);
    let same = JointPmf::new(bits(&["X", "Y"]), vec![0.5, 0.0, 0.0, 0.5]).unwrap();
    assert!((mutual_information(&same, &["X"], &["Y"]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn markov_channel_makes_conditional_information_vanish() {
    for a in [0.05, 0.1, 0.3] {
        let p = dsbs_joint(a).unwrap().compose(&wyner_channel(a).unwrap()).unwrap();
        assert!(conditional_mutual_information(&p, &["X"], &["Y"], &["U"]).unwrap().abs() < 1e-9);
    }
}

#[test]
fn calculus_examples() {
    let q = dsbs_joint(0.1).unwrap();
    let scalar = q.marginal(&[]).unwrap();
    assert_eq!(scalar.probs(), &[1.0]);
    let copy = q.compose(&Channel::identity(&Axis::new("X", 2), "X2").unwrap()).unwrap();
    assert!((mutual_information(&copy, &["X"], &["X2"]).unwrap() - 1.0).abs() < 1e-12);
    assert!(conditional_mutual_information(&copy, &["X2"], &["Y"], &["X"]).unwrap().abs() < 1e-12);
    let given = q.condition(&[("X", 0)]).unwrap();
    assert!((given.probs()[0] - 0.05 / 0.5).abs() < 1e-12);
    assert!((given.probs()[1] - 0.45 / 0.5).abs() < 1e-12);
    assert!(q.condition(&[("X", 2)]).is_err());
    assert!(q.marginal(&["Z"]).is_err());
}

#[test]
fn multivariate_examples() {
    let p = pmf_from(bits(&["A", "B", "C"]), &[0.3, 0.1, 0.05, 0.2, 0.15, 0.02, 0.08, 0.1]);
    let tc = total_correlation(&p, &[&["A"], &["B"], &["C"]], &[]).unwrap();
    assert!((tc - (h(&p, &["A"]) + h(&p, &["B"]) + h(&p, &["C"]) - h(&p, &["A", "B", "C"]))).abs() < 1e-12);
    let all = h(&p, &["A", "B", "C"]);
    let dtc = dual_total_correlation(&p, &[&["A"], &["B"], &["C"]], &[]).unwrap();
    let direct = all - (all - h(&p, &["B", "C"])) - (all - h(&p, &["A", "C"])) - (all - h(&p, &["A", "B"]));
    assert!((dtc - direct).abs() < 1e-12);
    assert!(total_correlation(&p, &[&["A"], &["A"]], &[]).is_err());
    assert!(dual_total_correlation(&p, &[&["A"], &["B"]], &["B"]).is_err());
}

#[test]
fn conditioning_on_an_independent_axis_changes_nothing() {
    let pair = JointPmf::new(bits(&["A", "B"]), vec![0.4, 0.1, 0.15, 0.35]).unwrap();
    let c = JointPmf::new(vec![Axis::new("C", 3)], vec![0.2, 0.5, 0.3]).unwrap();
    let p = pair.product(&c).unwrap();
    let i = mutual_information(&p, &["A"], &["B"]).unwrap();
    assert!((conditional_mutual_information(&p, &["A"], &["B"], &["C"]).unwrap() - i).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entropy_is_bounded_by_the_alphabet(p in joint3()) {
        let e = entropy(&p);
        prop_assert!(e >= -1e-12 && e <= 12f64.log2() + 1e-12);
    }

    #[test]
    fn measures_are_non_negative(p in joint3()) {
        let slack = -1e-9;
        prop_assert!(mutual_information(&p, &["A"], &["B", "C"]).unwrap() >= slack);
        prop_assert!(conditional_mutual_information(&p, &["A"], &["B"], &["C"]).unwrap() >= slack);
        prop_assert!(total_correlation(&p, &[&["A"], &["B"], &["C"]], &[]).unwrap() >= slack);
        prop_assert!(total_correlation(&p, &[&["A"], &["C"]], &["B"]).unwrap() >= slack);
        prop_assert!(dual_total_correlation(&p, &[&["A"], &["B"], &["C"]], &[]).unwrap() >= slack);
    }

    #[test]
    fn chain_identity(p in joint_xyu()) {
        let lhs = mutual_information(&p, &["X", "Y"], &["U"]).unwrap()
            + conditional_mutual_information(&p, &["X"], &["Y"], &["U"]).unwrap();
        let rhs = mutual_information(&p, &["X"], &["Y"]).unwrap()
            + conditional_mutual_information(&p, &["X"], &["U"], &["Y"]).unwrap()
            + conditional_mutual_information(&p, &["Y"], &["U"], &["X"]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn two_group_correlations_are_conditional_information(p in joint3()) {
        let cmi = conditional_mutual_information(&p, &["A"], &["C"], &["B"]).unwrap();
        prop_assert!((total_correlation(&p, &[&["A"], &["C"]], &["B"]).unwrap() - cmi).abs() < 1e-9);
        prop_assert!((dual_total_correlation(&p, &[&["A"], &["C"]], &["B"]).unwrap() - cmi).abs() < 1e-9);
    }

    #[test]
    fn inverse_binary_entropy_round_trips(t in 0.0f64..=0.5) {
        let back = inv_binary_entropy(binary_entropy(t).unwrap()).unwrap();
        prop_assert!((back - t).abs() < 1e-9);
    }

    #[test]
    fn tv_is_a_metric(a in joint3(), b in joint3(), c in joint3()) {
        let d = |p: &JointPmf, q: &JointPmf| tv_distance(p, q).unwrap();
        prop_assert!(d(&a, &a) == 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!(d(&a, &b) <= 2.0 + 1e-12);
    }

    #[test]
    fn composed_channels_stay_normalized(p in joint_xyu(), w in prop::collection::vec(0.0f64..1.0, 12)) {
        let ch = Channel::from_fn(bits(&["X", "U"]), vec![Axis::new("V", 3)], |inp, out| {
            let row = &w[(inp[0] * 2 + inp[1]) * 3..][..3];
            (row[out[0]] + 1e-3) / (row.iter().sum::<f64>() + 3e-3)
        })
        .unwrap();
        let j = p.compose(&ch).unwrap();
        prop_assert!((j.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(conditional_mutual_information(&j, &["V"], &["Y"], &["X", "U"]).unwrap().abs() < 1e-9);
    }
}
