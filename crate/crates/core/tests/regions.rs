use std::collections::HashMap;
use std::time::Instant;

use coordrate::regions::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tuple(rng: &mut ChaCha8Rng, h: usize, hx: f64) -> RateTuple {
    RateTuple::new(
        rng.random_range(0.0..hx),
        (0..h).map(|_| rng.random_range(0.0..hx)).collect(),
    )
    .unwrap()
}

#[test]
fn general_lp_matches_closed_forms() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 2..=4 {
        let indv = AccessStructure::individual(t).unwrap();
        let fh = AccessStructure::forehead(t).unwrap();
        let mut members = (0, 0);
        for _ in 0..1000 {
            let hx = rng.random_range(0.2..2.0);
            let rt = random_tuple(&mut rng, t, hx);
            let a = region_equal_indv(hx, t, &rt).unwrap();
            assert_eq!(a, region_equal_general(hx, &indv, &rt).unwrap(), "{rt:?}");
            let b = region_equal_forehead(hx, t, &rt).unwrap();
            assert_eq!(b, region_equal_general(hx, &fh, &rt).unwrap(), "{rt:?}");
            members.0 += a as usize;
            members.1 += b as usize;
        }
        assert!(members.0 > 50 && members.0 < 950, "{members:?}");
        assert!(members.1 > 50 && members.1 < 950, "{members:?}");
    }
    eprintln!("region equivalence in {:?}", start.elapsed());
}

#[test]
fn two_processor_general_matches_two_equal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let acc = AccessStructure::individual(2).unwrap();
    for _ in 0..500 {
        let rt = random_tuple(&mut rng, 2, 1.0);
        assert_eq!(
            region_two_equal(1.0, &rt).unwrap(),
            region_equal_general(1.0, &acc, &rt).unwrap()
        );
    }
}

#[test]
fn symbolic_elimination_reproduces_region() {
    let pre: LinearSystem =
        serde_json::from_str(include_str!("data/pre_elimination.json")).unwrap();
    let expected: LinearSystem =
        serde_json::from_str(include_str!("data/eliminated_region.json")).unwrap();
    let out = fme_eliminate(&pre, "R0").unwrap();
    for i in &out.ineqs {
        eprintln!("{i}");
    }
    let mut exp = expected.clone();
    exp.assumptions = out.assumptions.clone();
    assert_eq!(out.ineqs.len(), 6);
    assert_eq!(out.canonical_set(), exp.canonical_set());
    assert!(out.ineqs.iter().all(|i| i.rel == Relation::Gt));
}

#[test]
fn random_projection_agrees_with_interval_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let vars = ["x", "y", "z"];
    for _ in 0..100 {
        let m = rng.random_range(2..=8);
        let ineqs: Vec<Inequality> = (0..m)
            .map(|_| {
                let terms: Vec<(&str, Rational)> = vars
                    .iter()
                    .map(|v| (*v, rational::q(rng.random_range(-3..=3), 1)))
                    .collect();
                let lhs = LinearForm::from_terms(&terms, rational::q(rng.random_range(-5..=5), 1));
                Inequality::new(lhs, Relation::Ge, LinearForm::zero())
            })
            .collect();
        let sys = LinearSystem::new(vars.iter().map(|s| s.to_string()).collect(), ineqs, vec![])
            .unwrap();
        let forms: Vec<LinearForm> = sys.ineqs.iter().map(Inequality::expr).collect();
        let proj = fme_eliminate(&sys, "z").unwrap();
        let pforms: Vec<LinearForm> = proj.ineqs.iter().map(Inequality::expr).collect();
        for _ in 0..100 {
            let mut pt = HashMap::new();
            pt.insert("x".to_string(), rational::q(rng.random_range(-40..=40), 4));
            pt.insert("y".to_string(), rational::q(rng.random_range(-40..=40), 4));
            let inside = pforms
                .iter()
                .all(|f| f.evaluate_exact(&pt).map(|v| v >= Rational::from_integer(0.into())).unwrap());
            assert_eq!(inside, extends(&forms, "z", &pt).unwrap());
        }
    }
}
