mod common;

use std::collections::BTreeSet;

use common::{attached_by_search, random_param, random_unimodular, unstable_by_search};
use hyperloc::cherednik::cyclic_quiver_matrix;
use hyperloc::comparability::{d1_matrix, validate_witness, Attachment, ParamSpace};
use hyperloc::covectors::{covectors_brute_force, enumerate_covectors};
use hyperloc::exactnum::{int, ParamScalar, Rational};
use hyperloc::git_fan::{semistable_point, verify_semistability};
use hyperloc::IntMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn semistability_agrees_with_bounded_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let matrices = [
        IntMatrix::from_i64(&[&[1, -1]]),
        IntMatrix::from_i64(&[&[1, 1, -1]]),
        cyclic_quiver_matrix(3).unwrap(),
        IntMatrix::from_i64(&[&[1, 0, 1, 2], &[0, 1, 1, -1]]),
    ];
    for a in &matrices {
        for _ in 0..60 {
            let n = a.cols();
            let xs: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let ys: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let delta: Vec<Rational> = (0..a.rows()).map(|_| int(rng.gen_range(-4..=4))).collect();
            let x: Vec<Rational> = xs.iter().map(|&b| int(b as i64)).collect();
            let y: Vec<Rational> = ys.iter().map(|&b| int(b as i64)).collect();
            let verdict = semistable_point(a, &x, &y, &delta);
            assert!(verify_semistability(a, &x, &y, &delta, &verdict));
            assert_eq!(
                !verdict.is_semistable(),
                unstable_by_search(a, &xs, &ys, &delta, 20),
                "A={a:?} x={xs:?} y={ys:?} delta={delta:?}"
            );
        }
    }
}

#[test]
fn attachment_agrees_with_bounded_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d + 1..=4);
        let a = random_unimodular(&mut rng, d, n);
        let space = ParamSpace::new(&a);
        let chi: Vec<ParamScalar> = (0..d).map(|_| random_param(&mut rng)).collect();
        for c in &space.covectors {
            let got = space.decide(&c.signs, &chi).unwrap();
            if let Attachment::Attached { witness } = &got {
                assert!(validate_witness(&a, &c.signs, &chi, witness));
            }
            assert_ne!(got, Attachment::Inconclusive { radius: space.radius });
            assert_eq!(got.is_attached(), attached_by_search(&a, &c.signs, &chi, 25), "A={a:?} {} chi={chi:?}", c.label());
        }
    }
}

#[test]
fn covectors_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut matrices: Vec<IntMatrix> = (2..=6).map(|m| cyclic_quiver_matrix(m).unwrap()).collect();
    matrices.push(IntMatrix::from_i64(&[&[2, 3]]));
    for _ in 0..6 {
        matrices.push(random_unimodular(&mut rng, 2, 5));
    }
    for a in matrices {
        let fast: BTreeSet<_> = enumerate_covectors(&a).into_iter().map(|c| c.signs).collect();
        let slow: BTreeSet<_> = covectors_brute_force(&a).into_iter().collect();
        assert_eq!(fast, slow, "{a:?}");
    }
}

#[test]
fn finitely_many_q_sets_on_a_grid() {
    let a = cyclic_quiver_matrix(3).unwrap();
    let space = ParamSpace::new(&a);
    let mut seen = BTreeSet::new();
    for c1 in -3..=3 {
        for c2 in -3..=3 {
            let q = space.q_set(&[ParamScalar::from_int(c1), ParamScalar::from_int(c2)]).unwrap();
            seen.insert(q.signs());
        }
    }
    assert!(seen.len() <= 1 << space.covectors.len());
    assert!(seen.len() < 49);
}

fn d1_space() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![(1usize, 2usize), (1, 3), (2, 3), (2, 4), (3, 4)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arrow_is_reflexive_and_transitive((k, n) in d1_space(), c in -5i64..=5, c2 in -5i64..=5, c3 in -5i64..=5) {
        let space = ParamSpace::new(&d1_matrix(k, n));
        let p = |v: i64| vec![ParamScalar::from_int(v)];
        prop_assert!(space.chi_arrow(&p(c), &p(c)).unwrap().holds);
        let ab = space.chi_arrow(&p(c), &p(c2)).unwrap().holds;
        let bc = space.chi_arrow(&p(c2), &p(c3)).unwrap().holds;
        if ab && bc {
            prop_assert!(space.chi_arrow(&p(c), &p(c3)).unwrap().holds);
        }
    }

    #[test]
    fn q_set_witnesses_validate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_unimodular(&mut rng, 2, 4);
        let chi: Vec<ParamScalar> = (0..2).map(|_| random_param(&mut rng)).collect();
        let q = ParamSpace::new(&a).q_set(&chi).unwrap();
        prop_assert!(!q.partial);
        for c in &q.covectors {
            prop_assert!(validate_witness(&a, &c.signs, &chi, &q.witnesses[&c.label()]));
        }
    }
}
