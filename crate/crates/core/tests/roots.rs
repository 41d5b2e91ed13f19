use std::collections::HashSet;

use kmlat::coxeter::{GeneralizedCartanMatrix, RootVector, Sign, WeylGroup};
use kmlat::datum::affine_a;
use kmlat::roots::{BalancedPair, Prenilpotence, Root, RootSystem};
use proptest::prelude::*;

fn system(rows: Vec<Vec<i64>>) -> RootSystem {
    RootSystem::new(WeylGroup::new(
        GeneralizedCartanMatrix::from_rows(rows).unwrap(),
    ))
}

fn vectors(roots: &[Root]) -> HashSet<RootVector> {
    roots.iter().map(|r| r.vector().clone()).collect()
}

#[test]
fn four_pairs_rule_in_rank_two() {
    for a in 0..=4i64 {
        for b in 0..=4i64 {
            if (a == 0) != (b == 0) {
                continue;
            }
            let rs = system(vec![vec![2, -a], vec![-b, 2]]);
            let finite = a * b < 4;
            let pool = rs.positive_roots(6).unwrap();
            for (i, x) in pool.iter().enumerate() {
                for y in &pool[i + 1..] {
                    let pairs = [
                        (x.clone(), y.clone()),
                        (x.clone(), y.opposite()),
                        (x.opposite(), y.clone()),
                        (x.opposite(), y.opposite()),
                    ];
                    let verdicts: Vec<Prenilpotence> = pairs
                        .iter()
                        .map(|(p, r)| rs.is_prenilpotent(p, r, 10).unwrap())
                        .collect();
                    if finite {
                        assert!(
                            verdicts.iter().all(|v| *v == Prenilpotence::Yes),
                            "{a},{b}: {verdicts:?}"
                        );
                    } else if !verdicts.contains(&Prenilpotence::Unresolved) {
                        let yes = verdicts
                            .iter()
                            .filter(|v| **v == Prenilpotence::Yes)
                            .count();
                        assert_eq!(
                            yes,
                            2,
                            "{a},{b} {} {}: {verdicts:?}",
                            x.vector(),
                            y.vector()
                        );
                    }
                }
            }
        }
    }
}

fn rank3() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]],
        vec![vec![2, -2, 0], vec![-2, 2, -1], vec![0, -1, 2]],
        vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -1, 2]],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interval_and_prenilpotence_symmetries(k in 0usize..3, i in 0usize..200, j in 0usize..200) {
        let rs = system(rank3()[k].clone());
        let pool = rs.roots(3).unwrap();
        let x = &pool[i % pool.len()];
        let y = &pool[j % pool.len()];
        let forward = rs.is_prenilpotent(x, y, 8).unwrap();
        prop_assert_eq!(forward, rs.is_prenilpotent(&x.opposite(), &y.opposite(), 8).unwrap());
        prop_assert_eq!(forward, rs.is_prenilpotent(y, x, 8).unwrap());
        if forward == Prenilpotence::Yes {
            let xy = rs.interval(x, y, 8, 8).unwrap();
            let yx = rs.interval(y, x, 8, 8).unwrap();
            let members = vectors(&xy.members);
            prop_assert_eq!(&members, &vectors(&yx.members));
            prop_assert!(members.contains(x.vector()) && members.contains(y.vector()));
            for r in rs.linear_interval(x, y, 8).unwrap() {
                prop_assert!(members.contains(r.vector()), "{} missing", r.vector());
            }
        }
    }

    #[test]
    fn phi_sets_are_equivariant(w_word in prop::collection::vec(0usize..3, 0..7), v_word in prop::collection::vec(0usize..3, 0..7)) {
        let rs = RootSystem::new(WeylGroup::new(affine_a(3)));
        let group = rs.group();
        let w = group.from_word(&w_word).unwrap();
        let v = group.from_word(&v_word).unwrap();
        let pair = BalancedPair::chambers(group, &w).unwrap();
        let before = rs.phi_sets(&pair).unwrap();
        let after = rs.phi_sets(&pair.translate(group, &v)).unwrap();
        prop_assert_eq!(before.unipotent.len(), after.unipotent.len());
        prop_assert_eq!(before.levi.len(), after.levi.len());
        // the sets themselves move by v
        let moved: HashSet<RootVector> = before.unipotent.iter().map(|r| group.apply(&v, r).unwrap()).collect();
        prop_assert_eq!(moved, after.unipotent.iter().cloned().collect::<HashSet<_>>());
    }
}

#[test]
fn unipotent_set_is_the_inversion_set() {
    let rs = RootSystem::new(WeylGroup::new(affine_a(3)));
    let group = rs.group();
    let positive = rs.positive_roots(24).unwrap();
    for w in group.ball(6).unwrap().into_iter().flatten() {
        let sets = rs
            .phi_sets(&BalancedPair::chambers(group, &w).unwrap())
            .unwrap();
        let w_inv = group.inverse(&w);
        let direct: HashSet<RootVector> = positive
            .iter()
            .filter(|r| group.apply(&w_inv, r.vector()).unwrap().is_negative())
            .map(|r| r.vector().clone())
            .collect();
        assert_eq!(sets.unipotent.len(), w.length());
        assert!(sets.levi.is_empty());
        assert_eq!(
            sets.unipotent.iter().cloned().collect::<HashSet<_>>(),
            direct,
            "{}",
            group.format(&w)
        );
    }
}

#[test]
fn chamber_sides_follow_inversions() {
    let rs = RootSystem::new(WeylGroup::new(affine_a(3)));
    let group = rs.group();
    for w in group.ball(4).unwrap().into_iter().flatten() {
        let inverted: HashSet<RootVector> = rs.inversion_set(&w).into_iter().collect();
        for r in rs.positive_roots(8).unwrap() {
            let side = rs.chamber_side(&w, &r).unwrap();
            assert_eq!(
                side == Sign::Minus,
                inverted.contains(r.vector()),
                "{} at {}",
                r.vector(),
                group.format(&w)
            );
        }
    }
}
