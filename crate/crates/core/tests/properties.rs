//! Randomized structural invariants for the integer-matrix layer and the
//! group pipeline built on it.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use parabrauer::brauer::{brauer_group, ModuliSetup};
use parabrauer::lattice::{
    group_from_relations, hnf, quotient_by_subgroup, snf, FiniteAbelianGroup, GroupElement,
    IntMatrix,
};
use parabrauer::parahoric::{ParahoricKind, ParahoricSpec};
use parabrauer::root_system::{GroupSpec, Series, SimpleType};

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
    })
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.det().abs() == BigInt::one()
}

proptest! {
    #[test]
    fn snf_factorization_and_chain(rows in matrix_strategy(4)) {
        let m = IntMatrix::from_rows(&rows);
        let (s, u, v) = snf(&m);
        // s = u m v with unimodular transforms
        prop_assert_eq!(&s, &u.mul(&m).mul(&v));
        prop_assert!(is_unimodular(&u));
        prop_assert!(is_unimodular(&v));
        // diagonal, nonnegative, divisibility chain
        let d = rows.len().min(rows[0].len());
        for i in 0..rows.len() {
            for j in 0..rows[0].len() {
                if i != j {
                    prop_assert!(s[(i, j)].is_zero());
                }
            }
        }
        for i in 0..d {
            prop_assert!(!s[(i, i)].is_negative());
            if i + 1 < d && !s[(i, i)].is_zero() {
                if s[(i + 1, i + 1)].is_zero() {
                    continue;
                }
                prop_assert!((&s[(i + 1, i + 1)] % &s[(i, i)]).is_zero());
            }
        }
    }

    #[test]
    fn hnf_factorization_and_reduction(rows in matrix_strategy(4)) {
        let m = IntMatrix::from_rows(&rows);
        let (h, u) = hnf(&m);
        prop_assert_eq!(&h, &u.mul(&m));
        prop_assert!(is_unimodular(&u));
        // row-style: positive pivots, entries above each pivot reduced
        let mut last_col = None;
        for i in 0..rows.len() {
            let pivot = (0..rows[0].len()).find(|&j| !h[(i, j)].is_zero());
            if let Some(j) = pivot {
                prop_assert!(h[(i, j)].is_positive());
                if let Some(lc) = last_col {
                    prop_assert!(j > lc, "pivot columns not strictly increasing");
                }
                last_col = Some(j);
                for above in 0..i {
                    prop_assert!(!h[(above, j)].is_negative());
                    prop_assert!(h[(above, j)] < h[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn cokernel_order_is_abs_det(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
        let m = IntMatrix::from_rows(&rows);
        let det = m.det();
        prop_assume!(!det.is_zero());
        let (g, _) = group_from_relations(&m);
        prop_assert_eq!(g.free_rank, 0);
        prop_assert_eq!(g.order().unwrap(), det.abs());
    }
}

fn chain_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::sample::select(vec![
        vec![2],
        vec![3],
        vec![4],
        vec![6],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 2, 2],
        vec![2, 6],
        vec![2, 2, 4],
        vec![8],
        vec![12],
    ])
}

/// Raw coset count of g/<gens>: closure of the generators, then orbit
/// counting, no matrix algebra involved.
fn brute_force_coset_count(g: &FiniteAbelianGroup, gens: &[GroupElement]) -> BigInt {
    let mut h = std::collections::BTreeSet::new();
    h.insert(g.zero());
    loop {
        let snapshot: Vec<GroupElement> = h.iter().cloned().collect();
        let before = h.len();
        for a in &snapshot {
            for b in gens {
                h.insert(g.add(a, b));
            }
        }
        if h.len() == before {
            break;
        }
    }
    g.order().unwrap() / BigInt::from(h.len())
}

proptest! {
    #[test]
    fn quotient_matches_coset_enumeration(
        chain in chain_strategy(),
        raw_gens in prop::collection::vec(prop::collection::vec(0i64..=11, 3), 0..3),
    ) {
        let g = FiniteAbelianGroup::from_factors(&chain);
        let gens: Vec<GroupElement> = raw_gens
            .iter()
            .map(|coords| {
                let c: Vec<BigInt> = coords.iter().take(chain.len()).map(|&x| BigInt::from(x)).collect();
                let mut c = c;
                c.resize(chain.len(), BigInt::zero());
                g.reduce(&c)
            })
            .collect();
        let q = quotient_by_subgroup(&g, &gens).unwrap();
        prop_assert_eq!(q.order().unwrap(), brute_force_coset_count(&g, &gens));
    }

    #[test]
    fn brauer_independent_of_point_order(a in 0usize..15, b in 0usize..15) {
        // all proper subsets of the 4 affine nodes of the rank-3 type
        let subset = |mask: usize| -> std::collections::BTreeSet<usize> {
            (0..4).filter(|i| mask & (1 << i) != 0).collect()
        };
        let t = SimpleType::new(Series::A, 3).unwrap();
        let mk = |label: &str, mask: usize| ParahoricSpec {
            label: label.to_string(),
            kind: ParahoricKind::Facet(vec![subset(mask)]),
        };
        let run = |points: Vec<ParahoricSpec>| {
            brauer_group(&ModuliSetup {
                group: GroupSpec::simply_connected(vec![t.clone()]),
                genus: 3,
                points,
            })
            .unwrap()
        };
        let fwd = run(vec![mk("p", a), mk("q", b)]);
        let rev = run(vec![mk("q", b), mk("p", a)]);
        prop_assert_eq!(fwd.brauer, rev.brauer);
        prop_assert_eq!(fwd.image_subgroup_order, rev.image_subgroup_order);
    }
}
