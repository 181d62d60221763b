use proptest::prelude::*;

use tropsing::geom::{minkowski_sum, mixed_area, mixed_fiber_polygon, mixed_volume, LatticePolytope, Polygon};
use tropsing::lattice::SupportSet;
use tropsing::poly::{cyclotomic_rank, fulton_intersection_number, Multiplicity, SparsePoly};
use tropsing::ultratrop::{lift_with_unit, thsum_total};
use tropsing::vandermonde::{comb_rank, vdm_matrix, RootTuple};
use tropsing::Rational;

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn full_polytope() -> impl Strategy<Value = LatticePolytope> {
    prop::collection::vec(prop::collection::vec(0i64..=3, 3), 4..=6)
        .prop_filter_map("full-dimensional", |pts| {
            LatticePolytope::from_lattice_points(&pts).ok().filter(|p| p.adim() == 3)
        })
}

fn mv3(ps: [&LatticePolytope; 3]) -> u64 {
    mixed_volume(&ps.map(Clone::clone)).unwrap()
}

fn bivariate() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0u32..=2, 0u32..=2), (-3i64..=3).prop_filter("nonzero", |c| *c != 0)), 1..=3).prop_map(
        |terms| {
            let terms = terms.into_iter().map(|((a, b), c)| {
                let e = if (a, b) == (0, 0) { vec![1, 0] } else { vec![a, b] };
                (e, int(c))
            });
            let p = SparsePoly::from_terms(2, terms);
            if p.is_zero() {
                SparsePoly::var(2, 1)
            } else {
                p
            }
        },
    )
}

fn add(a: Multiplicity, b: Multiplicity) -> Multiplicity {
    match (a, b) {
        (Multiplicity::Finite(x), Multiplicity::Finite(y)) => Multiplicity::Finite(x + y),
        _ => Multiplicity::Infinite,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mixed_volume_is_symmetric_and_translation_invariant(
        p in full_polytope(), q in full_polytope(), r in full_polytope(), shift in prop::collection::vec(-4i64..=4, 3)
    ) {
        let base = mv3([&p, &q, &r]);
        prop_assert_eq!(mv3([&r, &p, &q]), base);
        prop_assert_eq!(mv3([&q, &p, &r]), base);
        let moved = p.translate(&shift.into_iter().map(int).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(mv3([&moved, &q, &r]), base);
    }

    #[test]
    fn mixed_volume_is_minkowski_linear(p in full_polytope(), p2 in full_polytope(), q in full_polytope(), r in full_polytope()) {
        let sum = minkowski_sum(&p, &p2).unwrap();
        prop_assert_eq!(mv3([&sum, &q, &r]), mv3([&p, &q, &r]) + mv3([&p2, &q, &r]));
    }

    #[test]
    fn mixed_volume_of_copies_is_lattice_volume(p in full_polytope()) {
        let vol = tropsing::geom::lattice_volume(&p).unwrap();
        prop_assert_eq!(int(mv3([&p, &p, &p]) as i64), vol);
    }

    #[test]
    fn fulton_axioms(f in bivariate(), g in bivariate(), h in bivariate(), a in bivariate()) {
        let i = fulton_intersection_number(&f, &g);
        prop_assert_eq!(fulton_intersection_number(&g, &f), i);
        prop_assert_eq!(fulton_intersection_number(&f, &(&g * &h)), add(i, fulton_intersection_number(&f, &h)));
        let reduced = &g + &(&a * &f);
        if !reduced.is_zero() {
            prop_assert_eq!(fulton_intersection_number(&f, &reduced), i);
        }
    }

    #[test]
    fn mixed_fiber_polygon_pairs_with_segments(
        p in full_polytope(), q in full_polytope(), s in (-3i64..=3, -3i64..=3).prop_filter("nonzero", |s| *s != (0, 0))
    ) {
        let m = mixed_fiber_polygon(&p, &q, 0).unwrap();
        let segment = LatticePolytope::from_lattice_points(&[vec![0, 0, 0], vec![0, s.0, s.1]]).unwrap();
        let flat = Polygon::hull(&[[int(0), int(0)], [int(s.0), int(s.1)]]).unwrap();
        prop_assert_eq!(int(mv3([&p, &q, &segment]) as i64), mixed_area(&m, &flat));
    }

    #[test]
    fn thsum_is_translation_invariant(
        h1 in 2i64..=4, h2 in 2i64..=5, t1 in prop::collection::vec(-3i64..=3, 3), t2 in prop::collection::vec(-3i64..=3, 3)
    ) {
        prop_assume!(num_integer::gcd(h1, h2) == 1);
        let a1 = lift_with_unit(&SupportSet::from_ints(&[0, h1]).unwrap(), 0);
        let a2 = lift_with_unit(&SupportSet::from_ints(&[0, h2]).unwrap(), 1);
        let base = thsum_total(&a1, &a2).unwrap();
        prop_assert_eq!(thsum_total(&a1.translate(&t1), &a2.translate(&t2)).unwrap(), base);
    }

    #[test]
    fn classical_vandermonde_has_full_rank(order in 3u64..=12, seed in any::<u64>()) {
        let mut residues: Vec<u64> = (0..order).collect();
        let k = 3.min(order as usize);
        // Deterministic sample of k distinct residues.
        residues.rotate_left((seed % order) as usize);
        residues.truncate(k);
        let x = RootTuple::new(order, residues).unwrap();
        let b = SupportSet::from_ints(&(0..k as i64).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(cyclotomic_rank(&vdm_matrix(&x, &b)), k);
    }

    #[test]
    fn low_comb_rank_minors_bound_the_matrix(rows in prop::collection::vec(prop::collection::vec(1i64..=2, 5), 3)) {
        let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        let all_minors_low = (0..5).all(|skip1| (skip1 + 1..5).all(|skip2| {
            let minor: Vec<Vec<Rational>> = m
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != skip1 && *j != skip2).map(|(_, v)| v.clone()).collect())
                .collect();
            comb_rank(&minor).unwrap() < 3
        }));
        if all_minors_low {
            prop_assert!(comb_rank(&m).unwrap() < 3);
        }
    }

    #[test]
    fn support_sets_round_trip_through_json(pts in prop::collection::btree_set(prop::collection::vec(-5i64..=5, 2), 1..6)) {
        let s = SupportSet::new(2, pts.into_iter().collect()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<SupportSet>(&text).unwrap(), s);
    }
}
