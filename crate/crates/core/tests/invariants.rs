//! Property-based structural invariants over randomly drawn instances.

use proptest::prelude::*;

use zrp_core::{
    build, capacity, dirichlet_form, enumerate, max_balance_defect, max_row_sum_defect,
    partition_wells, Kind, Operators,
};

fn pseudo_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn measure_is_a_probability(
        l in 2usize..5,
        n in 2u32..12,
        alpha in 1.1f64..6.0,
    ) {
        let space = enumerate(l, n, alpha).unwrap();
        let total: f64 = space.mu().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(space.mu().iter().all(|&m| m > 0.0));
    }

    #[test]
    fn measure_is_rotation_invariant(
        l in 2usize..5,
        n in 2u32..12,
        alpha in 1.1f64..6.0,
        shift in 1usize..4,
    ) {
        let space = enumerate(l, n, alpha).unwrap();
        for (i, s) in space.states().iter().enumerate() {
            let r = s.rotate(shift % l);
            let j = space.index_of(r.occupations()).unwrap();
            prop_assert!(
                (space.mu_of(i) - space.mu_of(j)).abs() <= 1e-15 + 1e-12 * space.mu_of(i)
            );
        }
    }

    #[test]
    fn generator_rows_and_balance(
        l in 2usize..5,
        n in 2u32..10,
        alpha in 1.1f64..6.0,
    ) {
        let space = enumerate(l, n, alpha).unwrap();
        for kind in [Kind::Forward, Kind::Adjoint, Kind::Symmetric] {
            let op = build(&space, kind);
            prop_assert!(max_row_sum_defect(&op) < 1e-12);
            prop_assert!(max_balance_defect(&space, &op) < 1e-12);
        }
    }

    #[test]
    fn forward_and_adjoint_are_mu_adjoint(
        l in 2usize..5,
        n in 2u32..10,
        alpha in 1.1f64..6.0,
        seed in 1u64..1000,
    ) {
        let space = enumerate(l, n, alpha).unwrap();
        let ops = Operators::build(&space);
        let f = pseudo_vec(space.len(), seed);
        let h = pseudo_vec(space.len(), seed + 7919);
        let lhs = space.inner(&ops.forward.apply(&f).unwrap(), &h);
        let rhs = space.inner(&f, &ops.adjoint.apply(&h).unwrap());
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn dirichlet_form_matches_symmetric_part(
        l in 2usize..5,
        n in 2u32..10,
        alpha in 1.1f64..6.0,
        seed in 1u64..1000,
    ) {
        let space = enumerate(l, n, alpha).unwrap();
        let ops = Operators::build(&space);
        let f = pseudo_vec(space.len(), seed);
        let d = dirichlet_form(&space, &f).unwrap();
        let via_s = -space.inner(&f, &ops.symmetric.apply(&f).unwrap());
        prop_assert!((d - via_s).abs() < 1e-10 * (1.0 + d.abs()));
        prop_assert!(d >= 0.0);
    }

    #[test]
    fn sector_condition_random_pairs(
        l in 2usize..4,
        n in 3u32..9,
        alpha in 1.1f64..6.0,
        seed in 1u64..500,
    ) {
        let space = enumerate(l, n, alpha).unwrap();
        let ops = Operators::build(&space);
        let bound = 4.0 * (l * l) as f64;
        for t in 0..4u64 {
            let f = pseudo_vec(space.len(), seed * 8 + 2 * t);
            let h = pseudo_vec(space.len(), seed * 8 + 2 * t + 1);
            let cross = space.inner(&ops.forward.apply(&f).unwrap(), &h);
            let df = dirichlet_form(&space, &f).unwrap();
            let dh = dirichlet_form(&space, &h).unwrap();
            prop_assert!(cross * cross <= bound * df * dh * (1.0 + 1e-9));
        }
    }

    #[test]
    fn capacity_report_invariants_random(
        n in 6u32..14,
        alpha in 1.5f64..5.0,
        ell in 1u32..3,
    ) {
        let space = enumerate(3, n, alpha).unwrap();
        let ops = Operators::build(&space);
        let wells = partition_wells(&space, ell).unwrap();
        let rep = capacity(
            &space,
            &ops,
            &wells.wells[0],
            &wells.complement_wells(0),
        )
        .unwrap();
        prop_assert!(rep.cap > 0.0);
        prop_assert!(rep.sandwich_ok);
        prop_assert!(rep.residuals.infsup_rel <= 1e-8);
        // capacity is symmetric in its two sets even without
        // reversibility
        prop_assert!((rep.cap_reversed - rep.cap).abs() <= 1e-8 * rep.cap);
    }
}
