//! Property tests for the spec-level invariants, driven by proptest.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use proptest::prelude::*;

use wallcross::coeff::{s_coeff, u_coeff};
use wallcross::cone::{decompositions, mu_n_beta, ConeModel, NumClass};
use wallcross::integrate::InvariantTable;
use wallcross::rat::{rat, rat_int, Rat};
use wallcross::series::{
    expan_build, n_closed_form, q_symmetry_check, Coef, ConeSeries, LaurentPoly, Poly, RationalFn,
    SeriesMode,
};
use wallcross::stability::{check_dominance, compare, walls, StabilityParam};

fn model() -> ConeModel {
    ConeModel::with_constant_tables(vec![1], &vec![4], 0).unwrap()
}

fn arb_class() -> impl Strategy<Value = NumClass> {
    (0..=1i64, 0..=4i64, -6..=6i64).prop_filter_map("valid class", |(t, b, n)| {
        let r = if t == 0 { -1 } else { 0 };
        NumClass::new(r, vec![b], n).ok()
    })
}

fn arb_k() -> impl Strategy<Value = StabilityParam> {
    (-24..=-1i64, 1..=8i64).prop_map(|(p, q)| StabilityParam::new(rat(p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The phase comparison is a total preorder at every parameter.
    #[test]
    fn compare_is_a_total_preorder(
        classes in prop::collection::vec(arb_class(), 3),
        k in arb_k(),
    ) {
        let m = model();
        for a in &classes {
            for b in &classes {
                let ab = compare(a, b, &k, &m).unwrap();
                prop_assert_eq!(ab, compare(b, a, &k, &m).unwrap().reverse());
                for c in &classes {
                    let bc = compare(b, c, &k, &m).unwrap();
                    let ac = compare(a, c, &k, &m).unwrap();
                    if ab != Ordering::Greater && bc != Ordering::Greater {
                        prop_assert_ne!(ac, Ordering::Greater);
                    }
                }
            }
        }
    }

    /// Every parameter dominates itself on any class set.
    #[test]
    fn dominance_is_reflexive(
        classes in prop::collection::vec(arb_class(), 1..5),
        k in arb_k(),
    ) {
        prop_assert!(check_dominance(&k, &k, &classes, &model()).unwrap());
    }

    /// Decomposition parts sum back to the class, with torsion slopes in
    /// `[0, −2k]` and exactly one rank −1 part.
    #[test]
    fn decompositions_partition_the_class(
        beta in 1..=3i64,
        n in -4..=4i64,
        k in arb_k(),
    ) {
        let m = model();
        let v = NumClass::pair(vec![beta], n).unwrap();
        let decs = decompositions(&v, &k, &m).unwrap();
        prop_assert!(!decs.is_empty());
        for tuple in decs {
            prop_assert_eq!(NumClass::sum_raw(tuple.iter()), Some(v.clone()));
            prop_assert_eq!(tuple.iter().filter(|c| c.r == -1).count(), 1);
            for part in tuple.iter().filter(|c| c.r == 0) {
                let mu = Rat::new(part.n.into(), m.deg(&part.beta).unwrap().into());
                prop_assert!(mu >= rat_int(0) && mu <= k.threshold());
            }
        }
    }

    /// S is always in {−1, 0, 1}, and U of a single class is 1.
    #[test]
    fn coefficient_ranges(
        torsion in prop::collection::vec((1..=4i64, -6..=6i64), 1..3),
        rank in prop::option::of((0..=4i64, -6..=6i64)),
        at in 0..3usize,
        k in arb_k(),
        kp in arb_k(),
    ) {
        // at most one rank -1 entry, so every partial sum is a valid class
        let mut classes: Vec<NumClass> = torsion
            .iter()
            .map(|&(b, n)| NumClass::torsion(vec![b], n).unwrap())
            .collect();
        if let Some((b, n)) = rank {
            if let Ok(c) = NumClass::new(-1, vec![b], n) {
                classes.insert(at.min(classes.len()), c);
            }
        }
        let m = model();
        let s = s_coeff(&classes, &k, &kp, &m).unwrap();
        prop_assert!((-1..=1).contains(&s));
        prop_assert_eq!(u_coeff(&classes[..1], &k, &kp, &m).unwrap(), rat_int(1));
    }

    /// `μ_{n,β}` is at least the direct slope `n/ωβ` (the β′ = β term).
    #[test]
    fn mu_bounds_the_direct_slope(beta in 1..=4i64, n in -6..=6i64) {
        let m = model();
        let mu = mu_n_beta(n, &vec![beta], &m).unwrap();
        prop_assert!(mu >= Rat::new(n.into(), beta.into()));
    }

    /// Wall sets are unions of arithmetic progressions: membership is
    /// stable under integer translation.
    #[test]
    fn walls_translate_by_integers(beta in 1..=4i64, p in -12..=12i64, q in 1..=8i64, t in -3..=3i64) {
        let ws = walls(&vec![beta], &model()).unwrap();
        let k = rat(p, q);
        prop_assert_eq!(ws.contains(&k), ws.contains(&(k + rat_int(t))));
    }

    /// Common factors never change a canonical rational function.
    #[test]
    fn rational_fn_is_canonical(
        num in prop::collection::vec(-5..=5i64, 1..4),
        den in prop::collection::vec(-5..=5i64, 1..4),
        g in prop::collection::vec(-3..=3i64, 1..3),
    ) {
        let to_poly = |v: &[i64]| Poly::from_vec(v.iter().map(|&c| rat_int(c)).collect());
        let (num, den, g) = (to_poly(&num), to_poly(&den), to_poly(&g));
        prop_assume!(!den.is_zero() && !g.is_zero());
        let plain = RationalFn::new(num.clone(), den.clone()).unwrap();
        let inflated = RationalFn::new(num.mul(&g), den.mul(&g)).unwrap();
        prop_assert_eq!(plain, inflated);
    }

    /// Symmetric Laurent windows promote to q-symmetric rational functions.
    #[test]
    fn symmetric_windows_pass_the_symmetry_check(
        coeffs in prop::collection::vec(-4..=4i64, 1..5),
    ) {
        let mut p = LaurentPoly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.set(i as i64, rat_int(c));
            p.set(-(i as i64), rat_int(c));
        }
        prop_assert!(q_symmetry_check(&RationalFn::from_laurent(&p)));
    }

    /// Closed N-forms are q-symmetric for any symmetric periodic table.
    #[test]
    fn closed_forms_are_symmetric(a in -4..=4i64, b in -4..=4i64) {
        let m = ConeModel::with_constant_tables(vec![1], &vec![2], 0).unwrap();
        let mut entries = BTreeMap::new();
        entries.insert(vec![1], vec![rat_int(a)]);
        entries.insert(vec![2], vec![rat_int(b), rat_int(a)]);
        let n_tab = InvariantTable::periodic(entries, &m).unwrap();
        for beta in [vec![1], vec![2]] {
            prop_assert!(q_symmetry_check(&n_closed_form(&n_tab, &beta, &m).unwrap()));
        }
    }

    /// `expan_build` is linear in L: scaling L scales P.
    #[test]
    fn expan_build_is_linear_in_l(l0 in -3..=3i64, l1 in -3..=3i64, a in -3..=3i64, s in 1..=4i64) {
        let m = ConeModel::with_constant_tables(vec![1], &vec![1], 0).unwrap();
        let mut entries = BTreeMap::new();
        entries.insert(vec![1], vec![rat_int(a)]);
        let n_tab = InvariantTable::periodic(entries, &m).unwrap();
        let build = |scale: i64| {
            let mut l = ConeSeries::new(vec![1]);
            l.set(vec![0], Coef::Window(LaurentPoly::constant(rat_int(l0 * scale)))).unwrap();
            l.set(vec![1], Coef::Window(LaurentPoly::constant(rat_int(l1 * scale)))).unwrap();
            expan_build(&l, &n_tab, &m, &vec![1], SeriesMode::Window { degree_hi: 8 }).unwrap()
        };
        let plain = build(1);
        let scaled = build(s);
        for (beta, coef) in scaled.terms() {
            let base = plain.coefficient(beta).cloned().unwrap_or_else(
                || Coef::Window(LaurentPoly::zero()));
            prop_assert_eq!(coef.clone(), base.scale(&rat_int(s)));
        }
    }
}
