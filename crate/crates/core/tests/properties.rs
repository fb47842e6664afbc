use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;
use strata_core::ideal::{BiIdeal, MonomialOrder};
use strata_core::linalg::Matrix;
use strata_core::mpoly::MPoly;
use strata_core::poisson::{blowup_subst, pullback, standard_bivector, ChartSubst};
use strata_core::ratfunc::RationalFunc;
use strata_core::sample;
use strata_core::uni::{
    all_vanish, assemble, colength, colength_oracle, construct_stratum_point, random_point,
    stratum_equations, Shape,
};
use strata_core::upoly::UPoly;
use strata_core::{Scalar, Q};

fn q(v: i64) -> Q {
    Q::from_i64(v)
}

fn upoly(cs: &[i64]) -> UPoly<Q> {
    UPoly::new("x", cs.iter().map(|&c| q(c)).collect())
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 0..=max_len)
}

fn nonzero_coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    coeffs(max_len).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

fn mpoly_xy() -> impl Strategy<Value = MPoly<Q>> {
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 0..6).prop_map(|ts| {
        MPoly::from_terms(&["x", "y"], ts.into_iter().map(|((a, b), c)| (vec![a, b], q(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divrem_identity(u in coeffs(9), v in nonzero_coeffs(9)) {
        let (u, v) = (upoly(&u), upoly(&v));
        let (quo, rem) = u.divrem(&v).unwrap();
        prop_assert_eq!(quo * v.clone() + rem.clone(), u);
        if let Some(d) = rem.degree() {
            prop_assert!(d < v.degree().unwrap());
        }
    }

    #[test]
    fn gcd_divides_and_combines(a in nonzero_coeffs(7), b in nonzero_coeffs(7), c in nonzero_coeffs(3)) {
        let c = upoly(&c);
        let (a, b) = (upoly(&a) * c.clone(), upoly(&b) * c.clone());
        let g = a.gcd(&b).unwrap();
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        prop_assert!(c.rem(&g).unwrap().is_zero() || c.degree() == Some(0));
        let (g2, s, t) = a.ext_gcd(&b).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(s * a + t * b, g);
    }

    #[test]
    fn rank_plus_nullity(rows in 1usize..5, cols in 1usize..6, seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let data: Vec<Vec<Q>> = (0..rows)
            .map(|_| (0..cols).map(|_| sample::scalar::<Q>(&mut rng, 2)).collect())
            .collect();
        let m = Matrix::from_rows(data, cols);
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn leibniz(p in mpoly_xy(), r in mpoly_xy()) {
        for v in ["x", "y"] {
            let lhs = (p.clone() * r.clone()).diff(v).unwrap();
            let rhs = p.clone() * r.diff(v).unwrap() + r.clone() * p.diff(v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn colength_matches_oracle(si in 0usize..6, seed in any::<u64>()) {
        let shape = shapes()[si].clone();
        let pt = random_point::<Q>(&shape, &mut sample::rng(seed));
        let t = assemble(&pt);
        prop_assert_eq!(colength(&t), colength_oracle(&t));
    }

    #[test]
    fn planted_points_are_monotone(si in 0usize..4, k in 0usize..4, seed in any::<u64>()) {
        let shape = shapes()[si].clone();
        let m = shape.total();
        let top = *shape.parts().iter().max().unwrap();
        let k = if k > top { m } else { k };
        let pt = construct_stratum_point::<Q>(&shape, k, seed).unwrap();
        prop_assert_eq!(colength(&assemble(&pt)), k);
        let eqs = &equations()[si];
        for j in 1..=m {
            prop_assert_eq!(all_vanish(&eqs[j - 1], &pt).unwrap(), j <= k, "stratum {}", j);
        }
    }

    #[test]
    fn pullback_composes(c in -3i64..=3, a in 0u32..3, b in 1u32..3, lam in 1i64..4) {
        let bv = standard_bivector::<Q>(2, 2).unwrap();
        let s = blowup_subst::<Q>(2, 2).unwrap();
        let t = triangular(c, a, b, lam);
        let step = pullback(&pullback(&bv, &s).unwrap(), &t).unwrap();
        let once = pullback(&bv, &s.then(&t).unwrap()).unwrap();
        prop_assert_eq!(step, once);
    }

    #[test]
    fn pullback_inverse_roundtrip(c in -3i64..=3, a in 0u32..3, b in 1u32..3, lam in 1i64..4, r in 1usize..4) {
        let k = r;
        let bv = standard_bivector::<Q>(r, k).unwrap();
        let s = blowup_subst::<Q>(r, k).unwrap();
        let up = pullback(&bv, &s).unwrap();
        prop_assert_eq!(pullback(&up, &s.inverse()).unwrap(), bv.clone());
        if r == 2 {
            let t = triangular(c, a, b, lam);
            let there = pullback(&up, &t).unwrap();
            prop_assert_eq!(pullback(&there, &t.inverse()).unwrap(), up);
        }
    }

    #[test]
    fn groebner_staircase_is_order_independent(p in coeffs(4), f in nonzero_coeffs(4), extra in mpoly_xy(), w in 1u32..4) {
        // (y - p(x), f(x)) has colength deg f; an extra element of the ideal
        // must not change anything.
        let y = MPoly::<Q>::var("y");
        let px = MPoly::from_scalar_upoly(&upoly(&p)).with_var_names(&["x", "y"]).unwrap();
        let fx = MPoly::from_scalar_upoly(&upoly(&f).make_monic()).with_var_names(&["x", "y"]).unwrap();
        let g1 = y - px;
        let g3 = extra.clone() * g1.clone() + fx.clone();
        let ideal = BiIdeal::new(vec![g1, fx.clone(), g3]).unwrap();
        let deg = upoly(&f).degree().unwrap();
        let orders = [MonomialOrder::Lex, MonomialOrder::GrLex, MonomialOrder::Weighted(w, 1), MonomialOrder::Weighted(1, w)];
        for ord in orders {
            prop_assert_eq!(ideal.colength_in(ord).unwrap(), deg);
            let basis = ideal.groebner(ord);
            for gen in ideal.generators() {
                prop_assert!(reduces_to_zero(gen, &basis, ord));
            }
        }
    }
}

fn shapes() -> Vec<Shape> {
    [&[1][..], &[2], &[1, 1], &[2, 1], &[3], &[2, 2]]
        .iter()
        .map(|p| Shape::new(p.to_vec()).unwrap())
        .collect()
}

fn equations() -> &'static Vec<Vec<Vec<MPoly<Q>>>> {
    static EQS: OnceLock<Vec<Vec<Vec<MPoly<Q>>>>> = OnceLock::new();
    EQS.get_or_init(|| {
        shapes()[..4]
            .iter()
            .map(|s| (1..=s.total()).map(|j| stratum_equations::<Q>(s, j).unwrap()).collect())
            .collect()
    })
}

/// `x1 -> x1 + c x2^a u2^b`, `y1 -> lam y1` on the chart coordinates.
fn triangular(c: i64, a: u32, b: u32, lam: i64) -> ChartSubst<Q> {
    let coords: Vec<String> = ["x1", "x2", "y1", "u2"].iter().map(|s| s.to_string()).collect();
    let shear = MPoly::var_pow("x2", a) * MPoly::var_pow("u2", b);
    let x1 = MPoly::<Q>::var("x1");
    let y1 = MPoly::<Q>::var("y1");
    let mut map = BTreeMap::new();
    let mut inv = BTreeMap::new();
    map.insert("x1".to_string(), RationalFunc::poly(x1.clone() + shear.scale(&q(c))));
    inv.insert("x1".to_string(), RationalFunc::poly(x1 - shear.scale(&q(c))));
    map.insert("y1".to_string(), RationalFunc::poly(y1.scale(&q(lam))));
    inv.insert("y1".to_string(), RationalFunc::new(y1, MPoly::from_i64(lam)).unwrap());
    ChartSubst::new(coords.clone(), coords, map, inv).unwrap()
}

fn reduces_to_zero(p: &MPoly<Q>, basis: &[MPoly<Q>], ord: MonomialOrder) -> bool {
    BiIdeal::new(basis.to_vec())
        .map(|i| i.groebner(ord) == basis && i.contains(p).unwrap())
        .unwrap_or(false)
}
