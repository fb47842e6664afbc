//! Bivectors with rational-function coefficients and their pullback along a
//! coordinate change, used to watch the pole along the exceptional divisor
//! cancel on the blowup chart `y_i = u_i y_1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::mpoly::MPoly;
use crate::ratfunc::RationalFunc;

/// `sum c_{ab} d/da ^ d/db` over pairs `a < b` in coordinate order.
#[derive(Clone)]
pub struct Bivector<F> {
    coords: Vec<String>,
    terms: BTreeMap<(usize, usize), RationalFunc<F>>,
}

impl<F: Scalar> Bivector<F> {
    pub fn zero(coords: Vec<String>) -> Self {
        Bivector {
            coords,
            terms: BTreeMap::new(),
        }
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), RationalFunc<F>> {
        &self.terms
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Add `c * d/da ^ d/db`, absorbing the sign when `a > b`.
    pub fn add_term(&mut self, a: &str, b: &str, c: RationalFunc<F>) -> Result<()> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        self.add_indexed(i, j, c);
        Ok(())
    }

    fn add_indexed(&mut self, i: usize, j: usize, c: RationalFunc<F>) {
        if i == j || c.is_zero() {
            return;
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Coefficient of `d/da ^ d/db`.
    pub fn coeff(&self, a: &str, b: &str) -> Result<RationalFunc<F>> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Ok(match i.cmp(&j) {
            std::cmp::Ordering::Less => self.terms.get(&(i, j)).cloned().unwrap_or_else(RationalFunc::zero),
            std::cmp::Ordering::Greater => -self.terms.get(&(j, i)).cloned().unwrap_or_else(RationalFunc::zero),
            std::cmp::Ordering::Equal => RationalFunc::zero(),
        })
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| json!({"pair": [self.coords[i], self.coords[j]], "coeff": c.to_string()}))
            .collect();
        json!({"coords": self.coords, "terms": terms})
    }
}

impl<F: Scalar> PartialEq for Bivector<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.coords != other.coords {
            return false;
        }
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).cloned().unwrap_or_else(RationalFunc::zero);
            let b = other.terms.get(k).cloned().unwrap_or_else(RationalFunc::zero);
            a == b
        })
    }
}

impl<F: Scalar> fmt::Display for Bivector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) d{}^d{}", self.coords[i], self.coords[j])?;
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Debug for Bivector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bivector[{self}]")
    }
}

fn product_coords(r: usize) -> Vec<String> {
    (1..=r)
        .map(|i| format!("x{i}"))
        .chain((1..=r).map(|i| format!("y{i}")))
        .collect()
}

/// `y_1 dx_1^dy_1 + ... + y_k dx_k^dy_k + dx_{k+1}^dy_{k+1} + ... + dx_r^dy_r`.
pub fn standard_bivector<F: Scalar>(r: usize, k: usize) -> Result<Bivector<F>> {
    if k > r {
        return Err(Error::OutOfRange(format!("k = {k} exceeds r = {r}")));
    }
    let mut bv = Bivector::zero(product_coords(r));
    for i in 1..=r {
        let c = if i <= k {
            RationalFunc::var(&format!("y{i}"))
        } else {
            RationalFunc::constant(F::one())
        };
        bv.add_term(&format!("x{i}"), &format!("y{i}"), c)?;
    }
    Ok(bv)
}

/// A coordinate change `old = map(new)` with its inverse `new = inverse(old)`.
#[derive(Clone)]
pub struct ChartSubst<F> {
    old: Vec<String>,
    new: Vec<String>,
    map: BTreeMap<String, RationalFunc<F>>,
    inverse: BTreeMap<String, RationalFunc<F>>,
}

impl<F: Scalar> ChartSubst<F> {
    /// Missing entries of `map` / `inverse` are identities on shared names.
    pub fn new(
        old: Vec<String>,
        new: Vec<String>,
        map: BTreeMap<String, RationalFunc<F>>,
        inverse: BTreeMap<String, RationalFunc<F>>,
    ) -> Result<Self> {
        if old.len() != new.len() {
            return Err(Error::Invalid("coordinate counts differ".into()));
        }
        let fill = |from: &[String], to: &[String], m: BTreeMap<String, RationalFunc<F>>| -> Result<_> {
            let mut m = m;
            for v in from {
                if !m.contains_key(v) {
                    if !to.contains(v) {
                        return Err(Error::MissingValue(v.clone()));
                    }
                    m.insert(v.clone(), RationalFunc::var(v));
                }
            }
            Ok(m)
        };
        let map = fill(&old, &new, map)?;
        let inverse = fill(&new, &old, inverse)?;
        Ok(ChartSubst { old, new, map, inverse })
    }

    pub fn identity(coords: Vec<String>) -> Self {
        ChartSubst::new(coords.clone(), coords, BTreeMap::new(), BTreeMap::new()).expect("identity")
    }

    pub fn old_coords(&self) -> &[String] {
        &self.old
    }

    pub fn new_coords(&self) -> &[String] {
        &self.new
    }

    pub fn map(&self) -> &BTreeMap<String, RationalFunc<F>> {
        &self.map
    }

    pub fn inverse_map(&self) -> &BTreeMap<String, RationalFunc<F>> {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        ChartSubst {
            old: self.new.clone(),
            new: self.old.clone(),
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    /// `self` followed by `next`: `old = self(next(newest))`.
    pub fn then(&self, next: &ChartSubst<F>) -> Result<Self> {
        if next.old != self.new {
            return Err(Error::Invalid("substitutions do not compose".into()));
        }
        let map = self
            .map
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.substitute(&next.map)?)))
            .collect::<Result<_>>()?;
        let inverse = next
            .inverse
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.substitute(&self.inverse)?)))
            .collect::<Result<_>>()?;
        Ok(ChartSubst {
            old: self.old.clone(),
            new: next.new.clone(),
            map,
            inverse,
        })
    }

    /// `map(inverse(old)) = old` and `inverse(map(new)) = new`.
    pub fn witness_holds(&self) -> Result<bool> {
        for v in &self.old {
            if self.map[v].substitute(&self.inverse)? != RationalFunc::var(v) {
                return Ok(false);
            }
        }
        for v in &self.new {
            if self.inverse[v].substitute(&self.map)? != RationalFunc::var(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `J[a][b] = d old_a / d new_b`.
    pub fn jacobian(&self) -> Result<Matrix<RationalFunc<F>>> {
        let rows = self
            .old
            .iter()
            .map(|a| self.new.iter().map(|b| self.map[a].diff(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows, self.new.len()))
    }
}

/// The chart `y_i = u_i y_1` for `2 <= i <= k` in coordinates
/// `x_1..x_r, y_1, u_2..u_k, y_{k+1}..y_r`.
pub fn blowup_subst<F: Scalar>(r: usize, k: usize) -> Result<ChartSubst<F>> {
    if k == 0 || k > r {
        return Err(Error::OutOfRange(format!("need 1 <= k <= r, got k = {k}, r = {r}")));
    }
    let old = product_coords(r);
    let new: Vec<String> = old
        .iter()
        .map(|c| match c.strip_prefix('y').and_then(|i| i.parse::<usize>().ok()) {
            Some(i) if (2..=k).contains(&i) => format!("u{i}"),
            _ => c.clone(),
        })
        .collect();
    let y1 = RationalFunc::var("y1");
    let mut map = BTreeMap::new();
    let mut inverse = BTreeMap::new();
    for i in 2..=k {
        let (y, u) = (format!("y{i}"), format!("u{i}"));
        map.insert(y.clone(), RationalFunc::var(&u) * y1.clone());
        inverse.insert(
            u,
            RationalFunc::new(MPoly::var(&y), MPoly::var("y1")).expect("nonzero denominator"),
        );
    }
    ChartSubst::new(old, new, map, inverse)
}

/// Express `bv` (in the old coordinates of `subst`) in the new coordinates:
/// `d/d old_a = sum_b (J^-1)_{ba} d/d new_b`, coefficients composed with the
/// map.
pub fn pullback<F: Scalar>(bv: &Bivector<F>, subst: &ChartSubst<F>) -> Result<Bivector<F>> {
    if bv.coords != subst.old {
        return Err(Error::Invalid("bivector coordinates differ from the substitution's".into()));
    }
    let jinv = subst.jacobian()?.inverse().ok_or(Error::SingularJacobian)?;
    let n = subst.new.len();
    let mut out = Bivector::zero(subst.new.clone());
    for (&(a, c), coeff) in &bv.terms {
        let k = coeff.substitute(&subst.map)?;
        for b in 0..n {
            let fb = jinv.get(b, a);
            if fb.is_zero() {
                continue;
            }
            for d in 0..n {
                let fd = jinv.get(d, c);
                if fd.is_zero() || b == d {
                    continue;
                }
                out.add_indexed(b, d, k.clone() * fb.clone() * fd.clone());
            }
        }
    }
    Ok(out)
}

fn order_along<F: Scalar>(p: &MPoly<F>, var: &str) -> u32 {
    match p.var_index(var) {
        Some(i) => p.terms().keys().map(|e| e[i]).min().unwrap_or(u32::MAX),
        None => 0,
    }
}

/// True iff no coefficient has a pole along `{var = 0}`.
pub fn check_no_poles<F: Scalar>(bv: &Bivector<F>, var: &str) -> bool {
    bv.terms.values().all(|c| {
        c.is_zero() || order_along(c.num(), var) >= order_along(c.den(), var)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;
    use crate::Q;

    fn v(name: &str) -> RationalFunc<Q> {
        RationalFunc::var(name)
    }

    #[test]
    fn standard_examples() {
        let b = standard_bivector::<Q>(1, 0).unwrap();
        assert_eq!(b.coeff("x1", "y1").unwrap(), RationalFunc::constant(Q::from_i64(1)));
        let b = standard_bivector::<Q>(1, 1).unwrap();
        assert_eq!(b.coeff("x1", "y1").unwrap(), v("y1"));
        assert_eq!(b.coeff("y1", "x1").unwrap(), -v("y1"));
        let b = standard_bivector::<Q>(2, 2).unwrap();
        assert_eq!(b.terms().len(), 2);
        assert!(standard_bivector::<Q>(1, 2).is_err());
    }

    #[test]
    fn subst_examples() {
        let s = blowup_subst::<Q>(2, 1).unwrap();
        assert_eq!(s.old_coords(), s.new_coords());
        let s = blowup_subst::<Q>(3, 3).unwrap();
        assert_eq!(s.map()["y2"], v("u2") * v("y1"));
        assert_eq!(s.map()["y3"], v("u3") * v("y1"));
        assert_eq!(s.map()["x1"], v("x1"));
        assert!(s.witness_holds().unwrap());
    }

    #[test]
    fn pullback_r2_k2() {
        let bv = standard_bivector::<Q>(2, 2).unwrap();
        let p = pullback(&bv, &blowup_subst(2, 2).unwrap()).unwrap();
        let mut want = Bivector::zero(p.coords().to_vec());
        want.add_term("x1", "y1", v("y1")).unwrap();
        want.add_term("x1", "u2", -v("u2")).unwrap();
        want.add_term("x2", "u2", v("u2")).unwrap();
        assert_eq!(p, want);
        assert!(check_no_poles(&p, "y1"));
        let id = pullback(&bv, &blowup_subst(2, 1).unwrap()).unwrap();
        assert_eq!(id, bv);
    }

    #[test]
    fn poles_detected() {
        let mut b = Bivector::<Q>::zero(vec!["x1".into(), "u".into(), "y1".into()]);
        b.add_term("x1", "u", RationalFunc::new(MPoly::from_i64(1), MPoly::var("y1")).unwrap())
            .unwrap();
        assert!(!check_no_poles(&b, "y1"));
        assert!(check_no_poles(&standard_bivector::<Q>(3, 2).unwrap(), "y1"));
    }
}
