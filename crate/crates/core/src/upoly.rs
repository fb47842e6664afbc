//! Dense univariate polynomials over any [`Ring`].
//!
//! Coefficients are stored in ascending degree order; the vector is either
//! empty (the zero polynomial) or ends in a nonzero coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::error::{Error, Result};
use crate::field::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct UPoly<R> {
    var: String,
    coeffs: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    pub fn new(var: &str, mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly {
            var: var.to_string(),
            coeffs,
        }
    }

    pub fn zero(var: &str) -> Self {
        UPoly::new(var, Vec::new())
    }

    pub fn constant(var: &str, c: R) -> Self {
        UPoly::new(var, vec![c])
    }

    /// `c * var^deg`
    pub fn monomial(var: &str, c: R, deg: usize) -> Self {
        let mut coeffs = vec![R::zero(); deg + 1];
        coeffs[deg] = c;
        UPoly::new(var, coeffs)
    }

    /// The polynomial `var`.
    pub fn x(var: &str) -> Self {
        UPoly::monomial(var, R::one(), 1)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `var^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Multiplicity of the root 0.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &R) -> Self {
        UPoly::new(
            &self.var,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        )
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly::new(&self.var, coeffs)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(&self.var, self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch(
                self.var.clone(),
                other.var.clone(),
            ));
        }
        Ok(())
    }

    /// Division by a monic divisor; works over any ring.
    pub fn divrem_monic(&self, v: &Self) -> Result<(Self, Self)> {
        self.check_var(v)?;
        if !v.is_monic() {
            return Err(Error::NotMonic);
        }
        let dv = v.degree().unwrap_or(0);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![R::zero(); rem.len().saturating_sub(dv)];
        while rem.len() > dv {
            let top = rem.len() - 1;
            let c = rem[top].clone();
            let shift = top - dv;
            if !c.is_zero() {
                for (j, vc) in v.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].clone() - c.clone() * vc.clone();
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        Ok((UPoly::new(&self.var, quot), UPoly::new(&self.var, rem)))
    }
}

impl<F: Field> UPoly<F> {
    /// Euclidean division `u = q v + r`, `deg r < deg v`.
    pub fn divrem(&self, v: &Self) -> Result<(Self, Self)> {
        self.check_var(v)?;
        let lead = v.leading().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv().ok_or(Error::DivisionByZero)?;
        let monic = v.scale(&inv);
        let (q, r) = self.divrem_monic(&monic)?;
        Ok((q.scale(&inv), r))
    }

    pub fn rem(&self, v: &Self) -> Result<Self> {
        Ok(self.divrem(v)?.1)
    }

    pub fn make_monic(&self) -> Self {
        match self.leading().and_then(|c| c.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic gcd of two polynomials; zero only if both are zero.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Returns `(g, s, t)` with `g = s a + t b`, `g` monic (or zero).
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.check_var(other)?;
        let var = self.var.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::constant(&var, F::one()), UPoly::zero(&var));
        let (mut t0, mut t1) = (UPoly::zero(&var), UPoly::constant(&var, F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0 - q.clone() * s1.clone();
            let t = t0 - q * t1.clone();
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().and_then(|c| c.inv()) {
            Some(inv) => Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))),
            None => Ok((r0, s0, t0)),
        }
    }
}

/// Monic generator of the ideal generated by `gs`.
pub fn gcd_all<F: Field>(gs: &[UPoly<F>]) -> Result<UPoly<F>> {
    let mut it = gs.iter();
    let first = it.next().ok_or(Error::ZeroIdeal)?;
    let mut g = first.make_monic();
    for p in it {
        g = g.gcd(p)?;
    }
    if g.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    Ok(g)
}

impl<R: Ring> Add for UPoly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        UPoly::new(&self.var, coeffs)
    }
}

impl<R: Ring> Sub for UPoly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UPoly::new(&self.var, coeffs)
    }
}

impl<R: Ring> Neg for UPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

impl<R: Ring> Mul for UPoly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero(&self.var);
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(&self.var, out)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}

impl<R: fmt::Debug> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly[{}]{:?}", self.var, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use crate::field::Scalar;

    fn p(cs: &[i64]) -> UPoly<Q> {
        UPoly::new("x", cs.iter().map(|&c| Q::from_i64(c)).collect())
    }

    #[test]
    fn divrem_examples() {
        assert_eq!(p(&[0, 0, 1]).divrem(&p(&[0, 1])).unwrap(), (p(&[0, 1]), p(&[])));
        assert_eq!(p(&[1, 1]).divrem(&p(&[0, 0, 1])).unwrap(), (p(&[]), p(&[1, 1])));
        // x^2 = (x - 1)(x + 1) + 1
        let (q, r) = p(&[0, 0, 1]).divrem(&p(&[1, 1])).unwrap();
        assert_eq!((q.clone(), r.clone()), (p(&[-1, 1]), p(&[1])));
        assert_eq!(q * p(&[1, 1]) + r, p(&[0, 0, 1]));
    }

    #[test]
    fn divrem_by_zero_rejected() {
        assert!(matches!(p(&[1]).divrem(&p(&[])), Err(Error::DivisionByZero)));
    }

    #[test]
    fn variable_mismatch_rejected() {
        let y = UPoly::new("y", vec![Q::from_i64(1), Q::from_i64(1)]);
        assert!(p(&[1]).divrem(&y).is_err());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_all(&[p(&[0, 0, 1]), p(&[0, 1])]).unwrap(), p(&[0, 1]));
        assert_eq!(gcd_all(&[p(&[-1, 0, 1]), p(&[-1, 1])]).unwrap(), p(&[-1, 1]));
        assert_eq!(gcd_all(&[p(&[1, 0, 1]), p(&[1, 1])]).unwrap(), p(&[1]));
        assert!(matches!(gcd_all(&[p(&[]), p(&[])]), Err(Error::ZeroIdeal)));
        assert!(matches!(gcd_all::<Q>(&[]), Err(Error::ZeroIdeal)));
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(p(&[]).degree(), None);
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[3]).degree(), Some(0));
    }

    #[test]
    fn order_at_zero() {
        assert_eq!(p(&[0, 0, 1, 1]).order_at_zero(), Some(2));
        assert_eq!(p(&[]).order_at_zero(), None);
    }
}
