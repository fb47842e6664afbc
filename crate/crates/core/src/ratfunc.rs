//! Quotients of multivariate polynomials.
//!
//! There is no canonical form: values are reduced by monomial and scalar
//! content, and by exact division when one side divides the other. Equality
//! cross-multiplies.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::mpoly::MPoly;

#[derive(Clone)]
pub struct RationalFunc<F> {
    num: MPoly<F>,
    den: MPoly<F>,
}

impl<F: Scalar> RationalFunc<F> {
    pub fn new(num: MPoly<F>, den: MPoly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunc { num, den }.reduced())
    }

    pub fn poly(p: MPoly<F>) -> Self {
        RationalFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        RationalFunc::poly(MPoly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        RationalFunc::poly(MPoly::var(name))
    }

    pub fn num(&self) -> &MPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<F> {
        &self.den
    }

    /// The polynomial value, if the denominator is a constant.
    pub fn as_poly(&self) -> Option<MPoly<F>> {
        let d = self.den.as_constant()?;
        Some(self.num.scale(&d.inv()?))
    }

    fn reduced(self) -> Self {
        let RationalFunc { mut num, mut den } = self;
        if num.is_zero() {
            return RationalFunc {
                num,
                den: MPoly::one(),
            };
        }
        if let Some(d) = den.as_constant() {
            let inv = d.inv().expect("denominator is nonzero");
            return RationalFunc {
                num: num.scale(&inv),
                den: MPoly::one(),
            };
        }
        // common monomial factor
        let (a, b) = num.aligned(&den);
        let m: Vec<u32> = a
            .monomial_content()
            .iter()
            .zip(&b.monomial_content())
            .map(|(x, y)| (*x).min(*y))
            .collect();
        if m.iter().any(|&k| k > 0) {
            num = a.div_monomial(&m);
            den = b.div_monomial(&m);
        }
        if let Some(q) = num.div_exact(&den) {
            return RationalFunc {
                num: q,
                den: MPoly::one(),
            };
        }
        if den.num_terms() > 1 {
            if let Some(q) = den.div_exact(&num) {
                if num.num_terms() > 1 || num.as_constant().is_none() {
                    num = MPoly::one();
                    den = q;
                }
            }
        }
        if let Some(d) = den.as_constant() {
            let inv = d.inv().expect("denominator is nonzero");
            return RationalFunc {
                num: num.scale(&inv),
                den: MPoly::one(),
            };
        }
        let lc = den.lex_leading().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.inv().unwrap();
        RationalFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn eval(&self, point: &BTreeMap<String, F>) -> Result<F> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            let culprit = self
                .den
                .support_vars()
                .into_iter()
                .next()
                .unwrap_or_else(|| "?".to_string());
            return Err(Error::DenominatorVanishes(culprit));
        }
        Ok(self.num.eval(point)? * d.inv().unwrap())
    }

    /// Substitute rational functions for variables.
    pub fn substitute(&self, map: &BTreeMap<String, RationalFunc<F>>) -> Result<Self> {
        let n = substitute(&self.num, map)?;
        let d = substitute(&self.den, map)?;
        n.checked_div(&d).ok_or(Error::DivisionByZero)
    }

    pub fn diff(&self, name: &str) -> Result<Self> {
        let dn = diff_or_zero(&self.num, name);
        let dd = diff_or_zero(&self.den, name);
        RationalFunc::new(
            &(&dn * &self.den) - &(&self.num * &dd),
            &self.den * &self.den,
        )
    }
}

fn diff_or_zero<F: Scalar>(p: &MPoly<F>, name: &str) -> MPoly<F> {
    p.diff(name).unwrap_or_else(|_| MPoly::zero())
}

/// Compose `p` with a map from variable names to rational functions. Variables
/// absent from the map are kept.
pub fn substitute<F: Scalar>(
    p: &MPoly<F>,
    map: &BTreeMap<String, RationalFunc<F>>,
) -> Result<RationalFunc<F>> {
    p.eval_with(
        |c| RationalFunc::constant(c.clone()),
        |v| Some(map.get(v).cloned().unwrap_or_else(|| RationalFunc::var(v))),
    )
}

impl<F: Scalar> PartialEq for RationalFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<F: Scalar> Zero for RationalFunc<F> {
    fn zero() -> Self {
        RationalFunc::poly(MPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Scalar> One for RationalFunc<F> {
    fn one() -> Self {
        RationalFunc::poly(MPoly::one())
    }
    fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl<F: Scalar> Add for RationalFunc<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return RationalFunc {
                num: self.num + rhs.num,
                den: self.den,
            }
            .reduced();
        }
        RationalFunc {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .reduced()
    }
}

impl<F: Scalar> Sub for RationalFunc<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Scalar> Neg for RationalFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<F: Scalar> Mul for RationalFunc<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero();
        }
        RationalFunc {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .reduced()
    }
}

impl<F: Scalar> Field for RationalFunc<F> {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(
            RationalFunc {
                num: self.den.clone(),
                den: self.num.clone(),
            }
            .reduced(),
        )
    }
}

impl<F: Scalar> fmt::Display for RationalFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<F: Scalar> fmt::Debug for RationalFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
