//! Sparse multivariate polynomials over an exact [`Scalar`].
//!
//! A polynomial carries its own ordered variable list. Binary operations on
//! polynomials with different lists first embed both into the union list
//! (variables of the left operand first), so values built in different
//! contexts combine freely. No zero coefficient is ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Ring, Scalar};
use crate::upoly::UPoly;

pub type Exponent = Vec<u32>;

#[derive(Clone)]
pub struct MPoly<F> {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponent, F>,
}

fn union_vars(a: &Arc<[String]>, b: &Arc<[String]>) -> Arc<[String]> {
    if Arc::ptr_eq(a, b) || a[..] == b[..] {
        return a.clone();
    }
    let mut out: Vec<String> = a.to_vec();
    for v in b.iter() {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out.into()
}

impl<F: Scalar> MPoly<F> {
    pub fn zero_in(vars: &[&str]) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.to_string()).collect::<Vec<_>>().into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut p = MPoly::zero_in(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent length must match variables");
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn from_parts(vars: Arc<[String]>, terms: BTreeMap<Exponent, F>) -> Self {
        MPoly {
            vars,
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn constant(c: F) -> Self {
        let mut p = MPoly::zero_in(&[]);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn from_i64(c: i64) -> Self {
        MPoly::constant(F::from_i64(c))
    }

    pub fn var(name: &str) -> Self {
        MPoly::from_terms(&[name], [(vec![1], F::one())])
    }

    pub fn var_pow(name: &str, e: u32) -> Self {
        if e == 0 {
            return MPoly::one();
        }
        MPoly::from_terms(&[name], [(vec![e], F::one())])
    }

    /// `x^a y^b` in the variables `(x, y)`.
    pub fn monomial(vars: &[&str], exp: &[u32]) -> Self {
        MPoly::from_terms(vars, [(exp.to_vec(), F::one())])
    }

    fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, F> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The constant value, if the polynomial has no non-constant term.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> F {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&k| k == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(F::zero)
    }

    /// The single variable name, if `self` is exactly one variable.
    pub fn as_variable(&self) -> Option<&str> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !c.is_one() {
            return None;
        }
        let mut nz = e.iter().enumerate().filter(|(_, &k)| k != 0);
        match (nz.next(), nz.next()) {
            (Some((i, 1)), None) => Some(&self.vars[i]),
            _ => None,
        }
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Re-express in the variable list `vars`; fails if a used variable is
    /// missing from it.
    pub fn with_vars(&self, vars: &Arc<[String]>) -> Result<Self> {
        if Arc::ptr_eq(&self.vars, vars) || self.vars[..] == vars[..] {
            return Ok(MPoly {
                vars: vars.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            map.push(vars.iter().position(|w| w == v));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => return Err(Error::UnknownVariable(self.vars[i].clone())),
                }
            }
            terms.insert(ne, c.clone());
        }
        Ok(MPoly {
            vars: vars.clone(),
            terms,
        })
    }

    pub fn with_var_names(&self, vars: &[&str]) -> Result<Self> {
        let vars: Arc<[String]> = vars.iter().map(|s| s.to_string()).collect::<Vec<_>>().into();
        self.with_vars(&vars)
    }

    pub(crate) fn aligned(&self, other: &Self) -> (Self, Self) {
        let vars = union_vars(&self.vars, &other.vars);
        (
            self.with_vars(&vars).expect("union contains all variables"),
            other.with_vars(&vars).expect("union contains all variables"),
        )
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, name: &str) -> Result<Self> {
        let i = self
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut out = MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.clone() * F::from_i64(e[i] as i64));
        }
        Ok(out)
    }

    /// Evaluate in any ring given images of the coefficients and variables.
    /// Only variables that occur are looked up.
    pub fn eval_with<R: Ring>(
        &self,
        lift: impl Fn(&F) -> R,
        value: impl Fn(&str) -> Option<R>,
    ) -> Result<R> {
        let mut vals: Vec<Option<R>> = vec![None; self.vars.len()];
        let mut powers: Vec<Vec<R>> = vec![Vec::new(); self.vars.len()];
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut t = lift(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if vals[i].is_none() {
                    let v = value(&self.vars[i])
                        .ok_or_else(|| Error::MissingValue(self.vars[i].clone()))?;
                    powers[i].push(R::one());
                    vals[i] = Some(v);
                }
                let base = vals[i].clone().unwrap();
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().clone() * base.clone();
                    powers[i].push(next);
                }
                t = t * powers[i][k as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &BTreeMap<String, F>) -> Result<F> {
        self.eval_with(|c| c.clone(), |v| point.get(v).cloned())
    }

    /// Substitute polynomials for some variables; the rest stay put.
    pub fn subst(&self, map: &BTreeMap<String, MPoly<F>>) -> Self {
        self.eval_with(
            |c| MPoly::constant(c.clone()),
            |v| Some(map.get(v).cloned().unwrap_or_else(|| MPoly::var(v))),
        )
        .map(|r: MPoly<F>| {
            let vars = union_vars(&self.vars, &r.vars);
            r.with_vars(&vars).expect("union contains all variables")
        })
        .expect("every variable has an image")
    }

    /// Partially evaluate some variables at field values.
    pub fn specialize(&self, values: &BTreeMap<String, F>) -> Self {
        let map = values
            .iter()
            .map(|(k, v)| (k.clone(), MPoly::constant(v.clone())))
            .collect();
        self.subst(&map)
    }

    /// View as a univariate polynomial in `name` with polynomial coefficients.
    pub fn to_upoly(&self, name: &str) -> UPoly<MPoly<F>> {
        let Some(i) = self.var_index(name) else {
            return UPoly::constant(name, self.clone());
        };
        let mut coeffs: Vec<MPoly<F>> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while coeffs.len() <= k {
                coeffs.push(MPoly {
                    vars: self.vars.clone(),
                    terms: BTreeMap::new(),
                });
            }
            let mut ne = e.clone();
            ne[i] = 0;
            coeffs[k].add_term(ne, c.clone());
        }
        UPoly::new(name, coeffs)
    }

    pub fn from_upoly(p: &UPoly<MPoly<F>>) -> Self {
        let x = MPoly::var(p.var());
        p.coeffs()
            .iter()
            .rev()
            .fold(MPoly::zero(), |acc, c| &(&acc * &x) + c)
    }

    pub fn from_scalar_upoly(p: &UPoly<F>) -> Self {
        MPoly::from_upoly(&p.map(|c| MPoly::constant(c.clone())))
    }

    /// Univariate polynomial with scalar coefficients, if `self` only
    /// involves `name`.
    pub fn to_scalar_upoly(&self, name: &str) -> Option<UPoly<F>> {
        let u = self.to_upoly(name);
        let coeffs: Option<Vec<F>> = u.coeffs().iter().map(|c| c.as_constant()).collect();
        Some(UPoly::new(name, coeffs?))
    }

    /// Largest term in lex order of this polynomial's variable list.
    pub fn lex_leading(&self) -> Option<(&Exponent, &F)> {
        self.terms.iter().next_back()
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Exponent {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.vars.len()];
        };
        let mut g = first.clone();
        for e in it {
            for (a, b) in g.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        g
    }

    /// Divide every exponent by the monomial `m` (must divide every term).
    pub fn div_monomial(&self, m: &Exponent) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (mut r, d) = self.aligned(d);
        let (de, dc) = d.lex_leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let dinv = dc.inv()?;
        let mut q = MPoly {
            vars: r.vars.clone(),
            terms: BTreeMap::new(),
        };
        while let Some((re, rc)) = r.lex_leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let te: Exponent = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let tc = rc * dinv.clone();
            let t = MPoly::from_parts(r.vars.clone(), BTreeMap::from([(te, tc)]));
            r = &r - &(&t * &d);
            q = &q + &t;
        }
        Some(q)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (mut a, b) = if self.vars[..] == other.vars[..] {
            (self.clone(), other.clone())
        } else {
            self.aligned(other)
        };
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            let vars = union_vars(&self.vars, &other.vars);
            return MPoly {
                vars,
                terms: BTreeMap::new(),
            };
        }
        let (a, b) = if self.vars[..] == other.vars[..] {
            (self.clone(), other.clone())
        } else {
            self.aligned(other)
        };
        let mut out = MPoly {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<F: Scalar> PartialEq for MPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.vars[..] == other.vars[..] {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl<F: Scalar> Eq for MPoly<F> {}

impl<F: Scalar> Zero for MPoly<F> {
    fn zero() -> Self {
        MPoly::zero_in(&[])
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Scalar> One for MPoly<F> {
    fn one() -> Self {
        MPoly::constant(F::one())
    }
}

impl<F: Scalar> Add for MPoly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<'a, F: Scalar> Add<&'a MPoly<F>> for &'a MPoly<F> {
    type Output = MPoly<F>;
    fn add(self, rhs: &'a MPoly<F>) -> MPoly<F> {
        self.add_ref(rhs)
    }
}

impl<F: Scalar> Sub for MPoly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}

impl<'a, F: Scalar> Sub<&'a MPoly<F>> for &'a MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, rhs: &'a MPoly<F>) -> MPoly<F> {
        self.add_ref(&-rhs.clone())
    }
}

impl<F: Scalar> Neg for MPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        MPoly {
            vars: self.vars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<F: Scalar> Mul for MPoly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, F: Scalar> Mul<&'a MPoly<F>> for &'a MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, rhs: &'a MPoly<F>) -> MPoly<F> {
        self.mul_ref(rhs)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], e: &Exponent) -> fmt::Result {
    let mut first = true;
    for (v, &k) in vars.iter().zip(e) {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{k}")?;
        }
    }
    Ok(())
}

/// Grammar-compatible text, terms in descending lex order of the variable
/// list: `x^2*y - 3/2*x + 1`.
impl<F: Scalar> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, &self.vars, e)?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly_in;
    use crate::Q;

    fn p(s: &str) -> MPoly<Q> {
        parse_poly_in::<Q>(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("x^2*y").diff("x").unwrap(), p("2*x*y"));
        assert_eq!(p("x^2").diff("y").unwrap(), p("0"));
        assert_eq!(p("x^3 + 3*x*y").diff("x").unwrap(), p("3*x^2 + 3*y"));
        assert!(matches!(p("x").diff("z"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn display_roundtrip() {
        let q = p("x^2*y - 3/2*x + 1");
        assert_eq!(q.to_string(), "x^2*y - 3/2*x + 1");
        assert_eq!(p("-x + y").to_string(), "-x + y");
    }

    #[test]
    fn mixed_variable_lists_combine() {
        let a = MPoly::<Q>::var("u");
        let b = MPoly::<Q>::var("v");
        let s = &a + &b;
        assert_eq!(s.vars(), &["u".to_string(), "v".to_string()]);
        assert_eq!(&s - &b, a);
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - y^2");
        let d = p("x + y");
        assert_eq!(a.div_exact(&d).unwrap(), p("x - y"));
        assert!(p("x^2 + y").div_exact(&d).is_none());
    }

    #[test]
    fn upoly_view_roundtrip() {
        let a = p("x^2*y + 3*x + y^2");
        let u = a.to_upoly("x");
        assert_eq!(u.degree(), Some(2));
        assert_eq!(MPoly::from_upoly(&u), a);
    }

    #[test]
    fn substitution() {
        let a = p("x^2 + y");
        let map = BTreeMap::from([("x".to_string(), p("y + 1"))]);
        assert_eq!(a.subst(&map), p("y^2 + 3*y + 1"));
    }
}
