//! Tuples of univariate polynomials `(h_1..h_n, f_1..f_n)` with `h_i` monic
//! of degree `m_i` and `deg f_i < m_i`, stratified by the colength of the
//! ideal `(h, p_1, .., p_n)` where `h = prod h_i` and
//! `p_i = f_i prod_{j != i} h_j`.
//!
//! Two independent colength computations are provided: the degree of a gcd
//! ([`colength`]) and the corank of a multiplication matrix modulo `h`
//! ([`colength_oracle`]). The symbolic minors of that matrix give equations
//! for the strata ([`stratum_equations`]).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{minors, Matrix};
use crate::mpoly::MPoly;
use crate::sample::{self, SampleRng, COEFF_BOUND};
use crate::upoly::{gcd_all, UPoly};

/// Variable name of the univariate ring.
pub const X: &str = "x";

/// Degrees `(m_1, .., m_n)`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Invalid("shape must have at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Invalid("shape parts must be positive".into()));
        }
        Ok(Shape(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `m = sum m_i`
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Coordinate names `a{i}_{j}` then `b{i}_{j}` (1-based `i`).
    pub fn coordinates(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, &mi) in self.0.iter().enumerate() {
            out.extend((0..mi).map(|j| a_name(i, j)));
        }
        for (i, &mi) in self.0.iter().enumerate() {
            out.extend((0..mi).map(|j| b_name(i, j)));
        }
        out
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Name of the coordinate `a_{i,j}`, `i` 0-based.
pub fn a_name(i: usize, j: usize) -> String {
    format!("a{}_{}", i + 1, j)
}

/// Name of the coordinate `b_{i,j}`, `i` 0-based.
pub fn b_name(i: usize, j: usize) -> String {
    format!("b{}_{}", i + 1, j)
}

/// A point of the affine space of tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct StratPoint<F> {
    shape: Shape,
    b: Vec<Vec<F>>,
    a: Vec<Vec<F>>,
}

impl<F: Scalar> StratPoint<F> {
    pub fn new(shape: Shape, b: Vec<Vec<F>>, a: Vec<Vec<F>>) -> Result<Self> {
        let ok = |v: &Vec<Vec<F>>| {
            v.len() == shape.n() && v.iter().zip(shape.parts()).all(|(r, &m)| r.len() == m)
        };
        if !ok(&b) || !ok(&a) {
            return Err(Error::Invalid(format!(
                "coefficient arrays do not match shape {shape}"
            )));
        }
        Ok(StratPoint { shape, b, a })
    }

    pub fn origin(shape: &Shape) -> Self {
        let zeros: Vec<Vec<F>> = shape.parts().iter().map(|&m| vec![F::zero(); m]).collect();
        StratPoint {
            shape: shape.clone(),
            b: zeros.clone(),
            a: zeros,
        }
    }

    /// Point with the given `h_i` (monic, degree `m_i`) and `f_i`.
    pub fn from_polys(hs: &[UPoly<F>], fs: &[UPoly<F>]) -> Result<Self> {
        let mut parts = Vec::new();
        let mut b = Vec::new();
        let mut a = Vec::new();
        for (h, f) in hs.iter().zip(fs) {
            let m = h.degree().filter(|_| h.is_monic()).ok_or_else(|| {
                Error::Invalid("h_i must be monic of positive degree".into())
            })?;
            if f.degree().is_some_and(|d| d >= m) {
                return Err(Error::Invalid("deg f_i must be below deg h_i".into()));
            }
            parts.push(m);
            b.push((0..m).map(|j| h.coeff(j)).collect());
            a.push((0..m).map(|j| f.coeff(j)).collect());
        }
        StratPoint::new(Shape::new(parts)?, b, a)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn a(&self) -> &[Vec<F>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<F>] {
        &self.b
    }

    pub fn h(&self, i: usize) -> UPoly<F> {
        let mut c = self.b[i].clone();
        c.push(F::one());
        UPoly::new(X, c)
    }

    pub fn f(&self, i: usize) -> UPoly<F> {
        UPoly::new(X, self.a[i].clone())
    }

    pub fn to_assignment(&self) -> BTreeMap<String, F> {
        let mut out = BTreeMap::new();
        for i in 0..self.shape.n() {
            for j in 0..self.shape.parts()[i] {
                out.insert(a_name(i, j), self.a[i][j].clone());
                out.insert(b_name(i, j), self.b[i][j].clone());
            }
        }
        out
    }

    pub fn from_assignment(shape: &Shape, values: &BTreeMap<String, F>) -> Result<Self> {
        let get = |name: String| {
            values
                .get(&name)
                .cloned()
                .ok_or(Error::MissingValue(name))
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, &m) in shape.parts().iter().enumerate() {
            a.push((0..m).map(|j| get(a_name(i, j))).collect::<Result<Vec<_>>>()?);
            b.push((0..m).map(|j| get(b_name(i, j))).collect::<Result<Vec<_>>>()?);
        }
        StratPoint::new(shape.clone(), b, a)
    }

    pub fn to_json(&self) -> Value {
        let arr = |v: &Vec<Vec<F>>| -> Value {
            Value::Array(
                v.iter()
                    .map(|r| Value::Array(r.iter().map(|c| Value::String(c.to_string())).collect()))
                    .collect(),
            )
        };
        json!({
            "shape": self.shape.parts(),
            "b": arr(&self.b),
            "a": arr(&self.a),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let shape: Vec<usize> = v
            .get("shape")
            .and_then(|s| s.as_array())
            .ok_or_else(|| Error::Invalid("missing `shape`".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invalid("`shape` must hold integers".into()))?;
        let shape = Shape::new(shape)?;
        let b = coeff_table::<F>(v.get("b"), "b")?;
        let a = coeff_table::<F>(v.get("a"), "a")?;
        StratPoint::new(shape, b, a)
    }
}

/// Parse a JSON table of coefficients given as integers or `"p/q"` strings.
pub fn coeff_table<F: Scalar>(v: Option<&Value>, key: &str) -> Result<Vec<Vec<F>>> {
    let rows = v
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Invalid(format!("missing `{key}`")))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Invalid(format!("`{key}` rows must be arrays")))?
                .iter()
                .map(|c| {
                    let text = match c {
                        Value::String(s) => s.clone(),
                        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                        _ => return Err(Error::Invalid(format!("bad coefficient {c} in `{key}`"))),
                    };
                    F::parse_text(&text)
                        .ok_or_else(|| Error::Invalid(format!("bad coefficient `{text}` in `{key}`")))
                })
                .collect()
        })
        .collect()
}

/// `h = prod h_i` and `p_i = f_i prod_{j != i} h_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AssembledTuple<F> {
    pub h: UPoly<F>,
    pub p: Vec<UPoly<F>>,
}

pub fn assemble<F: Scalar>(pt: &StratPoint<F>) -> AssembledTuple<F> {
    let n = pt.shape.n();
    let hs: Vec<UPoly<F>> = (0..n).map(|i| pt.h(i)).collect();
    let one = UPoly::constant(X, F::one());
    let h = hs.iter().fold(one.clone(), |acc, hi| acc * hi.clone());
    let p = (0..n)
        .map(|i| {
            hs.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(pt.f(i), |acc, (_, hj)| acc * hj.clone())
        })
        .collect();
    AssembledTuple { h, p }
}

/// Colength of `(h, p_1, .., p_n)` in `k[x]`: the degree of the gcd.
pub fn colength<F: Scalar>(t: &AssembledTuple<F>) -> usize {
    let mut gens = vec![t.h.clone()];
    gens.extend(t.p.iter().cloned());
    gcd_all(&gens)
        .expect("h is monic, so the ideal is nonzero")
        .degree()
        .expect("gcd is nonzero")
}

/// Columns `Rem(x^a p_j, h)` for `0 <= a < m`, over any ring (h monic).
fn multiplication_columns<R: crate::field::Ring>(h: &UPoly<R>, ps: &[UPoly<R>]) -> Vec<UPoly<R>> {
    let m = h.degree().unwrap_or(0);
    let mut cols = Vec::new();
    for p in ps {
        let mut r = p.divrem_monic(h).expect("h is monic").1;
        for _ in 0..m {
            cols.push(r.clone());
            r = r.shift(1).divrem_monic(h).expect("h is monic").1;
        }
    }
    cols
}

/// `m - rank` of the span of `{Rem(x^a p_j, h)}` in `k[x]/(h)`.
pub fn colength_oracle<F: Scalar>(t: &AssembledTuple<F>) -> usize {
    let m = t.h.degree().expect("h is nonzero");
    let cols = multiplication_columns(&t.h, &t.p);
    let rows: Vec<Vec<F>> = (0..m)
        .map(|r| cols.iter().map(|c| c.coeff(r)).collect())
        .collect();
    m - Matrix::from_rows(rows, cols.len()).rank()
}

/// Symbolic `h_i`, `f_i` with coefficient polynomials in the coordinates.
pub fn symbolic_polys<F: Scalar>(shape: &Shape) -> (Vec<UPoly<MPoly<F>>>, Vec<UPoly<MPoly<F>>>) {
    let mut hs = Vec::new();
    let mut fs = Vec::new();
    for (i, &m) in shape.parts().iter().enumerate() {
        let mut hc: Vec<MPoly<F>> = (0..m).map(|j| MPoly::var(&b_name(i, j))).collect();
        hc.push(MPoly::one());
        hs.push(UPoly::new(X, hc));
        fs.push(UPoly::new(X, (0..m).map(|j| MPoly::var(&a_name(i, j))).collect()));
    }
    (hs, fs)
}

/// Equations whose common zero set is the stratum `colength >= k`: the
/// `(m-k+1)`-minors of the symbolic multiplication matrix. Zero and repeated
/// minors are dropped.
pub fn stratum_equations<F: Scalar>(shape: &Shape, k: usize) -> Result<Vec<MPoly<F>>> {
    let m = shape.total();
    if k > m {
        return Err(Error::OutOfRange(format!("stratum {k} exceeds m = {m}")));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let (hs, fs) = symbolic_polys::<F>(shape);
    let n = shape.n();
    let one = UPoly::constant(X, MPoly::one());
    let h = hs.iter().fold(one, |acc, hi| acc * hi.clone());
    let ps: Vec<UPoly<MPoly<F>>> = (0..n)
        .map(|i| {
            hs.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(fs[i].clone(), |acc, (_, hj)| acc * hj.clone())
        })
        .collect();
    let cols = multiplication_columns(&h, &ps);
    let rows: Vec<Vec<MPoly<F>>> = (0..m)
        .map(|r| cols.iter().map(|c| c.coeff(r)).collect())
        .collect();
    let mut out: Vec<MPoly<F>> = Vec::new();
    for d in minors(&rows, cols.len(), m - k + 1) {
        if d.is_zero() || out.iter().any(|e| *e == d || *e == -d.clone()) {
            continue;
        }
        out.push(d);
    }
    Ok(out)
}

fn random_poly<F: Scalar>(rng: &mut SampleRng, max_deg: Option<usize>, monic: bool) -> UPoly<F> {
    match max_deg {
        None => UPoly::zero(X),
        Some(d) => {
            let mut c: Vec<F> = (0..=d).map(|_| sample::scalar(rng, COEFF_BOUND)).collect();
            if monic {
                c[d] = F::one();
            }
            UPoly::new(X, c)
        }
    }
}

/// Uniformly random point (coefficients in `[-5, 5]`).
pub fn random_point<F: Scalar>(shape: &Shape, rng: &mut SampleRng) -> StratPoint<F> {
    let b = shape
        .parts()
        .iter()
        .map(|&m| (0..m).map(|_| sample::scalar(rng, COEFF_BOUND)).collect())
        .collect();
    let a = shape
        .parts()
        .iter()
        .map(|&m| (0..m).map(|_| sample::scalar(rng, COEFF_BOUND)).collect())
        .collect();
    StratPoint {
        shape: shape.clone(),
        b,
        a,
    }
}

const MAX_TRIES: usize = 10_000;

/// A seeded point of colength exactly `k`. The common divisor is placed in
/// the first index of largest degree, so `k` may not exceed `max m_i`
/// (except `k = m`, reached by setting every `f_i = 0`).
pub fn construct_stratum_point<F: Scalar>(shape: &Shape, k: usize, seed: u64) -> Result<StratPoint<F>> {
    let m = shape.total();
    let parts = shape.parts();
    let (idx, &top) = parts
        .iter()
        .enumerate()
        .max_by_key(|(i, &mi)| (mi, std::cmp::Reverse(*i)))
        .unwrap();
    if k > top && k != m {
        return Err(Error::Unsupported(format!(
            "colength {k} exceeds the largest part {top} of shape {shape}"
        )));
    }
    let mut rng = sample::rng(seed);
    for _ in 0..MAX_TRIES {
        let mut hs = Vec::new();
        let mut fs = Vec::new();
        if k == m {
            for &mi in parts {
                hs.push(random_poly::<F>(&mut rng, Some(mi), true));
                fs.push(UPoly::zero(X));
            }
        } else {
            let d = random_poly::<F>(&mut rng, Some(k), true);
            for (i, &mi) in parts.iter().enumerate() {
                if i == idx {
                    let cof = random_poly::<F>(&mut rng, Some(mi - k), true);
                    let rest = (mi - 1).checked_sub(k);
                    let g = random_poly::<F>(&mut rng, rest, false);
                    hs.push(d.clone() * cof);
                    fs.push(d.clone() * g);
                } else {
                    hs.push(random_poly::<F>(&mut rng, Some(mi), true));
                    fs.push(random_poly::<F>(&mut rng, Some(mi - 1), false));
                }
            }
        }
        let pt = StratPoint::from_polys(&hs, &fs)?;
        if colength(&assemble(&pt)) == k {
            return Ok(pt);
        }
    }
    Err(Error::Sampling(format!(
        "no point of colength {k} found for shape {shape}"
    )))
}

/// Evaluate every equation at the point; true if all vanish.
pub fn all_vanish<F: Scalar>(eqs: &[MPoly<F>], pt: &StratPoint<F>) -> Result<bool> {
    let asg = pt.to_assignment();
    for e in eqs {
        if !e.eval(&asg)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn up(cs: &[i64]) -> UPoly<Q> {
        UPoly::new(X, cs.iter().map(|&c| Q::from_i64(c)).collect())
    }

    fn shape(p: &[usize]) -> Shape {
        Shape::new(p.to_vec()).unwrap()
    }

    #[test]
    fn assemble_examples() {
        let pt = StratPoint::from_polys(&[up(&[0, 0, 1])], &[up(&[1, 1])]).unwrap();
        let t = assemble(&pt);
        assert_eq!(t.h, up(&[0, 0, 1]));
        assert_eq!(t.p, vec![up(&[1, 1])]);

        let t = assemble(&StratPoint::<Q>::origin(&shape(&[2, 1])));
        assert_eq!(t.h, up(&[0, 0, 0, 1]));
        assert!(t.p.iter().all(|p| p.is_zero()));

        let pt = StratPoint::from_polys(&[up(&[0, 1]), up(&[-1, 1])], &[up(&[1]), up(&[2])]).unwrap();
        let t = assemble(&pt);
        assert_eq!(t.h, up(&[0, -1, 1]));
        assert_eq!(t.p, vec![up(&[-1, 1]), up(&[0, 2])]);
    }

    #[test]
    fn colength_examples() {
        for s in [&[3][..], &[2, 1], &[1, 1, 1]] {
            let t = assemble(&StratPoint::<Q>::origin(&shape(s)));
            assert_eq!(colength(&t), 3);
            assert_eq!(colength_oracle(&t), 3);
        }
        let t = AssembledTuple { h: up(&[0, 0, 1]), p: vec![up(&[1])] };
        assert_eq!((colength(&t), colength_oracle(&t)), (0, 0));
        let t = AssembledTuple { h: up(&[0, -1, 1]), p: vec![up(&[]), up(&[0, 1])] };
        assert_eq!(colength(&t), 1);
        let t = AssembledTuple { h: up(&[0, 0, 1]), p: vec![up(&[0, 1])] };
        assert_eq!(colength_oracle(&t), 1);
    }

    #[test]
    fn stratum_equations_range() {
        assert!(stratum_equations::<Q>(&shape(&[2]), 3).is_err());
        assert!(stratum_equations::<Q>(&shape(&[2]), 0).unwrap().is_empty());
    }

    #[test]
    fn top_stratum_is_the_vanishing_of_f() {
        // the 1x1 minors at the top stratum vanish exactly when every a does
        let s = shape(&[2, 1]);
        let eqs = stratum_equations::<Q>(&s, 3).unwrap();
        let mut rng = sample::rng(3);
        for t in 0..60 {
            let mut pt = random_point::<Q>(&s, &mut rng);
            if t % 3 == 0 {
                pt.a.iter_mut().for_each(|r| r.iter_mut().for_each(|c| *c = Q::from_i64(0)));
            }
            let a_zero = pt.a.iter().flatten().all(|c| c.is_zero());
            assert_eq!(all_vanish(&eqs, &pt).unwrap(), a_zero);
        }
    }

    #[test]
    fn construct_examples() {
        let pt = construct_stratum_point::<Q>(&shape(&[2, 1]), 1, 11).unwrap();
        assert_eq!(colength(&assemble(&pt)), 1);
        let pt = construct_stratum_point::<Q>(&shape(&[3]), 3, 5).unwrap();
        assert!(pt.f(0).is_zero());
        let pt = construct_stratum_point::<Q>(&shape(&[2, 2]), 0, 5).unwrap();
        assert_eq!(colength(&assemble(&pt)), 0);
        assert!(matches!(
            construct_stratum_point::<Q>(&shape(&[1, 1, 1]), 2, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let pt = construct_stratum_point::<Q>(&shape(&[2, 1]), 1, 2).unwrap();
        let v = pt.to_json();
        assert_eq!(StratPoint::<Q>::from_json(&v).unwrap(), pt);
        let v: Value = serde_json::from_str(r#"{"shape":[1],"b":[["3/2"]],"a":[[4]]}"#).unwrap();
        let pt = StratPoint::<Q>::from_json(&v).unwrap();
        assert_eq!(pt.b()[0][0].to_string(), "3/2");
        assert!(StratPoint::<Q>::from_json(&serde_json::json!({"shape":[2],"b":[[1]],"a":[[1,2]]})).is_err());
    }
}
