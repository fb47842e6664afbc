//! The determinantal monomial ideals `a(s, t)`, their bidiagonal matrix,
//! colength, tangent/obstruction dimensions, and diagonal-plus-last-column
//! deformations.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::{BiIdeal, Exp2, VARS};
use crate::linalg::{det, Matrix};
use crate::mpoly::MPoly;
use crate::uni::{assemble, coeff_table, AssembledTuple, Shape, StratPoint};

/// Largest colength accepted by [`tangent_ext_dims`] unless overridden.
pub const DEFAULT_L_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdealSpec {
    s: Vec<u32>,
    t: Vec<u32>,
}

impl MonomialIdealSpec {
    pub fn new(s: Vec<u32>, t: Vec<u32>) -> Result<Self> {
        if s.is_empty() || s.len() != t.len() {
            return Err(Error::Invalid(format!(
                "s and t must be nonempty of equal length (got {} and {})",
                s.len(),
                t.len()
            )));
        }
        let (ss, ts): (u64, u64) = (s.iter().map(|&v| v as u64).sum(), t.iter().map(|&v| v as u64).sum());
        if ss * ts == 0 {
            return Err(Error::Invalid("ideal is not cosupported at the origin: (sum s)(sum t) = 0".into()));
        }
        Ok(MonomialIdealSpec { s, t })
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Every spec with `n` entries in `0..=max` and positive product.
    pub fn enumerate(n: usize, max: u32) -> Vec<Self> {
        let tuples = |n: usize| -> Vec<Vec<u32>> {
            let mut out = vec![Vec::new()];
            for _ in 0..n {
                out = out
                    .into_iter()
                    .flat_map(|v| {
                        (0..=max).map(move |k| {
                            let mut w = v.clone();
                            w.push(k);
                            w
                        })
                    })
                    .collect();
            }
            out
        };
        let mut out = Vec::new();
        for s in tuples(n) {
            for t in tuples(n) {
                if let Ok(spec) = MonomialIdealSpec::new(s.clone(), t) {
                    out.push(spec);
                }
            }
        }
        out
    }

    /// `G_0, ..., G_n` with `G_i = x^{t_1+..+t_{n-i}} y^{s_1+..+s_i}`.
    pub fn generators<F: Scalar>(&self) -> Vec<MPoly<F>> {
        let n = self.n();
        (0..=n)
            .map(|i| {
                let tx: u32 = self.t[..n - i].iter().sum();
                let sy: u32 = self.s[..i].iter().sum();
                MPoly::monomial(&VARS, &[tx, sy])
            })
            .collect()
    }

    /// The `n x (n+1)` bidiagonal matrix: `x^{t_i}` on the diagonal,
    /// `y^{s_{n+1-i}}` just right of it.
    pub fn matrix<F: Scalar>(&self) -> Vec<Vec<MPoly<F>>> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..=n)
                    .map(|j| {
                        if j == i {
                            MPoly::monomial(&VARS, &[self.t[i], 0])
                        } else if j == i + 1 {
                            MPoly::monomial(&VARS, &[0, self.s[n - 1 - i]])
                        } else {
                            MPoly::zero_in(&VARS)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `L = sum_{i+j <= n+1} s_i t_j`.
    pub fn colength_l(&self) -> usize {
        let n = self.n();
        let mut l = 0u64;
        for i in 0..n {
            for j in 0..n - i {
                l += self.s[i] as u64 * self.t[j] as u64;
            }
        }
        l as usize
    }

    /// Standard monomials of `A/a`.
    pub fn staircase(&self) -> Vec<Exp2> {
        let leads: Vec<Exp2> = self
            .generators::<crate::Q>()
            .iter()
            .map(|g| {
                let e = g.terms().keys().next().expect("monomial");
                [e[0], e[1]]
            })
            .collect();
        crate::ideal::staircase_of(&leads).expect("spec has finite colength")
    }
}

/// Determinant of `m` with column `col` (0-based) removed.
pub fn minor_without<F: Scalar>(m: &[Vec<MPoly<F>>], col: usize) -> MPoly<F> {
    let sub: Vec<Vec<MPoly<F>>> = m
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect();
    det(&sub)
}

/// `G_i = ±det(M without column n+1-i)` for every `i`.
pub fn generators_match_minors<F: Scalar>(spec: &MonomialIdealSpec) -> bool {
    let m = spec.matrix::<F>();
    let n = spec.n();
    spec.generators::<F>().iter().enumerate().all(|(i, g)| {
        let d = minor_without(&m, n - i);
        d == *g || d == -g.clone()
    })
}

/// Number of standard monomials of a monomial ideal.
pub fn staircase_colength<F: Scalar>(gens: &[MPoly<F>]) -> Result<usize> {
    let mut leads = Vec::new();
    for g in gens {
        let g = g.with_var_names(&VARS)?;
        if g.num_terms() != 1 {
            return Err(Error::Invalid(format!("`{g}` is not a monomial")));
        }
        let e = g.terms().keys().next().expect("one term");
        leads.push([e[0], e[1]]);
    }
    Ok(crate::ideal::staircase_of(&leads)?.len())
}

fn mult_matrix<F: Scalar>(basis: &[Exp2], index: &BTreeMap<Exp2, usize>, by: &MPoly<F>) -> Vec<Vec<F>> {
    let l = basis.len();
    let mut out = vec![vec![F::zero(); l]; l];
    for (e, c) in by.terms() {
        for (col, b) in basis.iter().enumerate() {
            if let Some(&row) = index.get(&[b[0] + e[0], b[1] + e[1]]) {
                out[row][col] = out[row][col].clone() + c.clone();
            }
        }
    }
    out
}

/// Dimensions of `Hom(a, A/a)` and `Ext^1(a, A/a)` from the resolution
/// `0 -> A^n -> A^{n+1} -> a -> 0`.
pub fn tangent_ext_dims<F: Scalar>(spec: &MonomialIdealSpec, limit: usize) -> Result<(usize, usize)> {
    let l = spec.colength_l();
    if l > limit {
        return Err(Error::OutOfRange(format!("L = {l} exceeds the limit {limit}")));
    }
    let basis = spec.staircase();
    let index: BTreeMap<Exp2, usize> = basis.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let m = spec.matrix::<F>();
    let n = spec.n();
    let mut rows = vec![vec![F::zero(); (n + 1) * l]; n * l];
    for (i, mrow) in m.iter().enumerate() {
        for (j, entry) in mrow.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let block = mult_matrix(&basis, &index, entry);
            for (r, brow) in block.iter().enumerate() {
                for (c, v) in brow.iter().enumerate() {
                    rows[i * l + r][j * l + c] = v.clone();
                }
            }
        }
    }
    let rank = Matrix::from_rows(rows, (n + 1) * l).rank();
    Ok(((n + 1) * l - rank, n * l - rank))
}

/// Field-valued deformation parameters: diagonal tails `b[i]` and
/// last-column entries `a[i]`, each of length `t_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformParams<F> {
    pub b: Vec<Vec<F>>,
    pub a: Vec<Vec<F>>,
}

impl<F: Scalar> DeformParams<F> {
    pub fn zero(spec: &MonomialIdealSpec) -> Self {
        let z: Vec<Vec<F>> = spec.t.iter().map(|&t| vec![F::zero(); t as usize]).collect();
        DeformParams { b: z.clone(), a: z }
    }

    pub fn random(spec: &MonomialIdealSpec, rng: &mut crate::sample::SampleRng, bound: i64) -> Self {
        let mut draw = || -> Vec<Vec<F>> {
            spec.t
                .iter()
                .map(|&t| (0..t).map(|_| crate::sample::scalar(rng, bound)).collect())
                .collect()
        };
        let b = draw();
        let a = draw();
        DeformParams { b, a }
    }

    /// `{"a": [[..]], "b": [[..]]}`; missing keys mean zero.
    pub fn from_json(spec: &MonomialIdealSpec, v: &Value) -> Result<Self> {
        let mut p = DeformParams::zero(spec);
        if v.get("a").is_some() {
            p.a = coeff_table(v.get("a"), "a")?;
        }
        if v.get("b").is_some() {
            p.b = coeff_table(v.get("b"), "b")?;
        }
        p.check(spec)?;
        Ok(p)
    }

    pub fn check(&self, spec: &MonomialIdealSpec) -> Result<()> {
        let ok = |v: &Vec<Vec<F>>| {
            v.len() == spec.n() && v.iter().zip(&spec.t).all(|(r, &t)| r.len() == t as usize)
        };
        if ok(&self.a) && ok(&self.b) {
            Ok(())
        } else {
            Err(Error::Invalid("deformation parameters must have t_i entries per row".into()))
        }
    }
}

fn x_poly<F: Scalar>(coeffs: &[F]) -> MPoly<F> {
    MPoly::from_terms(
        &VARS,
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (vec![j as u32, 0], c.clone())),
    )
}

/// `M + N`: diagonal `h_i`, last column `f_i` (added to `y^{s_1}` in the
/// last row).
pub fn deformed_matrix<F: Scalar>(spec: &MonomialIdealSpec, p: &DeformParams<F>) -> Result<Vec<Vec<MPoly<F>>>> {
    p.check(spec)?;
    let mut m = spec.matrix::<F>();
    let n = spec.n();
    for i in 0..n {
        m[i][i] = &m[i][i] + &x_poly(&p.b[i]);
        m[i][n] = &m[i][n] + &x_poly(&p.a[i]);
    }
    Ok(m)
}

/// Ideal of maximal minors of the deformed matrix.
pub fn deform<F: Scalar>(spec: &MonomialIdealSpec, p: &DeformParams<F>) -> Result<BiIdeal<F>> {
    let m = deformed_matrix(spec, p)?;
    BiIdeal::new((0..=spec.n()).map(|c| minor_without(&m, c)).collect())
}

/// The univariate tuple seen on the x-axis: shape `t`, `h_i` and `f_i` read
/// off the deformation. Needs every `s_i, t_i >= 1`, otherwise a unit entry
/// survives on the axis.
pub fn restrict_x_axis<F: Scalar>(spec: &MonomialIdealSpec, p: &DeformParams<F>) -> Result<AssembledTuple<F>> {
    p.check(spec)?;
    if spec.t.iter().sum::<u32>() == 0 {
        return Err(Error::Invalid("sum t = 0: no x-direction".into()));
    }
    if spec.t.contains(&0) || spec.s.contains(&0) {
        return Err(Error::Unsupported(
            "restriction to the x-axis needs every s_i and t_i positive".into(),
        ));
    }
    let shape = Shape::new(spec.t.iter().map(|&t| t as usize).collect())?;
    let pt = StratPoint::new(shape, p.b.clone(), p.a.clone())?;
    Ok(assemble(&pt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lines;
    use crate::uni::colength;
    use crate::field::Scalar;
    use crate::ideal::{incidence_colength, IncidenceMode};
    use crate::Q;

    fn spec(s: &[u32], t: &[u32]) -> MonomialIdealSpec {
        MonomialIdealSpec::new(s.to_vec(), t.to_vec()).unwrap()
    }

    fn polys(text: &str) -> Vec<MPoly<Q>> {
        parse_lines(text, &VARS).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(spec(&[2], &[3]).generators::<Q>(), polys("x^3\ny^2"));
        assert_eq!(spec(&[1, 1], &[1, 1]).generators::<Q>(), polys("x^2\nx*y\ny^2"));
        assert_eq!(spec(&[0, 2], &[1, 1]).generators::<Q>(), polys("x^2\nx\ny^2"));
        assert!(generators_match_minors::<Q>(&spec(&[1, 2, 3], &[3, 0, 1])));
    }

    #[test]
    fn colength_examples() {
        assert_eq!(spec(&[2], &[3]).colength_l(), 6);
        assert_eq!(spec(&[1, 1], &[1, 1]).colength_l(), 3);
        assert_eq!(spec(&[0, 2], &[1, 1]).colength_l(), 2);
        assert_eq!(staircase_colength(&polys("x\ny")).unwrap(), 1);
        assert_eq!(staircase_colength(&polys("x^2\nx*y\ny^2")).unwrap(), 3);
        assert_eq!(staircase_colength(&polys("x^3\ny^2")).unwrap(), 6);
        assert!(staircase_colength(&polys("x^3")).is_err());
        assert!(MonomialIdealSpec::new(vec![0], vec![2]).is_err());
    }

    #[test]
    fn fogarty_examples() {
        assert_eq!(tangent_ext_dims::<Q>(&spec(&[1], &[1]), 12).unwrap(), (2, 1));
        assert_eq!(tangent_ext_dims::<Q>(&spec(&[1, 1], &[1, 1]), 12).unwrap(), (6, 3));
        assert_eq!(tangent_ext_dims::<Q>(&spec(&[2], &[3]), 12).unwrap(), (12, 6));
        assert!(tangent_ext_dims::<Q>(&spec(&[2], &[3]), 5).is_err());
    }

    #[test]
    fn deform_examples() {
        let sp = spec(&[1, 1], &[1, 1]);
        let zero = deform(&sp, &DeformParams::<Q>::zero(&sp)).unwrap();
        assert!(zero.same_ideal(&BiIdeal::new(polys("x^2\nx*y\ny^2")).unwrap()));

        let sp1 = spec(&[1], &[1]);
        let eps = Q::from_i64(3);
        let p = DeformParams { b: vec![vec![Q::from_i64(0)]], a: vec![vec![eps]] };
        let i = deform(&sp1, &p).unwrap();
        assert!(i.same_ideal(&BiIdeal::new(polys("x\ny + 3")).unwrap()));
        assert_eq!(i.colength().unwrap(), 1);
        assert_eq!(colength(&restrict_x_axis(&sp1, &p).unwrap()), 0);

        let mut p = DeformParams::<Q>::zero(&sp);
        p.a[0][0] = Q::from_i64(1);
        let i = deform(&sp, &p).unwrap();
        assert_eq!(i.colength().unwrap(), 3);
        let t = restrict_x_axis(&sp, &p).unwrap();
        assert_eq!(incidence_colength(&i, IncidenceMode::Global).unwrap(), colength(&t));
    }

    #[test]
    fn restrict_origin() {
        let sp = spec(&[1, 2], &[2, 1]);
        let t = restrict_x_axis(&sp, &DeformParams::<Q>::zero(&sp)).unwrap();
        assert_eq!(colength(&t), 3);
        let sp0 = spec(&[0, 2], &[1, 1]);
        assert!(restrict_x_axis(&sp0, &DeformParams::<Q>::zero(&sp0)).is_err());
    }
}
