//! Zero-dimensional ideals of `k[x, y]`: Buchberger, staircases, the flat
//! limit under `y -> λy` as `λ -> 0`, monomialization and incidence length
//! along the x-axis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::mpoly::MPoly;
use crate::upoly::{gcd_all, UPoly};

pub const VARS: [&str; 2] = ["x", "y"];

/// Exponent pair `(deg_x, deg_y)`.
pub type Exp2 = [u32; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Lexicographic with `y > x`.
    Lex,
    /// Total degree, ties broken by `Lex`.
    GrLex,
    /// `wx*deg_x + wy*deg_y`, ties broken by `Lex`.
    Weighted(u32, u32),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Exp2, b: &Exp2) -> Ordering {
        let lex = (a[1], a[0]).cmp(&(b[1], b[0]));
        match *self {
            MonomialOrder::Lex => lex,
            MonomialOrder::GrLex => (a[0] + a[1]).cmp(&(b[0] + b[1])).then(lex),
            MonomialOrder::Weighted(wx, wy) => {
                let w = |e: &Exp2| wx as u64 * e[0] as u64 + wy as u64 * e[1] as u64;
                w(a).cmp(&w(b)).then(lex)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncidenceMode {
    /// Order at `x = 0` of the restriction generator.
    Local,
    /// Degree of the restriction generator (all points of the axis).
    Global,
}

type Bp<F> = BTreeMap<Exp2, F>;

fn to_bp<F: Scalar>(p: &MPoly<F>) -> Result<Bp<F>> {
    let q = p.with_var_names(&VARS)?;
    Ok(q.terms().iter().map(|(e, c)| ([e[0], e[1]], c.clone())).collect())
}

fn from_bp<F: Scalar>(p: &Bp<F>) -> MPoly<F> {
    MPoly::from_terms(&VARS, p.iter().map(|(e, c)| (e.to_vec(), c.clone())))
}

fn lead<F: Scalar>(p: &Bp<F>, ord: MonomialOrder) -> Option<(Exp2, F)> {
    p.iter()
        .max_by(|a, b| ord.cmp(a.0, b.0))
        .map(|(e, c)| (*e, c.clone()))
}

fn divides(a: &Exp2, b: &Exp2) -> bool {
    a[0] <= b[0] && a[1] <= b[1]
}

/// `p - c * x^e * g`
fn sub_mul<F: Scalar>(p: &mut Bp<F>, c: &F, e: &Exp2, g: &Bp<F>) {
    for (ge, gc) in g {
        let k = [ge[0] + e[0], ge[1] + e[1]];
        let v = p.get(&k).cloned().unwrap_or_else(F::zero) - c.clone() * gc.clone();
        if v.is_zero() {
            p.remove(&k);
        } else {
            p.insert(k, v);
        }
    }
}

struct Basis<F> {
    polys: Vec<(Bp<F>, Exp2, F)>,
}

impl<F: Scalar> Basis<F> {
    fn reduce(&self, f: &Bp<F>, ord: MonomialOrder) -> Bp<F> {
        let mut f = f.clone();
        let mut r = Bp::new();
        while let Some((le, lc)) = lead(&f, ord) {
            match self.polys.iter().find(|(_, ge, _)| divides(ge, &le)) {
                Some((g, ge, gc)) => {
                    let c = lc * gc.inv().expect("nonzero lead");
                    sub_mul(&mut f, &c, &[le[0] - ge[0], le[1] - ge[1]], g);
                }
                None => {
                    f.remove(&le);
                    r.insert(le, lc);
                }
            }
        }
        r
    }

    fn push(&mut self, p: Bp<F>, ord: MonomialOrder) {
        let (e, c) = lead(&p, ord).expect("nonzero");
        self.polys.push((p, e, c));
    }
}

fn spoly<F: Scalar>(a: &(Bp<F>, Exp2, F), b: &(Bp<F>, Exp2, F)) -> Bp<F> {
    let l = [a.1[0].max(b.1[0]), a.1[1].max(b.1[1])];
    let mut s = Bp::new();
    let ca = a.2.inv().expect("nonzero lead");
    let cb = b.2.inv().expect("nonzero lead");
    sub_mul(&mut s, &(-ca), &[l[0] - a.1[0], l[1] - a.1[1]], &a.0);
    sub_mul(&mut s, &cb, &[l[0] - b.1[0], l[1] - b.1[1]], &b.0);
    s
}

/// Reduced, monic Gröbner basis, sorted by ascending leading monomial.
pub fn buchberger<F: Scalar>(gens: &[MPoly<F>], ord: MonomialOrder) -> Result<Vec<MPoly<F>>> {
    let mut basis = Basis { polys: Vec::new() };
    for g in gens {
        let p = to_bp(g)?;
        if !p.is_empty() {
            basis.push(p, ord);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.polys.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let lcm = |a: &Exp2, b: &Exp2| [a[0].max(b[0]), a[1].max(b[1])];
    let mut done: std::collections::BTreeSet<(usize, usize)> = Default::default();
    // normal strategy: smallest lcm first
    while let Some(pos) = (0..pairs.len()).min_by(|&p, &q| {
        let (a, b) = pairs[p];
        let (c, d) = pairs[q];
        ord.cmp(&lcm(&basis.polys[a].1, &basis.polys[b].1), &lcm(&basis.polys[c].1, &basis.polys[d].1))
    }) {
        let (i, j) = pairs.swap_remove(pos);
        done.insert((i, j));
        let (a, b) = (&basis.polys[i], &basis.polys[j]);
        if a.1[0].min(b.1[0]) == 0 && a.1[1].min(b.1[1]) == 0 {
            continue;
        }
        let l = lcm(&a.1, &b.1);
        let key = |u: usize, v: usize| (u.min(v), u.max(v));
        let chain = (0..basis.polys.len()).any(|k| {
            k != i && k != j && divides(&basis.polys[k].1, &l) && done.contains(&key(i, k)) && done.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let r = basis.reduce(&spoly(a, b), ord);
        if !r.is_empty() {
            let k = basis.polys.len();
            basis.push(r, ord);
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimal basis
    let leads: Vec<Exp2> = basis.polys.iter().map(|p| p.1).collect();
    let mut keep = Vec::new();
    for (i, e) in leads.iter().enumerate() {
        let redundant = leads
            .iter()
            .enumerate()
            .any(|(j, f)| j != i && divides(f, e) && (f != e || j < i));
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<_> = keep.into_iter().map(|i| basis.polys[i].clone()).collect();
    let mut out = Vec::new();
    for (i, p) in minimal.iter().enumerate() {
        let others = Basis {
            polys: minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect(),
        };
        let tail: Bp<F> = p.0.iter().filter(|(e, _)| **e != p.1).map(|(e, c)| (*e, c.clone())).collect();
        let mut r = others.reduce(&tail, ord);
        r.insert(p.1, p.2.clone());
        let inv = p.2.inv().expect("nonzero lead");
        for c in r.values_mut() {
            *c = c.clone() * inv.clone();
        }
        out.push((p.1, r));
    }
    out.sort_by(|a, b| ord.cmp(&a.0, &b.0));
    Ok(out.into_iter().map(|(_, p)| from_bp(&p)).collect())
}

/// Leading monomial under `ord`.
pub fn leading_exp<F: Scalar>(p: &MPoly<F>, ord: MonomialOrder) -> Option<Exp2> {
    to_bp(p).ok().and_then(|b| lead(&b, ord)).map(|(e, _)| e)
}

/// Standard monomials of the monomial ideal generated by `leads`, or
/// `InfiniteColength`.
pub fn staircase_of(leads: &[Exp2]) -> Result<Vec<Exp2>> {
    if leads.contains(&[0, 0]) {
        return Ok(Vec::new());
    }
    let xp = leads.iter().filter(|e| e[1] == 0).map(|e| e[0]).min();
    let yp = leads.iter().filter(|e| e[0] == 0).map(|e| e[1]).min();
    let (Some(xp), Some(yp)) = (xp, yp) else {
        return Err(Error::InfiniteColength);
    };
    let mut cells = Vec::new();
    for b in 0..yp {
        for a in 0..xp {
            let e = [a, b];
            if !leads.iter().any(|l| divides(l, &e)) {
                cells.push(e);
            }
        }
    }
    Ok(cells)
}

/// An ideal of `k[x, y]` given by generators, with a lazily computed
/// reduced graded-lex Gröbner basis.
#[derive(Clone)]
pub struct BiIdeal<F> {
    gens: Vec<MPoly<F>>,
    basis: OnceLock<Vec<MPoly<F>>>,
}

impl<F: Scalar> BiIdeal<F> {
    /// Zero generators are dropped; variables other than `x`, `y` are
    /// rejected.
    pub fn new(gens: Vec<MPoly<F>>) -> Result<Self> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.is_zero() {
                out.push(g.with_var_names(&VARS)?);
            }
        }
        Ok(BiIdeal {
            gens: out,
            basis: OnceLock::new(),
        })
    }

    pub fn generators(&self) -> &[MPoly<F>] {
        &self.gens
    }

    /// Reduced graded-lex Gröbner basis (cached).
    pub fn basis(&self) -> &[MPoly<F>] {
        self.basis.get_or_init(|| {
            buchberger(&self.gens, MonomialOrder::GrLex).expect("generators live in k[x,y]")
        })
    }

    pub fn groebner(&self, ord: MonomialOrder) -> Vec<MPoly<F>> {
        if ord == MonomialOrder::GrLex {
            return self.basis().to_vec();
        }
        buchberger(&self.gens, ord).expect("generators live in k[x,y]")
    }

    pub fn reduce(&self, p: &MPoly<F>) -> Result<MPoly<F>> {
        let ord = MonomialOrder::GrLex;
        let mut b = Basis { polys: Vec::new() };
        for g in self.basis() {
            b.push(to_bp(g)?, ord);
        }
        Ok(from_bp(&b.reduce(&to_bp(p)?, ord)))
    }

    pub fn contains(&self, p: &MPoly<F>) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    pub fn leading_exps(&self) -> Vec<Exp2> {
        self.basis()
            .iter()
            .filter_map(|g| leading_exp(g, MonomialOrder::GrLex))
            .collect()
    }

    pub fn staircase(&self) -> Result<Vec<Exp2>> {
        staircase_of(&self.leading_exps())
    }

    /// Dimension of `k[x,y]/I`; `InfiniteColength` if not zero-dimensional.
    pub fn colength(&self) -> Result<usize> {
        Ok(self.staircase()?.len())
    }

    pub fn colength_in(&self, ord: MonomialOrder) -> Result<usize> {
        let leads: Vec<Exp2> = self
            .groebner(ord)
            .iter()
            .filter_map(|g| leading_exp(g, ord))
            .collect();
        Ok(staircase_of(&leads)?.len())
    }

    pub fn plus(&self, extra: &[MPoly<F>]) -> Result<Self> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        BiIdeal::new(gens)
    }

    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.num_terms() == 1)
    }

    /// Every generator has a single y-degree.
    pub fn is_y_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| y_degree(g).is_some())
    }

    /// Same ideal (compares reduced bases).
    pub fn same_ideal(&self, other: &Self) -> bool {
        self.basis() == other.basis()
    }

    /// Finite colength and `x^N, y^N` in the ideal for `N` the colength.
    pub fn supported_at_origin(&self) -> Result<bool> {
        let n = self.colength()? as u32;
        Ok(self.contains(&MPoly::var_pow("x", n))? && self.contains(&MPoly::var_pow("y", n))?)
    }
}

impl<F: Scalar> PartialEq for BiIdeal<F> {
    fn eq(&self, other: &Self) -> bool {
        self.same_ideal(other)
    }
}

impl<F: Scalar> fmt::Display for BiIdeal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl<F: Scalar> fmt::Debug for BiIdeal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiIdeal{self}")
    }
}

fn y_degree<F: Scalar>(g: &MPoly<F>) -> Option<u32> {
    let iy = g.var_index("y");
    let mut degs = g.terms().keys().map(|e| iy.map_or(0, |i| e[i]));
    let d = degs.next()?;
    degs.all(|e| e == d).then_some(d)
}

/// Colength of `I`, `InfiniteColength` when not zero-dimensional.
pub fn bi_colength<F: Scalar>(ideal: &BiIdeal<F>) -> Result<usize> {
    ideal.colength()
}

/// Flat limit of `I` under `y -> λy`, `λ -> 0`: the ideal of lowest
/// y-degree parts. Computed in `k[x,y]/m^N` with `N` the colength, which
/// contains all the information once `m^N ⊆ I`.
pub fn gm_limit<F: Scalar>(ideal: &BiIdeal<F>) -> Result<BiIdeal<F>> {
    let n = ideal.colength()? as u32;
    if !ideal.supported_at_origin()? {
        return Err(Error::NotSupportedAtOrigin);
    }
    if n == 0 {
        return BiIdeal::new(vec![MPoly::from_i64(1)]);
    }
    let mut cols: Vec<Exp2> = (0..n)
        .flat_map(|d| (0..=d).map(move |b| [d - b, b]))
        .collect();
    cols.sort_by_key(|e| (e[1], e[0]));
    let index: BTreeMap<Exp2, usize> = cols.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut rows = Vec::new();
    for g in ideal.basis() {
        let g = to_bp(g)?;
        for m in &cols {
            let mut row = vec![F::zero(); cols.len()];
            for (e, c) in &g {
                let k = [e[0] + m[0], e[1] + m[1]];
                if let Some(&j) = index.get(&k) {
                    row[j] = row[j].clone() + c.clone();
                }
            }
            rows.push(row);
        }
    }
    let width = cols.len();
    let (r, pivots) = Matrix::from_rows(rows, width).rref();
    let mut gens = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        let d = cols[p][1];
        let form: Bp<F> = (0..width)
            .filter(|&j| cols[j][1] == d && !r.get(i, j).is_zero())
            .map(|j| (cols[j], r.get(i, j).clone()))
            .collect();
        gens.push(from_bp(&form));
    }
    for b in 0..=n {
        gens.push(MPoly::monomial(&VARS, &[n - b, b]));
    }
    let lim = BiIdeal::new(gens)?;
    BiIdeal::new(lim.basis().to_vec())
}

/// Replace each generator `a(x) y^s` by `x^{ord_0 a} y^s`.
pub fn monomialize<F: Scalar>(ideal: &BiIdeal<F>) -> Result<BiIdeal<F>> {
    let mut gens = Vec::new();
    for g in ideal.generators() {
        let s = y_degree(g).ok_or_else(|| Error::NotHomogeneous(g.to_string()))?;
        let b = to_bp(g)?;
        let r = b.keys().map(|e| e[0]).min().expect("nonzero generator");
        gens.push(MPoly::monomial(&VARS, &[r, s]));
    }
    BiIdeal::new(gens)
}

/// Generator of `(I + (y)) / (y)` in `k[x]`.
pub fn restriction_generator<F: Scalar>(ideal: &BiIdeal<F>) -> Result<UPoly<F>> {
    let restr: Vec<UPoly<F>> = ideal
        .generators()
        .iter()
        .map(|g| {
            let b = to_bp(g)?;
            let mut cs = Vec::new();
            for (e, c) in b.iter().filter(|(e, _)| e[1] == 0) {
                let i = e[0] as usize;
                if cs.len() <= i {
                    cs.resize(i + 1, F::zero());
                }
                cs[i] = c.clone();
            }
            Ok(UPoly::new("x", cs))
        })
        .collect::<Result<_>>()?;
    gcd_all(&restr)
}

/// Length of the intersection of `V(I)` with the x-axis `Y = V(y)`.
pub fn incidence_colength<F: Scalar>(ideal: &BiIdeal<F>, mode: IncidenceMode) -> Result<usize> {
    match restriction_generator(ideal) {
        Ok(g) => Ok(match mode {
            IncidenceMode::Local => g.order_at_zero().unwrap_or(0),
            IncidenceMode::Global => g.degree().unwrap_or(0),
        }),
        Err(Error::ZeroIdeal) => ideal.plus(&[MPoly::var("y")])?.colength(),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lines;
    use crate::Q;

    fn ideal(text: &str) -> BiIdeal<Q> {
        BiIdeal::new(parse_lines(text, &VARS).unwrap()).unwrap()
    }

    #[test]
    fn buchberger_examples() {
        assert_eq!(ideal("x\ny").basis(), ideal("x\ny").generators());
        let i = ideal("y - x^2\nx^3");
        let lex = i.groebner(MonomialOrder::Lex);
        let leads: Vec<_> = lex.iter().map(|g| leading_exp(g, MonomialOrder::Lex).unwrap()).collect();
        assert_eq!(leads, vec![[3, 0], [0, 1]]);
        let m = ideal("x^2\nx*y\ny^2");
        assert!(m.same_ideal(&BiIdeal::new(m.basis().to_vec()).unwrap()));
        assert_eq!(m.basis().len(), 3);
    }

    #[test]
    fn colength_examples() {
        assert_eq!(ideal("x\ny").colength().unwrap(), 1);
        assert_eq!(ideal("y - x^2\nx^3").colength().unwrap(), 3);
        assert_eq!(ideal("y - x^2\nx^3").colength_in(MonomialOrder::Lex).unwrap(), 3);
        assert!(matches!(ideal("x").colength(), Err(Error::InfiniteColength)));
    }

    #[test]
    fn gm_limit_examples() {
        let l = gm_limit(&ideal("y - x^2\nx^3")).unwrap();
        assert!(l.same_ideal(&ideal("x^2\nx*y\ny^2")));
        let l = gm_limit(&ideal("y - x\nx^2")).unwrap();
        assert!(l.same_ideal(&ideal("x\ny^2")));
        let m = ideal("x^2*y\ny^3\nx^4");
        assert!(gm_limit(&m).unwrap().same_ideal(&m));
        assert!(matches!(gm_limit(&ideal("x - 1\ny")), Err(Error::NotSupportedAtOrigin)));
    }

    #[test]
    fn monomialize_examples() {
        let m = monomialize(&ideal("x^2*y + x^3*y\ny^2\nx^4")).unwrap();
        assert!(m.same_ideal(&ideal("x^2*y\ny^2\nx^4")));
        let m = monomialize(&ideal("y + x*y\nx^2")).unwrap();
        assert!(m.same_ideal(&ideal("y\nx^2")));
        assert!(monomialize(&ideal("y - x")).is_err());
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(incidence_colength(&ideal("x\ny"), IncidenceMode::Local).unwrap(), 1);
        assert_eq!(incidence_colength(&ideal("y - x^2\nx^3"), IncidenceMode::Local).unwrap(), 2);
        assert_eq!(incidence_colength(&ideal("x^2\ny + 1"), IncidenceMode::Local).unwrap(), 0);
        assert_eq!(incidence_colength(&ideal("x^2 - x\ny"), IncidenceMode::Local).unwrap(), 1);
        assert_eq!(incidence_colength(&ideal("x^2 - x\ny"), IncidenceMode::Global).unwrap(), 2);
    }
}
