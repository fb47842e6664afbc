//! Charts of the stratified blowup of the space of polynomial tuples.
//!
//! Every chart keeps `2m` coordinates. A step at index `i` blows up the
//! current center (all current remainder coordinates) on the chart where the
//! leading remainder coefficient `e` at `i` is the exceptional coordinate:
//! every other remainder coordinate `s` becomes `e * s'`. The previous monic
//! divisor `P` at `i` is then re-coordinatized by Euclidean division by the
//! new monic remainder `g`, `P = (x + c) g + F`, so the next center is again
//! a coordinate subspace `{all remainder coordinates = 0}`.
//!
//! The map back to the original `a_{i,j}, b_{i,j}` is polynomial and is kept
//! as the `blowdown` table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::mpoly::MPoly;
use crate::ratfunc::RationalFunc;
use crate::sample::{self, SampleRng, COEFF_BOUND};
use crate::uni::{a_name, assemble, b_name, colength, Shape, StratPoint, X};
use crate::upoly::UPoly;
use serde::{Deserialize, Serialize};

/// Which remainder sequence defines the next proper transform.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recursion {
    /// `f^{l+1}_k = Rem(h_k, f^l_k)`
    #[default]
    Paper,
    /// `f^{l+1}_k = Rem(f^{l-1}_k, f^l_k)`, with `f^{-1}_k = h_k`
    Euclid,
}

impl FromStr for Recursion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Recursion::Paper),
            "euclid" => Ok(Recursion::Euclid),
            _ => Err(Error::Invalid(format!("unknown recursion `{s}` (paper|euclid)"))),
        }
    }
}

impl fmt::Display for Recursion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recursion::Paper => "paper",
            Recursion::Euclid => "euclid",
        })
    }
}

/// One blowup step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartLevel {
    /// 1-based level.
    pub level: usize,
    /// 0-based index of the tuple entry.
    pub index: usize,
    pub exceptional: String,
    pub ratios: Vec<String>,
    /// The constant `c` in the quotient `x + c`.
    pub shift: String,
    /// Coefficients of the new remainder `F`.
    pub remainder: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct IndexState {
    degree: usize,
    steps: usize,
    /// `degree` coordinates; the last is the leading coefficient.
    remainder: Vec<String>,
    /// Non-leading coefficients of the monic divisor of degree `degree`.
    monic: Vec<String>,
}

#[derive(Clone)]
pub struct ChartTower<F> {
    shape: Shape,
    recursion: Recursion,
    levels: Vec<ChartLevel>,
    state: Vec<IndexState>,
    coords: Vec<String>,
    blowdown: BTreeMap<String, MPoly<F>>,
}

/// Exact check of one division step.
#[derive(Clone)]
pub struct DivisionRecord<F> {
    pub level: usize,
    pub index: usize,
    pub dividend: UPoly<RationalFunc<F>>,
    pub divisor: UPoly<RationalFunc<F>>,
    pub quotient: UPoly<RationalFunc<F>>,
    pub remainder: UPoly<RationalFunc<F>>,
    /// `dividend = quotient * divisor + remainder`
    pub identity_holds: bool,
    /// `deg remainder + 1` equals the new degree at the index.
    pub degree_ok: bool,
}

/// Outcome of a sampled certificate.
#[derive(Clone, Debug, Default)]
pub struct ChartCheck {
    pub evaluated: usize,
    /// `(rank, expected)` per point.
    pub ranks: Vec<(usize, usize)>,
    pub failures: Vec<Value>,
    pub note: Option<String>,
}

impl ChartCheck {
    pub fn passed(&self) -> bool {
        self.evaluated > 0 && self.failures.is_empty()
    }
}

fn poly_from_coeffs<F: Scalar>(cs: Vec<MPoly<F>>) -> UPoly<MPoly<F>> {
    UPoly::new(X, cs)
}

fn var_poly<F: Scalar>(names: &[String], monic: bool) -> UPoly<MPoly<F>> {
    let mut cs: Vec<MPoly<F>> = names.iter().map(|n| MPoly::var(n)).collect();
    if monic {
        cs.push(MPoly::one());
    }
    poly_from_coeffs(cs)
}

fn to_rf<F: Scalar>(p: &UPoly<MPoly<F>>) -> UPoly<RationalFunc<F>> {
    p.map(|c| RationalFunc::poly(c.clone()))
}

impl<F: Scalar> ChartTower<F> {
    /// Level 0: coordinates `a_{i,j}`, `b_{i,j}`, remainders `f_i`.
    pub fn new(shape: &Shape, recursion: Recursion) -> Self {
        let state = shape
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &m)| IndexState {
                degree: m,
                steps: 0,
                remainder: (0..m).map(|j| a_name(i, j)).collect(),
                monic: (0..m).map(|j| b_name(i, j)).collect(),
            })
            .collect();
        let coords = shape.coordinates();
        let blowdown = coords.iter().map(|c| (c.clone(), MPoly::var(c))).collect();
        ChartTower {
            shape: shape.clone(),
            recursion,
            levels: Vec::new(),
            state,
            coords,
            blowdown,
        }
    }

    /// Tower reached by the 0-based step indices `steps`.
    pub fn with_steps(shape: &Shape, recursion: Recursion, steps: &[usize]) -> Result<Self> {
        let mut t = ChartTower::new(shape, recursion);
        for &i in steps {
            t = t.blowup_step(i)?;
        }
        Ok(t)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn recursion(&self) -> Recursion {
        self.recursion
    }

    pub fn levels(&self) -> &[ChartLevel] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coords
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.state.iter().map(|s| s.degree).collect()
    }

    pub fn degree_sum(&self) -> usize {
        self.state.iter().map(|s| s.degree).sum()
    }

    /// 0-based step indices taken so far.
    pub fn steps(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.index).collect()
    }

    pub fn exceptional_coords(&self) -> Vec<String> {
        self.levels.iter().map(|l| l.exceptional.clone()).collect()
    }

    /// Original coordinate -> polynomial in chart coordinates.
    pub fn blowdown(&self) -> &BTreeMap<String, MPoly<F>> {
        &self.blowdown
    }

    /// Current remainder coordinates at index `k`, low degree first.
    pub fn remainder_coords(&self, k: usize) -> &[String] {
        &self.state[k].remainder
    }

    /// `h_k` in chart coordinates.
    pub fn h_chart(&self, k: usize) -> UPoly<MPoly<F>> {
        let m = self.shape.parts()[k];
        let mut cs: Vec<MPoly<F>> = (0..m).map(|j| self.blowdown[&b_name(k, j)].clone()).collect();
        cs.push(MPoly::one());
        poly_from_coeffs(cs)
    }

    /// `f_k` in chart coordinates.
    pub fn f_chart(&self, k: usize) -> UPoly<MPoly<F>> {
        let m = self.shape.parts()[k];
        poly_from_coeffs((0..m).map(|j| self.blowdown[&a_name(k, j)].clone()).collect())
    }

    /// Blow up on the chart where the leading remainder coefficient at
    /// index `i` (0-based) is invertible.
    pub fn blowup_step(&self, i: usize) -> Result<Self> {
        let n = self.shape.n();
        if i >= n {
            return Err(Error::OutOfRange(format!("index {} not in 1..={n}", i + 1)));
        }
        let d = self.state[i].degree;
        if d == 0 {
            return Err(Error::NoFurtherBlowup { index: i + 1 });
        }
        let level = self.levels.len() + 1;
        let e = self.state[i].remainder[d - 1].clone();
        let ev = MPoly::<F>::var(&e);
        let mut sigma: BTreeMap<String, MPoly<F>> = BTreeMap::new();
        let mut rename: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut state = self.state.clone();
        let mut ratios = Vec::new();
        for (k, st) in self.state.iter().enumerate() {
            let mut new_rem = Vec::new();
            for (j, name) in st.remainder.iter().enumerate() {
                if *name == e {
                    continue;
                }
                let u = format!("u{level}_{}_{j}", k + 1);
                sigma.insert(name.clone(), &ev * &MPoly::var(&u));
                rename.insert(name.clone(), vec![u.clone()]);
                ratios.push(u.clone());
                new_rem.push(u);
            }
            if k != i {
                state[k].remainder = new_rem;
            }
        }
        // P = (x + c) g + F with g = x^{d-1} + sum u_j x^j
        let g_names: Vec<String> = (0..d - 1).map(|j| format!("u{level}_{}_{j}", i + 1)).collect();
        let c = format!("c{level}_{}", i + 1);
        let f_names: Vec<String> = (0..d - 1).map(|j| format!("f{level}_{}_{j}", i + 1)).collect();
        let g = var_poly::<F>(&g_names, true);
        let lin = poly_from_coeffs(vec![MPoly::var(&c), MPoly::one()]);
        let p = lin * g + var_poly::<F>(&f_names, false);
        let old_monic = &self.state[i].monic;
        for (j, name) in old_monic.iter().enumerate() {
            sigma.insert(name.clone(), p.coeff(j));
        }
        let mut replacement = vec![c.clone()];
        replacement.extend(f_names.iter().cloned());
        let coords: Vec<String> = self
            .coords
            .iter()
            .flat_map(|v| {
                if let Some(pos) = old_monic.iter().position(|m| m == v) {
                    vec![replacement[pos].clone()]
                } else {
                    rename.get(v).cloned().unwrap_or_else(|| vec![v.clone()])
                }
            })
            .collect();
        state[i] = IndexState {
            degree: d - 1,
            steps: self.state[i].steps + 1,
            remainder: f_names.clone(),
            monic: g_names,
        };
        let blowdown = self
            .blowdown
            .iter()
            .map(|(k, v)| (k.clone(), v.subst(&sigma)))
            .collect();
        let mut levels = self.levels.clone();
        levels.push(ChartLevel {
            level,
            index: i,
            exceptional: e,
            ratios,
            shift: c,
            remainder: f_names,
        });
        Ok(ChartTower {
            shape: self.shape.clone(),
            recursion: self.recursion,
            levels,
            state,
            coords,
            blowdown,
        })
    }

    /// The remainder sequence at every stepped index, recomputed over the
    /// function field of the chart, with the division identity checked.
    pub fn division_records(&self) -> Result<Vec<DivisionRecord<F>>> {
        let n = self.shape.n();
        // per index: (previous, current) remainder
        let mut chain: Vec<(UPoly<RationalFunc<F>>, UPoly<RationalFunc<F>>)> = (0..n)
            .map(|k| (to_rf(&self.h_chart(k)), to_rf(&self.f_chart(k))))
            .collect();
        let mut degrees: Vec<usize> = self.shape.parts().to_vec();
        let mut out = Vec::new();
        for lv in &self.levels {
            let k = lv.index;
            let h = to_rf(&self.h_chart(k));
            let dividend = match self.recursion {
                Recursion::Paper => h,
                Recursion::Euclid => chain[k].0.clone(),
            };
            let divisor = chain[k].1.clone();
            let (q, r) = dividend.divrem(&divisor)?;
            degrees[k] -= 1;
            let identity_holds = q.clone() * divisor.clone() + r.clone() == dividend;
            let degree_ok = r.degree().map_or(0, |d| d + 1) == degrees[k];
            out.push(DivisionRecord {
                level: lv.level,
                index: k,
                dividend,
                divisor: divisor.clone(),
                quotient: q,
                remainder: r.clone(),
                identity_holds,
                degree_ok,
            });
            chain[k] = (divisor, r);
        }
        Ok(out)
    }

    /// Equations of the proper transform of the stratum `j = m - depth`,
    /// grouped by index.
    fn pt_groups(&self) -> Result<Vec<Vec<MPoly<F>>>> {
        let mut out = Vec::new();
        for (k, st) in self.state.iter().enumerate() {
            let coords: Vec<MPoly<F>> = st.remainder.iter().map(|v| MPoly::var(v)).collect();
            if self.recursion == Recursion::Euclid || st.steps < 2 {
                out.push(coords);
                continue;
            }
            let g = var_poly::<F>(&st.monic, true);
            let r = self.h_chart(k).divrem_monic(&g)?.1;
            out.push((0..st.degree).map(|j| r.coeff(j)).collect());
        }
        Ok(out)
    }

    fn pt_polys(&self, j: usize) -> Result<Vec<MPoly<F>>> {
        let m = self.shape.total();
        if j + self.depth() != m {
            return Err(Error::Invalid(format!(
                "stratum {j} is not the next one after {} steps (expected {})",
                self.depth(),
                m - self.depth()
            )));
        }
        Ok(self.pt_groups()?.into_iter().flatten().collect())
    }

    pub fn proper_transform_equations(&self, j: usize) -> Result<Vec<RationalFunc<F>>> {
        Ok(self.pt_polys(j)?.into_iter().map(RationalFunc::poly).collect())
    }

    /// Stratum index whose proper transform this chart cuts out next.
    pub fn next_stratum(&self) -> usize {
        self.shape.total() - self.depth()
    }

    /// Image of a chart point in the original space.
    pub fn downstairs(&self, point: &BTreeMap<String, F>) -> Result<StratPoint<F>> {
        let mut values = BTreeMap::new();
        for (k, p) in &self.blowdown {
            values.insert(k.clone(), p.eval(point)?);
        }
        StratPoint::from_assignment(&self.shape, &values)
    }

    /// Chart coordinates of a point, replaying the steps; fails when an
    /// exceptional coordinate vanishes (the point is not in this chart).
    pub fn lift(&self, pt: &StratPoint<F>) -> Result<BTreeMap<String, F>> {
        let mut values = pt.to_assignment();
        let mut replay = ChartTower::<F>::new(&self.shape, self.recursion);
        for lv in &self.levels {
            let i = lv.index;
            let st = replay.state[i].clone();
            let d = st.degree;
            let ev = values[&lv.exceptional].clone();
            let inv = ev.inv().ok_or_else(|| Error::DenominatorVanishes(lv.exceptional.clone()))?;
            let next = replay.blowup_step(i)?;
            for (k, old) in replay.state.iter().enumerate() {
                for (j, name) in old.remainder.iter().enumerate() {
                    if *name == lv.exceptional {
                        continue;
                    }
                    let v = values.remove(name).expect("value present") * inv.clone();
                    values.insert(format!("u{}_{}_{j}", lv.level, k + 1), v);
                }
            }
            let mut gc: Vec<F> = (0..d - 1)
                .map(|j| values[&format!("u{}_{}_{j}", lv.level, i + 1)].clone())
                .collect();
            gc.push(F::one());
            let g = UPoly::new(X, gc);
            let mut pc: Vec<F> = st.monic.iter().map(|m| values.remove(m).expect("value present")).collect();
            pc.push(F::one());
            let (q, r) = UPoly::new(X, pc).divrem(&g)?;
            values.insert(lv.shift.clone(), q.coeff(0));
            for (j, f) in lv.remainder.iter().enumerate() {
                values.insert(f.clone(), r.coeff(j));
            }
            replay = next;
        }
        Ok(values)
    }

    fn random_values(&self, rng: &mut SampleRng) -> BTreeMap<String, F> {
        self.coords
            .iter()
            .map(|c| (c.clone(), sample::scalar(rng, COEFF_BOUND)))
            .collect()
    }

    /// A chart point with the chosen exceptional coordinates set to zero
    /// and, if `on_pt`, lying on the next proper transform (the equations are
    /// affine in the remainder coordinates of each index once the others are
    /// fixed, so this is an exact linear solve).
    pub fn sample_point(&self, rng: &mut SampleRng, zero_exc: &[bool], on_pt: bool) -> Result<BTreeMap<String, F>> {
        let mut values = self.random_values(rng);
        for (lv, &z) in self.levels.iter().zip(zero_exc) {
            if z {
                values.insert(lv.exceptional.clone(), F::zero());
            }
        }
        if !on_pt {
            return Ok(values);
        }
        for (k, eqs) in self.pt_groups()?.into_iter().enumerate() {
            let unknowns = &self.state[k].remainder;
            if unknowns.is_empty() {
                continue;
            }
            let fixed: BTreeMap<String, F> = values
                .iter()
                .filter(|(c, _)| !unknowns.contains(c))
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect();
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for e in &eqs {
                let s = e.specialize(&fixed);
                if s.total_degree() > 1 {
                    return Err(Error::Sampling(format!("equation `{s}` is not affine in the remainder coordinates")));
                }
                rows.push(
                    unknowns
                        .iter()
                        .map(|u| {
                            s.diff(u)
                                .map(|d| d.constant_term())
                                .unwrap_or_else(|_| F::zero())
                        })
                        .collect::<Vec<F>>(),
                );
                rhs.push(-s.constant_term());
            }
            let a = Matrix::from_rows(rows, unknowns.len());
            let (x0, kernel) = a
                .solve(&rhs)
                .ok_or_else(|| Error::Sampling("proper transform equations are inconsistent".into()))?;
            let mut x = x0;
            for v in &kernel {
                let t: F = sample::scalar(rng, COEFF_BOUND);
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi = xi.clone() + t.clone() * vi.clone();
                }
            }
            for (u, v) in unknowns.iter().zip(x) {
                values.insert(u.clone(), v);
            }
        }
        Ok(values)
    }

    fn jacobian_rank(&self, eqs: &[MPoly<F>], point: &BTreeMap<String, F>) -> Result<usize> {
        if eqs.is_empty() {
            return Ok(0);
        }
        let mut rows = Vec::new();
        for e in eqs {
            let mut row = Vec::with_capacity(self.coords.len());
            for c in &self.coords {
                let v = match e.diff(c) {
                    Ok(d) => d.eval(point)?,
                    Err(Error::UnknownVariable(_)) => F::zero(),
                    Err(err) => return Err(err),
                };
                row.push(v);
            }
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows, self.coords.len()).rank())
    }

    fn point_json(point: &BTreeMap<String, F>) -> Value {
        Value::Object(
            point
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
                .collect(),
        )
    }

    fn vanish(eqs: &[MPoly<F>], point: &BTreeMap<String, F>) -> Result<bool> {
        for e in eqs {
            if !e.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Jacobian rank of the proper transform equations at sampled points on
    /// the proper transform.
    pub fn check_smoothness(&self, j: usize, samples: usize, seed: u64) -> Result<ChartCheck> {
        let eqs = self.pt_polys(j)?;
        let mut rng = sample::rng(seed);
        let mut out = ChartCheck::default();
        let mut misses = 0;
        while out.evaluated < samples && misses < samples * 20 {
            let pt = match self.sample_point(&mut rng, &[], true) {
                Ok(p) => p,
                Err(Error::Sampling(_)) => {
                    misses += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !Self::vanish(&eqs, &pt)? {
                misses += 1;
                continue;
            }
            let rank = self.jacobian_rank(&eqs, &pt)?;
            out.evaluated += 1;
            out.ranks.push((rank, eqs.len()));
            if rank != eqs.len() {
                out.failures.push(json!({
                    "point": Self::point_json(&pt),
                    "rank": rank,
                    "expected": eqs.len(),
                }));
            }
        }
        if out.evaluated == 0 {
            out.note = Some("no points found".into());
        }
        Ok(out)
    }

    /// Independence of the differentials of the vanishing divisor branches
    /// (exceptional coordinates and the proper transform group) at sampled
    /// points where at least two branches meet, when the chart has two.
    pub fn check_normal_crossings(&self, j: usize, samples: usize, seed: u64) -> Result<ChartCheck> {
        let pt_eqs = self.pt_polys(j)?;
        let branches = self.depth() + usize::from(!pt_eqs.is_empty());
        let want = branches.min(2);
        let mut rng = sample::rng(seed);
        let mut out = ChartCheck::default();
        if branches == 0 {
            out.note = Some("no divisor branches in this chart".into());
            return Ok(out);
        }
        let mut tries = 0;
        while out.evaluated < samples && tries < samples * 50 {
            tries += 1;
            let zero: Vec<bool> = (0..self.depth()).map(|_| sample::coin(&mut rng, 0.5)).collect();
            let on_pt = !pt_eqs.is_empty() && sample::coin(&mut rng, 0.5);
            let pt = match self.sample_point(&mut rng, &zero, on_pt) {
                Ok(p) => p,
                Err(Error::Sampling(_)) => continue,
                Err(e) => return Err(e),
            };
            let mut eqs: Vec<MPoly<F>> = self
                .levels
                .iter()
                .filter(|lv| pt[&lv.exceptional].is_zero())
                .map(|lv| MPoly::var(&lv.exceptional))
                .collect();
            let mut count = eqs.len();
            if !pt_eqs.is_empty() && Self::vanish(&pt_eqs, &pt)? {
                eqs.extend(pt_eqs.iter().cloned());
                count += 1;
            }
            if count < want {
                continue;
            }
            let rank = self.jacobian_rank(&eqs, &pt)?;
            out.evaluated += 1;
            out.ranks.push((rank, eqs.len()));
            if rank != eqs.len() {
                out.failures.push(json!({
                    "point": Self::point_json(&pt),
                    "branches": count,
                    "rank": rank,
                    "expected": eqs.len(),
                }));
            }
        }
        if out.evaluated == 0 {
            out.note = Some("no points found".into());
        }
        Ok(out)
    }

    /// Each exceptional equation is a chart coordinate, and the proper
    /// transform equations have independent coordinate differentials at the
    /// chart origin.
    pub fn symbolic_normal_form(&self, j: usize) -> Result<std::result::Result<(), String>> {
        for lv in &self.levels {
            if !self.coords.contains(&lv.exceptional) {
                return Ok(Err(format!("exceptional `{}` is not a coordinate", lv.exceptional)));
            }
        }
        let eqs = self.pt_polys(j)?;
        let origin: BTreeMap<String, F> = self.coords.iter().map(|c| (c.clone(), F::zero())).collect();
        let mut used = Vec::new();
        for e in &eqs {
            let mut hit = None;
            for c in &self.coords {
                let v = match e.diff(c) {
                    Ok(d) => d.eval(&origin)?,
                    Err(_) => F::zero(),
                };
                if !v.is_zero() {
                    if hit.is_some() {
                        return Ok(Err(format!("differential of `{e}` at the origin is not a single coordinate")));
                    }
                    hit = Some(c.clone());
                }
            }
            match hit {
                None => return Ok(Err(format!("`{e}` is singular at the chart origin"))),
                Some(c) if used.contains(&c) || self.exceptional_coords().contains(&c) => {
                    return Ok(Err(format!("differential of `{e}` repeats coordinate `{c}`")));
                }
                Some(c) => used.push(c),
            }
        }
        Ok(Ok(()))
    }

    /// Predicted and actual number of strata `j` in `[m - depth, m]` that
    /// contain the image of `point`.
    pub fn compatibility_counts(&self, point: &BTreeMap<String, F>) -> Result<(usize, usize)> {
        let m = self.shape.total();
        let l = self.depth();
        let down = self.downstairs(point)?;
        let col = colength(&assemble(&down));
        let actual = ((m - l)..=m).filter(|&j| col >= j).count();
        let mut predicted = 0;
        let mut any_zero = false;
        for lv in &self.levels {
            any_zero |= point[&lv.exceptional].is_zero();
            if any_zero {
                predicted += 1;
            }
        }
        if any_zero || Self::vanish(&self.pt_polys(m - l)?, point)? {
            predicted += 1;
        }
        Ok((predicted, actual))
    }

    /// Blowdown compatibility on sampled points: generic points, points on
    /// exceptional divisors and points on the next proper transform.
    pub fn check_compatibility(&self, samples: usize, seed: u64) -> Result<ChartCheck> {
        let mut rng = sample::rng(seed);
        let mut out = ChartCheck::default();
        for _ in 0..samples {
            let zero: Vec<bool> = (0..self.depth()).map(|_| sample::coin(&mut rng, 0.3)).collect();
            let on_pt = sample::coin(&mut rng, 0.5);
            let pt = match self.sample_point(&mut rng, &zero, on_pt) {
                Ok(p) => p,
                Err(Error::Sampling(_)) => continue,
                Err(e) => return Err(e),
            };
            let (predicted, actual) = self.compatibility_counts(&pt)?;
            out.evaluated += 1;
            out.ranks.push((actual, predicted));
            if predicted != actual {
                let down = self.downstairs(&pt)?;
                out.failures.push(json!({
                    "point": Self::point_json(&pt),
                    "downstairs": down.to_json(),
                    "predicted": predicted,
                    "actual": actual,
                }));
            }
        }
        if out.evaluated == 0 {
            out.note = Some("no points found".into());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "shape": self.shape.parts(),
            "recursion": self.recursion.to_string(),
            "steps": self.levels.iter().map(|l| l.index + 1).collect::<Vec<_>>(),
            "coordinates": self.coords,
            "degrees": self.degrees(),
            "exceptional": self.exceptional_coords(),
            "blowdown": self.blowdown.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// All step sequences (0-based indices) of length at most `max_depth`.
pub fn step_sequences(shape: &Shape, max_depth: usize) -> Vec<Vec<usize>> {
    fn rec(deg: &mut Vec<usize>, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in 0..deg.len() {
            if deg[i] == 0 {
                continue;
            }
            deg[i] -= 1;
            cur.push(i);
            rec(deg, cur, max, out);
            cur.pop();
            deg[i] += 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut shape.parts().to_vec(), &mut Vec::new(), max_depth, &mut out);
    out
}

/// Every chart tower of `shape` up to `max_depth` steps.
pub fn enumerate_towers<F: Scalar>(shape: &Shape, recursion: Recursion, max_depth: usize) -> Result<Vec<ChartTower<F>>> {
    step_sequences(shape, max_depth)
        .iter()
        .map(|s| ChartTower::with_steps(shape, recursion, s))
        .collect()
}

/// Shapes with total degree between 1 and `max_m`, parts non-increasing.
pub fn shapes_up_to(max_m: usize) -> Vec<Shape> {
    fn rec(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(cap)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for m in 1..=max_m {
        let mut parts = Vec::new();
        rec(m, m, &mut Vec::new(), &mut parts);
        out.extend(parts.into_iter().map(|p| Shape::new(p).expect("positive parts")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use num_traits::Zero;
    use crate::Q;

    fn shape(p: &[usize]) -> Shape {
        Shape::new(p.to_vec()).unwrap()
    }

    fn rf(name: &str) -> RationalFunc<Q> {
        RationalFunc::var(name)
    }

    #[test]
    fn init_coordinates() {
        assert_eq!(ChartTower::<Q>::new(&shape(&[2]), Recursion::Paper).coordinates().len(), 4);
        assert_eq!(ChartTower::<Q>::new(&shape(&[1, 1]), Recursion::Paper).coordinates().len(), 4);
        assert_eq!(ChartTower::<Q>::new(&shape(&[2, 1]), Recursion::Paper).coordinates().len(), 6);
    }

    #[test]
    fn first_step_shape_2() {
        let t = ChartTower::<Q>::with_steps(&shape(&[2]), Recursion::Paper, &[0]).unwrap();
        assert_eq!(t.levels()[0].exceptional, "a1_1");
        assert_eq!(t.coordinates().len(), 4);
        let rec = &t.division_records().unwrap()[0];
        assert!(rec.identity_holds && rec.degree_ok);
        assert_eq!(rec.remainder.degree(), Some(0));
        // q = (1/a11)(x + b11 - a10/a11), in chart coordinates
        let bd = t.blowdown();
        let a11 = RationalFunc::poly(bd["a1_1"].clone());
        let a10 = RationalFunc::poly(bd["a1_0"].clone());
        let b11 = RationalFunc::poly(bd["b1_1"].clone());
        let inv = RationalFunc::constant(Q::from_i64(1)).checked_div(&a11).unwrap();
        let want = UPoly::new(X, vec![inv.clone() * (b11 - a10.checked_div(&a11).unwrap()), inv]);
        assert_eq!(rec.quotient, want);
        let eqs = t.proper_transform_equations(1).unwrap();
        assert_eq!(eqs, vec![rf("f1_1_0")]);
        assert!(t.proper_transform_equations(2).is_err());
    }

    #[test]
    fn shape_1_terminates() {
        let t = ChartTower::<Q>::with_steps(&shape(&[1]), Recursion::Paper, &[0]).unwrap();
        assert_eq!(t.levels()[0].exceptional, "a1_0");
        assert_eq!(t.degree_sum(), 0);
        assert!(matches!(t.blowup_step(0), Err(Error::NoFurtherBlowup { index: 1 })));
    }

    #[test]
    fn two_steps_shape_2() {
        let t = ChartTower::<Q>::with_steps(&shape(&[2]), Recursion::Paper, &[0, 0]).unwrap();
        assert_eq!(t.levels()[1].exceptional, "f1_1_0");
        assert_eq!(t.degree_sum(), 0);
        assert!(t.division_records().unwrap().iter().all(|r| r.identity_holds && r.degree_ok));
    }

    #[test]
    fn level_zero_and_mixed_equations() {
        let t = ChartTower::<Q>::new(&shape(&[2, 1]), Recursion::Paper);
        let eqs = t.proper_transform_equations(3).unwrap();
        assert_eq!(eqs, vec![rf("a1_0"), rf("a1_1"), rf("a2_0")]);
        let t = ChartTower::<Q>::with_steps(&shape(&[1, 1]), Recursion::Paper, &[0]).unwrap();
        assert_eq!(t.proper_transform_equations(1).unwrap(), vec![rf("u1_2_0")]);
        assert_eq!(t.blowdown()["a2_0"], MPoly::var("a1_0") * MPoly::var("u1_2_0"));
    }

    #[test]
    fn downstairs_examples() {
        let t = ChartTower::<Q>::with_steps(&shape(&[2]), Recursion::Paper, &[0]).unwrap();
        let mut rng = sample::rng(3);
        let pt = t.sample_point(&mut rng, &[true], false).unwrap();
        let down = t.downstairs(&pt).unwrap();
        assert!(down.a().iter().flatten().all(|v| v.is_zero()));
        assert_eq!(colength(&assemble(&down)), 2);

        let orig = StratPoint::new(
            shape(&[2]),
            vec![vec![Q::from_i64(2), Q::from_i64(-1)]],
            vec![vec![Q::from_i64(3), Q::from_i64(4)]],
        )
        .unwrap();
        let lifted = t.lift(&orig).unwrap();
        assert_eq!(t.downstairs(&lifted).unwrap(), orig);
    }

    #[test]
    fn smoothness_small() {
        let t = ChartTower::<Q>::with_steps(&shape(&[2]), Recursion::Paper, &[0]).unwrap();
        let c = t.check_smoothness(1, 25, 7).unwrap();
        assert!(c.passed());
        assert_eq!(c.evaluated, 25);
        let t = ChartTower::<Q>::with_steps(&shape(&[2, 2]), Recursion::Euclid, &[0, 0]).unwrap();
        assert!(t.check_smoothness(2, 10, 7).unwrap().passed());
        assert!(t.check_normal_crossings(2, 10, 7).unwrap().passed());
    }

    #[test]
    fn level_zero_rank_is_m() {
        let t = ChartTower::<Q>::new(&shape(&[2, 1]), Recursion::Paper);
        let c = t.check_smoothness(3, 5, 1).unwrap();
        assert!(c.passed());
        assert!(c.ranks.iter().all(|&(r, e)| r == 3 && e == 3));
    }

    #[test]
    fn normal_crossings_examples() {
        let t = ChartTower::<Q>::with_steps(&shape(&[2]), Recursion::Paper, &[0]).unwrap();
        let c = t.check_normal_crossings(1, 25, 3).unwrap();
        assert!(c.passed());
        assert!(c.ranks.iter().any(|&(r, _)| r == 2));
        let single = ChartTower::<Q>::new(&shape(&[2]), Recursion::Paper);
        let c = single.check_normal_crossings(2, 10, 3).unwrap();
        assert!(c.passed());
        assert!(c.failures.is_empty() && c.evaluated == 10);
        let t = ChartTower::<Q>::with_steps(&shape(&[2, 2]), Recursion::Euclid, &[0, 0, 1, 1]).unwrap();
        let c = t.check_normal_crossings(0, 25, 3).unwrap();
        assert!(c.passed(), "{:?}", c.failures);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(step_sequences(&shape(&[1, 1]), 4).len(), 5);
        assert_eq!(step_sequences(&shape(&[2]), 4).len(), 3);
        assert_eq!(shapes_up_to(4).len(), 1 + 2 + 3 + 5);
    }
}
