//! Exact linear algebra: pivoted elimination over a field, cofactor
//! determinants over a ring.

use crate::field::{Field, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<F>>,
}

impl<F: Field> Matrix<F> {
    /// Build from row vectors. Panics on ragged input.
    pub fn from_rows(data: Vec<Vec<F>>, cols: usize) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![F::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = F::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].inv().expect("pivot is nonzero");
            for v in m[r].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                for j in c..self.cols {
                    let t = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a basis of the right kernel.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<F>>) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = vec![F::zero(); self.cols];
                v[fc] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.data[row][fc].clone();
                }
                v
            })
            .collect();
        (pivots.len(), kernel)
    }

    /// One solution of `self * x = b` and a kernel basis, or `None` if
    /// inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<(Vec<F>, Vec<Vec<F>>)> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<F>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut r = r.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let (r, pivots) = Matrix::from_rows(aug, self.cols + 1).rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.data[row][self.cols].clone();
        }
        Some((x, self.rank_kernel().1))
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut r = self.data[i].clone();
                r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                r
            })
            .collect();
        let (r, pivots) = Matrix::from_rows(aug, 2 * n).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(
            r.data.into_iter().map(|row| row[n..].to_vec()).collect(),
            n,
        ))
    }

    pub fn transpose(&self) -> Matrix<F> {
        let data = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.data[i][j].clone()).collect())
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

/// Determinant of a square matrix over a ring, by cofactor expansion along
/// the sparsest row.
pub fn det<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    match n {
        0 => return R::one(),
        1 => return m[0][0].clone(),
        2 => return m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {}
    }
    let row = (0..n)
        .max_by_key(|&i| m[i].iter().filter(|v| v.is_zero()).count())
        .unwrap();
    let mut acc = R::zero();
    for j in 0..n {
        if m[row][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<R>> = (0..n)
            .filter(|&i| i != row)
            .map(|i| {
                (0..n)
                    .filter(|&k| k != j)
                    .map(|k| m[i][k].clone())
                    .collect()
            })
            .collect();
        let term = m[row][j].clone() * det(&minor);
        if (row + j) % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// All `k x k` minors of a (possibly rectangular) matrix over a ring.
pub fn minors<R: Ring>(m: &[Vec<R>], cols: usize, k: usize) -> Vec<R> {
    let rows = m.len();
    let mut out = Vec::new();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<R>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            out.push(det(&sub));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;
    use num_traits::Zero;
    use crate::Q;

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Q::from_i64(v)).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn rank_kernel_examples() {
        let (r, k) = Matrix::<Q>::identity(3).rank_kernel();
        assert_eq!((r, k.len()), (3, 0));
        let (r, k) = Matrix::<Q>::zeros(2, 3).rank_kernel();
        assert_eq!((r, k.len()), (0, 3));
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let (r, k) = m.rank_kernel();
        assert_eq!((r, k.len()), (1, 2));
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn determinant_and_inverse_agree() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let d = det(&m.data);
        assert_eq!(d, Q::from_i64(18));
        let inv = m.inverse().unwrap();
        let prod: Vec<Vec<Q>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| (0..3).fold(Q::from_i64(0), |a, k| a + m.get(i, k).clone() * inv.get(k, j).clone()))
                    .collect()
            })
            .collect();
        assert_eq!(Matrix::from_rows(prod, 3), Matrix::identity(3));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_inconsistent() {
        let m = mat(&[&[1, 1], &[1, 1]]);
        assert!(m.solve(&[Q::from_i64(1), Q::from_i64(2)]).is_none());
        let (x, k) = m.solve(&[Q::from_i64(2), Q::from_i64(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![Q::from_i64(2), Q::from_i64(2)]);
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(2, 3).len(), 0);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
