//! Exact dense rational matrices.
//!
//! Elimination runs on integer rows (each row scaled by the lcm of its
//! denominators) without divisions; every updated row is divided by its
//! content to keep entries small. Back-substitution then produces the RREF.

use crate::poly::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

type SparseRow = Vec<(usize, BigInt)>;

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols], row_labels: None, col_labels: None }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect(), row_labels: None, col_labels: None }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rational) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    fn integer_rows(&self) -> Vec<SparseRow> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let mut out: SparseRow = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.numer() * (&den / x.denom())))
                    .collect();
                primitive(&mut out);
                out
            })
            .filter(|r| !r.is_empty())
            .collect()
    }

    /// Row echelon form over the integers; returns pivot rows (pivots increasing).
    fn echelon(&self) -> Vec<SparseRow> {
        let mut active = self.integer_rows();
        let mut out: Vec<SparseRow> = Vec::new();
        for c in 0..self.cols {
            let mut leading: Vec<usize> = (0..active.len()).filter(|&i| active[i][0].0 == c).collect();
            if leading.is_empty() {
                continue;
            }
            // sparsest row with smallest pivot is a good pivot; ties keep input order
            let pick = *leading
                .iter()
                .min_by(|&&a, &&b| active[a].len().cmp(&active[b].len()).then(active[a][0].1.abs().cmp(&active[b][0].1.abs())))
                .unwrap();
            leading.retain(|&i| i != pick);
            let pivot = active[pick].clone();
            for &i in &leading {
                let row = std::mem::take(&mut active[i]);
                active[i] = combine(&pivot[0].1, &row, &row[0].1, &pivot);
            }
            active.remove(pick);
            active.retain(|r| !r.is_empty());
            out.push(pivot);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.echelon().len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let ech = self.echelon();
        let mut rows: Vec<Vec<(usize, Rational)>> = ech
            .iter()
            .map(|r| {
                let p = Rational::from_integer(r[0].1.clone());
                r.iter().map(|(j, x)| (*j, Rational::from_integer(x.clone()) / &p)).collect()
            })
            .collect();
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        for k in (0..rows.len()).rev() {
            let pc = pivots[k];
            let pivot_row = rows[k].clone();
            for i in 0..k {
                let Some(pos) = rows[i].iter().position(|(j, _)| *j == pc) else { continue };
                let f = rows[i][pos].1.clone();
                rows[i] = axpy(&rows[i], &f, &pivot_row);
            }
        }
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r {
                m.set(i, *j, x.clone());
            }
        }
        m.col_labels = self.col_labels.clone();
        (m, pivots)
    }

    /// Basis of the right null space, one vector per free column, each scaled
    /// to coprime integers with first nonzero entry positive.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            out.push(normalize_integer(v));
        }
        out
    }

    /// Solve `self * x = b`; `None` when inconsistent. Free variables are 0.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RationalMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }
}

fn primitive(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// a*row − b*pivot, made primitive.
fn combine(a: &BigInt, row: &SparseRow, b: &BigInt, pivot: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |x| x.0);
        let cj = pivot.get(j).map_or(usize::MAX, |x| x.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &row[i - 1].1 - b * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    primitive(&mut out);
    out
}

/// row − f*pivot on sparse rational rows.
fn axpy(row: &[(usize, Rational)], f: &Rational, pivot: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |x| x.0);
        let cj = pivot.get(j).map_or(usize::MAX, |x| x.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, row[i - 1].1.clone())
        } else if cj < ci {
            j += 1;
            (cj, -(f * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &row[i - 1].1 - f * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Scale to coprime integers, first nonzero entry positive.
pub fn normalize_integer(v: Vec<Rational>) -> Vec<Rational> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(crate::poly::format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn rref_example() {
        let m = RationalMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(r, RationalMatrix::from_i64(&[&[1, 0, -1], &[0, 1, 1]]));
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m.kernel_basis(), vec![vec![int(1), int(-1), int(1)]]);
    }

    #[test]
    fn kernel_normalization() {
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 3), int(0)], vec![int(0), int(0), int(0)]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![int(2), int(-3), int(0)], vec![int(0), int(0), int(1)]]);
        assert!(RationalMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn solve_consistency() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(m.solve(&[int(1), int(3)]).is_none());
        let x = m.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(1), int(2)]);
    }

    fn arb_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
                .prop_map(|rows| RationalMatrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(int).collect()).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_idempotent_rref(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            let (r, _) = m.rref();
            prop_assert_eq!(r.rref().0, r.clone());
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }
    }
}
