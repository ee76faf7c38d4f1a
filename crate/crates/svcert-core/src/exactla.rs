//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Every rank, kernel and annihilator that backs a certificate runs through
//! the fraction-free (Bareiss) elimination in this module; there is no
//! floating-point fallback anywhere.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Dense matrix of exact rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: vec![BigRational::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self {
            nrows,
            ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigRational::from_integer).collect())
                .collect(),
        )
    }

    /// Empty matrix with a definite column count (zero rows).
    pub fn empty(ncols: usize) -> Self {
        Self {
            nrows: 0,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.ncols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.ncols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.ncols..(r + 1) * self.ncols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[BigRational]> {
        (0..self.nrows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Vertically stacks matrices with matching column counts.
    pub fn stacked(parts: &[&ExactMatrix]) -> Result<Self> {
        let ncols = parts
            .first()
            .map(|m| m.ncols)
            .ok_or_else(|| Error::ShapeMismatch("stacking nothing".into()))?;
        if parts.iter().any(|m| m.ncols != ncols) {
            return Err(Error::ShapeMismatch("stacking with unequal column counts".into()));
        }
        let mut entries = Vec::new();
        for m in parts {
            entries.extend_from_slice(&m.entries);
        }
        Ok(Self {
            nrows: entries.len() / ncols.max(1),
            ncols,
            entries,
        })
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.ncols {
            return Err(Error::ShapeMismatch("vector length != ncols".into()));
        }
        Ok((0..self.nrows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Exact row rank.
    pub fn rank(&self) -> usize {
        self.echelon().pivot_cols.len()
    }

    /// Basis of `{v : M v = 0}` as rows, denominators cleared. The row count
    /// is exactly `ncols - rank(M)`.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !ech.pivot_cols.contains(c))
            .collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.ncols];
            v[f] = BigRational::one();
            ech.back_substitute(&mut v);
            rows.push(clear_denominators(&v));
        }
        let mut m = ExactMatrix::from_int_rows(rows).expect("kernel rows are rectangular");
        m.ncols = self.ncols;
        m
    }

    /// One vector of the kernel with the free coordinates set by `free_vals`
    /// (given in column order of the non-pivot columns), denominators
    /// cleared. Used for sampling random annihilator elements without
    /// materializing the whole basis.
    pub(crate) fn kernel_element(&self, ech: &Echelon, free_vals: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigRational::zero(); self.ncols];
        let mut k = 0;
        for c in 0..self.ncols {
            if !ech.pivot_cols.contains(&c) {
                v[c] = BigRational::from_integer(free_vals[k].clone());
                k += 1;
            }
        }
        ech.back_substitute(&mut v);
        clear_denominators(&v)
    }

    /// Fraction-free forward elimination. Rows are scaled to integers first;
    /// row operations preserve both the row space and the kernel.
    pub(crate) fn echelon(&self) -> Echelon {
        let mut m: Vec<Vec<BigInt>> = self.rows_iter().map(clear_denominators).collect();
        let ncols = self.ncols;
        let mut pivot_cols = Vec::new();
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..ncols {
            if row >= m.len() {
                break;
            }
            let Some(piv) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, piv);
            let pivot = m[row][col].clone();
            for i in row + 1..m.len() {
                if m[i][col].is_zero() {
                    // untouched rows stay consistent if we rescale them
                    for j in col..ncols {
                        if !m[i][j].is_zero() {
                            let scaled = &pivot * &m[i][j];
                            debug_assert!((&scaled % &prev).is_zero(), "inexact division");
                            m[i][j] = &scaled / &prev;
                        }
                    }
                    continue;
                }
                let factor = std::mem::replace(&mut m[i][col], BigInt::zero());
                let (head, tail) = m.split_at_mut(i);
                let prow = &head[row];
                let irow = &mut tail[0];
                for j in col + 1..ncols {
                    let num = &pivot * &irow[j] - &factor * &prow[j];
                    if num.is_zero() {
                        irow[j] = BigInt::zero();
                    } else {
                        debug_assert!((&num % &prev).is_zero(), "inexact division");
                        irow[j] = &num / &prev;
                    }
                }
            }
            pivot_cols.push(col);
            prev = pivot;
            row += 1;
        }
        m.truncate(row);
        Echelon {
            rows: m,
            pivot_cols,
            ncols,
        }
    }
}

/// Result of the fraction-free elimination: integer echelon rows with their
/// pivot columns. Row space and kernel agree with the source matrix.
pub(crate) struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pub(crate) pivot_cols: Vec<usize>,
    ncols: usize,
}

impl Echelon {
    /// Solves `R v = 0` for the pivot coordinates of `v`, given its free
    /// coordinates.
    fn back_substitute(&self, v: &mut [BigRational]) {
        for t in (0..self.rows.len()).rev() {
            let p = self.pivot_cols[t];
            let mut s = BigRational::zero();
            for j in p + 1..self.ncols {
                if !self.rows[t][j].is_zero() && !v[j].is_zero() {
                    s += BigRational::from_integer(self.rows[t][j].clone()) * &v[j];
                }
            }
            v[p] = -s / BigRational::from_integer(self.rows[t][p].clone());
        }
    }

    pub(crate) fn num_free(&self) -> usize {
        self.ncols - self.pivot_cols.len()
    }
}

/// Scales a rational row to a primitive integer row.
fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        if !x.is_zero() {
            lcm = num::integer::lcm(lcm, x.denom().clone());
        }
    }
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &out {
        g = num::integer::gcd(g, x.clone());
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut out {
            *x = &*x / &g;
        }
    }
    if out.iter().find(|x| !x.is_zero()).map(BigInt::sign) == Some(Sign::Minus) {
        for x in &mut out {
            *x = -std::mem::take(x);
        }
    }
    out
}

/// A linear subspace of the ambient cone, carried as a row-space basis
/// together with the forms vanishing on it.
#[derive(Debug, Clone)]
pub struct Span {
    rows: ExactMatrix,
    rank: usize,
    annihilator: ExactMatrix,
}

impl Span {
    /// Computes rank and annihilator eagerly; the annihilator of the row
    /// space of `M` is the kernel of `M` acting on forms.
    pub fn new(rows: ExactMatrix) -> Self {
        let rank = rows.rank();
        let annihilator = rows.kernel_basis();
        Self {
            rows,
            rank,
            annihilator,
        }
    }

    pub fn rows(&self) -> &ExactMatrix {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the projectivization, `rank - 1` (so `-1` would be the
    /// empty span; callers only build nonzero spans).
    pub fn projective_dim(&self) -> usize {
        self.rank.saturating_sub(1)
    }

    pub fn ambient_cols(&self) -> usize {
        self.rows.ncols()
    }

    /// Independent forms vanishing on the row space; there are
    /// `ncols - rank` of them.
    pub fn annihilator(&self) -> &ExactMatrix {
        &self.annihilator
    }

    /// True iff the row space of `other` is contained in the row space of
    /// `self`.
    pub fn contains(&self, other: &Span) -> Result<bool> {
        if self.ambient_cols() != other.ambient_cols() {
            return Err(Error::ShapeMismatch("spans in different ambient spaces".into()));
        }
        let stacked = ExactMatrix::stacked(&[&self.rows, &other.rows])?;
        Ok(stacked.rank() == self.rank)
    }

    /// Row-space equality via a single stacked rank.
    pub fn same_space(&self, other: &Span) -> Result<bool> {
        if self.ambient_cols() != other.ambient_cols() {
            return Err(Error::ShapeMismatch("spans in different ambient spaces".into()));
        }
        if self.rank != other.rank {
            return Ok(false);
        }
        let stacked = ExactMatrix::stacked(&[&self.rows, &other.rows])?;
        Ok(stacked.rank() == self.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_int_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn random_int_matrix(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize, bound: i64) -> ExactMatrix {
        ExactMatrix::from_int_rows(
            (0..nrows)
                .map(|_| (0..ncols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Independent rank oracle: largest k with a nonzero k x k minor,
    /// determinants by Laplace expansion. Only for tiny matrices.
    fn minor_rank(m: &ExactMatrix) -> usize {
        fn det(m: &ExactMatrix, rows: &[usize], cols: &[usize]) -> BigRational {
            if rows.is_empty() {
                return BigRational::one();
            }
            let mut acc = BigRational::zero();
            let rest: Vec<usize> = rows[1..].to_vec();
            for (k, &c) in cols.iter().enumerate() {
                let mut sub: Vec<usize> = cols.to_vec();
                sub.remove(k);
                let term = m.get(rows[0], c) * det(m, &rest, &sub);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if k > n {
                return vec![];
            }
            let mut out = Vec::new();
            for first in 0..=n - k {
                for mut rest in combos(n - first - 1, k - 1) {
                    for x in rest.iter_mut() {
                        *x += first + 1;
                    }
                    let mut c = vec![first];
                    c.append(&mut rest);
                    out.push(c);
                }
            }
            out
        }
        for k in (1..=m.nrows().min(m.ncols())).rev() {
            for rows in combos(m.nrows(), k) {
                for cols in combos(m.ncols(), k) {
                    if !det(m, &rows, &cols).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(ExactMatrix::zeros(4, 5).rank(), 0);
    }

    #[test]
    fn rank_matches_minor_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let m = random_int_matrix(&mut rng, 6, 6, 4);
            assert_eq!(m.rank(), minor_rank(&m));
        }
        // a few guaranteed-singular ones
        for _ in 0..10 {
            let mut m = random_int_matrix(&mut rng, 6, 6, 4);
            let dup = m.row(0).to_vec();
            for (c, v) in dup.into_iter().enumerate() {
                m.set(5, c, v);
            }
            assert_eq!(m.rank(), minor_rank(&m));
        }
    }

    #[test]
    fn rank_of_rational_matrix() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let m = ExactMatrix::from_rows(vec![
            vec![half.clone(), BigRational::one()],
            vec![BigRational::one(), BigRational::from_i64(2).unwrap()],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_single_row() {
        let m = int_matrix(&[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.nrows(), 1);
        let prod = m.apply(k.row(0)).unwrap();
        assert!(prod.iter().all(BigRational::is_zero));
    }

    #[test]
    fn kernel_of_invertible_is_trivial() {
        let m = int_matrix(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.kernel_basis().nrows(), 0);
    }

    #[test]
    fn kernel_dims_and_substitution_on_random_rank4() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut found = 0;
        while found < 10 {
            let m = random_int_matrix(&mut rng, 4, 6, 5);
            if m.rank() != 4 {
                continue;
            }
            found += 1;
            let k = m.kernel_basis();
            assert_eq!(k.nrows(), 2);
            assert_eq!(k.rank(), 2);
            for r in 0..k.nrows() {
                let prod = m.apply(k.row(r)).unwrap();
                assert!(prod.iter().all(BigRational::is_zero));
            }
        }
    }

    #[test]
    fn annihilator_of_coordinate_axis() {
        let span = Span::new(int_matrix(&[&[1, 0, 0]]));
        let ann = span.annihilator();
        assert_eq!(ann.nrows(), 2);
        assert_eq!(ann.rank(), 2);
        for r in 0..ann.nrows() {
            assert!(ann.row(r)[0].is_zero());
        }
    }

    #[test]
    fn annihilator_of_full_space_is_empty() {
        let span = Span::new(ExactMatrix::identity(4));
        assert_eq!(span.annihilator().nrows(), 0);
    }

    #[test]
    fn double_annihilator_recovers_row_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..15 {
            let m = random_int_matrix(&mut rng, 3, 7, 5);
            let span = Span::new(m);
            let dual = Span::new(span.annihilator().clone());
            let double = Span::new(dual.annihilator().clone());
            assert!(span.same_space(&double).unwrap());
        }
    }

    #[test]
    fn contains_basics() {
        let a = Span::new(int_matrix(&[&[1, 0], &[0, 1]]));
        let e0 = Span::new(int_matrix(&[&[1, 0]]));
        let e1 = Span::new(int_matrix(&[&[0, 1]]));
        assert!(a.contains(&a).unwrap());
        assert!(a.contains(&e0).unwrap());
        assert!(!e0.contains(&e1).unwrap());
        assert!(e0.contains(&e0).unwrap());
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let m = random_int_matrix(&mut rng, 5, 8, 6);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
