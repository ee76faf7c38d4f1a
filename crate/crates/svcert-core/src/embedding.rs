//! The Segre-Veronese monomial parametrization and its exact derivatives.
//!
//! Every ambient coordinate is a monomial in the homogeneous coordinates of
//! the factors, so partial derivatives of any order are computed symbolically
//! on exponent vectors and evaluated over the integers. Numeric
//! differentiation never appears: exactness is what makes the downstream
//! rank certificates rigorous.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{ExactMatrix, Span};
use crate::multiindex::{ball, Format, MultiIndexTuple};

/// A point of the affine cone over the product, with one integer vector per
/// factor and a distinguished nonzero coordinate (the chart pivot) in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePoint {
    factors: Vec<Vec<BigInt>>,
    charts: Vec<usize>,
}

impl AffinePoint {
    /// Builds a point, picking in each factor the maximal-absolute-value
    /// coordinate as chart pivot.
    pub fn new(fmt: &Format, factors: Vec<Vec<BigInt>>) -> Result<Self> {
        let charts = factors
            .iter()
            .map(|v| {
                let mut best = 0usize;
                for (i, x) in v.iter().enumerate() {
                    if x.abs() > v[best].abs() {
                        best = i;
                    }
                }
                best
            })
            .collect();
        Self::with_charts(fmt, factors, charts)
    }

    /// Builds a point with explicitly chosen chart pivots.
    pub fn with_charts(fmt: &Format, factors: Vec<Vec<BigInt>>, charts: Vec<usize>) -> Result<Self> {
        if factors.len() != fmt.r() || charts.len() != fmt.r() {
            return Err(Error::ShapeMismatch("point has wrong number of factors".into()));
        }
        for (i, v) in factors.iter().enumerate() {
            if v.len() != fmt.n()[i] + 1 {
                return Err(Error::ShapeMismatch(format!(
                    "factor {i} has length {} instead of {}",
                    v.len(),
                    fmt.n()[i] + 1
                )));
            }
            if charts[i] > fmt.n()[i] || v[charts[i]].is_zero() {
                return Err(Error::ShapeMismatch(format!(
                    "chart coordinate of factor {i} is out of range or zero"
                )));
            }
        }
        Ok(Self { factors, charts })
    }

    pub fn from_i64(fmt: &Format, factors: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(
            fmt,
            factors
                .into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    /// The coordinate point `e_I` for a diagonal tuple `I`; its factor
    /// vectors are unit vectors.
    pub fn coordinate_point(fmt: &Format, center: &MultiIndexTuple) -> Result<Self> {
        if !center.matches(fmt) {
            return Err(Error::ShapeMismatch("center does not match format".into()));
        }
        if !center.is_diagonal() {
            return Err(Error::NonDiagonalCenter);
        }
        let mut factors = Vec::with_capacity(fmt.r());
        let mut charts = Vec::with_capacity(fmt.r());
        for (i, part) in center.parts().iter().enumerate() {
            let pivot = part.entries()[0];
            let mut v = vec![BigInt::zero(); fmt.n()[i] + 1];
            v[pivot] = BigInt::one();
            factors.push(v);
            charts.push(pivot);
        }
        Ok(Self { factors, charts })
    }

    pub fn factors(&self) -> &[Vec<BigInt>] {
        &self.factors
    }

    pub fn charts(&self) -> &[usize] {
        &self.charts
    }
}

/// Precomputed exponent vectors of the ambient monomials, flattened over the
/// homogeneous variables of all factors.
pub(crate) struct EmbeddingData {
    fmt: Format,
    /// per ambient coordinate, exponent over `num_vars` variables
    exponents: Vec<Vec<u32>>,
    /// variable offset of each factor
    offsets: Vec<usize>,
}

impl EmbeddingData {
    pub(crate) fn new(fmt: &Format) -> Result<Self> {
        let mut offsets = Vec::with_capacity(fmt.r());
        let mut off = 0usize;
        for &n in fmt.n() {
            offsets.push(off);
            off += n + 1;
        }
        let num_vars = off;
        let tuples = fmt.index_tuples()?;
        let exponents = tuples
            .iter()
            .map(|t| {
                let mut e = vec![0u32; num_vars];
                for (i, part) in t.parts().iter().enumerate() {
                    for &a in part.entries() {
                        e[offsets[i] + a] += 1;
                    }
                }
                e
            })
            .collect();
        Ok(Self {
            fmt: fmt.clone(),
            exponents,
            offsets,
        })
    }

    pub(crate) fn num_coords(&self) -> usize {
        self.exponents.len()
    }

    fn num_vars(&self) -> usize {
        self.offsets.last().unwrap() + self.fmt.n().last().unwrap() + 1
    }

    /// Variable indices that stay free in the affine chart of `p` (all
    /// non-pivot positions), in factor-major order.
    pub(crate) fn chart_vars(&self, p: &AffinePoint) -> Vec<usize> {
        let mut vars = Vec::with_capacity(self.fmt.dim());
        for (i, &n) in self.fmt.n().iter().enumerate() {
            for a in 0..=n {
                if a != p.charts()[i] {
                    vars.push(self.offsets[i] + a);
                }
            }
        }
        vars
    }

    /// Powers of every coordinate of `p` up to its factor degree.
    pub(crate) fn power_table(&self, p: &AffinePoint) -> Vec<Vec<BigInt>> {
        let mut table = vec![Vec::new(); self.num_vars()];
        for (i, v) in p.factors().iter().enumerate() {
            let d = self.fmt.d()[i];
            for (a, x) in v.iter().enumerate() {
                let mut pows = Vec::with_capacity(d + 1);
                pows.push(BigInt::one());
                for k in 1..=d {
                    let prev = &pows[k - 1];
                    pows.push(prev * x);
                }
                table[self.offsets[i] + a] = pows;
            }
        }
        table
    }

    /// The derivative `D^alpha` of the monomial map, evaluated at `p`:
    /// coordinate `J` maps to `prod_v e_v(e_v-1)...(e_v-a_v+1) p_v^{e_v-a_v}`.
    /// `alpha` is sparse: pairs `(var, order)`.
    pub(crate) fn derivative_row(
        &self,
        powers: &[Vec<BigInt>],
        alpha: &[(usize, u32)],
    ) -> Vec<BigInt> {
        self.exponents
            .iter()
            .map(|e| {
                let mut coeff = BigInt::one();
                let mut ok = true;
                for &(v, a) in alpha {
                    let ev = e[v];
                    if a > ev {
                        ok = false;
                        break;
                    }
                    for k in 0..a {
                        coeff *= BigInt::from(ev - k);
                    }
                }
                if !ok {
                    return BigInt::zero();
                }
                let mut val = coeff;
                for (v, &ev) in e.iter().enumerate() {
                    if val.is_zero() {
                        break;
                    }
                    let a = alpha.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, o)| o);
                    let rem = ev - a;
                    if rem > 0 {
                        val *= &powers[v][rem as usize];
                    }
                }
                val
            })
            .collect()
    }

    /// Rows spanning the affine cone over the tangent space at `p`: the full
    /// Jacobian of the monomial map with respect to every homogeneous
    /// variable. There are `sum (n_i + 1)` rows of rank `dim X + 1`.
    pub(crate) fn tangent_rows(&self, p: &AffinePoint) -> Vec<Vec<BigInt>> {
        let powers = self.power_table(p);
        (0..self.num_vars())
            .map(|v| self.derivative_row(&powers, &[(v, 1)]))
            .collect()
    }

    /// Hessian of `L` composed with the chart parametrization at `p`.
    pub(crate) fn form_hessian(
        &self,
        p: &AffinePoint,
        powers: &[Vec<BigInt>],
        form: &[BigRational],
    ) -> Vec<Vec<BigRational>> {
        let vars = self.chart_vars(p);
        let m = vars.len();
        let mut h = vec![vec![BigRational::zero(); m]; m];
        for u in 0..m {
            for v in u..m {
                let alpha: Vec<(usize, u32)> = if u == v {
                    vec![(vars[u], 2)]
                } else {
                    vec![(vars[u], 1), (vars[v], 1)]
                };
                let entry = dot(form, &self.derivative_row(powers, &alpha));
                h[u][v] = entry.clone();
                h[v][u] = entry;
            }
        }
        h
    }
}

fn dot(form: &[BigRational], row: &[BigInt]) -> BigRational {
    let mut acc = BigRational::zero();
    for (l, x) in form.iter().zip(row) {
        if !l.is_zero() && !x.is_zero() {
            acc += l * BigRational::from_integer(x.clone());
        }
    }
    acc
}

/// Projective ambient dimension of the embedding.
pub fn ambient_dim(fmt: &Format) -> Result<usize> {
    fmt.ambient_dim()
}

/// Evaluates the monomial parametrization: the coordinate at tuple `J` is
/// the product of the factor coordinates indexed by `J`, with multiplicity.
pub fn embed(fmt: &Format, p: &AffinePoint) -> Result<Vec<BigInt>> {
    check_point(fmt, p)?;
    let data = EmbeddingData::new(fmt)?;
    let powers = data.power_table(p);
    Ok(data.derivative_row(&powers, &[]))
}

/// All multi-exponents over `m` variables with total order at most `s`,
/// sorted by total degree then lexicographically. The first entry is the
/// zero exponent.
fn jet_exponents(m: usize, s: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=s {
        let mut cur = vec![0u32; m];
        fill(&mut out, &mut cur, 0, deg as u32);
    }
    fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, rem: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = rem;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for v in (0..=rem).rev() {
            cur[pos] = v;
            fill(out, cur, pos + 1, rem - v);
            cur[pos] = 0;
        }
    }
    out
}

/// Span of all partial derivatives of order at most `s` of the chart
/// parametrization at `p`; the order-zero row is the embedded point, and for
/// `s = 1` this is the affine cone over the tangent space.
pub fn osculating_cone_basis(fmt: &Format, p: &AffinePoint, s: usize) -> Result<Span> {
    check_point(fmt, p)?;
    let data = EmbeddingData::new(fmt)?;
    let powers = data.power_table(p);
    let vars = data.chart_vars(p);
    let rows = jet_exponents(vars.len(), s)
        .into_iter()
        .map(|alpha| {
            let sparse: Vec<(usize, u32)> = alpha
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(k, &a)| (vars[k], a))
                .collect();
            data.derivative_row(&powers, &sparse)
        })
        .collect();
    Ok(Span::new(ExactMatrix::from_int_rows(rows)?))
}

/// The osculating span at a diagonal coordinate point, computed
/// combinatorially: the unit vectors `e_J` over the distance ball of radius
/// `s` around the center.
pub fn coordinate_osculating_span(fmt: &Format, center: &MultiIndexTuple, s: usize) -> Result<Span> {
    if !center.matches(fmt) {
        return Err(Error::ShapeMismatch("center does not match format".into()));
    }
    if !center.is_diagonal() {
        return Err(Error::NonDiagonalCenter);
    }
    let tuples = fmt.index_tuples()?;
    let members = ball(center, s, fmt)?;
    let ncols = tuples.len();
    let mut rows = Vec::with_capacity(members.len());
    let mut k = 0usize;
    for (pos, t) in tuples.iter().enumerate() {
        if k < members.len() && *t == members[k] {
            let mut row = vec![BigInt::zero(); ncols];
            row[pos] = BigInt::one();
            rows.push(row);
            k += 1;
        }
    }
    Ok(Span::new(ExactMatrix::from_int_rows(rows)?))
}

/// Exact Hessian of `L` composed with the chart parametrization at `p`, a
/// symmetric matrix of size `dim X`.
pub fn hessian_of_form(fmt: &Format, p: &AffinePoint, form: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    check_point(fmt, p)?;
    let data = EmbeddingData::new(fmt)?;
    if form.len() != data.num_coords() {
        return Err(Error::ShapeMismatch(format!(
            "form has {} coefficients, ambient has {}",
            form.len(),
            data.num_coords()
        )));
    }
    let powers = data.power_table(p);
    Ok(data.form_hessian(p, &powers, form))
}

fn check_point(fmt: &Format, p: &AffinePoint) -> Result<()> {
    if p.factors().len() != fmt.r()
        || p.factors()
            .iter()
            .zip(fmt.n())
            .any(|(v, &n)| v.len() != n + 1)
    {
        return Err(Error::ShapeMismatch("point does not match format".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;
    use num::FromPrimitive;

    fn fmt(n: &[usize], d: &[usize]) -> Format {
        Format::new(n.to_vec(), d.to_vec()).unwrap()
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from_i64(x).unwrap()
    }

    #[test]
    fn embed_conic() {
        let f = fmt(&[1], &[2]);
        let p = AffinePoint::from_i64(&f, vec![vec![1, 2]]).unwrap();
        let v = embed(&f, &p).unwrap();
        assert_eq!(v, vec![BigInt::from(1), BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn embed_coordinate_point_is_unit_vector() {
        let f = fmt(&[1, 2], &[2, 1]);
        let center = f.diagonal_tuple(0).unwrap();
        let p = AffinePoint::coordinate_point(&f, &center).unwrap();
        let v = embed(&f, &p).unwrap();
        assert!(v[0].is_one());
        assert!(v[1..].iter().all(BigInt::is_zero));
    }

    #[test]
    fn embed_segre_outer_product() {
        let f = fmt(&[1, 1], &[1, 1]);
        let p = AffinePoint::from_i64(&f, vec![vec![1, 2], vec![1, 3]]).unwrap();
        let v = embed(&f, &p).unwrap();
        let want: Vec<BigInt> = [1, 3, 2, 6].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(v, want);
    }

    #[test]
    fn osculating_order_zero_is_the_point() {
        let f = fmt(&[2], &[2]);
        let p = AffinePoint::from_i64(&f, vec![vec![2, 3, 5]]).unwrap();
        let span = osculating_cone_basis(&f, &p, 0).unwrap();
        assert_eq!(span.rank(), 1);
        assert_eq!(span.rows().nrows(), 1);
    }

    #[test]
    fn osculating_order_one_rank_on_veronese_surface() {
        let f = fmt(&[2], &[2]);
        let p = AffinePoint::from_i64(&f, vec![vec![2, 3, 5]]).unwrap();
        let span = osculating_cone_basis(&f, &p, 1).unwrap();
        assert_eq!(span.rank(), 3);
    }

    #[test]
    fn osculating_order_two_at_twisted_cubic_coordinate_point() {
        let f = fmt(&[1], &[3]);
        let center = f.diagonal_tuple(0).unwrap();
        let p = AffinePoint::coordinate_point(&f, &center).unwrap();
        let span = osculating_cone_basis(&f, &p, 2).unwrap();
        assert_eq!(span.rank(), 3);
        assert_eq!(ball(&center, 2, &f).unwrap().len(), 3);
    }

    #[test]
    fn coordinate_span_examples() {
        let f = fmt(&[1], &[2]);
        let center = f.diagonal_tuple(0).unwrap();
        assert_eq!(coordinate_osculating_span(&f, &center, 0).unwrap().rank(), 1);
        let s1 = coordinate_osculating_span(&f, &center, 1).unwrap();
        assert_eq!(s1.rank(), 2);
        let full = coordinate_osculating_span(&f, &center, f.total_degree()).unwrap();
        assert_eq!(full.rank(), f.ambient_dim().unwrap() + 1);
    }

    #[test]
    fn coordinate_span_rejects_non_diagonal_center() {
        let f = fmt(&[1], &[2]);
        let center = MultiIndexTuple::new(vec![MultiIndex::new(vec![0, 1], 1).unwrap()]).unwrap();
        assert!(matches!(
            coordinate_osculating_span(&f, &center, 1),
            Err(Error::NonDiagonalCenter)
        ));
    }

    #[test]
    fn hessian_of_chart_dual_form_vanishes() {
        let f = fmt(&[1], &[2]);
        let center = f.diagonal_tuple(0).unwrap();
        let p = AffinePoint::coordinate_point(&f, &center).unwrap();
        let form = vec![rat(1), rat(0), rat(0)];
        let h = hessian_of_form(&f, &p, &form).unwrap();
        assert!(h.iter().flatten().all(BigRational::is_zero));
    }

    #[test]
    fn hessian_of_squared_chart_variable() {
        // pullback of the {1,1} coordinate through the chart at e_{00} is t^2
        let f = fmt(&[1], &[2]);
        let center = f.diagonal_tuple(0).unwrap();
        let p = AffinePoint::coordinate_point(&f, &center).unwrap();
        let form = vec![rat(0), rat(0), rat(1)];
        let h = hessian_of_form(&f, &p, &form).unwrap();
        assert_eq!(h, vec![vec![rat(2)]]);
    }

    #[test]
    fn hessian_of_mixed_segre_form() {
        // pullback of ({1},{1}) at ((1,0),(1,0)) is t*u
        let f = fmt(&[1, 1], &[1, 1]);
        let p = AffinePoint::from_i64(&f, vec![vec![1, 0], vec![1, 0]]).unwrap();
        let form = vec![rat(0), rat(0), rat(0), rat(1)];
        let h = hessian_of_form(&f, &p, &form).unwrap();
        assert_eq!(h, vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
    }

    #[test]
    fn hessian_is_linear_in_the_form() {
        let f = fmt(&[1, 1], &[2, 1]);
        let p = AffinePoint::from_i64(&f, vec![vec![2, 1], vec![1, 3]]).unwrap();
        let ncols = f.ambient_dim().unwrap() + 1;
        let l1: Vec<BigRational> = (0..ncols).map(|i| rat(i as i64 + 1)).collect();
        let l2: Vec<BigRational> = (0..ncols).map(|i| rat(((i * 7) % 5) as i64 - 2)).collect();
        let sum: Vec<BigRational> = l1.iter().zip(&l2).map(|(a, b)| a + b).collect();
        let h1 = hessian_of_form(&f, &p, &l1).unwrap();
        let h2 = hessian_of_form(&f, &p, &l2).unwrap();
        let hs = hessian_of_form(&f, &p, &sum).unwrap();
        for u in 0..h1.len() {
            for v in 0..h1.len() {
                assert_eq!(&h1[u][v] + &h2[u][v], hs[u][v]);
            }
        }
    }

    #[test]
    fn tangent_rows_match_first_jets() {
        let f = fmt(&[1, 2], &[2, 1]);
        let p = AffinePoint::from_i64(&f, vec![vec![3, 2], vec![1, 4, 2]]).unwrap();
        let data = EmbeddingData::new(&f).unwrap();
        let jac = Span::new(ExactMatrix::from_int_rows(data.tangent_rows(&p)).unwrap());
        let jets = osculating_cone_basis(&f, &p, 1).unwrap();
        assert_eq!(jac.rank(), f.dim() + 1);
        assert!(jac.same_space(&jets).unwrap());
    }

    #[test]
    fn chart_pivot_picks_max_abs() {
        let f = fmt(&[2], &[1]);
        let p = AffinePoint::from_i64(&f, vec![vec![2, -7, 3]]).unwrap();
        assert_eq!(p.charts(), &[1]);
    }
}
