//! Coordinate index sets of Segre-Veronese embeddings and their Hamming
//! distance.
//!
//! The ambient coordinates of `P^{n_1} x ... x P^{n_r}` embedded by
//! `O(d_1,...,d_r)` are indexed by tuples of sorted multisets, one multiset
//! of size `d_i` over `{0,...,n_i}` per factor. The distance between two
//! such tuples (the number of unmatched entries, summed over factors)
//! controls which coordinate points span osculating spaces at coordinate
//! points, so everything downstream leans on the enumeration order fixed
//! here.

use crate::error::{Error, Result};

/// A sorted multiset `{i_1 <= ... <= i_d}` with entries in `[0, n]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: Vec<usize>,
    n: usize,
}

impl MultiIndex {
    /// Builds a multi-index, sorting the entries into canonical order.
    pub fn new(mut entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DegenerateDegree);
        }
        if let Some(&bad) = entries.iter().find(|&&e| e > n) {
            return Err(Error::ShapeMismatch(format!(
                "entry {bad} exceeds factor dimension {n}"
            )));
        }
        entries.sort_unstable();
        Ok(Self { entries, n })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree of the multi-index, i.e. the multiset size.
    pub fn d(&self) -> usize {
        self.entries.len()
    }

    /// True when all entries are equal.
    pub fn is_constant(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] == w[1])
    }

    /// Multiplicity vector over `{0,...,n}`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut mult = vec![0usize; self.n + 1];
        for &e in &self.entries {
            mult[e] += 1;
        }
        mult
    }
}

/// One multi-index per factor: an element of
/// `Lambda = Lambda_{n_1,d_1} x ... x Lambda_{n_r,d_r}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndexTuple {
    parts: Vec<MultiIndex>,
}

impl MultiIndexTuple {
    pub fn new(parts: Vec<MultiIndex>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidFormat("tuple needs at least one part".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[MultiIndex] {
        &self.parts
    }

    pub fn matches(&self, fmt: &Format) -> bool {
        self.parts.len() == fmt.r()
            && self
                .parts
                .iter()
                .zip(fmt.n.iter().zip(fmt.d.iter()))
                .all(|(p, (&n, &d))| p.n() == n && p.d() == d)
    }

    /// True when every part is a constant multiset (the shape of a
    /// coordinate point lying on the variety).
    pub fn is_diagonal(&self) -> bool {
        self.parts.iter().all(MultiIndex::is_constant)
    }
}

/// The pair of tuples `(n, d)` defining a Segre-Veronese embedding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Format {
    n: Vec<usize>,
    d: Vec<usize>,
}

impl Format {
    pub fn new(n: Vec<usize>, d: Vec<usize>) -> Result<Self> {
        if n.is_empty() || n.len() != d.len() {
            return Err(Error::InvalidFormat(
                "n and d must be nonempty tuples of equal length".into(),
            ));
        }
        if n.contains(&0) {
            return Err(Error::InvalidFormat("factor dimensions must be positive".into()));
        }
        if d.contains(&0) {
            return Err(Error::DegenerateDegree);
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    /// Number of factors.
    pub fn r(&self) -> usize {
        self.n.len()
    }

    /// Dimension of the variety: the sum of the factor dimensions.
    pub fn dim(&self) -> usize {
        self.n.iter().sum()
    }

    /// Total degree, which bounds the tuple distance.
    pub fn total_degree(&self) -> usize {
        self.d.iter().sum()
    }

    /// Total number of homogeneous coordinates over all factors.
    pub fn num_vars(&self) -> usize {
        self.n.iter().map(|&n| n + 1).sum()
    }

    /// Projective ambient dimension `N = prod binom(n_i + d_i, d_i) - 1`.
    pub fn ambient_dim(&self) -> Result<usize> {
        let mut prod: u128 = 1;
        for (&n, &d) in self.n.iter().zip(&self.d) {
            let nd = n.checked_add(d).ok_or_else(|| Error::Overflow("n_i + d_i".into()))?;
            let b = binom(nd, d).ok_or_else(|| Error::Overflow("binom(n_i+d_i, d_i)".into()))?;
            prod = prod
                .checked_mul(b)
                .ok_or_else(|| Error::Overflow("product of factor coordinate counts".into()))?;
        }
        usize::try_from(prod - 1).map_err(|_| Error::Overflow("ambient dimension".into()))
    }

    /// All elements of `Lambda` in enumeration order: the Cartesian product
    /// of per-factor enumerations with the first factor most significant.
    pub fn index_tuples(&self) -> Result<Vec<MultiIndexTuple>> {
        let factor_lists: Vec<Vec<MultiIndex>> = self
            .n
            .iter()
            .zip(&self.d)
            .map(|(&n, &d)| enumerate(n, d))
            .collect::<Result<_>>()?;
        let total: usize = factor_lists.iter().map(Vec::len).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; factor_lists.len()];
        loop {
            let parts = idx
                .iter()
                .enumerate()
                .map(|(k, &i)| factor_lists[k][i].clone())
                .collect();
            out.push(MultiIndexTuple { parts });
            // odometer increment, last factor fastest
            let mut k = factor_lists.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < factor_lists[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// The diagonal coordinate tuple `({i,...,i},...,{i,...,i})`.
    pub fn diagonal_tuple(&self, i: usize) -> Result<MultiIndexTuple> {
        let parts = self
            .n
            .iter()
            .zip(&self.d)
            .map(|(&n, &d)| MultiIndex::new(vec![i; d], n))
            .collect::<Result<Vec<_>>>()?;
        MultiIndexTuple::new(parts)
    }
}

/// Binomial coefficient in `u128`, `None` on overflow.
pub(crate) fn binom(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Enumerates `Lambda_{n,d}`, the sorted `d`-multisets over `{0,...,n}`, in
/// lexicographic order.
pub fn enumerate(n: usize, d: usize) -> Result<Vec<MultiIndex>> {
    if d == 0 {
        return Err(Error::DegenerateDegree);
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; d];
    loop {
        out.push(MultiIndex {
            entries: cur.clone(),
            n,
        });
        // next non-decreasing tuple: bump the rightmost entry below n and
        // level everything after it
        let Some(pos) = (0..d).rev().find(|&i| cur[i] < n) else {
            return Ok(out);
        };
        cur[pos] += 1;
        let v = cur[pos];
        for e in cur.iter_mut().skip(pos + 1) {
            *e = v;
        }
    }
}

/// Hamming distance `d - r`, with `r` the maximal matching of equal entries.
pub fn distance(a: &MultiIndex, b: &MultiIndex) -> Result<usize> {
    if a.n() != b.n() || a.d() != b.d() {
        return Err(Error::ShapeMismatch(format!(
            "multi-indices with (n,d)=({},{}) vs ({},{})",
            a.n(),
            a.d(),
            b.n(),
            b.d()
        )));
    }
    let (ma, mb) = (a.multiplicities(), b.multiplicities());
    let matched: usize = ma.iter().zip(&mb).map(|(&x, &y)| x.min(y)).sum();
    Ok(a.d() - matched)
}

/// Per-factor distances summed over the tuple.
pub fn tuple_distance(a: &MultiIndexTuple, b: &MultiIndexTuple) -> Result<usize> {
    if a.parts().len() != b.parts().len() {
        return Err(Error::ShapeMismatch(format!(
            "tuples with {} vs {} parts",
            a.parts().len(),
            b.parts().len()
        )));
    }
    a.parts()
        .iter()
        .zip(b.parts())
        .map(|(x, y)| distance(x, y))
        .sum()
}

/// All `J` in `Lambda` with `tuple_distance(center, J) <= radius`, in
/// enumeration order.
pub fn ball(center: &MultiIndexTuple, radius: usize, fmt: &Format) -> Result<Vec<MultiIndexTuple>> {
    if !center.matches(fmt) {
        return Err(Error::ShapeMismatch("ball center does not match format".into()));
    }
    let mut out = Vec::new();
    for j in fmt.index_tuples()? {
        if tuple_distance(center, &j)? <= radius {
            out.push(j);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(entries: &[usize], n: usize) -> MultiIndex {
        MultiIndex::new(entries.to_vec(), n).unwrap()
    }

    fn tup(parts: Vec<MultiIndex>) -> MultiIndexTuple {
        MultiIndexTuple::new(parts).unwrap()
    }

    /// Independent oracle: filter all d-tuples over {0..n} down to the
    /// sorted ones.
    fn brute_enumerate(n: usize, d: usize) -> Vec<Vec<usize>> {
        let mut all = vec![vec![]];
        for _ in 0..d {
            all = all
                .into_iter()
                .flat_map(|t: Vec<usize>| {
                    (0..=n).map(move |e| {
                        let mut t2 = t.clone();
                        t2.push(e);
                        t2
                    })
                })
                .collect();
        }
        all.retain(|t| t.windows(2).all(|w| w[0] <= w[1]));
        all.sort();
        all
    }

    #[test]
    fn enumerate_1_2() {
        let got = enumerate(1, 2).unwrap();
        let want = vec![mi(&[0, 0], 1), mi(&[0, 1], 1), mi(&[1, 1], 1)];
        assert_eq!(got, want);
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn enumerate_degree_one_is_coordinate_list() {
        let got = enumerate(2, 1).unwrap();
        assert_eq!(got, vec![mi(&[0], 2), mi(&[1], 2), mi(&[2], 2)]);
    }

    #[test]
    fn enumerate_2_2_against_brute_force() {
        let got = enumerate(2, 2).unwrap();
        assert_eq!(got.len(), 6);
        let brute = brute_enumerate(2, 2);
        let got_raw: Vec<Vec<usize>> = got.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(got_raw, brute);
    }

    #[test]
    fn enumerate_lengths_match_binomials() {
        for n in 1..=6 {
            for d in 1..=6 {
                let got = enumerate(n, d).unwrap();
                assert_eq!(got.len() as u128, binom(n + d, d).unwrap(), "n={n} d={d}");
                let brute = brute_enumerate(n, d);
                assert_eq!(got.len(), brute.len());
            }
        }
    }

    #[test]
    fn enumerate_rejects_zero_degree() {
        assert_eq!(enumerate(2, 0), Err(Error::DegenerateDegree));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&mi(&[0, 0], 1), &mi(&[0, 1], 1)).unwrap(), 1);
        let i = mi(&[0, 1], 2);
        assert_eq!(distance(&i, &i).unwrap(), 0);
        assert_eq!(distance(&mi(&[0, 0], 1), &mi(&[1, 1], 1)).unwrap(), 2);
    }

    #[test]
    fn distance_shape_mismatch() {
        assert!(distance(&mi(&[0, 0], 1), &mi(&[0], 1)).is_err());
        assert!(distance(&mi(&[0, 0], 1), &mi(&[0, 0], 2)).is_err());
    }

    #[test]
    fn tuple_distance_examples() {
        let a = tup(vec![mi(&[0, 0], 1), mi(&[0], 2)]);
        let b = tup(vec![mi(&[0, 1], 1), mi(&[1], 2)]);
        assert_eq!(tuple_distance(&a, &b).unwrap(), 2);
        assert_eq!(tuple_distance(&a, &a).unwrap(), 0);
        let c = tup(vec![mi(&[1, 1], 1), mi(&[1], 2)]);
        assert_eq!(tuple_distance(&a, &c).unwrap(), 3);
    }

    #[test]
    fn ball_radius_zero_is_center() {
        let fmt = Format::new(vec![1, 2], vec![2, 1]).unwrap();
        let center = fmt.diagonal_tuple(0).unwrap();
        assert_eq!(ball(&center, 0, &fmt).unwrap(), vec![center]);
    }

    #[test]
    fn ball_on_twisted_cubic_indices() {
        let fmt = Format::new(vec![1], vec![3]).unwrap();
        let center = tup(vec![mi(&[0, 0, 0], 1)]);
        let got = ball(&center, 1, &fmt).unwrap();
        assert_eq!(
            got,
            vec![tup(vec![mi(&[0, 0, 0], 1)]), tup(vec![mi(&[0, 0, 1], 1)])]
        );
    }

    #[test]
    fn ball_saturates_at_total_degree() {
        let fmt = Format::new(vec![1, 1], vec![2, 1]).unwrap();
        let center = fmt.diagonal_tuple(1).unwrap();
        let all = fmt.index_tuples().unwrap();
        assert_eq!(ball(&center, fmt.total_degree(), &fmt).unwrap(), all);
    }

    #[test]
    fn ball_size_independent_of_diagonal_center() {
        for (n, d) in [(vec![2], vec![3]), (vec![1, 2], vec![2, 2]), (vec![2, 2], vec![1, 3])] {
            let fmt = Format::new(n, d).unwrap();
            let min_n = *fmt.n().iter().min().unwrap();
            for radius in 0..=fmt.total_degree() {
                let sizes: Vec<usize> = (0..=min_n)
                    .map(|i| {
                        let c = fmt.diagonal_tuple(i).unwrap();
                        ball(&c, radius, &fmt).unwrap().len()
                    })
                    .collect();
                assert!(sizes.windows(2).all(|w| w[0] == w[1]), "{sizes:?}");
            }
        }
    }

    #[test]
    fn index_tuples_order_is_row_major() {
        let fmt = Format::new(vec![1, 1], vec![1, 1]).unwrap();
        let tuples = fmt.index_tuples().unwrap();
        let raw: Vec<Vec<usize>> = tuples
            .iter()
            .map(|t| t.parts().iter().flat_map(|p| p.entries().to_vec()).collect())
            .collect();
        assert_eq!(raw, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn format_validation() {
        assert!(Format::new(vec![], vec![]).is_err());
        assert!(Format::new(vec![1], vec![1, 2]).is_err());
        assert!(Format::new(vec![0], vec![1]).is_err());
        assert_eq!(Format::new(vec![1], vec![0]), Err(Error::DegenerateDegree));
    }

    #[test]
    fn ambient_dim_examples() {
        assert_eq!(Format::new(vec![2], vec![2]).unwrap().ambient_dim().unwrap(), 5);
        assert_eq!(
            Format::new(vec![1, 2], vec![1, 1]).unwrap().ambient_dim().unwrap(),
            5
        );
        assert_eq!(Format::new(vec![2], vec![6]).unwrap().ambient_dim().unwrap(), 27);
    }

    #[test]
    fn ambient_dim_overflow_is_reported() {
        let f = Format::new(vec![usize::MAX - 1], vec![2]).unwrap();
        assert!(matches!(f.ambient_dim(), Err(Error::Overflow(_))));
        let f = Format::new(vec![1000], vec![1000]).unwrap();
        assert!(matches!(f.ambient_dim(), Err(Error::Overflow(_))));
    }
}
