//! Contact-locus tangent tests: weak defectiveness, tangential weak
//! defectiveness, the interpolating `(h, s)` notion, and the osculating
//! certificate that converts high-order jet spans into bounds.
//!
//! Certification is one-directional. A sampled configuration is a special
//! member of the family of general ones, so a zero-dimensional contact bound
//! at a sample certifies the general configuration (semicontinuity), while
//! positive bounds after all retries are reported as `Inconclusive` evidence
//! only.

use num::{BigInt, BigRational, BigUint, One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::bounds::h_m;
use crate::embedding::{AffinePoint, EmbeddingData};
use crate::error::{Error, Result};
use crate::exactla::{ExactMatrix, Span};
use crate::multiindex::{tuple_distance, Format, MultiIndex, MultiIndexTuple};
use crate::terracini::{attempt_seeds, sample_config_with, terracini_matrix, PointConfig, DEFAULT_BOX};

/// Verdict of a contact-kernel certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactStatus {
    /// Some attempt produced all-zero kernel bounds, so the variety is
    /// certified not tangentially weakly defective at these parameters.
    NotTwdCertified,
    /// Every attempt left a positive bound somewhere. The observed
    /// dimensions are evidence, never a defectiveness proof.
    Inconclusive,
}

/// Record of one certification run.
#[derive(Debug, Clone)]
pub struct ContactReport {
    /// Projective dimension of the containing space that was tested.
    pub s: usize,
    /// Projective dimension of the tangent (or osculating) span of the
    /// decisive attempt.
    pub span_dim: usize,
    /// Per-point kernel dimension bounds of the decisive attempt.
    pub kernel_dims: Vec<usize>,
    /// Per-attempt, per-point kernel dimension bounds.
    pub all_kernel_dims: Vec<Vec<usize>>,
    /// Cone rank of the span on each attempt.
    pub span_ranks: Vec<usize>,
    pub status: ContactStatus,
    pub seed: u64,
    pub attempts: usize,
    /// Sampled points of the decisive attempt; `None` when the run used
    /// coordinate points.
    pub decisive: Option<PointConfig>,
}

impl ContactReport {
    pub fn certified(&self) -> bool {
        self.status == ContactStatus::NotTwdCertified
    }
}

/// Span of the tangent cones at all configuration points.
pub fn tangent_span(fmt: &Format, cfg: &PointConfig) -> Result<Span> {
    let data = EmbeddingData::new(fmt)?;
    Ok(Span::new(terracini_matrix(&data, cfg.points())?))
}

/// `N - s` independent forms cutting out a random `s`-dimensional linear
/// space containing the span: random integer elements of the annihilator of
/// `T`.
pub fn random_containing_space(span: &Span, s: usize, seed: u64) -> Result<ExactMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_containing_forms(span, s, &mut rng)
}

fn random_containing_forms(span: &Span, s: usize, rng: &mut ChaCha8Rng) -> Result<ExactMatrix> {
    let ambient = span.ambient_cols() - 1;
    if s + 1 < span.rank() || s > ambient {
        return Err(Error::InvalidDimension(format!(
            "s = {s} outside [{}, {ambient}]",
            span.rank() - 1
        )));
    }
    let count = ambient - s;
    if count == 0 {
        return Ok(ExactMatrix::empty(ambient + 1));
    }
    let ech = span.rows().echelon();
    let free = ech.num_free();
    for _ in 0..64 {
        let rows: Vec<Vec<BigInt>> = (0..count)
            .map(|_| {
                let vals: Vec<BigInt> = (0..free)
                    .map(|_| BigInt::from(rng.gen_range(-DEFAULT_BOX..=DEFAULT_BOX)))
                    .collect();
                span.rows().kernel_element(&ech, &vals)
            })
            .collect();
        let m = ExactMatrix::from_int_rows(rows)?;
        if m.rank() == count {
            return Ok(m);
        }
    }
    Err(Error::SamplingFailed("random containing space kept degenerating".into()))
}

/// For each configuration point, the dimension of the common kernel of the
/// Hessians of the defining forms: an exact upper bound for the local
/// contact-locus tangent dimension, so zero certifies no positive
/// dimensional contact component through that point. First-order tangency of
/// every form at every point is verified exactly first.
pub fn contact_kernel_dims(fmt: &Format, cfg: &PointConfig, forms: &ExactMatrix) -> Result<Vec<usize>> {
    let data = EmbeddingData::new(fmt)?;
    kernel_dims_inner(&data, cfg.points(), forms)
}

fn kernel_dims_inner(data: &EmbeddingData, points: &[AffinePoint], forms: &ExactMatrix) -> Result<Vec<usize>> {
    let mut dims = Vec::with_capacity(points.len());
    for (pi, p) in points.iter().enumerate() {
        let powers = data.power_table(p);
        let vars = data.chart_vars(p);
        let m = vars.len();
        if forms.nrows() == 0 {
            // no constraints: everything is contact
            dims.push(m);
            continue;
        }
        let value_row = data.derivative_row(&powers, &[]);
        let grad_rows: Vec<Vec<BigInt>> = vars.iter().map(|&v| data.derivative_row(&powers, &[(v, 1)])).collect();
        let mut hess_rows = Vec::with_capacity(m * (m + 1) / 2);
        for u in 0..m {
            for v in u..m {
                let alpha: Vec<(usize, u32)> = if u == v {
                    vec![(vars[u], 2)]
                } else {
                    vec![(vars[u], 1), (vars[v], 1)]
                };
                hess_rows.push(data.derivative_row(&powers, &alpha));
            }
        }
        let mut stacked = Vec::with_capacity(forms.nrows() * m);
        for k in 0..forms.nrows() {
            let form = forms.row(k);
            if !dot(form, &value_row).is_zero() {
                return Err(Error::NotTangent { point: pi, form: k });
            }
            for row in &grad_rows {
                if !dot(form, row).is_zero() {
                    return Err(Error::NotTangent { point: pi, form: k });
                }
            }
            let mut hess = vec![vec![BigRational::zero(); m]; m];
            let mut idx = 0;
            for u in 0..m {
                for v in u..m {
                    let e = dot(form, &hess_rows[idx]);
                    idx += 1;
                    hess[u][v] = e.clone();
                    hess[v][u] = e;
                }
            }
            stacked.extend(hess);
        }
        let rank = ExactMatrix::from_rows(stacked)?.rank();
        dims.push(m - rank);
    }
    Ok(dims)
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

/// How the containing space of each attempt is chosen.
enum SpaceChoice {
    /// A random space of the given projective dimension.
    Fixed(usize),
    /// The tangent span itself, cut out by its full annihilator.
    SpanDim,
    /// A random hyperplane (`s = N - 1`), rejecting spans that fill the
    /// ambient space.
    Hyperplane,
}

fn kernel_attempts(
    fmt: &Format,
    h: usize,
    choice: SpaceChoice,
    seed: u64,
    retries: usize,
    bound: i64,
) -> Result<ContactReport> {
    if retries == 0 {
        return Err(Error::InvalidDimension("retries must be at least 1".into()));
    }
    let ambient = fmt.ambient_dim()?;
    let data = EmbeddingData::new(fmt)?;
    let mut all_kernel_dims = Vec::new();
    let mut span_ranks = Vec::new();
    let mut decisive = None;
    let mut certified = false;
    for att_seed in attempt_seeds(seed, retries) {
        let mut rng = ChaCha8Rng::seed_from_u64(att_seed);
        let pts_seed = rng.next_u64();
        let cfg = sample_config_with(fmt, h, pts_seed, bound)?;
        let span = Span::new(terracini_matrix(&data, cfg.points())?);
        let span_dim = span.rank() - 1;
        let s = match choice {
            SpaceChoice::Fixed(s) => {
                if s + 1 < span.rank() || s + 1 > ambient {
                    return Err(Error::InvalidDimension(format!(
                        "s = {s} outside [{span_dim}, {}]",
                        ambient - 1
                    )));
                }
                s
            }
            SpaceChoice::SpanDim => span_dim,
            SpaceChoice::Hyperplane => {
                if span.rank() == ambient + 1 {
                    return Err(Error::SpanFillsSpace);
                }
                ambient - 1
            }
        };
        let forms = match choice {
            SpaceChoice::SpanDim => span.annihilator().clone(),
            _ => random_containing_forms(&span, s, &mut rng)?,
        };
        let dims = kernel_dims_inner(&data, cfg.points(), &forms)?;
        span_ranks.push(span.rank());
        let all_zero = dims.iter().all(|&d| d == 0);
        all_kernel_dims.push(dims.clone());
        decisive = Some((s, span_dim, dims, cfg));
        if all_zero {
            certified = true;
            break;
        }
    }
    let (s, span_dim, kernel_dims, cfg) = decisive.expect("at least one attempt ran");
    Ok(ContactReport {
        s,
        span_dim,
        kernel_dims,
        attempts: all_kernel_dims.len(),
        all_kernel_dims,
        span_ranks,
        status: if certified {
            ContactStatus::NotTwdCertified
        } else {
            ContactStatus::Inconclusive
        },
        seed,
        decisive: Some(cfg),
    })
}

/// `(h, s)`-tangential weak defectiveness test: random points, a random
/// `s`-space containing their tangent span, and the kernel bound at every
/// point.
pub fn hs_twd_check(fmt: &Format, h: usize, s: usize, seed: u64, retries: usize) -> Result<ContactReport> {
    hs_twd_check_with(fmt, h, s, seed, retries, DEFAULT_BOX)
}

pub fn hs_twd_check_with(
    fmt: &Format,
    h: usize,
    s: usize,
    seed: u64,
    retries: usize,
    bound: i64,
) -> Result<ContactReport> {
    let ambient = fmt.ambient_dim()?;
    if s >= ambient {
        return Err(Error::InvalidDimension(format!(
            "s = {s} admits no certification; it must be at most N - 1 = {}",
            ambient - 1
        )));
    }
    kernel_attempts(fmt, h, SpaceChoice::Fixed(s), seed, retries, bound)
}

/// Weak defectiveness test: the containing space is a random tangent
/// hyperplane (`s = N - 1`).
pub fn wd_check(fmt: &Format, h: usize, seed: u64, retries: usize) -> Result<ContactReport> {
    wd_check_with(fmt, h, seed, retries, DEFAULT_BOX)
}

pub fn wd_check_with(fmt: &Format, h: usize, seed: u64, retries: usize, bound: i64) -> Result<ContactReport> {
    kernel_attempts(fmt, h, SpaceChoice::Hyperplane, seed, retries, bound)
}

/// Tangential weak defectiveness test: the containing space is the tangent
/// span itself, with no forms beyond its annihilator.
pub fn twd_check(fmt: &Format, h: usize, seed: u64, retries: usize) -> Result<ContactReport> {
    twd_check_with(fmt, h, seed, retries, DEFAULT_BOX)
}

pub fn twd_check_with(fmt: &Format, h: usize, seed: u64, retries: usize, bound: i64) -> Result<ContactReport> {
    kernel_attempts(fmt, h, SpaceChoice::SpanDim, seed, retries, bound)
}

/// Result of [`osculating_hypothesis_check`].
#[derive(Debug, Clone)]
pub struct OscReport {
    pub contact: ContactReport,
    /// On success, the number of tangent spaces the certified osculating
    /// configuration degenerates: the variety is not
    /// `(certified_h, s)`-tangentially weakly defective.
    pub certified_h: Option<BigUint>,
}

/// Checks the osculating-span hypothesis: a space of dimension `s`
/// containing the order-`k_j` osculating spans at `l` points whose contact
/// locus through those points is zero dimensional. On success the variety is
/// not `(h, s)`-tangentially weakly defective for `h = sum h_m(k_j)` with
/// `m = min(n_i) + 1`.
///
/// Order-one configurations run the sampled-point kernel test. Higher orders
/// pin the points at coordinate points, where the osculating spans are
/// coordinate subspaces; the containing space degenerates (for each point in
/// turn) to an explicitly constructed tangent space section whose singular
/// system is triangular enough to certify an isolated singularity exactly.
/// The Hessian test cannot replace this: a space containing a second-order
/// jet has identically vanishing Hessians there.
pub fn osculating_hypothesis_check(
    fmt: &Format,
    orders: &[usize],
    s: usize,
    seed: u64,
    retries: usize,
) -> Result<OscReport> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(Error::InvalidDimension("orders must be positive integers".into()));
    }
    if retries == 0 {
        return Err(Error::InvalidDimension("retries must be at least 1".into()));
    }
    let n1 = *fmt.n().iter().min().unwrap();
    let reg = (n1 + 1) as u64;
    let certified_h_value = || -> BigUint {
        orders
            .iter()
            .map(|&k| h_m(reg, k as u64))
            .fold(BigUint::zero(), |a, b| a + b)
    };

    if orders.iter().all(|&k| k == 1) {
        let contact = hs_twd_check(fmt, orders.len(), s, seed, retries)?;
        let certified_h = contact.certified().then(certified_h_value);
        return Ok(OscReport {
            contact,
            certified_h,
        });
    }

    let ambient = fmt.ambient_dim()?;
    let l = orders.len();
    if l > n1 + 1 {
        return Err(Error::InvalidDimension(format!(
            "at most {} coordinate points are available for higher-order configurations",
            n1 + 1
        )));
    }
    let centers: Vec<MultiIndexTuple> = (0..l).map(|i| fmt.diagonal_tuple(i)).collect::<Result<_>>()?;
    let tuples = fmt.index_tuples()?;
    // distance of every ambient index to every center
    let dist: Vec<Vec<usize>> = tuples
        .iter()
        .map(|t| centers.iter().map(|c| tuple_distance(c, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let in_union = |row: &Vec<usize>| row.iter().zip(orders).any(|(&d, &k)| d <= k);
    let support: Vec<usize> = (0..tuples.len()).filter(|&j| in_union(&dist[j])).collect();
    let span_rank = support.len();
    let span_dim = span_rank - 1;
    if s < span_dim || s >= ambient {
        return Err(Error::InvalidDimension(format!(
            "s = {s} outside [{span_dim}, {}]",
            ambient - 1
        )));
    }

    let excluded = |candidate: &MultiIndexTuple| -> Result<bool> {
        for (c, &k) in centers.iter().zip(orders) {
            if tuple_distance(c, candidate)? <= k {
                return Ok(false);
            }
        }
        Ok(true)
    };

    // Deterministic per-point certificates from the special sections.
    let data = EmbeddingData::new(fmt)?;
    let m = fmt.dim();
    let mut static_bounds: Vec<Option<usize>> = Vec::with_capacity(l);
    for (i, &k) in orders.iter().enumerate() {
        let mut best: Option<usize> = None;
        for candidate in special_sections(fmt, i, k) {
            let mut ok = true;
            for t in &candidate {
                if !excluded(t)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let bound = singular_system_bound(fmt, i, &candidate, m);
            best = Some(best.map_or(bound, |b: usize| b.min(bound)));
            if bound == 0 {
                break;
            }
        }
        static_bounds.push(best);
    }

    // Points with no usable section fall back to the sampled-space kernel
    // test when the order is one; otherwise their bound stays at dim X.
    let needs_fallback: Vec<usize> = (0..l)
        .filter(|&i| static_bounds[i].is_none_or(|b| b > 0) && orders[i] == 1)
        .collect();
    let span = span_from_support(&support, tuples.len());
    let points: Vec<AffinePoint> = centers
        .iter()
        .map(|c| AffinePoint::coordinate_point(fmt, c))
        .collect::<Result<_>>()?;

    let attempts = if needs_fallback.is_empty() { 1 } else { retries };
    let static_base: Vec<usize> = (0..l).map(|i| static_bounds[i].unwrap_or(m)).collect();
    let mut best_bounds = static_base.clone();
    let mut all_kernel_dims = Vec::new();
    let mut span_ranks = Vec::new();
    for att_seed in attempt_seeds(seed, attempts) {
        // each row is independent evidence: the deterministic section
        // bounds plus this attempt's sampled kernels
        let mut attempt_dims = static_base.clone();
        if !needs_fallback.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(att_seed);
            let forms = random_containing_forms(&span, s, &mut rng)?;
            let dims = kernel_dims_inner(&data, &points, &forms)?;
            for &i in &needs_fallback {
                attempt_dims[i] = attempt_dims[i].min(dims[i]);
            }
        }
        span_ranks.push(span_rank);
        all_kernel_dims.push(attempt_dims.clone());
        for i in 0..l {
            best_bounds[i] = best_bounds[i].min(attempt_dims[i]);
        }
        if best_bounds.iter().all(|&b| b == 0) {
            break;
        }
    }
    let certified = best_bounds.iter().all(|&b| b == 0);
    let contact = ContactReport {
        s,
        span_dim,
        kernel_dims: best_bounds,
        attempts: all_kernel_dims.len(),
        all_kernel_dims,
        span_ranks,
        status: if certified {
            ContactStatus::NotTwdCertified
        } else {
            ContactStatus::Inconclusive
        },
        seed,
        decisive: None,
    };
    let certified_h = certified.then(certified_h_value);
    Ok(OscReport {
        contact,
        certified_h,
    })
}

fn span_from_support(support: &[usize], ncols: usize) -> Span {
    let rows = support
        .iter()
        .map(|&j| {
            let mut row = vec![BigInt::zero(); ncols];
            row[j] = BigInt::one();
            row
        })
        .collect();
    Span::new(ExactMatrix::from_int_rows(rows).expect("unit rows are rectangular"))
}

/// Candidate index sets whose coordinate sum cuts the variety, locally at
/// the `i`-th coordinate point, in a hypersurface with a combinatorially
/// certifiable isolated singularity. Two families are known:
/// - pure powers `X_{l,j}^{d_l}` (one factor swapped to another index),
///   usable whenever at least two factors are present and every degree is
///   at least two;
/// - the mixed family pairing the minimal-degree factor with a larger one,
///   usable under a degree gap of at least two.
fn special_sections(fmt: &Format, i: usize, order: usize) -> Vec<Vec<MultiIndexTuple>> {
    let r = fmt.r();
    let mut out = Vec::new();
    if r < 2 {
        return out;
    }
    let d_min = *fmt.d().iter().min().unwrap();
    if d_min >= 2 && order < d_min {
        let mut set = Vec::new();
        for l in 0..r {
            for j in 0..=fmt.n()[l] {
                if j == i {
                    continue;
                }
                set.push(swap_factor_tuple(fmt, i, l, j, None));
            }
        }
        out.push(set);
    }
    // degree-gap family: factor f1 of minimal degree (smallest dimension
    // among ties), every other degree at least d_{f1} + 2, partner factor
    // with dimension at least n_{f1}
    let f1 = (0..r)
        .min_by_key(|&l| (fmt.d()[l], fmt.n()[l]))
        .expect("nonempty format");
    let d1 = fmt.d()[f1];
    let gap_ok = (0..r).all(|l| l == f1 || fmt.d()[l] >= d1 + 2);
    let f2 = (0..r)
        .filter(|&l| l != f1 && fmt.n()[l] >= fmt.n()[f1])
        .max_by_key(|&l| fmt.n()[l]);
    if gap_ok && order == d1 {
        if let Some(f2) = f2 {
            let mut set = Vec::new();
            for l in 0..r {
                if l == f1 {
                    continue;
                }
                for j in 0..=fmt.n()[l] {
                    if j == i {
                        continue;
                    }
                    // one entry i, the rest j, in factor l
                    set.push(swap_factor_tuple(fmt, i, l, j, Some(i)));
                }
            }
            for j in 0..=fmt.n()[f1] {
                if j == i {
                    continue;
                }
                // factor f1 fully at j, factor f2 with a single j
                set.push(paired_tuple(fmt, i, f1, f2, j));
            }
            out.push(set);
        }
    }
    out
}

/// Tuple equal to the center except factor `l`, which is `{j,...,j}` or
/// `{extra, j,...,j}`.
fn swap_factor_tuple(fmt: &Format, i: usize, l: usize, j: usize, extra: Option<usize>) -> MultiIndexTuple {
    let parts = (0..fmt.r())
        .map(|k| {
            let d = fmt.d()[k];
            let entries = if k == l {
                match extra {
                    Some(e) => {
                        let mut v = vec![j; d - 1];
                        v.push(e);
                        v
                    }
                    None => vec![j; d],
                }
            } else {
                vec![i; d]
            };
            MultiIndex::new(entries, fmt.n()[k]).expect("valid special index")
        })
        .collect();
    MultiIndexTuple::new(parts).expect("nonempty tuple")
}

/// Tuple with factor `f1` fully at `j`, factor `f2` at `{j, i, ..., i}`, and
/// every other factor at the center.
fn paired_tuple(fmt: &Format, i: usize, f1: usize, f2: usize, j: usize) -> MultiIndexTuple {
    let parts = (0..fmt.r())
        .map(|k| {
            let d = fmt.d()[k];
            let entries = if k == f1 {
                vec![j; d]
            } else if k == f2 {
                let mut v = vec![i; d - 1];
                v.push(j);
                v
            } else {
                vec![i; d]
            };
            MultiIndex::new(entries, fmt.n()[k]).expect("valid special index")
        })
        .collect();
    MultiIndexTuple::new(parts).expect("nonempty tuple")
}

/// Upper bound for the dimension at the origin of the singular locus of the
/// chart-local equation `F = sum of the section's monomials`: the number of
/// chart variables the triangular solver cannot force to zero.
fn singular_system_bound(fmt: &Format, i: usize, section: &[MultiIndexTuple], m: usize) -> usize {
    // local exponents: variable (l, a) with a != i gets the multiplicity of
    // a in part l; the chart coordinates (value one) drop out
    let mut var_ids = Vec::new();
    for (l, &n) in fmt.n().iter().enumerate() {
        for a in 0..=n {
            if a != i {
                var_ids.push((l, a));
            }
        }
    }
    debug_assert_eq!(var_ids.len(), m);
    let var_index = |l: usize, a: usize| var_ids.iter().position(|&(pl, pa)| pl == l && pa == a);
    let monomials: Vec<Vec<(usize, u32)>> = section
        .iter()
        .map(|t| {
            let mut exps: Vec<(usize, u32)> = Vec::new();
            for (l, part) in t.parts().iter().enumerate() {
                for (a, &mult) in part.multiplicities().iter().enumerate() {
                    if a != i && mult > 0 {
                        exps.push((var_index(l, a).expect("off-chart variable"), mult as u32));
                    }
                }
            }
            exps.sort_unstable();
            exps
        })
        .collect();
    // gradient system of F
    let mut equations: Vec<Vec<Monomial>> = Vec::new();
    for v in 0..m {
        let mut eq = Vec::new();
        for mono in &monomials {
            if let Some(&(_, e)) = mono.iter().find(|&&(w, _)| w == v) {
                let mut deriv: Vec<(usize, u32)> = mono
                    .iter()
                    .filter(|&&(w, ex)| w != v || ex > 1)
                    .map(|&(w, ex)| if w == v { (w, ex - 1) } else { (w, ex) })
                    .collect();
                deriv.sort_unstable();
                eq.push(Monomial {
                    coeff: e as i64,
                    exps: deriv,
                });
            }
        }
        equations.push(eq);
    }
    let zeroed = triangular_zero_set(&equations);
    m - zeroed.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Monomial {
    coeff: i64,
    exps: Vec<(usize, u32)>,
}

/// Variables provably zero on the common zero locus of the equations.
/// Rules, applied to a fixpoint after discarding monomials containing
/// already-zeroed variables:
/// - a single-monomial equation in one variable forces that variable to
///   zero;
/// - a single mixed monomial `a^x b^y` together with a two-term equation
///   `c1 a^p + c2 b^q` forces both: either factor of the monomial vanishes,
///   and the binomial then kills the other.
fn triangular_zero_set(equations: &[Vec<Monomial>]) -> BTreeSet<usize> {
    let mut zeroed: BTreeSet<usize> = BTreeSet::new();
    loop {
        let reduced: Vec<Vec<Monomial>> = equations
            .iter()
            .map(|eq| reduce_equation(eq, &zeroed))
            .collect();
        let mut progress = false;
        for eq in &reduced {
            if eq.len() == 1 && eq[0].exps.len() == 1 && eq[0].coeff != 0 {
                let v = eq[0].exps[0].0;
                if zeroed.insert(v) {
                    progress = true;
                }
            }
        }
        if !progress {
            'pair: for e1 in &reduced {
                if e1.len() != 1 || e1[0].exps.len() != 2 || e1[0].coeff == 0 {
                    continue;
                }
                let (a, b) = (e1[0].exps[0].0, e1[0].exps[1].0);
                if zeroed.contains(&a) && zeroed.contains(&b) {
                    continue;
                }
                for e2 in &reduced {
                    if e2.len() != 2 {
                        continue;
                    }
                    let pure_var = |mn: &Monomial| {
                        (mn.exps.len() == 1 && mn.coeff != 0).then(|| mn.exps[0].0)
                    };
                    let (Some(x), Some(y)) = (pure_var(&e2[0]), pure_var(&e2[1])) else {
                        continue;
                    };
                    if (x, y) == (a, b) || (x, y) == (b, a) {
                        zeroed.insert(a);
                        zeroed.insert(b);
                        progress = true;
                        break 'pair;
                    }
                }
            }
        }
        if !progress {
            return zeroed;
        }
    }
}

fn reduce_equation(eq: &[Monomial], zeroed: &BTreeSet<usize>) -> Vec<Monomial> {
    let mut kept: Vec<Monomial> = eq
        .iter()
        .filter(|mn| mn.exps.iter().all(|(v, _)| !zeroed.contains(v)))
        .cloned()
        .collect();
    kept.sort_by(|x, y| x.exps.cmp(&y.exps));
    let mut out: Vec<Monomial> = Vec::new();
    for mn in kept {
        if let Some(last) = out.last_mut() {
            if last.exps == mn.exps {
                last.coeff += mn.coeff;
                continue;
            }
        }
        out.push(mn);
    }
    out.retain(|mn| mn.coeff != 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::osculating_cone_basis;
    use crate::terracini::sample_config;

    fn fmt(n: &[usize], d: &[usize]) -> Format {
        Format::new(n.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn tangent_span_single_point_matches_jets() {
        let f = fmt(&[1, 2], &[2, 1]);
        let cfg = sample_config(&f, 1, 3).unwrap();
        let span = tangent_span(&f, &cfg).unwrap();
        let jets = osculating_cone_basis(&f, &cfg.points()[0], 1).unwrap();
        assert!(span.same_space(&jets).unwrap());
    }

    #[test]
    fn tangent_span_of_nine_points_on_sextic_veronese() {
        let f = fmt(&[2], &[6]);
        let cfg = sample_config(&f, 9, 0).unwrap();
        let span = tangent_span(&f, &cfg).unwrap();
        assert_eq!(span.rank(), 27);
    }

    #[test]
    fn tangent_span_of_two_points_on_twisted_cubic_fills() {
        let f = fmt(&[1], &[3]);
        let cfg = sample_config(&f, 2, 0).unwrap();
        assert_eq!(tangent_span(&f, &cfg).unwrap().rank(), 4);
    }

    #[test]
    fn containing_space_extremes() {
        let f = fmt(&[1], &[2]);
        let cfg = sample_config(&f, 1, 5).unwrap();
        let span = tangent_span(&f, &cfg).unwrap();
        let n = f.ambient_dim().unwrap();
        let all = random_containing_space(&span, n, 7).unwrap();
        assert_eq!(all.nrows(), 0);
        let tight = random_containing_space(&span, span.rank() - 1, 7).unwrap();
        let tight_span = Span::new(tight);
        assert!(tight_span.same_space(&Span::new(span.annihilator().clone())).unwrap());
        let hyp = random_containing_space(&span, n - 1, 7).unwrap();
        assert_eq!(hyp.nrows(), 1);
        assert!(random_containing_space(&span, 0, 7).is_err());
    }

    #[test]
    fn kernel_dims_on_weakly_defective_sextic() {
        let f = fmt(&[2], &[6]);
        let rep = wd_check(&f, 9, 0, 2).unwrap();
        assert_eq!(rep.status, ContactStatus::Inconclusive);
        for attempt in &rep.all_kernel_dims {
            assert!(attempt.iter().all(|&d| d >= 1), "{attempt:?}");
        }
    }

    #[test]
    fn sharp_threshold_on_line_times_plane() {
        // n = (1,2), d = (2,1): certification works exactly up to s = 6
        let f = fmt(&[1, 2], &[2, 1]);
        let ok = hs_twd_check(&f, 1, 6, 0, 3).unwrap();
        assert_eq!(ok.status, ContactStatus::NotTwdCertified);
        assert!(ok.kernel_dims.iter().all(|&d| d == 0));
        let bad = hs_twd_check(&f, 1, 7, 0, 3).unwrap();
        assert_eq!(bad.status, ContactStatus::Inconclusive);
        assert!(bad.kernel_dims.iter().all(|&d| d >= 1));
    }

    #[test]
    fn hs_rejects_full_space() {
        let f = fmt(&[1, 2], &[2, 1]);
        let n = f.ambient_dim().unwrap();
        assert!(matches!(
            hs_twd_check(&f, 1, n, 0, 1),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn weakly_defective_segre_reports_kernel_one() {
        let f = fmt(&[1, 2], &[1, 1]);
        let rep = hs_twd_check(&f, 1, 4, 0, 3).unwrap();
        assert_eq!(rep.status, ContactStatus::Inconclusive);
        assert_eq!(rep.kernel_dims, vec![1]);
    }

    #[test]
    fn tangent_space_itself_certifies_on_smooth_formats() {
        for (n, d) in [(vec![2], vec![2]), (vec![1, 1], vec![2, 1]), (vec![1], vec![3])] {
            let f = Format::new(n, d).unwrap();
            let rep = hs_twd_check(&f, 1, f.dim(), 0, 3).unwrap();
            assert_eq!(rep.status, ContactStatus::NotTwdCertified);
        }
    }

    #[test]
    fn wd_on_veronese_surface_single_point_certifies() {
        let f = fmt(&[2], &[2]);
        let rep = wd_check(&f, 1, 0, 3).unwrap();
        assert_eq!(rep.status, ContactStatus::NotTwdCertified);
    }

    #[test]
    fn wd_rejects_filling_span() {
        let f = fmt(&[2], &[2]);
        assert!(matches!(wd_check(&f, 3, 0, 1), Err(Error::SpanFillsSpace)));
    }

    #[test]
    fn twd_on_defective_surface_is_inconclusive() {
        let f = fmt(&[2], &[2]);
        let rep = twd_check(&f, 2, 0, 2).unwrap();
        assert_eq!(rep.status, ContactStatus::Inconclusive);
        assert!(rep.kernel_dims.iter().all(|&d| d >= 1));
    }

    #[test]
    fn twd_single_point_certifies() {
        let f = fmt(&[1, 2], &[2, 2]);
        let rep = twd_check(&f, 1, 0, 2).unwrap();
        assert_eq!(rep.status, ContactStatus::NotTwdCertified);
    }

    #[test]
    fn not_tangent_detected() {
        let f = fmt(&[1], &[2]);
        let cfg = sample_config(&f, 1, 1).unwrap();
        let form = ExactMatrix::from_int_rows(vec![vec![
            BigInt::from(1),
            BigInt::from(0),
            BigInt::from(0),
        ]])
        .unwrap();
        assert!(matches!(
            contact_kernel_dims(&f, &cfg, &form),
            Err(Error::NotTangent { .. })
        ));
    }

    #[test]
    fn osc_pure_power_sections() {
        let f = fmt(&[2, 2], &[3, 3]);
        let n = f.ambient_dim().unwrap();
        let rep = osculating_hypothesis_check(&f, &[2, 2, 2], n - 1, 0, 1).unwrap();
        assert!(rep.contact.certified());
        assert_eq!(rep.certified_h, Some(BigUint::from(3u32)));
    }

    #[test]
    fn osc_degree_gap_sections() {
        let f = fmt(&[1, 1], &[2, 4]);
        let n = f.ambient_dim().unwrap();
        let rep = osculating_hypothesis_check(&f, &[2, 2], n - 1, 0, 1).unwrap();
        assert!(rep.contact.certified());
        assert_eq!(rep.certified_h, Some(BigUint::from(2u32)));
    }

    #[test]
    fn osc_order_one_reduces_to_twd() {
        let f = fmt(&[1, 2], &[2, 2]);
        let rep = osculating_hypothesis_check(&f, &[1], f.dim(), 0, 2).unwrap();
        assert!(rep.contact.certified());
        assert_eq!(rep.certified_h, Some(BigUint::one()));
        let twd = twd_check(&f, 1, 0, 2).unwrap();
        assert!(twd.certified());
    }

    #[test]
    fn osc_mixed_orders_combine_static_and_sampled_certificates() {
        // order 1 at the first point (sampled-space kernel fallback), order
        // 2 at the second (degree-gap section)
        let f = fmt(&[1, 1], &[2, 4]);
        let n = f.ambient_dim().unwrap();
        let rep = osculating_hypothesis_check(&f, &[1, 2], n - 1, 0, 3).unwrap();
        assert!(rep.contact.certified());
        assert_eq!(rep.certified_h, Some(BigUint::from(2u32)));
    }

    #[test]
    fn osc_rejects_unattainable_orders() {
        let f = fmt(&[1, 1], &[2, 4]);
        assert!(osculating_hypothesis_check(&f, &[], 5, 0, 1).is_err());
        assert!(osculating_hypothesis_check(&f, &[0], 5, 0, 1).is_err());
        // three clustered points but min(n) + 1 = 2
        let n = f.ambient_dim().unwrap();
        assert!(osculating_hypothesis_check(&f, &[2, 2, 2], n - 1, 0, 1).is_err());
    }

    #[test]
    fn triangular_solver_handles_pure_and_paired_systems() {
        // {3a^2, 3b^2} -> both zero
        let eqs = vec![
            vec![Monomial {
                coeff: 3,
                exps: vec![(0, 2)],
            }],
            vec![Monomial {
                coeff: 3,
                exps: vec![(1, 2)],
            }],
        ];
        assert_eq!(triangular_zero_set(&eqs).len(), 2);
        // {2ab, 3b^2 + a^2} -> both zero through the pair rule
        let eqs = vec![
            vec![Monomial {
                coeff: 2,
                exps: vec![(0, 1), (1, 1)],
            }],
            vec![
                Monomial {
                    coeff: 3,
                    exps: vec![(1, 2)],
                },
                Monomial {
                    coeff: 1,
                    exps: vec![(0, 2)],
                },
            ],
        ];
        assert_eq!(triangular_zero_set(&eqs).len(), 2);
        // {ab} alone resolves nothing
        let eqs = vec![vec![Monomial {
            coeff: 1,
            exps: vec![(0, 1), (1, 1)],
        }]];
        assert!(triangular_zero_set(&eqs).is_empty());
    }
}
