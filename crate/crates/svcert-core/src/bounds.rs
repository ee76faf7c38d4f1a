//! Closed-form defectiveness bounds and classifications.
//!
//! The degeneration count `h_m` drives everything: it measures how many
//! tangent spaces an order-`k` osculating space absorbs under
//! `m`-osculating regularity, through the binary expansion of `k + 1`.

use num::{BigUint, One, Zero};

use crate::error::{Error, Result};
use crate::multiindex::{binom, Format};

/// `h_m(k)`: write `k + 1 = 2^{l_1} + ... + 2^{l_a} + e` with
/// `l_1 > ... > l_a >= 1` and `e` in `{0, 1}`; the value is
/// `m^{l_1 - 1} + ... + m^{l_a - 1}`, and `h_m(0) = 0`.
pub fn h_m(m: u64, k: u64) -> BigUint {
    if k == 0 {
        return BigUint::zero();
    }
    let b = k + 1;
    let base = BigUint::from(m);
    let mut acc = BigUint::zero();
    for lambda in 1..=63 {
        if (b >> lambda) & 1 == 1 {
            acc += base.pow(lambda - 1);
        }
    }
    acc
}

/// Which statement a report realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    WdBound,
    TwdBound,
    OneWdClass,
    OneSThreshold,
}

/// A closed-form bound with its provenance.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Largest certified `h` (inclusive) for the `h`-bounds, or the `s`
    /// threshold for the `(1, s)` statements. Zero means vacuous.
    pub value: BigUint,
    /// Which branch fired, recorded verbatim.
    pub branch: String,
    /// Exact (if and only if) versus merely sufficient semantics.
    pub iff: bool,
    /// False when the format sits outside the hypotheses and the value was
    /// clamped to a vacuous bound.
    pub assumptions_ok: bool,
    /// `permutation[i]` is the original index of the `i`-th factor after
    /// the internal sort by `(n_i, d_i)`.
    pub permutation: Vec<usize>,
    /// Informational asymptotic form, when the statement has one.
    pub asymptotic: Option<BigUint>,
}

/// Sorts factor indices by `(n_i, d_i)`; the bound statements assume the
/// dimensions are non-decreasing, and breaking degree ties this way keeps
/// the minimal-degree hypothesis detectable.
pub(crate) fn sorted_permutation(fmt: &Format) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..fmt.r()).collect();
    perm.sort_by_key(|&i| (fmt.n()[i], fmt.d()[i]));
    perm
}

fn floor_log2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// Largest `h` such that the variety is certified not `h`-weakly defective
/// by the osculating degeneration argument. Two branches: order-`(d-1)`
/// jets always, order-`d` jets when the minimal degree sits on the
/// smallest factor with a gap of two to every other degree. The argument
/// needs at least two factors; single-factor formats report a vacuous
/// bound.
pub fn wd_bound(fmt: &Format) -> BoundReport {
    let perm = sorted_permutation(fmt);
    let n: Vec<usize> = perm.iter().map(|&i| fmt.n()[i]).collect();
    let d: Vec<usize> = perm.iter().map(|&i| fmt.d()[i]).collect();
    if fmt.r() < 2 {
        return BoundReport {
            kind: BoundKind::WdBound,
            value: BigUint::zero(),
            branch: "inapplicable: the degeneration argument needs at least two factors".into(),
            iff: false,
            assumptions_ok: false,
            permutation: perm,
            asymptotic: None,
        };
    }
    let m = (n[0] + 1) as u64;
    let d_min = *d.iter().min().unwrap() as u64;
    let branch1 = BigUint::from(m) * h_m(m, d_min - 1);
    let gap = d[0] as u64 == d_min && d[1..].iter().all(|&di| di as u64 >= d_min + 2);
    let branch2 = gap.then(|| BigUint::from(m) * h_m(m, d_min));
    let (value, branch) = match branch2 {
        Some(b2) if b2 >= branch1 => (
            b2,
            format!("order-{d_min} jets at {m} points (degree gap branch)"),
        ),
        _ => (
            branch1,
            format!("order-{} jets at {m} points", d_min - 1),
        ),
    };
    BoundReport {
        kind: BoundKind::WdBound,
        value,
        branch,
        iff: false,
        assumptions_ok: true,
        permutation: perm,
        asymptotic: Some(BigUint::from(m).pow(floor_log2(d_min))),
    }
}

/// Exact classification of 1-weak defectiveness: true iff some linearly
/// embedded factor has dimension strictly exceeding the sum of all the
/// others.
pub fn one_wd_classify(fmt: &Format) -> Result<bool> {
    if fmt.r() == 1 {
        return if fmt.d()[0] == 1 {
            Err(Error::DegenerateLinearSpace)
        } else {
            Ok(false)
        };
    }
    let total: usize = fmt.dim();
    Ok(fmt
        .n()
        .iter()
        .zip(fmt.d())
        .any(|(&nk, &dk)| dk == 1 && nk > total - nk))
}

/// Exact `(1, s)` threshold for the line-times-space shape: one factor a
/// line of degree `d`, the other linearly embedded of dimension `n`. The
/// variety is not `(1, s)`-tangentially weakly defective iff
/// `s <= d(n + 1)`.
pub fn line_factor_threshold(fmt: &Format) -> Option<BigUint> {
    if fmt.r() != 2 {
        return None;
    }
    for line in 0..2 {
        let partner = 1 - line;
        if fmt.n()[line] == 1 && fmt.d()[partner] == 1 {
            let d = fmt.d()[line] as u64;
            let n = fmt.n()[partner] as u64;
            return Some(BigUint::from(d) * BigUint::from(n + 1));
        }
    }
    None
}

/// Sufficient `(1, s)` bound for a linearly embedded last factor dominating
/// the rest: `prod_{i >= 2} binom(n_i + d_i, n_i) - n_r * sum_{i < r} n_i`,
/// clamped to zero when vacuous.
pub fn linear_last_threshold(fmt: &Format) -> Option<(BigUint, bool)> {
    if fmt.r() < 2 {
        return None;
    }
    let perm = sorted_permutation(fmt);
    let n: Vec<usize> = perm.iter().map(|&i| fmt.n()[i]).collect();
    let d: Vec<usize> = perm.iter().map(|&i| fmt.d()[i]).collect();
    let r = n.len();
    let rest: usize = n[..r - 1].iter().sum();
    if d[r - 1] != 1 || n[r - 1] <= rest {
        return None;
    }
    let mut prod = BigUint::one();
    for i in 1..r {
        prod *= BigUint::from(binom(n[i] + d[i], n[i]).expect("small binomial"));
    }
    let sub = BigUint::from(n[r - 1]) * BigUint::from(rest);
    if prod > sub {
        Some((prod - sub, true))
    } else {
        Some((BigUint::zero(), false))
    }
}

/// `(1, s)` threshold report, preferring the exact line-times-space shape
/// over the one-sided linear-last shape when both apply.
pub fn one_s_threshold(fmt: &Format) -> Result<BoundReport> {
    let perm = sorted_permutation(fmt);
    if let Some(value) = line_factor_threshold(fmt) {
        return Ok(BoundReport {
            kind: BoundKind::OneSThreshold,
            value,
            branch: "line of degree d times a linear space: threshold d(n+1), exact".into(),
            iff: true,
            assumptions_ok: true,
            permutation: perm,
            asymptotic: None,
        });
    }
    if let Some((value, ok)) = linear_last_threshold(fmt) {
        return Ok(BoundReport {
            kind: BoundKind::OneSThreshold,
            value,
            branch: "dominant linear factor: coordinate-section count bound, one-sided".into(),
            iff: false,
            assumptions_ok: ok,
            permutation: perm,
            asymptotic: None,
        });
    }
    Err(Error::ShapeNotCovered(
        "no (1, s) threshold statement covers this format".into(),
    ))
}

/// Largest certified `h` for tangential weak defectiveness of formats with
/// a linearly embedded line factor: `h_{n_2+1}(d) - 1` with
/// `d = min_{i >= 2} d_i - 1`. The minimum deliberately ranges over the
/// non-line factors; the report records this reading in its branch text.
pub fn twd_bound_linear_factor(fmt: &Format) -> Result<BoundReport> {
    let perm = sorted_permutation(fmt);
    if fmt.r() < 2 {
        return Err(Error::ShapeNotCovered(
            "a line factor bound needs at least two factors".into(),
        ));
    }
    let line = (0..fmt.r())
        .find(|&i| fmt.n()[i] == 1 && fmt.d()[i] == 1)
        .ok_or_else(|| {
            Error::ShapeNotCovered("no linearly embedded line factor present".into())
        })?;
    let rest: Vec<usize> = (0..fmt.r()).filter(|&i| i != line).collect();
    let n2 = rest.iter().map(|&i| fmt.n()[i]).min().unwrap();
    let d_rest = rest.iter().map(|&i| fmt.d()[i]).min().unwrap();
    let d = (d_rest - 1) as u64;
    let m = (n2 + 1) as u64;
    let h = h_m(m, d);
    let value = if h.is_zero() {
        BigUint::zero()
    } else {
        h - BigUint::one()
    };
    Ok(BoundReport {
        kind: BoundKind::TwdBound,
        value,
        branch: format!(
            "line factor degeneration with d = min over non-line factors of d_i - 1 = {d}"
        ),
        iff: false,
        assumptions_ok: true,
        permutation: perm,
        asymptotic: (d >= 1).then(|| BigUint::from(n2 as u64).pow(floor_log2(d))),
    })
}
