//! Secant-variety dimensions through tangent-span ranks and the resulting
//! defectiveness verdicts.
//!
//! The tangent space to the h-secant variety at a general point of the span
//! of h points is the span of the h tangent spaces, so its dimension is a
//! stacked Jacobian rank. Ranks at special (sampled) points only bound the
//! generic rank from below; a sample attaining the expected rank therefore
//! certifies non-defectiveness, while deficient samples never prove a
//! defect.

use num::{BigInt, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{AffinePoint, EmbeddingData};
use crate::error::{Error, Result};
use crate::exactla::ExactMatrix;
use crate::multiindex::Format;

/// Default half-width of the integer sampling box.
pub const DEFAULT_BOX: i64 = 50;
/// Default number of independent sampling attempts.
pub const DEFAULT_RETRIES: usize = 3;

/// A sampled configuration of points, replayable from its seed.
#[derive(Debug, Clone)]
pub struct PointConfig {
    points: Vec<AffinePoint>,
    seed: u64,
    bound: i64,
}

impl PointConfig {
    /// Wraps explicitly chosen points (seed and bound are recorded as zero).
    pub fn from_points(points: Vec<AffinePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDimension("a configuration needs at least one point".into()));
        }
        Ok(Self {
            points,
            seed: 0,
            bound: 0,
        })
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Sub-configuration on the first `h` points, for nesting arguments.
    pub fn prefix(&self, h: usize) -> PointConfig {
        PointConfig {
            points: self.points[..h].to_vec(),
            seed: self.seed,
            bound: self.bound,
        }
    }
}

/// Expected dimension `min{n h + h - 1, N}` of the h-secant variety.
pub fn expected_secant_dim(fmt: &Format, h: usize) -> Result<usize> {
    if h == 0 {
        return Err(Error::InvalidDimension("h must be at least 1".into()));
    }
    let n = fmt.dim();
    let ambient = fmt.ambient_dim()?;
    let unconstrained = n
        .checked_mul(h)
        .and_then(|x| x.checked_add(h - 1))
        .ok_or_else(|| Error::Overflow("expected secant dimension".into()))?;
    Ok(unconstrained.min(ambient))
}

/// Samples `h` points with integer coordinates in `[-bound, bound]`,
/// deterministically from the seed. Factor vectors are resampled until
/// nonzero, and whole configurations until the embedded images are pairwise
/// independent.
pub fn sample_config(fmt: &Format, h: usize, seed: u64) -> Result<PointConfig> {
    sample_config_with(fmt, h, seed, DEFAULT_BOX)
}

pub fn sample_config_with(fmt: &Format, h: usize, seed: u64, bound: i64) -> Result<PointConfig> {
    if h == 0 {
        return Err(Error::InvalidDimension("h must be at least 1".into()));
    }
    if bound < 1 {
        return Err(Error::SamplingFailed("sampling box must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = EmbeddingData::new(fmt)?;
    for _ in 0..64 {
        let points: Vec<AffinePoint> = (0..h)
            .map(|_| sample_point(fmt, &mut rng, bound))
            .collect::<Result<_>>()?;
        if pairwise_independent(&data, &points)? {
            return Ok(PointConfig {
                points,
                seed,
                bound,
            });
        }
    }
    Err(Error::SamplingFailed(
        "could not sample pairwise independent points".into(),
    ))
}

fn sample_point(fmt: &Format, rng: &mut ChaCha8Rng, bound: i64) -> Result<AffinePoint> {
    let factors = fmt
        .n()
        .iter()
        .map(|&n| {
            loop {
                let v: Vec<BigInt> = (0..=n)
                    .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                    .collect();
                if v.iter().any(|x| !x.is_zero()) {
                    return v;
                }
            }
        })
        .collect();
    AffinePoint::new(fmt, factors)
}

fn pairwise_independent(data: &EmbeddingData, points: &[AffinePoint]) -> Result<bool> {
    let images: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| data.derivative_row(&data.power_table(p), &[]))
        .collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let pair = ExactMatrix::from_int_rows(vec![images[i].clone(), images[j].clone()])?;
            if pair.rank() < 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rank of the stacked tangent-cone bases of all configuration points: a
/// matrix with `h * sum(n_i + 1)` rows and `N + 1` columns. The value minus
/// one is a certified lower bound for the secant dimension.
pub fn terracini_rank(fmt: &Format, cfg: &PointConfig) -> Result<usize> {
    let data = EmbeddingData::new(fmt)?;
    Ok(terracini_matrix(&data, cfg.points())?.rank())
}

pub(crate) fn terracini_matrix(data: &EmbeddingData, points: &[AffinePoint]) -> Result<ExactMatrix> {
    let mut rows = Vec::new();
    for p in points {
        rows.extend(data.tangent_rows(p));
    }
    ExactMatrix::from_int_rows(rows)
}

/// Outcome of a secant-dimension check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecantStatus {
    /// Some sample attained the expected rank; by semicontinuity the general
    /// configuration does too.
    NonDefectiveCertified,
    /// Every sample fell short. This suggests a defect but proves nothing:
    /// sampled points only bound the generic rank from below.
    DefectSuggested,
}

/// Verdict of [`secant_defect_check`].
#[derive(Debug, Clone)]
pub struct SecantVerdict {
    pub expected: usize,
    pub computed_lower_bound: usize,
    pub status: SecantStatus,
    pub defect: usize,
    pub attempts: usize,
    /// Rank observed on each attempt, in order.
    pub ranks: Vec<usize>,
    /// The configuration of the decisive attempt (certifying, or last).
    pub decisive: PointConfig,
}

/// Runs up to `retries` independent samples and reports the best rank seen.
pub fn secant_defect_check(fmt: &Format, h: usize, seed: u64, retries: usize) -> Result<SecantVerdict> {
    secant_defect_check_with(fmt, h, seed, retries, DEFAULT_BOX)
}

pub fn secant_defect_check_with(
    fmt: &Format,
    h: usize,
    seed: u64,
    retries: usize,
    bound: i64,
) -> Result<SecantVerdict> {
    if retries == 0 {
        return Err(Error::InvalidDimension("retries must be at least 1".into()));
    }
    let expected = expected_secant_dim(fmt, h)?;
    let target_rank = expected + 1;
    let data = EmbeddingData::new(fmt)?;
    let seeds = attempt_seeds(seed, retries);
    let mut ranks = Vec::new();
    let mut best: Option<(usize, PointConfig)> = None;
    for s in seeds {
        let cfg = sample_config_with(fmt, h, s, bound)?;
        let rank = terracini_matrix(&data, cfg.points())?.rank();
        ranks.push(rank);
        if best.as_ref().map(|(r, _)| rank > *r).unwrap_or(true) {
            best = Some((rank, cfg));
        }
        if rank == target_rank {
            break;
        }
    }
    let (best_rank, decisive) = best.expect("at least one attempt ran");
    let status = if best_rank == target_rank {
        SecantStatus::NonDefectiveCertified
    } else {
        SecantStatus::DefectSuggested
    };
    Ok(SecantVerdict {
        expected,
        computed_lower_bound: best_rank - 1,
        status,
        defect: target_rank - best_rank,
        attempts: ranks.len(),
        ranks,
        decisive,
    })
}

/// Independent per-attempt seeds drawn up front, so attempts stay
/// deterministic no matter how they are scheduled.
pub(crate) fn attempt_seeds(seed: u64, retries: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..retries).map(|_| rng.next_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fmt(n: &[usize], d: &[usize]) -> Format {
        Format::new(n.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn expected_dims() {
        assert_eq!(expected_secant_dim(&fmt(&[2], &[2]), 2).unwrap(), 5);
        assert_eq!(expected_secant_dim(&fmt(&[1, 2], &[2, 1]), 1).unwrap(), 3);
        assert_eq!(expected_secant_dim(&fmt(&[1, 1], &[1, 1]), 2).unwrap(), 3);
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = fmt(&[1, 2], &[1, 1]);
        let a = sample_config(&f, 3, 42).unwrap();
        let b = sample_config(&f, 3, 42).unwrap();
        assert_eq!(a.points(), b.points());
        let c = sample_config(&f, 3, 43).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn sampling_shapes() {
        let f = fmt(&[1, 2], &[1, 1]);
        let cfg = sample_config(&f, 3, 0).unwrap();
        assert_eq!(cfg.points().len(), 3);
        for p in cfg.points() {
            assert_eq!(p.factors()[0].len(), 2);
            assert_eq!(p.factors()[1].len(), 3);
        }
    }

    #[test]
    fn sampled_images_pairwise_independent() {
        let f = fmt(&[1], &[2]);
        let data = EmbeddingData::new(&f).unwrap();
        for seed in 0..5 {
            let cfg = sample_config(&f, 4, seed).unwrap();
            assert!(pairwise_independent(&data, cfg.points()).unwrap());
        }
    }

    #[test]
    fn terracini_rank_single_point() {
        let f = fmt(&[1, 2], &[2, 2]);
        let cfg = sample_config(&f, 1, 7).unwrap();
        assert_eq!(terracini_rank(&f, &cfg).unwrap(), f.dim() + 1);
    }

    #[test]
    fn veronese_surface_two_point_rank_is_deficient() {
        let f = fmt(&[2], &[2]);
        let cfg = sample_config(&f, 2, 1).unwrap();
        assert_eq!(terracini_rank(&f, &cfg).unwrap(), 5);
    }

    #[test]
    fn segre_two_point_rank_fills() {
        let f = fmt(&[1, 1], &[1, 1]);
        let cfg = sample_config(&f, 2, 1).unwrap();
        assert_eq!(terracini_rank(&f, &cfg).unwrap(), 4);
    }

    #[test]
    fn defect_check_on_veronese_surface() {
        let f = fmt(&[2], &[2]);
        let v = secant_defect_check(&f, 2, 0, 3).unwrap();
        assert_eq!(v.status, SecantStatus::DefectSuggested);
        assert_eq!(v.defect, 1);
        assert_eq!(v.expected, 5);
        assert_eq!(v.computed_lower_bound, 4);
        assert_eq!(v.attempts, 3);
    }

    #[test]
    fn defect_check_on_segre() {
        let f = fmt(&[1, 1], &[1, 1]);
        let v = secant_defect_check(&f, 2, 0, 3).unwrap();
        assert_eq!(v.status, SecantStatus::NonDefectiveCertified);
        assert_eq!(v.defect, 0);
        assert_eq!(v.attempts, 1);
    }

    #[test]
    fn h_one_always_certifies() {
        for (n, d) in [(vec![2], vec![2]), (vec![1, 1], vec![1, 1]), (vec![1, 2], vec![2, 1])] {
            let f = Format::new(n, d).unwrap();
            let v = secant_defect_check(&f, 1, 3, 2).unwrap();
            assert_eq!(v.status, SecantStatus::NonDefectiveCertified);
        }
    }

    #[test]
    fn rank_monotone_in_h_and_bounded() {
        let f = fmt(&[1, 1], &[2, 1]);
        let cfg = sample_config(&f, 4, 9).unwrap();
        let mut prev = 0;
        for h in 1..=4 {
            let r = terracini_rank(&f, &cfg.prefix(h)).unwrap();
            assert!(r >= prev);
            assert!(r <= (h * (f.dim() + 1)).min(f.ambient_dim().unwrap() + 1));
            prev = r;
        }
    }

    #[test]
    fn certification_stable_under_reseeding() {
        let f = fmt(&[2], &[6]);
        for seed in [0, 1, 2] {
            let v = secant_defect_check(&f, 9, seed, 2).unwrap();
            assert_eq!(v.status, SecantStatus::NonDefectiveCertified, "seed {seed}");
        }
    }
}
