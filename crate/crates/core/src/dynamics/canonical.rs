//! Canonical-height estimates and positivity verdicts.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::relation::exact_arithmetic_degree;
use crate::error::{Error, Result};
use crate::heights::{height_sequence, TorusPoint};
use crate::linalg::IntMatrix;
use crate::monomial::{MonomialMap, SpectralProfile};
use crate::par::Execution;

/// Largest residue-class period tried.
pub const MAX_PERIOD: usize = 24;
/// Relative drift under which a residue class counts as converged.
const DRIFT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PositivityVerdict {
    CertifiedPositive,
    DecidedZero,
    DecidedPositive,
    Inconclusive,
}

impl fmt::Display for PositivityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PositivityVerdict::CertifiedPositive => "certified-positive",
            PositivityVerdict::DecidedZero => "decided-zero",
            PositivityVerdict::DecidedPositive => "decided-positive",
            PositivityVerdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowStats {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
}

impl WindowStats {
    fn of(xs: &[f64]) -> Self {
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        WindowStats { max, min, mean }
    }

    fn to_json(self) -> Value {
        json!({
            "max": crate::jsonfmt::float(self.max),
            "min": crate::jsonfmt::float(self.min),
            "mean": crate::jsonfmt::float(self.mean),
        })
    }
}

/// Per-class limits of the leading coefficient for the smallest period whose
/// classes have all settled.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueClassLimits {
    pub period: usize,
    /// `limits[r]` for `n ≡ r (mod period)`.
    pub limits: Vec<f64>,
    pub drift: f64,
}

#[derive(Clone, Debug)]
pub struct CanonicalHeightEstimate {
    pub ell: usize,
    pub n_max: usize,
    pub window: (usize, usize),
    /// `h_n / (n^ℓ δ^n)` for `n = 0..=n_max` with the enclosure midpoint.
    pub normalized: Vec<f64>,
    pub window_stats: WindowStats,
    /// Same window normalised by the lower and upper ends of the `δ` enclosure.
    pub window_delta_lo: WindowStats,
    pub window_delta_hi: WindowStats,
    pub residue_classes: Option<ResidueClassLimits>,
    /// Largest residue-class limit when one settled, else the window maximum.
    pub estimate: f64,
    pub positivity: PositivityVerdict,
}

impl CanonicalHeightEstimate {
    pub fn window_max(&self) -> f64 {
        self.window_stats.max
    }

    pub fn window_min(&self) -> f64 {
        self.window_stats.min
    }

    pub fn window_mean(&self) -> f64 {
        self.window_stats.mean
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell,
            "n_max": self.n_max,
            "window": [self.window.0, self.window.1],
            "window_stats": self.window_stats.to_json(),
            "window_delta_lo": self.window_delta_lo.to_json(),
            "window_delta_hi": self.window_delta_hi.to_json(),
            "residue_classes": self.residue_classes.as_ref().map(|r| json!({
                "period": r.period,
                "limits": r.limits.iter().map(|&x| crate::jsonfmt::float(x)).collect::<Vec<_>>(),
                "drift": crate::jsonfmt::float(r.drift),
            })),
            "estimate": crate::jsonfmt::float(self.estimate),
            "positivity": self.positivity.to_string(),
        })
    }
}

fn normalise(h: &[f64], ell: usize, ln_delta: f64) -> Vec<f64> {
    h.iter()
        .enumerate()
        .map(|(n, &v)| {
            if v <= 0.0 {
                return 0.0;
            }
            let poly = if n == 0 { 0.0 } else { ell as f64 * (n as f64).ln() };
            (v.ln() - poly - n as f64 * ln_delta).exp()
        })
        .collect()
}

/// `Δ_q^ℓ u` at `n`, scaled by `1/(q^ℓ ℓ!)`: the coefficient of `n^ℓ` when
/// `u_n` is a degree-`ℓ` polynomial along the class.
fn leading_coefficient(u: &[f64], n: usize, q: usize, ell: usize) -> Option<f64> {
    if n < ell * q + 1 {
        return None;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=ell {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * u[n - k * q];
        binom = binom * (ell - k) as f64 / (k + 1) as f64;
    }
    let fact: f64 = (1..=ell).map(|i| i as f64).product();
    Some(acc / ((q as f64).powi(ell as i32) * fact))
}

fn residue_classes(u: &[f64], n_max: usize, ell: usize) -> Option<ResidueClassLimits> {
    for q in 1..=MAX_PERIOD {
        let mut limits = Vec::with_capacity(q);
        let mut drift: f64 = 0.0;
        let mut ok = true;
        for r in 0..q {
            if r > n_max {
                ok = false;
                break;
            }
            let last = n_max - (n_max - r) % q;
            let (Some(a), Some(b)) = (
                leading_coefficient(u, last, q, ell),
                last.checked_sub(q).and_then(|m| leading_coefficient(u, m, q, ell)),
            ) else {
                ok = false;
                break;
            };
            drift = drift.max((a - b).abs() / a.abs().max(1.0));
            limits.push(a);
        }
        if ok && drift <= DRIFT_TOLERANCE {
            return Some(ResidueClassLimits { period: q, limits, drift });
        }
    }
    None
}

fn expanding_profile(a: &IntMatrix) -> Result<SpectralProfile> {
    let map = MonomialMap::new(a.clone())?;
    if map.is_quasi_unipotent() {
        return Err(Error::QuasiUnipotent);
    }
    map.spectral_profile()
}

/// Window statistics of `h(φ^n P)/(n^ℓ δ^n)` over the last quarter of the
/// orbit, plus residue-class limits of the leading coefficient.
pub fn estimate_canonical_height(a: &IntMatrix, p: &TorusPoint, n_max: usize, exec: Execution) -> Result<CanonicalHeightEstimate> {
    if n_max < 4 {
        return Err(Error::InvalidInput(format!("n_max must be at least 4, got {n_max}")));
    }
    let profile = expanding_profile(a)?;
    let seq = height_sequence(a, &p.log_profile()?, n_max, exec)?;
    let ell = profile.ell;
    let mid = profile.rho.midpoint_f64().ln();
    let normalized = normalise(&seq.values, ell, mid);
    let start = (3 * n_max).div_ceil(4);
    let window_stats = WindowStats::of(&normalized[start..]);
    let window_delta_lo = WindowStats::of(&normalise(&seq.values, ell, profile.rho.lo_f64().ln())[start..]);
    let window_delta_hi = WindowStats::of(&normalise(&seq.values, ell, profile.rho.hi_f64().ln())[start..]);
    // leading coefficients come from h_n / δ^n without the n^ℓ factor
    let u = normalise(&seq.values, 0, mid);
    let residue_classes = residue_classes(&u, n_max, ell);
    let estimate = match &residue_classes {
        Some(rc) => rc.limits.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        None => window_stats.max,
    };
    let positivity = decide_positive_height(a, p)?;
    Ok(CanonicalHeightEstimate {
        ell,
        n_max,
        window: (start, n_max),
        normalized,
        window_stats,
        window_delta_lo,
        window_delta_hi,
        residue_classes,
        estimate,
        positivity,
    })
}

/// `CertifiedPositive` when `P` lies outside `G^div` for the zero-height
/// subgroup `G`; otherwise `Inconclusive`.
pub fn certify_positive_height(a: &IntMatrix, p: &TorusPoint) -> Result<PositivityVerdict> {
    let map = MonomialMap::new(a.clone())?;
    if map.is_quasi_unipotent() {
        return Err(Error::QuasiUnipotent);
    }
    let group = map.zero_height_group()?;
    Ok(if group.contains_divisible(&p.log_profile()?) {
        PositivityVerdict::Inconclusive
    } else {
        PositivityVerdict::CertifiedPositive
    })
}

/// For diagonalizable `A`, `ĥ(P) > 0` exactly when `α(P) = δ`; otherwise the
/// certificate verdict is returned.
pub fn decide_positive_height(a: &IntMatrix, p: &TorusPoint) -> Result<PositivityVerdict> {
    let profile = expanding_profile(a)?;
    if !profile.is_diagonalizable() {
        return certify_positive_height(a, p);
    }
    let alpha = exact_arithmetic_degree(a, p)?.alpha;
    Ok(match alpha.compare(&profile.rho)? {
        Ordering::Equal => PositivityVerdict::DecidedPositive,
        _ => PositivityVerdict::DecidedZero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> TorusPoint {
        TorusPoint::from_i64(c).unwrap()
    }

    #[test]
    fn jordan_block_limit() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[0, 2]]);
        let e = estimate_canonical_height(&a, &pt(&[3, 5]), 40, Execution::Parallel).unwrap();
        assert_eq!(e.ell, 1);
        assert!((e.estimate - 0.5 * 5f64.ln()).abs() < 1e-6, "{}", e.estimate);
        assert_eq!(e.positivity, PositivityVerdict::CertifiedPositive);
    }

    #[test]
    fn oscillating_limits() {
        let a = IntMatrix::from_i64(&[&[-2, 0], &[0, -2]]);
        let e = estimate_canonical_height(&a, &pt(&[2, 3]), 40, Execution::Parallel).unwrap();
        let rc = e.residue_classes.clone().unwrap();
        assert_eq!(rc.period, 2);
        assert!((rc.limits[0] - 3f64.ln()).abs() < 1e-9);
        assert!((rc.limits[1] - 6f64.ln()).abs() < 1e-9);
        assert!((e.window_max() - 6f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn torsion_is_zero() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let e = estimate_canonical_height(&a, &pt(&[1, -1]), 20, Execution::Sequential).unwrap();
        assert!(e.normalized.iter().all(|&x| x == 0.0));
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn verdicts() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(certify_positive_height(&a, &pt(&[1, 5])).unwrap(), PositivityVerdict::CertifiedPositive);
        assert_eq!(certify_positive_height(&a, &pt(&[7, 1])).unwrap(), PositivityVerdict::Inconclusive);
        assert_eq!(certify_positive_height(&a, &pt(&[-1, 1])).unwrap(), PositivityVerdict::Inconclusive);
        assert_eq!(decide_positive_height(&a, &pt(&[7, 1])).unwrap(), PositivityVerdict::DecidedZero);
        assert_eq!(decide_positive_height(&a, &pt(&[2, 3])).unwrap(), PositivityVerdict::DecidedPositive);
        let j = IntMatrix::from_i64(&[&[2, 1], &[0, 2]]);
        assert_eq!(decide_positive_height(&j, &pt(&[3, 1])).unwrap(), certify_positive_height(&j, &pt(&[3, 1])).unwrap());
        let unip = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(decide_positive_height(&unip, &pt(&[2, 1])), Err(Error::QuasiUnipotent));
    }
}
