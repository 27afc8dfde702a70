//! Property checks over seeded random nonsingular matrices.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use torusdyn::{par, Execution, IntMatrix, MonomialMap};

use crate::{CliError, CommandOutput, Ctx};

pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug)]
pub struct SurveyParams {
    pub count: usize,
    pub dim: usize,
    pub bound: i64,
    pub seed: u64,
    pub n_max: usize,
}

/// Outcome of the property checks for one matrix.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixChecks {
    pub index: usize,
    pub matrix: Vec<Vec<i64>>,
    pub delta: Option<String>,
    pub ell: Option<usize>,
    /// `deg φ^n ≥ δ_lo^n`.
    pub fekete: bool,
    /// `deg φ^{m+n} ≤ deg φ^m · deg φ^n`.
    pub submultiplicative: bool,
    /// `‖A^n‖_max ≤ deg φ^n ≤ 2N ‖A^n‖_max`.
    pub growth_window: bool,
    /// `rank g(A) = r̄`.
    pub g_rank: bool,
    /// Range of `deg φ^n / (n^ℓ δ^n)` over the second half of the iterates.
    pub normalized_range: Option<(f64, f64)>,
    pub error: Option<String>,
}

impl MatrixChecks {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.fekete && self.submultiplicative && self.growth_window && self.g_rank
    }
}

/// `count` matrices with entries uniform in `[-bound, bound]`, singular draws
/// rejected.
pub fn random_matrices(p: &SurveyParams) -> Result<Vec<IntMatrix>, CliError> {
    if p.dim == 0 || p.dim > MAX_DIM {
        return Err(CliError::Usage(format!("dimension must be between 1 and {MAX_DIM}, got {}", p.dim)));
    }
    if p.bound < 0 {
        return Err(CliError::Usage(format!("entry bound must be non-negative, got {}", p.bound)));
    }
    if p.bound == 0 && p.count > 0 {
        return Err(CliError::Domain("entry bound 0 only produces the zero matrix, which is singular".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::with_capacity(p.count);
    let max_draws = 1000 * p.count.max(1);
    let mut draws = 0;
    while out.len() < p.count {
        draws += 1;
        if draws > max_draws {
            return Err(CliError::Domain(format!("no nonsingular matrix found in {max_draws} draws")));
        }
        let rows: Vec<Vec<BigInt>> =
            (0..p.dim).map(|_| (0..p.dim).map(|_| BigInt::from(rng.gen_range(-p.bound..=p.bound))).collect()).collect();
        let m = IntMatrix::from_rows(rows)?;
        if !m.det()?.is_zero() {
            out.push(m);
        }
    }
    Ok(out)
}

fn max_abs(m: &IntMatrix) -> BigInt {
    m.to_rows().iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
}

pub fn check_matrix(index: usize, a: &IntMatrix, n_max: usize) -> MatrixChecks {
    let matrix = a.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect()).collect();
    let mut out = MatrixChecks {
        index,
        matrix,
        delta: None,
        ell: None,
        fekete: false,
        submultiplicative: false,
        growth_window: false,
        g_rank: false,
        normalized_range: None,
        error: None,
    };
    if let Err(e) = fill(&mut out, a, n_max) {
        out.error = Some(e.to_string());
    }
    out
}

fn fill(out: &mut MatrixChecks, a: &IntMatrix, n_max: usize) -> torusdyn::Result<()> {
    let n = a.nrows();
    let map = MonomialMap::new(a.clone())?;
    let degs = map.degree_sequence(n_max, Execution::Sequential);
    let profile = map.spectral_profile()?;
    let rho = &profile.rho;
    out.delta = Some(rho.decimal());
    out.ell = Some(profile.ell);

    let mut lo_pow = BigRational::from_integer(1.into());
    out.fekete = degs.iter().all(|d| {
        lo_pow = &lo_pow * &rho.lo;
        lo_pow <= BigRational::from_integer(d.clone())
    });
    out.submultiplicative =
        (1..=n_max).all(|m| (1..=n_max - m).all(|k| degs[m + k - 1] <= &degs[m - 1] * &degs[k - 1]));
    let two_n = BigInt::from(2 * n);
    out.growth_window = degs.iter().enumerate().all(|(i, d)| {
        let norm = max_abs(&a.pow(i as u64 + 1));
        norm <= *d && *d <= &two_n * &norm
    });
    out.g_rank = a.eval_poly(&profile.g_poly()).rank() == profile.r_bar;

    let ln_rho = rho.midpoint_f64().ln();
    let ratios: Vec<f64> = (n_max.div_ceil(2).max(1)..=n_max)
        .map(|k| {
            let ln_deg = torusdyn::heights::ln_bigint(&degs[k - 1]);
            (ln_deg - profile.ell as f64 * (k as f64).ln() - k as f64 * ln_rho).exp()
        })
        .collect();
    if !ratios.is_empty() {
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        out.normalized_range = Some((lo, hi));
    }
    Ok(())
}

/// Draw the matrices and run every check; results keep draw order.
pub fn run_survey(p: &SurveyParams, exec: Execution) -> Result<Vec<MatrixChecks>, CliError> {
    let matrices = random_matrices(p)?;
    let indexed: Vec<(usize, IntMatrix)> = matrices.into_iter().enumerate().collect();
    Ok(par::map_slice(exec, &indexed, |(i, a)| check_matrix(*i, a, p.n_max)))
}

pub(crate) fn command(p: &SurveyParams, ctx: &Ctx) -> Result<CommandOutput, CliError> {
    if p.n_max == 0 {
        return Err(CliError::Usage("iterations must be positive".into()));
    }
    let rows = run_survey(p, ctx.exec)?;
    let tally = |f: fn(&MatrixChecks) -> bool| {
        let ok = rows.iter().filter(|r| f(r)).count();
        json!({ "passed": ok, "failed": rows.len() - ok })
    };
    let all_passed = rows.iter().all(MatrixChecks::passed);
    let results = json!({
        "checks": {
            "fekete": tally(|r| r.fekete),
            "submultiplicative": tally(|r| r.submultiplicative),
            "growth_window": tally(|r| r.growth_window),
            "g_rank": tally(|r| r.g_rank),
            "errors": rows.iter().filter(|r| r.error.is_some()).count(),
        },
        "all_passed": all_passed,
        "matrices": rows.iter().map(row_json).collect::<Vec<_>>(),
    });
    let mut tsv = String::from("index\tmatrix\tdelta\tell\tfekete\tsubmultiplicative\tgrowth_window\tg_rank\n");
    for r in &rows {
        let m = r.matrix.iter().map(|row| row.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ");
        let _ = writeln!(
            tsv,
            "{}\t{m}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.index,
            r.delta.as_deref().unwrap_or("-"),
            r.ell.map_or("-".into(), |l| l.to_string()),
            r.fekete,
            r.submultiplicative,
            r.growth_window,
            r.g_rank
        );
    }
    let inputs = json!({ "count": p.count, "dim": p.dim, "bound": p.bound, "seed": p.seed, "iterations": p.n_max });
    Ok(CommandOutput { inputs, results, tsv: Some(tsv), passed: Some(all_passed) })
}

fn row_json(r: &MatrixChecks) -> Value {
    let mut v = json!({
        "index": r.index,
        "matrix": r.matrix,
        "delta": r.delta,
        "ell": r.ell,
        "passed": r.passed(),
    });
    if let Some((lo, hi)) = r.normalized_range {
        v["normalized_range"] = json!([torusdyn::jsonfmt::float(lo), torusdyn::jsonfmt::float(hi)]);
    }
    if let Some(e) = &r.error {
        v["error"] = Value::String(e.clone());
    }
    v
}
