use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value};
use torusdyn::dynamics::{
    arithmetic_degree_spectrum, certify_positive_height, decide_positive_height, estimate_arithmetic_degree,
    estimate_canonical_height, exact_arithmetic_degree, is_preperiodic, parse_affine_point, GenericMap,
};
use torusdyn::heights::{height_sequence, HeightSequence};
use torusdyn::{jsonfmt, Error, IntMatrix, MonomialMap, RootRadius, SpectralProfile, TorusPoint};

use crate::{repro, survey, CliError, Command, CommandOutput, Ctx, MatrixPointArgs};

type CmdResult = Result<CommandOutput, CliError>;

pub(crate) fn dispatch(cmd: &Command, ctx: &Ctx) -> CmdResult {
    match cmd {
        Command::Analyze { m, iterations } => analyze(&m.matrix, *iterations, ctx),
        Command::Degrees { m, iterations } => degrees(&m.matrix, *iterations, ctx),
        Command::Orbit { mp, iterations } => orbit(mp, *iterations, ctx),
        Command::Alpha { mp, iterations } => alpha(mp, *iterations, ctx),
        Command::Hhat { mp, iterations } => hhat(mp, *iterations, ctx),
        Command::Certify { mp, iterations } => certify(mp, *iterations, ctx),
        Command::Preper { mp, cap, iterations } => preper(mp, *cap, *iterations, ctx),
        Command::GenericOrbit { map, inverse, point, iterations, delta, points, budget_bits } => {
            generic_orbit(map, inverse.as_deref(), point, *iterations, *delta, *points, *budget_bits)
        }
        Command::Repro { ids, list } => repro::command(ids, *list, ctx),
        Command::Survey { count, dim, bound, seed, iterations } => {
            survey::command(&survey::SurveyParams { count: *count, dim: *dim, bound: *bound, seed: *seed, n_max: *iterations }, ctx)
        }
    }
}

fn load_map(text: &str) -> Result<MonomialMap, CliError> {
    Ok(MonomialMap::new(IntMatrix::parse(text)?)?)
}

fn load(mp: &MatrixPointArgs) -> Result<(MonomialMap, TorusPoint), CliError> {
    let map = load_map(&mp.matrix.matrix)?;
    let p = TorusPoint::parse(&mp.point)?;
    if p.dim() != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), found: p.dim() }.into());
    }
    Ok((map, p))
}

fn inputs(map: &MonomialMap, p: Option<&TorusPoint>, n: usize) -> Value {
    let mut v = json!({ "matrix": map.matrix().to_json(), "iterations": n });
    if let Some(p) = p {
        v["point"] = p.to_json();
    }
    v
}

fn delta_json(rho: &RootRadius, bits: u32) -> Result<Value, CliError> {
    let mut rho = rho.clone();
    if rho.precision_bits < bits {
        rho.refine(bits)?;
    }
    let mut v = rho.to_json();
    v["lo_exact"] = Value::String(rho.lo.to_string());
    v["hi_exact"] = Value::String(rho.hi.to_string());
    Ok(v)
}

fn degree_json(seq: &[BigInt]) -> Value {
    Value::Array(seq.iter().map(jsonfmt::int).collect())
}

fn analyze(text: &str, n: usize, ctx: &Ctx) -> CmdResult {
    let map = load_map(text)?;
    let profile = map.spectral_profile()?;
    let degs = map.degree_sequence(n, ctx.exec);
    let quasi_unipotent = map.is_quasi_unipotent();
    let (dim_g, lattice, g_poly) = if quasi_unipotent {
        (Value::Null, Value::Null, Value::Null)
    } else {
        let g = map.zero_height_group()?;
        (json!(g.dim_g), g.lattice.to_json(), Value::String(g.g_poly.to_string()))
    };
    let pj = profile.to_json();
    let results = json!({
        "charpoly": pj["charpoly"],
        "minpoly": pj["minpoly"],
        "factors": pj["factors"],
        "delta": delta_json(&profile.rho, ctx.precision_bits)?,
        "ell": profile.ell,
        "r": profile.r,
        "r_bar": profile.r_bar,
        "diagonalizable": profile.is_diagonalizable(),
        "quasi_unipotent": quasi_unipotent,
        "dim_G": dim_g,
        "lattice_basis": lattice,
        "g_poly": g_poly,
        "degree_sequence": degree_json(&degs),
    });
    Ok(CommandOutput { inputs: inputs(&map, None, n), results, tsv: Some(degree_tsv(&degs)), passed: None })
}

fn degree_tsv(degs: &[BigInt]) -> String {
    let mut s = String::from("n\tdeg\tdeg^(1/n)\n");
    for (i, d) in degs.iter().enumerate() {
        let n = i + 1;
        let root = (torusdyn::heights::ln_bigint(d) / n as f64).exp();
        let _ = writeln!(s, "{n}\t{d}\t{root}");
    }
    s
}

fn degrees(text: &str, n: usize, ctx: &Ctx) -> CmdResult {
    let map = load_map(text)?;
    let degs = map.degree_sequence(n, ctx.exec);
    let results = json!({
        "degree_sequence": degree_json(&degs),
        "dynamical_degree": delta_json(&map.dynamical_degree()?, ctx.precision_bits)?,
    });
    Ok(CommandOutput { inputs: inputs(&map, None, n), results, tsv: Some(degree_tsv(&degs)), passed: None })
}

/// Rows `n, deg, h_n, h_n/(n^ℓ δ^n)` for `n = 1..=n_max`.
fn orbit_tsv(map: &MonomialMap, seq: &HeightSequence, profile: &SpectralProfile, ctx: &Ctx) -> String {
    let n_max = seq.len() - 1;
    let degs = map.degree_sequence(n_max, ctx.exec);
    let ln_delta = profile.rho.midpoint_f64().ln();
    let mut s = String::from("n\tdeg\th_n\th_n/(n^l*delta^n)\n");
    for n in 1..=n_max {
        let h = seq.values[n];
        let norm = if h > 0.0 { (h.ln() - profile.ell as f64 * (n as f64).ln() - n as f64 * ln_delta).exp() } else { 0.0 };
        let _ = writeln!(s, "{n}\t{}\t{h}\t{norm}", degs[n - 1]);
    }
    s
}

fn orbit(mp: &MatrixPointArgs, n: usize, ctx: &Ctx) -> CmdResult {
    let (map, p) = load(mp)?;
    let seq = height_sequence(map.matrix(), &p.log_profile()?, n, ctx.exec)?;
    let profile = map.spectral_profile()?;
    let tsv = orbit_tsv(&map, &seq, &profile, ctx);
    let results = json!({
        "profile": p.log_profile()?.to_json(),
        "heights": seq.to_json(),
    });
    Ok(CommandOutput { inputs: inputs(&map, Some(&p), n), results, tsv: Some(tsv), passed: None })
}

fn alpha(mp: &MatrixPointArgs, n: usize, ctx: &Ctx) -> CmdResult {
    let (map, p) = load(mp)?;
    let mut report = exact_arithmetic_degree(map.matrix(), &p)?;
    report.numeric_estimate = Some(estimate_arithmetic_degree(map.matrix(), &p, n, ctx.exec)?);
    let spectrum: Vec<Value> = arithmetic_degree_spectrum(map.matrix())?.iter().map(RootRadius::to_json).collect();
    let mut results = report.to_json();
    results["spectrum"] = Value::Array(spectrum);
    results["dynamical_degree"] = delta_json(&map.dynamical_degree()?, ctx.precision_bits)?;
    let seq = height_sequence(map.matrix(), &p.log_profile()?, n, ctx.exec)?;
    let tsv = orbit_tsv(&map, &seq, &map.spectral_profile()?, ctx);
    Ok(CommandOutput { inputs: inputs(&map, Some(&p), n), results, tsv: Some(tsv), passed: None })
}

fn hhat(mp: &MatrixPointArgs, n: usize, ctx: &Ctx) -> CmdResult {
    let (map, p) = load(mp)?;
    let est = estimate_canonical_height(map.matrix(), &p, n, ctx.exec)?;
    let profile = map.spectral_profile()?;
    let mut results = est.to_json();
    results["delta"] = delta_json(&profile.rho, ctx.precision_bits)?;
    results["normalized"] = Value::Array(est.normalized.iter().map(|&x| jsonfmt::float(x)).collect());
    let seq = height_sequence(map.matrix(), &p.log_profile()?, n, ctx.exec)?;
    let tsv = orbit_tsv(&map, &seq, &profile, ctx);
    Ok(CommandOutput { inputs: inputs(&map, Some(&p), n), results, tsv: Some(tsv), passed: None })
}

fn certify(mp: &MatrixPointArgs, n: usize, ctx: &Ctx) -> CmdResult {
    let (map, p) = load(mp)?;
    let a = map.matrix();
    let group = map.zero_height_group()?;
    let profile = p.log_profile()?;
    let results = json!({
        "certificate": certify_positive_height(a, &p)?.to_string(),
        "decision": decide_positive_height(a, &p)?.to_string(),
        "in_G_div": group.contains_divisible(&profile),
        "zero_height_group": group.to_json(),
        "alpha": exact_arithmetic_degree(a, &p)?.alpha.to_json(),
        "diagonalizable": map.spectral_profile()?.is_diagonalizable(),
    });
    let seq = height_sequence(a, &profile, n, ctx.exec)?;
    let tsv = orbit_tsv(&map, &seq, &map.spectral_profile()?, ctx);
    Ok(CommandOutput { inputs: inputs(&map, Some(&p), n), results, tsv: Some(tsv), passed: None })
}

fn preper(mp: &MatrixPointArgs, cap: usize, n: usize, ctx: &Ctx) -> CmdResult {
    let (map, p) = load(mp)?;
    let r = is_preperiodic(map.matrix(), &p, cap)?;
    let mut inp = inputs(&map, Some(&p), n);
    inp["cap"] = json!(cap);
    let seq = height_sequence(map.matrix(), &p.log_profile()?, n, ctx.exec)?;
    let tsv = orbit_tsv(&map, &seq, &map.spectral_profile()?, ctx);
    Ok(CommandOutput { inputs: inp, results: r.to_json(), tsv: Some(tsv), passed: None })
}

fn generic_orbit(
    map: &str,
    inverse: Option<&str>,
    point: &str,
    n: usize,
    delta: Option<f64>,
    with_points: bool,
    budget: u64,
) -> CmdResult {
    let mut f = GenericMap::parse(map)?;
    if let Some(inv) = inverse {
        f = f.with_inverse(GenericMap::parse(inv)?)?;
    }
    let p = parse_affine_point(point)?;
    if let Some(d) = delta {
        if !(d.is_finite() && d >= 1.0) {
            return Err(CliError::Usage(format!("--delta must be a finite number >= 1, got {d}")));
        }
    }
    let orbit = f.orbit(&p, n, budget)?;
    let mut results = orbit.to_json(with_points);
    results["root_last"] = jsonfmt::float(root(orbit.heights[n], n));
    if let Some(d) = delta {
        results["normalized_last"] = jsonfmt::float(orbit.normalized_last(d));
        if let Some(inv) = f.inverse() {
            let back = inv.orbit(&p, n, budget)?;
            let (fw, bw) = (orbit.normalized_last(d), back.normalized_last(d));
            results["two_sided"] = json!({
                "forward": jsonfmt::float(fw),
                "backward": jsonfmt::float(bw),
                "sum": jsonfmt::float(fw + bw),
            });
        }
    }
    let mut tsv = String::from("n\th_n\th_n^(1/n)");
    tsv.push_str(if delta.is_some() { "\th_n/delta^n\n" } else { "\n" });
    for (k, &h) in orbit.heights.iter().enumerate().skip(1) {
        let _ = write!(tsv, "{k}\t{h}\t{}", root(h, k));
        if let Some(d) = delta {
            let _ = write!(tsv, "\t{}", if h > 0.0 { (h.ln() - k as f64 * d.ln()).exp() } else { 0.0 });
        }
        tsv.push('\n');
    }
    let inp = json!({
        "map": f.to_json(),
        "point": p.iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>(),
        "iterations": n,
        "delta": delta.map(jsonfmt::float),
        "budget_bits": budget,
    });
    Ok(CommandOutput { inputs: inp, results, tsv: Some(tsv), passed: None })
}

fn root(h: f64, n: usize) -> f64 {
    if n == 0 || h <= 0.0 {
        0.0
    } else {
        h.powf(1.0 / n as f64)
    }
}
