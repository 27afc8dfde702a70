use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heights::TorusPoint;
use crate::linalg::IntMatrix;
use crate::poly::{cyclotomic_index, factor_over_z};

/// Default number of exact orbit steps before cycle detection gives up.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreperiodicMethod {
    /// No eigenvalue is a root of unity, so preperiodic means torsion.
    TorsionTest,
    /// Some valuation vector is not fixed by `A^m`, so the orbit is infinite.
    ValuationKernel,
    CycleDetection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperiodicResult {
    pub preperiodic: bool,
    pub cap_reached: bool,
    pub method: PreperiodicMethod,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
}

impl PreperiodicResult {
    pub fn to_json(&self) -> Value {
        json!({
            "preperiodic": self.preperiodic,
            "cap_reached": self.cap_reached,
            "method": self.method,
            "preperiod": self.preperiod,
            "period": self.period,
        })
    }
}

/// Orbit state: coordinate signs and valuation vectors, which determine the
/// point exactly.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    signs: Vec<i8>,
    vals: Vec<Vec<BigInt>>,
}

fn step(a: &IntMatrix, s: &State) -> State {
    let signs = (0..a.nrows())
        .map(|i| {
            let odd = a.row(i).iter().zip(&s.signs).filter(|(e, &sg)| sg < 0 && e.is_odd()).count();
            if odd % 2 == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    State { signs, vals: s.vals.iter().map(|v| a.mul_vec(v)).collect() }
}

/// Whether `P` is preperiodic for `φ_A`.
pub fn is_preperiodic(a: &IntMatrix, p: &TorusPoint, cap: usize) -> Result<PreperiodicResult> {
    if !a.is_square() || a.nrows() != p.dim() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: p.dim() });
    }
    let profile = p.log_profile()?;
    let cyclo: Vec<usize> = factor_over_z(&a.charpoly()?)?.factors().iter().filter_map(|(f, _)| cyclotomic_index(f)).collect();
    let start = State { signs: profile.signs().to_vec(), vals: profile.valuations().to_vec() };
    let method = if cyclo.is_empty() {
        if !p.is_torsion() {
            return Ok(PreperiodicResult {
                preperiodic: false,
                cap_reached: false,
                method: PreperiodicMethod::TorsionTest,
                preperiod: None,
                period: None,
            });
        }
        PreperiodicMethod::TorsionTest
    } else {
        // a periodic valuation vector is fixed by A^m, m = lcm of the cyclotomic indices
        let m = cyclo.iter().fold(1usize, |acc, &k| acc.lcm(&k));
        let am = a.pow(m as u64);
        if profile.valuations().iter().any(|v| &am.mul_vec(v) != v) {
            return Ok(PreperiodicResult {
                preperiodic: false,
                cap_reached: false,
                method: PreperiodicMethod::ValuationKernel,
                preperiod: None,
                period: None,
            });
        }
        PreperiodicMethod::CycleDetection
    };
    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut cur = start;
    for n in 0..=cap {
        if let Some(&first) = seen.get(&cur) {
            return Ok(PreperiodicResult {
                preperiodic: true,
                cap_reached: false,
                method,
                preperiod: Some(first),
                period: Some(n - first),
            });
        }
        let next = step(a, &cur);
        seen.insert(cur, n);
        cur = next;
    }
    Ok(PreperiodicResult { preperiodic: false, cap_reached: true, method, preperiod: None, period: None })
}
