//! Re-runs the bundled fixtures and diffs them against pinned goldens.

use std::collections::BTreeMap;

use hb_core::fixtures;
use hb_core::{separate, GammaRule, SeparationOptions, SeparationResult};
use serde::{Deserialize, Serialize};

use crate::exit::Failure;

const GOLDENS: &str = include_str!("../goldens/repro.json");
/// Absolute tolerance on every pinned number.
pub const GOLDEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub normal: Vec<f64>,
    pub g: Vec<f64>,
    /// `[lo, hi, gamma]` per extension step.
    pub gamma: Vec<[f64; 3]>,
    pub valid: bool,
}

impl Golden {
    pub fn of(r: &SeparationResult) -> Golden {
        Golden {
            normal: r.hyperplane.normal().as_slice().to_vec(),
            g: r.g.as_slice().to_vec(),
            gamma: r
                .history
                .iter()
                .map(|s| [s.interval.lo, s.interval.hi, s.gamma])
                .collect(),
            valid: r.certificate.valid,
        }
    }

    /// First field where `got` leaves the tolerance, with both values.
    pub fn diff(&self, got: &Golden) -> Option<String> {
        let nums = |field: &str, a: &[f64], b: &[f64]| -> Option<String> {
            if a.len() != b.len() {
                return Some(format!(
                    "{field}: expected {} entries, got {}",
                    a.len(),
                    b.len()
                ));
            }
            a.iter().zip(b).enumerate().find_map(|(i, (x, y))| {
                ((x - y).abs() > GOLDEN_TOL || x.is_nan() != y.is_nan())
                    .then(|| format!("{field}[{i}]: expected {x:?}, got {y:?}"))
            })
        };
        let flat = |v: &[[f64; 3]]| v.iter().flatten().copied().collect::<Vec<_>>();
        nums("normal", &self.normal, &got.normal)
            .or_else(|| nums("g", &self.g, &got.g))
            .or_else(|| nums("gamma", &flat(&self.gamma), &flat(&got.gamma)))
            .or_else(|| {
                (self.valid != got.valid)
                    .then(|| format!("valid: expected {}, got {}", self.valid, got.valid))
            })
    }
}

pub fn goldens() -> BTreeMap<String, Golden> {
    serde_json::from_str(GOLDENS).expect("bundled goldens parse")
}

pub struct Outcome {
    pub name: &'static str,
    pub actual: Golden,
    /// `None` on a match.
    pub divergence: Option<String>,
}

/// Runs every fixture with its pinned anchor, the upper rule and `seed`.
pub fn run(seed: u64) -> Result<Vec<Outcome>, Failure> {
    let pinned = goldens();
    let mut out = Vec::new();
    for fx in fixtures::all() {
        let opts = SeparationOptions {
            anchor: Some(fx.anchor.clone()),
            gamma_rule: GammaRule::Upper,
            seed,
            ..Default::default()
        };
        let r = separate(&fx.set, &fx.subspace, &opts)?;
        let actual = Golden::of(&r);
        let divergence = match pinned.get(fx.name) {
            Some(g) => g.diff(&actual),
            None => Some("no pinned golden".to_string()),
        };
        out.push(Outcome {
            name: fx.name,
            actual,
            divergence,
        });
    }
    Ok(out)
}
