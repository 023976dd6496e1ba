//! Problem files (version 1).

use std::path::Path;

use hb_core::fixtures::{oracle_by_name, OracleParams};
use hb_core::{ConvexSet, GammaRule, HalfSpace, PartialFunctional, Seminorm, Subspace, Vector};
use serde::Deserialize;

use crate::exit::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub dimension: usize,
    #[serde(rename = "A")]
    pub set: SetSpec,
    #[serde(rename = "S", default)]
    pub subspace: Vec<Vec<f64>>,
    #[serde(default)]
    pub x: Option<Vec<f64>>,
    #[serde(default)]
    pub seminorm: Option<SeminormSpec>,
    #[serde(default)]
    pub f: Option<FunctionalSpec>,
    /// Hyperplane normal checked by `verify`.
    #[serde(default)]
    pub normal: Option<Vec<f64>>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetSpec {
    Hpoly {
        rows: Vec<RowSpec>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Oracle {
        name: String,
        #[serde(default)]
        params: OracleParamSpec,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub strict: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleParamSpec {
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub power: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SeminormSpec {
    /// `p(e) = max_k |c_k·e|`
    Explicit { rows: Vec<Vec<f64>> },
    /// gauge of `{a_i·e < b_i}`
    Polyhedral { rows: Vec<GaugeRowSpec> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeRowSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalSpec {
    pub vectors: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub gamma_rule: Option<GammaRule>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dim: usize,
    pub set: ConvexSet,
    pub subspace: Subspace,
    pub anchor: Option<Vector>,
    pub seminorm: Option<Seminorm>,
    pub functional: Option<PartialFunctional>,
    pub normal: Option<Vector>,
    pub gamma_rule: GammaRule,
    pub seed: u64,
    pub tol: f64,
}

pub const DEFAULT_TOL: f64 = 1e-6;

pub fn load(path: &Path) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Failure::missing(format!("{}: no such file", path.display()))
        } else {
            Failure::missing(format!("{}: {e}", path.display()))
        }
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Problem, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Failure::schema(format!(
            "line {}, column {}, field '{path}': {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    file.validate()
}

fn vector(field: &str, coords: &[f64], dim: usize) -> Result<Vector, Failure> {
    if coords.len() != dim {
        return Err(Failure::schema(format!(
            "field '{field}': expected {dim} coordinates, found {}",
            coords.len()
        )));
    }
    Vector::new(coords.to_vec()).map_err(|e| Failure::schema(format!("field '{field}': {e}")))
}

fn schema<E: std::fmt::Display>(field: &str) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::schema(format!("field '{field}': {e}"))
}

impl ProblemFile {
    fn validate(self) -> Result<Problem, Failure> {
        if self.version != 1 {
            return Err(Failure::schema(format!(
                "field 'version': unsupported version {}, expected 1",
                self.version
            )));
        }
        let n = self.dimension;
        if n == 0 {
            return Err(Failure::schema("field 'dimension': must be positive"));
        }
        let set = match &self.set {
            SetSpec::Hpoly { rows } => {
                let mut out = Vec::with_capacity(rows.len());
                for (i, r) in rows.iter().enumerate() {
                    let field = format!("A.rows[{i}]");
                    if !r.strict {
                        return Err(Failure::schema(format!(
                            "field '{field}.strict': version 1 sets are open, rows must be strict"
                        )));
                    }
                    let a = vector(&format!("{field}.normal"), &r.normal, n)?;
                    out.push(HalfSpace::new(a, r.offset).map_err(schema(&field))?);
                }
                ConvexSet::hpolyhedron(n, out).map_err(schema("A"))?
            }
            SetSpec::Ball { center, radius } => {
                let c = vector("A.center", center, n)?;
                ConvexSet::ball(c, *radius).map_err(schema("A.radius"))?
            }
            SetSpec::Oracle { name, params } => {
                let center = params
                    .center
                    .as_ref()
                    .map(|c| vector("A.params.center", c, n))
                    .transpose()?;
                let p = OracleParams {
                    center,
                    radius: params.radius,
                    power: params.power,
                };
                let set = oracle_by_name(name, &p).map_err(schema("A"))?;
                if set.dim() != n {
                    return Err(Failure::schema(format!(
                        "field 'A': oracle '{name}' lives in R^{}, dimension is {n}",
                        set.dim()
                    )));
                }
                set
            }
        };
        let s_vecs = self
            .subspace
            .iter()
            .enumerate()
            .map(|(i, c)| vector(&format!("S[{i}]"), c, n))
            .collect::<Result<Vec<_>, _>>()?;
        let subspace = Subspace::span(n, &s_vecs).map_err(schema("S"))?;
        let anchor = self.x.as_ref().map(|x| vector("x", x, n)).transpose()?;
        let seminorm = match &self.seminorm {
            None => None,
            Some(SeminormSpec::Explicit { rows }) => {
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, c)| vector(&format!("seminorm.rows[{i}]"), c, n))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Seminorm::explicit(n, rows).map_err(schema("seminorm"))?)
            }
            Some(SeminormSpec::Polyhedral { rows }) => {
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        vector(&format!("seminorm.rows[{i}].normal"), &r.normal, n)
                            .map(|a| (a, r.offset))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Seminorm::polyhedral(n, rows).map_err(schema("seminorm"))?)
            }
        };
        let functional = match &self.f {
            None => None,
            Some(f) => {
                let vs = f
                    .vectors
                    .iter()
                    .enumerate()
                    .map(|(i, c)| vector(&format!("f.vectors[{i}]"), c, n))
                    .collect::<Result<Vec<_>, _>>()?;
                if vs.len() != f.values.len() {
                    return Err(Failure::schema(format!(
                        "field 'f.values': {} values for {} vectors",
                        f.values.len(),
                        vs.len()
                    )));
                }
                Some(PartialFunctional::from_generators(n, &vs, &f.values).map_err(schema("f"))?)
            }
        };
        let normal = self
            .normal
            .as_ref()
            .map(|c| vector("normal", c, n))
            .transpose()?;
        let tol = self.options.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::schema("field 'options.tol': must be positive"));
        }
        Ok(Problem {
            dim: n,
            set,
            subspace,
            anchor,
            seminorm,
            functional,
            normal,
            gamma_rule: self.options.gamma_rule.unwrap_or_default(),
            seed: self.options.seed.unwrap_or(0),
            tol,
        })
    }
}
