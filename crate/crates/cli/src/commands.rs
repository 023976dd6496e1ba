use std::path::PathBuf;
use std::time::Instant;

use hb_core::{
    build_symmetrized_body, domination_check, extend_via_separation, kernel_hyperplane, separate,
    verify_separation, ExtensionState, GammaRule, PartialFunctional, Seminorm, SeparationOptions,
    Vector,
};
use serde_json::json;

use crate::exit::Failure;
use crate::problem::{self, Problem};
use crate::render;
use crate::report::ResultDocument;

/// Flags shared by the subcommands; those given on the command line override
/// the problem file's options.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub input: Option<PathBuf>,
    pub point: Option<String>,
    pub gamma_rule: Option<GammaRule>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub svg: Option<PathBuf>,
}

/// Samples used by domination checks in the CLI.
const DOMINATION_SAMPLES: usize = 2_000;

pub struct Ctx {
    pub problem: Problem,
    pub rule: GammaRule,
    pub seed: u64,
    pub tol: f64,
}

impl Ctx {
    pub fn load(flags: &Flags) -> Result<Ctx, Failure> {
        let path = flags
            .input
            .as_ref()
            .ok_or_else(|| Failure::schema("--input FILE is required"))?;
        let problem = problem::load(path)?;
        let tol = flags.tol.unwrap_or(problem.tol);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::schema("--tol must be positive"));
        }
        Ok(Ctx {
            rule: flags.gamma_rule.unwrap_or(problem.gamma_rule),
            seed: flags.seed.unwrap_or(problem.seed),
            tol,
            problem,
        })
    }

    pub fn separation_options(&self) -> SeparationOptions {
        SeparationOptions {
            anchor: self.problem.anchor.clone(),
            gamma_rule: self.rule,
            seed: self.seed,
            ..Default::default()
        }
    }

    fn anchor(&self) -> Result<Vector, Failure> {
        match &self.problem.anchor {
            Some(x) => Ok(x.clone()),
            None => Ok(self.problem.set.pick_interior_point()?),
        }
    }

    /// The file's seminorm, or the gauge of `D` built from `A` and the anchor.
    fn seminorm(&self) -> Result<Seminorm, Failure> {
        if let Some(p) = &self.problem.seminorm {
            return Ok(p.clone());
        }
        let body = build_symmetrized_body(&self.problem.set, &self.anchor()?)?;
        Ok(Seminorm::of_body(&body))
    }

    /// The file's functional, or `f(z + t x) = t` on `S ⊕ span{x}`.
    fn functional(&self) -> Result<PartialFunctional, Failure> {
        if let Some(f) = &self.problem.functional {
            return Ok(f.clone());
        }
        Ok(PartialFunctional::from_anchor(
            &self.problem.subspace,
            &self.anchor()?,
        )?)
    }
}

pub fn parse_point(csv: Option<&str>, dim: usize) -> Result<Vector, Failure> {
    let csv = csv.ok_or_else(|| Failure::schema("--point CSV is required"))?;
    let coords = csv
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::schema(format!("--point: {e}")))?;
    if coords.len() != dim {
        return Err(Failure::schema(format!(
            "--point: expected {dim} coordinates, found {}",
            coords.len()
        )));
    }
    Vector::new(coords).map_err(|e| Failure::schema(format!("--point: {e}")))
}

/// Runs one subcommand, filling `doc`. `Err` carries the exit code.
pub fn run(name: &str, flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let start = Instant::now();
    let out = match name {
        "gauge" => gauge(flags, doc),
        "conic" => conic(flags, doc),
        "extend" => extend(flags, doc),
        "separate" => separate_cmd(flags, doc),
        "roundtrip" => roundtrip(flags, doc),
        "verify" => verify(flags, doc),
        "render" => render_cmd(flags, doc),
        other => Err(Failure::schema(format!("unknown command '{other}'"))),
    };
    doc.timings_ms
        .insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
    out
}

fn gauge(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    let e = parse_point(flags.point.as_deref(), ctx.problem.dim)?;
    let p = ctx.seminorm()?;
    doc.value = Some(json!({
        "point": e.as_slice(),
        "gauge": p.gauge(&e)?,
        "seminorm": p.kind(),
    }));
    Ok(())
}

fn conic(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    let e = parse_point(flags.point.as_deref(), ctx.problem.dim)?;
    let member = ctx.problem.set.conic_hull_contains(&e)?;
    doc.value = Some(json!({
        "point": e.as_slice(),
        "member": member,
        "margin": ctx.problem.set.conic_hull_margin(e.as_slice()),
    }));
    Ok(())
}

fn extend(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    let f = ctx.functional()?;
    let p = ctx.seminorm()?;
    let state = ExtensionState::new(f, p.clone())?.extend_full(ctx.rule)?;
    let g = state.coefficients();
    doc.g = Some(g.as_slice().to_vec());
    doc.set_history(state.history());
    let viol = domination_check(&g, &p, ctx.seed, DOMINATION_SAMPLES)?;
    doc.certificate.domination_violation = Some(viol);
    doc.certificate.valid = viol <= ctx.tol;
    if let Ok(h) = kernel_hyperplane(&g) {
        doc.normal = Some(h.normal().as_slice().to_vec());
    }
    if viol > ctx.tol {
        return Err(Failure::from(hb_core::Error::Solver(format!(
            "extension violates domination by {viol:.3e}"
        ))));
    }
    Ok(())
}

fn separate_cmd(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    let opts = ctx.separation_options();
    let r = separate(&ctx.problem.set, &ctx.problem.subspace, &opts)?;
    if let Some(p) = &r.gauge {
        doc.certificate.domination_violation =
            Some(domination_check(&r.g, p, ctx.seed, DOMINATION_SAMPLES)?);
    }
    doc.set_separation(&r);
    Ok(())
}

fn roundtrip(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    let f = ctx.functional()?;
    let p = ctx.seminorm()?;
    let mut opts = ctx.separation_options();
    opts.anchor = None;
    let g = extend_via_separation(&f, &p, &opts)?;
    let direct = ExtensionState::new(f.clone(), p.clone())?
        .extend_full(ctx.rule)?
        .coefficients();
    let agreement = f
        .domain()
        .basis()
        .iter()
        .zip(f.values())
        .map(|(b, v)| (g.dot(b) - v).abs())
        .fold(0.0, f64::max);
    let viol = domination_check(&g, &p, ctx.seed, DOMINATION_SAMPLES)?;
    doc.g = Some(g.as_slice().to_vec());
    if let Ok(h) = kernel_hyperplane(&g) {
        doc.normal = Some(h.normal().as_slice().to_vec());
    }
    doc.certificate.domination_violation = Some(viol);
    doc.certificate.valid = viol <= ctx.tol && agreement < 1e-8;
    doc.value = Some(json!({
        "direct_extension": direct.as_slice(),
        "max_domain_error": agreement,
    }));
    Ok(())
}

fn verify(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    let normal = ctx
        .problem
        .normal
        .as_ref()
        .ok_or_else(|| Failure::precondition("verify needs 'normal' in the problem file"))?;
    let h = kernel_hyperplane(normal)?;
    let c = verify_separation(
        &ctx.problem.set,
        &ctx.problem.subspace,
        &h,
        &ctx.separation_options(),
    )?;
    doc.normal = Some(h.normal().as_slice().to_vec());
    doc.set_certificate(&c);
    if !c.valid {
        return Err(Failure::precondition(format!(
            "hyperplane does not separate: S residual {:.3e}, clearance {:.3e}",
            c.s_in_h_residual, c.a_clearance
        )));
    }
    Ok(())
}

fn render_cmd(flags: &Flags, doc: &mut ResultDocument) -> Result<(), Failure> {
    let ctx = Ctx::load(flags)?;
    if ctx.problem.dim != 2 {
        return Err(Failure::precondition("render needs a 2-D problem"));
    }
    let path = flags
        .svg
        .as_ref()
        .ok_or_else(|| Failure::schema("render needs --svg FILE"))?;
    let r = separate(
        &ctx.problem.set,
        &ctx.problem.subspace,
        &ctx.separation_options(),
    )?;
    doc.set_separation(&r);
    let svg = render::svg(&ctx.problem.set, &r)?;
    std::fs::write(path, svg).map_err(|e| Failure::missing(format!("{}: {e}", path.display())))?;
    doc.value = Some(json!({ "svg": path.display().to_string() }));
    Ok(())
}
