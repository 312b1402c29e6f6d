//! One function per subcommand. Each returns an [`Outcome`]; rendering and
//! exit codes are handled by the caller.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refspline_core::codec::{mask_to_json, rat_to_json, rat_to_string};
use refspline_core::exactreal::parse_rational;
use refspline_core::instance::Instance;
use refspline_core::powermod::erdos_construct_with_c;
use refspline_core::refinery::{default_coverage_bound, verify_mask_identity};
use refspline_core::splinecore::boxspline_ft;
use refspline_core::{
    cascade_solve, coverage_oracle, decay_probe, decide, erdos_params, erdos_verify, factorization_check,
    fourier_product_eval, lawton_check, multivariate_decide, spline_time_eval, Error, Field, FieldElement, MaskSpec,
    RBall,
};
use serde_json::{json, Value};

use crate::args::InstanceArgs;
use crate::encode;
use crate::CliError;

/// Whether the run established what it was asked to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Refuted,
}

pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub text: String,
    /// Tabular data for `--format csv`, when the command has any.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(status: Status, report: Value, text: String) -> Self {
        Outcome { status, report, text, csv: None }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Refuted
    }
}

pub fn parse_field(s: Option<&str>) -> Result<Field, CliError> {
    let Some(s) = s else { return Ok(Field::RATIONAL) };
    let (n, k) = s.split_once(',').ok_or_else(|| CliError::Usage(format!("--field expects `n,k`, got `{s}`")))?;
    let n: u64 = n.trim().parse().map_err(|_| CliError::Usage(format!("bad radicand `{n}`")))?;
    let k: u32 = k.trim().parse().map_err(|_| CliError::Usage(format!("bad degree `{k}`")))?;
    Ok(Field::new(n, k)?)
}

fn parse_columns(s: &str, field: Field) -> Result<(usize, Vec<Vec<FieldElement>>), CliError> {
    let mut dim = None;
    let mut cols = Vec::new();
    for col in s.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let entries = col.split(',').map(|e| FieldElement::parse(e.trim(), field)).collect::<Result<Vec<_>, _>>()?;
        match dim {
            None => dim = Some(entries.len()),
            Some(d) if d != entries.len() => {
                return Err(CliError::Usage(format!("column `{col}` has {} entries, expected {d}", entries.len())))
            }
            _ => {}
        }
        cols.push(entries);
    }
    let dim = dim.ok_or_else(|| CliError::Usage("--columns is empty".into()))?;
    Ok((dim, cols))
}

pub fn load_instance(a: &InstanceArgs) -> Result<Instance, CliError> {
    if let Some(path) = &a.instance {
        let text = read(path)?;
        return Ok(Instance::parse(&text)?);
    }
    let field = parse_field(a.field.as_deref())?;
    let lambda = a.lambda.as_deref().ok_or_else(|| CliError::Usage("--lambda or --instance is required".into()))?;
    let columns = a.columns.as_deref().ok_or_else(|| CliError::Usage("--columns or --instance is required".into()))?;
    let lambda = FieldElement::parse(lambda, field)?;
    let (dim, columns) = parse_columns(columns, field)?;
    Ok(Instance { field, lambda, dim, columns, mask: None })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// The claimed mask if the instance carries one, else the constructed one.
fn instance_mask(inst: &Instance) -> Result<MaskSpec, CliError> {
    if let Some(m) = &inst.mask {
        return Ok(m.clone());
    }
    let cols = inst.directions()?;
    let r = decide(&cols, &inst.lambda)?;
    let c = &r.construction;
    match c.signed_mask() {
        Some(h) => Ok(MaskSpec::new(inst.lambda.clone(), h)?),
        None => Err(CliError::Core(Error::Precondition(format!(
            "instance is not refinable ({})",
            r.witness.as_ref().map_or("no witness", |w| w.kind())
        )))),
    }
}

fn mask_lines(m: &MaskSpec) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lambda: {}", m.lambda().to_text());
    let _ = writeln!(s, "mask: {}", m.mask());
    let _ = writeln!(s, "terms: {}", m.mask().len());
    for (d, c) in m.mask().terms() {
        let _ = writeln!(s, "  d = {}  h = {}", d, rat_to_string(c));
    }
    s
}

pub fn check(inst: &Instance, verify_mask: bool) -> CmdResult {
    if inst.dim > 1 {
        if verify_mask {
            return Err(CliError::Usage("--verify-mask applies to univariate instances".into()));
        }
        return mvcheck(inst);
    }
    let cols = inst.directions()?;
    let r = decide(&cols, &inst.lambda)?;
    let bound = default_coverage_bound(cols.len(), &inst.lambda);
    let cov = coverage_oracle(&cols, &inst.lambda, bound)?;
    if cov.consistent != r.is_refinable() {
        return Err(CliError::Core(Error::Internal(format!(
            "division verdict {} disagrees with the zero-coverage oracle",
            r.verdict.as_str()
        ))));
    }
    let mut report = json!({ "decision": encode::refinability(&r), "coverage": encode::coverage(&cov) });
    let mut text = format!("verdict: {}\n", r.verdict.as_str());
    if let Some(m) = r.mask() {
        text.push_str(&mask_lines(m));
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(text, "witness: {} (verified: {})", w.kind(), r.verify_witness());
    }
    let _ = writeln!(text, "coverage oracle: consistent={} bound={}", cov.consistent, cov.bound);
    let mut ok = r.is_refinable();
    if verify_mask {
        let claimed =
            inst.mask.as_ref().ok_or_else(|| CliError::Usage("--verify-mask needs an instance with a mask".into()))?;
        if claimed.lambda() != &inst.lambda {
            return Err(CliError::Core(Error::DescriptorMismatch {
                left: claimed.lambda().to_text(),
                right: inst.lambda.to_text(),
            }));
        }
        let holds = verify_mask_identity(&cols, claimed)?;
        report["mask_identity"] = json!(holds);
        let _ = writeln!(text, "claimed mask identity: {}", if holds { "holds" } else { "fails" });
        ok = holds;
    }
    Ok(Outcome::new(status_of(ok), report, text))
}

pub fn mask(inst: &Instance) -> CmdResult {
    let cols = inst.directions()?;
    let r = decide(&cols, &inst.lambda)?;
    let Some(h) = r.construction.signed_mask() else {
        let report = json!({ "decision": encode::refinability(&r) });
        let text = format!("verdict: {}\nno mask exists\n", r.verdict.as_str());
        return Ok(Outcome::new(Status::Refuted, report, text));
    };
    let spec = MaskSpec::new(inst.lambda.clone(), h)?;
    let text = mask_lines(&spec);
    let translations: Vec<Value> = spec.translations().iter().map(encode::fe).collect();
    let coeffs: Vec<Value> = spec.mask_coefficients().iter().map(rat_to_json).collect();
    let mut with_mask = inst.clone();
    with_mask.mask = Some(spec);
    let mut report = with_mask.to_json();
    report["translations"] = Value::Array(translations);
    report["mask_coefficients"] = Value::Array(coeffs);
    let csv = {
        let mut s = String::from("d,h\n");
        for (d, c) in with_mask.mask.as_ref().expect("set above").mask().terms() {
            let _ = writeln!(s, "{},{}", d, rat_to_string(c));
        }
        s
    };
    Ok(Outcome { status: Status::Ok, report, text, csv: Some(csv) })
}

pub fn lawton(p: &str, d: usize, m: u64) -> CmdResult {
    let coeffs = p.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>, _>>()?;
    let r = lawton_check(&coeffs, d, m)?;
    let mut text = format!("Q(z) = {}\nrefinable: {}\n", r.q, r.refinable);
    match &r.quotient {
        Some(q) => {
            let _ = writeln!(text, "quotient: {q}");
        }
        None => {
            let _ = writeln!(text, "remainder: {}", r.remainder);
        }
    }
    Ok(Outcome::new(status_of(r.refinable), encode::lawton(&r), text))
}

pub fn erdos(field: Option<&str>, lambda: &str, targets: &str, depth: u32, c: Option<&str>, extra: i64) -> CmdResult {
    let field = parse_field(field)?;
    let lambda = FieldElement::parse(lambda, field)?;
    let targets = targets.split(';').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>()?;
    let c = c.map(parse_rational).transpose()?;
    let params = erdos_params(&lambda, targets.len())?;
    let cert = erdos_construct_with_c(&lambda, &targets, depth, c)?;
    let rep = erdos_verify(&cert, extra);
    let report = json!({
        "params": { "g": params.g, "c": rat_to_json(&params.c), "c_exact": params.c_exact },
        "certificate": cert.to_json(),
        "verification": rep.to_json(),
    });
    let mut text = format!(
        "g: {}\nc: {}\nxi: {}\ncertified through n = {}: {}\n",
        cert.g,
        rat_to_string(&cert.c),
        cert.xi.to_text(),
        rep.checked_through,
        rep.certified
    );
    let _ = writeln!(text, "proof inequalities: base={} step={}", cert.inequalities.base, cert.inequalities.step);
    if rep.empirical_min.is_finite() {
        let _ = writeln!(text, "empirical minimum: {:e}", rep.empirical_min);
    }
    for e in &rep.structural_errors {
        let _ = writeln!(text, "structural error: {e}");
    }
    Ok(Outcome::new(status_of(rep.certified), report, text))
}

pub fn cascade(inst: &Instance, grid: usize, iters: usize) -> CmdResult {
    let m = instance_mask(inst)?;
    let f = cascade_solve(&m, grid, iters)?;
    // Closed-form reference for univariate instances whose mask is the box-spline mask.
    let reference = match inst.directions() {
        Ok(_) if inst.mask.is_none() => {
            let spec = inst.box_spline()?;
            spline_time_eval(&spec, f.grid).ok().map(|g| f.sup_distance(&g))
        }
        _ => None,
    };
    let last = f.residuals.last().copied();
    let report = json!({
        "mask": mask_to_json(&m),
        "grid": { "start": f.grid.start, "step": f.grid.step, "len": f.grid.len },
        "iterations": f.iterations,
        "support": [f.support.0, f.support.1],
        "integral": f.integral(),
        "support_leak": f.support_leak,
        "final_residual": last,
        "sup_distance_to_closed_form": reference,
    });
    let mut text = format!(
        "iterations: {}\nsupport: [{}, {}]\nintegral: {:.12}\n",
        f.iterations,
        f.support.0,
        f.support.1,
        f.integral()
    );
    if let Some(d) = reference {
        let _ = writeln!(text, "sup distance to closed form: {d:e}");
    }
    Ok(Outcome { status: Status::Ok, report, text, csv: Some(f.to_csv()) })
}

pub fn ftprobe(inst: &Instance, jmax: usize, points: usize, range: u32, tol: f64, prec: u32, seed: u64) -> CmdResult {
    let spec = inst.box_spline()?;
    if spec.dim() != 1 {
        return Err(CliError::Usage("ftprobe applies to univariate instances".into()));
    }
    let m = instance_mask(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den: i64 = 1 << 10;
    let span = i64::from(range) * den;
    let mut worst: f64 = 0.0;
    let mut rows = String::from("w,product_re,product_im,closed_re,closed_im,abs_diff\n");
    for _ in 0..points {
        let w = BigRational::new(BigInt::from(rng.gen_range(-span..=span)), BigInt::from(den));
        let wf = FieldElement::from_rational(inst.field, w.clone());
        let p = fourier_product_eval(&m, &wf, jmax, prec)?.value;
        let b = boxspline_ft(&spec, &[RBall::from_rational(&w, prec)], prec)?;
        let (pm, bm) = (p.mid_f64(), b.mid_f64());
        let diff = (pm - bm).norm() + p.radius_f64() + b.radius_f64();
        worst = worst.max(diff);
        let _ = writeln!(rows, "{},{:e},{:e},{:e},{:e},{:e}", rat_to_string(&w), pm.re, pm.im, bm.re, bm.im, diff);
    }
    let ok = worst <= tol;
    let report = json!({ "points": points, "jmax": jmax, "max_abs_diff": worst, "tol": tol, "within_tol": ok });
    let text = format!("points: {points}\nmax |product - closed form|: {worst:e}\nwithin {tol:e}: {ok}\n");
    Ok(Outcome { status: status_of(ok), report, text, csv: Some(rows) })
}

pub fn decay(inst: &Instance, jmax: usize) -> CmdResult {
    let m = instance_mask(inst)?;
    let r = decay_probe(&m, jmax)?;
    let ok = r.epsilon0_positive();
    let text = format!(
        "roots on one period: {}\nxi0: {}\nmin |H(lambda^j xi0)|, j < {} >= {:e}\nobstruction k: {}\n",
        r.roots.len(),
        r.xi0.to_text(),
        jmax,
        r.epsilon0.to_f64().unwrap_or(0.0),
        r.obstruction_k
    );
    Ok(Outcome::new(status_of(ok), encode::decay(&r), text))
}

pub fn mvcheck(inst: &Instance) -> CmdResult {
    let spec = inst.box_spline()?;
    let r = multivariate_decide(&spec, &inst.lambda)?;
    let mut text = format!("verdict: {}\n", r.verdict.as_str());
    if let Some(m) = &r.mask {
        let _ = writeln!(text, "mask: {}", m.mask());
    }
    let _ = writeln!(text, "chains: {:?}", r.chains);
    if let Some(p) = &r.partition {
        let _ = writeln!(text, "partition: {p:?}");
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(text, "witness: {}", w.kind());
    }
    let ok = r.verdict == refspline_core::Verdict::Refinable;
    Ok(Outcome::new(status_of(ok), encode::multivariate(&r), text))
}

/// The two-direction spline over Q(sqrt 10) that is refinable for `lambda = sqrt 10`.
pub fn counterexample_instance() -> Instance {
    let f = Field::new(10, 2).expect("10 is not a square");
    let t = FieldElement::theta(f);
    let half_t = t.scale(&BigRational::new(1.into(), 2.into()));
    Instance::univariate(t, vec![FieldElement::one(f), half_t])
}

pub fn counterexample() -> CmdResult {
    let inst = counterexample_instance();
    let f = inst.field;
    let cols = inst.directions()?;
    let r = decide(&cols, &inst.lambda)?;
    let mut expected: Vec<FieldElement> = (0..5).map(|i| FieldElement::from_int(f, i)).collect();
    let half_t = FieldElement::theta(f).scale(&BigRational::new(1.into(), 2.into()));
    expected.extend((0..5).map(|i| &FieldElement::from_int(f, i) + &half_t));
    expected.sort();
    let tenth = BigRational::new(1.into(), 10.into());
    let (translations, coeffs) = match r.mask() {
        Some(m) => (m.translations(), m.mask_coefficients()),
        None => (Vec::new(), Vec::new()),
    };
    let exact = translations == expected && coeffs.len() == 10 && coeffs.iter().all(|c| *c == tenth);
    let report = json!({
        "instance": inst.to_json(),
        "verdict": r.verdict.as_str(),
        "translations": translations.iter().map(encode::fe).collect::<Vec<_>>(),
        "coefficients": coeffs.iter().map(rat_to_json).collect::<Vec<_>>(),
        "expected_translations": expected.iter().map(encode::fe).collect::<Vec<_>>(),
        "expected_coefficient": rat_to_json(&tenth),
        "exact_match": exact,
    });
    let mut text = String::from("translations:\n");
    for d in &translations {
        let _ = writeln!(text, "  {d}");
    }
    let common = coeffs.first().filter(|c| coeffs.iter().all(|x| x == *c));
    let _ = writeln!(text, "coefficient: {}", common.map_or("not constant".into(), rat_to_string));
    let _ = writeln!(text, "exact match: {exact}");
    Ok(Outcome::new(status_of(exact), report, text))
}

pub fn factorize_check(inst: &Instance, grid: usize, iters: usize, tol: f64) -> CmdResult {
    let cols = inst.directions()?;
    let r = factorization_check(&cols, &inst.lambda, grid, iters)?;
    let ok = r.relative_distance.is_finite() && r.relative_distance <= tol;
    let mut report = encode::factorization(&r);
    report["tol"] = json!(tol);
    report["within_tol"] = json!(ok);
    let text = format!(
        "k: {}\nalpha fitted: {:.9}\nalpha predicted: {:.9}\nrelative distance: {:e}\nwithin {tol:e}: {ok}\n",
        r.k, r.alpha_fit, r.alpha_predicted, r.relative_distance
    );
    Ok(Outcome::new(status_of(ok), report, text))
}

/// Guard against a grid request that cannot resolve anything.
pub fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid < 16 {
        return Err(CliError::Usage(format!("--grid {grid} is too small (need at least 16 cells)")));
    }
    Ok(())
}
