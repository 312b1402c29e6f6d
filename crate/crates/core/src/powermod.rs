//! Nested-interval construction of numbers whose `lambda`-power orbits keep a
//! fixed distance from prescribed residues modulo 1, plus an independent verifier.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::ball::RBall;
use crate::codec::{fe_from_json, fe_to_json, field_from_json, field_to_json, get, rat_from_json, rat_to_json};
use crate::error::{Error, Result};
use crate::exactreal::{Field, FieldElement};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `||x||_Z` for an exact rational.
pub fn dist_to_int(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let g = BigRational::one() - &f;
    f.min(g)
}

/// `||x||_Z` for a field element, exact.
pub fn dist_to_int_fe(x: &FieldElement) -> FieldElement {
    let f = x.fract();
    let g = &FieldElement::one(x.field()) - &f;
    if f <= g {
        f
    } else {
        g
    }
}

/// Enclosure of `||x||_Z` over a ball.
pub fn dist_to_int_ball(x: &RBall) -> RBall {
    let prec = x.prec();
    if matches!(x.width_log2(), Some(w) if w >= -1) {
        // Too wide to localize the nearest integer.
        return RBall::from_rational(&rat(0, 1), prec).hull(&RBall::from_rational(&rat(1, 2), prec));
    }
    let n = x.round_mid();
    let y = x.sub(&RBall::from_int(n, prec));
    let one = RBall::from_int(1, prec);
    let cands = [y.abs(), y.sub(&one).abs(), y.add(&one).abs()];
    let lo = cands.iter().map(RBall::lower).min().expect("three candidates");
    let hi = cands.iter().map(RBall::upper).min().expect("three candidates");
    RBall::from_rational(&lo, prec).hull(&RBall::from_rational(&hi, prec))
}

/// Parameters `(g, c)` of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErdosParams {
    pub g: u32,
    pub c: BigRational,
    /// True when `c` equals the closed-form constant exactly (rational `lambda`).
    pub c_exact: bool,
}

fn check_lambda(lambda: &FieldElement) -> Result<()> {
    if lambda <= &FieldElement::one(lambda.field()) {
        return Err(Error::InvalidLambda(lambda.to_text()));
    }
    Ok(())
}

/// Smallest `g` with `lambda^g >= 2(1 + g m)` and `c = (lambda-1)^2 / (20 (m+2)^2 lambda^3)`.
///
/// For irrational `lambda`, `c` is replaced by a rational lower bound.
pub fn erdos_params(lambda: &FieldElement, m: usize) -> Result<ErdosParams> {
    check_lambda(lambda)?;
    let f = lambda.field();
    let mut g = 1u32;
    let mut pw = lambda.clone();
    loop {
        let rhs = FieldElement::from_int(f, 2 * (1 + i64::from(g) * m as i64));
        if pw >= rhs {
            break;
        }
        g += 1;
        pw = &pw * lambda;
    }
    let mm = BigRational::from_integer(BigInt::from(m + 2));
    let (c, exact) = match lambda.as_rational() {
        Some(l) => {
            let one = BigRational::one();
            let num = (l - &one) * (l - &one);
            let den = BigRational::from_integer(20.into()) * &mm * &mm * l * l * l;
            (num / den, true)
        }
        None => {
            let prec = 96;
            let lb = lambda.to_ball_rel(prec);
            let lm1 = lb.sub(&RBall::from_int(1, prec));
            let den = lb.pow(3).mul_rational(&(BigRational::from_integer(20.into()) * &mm * &mm));
            let cb = lm1.mul(&lm1).div(&den).expect("lambda > 1");
            (round_down_dyadic(&cb.lower(), 80), false)
        }
    };
    Ok(ErdosParams { g, c, c_exact: exact })
}

/// Largest dyadic `p / 2^bits'` not exceeding `q`, keeping about `bits` significant bits.
fn round_down_dyadic(q: &BigRational, bits: u32) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let s = (i64::from(bits) - mag).max(0) as u64;
    let scaled = (q * BigRational::from_integer(BigInt::one() << s)).floor();
    scaled / BigRational::from_integer(BigInt::one() << s)
}

/// Outcome of the two sufficient inequalities used by the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofInequalities {
    /// `2 lambda c m + (m+2) sqrt(2 lambda c) < 1`.
    pub base: bool,
    /// `2 c m g + sqrt(2 lambda c) (m+2) / (lambda - 1) < 1/2`.
    pub step: bool,
}

pub fn proof_inequalities(lambda: &FieldElement, c: &BigRational, m: usize, g: u32) -> ProofInequalities {
    let prec = 128;
    let l = lambda.to_ball_rel(prec);
    let cb = RBall::from_rational(c, prec);
    let mm = RBall::from_int(m as i64, prec);
    let m2 = RBall::from_int(m as i64 + 2, prec);
    let root = l.mul(&cb).mul_int(2).sqrt().expect("positive");
    let base = l.mul(&cb).mul(&mm).mul_int(2).add(&m2.mul(&root));
    let step = cb
        .mul(&mm)
        .mul_int(2 * i64::from(g))
        .add(&root.mul(&m2).div(&l.sub(&RBall::from_int(1, prec))).expect("lambda > 1"));
    ProofInequalities { base: base.upper() < BigRational::one(), step: step.upper() < rat(1, 2) }
}

/// How a certificate was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// Built by the nested-interval construction.
    Constructed,
    /// A single point asserted to satisfy the bound (checked exactly by the verifier).
    Point,
}

/// Proof object for `||xi lambda^n - r_i||_Z >= c`, `first_n <= n <= guaranteed_depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErdosCertificate {
    pub lambda: FieldElement,
    pub targets: Vec<BigRational>,
    pub c: BigRational,
    pub g: u32,
    pub depth: u32,
    /// Exact length of `I_0`; `|I_j| = base_length / lambda^{g j}`.
    pub base_length: BigRational,
    /// Closed intervals `I_0 ⊇ I_1 ⊇ ... ⊇ I_M`.
    pub intervals: Vec<(FieldElement, FieldElement)>,
    pub xi: FieldElement,
    pub guaranteed_depth: i64,
    pub first_n: i64,
    pub kind: CertificateKind,
    pub inequalities: ProofInequalities,
}

/// Open interval removed from the search window.
#[derive(Clone, Debug)]
struct Forbidden {
    lo: FieldElement,
    hi: FieldElement,
}

/// Intervals `((r + k - c)/lambda^n, (r + k + c)/lambda^n)` meeting `[a, b]`.
fn forbidden_for(
    a: &FieldElement,
    b: &FieldElement,
    lam_pow: &FieldElement,
    lam_pow_inv: &FieldElement,
    targets: &[BigRational],
    c: &BigRational,
) -> Vec<Forbidden> {
    let f = a.field();
    let cf = FieldElement::from_rational(f, c.clone());
    let mut out = Vec::new();
    for r in targets {
        let rf = FieldElement::from_rational(f, r.clone());
        let k_lo = (&(&(a * lam_pow) - &rf) - &cf).floor();
        let k_hi = (&(&(b * lam_pow) - &rf) + &cf).floor() + 1;
        let mut k = k_lo;
        while k <= k_hi {
            let center = &rf + &FieldElement::from_bigint(f, k.clone());
            out.push(Forbidden { lo: &(&center - &cf) * lam_pow_inv, hi: &(&center + &cf) * lam_pow_inv });
            k += 1;
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Leftmost closed sub-interval of `[a, b]` of length `len` avoiding all open
/// `forbidden` intervals. Open window ends (`open_lo`, `open_hi`) must not be touched.
fn choose_gap(
    a: &FieldElement,
    b: &FieldElement,
    open_lo: bool,
    open_hi: bool,
    forbidden: &[Forbidden],
    len: &FieldElement,
) -> Option<(FieldElement, FieldElement)> {
    let f = a.field();
    let two = FieldElement::from_int(f, 2);
    let mut cur = a.clone();
    let mut cur_open = open_lo;
    let try_gap = |u: &FieldElement, u_open: bool, v: &FieldElement, v_open: bool| {
        let room = v - u;
        let fits = if u_open || v_open { &room > len } else { &room >= len };
        if !fits {
            return None;
        }
        if u_open {
            let mid = &(u + v) / &two;
            let half = len / &two;
            Some((&mid - &half, &mid + &half))
        } else {
            Some((u.clone(), u + len))
        }
    };
    for fb in forbidden {
        if &fb.lo > b {
            break;
        }
        if fb.lo > cur {
            if let Some(iv) = try_gap(&cur, cur_open, &fb.lo, false) {
                return Some(iv);
            }
        }
        if fb.hi > cur {
            cur = fb.hi.clone();
            cur_open = false;
        }
        if &cur >= b {
            return None;
        }
    }
    try_gap(&cur, cur_open, b, open_hi)
}

/// Check `||x lambda^n - r||_Z >= c` for every `x` in `[a, b]` exactly.
fn interval_clear(
    a: &FieldElement,
    b: &FieldElement,
    lam_pow: &FieldElement,
    targets: &[BigRational],
    c: &BigRational,
) -> bool {
    let f = a.field();
    let cf = FieldElement::from_rational(f, c.clone());
    let one = FieldElement::one(f);
    let xa = a * lam_pow;
    let xb = b * lam_pow;
    targets.iter().all(|r| {
        let rf = FieldElement::from_rational(f, r.clone());
        let ya = &xa - &rf;
        let yb = &xb - &rf;
        let k = ya.floor();
        if yb.floor() != k {
            return false;
        }
        let kf = FieldElement::from_bigint(f, k);
        ya >= &kf + &cf && yb <= &(&kf + &one) - &cf
    })
}

/// Build a certificate of depth `depth` using the closed-form constant.
pub fn erdos_construct(lambda: &FieldElement, targets: &[BigRational], depth: u32) -> Result<ErdosCertificate> {
    erdos_construct_with_c(lambda, targets, depth, None)
}

/// As [`erdos_construct`], optionally with a user-supplied smaller constant.
pub fn erdos_construct_with_c(
    lambda: &FieldElement,
    targets: &[BigRational],
    depth: u32,
    c_override: Option<BigRational>,
) -> Result<ErdosCertificate> {
    if targets.is_empty() {
        return Err(Error::Precondition("at least one target residue is required".into()));
    }
    let params = erdos_params(lambda, targets.len())?;
    let c = match c_override {
        None => params.c.clone(),
        Some(c) => {
            if !c.is_positive() || c > params.c {
                return Err(Error::Precondition(format!(
                    "constant {} must lie in (0, {}]",
                    crate::codec::rat_to_string(&c),
                    crate::codec::rat_to_string(&params.c)
                )));
            }
            c
        }
    };
    let g = params.g;
    let f = lambda.field();
    let inequalities = proof_inequalities(lambda, &c, targets.len(), g);
    let targets: Vec<BigRational> = targets.iter().map(|r| r - r.floor()).collect();

    // Base length: rational lower bound of sqrt(2 lambda c) with 64 guard bits.
    let base = lambda.to_ball_rel(128).mul_rational(&(&c * BigRational::from_integer(2.into())));
    let base_length = round_down_dyadic(&base.sqrt().expect("positive").lower(), 64);
    let len0 = FieldElement::from_rational(f, base_length.clone());

    // I_0 avoids lambda * S_c inside (0, 1); this certifies n = -1.
    let zero = FieldElement::zero(f);
    let one = FieldElement::one(f);
    let lam_inv = lambda.inv()?;
    let forb = forbidden_for(&zero, &one, &lam_inv, lambda, &targets, &c);
    let (a0, b0) = choose_gap(&zero, &one, true, true, &forb, &len0)
        .ok_or_else(|| Error::ConstructionFailure { step: 0, detail: "no admissible base interval".into() })?;
    if !interval_clear(&a0, &b0, &lam_inv, &targets, &c) {
        return Err(Error::ConstructionFailure { step: 0, detail: "base interval check failed".into() });
    }
    let mut intervals = vec![(a0, b0)];
    let lam_g = lambda.pow(i64::from(g))?;
    let lam_g_inv = lam_g.inv()?;
    let mut len = len0;
    for step in 0..depth {
        let (a, b) = intervals.last().cloned().expect("nonempty");
        len = &len * &lam_g_inv;
        let mut forb = Vec::new();
        let n0 = i64::from(g) * i64::from(step);
        let mut pw = lambda.pow(n0)?;
        let mut pw_inv = pw.inv()?;
        let mut powers = Vec::new();
        for _ in 0..g {
            forb.extend(forbidden_for(&a, &b, &pw, &pw_inv, &targets, &c));
            powers.push(pw.clone());
            pw = &pw * lambda;
            pw_inv = &pw_inv * &lam_inv;
        }
        forb.sort_by(|x, y| x.lo.cmp(&y.lo));
        let (na, nb) = choose_gap(&a, &b, false, false, &forb, &len).ok_or_else(|| Error::ConstructionFailure {
            step: step as usize + 1,
            detail: format!("no gap of length {} in the current interval", len.to_text()),
        })?;
        if !powers.iter().all(|p| interval_clear(&na, &nb, p, &targets, &c)) {
            return Err(Error::ConstructionFailure {
                step: step as usize + 1,
                detail: "removed-set check failed".into(),
            });
        }
        intervals.push((na, nb));
    }
    let (a, b) = intervals.last().cloned().expect("nonempty");
    let xi = &(&a + &b) / &FieldElement::from_int(f, 2);
    Ok(ErdosCertificate {
        lambda: lambda.clone(),
        targets,
        c,
        g,
        depth,
        base_length,
        intervals,
        xi,
        guaranteed_depth: i64::from(g) * i64::from(depth) - 1,
        first_n: -1,
        kind: CertificateKind::Constructed,
        inequalities,
    })
}

impl ErdosCertificate {
    /// A claim about a single point, to be checked for `0 <= n <= depth`.
    pub fn point(
        xi: FieldElement,
        lambda: FieldElement,
        targets: Vec<BigRational>,
        c: BigRational,
        depth: u32,
    ) -> Self {
        let inequalities = ProofInequalities { base: false, step: false };
        ErdosCertificate {
            intervals: vec![(xi.clone(), xi.clone())],
            xi,
            lambda,
            targets,
            c,
            g: 1,
            depth,
            base_length: BigRational::zero(),
            guaranteed_depth: i64::from(depth),
            first_n: 0,
            kind: CertificateKind::Point,
            inequalities,
        }
    }

    pub fn final_interval(&self) -> &(FieldElement, FieldElement) {
        self.intervals.last().expect("certificate has intervals")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": field_to_json(self.lambda.field()),
            "lambda": fe_to_json(&self.lambda),
            "targets": self.targets.iter().map(rat_to_json).collect::<Vec<_>>(),
            "c": rat_to_json(&self.c),
            "g": self.g,
            "depth": self.depth,
            "base_length": rat_to_json(&self.base_length),
            "intervals": self.intervals.iter().map(|(a, b)| json!([fe_to_json(a), fe_to_json(b)])).collect::<Vec<_>>(),
            "xi": fe_to_json(&self.xi),
            "guaranteed_depth": self.guaranteed_depth,
            "first_n": self.first_n,
            "kind": match self.kind { CertificateKind::Constructed => "constructed", CertificateKind::Point => "point" },
            "inequalities": { "base": self.inequalities.base, "step": self.inequalities.step },
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field: Field = field_from_json(get(v, "field")?)?;
        let int = |key: &str| get(v, key)?.as_i64().ok_or_else(|| Error::Parse(format!("'{key}' must be an integer")));
        let intervals = get(v, "intervals")?
            .as_array()
            .ok_or_else(|| Error::Parse("'intervals' must be an array".into()))?
            .iter()
            .map(|iv| {
                let pair = iv.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse("bad interval".into()))?;
                Ok((fe_from_json(&pair[0], field)?, fe_from_json(&pair[1], field)?))
            })
            .collect::<Result<Vec<_>>>()?;
        if intervals.is_empty() {
            return Err(Error::Parse("certificate has no intervals".into()));
        }
        let kind = match get(v, "kind")?.as_str() {
            Some("constructed") => CertificateKind::Constructed,
            Some("point") => CertificateKind::Point,
            _ => return Err(Error::Parse("unknown certificate kind".into())),
        };
        let ineq = get(v, "inequalities")?;
        Ok(ErdosCertificate {
            lambda: fe_from_json(get(v, "lambda")?, field)?,
            targets: get(v, "targets")?
                .as_array()
                .ok_or_else(|| Error::Parse("'targets' must be an array".into()))?
                .iter()
                .map(rat_from_json)
                .collect::<Result<_>>()?,
            c: rat_from_json(get(v, "c")?)?,
            g: u32::try_from(int("g")?).map_err(|_| Error::Parse("bad g".into()))?,
            depth: u32::try_from(int("depth")?).map_err(|_| Error::Parse("bad depth".into()))?,
            base_length: rat_from_json(get(v, "base_length")?)?,
            intervals,
            xi: fe_from_json(get(v, "xi")?, field)?,
            guaranteed_depth: int("guaranteed_depth")?,
            first_n: int("first_n")?,
            kind,
            inequalities: ProofInequalities {
                base: ineq.get("base").and_then(Value::as_bool).unwrap_or(false),
                step: ineq.get("step").and_then(Value::as_bool).unwrap_or(false),
            },
        })
    }
}

/// Result of [`erdos_verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct ErdosReport {
    /// All structural checks and all `n` in `[first_n, guaranteed_depth]` pass.
    pub certified: bool,
    /// Smallest observed `||xi lambda^n - r_i||_Z` over all checked `n`.
    pub empirical_min: f64,
    /// Smallest `n` at which the bound fails (at the whole interval for certified
    /// `n`, at `xi` beyond).
    pub first_violation: Option<i64>,
    /// Structural problems (nesting, length law, window), if any.
    pub structural_errors: Vec<String>,
    pub checked_through: i64,
}

/// Distances `||xi lambda^n - r||_Z` computed by modular arithmetic for integer
/// `lambda` and rational `xi`.
struct ModularOrbit {
    lambda: BigInt,
    residues: Vec<(BigInt, BigInt, BigInt)>, // (numerator mod den, den, shift) per target
}

impl ModularOrbit {
    fn new(xi: &BigRational, lambda: BigInt, targets: &[BigRational]) -> Self {
        // xi lambda^n - r = (p lambda^n u - s q) / (q u); track p lambda^n mod q u.
        let residues = targets
            .iter()
            .map(|r| {
                let den = xi.denom() * r.denom();
                let num = (xi.numer() * r.denom()).mod_floor(&den);
                let shift = r.numer() * xi.denom();
                (num, den, shift)
            })
            .collect();
        ModularOrbit { lambda, residues }
    }

    /// Distances at the current `n`, then advance.
    fn step(&mut self) -> Vec<BigRational> {
        let lam = self.lambda.clone();
        self.residues
            .iter_mut()
            .map(|(num, den, shift)| {
                let v = BigRational::new((&*num - &*shift).mod_floor(den), den.clone());
                *num = (&*num * &lam).mod_floor(den);
                dist_to_int(&v)
            })
            .collect()
    }
}

/// Independently re-check a certificate and probe `xi` empirically up to `extra_n`.
pub fn erdos_verify(cert: &ErdosCertificate, extra_n: i64) -> ErdosReport {
    let f = cert.lambda.field();
    let mut structural = Vec::new();
    if cert.lambda <= FieldElement::one(f) {
        structural.push("lambda must exceed 1".to_string());
    }
    if !cert.c.is_positive() {
        structural.push("c must be positive".to_string());
    }
    for (i, (a, b)) in cert.intervals.iter().enumerate() {
        if a.field() != f || b.field() != f {
            structural.push(format!("interval {i} lives in another field"));
            continue;
        }
        if a > b {
            structural.push(format!("interval {i} is empty"));
        }
        if i > 0 {
            let (pa, pb) = &cert.intervals[i - 1];
            if a < pa || b > pb {
                structural.push(format!("interval {i} is not nested in interval {}", i - 1));
            }
        }
    }
    if cert.kind == CertificateKind::Constructed {
        let (a0, b0) = &cert.intervals[0];
        if !(a0.is_positive() && b0 < &FieldElement::one(f)) {
            structural.push("I_0 is not inside (0, 1)".into());
        }
        if cert.intervals.len() != cert.depth as usize + 1 {
            structural.push("interval count differs from depth + 1".into());
        }
        if cert.guaranteed_depth != i64::from(cert.g) * i64::from(cert.depth) - 1 {
            structural.push("guaranteed depth differs from g*M - 1".into());
        }
        match cert.lambda.pow(i64::from(cert.g)) {
            Ok(lam_g) => {
                let mut scale = FieldElement::one(f);
                let l0 = FieldElement::from_rational(f, cert.base_length.clone());
                for (i, (a, b)) in cert.intervals.iter().enumerate() {
                    if (&(b - a) * &scale) != l0 {
                        structural.push(format!("interval {i} violates the length law"));
                    }
                    scale = &scale * &lam_g;
                }
            }
            Err(e) => structural.push(e.to_string()),
        }
    }
    if !cert.xi_inside() {
        structural.push("xi is not inside the final interval".into());
    }

    let (a, b) = cert.final_interval().clone();
    let mut first_violation = None;
    let mut empirical_min = f64::INFINITY;
    let rational_xi = cert.xi.as_rational().cloned();
    let int_lambda = cert.lambda.as_integer();
    let point = a == b;

    // Certified range: whole final interval.
    let mut hard_ok = structural.is_empty();
    let hard_end = cert.guaranteed_depth;
    let mut n = cert.first_n;
    let modular = match (&rational_xi, &int_lambda) {
        (Some(xi), Some(l)) if point && cert.first_n >= 0 => Some((xi, l.clone())),
        _ => None,
    };
    if let Some((xi, l)) = modular {
        let mut orbit = ModularOrbit::new(xi, l, &cert.targets);
        for _ in 0..cert.first_n {
            orbit.step();
        }
        while n <= extra_n.max(hard_end) {
            let d = orbit.step();
            let min = d.iter().min().cloned().unwrap_or_else(|| rat(1, 2));
            empirical_min = empirical_min.min(min.to_f64().unwrap_or(0.0));
            if min < cert.c && first_violation.is_none() {
                first_violation = Some(n);
                if n <= hard_end {
                    hard_ok = false;
                }
            }
            n += 1;
        }
    } else {
        let mut pw = match cert.lambda.pow(n) {
            Ok(p) => p,
            Err(e) => {
                structural.push(e.to_string());
                FieldElement::one(f)
            }
        };
        while n <= hard_end {
            if !interval_clear(&a, &b, &pw, &cert.targets, &cert.c) {
                hard_ok = false;
                first_violation.get_or_insert(n);
            }
            let x = &cert.xi * &pw;
            let min = cert
                .targets
                .iter()
                .map(|r| dist_to_int_fe(&(&x - &FieldElement::from_rational(f, r.clone()))).to_f64())
                .fold(f64::INFINITY, f64::min);
            empirical_min = empirical_min.min(min);
            pw = &pw * &cert.lambda;
            n += 1;
        }
        // Report-only range beyond the guarantee: exact arithmetic at xi.
        while n <= extra_n {
            let x = &cert.xi * &pw;
            let mut min_exact: Option<FieldElement> = None;
            for r in &cert.targets {
                let d = dist_to_int_fe(&(&x - &FieldElement::from_rational(f, r.clone())));
                if min_exact.as_ref().is_none_or(|m| &d < m) {
                    min_exact = Some(d);
                }
            }
            if let Some(m) = min_exact {
                empirical_min = empirical_min.min(m.to_f64());
                if m < FieldElement::from_rational(f, cert.c.clone()) {
                    first_violation.get_or_insert(n);
                }
            }
            pw = &pw * &cert.lambda;
            n += 1;
        }
    }
    ErdosReport {
        certified: hard_ok && structural.is_empty(),
        empirical_min,
        first_violation,
        structural_errors: structural,
        checked_through: n - 1,
    }
}

impl ErdosCertificate {
    fn xi_inside(&self) -> bool {
        let (a, b) = self.final_interval();
        a.field() == self.xi.field() && a <= &self.xi && &self.xi <= b
    }
}

impl ErdosReport {
    pub fn to_json(&self) -> Value {
        json!({
            "certified": self.certified,
            "empirical_min": if self.empirical_min.is_finite() { json!(self.empirical_min) } else { Value::Null },
            "first_violation": self.first_violation,
            "structural_errors": self.structural_errors,
            "checked_through": self.checked_through,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qf(n: i64) -> FieldElement {
        FieldElement::from_int(Field::RATIONAL, n)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dist_to_int(&rat(1, 2)), rat(1, 2));
        assert_eq!(dist_to_int(&rat(-1, 5)), rat(1, 5));
        assert_eq!(dist_to_int(&rat(7, 1)), rat(0, 1));
        let b = dist_to_int_ball(&RBall::from_rational(&rat(-1, 5), 64));
        assert!(b.contains(&rat(1, 5)));
        let f = Field::new(10, 2).unwrap();
        let t = FieldElement::theta(f);
        assert!((dist_to_int_fe(&t).to_f64() - (10f64.sqrt() - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn parameter_examples() {
        assert_eq!(erdos_params(&qf(2), 1).unwrap(), ErdosParams { g: 3, c: rat(1, 1440), c_exact: true });
        assert_eq!(erdos_params(&qf(3), 1).unwrap(), ErdosParams { g: 2, c: rat(1, 1215), c_exact: true });
        assert_eq!(erdos_params(&qf(10), 1).unwrap(), ErdosParams { g: 1, c: rat(9, 20000), c_exact: true });
        assert!(matches!(erdos_params(&qf(1), 1), Err(Error::InvalidLambda(_))));
        let f = Field::new(10, 2).unwrap();
        let p = erdos_params(&FieldElement::theta(f), 2).unwrap();
        assert_eq!(p.g, 2);
        let exact = (10f64.sqrt() - 1.0).powi(2) / (20.0 * 16.0 * 10f64.sqrt().powi(3));
        let c = p.c.to_f64().unwrap();
        assert!(((c - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn base_case_lambda_two() {
        let cert = erdos_construct(&qf(2), &[rat(0, 1)], 0).unwrap();
        let (a, b) = &cert.intervals[0];
        let len = (b - a).to_f64();
        assert!((len - (1.0f64 / 360.0).sqrt()).abs() < 1e-15);
        assert!(a.is_positive() && b < &qf(1));
        assert_eq!(cert.guaranteed_depth, -1);
        assert!(cert.inequalities.base && cert.inequalities.step);
        assert!(erdos_verify(&cert, 0).certified);
    }

    #[test]
    fn depth_five_certificate() {
        let cert = erdos_construct(&qf(2), &[rat(0, 1)], 5).unwrap();
        assert_eq!(cert.guaranteed_depth, 14);
        let rep = erdos_verify(&cert, 40);
        assert!(rep.certified, "{rep:?}");
        assert!(rep.empirical_min >= 1.0 / 1440.0);
    }

    #[test]
    fn trivial_point_oracles() {
        let third = FieldElement::from_rational(Field::RATIONAL, rat(1, 3));
        let c = ErdosCertificate::point(third.clone(), qf(2), vec![rat(0, 1)], rat(1, 3), 10_000);
        let r = erdos_verify(&c, 10_000);
        assert!(r.certified && r.first_violation.is_none());
        assert_eq!(r.empirical_min, 1.0 / 3.0);

        let half = FieldElement::from_rational(Field::RATIONAL, rat(1, 2));
        let c = ErdosCertificate::point(half, qf(3), vec![rat(0, 1)], rat(1, 2), 10_000);
        assert!(erdos_verify(&c, 10_000).certified);

        let c = ErdosCertificate::point(third, qf(3), vec![rat(0, 1)], rat(1, 100), 10);
        let r = erdos_verify(&c, 10);
        assert!(!r.certified);
        assert_eq!(r.first_violation, Some(1));
    }

    #[test]
    fn user_constant_must_not_exceed_closed_form() {
        assert!(erdos_construct_with_c(&qf(2), &[rat(0, 1)], 2, Some(rat(1, 100))).is_err());
        let c = erdos_construct_with_c(&qf(2), &[rat(0, 1)], 2, Some(rat(1, 2000))).unwrap();
        assert!(erdos_verify(&c, 10).certified);
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut cert = erdos_construct(&qf(2), &[rat(0, 1)], 3).unwrap();
        cert.c = rat(1, 3);
        assert!(!erdos_verify(&cert, 0).certified);
        let mut cert = erdos_construct(&qf(2), &[rat(0, 1)], 3).unwrap();
        let (a, _) = cert.intervals[3].clone();
        cert.intervals[3].1 = &a + &qf(1);
        assert!(!erdos_verify(&cert, 0).certified);
    }

    #[test]
    fn json_round_trip() {
        let cert = erdos_construct(&qf(3), &[rat(0, 1), rat(1, 2)], 3).unwrap();
        let back = ErdosCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(erdos_verify(&back, 0).certified);
    }
}
