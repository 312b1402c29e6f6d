//! Decision procedures for refinability of box splines under algebraic dilations.
//!
//! The decider is always exact sequential division of
//! `prod_j (1 - E(lambda m_j))` by the binomials `1 - E(m_j)`; the structural
//! conditions (cycles of integer multipliers, chain partitions) are reported
//! alongside it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::CBall;
use crate::error::{Error, Result};
use crate::exactreal::{lcm_denominators, rank, Field, FieldElement};
use crate::poly::RatPoly;
use crate::powermod::{erdos_construct, erdos_params, ErdosCertificate};
use crate::qtrig::{dot_int, MvTrigPoly, QTrigPoly};
use crate::splinecore::{
    convolution_factorization_check, integer_dilation_box_mask, BoxSplineSpec, FactorizationReport, MaskSpec,
    MvMaskSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Refinable,
    NotRefinable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Refinable => "refinable",
            Verdict::NotRefinable => "not_refinable",
        }
    }
}

/// A residue class of the partial quotient whose coefficients do not cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionWitness {
    /// Index of the (sign-normalized) column whose binomial failed to divide.
    pub column: usize,
    pub divisor: FieldElement,
    /// Smallest exponent of the offending class `representative + divisor Z`.
    pub representative: FieldElement,
    pub class_sum: BigRational,
}

/// Evidence for a negative verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// No column `m` has `lambda m / m_0` an integer.
    ConditionB {
        column: usize,
        value: FieldElement,
    },
    Division(DivisionWitness),
    /// A univariate slice `w = z * probe` is already not refinable.
    Slice {
        probe: Vec<i64>,
        inner: Box<Witness>,
    },
    /// Multivariate division failed at this column.
    MvDivision {
        column: usize,
    },
    /// `lambda^k` is never an integer for `k` up to the field degree.
    ConditionA,
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::ConditionB { .. } => "condition_b",
            Witness::Division(_) => "division",
            Witness::Slice { .. } => "slice",
            Witness::MvDivision { .. } => "mv_division",
            Witness::ConditionA => "condition_a",
        }
    }
}

/// Result of [`mask_construct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskConstruction {
    pub lambda: FieldElement,
    /// Absolute values of the input columns.
    pub normalized: Vec<FieldElement>,
    /// `sum (lambda - 1) a` over negative input columns `a`; the mask of the
    /// signed spline is `E(phase_shift) H`.
    pub phase_shift: FieldElement,
    pub outcome: std::result::Result<MaskSpec, DivisionWitness>,
    /// The identity `prod Q(lambda m) = lambda^n H prod Q(m)` was re-multiplied and holds.
    pub identity_verified: bool,
}

impl MaskConstruction {
    pub fn mask(&self) -> Option<&MaskSpec> {
        self.outcome.as_ref().ok()
    }

    pub fn witness(&self) -> Option<&DivisionWitness> {
        self.outcome.as_ref().err()
    }

    /// Mask of the spline with the original (signed) directions.
    pub fn signed_mask(&self) -> Option<QTrigPoly> {
        self.mask().map(|m| m.mask().shift(&self.phase_shift))
    }
}

fn check_inputs(columns: &[FieldElement], lambda: &FieldElement) -> Result<()> {
    let f = lambda.field();
    if *lambda <= FieldElement::one(f) {
        return Err(Error::InvalidLambda(lambda.to_text()));
    }
    if columns.is_empty() {
        return Err(Error::Precondition("at least one direction is required".into()));
    }
    for (i, c) in columns.iter().enumerate() {
        f.check_same(&c.field())?;
        if c.is_zero() {
            return Err(Error::ZeroColumn(i));
        }
    }
    Ok(())
}

fn numerator(columns: &[FieldElement], lambda: &FieldElement) -> QTrigPoly {
    columns.iter().fold(QTrigPoly::one(lambda.field()), |acc, m| acc.mul(&QTrigPoly::binomial(&(lambda * m))))
}

/// Mask of `B(x | A)` for dilation `lambda`, or the residue class that blocks it.
pub fn mask_construct(columns: &[FieldElement], lambda: &FieldElement) -> Result<MaskConstruction> {
    check_inputs(columns, lambda)?;
    let f = lambda.field();
    let lm1 = lambda - &FieldElement::one(f);
    let mut phase = FieldElement::zero(f);
    let normalized: Vec<FieldElement> = columns
        .iter()
        .map(|a| {
            if a.is_negative() {
                phase = &phase + &(&lm1 * a);
                a.neg()
            } else {
                a.clone()
            }
        })
        .collect();
    let num = numerator(&normalized, lambda);
    let mut q = num.clone();
    for (j, m) in normalized.iter().enumerate() {
        match q.divide_binomial_detailed(m) {
            Ok(next) => q = next,
            Err(o) => {
                let w = DivisionWitness {
                    column: j,
                    divisor: m.clone(),
                    representative: o.representative,
                    class_sum: o.class_sum,
                };
                return Ok(MaskConstruction {
                    lambda: lambda.clone(),
                    normalized,
                    phase_shift: phase,
                    outcome: Err(w),
                    identity_verified: false,
                });
            }
        }
    }
    let sum = q.coefficient_sum();
    let ln = lambda.pow(normalized.len() as i64)?;
    if FieldElement::from_rational(f, sum.clone()) != ln {
        return Err(Error::Internal(format!("quotient sum {sum} differs from lambda^n = {}", ln.to_text())));
    }
    let h = q.scale(&sum.recip());
    let den = normalized.iter().fold(QTrigPoly::one(f), |acc, m| acc.mul(&QTrigPoly::binomial(m)));
    let identity_verified = h.scale(&sum).mul(&den) == num;
    if !identity_verified {
        return Err(Error::Internal("mask identity failed after successful division".into()));
    }
    Ok(MaskConstruction {
        lambda: lambda.clone(),
        normalized,
        phase_shift: phase,
        outcome: Ok(MaskSpec::new(lambda.clone(), h)?),
        identity_verified,
    })
}

/// Check `prod Q(lambda m) = lambda^n H prod Q(m)` for a claimed mask and the
/// columns as given (signed). False when `lambda^n` is irrational, since then no
/// rational-coefficient mask can satisfy it.
pub fn verify_mask_identity(columns: &[FieldElement], mask: &MaskSpec) -> Result<bool> {
    let lambda = mask.lambda();
    check_inputs(columns, lambda)?;
    let Some(ln) = lambda.pow(columns.len() as i64)?.as_rational().cloned() else {
        return Ok(false);
    };
    let f = lambda.field();
    let den = columns.iter().fold(QTrigPoly::one(f), |acc, m| acc.mul(&QTrigPoly::binomial(m)));
    Ok(mask.mask().scale(&ln).mul(&den) == numerator(columns, lambda))
}

/// Check a division witness without the division routine's class bookkeeping:
/// redo the earlier divisions and sum the class of the representative directly.
pub fn verify_division_witness(normalized: &[FieldElement], lambda: &FieldElement, w: &DivisionWitness) -> bool {
    let mut q = numerator(normalized, lambda);
    for m in &normalized[..w.column] {
        match q.divide_binomial(m) {
            Some(next) => q = next,
            None => return false,
        }
    }
    if normalized.get(w.column) != Some(&w.divisor) {
        return false;
    }
    let mut sum = BigRational::zero();
    for (d, c) in q.terms() {
        if matches!((d - &w.representative).int_ratio(&w.divisor), Ok(Some(_))) {
            sum += c;
        }
    }
    !sum.is_zero() && sum == w.class_sum
}

/// Pairs `(u, p)` with `lambda m_u = p m_0` for each column `m_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionB {
    pub pairs: Vec<Vec<(usize, BigInt)>>,
    /// First column with no partner.
    pub violation: Option<usize>,
}

impl ConditionB {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn condition_b(columns: &[FieldElement], lambda: &FieldElement) -> Result<ConditionB> {
    check_inputs(columns, lambda)?;
    let mut pairs = Vec::with_capacity(columns.len());
    for m0 in columns {
        let mut row = Vec::new();
        for (u, m) in columns.iter().enumerate() {
            if let Some(p) = (lambda * m).int_ratio(m0)? {
                row.push((u, p));
            }
        }
        pairs.push(row);
    }
    let violation = pairs.iter().position(Vec::is_empty);
    Ok(ConditionB { pairs, violation })
}

/// Smallest `k <= degree` with `lambda^k` an integer.
pub fn minimal_integer_power(lambda: &FieldElement) -> Option<u32> {
    let mut p = lambda.clone();
    for k in 1..=lambda.field().degree().max(1) {
        if p.is_integer() {
            return Some(k);
        }
        p = &p * lambda;
    }
    None
}

/// Cycle of integer multipliers and chain decomposition of the columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStructure {
    /// Cycle length.
    pub l: usize,
    /// Column indices along the cycle.
    pub cycle: Vec<usize>,
    /// `p_i` with `m_{cycle[i+1]} = p_i m_{cycle[i]} / lambda`.
    pub multipliers: Vec<BigInt>,
    /// `(m_0, P_1 m_0 / lambda, ..., P_{l-1} m_0 / lambda^{l-1})` with `P_j` cumulative products.
    pub subvector: Vec<FieldElement>,
    /// `P_j | P_{j+1}` and `P_{l-1} | lambda^l`.
    pub divisibility_ok: bool,
    pub k: Option<u32>,
    /// Partition into `(m, lambda m, ..., lambda^{k-1} m)` when one exists.
    pub partition: Option<Vec<Vec<usize>>>,
}

pub fn chain_structure(columns: &[FieldElement], lambda: &FieldElement) -> Result<ChainStructure> {
    let cb = condition_b(columns, lambda)?;
    if let Some(v) = cb.violation {
        return Err(Error::Precondition(format!("condition (B) fails at column {v}")));
    }
    let f = lambda.field();
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    let mut path: Vec<(usize, BigInt)> = Vec::new();
    let mut u = 0usize;
    while !seen.contains_key(&u) {
        seen.insert(u, path.len());
        let (next, p) = cb.pairs[u][0].clone();
        path.push((u, p));
        u = next;
    }
    let start = seen[&u];
    let cycle: Vec<usize> = path[start..].iter().map(|x| x.0).collect();
    let multipliers: Vec<BigInt> = path[start..].iter().map(|x| x.1.clone()).collect();
    let l = cycle.len();
    let product: BigInt = multipliers.iter().product();
    if FieldElement::from_bigint(f, product.clone()) != lambda.pow(l as i64)? {
        return Err(Error::CycleInconsistency { product: product.to_string(), length: l });
    }
    let m0 = &columns[cycle[0]];
    let mut subvector = vec![m0.clone()];
    let mut cum = BigInt::one();
    let mut cums = Vec::new();
    for (i, p) in multipliers.iter().take(l - 1).enumerate() {
        cum *= p;
        cums.push(cum.clone());
        let v = m0.scale(&BigRational::from_integer(cum.clone())).checked_div(&lambda.pow(i as i64 + 1)?)?;
        if v != columns[cycle[i + 1]] {
            return Err(Error::Internal("chain element disagrees with the cycle".into()));
        }
        subvector.push(v);
    }
    let mut divisibility_ok = cums.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
    if let Some(last) = cums.last() {
        divisibility_ok &= product.is_multiple_of(last);
    }
    let k = minimal_integer_power(lambda);
    let partition = k.and_then(|k| chain_partition(columns, lambda, k));
    Ok(ChainStructure { l, cycle, multipliers, subvector, divisibility_ok, k, partition })
}

/// Greedy split into `(m, lambda m, ..., lambda^{k-1} m)`; the smallest remaining
/// column must start a chain, so greedy is complete.
fn chain_partition(columns: &[FieldElement], lambda: &FieldElement, k: u32) -> Option<Vec<Vec<usize>>> {
    let mut order: Vec<usize> = (0..columns.len()).collect();
    order.sort_by(|&a, &b| columns[a].abs().cmp(&columns[b].abs()).then(a.cmp(&b)));
    let mut used = vec![false; columns.len()];
    let mut out = Vec::new();
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut chain = vec![i];
        let mut cur = columns[i].clone();
        for _ in 1..k {
            cur = &cur * lambda;
            let j = order.iter().copied().find(|&j| !used[j] && columns[j] == cur)?;
            used[j] = true;
            chain.push(j);
        }
        out.push(chain);
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionFlags {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

/// Decision for a univariate box spline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinabilityReport {
    pub verdict: Verdict,
    pub lambda: FieldElement,
    pub columns: Vec<FieldElement>,
    pub construction: MaskConstruction,
    pub condition_b: ConditionB,
    pub chains: Option<ChainStructure>,
    pub flags: ConditionFlags,
    pub witness: Option<Witness>,
}

impl RefinabilityReport {
    pub fn mask(&self) -> Option<&MaskSpec> {
        self.construction.mask()
    }

    pub fn is_refinable(&self) -> bool {
        self.verdict == Verdict::Refinable
    }

    /// Re-check the witness from scratch.
    pub fn verify_witness(&self) -> bool {
        match &self.witness {
            None => self.is_refinable(),
            Some(Witness::ConditionB { column, value }) => {
                let norm = &self.construction.normalized;
                norm.get(*column) == Some(value)
                    && norm.iter().all(|m| !matches!((&self.lambda * m).int_ratio(value), Ok(Some(_))))
            }
            Some(Witness::Division(w)) => verify_division_witness(&self.construction.normalized, &self.lambda, w),
            Some(Witness::ConditionA) => minimal_integer_power(&self.lambda).is_none(),
            Some(_) => false,
        }
    }
}

/// Full univariate decision: division verdict plus structural conditions.
pub fn decide(columns: &[FieldElement], lambda: &FieldElement) -> Result<RefinabilityReport> {
    let construction = mask_construct(columns, lambda)?;
    let cb = condition_b(&construction.normalized, lambda)?;
    let chains = if cb.holds() { Some(chain_structure(&construction.normalized, lambda)?) } else { None };
    let k = minimal_integer_power(lambda);
    let flags = ConditionFlags {
        a: k.is_some(),
        b: cb.holds(),
        c: chains.is_some(),
        d: chains.as_ref().is_some_and(|c| c.partition.is_some()),
    };
    let (verdict, witness) = match &construction.outcome {
        Ok(_) => (Verdict::Refinable, None),
        Err(w) => {
            let wit = match cb.violation {
                Some(i) => Witness::ConditionB { column: i, value: construction.normalized[i].clone() },
                None => Witness::Division(w.clone()),
            };
            (Verdict::NotRefinable, Some(wit))
        }
    };
    Ok(RefinabilityReport {
        verdict,
        lambda: lambda.clone(),
        columns: columns.to_vec(),
        construction,
        condition_b: cb,
        chains,
        flags,
        witness,
    })
}

/// Outcome of the Lawton divisibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawtonReport {
    pub refinable: bool,
    /// `Q(z) = (z - 1)^{d+1} P(z)`.
    pub q: RatPoly,
    pub quotient: Option<RatPoly>,
    pub remainder: RatPoly,
}

/// Does `Q(z)` divide `Q(z^m)` for `Q(z) = (z - 1)^{d+1} sum p_n z^n`?
pub fn lawton_check(p: &[BigRational], d: usize, m: u64) -> Result<LawtonReport> {
    if m < 2 {
        return Err(Error::Precondition(format!("dilation m = {m} must be at least 2")));
    }
    if p.last().is_none_or(Zero::is_zero) {
        return Err(Error::Precondition("leading coefficient p_K must be nonzero".into()));
    }
    let zm1 = RatPoly::from_ints(&[-1, 1]);
    let q = zm1.pow(d as u32 + 1).mul(&RatPoly::new(p.to_vec()));
    let qm = q.compose_pow(m as usize);
    let (quot, rem) = qm.divrem(&q)?;
    let refinable = rem.is_zero();
    Ok(LawtonReport { refinable, q, quotient: refinable.then_some(quot), remainder: rem })
}

/// A zero of the denominator not matched by the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncoveredZero {
    pub w: FieldElement,
    pub denominator_multiplicity: usize,
    pub numerator_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub consistent: bool,
    pub uncovered: Option<UncoveredZero>,
    pub bound: u64,
    pub zeros_checked: usize,
}

/// Denominator of `q` as a `u64`, or `None` when `q` is irrational or the denominator is huge.
fn rational_denominator(q: &FieldElement) -> Option<Option<u64>> {
    q.as_rational().map(|r| r.denom().to_u64())
}

/// Independent zero-set comparison: every zero `w = I / m_j`, `0 < I <= bound`,
/// must be a numerator zero of at least the same multiplicity.
pub fn coverage_oracle(columns: &[FieldElement], lambda: &FieldElement, bound: u64) -> Result<Coverage> {
    check_inputs(columns, lambda)?;
    let cols: Vec<FieldElement> = columns.iter().map(FieldElement::abs).collect();
    let n = cols.len();
    let mut checked = 0;
    for j in 0..n {
        // w m / m_j in Z iff the ratio is rational with denominator dividing I.
        let den: Vec<Option<Option<u64>>> =
            cols.iter().map(|m| rational_denominator(&m.checked_div(&cols[j]).expect("nonzero"))).collect();
        let num: Vec<Option<Option<u64>>> =
            cols.iter().map(|m| rational_denominator(&(lambda * m).checked_div(&cols[j]).expect("nonzero"))).collect();
        let hits = |v: &[Option<Option<u64>>], i: u64| {
            v.iter().filter(|r| matches!(r, Some(Some(q)) if i.is_multiple_of(*q))).count()
        };
        for i in 1..=bound {
            checked += 1;
            let dm = hits(&den, i);
            let nm = hits(&num, i);
            if nm < dm {
                let w = FieldElement::from_int(lambda.field(), i as i64).checked_div(&cols[j])?;
                return Ok(Coverage {
                    consistent: false,
                    uncovered: Some(UncoveredZero { w, denominator_multiplicity: dm, numerator_multiplicity: nm }),
                    bound,
                    zeros_checked: checked,
                });
            }
        }
    }
    Ok(Coverage { consistent: true, uncovered: None, bound, zeros_checked: checked })
}

/// `20 n ceil(lambda^k)` with `k` the minimal integer power (field degree if none).
pub fn default_coverage_bound(n: usize, lambda: &FieldElement) -> u64 {
    let k = minimal_integer_power(lambda).unwrap_or(lambda.field().degree());
    let lk = lambda.pow(k as i64).map(|x| x.to_f64()).unwrap_or(f64::INFINITY);
    20 * n as u64 * lk.ceil().min(1e6) as u64
}

/// Confirmed vector relation `lambda m_from = p m_to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnRelation {
    pub from: usize,
    pub to: usize,
    pub p: BigInt,
}

/// Decision for a multivariate box spline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvReport {
    pub verdict: Verdict,
    pub lambda: FieldElement,
    pub mask: Option<MvMaskSpec>,
    pub probes: Vec<Vec<i64>>,
    pub slices: Vec<RefinabilityReport>,
    pub relations: Vec<ColumnRelation>,
    /// Connected components of the relation graph.
    pub chains: Vec<Vec<usize>>,
    pub partition: Option<Vec<Vec<usize>>>,
    pub k: Option<u32>,
    pub witness: Option<Witness>,
    pub identity_verified: bool,
    /// Every slice of the multivariate mask equals the univariate mask of that slice.
    pub slice_masks_match: bool,
    /// The mask equals the product of per-chain geometric factors (when a partition exists).
    pub partition_mask_matches: Option<bool>,
}

const MAX_PROBE_RADIUS: i64 = 64;

/// Integer probes ordered by sup-norm, then lexicographically, with first
/// nonzero entry positive, avoiding every hyperplane `w . m_j = 0`.
/// The first `s` returned probes are linearly independent; `spares` more follow.
pub fn admissible_probes(spec: &BoxSplineSpec, spares: usize) -> Result<Vec<Vec<i64>>> {
    let s = spec.dim();
    let f = spec.field();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut extra: Vec<Vec<i64>> = Vec::new();
    let mut independent: Vec<Vec<FieldElement>> = Vec::new();
    for r in 1..=MAX_PROBE_RADIUS {
        let side = (2 * r + 1) as usize;
        let total = side.pow(s as u32);
        for idx in 0..total {
            let mut w = vec![0i64; s];
            let mut t = idx;
            for slot in w.iter_mut().rev() {
                *slot = (t % side) as i64 - r;
                t /= side;
            }
            if w.iter().map(|x| x.abs()).max() != Some(r) || w.iter().find(|&&x| x != 0).is_none_or(|&x| x < 0) {
                continue;
            }
            if spec.columns().iter().any(|m| dot_int(m, &w, f).is_zero()) {
                continue;
            }
            let row: Vec<FieldElement> = w.iter().map(|&x| FieldElement::from_int(f, x)).collect();
            let mut trial = independent.clone();
            trial.push(row);
            if independent.len() < s && rank(&trial) > independent.len() {
                independent = trial;
                basis.push(w);
            } else if extra.len() < spares {
                extra.push(w);
            }
            if basis.len() == s && extra.len() == spares {
                basis.append(&mut extra);
                return Ok(basis);
            }
        }
    }
    Err(Error::ProbeExhaustion { bound: MAX_PROBE_RADIUS })
}

fn components(n: usize, rel: &[ColumnRelation]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for e in rel {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Chain partition for vector columns: chains share the pivot coordinate and
/// are ordered by its magnitude.
fn mv_chain_partition(cols: &[Vec<FieldElement>], lambda: &FieldElement, k: u32) -> Option<Vec<Vec<usize>>> {
    let key = |v: &Vec<FieldElement>| {
        let p = v.iter().position(|x| !x.is_zero()).expect("nonzero column");
        (p, v[p].abs())
    };
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by(|&a, &b| key(&cols[a]).cmp(&key(&cols[b])).then(a.cmp(&b)));
    let mut used = vec![false; cols.len()];
    let mut out = Vec::new();
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut chain = vec![i];
        let mut cur = cols[i].clone();
        for _ in 1..k {
            cur = cur.iter().map(|x| x * lambda).collect();
            let j = order.iter().copied().find(|&j| !used[j] && cols[j] == cur)?;
            used[j] = true;
            chain.push(j);
        }
        out.push(chain);
    }
    Some(out)
}

/// Refinability of `B(x | M)` via univariate slices, exact relation recovery
/// and multivariate division.
pub fn multivariate_decide(spec: &BoxSplineSpec, lambda: &FieldElement) -> Result<MvReport> {
    let f = spec.field();
    f.check_same(&lambda.field())?;
    if *lambda <= FieldElement::one(f) {
        return Err(Error::InvalidLambda(lambda.to_text()));
    }
    let cols = spec.columns();
    let n = cols.len();
    let s = spec.dim();
    let k = minimal_integer_power(lambda);

    if let Some(m) = lambda.as_integer() {
        let m = m.to_u64().ok_or_else(|| Error::Precondition("dilation too large".into()))?;
        let mask = if cols.iter().flatten().all(FieldElement::is_integer) {
            integer_dilation_box_mask(spec, m)?
        } else {
            let h = cols.iter().fold(MvTrigPoly::one(f, s), |acc, c| acc.mul(&MvTrigPoly::geometric(m, c)));
            let scale = BigRational::new(BigInt::one(), BigInt::from(m).pow(n as u32));
            MvMaskSpec::new(lambda.clone(), h.scale(&scale))?
        };
        let identity = mv_identity(cols, lambda, mask.mask());
        return Ok(MvReport {
            verdict: Verdict::Refinable,
            lambda: lambda.clone(),
            mask: Some(mask),
            probes: Vec::new(),
            slices: Vec::new(),
            relations: Vec::new(),
            chains: (0..n).map(|i| vec![i]).collect(),
            partition: Some((0..n).map(|i| vec![i]).collect()),
            k: Some(1),
            witness: None,
            identity_verified: identity,
            slice_masks_match: true,
            partition_mask_matches: Some(true),
        });
    }

    let probes = admissible_probes(spec, 2)?;
    // The first s probes are linearly independent by construction.
    let basis = &probes[..s];
    let mut slices = Vec::with_capacity(probes.len());
    let mut report = MvReport {
        verdict: Verdict::NotRefinable,
        lambda: lambda.clone(),
        mask: None,
        probes: probes.clone(),
        slices: Vec::new(),
        relations: Vec::new(),
        chains: Vec::new(),
        partition: None,
        k,
        witness: None,
        identity_verified: false,
        slice_masks_match: false,
        partition_mask_matches: None,
    };
    for w in &probes {
        let a: Vec<FieldElement> = cols.iter().map(|m| dot_int(m, w, f)).collect();
        let r = decide(&a, lambda)?;
        let failed = r.witness.clone();
        slices.push(r);
        if let Some(inner) = failed {
            report.slices = slices;
            report.witness = Some(Witness::Slice { probe: w.clone(), inner: Box::new(inner) });
            return Ok(report);
        }
    }

    // Candidate relations from the first slice, confirmed on an independent probe set.
    let dots: Vec<Vec<FieldElement>> = basis.iter().map(|w| cols.iter().map(|m| dot_int(m, w, f)).collect()).collect();
    let mut relations = Vec::new();
    for u in 0..n {
        for i in 0..n {
            let Some(p) = (lambda * &dots[0][u]).int_ratio(&dots[0][i])? else { continue };
            let pf = FieldElement::from_bigint(f, p.clone());
            if dots.iter().all(|d| lambda * &d[u] == &pf * &d[i]) {
                relations.push(ColumnRelation { from: u, to: i, p });
            }
        }
    }
    report.chains = components(n, &relations);
    report.partition = k.and_then(|k| mv_chain_partition(cols, lambda, k));
    report.relations = relations;
    report.slices = slices;

    // Multivariate division is the decider.
    let num = cols.iter().fold(MvTrigPoly::one(f, s), |acc, m| {
        let lm: Vec<FieldElement> = m.iter().map(|x| lambda * x).collect();
        acc.mul(&MvTrigPoly::binomial(&lm))
    });
    let mut q = num.clone();
    for (j, m) in cols.iter().enumerate() {
        match q.divide_binomial(m) {
            Some(next) => q = next,
            None => {
                report.witness = Some(Witness::MvDivision { column: j });
                return Ok(report);
            }
        }
    }
    let sum = q.coefficient_sum();
    if FieldElement::from_rational(f, sum.clone()) != lambda.pow(n as i64)? {
        return Err(Error::Internal("multivariate quotient sum differs from lambda^n".into()));
    }
    let h = q.scale(&sum.recip());
    report.identity_verified = mv_identity(cols, lambda, &h);
    if !report.identity_verified {
        return Err(Error::Internal("multivariate mask identity failed".into()));
    }
    report.slice_masks_match = report
        .probes
        .iter()
        .zip(&report.slices)
        .all(|(w, r)| r.construction.signed_mask().as_ref() == Some(&h.slice(w)));
    if let (Some(part), Some(k)) = (&report.partition, k) {
        let nk = lambda.pow(k as i64)?.as_integer().and_then(|x| x.to_u64());
        report.partition_mask_matches = nk.map(|nk| {
            let prod = part.iter().fold(MvTrigPoly::one(f, s), |acc, ch| {
                acc.mul(
                    &MvTrigPoly::geometric(nk, &cols[ch[0]]).scale(&BigRational::new(BigInt::one(), BigInt::from(nk))),
                )
            });
            prod == h
        });
    }
    report.mask = Some(MvMaskSpec::new(lambda.clone(), h)?);
    report.verdict = Verdict::Refinable;
    Ok(report)
}

fn mv_identity(cols: &[Vec<FieldElement>], lambda: &FieldElement, h: &MvTrigPoly) -> bool {
    let f = lambda.field();
    let s = h.dim();
    let mut num = MvTrigPoly::one(f, s);
    let mut den = MvTrigPoly::one(f, s);
    for m in cols {
        let lm: Vec<FieldElement> = m.iter().map(|x| lambda * x).collect();
        num = num.mul(&MvTrigPoly::binomial(&lm));
        den = den.mul(&MvTrigPoly::binomial(m));
    }
    match lambda.pow(cols.len() as i64).ok().and_then(|x| x.as_rational().cloned()) {
        Some(ln) => h.scale(&ln).mul(&den) == num,
        None => false,
    }
}

/// Convolution-factorization check for `B(x | A)`: requires a refinable
/// instance and uses the minimal `k` with `lambda^k` an integer.
pub fn factorization_check(
    columns: &[FieldElement],
    lambda: &FieldElement,
    grid: usize,
    iters: usize,
) -> Result<FactorizationReport> {
    let rep = decide(columns, lambda)?;
    let Some(mask) = rep.mask() else {
        let kind = rep.witness.as_ref().map_or("none", Witness::kind);
        return Err(Error::Precondition(format!("instance is not refinable (witness: {kind})")));
    };
    let k = minimal_integer_power(lambda)
        .ok_or_else(|| Error::Precondition(format!("no power of lambda = {} is an integer", lambda.to_text())))?;
    convolution_factorization_check(mask, k, grid, iters)
}

/// A real zero of the mask on one period.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskRoot {
    /// Position in `[0, D_0)`.
    pub w: f64,
    /// Exact position when rational.
    pub exact: Option<BigRational>,
    /// Rational target `w / D_0` handed to the interval construction.
    pub target: BigRational,
}

/// Outcome of [`decay_probe`].
#[derive(Clone, Debug)]
pub struct DecayReport {
    pub lambda: FieldElement,
    /// Period `D_0`, the lcm of the translation denominators.
    pub period: BigInt,
    pub roots: Vec<MaskRoot>,
    pub certificate: Option<ErdosCertificate>,
    pub xi0: FieldElement,
    /// `c` minus the root approximation error; the certified distance from roots (in periods).
    pub c_effective: BigRational,
    pub j_max: usize,
    /// Ball lower bound of `min_{j < J} |H(lambda^j xi0)|`.
    pub epsilon0: BigRational,
    pub argmin: usize,
    pub obstruction_k: u64,
}

impl DecayReport {
    pub fn epsilon0_positive(&self) -> bool {
        self.epsilon0.is_positive()
    }
}

/// Slack subtracted from `c` for roots known only to within this distance.
const ROOT_SLACK_LOG2: u32 = 40;

/// Real zeros of `H` on `[0, D_0)` via the unit-circle zeros of `P(z) = sum h_j z^{e_j}`.
fn mask_real_roots(p: &RatPoly, period: &BigInt) -> Result<Vec<MaskRoot>> {
    let d0 = BigRational::from_integer(period.clone());
    let d0f = d0.to_f64().unwrap_or(f64::NAN);
    let mut roots = Vec::new();
    let Some(deg) = p.degree() else { return Err(Error::ZeroPolynomial) };
    // z = e^{-i phi} = (1 - i t)/(1 + i t): P(z)(1 + i t)^deg = R(t) + i I(t).
    let one = BigRational::one();
    let (mut re, mut im) = (RatPoly::zero(), RatPoly::zero());
    for (e, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (mut ar, mut ai) = (RatPoly::constant(c.clone()), RatPoly::zero());
        for _ in 0..e {
            // times (1 - i t)
            let t = RatPoly::monomial(one.clone(), 1);
            let nr = ar.add(&ai.mul(&t));
            let ni = ai.sub(&ar.mul(&t));
            ar = nr;
            ai = ni;
        }
        for _ in e..deg {
            let t = RatPoly::monomial(one.clone(), 1);
            let nr = ar.sub(&ai.mul(&t));
            let ni = ai.add(&ar.mul(&t));
            ar = nr;
            ai = ni;
        }
        re = re.add(&ar);
        im = im.add(&ai);
    }
    let g = if im.is_zero() {
        re.monic()
    } else if re.is_zero() {
        im.monic()
    } else {
        re.gcd(&im)
    };
    let exact_root = |q: BigRational| {
        let target = &q / &d0;
        MaskRoot { w: q.to_f64().unwrap_or(f64::NAN), exact: Some(q), target }
    };
    if g.degree().unwrap_or(0) > 0 {
        let cauchy = g.coeffs().iter().map(|c| c.abs()).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
            / g.leading().expect("nonzero").abs()
            + BigRational::one();
        let width = BigRational::new(BigInt::one(), BigInt::one() << 64);
        for (a, b) in g.isolate_real_roots(&-cauchy.clone(), &cauchy, &width)? {
            // Roots at t = 0, +-1 give rational w.
            let special = [(0i64, (0, 1)), (1, (1, 4)), (-1, (3, 4))];
            if let Some((_, (num, den))) = special.iter().find(|(t, _)| {
                let t = BigRational::from_integer(BigInt::from(*t));
                a < t && t <= b && g.eval(&t).is_zero()
            }) {
                roots.push(exact_root(&d0 * BigRational::new(BigInt::from(*num), BigInt::from(*den))));
                continue;
            }
            let t = ((&a + &b) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
            let frac = (t.atan() / std::f64::consts::PI).rem_euclid(1.0);
            let target =
                BigRational::from_float(frac).ok_or_else(|| Error::RootIsolationFailure(format!("t = {t}")))?;
            roots.push(MaskRoot { w: frac * d0f, exact: None, target });
        }
    }
    // t = infinity, i.e. z = -1.
    let minus_one = -BigRational::one();
    if p.eval(&minus_one).is_zero() {
        roots.push(exact_root(&d0 / BigRational::from_integer(2.into())));
    }
    roots.sort_by(|x, y| x.target.cmp(&y.target));
    Ok(roots)
}

/// Root set, interval-construction point and decay bound along `lambda^j xi0`.
pub fn decay_probe(mask: &MaskSpec, j_max: usize) -> Result<DecayReport> {
    let f = mask.field();
    let lambda = mask.lambda().clone();
    let h = mask.mask();
    let mut exps = Vec::with_capacity(h.len());
    for (d, c) in h.terms() {
        let q = d.as_rational().cloned().ok_or_else(|| Error::NonRationalTranslations(d.to_text()))?;
        exps.push((q, c.clone()));
    }
    let period = lcm_denominators(exps.iter().map(|(q, _)| q));
    let d0 = BigRational::from_integer(period.clone());
    let ints: Vec<BigInt> = exps.iter().map(|(q, _)| (q * &d0).to_integer()).collect();
    let lo = ints.iter().min().cloned().unwrap_or_default();
    let deg = ints.iter().map(|e| e - &lo).max().and_then(|x| x.to_usize()).unwrap_or(0);
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (e, (_, c)) in ints.iter().zip(&exps) {
        coeffs[(e - &lo).to_usize().expect("bounded")] = c.clone();
    }
    let p = RatPoly::new(coeffs);
    let roots = mask_real_roots(&p, &period)?;

    let (certificate, xi0, c_effective) = if roots.is_empty() {
        (None, FieldElement::one(f), BigRational::one())
    } else {
        let targets: Vec<BigRational> = roots.iter().map(|r| r.target.clone()).collect();
        let params = erdos_params(&lambda, targets.len())?;
        let depth = (j_max as u32).div_ceil(params.g) + 1;
        let cert = erdos_construct(&lambda, &targets, depth)?;
        let slack = if roots.iter().all(|r| r.exact.is_some()) {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << ROOT_SLACK_LOG2)
        };
        let c_eff = &cert.c - &slack;
        if !c_eff.is_positive() {
            return Err(Error::RootIsolationFailure("root slack exceeds the certified distance".into()));
        }
        let xi = cert.xi.scale(&d0);
        (Some(cert), xi, c_eff)
    };

    let prec = 128;
    let mut x = xi0.clone();
    let mut eps: Option<BigRational> = None;
    let mut argmin = 0;
    for j in 0..j_max {
        let v = h.eval_exact(&x, prec).abs_lower();
        if eps.as_ref().is_none_or(|e| v < *e) {
            eps = Some(v);
            argmin = j;
        }
        x = &x * &lambda;
    }
    let epsilon0 = eps.unwrap_or_else(BigRational::one);
    let obstruction_k = if epsilon0 >= BigRational::one() {
        0
    } else if epsilon0.is_positive() {
        let e = epsilon0.to_f64().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        ((1.0 / e).ln() / lambda.to_f64().ln()).ceil().max(0.0) as u64
    } else {
        u64::MAX
    };
    Ok(DecayReport { lambda, period, roots, certificate, xi0, c_effective, j_max, epsilon0, argmin, obstruction_k })
}

/// Witness against a convolution split of `B(x | (1, sqrt(5/2)))` with the given factor shapes.
#[derive(Clone, Debug)]
pub struct IndecomposabilityWitness {
    pub p1: u32,
    pub p2: u32,
    /// `w0 = i1 * p1`.
    pub i1: u64,
    pub w0: BigInt,
    /// `1 - e^{-2 pi i w0 / P1}`, which must contain zero.
    pub factor_at_w0: CBall,
    /// `1 - e^{-2 pi i sqrt(10) w0 / P1}`, which must exclude zero.
    pub factor_at_scaled: CBall,
    /// Exact: `w0` is outside `{I/sqrt(10)} ∪ {(I P2 + k)/5 : 1 <= k < P2}`.
    pub outside_scaled_zero_set: bool,
}

impl IndecomposabilityWitness {
    pub fn valid(&self) -> bool {
        self.outside_scaled_zero_set && self.factor_at_w0.contains_zero() && !self.factor_at_scaled.contains_zero()
    }
}

fn in_scaled_zero_set(w: &FieldElement, p2: u32) -> bool {
    let f = w.field();
    if (w * &FieldElement::theta(f)).is_integer() {
        return true;
    }
    let five_w = w.scale(&BigRational::from_integer(5.into()));
    match five_w.as_integer() {
        Some(v) => !v.mod_floor(&BigInt::from(p2)).is_zero(),
        None => false,
    }
}

/// First `w0 = I P1` that is a zero of the `P1` factor but not of the scaled product.
pub fn indecomposability_witness(p1: u32, p2: u32) -> Result<IndecomposabilityWitness> {
    if p1 == 0 || p2 == 0 {
        return Err(Error::Precondition("P1 and P2 must be positive".into()));
    }
    let f = Field::new(10, 2)?;
    let prec = 96;
    for i1 in 1..=u64::from(p2) {
        let w0 = BigInt::from(i1) * BigInt::from(p1);
        let w = FieldElement::from_bigint(f, w0.clone());
        if in_scaled_zero_set(&w, p2) {
            continue;
        }
        let binom = |x: FieldElement| {
            let e = x.scale(&BigRational::new(BigInt::one(), BigInt::from(p1)));
            QTrigPoly::binomial(&FieldElement::one(f)).eval_exact(&e, prec)
        };
        return Ok(IndecomposabilityWitness {
            p1,
            p2,
            i1,
            w0,
            factor_at_w0: binom(w.clone()),
            factor_at_scaled: binom(&w * &FieldElement::theta(f)),
            outside_scaled_zero_set: true,
        });
    }
    Err(Error::Internal(format!("no witness for P1 = {p1}, P2 = {p2}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn f10() -> Field {
        Field::new(10, 2).unwrap()
    }

    fn fe(s: &str, f: Field) -> FieldElement {
        FieldElement::parse(s, f).unwrap()
    }

    fn cols(s: &[&str], f: Field) -> Vec<FieldElement> {
        s.iter().map(|x| fe(x, f)).collect()
    }

    #[test]
    fn counterexample_mask() {
        let f = f10();
        let c = mask_construct(&cols(&["1", "t/2"], f), &FieldElement::theta(f)).unwrap();
        let m = c.mask().unwrap();
        assert_eq!(m.mask().len(), 10);
        assert!(m.mask_coefficients().iter().all(|h| *h == q(1, 10)));
        let mut want: Vec<FieldElement> = (0..5).map(|i| FieldElement::from_int(f, i)).collect();
        want.extend((0..5).map(|i| fe(&format!("{i} + t/2"), f)));
        want.sort();
        assert_eq!(m.translations(), want);
        assert!(c.identity_verified);
    }

    #[test]
    fn small_masks_and_refusals() {
        let r = Field::RATIONAL;
        let c = mask_construct(&[FieldElement::one(r)], &FieldElement::from_int(r, 2)).unwrap();
        assert_eq!(c.mask().unwrap().mask().to_string(), "1/2*E(0) + 1/2*E(1)");
        let f2 = Field::new(2, 2).unwrap();
        let rep = decide(&cols(&["1", "1"], f2), &FieldElement::theta(f2)).unwrap();
        assert_eq!(rep.verdict, Verdict::NotRefinable);
        assert!(matches!(rep.witness, Some(Witness::ConditionB { column: 0, .. })));
        assert!(rep.verify_witness());
        let w = rep.construction.witness().unwrap();
        assert!(verify_division_witness(&rep.construction.normalized, &rep.lambda, w));
    }

    #[test]
    fn negative_columns_fold_into_phase() {
        let r = Field::RATIONAL;
        let two = FieldElement::from_int(r, 2);
        let c = mask_construct(&[FieldElement::from_int(r, -1)], &two).unwrap();
        assert_eq!(c.phase_shift, FieldElement::from_int(r, -1));
        assert_eq!(c.signed_mask().unwrap().to_string(), "1/2*E(-1) + 1/2*E(0)");
    }

    #[test]
    fn identity_verifier_accepts_signed_masks_only() {
        let f = f10();
        let lam = FieldElement::theta(f);
        let signed = cols(&["-1", "t/2"], f);
        let c = mask_construct(&signed, &lam).unwrap();
        let m = MaskSpec::new(lam.clone(), c.signed_mask().unwrap()).unwrap();
        assert!(verify_mask_identity(&signed, &m).unwrap());
        assert!(!verify_mask_identity(&c.normalized, &m).unwrap());
        assert!(verify_mask_identity(&c.normalized, c.mask().unwrap()).unwrap());
        // A single column makes lambda^n irrational.
        assert!(!verify_mask_identity(&signed[..1], &m).unwrap());
    }

    #[test]
    fn condition_b_examples() {
        let f = f10();
        let cb = condition_b(&cols(&["1", "t/2"], f), &FieldElement::theta(f)).unwrap();
        assert_eq!(cb.pairs[0], vec![(1, BigInt::from(5))]);
        assert_eq!(cb.pairs[1], vec![(0, BigInt::from(2))]);
        let f2 = Field::new(2, 2).unwrap();
        let cb = condition_b(&cols(&["1", "1"], f2), &FieldElement::theta(f2)).unwrap();
        assert_eq!(cb.violation, Some(0));
    }

    #[test]
    fn chain_examples() {
        let f = f10();
        let ch = chain_structure(&cols(&["1", "t/2"], f), &FieldElement::theta(f)).unwrap();
        assert_eq!(ch.l, 2);
        assert_eq!(ch.multipliers, vec![BigInt::from(5), BigInt::from(2)]);
        assert_eq!(ch.subvector, cols(&["1", "t/2"], f));
        assert_eq!(ch.k, Some(2));
        assert!(ch.partition.is_none());
        let ch = chain_structure(&cols(&["1", "t", "3", "3*t"], f), &FieldElement::theta(f)).unwrap();
        assert_eq!(ch.partition, Some(vec![vec![0, 1], vec![2, 3]]));
        let r = Field::RATIONAL;
        let ch = chain_structure(&[FieldElement::one(r)], &FieldElement::from_int(r, 2)).unwrap();
        assert_eq!((ch.l, ch.k), (1, Some(1)));
    }

    #[test]
    fn lawton_examples() {
        let one = vec![q(1, 1)];
        let r = lawton_check(&one, 0, 2).unwrap();
        assert!(r.refinable);
        assert_eq!(r.quotient.unwrap().to_string(), "z+1");
        let r = lawton_check(&one, 1, 2).unwrap();
        assert_eq!(r.quotient.unwrap(), RatPoly::from_ints(&[1, 1]).pow(2));
        let r = lawton_check(&[q(1, 1), q(0, 1), q(1, 1)], 0, 2).unwrap();
        assert!(!r.refinable && !r.remainder.is_zero());
        assert!(lawton_check(&one, 0, 1).is_err());
        assert!(lawton_check(&[q(1, 1), q(0, 1)], 0, 2).is_err());
    }

    #[test]
    fn coverage_examples() {
        let f = f10();
        let cov = coverage_oracle(&cols(&["1", "t/2"], f), &FieldElement::theta(f), 20).unwrap();
        assert!(cov.consistent);
        let f2 = Field::new(2, 2).unwrap();
        let cov = coverage_oracle(&cols(&["1", "1"], f2), &FieldElement::theta(f2), 5).unwrap();
        let u = cov.uncovered.unwrap();
        assert_eq!(u.w, FieldElement::one(f2));
        assert_eq!((u.denominator_multiplicity, u.numerator_multiplicity), (2, 0));
        let r = Field::RATIONAL;
        assert!(coverage_oracle(&[FieldElement::one(r)], &FieldElement::from_int(r, 3), 50).unwrap().consistent);
    }

    fn mv_spec(rows: &[[&str; 2]], f: Field) -> BoxSplineSpec {
        BoxSplineSpec::new(f, rows.iter().map(|r| vec![fe(r[0], f), fe(r[1], f)]).collect()).unwrap()
    }

    #[test]
    fn multivariate_examples() {
        let f = f10();
        let spec = mv_spec(&[["1", "0"], ["0", "1"], ["t/2", "0"], ["0", "t/2"]], f);
        let r = multivariate_decide(&spec, &FieldElement::theta(f)).unwrap();
        assert_eq!(r.verdict, Verdict::Refinable);
        assert_eq!(r.chains, vec![vec![0, 2], vec![1, 3]]);
        assert!(r.slice_masks_match && r.identity_verified);
        assert_eq!(r.mask.as_ref().unwrap().mask().len(), 100);
        let bad = mv_spec(&[["1", "0"], ["0", "1"], ["t/2", "0"], ["1", "1/7"]], f);
        let r = multivariate_decide(&bad, &FieldElement::theta(f)).unwrap();
        assert_eq!(r.verdict, Verdict::NotRefinable);
        assert!(matches!(r.witness, Some(Witness::Slice { .. })));
        let f2 = Field::new(2, 2).unwrap();
        let id = mv_spec(&[["1", "0"], ["0", "1"]], f2);
        assert_eq!(multivariate_decide(&id, &FieldElement::theta(f2)).unwrap().verdict, Verdict::NotRefinable);
        let r = Field::RATIONAL;
        let three = mv_spec(&[["1", "0"], ["0", "1"], ["1", "1"]], r);
        let rep = multivariate_decide(&three, &FieldElement::from_int(r, 2)).unwrap();
        assert_eq!(rep.mask.unwrap().mask().len(), 7);
        assert!(rep.identity_verified);
    }

    #[test]
    fn multivariate_partition_mask() {
        let f = f10();
        let spec = mv_spec(&[["1", "0"], ["t", "0"], ["0", "2"], ["0", "2*t"]], f);
        let r = multivariate_decide(&spec, &FieldElement::theta(f)).unwrap();
        assert_eq!(r.verdict, Verdict::Refinable);
        assert_eq!(r.partition, Some(vec![vec![0, 1], vec![2, 3]]));
        assert_eq!(r.partition_mask_matches, Some(true));
    }

    #[test]
    fn decay_examples() {
        let r = Field::RATIONAL;
        let two = FieldElement::from_int(r, 2);
        let b0 = mask_construct(&[FieldElement::one(r)], &two).unwrap().mask().unwrap().clone();
        let rep = decay_probe(&b0, 60).unwrap();
        assert_eq!(rep.roots.len(), 1);
        assert_eq!(rep.roots[0].exact, Some(q(1, 2)));
        assert!(rep.epsilon0_positive());
        assert!(rep.obstruction_k > 0 && rep.obstruction_k < 64);
        let one = MaskSpec::new(two.clone(), QTrigPoly::one(r)).unwrap();
        let rep = decay_probe(&one, 10).unwrap();
        assert!(rep.roots.is_empty());
        assert_eq!(rep.epsilon0, q(1, 1));
        assert_eq!(rep.obstruction_k, 0);
        let b3 = mask_construct(&vec![FieldElement::one(r); 4], &two).unwrap().mask().unwrap().clone();
        let rep = decay_probe(&b3, 30).unwrap();
        assert_eq!(rep.roots.len(), 1);
        assert!(rep.epsilon0_positive());
        let f = f10();
        let ce = mask_construct(&cols(&["1", "t/2"], f), &FieldElement::theta(f)).unwrap().mask().unwrap().clone();
        assert!(matches!(decay_probe(&ce, 10), Err(Error::NonRationalTranslations(_))));
    }

    #[test]
    fn irrational_roots_are_located() {
        // H(w) = (1 + 2 cos(2 pi w)) / 3 vanishes at w = 1/3, 2/3.
        let r = Field::RATIONAL;
        let h = QTrigPoly::from_terms(
            r,
            [
                (FieldElement::from_int(r, -1), q(1, 3)),
                (FieldElement::zero(r), q(1, 3)),
                (FieldElement::one(r), q(1, 3)),
            ],
        )
        .unwrap();
        let m = MaskSpec::new(FieldElement::from_int(r, 3), h).unwrap();
        let rep = decay_probe(&m, 20).unwrap();
        let ws: Vec<f64> = rep.roots.iter().map(|x| x.w).collect();
        assert_eq!(ws.len(), 2);
        assert!((ws[0] - 1.0 / 3.0).abs() < 1e-12 && (ws[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!(rep.epsilon0_positive());
    }

    #[test]
    fn factorization_preconditions() {
        let f = f10();
        let r = factorization_check(&cols(&["1", "t/2"], f), &FieldElement::theta(f), 1024, 20).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.relative_distance < 1e-2);
        let r = Field::RATIONAL;
        let id = factorization_check(&[FieldElement::one(r)], &FieldElement::from_int(r, 2), 64, 5).unwrap();
        assert!(id.trivial);
        let f2 = Field::new(2, 2).unwrap();
        assert!(matches!(
            factorization_check(&cols(&["1", "1"], f2), &FieldElement::theta(f2), 64, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn indecomposability_examples() {
        let w = indecomposability_witness(1, 1).unwrap();
        assert_eq!(w.w0, BigInt::from(1));
        assert!(w.valid());
        // 3 = 15/5 lies in the scaled set when P2 = 2, so the first witness is 6.
        let w = indecomposability_witness(3, 2).unwrap();
        assert_eq!(w.w0, BigInt::from(6));
        assert!(w.valid());
        for p1 in 1..=20 {
            for p2 in 1..=20 {
                assert!(indecomposability_witness(p1, p2).unwrap().valid());
            }
        }
    }
}
