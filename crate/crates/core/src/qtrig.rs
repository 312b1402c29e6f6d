//! Quasi-trigonometric polynomials `sum c_j E(d_j)` with `E(d) = e^{-2 pi i d w}`,
//! rational coefficients and exponents in a pure-root field.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{CBall, RBall};
use crate::error::{Error, Result};
use crate::exactreal::{parse_rational, Field, FieldElement};
use crate::poly::RatPoly;

/// Binary operation selector for [`QTrigPoly::combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Mul,
}

/// Key identifying the class of `x` modulo `Z`: fractional rational part plus
/// the irrational coordinates.
pub(crate) fn int_class_key(x: &FieldElement) -> Vec<BigRational> {
    let c = x.coeffs();
    let mut key = Vec::with_capacity(c.len());
    key.push(&c[0] - c[0].floor());
    key.extend(c[1..].iter().cloned());
    key
}

/// Integer `x - y` when it is one.
fn int_difference(x: &FieldElement, y: &FieldElement) -> Option<BigInt> {
    (x - y).as_integer()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QTrigPoly {
    field: Field,
    terms: BTreeMap<FieldElement, BigRational>,
}

/// One class of a standard decomposition: `E(representative) * poly(E(1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompClass {
    pub representative: FieldElement,
    pub poly: RatPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StdDecomposition {
    pub field: Field,
    pub classes: Vec<DecompClass>,
}

impl StdDecomposition {
    /// Rebuild the polynomial from its classes.
    pub fn reassemble(&self) -> QTrigPoly {
        let mut out = QTrigPoly::zero(self.field);
        for cl in &self.classes {
            for (i, c) in cl.poly.coeffs().iter().enumerate() {
                let d = &cl.representative + &FieldElement::from_int(self.field, i as i64);
                out.add_term(d, c.clone());
            }
        }
        out
    }
}

/// Why a binomial division failed: a residue class whose coefficients do not sum to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionObstruction {
    pub representative: FieldElement,
    pub class_sum: BigRational,
}

impl QTrigPoly {
    pub fn zero(field: Field) -> Self {
        QTrigPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, BigRational::one())
    }

    pub fn constant(field: Field, c: BigRational) -> Self {
        Self::monomial(c, FieldElement::zero(field))
    }

    /// `c * E(d)`.
    pub fn monomial(c: BigRational, d: FieldElement) -> Self {
        let mut p = Self::zero(d.field());
        p.add_term(d, c);
        p
    }

    /// `1 - E(m)`.
    pub fn binomial(m: &FieldElement) -> Self {
        let f = m.field();
        let mut p = Self::one(f);
        p.add_term(m.clone(), -BigRational::one());
        p
    }

    /// `sum_{t < p} E(t m)`.
    pub fn geometric(p: u64, m: &FieldElement) -> Self {
        let f = m.field();
        let mut out = Self::zero(f);
        let mut d = FieldElement::zero(f);
        for _ in 0..p {
            out.add_term(d.clone(), BigRational::one());
            d = &d + m;
        }
        out
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (FieldElement, BigRational)>) -> Result<Self> {
        let mut p = Self::zero(field);
        for (d, c) in terms {
            field.check_same(&d.field())?;
            p.add_term(d, c);
        }
        Ok(p)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&FieldElement, &BigRational)> {
        self.terms.iter()
    }

    pub fn exponents(&self) -> Vec<FieldElement> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, d: &FieldElement) -> BigRational {
        self.terms.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exponent(&self) -> Option<&FieldElement> {
        self.terms.keys().next()
    }

    pub fn max_exponent(&self) -> Option<&FieldElement> {
        self.terms.keys().next_back()
    }

    /// Add `c * E(d)` in place, dropping cancelled terms.
    pub fn add_term(&mut self, d: FieldElement, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    pub fn combine(&self, other: &Self, op: CombineOp) -> Result<Self> {
        self.field.check_same(&other.field)?;
        Ok(match op {
            CombineOp::Add => self.add(other),
            CombineOp::Mul => self.mul(other),
        })
    }

    /// Sum; panics on a field mismatch (see [`combine`](Self::combine)).
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.field);
        }
        QTrigPoly { field: self.field, terms: self.terms.iter().map(|(d, c)| (d.clone(), c * q)).collect() }
    }

    /// Product; panics on a field mismatch (see [`combine`](Self::combine)).
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: HashMap<FieldElement, BigRational> = HashMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                *acc.entry(d1 + d2).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        let mut out = Self::zero(self.field);
        for (d, c) in acc {
            out.add_term(d, c);
        }
        out
    }

    /// Multiply by `E(d)`.
    pub fn shift(&self, d: &FieldElement) -> Self {
        QTrigPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect() }
    }

    /// Substitute `w -> a w` (exponents scaled by `a`).
    pub fn dilate(&self, a: &FieldElement) -> Self {
        let mut out = Self::zero(self.field);
        for (e, c) in &self.terms {
            out.add_term(e * a, c.clone());
        }
        out
    }

    /// Enclosure of the value at a real ball `w`.
    pub fn eval(&self, w: &RBall, prec: u32) -> CBall {
        let wmag = w.mag_log2().unwrap_or(0).max(0) as u32;
        let mut acc = CBall::zero(prec);
        for (d, c) in &self.terms {
            let db = d.to_ball_abs(prec + wmag + 16);
            let e = db.mul(&w.clone().with_prec(prec + wmag + 16)).with_prec(prec + 8).expm2pii();
            acc = acc.add(&e.mul_rational(c));
        }
        acc
    }

    /// Enclosure at an exact point, reducing each `d * w` modulo 1 exactly.
    pub fn eval_exact(&self, w: &FieldElement, prec: u32) -> CBall {
        let mut acc = CBall::zero(prec);
        for (d, c) in &self.terms {
            let x = (d * w).fract();
            let e = x.to_ball_abs(prec + 8).with_prec(prec + 8).expm2pii();
            acc = acc.add(&e.mul_rational(c));
        }
        acc
    }

    /// Enclosure at a complex ball `w = a + i b`.
    pub fn eval_complex(&self, w: &CBall, prec: u32) -> CBall {
        let mag = w.re.mag_log2().unwrap_or(0).max(w.im.mag_log2().unwrap_or(0)).max(0) as u32;
        let work = prec + mag + 16;
        let two_pi = RBall::pi(work).mul_int(2);
        let mut acc = CBall::zero(prec);
        for (d, c) in &self.terms {
            let db = d.to_ball_abs(work);
            let phase = db.mul(&w.re.clone().with_prec(work)).with_prec(prec + 8).expm2pii();
            let growth = two_pi.mul(&db).mul(&w.im.clone().with_prec(work)).exp();
            acc = acc.add(&phase.mul_real(&growth).mul_rational(c));
        }
        acc
    }

    pub fn eval_f64(&self, w: f64) -> Complex64 {
        let tau = std::f64::consts::TAU;
        self.terms
            .iter()
            .map(|(d, c)| {
                let x = d.to_f64() * w;
                let x = x - x.round();
                Complex64::from_polar(1.0, -tau * x) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Group exponents into classes congruent modulo `Z`.
    pub fn standard_decomposition(&self) -> StdDecomposition {
        let mut groups: HashMap<Vec<BigRational>, Vec<(&FieldElement, &BigRational)>> = HashMap::new();
        for (d, c) in &self.terms {
            groups.entry(int_class_key(d)).or_default().push((d, c));
        }
        let mut classes: Vec<DecompClass> = groups
            .into_values()
            .map(|members| {
                // Terms iterate in increasing order, so the first is the minimum.
                let rep = members[0].0.clone();
                let mut coeffs = Vec::new();
                for (d, c) in members {
                    let off = int_difference(d, &rep).and_then(|o| o.to_usize()).expect("same class");
                    if coeffs.len() <= off {
                        coeffs.resize(off + 1, BigRational::zero());
                    }
                    coeffs[off] = c.clone();
                }
                DecompClass { representative: rep, poly: RatPoly::new(coeffs) }
            })
            .collect();
        classes.sort_by(|a, b| a.representative.cmp(&b.representative));
        StdDecomposition { field: self.field, classes }
    }

    /// Gcd over `Q[z]` of the class polynomials, normalized to constant term 1.
    pub fn component_gcd(&self) -> Result<RatPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dec = self.standard_decomposition();
        let g = dec.classes.iter().map(|c| c.poly.strip_low()).fold(RatPoly::zero(), |acc, p| {
            if acc.is_zero() {
                p.monic()
            } else {
                acc.gcd(&p)
            }
        });
        Ok(g.normalize_constant())
    }

    /// Quotient by `1 - E(m)` if it exists.
    pub fn divide_binomial(&self, m: &FieldElement) -> Option<Self> {
        self.divide_binomial_detailed(m).ok()
    }

    /// Quotient by `1 - E(m)`, or the first residue class (by representative)
    /// whose coefficient sum is nonzero.
    pub fn divide_binomial_detailed(&self, m: &FieldElement) -> std::result::Result<Self, DivisionObstruction> {
        assert!(!m.is_zero(), "binomial divisor must be nonzero");
        // Classes mod mZ; the representative has the smallest mu = d/m.
        let minv = m.inv().expect("nonzero");
        let mut groups: HashMap<Vec<BigRational>, Vec<(FieldElement, &FieldElement, &BigRational)>> = HashMap::new();
        for (d, c) in &self.terms {
            let mu = d * &minv;
            groups.entry(int_class_key(&mu)).or_default().push((mu, d, c));
        }
        let mut groups: Vec<_> = groups.into_values().collect();
        for g in &mut groups {
            g.sort_by(|a, b| a.0.cmp(&b.0));
        }
        groups.sort_by(|a, b| a[0].1.cmp(b[0].1));
        let mut out = Self::zero(self.field);
        let mut obstruction: Option<DivisionObstruction> = None;
        for g in &groups {
            let mu0 = &g[0].0;
            let rep = g[0].1;
            let sum = g.iter().fold(BigRational::zero(), |a, x| a + x.2);
            if !sum.is_zero() {
                let cand = DivisionObstruction { representative: rep.clone(), class_sum: sum };
                if obstruction.as_ref().is_none_or(|o| cand.representative < o.representative) {
                    obstruction = Some(cand);
                }
                continue;
            }
            let top = int_difference(&g[g.len() - 1].0, mu0).and_then(|t| t.to_usize()).expect("same class");
            let mut a = vec![BigRational::zero(); top + 1];
            for (mu, _, c) in g {
                let t = int_difference(mu, mu0).and_then(|t| t.to_usize()).expect("same class");
                a[t] = (*c).clone();
            }
            let mut run = BigRational::zero();
            let mut exp = rep.clone();
            for coeff in a.iter().take(top) {
                run += coeff;
                out.add_term(exp.clone(), run.clone());
                exp = &exp + m;
            }
        }
        match obstruction {
            Some(o) => Err(o),
            None => Ok(out),
        }
    }

    /// Text form with the field suffix.
    pub fn to_text(&self) -> String {
        if self.field.is_rational() {
            self.to_string()
        } else {
            format!("{} ({})", self, self.field)
        }
    }

    /// Parse `c0*E(d0) + c1*E(d1) + ...` (a bare rational is a constant term).
    pub fn parse(s: &str, field: Field) -> Result<Self> {
        let s = s.trim();
        let body = match s.rfind('(') {
            Some(open) if s.ends_with(')') && s[open..].contains('=') && !s[..open].trim_end().ends_with('E') => {
                let sfx = &s[open + 1..s.len() - 1];
                let declared = FieldElement::parse_standalone(&format!("0 ({sfx})"))?.field();
                field.check_same(&declared)?;
                s[..open].trim()
            }
            _ => s,
        };
        let mut out = Self::zero(field);
        if body == "0" {
            return Ok(out);
        }
        for term in split_top_level(body) {
            let t = term.trim();
            let (neg, t) = match t.strip_prefix('-') {
                Some(r) => (true, r.trim()),
                None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
            };
            let (coef, exp) = match t.find("E(") {
                Some(pos) => {
                    if !t.ends_with(')') {
                        return Err(Error::Parse(format!("unterminated E( in '{t}'")));
                    }
                    let c = t[..pos].trim().trim_end_matches('*').trim();
                    let c = if c.is_empty() { BigRational::one() } else { parse_rational(c)? };
                    let d = FieldElement::parse(&t[pos + 2..t.len() - 1], field)?;
                    (c, d)
                }
                None => (parse_rational(t)?, FieldElement::zero(field)),
            };
            out.add_term(exp, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                let prev = s[..i].trim_end();
                if !prev.is_empty() && !prev.ends_with(['*', '/', '^']) {
                    out.push(&s[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let body = format!("{}*E({})", fmt_rat(&c.abs()), d);
            match (i == 0, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Multivariate quasi-trigonometric polynomial `sum c E(d . w)` with vector exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvTrigPoly {
    field: Field,
    dim: usize,
    terms: BTreeMap<Vec<FieldElement>, BigRational>,
}

impl MvTrigPoly {
    pub fn zero(field: Field, dim: usize) -> Self {
        MvTrigPoly { field, dim, terms: BTreeMap::new() }
    }

    pub fn one(field: Field, dim: usize) -> Self {
        let mut p = Self::zero(field, dim);
        p.add_term(vec![FieldElement::zero(field); dim], BigRational::one());
        p
    }

    /// `1 - E(m . w)`.
    pub fn binomial(m: &[FieldElement]) -> Self {
        let f = m[0].field();
        let mut p = Self::one(f, m.len());
        p.add_term(m.to_vec(), -BigRational::one());
        p
    }

    /// `sum_{t < p} E(t m . w)`.
    pub fn geometric(p: u64, m: &[FieldElement]) -> Self {
        let f = m[0].field();
        let mut out = Self::zero(f, m.len());
        let mut d = vec![FieldElement::zero(f); m.len()];
        for _ in 0..p {
            out.add_term(d.clone(), BigRational::one());
            d = d.iter().zip(m).map(|(a, b)| a + b).collect();
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<FieldElement>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, d: Vec<FieldElement>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &o.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero(self.field, self.dim);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Vec<FieldElement>, BigRational> = HashMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &o.terms {
                let d: Vec<FieldElement> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                *acc.entry(d).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        let mut out = Self::zero(self.field, self.dim);
        for (d, c) in acc {
            out.add_term(d, c);
        }
        out
    }

    /// Restriction to the line `w = z * probe`, as a univariate polynomial in `z`.
    pub fn slice(&self, probe: &[i64]) -> QTrigPoly {
        let mut out = QTrigPoly::zero(self.field);
        for (d, c) in &self.terms {
            let e = dot_int(d, probe, self.field);
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn eval_f64(&self, w: &[f64]) -> Complex64 {
        let tau = std::f64::consts::TAU;
        self.terms
            .iter()
            .map(|(d, c)| {
                let x: f64 = d.iter().zip(w).map(|(a, b)| a.to_f64() * b).sum();
                Complex64::from_polar(1.0, -tau * (x - x.round())) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    pub fn eval(&self, w: &[RBall], prec: u32) -> CBall {
        let wmag = w.iter().filter_map(RBall::mag_log2).max().unwrap_or(0).max(0) as u32;
        let work = prec + wmag + 16;
        let mut acc = CBall::zero(prec);
        for (d, c) in &self.terms {
            let mut x = RBall::zero(work);
            for (a, b) in d.iter().zip(w) {
                x = x.add(&a.to_ball_abs(work).mul(&b.clone().with_prec(work)));
            }
            acc = acc.add(&x.with_prec(prec + 8).expm2pii().mul_rational(c));
        }
        acc
    }

    /// Quotient by `1 - E(m . w)` if it exists.
    pub fn divide_binomial(&self, m: &[FieldElement]) -> Option<Self> {
        let pivot = m.iter().position(|x| !x.is_zero())?;
        let minv = m[pivot].inv().ok()?;
        type Member<'a> = (FieldElement, &'a Vec<FieldElement>, &'a BigRational);
        let mut groups: HashMap<(Vec<FieldElement>, Vec<BigRational>), Vec<Member>> = HashMap::new();
        for (d, c) in &self.terms {
            let mu = &d[pivot] * &minv;
            let transverse: Vec<FieldElement> = d.iter().zip(m).map(|(a, b)| a - &(&mu * b)).collect();
            groups.entry((transverse, int_class_key(&mu))).or_default().push((mu, d, c));
        }
        let mut out = Self::zero(self.field, self.dim);
        for mut g in groups.into_values() {
            g.sort_by(|a, b| a.0.cmp(&b.0));
            let sum = g.iter().fold(BigRational::zero(), |a, x| a + x.2);
            if !sum.is_zero() {
                return None;
            }
            let mu0 = g[0].0.clone();
            let top = int_difference(&g[g.len() - 1].0, &mu0)?.to_usize()?;
            let mut a = vec![BigRational::zero(); top + 1];
            for (mu, _, c) in &g {
                a[int_difference(mu, &mu0)?.to_usize()?] = (*c).clone();
            }
            let mut run = BigRational::zero();
            let mut exp = g[0].1.clone();
            for coeff in a.iter().take(top) {
                run += coeff;
                out.add_term(exp.clone(), run.clone());
                exp = exp.iter().zip(m).map(|(x, y)| x + y).collect();
            }
        }
        Some(out)
    }
}

pub(crate) fn dot_int(d: &[FieldElement], probe: &[i64], field: Field) -> FieldElement {
    d.iter()
        .zip(probe)
        .fold(FieldElement::zero(field), |acc, (a, &p)| &acc + &a.scale(&BigRational::from_integer(p.into())))
}

impl fmt::Display for MvTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let ds: Vec<String> = d.iter().map(ToString::to_string).collect();
            let body = format!("{}*E({})", fmt_rat(&c.abs()), ds.join(", "));
            match (i == 0, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
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

    fn zpoly(f: Field, c: &[i64]) -> QTrigPoly {
        let mut p = QTrigPoly::zero(f);
        for (i, &x) in c.iter().enumerate() {
            p.add_term(FieldElement::from_int(f, i as i64), q(x, 1));
        }
        p
    }

    #[test]
    fn combine_examples() {
        let f = Field::RATIONAL;
        let prod = zpoly(f, &[1, 1]).combine(&zpoly(f, &[1, -1]), CombineOp::Mul).unwrap();
        assert_eq!(prod, zpoly(f, &[1, 0, -1]));
        let p = zpoly(f, &[3, 0, 2]);
        assert!(p.combine(&p.neg(), CombineOp::Add).unwrap().is_zero());

        let g = f10();
        let h = QTrigPoly::geometric(5, &FieldElement::one(g))
            .mul(&QTrigPoly::binomial(&fe("-1/2*t", g)).neg().add(&QTrigPoly::constant(g, q(2, 1))));
        // 1 + E(5/t) = 1 + E(t/2)
        assert_eq!(h.len(), 10);
        assert!(h.terms().all(|(_, c)| c.is_one()));
        let other = QTrigPoly::one(Field::RATIONAL);
        assert!(h.combine(&other, CombineOp::Add).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f = Field::RATIONAL;
        let b = QTrigPoly::binomial(&FieldElement::one(f));
        let v0 = b.eval(&RBall::zero(64), 64);
        assert!(v0.re.contains(&q(0, 1)) && v0.im.contains(&q(0, 1)));
        let vh = b.eval(&RBall::from_rational(&q(1, 2), 64), 64);
        assert!(vh.re.contains(&q(2, 1)));
        assert!(vh.radius_f64() < 1e-15);
        let ve = b.eval_exact(&FieldElement::from_rational(f, q(1, 2)), 64);
        assert!(ve.re.contains(&q(2, 1)));
    }

    #[test]
    fn decomposition_examples() {
        let f = Field::RATIONAL;
        let d = zpoly(f, &[1, 0, 1]).standard_decomposition();
        assert_eq!(d.classes.len(), 1);
        assert_eq!(d.classes[0].poly, RatPoly::from_ints(&[1, 0, 1]));

        let g = Field::new(2, 2).unwrap();
        let p = QTrigPoly::parse("1*E(0) + 1*E(t) + 1*E(1 + t)", g).unwrap();
        let d = p.standard_decomposition();
        assert_eq!(d.classes.len(), 2);
        assert_eq!(d.classes[0].representative, FieldElement::zero(g));
        assert_eq!(d.classes[0].poly, RatPoly::from_ints(&[1]));
        assert_eq!(d.classes[1].representative, FieldElement::theta(g));
        assert_eq!(d.classes[1].poly, RatPoly::from_ints(&[1, 1]));
        assert_eq!(d.reassemble(), p);
    }

    #[test]
    fn gcd_examples() {
        let g = Field::new(2, 2).unwrap();
        let one_minus_z = zpoly(g, &[1, -1]);
        let p = one_minus_z.add(&one_minus_z.shift(&FieldElement::theta(g)));
        assert_eq!(p.component_gcd().unwrap(), RatPoly::from_ints(&[1, -1]));
        assert_eq!(QTrigPoly::zero(g).component_gcd(), Err(Error::ZeroPolynomial));
        let single = zpoly(Field::RATIONAL, &[2, 4]);
        assert_eq!(single.component_gcd().unwrap(), RatPoly::new(vec![q(1, 1), q(2, 1)]));
    }

    #[test]
    fn binomial_division_examples() {
        let f = Field::RATIONAL;
        let one = FieldElement::one(f);
        assert_eq!(zpoly(f, &[1, 0, -1]).divide_binomial(&one), Some(zpoly(f, &[1, 1])));
        let err = zpoly(f, &[1, 1]).divide_binomial_detailed(&one).unwrap_err();
        assert_eq!(err.class_sum, q(2, 1));
        let g = f10();
        let p = QTrigPoly::binomial(&FieldElement::theta(g));
        let quo = p.divide_binomial(&fe("t/2", g)).unwrap();
        assert_eq!(quo, QTrigPoly::parse("1*E(0) + 1*E(1/2*t)", g).unwrap());
        // negative divisor exponent
        let neg = p.divide_binomial(&fe("-t/2", g)).unwrap();
        assert_eq!(QTrigPoly::binomial(&fe("-t/2", g)).mul(&neg), p);
    }

    #[test]
    fn geometric_examples() {
        let f = Field::RATIONAL;
        let one = FieldElement::one(f);
        assert_eq!(QTrigPoly::geometric(2, &one), zpoly(f, &[1, 1]));
        assert_eq!(QTrigPoly::geometric(1, &fe("3", f)), QTrigPoly::one(f));
        assert_eq!(QTrigPoly::geometric(5, &one), zpoly(f, &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn text_round_trip() {
        let g = f10();
        let p = QTrigPoly::parse("1/10*E(0) - 3*E(1/2*t) + 2*E(4 + 1/2*t)", g).unwrap();
        assert_eq!(p.to_string(), "1/10*E(0) - 3*E(1/2*t) + 2*E(4 + 1/2*t)");
        assert_eq!(QTrigPoly::parse(&p.to_text(), g).unwrap(), p);
        assert_eq!(QTrigPoly::parse("2 - E(1)", Field::RATIONAL).unwrap(), zpoly(Field::RATIONAL, &[2, -1]));
        assert!(QTrigPoly::parse(&p.to_text(), Field::new(3, 2).unwrap()).is_err());
    }

    #[test]
    fn multivariate_division_and_slice() {
        let g = f10();
        let m = vec![fe("1", g), fe("t/2", g)];
        let num = MvTrigPoly::binomial(&[fe("3", g), fe("3/2*t", g)]);
        let quo = num.divide_binomial(&m).unwrap();
        assert_eq!(quo, MvTrigPoly::geometric(3, &m));
        assert_eq!(MvTrigPoly::binomial(&m).mul(&quo), num);
        assert!(MvTrigPoly::one(g, 2).add(&MvTrigPoly::one(g, 2)).divide_binomial(&m).is_none());
        let s = quo.slice(&[1, 2]);
        assert_eq!(s, QTrigPoly::geometric(3, &fe("1 + t", g)));
    }
}
