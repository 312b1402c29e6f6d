//! Exact arithmetic in `Q(t)`, where `t` is the positive real root of
//! `x^k - n`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::RBall;
use crate::error::{Error, Result};

/// Descriptor of the pure-root field `Q(n^{1/k})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    radicand: u64,
    degree: u32,
}

fn small_primes_dividing(k: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            out.push(p);
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

fn is_perfect_power(n: u64, p: u32) -> bool {
    let r = BigInt::from(n).nth_root(p);
    r.pow(p) == BigInt::from(n)
}

impl Field {
    /// The rational field.
    pub const RATIONAL: Field = Field { radicand: 1, degree: 1 };

    /// Build `Q(n^{1/k})`, rejecting reducible `x^k - n`.
    ///
    /// Degree one gives `Q` regardless of `n`.
    pub fn new(n: u64, k: u32) -> Result<Field> {
        if k == 0 {
            return Err(Error::InvalidField("degree must be positive".into()));
        }
        if k == 1 {
            return Ok(Field::RATIONAL);
        }
        if n < 2 {
            return Err(Error::InvalidField(format!("radicand {n} must be at least 2")));
        }
        for p in small_primes_dividing(k) {
            if is_perfect_power(n, p) {
                return Err(Error::Irreducibility { radicand: n, degree: k, prime: p });
            }
        }
        Ok(Field { radicand: n, degree: k })
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Enclosure of the generator, accurate to about `prec` bits.
    pub fn theta_ball(&self, prec: u32) -> RBall {
        if self.degree == 1 {
            return RBall::from_int(1, prec);
        }
        let p = u64::from(prec) + 8;
        let scaled = BigInt::from(self.radicand) << (p * u64::from(self.degree));
        let r = scaled.nth_root(self.degree);
        RBall::from_endpoints(r.clone(), r + 1, -(p as i64), prec)
    }

    pub fn theta_f64(&self) -> f64 {
        (self.radicand as f64).powf(1.0 / f64::from(self.degree))
    }

    pub fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "Q")
        } else {
            write!(f, "t^{} = {}", self.degree, self.radicand)
        }
    }
}

/// Element `q_0 + q_1 t + ... + q_{k-1} t^{k-1}` of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<BigRational>,
}

/// Result of [`FieldElement::classify`].
#[derive(Clone, Debug)]
pub struct Classification {
    pub is_zero: bool,
    pub is_integer: bool,
    pub sign: Ordering,
    pub approx: RBall,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElement {
    pub fn zero(field: Field) -> Self {
        FieldElement { field, coeffs: vec![BigRational::zero(); field.degree as usize] }
    }

    pub fn one(field: Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: Field, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn from_bigint(field: Field, n: BigInt) -> Self {
        Self::from_rational(field, BigRational::from_integer(n))
    }

    pub fn from_rational(field: Field, q: BigRational) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = q;
        e
    }

    /// The generator `t`.
    pub fn theta(field: Field) -> Self {
        Self::theta_pow(field, 1)
    }

    /// `t^i` reduced into the basis.
    pub fn theta_pow(field: Field, i: u32) -> Self {
        let k = field.degree;
        let mut e = Self::zero(field);
        let scale = BigInt::from(field.radicand).pow(i / k);
        e.coeffs[(i % k) as usize] = BigRational::from_integer(scale);
        e
    }

    /// Coordinates of any length; powers `t^i` with `i >= k` are reduced.
    pub fn from_coeffs(field: Field, coeffs: Vec<BigRational>) -> Self {
        let k = field.degree as usize;
        let mut e = Self::zero(field);
        let n = BigRational::from_integer(BigInt::from(field.radicand));
        for (i, c) in coeffs.into_iter().enumerate() {
            let scale = num_traits::pow(n.clone(), i / k);
            e.coeffs[i % k] += c * scale;
        }
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Rational value when all irrational coordinates vanish.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.field.check_same(&o.field)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(FieldElement { field: self.field, coeffs })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.field.check_same(&o.field)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Ok(FieldElement { field: self.field, coeffs })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.field.check_same(&o.field)?;
        let k = self.field.degree as usize;
        if k == 1 {
            return Ok(Self::from_rational(self.field, &self.coeffs[0] * &o.coeffs[0]));
        }
        let n = BigRational::from_integer(BigInt::from(self.field.radicand));
        let mut out = vec![BigRational::zero(); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                if i + j >= k {
                    out[i + j - k] += p * &n;
                } else {
                    out[i + j] += p;
                }
            }
        }
        Ok(FieldElement { field: self.field, coeffs: out })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.field.check_same(&o.field)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn neg(&self) -> Self {
        FieldElement { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { field: self.field, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse by solving `self * x = 1` in coordinates.
    #[allow(clippy::needless_range_loop)]
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = self.field.degree as usize;
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.field, q.recip()));
        }
        // Column j holds the coordinates of self * t^j.
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); k + 1]; k];
        for j in 0..k {
            let col = self.checked_mul(&Self::theta_pow(self.field, j as u32))?;
            for (i, c) in col.coeffs.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m[0][k] = BigRational::one();
        let x = solve_augmented(m).ok_or_else(|| Error::Internal("singular multiplication matrix".into()))?;
        Ok(FieldElement { field: self.field, coeffs: x })
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Self::one(self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(result)
    }

    /// Enclosure via Horner evaluation at about `prec` bits per operation.
    pub fn to_ball(&self, prec: u32) -> RBall {
        let theta = self.field.theta_ball(prec + 8);
        let mut acc = RBall::zero(prec + 8);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&theta).add(&RBall::from_rational(c, prec + 8));
        }
        acc.with_prec(prec)
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn to_ball_abs(&self, bits: u32) -> RBall {
        if let Some(q) = self.as_rational() {
            let mag = (q.numer().bits() as i64 - q.denom().bits() as i64).max(0) as u32;
            return RBall::from_rational(q, bits + mag + 8);
        }
        let mag = self.coeffs.iter().map(|c| c.numer().bits()).max().unwrap_or(0) as u32;
        let mut prec = bits + mag + 16;
        loop {
            let b = self.to_ball(prec);
            if b.abs_width_below(i64::from(bits)) {
                return b;
            }
            prec *= 2;
        }
    }

    /// Enclosure with relative width at most `2^-prec` (nonzero elements).
    pub fn to_ball_rel(&self, prec: u32) -> RBall {
        if self.is_zero() {
            return RBall::zero(prec);
        }
        let mut p = prec + 16;
        loop {
            let b = self.to_ball(p);
            if !b.contains_zero() {
                let m = b.abs().lower();
                let w = b.upper() - b.lower();
                let bound = m * BigRational::new(BigInt::one(), BigInt::one() << prec);
                if w <= bound {
                    return b;
                }
            }
            p *= 2;
        }
    }

    /// Exact sign; terminates because nonzero elements are separated from 0.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        if let Some(s) = self.sign_f64() {
            return s;
        }
        let mut prec = 64;
        loop {
            if let Some(s) = self.to_ball(prec).sign() {
                return s;
            }
            prec *= 2;
        }
    }

    /// Fast sign from a double-precision evaluation with an error bound.
    fn sign_f64(&self) -> Option<Ordering> {
        let theta = self.field.theta_f64();
        let mut sum = 0.0f64;
        let mut abs = 0.0f64;
        let mut pw = 1.0f64;
        for c in &self.coeffs {
            let v = c.to_f64()? * pw;
            if !v.is_finite() {
                return None;
            }
            sum += v;
            abs += v.abs();
            pw *= theta;
        }
        let k = f64::from(self.field.degree);
        let err = (k + 3.0) * abs * 2f64.powi(-50);
        if !(abs.is_normal() && abs > 1e-250) {
            return None;
        }
        if sum > err {
            Some(Ordering::Greater)
        } else if sum < -err {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn classify(&self, prec: u32) -> Classification {
        Classification {
            is_zero: self.is_zero(),
            is_integer: self.is_integer(),
            sign: self.sign(),
            approx: if self.is_zero() { RBall::zero(prec) } else { self.to_ball_rel(prec) },
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor().to_integer();
        }
        // Irrational elements are never integers, so the floor is eventually decided.
        let mut prec = 64;
        loop {
            if let Some(f) = self.to_ball(prec).floor() {
                return f;
            }
            prec *= 2;
        }
    }

    /// Fractional part `x - floor(x)`, exact.
    pub fn fract(&self) -> Self {
        self - &Self::from_bigint(self.field, self.floor())
    }

    /// Integer `p` with `self = p * b`, if one exists.
    pub fn int_ratio(&self, b: &Self) -> Result<Option<BigInt>> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.checked_div(b)?.as_integer())
    }

    /// Double-precision approximation.
    pub fn to_f64(&self) -> f64 {
        let theta = self.field.theta_f64();
        let mut sum = 0.0;
        let mut abs = 0.0;
        let mut pw = 1.0;
        for c in &self.coeffs {
            let v = c.to_f64().unwrap_or(f64::NAN) * pw;
            sum += v;
            abs += v.abs();
            pw *= theta;
        }
        if sum.is_finite() && (sum.abs() > 1e-6 * abs || abs == 0.0) {
            sum
        } else {
            self.to_ball_rel(60).mid_f64()
        }
    }

    /// Text form including the field suffix, e.g. `1/2*t (t^2 = 10)`.
    pub fn to_text(&self) -> String {
        if self.field.is_rational() {
            self.to_string()
        } else {
            format!("{} ({})", self, self.field)
        }
    }

    /// Parse `q0 + q1*t + ...`, optionally followed by `(t^k = n)`.
    pub fn parse(s: &str, field: Field) -> Result<Self> {
        let (body, suffix) = split_field_suffix(s);
        if let Some(suffix) = suffix {
            let declared = parse_field_suffix(suffix)?;
            field.check_same(&declared)?;
        }
        parse_sum(body, field)
    }

    /// Parse text that must carry its own field suffix (or denote a rational).
    pub fn parse_standalone(s: &str) -> Result<Self> {
        let (body, suffix) = split_field_suffix(s);
        let field = match suffix {
            Some(sfx) => parse_field_suffix(sfx)?,
            None => Field::RATIONAL,
        };
        parse_sum(body, field)
    }
}

fn split_field_suffix(s: &str) -> (&str, Option<&str>) {
    let t = s.trim();
    if t.ends_with(')') {
        if let Some(open) = t.rfind('(') {
            let inner = &t[open + 1..t.len() - 1];
            if inner.contains('=') {
                return (t[..open].trim(), Some(inner));
            }
        }
    }
    (t, None)
}

fn parse_field_suffix(s: &str) -> Result<Field> {
    let (lhs, rhs) = s.split_once('=').ok_or_else(|| Error::Parse(format!("bad field suffix '{s}'")))?;
    let lhs = lhs.trim();
    let k: u32 = match lhs.strip_prefix("t^") {
        Some(k) => k.trim().parse().map_err(|_| Error::Parse(format!("bad degree in '{s}'")))?,
        None if lhs == "t" => 1,
        None => return Err(Error::Parse(format!("bad field suffix '{s}'"))),
    };
    let n: u64 = rhs.trim().parse().map_err(|_| Error::Parse(format!("bad radicand in '{s}'")))?;
    Field::new(n, k)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    } else if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_abs = ip.trim().trim_start_matches(['-', '+']);
        let whole = if ip_abs.is_empty() { BigInt::zero() } else { BigInt::from_str(ip_abs).map_err(|_| bad())? };
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac = if fp.is_empty() { BigInt::zero() } else { BigInt::from_str(fp).map_err(|_| bad())? };
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let v = BigRational::new(whole * &den + frac, den);
        Ok(if neg { -v } else { v })
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

fn parse_sum(s: &str, field: Field) -> Result<FieldElement> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty field element".into()));
    }
    let mut acc = FieldElement::zero(field);
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    for i in 1..bytes.len() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'/' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for t in terms {
        acc = &acc + &parse_term(t, field)?;
    }
    Ok(acc)
}

fn parse_term(t: &str, field: Field) -> Result<FieldElement> {
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let (neg, body) = match compact.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, compact.strip_prefix('+').unwrap_or(&compact)),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("empty term in '{t}'")));
    }
    let value = match body.find('t') {
        None => FieldElement::from_rational(field, parse_rational(body)?),
        Some(pos) => {
            let coef_str = body[..pos].trim_end_matches('*');
            let coef = if coef_str.is_empty() { BigRational::one() } else { parse_rational(coef_str)? };
            let mut rest = &body[pos + 1..];
            let mut power: u32 = 1;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                power = r[..end].parse().map_err(|_| Error::Parse(format!("bad exponent in '{t}'")))?;
                rest = &r[end..];
            }
            let mut coef = coef;
            if let Some(d) = rest.strip_prefix('/') {
                let d = parse_rational(d)?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                coef /= d;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("trailing input '{rest}' in '{t}'")));
            }
            if field.is_rational() && power > 0 {
                return Err(Error::Parse(format!("'{t}' uses t but the field is Q")));
            }
            FieldElement::theta_pow(field, power).scale(&coef)
        }
    };
    Ok(if neg { value.neg() } else { value })
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match i {
                0 => fmt_rational(&mag),
                _ => {
                    let t = if i == 1 { "t".to_string() } else { format!("t^{i}") };
                    if mag.is_one() {
                        t
                    } else {
                        format!("{}*{}", fmt_rational(&mag), t)
                    }
                }
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order by real value; elements of different fields order by descriptor.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.field != other.field {
            return self.field.cmp(&other.field);
        }
        if self.coeffs == other.coeffs {
            return Ordering::Equal;
        }
        (self - other).sign()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands live in different fields.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect(concat!("FieldElement ", stringify!($method)))
            }
        }
        impl std::ops::$trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

/// Solve an augmented square system; `None` if singular.
pub(crate) fn solve_augmented(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Rank of a matrix of field elements (rows may be any length).
pub fn rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, pc) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = &*x - &(&f * pc);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Least common multiple helper for rational denominators.
pub(crate) fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q10() -> Field {
        Field::new(10, 2).unwrap()
    }

    fn fe(s: &str, f: Field) -> FieldElement {
        FieldElement::parse(s, f).unwrap()
    }

    #[test]
    fn field_construction() {
        assert_eq!(q10().degree(), 2);
        assert!(Field::new(2, 1).unwrap().is_rational());
        assert!(matches!(Field::new(4, 2), Err(Error::Irreducibility { prime: 2, .. })));
        assert!(matches!(Field::new(8, 3), Err(Error::Irreducibility { prime: 3, .. })));
        assert!(Field::new(8, 2).is_ok());
        assert!(matches!(Field::new(16, 4), Err(Error::Irreducibility { .. })));
        assert!(Field::new(1, 2).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let f = q10();
        let t = FieldElement::theta(f);
        assert_eq!(&t * &t, FieldElement::from_int(f, 10));
        assert_eq!(&fe("1/2*t", f) * &t, FieldElement::from_int(f, 5));
        let x = fe("1 + t", f);
        assert_eq!(&x / &x, FieldElement::one(f));
        assert_eq!(FieldElement::one(f).checked_div(&FieldElement::zero(f)), Err(Error::DivisionByZero));
        let other = FieldElement::one(Field::new(2, 2).unwrap());
        assert!(matches!(t.checked_add(&other), Err(Error::DescriptorMismatch { .. })));
    }

    #[test]
    fn classification_examples() {
        let f = q10();
        let z = FieldElement::zero(f).classify(64);
        assert!(z.is_zero && z.sign == Ordering::Equal);
        assert_eq!(fe("t - 3", f).classify(64).sign, Ordering::Greater);
        let e = &(&FieldElement::from_int(f, 5) / &FieldElement::theta(f)) - &fe("t/2", f);
        assert!(e.classify(64).is_zero);
    }

    #[test]
    fn int_ratio_examples() {
        let f = q10();
        let t = FieldElement::theta(f);
        assert_eq!((&t * &fe("t/2", f)).int_ratio(&FieldElement::one(f)), Ok(Some(BigInt::from(5))));
        assert_eq!(t.int_ratio(&t), Ok(Some(BigInt::from(1))));
        assert_eq!(t.int_ratio(&FieldElement::one(f)), Ok(None));
        assert_eq!(t.int_ratio(&FieldElement::zero(f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn sign_of_nearly_cancelling_element() {
        // Continued-fraction convergents of sqrt(10) alternate around it.
        let f = q10();
        for (p, q) in [(39480499i64, 12484314i64), (243289797, 76931827), (1499219281, 474075276)] {
            let x = fe(&format!("t - {p}/{q}"), f);
            let want = (10 * (q as i128) * (q as i128)).cmp(&((p as i128) * (p as i128)));
            assert_eq!(x.sign(), want);
        }
    }

    #[test]
    fn cube_root_field() {
        let f = Field::new(2, 3).unwrap();
        let t = FieldElement::theta(f);
        let t3 = t.pow(3).unwrap();
        assert_eq!(t3, FieldElement::from_int(f, 2));
        let x = fe("1 + t - 2/3*t^2", f);
        assert_eq!(&(&x * &x.inv().unwrap()), &FieldElement::one(f));
        assert!((x.to_f64() - (1.0 + 2f64.cbrt() - 2.0 / 3.0 * 2f64.cbrt().powi(2))).abs() < 1e-12);
    }

    #[test]
    fn floor_and_ordering() {
        let f = q10();
        assert_eq!(FieldElement::theta(f).floor(), BigInt::from(3));
        assert_eq!(fe("-t", f).floor(), BigInt::from(-4));
        let mut v = vec![fe("t", f), fe("3", f), fe("1/2*t", f), fe("-t", f)];
        v.sort();
        assert_eq!(v, vec![fe("-t", f), fe("1/2*t", f), fe("3", f), fe("t", f)]);
    }

    #[test]
    fn text_round_trip() {
        let f = q10();
        for s in ["0", "t", "-t", "1/2*t", "3 - 7/5*t", "-1/3 + t"] {
            let x = fe(s, f);
            assert_eq!(x.to_string(), s);
            assert_eq!(FieldElement::parse(&x.to_text(), f).unwrap(), x);
            assert_eq!(FieldElement::parse_standalone(&x.to_text()).unwrap(), x);
        }
        assert_eq!(fe("t^3", f), fe("10*t", f));
        assert_eq!(fe("5/2 t", f), fe("5/2*t", f));
        assert!(FieldElement::parse("t (t^2 = 3)", f).is_err());
        assert!(FieldElement::parse("2*x", f).is_err());
    }

    #[test]
    fn rank_of_direction_matrices() {
        let f = q10();
        let row = |a: &str, b: &str| vec![fe(a, f), fe(b, f)];
        assert_eq!(rank(&[row("1", "0"), row("0", "1"), row("t/2", "0")]), 2);
        assert_eq!(rank(&[row("1", "t"), row("t", "10")]), 1);
    }
}
