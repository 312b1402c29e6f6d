//! Dense univariate polynomials over `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial `c_0 + c_1 z + ...` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division `(quotient, remainder)`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b nonzero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `p(z^m)`.
    pub fn compose_pow(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * m] = c.clone();
        }
        Self::new(v)
    }

    /// Number of leading zero coefficients (the power of `z` dividing `p`).
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide out the largest power of `z`.
    pub fn strip_low(&self) -> Self {
        Self::new(self.coeffs[self.low_order()..].to_vec())
    }

    /// Normalize so the constant term is one (requires a nonzero constant term).
    pub fn normalize_constant(&self) -> Self {
        match self.coeffs.first() {
            Some(c) if !c.is_zero() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Reciprocal polynomial `z^deg p(1/z)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Largest coefficient magnitude as f64.
    pub fn max_abs_f64(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }

    /// Squarefree factorization `p = c * prod f_i^i` (Yun); returns `(i, f_i)`
    /// for nonconstant factors.
    pub fn squarefree_factors(&self) -> Vec<(usize, RatPoly)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).expect("nonzero").0;
        let mut c = fp.divrem(&a0).expect("nonzero").0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a.clone()));
            }
            b = b.divrem(&a).expect("nonzero").0;
            c = d.divrem(&a).expect("nonzero").0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    fn sturm_sequence(&self) -> Vec<RatPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].divrem(&seq[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Isolating intervals `(a, b]` of the distinct real roots in `(lo, hi]`,
    /// each of width at most `width`. Exact (Sturm sequences).
    pub fn isolate_real_roots(
        &self,
        lo: &BigRational,
        hi: &BigRational,
        width: &BigRational,
    ) -> Result<Vec<(BigRational, BigRational)>> {
        if self.is_zero() {
            return Err(Error::RootIsolationFailure("zero polynomial".into()));
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let sq = {
            let g = self.gcd(&self.derivative());
            self.divrem(&g)?.0
        };
        let seq = sq.sturm_sequence();
        let count =
            |a: &BigRational, b: &BigRational| Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b));
        let two = BigRational::from_integer(BigInt::from(2));
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        let mut guard = 0usize;
        while let Some((a, b)) = stack.pop() {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::RootIsolationFailure("bisection budget exhausted".into()));
            }
            let n = count(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 && &b - &a <= *width {
                out.push((a, b));
                continue;
            }
            let m = (&a + &b) / &two;
            stack.push((m.clone(), b));
            stack.push((a, m));
        }
        out.sort();
        Ok(out)
    }
}

fn fmt_coef(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Descending-order text such as `z^2+2*z+1`.
impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let var = match i {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{i}"),
            };
            let body = if var.is_empty() {
                fmt_coef(&mag)
            } else if mag.is_one() {
                var
            } else {
                format!("{}*{}", fmt_coef(&mag), var)
            };
            if c.is_negative() {
                write!(f, "-{body}")?;
            } else if first {
                write!(f, "{body}")?;
            } else {
                write!(f, "+{body}")?;
            }
            first = false;
        }
        Ok(())
    }
}
