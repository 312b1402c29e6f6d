//! Real and complex ball arithmetic over dyadic endpoints.
//!
//! An [`RBall`] is the closed interval `[lo, hi] * 2^exp` with integer
//! endpoints. Every operation rounds outward, so the true result of the
//! corresponding real operation always lies inside the returned ball.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

fn shr_floor(x: &BigInt, s: u64) -> BigInt {
    x >> s
}

fn shr_ceil(x: &BigInt, s: u64) -> BigInt {
    -((-x) >> s)
}

/// `x * 2^e` rounded to the nearest f64 (saturating to 0 or infinity).
pub(crate) fn ldexp_big(x: &BigInt, e: i64) -> f64 {
    let b = bits(x) as i64;
    let (m, e) = if b > 62 { (x >> ((b - 62) as u64), e + b - 62) } else { (x.clone(), e) };
    let m = m.to_f64().unwrap_or(0.0);
    ldexp(m, e)
}

pub(crate) fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

/// Closed real interval with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBall {
    lo: BigInt,
    hi: BigInt,
    exp: i64,
    prec: u32,
}

impl RBall {
    pub fn zero(prec: u32) -> Self {
        RBall { lo: BigInt::zero(), hi: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let n = n.into();
        RBall { lo: n.clone(), hi: n, exp: 0, prec }.rounded()
    }

    /// Exact dyadic `m * 2^e`.
    pub fn from_dyadic(m: BigInt, e: i64, prec: u32) -> Self {
        RBall { lo: m.clone(), hi: m, exp: e, prec }.rounded()
    }

    /// Interval `[lo, hi] * 2^exp`; endpoints are swapped if out of order.
    pub fn from_endpoints(lo: BigInt, hi: BigInt, exp: i64, prec: u32) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        RBall { lo, hi, exp, prec }.rounded()
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64 has no ball enclosure");
        let (mant, e, sign) = x.integer_decode();
        let m = BigInt::from(mant) * i64::from(sign);
        Self::from_dyadic(m, i64::from(e), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.is_integer() {
            return Self::from_int(q.to_integer(), prec);
        }
        let (n, d) = (q.numer(), q.denom());
        let s = i64::from(prec) + 8 + bits(d) as i64 - bits(n) as i64;
        let (num, den) = if s >= 0 { (n << (s as u64), d.clone()) } else { (n.clone(), d << ((-s) as u64)) };
        let lo = num.div_floor(&den);
        let hi = num.div_ceil(&den);
        RBall { lo, hi, exp: -s, prec }.rounded()
    }

    /// Symmetric ball `[-|r|, |r|]` covering the absolute value of `r`.
    pub fn symmetric(r: &RBall) -> Self {
        let m = r.lo.abs().max(r.hi.abs());
        RBall { lo: -m.clone(), hi: m, exp: r.exp, prec: r.prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.rounded()
    }

    fn rounded(mut self) -> Self {
        let m = bits(&self.lo).max(bits(&self.hi));
        let keep = u64::from(self.prec) + 4;
        if m > keep + 8 {
            let s = m - keep;
            self.lo = shr_floor(&self.lo, s);
            self.hi = shr_ceil(&self.hi, s);
            self.exp += s as i64;
        }
        if self.lo.is_zero() && self.hi.is_zero() {
            self.exp = 0;
        }
        self
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Sign if the ball excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.is_positive() {
            Some(Greater)
        } else if self.is_negative() {
            Some(Less)
        } else if self.is_exact_zero() {
            Some(Equal)
        } else {
            None
        }
    }

    pub fn lower(&self) -> BigRational {
        dyadic_rational(&self.lo, self.exp)
    }

    pub fn upper(&self) -> BigRational {
        dyadic_rational(&self.hi, self.exp)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    pub fn contains_ball(&self, other: &RBall) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn mid_f64(&self) -> f64 {
        ldexp_big(&(&self.lo + &self.hi), self.exp - 1)
    }

    pub fn lower_f64(&self) -> f64 {
        ldexp_big(&self.lo, self.exp)
    }

    pub fn upper_f64(&self) -> f64 {
        ldexp_big(&self.hi, self.exp)
    }

    pub fn width_f64(&self) -> f64 {
        ldexp_big(&(&self.hi - &self.lo), self.exp)
    }

    /// Upper bound on `log2(width)`; `None` for a point.
    pub fn width_log2(&self) -> Option<i64> {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            None
        } else {
            Some(bits(&w) as i64 + self.exp)
        }
    }

    /// Upper bound on `log2 |x|` over the ball; `None` for exact zero.
    pub fn mag_log2(&self) -> Option<i64> {
        let m = bits(&self.lo).max(bits(&self.hi));
        if m == 0 {
            None
        } else {
            Some(m as i64 + self.exp)
        }
    }

    /// True when the width is at most `2^-bits`.
    pub fn abs_width_below(&self, bits: i64) -> bool {
        match self.width_log2() {
            None => true,
            Some(w) => w <= -bits,
        }
    }

    /// Integer part if it is the same for every point of the ball.
    pub fn floor(&self) -> Option<BigInt> {
        let (fl, fh) = if self.exp >= 0 {
            (&self.lo << (self.exp as u64), &self.hi << (self.exp as u64))
        } else {
            let s = (-self.exp) as u64;
            (shr_floor(&self.lo, s), shr_floor(&self.hi, s))
        };
        (fl == fh).then_some(fl)
    }

    /// Integer nearest the midpoint.
    pub fn round_mid(&self) -> BigInt {
        let sum = &self.lo + &self.hi;
        // mid = sum * 2^(exp-1); round(mid) = floor(mid + 1/2)
        let e = self.exp - 1;
        if e >= 0 {
            sum << (e as u64)
        } else {
            let s = (-e) as u64;
            (sum + (BigInt::one() << (s - 1))) >> s
        }
    }

    fn aligned(a: &RBall, b: &RBall) -> (BigInt, BigInt, BigInt, BigInt, i64) {
        use std::cmp::Ordering::*;
        match a.exp.cmp(&b.exp) {
            Equal => (a.lo.clone(), a.hi.clone(), b.lo.clone(), b.hi.clone(), a.exp),
            Greater => {
                let s = (a.exp - b.exp) as u64;
                (&a.lo << s, &a.hi << s, b.lo.clone(), b.hi.clone(), b.exp)
            }
            Less => {
                let s = (b.exp - a.exp) as u64;
                (a.lo.clone(), a.hi.clone(), &b.lo << s, &b.hi << s, a.exp)
            }
        }
    }

    /// Rescale so that the endpoints carry about `prec` bits.
    fn upscaled(&self) -> RBall {
        let m = bits(&self.lo).max(bits(&self.hi));
        let want = u64::from(self.prec) + 4;
        if m >= want || m == 0 {
            return self.clone();
        }
        let s = want - m;
        RBall { lo: &self.lo << s, hi: &self.hi << s, exp: self.exp - s as i64, prec: self.prec }
    }

    pub fn add(&self, other: &RBall) -> RBall {
        let prec = self.prec.max(other.prec);
        if self.is_exact_zero() {
            return other.clone().with_prec(prec);
        }
        if other.is_exact_zero() {
            return self.clone().with_prec(prec);
        }
        // Absorb an operand far below the other's last kept bit.
        let gap = i64::from(prec) + 64;
        for (big, small) in [(self, other), (other, self)] {
            if big.exp - small.exp > gap {
                let big = big.upscaled();
                if let Some(ms) = small.mag_log2() {
                    if ms <= big.exp {
                        return RBall { lo: &big.lo - 1, hi: &big.hi + 1, exp: big.exp, prec }.rounded();
                    }
                }
            }
        }
        let (alo, ahi, blo, bhi, exp) = Self::aligned(self, other);
        RBall { lo: alo + blo, hi: ahi + bhi, exp, prec }.rounded()
    }

    pub fn neg(&self) -> RBall {
        RBall { lo: -&self.hi, hi: -&self.lo, exp: self.exp, prec: self.prec }
    }

    pub fn sub(&self, other: &RBall) -> RBall {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RBall) -> RBall {
        let prec = self.prec.max(other.prec);
        let p = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = p.iter().min().cloned().unwrap_or_default();
        let hi = p.iter().max().cloned().unwrap_or_default();
        RBall { lo, hi, exp: self.exp + other.exp, prec }.rounded()
    }

    pub fn mul_int(&self, n: i64) -> RBall {
        self.mul(&RBall::from_int(n, self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> RBall {
        let mut r = self.clone();
        if !r.is_exact_zero() {
            r.exp += k;
        }
        r
    }

    pub fn mul_rational(&self, q: &BigRational) -> RBall {
        if q.is_integer() {
            self.mul(&RBall::from_int(q.to_integer(), self.prec))
        } else {
            self.mul(&RBall::from_int(q.numer().clone(), self.prec))
                .div(&RBall::from_int(q.denom().clone(), self.prec))
                .expect("nonzero denominator")
        }
    }

    /// Quotient; `None` when the divisor contains zero.
    pub fn div(&self, other: &RBall) -> Option<RBall> {
        if other.contains_zero() {
            return None;
        }
        let prec = self.prec.max(other.prec);
        if self.is_exact_zero() {
            return Some(RBall::zero(prec));
        }
        let xb = bits(&self.lo).max(bits(&self.hi)) as i64;
        let yb = bits(&other.lo).max(bits(&other.hi)) as i64;
        let s = (i64::from(prec) + 8 + yb - xb).max(0) as u64;
        let xl = &self.lo << s;
        let xh = &self.hi << s;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&xl, &xh] {
            for y in [&other.lo, &other.hi] {
                let f = x.div_floor(y);
                let c = x.div_ceil(y);
                lo = Some(match lo {
                    Some(l) if l <= f => l,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(h) if h >= c => h,
                    _ => c,
                });
            }
        }
        Some(
            RBall {
                lo: lo.unwrap_or_default(),
                hi: hi.unwrap_or_default(),
                exp: self.exp - s as i64 - other.exp,
                prec,
            }
            .rounded(),
        )
    }

    pub fn abs(&self) -> RBall {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RBall { lo: BigInt::zero(), hi: (-&self.lo).max(self.hi.clone()), exp: self.exp, prec: self.prec }
        }
    }

    pub fn pow(&self, n: u32) -> RBall {
        let base = if n.is_multiple_of(2) { self.abs() } else { self.clone() };
        let mut result = RBall::from_int(1, self.prec);
        let mut b = base;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    /// Square root; negative parts of the ball are clamped to zero.
    /// `None` if the ball is entirely negative.
    pub fn sqrt(&self) -> Option<RBall> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() { BigInt::zero() } else { self.lo.clone() };
        if self.hi.is_zero() {
            return Some(RBall::zero(self.prec));
        }
        let target = 2 * i64::from(self.prec) + 16;
        let mut s = target - bits(&self.hi) as i64;
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let (l2, h2) = if s >= 0 {
            (&lo << (s as u64), &self.hi << (s as u64))
        } else {
            (shr_floor(&lo, (-s) as u64), shr_ceil(&self.hi, (-s) as u64))
        };
        let rl = l2.sqrt();
        let mut rh = h2.sqrt();
        if &rh * &rh < h2 {
            rh += 1;
        }
        Some(RBall { lo: rl, hi: rh, exp: (self.exp - s) / 2, prec: self.prec }.rounded())
    }

    /// Smallest ball containing both.
    pub fn hull(&self, other: &RBall) -> RBall {
        let prec = self.prec.max(other.prec);
        let (alo, ahi, blo, bhi, exp) = Self::aligned(self, other);
        RBall { lo: alo.min(blo), hi: ahi.max(bhi), exp, prec }.rounded()
    }

    /// Clamp to `[-1, 1]` (used for cosine and sine enclosures).
    fn clamp_unit(self) -> RBall {
        let one = BigRational::one();
        let lo = self.lower().max(-one.clone());
        let hi = self.upper().min(one);
        if lo > hi {
            return self;
        }
        if lo == self.lower() && hi == self.upper() {
            return self;
        }
        let p = self.prec;
        RBall::from_rational(&lo, p).hull(&RBall::from_rational(&hi, p))
    }

    /// `pi` enclosed at roughly `prec` bits.
    pub fn pi(prec: u32) -> RBall {
        static CACHE: Mutex<Option<RBall>> = Mutex::new(None);
        let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(c) = guard.as_ref() {
            if c.prec >= prec {
                return c.clone().with_prec(prec);
            }
        }
        let work = (prec.max(64) + 32).next_power_of_two();
        let p = u64::from(work) + 16;
        let (a5, e5) = atan_inv_fixed(5, p);
        let (a239, e239) = atan_inv_fixed(239, p);
        let s: BigInt = a5 * 16 - a239 * 4;
        let err = BigInt::from(16 * e5 + 4 * e239);
        let ball = RBall { lo: &s - &err, hi: &s + &err, exp: -(p as i64), prec: work }.rounded();
        *guard = Some(ball.clone());
        ball.with_prec(prec)
    }

    /// `exp(x)`.
    pub fn exp(&self) -> RBall {
        let prec = self.prec;
        if self.is_exact_zero() {
            return RBall::from_int(1, prec);
        }
        // Halve until |x| <= 1/16, sum the series, then square back.
        let mag = self.mag_log2().unwrap_or(0);
        let s = (mag + 4).max(0) as u32;
        let work = prec + s + 16;
        let x = self.clone().with_prec(work).mul_pow2(-i64::from(s));
        let mut sum = RBall::from_int(1, work);
        let mut term = RBall::from_int(1, work);
        let mut k = 1i64;
        loop {
            term = term.mul(&x).div(&RBall::from_int(k, work)).expect("k > 0");
            if let Some(m) = term.mag_log2() {
                if m < -(i64::from(work) + 8) {
                    // |x| <= 1/16 makes the tail at most twice the current term.
                    sum = sum.add(&RBall::symmetric(&term.mul_int(2)));
                    break;
                }
            } else {
                break;
            }
            sum = sum.add(&term);
            k += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum.with_prec(prec)
    }

    /// `(cos t, sin t)` for `|t| <= 4`.
    pub fn sin_cos(&self) -> (RBall, RBall) {
        let prec = self.prec;
        let work = prec + 16;
        let t = self.clone().with_prec(work);
        let t2 = t.mul(&t);
        let limit = -(i64::from(work) + 8);
        let series = |first: RBall, start: i64| {
            let mut sum = first.clone();
            let mut term = first;
            let mut k = start;
            loop {
                term = term.mul(&t2).div(&RBall::from_int((k + 1) * (k + 2), work)).expect("positive").neg();
                k += 2;
                match term.mag_log2() {
                    Some(m) if m >= limit => sum = sum.add(&term),
                    Some(_) => {
                        // Alternating series with decreasing terms: tail bounded by this term.
                        return sum.add(&RBall::symmetric(&term));
                    }
                    None => return sum,
                }
            }
        };
        let c = series(RBall::from_int(1, work), 0);
        let s = series(t.clone(), 1);
        (c.with_prec(prec).clamp_unit(), s.with_prec(prec).clamp_unit())
    }

    /// `e^{-2 pi i x}` with exact integer-part removal.
    pub fn expm2pii(&self) -> CBall {
        let prec = self.prec;
        if self.is_exact_zero() {
            return CBall::one(prec);
        }
        if matches!(self.width_log2(), Some(w) if w >= -2) {
            return CBall::unit_box(prec);
        }
        let n = self.round_mid();
        let frac = self.sub(&RBall::from_int(n, prec + 16));
        let work = prec + 8;
        let t = RBall::pi(work).mul(&frac.with_prec(work)).mul_int(2);
        let (c, s) = t.sin_cos();
        CBall { re: c.with_prec(prec), im: s.neg().with_prec(prec) }
    }
}

fn dyadic_rational(m: &BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << (e as u64))
    } else {
        BigRational::new(m.clone(), BigInt::one() << ((-e) as u64))
    }
}

/// `atan(1/x) * 2^p` truncated, with an error bound in units of `2^-p`.
fn atan_inv_fixed(x: u64, p: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << p) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, 2 * (k + 2))
}

/// Rectangular complex ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBall {
    pub re: RBall,
    pub im: RBall,
}

impl CBall {
    pub fn new(re: RBall, im: RBall) -> Self {
        CBall { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        CBall { re: RBall::zero(prec), im: RBall::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        CBall { re: RBall::from_int(1, prec), im: RBall::zero(prec) }
    }

    pub fn real(re: RBall) -> Self {
        let p = re.prec;
        CBall { re, im: RBall::zero(p) }
    }

    fn unit_box(prec: u32) -> Self {
        let u = RBall::from_endpoints(BigInt::from(-1), BigInt::one(), 0, prec);
        CBall { re: u.clone(), im: u }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        CBall { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }

    pub fn mul_real(&self, r: &RBall) -> CBall {
        CBall { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn mul_rational(&self, q: &BigRational) -> CBall {
        CBall { re: self.re.mul_rational(q), im: self.im.mul_rational(q) }
    }

    /// `|z|^2` as a real ball.
    pub fn norm_sqr(&self) -> RBall {
        self.re.pow(2).add(&self.im.pow(2))
    }

    pub fn div(&self, o: &CBall) -> Option<CBall> {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        Some(CBall { re: n.re.div(&d)?, im: n.im.div(&d)? })
    }

    /// Enclosure of `|z|`.
    pub fn abs(&self) -> RBall {
        self.norm_sqr().sqrt().expect("norm is nonnegative")
    }

    /// Certified lower bound on `|z|` as an exact rational.
    pub fn abs_lower(&self) -> BigRational {
        let a = self.abs().lower();
        if a.is_negative() {
            BigRational::zero()
        } else {
            a
        }
    }

    pub fn abs_upper(&self) -> BigRational {
        self.abs().upper()
    }

    /// True unless the ball provably excludes zero.
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn mid_f64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.mid_f64(), self.im.mid_f64())
    }

    /// Largest half-width of either component, as f64.
    pub fn radius_f64(&self) -> f64 {
        0.5 * self.re.width_f64().max(self.im.width_f64())
    }

    /// `exp(z)` for a complex ball.
    pub fn exp(&self) -> CBall {
        let m = self.re.exp();
        let prec = self.prec();
        // Reduce the imaginary part by multiples of 2 pi through expm2pii.
        let two_pi = RBall::pi(prec + 16).mul_int(2);
        let turns = self.im.clone().with_prec(prec + 16).div(&two_pi).expect("pi > 0").neg();
        let e = turns.expm2pii();
        e.mul_real(&m)
    }
}
