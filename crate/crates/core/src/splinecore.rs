//! Box splines, refinement masks and numeric solution of refinement equations.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::ball::{CBall, RBall};
use crate::error::{Error, Result};
use crate::exactreal::{rank, Field, FieldElement};
use crate::qtrig::{MvTrigPoly, QTrigPoly};

/// Direction matrix `M = (m_1, ..., m_n)` with columns in `Q(t)^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSplineSpec {
    field: Field,
    dim: usize,
    columns: Vec<Vec<FieldElement>>,
}

impl BoxSplineSpec {
    pub fn new(field: Field, columns: Vec<Vec<FieldElement>>) -> Result<Self> {
        let dim = columns.first().map(Vec::len).ok_or_else(|| Error::Precondition("no columns".into()))?;
        if dim == 0 {
            return Err(Error::Precondition("columns must be nonempty vectors".into()));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Precondition(format!("column {i} has length {} instead of {dim}", c.len())));
            }
            for x in c {
                field.check_same(&x.field())?;
            }
            if c.iter().all(FieldElement::is_zero) {
                return Err(Error::ZeroColumn(i));
            }
        }
        let r = rank(&columns);
        if r < dim {
            return Err(Error::RankDeficient { rank: r, dim });
        }
        Ok(BoxSplineSpec { field, dim, columns })
    }

    /// Univariate spline `B(x | m_1, ..., m_n)`.
    pub fn univariate(field: Field, dirs: &[FieldElement]) -> Result<Self> {
        Self::new(field, dirs.iter().map(|d| vec![d.clone()]).collect())
    }

    /// Cardinal B-spline of degree `d` (`d + 1` unit columns).
    pub fn cardinal(d: usize) -> Self {
        let f = Field::RATIONAL;
        Self::univariate(f, &vec![FieldElement::one(f); d + 1]).expect("unit columns")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vec<FieldElement>] {
        &self.columns
    }

    /// Column entries of a univariate spec.
    pub fn directions(&self) -> Vec<FieldElement> {
        self.columns.iter().map(|c| c[0].clone()).collect()
    }
}

/// Univariate refinement mask `H(w) = sum h_j E(d_j)` with dilation `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskSpec {
    lambda: FieldElement,
    mask: QTrigPoly,
}

impl MaskSpec {
    pub fn new(lambda: FieldElement, mask: QTrigPoly) -> Result<Self> {
        lambda.field().check_same(&mask.field())?;
        if lambda <= FieldElement::one(lambda.field()) {
            return Err(Error::InvalidLambda(lambda.to_text()));
        }
        if !mask.coefficient_sum().is_one() {
            return Err(Error::Precondition(format!(
                "mask coefficients sum to {} instead of 1",
                mask.coefficient_sum()
            )));
        }
        Ok(MaskSpec { lambda, mask })
    }

    /// Mask from refinement coefficients `c_j` (so `h_j = c_j / lambda`), all rational.
    pub fn from_coefficients(lambda: FieldElement, terms: &[(FieldElement, BigRational)]) -> Result<Self> {
        let l = lambda
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Precondition("coefficient form needs a rational dilation".into()))?;
        let mask = QTrigPoly::from_terms(lambda.field(), terms.iter().map(|(d, c)| (d.clone(), c / &l)))?;
        Self::new(lambda, mask)
    }

    pub fn lambda(&self) -> &FieldElement {
        &self.lambda
    }

    pub fn mask(&self) -> &QTrigPoly {
        &self.mask
    }

    pub fn field(&self) -> Field {
        self.lambda.field()
    }

    /// Translations `d_0 < d_1 < ... < d_N`.
    pub fn translations(&self) -> Vec<FieldElement> {
        self.mask.exponents()
    }

    /// Mask coefficients `h_j`, aligned with [`translations`](Self::translations).
    pub fn mask_coefficients(&self) -> Vec<BigRational> {
        self.mask.terms().map(|(_, c)| c.clone()).collect()
    }

    /// Refinement coefficients `c_j = lambda h_j`.
    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.mask.terms().map(|(_, h)| self.lambda.scale(h)).collect()
    }

    /// `(d_j, c_j)` as doubles.
    pub fn numeric(&self) -> (f64, Vec<f64>, Vec<f64>) {
        let l = self.lambda.to_f64();
        let d = self.mask.terms().map(|(d, _)| d.to_f64()).collect();
        let c = self.mask.terms().map(|(_, h)| l * h.to_f64().unwrap_or(f64::NAN)).collect();
        (l, d, c)
    }

    /// Support `[d_0/(lambda-1), d_N/(lambda-1)]` of the distribution solution.
    pub fn support(&self) -> (f64, f64) {
        let l = self.lambda.to_f64();
        let lo = self.mask.min_exponent().map_or(0.0, FieldElement::to_f64);
        let hi = self.mask.max_exponent().map_or(0.0, FieldElement::to_f64);
        (lo / (l - 1.0), hi / (l - 1.0))
    }

    pub fn to_text(&self) -> String {
        format!("lambda = {}; H = {}", self.lambda.to_text(), self.mask)
    }
}

/// Multivariate mask with `H(0) = 1`; refinement coefficients are `lambda^s h_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvMaskSpec {
    lambda: FieldElement,
    mask: MvTrigPoly,
}

impl MvMaskSpec {
    pub fn new(lambda: FieldElement, mask: MvTrigPoly) -> Result<Self> {
        lambda.field().check_same(&mask.field())?;
        if lambda <= FieldElement::one(lambda.field()) {
            return Err(Error::InvalidLambda(lambda.to_text()));
        }
        if !mask.coefficient_sum().is_one() {
            return Err(Error::Precondition("mask coefficients must sum to 1".into()));
        }
        Ok(MvMaskSpec { lambda, mask })
    }

    pub fn lambda(&self) -> &FieldElement {
        &self.lambda
    }

    pub fn mask(&self) -> &MvTrigPoly {
        &self.mask
    }

    pub fn dim(&self) -> usize {
        self.mask.dim()
    }

    /// `(d_j, c_j)` with `c_j = lambda^s h_j`.
    pub fn coefficients(&self) -> Vec<(Vec<FieldElement>, FieldElement)> {
        let ls = self.lambda.pow(self.dim() as i64).expect("nonzero");
        self.mask.terms().map(|(d, h)| (d.clone(), ls.scale(h))).collect()
    }
}

/// Uniform grid `start + i * step`, `i < len`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl GridSpec {
    /// `cells` cells across `[a, b]` plus `pad` extra cells on each side.
    pub fn covering(a: f64, b: f64, cells: usize, pad: usize) -> Self {
        let step = (b - a) / cells as f64;
        GridSpec { start: a - pad as f64 * step, step, len: cells + 1 + 2 * pad }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.x(self.len - 1)
    }
}

/// Samples of a real function on a uniform grid, with iteration diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: GridSpec,
    pub samples: Vec<f64>,
    /// Interval outside of which the function is known to vanish.
    pub support: (f64, f64),
    pub iterations: usize,
    /// Sup-norm differences between consecutive iterates.
    pub residuals: Vec<f64>,
    /// Trapezoid integral of each iterate (after renormalization when enabled).
    pub integrals: Vec<f64>,
    /// Largest magnitude seen outside the support over all iterates.
    pub support_leak: f64,
}

impl GridFunction {
    fn new(grid: GridSpec, samples: Vec<f64>, support: (f64, f64)) -> Self {
        GridFunction {
            grid,
            samples,
            support,
            iterations: 0,
            residuals: Vec::new(),
            integrals: Vec::new(),
            support_leak: 0.0,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.grid.x(i)
    }

    /// Linear interpolation, zero outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        interp(&self.samples, self.grid.start, self.grid.step, x)
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.samples, self.grid.step)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sup |self - other|` over this grid's nodes.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        (0..self.samples.len()).map(|i| (self.samples[i] - other.eval(self.x(i))).abs()).fold(0.0, f64::max)
    }

    /// `sup |self - f|` over this grid's nodes.
    pub fn sup_distance_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        (0..self.samples.len()).map(|i| (self.samples[i] - f(self.x(i))).abs()).fold(0.0, f64::max)
    }

    /// Largest magnitude at nodes outside `support` (with a one-ulp tolerance).
    pub fn outside_support_max(&self) -> f64 {
        let (a, b) = self.support;
        let tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
        (0..self.samples.len())
            .filter(|&i| self.x(i) < a - tol || self.x(i) > b + tol)
            .map(|i| self.samples[i].abs())
            .fold(0.0, f64::max)
    }

    /// CSV with a metadata comment line followed by `x,f` rows.
    pub fn to_csv(&self) -> String {
        let exact =
            |v: f64| BigRational::from_float(v).map_or_else(|| "nan".to_string(), |q| crate::codec::rat_to_string(&q));
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# start={} ({}) step={} ({}) len={} iterations={} support=[{},{}]",
            self.grid.start,
            exact(self.grid.start),
            self.grid.step,
            exact(self.grid.step),
            self.grid.len,
            self.iterations,
            self.support.0,
            self.support.1
        );
        s.push_str("x,f\n");
        for (i, v) in self.samples.iter().enumerate() {
            let _ = writeln!(s, "{:e},{:e}", self.x(i), v);
        }
        s
    }
}

fn interp(samples: &[f64], start: f64, step: f64, x: f64) -> f64 {
    let u = (x - start) / step;
    if u.is_nan() || u < 0.0 {
        return 0.0;
    }
    let i = u.floor() as usize;
    if i + 1 >= samples.len() {
        return if i + 1 == samples.len() && u == i as f64 { samples[i] } else { 0.0 };
    }
    let t = u - i as f64;
    samples[i] * (1.0 - t) + samples[i + 1] * t
}

fn trapezoid(samples: &[f64], step: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = samples[1..n - 1].iter().sum();
    step * (inner + 0.5 * (samples[0] + samples[n - 1]))
}

/// `(1 - e^{-2 pi i x}) / (2 pi i x)`, equal to 1 at `x = 0`.
fn sinc_factor(x: &RBall, prec: u32) -> CBall {
    let work = prec + 16;
    let small = x.mag_log2().is_none() || x.mag_log2().is_some_and(|m| m < -(i64::from(prec) / 2));
    if small || x.contains_zero() {
        // Taylor: sum_{n<=8} (-2 pi i x)^n / (n+1)!, tail <= 2 |y|^9 / 10! for |y| <= 1/2.
        let y = RBall::pi(work).mul(&x.clone().with_prec(work)).mul_int(2);
        if y.mag_log2().is_some_and(|m| m > -1) {
            let u = RBall::from_endpoints(BigInt::from(-1), BigInt::one(), 0, prec);
            return CBall::new(u.clone(), u);
        }
        // (-i y)^n cycles through 1, -i, -1, i.
        let mut re = RBall::zero(work);
        let mut im = RBall::zero(work);
        let mut pw = RBall::from_int(1, work);
        let mut fact = BigInt::one();
        for n in 0..=8u32 {
            fact *= BigInt::from(n + 1);
            let term = pw.div(&RBall::from_int(fact.clone(), work)).expect("positive");
            match n % 4 {
                0 => re = re.add(&term),
                1 => im = im.sub(&term),
                2 => re = re.sub(&term),
                _ => im = im.add(&term),
            }
            pw = pw.mul(&y);
        }
        let tail = y.abs().pow(9).mul_int(2).div(&RBall::from_int(3_628_800, work)).expect("positive");
        let tail = RBall::symmetric(&tail);
        return CBall::new(re.add(&tail).with_prec(prec), im.add(&tail).with_prec(prec));
    }
    let e = x.clone().with_prec(work).expm2pii();
    let num = CBall::one(work).sub(&e);
    let y = RBall::pi(work).mul(&x.clone().with_prec(work)).mul_int(2);
    // num / (i y) = (num.im - i num.re) / y
    let re = num.im.div(&y).expect("x excludes zero");
    let im = num.re.div(&y).expect("x excludes zero").neg();
    CBall::new(re.with_prec(prec), im.with_prec(prec))
}

/// `prod_j (1 - e^{-2 pi i xi.m_j}) / (2 pi i xi.m_j)` as a complex ball.
pub fn boxspline_ft(spec: &BoxSplineSpec, xi: &[RBall], prec: u32) -> Result<CBall> {
    if xi.len() != spec.dim {
        return Err(Error::Precondition(format!("frequency has dimension {} instead of {}", xi.len(), spec.dim)));
    }
    let mag = xi.iter().filter_map(RBall::mag_log2).max().unwrap_or(0).max(0) as u32;
    let work = prec + mag + 16;
    let mut acc = CBall::one(prec);
    for col in &spec.columns {
        let mut x = RBall::zero(work);
        for (m, w) in col.iter().zip(xi) {
            x = x.add(&m.to_ball_abs(work).mul(&w.clone().with_prec(work)));
        }
        acc = acc.mul(&sinc_factor(&x, prec + 8));
    }
    Ok(acc)
}

/// Double-precision [`boxspline_ft`].
pub fn boxspline_ft_f64(spec: &BoxSplineSpec, xi: &[f64]) -> Complex64 {
    let pi = std::f64::consts::PI;
    spec.columns
        .iter()
        .map(|col| {
            let x: f64 = col.iter().zip(xi).map(|(m, w)| m.to_f64() * w).sum();
            if x.abs() < 1e-300 {
                Complex64::new(1.0, 0.0)
            } else {
                let s = (pi * x).sin() / (pi * x);
                Complex64::from_polar(s, -pi * x)
            }
        })
        .product()
}

/// Univariate box spline on a grid by iterated convolution of scaled indicators.
pub fn spline_time_eval(spec: &BoxSplineSpec, grid: GridSpec) -> Result<GridFunction> {
    if spec.dim != 1 {
        return Err(Error::Precondition("time-domain evaluation is univariate only".into()));
    }
    let dirs: Vec<f64> = spec.directions().iter().map(FieldElement::to_f64).collect();
    let min_len = dirs.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    if grid.step > min_len / 8.0 {
        return Err(Error::GridTooCoarse { step: grid.step, limit: min_len / 8.0 });
    }
    let lo: f64 = dirs.iter().map(|d| d.min(0.0)).sum();
    let hi: f64 = dirs.iter().map(|d| d.max(0.0)).sum();
    if grid.start > lo + 1e-12 || grid.end() < hi - 1e-12 {
        return Err(Error::Precondition(format!(
            "grid [{}, {}] does not cover the support [{lo}, {hi}]",
            grid.start,
            grid.end()
        )));
    }
    let seg = |d: f64| (d.min(0.0), d.abs());
    let (a1, l1) = seg(dirs[0]);
    let n = grid.len;
    let samples: Vec<f64> = if dirs.len() == 1 {
        (0..n)
            .map(|i| {
                let x = grid.x(i);
                if x >= a1 && x < a1 + l1 {
                    1.0 / l1
                } else {
                    0.0
                }
            })
            .collect()
    } else {
        // Two factors in closed form: g(x) = (G1(x - a2) - G1(x - a2 - l2)) / l2.
        let g1 = |x: f64| ((x - a1) / l1).clamp(0.0, 1.0);
        let (a2, l2) = seg(dirs[1]);
        let mut g: Vec<f64> = (0..n)
            .map(|i| {
                let x = grid.x(i);
                (g1(x - a2) - g1(x - a2 - l2)) / l2
            })
            .collect();
        for &d in &dirs[2..] {
            let (a, l) = seg(d);
            // Cumulative trapezoid antiderivative, constant beyond the grid.
            let mut cum = vec![0.0; n];
            for i in 1..n {
                cum[i] = cum[i - 1] + 0.5 * grid.step * (g[i - 1] + g[i]);
            }
            let total = cum[n - 1];
            let big_g = |x: f64| {
                if x <= grid.start {
                    0.0
                } else if x >= grid.end() {
                    total
                } else {
                    interp(&cum, grid.start, grid.step, x)
                }
            };
            g = (0..n)
                .map(|i| {
                    let x = grid.x(i);
                    (big_g(x - a) - big_g(x - a - l)) / l
                })
                .collect();
        }
        g
    };
    Ok(GridFunction::new(grid, samples, (lo, hi)))
}

/// Options for [`cascade_solve_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CascadeOptions {
    /// Divide each iterate by its trapezoid integral.
    pub renormalize: bool,
    /// Zero cells added on each side of the support to observe leakage.
    pub pad_cells: usize,
}

impl Default for CascadeOptions {
    fn default() -> Self {
        CascadeOptions { renormalize: true, pad_cells: 8 }
    }
}

/// Cascade iteration `f <- sum c_j f(lambda x - d_j)` from the normalized
/// indicator of the support, `grid_size` cells across the support.
pub fn cascade_solve(mask: &MaskSpec, grid_size: usize, iters: usize) -> Result<GridFunction> {
    cascade_solve_with(mask, grid_size, iters, CascadeOptions::default())
}

pub fn cascade_solve_with(
    mask: &MaskSpec,
    grid_size: usize,
    iters: usize,
    opts: CascadeOptions,
) -> Result<GridFunction> {
    let (lambda, d, c) = mask.numeric();
    cascade_numeric(lambda, &d, &c, mask.support(), grid_size, iters, opts)
}

fn cascade_numeric(
    lambda: f64,
    d: &[f64],
    c: &[f64],
    support: (f64, f64),
    grid_size: usize,
    iters: usize,
    opts: CascadeOptions,
) -> Result<GridFunction> {
    if lambda.is_nan() || lambda <= 1.0 {
        return Err(Error::InvalidLambda(lambda.to_string()));
    }
    if grid_size == 0 {
        return Err(Error::Precondition("grid size must be positive".into()));
    }
    let (a, b) = support;
    if a.is_nan() || b.is_nan() || b <= a {
        return Err(Error::Precondition("degenerate support; the solution is a point mass".into()));
    }
    let grid = GridSpec::covering(a, b, grid_size, opts.pad_cells);
    let n = grid.len;
    let lo_idx = opts.pad_cells;
    let hi_idx = opts.pad_cells + grid_size;
    let mut f: Vec<f64> = (0..n).map(|i| if i >= lo_idx && i < hi_idx { 1.0 } else { 0.0 }).collect();
    let s0 = trapezoid(&f, grid.step);
    f.iter_mut().for_each(|v| *v /= s0);

    let mut out = GridFunction::new(grid, Vec::new(), support);
    let outside = |f: &[f64]| (0..lo_idx).chain(hi_idx + 1..n).map(|i| f[i].abs()).fold(0.0, f64::max);
    out.integrals.push(trapezoid(&f, grid.step));
    let mut next = vec![0.0; n];
    for it in 0..iters {
        for (i, slot) in next.iter_mut().enumerate() {
            let x = grid.x(i);
            let mut acc = 0.0;
            for (dj, cj) in d.iter().zip(c) {
                let y = lambda * x - dj;
                if y >= a && y <= b {
                    acc += cj * interp(&f, grid.start, grid.step, y);
                }
            }
            *slot = acc;
        }
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { iteration: it + 1, residual: f64::INFINITY });
        }
        if opts.renormalize {
            let s = trapezoid(&next, grid.step);
            if s != 0.0 {
                next.iter_mut().for_each(|v| *v /= s);
            }
        }
        let res = f.iter().zip(&next).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut f, &mut next);
        out.residuals.push(res);
        out.integrals.push(trapezoid(&f, grid.step));
        out.support_leak = out.support_leak.max(outside(&f));
        let r = &out.residuals;
        let k = r.len();
        if k > 5 && r[k - 1] > 10.0 * r[k - 6] && r[k - 6..].windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::Divergence { iteration: k, residual: r[k - 1] });
        }
    }
    out.samples = f;
    out.iterations = iters;
    Ok(out)
}

/// Truncated product `prod_{j=1}^J H(lambda^{-j} w)` with all partial products.
#[derive(Clone, Debug)]
pub struct FourierProduct {
    pub value: CBall,
    /// `partials[j-1] = prod_{i<=j} H(lambda^{-i} w)`.
    pub partials: Vec<CBall>,
}

/// Evaluate the truncated infinite product at an exact frequency.
pub fn fourier_product_eval(mask: &MaskSpec, w: &FieldElement, j_max: usize, prec: u32) -> Result<FourierProduct> {
    if j_max == 0 {
        return Err(Error::Precondition("J must be at least 1".into()));
    }
    mask.field().check_same(&w.field())?;
    let lam_inv = mask.lambda.inv()?;
    let mut arg = w.clone();
    let mut acc = CBall::one(prec);
    let mut partials = Vec::with_capacity(j_max);
    for _ in 0..j_max {
        arg = &arg * &lam_inv;
        acc = acc.mul(&mask.mask.eval_exact(&arg, prec));
        partials.push(acc.clone());
    }
    Ok(FourierProduct { value: acc, partials })
}

/// Double-precision truncated product.
pub fn fourier_product_eval_f64(mask: &MaskSpec, w: f64, j_max: usize) -> Complex64 {
    let l = mask.lambda.to_f64();
    let mut x = w;
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..j_max {
        x /= l;
        acc *= mask.mask.eval_f64(x);
    }
    acc
}

/// Mask of `B(x | M)` for integer `M` and integer dilation `m`:
/// `H(w) = m^{-n} prod_j sum_{t<m} E(t w.m_j)`.
pub fn integer_dilation_box_mask(spec: &BoxSplineSpec, m: u64) -> Result<MvMaskSpec> {
    if m < 2 {
        return Err(Error::InvalidLambda(m.to_string()));
    }
    for col in &spec.columns {
        for x in col {
            if !x.is_integer() {
                return Err(Error::NonIntegerMatrix(x.to_text()));
            }
        }
    }
    let f = spec.field;
    let mut h = MvTrigPoly::one(f, spec.dim);
    for col in &spec.columns {
        h = h.mul(&MvTrigPoly::geometric(m, col));
    }
    let scale = BigRational::new(BigInt::one(), BigInt::from(m).pow(spec.columns.len() as u32));
    MvMaskSpec::new(FieldElement::from_int(f, m as i64), h.scale(&scale))
}

/// Univariate form of [`integer_dilation_box_mask`].
pub fn integer_dilation_mask_1d(spec: &BoxSplineSpec, m: u64) -> Result<MaskSpec> {
    if spec.dim != 1 {
        return Err(Error::Precondition("univariate spec required".into()));
    }
    let mv = integer_dilation_box_mask(spec, m)?;
    MaskSpec::new(mv.lambda.clone(), mv.mask.slice(&[1]))
}

/// Piecewise-uniform measure: `mass[i]` sits on `[(offset + i) h, (offset + i + 1) h)`.
///
/// Refinable functions with fractal masks are poorly represented by point
/// samples, so the factorization check iterates on cell masses instead.
#[derive(Clone, Debug)]
struct CellMeasure {
    step: f64,
    offset: i64,
    mass: Vec<f64>,
}

impl CellMeasure {
    fn empty(step: f64, lo: f64, hi: f64) -> Self {
        let offset = (lo / step).floor() as i64 - 2;
        let end = (hi / step).ceil() as i64 + 2;
        CellMeasure { step, offset, mass: vec![0.0; (end - offset) as usize] }
    }

    fn lo(&self) -> f64 {
        self.offset as f64 * self.step
    }

    fn hi(&self) -> f64 {
        (self.offset + self.mass.len() as i64) as f64 * self.step
    }

    /// Spread `m` uniformly over `[a, b)`.
    fn spread(&mut self, a: f64, b: f64, m: f64) {
        let h = self.step;
        let len = b - a;
        let mut i = (a / h).floor() as i64;
        while (i as f64) * h < b {
            let (ca, cb) = (i as f64 * h, (i + 1) as f64 * h);
            let overlap = cb.min(b) - ca.max(a);
            if overlap > 0.0 {
                let k = i - self.offset;
                if k >= 0 && (k as usize) < self.mass.len() {
                    self.mass[k as usize] += m * overlap / len;
                }
            }
            i += 1;
        }
    }

    /// Invariant measure of `y -> (y + d_j) / lambda` with weights `w_j`, from the uniform law on `support`.
    fn cascade(lambda: f64, d: &[f64], w: &[f64], support: (f64, f64), step: f64, iters: usize) -> Self {
        let mut cur = Self::empty(step, support.0, support.1);
        cur.spread(support.0, support.1, 1.0);
        for _ in 0..iters {
            let mut next = Self::empty(step, support.0, support.1);
            for (i, &m) in cur.mass.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let a = (cur.offset + i as i64) as f64 * step;
                for (dj, wj) in d.iter().zip(w) {
                    next.spread((a + dj) / lambda, (a + step + dj) / lambda, m * wj);
                }
            }
            cur = next;
        }
        cur
    }

    /// Measure of the function `x -> g(x / s)`, which has total mass `s` times that of `g`.
    fn dilate(&self, s: f64) -> Self {
        let mut out = Self::empty(self.step, self.lo() * s, self.hi() * s);
        for (i, &m) in self.mass.iter().enumerate() {
            let a = (self.offset + i as i64) as f64 * self.step;
            out.spread(a * s, (a + self.step) * s, m * s);
        }
        out
    }

    /// Two uniform cells convolve to a triangle split evenly between two cells.
    fn convolve_cells(&self, other: &Self) -> Self {
        let n = self.mass.len() + other.mass.len();
        let mut mass = vec![0.0; n];
        for (i, &a) in self.mass.iter().enumerate() {
            for (j, &b) in other.mass.iter().enumerate() {
                mass[i + j] += 0.5 * a * b;
                mass[i + j + 1] += 0.5 * a * b;
            }
        }
        CellMeasure { step: self.step, offset: self.offset + other.offset, mass }
    }

    /// Density of the convolution at nodes: each triangle peaks at one node with height `ab/h`.
    fn convolve_nodes(&self, other: &Self) -> (i64, Vec<f64>) {
        let n = self.mass.len() + other.mass.len();
        let mut nodes = vec![0.0; n];
        for (i, &a) in self.mass.iter().enumerate() {
            for (j, &b) in other.mass.iter().enumerate() {
                nodes[i + j + 1] += a * b / self.step;
            }
        }
        (self.offset + other.offset, nodes)
    }
}

/// Outcome of the convolution-factorization check.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    /// Smallest `k` with `lambda^k` an integer.
    pub k: u32,
    pub alpha_fit: f64,
    pub alpha_predicted: f64,
    /// `sup |alpha conv - f| / sup |f|`.
    pub relative_distance: f64,
    /// True when `k = 1` and the factorization is `f = phi`.
    pub trivial: bool,
}

/// Compare `f` against `alpha * phi(x) * phi(x/lambda) * ... * phi(x/lambda^{k-1})`,
/// where `phi` solves the refinement equation with dilation `lambda^k` and the same mask.
pub fn convolution_factorization_check(
    mask: &MaskSpec,
    k: u32,
    grid_size: usize,
    iters: usize,
) -> Result<FactorizationReport> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let lam = mask.lambda.to_f64();
    let alpha_predicted = lam.powf(-(f64::from(k) * f64::from(k - 1) / 2.0));
    let f = cascade_solve(mask, grid_size, iters)?;
    if k == 1 {
        return Ok(FactorizationReport { k, alpha_fit: 1.0, alpha_predicted, relative_distance: 0.0, trivial: true });
    }
    let (_, d, h_coef) = mask.numeric();
    let lk = lam.powi(k as i32);
    // phi uses the same mask with dilation lambda^k, i.e. weights h_j = c_j / lambda.
    let h_coef: Vec<f64> = h_coef.iter().map(|c| c / lam).collect();
    let dmin = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let dmax = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let phi_support = (dmin / (lk - 1.0), dmax / (lk - 1.0));
    let step = f.grid.step;
    let phi = CellMeasure::cascade(lk, &d, &h_coef, phi_support, step, iters);

    // Convolve phi with its dilates phi(x / lambda^r), r = 1..k-1, as cell measures.
    let mut acc = phi.clone();
    for r in 1..k - 1 {
        acc = acc.convolve_cells(&phi.dilate(lam.powi(r as i32)));
    }
    let last = phi.dilate(lam.powi(k as i32 - 1));
    let (node0, nodes) = acc.convolve_nodes(&last);
    let grid = f.grid;
    let conv: Vec<f64> = (0..grid.len).map(|i| interp(&nodes, node0 as f64 * step, step, grid.x(i))).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let alpha_fit = dot(&conv, &f.samples) / dot(&conv, &conv);
    let sup_f = f.max_abs();
    let dist = conv.iter().zip(&f.samples).map(|(u, v)| (alpha_fit * u - v).abs()).fold(0.0, f64::max);
    Ok(FactorizationReport { k, alpha_fit, alpha_predicted, relative_distance: dist / sup_f, trivial: false })
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

    fn counterexample_mask() -> MaskSpec {
        let f = f10();
        let h = QTrigPoly::geometric(5, &FieldElement::one(f))
            .mul(&QTrigPoly::geometric(2, &fe("t/2", f)))
            .scale(&q(1, 10));
        MaskSpec::new(FieldElement::theta(f), h).unwrap()
    }

    fn b_mask(d: usize) -> MaskSpec {
        integer_dilation_mask_1d(&BoxSplineSpec::cardinal(d), 2).unwrap()
    }

    fn hat(x: f64) -> f64 {
        (1.0 - (x - 1.0).abs()).max(0.0)
    }

    #[test]
    fn spec_validation() {
        let f = f10();
        assert!(matches!(BoxSplineSpec::univariate(f, &[FieldElement::zero(f)]), Err(Error::ZeroColumn(0))));
        let cols = vec![vec![fe("1", f), fe("t", f)], vec![fe("t", f), fe("10", f)]];
        assert!(matches!(BoxSplineSpec::new(f, cols), Err(Error::RankDeficient { rank: 1, dim: 2 })));
        assert!(MaskSpec::new(FieldElement::one(f), QTrigPoly::one(f)).is_err());
        assert!(MaskSpec::new(FieldElement::theta(f), QTrigPoly::constant(f, q(2, 1))).is_err());
    }

    #[test]
    fn fourier_transform_examples() {
        let b0 = BoxSplineSpec::cardinal(0);
        let at0 = boxspline_ft(&b0, &[RBall::zero(64)], 64).unwrap();
        assert!(at0.re.contains(&q(1, 1)) && at0.im.contains(&q(0, 1)));
        let at1 = boxspline_ft(&b0, &[RBall::from_int(1, 64)], 64).unwrap();
        assert!(at1.re.contains(&q(0, 1)) && at1.im.contains(&q(0, 1)));
        let b2 = BoxSplineSpec::cardinal(2);
        for w in [0.3, -1.7, 4.25] {
            let v = boxspline_ft(&b2, &[RBall::from_f64(w, 64)], 64).unwrap().mid_f64();
            let one = boxspline_ft_f64(&b0, &[w]);
            assert!((v - one.powi(3)).norm() < 1e-14);
        }
        // near the removable singularity
        let tiny = boxspline_ft(&b0, &[RBall::from_f64(1e-30, 128)], 128).unwrap();
        assert!((tiny.mid_f64() - Complex64::new(1.0, 0.0)).norm() < 1e-25);
    }

    #[test]
    fn time_domain_examples() {
        let g = GridSpec::covering(0.0, 1.0, 64, 4);
        let b0 = spline_time_eval(&BoxSplineSpec::cardinal(0), g).unwrap();
        assert_eq!(b0.eval(0.5), 1.0);
        assert_eq!(b0.eval(1.5), 0.0);
        let g = GridSpec::covering(0.0, 2.0, 256, 4);
        let b1 = spline_time_eval(&BoxSplineSpec::cardinal(1), g).unwrap();
        assert!(b1.sup_distance_fn(hat) < 1e-12);
        assert!((b1.eval(1.0) - 1.0).abs() < 1e-12);
        let f = f10();
        let trap = BoxSplineSpec::univariate(f, &[fe("1", f), fe("t/2", f)]).unwrap();
        let r = 2.5f64.sqrt();
        let g = GridSpec::covering(0.0, 1.0 + r, 512, 4);
        let tr = spline_time_eval(&trap, g).unwrap();
        assert!((tr.eval(1.2) - 1.0 / r).abs() < 1e-12);
        assert!((tr.integral() - 1.0).abs() < 1e-4);
        let coarse = GridSpec::covering(0.0, 1.0, 4, 0);
        assert!(matches!(spline_time_eval(&BoxSplineSpec::cardinal(0), coarse), Err(Error::GridTooCoarse { .. })));
        // four factors: cubic B-spline peak value 2/3
        let g = GridSpec::covering(0.0, 4.0, 2048, 4);
        let b3 = spline_time_eval(&BoxSplineSpec::cardinal(3), g).unwrap();
        assert!((b3.eval(2.0) - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn cascade_examples() {
        let b1 = cascade_solve(&b_mask(1), 1024, 25).unwrap();
        assert!(b1.sup_distance_fn(hat) < 1e-6);
        assert!(b1.residuals.last().unwrap() < &1e-6);
        assert_eq!(b1.support_leak, 0.0);
        let b0 = cascade_solve(&b_mask(0), 256, 10).unwrap();
        assert!((b0.eval(0.5) - 1.0).abs() < 1e-9);
        assert!(b0.residuals.last().unwrap() < &1e-9);
    }

    #[test]
    fn cascade_counterexample_matches_trapezoid() {
        let m = counterexample_mask();
        let f = cascade_solve(&m, 1024, 25).unwrap();
        let fld = f10();
        let trap = BoxSplineSpec::univariate(fld, &[fe("1", fld), fe("t/2", fld)]).unwrap();
        let t = spline_time_eval(&trap, f.grid).unwrap();
        assert!(f.sup_distance(&t) < 5e-3, "{}", f.sup_distance(&t));
    }

    #[test]
    fn fourier_product_examples() {
        let m = b_mask(1);
        let w0 = fourier_product_eval(&m, &FieldElement::zero(Field::RATIONAL), 5, 64).unwrap();
        assert!(w0.value.re.contains(&q(1, 1)));
        let w = FieldElement::from_rational(Field::RATIONAL, q(7, 10));
        let p = fourier_product_eval(&m, &w, 40, 64).unwrap();
        let want = boxspline_ft_f64(&BoxSplineSpec::cardinal(1), &[0.7]);
        assert!((p.value.mid_f64() - want).norm() < 1e-8);
        // partial products are cumulative
        let last = &p.partials[38];
        let h = m.mask().eval_exact(
            &(&w * &FieldElement::from_rational(
                Field::RATIONAL,
                q(1, 1) / BigRational::from_integer(BigInt::from(2).pow(40)),
            )),
            64,
        );
        assert!(p.value.mid_f64() == last.mul(&h).mid_f64());
    }

    #[test]
    fn integer_masks() {
        let m = integer_dilation_mask_1d(&BoxSplineSpec::cardinal(0), 2).unwrap();
        assert_eq!(m.coefficients(), vec![FieldElement::one(Field::RATIONAL); 2]);
        let m = b_mask(1);
        let c: Vec<_> = m.coefficients().iter().map(|x| x.as_rational().unwrap().clone()).collect();
        assert_eq!(c, vec![q(1, 2), q(1, 1), q(1, 2)]);
        let f = Field::RATIONAL;
        let one = FieldElement::one(f);
        let zero = FieldElement::zero(f);
        let spec = BoxSplineSpec::new(
            f,
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()], vec![one.clone(), one.clone()]],
        )
        .unwrap();
        let mv = integer_dilation_box_mask(&spec, 2).unwrap();
        // 8 products collapse onto 7 distinct translations; (1,1) is hit twice.
        assert_eq!(mv.mask().len(), 7);
        let c11 = mv.coefficients().into_iter().find(|(d, _)| d == &vec![one.clone(), one.clone()]).unwrap().1;
        assert_eq!(c11, FieldElement::one(f));
        let g = f10();
        let bad = BoxSplineSpec::univariate(g, &[FieldElement::theta(g)]).unwrap();
        assert!(matches!(integer_dilation_box_mask(&bad, 2), Err(Error::NonIntegerMatrix(_))));
    }

    #[test]
    fn factorization_of_counterexample() {
        let r = convolution_factorization_check(&counterexample_mask(), 2, 2048, 25).unwrap();
        assert!(r.relative_distance < 1e-2, "{r:?}");
        assert!((r.alpha_fit - r.alpha_predicted).abs() < 1e-3);
        let id = convolution_factorization_check(&b_mask(1), 1, 64, 5).unwrap();
        assert!(id.trivial && id.alpha_fit == 1.0);
    }

    #[test]
    fn cell_measure_is_conserved() {
        let m = CellMeasure::cascade(10.0, &[0.0, 1.0, 2.0], &[0.25, 0.5, 0.25], (0.0, 2.0 / 9.0), 1e-3, 6);
        let total: f64 = m.mass.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let d = m.dilate(3.0);
        assert!((d.mass.iter().sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn csv_has_metadata() {
        let f = cascade_solve(&b_mask(1), 16, 3).unwrap();
        let csv = f.to_csv();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# start="));
        assert_eq!(lines.next().unwrap(), "x,f");
        assert_eq!(csv.lines().count(), 2 + f.samples.len());
    }
}
