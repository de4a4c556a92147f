//! Truncated complex power series.
//!
//! A [`Series`] of order `N` stores the coefficients `c_0..=c_N` of a Taylor
//! expansion about the origin. Binary operations truncate to the smaller of
//! the two orders, so a result never carries coefficients that its inputs
//! could not determine. `derivative` lowers the order by one and
//! `integrate` raises it by one.

mod io;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

pub use io::{fmt_f64, SeriesJson, CSV_HEADER};

use crate::error::{Error, Result};
use crate::scalar::{int, is_finite, lit, real, to_f64, DotAccumulator, Real, Tolerance};

/// Truncation order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 64;

/// Threshold below which a constant term counts as zero (and above which a
/// divisor counts as a unit).
pub const UNIT_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Series<T> {
    /// Builds a series from `c_0..=c_N`. Rejects empty input and non-finite
    /// coefficients.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::BadParameter("a series needs at least c_0".into()));
        }
        if !coeffs.iter().all(|&c| is_finite(c)) {
            return Err(Error::NonFinite("Series::from_coeffs"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| real(c)).collect())
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex<T>>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    fn checked(coeffs: Vec<Complex<T>>, op: &'static str) -> Result<Self> {
        if coeffs.iter().all(|&c| is_finite(c)) {
            Ok(Self { coeffs })
        } else {
            Err(Error::NonFinite(op))
        }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::new(T::zero(), T::zero()); order + 1],
        }
    }

    pub fn constant(c: Complex<T>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(real(T::one()), order)
    }

    /// `c * z^k`, or the zero series if `k > order`.
    pub fn monomial(c: Complex<T>, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity map `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(real(T::one()), 1, order)
    }

    /// Builds a series from a coefficient rule `n -> c_n`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex<T>) -> Result<Self> {
        Self::checked((0..=order).map(f).collect(), "Series::from_fn")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// `c_n`, or zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or_else(|| real(T::zero()))
    }

    /// Lowers the order to `min(order, self.order())`.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    /// Evaluates the truncated polynomial by Horner's rule.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(real(T::zero()), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add_series(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }

    pub fn sub_series(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul_series(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=n)
            .map(|m| {
                let mut acc = DotAccumulator::default();
                for k in 0..=m {
                    acc.add(a[k], b[m - k]);
                }
                acc.value()
            })
            .collect();
        Self { coeffs }
    }

    /// Quotient `Q` with `Q * divisor = self` to the truncation order.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let b0 = divisor.coeffs[0];
        if b0.norm() <= lit(UNIT_THRESHOLD) {
            return Err(Error::DivisionByNonUnit(to_f64(b0.norm())));
        }
        let n = self.order().min(divisor.order());
        let b = &divisor.coeffs;
        let mut q: Vec<Complex<T>> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut acc = DotAccumulator::new(self.coeffs[m]);
            for k in 1..=m {
                acc.add(-b[k], q[m - k]);
            }
            q.push(acc.value() / b0);
        }
        Self::checked(q, "Series::div")
    }

    /// `1 / self`.
    pub fn recip(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }

    /// Series exponential; requires `c_0 = 0`.
    ///
    /// Uses `E' = A' E`, i.e. `n e_n = sum_{k=1}^{n} k a_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() > lit(UNIT_THRESHOLD) {
            return Err(bad_constant(a0, "exp needs a vanishing constant term"));
        }
        let n = self.order();
        let a = &self.coeffs;
        let mut e = Vec::with_capacity(n + 1);
        e.push(a0.exp());
        for m in 1..=n {
            let acc = (1..=m).fold(real(T::zero()), |acc, k| {
                acc + a[k] * e[m - k] * int::<T>(k)
            });
            e.push(acc / int::<T>(m));
        }
        Self::checked(e, "Series::exp")
    }

    /// Series logarithm with `log 1 = 0`; requires `c_0 = 1`.
    ///
    /// Uses `L' = A'/A`, i.e. `a_0 n l_n = n a_n - sum_{k=1}^{n-1} k l_k a_{n-k}`.
    pub fn log(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if (a0 - real(T::one())).norm() > lit(UNIT_THRESHOLD) {
            return Err(bad_constant(a0, "log needs constant term 1"));
        }
        let n = self.order();
        let a = &self.coeffs;
        let mut l = Vec::with_capacity(n + 1);
        l.push(a0.ln());
        for m in 1..=n {
            let mf = int::<T>(m);
            let acc = (1..m).fold(a[m] * mf, |acc, k| acc - l[k] * a[m - k] * int::<T>(k));
            l.push(acc / (a0 * mf));
        }
        Self::checked(l, "Series::log")
    }

    /// `exp(p * log(self))`; requires `c_0 = 1`.
    pub fn pow(&self, p: Complex<T>) -> Result<Self> {
        let a0 = self.coeffs[0];
        if (a0 - real(T::one())).norm() > lit(UNIT_THRESHOLD) {
            return Err(bad_constant(a0, "pow needs constant term 1"));
        }
        self.log()?.scale(p).exp()
    }

    /// Term-wise derivative. The order drops by one (an order-0 series maps
    /// to the order-0 zero series).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * int::<T>(k))
                .collect(),
        }
    }

    /// Antiderivative vanishing at the origin; the order rises by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(real(T::zero()));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / int::<T>(k + 1)),
        );
        Self { coeffs }
    }

    /// Taylor coefficients of `self ∘ inner`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let b0 = inner.coeffs[0];
        if b0.norm() > lit(UNIT_THRESHOLD) {
            return Err(bad_constant(b0, "compose needs inner(0) = 0"));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul_series(&inner);
            acc.coeffs[0] = acc.coeffs[0] + self.coeffs[k];
        }
        Self::checked(acc.coeffs, "Series::compose")
    }

    /// Re-expands the polynomial about `center`: returns `d` with
    /// `sum d_k w^k = sum c_n (center + w)^n`.
    ///
    /// Exact for the truncated polynomial; as an approximation of the
    /// underlying function only the low-order `d_k` are reliable.
    pub fn recenter(&self, center: Complex<T>) -> Self {
        let mut c = self.coeffs.clone();
        let n = self.order();
        for i in 0..n {
            for j in (i..n).rev() {
                let next = c[j + 1];
                c[j] = c[j] + center * next;
            }
        }
        Self { coeffs: c }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// `max_n |self_n - other_n|` over the common orders.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let n = self.order().min(other.order());
        (0..=n).fold(T::zero(), |m, k| {
            m.max((self.coeffs[k] - other.coeffs[k]).norm())
        })
    }

    /// Coefficient-wise mixed-tolerance comparison (`other` is the
    /// reference) over the common orders.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance<T>) -> bool {
        let n = self.order().min(other.order());
        (0..=n).all(|k| tol.close(self.coeffs[k], other.coeffs[k]))
    }
}

fn bad_constant<T: Real>(c: Complex<T>, expected: &'static str) -> Error {
    Error::BadConstantTerm {
        re: to_f64(c.re),
        im: to_f64(c.im),
        expected,
    }
}

/// Recovers Taylor coefficients `c_0..=c_N` of an analytic function from
/// `4(N+1)` equispaced samples on the circle `|z| = radius`.
pub fn coefficients_from_samples<T, F>(eval: F, radius: T, order: usize) -> Result<Series<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    coefficients_from_samples_with(eval, radius, order, 4 * (order + 1))
}

/// As [`coefficients_from_samples`] with an explicit sample count
/// (at least `4N`).
pub fn coefficients_from_samples_with<T, F>(
    eval: F,
    radius: T,
    order: usize,
    samples: usize,
) -> Result<Series<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    if !(radius > T::zero() && radius < T::one()) {
        return Err(Error::BadRadius(to_f64(radius)));
    }
    if samples < (4 * order).max(1) {
        return Err(Error::BadParameter(format!(
            "{samples} samples cannot resolve order {order} (need at least {})",
            4 * order
        )));
    }
    let m = samples;
    let tau = T::TAU();
    let twiddle: Vec<Complex<T>> = (0..m)
        .map(|j| Complex::from_polar(T::one(), -tau * int::<T>(j) / int::<T>(m)))
        .collect();
    let values = (0..m)
        .map(|k| eval(twiddle[(m - k) % m] * radius))
        .collect::<Result<Vec<_>>>()?;
    let mf = int::<T>(m);
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut rn = T::one();
    for n in 0..=order {
        let sum = values
            .iter()
            .enumerate()
            .fold(real(T::zero()), |acc, (k, &v)| {
                acc + v * twiddle[(k * n) % m]
            });
        coeffs.push(sum / (mf * rn));
        rn = rn * radius;
    }
    Series::checked(coeffs, "coefficients_from_samples")
}

impl<T: Real> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: Self) -> Series<T> {
        self.add_series(rhs)
    }
}

impl<T: Real> Add for Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: Self) -> Series<T> {
        self.add_series(&rhs)
    }
}

impl<T: Real> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: Self) -> Series<T> {
        self.sub_series(rhs)
    }
}

impl<T: Real> Sub for Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: Self) -> Series<T> {
        self.sub_series(&rhs)
    }
}

impl<T: Real> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: Self) -> Series<T> {
        self.mul_series(rhs)
    }
}

impl<T: Real> Mul for Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: Self) -> Series<T> {
        self.mul_series(&rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: Complex<T>) -> Series<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for &Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        Series {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl<T: Real> Neg for Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        -&self
    }
}
