//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the library is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Default
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer count into the working scalar.
#[inline]
pub fn int<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("integer representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `exp(w) - 1` without cancellation for small `|w|`.
pub(crate) fn expm1<T: Real>(w: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let half_sin = (w.im / two).sin();
    let cos_m1 = -two * half_sin * half_sin;
    let em1 = w.re.exp_m1();
    Complex::new(em1 * w.im.cos() + cos_m1, w.re.exp() * w.im.sin())
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    #[inline]
    pub(crate) fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    /// Adds `x * y` with the rounding error of the product recovered by an FMA.
    #[inline]
    pub(crate) fn add_product(&mut self, x: T, y: T) {
        let p = x * y;
        self.add(p);
        self.add(x.mul_add(y, -p));
    }

    #[inline]
    pub(crate) fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// Complex dot product accumulated in compensated arithmetic, so the result
/// is close to the correctly rounded value even under heavy cancellation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct DotAccumulator<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Real> DotAccumulator<T> {
    pub(crate) fn new(init: Complex<T>) -> Self {
        let mut acc = Self::default();
        acc.re.add(init.re);
        acc.im.add(init.im);
        acc
    }

    /// Accumulates `x * y`.
    #[inline]
    pub(crate) fn add(&mut self, x: Complex<T>, y: Complex<T>) {
        self.re.add_product(x.re, y.re);
        self.re.add_product(-x.im, y.im);
        self.im.add_product(x.re, y.im);
        self.im.add_product(x.im, y.re);
    }

    #[inline]
    pub(crate) fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// `e^{i angle}`, with components within a few ulps of zero snapped to zero
/// so that quarter turns come out exact.
pub fn unit<T: Real>(angle: T) -> Complex<T> {
    let snap = |x: T| {
        if x.abs() < lit::<T>(4.0) * T::epsilon() {
            T::zero()
        } else {
            x
        }
    };
    Complex::new(snap(angle.cos()), snap(angle.sin()))
}

/// Mixed absolute/relative tolerance: `|x - y| <= atol + rtol * |y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub atol: T,
    pub rtol: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(atol: T, rtol: T) -> Self {
        Self { atol, rtol }
    }

    /// Purely absolute tolerance.
    pub fn absolute(atol: T) -> Self {
        Self {
            atol,
            rtol: T::zero(),
        }
    }

    pub fn close(&self, x: Complex<T>, y: Complex<T>) -> bool {
        (x - y).norm() <= self.atol + self.rtol * y.norm()
    }

    pub fn close_real(&self, x: T, y: T) -> bool {
        (x - y).abs() <= self.atol + self.rtol * y.abs()
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            atol: lit(1e-12),
            rtol: lit(1e-10),
        }
    }
}
