//! Globally adaptive Gauss–Kronrod (7/15) quadrature of complex-valued
//! integrands over a real interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, real, to_f64, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    /// Absolute error target.
    pub atol: T,
    /// Relative error target; the looser of the two applies.
    pub rtol: T,
    pub max_subintervals: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            atol: lit::<T>(1e-10).max(lit::<T>(1e3) * eps),
            rtol: lit::<T>(1e-12).max(lit::<T>(1e2) * eps),
            max_subintervals: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub error: T,
    pub subintervals: usize,
}

struct Piece<T> {
    lo: T,
    hi: T,
    value: Complex<T>,
    error: T,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Real> Eq for Piece<T> {}

impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod<T, F>(f: &mut F, lo: T, hi: T) -> Result<Piece<T>>
where
    T: Real,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let two = lit::<T>(2.0);
    let center = (lo + hi) / two;
    let half = (hi - lo) / two;
    let fc = f(center)?;
    let mut kronrod = fc * lit::<T>(WGK[7]);
    let mut gauss = fc * lit::<T>(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * lit::<T>(x);
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod = kronrod + pair * lit::<T>(w);
        if j % 2 == 1 {
            gauss = gauss + pair * lit::<T>(WG[j / 2]);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Ok(Piece {
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates `f` over `[lo, hi]`, bisecting the worst subinterval until the
/// summed error estimate meets `max(atol, rtol * |I|)`.
pub fn integrate<T, F>(mut f: F, lo: T, hi: T, cfg: &QuadratureConfig<T>) -> Result<Quadrature<T>>
where
    T: Real,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let first = kronrod(&mut f, lo, hi)?;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let value = heap
            .iter()
            .fold(real(T::zero()), |acc: Complex<T>, p| acc + p.value);
        let target = cfg.atol.max(cfg.rtol * value.norm());
        if total_error <= target {
            return Ok(Quadrature {
                value,
                error: total_error,
                subintervals: heap.len(),
            });
        }
        if heap.len() >= cfg.max_subintervals || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::IntegrationFailure {
                subintervals: heap.len(),
                estimate: to_f64(total_error),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.lo + worst.hi) / lit::<T>(2.0);
        let left = kronrod(&mut f, worst.lo, mid)?;
        let right = kronrod(&mut f, mid, worst.hi)?;
        total_error = total_error - worst.error + left.error + right.error;
        // Recompute occasionally so cancellation in the running sum cannot
        // leave a stale (too small) estimate.
        if heap.len() % 64 == 0 {
            total_error = heap
                .iter()
                .fold(left.error + right.error, |acc, p| acc + p.error);
        }
        heap.push(left);
        heap.push(right);
    }
}
