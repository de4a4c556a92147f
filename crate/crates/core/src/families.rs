//! Affine and linear invariance: Koebe transforms, affine changes, the
//! harmonic Marty recurrences and the linear ODE `(1 - z^2) phi' = 1 + alpha phi`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{int, lit, real, to_f64, Real};
use crate::series::Series;
use crate::shear::{HarmonicMap, Provenance, DEGENERATE_DERIVATIVE};

/// Largest `|zeta|` accepted by [`variational_expansion_residual`].
pub const MAX_VARIATION: f64 = 0.05;

/// Coefficient sequences `A_0..=A_N`, `B_0..=B_N` generated by the coupled
/// Marty recurrences from `A_0 = B_0 = B_1 = 0`, `A_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MartyState<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub a2: T,
    pub b2: T,
}

impl<T: Real> MartyState<T> {
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    /// `A` as a real series.
    pub fn a_series(&self) -> Series<T> {
        Series::from_real(&self.a).expect("finite recurrence output")
    }

    pub fn b_series(&self) -> Series<T> {
        Series::from_real(&self.b).expect("finite recurrence output")
    }
}

/// Runs
/// `(n+1) A_{n+1} = 2 A_2 A_n + 2 B_2 B_n + (n-1) A_{n-1}` and
/// `(n+1) B_{n+1} = 2 A_2 B_n + 2 B_2 A_n + (n-1) B_{n-1}` up to order `N`.
pub fn marty_generate<T: Real>(a2: T, b2: T, order: usize) -> Result<MartyState<T>> {
    if order < 2 {
        return Err(Error::BadParameter(format!("order {order} < 2")));
    }
    let two = lit::<T>(2.0);
    let mut a = vec![T::zero(); order + 1];
    let mut b = vec![T::zero(); order + 1];
    a[1] = T::one();
    a[2] = a2;
    b[2] = b2;
    for n in 2..order {
        let nm1 = int::<T>(n - 1);
        let np1 = int::<T>(n + 1);
        a[n + 1] = (two * a2 * a[n] + two * b2 * b[n] + nm1 * a[n - 1]) / np1;
        b[n + 1] = (two * a2 * b[n] + two * b2 * a[n] + nm1 * b[n - 1]) / np1;
    }
    if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("marty_generate"));
    }
    Ok(MartyState { a, b, a2, b2 })
}

/// Residuals of the harmonic Marty relations for the coefficients of `f`,
/// for `2 <= n <= N - 1`:
///
/// `(n+1) a_{n+1} = 2 a_2 a_n + 2 b_2 conj(b_n) + (n-1) conj(a_{n-1})`,
/// `(n+1) b_{n+1} = 2 a_2 conj(b_n) + 2 b_2 a_n + (n-1) conj(b_{n-1})`.
///
/// Entry `i` belongs to `n = i + 2`.
pub fn marty_residuals<T: Real>(f: &HarmonicMap<T>, order: usize) -> Result<Vec<(T, T)>> {
    let (h, g) = f.series(order)?;
    Ok(marty_residuals_from_series(&h, &g))
}

/// [`marty_residuals`] on explicit coefficient series.
pub fn marty_residuals_from_series<T: Real>(h: &Series<T>, g: &Series<T>) -> Vec<(T, T)> {
    let order = h.order().min(g.order());
    let two = lit::<T>(2.0);
    let a = |n: usize| h.coeff(n);
    let b = |n: usize| g.coeff(n);
    (2..order)
        .map(|n| {
            let np1 = int::<T>(n + 1);
            let nm1 = int::<T>(n - 1);
            let ra = a(n + 1) * np1
                - (a(2) * a(n) * two + b(2) * b(n).conj() * two + a(n - 1).conj() * nm1);
            let rb = b(n + 1) * np1
                - (a(2) * b(n).conj() * two + b(2) * a(n) * two + b(n - 1).conj() * nm1);
            (ra.norm(), rb.norm())
        })
        .collect()
}

/// `max_{n <= N-2} |[z^n] ((1 - z^2) S' - 1 - alpha S)|`.
pub fn ode_residual<T: Real>(s: &Series<T>, alpha: Complex<T>) -> T {
    let order = s.order();
    if order < 2 {
        return T::zero();
    }
    let c = |n: usize| s.coeff(n);
    (0..=order - 2).fold(T::zero(), |worst, n| {
        let mut lhs = c(n + 1) * int::<T>(n + 1);
        if n >= 1 {
            lhs = lhs - c(n - 1) * int::<T>(n - 1);
        }
        let rhs = if n == 0 {
            real(T::one())
        } else {
            real(T::zero())
        } + alpha * c(n);
        worst.max((lhs - rhs).norm())
    })
}

/// Koebe transform
/// `K_zeta(f)(z) = [f((z + zeta)/(1 + conj(zeta) z)) - f(zeta)] / [(1 - |zeta|^2) h'(zeta)]`.
pub fn koebe_transform<T: Real>(f: &HarmonicMap<T>, zeta: Complex<T>) -> Result<HarmonicMap<T>> {
    let dh = f.h().derivative(zeta)?;
    if dh.norm() <= lit(DEGENERATE_DERIVATIVE) {
        return Err(Error::DegenerateDerivative(to_f64(dh.norm())));
    }
    let c = dh * (T::one() - zeta.norm_sqr());
    let one = real(T::one());
    Ok(HarmonicMap::new(
        f.h().pullback(zeta, one / c)?,
        f.g().pullback(zeta, one / c.conj())?,
        Provenance::KoebeTransform {
            zeta,
            source: Box::new(f.provenance().clone()),
        },
    ))
}

/// Affine change `A_eps(f) = (f - conj(eps f)) / (1 - conj(eps) g'(0))`.
///
/// In terms of the parts: `h -> (h - conj(eps) g)/d`, `g -> (g - eps h)/conj(d)`
/// with `d = 1 - conj(eps) g'(0)`, so the new `g'(0)` is
/// `(g'(0) - eps)/conj(d)`.
pub fn affine_change<T: Real>(f: &HarmonicMap<T>, eps: Complex<T>) -> Result<HarmonicMap<T>> {
    if !(eps.norm() < T::one()) {
        return Err(Error::BadParameter(format!(
            "|eps| = {} is not below 1",
            eps.norm()
        )));
    }
    let g1 = f.g().derivative(real(T::zero()))?;
    let d = real(T::one()) - eps.conj() * g1;
    if d.norm() <= lit(DEGENERATE_DERIVATIVE) {
        return Err(Error::DegenerateNormalizer(to_f64(d.norm())));
    }
    let h = crate::maps::AnalyticMap::combination(vec![
        (real(T::one()) / d, f.h().clone()),
        (-eps.conj() / d, f.g().clone()),
    ]);
    let g = crate::maps::AnalyticMap::combination(vec![
        (real(T::one()) / d.conj(), f.g().clone()),
        (-eps / d.conj(), f.h().clone()),
    ]);
    Ok(HarmonicMap::new(
        h,
        g,
        Provenance::AffineChange {
            eps,
            source: Box::new(f.provenance().clone()),
        },
    ))
}

/// `A_{omega_zeta(0)}(K_zeta(f))`: the Koebe transform followed by the
/// affine change that restores `g'(0) = 0`.
pub fn renormalized_transform<T: Real>(
    f: &HarmonicMap<T>,
    zeta: Complex<T>,
) -> Result<HarmonicMap<T>> {
    let k = koebe_transform(f, zeta)?;
    let eps = k.g().derivative(real(T::zero()))? / k.h().derivative(real(T::zero()))?;
    affine_change(&k, eps)
}

/// `max(|h(0)|, |g(0)|, |h'(0) - 1|)`.
pub fn normalization_defect<T: Real>(f: &HarmonicMap<T>) -> Result<T> {
    let zero = real(T::zero());
    let h0 = f.h().value(zero)?.norm();
    let g0 = f.g().value(zero)?.norm();
    let h1 = (f.h().derivative(zero)? - real(T::one())).norm();
    Ok(h0.max(g0).max(h1))
}

/// First-order predictions for the coefficients of
/// `A_{omega_zeta(0)}(K_zeta(f))`:
///
/// `a_n* = A_n + [(n+1)A_{n+1} - 2A_2 A_n] zeta - [2 conj(B_2) B_n + (n-1) A_{n-1}] conj(zeta)`,
/// `b_n* = B_n + [(n+1)B_{n+1} - 2B_2 A_n] zeta - [2 conj(A_2) B_n + (n-1) B_{n-1}] conj(zeta)`.
pub fn first_order_prediction<T: Real>(
    h: &Series<T>,
    g: &Series<T>,
    zeta: Complex<T>,
    n: usize,
) -> (Complex<T>, Complex<T>) {
    let two = lit::<T>(2.0);
    let a = |k: usize| h.coeff(k);
    let b = |k: usize| g.coeff(k);
    let np1 = int::<T>(n + 1);
    let nm1 = if n >= 1 { int::<T>(n - 1) } else { T::zero() };
    let prev = |s: &dyn Fn(usize) -> Complex<T>| if n >= 1 { s(n - 1) } else { real(T::zero()) };
    let pa = a(n) + (a(n + 1) * np1 - a(2) * a(n) * two) * zeta
        - (b(2).conj() * b(n) * two + prev(&a) * nm1) * zeta.conj();
    let pb = b(n) + (b(n + 1) * np1 - b(2) * a(n) * two) * zeta
        - (a(2).conj() * b(n) * two + prev(&b) * nm1) * zeta.conj();
    (pa, pb)
}

/// `(|a_n* - prediction|, |b_n* - prediction|)` with the actual coefficients
/// taken from the series of the renormalized transform.
pub fn variational_expansion_residual<T: Real>(
    f: &HarmonicMap<T>,
    zeta: Complex<T>,
    n: usize,
) -> Result<(T, T)> {
    if zeta.norm() > lit(MAX_VARIATION) {
        return Err(Error::BadParameter(format!(
            "|zeta| = {} exceeds {MAX_VARIATION}",
            zeta.norm()
        )));
    }
    let (h, g) = f.series(n + 1)?;
    let (pa, pb) = first_order_prediction(&h, &g, zeta, n);
    let (hs, gs) = renormalized_transform(f, zeta)?.series(n)?;
    Ok(((hs.coeff(n) - pa).norm(), (gs.coeff(n) - pb).norm()))
}

/// Ratios `residual(zeta) / residual(zeta / 2)` for both coefficient
/// families; a value near 4 means the remainder is quadratic in `zeta`.
pub fn halving_ratios<T: Real>(f: &HarmonicMap<T>, zeta: Complex<T>, n: usize) -> Result<(T, T)> {
    let (a1, b1) = variational_expansion_residual(f, zeta, n)?;
    let (a2, b2) = variational_expansion_residual(f, zeta / lit::<T>(2.0), n)?;
    Ok((a1 / a2, b1 / b2))
}
