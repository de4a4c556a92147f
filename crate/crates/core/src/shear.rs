//! Harmonic maps `f = h + conj(g)` and the shear construction.
//!
//! The shear of `phi` in direction `theta` with dilatation `omega` solves
//! `h - e^{2i theta} g = phi`, `g' = omega h'`, `h(0) = g(0) = 0`, so
//! `h' = phi' / (1 - e^{2i theta} omega)`. Both parts are kept as
//! independent integrals of their derivatives: series come from series
//! division and integration, point values from adaptive quadrature along
//! the segment `[0, z]`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::maps::{make_generalized_koebe, make_lens, AnalyticMap, Node, ShearPart};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{lit, real, to_f64, unit, Real};
use crate::series::Series;

/// Tolerance on `|lambda| = |mu| = 1` and `|eta| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// `|h'(z)|` at or below this is treated as a critical point.
pub const DEGENERATE_DERIVATIVE: f64 = 1e-14;

/// Parameters `(lambda, a, mu, R)` of a generalized harmonic Koebe function:
/// `h - lambda g = k_a`, `g'/h' = mu l_R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhkParams<T> {
    pub lambda: Complex<T>,
    pub a: Complex<T>,
    pub mu: Complex<T>,
    pub r: T,
}

impl<T: Real> GhkParams<T> {
    pub fn new(lambda: Complex<T>, a: Complex<T>, mu: Complex<T>, r: T) -> Result<Self> {
        let p = Self { lambda, a, mu, r };
        p.validate()?;
        Ok(p)
    }

    /// `K_{a,R}`: `lambda = mu = 1`, real `a`.
    pub fn kar(a: T, r: T) -> Result<Self> {
        Self::new(real(T::one()), real(a), real(T::one()), r)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = lit::<T>(UNIMODULAR_TOL);
        for (name, v) in [("lambda", self.lambda), ("mu", self.mu)] {
            if (v.norm() - T::one()).abs() > tol {
                return Err(Error::BadParameter(format!(
                    "{name} = {v} is not unimodular"
                )));
            }
        }
        if !(self.r >= T::zero() && self.r <= T::one()) {
            return Err(Error::BadParameter(format!(
                "R = {} outside [0, 1]",
                self.r
            )));
        }
        if !(self.a.re.is_finite() && self.a.im.is_finite()) {
            return Err(Error::BadParameter("a must be finite".into()));
        }
        Ok(())
    }

    /// `a + R` when `lambda = mu = 1` and `a` is real (the order of the
    /// extremal family); `None` otherwise.
    pub fn order(&self) -> Option<T> {
        let one = real(T::one());
        if self.lambda == one && self.mu == one && self.a.im == T::zero() {
            Some(self.a.re + self.r)
        } else {
            None
        }
    }
}

/// Where a harmonic map came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance<T> {
    /// An analytic map viewed as harmonic (`g = 0`).
    Analytic,
    Shear {
        theta: T,
    },
    GeneralizedHarmonicKoebe(GhkParams<T>),
    /// `h = (k_{a+R} + k_a)/2`, `g = (k_{a+R} - k_a)/2`.
    KarClosedForm {
        a: T,
        r: T,
    },
    KoebeTransform {
        zeta: Complex<T>,
        source: Box<Provenance<T>>,
    },
    AffineChange {
        eps: Complex<T>,
        source: Box<Provenance<T>>,
    },
    Rotation {
        eta: Complex<T>,
        source: Box<Provenance<T>>,
    },
    Custom,
}

/// `f = h + conj(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMap<T> {
    h: AnalyticMap<T>,
    g: AnalyticMap<T>,
    provenance: Provenance<T>,
}

impl<T: Real> HarmonicMap<T> {
    pub fn new(h: AnalyticMap<T>, g: AnalyticMap<T>, provenance: Provenance<T>) -> Self {
        Self { h, g, provenance }
    }

    pub fn from_analytic(phi: AnalyticMap<T>) -> Self {
        Self::new(phi, AnalyticMap::zero(), Provenance::Analytic)
    }

    pub fn h(&self) -> &AnalyticMap<T> {
        &self.h
    }

    pub fn g(&self) -> &AnalyticMap<T> {
        &self.g
    }

    pub fn provenance(&self) -> &Provenance<T> {
        &self.provenance
    }

    /// `h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.h.value(z)? + self.g.value(z)?.conj())
    }

    /// `(h'(z), g'(z))`.
    pub fn derivatives(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        Ok((self.h.derivative(z)?, self.g.derivative(z)?))
    }

    /// `g'(z) / h'(z)`.
    pub fn dilatation(&self, z: Complex<T>) -> Result<Complex<T>> {
        let (dh, dg) = self.nondegenerate_derivatives(z)?;
        Ok(dg / dh)
    }

    /// `|h'(z)|^2 - |g'(z)|^2`.
    pub fn jacobian(&self, z: Complex<T>) -> Result<T> {
        let (dh, dg) = self.nondegenerate_derivatives(z)?;
        Ok(dh.norm_sqr() - dg.norm_sqr())
    }

    fn nondegenerate_derivatives(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let (dh, dg) = self.derivatives(z)?;
        if dh.norm() <= lit(DEGENERATE_DERIVATIVE) {
            return Err(Error::DegenerateDerivative(to_f64(dh.norm())));
        }
        Ok((dh, dg))
    }

    /// Series of `h` and `g` to order `N`.
    pub fn series(&self, order: usize) -> Result<(Series<T>, Series<T>)> {
        Ok((self.h.series(order)?, self.g.series(order)?))
    }

    /// `f_eta(z) = conj(eta) h(eta z) + conj(eta g(eta z))`.
    pub fn rotate(&self, eta: Complex<T>) -> Result<Self> {
        if (eta.norm() - T::one()).abs() > lit(UNIMODULAR_TOL) {
            return Err(Error::BadParameter(format!(
                "eta = {eta} is not unimodular"
            )));
        }
        Ok(Self::new(
            self.h.rotated(eta, eta.conj()),
            self.g.rotated(eta, eta),
            Provenance::Rotation {
                eta,
                source: Box::new(self.provenance.clone()),
            },
        ))
    }
}

fn shear_parts<T: Real>(
    phi: &AnalyticMap<T>,
    omega: &AnalyticMap<T>,
    rotation: Complex<T>,
) -> (AnalyticMap<T>, AnalyticMap<T>) {
    let part = |part| {
        AnalyticMap::from_node(Node::Shear {
            phi: phi.clone(),
            omega: omega.clone(),
            rotation,
            part,
            quad: QuadratureConfig::default(),
        })
    };
    (part(ShearPart::Analytic), part(ShearPart::CoAnalytic))
}

/// Harmonic shear of `phi` in direction `theta` (`0 <= theta < pi`) with
/// dilatation `omega`.
pub fn shear<T: Real>(
    phi: &AnalyticMap<T>,
    omega: &AnalyticMap<T>,
    theta: T,
) -> Result<HarmonicMap<T>> {
    if !(theta >= T::zero() && theta < T::PI()) {
        return Err(Error::BadParameter(format!(
            "shear direction {theta} outside [0, pi)"
        )));
    }
    if let Ok(w0) = omega.value(real(T::zero())) {
        if w0.norm() >= T::one() {
            return Err(Error::DilatationOutOfRange(to_f64(w0.norm())));
        }
    }
    let (h, g) = shear_parts(phi, omega, unit(theta * lit(2.0)));
    Ok(HarmonicMap::new(h, g, Provenance::Shear { theta }))
}

/// `K_H(lambda, a, mu, R)`: `h - lambda g = k_a`, `g'/h' = mu l_R`.
pub fn make_generalized_harmonic_koebe<T: Real>(p: GhkParams<T>) -> Result<HarmonicMap<T>> {
    p.validate()?;
    let phi = make_generalized_koebe(p.a);
    let omega = make_lens(p.r)?.scaled(p.mu);
    let (h, g) = shear_parts(&phi, &omega, p.lambda);
    Ok(HarmonicMap::new(
        h,
        g,
        Provenance::GeneralizedHarmonicKoebe(p),
    ))
}

/// `K_{a,R}` through the shear construction.
pub fn make_kar<T: Real>(a: T, r: T) -> Result<HarmonicMap<T>> {
    make_generalized_harmonic_koebe(GhkParams::kar(a, r)?)
}

/// `K_{a,R}` from the closed forms `h = (k_{a+R} + k_a)/2`,
/// `g = (k_{a+R} - k_a)/2`.
pub fn make_kar_closed_form<T: Real>(a: T, r: T) -> Result<HarmonicMap<T>> {
    if !(r >= T::zero() && r <= T::one()) {
        return Err(Error::BadParameter(format!("R = {r} outside [0, 1]")));
    }
    if !a.is_finite() {
        return Err(Error::BadParameter("a must be finite".into()));
    }
    let half = real(lit::<T>(0.5));
    let upper = make_generalized_koebe(real(a + r));
    let lower = make_generalized_koebe(real(a));
    let h = AnalyticMap::combination(vec![(half, upper.clone()), (half, lower.clone())]);
    let g = AnalyticMap::combination(vec![(half, upper), (-half, lower)]);
    Ok(HarmonicMap::new(h, g, Provenance::KarClosedForm { a, r }))
}

/// The harmonic Koebe function: horizontal shear of `k` with `omega(z) = z`.
pub fn harmonic_koebe<T: Real>() -> HarmonicMap<T> {
    shear(&AnalyticMap::koebe(), &AnalyticMap::identity(), T::zero())
        .expect("valid shear parameters")
}

/// The half-plane map: vertical shear of `z/(1-z)` with `omega(z) = -z`.
pub fn half_plane<T: Real>() -> HarmonicMap<T> {
    shear(
        &AnalyticMap::half_plane_phi(),
        &AnalyticMap::linear(real(-T::one())),
        T::FRAC_PI_2(),
    )
    .expect("valid shear parameters")
}

pub fn eval_harmonic<T: Real>(f: &HarmonicMap<T>, z: Complex<T>) -> Result<Complex<T>> {
    f.eval(z)
}

pub fn dilatation<T: Real>(f: &HarmonicMap<T>, z: Complex<T>) -> Result<Complex<T>> {
    f.dilatation(z)
}

pub fn jacobian<T: Real>(f: &HarmonicMap<T>, z: Complex<T>) -> Result<T> {
    f.jacobian(z)
}

pub fn rotate<T: Real>(f: &HarmonicMap<T>, eta: Complex<T>) -> Result<HarmonicMap<T>> {
    f.rotate(eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn re(x: f64) -> C {
        C::new(x, 0.0)
    }

    /// Taylor coefficients of p(z)/(1-z)^k for a polynomial p.
    fn rational_oracle(p: &[f64], k: u32, n: usize) -> Vec<f64> {
        // 1/(1-z)^k = sum C(m+k-1, k-1) z^m
        let binom = |m: usize| -> f64 {
            let mut b = 1.0;
            for j in 1..k as usize {
                b *= (m + j) as f64 / j as f64;
            }
            b
        };
        (0..=n)
            .map(|m| {
                p.iter()
                    .enumerate()
                    .filter(|(j, _)| *j <= m)
                    .map(|(j, &c)| c * binom(m - j))
                    .sum()
            })
            .collect()
    }

    fn assert_series(s: &Series<f64>, expected: &[f64], tol: f64) {
        for (n, &e) in expected.iter().enumerate() {
            assert!(
                (s.coeff(n) - re(e)).norm() <= tol * e.abs().max(1.0),
                "coefficient {n}: {} vs {e}",
                s.coeff(n)
            );
        }
    }

    #[test]
    fn harmonic_koebe_matches_closed_form() {
        let k = harmonic_koebe::<f64>();
        let (h, g) = k.series(30).unwrap();
        assert_series(
            &h,
            &rational_oracle(&[0.0, 1.0, -0.5, 1.0 / 6.0], 3, 30),
            1e-13,
        );
        assert_series(
            &g,
            &rational_oracle(&[0.0, 0.0, 0.5, 1.0 / 6.0], 3, 30),
            1e-13,
        );
        let z = C::new(0.3, 0.4);
        let one = re(1.0);
        let big_h = (z - z * z / 2.0 + z * z * z / 6.0) / ((one - z).powu(3));
        let big_g = (z * z / 2.0 + z * z * z / 6.0) / ((one - z).powu(3));
        assert!((k.h().value(z).unwrap() - big_h).norm() < 1e-10);
        assert!((k.g().value(z).unwrap() - big_g).norm() < 1e-10);
    }

    #[test]
    fn half_plane_matches_closed_form() {
        let l = half_plane::<f64>();
        let (h, g) = l.series(30).unwrap();
        assert_series(&h, &rational_oracle(&[0.0, 1.0, -0.5], 2, 30), 1e-13);
        assert_series(&g, &rational_oracle(&[0.0, 0.0, -0.5], 2, 30), 1e-13);
    }

    #[test]
    fn zero_dilatation_shear_is_phi() {
        let phi = make_generalized_koebe(C::new(1.3, -0.4));
        let f = shear(&phi, &AnalyticMap::zero(), 0.7).unwrap();
        let (h, g) = f.series(20).unwrap();
        assert!(h.max_abs_diff(&phi.series(20).unwrap()) < 1e-13);
        assert_eq!(g.max_abs(), 0.0);
        let z = C::new(-0.2, 0.5);
        assert!((f.eval(z).unwrap() - phi.value(z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn shear_rejects_bad_direction() {
        let phi = AnalyticMap::<f64>::koebe();
        assert!(shear(&phi, &AnalyticMap::identity(), std::f64::consts::PI).is_err());
        assert!(shear(&phi, &AnalyticMap::identity(), -0.1).is_err());
    }

    #[test]
    fn dilatation_out_of_range_is_reported() {
        let phi = AnalyticMap::<f64>::koebe();
        let omega = AnalyticMap::polynomial(Series::from_real(&[0.0, 0.0, 2.0]).unwrap());
        let f = shear(&phi, &omega, 0.0).unwrap();
        assert!(f.eval(C::new(0.5, 0.0)).is_ok());
        let err = f.eval(C::new(0.9, 0.0)).unwrap_err();
        assert!(matches!(err, Error::DilatationOutOfRange(_)));
    }

    #[test]
    fn ghk_examples() {
        let k = make_generalized_harmonic_koebe(GhkParams::kar(2.0, 1.0).unwrap()).unwrap();
        let reference = harmonic_koebe::<f64>();
        let (h, g) = k.series(25).unwrap();
        let (rh, rg) = reference.series(25).unwrap();
        assert!(h.max_abs_diff(&rh) < 1e-12);
        assert!(g.max_abs_diff(&rg) < 1e-12);

        let k11 = make_kar(1.0, 1.0).unwrap();
        let (h, g) = k11.series(25).unwrap();
        assert_series(&h, &rational_oracle(&[0.0, 1.0, -0.5], 2, 25), 1e-13);
        assert_series(&g, &rational_oracle(&[0.0, 0.0, 0.5], 2, 25), 1e-13);

        let a = C::new(0.8, 0.3);
        let p = GhkParams::new(re(1.0), a, re(1.0), 0.0).unwrap();
        let f = make_generalized_harmonic_koebe(p).unwrap();
        let (h, g) = f.series(20).unwrap();
        assert!(h.max_abs_diff(&make_generalized_koebe(a).series(20).unwrap()) < 1e-13);
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn ghk_params_validation() {
        assert!(GhkParams::new(C::new(0.0, 1.0), re(1.0), C::new(0.6, 0.8), 0.5).is_ok());
        assert!(GhkParams::new(re(1.1), re(1.0), re(1.0), 0.5).is_err());
        assert!(GhkParams::new(re(1.0), re(1.0), re(1.0), 1.5).is_err());
        assert_eq!(GhkParams::kar(1.5, 0.5).unwrap().order(), Some(2.0));
        assert_eq!(
            GhkParams::new(re(-1.0), re(1.0), re(1.0), 0.5)
                .unwrap()
                .order(),
            None
        );
    }

    #[test]
    fn kar_closed_form_examples() {
        let f = make_kar_closed_form(2.0, 1.0).unwrap();
        let (h, g) = f.series(3).unwrap();
        assert_series(&h, &[0.0, 1.0, 2.5, 14.0 / 3.0], 1e-14);
        assert_series(&g, &[0.0, 0.0, 0.5, 5.0 / 3.0], 1e-14);

        let f = make_kar_closed_form(1.0, 0.0).unwrap();
        let (h, g) = f.series(10).unwrap();
        assert_series(&h, &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0], 1e-15);
        assert!(g.max_abs() < 1e-16);

        let f = make_kar_closed_form(2.0, 1.0).unwrap();
        let w = f.dilatation(re(0.3)).unwrap();
        assert!((w - re(0.3)).norm() < 1e-14);
        assert!(make_kar_closed_form(1.0, 1.5).is_err());
    }

    #[test]
    fn eval_examples() {
        let f = make_kar(2.0, 1.0).unwrap();
        assert_eq!(f.eval(re(0.0)).unwrap(), re(0.0));
        assert!((f.eval(re(0.5)).unwrap() - re(13.0 / 3.0)).norm() < 1e-10);
        assert!(f.eval(re(1.0)).is_err());
    }

    #[test]
    fn dilatation_and_jacobian_examples() {
        let f = make_kar(1.5, 0.5).unwrap();
        let lens = make_lens(0.5).unwrap();
        for z in [C::new(0.3, 0.2), C::new(-0.6, 0.1), re(0.0)] {
            assert!((f.dilatation(z).unwrap() - lens.value(z).unwrap()).norm() < 1e-11);
        }
        let k = harmonic_koebe::<f64>();
        let z = re(0.4);
        assert!((k.dilatation(z).unwrap() - z).norm() < 1e-14);
        let dh = k.h().derivative(z).unwrap();
        let expected = dh.norm_sqr() * (1.0 - 0.16);
        assert!((k.jacobian(z).unwrap() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn degenerate_derivative_is_reported() {
        let h = AnalyticMap::polynomial(Series::from_real(&[0.0, 1.0, -1.0]).unwrap());
        let f = HarmonicMap::new(h, AnalyticMap::zero(), Provenance::Custom);
        assert!(matches!(
            f.jacobian(re(0.5)),
            Err(Error::DegenerateDerivative(_))
        ));
        assert!(matches!(
            f.dilatation(re(0.5)),
            Err(Error::DegenerateDerivative(_))
        ));
    }

    #[test]
    fn rotation_examples() {
        let f = make_kar_closed_form(1.2, 0.6).unwrap();
        let same = f.rotate(re(1.0)).unwrap();
        let z = C::new(0.1, -0.3);
        assert!((same.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-15);

        let flipped = f.rotate(re(-1.0)).unwrap();
        for z in [C::new(0.2, 0.3), C::new(-0.5, 0.1)] {
            // eta^2 omega(eta z) with eta = -1
            let expected = f.dilatation(-z).unwrap();
            assert!((flipped.dilatation(z).unwrap() - expected).norm() < 1e-13);
        }

        let k = harmonic_koebe::<f64>();
        let i = C::new(0.0, 1.0);
        let rk = k.rotate(i).unwrap();
        let (h, _) = rk.series(3).unwrap();
        assert!((h.coeff(2) - re(2.5) * i).norm() < 1e-13);
        assert!((h.coeff(2).norm() - 2.5).abs() < 1e-13);
        assert!(f.rotate(re(1.5)).is_err());
    }

    #[test]
    fn schwarz_bound_on_second_co_analytic_coefficient() {
        for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let (_, g) = make_kar(1.0, r).unwrap().series(4).unwrap();
            assert!((g.coeff(2) - re(r / 2.0)).norm() < 1e-15);
            assert!(g.coeff(2).norm() <= 0.5);
        }
    }
}
