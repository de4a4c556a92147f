//! Univalence probing, growth and distortion bounds, Schwarzian derivatives.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::AnalyticMap;
use crate::scalar::{cplx, int, lit, real, to_f64, Real};
use crate::shear::{make_kar, HarmonicMap, DEGENERATE_DERIVATIVE};

/// Radius of the disk sampled by [`injectivity_probe`].
pub const PROBE_RADIUS: f64 = 0.95;

/// Pairs with `image_gap < PROBE_RATIO * preimage_gap` count as collisions.
pub const PROBE_RATIO: f64 = 1e-6;

/// Outer radius of the polar mesh used by [`schwarzian_norm`].
pub const NORM_RADIUS: f64 = 0.99;

/// Relative tolerance used by [`equality_report`].
pub const EQUALITY_TOL: f64 = 1e-9;

/// Samples on the circle used for contour differentiation.
const CONTOUR_POINTS: usize = 64;

/// Two distinct points with (nearly) the same image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionWitness<T> {
    pub z1: Complex<T>,
    pub z2: Complex<T>,
    pub image_gap: T,
    pub preimage_gap: T,
}

impl<T: Real> CollisionWitness<T> {
    /// Evaluates `f` at both points.
    pub fn measure(f: &HarmonicMap<T>, z1: Complex<T>, z2: Complex<T>) -> Result<Self> {
        let w1 = f.eval(z1)?;
        let w2 = f.eval(z2)?;
        Ok(Self {
            z1,
            z2,
            image_gap: (w1 - w2).norm(),
            preimage_gap: (z1 - z2).norm(),
        })
    }

    /// `image_gap / preimage_gap`.
    pub fn ratio(&self) -> T {
        self.image_gap / self.preimage_gap
    }

    pub const CSV_HEADER: &'static str = "z1,z2,image_gap,preimage_gap";

    pub fn csv_row(&self) -> String {
        let c = |z: Complex<T>| format!("{:e}", Complex::new(to_f64(z.re), to_f64(z.im)));
        format!(
            "{},{},{:e},{:e}",
            c(self.z1),
            c(self.z2),
            to_f64(self.image_gap),
            to_f64(self.preimage_gap)
        )
    }
}

/// `z1 = i tan(pi / (2|a|))` and its conjugate. For `a > 2` the point solves
/// `((1 + z)/(1 - z))^a = -1`, so `k_a` takes the value `-1/a` at both.
pub fn collision_points<T: Real>(a: T) -> Result<(Complex<T>, Complex<T>)> {
    if !(a.abs() > lit(2.0)) {
        return Err(Error::BadParameter(format!(
            "|a| = {} must exceed 2",
            a.abs()
        )));
    }
    let tau = (T::PI() / (lit::<T>(2.0) * a.abs())).tan();
    Ok((cplx(T::zero(), tau), cplx(T::zero(), -tau)))
}

/// Collision witness for the shear-built `K_{a,R}`, `a > 2`.
pub fn collision_witness<T: Real>(a: T, r: T) -> Result<CollisionWitness<T>> {
    if !(a > lit(2.0)) {
        return Err(Error::BadParameter(format!("a = {a} must exceed 2")));
    }
    let f = make_kar(a, r)?;
    let (z1, z2) = collision_points(a)?;
    CollisionWitness::measure(&f, z1, z2)
}

fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while n > 0 {
        out += (n % base) as f64 * inv;
        n /= base;
        inv /= base as f64;
    }
    out
}

/// `count` points of the Halton (2, 3) sequence mapped area-uniformly into
/// `|z| <= radius`, starting at index `seed + 1`.
pub fn halton_disk<T: Real>(count: usize, seed: u64, radius: T) -> Vec<Complex<T>> {
    (0..count as u64)
        .map(|i| {
            let k = seed.wrapping_add(i).wrapping_add(1);
            let rho = radius * lit::<T>(radical_inverse(k, 2).sqrt());
            let theta = lit::<T>(2.0 * std::f64::consts::PI * radical_inverse(k, 3));
            Complex::from_polar(rho, theta)
        })
        .collect()
}

/// Searches a deterministic quasi-random sample of `|z| <= 0.95` for the
/// pair with the smallest `image_gap / preimage_gap`, reporting it when the
/// ratio is below `1e-6`.
pub fn injectivity_probe<T: Real>(
    f: &HarmonicMap<T>,
    samples: usize,
    seed: u64,
) -> Result<Option<CollisionWitness<T>>> {
    injectivity_probe_with(f, samples, seed, &[])
}

/// [`injectivity_probe`] with extra points appended to the sample set.
pub fn injectivity_probe_with<T: Real>(
    f: &HarmonicMap<T>,
    samples: usize,
    seed: u64,
    extra: &[Complex<T>],
) -> Result<Option<CollisionWitness<T>>> {
    let mut points = halton_disk(samples, seed, lit::<T>(PROBE_RADIUS));
    points.extend_from_slice(extra);
    if points.len() < 2 {
        return Err(Error::BadParameter(format!(
            "{} sample points, need 2",
            points.len()
        )));
    }
    let images = points
        .par_iter()
        .map(|&z| f.eval(z))
        .collect::<Result<Vec<_>>>()?;

    let ratio = lit::<T>(PROBE_RATIO);
    // preimage gaps are at most the disk diameter, which bounds the search
    // window in the sorted real parts
    let window = ratio * lit::<T>(2.0);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        images[i]
            .re
            .partial_cmp(&images[j].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    let mut best: Option<(T, usize, usize)> = None;
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if images[j].re - images[i].re > window {
                break;
            }
            let pre = (points[i] - points[j]).norm();
            if pre <= T::zero() {
                continue;
            }
            let q = (images[i] - images[j]).norm() / pre;
            if q < ratio && best.is_none_or(|(b, _, _)| q < b) {
                best = Some((q, i.min(j), i.max(j)));
            }
        }
    }
    Ok(best.map(|(_, i, j)| CollisionWitness {
        z1: points[i],
        z2: points[j],
        image_gap: (images[i] - images[j]).norm(),
        preimage_gap: (points[i] - points[j]).norm(),
    }))
}

fn check_bound_args<T: Real>(alpha: T, r: T) -> Result<()> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(Error::BadParameter(format!(
            "alpha = {alpha} must be at least 1"
        )));
    }
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::BadRadius(to_f64(r)));
    }
    Ok(())
}

/// Lower and upper growth bounds for `|f(z)|`, `|z| = r`, in a family of order `alpha`.
pub fn growth_bounds<T: Real>(alpha: T, r: T) -> Result<(T, T)> {
    check_bound_args(alpha, r)?;
    let c = T::one() / (lit::<T>(2.0) * alpha);
    // 1 - q^alpha and q^-alpha - 1 without cancellation for small r
    let ln_q = (-r).ln_1p() - r.ln_1p();
    Ok((-c * (alpha * ln_q).exp_m1(), c * (-alpha * ln_q).exp_m1()))
}

/// Lower and upper bounds for `|h'| - |g'|` and `|h'| + |g'|` at `|z| = r`.
pub fn distortion_bounds<T: Real>(alpha: T, r: T) -> Result<(T, T)> {
    check_bound_args(alpha, r)?;
    let one = T::one();
    let lower = (one - r).powf(alpha - one) / (one + r).powf(alpha + one);
    let upper = (one + r).powf(alpha - one) / (one - r).powf(alpha + one);
    Ok((lower, upper))
}

/// Growth and distortion bounds at radius `r` next to the values measured
/// on the real axis for `K_{a,R}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport<T> {
    pub r: T,
    pub alpha: T,
    pub lower_growth: T,
    pub upper_growth: T,
    pub lower_distortion: T,
    pub upper_distortion: T,
    /// `|f(-r)|`.
    pub measured_lower_growth: T,
    /// `|f(r)|`.
    pub measured_upper_growth: T,
    /// `|h'(-r)| - |g'(-r)|`.
    pub measured_lower_distortion: T,
    /// `|h'(r)| + |g'(r)|`.
    pub measured_upper_distortion: T,
    pub lower_growth_equal: bool,
    pub upper_growth_equal: bool,
    pub lower_distortion_equal: bool,
    pub upper_distortion_equal: bool,
}

impl<T: Real> BoundReport<T> {
    pub fn pass(&self) -> bool {
        self.lower_growth_equal
            && self.upper_growth_equal
            && self.lower_distortion_equal
            && self.upper_distortion_equal
    }

    /// Largest relative deviation of a measured value from its bound.
    pub fn max_residual(&self) -> T {
        [
            (self.measured_lower_growth, self.lower_growth),
            (self.measured_upper_growth, self.upper_growth),
            (self.measured_lower_distortion, self.lower_distortion),
            (self.measured_upper_distortion, self.upper_distortion),
        ]
        .iter()
        .fold(T::zero(), |m, &(x, b)| m.max(relative_gap(x, b)))
    }
}

fn relative_gap<T: Real>(x: T, bound: T) -> T {
    (x - bound).abs() / bound.abs().max(T::one())
}

/// Checks that `K_{a,R}` attains all four bounds of order `alpha = a + R`
/// on the real axis, to relative tolerance `1e-9`.
pub fn equality_report<T: Real>(a: T, big_r: T, r: T) -> Result<BoundReport<T>> {
    if !(a >= lit(-2.0) && a <= lit(2.0)) {
        return Err(Error::BadParameter(format!("a = {a} outside [-2, 2]")));
    }
    if !(big_r >= T::zero() && big_r <= T::one()) {
        return Err(Error::BadParameter(format!("R = {big_r} outside [0, 1]")));
    }
    let alpha = a + big_r;
    let (lower_growth, upper_growth) = growth_bounds(alpha, r)?;
    let (lower_distortion, upper_distortion) = distortion_bounds(alpha, r)?;

    let f = make_kar(a, big_r)?;
    let measured_upper_growth = f.eval(real(r))?.norm();
    let measured_lower_growth = f.eval(real(-r))?.norm();
    let (hp, gp) = f.derivatives(real(r))?;
    let measured_upper_distortion = hp.norm() + gp.norm();
    let (hm, gm) = f.derivatives(real(-r))?;
    let measured_lower_distortion = hm.norm() - gm.norm();

    let tol = lit::<T>(EQUALITY_TOL);
    let eq = |x: T, b: T| relative_gap(x, b) <= tol;
    Ok(BoundReport {
        r,
        alpha,
        lower_growth,
        upper_growth,
        lower_distortion,
        upper_distortion,
        measured_lower_growth,
        measured_upper_growth,
        measured_lower_distortion,
        measured_upper_distortion,
        lower_growth_equal: eq(measured_lower_growth, lower_growth),
        upper_growth_equal: eq(measured_upper_growth, upper_growth),
        lower_distortion_equal: eq(measured_lower_distortion, lower_distortion),
        upper_distortion_equal: eq(measured_upper_distortion, upper_distortion),
    })
}

fn schwarzian_from<T: Real>(d1: Complex<T>, d2: Complex<T>, d3: Complex<T>) -> Complex<T> {
    let p = d2 / d1;
    d3 / d1 - p * p * lit::<T>(1.5)
}

fn check_point<T: Real>(z: Complex<T>) -> Result<()> {
    if !(z.norm() < T::one()) {
        return Err(Error::PointOutsideDisk {
            re: to_f64(z.re),
            im: to_f64(z.im),
        });
    }
    Ok(())
}

/// `S phi = phi'''/phi' - (3/2)(phi''/phi')^2`.
///
/// Uses exact derivatives when the map provides them and
/// [`schwarzian_numeric`] otherwise.
pub fn schwarzian<T: Real>(phi: &AnalyticMap<T>, z: Complex<T>) -> Result<Complex<T>> {
    check_point(z)?;
    match phi.derivatives3(z)? {
        Some([d1, d2, d3]) => {
            if d1.norm() <= lit(DEGENERATE_DERIVATIVE) {
                return Err(Error::DegenerateDerivative(to_f64(d1.norm())));
            }
            Ok(schwarzian_from(d1, d2, d3))
        }
        None => schwarzian_numeric(phi, z),
    }
}

/// Schwarzian from `phi'` alone: the Taylor coefficients of `phi'` at `z`
/// are recovered by a 64-point trapezoidal Cauchy integral on the circle of
/// radius `(1 - |z|)/2`, which converges geometrically for maps analytic
/// in the disk.
pub fn schwarzian_numeric<T: Real>(phi: &AnalyticMap<T>, z: Complex<T>) -> Result<Complex<T>> {
    check_point(z)?;
    let d1 = phi.derivative(z)?;
    if d1.norm() <= lit(DEGENERATE_DERIVATIVE) {
        return Err(Error::DegenerateDerivative(to_f64(d1.norm())));
    }
    let rho = (T::one() - z.norm()) / lit::<T>(2.0);
    let m = CONTOUR_POINTS;
    let mut c1 = real(T::zero());
    let mut c2 = real(T::zero());
    for j in 0..m {
        let w = Complex::from_polar(T::one(), T::TAU() * int::<T>(j) / int::<T>(m));
        let v = phi.derivative(z + w * rho)?;
        c1 = c1 + v * w.conj();
        c2 = c2 + v * (w * w).conj();
    }
    let mm = int::<T>(m);
    let d2 = c1 / (mm * rho);
    let d3 = c2 * lit::<T>(2.0) / (mm * rho * rho);
    Ok(schwarzian_from(d1, d2, d3))
}

/// `max |S phi(z)| (1 - |z|^2)^2` over the polar mesh with radii
/// `0.99 i / grid`, `i = 0..=grid`, and angles `2 pi j / grid`. Angle 0 puts
/// the positive real axis on every mesh, and doubling `grid` refines the
/// mesh, so the value is non-decreasing under doubling.
pub fn schwarzian_norm<T: Real>(phi: &AnalyticMap<T>, grid: usize) -> Result<T> {
    if grid < 8 {
        return Err(Error::BadParameter(format!("grid {grid} < 8")));
    }
    let points: Vec<Complex<T>> = (0..=grid)
        .flat_map(|i| {
            let rho = lit::<T>(NORM_RADIUS) * int::<T>(i) / int::<T>(grid);
            (0..grid)
                .map(move |j| Complex::from_polar(rho, T::TAU() * int::<T>(j) / int::<T>(grid)))
        })
        .collect();
    let values = points
        .par_iter()
        .map(|&z| {
            let w = T::one() - z.norm_sqr();
            schwarzian(phi, z).map(|s| s.norm() * w * w)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(values.into_iter().fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::make_generalized_koebe;
    use crate::shear::{make_kar_closed_form, Provenance};

    type C = Complex<f64>;

    fn re(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn collision_witness_examples() {
        let (z1, z2) = collision_points(2.5_f64).unwrap();
        assert!((z1.im - 0.726_542_528_005_361).abs() < 1e-12);
        assert_eq!(z2, z1.conj());
        let k = make_generalized_koebe(re(2.5));
        assert!((k.value(z1).unwrap() - re(-0.4)).norm() < 1e-14);

        let (z1, _) = collision_points(3.0_f64).unwrap();
        assert!((z1.im - 1.0 / 3f64.sqrt()).abs() < 1e-15);

        let w = collision_witness(4.0, 0.5).unwrap();
        assert!(w.image_gap <= 1e-8);
        assert!((w.preimage_gap - 2.0 * (std::f64::consts::PI / 8.0).tan()).abs() < 1e-15);
        assert!(collision_witness(2.0, 0.5).is_err());
    }

    #[test]
    fn witness_csv() {
        let w = CollisionWitness {
            z1: C::new(0.0, 0.5),
            z2: C::new(0.0, -0.5),
            image_gap: 0.0,
            preimage_gap: 1.0,
        };
        assert_eq!(w.csv_row(), "0e0+5e-1i,0e0-5e-1i,0e0,1e0");
    }

    #[test]
    fn halton_points_stay_in_disk() {
        let pts = halton_disk::<f64>(500, 7, 0.95);
        assert!(pts.iter().all(|z| z.norm() <= 0.95));
        assert_eq!(pts, halton_disk::<f64>(500, 7, 0.95));
        assert_ne!(pts[0], halton_disk::<f64>(1, 8, 0.95)[0]);
    }

    #[test]
    fn probe_examples() {
        let hk = make_kar(2.0, 1.0).unwrap();
        assert!(injectivity_probe(&hk, 2000, 0).unwrap().is_none());

        let f = make_kar(2.5, 0.5).unwrap();
        let (z1, z2) = collision_points(2.5_f64).unwrap();
        let w = injectivity_probe_with(&f, 200, 0, &[z1, z2])
            .unwrap()
            .unwrap();
        assert!(w.image_gap <= 1e-8);
        assert!((w.z1 - z1).norm() < 1e-15 || (w.z1 - z2).norm() < 1e-15);

        let k0 = HarmonicMap::from_analytic(AnalyticMap::<f64>::k0());
        assert!(injectivity_probe(&k0, 2000, 3).unwrap().is_none());
        assert!(injectivity_probe(&k0, 1, 0).is_err());
    }

    #[test]
    fn probe_finds_folded_map() {
        // z^2 identifies z and -z
        let h =
            AnalyticMap::polynomial(crate::series::Series::from_real(&[0.0, 0.0, 1.0]).unwrap());
        let f = HarmonicMap::new(h, AnalyticMap::zero(), Provenance::Custom);
        let w = injectivity_probe_with(&f, 50, 0, &[re(0.3), re(-0.3)])
            .unwrap()
            .unwrap();
        assert!(w.image_gap < 1e-15);
    }

    #[test]
    fn bound_examples() {
        let (lo, hi) = growth_bounds(3.0_f64, 0.5).unwrap();
        assert!((hi - 13.0 / 3.0).abs() < 1e-14);
        assert!((lo - 13.0 / 81.0).abs() < 1e-15);
        let (lo, hi) = growth_bounds(2.0_f64, 1e-8).unwrap();
        assert!((lo - 1e-8).abs() < 1e-15 && (hi - 1e-8).abs() < 1e-15);

        let (lo, hi) = distortion_bounds(3.0_f64, 0.5).unwrap();
        assert!((hi - 36.0).abs() < 1e-12);
        assert!((lo - 4.0 / 81.0).abs() < 1e-15);
        let (lo, hi) = distortion_bounds(1.0_f64, 0.3).unwrap();
        assert!((lo - 1.0 / 1.69).abs() < 1e-15 && (hi - 1.0 / 0.49).abs() < 1e-13);

        assert!(growth_bounds(0.5, 0.5).is_err());
        assert!(distortion_bounds(2.0, 1.0).is_err());
    }

    #[test]
    fn equality_report_examples() {
        let rep = equality_report(2.0_f64, 1.0, 0.5).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!((rep.measured_upper_growth - 13.0 / 3.0).abs() < 1e-9);
        assert!((rep.measured_upper_distortion - 36.0).abs() < 1e-9);
        assert!((rep.measured_lower_distortion - 4.0 / 81.0).abs() < 1e-9);

        let k1 = equality_report(1.0, 0.0, 0.3).unwrap();
        assert!(k1.pass());
        assert!(equality_report(0.2, 0.5, 0.5).is_err());
        assert!(equality_report(2.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn rotated_map_has_same_moduli() {
        let f = make_kar_closed_form(1.5, 0.5).unwrap();
        let eta = C::from_polar(1.0, 0.7);
        let g = f.rotate(eta).unwrap();
        let r = 0.6;
        let z = eta.conj() * r;
        assert!((g.eval(z).unwrap().norm() - f.eval(re(r)).unwrap().norm()).abs() < 1e-13);
        let (h1, g1) = g.derivatives(z).unwrap();
        let (h0, g0) = f.derivatives(re(r)).unwrap();
        assert!((h1.norm() + g1.norm() - h0.norm() - g0.norm()).abs() < 1e-12);
    }

    #[test]
    fn schwarzian_examples() {
        let k2 = make_generalized_koebe(re(2.0));
        assert!((schwarzian(&k2, re(0.0)).unwrap() - re(-6.0)).norm() < 1e-13);
        let id = AnalyticMap::<f64>::identity();
        assert_eq!(schwarzian(&id, C::new(0.2, 0.1)).unwrap(), re(0.0));
        let k1 = make_generalized_koebe(re(1.0));
        assert!(schwarzian(&k1, C::new(0.5, -0.3)).unwrap().norm() < 1e-13);
        assert!(schwarzian(&k2, re(1.0)).is_err());
    }

    #[test]
    fn numeric_schwarzian_matches_closed_form() {
        for a in [0.0, 1.5, 2.0, 3.0] {
            let k = make_generalized_koebe(re(a));
            for z in [C::new(0.3, 0.4), C::new(-0.85, 0.1), C::new(0.0, 0.9)] {
                let exact = re(2.0 * (1.0 - a * a)) / (1.0 - z * z).powi(2);
                assert!(
                    (schwarzian(&k, z).unwrap() - exact).norm() < 1e-10 * exact.norm().max(1.0)
                );
                let num = schwarzian_numeric(&k, z).unwrap();
                assert!((num - exact).norm() < 1e-6, "a={a} z={z} {num} vs {exact}");
            }
        }
    }

    #[test]
    fn schwarzian_norm_examples() {
        for (m, grid) in [(0.0, 16), (2.0, 16), (6.0, 16)] {
            let a = (1.0 + m / 2.0_f64).sqrt();
            let k = make_generalized_koebe(re(a));
            let norm = schwarzian_norm(&k, grid).unwrap();
            assert!((norm - m).abs() < 1e-3, "M={m}: {norm}");
            assert!(norm <= m + 1e-6);
        }
        let k = make_generalized_koebe(re(0.5));
        let coarse = schwarzian_norm(&k, 8).unwrap();
        let fine = schwarzian_norm(&k, 16).unwrap();
        assert!(fine >= coarse);
        assert!(schwarzian_norm(&k, 4).is_err());
    }
}
