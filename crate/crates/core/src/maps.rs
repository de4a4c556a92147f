//! Analytic maps of the unit disk.
//!
//! An [`AnalyticMap`] is a small expression tree. Leaves are the elementary
//! maps (Koebe, generalized Koebe `k_a`, `k_0`, lens maps, `z/(1-z)`, linear
//! and polynomial maps); interior nodes are linear combinations, rotations,
//! Möbius pull-backs (used by Koebe transforms) and the analytic /
//! co-analytic parts of a shear. Every node evaluates pointwise and expands
//! into a [`Series`].

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};
use crate::scalar::{expm1, int, lit, real, to_f64, DotAccumulator, Real};
use crate::series::Series;

/// Points with `|z| > 1 - DISK_MARGIN` are rejected.
pub const DISK_MARGIN: f64 = 1e-9;

/// Below this `|a|`, `k_a` is evaluated as `k_0 + a k_0^2`.
pub const SMALL_A: f64 = 1e-9;

/// Elementary maps.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind<T> {
    /// `z / (1 - z)^2`.
    Koebe,
    /// `((1+z)/(1-z))^a - 1) / (2a)` on the principal branch.
    GeneralizedKoebe { a: Complex<T> },
    /// `(1/2) log((1+z)/(1-z))`.
    K0,
    /// `(t^R - 1)/(t^R + 1)` with `t = (1+z)/(1-z)`, `0 <= R <= 1`.
    Lens { r: T },
    /// `z / (1 - z)`.
    HalfPlanePhi,
    /// `c z`.
    Linear { c: Complex<T> },
    /// A polynomial given by its coefficients (exact, zero beyond its order).
    Polynomial { coeffs: Series<T> },
}

/// Which half of a shear a node integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ShearPart {
    /// `h' = phi' / (1 - rot * omega)`.
    Analytic,
    /// `g' = omega * h'`.
    CoAnalytic,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node<T> {
    Elementary(MapKind<T>),
    Combination(Vec<(Complex<T>, AnalyticMap<T>)>),
    /// `outer * inner(eta z)`.
    Rotated {
        inner: AnalyticMap<T>,
        eta: Complex<T>,
        outer: Complex<T>,
    },
    /// `scale * (inner(M(z)) - inner(zeta))` with `M(z) = (z + zeta)/(1 + conj(zeta) z)`.
    Pullback {
        inner: AnalyticMap<T>,
        zeta: Complex<T>,
        scale: Complex<T>,
    },
    Shear {
        phi: AnalyticMap<T>,
        omega: AnalyticMap<T>,
        rotation: Complex<T>,
        part: ShearPart,
        quad: QuadratureConfig<T>,
    },
}

/// An analytic function on the unit disk. Cheap to clone.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMap<T> {
    node: Arc<Node<T>>,
}

fn check_disk<T: Real>(z: Complex<T>) -> Result<()> {
    let n = z.norm();
    if n.is_finite() && n <= T::one() - lit(DISK_MARGIN) {
        Ok(())
    } else {
        Err(Error::PointOutsideDisk {
            re: to_f64(z.re),
            im: to_f64(z.im),
        })
    }
}

/// `log((1+z)/(1-z))`, continuous on the disk (the argument stays in the
/// right half-plane).
fn log_t<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = real(T::one());
    ((one + z) / (one - z)).ln()
}

/// First three derivatives of `k_a` at `z`.
fn gkoebe_derivs<T: Real>(a: Complex<T>, z: Complex<T>) -> [Complex<T>; 3] {
    let one = real(T::one());
    let two = lit::<T>(2.0);
    let q = one - z * z;
    let d1 = (a * log_t(z)).exp() / q;
    let p = (a * two + z * two) / q;
    let dp = (one * two + a * z * lit::<T>(4.0) + z * z * two) / (q * q);
    [d1, p * d1, (dp + p * p) * d1]
}

fn lens_value<T: Real>(r: T, z: Complex<T>) -> Complex<T> {
    if r == T::zero() {
        return real(T::zero());
    }
    if r == T::one() {
        return z;
    }
    let e = expm1(log_t(z) * r);
    e / (e + lit::<T>(2.0))
}

fn lens_derivs<T: Real>(r: T, z: Complex<T>) -> [Complex<T>; 3] {
    let zero = real(T::zero());
    if r == T::zero() {
        return [zero; 3];
    }
    if r == T::one() {
        return [real(T::one()), zero, zero];
    }
    let one = real(T::one());
    let two = lit::<T>(2.0);
    let l = lens_value(r, z);
    let q = one - z * z;
    let s = one - l * l;
    let d1 = s * r / q;
    let p = -l * d1 * two / s + z * two / q;
    let d2 = p * d1;
    let dp = -(d1 * d1 + l * d2) * two / s - l * l * d1 * d1 * lit::<T>(4.0) / (s * s)
        + (one + z * z) * two / (q * q);
    [d1, d2, (dp + p * p) * d1]
}

impl<T: Real> MapKind<T> {
    fn value(&self, z: Complex<T>) -> Complex<T> {
        let one = real(T::one());
        match self {
            MapKind::Koebe => z / ((one - z) * (one - z)),
            MapKind::GeneralizedKoebe { a } => {
                if a.norm() < lit(SMALL_A) {
                    let k0 = log_t(z) / lit::<T>(2.0);
                    k0 + a * k0 * k0
                } else {
                    expm1(a * log_t(z)) / (a * lit::<T>(2.0))
                }
            }
            MapKind::K0 => log_t(z) / lit::<T>(2.0),
            MapKind::Lens { r } => lens_value(*r, z),
            MapKind::HalfPlanePhi => z / (one - z),
            MapKind::Linear { c } => c * z,
            MapKind::Polynomial { coeffs } => coeffs.eval(z),
        }
    }

    fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let one = real(T::one());
        match self {
            MapKind::Koebe => (one + z) / ((one - z) * (one - z) * (one - z)),
            MapKind::GeneralizedKoebe { a } => (a * log_t(z)).exp() / (one - z * z),
            MapKind::K0 => one / (one - z * z),
            MapKind::Lens { r } => lens_derivs(*r, z)[0],
            MapKind::HalfPlanePhi => one / ((one - z) * (one - z)),
            MapKind::Linear { c } => *c,
            MapKind::Polynomial { coeffs } => coeffs.derivative().eval(z),
        }
    }

    fn derivs3(&self, z: Complex<T>) -> [Complex<T>; 3] {
        let zero = real(T::zero());
        match self {
            MapKind::Koebe => gkoebe_derivs(real(lit(2.0)), z),
            MapKind::GeneralizedKoebe { a } => gkoebe_derivs(*a, z),
            MapKind::K0 => gkoebe_derivs(zero, z),
            MapKind::Lens { r } => lens_derivs(*r, z),
            MapKind::HalfPlanePhi => gkoebe_derivs(real(T::one()), z),
            MapKind::Linear { c } => [*c, zero, zero],
            MapKind::Polynomial { coeffs } => {
                let d1 = coeffs.derivative();
                let d2 = d1.derivative();
                let d3 = d2.derivative();
                [d1.eval(z), d2.eval(z), d3.eval(z)]
            }
        }
    }

    fn series(&self, order: usize) -> Series<T> {
        match self {
            MapKind::Koebe => {
                Series::from_vec_unchecked((0..=order).map(|n| real(int(n))).collect())
            }
            MapKind::GeneralizedKoebe { a } => gkoebe_series(*a, order),
            MapKind::K0 => gkoebe_series(real(T::zero()), order),
            MapKind::Lens { r } => lens_series(*r, order),
            MapKind::HalfPlanePhi => Series::from_vec_unchecked(
                (0..=order)
                    .map(|n| real(if n == 0 { T::zero() } else { T::one() }))
                    .collect(),
            ),
            MapKind::Linear { c } => Series::monomial(*c, 1, order),
            MapKind::Polynomial { coeffs } => {
                Series::from_vec_unchecked((0..=order).map(|n| coeffs.coeff(n)).collect())
            }
        }
    }
}

/// Coefficients of `k_a` from `(1 - z^2) k' = 1 + 2a k`:
/// `(n+1) c_{n+1} = 2a c_n + (n-1) c_{n-1}`.
fn gkoebe_series<T: Real>(a: Complex<T>, order: usize) -> Series<T> {
    let mut c = vec![real(T::zero()); order + 1];
    if order >= 1 {
        c[1] = real(T::one());
    }
    let two_a = a * lit::<T>(2.0);
    for n in 1..order {
        c[n + 1] = (two_a * c[n] + c[n - 1] * int::<T>(n - 1)) / int::<T>(n + 1);
    }
    Series::from_vec_unchecked(c)
}

/// Coefficients of `l_R` from the Riccati equation `(1 - z^2) l' = R (1 - l^2)`.
fn lens_series<T: Real>(r: T, order: usize) -> Series<T> {
    let mut c = vec![real(T::zero()); order + 1];
    if order >= 1 {
        c[1] = real(r);
    }
    for n in 1..order {
        let mut square = DotAccumulator::default();
        for k in 1..n {
            square.add(c[k], c[n - k]);
        }
        let square = square.value();
        c[n + 1] = (c[n - 1] * int::<T>(n - 1) - square * r) / int::<T>(n + 1);
    }
    Series::from_vec_unchecked(c)
}

/// Source order needed so that re-centering at `zeta` leaves the first
/// `order + 1` coefficients accurate: the neglected tail behaves like
/// `C(m, order) |zeta|^(m - order) m^4`.
fn pullback_source_order(zeta_abs: f64, order: usize) -> usize {
    const CAP: usize = 2048;
    if zeta_abs == 0.0 {
        return order;
    }
    let ln_z = zeta_abs.ln();
    let target = (1e-18f64).ln();
    let mut ln_binom = 0.0;
    let mut m = order;
    while m < order + CAP {
        m += 1;
        ln_binom += (m as f64 / (m - order) as f64).ln();
        let bound = ln_binom + (m - order) as f64 * ln_z + 4.0 * (m as f64).ln();
        if m > order + 8 && bound < target {
            break;
        }
    }
    m
}

impl<T: Real> AnalyticMap<T> {
    pub(crate) fn from_node(node: Node<T>) -> Self {
        Self {
            node: Arc::new(node),
        }
    }

    pub fn elementary(kind: MapKind<T>) -> Self {
        Self::from_node(Node::Elementary(kind))
    }

    pub fn koebe() -> Self {
        Self::elementary(MapKind::Koebe)
    }

    pub fn generalized_koebe(a: Complex<T>) -> Self {
        Self::elementary(MapKind::GeneralizedKoebe { a })
    }

    pub fn k0() -> Self {
        Self::elementary(MapKind::K0)
    }

    pub fn lens(r: T) -> Result<Self> {
        if !(r >= T::zero() && r <= T::one()) {
            return Err(Error::BadParameter(format!(
                "lens parameter R = {r} outside [0, 1]"
            )));
        }
        Ok(Self::elementary(MapKind::Lens { r }))
    }

    /// `z / (1 - z)`.
    pub fn half_plane_phi() -> Self {
        Self::elementary(MapKind::HalfPlanePhi)
    }

    pub fn linear(c: Complex<T>) -> Self {
        Self::elementary(MapKind::Linear { c })
    }

    pub fn identity() -> Self {
        Self::linear(real(T::one()))
    }

    pub fn zero() -> Self {
        Self::linear(real(T::zero()))
    }

    pub fn polynomial(coeffs: Series<T>) -> Self {
        Self::elementary(MapKind::Polynomial { coeffs })
    }

    /// `sum c_i f_i`.
    pub fn combination(terms: Vec<(Complex<T>, AnalyticMap<T>)>) -> Self {
        Self::from_node(Node::Combination(terms))
    }

    /// `c * self`.
    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self::combination(vec![(c, self.clone())])
    }

    /// `outer * self(eta z)`.
    pub fn rotated(&self, eta: Complex<T>, outer: Complex<T>) -> Self {
        Self::from_node(Node::Rotated {
            inner: self.clone(),
            eta,
            outer,
        })
    }

    /// `scale * (self(M(z)) - self(zeta))`, `M(z) = (z + zeta)/(1 + conj(zeta) z)`.
    pub fn pullback(&self, zeta: Complex<T>, scale: Complex<T>) -> Result<Self> {
        check_disk(zeta)?;
        Ok(Self::from_node(Node::Pullback {
            inner: self.clone(),
            zeta,
            scale,
        }))
    }

    /// The elementary kind, if this is a leaf.
    pub fn kind(&self) -> Option<&MapKind<T>> {
        match &*self.node {
            Node::Elementary(k) => Some(k),
            _ => None,
        }
    }

    /// Short tag naming the construction.
    pub fn tag(&self) -> &'static str {
        match &*self.node {
            Node::Elementary(MapKind::Koebe) => "koebe",
            Node::Elementary(MapKind::GeneralizedKoebe { .. }) => "gkoebe",
            Node::Elementary(MapKind::K0) => "k0",
            Node::Elementary(MapKind::Lens { .. }) => "lens",
            Node::Elementary(MapKind::HalfPlanePhi) => "halfplane-phi",
            Node::Elementary(_) => "custom",
            Node::Combination(_) => "combination",
            Node::Rotated { .. } => "rotated",
            Node::Pullback { .. } => "pullback",
            Node::Shear {
                part: ShearPart::Analytic,
                ..
            } => "shear-h",
            Node::Shear {
                part: ShearPart::CoAnalytic,
                ..
            } => "shear-g",
        }
    }

    /// `f(z)` for `|z| <= 1 - 1e-9`.
    pub fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        check_disk(z)?;
        self.value_unchecked(z)
    }

    fn value_unchecked(&self, z: Complex<T>) -> Result<Complex<T>> {
        match &*self.node {
            Node::Elementary(kind) => Ok(kind.value(z)),
            Node::Combination(terms) => terms.iter().try_fold(real(T::zero()), |acc, (c, f)| {
                Ok(acc + c * f.value_unchecked(z)?)
            }),
            Node::Rotated { inner, eta, outer } => Ok(outer * inner.value_unchecked(eta * z)?),
            Node::Pullback { inner, zeta, scale } => {
                let w = mobius(*zeta, z);
                Ok(scale * (inner.value_unchecked(w)? - inner.value_unchecked(*zeta)?))
            }
            Node::Shear { quad, .. } => {
                if z == real(T::zero()) {
                    return Ok(z);
                }
                let q = quadrature::integrate(
                    |t: T| Ok(self.shear_integrand(z * t)? * z),
                    T::zero(),
                    T::one(),
                    quad,
                )?;
                Ok(q.value)
            }
        }
    }

    fn shear_integrand(&self, w: Complex<T>) -> Result<Complex<T>> {
        let Node::Shear {
            phi,
            omega,
            rotation,
            part,
            ..
        } = &*self.node
        else {
            unreachable!("shear integrand requested for a non-shear node")
        };
        let om = omega.value_unchecked(w)?;
        if om.norm() >= T::one() {
            return Err(Error::DilatationOutOfRange(to_f64(om.norm())));
        }
        let h1 = phi.derivative_unchecked(w)? / (real(T::one()) - rotation * om);
        Ok(match part {
            ShearPart::Analytic => h1,
            ShearPart::CoAnalytic => om * h1,
        })
    }

    /// `f'(z)` for `|z| <= 1 - 1e-9`.
    pub fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        check_disk(z)?;
        self.derivative_unchecked(z)
    }

    fn derivative_unchecked(&self, z: Complex<T>) -> Result<Complex<T>> {
        match &*self.node {
            Node::Elementary(kind) => Ok(kind.derivative(z)),
            Node::Combination(terms) => terms.iter().try_fold(real(T::zero()), |acc, (c, f)| {
                Ok(acc + c * f.derivative_unchecked(z)?)
            }),
            Node::Rotated { inner, eta, outer } => {
                Ok(outer * eta * inner.derivative_unchecked(eta * z)?)
            }
            Node::Pullback { inner, zeta, scale } => {
                let one = real(T::one());
                let den = one + zeta.conj() * z;
                let dm = (one - real(zeta.norm_sqr())) / (den * den);
                Ok(scale * inner.derivative_unchecked(mobius(*zeta, z))? * dm)
            }
            Node::Shear { .. } => self.shear_integrand(z),
        }
    }

    /// `[f', f'', f''']` at `z` when available in closed form.
    pub fn derivatives3(&self, z: Complex<T>) -> Result<Option<[Complex<T>; 3]>> {
        check_disk(z)?;
        Ok(self.derivs3_unchecked(z))
    }

    fn derivs3_unchecked(&self, z: Complex<T>) -> Option<[Complex<T>; 3]> {
        match &*self.node {
            Node::Elementary(kind) => Some(kind.derivs3(z)),
            Node::Combination(terms) => {
                let mut acc = [real(T::zero()); 3];
                for (c, f) in terms {
                    let d = f.derivs3_unchecked(z)?;
                    for k in 0..3 {
                        acc[k] = acc[k] + c * d[k];
                    }
                }
                Some(acc)
            }
            Node::Rotated { inner, eta, outer } => {
                let d = inner.derivs3_unchecked(eta * z)?;
                Some([
                    outer * eta * d[0],
                    outer * eta * eta * d[1],
                    outer * eta * eta * eta * d[2],
                ])
            }
            Node::Pullback { .. } | Node::Shear { .. } => None,
        }
    }

    /// Taylor coefficients `c_0..=c_N`.
    pub fn series(&self, order: usize) -> Result<Series<T>> {
        match &*self.node {
            Node::Elementary(kind) => Ok(kind.series(order)),
            Node::Combination(terms) => {
                terms.iter().try_fold(Series::zero(order), |acc, (c, f)| {
                    Ok(acc.add_series(&f.series(order)?.scale(*c)))
                })
            }
            Node::Rotated { inner, eta, outer } => {
                let s = inner.series(order)?;
                let mut power = *outer;
                let coeffs = s
                    .coeffs()
                    .iter()
                    .map(|&c| {
                        let v = c * power;
                        power = power * eta;
                        v
                    })
                    .collect();
                Series::from_coeffs(coeffs)
            }
            Node::Pullback { inner, zeta, scale } => {
                let src = pullback_source_order(to_f64(zeta.norm()), order);
                let mut d = inner.series(src)?.recenter(*zeta).truncate(order);
                let mut coeffs = d.clone().into_coeffs();
                coeffs[0] = real(T::zero());
                d = Series::from_coeffs(coeffs)?;
                Ok(d.compose(&mobius_offset_series(*zeta, order))?
                    .scale(*scale))
            }
            Node::Shear {
                phi,
                omega,
                rotation,
                part,
                ..
            } => {
                let dphi = phi.series(order + 1)?.derivative();
                let om = omega.series(order)?;
                let den = &Series::one(order) - &om.scale(*rotation);
                let h1 = dphi.div(&den)?;
                let integrand = match part {
                    ShearPart::Analytic => h1,
                    ShearPart::CoAnalytic => &om * &h1,
                };
                Ok(integrand.integrate().truncate(order))
            }
        }
    }
}

/// `(z + zeta)/(1 + conj(zeta) z)`.
pub(crate) fn mobius<T: Real>(zeta: Complex<T>, z: Complex<T>) -> Complex<T> {
    (z + zeta) / (real(T::one()) + zeta.conj() * z)
}

/// Series of `M(z) - zeta = (1 - |zeta|^2) z / (1 + conj(zeta) z)`.
fn mobius_offset_series<T: Real>(zeta: Complex<T>, order: usize) -> Series<T> {
    let k = real(T::one() - zeta.norm_sqr());
    let q = -zeta.conj();
    let mut coeffs = vec![real(T::zero()); order + 1];
    let mut p = k;
    for c in coeffs.iter_mut().skip(1) {
        *c = p;
        p = p * q;
    }
    Series::from_vec_unchecked(coeffs)
}

/// The generalized Koebe function `k_a` (`a = 0` gives `k_0`).
pub fn make_generalized_koebe<T: Real>(a: Complex<T>) -> AnalyticMap<T> {
    AnalyticMap::generalized_koebe(a)
}

/// The lens map `l_R`, `0 <= R <= 1`.
pub fn make_lens<T: Real>(r: T) -> Result<AnalyticMap<T>> {
    AnalyticMap::lens(r)
}

/// `|l_R(z) - R k_R(z) / (1 + R k_R(z))|`.
pub fn lens_identity_residual<T: Real>(r: T, z: Complex<T>) -> Result<T> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::BadParameter(format!("R = {r} outside (0, 1)")));
    }
    let l = make_lens(r)?.value(z)?;
    let rk = make_generalized_koebe(real(r)).value(z)? * r;
    Ok((l - rk / (real(T::one()) + rk)).norm())
}

/// Whether `k_a` is univalent: `a` or `-a` lies in the closed disk of
/// radius 1 about 1.
pub fn hille_univalent<T: Real>(a: Complex<T>) -> bool {
    let one = real(T::one());
    (a - one).norm() <= T::one() || (a + one).norm() <= T::one()
}
