//! Command implementations. Each returns the bytes to emit and an exit code.

use std::fmt::Write as _;
use std::str::FromStr;

use harmonic_koebe::analysis::{
    collision_points, collision_witness, distortion_bounds, equality_report, growth_bounds,
    halton_disk, injectivity_probe, injectivity_probe_with, schwarzian, schwarzian_norm,
    schwarzian_numeric, CollisionWitness, EQUALITY_TOL, PROBE_RATIO,
};
use harmonic_koebe::families::{
    affine_change, halving_ratios, koebe_transform, marty_generate, marty_residuals_from_series,
    normalization_defect, ode_residual, renormalized_transform,
};
use harmonic_koebe::report::Report;
use harmonic_koebe::series::fmt_f64;
use harmonic_koebe::shear::{make_generalized_harmonic_koebe, make_kar};
use harmonic_koebe::{make_generalized_koebe, make_lens, Complex64, GhkParams, Series64};
use serde_json::{json, Value};

use crate::error::{exit, CliError, Result};
use crate::render::{self, RenderSpec};
use crate::spec::{Built, MapSpec};

/// Bytes for stdout (or `--out`) plus the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: Vec<u8>,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            body: text.into_bytes(),
            code: exit::OK,
        }
    }

    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap_or("")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!(
                "unknown format {s:?}; expected csv or json"
            ))),
        }
    }
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || CliError::Usage(format!("expected re or re,im, found {s:?}"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub const MAX_ORDER: usize = 256;

pub fn coeffs(spec: &MapSpec, n: usize, max_order: usize, format: Format) -> Result<Output> {
    if n > max_order {
        return Err(CliError::Usage(format!(
            "--n {n} exceeds the maximum order {max_order}"
        )));
    }
    let text = match (spec.spec.build()?, format) {
        (Built::Analytic(m), Format::Csv) => m.series(n)?.to_csv(),
        (Built::Analytic(m), Format::Json) => m.series(n)?.to_json() + "\n",
        (Built::Harmonic(f), Format::Csv) => {
            let (h, g) = f.series(n)?;
            let mut out = String::from("part,n,re,im\n");
            for (part, s) in [("h", &h), ("g", &g)] {
                for line in s.csv_rows().lines() {
                    let _ = writeln!(out, "{part},{line}");
                }
            }
            out
        }
        (Built::Harmonic(f), Format::Json) => {
            let (h, g) = f.series(n)?;
            json!({ "h": h.to_wire(), "g": g.to_wire() }).to_string() + "\n"
        }
    };
    Ok(Output::ok(text))
}

/// Inverse of the harmonic CSV layout written by [`coeffs`].
pub fn parse_harmonic_csv(text: &str) -> Result<(Series64, Series64)> {
    let mut parts = [String::new(), String::new()];
    for line in text.lines().skip(1) {
        let (part, rest) = line
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("malformed row {line:?}")))?;
        let slot = match part {
            "h" => 0,
            "g" => 1,
            _ => return Err(CliError::Usage(format!("unknown part {part:?}"))),
        };
        parts[slot].push_str(rest);
        parts[slot].push('\n');
    }
    Ok((
        Series64::from_csv(&parts[0])?,
        Series64::from_csv(&parts[1])?,
    ))
}

pub fn eval(spec: &MapSpec, points: &[Complex64], format: Format) -> Result<Output> {
    let f = spec.spec.build()?;
    let values = points
        .iter()
        .map(|&z| f.eval(z).map(|w| (z, w)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Csv => {
            let mut out = String::from("z_re,z_im,f_re,f_im\n");
            for (z, w) in values {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(z.re),
                    fmt_f64(z.im),
                    fmt_f64(w.re),
                    fmt_f64(w.im)
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = values
                .into_iter()
                .map(|(z, w)| json!({ "z": [z.re, z.im], "f": [w.re, w.im] }))
                .collect();
            Value::Array(rows).to_string() + "\n"
        }
    };
    Ok(Output::ok(text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Marty,
    Ode,
    Symmetry,
    Dilatation,
    Bounds,
    Schwarzian,
    Expansion,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "marty" => Suite::Marty,
            "ode" => Suite::Ode,
            "symmetry" => Suite::Symmetry,
            "dilatation" => Suite::Dilatation,
            "bounds" => Suite::Bounds,
            "schwarzian" => Suite::Schwarzian,
            "expansion" => Suite::Expansion,
            _ => return Err(CliError::UnknownSuite(s.to_owned())),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub a: Option<f64>,
    pub big_r: Option<f64>,
    pub r: Option<f64>,
    /// Symmetry identity: `i`, `ii`, `iii` or `all`.
    pub which: Option<String>,
    pub n: Option<usize>,
    pub grid: Option<usize>,
    pub atol: Option<f64>,
    pub rtol: Option<f64>,
    pub seed: u64,
    /// Adds `delta` to coefficient `n` of `h` before checking.
    pub perturb: Option<(usize, f64)>,
}

pub const A_GRID: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];
pub const R_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const SYMMETRY_PAIRS: [(f64, f64); 3] = [(1.2, 0.7), (0.5, 0.3), (-1.0, 1.0)];

pub fn parse_perturb(s: &str) -> Result<(usize, f64)> {
    let bad = || CliError::Usage(format!("expected n:delta, found {s:?}"));
    let (n, d) = s.split_once(':').ok_or_else(bad)?;
    Ok((n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?))
}

/// Folds residuals into a report, keeping the parameters of the worst one.
struct Check {
    report: Report,
    worst: f64,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            report: Report::new(name),
            worst: f64::NEG_INFINITY,
        }
    }

    fn observe(&mut self, residual: f64, tol: f64, params: &[(&str, Value)]) {
        self.report.record(residual, tol);
        if residual.is_nan() || residual > self.worst {
            self.worst = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
            self.report.params = params
                .iter()
                .map(|(k, v)| ((*k).to_owned(), v.clone()))
                .collect();
            self.report.params.insert("tolerance".into(), json!(tol));
        }
    }
}

impl VerifyOptions {
    fn grid_pairs(&self) -> Vec<(f64, f64)> {
        let a: Vec<f64> = self.a.map_or(A_GRID.to_vec(), |a| vec![a]);
        let r: Vec<f64> = self.big_r.map_or(R_GRID.to_vec(), |r| vec![r]);
        a.iter()
            .flat_map(|&a| r.iter().map(move |&r| (a, r)))
            .collect()
    }

    fn perturbed(&self, h: Series64) -> Result<Series64> {
        let Some((n, delta)) = self.perturb else {
            return Ok(h);
        };
        let mut c = h.into_coeffs();
        let len = c.len();
        let slot = c.get_mut(n).ok_or_else(|| {
            CliError::Usage(format!("perturbed index {n} beyond order {}", len - 1))
        })?;
        *slot += delta;
        Ok(Series64::from_coeffs(c)?)
    }

    fn atol(&self, default: f64) -> f64 {
        self.atol.unwrap_or(default)
    }

    fn rtol(&self, default: f64) -> f64 {
        self.rtol.unwrap_or(default)
    }
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<Output> {
    if opts.perturb.is_some() && !matches!(suite, Suite::Marty | Suite::Ode | Suite::Symmetry) {
        return Err(CliError::Usage(
            "--perturb applies to marty, ode and symmetry".into(),
        ));
    }
    let checks = match suite {
        Suite::Marty => verify_marty(opts)?,
        Suite::Ode => verify_ode(opts)?,
        Suite::Symmetry => verify_symmetry(opts)?,
        Suite::Dilatation => verify_dilatation(opts)?,
        Suite::Bounds => verify_bounds(opts)?,
        Suite::Schwarzian => verify_schwarzian(opts)?,
        Suite::Expansion => verify_expansion(opts)?,
    };
    let mut text = String::new();
    for c in &checks {
        text.push_str(&c.report.to_json());
        text.push('\n');
    }
    let code = if checks.iter().all(|c| c.report.pass) {
        exit::OK
    } else {
        exit::VERIFY_FAILED
    };
    Ok(Output {
        body: text.into_bytes(),
        code,
    })
}

fn verify_marty(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let order = opts.n.unwrap_or(40);
    let tol = opts.atol(1e-10);
    let mut rel = Check::new("marty");
    let mut gen = Check::new("marty-generate");
    for (a, big_r) in opts.grid_pairs() {
        let (h, g) = make_kar(a, big_r)?.series(order)?;
        let h = opts.perturbed(h)?;
        for (i, (ra, rb)) in marty_residuals_from_series(&h, &g).into_iter().enumerate() {
            let n = i + 2;
            let scaled = ra.max(rb) / (n * n) as f64;
            rel.observe(
                scaled,
                tol,
                &[("a", json!(a)), ("R", json!(big_r)), ("n", json!(n))],
            );
        }
        let m = marty_generate(a + big_r / 2.0, big_r / 2.0, order)?;
        let d = m
            .a_series()
            .max_abs_diff(&h)
            .max(m.b_series().max_abs_diff(&g));
        gen.observe(d, tol, &[("a", json!(a)), ("R", json!(big_r))]);
    }
    Ok(vec![rel, gen])
}

fn verify_ode(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let order = opts.n.unwrap_or(40);
    let tol = opts.atol(1e-11);
    let mut check = Check::new("ode");
    for (a, big_r) in opts.grid_pairs() {
        let (h, g) = make_kar(a, big_r)?.series(order)?;
        let h = opts.perturbed(h)?;
        let sum = ode_residual(&(&h + &g), Complex64::new(2.0 * (a + big_r), 0.0));
        let diff = ode_residual(&(&h - &g), Complex64::new(2.0 * a, 0.0));
        for (part, r) in [("h+g", sum), ("h-g", diff)] {
            check.observe(
                r,
                tol,
                &[("a", json!(a)), ("R", json!(big_r)), ("part", json!(part))],
            );
        }
    }
    Ok(vec![check])
}

fn ghk(
    lambda: Complex64,
    a: Complex64,
    mu: Complex64,
    r: f64,
) -> Result<harmonic_koebe::HarmonicMap64> {
    Ok(make_generalized_harmonic_koebe(GhkParams::new(
        lambda, a, mu, r,
    )?)?)
}

fn verify_symmetry(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let order = opts.n.unwrap_or(40);
    let (atol, rtol) = (opts.atol(1e-12), opts.rtol(1e-12));
    let which: Vec<&str> = match opts.which.as_deref().unwrap_or("all") {
        "all" => vec!["i", "ii", "iii"],
        w @ ("i" | "ii" | "iii") => vec![w],
        w => {
            return Err(CliError::Usage(format!(
                "unknown identity {w:?}; expected i, ii, iii or all"
            )))
        }
    };
    let pairs = match (opts.a, opts.big_r) {
        (None, None) => SYMMETRY_PAIRS.to_vec(),
        _ => opts.grid_pairs(),
    };
    let one = Complex64::new(1.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut check = Check::new("symmetry");
    for (a, big_r) in pairs {
        for &w in &which {
            let (lhs, rhs, flip) = match w {
                "i" => (
                    ghk(one, re(a), one, big_r)?,
                    ghk(-one, re(a + big_r), one, big_r)?,
                    false,
                ),
                "ii" => (
                    ghk(-one, re(a), -one, big_r)?,
                    ghk(one, re(a + big_r), -one, big_r)?,
                    false,
                ),
                _ => (
                    ghk(one, re(-a), one, big_r)?,
                    ghk(one, re(a), -one, big_r)?,
                    true,
                ),
            };
            let (h1, g1) = lhs.series(order)?;
            let h1 = opts.perturbed(h1)?;
            let (h2, g2) = rhs.series(order)?;
            for n in 0..=order {
                // h(z) = -H(-z) multiplies coefficient n by (-1)^(n+1)
                let s = if flip && n % 2 == 0 { -1.0 } else { 1.0 };
                for (p, q) in [(h1.coeff(n), h2.coeff(n)), (g1.coeff(n), g2.coeff(n))] {
                    let tol = atol.max(rtol * q.norm());
                    let params = [
                        ("identity", json!(w)),
                        ("a", json!(a)),
                        ("R", json!(big_r)),
                        ("n", json!(n)),
                    ];
                    check.observe((p - q * s).norm(), tol, &params);
                }
            }
        }
    }
    Ok(vec![check])
}

fn verify_dilatation(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let (atol, rtol) = (opts.atol(1e-11), opts.rtol(1e-11));
    let points = halton_disk::<f64>(200, opts.seed, 0.9);
    let mut check = Check::new("dilatation");
    for (a, big_r) in opts.grid_pairs() {
        let f = make_kar(a, big_r)?;
        let lens = make_lens(big_r)?;
        for &z in &points {
            let expected = lens.value(z)?;
            let r = (f.dilatation(z)? - expected).norm();
            let params = [
                ("a", json!(a)),
                ("R", json!(big_r)),
                ("z", json!([z.re, z.im])),
            ];
            check.observe(r, atol.max(rtol * expected.norm()), &params);
        }
    }
    Ok(vec![check])
}

fn verify_bounds(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let tol = opts.atol(EQUALITY_TOL);
    let radii = opts.r.map_or(vec![0.1, 0.5, 0.9], |r| vec![r]);
    let mut check = Check::new("bounds");
    for (a, big_r) in opts.grid_pairs() {
        if a + big_r < 1.0 {
            continue;
        }
        for &r in &radii {
            let rep = equality_report(a, big_r, r)?;
            check.observe(
                rep.max_residual(),
                tol,
                &[("a", json!(a)), ("R", json!(big_r)), ("r", json!(r))],
            );
        }
    }
    if check.worst == f64::NEG_INFINITY {
        return Err(CliError::Usage("no (a, R) with a + R >= 1 selected".into()));
    }
    Ok(vec![check])
}

fn verify_schwarzian(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let grid = opts.grid.unwrap_or(32);
    let mut norm = Check::new("schwarzian-norm");
    for m in [0.0, 2.0, 6.0] {
        let a = (1.0 + m / 2.0_f64).sqrt();
        let k = make_generalized_koebe(Complex64::new(a, 0.0));
        let value = schwarzian_norm(&k, grid)?;
        let claimed = 2.0 * (a * a - 1.0);
        let params = [
            ("M", json!(m)),
            ("a", json!(a)),
            ("grid", json!(grid)),
            ("norm", json!(value)),
        ];
        norm.observe((value - claimed).abs(), opts.atol(1e-3), &params);
    }
    let mut numeric = Check::new("schwarzian-numeric");
    let points = halton_disk::<f64>(100, opts.seed, 0.9);
    let a_values = opts.a.map_or(vec![0.0, 0.5, 1.5, 2.0, 3.0], |a| vec![a]);
    for a in a_values {
        let k = make_generalized_koebe(Complex64::new(a, 0.0));
        for &z in &points {
            let r = (schwarzian(&k, z)? - schwarzian_numeric(&k, z)?).norm();
            numeric.observe(
                r,
                opts.atol(1e-6),
                &[("a", json!(a)), ("z", json!([z.re, z.im]))],
            );
        }
    }
    Ok(vec![norm, numeric])
}

pub const HALVING_ZETAS: [Complex64; 3] = [
    Complex64::new(0.0, 0.02),
    Complex64::new(0.012, 0.016),
    Complex64::new(-0.02, 0.02),
];

fn verify_expansion(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let (a, big_r) = (opts.a.unwrap_or(2.0), opts.big_r.unwrap_or(1.0));
    let f = make_kar(a, big_r)?;
    let mut norm = Check::new("transform-normalization");
    let norm_tol = opts.atol(1e-11);
    for zeta in [
        Complex64::new(0.2, 0.0),
        Complex64::new(-0.3, 0.4),
        Complex64::new(0.0, -0.5),
    ] {
        let k = koebe_transform(&f, zeta)?;
        let e = affine_change(&k, Complex64::new(0.3, -0.2))?;
        let n = renormalized_transform(&f, zeta)?;
        for (step, map) in [("koebe", &k), ("affine", &e), ("renormalized", &n)] {
            let params = [
                ("a", json!(a)),
                ("R", json!(big_r)),
                ("zeta", json!([zeta.re, zeta.im])),
                ("step", json!(step)),
            ];
            norm.observe(normalization_defect(map)?, norm_tol, &params);
        }
    }
    let mut halving = Check::new("expansion-halving");
    for zeta in HALVING_ZETAS {
        for n in [2, 3] {
            let (ra, rb) = halving_ratios(&f, zeta, n)?;
            for (part, ratio) in [("a", ra), ("b", rb)] {
                let params = [
                    ("a", json!(a)),
                    ("R", json!(big_r)),
                    ("zeta", json!([zeta.re, zeta.im])),
                    ("n", json!(n)),
                    ("coefficient", json!(part)),
                    ("ratio", json!(ratio)),
                ];
                halving.observe((ratio - 4.0).abs(), opts.atol(0.5), &params);
            }
        }
    }
    Ok(vec![norm, halving])
}

/// Witness for `K_{a,R}`: analytic for `|a| > 2`, probed otherwise.
pub fn find_collision(
    a: f64,
    big_r: f64,
    samples: usize,
    seed: u64,
) -> Result<Option<CollisionWitness<f64>>> {
    if a > 2.0 {
        return Ok(Some(collision_witness(a, big_r)?));
    }
    let f = make_kar(a, big_r)?;
    if a < -2.0 {
        let (z1, z2) = collision_points(a)?;
        let w = CollisionWitness::measure(&f, z1, z2)?;
        if w.ratio() < PROBE_RATIO {
            return Ok(Some(w));
        }
        return Ok(injectivity_probe_with(&f, samples, seed, &[z1, z2])?);
    }
    Ok(injectivity_probe(&f, samples, seed)?)
}

pub fn collide(a: f64, big_r: f64, samples: usize, seed: u64, format: Format) -> Result<Output> {
    let witness = find_collision(a, big_r, samples, seed)?;
    let text = match format {
        Format::Csv => {
            let mut out = format!("{}\n", CollisionWitness::<f64>::CSV_HEADER);
            if let Some(w) = &witness {
                out.push_str(&w.csv_row());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let w = witness.as_ref().map(|w| {
                json!({
                    "z1": [w.z1.re, w.z1.im],
                    "z2": [w.z2.re, w.z2.im],
                    "image_gap": w.image_gap,
                    "preimage_gap": w.preimage_gap,
                })
            });
            json!({ "a": a, "R": big_r, "witness": w }).to_string() + "\n"
        }
    };
    let code = if witness.is_some() {
        exit::WITNESS
    } else {
        exit::OK
    };
    Ok(Output {
        body: text.into_bytes(),
        code,
    })
}

pub fn bounds(alpha: f64, r: f64, format: Format) -> Result<Output> {
    let (gl, gh) = growth_bounds(alpha, r)?;
    let (dl, dh) = distortion_bounds(alpha, r)?;
    let text = match format {
        Format::Csv => format!(
            "alpha,r,lower_growth,upper_growth,lower_distortion,upper_distortion\n{},{},{},{},{},{}\n",
            fmt_f64(alpha),
            fmt_f64(r),
            fmt_f64(gl),
            fmt_f64(gh),
            fmt_f64(dl),
            fmt_f64(dh)
        ),
        Format::Json => json!({
            "alpha": alpha,
            "r": r,
            "lower_growth": gl,
            "upper_growth": gh,
            "lower_distortion": dl,
            "upper_distortion": dh,
        })
        .to_string()
            + "\n",
    };
    Ok(Output::ok(text))
}

/// Equality of the bounds for `K_{a,R}` on the real axis at radius `r`.
pub fn bounds_equality(a: f64, big_r: f64, r: f64, format: Format) -> Result<Output> {
    let rep = equality_report(a, big_r, r)?;
    let rows = [
        (
            "lower_growth",
            rep.lower_growth,
            rep.measured_lower_growth,
            rep.lower_growth_equal,
        ),
        (
            "upper_growth",
            rep.upper_growth,
            rep.measured_upper_growth,
            rep.upper_growth_equal,
        ),
        (
            "lower_distortion",
            rep.lower_distortion,
            rep.measured_lower_distortion,
            rep.lower_distortion_equal,
        ),
        (
            "upper_distortion",
            rep.upper_distortion,
            rep.measured_upper_distortion,
            rep.upper_distortion_equal,
        ),
    ];
    let text = match format {
        Format::Csv => {
            let mut out = String::from("quantity,bound,measured,equal\n");
            for (name, b, m, eq) in rows {
                let _ = writeln!(out, "{name},{},{},{eq}", fmt_f64(b), fmt_f64(m));
            }
            out
        }
        Format::Json => {
            let mut report = Report::new("bounds")
                .param("a", a)
                .param("R", big_r)
                .param("r", r)
                .param("alpha", rep.alpha);
            for (name, b, m, _) in rows {
                report = report.param(name, json!({ "bound": b, "measured": m }));
            }
            report.record(rep.max_residual(), EQUALITY_TOL);
            report.to_json() + "\n"
        }
    };
    let code = if rep.pass() {
        exit::OK
    } else {
        exit::VERIFY_FAILED
    };
    Ok(Output {
        body: text.into_bytes(),
        code,
    })
}

pub fn schwarzian_at(spec: &MapSpec, z: Complex64, format: Format) -> Result<Output> {
    let phi = spec.spec.build_analytic()?;
    let s = schwarzian(&phi, z)?;
    let text = match format {
        Format::Csv => format!(
            "z_re,z_im,s_re,s_im\n{},{},{},{}\n",
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(s.re),
            fmt_f64(s.im)
        ),
        Format::Json => json!({ "z": [z.re, z.im], "schwarzian": [s.re, s.im] }).to_string() + "\n",
    };
    Ok(Output::ok(text))
}

pub fn schwarzian_sup(spec: &MapSpec, grid: usize, format: Format) -> Result<Output> {
    let phi = spec.spec.build_analytic()?;
    let norm = schwarzian_norm(&phi, grid)?;
    let text = match format {
        Format::Csv => format!("grid,norm\n{grid},{}\n", fmt_f64(norm)),
        Format::Json => json!({ "grid": grid, "norm": norm }).to_string() + "\n",
    };
    Ok(Output::ok(text))
}

pub fn render(spec: &MapSpec, rspec: &RenderSpec) -> Result<Output> {
    let f = spec.spec.build()?;
    Ok(Output {
        body: render::render(&f, rspec)?,
        code: exit::OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_map_spec;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(
            parse_complex("-0.5,0.25").unwrap(),
            Complex64::new(-0.5, 0.25)
        );
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn suites_parse() {
        assert_eq!("ode".parse::<Suite>().unwrap(), Suite::Ode);
        assert!(matches!(
            "nope".parse::<Suite>(),
            Err(CliError::UnknownSuite(_))
        ));
    }

    #[test]
    fn perturbation_flips_the_exit_code() {
        let opts = VerifyOptions {
            a: Some(2.0),
            big_r: Some(1.0),
            ..Default::default()
        };
        assert_eq!(verify(Suite::Marty, &opts).unwrap().code, exit::OK);
        let bad = VerifyOptions {
            perturb: Some((5, 1e-6)),
            ..opts
        };
        assert_eq!(
            verify(Suite::Marty, &bad).unwrap().code,
            exit::VERIFY_FAILED
        );
    }

    #[test]
    fn lens_coefficients() {
        let spec = parse_map_spec("lens:R=0.5").unwrap();
        let out = coeffs(&spec, 3, MAX_ORDER, Format::Csv).unwrap();
        let s = Series64::from_csv(out.text()).unwrap();
        let expected = [0.0, 0.5, 0.0, 0.125];
        for (n, e) in expected.iter().enumerate() {
            assert!((s.coeff(n) - Complex64::new(*e, 0.0)).norm() < 1e-15);
        }
    }
}
