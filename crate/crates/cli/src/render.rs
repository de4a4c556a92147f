//! Images of polar grids: concentric circles and radii pushed through a map,
//! written as SVG polylines or a rasterized binary PPM.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use harmonic_koebe::Complex64;

use crate::error::{CliError, Result};
use crate::spec::Built;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Svg,
    Ppm,
}

/// Rectangle `[min.re, max.re] x [min.im, max.im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub min: Complex64,
    pub max: Complex64,
}

impl Window {
    pub fn new(min: Complex64, max: Complex64) -> Result<Self> {
        if !(min.re < max.re && min.im < max.im) {
            return Err(CliError::Usage(format!("empty window {min} .. {max}")));
        }
        Ok(Self { min, max })
    }

    fn width(&self) -> f64 {
        self.max.re - self.min.re
    }

    fn height(&self) -> f64 {
        self.max.im - self.min.im
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub rings: usize,
    pub spokes: usize,
    pub max_radius: f64,
    /// Vertices per circle and per radius.
    pub resolution: usize,
    pub format: ImageFormat,
    /// Side length of the square image in pixels.
    pub size: usize,
    /// `None` fits the image bounding box.
    pub window: Option<Window>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            rings: 8,
            spokes: 16,
            max_radius: 0.95,
            resolution: 256,
            format: ImageFormat::Svg,
            size: 512,
            window: None,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CliError::Usage(msg));
        if self.rings == 0 || self.spokes == 0 {
            return fail("rings and spokes must be at least 1".into());
        }
        if !(self.max_radius > 0.0 && self.max_radius < 1.0) {
            return fail(format!("max radius {} outside (0, 1)", self.max_radius));
        }
        if self.resolution < 2 {
            return fail("resolution must be at least 2".into());
        }
        if self.size == 0 || self.size > 16384 {
            return fail(format!("image size {} outside 1..=16384", self.size));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Complex64>,
    /// Circles are closed; the last vertex joins the first.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridImage {
    pub polylines: Vec<Polyline>,
    pub min: Complex64,
    pub max: Complex64,
}

impl GridImage {
    pub fn vertices(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.polylines.iter().flat_map(|p| p.points.iter().copied())
    }
}

/// Images of `rings` circles and, when `spokes >= 2`, of `spokes` radii.
/// A single spoke is not drawn, so `rings = spokes = 1` gives one circle.
pub fn grid_image(f: &Built, spec: &RenderSpec) -> Result<GridImage> {
    spec.validate()?;
    let m = spec.resolution;
    let mut pre: Vec<(Vec<Complex64>, bool)> = Vec::new();
    for k in 1..=spec.rings {
        let rho = spec.max_radius * k as f64 / spec.rings as f64;
        let circle = (0..m)
            .map(|j| Complex64::from_polar(rho, TAU * j as f64 / m as f64))
            .collect();
        pre.push((circle, true));
    }
    if spec.spokes >= 2 {
        for j in 0..spec.spokes {
            let theta = TAU * j as f64 / spec.spokes as f64;
            let spoke = (0..m)
                .map(|i| Complex64::from_polar(spec.max_radius * i as f64 / (m - 1) as f64, theta))
                .collect();
            pre.push((spoke, false));
        }
    }

    let mut min = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut max = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut polylines = Vec::with_capacity(pre.len());
    for (zs, closed) in pre {
        let mut points = Vec::with_capacity(zs.len());
        for z in zs {
            let w = f.eval(z)?;
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(CliError::Usage(format!("map is not finite at {z}")));
            }
            min = Complex64::new(min.re.min(w.re), min.im.min(w.im));
            max = Complex64::new(max.re.max(w.re), max.im.max(w.im));
            points.push(w);
        }
        polylines.push(Polyline { points, closed });
    }
    Ok(GridImage {
        polylines,
        min,
        max,
    })
}

/// Bounding box grown by 5% on each side; degenerate extents get width 1.
fn auto_window(img: &GridImage) -> Window {
    let mut w = (img.max.re - img.min.re).max(0.0);
    let mut h = (img.max.im - img.min.im).max(0.0);
    let c = (img.min + img.max) * 0.5;
    if w == 0.0 {
        w = 1.0;
    }
    if h == 0.0 {
        h = 1.0;
    }
    let half = Complex64::new(0.55 * w, 0.55 * h);
    Window {
        min: c - half,
        max: c + half,
    }
}

/// Six decimals, without a sign on zero.
fn coord(x: f64) -> String {
    let s = format!("{x:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => s,
    }
}

pub fn to_svg(img: &GridImage, spec: &RenderSpec) -> String {
    let win = spec.window.unwrap_or_else(|| auto_window(img));
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" height="{s}" viewBox="{} {} {} {}" preserveAspectRatio="xMidYMid meet">"#,
        coord(win.min.re),
        coord(-win.max.im),
        coord(win.width()),
        coord(win.height()),
        s = spec.size,
    );
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke">"#
    );
    for line in &img.polylines {
        let tag = if line.closed { "polygon" } else { "polyline" };
        let _ = write!(out, r#"<{tag} points=""#);
        for (i, w) in line.points.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            // SVG's y axis points down.
            let _ = write!(out, "{},{}", coord(w.re), coord(-w.im));
        }
        let _ = writeln!(out, r#""/>"#);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Binary P6 image: black grid lines on white, no anti-aliasing.
pub fn to_ppm(img: &GridImage, spec: &RenderSpec) -> Vec<u8> {
    let win = spec.window.unwrap_or_else(|| auto_window(img));
    let n = spec.size;
    let scale = (n as f64 - 1.0) / win.width().max(win.height());
    let cx = (win.min.re + win.max.re) / 2.0;
    let cy = (win.min.im + win.max.im) / 2.0;
    let mid = (n as f64 - 1.0) / 2.0;
    let to_px = |w: Complex64| {
        (
            (mid + (w.re - cx) * scale).round(),
            (mid - (w.im - cy) * scale).round(),
        )
    };

    let mut pixels = vec![255u8; 3 * n * n];
    let mut plot = |x: i64, y: i64| {
        if (0..n as i64).contains(&x) && (0..n as i64).contains(&y) {
            let i = 3 * (y as usize * n + x as usize);
            pixels[i..i + 3].fill(0);
        }
    };
    // Segments reaching far outside the canvas are skipped rather than walked.
    let limit = 8.0 * n as f64;
    for line in &img.polylines {
        let pts = &line.points;
        let count = if line.closed {
            pts.len()
        } else {
            pts.len().saturating_sub(1)
        };
        for i in 0..count {
            let (x0, y0) = to_px(pts[i]);
            let (x1, y1) = to_px(pts[(i + 1) % pts.len()]);
            if [x0, y0, x1, y1].iter().any(|v| v.abs() > limit) {
                continue;
            }
            bresenham(x0 as i64, y0 as i64, x1 as i64, y1 as i64, &mut plot);
        }
    }
    let mut out = format!("P6\n{n} {n}\n255\n").into_bytes();
    out.extend_from_slice(&pixels);
    out
}

fn bresenham(mut x0: i64, mut y0: i64, x1: i64, y1: i64, plot: &mut impl FnMut(i64, i64)) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        plot(x0, y0);
        if x0 == x1 && y0 == y1 {
            return;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

pub fn render(f: &Built, spec: &RenderSpec) -> Result<Vec<u8>> {
    let img = grid_image(f, spec)?;
    Ok(match spec.format {
        ImageFormat::Svg => to_svg(&img, spec).into_bytes(),
        ImageFormat::Ppm => to_ppm(&img, spec),
    })
}
