//! Map-spec strings: `name[:key=val{,key=val}]`.
//!
//! Complex values are written `re` or `re,im`; the second number is the
//! token after the comma that has no `=`. Inside `shear:` the values of
//! `phi` and `omega` are themselves (analytic) specs.

use std::fmt;

use harmonic_koebe::scalar::unit;
use harmonic_koebe::shear::{
    half_plane, harmonic_koebe, make_generalized_harmonic_koebe, make_kar, shear,
};
use harmonic_koebe::{
    make_generalized_koebe, make_lens, AnalyticMap64, Complex64, GhkParams, HarmonicMap64,
};

use crate::error::{CliError, Result};

/// A parsed map spec together with the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub raw: String,
    pub spec: Spec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Koebe,
    GKoebe {
        a: Complex64,
    },
    K0,
    Lens {
        r: f64,
    },
    HalfPlanePhi,
    Identity,
    Zero,
    Linear {
        c: Complex64,
    },
    HKoebe,
    HalfPlane,
    Kar {
        a: f64,
        r: f64,
    },
    /// `lambda` and `mu` are arguments in degrees.
    Ghk {
        lambda: f64,
        a: Complex64,
        mu: f64,
        r: f64,
    },
    Shear {
        phi: Box<Spec>,
        omega: Box<Spec>,
        theta: f64,
    },
}

/// A constructed map.
#[derive(Debug, Clone)]
pub enum Built {
    Analytic(AnalyticMap64),
    Harmonic(HarmonicMap64),
}

impl Built {
    pub fn eval(&self, z: Complex64) -> harmonic_koebe::Result<Complex64> {
        match self {
            Built::Analytic(m) => m.value(z),
            Built::Harmonic(f) => f.eval(z),
        }
    }
}

impl Spec {
    pub fn is_analytic(&self) -> bool {
        matches!(
            self,
            Spec::Koebe
                | Spec::GKoebe { .. }
                | Spec::K0
                | Spec::Lens { .. }
                | Spec::HalfPlanePhi
                | Spec::Identity
                | Spec::Zero
                | Spec::Linear { .. }
        )
    }

    pub fn build(&self) -> Result<Built> {
        let analytic = |m| Ok(Built::Analytic(m));
        let harmonic = |f| Ok(Built::Harmonic(f));
        match self {
            Spec::Koebe => analytic(AnalyticMap64::koebe()),
            Spec::GKoebe { a } => analytic(make_generalized_koebe(*a)),
            Spec::K0 => analytic(AnalyticMap64::k0()),
            Spec::Lens { r } => analytic(make_lens(*r)?),
            Spec::HalfPlanePhi => analytic(AnalyticMap64::half_plane_phi()),
            Spec::Identity => analytic(AnalyticMap64::identity()),
            Spec::Zero => analytic(AnalyticMap64::zero()),
            Spec::Linear { c } => analytic(AnalyticMap64::linear(*c)),
            Spec::HKoebe => harmonic(harmonic_koebe()),
            Spec::HalfPlane => harmonic(half_plane()),
            Spec::Kar { a, r } => harmonic(make_kar(*a, *r)?),
            Spec::Ghk { lambda, a, mu, r } => {
                let p = GhkParams::new(unit(lambda.to_radians()), *a, unit(mu.to_radians()), *r)?;
                harmonic(make_generalized_harmonic_koebe(p)?)
            }
            Spec::Shear { phi, omega, theta } => {
                let phi = phi.build_analytic()?;
                let omega = omega.build_analytic()?;
                harmonic(shear(&phi, &omega, *theta)?)
            }
        }
    }

    pub fn build_analytic(&self) -> Result<AnalyticMap64> {
        match self.build()? {
            Built::Analytic(m) => Ok(m),
            Built::Harmonic(_) => Err(CliError::Usage(format!("{self} is not an analytic map"))),
        }
    }

    /// Harmonic view of the map; analytic maps get `g = 0`.
    pub fn build_harmonic(&self) -> Result<HarmonicMap64> {
        Ok(match self.build()? {
            Built::Analytic(m) => HarmonicMap64::from_analytic(m),
            Built::Harmonic(f) => f,
        })
    }
}

fn write_complex(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    if z.im == 0.0 {
        write!(f, "{}", z.re)
    } else {
        write!(f, "{},{}", z.re, z.im)
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spec::Koebe => f.write_str("koebe"),
            Spec::GKoebe { a } => {
                f.write_str("gkoebe:a=")?;
                write_complex(f, *a)
            }
            Spec::K0 => f.write_str("k0"),
            Spec::Lens { r } => write!(f, "lens:R={r}"),
            Spec::HalfPlanePhi => f.write_str("hp-phi"),
            Spec::Identity => f.write_str("id"),
            Spec::Zero => f.write_str("zero"),
            Spec::Linear { c } => {
                f.write_str("lin:c=")?;
                write_complex(f, *c)
            }
            Spec::HKoebe => f.write_str("hkoebe"),
            Spec::HalfPlane => f.write_str("halfplane"),
            Spec::Kar { a, r } => write!(f, "kar:a={a},R={r}"),
            Spec::Ghk { lambda, a, mu, r } => {
                write!(f, "ghk:lambda={lambda},a=")?;
                write_complex(f, *a)?;
                write!(f, ",mu={mu},R={r}")
            }
            Spec::Shear { phi, omega, theta } => {
                write!(f, "shear:phi={phi},omega={omega},theta={theta}")
            }
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

impl std::str::FromStr for MapSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        parse_map_spec(s)
    }
}

pub fn parse_map_spec(s: &str) -> Result<MapSpec> {
    Ok(MapSpec {
        raw: s.to_owned(),
        spec: parse_at(s, 0)?,
    })
}

/// A piece of the input with its byte offset in the full spec string.
#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    pos: usize,
}

fn parse_error(tok: Tok<'_>, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        pos: tok.pos,
        token: tok.text.to_owned(),
        msg: msg.into(),
    }
}

fn split_commas(s: &str, base: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == ',' {
            out.push(Tok {
                text: &s[start..i],
                pos: base + start,
            });
            start = i + 1;
        }
    }
    out.push(Tok {
        text: &s[start..],
        pos: base + start,
    });
    out
}

/// `key=value` entry; `extra` holds value continuations after commas.
#[derive(Debug)]
struct Entry<'a> {
    key: Tok<'a>,
    value: Tok<'a>,
    extra: Vec<Tok<'a>>,
}

fn split_key(tok: Tok<'_>) -> Option<(Tok<'_>, Tok<'_>)> {
    let eq = tok.text.find('=')?;
    Some((
        Tok {
            text: &tok.text[..eq],
            pos: tok.pos,
        },
        Tok {
            text: &tok.text[eq + 1..],
            pos: tok.pos + eq + 1,
        },
    ))
}

fn entries<'a>(
    tokens: &[Tok<'a>],
    starts_entry: impl Fn(Tok<'a>) -> bool,
) -> Result<Vec<Entry<'a>>> {
    let mut out: Vec<Entry<'a>> = Vec::new();
    for &tok in tokens {
        if starts_entry(tok) {
            let (key, value) =
                split_key(tok).ok_or_else(|| parse_error(tok, "expected key=value"))?;
            if out.iter().any(|e| e.key.text == key.text) {
                return Err(parse_error(key, "duplicate key"));
            }
            out.push(Entry {
                key,
                value,
                extra: Vec::new(),
            });
        } else {
            match out.last_mut() {
                Some(e) => e.extra.push(tok),
                None => return Err(parse_error(tok, "expected key=value")),
            }
        }
    }
    Ok(out)
}

/// Typed access to the entries of one spec.
struct Params<'a> {
    name: Tok<'a>,
    entries: Vec<Entry<'a>>,
}

impl<'a> Params<'a> {
    fn expect_keys(&self, allowed: &[&str]) -> Result<()> {
        for e in &self.entries {
            if !allowed.contains(&e.key.text) {
                return Err(parse_error(
                    e.key,
                    format!(
                        "unknown key for {}; expected one of {}",
                        self.name.text,
                        allowed.join(", ")
                    ),
                ));
            }
        }
        for key in allowed {
            if !self.entries.iter().any(|e| e.key.text == *key) {
                return Err(parse_error(self.name, format!("missing key {key}")));
            }
        }
        Ok(())
    }

    fn entry(&self, key: &str) -> &Entry<'a> {
        self.entries
            .iter()
            .find(|e| e.key.text == key)
            .expect("keys checked by expect_keys")
    }

    fn real(&self, key: &str) -> Result<f64> {
        let e = self.entry(key);
        if let Some(&tok) = e.extra.first() {
            return Err(parse_error(
                tok,
                format!("{key} takes a single real number"),
            ));
        }
        number(e.value, key)
    }

    fn complex(&self, key: &str) -> Result<Complex64> {
        let e = self.entry(key);
        let re = number(e.value, key)?;
        match e.extra.as_slice() {
            [] => Ok(Complex64::new(re, 0.0)),
            [im] => Ok(Complex64::new(re, number(*im, key)?)),
            [_, tok, ..] => Err(parse_error(*tok, format!("{key} takes re or re,im"))),
        }
    }
}

fn number(tok: Tok<'_>, key: &str) -> Result<f64> {
    let x: f64 = tok
        .text
        .trim()
        .parse()
        .map_err(|_| parse_error(tok, format!("{key} expects a number")))?;
    if !x.is_finite() {
        return Err(range(key, tok.text, "must be finite"));
    }
    Ok(x)
}

fn range(key: &str, value: impl fmt::Display, msg: &str) -> CliError {
    CliError::Range {
        key: key.to_owned(),
        value: value.to_string(),
        msg: msg.to_owned(),
    }
}

fn unit_interval(key: &str, r: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&r) {
        Ok(r)
    } else {
        Err(range(key, r, "must lie in [0, 1]"))
    }
}

fn parse_at(s: &str, base: usize) -> Result<Spec> {
    let (name, rest) = match s.find(':') {
        Some(i) => (
            Tok {
                text: &s[..i],
                pos: base,
            },
            Some((&s[i + 1..], base + i + 1)),
        ),
        None => (Tok { text: s, pos: base }, None),
    };
    let tokens = rest.map(|(r, b)| split_commas(r, b)).unwrap_or_default();

    if name.text == "shear" {
        let is_key = |t: Tok<'_>| {
            ["phi=", "omega=", "theta="]
                .iter()
                .any(|k| t.text.starts_with(k))
        };
        let params = Params {
            name,
            entries: entries(&tokens, is_key)?,
        };
        params.expect_keys(&["phi", "omega", "theta"])?;
        let nested = |key: &str| -> Result<Spec> {
            let e = params.entry(key);
            let end = e
                .extra
                .last()
                .map_or(e.value.pos + e.value.text.len(), |t| t.pos + t.text.len());
            let text = &s[e.value.pos - base..end - base];
            let spec = parse_at(text, e.value.pos)?;
            if !spec.is_analytic() {
                return Err(parse_error(
                    e.value,
                    format!("{key} must be an analytic map"),
                ));
            }
            Ok(spec)
        };
        let theta = params.real("theta")?;
        if !(0.0..std::f64::consts::PI).contains(&theta) {
            return Err(range("theta", theta, "must lie in [0, pi)"));
        }
        return Ok(Spec::Shear {
            phi: Box::new(nested("phi")?),
            omega: Box::new(nested("omega")?),
            theta,
        });
    }

    let params = Params {
        name,
        entries: entries(&tokens, |t| t.text.contains('='))?,
    };
    let spec = match name.text {
        "koebe" | "k0" | "hp-phi" | "id" | "zero" | "hkoebe" | "halfplane" => {
            if let Some(tok) = tokens.first() {
                return Err(parse_error(
                    *tok,
                    format!("{} takes no parameters", name.text),
                ));
            }
            match name.text {
                "koebe" => Spec::Koebe,
                "k0" => Spec::K0,
                "hp-phi" => Spec::HalfPlanePhi,
                "id" => Spec::Identity,
                "zero" => Spec::Zero,
                "hkoebe" => Spec::HKoebe,
                _ => Spec::HalfPlane,
            }
        }
        "gkoebe" => {
            params.expect_keys(&["a"])?;
            Spec::GKoebe {
                a: params.complex("a")?,
            }
        }
        "lens" => {
            params.expect_keys(&["R"])?;
            Spec::Lens {
                r: unit_interval("R", params.real("R")?)?,
            }
        }
        "lin" => {
            params.expect_keys(&["c"])?;
            Spec::Linear {
                c: params.complex("c")?,
            }
        }
        "kar" => {
            params.expect_keys(&["a", "R"])?;
            Spec::Kar {
                a: params.real("a")?,
                r: unit_interval("R", params.real("R")?)?,
            }
        }
        "ghk" => {
            params.expect_keys(&["lambda", "a", "mu", "R"])?;
            Spec::Ghk {
                lambda: params.real("lambda")?,
                a: params.complex("a")?,
                mu: params.real("mu")?,
                r: unit_interval("R", params.real("R")?)?,
            }
        }
        _ => return Err(parse_error(name, "unknown map name")),
    };
    Ok(spec)
}
