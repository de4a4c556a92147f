//! Argument definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use harmonic_koebe::Complex64;

use crate::commands::{self, parse_complex, parse_perturb, Format, Output, Suite, VerifyOptions};
use crate::error::{CliError, Result};
use crate::render::{ImageFormat, RenderSpec, Window};
use crate::spec::MapSpec;

#[derive(Debug, Parser)]
#[command(
    name = "hkoebe",
    version,
    about = "Generalized analytic and harmonic Koebe functions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Truncation order.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    pub format: Format,
    /// Absolute tolerance override.
    #[arg(long, global = true)]
    pub atol: Option<f64>,
    /// Relative tolerance override.
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Offset into the quasi-random sample sequence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Taylor coefficients of a map (h and g for harmonic maps).
    Coeffs {
        spec: String,
        #[arg(long, default_value_t = commands::MAX_ORDER)]
        max_n: usize,
    },
    /// Values at points given as `re` or `re,im`.
    Eval {
        spec: String,
        /// Evaluation point; repeat for several.
        #[arg(long = "z", required = true, allow_hyphen_values = true, value_parser = parse_point)]
        points: Vec<Complex64>,
    },
    /// Run an invariant suite: marty, ode, symmetry, dilatation, bounds,
    /// schwarzian or expansion.
    Verify {
        suite: String,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long = "R", allow_negative_numbers = true)]
        big_r: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        /// Symmetry identity: i, ii, iii or all.
        #[arg(long)]
        which: Option<String>,
        /// Schwarzian mesh size.
        #[arg(long)]
        grid: Option<usize>,
        /// Add `delta` to coefficient `n` of h before checking (`n:delta`).
        #[arg(long, hide = true, value_parser = parse_perturb_arg)]
        perturb: Option<(usize, f64)>,
    },
    /// Search for two points with the same image under K_{a,R}.
    Collide {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "R", default_value_t = 0.0, allow_negative_numbers = true)]
        big_r: f64,
        #[arg(long, default_value_t = 5000)]
        samples: usize,
    },
    /// Growth and distortion bounds of order alpha, or their equality
    /// for K_{a,R} on the real axis.
    Bounds {
        #[arg(long, conflicts_with_all = ["a", "big_r"])]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long = "R", allow_negative_numbers = true)]
        big_r: Option<f64>,
        #[arg(long)]
        r: f64,
    },
    /// Schwarzian derivative at a point, or its weighted supremum.
    Schwarzian {
        spec: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        z: Option<Complex64>,
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
    /// Image of a polar grid as SVG or PPM.
    Render {
        spec: String,
        #[arg(long, default_value_t = 8)]
        rings: usize,
        #[arg(long, default_value_t = 16)]
        spokes: usize,
        #[arg(long, default_value_t = 0.95)]
        max_radius: f64,
        /// Vertices per circle and per radius.
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long, default_value = "svg", value_parser = parse_image)]
        image: ImageFormat,
        #[arg(long, default_value_t = 512)]
        size: usize,
        /// `re_min,im_min,re_max,im_max`; fitted to the image when absent.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<Window>,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_point(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_perturb_arg(s: &str) -> std::result::Result<(usize, f64), String> {
    parse_perturb(s).map_err(|e| e.to_string())
}

fn parse_image(s: &str) -> std::result::Result<ImageFormat, String> {
    match s {
        "svg" => Ok(ImageFormat::Svg),
        "ppm" => Ok(ImageFormat::Ppm),
        _ => Err(format!("unknown image format {s:?}; expected svg or ppm")),
    }
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let [x0, y0, x1, y1] = v[..] else {
        return Err("expected re_min,im_min,re_max,im_max".into());
    };
    Window::new(Complex64::new(x0, y0), Complex64::new(x1, y1)).map_err(|e| e.to_string())
}

impl Cli {
    /// Writes command output to `--out` or stdout.
    pub fn write(&self, body: &[u8]) -> std::io::Result<()> {
        use std::io::Write;
        match &self.global.out {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().write_all(body),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Coeffs { spec, max_n } => {
            let spec: MapSpec = spec.parse()?;
            commands::coeffs(&spec, g.n.unwrap_or(16), *max_n, g.format)
        }
        Command::Eval { spec, points } => commands::eval(&spec.parse()?, points, g.format),
        Command::Verify {
            suite,
            a,
            big_r,
            r,
            which,
            grid,
            perturb,
        } => {
            let suite: Suite = suite.parse()?;
            let opts = VerifyOptions {
                a: *a,
                big_r: *big_r,
                r: *r,
                which: which.clone(),
                n: g.n,
                grid: *grid,
                atol: g.atol,
                rtol: g.rtol,
                seed: g.seed,
                perturb: *perturb,
            };
            commands::verify(suite, &opts)
        }
        Command::Collide { a, big_r, samples } => {
            commands::collide(*a, *big_r, *samples, g.seed, g.format)
        }
        Command::Bounds { alpha, a, big_r, r } => match (alpha, a, big_r) {
            (Some(alpha), None, None) => commands::bounds(*alpha, *r, g.format),
            (None, Some(a), Some(big_r)) => commands::bounds_equality(*a, *big_r, *r, g.format),
            _ => Err(CliError::Usage(
                "bounds needs --alpha, or both --a and --R".into(),
            )),
        },
        Command::Schwarzian { spec, z, grid } => {
            let spec: MapSpec = spec.parse()?;
            match z {
                Some(z) => commands::schwarzian_at(&spec, *z, g.format),
                None => commands::schwarzian_sup(&spec, *grid, g.format),
            }
        }
        Command::Render {
            spec,
            rings,
            spokes,
            max_radius,
            resolution,
            image,
            size,
            window,
        } => {
            let rspec = RenderSpec {
                rings: *rings,
                spokes: *spokes,
                max_radius: *max_radius,
                resolution: *resolution,
                format: *image,
                size: *size,
                window: *window,
            };
            commands::render(&spec.parse()?, &rspec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_arguments_parse() {
        let cli = Cli::try_parse_from(["hkoebe", "collide", "--a", "-3", "--R", "0"]).unwrap();
        assert!(matches!(cli.command, Command::Collide { a, .. } if a == -3.0));
        let cli = Cli::try_parse_from([
            "hkoebe",
            "eval",
            "koebe",
            "--z",
            "-0.5,0.25",
            "--format",
            "json",
        ])
        .unwrap();
        assert_eq!(cli.global.format, Format::Json);
    }
}
