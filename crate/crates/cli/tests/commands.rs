use std::process::Command;

use harmonic_koebe::{Complex64 as C, Series64};
use hkoebe_cli::commands::{self, parse_harmonic_csv, Format, VerifyOptions, MAX_ORDER};
use hkoebe_cli::render::{grid_image, RenderSpec};
use hkoebe_cli::{exit, parse_map_spec, CliError, Suite};

fn hkoebe(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hkoebe"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn assert_real_coeffs(s: &Series64, expected: &[f64], tol: f64) {
    assert_eq!(s.order() + 1, expected.len());
    for (n, e) in expected.iter().enumerate() {
        assert!(
            (s.coeff(n) - C::new(*e, 0.0)).norm() <= tol,
            "n={n}: {} vs {e}",
            s.coeff(n)
        );
    }
}

#[test]
fn koebe_coefficients_through_the_binary() {
    let (code, out, _) = hkoebe(&["coeffs", "koebe", "--n", "4"]);
    assert_eq!(code, exit::OK);
    let s = Series64::from_csv(&out).unwrap();
    assert_real_coeffs(&s, &[0.0, 1.0, 2.0, 3.0, 4.0], 0.0);
}

#[test]
fn harmonic_koebe_coefficients() {
    let (code, out, _) = hkoebe(&["coeffs", "kar:a=2,R=1", "--n", "3"]);
    assert_eq!(code, exit::OK);
    let (h, g) = parse_harmonic_csv(&out).unwrap();
    assert_real_coeffs(&h, &[0.0, 1.0, 2.5, 14.0 / 3.0], 1e-14);
    assert_real_coeffs(&g, &[0.0, 0.0, 0.5, 5.0 / 3.0], 1e-14);
}

#[test]
fn lens_coefficients_in_json() {
    let (code, out, _) = hkoebe(&["coeffs", "lens:R=0.5", "--n", "3", "--format", "json"]);
    assert_eq!(code, exit::OK);
    let s = Series64::from_json(out.trim()).unwrap();
    assert_real_coeffs(&s, &[0.0, 0.5, 0.0, 0.125], 1e-15);
}

#[test]
fn coefficient_dumps_reparse_bit_for_bit() {
    for text in ["gkoebe:a=1.5,0.3", "lens:R=0.7", "k0", "hp-phi"] {
        let spec = parse_map_spec(text).unwrap();
        let series = spec.spec.build_analytic().unwrap().series(40).unwrap();
        for format in [Format::Csv, Format::Json] {
            let out = commands::coeffs(&spec, 40, MAX_ORDER, format).unwrap();
            let back = match format {
                Format::Csv => Series64::from_csv(out.text()).unwrap(),
                Format::Json => Series64::from_json(out.text().trim()).unwrap(),
            };
            for (x, y) in back.coeffs().iter().zip(series.coeffs()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits(), "{text}");
                assert_eq!(x.im.to_bits(), y.im.to_bits(), "{text}");
            }
        }
    }
    let spec = parse_map_spec("kar:a=1.2,R=0.7").unwrap();
    let (h, g) = spec.spec.build_harmonic().unwrap().series(40).unwrap();
    let out = commands::coeffs(&spec, 40, MAX_ORDER, Format::Csv).unwrap();
    let (h2, g2) = parse_harmonic_csv(out.text()).unwrap();
    assert_eq!(h.coeffs(), h2.coeffs());
    assert_eq!(g.coeffs(), g2.coeffs());
}

#[test]
fn order_above_the_limit_is_a_usage_error() {
    let (code, _, err) = hkoebe(&["coeffs", "koebe", "--n", "300"]);
    assert_eq!(code, exit::USAGE, "{err}");
    let (code, _, _) = hkoebe(&["coeffs", "koebe", "--n", "300", "--max-n", "400"]);
    assert_eq!(code, exit::OK);
}

#[test]
fn spec_errors_name_token_and_position() {
    let (code, _, err) = hkoebe(&["coeffs", "kar:a=2,Q=1"]);
    assert_eq!(code, exit::USAGE);
    assert!(err.contains("position 8") && err.contains("\"Q\""), "{err}");
    let (code, _, err) = hkoebe(&["coeffs", "lens:R=1.5"]);
    assert_eq!(code, exit::USAGE);
    assert!(err.contains("out of range"), "{err}");
}

#[test]
fn eval_matches_the_library() {
    let (code, out, _) = hkoebe(&["eval", "halfplane", "--z", "-0.9", "--z", "0.3,-0.2"]);
    assert_eq!(code, exit::OK);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    // f(-r) = -r/(1+r) on the real axis
    assert!((rows[0][2] + 0.9 / 1.9).abs() < 1e-15 && rows[0][3] == 0.0);
    let f = parse_map_spec("halfplane")
        .unwrap()
        .spec
        .build_harmonic()
        .unwrap();
    let w = f.eval(C::new(0.3, -0.2)).unwrap();
    assert_eq!((rows[1][2], rows[1][3]), (w.re, w.im));
}

#[test]
fn verify_examples_pass() {
    for args in [
        &["verify", "marty", "--a", "2", "--R", "1"][..],
        &[
            "verify", "symmetry", "--which", "iii", "--a", "1.2", "--R", "0.7",
        ],
        &["verify", "ode", "--a", "0"],
        &["verify", "dilatation", "--a", "1", "--R", "0.5"],
        &["verify", "bounds", "--a", "2", "--R", "1"],
        &["verify", "expansion"],
    ] {
        let (code, out, err) = hkoebe(args);
        assert_eq!(code, exit::OK, "{args:?}: {out}{err}");
        for line in out.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["pass"], true, "{line}");
        }
    }
    let (_, out, _) = hkoebe(&["verify", "marty", "--a", "2", "--R", "1"]);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert!(first["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn corrupted_coefficient_forces_failure() {
    for suite in ["marty", "ode", "symmetry"] {
        let (code, out, _) = hkoebe(&[
            "verify",
            suite,
            "--a",
            "1.2",
            "--R",
            "0.7",
            "--perturb",
            "3:1e-8",
        ]);
        assert_eq!(code, exit::VERIFY_FAILED, "{suite}: {out}");
        assert!(out.contains("\"pass\":false"));
    }
    let opts = VerifyOptions {
        a: Some(2.0),
        big_r: Some(1.0),
        atol: Some(1e-30),
        ..Default::default()
    };
    assert_eq!(
        commands::verify(Suite::Ode, &opts).unwrap().code,
        exit::VERIFY_FAILED
    );
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let (code, _, err) = hkoebe(&["verify", "nope"]);
    assert_eq!(code, exit::USAGE);
    assert!(err.contains("nope"));
    assert!(matches!(
        "nope".parse::<Suite>(),
        Err(CliError::UnknownSuite(_))
    ));
}

fn witness_row(out: &str) -> Option<Vec<String>> {
    out.lines()
        .nth(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
}

#[test]
fn collide_examples() {
    let (code, out, _) = hkoebe(&["collide", "--a", "2.5", "--R", "0.5"]);
    assert_eq!(code, exit::WITNESS);
    let row = witness_row(&out).unwrap();
    let z1: C = row[0].parse().unwrap();
    assert!((z1 - C::new(0.0, 0.726_543)).norm() < 1e-6, "{z1}");
    assert!(row[2].parse::<f64>().unwrap() <= 1e-8);

    let (code, out, _) = hkoebe(&["collide", "--a", "2", "--R", "1", "--samples", "5000"]);
    assert_eq!(code, exit::OK);
    assert!(witness_row(&out).is_none());

    let (code, out, _) = hkoebe(&["collide", "--a", "-3", "--R", "0"]);
    assert_eq!(code, exit::WITNESS);
    let row = witness_row(&out).unwrap();
    assert!(row[2].parse::<f64>().unwrap() <= 1e-8);
}

#[test]
fn bounds_commands() {
    let (code, out, _) = hkoebe(&["bounds", "--alpha", "3", "--r", "0.5"]);
    assert_eq!(code, exit::OK);
    let v: Vec<f64> = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((v[2] - 13.0 / 81.0).abs() < 1e-14 && (v[3] - 13.0 / 3.0).abs() < 1e-13);
    assert!((v[4] - 4.0 / 81.0).abs() < 1e-15 && (v[5] - 36.0).abs() < 1e-12);

    let (code, out, _) = hkoebe(&[
        "bounds", "--a", "2", "--R", "1", "--r", "0.5", "--format", "json",
    ]);
    assert_eq!(code, exit::OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["pass"], true);
    let m = v["params"]["upper_growth"]["measured"].as_f64().unwrap();
    assert!((m - 13.0 / 3.0).abs() < 1e-9);

    let (code, _, _) = hkoebe(&["bounds", "--alpha", "0.5", "--r", "0.5"]);
    assert_eq!(code, exit::ERROR);
}

#[test]
fn schwarzian_commands() {
    let (code, out, _) = hkoebe(&["schwarzian", "gkoebe:a=2", "--z", "0", "--format", "json"]);
    assert_eq!(code, exit::OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!((v["schwarzian"][0].as_f64().unwrap() + 6.0).abs() < 1e-12);

    let (code, out, _) = hkoebe(&["schwarzian", "gkoebe:a=2", "--grid", "16"]);
    assert_eq!(code, exit::OK);
    let norm: f64 = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 6.0).abs() < 1e-3);

    let (code, _, _) = hkoebe(&["schwarzian", "hkoebe", "--z", "0"]);
    assert_eq!(code, exit::USAGE);
}

fn svg_points(svg: &str) -> Vec<Vec<(f64, f64)>> {
    svg.lines()
        .filter_map(|l| l.split_once("points=\"").map(|(_, rest)| rest))
        .map(|rest| {
            rest.trim_end_matches("\"/>")
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), -y.parse::<f64>().unwrap())
                })
                .collect()
        })
        .collect()
}

#[test]
fn rendering_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, image) in [("kar:a=1.5,R=0.5", "svg"), ("gkoebe:a=2", "ppm")] {
        let paths: Vec<_> = (0..2)
            .map(|i| dir.path().join(format!("{i}.{image}")))
            .collect();
        for p in &paths {
            let (code, _, err) = hkoebe(&[
                "render",
                spec,
                "--image",
                image,
                "--size",
                "96",
                "--out",
                p.to_str().unwrap(),
            ]);
            assert_eq!(code, exit::OK, "{err}");
        }
        let a = std::fs::read(&paths[0]).unwrap();
        let b = std::fs::read(&paths[1]).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{spec}");
    }
}

#[test]
fn half_plane_image_stays_right_of_minus_one_half() {
    let (code, svg, _) = hkoebe(&["render", "halfplane"]);
    assert_eq!(code, exit::OK);
    let lines = svg_points(&svg);
    assert_eq!(lines.len(), 8 + 16);
    let min_re = lines
        .iter()
        .flatten()
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min);
    assert!(min_re > -0.5 - 1e-6, "{min_re}");
    assert!(min_re < -0.4);
}

#[test]
fn koebe_image_avoids_the_slit() {
    let spec = parse_map_spec("gkoebe:a=2").unwrap();
    let img = grid_image(&spec.spec.build().unwrap(), &RenderSpec::default()).unwrap();
    let gap = img
        .vertices()
        .filter(|w| w.re < -0.25)
        .map(|w| w.im.abs())
        .fold(f64::INFINITY, f64::min);
    assert!(gap > 0.0, "{gap}");
}

#[test]
fn one_ring_and_one_spoke_is_one_circle() {
    let (code, svg, _) = hkoebe(&[
        "render",
        "koebe",
        "--rings",
        "1",
        "--spokes",
        "1",
        "--resolution",
        "100",
    ]);
    assert_eq!(code, exit::OK);
    let lines = svg_points(&svg);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].len(), 100);
    assert_eq!(svg.matches("<polygon").count(), 1);
}

#[test]
fn bad_render_options_are_usage_errors() {
    let (code, _, _) = hkoebe(&["render", "koebe", "--max-radius", "1"]);
    assert_eq!(code, exit::USAGE);
    let (code, _, _) = hkoebe(&["render", "koebe", "--rings", "0"]);
    assert_eq!(code, exit::USAGE);
}

#[test]
fn window_overrides_the_view_box() {
    let (code, svg, _) = hkoebe(&["render", "koebe", "--window", "-1,-2,3,2"]);
    assert_eq!(code, exit::OK);
    assert!(
        svg.contains(r#"viewBox="-1.000000 -2.000000 4.000000 4.000000""#),
        "{}",
        &svg[..300]
    );
}
