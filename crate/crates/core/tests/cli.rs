use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn legwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legwave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = legwave(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn rows(csv: &[u8]) -> Vec<Vec<f64>> {
    String::from_utf8(csv.to_vec())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn roundtrip_line(stderr: &[u8]) -> (f64, f64) {
    let text = String::from_utf8_lossy(stderr);
    let line = text
        .lines()
        .find(|l| l.starts_with("round trip:"))
        .expect("status line");
    let field = |key: &str| -> f64 {
        line.split_whitespace()
            .find_map(|w| w.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    (field("max_abs_error="), field("relative_l2_error="))
}

fn write_pgm(p: &Path, rows: usize, cols: usize, pixel: impl Fn(usize, usize) -> u8) {
    let mut bytes = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    for i in 0..rows {
        for j in 0..cols {
            bytes.push(pixel(i, j));
        }
    }
    std::fs::write(p, bytes).unwrap();
}

pub fn test_image(i: usize, j: usize) -> u8 {
    ((i * 7 + j * 13 + (i * j) % 11) % 256) as u8
}

#[test]
fn filters_legd2_writes_table_values() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "f.json");
    ok(&["filters", "legd2", "-o", s(&f)]);
    let h = floats(&json(&f)["h"]);
    let r2 = 2f64.sqrt();
    let want = [5.0, 3.0, 3.0, 5.0].map(|c| c * r2 / 16.0);
    assert_eq!(h.len(), 4);
    for (a, b) in h.iter().zip(want) {
        assert!((a - b).abs() <= 1e-15);
    }
    assert!((h[0] - 0.441941).abs() < 1e-6 && (h[1] - 0.265165).abs() < 1e-6);
}

#[test]
fn even_order_is_rejected() {
    let out = legwave(&["filters", "--v", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("order must be odd"));
    assert!(out.stdout.is_empty());
}

#[test]
fn filters_legd1_is_haar() {
    let out = ok(&["filters", "legd1"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for h in floats(&v["h"]) {
        assert!((h - 2f64.sqrt() / 2.0).abs() <= 1e-15);
    }
}

#[test]
fn response_rows() {
    let haar = rows(&ok(&["response", "legd1"]).stdout);
    assert_eq!(haar.len(), 1025);
    let dc = haar.iter().find(|r| r[0] == 0.0).expect("ω=0 row");
    assert!((dc[3] - 1.0).abs() <= 1e-12);

    let legd3 = rows(&ok(&["response", "legd3", "--grid", "4097"]).stdout);
    let last = legd3.last().unwrap();
    assert_eq!(last[0], std::f64::consts::PI);
    assert!(last[3] <= 1e-12);

    // Sign changes of the real amplitude e^{jvω/2}H(ω) on (−π, π], with the
    // Nyquist zero counted as the closing crossing.
    let amp: Vec<f64> = legd3
        .iter()
        .map(|r| {
            let (w, re, im) = (r[0], r[1], r[2]);
            let (c, s) = ((2.5 * w).cos(), (2.5 * w).sin());
            re * c - im * s
        })
        .collect();
    let interior = amp
        .windows(2)
        .filter(|w| w[0].abs() > 1e-12 && w[1].abs() > 1e-12 && (w[0] < 0.0) != (w[1] < 0.0))
        .count();
    assert_eq!(interior + usize::from(last[3] <= 1e-12), 5);

    let bad = legwave(&["response", "legd1", "--grid", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn wavefun_shapes() {
    let psi = rows(&ok(&["wavefun", "legd2", "--iter", "8", "--kind", "psi"]).stdout);
    assert_eq!(psi.first().unwrap()[0], 0.0);
    assert_eq!(psi.last().unwrap()[0], 3.0);
    assert!(psi.iter().all(|r| (0.0..=3.0).contains(&r[0])));

    let phi = rows(&ok(&["wavefun", "legd1", "--kind", "phi"]).stdout);
    for r in &phi {
        let want = if r[0] < 1.0 { 1.0 } else { 0.0 };
        assert_eq!(r[1], want, "t={}", r[0]);
    }

    let dir = TempDir::new().unwrap();
    let wp = path(&dir, "wp");
    ok(&["wavefun", "legd2", "--wp", "0..9", "-o", s(&wp)]);
    let mut names: Vec<_> = std::fs::read_dir(&wp)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut want: Vec<_> = (0..=9).map(|n| format!("wp_{n}.csv")).collect();
    want.sort();
    assert_eq!(names, want);
}

#[test]
fn wavefun_resource_limit_exits_3() {
    let out = legwave(&["wavefun", "legd8", "--iter", "40"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn dwt_idwt_haar_roundtrip() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "x.csv");
    let x: Vec<f64> = (0..32)
        .map(|i| ((i * 37 % 17) as f64 - 8.0) / 3.0)
        .collect();
    let text: String = x.iter().map(|v| format!("{v:?}\n")).collect();
    std::fs::write(&input, text).unwrap();
    let d = path(&dir, "d.json");
    let back = path(&dir, "back.csv");
    ok(&[
        "dwt",
        "legd1",
        "-i",
        s(&input),
        "--levels",
        "3",
        "-o",
        s(&d),
    ]);
    assert_eq!(json(&d)["levels"], 3);
    ok(&["idwt", "-i", s(&d), "-o", s(&back)]);
    let got: Vec<f64> = std::fs::read_to_string(&back)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse().unwrap())
        .collect();
    assert_eq!(got.len(), x.len());
    for (a, b) in got.iter().zip(&x) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn constant_image_has_empty_detail_bands() {
    let dir = TempDir::new().unwrap();
    let img = path(&dir, "c.pgm");
    write_pgm(&img, 16, 16, |_, _| 128);
    let out = path(&dir, "c.json");
    ok(&["dwt2", "legd2", "-i", s(&img), "-o", s(&out)]);
    let bands = &json(&out)["details"][0];
    for name in ["lh", "hl", "hh"] {
        for row in bands[name].as_array().unwrap() {
            for c in floats(row) {
                assert!(c.abs() <= 1e-12, "{name}");
            }
        }
    }
}

#[test]
fn haar_image_roundtrip_is_exact() {
    let dir = TempDir::new().unwrap();
    let img = path(&dir, "x.pgm");
    write_pgm(&img, 32, 16, test_image);
    let d = path(&dir, "x.json");
    let out = ok(&["dwt2", "legd1", "-i", s(&img), "--levels", "2", "-o", s(&d)]);
    let (max_abs, _) = roundtrip_line(&out.stderr);
    assert!(max_abs <= 1e-12);
    let back = path(&dir, "back.pgm");
    let out = ok(&["idwt2", "-i", s(&d), "--reference", s(&img), "-o", s(&back)]);
    assert!(roundtrip_line(&out.stderr).0 <= 1e-12);
    assert_eq!(std::fs::read(&back).unwrap(), std::fs::read(&img).unwrap());
}

#[test]
fn legd2_image_roundtrip_matches_library() {
    use legwave::transform::{dwt2d, idwt2d, Boundary};
    use nalgebra::DMatrix;

    let dir = TempDir::new().unwrap();
    let img = path(&dir, "x.pgm");
    write_pgm(&img, 64, 64, test_image);
    let d = path(&dir, "x.json");
    let out = ok(&["dwt2", "legd2", "-i", s(&img), "-o", s(&d)]);
    let (max_abs, rel) = roundtrip_line(&out.stderr);

    let f = legwave::FilterBank::legd(2).unwrap();
    let x = DMatrix::from_fn(64, 64, |i, j| test_image(i, j) as f64);
    let back = idwt2d(&dwt2d(&x, &f, 1, Boundary::Periodic).unwrap(), &f).unwrap();
    let lib_max = (&back - &x).amax();
    let lib_rel = (&back - &x).norm() / x.norm();
    assert!((max_abs - lib_max).abs() <= 1e-10);
    assert!((rel - lib_rel).abs() <= 1e-10);
    assert!((max_abs - LEGD2_64_MAX_ABS).abs() <= 1e-10, "{max_abs:?}");
    assert!((rel - LEGD2_64_REL_L2).abs() <= 1e-10, "{rel:?}");
}

const LEGD2_64_MAX_ABS: f64 = 136.40625000000006;
const LEGD2_64_REL_L2: f64 = 0.2295024533959557;

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let report = |name: &str| {
        let p = path(&dir, &format!("{name}.json"));
        ok(&["analyze", name, "-o", s(&p)]);
        json(&p)
    };
    assert_eq!(
        report("legd1")["orthogonality"]["defect"].as_f64(),
        Some(0.0)
    );
    let r2 = report("legd2");
    assert_eq!(
        r2["orthogonality"]["lag_autocorrelations"]["0"].as_f64(),
        Some(0.53125)
    );
    assert!(r2["reconstruction"]["operator_deviation"].as_f64().unwrap() > 0.1);
    assert!(
        report("legd3")["orthogonality"]["halfband_deviation"]
            .as_f64()
            .unwrap()
            > 0.01
    );
}

#[test]
fn io_failures_exit_4_without_output() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "d.json");
    let missing = path(&dir, "nope.csv");
    let r = legwave(&["dwt", "legd2", "-i", s(&missing), "-o", s(&out)]);
    assert_eq!(r.status.code(), Some(4));
    assert!(!out.exists());

    let nodir = path(&dir, "missing/sub/f.json");
    let r = legwave(&["filters", "legd2", "-o", s(&nodir)]);
    assert_eq!(r.status.code(), Some(4));
    assert!(!nodir.exists());
}

#[test]
fn failures_never_clobber_existing_output() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "x.csv");
    std::fs::write(&input, "1\n2\n3\n").unwrap();
    let out = path(&dir, "d.json");
    std::fs::write(&out, "previous").unwrap();
    let r = legwave(&["dwt", "legd2", "-i", s(&input), "-o", s(&out)]);
    assert_eq!(r.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert_eq!(stderr.trim_end().lines().count(), 1, "{stderr}");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "previous");
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 2);
}

#[test]
fn malformed_pgm_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let img = path(&dir, "bad.pgm");
    std::fs::write(&img, "P5\n4 4\n255\nxx").unwrap();
    let r = legwave(&["dwt2", "legd1", "-i", s(&img)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(r.stdout.is_empty());
}
