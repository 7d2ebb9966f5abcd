use std::path::Path;
use std::process::{Command, Output};

use ftrpca::manifest::{decode_filter, RunManifest};
use ftrpca::tensor_file::{load_tensor, save_tensor};
use ftrpca_core::Tensor3;

fn ftrpca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftrpca"))
        .args(args)
        .env("FTRPCA_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = ftrpca(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn errors_are_json_lines_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ft3d");
    std::fs::write(&bad, b"NOPE\x01").unwrap();
    let out = ftrpca(&["spectrum", "--in", s(&bad), "--out", s(&dir.path().join("p.csv"))]);
    assert!(!out.status.success());
    let line = String::from_utf8(out.stderr).unwrap();
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["error"], "BadMagic");
    assert!(v["message"].as_str().unwrap().contains("FT3D"));
}

#[test]
fn spectrum_of_mode3_constant_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.ft3d");
    let out = dir.path().join("profile.csv");
    save_tensor(&Tensor3::from_fn([4, 3, 7], |i, j, _| (i * j) as f64 + 1.0).unwrap(), &input).unwrap();
    ok(&["spectrum", "--in", s(&input), "--out", s(&out)]);
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<(usize, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (b, n) = l.split_once(',').unwrap();
            (b.parse().unwrap(), n.parse().unwrap())
        })
        .collect();
    assert_eq!(csv.lines().next(), Some("band,nuclear_norm"));
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    assert!(rows[0].1 > 1.0);
    assert!(rows[1..].iter().all(|r| r.1 < 1e-9));
    assert!(dir.path().join("profile.csv.manifest.json").exists());
}

#[test]
fn phantom_rtpca_and_reproducible_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let noisy = dir.path().join("x.ft3d");
    let clean = dir.path().join("x0.ft3d");
    ok(&[
        "synth-phantom", "--size", "24", "--frames", "5", "--noise", "0.1", "--seed", "3",
        "--out", s(&noisy), "--out-clean", s(&clean),
    ]);
    let x = load_tensor(&noisy).unwrap();
    let x0 = load_tensor(&clean).unwrap();
    assert_eq!(x.dims(), [24, 24, 5]);
    let changed = x.as_slice().iter().zip(x0.as_slice()).filter(|(a, b)| a != b).count();
    assert!(changed <= (0.1 * x.len() as f64) as usize);

    let l1 = dir.path().join("l1.ft3d");
    let l2 = dir.path().join("l2.ft3d");
    let e1 = dir.path().join("e1.ft3d");
    let stdout = ok(&[
        "rtpca", "--in", s(&noisy), "--filter", "background", "--max-iter", "40",
        "--out-l", s(&l1), "--out-e", s(&e1),
    ]);
    assert!(stdout.contains("svd_calls=0"), "{stdout}");

    let manifest = RunManifest::load(dir.path().join("l1.ft3d.manifest.json")).unwrap();
    assert_eq!(manifest.command, "rtpca");
    assert_eq!(manifest.solves.len(), 1);
    let solve = &manifest.solves[0];
    assert_eq!(solve.svd_calls, 0);
    assert_eq!(solve.config.max_iter, 40);
    let alpha = decode_filter(&solve.config.filter).unwrap();
    assert_eq!(alpha.coeffs(), &[0.0, f64::INFINITY, f64::INFINITY]);
    assert!(manifest.inputs.contains_key(s(&noisy)));

    // Re-running the recorded arguments with a different output path
    // reproduces L bit for bit.
    let rerun: Vec<String> = manifest
        .args
        .iter()
        .map(|a| if a == s(&l1) { s(&l2).to_owned() } else { a.clone() })
        .collect();
    ok(&rerun.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(std::fs::read(&l1).unwrap(), std::fs::read(&l2).unwrap());
    let l = load_tensor(&l1).unwrap();
    let e = load_tensor(&e1).unwrap();
    assert_eq!(l.dims(), x.dims());
    assert_eq!(e.dims(), x.dims());
}

#[test]
fn background_on_synthetic_video() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let truth = dir.path().join("truth.png");
    ok(&[
        "synth-video", "--width", "48", "--height", "40", "--frames", "12", "--seed", "1",
        "--out", s(&frames), "--out-bg", s(&truth),
    ]);
    assert_eq!(std::fs::read_dir(&frames).unwrap().count(), 12);
    let bg = dir.path().join("bg.png");
    let stdout = ok(&["background", "--frames", s(&frames), "--out", s(&bg), "--truth", s(&truth)]);
    assert!(stdout.starts_with("svd_calls=0 "), "{stdout}");
    let mut lines = stdout.lines().skip(1);
    assert_eq!(lines.next(), Some("psnr,rse,age,peps,pceps,msssim"));
    let values: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(values[2] < 5.0, "AGE {}", values[2]);

    let manifest = RunManifest::load(dir.path().join("bg.png.manifest.json")).unwrap();
    assert_eq!(manifest.solves[0].svd_calls, 0);
    assert_eq!(manifest.inputs.len(), 2);
}

#[test]
fn metrics_on_identical_images() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("a.png");
    image::RgbImage::from_fn(16, 16, |x, y| image::Rgb([(x * 9) as u8, (y * 13) as u8, 40]))
        .save(&img)
        .unwrap();
    let out = dir.path().join("m.csv");
    let stdout = ok(&["metrics", "--ref", s(&img), "--test", s(&img), "--out", s(&out)]);
    let row: Vec<&str> = stdout.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "inf");
    assert_eq!(&row[1..5], &["0", "0", "0", "0"]);
    assert!((row[5].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout);
}

#[test]
fn denoise_image_improves_psnr() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("in.png");
    image::RgbImage::from_fn(24, 24, |x, y| {
        let v = (60 + 4 * x + 3 * y) as u8;
        image::Rgb([v, v / 2 + 20, 200 - v / 2])
    })
    .save(&img)
    .unwrap();
    let out = dir.path().join("clean.png");
    let noisy = dir.path().join("noisy.png");
    let stdout = ok(&[
        "denoise-image", "--in", s(&img), "--noise", "0.1", "--seed", "2",
        "--out-clean", s(&out), "--out-noisy", s(&noisy),
    ]);
    let psnr = |label: &str| -> f64 {
        let line = stdout.lines().find(|l| l.starts_with(label)).unwrap();
        line.split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!(psnr("recovered") > psnr("noisy") + 5.0, "{stdout}");
    let manifest = RunManifest::load(dir.path().join("clean.png.manifest.json")).unwrap();
    assert_eq!(manifest.seed, Some(2));
    let alpha = decode_filter(&manifest.solves[0].config.filter).unwrap();
    assert_eq!(alpha.coeffs(), &[0.35, 1.0]);
}

#[test]
fn compare_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let noisy = dir.path().join("x.ft3d");
    let clean = dir.path().join("x0.ft3d");
    ok(&[
        "synth-phantom", "--size", "24", "--frames", "21", "--noise", "0.1", "--seed", "0",
        "--out", s(&noisy), "--out-clean", s(&clean),
    ]);
    let table = dir.path().join("t.csv");
    let stdout = ok(&[
        "compare", "--in", s(&noisy), "--truth", s(&clean), "--max-iter", "60", "--out", s(&table),
    ]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "index,TNN,FTNN");
    assert!(lines[1].starts_with("PSNR,"));
    assert!(lines[2].starts_with("RSE,"));
    let manifest = RunManifest::load(dir.path().join("t.csv.manifest.json")).unwrap();
    let labels: Vec<&str> = manifest.solves.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["ftnn", "tnn"]);
    assert_eq!(manifest.solves[0].config.filter.len(), 11);
}
