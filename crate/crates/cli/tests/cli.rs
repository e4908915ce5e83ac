use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn liftcodec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liftcodec"))
        .args(args)
        .env_remove("LIFTCODEC_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = liftcodec(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn synth(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut args = vec!["synth", "-o", &path, "--width", "48", "--height", "40", "--frames", "6"];
    args.extend_from_slice(extra);
    ok(&args);
    path
}

const DIMS: [&str; 6] = ["--width", "48", "--height", "40", "--frames", "6"];

#[test]
fn encode_decode_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let raw = synth(dir.path(), "in.raw", &["--noise-sigma", "8", "--seed", "4"]);
    let stream = dir.path().join("s.wlpc");
    let back = dir.path().join("out.raw");
    let stream = stream.to_str().unwrap();
    let back = back.to_str().unwrap();
    let mut enc = vec!["encode", "-i", &raw, "-o", stream, "--mode", "WLDPU", "--filter", "gif", "--xi", "16"];
    enc.extend_from_slice(&DIMS);
    ok(&enc);
    ok(&["decode", "-i", stream, "-o", back]);
    assert_eq!(fs::read(&raw).unwrap(), fs::read(back).unwrap());
}

#[test]
fn base_layer_decode_emits_half_the_frames() {
    let dir = tempfile::tempdir().unwrap();
    let raw = synth(dir.path(), "in.raw", &["--noise-sigma", "5"]);
    let stream = dir.path().join("s.wlpc").to_str().unwrap().to_string();
    let bl = dir.path().join("bl.raw").to_str().unwrap().to_string();
    let pgm = dir.path().join("pgm").to_str().unwrap().to_string();
    let mut enc = vec!["encode", "-i", &raw, "-o", &stream];
    enc.extend_from_slice(&DIMS);
    ok(&enc);
    let out = ok(&["decode", "-i", &stream, "-o", &bl, "--layers", "bl", "--pgm", &pgm]);
    assert!(out.contains("frames=3"), "{out}");
    assert_eq!(fs::read(&bl).unwrap().len(), 3 * 48 * 40 * 2);
    assert_eq!(fs::read_dir(&pgm).unwrap().count(), 3);
}

#[test]
fn corrupt_header_fails_and_names_the_offset() {
    let dir = tempfile::tempdir().unwrap();
    let raw = synth(dir.path(), "in.raw", &[]);
    let stream = dir.path().join("s.wlpc").to_str().unwrap().to_string();
    let mut enc = vec!["encode", "-i", &raw, "-o", &stream];
    enc.extend_from_slice(&DIMS);
    ok(&enc);
    let mut bytes = fs::read(&stream).unwrap();
    bytes[13] = 0xEE;
    fs::write(&stream, &bytes).unwrap();
    let out = liftcodec(&["decode", "-i", &stream, "-o", dir.path().join("x").to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("offset 13"), "{err}");
}

#[test]
fn verify_reports_sizes_quality_and_losslessness() {
    let dir = tempfile::tempdir().unwrap();
    let raw = synth(dir.path(), "in.raw", &["--noise-sigma", "12", "--seed", "9"]);
    let mut args = vec!["verify", "-i", &raw, "--mode", "WLDPU", "--filter", "bm3d", "--xi", "100"];
    args.extend_from_slice(&DIMS);
    let out = ok(&args);
    assert!(out.contains("total_bytes="), "{out}");
    assert!(out.contains("psnr_lp_db="), "{out}");
    assert!(out.contains("lossless: yes"), "{out}");
}

#[test]
fn wrong_raw_size_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let raw = synth(dir.path(), "in.raw", &[]);
    let out = liftcodec(&["verify", "-i", &raw, "--width", "48", "--height", "40", "--frames", "8"]);
    assert!(!out.status.success());
}

#[test]
fn synth_prints_sigma_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--noise-sigma", "7.5", "--seed", "11", "--disk", "10,10,4,300,1,0"];
    let a = synth(dir.path(), "a.raw", &args);
    let b = synth(dir.path(), "b.raw", &args);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    let out = ok(&["synth", "-o", dir.path().join("c.raw").to_str().unwrap(), "--noise-sigma", "7.5"]);
    assert!(out.contains("noise_sigma=7.5"), "{out}");
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn sweep(dir: &Path, extra: &[&str], threads: &str) -> (Csv, Vec<u8>) {
    let path = dir.join(format!("sweep_{threads}.csv"));
    let mut args = vec!["sweep", "-o", path.to_str().unwrap(), "--width", "32", "--height", "32", "--frames", "4"];
    args.extend_from_slice(extra);
    let out = Command::new(env!("CARGO_BIN_EXE_liftcodec"))
        .args(&args)
        .env("LIFTCODEC_THREADS", threads)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = fs::read(&path).unwrap();
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (Csv { header, rows }, bytes)
}

#[test]
fn sweep_schema_baseline_and_exact_rel_delta() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, _) = sweep(
        dir.path(),
        &["--noise-sigma", "10", "--modes", "WLDU,WLDPU,MCTF,TRUNCATED", "--filters", "awf,identity", "--xi", "1..2,3/2"],
        "1",
    );
    assert_eq!(
        csv.header,
        [
            "mode",
            "filter",
            "xi",
            "lp_bytes",
            "hp_bytes",
            "mv_bytes",
            "total_bytes",
            "psnr_lp_db",
            "ssim_lp",
            "rel_delta_vs_mctf_pct"
        ]
    );
    // Baseline, 2 modes x 2 filters x 3 xi, one TRUNCATED row.
    assert_eq!(csv.rows.len(), 1 + 12 + 1);
    assert_eq!(csv.rows.iter().filter(|r| r[0] == "MCTF").count(), 1);
    assert_eq!(&csv.rows[0][..3], ["MCTF", "identity", "0"]);
    let base: f64 = csv.rows[0][6].parse().unwrap();
    for r in &csv.rows {
        let total: f64 = r[6].parse().unwrap();
        let parts: usize = r[3..6].iter().map(|v| v.parse::<usize>().unwrap()).sum();
        assert_eq!(parts + 21, total as usize);
        let rel: f64 = r[9].parse().unwrap();
        assert_eq!(rel, (total - base) / base * 100.0, "{r:?}");
        if r[1] == "identity" && r[0] != "TRUNCATED" {
            assert_eq!(r[3..], csv.rows[0][3..], "{r:?}");
        }
    }
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let extra = ["--noise-sigma", "6", "--seed", "2", "--modes", "WLDUr,WLDP", "--filters", "nlm,gif", "--xi", "1,8"];
    let (_, one) = sweep(dir.path(), &extra, "1");
    let (_, four) = sweep(dir.path(), &extra, "4");
    assert_eq!(one, four);
}

#[test]
fn sweep_with_only_mctf_is_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, _) = sweep(dir.path(), &["--modes", "MCTF", "--xi", "8"], "1");
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.rows[0][9].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn bad_arguments_fail() {
    assert!(!liftcodec(&["sweep", "-o", "/dev/null", "--modes", "MCTFX"]).status.success());
    assert!(!liftcodec(&["synth", "-o", "/dev/null", "--disk", "1,2"]).status.success());
}
