use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polarlink::media::{GrayImage, PcmSignal};
use polarlink::polar::CodeConfig;

fn polarlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarlink"))
        .args(args)
        .env_remove("POLARLINK_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = polarlink(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_writes_code_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("code.json");
    ok(&[
        "construct", "--channel", "awgn", "--param", "1.0", "--n", "6", "--rate", "0.5", "--rule", "type1", "--z0",
        "proposed", "--out", p(&json),
    ]);
    let code: CodeConfig = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!((code.block_len(), code.info_len()), (64, 32));
    let csv = fs::read_to_string(dir.path().join("code.z.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(lines.next(), Some("index,z"));
    assert_eq!(lines.count(), 64);
}

#[test]
fn construct_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    assert!(!polarlink(&["construct", "--channel", "bec", "--param", "1.5", "--n", "4", "--rate", "0.5", "--out", p(&out)])
        .status
        .success());
    assert!(!polarlink(&["construct", "--channel", "awgn", "--param", "1", "--n", "4", "--rate", "0.5", "--rule", "type9", "--out", p(&out)])
        .status
        .success());
    assert!(!polarlink(&["construct", "--channel", "awgn", "--param", "1", "--n", "4", "--rate", "0.5", "--z0", "hybrid", "--out", p(&out)])
        .status
        .success());
}

#[test]
fn export_zvector_matches_bec_example() {
    let csv = ok(&["export-zvector", "--channel", "bec", "--param", "0.5", "--n", "2", "--rule", "bec"]);
    let z: Vec<f64> = csv
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(z, vec![0.9375, 0.5625, 0.4375, 0.0625]);
}

#[test]
fn simulate_is_reproducible_and_worker_independent() {
    let args = ["simulate", "--channel", "awgn", "--snr-db", "0,2", "--n", "6", "--rate", "0.5", "--frames", "2000", "--seed", "7"];
    let one = ok(&[&args[..], &["--workers", "1"]].concat());
    let many = ok(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one, many);
    assert!(one.starts_with("# schema=1\n"));
    assert_eq!(one.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn simulate_reads_toml_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(
        &cfg,
        "channel = \"bec\"\nepsilon = [0.2, 0.4]\nn = 5\nrate = 0.25\nrule = \"bec\"\nframes = 500\nseed = 3\n",
    )
    .unwrap();
    let from_file = ok(&["simulate", "--config", p(&cfg)]);
    assert!(from_file.contains("frames=500 seed=3"));
    assert!(from_file.contains("\nepsilon,frames,"));
    let overridden = ok(&["simulate", "--config", p(&cfg), "--seed", "4"]);
    assert!(overridden.contains("seed=4"));

    let env = Command::new(env!("CARGO_BIN_EXE_polarlink"))
        .args(["simulate", "--channel", "bec", "--epsilon", "0.3", "--n", "4", "--frames", "10"])
        .env("POLARLINK_SEED", "99")
        .output()
        .unwrap();
    assert!(String::from_utf8(env.stdout).unwrap().contains("seed=99"));
}

#[test]
fn simulate_with_fixed_code_and_ldpc() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("c.json");
    ok(&["construct", "--channel", "bec", "--param", "0.3", "--n", "5", "--rate", "0.5", "--rule", "bec", "--out", p(&json)]);
    let out = ok(&["simulate", "--code", p(&json), "--channel", "bec", "--epsilon", "0", "--frames", "100"]);
    assert!(out.lines().last().unwrap().starts_with("0,100,16,0,0,0,0,"));
    let ldpc = ok(&["simulate", "--codec", "ldpc", "--n", "7", "--channel", "awgn", "--snr-db", "8", "--frames", "200"]);
    assert!(ldpc.contains("codec=ldpc"));
    assert!(!polarlink(&["simulate", "--channel", "awgn", "--snr-db", "1", "--frames", "0"]).status.success());
}

#[test]
fn compare_rules_emits_long_format() {
    let out = ok(&["compare-rules", "--n", "5", "--snr-db", "0,3", "--frames", "200", "--seed", "1"]);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "channel,rule,snr_db,ber,fer,frames,seed");
    assert_eq!(rows.len(), 1 + 2 * 3 * 2);
}

#[test]
fn transmit_image_over_clean_channel() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output, metrics) = (dir.path().join("in.pgm"), dir.path().join("out.pgm"), dir.path().join("m.csv"));
    let img = GrayImage::new(16, 8, (0..128).map(|i| (i * 2) as u8).collect()).unwrap();
    img.write_pgm(&input).unwrap();
    ok(&[
        "transmit-image", "--input", p(&input), "--output", p(&output), "--metrics", p(&metrics), "--channel", "awgn",
        "--snr-db", "30", "--n", "6", "--z0", "proposed", "--trials", "3",
    ]);
    assert_eq!(GrayImage::read_pgm(&output).unwrap(), img);
    let csv = fs::read_to_string(&metrics).unwrap();
    assert!(csv.contains("trial,psnr,blocks,block_errors,bit_errors"));
    assert_eq!(csv.lines().filter(|l| l.contains(",inf,")).count(), 3);
}

#[test]
fn transmit_speech_with_ldpc() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.wav");
    let output = dir.path().join("out.wav");
    let metrics = dir.path().join("m.csv");
    let frames = dir.path().join("f.csv");
    let samples: Vec<i16> = (0..800).map(|i| ((i as f64 * 0.2).sin() * 60.0) as i16).collect();
    PcmSignal::from_8bit(samples, 8000).unwrap().write_wav(&input).unwrap();
    ok(&[
        "transmit-speech", "--input", p(&input), "--output", p(&output), "--metrics", p(&metrics), "--frames-csv",
        p(&frames), "--codec", "ldpc", "--n", "7", "--channel", "bec", "--epsilon", "0", "--trials", "2",
    ]);
    let recon = PcmSignal::read_wav(&output).unwrap();
    assert_eq!(recon, PcmSignal::read_wav(&input).unwrap());
    let f = fs::read_to_string(&frames).unwrap();
    assert!(f.lines().skip(2).all(|l| l.ends_with(",0")));
    assert_eq!(f.lines().count(), 2 + 5);
}
