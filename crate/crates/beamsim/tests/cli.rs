use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn beamsim(args: &[&str], cfg: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beamsim"))
        .args(args)
        .arg("--config")
        .arg(cfg)
        .output()
        .expect("binary should run")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn writes_csv_and_prints_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", "[size-report]\nantennas = [256, 400]\n");
    let out = dir.path().join("size.csv");
    let o = beamsim(&["size-report", "--out", out.to_str().unwrap()], &cfg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("n400.chosen_p = 40"), "{stdout}");
    assert!(stdout.contains("n400.k = 10"));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# experiment = size-report\n"));
    assert!(csv.contains("# rng = ChaCha8"));
    assert!(!csv.contains('\r'));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "n_antennas,bound_wideband,bound_farfield,bound_gain,chosen_p,k,max_xi,max_xi_distance_m");
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", "");
    let o = beamsim(&["rayleigh-report"], &cfg);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("# experiment = rayleigh-report"));
    assert!(String::from_utf8(o.stderr).unwrap().contains("classical_rayleigh_m"));
}

#[test]
fn refuses_to_overwrite_without_force() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", "");
    let out = dir.path().join("r.csv");
    fs::write(&out, "keep me").unwrap();
    let o = beamsim(&["size-report", "--out", out.to_str().unwrap()], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_to_string(&out).unwrap(), "keep me");
    let o = beamsim(&["size-report", "--force", "--out", out.to_str().unwrap()], &cfg);
    assert!(o.status.success());
    assert!(fs::read_to_string(&out).unwrap().starts_with("# experiment"));
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    for text in ["n_antennas = 0", "subarrays = 7", "bogus_key = 1", "not toml ["] {
        let cfg = write_config(&dir, "bad.toml", text);
        let o = beamsim(&["rate-vs-distance"], &cfg);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(String::from_utf8(o.stderr).unwrap().contains("config error"));
    }
    let o = beamsim(&["rate-vs-distance"], &dir.path().join("missing.toml"));
    assert_eq!(o.status.code(), Some(1));
    let o = beamsim(&["no-such-experiment"], &dir.path().join("missing.toml"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3_and_leave_no_file() {
    let dir = TempDir::new().unwrap();
    // A user closer than any sub-array can tolerate: the sizing rule is infeasible.
    let cfg = write_config(&dir, "c.toml", "rho_l = 1e-6\nrho_h = 1.0\n");
    let out = dir.path().join("s.csv");
    let o = beamsim(&["size-report", "--out", out.to_str().unwrap()], &cfg);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.toml",
        "seed = 1\nsamples = 20\nsubcarriers = 16\nsnrs_db = [5.0]\nmethods = [\"pdf\"]\n",
    );
    let run = |seed: &str| {
        let o = beamsim(&["rate-vs-snr", "--seed", seed], &cfg);
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    let a = run("3");
    assert!(a.contains("# seed = 3"));
    assert_eq!(a, run("3"));
    assert_ne!(a, run("4"));
}

#[test]
fn repeated_config_merges_series() {
    let dir = TempDir::new().unwrap();
    let base = "subcarriers = 16\ndistance_points = 5\n";
    let a = write_config(&dir, "a.toml", &format!("{base}methods = [\"pdf\"]\n"));
    let b = write_config(&dir, "b.toml", &format!("{base}methods = [\"narrowband-focus\"]\n"));
    let o = Command::new(env!("CARGO_BIN_EXE_beamsim"))
        .args(["rate-vs-distance", "--config"])
        .arg(&a)
        .arg("--config")
        .arg(&b)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "distance_m,rate_pdf,ideal,rate_narrowband_focus");
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 6);

    let c = write_config(&dir, "c.toml", "subcarriers = 16\ndistance_points = 6\n");
    let o = Command::new(env!("CARGO_BIN_EXE_beamsim"))
        .args(["rate-vs-distance", "--config"])
        .arg(&a)
        .arg("--config")
        .arg(&c)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
