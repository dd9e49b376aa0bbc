use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wglab-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn wglab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wglab")).current_dir(dir).env_remove("WGLAB_OUT_DIR").args(args).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn repro_figures_are_byte_identical_across_runs_and_threads() {
    let dir = scratch("repro");
    for (out, threads) in [("a", "1"), ("b", "4")] {
        let o = wglab(&dir, &["repro", "all", "--out", out, "--threads", threads]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["fig5.1/fig5.1.csv", "fig7.2/fig7.2.csv", "bohr-table/orbits.csv", "width/report.json"] {
        let a = fs::read(dir.join("a").join(f)).unwrap();
        let b = fs::read(dir.join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let m = json(&dir.join("a/fig5.1/manifest.json"));
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
    assert_eq!(m["config_hash"], json(&dir.join("b/fig5.1/manifest.json"))["config_hash"]);
    let csv = fs::read_to_string(dir.join("a/fig5.1/fig5.1.csv")).unwrap();
    assert!(csv.starts_with("k,f_kg,f_schrod,f_clock\n"));
}

#[test]
fn invalid_subcommand_writes_nothing() {
    let dir = scratch("invalid");
    let o = wglab(&dir, &["transmogrify", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(fs::read_dir(&dir).unwrap().count(), 0);
    let o = wglab(&dir, &["bohr", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_config_names_the_location() {
    let dir = scratch("badcfg");
    fs::write(dir.join("c.json"), r#"{"equation": "nls", "grid": {"zmin": -8, "zmax": 8, "n": 1.5}}"#).unwrap();
    let o = wglab(&dir, &["soliton", "--config", "c.json", "--out", "s"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("grid.n"), "{err}");
    assert!(!dir.join("s").exists());
    fs::write(dir.join("d.json"), r#"{"k": 1, "k": 2}"#).unwrap();
    let o = wglab(&dir, &["kg", "--config", "d.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));
}

#[test]
fn cfl_violation_is_a_configuration_error() {
    let dir = scratch("cfl");
    fs::write(dir.join("c.json"), r#"{"courant": 2.0}"#).unwrap();
    let o = wglab(&dir, &["kg", "--config", "c.json", "--out", "k"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.join("k").exists());
}

#[test]
fn numerical_abort_exits_three_without_data_files() {
    let dir = scratch("abort");
    fs::write(
        dir.join("c.json"),
        r#"{"eq": "nlq", "init": {"profile": "sech", "a": 1, "v": 0.5}, "t_end": 0.1, "eps": 0.5}"#,
    )
    .unwrap();
    let o = wglab(&dir, &["soliton", "--config", "c.json", "--out", "s"]);
    assert_eq!(o.status.code(), Some(3));
    let report = json(&dir.join("s/report.json"));
    assert_eq!(report["status"], "aborted");
    assert!(!report["diagnostics"].as_array().unwrap().is_empty());
    assert!(!dir.join("s/snapshots.csv").exists());
    let names: Vec<String> =
        fs::read_dir(dir.join("s")).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(names.iter().all(|n| !n.contains(".tmp")), "{names:?}");
}

#[test]
fn env_var_sets_the_output_directory() {
    let dir = scratch("env");
    let o = Command::new(env!("CARGO_BIN_EXE_wglab"))
        .current_dir(&dir)
        .env("WGLAB_OUT_DIR", "from-env")
        .args(["dispersion", "--n", "11"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.join("from-env/dispersion.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn bohr_table_to_file() {
    let dir = scratch("bohr");
    let o = wglab(&dir, &["bohr", "--n", "1..10", "--out", "orbits.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.join("orbits.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,r,v_over_c,E_eV,M_over_hbar,N_quantization");
    assert_eq!(lines.len(), 11);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[3] + 13.6057).abs() < 1e-3);
    assert!(dir.join("orbits.manifest.json").exists());
}

#[test]
fn resolved_config_reloads_to_the_same_hash() {
    let dir = scratch("hash");
    fs::write(dir.join("c.json"), r#"{"eq": "nls", "init": {"profile": "sech", "a": 1}, "t_end": 0.01, "dt": 0.001}"#)
        .unwrap();
    let o = wglab(&dir, &["soliton", "--config", "c.json", "--out", "one"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m1 = json(&dir.join("one/manifest.json"));
    fs::write(dir.join("resolved.json"), m1["config"].to_string()).unwrap();
    let o = wglab(&dir, &["soliton", "--config", "resolved.json", "--out", "two"]);
    assert_eq!(o.status.code(), Some(0));
    let m2 = json(&dir.join("two/manifest.json"));
    assert_eq!(m1["config_hash"], m2["config_hash"]);
    assert_eq!(m1["seed"], 0);
    assert_eq!(fs::read(dir.join("one/conserved.csv")).unwrap(), fs::read(dir.join("two/conserved.csv")).unwrap());
    let o = wglab(&dir, &["soliton", "--config", "resolved.json", "--seed", "9", "--out", "three"]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(json(&dir.join("three/manifest.json"))["config_hash"], m1["config_hash"]);
}

#[test]
fn stationary_subcommands_read_potential_files() {
    let dir = scratch("stationary");
    fs::write(
        dir.join("barrier.json"),
        r#"{"kind": "piecewise", "segments": [
            {"z_start": -2, "z_end": 0, "V": 0},
            {"z_start": 0, "z_end": 1, "V": 1},
            {"z_start": 1, "z_end": 3, "V": 0}]}"#,
    )
    .unwrap();
    let o = wglab(&dir, &["stationary", "scatter", "--potential", "barrier.json", "--E", "0.5", "--out", "sc"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&dir.join("sc/report.json"));
    let (rp, tp) = (r["scalars"]["R"].as_f64().unwrap(), r["scalars"]["T"].as_f64().unwrap());
    assert!((rp + tp - 1.0).abs() < 1e-10);
    let csv = fs::read_to_string(dir.join("sc/wavefunction.csv")).unwrap();
    assert!(csv.starts_with("z,re,im,abs2,V\n"));

    let o = wglab(&dir, &["stationary", "scatter", "--potential", "barrier.json", "--E", "-1", "--out", "neg"]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(dir.join("well.json"), r#"{"kind": "harmonic", "stiffness": 1.0}"#).unwrap();
    let o = wglab(&dir, &["stationary", "bound", "--potential", "well.json", "--n", "3", "--out", "bd"]);
    assert_eq!(o.status.code(), Some(0));
    let e = fs::read_to_string(dir.join("bd/energies.csv")).unwrap();
    let energies: Vec<f64> = e.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for (n, en) in energies.iter().enumerate() {
        assert!((en - (n as f64 + 0.5)).abs() < 1e-6);
    }
}

#[test]
fn json_format_and_other_subcommands() {
    let dir = scratch("misc");
    let o = wglab(&dir, &["constants", "--out", "k"]);
    assert_eq!(o.status.code(), Some(0));
    let k = json(&dir.join("k/report.json"));
    assert!((k["scalars"]["waveguide_width"].as_f64().unwrap() - 1.2131551193e-12).abs() < 1e-20);

    let o = wglab(&dir, &["bohm", "qp", "--profile", "sech", "--a", "2", "--format", "json", "--out", "q"]);
    assert_eq!(o.status.code(), Some(0));
    let t = json(&dir.join("q/qp.json"));
    assert_eq!(t["columns"][0], "z");

    let o = wglab(&dir, &["zigzag", "--E", "0.8", "--n", "20000", "--seed", "5", "--out", "z"]);
    assert_eq!(o.status.code(), Some(0));
    let e = json(&dir.join("z/ensemble.json"));
    assert_eq!(e["seed"], 5);
    assert_eq!(e["rule"], "phase-window/1");
    let m = json(&dir.join("z/manifest.json"));
    assert_eq!(m["seed"], 5);

    let o = wglab(&dir, &["ambiguity", "widths", "--shape", "gaussian", "--out", "w"]);
    assert_eq!(o.status.code(), Some(0));
    let w = json(&dir.join("w/report.json"));
    assert!((w["scalars"]["product"].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let o = wglab(&dir, &["ambiguity", "--shape", "gaussian", "--out", "amb"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.join("amb/surface.csv")).unwrap();
    assert!(csv.starts_with("tau,fd,magnitude\n"));

    let o = wglab(&dir, &["kg", "--k", "2", "--steps", "400", "--out", "kg"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&dir.join("kg/report.json"));
    assert!(r["scalars"]["energy_drift"].as_f64().unwrap() < 1e-6);

    fs::write(dir.join("run.json"), r#"{"eq": "nls", "t_end": 0.01, "snapshot_every": 2, "dt": 0.001}"#).unwrap();
    let o = wglab(&dir, &["bohm", "residuals", "--run", "run.json", "--out", "res"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.join("res/residuals.csv").exists());
}
