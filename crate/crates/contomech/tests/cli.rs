use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn contomech(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_contomech"));
    cmd.args(args).env("RUST_LOG", "warn");
    if let Some(t) = threads {
        cmd.env("CONTOMECH_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

const NOISY: &str = r#"
[scenario]
name = "custom"

[ensemble]
trajectories = 3
seed = 11

[integration]
dt = "0.5 ps"
steps = 60
output_every = 10
snapshot_every = 30

[grid]
n_points = 64
dx = "0.1 mm"

[photon]
dispersion = ["0 rad/s", "7e7 m/s"]
initial = "gaussian"
amplitude = "1e3 m^-1/2"
center = "3.2 mm"
width = "0.5 mm"

[phonon]
dispersion = ["6.28e9 rad/s"]

[coupling]
g_ppp = "1e3 Hz*m^1/2"

[bath]
kappa = "1e8 /s"
Gamma = "6.28e7 /s"
n_th = 10
sampling = "wigner"
"#;

#[test]
fn every_preset_validates() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["custom", "comb", "backward_gain", "intermodal_swap", "array_convergence", "regime_sweep"] {
        let out = contomech(&["preset", name], None);
        assert!(out.status.success(), "{name}");
        let path = dir.path().join(format!("{name}.toml"));
        fs::write(&path, &out.stdout).unwrap();
        let v = contomech(&["run", "--config", path.to_str().unwrap(), "--validate-only"], None);
        assert!(v.status.success(), "{name}: {}", String::from_utf8_lossy(&v.stderr));
    }
}

#[test]
fn validation_lists_every_offending_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(
        &path,
        "[scenario]\nname = \"regime_sweep\"\n[sweep]\nv2 = 7e7\nvb = \"6 km\"\npoints = 1\nspeed = 3\n[array]\nsites = [8]\n",
    )
    .unwrap();
    let out = contomech(&["run", "--config", path.to_str().unwrap(), "--validate-only"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["sweep.v2", "sweep.vb", "sweep.points", "sweep.speed", "array:"] {
        assert!(err.contains(key), "missing {key} in\n{err}");
    }
}

#[test]
fn bad_overrides_are_reported() {
    let out = contomech(&["run", "--scenario", "comb", "--dt-override", "1 ps", "--validate-only"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = contomech(&["run", "--scenario", "custom", "--dt-override", "1 m", "--validate-only"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--dt-override"));
    let out = contomech(&["run", "--scenario", "nonsense", "--validate-only"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn effective_config_replays_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noisy.toml");
    fs::write(&cfg, NOISY).unwrap();
    let (first, second, serial) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    let out = contomech(&["run", "--config", cfg.to_str().unwrap(), "--output", first.to_str().unwrap()], Some("3"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let eff = first.join("effective.toml");
    let out = contomech(&["run", "--config", eff.to_str().unwrap(), "--output", second.to_str().unwrap()], Some("2"));
    assert!(out.status.success());
    let out = contomech(&["run", "--config", eff.to_str().unwrap(), "--output", serial.to_str().unwrap()], Some("1"));
    assert!(out.status.success());
    let a = files(&first);
    assert!(a.iter().any(|(n, _)| n == "snapshot_00000030.cwom"));
    assert!(a.iter().any(|(n, _)| n == "observables.csv"));
    assert_eq!(a, files(&second));
    assert_eq!(a, files(&serial));

    // a different seed changes the noise
    let other = dir.path().join("d");
    let out = contomech(&["run", "--config", eff.to_str().unwrap(), "--output", other.to_str().unwrap(), "--seed", "12"], None);
    assert!(out.status.success());
    assert_ne!(fs::read(first.join("final.cwom")).unwrap(), fs::read(other.join("final.cwom")).unwrap());
}

#[test]
fn step_above_the_stability_estimate_fails_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noisy.toml");
    fs::write(&cfg, NOISY.replace("g_ppp = \"1e3 Hz*m^1/2\"", "g_ppp = \"1e12 Hz*m^1/2\"")).unwrap();
    let out = contomech(&["run", "--config", cfg.to_str().unwrap(), "--output", dir.path().join("o").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_outputs_name_units() {
    let dir = tempfile::tempdir().unwrap();
    let out = contomech(&["run", "--scenario", "regime_sweep", "--output", dir.path().to_str().unwrap()], None);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("regime_sweep.csv")).unwrap();
    assert!(csv.starts_with("g12 [Hz],re_lambda_plus [/m],im_lambda_plus [/m],re_lambda_minus [/m],im_lambda_minus [/m],D [/m^2],regime [1]\n"));
    assert_eq!(csv.lines().count(), 10_001);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "regime_sweep");
    assert!(report["threshold_osc_Hz"].as_f64().unwrap() > 0.0);
}
