use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FIG1: &str = "# fig1 geometry\nq=0.005\nN=1001\nx1=100\nxN=1100\nstate=phi+\nt_max=1300\nsteps=1301\n";

fn dephase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dephase"))
        .args(args)
        .env_remove("DEPHASE_LOG")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn evolve_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig1.cfg", FIG1);
    let out = dir.path().join("out.csv");
    let o = dephase(&["evolve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty() && o.stderr.is_empty());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,C,D,I,J,absF1,absF2\n"));
    assert_eq!(csv.lines().count(), 1302);
}

#[test]
fn evolve_without_out_prints_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "short.cfg", &FIG1.replace("steps=1301", "steps=3"));
    let o = dephase(&["evolve", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 4);
}

#[test]
fn figure_output_is_byte_deterministic_and_plot_independent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(dephase(&["figure", "fig1", "--out-dir", a.path().to_str().unwrap()]).status.success());
    assert!(dephase(&["figure", "fig1", "--out-dir", b.path().to_str().unwrap(), "--plot"]).status.success());
    for name in ["fig1_phi_plus.csv", "fig1_phi_minus.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
    assert!(b.path().join("fig1.svg").exists());
    assert!(!a.path().join("fig1.svg").exists());
}

#[test]
fn every_figure_renders() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for id in ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"] {
        let o = dephase(&["figure", id, "--out-dir", d, "--plot"]);
        assert!(o.status.success(), "{id}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let mut names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    let csvs: Vec<_> = names.iter().filter(|n| n.ends_with(".csv")).collect();
    assert_eq!(
        csvs,
        [
            "fig1_phi_minus.csv",
            "fig1_phi_plus.csv",
            "fig2.csv",
            "fig3_surface.csv",
            "fig4.csv",
            "fig5_phi_plus.csv",
            "fig5_psi_plus.csv",
            "fig6_surface.csv",
            "fig7.csv"
        ]
    );
}

#[test]
fn critical_times_and_compare_print_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig1.cfg", FIG1);
    let o = dephase(&["critical-times", "--config", &cfg, "--c3", "0.5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("sudden_death_time=2.0975"), "{text}");

    let o = dephase(&["critical-times", "--config", &cfg, "--c3", "-0.5"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("sudden_death_time=none"));

    let o = dephase(&["compare", "--config", &cfg]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("f2.max_rel_log_dev="));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    // usage
    assert_eq!(dephase(&[]).status.code(), Some(2));
    assert_eq!(dephase(&["bogus"]).status.code(), Some(2));
    assert_eq!(dephase(&["figure", "fig8", "--out-dir", d]).status.code(), Some(2));
    // parse
    let bad = write_config(dir.path(), "bad.cfg", &format!("{FIG1}c3=1.5\n"));
    let o = dephase(&["evolve", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let empty = write_config(dir.path(), "empty.cfg", "");
    assert_eq!(dephase(&["evolve", "--config", &empty]).status.code(), Some(2));
    // runtime
    let mismatch = write_config(dir.path(), "mm.cfg", &format!("{FIG1}xB=-200\nengine=limit-same\n"));
    let o = dephase(&["evolve", "--config", &mismatch]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let missing = dir.path().join("nope.cfg");
    assert_eq!(dephase(&["compare", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
    let cfg = write_config(dir.path(), "fig1.cfg", FIG1);
    assert_eq!(dephase(&["critical-times", "--config", &cfg, "--c3", "1.5"]).status.code(), Some(1));
    // help is not an error
    assert_eq!(dephase(&["--help"]).status.code(), Some(0));
}

#[test]
fn logging_goes_to_stderr_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "short.cfg", &FIG1.replace("steps=1301", "steps=3"));
    let quiet = dephase(&["evolve", "--config", &cfg]);
    let loud = Command::new(env!("CARGO_BIN_EXE_dephase"))
        .args(["evolve", "--config", &cfg])
        .env("DEPHASE_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(String::from_utf8_lossy(&loud.stderr).contains("evolving"));
}
