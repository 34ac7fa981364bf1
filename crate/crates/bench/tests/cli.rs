use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn clusterq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterq"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("spawn clusterq")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = clusterq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: [(&str, &[&str]); 4] = [
        ("fig_dephasing.csv", &["fig-dephasing", "--nmax", "5", "--no-meta"]),
        ("fig_noise.csv", &["fig-noise", "--nmax", "4", "--grid", "0:2:4", "--no-meta"]),
        ("stabilizer_chain5.csv", &["stabilizer-check", "--graph", "tests/data/chain5.txt", "--no-meta"]),
        ("concurrence_scan.csv", &["concurrence-scan", "--nmax", "4", "--grid", "0.25:1:3", "--no-meta"]),
    ];
    for (file, args) in cases {
        assert_eq!(stdout_ok(args), golden(file), "{file}");
    }
}

#[test]
fn golden_rows_carry_reference_values() {
    let deph = golden("fig_dephasing.csv");
    let ghz3 = deph.lines().find(|l| l.starts_with("GHZ,3,")).unwrap();
    let f: f64 = ghz3.rsplit(',').next().unwrap().parse().unwrap();
    assert!((f - 0.915136).abs() < 1e-6);
    assert_eq!(deph.lines().next(), Some("family,N,gamma,fidelity"));

    let noise = golden("fig_noise.csv");
    assert_eq!(noise.lines().nth(1), Some("3,0,1,1"));

    let stab = golden("stabilizer_chain5.csv");
    let rows: Vec<&str> = stab.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.ends_with(",1")));
}

#[test]
fn schemas_are_exact() {
    let header = |args: &[&str]| stdout_ok(args).lines().next().unwrap().to_string();
    assert_eq!(header(&["fig-noise", "--nmax", "3", "--grid", "0", "--no-meta"]), "N,lambda,fidelity_of_mean,mean_fidelity");
    assert_eq!(
        header(&["fig-cnot", "--grid", "0.1", "--samples", "4", "--no-meta"]),
        "config,sigma,mean,stderr,n_samples"
    );
    assert_eq!(header(&["wire-scan", "--lengths", "2", "--samples", "4", "--no-meta"]), "N,sigma,mean,stderr");
    assert_eq!(header(&["concurrence-scan", "--nmax", "3", "--no-meta"]), "N,sigma,i,j,concurrence,ppt_min_eig");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["fig-cnot", "--grid", "0.2:0.6:2", "--samples", "64", "--seed", "7", "--no-meta"];
    let a = stdout_ok(&args);
    assert_eq!(a, stdout_ok(&args));
    assert_eq!(a.lines().count(), 1 + 3 * 3);
    assert_ne!(a, stdout_ok(&["fig-cnot", "--grid", "0.2:0.6:2", "--samples", "64", "--seed", "8", "--no-meta"]));

    // With metadata only the timestamp line may differ.
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("# timestamp")).collect::<Vec<_>>().join("\n");
    let meta = ["wire-scan", "--samples", "32", "--seed", "3"];
    let m = stdout_ok(&meta);
    assert!(m.starts_with("# seed: 3\n# version: v"));
    assert_eq!(strip(m), strip(stdout_ok(&meta)));
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deph.csv");
    let p = path.to_str().unwrap();
    let out = clusterq(&["fig-dephasing", "--nmax", "5", "--no-meta", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), golden("fig_dephasing.csv"));
}

#[test]
fn exit_codes() {
    assert_eq!(clusterq(&["--help"]).status.code(), Some(0));
    assert_eq!(clusterq(&["--version"]).status.code(), Some(0));
    for bad in [&["no-such-command"][..], &["fig-noise", "--bogus"], &["fig-noise", "--grid", "2:1:3"], &[]] {
        let out = clusterq(bad);
        assert_eq!(out.status.code(), Some(1), "{bad:?}");
        assert!(!out.stderr.is_empty());
    }
    let runtime: [&[&str]; 4] = [
        &["stabilizer-check", "--graph", "tests/data/missing.txt"],
        &["fig-cnot", "--samples", "1", "--grid", "0.1"],
        &["concurrence-scan", "--nmax", "40"],
        &["fig-dephasing", "--out", "/nonexistent-dir/x.csv", "--nmax", "3"],
    ];
    for args in runtime {
        let out = clusterq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}
