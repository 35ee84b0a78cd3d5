//! End-to-end tests of the binary: exit codes, file artifacts, reported
//! values, and byte-level determinism across runs and thread counts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coherent-kit"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coherent-kit-test-{}-{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_at(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_passes_with_defaults_and_is_deterministic() {
    let dir = workdir("verify");
    let out1 = dir.join("run1");
    let out2 = dir.join("run2");

    let o = run(&["verify", "--out", out1.to_str().unwrap()]);
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );

    let report = json_at(&out1.with_extension("report.json"));
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 25, "only {} checks", checks.len());
    assert_eq!(report["summary"]["pass"], serde_json::json!(true));
    for check in checks {
        assert_eq!(check["pass"], serde_json::json!(true), "failing: {check}");
        let residual = check["residual"].as_f64().unwrap();
        let tolerance = check["tolerance"].as_f64().unwrap();
        assert!(residual <= tolerance);
    }

    // stdout carries one line per check
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.matches("[PASS]").count() >= 25);

    // byte-identical across runs
    let o2 = run(&["verify", "--out", out2.to_str().unwrap()]);
    assert!(o2.status.success());
    assert_eq!(
        fs::read(out1.with_extension("report.json")).unwrap(),
        fs::read(out2.with_extension("report.json")).unwrap()
    );
}

#[test]
fn verify_is_thread_count_independent() {
    let dir = workdir("threads");
    let capped = dir.join("capped");
    let auto = dir.join("auto");

    let o = bin()
        .args(["verify", "--out", capped.to_str().unwrap()])
        .env("COHERENT_KIT_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = bin()
        .args(["verify", "--out", auto.to_str().unwrap()])
        .env("COHERENT_KIT_THREADS", "0")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(
        fs::read(capped.with_extension("report.json")).unwrap(),
        fs::read(auto.with_extension("report.json")).unwrap()
    );
}

#[test]
fn verify_report_identities_come_from_the_known_set() {
    let allowed: &[&str] = &[
        "||psi||_x = ||psi||_p",
        "X = (lambda/sqrt2)(A + A†)",
        "P = (hbar/(i sqrt2 lambda))(A - A†)",
        "[A, A†] = I",
        "A psi_alpha = alpha psi_alpha",
        "psi(closed form) = psi(eigen equation)",
        "psi(closed form) = psi(number series)",
        "Delta_x Delta_p = hbar/2",
        "<XP + PX> - 2<X><P> = 0",
        "alpha = <X>/(sqrt2 lambda) + i lambda <P>/(sqrt2 hbar)",
        "min_beta ||(A† - beta) psi_alpha|| = 1",
        "min_beta ||(A† - beta) psi|| >= 1",
        "chi_0 = psi_0",
        "A chi_n = sqrt(n) chi_{n-1}",
        "A† chi_n = sqrt(n+1) chi_{n+1}",
        "<chi_m, chi_n> = delta_mn",
        "<chi_n, psi_alpha> = alpha^n/sqrt(n!) exp(-|alpha|^2/2)",
        "<psi_a, psi_b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)",
        "psi_alpha = D(alpha) psi_0",
        "D(a) D(b) = exp((a conj(b) - conj(a) b)/2) D(a+b)",
        "[A, D(alpha)] = alpha D(alpha)",
        "D†(alpha) D(alpha) = I",
        "D(alpha)^{-1} = D(-alpha)",
        "exp(R) exp(S) = exp(R+S) exp([R,S]/2)",
        "D(0) = I",
        "||U_t psi|| = ||psi||",
        "|psihat(p, t)| = |psihat(p, 0)|",
        "U_{-t} U_t psi = psi",
        "(A - t/(sqrt2 m lambda) P) Psi(t) = alpha Psi(t)",
        "min_beta ||(A - beta) Psi(t)|| = t/2",
        "Delta_x(t)^2 = Delta_x(0)^2 + (hbar t / (2 m Delta_x(0)))^2",
        "<X>(t) = x0 + p0 t / m",
        "[H, A] = -i hbar/(sqrt2 m lambda) P and [H, [H, A]] = 0",
        "integral |psi_a><psi_a| d^2a / pi = I",
        "integral a^n conj(a)^m exp(-|a|^2) d^2a = pi n! delta_nm",
        "chi_n = integral conj(a)^n/sqrt(n!) exp(-|a|^2/2) psi_a d^2a / pi",
        "rho_H(centroid) = 1/pi",
        "rho_H <= 1/pi",
        "rho_H >= 0",
        "integral rho_H dx dp = 2 hbar",
        "Var_H(x) = Delta_x^2 + lambda^2/2",
        "<F(A)> = integral F(a) |<psi_a, Psi>|^2 d^2a / pi",
    ];
    let dir = workdir("anchors");
    let out = dir.join("report");
    let o = run(&["verify", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let report = json_at(&out.with_extension("report.json"));
    for check in report["checks"].as_array().unwrap() {
        let identity = check["identity"].as_str().unwrap();
        assert!(
            allowed.contains(&identity),
            "unknown identity string: {identity}"
        );
    }
}

#[test]
fn coherent_emits_wavefunction_and_saturated_moments() {
    let dir = workdir("coherent");
    let out = dir.join("psi");
    let o = run(&[
        "coherent",
        "--x0",
        "1",
        "--p0",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );

    let csv = fs::read_to_string(out.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x,re,im");
    assert_eq!(csv.lines().count(), 1025);

    let m = json_at(&out.with_extension("moments.json"));
    let dx = m["delta_x"].as_f64().unwrap();
    let dp = m["delta_p"].as_f64().unwrap();
    assert!((dx * dp - 0.5).abs() <= 1e-8, "product {}", dx * dp);
    assert!((m["mean_x"].as_f64().unwrap() - 1.0).abs() <= 1e-8);
    assert_eq!(m["n_points"].as_i64().unwrap(), 1024);

    // determinism of the artifact bytes
    let out2 = dir.join("psi2");
    run(&[
        "coherent",
        "--x0",
        "1",
        "--p0",
        "0",
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(out.with_extension("csv")).unwrap(),
        fs::read(out2.with_extension("csv")).unwrap()
    );
}

#[test]
fn number_state_has_vanishing_mean() {
    let dir = workdir("number");
    let out = dir.join("chi");
    let o = run(&["number", "--n", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let m = json_at(&out.with_extension("moments.json"));
    assert!(m["mean_x"].as_f64().unwrap().abs() <= 1e-10);
    // delta_x^2 = 1.5 for n = 1 in natural units
    let dx = m["delta_x"].as_f64().unwrap();
    assert!((dx * dx - 1.5).abs() <= 1e-8, "delta_x^2 {}", dx * dx);
}

#[test]
fn evolve_trace_reports_spreading() {
    let dir = workdir("evolve");
    let out = dir.join("trace");
    let o = run(&[
        "evolve",
        "--x0",
        "0",
        "--p0",
        "0",
        "--t",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out.with_extension("csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,mean_x,mean_p,delta_x,delta_p,eigen_residual");
    assert_eq!(lines.len(), 12);
    let last: Vec<f64> = lines[11].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 1.0).abs() < 1e-12);
    assert!((last[3] - 1.0).abs() <= 1e-6, "delta_x(1) = {}", last[3]);
    assert!((last[5] - 0.5).abs() <= 1e-6, "eigen(1) = {}", last[5]);
}

#[test]
fn husimi_sidecar_reports_mass() {
    let dir = workdir("husimi");
    let out = dir.join("map");
    let o = run(&["husimi", "--x0", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let meta = json_at(&out.with_extension("meta.json"));
    let mass = meta["total_mass"].as_f64().unwrap();
    assert!((mass - 2.0).abs() <= 1e-4, "mass {mass}");
    assert_eq!(meta["coverage_warning"], serde_json::json!(false));
    let csv = fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x,p,rho_h");
    assert_eq!(csv.lines().count(), 128 * 128 + 1);
}

#[test]
fn expand_emits_poisson_coefficients() {
    let dir = workdir("expand");
    let out = dir.join("coeffs");
    let o = run(&[
        "expand",
        "--alpha-re",
        "1",
        "--n",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out.with_extension("csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,re,im");
    assert_eq!(lines.len(), 9);
    let c0: Vec<f64> = lines[1]
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((c0[0] - (-0.5f64).exp()).abs() <= 1e-8, "c_0 = {}", c0[0]);
    assert!(c0[1].abs() <= 1e-10);
}

#[test]
fn usage_errors_exit_with_two() {
    // unknown flag (clap)
    let o = run(&["coherent", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));

    // conflicting state selectors
    let o = run(&["coherent", "--x0", "1", "--alpha-re", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not both"));

    // invalid grid
    let o = run(&["coherent", "--n-points", "7"]);
    assert_eq!(o.status.code(), Some(2));

    // invalid thread cap
    let o = bin()
        .args(["verify"])
        .env("COHERENT_KIT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_failure_exits_with_three() {
    let o = run(&["coherent", "--out", "/nonexistent-dir-for-coherent-kit/out"]);
    assert_eq!(o.status.code(), Some(3));
}
