use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dxz_core::matcore::{read_cmat, write_cmat};
use dxz_core::reference::{perm6_factors_m2, u6};
use dxz_core::structure::U2Parameters;
use dxz_core::{Complex64, ComplexMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn dxz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dxz")).args(args).output().expect("run dxz")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn save(dir: &TempDir, name: &str, m: &ComplexMatrix) -> PathBuf {
    let path = dir.path().join(name);
    write_cmat(&path, m).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn last_psi(report: &Value) -> f64 {
    report["psi_trace"].as_array().unwrap().last().unwrap()["psi"].as_f64().unwrap()
}

#[test]
fn decompose_reference_for_36_steps() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u.json", &u6());
    let out = dir.path().join("out");
    let o = dxz(&["decompose", s(&u), "--m", "2", "--max-iter", "36", "--out-dir", s(&out), "--json"]);
    assert_eq!(code(&o), 2, "not converged at the default target, but still a valid run");
    let report = json(&o);
    assert!(last_psi(&report) <= 0.005);
    assert_eq!(report["iterations_used"], 36);
    assert!(report["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-8);
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    for name in ["D", "X", "Z"] {
        assert_eq!(read_cmat(out.join(format!("{name}.json"))).unwrap().shape(), (6, 6));
    }
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(written["psi_trace"], report["psi_trace"]);
}

#[test]
fn decompose_identity_converges_immediately() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "i.json", &ComplexMatrix::identity(6));
    let o = dxz(&["decompose", s(&u), "--m", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let report = json(&o);
    assert_eq!(report["converged"], true);
    assert_eq!(report["iterations_used"], 0);
}

#[test]
fn decompose_rejects_bad_inputs() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u.json", &u6());
    assert_eq!(code(&dxz(&["decompose", s(&u), "--m", "5"])), 64);
    assert_eq!(code(&dxz(&["decompose", s(&u), "--m", "2", "--max-iter", "0"])), 64);
    assert_eq!(code(&dxz(&["decompose", "/nonexistent/u.json", "--m", "2"])), 65);
    let garbage = dir.path().join("g.json");
    std::fs::write(&garbage, "{not json").unwrap();
    let o = dxz(&["decompose", s(&garbage), "--m", "2"]);
    assert_eq!(code(&o), 65);
    assert!(!o.stderr.is_empty());
    let scaled = save(&dir, "s.json", &u6().scale(Complex64::new(1.5, 0.0)));
    assert_eq!(code(&dxz(&["decompose", s(&scaled), "--m", "2"])), 65);
}

#[test]
fn trace_table_rows() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u.json", &u6());
    let o = dxz(&["trace", s(&u), "--m", "1", "--max-iter", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<(usize, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 6);
    for (got, want) in rows.iter().zip([34.889, 4.407, 2.573]) {
        assert!((got.1 - want).abs() <= 0.05, "{text}");
    }
    // Three decimals.
    assert!(text.lines().nth(1).unwrap().trim_end().ends_with("34.889"));

    let o = dxz(&["trace", s(&u), "--m", "3", "--max-iter", "1"]);
    let first: f64 = stdout(&o).lines().nth(1).unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((first - 33.743).abs() <= 1e-3);

    let i = save(&dir, "i.json", &ComplexMatrix::identity(4));
    let o = dxz(&["trace", s(&i), "--m", "2"]);
    assert_eq!(stdout(&o).lines().skip(1).collect::<Vec<_>>(), vec!["  0      0.000"]);
}

#[test]
fn verify_hand_factorization_and_shuffle() {
    let dir = TempDir::new().unwrap();
    let f = perm6_factors_m2();
    let (u, d, x, z) = (save(&dir, "u.json", &f.u), save(&dir, "d.json", &f.d), save(&dir, "x.json", &f.x), save(&dir, "z.json", &f.z));
    let o = dxz(&["verify", "--u", s(&u), "--d", s(&d), "--x", s(&x), "--z", s(&z), "--m", "2", "--tol", "1e-12"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = dxz(&["verify", "--u", s(&u), "--d", s(&z), "--x", s(&x), "--z", s(&d), "--m", "2", "--tol", "1e-12", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["residuals"]["pass"], false);

    let small = save(&dir, "small.json", &ComplexMatrix::identity(4));
    assert_eq!(code(&dxz(&["verify", "--u", s(&u), "--d", s(&small), "--x", s(&x), "--z", s(&z), "--m", "2"])), 64);
}

#[test]
fn decompose_outputs_verify() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u.json", &u6());
    let out = dir.path().join("out");
    let o = dxz(&["decompose", s(&u), "--m", "2", "--psi-tol", "1e-12", "--max-iter", "2000", "--out-dir", s(&out)]);
    assert_eq!(code(&o), 0);
    let p = |n: &str| out.join(format!("{n}.json"));
    let o = dxz(&["verify", "--u", s(&u), "--d", s(&p("D")), "--x", s(&p("X")), "--z", s(&p("Z")), "--m", "2", "--tol", "1e-5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn default_run_satisfies_round_trip_tolerance() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3"] {
        let u = dir.path().join(format!("r{seed}.json"));
        assert_eq!(code(&dxz(&["random", "--n", "8", "--seed", seed, "-o", s(&u)])), 0);
        let out = dir.path().join(format!("o{seed}"));
        let o = dxz(&["decompose", s(&u), "--m", "4", "--out-dir", s(&out), "--json"]);
        let report = json(&o);
        let tol = (10.0 * last_psi(&report).max(0.0).sqrt()).max(1e-8).to_string();
        let p = |n: &str| out.join(format!("{n}.json"));
        let o = dxz(&["verify", "--u", s(&u), "--d", s(&p("D")), "--x", s(&p("X")), "--z", s(&p("Z")), "--m", "4", "--tol", &tol]);
        assert_eq!(code(&o), 0, "seed {seed}: {}", stdout(&o));
    }
}

#[test]
fn perm_examples() {
    let o = dxz(&["perm", "5 1 2 4 6 3", "--m", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("product check: exact"));

    let dir = TempDir::new().unwrap();
    let o = dxz(&["perm", "1 2 3 4", "--m", "2", "--out-dir", s(dir.path())]);
    assert_eq!(code(&o), 0);
    for name in ["D", "X", "Z"] {
        assert_eq!(read_cmat(dir.path().join(format!("{name}.json"))).unwrap(), ComplexMatrix::identity(4));
    }

    let o = dxz(&["perm", "2 1 4 3 6 5", "--m", "3", "--out-dir", s(dir.path()), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["residuals"]["pass"], true);
    let x = read_cmat(dir.path().join("X.json")).unwrap();
    for a in 0..6 {
        for b in 0..6 {
            if x[(a, b)] != Complex64::new(0.0, 0.0) {
                assert_eq!(a % 3, b % 3);
            }
        }
    }

    assert_eq!(code(&dxz(&["perm", "1 1 2", "--m", "1"])), 64);
    assert_eq!(code(&dxz(&["perm", "2 1 3", "--m", "2"])), 64);
}

#[test]
fn random_is_deterministic_and_unitary() {
    let a = dxz(&["random", "--n", "6", "--seed", "1"]);
    let b = dxz(&["random", "--n", "6", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let m = dxz_core::matcore::from_cmat_json(&stdout(&a)).unwrap();
    assert!(m.is_unitary(1e-12));
    let one = dxz_core::matcore::from_cmat_json(&stdout(&dxz(&["random", "--n", "1", "--seed", "9"]))).unwrap();
    assert!((one[(0, 0)].norm() - 1.0).abs() < 1e-15);
    assert_eq!(code(&dxz(&["random", "--n", "0"])), 64);
}

#[test]
fn biunitary_reference_and_identity() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u.json", &u6());
    let o = dxz(&["biunitary", s(&u), "--m", "2", "--psi-tol", "1e-12", "--max-iter", "2000", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["report"]["biunitary_residual"].as_f64().unwrap() <= 1e-4);
    let stacked = dxz_core::matcore::from_cmat_json(&v["v"].to_string()).unwrap();
    assert_eq!(stacked.submatrix(0, 0, 2, 2), ComplexMatrix::identity(2));

    let i = save(&dir, "i.json", &ComplexMatrix::identity(6));
    let v = json(&dxz(&["biunitary", s(&i), "--m", "3", "--json"]));
    let e = dxz_core::structure::BiunitaryVector::identity(&dxz_core::BlockPartition::new(6, 3).unwrap()).stacked();
    for key in ["v", "w"] {
        assert_eq!(dxz_core::matcore::from_cmat_json(&v[key].to_string()).unwrap(), e);
    }
}

#[test]
fn biunitary_two_by_two() {
    let a = U2Parameters {
        theta: 0.3,
        phi: 0.7,
        psi: 1.1,
        chi: -0.4,
    };
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u2.json", &a.matrix());
    let cis = |t: f64| Complex64::from_polar(1.0, t);
    let i = Complex64::i();

    let v = json(&dxz(&["biunitary", s(&u), "--m", "1", "--closed-form", "--json"]));
    let vs = dxz_core::matcore::from_cmat_json(&v["v"].to_string()).unwrap();
    let ws = dxz_core::matcore::from_cmat_json(&v["w"].to_string()).unwrap();
    assert!((vs[(0, 0)] - 1.0).norm() < 1e-8);
    assert!((vs[(1, 0)] - i * cis(a.psi - a.chi)).norm() < 1e-8);
    assert!((ws[(0, 0)] - cis(a.phi + a.theta + a.psi)).norm() < 1e-8);
    assert!((ws[(1, 0)] - i * cis(a.phi + a.theta - a.chi)).norm() < 1e-8);

    // The iteration may settle on the other unimodular solution; it must still be one.
    let v = json(&dxz(&["biunitary", s(&u), "--m", "1", "--psi-tol", "1e-15", "--max-iter", "1000", "--json"]));
    let vs = dxz_core::matcore::from_cmat_json(&v["v"].to_string()).unwrap();
    let ws = dxz_core::matcore::from_cmat_json(&v["w"].to_string()).unwrap();
    for k in 0..2 {
        assert!((vs[(k, 0)].norm() - 1.0).abs() < 1e-8);
        assert!((ws[(k, 0)].norm() - 1.0).abs() < 1e-8);
    }
    assert!(v["report"]["biunitary_residual"].as_f64().unwrap() < 1e-8);

    let big = save(&dir, "u6.json", &u6());
    assert_eq!(code(&dxz(&["biunitary", s(&big), "--m", "1", "--closed-form"])), 64);
}

#[test]
fn conjugate_runs() {
    let dir = TempDir::new().unwrap();
    let i = save(&dir, "i.json", &ComplexMatrix::identity(6));
    let out = dir.path().join("ci");
    assert_eq!(code(&dxz(&["conjugate", s(&i), "--m", "2", "--out-dir", s(&out)])), 0);
    let close = |name: &str, want: ComplexMatrix| {
        let got = read_cmat(out.join(format!("{name}.json"))).unwrap();
        assert!(got.frobenius_distance(&want).unwrap() < 1e-12, "{name}");
    };
    close("C", ComplexMatrix::identity(6));
    close("A", ComplexMatrix::identity(4));
    close("Y", ComplexMatrix::identity(6));

    let u = save(&dir, "u.json", &u6());
    let o = dxz(&["conjugate", s(&u), "--m", "2", "--psi-tol", "1e-12", "--max-iter", "2000", "--json"]);
    assert_eq!(code(&o), 0);
    let c = &json(&o)["conjugate"];
    for key in ["c_circulant", "y_circulant", "reconstruction", "y_row_sum"] {
        assert!(c[key].as_f64().unwrap() <= 1e-5, "{key}: {c}");
    }

    let scaled = save(&dir, "s.json", &u6().scale(Complex64::new(0.5, 0.0)));
    assert_eq!(code(&dxz(&["conjugate", s(&scaled), "--m", "2"])), 65);
}

#[test]
fn batch_in_parallel_matches_serial() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for seed in 0..4 {
        let p = dir.path().join(format!("r{seed}.json"));
        dxz(&["random", "--n", "6", "--seed", &seed.to_string(), "-o", s(&p)]);
        paths.push(p.to_str().unwrap().to_string());
    }
    let run = |jobs: &str| {
        let mut args = vec!["batch", "--m", "3", "--max-iter", "3000", "--jobs", jobs, "--json"];
        args.extend(paths.iter().map(String::as_str));
        let o = dxz(&args);
        let v = json(&o);
        (code(&o), v.as_array().unwrap().iter().map(|r| r["psi_trace"].clone()).collect::<Vec<_>>())
    };
    let (c1, serial) = run("1");
    let (c4, parallel) = run("4");
    assert_eq!(c1, c4);
    assert_eq!(serial, parallel);
    assert_eq!(code(&dxz(&["batch", "--m", "3", "--jobs", "0", &paths[0]])), 64);

    let mut args = vec!["batch", "--m", "3", "/nonexistent.json"];
    args.push(&paths[0]);
    assert_eq!(code(&dxz(&args)), 65);
}

#[test]
fn usage_and_help() {
    assert_eq!(code(&dxz(&["--help"])), 0);
    assert_eq!(code(&dxz(&["--version"])), 0);
    assert_eq!(code(&dxz(&[])), 64);
    assert_eq!(code(&dxz(&["decompose"])), 64);
    assert_eq!(code(&dxz(&["decompose", "x.json", "--m", "two"])), 64);
    assert_eq!(code(&dxz(&["frobnicate"])), 64);
}

#[test]
fn decompose_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let u = save(&dir, "u.json", &u6());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    dxz(&["decompose", s(&u), "--m", "3", "--out-dir", s(&a)]);
    dxz(&["decompose", s(&u), "--m", "3", "--out-dir", s(&b)]);
    for name in ["D.json", "X.json", "Z.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap());
    }
}
