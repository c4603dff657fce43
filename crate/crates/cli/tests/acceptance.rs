//! One test per acceptance criterion. Each prints a `[PASS]`/`[FAIL]` line
//! before asserting, so `cargo test --test acceptance -- --nocapture` reads as
//! a checklist.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use dxz_core::matcore::{haar_random_unitary, line_sum_masses, write_cmat, BlockPartition, ComplexMatrix, RandomSpec};
use dxz_core::permdecomp::{perm_dxz, Permutation};
use dxz_core::polar::PolarConfig;
use dxz_core::reference::{perm6_factors_m2, perm6_factors_m3, rounded_biunitary_m2, u6};
use dxz_core::sinkhorn::{block_trace, decompose, psi, sinkhorn_step, verify_decomposition, IterationConfig};
use dxz_core::structure::{
    biunitary_from_dxz, circulant_residual, conjugate_decompose, conjugate_report, core_to_xu, fourier_split,
    normalize_biunitary, u2_closed_form, u2_factors, u2_parameters, U2Parameters,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE: [[f64; 3]; 6] = [
    [34.889, 32.000, 33.743],
    [4.407, 9.517, 6.643],
    [2.573, 4.332, 2.533],
    [1.381, 2.680, 1.023],
    [0.586, 1.627, 0.513],
    [0.213, 0.868, 0.375],
];

const SWEEP: usize = 200;
const SIZES: [usize; 6] = [2, 4, 6, 8, 9, 12];

fn check(id: &str, what: &str, ok: bool, detail: String) {
    println!("[{}] {id} {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} failed: {detail}");
}

fn sweep_cases() -> impl Iterator<Item = (u64, ComplexMatrix, usize)> {
    (0..SWEEP).flat_map(|i| {
        let n = SIZES[i % SIZES.len()];
        let u = haar_random_unitary(&RandomSpec::new(n, i as u64));
        BlockPartition::divisors(n)
            .into_iter()
            .filter(move |&m| m < n)
            .map(move |m| (i as u64, u.clone(), m))
    })
}

#[test]
fn ac1_initial_psi() {
    let u = u6();
    let start = Instant::now();
    let got: Vec<f64> = [1, 2, 3].iter().map(|&m| psi(&u, &BlockPartition::new(6, m).unwrap()).unwrap()).collect();
    let elapsed = start.elapsed();
    let worst = got.iter().zip(TABLE[0]).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    check(
        "AC-1",
        "Psi_0 of the 6x6 example for m = 1, 2, 3",
        worst <= 1e-3 && elapsed < Duration::from_millis(1),
        format!("{got:.4?}, worst error {worst:.1e}, {elapsed:?}"),
    );
}

#[test]
fn ac2_reference_trajectory() {
    let cfg = IterationConfig {
        max_iter: 36,
        psi_tol: 1e-300,
        ..IterationConfig::default()
    };
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut last = Vec::new();
    for (col, m) in [1, 2, 3].into_iter().enumerate() {
        let dec = decompose(&u6(), m, &cfg).unwrap();
        for (t, row) in TABLE.iter().enumerate().skip(1) {
            worst = worst.max((dec.psi_trace[t].1 - row[col]).abs());
        }
        last.push(dec.final_psi());
    }
    let elapsed = start.elapsed();
    let ok = worst <= 0.05 && last.iter().all(|&v| v <= 0.005) && elapsed < Duration::from_secs(1);
    check(
        "AC-2",
        "Psi_1..5 trajectory and Psi_36",
        ok,
        format!("worst table error {worst:.4}, Psi_36 {last:?}, {elapsed:?}"),
    );
}

#[test]
fn ac3_sweep_reconstruction() {
    let cfg = IterationConfig::default();
    let start = Instant::now();
    let mut runs = 0;
    let mut worst = 0.0f64;
    let mut worst_case = (0, 0, 0);
    for (seed, u, m) in sweep_cases() {
        let dec = decompose(&u, m, &cfg).unwrap();
        let r = verify_decomposition(&u, &dec, 1e-8).unwrap();
        let err = r.reconstruction.max(r.d_off_block).max(r.z_off_block).max(r.z11_residual);
        if err > worst {
            worst = err;
            worst_case = (seed, u.rows(), m);
        }
        runs += 1;
    }
    let elapsed = start.elapsed();
    check(
        "AC-3",
        "sweep reconstruction and block structure",
        worst <= 1e-8 && elapsed < Duration::from_secs(30),
        format!("{runs} runs, worst {worst:.1e} at (seed, n, m) = {worst_case:?}, {elapsed:?}"),
    );
}

#[test]
fn ac4_sweep_invariants() {
    let cfg = IterationConfig::default();
    let mut runs = 0;
    let mut steps = 0;
    let mut decreases = Vec::new();
    let mut bound_excess = f64::NEG_INFINITY;
    let mut mass_err = 0.0f64;
    for (seed, u, m) in sweep_cases() {
        let p = BlockPartition::new(u.rows(), m).unwrap();
        let n = p.n() as f64;
        let mut x = u.clone();
        let mut btr = block_trace(&x, &p).unwrap().modulus();
        let mut t = 0;
        loop {
            bound_excess = bound_excess.max(btr - n);
            let (rows, cols) = line_sum_masses(&x, &p).unwrap();
            mass_err = mass_err.max((rows - n).abs()).max((cols - n).abs());
            if n * n - btr * btr <= cfg.psi_tol || t >= cfg.max_iter {
                break;
            }
            x = sinkhorn_step(&x, &p, &cfg.polar).unwrap().next;
            t += 1;
            steps += 1;
            let next = block_trace(&x, &p).unwrap().modulus();
            if next < btr - 1e-9 {
                decreases.push((seed, p.n(), m, t, btr - next));
            }
            btr = next;
        }
        runs += 1;
    }
    let a = decreases.is_empty();
    let b = bound_excess <= 1e-9;
    let c = mass_err <= 1e-9;
    println!(
        "[{}] AC-4a |Btr(X_t)| non-decreasing: {runs} runs, {steps} steps, {} decreases {:?}",
        if a { "PASS" } else { "FAIL" },
        decreases.len(),
        decreases.iter().take(5).collect::<Vec<_>>()
    );
    println!("[{}] AC-4b |Btr| <= n: max excess {bound_excess:.1e}", if b { "PASS" } else { "FAIL" });
    println!("[{}] AC-4c line-sum masses equal n: worst {mass_err:.1e}", if c { "PASS" } else { "FAIL" });
    assert!(a && b && c, "AC-4 failed");
}

#[test]
fn ac5_two_by_two_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut worst_product = 0.0f64;
    for _ in 0..1000 {
        let a = U2Parameters {
            theta: rng.random_range(0.0..PI),
            phi: rng.random_range(0.0..=FRAC_PI_2),
            psi: rng.random_range(0.0..2.0 * PI),
            chi: rng.random_range(0.0..2.0 * PI),
        };
        let (d, x, z) = u2_factors(&a);
        worst_product = worst_product.max((&(&d * &x) * &z).frobenius_distance(&a.matrix()).unwrap());
    }
    let mut worst_round_trip = 0.0f64;
    let mut all_verify = true;
    for seed in 0..1000 {
        let u = haar_random_unitary(&RandomSpec::new(2, seed));
        let back = u2_parameters(&u).unwrap().matrix();
        worst_round_trip = worst_round_trip.max(back.frobenius_distance(&u).unwrap());
        let dec = u2_closed_form(&u).unwrap();
        all_verify &= verify_decomposition(&u, &dec, 1e-10).unwrap().pass;
    }
    let elapsed = start.elapsed();
    check(
        "AC-5",
        "2x2 closed form",
        worst_product <= 1e-12 && worst_round_trip <= 1e-10 && all_verify && elapsed < Duration::from_secs(1),
        format!("product {worst_product:.1e}, round trip {worst_round_trip:.1e}, verify {all_verify}, {elapsed:?}"),
    );
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

#[test]
fn ac6_permutations() {
    let start = Instant::now();
    let mut exact = 0;
    let mut total = 0;
    for image in permutations(6) {
        let perm = Permutation::new(image).unwrap();
        let u = perm.to_matrix();
        for m in [2, 3] {
            let dec = perm_dxz(&perm, m).unwrap();
            total += 1;
            if verify_decomposition(&u, &dec, 0.0).unwrap().pass {
                exact += 1;
            }
        }
    }
    let dir = tempfile::TempDir::new().unwrap();
    let mut binary_ok = true;
    for f in [perm6_factors_m2(), perm6_factors_m3()] {
        let path = |name: &str| {
            let p = dir.path().join(format!("{name}{}.json", f.m));
            p.to_str().unwrap().to_string()
        };
        for (name, mat) in [("U", &f.u), ("D", &f.d), ("X", &f.x), ("Z", &f.z)] {
            write_cmat(path(name), mat).unwrap();
        }
        let m = f.m.to_string();
        let status = Command::new(env!("CARGO_BIN_EXE_dxz"))
            .args(["verify", "--u", &path("U"), "--d", &path("D"), "--x", &path("X"), "--z", &path("Z")])
            .args(["--m", &m, "--tol", "0"])
            .output()
            .unwrap()
            .status;
        binary_ok &= status.success();
    }
    let elapsed = start.elapsed();
    check(
        "AC-6",
        "exact permutation factorizations",
        exact == total && binary_ok && elapsed < Duration::from_secs(5),
        format!("{exact}/{total} exact, hand factorizations via dxz verify: {binary_ok}, {elapsed:?}"),
    );
}

#[test]
fn ac7_biunitary_vectors() {
    let u = u6();
    let (rv, rw) = rounded_biunitary_m2();
    let rounded = (&u * &rv).frobenius_distance(&rw).unwrap();
    let cfg = IterationConfig {
        max_iter: 2000,
        psi_tol: 1e-12,
        ..IterationConfig::default()
    };
    let dec = decompose(&u, 2, &cfg).unwrap();
    let (v, w) = biunitary_from_dxz(&dec).unwrap();
    let (v, w) = normalize_biunitary(&v, &w);
    let relation = (&u * &v.stacked()).frobenius_distance(&w.stacked()).unwrap();
    let gram = &v.stacked().adjoint() * &v.stacked();
    let gram_err = gram.frobenius_distance(&ComplexMatrix::identity(2).scale(3.0.into())).unwrap();
    check(
        "AC-7",
        "biunitary vectors of the 6x6 example, m = 2",
        rounded <= 0.05 && relation <= 1e-4 && gram_err <= 1e-4,
        format!("rounded |UV-W| {rounded:.3}, computed |UV-W| {relation:.1e}, |V'V - 3I| {gram_err:.1e}"),
    );
}

#[test]
fn ac8_core_round_trip() {
    let mut worst_off = 0.0f64;
    let mut worst_psi = 0.0f64;
    for i in 0..100u64 {
        let n = SIZES[(i as usize) % SIZES.len()];
        let m = *BlockPartition::divisors(n).iter().filter(|&&m| m < n).last().unwrap();
        let p = BlockPartition::new(n, m).unwrap();
        let g = haar_random_unitary(&RandomSpec::new(p.q(), 1000 + i));
        let x = core_to_xu(&g, &p).unwrap();
        let split = fourier_split(&x, &p).unwrap();
        worst_off = worst_off.max(split.off_block).max(split.leading_residual);
        worst_psi = worst_psi.max(psi(&x, &p).unwrap().abs());
    }
    check(
        "AC-8",
        "core_to_xu produces members with Psi = 0",
        worst_off <= 1e-10 && worst_psi <= 1e-10,
        format!("off-block {worst_off:.1e}, Psi {worst_psi:.1e}"),
    );
}

#[test]
fn ac9_conjugate_structure() {
    let u = u6();
    let cfg = IterationConfig {
        max_iter: 5000,
        psi_tol: 1e-13,
        polar: PolarConfig::default(),
    };
    let cd = conjugate_decompose(&u, 2, &cfg).unwrap();
    let r = conjugate_report(&u, &cd).unwrap();
    let p = BlockPartition::new(6, 2).unwrap();
    let c_res = circulant_residual(&cd.c, &p).unwrap();
    let y_res = circulant_residual(&cd.y, &p).unwrap();
    let worst = c_res.max(y_res).max(r.reconstruction);
    check(
        "AC-9",
        "C and Y block-circulant, C·(I+A)·Y = U",
        worst <= 1e-5 && cd.converged(),
        format!("circulant C {c_res:.1e}, Y {y_res:.1e}, reconstruction {:.1e}", r.reconstruction),
    );
}
