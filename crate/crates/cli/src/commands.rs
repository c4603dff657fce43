use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dxz_core::matcore::{haar_random_unitary, to_cmat_json, RandomSpec};
use dxz_core::permdecomp::perm_dxz;
use dxz_core::sinkhorn::verify_factors;
use dxz_core::structure::{
    biunitary_from_dxz, conjugate_decompose, conjugate_report, normalize_biunitary, u2_closed_form,
};
use dxz_core::{
    decompose, verify_decomposition, BlockPartition, ComplexMatrix, DxzDecomposition, IterationConfig, Permutation,
};
use rayon::prelude::*;

use crate::args::{Cli, Command, IterArgs};
use crate::error::{CliError, CHECK_FAILED, NOT_CONVERGED, SUCCESS};
use crate::report::{read_matrix, round_trip_tol, write_matrices, write_text, RunReport};

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    emit(out, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn status(converged: bool) -> u8 {
    if converged {
        SUCCESS
    } else {
        NOT_CONVERGED
    }
}

fn validated_config(iter: &IterArgs) -> Result<IterationConfig, CliError> {
    let cfg = iter.config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Formats a matrix, using bare integers when every entry is a real integer.
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let entries = m.to_row_major();
    if entries.iter().all(|z| z.im == 0.0 && z.re.fract() == 0.0) {
        let mut s = String::new();
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| format!("{:>2}", m[(i, j)].re)).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    } else {
        format!("{m:.4}")
    }
}

fn summary(report: &RunReport) -> String {
    let p = &report.partition;
    let r = &report.residuals;
    format!(
        "n = {}, m = {}, r = {}\n\
         iterations: {}\n\
         converged: {}\n\
         final psi: {:.3e}\n\
         reconstruction: {:.3e}\n\
         line-sum residual: {:.3e}\n\
         verification at {:.1e}: {}\n",
        p.n(),
        p.m(),
        p.r(),
        report.iterations_used,
        report.converged,
        report.psi_trace.last().map_or(f64::NAN, |t| t.psi),
        r.reconstruction,
        r.line_sum_residual,
        r.tol,
        if r.pass { "pass" } else { "fail" },
    )
}

/// Runs a parsed command, returning its exit status.
pub fn execute(cli: &Cli, argv: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Decompose {
            input,
            m,
            iter,
            out_dir,
            json,
        } => cmd_decompose(argv, input, *m, iter, out_dir.as_deref(), *json, out),
        Command::Trace { input, m, iter, json } => cmd_trace(argv, input, *m, iter, *json, out),
        Command::Verify {
            u,
            d,
            x,
            z,
            m,
            tol,
            json,
        } => cmd_verify(argv, [u, d, x, z], *m, *tol, *json, out),
        Command::Perm {
            perm,
            m,
            out_dir,
            json,
        } => cmd_perm(argv, perm, *m, out_dir.as_deref(), *json, out),
        Command::Random { n, seed, output } => cmd_random(*n, *seed, output.as_deref(), out),
        Command::Biunitary {
            input,
            m,
            iter,
            closed_form,
            json,
        } => cmd_biunitary(argv, input, *m, iter, *closed_form, *json, out),
        Command::Conjugate {
            input,
            m,
            iter,
            out_dir,
            json,
        } => cmd_conjugate(argv, input, *m, iter, out_dir.as_deref(), *json, out),
        Command::Batch {
            inputs,
            m,
            iter,
            jobs,
            json,
        } => cmd_batch(argv, inputs, *m, iter, *jobs, *json, out),
    }
}

struct FileRun {
    report: RunReport,
    dec: DxzDecomposition,
    u: ComplexMatrix,
}

fn decompose_file(argv: &[String], input: &Path, m: usize, cfg: &IterationConfig) -> Result<FileRun, CliError> {
    let (u, digest) = read_matrix(input)?;
    let start = Instant::now();
    let dec = decompose(&u, m, cfg)?;
    let residuals = verify_decomposition(&u, &dec, round_trip_tol(dec.final_psi()))?;
    let wall = start.elapsed().as_secs_f64();
    Ok(FileRun {
        report: RunReport::new(argv, vec![digest], &dec, Some(*cfg), residuals, wall),
        dec,
        u,
    })
}

fn cmd_decompose(
    argv: &[String],
    input: &Path,
    m: usize,
    iter: &IterArgs,
    out_dir: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let cfg = validated_config(iter)?;
    let FileRun { mut report, dec, .. } = decompose_file(argv, input, m, &cfg)?;
    if let Some(dir) = out_dir {
        let written = write_matrices(dir, &[("D", &dec.d), ("X", &dec.x), ("Z", &dec.z)])?;
        report.outputs = written.iter().map(|p| p.display().to_string()).collect();
        let path = dir.join("report.json");
        report.outputs.push(path.display().to_string());
        write_text(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    if json {
        emit_json(out, &report)?;
    } else {
        emit(out, &summary(&report))?;
        for path in &report.outputs {
            emit(out, &format!("wrote {path}\n"))?;
        }
    }
    Ok(status(report.converged))
}

/// Ψ_t table, three decimals.
pub fn trace_table(trace: &[(usize, f64)]) -> String {
    let mut s = String::from("  t      Psi_t\n");
    for &(t, psi) in trace {
        s.push_str(&format!("{t:>3}  {psi:>9.3}\n"));
    }
    s
}

fn cmd_trace(argv: &[String], input: &Path, m: usize, iter: &IterArgs, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = validated_config(iter)?;
    let FileRun { report, dec, .. } = decompose_file(argv, input, m, &cfg)?;
    if json {
        emit_json(out, &report)?;
    } else {
        emit(out, &trace_table(&dec.psi_trace))?;
    }
    Ok(SUCCESS)
}

fn cmd_verify(argv: &[String], paths: [&PathBuf; 4], m: usize, tol: f64, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    if !(tol >= 0.0) {
        return Err(CliError::Usage("--tol must be non-negative".into()));
    }
    let mut mats = Vec::new();
    let mut digests = Vec::new();
    for path in paths {
        let (mat, digest) = read_matrix(path)?;
        mats.push(mat);
        digests.push(digest);
    }
    let [u, d, x, z] = <[ComplexMatrix; 4]>::try_from(mats).expect("four inputs");
    let p = BlockPartition::new(u.rows(), m)?;
    for (name, a) in [("U", &u), ("D", &d), ("X", &x), ("Z", &z)] {
        if a.shape() != (p.n(), p.n()) {
            return Err(CliError::Usage(format!(
                "{name} is {}x{}, expected {}x{}",
                a.rows(),
                a.cols(),
                p.n(),
                p.n()
            )));
        }
    }
    let start = Instant::now();
    let residuals = verify_factors(&u, &d, &x, &z, &p, tol)?;
    let exact = DxzDecomposition {
        d,
        x: x.clone(),
        z,
        partition: p,
        psi_trace: vec![(0, residuals.psi)],
        converged: residuals.pass,
        iterations_used: 0,
    };
    let report = RunReport::new(argv, digests, &exact, None, residuals, start.elapsed().as_secs_f64());
    if json {
        emit_json(out, &report)?;
    } else {
        let r = &report.residuals;
        emit(
            out,
            &format!(
                "reconstruction: {:.3e}\nunitarity D/X/Z: {:.3e} {:.3e} {:.3e}\n\
                 off-block D/Z: {:.3e} {:.3e}\nZ11 residual: {:.3e}\nline-sum residual: {:.3e}\npsi: {:.3e}\n{} at tol {:e}\n",
                r.reconstruction,
                r.unitarity_d,
                r.unitarity_x,
                r.unitarity_z,
                r.d_off_block,
                r.z_off_block,
                r.z11_residual,
                r.line_sum_residual,
                r.psi,
                if r.pass { "pass" } else { "fail" },
                r.tol
            ),
        )?;
    }
    Ok(if report.residuals.pass { SUCCESS } else { CHECK_FAILED })
}

fn cmd_perm(argv: &[String], perm: &str, m: usize, out_dir: Option<&Path>, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let perm: Permutation = perm.parse()?;
    let start = Instant::now();
    let dec = perm_dxz(&perm, m)?;
    let pmat = perm.to_matrix();
    let residuals = verify_decomposition(&pmat, &dec, 0.0)?;
    let exact = &(&dec.d * &dec.x) * &dec.z == pmat;
    let mut report = RunReport::new(argv, Vec::new(), &dec, None, residuals, start.elapsed().as_secs_f64());
    if let Some(dir) = out_dir {
        let written = write_matrices(dir, &[("P", &pmat), ("D", &dec.d), ("X", &dec.x), ("Z", &dec.z)])?;
        report.outputs = written.iter().map(|p| p.display().to_string()).collect();
    }
    if json {
        emit_json(out, &report)?;
    } else {
        for (name, mat) in [("D", &dec.d), ("X", &dec.x), ("Z", &dec.z)] {
            emit(out, &format!("{name} =\n{}\n", format_matrix(mat)))?;
        }
        emit(out, &format!("product check: {}\n", if exact { "exact" } else { "FAILED" }))?;
        for path in &report.outputs {
            emit(out, &format!("wrote {path}\n"))?;
        }
    }
    if exact && report.residuals.pass {
        Ok(SUCCESS)
    } else {
        Err(CliError::Data("permutation factors failed their exact check".into()))
    }
}

fn cmd_random(n: usize, seed: u64, output: Option<&Path>, out: &mut dyn Write) -> Result<u8, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let text = to_cmat_json(&haar_random_unitary(&RandomSpec::new(n, seed))) + "\n";
    match output {
        Some(path) => write_text(path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(SUCCESS)
}

fn closed_form_file(argv: &[String], input: &Path, m: usize) -> Result<FileRun, CliError> {
    let (u, digest) = read_matrix(input)?;
    if u.shape() != (2, 2) || m != 1 {
        return Err(CliError::Usage("--closed-form needs a 2x2 input and --m 1".into()));
    }
    let start = Instant::now();
    let dec = u2_closed_form(&u)?;
    let residuals = verify_decomposition(&u, &dec, round_trip_tol(dec.final_psi()))?;
    Ok(FileRun {
        report: RunReport::new(argv, vec![digest], &dec, None, residuals, start.elapsed().as_secs_f64()),
        dec,
        u,
    })
}

fn cmd_biunitary(
    argv: &[String],
    input: &Path,
    m: usize,
    iter: &IterArgs,
    closed_form: bool,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let cfg = validated_config(iter)?;
    let FileRun { mut report, dec, u } = if closed_form {
        closed_form_file(argv, input, m)?
    } else {
        decompose_file(argv, input, m, &cfg)?
    };
    let (v, w) = biunitary_from_dxz(&dec)?;
    let (v, w) = normalize_biunitary(&v, &w);
    let (vs, ws) = (v.stacked(), w.stacked());
    let residual = (&u * &vs).frobenius_distance(&ws)?;
    report.biunitary_residual = Some(residual);
    if json {
        #[derive(serde::Serialize)]
        struct Out<'a> {
            report: &'a RunReport,
            v: serde_json::Value,
            w: serde_json::Value,
        }
        emit_json(
            out,
            &Out {
                report: &report,
                v: serde_json::from_str(&to_cmat_json(&vs))?,
                w: serde_json::from_str(&to_cmat_json(&ws))?,
            },
        )?;
    } else {
        emit(
            out,
            &format!(
                "V =\n{}\nW =\n{}\n|UV - W|_F = {residual:.3e}\nconverged: {}\n",
                format_matrix(&vs),
                format_matrix(&ws),
                report.converged
            ),
        )?;
    }
    Ok(status(report.converged))
}

fn cmd_conjugate(
    argv: &[String],
    input: &Path,
    m: usize,
    iter: &IterArgs,
    out_dir: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let cfg = validated_config(iter)?;
    let (u, digest) = read_matrix(input)?;
    let start = Instant::now();
    let cd = conjugate_decompose(&u, m, &cfg)?;
    let conj = conjugate_report(&u, &cd)?;
    let inner_u = {
        let t = dxz_core::matcore::block_fourier(&cd.partition);
        &(&t.adjoint() * &u) * &t
    };
    let residuals = verify_decomposition(&inner_u, &cd.inner, round_trip_tol(cd.inner.final_psi()))?;
    let mut report = RunReport::new(argv, vec![digest], &cd.inner, Some(cfg), residuals, start.elapsed().as_secs_f64());
    report.conjugate = Some(conj);
    if let Some(dir) = out_dir {
        let written = write_matrices(dir, &[("C", &cd.c), ("A", &cd.a), ("Y", &cd.y)])?;
        report.outputs = written.iter().map(|p| p.display().to_string()).collect();
        let path = dir.join("report.json");
        report.outputs.push(path.display().to_string());
        write_text(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    if json {
        emit_json(out, &report)?;
    } else {
        emit(
            out,
            &format!(
                "n = {}, m = {}\nconverged: {}\nreconstruction |C(I+A)Y - U|_F: {:.3e}\n\
                 circulant residual C: {:.3e}\ncirculant residual Y: {:.3e}\nY block row sum residual: {:.3e}\n\
                 middle residual: {:.3e}\n",
                cd.partition.n(),
                cd.partition.m(),
                conj.converged,
                conj.reconstruction,
                conj.c_circulant,
                conj.y_circulant,
                conj.y_row_sum,
                conj.middle_residual
            ),
        )?;
        for path in &report.outputs {
            emit(out, &format!("wrote {path}\n"))?;
        }
    }
    Ok(status(report.converged))
}

fn cmd_batch(
    argv: &[String],
    inputs: &[PathBuf],
    m: usize,
    iter: &IterArgs,
    jobs: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let cfg = validated_config(iter)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<RunReport, CliError>> = pool.install(|| {
        inputs
            .par_iter()
            .map(|path| decompose_file(argv, path, m, &cfg).map(|run| run.report))
            .collect()
    });

    let mut code = SUCCESS;
    let mut reports = Vec::new();
    for (path, res) in inputs.iter().zip(results) {
        match res {
            Ok(report) => {
                code = code.max(status(report.converged));
                if !json {
                    emit(
                        out,
                        &format!(
                            "{}\tconverged={}\titerations={}\tpsi={:.3e}\treconstruction={:.3e}\n",
                            path.display(),
                            report.converged,
                            report.iterations_used,
                            report.psi_trace.last().map_or(f64::NAN, |t| t.psi),
                            report.residuals.reconstruction
                        ),
                    )?;
                }
                reports.push(serde_json::to_value(&report)?);
            }
            Err(e) => {
                code = code.max(e.exit_code());
                if !json {
                    emit(out, &format!("{}\terror: {e}\n", path.display()))?;
                }
                reports.push(serde_json::json!({ "path": path.display().to_string(), "error": e.to_string() }));
            }
        }
    }
    if json {
        emit_json(out, &reports)?;
    }
    Ok(code)
}
