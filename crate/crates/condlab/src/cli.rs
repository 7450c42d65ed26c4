//! Argument handling, output writing, manifests and `verify`.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command, VerifyArgs};
use crate::config::merge_config;
use crate::error::{CliError, CliResult};
use crate::experiments::{self, Report};
use crate::manifest::{manifest_path, RunManifest};
use crate::output::write_atomic;
use crate::plot::svg_polylines;

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 success, 1 usage or IO error, 2 numerical failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match run_args(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_args(args: Vec<OsString>) -> CliResult<i32> {
    let merged = merge_config(args)?;
    let cli = match Cli::try_parse_from(&merged) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return Ok(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            });
        }
    };
    if let Command::Verify(v) = &cli.command {
        return verify(v);
    }
    let started = Instant::now();
    let report = dispatch(&cli.command)?;
    let outputs = emit(&cli.command, &report)?;

    if let Some(out) = cli.command.output().and_then(|o| o.out.as_ref()) {
        let recorded: Vec<String> = merged.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
        let manifest = RunManifest {
            subcommand: cli.command.name().to_owned(),
            args: recorded,
            parameters: serde_json::to_value(&cli.command).map_err(|e| CliError::Usage(e.to_string()))?,
            seed: report.seed,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            outputs,
            duration_secs: started.elapsed().as_secs_f64(),
        };
        manifest.write(&manifest_path(out))?;
    }

    if let Some(msg) = &report.failure {
        eprintln!("error: {msg}");
        return Ok(2);
    }
    Ok(0)
}

fn dispatch(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Gamma(a) => experiments::gamma(a),
        Command::KingmanW(a) => experiments::kingman_w(a),
        Command::KingmanWave(a) => experiments::kingman_wave(a),
        Command::KingmanGridCheck(a) => experiments::kingman_grid_check(a),
        Command::LimitMass(a) => experiments::limit_mass(a),
        Command::RenewalSolve(a) => experiments::renewal_solve(a),
        Command::Malthus(a) => experiments::malthus(a),
        Command::PermH(a) => experiments::perm_h(a),
        Command::PermSample(a) => experiments::perm_sample(a),
        Command::PermWaveLeft(a) => experiments::perm_wave_left(a),
        Command::PermWaveRight(a) => experiments::perm_wave_right(a),
        Command::NetSim(a) => experiments::net_sim(a),
        Command::NetPhase(a) => experiments::net_phase(a),
        Command::NetWave(a) => experiments::net_wave(a),
        Command::FitWave(a) => experiments::fit_wave(a),
        Command::Verify(_) => unreachable!("verify is handled before dispatch"),
    }
}

/// Writes table, plot and summary; returns the files written.
fn emit(cmd: &Command, report: &Report) -> CliResult<Vec<PathBuf>> {
    let Some(output) = cmd.output() else {
        return Ok(Vec::new());
    };
    let rendered = report.table.render(output.format);
    let mut written = Vec::new();
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    match &output.out {
        Some(path) => {
            write_atomic(path, rendered.as_bytes())?;
            written.push(path.clone());
            for line in &report.summary {
                let _ = writeln!(stdout, "{line}");
            }
        }
        None => {
            let text = report.stdout_value.as_deref().unwrap_or(&rendered);
            let _ = stdout.write_all(text.as_bytes());
            for line in &report.summary {
                eprintln!("{line}");
            }
        }
    }
    if let Some(plot_path) = &output.plot {
        let (x, ys) = report.plot.clone().unwrap_or_else(|| (0, (1..report.table.columns.len()).collect()));
        write_atomic(plot_path, svg_polylines(&report.table, x, &ys).as_bytes())?;
        written.push(plot_path.clone());
    }
    Ok(written)
}

/// Replaces the value of `--flag` (either form) in `args`.
fn redirect(args: &mut [String], flag: &str, to: &Path) {
    let eq = format!("{flag}=");
    let mut i = 0;
    while i < args.len() {
        if args[i] == flag && i + 1 < args.len() {
            args[i + 1] = to.to_string_lossy().into_owned();
            i += 1;
        } else if args[i].starts_with(&eq) {
            args[i] = format!("{eq}{}", to.display());
        }
        i += 1;
    }
}

fn has_flag(args: &[String], flag: &str) -> bool {
    let eq = format!("{flag}=");
    args.iter().any(|a| a == flag || a.starts_with(&eq))
}

fn verify(v: &VerifyArgs) -> CliResult<i32> {
    let manifest = RunManifest::read(&v.manifest)?;
    let dir = tempfile::tempdir().map_err(|e| CliError::io(std::env::temp_dir(), e))?;
    let mut args = manifest.args.clone();
    let mut fresh = Vec::new();
    for (i, original) in manifest.outputs.iter().enumerate() {
        let name = original.file_name().map_or_else(|| format!("output{i}").into(), |n| n.to_owned());
        let target = dir.path().join(format!("{i}-{}", name.to_string_lossy()));
        let flag = if i == 0 { "--out" } else { "--plot" };
        redirect(&mut args, flag, &target);
        fresh.push(target);
    }
    if let Some(seed) = manifest.seed {
        if !has_flag(&args, "--seed") {
            args.push("--seed".into());
            args.push(seed.to_string());
        }
    }
    let mut argv = vec![OsString::from("condlab")];
    argv.extend(args.into_iter().map(OsString::from));
    let code = run_args(argv)?;
    if code != 0 {
        return Err(CliError::Numerical(format!("re-run exited with code {code}")));
    }
    let mut mismatched = Vec::new();
    for (original, new) in manifest.outputs.iter().zip(&fresh) {
        let a = std::fs::read(original).map_err(|e| CliError::io(original, e))?;
        let b = std::fs::read(new).map_err(|e| CliError::io(new, e))?;
        if a == b {
            println!("identical: {}", original.display());
        } else {
            println!("differs: {}", original.display());
            mismatched.push(original.clone());
        }
    }
    Ok(if mismatched.is_empty() { 0 } else { 2 })
}
