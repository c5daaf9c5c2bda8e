//! Command-line front end: argument parsing, sweeps, parallel evaluation and
//! table output. `run` is the whole program; `main` only wires up stdio.

pub mod args;
mod commands;
pub mod config;
pub mod sweep;
pub mod table;

use args::{Cli, Format};
use clap::Parser;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};
use table::Metadata;

/// A bad flag value, reported with the flag's name.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub flag: String,
    pub message: String,
}

impl UsageError {
    pub fn new(flag: &str, message: impl Into<String>) -> Self {
        UsageError { flag: flag.to_string(), message: message.into() }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.flag, self.message)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(UsageError),
    Library(nonasym::Error),
    EmptyTable,
    Io(String),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e)
    }
}

impl From<nonasym::Error> for CliError {
    fn from(e: nonasym::Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use nonasym::Error as E;
        match self {
            CliError::Usage(_) | CliError::EmptyTable => 2,
            CliError::Library(E::DomainError(_) | E::DegenerateCompensation(_) | E::UnknownStrategy { .. }) => 2,
            CliError::Library(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(u) => write!(f, "{u}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::EmptyTable => f.write_str("nothing to write: the table has no rows"),
            CliError::Io(m) => write!(f, "IoError: {m}"),
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// Parses `argv` (program name first), computes, writes the table to `out`
/// or `--out`, and returns the exit code: 0 ok, 2 bad input, 3 numerical
/// failure.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{first}");
            return 2;
        }
    };
    match execute(&cli, err) {
        Ok(bytes) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &bytes) {
                    let _ = writeln!(err, "error: IoError: cannot write {}: {e}", path.display());
                    return 3;
                }
            } else if let Err(e) = out.write_all(&bytes).and_then(|_| out.flush()) {
                let _ = writeln!(err, "error: IoError: {e}");
                return 3;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Vec<u8>, CliError> {
    let threads = match cli.threads {
        Some(0) => return Err(UsageError::new("--threads", "must be at least 1").into()),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let report = pool.install(|| commands::dispatch(cli))?;
    for n in &report.notes {
        let _ = writeln!(err, "warning: {n}");
    }
    let bytes = match cli.format {
        Format::Csv => table::to_csv(&report.table)?,
        Format::Json => {
            let meta = Metadata {
                command: report.command.to_string(),
                parameters: report.parameters,
                tool: "nonasym".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                tolerances: report.tolerances,
                notes: report.notes,
                timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            };
            table::to_json(&report.table, &meta)?
        }
    };
    Ok(bytes.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nonasym").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn tmp(name: &str) -> std::path::PathBuf {
        let d = std::env::temp_dir().join(format!("nonasym-cli-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d.join(name)
    }

    #[test]
    fn csv_header_and_lf() {
        let (code, out, _) = call(&["diff-xs", "--xi", "1", "--kr", "1e6", "--x-sweep", "30:100:3"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("theta,x,sigma1,sigma_rutherford"));
        assert_eq!(lines.count(), 3);
        assert!(out.ends_with('\n') && !out.contains('\r'));
    }

    #[test]
    fn csv_floats_reparse_exactly() {
        let (_, out, _) = call(&["total-xs", "--xi", "0.7", "--sweep", "kr:1e3:1e6:4:log"]);
        for line in out.lines().skip(1) {
            for f in line.split(',') {
                let v: f64 = f.parse().unwrap();
                assert_eq!(table::format_float(v), f);
            }
        }
        // CSV and JSON carry the same bits
        let (_, js, _) = call(&["total-xs", "--xi", "0.7", "--sweep", "kr:1e3:1e6:4:log", "--format", "json"]);
        let v: Value = serde_json::from_str(&js).unwrap();
        let first: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(v["rows"][0]["sigma_tot"].as_f64().unwrap().to_bits(), first[3].to_bits());
    }

    #[test]
    fn metadata_round_trips_parameters() {
        let (code, out, _) =
            call(&["diff-xs", "--xi", "1.25", "--sign", "repel", "--kr", "1e5", "--theta", "0.01", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let meta: table::Metadata = serde_json::from_value(v["metadata"].clone()).unwrap();
        assert_eq!(meta.command, "diff-xs");
        assert_eq!(meta.parameters["xi"].as_f64(), Some(1.25));
        assert_eq!(meta.parameters["sign"], "repel");
        assert_eq!(meta.parameters["kr"].as_f64(), Some(1e5));
        assert_eq!(meta.parameters["theta"].as_f64(), Some(0.01));
        assert_eq!(meta.version, env!("CARGO_PKG_VERSION"));
        assert!(meta.tolerances.contains_key("switch_z_low"));
    }

    #[test]
    fn sweep_metadata_round_trips() {
        let (_, out, _) = call(&["universal", "--xi-sweep", "0.5:1.5:3", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        let s: sweep::SweepSpec = serde_json::from_value(v["metadata"]["parameters"]["sweep"].clone()).unwrap();
        assert_eq!(
            s,
            sweep::SweepSpec { variable: "xi".into(), start: 0.5, stop: 1.5, points: 3, scale: sweep::Scale::Linear }
        );
        assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn degrees_convert_at_the_boundary() {
        let (_, deg, _) = call(&["diff-xs", "--xi", "1", "--kr", "1e6", "--theta", "90", "--degrees"]);
        let (_, rad, _) =
            call(&["diff-xs", "--xi", "1", "--kr", "1e6", "--theta", &std::f64::consts::FRAC_PI_2.to_string()]);
        let d: Vec<&str> = deg.lines().nth(1).unwrap().split(',').collect();
        let r: Vec<&str> = rad.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(d[0].parse::<f64>().unwrap(), 90.0);
        assert_eq!(d[2], r[2]);
    }

    #[test]
    fn usage_errors_exit_2_naming_the_flag() {
        let cases: &[(&[&str], &str)] = &[
            (
                &["diff-xs", "--xi", "1", "--kr", "1e6", "--theta-sweep", "0:0.01:400", "--scale", "log"],
                "--theta-sweep",
            ),
            (&["diff-xs", "--xi", "-1", "--kr", "1e6", "--theta", "0.1"], "--xi"),
            (&["diff-xs", "--xi", "1", "--kr", "1e6", "--theta", "4"], "--theta"),
            (&["diff-xs", "--xi", "1", "--theta", "0.1"], "--kr"),
            (&["diff-xs", "--xi", "1", "--kr", "1e6", "--theta", "0.1", "--regime", "magic"], "--regime"),
            (&["diff-xs", "--xi", "1", "--kr", "1e6", "--bogus", "1"], "--bogus"),
            (&["total-xs", "--xi", "abc", "--kr", "1e4"], "--xi"),
            (&["total-xs", "--xi", "1", "--kr", "1e4", "--sweep", "theta:0:1:3"], "--sweep"),
            (&["total-xs", "--xi", "1", "--kr", "1e4", "--sweep", "xi:1:2:5"], "--xi"),
            (&["transport-xs", "--xi", "1", "--kr", "1e4", "--method", "fast"], "--method"),
            (&["universal", "--xi-sweep", "1:2:1"], "--xi-sweep"),
            (&["universal", "--xi-sweep", "1:2:3", "--sweep", "xi:1:2:3"], "--xi-sweep"),
            (&["optical-check", "--xi", "1", "--kr", "50"], "--kr"),
            (&["optical-check", "--xi", "1", "--kr", "500", "--sign", "repel"], "--sign"),
            (&["mobility", "--n", "-1"], "DomainError"),
            (&["mobility", "--sweep", "Z1:1:2:2"], "--sweep"),
            (&["mobility", "--K", "1.2"], "K must lie"),
            (&["mobility", "--K", "0.5", "--Z2", "2"], "DegenerateCompensation"),
            (&["mobility", "--sweep", "n:1e14:1e17:3", "--n", "1e15"], "--n"),
            (&["mobility", "--threads", "0"], "--threads"),
            (&["mobility", "--table-nodes", "2"], "--table-nodes"),
            (&["specfun-eval", "--function", "kummer-m", "--z", "1"], "--a"),
        ];
        for (args, flag) in cases {
            let (code, out, err) = call(args);
            assert_eq!(code, 2, "{args:?}: {err}");
            assert!(out.is_empty(), "{args:?}");
            assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
            assert!(err.contains(flag), "{args:?}: {err}");
        }
    }

    #[test]
    fn config_unknown_keys_rejected() {
        let p = tmp("bad.conf");
        std::fs::write(&p, "T = 78\ncolour = blue\n").unwrap();
        let (code, _, err) = call(&["mobility", "--config", p.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(err.contains("--config") && err.contains("colour"), "{err}");
    }

    #[test]
    fn numerical_failure_exits_3_with_error_name() {
        // the series regime cannot reach the large-z point
        let (code, _, err) =
            call(&["specfun-eval", "--function", "tricomi-u", "--a", "0,1", "--z", "0,5000", "--regime", "series"]);
        assert_eq!(code, 3, "{err}");
        assert!(err.starts_with("error: ") && err.lines().count() == 1, "{err}");
        let name = err.trim_start_matches("error: ").split(':').next().unwrap();
        assert!(["NoConvergence", "OverflowGuard", "MaxDepthExceeded"].contains(&name), "{err}");
    }

    #[test]
    fn out_file_written_only_on_success() {
        let good = tmp("good.csv");
        let (code, out, _) = call(&["universal", "--xi", "1", "--out", good.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        assert!(std::fs::read_to_string(&good).unwrap().starts_with("xi,i_attract"));
        let bad = tmp("bad.csv");
        let _ = std::fs::remove_file(&bad);
        let (code, _, _) = call(&["universal", "--xi-sweep", "1:1:0", "--out", bad.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(!bad.exists());
        let (code, _, _) = call(&["universal", "--xi", "9", "--out", bad.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(!bad.exists());
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let args = ["transport-xs", "--xi", "1", "--sign", "repel", "--sweep", "kr:10:1e5:9:log"];
        let (_, a, _) = call(&[&args[..], &["--threads", "1"]].concat());
        let (_, b, _) = call(&[&args[..], &["--threads", "4"]].concat());
        let (_, c, _) = call(&args);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.lines().count(), 10);
    }

    #[test]
    fn first_failing_point_decides_the_error() {
        let (code, _, err) = call(&["universal", "--xi-sweep", "4:8:5", "--threads", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("xi must lie in (0, 5], got 6"), "{err}");
    }

    #[test]
    fn help_and_version_exit_0() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("diff-xs") && !out.contains("specfun-eval"));
        let (code, out, _) = call(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains(env!("CARGO_PKG_VERSION")));
    }

    #[test]
    fn mobility_json_and_swept_abscissa() {
        let (code, out, _) = call(&["mobility", "--sweep", "T:100:300:3", "--model", "analytic", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows[0]["T"].as_f64(), Some(100.0));
        assert!(rows[0]["mu_cw"].as_f64().unwrap() > 0.0);
        assert!(v["metadata"]["parameters"]["sample"].get("T").is_none());
        assert_eq!(v["metadata"]["parameters"]["sample"]["n"].as_f64(), Some(1e16));
        // unequal charges have no Conwell-Weisskopf value: empty CSV field
        let (_, csv, _) = call(&["mobility", "--Z2", "2", "--model", "analytic"]);
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[2], "");
    }

    #[test]
    fn specfun_eval_points() {
        let (code, out, _) = call(&["specfun-eval", "--function", "gamma", "--z", "0.5"]);
        assert_eq!(code, 0);
        let re: f64 = out.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
        assert!((re / std::f64::consts::PI.sqrt() - 1.0).abs() < 1e-13);
        let (code, out, _) = call(&["specfun-eval", "--function", "u1-u2", "--xi", "1", "--sweep", "z:1:3:3"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().next(), Some("z_re,z_im,u1_re,u1_im,u2_re,u2_im"));
    }
}
