use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use braceops::calibration::{calibrate, calibrated};
use braceops::cohomology::{assemble, spectral_pages, Which};
use braceops::fixtures::{builtin, check_all, check_dir};
use braceops::linalg::cohomology_dims;
use braceops::report::{dim_rows, dims_csv, run_suite, Suite, HARD_MAX_N};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const CALIBRATION: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "braceops", version, about = "Exact cohomology checks for the braces operad")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "BRACEOPS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectorArg {
    All,
    Vcirc,
    Vbul,
}

#[derive(Subcommand)]
enum Cmd {
    /// Chain dimensions per degree.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        sector: SectorArg,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cohomology dimensions per degree.
    Cohomology {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "br")]
        which: Which,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pages of the filtration spectral sequence.
    Spectral {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check fixture files (the built-in set when no directory is given).
    Fixtures {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(USAGE, msg.into())
}

/// Writes through a sibling temporary file so readers never see a partial report.
fn write(path: &Path, text: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn arity(n: usize) -> Result<usize, Failure> {
    if (1..=HARD_MAX_N).contains(&n) {
        Ok(n)
    } else {
        Err(usage(format!("--n must be between 1 and {HARD_MAX_N}")))
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| usage(format!("thread pool: {e}")))?;
    }
    calibrate().map_err(|e| Failure(CALIBRATION, format!("sign calibration failed: {e}")))?;
    match cli.cmd {
        Cmd::Dims { n, sector, dual, csv } => {
            let which = match sector {
                SectorArg::All => Which::Br,
                SectorArg::Vcirc => Which::Vcirc,
                SectorArg::Vbul => Which::Vbul,
            };
            let dims = assemble(arity(n)?, which, dual).graded.dims;
            for (d, k) in &dims {
                println!("{d}\t{k}");
            }
            if let Some(p) = csv {
                let name = format!("C({which}{})", if dual { "*" } else { "" });
                write(&p, &dims_csv(&dim_rows(n, &name, &dims)))?;
            }
            Ok(PASS)
        }
        Cmd::Cohomology { n, which, dual, json, csv } => {
            let h = cohomology_dims(&assemble(arity(n)?, which, dual).graded);
            for (d, k) in &h {
                println!("{d}\t{k}");
            }
            let name = format!("H({which}{})", if dual { "*" } else { "" });
            if let Some(p) = json {
                let dims: Vec<_> = h.iter().map(|(d, k)| json!({"degree": d, "dim": k})).collect();
                let v = json!({"n": n, "complex": name, "sign_convention": calibrated(), "dims": dims});
                write(&p, &serde_json::to_string_pretty(&v).unwrap())?;
            }
            if let Some(p) = csv {
                write(&p, &dims_csv(&dim_rows(n, &name, &h)))?;
            }
            Ok(PASS)
        }
        Cmd::Verify { suite, max_n, json, csv } => {
            let report = run_suite(suite, arity(max_n)?).map_err(|e| usage(e.to_string()))?;
            for c in &report.checks {
                let status = match c.status {
                    braceops::report::Status::Pass => "PASS",
                    braceops::report::Status::Fail => "FAIL",
                };
                let tag = if c.best_effort { " (best-effort)" } else { "" };
                println!("{status} {}{tag}", c.name);
            }
            if let Some(p) = json {
                write(&p, &report.to_json())?;
            }
            if let Some(p) = csv {
                write(&p, &dims_csv(&report.dim_rows))?;
            }
            let passed = report.passed();
            println!("{}", if passed { "verdict: pass" } else { "verdict: fail" });
            Ok(if passed { PASS } else { FAIL })
        }
        Cmd::Spectral { n, json } => {
            let pages = spectral_pages(arity(n)?);
            for p in &pages {
                let cells: Vec<String> = p.entries.iter().map(|e| format!("({},{})={}", e.q, e.degree, e.dim)).collect();
                println!("E{}: {}", p.r, cells.join(" "));
            }
            if let Some(path) = json {
                write(&path, &serde_json::to_string_pretty(&json!({"n": n, "pages": pages})).unwrap())?;
            }
            Ok(PASS)
        }
        Cmd::Fixtures { dir } => {
            let outcomes = match dir {
                Some(d) => check_dir(&d, calibrated()).map_err(|e| usage(e.to_string()))?,
                None => check_all(&builtin(), calibrated()),
            };
            for o in &outcomes {
                println!("{} {}", if o.pass { "PASS" } else { "FAIL" }, o.name);
                if let Some(e) = &o.error {
                    println!("  error: {e}");
                }
                for t in &o.difference {
                    println!("  computed - expected: {} {}", t.coeff, t.tree);
                }
            }
            Ok(if outcomes.iter().all(|o| o.pass) { PASS } else { FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("braceops: {msg}");
            ExitCode::from(code)
        }
    }
}
