//! `bispec`: command-line front end to the job runner.
//!
//! Every subcommand is compiled to a small job and run in a fresh session,
//! so reports and exit codes follow one contract: 0 when every step passes,
//! 1 on a failed check, 2 on a usage or parse error.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use bispec_core::files::{builtin_job, JobReport, Session, TripleFile, JOBS, TRIPLES};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bispec",
    version,
    about = "Exact checks for bispectral operators"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    /// `key=value` records, one per line.
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrintStyle {
    Canonical,
    Dbasis,
    Graded,
}

impl PrintStyle {
    fn as_str(self) -> &'static str {
        match self {
            PrintStyle::Canonical => "canonical",
            PrintStyle::Dbasis => "dbasis",
            PrintStyle::Graded => "graded",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse an operator and print its normal form.
    Parse {
        expr: String,
        /// `differential x`, `qdilation x q` or `shift n`.
        #[arg(long, default_value = "differential x")]
        rule: String,
        #[arg(long, value_enum, default_value_t = PrintStyle::Canonical)]
        style: PrintStyle,
    },
    /// Multiply two operators, left factor first.
    Mul {
        left: String,
        right: String,
        #[arg(long, default_value = "differential x")]
        rule: String,
        #[arg(long, value_enum, default_value_t = PrintStyle::Canonical)]
        style: PrintStyle,
    },
    /// Formal conjugation of a differential operator.
    Conj {
        expr: String,
        #[arg(long, default_value = "differential x")]
        rule: String,
    },
    /// exp(c ad L) applied to an operator.
    Twist {
        expr: String,
        /// The scale c.
        #[arg(long, allow_hyphen_values = true)]
        scale: String,
        /// The locally nilpotent operator L.
        #[arg(long = "by")]
        by: String,
        #[arg(long, default_value = "differential x")]
        rule: String,
        #[arg(long, value_enum, default_value_t = PrintStyle::Canonical)]
        style: PrintStyle,
    },
    /// Darboux transformation of L = Q theta^-1 P into P Q theta^-1.
    Darboux {
        #[arg(long = "l")]
        l: String,
        #[arg(long = "p")]
        p: String,
        #[arg(long = "q")]
        q: String,
        #[arg(long)]
        theta: String,
        #[arg(long, default_value = "differential x")]
        rule: String,
    },
    /// Check the defining relations of a triple on a truncated wave function.
    WaveCheck {
        /// Bundled triple name or path to a triple file.
        triple: String,
        /// Wave spec overriding the one in the triple, e.g. `airy N=2 order=30`.
        #[arg(long)]
        wave: Option<String>,
    },
    /// Run a job file, or a bundled job by name.
    Run { job: String },
    /// List the bundled triples and jobs.
    ListBuiltin,
}

/// Arguments end up inside job lines, where `;` splits fields and `#` starts a comment.
fn field(s: &str) -> Result<&str, String> {
    if s.contains([';', '#', '\n']) {
        Err(format!("'{s}' may not contain ';', '#' or a newline"))
    } else {
        Ok(s)
    }
}

fn rule_line(rule: &str) -> Result<String, String> {
    Ok(format!("rule r {}\n", field(rule)?))
}

/// Bundled name or file contents, plus the directory for relative triple paths.
fn load(arg: &str, builtin: Option<&'static str>) -> Result<(String, Option<String>), String> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        let dir = path.parent().map(|p| p.to_string_lossy().into_owned());
        Ok((text, dir))
    } else if let Some(text) = builtin {
        Ok((text.to_string(), None))
    } else {
        Err(format!("{arg}: no such file or bundled name"))
    }
}

fn build_job(command: &Command) -> Result<(String, String, Option<String>), String> {
    let job = match command {
        Command::Parse { expr, rule, style } => {
            rule_line(rule)? + &format!("print r {} ; {}\n", field(expr)?, style.as_str())
        }
        Command::Mul {
            left,
            right,
            rule,
            style,
        } => {
            rule_line(rule)?
                + &format!(
                    "print r ({})*({}) ; {}\n",
                    field(left)?,
                    field(right)?,
                    style.as_str()
                )
        }
        Command::Conj { expr, rule } => {
            rule_line(rule)? + &format!("print r conj({})\n", field(expr)?)
        }
        Command::Twist {
            expr,
            scale,
            by,
            rule,
            style,
        } => {
            rule_line(rule)?
                + &format!(
                    "print r expad({}, {}, {}) ; {}\n",
                    field(scale)?,
                    field(by)?,
                    field(expr)?,
                    style.as_str()
                )
        }
        Command::Darboux {
            l,
            p,
            q,
            theta,
            rule,
        } => {
            rule_line(rule)?
                + &format!(
                    "darboux-op r Lbar ; {} ; {} ; {} ; {}\n",
                    field(l)?,
                    field(p)?,
                    field(q)?,
                    field(theta)?
                )
        }
        Command::WaveCheck { triple, wave } => {
            let path = Path::new(triple);
            let (name, mut job) = if path.is_file() {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{triple}: {e}"))?;
                let name = TripleFile::parse(&text)
                    .map_err(|e| format!("{triple}: {e}"))?
                    .name;
                let line = format!("triple {name} {}\n", field(triple)?);
                (name, line)
            } else {
                (triple.clone(), format!("triple {}\n", field(triple)?))
            };
            match wave {
                Some(spec) => {
                    job += &format!("wave w {}\ntriple-wave {} ; w\n", field(spec)?, name);
                }
                None => job += &format!("triple-wave {name}\n"),
            }
            return Ok(("wave-check".into(), job, None));
        }
        Command::Run { job } => {
            let (text, dir) = load(job, builtin_job(job))?;
            let name = Path::new(job)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or(job.clone());
            return Ok((name, text, dir));
        }
        Command::ListBuiltin => unreachable!("handled before building a job"),
    };
    let name = match command {
        Command::Parse { .. } => "parse",
        Command::Mul { .. } => "mul",
        Command::Conj { .. } => "conj",
        Command::Twist { .. } => "twist",
        _ => "darboux",
    };
    Ok((name.to_string(), job, None))
}

/// Write to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(report: &JobReport, format: Format) {
    match format {
        Format::Text => out(&report.to_text()),
        Format::Structured => out(&report.to_structured()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::ListBuiltin = cli.command {
        for (name, _) in TRIPLES {
            match cli.format {
                Format::Text => out(&format!("triple {name}\n")),
                Format::Structured => out(&format!("kind=triple name={name}\n")),
            }
        }
        for (name, _) in JOBS {
            match cli.format {
                Format::Text => out(&format!("job {name}\n")),
                Format::Structured => out(&format!("kind=job name={name}\n")),
            }
        }
        return ExitCode::SUCCESS;
    }
    let (name, text, dir) = match build_job(&cli.command) {
        Ok(j) => j,
        Err(msg) => {
            eprintln!("bispec: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut session = Session::new();
    if let Some(d) = dir {
        session = session.with_base_dir(d);
    }
    let report = session.run_job(&name, &text);
    emit(&report, cli.format);
    ExitCode::from(report.exit_code() as u8)
}
