//! `vla`: loads algebra documents, runs constructions and verification sweeps
//! and prints their reports.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vla::report::VerificationReport;
use vla::verify::Window;
use vla::VlaError;

#[derive(Parser)]
#[command(name = "vla", version, about = "Exact verification for vertex algebras built from Leibniz algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Name {
    Check,
    Vg,
    Jacobi,
    Skew,
    Dprops,
    Assoc,
    Jv,
    Embed,
    Perm,
    Adjoin,
    Hemi,
}

#[derive(Subcommand)]
enum Command {
    /// Left Leibniz identity, squares ideal, Lie quotient and the optional form.
    Check(Config),
    /// Builds the induced module and prints its graded dimensions.
    Vg(Config),
    /// Jacobi identity components over the window.
    Jacobi(Config),
    /// Skew symmetry on C[D] ⊗ V_g.
    Skew(Config),
    /// The two translation properties on C[D] ⊗ V_g.
    Dprops(Config),
    /// Weak associativity over the window.
    Assoc(Config),
    /// Saturates the skew-defect ideal and reports J_V.
    Jv(Config),
    /// The embedding obstruction over all basis pairs.
    Embed(Config),
    /// The vertex algebra of a Perm algebra with a derivation.
    Perm(Config),
    /// Adjoins a vacuum to the vertex algebra of a Perm algebra.
    Adjoin(Config),
    /// The hemisemidirect product of the vacuum-adjoined algebra.
    Hemi(Config),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Debug)]
struct Config {
    /// Algebra document (Leibniz or Perm, depending on the subcommand).
    input: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_degree: i64,
    #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
    mode_min: i64,
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    mode_max: i64,
    /// `adjoint`, `trivial` or a path to a module record; defaults to the
    /// document's own module entry.
    #[arg(long)]
    module: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Adds independent confirmations (level-zero kernel, quotient sweep).
    #[arg(long)]
    cross_check: bool,
    /// Treats a nonzero J_V as a failed check.
    #[arg(long)]
    expect_emb: bool,
}

impl Config {
    fn window(&self) -> vla::Result<Window> {
        if self.max_degree < 1 {
            return Err(VlaError::Precondition(format!("--max-degree must be at least 1, got {}", self.max_degree)));
        }
        Window::new(self.max_degree, self.mode_min, self.mode_max)
    }

    fn params(&self) -> Value {
        json!({
            "input": self.input.display().to_string(),
            "max_degree": self.max_degree,
            "mode_min": self.mode_min,
            "mode_max": self.mode_max,
            "module": self.module,
            "cross_check": self.cross_check,
            "expect_emb": self.expect_emb,
        })
    }
}

/// What a subcommand produced.
#[derive(Default)]
pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    pub graded_dims: Option<Value>,
}

fn split(command: Command) -> (Name, Config) {
    match command {
        Command::Check(c) => (Name::Check, c),
        Command::Vg(c) => (Name::Vg, c),
        Command::Jacobi(c) => (Name::Jacobi, c),
        Command::Skew(c) => (Name::Skew, c),
        Command::Dprops(c) => (Name::Dprops, c),
        Command::Assoc(c) => (Name::Assoc, c),
        Command::Jv(c) => (Name::Jv, c),
        Command::Embed(c) => (Name::Embed, c),
        Command::Perm(c) => (Name::Perm, c),
        Command::Adjoin(c) => (Name::Adjoin, c),
        Command::Hemi(c) => (Name::Hemi, c),
    }
}

fn command_name(name: Name) -> &'static str {
    match name {
        Name::Check => "check",
        Name::Vg => "vg",
        Name::Jacobi => "jacobi",
        Name::Skew => "skew",
        Name::Dprops => "dprops",
        Name::Assoc => "assoc",
        Name::Jv => "jv",
        Name::Embed => "embed",
        Name::Perm => "perm",
        Name::Adjoin => "adjoin",
        Name::Hemi => "hemi",
    }
}

fn run(name: Name, config: &Config) -> vla::Result<Outcome> {
    let window = config.window()?;
    let text = std::fs::read_to_string(&config.input)
        .map_err(|e| VlaError::Document(e.to_string()))?;
    match name {
        Name::Check => commands::check(&text),
        Name::Vg => commands::vg(&text, config),
        Name::Jacobi => commands::jacobi(&text, config, &window),
        Name::Skew => commands::skew(&text, config, &window),
        Name::Dprops => commands::dprops(&text, &window),
        Name::Assoc => commands::assoc(&text, config, &window),
        Name::Jv => commands::jv(&text, config),
        Name::Embed => commands::embed(&text, &window),
        Name::Perm => commands::perm(&text, &window),
        Name::Adjoin => commands::adjoin(&text, &window),
        Name::Hemi => commands::hemi(&text, &window),
    }
}

fn usage_error(name: Name, config: &Config, err: &VlaError) -> ExitCode {
    let message = match err {
        VlaError::WindowExceeded { required, available } => format!(
            "{err}; rerun with a basis reaching degree {required} (built to {available}) or a smaller window"
        ),
        VlaError::Document(_) => format!("{}: {err}", config.input.display()),
        _ => err.to_string(),
    };
    match config.format {
        Format::Json => {
            let doc = json!({"command": command_name(name), "params": config.params(), "error": message});
            let _ = writeln!(std::io::stdout().lock(), "{doc}");
        }
        Format::Text => eprintln!("vla {}: {message}", command_name(name)),
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (name, config) = split(cli.command);
    let outcome = match run(name, &config) {
        Ok(o) => o,
        Err(e) => return usage_error(name, &config, &e),
    };
    let pass = outcome.reports.iter().all(|r| r.pass);
    let mut out = std::io::stdout().lock();
    match config.format {
        Format::Json => {
            let findings: Vec<Value> = outcome
                .reports
                .iter()
                .flat_map(|r| {
                    r.findings
                        .iter()
                        .map(|f| json!({"check": r.check, "input": f.input, "detail": f.detail}))
                })
                .collect();
            let doc = json!({
                "command": command_name(name),
                "params": config.params(),
                "pass": pass,
                "findings": findings,
                "graded_dims": outcome.graded_dims,
                "reports": outcome.reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("report serialization"));
        }
        Format::Text => {
            for r in &outcome.reports {
                let _ = write!(out, "{}", r.to_text());
            }
            if let Some(dims) = &outcome.graded_dims {
                let _ = writeln!(out, "graded dimensions: {dims}");
            }
            let _ = writeln!(out, "result: {}", if pass { "PASS" } else { "FAIL" });
        }
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
