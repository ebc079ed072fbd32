mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sqz::sheafspace::Mode;
use sqz::{Limits, Report, Verdict};

#[derive(Parser)]
#[command(name = "sqz", version, about = "Verify square-zero extensions, torsors, thickenings and cotorsors over finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify objects read from JSON files.
    Check(Config),
    /// Enumerate and classify extensions and torsors of --base by --module.
    Classify(Config),
    /// Check the equivalence between extensions and torsors of --base by --module.
    Equiv(Config),
    /// Check the equivalence between thickenings and cotorsors of the space
    /// --base by the module sheaf --module.
    SchemeEquiv(Config),
    /// Group object axioms on seeded random pairs (or on --base/--module), or
    /// cogroup axioms when --base is a space; each structure is also corrupted
    /// and the corruptions must be rejected.
    Axioms(Config),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Spec,
    Ringed,
}

#[derive(Args, Clone)]
pub struct Config {
    /// JSON input file (repeatable).
    #[arg(long = "input", value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
    /// Base ring spec, or space spec for scheme-level commands.
    #[arg(long, value_name = "SPEC")]
    pub base: Option<String>,
    /// Module spec, or module-sheaf spec for scheme-level commands.
    #[arg(long, value_name = "SPEC")]
    pub module: Option<String>,
    /// Search steps allowed per enumeration.
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Largest carrier size accepted by enumerations.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    #[arg(long, value_enum, default_value = "spec")]
    pub mode: ModeArg,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

impl Config {
    pub fn limits(&self) -> sqz::Result<Limits> {
        Limits::new(self.cap as usize, self.budget)
    }

    pub fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Spec => Mode::Spec,
            ModeArg::Ringed => Mode::Ringed,
        }
    }

    pub fn require(&self, value: &Option<String>, flag: &str) -> sqz::Result<String> {
        value
            .clone()
            .ok_or_else(|| sqz::Error::Precondition(format!("--{flag} is required for this command")))
    }

    fn echo(&self, command: &str) -> Value {
        json!({
            "command": command,
            "inputs": self.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "base": self.base,
            "module": self.module,
            "budget": self.budget,
            "cap": self.cap,
            "mode": self.mode().label(),
            "seed": self.seed,
            "format": match self.format { Format::Json => "json", Format::Text => "text" },
        })
    }
}

/// What a command produced before it is rendered.
pub struct Outcome {
    pub checks: Report,
    pub counts: Value,
    /// Extra payload, such as class representatives.
    pub details: Option<Value>,
}

fn render(command: &str, config: &Config, result: &sqz::Result<Outcome>) -> (String, ExitCode) {
    let (status, code) = match result {
        Ok(o) if o.checks.passed() => ("pass", 0),
        Ok(_) => ("fail", 1),
        Err(_) => ("error", 2),
    };
    let mut report = json!({"status": status, "config": config.echo(command)});
    match result {
        Ok(o) => {
            report["checks"] = json!(o.checks.checks);
            report["counts"] = o.counts.clone();
            if let Some(d) = &o.details {
                report["details"] = d.clone();
            }
        }
        Err(e) => {
            report["checks"] = json!([]);
            report["error"] = json!(e.to_string());
        }
    }
    let text = match config.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => text_report(command, status, result),
    };
    (text, ExitCode::from(code))
}

fn text_report(command: &str, status: &str, result: &sqz::Result<Outcome>) -> String {
    let mut s = format!("{command}: {}\n", status.to_uppercase());
    match result {
        Ok(o) => {
            s.push_str(&o.checks.to_string());
            if let Value::Object(counts) = &o.counts {
                for (k, v) in counts {
                    s.push_str(&format!("{k}: {v}\n"));
                }
            }
        }
        Err(e) => s.push_str(&format!("error: {e}\n")),
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, config) = match &cli.command {
        Command::Check(c) => ("check", c),
        Command::Classify(c) => ("classify", c),
        Command::Equiv(c) => ("equiv", c),
        Command::SchemeEquiv(c) => ("scheme-equiv", c),
        Command::Axioms(c) => ("axioms", c),
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Check(c) => commands::check(c),
        Command::Classify(c) => commands::classify(c),
        Command::Equiv(c) => commands::equiv(c),
        Command::SchemeEquiv(c) => commands::scheme_equiv(c),
        Command::Axioms(c) => commands::axioms(c),
    };
    // kept out of the report so reports stay byte-reproducible
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    let (text, code) = render(name, config, &result);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Ok(o) = &result {
        if o.checks.checks.iter().any(|c| c.verdict == Verdict::Fail && c.witness.is_none()) {
            eprintln!("internal error: failing check without a witness");
            return ExitCode::from(2);
        }
    }
    code
}
