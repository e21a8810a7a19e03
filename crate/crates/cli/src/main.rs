//! `qdsim`: run the dialogue protocols, audit leakage, measure attack
//! detection and print the efficiency comparison.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdsim_core::analysis::{self, render_table1};
use qdsim_core::channel::{to_sorted_json, AdversaryKind, AdversaryModel, RunStatus};
use qdsim_core::choice::SeededChoices;
use qdsim_core::protocol::{random_message, run_with, ProtocolKind, RunConfig};
use qdsim_core::Bits;

const EXIT_USAGE: u8 = 1;
const EXIT_ABORT: u8 = 2;

#[derive(Parser)]
#[command(name = "qdsim", version, about = "Quantum dialogue simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol instance and write its transcript.
    Run(RunArgs),
    /// Exact leakage audit of a protocol under a passive eavesdropper.
    Audit(AuditArgs),
    /// Monte-Carlo detection statistics for an active eavesdropper.
    Attack(AttackArgs),
    /// Efficiency comparison table.
    Table1(OutputArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long, default_value = "bell")]
    protocol: ProtocolKind,
    /// Message pairs (bell only).
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Check pairs for the first check (bell only).
    #[arg(long, default_value_t = 4)]
    delta1: usize,
    /// Check pairs for the second check (bell only).
    #[arg(long, default_value_t = 4)]
    delta2: usize,
    /// Decoys for the third check (bell) or per quantum send (w, ghz).
    #[arg(long, default_value_t = 4)]
    delta3: usize,
    #[arg(long, env = "QDSIM_SEED", default_value_t = 0)]
    seed: u64,
}

impl ProtocolArgs {
    fn config(&self, adversary: AdversaryKind) -> RunConfig {
        let mut config = RunConfig::new(self.protocol, self.seed);
        config.n = self.n;
        config.delta1 = self.delta1;
        config.delta2 = self.delta2;
        config.delta3 = self.delta3;
        config.adversary = AdversaryModel::new(adversary);
        config
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Alice's message, e.g. `10`; random if omitted.
    #[arg(long)]
    alice_bits: Option<Bits>,
    /// Bob's message; random if omitted.
    #[arg(long)]
    bob_bits: Option<Bits>,
    #[arg(long, default_value = "none")]
    adversary: AdversaryKind,
    /// Transcript file.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value = "bell")]
    protocol: ProtocolKind,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[arg(long, default_value = "intercept-resend")]
    adversary: AdversaryKind,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[command(flatten)]
    output: OutputArgs,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn emit(json: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, format!("{json}\n")).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn show(bits: &Option<Bits>) -> String {
    bits.as_ref().map_or_else(|| "-".to_string(), Bits::to_string)
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let config = args.protocol.config(args.adversary);
    if config.protocol == ProtocolKind::Bell && config.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let len = config.message_len();
    for (name, given) in [("--alice-bits", &args.alice_bits), ("--bob-bits", &args.bob_bits)] {
        if let Some(b) = given {
            if b.len() != len {
                return Err(usage(format!(
                    "{name} must be {len} bits for {}, got {}",
                    config.protocol,
                    b.len()
                )));
            }
        }
    }
    let mut choices = SeededChoices::new(config.seed);
    let alice = args
        .alice_bits
        .clone()
        .unwrap_or_else(|| random_message(len, &mut choices));
    let bob = args
        .bob_bits
        .clone()
        .unwrap_or_else(|| random_message(len, &mut choices));
    let outcome = run_with(&config, &alice, &bob, &mut choices).map_err(usage)?;

    if let Some(path) = &args.output {
        emit(&outcome.transcript.to_json(), Some(path))?;
    }
    match &outcome.status {
        RunStatus::Completed => {
            println!(
                "alice_decoded={} bob_decoded={}",
                show(&outcome.alice_decoded),
                show(&outcome.bob_decoded)
            );
            Ok(())
        }
        RunStatus::Aborted { check } => Err(Failure {
            code: EXIT_ABORT,
            message: format!("aborted: {check} detected tampering"),
        }),
    }
}

fn cmd_audit(args: &AuditArgs) -> Result<(), Failure> {
    let report = analysis::leakage_report(args.protocol).map_err(usage)?;
    eprintln!(
        "{}: entropy per {} = {:.3} bits, mutual information = {:.3} bits",
        report.protocol, report.unit, report.unit_entropy_bits, report.mutual_information_bits
    );
    emit(&to_sorted_json(&report), args.output.output.as_deref())
}

fn cmd_attack(args: &AttackArgs) -> Result<(), Failure> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let config = args.protocol.config(args.adversary);
    let report = analysis::detection_stats(&config, args.trials).map_err(usage)?;
    for c in &report.checks {
        eprintln!(
            "{}: per-unit detection {:.4} ± {:.4} over {} units",
            c.check, c.per_unit.rate, c.per_unit.sigma, c.per_unit.total
        );
    }
    eprintln!("abort rate {:.4} ± {:.4}", report.aborts.rate, report.aborts.sigma);
    emit(&to_sorted_json(&report), args.output.output.as_deref())
}

fn cmd_table1(args: &OutputArgs) -> Result<(), Failure> {
    let rows = analysis::table1().map_err(usage)?;
    print!("{}", render_table1(&rows));
    match &args.output {
        Some(path) => emit(&to_sorted_json(&rows), Some(path)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Table1(a) => cmd_table1(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qdsim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
