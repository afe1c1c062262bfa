use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use equipment::fpmonad::Truncation;
use equipment_harness::instance::{load_instance, CheckSpec, Instance};
use equipment_harness::report::{Check, Format, Parameters, Report, Section};
use equipment_harness::run::{self, Thm1Corpus};

/// Exit code for unreadable or invalid input.
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "equip", version, about = "Finite checks of equipment-level constructions")]
struct Cli {
    /// Output format of the report.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit timing fields, so reruns compare byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Truncation of sequence lengths.
    #[arg(long, global = true, default_value_t = 3)]
    bound: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load an instance file and run every law check.
    Validate { file: PathBuf },
    /// Three-way cross-validation over the copresheaf corpus.
    Thm1 {
        /// The exhaustive library sweep (the default).
        #[arg(long, conflicts_with = "seed")]
        exhaustive: bool,
        /// Random copresheaves on random posets instead.
        #[arg(long)]
        seed: Option<u64>,
        /// How many random copresheaves.
        #[arg(long, default_value_t = run::DEFAULT_RANDOM_INSTANCES, requires = "seed")]
        cases: usize,
    },
    /// Lifting of Kan extensions: the thm23 checks of a file, or the curated set.
    Thm2 { file: Option<PathBuf> },
    /// Right Beck-Chevalley condition for one profunctor of a file.
    Rbc {
        file: PathBuf,
        #[arg(long)]
        profunctor: String,
    },
    /// Cosiftedness of the category of elements of one copresheaf.
    Cosifted {
        file: PathBuf,
        #[arg(long)]
        copresheaf: String,
    },
    /// Seeded lemma suites.
    Suite {
        #[arg(long, default_value_t = run::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = run::DEFAULT_CASES)]
        cases: usize,
        /// Compose without the coend quotient; the unit-law suite must fail.
        #[arg(long)]
        raw_coend: bool,
    },
    /// Every suite and sweep in one report.
    Report {
        #[arg(long, default_value_t = run::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = run::DEFAULT_CASES)]
        cases: usize,
    },
    /// Every check declared in an instance file.
    Run { file: PathBuf },
}

fn load(path: &Path) -> Result<Instance, String> {
    load_instance(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn only(inst: &Instance, keep: impl Fn(&CheckSpec) -> bool) -> Instance {
    Instance { checks: inst.checks.iter().filter(|c| keep(c)).cloned().collect(), ..inst.clone() }
}

fn build(cli: &Cli, bound: Truncation) -> Result<Report, String> {
    Ok(match &cli.command {
        Command::Validate { file } => {
            let inst = load(file)?;
            let mut r = Report::new("validate", Parameters { bound: bound.bound(), seed: None, cases: None });
            let detail = format!(
                "{} categories, {} functors, {} copresheaves, {} presheaves, {} profunctors, {} product choices, {} checks",
                inst.categories.len(),
                inst.functors.len(),
                inst.copresheaves.len(),
                inst.presheaves.len(),
                inst.profunctors.len(),
                inst.product_choices.len(),
                inst.checks.len()
            );
            let mut s = Section::new("validate");
            s.push(Check::new(file.display().to_string(), true).detail(detail));
            r.push(s.finish(), None);
            r
        }
        Command::Thm1 { seed, cases, .. } => {
            let corpus = match seed {
                Some(seed) => Thm1Corpus::Random { seed: *seed, instances: *cases },
                None => Thm1Corpus::Exhaustive,
            };
            run::thm1_report(corpus, bound)
        }
        Command::Thm2 { file: None } => run::thm23_report(bound),
        Command::Thm2 { file: Some(file) } => {
            let inst = only(&load(file)?, |c| matches!(c, CheckSpec::Thm23 { .. }));
            if inst.checks.is_empty() {
                return Err(format!("{}: no thm23 checks declared", file.display()));
            }
            run::instance_report("thm2", &inst, bound)
        }
        Command::Rbc { file, profunctor } => {
            let inst = load(file)?;
            if !inst.profunctors.contains_key(profunctor) {
                return Err(format!("{}: no profunctor `{profunctor}`", file.display()));
            }
            let inst = Instance { checks: vec![CheckSpec::Rbc { profunctor: profunctor.clone() }], ..inst };
            run::instance_report("rbc", &inst, bound)
        }
        Command::Cosifted { file, copresheaf } => {
            let inst = load(file)?;
            if !inst.copresheaves.contains_key(copresheaf) {
                return Err(format!("{}: no copresheaf `{copresheaf}`", file.display()));
            }
            let inst = Instance { checks: vec![CheckSpec::Cosifted { copresheaf: copresheaf.clone() }], ..inst };
            run::instance_report("cosifted", &inst, bound)
        }
        Command::Suite { seed, cases, raw_coend } => run::suite_report(*seed, *cases, bound, *raw_coend),
        Command::Report { seed, cases } => run::full_report(*seed, *cases, bound),
        Command::Run { file } => run::instance_report("run", &load(file)?, bound),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bound = match Truncation::new(cli.bound) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("equip: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let report = match build(&cli, bound) {
        Ok(r) if cli.no_timing => r.without_timing(),
        Ok(r) => r,
        Err(e) => {
            eprintln!("equip: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let written = match &cli.out {
        Some(path) => report.write(path, cli.format),
        None => report.render(cli.format).map(|s| print!("{s}")),
    };
    if let Err(e) = written {
        eprintln!("equip: {e}");
        return ExitCode::from(INPUT_ERROR);
    }
    ExitCode::from(report.exit_code() as u8)
}
