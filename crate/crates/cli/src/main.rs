mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sullivan::classify::classify_with;
use sullivan::cohomology::{self, BettiOptions, EllipticStatus};
use sullivan::corpus;
use sullivan::hilali::{self, Verdict};
use sullivan::sequences::{gysin_chain_check, wang_sequence_check};
use sullivan::text::parse_document;
use sullivan::{verify_hilali, SullivanModel, ValidationOptions};

use report::{Envelope, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "sullivan",
    version,
    about = "Cohomology, classification and Hilali checks for minimal Sullivan algebras"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check degrees, minimality and d² = 0.
    Validate { file: String },
    /// Betti numbers, total dimension and Euler characteristic.
    Betti {
        file: String,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Structural classes: pure, two-stage, hyperelliptic, class (I).
    Classify { file: String },
    /// dim H ≥ dim W together with the two-stage and toral bounds.
    Hilali { file: String },
    /// Split Wang sequence for a closed odd generator.
    Wang {
        file: String,
        #[arg(long = "gen")]
        generator: String,
    },
    /// Split Gysin sequences peeling the given generators in order.
    Gysin {
        file: String,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        peel: Vec<String>,
    },
    /// Triples (n1, n2, r) satisfying neither counting condition.
    Triples {
        #[arg(long, default_value_t = 5)]
        nmax: u32,
        #[arg(long, default_value_t = 3)]
        rmax: u32,
    },
    /// List, check or export the built-in models.
    Corpus {
        #[arg(long)]
        run_all: bool,
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
}

/// An input problem: reported on stderr, exit status 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Run = Result<Output, InputError>;

/// Reads `arg` as a file, or failing that as a corpus entry name. Models
/// are validated unless `validate` is false.
fn load(arg: &str, validate: bool) -> Result<SullivanModel, InputError> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{arg}: {e}")))?;
        let doc = parse_document(&text).map_err(|e| InputError(format!("{arg}:{e}")))?;
        let model = if validate {
            doc.to_model(&ValidationOptions::default())
        } else {
            doc.to_model_unchecked()
        };
        return model.map_err(|e| InputError(format!("{arg}: {e}")));
    }
    corpus::builtin(arg)
        .map(|e| e.model)
        .map_err(|_| InputError(format!("{arg}: no such file or corpus entry")))
}

fn generator(model: &SullivanModel, name: &str) -> Result<usize, InputError> {
    model
        .id_of(name)
        .ok_or_else(|| InputError(format!("unknown generator `{name}`")))
}

fn run(cli: &Cli) -> Run {
    let opts = BettiOptions::default();
    match &cli.command {
        Command::Validate { file } => {
            let model = load(file, false)?;
            let report = model.validate(&ValidationOptions::default());
            let ok = report.accepted();
            let mut env = Envelope::new(&model, None);
            env.warnings.extend(report.warnings.iter().cloned());
            env.validation = Some(report);
            Ok(Output::model(env, ok))
        }
        Command::Betti { file, max_degree } => {
            let model = load(file, true)?;
            let table = cohomology::betti(
                &model,
                &BettiOptions {
                    max_degree: *max_degree,
                    ..opts
                },
            );
            Ok(Output::model(Envelope::new(&model, Some(table)), true))
        }
        Command::Classify { file } => {
            let model = load(file, true)?;
            let report = classify_with(&model, &opts)?;
            let mut env = Envelope::new(&model, Some(cohomology::betti(&model, &opts)));
            env.warnings.extend(report.warnings.iter().cloned());
            env.classes = Some(report);
            Ok(Output::model(env, true))
        }
        Command::Hilali { file } => {
            let model = load(file, true)?;
            let report = verify_hilali(&model);
            let ok = report.verdict == Verdict::Holds;
            let mut env = Envelope::new(&model, Some(report.betti.clone()));
            env.warnings.extend(report.warnings.iter().cloned());
            env.hilali = Some(report);
            Ok(Output::model(env, ok))
        }
        Command::Wang {
            file,
            generator: name,
        } => {
            let model = load(file, true)?;
            let w = generator(&model, name)?;
            let seq = wang_sequence_check(&model, w, &opts)?;
            let ok = seq.identity_holds;
            let mut env = Envelope::new(&model, Some(cohomology::betti(&model, &opts)));
            if !seq.complete {
                env.warnings
                    .push("sequence checked only up to the computed degrees".into());
            }
            env.wang = Some(seq);
            Ok(Output::model(env, ok))
        }
        Command::Gysin { file, peel } => {
            let model = load(file, true)?;
            let order = peel
                .iter()
                .map(|n| generator(&model, n))
                .collect::<Result<Vec<_>, _>>()?;
            let chain = gysin_chain_check(&model, &order, &opts)?;
            let ok = chain.chain_holds && chain.steps.iter().all(|s| s.sequence.identity_holds);
            let mut env = Envelope::new(&model, Some(cohomology::betti(&model, &opts)));
            if let Some(g) = &chain.failed_at {
                env.warnings.push(format!(
                    "Euler class of `{g}` does not square to zero in cohomology"
                ));
            }
            env.gysin = Some(chain);
            Ok(Output::model(env, ok))
        }
        Command::Triples { nmax, rmax } => Ok(Output::Triples {
            nmax: *nmax,
            rmax: *rmax,
            triples: hilali::scan_triples(*nmax, *rmax),
        }),
        Command::Corpus { run_all, export } => {
            if let Some(dir) = export {
                let n = corpus::export(dir)
                    .map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
                return Ok(Output::Exported {
                    dir: dir.display().to_string(),
                    count: n,
                });
            }
            if *run_all {
                let rows: Vec<report::CorpusRow> = corpus::all().iter().map(check_entry).collect();
                let ok = rows.iter().all(|r| r.mismatches.is_empty());
                return Ok(Output::CorpusRun { rows, ok });
            }
            Ok(Output::CorpusList(
                corpus::all()
                    .into_iter()
                    .map(|e| (e.name, e.model.dim_w(), e.note))
                    .collect(),
            ))
        }
    }
}

fn check_entry(e: &corpus::CorpusEntry) -> report::CorpusRow {
    let h = verify_hilali(&e.model);
    let mut mismatches = Vec::new();
    if let Some(want) = e.expected.dim_h {
        if !h.complete || h.dim_h != want {
            mismatches.push(format!("dim H {} (expected {want})", h.dim_h));
        }
    }
    if h.elliptic == EllipticStatus::Certified && h.verdict != Verdict::Holds {
        mismatches.push(format!("verdict {:?}", h.verdict));
    }
    if let Ok(c) = sullivan::classify(&e.model) {
        let x = &e.expected;
        for (what, want, got) in [
            ("pure", x.pure, c.pure),
            ("two_stage", x.two_stage, c.two_stage),
            ("hyperelliptic", x.hyperelliptic, c.hyperelliptic),
            ("class_i", x.class_i, c.class_i_member),
        ] {
            if want.is_some_and(|w| w != got) {
                mismatches.push(format!("{what} {got}"));
            }
        }
        if x.stages.is_some_and(|s| s != c.stages) {
            mismatches.push(format!("stages {}", c.stages));
        }
        if x.elliptic.is_some_and(|s| s != c.elliptic.status) {
            mismatches.push(format!("ellipticity {:?}", c.elliptic.status));
        }
    } else {
        mismatches.push("classification failed".into());
    }
    report::CorpusRow {
        name: e.name.clone(),
        dim_w: h.dim_w,
        dim_h: h.dim_h,
        complete: h.complete,
        verdict: h.verdict,
        elliptic: h.elliptic,
        mismatches,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let ok = out.ok();
            match cli.format {
                Format::Json => println!("{}", out.json()),
                Format::Text => print!("{}", out.text()),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
