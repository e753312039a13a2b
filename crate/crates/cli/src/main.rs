use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqnorm::combinators::{EquivClassEnumeration, OsRenorm};
use seqnorm::norm::{EvalOptions, Norm};
use seqnorm::probes::{
    boyd_estimate, inequality_suite, BoydEstimate, ProbeReport, ScenarioKind, SuiteConfig, Verdict,
    SUITES,
};
use seqnorm::{parse_space, FiniteVector, Interval, NormDescriptor, NormError};

mod format;

use format::{float_value, sig7, sig7_down, sig7_up};

#[derive(Parser)]
#[command(
    name = "seqnorm",
    version,
    about = "Sequence-space norms, renormings and their verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a norm on one vector.
    Eval {
        /// Space expression, e.g. "sym2R(lp(2))".
        space: String,
        /// Vector as JSON (dense `[a1, a2, ...]` or sparse `[[i, a], ...]`), or `@path` to read it from a file.
        vector: String,
        /// Tail cut for norms given by infinite sums.
        #[arg(long)]
        truncate: Option<usize>,
        /// Number of Y-space levels summed exactly.
        #[arg(long)]
        y_terms: Option<usize>,
        /// Wrap the space in the sum renorming over this many equivalence classes.
        #[arg(long)]
        os_classes: Option<usize>,
        /// Geometric weight decay of the sum renorming.
        #[arg(long, default_value_t = 0.5)]
        os_decay: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite and write its report.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        space: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long)]
        truncate: Option<usize>,
        /// Sequence generator for the two-r suite.
        #[arg(long, value_parser = parse_scenario)]
        scenario: Option<ScenarioKind>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the lower Boyd index from dilation norms.
    Boyd {
        space: String,
        #[arg(long, default_value_t = 16)]
        max_m: usize,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn parse_scenario(text: &str) -> Result<ScenarioKind, String> {
    ScenarioKind::parse(text).ok_or_else(|| {
        let names: Vec<&str> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
        format!(
            "unknown scenario '{text}' (expected one of {})",
            names.join(", ")
        )
    })
}

enum Failure {
    Parse(String),
    Eval(NormError),
    Io(io::Error),
}

impl From<NormError> for Failure {
    fn from(e: NormError) -> Self {
        Failure::Eval(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn space(text: &str) -> Result<NormDescriptor, Failure> {
    let descriptor = parse_space(text)
        .map_err(|e| Failure::Parse(format!("invalid space expression '{text}': {e}")))?;
    descriptor.validate()?;
    Ok(descriptor)
}

fn vector(arg: &str) -> Result<FiniteVector, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::Parse(format!("cannot read vector file {path}: {e}")))?,
        None => arg.to_string(),
    };
    FiniteVector::from_json(&text).map_err(|e| Failure::Parse(e.to_string()))
}

fn options(truncate: Option<usize>, y_terms: Option<usize>) -> EvalOptions {
    let mut opts = EvalOptions::default();
    if let Some(t) = truncate {
        opts.truncate = t;
    }
    if let Some(k) = y_terms {
        opts.y_terms = k;
    }
    opts
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Eval {
            space: text,
            vector: v,
            truncate,
            y_terms,
            os_classes,
            os_decay,
            format,
        } => {
            let descriptor = space(&text)?;
            let x = vector(&v)?;
            let opts = options(truncate, y_terms);
            let (name, value) = match os_classes {
                Some(classes) => {
                    let os = OsRenorm {
                        base: descriptor,
                        enumeration: EquivClassEnumeration::new(classes, os_decay)?,
                    };
                    (os.name(), os.evaluate(&x, &opts)?)
                }
                None => (descriptor.to_string(), descriptor.evaluate(&x, &opts)?),
            };
            emit(
                &render_eval(&name, &x, value, &opts, os_classes, format),
                None,
            )?;
            Ok(0)
        }
        Command::Verify {
            suite,
            space: text,
            samples,
            seed,
            tolerance,
            truncate,
            scenario,
            format,
            output,
        } => {
            let descriptor = space(&text)?;
            let cfg = SuiteConfig {
                samples,
                seed,
                tolerance,
                opts: options(truncate, None),
                scenario,
                ..SuiteConfig::default()
            };
            let report = inequality_suite(&suite, &descriptor, &cfg)?;
            emit(&render_report(&report, format), output.as_ref())?;
            Ok(match report.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inconclusive => 4,
            })
        }
        Command::Boyd {
            space: text,
            max_m,
            dim,
            samples,
            seed,
            format,
        } => {
            let descriptor = space(&text)?;
            let estimate = boyd_estimate(&descriptor, max_m, dim, samples, seed)?;
            emit(&render_boyd(&descriptor, &estimate, format), None)?;
            Ok(0)
        }
    }
}

fn render_eval(
    name: &str,
    x: &FiniteVector,
    value: Interval,
    opts: &EvalOptions,
    os: Option<usize>,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let mut out = json!({
                "space": name,
                "vector": serde_json::to_value(x).expect("vectors serialize"),
                "exact": value.is_point(),
                "lo": value.lo,
                "hi": value.hi,
                "truncate": opts.truncate,
                "yTerms": opts.y_terms,
            });
            if let Some(classes) = os {
                out["osClasses"] = json!(classes);
            }
            pretty(&out)
        }
        Format::Text | Format::Csv => match value.exact() {
            Some(v) => format!("{}\n", sig7(v)),
            None => {
                let mut line = format!(
                    "[{}, {}]  truncate={} y-terms={}",
                    sig7_down(value.lo),
                    sig7_up(value.hi),
                    opts.truncate,
                    opts.y_terms
                );
                if let Some(classes) = os {
                    line.push_str(&format!(" os-classes={classes}"));
                }
                line + "\n"
            }
        },
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn render_report(report: &ProbeReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["sample", "check", "lhs", "rhs", "margin", "input"])
                .expect("in-memory write");
            for v in &report.violations {
                w.write_record([
                    v.sample.to_string(),
                    v.check.clone(),
                    v.lhs.to_string(),
                    v.rhs.to_string(),
                    v.margin.to_string(),
                    v.input.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is utf-8")
        }
        Format::Text => {
            let mut out = format!(
                "suite: {}\nspace: {}\nverdict: {}\nsamples: {}\nseed: {}\ntolerance: {}\nworst margin: {}\nviolations recorded: {}\n",
                report.suite_name,
                report.space,
                report.verdict.as_str(),
                report.samples_run,
                report.seed,
                sig7(report.tolerance),
                sig7(report.worst_margin),
                report.violations.len(),
            );
            for (k, v) in &report.details {
                out.push_str(&format!("{k}: {}\n", sig7(*v)));
            }
            for v in report.violations.iter().take(10) {
                out.push_str(&format!(
                    "  sample {} {}: {} > {} (margin {})\n",
                    v.sample,
                    v.check,
                    sig7(v.lhs),
                    sig7(v.rhs),
                    sig7(v.margin)
                ));
            }
            for note in &report.notes {
                out.push_str(&format!("note: {note}\n"));
            }
            out
        }
    }
}

fn render_boyd(space: &NormDescriptor, estimate: &BoydEstimate, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Value> = estimate
                .rows
                .iter()
                .map(|r| json!({ "m": r.m, "bound": float_value(r.bound), "ratio": float_value(r.ratio) }))
                .collect();
            pretty(
                &json!({ "space": space.to_string(), "rows": rows, "pEstimate": float_value(estimate.p_estimate) }),
            )
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["m", "bound", "ratio"])
                .expect("in-memory write");
            for r in &estimate.rows {
                w.write_record([r.m.to_string(), r.bound.to_string(), r.ratio.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is utf-8")
        }
        Format::Text => {
            let mut out = format!("{:>4}  {:>13}  {:>13}\n", "m", "bound", "ratio");
            for r in &estimate.rows {
                out.push_str(&format!(
                    "{:>4}  {:>13}  {:>13}\n",
                    r.m,
                    sig7(r.bound),
                    sig7(r.ratio)
                ));
            }
            out.push_str(&format!("p estimate: {}\n", sig7(estimate.p_estimate)));
            out
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Parse(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Eval(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
