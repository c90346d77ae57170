use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use monorel::growth::probe;
use monorel::report::{verify_system, Verdict, VerifyConfig};
use monorel::rewrite::RewriteSystem;
use monorel::templates::{emit_system_with, EmitError};
use monorel::verifier::{bfs_equal, BfsBounds, EqualityVerdict, Presentation};
use monorel::{classify, RelatorExponents, TemplateReading, Word};

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "monorel", version, about = "Complete rewriting systems for Mon<a,b : a^α b^β a^γ b^δ a^ε b^φ = b>")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Bounds {
    #[arg(long, env = "MONOREL_STEP_LIMIT", default_value_t = monorel::rewrite::DEFAULT_STEP_LIMIT)]
    step_limit: usize,
    #[arg(long, env = "MONOREL_DEPTH", default_value_t = monorel::verifier::DEFAULT_DEPTH_LIMIT)]
    depth: usize,
    /// Defaults to |relator| + 24.
    #[arg(long, env = "MONOREL_LENGTH_LIMIT")]
    length_limit: Option<usize>,
    #[arg(long, env = "MONOREL_COEF_BOUND", default_value_t = monorel::termination::DEFAULT_COEF_BOUND)]
    coef_bound: u32,
    #[arg(long, env = "MONOREL_CONST_BOUND", default_value_t = monorel::termination::DEFAULT_CONST_BOUND)]
    const_bound: u32,
    #[arg(long, env = "MONOREL_MAXLEN", default_value_t = monorel::verifier::DEFAULT_CROSS_MAXLEN)]
    maxlen: usize,
    #[arg(long, default_value = "canonical", value_parser = parse_reading)]
    template_reading: TemplateReading,
    /// Print JSON instead of text.
    #[arg(long)]
    structured: bool,
}

impl Bounds {
    fn check(&self) -> Result<(), String> {
        if self.step_limit == 0 || self.depth == 0 || self.coef_bound == 0 || self.length_limit == Some(0) {
            return Err("bounds must be positive".into());
        }
        Ok(())
    }

    fn bfs(&self) -> BfsBounds {
        BfsBounds { depth_limit: self.depth, length_limit: self.length_limit, ..BfsBounds::default() }
    }

    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            step_limit: self.step_limit,
            coef_bound: self.coef_bound,
            const_bound: self.const_bound,
            bfs: self.bfs(),
            cross_maxlen: self.maxlen,
            ..VerifyConfig::default()
        }
    }
}

fn parse_reading(s: &str) -> Result<TemplateReading, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Print the case label and derived parameters.
    Classify {
        #[arg(num_args = 6, required = true)]
        exponents: Vec<usize>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the rewriting system for an exponent tuple.
    Emit {
        #[arg(num_args = 6, required = true)]
        exponents: Vec<usize>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Run the full verification pipeline.
    Verify {
        #[arg(num_args = 6)]
        exponents: Vec<usize>,
        /// Verify a serialized system instead (`-` for stdin).
        #[arg(long, conflicts_with = "exponents")]
        system: Option<String>,
        #[arg(long)]
        skip_cross_check: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Normalize a word with the emitted system.
    Normalize {
        #[arg(long, num_args = 6, required = true)]
        exponents: Vec<usize>,
        word: String,
        /// Print every intermediate word.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Decide whether two words over {a, b} are equal in the monoid.
    Equal {
        #[arg(long, num_args = 6, required = true)]
        exponents: Vec<usize>,
        u: String,
        v: String,
        /// Search for a derivation with the original relation instead of comparing normal forms.
        #[arg(long)]
        bfs: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Classify, emit and verify every tuple with entries in lo..=hi.
    Sweep {
        #[arg(long, default_value_t = 1)]
        lo: usize,
        #[arg(long, default_value_t = 3)]
        hi: usize,
        /// Run soundness on every tuple whose index is divisible by this.
        #[arg(long, default_value_t = 10)]
        soundness_every: usize,
        #[arg(long)]
        cross_check: bool,
        /// Where to write the machine-readable failure list.
        #[arg(long, default_value = "sweep_failures.json")]
        failures: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Empirical Dehn and space functions.
    Dehn {
        #[arg(num_args = 6, required = true)]
        exponents: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        bounds: Bounds,
    },
}

enum Failure {
    Input(String),
}

impl From<EmitError> for Failure {
    fn from(e: EmitError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn exponents(v: &[usize]) -> Result<RelatorExponents, Failure> {
    let arr: [usize; 6] = v.try_into().map_err(|_| Failure::Input("expected six exponents".into()))?;
    RelatorExponents::new(arr).map_err(|e| Failure::Input(e.to_string()))
}

fn word_in(text: &str, s: &RewriteSystem) -> Result<Word, Failure> {
    let alphabet: Vec<_> = s.alphabet().iter().copied().collect();
    Word::parse_in(text, &alphabet).map_err(|e| Failure::Input(format!("{text:?}: {e}")))
}

fn show(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.to_string()
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { exponents: e, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            let e = exponents(&e)?;
            let c = classify(&e).map_err(|err| Failure::Input(err.to_string()))?;
            if bounds.structured {
                println!("{}", serde_json::to_string_pretty(&c).expect("serializable"));
            } else {
                println!("{c}");
            }
            Ok(0)
        }
        Command::Emit { exponents: e, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            let s = emit_system_with(&exponents(&e)?, bounds.template_reading)?;
            if bounds.structured {
                println!("{}", s.to_json());
            } else {
                print!("{s}");
            }
            Ok(0)
        }
        Command::Verify { exponents: e, system, skip_cross_check, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            let s = match system {
                Some(path) => read_system(&path)?,
                None => emit_system_with(&exponents(&e)?, bounds.template_reading)?,
            };
            let Some(meta) = s.meta() else {
                return Err(Failure::Input("system has no meta block naming its exponents".into()));
            };
            let p = Presentation::from_exponents(&meta.exponents);
            let mut config = bounds.verify_config();
            config.cross_check = !skip_cross_check;
            let report = verify_system(&s, &p, &config);
            if bounds.structured {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.summary());
            }
            Ok(report.verdict.exit_code() as u8)
        }
        Command::Normalize { exponents: e, word, trace, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            let s = emit_system_with(&exponents(&e)?, bounds.template_reading)?;
            let w = word_in(&word, &s)?;
            if trace {
                match s.normalize_trace(&w, bounds.step_limit) {
                    Ok(chain) => {
                        for step in &chain {
                            println!("{}", show(step));
                        }
                        Ok(0)
                    }
                    Err(err) => {
                        println!("{err}");
                        Ok(2)
                    }
                }
            } else {
                match s.normalize(&w, bounds.step_limit) {
                    Ok(n) => {
                        println!("{} ({} steps)", show(&n.word), n.steps);
                        Ok(0)
                    }
                    Err(err) => {
                        println!("{err}");
                        Ok(2)
                    }
                }
            }
        }
        Command::Equal { exponents: e, u, v, bfs, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            let e = exponents(&e)?;
            let base: Vec<_> = monorel::Letter::BASE.to_vec();
            let parse = |t: &str| Word::parse_in(t, &base).map_err(|err| Failure::Input(format!("{t:?}: {err}")));
            let (u, v) = (parse(&u)?, parse(&v)?);
            if bfs {
                return Ok(match bfs_equal(&u, &v, &Presentation::from_exponents(&e), &bounds.bfs()) {
                    EqualityVerdict::Proved { depth, .. } => {
                        println!("equal (derivation of length {depth})");
                        0
                    }
                    EqualityVerdict::Unknown { explored, .. } => {
                        println!("undecided: no derivation within bounds ({explored} words explored)");
                        2
                    }
                });
            }
            let s = emit_system_with(&e, bounds.template_reading)?;
            let nu = s.normalize(&u, bounds.step_limit);
            let nv = s.normalize(&v, bounds.step_limit);
            match (nu, nv) {
                (Ok(a), Ok(b)) if a.word == b.word => {
                    println!("equal (NF = {})", show(&a.word));
                    Ok(0)
                }
                (Ok(a), Ok(b)) => {
                    println!("not equal (NF {} vs {})", show(&a.word), show(&b.word));
                    Ok(1)
                }
                _ => {
                    println!("undecided: step limit exceeded");
                    Ok(2)
                }
            }
        }
        Command::Sweep { lo, hi, soundness_every, cross_check, failures, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            if lo == 0 || hi < lo || soundness_every == 0 {
                return Err(Failure::Input("need 1 <= lo <= hi and --soundness-every >= 1".into()));
            }
            sweep(lo, hi, soundness_every, cross_check, &failures, &bounds)
        }
        Command::Dehn { exponents: e, n, bounds } => {
            bounds.check().map_err(Failure::Input)?;
            if n == 0 {
                return Err(Failure::Input("--n must be >= 1".into()));
            }
            let e = exponents(&e)?;
            let s = emit_system_with(&e, bounds.template_reading)?;
            let report = probe(&s, &Presentation::from_exponents(&e), n, &bounds.bfs(), bounds.step_limit);
            if bounds.structured {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", report.to_table());
            }
            Ok(if report.rows.iter().any(|r| r.undecided > 0) { 2 } else { 0 })
        }
    }
}

fn read_system(path: &str) -> Result<RewriteSystem, Failure> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Input(e.to_string()))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
    };
    RewriteSystem::from_json(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn sweep(
    lo: usize,
    hi: usize,
    soundness_every: usize,
    cross_check: bool,
    failures: &PathBuf,
    bounds: &Bounds,
) -> Result<u8, Failure> {
    let tuples: Vec<RelatorExponents> = RelatorExponents::grid(hi - lo + 1)
        .map(|e| {
            let a = e.as_array().map(|v| v + lo - 1);
            RelatorExponents::new(a).expect("positive")
        })
        .collect();
    let results: Vec<(RelatorExponents, String, Verdict, Option<String>)> = tuples
        .par_iter()
        .enumerate()
        .map(|(idx, e)| {
            let s = match emit_system_with(e, bounds.template_reading) {
                Ok(s) => s,
                Err(err) => return (*e, "-".to_string(), Verdict::Red, Some(err.to_string())),
            };
            let mut config = bounds.verify_config();
            config.soundness = idx % soundness_every == 0;
            config.cross_check = cross_check;
            let p = Presentation::from_exponents(e);
            let report = verify_system(&s, &p, &config);
            let label = s.meta().map(|m| m.classification.label.to_string()).unwrap_or_default();
            let dump = (report.verdict != Verdict::Green).then(|| report.to_json());
            (*e, label, report.verdict, dump)
        })
        .collect();

    let mut worst = Verdict::Green;
    let mut dumps = Vec::new();
    for (e, label, verdict, dump) in &results {
        println!("{e} {label} {verdict:?}");
        if let Some(d) = dump {
            dumps.push(serde_json::json!({ "exponents": e, "case": label, "verdict": verdict, "report": serde_json::from_str::<serde_json::Value>(d).unwrap_or(serde_json::Value::String(d.clone())) }));
        }
        worst = match (worst, verdict) {
            (Verdict::Red, _) | (_, Verdict::Red) => Verdict::Red,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Green,
        };
    }
    let green = results.iter().filter(|r| r.2 == Verdict::Green).count();
    println!("summary: {green}/{} green", results.len());
    fs::write(failures, serde_json::to_string_pretty(&dumps).expect("serializable"))
        .map_err(|e| Failure::Input(format!("{}: {e}", failures.display())))?;
    Ok(worst.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
