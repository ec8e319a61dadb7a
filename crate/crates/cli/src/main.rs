use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tl_core::{
    alg_eval_word, build_tangle, check_derivation, enumerate_tl, equal_words, evaluate, factorize,
    fuzz_words, normal_form, normal_form_e, verify_presentation, Alphabet, Derivation, Equality, Rational,
    Tangle, TnTuple, Word,
};

#[derive(Parser)]
#[command(name = "tl", version, about = "Temperley-Lieb monoid and algebra calculator")]
struct Cli {
    /// Degree used to read words and tuples.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Doc,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word to its tangle and loop count.
    Eval {
        word: String,
    },
    /// Normal form x, y with λ_x ρ_y equal to the word.
    Nf {
        word: String,
        /// Write the derivation certificate to this file.
        #[arg(long)]
        cert: Option<String>,
    },
    /// Decide whether two words are equal in the monoid.
    Eq {
        left: String,
        right: String,
    },
    /// Multiply two tangles (file paths or inline tangles).
    Mul {
        left: String,
        right: String,
    },
    Dagger {
        tangle: String,
    },
    Factorize {
        tangle: String,
    },
    /// Build λ_x ρ_y from two tuples such as "(5,3,2)".
    Build {
        x: String,
        y: String,
    },
    /// List every tangle of the given degree.
    Enumerate {
        degree: usize,
    },
    /// Exhaustive checks in one degree, optionally with random words.
    Verify {
        degree: usize,
        #[arg(long)]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        max_len: usize,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate an E word in the twisted algebra.
    Alg {
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// ASCII picture of a tangle.
    Render {
        tangle: String,
    },
    #[command(hide = true)]
    CheckCert {
        file: String,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

type Outcome = Result<(String, u8), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(3)
        }
    }
}

fn degree(cli: &Cli) -> Result<usize, Failure> {
    cli.n
        .ok_or_else(|| Failure::Usage("--n <degree> is required to read words and tuples".into()))
}

fn word(cli: &Cli, s: &str) -> Result<Word, Failure> {
    Word::parse(degree(cli)?, s).map_err(usage)
}

fn tangle(arg: &str) -> Result<Tangle, Failure> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    text.trim().parse().map_err(usage)
}

fn doc(v: Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(&v).expect("JSON values serialise")
    )
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn tuple_json(t: &TnTuple) -> Value {
    json!(t.entries())
}

fn run(cli: &Cli) -> Outcome {
    let text = cli.format == Format::Text;
    match &cli.command {
        Command::Eval { word: w } => {
            let w = word(cli, w)?;
            if w.degree() < 2 {
                return Err(Failure::Usage("words need degree at least 2".into()));
            }
            let (t, m) = evaluate(&w);
            Ok((
                if text {
                    format!("{t}\nloops={m}\n")
                } else {
                    doc(json!({"tangle": t, "loops": m}))
                },
                0,
            ))
        }
        Command::Nf { word: w, cert } => {
            let w = word(cli, w)?;
            let (nf, d, canonical) = if w.uses_only(&[Alphabet::E]) && !w.is_empty() {
                let (nf, canonical, d) = normal_form_e(&w).map_err(usage)?;
                (nf, d, Some(canonical))
            } else {
                let (nf, d) = normal_form(&w).map_err(usage)?;
                (nf, d, None)
            };
            if let Some(path) = cert {
                fs::write(path, d.to_string()).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            }
            let out = if text {
                line(&nf)
            } else {
                doc(json!({
                    "x": tuple_json(&nf.x),
                    "y": tuple_json(&nf.y),
                    "word": nf.word().to_string(),
                    "canonical_e": canonical.map(|c| c.to_string()),
                    "steps": d.steps.len(),
                    "family": d.family.to_string(),
                }))
            };
            Ok((out, 0))
        }
        Command::Eq { left, right } => {
            let (a, b) = (word(cli, left)?, word(cli, right)?);
            let eq = equal_words(&a, &b).map_err(usage)?;
            let code = if eq.is_equal() { 0 } else { 1 };
            let out = match (&eq, text) {
                (Equality::Equal { .. }, true) => line("equal"),
                (Equality::NotEqual { .. }, true) => line("not equal"),
                (Equality::Equal { left, right }, false) => doc(json!({
                    "equal": true,
                    "common_word": left.end.to_string(),
                    "family": left.family.to_string(),
                    "steps": [left.steps.len(), right.steps.len()],
                })),
                (Equality::NotEqual { left, right }, false) => {
                    doc(json!({"equal": false, "tangles": [left, right]}))
                }
            };
            Ok((out, code))
        }
        Command::Mul { left, right } => {
            let (a, b) = (tangle(left)?, tangle(right)?);
            let (t, m) = a.compose(&b).map_err(usage)?;
            Ok((
                if text {
                    format!("{t}\nloops={m}\n")
                } else {
                    doc(json!({"tangle": t, "loops": m}))
                },
                0,
            ))
        }
        Command::Dagger { tangle: t } => {
            let t = tangle(t)?.dagger();
            Ok((if text { line(&t) } else { doc(json!(t)) }, 0))
        }
        Command::Factorize { tangle: t } => {
            let (x, y) = factorize(&tangle(t)?);
            Ok((
                if text {
                    format!("x={x} y={y}\n")
                } else {
                    doc(json!({"x": tuple_json(&x), "y": tuple_json(&y)}))
                },
                0,
            ))
        }
        Command::Build { x, y } => {
            let n = degree(cli)?;
            let x = TnTuple::parse(n, x).map_err(usage)?;
            let y = TnTuple::parse(n, y).map_err(usage)?;
            let t = build_tangle(&x, &y).map_err(usage)?;
            Ok((if text { line(&t) } else { doc(json!(t)) }, 0))
        }
        Command::Enumerate { degree } => {
            let all = enumerate_tl(*degree).map_err(usage)?;
            let out = if text {
                all.iter().fold(String::new(), |mut s, t| {
                    let _ = writeln!(s, "{t}");
                    s
                })
            } else {
                doc(json!(all))
            };
            Ok((out, 0))
        }
        Command::Verify {
            degree,
            fuzz,
            seed,
            max_len,
            timing,
        } => {
            let mut report = verify_presentation(*degree).map_err(usage)?;
            let mut fz = match fuzz {
                Some(count) => Some(fuzz_words(*degree, *count, *max_len, *seed).map_err(usage)?),
                None => None,
            };
            if !timing {
                report.elapsed_ms = None;
                if let Some(f) = fz.as_mut() {
                    f.elapsed_ms = None;
                }
            }
            let pass = report.all_pass && fz.as_ref().is_none_or(|f| f.pass);
            let out = if text {
                let mut s = format!(
                    "n={} catalan={} tangles={} normal_forms={}\n",
                    report.n, report.catalan, report.tangles, report.normal_forms
                );
                for c in &report.checks {
                    let _ = writeln!(
                        s,
                        "{}: {} (checked {})",
                        c.name,
                        if c.pass { "pass" } else { "FAIL" },
                        c.checked
                    );
                    for f in &c.failures {
                        let _ = writeln!(s, "  {f}");
                    }
                }
                if let Some(ms) = report.elapsed_ms {
                    let _ = writeln!(s, "elapsed_ms={ms}");
                }
                if let Some(f) = &fz {
                    let _ = writeln!(
                        s,
                        "fuzz: {} (seed={} rng={} count={} max_len={} certificates={} equality_triples={})",
                        if f.pass { "pass" } else { "FAIL" },
                        f.seed,
                        f.rng,
                        f.count,
                        f.max_len,
                        f.certificates,
                        f.equality_triples
                    );
                    for m in &f.mismatches {
                        let _ = writeln!(s, "  {m}");
                    }
                    if let Some(ms) = f.elapsed_ms {
                        let _ = writeln!(s, "fuzz_elapsed_ms={ms}");
                    }
                }
                s
            } else {
                doc(json!({"presentation": report, "fuzz": fz}))
            };
            if pass {
                Ok((out, 0))
            } else {
                print!("{out}");
                Err(Failure::Invariant(format!(
                    "verification failed in degree {degree}"
                )))
            }
        }
        Command::Alg { word: w, delta } => {
            let w = word(cli, w)?;
            let d: Rational = delta
                .parse()
                .map_err(|_| Failure::Usage(format!("cannot parse delta {delta:?}")))?;
            let e = alg_eval_word(&w, &d).map_err(usage)?;
            let out = if text {
                e.to_text(&d)
            } else {
                let terms: Vec<Value> = e
                    .terms()
                    .map(|(t, c)| json!({"coefficient": c.to_string(), "tangle": t}))
                    .collect();
                doc(json!({"delta": d.to_string(), "n": e.degree(), "terms": terms}))
            };
            Ok((out, 0))
        }
        Command::Render { tangle: t } => Ok((render(&tangle(t)?), 0)),
        Command::CheckCert { file } => {
            let raw = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{file}: {e}")))?;
            let d: Derivation = raw.parse().map_err(usage)?;
            match check_derivation(&d, d.family) {
                Ok(end) => Ok((
                    if text {
                        format!("valid: {} steps, end={end}\n", d.steps.len())
                    } else {
                        doc(json!({"valid": true, "steps": d.steps.len(), "end": end.to_string()}))
                    },
                    0,
                )),
                Err(e) => Err(Failure::Invariant(e.to_string())),
            }
        }
    }
}

/// Labels on the outside rows, one bracket row per side. Arcs read as
/// matching brackets; `|` marks the end of a transversal.
fn render(t: &Tangle) -> String {
    let n = t.degree();
    let mut upper = vec!['|'; n];
    let mut lower = vec!['|'; n];
    let mut transversals = Vec::new();
    for (a, b) in t.blocks() {
        match (a > 0, b > 0) {
            (true, true) | (false, false) => {
                let row = if a > 0 { &mut upper } else { &mut lower };
                let (l, r) = (
                    a.unsigned_abs().min(b.unsigned_abs()),
                    a.unsigned_abs().max(b.unsigned_abs()),
                );
                row[l as usize - 1] = '(';
                row[r as usize - 1] = ')';
            }
            _ => {
                let (u, d) = if a > 0 { (a, -b) } else { (b, -a) };
                transversals.push((u, d));
            }
        }
    }
    transversals.sort_unstable();
    let width = n.to_string().len() + 2;
    let cells = |f: &dyn Fn(usize) -> String| (1..=n).map(f).collect::<String>();
    let mut s = String::new();
    let _ = writeln!(s, "{}", cells(&|i| format!("{:>width$}", i)).trim_end());
    let _ = writeln!(
        s,
        "{}",
        cells(&|i| format!("{:>width$}", upper[i - 1])).trim_end()
    );
    let _ = writeln!(
        s,
        "{}",
        cells(&|i| format!("{:>width$}", lower[i - 1])).trim_end()
    );
    let _ = writeln!(
        s,
        "{}",
        cells(&|i| format!("{:>w$}'", i, w = width - 1)).trim_end()
    );
    let list: Vec<String> = transversals.iter().map(|(u, d)| format!("{u}-{d}'")).collect();
    let _ = writeln!(
        s,
        "transversals: {}",
        if list.is_empty() {
            "none".into()
        } else {
            list.join(" ")
        }
    );
    s
}
