use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graded_prime::constructions::{connell_decision, Coefficients};
use graded_prime::corpus::{evaluate_all, generate, summary_json};
use graded_prime::json::{
    connell_to_json, datum_to_json, flags_to_json, graded_from_json, graph_from_json,
    harness_to_json, lpa_verdict_to_json, mt3_to_json, report_to_json, ring_from_json,
    symbolic_from_json, to_canonical_string,
};
use graded_prime::lpa::{lpa_prime_decision, satisfies_mt3};
use graded_prime::{
    decide_prime, main_theorem_harness, search_np_datum, verify_np_datum, Caps, Error, Flavor,
    GradedRing, Strategy,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "graded-prime-lab",
    version,
    about = "Decide and certify primeness of group-graded rings"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Cap on enumerated elements and primeness candidates.
    #[arg(long, global = true)]
    max_elements: Option<u64>,
    /// Cap on the size of enumerated ideal lattices.
    #[arg(long, global = true)]
    max_ideals: Option<usize>,
    /// Worker threads for parallel scans.
    #[arg(long, env = "GRADED_PRIME_LAB_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    BruteForce,
    OrderedShortcut,
    NpSearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    B,
    C,
    D,
    E,
}

#[derive(Subcommand)]
enum Verb {
    /// Grading flags of a graded ring.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Primeness decision with certificate.
    Prime {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Search for a non-primeness datum of one flavor.
    NpSearch {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FlavorArg::B)]
        flavor: FlavorArg,
    },
    /// Evaluate conditions (a)-(e) on a finite-group-graded ring.
    Harness {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Downward-directedness of the reachability preorder of a graph.
    LpaMt3 {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Primeness of a Leavitt path algebra.
    LpaPrime {
        #[arg(long = "in")]
        input: PathBuf,
        /// Coefficient ring JSON.
        #[arg(
            long,
            conflicts_with = "ring_prime",
            required_unless_present = "ring_prime"
        )]
        ring: Option<PathBuf>,
        /// Primeness of the coefficient ring, when no ring file is given.
        #[arg(long)]
        ring_prime: Option<bool>,
    },
    /// Primeness of a group ring R[G].
    GroupringPrime {
        #[arg(long)]
        ring: PathBuf,
        /// Group expression such as "C2", "Z^2 x C3" or "F2".
        #[arg(long)]
        group: String,
    },
    /// Generate and evaluate a deterministic corpus.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Lib(Error::CapExceeded { .. }) => 3,
            Failure::Lib(
                Error::TheoremViolation(_)
                | Error::CorrespondenceViolation(_)
                | Error::InternalExhaustion(_),
            ) => 4,
            Failure::Lib(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Input(s) => s.clone(),
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graded(path: &Path, caps: &Caps) -> Result<GradedRing, Failure> {
    Ok(graded_from_json(&read_json(path)?, caps)?)
}

/// Writes via a temporary sibling and a rename so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", path.display()));
    let tmp = path.with_extension("json.tmp");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn flavor(f: FlavorArg) -> Flavor {
    match f {
        FlavorArg::B => Flavor::B,
        FlavorArg::C => Flavor::C,
        FlavorArg::D => Flavor::D,
        FlavorArg::E => Flavor::E,
    }
}

fn run(verb: &Verb, caps: &Caps) -> Result<Value, Failure> {
    match verb {
        Verb::Classify { input } => {
            let s = read_graded(input, caps)?;
            let f = s.classify(caps)?;
            let cancellative = if f.epsilon_strong {
                Some(s.is_cancellative_eps_strong(caps)?)
            } else {
                None
            };
            Ok(flags_to_json(&f, cancellative))
        }
        Verb::Prime { input, strategy } => {
            let s = read_graded(input, caps)?;
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::BruteForce => Strategy::BruteForce,
                StrategyArg::OrderedShortcut => Strategy::OrderedShortcut,
                StrategyArg::NpSearch => Strategy::NpSearch,
            };
            Ok(report_to_json(&s, &decide_prime(&s, strategy, caps)?))
        }
        Verb::NpSearch { input, flavor: f } => {
            let s = read_graded(input, caps)?;
            let fl = flavor(*f);
            let datum = search_np_datum(&s, fl, caps)?;
            let verified = match &datum {
                Some(d) => Some(verify_np_datum(&s, d, fl)?.is_none()),
                None => None,
            };
            Ok(json!({
                "flavor": fl.name(),
                "found": datum.is_some(),
                "np_datum": datum.as_ref().map(|d| datum_to_json(&s, d)),
                "verified": verified,
            }))
        }
        Verb::Harness { input } => {
            let s = read_graded(input, caps)?;
            Ok(harness_to_json(&s, &main_theorem_harness(&s, caps)?))
        }
        Verb::LpaMt3 { input } => {
            let g = graph_from_json(&read_json(input)?)?;
            Ok(mt3_to_json(&g, &satisfies_mt3(&g)))
        }
        Verb::LpaPrime {
            input,
            ring,
            ring_prime,
        } => {
            let g = graph_from_json(&read_json(input)?)?;
            let verdict = match (ring, ring_prime) {
                (Some(path), _) => {
                    let r = ring_from_json(&read_json(path)?)?;
                    lpa_prime_decision(&g, Coefficients::Ring(&r), caps)?
                }
                (None, Some(p)) => lpa_prime_decision(&g, Coefficients::Prime(*p), caps)?,
                (None, None) => return Err(Failure::Input("give --ring or --ring-prime".into())),
            };
            Ok(lpa_verdict_to_json(&g, &verdict))
        }
        Verb::GroupringPrime { ring, group } => {
            let r = ring_from_json(&read_json(ring)?)?;
            let g = symbolic_from_json(&Value::String(group.clone()))?;
            Ok(connell_to_json(&connell_decision(
                Coefficients::Ring(&r),
                &g,
                caps,
            )?))
        }
        Verb::Corpus { seed, count, out } => corpus(*seed, *count, out, caps),
    }
}

fn corpus(seed: u64, count: usize, out: &Path, caps: &Caps) -> Result<Value, Failure> {
    let cases_dir = out.join("cases");
    fs::create_dir_all(&cases_dir)
        .map_err(|e| Failure::Input(format!("{}: {e}", cases_dir.display())))?;
    let (cases, skipped) = generate(seed, count, caps);
    for s in &skipped {
        eprintln!("skipped {} ({}): {}", s.name, s.family, s.reason);
    }
    for c in &cases {
        write_atomic(
            &cases_dir.join(format!("{}.json", c.name)),
            &to_canonical_string(&c.to_json()),
        )?;
    }
    let outcomes = evaluate_all(&cases, caps);
    for o in outcomes.iter().filter(|o| o.status != "ok") {
        eprintln!(
            "{} {}: {}",
            o.status,
            o.name,
            o.detail.as_deref().unwrap_or("")
        );
    }
    let summary = summary_json(seed, count, &outcomes, &skipped);
    write_atomic(&out.join("summary.json"), &to_canonical_string(&summary))?;
    if let Some(o) = outcomes.iter().find(|o| o.status == "violation") {
        return Err(Failure::Lib(Error::TheoremViolation(format!(
            "{}: {}",
            o.name,
            o.detail.as_deref().unwrap_or("")
        ))));
    }
    Ok(json!({
        "seed": seed,
        "count": count,
        "written": cases.len(),
        "skipped": skipped.len(),
        "ok": summary["ok"],
        "violations": summary["violations"],
        "summary": out.join("summary.json").display().to_string(),
    }))
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let mut caps = Caps::default();
    if let Some(m) = cli.max_elements {
        caps.max_elements = m;
    }
    if let Some(m) = cli.max_ideals {
        caps.max_ideals = m;
    }
    match run(&cli.verb, &caps) {
        Ok(v) => {
            match cli.format {
                Format::Json => print!("{}", to_canonical_string(&v)),
                Format::Text => print!("{}", render_text(&v)),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_table() {
        assert_eq!(Failure::Input("x".into()).code(), 2);
        assert_eq!(Failure::Lib(Error::NotAcyclic).code(), 2);
        assert_eq!(
            Failure::Lib(Error::CapExceeded {
                what: "x",
                needed: 2,
                limit: 1
            })
            .code(),
            3
        );
        assert_eq!(Failure::Lib(Error::TheoremViolation("x".into())).code(), 4);
        assert_eq!(
            Failure::Lib(Error::CorrespondenceViolation("x".into())).code(),
            4
        );
    }
}
