mod cache;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use chevpoly::heap::HeapJson;
use chevpoly::repmod::ModuleSummary;
use chevpoly::verify::{
    minuscule_report, polytope_report, string_comparison, verify, Caps, InstanceSpec, MinusculeReport,
    StringComparison, VerificationReport, VerifyOptions,
};
use chevpoly::{CartanType, LatticePolytope, RootDatum, Weight, WeylWord};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use cache::Cache;

#[derive(Parser)]
#[command(name = "chevpoly", version, about = "Chevalley polytopes of homogeneous spaces G/P")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Cache directory (defaults to $CHEVPOLY_CACHE; unset means no cache).
    #[arg(long, global = true, env = "CHEVPOLY_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Matrix,
}

#[derive(Subcommand)]
enum Command {
    /// Valuations, vertices, volume and degree.
    Polytope(InstanceArgs),
    /// Volume against degree, lattice points, IDP and a Minkowski decomposition.
    Verify(VerifyArgs),
    /// Checks for a minuscule fundamental weight.
    Minuscule(MinusculeArgs),
    /// String parametrization of a minuscule module.
    String(StringArgs),
    /// Reduced words of the minimal coset representative.
    Words(WordsArgs),
    /// Module, heap, polytope and verification in one document.
    Report(VerifyArgs),
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Cartan type, e.g. A3, B2, F4.
    #[arg(long = "type")]
    ctype: String,
    /// Parabolic nodes (1-based), comma separated.
    #[arg(long)]
    parabolic: String,
    /// Highest weight in fundamental-weight coordinates.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    /// Reduced word as printed, e.g. "3 2 1 2 3", or `auto`.
    #[arg(long, default_value = "auto")]
    word: String,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Largest dilation for the IDP check; below 2 skips the lattice checks.
    #[arg(long, default_value_t = 3)]
    kmax: u32,
    /// Search caps: reduced words, occurrences, combinations.
    #[arg(long)]
    caps: Option<String>,
    /// Skip the Minkowski decomposition search.
    #[arg(long)]
    no_decomposition: bool,
}

#[derive(Args)]
struct MinusculeArgs {
    #[arg(long = "type")]
    ctype: String,
    /// Minuscule node (1-based).
    #[arg(long)]
    node: usize,
    #[arg(long, default_value_t = 3)]
    kmax: u32,
}

#[derive(Args)]
struct StringArgs {
    #[arg(long = "type")]
    ctype: String,
    #[arg(long)]
    node: usize,
    /// Reduced word for the longest element, or `auto`.
    #[arg(long, default_value = "auto")]
    word: String,
    /// Polytope file (JSON or matrix) to compare against.
    #[arg(long)]
    compare: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    kmax: u32,
}

#[derive(Args)]
struct WordsArgs {
    #[arg(long = "type")]
    ctype: String,
    #[arg(long)]
    parabolic: String,
    /// Maximum number of words listed.
    #[arg(long, default_value_t = 1000)]
    cap: usize,
}

#[derive(Serialize, Deserialize)]
struct WordList {
    cartan_type: String,
    parabolic: Vec<usize>,
    words: Vec<String>,
    truncated: bool,
}

#[derive(Serialize, Deserialize)]
struct FullReport {
    module: ModuleSummary,
    heap: HeapJson,
    polytope: Value,
    verification: VerificationReport,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<chevpoly::Error> for Failure {
    fn from(e: chevpoly::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn parse_type(s: &str) -> Result<CartanType, Failure> {
    Ok(s.parse::<CartanType>()?)
}

fn parse_nodes(s: &str, rank: usize) -> Result<BTreeSet<usize>, Failure> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(i) if (1..=rank).contains(&i) => Ok(i - 1),
            _ => Err(usage(format!("bad parabolic node '{t}' for rank {rank}"))),
        })
        .collect()
}

fn parse_caps(s: Option<&str>) -> Result<Caps, Failure> {
    let Some(s) = s else { return Ok(Caps::default()) };
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("bad caps '{s}'"))))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] => Ok(Caps {
            reduced_words: a,
            occurrences: b,
            combinations: c,
        }),
        _ => Err(usage("caps take three numbers: words,occurrences,combinations")),
    }
}

fn instance(a: &InstanceArgs) -> Result<InstanceSpec, Failure> {
    let ct = parse_type(&a.ctype)?;
    let parabolic = parse_nodes(&a.parabolic, ct.rank)?;
    let weight: Weight = a.weight.parse()?;
    let word = match a.word.trim() {
        "auto" => None,
        w => Some(WeylWord::parse(w)?),
    };
    Ok(InstanceSpec::new(ct, parabolic, weight, word)?)
}

fn instance_key(verb: &str, s: &InstanceSpec) -> Vec<String> {
    vec![
        verb.to_string(),
        s.datum.cartan_type().to_string(),
        format!("{:?}", s.parabolic),
        s.varpi.to_string(),
        s.word.to_string(),
    ]
}

fn vertex_matrix(vertices: &[Vec<i64>]) -> Result<String, Failure> {
    Ok(LatticePolytope::from_points(vertices)?.to_matrix())
}

fn json<T: Serialize>(t: &T) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("serializable");
    s.push('\n');
    s
}

fn cached<T>(cache: &Cache, key: &[String], f: impl FnOnce() -> Result<T, Failure>) -> Result<T, Failure>
where
    T: Serialize + for<'de> Deserialize<'de>,
{
    let parts: Vec<&str> = key.iter().map(String::as_str).collect();
    let (t, hit) = cache.get_or_compute(&Cache::key(&parts), f)?;
    if hit {
        eprintln!("note: {} served from cache", key[0]);
    }
    Ok(t)
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let cache = Cache::new(cli.cache_dir.clone());
    let fmt = cli.format;
    match &cli.command {
        Command::Polytope(a) => {
            let spec = instance(a)?;
            let r: VerificationReport =
                cached(&cache, &instance_key("polytope", &spec), || Ok(polytope_report(&spec)?))?;
            let out = match fmt {
                Format::Json => json(&r),
                Format::Text => r.to_text(),
                Format::Matrix => vertex_matrix(&r.vertices)?,
            };
            Ok((out, true))
        }
        Command::Verify(a) | Command::Report(a) => {
            let spec = instance(&a.instance)?;
            let caps = parse_caps(a.caps.as_deref())?;
            let opts = VerifyOptions {
                kmax: Some(a.kmax),
                decomposition: !a.no_decomposition,
                caps,
            };
            let mut key = instance_key("verify", &spec);
            key.push(format!("kmax={} dec={} caps={:?}", a.kmax, !a.no_decomposition, caps));
            let r: VerificationReport = cached(&cache, &key, || Ok(verify(&spec, opts)?))?;
            let pass = r.passed();
            if matches!(cli.command, Command::Verify(_)) {
                let out = match fmt {
                    Format::Json => json(&r),
                    Format::Text => r.to_text(),
                    Format::Matrix => vertex_matrix(&r.vertices)?,
                };
                return Ok((out, pass));
            }
            key[0] = "report".into();
            let full: FullReport = cached(&cache, &key, || {
                let module = spec.module()?;
                let polytope = LatticePolytope::from_points(&r.vertices)?;
                Ok(FullReport {
                    module: module.summary(),
                    heap: spec.heap()?.to_json(),
                    polytope: polytope.to_json(),
                    verification: r.clone(),
                })
            })?;
            let out = match fmt {
                Format::Json => json(&full),
                Format::Text => {
                    let mut s = String::new();
                    let _ = writeln!(s, "module dimension {}", full.module.dimension);
                    for (k, b) in full.module.basis.iter().enumerate() {
                        let _ = writeln!(s, "  v{:<3} {:<24} {:?}", k + 1, b.word, b.weight);
                    }
                    let _ = writeln!(s, "heap: {} elements, covers {:?}", full.heap.size, full.heap.covers);
                    s.push_str(&full.verification.to_text());
                    s
                }
                Format::Matrix => vertex_matrix(&full.verification.vertices)?,
            };
            Ok((out, pass))
        }
        Command::Minuscule(a) => {
            let ct = parse_type(&a.ctype)?;
            if a.node == 0 || a.node > ct.rank {
                return Err(usage(format!("node {} out of range for {ct}", a.node)));
            }
            let key = vec![
                "minuscule".into(),
                ct.to_string(),
                a.node.to_string(),
                a.kmax.to_string(),
            ];
            let r: MinusculeReport = cached(&cache, &key, || Ok(minuscule_report(ct, a.node - 1, a.kmax)?))?;
            let out = match fmt {
                Format::Json => json(&r),
                Format::Text => r.to_text(),
                Format::Matrix => vertex_matrix(&r.vertices)?,
            };
            Ok((out, r.passed()))
        }
        Command::String(a) => {
            let ct = parse_type(&a.ctype)?;
            if a.node == 0 || a.node > ct.rank {
                return Err(usage(format!("node {} out of range for {ct}", a.node)));
            }
            let w0 = match a.word.trim() {
                "auto" => RootDatum::new(ct).longest_word(),
                w => WeylWord::parse(w)?,
            };
            let reference = match &a.compare {
                None => None,
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                    let p = match serde_json::from_str::<Value>(&text) {
                        Ok(v) => LatticePolytope::from_json(&v)?,
                        Err(_) => LatticePolytope::from_matrix(&text)?,
                    };
                    Some(p.vertices().to_vec())
                }
            };
            let r: StringComparison =
                string_comparison(ct, a.node - 1, &w0, reference.as_deref().map(|v| (v, a.kmax)))?;
            let out = match fmt {
                Format::Json => json(&r),
                Format::Text => r.to_text(),
                Format::Matrix => {
                    let mut s = String::new();
                    for p in &r.points {
                        let row: Vec<String> = p.string.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(s, "{}", row.join(" "));
                    }
                    s
                }
            };
            Ok((out, true))
        }
        Command::Words(a) => {
            let ct = parse_type(&a.ctype)?;
            let parabolic = parse_nodes(&a.parabolic, ct.rank)?;
            let d = RootDatum::new(ct);
            let wp = d.minimal_coset_word(&parabolic)?;
            let words = d.reduced_words(&wp, a.cap)?;
            let list = WordList {
                cartan_type: ct.to_string(),
                parabolic: parabolic.iter().map(|i| i + 1).collect(),
                truncated: words.len() >= a.cap,
                words: words.iter().map(|w| w.to_string()).collect(),
            };
            if list.truncated {
                eprintln!("warning: word list truncated at {}", a.cap);
            }
            let out = match fmt {
                Format::Json => json(&list),
                Format::Text | Format::Matrix => list.words.iter().map(|w| format!("{w}\n")).collect(),
            };
            Ok((out, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, pass)) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{out}"),
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
