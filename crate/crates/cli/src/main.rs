//! `lingual`: batch front end for hom counts, Hilbert series and truncated
//! Gröbner computations.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use lingual::category::{hom_count, hom_count_multi, principal_projective_series, CategoryId};
use lingual::grobner::{
    initial_module, is_groebner_up_to, module_series_with, quotient_series, span_generators,
    ModuleElement, MonomialIdealGens,
};
use lingual::lang::{compile_expr_with, regular_automaton, Cfg, Dfa, OrderedExpr};
use lingual::poly::fmt_q;
use lingual::series::{cfg_count, dfa_series, egf_convert, CoeffTable, NormedAlphabet, RationalSeries};
use lingual::{Alphabet, Error, Limits};

#[derive(Parser)]
#[command(name = "lingual", version, about = "Hilbert series and Gröbner data for combinatorial categories")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Cap on elementary steps for enumerations and constructions.
    #[arg(long, global = true)]
    max_work: Option<u64>,
    /// JSON file with named ideals and modules, used through `--use`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Number of morphisms from [n] to [m].
    Homcount {
        /// Category, e.g. `oi:2`, `os`, `fa`, `os^2`.
        cat: String,
        /// Source size (comma-separated, one per factor for products).
        n: String,
        /// Target size (comma-separated, one per factor for products).
        m: String,
    },
    /// Hilbert series of a projective, ideal, quotient, automaton,
    /// expression or grammar.
    Series(SeriesArgs),
    /// Degree-truncated span, initial ideal and Gröbner check.
    Groebner(GroebnerArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subject {
    Projective,
    Ideal,
    Quotient,
    Dfa,
    Expr,
    Cfg,
}

#[derive(clap::Args)]
struct SeriesArgs {
    subject: Subject,
    #[arg(long)]
    cat: Option<String>,
    /// Object sizes: one per factor for `projective`, one per summand for
    /// `ideal` and `quotient`.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Ideal generators, e.g. `10, 1:01`.
    #[arg(long)]
    gens: Option<String>,
    /// Named ideal from the configuration file.
    #[arg(long = "use")]
    preset: Option<String>,
    /// Automaton file (JSON) for `dfa`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Ordered expression for `expr`, e.g. `'1'[1]*'0'[01]*`.
    #[arg(long)]
    expr: Option<String>,
    /// Alphabet for `expr` and terminals for `cfg`.
    #[arg(long)]
    alphabet: Option<String>,
    /// Grammar rules for `cfg`, e.g. `S -> | 1U2S | 2D1S; U -> | 1U2U; D -> | 2D1D`.
    #[arg(long)]
    rules: Option<String>,
    /// Grade each letter separately instead of by length.
    #[arg(long)]
    multigraded: bool,
    /// Print coefficients up to this total degree.
    #[arg(long)]
    expand: Option<usize>,
    /// Also print the exponential generating function.
    #[arg(long)]
    egf: bool,
}

#[derive(clap::Args)]
struct GroebnerArgs {
    #[arg(long)]
    cat: Option<String>,
    /// Summand sizes of the free module.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Generators separated by `;`, e.g. `1*[01] - 1*[10]`.
    #[arg(long)]
    gens: Option<String>,
    /// Named module from the configuration file.
    #[arg(long = "use")]
    preset: Option<String>,
    /// Truncation degree.
    #[arg(long, default_value_t = 8)]
    trunc: usize,
    /// Candidate Gröbner basis, separated by `;`.
    #[arg(long)]
    candidate: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default)]
    ideals: BTreeMap<String, IdealPreset>,
    #[serde(default)]
    modules: BTreeMap<String, ModulePreset>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealPreset {
    cat: String,
    n: Vec<usize>,
    gens: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModulePreset {
    cat: String,
    n: Vec<usize>,
    gens: Vec<String>,
}

/// What went wrong, mapped onto the exit status.
#[derive(Debug)]
enum Failure {
    Parse(String),
    Bounds(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Bounds(_) => 3,
            Failure::Domain(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Bounds(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse { .. } | Error::UnknownLetter(_) | Error::MalformedWord { .. } | Error::MalformedDfa(_) => {
                Failure::Parse(msg)
            }
            Error::LimitExceeded { .. } => Failure::Bounds(msg),
            _ => Failure::Domain(msg),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn missing(field: &str) -> Failure {
    Failure::Parse(format!("missing --{field}"))
}

fn parse_cat(s: &str) -> Outcome<CategoryId> {
    Ok(s.parse::<CategoryId>()?)
}

fn parse_sizes(field: &str, s: &str) -> Outcome<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::Parse(format!("{field}: {x:?} is not a size")))
        })
        .collect()
}

fn load_config(path: &Option<PathBuf>) -> Outcome<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("config {}: {e}", path.display())))
}

fn read_file(path: &PathBuf) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("file {}: {e}", path.display())))
}

fn coefficient_list(table: &CoeffTable, order: usize) -> Vec<String> {
    table.to_vec(order + 1).iter().map(fmt_q).collect()
}

fn coefficients_json(table: &CoeffTable, order: usize) -> Value {
    if table.nvars() == 1 {
        json!(coefficient_list(table, order))
    } else {
        Value::Array(
            table
                .iter()
                .map(|(e, c)| json!({ "exponent": e, "coefficient": fmt_q(c) }))
                .collect(),
        )
    }
}

fn coefficients_text(table: &CoeffTable, order: usize) -> String {
    if table.nvars() == 1 {
        coefficient_list(table, order).join(",")
    } else {
        table
            .iter()
            .map(|(e, c)| {
                let e: Vec<String> = e.iter().map(u32::to_string).collect();
                format!("[{}] {}", e.join(","), fmt_q(c))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Lines of text output and the matching JSON record.
struct Report {
    text: Vec<String>,
    json: Value,
}

fn series_report(s: &RationalSeries, args: &SeriesArgs, limits: &Limits) -> Outcome<Report> {
    let mut text = vec![format!("series: {s}")];
    let mut record = json!({ "series": s, "rendered": s.to_string() });
    if let Some(order) = args.expand {
        let table = s.expand(order, limits)?;
        text.push(format!("coefficients: {}", coefficients_text(&table, order)));
        record["coefficients"] = coefficients_json(&table, order);
    }
    if args.egf {
        let g = egf_convert(s)?;
        text.push(format!("egf: {g}"));
        record["egf"] = json!({ "form": g, "rendered": g.to_string() });
    }
    Ok(Report { text, json: record })
}

fn norms_for(alphabet: &Alphabet, multigraded: bool) -> NormedAlphabet {
    if multigraded {
        NormedAlphabet::by_letter(alphabet)
    } else {
        NormedAlphabet::by_length(alphabet)
    }
}

fn ideal_from_args(args: &SeriesArgs, config: &Config) -> Outcome<MonomialIdealGens> {
    let preset = match &args.preset {
        Some(name) => Some(
            config
                .ideals
                .get(name)
                .ok_or_else(|| Failure::Parse(format!("no ideal named {name:?} in the configuration")))?,
        ),
        None => None,
    };
    let cat = args.cat.as_deref().or(preset.map(|p| p.cat.as_str())).ok_or_else(|| missing("cat"))?;
    let cat = parse_cat(cat)?;
    let sizes = if args.n.is_empty() {
        preset.map(|p| p.n.clone()).ok_or_else(|| missing("n"))?
    } else {
        args.n.clone()
    };
    let gens = args.gens.as_deref().or(preset.map(|p| p.gens.as_str())).unwrap_or("");
    Ok(MonomialIdealGens::parse(&cat, &sizes, gens)?)
}

fn run_series(args: &SeriesArgs, config: &Config, limits: &Limits) -> Outcome<Report> {
    match args.subject {
        Subject::Projective => {
            let cat = parse_cat(args.cat.as_deref().ok_or_else(|| missing("cat"))?)?;
            if args.n.is_empty() {
                return Err(missing("n"));
            }
            let s = principal_projective_series(&cat, &args.n)?;
            series_report(&s, args, limits)
        }
        Subject::Ideal => {
            let ideal = ideal_from_args(args, config)?;
            let s = module_series_with(&ideal, limits)?;
            series_report(&s, args, limits)
        }
        Subject::Quotient => {
            let ideal = ideal_from_args(args, config)?;
            let s = quotient_series(&ideal)?;
            series_report(&s, args, limits)
        }
        Subject::Dfa => {
            let path = args.file.as_ref().ok_or_else(|| missing("file"))?;
            let dfa: Dfa = serde_json::from_str(&read_file(path)?)
                .map_err(|e| Failure::Parse(format!("file {}: {e}", path.display())))?;
            let s = dfa_series(&dfa, &norms_for(dfa.alphabet(), args.multigraded))?;
            series_report(&s, args, limits)
        }
        Subject::Expr => {
            let text = args.expr.as_deref().ok_or_else(|| missing("expr"))?;
            let expr: OrderedExpr = text.parse()?;
            let alphabet = match &args.alphabet {
                Some(a) => Alphabet::parse(a)?,
                None => Alphabet::new(expr.letters())?,
            };
            let (dfa, ordered) = match compile_expr_with(&expr, &alphabet, limits) {
                Ok(d) => (d, true),
                Err(Error::NotOrderedLanguage(_)) => (regular_automaton(&expr, &alphabet, limits)?, false),
                Err(e) => return Err(e.into()),
            };
            let s = dfa_series(&dfa, &norms_for(&alphabet, args.multigraded))?;
            let mut report = series_report(&s, args, limits)?;
            report.text.push(format!("ordered: {ordered}"));
            report.json["ordered"] = json!(ordered);
            Ok(report)
        }
        Subject::Cfg => {
            let terminals = Alphabet::parse(args.alphabet.as_deref().ok_or_else(|| missing("alphabet"))?)?;
            let g = Cfg::parse(terminals, args.rules.as_deref().ok_or_else(|| missing("rules"))?)?;
            let order = args.expand.ok_or_else(|| missing("expand"))?;
            let table = cfg_count(&g, &norms_for(g.terminals(), args.multigraded), order, limits)?;
            Ok(Report {
                text: vec![format!("coefficients: {}", coefficients_text(&table, order))],
                json: json!({ "coefficients": coefficients_json(&table, order) }),
            })
        }
    }
}

fn split_elements(s: &str) -> Vec<String> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn run_groebner(args: &GroebnerArgs, config: &Config, limits: &Limits) -> Outcome<Report> {
    let preset = match &args.preset {
        Some(name) => Some(
            config
                .modules
                .get(name)
                .ok_or_else(|| Failure::Parse(format!("no module named {name:?} in the configuration")))?,
        ),
        None => None,
    };
    let cat = args.cat.as_deref().or(preset.map(|p| p.cat.as_str())).ok_or_else(|| missing("cat"))?;
    let cat = parse_cat(cat)?;
    let sizes = if args.n.is_empty() {
        preset.map(|p| p.n.clone()).ok_or_else(|| missing("n"))?
    } else {
        args.n.clone()
    };
    let gen_texts = match (&args.gens, preset) {
        (Some(g), _) => split_elements(g),
        (None, Some(p)) => p.gens.clone(),
        (None, None) => Vec::new(),
    };
    let gens = gen_texts
        .iter()
        .map(|g| ModuleElement::parse(&cat, &sizes, g))
        .collect::<Result<Vec<_>, _>>()?;
    let module = span_generators(&cat, &sizes, &gens, args.trunc, limits)?;
    let init = initial_module(&module)?;
    let series = module_series_with(&init, limits)?;
    let dims = module.dims();
    let initial = init.render_generators();
    let mut text = vec![
        format!("category: {cat}"),
        format!("sources: {}", join(&sizes)),
        format!("dims: {}", join(&dims)),
        if initial.is_empty() {
            "initial: none".to_string()
        } else {
            format!("initial: {}", initial.join(", "))
        },
    ];
    let mut record = json!({
        "category": cat.to_string(),
        "sources": sizes,
        "truncation": args.trunc,
        "dims": dims,
        "initial": initial,
    });
    if let Some(c) = &args.candidate {
        let candidate = split_elements(c)
            .iter()
            .map(|g| ModuleElement::parse(&cat, &sizes, g))
            .collect::<Result<Vec<_>, _>>()?;
        let verdict = is_groebner_up_to(&module, &candidate, args.trunc)?;
        text.push(format!("groebner: {verdict}"));
        record["groebner"] = json!(verdict);
    }
    text.push(format!("series: {series}"));
    record["series"] = json!(series);
    record["rendered"] = json!(series.to_string());
    Ok(Report { text, json: record })
}

fn run_homcount(cat: &str, n: &str, m: &str) -> Outcome<Report> {
    let cat = parse_cat(cat)?;
    let ns = parse_sizes("n", n)?;
    let ms = parse_sizes("m", m)?;
    let count = match (&ns[..], &ms[..]) {
        ([n], [m]) if cat.arity() == 1 => hom_count(&cat, *n, *m)?,
        _ => hom_count_multi(&cat, &ns, &ms)?,
    };
    Ok(Report {
        text: vec![count.to_string()],
        json: json!({ "category": cat.to_string(), "n": ns, "m": ms, "count": count.to_string() }),
    })
}

fn run(cli: &Cli) -> Outcome<Report> {
    let mut limits = Limits::default();
    if let Some(w) = cli.max_work {
        limits = limits.with_max_work(w);
    }
    let config = load_config(&cli.config)?;
    match &cli.command {
        Command::Homcount { cat, n, m } => run_homcount(cat, n, m),
        Command::Series(args) => run_series(args, &config, &limits),
        Command::Groebner(args) => run_groebner(args, &config, &limits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => {
                    for line in report.text {
                        println!("{line}");
                    }
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("report serializes")
                ),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match cli.format {
                Format::Text => eprintln!("error: {}", f.message()),
                Format::Json => println!("{}", json!({ "error": f.message(), "exit": f.code() })),
            }
            ExitCode::from(f.code())
        }
    }
}
