//! The `asmtree` command: counts, tables, tree listings, generating
//! functions and b-file comparisons on top of the `asmtree` library.
//!
//! [`run`] takes the arguments, an [`Env`] and two writers, and returns the
//! process exit status: 0 on success, 1 when a comparison disagrees, 2 on
//! invalid input.

mod cache;
mod error;
mod fetch;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use asmtree::assembly::{self, GluingRule, Limits};
use asmtree::bfile::{self, BFile};
use asmtree::formulas::{self, CycleClosedForm, Family, SequenceSpec};
use asmtree::graph::Graph;
use asmtree::series::{self, Builder};
use asmtree::Natural;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use cache::Cache;
pub use error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Supplies formula values; swapped out in tests to inject faults.
pub type FormulaFn = fn(SequenceSpec, usize) -> asmtree::Result<Option<Natural>>;

/// Everything the command reads from its surroundings.
#[derive(Clone)]
pub struct Env {
    /// Directory for the count cache and fetched b-files.
    pub cache_dir: Option<PathBuf>,
    /// Base URL for fetching b-files by sequence number.
    pub oeis_base_url: Option<String>,
    pub formula: FormulaFn,
}

impl Default for Env {
    fn default() -> Self {
        Env { cache_dir: None, oeis_base_url: None, formula: |spec, n| spec.formula(n) }
    }
}

impl Env {
    /// Reads `ASMTREE_CACHE_DIR` and `ASMTREE_OEIS_BASE_URL`.
    pub fn from_process() -> Self {
        let var = |name| std::env::var_os(name).filter(|v| !v.is_empty());
        Env {
            cache_dir: var("ASMTREE_CACHE_DIR").map(PathBuf::from),
            oeis_base_url: var("ASMTREE_OEIS_BASE_URL").map(|v| v.to_string_lossy().into_owned()),
            ..Env::default()
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "asmtree", version, about = "Count and list assembly trees of graphs")]
struct Cli {
    /// Leave out the version banner.
    #[arg(long, global = true)]
    no_banner: bool,
    /// Neither read nor write the count cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the trees of one graph.
    Count(CountArgs),
    /// Formula and oracle values over a range of sizes.
    Table(TableArgs),
    /// List every tree of one graph.
    Trees(TreesArgs),
    /// Coefficients of a generating function, checked against the formulas.
    Series(SeriesArgs),
    /// Compare a sequence with a b-file.
    Oeis(OeisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Star,
    Path,
    Cycle,
    Complete,
    Caterpillar,
    Custom,
}

impl FamilyArg {
    fn formula_family(self) -> Option<Family> {
        match self {
            FamilyArg::Star => Some(Family::Star),
            FamilyArg::Path => Some(Family::Path),
            FamilyArg::Cycle => Some(Family::Cycle),
            FamilyArg::Complete => Some(Family::Complete),
            FamilyArg::Caterpillar | FamilyArg::Custom => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FamilyArg::Caterpillar => "caterpillar",
            FamilyArg::Custom => "custom",
            other => other.formula_family().expect("named family").name(),
        }
    }

    fn family(self) -> CliResult<Family> {
        self.formula_family()
            .ok_or_else(|| CliError::Usage(format!("{} graphs are not a numbered family", self.name())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Enumerate,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Json,
    Dot,
}

fn parse_rule(s: &str) -> Result<GluingRule, String> {
    s.parse().map_err(|e: asmtree::Error| e.to_string())
}

fn parse_closed_form(s: &str) -> Result<CycleClosedForm, String> {
    s.parse().map_err(|e: asmtree::Error| e.to_string())
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count; for stars the total including the centre, for
    /// caterpillars the spine length.
    #[arg(long)]
    n: Option<usize>,
    /// Leg counts along a caterpillar's spine, comma separated.
    #[arg(long, value_delimiter = ',')]
    legs: Vec<usize>,
    /// JSON graph `{"n":…,"edges":[[u,v],…]}` for the custom family.
    #[arg(long)]
    graph_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_parser = parse_rule)]
    rule: GluingRule,
    /// Count time-dependent trees.
    #[arg(long)]
    timed: bool,
    /// Defaults to the formula where one exists, else enumeration.
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_parser = parse_rule)]
    rule: GluingRule,
    #[arg(long)]
    timed: bool,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Debug, Args)]
struct TreesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_parser = parse_rule)]
    rule: GluingRule,
    #[arg(long)]
    timed: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: TreeFormat,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// fubini-egf, super-catalan-ogf, cycle-ogf, td-cycle-egf or td-path-funceq
    which: String,
    #[arg(long)]
    order: usize,
    /// Print exponential series coefficients multiplied by k!.
    #[arg(long)]
    scaled: bool,
}

#[derive(Debug, Args)]
struct OeisArgs {
    /// Local b-file.
    #[arg(long, conflicts_with = "sequence")]
    bfile: Option<PathBuf>,
    /// Sequence number such as A000670, fetched from ASMTREE_OEIS_BASE_URL.
    #[arg(long)]
    sequence: Option<String>,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_parser = parse_rule)]
    rule: GluingRule,
    #[arg(long)]
    timed: bool,
    /// Generator argument minus b-file index.
    #[arg(long, allow_hyphen_values = true)]
    offset: i64,
    /// Largest generator argument compared.
    #[arg(long, default_value_t = 60)]
    n_max: usize,
    /// Generate cycle counts from a binomial closed form (a or b) instead.
    #[arg(long, value_parser = parse_closed_form)]
    closed_form: Option<CycleClosedForm>,
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(args: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let cache = match (&env.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Mutex::new(Cache::open(dir, VERSION))),
        _ => None,
    };
    let session = Session { env, cache };
    let mut result = Ok(());
    if !cli.no_banner {
        result = writeln!(out, "# asmtree {VERSION}").map_err(CliError::from);
    }
    if result.is_ok() {
        result = match &cli.command {
            Command::Count(a) => session.count(a, out),
            Command::Table(a) => session.table(a, out),
            Command::Trees(a) => trees(a, out),
            Command::Series(a) => series_cmd(a, out, err),
            Command::Oeis(a) => session.oeis(a, out),
        };
    }
    if let Some(cache) = &session.cache {
        let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Err(e) = cache.save() {
            let _ = writeln!(err, "warning: could not write the cache: {e}");
        }
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// The graph a request is about.
struct Target {
    graph: Graph,
    family: FamilyArg,
    /// The family parameter: total vertices for stars, spine length for
    /// caterpillars, the vertex count otherwise.
    n: usize,
}

fn resolve(args: &GraphArgs) -> CliResult<Target> {
    let usage = |e: asmtree::Error| CliError::Usage(e.to_string());
    match args.family {
        FamilyArg::Caterpillar => {
            if args.legs.is_empty() {
                return Err(CliError::Usage("caterpillars need --legs".into()));
            }
            let spine = args.legs.len();
            if args.n.is_some_and(|n| n != spine) {
                return Err(CliError::Usage(format!("--n must equal the {spine} leg counts given")));
            }
            Ok(Target { graph: Graph::caterpillar(spine, &args.legs).map_err(usage)?, family: args.family, n: spine })
        }
        FamilyArg::Custom => {
            let path =
                args.graph_file.as_ref().ok_or_else(|| CliError::Usage("custom graphs need --graph-file".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let graph = Graph::from_json(&text).map_err(usage)?;
            if args.n.is_some_and(|n| n != graph.n()) {
                return Err(CliError::Usage(format!("--n does not match the {} vertices in the file", graph.n())));
            }
            Ok(Target { n: graph.n(), graph, family: args.family })
        }
        other => {
            let n = args.n.ok_or_else(|| CliError::Usage(format!("{} graphs need --n", other.name())))?;
            let graph = other.family()?.graph(n).map_err(usage)?;
            Ok(Target { graph, family: other, n })
        }
    }
}

fn graph_key(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("{}:{}", g.n(), edges.join(","))
}

fn spec_of(family: FamilyArg, rule: GluingRule, timed: bool) -> Option<SequenceSpec> {
    family.formula_family().map(|f| SequenceSpec::new(f, rule, timed))
}

fn oracle_cutoff(timed: bool) -> usize {
    let limits = Limits::default();
    if timed {
        limits.timed_count
    } else {
        limits.count
    }
}

struct Session<'a> {
    env: &'a Env,
    cache: Option<Mutex<Cache>>,
}

impl Session<'_> {
    fn cached(&self, key: String, compute: impl FnOnce() -> CliResult<Natural>) -> CliResult<Natural> {
        if let Some(cache) = &self.cache {
            let hit = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key).map(str::to_owned);
            if let Some(value) = hit.and_then(|v| v.parse::<Natural>().ok()) {
                return Ok(value);
            }
        }
        let value = compute()?;
        if let Some(cache) = &self.cache {
            cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, value.to_string());
        }
        Ok(value)
    }

    fn formula(&self, spec: SequenceSpec, n: usize) -> CliResult<Option<Natural>> {
        if !spec.has_formula() {
            return Ok(None);
        }
        let value = self.cached(format!("formula {spec} n={n}"), || {
            (self.env.formula)(spec, n)?.ok_or_else(|| CliError::Usage(format!("no formula for {spec}")))
        })?;
        Ok(Some(value))
    }

    fn oracle(&self, g: &Graph, rule: GluingRule, timed: bool) -> CliResult<Natural> {
        let kind = if timed { "timed" } else { "plain" };
        self.cached(format!("oracle {rule} {kind} {}", graph_key(g)), || {
            let value = if timed { assembly::count_timed_trees(g, rule) } else { assembly::count_trees(g, rule) };
            value.map_err(|e| CliError::Usage(e.to_string()))
        })
    }

    fn count(&self, args: &CountArgs, out: &mut dyn Write) -> CliResult<()> {
        let target = resolve(&args.graph)?;
        let spec = spec_of(target.family, args.rule, args.timed).filter(SequenceSpec::has_formula);
        let method = args.method.unwrap_or(if spec.is_some() { Method::Formula } else { Method::Enumerate });
        let formula = || -> CliResult<Natural> {
            let spec = match (spec, target.family.formula_family()) {
                (Some(spec), _) => spec,
                (None, None) => {
                    return Err(CliError::Usage(format!(
                        "no formula is known for {} graphs; use --method enumerate",
                        target.family.name()
                    )))
                }
                (None, Some(f)) => {
                    let spec = SequenceSpec::new(f, args.rule, args.timed);
                    return Err(CliError::Usage(format!("no formula is known for {spec}; use --method enumerate")));
                }
            };
            Ok(self.formula(spec, target.n)?.expect("spec has a formula"))
        };
        match method {
            Method::Formula => writeln!(out, "{}", formula()?)?,
            Method::Enumerate => writeln!(out, "{}", self.oracle(&target.graph, args.rule, args.timed)?)?,
            Method::Both => {
                let f = formula()?;
                let o = self.oracle(&target.graph, args.rule, args.timed)?;
                if f == o {
                    writeln!(out, "{f}")?;
                } else {
                    writeln!(out, "formula\t{f}\noracle\t{o}")?;
                    return Err(CliError::Mismatch(format!("formula {f} and oracle {o} disagree")));
                }
            }
        }
        Ok(())
    }

    fn table(&self, args: &TableArgs, out: &mut dyn Write) -> CliResult<()> {
        let family = args.family.family()?;
        if args.n_min > args.n_max {
            return Err(CliError::Usage(format!("empty range {}..{}", args.n_min, args.n_max)));
        }
        if args.n_min < family.min_n() {
            return Err(CliError::Usage(format!("{family} graphs start at n = {}", family.min_n())));
        }
        let spec = SequenceSpec::new(family, args.rule, args.timed);
        let cutoff = oracle_cutoff(args.timed);
        // rows are computed concurrently and collected in order of n
        let rows: Vec<CliResult<Row>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (args.n_min..=args.n_max)
                .map(|n| {
                    scope.spawn(move || -> CliResult<Row> {
                        let formula = self.formula(spec, n)?;
                        let oracle = if n <= cutoff {
                            Some(self.oracle(&family.graph(n)?, args.rule, args.timed)?)
                        } else {
                            None
                        };
                        Ok(Row { n, formula, oracle })
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("table row panicked")).collect()
        });
        let rows = rows.into_iter().collect::<CliResult<Vec<Row>>>()?;
        let text = match args.format {
            TableFormat::Csv => table_csv(&rows),
            TableFormat::Markdown => table_markdown(&rows),
            TableFormat::Json => table_json(spec, &rows),
        };
        out.write_all(text.as_bytes())?;
        let bad: Vec<String> = rows.iter().filter(|r| r.agree() == Some(false)).map(|r| r.n.to_string()).collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Mismatch(format!("formula and oracle disagree at n = {}", bad.join(", "))))
        }
    }

    fn oeis(&self, args: &OeisArgs, out: &mut dyn Write) -> CliResult<()> {
        let family = args.family.family()?;
        let spec = SequenceSpec::new(family, args.rule, args.timed);
        if args.closed_form.is_some() && spec != SequenceSpec::new(Family::Cycle, GluingRule::Connected, false) {
            return Err(CliError::Usage("--closed-form applies to cycle/connected counts only".into()));
        }
        if args.closed_form.is_none() && !spec.has_formula() {
            return Err(CliError::Usage(format!("no formula is known for {spec}")));
        }
        let text = match (&args.bfile, &args.sequence) {
            (Some(path), _) => std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?,
            (None, Some(id)) => {
                let base = self.env.oeis_base_url.as_deref().ok_or_else(|| {
                    CliError::Usage("--sequence needs ASMTREE_OEIS_BASE_URL; pass --bfile for a local file".into())
                })?;
                fetch::bfile_text(id, base, self.env.cache_dir.as_deref())?
            }
            (None, None) => return Err(CliError::Usage("give --bfile or --sequence".into())),
        };
        let bfile: BFile = text.parse()?;
        let verdicts = bfile::compare(&bfile, args.offset, family.min_n(), args.n_max, |n| match args.closed_form {
            Some(form) => formulas::connected_cycle_closed(n, form),
            None => Ok(self
                .formula(spec, n)
                .map_err(|e| asmtree::Error::InvalidArgument(e.to_string()))?
                .unwrap_or_default()),
        })?;
        for v in &verdicts {
            let mark = if v.agree() { "ok" } else { "MISMATCH" };
            writeln!(out, "{}\t{}\t{}\t{}\t{mark}", v.index, v.n, v.expected, v.generated)?;
        }
        match verdicts.last() {
            None => {
                writeln!(out, "FAIL no overlapping terms")?;
                Err(CliError::Mismatch(format!(
                    "no b-file term maps into {}..={} with offset {}",
                    family.min_n(),
                    args.n_max,
                    args.offset
                )))
            }
            Some(v) if !v.agree() => {
                writeln!(out, "FAIL at index {}", v.index)?;
                Err(CliError::Mismatch(format!(
                    "index {} (n = {}): b-file has {}, generated {}",
                    v.index, v.n, v.expected, v.generated
                )))
            }
            Some(_) => {
                writeln!(out, "PASS {} terms", verdicts.len())?;
                Ok(())
            }
        }
    }
}

struct Row {
    n: usize,
    formula: Option<Natural>,
    oracle: Option<Natural>,
}

impl Row {
    fn agree(&self) -> Option<bool> {
        match (&self.formula, &self.oracle) {
            (Some(f), Some(o)) => Some(f == o),
            _ => None,
        }
    }

    fn cells(&self) -> [String; 4] {
        let show = |v: &Option<Natural>| v.as_ref().map(Natural::to_string).unwrap_or_default();
        let agree = self.agree().map(|a| a.to_string()).unwrap_or_default();
        [self.n.to_string(), show(&self.formula), show(&self.oracle), agree]
    }
}

fn table_csv(rows: &[Row]) -> String {
    let mut s = String::from("n,formula,oracle,agree\n");
    for r in rows {
        s.push_str(&r.cells().join(","));
        s.push('\n');
    }
    s
}

fn table_markdown(rows: &[Row]) -> String {
    let mut s = String::from("| n | formula | oracle | agree |\n| ---: | ---: | ---: | :---: |\n");
    for r in rows {
        let _ = writeln!(s, "| {} |", r.cells().join(" | "));
    }
    s
}

fn table_json(spec: SequenceSpec, rows: &[Row]) -> String {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "n": r.n,
                "formula": r.formula.as_ref().map(Natural::to_string),
                "oracle": r.oracle.as_ref().map(Natural::to_string),
                "agree": r.agree(),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "family": spec.family.name(),
        "rule": spec.rule.name(),
        "timed": spec.timed,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
    s.push('\n');
    s
}

fn trees(args: &TreesArgs, out: &mut dyn Write) -> CliResult<()> {
    let target = resolve(&args.graph)?;
    let limit = Limits::default().enumerate;
    if target.graph.n() > limit {
        return Err(CliError::Usage(format!(
            "listing trees of a {}-vertex graph is beyond the cutoff of {limit}",
            target.graph.n()
        )));
    }
    let mut failure = None;
    let mut emit = |text: String| {
        if failure.is_none() {
            let text = if args.format == TreeFormat::Json { text + "\n" } else { text };
            if let Err(e) = out.write_all(text.as_bytes()) {
                failure = Some(e);
            }
        }
    };
    let json = args.format == TreeFormat::Json;
    if args.timed {
        assembly::for_each_timed_tree(&target.graph, args.rule, |t| emit(if json { t.to_json() } else { t.to_dot() }))?;
    } else {
        assembly::for_each_tree(&target.graph, args.rule, |t| emit(if json { t.to_json() } else { t.to_dot() }))?;
    }
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn series_cmd(args: &SeriesArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    if args.order < 1 {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    if args.which == "td-path-funceq" {
        let check = series::check_td_path_functional_eq(args.order)?;
        return match check.first_mismatch {
            None => Ok(writeln!(out, "PASS order={}", check.order)?),
            Some(k) => {
                writeln!(out, "FAIL order={} first_mismatch={k}", check.order)?;
                Err(CliError::Mismatch(format!("functional equation fails at x^{k}")))
            }
        };
    }
    let builder: Builder = args.which.parse().map_err(|e: asmtree::Error| CliError::Usage(e.to_string()))?;
    let values = if args.scaled { builder.counts(args.order) } else { builder.build(args.order).coeffs().to_vec() };
    out.write_all(series::dump_values(&values).as_bytes())?;
    let bad: Vec<_> = builder.compare(args.order)?.into_iter().filter(|c| !c.agree).collect();
    for c in &bad {
        writeln!(err, "x^{}: series gives {}, formula gives {}", c.k, series::format_rational(&c.series), c.formula)?;
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("{} disagrees with its formula at {} coefficients", builder.name(), bad.len())))
    }
}
