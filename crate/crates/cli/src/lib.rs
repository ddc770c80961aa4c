//! The `hhodge` command line.
//!
//! [`run`] takes the full argument vector and returns the exit code with
//! everything that would go to stdout and stderr, so the binary is a thin
//! wrapper and tests can drive commands in-process.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hhodge::cache::{fingerprint, write_atomic, CacheFile};
use hhodge::classes::parse_class_expr;
use hhodge::engine::{parse_chs, parse_insertions};
use hhodge::selftest::{bundled_s3, corrupted_cache_check, omega_recursions_check, run_all};
use hhodge::series::{
    euler_entries, euler_series, jfunction, jtable_entries, potential, series_entries, twisted_genfun, Truncation,
};
use hhodge::wk::psi_correlator;
use hhodge::{cyclic_group, evaluate_class, format_rational, load_group, Engine, Error, FiniteGroupData, Rational};
use hhodge::{Insertion, TwistedCorrelator};

/// Cache entries recomputed from scratch on load: every `VERIFY_STRIDE`-th.
const VERIFY_STRIDE: usize = 7;

#[derive(Parser, Debug)]
#[command(name = "hhodge", version, about = "Exact Hurwitz-Hodge integrals over BG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witten-Kontsevich number <τ_{a_1} ... τ_{a_n}>_g.
    Psi {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Comma-separated ψ-powers, e.g. `1` or `0,0,0`.
        #[arg(long)]
        powers: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Degree Ω of the forgetful map for the classes of `--ins`.
    Omega {
        #[command(flatten)]
        q: QueryArgs,
    },
    /// Correlator of ψ̄-classes with no ch insertions.
    Corr {
        #[command(flatten)]
        q: QueryArgs,
    },
    /// Correlator with ch_k(F_alpha) insertions.
    Hodge {
        #[command(flatten)]
        q: QueryArgs,
        /// Comma list of `k:alpha`, e.g. `1:3,2:3` or `1:3*2`.
        #[arg(long)]
        ch: String,
    },
    /// Integral of a class expression such as `e(1,1,3)` or `c2(3)`.
    Euler {
        #[command(flatten)]
        q: QueryArgs,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Truncated generating functions.
    ///
    /// With no `--ch` or `--bundles`, the untwisted potential F_g. With
    /// `--ch k:alpha`, the series of single-ch correlators. With
    /// `--bundles` and `--sectors`, the Euler-class series.
    Series {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 3)]
        max_psi: u32,
        #[arg(long, conflicts_with_all = ["bundles", "sectors"])]
        ch: Option<String>,
        /// Irrep indices of the bundles, e.g. `1,1,3`.
        #[arg(long, requires = "sectors")]
        bundles: Option<String>,
        /// Class names of the marked-point sectors, e.g. `w,w2`.
        #[arg(long, requires = "bundles")]
        sectors: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// J-function from genus-0 correlators, checked against its closed form.
    Jfun {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Load a group file, validate it and print a summary.
    ValidateGroup {
        #[command(flatten)]
        g: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance corpus, the Ω recursion suite and a cache check.
    Selftest {
        /// Group for the Ω recursion suite; the bundled S3 table by default.
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// `z<N>` for the cyclic group of order N, otherwise a group file.
    #[arg(long)]
    group: String,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[command(flatten)]
    g: GroupArgs,
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Comma list of `class:psi` with optional `*count`, e.g. `w:0*3,w2:1`.
    #[arg(long)]
    ins: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Persistent correlator cache; read-verified on load, written atomically.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Inconsistency(_)) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (including the program name) and executes the command.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn resolve(spec: &str) -> CliResult<FiniteGroupData> {
    if let Some(n) = spec.strip_prefix('z').and_then(|d| d.parse::<u32>().ok()) {
        if n == 0 {
            return Err(CliError::Usage("z0 is not a group".into()));
        }
        return Ok(cyclic_group(n));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(load_group(&text)?)
}

fn execute(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Psi { genus, powers, out } => {
            let ps = powers
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|_| CliError::Usage(format!("bad ψ-power `{s}`"))))
                .collect::<CliResult<Vec<u32>>>()?;
            if ps.is_empty() {
                return Err(CliError::Usage("--powers needs at least one entry".into()));
            }
            let v = psi_correlator(genus, &ps)?;
            let list: Vec<String> = ps.iter().map(u32::to_string).collect();
            Ok(scalar(&out, format!("psi g={genus};powers={}", list.join(",")), &v))
        }
        Command::Omega { q } => {
            let (engine, ins) = setup(&q)?;
            let classes: Vec<usize> = ins.iter().map(|i| i.class).collect();
            let v = engine.omega(q.genus, &classes)?;
            let names: Vec<&str> = classes.iter().map(|&c| engine.group().classes()[c].name.as_str()).collect();
            Ok(scalar(&q.out, format!("omega {} g={};classes={}", q.g.group, q.genus, names.join(",")), &v))
        }
        Command::Corr { q } => {
            let (engine, ins) = setup(&q)?;
            let tc = TwistedCorrelator::new(q.genus, ins, vec![]);
            let v = engine.correlator(q.genus, &tc.insertions)?;
            Ok(scalar(&q.out, format!("corr {} {}", q.g.group, tc.canonical_key(engine.group())), &v))
        }
        Command::Hodge { q, ch } => {
            let (engine, ins) = setup(&q)?;
            let chs = parse_chs(engine.group(), &ch)?;
            let tc = TwistedCorrelator::new(q.genus, ins, chs);
            let v = with_cache(&engine, q.out.cache.as_deref(), || Ok(engine.twisted_correlator(&tc)?))?;
            Ok(scalar(&q.out, format!("hodge {} {}", q.g.group, tc.canonical_key(engine.group())), &v))
        }
        Command::Euler { q, expr } => {
            let (engine, ins) = setup(&q)?;
            let e = parse_class_expr(&expr)?;
            let v = with_cache(&engine, q.out.cache.as_deref(), || Ok(evaluate_class(&engine, q.genus, &ins, &e)?))?;
            let key = TwistedCorrelator::new(q.genus, ins, vec![]).canonical_key(engine.group());
            Ok(scalar(&q.out, format!("euler {} {key};expr={}", q.g.group, expr.trim()), &v))
        }
        Command::Series { g, genus, max_points, max_psi, ch, bundles, sectors, out } => {
            let engine = Engine::new(Arc::new(resolve(&g.group)?));
            let trunc = Truncation { max_points, max_psi };
            let bounds = format!("g={genus};max-points={max_points}");
            let (query, entries) = match (ch, bundles, sectors) {
                (Some(ch), _, _) => {
                    let chs = parse_chs(engine.group(), &ch)?;
                    let [c] = chs.as_slice() else {
                        return Err(CliError::Usage("--ch takes exactly one `k:alpha` for series".into()));
                    };
                    let p = with_cache(&engine, out.cache.as_deref(), || {
                        Ok(twisted_genfun(&engine, c.alpha, c.k, genus, trunc)?)
                    })?;
                    let q = format!("series {} {bounds};max-psi={max_psi};ch={}:{}", g.group, c.k, c.alpha);
                    (q, series_entries(engine.group(), &p))
                }
                (None, Some(b), Some(s)) => {
                    let bs = parse_indices(&b, "--bundles")?;
                    let ss = parse_sectors(engine.group(), &s)?;
                    let p = with_cache(&engine, out.cache.as_deref(), || {
                        Ok(euler_series(&engine, &bs, &ss, genus, max_points)?)
                    })?;
                    let q = format!("series {} {bounds};bundles={};sectors={}", g.group, b.trim(), s.trim());
                    (q, euler_entries(&p))
                }
                _ => {
                    let p = potential(&engine, genus, trunc)?;
                    (format!("series {} {bounds};max-psi={max_psi}", g.group), series_entries(engine.group(), &p))
                }
            };
            Ok(table(&out, query, &entries))
        }
        Command::Jfun { g, order, out } => {
            let engine = Engine::new(Arc::new(resolve(&g.group)?));
            let j = jfunction(&engine, order)?;
            Ok(table(&out, format!("jfun {} order={order}", g.group), &jtable_entries(&j)))
        }
        Command::ValidateGroup { g, out } => {
            let group = resolve(&g.group)?;
            Ok(group_summary(&out, &group))
        }
        Command::Selftest { group } => selftest(group.as_deref()),
    }
}

fn setup(q: &QueryArgs) -> CliResult<(Engine, Vec<Insertion>)> {
    let engine = Engine::new(Arc::new(resolve(&q.g.group)?));
    let ins = parse_insertions(engine.group(), &q.ins)?;
    if ins.is_empty() {
        return Err(CliError::Usage("--ins needs at least one marked point".into()));
    }
    Ok((engine, ins))
}

fn parse_indices(s: &str, flag: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("bad index `{x}` in {flag}"))))
        .collect()
}

fn parse_sectors(group: &FiniteGroupData, s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| group.class_index(x).ok_or_else(|| CliError::Usage(format!("unknown class `{x}` in --sectors"))))
        .collect()
}

/// Seeds the engine from `path`, runs `f`, and writes the merged memo back.
fn with_cache<T>(engine: &Engine, path: Option<&Path>, f: impl FnOnce() -> CliResult<T>) -> CliResult<T> {
    let Some(path) = path else {
        return f();
    };
    let mut file = match std::fs::read_to_string(path) {
        Ok(text) => {
            let c = CacheFile::parse(&text)?;
            if c.fingerprint != fingerprint(engine.group()) {
                return Err(CliError::Usage(format!("{}: cache belongs to a different group", path.display())));
            }
            c.load_into(engine, VERIFY_STRIDE)?;
            c
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => CacheFile::empty(engine.group()),
        Err(source) => return Err(CliError::Io { path: path.into(), source }),
    };
    let v = f()?;
    file.merge(&CacheFile::from_engine(engine));
    write_atomic(path, &file.render()).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(v)
}

fn ok(stdout: String) -> Outcome {
    Outcome { code: 0, stdout, stderr: String::new() }
}

fn render_json(v: &Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("JSON values serialize"))
}

fn scalar(out: &OutputArgs, query: String, v: &Rational) -> Outcome {
    let value = format_rational(v);
    ok(match out.format {
        Format::Plain => format!("{value}\n"),
        Format::Json => render_json(&json!({ "query": query, "value": value })),
    })
}

fn table(out: &OutputArgs, query: String, entries: &[(String, String)]) -> Outcome {
    ok(match out.format {
        Format::Plain => entries.iter().map(|(m, v)| format!("{m}\t{v}\n")).collect(),
        Format::Json => {
            let terms: Vec<Value> = entries.iter().map(|(m, v)| json!({ "monomial": m, "value": v })).collect();
            render_json(&json!({ "query": query, "terms": terms }))
        }
    })
}

fn group_summary(out: &OutputArgs, group: &FiniteGroupData) -> Outcome {
    let fp = fingerprint(group);
    ok(match out.format {
        Format::Plain => {
            let mut s = format!("group {} of order {}\nfingerprint {fp}\n", group.name(), group.order());
            for c in group.classes() {
                s += &format!("class {} size {} order {}\n", c.name, c.size, c.order);
            }
            for (i, r) in group.irreps().iter().enumerate() {
                s += &format!("irrep {i} {} dim {}\n", r.name, r.dim);
            }
            s
        }
        Format::Json => {
            let classes: Vec<Value> =
                group.classes().iter().map(|c| json!({ "name": c.name, "size": c.size, "order": c.order })).collect();
            let irreps: Vec<Value> = group.irreps().iter().map(|r| json!({ "name": r.name, "dim": r.dim })).collect();
            render_json(&json!({
                "group": group.name(),
                "order": group.order(),
                "fingerprint": fp,
                "classes": classes,
                "irreps": irreps,
            }))
        }
    })
}

fn selftest(group: Option<&str>) -> CliResult<Outcome> {
    let group = match group {
        Some(spec) => resolve(spec)?,
        None => bundled_s3(),
    };
    let mut stdout = String::new();
    let mut hard_failures = 0;
    for c in run_all() {
        stdout += &c.to_string();
        if !c.passed() && !c.fails_only_on_misprints() {
            hard_failures += 1;
        }
    }
    for check in [omega_recursions_check(&group, 2, 4), corrupted_cache_check()] {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        stdout += &format!("check {status}  {}\n", check.label);
        if let hhodge::selftest::Outcome::Fail(why) = &check.outcome {
            stdout += &format!("    FAIL: {why}\n");
        }
        if !check.passed() {
            hard_failures += 1;
        }
    }
    let code = if hard_failures == 0 { 0 } else { 1 };
    if code != 0 {
        stdout += &format!("{hard_failures} failures\n");
    }
    Ok(Outcome { code, stdout, stderr: String::new() })
}
