mod expr;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussflow::baselines::{BaselineConfig, Method};
use gaussflow::bench::{emit_report, run_noisy_suite, run_suite, Contender, Format, SuiteConfig, Table};
use gaussflow::corpus::{self, Attribute, FunctionClass, Minimizer, TestFunction};
use gaussflow::objective::{ObjFn, NORMALIZATION_GRID};
use gaussflow::optimizer::{run_boosted, RunError};
use gaussflow::{Domain, GaussianState, Objective, RunConfig, SampleStore};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Functions of the noisy suite when none are named.
const NOISY_DEFAULT: [&str; 3] = ["DeJong1", "Schwefel", "Deltadprime10"];

#[derive(Parser)]
#[command(name = "gaussflow", version, about = "Derivative-free global minimization in one dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize a corpus function or an expression file.
    Optimize(OptimizeArgs),
    /// Run optimizers over the corpus and report benchmark metrics.
    Bench(BenchArgs),
    /// List the corpus with domains, attributes and known minima.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat `key = value` configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Single `key=value` override, applied after --config.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Additional boosting cycles.
    #[arg(long, value_name = "N")]
    boost: Option<usize>,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Corpus function name, or a file holding `f = <expression in x>` and `domain = lo, hi`.
    target: String,
    /// Domain `lo:hi`; overrides the one in the expression file.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
    domain: Option<String>,
    /// Initial mean; drawn uniformly from the domain when absent.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Initial standard deviation; defaults to the domain width.
    #[arg(long, requires = "mu")]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    config: ConfigArgs,
    /// Additive Gaussian noise level on the normalized objective.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Optimize the raw function instead of the unit-oscillation rescaling.
    #[arg(long)]
    raw: bool,
    /// Write one JSON object per iteration to FILE.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    /// Seed the sample store from FILE (`x,fx,mu,sigma` lines).
    #[arg(long, value_name = "FILE")]
    load_store: Option<PathBuf>,
    /// Write the final sample store to FILE.
    #[arg(long, value_name = "FILE")]
    save_store: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    /// Function class or attribute; repeatable. Defaults to `all`.
    #[arg(long, value_delimiter = ',')]
    class: Vec<String>,
    /// Restrict to these corpus functions.
    #[arg(long, value_delimiter = ',')]
    functions: Vec<String>,
    /// Comma-separated optimizers: flow, nm, rs, de, sa, uniform.
    #[arg(long, value_delimiter = ',', default_value = "flow")]
    optimizers: Vec<String>,
    #[arg(long, default_value_t = 100)]
    seeds: usize,
    /// Noise levels; runs the location-scored noisy suite.
    #[arg(long, value_delimiter = ',')]
    noise: Vec<f64>,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    /// Record wall-clock time per run.
    #[arg(long)]
    timing: bool,
    /// One row per function for each optimizer instead of class aggregates.
    #[arg(long)]
    per_function: bool,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct CorpusArgs {
    /// Function class or attribute to list.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, value_enum, default_value_t = ManifestFormat::Tsv)]
    format: ManifestFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifestFormat {
    Tsv,
    Json,
}

/// Failure kinds and their exit codes.
#[derive(Debug)]
enum Failure {
    /// The objective could not be evaluated.
    Objective(String),
    /// Invalid arguments, configuration or files.
    Config(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Objective(_) => 2,
            Failure::Config(_) => 3,
        }
    }
}

impl From<gaussflow::Error> for Failure {
    fn from(e: gaussflow::Error) -> Self {
        use gaussflow::Error as E;
        match e {
            E::Config(_) | E::InvalidDomain { .. } | E::Store { .. } => Failure::Config(e.to_string()),
            _ => Failure::Objective(e.to_string()),
        }
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Optimize(a) => optimize(a),
        Command::Bench(a) => bench(a),
        Command::Corpus(a) => list_corpus(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Objective(msg) | Failure::Config(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn run_config(base: RunConfig, args: &ConfigArgs) -> Result<RunConfig, Failure> {
    let mut cfg = base;
    if let Some(path) = &args.config {
        cfg.apply_kv(&read(path)?)?;
    }
    for kv in &args.sets {
        let (k, v) = kv.split_once('=').ok_or_else(|| config_err(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k, v)?;
    }
    if let Some(n) = args.boost {
        cfg.boosting_cycles = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_domain(text: &str) -> Result<Domain, Failure> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    let (lo, hi) = t
        .split_once(':')
        .or_else(|| t.split_once(','))
        .ok_or_else(|| config_err(format!("domain {text:?}: expected lo:hi")))?;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| config_err(format!("domain {text:?}: bad bound {s:?}")));
    Ok(Domain::new(num(lo)?, num(hi)?)?)
}

/// Contents of an expression file.
struct ExprFile {
    expression: String,
    domain: Option<Domain>,
}

fn parse_expr_file(text: &str) -> Result<ExprFile, Failure> {
    let (mut expression, mut domain) = (None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(format!("line {}: expected key = value", i + 1)));
        };
        match key.trim() {
            "f" | "f(x)" => expression = Some(value.trim().to_string()),
            "domain" => domain = Some(parse_domain(value)?),
            other => return Err(config_err(format!("line {}: unknown key {other:?}", i + 1))),
        }
    }
    let expression = expression.ok_or_else(|| config_err("expression file has no `f = ...` line"))?;
    Ok(ExprFile { expression, domain })
}

/// The function being optimized, on its original scale.
struct Target {
    name: String,
    f: ObjFn,
    domain: Domain,
}

fn resolve_target(a: &OptimizeArgs) -> Result<Target, Failure> {
    let override_domain = a.domain.as_deref().map(parse_domain).transpose()?;
    if let Some(tf) = corpus::find(&a.target) {
        let f = tf.function();
        return Ok(Target { name: tf.name.to_string(), f: Arc::new(f), domain: override_domain.unwrap_or(tf.domain) });
    }
    let path = Path::new(&a.target);
    if !path.exists() {
        return Err(config_err(format!("{:?} is neither a corpus function nor a file", a.target)));
    }
    let file = parse_expr_file(&read(path)?)?;
    let e = expr::parse(&file.expression).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let domain = override_domain
        .or(file.domain)
        .ok_or_else(|| config_err(format!("{}: no domain; add `domain = lo, hi` or pass --domain", path.display())))?;
    Ok(Target { name: file.expression, f: Arc::new(move |x| e.eval(x)), domain })
}

fn optimize(a: OptimizeArgs) -> Result<(), Failure> {
    let mut cfg = run_config(RunConfig::default(), &a.config)?;
    cfg.record_trace = a.trace.is_some();
    let target = resolve_target(&a)?;
    if !(a.noise >= 0.0 && a.noise.is_finite()) {
        return Err(config_err(format!("noise level must be nonnegative, got {}", a.noise)));
    }
    let init = match (a.mu, a.sigma) {
        (Some(mu), sigma) => {
            let sigma = sigma.unwrap_or(target.domain.width());
            if !(mu.is_finite() && sigma > 0.0 && sigma.is_finite()) {
                return Err(config_err(format!("invalid initial state mu = {mu}, sigma = {sigma}")));
            }
            Some(GaussianState::new(mu, sigma))
        }
        (None, _) => None,
    };
    let mut store = match &a.load_store {
        Some(path) => SampleStore::from_text(&read(path)?)?,
        None => SampleStore::new(),
    };

    let mut obj = Objective::from_arc(target.f.clone(), target.domain);
    if !a.raw {
        obj.normalize(NORMALIZATION_GRID)?;
    }
    if a.noise > 0.0 {
        obj.set_noise(a.noise, a.seed.wrapping_add(1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let result = run_boosted(&mut obj, &cfg, init, &mut store, &mut rng);

    let trace = match &result {
        Ok(r) => r.trace.as_deref().unwrap_or_default(),
        Err(RunError { trace, .. }) => trace.as_slice(),
    };
    if let Some(path) = &a.trace {
        let mut out = String::new();
        for rec in trace {
            let _ = writeln!(out, "{}", serde_json::to_string(rec).expect("serializable record"));
        }
        write(path, &out)?;
    }
    if let Some(path) = &a.save_store {
        write(path, &store.to_text())?;
    }
    let r = result.map_err(|e| Failure::Objective(format!("{} after {} evaluations", e.error, e.n_evals)))?;
    let fx = (target.f)(r.x_out);
    match a.format {
        OutputFormat::Text => {
            println!("function    {}", target.name);
            println!("x           {:?}", r.x_out);
            println!("f(x)        {fx:?}");
            println!("evaluations {}", r.n_evals);
            println!("iterations  {}", r.n_iters);
            println!("restarts    {}", r.restarts);
            println!("stop        {}", r.stop_reason);
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "function": target.name,
                "x": r.x_out,
                "f": fx,
                "evaluations": r.n_evals,
                "iterations": r.n_iters,
                "restarts": r.restarts,
                "stop_reason": r.stop_reason,
                "mu_final": r.mu_final,
                "sigma_final": r.sigma_final,
            });
            println!("{doc}");
        }
    }
    Ok(())
}

/// A preset class, or a single attribute as an ad-hoc class.
fn resolve_class(name: &str) -> Result<FunctionClass, Failure> {
    if let Some(c) = corpus::class(name) {
        return Ok(c);
    }
    let attr: Attribute = name.parse().map_err(|_| {
        let presets: Vec<&str> = corpus::CLASSES.iter().map(|c| c.name).collect();
        config_err(format!("unknown class or attribute {name:?}; classes: {}", presets.join(", ")))
    })?;
    let attrs: &'static [Attribute] = Box::leak(Box::new([attr]));
    Ok(FunctionClass { name: attr.as_str(), attributes: attrs })
}

fn find_function(name: &str) -> Result<&'static TestFunction, Failure> {
    corpus::find(name).ok_or_else(|| config_err(format!("unknown corpus function {name:?}")))
}

fn contenders(names: &[String], flow: &RunConfig) -> Result<Vec<Contender>, Failure> {
    let mut out: Vec<Contender> = Vec::new();
    for name in names {
        let c = if name.eq_ignore_ascii_case("flow") {
            Contender::flow("flow", flow.clone())
        } else {
            let m: Method = name.parse().map_err(config_err)?;
            Contender::baseline(BaselineConfig::new(m))
        };
        if out.iter().any(|o| o.label == c.label) {
            return Err(config_err(format!("optimizer {name:?} listed twice")));
        }
        out.push(c);
    }
    if out.is_empty() {
        return Err(config_err("no optimizers given"));
    }
    Ok(out)
}

fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Json => {
            let parts: Vec<String> = tables.iter().map(|t| emit_report(t, format).trim_end().to_string()).collect();
            format!("[\n{}\n]\n", parts.join(",\n"))
        }
        _ => tables.iter().map(|t| emit_report(t, format)).collect::<Vec<_>>().join("\n"),
    }
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    if a.seeds == 0 {
        return Err(config_err("--seeds must be at least 1"));
    }
    if let Some(z) = a.noise.iter().find(|z| !(**z >= 0.0 && z.is_finite())) {
        return Err(config_err(format!("noise level must be nonnegative, got {z}")));
    }
    let noisy = !a.noise.is_empty();
    let base = if noisy { RunConfig::noisy() } else { RunConfig::default() };
    let cfg = run_config(base, &a.config)?;
    let contenders = contenders(&a.optimizers, &cfg)?;
    let suite = SuiteConfig { master_seed: a.master_seed, seeds: a.seeds, timing: a.timing, ..Default::default() };

    let classes: Vec<FunctionClass> = if a.class.is_empty() {
        vec![corpus::class("all").expect("preset class")]
    } else {
        a.class.iter().map(|c| resolve_class(c)).collect::<Result<_, _>>()?
    };
    let functions: Vec<&'static TestFunction> = if !a.functions.is_empty() {
        a.functions.iter().map(|n| find_function(n)).collect::<Result<_, _>>()?
    } else if noisy && a.class.is_empty() {
        NOISY_DEFAULT.iter().map(|n| find_function(n)).collect::<Result<_, _>>()?
    } else {
        let mut fs: Vec<&'static TestFunction> = Vec::new();
        for f in classes.iter().flat_map(FunctionClass::members) {
            if !fs.iter().any(|g| g.name == f.name) {
                fs.push(f);
            }
        }
        fs
    };
    if functions.is_empty() {
        return Err(config_err("the selection contains no corpus functions"));
    }

    let tables = if noisy {
        vec![run_noisy_suite(&contenders, &functions, &a.noise, &suite)]
    } else {
        let result = run_suite(&contenders, &functions, &suite);
        if a.per_function || !a.functions.is_empty() {
            contenders.iter().filter_map(|c| result.function_table(&c.label)).collect()
        } else {
            classes.iter().map(|c| result.class_table(c)).filter(|t| !t.rows.is_empty()).collect()
        }
    };
    let text = render(&tables, a.format);
    match &a.out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn list_corpus(a: CorpusArgs) -> Result<(), Failure> {
    let functions = match &a.class {
        Some(name) => resolve_class(name)?.members(),
        None => corpus::load_corpus().iter().collect(),
    };
    match a.format {
        ManifestFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&functions).expect("serializable corpus"));
        }
        ManifestFormat::Tsv => {
            println!("name\tx_min\tx_max\tf_min\tminimizers\tattributes\texpression");
            for f in functions {
                let minimizers: Vec<String> = f
                    .known_min_x
                    .iter()
                    .map(|m| match m {
                        Minimizer::Point(x) => x.to_string(),
                        Minimizer::Interval(lo, hi) => format!("{lo}:{hi}"),
                    })
                    .collect();
                let attrs: Vec<&str> = f.attributes.iter().map(|a| a.as_str()).collect();
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    f.name,
                    f.domain.x_min,
                    f.domain.x_max,
                    f.known_min_f,
                    minimizers.join(";"),
                    attrs.join(","),
                    f.expression
                );
            }
        }
    }
    Ok(())
}
