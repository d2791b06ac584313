//! `fuzzdyn`: run property checks and theorem verifications on finite
//! dynamical systems and their hyperspace and fuzzy lifts.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fuzzdyn::analysis::{
    self, BasisSpec, EquivalenceReport, TheoremConfig, Verdict, WeakMixingMethod, GENERATORS, THEOREMS,
};
use fuzzdyn::families::FamilyClassifier;
use fuzzdyn::fuzzy::GFunction;
use fuzzdyn::rational;
use fuzzdyn::spaces::SystemMap;
use fuzzdyn::{Bounds, Error, Rational};
use serde_json::{json, Value};

use report::{write_atomic, write_csv};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Properties accepted by `check --props`.
const PROPS: &[&str] = &[
    "transitivity",
    "weak-mixing",
    "mixing",
    "f-transitivity",
    "f-mixing",
    "a-transitivity",
    "mild-mixing",
    "periodic-density",
    "devaney",
    "sensitivity",
    "equicontinuity",
    "uniform-rigidity",
    "proximality",
    "diam-decay",
];

#[derive(Parser)]
#[command(
    name = "fuzzdyn",
    version,
    about = "Exact checks on finite dynamical systems and their hyperspace and fuzzy lifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run property checkers on a base system.
    Check {
        #[command(flatten)]
        common: Common,
        /// Comma-separated properties; see `catalog`.
        #[arg(long, default_value = "transitivity")]
        props: String,
    },
    /// Check one of the equivalence theorems across base and lifts.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theorem: String,
    },
    /// Emit diameter decay, rigidity and modulus curves as CSV.
    Plotdata {
        #[command(flatten)]
        common: Common,
    },
    /// List generators, built-in systems, properties and theorem ids.
    Catalog {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Generator string such as `rotation:12,1`, or `file:path.json`.
    #[arg(long)]
    system: String,
    /// Grid size of the fuzzy lifts.
    #[arg(long, default_value_t = 2)]
    m: u8,
    #[arg(long, default_value_t = 64)]
    horizon: usize,
    /// `default`, `singletons`, `balls:r` or `cylinders:k`.
    #[arg(long, default_value = "default")]
    basis: String,
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated heights; all positive grid levels by default.
    #[arg(long)]
    lambda: Option<String>,
    /// Comma-separated exponents for a-transitivity.
    #[arg(long, default_value = "1,2")]
    a: String,
    #[arg(long, default_value = "thick")]
    family: String,
    /// Grade distortion for the cut lemma, as `file:path.json`.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value = "fuzzdyn-out")]
    out: PathBuf,
    /// Print the report as JSON on stdout.
    #[arg(long)]
    json: bool,
}

/// Failure of the tool itself, as opposed to a failing verdict.
enum Failure {
    Malformed(String),
    Bound(String),
    RedAlert(PathBuf),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 2,
            Failure::Bound(_) => 3,
            Failure::RedAlert(_) => 4,
            Failure::Io(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundExceeded { .. } => Failure::Bound(e.to_string()),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { common, props } => cmd_check(&common, &props),
        Command::Verify { common, theorem } => cmd_verify(&common, &theorem),
        Command::Plotdata { common } => cmd_plotdata(&common),
        Command::Catalog { json } => cmd_catalog(json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Malformed(m) => eprintln!("error: {m}"),
                Failure::Bound(m) => eprintln!("bound exceeded: {m}"),
                Failure::RedAlert(p) => {
                    eprintln!("red alert: exact results disagree; replay written to {}", p.display())
                }
                Failure::Io(m) => eprintln!("i/o error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Malformed(msg.into())
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, Failure> {
    rational::parse(s).map_err(|_| malformed(format!("bad {what} `{s}`")))
}

fn parse_g(s: &str) -> Result<GFunction, Failure> {
    let path = s
        .strip_prefix("file:")
        .ok_or_else(|| malformed("--g takes file:path.json"))?;
    let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("cannot read `{path}`: {e}")))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("bad g in `{path}`: {e}")))
}

struct Setup {
    sys: SystemMap,
    cfg: TheoremConfig,
}

impl Common {
    fn setup(&self) -> Result<Setup, Failure> {
        let bounds = Bounds::from_env()?;
        let sys = analysis::parse_system(&self.system, &bounds)?;
        if self.m == 0 {
            return Err(malformed("--m must be positive"));
        }
        let lambdas = self
            .lambda
            .as_deref()
            .map(|l| {
                l.split(',')
                    .map(|x| parse_rational(x, "lambda"))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let eps = self.eps.as_deref().map(|e| parse_rational(e, "eps")).transpose()?;
        if eps.is_some_and(|e| e <= Rational::from_integer(0)) {
            return Err(malformed("--eps must be positive"));
        }
        let a = self
            .a
            .split(',')
            .map(|x| x.trim().parse::<usize>().ok().filter(|&k| k > 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| malformed(format!("bad exponents `{}`", self.a)))?;
        let cfg = TheoremConfig {
            m: self.m,
            lambdas,
            horizon: self.horizon,
            basis: BasisSpec::parse(&self.basis)?,
            family: FamilyClassifier::parse(&self.family)?,
            a,
            eps,
            g: self.g.as_deref().map(parse_g).transpose()?,
            seed: self.seed,
            samples: self.samples,
            bounds,
        };
        Ok(Setup { sys, cfg })
    }

    fn echo(&self, cfg: &TheoremConfig) -> Value {
        let mut c = cfg.to_json();
        c["system"] = json!(self.system);
        c
    }
}

fn default_eps(sys: &SystemMap) -> Rational {
    sys.space()
        .min_positive_distance()
        .map_or_else(|| Rational::from_integer(1), |d| d / Rational::from_integer(2))
}

fn run_prop(prop: &str, s: &Setup) -> Result<Verdict, Error> {
    let (sys, cfg) = (&s.sys, &s.cfg);
    let basis = cfg.basis.resolve(sys.space())?;
    let eps = cfg.eps.unwrap_or_else(|| default_eps(sys));
    match prop {
        "transitivity" => analysis::is_transitive(sys, &basis),
        "weak-mixing" => analysis::is_weakly_mixing(sys, &basis, WeakMixingMethod::Product, &cfg.bounds),
        "mixing" => analysis::is_mixing(sys, &basis),
        "f-transitivity" => analysis::is_f_transitive(sys, &basis, &cfg.family, cfg.horizon),
        "f-mixing" => analysis::is_f_mixing(sys, &basis, &cfg.family, cfg.horizon, &cfg.bounds),
        "a-transitivity" => analysis::is_a_transitive(sys, &cfg.a, &basis, &cfg.bounds),
        "mild-mixing" => {
            let catalog = analysis::mild_mixing_catalog(&cfg.bounds)?;
            analysis::is_mildly_mixing_bounded(sys, &basis, &catalog, cfg.horizon, &cfg.bounds)
        }
        "periodic-density" => analysis::is_periodically_dense(sys, &basis),
        "devaney" => analysis::is_devaney(sys, &basis),
        "sensitivity" => analysis::is_sensitive(sys, eps),
        "equicontinuity" => analysis::equicontinuity(sys, eps),
        "uniform-rigidity" => analysis::is_uniformly_rigid(sys, eps),
        "proximality" => analysis::is_proximal(sys),
        "diam-decay" => analysis::diam_reaches_zero(sys),
        _ => unreachable!("props are validated first"),
    }
}

fn status_of(v: &Verdict) -> &'static str {
    match v.value() {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "inconclusive",
    }
}

fn exactness_of(v: &Verdict) -> String {
    match serde_json::to_value(&v.exactness) {
        Ok(Value::Object(o)) => o.get("mode").and_then(Value::as_str).unwrap_or("").to_string(),
        _ => String::new(),
    }
}

fn cmd_check(common: &Common, props: &str) -> Result<(), Failure> {
    let props: Vec<&str> = props.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if props.is_empty() {
        return Err(malformed("--props is empty"));
    }
    if let Some(p) = props.iter().find(|p| !PROPS.contains(p)) {
        return Err(malformed(format!("unknown property `{p}`")));
    }
    let setup = common.setup()?;
    let verdicts = props
        .iter()
        .map(|p| run_prop(p, &setup))
        .collect::<Result<Vec<_>, _>>()?;
    let report = json!({
        "tool": "fuzzdyn",
        "version": VERSION,
        "command": "check",
        "config": common.echo(&setup.cfg),
        "system": serde_json::to_value(setup.sys.spec())?,
        "verdicts": verdicts,
    });
    std::fs::create_dir_all(&common.out)?;
    write_atomic(&common.out.join("report.json"), &report)?;
    let rows: Vec<Vec<String>> = verdicts
        .iter()
        .map(|v| {
            let detail = v.counterexample().map(|c| c.to_string()).unwrap_or_default();
            vec![v.property.clone(), status_of(v).into(), exactness_of(v), detail]
        })
        .collect();
    write_csv(
        &common.out.join("summary.csv"),
        &["property", "status", "exactness", "counterexample"],
        &rows,
    )?;
    if common.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("system {}", common.system);
        for v in &verdicts {
            println!("  {:<22} {:<12} {}", v.property, status_of(v), exactness_of(v));
        }
    }
    Ok(())
}

fn level_name(level: &analysis::Level) -> String {
    serde_json::to_value(level)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn cmd_verify(common: &Common, theorem: &str) -> Result<(), Failure> {
    if !THEOREMS.iter().any(|(t, _)| *t == theorem) {
        return Err(malformed(format!("unknown theorem id `{theorem}`")));
    }
    let setup = common.setup()?;
    let rep: EquivalenceReport = analysis::verify_theorem(theorem, &setup.sys, &setup.cfg)?;
    let report = json!({
        "tool": "fuzzdyn",
        "version": VERSION,
        "command": "verify",
        "config": common.echo(&setup.cfg),
        "report": rep,
    });
    std::fs::create_dir_all(&common.out)?;
    write_atomic(&common.out.join("report.json"), &report)?;
    let rows: Vec<Vec<String>> = rep
        .rows()
        .map(|r| {
            vec![
                r.item.clone(),
                level_name(&r.level),
                r.property.clone(),
                status_of(&r.verdict).into(),
                exactness_of(&r.verdict),
                r.expected.map(|e| e.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_csv(
        &common.out.join("summary.csv"),
        &["item", "level", "property", "status", "exactness", "expected"],
        &rows,
    )?;
    if common.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "{theorem} on {}: {}",
            common.system,
            if rep.consistent { "consistent" } else { "INCONSISTENT" }
        );
        for r in rep.rows() {
            let expected = r.expected.map(|e| format!(" (expected {e})")).unwrap_or_default();
            println!(
                "  {:<4} {:<10} {:<22} {:<12} {}{expected}",
                r.item,
                level_name(&r.level),
                r.property,
                status_of(&r.verdict),
                exactness_of(&r.verdict)
            );
        }
        for n in &rep.notes {
            println!("  note: {n}");
        }
    }
    if let Some(alert) = &rep.red_alert {
        let path = common.out.join("replay.json");
        write_atomic(
            &path,
            &json!({ "first": alert.first, "second": alert.second, "replay": alert.replay }),
        )?;
        return Err(Failure::RedAlert(path));
    }
    Ok(())
}

fn cmd_plotdata(common: &Common) -> Result<(), Failure> {
    let setup = common.setup()?;
    let sys = &setup.sys;
    std::fs::create_dir_all(&common.out)?;
    let fmt = |q: &Rational| rational::format(q);
    let diam: Vec<Vec<String>> = analysis::diam_decay(sys, common.horizon)
        .iter()
        .enumerate()
        .map(|(n, d)| vec![n.to_string(), fmt(d)])
        .collect();
    write_csv(&common.out.join("diam_decay.csv"), &["n", "diam"], &diam)?;
    let rigidity: Vec<Vec<String>> = analysis::rigidity_curve(sys, common.horizon)?
        .iter()
        .enumerate()
        .map(|(n, d)| vec![n.to_string(), fmt(d)])
        .collect();
    write_csv(&common.out.join("rigidity.csv"), &["n", "max_displacement"], &rigidity)?;
    let modulus: Vec<Vec<String>> = analysis::modulus_curve(sys)?
        .iter()
        .map(|(e, d)| vec![fmt(e), d.as_ref().map(fmt).unwrap_or_else(|| "none".into())])
        .collect();
    write_csv(&common.out.join("modulus.csv"), &["eps", "delta"], &modulus)?;
    let summary = json!({
        "tool": "fuzzdyn",
        "version": VERSION,
        "command": "plotdata",
        "config": common.echo(&setup.cfg),
        "files": ["diam_decay.csv", "rigidity.csv", "modulus.csv"],
    });
    write_atomic(&common.out.join("report.json"), &summary)?;
    if common.json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        println!(
            "wrote diam_decay.csv, rigidity.csv, modulus.csv to {}",
            common.out.display()
        );
    }
    Ok(())
}

fn cmd_catalog(as_json: bool) -> Result<(), Failure> {
    if as_json {
        let v = json!({
            "version": VERSION,
            "generators": GENERATORS.iter().map(|(g, d)| json!({"syntax": g, "description": d})).collect::<Vec<_>>(),
            "systems": analysis::BUILTIN,
            "properties": PROPS,
            "theorems": THEOREMS.iter().map(|(t, s)| json!({"id": t, "statement": s})).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(());
    }
    let mut out = String::from("generators:\n");
    for (g, d) in GENERATORS {
        out += &format!("  {g:<28} {d}\n");
    }
    out += "built-in systems:\n";
    for s in analysis::BUILTIN {
        out += &format!("  {s}\n");
    }
    out += "properties:\n";
    for p in PROPS {
        out += &format!("  {p}\n");
    }
    out += "theorems:\n";
    for (t, s) in THEOREMS {
        out += &format!("  {t:<18} {s}\n");
    }
    // Ignore a closed pipe, as in `fuzzdyn catalog | head`.
    let _ = std::io::stdout().write_all(out.as_bytes());
    Ok(())
}
