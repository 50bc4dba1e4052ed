//! Command-line front end.
//!
//! Exit codes: 0 every verdict passed, 1 some verdict failed, 2 nothing failed
//! but something was inconclusive, 3 usage or input error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construction::{
    combine_blockwise, make_F_k, make_G_m, make_f_ki, make_g, make_sign_matrix, ConstructionParams, SignVector,
};
use crate::error::{Error, Result};
use crate::numeric::{fmt_pq, int, parse_rational, RatInterval, Rational};
use crate::pwfunc::{PiecewiseFn, Refinement, DEFAULT_EVAL_BUDGET};
use crate::seqspace::{discrete_family, verify_discrete_lemma, DEFAULT_MAX_LEN};
use crate::typeprobe::{
    type1_ratio, verify_gstar, verify_lemma, verify_unit_norms, write_ratio_csv, ProbeBudget, ProbeReport, RatioRow,
    SignMode, Verdict, DEFAULT_EXHAUSTIVE_CEILING, REPORT_DIGITS,
};

pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "weaktype", version, about = "Certified weak-L1 quasi-norms and type-1 probes")]
pub struct Cli {
    /// Plain-text `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enclose the weak-L1 quasi-norm of one function.
    Norm(FnArgs),
    /// Check the sandwich bounds for every signed sum of the family.
    VerifyLemma(ProbeArgs),
    /// Check that every vector of the family has quasi-norm at most 1.
    UnitNorms(ProbeArgs),
    /// Check the closed form of the rearrangement of one vector.
    Gstar(ProbeArgs),
    /// Tabulate the type-1 ratio over a range of bases.
    TypeRatio(ProbeArgs),
    /// Enclose the decreasing rearrangement on a uniform grid.
    Rearrange(FnArgs),
    /// Exact weak-l1 norms of the sampled family.
    Discrete(ProbeArgs),
    /// Write a function in the JSON segment format.
    Export(FnArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// Relative tolerance, e.g. `1e-6` or `1/1000000`.
    #[arg(long)]
    pub tol: Option<String>,
    /// Cell evaluations per norm.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct FnArgs {
    /// `f:n:k:i`, `F:n:k`, `g:n:j`, `G:n:m`, `sum:n:+-+...` or `@file.json`.
    pub selector: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Number of grid points for `rearrange`.
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub j: Option<usize>,
    /// `all` or `sample:K`.
    #[arg(long)]
    pub signs: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid points for `gstar`.
    #[arg(long)]
    pub points: Option<usize>,
    /// First base for `type-ratio`.
    #[arg(long)]
    pub n_min: Option<u64>,
    /// Last base for `type-ratio`.
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Largest number of sign vectors enumerated exhaustively.
    #[arg(long)]
    pub ceiling: Option<u64>,
    /// Directory receiving one CSV per sampled sequence (`discrete`).
    #[arg(long)]
    pub sequences: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

/// Fully resolved settings, echoed into every report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selector: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(with = "crate::numeric::serde_pq")]
    pub tol: Rational,
    pub signs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub budget: u64,
    pub ceiling: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(skip)]
    pub sequences: Option<PathBuf>,
}

impl RunConfig {
    fn sign_mode(&self) -> Result<SignMode> {
        parse_signs(&self.signs, self.seed.unwrap_or(0))
    }

    fn budget(&self) -> Result<ProbeBudget> {
        let b = ProbeBudget {
            tol: self.tol.clone(),
            sign_mode: self.sign_mode()?,
            eval_budget: self.budget,
            exhaustive_ceiling: self.ceiling,
        };
        b.validate()?;
        Ok(b)
    }

    fn params(&self) -> Result<ConstructionParams> {
        ConstructionParams::new(self.n.ok_or_else(|| usage("--n is required"))?)
    }

    fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

fn usage(msg: &str) -> Error {
    Error::Parameter(msg.to_string())
}

/// `all` or `sample:K`.
pub fn parse_signs(text: &str, seed: u64) -> Result<SignMode> {
    match text.trim() {
        "all" => Ok(SignMode::Exhaustive),
        other => {
            let count =
                other.strip_prefix("sample:").and_then(|k| k.parse::<usize>().ok()).filter(|k| *k >= 1).ok_or_else(
                    || Error::Parse(format!("--signs expects `all` or `sample:K` with K >= 1, got `{other}`")),
                )?;
            Ok(SignMode::Sample { count, seed })
        }
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", no + 1)))?;
        out.insert(key.trim().replace('_', "-"), value.trim().to_string());
    }
    Ok(out)
}

struct Layer(BTreeMap<String, String>);

impl Layer {
    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Parse(format!("config key `{key}`: cannot parse `{v}`"))))
            .transpose()
    }
}

const CONFIG_KEYS: &[&str] = &[
    "selector",
    "n",
    "k",
    "j",
    "points",
    "tol",
    "budget",
    "out",
    "format",
    "signs",
    "seed",
    "n-min",
    "n-max",
    "ceiling",
    "sequences",
];

fn resolve(command: &str, cli_config: Option<&Path>, fa: Option<&FnArgs>, pa: Option<&ProbeArgs>) -> Result<RunConfig> {
    let layer = match cli_config {
        Some(path) => Layer(parse_config(&fs::read_to_string(path)?)?),
        None => Layer(BTreeMap::new()),
    };
    if let Some(bad) = layer.0.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return Err(Error::Parse(format!("unknown config key `{bad}`")));
    }
    let empty = Common::default();
    let common = fa.map(|f| &f.common).or(pa.map(|p| &p.common)).unwrap_or(&empty);
    let tol_text = layer.pick(common.tol.clone(), "tol")?;
    let format = match layer.pick(None::<String>, "format")? {
        _ if common.format.is_some() => common.format.unwrap_or(Format::Json),
        Some(f) => Format::from_str(&f, true).map_err(|_| Error::Parse(format!("config key `format`: `{f}`")))?,
        None => Format::Json,
    };
    let tol = match tol_text {
        Some(t) => parse_rational(&t)?,
        None => Rational::ONE / int(1_000_000),
    };
    Ok(RunConfig {
        command: command.to_string(),
        selector: layer.pick(fa.and_then(|f| f.selector.clone()), "selector")?,
        n: layer.pick(fa.and_then(|f| f.n).or(pa.and_then(|p| p.n)), "n")?,
        k: layer.pick(fa.and_then(|f| f.k), "k")?,
        j: layer.pick(fa.and_then(|f| f.j).or(pa.and_then(|p| p.j)), "j")?,
        n_min: layer.pick(pa.and_then(|p| p.n_min), "n-min")?,
        n_max: layer.pick(pa.and_then(|p| p.n_max), "n-max")?,
        points: layer.pick(fa.and_then(|f| f.points).or(pa.and_then(|p| p.points)), "points")?,
        tol,
        signs: layer.pick(pa.and_then(|p| p.signs.clone()), "signs")?.unwrap_or_else(|| "all".into()),
        seed: layer.pick(pa.and_then(|p| p.seed), "seed")?,
        budget: layer.pick(common.budget, "budget")?.unwrap_or(DEFAULT_EVAL_BUDGET),
        ceiling: layer.pick(pa.and_then(|p| p.ceiling), "ceiling")?.unwrap_or(DEFAULT_EXHAUSTIVE_CEILING),
        out: layer.pick(common.out.clone(), "out")?,
        format,
        sequences: layer.pick(pa.and_then(|p| p.sequences.clone()), "sequences")?,
    })
}

fn parse_field<T: std::str::FromStr>(parts: &[&str], idx: usize, selector: &str) -> Result<T> {
    parts
        .get(idx)
        .and_then(|s| s.parse::<T>().ok())
        .ok_or_else(|| Error::Parse(format!("malformed selector `{selector}`")))
}

/// Builds the function named by a selector.
pub fn resolve_selector(selector: &str) -> Result<PiecewiseFn> {
    if let Some(path) = selector.strip_prefix('@') {
        return PiecewiseFn::from_json(&fs::read_to_string(path)?);
    }
    let parts: Vec<&str> = selector.split(':').collect();
    let arity = |want: usize| {
        if parts.len() == want {
            Ok(())
        } else {
            Err(Error::Parse(format!("selector `{selector}` needs {want} fields")))
        }
    };
    let params = |idx| ConstructionParams::new(parse_field(&parts, idx, selector)?);
    match parts[0] {
        "f" => {
            arity(4)?;
            make_f_ki(&params(1)?, parse_field(&parts, 2, selector)?, parse_field(&parts, 3, selector)?)
        }
        "F" => {
            arity(3)?;
            make_F_k(&params(1)?, parse_field(&parts, 2, selector)?)
        }
        "g" => {
            arity(3)?;
            let p = params(1)?;
            make_g(&p, parse_field(&parts, 2, selector)?, &make_sign_matrix(&p))
        }
        "G" => {
            arity(3)?;
            let p = params(1)?;
            make_G_m(&p, parse_field(&parts, 2, selector)?, &make_sign_matrix(&p))
        }
        "sum" => {
            arity(3)?;
            let p = params(1)?;
            let signs = parts[2]
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(Error::Parse(format!("sign string `{}` may only contain + and -", parts[2]))),
                })
                .collect::<Result<Vec<i8>>>()?;
            combine_blockwise(&p, &SignVector::new(signs)?, &make_sign_matrix(&p))
        }
        other => Err(Error::Parse(format!("unknown selector kind `{other}` in `{selector}`"))),
    }
}

fn selector_of(cfg: &RunConfig) -> Result<String> {
    if let Some(s) = &cfg.selector {
        return Ok(s.clone());
    }
    match (cfg.n, cfg.k, cfg.j) {
        (Some(n), Some(k), None) => Ok(format!("F:{n}:{k}")),
        (Some(n), None, Some(j)) => Ok(format!("g:{n}:{j}")),
        _ => Err(usage("give a selector, or --n with exactly one of --k / --j")),
    }
}

#[derive(Serialize)]
struct NormReport {
    selector: String,
    enclosure: RatInterval,
    decimal: String,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    config: serde_json::Value,
}

#[derive(Serialize)]
struct RatioReport {
    rows: Vec<RatioRow>,
    verdict: Verdict,
    config: serde_json::Value,
}

fn write_output(cfg: &RunConfig, body: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().write_all(body)?,
    }
    Ok(())
}

fn emit_probe(cfg: &RunConfig, mut report: ProbeReport) -> Result<i32> {
    report.config = Some(cfg.echo());
    let body = match cfg.format {
        Format::Json => (report.to_json()? + "\n").into_bytes(),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            buf
        }
    };
    write_output(cfg, &body)?;
    Ok(report.asserted_verdict().exit_code())
}

fn grid(points: usize) -> Vec<Rational> {
    let den = int(points as i64 + 1);
    (1..=points as i64).map(|i| int(i) / &den).collect()
}

fn run_norm(cfg: &RunConfig) -> Result<i32> {
    let selector = selector_of(cfg)?;
    let f = resolve_selector(&selector)?;
    let refine = Refinement::new(cfg.tol.clone())?.with_budget(cfg.budget);
    let (enclosure, verdict, detail) = match refine.weak_norm(&f) {
        Ok(v) => (v, Verdict::Pass, None),
        Err(Error::Inconclusive { what, best, evaluations }) => {
            (*best, Verdict::Inconclusive, Some(format!("{what}: budget exhausted after {evaluations} evaluations")))
        }
        Err(e) => return Err(e),
    };
    let report = NormReport {
        selector,
        decimal: enclosure.decimal(REPORT_DIGITS),
        enclosure,
        verdict,
        detail,
        config: cfg.echo(),
    };
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => format!(
            "selector,lo,hi,decimal,verdict\n{},{},{},\"{}\",{}\n",
            report.selector,
            fmt_pq(report.enclosure.lo()),
            fmt_pq(report.enclosure.hi()),
            report.decimal,
            report.verdict
        ),
    };
    write_output(cfg, body.as_bytes())?;
    Ok(verdict.exit_code())
}

fn run_rearrange(cfg: &RunConfig) -> Result<i32> {
    let f = resolve_selector(&selector_of(cfg)?)?;
    let refine = Refinement::new(cfg.tol.clone())?.with_budget(cfg.budget);
    let mut verdict = Verdict::Pass;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "lo", "hi", "decimal", "verdict"])?;
    for t in grid(cfg.points.unwrap_or(100)) {
        let (iv, v) = match refine.rearrangement_at(&f, &t) {
            Ok(iv) => (iv, Verdict::Pass),
            Err(Error::Inconclusive { best, .. }) => (*best, Verdict::Inconclusive),
            Err(e) => return Err(e),
        };
        verdict = verdict.and(v);
        w.write_record([fmt_pq(&t), fmt_pq(iv.lo()), fmt_pq(iv.hi()), iv.decimal(REPORT_DIGITS), v.to_string()])?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    write_output(cfg, &body)?;
    Ok(verdict.exit_code())
}

fn run_type_ratio(cfg: &RunConfig) -> Result<i32> {
    let (lo, hi) = match (cfg.n_min, cfg.n_max, cfg.n) {
        (Some(a), Some(b), _) => (a, b),
        (None, None, Some(n)) => (n, n),
        _ => return Err(usage("give --n-min and --n-max, or --n")),
    };
    if lo > hi {
        return Err(usage("--n-min must not exceed --n-max"));
    }
    let budget = cfg.budget()?;
    let mut rows = Vec::new();
    for n in lo..=hi {
        let start = Instant::now();
        rows.push(type1_ratio(&ConstructionParams::new(n)?, &budget)?);
        eprintln!("type-ratio n = {n}: {:.2?}", start.elapsed());
    }
    let verdict = Verdict::all(rows.iter().map(|r| r.verdict));
    let body = match cfg.format {
        Format::Json => {
            (serde_json::to_string_pretty(&RatioReport { rows, verdict, config: cfg.echo() })? + "\n").into_bytes()
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_ratio_csv(&rows, &mut buf)?;
            buf
        }
    };
    write_output(cfg, &body)?;
    Ok(verdict.exit_code())
}

fn run_discrete(cfg: &RunConfig) -> Result<i32> {
    let p = cfg.params()?;
    if let Some(dir) = &cfg.sequences {
        fs::create_dir_all(dir)?;
        for (j, x) in discrete_family(&p, DEFAULT_MAX_LEN)?.iter().enumerate() {
            x.write_csv(fs::File::create(dir.join(format!("x{}.csv", j + 1)))?)?;
        }
    }
    emit_probe(cfg, verify_discrete_lemma(&p, DEFAULT_MAX_LEN)?)
}

/// Runs one parsed command and returns its exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let config = cli.config.as_deref();
    let start = Instant::now();
    let code = match &cli.command {
        Command::Norm(a) => run_norm(&resolve("norm", config, Some(a), None)?),
        Command::Rearrange(a) => run_rearrange(&resolve("rearrange", config, Some(a), None)?),
        Command::Export(a) => {
            let cfg = resolve("export", config, Some(a), None)?;
            let f = resolve_selector(&selector_of(&cfg)?)?;
            write_output(&cfg, (f.to_json()? + "\n").as_bytes())?;
            Ok(0)
        }
        Command::VerifyLemma(a) => {
            let cfg = resolve("verify-lemma", config, None, Some(a))?;
            emit_probe(&cfg, verify_lemma(&cfg.params()?, &cfg.budget()?)?)
        }
        Command::UnitNorms(a) => {
            let cfg = resolve("unit-norms", config, None, Some(a))?;
            emit_probe(&cfg, verify_unit_norms(&cfg.params()?, &cfg.budget()?)?)
        }
        Command::Gstar(a) => {
            let cfg = resolve("gstar", config, None, Some(a))?;
            let points = grid(cfg.points.unwrap_or(50));
            emit_probe(&cfg, verify_gstar(&cfg.params()?, cfg.j.unwrap_or(1), &points, &cfg.budget()?)?)
        }
        Command::TypeRatio(a) => run_type_ratio(&resolve("type-ratio", config, None, Some(a))?),
        Command::Discrete(a) => run_discrete(&resolve("discrete", config, None, Some(a))?),
    };
    eprintln!("elapsed {:.2?}", start.elapsed());
    code
}

/// Parses `args`, runs the command and maps every outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_inconclusive() {
                Verdict::Inconclusive.exit_code()
            } else {
                EXIT_USAGE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn signs_and_config_parsing() {
        assert_eq!(parse_signs("all", 0).unwrap(), SignMode::Exhaustive);
        assert_eq!(parse_signs("sample:64", 7).unwrap(), SignMode::Sample { count: 64, seed: 7 });
        assert!(parse_signs("sample:0", 7).is_err());
        assert!(parse_signs("some", 7).is_err());
        let cfg = parse_config("# comment\nn = 10\ntol=1e-4  # trailing\nn_min = 4\n").unwrap();
        assert_eq!(cfg.get("n").map(String::as_str), Some("10"));
        assert_eq!(cfg.get("n-min").map(String::as_str), Some("4"));
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn selectors() {
        let f = resolve_selector("f:3:1:2").unwrap();
        assert_eq!(f.eval_exact(&rat(1, 2)).unwrap(), rat(6, 5));
        assert_eq!(resolve_selector("F:3:1").unwrap().eval_exact(&rat(1, 2)).unwrap(), rat(16, 5));
        assert_eq!(resolve_selector("g:3:1").unwrap().support_hull().unwrap().0, rat(1, 81));
        assert!(resolve_selector("G:3:4").is_ok());
        assert!(resolve_selector("sum:3:+-").is_ok());
        for bad in ["h:3:1", "F:3", "g:x:1", "sum:3:+x", "f:3:1:9"] {
            assert!(resolve_selector(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "n = 4\ntol = 1e-3\nsigns = sample:3\nseed = 9\n").unwrap();
        let cli =
            Cli::try_parse_from(["weaktype", "--config", path.to_str().unwrap(), "verify-lemma", "--n", "3"]).unwrap();
        let Command::VerifyLemma(a) = &cli.command else { panic!("wrong command") };
        let cfg = resolve("verify-lemma", cli.config.as_deref(), None, Some(a)).unwrap();
        assert_eq!(cfg.n, Some(3));
        assert_eq!(cfg.tol, rat(1, 1000));
        assert_eq!(cfg.sign_mode().unwrap(), SignMode::Sample { count: 3, seed: 9 });
        fs::write(&path, "bogus = 1\n").unwrap();
        assert!(resolve("verify-lemma", Some(&path), None, Some(a)).is_err());
    }

    #[test]
    fn usage_errors_exit_3() {
        assert_eq!(run(["weaktype", "norm"]), EXIT_USAGE);
        assert_eq!(run(["weaktype", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["weaktype", "verify-lemma", "--n", "3", "--signs", "bad"]), EXIT_USAGE);
    }
}
