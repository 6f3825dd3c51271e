//! Batch front end: configuration, check selection, report files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::verify::{check_info, run_check, CheckConfig, Report, CHECKS};
use crate::{ChaosError, Result};

/// Environment variable consulted for the seed when neither flag nor file sets it.
pub const SEED_ENV: &str = "CHAOSLAB_SEED";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

pub const CSV_HEADER: &str = "check_id,kind,value,target,tolerance,stderr,n_samples,seed,pass,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn file_name(self) -> &'static str {
        match self {
            Format::Csv => "report.csv",
            Format::Json => "report.json",
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub grid_cells: usize,
    pub degree_cap: usize,
    pub depths: Vec<u32>,
    pub instances: usize,
    /// Check ids, already expanded from `all`.
    pub checks: Vec<String>,
    pub out_dir: PathBuf,
    pub format: Format,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = CheckConfig::default();
        Self {
            seed: c.seed,
            samples: c.samples,
            grid_cells: c.grid_cells,
            degree_cap: c.degree_cap,
            depths: c.depths,
            instances: c.instances,
            checks: Vec::new(),
            out_dir: PathBuf::from("."),
            format: Format::Csv,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn check_config(&self) -> CheckConfig {
        CheckConfig {
            seed: self.seed,
            samples: self.samples,
            grid_cells: self.grid_cells,
            degree_cap: self.degree_cap,
            depths: self.depths.clone(),
            instances: self.instances,
        }
    }

    pub fn report_path(&self) -> PathBuf {
        self.out_dir.join(self.format.file_name())
    }

    fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(ChaosError::Config { key: key.into(), msg });
        if self.samples < 100 {
            return bad("samples", format!("{} < 100", self.samples));
        }
        if !self.grid_cells.is_power_of_two() || self.grid_cells > 64 {
            return bad("grid_cells", format!("{} is not a power of two ≤ 64", self.grid_cells));
        }
        if self.degree_cap == 0 || self.degree_cap > 8 {
            return bad("degree_cap", format!("{} is not in 1..=8", self.degree_cap));
        }
        if self.depths.is_empty() || self.depths.iter().any(|&d| d > 10) {
            return bad("depths", format!("{:?} must be a nonempty list of depths ≤ 10", self.depths));
        }
        if self.instances == 0 {
            return bad("instances", "must be positive".into());
        }
        for id in &self.checks {
            if check_info(id).is_none() {
                return Err(ChaosError::UnknownCheck(id.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "chaoslab", version, about = "Exact Poisson chaos calculus and its verification catalogue")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    /// Defaults to `check` (with the ids of `--checks` or the config file).
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub grid_cells: Option<usize>,
    #[arg(long, global = true)]
    pub degree_cap: Option<usize>,
    /// Comma-separated dyadic depths, e.g. `1,2,3`.
    #[arg(long, global = true)]
    pub depths: Option<String>,
    /// Comma-separated check ids (or `all`); positional ids of `check` take precedence.
    #[arg(long, global = true, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    /// Random instances per exact identity.
    #[arg(long, global = true)]
    pub instances: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record wall-clock milliseconds (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the named checks (`all` for the whole catalogue).
    Check { ids: Vec<String> },
    /// Print the catalogue.
    List,
    /// Run the dyadic approximation check and print its gap sequence.
    Theorem1,
    /// Summarize an existing report file in the output directory.
    Report,
}

const CONFIG_KEYS: [&str; 9] =
    ["seed", "samples", "grid_cells", "degree_cap", "depths", "instances", "checks", "out_dir", "format"];

/// Parse a flat `key = value` file (`#` comments, blank lines allowed).
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ChaosError::Config {
            key: format!("line {}", n + 1),
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) {
            return Err(ChaosError::Config { key: k.into(), msg: "unknown key".into() });
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| ChaosError::Config { key: key.into(), msg: format!("invalid value `{v}`") })
}

fn parse_depths(key: &str, v: &str) -> Result<Vec<u32>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_value(key, s.trim())).collect()
}

fn expand_checks(ids: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for id in ids {
        if id == "all" {
            out.extend(CHECKS.iter().map(|c| c.id.to_string()));
        } else {
            out.push(id.clone());
        }
    }
    out
}

/// Resolve flags over the optional config file over `CHAOSLAB_SEED` over defaults.
pub fn resolve(cli: &Cli, seed_env: Option<&str>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(s) = seed_env {
        cfg.seed = parse_value(SEED_ENV, s.trim())?;
    }
    if let Some(path) = &cli.opts.config {
        let text = std::fs::read_to_string(path).map_err(|e| ChaosError::Io { path: path.to_path_buf(), source: e })?;
        for (k, v) in parse_config_file(&text)? {
            match k.as_str() {
                "seed" => cfg.seed = parse_value(&k, &v)?,
                "samples" => cfg.samples = parse_value(&k, &v)?,
                "grid_cells" => cfg.grid_cells = parse_value(&k, &v)?,
                "degree_cap" => cfg.degree_cap = parse_value(&k, &v)?,
                "depths" => cfg.depths = parse_depths(&k, &v)?,
                "instances" => cfg.instances = parse_value(&k, &v)?,
                "checks" => cfg.checks = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
                "out_dir" => cfg.out_dir = PathBuf::from(v),
                "format" => {
                    cfg.format = Format::from_str(&v, true).map_err(|m| ChaosError::Config { key: k.clone(), msg: m })?
                }
                _ => unreachable!("keys are validated"),
            }
        }
    }
    let o = &cli.opts;
    cfg.seed = o.seed.unwrap_or(cfg.seed);
    cfg.samples = o.samples.unwrap_or(cfg.samples);
    cfg.grid_cells = o.grid_cells.unwrap_or(cfg.grid_cells);
    cfg.degree_cap = o.degree_cap.unwrap_or(cfg.degree_cap);
    if let Some(d) = &o.depths {
        cfg.depths = parse_depths("depths", d)?;
    }
    cfg.instances = o.instances.unwrap_or(cfg.instances);
    if let Some(out) = &o.out {
        cfg.out_dir = out.clone();
    }
    cfg.format = o.format.unwrap_or(cfg.format);
    cfg.timings = o.timings;
    if let Some(c) = &o.checks {
        cfg.checks = c.clone();
    }
    match &cli.command {
        Some(Command::Check { ids }) if !ids.is_empty() => cfg.checks = ids.clone(),
        Some(Command::Theorem1) => cfg.checks = vec!["theorem1".into()],
        _ => {}
    }
    cfg.checks = expand_checks(&cfg.checks);
    cfg.validate()?;
    Ok(cfg)
}

/// Parse argv (including the program name) and an optional seed fallback.
pub fn parse_config(argv: &[String], seed_env: Option<&str>) -> std::result::Result<(Command, RunConfig), ParseError> {
    let cli = Cli::try_parse_from(argv).map_err(ParseError::Clap)?;
    let cfg = resolve(&cli, seed_env).map_err(ParseError::Config)?;
    Ok((cli.command.unwrap_or(Command::Check { ids: Vec::new() }), cfg))
}

#[derive(Debug)]
pub enum ParseError {
    Clap(clap::Error),
    Config(ChaosError),
}

/// The catalogue as text, one `id → statement` line per check.
pub fn list_checks() -> String {
    CHECKS.iter().fold(String::new(), |mut s, c| {
        let _ = writeln!(s, "{} → {}", c.id, c.statement);
        s
    })
}

fn csv_float(x: f64) -> String {
    format!("{x:e}")
}

/// One CSV line per report under the fixed header.
pub fn to_csv(reports: &[Report]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.check_id,
            r.kind.as_str(),
            csv_float(r.value),
            csv_float(r.target),
            csv_float(r.tolerance),
            r.stderr.map(csv_float).unwrap_or_default(),
            r.n_samples,
            r.seed,
            r.pass,
            r.wall_ms.map(|w| w.to_string()).unwrap_or_default()
        );
    }
    s
}

pub fn to_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

/// Run the configured checks in order.
pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Report>> {
    let check_cfg = cfg.check_config();
    cfg.checks
        .iter()
        .map(|id| {
            let start = Instant::now();
            let mut r = run_check(id, &check_cfg)?;
            if cfg.timings {
                r.wall_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(r)
        })
        .collect()
}

fn write_report(cfg: &RunConfig, reports: &[Report]) -> Result<PathBuf> {
    let path = cfg.report_path();
    let io = |e| ChaosError::Io { path: path.to_path_buf(), source: e };
    std::fs::create_dir_all(&cfg.out_dir).map_err(io)?;
    let body = match cfg.format {
        Format::Csv => to_csv(reports),
        Format::Json => to_json(reports),
    };
    std::fs::write(&path, body).map_err(io)?;
    Ok(path)
}

fn summary_line(r: &Report) -> String {
    format!(
        "[{}] {:<22} {:<14} value={:e} target={:e} tol={:e}",
        if r.pass { "PASS" } else { "FAIL" },
        r.check_id,
        r.kind.as_str(),
        r.value,
        r.target,
        r.tolerance
    )
}

/// Execute the configured checks, write the report file and return the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let reports = match run_checks(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    for r in &reports {
        println!("{}", summary_line(r));
    }
    match write_report(cfg, &reports) {
        Ok(path) => eprintln!("wrote {}", path.display()),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    }
    if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Pass/fail counts of an existing report file (CSV or JSON by extension).
pub fn summarize_report(path: &Path) -> Result<(usize, usize)> {
    let text = std::fs::read_to_string(path).map_err(|e| ChaosError::Io { path: path.to_path_buf(), source: e })?;
    let bad = |msg: &str| ChaosError::Config { key: path.display().to_string(), msg: msg.into() };
    let flags: Vec<bool> = if path.extension().is_some_and(|e| e == "json") {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
        let rows = v.as_array().ok_or_else(|| bad("expected an array of reports"))?;
        rows.iter().map(|r| r["pass"].as_bool().ok_or_else(|| bad("row without `pass`"))).collect::<Result<_>>()?
    } else {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(bad("unexpected CSV header"));
        }
        lines
            .map(|l| match l.split(',').nth(8) {
                Some("true") => Ok(true),
                Some("false") => Ok(false),
                _ => Err(bad("malformed row")),
            })
            .collect::<Result<_>>()?
    };
    let passed = flags.iter().filter(|&&p| p).count();
    Ok((passed, flags.len() - passed))
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with(argv: &[String], seed_env: Option<&str>) -> i32 {
    let (command, cfg) = match parse_config(argv, seed_env) {
        Ok(x) => x,
        Err(ParseError::Clap(e)) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
        Err(ParseError::Config(e)) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    match command {
        Command::List => {
            print!("{}", list_checks());
            EXIT_PASS
        }
        Command::Check { .. } => run(&cfg),
        Command::Theorem1 => {
            let code = run(&cfg);
            if let Ok(r) = run_check("theorem1", &cfg.check_config()) {
                for d in r.details.iter().filter(|d| d.name.starts_with("gap_depth_")) {
                    println!("{} = {:e}", d.name, d.value);
                }
            }
            code
        }
        Command::Report => match summarize_report(&cfg.report_path()) {
            Ok((passed, failed)) => {
                println!("{passed} passed, {failed} failed");
                if failed == 0 {
                    EXIT_PASS
                } else {
                    EXIT_FAIL
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_ERROR
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn flags_are_parsed() {
        let (cmd, cfg) = parse_config(&argv("chaoslab check isometry --seed 42 --samples 100000"), None).unwrap();
        assert_eq!(cmd, Command::Check { ids: vec!["isometry".into()] });
        assert_eq!((cfg.seed, cfg.samples), (42, 100_000));
        assert_eq!(cfg.checks, vec!["isometry"]);
        let (cmd, flag) = parse_config(&argv("chaoslab --seed 42 --samples 100000 --checks isometry"), None).unwrap();
        assert_eq!(cmd, Command::Check { ids: vec![] });
        assert_eq!(flag, cfg);
    }

    #[test]
    fn flag_beats_file_beats_env() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# comment\nsamples = 1000\nseed=3\n").unwrap();
        let p = path.display();
        let (_, cfg) = parse_config(&argv(&format!("chaoslab --config {p} --samples 5000 list")), Some("9")).unwrap();
        assert_eq!((cfg.samples, cfg.seed), (5000, 3));
        let (_, cfg) = parse_config(&argv("chaoslab list"), Some("9")).unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn invalid_values_name_the_key() {
        let err = parse_config(&argv("chaoslab --grid-cells 10 list"), None).unwrap_err();
        assert!(matches!(err, ParseError::Config(ChaosError::Config { ref key, .. }) if key == "grid_cells"));
        assert!(matches!(
            parse_config_file("bogus = 1"),
            Err(ChaosError::Config { ref key, .. }) if key == "bogus"
        ));
        assert!(matches!(parse_config(&argv("chaoslab --samples 10 list"), None), Err(ParseError::Config(_))));
        assert!(matches!(parse_config(&argv("chaoslab check nope"), None), Err(ParseError::Config(_))));
    }

    #[test]
    fn all_expands_to_catalogue() {
        let (_, cfg) = parse_config(&argv("chaoslab check all"), None).unwrap();
        assert_eq!(cfg.checks.len(), CHECKS.len());
    }

    #[test]
    fn list_covers_catalogue() {
        let text = list_checks();
        assert_eq!(text.lines().count(), CHECKS.len());
        assert!(text.contains("duality → "));
        assert!(text.contains("theorem1 → "));
    }

    #[test]
    fn empty_check_list_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let (_, cfg) = parse_config(&argv(&format!("chaoslab check --out {}", dir.path().display())), None).unwrap();
        assert_eq!(run(&cfg), EXIT_PASS);
        let text = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\n"));
        assert_eq!(summarize_report(&dir.path().join("report.csv")).unwrap(), (0, 0));
    }
}
