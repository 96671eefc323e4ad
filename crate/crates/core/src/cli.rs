//! Batch front end for the `qmac` binary.
//!
//! A run reads one JSON configuration, dispatches to the library and writes a
//! single JSON or CSV artifact. Exit status is 0 on success, 1 for invalid
//! input and 2 for computation errors (or failed checks).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::coding::{
    error_probability, lexicographic_strings, random_code_average, size_from_rate, Codebook, CodebookSpec,
    RandomCodePlan, DEFAULT_DELTA, DEFAULT_DIM_CAP,
};
use crate::converse::{codebook_entropies, converse_bounds};
use crate::ensemble::validate_ensemble;
use crate::entropy::{conditional_entropies, ssa_witness_check, ENTROPY_TOL};
use crate::error::{Error, Result};
use crate::output::{canonical_json, csv_table, format_f64, write_atomic};
use crate::region::{contains, pentagon, region_union, RatePair, SamplerPlan};
use crate::superdense::{
    alice_corner, check_bounds, pauli_ensemble, permutation_ensemble, superdense_ensemble, SchmidtState,
    UnitaryEnsemble,
};
use crate::SignalEnsemble;

/// Environment variable that overrides the Hilbert-space dimension cap.
pub const DIM_CAP_ENV: &str = "QMAC_DIM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Entropy,
    Region,
    Simulate,
    Superdense,
    Converse,
    Check,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Entropy => "entropy",
            Command::Region => "region",
            Command::Simulate => "simulate",
            Command::Superdense => "superdense",
            Command::Converse => "converse",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qmac", version, about = "Two-sender quantum multiple-access channel toolkit")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (written atomically). Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for region sampling and Monte Carlo trials.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Typicality parameter for the decoder (default 0.2).
    #[arg(long)]
    pub delta: Option<f64>,
}

/// An inline value or a path to a JSON file holding it.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Path(PathBuf),
    Inline(T),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum UnitarySpec {
    Identity,
    Pauli {
        #[serde(default = "yes")]
        shifts: bool,
        #[serde(default = "yes")]
        phases: bool,
    },
    Permutation {
        #[serde(default)]
        phases: bool,
    },
}

fn yes() -> bool {
    true
}

impl UnitarySpec {
    fn build(&self, n: usize) -> UnitaryEnsemble {
        match *self {
            UnitarySpec::Identity => UnitaryEnsemble::identity(n),
            UnitarySpec::Pauli { shifts, phases } => pauli_ensemble(n, shifts, phases),
            UnitarySpec::Permutation { phases } => permutation_ensemble(n, phases),
        }
    }
}

/// The configuration file as written, before paths are resolved.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<Command>,
    ensemble: Option<Source<SignalEnsemble>>,
    codebook: Option<Source<CodebookSpec>>,
    delta: Option<f64>,
    seed: Option<u64>,
    dimension_cap: Option<usize>,
    grid_step: Option<f64>,
    random_samples: Option<usize>,
    #[serde(rename = "length_L")]
    length: Option<usize>,
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "N")]
    n: Option<usize>,
    rate_alice: Option<f64>,
    rate_bob: Option<f64>,
    alice_strings: Option<Vec<Vec<String>>>,
    trials: Option<usize>,
    schmidt: Option<Vec<f64>>,
    schmidt_weights: Option<Vec<f64>>,
    alice_unitaries: Option<UnitarySpec>,
    bob_unitaries: Option<UnitarySpec>,
    output: Option<OutputSpec>,
}

/// A parsed configuration with every referenced file already loaded.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub ensemble: Option<SignalEnsemble>,
    pub codebook: Option<CodebookSpec>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub dimension_cap: Option<usize>,
    pub grid_step: Option<f64>,
    pub random_samples: Option<usize>,
    pub length: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub rate_alice: Option<f64>,
    pub rate_bob: Option<f64>,
    pub alice_strings: Option<Vec<Vec<String>>>,
    pub trials: Option<usize>,
    pub schmidt: Option<Vec<f64>>,
    pub schmidt_weights: Option<Vec<f64>>,
    pub alice_unitaries: Option<UnitarySpec>,
    pub bob_unitaries: Option<UnitarySpec>,
    pub output: OutputSpec,
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn resolve<T: for<'de> Deserialize<'de>>(source: Option<Source<T>>, base: &Path) -> Result<Option<T>> {
    match source {
        None => Ok(None),
        Some(Source::Inline(v)) => Ok(Some(v)),
        Some(Source::Path(p)) => load_json(&base.join(p)).map(Some),
    }
}

impl RunConfig {
    /// Parses a configuration document. Relative paths inside it are taken
    /// relative to `base`.
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(RunConfig {
            command: raw.command,
            ensemble: resolve(raw.ensemble, base)?,
            codebook: resolve(raw.codebook, base)?,
            delta: raw.delta,
            seed: raw.seed,
            dimension_cap: raw.dimension_cap,
            grid_step: raw.grid_step,
            random_samples: raw.random_samples,
            length: raw.length,
            m: raw.m,
            n: raw.n,
            rate_alice: raw.rate_alice,
            rate_bob: raw.rate_bob,
            alice_strings: raw.alice_strings,
            trials: raw.trials,
            schmidt: raw.schmidt,
            schmidt_weights: raw.schmidt_weights,
            alice_unitaries: raw.alice_unitaries,
            bob_unitaries: raw.bob_unitaries,
            output: raw.output.unwrap_or_default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        Self::from_json(&text, &base)
    }

    fn ensemble(&self) -> Result<&SignalEnsemble> {
        let e = self.ensemble.as_ref().ok_or_else(|| Error::Config("missing field `ensemble`".into()))?;
        e.ensure_valid()?;
        Ok(e)
    }

    fn codebook(&self, e: &SignalEnsemble) -> Result<Codebook> {
        let spec = self.codebook.as_ref().ok_or_else(|| Error::Config("missing field `codebook`".into()))?;
        Codebook::from_spec(spec, e)
    }
}

/// Settings given on the command line; they take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub dimension_cap: Option<usize>,
}

/// Result of one command: the JSON document, its CSV rendering and whether
/// every check passed.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub json: Value,
    pub csv: String,
    pub ok: bool,
}

impl Artifact {
    fn new(json: Value, csv: String) -> Self {
        Artifact { json, csv, ok: true }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => canonical_json(&self.json),
            Format::Csv => self.csv.clone(),
        }
    }
}

/// Dimension cap from the environment value, the config, or the default, in
/// that order.
pub fn dimension_cap(env: Option<&str>, config: Option<usize>) -> Result<usize> {
    let cap = match env {
        Some(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("{DIM_CAP_ENV}={v:?} is not a positive integer")))?,
        None => config.unwrap_or(DEFAULT_DIM_CAP),
    };
    if cap == 0 {
        return Err(Error::Config("dimension cap must be positive".into()));
    }
    Ok(cap)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

fn rate_json(r: &RatePair) -> Value {
    json!({"r1": r.r1, "r2": r.r2})
}

fn num(x: f64) -> String {
    format_f64(x)
}

/// Runs `command` against an already loaded configuration.
pub fn execute(command: Command, config: &RunConfig, overrides: &Overrides) -> Result<Artifact> {
    if let Some(c) = config.command {
        if c != command {
            return Err(Error::Config(format!(
                "config is for `{}` but `{}` was requested",
                c.name(),
                command.name()
            )));
        }
    }
    let seed = overrides.seed.or(config.seed);
    let delta = overrides.delta.or(config.delta).unwrap_or(DEFAULT_DELTA);
    let cap = match overrides.dimension_cap {
        Some(c) => c,
        None => dimension_cap(None, config.dimension_cap)?,
    };
    match command {
        Command::Entropy => entropy_command(config),
        Command::Region => region_command(config, seed),
        Command::Simulate => simulate_command(config, seed, delta, cap),
        Command::Superdense => superdense_command(config),
        Command::Converse => converse_command(config, cap),
        Command::Check => check_command(config, cap),
    }
}

fn entropy_command(config: &RunConfig) -> Result<Artifact> {
    let profile = conditional_entropies(config.ensemble()?)?;
    let csv = csv_table(
        &["h_joint", "h_cond_A", "h_cond_B"],
        &[vec![num(profile.h_joint), num(profile.h_cond_a), num(profile.h_cond_b)]],
    )?;
    Ok(Artifact::new(to_value(&profile), csv))
}

fn region_command(config: &RunConfig, seed: Option<u64>) -> Result<Artifact> {
    let e = config.ensemble()?;
    let random_samples = config.random_samples.unwrap_or(0);
    let plan = SamplerPlan {
        grid_step: config.grid_step,
        random_samples,
        seed: if random_samples > 0 { seed } else { None },
        extra: vec![(e.p.clone(), e.q.clone())],
    };
    if random_samples > 0 && seed.is_none() {
        return Err(Error::Config("random_samples needs a seed".into()));
    }
    let sample_count = plan.distributions(e.size_a(), e.size_b())?.len();
    let own = pentagon(&conditional_entropies(e)?)?;
    let union = region_union(e, &plan)?;
    let rows: Vec<Vec<String>> = union.vertices().iter().map(|v| vec![num(v.r1), num(v.r2)]).collect();
    let json = json!({
        "pentagon": own.vertices().iter().map(rate_json).collect::<Vec<_>>(),
        "vertices": union.vertices().iter().map(rate_json).collect::<Vec<_>>(),
        "area": union.area(),
        "sample_count": sample_count,
    });
    Ok(Artifact::new(json, csv_table(&["r1", "r2"], &rows)?))
}

fn simulate_command(config: &RunConfig, seed: Option<u64>, delta: f64, cap: usize) -> Result<Artifact> {
    let e = config.ensemble()?;
    if config.codebook.is_some() {
        let cb = config.codebook(e)?;
        let outcome = error_probability(e, &cb, delta, cap)?;
        let mut rows = Vec::new();
        for (a, row) in outcome.success.iter().enumerate() {
            for (b, s) in row.iter().enumerate() {
                rows.push(vec![a.to_string(), b.to_string(), num(*s)]);
            }
        }
        let mut json = to_value(&outcome);
        json["mode"] = json!("exact");
        json["delta"] = json!(delta);
        json["M"] = json!(cb.m());
        json["N"] = json!(cb.n());
        json["length_L"] = json!(cb.length());
        return Ok(Artifact::new(json, csv_table(&["alice_index", "bob_index", "success"], &rows)?));
    }

    let length = config
        .length
        .ok_or_else(|| Error::Config("simulate needs `codebook` or `length_L`".into()))?;
    let seed = seed.ok_or_else(|| Error::Config("random-code simulation needs a seed".into()))?;
    let trials = config.trials.ok_or_else(|| Error::Config("missing field `trials`".into()))?;
    let alice_strings = match &config.alice_strings {
        Some(strings) => strings
            .iter()
            .map(|s| s.iter().map(|l| e.letter_index(crate::Sender::A, l)).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?,
        None => {
            let m = match (config.m, config.rate_alice) {
                (Some(m), _) => m,
                (None, Some(r)) => size_from_rate(length, r),
                (None, None) => 1,
            };
            let strings = lexicographic_strings(e.size_a(), length, m);
            if strings.len() < m {
                return Err(Error::Config(format!(
                    "M = {m} exceeds the {} Alice strings of length {length}",
                    strings.len()
                )));
            }
            strings
        }
    };
    let n = match (config.n, config.rate_bob) {
        (Some(n), _) => n,
        (None, Some(r)) => size_from_rate(length, r),
        (None, None) => return Err(Error::Config("simulate needs `N` or `rate_bob`".into())),
    };
    let plan = RandomCodePlan {
        alice_strings,
        n,
        length,
        delta,
        trials,
        seed,
    };
    let avg = random_code_average(e, &plan, cap)?;
    let rows: Vec<Vec<String>> = avg
        .trials
        .iter()
        .enumerate()
        .map(|(t, p)| vec![t.to_string(), num(*p)])
        .collect();
    let alice_labels: Vec<Vec<String>> = plan
        .alice_strings
        .iter()
        .map(|s| s.iter().map(|&i| e.alphabet_a[i].clone()).collect())
        .collect();
    let mut json = to_value(&avg);
    json["mode"] = json!("random");
    json["delta"] = json!(delta);
    json["seed"] = json!(seed);
    json["M"] = json!(plan.alice_strings.len());
    json["N"] = json!(n);
    json["length_L"] = json!(length);
    json["alice_strings"] = json!(alice_labels);
    Ok(Artifact::new(json, csv_table(&["trial", "p_error"], &rows)?))
}

fn superdense_command(config: &RunConfig) -> Result<Artifact> {
    let state = match (&config.schmidt, &config.schmidt_weights) {
        (Some(_), Some(_)) => return Err(Error::Config("give `schmidt` or `schmidt_weights`, not both".into())),
        (Some(a), None) => SchmidtState::new(a.clone())?,
        (None, Some(w)) => SchmidtState::from_weights(w)?,
        (None, None) => return Err(Error::Config("superdense needs `schmidt` or `schmidt_weights`".into())),
    };
    let n = state.n();
    let full = UnitarySpec::Pauli {
        shifts: true,
        phases: true,
    };
    let ens_a = config.alice_unitaries.as_ref().unwrap_or(&full).build(n);
    let ens_b = config.bob_unitaries.as_ref().unwrap_or(&full).build(n);
    let report = check_bounds(&state, &ens_a, &ens_b)?;
    let region = pentagon(&conditional_entropies(&superdense_ensemble(&state, &ens_a, &ens_b)?)?)?;
    let corner = alice_corner(&state);
    let inside = contains(&region, corner, ENTROPY_TOL);
    let mut json = to_value(&report);
    json["alice_corner"] = rate_json(&corner);
    json["alice_corner_inside"] = json!(inside);
    json["n"] = json!(n);
    json["alice_ensemble_size"] = json!(ens_a.len());
    json["bob_ensemble_size"] = json!(ens_b.len());
    let p = &report.profile;
    let csv = csv_table(
        &[
            "h_joint",
            "h_cond_A",
            "h_cond_B",
            "entanglement_entropy",
            "sum_bound",
            "single_bound",
            "holds",
            "corner_r1",
            "corner_r2",
            "corner_inside",
        ],
        &[vec![
            num(p.h_joint),
            num(p.h_cond_a),
            num(p.h_cond_b),
            num(report.entanglement_entropy),
            num(report.sum_bound),
            num(report.single_bound),
            report.holds.to_string(),
            num(corner.r1),
            num(corner.r2),
            inside.to_string(),
        ]],
    )?;
    Ok(Artifact {
        json,
        csv,
        ok: report.holds,
    })
}

fn converse_command(config: &RunConfig, cap: usize) -> Result<Artifact> {
    let e = config.ensemble()?;
    let cb = config.codebook(e)?;
    let report = codebook_entropies(e, &cb, cap)?;
    let bounds = converse_bounds(&report, cb.length())?;
    let rows: Vec<Vec<String>> = report
        .per_position
        .iter()
        .enumerate()
        .map(|(k, p)| vec![k.to_string(), num(p.h_joint), num(p.h_cond_a), num(p.h_cond_b)])
        .collect();
    let json = json!({
        "report": to_value(&report),
        "bounds": to_value(&bounds),
        "inequalities_hold": report.inequalities_hold(ENTROPY_TOL),
    });
    Ok(Artifact {
        json,
        csv: csv_table(&["position", "h_joint", "h_cond_A", "h_cond_B"], &rows)?,
        ok: report.inequalities_hold(ENTROPY_TOL),
    })
}

fn check_command(config: &RunConfig, cap: usize) -> Result<Artifact> {
    let e = config
        .ensemble
        .as_ref()
        .ok_or_else(|| Error::Config("missing field `ensemble`".into()))?;
    let mut checks: Vec<(&str, bool, String)> = Vec::new();
    let problems = validate_ensemble(e);
    let valid = problems.is_empty();
    checks.push((
        "ensemble_valid",
        valid,
        problems.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
    ));
    if valid {
        let p = conditional_entropies(e)?;
        checks.push((
            "concavity_alice",
            p.h_cond_a <= p.h_joint + ENTROPY_TOL,
            format!("H_A = {} <= H = {}", num(p.h_cond_a), num(p.h_joint)),
        ));
        checks.push((
            "concavity_bob",
            p.h_cond_b <= p.h_joint + ENTROPY_TOL,
            format!("H_B = {} <= H = {}", num(p.h_cond_b), num(p.h_joint)),
        ));
        checks.push((
            "conditional_sum",
            p.h_cond_a + p.h_cond_b >= p.h_joint - ENTROPY_TOL,
            format!("H_A + H_B = {} >= H = {}", num(p.h_cond_a + p.h_cond_b), num(p.h_joint)),
        ));
        let w = ssa_witness_check(e, cap)?;
        checks.push((
            "ssa_identities",
            w.identities_hold(ENTROPY_TOL),
            format!(
                "residuals {} {} {}",
                num(w.residual_rst),
                num(w.residual_rs),
                num(w.residual_rt)
            ),
        ));
        checks.push((
            "ssa_inequality",
            w.ssa_slack >= -ENTROPY_TOL,
            format!("slack {}", num(w.ssa_slack)),
        ));
        let region = pentagon(&p)?;
        let broken = region.violations();
        checks.push(("pentagon_convex", broken.is_empty(), broken.join("; ")));
    }
    let ok = checks.iter().all(|c| c.1);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|(name, pass, detail)| {
            vec![
                name.to_string(),
                if *pass { "pass" } else { "fail" }.to_string(),
                detail.clone(),
            ]
        })
        .collect();
    let json = json!({
        "checks": checks
            .iter()
            .map(|(name, pass, detail)| json!({"name": name, "passed": pass, "detail": detail}))
            .collect::<Vec<_>>(),
        "passed": ok,
    });
    Ok(Artifact {
        json,
        csv: csv_table(&["check", "result", "detail"], &rows)?,
        ok,
    })
}

fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        1
    } else {
        2
    }
}

fn run_args(args: Args) -> Result<i32> {
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if let Some(d) = args.delta {
        if d.is_nan() || d <= 0.0 {
            return Err(Error::Config(format!("--delta must be positive, got {d}")));
        }
    }
    let config = RunConfig::load(&args.config)?;
    let env = std::env::var(DIM_CAP_ENV).ok();
    let overrides = Overrides {
        seed: args.seed,
        delta: args.delta,
        dimension_cap: Some(dimension_cap(env.as_deref(), config.dimension_cap)?),
    };
    let format = args.format.or(config.output.format).unwrap_or_default();
    let out = args.out.clone().or_else(|| {
        config.output.path.as_ref().map(|p| match args.config.parent() {
            Some(dir) => dir.join(p),
            None => p.clone(),
        })
    });
    let artifact = execute(args.command, &config, &overrides)?;
    let text = artifact.render(format);
    match out {
        Some(path) => write_atomic(&path, text.as_bytes())?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    if !artifact.ok {
        eprintln!("qmac: one or more checks failed");
        return Ok(2);
    }
    Ok(0)
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_args(args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("qmac: error: {err}");
            exit_code(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::two_basis_qubit_example;

    fn config_with(e: SignalEnsemble) -> RunConfig {
        RunConfig {
            ensemble: Some(e),
            ..Default::default()
        }
    }

    #[test]
    fn entropy_json_has_exactly_three_keys() {
        let a = execute(Command::Entropy, &config_with(two_basis_qubit_example()), &Overrides::default()).unwrap();
        let obj = a.json.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["h_cond_A", "h_cond_B", "h_joint"]);
        assert!((obj["h_cond_A"].as_f64().unwrap() - 0.600876).abs() < 1e-6);
    }

    #[test]
    fn command_mismatch_is_input_error() {
        let mut c = config_with(two_basis_qubit_example());
        c.command = Some(Command::Region);
        let err = execute(Command::Entropy, &c, &Overrides::default()).unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = RunConfig::from_json(r#"{"ensembel": 1}"#, Path::new(".")).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn cap_precedence() {
        assert_eq!(dimension_cap(Some("64"), Some(8)).unwrap(), 64);
        assert_eq!(dimension_cap(None, Some(8)).unwrap(), 8);
        assert_eq!(dimension_cap(None, None).unwrap(), DEFAULT_DIM_CAP);
        assert!(dimension_cap(Some("x"), None).is_err());
        assert!(dimension_cap(Some("0"), None).is_err());
    }

    #[test]
    fn random_simulation_requires_seed() {
        let mut c = config_with(two_basis_qubit_example());
        c.length = Some(2);
        c.n = Some(2);
        c.trials = Some(3);
        let err = execute(Command::Simulate, &c, &Overrides::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let ok = execute(
            Command::Simulate,
            &c,
            &Overrides {
                seed: Some(5),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(ok.json["trials"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn cap_exceeded_is_computation_error() {
        let mut c = config_with(two_basis_qubit_example());
        c.length = Some(5);
        c.n = Some(2);
        c.trials = Some(1);
        c.seed = Some(1);
        c.dimension_cap = Some(16);
        let err = execute(Command::Simulate, &c, &Overrides::default()).unwrap_err();
        assert!(matches!(err, Error::DimensionCapExceeded { .. }));
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn unitary_spec_parses() {
        let u: UnitarySpec = serde_json::from_str(r#"{"family": "pauli", "phases": false}"#).unwrap();
        assert!(matches!(
            u,
            UnitarySpec::Pauli {
                shifts: true,
                phases: false
            }
        ));
        let id: UnitarySpec = serde_json::from_str(r#"{"family": "identity"}"#).unwrap();
        assert_eq!(id.build(3).len(), 1);
    }
}
