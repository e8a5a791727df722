//! The simulation config document.
//!
//! The document is TOML restricted to four sections of scalar keys. Every key
//! is optional; unknown sections or keys are rejected.
//!
//! ```toml
//! [experiment]
//! protocol = "measure_recreate"   # measure_recreate | zeno | erasure
//! redundancy = 100                # dots per logical qubit, >= 1
//! cycles = 100                    # refresh cycles per repetition, >= 0
//! repetitions = 1000              # independent repetitions, >= 1
//! seed = 0                        # root seed, >= 0 (--seed overrides)
//! output = "qdram.csv"            # CSV path (--out overrides)
//!
//! [initial_state]
//! p_up = 0.5                      # |a_up|^2 in [0, 1]
//! relative_phase = 0.0            # radians
//!
//! [noise]
//! model = "markovian"             # markovian | coherent_leakage | noiseless
//! t2 = 1e-6                       # seconds
//! t1 = 2e-6                       # seconds, defaults to 2 * t2; t2 <= 2 * t1
//! omega = 0.0                     # rad/s, coherent_leakage only
//!
//! [refresh]
//! period = 1e-7                   # seconds, defaults to t2 / 10
//! phase_policy = "uniform_random" # uniform_random | zero (measure_recreate)
//! ```

use std::fmt;
use std::path::PathBuf;

use qdram_core::channels::NoiseModel;
use qdram_core::measure::{PhasePolicy, RngSeed};
use qdram_core::memory::{ExperimentConfig, InitialState, RefreshPolicy};
use toml::{Table, Value};

pub const DEFAULT_T2: f64 = 1e-6;
pub const DEFAULT_REDUNDANCY: usize = 100;
pub const DEFAULT_CYCLES: u64 = 100;
pub const DEFAULT_REPETITIONS: u64 = 1000;
pub const DEFAULT_OUTPUT: &str = "qdram.csv";

const SCHEMA: &[(&str, &[&str])] = &[
    ("experiment", &["protocol", "redundancy", "cycles", "repetitions", "seed", "output"]),
    ("initial_state", &["p_up", "relative_phase"]),
    ("noise", &["model", "t1", "t2", "omega"]),
    ("refresh", &["period", "phase_policy"]),
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("{key}: {message}")]
    Validation { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Validation { key: key.into(), message: message.into() }
    }

    /// Dotted path of the offending key, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { key, .. } => Some(key),
            ConfigError::Parse(_) => None,
        }
    }
}

/// Refresh protocol names as they appear in the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    MeasureRecreate,
    Zeno,
    Erasure,
}

impl Protocol {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "measure_recreate" => Some(Protocol::MeasureRecreate),
            "zeno" => Some(Protocol::Zeno),
            "erasure" => Some(Protocol::Erasure),
            _ => None,
        }
    }
}

/// A validated `simulate` configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub experiment: ExperimentConfig,
    pub seed: RngSeed,
    pub output_path: PathBuf,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        parse_config("").expect("empty config is valid")
    }
}

fn suggestion(key: &str, candidates: impl Iterator<Item = String>) -> String {
    candidates
        .map(|c| (strsim::levenshtein(key, c.rsplit('.').next().unwrap_or(&c)), c))
        .filter(|(d, _)| *d <= 3)
        .min()
        .map(|(_, c)| format!("; did you mean `{c}`?"))
        .unwrap_or_default()
}

fn all_keys() -> impl Iterator<Item = String> {
    SCHEMA.iter().flat_map(|(s, keys)| keys.iter().map(move |k| format!("{s}.{k}")))
}

/// Rejects anything outside [`SCHEMA`].
fn check_keys(doc: &Table) -> Result<(), ConfigError> {
    for (name, value) in doc {
        let Some((_, keys)) = SCHEMA.iter().find(|(s, _)| s == name) else {
            let hint = match value {
                Value::Table(_) => suggestion(name, SCHEMA.iter().map(|(s, _)| s.to_string())),
                _ => suggestion(name, all_keys()),
            };
            return Err(ConfigError::invalid(name.as_str(), format!("unknown key{hint}")));
        };
        let Value::Table(section) = value else {
            return Err(ConfigError::invalid(name.as_str(), "expected a section"));
        };
        for key in section.keys() {
            if !keys.contains(&key.as_str()) {
                let hint = suggestion(key, keys.iter().map(|k| format!("{name}.{k}")));
                return Err(ConfigError::invalid(format!("{name}.{key}"), format!("unknown key{hint}")));
            }
        }
    }
    Ok(())
}

struct Doc<'a>(&'a Table);

impl Doc<'_> {
    fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.0.get(section).and_then(Value::as_table).and_then(|t| t.get(key))
    }

    fn float(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(Value::Float(f)) if f.is_finite() => Ok(Some(*f)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(ConfigError::invalid(format!("{section}.{key}"), "expected a finite number")),
        }
    }

    fn uint(&self, section: &str, key: &str, min: u64) -> Result<Option<u64>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 && *i as u64 >= min => Ok(Some(*i as u64)),
            Some(_) => Err(ConfigError::invalid(format!("{section}.{key}"), format!("expected an integer >= {min}"))),
        }
    }

    fn string(&self, section: &str, key: &str) -> Result<Option<&str>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(ConfigError::invalid(format!("{section}.{key}"), "expected a string")),
        }
    }
}

fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::invalid(key, format!("must be > 0, got {v}")))
    }
}

/// Parses and validates a config document. Missing keys take the documented
/// defaults.
pub fn parse_config(text: &str) -> Result<SimulateConfig, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    check_keys(&table)?;
    let doc = Doc(&table);

    let protocol = match doc.string("experiment", "protocol")? {
        None => Protocol::MeasureRecreate,
        Some(s) => Protocol::parse(s).ok_or_else(|| {
            ConfigError::invalid(
                "experiment.protocol",
                format!("unknown protocol `{s}` (expected measure_recreate, zeno or erasure)"),
            )
        })?,
    };
    let redundancy = doc.uint("experiment", "redundancy", 1)?.unwrap_or(DEFAULT_REDUNDANCY as u64);
    let redundancy =
        usize::try_from(redundancy).map_err(|_| ConfigError::invalid("experiment.redundancy", "too large"))?;
    let cycles = doc.uint("experiment", "cycles", 0)?.unwrap_or(DEFAULT_CYCLES);
    let repetitions = doc.uint("experiment", "repetitions", 1)?.unwrap_or(DEFAULT_REPETITIONS);
    let seed = doc.uint("experiment", "seed", 0)?.unwrap_or(0);
    let output_path = doc.string("experiment", "output")?.unwrap_or(DEFAULT_OUTPUT).into();

    let p_up = doc.float("initial_state", "p_up")?.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&p_up) {
        return Err(ConfigError::invalid("initial_state.p_up", format!("must be in [0, 1], got {p_up}")));
    }
    let relative_phase = doc.float("initial_state", "relative_phase")?.unwrap_or(0.0);

    let t2 = positive("noise.t2", doc.float("noise", "t2")?.unwrap_or(DEFAULT_T2))?;
    let t1 = match doc.float("noise", "t1")? {
        Some(t1) => positive("noise.t1", t1)?,
        None => 2.0 * t2,
    };
    let omega = doc.float("noise", "omega")?.unwrap_or(0.0);
    let noise = match doc.string("noise", "model")?.unwrap_or("markovian") {
        "markovian" => NoiseModel::markovian(t1, t2).map_err(|e| ConfigError::invalid("noise.t2", e.to_string()))?,
        "coherent_leakage" => {
            NoiseModel::coherent_leakage(omega).map_err(|e| ConfigError::invalid("noise.omega", e.to_string()))?
        }
        "noiseless" => NoiseModel::Noiseless,
        other => {
            return Err(ConfigError::invalid(
                "noise.model",
                format!("unknown model `{other}` (expected markovian, coherent_leakage or noiseless)"),
            ))
        }
    };

    let period = positive("refresh.period", doc.float("refresh", "period")?.unwrap_or(t2 / 10.0))?;
    let phase_policy = match doc.string("refresh", "phase_policy")?.unwrap_or("uniform_random") {
        "uniform_random" => PhasePolicy::UniformRandom,
        "zero" => PhasePolicy::Zero,
        other => {
            return Err(ConfigError::invalid(
                "refresh.phase_policy",
                format!("unknown policy `{other}` (expected uniform_random or zero)"),
            ))
        }
    };
    let policy = match protocol {
        Protocol::MeasureRecreate => RefreshPolicy::MeasureRecreate { period, phase_policy },
        Protocol::Zeno => RefreshPolicy::Zeno { interval: period },
        Protocol::Erasure => RefreshPolicy::Erasure { period },
    };

    Ok(SimulateConfig {
        experiment: ExperimentConfig {
            policy,
            redundancy,
            cycles,
            repetitions,
            noise,
            initial: InitialState { p_up, relative_phase },
        },
        seed: RngSeed(seed),
        output_path,
    })
}

/// Renders the effective configuration, defaults included, in the same
/// document format. `{:?}` on f64 is the shortest exact round-trip form.
impl fmt::Display for SimulateConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.experiment;
        writeln!(f, "[experiment]")?;
        writeln!(f, "protocol = \"{}\"", e.policy.name())?;
        writeln!(f, "redundancy = {}", e.redundancy)?;
        writeln!(f, "cycles = {}", e.cycles)?;
        writeln!(f, "repetitions = {}", e.repetitions)?;
        writeln!(f, "seed = {}", self.seed.0)?;
        writeln!(f, "output = {}", Value::String(self.output_path.display().to_string()))?;
        writeln!(f)?;
        writeln!(f, "[initial_state]")?;
        writeln!(f, "p_up = {:?}", e.initial.p_up)?;
        writeln!(f, "relative_phase = {:?}", e.initial.relative_phase)?;
        writeln!(f)?;
        writeln!(f, "[noise]")?;
        match e.noise {
            NoiseModel::Markovian { t1, t2 } => {
                writeln!(f, "model = \"markovian\"")?;
                writeln!(f, "t1 = {t1:?}")?;
                writeln!(f, "t2 = {t2:?}")?;
            }
            NoiseModel::CoherentLeakage { omega } => {
                writeln!(f, "model = \"coherent_leakage\"")?;
                writeln!(f, "omega = {omega:?}")?;
            }
            NoiseModel::Noiseless => writeln!(f, "model = \"noiseless\"")?,
        }
        writeln!(f)?;
        writeln!(f, "[refresh]")?;
        writeln!(f, "period = {:?}", e.policy.period())?;
        if let RefreshPolicy::MeasureRecreate { phase_policy, .. } = e.policy {
            let name = match phase_policy {
                PhasePolicy::Zero => "zero",
                PhasePolicy::UniformRandom => "uniform_random",
            };
            writeln!(f, "phase_policy = \"{name}\"")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = parse_config("").unwrap();
        let e = cfg.experiment;
        assert_eq!(e.redundancy, 100);
        assert_eq!(e.cycles, 100);
        assert_eq!(e.repetitions, 1000);
        assert_eq!(e.noise, NoiseModel::Markovian { t1: 2e-6, t2: 1e-6 });
        assert_eq!(e.policy, RefreshPolicy::MeasureRecreate { period: 1e-7, phase_policy: PhasePolicy::UniformRandom });
        assert_eq!(e.initial, InitialState { p_up: 0.5, relative_phase: 0.0 });
        assert_eq!(cfg.seed, RngSeed(0));
        assert_eq!(cfg.output_path, PathBuf::from("qdram.csv"));
    }

    #[test]
    fn zero_redundancy_is_rejected() {
        let err = parse_config("[experiment]\nredundancy = 0\n").unwrap_err();
        assert_eq!(err.key(), Some("experiment.redundancy"));
        assert!(err.to_string().contains("redundancy"));
    }

    #[test]
    fn misspelled_key_gets_a_suggestion() {
        let err = parse_config("[experiment]\nredundency = 3\n").unwrap_err();
        assert_eq!(err.key(), Some("experiment.redundency"));
        assert!(err.to_string().contains("did you mean `experiment.redundancy`"), "{err}");

        let err = parse_config("redundency = 3\n").unwrap_err();
        assert!(err.to_string().contains("experiment.redundancy"), "{err}");

        let err = parse_config("[noize]\nt2 = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("did you mean `noise`"), "{err}");

        let err = parse_config("[experiment]\nwhatever = 1\n").unwrap_err();
        assert!(!err.to_string().contains("did you mean"));
    }

    #[test]
    fn validation_names_the_key() {
        let cases = [
            ("[experiment]\nrepetitions = 0", "experiment.repetitions"),
            ("[experiment]\ncycles = -1", "experiment.cycles"),
            ("[experiment]\nprotocol = \"magic\"", "experiment.protocol"),
            ("[initial_state]\np_up = 1.5", "initial_state.p_up"),
            ("[initial_state]\np_up = \"half\"", "initial_state.p_up"),
            ("[noise]\nt2 = -1.0", "noise.t2"),
            ("[noise]\nt1 = 1.0\nt2 = 3.0", "noise.t2"),
            ("[noise]\nmodel = \"coherent_leakage\"\nomega = -2.0", "noise.omega"),
            ("[noise]\nmodel = \"bath\"", "noise.model"),
            ("[refresh]\nperiod = 0", "refresh.period"),
            ("[refresh]\nphase_policy = \"random\"", "refresh.phase_policy"),
            ("experiment = 3", "experiment"),
        ];
        for (text, key) in cases {
            let err = parse_config(text).unwrap_err();
            assert_eq!(err.key(), Some(key), "{text}: {err}");
        }
        assert!(matches!(parse_config("[experiment"), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn full_document() {
        let text = r#"
            [experiment]
            protocol = "zeno"
            redundancy = 7
            cycles = 3
            repetitions = 2
            seed = 99
            output = "out/z.csv"

            [initial_state]
            p_up = 1
            relative_phase = 0.25

            [noise]
            model = "coherent_leakage"
            omega = 1e5

            [refresh]
            period = 2e-7
        "#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.experiment.policy, RefreshPolicy::Zeno { interval: 2e-7 });
        assert_eq!(cfg.experiment.noise, NoiseModel::CoherentLeakage { omega: 1e5 });
        assert_eq!(cfg.experiment.initial.p_up, 1.0);
        assert_eq!(cfg.seed, RngSeed(99));
        assert_eq!(cfg.output_path, PathBuf::from("out/z.csv"));
    }

    #[test]
    fn rendered_config_parses_back() {
        for text in [
            "",
            "[experiment]\nprotocol = \"erasure\"\n[noise]\nmodel = \"noiseless\"\n",
            "[noise]\nmodel = \"coherent_leakage\"\nomega = 0.1\n[refresh]\nperiod = 0.3\n[initial_state]\nrelative_phase = 1.2345678901234567\n",
            "[refresh]\nphase_policy = \"zero\"\n[experiment]\noutput = \"a \\\"b\\\".csv\"\n",
        ] {
            let cfg = parse_config(text).unwrap();
            assert_eq!(parse_config(&cfg.to_string()).unwrap(), cfg, "{cfg}");
        }
    }
}
