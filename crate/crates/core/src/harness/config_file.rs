use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Algorithm, AlgorithmConfig};

/// Experiment settings read from a TOML file with flat sections:
///
/// ```toml
/// [experiment]
/// benchmark = "ackley-10"
/// algorithm = "asgf"
/// trials = 20
/// seed = 0
/// workers = 4
///
/// [asgf]
/// sigma0 = 6.5
/// eps_m = 0.05
/// ```
///
/// Keys in `[asgf]`, `[es]` and `[dgs]` are the fields of the matching config
/// struct. Only the section for the chosen algorithm is applied.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub experiment: ExperimentSection,
    pub asgf: Option<toml::Table>,
    pub es: Option<toml::Table>,
    pub dgs: Option<toml::Table>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub benchmark: Option<String>,
    pub algorithm: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub output: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Sets one key of an algorithm section from a `key=value` string, where
    /// the value is written as in TOML. Later assignments win.
    pub fn set(&mut self, algorithm: Algorithm, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment:?}")))?;
        let parsed: toml::Table = format!("{} = {}", key.trim(), value.trim())
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(format!("{assignment:?}: {}", e.message())))?;
        let section = match algorithm {
            Algorithm::Asgf => &mut self.asgf,
            Algorithm::Es => &mut self.es,
            Algorithm::Dgs => &mut self.dgs,
        };
        section.get_or_insert_with(Default::default).extend(parsed);
        Ok(())
    }

    /// Overwrites fields of `config` with the keys of its section.
    pub fn apply(&self, config: &mut AlgorithmConfig) -> Result<()> {
        match config {
            AlgorithmConfig::Asgf(c) => overlay(c, self.asgf.as_ref(), "asgf"),
            AlgorithmConfig::Es(c) => overlay(c, self.es.as_ref(), "es"),
            AlgorithmConfig::Dgs(c) => overlay(c, self.dgs.as_ref(), "dgs"),
        }
    }
}

/// Replaces the fields of `target` named in `table`, keeping the rest.
pub fn overlay<T: Serialize + DeserializeOwned>(target: &mut T, table: Option<&toml::Table>, section: &str) -> Result<()> {
    let Some(table) = table else { return Ok(()) };
    let mut merged = serde_json::to_value(&*target)?;
    let fields = merged
        .as_object_mut()
        .ok_or_else(|| Error::Config(format!("[{section}] does not map to a struct")))?;
    for (key, value) in table {
        fields.insert(key.clone(), serde_json::to_value(value)?);
    }
    *target = serde_json::from_value(merged).map_err(|e| Error::Config(format!("[{section}]: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::AsgfConfig;

    #[test]
    fn section_overrides_only_named_fields() {
        let file = ConfigFile::parse("[asgf]\nsigma0 = 2.5\nmax_iterations = 7\n[es]\nsigma = 9.0\n").unwrap();
        let mut c = AlgorithmConfig::Asgf(AsgfConfig::default());
        file.apply(&mut c).unwrap();
        let AlgorithmConfig::Asgf(c) = c else { unreachable!() };
        assert_eq!(c.sigma0, 2.5);
        assert_eq!(c.max_iterations, 7);
        assert_eq!(c.gamma_sigma, 0.9);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let file = ConfigFile::parse("[asgf]\nsigma_zero = 2.5\n").unwrap();
        let mut c = AlgorithmConfig::Asgf(AsgfConfig::default());
        assert!(matches!(file.apply(&mut c), Err(Error::Config(_))));
        assert!(ConfigFile::parse("[nelder_mead]\nx = 1\n").is_err());
        assert!(ConfigFile::parse("[experiment]\ntrails = 3\n").is_err());
    }

    #[test]
    fn assignments_override_file_values() {
        let mut file = ConfigFile::parse("[dgs]\nsigma = 3.0\npoint_count = 7\n").unwrap();
        file.set(Algorithm::Dgs, "sigma=0.5").unwrap();
        let mut c = AlgorithmConfig::Dgs(Default::default());
        file.apply(&mut c).unwrap();
        let AlgorithmConfig::Dgs(c) = c else { unreachable!() };
        assert_eq!((c.sigma, c.point_count), (0.5, 7));
        assert!(file.set(Algorithm::Dgs, "sigma").is_err());
    }

    #[test]
    fn experiment_section() {
        let file = ConfigFile::parse("[experiment]\nbenchmark = \"levy-5\"\ntrials = 3\n").unwrap();
        assert_eq!(file.experiment.benchmark.as_deref(), Some("levy-5"));
        assert_eq!(file.experiment.trials, Some(3));
        assert_eq!(file.experiment.workers, None);
    }
}
