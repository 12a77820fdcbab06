//! Batch driver over the s-space catalog: pick instances and suites, evaluate
//! their claims with per-claim seeds and assemble a JSON report.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sspace_core::catalog::{self, CatalogEntry, Claim, Params, Suite};
use sspace_core::rng::{seeded, sub_seed};

/// Bumped whenever the report layout changes.
pub const SCHEMA_VERSION: &str = "sspace-report/1";

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RunError {
    #[error("unknown instance `{0}`; run `sspace list` for the available names")]
    UnknownInstance(String),
    #[error("unknown suite `{0}`; expected one of structure, correspondence, morphisms, connections, naturality, all")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Instance name or `all`.
    pub instance: String,
    /// Suite name or `all`.
    pub suite: String,
    pub samples: usize,
    pub tol: f64,
    pub fd_tol: f64,
    pub seed: u64,
    /// Record wall-clock time per check. Off by default so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = Params::default();
        Self {
            instance: "all".into(),
            suite: "all".into(),
            samples: p.samples,
            tol: p.tol,
            fd_tol: p.fd_tol,
            seed: 42,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn new(instance: impl Into<String>, suite: impl Into<String>) -> Self {
        Self {
            instance: instance.into(),
            suite: suite.into(),
            ..Self::default()
        }
    }

    pub fn params(&self) -> Params {
        Params {
            samples: self.samples,
            tol: self.tol,
            fd_tol: self.fd_tol,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.samples < 10 {
            return Err(RunError::InvalidConfig(format!("samples must be at least 10, got {}", self.samples)));
        }
        for (name, v) in [("tol", self.tol), ("fd-tol", self.fd_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(RunError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn instances(&self) -> Result<Vec<&'static str>, RunError> {
        let names = catalog::names();
        if self.instance == "all" {
            return Ok(names);
        }
        names
            .into_iter()
            .find(|n| *n == self.instance)
            .map(|n| vec![n])
            .ok_or_else(|| RunError::UnknownInstance(self.instance.clone()))
    }

    fn suites(&self) -> Result<Vec<Suite>, RunError> {
        if self.suite == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::parse(&self.suite)
            .map(|s| vec![s])
            .ok_or_else(|| RunError::UnknownSuite(self.suite.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    /// `instance/claim`.
    pub name: String,
    pub anchor: String,
    pub suite: String,
    pub pass: bool,
    /// `None` when the check could not produce a finite residual.
    pub max_dev: Option<f64>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn evaluate(entry: &CatalogEntry, claim: &Claim, config: &RunConfig) -> CheckRecord {
    let name = format!("{}/{}", entry.name, claim.name);
    let mut rng = seeded(sub_seed(config.seed, &name, 0));
    let start = Instant::now();
    let r = claim.evaluate(&config.params(), &mut rng);
    let elapsed = start.elapsed();
    CheckRecord {
        name,
        anchor: claim.anchor.clone(),
        suite: claim.suite.name().into(),
        pass: r.pass,
        max_dev: r.max_deviation.is_finite().then_some(r.max_deviation),
        n: r.samples,
        elapsed_ms: config.timings.then_some(elapsed.as_secs_f64() * 1e3),
    }
}

/// Evaluates every selected claim. Claims run in parallel; the report keeps
/// catalog order.
pub fn run(config: &RunConfig) -> Result<RunReport, RunError> {
    config.validate()?;
    let suites = config.suites()?;
    let entries: Vec<CatalogEntry> = config
        .instances()?
        .into_par_iter()
        .map(|n| catalog::entry(n).expect("registered name"))
        .collect();
    let jobs: Vec<(&CatalogEntry, &Claim)> = entries
        .iter()
        .flat_map(|e| e.claims.iter().filter(|c| suites.contains(&c.suite)).map(move |c| (e, c)))
        .collect();
    let checks: Vec<CheckRecord> = jobs.par_iter().map(|(e, c)| evaluate(e, c, config)).collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(RunReport {
        version: SCHEMA_VERSION.into(),
        config: config.clone(),
        checks,
        pass,
    })
}

/// Catalog names in stable order with their one-line descriptions.
pub fn list_instances() -> Vec<(&'static str, &'static str)> {
    catalog::INSTANCES.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names_are_errors() {
        assert_eq!(
            run(&RunConfig::new("nope", "all")).unwrap_err(),
            RunError::UnknownInstance("nope".into())
        );
        assert_eq!(
            run(&RunConfig::new("hopf", "nope")).unwrap_err(),
            RunError::UnknownSuite("nope".into())
        );
    }

    #[test]
    fn config_bounds() {
        let mut c = RunConfig {
            samples: 9,
            ..RunConfig::default()
        };
        assert!(matches!(c.validate(), Err(RunError::InvalidConfig(_))));
        c.samples = 10;
        c.fd_tol = 0.0;
        assert!(matches!(c.validate(), Err(RunError::InvalidConfig(_))));
        c.fd_tol = 1e-4;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn listing_is_stable() {
        let l = list_instances();
        assert_eq!(l.len(), 13);
        assert_eq!(l[0].0, "lm-flat-2");
        assert!(l.iter().any(|(n, a)| *n == "hopf" && a.contains("bundle metric")));
        assert_eq!(l, list_instances());
    }

    #[test]
    fn structure_suite_on_lm_passes() {
        let c = RunConfig {
            samples: 20,
            ..RunConfig::new("lm-flat-2", "structure")
        };
        let r = run(&c).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks.iter().all(|k| k.suite == "structure" && k.name.starts_with("lm-flat-2/")));
        assert!(r.check("lm-flat-2/rigidity").is_some());
    }

    #[test]
    fn schema_fields() {
        let c = RunConfig {
            samples: 10,
            ..RunConfig::new("punctured-2", "structure")
        };
        let v: serde_json::Value = serde_json::from_str(&run(&c).unwrap().to_json()).unwrap();
        assert_eq!(v["version"], SCHEMA_VERSION);
        assert_eq!(v["config"]["seed"], 42);
        let first = &v["checks"][0];
        for k in ["name", "anchor", "pass", "max_dev", "n"] {
            assert!(first.get(k).is_some(), "missing {k}");
        }
        assert!(first.get("elapsed_ms").is_none());
    }
}
