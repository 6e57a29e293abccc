//! Run configuration: a flat TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::anyon2d::CACHE_ENV;
use crate::error::{invalid, Error, Result};
use crate::tonks_girardeau::MAX_PARTICLES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verb {
    Tg,
    Spectrum2d,
    Sweep,
    Overlap,
    Hardy,
    Decoupling,
    Calogero,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Tg => "tg",
            Verb::Spectrum2d => "spectrum2d",
            Verb::Sweep => "sweep",
            Verb::Overlap => "overlap",
            Verb::Hardy => "hardy",
            Verb::Decoupling => "decoupling",
            Verb::Calogero => "calogero",
        }
    }
}

/// Every field is optional so that a file, a manifest echo and flags can be
/// layered; defaults are filled per verb by the accessors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub eps_list: Option<Vec<f64>>,
    /// Particle number.
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub n_max: Option<usize>,
    pub m_max: Option<usize>,
    pub omega_b: Option<f64>,
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub threads: Option<usize>,
    pub check_doubling: Option<bool>,
    pub projection: Option<bool>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
struct ManifestEcho {
    config: RunConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(format!("config: {}", e.message())))
    }

    /// Read a TOML config, or the config echoed in a JSON run manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            let echo: ManifestEcho = serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("manifest {}: {e}", path.display())))?;
            return Ok(echo.config);
        }
        Self::from_toml(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(mut self, over: &RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f.clone(); } )* };
        }
        take!(
            alpha,
            epsilon,
            eps_list,
            n,
            k,
            n_max,
            m_max,
            omega_b,
            order,
            tol,
            seed,
            samples,
            threads,
            check_doubling,
            projection,
            cache_dir,
            out
        );
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.5)
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(1.0)
    }
    pub fn particles(&self) -> usize {
        self.n.unwrap_or(2)
    }
    pub fn k(&self) -> usize {
        self.k.unwrap_or(1)
    }
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-10)
    }
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }
    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(1_000_000)
    }
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn eps_list(&self) -> Vec<f64> {
        match (&self.eps_list, self.epsilon) {
            (Some(l), _) => l.clone(),
            (None, Some(e)) => vec![e],
            (None, None) => crate::experiments::DEFAULT_LADDER.to_vec(),
        }
    }

    /// Flag, then config, then the environment, then `<out>/cache`.
    pub fn cache_dir(&self) -> PathBuf {
        if let Some(d) = &self.cache_dir {
            return d.clone();
        }
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => self.out_dir().join("cache"),
        }
    }

    pub fn validate(&self, verb: Verb) -> Result<()> {
        let uses_alpha = !matches!(verb, Verb::Tg);
        if uses_alpha {
            let a = self.alpha();
            if !(a > 0.0 && a < 2.0) {
                return invalid(format!("alpha = {a} outside (0, 2)"));
            }
        }
        let check_eps = |e: f64| {
            if e > 0.0 && e <= 1.0 {
                Ok(())
            } else {
                invalid(format!("epsilon = {e} outside (0, 1]"))
            }
        };
        match verb {
            Verb::Spectrum2d | Verb::Decoupling => check_eps(self.epsilon())?,
            Verb::Sweep | Verb::Overlap => {
                let l = self.eps_list();
                if l.is_empty() {
                    return invalid("empty epsilon list");
                }
                for &e in &l {
                    check_eps(e)?;
                }
                if l.windows(2).any(|w| w[1] >= w[0]) {
                    return invalid("epsilon list must be strictly decreasing");
                }
            }
            _ => {}
        }
        if self.k() == 0 {
            return invalid("k must be at least 1");
        }
        let n = self.particles();
        let n_ok = match verb {
            Verb::Tg => (1..=MAX_PARTICLES).contains(&n),
            Verb::Hardy => self.n.is_none() || (2..=3).contains(&n),
            _ => n == 2,
        };
        if !n_ok {
            return invalid(format!(
                "particle number {n} not supported by {}",
                verb.name()
            ));
        }
        if let Some(w) = self.omega_b {
            if !(w > 0.0 && w.is_finite()) {
                return invalid(format!("omega_b = {w} must be positive"));
            }
        }
        match (self.n_max, self.m_max) {
            (Some(_), None) | (None, Some(_)) => {
                return invalid("n_max and m_max must be given together")
            }
            (Some(_), Some(m)) if m % 2 != 0 => {
                return invalid(format!("m_max = {m} must be even"))
            }
            _ => {}
        }
        let t = self.tol();
        if !(t > 0.0 && t < 1e-2) {
            return invalid(format!("tol = {t} outside (0, 1e-2)"));
        }
        if self.samples() < 2 {
            return invalid("need at least two samples");
        }
        if self.threads == Some(0) {
            return invalid("threads must be at least 1");
        }
        if let Some(o) = self.order {
            if o < 2 {
                return invalid(format!("quadrature order {o} too small"));
            }
        }
        Ok(())
    }
}
