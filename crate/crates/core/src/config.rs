//! Run configuration: a single JSON document with expressions as strings,
//! compiled through the expression parser. Seeds are mandatory for random
//! sampling so every reported number is reproducible.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub frame: Option<String>,
    /// inline closed-form frame (three vectors of three y-expressions)
    #[serde(default)]
    pub frame_closed_form: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub fields: FieldsConfig,
    #[serde(default)]
    pub extension: Option<String>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    /// catalog entry name; alternative to the inline maps below
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// inline diffeomorphism ψ (three y-expressions)
    #[serde(default)]
    pub psi: Option<Vec<String>>,
    /// inline explicit metric (nine row-major y-expressions)
    #[serde(default)]
    pub metric: Option<Vec<String>>,
    /// inline embedding f (three z-expressions)
    #[serde(default)]
    pub f: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsConfig {
    /// surface field components (two z-expressions)
    #[serde(default)]
    pub v: Option<Vec<String>>,
    /// closed-form ambient field components (three y-expressions)
    #[serde(default)]
    pub u: Option<Vec<String>>,
    /// tangential extension rule (two (z1, z2, s)-expressions)
    #[serde(default)]
    pub rule: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default)]
    pub grid: Option<[usize; 2]>,
    #[serde(default)]
    pub random: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            grid: Some([5, 5]),
            random: None,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    #[serde(default)]
    pub s_max: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("{e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.surface.catalog.is_none() && self.surface.f.is_none() {
            return Err(Error::Config(
                "surface needs either a catalog name or an inline `f`".into(),
            ));
        }
        if let Some(random) = self.sampling.random {
            if random == 0 {
                return Err(Error::Config(
                    "random sampling needs a positive count".into(),
                ));
            }
            if self.sampling.seed.is_none() {
                return Err(Error::Config(
                    "random sampling requires an explicit seed for reproducibility".into(),
                ));
            }
        }
        for (name, tol) in &self.tolerances {
            if tol.is_nan() || *tol <= 0.0 {
                return Err(Error::Config(format!(
                    "tolerance `{name}` must be positive, got {tol}"
                )));
            }
        }
        if let Some(ext) = &self.extension {
            let known = [
                "compatible",
                "divergence-free",
                "curl-normal",
                "curl-normal-divfree",
                "closed-form",
            ];
            if !known.contains(&ext.as_str()) {
                return Err(Error::Config(format!(
                    "unknown extension kind `{ext}` (expected one of {known:?})"
                )));
            }
        }
        Ok(())
    }

    /// Canonical JSON and its SHA-256 hash (keys are sorted by serde_json).
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).unwrap_or_default();
        let digest = Sha256::digest(canonical.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        format!("sha256:{hex}")
    }
}
