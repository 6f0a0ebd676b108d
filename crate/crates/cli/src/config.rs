use std::path::{Path, PathBuf};

use duelbias_core::bias::{default_grid, BiasConfig, BiasScale, Side};
use duelbias_core::bootstrap::{BootstrapConfig, ResampleUnit};
use duelbias_core::choice::FitConfig;
use duelbias_core::tags::{self, TagNormalizer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DUELBIAS_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "duelbias-out";

/// Settings shared by every subcommand, usually read from a TOML file and
/// then overridden by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Accepted dimension labels; empty accepts any.
    pub dimensions: Vec<String>,
    /// Categories to analyze; empty keeps all.
    pub categories: Vec<String>,
    pub seed: Option<u64>,
    pub bootstrap: BootstrapSettings,
    pub fit: FitConfig,
    pub scale: BiasScale,
    /// Percentiles at which rank curves are evaluated.
    pub grid: Vec<f64>,
    pub tags: TagSettings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapSettings {
    pub replicates: usize,
    pub confidence: f64,
    pub unit: ResampleUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TagSettings {
    pub top_k: usize,
    pub min_count: u64,
    pub smoothing: f64,
    pub yates: bool,
    /// Replacement stopword-prefix list, one per line.
    pub stopwords: Option<PathBuf>,
    /// Replacement dash lexicon, `variant<TAB>canonical` per line.
    pub lexicon: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            dimensions: Vec::new(),
            categories: Vec::new(),
            seed: None,
            bootstrap: BootstrapSettings::default(),
            fit: FitConfig::default(),
            scale: BiasScale::default(),
            grid: default_grid(),
            tags: TagSettings::default(),
            output_dir: None,
        }
    }
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        let d = BootstrapConfig::default();
        BootstrapSettings { replicates: d.replicates, confidence: d.confidence, unit: d.unit }
    }
}

impl Default for TagSettings {
    fn default() -> Self {
        TagSettings {
            top_k: 20,
            min_count: tags::DEFAULT_MIN_COUNT,
            smoothing: tags::DEFAULT_SMOOTHING,
            yates: false,
            stopwords: None,
            lexicon: None,
        }
    }
}

impl AnalysisConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.to_owned(), source })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Loads `path` if given, otherwise the defaults.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a seed is required for stochastic operations (--seed or `seed =`)".into()))
    }

    pub fn bias_config(&self) -> Result<BiasConfig> {
        let bootstrap = BootstrapConfig {
            replicates: self.bootstrap.replicates,
            seed: self.require_seed()?,
            confidence: self.bootstrap.confidence,
            unit: self.bootstrap.unit,
        };
        bootstrap.validate()?;
        self.fit.validate()?;
        if self.grid.iter().any(|x| !(0.0..=100.0).contains(x)) {
            return Err(Error::Config("grid percentiles must lie in [0, 100]".into()));
        }
        Ok(BiasConfig { scale: self.scale, grid: self.grid.clone(), bootstrap, fit: self.fit, focus: Side::B })
    }

    pub fn normalizer(&self) -> Result<TagNormalizer> {
        let read = |path: &PathBuf| std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.clone(), source });
        let stopwords = match &self.tags.stopwords {
            Some(p) => tags::parse_stopwords(&read(p)?),
            None => tags::parse_stopwords(tags::DEFAULT_STOPWORD_PREFIXES),
        };
        let lexicon = match &self.tags.lexicon {
            Some(p) => tags::parse_lexicon(&read(p)?)?,
            None => tags::parse_lexicon(tags::DEFAULT_DASH_LEXICON)?,
        };
        Ok(TagNormalizer::new(stopwords, lexicon))
    }

    /// Output directory: the flag, then the config file, then the
    /// environment, then [`DEFAULT_OUT_DIR`].
    pub fn output_dir(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_owned)
            .or_else(|| self.output_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}
