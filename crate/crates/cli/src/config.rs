//! Run configuration: a TOML file merged with command-line overrides.
//!
//! ```toml
//! seed = 42
//! scorer = "builtin"
//! generator = "retrieval"
//!
//! [grid]
//! sem = "0:5:50"
//! syn = "0:5:50"
//! lex = "0:5:50"
//!
//! [paths]
//! clusters = "dev.jsonl"
//! model = "qp.json"
//! out = "heatmap.csv"
//! ```

use std::path::{Path, PathBuf};

use qcpg_core::generator::GeneratorSpec;
use qcpg_core::seed::DEFAULT_SEED;
use qcpg_core::selection::{AxisRange, OffsetGrid};
use qcpg_core::semantic::SemanticScorer;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    scorer: Option<String>,
    generator: Option<String>,
    #[serde(default)]
    grid: GridSection,
    #[serde(default)]
    paths: PathsSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    sem: Option<String>,
    syn: Option<String>,
    lex: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathsSection {
    clusters: Option<PathBuf>,
    trees: Option<PathBuf>,
    model: Option<PathBuf>,
    out: Option<PathBuf>,
}

/// Values given on the command line; each one wins over the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub scorer: Option<String>,
    pub generator: Option<String>,
    pub out: Option<PathBuf>,
    pub clusters: Option<PathBuf>,
    pub trees: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub grid: [Option<String>; 3],
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub scorer: SemanticScorer,
    pub generator: GeneratorSpec,
    pub grid: OffsetGrid,
    pub clusters: Option<PathBuf>,
    pub trees: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Config {
    pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Self, CliError> {
        let file = match path {
            None => ConfigFile::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
        };
        Self::merge(file, overrides)
    }

    fn merge(file: ConfigFile, o: Overrides) -> Result<Self, CliError> {
        let scorer = o.scorer.or(file.scorer).unwrap_or_else(|| "builtin".into());
        let generator = o.generator.or(file.generator).unwrap_or_else(|| "retrieval".into());
        let [sem, syn, lex] = o.grid;
        let axis = |flag: Option<String>, file: Option<String>| -> Result<AxisRange, CliError> {
            match flag.or(file) {
                None => Ok(AxisRange::default()),
                Some(s) => s.parse().map_err(|e: qcpg_core::selection::SelectionError| CliError::Usage(e.to_string())),
            }
        };
        let grid = OffsetGrid {
            sem: axis(sem, file.grid.sem)?,
            syn: axis(syn, file.grid.syn)?,
            lex: axis(lex, file.grid.lex)?,
        };
        for (name, a) in [("sem", grid.sem), ("syn", grid.syn), ("lex", grid.lex)] {
            if !a.values().contains(&0.0) {
                return Err(CliError::Usage(format!("grid axis {name} must include 0")));
            }
        }
        Ok(Self {
            seed: o.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            scorer: scorer.parse()?,
            generator: generator.parse()?,
            grid,
            clusters: o.clusters.or(file.paths.clusters),
            trees: o.trees.or(file.paths.trees),
            model: o.model.or(file.paths.model),
            out: o.out.or(file.paths.out),
        })
    }

    pub fn require<'a>(value: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, CliError> {
        value.as_deref().ok_or_else(|| CliError::Usage(format!("missing {what} (flag or config [paths] entry)")))
    }
}
