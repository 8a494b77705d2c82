use std::path::{Path, PathBuf};

use polyfrolov::algebra::Field;
use polyfrolov::lattice::ShrinkFactor;
use polyfrolov::pointgen::Format;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError, StageExt};

/// Everything one pipeline run needs. Missing keys take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub b: u32,
    pub n: u32,
    /// LatticeSpec JSON to use instead of the explicit construction.
    pub lattice: Option<PathBuf>,
    /// Comma-separated shrinking polynomials; `None` means `x` per coordinate.
    pub shrink: Option<String>,
    pub depth: Option<usize>,
    /// Working precision; `None` derives it from the depth.
    pub precision: Option<i64>,
    pub out_dir: PathBuf,
    pub format: String,
    pub verify: bool,
    pub discrepancy: bool,
    pub discrepancy_cap: usize,
    /// Degree bound of the admissibility scan; `None` skips it.
    pub scan_bound: Option<u32>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            b: 2,
            n: 1,
            lattice: None,
            shrink: None,
            depth: None,
            precision: None,
            out_dir: PathBuf::from("out"),
            format: "rational".into(),
            verify: true,
            discrepancy: true,
            discrepancy_cap: polyfrolov::quality::DEFAULT_DISCREPANCY_CAP,
            scan_bound: Some(3),
        }
    }
}

/// Command-line values that replace config keys when present.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub b: Option<u32>,
    pub n: Option<u32>,
    pub lattice: Option<PathBuf>,
    pub shrink: Option<String>,
    pub depth: Option<usize>,
    pub precision: Option<i64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub no_verify: bool,
    pub no_discrepancy: bool,
    pub scan_bound: Option<u32>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(mut self, o: Overrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$( if let Some(v) = o.$f { self.$f = v; } )*};
        }
        take!(b, n, out_dir, format);
        macro_rules! take_opt {
            ($($f:ident),*) => {$( if o.$f.is_some() { self.$f = o.$f; } )*};
        }
        take_opt!(lattice, shrink, depth, precision, scan_bound);
        if o.no_verify {
            self.verify = false;
        }
        if o.no_discrepancy {
            self.discrepancy = false;
        }
        self
    }

    /// Checks everything that can be checked before any computation.
    pub fn validate(&self) -> Result<Validated, CliError> {
        let field = Field::new(self.b).stage("config")?;
        if self.n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        let d = if self.lattice.is_some() {
            None
        } else {
            let d = (self.b as u64).checked_pow(self.n).filter(|&d| d <= 64).ok_or_else(|| {
                CliError::Config(format!("b^n = {}^{} is too large", self.b, self.n))
            })?;
            Some(d as usize)
        };
        let format: Format = self.format.parse().stage("config")?;
        let shrink = match &self.shrink {
            Some(s) => Some(ShrinkFactor::parse(field, s).stage("config")?),
            None => None,
        };
        if let (Some(d), Some(f)) = (d, &shrink) {
            if f.len() != d {
                return Err(CliError::Config(format!(
                    "shrink factor has {} components, the lattice has dimension {d}",
                    f.len()
                )));
            }
        }
        if self.discrepancy_cap == 0 {
            return Err(CliError::Config("discrepancy_cap must be positive".into()));
        }
        Ok(Validated { field, d, format, shrink })
    }
}

#[derive(Clone, Debug)]
pub struct Validated {
    pub field: Field,
    /// Known up front for the explicit construction.
    pub d: Option<usize>,
    pub format: Format,
    pub shrink: Option<ShrinkFactor>,
}
