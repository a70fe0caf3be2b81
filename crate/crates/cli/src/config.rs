//! Resolved run configurations and the scenario/map JSON models.
//!
//! A `RunConfig` is the complete recipe for one run: it is echoed into the
//! manifest and can be re-executed verbatim by `rerun`. Unknown keys are
//! rejected everywhere.

use serde::{Deserialize, Serialize};

use oscillab_core::averages::Character;
use oscillab_core::dynamics::{validate_map, AffineMapSpec, GroupPoint, GroupSpec};
use oscillab_core::exact::{IntMatrix, IntPoly, UnitRational};
use oscillab_core::sequences::GeneratorSpec;
use oscillab_core::{Error, Result};

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunConfig {
    Gen {
        spec: String,
        out: String,
    },
    Sum {
        seq: String,
        phase: String,
        grid: Vec<usize>,
        backend: String,
        out: String,
        plot: Option<String>,
    },
    Oscillate {
        seq: String,
        order: usize,
        tau: f64,
        samples: usize,
        grid_den: u64,
        seed: u64,
        grid: Vec<usize>,
        out: String,
        plot: Option<String>,
    },
    PoVerify {
        seq: String,
        prime: u64,
        phase: String,
        n: usize,
        out: String,
    },
    Subseq {
        seq: String,
        stride: usize,
        order: usize,
        tau: f64,
        samples: usize,
        grid_den: u64,
        seed: u64,
        grid: Vec<usize>,
        out: String,
    },
    MapAnalyze {
        map: String,
        out: String,
    },
    ErgAvg {
        scenario: String,
        out: String,
        plot: Option<String>,
    },
    Reduce {
        scenario: String,
        m_count: u64,
        out: String,
    },
    Gowers {
        seq: String,
        k: u32,
        method: String,
        n: usize,
        out: String,
    },
}

/// `--n N` or `--grid start,factor,count`, never both.
pub fn resolve_grid(n: Option<usize>, grid: Option<&str>) -> Result<Vec<usize>> {
    match (n, grid) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(g)) => parse_geometric_grid(g),
        (Some(_), Some(_)) => Err(Error::BadInput("--n and --grid are mutually exclusive".into())),
        (None, None) => Err(Error::BadInput("one of --n or --grid is required".into())),
    }
}

/// Parses "start,factor,count" into a strictly increasing geometric grid.
pub fn parse_geometric_grid(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::BadInput(format!(
            "grid must be start,factor,count, got {s:?}"
        )));
    }
    let start: usize = parts[0]
        .parse()
        .map_err(|_| Error::BadInput(format!("bad grid start {:?}", parts[0])))?;
    let factor: usize = parts[1]
        .parse()
        .map_err(|_| Error::BadInput(format!("bad grid factor {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::BadInput(format!("bad grid count {:?}", parts[2])))?;
    if start == 0 || factor < 2 || count == 0 || count > 64 {
        return Err(Error::BadInput(
            "grid needs start >= 1, factor >= 2, 1 <= count <= 64".into(),
        ));
    }
    let mut out = Vec::with_capacity(count);
    let mut n = start;
    for i in 0..count {
        out.push(n);
        if i + 1 < count {
            n = n
                .checked_mul(factor)
                .ok_or_else(|| Error::BadInput("grid overflow".into()))?;
        }
    }
    Ok(out)
}

/// Map description: matrices as integer-string arrays, translation and
/// mixing entries as `"p/q"` strings (decimals snap to their exact dyadic
/// double).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub group: GroupSpec,
    pub torus_block: IntMatrix,
    #[serde(default)]
    pub mixing_block: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub finite_block: Option<Vec<Vec<i64>>>,
    pub translation: GroupPoint,
}

impl MapJson {
    pub fn build(self) -> Result<AffineMapSpec> {
        // structural deserialization bypasses the GroupSpec checks
        let group = GroupSpec::new(self.group.torus_dim, self.group.moduli.clone())?;
        let d = group.torus_dim;
        let k = group.finite_rank();
        let mixing = match self.mixing_block {
            None => vec![UnitRational::zero(); d * k],
            Some(rows) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != k) {
                    return Err(Error::BadInput(format!(
                        "mixing block must be {d} rows of {k} entries"
                    )));
                }
                rows.iter()
                    .flatten()
                    .map(|s| UnitRational::parse(s))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let finite = match self.finite_block {
            None => {
                let mut id = vec![0i64; k * k];
                for i in 0..k {
                    id[i * k + i] = 1;
                }
                id
            }
            Some(rows) => {
                if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                    return Err(Error::BadInput(format!(
                        "finite block must be {k} rows of {k} entries"
                    )));
                }
                rows.into_iter().flatten().collect()
            }
        };
        validate_map(group, self.torus_block, mixing, finite, self.translation)
    }
}

/// Scenario bundle for averages and reduction reports.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioJson {
    pub map: MapJson,
    pub point: GroupPoint,
    pub characters: Vec<Character>,
    /// Ascending integer coefficient lists.
    pub polynomials: Vec<IntPoly>,
    pub weights: GeneratorSpec,
    #[serde(default)]
    pub grid: Option<GridJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub start: usize,
    pub factor: usize,
    pub count: usize,
}

impl GridJson {
    pub fn lengths(&self) -> Result<Vec<usize>> {
        parse_geometric_grid(&format!("{},{},{}", self.start, self.factor, self.count))
    }
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("bad JSON in {path}: {e}")))
}
