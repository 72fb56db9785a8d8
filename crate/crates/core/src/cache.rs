//! On-disk cache of per-orbit summaries, one JSON file per diagram type and
//! set size. Files with another schema version are rebuilt.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::admissible::{coclique_closure, count_containing, enumerate_orbit, m_y_type, subsystem_type, Coclique};
use crate::error::{Error, Result};
use crate::normalform::orbit_representatives;
use crate::rootsystem::{format_types, RootSystem};

pub const SCHEMA_VERSION: u32 = 1;

/// Computed data of one orbit `W B_Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub coclique: Coclique,
    pub set_size: usize,
    pub orbit_size: usize,
    pub height0: usize,
    pub max_height: u32,
    /// Members containing `α_n`.
    pub containing_last: usize,
    pub perp_type: String,
    pub my_type: String,
}

impl OrbitSummary {
    pub fn compute(sys: &RootSystem, y: &Coclique) -> Result<Self> {
        let base = coclique_closure(sys, y.nodes())?;
        let orbit = enumerate_orbit(sys, &base)?;
        let my = if y.nodes().is_empty() { sys.diagram().clone() } else { m_y_type(sys, &orbit) };
        Ok(Self {
            coclique: y.clone(),
            set_size: base.len(),
            orbit_size: orbit.len(),
            height0: orbit.heights().iter().filter(|&&h| h == 0).count(),
            max_height: orbit.heights().iter().copied().max().unwrap_or(0),
            containing_last: count_containing(sys, &orbit, sys.rank() as u8),
            perp_type: format_types(&subsystem_type(sys, &base)?),
            my_type: my.type_string()?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: u32,
    cartan: String,
    summary: OrbitSummary,
}

/// Cache location; `None` disables caching.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: PathBuf) -> Self {
        Self { dir: Some(dir) }
    }

    /// `BRAUERLAB_CACHE`, or a directory under the system temp dir.
    pub fn from_env() -> Self {
        let dir = std::env::var_os("BRAUERLAB_CACHE").map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("brauerlab-cache"));
        Self::at(dir)
    }

    fn path(&self, sys: &RootSystem, set_size: usize, y: &Coclique) -> Option<PathBuf> {
        let nodes: Vec<String> = y.nodes().iter().map(|n| n.to_string()).collect();
        self.dir.as_ref().map(|d| d.join(format!("{}-{}-{}.json", sys.cartan(), set_size, nodes.join("_"))))
    }

    fn load(&self, sys: &RootSystem, y: &Coclique) -> Option<OrbitSummary> {
        let size = coclique_closure(sys, y.nodes()).ok()?.len();
        let text = std::fs::read_to_string(self.path(sys, size, y)?).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        (file.schema == SCHEMA_VERSION && file.cartan == sys.cartan().to_string() && file.summary.coclique == *y).then_some(file.summary)
    }

    fn store(&self, sys: &RootSystem, summary: &OrbitSummary) -> Result<()> {
        let Some(path) = self.path(sys, summary.set_size, &summary.coclique) else { return Ok(()) };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let file = CacheFile { schema: SCHEMA_VERSION, cartan: sys.cartan().to_string(), summary: summary.clone() };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&file)?)?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    /// Summaries of all orbits, `∅` first, computing and storing missing ones.
    pub fn orbit_summaries(&self, sys: &RootSystem) -> Result<Vec<OrbitSummary>> {
        let mut out = Vec::new();
        for y in orbit_representatives(sys)? {
            if let Some(s) = self.load(sys, &y) {
                out.push(s);
                continue;
            }
            let s = OrbitSummary::compute(sys, &y)?;
            self.store(sys, &s)?;
            out.push(s);
        }
        Ok(out)
    }
}
