//! JSON config schemas for divisor and lattice scenarios.
//!
//! Divisor configs drive `oka decide`:
//!
//! ```json
//! {
//!   "components": [{"name": "Dplus", "exponents": [[0,1],[0,0]]}],
//!   "support_dim": 1,
//!   "support_cycles": [[1,2,1]]
//! }
//! ```
//!
//! Lattice configs drive `lattice verdict`; generators list per-coordinate
//! [a_j, b_j] pairs meaning a_j·e_j + b_j·(i·e_j):
//!
//! ```json
//! {"n": 3, "d": 4, "offdiag": true,
//!  "generators": [[[0,1],[0,0],[0,0]], [[0,0],[1,0],[0,0]], [[0,0],[0,0],[1,0]]]}
//! ```

use serde::Deserialize;

use okalab::bundlecalc::{DivisorSpec, ExponentMatrix, SupportCycleDecl};
use okalab::latticeforms::{GaussianLatticeVector, HermitianFormSpec, SublatticeDecl};

#[derive(Debug, Deserialize)]
pub struct DivisorConfig {
    pub components: Vec<ComponentConfig>,
    pub support_dim: usize,
    #[serde(default)]
    pub support_cycles: Vec<[i64; 3]>,
}

#[derive(Debug, Deserialize)]
pub struct ComponentConfig {
    pub name: String,
    pub exponents: Vec<Vec<i64>>,
}

impl DivisorConfig {
    pub fn load(path: &str) -> Result<DivisorSpec, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config '{path}': {e}"))?;
        let cfg: DivisorConfig = serde_json::from_str(&text)
            .map_err(|e| format!("malformed divisor config '{path}': {e}"))?;
        cfg.into_spec()
    }

    pub fn into_spec(self) -> Result<DivisorSpec, String> {
        let mut components = Vec::new();
        for c in self.components {
            let m = ExponentMatrix::new(c.exponents)
                .map_err(|e| format!("component '{}': {e}", c.name))?;
            components.push((c.name, m));
        }
        let mut cycles = Vec::new();
        for [a, b, coefficient] in self.support_cycles {
            let a = usize::try_from(a).map_err(|_| format!("cycle index {a} must be positive"))?;
            let b = usize::try_from(b).map_err(|_| format!("cycle index {b} must be positive"))?;
            cycles.push(SupportCycleDecl::new(a, b, coefficient).map_err(|e| e.to_string())?);
        }
        DivisorSpec::new(components, self.support_dim, cycles).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
pub struct LatticeConfig {
    pub n: usize,
    pub d: i64,
    #[serde(default = "default_true")]
    pub offdiag: bool,
    pub generators: Vec<Vec<[i64; 2]>>,
}

fn default_true() -> bool {
    true
}

impl LatticeConfig {
    pub fn load(path: &str) -> Result<(HermitianFormSpec, SublatticeDecl), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config '{path}': {e}"))?;
        let cfg: LatticeConfig = serde_json::from_str(&text)
            .map_err(|e| format!("malformed lattice config '{path}': {e}"))?;
        cfg.into_specs()
    }

    pub fn into_specs(self) -> Result<(HermitianFormSpec, SublatticeDecl), String> {
        let omega =
            HermitianFormSpec::new(self.n, self.d, self.offdiag).map_err(|e| e.to_string())?;
        let mut gens = Vec::new();
        for g in self.generators {
            gens.push(parse_gaussian_vector(&g)?);
        }
        let sub = SublatticeDecl::new(gens).map_err(|e| e.to_string())?;
        Ok((omega, sub))
    }
}

/// Per-coordinate [a_j, b_j] pairs → a Gaussian lattice vector.
pub fn parse_gaussian_vector(pairs: &[[i64; 2]]) -> Result<GaussianLatticeVector, String> {
    let a: Vec<i64> = pairs.iter().map(|p| p[0]).collect();
    let b: Vec<i64> = pairs.iter().map(|p| p[1]).collect();
    GaussianLatticeVector::new(a, b).map_err(|e| e.to_string())
}

/// Parse a vector given on the command line as a JSON array of pairs.
pub fn parse_gaussian_vector_arg(src: &str) -> Result<GaussianLatticeVector, String> {
    let pairs: Vec<[i64; 2]> = serde_json::from_str(src)
        .map_err(|e| format!("expected a JSON array of [a,b] pairs, got '{src}': {e}"))?;
    parse_gaussian_vector(&pairs)
}
