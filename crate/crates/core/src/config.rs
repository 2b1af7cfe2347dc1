//! TOML run configurations and composition specs.
//!
//! A run file names a bracket and Hamiltonian, the grid, constants, EOS,
//! initial data and output cadence. A compose file describes a bracket
//! expression built from catalog entries and combinators, or a
//! finite-dimensional matched pair.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::brackets::{self, Action, ActionKind, Bracket, Role};
use crate::dynamics::{EosParams, HamiltonianParams, HAMILTONIANS};
use crate::error::{Error, Result};
use crate::grid::{Grid3, PhaseGrid};
use crate::liealg::{matched_pair_from_toml, MatchedPairSpec};
use crate::state::{Constants, Domain};

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dims: [usize; 3],
    #[serde(default = "unit_lengths")]
    pub lengths: [f64; 3],
    /// Momentum points per axis; present only for kinetic brackets.
    pub pdims: Option<[usize; 3]>,
    #[serde(default = "default_pmax")]
    pub pmax: [f64; 3],
}

fn unit_lengths() -> [f64; 3] {
    [1.0; 3]
}

fn default_pmax() -> [f64; 3] {
    [10.0; 3]
}

impl GridConfig {
    pub fn domain(&self) -> Result<Arc<Domain>> {
        let space = Grid3::new(self.dims, self.lengths)?;
        Ok(match self.pdims {
            Some(p) => Domain::with_phase(PhaseGrid::new(space, p, self.pmax)?),
            None => Domain::spatial(space),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    /// `zero`, `uniform`, `random`, `maxwell_planewave`, `mhd_smooth` or
    /// `maxwellian`.
    pub kind: String,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    /// Plane-wave mode number along x.
    #[serde(default = "default_mode")]
    pub mode: usize,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default)]
    pub drift: [f64; 3],
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_mode() -> usize {
    1
}

fn default_temperature() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    /// Casimir names to record; all known Casimirs when absent.
    pub casimirs: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub bracket: String,
    /// Defaults to the bracket name.
    pub hamiltonian: Option<String>,
    /// Defaults to `0.1 * min spacing / c`.
    pub dt: Option<f64>,
    pub steps: usize,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub seed: u64,
    /// Coefficient of the sample interaction energy `a int rho1 rho2`.
    #[serde(default)]
    pub interaction: f64,
    pub grid: GridConfig,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub eos: EosParams,
    pub initial: InitialCondition,
    #[serde(default)]
    pub monitors: MonitorConfig,
}

fn default_stride() -> usize {
    1
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?)
    }

    pub fn hamiltonian_name(&self) -> &str {
        self.hamiltonian.as_deref().unwrap_or(&self.bracket)
    }

    pub fn params(&self) -> HamiltonianParams {
        HamiltonianParams {
            eos: self.eos,
            interaction: self.interaction,
        }
    }

    pub fn domain(&self) -> Result<Arc<Domain>> {
        self.grid.domain()
    }

    /// Names, step counts, constants and grid shape, checked before any work.
    pub fn validate(&self) -> Result<()> {
        let b = brackets::by_name(&self.bracket)?;
        let h = self.hamiltonian_name();
        if !HAMILTONIANS.contains(&h) {
            return Err(Error::UnknownName {
                kind: "hamiltonian",
                name: h.to_string(),
            });
        }
        if h != self.bracket {
            return Err(Error::Config(format!(
                "hamiltonian `{h}` does not act on the variables of bracket `{}`",
                self.bracket
            )));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        self.constants.validate()?;
        let need = brackets::species_needed(&self.bracket);
        if self.constants.species.len() < need {
            return Err(Error::Config(format!(
                "bracket `{}` needs {need} species in [constants]",
                self.bracket
            )));
        }
        let kinetic = brackets::is_kinetic(b.as_ref());
        if kinetic != self.grid.pdims.is_some() {
            return Err(Error::Config(format!(
                "bracket `{}` {} grid.pdims",
                self.bracket,
                if kinetic { "requires" } else { "does not take" }
            )));
        }
        if let Some(names) = &self.monitors.casimirs {
            let known: Vec<String> = b.casimirs().iter().map(crate::functional::Functional::name).collect();
            if let Some(bad) = names.iter().find(|n| !known.contains(n)) {
                return Err(Error::UnknownName {
                    kind: "monitor",
                    name: bad.clone(),
                });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- compose

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub var: String,
    /// `primal` or `dual`.
    pub role: String,
    /// `function`, `one_form` or `two_form`.
    pub kind: String,
}

/// Bracket expression. Tables carry an `op` key.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum BracketExpr {
    Catalog {
        name: String,
    },
    Renamed {
        of: Box<BracketExpr>,
        map: BTreeMap<String, String>,
    },
    Direct {
        parts: Vec<BracketExpr>,
        name: Option<String>,
    },
    /// Lie-Poisson bracket of vector fields on a single momentum variable.
    LiePoisson {
        momentum: String,
    },
    Semidirect {
        base: Box<BracketExpr>,
        momentum: String,
        actions: Vec<ActionSpec>,
        name: Option<String>,
    },
}

impl BracketExpr {
    pub fn build(&self) -> Result<Arc<dyn Bracket>> {
        Ok(match self {
            BracketExpr::Catalog { name } => brackets::by_name(name)?,
            BracketExpr::Renamed { of, map } => {
                let pairs: Vec<(&str, &str)> = map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                Arc::new(brackets::renamed(of.build()?, &pairs)?)
            }
            BracketExpr::Direct { parts, name } => {
                let built = parts.iter().map(|p| p.build()).collect::<Result<Vec<_>>>()?;
                let (last, init) = built
                    .split_last()
                    .ok_or_else(|| Error::Config("direct product needs at least one part".into()))?;
                let Some((first, mid)) = init.split_first() else {
                    return Ok(last.clone());
                };
                let acc = mid.iter().try_fold(first.clone(), |acc, p| {
                    Ok::<Arc<dyn Bracket>, Error>(Arc::new(brackets::direct_product(acc, p.clone())?))
                })?;
                let mut prod = brackets::direct_product(acc, last.clone())?;
                if let Some(n) = name {
                    prod.set_name(n);
                }
                Arc::new(prod)
            }
            BracketExpr::LiePoisson { momentum } => Arc::new(brackets::lie_poisson_vector_fields(momentum)),
            BracketExpr::Semidirect {
                base,
                momentum,
                actions,
                name,
            } => {
                let acts = actions
                    .iter()
                    .map(|a| {
                        let role = Role::parse(&a.role)
                            .ok_or_else(|| Error::Config(format!("unknown role `{}`", a.role)))?;
                        let kind = ActionKind::parse(&a.kind)
                            .ok_or_else(|| Error::Config(format!("unknown action kind `{}`", a.kind)))?;
                        Ok(Action::new(&a.var, role, kind))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut s = brackets::semidirect_vector(base.build()?, momentum, acts)?;
                if let Some(n) = name {
                    s.set_name(n);
                }
                Arc::new(s)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeSpec {
    pub bracket: Option<BracketExpr>,
    /// Catalog bracket the composed one should reproduce.
    pub compare: Option<String>,
    /// Finite-dimensional matched pair in the `[g]`, `[k]`, `left_action`,
    /// `right_action` format.
    pub matched_pair: Option<toml::Table>,
    /// Suite grid size and seed for the verify run.
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub constants: Constants,
}

impl ComposeSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ComposeSpec = parse(text)?;
        if spec.bracket.is_some() == spec.matched_pair.is_some() {
            return Err(Error::Config(
                "compose file needs exactly one of `bracket` or `matched_pair`".into(),
            ));
        }
        if let Some(c) = &spec.compare {
            brackets::by_name(c)?;
        }
        spec.constants.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?)
    }

    pub fn matched_pair(&self) -> Result<Option<MatchedPairSpec>> {
        match &self.matched_pair {
            None => Ok(None),
            Some(t) => Ok(Some(matched_pair_from_toml(
                &toml::to_string(t).map_err(|e| Error::Config(e.to_string()))?,
            )?)),
        }
    }
}
