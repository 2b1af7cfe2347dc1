//! Field Poisson brackets as bivector applications `x_dot = L(x) dH`.
//!
//! Every implementation writes its bivector with derivatives acting on `dH`
//! and on state fields only. The bracket value is `{F,H} = <dF, L(x) dH>`.

mod catalog;
mod combinators;
pub mod dense;
pub mod ops;
pub mod verify;

use std::sync::Arc;

pub use catalog::*;
pub use combinators::{
    direct_product, lie_poisson_vector_fields, renamed, semidirect_vector, Action, DirectProduct, Renamed, Role, Semidirect,
    VectorFieldLiePoisson,
};
pub use ops::ActionKind;

use crate::error::{Error, Result};
use crate::functional::AnalyticFunctional;
use crate::state::{Constants, State, StateSchema};

/// How the bivector depends on the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// Independent of the state.
    Constant,
    /// Linear in the state.
    Linear,
    /// Anything else (here: quadratic).
    Nonlinear,
}

type ResidualFn = dyn Fn(&Constants, &State) -> Result<Vec<f64>> + Send + Sync;

/// Named constraint residual, a spatial scalar field.
#[derive(Clone)]
pub struct Constraint {
    pub name: String,
    residual: Arc<ResidualFn>,
}

impl Constraint {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Constants, &State) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            residual: Arc::new(f),
        }
    }

    pub fn residual(&self, k: &Constants, x: &State) -> Result<Vec<f64>> {
        (self.residual)(k, x)
    }

    pub fn max_norm(&self, k: &Constants, x: &State) -> Result<f64> {
        Ok(self.residual(k, x)?.iter().fold(0.0, |m, v| m.max(v.abs())))
    }
}

pub trait Bracket: Send + Sync {
    fn name(&self) -> String;

    fn schema(&self) -> Arc<StateSchema>;

    fn structure(&self) -> Structure;

    /// `L(x) dH` for inputs already checked against the schema.
    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State>;

    fn constraints(&self) -> Vec<Constraint> {
        Vec::new()
    }

    /// Known Casimir functionals.
    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        Vec::new()
    }

    /// Variables that must be strictly positive for the bracket to apply.
    fn positive_vars(&self) -> Vec<String> {
        Vec::new()
    }

    /// Checks schemas and state validity, then applies the bivector.
    fn apply(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let schema = self.schema();
        if **x.schema() != *schema {
            return Err(Error::Schema(format!(
                "bracket `{}` expects {}, got {}",
                self.name(),
                schema,
                x.schema()
            )));
        }
        if !dh.compatible(x) {
            return Err(Error::Schema(format!(
                "covector {} does not match state {}",
                dh.schema(),
                x.schema()
            )));
        }
        for v in self.positive_vars() {
            if let Some(bad) = x.field(&v)?.iter().find(|a| !(**a > 0.0)) {
                return Err(Error::InvalidState(format!(
                    "`{v}` must be positive, found {bad}"
                )));
            }
        }
        self.tangent(k, x, dh)
    }

    /// `{F,H}(x) = <dF, L(x) dH>`.
    fn value(&self, k: &Constants, x: &State, df: &State, dh: &State) -> Result<f64> {
        df.dot(&self.apply(k, x, dh)?)
    }
}

/// Exact names accepted by [`by_name`].
pub const CATALOG: [&str; 14] = [
    "em_canonical",
    "em",
    "vlasov",
    "hydro",
    "hydro_binary",
    "classical_binary",
    "ked",
    "ked_binary",
    "emhd",
    "emhd_total",
    "bemhd",
    "cbemhd",
    "mhd",
    "ehd",
];

/// Catalog bracket by exact name.
pub fn by_name(name: &str) -> Result<Arc<dyn Bracket>> {
    Ok(match name {
        "em_canonical" => Arc::new(em_canonical()),
        "em" => Arc::new(em()),
        "vlasov" => Arc::new(vlasov()),
        "hydro" => Arc::new(hydro()),
        "hydro_binary" => hydro_binary(),
        "classical_binary" => Arc::new(classical_binary()),
        "ked" => Arc::new(ked()),
        "ked_binary" => Arc::new(ked_binary()),
        "emhd" => Arc::new(emhd()),
        "emhd_total" => Arc::new(emhd_total()),
        "bemhd" => Arc::new(bemhd()),
        "cbemhd" => Arc::new(cbemhd()),
        "mhd" => Arc::new(mhd()),
        "ehd" => Arc::new(ehd()),
        _ => {
            return Err(Error::UnknownName {
                kind: "bracket",
                name: name.to_string(),
            })
        }
    })
}

/// True when the bracket acts on phase-space densities.
pub fn is_kinetic(b: &dyn Bracket) -> bool {
    b.schema().has_phase()
}

/// Species count a bracket needs in its constants.
pub fn species_needed(name: &str) -> usize {
    match name {
        "ked_binary" | "bemhd" | "cbemhd" => 2,
        _ => 1,
    }
}
