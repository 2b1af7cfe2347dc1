//! Projections between levels of description and the Poisson-map test
//! `{F,H}_coarse(pi(x)) = {F o pi, H o pi}_fine(x)`.
//!
//! A map supplies the projection `pi`, the transposed Jacobian acting on
//! coarse covectors (the chain rule for pullbacks) and the Jacobian acting on
//! fine tangents.

use std::fmt;
use std::sync::Arc;

use crate::brackets::ops::{add, cross, mul};
use crate::brackets::{self, Bracket};
use crate::error::{Error, Result};
use crate::functional::{test_functional_suite, Functional};
use crate::state::{Constants, Domain, FieldKind, State, StateSchema};

pub trait ProjectionMap: Send + Sync {
    fn name(&self) -> String;
    fn fine_schema(&self) -> Arc<StateSchema>;
    fn coarse_schema(&self) -> Arc<StateSchema>;
    /// Domain of coarse states given the fine domain.
    fn coarse_domain(&self, fine: &Arc<Domain>) -> Arc<Domain> {
        fine.clone()
    }
    fn project(&self, x: &State) -> Result<State>;
    /// `J^T dc`: derivative of `F o pi` at `x` from `dF` at `pi(x)`.
    fn pullback_derivative(&self, x: &State, dc: &State) -> Result<State>;
    /// `J v`.
    fn push_tangent(&self, x: &State, v: &State) -> Result<State>;
    /// Coarse variables left out of the strict Poisson-map test.
    fn strict_exclusions(&self) -> Vec<String> {
        Vec::new()
    }
    /// Diagnostic for truncated momentum boxes.
    fn boundary_mass(&self, _x: &State) -> Option<f64> {
        None
    }
}

fn check(x: &State, schema: &StateSchema, what: &str) -> Result<()> {
    if **x.schema() != *schema {
        return Err(Error::Schema(format!("{what} state {} does not match {}", x.schema(), schema)));
    }
    Ok(())
}

fn schema_of(vars: &[(&str, FieldKind)]) -> Arc<StateSchema> {
    Arc::new(StateSchema::of(vars).expect("map schema"))
}

/// `F o pi` with chain-rule derivative.
pub struct Pullback {
    pub map: Arc<dyn ProjectionMap>,
    pub inner: Arc<dyn Functional>,
}

impl Functional for Pullback {
    fn name(&self) -> String {
        format!("{} o {}", self.inner.name(), self.map.name())
    }

    fn evaluate(&self, x: &State) -> Result<f64> {
        self.inner.evaluate(&self.map.project(x)?)
    }

    fn derivative(&self, x: &State) -> Result<State> {
        let y = self.map.project(x)?;
        self.map.pullback_derivative(x, &self.inner.derivative(&y)?)
    }
}

// ---------------------------------------------------------------- identity

pub struct Identity {
    schema: Arc<StateSchema>,
}

pub fn identity(schema: Arc<StateSchema>) -> Identity {
    Identity { schema }
}

impl ProjectionMap for Identity {
    fn name(&self) -> String {
        "identity".into()
    }
    fn fine_schema(&self) -> Arc<StateSchema> {
        self.schema.clone()
    }
    fn coarse_schema(&self) -> Arc<StateSchema> {
        self.schema.clone()
    }
    fn project(&self, x: &State) -> Result<State> {
        Ok(x.clone())
    }
    fn pullback_derivative(&self, _x: &State, dc: &State) -> Result<State> {
        Ok(dc.clone())
    }
    fn push_tangent(&self, _x: &State, v: &State) -> Result<State> {
        Ok(v.clone())
    }
}

// ---------------------------------------------------------------- kinetic

/// Entropy density `sigma(f)` of the kinetic entropy moment.
#[derive(Clone)]
pub enum Sigma {
    /// `-f ln f`, with `sigma(0) = 0`.
    Boltzmann,
    Custom {
        value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Sigma {
    pub fn value(&self, f: f64) -> Result<f64> {
        match self {
            Sigma::Boltzmann => {
                if f < 0.0 {
                    Err(Error::InvalidState(format!("entropy density needs f >= 0, found {f}")))
                } else if f == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(-f * f.ln())
                }
            }
            Sigma::Custom { value, .. } => Ok(value(f)),
        }
    }

    pub fn derivative(&self, f: f64) -> Result<f64> {
        match self {
            Sigma::Boltzmann => {
                if f <= 0.0 {
                    Err(Error::InvalidState(format!("entropy derivative needs f > 0, found {f}")))
                } else {
                    Ok(-f.ln() - 1.0)
                }
            }
            Sigma::Custom { derivative, .. } => Ok(derivative(f)),
        }
    }
}

/// `f -> (u, rho, s)` with `rho = m int f dp`, `u = int p f dp`,
/// `s = int sigma(f) dp`, per spatial cell.
///
/// The momentum weight in `u` is the periodized coordinate of the momentum
/// box (equal to `p` away from the seam), which keeps the map compatible
/// with periodic momentum derivatives.
pub struct PlasmaToFluid {
    pub mass: f64,
    pub sigma: Sigma,
    f: String,
}

pub fn plasma_to_fluid(mass: f64) -> PlasmaToFluid {
    PlasmaToFluid {
        mass,
        sigma: Sigma::Boltzmann,
        f: "f".into(),
    }
}

impl ProjectionMap for PlasmaToFluid {
    fn name(&self) -> String {
        "plasma_to_fluid".into()
    }

    fn fine_schema(&self) -> Arc<StateSchema> {
        schema_of(&[(&self.f, FieldKind::Phase)])
    }

    fn coarse_schema(&self) -> Arc<StateSchema> {
        brackets::hydro().schema()
    }

    fn coarse_domain(&self, fine: &Arc<Domain>) -> Arc<Domain> {
        fine.spatial_part()
    }

    fn project(&self, x: &State) -> Result<State> {
        check(x, &self.fine_schema(), "fine")?;
        let pg = x.domain().phase()?;
        let f = x.phase(&self.f)?;
        let mut y = State::zeros(&self.coarse_domain(x.domain()), &self.coarse_schema())?;
        y.set("rho", pg.momentum_integral(f).iter().map(|v| v * self.mass).collect())?;
        let u: [Vec<f64>; 3] = std::array::from_fn(|i| pg.momentum_integral(&mul(&pg.periodized_momentum(i), f)));
        y.set_vector("u", u)?;
        let sig: Vec<f64> = f.iter().map(|&v| self.sigma.value(v)).collect::<Result<_>>()?;
        y.set("s", pg.momentum_integral(&sig))?;
        Ok(y)
    }

    fn pullback_derivative(&self, x: &State, dc: &State) -> Result<State> {
        let pg = x.domain().phase()?;
        let mut d = pg.broadcast(dc.scalar("rho")?);
        d.iter_mut().for_each(|v| *v *= self.mass);
        let du = dc.vector("u")?;
        for i in 0..3 {
            add(&mut d, 1.0, &mul(&pg.periodized_momentum(i), &pg.broadcast(du[i])));
        }
        let ds = dc.scalar("s")?;
        if ds.iter().any(|v| *v != 0.0) {
            let sp: Vec<f64> = x.phase(&self.f)?.iter().map(|&v| self.sigma.derivative(v)).collect::<Result<_>>()?;
            add(&mut d, 1.0, &mul(&sp, &pg.broadcast(ds)));
        }
        let mut out = x.zeros_like();
        out.set(&self.f, d)?;
        Ok(out)
    }

    fn push_tangent(&self, x: &State, v: &State) -> Result<State> {
        let pg = x.domain().phase()?;
        let fdot = v.phase(&self.f)?;
        let mut y = State::zeros(&self.coarse_domain(x.domain()), &self.coarse_schema())?;
        y.set("rho", pg.momentum_integral(fdot).iter().map(|a| a * self.mass).collect())?;
        let u: [Vec<f64>; 3] = std::array::from_fn(|i| pg.momentum_integral(&mul(&pg.periodized_momentum(i), fdot)));
        y.set_vector("u", u)?;
        let sp: Vec<f64> = x.phase(&self.f)?.iter().map(|&a| self.sigma.derivative(a)).collect::<Result<_>>()?;
        y.set("s", pg.momentum_integral(&mul(&sp, fdot)))?;
        Ok(y)
    }

    fn strict_exclusions(&self) -> Vec<String> {
        vec!["s".into()]
    }

    fn boundary_mass(&self, x: &State) -> Option<f64> {
        let pg = x.domain().phase().ok()?;
        Some(pg.boundary_mass(x.phase(&self.f).ok()?))
    }
}

// ---------------------------------------------------------------- fields

/// `(rho, u, s, E, B) -> (rho, M = u + eps0 E x B, s, E, B)`, or its inverse.
pub struct MomentumShift {
    pub eps0: f64,
    inverse: bool,
}

pub fn momentum_shift(eps0: f64) -> MomentumShift {
    MomentumShift { eps0, inverse: false }
}

pub fn momentum_shift_inverse(eps0: f64) -> MomentumShift {
    MomentumShift { eps0, inverse: true }
}

impl MomentumShift {
    fn sign(&self) -> f64 {
        if self.inverse {
            -self.eps0
        } else {
            self.eps0
        }
    }

    fn source_target(&self) -> (&'static str, &'static str) {
        if self.inverse {
            ("M", "u")
        } else {
            ("u", "M")
        }
    }
}

impl ProjectionMap for MomentumShift {
    fn name(&self) -> String {
        if self.inverse { "momentum_shift_inverse" } else { "momentum_shift" }.into()
    }

    fn fine_schema(&self) -> Arc<StateSchema> {
        if self.inverse {
            brackets::emhd_total().schema()
        } else {
            brackets::emhd().schema()
        }
    }

    fn coarse_schema(&self) -> Arc<StateSchema> {
        if self.inverse {
            brackets::emhd().schema()
        } else {
            brackets::emhd_total().schema()
        }
    }

    fn project(&self, x: &State) -> Result<State> {
        check(x, &self.fine_schema(), "fine")?;
        let (_, to) = self.source_target();
        let mut y = x.relabel(&self.coarse_schema())?;
        let exb = cross(x.vector("E")?, x.vector("B")?);
        y.add_vector(to, self.sign(), &exb)?;
        Ok(y)
    }

    fn pullback_derivative(&self, x: &State, dc: &State) -> Result<State> {
        let (_, to) = self.source_target();
        let a = dc.vector(to)?;
        let mut d = dc.relabel(x.schema())?;
        // d/dE (E x B) . a = B x a, d/dB (E x B) . a = a x E.
        d.add_vector("E", self.sign(), &cross(x.vector("B")?, a))?;
        d.add_vector("B", self.sign(), &cross(a, x.vector("E")?))?;
        Ok(d)
    }

    fn push_tangent(&self, x: &State, v: &State) -> Result<State> {
        let (_, to) = self.source_target();
        let mut y = v.relabel(&self.coarse_schema())?;
        y.add_vector(to, self.sign(), &cross(v.vector("E")?, x.vector("B")?))?;
        y.add_vector(to, self.sign(), &cross(x.vector("E")?, v.vector("B")?))?;
        Ok(y)
    }
}

// ---------------------------------------------------------------- binary

/// Sums the two momenta and entropies of a two-fluid state; densities and
/// any field variables pass through.
pub struct BinarySum {
    name: String,
    fine: Arc<StateSchema>,
    coarse: Arc<StateSchema>,
}

/// `hydro_binary -> classical_binary`.
pub fn binary_sum() -> BinarySum {
    BinarySum {
        name: "binary_sum".into(),
        fine: brackets::hydro_binary().schema(),
        coarse: brackets::classical_binary().schema(),
    }
}

/// `bemhd -> cbemhd`.
pub fn charged_binary_sum() -> BinarySum {
    BinarySum {
        name: "charged_binary_sum".into(),
        fine: brackets::bemhd().schema(),
        coarse: brackets::cbemhd().schema(),
    }
}

const SUMMED: [(&str, &str, &str); 2] = [("u", "u1", "u2"), ("s", "s1", "s2")];

impl ProjectionMap for BinarySum {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn fine_schema(&self) -> Arc<StateSchema> {
        self.fine.clone()
    }

    fn coarse_schema(&self) -> Arc<StateSchema> {
        self.coarse.clone()
    }

    fn project(&self, x: &State) -> Result<State> {
        check(x, &self.fine, "fine")?;
        self.push_tangent(x, x)
    }

    fn pullback_derivative(&self, _x: &State, dc: &State) -> Result<State> {
        let mut d = dc.project_onto(&self.fine)?;
        for (c, a, b) in SUMMED {
            let v = dc.field(c)?.to_vec();
            d.set(a, v.clone())?;
            d.set(b, v)?;
        }
        Ok(d)
    }

    fn push_tangent(&self, _x: &State, v: &State) -> Result<State> {
        let mut y = v.project_onto(&self.coarse)?;
        for (c, a, b) in SUMMED {
            let mut s = v.field(a)?.to_vec();
            add(&mut s, 1.0, v.field(b)?);
            y.set(c, s)?;
        }
        Ok(y)
    }
}

/// `classical_binary (u, rho1, rho2, s) -> hydro (u, rho = rho1 + rho2, s)`.
pub struct TotalDensity;

pub fn total_density() -> TotalDensity {
    TotalDensity
}

impl ProjectionMap for TotalDensity {
    fn name(&self) -> String {
        "total_density".into()
    }

    fn fine_schema(&self) -> Arc<StateSchema> {
        brackets::classical_binary().schema()
    }

    fn coarse_schema(&self) -> Arc<StateSchema> {
        brackets::hydro().schema()
    }

    fn project(&self, x: &State) -> Result<State> {
        check(x, &self.fine_schema(), "fine")?;
        self.push_tangent(x, x)
    }

    fn pullback_derivative(&self, _x: &State, dc: &State) -> Result<State> {
        let mut d = dc.project_onto(&self.fine_schema())?;
        let r = dc.scalar("rho")?.to_vec();
        d.set("rho1", r.clone())?;
        d.set("rho2", r)?;
        Ok(d)
    }

    fn push_tangent(&self, _x: &State, v: &State) -> Result<State> {
        let mut y = v.project_onto(&self.coarse_schema())?;
        let mut r = v.scalar("rho1")?.to_vec();
        add(&mut r, 1.0, v.scalar("rho2")?);
        y.set("rho", r)?;
        Ok(y)
    }
}

/// Exact names accepted by [`by_name`].
pub const MAPS: [&str; 7] = [
    "identity",
    "plasma_to_fluid",
    "momentum_shift",
    "momentum_shift_inverse",
    "binary_sum",
    "charged_binary_sum",
    "total_density",
];

/// Map by name. `identity` needs the schema it acts on.
pub fn by_name(name: &str, k: &Constants, schema: Option<Arc<StateSchema>>) -> Result<Arc<dyn ProjectionMap>> {
    Ok(match name {
        "identity" => Arc::new(identity(
            schema.ok_or_else(|| Error::Config("identity map needs a schema".into()))?,
        )),
        "plasma_to_fluid" => Arc::new(plasma_to_fluid(k.species(0)?.m)),
        "momentum_shift" => Arc::new(momentum_shift(k.eps0)),
        "momentum_shift_inverse" => Arc::new(momentum_shift_inverse(k.eps0)),
        "binary_sum" => Arc::new(binary_sum()),
        "charged_binary_sum" => Arc::new(charged_binary_sum()),
        "total_density" => Arc::new(total_density()),
        _ => {
            return Err(Error::UnknownName {
                kind: "projection",
                name: name.to_string(),
            })
        }
    })
}

#[derive(Debug, Clone)]
pub struct PoissonMapReport {
    pub map: String,
    pub fine: String,
    pub coarse: String,
    /// Worst `|{F,H}_c - {F o pi, H o pi}_f| / (1 + |{F,H}_c|)`.
    pub max_relative: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub boundary_mass: Option<f64>,
    pub excluded: Vec<String>,
}

impl PoissonMapReport {
    pub fn passed(&self) -> bool {
        self.max_relative < self.tolerance
    }
}

impl fmt::Display for PoissonMapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "map {} : {} -> {}", self.map, self.fine, self.coarse)?;
        writeln!(f, "samples {}", self.samples)?;
        if !self.excluded.is_empty() {
            writeln!(f, "excluded coarse variables {}", self.excluded.join(","))?;
        }
        writeln!(f, "max relative residual {:.3e} (tol {:.1e})", self.max_relative, self.tolerance)?;
        if let Some(b) = self.boundary_mass {
            writeln!(f, "momentum boundary mass {b:.3e}")?;
        }
        write!(f, "verdict {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Strict tolerance; maps with a truncated momentum box use [`KINETIC_TOL`].
pub const STRICT_TOL: f64 = 1e-8;
pub const KINETIC_TOL: f64 = 1e-5;

/// Poisson-map test on the given fine states with coarse suite functionals
/// (pairs of distinct members; excluded coarse variables zeroed).
pub fn verify_poisson_map(
    map: &dyn ProjectionMap,
    fine: &dyn Bracket,
    coarse: &dyn Bracket,
    k: &Constants,
    states: &[State],
    seed: u64,
) -> Result<PoissonMapReport> {
    if *fine.schema() != *map.fine_schema() {
        return Err(Error::Schema(format!(
            "map `{}` expects fine {}, bracket `{}` has {}",
            map.name(),
            map.fine_schema(),
            fine.name(),
            fine.schema()
        )));
    }
    if *coarse.schema() != *map.coarse_schema() {
        return Err(Error::Schema(format!(
            "map `{}` expects coarse {}, bracket `{}` has {}",
            map.name(),
            map.coarse_schema(),
            coarse.name(),
            coarse.schema()
        )));
    }
    let excluded = map.strict_exclusions();
    let cs = map.coarse_schema();
    let kept: Vec<_> = cs.vars().iter().filter(|v| !excluded.contains(&v.name)).cloned().collect();
    let sub = Arc::new(StateSchema::new(kept)?);
    let mut worst: f64 = 0.0;
    let mut boundary: Option<f64> = None;
    let mut samples = 0;
    for x in states {
        if let Some(b) = map.boundary_mass(x) {
            boundary = Some(boundary.map_or(b, |c: f64| c.max(b)));
        }
        let y = map.project(x)?;
        let suite = test_functional_suite(y.domain(), &sub, seed)?;
        let d: Vec<State> = suite
            .iter()
            .map(|f| f.derivative(&y.project_onto(&sub)?)?.project_onto(&cs))
            .collect::<Result<_>>()?;
        let pulled: Vec<State> = d.iter().map(|dc| map.pullback_derivative(x, dc)).collect::<Result<_>>()?;
        for i in 0..d.len() {
            for j in (i + 1)..d.len() {
                let lhs = coarse.value(k, &y, &d[i], &d[j])?;
                let rhs = fine.value(k, x, &pulled[i], &pulled[j])?;
                worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
                samples += 1;
            }
        }
    }
    let kinetic = fine.schema().has_phase();
    Ok(PoissonMapReport {
        map: map.name(),
        fine: fine.name(),
        coarse: coarse.name(),
        max_relative: worst,
        samples,
        tolerance: if kinetic { KINETIC_TOL } else { STRICT_TOL },
        boundary_mass: boundary,
        excluded,
    })
}

/// `max |coarse(pi x) dH - J fine(x) J^T dH| / (1 + max |coarse(pi x) dH|)`:
/// the pushforward of the fine vector field against the coarse one.
pub fn pushforward_residual(
    map: &dyn ProjectionMap,
    fine: &dyn Bracket,
    coarse: &dyn Bracket,
    k: &Constants,
    x: &State,
    dh: &State,
) -> Result<f64> {
    let y = map.project(x)?;
    let direct = coarse.apply(k, &y, dh)?;
    let pushed = map.push_tangent(x, &fine.apply(k, x, &map.pullback_derivative(x, dh)?)?)?;
    let mut diff = direct.clone();
    diff.axpy(-1.0, &pushed)?;
    Ok(diff.max_abs() / (1.0 + direct.max_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{numeric_derivative, random_state, AnalyticFunctional};
    use crate::grid::{Grid3, PhaseGrid};

    fn field_domain() -> Arc<Domain> {
        Domain::spatial(Grid3::new([5, 4, 1], [1.0, 1.0, 1.0]).unwrap())
    }

    #[test]
    fn momentum_shift_uniform_cross_product() {
        let m = momentum_shift(1.0);
        let d = field_domain();
        let mut x = State::zeros(&d, &m.fine_schema()).unwrap();
        x.set("rho", vec![1.0; 20]).unwrap();
        x.set_vector("E", [vec![1.0; 20], vec![0.0; 20], vec![0.0; 20]]).unwrap();
        x.set_vector("B", [vec![0.0; 20], vec![1.0; 20], vec![0.0; 20]]).unwrap();
        let y = m.project(&x).unwrap();
        let mv = y.vector("M").unwrap();
        assert!(mv[0].iter().chain(mv[1]).all(|v| *v == 0.0));
        assert!(mv[2].iter().all(|v| *v == 1.0));
    }

    #[test]
    fn momentum_shift_round_trip() {
        let d = field_domain();
        let m = momentum_shift(0.7);
        let x = random_state(&d, &m.fine_schema(), 4, 1, 0.5).unwrap();
        let back = momentum_shift_inverse(0.7).project(&m.project(&x).unwrap()).unwrap();
        let mut diff = back.clone();
        diff.axpy(-1.0, &x.relabel(back.schema()).unwrap()).unwrap();
        assert!(diff.max_abs() < 1e-14);
    }

    #[test]
    fn pullback_matches_numeric_chain_rule() {
        let d = field_domain();
        let m: Arc<dyn ProjectionMap> = Arc::new(momentum_shift(1.3));
        let x = random_state(&d, &m.fine_schema(), 2, 1, 0.5).unwrap();
        let suite = test_functional_suite(&d, &m.coarse_schema(), 3).unwrap();
        for f in suite.into_iter().skip(4).take(3) {
            let pb = Pullback {
                map: m.clone(),
                inner: Arc::new(f),
            };
            let analytic = pb.derivative(&x).unwrap();
            let numeric = numeric_derivative(&|s| pb.evaluate(s), &x, 1e-5).unwrap();
            let mut diff = analytic.clone();
            diff.axpy(-1.0, &numeric).unwrap();
            assert!(diff.max_abs() < 1e-6 * (1.0 + analytic.max_abs()), "{}", diff.max_abs());
        }
    }

    #[test]
    fn binary_sum_symmetric_and_zero() {
        let d = field_domain();
        let m = binary_sum();
        let mut x = random_state(&d, &m.fine_schema(), 1, 1, 0.3).unwrap();
        let u1 = x.field("u1").unwrap().to_vec();
        x.set("u2", u1.clone()).unwrap();
        let y = m.project(&x).unwrap();
        assert!(y.field("u").unwrap().iter().zip(&u1).all(|(a, b)| *a == 2.0 * b));
        let z = m.project(&x.zeros_like()).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn identity_map_has_zero_residual() {
        let d = field_domain();
        let h = brackets::hydro();
        let xs = vec![random_state(&d, &h.schema(), 0, 1, 0.3).unwrap()];
        let r = verify_poisson_map(&identity(h.schema()), &h, &h, &Constants::default(), &xs, 0).unwrap();
        assert_eq!(r.max_relative, 0.0);
        assert!(r.passed());
    }

    #[test]
    fn plasma_moments_of_zero_and_positivity() {
        let pg = PhaseGrid::new(Grid3::new([4, 1, 1], [1.0; 3]).unwrap(), [8, 1, 1], [4.0; 3]).unwrap();
        let d = Domain::with_phase(pg);
        let m = plasma_to_fluid(1.0);
        let x = State::zeros(&d, &m.fine_schema()).unwrap();
        assert_eq!(m.project(&x).unwrap().max_abs(), 0.0);
        let mut neg = x.clone();
        neg.field_mut("f").unwrap()[0] = -1.0;
        assert!(matches!(m.project(&neg), Err(Error::InvalidState(_))));
        let ent = AnalyticFunctional::integral("s");
        let pb = Pullback {
            map: Arc::new(plasma_to_fluid(1.0)),
            inner: Arc::new(ent),
        };
        assert!(pb.derivative(&x).is_err());
    }

    #[test]
    fn unknown_map_rejected() {
        assert!(matches!(
            by_name("nosuch", &Constants::default(), None),
            Err(Error::UnknownName { .. })
        ));
    }
}
