//! Hamiltonians, RK4 time stepping and monitored runs of `x_dot = L(x) dH`.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::brackets::ops::{add, cross, dot3, mul, mul3, refs};
use crate::brackets::{self, Bracket};
use crate::config::{InitialCondition, RunConfig};
use crate::error::{Error, Result};
use crate::functional::{AnalyticFunctional, Functional};
use crate::state::{Constants, Domain, State};

/// Parameters of `eps(rho, s) = K rho^gamma exp(s / (c_v rho))`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EosParams {
    pub gamma: f64,
    pub k: f64,
    pub cv: f64,
}

impl Default for EosParams {
    fn default() -> Self {
        Self {
            gamma: 5.0 / 3.0,
            k: 1.0,
            cv: 1.0,
        }
    }
}

/// Energy density, its partials and the pressure `-eps + rho eps_rho + s eps_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eos {
    pub e: f64,
    pub e_rho: f64,
    pub e_s: f64,
    pub p: f64,
}

pub fn eos_ideal(rho: f64, s: f64, params: &EosParams) -> Result<Eos> {
    if !(rho > 0.0) {
        return Err(Error::InvalidState(format!("density must be positive, found {rho}")));
    }
    let EosParams { gamma, k, cv } = *params;
    let e = k * rho.powf(gamma) * (s / (cv * rho)).exp();
    let e_rho = e * (gamma / rho - s / (cv * rho * rho));
    let e_s = e / (cv * rho);
    Ok(Eos {
        e,
        e_rho,
        e_s,
        p: -e + rho * e_rho + s * e_s,
    })
}

fn eos_fields(rho: &[f64], s: &[f64], params: &EosParams) -> Result<Vec<Eos>> {
    rho.iter().zip(s).map(|(&r, &s)| eos_ideal(r, s, params)).collect()
}

/// Hamiltonian parameters beyond the physical constants.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct HamiltonianParams {
    pub eos: EosParams,
    /// Coefficient `a` of the sample interaction energy `a int rho1 rho2`.
    pub interaction: f64,
}

type Assemble = dyn Fn(&State, &mut f64, &mut State) -> Result<()> + Send + Sync;

/// One additive piece of a Hamiltonian: adds its energy and derivative.
trait Term: Fn(&State, &mut f64, &mut State) -> Result<()> + Send + Sync + 'static {}
impl<T: Fn(&State, &mut f64, &mut State) -> Result<()> + Send + Sync + 'static> Term for T {}

/// A Hamiltonian as a sum of terms, each adding its energy and derivative.
#[derive(Clone)]
pub struct Hamiltonian {
    name: String,
    terms: Vec<Arc<Assemble>>,
}

impl Hamiltonian {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            terms: Vec::new(),
        }
    }

    fn term(mut self, f: impl Term) -> Self {
        self.terms.push(Arc::new(f));
        self
    }

    fn both(&self, x: &State) -> Result<(f64, State)> {
        let mut e = 0.0;
        let mut d = x.zeros_like();
        for t in &self.terms {
            t(x, &mut e, &mut d)?;
        }
        Ok((e, d))
    }

    pub fn as_functional(&self) -> AnalyticFunctional {
        let (a, b) = (self.clone(), self.clone());
        AnalyticFunctional::new(self.name.clone(), move |x| a.evaluate(x), move |x| b.derivative(x))
    }
}

impl Functional for Hamiltonian {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, x: &State) -> Result<f64> {
        Ok(self.both(x)?.0)
    }

    fn derivative(&self, x: &State) -> Result<State> {
        Ok(self.both(x)?.1)
    }
}

fn weight(x: &State) -> f64 {
    x.space().quad_weight()
}

/// `1/2 int (eps0 E^2 + B^2 / mu0)`.
fn em_term(k: &Constants, e: &'static str, b: &'static str) -> impl Term {
    let (eps0, mu0) = (k.eps0, k.mu0);
    move |x, energy, d| {
        let w = weight(x);
        let ev = x.vector(e)?;
        let bv = x.vector(b)?;
        *energy += 0.5 * w * (eps0 * dot3(ev, ev).iter().sum::<f64>() + dot3(bv, bv).iter().sum::<f64>() / mu0);
        d.add_vector(e, eps0, &ev.map(|c| c.to_vec()))?;
        d.add_vector(b, 1.0 / mu0, &bv.map(|c| c.to_vec()))?;
        Ok(())
    }
}

/// `int |u|^2 / 2 rho + eps(rho, s)` where `rho` is the sum of `rhos`.
fn fluid_term(
    params: EosParams,
    u: &'static str,
    rhos: &'static [&'static str],
    s: &'static str,
) -> impl Term {
    move |x, energy, d| {
        let w = weight(x);
        let mut rho = x.scalar(rhos[0])?.to_vec();
        for r in &rhos[1..] {
            add(&mut rho, 1.0, x.scalar(r)?);
        }
        let sv = x.scalar(s)?;
        let uv = x.vector(u)?;
        let eos = eos_fields(&rho, sv, &params)?;
        let u2 = dot3(uv, uv);
        *energy += w * u2.iter().zip(&rho).zip(&eos).map(|((q, r), e)| 0.5 * q / r + e.e).sum::<f64>();
        let inv: Vec<f64> = rho.iter().map(|r| 1.0 / r).collect();
        d.add_vector(u, 1.0, &mul3(&inv, uv))?;
        let hr: Vec<f64> = u2.iter().zip(&rho).zip(&eos).map(|((q, r), e)| -0.5 * q / (r * r) + e.e_rho).collect();
        for r in rhos {
            d.add_to(r, 1.0, &hr)?;
        }
        d.add_to(s, 1.0, &eos.iter().map(|e| e.e_s).collect::<Vec<_>>())?;
        Ok(())
    }
}

/// `int f h` with the kinetic profile `h` of species mass `m`.
fn kinetic_term(m: f64, f: &'static str) -> impl Term {
    move |x, energy, d| {
        let pg = x.domain().phase()?;
        let h = pg.kinetic_profile(m);
        *energy += pg.integrate(&mul(x.phase(f)?, &h));
        d.add_to(f, 1.0, &h)?;
        Ok(())
    }
}

/// Total-momentum fluid energy `int |M - eps0 E x B|^2 / 2 rho + eps`.
fn shifted_fluid_term(params: EosParams, eps0: f64) -> impl Term {
    move |x, energy, d| {
        let w = weight(x);
        let rho = x.scalar("rho")?;
        let sv = x.scalar("s")?;
        let ev = x.vector("E")?;
        let bv = x.vector("B")?;
        let mut wv: [Vec<f64>; 3] = x.vector("M")?.map(|c| c.to_vec());
        let exb = cross(ev, bv);
        for i in 0..3 {
            add(&mut wv[i], -eps0, &exb[i]);
        }
        let eos = eos_fields(rho, sv, &params)?;
        let w2 = dot3(refs(&wv), refs(&wv));
        *energy += w * w2.iter().zip(rho).zip(&eos).map(|((q, r), e)| 0.5 * q / r + e.e).sum::<f64>();
        let inv: Vec<f64> = rho.iter().map(|r| 1.0 / r).collect();
        let vel = mul3(&inv, refs(&wv));
        d.add_vector("M", 1.0, &vel)?;
        d.add_to("rho", 1.0, &w2.iter().zip(rho).zip(&eos).map(|((q, r), e)| -0.5 * q / (r * r) + e.e_rho).collect::<Vec<_>>())?;
        d.add_to("s", 1.0, &eos.iter().map(|e| e.e_s).collect::<Vec<_>>())?;
        d.add_vector("E", -eps0, &cross(bv, refs(&vel)))?;
        d.add_vector("B", -eps0, &cross(refs(&vel), ev))?;
        Ok(())
    }
}

/// `a int rho1 rho2`.
fn interaction_term(a: f64) -> impl Term {
    move |x, energy, d| {
        if a == 0.0 {
            return Ok(());
        }
        let r1 = x.scalar("rho1")?.to_vec();
        let r2 = x.scalar("rho2")?.to_vec();
        *energy += a * weight(x) * mul(&r1, &r2).iter().sum::<f64>();
        d.add_to("rho1", a, &r2)?;
        d.add_to("rho2", a, &r1)?;
        Ok(())
    }
}

/// Canonical electromagnetic energy in `(A, Y)` with `B = curl A`, `E = -Y`.
fn em_canonical_term(k: &Constants) -> impl Term {
    let (eps0, mu0) = (k.eps0, k.mu0);
    move |x, energy, d| {
        let g = x.space();
        let y = x.vector("Y")?;
        let b = g.curl(x.vector("A")?)?;
        let w = weight(x);
        *energy += 0.5 * w * (eps0 * dot3(y, y).iter().sum::<f64>() + dot3(refs(&b), refs(&b)).iter().sum::<f64>() / mu0);
        d.add_vector("Y", eps0, &y.map(|c| c.to_vec()))?;
        d.add_vector("A", 1.0 / mu0, &g.curl(refs(&b))?)?;
        Ok(())
    }
}

/// Exact names accepted by [`hamiltonian`]; each matches the bracket of
/// the same name.
pub const HAMILTONIANS: [&str; 14] = brackets::CATALOG;

/// Built-in Hamiltonian for the bracket of the same name.
pub fn hamiltonian(name: &str, k: &Constants, p: &HamiltonianParams) -> Result<Hamiltonian> {
    let eos = p.eos;
    let h = Hamiltonian::new(name);
    Ok(match name {
        "em" => h.term(em_term(k, "E", "B")),
        "em_canonical" => h.term(em_canonical_term(k)),
        "vlasov" => h.term(kinetic_term(k.species(0)?.m, "f")),
        "ked" => h.term(kinetic_term(k.species(0)?.m, "f")).term(em_term(k, "E", "B")),
        "ked_binary" => h
            .term(kinetic_term(k.species(0)?.m, "f1"))
            .term(kinetic_term(k.species(1)?.m, "f2"))
            .term(em_term(k, "E", "B")),
        "hydro" => h.term(fluid_term(eos, "u", &["rho"], "s")),
        "hydro_binary" => h
            .term(fluid_term(eos, "u1", &["rho1"], "s1"))
            .term(fluid_term(eos, "u2", &["rho2"], "s2")),
        "classical_binary" => h.term(fluid_term(eos, "u", &["rho1", "rho2"], "s")),
        "mhd" => h.term(fluid_term(eos, "M", &["rho"], "s")).term(magnetic_term(k)),
        "ehd" => h.term(fluid_term(eos, "M", &["rho"], "s")).term(electric_term(k)),
        "emhd" => h.term(fluid_term(eos, "u", &["rho"], "s")).term(em_term(k, "E", "B")),
        "emhd_total" => h.term(shifted_fluid_term(eos, k.eps0)).term(em_term(k, "E", "B")),
        "bemhd" => h
            .term(fluid_term(eos, "u1", &["rho1"], "s1"))
            .term(fluid_term(eos, "u2", &["rho2"], "s2"))
            .term(interaction_term(p.interaction))
            .term(em_term(k, "E", "B")),
        "cbemhd" => h
            .term(fluid_term(eos, "u", &["rho1", "rho2"], "s"))
            .term(interaction_term(p.interaction))
            .term(em_term(k, "E", "B")),
        _ => {
            return Err(Error::UnknownName {
                kind: "hamiltonian",
                name: name.to_string(),
            })
        }
    })
}

/// `int B^2 / 2 mu0`.
fn magnetic_term(k: &Constants) -> impl Term {
    let mu0 = k.mu0;
    move |x, energy, d| {
        let b = x.vector("B")?;
        *energy += 0.5 * weight(x) * dot3(b, b).iter().sum::<f64>() / mu0;
        d.add_vector("B", 1.0 / mu0, &b.map(|c| c.to_vec()))?;
        Ok(())
    }
}

/// `int eps0 E^2 / 2`.
fn electric_term(k: &Constants) -> impl Term {
    let eps0 = k.eps0;
    move |x, energy, d| {
        let e = x.vector("E")?;
        *energy += 0.5 * weight(x) * eps0 * dot3(e, e).iter().sum::<f64>();
        d.add_vector("E", eps0, &e.map(|c| c.to_vec()))?;
        Ok(())
    }
}

// ---------------------------------------------------------------- stepping

fn rhs(b: &dyn Bracket, h: &dyn Functional, k: &Constants, x: &State) -> Result<State> {
    b.apply(k, x, &h.derivative(x)?)
}

fn blow_up(x: &State, step: usize) -> Result<()> {
    match x.first_non_finite() {
        Some(v) => Err(Error::BlowUp {
            step,
            detail: format!("non-finite values in `{v}`"),
        }),
        None => Ok(()),
    }
}

/// One classical RK4 step. Non-finite results are reported as a blow-up at
/// step 1.
pub fn step_rk4(b: &dyn Bracket, h: &dyn Functional, k: &Constants, x: &State, dt: f64) -> Result<State> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let stage = |y: &State| -> Result<State> {
        let r = rhs(b, h, k, y);
        match r {
            Err(Error::InvalidState(m)) if !y.is_finite() => Err(Error::BlowUp { step: 1, detail: m }),
            other => other,
        }
    };
    let k1 = stage(x)?;
    let k2 = stage(&x.plus(0.5 * dt, &k1)?)?;
    let k3 = stage(&x.plus(0.5 * dt, &k2)?)?;
    let k4 = stage(&x.plus(dt, &k3)?)?;
    let mut out = x.clone();
    out.axpy(dt / 6.0, &k1)?;
    out.axpy(dt / 3.0, &k2)?;
    out.axpy(dt / 3.0, &k3)?;
    out.axpy(dt / 6.0, &k4)?;
    blow_up(&out, 1)?;
    Ok(out)
}

/// `steps` RK4 steps; `observe(step, state)` runs before the first step and
/// after every step. Blow-ups carry the absolute step index.
pub fn integrate(
    b: &dyn Bracket,
    h: &dyn Functional,
    k: &Constants,
    x0: &State,
    dt: f64,
    steps: usize,
    mut observe: impl FnMut(usize, &State) -> Result<()>,
) -> Result<State> {
    let mut x = x0.clone();
    observe(0, &x)?;
    for n in 1..=steps {
        x = step_rk4(b, h, k, &x, dt).map_err(|e| match e {
            Error::BlowUp { detail, .. } => Error::BlowUp { step: n, detail },
            other => other,
        })?;
        observe(n, &x)?;
    }
    Ok(x)
}

/// RK4 step for a finite-dimensional system `y' = f(y)`.
pub fn rk4_finite(f: &dyn Fn(&[f64]) -> Vec<f64>, y: &[f64], dt: f64) -> Vec<f64> {
    let ax = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    let k1 = f(y);
    let k2 = f(&ax(y, 0.5 * dt, &k1));
    let k3 = f(&ax(y, 0.5 * dt, &k2));
    let k4 = f(&ax(y, dt, &k3));
    (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

// ---------------------------------------------------------------- runs

/// Monitored time series of a run.
#[derive(Debug, Clone)]
pub struct Series {
    pub columns: Vec<String>,
    /// `(step, values)` with values aligned to `columns[1..]`.
    pub rows: Vec<(usize, Vec<f64>)>,
}

impl Series {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|(_, v)| v[i - 1]).collect())
    }

    /// Largest `|v(t) - v(0)|` of a column, divided by `max(|v(0)|, floor)`.
    pub fn drift(&self, name: &str, floor: f64) -> Option<f64> {
        let c = self.column(name)?;
        let v0 = *c.first()?;
        Some(c.iter().map(|v| (v - v0).abs()).fold(0.0, f64::max) / v0.abs().max(floor))
    }

    pub fn max_of(&self, name: &str) -> Option<f64> {
        Some(self.column(name)?.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    /// Values are written with 17 significant digits so reruns compare
    /// byte for byte.
    pub fn write_csv(&self, out: impl std::io::Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for (step, vals) in &self.rows {
            let mut rec = vec![step.to_string()];
            rec.extend(vals.iter().map(|v| format!("{v:.16e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn read_csv(input: impl std::io::Read) -> Result<Series> {
        let mut r = csv::Reader::from_reader(input);
        let columns: Vec<String> = r.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("bad CSV value `{s}`: {e}")));
            let step = rec
                .get(0)
                .ok_or_else(|| Error::Config("empty CSV row".into()))?
                .parse::<usize>()
                .map_err(|e| Error::Config(format!("bad step: {e}")))?;
            let vals = rec.iter().skip(1).map(parse).collect::<Result<_>>()?;
            rows.push((step, vals));
        }
        Ok(Series { columns, rows })
    }
}

/// Everything a run produces.
pub struct RunOutput {
    pub series: Series,
    pub initial: State,
    pub final_state: State,
    pub dt: f64,
}

/// Executes a run: builds bracket, Hamiltonian and initial state, steps and
/// records time, energy, monitors and constraint max-norms every `stride`
/// steps (and at the last step).
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let k = cfg.constants.clone();
    let b = brackets::by_name(&cfg.bracket)?;
    let h = hamiltonian(cfg.hamiltonian_name(), &k, &cfg.params())?;
    let domain = cfg.domain()?;
    let x0 = initial_state(&cfg.initial, b.as_ref(), &domain, &k, cfg.seed)?;
    let dt = cfg.dt.unwrap_or_else(|| default_dt(&domain, &k));
    let monitors = select_monitors(b.as_ref(), cfg.monitors.casimirs.as_deref())?;
    let constraints = b.constraints();
    let mut columns = vec!["step".to_string(), "time".to_string(), "energy".to_string()];
    columns.extend(monitors.iter().map(|m| format!("monitor:{}", m.name())));
    columns.extend(constraints.iter().map(|c| format!("constraint:{}", c.name)));
    let mut rows = Vec::new();
    let stride = cfg.stride.max(1);
    let steps = cfg.steps;
    let final_state = integrate(b.as_ref(), &h, &k, &x0, dt, steps, |n, x| {
        if n % stride == 0 || n == steps {
            let mut vals = vec![n as f64 * dt, h.evaluate(x)?];
            for m in &monitors {
                vals.push(m.evaluate(x)?);
            }
            for c in &constraints {
                vals.push(c.max_norm(&k, x)?);
            }
            rows.push((n, vals));
        }
        Ok(())
    })?;
    Ok(RunOutput {
        series: Series { columns, rows },
        initial: x0,
        final_state,
        dt,
    })
}

/// `0.1 * min spacing / c`.
pub fn default_dt(domain: &Domain, k: &Constants) -> f64 {
    0.1 * domain.space().min_spacing() / k.c2().sqrt()
}

fn select_monitors(b: &dyn Bracket, names: Option<&[String]>) -> Result<Vec<AnalyticFunctional>> {
    let all = b.casimirs();
    match names {
        None => Ok(all),
        Some(names) => names
            .iter()
            .map(|n| {
                all.iter().find(|c| c.name() == *n).cloned().ok_or_else(|| Error::UnknownName {
                    kind: "monitor",
                    name: n.clone(),
                })
            })
            .collect(),
    }
}

// ---------------------------------------------------------------- initial data

/// Exact Maxwell plane wave `E = (0, A cos k(x - ct), 0)`,
/// `B = (0, 0, A cos k(x - ct) / c)` with `k = 2 pi mode / L_x`.
pub fn maxwell_planewave(domain: &Arc<Domain>, k: &Constants, mode: usize, amplitude: f64, t: f64) -> Result<State> {
    let schema = brackets::em().schema();
    let mut x = State::zeros(domain, &schema)?;
    let g = domain.space();
    let c = k.c2().sqrt();
    let kw = 2.0 * std::f64::consts::PI * mode as f64 / g.lengths()[0];
    let wave = g.sample(|r| amplitude * (kw * (r[0] - c * t)).cos());
    let n = g.len();
    x.set_vector("E", [vec![0.0; n], wave.clone(), vec![0.0; n]])?;
    x.set_vector("B", [vec![0.0; n], vec![0.0; n], wave.iter().map(|v| v / c).collect()])?;
    Ok(x)
}

/// Weighted L2 norm of `a - b`.
pub fn l2_error(a: &State, b: &State) -> Result<f64> {
    let mut d = a.clone();
    d.axpy(-1.0, b)?;
    Ok(d.norm())
}

/// Smooth one-dimensional MHD data varying in `x` only: `rho`, `M_x`, `s`
/// and `B_y`, so `div B = 0`.
pub fn mhd_smooth(domain: &Arc<Domain>, amplitude: f64) -> Result<State> {
    let schema = brackets::mhd().schema();
    let mut x = State::zeros(domain, &schema)?;
    let g = domain.space();
    let l = g.lengths()[0];
    let ph = |r: [f64; 3]| 2.0 * std::f64::consts::PI * r[0] / l;
    let n = g.len();
    x.set("rho", g.sample(|r| 1.0 + amplitude * ph(r).sin()))?;
    x.set("s", g.sample(|r| 0.5 + 0.5 * amplitude * ph(r).cos()))?;
    x.set_vector("M", [g.sample(|r| 0.5 * amplitude * ph(r).cos()), vec![0.0; n], vec![0.0; n]])?;
    x.set_vector("B", [vec![0.0; n], g.sample(|r| 0.5 + 0.5 * amplitude * ph(r).sin()), vec![0.0; n]])?;
    Ok(x)
}

/// Drifting Maxwellian `n(r) exp(-|p - p0|^2 / 2 m T) / (2 pi m T)^{d/2}`
/// on every phase variable, with `n = 1 + a sin(2 pi x / L)`.
pub fn maxwellian(domain: &Arc<Domain>, schema: &Arc<crate::state::StateSchema>, mass: f64, temperature: f64, drift: [f64; 3], amplitude: f64) -> Result<State> {
    let pg = domain.phase()?;
    let mut x = State::zeros(domain, schema)?;
    let l = pg.spatial().lengths()[0];
    let active: Vec<usize> = (0..3).filter(|&i| pg.pdims()[i] > 1).collect();
    let norm = (2.0 * std::f64::consts::PI * mass * temperature).powf(active.len() as f64 / 2.0);
    let f = pg.sample(|r, p| {
        let n = 1.0 + amplitude * (2.0 * std::f64::consts::PI * r[0] / l).sin();
        let q: f64 = active.iter().map(|&i| (p[i] - drift[i]).powi(2)).sum();
        n * (-q / (2.0 * mass * temperature)).exp() / norm
    });
    for v in schema.vars() {
        if v.kind == crate::state::FieldKind::Phase {
            x.set(&v.name, f.clone())?;
        }
    }
    Ok(x)
}

/// Initial state for a run.
pub fn initial_state(
    ic: &InitialCondition,
    b: &dyn Bracket,
    domain: &Arc<Domain>,
    k: &Constants,
    seed: u64,
) -> Result<State> {
    let schema = b.schema();
    let x = match ic.kind.as_str() {
        "zero" => State::zeros(domain, &schema)?,
        "uniform" => crate::functional::random_state(domain, &schema, seed, 0, 0.0)?,
        "random" => {
            let mut x = crate::functional::random_state(domain, &schema, seed, 1, ic.amplitude)?;
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            brackets::dense::make_solenoidal(&mut x, &mut rng)?;
            x
        }
        "maxwell_planewave" => maxwell_planewave(domain, k, ic.mode, ic.amplitude, 0.0)?.project_onto(&schema)?,
        "mhd_smooth" => mhd_smooth(domain, ic.amplitude)?.project_onto(&schema)?,
        "maxwellian" => maxwellian(domain, &schema, k.species(0)?.m, ic.temperature, ic.drift, ic.amplitude)?,
        other => {
            return Err(Error::UnknownName {
                kind: "initial condition",
                name: other.to_string(),
            })
        }
    };
    if **x.schema() != *schema {
        return Err(Error::Schema(format!(
            "initial condition `{}` does not provide {}",
            ic.kind, schema
        )));
    }
    Ok(x)
}

/// Writes `series.csv` and `final.snap` into `dir`.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    out.series.write_csv_file(&dir.join("series.csv"))?;
    out.final_state.write_snapshot(&dir.join("final.snap"))?;
    Ok(())
}
