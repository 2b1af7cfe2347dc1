//! Functionals `F[x]` and their variational derivatives.
//!
//! Derivatives are densities with respect to the quadrature pairing: the
//! Gateaux derivative of `F` along `v` equals `dF.dot(v)`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::{Domain, FieldKind, State, StateSchema};

pub trait Functional: Send + Sync {
    fn name(&self) -> String;
    fn evaluate(&self, x: &State) -> Result<f64>;
    fn derivative(&self, x: &State) -> Result<State>;
}

/// Default relative step of [`numeric_derivative`].
pub const DEFAULT_STEP: f64 = 1e-5;

/// Central-difference functional derivative, one coefficient at a time, with
/// step `h (1 + |x_i|)` and division by the coefficient's quadrature weight.
pub fn numeric_derivative(
    f: &dyn Fn(&State) -> Result<f64>,
    x: &State,
    h: f64,
) -> Result<State> {
    if !(h > 0.0) {
        return Err(Error::Numerical(format!("step must be positive, got {h}")));
    }
    let base = x.to_flat();
    let weights = x.flat_weights();
    let mut probe = x.clone();
    let mut out = vec![0.0; base.len()];
    let mut flat = base.clone();
    for i in 0..base.len() {
        let step = h * (1.0 + base[i].abs());
        flat[i] = base[i] + step;
        probe.assign_flat(&flat)?;
        let plus = f(&probe)?;
        flat[i] = base[i] - step;
        probe.assign_flat(&flat)?;
        let minus = f(&probe)?;
        flat[i] = base[i];
        let d = (plus - minus) / (2.0 * step) / weights[i];
        if !d.is_finite() {
            return Err(Error::Numerical(format!("non-finite derivative at coefficient {i}")));
        }
        out[i] = d;
    }
    let mut res = x.zeros_like();
    res.assign_flat(&out)?;
    Ok(res)
}

/// Absolute gap between the central difference of `F` along `v` at step
/// `eps` and the pairing `dF.dot(v)`.
pub fn linearization_residual(f: &dyn Functional, x: &State, v: &State, eps: f64) -> Result<f64> {
    let fd = (f.evaluate(&x.plus(eps, v)?)? - f.evaluate(&x.plus(-eps, v)?)?) / (2.0 * eps);
    Ok((fd - f.derivative(x)?.dot(v)?).abs())
}

type EvalFn = dyn Fn(&State) -> Result<f64> + Send + Sync;
type DerivFn = dyn Fn(&State) -> Result<State> + Send + Sync;

/// Functional given by closed-form evaluation and derivative closures.
#[derive(Clone)]
pub struct AnalyticFunctional {
    name: String,
    eval: Arc<EvalFn>,
    deriv: Arc<DerivFn>,
}

impl AnalyticFunctional {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&State) -> Result<f64> + Send + Sync + 'static,
        deriv: impl Fn(&State) -> Result<State> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
        }
    }

    /// `int x_var dr` summed over components, for scalar, vector or phase
    /// variables. Derivative is the constant one field on that variable.
    pub fn integral(var: &str) -> Self {
        let (v1, v2) = (var.to_string(), var.to_string());
        Self::new(
            format!("int {var}"),
            move |x| moment(x, &v1, |a| a),
            move |x| {
                let mut d = x.zeros_like();
                let n = x.field(&v2)?.len();
                d.set(&v2, vec![1.0; n])?;
                Ok(d)
            },
        )
    }

    /// `int x_var^k dr` for a scalar or phase variable.
    pub fn power_integral(var: &str, k: i32) -> Self {
        let (v1, v2) = (var.to_string(), var.to_string());
        Self::new(
            format!("int {var}^{k}"),
            move |x| moment(x, &v1, |a| a.powi(k)),
            move |x| {
                let mut d = x.zeros_like();
                let vals = x.field(&v2)?.iter().map(|a| k as f64 * a.powi(k - 1)).collect();
                d.set(&v2, vals)?;
                Ok(d)
            },
        )
    }
}

fn moment(x: &State, var: &str, g: impl Fn(f64) -> f64) -> Result<f64> {
    let kind = x
        .schema()
        .get(var)
        .ok_or_else(|| Error::Schema(format!("no variable `{var}`")))?
        .kind;
    let w = x.domain().weight(kind)?;
    Ok(x.field(var)?.iter().map(|&a| g(a)).sum::<f64>() * w)
}

impl Functional for AnalyticFunctional {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, x: &State) -> Result<f64> {
        (self.eval)(x)
    }

    fn derivative(&self, x: &State) -> Result<State> {
        (self.deriv)(x)
    }
}

/// Real-number product `F G`; its derivative is `F dG + G dF`.
pub struct Product<'a>(pub &'a dyn Functional, pub &'a dyn Functional);

impl Functional for Product<'_> {
    fn name(&self) -> String {
        format!("({})*({})", self.0.name(), self.1.name())
    }

    fn evaluate(&self, x: &State) -> Result<f64> {
        Ok(self.0.evaluate(x)? * self.1.evaluate(x)?)
    }

    fn derivative(&self, x: &State) -> Result<State> {
        let mut d = self.1.derivative(x)?.scaled(self.0.evaluate(x)?);
        d.axpy(self.1.evaluate(x)?, &self.0.derivative(x)?)?;
        Ok(d)
    }
}

/// Member of the pseudo-random verification family. Each has a closed-form
/// derivative and second variation.
#[derive(Clone, Debug)]
pub enum TestFunctional {
    /// `<w, x>`.
    Linear { w: State },
    /// `1/2 <x, k x> + <a, x><b, x>` with pointwise kernel `k`.
    Quadratic { k: State, a: State, b: State },
    /// `1/3 <c, x^3>` pointwise.
    Cubic { c: State },
}

fn hadamard(a: &State, b: &State) -> Result<State> {
    let mut out = a.zeros_like();
    out.assign_flat(&a.to_flat().iter().zip(b.to_flat()).map(|(p, q)| p * q).collect::<Vec<_>>())?;
    Ok(out)
}

impl TestFunctional {
    pub fn kind(&self) -> &'static str {
        match self {
            TestFunctional::Linear { .. } => "linear",
            TestFunctional::Quadratic { .. } => "quadratic",
            TestFunctional::Cubic { .. } => "cubic",
        }
    }

    /// Second variation applied to `v`, as a density.
    pub fn hessian_apply(&self, x: &State, v: &State) -> Result<State> {
        match self {
            TestFunctional::Linear { w } => Ok(w.zeros_like()),
            TestFunctional::Quadratic { k, a, b } => {
                let mut out = hadamard(k, v)?;
                out.axpy(b.dot(v)?, a)?;
                out.axpy(a.dot(v)?, b)?;
                Ok(out)
            }
            TestFunctional::Cubic { c } => Ok(hadamard(&hadamard(c, x)?, v)?.scaled(2.0)),
        }
    }
}

impl Functional for TestFunctional {
    fn name(&self) -> String {
        self.kind().to_string()
    }

    fn evaluate(&self, x: &State) -> Result<f64> {
        match self {
            TestFunctional::Linear { w } => w.dot(x),
            TestFunctional::Quadratic { k, a, b } => {
                Ok(0.5 * x.dot(&hadamard(k, x)?)? + a.dot(x)? * b.dot(x)?)
            }
            TestFunctional::Cubic { c } => Ok(c.dot(&hadamard(x, &hadamard(x, x)?)?)? / 3.0),
        }
    }

    fn derivative(&self, x: &State) -> Result<State> {
        match self {
            TestFunctional::Linear { w } => Ok(w.clone()),
            TestFunctional::Quadratic { k, a, b } => {
                let mut d = hadamard(k, x)?;
                d.axpy(b.dot(x)?, a)?;
                d.axpy(a.dot(x)?, b)?;
                Ok(d)
            }
            TestFunctional::Cubic { c } => hadamard(c, &hadamard(x, x)?),
        }
    }
}

/// Deterministic family of four linear, four quadratic and two cubic
/// functionals built from band-limited fields with `kmax = 1`.
pub fn test_functional_suite(
    domain: &Arc<Domain>,
    schema: &Arc<StateSchema>,
    seed: u64,
) -> Result<Vec<TestFunctional>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
    let mut field = |amp: f64, offset: f64| -> Result<State> {
        let mut s = band_limited_state(domain, schema, &mut rng, 1, amp)?;
        if offset != 0.0 {
            let n = s.dof();
            let ones = vec![offset; n];
            let mut o = s.zeros_like();
            o.assign_flat(&ones)?;
            s.axpy(1.0, &o)?;
        }
        Ok(s)
    };
    let mut out = Vec::new();
    for _ in 0..4 {
        out.push(TestFunctional::Linear { w: field(1.0, 0.0)? });
    }
    for _ in 0..4 {
        out.push(TestFunctional::Quadratic {
            k: field(0.5, 1.0)?,
            a: field(0.5, 0.0)?,
            b: field(0.5, 0.0)?,
        });
    }
    for _ in 0..2 {
        out.push(TestFunctional::Cubic { c: field(0.5, 0.0)? });
    }
    Ok(out)
}

/// Resolved integer wavenumbers on an axis of `n` points: `|k| <= kmax` and
/// strictly below Nyquist.
fn axis_modes(n: usize, kmax: usize) -> Vec<i64> {
    let top = kmax.min((n.saturating_sub(1)) / 2) as i64;
    (-top..=top).collect()
}

/// Random trigonometric polynomial with modes `|k_i| <= kmax` on every axis
/// of `shape`/`lengths`, amplitude-normalised so coefficients are O(amp).
fn band_limited_values(
    coords: &[Vec<f64>],
    shape: &[usize],
    lengths: &[f64],
    rng: &mut impl Rng,
    kmax: usize,
    amp: f64,
) -> Vec<f64> {
    let modes: Vec<Vec<i64>> = shape.iter().map(|&n| axis_modes(n, kmax)).collect();
    let mut combos: Vec<Vec<i64>> = vec![vec![]];
    for m in &modes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                m.iter().map(move |&k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    let scale = amp / (combos.len() as f64).sqrt();
    let terms: Vec<(Vec<f64>, f64, f64)> = combos
        .iter()
        .map(|c| {
            let k: Vec<f64> = c
                .iter()
                .zip(lengths)
                .map(|(&ki, &l)| 2.0 * PI * ki as f64 / l)
                .collect();
            (k, scale * rng.gen_range(-1.0..1.0), scale * rng.gen_range(-1.0..1.0))
        })
        .collect();
    let npts = coords.len();
    let mut out = vec![0.0; npts];
    for (pt, o) in coords.iter().zip(out.iter_mut()) {
        let mut acc = 0.0;
        for (k, a, b) in &terms {
            let phase: f64 = k.iter().zip(pt).map(|(ki, xi)| ki * xi).sum();
            acc += a * phase.cos() + b * phase.sin();
        }
        *o = acc;
    }
    out
}

/// Random band-limited values for one field of the given kind.
pub fn band_limited_field(
    domain: &Domain,
    kind: FieldKind,
    rng: &mut impl Rng,
    kmax: usize,
    amp: f64,
) -> Result<Vec<f64>> {
    let g = domain.space();
    match kind {
        FieldKind::Scalar | FieldKind::Vector => {
            let coords: Vec<Vec<f64>> = g.positions().iter().map(|p| p.to_vec()).collect();
            let comps = if kind == FieldKind::Vector { 3 } else { 1 };
            Ok((0..comps)
                .flat_map(|_| band_limited_values(&coords, &g.dims(), &g.lengths(), rng, kmax, amp))
                .collect())
        }
        FieldKind::Phase => {
            let pg = domain.phase()?;
            let np = pg.momentum_len();
            let pd = pg.pdims();
            let mut coords = Vec::with_capacity(pg.len());
            for r in g.positions() {
                for q in 0..np {
                    let m = [q / (pd[1] * pd[2]), (q / pd[2]) % pd[1], q % pd[2]];
                    let mut c = r.to_vec();
                    c.extend((0..3).map(|i| pg.momenta(i)[m[i]]));
                    coords.push(c);
                }
            }
            let d = g.dims();
            let shape = [d[0], d[1], d[2], pd[0], pd[1], pd[2]];
            let l = g.lengths();
            let pm = pg.pmax();
            let lengths = [l[0], l[1], l[2], 2.0 * pm[0], 2.0 * pm[1], 2.0 * pm[2]];
            Ok(band_limited_values(&coords, &shape, &lengths, rng, kmax, amp))
        }
    }
}

/// State whose every field is an independent band-limited random field.
pub fn band_limited_state(
    domain: &Arc<Domain>,
    schema: &Arc<StateSchema>,
    rng: &mut impl Rng,
    kmax: usize,
    amp: f64,
) -> Result<State> {
    let mut x = State::zeros(domain, schema)?;
    for v in schema.vars() {
        let vals = band_limited_field(domain, v.kind, rng, kmax, amp)?;
        x.set(&v.name, vals)?;
    }
    Ok(x)
}

/// Positive background level used by [`random_state`]: densities and
/// distribution functions sit at 1, entropies at 1/2, everything else at 0.
pub fn background_level(name: &str) -> f64 {
    let base = name.trim_end_matches(|c: char| c.is_ascii_digit());
    match base {
        "rho" | "f" => 1.0,
        "s" => 0.5,
        _ => 0.0,
    }
}

/// Smooth random state: background level plus band-limited perturbation of
/// size `amp`. With `amp < 0.5` densities stay positive.
pub fn random_state(
    domain: &Arc<Domain>,
    schema: &Arc<StateSchema>,
    seed: u64,
    kmax: usize,
    amp: f64,
) -> Result<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = band_limited_state(domain, schema, &mut rng, kmax, amp)?;
    for v in schema.vars() {
        let b = background_level(&v.name);
        if b != 0.0 {
            for a in x.field_mut(&v.name)? {
                *a += b;
            }
        }
    }
    Ok(x)
}
