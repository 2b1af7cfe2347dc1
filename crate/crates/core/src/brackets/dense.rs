//! Dense bivector oracle for tiny grids.
//!
//! In flat coordinates with array gradients `g_i = w_i dF_i` the bracket is
//! `{F,H} = g_F^T P g_H` where column `j` of `P` is `apply(e_j / w_j)`.
//! Everything here goes through repeated `apply` calls on basis covectors and
//! never through the bracket's own structure.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Bracket, Structure};
use crate::error::{Error, Result};
use crate::functional::{band_limited_state, random_state};
use crate::grid::{Grid3, PhaseGrid};
use crate::state::{Constants, Domain, FieldKind, State};

/// Largest number of unknowns the oracle assembles.
pub const DENSE_LIMIT: usize = 200;

/// `P(x)` as a dense matrix.
pub fn assemble(b: &dyn Bracket, k: &Constants, x: &State) -> Result<DMatrix<f64>> {
    let n = x.dof();
    if n > DENSE_LIMIT {
        return Err(Error::Validation(format!(
            "dense assembly limited to {DENSE_LIMIT} unknowns, state has {n}"
        )));
    }
    let w = x.flat_weights();
    let mut p = DMatrix::zeros(n, n);
    let mut e = x.zeros_like();
    let mut basis = vec![0.0; n];
    for j in 0..n {
        basis[j] = 1.0 / w[j];
        e.assign_flat(&basis)?;
        basis[j] = 0.0;
        let col = b.apply(k, x, &e)?.to_flat();
        p.set_column(j, &DVector::from_vec(col));
    }
    Ok(p)
}

/// `max |P + P^T|`.
pub fn skew_residual(p: &DMatrix<f64>) -> f64 {
    (p + p.transpose()).amax()
}

/// Per-point unknowns of a bracket: (spatial, phase).
fn unknowns_per_point(b: &dyn Bracket) -> (usize, usize) {
    let mut s = 0;
    let mut ph = 0;
    for v in b.schema().vars() {
        match v.kind {
            FieldKind::Scalar => s += 1,
            FieldKind::Vector => s += 3,
            FieldKind::Phase => ph += 1,
        }
    }
    (s, ph)
}

/// Smallest interesting domain with `n` points per resolved axis and at most
/// [`DENSE_LIMIT`] unknowns: two spatial axes when they fit, else one; for
/// kinetic brackets one spatial axis and one or two momentum axes.
pub fn tiny_domain(b: &dyn Bracket, n: usize) -> Result<Arc<Domain>> {
    let (s, ph) = unknowns_per_point(b);
    if ph == 0 {
        let dims = if n * n * s <= DENSE_LIMIT { [n, n, 1] } else { [n, 1, 1] };
        return Ok(Domain::spatial(Grid3::new(dims, [1.0, 1.0, 1.0])?));
    }
    let space = Grid3::new([n, 1, 1], [1.0, 1.0, 1.0])?;
    let pdims = if n * n * n * ph + n * s <= DENSE_LIMIT { [n, n, 1] } else { [n, 1, 1] };
    Ok(Domain::with_phase(PhaseGrid::new(space, pdims, [2.0, 2.0, 2.0])?))
}

/// Replaces any `B` field by the curl of a band-limited potential.
pub fn make_solenoidal(x: &mut State, rng: &mut ChaCha8Rng) -> Result<()> {
    make_divergence_free(x, rng, &["B"])
}

/// Replaces every vector field whose name (less trailing digits) is in
/// `bases` by the curl of a band-limited potential.
pub fn make_divergence_free(x: &mut State, rng: &mut ChaCha8Rng, bases: &[&str]) -> Result<()> {
    let names: Vec<String> = x
        .schema()
        .vars()
        .iter()
        .filter(|v| v.kind == FieldKind::Vector && bases.contains(&v.name.trim_end_matches(|c: char| c.is_ascii_digit())))
        .map(|v| v.name.clone())
        .collect();
    for name in names {
        let a = crate::functional::band_limited_field(x.domain(), FieldKind::Vector, rng, 1, 1.0)?;
        let n = x.space().len();
        let c = x.space().rot([&a[..n], &a[n..2 * n], &a[2 * n..]]);
        x.set_vector(&name, c)?;
    }
    Ok(())
}

/// Cyclic Jacobi sum for three linear functionals with array gradients
/// `a`, `b`, `c`, using directional central differences of `P` along
/// `v = P c`. Exact up to rounding when `P` is at most quadratic in `x`.
#[derive(Debug, Clone, Copy)]
pub struct JacobiSample {
    pub residual: f64,
    /// Largest of the three cyclic terms.
    pub scale: f64,
}

pub fn jacobi_linear(
    b: &dyn Bracket,
    k: &Constants,
    x: &State,
    cov: [&DVector<f64>; 3],
) -> Result<JacobiSample> {
    let p = assemble(b, k, x)?;
    let mut terms = [0.0; 3];
    for t in 0..3 {
        let (f, g, h) = (cov[t], cov[(t + 1) % 3], cov[(t + 2) % 3]);
        let v = &p * h;
        let dp = directional(b, k, x, &v)?;
        terms[t] = f.dot(&(&dp * g));
    }
    Ok(JacobiSample {
        residual: terms.iter().sum::<f64>().abs(),
        scale: terms.iter().fold(0.0, |m, t| m.max(t.abs())),
    })
}

/// Central difference `(P(x + h v) - P(x - h v)) / 2h` with `h` chosen so
/// the probe moves any coefficient by at most 0.05.
fn directional(b: &dyn Bracket, k: &Constants, x: &State, v: &DVector<f64>) -> Result<DMatrix<f64>> {
    let vmax = v.amax();
    if vmax == 0.0 {
        return Ok(DMatrix::zeros(v.len(), v.len()));
    }
    let h = 0.05 / vmax;
    let base = DVector::from_vec(x.to_flat());
    let mut probe = x.clone();
    probe.assign_flat((&base + v * h).as_slice())?;
    let plus = assemble(b, k, &probe)?;
    probe.assign_flat((&base - v * h).as_slice())?;
    let minus = assemble(b, k, &probe)?;
    Ok((plus - minus) / (2.0 * h))
}

/// Random band-limited array-gradient covector.
fn covector(x: &State, rng: &mut ChaCha8Rng) -> Result<DVector<f64>> {
    let d = band_limited_state(x.domain(), x.schema(), rng, 1, 1.0)?;
    let w = x.flat_weights();
    Ok(DVector::from_iterator(
        w.len(),
        d.to_flat().iter().zip(&w).map(|(a, w)| a * w),
    ))
}

/// Worst Jacobi sample over `samples` random states and covector triples on
/// the domain with `n` points per axis.
pub fn jacobi_study(b: &dyn Bracket, k: &Constants, n: usize, seed: u64, samples: usize) -> Result<JacobiSample> {
    jacobi_study_with(b, k, n, seed, samples, &["B"])
}

/// As [`jacobi_study`], with the named vector fields made divergence-free.
pub fn jacobi_study_with(
    b: &dyn Bracket,
    k: &Constants,
    n: usize,
    seed: u64,
    samples: usize,
    solenoidal: &[&str],
) -> Result<JacobiSample> {
    let dom = tiny_domain(b, n)?;
    let schema = b.schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = JacobiSample {
        residual: 0.0,
        scale: 0.0,
    };
    for s in 0..samples {
        let mut x = random_state(&dom, &schema, seed.wrapping_add(s as u64), 1, 0.3)?;
        make_divergence_free(&mut x, &mut rng, solenoidal)?;
        let c: Vec<DVector<f64>> = (0..3).map(|_| covector(&x, &mut rng)).collect::<Result<_>>()?;
        let r = jacobi_linear(b, k, &x, [&c[0], &c[1], &c[2]])?;
        if r.residual >= worst.residual {
            worst.residual = r.residual;
        }
        worst.scale = worst.scale.max(r.scale);
    }
    Ok(worst)
}

/// Jacobi residual on successively finer tiny grids.
pub fn refinement_study(
    b: &dyn Bracket,
    k: &Constants,
    sizes: &[usize],
    seed: u64,
    samples: usize,
) -> Result<Vec<(usize, f64)>> {
    sizes
        .iter()
        .map(|&n| Ok((n, jacobi_study(b, k, n, seed, samples)?.residual)))
        .collect()
}

/// Residuals never grow by more than rounding (`1e-12`) between levels.
pub fn non_increasing(levels: &[(usize, f64)]) -> bool {
    levels.windows(2).all(|w| w[1].1 <= w[0].1.max(1e-12))
}

/// Whether the dense Jacobi residual is expected to vanish on band-limited
/// data: the bivector must be at most linear in the state.
pub fn jacobi_exact(b: &dyn Bracket) -> bool {
    b.structure() != Structure::Nonlinear
}
