//! Onsager-Casimir reciprocity checks on assembled bivector matrices.
//!
//! With time reversal `I` and parities `P_i`, the coupling matrix `K` must
//! satisfy `K^{ij}(x) = P_i P_j K^{ji}(I x)` blockwise. For a Poisson
//! bivector (`K = L`, skew) this is the reversibility law
//! `L^{ij}(I x) = -P_i P_j L^{ij}(x)`; both are checked.

use std::fmt;

use nalgebra::DMatrix;

use crate::brackets::dense::{assemble, tiny_domain};
use crate::brackets::Bracket;
use crate::error::{Error, Result};
use crate::functional::random_state;
use crate::state::{Constants, Parity, State};

/// One block pair `(i, j)` of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityRow {
    pub block_i: String,
    pub block_j: String,
    /// `P_i P_j`.
    pub product: f64,
    /// `max |K_ij(x) - P_i P_j K_ji(I x)^T|`, relative to `1 + max |K|`.
    pub dressed: f64,
    /// `max |L_ij(I x) + P_i P_j L_ij(x)|`, relative to `1 + max |L|`.
    pub reversibility: f64,
    pub tolerance: f64,
}

impl ParityRow {
    pub fn passed(&self) -> bool {
        self.dressed <= self.tolerance && self.reversibility <= self.tolerance
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    pub bracket: String,
    pub rows: Vec<ParityRow>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(ParityRow::passed)
    }

    /// Block pairs that fail.
    pub fn failures(&self) -> Vec<(&str, &str)> {
        self.rows
            .iter()
            .filter(|r| !r.passed())
            .map(|r| (r.block_i.as_str(), r.block_j.as_str()))
            .collect()
    }

    pub fn worst(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.dressed).max(r.reversibility))
    }

    pub fn write_csv(&self, out: impl std::io::Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["block", "parity_product", "dressed_residual", "reversibility_residual", "verdict"])?;
        for r in &self.rows {
            w.write_record([
                format!("{}/{}", r.block_i, r.block_j),
                format!("{:+}", r.product),
                format!("{:.6e}", r.dressed),
                format!("{:.6e}", r.reversibility),
                r.verdict().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Elementwise worst over several reports of the same bracket.
    pub fn merge(mut self, other: &ParityReport) -> ParityReport {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.dressed = a.dressed.max(b.dressed);
            a.reversibility = a.reversibility.max(b.reversibility);
        }
        self
    }
}

impl fmt::Display for ParityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parity check for {}", self.bracket)?;
        writeln!(f, "{:<12} {:>7} {:>12} {:>14} {:>9}", "block", "P_iP_j", "dressed", "reversibility", "verdict")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<12} {:>+7} {:>12.3e} {:>14.3e} {:>9}",
                format!("{}/{}", r.block_i, r.block_j),
                r.product,
                r.dressed,
                r.reversibility,
                r.verdict()
            )?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Parity sign of every variable, with `overrides` replacing schema values.
fn parities(x: &State, overrides: &[(&str, Parity)]) -> Result<Vec<f64>> {
    for (name, _) in overrides {
        if x.schema().get(name).is_none() {
            return Err(Error::UnknownName {
                kind: "variable",
                name: name.to_string(),
            });
        }
    }
    x.schema()
        .vars()
        .iter()
        .map(|v| {
            overrides
                .iter()
                .find(|(n, _)| *n == v.name)
                .map(|(_, p)| *p)
                .or(v.parity)
                .map(|p| p.sign())
                .ok_or_else(|| Error::ParityUndefined(v.name.clone()))
        })
        .collect()
}

fn reversed(x: &State, p: &[f64]) -> Result<State> {
    let mut flat = x.to_flat();
    for ((_, r), s) in x.blocks().iter().zip(p) {
        for v in &mut flat[r.clone()] {
            *v *= s;
        }
    }
    let mut out = x.clone();
    out.assign_flat(&flat)?;
    Ok(out)
}

/// Symmetric matrix supplier for the dissipative part `M(x)`.
pub type MSupplier<'a> = &'a dyn Fn(&State) -> Result<DMatrix<f64>>;

/// Reciprocity check of the bivector alone (`M = 0`).
pub fn check_bivector_parity(b: &dyn Bracket, k: &Constants, x: &State, tol: f64) -> Result<ParityReport> {
    check_combined(b, k, None, x, tol)
}

/// As [`check_bivector_parity`] with some variable parities replaced, for
/// sensitivity studies of the parity convention.
pub fn check_with_parities(
    b: &dyn Bracket,
    k: &Constants,
    x: &State,
    overrides: &[(&str, Parity)],
    tol: f64,
) -> Result<ParityReport> {
    check_inner(b, k, None, x, overrides, tol)
}

/// Reciprocity check of `K = L + M`. An asymmetric `M` is rejected; an `M`
/// with the wrong parity fails in the blocks it touches.
pub fn check_combined(
    b: &dyn Bracket,
    k: &Constants,
    m: Option<MSupplier>,
    x: &State,
    tol: f64,
) -> Result<ParityReport> {
    check_inner(b, k, m, x, &[], tol)
}

fn check_inner(
    b: &dyn Bracket,
    k: &Constants,
    m: Option<MSupplier>,
    x: &State,
    overrides: &[(&str, Parity)],
    tol: f64,
) -> Result<ParityReport> {
    let p = parities(x, overrides)?;
    let ix = reversed(x, &p)?;
    let l = assemble(b, k, x)?;
    let li = assemble(b, k, &ix)?;
    let (kx, kix) = match m {
        None => (l.clone(), li.clone()),
        Some(supply) => {
            let (mx, mix) = (supply(x)?, supply(&ix)?);
            for mm in [&mx, &mix] {
                if mm.shape() != l.shape() {
                    return Err(Error::Validation(format!(
                        "M has shape {:?}, bivector has {:?}",
                        mm.shape(),
                        l.shape()
                    )));
                }
                let asym = (mm - mm.transpose()).amax();
                if asym > 1e-12 * (1.0 + mm.amax()) {
                    return Err(Error::Validation(format!("M is not symmetric (max |M - M^T| = {asym:e})")));
                }
            }
            (&l + mx, &li + mix)
        }
    };
    let (lscale, kscale) = (1.0 + l.amax(), 1.0 + kx.amax());
    let blocks = x.blocks();
    let mut rows = Vec::with_capacity(blocks.len() * blocks.len());
    for (i, (ni, ri)) in blocks.iter().enumerate() {
        for (j, (nj, rj)) in blocks.iter().enumerate() {
            let pp = p[i] * p[j];
            let (r0, c0, nr, nc) = (ri.start, rj.start, ri.len(), rj.len());
            let kij = kx.view((r0, c0), (nr, nc));
            let kji_rev = kix.view((c0, r0), (nc, nr));
            let dressed = (kij - kji_rev.transpose() * pp).amax() / kscale;
            let lij = l.view((r0, c0), (nr, nc));
            let lij_rev = li.view((r0, c0), (nr, nc));
            let reversibility = (lij_rev + lij * pp).amax() / lscale;
            rows.push(ParityRow {
                block_i: ni.clone(),
                block_j: nj.clone(),
                product: pp,
                dressed,
                reversibility,
                tolerance: tol,
            });
        }
    }
    Ok(ParityReport {
        bracket: b.name(),
        rows,
    })
}

/// Worst-case report over `states` random states on the bracket's tiny
/// dense domain with `n` points per axis.
pub fn parity_study(b: &dyn Bracket, k: &Constants, n: usize, states: usize, seed: u64, tol: f64) -> Result<ParityReport> {
    parity_study_with(b, k, n, states, seed, &[], tol)
}

/// [`parity_study`] with some variable parities replaced.
pub fn parity_study_with(
    b: &dyn Bracket,
    k: &Constants,
    n: usize,
    states: usize,
    seed: u64,
    overrides: &[(&str, Parity)],
    tol: f64,
) -> Result<ParityReport> {
    let dom = tiny_domain(b, n)?;
    let schema = b.schema();
    if let Some(v) = schema
        .vars()
        .iter()
        .find(|v| v.parity.is_none() && !overrides.iter().any(|(o, _)| *o == v.name))
    {
        return Err(Error::ParityUndefined(v.name.clone()));
    }
    let mut out: Option<ParityReport> = None;
    for s in 0..states.max(1) {
        let x = random_state(&dom, &schema, seed.wrapping_add(s as u64), 1, 0.3)?;
        let r = check_with_parities(b, k, &x, overrides, tol)?;
        out = Some(match out {
            None => r,
            Some(acc) => acc.merge(&r),
        });
    }
    Ok(out.expect("at least one state"))
}
