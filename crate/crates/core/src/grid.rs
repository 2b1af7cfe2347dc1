//! Periodic lattices with spectral derivatives and rectangle-rule quadrature.
//!
//! Derivatives multiply each Fourier mode by `i k`, with the Nyquist mode of
//! even-length axes set to zero. The resulting matrix `D` is real and
//! skew-symmetric, so `sum(f * D g) = -sum(g * D f)` holds to rounding.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Coordinate axis of a spatial or phase-space lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    R1,
    R2,
    R3,
    P1,
    P2,
    P3,
}

impl Axis {
    pub const SPATIAL: [Axis; 3] = [Axis::R1, Axis::R2, Axis::R3];
    pub const MOMENTUM: [Axis; 3] = [Axis::P1, Axis::P2, Axis::P3];

    pub fn index(self) -> usize {
        match self {
            Axis::R1 => 0,
            Axis::R2 => 1,
            Axis::R3 => 2,
            Axis::P1 => 3,
            Axis::P2 => 4,
            Axis::P3 => 5,
        }
    }

    pub fn is_momentum(self) -> bool {
        self.index() >= 3
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["r1", "r2", "r3", "p1", "p2", "p3"][self.index()];
        f.write_str(s)
    }
}

#[derive(Clone)]
struct AxisFft {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Angular wavenumbers in FFT order, Nyquist zeroed.
    k: Vec<f64>,
}

impl AxisFft {
    fn new(n: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scale = 2.0 * std::f64::consts::PI / length;
        let k = (0..n)
            .map(|j| {
                if 2 * j == n {
                    0.0
                } else if 2 * j < n {
                    j as f64 * scale
                } else {
                    (j as f64 - n as f64) * scale
                }
            })
            .collect();
        Self { fwd, inv, k }
    }

    /// Applies a per-mode multiplier to one line of data in place.
    fn apply_line(&self, buf: &mut [Complex64], mult: impl Fn(f64) -> Complex64) {
        let n = buf.len();
        self.fwd.process(buf);
        for (c, &k) in buf.iter_mut().zip(&self.k) {
            *c *= mult(k);
        }
        self.inv.process(buf);
        let inv_n = 1.0 / n as f64;
        for c in buf.iter_mut() {
            *c *= inv_n;
        }
    }
}

/// Row-major periodic lattice of arbitrary rank.
#[derive(Clone)]
struct Lattice {
    shape: Vec<usize>,
    ffts: Vec<Option<AxisFft>>,
}

impl Lattice {
    fn new(shape: &[usize], lengths: &[f64]) -> Self {
        let ffts = shape
            .iter()
            .zip(lengths)
            .map(|(&n, &l)| (n > 1).then(|| AxisFft::new(n, l)))
            .collect();
        Self {
            shape: shape.to_vec(),
            ffts,
        }
    }

    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    fn stride(&self, axis: usize) -> usize {
        self.shape[axis + 1..].iter().product()
    }

    fn spectral(&self, data: &[f64], axis: usize, mult: impl Fn(f64) -> Complex64) -> Vec<f64> {
        let n = self.shape[axis];
        let Some(fft) = &self.ffts[axis] else {
            return data.iter().map(|&v| v * mult(0.0).re).collect();
        };
        let stride = self.stride(axis);
        let block = n * stride;
        let mut out = vec![0.0; data.len()];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for start in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = start + inner;
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = Complex64::new(data[base + j * stride], 0.0);
                }
                fft.apply_line(&mut buf, &mult);
                for (j, b) in buf.iter().enumerate() {
                    out[base + j * stride] = b.re;
                }
            }
        }
        out
    }

    fn derivative(&self, data: &[f64], axis: usize) -> Vec<f64> {
        // Constants differentiate to exact zeros rather than FFT rounding.
        if self.shape[axis] == 1 || data.iter().all(|&v| v == data[0]) {
            return vec![0.0; data.len()];
        }
        self.spectral(data, axis, |k| Complex64::new(0.0, k))
    }

    /// Inverse of the derivative on the zero-mean, sub-Nyquist subspace.
    fn antiderivative(&self, data: &[f64], axis: usize) -> Vec<f64> {
        if self.shape[axis] == 1 {
            return vec![0.0; data.len()];
        }
        self.spectral(data, axis, |k| {
            if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / k)
            }
        })
    }
}

/// Periodic spatial grid with points at `x_n = n * spacing`.
#[derive(Clone)]
pub struct Grid3 {
    dims: [usize; 3],
    lengths: [f64; 3],
    lattice: Lattice,
}

impl fmt::Debug for Grid3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid3")
            .field("dims", &self.dims)
            .field("lengths", &self.lengths)
            .finish()
    }
}

impl PartialEq for Grid3 {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.lengths == other.lengths
    }
}

fn check_vec3(v: &[f64; 3], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite() && *x > 0.0) {
        Ok(())
    } else {
        Err(Error::Schema(format!("{what} must be positive and finite, got {v:?}")))
    }
}

impl Grid3 {
    pub fn new(dims: [usize; 3], lengths: [f64; 3]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::Schema(format!("grid dims must be >= 1, got {dims:?}")));
        }
        check_vec3(&lengths, "grid lengths")?;
        Ok(Self {
            dims,
            lengths,
            lattice: Lattice::new(&dims, &lengths),
        })
    }

    /// Cube with `n` points per axis and side `length`.
    pub fn cube(n: usize, length: f64) -> Result<Self> {
        Self::new([n; 3], [length; 3])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.lengths[i] / self.dims[i] as f64)
    }

    /// Smallest spacing over resolved axes (all axes if none is resolved).
    pub fn min_spacing(&self) -> f64 {
        let s = self.spacing();
        let resolved = (0..3)
            .filter(|&i| self.dims[i] > 1)
            .map(|i| s[i])
            .fold(f64::INFINITY, f64::min);
        if resolved.is_finite() {
            resolved
        } else {
            s.iter().cloned().fold(f64::INFINITY, f64::min)
        }
    }

    pub fn quad_weight(&self) -> f64 {
        self.spacing().iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    /// Flat index of lattice point `(i, j, k)`, wrapping periodically.
    pub fn index(&self, i: isize, j: isize, k: isize) -> usize {
        let w = |v: isize, n: usize| v.rem_euclid(n as isize) as usize;
        (w(i, self.dims[0]) * self.dims[1] + w(j, self.dims[1])) * self.dims[2] + w(k, self.dims[2])
    }

    /// Position of every lattice point, in flat order.
    pub fn positions(&self) -> Vec<[f64; 3]> {
        let h = self.spacing();
        let [n0, n1, n2] = self.dims;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..n0 {
            for j in 0..n1 {
                for k in 0..n2 {
                    out.push([i as f64 * h[0], j as f64 * h[1], k as f64 * h[2]]);
                }
            }
        }
        out
    }

    /// Samples `f` at every lattice point.
    pub fn sample(&self, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        self.positions().into_iter().map(f).collect()
    }

    fn check_len(&self, data: &[f64]) -> Result<()> {
        if data.len() == self.len() {
            Ok(())
        } else {
            Err(Error::Schema(format!(
                "field of length {} on grid with {} points",
                data.len(),
                self.len()
            )))
        }
    }

    pub fn derivative(&self, data: &[f64], axis: Axis) -> Result<Vec<f64>> {
        if axis.is_momentum() {
            return Err(Error::Schema(format!("axis {axis} is not defined on a spatial grid")));
        }
        self.check_len(data)?;
        Ok(self.d(data, axis.index()))
    }

    /// Unchecked derivative along spatial axis `axis` (0, 1 or 2).
    pub(crate) fn d(&self, data: &[f64], axis: usize) -> Vec<f64> {
        self.lattice.derivative(data, axis)
    }

    pub fn gradient(&self, s: &[f64]) -> Result<[Vec<f64>; 3]> {
        self.check_len(s)?;
        Ok(std::array::from_fn(|i| self.d(s, i)))
    }

    pub fn divergence(&self, v: [&[f64]; 3]) -> Result<Vec<f64>> {
        for c in v {
            self.check_len(c)?;
        }
        Ok(self.div(v))
    }

    pub(crate) fn div(&self, v: [&[f64]; 3]) -> Vec<f64> {
        let mut out = self.d(v[0], 0);
        for i in 1..3 {
            if self.dims[i] > 1 {
                add_into(&mut out, &self.d(v[i], i));
            }
        }
        out
    }

    pub fn curl(&self, v: [&[f64]; 3]) -> Result<[Vec<f64>; 3]> {
        for c in v {
            self.check_len(c)?;
        }
        Ok(self.rot(v))
    }

    pub(crate) fn rot(&self, v: [&[f64]; 3]) -> [Vec<f64>; 3] {
        std::array::from_fn(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let a = self.d(v[k], j);
            let b = self.d(v[j], k);
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        })
    }

    pub fn integrate(&self, data: &[f64]) -> f64 {
        data.iter().sum::<f64>() * self.quad_weight()
    }
}

/// Spatial grid times a truncated, periodically treated momentum box.
///
/// Storage is row-major with the spatial index outer and the momentum index
/// inner. Momentum points are cell-centred on `[-pmax, pmax)`.
#[derive(Clone)]
pub struct PhaseGrid {
    spatial: Grid3,
    pdims: [usize; 3],
    pmax: [f64; 3],
    lattice: Lattice,
    momenta: [Vec<f64>; 3],
    periodized: [Vec<f64>; 3],
}

impl fmt::Debug for PhaseGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseGrid")
            .field("spatial", &self.spatial)
            .field("pdims", &self.pdims)
            .field("pmax", &self.pmax)
            .finish()
    }
}

impl PartialEq for PhaseGrid {
    fn eq(&self, other: &Self) -> bool {
        self.spatial == other.spatial && self.pdims == other.pdims && self.pmax == other.pmax
    }
}

impl PhaseGrid {
    pub fn new(spatial: Grid3, pdims: [usize; 3], pmax: [f64; 3]) -> Result<Self> {
        if pdims.contains(&0) {
            return Err(Error::Schema(format!("momentum dims must be >= 1, got {pdims:?}")));
        }
        check_vec3(&pmax, "pmax")?;
        let d = spatial.dims;
        let shape = [d[0], d[1], d[2], pdims[0], pdims[1], pdims[2]];
        let l = spatial.lengths;
        let lengths = [l[0], l[1], l[2], 2.0 * pmax[0], 2.0 * pmax[1], 2.0 * pmax[2]];
        let lattice = Lattice::new(&shape, &lengths);
        let momenta: [Vec<f64>; 3] = std::array::from_fn(|i| {
            let n = pdims[i];
            if n == 1 {
                return vec![0.0];
            }
            let dp = 2.0 * pmax[i] / n as f64;
            (0..n).map(|j| -pmax[i] + (j as f64 + 0.5) * dp).collect()
        });
        let periodized = std::array::from_fn(|i| periodized_coordinate(&momenta[i], pmax[i]));
        Ok(Self {
            spatial,
            pdims,
            pmax,
            lattice,
            momenta,
            periodized,
        })
    }

    pub fn spatial(&self) -> &Grid3 {
        &self.spatial
    }

    pub fn pdims(&self) -> [usize; 3] {
        self.pdims
    }

    pub fn pmax(&self) -> [f64; 3] {
        self.pmax
    }

    pub fn momentum_len(&self) -> usize {
        self.pdims.iter().product()
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Momentum volume element. Axes with a single point are reduced away
    /// and carry unit weight.
    pub fn momentum_weight(&self) -> f64 {
        (0..3)
            .filter(|&i| self.pdims[i] > 1)
            .map(|i| 2.0 * self.pmax[i] / self.pdims[i] as f64)
            .product()
    }

    pub fn quad_weight(&self) -> f64 {
        self.spatial.quad_weight() * self.momentum_weight()
    }

    /// Cell-centred momentum values along axis `i`.
    pub fn momenta(&self, i: usize) -> &[f64] {
        &self.momenta[i]
    }

    fn momentum_indices(&self, q: usize) -> [usize; 3] {
        let [_, n1, n2] = self.pdims;
        [q / (n1 * n2), (q / n2) % n1, q % n2]
    }

    /// Samples `f(r, p)` at every phase-space point.
    pub fn sample(&self, f: impl Fn([f64; 3], [f64; 3]) -> f64) -> Vec<f64> {
        let np = self.momentum_len();
        let mut out = Vec::with_capacity(self.len());
        for r in self.spatial.positions() {
            for q in 0..np {
                let m = self.momentum_indices(q);
                let p = std::array::from_fn(|i| self.momenta[i][m[i]]);
                out.push(f(r, p));
            }
        }
        out
    }

    /// Smooth periodic stand-in for the momentum coordinate `p_i`.
    ///
    /// It agrees with `p_i` and has unit spectral derivative away from the
    /// momentum seam, to within the boundary-layer width of two cells.
    pub fn periodized_momentum(&self, i: usize) -> Vec<f64> {
        self.tile_momentum(|m| self.periodized[i][m[i]])
    }

    /// Kinetic energy profile whose spectral momentum gradient is exactly
    /// the periodized momentum divided by `mass`.
    pub fn kinetic_profile(&self, mass: f64) -> Vec<f64> {
        let lines: Vec<Vec<f64>> = (0..3)
            .map(|i| {
                let lat = Lattice::new(&[self.pdims[i]], &[2.0 * self.pmax[i]]);
                lat.antiderivative(&self.periodized[i], 0)
            })
            .collect();
        self.tile_momentum(|m| (0..3).map(|i| lines[i][m[i]]).sum::<f64>() / mass)
    }

    fn tile_momentum(&self, f: impl Fn([usize; 3]) -> f64) -> Vec<f64> {
        let np = self.momentum_len();
        let prof: Vec<f64> = (0..np).map(|q| f(self.momentum_indices(q))).collect();
        (0..self.spatial.len()).flat_map(|_| prof.iter().cloned()).collect()
    }

    fn check_len(&self, data: &[f64]) -> Result<()> {
        if data.len() == self.len() {
            Ok(())
        } else {
            Err(Error::Schema(format!(
                "field of length {} on phase grid with {} points",
                data.len(),
                self.len()
            )))
        }
    }

    pub fn derivative(&self, data: &[f64], axis: Axis) -> Result<Vec<f64>> {
        self.check_len(data)?;
        Ok(self.d(data, axis.index()))
    }

    pub(crate) fn d(&self, data: &[f64], axis: usize) -> Vec<f64> {
        self.lattice.derivative(data, axis)
    }

    pub fn integrate(&self, data: &[f64]) -> f64 {
        data.iter().sum::<f64>() * self.quad_weight()
    }

    /// `int f dp` at every spatial point.
    pub fn momentum_integral(&self, data: &[f64]) -> Vec<f64> {
        let w = self.momentum_weight();
        data.chunks(self.momentum_len())
            .map(|c| c.iter().sum::<f64>() * w)
            .collect()
    }

    /// Extends a spatial field to phase space, constant in momentum.
    pub fn broadcast(&self, spatial: &[f64]) -> Vec<f64> {
        let np = self.momentum_len();
        spatial
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, np))
            .collect()
    }

    /// Largest `|f|` on the outermost momentum shell.
    pub fn boundary_mass(&self, data: &[f64]) -> f64 {
        let np = self.momentum_len();
        let shell: Vec<bool> = (0..np)
            .map(|q| {
                let m = self.momentum_indices(q);
                (0..3).any(|i| self.pdims[i] > 1 && (m[i] == 0 || m[i] == self.pdims[i] - 1))
            })
            .collect();
        data.chunks(np)
            .flat_map(|c| c.iter().zip(&shell).filter(|(_, &s)| s).map(|(v, _)| v.abs()))
            .fold(0.0, f64::max)
    }
}

/// Builds the periodized coordinate on one momentum axis: the zero-mean
/// antiderivative of `1 - bump`, where the bump sits on the seam and has the
/// same mass as the constant.
fn periodized_coordinate(p: &[f64], pmax: f64) -> Vec<f64> {
    let n = p.len();
    if n == 1 {
        return vec![0.0];
    }
    let dp = 2.0 * pmax / n as f64;
    let width = 2.0 * dp;
    let bump: Vec<f64> = p
        .iter()
        .map(|&x| {
            let dist = pmax - x.abs();
            (-0.5 * (dist / width).powi(2)).exp()
        })
        .collect();
    let total: f64 = bump.iter().sum();
    let g: Vec<f64> = bump.iter().map(|b| 1.0 - b * n as f64 / total).collect();
    let lat = Lattice::new(&[n], &[2.0 * pmax]);
    let mut out = lat.antiderivative(&g, 0);
    let mean = out.iter().sum::<f64>() / n as f64;
    for v in &mut out {
        *v -= mean;
    }
    out
}

pub(crate) fn add_into(acc: &mut [f64], v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = Grid3::new([16, 4, 1], [1.0, 2.0, 1.0]).unwrap();
        let d = g.derivative(&vec![1.0; g.len()], Axis::R1).unwrap();
        assert!(d.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn derivative_of_resolved_mode() {
        let l = 3.0;
        let g = Grid3::new([16, 1, 1], [l, 1.0, 1.0]).unwrap();
        let k = 2.0 * PI / l;
        let f = g.sample(|x| (k * x[0]).sin());
        let want = g.sample(|x| k * (k * x[0]).cos());
        assert!(max_diff(&g.derivative(&f, Axis::R1).unwrap(), &want) < 1e-12);
        let f2 = g.sample(|x| (k * x[0]).sin().powi(2));
        let want2 = g.sample(|x| k * (2.0 * k * x[0]).sin());
        assert!(max_diff(&g.derivative(&f2, Axis::R1).unwrap(), &want2) < 1e-12);
    }

    #[test]
    fn curl_of_transverse_mode() {
        let l = 2.0;
        let g = Grid3::new([8, 4, 2], [l, 1.0, 1.0]).unwrap();
        let k = 2.0 * PI / l;
        let vz = g.sample(|x| (k * x[0]).sin());
        let zero = vec![0.0; g.len()];
        let c = g.curl([&zero, &zero, &vz]).unwrap();
        let want = g.sample(|x| -k * (k * x[0]).cos());
        assert!(c[0].iter().all(|v| v.abs() < 1e-12));
        assert!(max_diff(&c[1], &want) < 1e-12);
        assert!(c[2].iter().all(|v| v.abs() < 1e-12));
        let uniform = vec![2.5; g.len()];
        let c = g.curl([&uniform, &uniform, &uniform]).unwrap();
        assert!(c.iter().flatten().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn integrate_constant_and_mode() {
        let g = Grid3::new([4, 4, 4], [2.0, 2.0, 2.0]).unwrap();
        assert!((g.integrate(&vec![1.0; g.len()]) - 8.0).abs() < 1e-14);
        let f = g.sample(|x| (PI * x[0]).sin());
        assert!(g.integrate(&f).abs() < 1e-14);
    }

    #[test]
    fn nyquist_mode_is_dropped() {
        let g = Grid3::new([4, 1, 1], [1.0, 1.0, 1.0]).unwrap();
        let f = vec![1.0, -1.0, 1.0, -1.0];
        assert!(g.derivative(&f, Axis::R1).unwrap().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn momentum_axis_rejected_on_spatial_grid() {
        let g = Grid3::cube(4, 1.0).unwrap();
        assert!(g.derivative(&vec![0.0; 64], Axis::P1).is_err());
        assert!(g.derivative(&[0.0; 3], Axis::R1).is_err());
        assert!(Grid3::new([0, 1, 1], [1.0; 3]).is_err());
        assert!(Grid3::new([1, 1, 1], [1.0, -1.0, 1.0]).is_err());
    }

    #[test]
    fn phase_grid_layout_and_quadrature() {
        let s = Grid3::new([2, 1, 1], [1.0, 1.0, 1.0]).unwrap();
        let pg = PhaseGrid::new(s, [4, 1, 1], [2.0, 1.0, 1.0]).unwrap();
        assert_eq!(pg.len(), 8);
        assert_eq!(pg.momenta(0), &[-1.5, -0.5, 0.5, 1.5]);
        assert_eq!(pg.momenta(1), &[0.0]);
        // Single-point momentum axes carry unit weight.
        assert!((pg.quad_weight() - 0.5 * 1.0).abs() < 1e-15);
        let f = pg.sample(|r, p| r[0] + p[0]);
        assert_eq!(f[5], 0.5 - 0.5);
        assert_eq!(pg.momentum_integral(&f), vec![0.0, 2.0]);
        assert_eq!(pg.boundary_mass(&f), 2.0);
    }

    #[test]
    fn periodized_momentum_matches_coordinate_in_bulk() {
        let s = Grid3::new([1, 1, 1], [1.0; 3]).unwrap();
        let pg = PhaseGrid::new(s, [32, 1, 1], [10.0, 1.0, 1.0]).unwrap();
        let pt = pg.periodized_momentum(0);
        let dpt = pg.derivative(&pt, Axis::P1).unwrap();
        let prof = pg.kinetic_profile(2.0);
        let dprof = pg.derivative(&prof, Axis::P1).unwrap();
        for (j, &p) in pg.momenta(0).iter().enumerate() {
            let w = (-0.5 * p * p).exp();
            assert!(w * (pt[j] - p).abs() < 1e-7);
            assert!(w * (dpt[j] - 1.0).abs() < 1e-7);
            assert!((dprof[j] - pt[j] / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_derivatives_commute() {
        let s = Grid3::new([6, 1, 1], [2.0, 1.0, 1.0]).unwrap();
        let pg = PhaseGrid::new(s, [6, 1, 1], [3.0, 1.0, 1.0]).unwrap();
        let f = pg.sample(|r, p| (PI * r[0]).sin() * (p[0] * 0.7).cos() + r[0] * p[0]);
        let a = pg.d(&pg.d(&f, 0), 3);
        let b = pg.d(&pg.d(&f, 3), 0);
        assert!(max_diff(&a, &b) < 1e-12);
    }
}
