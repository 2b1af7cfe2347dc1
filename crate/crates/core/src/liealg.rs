//! Finite-dimensional Lie algebras, Lie-Poisson brackets and matched pairs.
//!
//! Conventions: `[e_i, e_j] = c^k_{ij} e_k`; the plus Lie-Poisson bracket
//! `{F,H}(mu) = <mu, [dF, dH]>`; evolution `mu_dot_j = <mu, [e_j, dH]>`,
//! so that `{F,H} = dF . mu_dot`.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Tolerance for tensor identities whose entries are bounded by `scale`.
pub fn identity_tolerance(n: usize, scale: f64) -> f64 {
    let base = if n <= 20 {
        1e-12
    } else {
        (n as f64).powi(3) * f64::EPSILON
    };
    base * (1.0 + scale * scale)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_len(v: &[f64], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: n,
            got: v.len(),
        })
    }
}

/// Lie algebra given by structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    n: usize,
    c: Vec<f64>,
}

impl LieAlgebra {
    /// Builds an algebra from a dense `c[k][i][j]` array (flat, row-major),
    /// rejecting it unless antisymmetry and Jacobi hold.
    pub fn new(n: usize, c: Vec<f64>) -> Result<Self> {
        check_len(&c, n * n * n)?;
        let alg = Self { n, c };
        let tol = identity_tolerance(n, max_abs(&alg.c));
        let (anti, at) = alg.antisymmetry_residual();
        if anti > tol {
            return Err(Error::Validation(format!(
                "structure constants not antisymmetric: residual {anti:.3e} at (k,i,j) = {at:?}"
            )));
        }
        let (jac, at) = alg.jacobi_residual();
        if jac > tol {
            return Err(Error::Validation(format!(
                "Jacobi identity fails: residual {jac:.3e} at (l,i,j,k) = {at:?}"
            )));
        }
        Ok(alg)
    }

    /// Builds from `(k, i, j, value)` entries; the `(k, j, i)` partner is
    /// filled with `-value` unless given explicitly.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = vec![0.0; n * n * n];
        let mut set = vec![false; n * n * n];
        for &(k, i, j, v) in entries {
            if k >= n || i >= n || j >= n {
                return Err(Error::Config(format!(
                    "structure constant index ({k},{i},{j}) out of range for dim {n}"
                )));
            }
            c[(k * n + i) * n + j] = v;
            set[(k * n + i) * n + j] = true;
        }
        for &(k, i, j, v) in entries {
            let t = (k * n + j) * n + i;
            if !set[t] {
                c[t] = -v;
            }
        }
        Self::new(n, c)
    }

    pub fn abelian(n: usize) -> Self {
        Self {
            n,
            c: vec![0.0; n * n * n],
        }
    }

    /// so(3) with `[e_i, e_j] = eps_{ijk} e_k`.
    pub fn so3() -> Self {
        let mut c = vec![0.0; 27];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[(k * 3 + i) * 3 + j] = 1.0;
            c[(k * 3 + j) * 3 + i] = -1.0;
        }
        Self { n: 3, c }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c^k_{ij}`.
    pub fn c(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[(k * self.n + i) * self.n + j]
    }

    pub fn constants(&self) -> &[f64] {
        &self.c
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_len(x, self.n)?;
        check_len(y, self.n)?;
        let n = self.n;
        let mut out = vec![0.0; n];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..n {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    *o += self.c(k, i, j) * x[i] * y[j];
                }
            }
        }
        Ok(out)
    }

    /// Largest `|c^k_{ij} + c^k_{ji}|` and where it occurs.
    pub fn antisymmetry_residual(&self) -> (f64, [usize; 3]) {
        let n = self.n;
        let mut worst = (0.0, [0; 3]);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let r = (self.c(k, i, j) + self.c(k, j, i)).abs();
                    if r > worst.0 {
                        worst = (r, [k, i, j]);
                    }
                }
            }
        }
        worst
    }

    /// Largest cyclic Jacobi sum over all index tuples.
    pub fn jacobi_residual(&self) -> (f64, [usize; 4]) {
        let n = self.n;
        let mut worst = (0.0, [0; 4]);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| {
                                self.c(m, i, j) * self.c(l, m, k)
                                    + self.c(m, j, k) * self.c(l, m, i)
                                    + self.c(m, k, i) * self.c(l, m, j)
                            })
                            .sum();
                        if s.abs() > worst.0 {
                            worst = (s.abs(), [l, i, j, k]);
                        }
                    }
                }
            }
        }
        worst
    }

    /// Same algebra in the basis `f_i = sum_a P[a][i] e_a` (`P` row-major,
    /// invertible).
    pub fn change_basis(&self, p: &[f64]) -> Result<Self> {
        let n = self.n;
        check_len(p, n * n)?;
        let pinv = invert(p, n)?;
        let mut c = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let fi: Vec<f64> = (0..n).map(|a| p[a * n + i]).collect();
                let fj: Vec<f64> = (0..n).map(|a| p[a * n + j]).collect();
                let br = self.bracket(&fi, &fj)?;
                for k in 0..n {
                    c[(k * n + i) * n + j] = (0..n).map(|a| pinv[k * n + a] * br[a]).sum();
                }
            }
        }
        Self::new(n, c)
    }
}

pub(crate) fn invert(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let m = nalgebra::DMatrix::from_row_slice(n, n, a);
    let inv = m
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular basis change".into()))?;
    Ok(inv.transpose().as_slice().to_vec())
}

/// `<mu, [dF, dH]> = sum mu_k c^k_{ij} dF_i dH_j`.
pub fn lie_poisson_bracket(alg: &LieAlgebra, mu: &[f64], df: &[f64], dh: &[f64]) -> Result<f64> {
    check_len(mu, alg.dim())?;
    let br = alg.bracket(df, dh)?;
    Ok(mu.iter().zip(&br).map(|(a, b)| a * b).sum())
}

/// `mu_dot_j = sum mu_k c^k_{ji} dH_i`, the unique vector with
/// `dF . mu_dot = {F,H}` for every `dF`.
pub fn lie_poisson_evolution(alg: &LieAlgebra, mu: &[f64], dh: &[f64]) -> Result<Vec<f64>> {
    let n = alg.dim();
    check_len(mu, n)?;
    check_len(dh, n)?;
    Ok((0..n)
        .map(|j| {
            let mut s = 0.0;
            for k in 0..n {
                for i in 0..n {
                    s += mu[k] * alg.c(k, j, i) * dh[i];
                }
            }
            s
        })
        .collect())
}

/// Constant canonical bivector `J = [[0, I], [-I, 0]]` on `z = (r, p)`.
///
/// `{F,H} = F_r . H_p - F_p . H_r`, giving `r_dot = H_p`, `p_dot = -H_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalBracket {
    n_pairs: usize,
}

pub fn canonical_bracket_finite(n_pairs: usize) -> Result<CanonicalBracket> {
    if n_pairs == 0 {
        return Err(Error::Validation("need at least one canonical pair".into()));
    }
    Ok(CanonicalBracket { n_pairs })
}

impl CanonicalBracket {
    pub fn dim(&self) -> usize {
        2 * self.n_pairs
    }

    /// `z_dot = J dH`.
    pub fn apply(&self, dh: &[f64]) -> Result<Vec<f64>> {
        check_len(dh, self.dim())?;
        let n = self.n_pairs;
        let mut out = vec![0.0; 2 * n];
        for i in 0..n {
            out[i] = dh[n + i];
            out[n + i] = -dh[i];
        }
        Ok(out)
    }

    pub fn bracket(&self, df: &[f64], dh: &[f64]) -> Result<f64> {
        let zd = self.apply(dh)?;
        Ok(df.iter().zip(&zd).map(|(a, b)| a * b).sum())
    }

    /// The ordering `H_r . F_p - H_p . F_r`; equals `bracket(dh, df)`, that
    /// is minus the bracket used for evolution.
    pub fn displayed_value(&self, df: &[f64], dh: &[f64]) -> Result<f64> {
        self.bracket(dh, df)
    }
}

/// Result of a Casimir check.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirReport {
    pub max_residual: f64,
    pub gradient_error: f64,
    pub passed: bool,
}

pub const CASIMIR_TOL: f64 = 1e-10;

/// Samples random `mu` and `dF` and reports the largest `|<mu, [dF, grad C]>|`.
/// The supplied gradient is also compared with central differences of `C`.
pub fn casimir_check(
    alg: &LieAlgebra,
    c: &dyn Fn(&[f64]) -> f64,
    grad: &dyn Fn(&[f64]) -> Vec<f64>,
    samples: usize,
    seed: u64,
) -> Result<CasimirReport> {
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut gerr = 0.0f64;
    for _ in 0..samples {
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let df: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = grad(&mu);
        check_len(&g, n)?;
        worst = worst.max(lie_poisson_bracket(alg, &mu, &df, &g)?.abs());
        for i in 0..n {
            let h = 1e-6;
            let mut a = mu.clone();
            let mut b = mu.clone();
            a[i] += h;
            b[i] -= h;
            gerr = gerr.max(((c(&a) - c(&b)) / (2.0 * h) - g[i]).abs());
        }
    }
    Ok(CasimirReport {
        max_residual: worst,
        gradient_error: gerr,
        passed: worst < CASIMIR_TOL,
    })
}

/// Two algebras with mutual actions `(eta > xi)^a = L^a_{alpha b} eta^alpha xi^b`
/// and `(eta < xi)^alpha = R^alpha_{beta b} eta^beta xi^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPairSpec {
    pub g: LieAlgebra,
    pub k: LieAlgebra,
    /// `L[a][alpha][b]`, flat, shape `n x m x n`.
    pub left: Vec<f64>,
    /// `R[alpha][beta][b]`, flat, shape `m x m x n`.
    pub right: Vec<f64>,
}

/// Residuals of the matched-pair conditions, each with its worst index tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    /// `eta > [xi1, xi2]` identity, tuple `(a, alpha, b, c)`.
    pub first: (f64, [usize; 4]),
    /// `[eta1, eta2] < xi` identity, tuple `(gamma, alpha, beta, b)`.
    pub second: (f64, [usize; 4]),
    /// Left action is a representation of k, tuple `(a, alpha, beta, b)`.
    pub left_rep: (f64, [usize; 4]),
    /// Right action is a right representation of g, tuple `(gamma, alpha, b, c)`.
    pub right_rep: (f64, [usize; 4]),
    pub tolerance: f64,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        [self.first.0, self.second.0, self.left_rep.0, self.right_rep.0]
            .iter()
            .all(|&r| r <= self.tolerance)
    }

    /// Name, residual and index tuple of the worst violated condition.
    pub fn worst(&self) -> (&'static str, f64, [usize; 4]) {
        let all = [
            ("first compatibility", self.first),
            ("second compatibility", self.second),
            ("left representation", self.left_rep),
            ("right representation", self.right_rep),
        ];
        let (name, (r, t)) = all
            .into_iter()
            .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
            .expect("non-empty");
        (name, r, t)
    }
}

fn track(worst: &mut (f64, [usize; 4]), r: f64, at: [usize; 4]) {
    if r.abs() > worst.0 {
        *worst = (r.abs(), at);
    }
}

impl MatchedPairSpec {
    pub fn new(g: LieAlgebra, k: LieAlgebra, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let (n, m) = (g.dim(), k.dim());
        check_len(&left, n * m * n)?;
        check_len(&right, m * m * n)?;
        Ok(Self { g, k, left, right })
    }

    /// Spec with both actions zero.
    pub fn direct(g: LieAlgebra, k: LieAlgebra) -> Self {
        let (n, m) = (g.dim(), k.dim());
        Self {
            left: vec![0.0; n * m * n],
            right: vec![0.0; m * m * n],
            g,
            k,
        }
    }

    fn l(&self, a: usize, alpha: usize, b: usize) -> f64 {
        let (n, m) = (self.g.dim(), self.k.dim());
        self.left[(a * m + alpha) * n + b]
    }

    fn r(&self, alpha: usize, beta: usize, b: usize) -> f64 {
        let (n, m) = (self.g.dim(), self.k.dim());
        self.right[(alpha * m + beta) * n + b]
    }

    pub fn compatibility(&self) -> CompatibilityReport {
        let (n, m) = (self.g.dim(), self.k.dim());
        let (g, k) = (&self.g, &self.k);
        let mut first = (0.0, [0; 4]);
        for a in 0..n {
            for al in 0..m {
                for b in 0..n {
                    for c in 0..n {
                        let mut lhs = 0.0;
                        let mut rhs = 0.0;
                        for d in 0..n {
                            lhs += self.l(a, al, d) * g.c(d, b, c);
                            rhs += g.c(a, d, c) * self.l(d, al, b) + g.c(a, b, d) * self.l(d, al, c);
                        }
                        for be in 0..m {
                            rhs += self.r(be, al, b) * self.l(a, be, c) - self.r(be, al, c) * self.l(a, be, b);
                        }
                        track(&mut first, lhs - rhs, [a, al, b, c]);
                    }
                }
            }
        }
        let mut second = (0.0, [0; 4]);
        for ga in 0..m {
            for al in 0..m {
                for be in 0..m {
                    for b in 0..n {
                        let mut lhs = 0.0;
                        let mut rhs = 0.0;
                        for de in 0..m {
                            lhs += self.r(ga, de, b) * k.c(de, al, be);
                            rhs += k.c(ga, al, de) * self.r(de, be, b) + k.c(ga, de, be) * self.r(de, al, b);
                        }
                        for d in 0..n {
                            rhs += self.r(ga, al, d) * self.l(d, be, b) - self.r(ga, be, d) * self.l(d, al, b);
                        }
                        track(&mut second, lhs - rhs, [ga, al, be, b]);
                    }
                }
            }
        }
        let mut left_rep = (0.0, [0; 4]);
        for a in 0..n {
            for al in 0..m {
                for be in 0..m {
                    for b in 0..n {
                        let mut r = 0.0;
                        for d in 0..n {
                            r += self.l(a, al, d) * self.l(d, be, b) - self.l(a, be, d) * self.l(d, al, b);
                        }
                        for de in 0..m {
                            r -= k.c(de, al, be) * self.l(a, de, b);
                        }
                        track(&mut left_rep, r, [a, al, be, b]);
                    }
                }
            }
        }
        let mut right_rep = (0.0, [0; 4]);
        for ga in 0..m {
            for al in 0..m {
                for b in 0..n {
                    for c in 0..n {
                        let mut r = 0.0;
                        for de in 0..m {
                            r += self.r(de, al, b) * self.r(ga, de, c) - self.r(de, al, c) * self.r(ga, de, b);
                        }
                        for d in 0..n {
                            r -= g.c(d, b, c) * self.r(ga, al, d);
                        }
                        track(&mut right_rep, r, [ga, al, b, c]);
                    }
                }
            }
        }
        let scale = [max_abs(&g.c), max_abs(&k.c), max_abs(&self.left), max_abs(&self.right)]
            .into_iter()
            .fold(0.0, f64::max);
        CompatibilityReport {
            first,
            second,
            left_rep,
            right_rep,
            tolerance: identity_tolerance(n + m, scale),
        }
    }

    /// Structure constants of `g x k` ordered with `g` first.
    fn matched_constants(&self) -> Vec<f64> {
        let (n, m) = (self.g.dim(), self.k.dim());
        let d = n + m;
        let mut c = vec![0.0; d * d * d];
        let mut set = |k: usize, i: usize, j: usize, v: f64| c[(k * d + i) * d + j] += v;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    set(k, i, j, self.g.c(k, i, j));
                }
            }
        }
        for ga in 0..m {
            for al in 0..m {
                for be in 0..m {
                    set(n + ga, n + al, n + be, self.k.c(ga, al, be));
                }
            }
        }
        // [(0, eta), (xi, 0)] = (eta > xi, eta < xi) and its mirror.
        for al in 0..m {
            for b in 0..n {
                for a in 0..n {
                    let v = self.l(a, al, b);
                    set(a, n + al, b, v);
                    set(a, b, n + al, -v);
                }
                for ga in 0..m {
                    let v = self.r(ga, al, b);
                    set(n + ga, n + al, b, v);
                    set(n + ga, b, n + al, -v);
                }
            }
        }
        c
    }
}

/// The matched algebra on `g + k` with bracket
/// `([xi1,xi2] + eta1 > xi2 - eta2 > xi1, [eta1,eta2] + eta1 < xi2 - eta2 < xi1)`.
pub fn matched_pair_algebra(spec: &MatchedPairSpec) -> Result<LieAlgebra> {
    let rep = spec.compatibility();
    if !rep.passed() {
        let (name, r, at) = rep.worst();
        return Err(Error::Validation(format!(
            "{name} condition violated: residual {r:.3e} at index tuple {at:?}"
        )));
    }
    LieAlgebra::new(spec.g.dim() + spec.k.dim(), spec.matched_constants())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
}

impl Num {
    fn value(&self) -> f64 {
        match *self {
            Num::Int(i) => i as f64,
            Num::Float(f) => f,
        }
    }
}

type Entry = (usize, usize, usize, Num);

fn entries(list: &[Entry]) -> Vec<(usize, usize, usize, f64)> {
    list.iter().map(|(a, b, c, v)| (*a, *b, *c, v.value())).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraConfig {
    dim: usize,
    #[serde(default)]
    c: Vec<Entry>,
}

impl AlgebraConfig {
    fn build(&self) -> Result<LieAlgebra> {
        LieAlgebra::from_entries(self.dim, &entries(&self.c))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatchedPairConfig {
    g: AlgebraConfig,
    k: AlgebraConfig,
    #[serde(default)]
    left_action: Vec<Entry>,
    #[serde(default)]
    right_action: Vec<Entry>,
}

/// Parses a single algebra: `dim = n` and `c = [[k, i, j, value], ...]`
/// with zero-based indices.
pub fn algebra_from_toml(text: &str) -> Result<LieAlgebra> {
    let cfg: AlgebraConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.build()
}

/// Parses a matched pair: tables `[g]` and `[k]` in the single-algebra
/// format, plus `left_action = [[a, alpha, b, value], ...]` and
/// `right_action = [[alpha, beta, b, value], ...]`. Missing entries are zero;
/// no antisymmetric filling is applied to the actions.
pub fn matched_pair_from_toml(text: &str) -> Result<MatchedPairSpec> {
    let cfg: MatchedPairConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let (g, k) = (cfg.g.build()?, cfg.k.build()?);
    let (n, m) = (g.dim(), k.dim());
    let mut left = vec![0.0; n * m * n];
    for (a, al, b, v) in entries(&cfg.left_action) {
        if a >= n || al >= m || b >= n {
            return Err(Error::Config(format!("left_action index ({a},{al},{b}) out of range")));
        }
        left[(a * m + al) * n + b] = v;
    }
    let mut right = vec![0.0; m * m * n];
    for (al, be, b, v) in entries(&cfg.right_action) {
        if al >= m || be >= m || b >= n {
            return Err(Error::Config(format!("right_action index ({al},{be},{b}) out of range")));
        }
        right[(al * m + be) * n + b] = v;
    }
    MatchedPairSpec::new(g, k, left, right)
}

pub fn matched_pair_from_file(path: &Path) -> Result<MatchedPairSpec> {
    matched_pair_from_toml(&std::fs::read_to_string(path)?)
}

/// Levi-Civita symbol on three indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `R^3` with so(3) acting by the cross product and no back-action.
pub fn se3_spec() -> MatchedPairSpec {
    let mut left = vec![0.0; 27];
    for a in 0..3 {
        for al in 0..3 {
            for b in 0..3 {
                left[(a * 3 + al) * 3 + b] = levi_civita(a, al, b);
            }
        }
    }
    MatchedPairSpec {
        g: LieAlgebra::abelian(3),
        k: LieAlgebra::so3(),
        left,
        right: vec![0.0; 27],
    }
}

/// sl(2) split as the Borel part `span(h, e)` and `span(f)`, with the
/// actions read off `[f, h] = 2f` and `[f, e] = -h`. Both actions are
/// non-zero.
pub fn sl2_borel_spec() -> MatchedPairSpec {
    let g = LieAlgebra::from_entries(2, &[(1, 0, 1, 2.0)]).expect("borel subalgebra");
    let k = LieAlgebra::abelian(1);
    // (f > e)^h = -1 and (f < h)^f = 2.
    let left = vec![0.0, -1.0, 0.0, 0.0];
    let right = vec![2.0, 0.0];
    MatchedPairSpec::new(g, k, left, right).expect("shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn so3_lie_poisson_values() {
        let so3 = LieAlgebra::so3();
        let v = lie_poisson_bracket(&so3, &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(v, 1.0);
        let x = [0.3, -0.2, 0.7];
        assert_eq!(lie_poisson_bracket(&so3, &[1.0, 2.0, 3.0], &x, &x).unwrap(), 0.0);
        let ab = LieAlgebra::abelian(3);
        assert_eq!(lie_poisson_bracket(&ab, &[1.0; 3], &x, &[1.0, 0.0, 2.0]).unwrap(), 0.0);
        assert!(lie_poisson_bracket(&so3, &[1.0; 2], &x, &x).is_err());
    }

    #[test]
    fn evolution_is_dual_to_bracket() {
        let so3 = LieAlgebra::so3();
        let mu = [0.4, -1.1, 0.3];
        let dh = [0.2, 0.5, -0.9];
        let md = lie_poisson_evolution(&so3, &mu, &dh).unwrap();
        for j in 0..3 {
            let mut e = [0.0; 3];
            e[j] = 1.0;
            let b = lie_poisson_bracket(&so3, &mu, &e, &dh).unwrap();
            assert!((md[j] - b).abs() < 1e-15);
        }
        assert_eq!(lie_poisson_evolution(&so3, &mu, &[0.0; 3]).unwrap(), vec![0.0; 3]);
        assert_eq!(lie_poisson_evolution(&LieAlgebra::abelian(3), &mu, &dh).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn invalid_constants_rejected() {
        let mut c = vec![0.0; 8];
        c[1] = 1.0; // c^0_{01} without partner
        assert!(LieAlgebra::new(2, c).is_err());
        // [e0,e1] = e2, [e0,e2] = e0 fails Jacobi on (e0, e1, e2).
        let bad = LieAlgebra::from_entries(3, &[(2, 0, 1, 1.0), (0, 0, 2, 1.0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn canonical_bracket_signs() {
        let cb = canonical_bracket_finite(1).unwrap();
        let m = 2.0;
        let (r, p) = (0.3, 1.4);
        let _ = r;
        let zd = cb.apply(&[0.0, p / m]).unwrap();
        assert_eq!(zd, vec![p / m, 0.0]);
        let df = [0.3, -0.7];
        let dh = [1.1, 0.2];
        assert_eq!(cb.bracket(&df, &df).unwrap(), 0.0);
        assert_eq!(cb.displayed_value(&df, &dh).unwrap(), -cb.bracket(&df, &dh).unwrap());
        assert!(canonical_bracket_finite(0).is_err());
    }

    #[test]
    fn casimir_checks() {
        let so3 = LieAlgebra::so3();
        let sq = |m: &[f64]| m.iter().map(|v| v * v).sum::<f64>();
        let sq_grad = |m: &[f64]| m.iter().map(|v| 2.0 * v).collect::<Vec<_>>();
        let rep = casimir_check(&so3, &sq, &sq_grad, 20, 1).unwrap();
        assert!(rep.passed && rep.gradient_error < 1e-8);
        let rep = casimir_check(&so3, &|_| 3.0, &|_| vec![0.0; 3], 20, 1).unwrap();
        assert!(rep.passed);
        let rep = casimir_check(&so3, &|m| m[0], &|_| vec![1.0, 0.0, 0.0], 50, 1).unwrap();
        assert!(!rep.passed && rep.max_residual > 0.1);
    }

    #[test]
    fn zero_actions_give_direct_product() {
        let spec = MatchedPairSpec::direct(LieAlgebra::so3(), LieAlgebra::so3());
        let alg = matched_pair_algebra(&spec).unwrap();
        for k in 0..6 {
            for i in 0..6 {
                for j in 0..6 {
                    let want = match (k < 3, i < 3, j < 3) {
                        (true, true, true) => levi_civita(i, j, k),
                        (false, false, false) => levi_civita(i - 3, j - 3, k - 3),
                        _ => 0.0,
                    };
                    assert_eq!(alg.c(k, i, j), want);
                }
            }
        }
        let one = matched_pair_algebra(&MatchedPairSpec::direct(LieAlgebra::abelian(1), LieAlgebra::abelian(1))).unwrap();
        assert_eq!(one, LieAlgebra::abelian(2));
    }

    #[test]
    fn se3_matches_hand_constants() {
        let alg = matched_pair_algebra(&se3_spec()).unwrap();
        // Ordering (P1,P2,P3,J1,J2,J3): [J_i,P_j] = eps_ijk P_k, [J_i,J_j] = eps_ijk J_k.
        let mut want = vec![0.0; 216];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    want[(k * 6 + 3 + i) * 6 + j] = e;
                    want[(k * 6 + j) * 6 + 3 + i] = -e;
                    want[((3 + k) * 6 + 3 + i) * 6 + 3 + j] = e;
                }
            }
        }
        assert_eq!(alg.constants(), &want[..]);
        assert!(alg.jacobi_residual().0 < 1e-14);
    }

    #[test]
    fn sl2_decomposition_is_matched() {
        let spec = sl2_borel_spec();
        let rep = spec.compatibility();
        assert!(rep.passed(), "{rep:?}");
        let alg = matched_pair_algebra(&spec).unwrap();
        // Reassembled basis (h, e, f) must reproduce sl(2).
        let sl2 = LieAlgebra::from_entries(3, &[(1, 0, 1, 2.0), (2, 0, 2, -2.0), (0, 1, 2, 1.0)]).unwrap();
        assert!(gap(alg.constants(), sl2.constants()) < 1e-15);
    }

    #[test]
    fn broken_action_is_located() {
        let mut spec = se3_spec();
        spec.left[5] += 0.5; // L[0][1][2]
        let err = matched_pair_algebra(&spec).unwrap_err().to_string();
        assert!(err.contains("index tuple"), "{err}");
    }

    #[test]
    fn config_round_trip() {
        let text = r#"
            left_action = [
              [2, 0, 1, 1], [1, 0, 2, -1], [0, 1, 2, 1],
              [2, 1, 0, -1], [1, 2, 0, 1], [0, 2, 1, -1],
            ]
            [g]
            dim = 3
            [k]
            dim = 3
            c = [[2, 0, 1, 1], [0, 1, 2, 1.0], [1, 2, 0, 1]]
        "#;
        let spec = matched_pair_from_toml(text).unwrap();
        assert_eq!(spec, se3_spec());
        assert!(matched_pair_from_toml("[g]\ndim = 2\nc = [[5, 0, 1, 1]]\n[k]\ndim = 1").is_err());
        let so3 = algebra_from_toml("dim = 3\nc = [[2,0,1,1],[0,1,2,1],[1,2,0,1]]").unwrap();
        assert_eq!(so3, LieAlgebra::so3());
    }
}
