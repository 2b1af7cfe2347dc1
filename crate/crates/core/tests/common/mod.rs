//! Hand-coded evolution equations and smooth random states shared by the
//! integration targets.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use hamcouple::brackets::{self, Bracket};
use hamcouple::dynamics::{eos_ideal, EosParams};
use hamcouple::grid::Grid3;
use hamcouple::state::{Constants, Domain, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type V3 = [Vec<f64>; 3];

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn grad(g: &Grid3, s: &[f64]) -> V3 {
    g.gradient(s).unwrap()
}

pub fn div(g: &Grid3, v: [&[f64]; 3]) -> Vec<f64> {
    g.divergence(v).unwrap()
}

pub fn curl(g: &Grid3, v: [&[f64]; 3]) -> V3 {
    g.curl(v).unwrap()
}

pub fn r3(v: &V3) -> [&[f64]; 3] {
    [&v[0], &v[1], &v[2]]
}

/// Random smooth field: background plus a few low Fourier modes.
pub fn smooth(g: &Grid3, rng: &mut ChaCha8Rng, base: f64, amp: f64) -> Vec<f64> {
    let l = g.lengths();
    let modes: Vec<([f64; 3], f64, f64)> = (0..3)
        .map(|_| {
            let k = [
                rng.gen_range(0..=1) as f64,
                if g.dims()[1] > 1 { rng.gen_range(0..=1) as f64 } else { 0.0 },
                0.0,
            ];
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    g.sample(|r| {
        base + amp
            * modes
                .iter()
                .map(|(k, a, ph)| a * (2.0 * PI * (k[0] * r[0] / l[0] + k[1] * r[1] / l[1]) + ph).sin())
                .sum::<f64>()
    })
}

pub fn euler_state(dom: &Arc<Domain>, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = dom.space();
    let b = brackets::hydro();
    let mut x = State::zeros(dom, &b.schema()).unwrap();
    x.set("rho", smooth(g, &mut rng, 1.0, 0.1)).unwrap();
    x.set("s", smooth(g, &mut rng, 0.5, 0.05)).unwrap();
    let u = [smooth(g, &mut rng, 0.0, 0.1), smooth(g, &mut rng, 0.0, 0.1), smooth(g, &mut rng, 0.0, 0.1)];
    x.set_vector("u", u).unwrap();
    x
}

/// `rho_t = -d_i u_i`, `u_t = -d_j(u_i u_j / rho) - rho d_i eps_rho - s d_i eps_s`,
/// `s_t = -d_i(s u_i / rho)`.
pub fn euler_hand(x: &State, eos: &EosParams) -> State {
    let g = x.space();
    let rho = x.scalar("rho").unwrap();
    let s = x.scalar("s").unwrap();
    let u = x.vector("u").unwrap();
    let e: Vec<_> = rho.iter().zip(s).map(|(&r, &s)| eos_ideal(r, s, eos).unwrap()).collect();
    let er: Vec<f64> = e.iter().map(|e| e.e_rho).collect();
    let es: Vec<f64> = e.iter().map(|e| e.e_s).collect();
    let (ger, ges) = (grad(g, &er), grad(g, &es));
    let n = g.len();
    let mut out = x.zeros_like();
    out.set("rho", div(g, u).iter().map(|v| -v).collect()).unwrap();
    let flux_s: V3 = std::array::from_fn(|i| (0..n).map(|p| s[p] * u[i][p] / rho[p]).collect());
    out.set("s", div(g, r3(&flux_s)).iter().map(|v| -v).collect()).unwrap();
    let mut ud: V3 = std::array::from_fn(|_| vec![0.0; n]);
    for i in 0..3 {
        let row: V3 = std::array::from_fn(|j| (0..n).map(|p| u[i][p] * u[j][p] / rho[p]).collect());
        let d = div(g, r3(&row));
        for p in 0..n {
            ud[i][p] = -d[p] - rho[p] * ger[i][p] - s[p] * ges[i][p];
        }
    }
    out.set_vector("u", ud).unwrap();
    out
}

pub fn mhd_state(dom: &Arc<Domain>, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = dom.space();
    let b = brackets::mhd();
    let n = g.len();
    let mut x = State::zeros(dom, &b.schema()).unwrap();
    x.set("rho", smooth(g, &mut rng, 1.0, 0.1)).unwrap();
    x.set("s", smooth(g, &mut rng, 0.5, 0.05)).unwrap();
    x.set_vector("M", [smooth(g, &mut rng, 0.0, 0.1), smooth(g, &mut rng, 0.0, 0.1), vec![0.0; n]])
        .unwrap();
    // B_x uniform so div B = 0 in one dimension.
    x.set_vector("B", [vec![0.3; n], smooth(g, &mut rng, 0.5, 0.1), smooth(g, &mut rng, 0.0, 0.1)])
        .unwrap();
    x
}

/// `rho_t = -div M`, `M_t = -grad p - div(M M / rho) + (curl B) x B / mu0`,
/// `s_t = -div(s M / rho)`, `B_t = curl((M / rho) x B)`.
pub fn mhd_hand(x: &State, k: &Constants, eos: &EosParams) -> State {
    let g = x.space();
    let n = g.len();
    let rho = x.scalar("rho").unwrap();
    let s = x.scalar("s").unwrap();
    let m = x.vector("M").unwrap();
    let b = x.vector("B").unwrap();
    let p: Vec<f64> = rho.iter().zip(s).map(|(&r, &s)| eos_ideal(r, s, eos).unwrap().p).collect();
    let gp = grad(g, &p);
    let v: V3 = std::array::from_fn(|i| (0..n).map(|q| m[i][q] / rho[q]).collect());
    let j = curl(g, b);
    let mut out = x.zeros_like();
    out.set("rho", div(g, m).iter().map(|d| -d).collect()).unwrap();
    let sv: V3 = std::array::from_fn(|i| (0..n).map(|q| s[q] * v[i][q]).collect());
    out.set("s", div(g, r3(&sv)).iter().map(|d| -d).collect()).unwrap();
    let cross = |a: &V3, c: [&[f64]; 3]| -> V3 {
        std::array::from_fn(|i| {
            let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
            (0..n).map(|q| a[i1][q] * c[i2][q] - a[i2][q] * c[i1][q]).collect()
        })
    };
    let lorentz = cross(&j, b);
    let md: V3 = std::array::from_fn(|i| {
        let row: V3 = std::array::from_fn(|l| (0..n).map(|q| m[i][q] * v[l][q]).collect());
        let d = div(g, r3(&row));
        (0..n).map(|q| -gp[i][q] - d[q] + lorentz[i][q] / k.mu0).collect()
    });
    out.set_vector("M", md).unwrap();
    out.set_vector("B", curl(g, r3(&cross(&v, b)))).unwrap();
    out
}
