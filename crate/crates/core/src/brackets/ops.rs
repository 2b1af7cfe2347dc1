//! Pointwise and differential kernels shared by the bracket implementations.

use crate::grid::Grid3;

pub type V3 = [Vec<f64>; 3];
pub type R3<'a> = [&'a [f64]; 3];

pub fn refs(v: &V3) -> R3<'_> {
    [&v[0], &v[1], &v[2]]
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

pub fn scale(a: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| a * x).collect()
}

pub fn scale3(a: f64, v: R3) -> V3 {
    std::array::from_fn(|i| scale(a, v[i]))
}

pub fn mul3(s: &[f64], v: R3) -> V3 {
    std::array::from_fn(|i| mul(s, v[i]))
}

pub fn add(acc: &mut [f64], a: f64, v: &[f64]) {
    for (x, y) in acc.iter_mut().zip(v) {
        *x += a * y;
    }
}

pub fn add3(acc: &mut V3, a: f64, v: R3) {
    for i in 0..3 {
        add(&mut acc[i], a, v[i]);
    }
}

pub fn zeros3(n: usize) -> V3 {
    std::array::from_fn(|_| vec![0.0; n])
}

pub fn cross(a: R3, b: R3) -> V3 {
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        a[j].iter()
            .zip(b[k])
            .zip(a[k].iter().zip(b[j]))
            .map(|((aj, bk), (ak, bj))| aj * bk - ak * bj)
            .collect()
    })
}

pub fn dot3(a: R3, b: R3) -> Vec<f64> {
    let mut out = mul(a[0], b[0]);
    add(&mut out, 1.0, &mul(a[1], b[1]));
    add(&mut out, 1.0, &mul(a[2], b[2]));
    out
}

/// `-div(s b)`: the continuity term for an advected density.
pub fn transport(g: &Grid3, s: &[f64], b: R3) -> Vec<f64> {
    let flux = mul3(s, b);
    scale(-1.0, &g.div(refs(&flux)))
}

/// `-s grad h`.
pub fn grad_force(g: &Grid3, s: &[f64], h: &[f64]) -> V3 {
    std::array::from_fn(|i| {
        let d = g.d(h, i);
        s.iter().zip(&d).map(|(a, b)| -a * b).collect()
    })
}

/// Momentum self-interaction `-d_j(u_i b_j) - u_j d_i b_j`.
pub fn momentum_self(g: &Grid3, u: R3, b: R3) -> V3 {
    let n = g.len();
    let mut out = zeros3(n);
    for i in 0..3 {
        for j in 0..3 {
            add(&mut out[i], -1.0, &g.d(&mul(u[i], b[j]), j));
            add(&mut out[i], -1.0, &mul(u[j], &g.d(b[j], i)));
        }
    }
    out
}

/// How the momentum field acts on an advected variable. Each kind carries
/// the action `X > w`, its transpose `T` with `<T(X, a), w> = <a, X > w>`,
/// and the diamond `P` with `<Y, P(w, a)> = <a, Y > w>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    /// Scalar function: `X > s = -X . grad s`.
    Function,
    /// One-form: `X > w = -(X^j d_j w_i + w_j d_i X^j)`.
    OneForm,
    /// Divergence-free two-form written as a vector: `X > B = curl(X x B)`.
    TwoForm,
}

impl ActionKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "function" | "scalar" => Some(ActionKind::Function),
            "one_form" | "oneform" => Some(ActionKind::OneForm),
            "two_form" | "twoform" => Some(ActionKind::TwoForm),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Function => "function",
            ActionKind::OneForm => "one_form",
            ActionKind::TwoForm => "two_form",
        }
    }

    pub fn is_scalar(self) -> bool {
        self == ActionKind::Function
    }
}

/// Advected variable values: one component for functions, three otherwise.
pub type Comps<'a> = Vec<&'a [f64]>;

pub fn act(g: &Grid3, kind: ActionKind, x: R3, w: &Comps) -> Vec<Vec<f64>> {
    match kind {
        ActionKind::Function => {
            let mut out = vec![0.0; g.len()];
            for j in 0..3 {
                add(&mut out, -1.0, &mul(x[j], &g.d(w[0], j)));
            }
            vec![out]
        }
        ActionKind::OneForm => (0..3)
            .map(|i| {
                let mut out = vec![0.0; g.len()];
                for j in 0..3 {
                    add(&mut out, -1.0, &mul(x[j], &g.d(w[i], j)));
                    add(&mut out, -1.0, &mul(w[j], &g.d(x[j], i)));
                }
                out
            })
            .collect(),
        ActionKind::TwoForm => {
            let xb = cross(x, [w[0], w[1], w[2]]);
            g.rot(refs(&xb)).to_vec()
        }
    }
}

pub fn act_transpose(g: &Grid3, kind: ActionKind, x: R3, a: &Comps) -> Vec<Vec<f64>> {
    match kind {
        ActionKind::Function => {
            let flux = mul3(a[0], x);
            vec![g.div(refs(&flux))]
        }
        ActionKind::OneForm => (0..3)
            .map(|j| {
                let flux = mul3(a[j], x);
                let mut out = g.div(refs(&flux));
                for i in 0..3 {
                    add(&mut out, -1.0, &mul(a[i], &g.d(x[j], i)));
                }
                out
            })
            .collect(),
        ActionKind::TwoForm => {
            let c = g.rot([a[0], a[1], a[2]]);
            cross(refs(&c), x).to_vec()
        }
    }
}

pub fn diamond(g: &Grid3, kind: ActionKind, w: &Comps, a: &Comps) -> V3 {
    match kind {
        ActionKind::Function => std::array::from_fn(|j| scale(-1.0, &mul(a[0], &g.d(w[0], j)))),
        ActionKind::OneForm => std::array::from_fn(|j| {
            let mut out = vec![0.0; g.len()];
            for i in 0..3 {
                add(&mut out, -1.0, &mul(a[i], &g.d(w[i], j)));
                add(&mut out, 1.0, &g.d(&mul(a[i], w[j]), i));
            }
            out
        }),
        ActionKind::TwoForm => {
            let c = g.rot([a[0], a[1], a[2]]);
            cross([w[0], w[1], w[2]], refs(&c))
        }
    }
}
