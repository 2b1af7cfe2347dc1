//! The fourteen catalog brackets, hand-coded.
//!
//! Throughout, `a = F_M` and `b = H_M` (or `F_u`, `H_u`) denote the momentum
//! components of the two covectors. Only the `b` side appears in tangents.

use std::sync::Arc;

use super::ops::*;
use super::{direct_product, renamed, Bracket, Constraint, Structure};
use crate::error::Result;
use crate::functional::AnalyticFunctional;
use crate::grid::PhaseGrid;
use crate::state::{Constants, FieldKind, State, StateSchema};

fn schema(vars: &[(&str, FieldKind)]) -> Arc<StateSchema> {
    Arc::new(StateSchema::of(vars).expect("catalog schema"))
}

fn divergence_of(var: &str) -> impl Fn(&Constants, &State) -> Result<Vec<f64>> + Send + Sync + 'static {
    let var = var.to_string();
    move |_, x| Ok(x.space().div(x.vector(&var)?))
}

// ---------------------------------------------------------------- em

/// Canonical electrodynamics on `(A, Y)`:
/// `{F,H} = (1/eps0) int (F_A . H_Y - H_A . F_Y)`.
pub struct EmCanonical {
    a: String,
    y: String,
}

pub fn em_canonical() -> EmCanonical {
    EmCanonical {
        a: "A".into(),
        y: "Y".into(),
    }
}

impl Bracket for EmCanonical {
    fn name(&self) -> String {
        "em_canonical".into()
    }

    fn schema(&self) -> Arc<StateSchema> {
        schema(&[(&self.a, FieldKind::Vector), (&self.y, FieldKind::Vector)])
    }

    fn structure(&self) -> Structure {
        Structure::Constant
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let mut out = x.zeros_like();
        out.add_to(&self.a, 1.0 / k.eps0, dh.field(&self.y)?)?;
        out.add_to(&self.y, -1.0 / k.eps0, dh.field(&self.a)?)?;
        Ok(out)
    }
}

/// Maxwell bracket on `(E, B)`:
/// `{F,H} = (1/eps0) int (F_E . curl H_B - H_E . curl F_B)`.
pub struct Em {
    e: String,
    b: String,
}

pub fn em() -> Em {
    Em {
        e: "E".into(),
        b: "B".into(),
    }
}

fn em_part(k: &Constants, x: &State, dh: &State, e: &str, b: &str, out: &mut State) -> Result<()> {
    let g = x.space();
    out.add_vector(e, 1.0 / k.eps0, &g.rot(dh.vector(b)?))?;
    out.add_vector(b, -1.0 / k.eps0, &g.rot(dh.vector(e)?))?;
    Ok(())
}

impl Bracket for Em {
    fn name(&self) -> String {
        "em".into()
    }

    fn schema(&self) -> Arc<StateSchema> {
        schema(&[(&self.e, FieldKind::Vector), (&self.b, FieldKind::Vector)])
    }

    fn structure(&self) -> Structure {
        Structure::Constant
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let mut out = x.zeros_like();
        em_part(k, x, dh, &self.e, &self.b, &mut out)?;
        Ok(out)
    }

    fn constraints(&self) -> Vec<Constraint> {
        vec![
            Constraint::new("div_B", divergence_of(&self.b)),
            Constraint::new("div_E", divergence_of(&self.e)),
        ]
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        vec![AnalyticFunctional::integral(&self.e), AnalyticFunctional::integral(&self.b)]
    }
}

// ---------------------------------------------------------------- kinetic

/// `-d_r . (f d_p h) + d_p . (f d_r h)`.
fn vlasov_kernel(pg: &PhaseGrid, f: &[f64], h: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    let sd = pg.spatial().dims();
    let pd = pg.pdims();
    for i in 0..3 {
        if sd[i] == 1 || pd[i] == 1 {
            continue;
        }
        let dph = pg.d(h, 3 + i);
        add(&mut out, -1.0, &pg.d(&mul(f, &dph), i));
        let drh = pg.d(h, i);
        add(&mut out, 1.0, &pg.d(&mul(f, &drh), 3 + i));
    }
    out
}

/// Vlasov bracket `{F,H} = int f (d_r F_f . d_p H_f - d_r H_f . d_p F_f)`.
pub struct Vlasov {
    f: String,
}

pub fn vlasov() -> Vlasov {
    Vlasov { f: "f".into() }
}

impl Bracket for Vlasov {
    fn name(&self) -> String {
        "vlasov".into()
    }

    fn schema(&self) -> Arc<StateSchema> {
        schema(&[(&self.f, FieldKind::Phase)])
    }

    fn structure(&self) -> Structure {
        Structure::Linear
    }

    fn tangent(&self, _k: &Constants, x: &State, dh: &State) -> Result<State> {
        let pg = x.domain().phase()?;
        let mut out = x.zeros_like();
        out.set(&self.f, vlasov_kernel(pg, x.phase(&self.f)?, dh.phase(&self.f)?))?;
        Ok(out)
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        vec![
            AnalyticFunctional::integral(&self.f),
            AnalyticFunctional::power_integral(&self.f, 2),
            AnalyticFunctional::power_integral(&self.f, 3),
        ]
    }
}

/// Kinetic electrodynamics for one or two species sharing `(E, B)`.
pub struct Ked {
    name: String,
    species: Vec<(String, usize)>,
    e: String,
    b: String,
}

pub fn ked() -> Ked {
    Ked {
        name: "ked".into(),
        species: vec![("f".into(), 0)],
        e: "E".into(),
        b: "B".into(),
    }
}

pub fn ked_binary() -> Ked {
    Ked {
        name: "ked_binary".into(),
        species: vec![("f1".into(), 0), ("f2".into(), 1)],
        e: "E".into(),
        b: "B".into(),
    }
}

impl Bracket for Ked {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn schema(&self) -> Arc<StateSchema> {
        let mut v: Vec<(&str, FieldKind)> = self.species.iter().map(|(f, _)| (f.as_str(), FieldKind::Phase)).collect();
        v.push((&self.e, FieldKind::Vector));
        v.push((&self.b, FieldKind::Vector));
        schema(&v)
    }

    fn structure(&self) -> Structure {
        Structure::Linear
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let pg = x.domain().phase()?;
        let mut out = x.zeros_like();
        em_part(k, x, dh, &self.e, &self.b, &mut out)?;
        let he = dh.vector(&self.e)?;
        let bb = x.vector(&self.b)?;
        let bp: V3 = std::array::from_fn(|i| pg.broadcast(bb[i]));
        let hep: V3 = std::array::from_fn(|i| pg.broadcast(he[i]));
        for (fname, alpha) in &self.species {
            let zq = k.species(*alpha)?.z * k.e;
            let f = x.phase(fname)?;
            let hf = dh.phase(fname)?;
            let mut fdot = vlasov_kernel(pg, f, hf);
            let dpf: V3 = std::array::from_fn(|i| pg.d(f, 3 + i));
            let mut edot = zeros3(x.space().len());
            for i in 0..3 {
                // E-f exchange.
                edot[i] = pg.momentum_integral(&mul(&dpf[i], hf));
                add(&mut fdot, -zq / k.eps0, &mul(&dpf[i], &hep[i]));
            }
            out.add_vector(&self.e, zq / k.eps0, &edot)?;
            // Magnetic term: -z e d_p . (f (d_p H_f x B)).
            let dph: V3 = std::array::from_fn(|i| pg.d(hf, 3 + i));
            let c = cross(refs(&dph), refs(&bp));
            for i in 0..3 {
                add(&mut fdot, -zq, &pg.d(&mul(f, &c[i]), 3 + i));
            }
            out.add_to(fname, 1.0, &fdot)?;
        }
        Ok(out)
    }

    fn constraints(&self) -> Vec<Constraint> {
        let species = self.species.clone();
        let e = self.e.clone();
        vec![
            Constraint::new("gauss", move |k, x| {
                let pg = x.domain().phase()?;
                let mut r = x.space().div(x.vector(&e)?);
                for (f, alpha) in &species {
                    let zq = k.species(*alpha)?.z * k.e;
                    add(&mut r, -zq / k.eps0, &pg.momentum_integral(x.phase(f)?));
                }
                Ok(r)
            }),
            Constraint::new("div_B", divergence_of(&self.b)),
        ]
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        self.species.iter().map(|(f, _)| AnalyticFunctional::integral(f)).collect()
    }
}

// ---------------------------------------------------------------- fluids

/// Fluid with one momentum, any number of advected densities and one
/// entropy: `u_dot = -d_j(u_i b_j) - u_j d_i b_j - sum rho grad H_rho - s grad H_s`,
/// `rho_dot = -div(rho b)`, `s_dot = -div(s b)`.
fn fluid_part(x: &State, dh: &State, u: &str, rhos: &[&str], s: &str, out: &mut State) -> Result<()> {
    let g = x.space();
    let b = dh.vector(u)?;
    let mut udot = momentum_self(g, x.vector(u)?, b);
    for &r in rhos.iter().chain(std::iter::once(&s)) {
        let rho = x.scalar(r)?;
        add3(&mut udot, 1.0, refs(&grad_force(g, rho, dh.scalar(r)?)));
        out.add_to(r, 1.0, &transport(g, rho, b))?;
    }
    out.add_vector(u, 1.0, &udot)?;
    Ok(())
}

/// Compressible-fluid bracket on `(u, rho_1.., s)`.
pub struct Fluid {
    name: String,
    u: String,
    rhos: Vec<String>,
    s: String,
}

pub fn hydro() -> Fluid {
    hydro_named("u", "rho", "s")
}

/// `hydro` on custom variable names.
pub fn hydro_named(u: &str, rho: &str, s: &str) -> Fluid {
    Fluid {
        name: "hydro".into(),
        u: u.into(),
        rhos: vec![rho.into()],
        s: s.into(),
    }
}

pub fn classical_binary() -> Fluid {
    Fluid {
        name: "classical_binary".into(),
        u: "u".into(),
        rhos: vec!["rho1".into(), "rho2".into()],
        s: "s".into(),
    }
}

/// Two independent fluids `(u1, rho1, s1)` and `(u2, rho2, s2)`.
pub fn hydro_binary() -> Arc<dyn Bracket> {
    let one: Arc<dyn Bracket> = Arc::new(hydro_named("u1", "rho1", "s1"));
    let two: Arc<dyn Bracket> = Arc::new(hydro_named("u2", "rho2", "s2"));
    let mut d = direct_product(one, two).expect("disjoint names");
    d.set_name("hydro_binary");
    Arc::new(d)
}

impl Fluid {
    fn rho_refs(&self) -> Vec<&str> {
        self.rhos.iter().map(String::as_str).collect()
    }
}

impl Bracket for Fluid {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn schema(&self) -> Arc<StateSchema> {
        let mut v = vec![(self.u.as_str(), FieldKind::Vector)];
        v.extend(self.rhos.iter().map(|r| (r.as_str(), FieldKind::Scalar)));
        v.push((&self.s, FieldKind::Scalar));
        schema(&v)
    }

    fn structure(&self) -> Structure {
        Structure::Linear
    }

    fn tangent(&self, _k: &Constants, x: &State, dh: &State) -> Result<State> {
        let mut out = x.zeros_like();
        fluid_part(x, dh, &self.u, &self.rho_refs(), &self.s, &mut out)?;
        Ok(out)
    }

    fn positive_vars(&self) -> Vec<String> {
        self.rhos.clone()
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        self.rhos
            .iter()
            .chain(std::iter::once(&self.s))
            .map(|v| AnalyticFunctional::integral(v))
            .collect()
    }
}

/// Charged fluids in velocity-momentum form coupled to `(E, B)`.
///
/// Each group has its own momentum `u`, entropy `s` and one or more charged
/// densities. Per density with `c = z e / m`:
/// `(c/eps0) rho (F_u . H_E - H_u . F_E) + c rho B . (F_u x H_u)`.
pub struct ChargedFluids {
    name: String,
    groups: Vec<Group>,
    e: String,
    b: String,
}

struct Group {
    u: String,
    rhos: Vec<(String, usize)>,
    s: String,
}

pub fn emhd() -> ChargedFluids {
    ChargedFluids {
        name: "emhd".into(),
        groups: vec![Group {
            u: "u".into(),
            rhos: vec![("rho".into(), 0)],
            s: "s".into(),
        }],
        e: "E".into(),
        b: "B".into(),
    }
}

pub fn bemhd() -> ChargedFluids {
    let group = |i: usize| Group {
        u: format!("u{}", i + 1),
        rhos: vec![(format!("rho{}", i + 1), i)],
        s: format!("s{}", i + 1),
    };
    ChargedFluids {
        name: "bemhd".into(),
        groups: vec![group(0), group(1)],
        e: "E".into(),
        b: "B".into(),
    }
}

pub fn cbemhd() -> ChargedFluids {
    ChargedFluids {
        name: "cbemhd".into(),
        groups: vec![Group {
            u: "u".into(),
            rhos: vec![("rho1".into(), 0), ("rho2".into(), 1)],
            s: "s".into(),
        }],
        e: "E".into(),
        b: "B".into(),
    }
}

impl Bracket for ChargedFluids {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn schema(&self) -> Arc<StateSchema> {
        let mut v: Vec<(&str, FieldKind)> = Vec::new();
        for g in &self.groups {
            v.extend(g.rhos.iter().map(|(r, _)| (r.as_str(), FieldKind::Scalar)));
        }
        for g in &self.groups {
            v.push((&g.u, FieldKind::Vector));
        }
        for g in &self.groups {
            v.push((&g.s, FieldKind::Scalar));
        }
        v.push((&self.e, FieldKind::Vector));
        v.push((&self.b, FieldKind::Vector));
        schema(&v)
    }

    fn structure(&self) -> Structure {
        Structure::Linear
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let mut out = x.zeros_like();
        em_part(k, x, dh, &self.e, &self.b, &mut out)?;
        let he = dh.vector(&self.e)?;
        let bb = x.vector(&self.b)?;
        for grp in &self.groups {
            let rhos: Vec<&str> = grp.rhos.iter().map(|(r, _)| r.as_str()).collect();
            fluid_part(x, dh, &grp.u, &rhos, &grp.s, &mut out)?;
            let hu = dh.vector(&grp.u)?;
            let lorentz = cross(hu, bb);
            for (r, alpha) in &grp.rhos {
                let c = k.charge_over_mass(*alpha)?;
                let rho = x.scalar(r)?;
                out.add_vector(&grp.u, c / k.eps0, &mul3(rho, he))?;
                out.add_vector(&self.e, -c / k.eps0, &mul3(rho, hu))?;
                out.add_vector(&grp.u, c, &mul3(rho, refs(&lorentz)))?;
            }
        }
        Ok(out)
    }

    fn positive_vars(&self) -> Vec<String> {
        self.groups.iter().flat_map(|g| g.rhos.iter().map(|(r, _)| r.clone())).collect()
    }

    fn constraints(&self) -> Vec<Constraint> {
        let rhos: Vec<(String, usize)> = self.groups.iter().flat_map(|g| g.rhos.clone()).collect();
        let e = self.e.clone();
        vec![
            Constraint::new("gauss", move |k, x| {
                let mut r = x.space().div(x.vector(&e)?);
                for (rho, alpha) in &rhos {
                    add(&mut r, -k.charge_over_mass(*alpha)? / k.eps0, x.scalar(rho)?);
                }
                Ok(r)
            }),
            Constraint::new("div_B", divergence_of(&self.b)),
        ]
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        let mut c = Vec::new();
        for g in &self.groups {
            c.extend(g.rhos.iter().map(|(r, _)| AnalyticFunctional::integral(r)));
            c.push(AnalyticFunctional::integral(&g.s));
        }
        c
    }
}

/// Fluid in total momentum `M` with electric and/or magnetic fields
/// Lie-dragged by `M`.
///
/// Field terms for `V` in `{E, B}`:
/// `int V . [(b.grad) F_V - (a.grad) H_V] + a . (V.grad) H_V - b . (V.grad) F_V`.
/// With `E` present the charge term `(ze/(m eps0)) rho (a . H_E - b . F_E)` is
/// added; with both fields the Maxwell bracket and the closure
/// `int [(eps0 div E - z e rho/m) B - eps0 (div B) E] . (a x b)` are added.
pub struct TotalMomentum {
    name: String,
    rho: String,
    m: String,
    s: String,
    e: Option<String>,
    b: Option<String>,
}

pub fn mhd() -> TotalMomentum {
    TotalMomentum {
        name: "mhd".into(),
        rho: "rho".into(),
        m: "M".into(),
        s: "s".into(),
        e: None,
        b: Some("B".into()),
    }
}

pub fn ehd() -> TotalMomentum {
    TotalMomentum {
        name: "ehd".into(),
        rho: "rho".into(),
        m: "M".into(),
        s: "s".into(),
        e: Some("E".into()),
        b: None,
    }
}

pub fn emhd_total() -> TotalMomentum {
    TotalMomentum {
        name: "emhd_total".into(),
        rho: "rho".into(),
        m: "M".into(),
        s: "s".into(),
        e: Some("E".into()),
        b: Some("B".into()),
    }
}

/// Lie-drag terms of a vector field `v`: returns `(v_dot, M_dot)`.
fn drag_terms(x: &State, dh: &State, m: &str, v: &str) -> Result<(V3, V3)> {
    let g = x.space();
    let n = g.len();
    let vv = x.vector(v)?;
    let b = dh.vector(m)?;
    let hv = dh.vector(v)?;
    let mut vdot = zeros3(n);
    let mut mdot = zeros3(n);
    for i in 0..3 {
        for j in 0..3 {
            add(&mut vdot[i], 1.0, &g.d(&mul(b[i], vv[j]), j));
            add(&mut vdot[i], -1.0, &g.d(&mul(vv[i], b[j]), j));
            add(&mut mdot[i], 1.0, &mul(vv[j], &g.d(hv[i], j)));
            add(&mut mdot[i], -1.0, &mul(vv[j], &g.d(hv[j], i)));
        }
    }
    Ok((vdot, mdot))
}

impl Bracket for TotalMomentum {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn schema(&self) -> Arc<StateSchema> {
        let mut v = vec![
            (self.rho.as_str(), FieldKind::Scalar),
            (self.m.as_str(), FieldKind::Vector),
            (self.s.as_str(), FieldKind::Scalar),
        ];
        if let Some(e) = &self.e {
            v.push((e, FieldKind::Vector));
        }
        if let Some(b) = &self.b {
            v.push((b, FieldKind::Vector));
        }
        schema(&v)
    }

    fn structure(&self) -> Structure {
        if self.e.is_some() && self.b.is_some() {
            Structure::Nonlinear
        } else {
            Structure::Linear
        }
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let g = x.space();
        let mut out = x.zeros_like();
        fluid_part(x, dh, &self.m, &[&self.rho], &self.s, &mut out)?;
        for v in [&self.e, &self.b].into_iter().flatten() {
            let (vdot, mdot) = drag_terms(x, dh, &self.m, v)?;
            out.add_vector(v, 1.0, &vdot)?;
            out.add_vector(&self.m, 1.0, &mdot)?;
        }
        let c = k.charge_over_mass(0)?;
        let rho = x.scalar(&self.rho)?;
        if let Some(e) = &self.e {
            out.add_vector(&self.m, c / k.eps0, &mul3(rho, dh.vector(e)?))?;
            out.add_vector(e, -c / k.eps0, &mul3(rho, dh.vector(&self.m)?))?;
        }
        if let (Some(e), Some(b)) = (&self.e, &self.b) {
            em_part(k, x, dh, e, b, &mut out)?;
            let ev = x.vector(e)?;
            let bv = x.vector(b)?;
            let dive = g.div(ev);
            let divb = g.div(bv);
            let coef: Vec<f64> = dive.iter().zip(rho).map(|(d, r)| k.eps0 * d - c * r).collect();
            let mut w = mul3(&coef, bv);
            add3(&mut w, -k.eps0, refs(&mul3(&divb, ev)));
            let closure = cross(dh.vector(&self.m)?, refs(&w));
            out.add_vector(&self.m, 1.0, &closure)?;
        }
        Ok(out)
    }

    fn positive_vars(&self) -> Vec<String> {
        vec![self.rho.clone()]
    }

    fn constraints(&self) -> Vec<Constraint> {
        let mut c = Vec::new();
        if let Some(e) = &self.e {
            let (e, rho) = (e.clone(), self.rho.clone());
            c.push(Constraint::new("gauss", move |k, x| {
                let mut r = x.space().div(x.vector(&e)?);
                add(&mut r, -k.charge_over_mass(0)? / k.eps0, x.scalar(&rho)?);
                Ok(r)
            }));
        }
        if let Some(b) = &self.b {
            c.push(Constraint::new("div_B", divergence_of(b)));
        }
        c
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        let mut c = vec![AnalyticFunctional::integral(&self.rho), AnalyticFunctional::integral(&self.s)];
        if self.e.is_none() {
            if let Some(b) = &self.b {
                c.push(AnalyticFunctional::integral(b));
            }
        }
        c
    }
}

/// `em` on renamed fields, e.g. two independent Maxwell systems.
pub fn em_named(e: &str, b: &str) -> Arc<dyn Bracket> {
    Arc::new(renamed(Arc::new(em()), &[("E", e), ("B", b)]).expect("valid renaming"))
}
