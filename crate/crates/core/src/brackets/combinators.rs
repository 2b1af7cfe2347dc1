//! Bracket combinators: direct products, renamings and semidirect coupling
//! of a momentum bracket with Lie-dragged variables.

use std::collections::HashMap;
use std::sync::Arc;

use super::ops::{act, act_transpose, diamond, momentum_self, ActionKind, Comps};
use super::{Bracket, Constraint, Structure};
use crate::error::{Error, Result};
use crate::functional::{AnalyticFunctional, Functional};
use crate::state::{Constants, FieldKind, State, StateSchema, VarSpec};

fn combine(a: Structure, b: Structure) -> Structure {
    use Structure::*;
    match (a, b) {
        (Nonlinear, _) | (_, Nonlinear) => Nonlinear,
        (Linear, _) | (_, Linear) => Linear,
        _ => Constant,
    }
}

/// Blockwise sum of two brackets on disjoint variables.
pub struct DirectProduct {
    name: String,
    parts: [Arc<dyn Bracket>; 2],
    schema: Arc<StateSchema>,
}

pub fn direct_product(a: Arc<dyn Bracket>, b: Arc<dyn Bracket>) -> Result<DirectProduct> {
    let schema = Arc::new(a.schema().concat(&b.schema())?);
    Ok(DirectProduct {
        name: format!("direct({},{})", a.name(), b.name()),
        parts: [a, b],
        schema,
    })
}

impl DirectProduct {
    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }
}

impl Bracket for DirectProduct {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn schema(&self) -> Arc<StateSchema> {
        self.schema.clone()
    }

    fn structure(&self) -> Structure {
        combine(self.parts[0].structure(), self.parts[1].structure())
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let mut out = x.zeros_like();
        for p in &self.parts {
            let s = p.schema();
            let t = p.tangent(k, &x.project_onto(&s)?, &dh.project_onto(&s)?)?;
            out.axpy(1.0, &t.project_onto(&self.schema)?)?;
        }
        Ok(out)
    }

    fn constraints(&self) -> Vec<Constraint> {
        self.parts
            .iter()
            .flat_map(|p| {
                let s = p.schema();
                p.constraints().into_iter().map(move |c| {
                    let s = s.clone();
                    let name = c.name.clone();
                    Constraint::new(name, move |k, x| c.residual(k, &x.project_onto(&s)?))
                })
            })
            .collect()
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        self.parts
            .iter()
            .flat_map(|p| p.casimirs().into_iter().map(move |c| restricted(c, p.schema())))
            .collect()
    }

    fn positive_vars(&self) -> Vec<String> {
        self.parts.iter().flat_map(|p| p.positive_vars()).collect()
    }
}

/// Functional on a sub-schema, lifted to any schema containing it.
fn restricted(c: AnalyticFunctional, sub: Arc<StateSchema>) -> AnalyticFunctional {
    let (c1, s1) = (c.clone(), sub.clone());
    AnalyticFunctional::new(
        c.name(),
        move |x| c1.evaluate(&x.project_onto(&s1)?),
        move |x| c.derivative(&x.project_onto(&sub)?)?.project_onto(x.schema()),
    )
}

/// A bracket with its variables renamed. Parities follow the inner bracket.
pub struct Renamed {
    inner: Arc<dyn Bracket>,
    inner_schema: Arc<StateSchema>,
    schema: Arc<StateSchema>,
    map: HashMap<String, String>,
}

pub fn renamed(inner: Arc<dyn Bracket>, pairs: &[(&str, &str)]) -> Result<Renamed> {
    let inner_schema = inner.schema();
    let map: HashMap<String, String> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    for from in map.keys() {
        if inner_schema.get(from).is_none() {
            return Err(Error::Schema(format!("cannot rename unknown variable `{from}`")));
        }
    }
    let vars = inner_schema
        .vars()
        .iter()
        .map(|v| VarSpec {
            name: map.get(&v.name).cloned().unwrap_or_else(|| v.name.clone()),
            kind: v.kind,
            parity: v.parity,
        })
        .collect();
    Ok(Renamed {
        inner,
        inner_schema,
        schema: Arc::new(StateSchema::new(vars)?),
        map,
    })
}

impl Renamed {
    fn outer(&self, name: &str) -> String {
        self.map.get(name).cloned().unwrap_or_else(|| name.to_string())
    }
}

impl Bracket for Renamed {
    fn name(&self) -> String {
        self.inner.name()
    }

    fn schema(&self) -> Arc<StateSchema> {
        self.schema.clone()
    }

    fn structure(&self) -> Structure {
        self.inner.structure()
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let t = self
            .inner
            .tangent(k, &x.relabel(&self.inner_schema)?, &dh.relabel(&self.inner_schema)?)?;
        t.relabel(&self.schema)
    }

    fn constraints(&self) -> Vec<Constraint> {
        self.inner
            .constraints()
            .into_iter()
            .map(|c| {
                let s = self.inner_schema.clone();
                let name = c.name.clone();
                Constraint::new(name, move |k, x| c.residual(k, &x.relabel(&s)?))
            })
            .collect()
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        self.inner
            .casimirs()
            .into_iter()
            .map(|c| {
                let (c1, s1) = (c.clone(), self.inner_schema.clone());
                let s2 = self.inner_schema.clone();
                AnalyticFunctional::new(
                    c.name(),
                    move |x| c1.evaluate(&x.relabel(&s1)?),
                    move |x| c.derivative(&x.relabel(&s2)?)?.relabel(x.schema()),
                )
            })
            .collect()
    }

    fn positive_vars(&self) -> Vec<String> {
        self.inner.positive_vars().iter().map(|v| self.outer(v)).collect()
    }
}

/// Lie-Poisson bracket on the dual of vector fields:
/// `M_dot_i = -d_j(M_i b_j) - M_j d_i b_j` with `b = H_M`.
pub struct VectorFieldLiePoisson {
    m: String,
}

pub fn lie_poisson_vector_fields(m: &str) -> VectorFieldLiePoisson {
    VectorFieldLiePoisson { m: m.to_string() }
}

impl Bracket for VectorFieldLiePoisson {
    fn name(&self) -> String {
        format!("lie_poisson({})", self.m)
    }

    fn schema(&self) -> Arc<StateSchema> {
        Arc::new(StateSchema::of(&[(&self.m, FieldKind::Vector)]).expect("single variable"))
    }

    fn structure(&self) -> Structure {
        Structure::Linear
    }

    fn tangent(&self, _k: &Constants, x: &State, dh: &State) -> Result<State> {
        let mut out = x.zeros_like();
        let v = momentum_self(x.space(), x.vector(&self.m)?, dh.vector(&self.m)?);
        out.add_vector(&self.m, 1.0, &v)?;
        Ok(out)
    }
}

/// Whether an advected variable lives in the acted-on space or its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Primal,
    Dual,
}

impl Role {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "primal" => Some(Role::Primal),
            "dual" => Some(Role::Dual),
            _ => None,
        }
    }
}

/// One variable dragged by the momentum field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub var: String,
    pub role: Role,
    pub kind: ActionKind,
}

impl Action {
    pub fn new(var: &str, role: Role, kind: ActionKind) -> Self {
        Self {
            var: var.to_string(),
            role,
            kind,
        }
    }
}

/// Base bracket extended by Lie-drag cross terms between its momentum
/// variable `m` and the acted-on variables. With `b = H_m`:
/// primal `w`: `w_dot += b > w`, `m_dot -= P(w, H_w)`;
/// dual `a`: `a_dot -= T(b, a)`, `m_dot += P(H_a, a)`.
pub struct Semidirect {
    name: String,
    base: Arc<dyn Bracket>,
    m: String,
    actions: Vec<Action>,
    schema: Arc<StateSchema>,
}

pub fn semidirect_vector(base: Arc<dyn Bracket>, momentum: &str, actions: Vec<Action>) -> Result<Semidirect> {
    let bs = base.schema();
    match bs.get(momentum) {
        Some(v) if v.kind == FieldKind::Vector => {}
        _ => {
            return Err(Error::Schema(format!(
                "momentum `{momentum}` must be a vector variable of `{}`",
                base.name()
            )))
        }
    }
    let mut vars = bs.vars().to_vec();
    for a in &actions {
        if a.var == momentum {
            return Err(Error::Schema(format!("momentum `{momentum}` cannot act on itself")));
        }
        let kind = if a.kind.is_scalar() {
            FieldKind::Scalar
        } else {
            FieldKind::Vector
        };
        match bs.get(&a.var) {
            Some(v) if v.kind != kind => {
                return Err(Error::Schema(format!(
                    "`{}` is a {} field but a {} action needs {}",
                    a.var,
                    v.kind.as_str(),
                    a.kind.as_str(),
                    kind.as_str()
                )))
            }
            Some(_) => {}
            None => vars.push(VarSpec::new(&a.var, kind)),
        }
    }
    let schema = Arc::new(StateSchema::new(vars)?);
    let names: Vec<&str> = actions.iter().map(|a| a.var.as_str()).collect();
    Ok(Semidirect {
        name: format!("semidirect({}; {} > {})", base.name(), momentum, names.join(",")),
        base,
        m: momentum.to_string(),
        actions,
        schema,
    })
}

impl Semidirect {
    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }
}

fn comps<'a>(x: &'a State, var: &str, kind: ActionKind) -> Result<Comps<'a>> {
    Ok(if kind.is_scalar() {
        vec![x.scalar(var)?]
    } else {
        x.vector(var)?.to_vec()
    })
}

fn add_comps(out: &mut State, var: &str, kind: ActionKind, a: f64, v: &[Vec<f64>]) -> Result<()> {
    if kind.is_scalar() {
        out.add_to(var, a, &v[0])
    } else {
        out.add_vector(var, a, &[v[0].clone(), v[1].clone(), v[2].clone()])
    }
}

impl Bracket for Semidirect {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn schema(&self) -> Arc<StateSchema> {
        self.schema.clone()
    }

    fn structure(&self) -> Structure {
        combine(self.base.structure(), Structure::Linear)
    }

    fn tangent(&self, k: &Constants, x: &State, dh: &State) -> Result<State> {
        let g = x.space();
        let bs = self.base.schema();
        let mut out = self
            .base
            .tangent(k, &x.project_onto(&bs)?, &dh.project_onto(&bs)?)?
            .project_onto(&self.schema)?;
        let b = dh.vector(&self.m)?;
        for a in &self.actions {
            let w = comps(x, &a.var, a.kind)?;
            let hw = comps(dh, &a.var, a.kind)?;
            match a.role {
                Role::Primal => {
                    add_comps(&mut out, &a.var, a.kind, 1.0, &act(g, a.kind, b, &w))?;
                    out.add_vector(&self.m, -1.0, &diamond(g, a.kind, &w, &hw))?;
                }
                Role::Dual => {
                    add_comps(&mut out, &a.var, a.kind, -1.0, &act_transpose(g, a.kind, b, &w))?;
                    out.add_vector(&self.m, 1.0, &diamond(g, a.kind, &hw, &w))?;
                }
            }
        }
        Ok(out)
    }

    fn constraints(&self) -> Vec<Constraint> {
        let s = self.base.schema();
        self.base
            .constraints()
            .into_iter()
            .map(|c| {
                let s = s.clone();
                let name = c.name.clone();
                Constraint::new(name, move |k, x| c.residual(k, &x.project_onto(&s)?))
            })
            .collect()
    }

    fn casimirs(&self) -> Vec<AnalyticFunctional> {
        let mut out: Vec<AnalyticFunctional> = self
            .base
            .casimirs()
            .into_iter()
            .map(|c| restricted(c, self.base.schema()))
            .collect();
        for a in &self.actions {
            if a.role == Role::Dual && a.kind == ActionKind::Function && self.base.schema().get(&a.var).is_none() {
                out.push(AnalyticFunctional::integral(&a.var));
            }
        }
        out
    }

    fn positive_vars(&self) -> Vec<String> {
        self.base.positive_vars()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{em, hydro};
    use crate::functional::random_state;
    use crate::grid::Grid3;
    use crate::state::Domain;

    fn domain() -> Arc<crate::state::Domain> {
        Domain::spatial(Grid3::new([6, 5, 4], [1.0, 1.3, 0.8]).unwrap())
    }

    #[test]
    fn semidirect_hydro_matches_catalog() {
        let sd = semidirect_vector(
            Arc::new(lie_poisson_vector_fields("u")),
            "u",
            vec![
                Action::new("rho", Role::Dual, ActionKind::Function),
                Action::new("s", Role::Dual, ActionKind::Function),
            ],
        )
        .unwrap();
        let h = hydro();
        assert_eq!(*sd.schema(), *h.schema());
        let d = domain();
        let k = Constants::default();
        for seed in 0..3 {
            let x = random_state(&d, &h.schema(), seed, 2, 0.3).unwrap();
            let dh = random_state(&d, &h.schema(), 100 + seed, 2, 1.0).unwrap();
            let a = sd.apply(&k, &x, &dh).unwrap();
            let b = h.apply(&k, &x, &dh).unwrap();
            let mut diff = a.clone();
            diff.axpy(-1.0, &b).unwrap();
            assert!(diff.max_abs() < 1e-12 * (1.0 + b.max_abs()), "{}", diff.max_abs());
        }
    }

    #[test]
    fn direct_product_rejects_collisions_and_splits_blocks() {
        assert!(direct_product(Arc::new(em()), Arc::new(em())).is_err());
        let two = renamed(Arc::new(em()), &[("E", "E2"), ("B", "B2")]).unwrap();
        let d = direct_product(Arc::new(em()), Arc::new(two)).unwrap();
        let dom = domain();
        let k = Constants::default();
        let x = random_state(&dom, &d.schema(), 1, 1, 1.0).unwrap();
        let dh = random_state(&dom, &d.schema(), 2, 1, 1.0).unwrap();
        let t = d.apply(&k, &x, &dh).unwrap();
        let single = em().schema();
        let t1 = em().apply(&k, &x.project_onto(&single).unwrap(), &dh.project_onto(&single).unwrap()).unwrap();
        assert_eq!(t.field("E").unwrap(), t1.field("E").unwrap());
        assert_eq!(d.constraints().len(), 4);
    }

    #[test]
    fn renamed_keeps_parity_and_rejects_unknown() {
        let r = renamed(Arc::new(hydro()), &[("u", "M")]).unwrap();
        assert_eq!(r.schema().get("M").unwrap().parity, hydro().schema().get("u").unwrap().parity);
        assert_eq!(r.positive_vars(), vec!["rho".to_string()]);
        assert!(renamed(Arc::new(hydro()), &[("q", "M")]).is_err());
    }

    #[test]
    fn semidirect_rejects_bad_momentum_and_kind() {
        let base: Arc<dyn Bracket> = Arc::new(lie_poisson_vector_fields("u"));
        assert!(semidirect_vector(base.clone(), "rho", vec![]).is_err());
        assert!(semidirect_vector(base.clone(), "u", vec![Action::new("u", Role::Dual, ActionKind::Function)]).is_err());
        let h: Arc<dyn Bracket> = Arc::new(hydro());
        assert!(semidirect_vector(h, "u", vec![Action::new("rho", Role::Dual, ActionKind::OneForm)]).is_err());
    }
}
