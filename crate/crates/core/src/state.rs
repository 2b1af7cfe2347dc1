//! Named, schema-checked field collections with time-reversal parities.
//!
//! A [`State`] doubles as a tangent vector and, through the quadrature
//! pairing [`State::dot`], as a cotangent vector (a collection of functional
//! derivatives).

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::{Grid3, PhaseGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Scalar,
    Vector,
    Phase,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Scalar => "scalar",
            FieldKind::Vector => "vector",
            FieldKind::Phase => "phase",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "scalar" => Ok(FieldKind::Scalar),
            "vector" => Ok(FieldKind::Vector),
            "phase" => Ok(FieldKind::Phase),
            _ => Err(Error::Schema(format!("unknown field kind `{s}`"))),
        }
    }
}

/// Time-reversal parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// Default parity for a variable name: densities, entropies and the
    /// electric field are even, velocities, momenta and the magnetic field
    /// are odd. Distribution functions and the canonical potentials get none.
    pub fn default_for(name: &str) -> Option<Parity> {
        let base = name.trim_end_matches(|c: char| c.is_ascii_digit());
        match base {
            "rho" | "s" | "E" => Some(Parity::Even),
            "u" | "M" | "B" => Some(Parity::Odd),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub kind: FieldKind,
    pub parity: Option<Parity>,
}

impl VarSpec {
    /// Variable with the default parity for its name.
    pub fn new(name: &str, kind: FieldKind) -> Self {
        let parity = if kind == FieldKind::Phase {
            None
        } else {
            Parity::default_for(name)
        };
        Self {
            name: name.to_string(),
            kind,
            parity,
        }
    }
}

/// Ordered list of uniquely named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSchema {
    vars: Vec<VarSpec>,
}

impl StateSchema {
    pub fn new(vars: Vec<VarSpec>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() || v.name.contains(char::is_whitespace) {
                return Err(Error::Schema(format!("invalid variable name `{}`", v.name)));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::Schema(format!("duplicate variable `{}`", v.name)));
            }
            if v.kind == FieldKind::Phase && v.parity.is_some() {
                return Err(Error::Schema(format!(
                    "phase density `{}` cannot carry a parity",
                    v.name
                )));
            }
        }
        Ok(Self { vars })
    }

    /// Schema from `(name, kind)` pairs with default parities.
    pub fn of(vars: &[(&str, FieldKind)]) -> Result<Self> {
        Self::new(vars.iter().map(|&(n, k)| VarSpec::new(n, k)).collect())
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&VarSpec> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn has_phase(&self) -> bool {
        self.vars.iter().any(|v| v.kind == FieldKind::Phase)
    }

    /// Returns a copy with the parity of `name` replaced.
    pub fn with_parity(mut self, name: &str, parity: Option<Parity>) -> Result<Self> {
        let v = self
            .vars
            .iter_mut()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::Schema(format!("no variable `{name}`")))?;
        v.parity = parity;
        Self::new(self.vars)
    }

    /// Concatenation of two schemas with disjoint names.
    pub fn concat(&self, other: &StateSchema) -> Result<Self> {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        Self::new(vars)
    }
}

impl fmt::Display for StateSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{}:{}", v.name, v.kind.as_str()))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Spatial grid, optionally extended by a momentum box.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    space: Grid3,
    phase: Option<PhaseGrid>,
}

impl Domain {
    pub fn spatial(space: Grid3) -> Arc<Self> {
        Arc::new(Self { space, phase: None })
    }

    pub fn with_phase(phase: PhaseGrid) -> Arc<Self> {
        Arc::new(Self {
            space: phase.spatial().clone(),
            phase: Some(phase),
        })
    }

    pub fn space(&self) -> &Grid3 {
        &self.space
    }

    pub fn phase(&self) -> Result<&PhaseGrid> {
        self.phase
            .as_ref()
            .ok_or_else(|| Error::Schema("phase-space field on a domain without momentum grid".into()))
    }

    pub fn has_phase(&self) -> bool {
        self.phase.is_some()
    }

    /// Same domain with the momentum grid dropped.
    pub fn spatial_part(&self) -> Arc<Self> {
        Self::spatial(self.space.clone())
    }

    pub fn field_len(&self, kind: FieldKind) -> Result<usize> {
        Ok(match kind {
            FieldKind::Scalar => self.space.len(),
            FieldKind::Vector => 3 * self.space.len(),
            FieldKind::Phase => self.phase()?.len(),
        })
    }

    pub fn weight(&self, kind: FieldKind) -> Result<f64> {
        Ok(match kind {
            FieldKind::Scalar | FieldKind::Vector => self.space.quad_weight(),
            FieldKind::Phase => self.phase()?.quad_weight(),
        })
    }
}

/// Physical constants. Species count is one or two.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default = "one")]
    pub eps0: f64,
    #[serde(default = "one")]
    pub mu0: f64,
    #[serde(default = "one")]
    pub e: f64,
    #[serde(default = "default_species")]
    pub species: Vec<Species>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Species {
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default = "one")]
    pub z: f64,
}

fn one() -> f64 {
    1.0
}

fn default_species() -> Vec<Species> {
    vec![Species { m: 1.0, z: 1.0 }]
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            eps0: 1.0,
            mu0: 1.0,
            e: 1.0,
            species: default_species(),
        }
    }
}

impl Constants {
    /// Default constants with two unit species.
    pub fn binary() -> Self {
        Self {
            species: vec![Species { m: 1.0, z: 1.0 }; 2],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !(pos(self.eps0) && pos(self.mu0) && pos(self.e)) {
            return Err(Error::Validation("eps0, mu0 and e must be positive".into()));
        }
        if !(1..=2).contains(&self.species.len()) {
            return Err(Error::Validation(format!(
                "species count must be 1 or 2, got {}",
                self.species.len()
            )));
        }
        // z = 0 is admitted as the neutral limit.
        if !self.species.iter().all(|s| pos(s.m) && s.z.is_finite() && s.z >= 0.0) {
            return Err(Error::Validation("species need m > 0 and z >= 0".into()));
        }
        Ok(())
    }

    /// Speed of light squared, `1/(eps0 mu0)`.
    pub fn c2(&self) -> f64 {
        1.0 / (self.eps0 * self.mu0)
    }

    pub fn species(&self, alpha: usize) -> Result<Species> {
        self.species.get(alpha).copied().ok_or_else(|| {
            Error::Validation(format!(
                "species {} requested but only {} configured",
                alpha + 1,
                self.species.len()
            ))
        })
    }

    /// Charge-to-mass coefficient `z e / m` of species `alpha`.
    pub fn charge_over_mass(&self, alpha: usize) -> Result<f64> {
        let s = self.species(alpha)?;
        Ok(s.z * self.e / s.m)
    }
}

/// Field values for every schema variable. Vector fields store their three
/// components as consecutive blocks.
#[derive(Clone)]
pub struct State {
    domain: Arc<Domain>,
    schema: Arc<StateSchema>,
    data: Vec<Vec<f64>>,
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("State")
            .field("schema", &self.schema.to_string())
            .field("domain", &self.domain)
            .finish()
    }
}

impl State {
    pub fn zeros(domain: &Arc<Domain>, schema: &Arc<StateSchema>) -> Result<Self> {
        let data = schema
            .vars()
            .iter()
            .map(|v| domain.field_len(v.kind).map(|n| vec![0.0; n]))
            .collect::<Result<_>>()?;
        Ok(Self {
            domain: domain.clone(),
            schema: schema.clone(),
            data,
        })
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn schema(&self) -> &Arc<StateSchema> {
        &self.schema
    }

    pub fn space(&self) -> &Grid3 {
        self.domain.space()
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            domain: self.domain.clone(),
            schema: self.schema.clone(),
            data: self.data.iter().map(|d| vec![0.0; d.len()]).collect(),
        }
    }

    fn idx(&self, name: &str) -> Result<usize> {
        self.schema
            .index_of(name)
            .ok_or_else(|| Error::Schema(format!("state {} has no variable `{name}`", self.schema)))
    }

    pub fn has(&self, name: &str) -> bool {
        self.schema.index_of(name).is_some()
    }

    /// Raw values of variable `name`.
    pub fn field(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.data[self.idx(name)?])
    }

    pub fn field_mut(&mut self, name: &str) -> Result<&mut Vec<f64>> {
        let i = self.idx(name)?;
        Ok(&mut self.data[i])
    }

    pub fn field_at(&self, i: usize) -> &[f64] {
        &self.data[i]
    }

    pub fn field_at_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i]
    }

    fn expect_kind(&self, name: &str, kind: FieldKind) -> Result<usize> {
        let i = self.idx(name)?;
        let got = self.schema.vars()[i].kind;
        if got != kind {
            return Err(Error::Schema(format!(
                "variable `{name}` is {}, expected {}",
                got.as_str(),
                kind.as_str()
            )));
        }
        Ok(i)
    }

    pub fn scalar(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.data[self.expect_kind(name, FieldKind::Scalar)?])
    }

    pub fn phase(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.data[self.expect_kind(name, FieldKind::Phase)?])
    }

    pub fn vector(&self, name: &str) -> Result<[&[f64]; 3]> {
        let d = &self.data[self.expect_kind(name, FieldKind::Vector)?];
        let n = self.space().len();
        Ok([&d[..n], &d[n..2 * n], &d[2 * n..]])
    }

    /// Replaces the values of `name`; the length must match.
    pub fn set(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        let i = self.idx(name)?;
        if values.len() != self.data[i].len() {
            return Err(Error::Schema(format!(
                "variable `{name}` expects {} values, got {}",
                self.data[i].len(),
                values.len()
            )));
        }
        self.data[i] = values;
        Ok(())
    }

    pub fn set_vector(&mut self, name: &str, v: [Vec<f64>; 3]) -> Result<()> {
        self.expect_kind(name, FieldKind::Vector)?;
        self.set(name, v.concat())
    }

    /// Adds `a * v` to variable `name`.
    pub fn add_to(&mut self, name: &str, a: f64, v: &[f64]) -> Result<()> {
        let d = self.field_mut(name)?;
        if d.len() != v.len() {
            return Err(Error::Schema(format!("length mismatch adding to `{name}`")));
        }
        for (x, y) in d.iter_mut().zip(v) {
            *x += a * y;
        }
        Ok(())
    }

    pub fn add_vector(&mut self, name: &str, a: f64, v: &[Vec<f64>; 3]) -> Result<()> {
        let n = self.space().len();
        self.expect_kind(name, FieldKind::Vector)?;
        let d = self.field_mut(name)?;
        for (c, comp) in v.iter().enumerate() {
            for (x, y) in d[c * n..(c + 1) * n].iter_mut().zip(comp) {
                *x += a * y;
            }
        }
        Ok(())
    }

    pub fn compatible(&self, other: &State) -> bool {
        (Arc::ptr_eq(&self.schema, &other.schema) || self.schema == other.schema)
            && (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
    }

    fn check(&self, other: &State) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::Schema(format!(
                "incompatible states {} and {}",
                self.schema, other.schema
            )))
        }
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: f64, x: &State) -> Result<()> {
        self.check(x)?;
        for (d, s) in self.data.iter_mut().zip(&x.data) {
            for (p, q) in d.iter_mut().zip(s) {
                *p += a * q;
            }
        }
        Ok(())
    }

    pub fn scale(&mut self, a: f64) {
        for d in &mut self.data {
            for v in d {
                *v *= a;
            }
        }
    }

    pub fn scaled(&self, a: f64) -> State {
        let mut s = self.clone();
        s.scale(a);
        s
    }

    /// `self + a * x` as a new state.
    pub fn plus(&self, a: f64, x: &State) -> Result<State> {
        let mut s = self.clone();
        s.axpy(a, x)?;
        Ok(s)
    }

    /// Quadrature pairing: sum over variables of the weighted inner product.
    pub fn dot(&self, other: &State) -> Result<f64> {
        self.check(other)?;
        let mut total = 0.0;
        for (i, v) in self.schema.vars().iter().enumerate() {
            let w = self.domain.weight(v.kind)?;
            let s: f64 = self.data[i].iter().zip(&other.data[i]).map(|(a, b)| a * b).sum();
            total += w * s;
        }
        Ok(total)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).map(f64::sqrt).unwrap_or(f64::NAN)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().flatten().all(|v| v.is_finite())
    }

    /// Name of the first variable holding a non-finite value.
    pub fn first_non_finite(&self) -> Option<&str> {
        self.schema
            .vars()
            .iter()
            .zip(&self.data)
            .find(|(_, d)| d.iter().any(|v| !v.is_finite()))
            .map(|(v, _)| v.name.as_str())
    }

    /// Multiplies every field by its parity. Fails if any variable has none.
    pub fn time_reversal(&self) -> Result<State> {
        let mut out = self.clone();
        for (i, v) in self.schema.vars().iter().enumerate() {
            let p = v.parity.ok_or_else(|| Error::ParityUndefined(v.name.clone()))?;
            if p == Parity::Odd {
                for x in &mut out.data[i] {
                    *x = -*x;
                }
            }
        }
        Ok(out)
    }

    /// Number of scalar unknowns.
    pub fn dof(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.data.concat()
    }

    /// Overwrites all values from a flat coordinate vector.
    pub fn assign_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.dof() {
            return Err(Error::Dimension {
                expected: self.dof(),
                got: flat.len(),
            });
        }
        let mut off = 0;
        for d in &mut self.data {
            let n = d.len();
            d.copy_from_slice(&flat[off..off + n]);
            off += n;
        }
        Ok(())
    }

    /// Quadrature weight of every flat coordinate.
    pub fn flat_weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.dof());
        for (v, d) in self.schema.vars().iter().zip(&self.data) {
            let wv = self.domain.weight(v.kind).unwrap_or(f64::NAN);
            w.extend(std::iter::repeat_n(wv, d.len()));
        }
        w
    }

    /// Flat coordinate range of each variable.
    pub fn blocks(&self) -> Vec<(String, std::ops::Range<usize>)> {
        let mut off = 0;
        self.schema
            .vars()
            .iter()
            .zip(&self.data)
            .map(|(v, d)| {
                let r = off..off + d.len();
                off += d.len();
                (v.name.clone(), r)
            })
            .collect()
    }

    /// Copy of this state restricted or reordered to `schema`, taking
    /// matching variables by name and zero-filling the rest.
    pub fn project_onto(&self, schema: &Arc<StateSchema>) -> Result<State> {
        let mut out = State::zeros(&self.domain, schema)?;
        for (i, v) in schema.vars().iter().enumerate() {
            if let Some(j) = self.schema.index_of(&v.name) {
                if self.schema.vars()[j].kind != v.kind {
                    return Err(Error::Schema(format!("kind mismatch for `{}`", v.name)));
                }
                out.data[i] = self.data[j].clone();
            }
        }
        Ok(out)
    }

    /// Same values under a schema with identical layout (names may differ).
    pub fn relabel(&self, schema: &Arc<StateSchema>) -> Result<State> {
        let same_layout = schema.len() == self.schema.len()
            && schema
                .vars()
                .iter()
                .zip(self.schema.vars())
                .all(|(a, b)| a.kind == b.kind);
        if !same_layout {
            return Err(Error::Schema(format!(
                "cannot relabel {} as {}",
                self.schema, schema
            )));
        }
        Ok(State {
            domain: self.domain.clone(),
            schema: schema.clone(),
            data: self.data.clone(),
        })
    }

    /// Same values on an equal domain object.
    pub fn with_domain(&self, domain: &Arc<Domain>) -> Result<State> {
        if **domain != *self.domain {
            return Err(Error::Schema("domain mismatch".into()));
        }
        Ok(State {
            domain: domain.clone(),
            ..self.clone()
        })
    }

    /// Writes a self-describing snapshot: a UTF-8 header terminated by a
    /// line `end`, then every field as little-endian `f64` in schema order.
    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_snapshot_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn write_snapshot_to(&self, out: &mut impl Write) -> Result<()> {
        let g = self.space();
        writeln!(out, "hamcouple-snapshot 1")?;
        writeln!(out, "grid {} {} {} {:e} {:e} {:e}", g.dims()[0], g.dims()[1], g.dims()[2], g.lengths()[0], g.lengths()[1], g.lengths()[2])?;
        if let Some(pg) = &self.domain.phase {
            let (d, p) = (pg.pdims(), pg.pmax());
            writeln!(out, "momentum {} {} {} {:e} {:e} {:e}", d[0], d[1], d[2], p[0], p[1], p[2])?;
        }
        for (v, d) in self.schema.vars().iter().zip(&self.data) {
            let parity = match v.parity {
                Some(Parity::Even) => "even",
                Some(Parity::Odd) => "odd",
                None => "none",
            };
            writeln!(out, "var {} {} {} {}", v.name, v.kind.as_str(), parity, d.len())?;
        }
        writeln!(out, "end")?;
        for d in &self.data {
            for v in d {
                out.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_snapshot(path: &Path) -> Result<State> {
        Self::read_snapshot_from(std::fs::File::open(path)?)
    }

    pub fn read_snapshot_from(input: impl Read) -> Result<State> {
        let bad = |m: &str| Error::Schema(format!("malformed snapshot: {m}"));
        let mut r = BufReader::new(input);
        let mut line = String::new();
        let mut next = |r: &mut BufReader<_>| -> Result<Vec<String>> {
            line.clear();
            r.read_line(&mut line)?;
            Ok(line.split_whitespace().map(str::to_string).collect())
        };
        if next(&mut r)? != ["hamcouple-snapshot", "1"] {
            return Err(bad("missing magic line"));
        }
        let num = |t: &[String], i: usize| -> Result<f64> {
            t.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad number"))
        };
        let t = next(&mut r)?;
        if t.first().map(String::as_str) != Some("grid") {
            return Err(bad("missing grid line"));
        }
        let dims = [num(&t, 1)? as usize, num(&t, 2)? as usize, num(&t, 3)? as usize];
        let grid = Grid3::new(dims, [num(&t, 4)?, num(&t, 5)?, num(&t, 6)?])?;
        let mut domain = Domain::spatial(grid.clone());
        let mut vars = Vec::new();
        let mut lens = Vec::new();
        loop {
            let t = next(&mut r)?;
            match t.first().map(String::as_str) {
                Some("momentum") => {
                    let pd = [num(&t, 1)? as usize, num(&t, 2)? as usize, num(&t, 3)? as usize];
                    let pm = [num(&t, 4)?, num(&t, 5)?, num(&t, 6)?];
                    domain = Domain::with_phase(PhaseGrid::new(grid.clone(), pd, pm)?);
                }
                Some("var") if t.len() == 5 => {
                    let parity = match t[3].as_str() {
                        "even" => Some(Parity::Even),
                        "odd" => Some(Parity::Odd),
                        "none" => None,
                        _ => return Err(bad("bad parity")),
                    };
                    vars.push(VarSpec {
                        name: t[1].clone(),
                        kind: FieldKind::parse(&t[2])?,
                        parity,
                    });
                    lens.push(num(&t, 4)? as usize);
                }
                Some("end") => break,
                _ => return Err(bad("unexpected header line")),
            }
        }
        let schema = Arc::new(StateSchema::new(vars)?);
        let mut state = State::zeros(&domain, &schema)?;
        for (d, &n) in state.data.iter_mut().zip(&lens) {
            if d.len() != n {
                return Err(bad("field length does not match grid"));
            }
            let mut buf = vec![0u8; 8 * n];
            r.read_exact(&mut buf)?;
            for (v, c) in d.iter_mut().zip(buf.chunks_exact(8)) {
                *v = f64::from_le_bytes(c.try_into().expect("chunk of 8"));
            }
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fluid_em_schema() -> Arc<StateSchema> {
        Arc::new(
            StateSchema::of(&[
                ("rho", FieldKind::Scalar),
                ("u", FieldKind::Vector),
                ("s", FieldKind::Scalar),
                ("B", FieldKind::Vector),
                ("E", FieldKind::Vector),
            ])
            .unwrap(),
        )
    }

    fn uniform(domain: &Arc<Domain>, schema: &Arc<StateSchema>, vals: &[f64]) -> State {
        let mut x = State::zeros(domain, schema).unwrap();
        for (i, &v) in vals.iter().enumerate() {
            x.field_at_mut(i).iter_mut().for_each(|a| *a = v);
        }
        x
    }

    #[test]
    fn time_reversal_flips_odd_fields() {
        let d = Domain::spatial(Grid3::cube(2, 1.0).unwrap());
        let sch = fluid_em_schema();
        let x = uniform(&d, &sch, &[1.0, 2.0, 3.0, 4.0, 5.0]);
        let y = x.time_reversal().unwrap();
        let want = uniform(&d, &sch, &[1.0, -2.0, 3.0, -4.0, 5.0]);
        assert_eq!(y.to_flat(), want.to_flat());
        assert_eq!(y.time_reversal().unwrap().to_flat(), x.to_flat());
        let z = State::zeros(&d, &sch).unwrap();
        assert_eq!(z.time_reversal().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn time_reversal_rejects_phase_density() {
        let pg = PhaseGrid::new(Grid3::cube(1, 1.0).unwrap(), [2, 1, 1], [1.0; 3]).unwrap();
        let d = Domain::with_phase(pg);
        let sch = Arc::new(StateSchema::of(&[("f", FieldKind::Phase)]).unwrap());
        let x = State::zeros(&d, &sch).unwrap();
        assert!(matches!(x.time_reversal(), Err(Error::ParityUndefined(n)) if n == "f"));
    }

    #[test]
    fn dot_of_uniform_fields() {
        let d = Domain::spatial(Grid3::cube(4, 2.0).unwrap());
        let sch = Arc::new(StateSchema::of(&[("rho", FieldKind::Scalar)]).unwrap());
        let a = uniform(&d, &sch, &[2.0]);
        let b = uniform(&d, &sch, &[3.0]);
        assert!((a.dot(&b).unwrap() - 48.0).abs() < 1e-12);
        assert_eq!(a.dot(&State::zeros(&d, &sch).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn schema_rules() {
        assert!(StateSchema::of(&[("rho", FieldKind::Scalar), ("rho", FieldKind::Vector)]).is_err());
        let s = StateSchema::of(&[("u2", FieldKind::Vector), ("E", FieldKind::Vector), ("A", FieldKind::Vector)]).unwrap();
        assert_eq!(s.vars()[0].parity, Some(Parity::Odd));
        assert_eq!(s.vars()[1].parity, Some(Parity::Even));
        assert_eq!(s.vars()[2].parity, None);
        let bad = StateSchema::new(vec![VarSpec {
            name: "f".into(),
            kind: FieldKind::Phase,
            parity: Some(Parity::Even),
        }]);
        assert!(bad.is_err());
    }

    #[test]
    fn incompatible_states_are_rejected() {
        let d = Domain::spatial(Grid3::cube(2, 1.0).unwrap());
        let a = State::zeros(&d, &fluid_em_schema()).unwrap();
        let sch = Arc::new(StateSchema::of(&[("rho", FieldKind::Scalar)]).unwrap());
        let b = State::zeros(&d, &sch).unwrap();
        assert!(a.dot(&b).is_err());
        let d2 = Domain::spatial(Grid3::cube(3, 1.0).unwrap());
        let c = State::zeros(&d2, &fluid_em_schema()).unwrap();
        assert!(a.clone().axpy(1.0, &c).is_err());
    }

    #[test]
    fn snapshot_round_trip() {
        let pg = PhaseGrid::new(Grid3::new([3, 1, 2], [1.0, 2.0, 0.5]).unwrap(), [4, 1, 1], [2.0, 1.0, 1.0]).unwrap();
        let d = Domain::with_phase(pg);
        let sch = Arc::new(StateSchema::of(&[("f", FieldKind::Phase), ("E", FieldKind::Vector)]).unwrap());
        let mut x = State::zeros(&d, &sch).unwrap();
        let n = x.dof();
        x.assign_flat(&(0..n).map(|i| (i as f64).sin() * 1e-3 + 1.0 / 3.0).collect::<Vec<_>>()).unwrap();
        let mut buf = Vec::new();
        x.write_snapshot_to(&mut buf).unwrap();
        let y = State::read_snapshot_from(&buf[..]).unwrap();
        assert!(y.compatible(&x));
        assert_eq!(y.to_flat(), x.to_flat());
    }

    #[test]
    fn constants_validation() {
        assert!(Constants::default().validate().is_ok());
        let mut c = Constants::binary();
        assert!(c.validate().is_ok());
        c.species.push(Species { m: 1.0, z: 1.0 });
        assert!(c.validate().is_err());
        let c = Constants { eps0: 0.0, ..Constants::default() };
        assert!(c.validate().is_err());
        assert!((Constants { eps0: 2.0, mu0: 0.5, ..Constants::default() }.c2() - 1.0).abs() < 1e-15);
    }
}
