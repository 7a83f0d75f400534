//! Polygraphs and the calculus of cell expressions.
//!
//! A [`Polygraph`] is a graded set of generators, each generator of dimension
//! `n >= 1` carrying a source and a target cell of dimension `n - 1`. Cells of
//! the free ω-category it presents are written as [`CellExpr`] trees built
//! from generators, units and `k`-compositions. Composites of operands of
//! different dimensions are allowed and read with implicit units: the lower
//! operand is lifted to the higher dimension.
//!
//! Equality of cells in a free ω-category is not decided here. Whenever two
//! cells have to be compared (composability, globularity) the comparison uses
//! invariants that are exact in dimensions 0 and 1 (generators and paths) and
//! necessary conditions above (linearizations in every degree).

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Name and dimension of a generating cell.
///
/// Names are unique per dimension inside a polygraph, so the pair is a key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub name: String,
    pub dim: usize,
}

impl GeneratorId {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        GeneratorId { name: name.into(), dim }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Which end of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

/// A formal composite denoting a cell of a free ω-category.
///
/// `Comp { k, left, right }` is `left *_k right`, defined when the
/// `k`-source of `left` is the `k`-target of `right` (so for 1-cells
/// `g *_0 f` is "g after f").
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellExpr {
    Gen(GeneratorId),
    Unit { base: Box<CellExpr>, dim: usize },
    Comp { k: usize, left: Box<CellExpr>, right: Box<CellExpr> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("unknown generator `{0}` (dimension {dim})", dim = .0.dim)]
    UnknownGenerator(GeneratorId),
    #[error("duplicate generator `{0}` in dimension {dim}", dim = .0.dim)]
    DuplicateGenerator(GeneratorId),
    #[error("malformed expression `{expr}`: {reason}")]
    Malformed { expr: String, reason: String },
    #[error("`{0}` is a 0-cell and has no boundary")]
    NoBoundary(String),
    #[error("cannot take the {k}-boundary of a {dim}-cell")]
    BoundaryDegree { k: usize, dim: usize },
    #[error("generator `{0}` has no stored source/target")]
    MissingBoundary(GeneratorId),
    #[error("generator map is not a morphism at `{generator}`: {reason}")]
    NotAMorphism { generator: GeneratorId, reason: String },
}

fn malformed(e: &CellExpr, reason: impl Into<String>) -> CellError {
    CellError::Malformed { expr: e.to_string(), reason: reason.into() }
}

impl CellExpr {
    pub fn gen(name: impl Into<String>, dim: usize) -> Self {
        CellExpr::Gen(GeneratorId::new(name, dim))
    }

    pub fn unit(base: CellExpr, dim: usize) -> Self {
        CellExpr::Unit { base: Box::new(base), dim }
    }

    pub fn comp(k: usize, left: CellExpr, right: CellExpr) -> Self {
        CellExpr::Comp { k, left: Box::new(left), right: Box::new(right) }
    }

    /// Dimension of the cell, checking the dimension rules of units and
    /// compositions (but not composability).
    pub fn dim(&self) -> Result<usize, CellError> {
        match self {
            CellExpr::Gen(g) => Ok(g.dim),
            CellExpr::Unit { base, dim } => {
                let b = base.dim()?;
                if *dim > b {
                    Ok(*dim)
                } else {
                    Err(malformed(self, format!("unit to dimension {dim} of a {b}-cell")))
                }
            }
            CellExpr::Comp { k, left, right } => {
                let l = left.dim()?;
                let r = right.dim()?;
                if *k < l.min(r) {
                    Ok(l.max(r))
                } else {
                    Err(malformed(self, format!("{k}-composition of a {l}-cell with a {r}-cell")))
                }
            }
        }
    }

    /// Generator occurrences, left to right.
    pub fn generators(&self) -> Vec<&GeneratorId> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators<'a>(&'a self, out: &mut Vec<&'a GeneratorId>) {
        match self {
            CellExpr::Gen(g) => out.push(g),
            CellExpr::Unit { base, .. } => base.collect_generators(out),
            CellExpr::Comp { left, right, .. } => {
                left.collect_generators(out);
                right.collect_generators(out);
            }
        }
    }

    /// Replaces every generator occurrence, keeping the tree shape.
    pub fn map_generators<F>(&self, f: &mut F) -> CellExpr
    where
        F: FnMut(&GeneratorId) -> GeneratorId,
    {
        match self {
            CellExpr::Gen(g) => CellExpr::Gen(f(g)),
            CellExpr::Unit { base, dim } => CellExpr::unit(base.map_generators(f), *dim),
            CellExpr::Comp { k, left, right } => {
                CellExpr::comp(*k, left.map_generators(f), right.map_generators(f))
            }
        }
    }

    /// Class of the cell in the abelianization: generators give basis
    /// vectors, units vanish and `x *_k y` goes to `[x] + [y]`, an operand of
    /// lower dimension contributing nothing in the top degree.
    pub fn linearize(&self) -> Result<IntVector, CellError> {
        let n = self.dim()?;
        let mut v = IntVector::zero(n);
        self.accumulate(n, &mut v);
        Ok(v)
    }

    fn accumulate(&self, degree: usize, v: &mut IntVector) {
        match self {
            CellExpr::Gen(g) => {
                if g.dim == degree {
                    v.add_term(g, &BigInt::one());
                }
            }
            CellExpr::Unit { .. } => {}
            CellExpr::Comp { left, right, .. } => {
                left.accumulate(degree, v);
                right.accumulate(degree, v);
            }
        }
    }

    /// Boundary computed by the globular rules alone. Generators are looked
    /// up through `lookup`.
    fn boundary_with<'a, L>(&self, side: Side, lookup: &L) -> Result<CellExpr, CellError>
    where
        L: Fn(&GeneratorId) -> Result<&'a Generator, CellError>,
    {
        let n = self.dim()?;
        if n == 0 {
            return Err(CellError::NoBoundary(self.to_string()));
        }
        match self {
            CellExpr::Gen(g) => {
                let gen = lookup(g)?;
                let b = match side {
                    Side::Source => gen.source.as_ref(),
                    Side::Target => gen.target.as_ref(),
                };
                b.cloned().ok_or_else(|| CellError::MissingBoundary(g.clone()))
            }
            CellExpr::Unit { base, dim } => {
                if dim - 1 > base.dim()? {
                    Ok(CellExpr::unit((**base).clone(), dim - 1))
                } else {
                    Ok((**base).clone())
                }
            }
            CellExpr::Comp { k, left, right } => {
                if *k == n - 1 {
                    match side {
                        Side::Source => right.boundary_with(side, lookup),
                        Side::Target => left.boundary_with(side, lookup),
                    }
                } else {
                    let lift = |x: &CellExpr| -> Result<CellExpr, CellError> {
                        if x.dim()? == n {
                            x.boundary_with(side, lookup)
                        } else {
                            Ok(x.clone())
                        }
                    };
                    Ok(CellExpr::comp(*k, lift(left)?, lift(right)?))
                }
            }
        }
    }
}

impl fmt::Display for CellExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellExpr::Gen(g) => write!(f, "{}", g.name),
            CellExpr::Unit { base, dim } => write!(f, "id({base},{dim})"),
            CellExpr::Comp { k, left, right } => write!(f, "({left} *{k} {right})"),
        }
    }
}

/// A finitely supported integer combination of generators of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVector {
    degree: usize,
    coeffs: BTreeMap<GeneratorId, BigInt>,
}

impl IntVector {
    pub fn zero(degree: usize) -> Self {
        IntVector { degree, coeffs: BTreeMap::new() }
    }

    pub fn basis(g: &GeneratorId) -> Self {
        let mut v = IntVector::zero(g.dim);
        v.add_term(g, &BigInt::one());
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, g: &GeneratorId) -> BigInt {
        self.coeffs.get(g).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorId, &BigInt)> {
        self.coeffs.iter()
    }

    /// Adds `c * g`. Panics if `g` lives in another degree.
    pub fn add_term(&mut self, g: &GeneratorId, c: &BigInt) {
        assert_eq!(g.dim, self.degree, "generator `{g}` added to a degree-{} vector", self.degree);
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(g.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(g);
        }
    }

    pub fn add_scaled(&mut self, other: &IntVector, c: &BigInt) {
        for (g, x) in &other.coeffs {
            self.add_term(g, &(x * c));
        }
    }
}

impl core::ops::Sub for &IntVector {
    type Output = IntVector;

    fn sub(self, rhs: &IntVector) -> IntVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl core::ops::Add for &IntVector {
    type Output = IntVector;

    fn add(self, rhs: &IntVector) -> IntVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.coeffs.iter().enumerate() {
            let neg = c.sign() == num_bigint::Sign::Minus;
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{abs}{g}")?;
            }
        }
        Ok(())
    }
}

/// A generating cell together with its boundary (absent in dimension 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GeneratorId,
    pub source: Option<CellExpr>,
    pub target: Option<CellExpr>,
}

/// One failed validation condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub generator: GeneratorId,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generator `{}` (dimension {}): {}", self.generator, self.generator.dim, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Generator-to-generator assignment between two polygraphs.
pub type GeneratorMap = BTreeMap<GeneratorId, GeneratorId>;

/// Generators of a free ω-category, kept in insertion order.
///
/// `max_dim` is the truncation bound: the polygraph is considered to have
/// (possibly empty) generator sets in every dimension up to it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polygraph {
    generators: Vec<Generator>,
    index: BTreeMap<GeneratorId, usize>,
    declared_max_dim: Option<usize>,
}

impl Polygraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    /// Declared truncation bound, or the top generator dimension.
    pub fn max_dim(&self) -> usize {
        let top = self.generators.iter().map(|g| g.id.dim).max().unwrap_or(0);
        self.declared_max_dim.unwrap_or(top)
    }

    pub fn declared_max_dim(&self) -> Option<usize> {
        self.declared_max_dim
    }

    pub fn set_max_dim(&mut self, max_dim: usize) {
        self.declared_max_dim = Some(max_dim);
    }

    /// Inserts a generator. Only name clashes are rejected here; everything
    /// else is reported by [`Polygraph::validate`].
    pub fn push(&mut self, generator: Generator) -> Result<(), CellError> {
        if self.index.contains_key(&generator.id) {
            return Err(CellError::DuplicateGenerator(generator.id));
        }
        self.index.insert(generator.id.clone(), self.generators.len());
        self.generators.push(generator);
        Ok(())
    }

    pub fn add_object(&mut self, name: &str) -> Result<CellExpr, CellError> {
        let id = GeneratorId::new(name, 0);
        self.push(Generator { id: id.clone(), source: None, target: None })?;
        Ok(CellExpr::Gen(id))
    }

    /// Adds a generator whose dimension is one more than its boundary.
    pub fn add_cell(
        &mut self,
        name: &str,
        source: CellExpr,
        target: CellExpr,
    ) -> Result<CellExpr, CellError> {
        let dim = source.dim()? + 1;
        let id = GeneratorId::new(name, dim);
        self.push(Generator { id: id.clone(), source: Some(source), target: Some(target) })?;
        Ok(CellExpr::Gen(id))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: &GeneratorId) -> Option<&Generator> {
        self.index.get(id).map(|&i| &self.generators[i])
    }

    pub fn contains(&self, id: &GeneratorId) -> bool {
        self.index.contains_key(id)
    }

    /// Looks a generator up by name alone; `None` when absent or ambiguous.
    pub fn find_by_name(&self, name: &str) -> Option<&GeneratorId> {
        let mut found = self.generators.iter().filter(|g| g.id.name == name);
        let first = found.next()?;
        if found.next().is_some() {
            None
        } else {
            Some(&first.id)
        }
    }

    /// Generators of dimension `n` in insertion order. This order fixes the
    /// bases of every chain complex built from the polygraph.
    pub fn basis(&self, n: usize) -> Vec<&GeneratorId> {
        self.generators.iter().filter(|g| g.id.dim == n).map(|g| &g.id).collect()
    }

    fn lookup(&self, id: &GeneratorId) -> Result<&Generator, CellError> {
        self.generator(id).ok_or_else(|| CellError::UnknownGenerator(id.clone()))
    }

    /// Source or target of a cell of dimension at least 1.
    pub fn boundary(&self, e: &CellExpr, side: Side) -> Result<CellExpr, CellError> {
        e.boundary_with(side, &|id| self.lookup(id))
    }

    /// `k`-dimensional source or target; `k == dim(e)` returns `e` itself,
    /// so `t_0` of a 0-cell is the cell.
    pub fn iterated_boundary(&self, e: &CellExpr, k: usize, side: Side) -> Result<CellExpr, CellError> {
        let n = e.dim()?;
        if k > n {
            return Err(CellError::BoundaryDegree { k, dim: n });
        }
        let mut cur = e.clone();
        for _ in k..n {
            cur = self.boundary(&cur, side)?;
        }
        Ok(cur)
    }

    /// The 1-generators of a 1-cell read as a path in composition order:
    /// `g *_0 f` gives `[g, f]`, units give the empty path.
    pub fn path(&self, e: &CellExpr) -> Result<Vec<GeneratorId>, CellError> {
        let n = e.dim()?;
        if n != 1 {
            return Err(malformed(e, format!("expected a 1-cell, found a {n}-cell")));
        }
        let mut out = Vec::new();
        collect_path(e, &mut out);
        Ok(out)
    }

    /// Checks that `e` only mentions known generators, obeys the dimension
    /// rules, and that every composite is composable as far as can be
    /// decided. Returns the dimension.
    pub fn check_expr(&self, e: &CellExpr) -> Result<usize, CellError> {
        match e {
            CellExpr::Gen(g) => {
                self.lookup(g)?;
                Ok(g.dim)
            }
            CellExpr::Unit { base, .. } => {
                self.check_expr(base)?;
                e.dim()
            }
            CellExpr::Comp { k, left, right } => {
                self.check_expr(left)?;
                self.check_expr(right)?;
                let n = e.dim()?;
                let ls = self.iterated_boundary(left, *k, Side::Source)?;
                let rt = self.iterated_boundary(right, *k, Side::Target)?;
                if !self.cells_agree(&ls, &rt)? {
                    return Err(malformed(
                        e,
                        format!("{k}-source `{ls}` of the left operand differs from {k}-target `{rt}` of the right operand"),
                    ));
                }
                Ok(n)
            }
        }
    }

    /// Compares two cells through their decidable invariants: equality of
    /// 0-cells, equality of paths (with endpoints) for 1-cells, and for higher
    /// cells equal linearizations plus recursively agreeing boundaries.
    pub fn cells_agree(&self, x: &CellExpr, y: &CellExpr) -> Result<bool, CellError> {
        let n = x.dim()?;
        if n != y.dim()? {
            return Ok(false);
        }
        match n {
            0 => Ok(x == y),
            1 => {
                if self.path(x)? != self.path(y)? {
                    return Ok(false);
                }
                for side in [Side::Source, Side::Target] {
                    if self.boundary(x, side)? != self.boundary(y, side)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => {
                if x.linearize()? != y.linearize()? {
                    return Ok(false);
                }
                for side in [Side::Source, Side::Target] {
                    if !self.cells_agree(&self.boundary(x, side)?, &self.boundary(y, side)?)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Runs every structural and globularity check and lists the failures.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let max_dim = self.max_dim();
        for g in &self.generators {
            let mut fail = |message: String| {
                report.violations.push(Violation { generator: g.id.clone(), message })
            };
            let n = g.id.dim;
            if g.id.name.is_empty() {
                fail("empty generator name".to_owned());
            }
            if n > max_dim {
                fail(format!("dimension exceeds the declared bound {max_dim}"));
            }
            if n == 0 {
                if g.source.is_some() || g.target.is_some() {
                    fail("0-generators have no source or target".to_owned());
                }
                continue;
            }
            let (Some(src), Some(tgt)) = (&g.source, &g.target) else {
                fail("missing source or target".to_owned());
                continue;
            };
            let mut sides_ok = true;
            for (label, e) in [("source", src), ("target", tgt)] {
                match self.check_expr(e) {
                    Ok(d) if d + 1 == n => {}
                    Ok(d) => {
                        sides_ok = false;
                        fail(format!("{label} `{e}` has dimension {d}, expected {}", n - 1));
                    }
                    Err(err) => {
                        sides_ok = false;
                        fail(format!("{label}: {err}"));
                    }
                }
            }
            if !sides_ok || n < 2 {
                continue;
            }
            for side in [Side::Source, Side::Target] {
                let which = match side {
                    Side::Source => "source",
                    Side::Target => "target",
                };
                let agree = self.boundary(src, side).and_then(|a| {
                    let b = self.boundary(tgt, side)?;
                    Ok((self.cells_agree(&a, &b)?, a, b))
                });
                match agree {
                    Ok((true, _, _)) => {}
                    Ok((false, a, b)) => fail(format!(
                        "source and target are not parallel: {which} of source is `{a}`, {which} of target is `{b}`"
                    )),
                    Err(err) => fail(format!("{err}")),
                }
            }
        }
        report
    }

    /// Checks that `map` sends every generator of `self` to a generator of
    /// `target` of the same dimension and commutes with boundaries (exact
    /// comparison of the renamed expression trees).
    pub fn check_morphism(&self, target: &Polygraph, map: &GeneratorMap) -> Result<(), CellError> {
        for g in &self.generators {
            let bad = |reason: String| CellError::NotAMorphism { generator: g.id.clone(), reason };
            let img = map.get(&g.id).ok_or_else(|| bad("no image".to_owned()))?;
            let tg = target.generator(img).ok_or_else(|| bad(format!("image `{img}` is not a generator")))?;
            if img.dim != g.id.dim {
                return Err(bad(format!("image `{img}` has dimension {}", img.dim)));
            }
            let mut missing = None;
            let mut rename = |h: &GeneratorId| match map.get(h) {
                Some(x) => x.clone(),
                None => {
                    missing = Some(h.clone());
                    h.clone()
                }
            };
            let s = g.source.as_ref().map(|e| e.map_generators(&mut rename));
            let t = g.target.as_ref().map(|e| e.map_generators(&mut rename));
            if let Some(h) = missing {
                return Err(bad(format!("boundary generator `{h}` has no image")));
            }
            if s != tg.source || t != tg.target {
                return Err(bad(format!("boundary of `{}` does not map to the boundary of `{img}`", g.id)));
            }
        }
        Ok(())
    }
}

fn collect_path(e: &CellExpr, out: &mut Vec<GeneratorId>) {
    match e {
        CellExpr::Gen(g) => out.push(g.clone()),
        CellExpr::Unit { .. } => {}
        CellExpr::Comp { left, right, .. } => {
            collect_path(left, out);
            collect_path(right, out);
        }
    }
}

fn globe_name(k: usize, sign: char) -> String {
    format!("e{k}{sign}")
}

fn push_signed_pair(p: &mut Polygraph, k: usize) {
    for sign in ['-', '+'] {
        let id = GeneratorId::new(globe_name(k, sign), k);
        let (source, target) = if k == 0 {
            (None, None)
        } else {
            (
                Some(CellExpr::gen(globe_name(k - 1, '-'), k - 1)),
                Some(CellExpr::gen(globe_name(k - 1, '+'), k - 1)),
            )
        };
        p.push(Generator { id, source, target }).expect("fresh globe name");
    }
}

/// The `n`-globe: generators `e{k}-`, `e{k}+` for `k < n` and a top
/// generator `e{n}` from `e{n-1}-` to `e{n-1}+`.
pub fn globe(n: usize) -> Polygraph {
    let mut p = Polygraph::new();
    for k in 0..n {
        push_signed_pair(&mut p, k);
    }
    let (source, target) = if n == 0 {
        (None, None)
    } else {
        (
            Some(CellExpr::gen(globe_name(n - 1, '-'), n - 1)),
            Some(CellExpr::gen(globe_name(n - 1, '+'), n - 1)),
        )
    };
    p.push(Generator { id: GeneratorId::new(format!("e{n}"), n), source, target })
        .expect("fresh globe name");
    p.set_max_dim(n);
    p
}

/// The `n`-sphere: two generators `e{k}-`, `e{k}+` in each dimension
/// `k <= n`. `sphere(-1)` is empty.
///
/// # Panics
///
/// If `n < -1`.
pub fn sphere(n: isize) -> Polygraph {
    assert!(n >= -1, "sphere is defined for n >= -1");
    let mut p = Polygraph::new();
    if n >= 0 {
        for k in 0..=n as usize {
            push_signed_pair(&mut p, k);
        }
        p.set_max_dim(n as usize);
    }
    p
}

/// Generator map of the boundary inclusion of `sphere(n - 1)` into `globe(n)`.
pub fn sphere_inclusion(n: usize) -> GeneratorMap {
    sphere(n as isize - 1)
        .generators()
        .iter()
        .map(|g| (g.id.clone(), g.id.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str, dim: usize) -> CellExpr {
        CellExpr::gen(name, dim)
    }

    /// x --f--> y --g--> z plus 2-cells alpha: f => f', beta: f' => f''.
    fn small() -> Polygraph {
        let mut p = Polygraph::new();
        let x = p.add_object("x").unwrap();
        let y = p.add_object("y").unwrap();
        let z = p.add_object("z").unwrap();
        let f = p.add_cell("f", x.clone(), y.clone()).unwrap();
        let f1 = p.add_cell("f'", x.clone(), y.clone()).unwrap();
        let f2 = p.add_cell("f''", x, y.clone()).unwrap();
        p.add_cell("g", y, z).unwrap();
        p.add_cell("alpha", f, f1.clone()).unwrap();
        p.add_cell("beta", f1, f2).unwrap();
        p
    }

    #[test]
    fn dimension_rules() {
        assert_eq!(g("a", 1).dim(), Ok(1));
        assert_eq!(CellExpr::unit(g("x", 0), 3).dim(), Ok(3));
        assert_eq!(CellExpr::comp(0, g("f", 1), CellExpr::unit(g("x", 0), 1)).dim(), Ok(1));
        assert!(CellExpr::unit(g("f", 1), 1).dim().is_err());
        let bad = CellExpr::comp(1, g("f", 1), g("g", 1));
        match bad.dim() {
            Err(CellError::Malformed { expr, .. }) => assert_eq!(expr, "(f *1 g)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundaries_of_composites() {
        let p = small();
        let v = CellExpr::comp(1, g("beta", 2), g("alpha", 2));
        assert_eq!(p.boundary(&v, Side::Source).unwrap(), g("f", 1));
        assert_eq!(p.boundary(&v, Side::Target).unwrap(), g("f''", 1));
        assert_eq!(p.boundary(&CellExpr::unit(g("f", 1), 2), Side::Target).unwrap(), g("f", 1));
        assert_eq!(
            p.boundary(&CellExpr::unit(g("x", 0), 3), Side::Source).unwrap(),
            CellExpr::unit(g("x", 0), 2)
        );
        // whiskering lifts the 1-cell operand
        let w = CellExpr::comp(0, g("g", 1), g("alpha", 2));
        assert_eq!(p.boundary(&w, Side::Source).unwrap(), CellExpr::comp(0, g("g", 1), g("f", 1)));
        assert!(matches!(p.boundary(&g("x", 0), Side::Source), Err(CellError::NoBoundary(_))));
    }

    #[test]
    fn iterated_boundaries() {
        let p = small();
        assert_eq!(p.iterated_boundary(&g("x", 0), 0, Side::Target).unwrap(), g("x", 0));
        let gf = CellExpr::comp(0, g("g", 1), g("f", 1));
        assert_eq!(p.iterated_boundary(&gf, 0, Side::Source).unwrap(), g("x", 0));
        assert_eq!(p.iterated_boundary(&gf, 0, Side::Target).unwrap(), g("z", 0));
        assert!(matches!(
            p.iterated_boundary(&gf, 2, Side::Source),
            Err(CellError::BoundaryDegree { k: 2, dim: 1 })
        ));
    }

    #[test]
    fn linearization() {
        assert!(CellExpr::unit(g("x", 0), 2).linearize().unwrap().is_zero());
        let gf = CellExpr::comp(0, g("g", 1), g("f", 1)).linearize().unwrap();
        assert_eq!(gf.coefficient(&GeneratorId::new("g", 1)), BigInt::one());
        assert_eq!(gf.coefficient(&GeneratorId::new("f", 1)), BigInt::one());
        let w = CellExpr::comp(0, g("g", 1), g("alpha", 2)).linearize().unwrap();
        assert_eq!(w, IntVector::basis(&GeneratorId::new("alpha", 2)));
        let twice = CellExpr::comp(0, g("a", 1), g("a", 1)).linearize().unwrap();
        assert_eq!(twice.to_string(), "2a");
    }

    #[test]
    fn composability_is_checked() {
        let p = small();
        let ok = CellExpr::comp(1, g("beta", 2), g("alpha", 2));
        assert_eq!(p.check_expr(&ok), Ok(2));
        let wrong_order = CellExpr::comp(1, g("alpha", 2), g("beta", 2));
        assert!(p.check_expr(&wrong_order).is_err());
        let not_0_composable = CellExpr::comp(0, g("f", 1), g("g", 1));
        assert!(p.check_expr(&not_0_composable).is_err());
        assert!(matches!(p.check_expr(&g("nope", 1)), Err(CellError::UnknownGenerator(_))));
    }

    #[test]
    fn validation_accepts_small_and_rejects_nonparallel() {
        assert!(small().validate().is_ok());
        let mut p = Polygraph::new();
        let x = p.add_object("x").unwrap();
        let y = p.add_object("y").unwrap();
        let z = p.add_object("z").unwrap();
        let f = p.add_cell("f", x.clone(), y).unwrap();
        let h = p.add_cell("g", x, z).unwrap();
        p.add_cell("bad", f, h).unwrap();
        let report = p.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].generator, GeneratorId::new("bad", 2));
    }

    #[test]
    fn validation_rejects_dimension_errors() {
        let mut p = Polygraph::new();
        p.push(Generator {
            id: GeneratorId::new("x", 0),
            source: Some(g("x", 0)),
            target: None,
        })
        .unwrap();
        p.push(Generator { id: GeneratorId::new("f", 1), source: Some(g("x", 0)), target: None })
            .unwrap();
        p.push(Generator {
            id: GeneratorId::new("h", 2),
            source: Some(g("x", 0)),
            target: Some(g("ghost", 1)),
        })
        .unwrap();
        let msgs: Vec<_> = p.validate().violations.iter().map(|v| v.to_string()).collect();
        assert_eq!(msgs.len(), 4, "{msgs:?}");
        assert!(msgs.iter().any(|m| m.contains("ghost")));
    }

    #[test]
    fn duplicate_names_rejected_per_dimension() {
        let mut p = Polygraph::new();
        p.add_object("a").unwrap();
        assert!(matches!(p.add_object("a"), Err(CellError::DuplicateGenerator(_))));
        let a = g("a", 0);
        p.add_cell("a", a.clone(), a).unwrap();
        assert_eq!(p.find_by_name("a"), None);
    }

    #[test]
    fn globes_and_spheres() {
        let d1 = globe(1);
        assert_eq!(d1.basis(0).len(), 2);
        assert_eq!(d1.basis(1).len(), 1);
        let s0 = sphere(0);
        assert_eq!(s0.basis(0).len(), 2);
        assert_eq!(s0.len(), 2);
        assert!(sphere(-1).is_empty());
        for n in 0..=6 {
            assert!(globe(n).validate().is_ok(), "globe {n}");
            assert!(sphere(n as isize).validate().is_ok(), "sphere {n}");
            assert_eq!(globe(n).len(), 2 * n + 1);
            assert_eq!(sphere(n as isize).len(), 2 * n + 2);
        }
        for n in 0..=6 {
            let map = sphere_inclusion(n);
            assert_eq!(map.len(), 2 * n);
            sphere(n as isize - 1).check_morphism(&globe(n), &map).unwrap();
        }
    }

    #[test]
    fn morphism_check_detects_bad_boundary() {
        let d1 = globe(1);
        let mut swap = GeneratorMap::new();
        swap.insert(GeneratorId::new("e0-", 0), GeneratorId::new("e0+", 0));
        swap.insert(GeneratorId::new("e0+", 0), GeneratorId::new("e0-", 0));
        swap.insert(GeneratorId::new("e1", 1), GeneratorId::new("e1", 1));
        assert!(d1.check_morphism(&d1, &swap).is_err());
    }

    #[test]
    fn display_grammar() {
        let e = CellExpr::comp(1, CellExpr::unit(g("f", 1), 2), g("alpha", 2));
        assert_eq!(e.to_string(), "(id(f,2) *1 alpha)");
    }
}
