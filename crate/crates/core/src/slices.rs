//! Slices of a free ω-category over a finite 1-category, their functoriality
//! and colimit, discrete Conduché 1-functors, and the Grothendieck
//! construction of a diagram of finite categories.
//!
//! A generator of the slice `X/a` is a pair `(g, p)` with `g` a generator of
//! `X` and `p : f(t0 g) -> a`. It is named `g@p`. Inside boundaries every
//! generator occurrence carries the anchor obtained by composing `p` with
//! the image of the 1-dimensional path from its 0-target to that of `g`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::cell::{CellError, CellExpr, Generator, GeneratorId, GeneratorMap, Polygraph, Side, Violation};
use crate::fincat::{CategoryError, FiniteCategory, Functor, MorId, Morphism, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error("the domain polygraph is invalid ({} violation(s))", .0.len())]
    Invalid(Vec<Violation>),
    #[error("invalid functor to the base: {0}")]
    Functor(String),
    #[error("slice generator name `{0}` is not unique")]
    NameClash(String),
    #[error("reassembly mismatch: {0}")]
    Reassembly(String),
    #[error("invalid diagram: {0}")]
    Diagram(String),
    #[error("set-level colimit is not a category: {0}")]
    Colimit(String),
    #[error("identification check failed: {0}")]
    Identification(String),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// An ω-functor from a free ω-category to a finite 1-category, given on
/// 0- and 1-generators. Higher generators go to identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorToBase {
    domain: Polygraph,
    base: FiniteCategory,
    images0: BTreeMap<GeneratorId, ObjId>,
    images1: BTreeMap<GeneratorId, MorId>,
}

impl FunctorToBase {
    pub fn new(
        domain: Polygraph,
        base: FiniteCategory,
        images0: BTreeMap<GeneratorId, ObjId>,
        images1: BTreeMap<GeneratorId, MorId>,
    ) -> Result<Self, SliceError> {
        let report = domain.validate();
        if !report.is_ok() {
            return Err(SliceError::Invalid(report.violations));
        }
        let bad = |s: String| Err(SliceError::Functor(s));
        for (id, &x) in &images0 {
            if id.dim != 0 || !domain.contains(id) {
                return bad(format!("`{id}` is not a 0-generator"));
            }
            if x.0 >= base.num_objects() {
                return bad(format!("image of `{id}` is out of range"));
            }
        }
        for (id, &m) in &images1 {
            if id.dim != 1 || !domain.contains(id) {
                return bad(format!("`{id}` is not a 1-generator"));
            }
            if m.0 >= base.num_morphisms() {
                return bad(format!("image of `{id}` is out of range"));
            }
        }
        let f = FunctorToBase { domain, base, images0, images1 };
        for g in f.domain.generators() {
            let e = CellExpr::Gen(g.id.clone());
            match g.id.dim {
                0 => {
                    if !f.images0.contains_key(&g.id) {
                        return bad(format!("0-generator `{}` has no image", g.id));
                    }
                }
                1 => {
                    let Some(&m) = f.images1.get(&g.id) else {
                        return bad(format!("1-generator `{}` has no image", g.id));
                    };
                    let s = f.object_image(&f.domain.boundary(&e, Side::Source)?)?;
                    let t = f.object_image(&f.domain.boundary(&e, Side::Target)?)?;
                    if f.base.src(m) != s || f.base.tgt(m) != t {
                        return bad(format!("image of `{}` does not respect its endpoints", g.id));
                    }
                }
                _ => {
                    let s = f.image(&f.domain.iterated_boundary(&e, 1, Side::Source)?)?;
                    let t = f.image(&f.domain.iterated_boundary(&e, 1, Side::Target)?)?;
                    if s != t {
                        return bad(format!(
                            "1-source and 1-target of `{}` have different images `{}` and `{}`",
                            g.id,
                            f.base.morphism_name(s),
                            f.base.morphism_name(t)
                        ));
                    }
                }
            }
        }
        Ok(f)
    }

    /// The polygraph of the 1-skeleton of a category that is free on its
    /// non-identity morphisms (e.g. a poset with no composites such as
    /// `[1]`), with the identity functor. Fails if some non-identity
    /// morphism is a composite.
    pub fn identity_of_free(base: FiniteCategory) -> Result<Self, SliceError> {
        let mut p = Polygraph::new();
        let mut images0 = BTreeMap::new();
        let mut images1 = BTreeMap::new();
        for x in base.objects() {
            let e = p.add_object(base.object_name(x))?;
            if let CellExpr::Gen(id) = e {
                images0.insert(id, x);
            }
        }
        for m in base.morphism_ids().filter(|&m| !base.is_identity(m)) {
            let composite = base.morphism_ids().any(|g| {
                !base.is_identity(g)
                    && base.morphism_ids().any(|h| !base.is_identity(h) && base.compose(g, h) == Some(m))
            });
            if composite {
                return Err(SliceError::Functor(format!("`{}` is a composite", base.morphism_name(m))));
            }
            let s = CellExpr::gen(base.object_name(base.src(m)), 0);
            let t = CellExpr::gen(base.object_name(base.tgt(m)), 0);
            if let CellExpr::Gen(id) = p.add_cell(base.morphism_name(m), s, t)? {
                images1.insert(id, m);
            }
        }
        Self::new(p, base, images0, images1)
    }

    pub fn domain(&self) -> &Polygraph {
        &self.domain
    }

    pub fn base(&self) -> &FiniteCategory {
        &self.base
    }

    pub fn images0(&self) -> &BTreeMap<GeneratorId, ObjId> {
        &self.images0
    }

    pub fn images1(&self) -> &BTreeMap<GeneratorId, MorId> {
        &self.images1
    }

    /// Image of a 0-cell.
    pub fn object_image(&self, e: &CellExpr) -> Result<ObjId, SliceError> {
        match e {
            CellExpr::Gen(id) if id.dim == 0 => {
                self.images0.get(id).copied().ok_or_else(|| SliceError::Functor(format!("no image for `{id}`")))
            }
            _ => Err(SliceError::Functor(format!("`{e}` is not a 0-generator"))),
        }
    }

    /// Image of a 1-cell: the composite of the images along its path.
    pub fn image(&self, e: &CellExpr) -> Result<MorId, SliceError> {
        let path = self.domain.path(e)?;
        if path.is_empty() {
            let x = self.object_image(&self.domain.iterated_boundary(e, 0, Side::Source)?)?;
            return Ok(self.base.identity(x));
        }
        let images = path
            .iter()
            .map(|g| self.images1.get(g).copied().ok_or_else(|| SliceError::Functor(format!("no image for `{g}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        self.base
            .compose_path(&images)
            .ok_or_else(|| SliceError::Functor(format!("images along `{e}` do not compose")))
    }

    /// `f(t0 g)` for a generator.
    pub fn anchor_object(&self, g: &GeneratorId) -> Result<ObjId, SliceError> {
        self.object_image(&self.domain.iterated_boundary(&CellExpr::Gen(g.clone()), 0, Side::Target)?)
    }

    fn slice_id(&self, g: &GeneratorId, p: MorId) -> GeneratorId {
        GeneratorId::new(format!("{}@{}", g.name, self.base.morphism_name(p)), g.dim)
    }

    /// Anchors every generator occurrence of `e`, given the anchor `q` of
    /// its 0-target.
    fn anchor(&self, e: &CellExpr, q: MorId) -> Result<CellExpr, SliceError> {
        Ok(match e {
            CellExpr::Gen(h) => CellExpr::Gen(self.slice_id(h, q)),
            CellExpr::Unit { base, dim } => CellExpr::unit(self.anchor(base, q)?, *dim),
            CellExpr::Comp { k: 0, left, right } => {
                let l1 = self.domain.iterated_boundary(left, 1, Side::Source)?;
                let qr = self.base.compose(q, self.image(&l1)?).ok_or_else(|| {
                    SliceError::Functor(format!("anchor does not compose along `{left}`"))
                })?;
                CellExpr::comp(0, self.anchor(left, q)?, self.anchor(right, qr)?)
            }
            CellExpr::Comp { k, left, right } => CellExpr::comp(*k, self.anchor(left, q)?, self.anchor(right, q)?),
        })
    }
}

/// A generator `(cell, anchor)` of a slice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceCell {
    pub cell: GeneratorId,
    pub anchor: MorId,
}

/// The slice `X/a` as a polygraph, with the pair behind each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub object: ObjId,
    pub polygraph: Polygraph,
    cells: BTreeMap<GeneratorId, SliceCell>,
    ids: BTreeMap<SliceCell, GeneratorId>,
}

impl Slice {
    pub fn cell(&self, id: &GeneratorId) -> Option<&SliceCell> {
        self.cells.get(id)
    }

    pub fn id(&self, cell: &SliceCell) -> Option<&GeneratorId> {
        self.ids.get(cell)
    }

    /// The projection `(g, p) ↦ g` to the domain.
    pub fn projection(&self) -> GeneratorMap {
        self.cells.iter().map(|(id, c)| (id.clone(), c.cell.clone())).collect()
    }
}

/// The slice `X/a`; generators in domain order, anchors in base order.
pub fn slice(f: &FunctorToBase, a: ObjId) -> Result<Slice, SliceError> {
    let mut polygraph = Polygraph::new();
    let mut cells = BTreeMap::new();
    let mut ids = BTreeMap::new();
    for g in f.domain.generators() {
        let x = f.anchor_object(&g.id)?;
        for p in f.base.hom(x, a) {
            let id = f.slice_id(&g.id, p);
            let (source, target) = match (&g.source, &g.target) {
                (Some(s), Some(t)) => {
                    // only a 1-generator has a source with a different 0-target
                    let ps = if g.id.dim == 1 {
                        let e = CellExpr::Gen(g.id.clone());
                        f.base.compose(p, f.image(&e)?).expect("endpoints checked")
                    } else {
                        p
                    };
                    (Some(f.anchor(s, ps)?), Some(f.anchor(t, p)?))
                }
                _ => (None, None),
            };
            polygraph
                .push(Generator { id: id.clone(), source, target })
                .map_err(|_| SliceError::NameClash(id.name.clone()))?;
            let cell = SliceCell { cell: g.id.clone(), anchor: p };
            cells.insert(id.clone(), cell.clone());
            ids.insert(cell, id);
        }
    }
    polygraph.set_max_dim(f.domain.max_dim());
    Ok(Slice { object: a, polygraph, cells, ids })
}

fn map_between(f: &FunctorToBase, beta: MorId, from: &Slice, to: &Slice) -> GeneratorMap {
    from.cells
        .iter()
        .map(|(id, c)| {
            let anchor = f.base.compose(beta, c.anchor).expect("β starts at the slice object");
            (id.clone(), to.ids[&SliceCell { cell: c.cell.clone(), anchor }].clone())
        })
        .collect()
}

/// The morphism `X/a -> X/a'` induced by `β : a -> a'`, `(g, p) ↦ (g, β∘p)`.
pub fn slice_map(f: &FunctorToBase, beta: MorId) -> Result<GeneratorMap, SliceError> {
    let from = slice(f, f.base.src(beta))?;
    let to = slice(f, f.base.tgt(beta))?;
    Ok(map_between(f, beta, &from, &to))
}

/// The map `X/a -> Y/a`, `(x, p) ↦ (g x, p)`, induced by a morphism
/// `g : X -> Y` over the base.
pub fn slice_morphism(
    fx: &FunctorToBase,
    fy: &FunctorToBase,
    g: &GeneratorMap,
    a: ObjId,
) -> Result<GeneratorMap, SliceError> {
    if fx.base != fy.base {
        return Err(SliceError::Functor("the two functors have different bases".into()));
    }
    fx.domain.check_morphism(&fy.domain, g)?;
    for (x, o) in &fx.images0 {
        if fy.images0.get(&g[x]) != Some(o) {
            return Err(SliceError::Functor(format!("`{x}` and its image lie over different objects")));
        }
    }
    for (x, m) in &fx.images1 {
        if fy.images1.get(&g[x]) != Some(m) {
            return Err(SliceError::Functor(format!("`{x}` and its image lie over different morphisms")));
        }
    }
    let sx = slice(fx, a)?;
    let sy = slice(fy, a)?;
    Ok(sx
        .cells
        .iter()
        .map(|(id, c)| (id.clone(), sy.ids[&SliceCell { cell: g[&c.cell].clone(), anchor: c.anchor }].clone()))
        .collect())
}

/// The colimit of `a ↦ X/a` and its identification with `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reassembly {
    pub polygraph: Polygraph,
    /// Members `(a, slice generator)` of each colimit generator, in the
    /// order of `polygraph.generators()`.
    pub classes: Vec<Vec<(ObjId, GeneratorId)>>,
    /// The comparison map to the domain, `[(g, p)] ↦ g`.
    pub to_domain: GeneratorMap,
}

/// Glues all slices along all `slice_map`s and checks that the result is
/// isomorphic to the domain.
pub fn reassemble(f: &FunctorToBase) -> Result<Reassembly, SliceError> {
    let slices = f.base.objects().map(|a| slice(f, a)).collect::<Result<Vec<_>, _>>()?;
    let mut members: Vec<(ObjId, &GeneratorId)> = Vec::new();
    let mut index = BTreeMap::new();
    for s in &slices {
        for g in s.polygraph.generators() {
            index.insert((s.object, &g.id), members.len());
            members.push((s.object, &g.id));
        }
    }
    let mut uf = UnionFind::<usize>::new(members.len());
    for beta in f.base.morphism_ids() {
        let (a, b) = (f.base.src(beta), f.base.tgt(beta));
        for (x, y) in map_between(f, beta, &slices[a.0], &slices[b.0]) {
            uf.union(index[&(a, &x)], index[&(b, &y)]);
        }
    }
    let labels = uf.into_labeling();
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by_label.into_values().collect();
    classes.sort_by_key(|c| (members[c[0]].1.dim, c[0]));
    let mut class_of = vec![0; members.len()];
    for (k, c) in classes.iter().enumerate() {
        for &i in c {
            class_of[i] = k;
        }
    }
    let class_id = |k: usize| {
        let (_, id) = members[classes[k][0]];
        GeneratorId::new(format!("[{}]", id.name), id.dim)
    };

    let mut polygraph = Polygraph::new();
    let mut to_domain = GeneratorMap::new();
    for (k, c) in classes.iter().enumerate() {
        let underlying = |i: usize| &slices[members[i].0 .0].cells[members[i].1].cell;
        let g = underlying(c[0]);
        if let Some(&i) = c.iter().find(|&&i| underlying(i) != g) {
            return Err(SliceError::Reassembly(format!(
                "`{}` and `{}` are glued but lie over different generators",
                members[c[0]].1, members[i].1
            )));
        }
        let mut boundary = None;
        for &i in c {
            let (a, id) = members[i];
            let gen = slices[a.0].polygraph.generator(id).expect("slice generator");
            let mut rename = |h: &GeneratorId| class_id(class_of[index[&(a, h)]]);
            let b = (
                gen.source.as_ref().map(|e| e.map_generators(&mut rename)),
                gen.target.as_ref().map(|e| e.map_generators(&mut rename)),
            );
            match &boundary {
                None => boundary = Some(b),
                Some(prev) if *prev != b => {
                    return Err(SliceError::Reassembly(format!(
                        "members `{}` and `{id}` of one class have different boundaries",
                        members[c[0]].1
                    )))
                }
                Some(_) => {}
            }
        }
        let (source, target) = boundary.expect("classes are non-empty");
        let id = class_id(k);
        if to_domain.values().any(|h| h == g) {
            return Err(SliceError::Reassembly(format!("generator `{g}` is covered by two classes")));
        }
        to_domain.insert(id.clone(), g.clone());
        polygraph.push(Generator { id, source, target }).map_err(|e| SliceError::Reassembly(e.to_string()))?;
    }
    if let Some(g) = f.domain.generators().iter().find(|g| !to_domain.values().any(|h| *h == g.id)) {
        return Err(SliceError::Reassembly(format!("generator `{}` is missing from the colimit", g.id)));
    }
    polygraph.set_max_dim(f.domain.max_dim());
    polygraph.check_morphism(&f.domain, &to_domain).map_err(|e| SliceError::Reassembly(e.to_string()))?;
    let classes = classes
        .iter()
        .map(|c| c.iter().map(|&i| (members[i].0, members[i].1.clone())).collect())
        .collect();
    Ok(Reassembly { polygraph, classes, to_domain })
}

/// A factorization `u(x) = left ∘ right` with the wrong number of lifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConducheFailure {
    pub morphism: MorId,
    pub left: MorId,
    pub right: MorId,
    pub lifts: usize,
}

impl fmt::Display for ConducheFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "morphism #{}: factorization (#{}, #{}) of its image has {} lift(s)",
            self.morphism.0, self.left.0, self.right.0, self.lifts
        )
    }
}

/// Checks that every factorization of `u(x)` lifts to exactly one
/// factorization of `x`. The functor `u : c -> d` must be valid.
pub fn conduche_check(c: &FiniteCategory, d: &FiniteCategory, u: &Functor) -> Result<(), ConducheFailure> {
    let mut factorizations: BTreeMap<MorId, Vec<(MorId, MorId)>> = BTreeMap::new();
    for x1 in c.morphism_ids() {
        for x2 in c.morphism_ids() {
            if let Some(x) = c.compose(x1, x2) {
                factorizations.entry(x).or_default().push((x1, x2));
            }
        }
    }
    for x in c.morphism_ids() {
        let ux = u.mor(x);
        for y1 in d.morphism_ids() {
            for y2 in d.morphism_ids() {
                if d.compose(y1, y2) != Some(ux) {
                    continue;
                }
                let lifts = factorizations
                    .get(&x)
                    .map_or(0, |v| v.iter().filter(|&&(x1, x2)| u.mor(x1) == y1 && u.mor(x2) == y2).count());
                if lifts != 1 {
                    return Err(ConducheFailure { morphism: x, left: y1, right: y2, lifts });
                }
            }
        }
    }
    Ok(())
}

/// The slice category `A/a` and its projection to `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCategory {
    pub category: FiniteCategory,
    pub projection: Functor,
    /// `p : b -> a` of each object `(b, p)`.
    pub anchors: Vec<MorId>,
}

impl SliceCategory {
    pub fn object_with_anchor(&self, p: MorId) -> Option<ObjId> {
        self.anchors.iter().position(|&q| q == p).map(ObjId)
    }
}

pub fn slice_category(base: &FiniteCategory, a: ObjId) -> Result<SliceCategory, SliceError> {
    let anchors: Vec<MorId> = base.objects().flat_map(|b| base.hom(b, a).collect::<Vec<_>>()).collect();
    let objects: Vec<String> = anchors.iter().map(|&p| base.morphism_name(p).to_string()).collect();
    let mut morphisms = Vec::new();
    let mut arrows = Vec::new();
    let mut by_key = BTreeMap::new();
    for (i, &pi) in anchors.iter().enumerate() {
        for (j, &pj) in anchors.iter().enumerate() {
            for h in base.hom(base.src(pi), base.src(pj)) {
                if base.compose(pj, h) == Some(pi) {
                    let name = format!("{}:{}=>{}", base.morphism_name(h), objects[i], objects[j]);
                    by_key.insert((i, j, h), MorId(morphisms.len()));
                    morphisms.push(Morphism { name, src: ObjId(i), tgt: ObjId(j) });
                    arrows.push(h);
                }
            }
        }
    }
    let identities =
        (0..anchors.len()).map(|i| by_key[&(i, i, base.identity(base.src(anchors[i])))]).collect();
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src.0, m.tgt.0)).collect();
    let category = FiniteCategory::from_fn(objects, morphisms, identities, |g, f| {
        let h = base.compose(arrows[g.0], arrows[f.0])?;
        by_key.get(&(ends[f.0].0, ends[g.0].1, h)).copied()
    })?;
    let projection =
        Functor::new(&category, base, anchors.iter().map(|&p| base.src(p)).collect(), arrows.clone())?;
    Ok(SliceCategory { category, projection, anchors })
}

/// A functor from a finite category to finite categories, as tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    base: FiniteCategory,
    fibers: Vec<FiniteCategory>,
    transitions: Vec<Functor>,
}

impl Diagram {
    /// `transitions[β]` is `d(β) : d(src β) -> d(tgt β)`.
    pub fn new(
        base: FiniteCategory,
        fibers: Vec<FiniteCategory>,
        transitions: Vec<Functor>,
    ) -> Result<Self, SliceError> {
        let bad = |s: String| Err(SliceError::Diagram(s));
        if fibers.len() != base.num_objects() || transitions.len() != base.num_morphisms() {
            return bad("one fiber per object and one functor per morphism are required".into());
        }
        let mut checked = Vec::with_capacity(transitions.len());
        for (b, t) in base.morphism_ids().zip(transitions) {
            let (s, u) = (&fibers[base.src(b).0], &fibers[base.tgt(b).0]);
            let t = Functor::new(s, u, t.object_table().to_vec(), t.morphism_table().to_vec())
                .map_err(|e| SliceError::Diagram(format!("d({}): {e}", base.morphism_name(b))))?;
            checked.push(t);
        }
        for x in base.objects() {
            if checked[base.identity(x).0] != Functor::identity(&fibers[x.0]) {
                return bad(format!("d(1_{}) is not the identity", base.object_name(x)));
            }
        }
        for g in base.morphism_ids() {
            for f in base.morphism_ids() {
                if let Some(gf) = base.compose(g, f) {
                    if checked[gf.0] != checked[g.0].after(&checked[f.0]) {
                        return bad(format!(
                            "d({}∘{}) is not d({})∘d({})",
                            base.morphism_name(g),
                            base.morphism_name(f),
                            base.morphism_name(g),
                            base.morphism_name(f)
                        ));
                    }
                }
            }
        }
        Ok(Diagram { base, fibers, transitions: checked })
    }

    /// The constant diagram.
    pub fn constant(base: FiniteCategory, fiber: FiniteCategory) -> Self {
        let fibers = vec![fiber.clone(); base.num_objects()];
        let transitions = vec![Functor::identity(&fiber); base.num_morphisms()];
        Diagram { base, fibers, transitions }
    }

    /// `a ↦ A/a`, with `β` acting by postcomposition.
    pub fn slices(base: &FiniteCategory) -> Result<Self, SliceError> {
        let slices = base.objects().map(|a| slice_category(base, a)).collect::<Result<Vec<_>, _>>()?;
        let mut transitions = Vec::new();
        for beta in base.morphism_ids() {
            let (s, t) = (&slices[base.src(beta).0], &slices[base.tgt(beta).0]);
            let obj = |o: ObjId| t.object_with_anchor(base.compose(beta, s.anchors[o.0]).expect("composable")).expect("object");
            let objects: Vec<ObjId> = s.category.objects().map(obj).collect();
            let morphisms = s
                .category
                .morphism_ids()
                .map(|m| {
                    let (x, y) = (objects[s.category.src(m).0], objects[s.category.tgt(m).0]);
                    let h = s.projection.mor(m);
                    t.category
                        .hom(x, y)
                        .find(|&n| t.projection.mor(n) == h)
                        .expect("postcomposition preserves the triangle")
                })
                .collect();
            transitions.push(Functor::new(&s.category, &t.category, objects, morphisms)?);
        }
        Self::new(base.clone(), slices.into_iter().map(|s| s.category).collect(), transitions)
    }

    pub fn base(&self) -> &FiniteCategory {
        &self.base
    }

    pub fn fibers(&self) -> &[FiniteCategory] {
        &self.fibers
    }

    pub fn transition(&self, beta: MorId) -> &Functor {
        &self.transitions[beta.0]
    }

    pub fn transitions(&self) -> &[Functor] {
        &self.transitions
    }
}

/// `∫_A d` with its projection to `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grothendieck {
    pub total: FiniteCategory,
    pub projection: Functor,
    /// `(a, x)` for each object.
    pub objects: Vec<(ObjId, ObjId)>,
    /// `(β, φ)` for each morphism, `φ : d(β)x -> x'` in the target fiber.
    pub morphisms: Vec<(MorId, MorId)>,
}

/// Objects `(a, x)`, morphisms `(β, φ) : (a, x) -> (a', x')` with
/// `φ : d(β)x -> x'`, composed as `(β', φ')∘(β, φ) = (β'∘β, φ'∘d(β')φ)`.
pub fn grothendieck(d: &Diagram) -> Result<Grothendieck, SliceError> {
    let base = &d.base;
    let mut objects = Vec::new();
    let mut object_index = BTreeMap::new();
    for a in base.objects() {
        for x in d.fibers[a.0].objects() {
            object_index.insert((a, x), ObjId(objects.len()));
            objects.push((a, x));
        }
    }
    let mut morphisms = Vec::new();
    let mut entries = Vec::new();
    let mut morphism_index = BTreeMap::new();
    for (i, &(a, x)) in objects.iter().enumerate() {
        for beta in base.morphism_ids().filter(|&b| base.src(b) == a) {
            let a2 = base.tgt(beta);
            let fiber = &d.fibers[a2.0];
            let dx = d.transitions[beta.0].obj(x);
            for phi in fiber.morphism_ids().filter(|&m| fiber.src(m) == dx) {
                let tgt = object_index[&(a2, fiber.tgt(phi))];
                // d(β) need not be injective, so (β, φ) alone does not fix the source
                morphism_index.insert((ObjId(i), beta, phi), MorId(morphisms.len()));
                entries.push((beta, phi));
                morphisms.push(Morphism {
                    name: format!("({},{})", base.morphism_name(beta), fiber.morphism_name(phi)),
                    src: ObjId(i),
                    tgt,
                });
            }
        }
    }
    let names = unique_names(
        objects.iter().map(|&(a, x)| format!("({},{})", base.object_name(a), d.fibers[a.0].object_name(x))).collect(),
    );
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(a, x))| morphism_index[&(ObjId(i), base.identity(a), d.fibers[a.0].identity(x))])
        .collect();
    let morphism_names = unique_names(morphisms.iter().map(|m| m.name.clone()).collect());
    for (m, name) in morphisms.iter_mut().zip(morphism_names) {
        m.name = name;
    }
    let sources: Vec<ObjId> = morphisms.iter().map(|m| m.src).collect();
    let total = FiniteCategory::from_fn(names, morphisms, identities, |g, f| {
        let ((b2, p2), (b1, p1)) = (entries[g.0], entries[f.0]);
        let b = base.compose(b2, b1)?;
        let fiber = &d.fibers[base.tgt(b2).0];
        let p = fiber.compose(p2, d.transitions[b2.0].mor(p1))?;
        morphism_index.get(&(sources[f.0], b, p)).copied()
    })?;
    let projection = Functor::new(
        &total,
        base,
        objects.iter().map(|o| o.0).collect(),
        entries.iter().map(|m| m.0).collect(),
    )?;
    Ok(Grothendieck { total, projection, objects, morphisms: entries })
}

/// The colimit of a diagram of categories, computed as the quotient of the
/// disjoint union of objects and of morphisms by the transition maps.
///
/// This is the colimit when every composable pair of classes has a
/// composable pair of representatives in one fiber and all such composites
/// agree; otherwise an error is returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colimit {
    pub category: FiniteCategory,
    /// Class of each object of each fiber.
    pub object_class: Vec<Vec<ObjId>>,
    /// Class of each morphism of each fiber.
    pub morphism_class: Vec<Vec<MorId>>,
}

fn classes<F>(sizes: &[usize], mut glue: F) -> (Vec<Vec<usize>>, usize)
where
    F: FnMut(&mut dyn FnMut((usize, usize), (usize, usize))),
{
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &n| Some(core::mem::replace(acc, *acc + n))).collect();
    let total: usize = sizes.iter().sum();
    let mut uf = UnionFind::<usize>::new(total);
    glue(&mut |(a, i), (b, j)| {
        uf.union(offsets[a] + i, offsets[b] + j);
    });
    let labels = uf.into_labeling();
    let mut renumber = BTreeMap::new();
    let mut flat = Vec::with_capacity(total);
    for l in labels {
        let next = renumber.len();
        flat.push(*renumber.entry(l).or_insert(next));
    }
    let per = sizes.iter().zip(&offsets).map(|(&n, &o)| flat[o..o + n].to_vec()).collect();
    (per, renumber.len())
}

fn unique_names(candidates: Vec<String>) -> Vec<String> {
    let mut used = BTreeSet::new();
    candidates
        .into_iter()
        .map(|c| {
            let mut name = c.clone();
            let mut k = 1;
            while !used.insert(name.clone()) {
                name = format!("{c}#{k}");
                k += 1;
            }
            name
        })
        .collect()
}

pub fn colimit(d: &Diagram) -> Result<Colimit, SliceError> {
    let base = &d.base;
    let osizes: Vec<usize> = d.fibers.iter().map(|c| c.num_objects()).collect();
    let msizes: Vec<usize> = d.fibers.iter().map(|c| c.num_morphisms()).collect();
    let (ocls, on) = classes(&osizes, |union| {
        for beta in base.morphism_ids() {
            let (a, b) = (base.src(beta).0, base.tgt(beta).0);
            for x in d.fibers[a].objects() {
                union((a, x.0), (b, d.transitions[beta.0].obj(x).0));
            }
        }
    });
    let (mcls, mn) = classes(&msizes, |union| {
        for beta in base.morphism_ids() {
            let (a, b) = (base.src(beta).0, base.tgt(beta).0);
            for m in d.fibers[a].morphism_ids() {
                union((a, m.0), (b, d.transitions[beta.0].mor(m).0));
            }
        }
    });
    let mut onames = vec![None; on];
    let mut mmeta: Vec<Option<(String, usize, usize)>> = vec![None; mn];
    let mut identities = vec![None; on];
    let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (a, fiber) in d.fibers.iter().enumerate() {
        for x in fiber.objects() {
            let k = ocls[a][x.0];
            onames[k].get_or_insert_with(|| fiber.object_name(x).to_string());
            let id = mcls[a][fiber.identity(x).0];
            if *identities[k].get_or_insert(id) != id {
                return Err(SliceError::Colimit(format!("object `{}` has two identities", fiber.object_name(x))));
            }
        }
        for m in fiber.morphism_ids() {
            let k = mcls[a][m.0];
            let ends = (ocls[a][fiber.src(m).0], ocls[a][fiber.tgt(m).0]);
            let meta = mmeta[k].get_or_insert_with(|| (fiber.morphism_name(m).to_string(), ends.0, ends.1));
            if (meta.1, meta.2) != ends {
                return Err(SliceError::Colimit(format!("morphism `{}` has ill-defined endpoints", fiber.morphism_name(m))));
            }
            for f in fiber.morphism_ids() {
                if let Some(gf) = fiber.compose(m, f) {
                    let key = (k, mcls[a][f.0]);
                    let v = mcls[a][gf.0];
                    if *table.entry(key).or_insert(v) != v {
                        return Err(SliceError::Colimit(format!(
                            "composite of `{}` and `{}` is ill-defined",
                            fiber.morphism_name(m),
                            fiber.morphism_name(f)
                        )));
                    }
                }
            }
        }
    }
    let onames = unique_names(onames.into_iter().map(|n| n.expect("classes are non-empty")).collect());
    let mmeta: Vec<(String, usize, usize)> = mmeta.into_iter().map(|m| m.expect("classes are non-empty")).collect();
    let mnames = unique_names(mmeta.iter().map(|m| m.0.clone()).collect());
    let morphisms = mnames
        .into_iter()
        .zip(&mmeta)
        .map(|(name, m)| Morphism { name, src: ObjId(m.1), tgt: ObjId(m.2) })
        .collect();
    let identities = identities.into_iter().map(|i| MorId(i.expect("non-empty"))).collect();
    for g in 0..mn {
        for f in 0..mn {
            if mmeta[g].1 == mmeta[f].2 && !table.contains_key(&(g, f)) {
                return Err(SliceError::Colimit(format!(
                    "`{}` and `{}` are composable but no fiber composes them",
                    mmeta[g].0, mmeta[f].0
                )));
            }
        }
    }
    let category =
        FiniteCategory::from_fn(onames, morphisms, identities, |g, f| table.get(&(g.0, f.0)).map(|&h| MorId(h)))
            .map_err(|e| SliceError::Colimit(e.to_string()))?;
    let object_class = ocls.into_iter().map(|v| v.into_iter().map(ObjId).collect()).collect();
    let morphism_class = mcls.into_iter().map(|v| v.into_iter().map(MorId).collect()).collect();
    Ok(Colimit { category, object_class, morphism_class })
}

/// The canonical functor `∫_A d -> colim d`, `(a, x) ↦ [x]`, `(β, φ) ↦ [φ]`.
pub fn comparison(d: &Diagram, g: &Grothendieck, c: &Colimit) -> Result<Functor, SliceError> {
    let objects = g.objects.iter().map(|&(a, x)| c.object_class[a.0][x.0]).collect();
    let morphisms = g.morphisms.iter().map(|&(beta, phi)| c.morphism_class[d.base.tgt(beta).0][phi.0]).collect();
    Ok(Functor::new(&g.total, &c.category, objects, morphisms)?)
}

/// Result of comparing the two canonical functors out of `∫_A (A/-)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceIdentification {
    pub diagram: Diagram,
    pub grothendieck: Grothendieck,
    pub colimit: Colimit,
    /// The isomorphism `colim_a A/a -> A`, `[(b, p)] ↦ b`, `[h] ↦ h`.
    pub iso: Functor,
    /// `iso ∘ comparison`, i.e. `(a, (b, p)) ↦ b`.
    pub source_functor: Functor,
}

/// For `d = a ↦ A/a`, checks exhaustively that `colim d ≅ A`, that the
/// comparison functor becomes `Q : (a, (b, p)) ↦ b` under this
/// isomorphism, that the projection is `P : (a, (b, p)) ↦ a`, and that the
/// anchors `p` form a natural transformation `Q ⇒ P`.
pub fn check_slice_identification(base: &FiniteCategory) -> Result<SliceIdentification, SliceError> {
    let fail = |s: String| Err(SliceError::Identification(s));
    let diagram = Diagram::slices(base)?;
    let g = grothendieck(&diagram)?;
    let c = colimit(&diagram)?;
    let slices = base.objects().map(|a| slice_category(base, a)).collect::<Result<Vec<_>, _>>()?;

    let mut iso_objects = vec![None; c.category.num_objects()];
    let mut iso_morphisms = vec![None; c.category.num_morphisms()];
    for (a, s) in slices.iter().enumerate() {
        for x in s.category.objects() {
            let b = s.projection.obj(x);
            if *iso_objects[c.object_class[a][x.0].0].get_or_insert(b) != b {
                return fail("object classes do not determine an object of the base".into());
            }
        }
        for m in s.category.morphism_ids() {
            let h = s.projection.mor(m);
            if *iso_morphisms[c.morphism_class[a][m.0].0].get_or_insert(h) != h {
                return fail("morphism classes do not determine a morphism of the base".into());
            }
        }
    }
    let iso = Functor::new(
        &c.category,
        base,
        iso_objects.into_iter().map(|o| o.expect("non-empty class")).collect(),
        iso_morphisms.into_iter().map(|m| m.expect("non-empty class")).collect(),
    )?;
    if !iso.is_isomorphism(base) {
        return fail("colim A/- -> A is not bijective".into());
    }
    let cmp = comparison(&diagram, &g, &c)?;
    let source_functor = iso.after(&cmp);
    let q_objects: Vec<ObjId> = g.objects.iter().map(|&(a, x)| slices[a.0].projection.obj(x)).collect();
    let q_morphisms: Vec<MorId> =
        g.morphisms.iter().map(|&(beta, h)| slices[base.tgt(beta).0].projection.mor(h)).collect();
    if source_functor != Functor::new(&g.total, base, q_objects, q_morphisms)? {
        return fail("comparison is not (a, (b, p)) ↦ b".into());
    }
    let p_functor = Functor::new(
        &g.total,
        base,
        g.objects.iter().map(|o| o.0).collect(),
        g.morphisms.iter().map(|m| m.0).collect(),
    )?;
    if g.projection != p_functor {
        return fail("projection is not (a, (b, p)) ↦ a".into());
    }
    let component = |o: ObjId| {
        let (a, x) = g.objects[o.0];
        slices[a.0].anchors[x.0]
    };
    for m in g.total.morphism_ids() {
        let (s, t) = (g.total.src(m), g.total.tgt(m));
        let left = base.compose(p_functor.mor(m), component(s));
        let right = base.compose(component(t), source_functor.mor(m));
        if left.is_none() || left != right {
            return fail(format!("naturality fails at `{}`", g.total.morphism_name(m)));
        }
    }
    Ok(SliceIdentification { diagram, grothendieck: g, colimit: c, iso, source_functor })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> FunctorToBase {
        FunctorToBase::identity_of_free(FiniteCategory::chain(1)).unwrap()
    }

    fn names(p: &Polygraph, n: usize) -> Vec<String> {
        p.basis(n).iter().map(|g| g.name.clone()).collect()
    }

    #[test]
    fn slice_of_the_arrow() {
        let f = arrow();
        let s = slice(&f, ObjId(1)).unwrap();
        assert_eq!(names(&s.polygraph, 0), ["0@0->1", "1@1_1"]);
        assert_eq!(names(&s.polygraph, 1), ["0->1@1_1"]);
        let u = s.polygraph.generator(&GeneratorId::new("0->1@1_1", 1)).unwrap();
        assert_eq!(u.source, Some(CellExpr::gen("0@0->1", 0)));
        assert_eq!(u.target, Some(CellExpr::gen("1@1_1", 0)));
        assert!(s.polygraph.validate().is_ok());
        let s0 = slice(&f, ObjId(0)).unwrap();
        assert_eq!(names(&s0.polygraph, 0), ["0@1_0"]);
        assert!(names(&s0.polygraph, 1).is_empty());
    }

    #[test]
    fn slice_map_of_the_arrow() {
        let f = arrow();
        let beta = f.base().morphism_by_name("0->1").unwrap();
        let m = slice_map(&f, beta).unwrap();
        assert_eq!(m[&GeneratorId::new("0@1_0", 0)], GeneratorId::new("0@0->1", 0));
        let id = slice_map(&f, f.base().identity(ObjId(1))).unwrap();
        assert!(id.iter().all(|(x, y)| x == y));
        let s0 = slice(&f, ObjId(0)).unwrap();
        let s1 = slice(&f, ObjId(1)).unwrap();
        s0.polygraph.check_morphism(&s1.polygraph, &m).unwrap();
    }

    #[test]
    fn empty_domain() {
        let f = FunctorToBase::new(Polygraph::new(), FiniteCategory::chain(1), BTreeMap::new(), BTreeMap::new())
            .unwrap();
        assert!(slice(&f, ObjId(0)).unwrap().polygraph.is_empty());
        assert!(reassemble(&f).unwrap().polygraph.is_empty());
    }

    #[test]
    fn reassemble_the_arrow() {
        let r = reassemble(&arrow()).unwrap();
        assert_eq!(r.polygraph.len(), 3);
        assert_eq!(r.polygraph.basis(0).len(), 2);
        assert_eq!(r.classes.iter().map(Vec::len).collect::<Vec<_>>(), [2, 1, 1]);
    }

    /// Two objects, two parallel arrows and a 2-cell between them, over `[1]`.
    fn two_cell() -> FunctorToBase {
        let mut p = Polygraph::new();
        let x = p.add_object("x").unwrap();
        let y = p.add_object("y").unwrap();
        let u = p.add_cell("u", x.clone(), y.clone()).unwrap();
        let v = p.add_cell("v", x.clone(), y.clone()).unwrap();
        p.add_cell("w", CellExpr::comp(0, CellExpr::unit(y.clone(), 1), u), v).unwrap();
        let base = FiniteCategory::chain(1);
        let ar = base.morphism_by_name("0->1").unwrap();
        let images0 = [("x", 0), ("y", 1)].iter().map(|&(n, o)| (GeneratorId::new(n, 0), ObjId(o))).collect();
        let images1 = ["u", "v"].iter().map(|&n| (GeneratorId::new(n, 1), ar)).collect();
        FunctorToBase::new(p, base, images0, images1).unwrap()
    }

    #[test]
    fn anchors_inside_boundaries() {
        let f = two_cell();
        let s = slice(&f, ObjId(1)).unwrap();
        assert!(s.polygraph.validate().is_ok(), "{:?}", s.polygraph.validate());
        let w = s.polygraph.generator(&GeneratorId::new("w@1_1", 2)).unwrap();
        assert_eq!(w.source.as_ref().unwrap().to_string(), "(id(y@1_1,1) *0 u@1_1)");
        assert_eq!(s.polygraph.len(), 5);
        assert!(slice(&f, ObjId(0)).unwrap().polygraph.basis(1).is_empty());
        reassemble(&f).unwrap();
    }

    #[test]
    fn functor_validation() {
        let f = two_cell();
        let mut images1 = f.images1().clone();
        images1.insert(GeneratorId::new("v", 1), f.base().identity(ObjId(0)));
        let r = FunctorToBase::new(f.domain().clone(), f.base().clone(), f.images0().clone(), images1);
        assert!(matches!(r, Err(SliceError::Functor(_))));
        let mut images0 = f.images0().clone();
        images0.remove(&GeneratorId::new("x", 0));
        let r = FunctorToBase::new(f.domain().clone(), f.base().clone(), images0, f.images1().clone());
        assert!(matches!(r, Err(SliceError::Functor(_))));
    }

    #[test]
    fn conduche_examples() {
        let a = FiniteCategory::chain(2);
        for x in a.objects() {
            let s = slice_category(&a, x).unwrap();
            assert_eq!(conduche_check(&s.category, &a, &s.projection), Ok(()));
        }
        let c = FiniteCategory::chain(1);
        let d = FiniteCategory::chain(2);
        let v02 = d.morphism_by_name("0->2").unwrap();
        let u = Functor::new(
            &c,
            &d,
            vec![ObjId(0), ObjId(2)],
            c.morphism_ids()
                .map(|m| match c.morphism_name(m) {
                    "1_0" => d.identity(ObjId(0)),
                    "1_1" => d.identity(ObjId(2)),
                    _ => v02,
                })
                .collect(),
        )
        .unwrap();
        let fail = conduche_check(&c, &d, &u).unwrap_err();
        assert_eq!(fail.lifts, 0);
        assert_eq!(conduche_check(&d, &d, &Functor::identity(&d)), Ok(()));
    }

    #[test]
    fn slice_category_has_terminal_identity() {
        let a = FiniteCategory::poset(3, |i, j| i == j || (i == 0)).unwrap();
        for x in a.objects() {
            let s = slice_category(&a, x).unwrap();
            let t = s.category.find_terminal().unwrap();
            assert_eq!(s.anchors[t.0], a.identity(x));
        }
    }

    #[test]
    fn grothendieck_of_constant_point() {
        let a = FiniteCategory::chain(2);
        let g = grothendieck(&Diagram::constant(a.clone(), FiniteCategory::terminal())).unwrap();
        assert!(g.projection.is_isomorphism(&a));
        let c = colimit(&Diagram::constant(a.clone(), FiniteCategory::terminal())).unwrap();
        assert_eq!((c.category.num_objects(), c.category.num_morphisms()), (1, 1));
    }

    #[test]
    fn grothendieck_over_a_point() {
        let fiber = FiniteCategory::chain(2);
        let g = grothendieck(&Diagram::constant(FiniteCategory::terminal(), fiber.clone())).unwrap();
        assert_eq!(g.total.num_objects(), fiber.num_objects());
        assert_eq!(g.total.num_morphisms(), fiber.num_morphisms());
    }

    #[test]
    fn identification_on_the_arrow() {
        let a = FiniteCategory::chain(1);
        let r = check_slice_identification(&a).unwrap();
        assert_eq!(r.grothendieck.total.num_objects(), 3);
        // three identities, two morphisms over 0->1, one inside A/1
        assert_eq!(r.grothendieck.total.num_morphisms(), 6);
    }

    /// `e` acts on `A/*` by `p ↦ e p`, which sends both objects to `e`.
    #[test]
    fn identification_with_a_non_injective_transition() {
        let a = FiniteCategory::monoid(vec!["1".into(), "e".into()], &[vec![0, 1], vec![1, 1]], 0).unwrap();
        let r = check_slice_identification(&a).unwrap();
        assert_eq!(r.grothendieck.total.num_objects(), 2);
        // A/* has one arrow out of 1 and three out of e; from (*, x) there is
        // one (β, φ) for each arrow out of βx
        let g = &r.grothendieck.total;
        let x = |n: usize| g.morphism_ids().filter(|&m| g.src(m).0 == n).count();
        assert_eq!((x(0), x(1)), (1 + 3, 3 + 3));
    }

    #[test]
    fn bad_diagram_rejected() {
        let a = FiniteCategory::chain(1);
        let fibers = vec![FiniteCategory::discrete(2), FiniteCategory::terminal()];
        let to_point = Functor::new(&fibers[0], &fibers[1], vec![ObjId(0); 2], vec![MorId(0); 2]).unwrap();
        // d(1_0) should be the identity of the discrete category
        let transitions = vec![to_point.clone(), to_point, Functor::identity(&fibers[1])];
        assert!(matches!(Diagram::new(a, fibers, transitions), Err(SliceError::Diagram(_))));
    }
}
