//! JSON formats and input detection.
//!
//! Every reader returns an [`Error::Parse`] for malformed JSON or a shape
//! that matches no schema, and an [`Error::Invalid`] when the document is
//! well-formed but describes something that is not a valid object
//! (a dangling generator name, a broken composition table, ...).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use polyhom_core::fincat::{delooping1, delooping2, Cell2, Morphism};
use polyhom_core::{
    Cell2Id, ChainComplex, Diagram, Finite2Category, FiniteCategory, FiniteGroup, Functor, FunctorToBase, Generator,
    GeneratorId, HomologyGroup, IntMatrix, MorId, ObjId, Polygraph, StringRewritingSystem,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::expr::{parse_expr, RawExpr};
use crate::srs::{parse_srs_text, SrsJson};

/// An integer that is written as a JSON number when it fits in 64 bits and
/// as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        i64::try_from(x).map_or_else(|_| JsonInt::Big(x.to_string()), JsonInt::Small)
    }
}

impl JsonInt {
    pub fn to_bigint(&self) -> Result<BigInt, Error> {
        match self {
            JsonInt::Small(x) => Ok(BigInt::from(*x)),
            JsonInt::Big(s) => s.parse().map_err(|_| Error::parse(format!("`{s}` is not an integer"))),
        }
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, Error> {
    T::deserialize(v).map_err(|e| Error::parse(format!("{what}: {e}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

pub fn pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("plain data serializes")
}

// ---------------------------------------------------------------- polygraphs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ExprTree {
    Gen(String),
    Unit { base: Box<ExprJson>, dim: usize },
    Comp { k: usize, left: Box<ExprJson>, right: Box<ExprJson> },
}

/// A cell expression, as a tree or in the text grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExprJson {
    Text(String),
    Tree(ExprTree),
}

impl ExprJson {
    fn raw(&self) -> Result<RawExpr, Error> {
        Ok(match self {
            ExprJson::Text(s) => parse_expr(s)?,
            ExprJson::Tree(ExprTree::Gen(n)) => RawExpr::Name(n.clone()),
            ExprJson::Tree(ExprTree::Unit { base, dim }) => RawExpr::Unit(Box::new(base.raw()?), *dim),
            ExprJson::Tree(ExprTree::Comp { k, left, right }) => {
                RawExpr::Comp(*k, Box::new(left.raw()?), Box::new(right.raw()?))
            }
        })
    }

    pub fn from_expr(e: &polyhom_core::CellExpr) -> Self {
        use polyhom_core::CellExpr as E;
        ExprJson::Tree(match e {
            E::Gen(g) => ExprTree::Gen(g.name.clone()),
            E::Unit { base, dim } => ExprTree::Unit { base: Box::new(Self::from_expr(base)), dim: *dim },
            E::Comp { k, left, right } => ExprTree::Comp {
                k: *k,
                left: Box::new(Self::from_expr(left)),
                right: Box::new(Self::from_expr(right)),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub source: Option<ExprJson>,
    #[serde(default)]
    pub target: Option<ExprJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygraphJson {
    pub generators: Vec<GeneratorJson>,
    /// Truncation bound, when larger than the top generator dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    /// No generators exist beyond `max_dim`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub complete: bool,
}

/// A polygraph as read from a file, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygraphInput {
    pub polygraph: Polygraph,
    pub complete: bool,
}

impl PolygraphJson {
    pub fn build(&self) -> Result<PolygraphInput, Error> {
        let mut dims = BTreeMap::new();
        for g in &self.generators {
            if g.name.is_empty() || !g.name.chars().all(|c| !c.is_whitespace() && !"(),".contains(c)) {
                return Err(Error::invalid(format!("`{}` is not a valid generator name", g.name)));
            }
            if dims.insert(g.name.clone(), g.dim).is_some() {
                return Err(Error::invalid(format!("generator `{}` is declared twice", g.name)));
            }
        }
        let mut p = Polygraph::new();
        for g in &self.generators {
            let side = |e: &Option<ExprJson>, which: &str| -> Result<Option<polyhom_core::CellExpr>, Error> {
                match (e, g.dim) {
                    (None, 0) => Ok(None),
                    (Some(_), 0) => Err(Error::invalid(format!("0-generator `{}` has a {which}", g.name))),
                    (None, _) => Err(Error::invalid(format!("generator `{}` has no {which}", g.name))),
                    (Some(e), _) => e.raw()?.resolve(&dims).map(Some).map_err(|n| {
                        Error::invalid(format!("generator `{}`: {which} refers to unknown generator `{n}`", g.name))
                    }),
                }
            };
            let (source, target) = (side(&g.source, "source")?, side(&g.target, "target")?);
            p.push(Generator { id: GeneratorId::new(g.name.clone(), g.dim), source, target })?;
        }
        if let Some(m) = self.max_dim {
            if m < p.max_dim() {
                return Err(Error::invalid(format!("max_dim {m} is below the top generator dimension {}", p.max_dim())));
            }
            p.set_max_dim(m);
        }
        Ok(PolygraphInput { polygraph: p, complete: self.complete })
    }

    pub fn from_polygraph(p: &Polygraph, complete: bool) -> Self {
        PolygraphJson {
            generators: p
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.id.name.clone(),
                    dim: g.id.dim,
                    source: g.source.as_ref().map(ExprJson::from_expr),
                    target: g.target.as_ref().map(ExprJson::from_expr),
                })
                .collect(),
            max_dim: p.declared_max_dim(),
            complete,
        }
    }
}

// ---------------------------------------------------------------- categories

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: BTreeMap<String, String>,
    /// `"g∘f": h`. Composites with an identity may be left out.
    #[serde(default)]
    pub composition: BTreeMap<String, String>,
}

/// An element of a table, by name or by position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NameOrIndex {
    Index(usize),
    Name(String),
}

impl NameOrIndex {
    fn resolve(&self, names: &[String]) -> Result<usize, Error> {
        match self {
            NameOrIndex::Index(i) if *i < names.len() => Ok(*i),
            NameOrIndex::Index(i) => Err(Error::invalid(format!("index {i} is out of range"))),
            NameOrIndex::Name(n) => {
                names.iter().position(|x| x == n).ok_or_else(|| Error::invalid(format!("unknown element `{n}`")))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidJson {
    elements: Vec<String>,
    table: Vec<Vec<NameOrIndex>>,
    unit: NameOrIndex,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum GroupJson {
    Cyclic {
        cyclic: usize,
    },
    Table {
        elements: Vec<String>,
        table: Vec<Vec<NameOrIndex>>,
        identity: NameOrIndex,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetJson {
    size: usize,
    #[serde(default)]
    leq: Vec<(usize, usize)>,
}

fn table(names: &[String], rows: &[Vec<NameOrIndex>]) -> Result<Vec<Vec<usize>>, Error> {
    rows.iter().map(|r| r.iter().map(|x| x.resolve(names)).collect()).collect()
}

fn group(v: &Value) -> Result<FiniteGroup, Error> {
    match from_value::<GroupJson>(v, "group")? {
        GroupJson::Cyclic { cyclic: 0 } => Err(Error::invalid("the cyclic group of order 0 is not finite")),
        GroupJson::Cyclic { cyclic } => Ok(FiniteGroup::cyclic(cyclic)),
        GroupJson::Table { elements, table: t, identity } => {
            let t = table(&elements, &t)?;
            let e = identity.resolve(&elements)?;
            Ok(FiniteGroup::new(elements, t, e)?)
        }
    }
}

fn single_key<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().filter(|o| o.len() == 1).and_then(|o| o.get(key))
}

pub fn object_id(c: &FiniteCategory, name: &str) -> Result<ObjId, Error> {
    c.object_by_name(name).ok_or_else(|| Error::invalid(format!("unknown object `{name}`")))
}

pub fn morphism_id(c: &FiniteCategory, name: &str) -> Result<MorId, Error> {
    c.morphism_by_name(name).ok_or_else(|| Error::invalid(format!("unknown morphism `{name}`")))
}

/// Reads a category in the full format or one of the shorthands
/// `{"monoid": ..}`, `{"poset": {"size": n, "leq": [[i, j], ..]}}`,
/// `{"chain": n}` and `{"delooping": group}`.
pub fn category_from_value(v: &Value) -> Result<FiniteCategory, Error> {
    if let Some(m) = single_key(v, "monoid") {
        let m: MonoidJson = from_value(m, "monoid")?;
        let t = table(&m.elements, &m.table)?;
        let unit = m.unit.resolve(&m.elements)?;
        return Ok(FiniteCategory::monoid(m.elements, &t, unit)?);
    }
    if let Some(p) = single_key(v, "poset") {
        let p: PosetJson = from_value(p, "poset")?;
        let n = p.size;
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in &p.leq {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("poset relation ({i}, {j}) is out of range")));
            }
            leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        if let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && leq[i][j] && leq[j][i]) {
            return Err(Error::invalid(format!("poset relation is not antisymmetric on {i} and {j}")));
        }
        return Ok(FiniteCategory::poset(n, |i, j| leq[i][j])?);
    }
    if let Some(n) = single_key(v, "chain") {
        return Ok(FiniteCategory::chain(from_value(n, "chain")?));
    }
    if let Some(g) = single_key(v, "delooping") {
        return Ok(delooping1(&group(g)?));
    }
    from_value::<CategoryJson>(v, "category")?.build()
}

fn split_composite(key: &str) -> Result<(&str, &str), Error> {
    key.split_once('∘')
        .map(|(g, f)| (g.trim(), f.trim()))
        .ok_or_else(|| Error::parse(format!("composition key `{key}` is not of the form `g∘f`")))
}

impl CategoryJson {
    pub fn build(&self) -> Result<FiniteCategory, Error> {
        let obj = |n: &str| {
            self.objects.iter().position(|o| o == n).map(ObjId).ok_or_else(|| Error::invalid(format!("unknown object `{n}`")))
        };
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Ok(Morphism { name: m.name.clone(), src: obj(&m.src)?, tgt: obj(&m.tgt)? }))
            .collect::<Result<Vec<_>, Error>>()?;
        let mor = |n: &str| {
            self.morphisms
                .iter()
                .position(|m| m.name == n)
                .map(MorId)
                .ok_or_else(|| Error::invalid(format!("unknown morphism `{n}`")))
        };
        for k in self.identities.keys() {
            obj(k)?;
        }
        let identities = self
            .objects
            .iter()
            .map(|o| {
                let m = self.identities.get(o).ok_or_else(|| Error::invalid(format!("object `{o}` has no identity")))?;
                mor(m)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let mut composites = BTreeMap::new();
        for (key, h) in &self.composition {
            let (g, f) = split_composite(key)?;
            let (g, f, h) = (mor(g)?, mor(f)?, mor(h)?);
            if morphisms[g.0].src != morphisms[f.0].tgt {
                return Err(Error::invalid(format!("composite `{key}` is given for a non-composable pair")));
            }
            composites.insert((g, f), h);
        }
        let is_id = |m: MorId| identities.contains(&m);
        Ok(FiniteCategory::from_fn(self.objects.clone(), morphisms, identities.clone(), |g, f| {
            composites.get(&(g, f)).copied().or(if is_id(g) {
                Some(f)
            } else if is_id(f) {
                Some(g)
            } else {
                None
            })
        })?)
    }

    pub fn from_category(c: &FiniteCategory) -> Self {
        let mut composition = BTreeMap::new();
        for g in c.morphism_ids() {
            for f in c.morphism_ids() {
                if let Some(h) = c.compose(g, f) {
                    composition.insert(
                        format!("{}∘{}", c.morphism_name(g), c.morphism_name(f)),
                        c.morphism_name(h).to_string(),
                    );
                }
            }
        }
        CategoryJson {
            objects: c.objects().map(|x| c.object_name(x).to_string()).collect(),
            morphisms: c
                .morphism_ids()
                .map(|m| MorphismJson {
                    name: c.morphism_name(m).to_string(),
                    src: c.object_name(c.src(m)).to_string(),
                    tgt: c.object_name(c.tgt(m)).to_string(),
                })
                .collect(),
            identities: c
                .objects()
                .map(|x| (c.object_name(x).to_string(), c.morphism_name(c.identity(x)).to_string()))
                .collect(),
            composition,
        }
    }
}

// ------------------------------------------------------------- 2-categories

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCategoryJson {
    pub category: Value,
    pub cells: Vec<MorphismJson>,
    pub units: BTreeMap<String, String>,
    /// `"b∘a": c` for `b *1 a`; composites with a unit may be left out.
    #[serde(default)]
    pub vertical: BTreeMap<String, String>,
    /// `"b∘a": c` for `b *0 a`; composites of two units may be left out.
    #[serde(default)]
    pub horizontal: BTreeMap<String, String>,
}

/// Reads a 2-category, the shorthand `{"delooping2": group}`, or a
/// 1-category seen as a 2-category with only units.
pub fn two_category_from_value(v: &Value) -> Result<Finite2Category, Error> {
    if let Some(g) = single_key(v, "delooping2") {
        return Ok(delooping2(&group(g)?)?);
    }
    if v.get("cells").is_none() {
        return Ok(Finite2Category::from_category(category_from_value(v)?));
    }
    let j: TwoCategoryJson = from_value(v, "2-category")?;
    let base = category_from_value(&j.category)?;
    let cells = j
        .cells
        .iter()
        .map(|c| Ok(Cell2 { name: c.name.clone(), src: morphism_id(&base, &c.src)?, tgt: morphism_id(&base, &c.tgt)? }))
        .collect::<Result<Vec<_>, Error>>()?;
    let cell = |n: &str| {
        j.cells.iter().position(|c| c.name == n).map(Cell2Id).ok_or_else(|| Error::invalid(format!("unknown 2-cell `{n}`")))
    };
    for k in j.units.keys() {
        morphism_id(&base, k)?;
    }
    let units = base
        .morphism_ids()
        .map(|m| {
            let name = base.morphism_name(m);
            cell(j.units.get(name).ok_or_else(|| Error::invalid(format!("1-cell `{name}` has no unit")))?)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let read = |t: &BTreeMap<String, String>| -> Result<BTreeMap<(Cell2Id, Cell2Id), Cell2Id>, Error> {
        t.iter()
            .map(|(k, c)| {
                let (b, a) = split_composite(k)?;
                Ok(((cell(b)?, cell(a)?), cell(c)?))
            })
            .collect()
    };
    let (vt, ht) = (read(&j.vertical)?, read(&j.horizontal)?);
    let unit_of = |c: Cell2Id| units.iter().position(|&u| u == c).map(MorId);
    let base2 = base.clone();
    let units2 = units.clone();
    Ok(Finite2Category::from_fn(
        base,
        cells,
        units.clone(),
        |b, a| {
            vt.get(&(b, a)).copied().or(if unit_of(b).is_some() {
                Some(a)
            } else if unit_of(a).is_some() {
                Some(b)
            } else {
                None
            })
        },
        |b, a| {
            ht.get(&(b, a)).copied().or_else(|| match (unit_of(b), unit_of(a)) {
                (Some(g), Some(f)) => base2.compose(g, f).map(|h| units2[h.0]),
                _ => None,
            })
        },
    )?)
}

impl TwoCategoryJson {
    pub fn from_two_category(c: &Finite2Category) -> Self {
        let base = c.base();
        let n = c.cells().len();
        let name = |x: usize| c.cells()[x].name.clone();
        let mut vertical = BTreeMap::new();
        let mut horizontal = BTreeMap::new();
        for b in 0..n {
            for a in 0..n {
                if let Some(x) = c.vertical(Cell2Id(b), Cell2Id(a)) {
                    vertical.insert(format!("{}∘{}", name(b), name(a)), name(x.0));
                }
                if let Some(x) = c.horizontal(Cell2Id(b), Cell2Id(a)) {
                    horizontal.insert(format!("{}∘{}", name(b), name(a)), name(x.0));
                }
            }
        }
        TwoCategoryJson {
            category: to_value(&CategoryJson::from_category(base)),
            cells: c
                .cells()
                .iter()
                .map(|x| MorphismJson {
                    name: x.name.clone(),
                    src: base.morphism_name(x.src).to_string(),
                    tgt: base.morphism_name(x.tgt).to_string(),
                })
                .collect(),
            units: base.morphism_ids().map(|m| (base.morphism_name(m).to_string(), name(c.unit(m).0))).collect(),
            vertical,
            horizontal,
        }
    }
}

// ------------------------------------------------------------------ functors

/// A functor between finite categories as name tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorTableJson {
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorTableJson {
    pub fn build(&self, source: &FiniteCategory, target: &FiniteCategory) -> Result<Functor, Error> {
        for k in self.objects.keys() {
            object_id(source, k)?;
        }
        for k in self.morphisms.keys() {
            morphism_id(source, k)?;
        }
        let objects = source
            .objects()
            .map(|x| {
                let n = source.object_name(x);
                object_id(target, self.objects.get(n).ok_or_else(|| Error::invalid(format!("object `{n}` has no image")))?)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let morphisms = source
            .morphism_ids()
            .map(|m| {
                let n = source.morphism_name(m);
                match self.morphisms.get(n) {
                    Some(t) => morphism_id(target, t),
                    // identities follow the object table
                    None if source.is_identity(m) => Ok(target.identity(objects[source.src(m).0])),
                    None => Err(Error::invalid(format!("morphism `{n}` has no image"))),
                }
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(Functor::new(source, target, objects, morphisms)?)
    }

    pub fn from_functor(u: &Functor, source: &FiniteCategory, target: &FiniteCategory) -> Self {
        FunctorTableJson {
            objects: source
                .objects()
                .map(|x| (source.object_name(x).to_string(), target.object_name(u.obj(x)).to_string()))
                .collect(),
            morphisms: source
                .morphism_ids()
                .map(|m| (source.morphism_name(m).to_string(), target.morphism_name(u.mor(m)).to_string()))
                .collect(),
        }
    }
}

/// A functor `u : source -> target`, the input of the Conduché check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorInput {
    pub source: FiniteCategory,
    pub target: FiniteCategory,
    pub functor: Functor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorJson {
    pub source: Value,
    pub target: Value,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceProjectionJson {
    category: Value,
    at: String,
}

/// Reads a functor, or `{"slice_projection": {"category": .., "at": a}}`
/// for the projection `A/a -> A`.
pub fn functor_from_value(v: &Value) -> Result<FunctorInput, Error> {
    if let Some(s) = single_key(v, "slice_projection") {
        let s: SliceProjectionJson = from_value(s, "slice_projection")?;
        let base = category_from_value(&s.category)?;
        let a = object_id(&base, &s.at)?;
        let sc = polyhom_core::slice_category(&base, a)?;
        return Ok(FunctorInput { source: sc.category, target: base, functor: sc.projection });
    }
    let j: FunctorJson = from_value(v, "functor")?;
    let source = category_from_value(&j.source)?;
    let target = category_from_value(&j.target)?;
    let functor = FunctorTableJson { objects: j.objects, morphisms: j.morphisms }.build(&source, &target)?;
    Ok(FunctorInput { source, target, functor })
}

impl FunctorJson {
    pub fn from_input(f: &FunctorInput) -> Self {
        let t = FunctorTableJson::from_functor(&f.functor, &f.source, &f.target);
        FunctorJson {
            source: to_value(&CategoryJson::from_category(&f.source)),
            target: to_value(&CategoryJson::from_category(&f.target)),
            objects: t.objects,
            morphisms: t.morphisms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorToBaseJson {
    pub polygraph: PolygraphJson,
    pub base: Value,
    pub images0: BTreeMap<String, String>,
    pub images1: BTreeMap<String, String>,
}

/// Reads an ω-functor from a free ω-category to a 1-category, or
/// `{"identity_of": category}` for a category that is free on its
/// non-identity morphisms.
pub fn functor_to_base_from_value(v: &Value) -> Result<FunctorToBase, Error> {
    if let Some(c) = single_key(v, "identity_of") {
        return Ok(FunctorToBase::identity_of_free(category_from_value(c)?)?);
    }
    let j: FunctorToBaseJson = from_value(v, "functor to base")?;
    if j.base.get("cells").is_some() || single_key(&j.base, "delooping2").is_some() {
        return Err(Error::invalid("slices are only defined over 1-categories"));
    }
    let p = j.polygraph.build()?.polygraph;
    let base = category_from_value(&j.base)?;
    let gen = |n: &str, dim: usize| {
        p.find_by_name(n)
            .filter(|g| g.dim == dim)
            .cloned()
            .ok_or_else(|| Error::invalid(format!("`{n}` is not a {dim}-generator")))
    };
    let images0 = j
        .images0
        .iter()
        .map(|(g, x)| Ok((gen(g, 0)?, object_id(&base, x)?)))
        .collect::<Result<BTreeMap<_, _>, Error>>()?;
    let images1 = j
        .images1
        .iter()
        .map(|(g, m)| Ok((gen(g, 1)?, morphism_id(&base, m)?)))
        .collect::<Result<BTreeMap<_, _>, Error>>()?;
    Ok(FunctorToBase::new(p, base, images0, images1)?)
}

impl FunctorToBaseJson {
    pub fn from_functor(f: &FunctorToBase) -> Self {
        let base = f.base();
        FunctorToBaseJson {
            polygraph: PolygraphJson::from_polygraph(f.domain(), false),
            base: to_value(&CategoryJson::from_category(base)),
            images0: f.images0().iter().map(|(g, &x)| (g.name.clone(), base.object_name(x).to_string())).collect(),
            images1: f.images1().iter().map(|(g, &m)| (g.name.clone(), base.morphism_name(m).to_string())).collect(),
        }
    }
}

// ------------------------------------------------------------------ diagrams

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub base: Value,
    pub fibers: BTreeMap<String, Value>,
    /// Transitions along identities may be left out.
    #[serde(default)]
    pub transitions: BTreeMap<String, FunctorTableJson>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantJson {
    base: Value,
    fiber: Value,
}

/// Reads a diagram, `{"slices_of": category}` for `a ↦ A/a`, or
/// `{"constant": {"base": .., "fiber": ..}}`.
pub fn diagram_from_value(v: &Value) -> Result<Diagram, Error> {
    if let Some(c) = single_key(v, "slices_of") {
        return Ok(Diagram::slices(&category_from_value(c)?)?);
    }
    if let Some(c) = single_key(v, "constant") {
        let c: ConstantJson = from_value(c, "constant")?;
        return Ok(Diagram::constant(category_from_value(&c.base)?, category_from_value(&c.fiber)?));
    }
    let j: DiagramJson = from_value(v, "diagram")?;
    let base = category_from_value(&j.base)?;
    for k in j.fibers.keys() {
        object_id(&base, k)?;
    }
    for k in j.transitions.keys() {
        morphism_id(&base, k)?;
    }
    let fibers = base
        .objects()
        .map(|x| {
            let n = base.object_name(x);
            category_from_value(j.fibers.get(n).ok_or_else(|| Error::invalid(format!("object `{n}` has no fiber")))?)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let transitions = base
        .morphism_ids()
        .map(|m| {
            let (s, t) = (&fibers[base.src(m).0], &fibers[base.tgt(m).0]);
            match j.transitions.get(base.morphism_name(m)) {
                Some(table) => table.build(s, t),
                None if base.is_identity(m) => Ok(Functor::identity(s)),
                None => Err(Error::invalid(format!("morphism `{}` has no transition", base.morphism_name(m)))),
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Diagram::new(base, fibers, transitions)?)
}

impl DiagramJson {
    pub fn from_diagram(d: &Diagram) -> Self {
        let base = d.base();
        DiagramJson {
            base: to_value(&CategoryJson::from_category(base)),
            fibers: base
                .objects()
                .map(|x| (base.object_name(x).to_string(), to_value(&CategoryJson::from_category(&d.fibers()[x.0]))))
                .collect(),
            transitions: base
                .morphism_ids()
                .map(|m| {
                    let (s, t) = (&d.fibers()[base.src(m).0], &d.fibers()[base.tgt(m).0]);
                    (base.morphism_name(m).to_string(), FunctorTableJson::from_functor(d.transition(m), s, t))
                })
                .collect(),
        }
    }
}

// ------------------------------------------------------------ chain complexes

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainComplexJson {
    pub ranks: Vec<usize>,
    /// `differentials[n - 1]` is `d_n` as a list of rows.
    pub differentials: Vec<Vec<Vec<JsonInt>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

impl ChainComplexJson {
    pub fn build(&self) -> Result<ChainComplex, Error> {
        if self.differentials.len() + 1 != self.ranks.len() {
            return Err(Error::invalid(format!(
                "{} ranks need {} differentials, found {}",
                self.ranks.len(),
                self.ranks.len().saturating_sub(1),
                self.differentials.len()
            )));
        }
        let mut ds = Vec::new();
        for (i, rows) in self.differentials.iter().enumerate() {
            let (r, c) = (self.ranks[i], self.ranks[i + 1]);
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(Error::invalid(format!("d{} must be a {r} x {c} matrix", i + 1)));
            }
            let mut m = IntMatrix::zeros(r, c);
            for (a, row) in rows.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    m[(a, b)] = x.to_bigint()?;
                }
            }
            ds.push(m);
        }
        let c = ChainComplex::new(self.ranks.clone(), ds)?;
        Ok(match &self.labels {
            Some(l) => c.with_labels(l.clone())?,
            None => c,
        })
    }

    pub fn from_complex(c: &ChainComplex) -> Self {
        ChainComplexJson {
            ranks: c.ranks().to_vec(),
            differentials: c
                .differentials()
                .iter()
                .map(|d| d.to_rows().iter().map(|r| r.iter().map(JsonInt::from).collect()).collect())
                .collect(),
            labels: c.labels().map(<[_]>::to_vec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyJson {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<JsonInt>,
}

impl HomologyJson {
    pub fn new(degree: usize, h: &HomologyGroup) -> Self {
        HomologyJson { degree, free_rank: h.free_rank, torsion: h.torsion.iter().map(JsonInt::from).collect() }
    }

    pub fn group(&self) -> Result<HomologyGroup, Error> {
        Ok(HomologyGroup {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(JsonInt::to_bigint).collect::<Result<_, _>>()?,
        })
    }
}

pub fn homology_json(groups: &[HomologyGroup]) -> Vec<HomologyJson> {
    groups.iter().enumerate().map(|(n, h)| HomologyJson::new(n, h)).collect()
}

/// `H0=Z H1=Z/2 H2=0`.
pub fn homology_line(groups: &[HomologyGroup]) -> String {
    groups.iter().enumerate().map(|(n, h)| format!("H{n}={h}")).collect::<Vec<_>>().join(" ")
}

// ----------------------------------------------------------------- detection

/// A finite category with a user-supplied truncated resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedCategory {
    pub category: FiniteCategory,
    pub resolution: PolygraphInput,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolvedJson {
    category: Value,
    resolution: PolygraphJson,
}

/// Any supported input. Polygraphs come back unvalidated; everything else
/// is checked while it is built.
#[derive(Clone, Debug)]
pub enum Input {
    Polygraph(PolygraphInput),
    Category(FiniteCategory),
    TwoCategory(Finite2Category),
    FunctorToBase(FunctorToBase),
    Diagram(Diagram),
    Functor(FunctorInput),
    ChainComplex(ChainComplex),
    Srs(StringRewritingSystem),
    Resolved(ResolvedCategory),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Polygraph(_) => "polygraph",
            Input::Category(_) => "category",
            Input::TwoCategory(_) => "2-category",
            Input::FunctorToBase(_) => "functor to a base category",
            Input::Diagram(_) => "diagram of categories",
            Input::Functor(_) => "functor",
            Input::ChainComplex(_) => "chain complex",
            Input::Srs(_) => "string rewriting system",
            Input::Resolved(_) => "category with a resolution",
        }
    }
}

const CATEGORY_KEYS: [&str; 5] = ["objects", "monoid", "poset", "chain", "delooping"];

/// Detects the format of `text` and reads it.
pub fn read_input(text: &str) -> Result<Input, Error> {
    let trimmed = text.trim_start();
    if !trimmed.starts_with('{') {
        if trimmed.starts_with("letters:") || trimmed.starts_with('#') {
            return Ok(Input::Srs(parse_srs_text(text)?));
        }
        return Err(Error::parse("expected a JSON object or a `letters:` line"));
    }
    let v: Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    Ok(if has("generators") {
        Input::Polygraph(from_value::<PolygraphJson>(&v, "polygraph")?.build()?)
    } else if has("letters") {
        Input::Srs(from_value::<SrsJson>(&v, "rewriting system")?.build()?)
    } else if has("ranks") {
        Input::ChainComplex(from_value::<ChainComplexJson>(&v, "chain complex")?.build()?)
    } else if has("polygraph") || has("identity_of") {
        Input::FunctorToBase(functor_to_base_from_value(&v)?)
    } else if has("fibers") || has("slices_of") || has("constant") {
        Input::Diagram(diagram_from_value(&v)?)
    } else if has("source") || has("slice_projection") {
        Input::Functor(functor_from_value(&v)?)
    } else if has("resolution") {
        let j: ResolvedJson = from_value(&v, "category with resolution")?;
        Input::Resolved(ResolvedCategory { category: category_from_value(&j.category)?, resolution: j.resolution.build()? })
    } else if has("cells") || has("delooping2") {
        Input::TwoCategory(two_category_from_value(&v)?)
    } else if CATEGORY_KEYS.iter().any(|k| has(k)) {
        Input::Category(category_from_value(&v)?)
    } else {
        return Err(Error::parse("the JSON object matches no known input format"));
    })
}

pub fn read_file(path: &std::path::Path) -> Result<Input, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    read_input(&text)
}
