//! Finite 1- and 2-categories given by explicit tables, their nerves and
//! normalized chains, and the orientals `O_0..O_3`.

mod nerve;
mod oriental;
mod two;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use nerve::{classical_nerve, compare_street_with_classical, street_nerve, NerveTruncation, Simplex};
pub use oriental::{chain_nerve_in_oriental_basis, oriental, oriental_generator_index, oriental_name, oriental_sequences, MAX_ORIENTAL};
pub use two::{delooping1, delooping2, Cell, Cell2, Cell2Id, Finite2Category};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("index {index} out of range for {kind}")]
    OutOfRange { kind: &'static str, index: usize },
    #[error("identity of `{object}` is `{morphism}`, which is not an endomorphism of it")]
    BadIdentity { object: String, morphism: String },
    #[error("composite `{g}∘{f}` is {problem}")]
    Composition { g: String, f: String, problem: String },
    #[error("unit law fails for `{0}`")]
    UnitLaw(String),
    #[error("associativity fails for `{h}∘{g}∘{f}`")]
    Associativity { h: String, g: String, f: String },
    #[error("2-cell `{0}` has non-parallel source and target")]
    NotGlobular(String),
    #[error("interchange law fails for `{0}`")]
    Interchange(String),
    #[error("functor {0}")]
    Functor(String),
    #[error("group table: {0}")]
    Group(String),
    #[error("group is not abelian: {a}{b} != {b}{a}")]
    NonAbelian { a: String, b: String },
    #[error("Street and classical nerves disagree: {0}")]
    NerveMismatch(String),
    #[error("nerve degree {0} is not supported (Street nerve stops at 3)")]
    UnsupportedDegree(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A category with finitely many objects and morphisms.
///
/// Composition is stored as a full table; `compose(g, f)` is `g ∘ f` and is
/// defined exactly when `src(g) == tgt(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    composition: Vec<Option<MorId>>,
}

impl FiniteCategory {
    /// Builds and fully checks a category from a composition closure, which
    /// is only queried on composable pairs.
    pub fn from_fn<F>(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        mut compose: F,
    ) -> Result<Self, CategoryError>
    where
        F: FnMut(MorId, MorId) -> Option<MorId>,
    {
        let m = morphisms.len();
        let mut table = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if morphisms[g].src == morphisms[f].tgt {
                    table[g * m + f] = compose(MorId(g), MorId(f));
                }
            }
        }
        let c = FiniteCategory { objects, morphisms, identities, composition: table };
        c.check()?;
        Ok(c)
    }

    /// Builds a category from an explicit list of composites `(g, f) ↦ g∘f`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        composites: &[((MorId, MorId), MorId)],
    ) -> Result<Self, CategoryError> {
        let m = morphisms.len();
        let mut table: BTreeMap<(usize, usize), MorId> = BTreeMap::new();
        for &((g, f), h) in composites {
            for id in [g, f, h] {
                if id.0 >= m {
                    return Err(CategoryError::OutOfRange { kind: "morphism", index: id.0 });
                }
            }
            if morphisms[g.0].src != morphisms[f.0].tgt {
                return Err(CategoryError::Composition {
                    g: morphisms[g.0].name.clone(),
                    f: morphisms[f.0].name.clone(),
                    problem: "given for a non-composable pair".to_string(),
                });
            }
            if let Some(prev) = table.insert((g.0, f.0), h) {
                if prev != h {
                    return Err(CategoryError::Composition {
                        g: morphisms[g.0].name.clone(),
                        f: morphisms[f.0].name.clone(),
                        problem: "given twice with different values".to_string(),
                    });
                }
            }
        }
        Self::from_fn(objects, morphisms, identities, |g, f| table.get(&(g.0, f.0)).copied())
    }

    fn check(&self) -> Result<(), CategoryError> {
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o.as_str()) {
                return Err(CategoryError::DuplicateName(o.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for f in &self.morphisms {
            if !seen.insert(f.name.as_str()) {
                return Err(CategoryError::DuplicateName(f.name.clone()));
            }
            for o in [f.src, f.tgt] {
                if o.0 >= self.objects.len() {
                    return Err(CategoryError::OutOfRange { kind: "object", index: o.0 });
                }
            }
        }
        if self.identities.len() != self.objects.len() {
            return Err(CategoryError::Functor(format!(
                "identity table has {} entries for {} objects",
                self.identities.len(),
                self.objects.len()
            )));
        }
        for (x, &id) in self.identities.iter().enumerate() {
            let ok = self.morphisms.get(id.0).is_some_and(|f| f.src.0 == x && f.tgt.0 == x);
            if !ok {
                return Err(CategoryError::BadIdentity {
                    object: self.objects[x].clone(),
                    morphism: self.morphisms.get(id.0).map_or_else(|| format!("#{}", id.0), |f| f.name.clone()),
                });
            }
        }
        let m = self.morphisms.len();
        for g in 0..m {
            for f in 0..m {
                let (gm, fm) = (&self.morphisms[g], &self.morphisms[f]);
                if gm.src != fm.tgt {
                    continue;
                }
                let problem = match self.composition[g * m + f] {
                    None => Some("missing".to_string()),
                    Some(h) if h.0 >= m => Some(format!("out of range ({})", h.0)),
                    Some(h) => {
                        let hm = &self.morphisms[h.0];
                        (hm.src != fm.src || hm.tgt != gm.tgt)
                            .then(|| format!("`{}`, which has the wrong endpoints", hm.name))
                    }
                };
                if let Some(problem) = problem {
                    return Err(CategoryError::Composition { g: gm.name.clone(), f: fm.name.clone(), problem });
                }
            }
        }
        for f in 0..m {
            let fm = &self.morphisms[f];
            let left = self.identities[fm.tgt.0];
            let right = self.identities[fm.src.0];
            if self.compose(left, MorId(f)) != Some(MorId(f)) || self.compose(MorId(f), right) != Some(MorId(f)) {
                return Err(CategoryError::UnitLaw(fm.name.clone()));
            }
        }
        for h in 0..m {
            for g in 0..m {
                let Some(hg) = self.compose(MorId(h), MorId(g)) else { continue };
                for f in 0..m {
                    let Some(gf) = self.compose(MorId(g), MorId(f)) else { continue };
                    if self.compose(hg, MorId(f)) != self.compose(MorId(h), gf) {
                        return Err(CategoryError::Associativity {
                            h: self.morphisms[h].name.clone(),
                            g: self.morphisms[g].name.clone(),
                            f: self.morphisms[f].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The category with one object and its identity.
    pub fn terminal() -> Self {
        Self::poset(1, |_, _| true).expect("terminal category")
    }

    pub fn discrete(n: usize) -> Self {
        Self::poset(n, |i, j| i == j).expect("discrete category")
    }

    /// The thin category on `0..n` with an arrow `i -> j` iff `leq(i, j)`.
    /// `leq` must be reflexive and transitive.
    pub fn poset<F: Fn(usize, usize) -> bool>(n: usize, leq: F) -> Result<Self, CategoryError> {
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut by_pair = BTreeMap::new();
        let mut identities = vec![MorId(0); n];
        for i in 0..n {
            for j in 0..n {
                if !leq(i, j) {
                    continue;
                }
                let name = if i == j { format!("1_{i}") } else { format!("{i}->{j}") };
                if i == j {
                    identities[i] = MorId(morphisms.len());
                }
                by_pair.insert((i, j), MorId(morphisms.len()));
                morphisms.push(Morphism { name, src: ObjId(i), tgt: ObjId(j) });
            }
        }
        for i in 0..n {
            if !by_pair.contains_key(&(i, i)) {
                return Err(CategoryError::BadIdentity { object: i.to_string(), morphism: "missing".into() });
            }
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|f| (f.src.0, f.tgt.0)).collect();
        Self::from_fn(objects, morphisms, identities, |g, f| by_pair.get(&(ends[f.0].0, ends[g.0].1)).copied())
    }

    /// The ordinal `[n] = {0 < 1 < ... < n}`.
    pub fn chain(n: usize) -> Self {
        Self::poset(n + 1, |i, j| i <= j).expect("chain")
    }

    /// A monoid as a one-object category; `table[g][f]` is the product `g f`,
    /// read as the composite `g ∘ f`.
    pub fn monoid(elements: Vec<String>, table: &[Vec<usize>], unit: usize) -> Result<Self, CategoryError> {
        let n = elements.len();
        if unit >= n || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(CategoryError::Group("monoid table has the wrong shape".into()));
        }
        let morphisms =
            elements.into_iter().map(|name| Morphism { name, src: ObjId(0), tgt: ObjId(0) }).collect();
        Self::from_fn(vec!["*".to_string()], morphisms, vec![MorId(unit)], |g, f| Some(MorId(table[g.0][f.0])))
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name).map(ObjId)
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.0]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f.0].name
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|f| f.name == name).map(MorId)
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].tgt
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    /// `g ∘ f`, when composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.composition[g.0 * self.morphisms.len() + f.0]
    }

    /// Composite of a path written in composition order: `[h, g, f]` is
    /// `h ∘ g ∘ f`. `None` if some pair is not composable or the path is
    /// empty.
    pub fn compose_path(&self, path: &[MorId]) -> Option<MorId> {
        let (&last, rest) = path.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphism_ids().filter(move |&f| self.src(f) == a && self.tgt(f) == b)
    }

    /// An object receiving exactly one morphism from every object.
    pub fn find_terminal(&self) -> Option<ObjId> {
        self.objects().find(|&t| self.objects().all(|x| self.hom(x, t).count() == 1))
    }
}

impl fmt::Display for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "category with {} object(s), {} morphism(s)", self.objects.len(), self.morphisms.len())
    }
}

/// A functor between finite categories, as object and morphism tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

impl Functor {
    pub fn new(
        source: &FiniteCategory,
        target: &FiniteCategory,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<Self, CategoryError> {
        let err = |s: String| Err(CategoryError::Functor(s));
        if objects.len() != source.num_objects() || morphisms.len() != source.num_morphisms() {
            return err("tables do not cover the source category".into());
        }
        if objects.iter().any(|o| o.0 >= target.num_objects()) || morphisms.iter().any(|m| m.0 >= target.num_morphisms()) {
            return err("image outside the target category".into());
        }
        for f in source.morphism_ids() {
            let img = morphisms[f.0];
            if target.src(img) != objects[source.src(f).0] || target.tgt(img) != objects[source.tgt(f).0] {
                return err(format!("does not respect the endpoints of `{}`", source.morphism_name(f)));
            }
        }
        for x in source.objects() {
            if morphisms[source.identity(x).0] != target.identity(objects[x.0]) {
                return err(format!("does not preserve the identity of `{}`", source.object_name(x)));
            }
        }
        for g in source.morphism_ids() {
            for f in source.morphism_ids() {
                if let Some(gf) = source.compose(g, f) {
                    if target.compose(morphisms[g.0], morphisms[f.0]) != Some(morphisms[gf.0]) {
                        return err(format!(
                            "does not preserve `{}∘{}`",
                            source.morphism_name(g),
                            source.morphism_name(f)
                        ));
                    }
                }
            }
        }
        Ok(Functor { objects, morphisms })
    }

    pub fn identity(c: &FiniteCategory) -> Self {
        Functor { objects: c.objects().collect(), morphisms: c.morphism_ids().collect() }
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.objects[x.0]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.morphisms[f.0]
    }

    pub fn object_table(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_table(&self) -> &[MorId] {
        &self.morphisms
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        Functor {
            objects: first.objects.iter().map(|&x| self.obj(x)).collect(),
            morphisms: first.morphisms.iter().map(|&f| self.mor(f)).collect(),
        }
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self, target: &FiniteCategory) -> bool {
        fn bijective<T: Ord + Copy>(v: &[T], n: usize) -> bool {
            v.len() == n && v.iter().collect::<BTreeSet<_>>().len() == n
        }
        bijective(&self.objects, target.num_objects()) && bijective(&self.morphisms, target.num_morphisms())
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteGroup {
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self, CategoryError> {
        let n = elements.len();
        let bad = |s: &str| Err(CategoryError::Group(s.to_string()));
        if n == 0 || identity >= n {
            return bad("needs an identity element");
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table has the wrong shape");
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return bad("identity law fails");
            }
            if !(0..n).any(|b| table[a][b] == identity) {
                return bad("missing inverse");
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { elements, table, identity })
    }

    /// `Z/n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(elements, table, 0).expect("cyclic group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// First pair of non-commuting elements, if any.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let n = self.order();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| self.table[a][b] != self.table[b][a])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> FiniteGroup {
        // permutations of {0,1,2} as images of (0,1,2)
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        FiniteGroup::new((0..6).map(|i| format!("s{i}")).collect(), table, 0).unwrap()
    }

    #[test]
    fn posets_and_terminal_objects() {
        let c = FiniteCategory::chain(1);
        assert_eq!(c.num_morphisms(), 3);
        assert_eq!(c.find_terminal(), Some(ObjId(1)));
        assert_eq!(FiniteCategory::discrete(2).find_terminal(), None);
        assert_eq!(FiniteCategory::terminal().find_terminal(), Some(ObjId(0)));
        let z2 = delooping1(&FiniteGroup::cyclic(2));
        assert_eq!(z2.find_terminal(), None);
    }

    #[test]
    fn bad_tables_rejected() {
        let objects = vec!["x".to_string()];
        let morphisms = vec![
            Morphism { name: "1".into(), src: ObjId(0), tgt: ObjId(0) },
            Morphism { name: "a".into(), src: ObjId(0), tgt: ObjId(0) },
        ];
        // a∘a missing
        let r = FiniteCategory::new(
            objects.clone(),
            morphisms.clone(),
            vec![MorId(0)],
            &[((MorId(0), MorId(0)), MorId(0)), ((MorId(0), MorId(1)), MorId(1)), ((MorId(1), MorId(0)), MorId(1))],
        );
        assert!(matches!(r, Err(CategoryError::Composition { .. })));
        // broken unit law
        let r = FiniteCategory::from_fn(objects, morphisms, vec![MorId(0)], |_, _| Some(MorId(0)));
        assert!(matches!(r, Err(CategoryError::UnitLaw(_))));
        // non-associative "monoid": a table with identity 0 that is not associative
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 0]];
        let r = FiniteCategory::monoid(vec!["e".into(), "a".into(), "b".into()], &t, 0);
        assert!(matches!(r, Err(CategoryError::Associativity { .. })), "{r:?}");
    }

    #[test]
    fn compose_path_order() {
        let c = FiniteCategory::chain(2);
        let f = c.hom(ObjId(0), ObjId(1)).next().unwrap();
        let g = c.hom(ObjId(1), ObjId(2)).next().unwrap();
        let gf = c.hom(ObjId(0), ObjId(2)).next().unwrap();
        assert_eq!(c.compose_path(&[g, f]), Some(gf));
        assert_eq!(c.compose_path(&[f, g]), None);
        assert_eq!(c.compose_path(&[]), None);
    }

    #[test]
    fn functor_checks() {
        let a = FiniteCategory::chain(1);
        let t = FiniteCategory::terminal();
        let to_point = Functor::new(&a, &t, vec![ObjId(0); 2], vec![MorId(0); 3]).unwrap();
        assert!(!to_point.is_isomorphism(&t));
        assert!(Functor::identity(&a).is_isomorphism(&a));
        // swapping the objects breaks endpoints of 0->1
        let swap = Functor::new(&a, &a, vec![ObjId(1), ObjId(0)], vec![MorId(2), MorId(1), MorId(0)]);
        assert!(swap.is_err());
    }

    #[test]
    fn groups() {
        assert!(FiniteGroup::cyclic(4).noncommuting_pair().is_none());
        assert!(s3().noncommuting_pair().is_some());
        assert!(FiniteGroup::new(vec!["e".into(), "a".into()], vec![vec![0, 1], vec![1, 1]], 0).is_err());
    }
}
