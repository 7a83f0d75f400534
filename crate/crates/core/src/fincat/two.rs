use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{CategoryError, FiniteCategory, FiniteGroup, MorId, ObjId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell2Id(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell2 {
    pub name: String,
    pub src: MorId,
    pub tgt: MorId,
}

/// A cell of a 2-category in any dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Obj(ObjId),
    Mor(MorId),
    Two(Cell2Id),
}

impl Cell {
    pub fn dim(self) -> usize {
        match self {
            Cell::Obj(_) => 0,
            Cell::Mor(_) => 1,
            Cell::Two(_) => 2,
        }
    }
}

/// A strict 2-category with finitely many cells.
///
/// The underlying 1-category holds the 0- and 1-cells. 2-cells compose
/// vertically (`*_1`, along 1-cells) and horizontally (`*_0`, along 0-cells);
/// both tables are complete on composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finite2Category {
    base: FiniteCategory,
    cells: Vec<Cell2>,
    units: Vec<Cell2Id>,
    vertical: Vec<Option<Cell2Id>>,
    horizontal: Vec<Option<Cell2Id>>,
}

impl Finite2Category {
    /// Builds and exhaustively checks a 2-category. The closures are only
    /// queried on composable pairs: `vertical(b, a)` is `b *_1 a` (b after
    /// a), `horizontal(b, a)` is `b *_0 a`.
    pub fn from_fn<V, H>(
        base: FiniteCategory,
        cells: Vec<Cell2>,
        units: Vec<Cell2Id>,
        mut vertical: V,
        mut horizontal: H,
    ) -> Result<Self, CategoryError>
    where
        V: FnMut(Cell2Id, Cell2Id) -> Option<Cell2Id>,
        H: FnMut(Cell2Id, Cell2Id) -> Option<Cell2Id>,
    {
        let n = cells.len();
        let mut vt = vec![None; n * n];
        let mut ht = vec![None; n * n];
        for b in 0..n {
            for a in 0..n {
                if cells[b].src == cells[a].tgt {
                    vt[b * n + a] = vertical(Cell2Id(b), Cell2Id(a));
                }
                if base.src(cells[b].src) == base.tgt(cells[a].src) {
                    ht[b * n + a] = horizontal(Cell2Id(b), Cell2Id(a));
                }
            }
        }
        let c = Finite2Category { base, cells, units, vertical: vt, horizontal: ht };
        c.check()?;
        Ok(c)
    }

    /// A 1-category seen as a 2-category with only unit 2-cells.
    pub fn from_category(base: FiniteCategory) -> Self {
        let cells: Vec<Cell2> = base
            .morphism_ids()
            .map(|f| Cell2 { name: format!("1_{}", base.morphism_name(f)), src: f, tgt: f })
            .collect();
        let units = (0..cells.len()).map(Cell2Id).collect();
        let b2 = base.clone();
        Self::from_fn(
            base,
            cells,
            units,
            |b, _| Some(b),
            move |b, a| b2.compose(MorId(b.0), MorId(a.0)).map(|f| Cell2Id(f.0)),
        )
        .expect("discrete 2-category on a valid category")
    }

    fn check(&self) -> Result<(), CategoryError> {
        let n = self.cells.len();
        let base = &self.base;
        let name = |c: Cell2Id| self.cells[c.0].name.clone();
        let mut seen = BTreeSet::new();
        for c in &self.cells {
            if !seen.insert(c.name.as_str()) {
                return Err(CategoryError::DuplicateName(c.name.clone()));
            }
            if c.src.0 >= base.num_morphisms() || c.tgt.0 >= base.num_morphisms() {
                return Err(CategoryError::Unknown { kind: "1-cell", name: c.name.clone() });
            }
            if base.src(c.src) != base.src(c.tgt) || base.tgt(c.src) != base.tgt(c.tgt) {
                return Err(CategoryError::NotGlobular(c.name.clone()));
            }
        }
        if self.units.len() != base.num_morphisms() {
            return Err(CategoryError::Functor("unit table does not cover the 1-cells".into()));
        }
        for f in base.morphism_ids() {
            let u = self.units[f.0];
            if u.0 >= n || self.cells[u.0].src != f || self.cells[u.0].tgt != f {
                return Err(CategoryError::BadIdentity {
                    object: base.morphism_name(f).to_string(),
                    morphism: format!("#{}", u.0),
                });
            }
        }
        let comp_err = |b: Cell2Id, a: Cell2Id, problem: &str| CategoryError::Composition {
            g: name(b),
            f: name(a),
            problem: problem.to_string(),
        };
        for b in (0..n).map(Cell2Id) {
            for a in (0..n).map(Cell2Id) {
                let (cb, ca) = (&self.cells[b.0], &self.cells[a.0]);
                if cb.src == ca.tgt {
                    let Some(v) = self.vertical(b, a) else { return Err(comp_err(b, a, "missing (vertical)")) };
                    if v.0 >= n || self.cells[v.0].src != ca.src || self.cells[v.0].tgt != cb.tgt {
                        return Err(comp_err(b, a, "ill-typed (vertical)"));
                    }
                }
                if base.src(cb.src) == base.tgt(ca.src) {
                    let Some(h) = self.horizontal(b, a) else { return Err(comp_err(b, a, "missing (horizontal)")) };
                    let expect_src = base.compose(cb.src, ca.src);
                    let expect_tgt = base.compose(cb.tgt, ca.tgt);
                    if h.0 >= n || Some(self.cells[h.0].src) != expect_src || Some(self.cells[h.0].tgt) != expect_tgt {
                        return Err(comp_err(b, a, "ill-typed (horizontal)"));
                    }
                }
            }
        }
        for a in (0..n).map(Cell2Id) {
            let ca = &self.cells[a.0];
            let x = base.src(ca.src);
            let y = base.tgt(ca.src);
            let vunit = self.vertical(self.units[ca.tgt.0], a) == Some(a) && self.vertical(a, self.units[ca.src.0]) == Some(a);
            let hunit = self.horizontal(self.units[base.identity(y).0], a) == Some(a)
                && self.horizontal(a, self.units[base.identity(x).0]) == Some(a);
            if !vunit || !hunit {
                return Err(CategoryError::UnitLaw(name(a)));
            }
        }
        for g in base.morphism_ids() {
            for f in base.morphism_ids() {
                if let Some(gf) = base.compose(g, f) {
                    if self.horizontal(self.units[g.0], self.units[f.0]) != Some(self.units[gf.0]) {
                        return Err(CategoryError::UnitLaw(format!(
                            "1_{} *0 1_{}",
                            base.morphism_name(g),
                            base.morphism_name(f)
                        )));
                    }
                }
            }
        }
        for c in (0..n).map(Cell2Id) {
            for b in (0..n).map(Cell2Id) {
                for a in (0..n).map(Cell2Id) {
                    for comp in [Self::vertical, Self::horizontal] {
                        let (Some(cb), Some(ba)) = (comp(self, c, b), comp(self, b, a)) else { continue };
                        if comp(self, cb, a) != comp(self, c, ba) {
                            return Err(CategoryError::Associativity { h: name(c), g: name(b), f: name(a) });
                        }
                    }
                }
            }
        }
        // (x *1 y) *0 (z *1 w) = (x *0 z) *1 (y *0 w)
        for x in (0..n).map(Cell2Id) {
            for y in (0..n).map(Cell2Id) {
                let Some(xy) = self.vertical(x, y) else { continue };
                for z in (0..n).map(Cell2Id) {
                    let Some(xz) = self.horizontal(x, z) else { continue };
                    for w in (0..n).map(Cell2Id) {
                        let Some(zw) = self.vertical(z, w) else { continue };
                        let Some(yw) = self.horizontal(y, w) else { continue };
                        if self.horizontal(xy, zw) != self.vertical(xz, yw) {
                            return Err(CategoryError::Interchange(format!(
                                "x={}, y={}, z={}, w={}",
                                name(x),
                                name(y),
                                name(z),
                                name(w)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FiniteCategory {
        &self.base
    }

    pub fn cells(&self) -> &[Cell2] {
        &self.cells
    }

    pub fn cell(&self, c: Cell2Id) -> &Cell2 {
        &self.cells[c.0]
    }

    pub fn cell_by_name(&self, name: &str) -> Option<Cell2Id> {
        self.cells.iter().position(|c| c.name == name).map(Cell2Id)
    }

    pub fn unit(&self, f: MorId) -> Cell2Id {
        self.units[f.0]
    }

    /// `b *_1 a`: `a` first, then `b`.
    pub fn vertical(&self, b: Cell2Id, a: Cell2Id) -> Option<Cell2Id> {
        self.vertical[b.0 * self.cells.len() + a.0]
    }

    /// `b *_0 a`: whiskering along 0-cells, `a` on the source side.
    pub fn horizontal(&self, b: Cell2Id, a: Cell2Id) -> Option<Cell2Id> {
        self.horizontal[b.0 * self.cells.len() + a.0]
    }

    pub fn cell_name(&self, c: Cell) -> &str {
        match c {
            Cell::Obj(x) => self.base.object_name(x),
            Cell::Mor(f) => self.base.morphism_name(f),
            Cell::Two(a) => &self.cells[a.0].name,
        }
    }

    /// The cell lifted to dimension `dim` through units; `None` above 2.
    pub fn lift(&self, c: Cell, dim: usize) -> Option<Cell> {
        match (c, dim) {
            (c, d) if c.dim() == d => Some(c),
            (Cell::Obj(x), 1) => Some(Cell::Mor(self.base.identity(x))),
            (Cell::Obj(x), 2) => Some(Cell::Two(self.unit(self.base.identity(x)))),
            (Cell::Mor(f), 2) => Some(Cell::Two(self.unit(f))),
            _ => None,
        }
    }

    /// `left *_k right`, lifting the lower-dimensional operand through units.
    pub fn compose(&self, k: usize, left: Cell, right: Cell) -> Option<Cell> {
        let n = left.dim().max(right.dim());
        if k >= left.dim().min(right.dim()) {
            return None;
        }
        let (l, r) = (self.lift(left, n)?, self.lift(right, n)?);
        match (k, l, r) {
            (0, Cell::Mor(g), Cell::Mor(f)) => self.base.compose(g, f).map(Cell::Mor),
            (0, Cell::Two(b), Cell::Two(a)) => self.horizontal(b, a).map(Cell::Two),
            (1, Cell::Two(b), Cell::Two(a)) => self.vertical(b, a).map(Cell::Two),
            _ => None,
        }
    }

    /// Source and target of a cell of dimension at least 1.
    pub fn boundary(&self, c: Cell) -> Option<(Cell, Cell)> {
        match c {
            Cell::Obj(_) => None,
            Cell::Mor(f) => Some((Cell::Obj(self.base.src(f)), Cell::Obj(self.base.tgt(f)))),
            Cell::Two(a) => Some((Cell::Mor(self.cells[a.0].src), Cell::Mor(self.cells[a.0].tgt))),
        }
    }
}

/// `B G`: one object, morphisms the elements of `G`.
pub fn delooping1(g: &FiniteGroup) -> FiniteCategory {
    FiniteCategory::monoid(g.elements().to_vec(), g.table(), g.identity()).expect("group is a monoid")
}

/// `B² G`: one 0-cell, one 1-cell, 2-cells the elements of `G`, both
/// compositions given by the group law. `G` has to be abelian.
pub fn delooping2(g: &FiniteGroup) -> Result<Finite2Category, CategoryError> {
    if let Some((a, b)) = g.noncommuting_pair() {
        return Err(CategoryError::NonAbelian { a: g.elements()[a].clone(), b: g.elements()[b].clone() });
    }
    let base = FiniteCategory::terminal();
    let cells = g.elements().iter().map(|name| Cell2 { name: name.clone(), src: MorId(0), tgt: MorId(0) }).collect();
    let law = |b: Cell2Id, a: Cell2Id| Some(Cell2Id(g.mul(b.0, a.0)));
    Finite2Category::from_fn(base, cells, vec![Cell2Id(g.identity())], law, law)
}
