use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::oriental::{oriental, oriental_sequences};
use super::{CategoryError, Cell, Finite2Category, FiniteCategory, MorId, ObjId};
use crate::cell::{CellExpr, GeneratorId};
use crate::homalg::{ChainComplex, IntMatrix};

/// A simplex of a truncated nerve.
///
/// `key` identifies the simplex inside its degree: a composable chain of
/// morphism ids for the classical nerve, the cells assigned to the
/// generators of dimension at most 2 of the oriental for the Street nerve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub key: Vec<usize>,
    pub label: String,
    /// `faces[i]` is the index of `∂_i` in the degree below.
    pub faces: Vec<usize>,
    pub degenerate: bool,
}

/// Simplices of a simplicial set in degrees `0..=max_degree`, sorted by key
/// within each degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveTruncation {
    levels: Vec<Vec<Simplex>>,
}

impl NerveTruncation {
    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn simplices(&self, n: usize) -> &[Simplex] {
        &self.levels[n]
    }

    pub fn find(&self, n: usize, key: &[usize]) -> Option<usize> {
        self.levels[n].binary_search_by(|s| s.key.as_slice().cmp(key)).ok()
    }

    pub fn nondegenerate(&self, n: usize) -> impl Iterator<Item = (usize, &Simplex)> {
        self.levels[n].iter().enumerate().filter(|(_, s)| !s.degenerate)
    }

    /// Checks `∂_i ∂_j = ∂_{j-1} ∂_i` for `i < j` on every stored simplex.
    pub fn check_simplicial_identities(&self) -> Result<(), String> {
        for n in 2..self.levels.len() {
            for x in &self.levels[n] {
                for j in 0..=n {
                    for i in 0..j {
                        let a = self.levels[n - 1][x.faces[j]].faces[i];
                        let b = self.levels[n - 1][x.faces[i]].faces[j - 1];
                        if a != b {
                            return Err(format!("∂{i}∂{j} != ∂{}∂{i} on `{}` (degree {n})", j - 1, x.label));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Chains on nondegenerate simplices, faces landing on degenerate
    /// simplices dropped.
    pub fn normalized_chains(&self) -> ChainComplex {
        self.chain_complex(|s| !s.degenerate)
    }

    /// Chains on all simplices.
    pub fn chains(&self) -> ChainComplex {
        self.chain_complex(|_| true)
    }

    fn chain_complex(&self, keep: impl Fn(&Simplex) -> bool) -> ChainComplex {
        let positions: Vec<Vec<Option<usize>>> = self
            .levels
            .iter()
            .map(|level| {
                let mut next = 0;
                level
                    .iter()
                    .map(|s| {
                        keep(s).then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let ranks: Vec<usize> = positions.iter().map(|p| p.iter().flatten().count()).collect();
        let mut differentials = Vec::new();
        for n in 1..self.levels.len() {
            let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
            for (x, col) in self.levels[n].iter().zip(&positions[n]) {
                let Some(col) = col else { continue };
                for (i, &f) in x.faces.iter().enumerate() {
                    if let Some(row) = positions[n - 1][f] {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        d[(row, *col)] += BigInt::from(sign);
                    }
                }
            }
            differentials.push(d);
        }
        let labels = self
            .levels
            .iter()
            .map(|level| level.iter().filter(|s| keep(s)).map(|s| s.label.clone()).collect())
            .collect();
        ChainComplex::new(ranks, differentials)
            .and_then(|c| c.with_labels(labels))
            .expect("shapes follow the simplex counts")
    }
}

fn finish_faces(levels: &mut [Vec<Simplex>], n: usize, face_key: impl Fn(&[usize], usize) -> Vec<usize>) {
    let (lower, upper) = levels.split_at_mut(n);
    let below = &lower[n - 1];
    for x in upper[0].iter_mut() {
        x.faces = (0..=n)
            .map(|i| {
                let key = face_key(&x.key, i);
                below
                    .binary_search_by(|s| s.key.as_slice().cmp(&key))
                    .unwrap_or_else(|_| panic!("face {i} of `{}` missing from degree {}", x.label, n - 1))
            })
            .collect();
    }
}

/// The nerve of a finite category truncated at degree `max_degree`.
///
/// Degree-`n` simplices are chains `x_0 -f_1-> x_1 -> ... -f_n-> x_n`; a
/// simplex of positive degree is degenerate iff one of its arrows is an
/// identity.
pub fn classical_nerve(c: &FiniteCategory, max_degree: usize) -> NerveTruncation {
    let mut levels: Vec<Vec<Simplex>> = Vec::with_capacity(max_degree + 1);
    levels.push(
        c.objects()
            .map(|x| Simplex { key: vec![x.0], label: c.object_name(x).to_string(), faces: Vec::new(), degenerate: false })
            .collect(),
    );
    for n in 1..=max_degree {
        let mut level = Vec::new();
        if n == 1 {
            for f in c.morphism_ids() {
                level.push(vec![f.0]);
            }
        } else {
            for prev in &levels[n - 1] {
                let last = MorId(*prev.key.last().expect("chain"));
                for f in c.morphism_ids().filter(|&f| c.src(f) == c.tgt(last)) {
                    let mut key = prev.key.clone();
                    key.push(f.0);
                    level.push(key);
                }
            }
        }
        levels.push(
            level
                .into_iter()
                .map(|key| {
                    let names: Vec<&str> = key.iter().map(|&f| c.morphism_name(MorId(f))).collect();
                    Simplex {
                        label: format!("[{}]", names.join("|")),
                        degenerate: key.iter().any(|&f| c.is_identity(MorId(f))),
                        key,
                        faces: Vec::new(),
                    }
                })
                .collect(),
        );
        finish_faces(&mut levels, n, |key, i| match (n, i) {
            (1, 0) => vec![c.tgt(MorId(key[0])).0],
            (1, _) => vec![c.src(MorId(key[0])).0],
            (_, 0) => key[1..].to_vec(),
            (_, i) if i == n => key[..n - 1].to_vec(),
            (_, i) => {
                let mut k = key[..i - 1].to_vec();
                k.push(c.compose(MorId(key[i]), MorId(key[i - 1])).expect("composable chain").0);
                k.extend_from_slice(&key[i + 1..]);
                k
            }
        });
    }
    NerveTruncation { levels }
}

fn encode(c: Cell) -> usize {
    match c {
        Cell::Obj(x) => x.0,
        Cell::Mor(f) => f.0,
        Cell::Two(a) => a.0,
    }
}

fn decode(dim: usize, v: usize) -> Cell {
    match dim {
        0 => Cell::Obj(ObjId(v)),
        1 => Cell::Mor(MorId(v)),
        _ => Cell::Two(super::Cell2Id(v)),
    }
}

fn eval(c2: &Finite2Category, e: &CellExpr, pos: &BTreeMap<GeneratorId, usize>, assign: &[Cell]) -> Option<Cell> {
    match e {
        CellExpr::Gen(g) => assign.get(pos[g]).copied(),
        CellExpr::Unit { base, dim } => c2.lift(eval(c2, base, pos, assign)?, *dim),
        CellExpr::Comp { k, left, right } => {
            c2.compose(*k, eval(c2, left, pos, assign)?, eval(c2, right, pos, assign)?)
        }
    }
}

/// Enumerates the ω-functors `O_n -> C2`, generator by generator.
fn oriental_functors(c2: &Finite2Category, n: usize) -> Result<Vec<Vec<Cell>>, CategoryError> {
    let o = oriental(n)?;
    let gens = o.generators();
    let pos: BTreeMap<GeneratorId, usize> = gens.iter().enumerate().map(|(i, g)| (g.id.clone(), i)).collect();
    let mut out = Vec::new();
    let mut assign = Vec::with_capacity(gens.len());

    fn go(
        c2: &Finite2Category,
        gens: &[crate::cell::Generator],
        pos: &BTreeMap<GeneratorId, usize>,
        assign: &mut Vec<Cell>,
        out: &mut Vec<Vec<Cell>>,
    ) {
        let Some(g) = gens.get(assign.len()) else {
            out.push(assign.clone());
            return;
        };
        if g.id.dim > 2 {
            // 3-cells of a 2-category are identities: the two pastings must agree
            let s = eval(c2, g.source.as_ref().expect("boundary"), pos, assign);
            let t = eval(c2, g.target.as_ref().expect("boundary"), pos, assign);
            if s.is_some() && s == t {
                out.push(assign.clone());
            }
            return;
        }
        let candidates: Vec<Cell> = match g.id.dim {
            0 => c2.base().objects().map(Cell::Obj).collect(),
            d => {
                let s = eval(c2, g.source.as_ref().expect("boundary"), pos, assign);
                let t = eval(c2, g.target.as_ref().expect("boundary"), pos, assign);
                match (d, s, t) {
                    (1, Some(Cell::Obj(x)), Some(Cell::Obj(y))) => c2.base().hom(x, y).map(Cell::Mor).collect(),
                    (2, Some(Cell::Mor(f)), Some(Cell::Mor(h))) => c2
                        .cells()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.src == f && c.tgt == h)
                        .map(|(i, _)| Cell::Two(super::Cell2Id(i)))
                        .collect(),
                    _ => Vec::new(),
                }
            }
        };
        for c in candidates {
            assign.push(c);
            go(c2, gens, pos, assign, out);
            assign.pop();
        }
    }

    go(c2, gens, &pos, &mut assign, &mut out);
    Ok(out)
}

/// The Street nerve `[n] ↦ Hom(O_n, C2)` truncated at degree `max_degree <= 3`.
pub fn street_nerve(c2: &Finite2Category, max_degree: usize) -> Result<NerveTruncation, CategoryError> {
    if max_degree > super::MAX_ORIENTAL {
        return Err(CategoryError::UnsupportedDegree(max_degree));
    }
    let seqs: Vec<Vec<Vec<usize>>> = (0..=max_degree).map(oriental_sequences).collect();
    let index: Vec<BTreeMap<Vec<usize>, usize>> =
        seqs.iter().map(|s| s.iter().enumerate().map(|(i, q)| (q.clone(), i)).collect()).collect();
    let stored = |n: usize| seqs[n].iter().filter(|s| s.len() <= 3).count();

    let mut levels: Vec<Vec<Simplex>> = Vec::new();
    for n in 0..=max_degree {
        let functors = oriental_functors(c2, n)?;
        let mut level: Vec<Simplex> = functors
            .into_iter()
            .map(|cells| {
                let cells = &cells[..stored(n)];
                let label = if n == 0 {
                    c2.cell_name(cells[0]).to_string()
                } else {
                    let edges: Vec<&str> = cells.iter().filter(|c| c.dim() == 1).map(|&c| c2.cell_name(c)).collect();
                    let faces: Vec<&str> = cells.iter().filter(|c| c.dim() == 2).map(|&c| c2.cell_name(c)).collect();
                    if faces.is_empty() {
                        format!("({})", edges.join(","))
                    } else {
                        format!("({};{})", edges.join(","), faces.join(","))
                    }
                };
                Simplex { key: cells.iter().map(|&c| encode(c)).collect(), label, faces: Vec::new(), degenerate: false }
            })
            .collect();
        level.sort_by(|a, b| a.key.cmp(&b.key));

        if n > 0 {
            // degenerate simplices are the images of the codegeneracies O_n -> O_{n-1}
            for j in 0..n {
                for y in &levels[n - 1] {
                    let key: Vec<usize> = seqs[n][..stored(n)]
                        .iter()
                        .map(|seq| {
                            let mut img: Vec<usize> = seq.iter().map(|&i| if i <= j { i } else { i - 1 }).collect();
                            img.dedup();
                            let v = y.key[index[n - 1][&img]];
                            if img.len() == seq.len() {
                                v
                            } else {
                                let lifted = c2.lift(decode(img.len() - 1, v), seq.len() - 1).expect("unit");
                                encode(lifted)
                            }
                        })
                        .collect();
                    let at = level
                        .binary_search_by(|s| s.key.cmp(&key))
                        .unwrap_or_else(|_| panic!("degeneracy s{j} of `{}` is not a simplex", y.label));
                    level[at].degenerate = true;
                }
            }
        }
        levels.push(level);
        if n > 0 {
            let below = stored(n - 1);
            finish_faces(&mut levels, n, |key, i| {
                seqs[n - 1][..below]
                    .iter()
                    .map(|seq| {
                        let img: Vec<usize> = seq.iter().map(|&k| if k < i { k } else { k + 1 }).collect();
                        key[index[n][&img]]
                    })
                    .collect()
            });
        }
    }
    Ok(NerveTruncation { levels })
}

/// Checks that the Street nerve of `c`, seen as a 2-category with only unit
/// 2-cells, is the classical nerve through degree `max_degree <= 3`: the
/// map sending a simplex to the 1-cells on its spine `<01>, <12>, ...` is a
/// bijection in every degree that matches faces and degeneracy.
pub fn compare_street_with_classical(c: &FiniteCategory, max_degree: usize) -> Result<(), CategoryError> {
    let street = street_nerve(&Finite2Category::from_category(c.clone()), max_degree)?;
    let classical = classical_nerve(c, max_degree);
    let fail = |s: String| Err(CategoryError::NerveMismatch(s));
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for n in 0..=max_degree {
        let spine: Vec<usize> = if n == 0 {
            vec![0]
        } else {
            (0..n).map(|i| super::oriental_generator_index(n, &[i, i + 1]).expect("spine edge")).collect()
        };
        let (xs, ys) = (street.simplices(n), classical.simplices(n));
        if xs.len() != ys.len() {
            return fail(format!("degree {n}: {} Street simplices, {} chains", xs.len(), ys.len()));
        }
        let mut map = Vec::with_capacity(xs.len());
        let mut hit = vec![false; ys.len()];
        for x in xs {
            let key: Vec<usize> = spine.iter().map(|&i| x.key[i]).collect();
            let Some(j) = classical.find(n, &key) else {
                return fail(format!("degree {n}: spine of `{}` is not a chain", x.label));
            };
            if core::mem::replace(&mut hit[j], true) {
                return fail(format!("degree {n}: two simplices share the spine of `{}`", x.label));
            }
            if x.degenerate != ys[j].degenerate {
                return fail(format!("degree {n}: `{}` and `{}` differ in degeneracy", x.label, ys[j].label));
            }
            if n > 0 {
                for (i, (&fx, &fy)) in x.faces.iter().zip(&ys[j].faces).enumerate() {
                    if maps[n - 1][fx] != fy {
                        return fail(format!("degree {n}: face {i} of `{}` does not match", x.label));
                    }
                }
            }
            map.push(j);
        }
        maps.push(map);
    }
    Ok(())
}
