//! Seeded random instances for the property suites.
//!
//! Every generator takes an explicit RNG. [`seed_from_env`] reads
//! `POLYHOM_SEED` (decimal or `0x` hex) so a failing run can be replayed.

use std::collections::BTreeMap;

use polyhom_core::{
    CellExpr, FiniteCategory, FiniteGroup, FunctorToBase, GeneratorId, GeneratorMap, ObjId, Polygraph,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub const SEED_VAR: &str = "POLYHOM_SEED";

/// `POLYHOM_SEED` if set and parseable, `default` otherwise.
pub fn seed_from_env(default: u64) -> u64 {
    let Ok(s) = std::env::var(SEED_VAR) else { return default };
    let s = s.trim();
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.unwrap_or(default)
}

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random order on `0..n` contained in the usual one, transitively closed.
pub fn random_order(n: usize, rng: &mut TestRng) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = rng.random_bool(0.4);
        }
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
    leq
}

pub fn random_poset(n: usize, rng: &mut TestRng) -> FiniteCategory {
    let leq = random_order(n, rng);
    FiniteCategory::poset(n, |i, j| leq[i][j]).expect("an order is a category")
}

/// A random poset on `n >= 1` objects whose last object is a top element.
pub fn random_poset_with_top(n: usize, rng: &mut TestRng) -> FiniteCategory {
    assert!(n >= 1);
    let leq = random_order(n - 1, rng);
    FiniteCategory::poset(n, |i, j| j == n - 1 || (i < n - 1 && j < n - 1 && leq[i][j])).expect("an order")
}

/// A random monoid with at most `max` elements, found by rejection
/// sampling of multiplication tables with a fixed unit.
pub fn random_monoid(max: usize, rng: &mut TestRng) -> FiniteCategory {
    loop {
        let n = rng.random_range(1..=max);
        let mut table = vec![vec![0; n]; n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x = if a == 0 {
                    b
                } else if b == 0 {
                    a
                } else {
                    rng.random_range(0..n)
                };
            }
        }
        let names = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("m{i}") }).collect();
        if let Ok(c) = FiniteCategory::monoid(names, &table, 0) {
            return c;
        }
    }
}

/// A small random category: a poset, a cyclic group or a monoid.
pub fn random_category(rng: &mut TestRng) -> FiniteCategory {
    match rng.random_range(0..3) {
        0 => {
            let n = rng.random_range(1..=4);
            random_poset(n, rng)
        }
        1 => polyhom_core::fincat::delooping1(&FiniteGroup::cyclic(rng.random_range(1..=4))),
        _ => random_monoid(3, rng),
    }
}

/// A free ω-category over a poset together with a sub-polygraph over the
/// same poset and the inclusion.
#[derive(Clone, Debug)]
pub struct FreeOverPoset {
    pub functor: FunctorToBase,
    pub sub: FunctorToBase,
    pub inclusion: GeneratorMap,
}

fn path_expr(x: &GeneratorId, path: &[GeneratorId]) -> CellExpr {
    let mut e: Option<CellExpr> = None;
    for g in path {
        let c = CellExpr::Gen(g.clone());
        e = Some(match e {
            None => c,
            Some(prev) => CellExpr::comp(0, c, prev),
        });
    }
    e.unwrap_or_else(|| CellExpr::unit(CellExpr::Gen(x.clone()), 1))
}

/// Free `X` of dimension at most 2 with at most `max_generators`
/// generators over a random poset with at most `max_objects` objects.
/// 2-generators go between parallel paths of length at most 2.
pub fn random_free_over_poset(max_objects: usize, max_generators: usize, rng: &mut TestRng) -> FreeOverPoset {
    let n = rng.random_range(1..=max_objects);
    let leq = random_order(n, rng);
    let base = FiniteCategory::poset(n, |i, j| leq[i][j]).expect("an order");
    let arrow = |a: usize, b: usize| base.hom(ObjId(a), ObjId(b)).next().expect("a <= b");

    let mut p = Polygraph::new();
    let mut images0 = BTreeMap::new();
    let mut images1 = BTreeMap::new();
    let k0 = rng.random_range(1..=3.min(max_generators));
    let mut objects = Vec::new();
    for i in 0..k0 {
        let CellExpr::Gen(id) = p.add_object(&format!("x{i}")).expect("fresh") else { unreachable!() };
        let a = rng.random_range(0..n);
        images0.insert(id.clone(), ObjId(a));
        objects.push((id, a));
    }
    let budget = max_generators - k0;
    let k1 = rng.random_range(0..=budget.min(4));
    // (generator, source index, target index)
    let mut arrows: Vec<(GeneratorId, usize, usize)> = Vec::new();
    let pairs: Vec<(usize, usize)> =
        (0..k0).flat_map(|i| (0..k0).map(move |j| (i, j))).filter(|&(i, j)| leq[objects[i].1][objects[j].1]).collect();
    for i in 0..k1 {
        let &(s, t) = pairs.choose(rng).expect("every object is below itself");
        let e = p
            .add_cell(&format!("f{i}"), CellExpr::Gen(objects[s].0.clone()), CellExpr::Gen(objects[t].0.clone()))
            .expect("fresh");
        let CellExpr::Gen(id) = e else { unreachable!() };
        images1.insert(id.clone(), arrow(objects[s].1, objects[t].1));
        arrows.push((id, s, t));
    }
    // paths of length <= 2 as (source, target, generators in order)
    let mut paths: Vec<(usize, usize, Vec<GeneratorId>)> = (0..k0).map(|i| (i, i, Vec::new())).collect();
    for (g, s, t) in &arrows {
        paths.push((*s, *t, vec![g.clone()]));
    }
    for (g, s, t) in &arrows {
        for (h, s2, t2) in &arrows {
            if t == s2 {
                paths.push((*s, *t2, vec![g.clone(), h.clone()]));
            }
        }
    }
    let k2 = rng.random_range(0..=(budget - k1).min(3));
    let mut twos = Vec::new();
    for i in 0..k2 {
        let (s, t, src) = paths.choose(rng).expect("identity paths").clone();
        let parallel: Vec<&(usize, usize, Vec<GeneratorId>)> = paths.iter().filter(|q| q.0 == s && q.1 == t).collect();
        let tgt = parallel.choose(rng).expect("the path itself").2.clone();
        let x = &objects[s].0;
        let e = p.add_cell(&format!("a{i}"), path_expr(x, &src), path_expr(x, &tgt)).expect("fresh");
        let CellExpr::Gen(id) = e else { unreachable!() };
        let used: Vec<GeneratorId> = src.into_iter().chain(tgt).collect();
        twos.push((id, used));
    }
    let functor = FunctorToBase::new(p.clone(), base.clone(), images0.clone(), images1.clone()).expect("valid by construction");

    // drop some 2-generators and the 1-generators no remaining one needs
    let kept2: Vec<&(GeneratorId, Vec<GeneratorId>)> = twos.iter().filter(|_| rng.random_bool(0.5)).collect();
    let keep = |g: &GeneratorId| match g.dim {
        0 => true,
        1 => keeps_arrow(g, &kept2, &arrows),
        _ => kept2.iter().any(|(h, _)| h == g),
    };
    let mut sub = Polygraph::new();
    for g in p.generators().iter().filter(|g| keep(&g.id)) {
        sub.push(g.clone()).expect("fresh");
    }
    let sub_images1 = images1.iter().filter(|(g, _)| sub.contains(g)).map(|(g, m)| (g.clone(), *m)).collect();
    let inclusion = sub.generators().iter().map(|g| (g.id.clone(), g.id.clone())).collect();
    let sub = FunctorToBase::new(sub, base, images0, sub_images1).expect("a sub-polygraph over the same base");
    FreeOverPoset { functor, sub, inclusion }
}

/// Keeps a 1-generator if a kept 2-generator uses it or if its index is
/// even, so that sub-polygraphs lose some 1-cells too.
fn keeps_arrow(g: &GeneratorId, kept2: &[&(GeneratorId, Vec<GeneratorId>)], arrows: &[(GeneratorId, usize, usize)]) -> bool {
    kept2.iter().any(|(_, used)| used.contains(g)) || arrows.iter().position(|(h, _, _)| h == g).is_some_and(|i| i % 2 == 0)
}
