#![allow(dead_code)]

use std::collections::BTreeSet;

use polyhom::random::FreeOverPoset;
use polyhom_core::{
    check_slice_identification, conduche_check, grothendieck, reassemble, slice, slice_category, slice_map,
    slice_morphism, CellExpr, Diagram, FiniteCategory, FunctorToBase, GeneratorId, GeneratorMap, ObjId, Side,
};

/// `f(t0 g)` by walking targets down to dimension 0.
fn target_object(f: &FunctorToBase, g: &GeneratorId) -> ObjId {
    let mut e = CellExpr::Gen(g.clone());
    while e.dim().unwrap() > 0 {
        e = f.domain().boundary(&e, Side::Target).unwrap();
    }
    let CellExpr::Gen(x) = e else { panic!("a 0-cell that is not a generator") };
    f.images0()[&x]
}

fn hom_count(c: &FiniteCategory, x: ObjId, a: ObjId) -> usize {
    c.morphism_ids().filter(|&m| c.src(m) == x && c.tgt(m) == a).count()
}

fn compose_maps(second: &GeneratorMap, first: &GeneratorMap) -> GeneratorMap {
    first.iter().map(|(k, v)| (k.clone(), second[v].clone())).collect()
}

/// Every slice property on one random instance.
pub fn check_slice_instance(inst: &FreeOverPoset) -> Result<(), String> {
    let f = &inst.functor;
    let (x, base) = (f.domain(), f.base());
    for a in base.objects() {
        let s = slice(f, a).map_err(|e| e.to_string())?;
        let report = s.polygraph.validate();
        if !report.is_ok() {
            return Err(format!("slice over {} is not a polygraph: {}", a.0, report.violations[0]));
        }
        s.polygraph.check_morphism(x, &s.projection()).map_err(|e| format!("projection: {e}"))?;
        for n in 0..=x.max_dim() {
            let expected: usize = x.basis(n).iter().map(|g| hom_count(base, target_object(f, g), a)).sum();
            let found = s.polygraph.basis(n).len();
            if found != expected {
                return Err(format!("slice over {}: {found} generators in dimension {n}, expected {expected}", a.0));
            }
        }
        let sc = slice_category(base, a).map_err(|e| e.to_string())?;
        conduche_check(&sc.category, base, &sc.projection).map_err(|e| format!("projection to the base: {e}"))?;
    }
    let r = reassemble(f).map_err(|e| e.to_string())?;
    let images: BTreeSet<&GeneratorId> = r.to_domain.values().collect();
    if r.polygraph.len() != x.len() || images.len() != x.len() {
        return Err("the colimit is not in bijection with the domain".into());
    }
    let inverse: GeneratorMap = r.to_domain.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    x.check_morphism(&r.polygraph, &inverse).map_err(|e| format!("inverse comparison: {e}"))?;
    for beta in base.morphism_ids() {
        let (a, b) = (base.src(beta), base.tgt(beta));
        let mx = slice_map(f, beta).map_err(|e| e.to_string())?;
        let from = slice(f, a).unwrap();
        let to = slice(f, b).unwrap();
        from.polygraph.check_morphism(&to.polygraph, &mx).map_err(|e| format!("slice map: {e}"))?;
        let my = slice_map(&inst.sub, beta).map_err(|e| e.to_string())?;
        let ga = slice_morphism(&inst.sub, f, &inst.inclusion, a).map_err(|e| e.to_string())?;
        let gb = slice_morphism(&inst.sub, f, &inst.inclusion, b).map_err(|e| e.to_string())?;
        if compose_maps(&mx, &ga) != compose_maps(&gb, &my) {
            return Err(format!("naturality square fails along `{}`", base.morphism_name(beta)));
        }
    }
    Ok(())
}

/// `∫ k(1)` projects isomorphically onto `A`.
pub fn check_constant_terminal(a: &FiniteCategory) -> Result<(), String> {
    let g = grothendieck(&Diagram::constant(a.clone(), FiniteCategory::terminal())).map_err(|e| e.to_string())?;
    if g.projection.is_isomorphism(a) {
        Ok(())
    } else {
        Err("the projection of the Grothendieck construction is not an isomorphism".into())
    }
}

/// For `d = a ↦ A/a`: the identification checks plus brute-force counts.
pub fn check_slices_diagram(a: &FiniteCategory) -> Result<(), String> {
    let s = check_slice_identification(a).map_err(|e| e.to_string())?;
    let objects = a.num_morphisms();
    // (β, p, p', h) with β p = p' h
    let mut morphisms = 0;
    for beta in a.morphism_ids() {
        for p in a.morphism_ids().filter(|&p| a.tgt(p) == a.src(beta)) {
            for q in a.morphism_ids().filter(|&q| a.tgt(q) == a.tgt(beta)) {
                for h in a.morphism_ids().filter(|&h| a.src(h) == a.src(p) && a.tgt(h) == a.src(q)) {
                    if a.compose(beta, p) == a.compose(q, h) {
                        morphisms += 1;
                    }
                }
            }
        }
    }
    let total = &s.grothendieck.total;
    if (total.num_objects(), total.num_morphisms()) != (objects, morphisms) {
        return Err(format!(
            "Grothendieck construction has ({}, {}) objects and morphisms, expected ({objects}, {morphisms})",
            total.num_objects(),
            total.num_morphisms()
        ));
    }
    let c = &s.colimit.category;
    if (c.num_objects(), c.num_morphisms()) != (a.num_objects(), a.num_morphisms()) || !s.iso.is_isomorphism(a) {
        return Err("the colimit of the slices is not A".into());
    }
    Ok(())
}
