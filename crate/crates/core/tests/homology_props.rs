use polyhom_core::fincat::{classical_nerve, compare_street_with_classical, delooping1};
use polyhom_core::{
    globe, lambda, polygraphic_homology, sphere, FiniteCategory, FiniteGroup, HomologyGroup, StringRewritingSystem,
    TopDegree,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random partial order on `0..n` contained in the usual order, closed
/// transitively.
fn random_order(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
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

fn acyclic(up_to: usize) -> Vec<HomologyGroup> {
    let mut h = vec![HomologyGroup::free(0); up_to + 1];
    h[0] = HomologyGroup::free(1);
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn posets_with_a_top_element_are_acyclic(seed in any::<u64>(), n in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut leq = random_order(n, &mut rng);
        for row in &mut leq {
            row.push(true);
        }
        let mut top = vec![false; n + 1];
        top[n] = true;
        leq.push(top);
        let p = FiniteCategory::poset(n + 1, |i, j| leq[i][j]).unwrap();
        prop_assert_eq!(p.find_terminal(), Some(polyhom_core::ObjId(n)));
        let nerve = classical_nerve(&p, 4);
        let chains = nerve.normalized_chains();
        prop_assert!(chains.verify());
        prop_assert_eq!(chains.homology_upto(3, TopDegree::Refuse).unwrap(), acyclic(3));
    }

    #[test]
    fn street_nerve_of_small_posets(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let leq = random_order(n, &mut rng);
        let p = FiniteCategory::poset(n, |i, j| leq[i][j]).unwrap();
        prop_assert!(compare_street_with_classical(&p, 3).is_ok());
    }
}

#[test]
fn globes_are_acyclic_and_spheres_are_not() {
    for n in 0..=5 {
        let h = polygraphic_homology(&globe(n), n, true).unwrap();
        assert_eq!(h, acyclic(n), "globe {n}");
    }
    for n in 1..=5usize {
        let h = polygraphic_homology(&sphere(n as isize), n, true).unwrap();
        let mut expected = vec![HomologyGroup::free(0); n + 1];
        expected[0] = HomologyGroup::free(1);
        expected[n] = HomologyGroup::free(1);
        assert_eq!(h, expected, "sphere {n}");
    }
}

fn monoid_corpus() -> Vec<FiniteCategory> {
    let klein = FiniteGroup::new(
        (0..4).map(|i| i.to_string()).collect(),
        (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
        0,
    )
    .unwrap();
    let idempotent = FiniteCategory::monoid(vec!["1".into(), "e".into()], &[vec![0, 1], vec![1, 1]], 0).unwrap();
    // left-zero semigroup {x, y} with a unit adjoined
    let left_zero = FiniteCategory::monoid(
        vec!["1".into(), "x".into(), "y".into()],
        &[vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
        0,
    )
    .unwrap();
    vec![
        delooping1(&FiniteGroup::cyclic(2)),
        delooping1(&FiniteGroup::cyclic(3)),
        delooping1(&FiniteGroup::cyclic(4)),
        delooping1(&klein),
        idempotent,
        left_zero,
    ]
}

#[test]
fn street_nerve_of_monoids() {
    for c in monoid_corpus() {
        assert!(c.num_morphisms() <= 8);
        compare_street_with_classical(&c, 3).unwrap();
    }
}

type Rules<'a> = &'a [(&'a [&'a str], &'a [&'a str])];

fn srs_corpus() -> Vec<(StringRewritingSystem, Vec<HomologyGroup>)> {
    let z = HomologyGroup::free(1);
    let zero = HomologyGroup::free(0);
    let cases: Vec<(&[&str], Rules, Vec<HomologyGroup>)> = vec![
        (&["a"], &[(&["a", "a"], &[])], vec![z.clone(), HomologyGroup::with_torsion(0, [2]), zero.clone()]),
        (&["a"], &[(&["a", "a", "a"], &[])], vec![z.clone(), HomologyGroup::with_torsion(0, [3]), zero.clone()]),
        (
            &["a", "b"],
            &[(&["a", "a"], &[]), (&["b", "b"], &[]), (&["b", "a"], &["a", "b"])],
            vec![z.clone(), HomologyGroup::with_torsion(0, [2, 2]), HomologyGroup::with_torsion(0, [2])],
        ),
        (&["a"], &[(&["a", "a"], &["a"])], vec![z.clone(), zero.clone(), zero.clone()]),
        // Z/3 written with two letters: b = a^2
        (
            &["a", "b"],
            &[(&["a", "a"], &["b"]), (&["a", "b"], &[]), (&["b", "a"], &[]), (&["b", "b"], &["a"])],
            vec![z.clone(), HomologyGroup::with_torsion(0, [3]), zero.clone()],
        ),
    ];
    cases
        .into_iter()
        .map(|(alphabet, rules, h)| (StringRewritingSystem::from_names(alphabet, rules).unwrap(), h))
        .collect()
}

/// λ of the truncated resolution against the nerve of the presented
/// monoid, degrees 0 to 2, and both against the expected groups.
#[test]
fn resolution_and_nerve_agree_on_presented_monoids() {
    for (srs, expected) in srs_corpus() {
        assert!(srs.is_convergent());
        let res = srs.resolution_polygraph(3).unwrap();
        assert!(res.validate().is_ok());
        assert!(lambda(&res).unwrap().complex.verify());
        let pol = polygraphic_homology(&res, 2, false).unwrap();
        let monoid = srs.monoid(6).unwrap();
        let nerve = classical_nerve(&monoid, 3).normalized_chains().homology_upto(2, TopDegree::Refuse).unwrap();
        assert_eq!(pol, nerve, "{:?}", srs.rules());
        assert_eq!(pol, expected, "{:?}", srs.rules());
    }
}

/// Random systems over two letters whose monoid has at most six elements.
#[test]
fn resolution_and_nerve_agree_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let words: Vec<Vec<usize>> =
        (0..=3).flat_map(|len| (0..1usize << len).map(move |m| (0..len).map(|i| (m >> i) & 1).collect())).collect();
    let mut checked = 0;
    for _ in 0..4000 {
        let k = rng.random_range(1..=4);
        let mut rules = Vec::new();
        for _ in 0..k {
            let lhs = words[rng.random_range(1..words.len())].clone();
            let shorter: Vec<&Vec<usize>> = words
                .iter()
                .filter(|w| polyhom_core::shortlex(w, &lhs).is_lt())
                .collect();
            let rhs = shorter[rng.random_range(0..shorter.len())].clone();
            rules.push(polyhom_core::Rule { lhs, rhs });
        }
        let Ok(srs) = StringRewritingSystem::new(vec!["a".into(), "b".into()], rules) else { continue };
        if !srs.is_convergent() {
            continue;
        }
        let Ok(monoid) = srs.monoid(6) else { continue };
        if monoid.num_morphisms() > 6 || srs.critical_branchings().len() > 12 {
            continue;
        }
        let res = srs.resolution_polygraph(3).unwrap();
        assert!(res.validate().is_ok(), "{:?}", srs.rules());
        let pol = polygraphic_homology(&res, 2, false).unwrap();
        let nerve = classical_nerve(&monoid, 3).normalized_chains().homology_upto(2, TopDegree::Refuse).unwrap();
        assert_eq!(pol, nerve, "{:?}", srs.rules());
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} systems checked");
}

/// The λ-boundary of the 3-cell of a branching counts the rules along the
/// left reduction path minus those along the right one.
#[test]
fn three_cell_boundaries_follow_the_traces() {
    for (srs, _) in srs_corpus() {
        let res = srs.resolution_polygraph(3).unwrap();
        let lam = lambda(&res).unwrap();
        for (i, b) in srs.critical_branchings().iter().enumerate() {
            let mut expected = vec![0i64; srs.rules().len()];
            for s in srs.branch_path(b, b.left) {
                expected[s.rule] += 1;
            }
            for s in srs.branch_path(b, b.right) {
                expected[s.rule] -= 1;
            }
            let id = polyhom_core::GeneratorId::new(format!("c{i}"), 3);
            let got: Vec<i64> =
                lam.boundary_of(&id).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect();
            assert_eq!(got, expected, "{:?} branching {i}", srs.rules());
        }
    }
}
