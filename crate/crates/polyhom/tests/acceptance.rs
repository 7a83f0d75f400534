//! One PASS/FAIL line per acceptance criterion. All comparisons are exact.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use polyhom::format::{read_file, PolygraphInput};
use polyhom::random::{random_category, random_free_over_poset, random_poset_with_top, rng, seed_from_env};
use polyhom::{ComparisonReport, Input};
use polyhom_core::fincat::{
    chain_nerve_in_oriental_basis, classical_nerve, compare_street_with_classical, delooping1, delooping2, oriental,
    street_nerve,
};
use polyhom_core::homalg::smith_normal_form;
use polyhom_core::{
    globe, lambda, polygraphic_homology, ChainComplex, FiniteCategory, FiniteGroup, HomologyGroup, IntMatrix,
    TopDegree,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn zero() -> HomologyGroup {
    HomologyGroup::free(0)
}

fn tor(n: i64) -> HomologyGroup {
    HomologyGroup::with_torsion(0, [n])
}

fn show(h: &[HomologyGroup]) -> String {
    let parts: Vec<String> = h.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn input(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../inputs").join(name)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Complexes built along the way, checked for `d∘d = 0` at the end.
#[derive(Default)]
struct Built(Vec<(String, ChainComplex)>);

impl Built {
    fn add(&mut self, what: impl Into<String>, c: &ChainComplex) {
        self.0.push((what.into(), c.clone()));
    }
}

fn criterion_1(built: &mut Built) -> Outcome {
    let Input::Polygraph(PolygraphInput { polygraph, complete }) = read_file(&input("b2n.json")).map_err(|e| e.to_string())?
    else {
        return Err("b2n.json is not a polygraph".into());
    };
    built.add("λ(B²ℕ)", &lambda(&polygraph).map_err(|e| e.to_string())?.complex);
    let h = polygraphic_homology(&polygraph, 2, complete).map_err(|e| e.to_string())?;
    ensure(h == [z(), zero(), z()], || format!("λ(B²ℕ) gave {}", show(&h)))?;
    let out = Command::new(env!("CARGO_BIN_EXE_polyhom"))
        .args(["compare", input("b2n.json").to_str().unwrap(), "--pol-only", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    let report: ComparisonReport = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0) && report.pol_groups() == h, || "the CLI disagrees".into())?;
    Ok(format!("H(λ B²ℕ) = {}", show(&h)))
}

fn criterion_2(built: &mut Built) -> Outcome {
    let cases = [
        ("z2.srs", [z(), tor(2), zero()]),
        ("z3.srs", [z(), tor(3), zero()]),
        ("free1.srs", [z(), z(), zero()]),
    ];
    let mut seen = Vec::new();
    for (file, expected) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_polyhom"))
            .args(["compare", input(file).to_str().unwrap(), "--up-to", "2", "--json"])
            .output()
            .map_err(|e| e.to_string())?;
        let report: ComparisonReport = serde_json::from_slice(&out.stdout)
            .map_err(|e| format!("{file}: {e}: {}", String::from_utf8_lossy(&out.stderr)))?;
        let pol = report.pol_groups();
        let nerve = report.nerve_groups().ok_or_else(|| format!("{file}: no nerve side"))?;
        ensure(out.status.code() == Some(0) && report.pass, || format!("{file}: verdict FAIL"))?;
        ensure(pol == expected && nerve == expected, || {
            format!("{file}: pol {} nerve {}, expected {}", show(&pol), show(&nerve), show(&expected))
        })?;
        // rebuild both complexes in-process for the d∘d check
        let Input::Srs(srs) = read_file(&input(file)).map_err(|e| e.to_string())? else {
            return Err(format!("{file} is not a rewriting system"));
        };
        let res = srs.resolution_polygraph(3).map_err(|e| e.to_string())?;
        built.add(format!("λ(resolution of {file})"), &lambda(&res).map_err(|e| e.to_string())?.complex);
        match srs.monoid(polyhom::compare::NORMAL_FORM_BOUND) {
            Ok(m) => built.add(format!("nerve of {file}"), &classical_nerve(&m, 3).normalized_chains()),
            Err(_) => built.add(format!("weighted nerve of {file}"), &srs.weighted_nerve_chains(3, 6).map_err(|e| e.to_string())?),
        }
        seen.push(format!("{file} {}", show(&pol)));
    }
    Ok(seen.join("; "))
}

fn criterion_3(built: &mut Built) -> Outcome {
    for n in 0..=3 {
        let lam = lambda(&oriental(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let kappa = chain_nerve_in_oriental_basis(n);
        built.add(format!("λ(O{n})"), &lam.complex);
        built.add(format!("κN[{n}]"), &kappa);
        ensure(lam.complex == kappa, || format!("λ(O{n}) differs from κN[{n}]"))?;
    }
    let lam = lambda(&oriental(2).unwrap()).unwrap();
    let labels = lam.complex.labels().ok_or("no labels")?;
    let col = labels[2].iter().position(|l| l == "<012>").ok_or("no <012>")?;
    let d2 = lam.complex.differential(2).unwrap();
    let coeff = |name: &str| -> Result<BigInt, String> {
        let row = labels[1].iter().position(|l| l == name).ok_or(format!("no {name}"))?;
        Ok(d2[(row, col)].clone())
    };
    let got = [coeff("<01>")?, coeff("<02>")?, coeff("<12>")?];
    ensure(got == [BigInt::from(1), BigInt::from(-1), BigInt::from(1)], || format!("d2<012> = {got:?}"))?;
    Ok("λ(On) = κN[n] for n = 0..3; d2<012> = <01> - <02> + <12>".into())
}

fn criterion_4(built: &mut Built) -> Outcome {
    for n in 0..=5 {
        let g = globe(n);
        built.add(format!("λ(D{n})"), &lambda(&g).map_err(|e| e.to_string())?.complex);
        let h = polygraphic_homology(&g, n, true).map_err(|e| e.to_string())?;
        let mut expected = vec![zero(); n + 1];
        expected[0] = z();
        ensure(h == expected, || format!("λ(D{n}) gave {}", show(&h)))?;
    }
    let seed = seed_from_env(0xacce);
    let mut r = rng(seed);
    for i in 0..20 {
        let n = r.random_range(1..=6);
        let p = random_poset_with_top(n, &mut r);
        let chains = classical_nerve(&p, 4).normalized_chains();
        built.add(format!("nerve of poset {i}"), &chains);
        let h = chains.homology_upto(3, TopDegree::Refuse).map_err(|e| e.to_string())?;
        ensure(h == [z(), zero(), zero(), zero()], || format!("poset {i} (seed {seed}) gave {}", show(&h)))?;
    }
    Ok("globes D0..D5 and 20 posets with a top element are acyclic".into())
}

fn criterion_5() -> Outcome {
    let seed = seed_from_env(0);
    let mut generators = 0;
    for i in 0..100 {
        let s = seed.wrapping_add(i);
        let inst = random_free_over_poset(5, 8, &mut rng(s));
        generators += inst.functor.domain().len();
        common::check_slice_instance(&inst).map_err(|e| format!("seed {s}: {e}"))?;
    }
    Ok(format!("100 instances ({generators} generators): reassembly, basis counts, Conduché projections"))
}

fn criterion_6() -> Outcome {
    let seed = seed_from_env(6);
    let mut r = rng(seed);
    for i in 0..10 {
        let a = random_category(&mut r);
        common::check_constant_terminal(&a).map_err(|e| format!("instance {i} (seed {seed}): {e}"))?;
        common::check_slices_diagram(&a).map_err(|e| format!("instance {i} (seed {seed}): {e}"))?;
    }
    Ok("∫ k(1) ≅ A and the a ↦ A/a identifications on 10 random categories".into())
}

/// Every poset on at most 3 objects, up to isomorphism (each has a linear
/// extension, so orders inside the usual one cover them all).
fn small_posets() -> Vec<FiniteCategory> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let rel = |i: usize, j: usize| i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask & (1 << k) != 0);
            let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel(i, j) && rel(j, k)) || rel(i, k))));
            if transitive {
                out.push(FiniteCategory::poset(n, rel).expect("an order"));
            }
        }
    }
    out
}

fn criterion_7(built: &mut Built) -> Outcome {
    let klein = FiniteGroup::new(
        (0..4).map(|i| i.to_string()).collect(),
        (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
        0,
    )
    .map_err(|e| e.to_string())?;
    let mut corpus = small_posets();
    corpus.extend((1..=8).map(|n| delooping1(&FiniteGroup::cyclic(n))));
    corpus.push(delooping1(&klein));
    corpus.push(FiniteCategory::monoid(vec!["1".into(), "e".into()], &[vec![0, 1], vec![1, 1]], 0).unwrap());
    corpus.push(
        FiniteCategory::monoid(
            vec!["1".into(), "x".into(), "y".into()],
            &[vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            0,
        )
        .unwrap(),
    );
    for c in &corpus {
        ensure(c.num_objects() <= 3 && c.num_morphisms() <= 8, || "corpus bound".into())?;
        compare_street_with_classical(c, 3).map_err(|e| e.to_string())?;
    }
    let b2 = delooping2(&FiniteGroup::cyclic(2)).map_err(|e| e.to_string())?;
    let nerve = street_nerve(&b2, 3).map_err(|e| e.to_string())?;
    let counts = (nerve.simplices(2).len(), nerve.simplices(3).len());
    ensure(counts == (2, 8), || format!("|N2|, |N3| = {counts:?}"))?;
    let chains = nerve.normalized_chains();
    built.add("Street nerve of B²(Z/2)", &chains);
    let h2 = chains.homology(2, TopDegree::Refuse).map_err(|e| e.to_string())?;
    ensure(h2 == tor(2), || format!("H2 = {h2}"))?;
    Ok(format!("{} categories agree up to degree 3; B²(Z/2): |N2| = 2, |N3| = 8, H2 = Z/2", corpus.len()))
}

fn criterion_8(built: &Built) -> Outcome {
    let seed = seed_from_env(8);
    let mut r = rng(seed);
    for i in 0..1000 {
        let (rows, cols) = (r.random_range(0..=6), r.random_range(0..=6));
        let entries: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.random_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(cols, &entries).ok_or("bad matrix")?;
        let s = smith_normal_form(&m);
        let fail = |what: &str| format!("matrix {i} (seed {seed}): {what}");
        ensure(&(&s.u * &m) * &s.v == s.s, || fail("UMV != S"))?;
        let unit = |d: BigInt| d == BigInt::from(1) || d == BigInt::from(-1);
        ensure(unit(s.u.determinant()) && unit(s.v.determinant()), || fail("not unimodular"))?;
        for a in 0..rows {
            for b in 0..cols {
                let x = &s.s[(a, b)];
                ensure(if a == b { *x >= BigInt::from(0) } else { *x == BigInt::from(0) }, || fail("not diagonal"))?;
            }
        }
        let d: Vec<&BigInt> = s.invariant_factors().collect();
        for w in d.windows(2) {
            ensure((w[1] % w[0]) == BigInt::from(0), || fail("divisibility"))?;
        }
    }
    for (what, c) in &built.0 {
        ensure(c.verify(), || format!("d∘d != 0 for {what}"))?;
    }
    Ok(format!("1000 Smith forms; d∘d = 0 on {} constructed complexes", built.0.len()))
}

fn main() {
    let mut built = Built::default();
    type Check<'a> = Box<dyn FnOnce(&mut Built) -> Outcome + 'a>;
    let criteria: Vec<(u32, u64, Check)> = vec![
        (1, 1, Box::new(criterion_1)),
        (2, 10, Box::new(criterion_2)),
        (3, 1, Box::new(criterion_3)),
        (4, 30, Box::new(criterion_4)),
        (5, 60, Box::new(|_| criterion_5())),
        (6, 10, Box::new(|_| criterion_6())),
        (7, 30, Box::new(criterion_7)),
        (8, 30, Box::new(|b: &mut Built| criterion_8(b))),
    ];
    let mut failed = 0;
    for (k, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check(&mut built);
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("took {} ms, limit {limit} s", elapsed.as_millis()))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS {k}: {msg} ({} ms)", elapsed.as_millis()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {k}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
