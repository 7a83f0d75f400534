//! Polygraphic homology against nerve homology.
//!
//! The polygraphic side takes λ of a (truncated) polygraphic resolution;
//! the nerve side takes normalized chains of the nerve. The two run on
//! separate threads and are assembled in a fixed order, so the report is
//! the same byte for byte on every run.

use std::fmt::Write as _;

use polyhom_core::fincat::classical_nerve;
use polyhom_core::{lambda, polygraphic_homology, HomologyGroup, RewriteError, StringRewritingSystem, TopDegree};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::format::{homology_json, HomologyJson, PolygraphInput, ResolvedCategory};

/// Longest normal form looked for before a monoid is treated as infinite.
pub const NORMAL_FORM_BOUND: usize = 12;
/// Largest finite monoid whose full nerve is enumerated.
pub const MAX_MONOID: usize = 16;

#[derive(Clone, Debug)]
pub enum CompareInput {
    Srs(StringRewritingSystem),
    Resolved(ResolvedCategory),
    /// A bare polygraph; only its polygraphic side can be computed.
    Polygraph(PolygraphInput),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompareOptions {
    pub up_to: usize,
    pub pol_only: bool,
    /// Report the top degree of the resolution as honest.
    pub complete: bool,
    /// Weight of the restricted nerve chains of an infinite monoid.
    pub weight: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { up_to: 2, pol_only: false, complete: false, weight: 6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Differ,
    PolOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub pol: HomologyJson,
    pub nerve: Option<HomologyJson>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pipeline {
    pub description: String,
    /// Ranks of the chain complex whose homology was taken.
    pub ranks: Vec<usize>,
}

/// Outcome of one comparison. Sizes stand in for timings so that the
/// report is reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub input: String,
    pub up_to: usize,
    pub polygraphic: Pipeline,
    pub nerve: Option<Pipeline>,
    pub degrees: Vec<DegreeComparison>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn pol_groups(&self) -> Vec<HomologyGroup> {
        self.degrees.iter().map(|d| d.pol.group().expect("written from a group")).collect()
    }

    pub fn nerve_groups(&self) -> Option<Vec<HomologyGroup>> {
        self.degrees.iter().map(|d| d.nerve.as_ref().map(|h| h.group().expect("written from a group"))).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input: {}", self.input);
        let _ = writeln!(s, "polygraphic side: {} (ranks {:?})", self.polygraphic.description, self.polygraphic.ranks);
        match &self.nerve {
            Some(n) => {
                let _ = writeln!(s, "nerve side: {} (ranks {:?})", n.description, n.ranks);
            }
            None => s.push_str("nerve side: not computed\n"),
        }
        let show = |h: &HomologyJson| h.group().map_or_else(|_| "?".into(), |g| g.to_string());
        let _ = writeln!(s, "{:<7} {:<14} {:<14} verdict", "degree", "H_pol", "H_nerve");
        for d in &self.degrees {
            let nerve = d.nerve.as_ref().map_or_else(|| "-".to_string(), show);
            let verdict = match d.verdict {
                Verdict::Equal => "equal",
                Verdict::Differ => "DIFFER",
                Verdict::PolOnly => "-",
            };
            let _ = writeln!(s, "{:<7} {:<14} {:<14} {verdict}", d.degree, show(&d.pol), nerve);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "verdict: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

type Side = Result<(Vec<HomologyGroup>, Pipeline, Vec<String>), Error>;

fn ranks_of(p: &polyhom_core::Polygraph) -> Vec<usize> {
    (0..=p.max_dim()).map(|n| p.basis(n).len()).collect()
}

fn polygraphic_side(input: &CompareInput, opts: &CompareOptions) -> Side {
    let (p, complete, description) = match input {
        CompareInput::Srs(srs) => {
            if opts.up_to > 2 {
                return Err(Error::Capability(format!(
                    "resolutions stop at dimension 3, so degrees above 2 are out of reach (asked for {})",
                    opts.up_to
                )));
            }
            let p = srs.resolution_polygraph(opts.up_to + 1)?;
            (p, false, format!("resolution from rewriting, truncated at dimension {}", opts.up_to + 1))
        }
        CompareInput::Resolved(r) => {
            (r.resolution.polygraph.clone(), r.resolution.complete, "user-supplied resolution".to_string())
        }
        CompareInput::Polygraph(p) => (p.polygraph.clone(), p.complete, "λ of the polygraph".to_string()),
    };
    let h = polygraphic_homology(&p, opts.up_to, complete || opts.complete)?;
    let ranks = lambda(&p)?.complex.ranks().to_vec();
    Ok((h, Pipeline { description, ranks }, Vec::new()))
}

fn nerve_side(input: &CompareInput, opts: &CompareOptions) -> Side {
    let degree = opts.up_to + 1;
    let category = match input {
        CompareInput::Srs(srs) => match srs.monoid(NORMAL_FORM_BOUND) {
            Ok(m) => m,
            Err(RewriteError::Bound(b)) => return weighted_side(srs, opts, b),
            Err(e) => return Err(e.into()),
        },
        CompareInput::Resolved(r) => r.category.clone(),
        CompareInput::Polygraph(_) => {
            return Err(Error::Capability(
                "a bare polygraph has no finite nerve to compare with; use --pol-only".into(),
            ))
        }
    };
    if category.num_morphisms() > MAX_MONOID.max(category.num_objects()) && matches!(input, CompareInput::Srs(_)) {
        return Err(Error::Capability(format!(
            "the presented monoid has {} elements; nerves are enumerated up to {MAX_MONOID}",
            category.num_morphisms()
        )));
    }
    let chains = classical_nerve(&category, degree).normalized_chains();
    let h = chains.homology_upto(opts.up_to, TopDegree::Refuse)?;
    let description = format!(
        "normalized chains of the nerve of a category with {} object(s) and {} morphism(s), truncated at degree {degree}",
        category.num_objects(),
        category.num_morphisms()
    );
    Ok((h, Pipeline { description, ranks: chains.ranks().to_vec() }, Vec::new()))
}

/// Nerve side of an infinite monoid: chains on simplices of total weight at
/// most `W`, accepted only if `W + 1` gives the same groups.
fn weighted_side(srs: &StringRewritingSystem, opts: &CompareOptions, bound: usize) -> Side {
    let degree = opts.up_to + 1;
    let w = opts.weight;
    let small = srs.weighted_nerve_chains(degree, w)?;
    let large = srs.weighted_nerve_chains(degree, w + 1)?;
    let h = small.homology_upto(opts.up_to, TopDegree::Refuse)?;
    let h2 = large.homology_upto(opts.up_to, TopDegree::Refuse)?;
    if h != h2 {
        return Err(Error::Capability(format!(
            "nerve chains of weight {w} and {} disagree; the infinite monoid is beyond the weight bound",
            w + 1
        )));
    }
    let description = format!(
        "normalized chains of the nerve restricted to simplices of weight at most {w}, truncated at degree {degree}"
    );
    let note = format!(
        "the presented monoid has normal forms longer than {bound}, so it was treated as infinite; \
         the restricted chains give the same groups at weights {w} and {}",
        w + 1
    );
    Ok((h, Pipeline { description, ranks: small.ranks().to_vec() }, vec![note]))
}

fn describe(input: &CompareInput) -> String {
    match input {
        CompareInput::Srs(srs) => {
            let rules: Vec<String> = (0..srs.rules().len()).map(|i| srs.rule_string(i)).collect();
            let rules = if rules.is_empty() { "none".to_string() } else { rules.join(", ") };
            format!("rewriting system on letters {}; rules {rules}", srs.alphabet().join(" "))
        }
        CompareInput::Resolved(r) => format!(
            "category with {} object(s) and {} morphism(s), resolution with generator counts {:?}",
            r.category.num_objects(),
            r.category.num_morphisms(),
            ranks_of(&r.resolution.polygraph)
        ),
        CompareInput::Polygraph(p) => format!("polygraph with generator counts {:?}", ranks_of(&p.polygraph)),
    }
}

/// Runs both pipelines (the nerve side is skipped with `pol_only`).
pub fn compare(input: &CompareInput, opts: &CompareOptions) -> Result<ComparisonReport, Error> {
    let (pol, nerve) = std::thread::scope(|s| {
        let nerve = (!opts.pol_only).then(|| s.spawn(|| nerve_side(input, opts)));
        let pol = polygraphic_side(input, opts);
        (pol, nerve.map(|h| h.join().expect("nerve pipeline panicked")))
    });
    let (pol_h, pol_pipe, mut notes) = pol?;
    let nerve = nerve.transpose()?;
    let pol_json = homology_json(&pol_h);
    let (degrees, nerve_pipe) = match nerve {
        Some((nerve_h, pipe, more)) => {
            notes.extend(more);
            let degrees: Vec<DegreeComparison> = pol_json
                .into_iter()
                .zip(homology_json(&nerve_h))
                .zip(pol_h.iter().zip(&nerve_h))
                .map(|((p, n), (a, b))| DegreeComparison {
                    degree: p.degree,
                    pol: p,
                    nerve: Some(n),
                    verdict: if a == b { Verdict::Equal } else { Verdict::Differ },
                })
                .collect();
            (degrees, Some(pipe))
        }
        None => {
            notes.push("nerve side not computed (--pol-only)".into());
            if matches!(input, CompareInput::Polygraph(_)) {
                notes.push(
                    "the nerve of the generated ω-category has infinitely many simplices, which is out of desk scale"
                        .into(),
                );
            }
            let degrees: Vec<DegreeComparison> = pol_json
                .into_iter()
                .map(|p| DegreeComparison { degree: p.degree, pol: p, nerve: None, verdict: Verdict::PolOnly })
                .collect();
            (degrees, None)
        }
    };
    let pass = degrees.iter().all(|d: &DegreeComparison| d.verdict != Verdict::Differ);
    Ok(ComparisonReport {
        input: describe(input),
        up_to: opts.up_to,
        polygraphic: pol_pipe,
        nerve: nerve_pipe,
        degrees,
        notes,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srs::parse_srs_text;

    fn run(text: &str) -> ComparisonReport {
        compare(&CompareInput::Srs(parse_srs_text(text).unwrap()), &CompareOptions::default()).unwrap()
    }

    #[test]
    fn cyclic_groups() {
        let r = run("letters: a\nrule: aa -> 1");
        assert!(r.pass);
        assert_eq!(r.pol_groups(), vec![HomologyGroup::free(1), HomologyGroup::with_torsion(0, [2]), HomologyGroup::free(0)]);
        let r = run("letters: a\nrule: aaa -> 1");
        assert!(r.pass);
        assert_eq!(r.nerve_groups().unwrap()[1], HomologyGroup::with_torsion(0, [3]));
    }

    #[test]
    fn free_monoid_uses_weighted_chains() {
        let r = run("letters: a\n");
        assert!(r.pass);
        assert_eq!(r.nerve_groups().unwrap(), vec![HomologyGroup::free(1), HomologyGroup::free(1), HomologyGroup::free(0)]);
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run("letters: a b\nrule: aa -> 1\nrule: bb -> 1\nrule: ba -> ab");
        let b = run("letters: a b\nrule: aa -> 1\nrule: bb -> 1\nrule: ba -> ab");
        assert_eq!(a.to_text(), b.to_text());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<ComparisonReport>(&json).unwrap(), a);
    }

    #[test]
    fn depth_limit() {
        let srs = parse_srs_text("letters: a\nrule: aa -> 1").unwrap();
        let opts = CompareOptions { up_to: 3, ..CompareOptions::default() };
        assert_eq!(compare(&CompareInput::Srs(srs), &opts).unwrap_err().exit_code(), 4);
    }
}
