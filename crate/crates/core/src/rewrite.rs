//! String rewriting systems and the low-dimensional part of the polygraphic
//! resolution of the monoid they present.
//!
//! Rules must decrease the shortlex order given by the alphabet order, which
//! proves termination. For a convergent system the resolution built here
//! has one 0-cell, the letters as 1-cells, the rules as 2-cells and the
//! critical branchings as 3-cells.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use num_bigint::BigInt;

use crate::cell::{CellExpr, Polygraph};
use crate::fincat::{CategoryError, FiniteCategory};
use crate::homalg::{ChainComplex, IntMatrix};

/// A word over the alphabet, as letter indices.
pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("rule {0} has an empty left-hand side")]
    EmptyLhs(usize),
    #[error("rule `{0}` does not decrease the shortlex order")]
    NotDecreasing(String),
    #[error("rules {0} and {1} share the left-hand side `{2}`")]
    DuplicateLhs(usize, usize, String),
    #[error("the system is not confluent: branching on `{word}` reaches `{left}` and `{right}`")]
    NotConvergent { word: String, left: String, right: String },
    #[error("the monoid has a normal form longer than {0}; it may be infinite")]
    Bound(usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

/// One rewriting step: rule index and position of the redex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub rule: usize,
    pub position: usize,
}

/// Two distinct overlapping redexes in a minimal word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalBranching {
    pub word: Word,
    pub left: Step,
    pub right: Step,
    pub left_reduct: Word,
    pub right_reduct: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringRewritingSystem {
    alphabet: Vec<String>,
    rules: Vec<Rule>,
}

impl StringRewritingSystem {
    pub fn new(alphabet: Vec<String>, rules: Vec<Rule>) -> Result<Self, RewriteError> {
        let mut seen = BTreeSet::new();
        for a in &alphabet {
            if !seen.insert(a.as_str()) {
                return Err(RewriteError::DuplicateLetter(a.clone()));
            }
        }
        let srs = StringRewritingSystem { alphabet, rules };
        for (i, r) in srs.rules.iter().enumerate() {
            if r.lhs.is_empty() {
                return Err(RewriteError::EmptyLhs(i));
            }
            if let Some(&bad) = r.lhs.iter().chain(&r.rhs).find(|&&x| x >= srs.alphabet.len()) {
                return Err(RewriteError::UnknownLetter(format!("#{bad}")));
            }
            if shortlex(&r.rhs, &r.lhs) != Ordering::Less {
                return Err(RewriteError::NotDecreasing(srs.rule_string(i)));
            }
            if let Some(j) = srs.rules[..i].iter().position(|q| q.lhs == r.lhs) {
                return Err(RewriteError::DuplicateLhs(j, i, srs.word_string(&r.lhs)));
            }
        }
        Ok(srs)
    }

    /// Builds a system from rules spelled with letter names. The empty word
    /// is the empty slice.
    pub fn from_names(alphabet: &[&str], rules: &[(&[&str], &[&str])]) -> Result<Self, RewriteError> {
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let word = |w: &[&str]| -> Result<Word, RewriteError> {
            w.iter()
                .map(|l| alphabet.iter().position(|a| a == l).ok_or_else(|| RewriteError::UnknownLetter(l.to_string())))
                .collect()
        };
        let rules = rules
            .iter()
            .map(|(l, r)| Ok(Rule { lhs: word(l)?, rhs: word(r)? }))
            .collect::<Result<Vec<_>, RewriteError>>()?;
        Self::new(alphabet, rules)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    /// Letters concatenated, or `1` for the empty word.
    pub fn word_string(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let sep = if self.alphabet.iter().all(|a| a.chars().count() == 1) { "" } else { " " };
        w.iter().map(|&i| self.alphabet[i].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn rule_string(&self, i: usize) -> String {
        let r = &self.rules[i];
        format!("{} -> {}", self.word_string(&r.lhs), self.word_string(&r.rhs))
    }

    /// Name of the 2-cell of rule `i` in the resolution.
    pub fn rule_name(&self, i: usize) -> String {
        format!("r{i}")
    }

    /// Applies `step` to `w`; `None` if the redex is not there.
    pub fn apply(&self, w: &[usize], step: Step) -> Option<Word> {
        let r = &self.rules[step.rule];
        let end = step.position + r.lhs.len();
        if end > w.len() || w[step.position..end] != r.lhs[..] {
            return None;
        }
        let mut out = w[..step.position].to_vec();
        out.extend_from_slice(&r.rhs);
        out.extend_from_slice(&w[end..]);
        Some(out)
    }

    /// The leftmost redex; among redexes at the same position, the one with
    /// the longest left-hand side.
    pub fn leftmost_redex(&self, w: &[usize]) -> Option<Step> {
        (0..w.len()).find_map(|position| {
            self.rules
                .iter()
                .enumerate()
                .filter(|(_, r)| w[position..].starts_with(&r.lhs))
                .max_by_key(|(_, r)| r.lhs.len())
                .map(|(rule, _)| Step { rule, position })
        })
    }

    /// Normal form reached by leftmost-outermost reduction, with the steps.
    pub fn normalize(&self, w: &[usize]) -> (Word, Vec<Step>) {
        let mut cur = w.to_vec();
        let mut trace = Vec::new();
        while let Some(step) = self.leftmost_redex(&cur) {
            cur = self.apply(&cur, step).expect("redex found");
            trace.push(step);
        }
        (cur, trace)
    }

    pub fn is_normal(&self, w: &[usize]) -> bool {
        self.leftmost_redex(w).is_none()
    }

    /// All critical branchings: proper suffix/prefix overlaps of two
    /// left-hand sides (a rule with itself included) and inclusions of one
    /// left-hand side in another.
    pub fn critical_branchings(&self) -> Vec<CriticalBranching> {
        let mut out = Vec::new();
        let mut push = |word: Word, left: Step, right: Step| {
            let left_reduct = self.apply(&word, left).expect("left redex");
            let right_reduct = self.apply(&word, right).expect("right redex");
            out.push(CriticalBranching { word, left, right, left_reduct, right_reduct });
        };
        for (i, ri) in self.rules.iter().enumerate() {
            for (j, rj) in self.rules.iter().enumerate() {
                // inclusion of lhs_j inside lhs_i
                if i != j && rj.lhs.len() <= ri.lhs.len() {
                    for q in 0..=ri.lhs.len() - rj.lhs.len() {
                        if ri.lhs[q..].starts_with(&rj.lhs) {
                            push(ri.lhs.clone(), Step { rule: i, position: 0 }, Step { rule: j, position: q });
                        }
                    }
                }
                // a proper suffix of lhs_i is a proper prefix of lhs_j
                for len in 1..ri.lhs.len().min(rj.lhs.len()) {
                    if ri.lhs[ri.lhs.len() - len..] == rj.lhs[..len] {
                        let mut word = ri.lhs.clone();
                        word.extend_from_slice(&rj.lhs[len..]);
                        push(word, Step { rule: i, position: 0 }, Step { rule: j, position: ri.lhs.len() - len });
                    }
                }
            }
        }
        out
    }

    /// First critical branching whose reducts have different normal forms.
    pub fn non_joinable_branching(&self) -> Option<(CriticalBranching, Word, Word)> {
        self.critical_branchings().into_iter().find_map(|b| {
            let (l, _) = self.normalize(&b.left_reduct);
            let (r, _) = self.normalize(&b.right_reduct);
            (l != r).then_some((b, l, r))
        })
    }

    pub fn is_convergent(&self) -> bool {
        self.non_joinable_branching().is_none()
    }

    fn require_convergent(&self) -> Result<(), RewriteError> {
        match self.non_joinable_branching() {
            None => Ok(()),
            Some((b, l, r)) => Err(RewriteError::NotConvergent {
                word: self.word_string(&b.word),
                left: self.word_string(&l),
                right: self.word_string(&r),
            }),
        }
    }

    /// The 1-cell of a word: `w_1 *0 w_2 *0 ... *0 w_n`, the unit on `*`
    /// for the empty word.
    pub fn word_cell(&self, w: &[usize]) -> CellExpr {
        match w.split_first() {
            None => CellExpr::unit(star(), 1),
            Some((&a, [])) => self.letter_cell(a),
            Some((&a, rest)) => CellExpr::comp(0, self.letter_cell(a), self.word_cell(rest)),
        }
    }

    fn letter_cell(&self, a: usize) -> CellExpr {
        CellExpr::gen(self.alphabet[a].clone(), 1)
    }

    /// The 2-cell `u *0 r *0 v` rewriting `w = u lhs v` at `step`.
    pub fn step_cell(&self, w: &[usize], step: Step) -> CellExpr {
        let r = &self.rules[step.rule];
        let prefix = &w[..step.position];
        let suffix = &w[step.position + r.lhs.len()..];
        let mut cell = CellExpr::gen(self.rule_name(step.rule), 2);
        if !suffix.is_empty() {
            cell = CellExpr::comp(0, cell, self.word_cell(suffix));
        }
        if !prefix.is_empty() {
            cell = CellExpr::comp(0, self.word_cell(prefix), cell);
        }
        cell
    }

    /// The 2-cell of a reduction sequence starting at `w`, steps composed
    /// along 1-cells (later steps on the left).
    pub fn path_cell(&self, w: &[usize], steps: &[Step]) -> CellExpr {
        let mut cur = w.to_vec();
        let mut cell: Option<CellExpr> = None;
        for &s in steps {
            let c = self.step_cell(&cur, s);
            cur = self.apply(&cur, s).expect("valid step");
            cell = Some(match cell {
                None => c,
                Some(prev) => CellExpr::comp(1, c, prev),
            });
        }
        cell.unwrap_or_else(|| CellExpr::unit(self.word_cell(w), 2))
    }

    /// Reduction path of one side of a branching: the initial step followed
    /// by leftmost reduction to the normal form.
    pub fn branch_path(&self, b: &CriticalBranching, first: Step) -> Vec<Step> {
        let after = self.apply(&b.word, first).expect("redex");
        let (_, rest) = self.normalize(&after);
        let mut steps = vec![first];
        steps.extend(rest);
        steps
    }

    /// Truncated polygraphic resolution through dimension `depth <= 3`.
    ///
    /// The 3-cell of a branching goes from the path through the right redex
    /// to the path through the left redex.
    pub fn resolution_polygraph(&self, depth: usize) -> Result<Polygraph, RewriteError> {
        self.require_convergent()?;
        let depth = depth.min(3);
        let mut p = Polygraph::new();
        p.add_object("*").expect("fresh");
        if depth >= 1 {
            for a in &self.alphabet {
                p.add_cell(a, star(), star()).map_err(|_| RewriteError::DuplicateLetter(a.clone()))?;
            }
        }
        if depth >= 2 {
            for (i, r) in self.rules.iter().enumerate() {
                p.add_cell(&self.rule_name(i), self.word_cell(&r.lhs), self.word_cell(&r.rhs))
                    .map_err(|_| RewriteError::DuplicateLetter(self.rule_name(i)))?;
            }
        }
        if depth >= 3 {
            for (i, b) in self.critical_branchings().iter().enumerate() {
                let left = self.path_cell(&b.word, &self.branch_path(b, b.left));
                let right = self.path_cell(&b.word, &self.branch_path(b, b.right));
                p.add_cell(&format!("c{i}"), right, left).map_err(|_| RewriteError::DuplicateLetter(format!("c{i}")))?;
            }
        }
        p.set_max_dim(depth);
        Ok(p)
    }

    /// Normal forms of length at most `max_len` in shortlex order, and
    /// whether a longer one exists.
    fn normal_forms_upto(&self, max_len: usize) -> (Vec<Word>, bool) {
        let mut all = vec![Vec::new()];
        let mut frontier: Vec<Word> = vec![Vec::new()];
        for len in 1..=max_len + 1 {
            let mut next = Vec::new();
            for w in &frontier {
                for a in 0..self.alphabet.len() {
                    let mut x = w.clone();
                    x.push(a);
                    // a word is normal iff it has no redex, and every factor
                    // of a normal word is normal
                    if self.is_normal(&x) {
                        next.push(x);
                    }
                }
            }
            if len == max_len + 1 {
                return (all, !next.is_empty());
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        unreachable!()
    }

    /// All normal forms, provided none is longer than `bound`.
    pub fn normal_forms(&self, bound: usize) -> Result<Vec<Word>, RewriteError> {
        match self.normal_forms_upto(bound) {
            (_, true) => Err(RewriteError::Bound(bound)),
            (all, false) => Ok(all),
        }
    }

    /// The presented monoid as a one-object category whose morphisms are
    /// the normal forms, `g ∘ f` being the normal form of `g f`.
    pub fn monoid(&self, bound: usize) -> Result<FiniteCategory, RewriteError> {
        self.require_convergent()?;
        let forms = self.normal_forms(bound)?;
        let mut table = vec![vec![0; forms.len()]; forms.len()];
        for (i, g) in forms.iter().enumerate() {
            for (j, f) in forms.iter().enumerate() {
                let mut w = g.clone();
                w.extend_from_slice(f);
                let (nf, _) = self.normalize(&w);
                table[i][j] = forms.iter().position(|x| *x == nf).ok_or(RewriteError::Bound(bound))?;
            }
        }
        let names = forms.iter().map(|w| self.word_string(w)).collect();
        Ok(FiniteCategory::monoid(names, &table, 0)?)
    }
}

impl StringRewritingSystem {
    /// Normalized chains of the nerve of the presented monoid, restricted to
    /// the simplices `[w_1|...|w_n]` of non-empty normal forms whose lengths
    /// sum to at most `weight`, in degrees `0..=max_degree`.
    ///
    /// Rules never lengthen words, so faces do not increase the weight and
    /// this is a subcomplex. When every normal form has length at most
    /// `weight / max_degree` it is the whole normalized complex. Inner faces
    /// follow the nerve convention: `[.., u, v, ..] ↦ [.., nf(v u), ..]`.
    pub fn weighted_nerve_chains(&self, max_degree: usize, weight: usize) -> Result<ChainComplex, RewriteError> {
        self.require_convergent()?;
        let (forms, _) = self.normal_forms_upto(weight);
        let forms: Vec<Word> = forms.into_iter().filter(|w| !w.is_empty()).collect();
        let mut levels: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        for n in 1..=max_degree {
            let mut level = Vec::new();
            for prev in &levels[n - 1] {
                let used: usize = prev.iter().map(|&i| forms[i].len()).sum();
                for (i, w) in forms.iter().enumerate() {
                    if used + w.len() <= weight {
                        let mut key = prev.clone();
                        key.push(i);
                        level.push(key);
                    }
                }
            }
            level.sort();
            levels.push(level);
        }
        let mut differentials = Vec::new();
        for n in 1..=max_degree {
            let mut d = IntMatrix::zeros(levels[n - 1].len(), levels[n].len());
            for (col, key) in levels[n].iter().enumerate() {
                for i in 0..=n {
                    let face = match i {
                        0 => Some(key[1..].to_vec()),
                        i if i == n => Some(key[..n - 1].to_vec()),
                        i => {
                            let mut w = forms[key[i]].clone();
                            w.extend_from_slice(&forms[key[i - 1]]);
                            let (nf, _) = self.normalize(&w);
                            // an empty composite makes the face degenerate
                            (!nf.is_empty()).then(|| {
                                let mut k = key[..i - 1].to_vec();
                                k.push(forms.iter().position(|x| *x == nf).expect("shorter normal form listed"));
                                k.extend_from_slice(&key[i + 1..]);
                                k
                            })
                        }
                    };
                    if let Some(face) = face {
                        let row = levels[n - 1].binary_search(&face).expect("faces stay in the truncation");
                        d[(row, col)] += BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            differentials.push(d);
        }
        let labels = levels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|key| {
                        if key.is_empty() {
                            return "*".to_string();
                        }
                        let parts: Vec<String> = key.iter().map(|&i| self.word_string(&forms[i])).collect();
                        format!("[{}]", parts.join("|"))
                    })
                    .collect()
            })
            .collect();
        let ranks = levels.iter().map(Vec::len).collect();
        Ok(ChainComplex::new(ranks, differentials)
            .and_then(|c| c.with_labels(labels))
            .expect("shapes follow the simplex counts"))
    }
}

fn star() -> CellExpr {
    CellExpr::gen("*", 0)
}

/// Shorter words first, then lexicographic by letter index.
pub fn shortlex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelianize::lambda;
    use crate::fincat::classical_nerve;
    use crate::homalg::{HomologyGroup, TopDegree};

    fn srs(alphabet: &[&str], rules: &[(&[&str], &[&str])]) -> StringRewritingSystem {
        StringRewritingSystem::from_names(alphabet, rules).unwrap()
    }

    fn z(n: usize) -> StringRewritingSystem {
        let lhs: Vec<&str> = vec!["a"; n];
        StringRewritingSystem::from_names(&["a"], &[(&lhs, &[])]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let s = z(2);
        let (nf, trace) = s.normalize(&[0, 0, 0]);
        assert_eq!((nf, trace.len()), (vec![0], 1));
        assert_eq!(trace[0], Step { rule: 0, position: 0 });
        let (nf, trace) = s.normalize(&[0, 0, 0, 0]);
        assert_eq!((nf.len(), trace.len()), (0, 2));
        let free = srs(&["a", "b"], &[]);
        assert_eq!(free.normalize(&[0, 1]).0, vec![0, 1]);
    }

    #[test]
    fn critical_branching_examples() {
        let b = z(2).critical_branchings();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].word, vec![0, 0, 0]);
        let inv = srs(&["a", "b"], &[(&["a", "b"], &[]), (&["b", "a"], &[])]);
        let words: Vec<String> = inv.critical_branchings().iter().map(|b| inv.word_string(&b.word)).collect();
        assert_eq!(words, ["aba", "bab"]);
        assert!(srs(&["a"], &[]).critical_branchings().is_empty());
        assert_eq!(z(3).critical_branchings().len(), 2);
    }

    #[test]
    fn convergence() {
        assert!(z(2).is_convergent());
        assert!(z(3).is_convergent());
        // ab -> a, ba -> b, then aab?  a non-confluent example: ab -> 1, ba -> c with no more rules
        let bad = srs(&["c", "a", "b"], &[(&["a", "b"], &[]), (&["b", "a"], &["c"])]);
        assert!(!bad.is_convergent());
        assert!(matches!(bad.resolution_polygraph(3), Err(RewriteError::NotConvergent { .. })));
    }

    #[test]
    fn construction_errors() {
        let dup = StringRewritingSystem::from_names(&["a", "b"], &[(&["a", "b"], &["a"]), (&["a", "b"], &["b"])]);
        assert!(matches!(dup, Err(RewriteError::DuplicateLhs(0, 1, _))));
        let growing = StringRewritingSystem::from_names(&["a"], &[(&["a"], &["a", "a"])]);
        assert!(matches!(growing, Err(RewriteError::NotDecreasing(_))));
        let empty = StringRewritingSystem::from_names(&["a"], &[(&[], &[])]);
        assert!(matches!(empty, Err(RewriteError::EmptyLhs(0))));
        assert!(matches!(
            StringRewritingSystem::from_names(&["a", "a"], &[]),
            Err(RewriteError::DuplicateLetter(_))
        ));
    }

    #[test]
    fn resolution_of_z2() {
        let p = z(2).resolution_polygraph(3).unwrap();
        assert!(p.validate().is_ok(), "{:?}", p.validate());
        let lam = lambda(&p).unwrap();
        assert!(lam.complex.verify());
        assert_eq!(lam.complex.ranks(), &[1, 1, 1, 1]);
        assert_eq!(lam.complex.differential(2).unwrap()[(0, 0)], BigInt::from(-2));
        assert!(lam.complex.differential(3).unwrap().is_zero());
    }

    #[test]
    fn monoids() {
        assert_eq!(z(2).monoid(4).unwrap().num_morphisms(), 2);
        assert_eq!(z(3).monoid(4).unwrap().num_morphisms(), 3);
        assert!(matches!(srs(&["a"], &[]).monoid(4), Err(RewriteError::Bound(4))));
    }

    #[test]
    fn weighted_chains_of_a_finite_monoid_are_the_full_complex() {
        for s in [z(2), z(3)] {
            let full = classical_nerve(&s.monoid(4).unwrap(), 3).normalized_chains();
            let weighted = s.weighted_nerve_chains(3, 9).unwrap();
            assert!(weighted.verify());
            assert_eq!(weighted.ranks(), full.ranks());
            for n in 0..3 {
                assert_eq!(
                    weighted.homology(n, TopDegree::Refuse).unwrap(),
                    full.homology(n, TopDegree::Refuse).unwrap()
                );
            }
        }
    }

    #[test]
    fn free_monoid_on_one_letter() {
        let s = srs(&["a"], &[]);
        for weight in 2..8 {
            let c = s.weighted_nerve_chains(3, weight).unwrap();
            assert!(c.verify());
            let h = c.homology_upto(2, TopDegree::Refuse).unwrap();
            assert_eq!(h, [HomologyGroup::free(1), HomologyGroup::free(1), HomologyGroup::free(0)], "weight {weight}");
        }
    }
}
