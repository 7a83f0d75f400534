//! The abelianization functor λ on free ω-categories.
//!
//! For a polygraph with basis `Σ`, `λ` is the free abelian group on `Σ_n` in
//! degree `n` with `d(g) = [t(g)] - [s(g)]`.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cell::{CellError, GeneratorId, Polygraph, Violation};
use crate::homalg::{ChainComplex, HomalgError, HomologyGroup, IntMatrix, TopDegree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianizeError {
    #[error("polygraph failed validation ({} violation(s)); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error("homology up to degree {requested} needs generators through dimension {needed}, but the polygraph is truncated at {max_dim}")]
    Truncation { requested: usize, needed: usize, max_dim: usize },
    #[error(transparent)]
    Homalg(#[from] HomalgError),
}

/// λ of a polygraph, with bases labeled by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaComplex {
    pub complex: ChainComplex,
    pub basis: Vec<Vec<GeneratorId>>,
}

impl LambdaComplex {
    /// Coordinates of `d(g)` in the basis of degree `dim(g) - 1`.
    pub fn boundary_of(&self, g: &GeneratorId) -> Option<Vec<BigInt>> {
        let d = self.complex.differential(g.dim)?;
        let j = self.basis[g.dim].iter().position(|x| x == g)?;
        Some((0..d.rows()).map(|i| d[(i, j)].clone()).collect())
    }
}

/// Builds λ(p), one degree per dimension up to the truncation bound.
pub fn lambda(p: &Polygraph) -> Result<LambdaComplex, AbelianizeError> {
    let report = p.validate();
    if !report.is_ok() {
        return Err(AbelianizeError::Invalid(report.violations));
    }
    let top = p.max_dim();
    let basis: Vec<Vec<GeneratorId>> =
        (0..=top).map(|n| p.basis(n).into_iter().cloned().collect()).collect();
    let ranks: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut differentials = Vec::with_capacity(top);
    for n in 1..=top {
        let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        for (j, g) in basis[n].iter().enumerate() {
            let gen = p.generator(g).expect("basis generator");
            let (Some(s), Some(t)) = (&gen.source, &gen.target) else {
                unreachable!("validated generator without boundary");
            };
            let diff = &t.linearize()? - &s.linearize()?;
            for (h, c) in diff.iter() {
                let i = basis[n - 1].iter().position(|x| x == h).expect("validated reference");
                d[(i, j)] = c.clone();
            }
        }
        differentials.push(d);
    }
    let labels = basis.iter().map(|b| b.iter().map(|g| g.name.to_string()).collect()).collect();
    let complex = ChainComplex::new(ranks, differentials)?.with_labels(labels)?;
    Ok(LambdaComplex { complex, basis })
}

/// Homology of λ(p) in degrees `0..=up_to`.
///
/// `p` is trusted to be (a truncation of) a polygraphic resolution. Degrees
/// at or above the truncation bound are refused unless `complete` says the
/// polygraph has no generators beyond it.
pub fn polygraphic_homology(
    p: &Polygraph,
    up_to: usize,
    complete: bool,
) -> Result<Vec<HomologyGroup>, AbelianizeError> {
    let max_dim = p.max_dim();
    if up_to > max_dim || (up_to == max_dim && !complete) {
        return Err(AbelianizeError::Truncation { requested: up_to, needed: up_to + 1, max_dim });
    }
    let lam = lambda(p)?;
    let top = if complete { TopDegree::Allow } else { TopDegree::Refuse };
    Ok(lam.complex.homology_upto(up_to, top)?)
}
