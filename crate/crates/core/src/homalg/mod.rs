//! Integer matrices, Smith normal form, chain complexes and their homology.

mod matrix;
mod snf;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, Smith};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomalgError {
    #[error("differential d{degree} has shape {found:?}, expected {expected:?}")]
    Shape { degree: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("expected {expected} differentials for {ranks} degrees, found {found}")]
    DifferentialCount { ranks: usize, expected: usize, found: usize },
    #[error("labels for degree {degree}: expected {expected}, found {found}")]
    Labels { degree: usize, expected: usize, found: usize },
    #[error("a chain complex needs at least degree 0")]
    Empty,
    #[error("degree {degree} is outside the complex (top degree {top})")]
    OutOfRange { degree: usize, top: usize },
    #[error("degree {degree} is the truncation degree; its homology is not reliable without the next differential")]
    Truncated { degree: usize },
}

/// Whether the top degree of a (possibly truncated) complex may be reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopDegree {
    /// The complex is a truncation; refuse to report its top degree.
    Refuse,
    /// The complex is complete; its top degree is honest.
    Allow,
}

/// A finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_m`,
/// with `t_1 | t_2 | ... | t_m` and every `t_i >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn with_torsion(rank: usize, torsion: impl IntoIterator<Item = i64>) -> Self {
        HomologyGroup { free_rank: rank, torsion: torsion.into_iter().map(BigInt::from).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let r = if first { Ok(()) } else { f.write_str(" + ") };
            first = false;
            r
        };
        match self.free_rank {
            0 => {}
            1 => {
                sep(f)?;
                f.write_str("Z")?
            }
            r => {
                sep(f)?;
                write!(f, "Z^{r}")?
            }
        }
        for t in &self.torsion {
            sep(f)?;
            write!(f, "Z/{t}")?;
        }
        Ok(())
    }
}

/// A bounded chain complex of free abelian groups of finite rank.
///
/// `d_n : C_n -> C_{n-1}` is stored as a `ranks[n-1] x ranks[n]` matrix,
/// column `j` holding the boundary of the `j`-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    differentials: Vec<IntMatrix>,
    labels: Option<Vec<Vec<String>>>,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self, HomalgError> {
        if ranks.is_empty() {
            return Err(HomalgError::Empty);
        }
        if differentials.len() != ranks.len() - 1 {
            return Err(HomalgError::DifferentialCount {
                ranks: ranks.len(),
                expected: ranks.len() - 1,
                found: differentials.len(),
            });
        }
        for (i, d) in differentials.iter().enumerate() {
            let expected = (ranks[i], ranks[i + 1]);
            if d.shape() != expected {
                return Err(HomalgError::Shape { degree: i + 1, expected, found: d.shape() });
            }
        }
        Ok(ChainComplex { ranks, differentials, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, HomalgError> {
        if labels.len() != self.ranks.len() {
            return Err(HomalgError::Labels { degree: labels.len(), expected: self.ranks.len(), found: labels.len() });
        }
        for (degree, (l, &r)) in labels.iter().zip(&self.ranks).enumerate() {
            if l.len() != r {
                return Err(HomalgError::Labels { degree, expected: r, found: l.len() });
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_n` for `1 <= n <= top_degree()`.
    pub fn differential(&self, n: usize) -> Option<&IntMatrix> {
        n.checked_sub(1).and_then(|i| self.differentials.get(i))
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// `d_n * d_{n+1} == 0` for every consecutive pair.
    pub fn verify(&self) -> bool {
        self.differentials.windows(2).all(|w| (&w[0] * &w[1]).is_zero())
    }

    /// Homology in degree `n`. Differentials beyond the stored range count as
    /// zero maps, which is only honest below the top degree unless `top` is
    /// [`TopDegree::Allow`].
    pub fn homology(&self, n: usize, top: TopDegree) -> Result<HomologyGroup, HomalgError> {
        self.check_degree(n, top)?;
        let rank_in = self.differential(n).map_or(0, IntMatrix::rank);
        let (rank_out, torsion) = match self.differential(n + 1) {
            Some(d) => {
                let smith = smith_normal_form(d);
                let torsion: Vec<BigInt> =
                    smith.invariant_factors().filter(|d| !d.is_one()).cloned().collect();
                (smith.rank(), torsion)
            }
            None => (0, Vec::new()),
        };
        Ok(HomologyGroup { free_rank: self.ranks[n] - rank_in - rank_out, torsion })
    }

    /// Homology in degrees `0..=up_to`, computing each Smith form once.
    pub fn homology_upto(&self, up_to: usize, top: TopDegree) -> Result<Vec<HomologyGroup>, HomalgError> {
        self.check_degree(up_to, top)?;
        let smiths: Vec<Smith> =
            self.differentials.iter().take(up_to + 1).map(smith_normal_form).collect();
        Ok((0..=up_to)
            .map(|n| {
                let rank_in = n.checked_sub(1).map_or(0, |i| smiths[i].rank());
                let (rank_out, torsion) = smiths.get(n).map_or((0, Vec::new()), |s| {
                    (s.rank(), s.invariant_factors().filter(|d| !d.is_one()).cloned().collect())
                });
                HomologyGroup { free_rank: self.ranks[n] - rank_in - rank_out, torsion }
            })
            .collect())
    }

    fn check_degree(&self, n: usize, top: TopDegree) -> Result<(), HomalgError> {
        let t = self.top_degree();
        if n > t {
            return Err(HomalgError::OutOfRange { degree: n, top: t });
        }
        if n == t && top == TopDegree::Refuse {
            return Err(HomalgError::Truncated { degree: n });
        }
        Ok(())
    }
}
