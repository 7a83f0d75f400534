//! Hard-coded orientals `O_0..O_3`.
//!
//! Generators of `O_n` are the increasing sequences in `0..=n`. A generator
//! `<i_0 ... i_k>` goes from the composite of its odd faces to the composite
//! of its even faces, so that λ(O_n) has the alternating-face differential:
//!
//! * `<ij>  : <i> -> <j>`
//! * `<ijk> : <ik> => <jk> *0 <ij>`
//! * `<ijkl>: (<kl> *0 <ijk>) *1 <ikl> ≡> (<jkl> *0 <ij>) *1 <ijl>`

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::nerve::classical_nerve;
use super::{CategoryError, FiniteCategory, MorId};
use crate::cell::{CellExpr, Polygraph};
use crate::homalg::{ChainComplex, IntMatrix};

pub const MAX_ORIENTAL: usize = 3;

/// Increasing sequences in `0..=n` of length 1 to `n + 1`, ordered by length
/// and then lexicographically. This is the generator order of `oriental(n)`.
pub fn oriental_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..=n + 1 {
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..(1 << (n + 1)) {
            if mask.count_ones() as usize == len {
                subsets.push((0..=n).filter(|&i| mask & (1 << i) != 0).collect());
            }
        }
        subsets.sort();
        out.extend(subsets);
    }
    out
}

/// Position of `seq` in [`oriental_sequences`]`(n)`.
pub fn oriental_generator_index(n: usize, seq: &[usize]) -> Option<usize> {
    oriental_sequences(n).iter().position(|s| s == seq)
}

pub fn oriental_name(seq: &[usize]) -> String {
    let digits: String = seq.iter().map(|i| format!("{i}")).collect();
    format!("<{digits}>")
}

fn cell(seq: &[usize]) -> CellExpr {
    CellExpr::gen(oriental_name(seq), seq.len() - 1)
}

/// The `n`-oriental for `n <= 3`.
pub fn oriental(n: usize) -> Result<Polygraph, CategoryError> {
    if n > MAX_ORIENTAL {
        return Err(CategoryError::UnsupportedDegree(n));
    }
    let mut p = Polygraph::new();
    for seq in oriental_sequences(n) {
        let name = oriental_name(&seq);
        let res = match *seq.as_slice() {
            [_] => p.add_object(&name),
            [i, j] => p.add_cell(&name, cell(&[i]), cell(&[j])),
            [i, j, k] => p.add_cell(&name, cell(&[i, k]), CellExpr::comp(0, cell(&[j, k]), cell(&[i, j]))),
            [i, j, k, l] => {
                let source = CellExpr::comp(1, CellExpr::comp(0, cell(&[k, l]), cell(&[i, j, k])), cell(&[i, k, l]));
                let target = CellExpr::comp(1, CellExpr::comp(0, cell(&[j, k, l]), cell(&[i, j])), cell(&[i, j, l]));
                p.add_cell(&name, source, target)
            }
            _ => unreachable!("sequence longer than 4"),
        };
        res.expect("oriental names are distinct");
    }
    p.set_max_dim(n);
    Ok(p)
}

/// Normalized chains of the nerve of `[n]` truncated at degree `n`, with the
/// nondegenerate simplex `i_0 < ... < i_k` renamed `<i_0...i_k>` and moved to
/// the position of that generator in `oriental(n)`. No entry is changed.
pub fn chain_nerve_in_oriental_basis(n: usize) -> ChainComplex {
    let c = FiniteCategory::chain(n);
    let nerve = classical_nerve(&c, n);
    let kappa = nerve.normalized_chains();
    let sequences = oriental_sequences(n);
    // position of each nondegenerate simplex in the oriental basis of its degree
    let perm: Vec<Vec<usize>> = (0..=n)
        .map(|k| {
            let basis: Vec<&Vec<usize>> = sequences.iter().filter(|s| s.len() == k + 1).collect();
            nerve
                .nondegenerate(k)
                .map(|(_, x)| {
                    let vertices: Vec<usize> = if k == 0 {
                        x.key.clone()
                    } else {
                        let mut v = vec![c.src(MorId(x.key[0])).0];
                        v.extend(x.key.iter().map(|&f| c.tgt(MorId(f)).0));
                        v
                    };
                    basis.iter().position(|s| **s == vertices).expect("a strictly increasing chain")
                })
                .collect()
        })
        .collect();
    let mut differentials = Vec::new();
    for (k, d) in kappa.differentials().iter().enumerate() {
        let mut e = IntMatrix::zeros(d.rows(), d.cols());
        for r in 0..d.rows() {
            for col in 0..d.cols() {
                e[(perm[k][r], perm[k + 1][col])] = d[(r, col)].clone();
            }
        }
        differentials.push(e);
    }
    let labels = (0..=n)
        .map(|k| sequences.iter().filter(|s| s.len() == k + 1).map(|s| oriental_name(s)).collect())
        .collect();
    ChainComplex::new(kappa.ranks().to_vec(), differentials)
        .and_then(|x| x.with_labels(labels))
        .expect("a permutation keeps the shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::{GeneratorId, Side};
    use alloc::string::ToString;

    #[test]
    fn sequences() {
        assert_eq!(oriental_sequences(0), [[0].to_vec()]);
        assert_eq!(oriental_sequences(2).len(), 7);
        assert_eq!(oriental_sequences(3).len(), 15);
        assert_eq!(oriental_generator_index(2, &[0, 2]), Some(4));
    }

    #[test]
    fn low_orientals_match_pictures() {
        let o1 = oriental(1).unwrap();
        let e = CellExpr::gen("<01>", 1);
        assert_eq!(o1.boundary(&e, Side::Source).unwrap(), CellExpr::gen("<0>", 0));
        assert_eq!(o1.boundary(&e, Side::Target).unwrap(), CellExpr::gen("<1>", 0));

        let o2 = oriental(2).unwrap();
        let top = CellExpr::gen("<012>", 2);
        assert_eq!(o2.boundary(&top, Side::Source).unwrap(), CellExpr::gen("<02>", 1));
        assert_eq!(
            o2.boundary(&top, Side::Target).unwrap(),
            CellExpr::comp(0, CellExpr::gen("<12>", 1), CellExpr::gen("<01>", 1))
        );
        assert_eq!(o2.iterated_boundary(&top, 0, Side::Target).unwrap(), CellExpr::gen("<2>", 0));
        assert_eq!(o2.iterated_boundary(&top, 0, Side::Source).unwrap(), CellExpr::gen("<0>", 0));
        let t = o2.boundary(&top, Side::Target).unwrap().linearize().unwrap();
        assert_eq!(t.to_string(), "<01> + <12>");
    }

    #[test]
    fn all_orientals_validate() {
        for n in 0..=3 {
            let o = oriental(n).unwrap();
            assert!(o.validate().is_ok(), "O_{n}: {:?}", o.validate());
            assert_eq!(o.basis(n), [&GeneratorId::new(oriental_name(&(0..=n).collect::<Vec<_>>()), n)]);
        }
        assert!(matches!(oriental(4), Err(CategoryError::UnsupportedDegree(4))));
    }

    #[test]
    fn lambda_of_orientals_is_the_nerve_of_the_simplex() {
        for n in 0..=3 {
            let lam = crate::abelianize::lambda(&oriental(n).unwrap()).unwrap();
            assert_eq!(lam.complex, chain_nerve_in_oriental_basis(n), "n = {n}");
        }
    }
}
