use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `S = U * M * V` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> impl Iterator<Item = &BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| &self.s[(i, i)]).take_while(|d| !d.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().count()
    }
}

/// Diagonalizes `m` by unimodular row and column operations.
///
/// Pivots are chosen by least absolute value. The diagonal comes out
/// nonnegative, in a divisibility chain, with zeros trailing.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = m.shape();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((i, j)) = s.min_abs_entry(t) else {
                return Smith { s, u, v };
            };
            s.swap_rows(t, i);
            u.swap_rows(t, i);
            s.swap_cols(t, j);
            v.swap_cols(t, j);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &s[(i, t)] / &pivot;
                if !q.is_zero() {
                    s.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &s[(t, j)] / &pivot;
                if !q.is_zero() {
                    s.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide everything left below it
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&s[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::from(1));
                    u.add_row_multiple(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, v }
}
