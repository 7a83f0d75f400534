use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use polyhom_core::homalg::smith_normal_form;
use polyhom_core::{ChainComplex, HomologyGroup, IntMatrix, TopDegree};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows).unwrap())
    })
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// gcd of all k x k minors, by brute force over row and column subsets.
fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s & (1 << i) != 0).collect()).collect()
    }
    let mut g = BigInt::zero();
    for rows in subsets(m.rows(), k) {
        for cols in subsets(m.cols(), k) {
            let sub: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect()).collect();
            g = g.gcd(&IntMatrix::from_rows(k, &sub).unwrap().determinant());
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_is_correct(m in matrix(6)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.s.clone());
        prop_assert!(is_unit(&s.u.determinant()));
        prop_assert!(is_unit(&s.v.determinant()));
        let (r, c) = m.shape();
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.s[(i, j)].is_zero());
                } else {
                    prop_assert!(!s.s[(i, i)].is_negative());
                }
            }
        }
        let d: Vec<&BigInt> = s.invariant_factors().collect();
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(w[0]));
        }
        prop_assert_eq!(s.rank(), m.rank());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invariant_factors_match_minors(m in matrix(4)) {
        let s = smith_normal_form(&m);
        let d: Vec<BigInt> = s.invariant_factors().cloned().collect();
        let mut prev = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let g = minor_gcd(&m, k);
            let expected = if g.is_zero() { BigInt::zero() } else { &g / &prev };
            prop_assert_eq!(d.get(k - 1).cloned().unwrap_or_default(), expected.clone());
            if g.is_zero() {
                break;
            }
            prev = g;
        }
    }
}

/// A random unimodular matrix together with its inverse.
fn unimodular(n: usize, rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.random_bool(0.5) {
            u.negate_row(0);
            inv.negate_row(0);
        }
        return (u, inv);
    }
    for _ in 0..3 * n {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        match rng.random_range(0..3) {
            0 => {
                let c = BigInt::from(rng.random_range(-3i64..=3));
                u.add_row_multiple(a, b, &c);
                inv.add_col_multiple(b, a, &-c);
            }
            1 => {
                u.swap_rows(a, b);
                inv.swap_cols(a, b);
            }
            _ => {
                u.negate_row(a);
                // negating row a on the left is undone by negating column a on the right
                let mut t = inv.transpose();
                t.negate_row(a);
                inv = t.transpose();
            }
        }
    }
    (u, inv)
}

/// A divisibility chain `a_1 | a_2 | ...` of positive integers.
fn chain(len: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut out = Vec::new();
    let mut cur = 1i64;
    for _ in 0..len {
        cur *= rng.random_range(1..=3);
        out.push(cur);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// `C2 -> C1 -> C0` in diagonal form with known homology, then hidden
    /// behind random changes of basis in every degree.
    #[test]
    fn homology_is_invariant_under_basis_change(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, free2) = (rng.random_range(0..3), rng.random_range(0..3));
        let (s, f1, g0) = (rng.random_range(0..3), rng.random_range(0..3), rng.random_range(0..3));
        let a = chain(r, &mut rng);
        let b = chain(s, &mut rng);
        let (m2, m1, m0) = (r + free2, r + s + f1, s + g0);
        let mut d2 = IntMatrix::zeros(m1, m2);
        for (i, &x) in a.iter().enumerate() {
            d2[(i, i)] = BigInt::from(x);
        }
        let mut d1 = IntMatrix::zeros(m0, m1);
        for (j, &x) in b.iter().enumerate() {
            d1[(j, r + j)] = BigInt::from(x);
        }
        let expected = vec![
            HomologyGroup::with_torsion(g0, b.iter().copied().filter(|&x| x > 1)),
            HomologyGroup::with_torsion(f1, a.iter().copied().filter(|&x| x > 1)),
            HomologyGroup::free(free2),
        ];
        let (p0, _) = unimodular(m0, &mut rng);
        let (p1, p1inv) = unimodular(m1, &mut rng);
        let (_, p2inv) = unimodular(m2, &mut rng);
        prop_assert_eq!(&p1 * &p1inv, IntMatrix::identity(m1));
        let d1c = &(&p0 * &d1) * &p1inv;
        let d2c = &(&p1 * &d2) * &p2inv;
        let c = ChainComplex::new(vec![m0, m1, m2], vec![d1c, d2c]).unwrap();
        prop_assert!(c.verify());
        prop_assert_eq!(c.homology_upto(2, TopDegree::Allow).unwrap(), expected);
    }
}
