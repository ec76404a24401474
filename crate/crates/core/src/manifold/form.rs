//! Rank, signature and determinant of integral symmetric bilinear forms.

use nalgebra::{DMatrix, SymmetricEigen};
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Eigenvalues within this distance of zero count as zero.
pub const EIGENVALUE_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    pub signature: i64,
    pub determinant: BigInt,
}

pub(crate) fn check_symmetric(q: &[Vec<i64>]) -> Result<()> {
    let n = q.len();
    if q.iter().any(|row| row.len() != n) {
        return Err(Error::NonSquareForm);
    }
    for i in 0..n {
        for j in 0..i {
            if q[i][j] != q[j][i] {
                return Err(Error::AsymmetricForm);
            }
        }
    }
    Ok(())
}

/// Signature from the signs of the floating-point eigenvalues.
pub fn signature_by_eigenvalues(q: &[Vec<i64>]) -> Result<i64> {
    check_symmetric(q)?;
    let n = q.len();
    if n == 0 {
        return Ok(0);
    }
    let m = DMatrix::from_fn(n, n, |i, j| q[i][j] as f64);
    let eigen = SymmetricEigen::new(m);
    let positive = eigen.eigenvalues.iter().filter(|&&l| l > EIGENVALUE_ZERO).count() as i64;
    let negative = eigen.eigenvalues.iter().filter(|&&l| l < -EIGENVALUE_ZERO).count() as i64;
    Ok(positive - negative)
}

/// Exact diagonal of a form congruent to `q` over ℚ.
///
/// Every step is a determinant-one congruence, so the product of the
/// diagonal is the determinant of `q`.
pub fn congruence_diagonal(q: &[Vec<i64>]) -> Result<Vec<BigRational>> {
    check_symmetric(q)?;
    let n = q.len();
    let mut a: Vec<Vec<BigRational>> = q
        .iter()
        .map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect();

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Q(e_k + e_j) = 2·Q(e_k, e_j) ≠ 0 when both diagonal entries vanish.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for row in a.iter_mut().skip(k) {
                let v = &f * &row[k];
                row[i] -= v;
            }
        }
    }
    Ok((0..n).map(|i| a[i][i].clone()).collect())
}

/// Rank, signature and determinant, with the signature computed by two
/// independent routes that must agree.
pub fn form_invariants(q: &[Vec<i64>]) -> Result<FormInvariants> {
    let diagonal = congruence_diagonal(q)?;
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    let exact = diagonal.iter().filter(|d| d.is_positive()).count() as i64
        - diagonal.iter().filter(|d| d.is_negative()).count() as i64;
    let float = signature_by_eigenvalues(q)?;
    if float != exact {
        return Err(Error::SignatureMismatch { float, exact });
    }
    let determinant = diagonal.iter().fold(BigRational::one(), |acc, d| acc * d);
    debug_assert!(determinant.is_integer());
    Ok(FormInvariants {
        rank,
        signature: exact,
        determinant: determinant.to_integer(),
    })
}

/// The hyperbolic plane `[[0,1],[1,0]]`.
pub fn hyperbolic() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![1, 0]]
}

/// The positive definite E8 form (Cartan matrix of the E8 root system).
pub fn e8() -> Vec<Vec<i64>> {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut m = vec![vec![0; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        m[i][j] = -1;
        m[j][i] = -1;
    }
    m
}

pub fn negate(q: &[Vec<i64>]) -> Vec<Vec<i64>> {
    q.iter().map(|row| row.iter().map(|v| -v).collect()).collect()
}

/// Orthogonal direct sum.
pub fn direct_sum(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut m = vec![vec![0; n]; n];
    let mut offset = 0;
    for block in blocks {
        for (i, row) in block.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[offset + i][offset + j] = v;
            }
        }
        offset += block.len();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn invariants(q: &[Vec<i64>]) -> (usize, i64, i64) {
        let inv = form_invariants(q).unwrap();
        (inv.rank, inv.signature, inv.determinant.try_into().unwrap())
    }

    #[test]
    fn standard_forms() {
        assert_eq!(invariants(&[]), (0, 0, 1));
        assert_eq!(invariants(&[vec![1]]), (1, 1, 1));
        assert_eq!(invariants(&hyperbolic()), (2, 0, -1));
        assert_eq!(invariants(&e8()), (8, 8, 1));
        assert_eq!(invariants(&negate(&e8())), (8, -8, 1));
        let k3 = direct_sum(&[negate(&e8()), negate(&e8()), hyperbolic(), hyperbolic(), hyperbolic()]);
        assert_eq!(invariants(&k3), (22, -16, -1));
    }

    #[test]
    fn degenerate_forms() {
        assert_eq!(invariants(&[vec![0, 0], vec![0, 0]]), (0, 0, 0));
        assert_eq!(invariants(&[vec![2, 0], vec![0, 0]]), (1, 1, 0));
        assert_eq!(invariants(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]), (2, 0, 0));
    }

    #[test]
    fn malformed_forms() {
        assert!(matches!(form_invariants(&[vec![1, 2], vec![3, 1]]), Err(Error::AsymmetricForm)));
        assert!(matches!(form_invariants(&[vec![1, 2]]), Err(Error::NonSquareForm)));
    }

    fn block() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop_oneof![
            Just(vec![vec![1]]),
            Just(vec![vec![-1]]),
            Just(hyperbolic()),
            Just(e8()),
            Just(negate(&e8())),
        ]
    }

    /// `Pᵀ Q P` for `P` a product of elementary integer shears.
    fn congruent(q: &[Vec<i64>], shears: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
        let n = q.len();
        let mut m = q.to_vec();
        for &(i, j, c) in shears {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            for row in m.iter_mut() {
                row[i] += c * row[j];
            }
            for col in 0..n {
                let v = m[j][col];
                m[i][col] += c * v;
            }
        }
        m
    }

    proptest! {
        #[test]
        fn invariants_survive_integral_congruence(
            blocks in prop::collection::vec(block(), 1..4),
            shears in prop::collection::vec((0usize..32, 0usize..32, -2i64..=2), 0..6),
        ) {
            let q = direct_sum(&blocks);
            let base = form_invariants(&q).unwrap();
            let moved = congruent(&q, &shears);
            let inv = form_invariants(&moved).unwrap();
            prop_assert_eq!(inv.rank, base.rank);
            prop_assert_eq!(inv.signature, base.signature);
            prop_assert_eq!(inv.determinant, base.determinant);
        }
    }
}
