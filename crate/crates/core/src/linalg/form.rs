use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Signature of a symmetric integer matrix, by exact congruence
/// diagonalization over the rationals.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut sig = 0;
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // a_kk = a_jj = 0: replace e_k by e_k + e_j
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
        let p = a[k][k].clone();
        if p.is_zero() {
            continue;
        }
        sig += if p.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
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
    sig
}

/// Determinant by fraction-free Bareiss elimination. The empty matrix has
/// determinant 1.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.into()).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::from(1)
    } else {
        prev * sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_forms() {
        assert_eq!(signature(&[]), 0);
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), 0);
        assert_eq!(signature(&[vec![2, -1], vec![-1, 2]]), 2);
        assert_eq!(signature(&[vec![-2, 1], vec![1, -2]]), -2);
        assert_eq!(signature(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(
            signature(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -3]]),
            -1
        );
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[]), BigInt::from(1));
        assert_eq!(determinant(&[vec![2, -1], vec![-1, 2]]), BigInt::from(3));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
    }
}
