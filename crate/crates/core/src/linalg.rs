//! Exact dense linear algebra over the rationals and integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Row echelon form in place; returns pivot columns.
pub fn row_reduce(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    row_reduce(&mut a).len()
}

/// Solve a square nonsingular system; `None` when singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let piv = row_reduce(&mut aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Integer determinant by fraction-free elimination.
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
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
    sign * &a[n - 1][n - 1]
}

/// Basis of the integer kernel `{x ∈ Z^n : M x = 0}`, saturated in `Z^n`.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    // Column-style HNF on [M; I]: unimodular column operations reduce M to
    // echelon form, and the identity block records them.
    let rows = m.len();
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c: Vec<BigInt> = m.iter().map(|r| r[j].clone()).collect();
            c.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();
    let mut start = 0;
    for r in 0..rows {
        loop {
            let nz: Vec<usize> = (start..n).filter(|&j| !cols[j][r].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    cols.swap(start, j);
                    start += 1;
                }
                break;
            }
            let jmin = *nz.iter().min_by_key(|&&j| cols[j][r].abs()).unwrap();
            for &j in &nz {
                if j != jmin {
                    let f = cols[j][r].div_floor(&cols[jmin][r]);
                    let pivot = cols[jmin].clone();
                    for (x, y) in cols[j].iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    cols[start..].iter().map(|c| c[rows..].to_vec()).collect()
}

pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn determinant() {
        assert_eq!(det_int(&bi(&[&[2, 1], &[1, 1]])), BigInt::from(1));
        assert_eq!(det_int(&bi(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]])), BigInt::from(-3));
        assert_eq!(det_int(&bi(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn solving() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&a, &[q(3), q(4)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(solve(&[vec![q(1), q(2)], vec![q(2), q(4)]], &[q(1), q(1)]).is_none());
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&bi(&[&[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        // lattice {x : x1 + 2x2 + 3x3 = 0} has determinant 1 generators
        for v in &k {
            let s: BigInt = &v[0] * 2 + &v[1] * 4 + &v[2] * 6;
            assert!(s.is_zero());
        }
        let minors = [
            &k[0][0] * &k[1][1] - &k[0][1] * &k[1][0],
            &k[0][0] * &k[1][2] - &k[0][2] * &k[1][0],
            &k[0][1] * &k[1][2] - &k[0][2] * &k[1][1],
        ];
        assert_eq!(gcd_vec(&minors), BigInt::one());
    }
}
