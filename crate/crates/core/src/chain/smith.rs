//! Smith normal form over the integers with unimodular transform tracking.
//!
//! Correctness over speed: dense big-integer arithmetic, Euclidean pivot
//! reduction, and the divisibility chain asserted after every run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a += q * row_b
    pub fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = self.get(b, j) * q;
            let cur = self.get(a, j).clone();
            self.set(a, j, cur + add);
        }
    }

    /// col_a += q * col_b
    pub fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = self.get(i, b) * q;
            let cur = self.get(i, a).clone();
            self.set(i, a, cur + add);
        }
    }

    pub fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            self.set(a, j, v);
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + add);
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination; test-scale only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

/// `left * a * right = diag(diagonal)` with unimodular transforms and the
/// divisibility chain `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct SmithCertificate {
    pub diagonal: Vec<BigInt>,
    pub left: Matrix,
    pub right: Matrix,
    pub rank: usize,
}

impl SmithCertificate {
    /// Full transform check `left * a * right == diag`; intended for small
    /// instances in tests.
    pub fn verify_transforms(&self, a: &Matrix) -> bool {
        let prod = self.left.mul(a).mul(&self.right);
        for i in 0..prod.rows() {
            for j in 0..prod.cols() {
                let expect = if i == j && i < self.diagonal.len() {
                    self.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                if *prod.get(i, j) != expect {
                    return false;
                }
            }
        }
        let du = self.left.determinant().abs();
        let dv = self.right.determinant().abs();
        du.is_one() && dv.is_one()
    }

    fn assert_divisibility(&self) {
        for w in self.diagonal[..self.rank].windows(2) {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "divisibility chain violated: {} does not divide {}",
                w[0],
                w[1]
            );
        }
    }
}

/// Compute the Smith normal form of `a`.
pub fn smith_normal_form(a: &Matrix) -> SmithCertificate {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut left = Matrix::identity(rows);
    let mut right = Matrix::identity(cols);

    let mut k = 0usize;
    while k < rows.min(cols) {
        let Some((pi, pj)) = pivot_position(&m, k) else { break };
        m.swap_rows(k, pi);
        left.swap_rows(k, pi);
        m.swap_cols(k, pj);
        right.swap_cols(k, pj);
        if m.get(k, k).is_negative() {
            m.negate_row(k);
            left.negate_row(k);
        }
        loop {
            let mut clean = true;
            // clear column k
            for i in 0..rows {
                if i == k || m.get(i, k).is_zero() {
                    continue;
                }
                let (q, r) = m.get(i, k).div_mod_floor(m.get(k, k));
                let neg_q = -q;
                m.add_row_multiple(i, k, &neg_q);
                left.add_row_multiple(i, k, &neg_q);
                if !r.is_zero() {
                    m.swap_rows(i, k);
                    left.swap_rows(i, k);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // clear row k
            for j in 0..cols {
                if j == k || m.get(k, j).is_zero() {
                    continue;
                }
                let (q, r) = m.get(k, j).div_mod_floor(m.get(k, k));
                let neg_q = -q;
                m.add_col_multiple(j, k, &neg_q);
                right.add_col_multiple(j, k, &neg_q);
                if !r.is_zero() {
                    m.swap_cols(j, k);
                    right.swap_cols(j, k);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let pivot = m.get(k, k).clone();
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(m.get(i, j) % &pivot).is_zero() {
                        let one = BigInt::one();
                        m.add_row_multiple(k, i, &one);
                        left.add_row_multiple(k, i, &one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        k += 1;
    }

    let rank = k;
    let mut diagonal = Vec::with_capacity(rows.min(cols));
    for i in 0..rows.min(cols) {
        diagonal.push(m.get(i, i).clone());
    }
    let cert = SmithCertificate { diagonal, left, right, rank };
    cert.assert_divisibility();
    cert
}

fn pivot_position(m: &Matrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best {
                Some((_, _, cur)) if *cur <= a => {}
                _ => best = Some((i, j, a)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Solve `a x = b` exactly over the integers, if a solution exists.
pub fn solve(a: &Matrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows());
    let cert = smith_normal_form(a);
    let y = cert.left.mul_vec(b);
    let mut scaled = vec![BigInt::zero(); a.cols()];
    for (i, yi) in y.iter().enumerate() {
        if i < cert.rank {
            let (q, r) = yi.div_mod_floor(&cert.diagonal[i]);
            if !r.is_zero() {
                return None;
            }
            scaled[i] = q;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(cert.right.mul_vec(&scaled))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: Vec<Vec<i64>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    #[test]
    fn snf_known_matrix() {
        let m = from_rows(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let cert = smith_normal_form(&m);
        let d: Vec<i64> = cert.diagonal.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 3, 21, 0]);
        assert_eq!(cert.rank, 3);
        assert!(cert.verify_transforms(&m));
    }

    #[test]
    fn snf_diag_and_zero() {
        let m = from_rows(vec![vec![2, 0], vec![0, 3]]);
        let cert = smith_normal_form(&m);
        let d: Vec<i64> = cert.diagonal.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 6]);
        assert!(cert.verify_transforms(&m));

        let z = Matrix::zero(3, 2);
        let cert = smith_normal_form(&z);
        assert_eq!(cert.rank, 0);
        assert!(cert.verify_transforms(&z));
    }

    #[test]
    fn solve_examples() {
        // 3x = 6 solvable, 3x = 2 not
        let m = from_rows(vec![vec![3]]);
        assert_eq!(solve(&m, &[BigInt::from(6)]), Some(vec![BigInt::from(2)]));
        assert_eq!(solve(&m, &[BigInt::from(2)]), None);

        // inconsistent system outside the column space
        let m = from_rows(vec![vec![1], vec![0]]);
        assert_eq!(solve(&m, &[BigInt::from(1), BigInt::from(1)]), None);

        let m = from_rows(vec![vec![2, 4], vec![0, 6]]);
        let b = vec![BigInt::from(10), BigInt::from(12)];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    proptest::proptest! {
        #[test]
        fn snf_random_verifies(entries in proptest::collection::vec(-20i64..20, 12)) {
            let mut m = Matrix::zero(3, 4);
            for (idx, v) in entries.iter().enumerate() {
                m.set(idx / 4, idx % 4, BigInt::from(*v));
            }
            let cert = smith_normal_form(&m);
            proptest::prop_assert!(cert.verify_transforms(&m));
            for w in cert.diagonal[..cert.rank].windows(2) {
                proptest::prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }

        #[test]
        fn solve_random_consistent(entries in proptest::collection::vec(-9i64..9, 9),
                                   xs in proptest::collection::vec(-9i64..9, 3)) {
            let mut m = Matrix::zero(3, 3);
            for (idx, v) in entries.iter().enumerate() {
                m.set(idx / 3, idx % 3, BigInt::from(*v));
            }
            let x: Vec<BigInt> = xs.iter().map(|v| BigInt::from(*v)).collect();
            let b = m.mul_vec(&x);
            let got = solve(&m, &b).expect("consistent system must solve");
            proptest::prop_assert_eq!(m.mul_vec(&got), b);
        }
    }
}
