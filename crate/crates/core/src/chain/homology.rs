//! Homology of bounded complexes via Smith normal form, boundary solving,
//! and mod-p dimension counts.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::smith::{smith_normal_form, solve, Matrix};
use super::{BasisLabel, ChainComplex, ChainElement};
use crate::error::{Error, Result};

/// An abelian group `Z^rank + Z/t_1 + Z/t_2 + ...` with `t_1 | t_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self { free_rank: 0, torsion: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn cyclic(t: u64) -> Self {
        Self { free_rank: 0, torsion: vec![BigInt::from(t)] }
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: vec![] }
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z_{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The matrix of the differential `d_k : C_k -> C_{k-1}` with rows indexed by
/// the degree-`k-1` basis and columns by the degree-`k` basis.
pub fn differential_matrix(c: &ChainComplex, k: usize) -> Result<Matrix> {
    if k == 0 {
        return Ok(Matrix::zero(0, c.basis_size(0)));
    }
    c.check_degree(k)?;
    let rows_basis = c.basis(k - 1);
    let cols_basis = c.basis(k);
    let index: HashMap<&BasisLabel, usize> =
        rows_basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut m = Matrix::zero(rows_basis.len(), cols_basis.len());
    for (j, label) in cols_basis.iter().enumerate() {
        for (l, coeff) in c.differential(label).terms() {
            m.set(index[l], j, coeff.clone());
        }
    }
    Ok(m)
}

/// Integral homology `H_k(C)`; the complex must be built through `k + 1`.
pub fn homology(c: &ChainComplex, k: usize) -> Result<HomologyGroup> {
    c.check_degree(k + 1)?;
    let dim_k = c.basis_size(k);
    let rank_k = if k == 0 { 0 } else { smith_normal_form(&differential_matrix(c, k)?).rank };
    let cert_up = smith_normal_form(&differential_matrix(c, k + 1)?);
    let free_rank = dim_k - rank_k - cert_up.rank;
    let torsion: Vec<BigInt> = cert_up.diagonal[..cert_up.rank]
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    Ok(HomologyGroup { free_rank, torsion })
}

/// Dimension of `H_k(C; F_p)` for a prime `p`.
pub fn homology_dim_mod(c: &ChainComplex, k: usize, p: u64) -> Result<usize> {
    if p < 2 {
        return Err(Error::InvalidInput(format!("modulus must be a prime, got {p}")));
    }
    c.check_degree(k + 1)?;
    let dim_k = c.basis_size(k);
    let rank_k = if k == 0 { 0 } else { rank_mod_p(&differential_matrix(c, k)?, p) };
    let rank_up = rank_mod_p(&differential_matrix(c, k + 1)?, p);
    Ok(dim_k - rank_k - rank_up)
}

fn rank_mod_p(m: &Matrix, p: u64) -> usize {
    let p = p as i128;
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<i128>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let r = m.get(i, j) % BigInt::from(p);
                    let mut v = i128::try_from(&r).unwrap();
                    if v < 0 {
                        v += p;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| a[i][col] % p != 0) else { continue };
        a.swap(rank, pivot);
        let inv = mod_inverse(a[rank][col], p);
        for j in col..cols {
            a[rank][j] = a[rank][j] * inv % p;
        }
        for i in 0..rows {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col];
                for j in col..cols {
                    a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    // Fermat; p is prime and a nonzero mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1i128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Decide whether the cycle `z` bounds, returning an exact integer preimage
/// when it does. The complex must be built through `degree(z) + 1`.
pub fn is_boundary(c: &ChainComplex, z: &ChainElement) -> Result<Option<ChainElement>> {
    let d = z.degree();
    c.check_degree(d + 1)?;
    let bd = c.differential_of(z);
    if !bd.is_zero() {
        let label = bd.terms().next().unwrap().0.to_string();
        return Err(Error::NotACycle { label });
    }
    if z.is_zero() {
        return Ok(Some(ChainElement::zero(d + 1)));
    }
    let rows_basis = c.basis(d);
    let index: HashMap<&BasisLabel, usize> =
        rows_basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut b = vec![BigInt::zero(); rows_basis.len()];
    for (l, coeff) in z.terms() {
        let Some(&i) = index.get(l) else {
            return Err(Error::InvalidInput(format!("label {l} not in the degree-{d} basis")));
        };
        b[i] = coeff.clone();
    }
    let a = differential_matrix(c, d + 1)?;
    match solve(&a, &b) {
        None => Ok(None),
        Some(x) => {
            let cols_basis = c.basis(d + 1);
            let mut pre = ChainElement::zero(d + 1);
            for (j, coeff) in x.into_iter().enumerate() {
                pre.add_term(cols_basis[j].clone(), coeff);
            }
            debug_assert_eq!(c.differential_of(&pre), *z);
            Ok(Some(pre))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{tensor, tensor_power};
    use crate::models::{circle_complex, cyclic_complex, twisted_complex_z2};

    #[test]
    fn cyclic_homology_pattern() {
        for q in 2..=6u64 {
            let c = cyclic_complex(q, 12);
            assert_eq!(homology(&c, 0).unwrap(), HomologyGroup::free(1));
            for k in 1..=10usize {
                let h = homology(&c, k).unwrap();
                if k % 2 == 1 {
                    assert_eq!(h, HomologyGroup::cyclic(q), "H_{k} of Z_{q}");
                } else {
                    assert!(h.is_zero(), "H_{k} of Z_{q}");
                }
            }
        }
    }

    #[test]
    fn twisted_homology_pattern() {
        let c = twisted_complex_z2(14);
        for k in 0..=12usize {
            let h = homology(&c, k).unwrap();
            if k % 2 == 0 {
                assert_eq!(h, HomologyGroup::cyclic(2));
            } else {
                assert!(h.is_zero());
            }
        }
    }

    #[test]
    fn mod3_dimensions_of_z3_square() {
        let c = tensor(&cyclic_complex(3, 10), &cyclic_complex(3, 10));
        for k in 0..=8usize {
            assert_eq!(homology_dim_mod(&c, k, 3).unwrap(), k + 1);
        }
    }

    #[test]
    fn circle_powers_have_binomial_ranks() {
        let c = tensor_power(&circle_complex(8), 3);
        let expect = [1usize, 3, 3, 1];
        for k in 0..=3 {
            assert_eq!(homology(&c, k).unwrap(), HomologyGroup::free(expect[k]));
        }
        assert!(homology(&c, 4).unwrap().is_zero());
    }

    #[test]
    fn boundary_solving() {
        let c = twisted_complex_z2(14);
        let z: ChainElement = "20*[12]".parse().unwrap();
        let pre = is_boundary(&c, &z).unwrap().unwrap();
        assert_eq!(pre.to_string(), "-10*[13]");

        let zero = ChainElement::zero(5);
        assert!(is_boundary(&c, &zero).unwrap().unwrap().is_zero());

        let c3 = cyclic_complex(3, 6);
        let gen: ChainElement = "[1]".parse().unwrap();
        assert!(is_boundary(&c3, &gen).unwrap().is_none());
    }

    #[test]
    fn non_cycle_is_rejected_with_label() {
        let c = cyclic_complex(3, 6);
        let x: ChainElement = "[2]".parse().unwrap();
        match is_boundary(&c, &x) {
            Err(Error::NotACycle { label }) => assert_eq!(label, "[1]"),
            other => panic!("expected NotACycle, got {other:?}"),
        }
    }

    #[test]
    fn empty_complex_has_zero_homology() {
        let e = ChainComplex::empty(6);
        for k in 0..=5 {
            assert!(homology(&e, k).unwrap().is_zero());
        }
    }
}
