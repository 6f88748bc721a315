//! Binary-expansion combinatorics and exact/modular binomial arithmetic.
//!
//! Everything here is driven by the base-2 digits of an integer: the 2-adic
//! valuation `nu`, the block-start set `S(n)`, the digit complement `Z_i(n)`,
//! the defect `m_{n,s}` and the threshold in `s` past which the defect drops
//! to zero. Binomial coefficients come in three flavours: exact big-integer
//! values, residues mod a prime (Lucas), and parity via bit intersection.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// 2-adic valuation: the largest `k` with `2^k | n`.
pub fn nu(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidInput("nu(0) is undefined".into()));
    }
    Ok(n.trailing_zeros())
}

/// Positions of the 1-digits in the binary expansion of `k`.
pub fn bit_positions(k: u64) -> Vec<u32> {
    (0..64).filter(|i| k >> i & 1 == 1).collect()
}

/// All `i > 0` whose digit pattern reads `...0 1 1...` at positions
/// `i+1, i, i-1`: the left ends of blocks of at least two consecutive 1s.
pub fn block_starts(n: u64) -> Vec<u32> {
    (1..63)
        .filter(|&i| n >> (i + 1) & 1 == 0 && n >> i & 1 == 1 && n >> (i - 1) & 1 == 1)
        .collect()
}

/// Digit complement below position `i`: `sum_{j<=i} (1 - d_j) 2^j`.
pub fn z_complement(n: u64, i: u32) -> u64 {
    (0..=i.min(62)).map(|j| (1 - (n >> j & 1)) << j).sum()
}

/// The defect `m_{n,s} = max{2^{nu(n+1)} - 1, 2^{i+1} - 1 - s Z_i(n) : i in S(n)}`,
/// floored at zero.
///
/// The floor only matters when the valuation term is itself zero; a negative
/// maximum would push the cup-length past the trivial `s n` ceiling.
pub fn m_defect(n: u64, s: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("m_defect requires n >= 1".into()));
    }
    if s < 3 {
        return Err(Error::MethodInapplicable(
            "the closed form for the defect requires s >= 3; s = 2 is covered by the immersion-dimension literature".into(),
        ));
    }
    let mut best: i64 = (1i64 << nu(n + 1)?) - 1;
    for i in block_starts(n) {
        let term = (1i64 << (i + 1)) - 1 - (s as i64) * z_complement(n, i) as i64;
        best = best.max(term);
    }
    Ok(best.max(0) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Parity of the binomial coefficient `B_{i,j} = C(i+j, i)`.
///
/// `B_{i,j}` is even exactly when the binary supports of `i` and `j` meet
/// (a carry occurs when adding `i + j` in base 2).
pub fn binom_parity(i: u64, j: u64) -> Parity {
    if i & j == 0 {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Exact value of `B_{i,j} = C(i+j, i)`.
pub fn binom_big(i: u64, j: u64) -> BigUint {
    let k = i.min(j);
    let n = i + j;
    let mut acc = BigUint::one();
    for t in 0..k {
        acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    acc
}

/// `B_{i,j} mod p` for prime `p`, by Lucas' theorem (digitwise base-p binomials).
pub fn binom_mod(i: u64, j: u64, p: u64) -> Result<u64> {
    if p < 2 || !is_small_prime(p) {
        return Err(Error::InvalidInput(format!("binom_mod requires a prime modulus, got {p}")));
    }
    let mut n = i + j;
    let mut k = i;
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return Ok(0);
        }
        acc = acc * small_binom(nd, kd) % p;
        n /= p;
        k /= p;
    }
    Ok(acc)
}

fn small_binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for t in 0..k {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Outcome of the maximality threshold scan over `S(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// `m_{n,s} = 0` (equivalently maximal cup length) for every `s` at or
    /// above this value.
    Value(u64),
    /// Some `Z_i(n) = 0` makes the corresponding term positive for all `s`;
    /// the closed form then never certifies maximality. Unreachable for even
    /// `n`, where the 0 digit in position 0 forces `Z_i(n) >= 1`.
    NotDetermined,
}

/// Least `s` (at least 3) with `2^{i+1} - 1 <= s Z_i(n)` for every `i in S(n)`;
/// only stated for even `n`.
pub fn maximality_threshold(n: u64) -> Result<Threshold> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "maximality threshold is only defined for even n >= 2, got {n}"
        )));
    }
    let mut best = 3u64;
    for i in block_starts(n) {
        let z = z_complement(n, i);
        if z == 0 {
            return Ok(Threshold::NotDetermined);
        }
        let num = (1u64 << (i + 1)) - 1;
        best = best.max(num.div_ceil(z));
    }
    Ok(Threshold::Value(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    // Independent oracle for binomials: Pascal's rule over big integers.
    fn pascal(i: u64, j: u64) -> BigUint {
        let n = (i + j) as usize;
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one()];
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigUint::one());
            row = next;
        }
        row[i as usize].clone()
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu(12).unwrap(), 2);
        assert_eq!(nu(7).unwrap(), 0);
        assert!(nu(0).is_err());
        // nu(7) = 0 makes the valuation term of m_{6,s} vanish
        assert_eq!((1u64 << nu(7).unwrap()) - 1, 0);
    }

    #[test]
    fn bit_position_sets() {
        assert_eq!(bit_positions(5), vec![0, 2]);
        assert_eq!(bit_positions(42), vec![1, 3, 5]);
        assert_eq!(bit_positions(1), vec![0]);
    }

    #[test]
    fn block_start_sets() {
        assert_eq!(block_starts(6), vec![2]);
        assert!(block_starts(2).is_empty());
        assert_eq!(block_starts(14), vec![3]);
    }

    #[test]
    fn z_complement_values() {
        assert_eq!(z_complement(6, 2), 1);
        assert_eq!(z_complement(5, 0), 0);
        assert_eq!(z_complement(14, 3), 1);
    }

    #[test]
    fn defect_values() {
        assert_eq!(m_defect(6, 4).unwrap(), 3);
        assert_eq!(m_defect(6, 7).unwrap(), 0);
        for s in 3..=12 {
            assert_eq!(m_defect(5, s).unwrap(), 1);
        }
        assert!(m_defect(6, 2).is_err());
    }

    #[test]
    fn binom_parity_against_exact() {
        assert_eq!(binom_parity(1, 1), Parity::Even); // C(2,1) = 2
        assert_eq!(binom_parity(3, 4), Parity::Odd); // C(7,3) = 35
        for k in 0..20 {
            assert_eq!(binom_parity(k, 0), Parity::Odd);
        }
        for i in 0..=32u64 {
            for j in 0..=(64 - i) {
                let exact_odd = binom_big(i, j).to_u64().map(|v| v % 2 == 1).unwrap_or_else(|| {
                    (binom_big(i, j) % BigUint::from(2u8)) == BigUint::one()
                });
                assert_eq!(binom_parity(i, j).is_odd(), exact_odd, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn binom_big_matches_pascal() {
        assert_eq!(binom_big(3, 3), BigUint::from(20u8));
        for i in 0..=12 {
            for j in 0..=12 {
                assert_eq!(binom_big(i, j), pascal(i, j), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn binom_mod_matches_exact() {
        assert_eq!(binom_mod(3, 4, 3).unwrap(), 2); // 35 mod 3
        for p in [2u64, 3, 5, 7] {
            for i in 0..=20u64 {
                for j in 0..=(40 - i) {
                    let exact = binom_big(i, j) % BigUint::from(p);
                    assert_eq!(BigUint::from(binom_mod(i, j, p).unwrap()), exact, "i={i} j={j} p={p}");
                }
            }
        }
        assert_eq!(binom_mod(17, 0, 5).unwrap(), 1);
        assert!(binom_mod(1, 1, 4).is_err());
    }

    #[test]
    fn threshold_values() {
        assert_eq!(maximality_threshold(6).unwrap(), Threshold::Value(7));
        assert_eq!(maximality_threshold(2).unwrap(), Threshold::Value(3));
        assert_eq!(maximality_threshold(14).unwrap(), Threshold::Value(15));
        assert!(maximality_threshold(5).is_err());
    }

    #[test]
    fn block_family_pattern() {
        // n = 2^{r+1} - 2 has S(n) = {r}, m_{n,s} = max{0, 2^{r+1}-1-s},
        // threshold 2^{r+1} - 1.
        for r in 1..=8u32 {
            let n = (1u64 << (r + 1)) - 2;
            assert_eq!(block_starts(n), vec![r]);
            for s in 3..=(1u64 << (r + 1)) + 2 {
                let expect = ((1i64 << (r + 1)) - 1 - s as i64).max(0) as u64;
                assert_eq!(m_defect(n, s).unwrap(), expect);
            }
            assert_eq!(maximality_threshold(n).unwrap(), Threshold::Value((1 << (r + 1)) - 1));
        }
    }

    proptest::proptest! {
        #[test]
        fn complement_identity(n in 1u64..4096, i in 0u32..12) {
            let lhs = z_complement(n, i) + (n % (1 << (i + 1)));
            proptest::prop_assert_eq!(lhs, (1 << (i + 1)) - 1);
        }

        #[test]
        fn parity_matches_mod2(i in 0u64..200, j in 0u64..200) {
            let m = binom_mod(i, j, 2).unwrap();
            proptest::prop_assert_eq!(binom_parity(i, j).is_odd(), m == 1);
        }
    }
}
