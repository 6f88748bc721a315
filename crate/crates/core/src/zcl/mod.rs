//! Graded-commutative cohomology-ring arithmetic over a prime field for the
//! projective and lens families, tensor powers with Koszul signs, and the
//! kernel of the iterated cup product.

pub mod bounds;
pub mod search;

pub use bounds::{davis_zcl, lens_lower_bound, report_bounds, BoundLine, BoundReport, LensBound, ManifoldDescriptor, Pi1Family};
pub use search::{default_pool, exhaustive_zcl_tiny, search_zcl_lower, SearchOutcome};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// The coefficient ring of one tensor slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingSpec {
    /// `F_2[x] / x^{n+1}` with `|x| = 1`.
    Projective { n: usize },
    /// `F_p[x, y] / (x^2, y^{n+1})` with `|x| = 1`, `|y| = 2`, `p` odd.
    Lens { p: u64, n: usize },
}

impl RingSpec {
    pub fn prime(&self) -> u64 {
        match self {
            RingSpec::Projective { .. } => 2,
            RingSpec::Lens { p, .. } => *p,
        }
    }

    pub fn slot_dim(&self) -> usize {
        match self {
            RingSpec::Projective { n } => n + 1,
            RingSpec::Lens { n, .. } => 2 * (n + 1),
        }
    }

    pub fn top_degree(&self) -> usize {
        match self {
            RingSpec::Projective { n } => *n,
            RingSpec::Lens { n, .. } => 2 * n + 1,
        }
    }

    fn mono_degree(&self, idx: usize) -> usize {
        match self {
            RingSpec::Projective { .. } => idx,
            RingSpec::Lens { n, .. } => {
                let a = idx / (n + 1);
                let b = idx % (n + 1);
                a + 2 * b
            }
        }
    }

    fn mono_parity(&self, idx: usize) -> u32 {
        match self {
            RingSpec::Projective { .. } => (idx % 2) as u32,
            RingSpec::Lens { n, .. } => (idx / (n + 1)) as u32,
        }
    }

    /// Product of two slot monomials, if it survives the relations.
    fn mono_mul(&self, a: usize, b: usize) -> Option<usize> {
        match self {
            RingSpec::Projective { n } => {
                let e = a + b;
                (e <= *n).then_some(e)
            }
            RingSpec::Lens { n, .. } => {
                let (xa, ya) = (a / (n + 1), a % (n + 1));
                let (xb, yb) = (b / (n + 1), b % (n + 1));
                let x = xa + xb;
                let y = ya + yb;
                (x <= 1 && y <= *n).then_some(x * (n + 1) + y)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RingSpec::Projective { n } => format!("F_2[x]/x^{} (P^{n})", n + 1),
            RingSpec::Lens { p, n } => format!("F_{p}[x,y]/(x^2, y^{}) (dim {})", n + 1, 2 * n + 1),
        }
    }
}

/// A homogeneous element of the s-fold tensor power, stored sparsely as
/// sorted (monomial index, nonzero residue) pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElement {
    pub degree: usize,
    pub terms: Vec<(u64, u32)>,
}

impl RingElement {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rescale so the leading coefficient is 1; products of zero divisors
    /// stay nonzero under scaling, which keeps search layers small.
    pub fn normalized(&self, p: u64) -> Self {
        let Some(&(_, lead)) = self.terms.first() else { return self.clone() };
        if lead == 1 {
            return self.clone();
        }
        let inv = mod_pow(lead as u64, p - 2, p) as u32;
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|&(m, c)| (m, ((c as u64 * inv as u64) % p) as u32)).collect(),
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Hard cap on the dense dimension of the tensor ring.
const TABLE_CAP: u64 = 1 << 24;

/// The s-fold graded tensor power of a slot ring.
#[derive(Debug, Clone)]
pub struct TensorRing {
    pub spec: RingSpec,
    pub s: usize,
    slot_dim: u64,
    size: u64,
}

impl TensorRing {
    pub fn new(spec: RingSpec, s: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidInput("the tensor power needs s >= 2".into()));
        }
        if let RingSpec::Lens { p, .. } = spec {
            if p < 3 || (2..p).any(|d| p % d == 0) {
                return Err(Error::InvalidInput(format!("lens rings need an odd prime, got {p}")));
            }
        }
        let slot_dim = spec.slot_dim() as u64;
        let size = slot_dim.checked_pow(s as u32).filter(|&v| v <= TABLE_CAP).ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "tensor ring dimension {slot_dim}^{s} exceeds the 2^24 cap"
            ))
        })?;
        Ok(Self { spec, s, slot_dim, size })
    }

    pub fn prime(&self) -> u64 {
        self.spec.prime()
    }

    pub fn dimension(&self) -> u64 {
        self.size
    }

    pub fn top_degree(&self) -> usize {
        self.spec.top_degree() * self.s
    }

    fn decode(&self, mut idx: u64) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.s);
        for _ in 0..self.s {
            out.push((idx % self.slot_dim) as usize);
            idx /= self.slot_dim;
        }
        out
    }

    fn encode(&self, slots: &[usize]) -> u64 {
        let mut idx = 0u64;
        for &m in slots.iter().rev() {
            idx = idx * self.slot_dim + m as u64;
        }
        idx
    }

    pub fn mono_degree(&self, idx: u64) -> usize {
        self.decode(idx).iter().map(|&m| self.spec.mono_degree(m)).sum()
    }

    /// The monomial with the slot-`i` variable of the given slot index.
    pub fn slot_monomial(&self, slot: usize, mono: usize) -> RingElement {
        let mut slots = vec![0usize; self.s];
        slots[slot] = mono;
        RingElement {
            degree: self.spec.mono_degree(mono),
            terms: vec![(self.encode(&slots), 1)],
        }
    }

    pub fn from_terms(&self, degree: usize, terms: Vec<(u64, u32)>) -> RingElement {
        let p = self.prime();
        let mut map: BTreeMap<u64, u64> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_default() += c as u64;
        }
        RingElement {
            degree,
            terms: map
                .into_iter()
                .filter_map(|(m, c)| {
                    let c = (c % p) as u32;
                    (c != 0).then_some((m, c))
                })
                .collect(),
        }
    }

    /// Graded product with the interchange sign over slot pairs.
    pub fn mul(&self, u: &RingElement, w: &RingElement) -> RingElement {
        let p = self.prime();
        let mut acc: BTreeMap<u64, u64> = BTreeMap::new();
        for &(mu, cu) in &u.terms {
            let du = self.decode(mu);
            for &(mw, cw) in &w.terms {
                let dw = self.decode(mw);
                let mut prod = Vec::with_capacity(self.s);
                let mut alive = true;
                for i in 0..self.s {
                    match self.spec.mono_mul(du[i], dw[i]) {
                        Some(m) => prod.push(m),
                        None => {
                            alive = false;
                            break;
                        }
                    }
                }
                if !alive {
                    continue;
                }
                let mut exp = 0u32;
                if p != 2 {
                    for i in 0..self.s {
                        let pw = self.spec.mono_parity(dw[i]);
                        if pw == 0 {
                            continue;
                        }
                        for j in i + 1..self.s {
                            exp += pw * self.spec.mono_parity(du[j]);
                        }
                    }
                }
                let mut c = cu as u64 * cw as u64 % p;
                if exp % 2 == 1 && c != 0 {
                    c = p - c;
                }
                let e = acc.entry(self.encode(&prod)).or_default();
                *e = (*e + c) % p;
            }
        }
        RingElement {
            degree: u.degree + w.degree,
            terms: acc.into_iter().filter_map(|(m, c)| (c != 0).then_some((m, c as u32))).collect(),
        }
    }

    /// Multiply the slot components into the base ring (the effect of the
    /// iterated cup product); returns dense base-ring coefficients.
    pub fn cup_image(&self, u: &RingElement) -> Vec<u32> {
        let p = self.prime();
        let mut out = vec![0u64; self.spec.slot_dim()];
        for &(m, c) in &u.terms {
            let slots = self.decode(m);
            let mut acc = Some(0usize);
            for &mono in &slots {
                acc = acc.and_then(|cur| self.spec.mono_mul(cur, mono));
            }
            if let Some(target) = acc {
                out[target] = (out[target] + c as u64) % p;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    pub fn is_zero_divisor(&self, u: &RingElement) -> bool {
        self.cup_image(u).iter().all(|&c| c == 0)
    }

    /// All tensor monomials of the given total degree, ascending.
    pub fn monomials_of_degree(&self, degree: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let mut slots = vec![0usize; self.s];
        self.collect_monomials(degree, 0, &mut slots, &mut out);
        out.sort_unstable();
        out
    }

    fn collect_monomials(&self, remaining: usize, slot: usize, slots: &mut Vec<usize>, out: &mut Vec<u64>) {
        if slot == self.s {
            if remaining == 0 {
                out.push(self.encode(slots));
            }
            return;
        }
        for m in 0..self.spec.slot_dim() {
            let d = self.spec.mono_degree(m);
            if d <= remaining {
                slots[slot] = m;
                self.collect_monomials(remaining - d, slot + 1, slots, out);
            }
        }
        slots[slot] = 0;
    }

    /// A basis of the degree-`d` kernel of the cup image, via mod-p
    /// elimination on the cup matrix.
    pub fn kernel_basis(&self, degree: usize) -> Vec<RingElement> {
        let p = self.prime();
        let monos = self.monomials_of_degree(degree);
        if monos.is_empty() {
            return vec![];
        }
        let base_dim = self.spec.slot_dim();
        // rows: base monomials, cols: tensor monomials
        let mut matrix: Vec<Vec<u64>> = vec![vec![0; monos.len()]; base_dim];
        for (j, &m) in monos.iter().enumerate() {
            let mono = RingElement { degree, terms: vec![(m, 1)] };
            for (i, &c) in self.cup_image(&mono).iter().enumerate() {
                matrix[i][j] = c as u64;
            }
        }
        // row-reduce, tracking pivot columns
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0usize;
        for col in 0..monos.len() {
            let Some(pr) = (rank..base_dim).find(|&r| matrix[r][col] % p != 0) else { continue };
            matrix.swap(rank, pr);
            let inv = mod_pow(matrix[rank][col], p - 2, p);
            for x in matrix[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..base_dim {
                if r != rank && matrix[r][col] != 0 {
                    let f = matrix[r][col];
                    for cc in 0..monos.len() {
                        matrix[r][cc] = (matrix[r][cc] + (p - f % p) * matrix[rank][cc]) % p;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == base_dim {
                break;
            }
        }
        // free columns give the kernel basis
        let mut basis = Vec::new();
        for free in 0..monos.len() {
            if pivots.contains(&free) {
                continue;
            }
            let mut terms: Vec<(u64, u32)> = vec![(monos[free], 1)];
            for (r, &pc) in pivots.iter().enumerate() {
                let v = matrix[r][free] % p;
                if v != 0 {
                    terms.push((monos[pc], (p - v) as u32));
                }
            }
            terms.sort_unstable();
            basis.push(RingElement { degree, terms });
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let r = TensorRing::new(RingSpec::Projective { n: 2 }, 3).unwrap();
        assert_eq!(r.dimension(), 27);
        let l = TensorRing::new(RingSpec::Lens { p: 3, n: 1 }, 2).unwrap();
        assert_eq!(l.dimension(), 16);
        assert!(TensorRing::new(RingSpec::Lens { p: 4, n: 1 }, 2).is_err());
    }

    #[test]
    fn odd_degree_slots_anticommute() {
        let ring = TensorRing::new(RingSpec::Lens { p: 3, n: 1 }, 2).unwrap();
        let x0 = ring.slot_monomial(0, 2); // x in slot 0 (index a=1,b=0 -> 2)
        let x1 = ring.slot_monomial(1, 2);
        let uv = ring.mul(&x0, &x1);
        let vu = ring.mul(&x1, &x0);
        assert_eq!(uv.terms.len(), 1);
        let neg = ring.from_terms(vu.degree, vu.terms.iter().map(|&(m, c)| (m, (3 - c) % 3)).collect());
        assert_eq!(uv, neg);
    }

    #[test]
    fn associativity_spot_checks() {
        for spec in [RingSpec::Projective { n: 2 }, RingSpec::Lens { p: 3, n: 1 }] {
            let ring = TensorRing::new(spec, 2).unwrap();
            // deterministic pseudo-random triples over low-degree monomials
            let mut seed = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed
            };
            let dim = ring.dimension();
            for _ in 0..100 {
                let a = RingElement {
                    degree: ring.mono_degree(next() % dim),
                    terms: vec![(next() % dim, 1)],
                };
                let a = RingElement { degree: ring.mono_degree(a.terms[0].0), ..a };
                let b_idx = next() % dim;
                let b = RingElement { degree: ring.mono_degree(b_idx), terms: vec![(b_idx, 1)] };
                let c_idx = next() % dim;
                let c = RingElement { degree: ring.mono_degree(c_idx), terms: vec![(c_idx, 1)] };
                let left = ring.mul(&ring.mul(&a, &b), &c);
                let right = ring.mul(&a, &ring.mul(&b, &c));
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn cup_image_and_zero_divisors() {
        let ring = TensorRing::new(RingSpec::Projective { n: 2 }, 3).unwrap();
        let x0 = ring.slot_monomial(0, 1);
        let x1 = ring.slot_monomial(1, 1);
        let sum = ring.from_terms(1, vec![(x0.terms[0].0, 1), (x1.terms[0].0, 1)]);
        assert!(ring.is_zero_divisor(&sum)); // 2x = 0 over F_2
        assert!(!ring.is_zero_divisor(&x0));
    }

    #[test]
    fn kernel_dimension_matches_rank_count() {
        let ring = TensorRing::new(RingSpec::Projective { n: 2 }, 3).unwrap();
        // degree 1: monomials x_1, x_2, x_3; cup is onto the 1-dim degree-1
        // part, kernel has dimension 2
        assert_eq!(ring.kernel_basis(1).len(), 2);
        for b in ring.kernel_basis(1) {
            assert!(ring.is_zero_divisor(&b));
        }
        // degree 3: cup image x^3 = 0, everything is a zero divisor
        let deg3 = ring.monomials_of_degree(3).len();
        assert_eq!(ring.kernel_basis(3).len(), deg3);
    }
}
