//! Cup-length search: an exhaustive engine for tiny rings and a pool-driven
//! lower-bound certifier for larger ones.

use std::collections::BTreeMap;

use super::{RingElement, RingSpec, TensorRing};
use crate::error::{Error, Result};

/// Cap on the per-degree kernel enumeration (number of spanned elements).
const KERNEL_ENUM_CAP: u64 = 1 << 20;

/// Total-dimension guard for the exhaustive engine.
const TINY_DIM_CAP: u64 = 100;

/// Exact zero-divisor cup length over all homogeneous kernel elements, for
/// rings of total dimension at most 100.
///
/// Restricting to homogeneous factors loses nothing: the kernel of the
/// degree-preserving cup product is graded, and a nonzero product of
/// inhomogeneous elements has a nonzero multihomogeneous component.
pub fn exhaustive_zcl_tiny(spec: RingSpec, s: usize) -> Result<u32> {
    let ring = TensorRing::new(spec, s)?;
    if ring.dimension() > TINY_DIM_CAP {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive search is capped at total dimension {TINY_DIM_CAP}, got {}",
            ring.dimension()
        )));
    }
    let p = ring.prime();
    let top = ring.top_degree();
    let mut generators: Vec<RingElement> = Vec::new();
    for d in 1..=top {
        let basis = ring.kernel_basis(d);
        if basis.is_empty() {
            continue;
        }
        let count = (p as u128).pow(basis.len() as u32);
        if count > KERNEL_ENUM_CAP as u128 {
            return Err(Error::BudgetExceeded(format!(
                "kernel enumeration in degree {d} spans {count} elements"
            )));
        }
        generators.extend(enumerate_span(&ring, &basis, p));
    }
    if generators.is_empty() {
        return Ok(0);
    }
    let mut layer: Vec<RingElement> = generators.clone();
    layer.sort_unstable();
    layer.dedup();
    let mut best = 1u32;
    loop {
        let mut next: Vec<RingElement> = Vec::new();
        for a in &layer {
            if a.degree >= top {
                continue;
            }
            for g in &generators {
                if a.degree + g.degree > top {
                    continue;
                }
                let prod = ring.mul(a, g);
                if !prod.is_zero() {
                    next.push(prod.normalized(p));
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return Ok(best);
        }
        best += 1;
        layer = next;
    }
}

/// All nonzero elements spanned by a basis, normalized to leading
/// coefficient 1 (scaling never changes whether a product vanishes).
fn enumerate_span(ring: &TensorRing, basis: &[RingElement], p: u64) -> Vec<RingElement> {
    let k = basis.len();
    let mut out = Vec::new();
    let mut coeffs = vec![0u32; k];
    loop {
        // increment base-p counter
        let mut i = 0;
        while i < k {
            coeffs[i] += 1;
            if (coeffs[i] as u64) < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        let mut terms: Vec<(u64, u32)> = Vec::new();
        for (c, b) in coeffs.iter().zip(basis) {
            if *c == 0 {
                continue;
            }
            for &(m, bc) in &b.terms {
                terms.push((m, ((*c as u64 * bc as u64) % p) as u32));
            }
        }
        let e = ring.from_terms(basis[0].degree, terms);
        if !e.is_zero() {
            out.push(e.normalized(p));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Outcome of the pool search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Longest nonzero product found.
    pub best: u32,
    /// Pool indices (sorted multiset) of a witness of that length.
    pub witness: Vec<usize>,
    /// True when the element budget truncated some layer; the result is then
    /// only pool-limited, not a refutation.
    pub pool_limited: bool,
}

/// Breadth-first search for the longest nonzero product of pool elements,
/// layered by factor count with deduplicated normalized partial products.
/// The witness kept per element is the lexicographically least index
/// multiset, so the outcome is deterministic.
pub fn search_zcl_lower(
    ring: &TensorRing,
    pool: &[RingElement],
    target: u32,
    budget: u64,
) -> Result<SearchOutcome> {
    if pool.is_empty() {
        return Err(Error::InvalidInput("the zero-divisor pool is empty".into()));
    }
    for (i, u) in pool.iter().enumerate() {
        if u.is_zero() || !ring.is_zero_divisor(u) {
            return Err(Error::InvalidInput(format!("pool element {i} is not a zero divisor")));
        }
    }
    let p = ring.prime();
    let top = ring.top_degree();
    let mut layer: BTreeMap<RingElement, Vec<usize>> = BTreeMap::new();
    for (i, u) in pool.iter().enumerate() {
        let key = u.normalized(p);
        update_witness(&mut layer, key, vec![i]);
    }
    let mut best = SearchOutcome {
        best: 1,
        witness: layer.values().min().cloned().unwrap_or_default(),
        pool_limited: false,
    };
    let mut work = 0u64;
    for length in 2..=target {
        let mut next: BTreeMap<RingElement, Vec<usize>> = BTreeMap::new();
        for (a, wit) in &layer {
            for (i, u) in pool.iter().enumerate() {
                if a.degree + u.degree > top {
                    continue;
                }
                work += 1;
                if work > budget {
                    best.pool_limited = true;
                    return Ok(best);
                }
                let prod = ring.mul(a, u);
                if prod.is_zero() {
                    continue;
                }
                let mut w = wit.clone();
                w.push(i);
                w.sort_unstable();
                update_witness(&mut next, prod.normalized(p), w);
            }
        }
        if next.is_empty() {
            return Ok(best);
        }
        best.best = length;
        best.witness = next.values().min().cloned().unwrap();
        layer = next;
    }
    Ok(best)
}

fn update_witness(layer: &mut BTreeMap<RingElement, Vec<usize>>, key: RingElement, wit: Vec<usize>) {
    match layer.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(wit);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            if wit < *o.get() {
                o.insert(wit);
            }
        }
    }
}

/// Re-validate a witness: every factor is a zero divisor and the product is
/// nonzero when recomputed from scratch.
pub fn revalidate_witness(ring: &TensorRing, pool: &[RingElement], witness: &[usize]) -> bool {
    if witness.is_empty() {
        return false;
    }
    let mut acc: Option<RingElement> = None;
    for &i in witness {
        if !ring.is_zero_divisor(&pool[i]) {
            return false;
        }
        acc = Some(match acc {
            None => pool[i].clone(),
            Some(a) => ring.mul(&a, &pool[i]),
        });
    }
    acc.map(|a| !a.is_zero()).unwrap_or(false)
}

/// The shipped default pool: even-weight degree-1 slot sums (differences for
/// odd primes) plus degree-2 monomial differences with equal cup image;
/// degree-2 monomials that already cup to zero enter on their own.
pub fn default_pool(ring: &TensorRing) -> Vec<RingElement> {
    let p = ring.prime();
    let s = ring.s;
    let mut pool: Vec<RingElement> = Vec::new();

    // degree-1 slot classes
    let deg1: Vec<u64> = ring
        .monomials_of_degree(1)
        .into_iter()
        .filter(|&m| {
            // one slot carries a degree-1 variable, the rest are 1
            ring.mono_degree(m) == 1
        })
        .collect();
    if p == 2 {
        // all even-weight subsets of the slot variables
        let vars: Vec<u64> = deg1;
        let k = vars.len().min(s);
        for mask in 1u64..(1 << k) {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let terms: Vec<(u64, u32)> =
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| (vars[i], 1)).collect();
            pool.push(ring.from_terms(1, terms));
        }
    } else {
        for i in 0..deg1.len() {
            for j in i + 1..deg1.len() {
                pool.push(ring.from_terms(1, vec![(deg1[i], 1), (deg1[j], (p - 1) as u32)]));
            }
        }
    }

    // degree-2 monomials grouped by cup image
    let deg2 = ring.monomials_of_degree(2);
    let mut by_image: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    for m in deg2 {
        let e = RingElement { degree: 2, terms: vec![(m, 1)] };
        by_image.entry(ring.cup_image(&e)).or_default().push(m);
    }
    for (image, monos) in by_image {
        if image.iter().all(|&c| c == 0) {
            for m in monos {
                pool.push(RingElement { degree: 2, terms: vec![(m, 1)] });
            }
        } else {
            let base = monos[0];
            for &m in &monos[1..] {
                pool.push(ring.from_terms(2, vec![(m, 1), (base, (p - 1) as u32)]));
            }
        }
    }

    pool.retain(|u| !u.is_zero() && ring.is_zero_divisor(u));
    pool
}
