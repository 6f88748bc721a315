//! The non-orientable order-2 machinery: the complex where the obstruction
//! lives, its closed-form expansion, the parity certificate, the rewriting of
//! even-supported chains into odd-supported ones modulo boundaries, and the
//! combined verdict.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::binary::{binom_big, binom_parity, Parity};
use crate::chain::homology::{homology, is_boundary};
use crate::chain::{BasisLabel, ChainComplex, ChainElement, ChainMap};
use crate::error::{Error, Result};
use crate::models::{
    cyclic_complex, diagonal_map, pontryagin_map, twisted_complex_z2, DiagonalVariant,
    ProductTwist,
};

/// Parameters of one run: the manifold dimension is `n = 2^{r+1} - 2`, the
/// number of time steps is even `s = 2 sigma`, and the obstruction lives in a
/// `(s-1)`-slot complex alternating twisted and plain factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DSpec {
    pub r: u32,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub sigma: usize,
    /// True when `n` has the block form `2^{r+1} - 2`; the certificate is
    /// theorem-backed exactly there.
    pub theorem_scope: bool,
}

impl DSpec {
    /// The projective-space family: `n = 2^{r+1} - 2`.
    pub fn new(r: u32, s: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidInput("r must be at least 1".into()));
        }
        let n = (1usize << (r + 1)) - 2;
        Self::for_even_dim(n, s)
    }

    /// Any even dimension; flagged as outside the theorem-backed family when
    /// `n + 2` is not a power of two.
    pub fn for_even_dim(n: usize, s: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidInput(format!("dimension must be even and >= 2, got {n}")));
        }
        if s % 2 != 0 {
            return Err(Error::MethodInapplicable(
                "odd s admits no compatible coefficient module; the even-s method does not apply"
                    .into(),
            ));
        }
        if s < 2 || s > n {
            return Err(Error::MethodInapplicable(format!(
                "the certificate covers even s with 2 <= s <= n = {n}, got s = {s}"
            )));
        }
        let theorem_scope = (n + 2).is_power_of_two();
        let r = (n + 2).trailing_zeros().saturating_sub(1);
        Ok(Self { r, n, m: n / 2, s, sigma: s / 2, theorem_scope })
    }

    pub fn slot_count(&self) -> usize {
        self.s - 1
    }

    pub fn top_degree(&self) -> usize {
        self.s * self.n
    }
}

/// The complex `C~ (x) (C (x) C~)^{sigma-1}`, built through `max_deg`.
pub fn d_complex(spec: &DSpec, max_deg: usize) -> ChainComplex {
    let mut slots = twisted_complex_z2(max_deg).slots().to_vec();
    for _ in 1..spec.sigma {
        slots.extend(cyclic_complex(2, max_deg).slots().iter().cloned());
        slots.extend(twisted_complex_z2(max_deg).slots().iter().cloned());
    }
    ChainComplex::from_slots(slots)
}

/// The differential written out entry by entry: `-2 odd(u_i)` on twisted
/// slots and `+2 even(v_i)` on plain slots, each carrying the sign
/// `(-1)^{sum of the preceding entries}`, with negative entries read as zero.
pub fn d_differential_explicit(spec: &DSpec, label: &BasisLabel) -> Result<ChainElement> {
    if label.slot_count() != spec.slot_count() {
        return Err(Error::SlotMismatch { expected: spec.slot_count(), got: label.slot_count() });
    }
    let degree = label.degree();
    let mut out = ChainElement::zero(degree.saturating_sub(1));
    let factors = label.factors();
    let mut prefix = 0u64;
    for (i, &e) in factors.iter().enumerate() {
        let twisted = i % 2 == 0;
        let fires = if twisted { e % 2 == 1 } else { e % 2 == 0 && e > 0 };
        if fires {
            let base = if twisted { BigInt::from(-2) } else { BigInt::from(2) };
            let signed = if prefix % 2 == 0 { base } else { -base };
            let mut fs = factors.to_vec();
            fs[i] = e - 1;
            out.add_term(BasisLabel::new(fs), signed);
        }
        prefix += e as u64;
    }
    Ok(out)
}

/// One summand of the closed-form obstruction expansion.
#[derive(Debug, Clone)]
pub struct ExpansionTerm {
    pub deltas: Vec<u8>,
    pub ps: Vec<usize>,
    pub qs: Vec<usize>,
    pub sign: i8,
    pub binomial: BigUint,
    pub label: BasisLabel,
}

impl ExpansionTerm {
    pub fn signed_coefficient(&self) -> BigInt {
        let v = BigInt::from(self.binomial.clone());
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// Enumerate the expansion: over `delta_i in {0,1}` with no two consecutive
/// ones and splittings `p_i + q_i = m - delta_i`, each term carries the sign
/// `(-1)^{delta_2 + delta_4 + ...}`, the binomial product
/// `B_{m,p_1} B_{q_1,p_2} ... B_{q_{s-2},m}`, and the generator whose entries
/// are `n + 2 p_1 + delta_1`, the middle sums, and `n + 2 q_{s-2} + delta_{s-2}`.
pub fn expand_obstruction(spec: &DSpec, budget: u64) -> Result<Vec<ExpansionTerm>> {
    let estimate = term_count_estimate(spec);
    if estimate > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "about {estimate} expansion terms exceed the budget of {budget}; use the parity certificate instead"
        )));
    }
    let mut out = Vec::new();
    if spec.s == 2 {
        // no middle diagonals: the single product mu~([n] (x) [n])
        let m = spec.m as u64;
        out.push(ExpansionTerm {
            deltas: vec![],
            ps: vec![],
            qs: vec![],
            sign: 1,
            binomial: binom_big(m, m),
            label: BasisLabel::new(vec![(2 * spec.n) as u32]),
        });
        return Ok(out);
    }
    let k = spec.s - 2;
    let mut deltas = vec![0u8; k];
    enumerate_deltas(spec, &mut deltas, 0, &mut out);
    Ok(out)
}

fn term_count_estimate(spec: &DSpec) -> u128 {
    if spec.s == 2 {
        return 1;
    }
    // count delta patterns via the Fibonacci-style recursion and multiply by
    // the worst-case number of splittings per index
    let k = spec.s - 2;
    let (mut a, mut b) = (1u128, 2u128); // patterns of length 0, 1
    for _ in 1..k {
        let c = a.saturating_add(b);
        a = b;
        b = c;
    }
    let patterns = if k == 0 { 1 } else { b };
    patterns.saturating_mul((spec.m as u128 + 1).saturating_pow(k as u32))
}

fn enumerate_deltas(spec: &DSpec, deltas: &mut Vec<u8>, i: usize, out: &mut Vec<ExpansionTerm>) {
    let k = spec.s - 2;
    if i == k {
        let mut ps = vec![0usize; k];
        let mut qs = vec![0usize; k];
        enumerate_splittings(spec, deltas, &mut ps, &mut qs, 0, out);
        return;
    }
    for d in 0..=1u8 {
        if d == 1 && i > 0 && deltas[i - 1] == 1 {
            continue;
        }
        deltas[i] = d;
        enumerate_deltas(spec, deltas, i + 1, out);
    }
    deltas[i] = 0;
}

fn enumerate_splittings(
    spec: &DSpec,
    deltas: &[u8],
    ps: &mut Vec<usize>,
    qs: &mut Vec<usize>,
    i: usize,
    out: &mut Vec<ExpansionTerm>,
) {
    let k = spec.s - 2;
    if i == k {
        out.push(build_term(spec, deltas, ps, qs));
        return;
    }
    let total = spec.m - deltas[i] as usize;
    for p in 0..=total {
        ps[i] = p;
        qs[i] = total - p;
        enumerate_splittings(spec, deltas, ps, qs, i + 1, out);
    }
}

fn build_term(spec: &DSpec, deltas: &[u8], ps: &[usize], qs: &[usize]) -> ExpansionTerm {
    let k = spec.s - 2;
    let m = spec.m as u64;
    let mut binomial = binom_big(m, ps[0] as u64);
    for i in 0..k - 1 {
        binomial *= binom_big(qs[i] as u64, ps[i + 1] as u64);
    }
    binomial *= binom_big(qs[k - 1] as u64, m);
    // sign: parity of the sum of the even-indexed deltas (1-based)
    let mut exp = 0u32;
    for j in (1..k).step_by(2) {
        exp += deltas[j] as u32;
    }
    let mut entries = Vec::with_capacity(spec.slot_count());
    entries.push((spec.n + 2 * ps[0] + deltas[0] as usize) as u32);
    for i in 0..k - 1 {
        entries.push((2 * (qs[i] + ps[i + 1]) + deltas[i] as usize + deltas[i + 1] as usize) as u32);
    }
    entries.push((spec.n + 2 * qs[k - 1] + deltas[k - 1] as usize) as u32);
    ExpansionTerm {
        deltas: deltas.to_vec(),
        ps: ps.to_vec(),
        qs: qs.to_vec(),
        sign: if exp % 2 == 0 { 1 } else { -1 },
        binomial,
        label: BasisLabel::new(entries),
    }
}

/// Sum the expansion into a single chain of degree `s n`.
pub fn obstruction_aggregate(spec: &DSpec, budget: u64) -> Result<ChainElement> {
    let mut out = ChainElement::zero(spec.top_degree());
    for term in expand_obstruction(spec, budget)? {
        out.add_term(term.label.clone(), term.signed_coefficient());
    }
    Ok(out)
}

/// The same obstruction computed through the chain maps: middle diagonals
/// (alternating left and right twists) followed by pairwise products.
/// Feasible for small `sigma`; pins the sign conventions of the expansion.
pub fn twisted_chi_aggregate(spec: &DSpec) -> Result<ChainElement> {
    let max_deg = spec.top_degree() + 1;
    let twisted = Arc::new(twisted_complex_z2(max_deg));
    let id = ChainMap::identity(twisted.clone());
    let mut step1_parts: Vec<ChainMap> = Vec::with_capacity(spec.s);
    step1_parts.push(id.clone());
    for j in 2..spec.s {
        let variant =
            if j % 2 == 0 { DiagonalVariant::TwistLeft } else { DiagonalVariant::TwistRight };
        step1_parts.push(diagonal_map(2, variant, max_deg)?);
    }
    step1_parts.push(id);

    let mu_twisted = pontryagin_map(2, ProductTwist::Twisted, max_deg)?;
    let mu_plain = pontryagin_map(2, ProductTwist::Plain, max_deg)?;
    let mut step2_parts: Vec<ChainMap> = Vec::with_capacity(spec.s - 1);
    for pair in 0..spec.s - 1 {
        step2_parts
            .push(if pair % 2 == 0 { mu_twisted.clone() } else { mu_plain.clone() });
    }

    let composite = if spec.s == 2 {
        ChainMap::tensor(step2_parts)
    } else {
        ChainMap::tensor(step1_parts).then(ChainMap::tensor(step2_parts))
    };
    let source_label = BasisLabel::new(vec![spec.n as u32; spec.s]);
    composite.apply_label(&source_label)
}

/// Trace of the parity dynamic program.
#[derive(Debug, Clone, Serialize)]
pub struct DpTrace {
    /// True when no admissible `delta_1 = 0` term has an all-odd binomial
    /// product.
    pub holds: bool,
    pub states_explored: usize,
    /// Digest of the reachable-state set, for reproducibility records.
    pub reachable_digest: String,
}

/// Decide the parity certificate by forward reachability over states
/// `(index, q, delta)`: transitions require an odd binomial factor and
/// forbid consecutive deltas; acceptance means some all-odd product with
/// `delta_1 = 0` survives to the final factor.
pub fn parity_certificate_dp(spec: &DSpec) -> DpTrace {
    let m = spec.m;
    if spec.s == 2 {
        let odd = binom_parity(m as u64, m as u64) == Parity::Odd;
        return DpTrace {
            holds: !odd,
            states_explored: 1,
            reachable_digest: digest_states(&[(0, m, 0)]),
        };
    }
    let k = spec.s - 2;
    // reachable[(i, q, delta)]
    let mut current: Vec<(usize, usize, u8)> = Vec::new();
    for p1 in 0..=m {
        if binom_parity(m as u64, p1 as u64) == Parity::Odd {
            current.push((0, m - p1, 0));
        }
    }
    let mut states: Vec<(usize, usize, u8)> = current.clone();
    let mut accepted = false;
    for i in 1..k {
        let mut seen = vec![[false; 2]; m + 1];
        let mut next = Vec::new();
        for &(_, q, delta) in &current {
            for nd in 0..=1u8 {
                if delta == 1 && nd == 1 {
                    continue;
                }
                let total = m - nd as usize;
                for p in 0..=total {
                    if binom_parity(q as u64, p as u64) == Parity::Odd {
                        let nq = total - p;
                        if !seen[nq][nd as usize] {
                            seen[nq][nd as usize] = true;
                            next.push((i, nq, nd));
                        }
                    }
                }
            }
        }
        current = next;
        states.extend(current.iter().copied());
    }
    for &(_, q, _) in &current {
        if binom_parity(q as u64, m as u64) == Parity::Odd {
            accepted = true;
            break;
        }
    }
    states.sort_unstable();
    states.dedup();
    DpTrace {
        holds: !accepted,
        states_explored: states.len(),
        reachable_digest: digest_states(&states),
    }
}

fn digest_states(states: &[(usize, usize, u8)]) -> String {
    // order-independent FNV-style fold over the sorted state list
    let mut h: u64 = 0xcbf29ce484222325;
    for &(i, q, d) in states {
        for byte in
            i.to_le_bytes().into_iter().chain(q.to_le_bytes()).chain(std::iter::once(d))
        {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    format!("{h:016x}")
}

/// Result of rewriting a chain onto odd basis labels modulo boundaries.
#[derive(Debug, Clone)]
pub struct RewriteResult {
    /// The odd-supported representative.
    pub odd: ChainElement,
    /// A chain whose boundary is `input - odd`.
    pub witness: ChainElement,
}

/// Replace every even basis label (even first entry) of `c` by odd-label
/// terms modulo an explicit boundary: the relation fired by the odd tuple one
/// step above the even label trades `2 [even]` for odd-label terms.
///
/// Requires every even-label coefficient of `c` to be even; that is exactly
/// what the parity certificate guarantees for the obstruction.
pub fn rewrite_even_to_odd(spec: &DSpec, c: &ChainElement) -> Result<RewriteResult> {
    let complex = d_complex(spec, c.degree() + 1);
    let mut odd = ChainElement::zero(c.degree());
    let mut witness = ChainElement::zero(c.degree() + 1);
    let two = BigInt::from(2);
    for (label, coeff) in c.terms() {
        if label.factors()[0] % 2 == 1 {
            odd.add_term(label.clone(), coeff.clone());
            continue;
        }
        let half = coeff / &two;
        if &(&half * &two) != coeff {
            return Err(Error::InvalidInput(format!(
                "even label {label} carries odd coefficient {coeff}; the parity certificate does not apply"
            )));
        }
        let mut lifted = label.factors().to_vec();
        lifted[0] += 1;
        let lift = BasisLabel::new(lifted);
        // d[lift] = -2 [label] + (odd-label terms)
        let boundary = complex.differential(&lift);
        debug_assert_eq!(boundary.coeff(label), BigInt::from(-2));
        for (bl, bc) in boundary.terms() {
            if bl != label {
                debug_assert_eq!(bl.factors()[0] % 2, 1);
                odd.add_term(bl.clone(), bc * &half);
            }
        }
        witness.add_term(lift, -half);
    }
    debug_assert!(odd.terms().all(|(l, _)| l.factors()[0] % 2 == 1));
    debug_assert_eq!(complex.differential_of(&witness), c.minus(&odd));
    Ok(RewriteResult { odd, witness })
}

/// One evidence item in the non-orientable verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub outcome: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonorientVerdict {
    pub spec: DSpec,
    /// `TC_s < s n` certified.
    pub below_max: bool,
    pub theorem_backed: bool,
    pub dp: DpTrace,
    pub checks: Vec<CheckRecord>,
    pub citations: Vec<String>,
}

/// Degree-`sn` dimension cap for the direct linear-algebra oracle.
const ORACLE_DIMENSION_LIMIT: usize = 600;

/// Decide `TC_s < s n` for a non-orientable manifold with order-2 fundamental
/// group and `n = 2^{r+1} - 2`: torsion of the obstruction group plus the
/// parity certificate force the obstruction class to vanish. With `oracle`
/// set and small dimensions, additionally verify by solving for an integral
/// boundary preimage and by the odd rewriting.
pub fn decide_nonorientable(spec: &DSpec, oracle: bool, budget: u64) -> Result<NonorientVerdict> {
    let mut checks = Vec::new();
    let sn = spec.top_degree();

    // (a) the obstruction group is all torsion
    let dim_sn = d_complex(spec, sn).basis_size(sn);
    if dim_sn <= ORACLE_DIMENSION_LIMIT {
        let complex = d_complex(spec, sn + 2);
        let h = homology(&complex, sn)?;
        if h.free_rank != 0 {
            return Err(Error::InvalidInput(format!(
                "unexpected free rank {} in the obstruction degree",
                h.free_rank
            )));
        }
        checks.push(CheckRecord {
            name: "torsion".into(),
            outcome: format!("free rank 0 in degree {sn} (dimension {dim_sn}, invariant factors all finite)"),
        });
    } else {
        checks.push(CheckRecord {
            name: "torsion".into(),
            outcome: "every tensor factor chain has 2-torsion homology, so the obstruction group is torsion (Kunneth)".into(),
        });
    }

    // (b) the parity certificate
    let dp = parity_certificate_dp(spec);
    checks.push(CheckRecord {
        name: "parity-certificate".into(),
        outcome: format!(
            "{} (states explored: {})",
            if dp.holds { "every delta_1 = 0 coefficient is even" } else { "an odd delta_1 = 0 coefficient exists" },
            dp.states_explored
        ),
    });

    // (c) the direct oracle at small scale
    if oracle {
        if dim_sn > ORACLE_DIMENSION_LIMIT {
            checks.push(CheckRecord {
                name: "oracle".into(),
                outcome: format!("skipped: degree-{sn} dimension {dim_sn} exceeds {ORACLE_DIMENSION_LIMIT}"),
            });
        } else {
            let aggregate = obstruction_aggregate(spec, budget)?;
            let complex = d_complex(spec, sn + 1);
            if !complex.is_cycle(&aggregate) {
                return Err(Error::InvalidInput("the aggregate obstruction is not a cycle".into()));
            }
            let pre = is_boundary(&complex, &aggregate)?;
            let bounds = pre.is_some();
            checks.push(CheckRecord {
                name: "oracle-boundary".into(),
                outcome: if bounds {
                    "the aggregate obstruction is an exact integral boundary".into()
                } else {
                    "the aggregate obstruction is NOT a boundary".into()
                },
            });
            if dp.holds {
                let rewrite = rewrite_even_to_odd(spec, &aggregate)?;
                let diff = aggregate.minus(&rewrite.odd);
                let ok = complex.differential_of(&rewrite.witness) == diff
                    && is_boundary(&complex, &diff)?.is_some();
                checks.push(CheckRecord {
                    name: "oracle-odd-rewrite".into(),
                    outcome: if ok {
                        "odd-supported representative differs from the aggregate by a verified boundary".into()
                    } else {
                        "odd rewrite failed verification".into()
                    },
                });
                if !ok {
                    return Err(Error::InvalidInput("odd rewrite verification failed".into()));
                }
            }
            if bounds != dp.holds {
                return Err(Error::InvalidInput(
                    "the boundary oracle and the parity certificate disagree".into(),
                ));
            }
        }
    }

    let below_max = dp.holds;
    let citations = if below_max {
        vec![
            "torsion of the twisted coefficient homology".into(),
            "evenness of the delta_1 = 0 binomial products".into(),
            "odd-label subgroup is torsion-free, forcing the torsion class to vanish".into(),
        ]
    } else {
        vec!["parity certificate fails; no conclusion from this method".into()]
    };
    Ok(NonorientVerdict {
        spec: *spec,
        below_max,
        theorem_backed: spec.theorem_scope && below_max,
        dp,
        checks,
        citations,
    })
}
