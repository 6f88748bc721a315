//! Small chain models for finitely generated abelian groups and their
//! chain-level structure maps: the diagonal, the Pontryagin product and the
//! inversion, in plain and twisted (orientation-coefficient) variants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::binary::binom_big;
use crate::chain::{BasisLabel, ChainComplex, ChainElement, ChainMap, SlotComplex};
use crate::error::{Error, Result};

/// A finitely generated abelian group as an ordered list of cyclic orders;
/// order 0 encodes an infinite cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<u64>,
    name: String,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a group needs at least one factor".into()));
        }
        if factors.iter().any(|&q| q == 1) {
            return Err(Error::InvalidInput("order-1 factors are trivial; drop them".into()));
        }
        let name = canonical_name(&factors);
        Ok(Self { factors, name })
    }

    pub fn cyclic(q: u64) -> Self {
        Self::new(vec![q]).unwrap()
    }

    pub fn free_abelian(r: usize) -> Result<Self> {
        Self::new(vec![0; r])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Primes dividing every finite factor order; for a group whose factors
    /// are all infinite this is empty.
    pub fn common_finite_primes(&self) -> Vec<u64> {
        let finite: Vec<u64> = self.factors.iter().copied().filter(|&q| q > 0).collect();
        if finite.is_empty() {
            return vec![];
        }
        let mut g = finite[0];
        for &q in &finite[1..] {
            g = gcd(g, q);
        }
        (2..=g).filter(|&p| g % p == 0 && (2..p).all(|d| p % d != 0)).collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn canonical_name(factors: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0usize;
    while i < factors.len() {
        if factors[i] == 0 {
            let mut r = 0;
            while i < factors.len() && factors[i] == 0 {
                r += 1;
                i += 1;
            }
            parts.push(if r == 1 { "Z".into() } else { format!("Z^{r}") });
        } else {
            parts.push(format!("Z_{}", factors[i]));
            i += 1;
        }
    }
    parts.join(" x ")
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `Z`, `Z^r`, `Z_q` joined by `x`; whitespace-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty group expression".into()));
        }
        let mut factors = Vec::new();
        for tok in compact.split('x') {
            if tok == "Z" {
                factors.push(0);
            } else if let Some(r) = tok.strip_prefix("Z^") {
                let r: usize =
                    r.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                if r == 0 {
                    return Err(Error::Parse("Z^0 is trivial".into()));
                }
                factors.extend(std::iter::repeat(0).take(r));
            } else if let Some(q) = tok.strip_prefix("Z_") {
                let q: u64 =
                    q.parse().map_err(|_| Error::Parse(format!("bad order in {tok:?}")))?;
                if q < 2 {
                    return Err(Error::Parse(format!("cyclic order must be >= 2, got {q}")));
                }
                factors.push(q);
            } else {
                return Err(Error::Parse(format!("unrecognized factor {tok:?}")));
            }
        }
        GroupSpec::new(factors)
    }
}

/// Coefficient flavour of a tensor slot: plain `C` or twisted `C~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Twist {
    Plain,
    Twisted,
}

/// Per-factor twist pattern; twisted slots are only meaningful for order 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotTwist(pub Vec<Twist>);

impl SlotTwist {
    pub fn all_plain(len: usize) -> Self {
        Self(vec![Twist::Plain; len])
    }
}

/// The cyclic complex: one generator per degree, `d[2k] = q [2k-1]`,
/// `d[2k-1] = 0`.
pub fn cyclic_complex(q: u64, max_deg: usize) -> ChainComplex {
    assert!(q >= 2);
    let gens = vec![true; max_deg + 1];
    let diff = (0..=max_deg)
        .map(|k| if k > 0 && k % 2 == 0 { BigInt::from(q) } else { BigInt::zero() })
        .collect();
    ChainComplex::single(format!("C(Z_{q})"), gens, diff)
}

/// The twisted complex for order 2: `d[2k+1] = -2 [2k]`, `d[2k] = 0`.
pub fn twisted_complex_z2(max_deg: usize) -> ChainComplex {
    let gens = vec![true; max_deg + 1];
    let diff =
        (0..=max_deg).map(|k| if k % 2 == 1 { BigInt::from(-2) } else { BigInt::zero() }).collect();
    ChainComplex::single("C~(Z_2)", gens, diff)
}

/// The circle model for an infinite cyclic factor: generators in degrees 0
/// and 1, zero differential.
pub fn circle_complex(max_deg: usize) -> ChainComplex {
    let mut gens = vec![false; max_deg + 1];
    gens[0] = true;
    if max_deg >= 1 {
        gens[1] = true;
    }
    ChainComplex::single("C(Z)", gens, vec![BigInt::zero(); max_deg + 1])
}

fn factor_complex(q: u64, twist: Twist, max_deg: usize) -> Result<ChainComplex> {
    match (q, twist) {
        (0, Twist::Plain) => Ok(circle_complex(max_deg)),
        (2, Twist::Twisted) => Ok(twisted_complex_z2(max_deg)),
        (q, Twist::Plain) if q >= 2 => Ok(cyclic_complex(q, max_deg)),
        (q, Twist::Twisted) => Err(Error::InvalidInput(format!(
            "twisted coefficients are only supported for order-2 factors, got order {q}"
        ))),
        _ => unreachable!(),
    }
}

/// Tensor over the group's factors of the per-factor complex.
pub fn group_complex(g: &GroupSpec, twist: &SlotTwist, max_deg: usize) -> Result<ChainComplex> {
    if twist.0.len() != g.factor_count() {
        return Err(Error::SlotMismatch { expected: g.factor_count(), got: twist.0.len() });
    }
    let mut slots: Vec<SlotComplex> = Vec::with_capacity(g.factor_count());
    for (&q, &t) in g.factors().iter().zip(&twist.0) {
        slots.extend(factor_complex(q, t, max_deg)?.slots().iter().cloned());
    }
    Ok(ChainComplex::from_slots(slots))
}

pub fn group_complex_plain(g: &GroupSpec, max_deg: usize) -> ChainComplex {
    group_complex(g, &SlotTwist::all_plain(g.factor_count()), max_deg).unwrap()
}

/// Variants of the chain-level diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalVariant {
    /// `C -> C (x) C` with coefficient `(q-1)q/2` on odd-odd splits.
    Plain,
    /// `C~ -> C~ (x) C` (order 2), all coefficients 1.
    TwistLeft,
    /// `C~ -> C (x) C~` (order 2), coefficient `(-1)^k` on `[k](x)[l]`.
    TwistRight,
}

/// The diagonal on the chosen one-factor model, as an explicit table.
pub fn diagonal_map(q: u64, variant: DiagonalVariant, max_deg: usize) -> Result<ChainMap> {
    let (source, target) = match variant {
        DiagonalVariant::Plain => {
            let c = if q == 0 { circle_complex(max_deg) } else { cyclic_complex(q, max_deg) };
            let t = crate::chain::tensor(&c, &c);
            (c, t)
        }
        DiagonalVariant::TwistLeft => {
            if q != 2 {
                return Err(Error::InvalidInput("twisted diagonal requires order 2".into()));
            }
            let s = twisted_complex_z2(max_deg);
            let t = crate::chain::tensor(&s, &cyclic_complex(2, max_deg));
            (s, t)
        }
        DiagonalVariant::TwistRight => {
            if q != 2 {
                return Err(Error::InvalidInput("twisted diagonal requires order 2".into()));
            }
            let s = twisted_complex_z2(max_deg);
            let t = crate::chain::tensor(&cyclic_complex(2, max_deg), &s);
            (s, t)
        }
    };
    let mut values = BTreeMap::new();
    for p in 0..=max_deg {
        if !source.has_label(&BasisLabel::new(vec![p as u32])) {
            continue;
        }
        let mut v = ChainElement::zero(p);
        for k in 0..=p {
            let l = p - k;
            if !target.has_label(&BasisLabel::new(vec![k as u32, l as u32])) {
                continue;
            }
            let coeff = match variant {
                DiagonalVariant::Plain => {
                    if k % 2 == 1 && l % 2 == 1 {
                        BigInt::from((q - 1) * q / 2)
                    } else {
                        BigInt::from(1)
                    }
                }
                DiagonalVariant::TwistLeft => BigInt::from(1),
                DiagonalVariant::TwistRight => {
                    if k % 2 == 1 {
                        BigInt::from(-1)
                    } else {
                        BigInt::from(1)
                    }
                }
            };
            v.add_term(BasisLabel::new(vec![k as u32, l as u32]), coeff);
        }
        values.insert(BasisLabel::new(vec![p as u32]), v);
    }
    Ok(ChainMap::table(Arc::new(source), Arc::new(target), values))
}

/// Twist pattern of a Pontryagin product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductTwist {
    /// `C (x) C -> C`.
    Plain,
    /// `C~ (x) C~ -> C~` (order 2 only).
    Twisted,
}

/// The Pontryagin product on the one-factor model:
/// `[2i] ^ [2k] = B_{i,k} [2(i+k)]`, mixed parities give `B_{i,k}` in odd
/// total degree, and odd-odd products vanish. For an infinite cyclic factor
/// this degenerates to the exterior product on the circle model.
pub fn pontryagin_map(q: u64, twist: ProductTwist, max_deg: usize) -> Result<ChainMap> {
    let factor = match (q, twist) {
        (0, ProductTwist::Plain) => circle_complex(max_deg),
        (0, ProductTwist::Twisted) => {
            return Err(Error::InvalidInput("no twisted product on an infinite factor".into()))
        }
        (2, ProductTwist::Twisted) => twisted_complex_z2(max_deg),
        (q, ProductTwist::Plain) if q >= 2 => cyclic_complex(q, max_deg),
        (q, ProductTwist::Twisted) => {
            return Err(Error::InvalidInput(format!(
                "twisted product is only supported for order 2, got {q}"
            )))
        }
        _ => unreachable!(),
    };
    let source = crate::chain::tensor(&factor, &factor);
    let mut values = BTreeMap::new();
    for a in 0..=max_deg {
        for b in 0..=max_deg.saturating_sub(a) {
            let label = BasisLabel::new(vec![a as u32, b as u32]);
            if !source.has_label(&label) {
                continue;
            }
            let v = pontryagin_value(a, b, max_deg, &factor);
            if !v.is_zero() {
                values.insert(label, v);
            }
        }
    }
    Ok(ChainMap::table(Arc::new(source), Arc::new(factor), values))
}

fn pontryagin_value(a: usize, b: usize, max_deg: usize, factor: &ChainComplex) -> ChainElement {
    let total = a + b;
    let mut out = ChainElement::zero(total);
    if total > max_deg {
        return out;
    }
    if a % 2 == 1 && b % 2 == 1 {
        return out;
    }
    let target = BasisLabel::new(vec![total as u32]);
    if !factor.has_label(&target) {
        return out;
    }
    let (i, k) = (a / 2, b / 2);
    out.add_term(target, BigInt::from(binom_big(i as u64, k as u64)));
    out
}

/// The inversion on the one-factor model: `j[i] = (q-1)^k [i]` for
/// `i in {2k, 2k-1}`; on the circle model `j[1] = -[1]`.
pub fn inversion_map(q: u64, max_deg: usize) -> ChainMap {
    let factor = if q == 0 { circle_complex(max_deg) } else { cyclic_complex(q, max_deg) };
    let mut values = BTreeMap::new();
    for i in 0..=max_deg {
        let label = BasisLabel::new(vec![i as u32]);
        if !factor.has_label(&label) {
            continue;
        }
        let coeff = if q == 0 {
            if i == 1 {
                BigInt::from(-1)
            } else {
                BigInt::from(1)
            }
        } else {
            let k = (i + 1) / 2;
            BigInt::from(q - 1).pow(k as u32)
        };
        values.insert(label.clone(), ChainElement::from_terms(i, vec![(label, coeff)]));
    }
    let c = Arc::new(factor);
    ChainMap::table(c.clone(), c, values)
}

/// Structure maps assembled componentwise over a product group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureMapKind {
    Diagonal,
    Pontryagin,
    Inversion,
    /// The difference map `chi(a, b) = a b^{-1}`: the product composed with
    /// inversion in the second argument.
    Chi,
}

fn per_factor_map(q: u64, kind: StructureMapKind, max_deg: usize) -> Result<ChainMap> {
    match kind {
        StructureMapKind::Diagonal => diagonal_map(q, DiagonalVariant::Plain, max_deg),
        StructureMapKind::Pontryagin => pontryagin_map(q, ProductTwist::Plain, max_deg),
        StructureMapKind::Inversion => Ok(inversion_map(q, max_deg)),
        StructureMapKind::Chi => {
            let product = pontryagin_map(q, ProductTwist::Plain, max_deg)?;
            let inv = inversion_map(q, max_deg);
            let factor = inv.source().clone();
            let id = ChainMap::identity(factor);
            Ok(ChainMap::tensor(vec![id, inv]).then(product))
        }
    }
}

/// Assemble a structure map for the full group from the per-factor maps,
/// interleaving slots with Koszul signs.
///
/// Per-factor maps take `arity` copies of the factor to `coarity` copies;
/// the group map takes `arity` copies of the group complex to `coarity`
/// copies, with slot blocks regrouped on each side.
pub fn group_structure_map(g: &GroupSpec, kind: StructureMapKind, max_deg: usize) -> Result<ChainMap> {
    let (arity, coarity) = match kind {
        StructureMapKind::Diagonal => (1usize, 2usize),
        StructureMapKind::Pontryagin | StructureMapKind::Chi => (2, 1),
        StructureMapKind::Inversion => (1, 1),
    };
    let factor_maps: Vec<ChainMap> =
        g.factors().iter().map(|&q| per_factor_map(q, kind, max_deg)).collect::<Result<_>>()?;
    let l = g.factor_count();
    let core = ChainMap::tensor(factor_maps);

    // copy-major -> factor-major on the source
    let mut assembled = if arity > 1 {
        let mut perm = vec![0usize; arity * l];
        for copy in 0..arity {
            for f in 0..l {
                perm[copy * l + f] = f * arity + copy;
            }
        }
        let source = Arc::new(crate::chain::tensor_power(&group_complex_plain(g, max_deg), arity));
        ChainMap::permutation(source, perm).then(core)
    } else {
        core
    };

    // factor-major -> copy-major on the target
    if coarity > 1 {
        let mut perm = vec![0usize; coarity * l];
        for f in 0..l {
            for copy in 0..coarity {
                perm[f * coarity + copy] = copy * l + f;
            }
        }
        let mid = assembled.target().clone();
        assembled = assembled.then(ChainMap::permutation(mid, perm));
    }
    Ok(assembled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::verify_chain_map;

    #[test]
    fn group_parsing_and_round_trip() {
        let g: GroupSpec = "Z^2 x Z_4".parse().unwrap();
        assert_eq!(g.factors(), &[0, 0, 4]);
        assert_eq!(g.to_string(), "Z^2 x Z_4");
        let g2: GroupSpec = " Z xZ x Z_4 ".parse().unwrap();
        assert_eq!(g, g2);
        let h: GroupSpec = "Z_3xZ_3".parse().unwrap();
        assert_eq!(h.to_string(), "Z_3 x Z_3");
        assert!("Z_1".parse::<GroupSpec>().is_err());
        assert!("K_3".parse::<GroupSpec>().is_err());
        // round trip: parse then serialize is the identity on canonical names
        for s in ["Z", "Z^3", "Z_2", "Z_2 x Z_3", "Z^2 x Z_4 x Z"] {
            let g: GroupSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
    }

    #[test]
    fn cyclic_and_twisted_differentials() {
        let c2 = cyclic_complex(2, 6);
        let d2 = c2.differential(&BasisLabel::new(vec![2]));
        assert_eq!(d2.to_string(), "2*[1]");
        assert!(c2.differential(&BasisLabel::new(vec![1])).is_zero());

        let t = twisted_complex_z2(6);
        assert_eq!(t.differential(&BasisLabel::new(vec![1])).to_string(), "-2*[0]");
        assert!(t.differential(&BasisLabel::new(vec![2])).is_zero());
    }

    #[test]
    fn plain_diagonal_table() {
        let d = diagonal_map(3, DiagonalVariant::Plain, 8).unwrap();
        let v = d.apply_label(&BasisLabel::new(vec![2])).unwrap();
        assert_eq!(v.to_string(), "1*[0,2] + 3*[1,1] + 1*[2,0]");
        let v0 = d.apply_label(&BasisLabel::new(vec![0])).unwrap();
        assert_eq!(v0.to_string(), "1*[0,0]");
        assert!(verify_chain_map(&d, 7).unwrap());

        // coefficient table: alpha_{kl} is 1 on even products and (q-1)q/2
        // on odd-odd splits, for every degree
        for q in 2..=6u64 {
            let d = diagonal_map(q, DiagonalVariant::Plain, 10).unwrap();
            for p in 0..=10usize {
                let v = d.apply_label(&BasisLabel::new(vec![p as u32])).unwrap();
                for (label, coeff) in v.terms() {
                    let (k, l) = (label.factors()[0], label.factors()[1]);
                    let expect = if k % 2 == 1 && l % 2 == 1 { (q - 1) * q / 2 } else { 1 };
                    assert_eq!(coeff, &BigInt::from(expect), "q={q} p={p} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn twisted_diagonals_are_chain_maps() {
        let left = diagonal_map(2, DiagonalVariant::TwistLeft, 10).unwrap();
        assert!(verify_chain_map(&left, 9).unwrap());
        let right = diagonal_map(2, DiagonalVariant::TwistRight, 10).unwrap();
        assert!(verify_chain_map(&right, 9).unwrap());
        let v = right.apply_label(&BasisLabel::new(vec![6])).unwrap();
        assert_eq!(
            v.to_string(),
            "1*[0,6] + -1*[1,5] + 1*[2,4] + -1*[3,3] + 1*[4,2] + -1*[5,1] + 1*[6,0]"
        );
        assert!(diagonal_map(3, DiagonalVariant::TwistLeft, 4).is_err());
    }

    #[test]
    fn corrupted_odd_odd_diagonal_still_satisfies_the_chain_map_law() {
        // The chain-map law on C(Z_q) does not see the odd-odd coefficient:
        // odd generators are cycles and the odd-odd targets of the law cancel
        // in symmetric pairs. What does break is the even-odd symmetry.
        let good = diagonal_map(3, DiagonalVariant::Plain, 8).unwrap();
        let source = good.source().clone();
        let target = good.target().clone();
        let mut corrupted = BTreeMap::new();
        let mut asymmetric = BTreeMap::new();
        for p in 0..=8usize {
            let label = BasisLabel::new(vec![p as u32]);
            let v = good.apply_label(&label).unwrap();
            let mut cv = ChainElement::zero(p);
            let mut av = ChainElement::zero(p);
            for (l, c) in v.terms() {
                let (k, m) = (l.factors()[0], l.factors()[1]);
                cv.add_term(l.clone(), if k % 2 == 1 && m % 2 == 1 { BigInt::from(1) } else { c.clone() });
                av.add_term(l.clone(), if (k, m) == (1, 2) { BigInt::from(5) } else { c.clone() });
            }
            corrupted.insert(label.clone(), cv);
            asymmetric.insert(label, av);
        }
        let corrupted = ChainMap::table(source.clone(), target.clone(), corrupted);
        assert!(verify_chain_map(&corrupted, 7).unwrap());
        let asymmetric = ChainMap::table(source, target, asymmetric);
        assert!(!verify_chain_map(&asymmetric, 7).unwrap());
    }

    #[test]
    fn pontryagin_values() {
        let p2 = pontryagin_map(2, ProductTwist::Plain, 12).unwrap();
        assert_eq!(p2.apply_label(&BasisLabel::new(vec![2, 2])).unwrap().to_string(), "2*[4]");
        assert!(p2.apply_label(&BasisLabel::new(vec![3, 5])).unwrap().is_zero());
        for k in 0..=6u32 {
            assert_eq!(
                p2.apply_label(&BasisLabel::new(vec![0, k])).unwrap().to_string(),
                format!("1*[{k}]")
            );
        }
        assert!(verify_chain_map(&p2, 11).unwrap());

        let pt = pontryagin_map(2, ProductTwist::Twisted, 12).unwrap();
        assert!(verify_chain_map(&pt, 11).unwrap());
        let p3 = pontryagin_map(3, ProductTwist::Plain, 12).unwrap();
        assert!(verify_chain_map(&p3, 11).unwrap());
        assert!(pontryagin_map(3, ProductTwist::Twisted, 6).is_err());
    }

    #[test]
    fn pontryagin_is_unital_and_graded_commutative() {
        for q in [2u64, 3, 5] {
            let p = pontryagin_map(q, ProductTwist::Plain, 12).unwrap();
            for a in 0..=12u32 {
                for b in 0..=(12 - a) {
                    let ab = p.apply_label(&BasisLabel::new(vec![a, b])).unwrap();
                    let ba = p.apply_label(&BasisLabel::new(vec![b, a])).unwrap();
                    // only the odd-odd sign can distinguish them, and those
                    // products vanish; the table is symmetric on the nose
                    assert_eq!(ab, ba, "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn inversion_values() {
        let j3 = inversion_map(3, 8);
        assert_eq!(j3.apply_label(&BasisLabel::new(vec![4])).unwrap().to_string(), "4*[4]");
        assert_eq!(j3.apply_label(&BasisLabel::new(vec![0])).unwrap().to_string(), "1*[0]");
        assert_eq!(j3.apply_label(&BasisLabel::new(vec![3])).unwrap().to_string(), "4*[3]");
        assert!(verify_chain_map(&j3, 7).unwrap());

        let j2 = inversion_map(2, 12);
        for i in 0..=12u32 {
            assert_eq!(
                j2.apply_label(&BasisLabel::new(vec![i])).unwrap().to_string(),
                format!("1*[{i}]")
            );
        }
    }

    #[test]
    fn group_complex_basis() {
        let g: GroupSpec = "Z_3 x Z_3".parse().unwrap();
        let c = group_complex_plain(&g, 8);
        let labels: Vec<String> = c.basis(5).iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, vec!["[0,5]", "[1,4]", "[2,3]", "[3,2]", "[4,1]", "[5,0]"]);

        let z2: GroupSpec = "Z^2".parse().unwrap();
        let c = group_complex_plain(&z2, 4);
        assert_eq!(c.basis(2).len(), 1);
        assert_eq!(c.basis(2)[0].to_string(), "[1,1]");
    }

    #[test]
    fn counit_law_for_group_diagonals() {
        let g: GroupSpec = "Z_3 x Z_2".parse().unwrap();
        let d = group_structure_map(&g, StructureMapKind::Diagonal, 8).unwrap();
        let l = g.factor_count();
        for deg in 0..=8usize {
            for label in group_complex_plain(&g, 8).basis(deg) {
                let v = d.apply_label(&label).unwrap();
                // collapse the right tensor block with the augmentation
                let mut collapsed = ChainElement::zero(deg);
                for (tl, c) in v.terms() {
                    if tl.factors()[l..].iter().all(|&x| x == 0) {
                        collapsed.add_term(BasisLabel::new(tl.factors()[..l].to_vec()), c.clone());
                    }
                }
                assert_eq!(collapsed, ChainElement::from_label(label.clone()));
                // and the left block
                let mut collapsed = ChainElement::zero(deg);
                for (tl, c) in v.terms() {
                    if tl.factors()[..l].iter().all(|&x| x == 0) {
                        collapsed.add_term(BasisLabel::new(tl.factors()[l..].to_vec()), c.clone());
                    }
                }
                assert_eq!(collapsed, ChainElement::from_label(label));
            }
        }
    }

    #[test]
    fn assembled_maps_satisfy_the_chain_map_law() {
        let g: GroupSpec = "Z_2 x Z_3".parse().unwrap();
        for kind in [
            StructureMapKind::Diagonal,
            StructureMapKind::Pontryagin,
            StructureMapKind::Inversion,
            StructureMapKind::Chi,
        ] {
            let m = group_structure_map(&g, kind, 9).unwrap();
            assert!(verify_chain_map(&m, 8).unwrap(), "{kind:?}");
        }
    }

    #[test]
    fn componentwise_chi_matches_hand_expansion() {
        // chi([0,4] (x) [0,5]) on Z_3 x Z_3: the interchange sign is
        // (-1)^{4*0} = +1 and the value is [0]^j[0] (x) [4]^j[5]
        // = 8 * 6 [0,9] = 48 [0,9], which vanishes mod 3.
        let g: GroupSpec = "Z_3 x Z_3".parse().unwrap();
        let chi = group_structure_map(&g, StructureMapKind::Chi, 10).unwrap();
        let x: ChainElement = "[0,4,0,5]".parse().unwrap();
        let v = chi.apply(&x).unwrap();
        assert_eq!(v.to_string(), "48*[0,9]");
        assert!(v.reduce_mod(3).is_zero());
    }
}
