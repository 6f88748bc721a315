//! Exact integer linear algebra for bounded-degree chain complexes of
//! finitely generated free modules.
//!
//! Every complex in scope is a tensor product of single-generator-per-degree
//! "slot" complexes (the cyclic complex, its twisted variant, the circle
//! model, the one-point complex). A [`ChainComplex`] therefore stores its
//! slot factors and computes bases and the Koszul-signed differential on
//! demand; nothing is ever materialized beyond what a computation touches.

mod element;
mod map;
pub mod homology;
pub mod smith;

pub use element::{BasisLabel, ChainElement};
pub use map::{permute_slots_with_sign, verify_chain_map, ChainMap, MapOp};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A single tensor slot: at most one generator `[k]` per degree, with
/// differential `d[k] = c_k [k-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotComplex {
    name: String,
    /// `gens[k]` records whether the generator `[k]` exists; index bounds the
    /// construction degree.
    gens: Vec<bool>,
    /// `diff[k]` is the coefficient of `[k-1]` in `d[k]`; `diff[0]` is unused.
    diff: Vec<BigInt>,
}

impl SlotComplex {
    pub fn new(name: impl Into<String>, gens: Vec<bool>, diff: Vec<BigInt>) -> Self {
        assert_eq!(gens.len(), diff.len());
        assert!(!gens.is_empty());
        Self { name: name.into(), gens, diff }
    }

    pub fn built_to(&self) -> usize {
        self.gens.len() - 1
    }

    pub fn has_gen(&self, degree: usize) -> bool {
        degree < self.gens.len() && self.gens[degree]
    }

    /// Coefficient `c_k` with `d[k] = c_k [k-1]`, zero when there is no
    /// generator one degree down.
    pub fn diff_coeff(&self, degree: usize) -> BigInt {
        if degree == 0 || !self.has_gen(degree) || !self.has_gen(degree - 1) {
            return BigInt::zero();
        }
        self.diff[degree].clone()
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A bounded-degree chain complex presented as a tensor product of slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    slots: Vec<SlotComplex>,
}

impl ChainComplex {
    pub fn from_slots(slots: Vec<SlotComplex>) -> Self {
        assert!(!slots.is_empty());
        Self { slots }
    }

    /// Single-slot complex with one generator per listed degree.
    pub fn single(name: impl Into<String>, gens: Vec<bool>, diff: Vec<BigInt>) -> Self {
        Self::from_slots(vec![SlotComplex::new(name, gens, diff)])
    }

    /// The one-point complex: a single degree-0 generator, zero differential.
    pub fn point(max_degree: usize) -> Self {
        let mut gens = vec![false; max_degree + 1];
        gens[0] = true;
        Self::single("pt", gens, vec![BigInt::zero(); max_degree + 1])
    }

    /// A complex with no generators at all.
    pub fn empty(max_degree: usize) -> Self {
        Self::single("0", vec![false; max_degree + 1], vec![BigInt::zero(); max_degree + 1])
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[SlotComplex] {
        &self.slots
    }

    /// Construction bound: labels of total degree up to this are available.
    pub fn max_degree(&self) -> usize {
        self.slots.iter().map(SlotComplex::built_to).min().unwrap()
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree() {
            return Err(Error::DegreeOutOfRange { degree, max: self.max_degree() });
        }
        Ok(())
    }

    pub fn has_label(&self, label: &BasisLabel) -> bool {
        label.slot_count() == self.slot_count()
            && label
                .factors()
                .iter()
                .zip(&self.slots)
                .all(|(&d, slot)| slot.has_gen(d as usize))
    }

    /// The basis of the given degree in lexicographic order on factor tuples.
    pub fn basis(&self, degree: usize) -> Vec<BasisLabel> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.slot_count()];
        self.collect_basis(degree, 0, &mut current, &mut out);
        out
    }

    fn collect_basis(&self, remaining: usize, slot: usize, current: &mut Vec<u32>, out: &mut Vec<BasisLabel>) {
        if slot + 1 == self.slot_count() {
            if self.slots[slot].has_gen(remaining) {
                current[slot] = remaining as u32;
                out.push(BasisLabel::new(current.clone()));
            }
            return;
        }
        for d in 0..=remaining.min(self.slots[slot].built_to()) {
            if self.slots[slot].has_gen(d) {
                current[slot] = d as u32;
                self.collect_basis(remaining - d, slot + 1, current, out);
            }
        }
    }

    pub fn basis_size(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    /// Koszul-signed differential of a basis label.
    pub fn differential(&self, label: &BasisLabel) -> ChainElement {
        debug_assert!(self.has_label(label), "label {label} not in complex");
        let degree = label.degree();
        if degree == 0 {
            return ChainElement::zero(0);
        }
        let mut out = ChainElement::zero(degree - 1);
        let mut prefix_parity = 0u32;
        for (i, &d) in label.factors().iter().enumerate() {
            let coeff = self.slots[i].diff_coeff(d as usize);
            if !coeff.is_zero() {
                let signed = if prefix_parity % 2 == 0 { coeff } else { -coeff };
                let mut factors = label.factors().to_vec();
                factors[i] = d - 1;
                out.add_term(BasisLabel::new(factors), signed);
            }
            prefix_parity += d;
        }
        out
    }

    /// Linear extension of the differential.
    pub fn differential_of(&self, x: &ChainElement) -> ChainElement {
        let degree = x.degree().saturating_sub(1);
        let mut out = ChainElement::zero(degree);
        for (label, coeff) in x.terms() {
            let d = self.differential(label);
            out.add_scaled(&d, coeff);
        }
        out
    }

    pub fn is_cycle(&self, x: &ChainElement) -> bool {
        x.is_zero() || self.differential_of(x).is_zero()
    }
}

/// Tensor product of complexes: slots concatenate, truncation degrees meet.
pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let mut slots = a.slots.clone();
    slots.extend(b.slots.iter().cloned());
    ChainComplex::from_slots(slots)
}

/// Tensor power of a complex.
pub fn tensor_power(c: &ChainComplex, k: usize) -> ChainComplex {
    assert!(k >= 1);
    let mut slots = Vec::with_capacity(c.slot_count() * k);
    for _ in 0..k {
        slots.extend(c.slots.iter().cloned());
    }
    ChainComplex::from_slots(slots)
}

/// Tensor product of elements (labels concatenate, coefficients multiply).
pub fn tensor_elements(x: &ChainElement, y: &ChainElement) -> ChainElement {
    let mut out = ChainElement::zero(x.degree() + y.degree());
    for (lx, cx) in x.terms() {
        for (ly, cy) in y.terms() {
            let mut factors = lx.factors().to_vec();
            factors.extend_from_slice(ly.factors());
            out.add_term(BasisLabel::new(factors), cx * cy);
        }
    }
    out
}
