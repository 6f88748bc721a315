use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{BasisLabel, ChainComplex, ChainElement};
use crate::error::{Error, Result};

/// A degree-0 chain map, given either by an explicit table on basis labels
/// or structurally (tensor, composite, slot permutation, identity).
///
/// Structural maps evaluate lazily; large composites are never materialized.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: Arc<ChainComplex>,
    target: Arc<ChainComplex>,
    op: MapOp,
}

#[derive(Debug, Clone)]
pub enum MapOp {
    /// Explicit values on every source basis label up to the source bound.
    Table(Arc<BTreeMap<BasisLabel, ChainElement>>),
    /// Tensor product of degree-0 maps: labels split by the children's
    /// source slot counts, values tensor together without signs.
    Tensor(Vec<ChainMap>),
    /// `second` after `first`.
    Compose(Box<ChainMap>, Box<ChainMap>),
    /// Slot permutation with the Koszul interchange sign; `perm[i]` is the
    /// destination of source slot `i`.
    Permute(Vec<usize>),
    Identity,
}

impl ChainMap {
    pub fn table(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        values: BTreeMap<BasisLabel, ChainElement>,
    ) -> Self {
        Self { source, target, op: MapOp::Table(Arc::new(values)) }
    }

    pub fn identity(c: Arc<ChainComplex>) -> Self {
        Self { source: c.clone(), target: c, op: MapOp::Identity }
    }

    pub fn zero_map(source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> Self {
        Self { source, target, op: MapOp::Table(Arc::new(BTreeMap::new())) }
    }

    /// Tensor product of maps. Sources and targets concatenate.
    pub fn tensor(parts: Vec<ChainMap>) -> Self {
        assert!(!parts.is_empty());
        if parts.len() == 1 {
            return parts.into_iter().next().unwrap();
        }
        let source = Arc::new(concat_complexes(parts.iter().map(|p| p.source.as_ref())));
        let target = Arc::new(concat_complexes(parts.iter().map(|p| p.target.as_ref())));
        Self { source, target, op: MapOp::Tensor(parts) }
    }

    /// `self` then `next` (i.e. `next . self`).
    pub fn then(self, next: ChainMap) -> Self {
        assert_eq!(
            self.target.slot_count(),
            next.source.slot_count(),
            "composition slot mismatch"
        );
        let source = self.source.clone();
        let target = next.target.clone();
        Self { source, target, op: MapOp::Compose(Box::new(self), Box::new(next)) }
    }

    /// Slot permutation as a map; `perm[i]` is where source slot `i` lands.
    pub fn permutation(source: Arc<ChainComplex>, perm: Vec<usize>) -> Self {
        assert_eq!(perm.len(), source.slot_count());
        let mut slots = vec![None; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            assert!(slots[p].is_none(), "not a permutation");
            slots[p] = Some(source.slots()[i].clone());
        }
        let target =
            Arc::new(ChainComplex::from_slots(slots.into_iter().map(Option::unwrap).collect()));
        Self { source, target, op: MapOp::Permute(perm) }
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChainComplex> {
        &self.target
    }

    /// Value on a single basis label.
    pub fn apply_label(&self, label: &BasisLabel) -> Result<ChainElement> {
        if label.slot_count() != self.source.slot_count() {
            return Err(Error::SlotMismatch {
                expected: self.source.slot_count(),
                got: label.slot_count(),
            });
        }
        self.source.check_degree(label.degree())?;
        match &self.op {
            MapOp::Identity => Ok(ChainElement::from_label(label.clone())),
            MapOp::Table(values) => {
                Ok(values.get(label).cloned().unwrap_or_else(|| ChainElement::zero(label.degree())))
            }
            MapOp::Permute(perm) => {
                let (out, sign) = permute_label(label, perm);
                Ok(ChainElement::from_terms(label.degree(), vec![(out, BigInt::from(sign))]))
            }
            MapOp::Compose(first, second) => {
                let mid = first.apply_label(label)?;
                second.apply(&mid)
            }
            MapOp::Tensor(parts) => {
                let mut acc = ChainElement::from_label(BasisLabel::new(vec![]));
                let mut offset = 0usize;
                for part in parts {
                    let k = part.source.slot_count();
                    let sub = BasisLabel::new(label.factors()[offset..offset + k].to_vec());
                    offset += k;
                    let val = part.apply_label(&sub)?;
                    if val.is_zero() {
                        return Ok(ChainElement::zero(label.degree()));
                    }
                    acc = super::tensor_elements(&acc, &val);
                }
                Ok(acc)
            }
        }
    }

    /// Linear extension to elements.
    pub fn apply(&self, x: &ChainElement) -> Result<ChainElement> {
        let mut out = ChainElement::zero(x.degree());
        for (label, coeff) in x.terms() {
            let v = self.apply_label(label)?;
            out.add_scaled(&v, coeff);
        }
        Ok(out)
    }

    /// Materialize the map as a table on all labels of degree at most `up_to`.
    pub fn materialize(&self, up_to: usize) -> Result<ChainMap> {
        self.source.check_degree(up_to)?;
        let mut values = BTreeMap::new();
        for d in 0..=up_to {
            for label in self.source.basis(d) {
                let v = self.apply_label(&label)?;
                if !v.is_zero() {
                    values.insert(label, v);
                }
            }
        }
        Ok(ChainMap::table(self.source.clone(), self.target.clone(), values))
    }

    /// Coefficientwise reduction of a table map.
    pub fn reduce_mod(&self, p: u64) -> Result<ChainMap> {
        match &self.op {
            MapOp::Table(values) => {
                let reduced = values
                    .iter()
                    .map(|(l, v)| (l.clone(), v.reduce_mod(p)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                Ok(ChainMap::table(self.source.clone(), self.target.clone(), reduced))
            }
            MapOp::Identity => Ok(self.clone()),
            _ => self.materialize(self.source.max_degree())?.reduce_mod(p),
        }
    }
}

fn concat_complexes<'a>(parts: impl Iterator<Item = &'a ChainComplex>) -> ChainComplex {
    let mut slots = Vec::new();
    for p in parts {
        slots.extend(p.slots().iter().cloned());
    }
    ChainComplex::from_slots(slots)
}

/// Permute a label's slots; the sign is `(-1)` to the sum of degree products
/// over pairs whose order is inverted.
fn permute_label(label: &BasisLabel, perm: &[usize]) -> (BasisLabel, i32) {
    let factors = label.factors();
    let mut out = vec![0u32; factors.len()];
    let mut exponent = 0u64;
    for i in 0..factors.len() {
        out[perm[i]] = factors[i];
        for j in i + 1..factors.len() {
            if perm[i] > perm[j] {
                exponent += factors[i] as u64 * factors[j] as u64;
            }
        }
    }
    (BasisLabel::new(out), if exponent % 2 == 0 { 1 } else { -1 })
}

/// Apply a slot permutation with Koszul signs to every term of an element.
pub fn permute_slots_with_sign(x: &ChainElement, perm: &[usize]) -> Result<ChainElement> {
    let mut out = ChainElement::zero(x.degree());
    for (label, coeff) in x.terms() {
        if label.slot_count() != perm.len() {
            return Err(Error::SlotMismatch { expected: perm.len(), got: label.slot_count() });
        }
        let (l, s) = permute_label(label, perm);
        out.add_term(l, coeff * BigInt::from(s));
    }
    Ok(out)
}

/// Check the chain-map law `d f = f d` on every basis label of degree at most
/// `up_to`.
pub fn verify_chain_map(f: &ChainMap, up_to: usize) -> Result<bool> {
    f.source().check_degree(up_to)?;
    f.target().check_degree(up_to)?;
    for d in 0..=up_to {
        for label in f.source().basis(d) {
            let lhs = f.target().differential_of(&f.apply_label(&label)?);
            let rhs = f.apply(&f.source().differential(&label))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::tensor_power;
    use crate::models::cyclic_complex;

    #[test]
    fn permutation_signs() {
        // odd*odd inversion
        let x: ChainElement = "[1,1]".parse().unwrap();
        let swapped = permute_slots_with_sign(&x, &[1, 0]).unwrap();
        assert_eq!(swapped.to_string(), "-1*[1,1]");

        // even block commutes freely
        let y: ChainElement = "[0,4,0,2]".parse().unwrap();
        let swapped = permute_slots_with_sign(&y, &[2, 3, 0, 1]).unwrap();
        assert_eq!(swapped.to_string(), "1*[0,2,0,4]");

        // the interchange producing the chi cross sign: [k,l,k',l'] -> [k,k',l,l']
        let z: ChainElement = "[0,4,0,5]".parse().unwrap();
        let moved = permute_slots_with_sign(&z, &[0, 2, 1, 3]).unwrap();
        assert_eq!(moved.to_string(), "1*[0,0,4,5]");
        let w: ChainElement = "[5,0,0,1]".parse().unwrap();
        let moved = permute_slots_with_sign(&w, &[0, 2, 1, 3]).unwrap();
        assert_eq!(moved.to_string(), "1*[5,0,0,1]");
        // odd*odd cross pair picks up the sign
        let v: ChainElement = "[0,3,5,0]".parse().unwrap();
        let moved = permute_slots_with_sign(&v, &[0, 2, 1, 3]).unwrap();
        assert_eq!(moved.to_string(), "-1*[0,5,3,0]");
    }

    #[test]
    fn permute_then_inverse_is_identity() {
        let x: ChainElement = "3*[1,2,3] - 5*[2,1,3] + [0,3,3]".parse().unwrap();
        let perm = vec![2usize, 0, 1];
        let mut inv = vec![0usize; 3];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let there = permute_slots_with_sign(&x, &perm).unwrap();
        let back = permute_slots_with_sign(&there, &inv).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn zero_map_is_a_chain_map() {
        let c = Arc::new(cyclic_complex(3, 8));
        let t = Arc::new(tensor_power(&c, 2));
        let z = ChainMap::zero_map(c, t);
        assert!(verify_chain_map(&z, 7).unwrap());
    }

    #[test]
    fn verify_rejects_excess_degree() {
        let c = Arc::new(cyclic_complex(3, 5));
        let id = ChainMap::identity(c);
        assert!(verify_chain_map(&id, 9).is_err());
    }
}
