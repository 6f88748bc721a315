use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A basis label `[i_1,...,i_l]`: one non-negative degree per tensor slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel(Vec<u32>);

impl BasisLabel {
    pub fn new(factors: Vec<u32>) -> Self {
        Self(factors)
    }

    pub fn factors(&self) -> &[u32] {
        &self.0
    }

    pub fn slot_count(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&d| d as usize).sum()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// A sparse integer combination of basis labels in a single degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainElement {
    degree: usize,
    terms: BTreeMap<BasisLabel, BigInt>,
}

impl ChainElement {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn from_label(label: BasisLabel) -> Self {
        let mut e = Self::zero(label.degree());
        e.add_term(label, BigInt::from(1));
        e
    }

    pub fn from_terms(degree: usize, terms: Vec<(BasisLabel, BigInt)>) -> Self {
        let mut e = Self::zero(degree);
        for (l, c) in terms {
            e.add_term(l, c);
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, label: &BasisLabel) -> BigInt {
        self.terms.get(label).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Accumulate a term, dropping the entry if the total cancels.
    pub fn add_term(&mut self, label: BasisLabel, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(label.degree(), self.degree, "term degree mismatch");
        let entry = self.terms.entry(label);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ChainElement, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (l, c) in other.terms() {
            self.add_term(l.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &BigInt) -> ChainElement {
        let mut out = ChainElement::zero(self.degree);
        out.add_scaled(self, scale);
        out
    }

    pub fn negated(&self) -> ChainElement {
        self.scaled(&BigInt::from(-1))
    }

    pub fn plus(&self, other: &ChainElement) -> ChainElement {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::from(1));
        out
    }

    pub fn minus(&self, other: &ChainElement) -> ChainElement {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::from(-1));
        out
    }

    /// Coefficientwise reduction to canonical residues in `0..p`.
    pub fn reduce_mod(&self, p: u64) -> ChainElement {
        let p = BigInt::from(p);
        let mut out = ChainElement::zero(self.degree);
        for (l, c) in self.terms() {
            let mut r = c % &p;
            if r < BigInt::zero() {
                r += &p;
            }
            out.add_term(l.clone(), r);
        }
        out
    }

    /// Restriction to the terms whose label satisfies the predicate.
    pub fn filter<F: Fn(&BasisLabel) -> bool>(&self, keep: F) -> ChainElement {
        let mut out = ChainElement::zero(self.degree);
        for (l, c) in self.terms() {
            if keep(l) {
                out.add_term(l.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for ChainElement {
    /// Canonical text form: terms sorted by label, `coeff*[i1,...,ik]`
    /// joined by ` + `, with `0` for the zero element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{coeff}*{label}")?;
        }
        Ok(())
    }
}

impl FromStr for ChainElement {
    type Err = Error;

    /// Parse `2*[1,3] - [2,2] + [0,4]`-style input; whitespace is ignored and
    /// the `*` is optional.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty chain expression".into()));
        }
        let mut terms: Vec<(BasisLabel, BigInt)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut pos = 0usize;
        while pos < bytes.len() {
            let mut sign = BigInt::from(1);
            while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let digits_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff = if pos > digits_start {
                let v: BigInt = compact[digits_start..pos]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?;
                sign * v
            } else {
                sign
            };
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
            if pos >= bytes.len() || bytes[pos] != b'[' {
                return Err(Error::Parse(format!("expected '[' at offset {pos} in {s:?}")));
            }
            let close = compact[pos..]
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated label in {s:?}")))?
                + pos;
            let inner = &compact[pos + 1..close];
            let factors: Vec<u32> = if inner.is_empty() {
                return Err(Error::Parse("empty label []".into()));
            } else {
                inner
                    .split(',')
                    .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad label entry {t:?}"))))
                    .collect::<Result<_>>()?
            };
            terms.push((BasisLabel::new(factors), coeff));
            pos = close + 1;
        }
        let slot_count = terms[0].0.slot_count();
        let degree = terms[0].0.degree();
        for (l, _) in &terms {
            if l.slot_count() != slot_count {
                return Err(Error::SlotMismatch { expected: slot_count, got: l.slot_count() });
            }
            if l.degree() != degree {
                return Err(Error::Parse(format!("mixed degrees: {} vs {}", l.degree(), degree)));
            }
        }
        Ok(ChainElement::from_terms(degree, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_canonical() {
        let mut e = ChainElement::zero(4);
        e.add_term(BasisLabel::new(vec![3, 1]), BigInt::from(-10));
        e.add_term(BasisLabel::new(vec![1, 3]), BigInt::from(20));
        assert_eq!(e.to_string(), "20*[1,3] + -10*[3,1]");
        assert_eq!(ChainElement::zero(2).to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        let e: ChainElement = "[0,5]+[5,0]".parse().unwrap();
        assert_eq!(e.to_string(), "1*[0,5] + 1*[5,0]");
        let back: ChainElement = e.to_string().parse().unwrap();
        assert_eq!(back, e);

        let f: ChainElement = "2[1,3] - [2,2] + -3*[4,0]".parse().unwrap();
        assert_eq!(f.coeff(&BasisLabel::new(vec![1, 3])), BigInt::from(2));
        assert_eq!(f.coeff(&BasisLabel::new(vec![2, 2])), BigInt::from(-1));
        assert_eq!(f.coeff(&BasisLabel::new(vec![4, 0])), BigInt::from(-3));
    }

    #[test]
    fn cancelling_terms_vanish() {
        let mut e = ChainElement::zero(1);
        e.add_term(BasisLabel::new(vec![1]), BigInt::from(5));
        e.add_term(BasisLabel::new(vec![1]), BigInt::from(-5));
        assert!(e.is_zero());
    }

    #[test]
    fn reduce_mod_drops_zeros() {
        let mut e = ChainElement::zero(9);
        e.add_term(BasisLabel::new(vec![0, 9]), BigInt::from(-6));
        assert!(e.reduce_mod(3).is_zero());
        let mut f = ChainElement::zero(3);
        f.add_term(BasisLabel::new(vec![1, 2]), BigInt::from(20));
        assert!(f.reduce_mod(2).is_zero());
        assert_eq!(f.reduce_mod(3).coeff(&BasisLabel::new(vec![1, 2])), BigInt::from(2));
    }

    #[test]
    fn parse_rejects_mixed_arity() {
        assert!("[1,2]+[1]".parse::<ChainElement>().is_err());
        assert!("[1,2]+[2,2]".parse::<ChainElement>().is_err());
    }
}
