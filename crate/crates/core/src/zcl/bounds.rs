//! Closed-form lower bounds, the defect formula for projective spaces, lens
//! space bounds, and the per-family assembly of `TC_s` intervals.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::binary::{binom_mod, m_defect, maximality_threshold, Threshold};
use crate::error::{Error, Result};
use crate::models::GroupSpec;
use crate::nonorient::{decide_nonorientable, DSpec};
use crate::orientable::{decide_orientable, Conclusion, FundamentalClass};

/// `zcl_s(P^n) = s n - m_{n,s}` for `s >= 3`.
pub fn davis_zcl(n: u64, s: u64) -> Result<u64> {
    Ok(s * n - m_defect(n, s)?)
}

/// A lens-space lower bound instance.
#[derive(Debug, Clone, Serialize)]
pub struct LensBound {
    pub value: u64,
    pub ell: u64,
    pub ell_prime: u64,
    pub reading_note: String,
}

/// Best lower bound over admissible `(ell, ell')` with `p` not dividing
/// `C(ell + ell', ell)`: `s(ell + ell' + 1) - 1` for even `s` and
/// `(s-1)(ell + ell') + s + 2n - 1` for odd `s`, on a manifold of dimension
/// `2n + 1`.
pub fn lens_lower_bound(p: u64, n: u64, s: u64) -> Result<LensBound> {
    if p < 3 || (2..p).any(|d| p % d == 0) {
        return Err(Error::InvalidInput(format!("lens bounds need an odd prime, got {p}")));
    }
    if s < 2 {
        return Err(Error::InvalidInput("lens bounds need s >= 2".into()));
    }
    let mut best: Option<(u64, u64, u64)> = None;
    for ell in 0..=n {
        for ell_prime in 0..=n {
            if binom_mod(ell, ell_prime, p)? == 0 {
                continue;
            }
            let t = ell + ell_prime;
            let value = if s % 2 == 0 { s * (t + 1) - 1 } else { (s - 1) * t + s + 2 * n - 1 };
            let candidate = (value, ell, ell_prime);
            best = Some(match best {
                None => candidate,
                Some(cur) => {
                    if candidate.0 > cur.0 || (candidate.0 == cur.0 && (candidate.1, candidate.2) < (cur.1, cur.2)) {
                        candidate
                    } else {
                        cur
                    }
                }
            });
        }
    }
    let (value, ell, ell_prime) = best.expect("(0,0) is always admissible");
    Ok(LensBound {
        value,
        ell,
        ell_prime,
        reading_note: "divisibility read as: p does not divide C(ell+ell', ell); \
                       for a prime modulus the power in the source condition is irrelevant"
            .into(),
    })
}

/// Which divisor the headline exact-value condition uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DivisorReading {
    /// `p` does not divide `C(2n, n)` (default).
    Prime,
    /// `s` does not divide `C(2n, n)^{floor(s/2)}`.
    StepCount,
}

/// Fundamental-group families the report covers with named results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Pi1Family {
    Z2,
    Zp { p: u64 },
    FreeAbelian { r: usize },
    FreeTimesCyclic { r: usize, q: u64 },
    /// The rank-two order-3 example with its maximal `TC_3`.
    Z3Z3Example,
    Other { name: String },
}

impl Pi1Family {
    /// Classify a parsed group for reporting purposes.
    pub fn from_group(g: &GroupSpec, dim: usize) -> Self {
        let f = g.factors();
        if f == [2] {
            return Pi1Family::Z2;
        }
        if f.len() == 1 && f[0] >= 3 && (2..f[0]).all(|d| f[0] % d != 0) {
            return Pi1Family::Zp { p: f[0] };
        }
        if f.iter().all(|&q| q == 0) {
            return Pi1Family::FreeAbelian { r: f.len() };
        }
        if f == [3, 3] && dim == 5 {
            return Pi1Family::Z3Z3Example;
        }
        let free = f.iter().filter(|&&q| q == 0).count();
        let finite: Vec<u64> = f.iter().copied().filter(|&q| q > 0).collect();
        if finite.len() == 1 && free > 0 {
            return Pi1Family::FreeTimesCyclic { r: free, q: finite[0] };
        }
        Pi1Family::Other { name: g.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifoldDescriptor {
    pub family: Pi1Family,
    pub dim: usize,
    pub orientable: bool,
    /// Whether maximal Lusternik-Schnirelmann category (`cat = dim`) is
    /// assumed; the cup-length lower bounds require it.
    pub cat_max: bool,
    pub divisor_reading: DivisorReading,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundLine {
    pub s: u64,
    pub lower: Option<u64>,
    pub lower_citation: Option<String>,
    pub upper: u64,
    pub upper_citation: String,
    pub exact: Option<u64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub descriptor: ManifoldDescriptor,
    pub lines: Vec<BoundLine>,
    pub notes: Vec<String>,
}

const CITE_DIMENSIONAL: &str = "dimensional upper bound TC_s <= s dim";
const CITE_DAVIS: &str = "cup-length comparison with the projective space (Davis closed form)";
const CITE_THRESHOLD: &str = "maximal cup length past the binary-expansion threshold";
const CITE_CYCLIC: &str = "chain-level obstruction vanishing for a finite cyclic fundamental group";
const CITE_FREE: &str = "degree bound for free abelian fundamental groups";
const CITE_FREE_CYCLIC: &str = "chain-level vanishing for free-times-cyclic fundamental groups";
const CITE_PARITY: &str = "even-s parity certificate for dimensions 2^{r+1} - 2";
const CITE_LENS: &str = "weighted cup-length bound for lens spaces";
const CITE_MAXIMAL: &str = "nonzero obstruction class with trivial coefficients";
const CITE_S2_NONOR: &str = "classical s = 2 non-maximality for non-orientable manifolds";

/// Per-copy expansion cost cap for live obstruction runs inside a report.
const LIVE_OBSTRUCTION_CAP: u64 = 50_000;

fn cyclic_upper(q: u64, n: usize, s: u64) -> Result<(u64, String, Vec<String>)> {
    let sn = s * n as u64;
    let mut notes = Vec::new();
    if n % 2 == 0 {
        // even dimension: the fundamental class dies in group homology and
        // the obstruction is zero on the nose
        notes.push("even dimension: the image of the fundamental class vanishes".into());
        return Ok((sn - 1, CITE_CYCLIC.into(), notes));
    }
    let cost = (n as u64 + 1).checked_pow(s.saturating_sub(2) as u32).unwrap_or(u64::MAX);
    if cost <= LIVE_OBSTRUCTION_CAP {
        let f = FundamentalClass::default_cyclic(q, n, 1)?;
        let v = decide_orientable(&f, s as usize)?;
        if v.conclusion != Conclusion::BelowMaximal {
            return Err(Error::InvalidInput(format!(
                "cyclic obstruction unexpectedly nonzero for q={q}, n={n}, s={s}"
            )));
        }
        notes.push("obstruction vanishing verified live".into());
    } else {
        notes.push("vanishing cited (live run skipped at this size)".into());
    }
    Ok((sn - 1, CITE_CYCLIC.into(), notes))
}

fn line_for_z2(desc: &ManifoldDescriptor, s: u64) -> Result<BoundLine> {
    let n = desc.dim as u64;
    let sn = s * n;
    let mut notes = Vec::new();

    let (lower, lower_citation) = if desc.cat_max && s >= 3 {
        let zcl = davis_zcl(n, s)?;
        let cite = match maximality_threshold_if_even(n) {
            Some(Threshold::Value(t)) if s >= t => CITE_THRESHOLD,
            _ => CITE_DAVIS,
        };
        (Some(zcl), Some(cite.to_string()))
    } else {
        if !desc.cat_max {
            notes.push("cup-length lower bounds need cat = dim".into());
        }
        (None, None)
    };

    let (upper, upper_citation) = if desc.orientable {
        if n % 2 == 0 && desc.cat_max {
            notes.push(
                "hypotheses conflict: orientable with cat = dim forces odd dimension here".into(),
            );
        }
        let (u, c, mut extra) = cyclic_upper(2, desc.dim, s)?;
        notes.append(&mut extra);
        (u, c)
    } else if n % 2 == 1 {
        notes.push("a non-orientable manifold in this family has even dimension".into());
        (sn, CITE_DIMENSIONAL.to_string())
    } else if s % 2 == 0 && s >= 2 && s <= n && (n + 2).is_power_of_two() {
        let spec = DSpec::new((n + 2).trailing_zeros() - 1, s as usize)?;
        let v = decide_nonorientable(&spec, false, 10_000_000)?;
        if v.below_max {
            (sn - 1, CITE_PARITY.to_string())
        } else {
            (sn, CITE_DIMENSIONAL.to_string())
        }
    } else if s == 2 {
        (sn - 1, CITE_S2_NONOR.to_string())
    } else {
        (sn, CITE_DIMENSIONAL.to_string())
    };

    Ok(assemble_line(s, lower, lower_citation, upper, upper_citation, notes))
}

fn maximality_threshold_if_even(n: u64) -> Option<Threshold> {
    if n >= 2 && n % 2 == 0 {
        maximality_threshold(n).ok()
    } else {
        None
    }
}

fn line_for_zp(desc: &ManifoldDescriptor, p: u64, s: u64) -> Result<BoundLine> {
    let dim = desc.dim as u64;
    let sn = s * dim;
    let mut notes = Vec::new();
    if dim % 2 == 0 || !desc.orientable {
        notes.push("the lens-space comparison needs an orientable odd-dimensional manifold".into());
        return Ok(assemble_line(s, None, None, sn, CITE_DIMENSIONAL.to_string(), notes));
    }
    let half = (dim - 1) / 2;

    let (lower, lower_citation) = if desc.cat_max {
        let b = lens_lower_bound(p, half, s)?;
        notes.push(format!("witness (ell, ell') = ({}, {}); {}", b.ell, b.ell_prime, b.reading_note));
        if desc.divisor_reading == DivisorReading::StepCount {
            let agree = step_count_condition(half, s) == (binom_mod(half, half, p)? != 0);
            if !agree {
                notes.push(
                    "alternative step-count divisor reading disagrees here; line marked".into(),
                );
            }
        }
        (Some(b.value), Some(CITE_LENS.to_string()))
    } else {
        notes.push("cup-length lower bounds need cat = dim".into());
        (None, None)
    };

    let (upper, upper_citation, mut extra) = cyclic_upper(p, desc.dim, s)?;
    notes.append(&mut extra);
    Ok(assemble_line(s, lower, lower_citation, upper, upper_citation, notes))
}

fn step_count_condition(n: u64, s: u64) -> bool {
    // s does not divide C(2n, n)^{floor(s/2)}
    let base = crate::binary::binom_big(n, n);
    let modulus = BigUint::from(s);
    if modulus.is_zero() {
        return true;
    }
    let mut acc = BigUint::from(1u8) % &modulus;
    for _ in 0..s / 2 {
        acc = acc * (&base % &modulus) % &modulus;
    }
    !acc.is_zero()
}

fn line_for_free(desc: &ManifoldDescriptor, r: usize, s: u64) -> Result<BoundLine> {
    let n = desc.dim as u64;
    let sn = s * n;
    let mut notes = Vec::new();
    let (upper, cite) = if sn > (s - 1) * r as u64 {
        (sn - 1, CITE_FREE.to_string())
    } else {
        notes.push("the degree bound does not apply: s dim <= (s-1) r".into());
        (sn, CITE_DIMENSIONAL.to_string())
    };
    Ok(assemble_line(s, None, None, upper, cite, notes))
}

fn line_for_free_cyclic(desc: &ManifoldDescriptor, r: usize, q: u64, s: u64) -> Result<BoundLine> {
    let n = desc.dim;
    let sn = s * n as u64;
    let mut notes = Vec::new();
    if r >= n {
        notes.push("the vanishing statement needs r < dim; no theorem applies".into());
        return Ok(assemble_line(s, None, None, sn, CITE_DIMENSIONAL.to_string(), notes));
    }
    // the chain obstruction vanishes for every monomial class; verify live
    // when the sweep is small
    if r <= 3 && n <= 5 && s <= 4 {
        let rows = crate::orientable::free_times_cyclic_vanishing(r, q, n, s as usize, None)?;
        if rows.iter().any(|(_, ok)| !ok) {
            return Err(Error::InvalidInput("unexpected nonzero free-times-cyclic obstruction".into()));
        }
        notes.push(format!("vanishing verified live over {} monomial classes", rows.len()));
    } else {
        notes.push("vanishing cited (live sweep skipped at this size)".into());
    }
    Ok(assemble_line(s, None, None, sn - 1, CITE_FREE_CYCLIC.to_string(), notes))
}

fn line_for_z3z3(desc: &ManifoldDescriptor, s: u64) -> Result<BoundLine> {
    let sn = s * desc.dim as u64;
    let mut notes = Vec::new();
    if s == 3 {
        let group: GroupSpec = "Z_3 x Z_3".parse()?;
        let chain: crate::chain::ChainElement = "[0,5]+[5,0]".parse()?;
        let f = FundamentalClass::new(group, desc.dim, chain)?;
        let v = decide_orientable(&f, 3)?;
        if v.conclusion == Conclusion::Maximal {
            return Ok(BoundLine {
                s,
                lower: Some(sn),
                lower_citation: Some(CITE_MAXIMAL.to_string()),
                upper: sn,
                upper_citation: CITE_DIMENSIONAL.to_string(),
                exact: Some(sn),
                notes,
            });
        }
        return Err(Error::InvalidInput("expected a maximality certificate for the example".into()));
    }
    notes.push("only s = 3 is covered for this example".into());
    Ok(assemble_line(s, None, None, sn, CITE_DIMENSIONAL.to_string(), notes))
}

fn assemble_line(
    s: u64,
    lower: Option<u64>,
    lower_citation: Option<String>,
    upper: u64,
    upper_citation: String,
    notes: Vec<String>,
) -> BoundLine {
    let exact = match lower {
        Some(l) if l == upper => Some(l),
        _ => None,
    };
    BoundLine { s, lower, lower_citation, upper, upper_citation, exact, notes }
}

/// Assemble the per-`s` table of bounds for a descriptor.
pub fn report_bounds(desc: &ManifoldDescriptor, s_values: &[u64]) -> Result<BoundReport> {
    if desc.dim < 2 {
        return Err(Error::InvalidInput("dimension must be at least 2".into()));
    }
    let mut lines = Vec::with_capacity(s_values.len());
    let mut notes = Vec::new();
    for &s in s_values {
        if s < 2 {
            return Err(Error::InvalidInput("s must be at least 2".into()));
        }
        let line = match &desc.family {
            Pi1Family::Z2 => line_for_z2(desc, s)?,
            Pi1Family::Zp { p } => line_for_zp(desc, *p, s)?,
            Pi1Family::FreeAbelian { r } => line_for_free(desc, *r, s)?,
            Pi1Family::FreeTimesCyclic { r, q } => line_for_free_cyclic(desc, *r, *q, s)?,
            Pi1Family::Z3Z3Example => line_for_z3z3(desc, s)?,
            Pi1Family::Other { name } => {
                let mut line = assemble_line(
                    s,
                    None,
                    None,
                    s * desc.dim as u64,
                    CITE_DIMENSIONAL.to_string(),
                    vec![],
                );
                line.notes.push(format!("no theorem applies to pi_1 = {name}"));
                line
            }
        };
        if let Some(l) = line.lower {
            if l > line.upper {
                return Err(Error::InvalidInput(format!(
                    "computed lower bound {l} exceeds upper bound {} at s = {s}",
                    line.upper
                )));
            }
        }
        lines.push(line);
    }
    if matches!(desc.family, Pi1Family::Other { .. }) {
        notes.push("no theorem applies: only the dimensional upper bound is reported".into());
    }
    Ok(BoundReport { descriptor: desc.clone(), lines, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(family: Pi1Family, dim: usize, orientable: bool) -> ManifoldDescriptor {
        ManifoldDescriptor {
            family,
            dim,
            orientable,
            cat_max: true,
            divisor_reading: DivisorReading::Prime,
        }
    }

    #[test]
    fn davis_values() {
        assert_eq!(davis_zcl(2, 3).unwrap(), 6);
        assert_eq!(davis_zcl(6, 6).unwrap(), 35);
        assert_eq!(davis_zcl(6, 7).unwrap(), 42);
        for s in 3..=9 {
            assert_eq!(davis_zcl(5, s).unwrap(), 5 * s - 1);
        }
    }

    #[test]
    fn lens_bound_values() {
        // (0,0) admissible: even s gives s - 1
        let b = lens_lower_bound(3, 0, 4).unwrap();
        assert_eq!((b.value, b.ell, b.ell_prime), (3, 0, 0));
        // p = 3, n = 1: C(2,1) = 2 is a unit mod 3, so (1,1) is admissible
        let b = lens_lower_bound(3, 1, 4).unwrap();
        assert_eq!((b.value, b.ell, b.ell_prime), (11, 1, 1));
        let b = lens_lower_bound(3, 1, 5).unwrap();
        assert_eq!(b.value, 5 * 3 - 1); // odd s with full (1,1): (s-1)2 + s + 1 = 3s - 1
        assert!(lens_lower_bound(4, 1, 2).is_err());
    }

    #[test]
    fn lens_admissibility_table_p3_n1() {
        // hand table of C(l+l', l) mod 3 for 0 <= l, l' <= 1: all nonzero
        for ell in 0..=1u64 {
            for ep in 0..=1u64 {
                assert!(binom_mod(ell, ep, 3).unwrap() != 0);
            }
        }
        // and a case where the top pair is inadmissible: p = 3, n = 3,
        // C(6,3) = 20 != 0 mod 3... pick n = 4: C(8,4) = 70, 70 mod 3 = 1;
        // n = 2: C(4,2) = 6 = 0 mod 3, so (2,2) is excluded
        assert_eq!(binom_mod(2, 2, 3).unwrap(), 0);
        let b = lens_lower_bound(3, 2, 4).unwrap();
        // best admissible total is ell + ell' = 3
        assert_eq!(b.value, 4 * 4 - 1);
    }

    #[test]
    fn report_orientable_z2_dim5() {
        let d = desc(Pi1Family::Z2, 5, true);
        let r = report_bounds(&d, &[3, 4, 5, 6]).unwrap();
        for line in &r.lines {
            assert_eq!(line.exact, Some(5 * line.s - 1), "s={}", line.s);
        }
    }

    #[test]
    fn report_nonorientable_z2_dim6() {
        let d = desc(Pi1Family::Z2, 6, false);
        let r = report_bounds(&d, &[4, 5, 6, 7, 8]).unwrap();
        let by_s: std::collections::BTreeMap<u64, &BoundLine> =
            r.lines.iter().map(|l| (l.s, l)).collect();
        assert_eq!(by_s[&4].upper, 23);
        assert_eq!(by_s[&4].lower, Some(21));
        assert_eq!(by_s[&4].exact, None);
        assert_eq!(by_s[&6].exact, Some(35));
        assert_eq!(by_s[&7].exact, Some(42));
        assert_eq!(by_s[&8].exact, Some(48));
        // odd s in between: interval only
        assert_eq!(by_s[&5].upper, 30);
        assert_eq!(by_s[&5].lower, Some(28));
    }

    #[test]
    fn report_lens_exact_values() {
        // dim 3 = 2*1 + 1, p = 3, 3 does not divide C(2,1) = 2
        let d = desc(Pi1Family::Zp { p: 3 }, 3, true);
        let r = report_bounds(&d, &[2, 3, 4, 5]).unwrap();
        for line in &r.lines {
            assert_eq!(line.exact, Some(3 * line.s - 1), "s={}", line.s);
        }
        // dim 5 = 2*2 + 1, p = 3 divides C(4,2) = 6: no exact value at the top
        let d = desc(Pi1Family::Zp { p: 3 }, 5, true);
        let r = report_bounds(&d, &[4]).unwrap();
        assert_eq!(r.lines[0].upper, 19);
        assert!(r.lines[0].lower.unwrap() < 19);
    }

    #[test]
    fn report_other_family_has_no_theorem() {
        let d = desc(Pi1Family::Other { name: "Z_2 x Z_4".into() }, 4, true);
        let r = report_bounds(&d, &[3]).unwrap();
        assert!(r.lines[0].lower.is_none());
        assert_eq!(r.lines[0].upper, 12);
        assert!(r.lines[0].notes.iter().any(|n| n.contains("no theorem")));
    }

    #[test]
    fn family_classification() {
        let g: GroupSpec = "Z_2".parse().unwrap();
        assert_eq!(Pi1Family::from_group(&g, 6), Pi1Family::Z2);
        let g: GroupSpec = "Z_5".parse().unwrap();
        assert_eq!(Pi1Family::from_group(&g, 3), Pi1Family::Zp { p: 5 });
        let g: GroupSpec = "Z^3".parse().unwrap();
        assert_eq!(Pi1Family::from_group(&g, 3), Pi1Family::FreeAbelian { r: 3 });
        let g: GroupSpec = "Z^2 x Z_4".parse().unwrap();
        assert_eq!(Pi1Family::from_group(&g, 5), Pi1Family::FreeTimesCyclic { r: 2, q: 4 });
        let g: GroupSpec = "Z_3 x Z_3".parse().unwrap();
        assert_eq!(Pi1Family::from_group(&g, 5), Pi1Family::Z3Z3Example);
        let g: GroupSpec = "Z_4".parse().unwrap();
        assert!(matches!(Pi1Family::from_group(&g, 5), Pi1Family::Other { .. }));
    }
}
