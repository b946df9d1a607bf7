//! Lower ramification filtrations at a point and their jump data.
//!
//! A filtration e_0 >= e_1 >= ... is stored as segments `(i_last, e)`: the
//! order is `e` for every index up to and including `i_last` (and after the
//! previous segment), and 1 after the final segment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::is_prime;

/// Exact log base `p`, if `n` is a power of `p`.
pub fn log_p(n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut k = 0;
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// On-disk shape: `{"orders": [[i_last, e], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationJson {
    pub orders: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RamificationFiltration {
    p: u64,
    segments: Vec<(u64, u64)>,
}

impl RamificationFiltration {
    pub fn new(p: u64, segments: &[(u64, u64)]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut merged: Vec<(u64, u64)> = Vec::new();
        let mut prev_last: Option<u64> = None;
        let mut prev_order = u64::MAX;
        for &(last, order) in segments {
            if log_p(order, p).is_none() {
                return Err(Error::InvalidFiltration(format!("order {order} is not a power of {p}")));
            }
            if prev_last.is_some_and(|pl| last <= pl) {
                return Err(Error::InvalidFiltration(format!(
                    "segment end {last} does not increase (previous {})",
                    prev_last.unwrap()
                )));
            }
            if order > prev_order {
                return Err(Error::InvalidFiltration(format!("order increases from {prev_order} to {order}")));
            }
            match merged.last_mut() {
                Some(seg) if seg.1 == order => seg.0 = last,
                _ => merged.push((last, order)),
            }
            prev_last = Some(last);
            prev_order = order;
        }
        while merged.last().is_some_and(|s| s.1 == 1) {
            merged.pop();
        }
        if merged.first().is_some_and(|s| s.0 == 0) {
            return Err(Error::InvalidFiltration("e_0 != e_1; a p-group has G_0 = G_1".into()));
        }
        Ok(Self { p, segments: merged })
    }

    pub fn unramified(p: u64) -> Result<Self> {
        Self::new(p, &[])
    }

    /// G_0 = G_1 of order `q`, G_2 trivial.
    pub fn weakly_ramified(p: u64, q: u64) -> Result<Self> {
        Self::new(p, &[(1, q)])
    }

    /// Cyclic filtration with the given strictly increasing lower jumps: the
    /// order drops by a factor p after each jump.
    pub fn from_lower_jumps(p: u64, lower: &[u64]) -> Result<Self> {
        if lower.windows(2).any(|w| w[0] >= w[1]) || lower.first() == Some(&0) {
            return Err(Error::InvalidFiltration(format!("lower jumps {lower:?} must be positive and strictly increasing")));
        }
        let k = lower.len() as u32;
        let segs: Vec<(u64, u64)> = lower.iter().enumerate().map(|(t, &i)| (i, p.pow(k - t as u32))).collect();
        Self::new(p, &segs)
    }

    pub fn from_json(p: u64, json: &FiltrationJson) -> Result<Self> {
        Self::new(p, &json.orders)
    }

    pub fn to_json(&self) -> FiltrationJson {
        FiltrationJson { orders: self.segments.clone() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn segments(&self) -> &[(u64, u64)] {
        &self.segments
    }

    /// Order of G_i.
    pub fn e(&self, i: u64) -> u64 {
        self.segments.iter().find(|s| i <= s.0).map_or(1, |s| s.1)
    }

    pub fn e0(&self) -> u64 {
        self.e(0)
    }

    /// log_p e_0.
    pub fn log_e0(&self) -> u32 {
        log_p(self.e0(), self.p).expect("orders are powers of p")
    }

    pub fn is_ramified(&self) -> bool {
        !self.segments.is_empty()
    }

    /// d = sum_{i >= 0} (e_i - 1).
    pub fn hilbert_different(&self) -> u64 {
        let mut start = 0u64;
        let mut d = 0u64;
        for &(last, order) in &self.segments {
            d += (last + 1 - start) * (order - 1);
            start = last + 1;
        }
        d
    }

    /// sum_{i >= from} (e_i - 1).
    pub fn tail_sum(&self, from: u64) -> u64 {
        let mut start = 0u64;
        let mut acc = 0u64;
        for &(last, order) in &self.segments {
            let lo = start.max(from);
            if last >= lo {
                acc += (last + 1 - lo) * (order - 1);
            }
            start = last + 1;
        }
        acc
    }

    /// G_2 trivial.
    pub fn is_weakly_ramified(&self) -> bool {
        self.e(2) == 1
    }

    /// Lower jumps with multiplicity; defined when every drop in the
    /// filtration is by exactly a factor p (the cyclic situation).
    pub fn lower_jumps(&self) -> Result<Vec<u64>> {
        let mut jumps = Vec::new();
        for (idx, &(last, order)) in self.segments.iter().enumerate() {
            let next = self.segments.get(idx + 1).map_or(1, |s| s.1);
            if order != next * self.p {
                return Err(Error::NotHasseArf(format!(
                    "order drops from {order} to {next} after index {last}; a cyclic filtration drops by p"
                )));
            }
            jumps.push(last);
        }
        Ok(jumps)
    }

    pub fn jump_data(&self) -> Result<JumpData> {
        JumpData::from_lower(self.p, &self.lower_jumps()?)
    }
}

/// Lower and upper jumps of a cyclic ramification filtration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JumpData {
    pub p: u64,
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
}

/// Splits lower jumps into the Hasse-Arf increments a_0, ..., a_{k-1}, with
/// i_t = a_0 + p a_1 + ... + p^{t-1} a_{t-1}.
fn hasse_arf_increments(p: u64, lower: &[u64]) -> Result<Vec<u64>> {
    let mut a = Vec::with_capacity(lower.len());
    let mut prev = 0u64;
    let mut scale = 1u64;
    for &i in lower {
        if i <= prev {
            return Err(Error::NotHasseArf(format!("lower jumps {lower:?} are not strictly increasing and positive")));
        }
        let diff = i - prev;
        if !diff.is_multiple_of(scale) {
            return Err(Error::NotHasseArf(format!(
                "lower jumps {lower:?}: difference {diff} is not divisible by {scale}"
            )));
        }
        a.push(diff / scale);
        prev = i;
        scale *= p;
    }
    Ok(a)
}

pub fn lower_to_upper(p: u64, lower: &[u64]) -> Result<Vec<u64>> {
    let a = hasse_arf_increments(p, lower)?;
    Ok(a.iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect())
}

pub fn upper_to_lower(p: u64, upper: &[u64]) -> Result<Vec<u64>> {
    let mut prev = 0u64;
    let mut scale = 1u64;
    let mut lower_acc = 0u64;
    let mut out = Vec::with_capacity(upper.len());
    for &u in upper {
        if u <= prev {
            return Err(Error::NotHasseArf(format!("upper jumps {upper:?} are not strictly increasing and positive")));
        }
        lower_acc += scale * (u - prev);
        out.push(lower_acc);
        prev = u;
        scale *= p;
    }
    Ok(out)
}

impl JumpData {
    pub fn from_lower(p: u64, lower: &[u64]) -> Result<Self> {
        let upper = lower_to_upper(p, lower)?;
        Ok(Self { p, lower: lower.to_vec(), upper })
    }

    pub fn from_upper(p: u64, upper: &[u64]) -> Result<Self> {
        let lower = upper_to_lower(p, upper)?;
        Ok(Self { p, lower, upper: upper.to_vec() })
    }

    /// k = log_p e_0.
    pub fn k(&self) -> u32 {
        self.lower.len() as u32
    }

    pub fn e0(&self) -> u64 {
        self.p.pow(self.k())
    }

    /// Highest lower jump N (0 when unramified).
    pub fn highest_lower(&self) -> u64 {
        self.lower.last().copied().unwrap_or(0)
    }

    /// Highest upper jump M (0 when unramified).
    pub fn highest_upper(&self) -> u64 {
        self.upper.last().copied().unwrap_or(0)
    }

    pub fn filtration(&self) -> Result<RamificationFiltration> {
        RamificationFiltration::from_lower_jumps(self.p, &self.lower)
    }
}

/// d = (1 + M) p^k - (1 + N).
pub fn different_from_jumps(j: &JumpData) -> u64 {
    (1 + j.highest_upper()) * j.e0() - (1 + j.highest_lower())
}

pub fn hilbert_different(f: &RamificationFiltration) -> u64 {
    f.hilbert_different()
}

pub fn is_weakly_ramified(f: &RamificationFiltration) -> bool {
    f.is_weakly_ramified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Direct sum over the full sequence, as an oracle for the segment code.
    fn different_by_enumeration(f: &RamificationFiltration) -> u64 {
        let end = f.segments().last().map_or(0, |s| s.0);
        (0..=end + 3).map(|i| f.e(i) - 1).sum()
    }

    #[test]
    fn different_examples() {
        assert_eq!(RamificationFiltration::unramified(5).unwrap().hilbert_different(), 0);
        for q in [2, 4, 8, 3, 9, 5, 25, 7] {
            let p = if q % 2 == 0 { 2 } else if q % 3 == 0 { 3 } else if q % 5 == 0 { 5 } else { 7 };
            let f = RamificationFiltration::weakly_ramified(p, q).unwrap();
            assert_eq!(f.hilbert_different(), 2 * (q - 1));
        }
        let f = RamificationFiltration::new(5, &[(3, 5)]).unwrap();
        assert_eq!(f.hilbert_different(), 16);
        assert_eq!(different_by_enumeration(&f), 16);
    }

    #[test]
    fn jump_conversion_examples() {
        assert_eq!(lower_to_upper(2, &[1, 3]).unwrap(), vec![1, 2]);
        for p in [2, 3, 5, 7] {
            assert_eq!(lower_to_upper(p, &[11]).unwrap(), vec![11]);
        }
        assert_eq!(lower_to_upper(3, &[2, 5]).unwrap(), vec![2, 3]);
        assert!(matches!(lower_to_upper(3, &[2, 4]), Err(Error::NotHasseArf(_))));
        assert!(matches!(lower_to_upper(2, &[3, 3]), Err(Error::NotHasseArf(_))));
        assert!(matches!(upper_to_lower(2, &[2, 2]), Err(Error::NotHasseArf(_))));
    }

    #[test]
    fn different_from_jumps_examples() {
        let j = JumpData::from_lower(5, &[3]).unwrap();
        assert_eq!(different_from_jumps(&j), 16);
        let j = JumpData::from_lower(2, &[1, 3]).unwrap();
        assert_eq!(j.upper, vec![1, 2]);
        assert_eq!(different_from_jumps(&j), 8);
        let f = RamificationFiltration::from_lower_jumps(2, &[1, 3]).unwrap();
        assert_eq!(f.hilbert_different(), 3 + 3 + 1 + 1);
        for p in [2, 3, 5, 7] {
            assert_eq!(different_from_jumps(&JumpData::from_lower(p, &[1]).unwrap()), 2 * (p - 1));
        }
    }

    #[test]
    fn weak_ramification_predicate() {
        assert!(RamificationFiltration::weakly_ramified(3, 9).unwrap().is_weakly_ramified());
        assert!(RamificationFiltration::unramified(3).unwrap().is_weakly_ramified());
        assert!(!RamificationFiltration::new(5, &[(3, 5)]).unwrap().is_weakly_ramified());
    }

    #[test]
    fn constructor_rejects_invalid_data() {
        assert!(matches!(RamificationFiltration::new(5, &[(0, 5)]), Err(Error::InvalidFiltration(_))));
        assert!(matches!(RamificationFiltration::new(5, &[(3, 6)]), Err(Error::InvalidFiltration(_))));
        assert!(matches!(RamificationFiltration::new(2, &[(1, 2), (3, 4)]), Err(Error::InvalidFiltration(_))));
        assert!(matches!(RamificationFiltration::new(2, &[(3, 4), (3, 2)]), Err(Error::InvalidFiltration(_))));
        assert!(matches!(RamificationFiltration::new(4, &[(3, 4)]), Err(Error::NotPrime(4))));
        // equal orders merge, trailing 1s drop
        let f = RamificationFiltration::new(3, &[(1, 9), (4, 9), (6, 1)]).unwrap();
        assert_eq!(f.segments(), &[(4, 9)]);
    }

    #[test]
    fn non_cyclic_filtrations_reject_jump_conversion() {
        let f = RamificationFiltration::weakly_ramified(2, 8).unwrap();
        assert_eq!(f.hilbert_different(), 14);
        assert!(matches!(f.jump_data(), Err(Error::NotHasseArf(_))));
    }

    #[test]
    fn json_shape() {
        let json: FiltrationJson = serde_json::from_str(r#"{"orders": [[1, 4], [3, 2]]}"#).unwrap();
        let f = RamificationFiltration::from_json(2, &json).unwrap();
        assert_eq!(f.lower_jumps().unwrap(), vec![1, 3]);
        assert_eq!(f.to_json(), json);
    }

    fn hasse_arf_data() -> impl Strategy<Value = (u64, Vec<u64>)> {
        (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], prop::collection::vec(1u64..20, 0..5))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn segment_different_matches_jump_formula((p, a) in hasse_arf_data()) {
            let mut upper = Vec::new();
            let mut acc = 0;
            for x in &a { acc += x; upper.push(acc); }
            let j = JumpData::from_upper(p, &upper).unwrap();
            prop_assert_eq!(JumpData::from_lower(p, &j.lower).unwrap(), j.clone());
            let f = j.filtration().unwrap();
            prop_assert_eq!(f.hilbert_different(), different_from_jumps(&j));
            prop_assert_eq!(f.hilbert_different(), different_by_enumeration(&f));
            prop_assert_eq!(f.jump_data().unwrap(), j.clone());
            prop_assert!(f.hilbert_different() >= 2 * (f.e0() - 1));
            prop_assert_eq!(f.hilbert_different() == 2 * (f.e0() - 1), f.is_weakly_ramified());
        }
    }
}
