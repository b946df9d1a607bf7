//! Global data of a G-cover X -> Y = X/G with G a p-group: Riemann-Hurwitz,
//! the ramification divisor and G-invariant canonical divisors.

use serde::{Deserialize, Serialize};

use crate::divisors::{OrbitDivisor, OrbitLabel, QuotientDivisor};
use crate::error::{Error, Result};
use crate::gf::is_prime;
use crate::ramification::{FiltrationJson, RamificationFiltration};

/// One branch orbit G.P_j, described by the filtration at a representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchOrbit {
    pub filtration: RamificationFiltration,
}

impl BranchOrbit {
    pub fn new(filtration: RamificationFiltration) -> Self {
        Self { filtration }
    }

    pub fn e0(&self) -> u64 {
        self.filtration.e0()
    }

    /// Hilbert different d(P_j).
    pub fn d(&self) -> u64 {
        self.filtration.hilbert_different()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub filtration: FiltrationJson,
}

/// `{"p": 5, "log_order": 1, "genus_quotient": 0, "orbits": [...], "cyclic": true}`.
/// `cyclic` is optional; when absent, G is taken to be cyclic iff |G| <= p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub p: u64,
    pub log_order: u32,
    pub genus_quotient: u64,
    pub orbits: Vec<OrbitJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    p: u64,
    log_order: u32,
    g_y: u64,
    orbits: Vec<BranchOrbit>,
    cyclic: bool,
}

impl CoverData {
    pub fn new(p: u64, log_order: u32, g_y: u64, orbits: Vec<BranchOrbit>, cyclic: Option<bool>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = p
            .checked_pow(log_order)
            .filter(|&o| o < (1 << 40))
            .ok_or_else(|| Error::InvalidCover(format!("|G| = {p}^{log_order} is too large")))?;
        let cyclic = cyclic.unwrap_or(log_order <= 1);
        if cyclic && log_order == 0 && !orbits.is_empty() {
            return Err(Error::InvalidCover("the trivial group has no branch points".into()));
        }
        for (j, o) in orbits.iter().enumerate() {
            let f = &o.filtration;
            if f.p() != p {
                return Err(Error::InvalidCover(format!("orbit {j}: filtration in characteristic {}", f.p())));
            }
            if !f.is_ramified() {
                return Err(Error::InvalidCover(format!(
                    "orbit {j} is unramified; unramified points enter divisors as \"unram:<label>\""
                )));
            }
            if f.e0() > order {
                return Err(Error::InvalidCover(format!("orbit {j}: e_0 = {} exceeds |G| = {order}", f.e0())));
            }
            if cyclic {
                f.jump_data()
                    .map_err(|e| Error::InvalidCover(format!("orbit {j}: G is flagged cyclic but {e}")))?;
            }
        }
        Ok(Self { p, log_order, g_y, orbits, cyclic })
    }

    pub fn from_json(json: &CoverJson) -> Result<Self> {
        let orbits = json
            .orbits
            .iter()
            .map(|o| RamificationFiltration::from_json(json.p, &o.filtration).map(BranchOrbit::new))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.p, json.log_order, json.genus_quotient, orbits, json.cyclic)
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            p: self.p,
            log_order: self.log_order,
            genus_quotient: self.g_y,
            orbits: self.orbits.iter().map(|o| OrbitJson { filtration: o.filtration.to_json() }).collect(),
            cyclic: Some(self.cyclic),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// n with |G| = p^n.
    pub fn log_order(&self) -> u32 {
        self.log_order
    }

    pub fn group_order(&self) -> u64 {
        self.p.pow(self.log_order)
    }

    pub fn genus_quotient(&self) -> u64 {
        self.g_y
    }

    /// Number r of branch points.
    pub fn r(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[BranchOrbit] {
        &self.orbits
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn is_weakly_ramified(&self) -> bool {
        self.orbits.iter().all(|o| o.filtration.is_weakly_ramified())
    }

    /// Error naming the first orbit with G_2 nontrivial, if any.
    pub fn require_weakly_ramified(&self) -> Result<()> {
        match self.orbits.iter().position(|o| !o.filtration.is_weakly_ramified()) {
            None => Ok(()),
            Some(j) => Err(Error::NotWeaklyRamified(format!("orbit {j} (e_2 = {})", self.orbits[j].filtration.e(2)))),
        }
    }

    pub fn e0(&self, label: &OrbitLabel) -> u64 {
        match label {
            OrbitLabel::Branch(j) => self.orbits[*j].e0(),
            OrbitLabel::Unram(_) => 1,
        }
    }

    pub fn log_e0(&self, label: &OrbitLabel) -> u32 {
        match label {
            OrbitLabel::Branch(j) => self.orbits[*j].filtration.log_e0(),
            OrbitLabel::Unram(_) => 0,
        }
    }

    /// Number of points of X in the orbit, |G| / e_0.
    pub fn orbit_size(&self, label: &OrbitLabel) -> u64 {
        self.group_order() / self.e0(label)
    }

    /// 2g_X - 2 = |G|(2g_Y - 2) + sum_j (|G| / e_0(j)) d_j.
    pub fn euler_char_x(&self) -> i64 {
        let g = self.group_order() as i64;
        let ram: i64 = self.orbits.iter().map(|o| (self.group_order() / o.e0() * o.d()) as i64).sum();
        g * (2 * self.g_y as i64 - 2) + ram
    }

    pub fn genus_x(&self) -> Result<i64> {
        let chi = self.euler_char_x();
        if chi.rem_euclid(2) != 0 {
            return Err(Error::NonIntegralGenus(chi));
        }
        Ok(chi / 2 + 1)
    }

    /// g_X, or GenusTooSmall when g_X < 2.
    pub fn require_genus_at_least_2(&self) -> Result<i64> {
        let g = self.genus_x()?;
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(g)
    }

    fn check_label(&self, label: &OrbitLabel) -> Result<()> {
        match label {
            OrbitLabel::Branch(j) if *j >= self.r() => {
                Err(Error::InvalidDivisor(format!("orbit index {j} but the cover has {} branch orbits", self.r())))
            }
            _ => Ok(()),
        }
    }
}

/// pi^* E: coefficient e_0 * m over each quotient point.
pub fn pullback<'a>(c: &'a CoverData, e: &QuotientDivisor) -> Result<OrbitDivisor<'a>> {
    for l in e.coeffs().keys() {
        c.check_label(l)?;
    }
    OrbitDivisor::new(c, e.coeffs().iter().map(|(l, &m)| (l.clone(), c.e0(l) as i64 * m)))
}

/// R = sum d(P) [P].
pub fn ramification_divisor(c: &CoverData) -> OrbitDivisor<'_> {
    OrbitDivisor::new(c, c.orbits.iter().enumerate().map(|(j, o)| (OrbitLabel::Branch(j), o.d() as i64)))
        .expect("branch labels are in range")
}

/// R_red = sum_{P in X_ram} [P].
pub fn reduced_ramification_divisor(c: &CoverData) -> OrbitDivisor<'_> {
    ramification_divisor(c).reduced()
}

/// K_X = pi^* K_Y + R.
pub fn canonical_divisor_x<'a>(c: &'a CoverData, k_y: &QuotientDivisor) -> Result<OrbitDivisor<'a>> {
    let expected = 2 * c.g_y as i64 - 2;
    if k_y.degree() != expected {
        return Err(Error::BadCanonicalDegree { expected, found: k_y.degree() });
    }
    let kx = pullback(c, k_y)?.plus(&ramification_divisor(c));
    let chi = c.euler_char_x();
    if kx.degree() != chi {
        return Err(Error::Consistency(format!("deg K_X = {} but 2g_X - 2 = {chi}", kx.degree())));
    }
    Ok(kx)
}

/// A G-invariant effective canonical divisor whose support contains X_ram.
///
/// For g_Y = 0 it is div(pi^* dx) for a coordinate x on Y with the divisor
/// of dx (or of dx/((x - x_1)(x - x_2)) when r >= 2) supported on branch
/// points. For g_Y >= 1 the caller supplies div(phi) of a holomorphic
/// differential phi on Y whose zeroes avoid the branch locus, and the result
/// is pi^* div(phi) + R.
pub fn effective_canonical<'a>(c: &'a CoverData, div_phi: Option<&QuotientDivisor>) -> Result<OrbitDivisor<'a>> {
    if c.p <= 3 {
        return Err(Error::SmallCharacteristic(c.p));
    }
    if c.r() == 0 {
        return Err(Error::Unramified);
    }
    let d = if c.g_y == 0 {
        if div_phi.is_some() {
            return Err(Error::InvalidInput("div(phi) is only used when g_Y >= 1".into()));
        }
        let coeffs: Vec<(OrbitLabel, i64)> = if c.r() == 1 {
            let f = &c.orbits[0].filtration;
            vec![(OrbitLabel::Branch(0), -2 + f.tail_sum(2) as i64)]
        } else {
            c.orbits
                .iter()
                .enumerate()
                .map(|(j, o)| {
                    let n = if j < 2 { -1 + o.filtration.tail_sum(1) as i64 } else { o.d() as i64 };
                    (OrbitLabel::Branch(j), n)
                })
                .collect()
        };
        OrbitDivisor::new(c, coeffs)?
    } else {
        let phi = div_phi.ok_or_else(|| Error::MissingPhi("g_Y >= 1 needs div(phi)".into()))?;
        let expected = 2 * c.g_y as i64 - 2;
        if phi.degree() != expected {
            return Err(Error::BadCanonicalDegree { expected, found: phi.degree() });
        }
        if let Some((l, n)) = phi.coeffs().iter().find(|(_, &n)| n < 0) {
            return Err(Error::MissingPhi(format!("phi must be holomorphic, but has order {n} at {l}")));
        }
        if let Some(l) = phi.coeffs().keys().find(|l| matches!(l, OrbitLabel::Branch(_))) {
            return Err(Error::MissingPhi(format!("phi vanishes at the branch point {l}")));
        }
        pullback(c, phi)?.plus(&ramification_divisor(c))
    };
    if let Some((l, n)) = d.coeffs().iter().find(|(_, &n)| n < 0) {
        return Err(Error::NotEffective(format!("coefficient {n} at orbit {l}")));
    }
    if d.degree() != c.euler_char_x() {
        return Err(Error::Consistency(format!("deg D = {} but 2g_X - 2 = {}", d.degree(), c.euler_char_x())));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn orbit(p: u64, segs: &[(u64, u64)]) -> BranchOrbit {
        BranchOrbit::new(RamificationFiltration::new(p, segs).unwrap())
    }

    fn jump3() -> CoverData {
        CoverData::new(5, 1, 0, vec![orbit(5, &[(3, 5)])], None).unwrap()
    }

    fn two_weak() -> CoverData {
        CoverData::new(5, 1, 0, vec![orbit(5, &[(1, 5)]), orbit(5, &[(1, 5)])], None).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(jump3().genus_x().unwrap(), 4);
        assert_eq!(two_weak().genus_x().unwrap(), 4);
        for p in [2, 3, 5, 7] {
            let c = CoverData::new(p, 1, 2, vec![], None).unwrap();
            assert_eq!(c.euler_char_x(), 2 * p as i64);
            assert_eq!(c.genus_x().unwrap(), p as i64 + 1);
        }
    }

    #[test]
    fn odd_riemann_hurwitz_is_rejected() {
        // e = (4, 4, 2, 1, ...): d = 7, so 2g_X - 2 = 4 * (-2) + 7 = -1
        let c = CoverData::new(2, 2, 0, vec![orbit(2, &[(1, 4), (2, 2)])], Some(false)).unwrap();
        assert!(matches!(c.genus_x(), Err(Error::NonIntegralGenus(-1))));
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(CoverData::new(6, 1, 0, vec![], None), Err(Error::NotPrime(6))));
        assert!(matches!(CoverData::new(5, 1, 0, vec![orbit(5, &[(1, 25)])], None), Err(Error::InvalidCover(_))));
        assert!(matches!(
            CoverData::new(5, 1, 0, vec![BranchOrbit::new(RamificationFiltration::unramified(5).unwrap())], None),
            Err(Error::InvalidCover(_))
        ));
        // flagged cyclic, but the filtration drops by p^2
        assert!(matches!(CoverData::new(2, 2, 0, vec![orbit(2, &[(1, 4)])], Some(true)), Err(Error::InvalidCover(_))));
        assert!(CoverData::new(2, 2, 0, vec![orbit(2, &[(1, 4)])], None).is_ok());
        assert!(!CoverData::new(2, 2, 0, vec![orbit(2, &[(1, 4)])], None).unwrap().is_cyclic());
    }

    #[test]
    fn cover_json_round_trip() {
        let json: CoverJson = serde_json::from_str(
            r#"{"p": 5, "log_order": 1, "genus_quotient": 0, "orbits": [{"filtration": {"orders": [[3, 5]]}}]}"#,
        )
        .unwrap();
        let c = CoverData::from_json(&json).unwrap();
        assert_eq!(c, jump3());
        let back: CoverJson = serde_json::from_str(&serde_json::to_string(&c.to_json()).unwrap()).unwrap();
        assert_eq!(CoverData::from_json(&back).unwrap(), c);
    }

    #[test]
    fn ramification_divisor_examples() {
        let c = CoverData::new(5, 1, 3, vec![], None).unwrap();
        assert_eq!(ramification_divisor(&c).coeffs().len(), 0);
        let c = two_weak();
        let r = ramification_divisor(&c);
        assert_eq!(r.coeff(&OrbitLabel::Branch(0)), 8);
        assert_eq!(r.coeff(&OrbitLabel::Branch(1)), 8);
        assert_eq!(reduced_ramification_divisor(&c).coeff(&OrbitLabel::Branch(1)), 1);
        let c = jump3();
        assert_eq!(ramification_divisor(&c).coeff(&OrbitLabel::Branch(0)), 16);
    }

    #[test]
    fn canonical_divisor_examples() {
        let c = jump3();
        let kx = canonical_divisor_x(&c, &QuotientDivisor::new([(OrbitLabel::Branch(0), -2)])).unwrap();
        assert_eq!(kx.coeff(&OrbitLabel::Branch(0)), 6);
        assert_eq!(kx.degree(), 6);

        let c = two_weak();
        let ky = QuotientDivisor::new([(OrbitLabel::Branch(0), -1), (OrbitLabel::Branch(1), -1)]);
        let kx = canonical_divisor_x(&c, &ky).unwrap();
        assert_eq!(kx.coeff(&OrbitLabel::Branch(0)), 3);
        assert_eq!(kx.coeff(&OrbitLabel::Branch(1)), 3);

        let c = CoverData::new(3, 1, 2, vec![], None).unwrap();
        let ky = QuotientDivisor::new([(OrbitLabel::Unram("a".into()), 3), (OrbitLabel::Unram("b".into()), -1)]);
        let kx = canonical_divisor_x(&c, &ky).unwrap();
        assert_eq!(kx.coeff(&OrbitLabel::Unram("a".into())), 3);
        assert_eq!(kx.coeff(&OrbitLabel::Unram("b".into())), -1);
        assert_eq!(kx.degree(), 2 * c.genus_x().unwrap() - 2);

        let bad = QuotientDivisor::new([(OrbitLabel::Branch(0), -1)]);
        assert!(matches!(
            canonical_divisor_x(&jump3(), &bad),
            Err(Error::BadCanonicalDegree { expected: -2, found: -1 })
        ));
    }

    #[test]
    fn effective_canonical_examples() {
        let c = jump3();
        let d = effective_canonical(&c, None).unwrap();
        assert_eq!(d.coeff(&OrbitLabel::Branch(0)), 6);
        let kx = canonical_divisor_x(&c, &QuotientDivisor::new([(OrbitLabel::Branch(0), -2)])).unwrap();
        assert_eq!(d, kx);

        let c = CoverData::new(5, 1, 0, vec![orbit(5, &[(3, 5)]), orbit(5, &[(3, 5)])], None).unwrap();
        let d = effective_canonical(&c, None).unwrap();
        assert_eq!(d.coeff(&OrbitLabel::Branch(0)), 11);
        assert_eq!(d.coeff(&OrbitLabel::Branch(1)), 11);
        assert_eq!(d.reduced(), reduced_ramification_divisor(&c));

        let c = CoverData::new(5, 1, 1, vec![orbit(5, &[(1, 5)])], None).unwrap();
        let d = effective_canonical(&c, Some(&QuotientDivisor::zero())).unwrap();
        assert_eq!(d, ramification_divisor(&c));
    }

    #[test]
    fn effective_canonical_with_phi() {
        let c = CoverData::new(5, 1, 2, vec![orbit(5, &[(1, 5)]), orbit(5, &[(3, 5)])], None).unwrap();
        let phi = QuotientDivisor::new([(OrbitLabel::Unram("a".into()), 1), (OrbitLabel::Unram("b".into()), 1)]);
        let d = effective_canonical(&c, Some(&phi)).unwrap();
        assert_eq!(d.coeff(&OrbitLabel::Unram("a".into())), 1);
        assert_eq!(d.coeff(&OrbitLabel::Branch(1)), 16);
        assert_eq!(d.degree(), 2 * c.genus_x().unwrap() - 2);
        let pull = pullback(&c, &phi).unwrap();
        assert_eq!(d.reduced(), pull.reduced().plus(&reduced_ramification_divisor(&c)));
    }

    #[test]
    fn effective_canonical_preconditions() {
        let weak = CoverData::new(5, 1, 0, vec![orbit(5, &[(1, 5)])], None).unwrap();
        assert!(matches!(effective_canonical(&weak, None), Err(Error::NotEffective(_))));
        let c3 = CoverData::new(3, 1, 0, vec![orbit(3, &[(4, 3)])], None).unwrap();
        assert!(matches!(effective_canonical(&c3, None), Err(Error::SmallCharacteristic(3))));
        let unr = CoverData::new(5, 1, 2, vec![], None).unwrap();
        assert!(matches!(effective_canonical(&unr, None), Err(Error::Unramified)));
        let g1 = CoverData::new(5, 1, 1, vec![orbit(5, &[(1, 5)])], None).unwrap();
        assert!(matches!(effective_canonical(&g1, None), Err(Error::MissingPhi(_))));
        let on_branch = QuotientDivisor::new([(OrbitLabel::Branch(0), 1), (OrbitLabel::Unram("a".into()), -1)]);
        assert!(matches!(effective_canonical(&g1, Some(&on_branch)), Err(Error::MissingPhi(_))));
    }

    proptest! {
        #[test]
        fn pullback_degree_and_canonical_degree(
            p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
            g_y in 0u64..4,
            jumps in prop::collection::vec(1u64..12, 0..4),
            coeffs in prop::collection::vec(-5i64..6, 0..4),
        ) {
            let orbits: Vec<_> = jumps.iter().map(|&n| {
                let n = if n % p == 0 { n + 1 } else { n };
                BranchOrbit::new(RamificationFiltration::from_lower_jumps(p, &[n]).unwrap())
            }).collect();
            let r = orbits.len();
            let c = CoverData::new(p, 1, g_y, orbits, None).unwrap();
            let mut e: Vec<(OrbitLabel, i64)> = coeffs.iter().enumerate().map(|(i, &n)| {
                if i < r { (OrbitLabel::Branch(i), n) } else { (OrbitLabel::Unram(format!("u{i}")), n) }
            }).collect();
            let e_div = QuotientDivisor::new(e.clone());
            prop_assert_eq!(pullback(&c, &e_div).unwrap().degree(), c.group_order() as i64 * e_div.degree());
            // fix up the degree to 2g_Y - 2 on a fresh unramified point
            e.push((OrbitLabel::Unram("fix".into()), 2 * g_y as i64 - 2 - e_div.degree()));
            let ky = QuotientDivisor::new(e);
            if let Ok(g) = c.genus_x() {
                let kx = canonical_divisor_x(&c, &ky).unwrap();
                prop_assert_eq!(kx.degree(), 2 * g - 2);
            }
        }
    }
}
