//! Closed-form dimension formulas evaluated on [`CoverData`]. Each evaluator
//! checks its own hypotheses and reports which formula produced the value.

use serde::{Deserialize, Serialize};

use crate::cover::CoverData;
use crate::error::{Error, Result};
use crate::ramification::JumpData;

/// A formula value with the pieces it was assembled from:
/// `value = constant + sum(per_orbit)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub value: i64,
    pub formula: String,
    pub p: u64,
    pub g_y: u64,
    pub r: usize,
    pub constant: i64,
    pub per_orbit: Vec<i64>,
}

impl DimensionReport {
    fn new(c: &CoverData, formula: &str, constant: i64, per_orbit: Vec<i64>) -> Self {
        let value = constant + per_orbit.iter().sum::<i64>();
        Self { value, formula: formula.into(), p: c.p(), g_y: c.genus_quotient(), r: c.r(), constant, per_orbit }
    }

    /// A dimension is never negative on a cover with g_X >= 2.
    fn checked(self, c: &CoverData) -> Result<Self> {
        if self.value < 0 && c.genus_x().is_ok_and(|g| g >= 2) {
            return Err(Error::Consistency(format!("{} formula gave {} on a cover with g_X >= 2", self.formula, self.value)));
        }
        Ok(self)
    }
}

fn three_gy_minus_3(c: &CoverData) -> i64 {
    3 * c.genus_quotient() as i64 - 3
}

/// Tame reference value 3g_Y - 3 + r.
pub fn dim_tame(c: &CoverData) -> DimensionReport {
    DimensionReport::new(c, "tame", three_gy_minus_3(c), vec![1; c.r()])
}

/// 3g_Y - 3 + sum_j floor(2 d_j / e_0(j)) for cyclic G.
pub fn dim_cyclic(c: &CoverData) -> Result<DimensionReport> {
    if !c.is_cyclic() {
        return Err(Error::NotCyclic("dim_cyclic needs a cyclic group".into()));
    }
    c.require_genus_at_least_2()?;
    let terms = c.orbits().iter().map(|o| (2 * o.d() / o.e0()) as i64).collect();
    DimensionReport::new(c, "cyclic", three_gy_minus_3(c), terms).checked(c)
}

/// 2(1 + M) + floor(-2(1 + N) / e_0); equals floor(2d / e_0).
pub fn hasse_arf_identity_rhs(j: &JumpData) -> Result<i64> {
    let fresh = JumpData::from_lower(j.p, &j.lower)?;
    if fresh.upper != j.upper {
        return Err(Error::NotHasseArf(format!("upper jumps {:?} do not match lower jumps {:?}", j.upper, j.lower)));
    }
    let e0 = j.e0() as i64;
    let m = j.highest_upper() as i64;
    let n = j.highest_lower() as i64;
    Ok(2 * (1 + m) + (-2 * (1 + n)).div_euclid(e0))
}

/// 3g_Y - 3 + sum_j log_p e_0(j) + (2r if p > 3, r if p = 2, 3) for weakly
/// ramified G.
pub fn dim_weakly_ramified(c: &CoverData) -> Result<DimensionReport> {
    c.require_weakly_ramified()?;
    c.require_genus_at_least_2()?;
    let extra = if c.p() > 3 { 2 } else { 1 };
    let terms = c.orbits().iter().map(|o| o.filtration.log_e0() as i64 + extra).collect();
    DimensionReport::new(c, "weakly", three_gy_minus_3(c), terms).checked(c)
}

/// Rank 3(g_Y - 1 + r) of the free k[G]-module H^0(X, Omega^2(3 R_red)) for
/// weakly ramified G.
pub fn free_rank_aug(c: &CoverData) -> Result<DimensionReport> {
    c.require_weakly_ramified()?;
    DimensionReport::new(c, "free-rank", three_gy_minus_3(c), vec![3; c.r()]).checked(c)
}

/// Closed-form H_0, H_1 of G acting on the 3-dimensional local modules,
/// summed over the branch orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomologyValue {
    Dims { h0: i64, h1: i64 },
    /// Only h0 - h1 is determined.
    Difference { h0_minus_h1: i64 },
}

impl HomologyValue {
    /// h1 - h0.
    pub fn h1_minus_h0(&self) -> i64 {
        match *self {
            HomologyValue::Dims { h0, h1 } => h1 - h0,
            HomologyValue::Difference { h0_minus_h1 } => -h0_minus_h1,
        }
    }
}

pub fn homology_dims_closed(c: &CoverData) -> Result<HomologyValue> {
    c.require_weakly_ramified()?;
    let r = c.r() as i64;
    let logs: i64 = c.orbits().iter().map(|o| o.filtration.log_e0() as i64).sum();
    Ok(match c.p() {
        2 => HomologyValue::Difference { h0_minus_h1: 2 * r - logs },
        3 => HomologyValue::Dims { h0: r, h1: logs - r },
        _ => HomologyValue::Dims { h0: r, h1: logs },
    })
}

/// Borne's invariant b(G, D, k): the k[G]-rank of the semisimple part of
/// H^0(X, Omega(D)) for the effective canonical D of
/// [`crate::cover::effective_canonical`].
pub fn p_rank_free_rank(c: &CoverData, gamma_y: u64, deg_phi_red: Option<u64>) -> Result<DimensionReport> {
    if c.p() <= 3 {
        return Err(Error::SmallCharacteristic(c.p()));
    }
    if c.r() == 0 {
        return Err(Error::Unramified);
    }
    let g_y = c.genus_quotient();
    if gamma_y > g_y {
        return Err(Error::InvalidInput(format!("p-rank {gamma_y} exceeds g_Y = {g_y}")));
    }
    let phi_term = match (g_y, deg_phi_red) {
        (0, None) => 0,
        (0, Some(_)) => return Err(Error::InvalidInput("deg div(phi)_red is only used when g_Y >= 1".into())),
        (_, None) => return Err(Error::MissingPhi("g_Y >= 1 needs deg div(phi)_red".into())),
        (_, Some(k)) => {
            if k > 2 * g_y - 2 {
                return Err(Error::InvalidInput(format!("div(phi) has degree {} so its support has at most that many points, not {k}", 2 * g_y - 2)));
            }
            k as i64
        }
    };
    DimensionReport::new(c, "p-rank", gamma_y as i64 - 1 + phi_term, vec![1; c.r()]).checked(c)
}

/// dim H^0(X, Omega^2)_G = dim (H_D^n)_G + b.
pub fn coinvariants_from_nilpotent(nilpotent_coinvariants: u64, b: i64) -> i64 {
    nilpotent_coinvariants as i64 + b
}

/// n_{k[G]} = m_{k[G]} - b, the multiplicity of k[G] in the nilpotent part.
pub fn nilpotent_regular_multiplicity(m_regular: i64, b: i64) -> Result<i64> {
    let n = m_regular - b;
    if n < 0 {
        return Err(Error::Consistency(format!("m_k[G] = {m_regular} is smaller than b = {b}")));
    }
    Ok(n)
}

/// m_{k[G]} = 3g_Y - 3 + sum_j floor((N_j + 2)(p - 1) / p) for |G| = p.
pub fn m_regular_cyclic_p(c: &CoverData) -> Result<DimensionReport> {
    if c.log_order() != 1 {
        return Err(Error::NotCyclicOrderP(format!("|G| = {}", c.group_order())));
    }
    let p = c.p() as i64;
    let terms = c
        .orbits()
        .iter()
        .map(|o| {
            let n = o.filtration.jump_data().map(|j| j.highest_lower() as i64)?;
            Ok((n + 2) * (p - 1) / p)
        })
        .collect::<Result<Vec<_>>>()?;
    DimensionReport::new(c, "m-regular", three_gy_minus_3(c), terms).checked(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::BranchOrbit;
    use crate::ramification::{different_from_jumps, RamificationFiltration};
    use proptest::prelude::*;

    fn cover(p: u64, n: u32, g_y: u64, filtrations: &[&[(u64, u64)]], cyclic: Option<bool>) -> CoverData {
        let orbits = filtrations.iter().map(|s| BranchOrbit::new(RamificationFiltration::new(p, s).unwrap())).collect();
        CoverData::new(p, n, g_y, orbits, cyclic).unwrap()
    }

    fn weak(p: u64, g_y: u64, r: usize) -> CoverData {
        let orbits = (0..r).map(|_| BranchOrbit::new(RamificationFiltration::weakly_ramified(p, p).unwrap())).collect();
        CoverData::new(p, 1, g_y, orbits, None).unwrap()
    }

    #[test]
    fn tame_examples() {
        assert_eq!(dim_tame(&cover(5, 1, 2, &[], None)).value, 3);
        let four: Vec<&[(u64, u64)]> = vec![&[(1, 5)]; 4];
        assert_eq!(dim_tame(&cover(5, 1, 0, &four, None)).value, 1);
        assert_eq!(dim_tame(&cover(5, 1, 1, &[&[(1, 5)]], None)).value, 1);
    }

    #[test]
    fn cyclic_examples() {
        let c = cover(5, 1, 0, &[&[(3, 5)]], None);
        let rep = dim_cyclic(&c).unwrap();
        assert_eq!(rep.value, 3);
        assert_eq!(rep.per_orbit, vec![6]);
        let c = cover(2, 2, 0, &[&[(1, 4), (5, 2)]], Some(true));
        assert_eq!(dim_cyclic(&c).unwrap().value, 2);
        for (p, extra) in [(5, 3), (7, 3), (2, 2), (3, 2)] {
            for r in 1..=4usize {
                let c = weak(p, 2, r);
                assert_eq!(dim_cyclic(&c).unwrap().value, 3 + extra * r as i64);
            }
        }
    }

    #[test]
    fn cyclic_preconditions() {
        let c = cover(2, 2, 0, &[&[(1, 4)], &[(1, 4)]], Some(false));
        assert!(matches!(dim_cyclic(&c), Err(Error::NotCyclic(_))));
        let c = cover(2, 1, 0, &[&[(1, 2)], &[(1, 2)]], None);
        assert!(matches!(dim_cyclic(&c), Err(Error::GenusTooSmall(1))));
    }

    #[test]
    fn hasse_arf_rhs_examples() {
        assert_eq!(hasse_arf_identity_rhs(&JumpData::from_lower(5, &[3]).unwrap()).unwrap(), 6);
        for p in [5, 7, 11] {
            assert_eq!(hasse_arf_identity_rhs(&JumpData::from_lower(p, &[1]).unwrap()).unwrap(), 3);
        }
        assert_eq!(hasse_arf_identity_rhs(&JumpData::from_lower(2, &[1, 3]).unwrap()).unwrap(), 4);
        let bogus = JumpData { p: 3, lower: vec![2, 4], upper: vec![2, 3] };
        assert!(matches!(hasse_arf_identity_rhs(&bogus), Err(Error::NotHasseArf(_))));
        let bogus = JumpData { p: 2, lower: vec![1, 3], upper: vec![1, 3] };
        assert!(matches!(hasse_arf_identity_rhs(&bogus), Err(Error::NotHasseArf(_))));
    }

    #[test]
    fn weakly_ramified_examples() {
        let c = cover(5, 1, 0, &[&[(1, 5)], &[(1, 5)]], None);
        assert_eq!(dim_weakly_ramified(&c).unwrap().value, 3);
        assert_eq!(dim_weakly_ramified(&c).unwrap().value, dim_cyclic(&c).unwrap().value);
        let c = cover(3, 2, 1, &[&[(1, 9)]], None);
        assert_eq!(dim_weakly_ramified(&c).unwrap().value, 3);
        for r in 3..=6usize {
            let c = weak(2, 0, r);
            assert_eq!(dim_weakly_ramified(&c).unwrap().value, -3 + 2 * r as i64);
        }
        let c = cover(5, 1, 0, &[&[(3, 5)]], None);
        let err = dim_weakly_ramified(&c).unwrap_err();
        assert!(err.to_string().contains("G_2 nontrivial"));
    }

    #[test]
    fn free_rank_examples() {
        assert_eq!(free_rank_aug(&cover(5, 1, 0, &[&[(1, 5)], &[(1, 5)]], None)).unwrap().value, 3);
        assert_eq!(free_rank_aug(&cover(5, 1, 1, &[], None)).unwrap().value, 0);
        assert_eq!(free_rank_aug(&cover(5, 1, 0, &[&[(1, 5)]], None)).unwrap().value, 0);
        assert!(matches!(free_rank_aug(&cover(5, 1, 0, &[&[(3, 5)]], None)), Err(Error::NotWeaklyRamified(_))));
    }

    #[test]
    fn homology_closed_examples() {
        assert_eq!(
            homology_dims_closed(&cover(5, 1, 0, &[&[(1, 5)], &[(1, 5)]], None)).unwrap(),
            HomologyValue::Dims { h0: 2, h1: 2 }
        );
        assert_eq!(homology_dims_closed(&cover(3, 3, 0, &[&[(1, 27)]], None)).unwrap(), HomologyValue::Dims { h0: 1, h1: 2 });
        assert_eq!(
            homology_dims_closed(&cover(2, 2, 0, &[&[(1, 4)], &[(1, 4)]], None)).unwrap(),
            HomologyValue::Difference { h0_minus_h1: 0 }
        );
    }

    #[test]
    fn p_rank_examples() {
        let c = cover(5, 1, 0, &[&[(3, 5)]], None);
        assert_eq!(p_rank_free_rank(&c, 0, None).unwrap().value, 0);
        let c = weak(5, 0, 3);
        assert_eq!(p_rank_free_rank(&c, 0, None).unwrap().value, 2);
        let c = weak(5, 2, 2);
        assert_eq!(p_rank_free_rank(&c, 1, Some(2)).unwrap().value, 4);
        assert!(matches!(p_rank_free_rank(&c, 1, None), Err(Error::MissingPhi(_))));
        assert!(matches!(p_rank_free_rank(&c, 3, Some(2)), Err(Error::InvalidInput(_))));
        let c3 = cover(3, 1, 0, &[&[(4, 3)]], None);
        assert!(matches!(p_rank_free_rank(&c3, 0, None), Err(Error::SmallCharacteristic(3))));
        let unr = cover(5, 1, 2, &[], None);
        assert!(matches!(p_rank_free_rank(&unr, 0, Some(1)), Err(Error::Unramified)));
    }

    #[test]
    fn derived_identities() {
        assert_eq!(coinvariants_from_nilpotent(1, 2), 3);
        assert_eq!(nilpotent_regular_multiplicity(3, 2).unwrap(), 1);
        assert!(nilpotent_regular_multiplicity(1, 2).is_err());
    }

    #[test]
    fn m_regular_examples() {
        assert_eq!(m_regular_cyclic_p(&cover(5, 1, 0, &[&[(3, 5)]], None)).unwrap().value, 1);
        assert_eq!(m_regular_cyclic_p(&cover(5, 1, 0, &[&[(1, 5)], &[(1, 5)]], None)).unwrap().value, 1);
        assert_eq!(m_regular_cyclic_p(&cover(3, 1, 2, &[], None)).unwrap().value, 3);
        assert!(matches!(
            m_regular_cyclic_p(&cover(2, 2, 0, &[&[(1, 4), (3, 2)]], Some(true))),
            Err(Error::NotCyclicOrderP(_))
        ));
    }

    fn cyclic_jumps() -> impl Strategy<Value = (u64, Vec<u64>)> {
        (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], prop::collection::vec(1u64..15, 1..4)).prop_map(|(p, a)| {
            let mut acc = 0;
            (p, a.into_iter().map(|x| { acc += x; acc }).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn cyclic_term_equals_hasse_arf_rhs((p, upper) in cyclic_jumps()) {
            let j = JumpData::from_upper(p, &upper).unwrap();
            let d = different_from_jumps(&j);
            prop_assert_eq!((2 * d / j.e0()) as i64, hasse_arf_identity_rhs(&j).unwrap());
        }

        #[test]
        fn weakly_ramified_triangle(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], g_y in 0u64..4, r in 1usize..5) {
            let c = weak(p, g_y, r);
            prop_assume!(c.genus_x().unwrap() >= 2);
            let cyc = dim_cyclic(&c).unwrap().value;
            let weak = dim_weakly_ramified(&c).unwrap().value;
            let free = free_rank_aug(&c).unwrap().value;
            let hom = homology_dims_closed(&c).unwrap().h1_minus_h0();
            prop_assert_eq!(cyc, weak);
            prop_assert_eq!(weak, free + hom);
            prop_assert!(m_regular_cyclic_p(&c).unwrap().value <= cyc);
        }

        #[test]
        fn m_regular_bounded_by_tot(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], g_y in 0u64..3, jumps in prop::collection::vec(1u64..30, 1..4)) {
            let orbits = jumps.iter().map(|&n| {
                let n = if n % p == 0 { n + 1 } else { n };
                BranchOrbit::new(RamificationFiltration::from_lower_jumps(p, &[n]).unwrap())
            }).collect();
            let c = CoverData::new(p, 1, g_y, orbits, None).unwrap();
            prop_assume!(c.genus_x().unwrap() >= 2);
            prop_assert!(m_regular_cyclic_p(&c).unwrap().value <= dim_cyclic(&c).unwrap().value);
        }
    }
}
