//! The pole-number property at a weakly ramified point with non-cyclic
//! stabilizer in characteristic 2: the smallest odd pole number m is 1 mod 4
//! and m - 1 is a pole number too.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeierstrassReport {
    pub smallest_odd: u64,
    pub congruent_1_mod_4: bool,
    pub predecessor_present: bool,
    pub pass: bool,
}

/// Checks a list of pole numbers (all pole numbers up to `bound`).
pub fn weierstrass_check(pole_numbers: &[u64], bound: u64) -> Result<WeierstrassReport> {
    let m = pole_numbers
        .iter()
        .copied()
        .filter(|&x| x % 2 == 1 && x <= bound)
        .min()
        .ok_or(Error::NoOddPoleNumber(bound))?;
    let congruent_1_mod_4 = m % 4 == 1;
    let predecessor_present = pole_numbers.contains(&(m - 1));
    Ok(WeierstrassReport { smallest_odd: m, congruent_1_mod_4, predecessor_present, pass: congruent_1_mod_4 && predecessor_present })
}
