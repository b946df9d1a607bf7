//! G-invariant divisors stored per orbit, the floor pushforward to the
//! quotient, and the count of indecomposable summands of Riemann-Roch spaces
//! for cyclic groups.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cover::CoverData;
use crate::error::{Error, Result};

/// Names a G-orbit of points on X, or equivalently its image point on Y.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitLabel {
    /// The j-th branch orbit of the cover.
    Branch(usize),
    /// A free orbit (unramified point of Y), created on demand.
    Unram(String),
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Branch(j) => write!(f, "{j}"),
            OrbitLabel::Unram(s) => write!(f, "unram:{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelJson {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub orbit: LabelJson,
    pub n: i64,
}

/// On-disk shape: `{"coeffs": [{"orbit": 0, "n": 12}, {"orbit": "unram:a", "n": 1}]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub coeffs: Vec<CoeffJson>,
}

impl OrbitLabel {
    fn from_json(label: &LabelJson) -> Result<Self> {
        match label {
            LabelJson::Index(j) => Ok(OrbitLabel::Branch(*j)),
            LabelJson::Name(s) => match s.strip_prefix("unram:") {
                Some(rest) if !rest.is_empty() => Ok(OrbitLabel::Unram(rest.to_string())),
                _ => Err(Error::InvalidDivisor(format!("label {s:?} is neither an orbit index nor \"unram:<name>\""))),
            },
        }
    }

    fn to_json(&self) -> LabelJson {
        match self {
            OrbitLabel::Branch(j) => LabelJson::Index(*j),
            OrbitLabel::Unram(s) => LabelJson::Name(format!("unram:{s}")),
        }
    }
}

fn coeffs_from_json(json: &DivisorJson) -> Result<BTreeMap<OrbitLabel, i64>> {
    let mut coeffs = BTreeMap::new();
    for c in &json.coeffs {
        *coeffs.entry(OrbitLabel::from_json(&c.orbit)?).or_insert(0) += c.n;
    }
    coeffs.retain(|_, n| *n != 0);
    Ok(coeffs)
}

fn coeffs_to_json(coeffs: &BTreeMap<OrbitLabel, i64>) -> DivisorJson {
    DivisorJson { coeffs: coeffs.iter().map(|(l, &n)| CoeffJson { orbit: l.to_json(), n }).collect() }
}

/// A divisor on the quotient curve Y, on labelled points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuotientDivisor {
    coeffs: BTreeMap<OrbitLabel, i64>,
}

impl QuotientDivisor {
    pub fn new(coeffs: impl IntoIterator<Item = (OrbitLabel, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (l, n) in coeffs {
            *map.entry(l).or_insert(0) += n;
        }
        map.retain(|_, n| *n != 0);
        Self { coeffs: map }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_json(json: &DivisorJson) -> Result<Self> {
        Ok(Self { coeffs: coeffs_from_json(json)? })
    }

    pub fn to_json(&self) -> DivisorJson {
        coeffs_to_json(&self.coeffs)
    }

    pub fn coeff(&self, label: &OrbitLabel) -> i64 {
        self.coeffs.get(label).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<OrbitLabel, i64> {
        &self.coeffs
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Number of points in the support.
    pub fn reduced_degree(&self) -> i64 {
        self.coeffs.len() as i64
    }
}

/// A G-invariant divisor on X: one coefficient per G-orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDivisor<'a> {
    cover: &'a CoverData,
    coeffs: BTreeMap<OrbitLabel, i64>,
}

impl<'a> OrbitDivisor<'a> {
    pub fn new(cover: &'a CoverData, coeffs: impl IntoIterator<Item = (OrbitLabel, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (l, n) in coeffs {
            if let OrbitLabel::Branch(j) = l {
                if j >= cover.r() {
                    return Err(Error::InvalidDivisor(format!("orbit index {j} but the cover has {} branch orbits", cover.r())));
                }
            }
            *map.entry(l).or_insert(0) += n;
        }
        map.retain(|_, n| *n != 0);
        Ok(Self { cover, coeffs: map })
    }

    pub fn zero(cover: &'a CoverData) -> Self {
        Self { cover, coeffs: BTreeMap::new() }
    }

    pub fn from_json(cover: &'a CoverData, json: &DivisorJson) -> Result<Self> {
        Self::new(cover, coeffs_from_json(json)?)
    }

    pub fn to_json(&self) -> DivisorJson {
        coeffs_to_json(&self.coeffs)
    }

    pub fn cover(&self) -> &'a CoverData {
        self.cover
    }

    pub fn coeff(&self, label: &OrbitLabel) -> i64 {
        self.coeffs.get(label).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<OrbitLabel, i64> {
        &self.coeffs
    }

    /// Degree on X: each orbit contributes (orbit size) * coefficient.
    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|(l, &n)| self.cover.orbit_size(l) as i64 * n).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&n| n >= 0)
    }

    /// Coefficient 1 on every orbit of the support.
    pub fn reduced(&self) -> OrbitDivisor<'a> {
        Self { cover: self.cover, coeffs: self.coeffs.keys().map(|l| (l.clone(), 1)).collect() }
    }

    pub fn plus(&self, other: &OrbitDivisor<'a>) -> OrbitDivisor<'a> {
        assert!(std::ptr::eq(self.cover, other.cover), "divisors on different covers");
        let mut map = self.coeffs.clone();
        for (l, &n) in &other.coeffs {
            *map.entry(l.clone()).or_insert(0) += n;
        }
        map.retain(|_, n| *n != 0);
        Self { cover: self.cover, coeffs: map }
    }

    pub fn scaled(&self, k: i64) -> OrbitDivisor<'a> {
        let mut map: BTreeMap<_, _> = self.coeffs.iter().map(|(l, &n)| (l.clone(), k * n)).collect();
        map.retain(|_, n| *n != 0);
        Self { cover: self.cover, coeffs: map }
    }

    /// Adds `n` to the coefficient at `label`.
    pub fn with_added(&self, label: OrbitLabel, n: i64) -> Result<OrbitDivisor<'a>> {
        let mut coeffs: Vec<_> = self.coeffs.iter().map(|(l, &v)| (l.clone(), v)).collect();
        coeffs.push((label, n));
        Self::new(self.cover, coeffs)
    }
}

fn require_cyclic(cover: &CoverData) -> Result<()> {
    if cover.is_cyclic() {
        Ok(())
    } else {
        Err(Error::NotCyclic("the cover is not flagged cyclic".into()))
    }
}

/// Coefficient floor(n / e_0) at every quotient point.
pub fn floor_pushforward_closed(d: &OrbitDivisor<'_>) -> Result<QuotientDivisor> {
    require_cyclic(d.cover)?;
    Ok(QuotientDivisor::new(d.coeffs.iter().map(|(l, &n)| {
        let e0 = d.cover.e0(l) as i64;
        (l.clone(), n.div_euclid(e0))
    })))
}

/// The iterated pushforward through the tower X = X_0 -> X_1 -> ... -> X_nu = Y
/// of quotients by the subgroups of order p^mu. At a point with e_0 = p^kappa
/// the last kappa steps are ramified, each mapping n to floor(n / p); the
/// unramified steps push forward an invariant coefficient unchanged.
pub fn floor_pushforward_iterated(d: &OrbitDivisor<'_>) -> Result<QuotientDivisor> {
    require_cyclic(d.cover)?;
    let p = d.cover.p() as i64;
    let nu = d.cover.log_order();
    Ok(QuotientDivisor::new(d.coeffs.iter().map(|(l, &n)| {
        let kappa = d.cover.log_e0(l);
        let mut c = n;
        for step in 1..=nu {
            // the subgroup H_step has order p^step; it meets the inertia group
            // G_0 (order p^kappa) in a group of order p^min(step, kappa)
            if step <= kappa {
                c = c.div_euclid(p);
            }
        }
        (l.clone(), c)
    })))
}

/// Tot(H^0(X, O(D))) = 1 - g_Y + sum_Q floor(n_Q / e_0(Q)) for cyclic G and
/// deg D > 2 g_X - 2. The g_X >= 2 standing assumption is not needed here.
pub fn tot_riemann_roch(d: &OrbitDivisor<'_>) -> Result<i64> {
    require_cyclic(d.cover)?;
    let bound = 2 * d.cover.genus_x()? - 2;
    let degree = d.degree();
    if degree <= bound {
        return Err(Error::DegreeTooSmall { degree, bound });
    }
    Ok(1 - d.cover.genus_quotient() as i64 + floor_pushforward_closed(d)?.degree())
}

/// Multiplicities m_1, ..., m_{p^nu} of the indecomposables V_l of a cyclic
/// group of order p^nu in a module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDecomposition {
    pub p: u64,
    pub nu: u32,
    /// `m[l - 1]` is the multiplicity of V_l.
    pub m: Vec<u64>,
    pub tot: u64,
    pub dim: u64,
}

impl ModuleDecomposition {
    pub fn new(p: u64, nu: u32, m: Vec<u64>) -> Result<Self> {
        let order = p.pow(nu) as usize;
        if m.len() != order {
            return Err(Error::InvalidInput(format!("{} multiplicities for a group of order {order}", m.len())));
        }
        let tot = m.iter().sum();
        let dim = m.iter().enumerate().map(|(i, &x)| (i as u64 + 1) * x).sum();
        Ok(Self { p, nu, m, tot, dim })
    }

    pub fn multiplicity(&self, l: usize) -> u64 {
        self.m[l - 1]
    }

    /// Multiplicity of the regular representation V_{p^nu}.
    pub fn free_rank(&self) -> u64 {
        *self.m.last().expect("group order >= 1")
    }

    pub fn is_free(&self) -> bool {
        self.m[..self.m.len() - 1].iter().all(|&x| x == 0)
    }
}
