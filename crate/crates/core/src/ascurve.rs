//! Explicit Artin-Schreier curves y^p - y = f(x) over P^1 with G = Z/p acting
//! by y -> y + 1. Riemann-Roch spaces of divisors supported on the ramified
//! points have explicit bases of the form c(x) y^b, so the action of sigma and
//! its Jordan type can be computed directly.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cover::{canonical_divisor_x, reduced_ramification_divisor, BranchOrbit, CoverData};
use crate::divisors::{tot_riemann_roch, OrbitDivisor, OrbitLabel, QuotientDivisor};
use crate::error::{Error, Result};
use crate::formulas::{dim_cyclic, dim_weakly_ramified, free_rank_aug, m_regular_cyclic_p};
use crate::gf::{FFElem, FiniteField, Matrix};
use crate::localfield::{build_extension, LaurentSeries};
use crate::ramification::RamificationFiltration;

/// A point of P^1 = Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Finite(FFElem),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(a) => write!(f, "x={a}"),
        }
    }
}

/// A pole of f; the point above it is totally ramified with lower jump
/// `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pole {
    pub place: Place,
    pub order: u64,
}

/// y^p - y = f(x) with f = sum_j a_j x^j + sum_a sum_k c_{a,k} (x - a)^{-k}.
#[derive(Debug, Clone)]
pub struct ASCurve {
    field: FiniteField,
    /// Coefficients of x^j, constant term first.
    poly: Vec<FFElem>,
    /// Principal parts: `(a, [c_1, c_2, ...])` for sum_k c_k (x - a)^{-k}.
    polar: Vec<(FFElem, Vec<FFElem>)>,
    /// Branch orbits in order: infinity first, then finite points by index.
    poles: Vec<Pole>,
}

fn trimmed(mut v: Vec<FFElem>) -> Vec<FFElem> {
    while v.last().is_some_and(FFElem::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[FFElem], b: &[FFElem], field: &FiniteField) -> Vec<FFElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// (x - a)^k.
fn linear_pow(a: &FFElem, k: u64, field: &FiniteField) -> Vec<FFElem> {
    let lin = vec![-a, field.one()];
    (0..k).fold(vec![field.one()], |acc, _| poly_mul(&acc, &lin, field))
}

fn add_into(acc: &mut Vec<FFElem>, other: &[FFElem], field: &FiniteField) {
    if acc.len() < other.len() {
        acc.resize(other.len(), field.zero());
    }
    for (i, c) in other.iter().enumerate() {
        acc[i] += c;
    }
}

impl ASCurve {
    pub fn new(field: &FiniteField, poly: Vec<FFElem>, polar: Vec<(FFElem, Vec<FFElem>)>) -> Result<Self> {
        let p = field.p();
        for c in poly.iter().chain(polar.iter().flat_map(|(a, cs)| std::iter::once(a).chain(cs))) {
            field.check(c)?;
        }
        let poly = trimmed(poly);
        let mut merged: Vec<(FFElem, Vec<FFElem>)> = Vec::new();
        for (a, cs) in polar {
            match merged.iter_mut().find(|(b, _)| *b == a) {
                Some((_, acc)) => add_into(acc, &cs, field),
                None => merged.push((a, cs)),
            }
        }
        let mut polar: Vec<(FFElem, Vec<FFElem>)> =
            merged.into_iter().map(|(a, cs)| (a, trimmed(cs))).filter(|(_, cs)| !cs.is_empty()).collect();
        polar.sort_by_key(|(a, _)| a.index());

        let mut poles = Vec::new();
        if poly.len() >= 2 {
            poles.push(Pole { place: Place::Infinity, order: poly.len() as u64 - 1 });
        }
        for (a, cs) in &polar {
            poles.push(Pole { place: Place::Finite(a.clone()), order: cs.len() as u64 });
        }
        if poles.is_empty() {
            return Err(Error::InvalidCurve("f is constant, so the cover is not a ramified Z/p-cover".into()));
        }
        for pole in &poles {
            if pole.order % p == 0 {
                return Err(Error::InvalidCurve(format!(
                    "pole order {} at {} is divisible by p = {p}; normalize f first",
                    pole.order, pole.place
                )));
            }
        }
        Ok(Self { field: field.clone(), poly, polar, poles })
    }

    /// Parses f from text such as `x^3`, `x + x^-1`, `2*x^5 - x^2`,
    /// `x + (x-1)^-1`. Coefficients and points are integers mod p.
    pub fn parse(field: &FiniteField, f: &str) -> Result<Self> {
        let (poly, polar) = parse_f(field, f)?;
        Self::new(field, poly, polar)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn r(&self) -> usize {
        self.poles.len()
    }

    /// 2g - 2 = -2p + sum_poles (N + 1)(p - 1).
    pub fn genus(&self) -> i64 {
        let p = self.p() as i64;
        let s: i64 = self.poles.iter().map(|q| (q.order as i64 + 1) * (p - 1)).sum();
        (s - 2 * p + 2) / 2
    }

    pub fn is_weakly_ramified(&self) -> bool {
        self.poles.iter().all(|q| q.order == 1)
    }

    /// Cover data with g_Y = 0 and one orbit per pole, in the order of
    /// [`Self::poles`].
    pub fn cover(&self) -> Result<CoverData> {
        let orbits = self
            .poles
            .iter()
            .map(|q| RamificationFiltration::from_lower_jumps(self.p(), &[q.order]).map(BranchOrbit::new))
            .collect::<Result<Vec<_>>>()?;
        CoverData::new(self.p(), 1, 0, orbits, Some(true))
    }

    /// K_Y = -2[Q_1] if r = 1, else -[Q_1] - [Q_2].
    pub fn canonical_y(&self) -> QuotientDivisor {
        if self.r() == 1 {
            QuotientDivisor::new([(OrbitLabel::Branch(0), -2)])
        } else {
            QuotientDivisor::new([(OrbitLabel::Branch(0), -1), (OrbitLabel::Branch(1), -1)])
        }
    }

    pub fn canonical_x<'a>(&self, cover: &'a CoverData) -> Result<OrbitDivisor<'a>> {
        canonical_divisor_x(cover, &self.canonical_y())
    }

    /// Builds a divisor from text like `2K`, `2K+3Rred`, `2K+5[0]`, `R - [1]`:
    /// a sum of integer multiples of K (= K_X), R, Rred and [j] (the ramified
    /// point over the j-th pole).
    pub fn named_divisor<'a>(&self, cover: &'a CoverData, text: &str) -> Result<OrbitDivisor<'a>> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidDivisor(format!("cannot parse divisor {text:?}"));
        if s.is_empty() || !s.is_ascii() {
            return Err(bad());
        }
        let mut total = OrbitDivisor::zero(cover);
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if first => (1, rest),
                _ => return Err(bad()),
            };
            first = false;
            if body.is_empty() {
                return Err(bad());
            }
            let end = body[1..].find(['+', '-']).map_or(body.len(), |i| i + 1);
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
            let k: i64 = if digits == 0 { 1 } else { term[..digits].parse().map_err(|_| bad())? };
            let k = sign * k;
            let piece = match &term[digits..] {
                "K" => self.canonical_x(cover)?,
                "R" => crate::cover::ramification_divisor(cover),
                "Rred" => reduced_ramification_divisor(cover),
                other => {
                    let j: usize = other
                        .strip_prefix('[')
                        .and_then(|x| x.strip_suffix(']'))
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(bad)?;
                    OrbitDivisor::new(cover, [(OrbitLabel::Branch(j), 1)])?
                }
            };
            total = total.plus(&piece.scaled(k));
        }
        Ok(total)
    }

    fn coefficients(&self, d: &OrbitDivisor<'_>) -> Result<Vec<i64>> {
        let cover = d.cover();
        if cover.p() != self.p() || cover.r() != self.r() || cover.log_order() != 1 {
            return Err(Error::InvalidDivisor("divisor belongs to a different cover".into()));
        }
        for label in d.coeffs().keys() {
            if let OrbitLabel::Unram(name) = label {
                return Err(Error::InvalidDivisor(format!(
                    "only divisors on ramified points are supported, found unram:{name}"
                )));
            }
        }
        Ok((0..self.r()).map(|j| d.coeff(&OrbitLabel::Branch(j))).collect())
    }

    /// E_b = sum_Q floor((n_Q - b N_Q) / p) [Q] for b = 0..p-1.
    fn layer_divisors(&self, n: &[i64]) -> Vec<Vec<i64>> {
        let p = self.p() as i64;
        (0..p)
            .map(|b| self.poles.iter().zip(n).map(|(q, &nq)| (nq - b * q.order as i64).div_euclid(p)).collect())
            .collect()
    }

    /// Basis of L(D) for D supported on the ramified points.
    pub fn rr_basis(&self, d: &OrbitDivisor<'_>) -> Result<RRBasis> {
        let n = self.coefficients(d)?;
        let layers = self.layer_divisors(&n);
        let mut elements = Vec::new();
        for (b, e) in layers.iter().enumerate() {
            let deg: i64 = e.iter().sum();
            for j in 0..=deg {
                elements.push(BasisElement { b, j: j as usize });
            }
        }
        let degree = d.degree();
        let g = self.genus();
        if degree > 2 * g - 2 {
            let expected = degree + 1 - g;
            if elements.len() as i64 != expected {
                return Err(Error::DimensionMismatch { expected, found: elements.len() as i64 });
            }
        }
        Ok(RRBasis { coefficients: n, layers, elements })
    }

    /// x^j prod_{a finite pole} (x - a)^{k_a} as a polynomial.
    fn numerator(&self, j: usize, shifts: &[i64]) -> Result<Vec<FFElem>> {
        let mut out = vec![self.field.zero(); j];
        out.push(self.field.one());
        for (q, &k) in self.poles.iter().zip(shifts) {
            if let Place::Finite(a) = &q.place {
                if k < 0 {
                    return Err(Error::BasisNotStable(format!("negative power of (x - {a})")));
                }
                out = poly_mul(&out, &linear_pow(a, k as u64, &self.field), &self.field);
            }
        }
        Ok(out)
    }

    /// Matrix of sigma: y -> y + 1 on the basis; column k is the image of
    /// element k.
    pub fn sigma_matrix(&self, basis: &RRBasis) -> Result<Matrix> {
        let f = &self.field;
        let dim = basis.elements.len();
        let mut offsets = Vec::with_capacity(basis.layers.len());
        let mut acc = 0usize;
        for e in &basis.layers {
            offsets.push(acc);
            acc += (e.iter().sum::<i64>() + 1).max(0) as usize;
        }
        let mut m = Matrix::zeros(f, dim, dim);
        for (col, el) in basis.elements.iter().enumerate() {
            // c(x) y^b -> sum_i C(b, i) c(x) y^i, with c rewritten over the
            // denominator of layer i
            for (i, (layer, &offset)) in basis.layers.iter().zip(&offsets).enumerate().take(el.b + 1) {
                let binom = binomial_mod(el.b as u64, i as u64, f.p());
                if binom == 0 {
                    continue;
                }
                let shifts: Vec<i64> = layer.iter().zip(&basis.layers[el.b]).map(|(a, b)| a - b).collect();
                let num = self.numerator(el.j, &shifts)?;
                let deg_i = layer.iter().sum::<i64>();
                let c = f.from_int(binom as i64);
                for (k, coeff) in num.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    if k as i64 > deg_i {
                        return Err(Error::BasisNotStable(format!("image of x^{} y^{} leaves layer {i}", el.j, el.b)));
                    }
                    let row = offset + k;
                    let v = m.get(row, col) + &(&c * coeff);
                    m.set(row, col, v);
                }
            }
        }
        Ok(m)
    }

    /// Jordan type of sigma on L(D).
    pub fn decompose(&self, d: &OrbitDivisor<'_>) -> Result<JordanDecomposition> {
        let basis = self.rr_basis(d)?;
        let sigma = self.sigma_matrix(&basis)?;
        JordanDecomposition::from_unipotent(&sigma, self.p())
    }

    /// Pole numbers at the ramified point over the j-th pole, up to `bound`.
    pub fn pole_numbers(&self, j: usize, bound: u64) -> Result<Vec<u64>> {
        let g = self.genus();
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        if j >= self.r() {
            return Err(Error::InvalidInput(format!("no pole with index {j}")));
        }
        let dim = |m: i64| -> i64 {
            let mut n = vec![0; self.r()];
            n[j] = m;
            self.layer_divisors(&n).iter().map(|e| (e.iter().sum::<i64>() + 1).max(0)).sum()
        };
        Ok((0..=bound).filter(|&m| m == 0 || dim(m as i64) > dim(m as i64 - 1)).collect())
    }

    /// Gaps 1 <= m <= 2g - 1 that are not pole numbers.
    pub fn gaps(&self, j: usize) -> Result<Vec<u64>> {
        let top = (2 * self.genus() - 1).max(0) as u64;
        let poles = self.pole_numbers(j, top)?;
        Ok((1..=top).filter(|m| !poles.contains(m)).collect())
    }

    /// f expanded in the local coordinate z (z = 1/x at infinity, z = x - a
    /// otherwise), to absolute precision `prec`.
    pub fn expand_f(&self, place: &Place, prec: i64) -> Result<LaurentSeries> {
        let f = &self.field;
        let mut acc = LaurentSeries::zero(f, crate::localfield::EXACT);
        match place {
            Place::Infinity => {
                for (j, c) in self.poly.iter().enumerate() {
                    acc = acc.add(&LaurentSeries::monomial(f, c.clone(), -(j as i64)))?;
                }
                for (a, cs) in &self.polar {
                    // (x - a)^{-k} = z^k (1 - a z)^{-k}
                    let base = LaurentSeries::from_terms(f, &[(0, f.one()), (1, -a)], None)?;
                    for (k, c) in cs.iter().enumerate() {
                        let k = k as i64 + 1;
                        acc = acc.add(&base.pow_with(-k, Some(prec))?.shift(k).scale(c)?)?;
                    }
                }
            }
            Place::Finite(a) => {
                let zplus = LaurentSeries::from_terms(f, &[(0, a.clone()), (1, f.one())], None)?;
                for (j, c) in self.poly.iter().enumerate() {
                    acc = acc.add(&zplus.pow(j as i64)?.scale(c)?)?;
                }
                for (b, cs) in &self.polar {
                    let base = LaurentSeries::from_terms(f, &[(0, a - b), (1, f.one())], None)?;
                    for (k, c) in cs.iter().enumerate() {
                        let k = k as i64 + 1;
                        acc = acc.add(&base.pow_with(-k, Some(prec + k))?.scale(c)?)?;
                    }
                }
            }
        }
        Ok(acc.truncate(prec))
    }

    /// v_P(x), v_P(y), v_P(dx) at the ramified point over `place`, read off
    /// from the local parameter expansion.
    pub fn local_valuations(&self, place: &Place) -> Result<LocalValuations> {
        let pole = self
            .poles
            .iter()
            .find(|q| &q.place == place)
            .ok_or_else(|| Error::NotRamifiedHere(format!("{place} is not a pole of f")))?;
        let n = pole.order as i64;
        let p = self.p() as i64;
        let prec = 2 * (n + p) + 8;
        let ext = build_extension(&self.expand_f(place, prec)?, prec)?;
        let x = match place {
            Place::Infinity => ext.s.inv()?,
            Place::Finite(a) => ext.s.add_constant(a)?,
        };
        let missing = |what: &str| Error::PrecisionExhausted(format!("{what} vanishes to the working precision"));
        let v_x = x.valuation().ok_or_else(|| missing("x"))?;
        let v_y = ext.y.valuation().ok_or_else(|| missing("y"))?;
        let v_dx = x.derivative().valuation().ok_or_else(|| missing("dx/dt"))?;
        Ok(LocalValuations { place: place.to_string(), pole_order: pole.order, v_x, v_y, v_dx })
    }
}

/// C(n, k) mod p by Lucas' theorem.
fn binomial_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut out = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..b {
            c = c * (a - i) % p;
        }
        for i in 1..=b {
            c = c * crate::gf::inv_mod(i, p) % p;
        }
        out = out * c % p;
        n /= p;
        k /= p;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalValuations {
    pub place: String,
    pub pole_order: u64,
    pub v_x: i64,
    pub v_y: i64,
    pub v_dx: i64,
}

/// The function x^j prod_a (x - a)^{-e_a} y^b, where e = `layers[b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub b: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RRBasis {
    /// n_Q of D at each ramified point.
    pub coefficients: Vec<i64>,
    /// E_b for b = 0..p-1, one coefficient per pole.
    pub layers: Vec<Vec<i64>>,
    pub elements: Vec<BasisElement>,
}

impl RRBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanDecomposition {
    pub dim: usize,
    /// r_i = rank (sigma - 1)^i for i = 0..=p.
    pub ranks: Vec<usize>,
    /// `m[l - 1]` is the number of Jordan blocks of size l.
    pub m: Vec<usize>,
    pub tot: usize,
}

impl JordanDecomposition {
    pub fn from_unipotent(sigma: &Matrix, p: u64) -> Result<Self> {
        let dim = sigma.rows();
        let f = sigma.field();
        let nil = sigma.sub(&Matrix::identity(f, dim));
        let mut ranks = vec![dim];
        let mut power = Matrix::identity(f, dim);
        for _ in 0..p {
            power = power.mul(&nil);
            ranks.push(power.rank());
        }
        if ranks[p as usize] != 0 {
            return Err(Error::Consistency(format!("(sigma - 1)^{p} has rank {}", ranks[p as usize])));
        }
        let r = |i: usize| ranks.get(i).copied().unwrap_or(0) as i64;
        let m = (1..=p as usize)
            .map(|l| {
                let v = r(l - 1) - 2 * r(l) + r(l + 1);
                usize::try_from(v).map_err(|_| Error::Consistency(format!("negative block count {v} for size {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let tot = dim - ranks[1];
        Ok(Self { dim, ranks, m, tot })
    }

    pub fn multiplicity(&self, l: usize) -> usize {
        self.m[l - 1]
    }

    pub fn free_rank(&self) -> usize {
        *self.m.last().expect("p >= 2")
    }

    pub fn is_free(&self) -> bool {
        self.m[..self.m.len() - 1].iter().all(|&x| x == 0)
    }
}

/// One formula value set against the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub formula: i64,
    pub oracle: i64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl CrossCheck {
    fn new(name: impl Into<String>, formula: i64, oracle: i64) -> Self {
        Self { name: name.into(), formula, oracle, matches: formula == oracle }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub p: u64,
    pub f: String,
    pub genus: i64,
    pub divisor: String,
    pub coefficients: Vec<i64>,
    pub dim: usize,
    pub ranks: Vec<usize>,
    pub m_l: Vec<usize>,
    pub tot: usize,
    pub crosschecks: Vec<CrossCheck>,
}

impl fmt::Display for ASCurve {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.poly.iter().enumerate().rev() {
            if !c.is_zero() {
                parts.push(term_string(c, &Place::Finite(self.field.zero()), j as i64));
            }
        }
        for (a, cs) in &self.polar {
            for (k, c) in cs.iter().enumerate().rev() {
                if !c.is_zero() {
                    parts.push(term_string(c, &Place::Finite(a.clone()), -(k as i64 + 1)));
                }
            }
        }
        write!(out, "{}", parts.join(" + "))
    }
}

fn term_string(c: &FFElem, at: &Place, e: i64) -> String {
    let base = match at {
        Place::Finite(a) if a.is_zero() => "x".to_string(),
        Place::Finite(a) => format!("(x-{a})"),
        Place::Infinity => unreachable!("terms are centred at finite points"),
    };
    let coeff = if c.is_one() && e != 0 { String::new() } else if e == 0 { c.to_string() } else { format!("{c}*") };
    match e {
        0 => coeff,
        1 => format!("{coeff}{base}"),
        _ => format!("{coeff}{base}^{e}"),
    }
}

/// Oracle decomposition of L(D) with every applicable formula set against it.
pub fn oracle_report(curve: &ASCurve, divisor: &str) -> Result<OracleReport> {
    let cover = curve.cover()?;
    let d = curve.named_divisor(&cover, divisor)?;
    let basis = curve.rr_basis(&d)?;
    let jd = JordanDecomposition::from_unipotent(&curve.sigma_matrix(&basis)?, curve.p())?;
    let mut checks = Vec::new();
    if let Ok(t) = tot_riemann_roch(&d) {
        checks.push(CrossCheck::new("tot_riemann_roch", t, jd.tot as i64));
    }
    let two_k = curve.canonical_x(&cover)?.scaled(2);
    if d == two_k {
        if let Ok(rep) = dim_cyclic(&cover) {
            checks.push(CrossCheck::new("dim_cyclic", rep.value, jd.tot as i64));
        }
        if let Ok(rep) = dim_weakly_ramified(&cover) {
            checks.push(CrossCheck::new("dim_weakly_ramified", rep.value, jd.tot as i64));
        }
        if let Ok(rep) = m_regular_cyclic_p(&cover) {
            checks.push(CrossCheck::new("m_regular_cyclic_p", rep.value, jd.free_rank() as i64));
        }
    }
    if d == two_k.plus(&reduced_ramification_divisor(&cover).scaled(3)) {
        if let Ok(rep) = free_rank_aug(&cover) {
            checks.push(CrossCheck::new("free_rank_aug", rep.value, jd.free_rank() as i64));
            let non_free: usize = jd.m[..jd.m.len() - 1].iter().sum();
            checks.push(CrossCheck::new("blocks of size < p", 0, non_free as i64));
        }
    }
    Ok(OracleReport {
        p: curve.p(),
        f: curve.to_string(),
        genus: curve.genus(),
        divisor: divisor.to_string(),
        coefficients: basis.coefficients,
        dim: jd.dim,
        ranks: jd.ranks,
        m_l: jd.m,
        tot: jd.tot,
        crosschecks: checks,
    })
}

/// Every formula/oracle pair available for the curve: the dimension
/// formulas on 2K, the Tot formula on 2K, 2K + 3Rred and 2K + e_0[j], the
/// freeness of 2K + 3Rred when weakly ramified, and the gap count at each
/// ramified point.
pub fn crosscheck(curve: &ASCurve) -> Result<Vec<CrossCheck>> {
    let cover = curve.cover()?;
    cover.require_genus_at_least_2()?;
    let mut out = Vec::new();
    let mut divisors = vec!["2K".to_string(), "2K+3Rred".to_string()];
    for j in 0..curve.r() {
        divisors.push(format!("2K+{}[{j}]", curve.p()));
    }
    for text in &divisors {
        for mut c in oracle_report(curve, text)?.crosschecks {
            c.name = format!("{} on {text}", c.name);
            out.push(c);
        }
    }
    let g = curve.genus();
    for j in 0..curve.r() {
        out.push(CrossCheck::new(format!("gap count at {}", curve.poles[j].place), g, curve.gaps(j)?.len() as i64));
    }
    Ok(out)
}

type Parsed = (Vec<FFElem>, Vec<(FFElem, Vec<FFElem>)>);

fn parse_f(field: &FiniteField, text: &str) -> Result<Parsed> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |why: &str| Error::InvalidCurve(format!("cannot parse f = {text:?}: {why}"));
    if s.is_empty() || !s.is_ascii() {
        return Err(bad("empty or non-ASCII"));
    }
    let mut poly: Vec<FFElem> = Vec::new();
    let mut polar: BTreeMap<u64, Vec<FFElem>> = BTreeMap::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(bad("expected + or -"));
        }
        // term ends at the next + or - outside parentheses and not after '^'
        let start = i;
        let mut depth = 0i32;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => break,
                _ => {}
            }
            i += 1;
        }
        let term = &s[start..i];
        let (coeff, base, exp) = parse_term(term).ok_or_else(|| bad(&format!("bad term {term:?}")))?;
        let c = field.from_int(sign * coeff);
        match base {
            None => add_into(&mut poly, &[c], field),
            Some(a) => {
                let a = field.from_int(a);
                if exp >= 0 {
                    let expanded: Vec<FFElem> = linear_pow(&a, exp as u64, field).iter().map(|x| x * &c).collect();
                    add_into(&mut poly, &expanded, field);
                } else {
                    let k = (-exp) as usize;
                    let entry = polar.entry(a.index()).or_default();
                    if entry.len() < k {
                        entry.resize(k, field.zero());
                    }
                    entry[k - 1] += &c;
                }
            }
        }
    }
    let polar = polar
        .into_iter()
        .map(|(idx, cs)| field.from_index(idx).map(|a| (a, cs)))
        .collect::<Result<Vec<_>>>()?;
    Ok((poly, polar))
}

/// `[int][*]` then nothing, `x[^e]` or `(x±a)[^e]`; returns (coefficient,
/// centre a of the base (x - a), exponent).
fn parse_term(term: &str) -> Option<(i64, Option<i64>, i64)> {
    let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
    let coeff: i64 = if digits == 0 { 1 } else { term[..digits].parse().ok()? };
    let mut rest = &term[digits..];
    if rest.is_empty() {
        return (digits > 0).then_some((coeff, None, 0));
    }
    if digits > 0 {
        rest = rest.strip_prefix('*').unwrap_or(rest);
    }
    let (centre, after) = if let Some(r) = rest.strip_prefix('x') {
        (0, r)
    } else {
        let r = rest.strip_prefix("(x")?;
        let close = r.find(')')?;
        let inner = &r[..close];
        let a = if let Some(v) = inner.strip_prefix('-') {
            v.parse::<i64>().ok()?
        } else {
            -inner.strip_prefix('+')?.parse::<i64>().ok()?
        };
        (a, &r[close + 1..])
    };
    let exp = if after.is_empty() {
        1
    } else {
        let e = after.strip_prefix('^')?;
        let e = e.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(e);
        e.parse::<i64>().ok()?
    };
    Some((coeff, Some(centre), exp))
}
