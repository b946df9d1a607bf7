//! Truncated Laurent series over a finite field with explicit precision.
//!
//! A series is known modulo t^prec. Every operation computes the precision
//! it can justify from its inputs and never reports coefficients past it.
//! Polynomials entered by hand are exact and carry [`EXACT`].

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FFElem, FiniteField};

/// Precision sentinel for exactly known series.
pub const EXACT: i64 = 1 << 40;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: FiniteField,
    /// Exponent of `coeffs[0]`; equals the valuation when nonzero.
    start: i64,
    /// Leading and trailing entries nonzero; exponents below `prec`.
    coeffs: Vec<FFElem>,
    prec: i64,
}

fn cap(prec: i64) -> i64 {
    prec.min(EXACT)
}

impl LaurentSeries {
    fn build(field: &FiniteField, start: i64, mut coeffs: Vec<FFElem>, prec: i64) -> Self {
        let prec = cap(prec);
        let keep = (prec - start).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last().is_some_and(FFElem::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        let start = if coeffs.is_empty() { prec } else { start + lead as i64 };
        coeffs.drain(..lead);
        Self { field: field.clone(), start, coeffs, prec }
    }

    /// Series from `(exponent, coefficient)` pairs, known mod t^prec
    /// (`None` for an exact polynomial). Repeated exponents add up.
    pub fn from_terms(field: &FiniteField, terms: &[(i64, FFElem)], prec: Option<i64>) -> Result<Self> {
        let prec = prec.unwrap_or(EXACT);
        if prec > EXACT {
            return Err(Error::InvalidSeries(format!("precision {prec} is too large")));
        }
        if terms.is_empty() {
            return Ok(Self::zero(field, prec));
        }
        for (e, c) in terms {
            field.check(c)?;
            if *e >= prec {
                return Err(Error::InvalidSeries(format!("term t^{e} lies beyond the precision O(t^{prec})")));
            }
            if e.abs() > EXACT / 4 {
                return Err(Error::InvalidSeries(format!("exponent {e} is too large")));
            }
        }
        let lo = terms.iter().map(|t| t.0).min().expect("nonempty");
        let hi = terms.iter().map(|t| t.0).max().expect("nonempty");
        let mut coeffs = vec![field.zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Ok(Self::build(field, lo, coeffs, prec))
    }

    /// Exact series with integer coefficients, mapped into the field.
    pub fn from_int_terms(field: &FiniteField, terms: &[(i64, i64)], prec: Option<i64>) -> Result<Self> {
        let t: Vec<(i64, FFElem)> = terms.iter().map(|&(e, c)| (e, field.from_int(c))).collect();
        Self::from_terms(field, &t, prec)
    }

    pub fn zero(field: &FiniteField, prec: i64) -> Self {
        Self::build(field, 0, Vec::new(), prec)
    }

    /// Exact c t^e.
    pub fn monomial(field: &FiniteField, c: FFElem, e: i64) -> Self {
        Self::build(field, e, vec![c], EXACT)
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::monomial(field, field.one(), 0)
    }

    /// The uniformizer t, exactly.
    pub fn t(field: &FiniteField) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn constant(field: &FiniteField, c: FFElem) -> Self {
        Self::monomial(field, c, 0)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Zero modulo t^prec.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` when the series is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }

    /// prec - valuation.
    pub fn relative_prec(&self) -> Option<i64> {
        self.valuation().map(|v| self.prec - v)
    }

    pub fn leading_coeff(&self) -> Option<&FFElem> {
        self.coeffs.first()
    }

    pub fn coeff(&self, e: i64) -> Result<FFElem> {
        if e >= self.prec {
            return Err(Error::PrecisionExhausted(format!("coefficient of t^{e} requested, series known mod t^{}", self.prec)));
        }
        let idx = e - self.start;
        Ok(if idx < 0 || idx >= self.coeffs.len() as i64 { self.field.zero() } else { self.coeffs[idx as usize].clone() })
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FFElem)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::build(&self.field, self.start, self.coeffs.clone(), self.prec.min(prec))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("series over {:?} and {:?}", self.field, other.field)));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: bool) -> Result<Self> {
        self.check_field(other)?;
        let prec = self.prec.min(other.prec);
        if self.is_zero() && other.is_zero() {
            return Ok(Self::zero(&self.field, prec));
        }
        let lo = if self.is_zero() { other.start } else if other.is_zero() { self.start } else { self.start.min(other.start) };
        let end = |x: &Self| if x.is_zero() { i64::MIN } else { x.start + x.coeffs.len() as i64 };
        let hi = end(self).max(end(other)).min(prec);
        if hi <= lo {
            return Ok(Self::zero(&self.field, prec));
        }
        let mut coeffs = vec![self.field.zero(); (hi - lo) as usize];
        for (e, c) in self.terms() {
            if e < hi {
                coeffs[(e - lo) as usize] += c;
            }
        }
        for (e, c) in other.terms() {
            if e < hi {
                if sign {
                    coeffs[(e - lo) as usize] += c;
                } else {
                    coeffs[(e - lo) as usize] -= c;
                }
            }
        }
        Ok(Self::build(&self.field, lo, coeffs, prec))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn add_constant(&self, c: &FFElem) -> Result<Self> {
        self.field.check(c)?;
        self.add(&Self::constant(&self.field, c.clone()))
    }

    pub fn neg(&self) -> Self {
        Self::build(&self.field, self.start, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }

    pub fn scale(&self, k: &FFElem) -> Result<Self> {
        self.field.check(k)?;
        Ok(Self::build(&self.field, self.start, self.coeffs.iter().map(|c| c * k).collect(), self.prec))
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: i64) -> Self {
        let prec = if self.is_exact() { EXACT } else { self.prec + k };
        Self::build(&self.field, self.start + k, self.coeffs.clone(), prec)
    }

    /// Valuation, or the precision bound for a series that is zero so far.
    fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = if self.is_exact() && other.is_exact() {
            EXACT
        } else {
            cap((self.prec + other.val_bound()).min(other.prec + self.val_bound()))
        };
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field, prec));
        }
        let lo = self.start + other.start;
        let hi = (lo + (self.coeffs.len() + other.coeffs.len()) as i64 - 1).min(prec);
        if hi <= lo {
            return Ok(Self::zero(&self.field, prec));
        }
        let mut coeffs = vec![self.field.zero(); (hi - lo) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                if !b.is_zero() {
                    coeffs[k] += a * b;
                }
            }
        }
        Ok(Self::build(&self.field, lo, coeffs, prec))
    }

    /// Multiplicative inverse. `rel_prec` bounds the relative precision of
    /// the result; it is required for exact series that are not monomials.
    pub fn inv_with(&self, rel_prec: Option<i64>) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::PrecisionExhausted(format!("inverse of a series that is zero mod t^{}", self.prec)));
        };
        if self.is_exact() && self.coeffs.len() == 1 {
            let c = self.coeffs[0].inv().expect("leading coefficient is nonzero");
            return Ok(Self::monomial(&self.field, c, -v));
        }
        let own = if self.is_exact() { None } else { Some(self.prec - v) };
        let n = match (own, rel_prec) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => {
                return Err(Error::InvalidSeries("the inverse of an exact non-monomial series needs a precision".into()))
            }
        };
        if n <= 0 {
            return Ok(Self::zero(&self.field, -v + n));
        }
        let n = n as usize;
        let a0_inv = self.coeffs[0].inv().expect("leading coefficient is nonzero");
        let mut b: Vec<FFElem> = Vec::with_capacity(n);
        b.push(a0_inv.clone());
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[j] * &b[k - j];
            }
            b.push(-(&acc * &a0_inv));
        }
        Ok(Self::build(&self.field, -v, b, -v + n as i64))
    }

    pub fn inv(&self) -> Result<Self> {
        self.inv_with(None)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        self.pow_with(e, None)
    }

    /// Integer power; `rel_prec` as in [`Self::inv_with`] for negative `e`.
    pub fn pow_with(&self, e: i64, rel_prec: Option<i64>) -> Result<Self> {
        let mut base = if e < 0 { self.inv_with(rel_prec)? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// f(t)^p = f^(sigma)(t^p): coefficients raised to the p-th power.
    pub fn frobenius(&self) -> Self {
        let p = self.field.p() as i64;
        let mut coeffs = vec![self.field.zero(); ((self.coeffs.len().max(1) - 1) * p as usize) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = c.frobenius();
        }
        let prec = if self.is_exact() { EXACT } else { self.prec * p };
        if self.is_zero() {
            return Self::zero(&self.field, prec);
        }
        Self::build(&self.field, self.start * p, coeffs, prec)
    }

    /// Formal derivative d/dt.
    pub fn derivative(&self) -> Self {
        let prec = if self.is_exact() { EXACT } else { self.prec - 1 };
        if self.is_zero() {
            return Self::zero(&self.field, prec);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| &self.field.from_int(self.start + i as i64) * c)
            .collect();
        Self::build(&self.field, self.start - 1, coeffs, prec)
    }

    /// Substitution f(g(t)) for g of positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_field(g)?;
        let vg = match g.valuation() {
            Some(v) if v >= 1 => v,
            Some(v) => return Err(Error::InvalidSeries(format!("substituted series has valuation {v} < 1"))),
            None => return Err(Error::PrecisionExhausted("substituted series is zero to its precision".into())),
        };
        let Some(vf) = self.valuation() else {
            let prec = if self.is_exact() { EXACT } else { cap(self.prec.saturating_mul(vg)) };
            return Ok(Self::zero(&self.field, prec));
        };
        // f = t^vf P(t) with P(0) != 0
        let target = {
            let from_f = if self.is_exact() { EXACT } else { cap((self.prec - vf).saturating_mul(vg)) };
            let from_g = if g.is_exact() || self.coeffs.len() == 1 && self.is_exact() { EXACT } else { g.prec };
            from_f.min(from_g)
        };
        let mut acc = Self::zero(&self.field, target);
        let mut gk = Self::one(&self.field);
        for (k, a) in self.coeffs.iter().enumerate() {
            if (k as i64).saturating_mul(vg) >= target {
                break;
            }
            if k > 0 {
                gk = gk.mul(g)?.truncate(target);
            }
            if !a.is_zero() {
                acc = acc.add(&gk.scale(a)?)?;
            }
        }
        let acc = acc.truncate(target);
        let rel = (target < EXACT).then_some(target);
        let lead = g.pow_with(vf, rel)?;
        lead.mul(&acc)
    }

    /// Whether the two series agree to the smaller of their precisions.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let coeff = if self.field.m() == 1 { c.to_string() } else { format!("({c})") };
                match e {
                    0 => coeff,
                    1 => format!("{coeff}*t"),
                    _ => format!("{coeff}*t^{e}"),
                }
            })
            .collect();
        if !self.is_exact() {
            parts.push(format!("O(t^{})", self.prec));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
