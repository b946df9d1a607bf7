//! Artin-Schreier extensions L = K(y), y^p - y = x, of K = k((s)):
//! normalization of x, expansions of s and y in a uniformizer t of L, and the
//! ramification jump.

use super::series::LaurentSeries;
use crate::error::{Error, Result};
use crate::gf::FFElem;

#[derive(Debug, Clone)]
pub struct Normalized {
    /// x~ with v(x~) = -m and p not dividing m.
    pub x: LaurentSeries,
    pub m: i64,
    /// The w with x - x~ = sum (w^p - w); y~ = y - sum w.
    pub corrections: Vec<LaurentSeries>,
}

/// Removes leading terms u_0 s^{-lp} from x by subtracting w^p - w for
/// w = u_0^{1/p} s^{-l}, until the valuation is prime to p.
pub fn as_normalize(x: &LaurentSeries) -> Result<Normalized> {
    let field = x.field().clone();
    let p = field.p() as i64;
    let mut x = x.clone();
    let mut corrections = Vec::new();
    loop {
        let Some(v) = x.valuation() else {
            return Err(if x.prec() <= 0 {
                Error::PrecisionExhausted(format!("x is zero mod s^{}, so its valuation is unknown", x.prec()))
            } else {
                Error::NonNegativeValuation("x has no polar part".into())
            });
        };
        if v >= 0 {
            return Err(Error::NonNegativeValuation(format!("v(x) = {v}")));
        }
        if v % p != 0 {
            return Ok(Normalized { x, m: -v, corrections });
        }
        let v0 = x.leading_coeff().expect("nonzero").pth_root();
        let w = LaurentSeries::monomial(&field, v0, v / p);
        let wp = w.frobenius();
        x = x.sub(&wp)?.add(&w)?;
        corrections.push(w);
    }
}

/// A totally ramified extension y^p - y = x(s) with v(x) = -m, p not
/// dividing m, and its uniformizer t = s^r y^{-l} where r p + l m = 1.
#[derive(Debug, Clone)]
pub struct ASExtension {
    pub p: u64,
    pub m: i64,
    pub l: i64,
    pub r: i64,
    pub x: LaurentSeries,
    /// s as a series in t.
    pub s: LaurentSeries,
    /// y as a series in t.
    pub y: LaurentSeries,
    /// Relative precision of `s` and `y`.
    pub prec: i64,
}

/// Solves for s(t) and y(t) to relative precision `prec`.
///
/// With s = t^p F^l and y = t^{-m} F^r for a unit F, the relation
/// y^p - y = s^{-m} xi(s) becomes the fixed-point equation
/// F = xi(t^p F^l) + t^{m(p-1)} F^{r + lm}, which gains at least one
/// t-adic digit per iteration.
pub fn build_extension(x: &LaurentSeries, prec: i64) -> Result<ASExtension> {
    let field = x.field().clone();
    let p = field.p() as i64;
    if prec < 1 {
        return Err(Error::InvalidInput(format!("precision {prec} must be positive")));
    }
    let v = x.valuation().ok_or_else(|| Error::PrecisionExhausted("x is zero to its precision".into()))?;
    if v >= 0 {
        return Err(Error::NonNegativeValuation(format!("v(x) = {v}")));
    }
    let m = -v;
    if m % p == 0 {
        return Err(Error::InvalidSeries(format!("v(x) = {v} is divisible by p; normalize first")));
    }
    let l = (1..p).find(|l| (l * m) % p == 1).expect("m is invertible mod p");
    let r = (1 - l * m) / p;
    let xi = x.shift(m);
    if !xi.is_exact() && xi.prec().saturating_mul(p) < prec {
        return Err(Error::PrecisionExhausted(format!(
            "x is known to relative precision {}, too little for relative precision {prec} in t",
            xi.prec()
        )));
    }
    let xi0 = xi.leading_coeff().expect("nonzero").clone();
    let mut phi = LaurentSeries::constant(&field, xi0).truncate(prec);
    let mut converged = false;
    for _ in 0..prec + 2 {
        let g = phi.pow(l)?.shift(p).truncate(p + prec);
        let tail = phi.pow(r + l * m)?.shift(m * (p - 1));
        let next = xi.compose(&g)?.add(&tail)?.truncate(prec);
        if next.prec() < prec {
            return Err(Error::PrecisionExhausted(format!("iteration reached only O(t^{})", next.prec())));
        }
        if next.agrees_with(&phi)? {
            phi = next;
            converged = true;
            break;
        }
        phi = next;
    }
    if !converged {
        return Err(Error::NoConvergence(format!("no fixed point after {} steps", prec + 2)));
    }
    let s = phi.pow(l)?.shift(p);
    let y = phi.pow(r)?.shift(-m);
    let ext = ASExtension { p: p as u64, m, l, r, x: x.clone(), s, y, prec };
    ext.verify()?;
    Ok(ext)
}

impl ASExtension {
    /// Residuals of y^p - y = x(s) and t = s^r y^{-l}, with their precisions.
    pub fn residuals(&self) -> Result<(LaurentSeries, LaurentSeries)> {
        let field = self.x.field();
        let rel = self.y.frobenius().sub(&self.y)?.sub(&self.x.compose(&self.s)?)?;
        let t = self.s.pow(self.r)?.mul(&self.y.pow(-self.l)?)?.sub(&LaurentSeries::t(field))?;
        Ok((rel, t))
    }

    fn verify(&self) -> Result<()> {
        let p = self.p as i64;
        let (rel, t) = self.residuals()?;
        if !rel.is_zero() || !t.is_zero() {
            return Err(Error::NoConvergence(format!("residuals {rel} and {t} do not vanish")));
        }
        if rel.prec() < -p * self.m + self.prec || t.prec() < 1 + self.prec {
            return Err(Error::PrecisionExhausted(format!(
                "residuals known only mod t^{} and t^{}",
                rel.prec(),
                t.prec()
            )));
        }
        Ok(())
    }

    /// sigma(t) for sigma: y -> y + c with c in F_p^*.
    pub fn sigma_t(&self, c: &FFElem) -> Result<LaurentSeries> {
        let field = self.x.field();
        field.check(c)?;
        match c.as_prime_field() {
            Some(v) if v != 0 => {}
            _ => return Err(Error::InvalidInput(format!("y -> y + {c} is an automorphism only for c in F_p^*"))),
        }
        self.s.pow(self.r)?.mul(&self.y.add_constant(c)?.pow_with(-self.l, Some(self.prec))?)
    }
}

/// v(sigma(t) - t) - 1 for sigma: y -> y + c; equals m.
pub fn measure_jump(ext: &ASExtension, c: &FFElem) -> Result<i64> {
    if ext.prec < ext.m + 2 {
        return Err(Error::PrecisionExhausted(format!("precision {} < m + 2 = {}", ext.prec, ext.m + 2)));
    }
    let diff = ext.sigma_t(c)?.sub(&LaurentSeries::t(ext.x.field()))?;
    let v = diff
        .valuation()
        .ok_or_else(|| Error::PrecisionExhausted(format!("sigma(t) - t vanishes mod t^{}", diff.prec())))?;
    Ok(v - 1)
}

/// Default working precision for jump measurement.
pub fn default_jump_prec(m: i64) -> i64 {
    2 * m + 8
}

/// (alpha, beta) with g(t) = t + alpha t^2 + beta t^3 mod t^4.
pub fn extract_alpha_beta(gt: &LaurentSeries) -> Result<(FFElem, FFElem)> {
    if gt.valuation() != Some(1) || !gt.leading_coeff().is_some_and(FFElem::is_one) {
        return Err(Error::NotWeaklyRamifiedAction(format!("g(t) = {gt} does not start with t")));
    }
    Ok((gt.coeff(2)?, gt.coeff(3)?))
}
