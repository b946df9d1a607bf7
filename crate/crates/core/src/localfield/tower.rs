//! Towers t_0, t_1, ..., t_n of weakly ramified Artin-Schreier layers
//! t_1^{-p} - t_1^{-1} = t_0^{-1}, t_i^{-p} - t_i^{-1} = c_{i-1} t_{i-1}^{-1},
//! and the action of their Galois group on t = t_n.

use serde::Serialize;

use super::artin_schreier::{build_extension, extract_alpha_beta, ASExtension};
use super::series::LaurentSeries;
use crate::error::{Error, Result};
use crate::gf::{FFElem, FiniteField};

/// Roots of X^p - X = b in the field, by exhaustive search.
pub fn as_roots(b: &FFElem) -> Vec<FFElem> {
    let f = b.field();
    f.elements().filter(|z| &(&z.frobenius() - z) == b).collect()
}

#[derive(Debug, Clone)]
pub struct Tower {
    field: FiniteField,
    constants: Vec<FFElem>,
    layers: Vec<ASExtension>,
    /// `params[i]` is t_i as a series in t_n.
    params: Vec<LaurentSeries>,
    prec: i64,
}

/// A group element, given by g(y_i) = y_i + a_i with y_i = t_i^{-1}.
#[derive(Debug, Clone)]
pub struct TowerElement {
    pub a: Vec<FFElem>,
    /// g(t_n).
    pub gt: LaurentSeries,
    pub alpha: FFElem,
    pub beta: FFElem,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerElementReport {
    pub a: Vec<String>,
    pub alpha: String,
    pub beta: String,
    pub beta_is_alpha_squared: bool,
    pub g_t: String,
}

/// Builds the tower of rank n = constants.len() + 1 over k((t_0)), each
/// layer solved to relative precision `prec`.
pub fn build_tower(field: &FiniteField, constants: &[FFElem], prec: i64) -> Result<Tower> {
    for c in constants {
        field.check(c)?;
        if c.is_zero() {
            return Err(Error::InvalidInput("tower constants must be nonzero".into()));
        }
    }
    let n = constants.len() + 1;
    let mut layers = Vec::with_capacity(n);
    for i in 0..n {
        let c = if i == 0 { field.one() } else { constants[i - 1].clone() };
        // y_i^p - y_i = c t_{i-1}^{-1}
        let x = LaurentSeries::monomial(field, c, -1);
        layers.push(build_extension(&x, prec)?);
    }
    // t_{i-1} = s_i(t_i); compose downwards from t_n
    let mut params = vec![LaurentSeries::t(field)];
    for layer in layers.iter().rev() {
        let below = layer.s.compose(params.last().expect("nonempty"))?;
        params.push(below);
    }
    params.reverse();
    Ok(Tower { field: field.clone(), constants: constants.to_vec(), layers, params, prec })
}

impl Tower {
    pub fn rank(&self) -> usize {
        self.layers.len()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn constants(&self) -> &[FFElem] {
        &self.constants
    }

    pub fn layers(&self) -> &[ASExtension] {
        &self.layers
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// t_i as a series in t_n.
    pub fn param(&self, i: usize) -> &LaurentSeries {
        &self.params[i]
    }

    /// All tuples (a_1, ..., a_n) with a_1 in F_p and
    /// a_i^p - a_i = c_{i-1} a_{i-1}, i.e. all automorphisms of the tower
    /// defined over this residue field.
    pub fn group_tuples(&self) -> Vec<Vec<FFElem>> {
        let p = self.field.p();
        let mut tuples: Vec<Vec<FFElem>> = (0..p).map(|a| vec![self.field.from_int(a as i64)]).collect();
        for c in &self.constants {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    let b = c * t.last().expect("nonempty");
                    as_roots(&b).into_iter().map(move |z| {
                        let mut next = t.clone();
                        next.push(z);
                        next
                    })
                })
                .collect();
        }
        tuples
    }

    /// Whether the residue field contains the whole group (p^n tuples).
    pub fn is_complete(&self) -> bool {
        self.group_tuples().len() as u64 == self.field.p().pow(self.rank() as u32)
    }

    /// The action on t_n of the element with g(y_i) = y_i + a_i, verified on
    /// every layer: g(t_i) computed by substituting g(t_n) into t_i(t_n)
    /// must equal 1 / (t_i^{-1} + a_i), and t_0 must be fixed.
    pub fn apply(&self, a: &[FFElem]) -> Result<TowerElement> {
        let n = self.rank();
        if a.len() != n {
            return Err(Error::InvalidInput(format!("{} layer values for a tower of rank {n}", a.len())));
        }
        for ai in a {
            self.field.check(ai)?;
        }
        for i in 0..n {
            let prev = if i == 0 { self.field.zero() } else { &self.constants[i - 1] * &a[i - 1] };
            if a[i].frobenius() - &a[i] != prev {
                return Err(Error::InvalidInput(format!("a_{} = {} does not satisfy its Artin-Schreier equation", i + 1, a[i])));
            }
        }
        let t = LaurentSeries::t(&self.field);
        let gt = t.inv()?.add_constant(&a[n - 1])?.inv_with(Some(self.prec))?;
        for i in 0..n {
            let ti = &self.params[i];
            let lhs = ti.compose(&gt)?;
            let shift = if i == 0 { self.field.zero() } else { a[i - 1].clone() };
            let rhs = ti.inv()?.add_constant(&shift)?.inv()?;
            let diff = lhs.sub(&rhs)?;
            let vi = ti.valuation().expect("nonzero");
            if !diff.is_zero() {
                return Err(Error::Consistency(format!("g does not act on t_{i} as y_{i} -> y_{i} + {shift}: {diff}")));
            }
            if diff.prec() - vi < self.prec.min(12) {
                return Err(Error::PrecisionExhausted(format!("action on t_{i} checked only to relative precision {}", diff.prec() - vi)));
            }
        }
        let (alpha, beta) = extract_alpha_beta(&gt)?;
        Ok(TowerElement { a: a.to_vec(), gt, alpha, beta })
    }

    pub fn elements(&self) -> Result<Vec<TowerElement>> {
        self.group_tuples().iter().map(|a| self.apply(a)).collect()
    }
}

impl TowerElement {
    /// g(t) = t / (1 - alpha t) to the precision of g(t).
    pub fn matches_mobius(&self) -> Result<bool> {
        let f = self.gt.field();
        let t = LaurentSeries::t(f);
        let denom = LaurentSeries::from_terms(f, &[(0, f.one()), (1, -&self.alpha)], None)?;
        let expected = t.mul(&denom.inv_with(Some(self.gt.prec()))?)?;
        self.gt.agrees_with(&expected)
    }

    pub fn report(&self) -> Result<TowerElementReport> {
        Ok(TowerElementReport {
            a: self.a.iter().map(ToString::to_string).collect(),
            alpha: self.alpha.to_string(),
            beta: self.beta.to_string(),
            beta_is_alpha_squared: self.beta == &self.alpha * &self.alpha,
            g_t: self.gt.to_string(),
        })
    }
}

/// The series of the composite g h, i.e. h(t) with g(t) substituted.
pub fn compose_action(g: &LaurentSeries, h: &LaurentSeries) -> Result<LaurentSeries> {
    h.compose(g)
}

/// Smallest extension degree m >= n (up to `max_m`) and lexicographically
/// first constants for which all p^n automorphisms of the rank-n tower are
/// defined over F_{p^m}.
pub fn find_tower_constants(p: u64, n: usize, max_m: usize) -> Result<(FiniteField, Vec<FFElem>)> {
    if n == 0 {
        return Err(Error::InvalidInput("tower rank must be at least 1".into()));
    }
    for m in n.max(1)..=max_m {
        let field = FiniteField::new(p, m)?;
        let mut constants: Vec<FFElem> = Vec::new();
        let mut current: Vec<FFElem> = field.elements().take(p as usize).collect();
        let mut ok = true;
        for _ in 1..n {
            let choice = field.elements().filter(|c| !c.is_zero()).find_map(|c| {
                let mut next = Vec::new();
                for a in &current {
                    let roots = as_roots(&(&c * a));
                    if roots.is_empty() {
                        return None;
                    }
                    next.extend(roots);
                }
                Some((c, next))
            });
            match choice {
                Some((c, next)) => {
                    constants.push(c);
                    current = next;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok((field, constants));
        }
    }
    Err(Error::InvalidInput(format!("no complete rank-{n} tower over F_{p}^m for m <= {max_m}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn rank_one_tower() {
        let f = make_field(2, 1).unwrap();
        let tower = build_tower(&f, &[], 14).unwrap();
        assert_eq!(tower.param(0).valuation(), Some(2));
        let elems = tower.elements().unwrap();
        assert_eq!(elems.len(), 2);
        let id = &elems[0];
        assert!(id.gt.agrees_with(&LaurentSeries::t(&f)).unwrap());
        let g = &elems[1];
        assert!(!g.alpha.is_zero());
        assert!(g.matches_mobius().unwrap());
    }

    #[test]
    fn complete_towers_satisfy_beta_alpha_squared() {
        for n in 1..=3 {
            let (field, constants) = find_tower_constants(2, n, 6).unwrap();
            let tower = build_tower(&field, &constants, 14).unwrap();
            assert!(tower.is_complete());
            let elems = tower.elements().unwrap();
            assert_eq!(elems.len(), 1 << n);
            let mut alphas: Vec<u64> = elems.iter().map(|e| e.alpha.index()).collect();
            alphas.sort();
            alphas.dedup();
            assert_eq!(alphas.len(), 1 << n, "alpha is injective");
            for e in &elems {
                assert_eq!(e.beta, &e.alpha * &e.alpha);
                assert!(e.matches_mobius().unwrap());
            }
            // alpha additive and the beta rule across compositions
            for g in &elems {
                for h in &elems {
                    let gh = compose_action(&g.gt, &h.gt).unwrap();
                    let (a, b) = extract_alpha_beta(&gh).unwrap();
                    assert_eq!(a, &g.alpha + &h.alpha);
                    let two = field.from_int(2);
                    assert_eq!(b, &h.beta + &(&two * &(&h.alpha * &g.alpha)) + &g.beta);
                }
            }
        }
    }

    #[test]
    fn odd_characteristic_tower() {
        let (field, constants) = find_tower_constants(3, 2, 4).unwrap();
        let tower = build_tower(&field, &constants, 12).unwrap();
        let elems = tower.elements().unwrap();
        assert_eq!(elems.len(), 9);
        for e in &elems {
            assert!(e.matches_mobius().unwrap());
            assert_eq!(e.beta, &e.alpha * &e.alpha);
        }
    }

    #[test]
    fn inconsistent_layer_values_are_rejected() {
        let (field, constants) = find_tower_constants(2, 2, 4).unwrap();
        let tower = build_tower(&field, &constants, 12).unwrap();
        assert!(tower.apply(&[field.one(), field.zero()]).is_err());
        assert!(tower.apply(&[field.one()]).is_err());
    }
}
