//! H_0 and H_1 of an elementary abelian group G = (Z/p)^s acting on the
//! 3-dimensional module V = <w1, w2, w3> with
//! g(w1) = w1, g(w2) = w2 + 2a(g) w1, g(w3) = w3 + a(g) w2 + b(g) w1,
//! computed from the tensor product of the periodic resolutions of the
//! cyclic factors, truncated after degree 2.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::HomologyValue;
use crate::gf::{matrix_rank, FFElem, FiniteField, Matrix};

/// The values a(g_i), b(g_i) on the standard generators g_1, ..., g_s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaBeta {
    field: FiniteField,
    alpha: Vec<FFElem>,
    beta: Vec<FFElem>,
}

/// How b is drawn by [`AlphaBeta::random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaChoice {
    /// Independent uniform values on the generators.
    Free,
    /// b = c a for a random c.
    Proportional,
    /// b_i = a_i^2, the shape coming from a weakly ramified p = 2 tower.
    Square,
}

impl AlphaBeta {
    pub fn new(field: &FiniteField, alpha: Vec<FFElem>, beta: Vec<FFElem>) -> Result<Self> {
        if alpha.len() != beta.len() || alpha.is_empty() {
            return Err(Error::InvalidInput(format!(
                "need s >= 1 values of alpha and beta, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        for e in alpha.iter().chain(&beta) {
            field.check(e)?;
        }
        Ok(Self { field: field.clone(), alpha, beta })
    }

    /// Elements given by their indices in `field` (see [`FiniteField::from_index`]).
    pub fn from_indices(field: &FiniteField, alpha: &[u64], beta: &[u64]) -> Result<Self> {
        let conv = |v: &[u64]| v.iter().map(|&i| field.from_index(i)).collect::<Result<Vec<_>>>();
        Self::new(field, conv(alpha)?, conv(beta)?)
    }

    /// Random injective a over F_{p^m} (m >= s) and b per `choice`.
    pub fn random<R: Rng + ?Sized>(field: &FiniteField, s: usize, choice: BetaChoice, rng: &mut R) -> Result<Self> {
        if field.m() < s {
            return Err(Error::InvalidInput(format!("no injective alpha from rank {s} into F_{}", field.order())));
        }
        let alpha = loop {
            let a: Vec<FFElem> = (0..s).map(|_| field.random(rng)).collect();
            if prime_field_rank(field, &a) == s {
                break a;
            }
        };
        let beta = match choice {
            BetaChoice::Free => (0..s).map(|_| field.random(rng)).collect(),
            BetaChoice::Proportional => {
                let c = field.random(rng);
                alpha.iter().map(|a| &c * a).collect()
            }
            BetaChoice::Square => alpha.iter().map(|a| a * a).collect(),
        };
        Self::new(field, alpha, beta)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[FFElem] {
        &self.alpha
    }

    pub fn beta(&self) -> &[FFElem] {
        &self.beta
    }

    /// a(g_1), ..., a(g_s) linearly independent over F_p.
    pub fn is_injective(&self) -> bool {
        prime_field_rank(&self.field, &self.alpha) == self.s()
    }

    /// Whether b = c a for some c in the field.
    pub fn beta_proportional(&self) -> bool {
        let Some(k) = self.alpha.iter().position(|a| !a.is_zero()) else {
            return self.beta.iter().all(FFElem::is_zero);
        };
        let c = &self.beta[k] * &self.alpha[k].inv().expect("nonzero");
        self.alpha.iter().zip(&self.beta).all(|(a, b)| &c * a == *b)
    }

    /// Matrix of g_i in the basis w1, w2, w3 (columns are images).
    pub fn action_matrix(&self, i: usize) -> Matrix {
        element_matrix(&self.field, &self.alpha[i], &self.beta[i])
    }

    /// Matrix of g_1^{k_1} ... g_s^{k_s}.
    pub fn group_element_matrix(&self, k: &[u64]) -> Matrix {
        let mut m = Matrix::identity(&self.field, 3);
        for (i, &ki) in k.iter().enumerate() {
            m = m.mul(&self.action_matrix(i).pow(ki));
        }
        m
    }
}

fn element_matrix(f: &FiniteField, a: &FFElem, b: &FFElem) -> Matrix {
    let two_a = &f.from_int(2) * a;
    Matrix::from_rows(
        f,
        vec![vec![f.one(), two_a, b.clone()], vec![f.zero(), f.one(), a.clone()], vec![f.zero(), f.zero(), f.one()]],
    )
}

/// (a, b) of a group element, read off its matrix.
pub fn alpha_beta_of(m: &Matrix) -> (FFElem, FFElem) {
    (m.get(1, 2).clone(), m.get(0, 2).clone())
}

/// Rank over F_p of field elements viewed as vectors in F_p^m.
fn prime_field_rank(field: &FiniteField, v: &[FFElem]) -> usize {
    let fp = FiniteField::new(field.p(), 1).expect("p is prime");
    let rows: Vec<Vec<FFElem>> = v.iter().map(|e| e.coeffs().iter().map(|&c| fp.from_int(c as i64)).collect()).collect();
    matrix_rank(&Matrix::from_rows(&fp, rows))
}

/// Differentials d1: C_1 -> C_0 and d2: C_2 -> C_1 with C_0 = V,
/// C_1 = V^s, C_2 = V^s + V^(s choose 2).
pub fn build_complex(ab: &AlphaBeta) -> (Matrix, Matrix) {
    let f = &ab.field;
    let s = ab.s();
    let p = f.p();
    let id = Matrix::identity(f, 3);
    let gens: Vec<Matrix> = (0..s).map(|i| ab.action_matrix(i)).collect();
    let minus_one: Vec<Matrix> = gens.iter().map(|g| g.sub(&id)).collect();

    let mut d1 = Matrix::zeros(f, 3, 3 * s);
    for (i, m) in minus_one.iter().enumerate() {
        d1.set_block(0, 3 * i, m);
    }

    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|i| (i + 1..s).map(move |j| (i, j))).collect();
    let mut d2 = Matrix::zeros(f, 3 * s, 3 * (s + pairs.len()));
    for (i, g) in gens.iter().enumerate() {
        let mut norm = Matrix::zeros(f, 3, 3);
        let mut pow = id.clone();
        for _ in 0..p {
            norm = norm.add(&pow);
            pow = pow.mul(g);
        }
        d2.set_block(3 * i, 3 * i, &norm);
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let col = 3 * (s + k);
        d2.set_block(3 * i, col, &minus_one[j]);
        d2.set_block(3 * j, col, &id.sub(&gens[i]));
    }
    (d1, d2)
}

/// (h0, h1) from ranks of the differentials.
pub fn homology_dims(ab: &AlphaBeta) -> (i64, i64) {
    let (d1, d2) = build_complex(ab);
    let r1 = d1.rank() as i64;
    let r2 = d2.rank() as i64;
    (3 - r1, 3 * ab.s() as i64 - r1 - r2)
}

/// The closed forms: (1, s) for p > 3, (1, s - 1) for p = 3, and for p = 2
/// only h0 - h1, which is 3 - 2s if b is proportional to a and 2 - s
/// otherwise.
pub fn closed_form(ab: &AlphaBeta) -> Result<HomologyValue> {
    if !ab.is_injective() {
        return Err(Error::AlphaNotInjective(format!(
            "alpha values {:?} are dependent over F_{}",
            ab.alpha,
            ab.field.p()
        )));
    }
    let s = ab.s() as i64;
    Ok(match ab.field.p() {
        2 if ab.beta_proportional() => HomologyValue::Difference { h0_minus_h1: 3 - 2 * s },
        2 => HomologyValue::Difference { h0_minus_h1: 2 - s },
        3 => HomologyValue::Dims { h0: 1, h1: s - 1 },
        _ => HomologyValue::Dims { h0: 1, h1: s },
    })
}

/// Whether the chain-complex homology matches the closed form (only the
/// difference for p = 2).
pub fn agrees(ab: &AlphaBeta) -> Result<bool> {
    let (h0, h1) = homology_dims(ab);
    Ok(match closed_form(ab)? {
        HomologyValue::Dims { h0: c0, h1: c1 } => (h0, h1) == (c0, c1),
        HomologyValue::Difference { h0_minus_h1 } => h0 - h1 == h0_minus_h1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn d1_rank_small_case() {
        let f = make_field(2, 1).unwrap();
        let ab = AlphaBeta::from_indices(&f, &[1], &[1]).unwrap();
        let (d1, _) = build_complex(&ab);
        // g - 1 sends w3 to w2 + w1 and kills w1, w2
        assert_eq!(d1, Matrix::from_ints(&f, &[&[0, 0, 1], &[0, 0, 1], &[0, 0, 0]]));
        assert_eq!(d1.rank(), 1);
    }

    #[test]
    fn trivial_action_has_zero_differentials() {
        for (p, s) in [(2, 2), (3, 3), (5, 2)] {
            let f = make_field(p, s).unwrap();
            let ab = AlphaBeta::new(&f, vec![f.zero(); s], vec![f.zero(); s]).unwrap();
            let (d1, d2) = build_complex(&ab);
            assert!(d1.is_zero());
            // N_i = p * I = 0 and the commutator blocks vanish
            assert!(d2.is_zero());
            assert_eq!(homology_dims(&ab), (3, 3 * s as i64));
            assert!(matches!(closed_form(&ab), Err(Error::AlphaNotInjective(_))));
        }
    }

    #[test]
    fn pair_summand_placement() {
        let f = make_field(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ab = AlphaBeta::random(&f, 2, BetaChoice::Free, &mut rng).unwrap();
        let (_, d2) = build_complex(&ab);
        let id = Matrix::identity(&f, 3);
        let mut top = Matrix::zeros(&f, 3, 3);
        let mut bottom = Matrix::zeros(&f, 3, 3);
        for r in 0..3 {
            for c in 0..3 {
                top.set(r, c, d2.get(r, 6 + c).clone());
                bottom.set(r, c, d2.get(3 + r, 6 + c).clone());
            }
        }
        assert_eq!(top, ab.action_matrix(1).sub(&id));
        assert_eq!(bottom, id.sub(&ab.action_matrix(0)));
    }

    #[test]
    fn homology_examples() {
        let f5 = make_field(5, 1).unwrap();
        let ab = AlphaBeta::from_indices(&f5, &[1], &[0]).unwrap();
        assert_eq!(homology_dims(&ab), (1, 1));

        let f9 = make_field(3, 2).unwrap();
        let ab = AlphaBeta::new(&f9, vec![f9.one(), f9.generator()], vec![f9.zero(), f9.one()]).unwrap();
        assert_eq!(homology_dims(&ab), (1, 1));

        let f4 = make_field(2, 2).unwrap();
        let a = vec![f4.one(), f4.generator()];
        let b: Vec<FFElem> = a.iter().map(|x| x * x).collect();
        let ab = AlphaBeta::new(&f4, a, b).unwrap();
        let (h0, h1) = homology_dims(&ab);
        assert_eq!(h0 - h1, 0);
    }

    #[test]
    fn closed_form_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ab = AlphaBeta::random(&make_field(7, 3).unwrap(), 3, BetaChoice::Free, &mut rng).unwrap();
        assert_eq!(closed_form(&ab).unwrap(), HomologyValue::Dims { h0: 1, h1: 3 });
        let ab = AlphaBeta::random(&make_field(2, 1).unwrap(), 1, BetaChoice::Free, &mut rng).unwrap();
        assert_eq!(closed_form(&ab).unwrap(), HomologyValue::Difference { h0_minus_h1: 1 });
        let ab = AlphaBeta::random(&make_field(2, 3).unwrap(), 3, BetaChoice::Square, &mut rng).unwrap();
        assert_eq!(closed_form(&ab).unwrap(), HomologyValue::Difference { h0_minus_h1: -1 });
    }

    #[test]
    fn complex_and_action_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for p in [2u64, 3, 5, 7] {
            for s in 1..=3usize {
                let f = make_field(p, s).unwrap();
                for _ in 0..10 {
                    let ab = AlphaBeta::random(&f, s, BetaChoice::Free, &mut rng).unwrap();
                    let (d1, d2) = build_complex(&ab);
                    assert!(d1.mul(&d2).is_zero(), "d1 d2 != 0 for p={p} s={s}");
                    for i in 0..s {
                        let gi = ab.action_matrix(i);
                        assert_eq!(gi.pow(p), Matrix::identity(&f, 3));
                        for j in 0..s {
                            let gj = ab.action_matrix(j);
                            assert_eq!(gi.mul(&gj), gj.mul(&gi));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn beta_rule_holds_on_the_whole_group() {
        // b(hg) = b(h) + 2 a(h) a(g) + b(g) and a additive, for every pair of
        // group elements, including b(g^p) = 0
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, s) in [(2u64, 2usize), (3, 2), (5, 1), (5, 2)] {
            let f = make_field(p, s).unwrap();
            let ab = AlphaBeta::random(&f, s, BetaChoice::Free, &mut rng).unwrap();
            let two = f.from_int(2);
            let elems: Vec<Vec<u64>> = (0..p.pow(s as u32)).map(|n| (0..s).map(|i| n / p.pow(i as u32) % p).collect()).collect();
            for h in &elems {
                let mh = ab.group_element_matrix(h);
                let (ah, bh) = alpha_beta_of(&mh);
                assert_eq!(mh.get(0, 1), &(&two * &ah));
                for g in &elems {
                    let mg = ab.group_element_matrix(g);
                    let (ag, bg) = alpha_beta_of(&mg);
                    let (ahg, bhg) = alpha_beta_of(&mh.mul(&mg));
                    assert_eq!(ahg, &ah + &ag);
                    assert_eq!(bhg, &bh + &(&two * &(&ah * &ag)) + &bg);
                }
            }
        }
    }

    #[test]
    fn chain_complex_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for p in [2u64, 3, 5, 7] {
            for s in 1..=3usize {
                let f = make_field(p, s).unwrap();
                let choices: &[BetaChoice] =
                    if p == 2 { &[BetaChoice::Free, BetaChoice::Proportional, BetaChoice::Square] } else { &[BetaChoice::Free] };
                for &choice in choices {
                    for _ in 0..20 {
                        let ab = AlphaBeta::random(&f, s, choice, &mut rng).unwrap();
                        assert!(agrees(&ab).unwrap(), "p={p} s={s} {choice:?} {ab:?}: {:?}", homology_dims(&ab));
                    }
                }
            }
        }
    }

    #[test]
    fn p2_difference_depends_only_on_proportionality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = make_field(2, 3).unwrap();
        for s in 1..=3usize {
            let mut seen = std::collections::BTreeMap::new();
            for _ in 0..60 {
                let ab = AlphaBeta::random(&f, s, BetaChoice::Free, &mut rng).unwrap();
                let (h0, h1) = homology_dims(&ab);
                let prev = seen.entry(ab.beta_proportional()).or_insert(h0 - h1);
                assert_eq!(*prev, h0 - h1);
            }
        }
    }
}
