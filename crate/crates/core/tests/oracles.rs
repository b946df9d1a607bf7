//! Closed formulas against the explicit Artin-Schreier oracle on random
//! curves, plus JSON round trips of the public data types.

use proptest::prelude::*;
use quadiff_core::ascurve::crosscheck;
use quadiff_core::{make_field, ASCurve, CoverData, CoverJson, DivisorJson, OrbitDivisor};

fn curve_text(n_inf: u64, n_zero: u64, shift: u64) -> String {
    let mut parts = Vec::new();
    if n_inf > 0 {
        parts.push(format!("x^{n_inf}"));
    }
    if shift > 0 {
        parts.push(format!("{shift}*x"));
    }
    if n_zero > 0 {
        parts.push(format!("x^-{n_zero}"));
    }
    parts.join(" + ")
}

fn coprime_orders(p: u64, max: u64) -> impl Strategy<Value = u64> {
    (0..=max).prop_filter("order prime to p", move |n| n % p != 0 || *n == 0)
}

fn small_curve() -> impl Strategy<Value = (u64, String)> {
    prop_oneof![Just(2u64), Just(3), Just(5)].prop_flat_map(|p| {
        let max = if p == 5 { 4 } else { 7 };
        (Just(p), coprime_orders(p, max), coprime_orders(p, 3), 0..p)
            .prop_filter("f has a pole", |(_, a, b, _)| *a + *b > 0)
            .prop_map(|(p, a, b, s)| (p, curve_text(a, b, s)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn formulas_agree_with_oracle((p, f) in small_curve()) {
        let field = make_field(p, 1).unwrap();
        let Ok(curve) = ASCurve::parse(&field, &f) else { return Ok(()) };
        prop_assume!(curve.genus() >= 2);
        let checks = crosscheck(&curve).unwrap();
        for c in &checks {
            prop_assert!(c.matches, "{f} over F_{p}: {} formula {} oracle {}", c.name, c.formula, c.oracle);
        }
    }

    #[test]
    fn curve_covers_roundtrip((p, f) in small_curve()) {
        let field = make_field(p, 1).unwrap();
        let Ok(curve) = ASCurve::parse(&field, &f) else { return Ok(()) };
        let cover = curve.cover().unwrap();
        let text = serde_json::to_string(&cover.to_json()).unwrap();
        let back = CoverData::from_json(&serde_json::from_str::<CoverJson>(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &cover);
        prop_assert_eq!(back.genus_x().unwrap(), curve.genus());
    }
}

#[test]
fn divisor_json_roundtrip() {
    let field = make_field(5, 1).unwrap();
    let curve = ASCurve::parse(&field, "x + x^-1").unwrap();
    let cover = curve.cover().unwrap();
    let d = curve.named_divisor(&cover, "2K+3Rred").unwrap();
    let text = serde_json::to_string(&d.to_json()).unwrap();
    let back = OrbitDivisor::from_json(&cover, &serde_json::from_str::<DivisorJson>(&text).unwrap()).unwrap();
    assert_eq!(back, d);
}
