use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use quadiff_core::ascurve::{crosscheck, oracle_report, ASCurve};
use quadiff_core::divisors::{floor_pushforward_closed, tot_riemann_roch};
use quadiff_core::formulas::{
    dim_cyclic, dim_tame, dim_weakly_ramified, free_rank_aug, homology_dims_closed, m_regular_cyclic_p,
    p_rank_free_rank,
};
use quadiff_core::homology::{closed_form, homology_dims, AlphaBeta, BetaChoice};
use quadiff_core::localfield::{
    as_normalize, build_extension, build_tower, default_jump_prec, find_tower_constants, measure_jump,
    weierstrass_check,
};
use quadiff_core::{make_field, CoverData, CoverJson, DivisorJson, FiniteField, LaurentSeries, OrbitDivisor};

use crate::{
    BetaArg, Case, Command, CurveArgs, DimArgs, Failure, HomologyArgs, LocalOp, OracleArgs, SeriesArgs, TotArgs,
    TowerArgs, WeierstrassArgs,
};

type Outcome = Result<Value, Failure>;

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Dim(a) => dim(a),
        Command::Tot(a) => tot(a),
        Command::Homology(a) => homology(a),
        Command::Local(a) => match &a.op {
            LocalOp::Normalize(s) => normalize(s),
            LocalOp::Jump(s) => jump(s),
            LocalOp::Tower(t) => tower(t),
            LocalOp::Weierstrass(w) => weierstrass(w),
        },
        Command::Oracle(a) => oracle(a),
        Command::Crosscheck(a) => cross(a),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_cover(path: &Path) -> Result<CoverData, Failure> {
    let json: CoverJson = read_json(path)?;
    Ok(CoverData::from_json(&json)?)
}

fn dim(a: &DimArgs) -> Outcome {
    let c = read_cover(&a.cover)?;
    let report = match a.case {
        Case::Tame => to_value(&dim_tame(&c)),
        Case::Cyclic => to_value(&dim_cyclic(&c)?),
        Case::Weakly => to_value(&dim_weakly_ramified(&c)?),
        Case::FreeRank => to_value(&free_rank_aug(&c)?),
        Case::MRegular => to_value(&m_regular_cyclic_p(&c)?),
        Case::Prank => {
            let gamma = a.gamma_y.ok_or_else(|| Failure::Input("--case prank needs --gamma-y".into()))?;
            to_value(&p_rank_free_rank(&c, gamma, a.deg_phi_red)?)
        }
        Case::Homology => {
            let h = homology_dims_closed(&c)?;
            json!({ "formula": "homology", "p": c.p(), "r": c.r(), "value": h, "h1_minus_h0": h.h1_minus_h0() })
        }
    };
    Ok(report)
}

fn tot(a: &TotArgs) -> Outcome {
    let c = read_cover(&a.cover)?;
    let dj: DivisorJson = read_json(&a.divisor)?;
    let d = OrbitDivisor::from_json(&c, &dj)?;
    let value = tot_riemann_roch(&d)?;
    let push = floor_pushforward_closed(&d)?;
    Ok(json!({
        "formula": "tot",
        "value": value,
        "degree": d.degree(),
        "genus_x": c.genus_x()?,
        "pushforward": to_value(&push.to_json()),
    }))
}

fn homology(a: &HomologyArgs) -> Outcome {
    let m = a.m.unwrap_or(a.s.max(1));
    let field = make_field(a.p, m)?;
    let samples: Vec<AlphaBeta> = if a.random {
        let seed = a.seed.ok_or_else(|| Failure::Input("--random needs --seed".into()))?;
        let choice = match a.beta_choice {
            BetaArg::Free => BetaChoice::Free,
            BetaArg::Proportional => BetaChoice::Proportional,
            BetaArg::Square => BetaChoice::Square,
        };
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..a.count).map(|_| AlphaBeta::random(&field, a.s, choice, &mut rng)).collect::<Result<_, _>>()?
    } else if !a.alpha.is_empty() {
        if a.alpha.len() != a.s {
            return Err(Failure::Input(format!("--alpha has {} values but s = {}", a.alpha.len(), a.s)));
        }
        vec![AlphaBeta::from_indices(&field, &a.alpha, &a.beta)?]
    } else {
        return Err(Failure::Input("give --alpha/--beta or --random --seed".into()));
    };
    let mut rows = Vec::new();
    let mut all = true;
    for ab in &samples {
        let (h0, h1) = homology_dims(ab);
        let closed = closed_form(ab)?;
        let agree = match closed {
            quadiff_core::formulas::HomologyValue::Dims { h0: c0, h1: c1 } => (c0, c1) == (h0, h1),
            quadiff_core::formulas::HomologyValue::Difference { h0_minus_h1 } => h0 - h1 == h0_minus_h1,
        };
        all &= agree;
        rows.push(json!({
            "alpha": ab.alpha().iter().map(|x| x.index()).collect::<Vec<_>>(),
            "beta": ab.beta().iter().map(|x| x.index()).collect::<Vec<_>>(),
            "beta_proportional": ab.beta_proportional(),
            "h0": h0,
            "h1": h1,
            "closed_form": closed,
            "match": agree,
        }));
    }
    let report = json!({ "p": a.p, "s": a.s, "m": m, "samples": rows, "match": all });
    if all {
        Ok(report)
    } else {
        Err(Failure::Mismatch(report))
    }
}

fn parse_series(field: &FiniteField, text: &str, prec: Option<i64>) -> Result<LaurentSeries, Failure> {
    let bad = || Failure::Input(format!("cannot parse series {text:?}; expected exp:coeff,exp:coeff,..."));
    let mut terms = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (e, c) = part.split_once(':').ok_or_else(bad)?;
        let e: i64 = e.trim().parse().map_err(|_| bad())?;
        let c: i64 = c.trim().parse().map_err(|_| bad())?;
        let c = if field.m() == 1 {
            field.from_int(c)
        } else {
            let idx = u64::try_from(c).map_err(|_| bad())?;
            field.from_index(idx)?
        };
        terms.push((e, c));
    }
    Ok(LaurentSeries::from_terms(field, &terms, prec)?)
}

fn normalize(a: &SeriesArgs) -> Outcome {
    let field = make_field(a.p, a.m)?;
    let x = parse_series(&field, &a.series, a.prec)?;
    let n = as_normalize(&x)?;
    Ok(json!({
        "input": x.to_string(),
        "normalized": n.x.to_string(),
        "m": n.m,
        "corrections": n.corrections.iter().map(ToString::to_string).collect::<Vec<_>>(),
    }))
}

fn jump(a: &SeriesArgs) -> Outcome {
    let field = make_field(a.p, a.m)?;
    let x = parse_series(&field, &a.series, a.prec)?;
    let n = as_normalize(&x)?;
    let prec = a.work_prec.unwrap_or_else(|| default_jump_prec(n.m));
    let ext = build_extension(&n.x, prec)?;
    let jumps = (1..a.p as i64).map(|c| measure_jump(&ext, &field.from_int(c))).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "normalized": n.x.to_string(),
        "m": n.m,
        "prec": prec,
        "s": ext.s.to_string(),
        "y": ext.y.to_string(),
        "jumps": jumps,
        "match": jumps.iter().all(|&j| j == n.m),
    }))
}

fn tower(a: &TowerArgs) -> Outcome {
    let (field, constants) = find_tower_constants(a.p, a.rank, a.max_m)?;
    let t = build_tower(&field, &constants, a.prec)?;
    let mut elements = Vec::new();
    let (mut squares, mut mobius) = (true, true);
    for e in t.elements()? {
        let mut r = to_value(&e.report()?);
        let mob = e.matches_mobius()?;
        squares &= e.beta == &e.alpha * &e.alpha;
        mobius &= mob;
        r["mobius"] = Value::Bool(mob);
        elements.push(r);
    }
    Ok(json!({
        "p": a.p,
        "rank": a.rank,
        "field_order": field.order(),
        "modulus": field.modulus(),
        "constants": constants.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "prec": a.prec,
        "complete": t.is_complete(),
        "elements": elements,
        "beta_is_alpha_squared": squares,
        "mobius": mobius,
    }))
}

fn weierstrass(a: &WeierstrassArgs) -> Outcome {
    let poles = match (&a.p, &a.f) {
        (Some(p), Some(f)) => {
            let field = make_field(*p, 1)?;
            ASCurve::parse(&field, f)?.pole_numbers(a.point, a.bound)?
        }
        _ if !a.poles.is_empty() => a.poles.clone(),
        _ => return Err(Failure::Input("give --poles or --p and --f".into())),
    };
    let mut report = to_value(&weierstrass_check(&poles, a.bound)?);
    report["pole_numbers"] = to_value(&poles);
    Ok(report)
}

fn curve(a: &CurveArgs) -> Result<ASCurve, Failure> {
    let field = make_field(a.p, 1)?;
    Ok(ASCurve::parse(&field, &a.f)?)
}

fn oracle(a: &OracleArgs) -> Outcome {
    let c = curve(&a.curve)?;
    let report = oracle_report(&c, &a.divisor)?;
    let ok = report.crosschecks.iter().all(|x| x.matches);
    let v = to_value(&report);
    if ok {
        Ok(v)
    } else {
        Err(Failure::Mismatch(v))
    }
}

fn cross(a: &CurveArgs) -> Outcome {
    let c = curve(a)?;
    let checks = crosscheck(&c)?;
    let ok = checks.iter().all(|x| x.matches);
    let v = json!({
        "p": c.p(),
        "f": c.to_string(),
        "genus": c.genus(),
        "crosschecks": checks,
        "match": ok,
    });
    if ok {
        Ok(v)
    } else {
        Err(Failure::Mismatch(v))
    }
}
