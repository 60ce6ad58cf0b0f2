//! JSON wire formats: finite subsets as arrays of integer arrays,
//! subshifts with token-valued forbidden patterns, covers as lists of
//! cylinder unions, and measures with rationals written as `"p/q"`.

use crate::group::{FiniteSubset, FolnerSequence, GroupElement};
use crate::measures::{EmpiricalSpec, Measure, MeasureVariant, Q};
use crate::subshift::{Alphabet, Cover, CoverKind, Pattern, Sft, SymbolicSet};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use std::str::FromStr;

fn err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Rounds to `digits` significant decimal digits (report formatting).
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - magnitude);
    (x * factor).round() / factor
}

/// Parses `"p/q"`, `"p"`, or a JSON number into an exact rational.
pub fn rational_from_json(v: &Value) -> Result<Q> {
    use num_traits::Zero;
    match v {
        Value::String(s) => {
            let s = s.trim();
            if let Some((p, q)) = s.split_once('/') {
                let p = BigInt::from_str(p.trim()).map_err(|e| err(format!("bad numerator: {e}")))?;
                let q = BigInt::from_str(q.trim()).map_err(|e| err(format!("bad denominator: {e}")))?;
                if q.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(Q::new(p, q))
            } else {
                let p = BigInt::from_str(s).map_err(|e| err(format!("bad integer: {e}")))?;
                Ok(Q::from_integer(p))
            }
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Q::from_integer(BigInt::from(i)))
            } else {
                let f = n.as_f64().ok_or_else(|| err("bad number"))?;
                Q::from_float(f).ok_or_else(|| err("non-finite number"))
            }
        }
        _ => Err(err("expected a rational as \"p/q\" or a number")),
    }
}

pub fn rational_to_json(q: &Q) -> Value {
    if q.denom().is_one() {
        Value::String(q.numer().to_string())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn finite_subset_to_json(s: &FiniteSubset) -> Value {
    Value::Array(
        s.iter()
            .map(|g| Value::Array(g.coords().iter().map(|&c| json!(c)).collect()))
            .collect(),
    )
}

pub fn finite_subset_from_json(v: &Value) -> Result<FiniteSubset> {
    let arr = v.as_array().ok_or_else(|| err("finite subset must be an array"))?;
    if arr.is_empty() {
        return Err(err("finite subset must be non-empty"));
    }
    let mut elems = Vec::with_capacity(arr.len());
    let mut dim = 0usize;
    for g in arr {
        let coords: Vec<i64> = g
            .as_array()
            .ok_or_else(|| err("group element must be an integer array"))?
            .iter()
            .map(|c| c.as_i64().ok_or_else(|| err("coordinate must be an integer")))
            .collect::<Result<_>>()?;
        if dim == 0 {
            dim = coords.len();
        }
        elems.push(GroupElement::new(&coords)?);
    }
    FiniteSubset::new(dim, elems)
}

pub fn folner_from_json(v: &Value) -> Result<FolnerSequence> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| err("folner spec needs a \"kind\""))?;
    match kind {
        "box" => {
            let d = v.get("d").and_then(Value::as_u64).unwrap_or(1) as usize;
            Ok(FolnerSequence::Box { d })
        }
        "shifted_interval" => {
            let offsets = v
                .get("offsets")
                .and_then(Value::as_array)
                .ok_or_else(|| err("shifted_interval needs \"offsets\""))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| err("offset must be an integer")))
                .collect::<Result<Vec<_>>>()?;
            Ok(FolnerSequence::ShiftedInterval { offsets })
        }
        "custom" => {
            let sets = v
                .get("sets")
                .and_then(Value::as_array)
                .ok_or_else(|| err("custom needs \"sets\""))?
                .iter()
                .map(finite_subset_from_json)
                .collect::<Result<Vec<_>>>()?;
            Ok(FolnerSequence::Custom { sets })
        }
        other => Err(Error::BadFolner(other.into())),
    }
}

pub fn pattern_from_json(v: &Value, alphabet: &Alphabet) -> Result<Pattern> {
    let shape = v
        .get("shape")
        .and_then(Value::as_array)
        .ok_or_else(|| err("pattern needs \"shape\""))?;
    let assign = v
        .get("assign")
        .and_then(Value::as_array)
        .ok_or_else(|| err("pattern needs \"assign\""))?;
    if shape.len() != assign.len() {
        return Err(err("shape and assign lengths differ"));
    }
    let mut cells = Vec::with_capacity(shape.len());
    for (g, s) in shape.iter().zip(assign) {
        let coords: Vec<i64> = g
            .as_array()
            .ok_or_else(|| err("shape cell must be an integer array"))?
            .iter()
            .map(|c| c.as_i64().ok_or_else(|| err("coordinate must be an integer")))
            .collect::<Result<_>>()?;
        let token = s.as_str().ok_or_else(|| err("assign entries must be symbol tokens"))?;
        cells.push((GroupElement::new(&coords)?, alphabet.index_of(token)?));
    }
    Pattern::new(cells)
}

pub fn pattern_to_json(p: &Pattern, alphabet: &Alphabet) -> Value {
    json!({
        "shape": p.cells().iter().map(|(g, _)| g.coords().to_vec()).collect::<Vec<_>>(),
        "assign": p.cells().iter().map(|(_, s)| alphabet.symbol(*s)).collect::<Vec<_>>(),
    })
}

pub fn sft_from_json(v: &Value) -> Result<Sft> {
    let alphabet = Alphabet::new(
        v.get("alphabet")
            .and_then(Value::as_array)
            .ok_or_else(|| err("sft needs \"alphabet\""))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| err("alphabet entries must be strings"))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| err("sft needs \"d\""))? as usize;
    let forbidden = v
        .get("forbidden")
        .and_then(Value::as_array)
        .map(|arr| {
            arr.iter()
                .map(|p| pattern_from_json(p, &alphabet))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?
        .unwrap_or_default();
    Sft::new(alphabet, d, forbidden)
}

pub fn sft_to_json(sft: &Sft) -> Value {
    json!({
        "alphabet": (0..sft.alphabet.len() as u8).map(|i| sft.alphabet.symbol(i)).collect::<Vec<_>>(),
        "d": sft.d,
        "forbidden": sft.forbidden.iter().map(|p| pattern_to_json(p, &sft.alphabet)).collect::<Vec<_>>(),
    })
}

/// A cover file is a JSON list of symbolic sets, each a list of patterns;
/// an empty-shape pattern denotes the full space.
pub fn cover_from_json(v: &Value, sft: &Sft) -> Result<Cover> {
    let arr = v.as_array().ok_or_else(|| err("cover must be a list of symbolic sets"))?;
    let elements = arr
        .iter()
        .map(|sets| {
            let cylinders = sets
                .as_array()
                .ok_or_else(|| err("symbolic set must be a list of patterns"))?
                .iter()
                .map(|p| pattern_from_json(p, &sft.alphabet))
                .collect::<Result<Vec<_>>>()?;
            Ok(SymbolicSet::new(cylinders))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cover::new(elements, CoverKind::Borel))
}

pub fn cover_to_json(cover: &Cover, alphabet: &Alphabet) -> Value {
    Value::Array(
        cover
            .elements
            .iter()
            .map(|e| {
                Value::Array(
                    e.cylinders
                        .iter()
                        .map(|p| pattern_to_json(p, alphabet))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn measure_from_json(v: &Value, sft: &Sft) -> Result<Measure> {
    let variant = v
        .get("variant")
        .and_then(Value::as_str)
        .ok_or_else(|| err("measure needs a \"variant\""))?;
    match variant {
        "bernoulli" => {
            let probs_obj = v
                .get("probs")
                .and_then(Value::as_object)
                .ok_or_else(|| err("bernoulli needs \"probs\""))?;
            let mut probs = vec![Q::from_integer(0.into()); sft.alphabet.len()];
            for (token, val) in probs_obj {
                let idx = sft.alphabet.index_of(token)? as usize;
                probs[idx] = rational_from_json(val)?;
            }
            Measure::bernoulli(sft.d, probs)
        }
        "markov" => {
            let transition = v
                .get("transition")
                .and_then(Value::as_array)
                .ok_or_else(|| err("markov needs \"transition\""))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| err("transition rows must be arrays"))?
                        .iter()
                        .map(rational_from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let stationary = v
                .get("stationary")
                .and_then(Value::as_array)
                .map(|arr| arr.iter().map(rational_from_json).collect::<Result<Vec<_>>>())
                .transpose()?;
            Measure::markov(transition, stationary)
        }
        "periodic" => {
            let word = v
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| err("periodic needs \"word\""))?
                .iter()
                .map(|s| {
                    s.as_str()
                        .ok_or_else(|| err("word entries must be symbol tokens"))
                        .and_then(|t| sft.alphabet.index_of(t))
                })
                .collect::<Result<Vec<_>>>()?;
            Measure::periodic_word(word)
        }
        "convex" => {
            let weights = v
                .get("weights")
                .and_then(Value::as_array)
                .ok_or_else(|| err("convex needs \"weights\""))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()?;
            let components = v
                .get("components")
                .and_then(Value::as_array)
                .ok_or_else(|| err("convex needs \"components\""))?
                .iter()
                .map(|c| measure_from_json(c, sft))
                .collect::<Result<Vec<_>>>()?;
            Measure::convex(weights, components)
        }
        "empirical" => {
            let master = finite_subset_from_json(
                v.get("master").ok_or_else(|| err("empirical needs \"master\""))?,
            )?;
            let base_points = v
                .get("base_points")
                .and_then(Value::as_array)
                .ok_or_else(|| err("empirical needs \"base_points\""))?
                .iter()
                .map(|p| pattern_from_json(p, &sft.alphabet))
                .collect::<Result<Vec<_>>>()?;
            let averaging = finite_subset_from_json(
                v.get("averaging")
                    .ok_or_else(|| err("empirical needs \"averaging\""))?,
            )?;
            Measure::empirical(EmpiricalSpec {
                master,
                base_points,
                averaging,
            })
        }
        other => Err(Error::UnsupportedMeasure(other.into())),
    }
}

pub fn measure_to_json(mu: &Measure, alphabet: &Alphabet) -> Value {
    match &mu.variant {
        MeasureVariant::Bernoulli { probs } => {
            let mut map = serde_json::Map::new();
            for (i, p) in probs.iter().enumerate() {
                if p.is_positive() {
                    map.insert(alphabet.symbol(i as u8).to_string(), rational_to_json(p));
                }
            }
            json!({"variant": "bernoulli", "probs": Value::Object(map)})
        }
        MeasureVariant::Markov {
            transition,
            stationary,
        } => json!({
            "variant": "markov",
            "transition": transition.iter().map(|row| row.iter().map(rational_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "stationary": stationary.iter().map(rational_to_json).collect::<Vec<_>>(),
        }),
        MeasureVariant::Periodic { cells, .. } => json!({
            "variant": "periodic",
            "word": cells.iter().map(|&s| alphabet.symbol(s)).collect::<Vec<_>>(),
        }),
        MeasureVariant::Convex {
            weights,
            components,
        } => json!({
            "variant": "convex",
            "weights": weights.iter().map(rational_to_json).collect::<Vec<_>>(),
            "components": components.iter().map(|c| measure_to_json(c, alphabet)).collect::<Vec<_>>(),
        }),
        MeasureVariant::Empirical {
            master,
            base,
            averaging,
        } => json!({
            "variant": "empirical",
            "master": master.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>(),
            "base_points": base
                .iter()
                .map(|w| json!({
                    "shape": master.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>(),
                    "assign": w.iter().map(|&s| alphabet.symbol(s)).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
            "averaging": averaging.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::q;

    #[test]
    fn finite_subset_round_trip() {
        let v: Value = serde_json::from_str("[[0],[1],[2]]").unwrap();
        let s = finite_subset_from_json(&v).unwrap();
        assert_eq!(s, FiniteSubset::interval(0, 2));
        assert_eq!(finite_subset_to_json(&s), v);
    }

    #[test]
    fn folner_specs() {
        let b: Value = serde_json::from_str(r#"{"kind":"box","d":1}"#).unwrap();
        assert_eq!(folner_from_json(&b).unwrap(), FolnerSequence::Box { d: 1 });
        let s: Value =
            serde_json::from_str(r#"{"kind":"shifted_interval","offsets":[1,4,9]}"#).unwrap();
        match folner_from_json(&s).unwrap() {
            FolnerSequence::ShiftedInterval { offsets } => assert_eq!(offsets, vec![1, 4, 9]),
            _ => panic!(),
        }
        let bad: Value = serde_json::from_str(r#"{"kind":"mystery"}"#).unwrap();
        assert!(folner_from_json(&bad).is_err());
    }

    #[test]
    fn sft_golden_mean_file() {
        let v: Value = serde_json::from_str(
            r#"{"alphabet":["0","1"],"d":1,"forbidden":[{"shape":[[0],[1]],"assign":["1","1"]}]}"#,
        )
        .unwrap();
        let sft = sft_from_json(&v).unwrap();
        assert_eq!(sft.alphabet.len(), 2);
        assert_eq!(sft.forbidden, Sft::golden_mean().forbidden);
        assert_eq!(sft_to_json(&sft), v);
    }

    #[test]
    fn cover_file_with_full_space_marker() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let v: Value = serde_json::from_str(
            r#"[[{"shape":[],"assign":[]}],[{"shape":[[0]],"assign":["1"]}]]"#,
        )
        .unwrap();
        let cover = cover_from_json(&v, &sft).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.elements[0].is_full_marker());
        assert_eq!(cover_to_json(&cover, &sft.alphabet), v);
    }

    #[test]
    fn measure_files() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let v: Value =
            serde_json::from_str(r#"{"variant":"bernoulli","probs":{"0":"1/2","1":"1/2"}}"#).unwrap();
        let mu = measure_from_json(&v, &sft).unwrap();
        assert_eq!(mu, Measure::bernoulli(1, vec![q(1, 2), q(1, 2)]).unwrap());
        assert_eq!(measure_to_json(&mu, &sft.alphabet), v);

        let mk: Value = serde_json::from_str(
            r#"{"variant":"markov","transition":[["1/2","1/2"],["1","0"]]}"#,
        )
        .unwrap();
        let markov = measure_from_json(&mk, &sft).unwrap();
        assert_eq!(markov, Measure::golden_markov(q(1, 2)).unwrap());

        let per: Value = serde_json::from_str(r#"{"variant":"periodic","word":["0","1"]}"#).unwrap();
        assert_eq!(
            measure_from_json(&per, &sft).unwrap(),
            Measure::periodic_word(vec![0, 1]).unwrap()
        );
    }

    #[test]
    fn rationals() {
        assert_eq!(rational_from_json(&json!("3/4")).unwrap(), q(3, 4));
        assert_eq!(rational_from_json(&json!("5")).unwrap(), q(5, 1));
        assert_eq!(rational_from_json(&json!(0.5)).unwrap(), q(1, 2));
        assert!(rational_from_json(&json!("1/0")).is_err());
        assert_eq!(rational_to_json(&q(3, 4)), json!("3/4"));
        assert_eq!(rational_to_json(&q(5, 1)), json!("5"));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.48121182505960347, 12), 0.481211825060);
        assert_eq!(round_sig(0.0, 12), 0.0);
    }
}
