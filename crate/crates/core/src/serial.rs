//! JSON forms of series and series polynomials.
//!
//! ```json
//! {"field": "Q", "q": 2, "prec": "5", "terms": [[0, "1"], [1, "-1/2"]]}
//! ```
//! `prec` is a rational `"num/den"` (or an integer), or `"inf"` for an exact series.

use serde::{Deserialize, Serialize};

use crate::error::SeriesError;
use crate::field::Field;
use crate::poly::SeriesPoly;
use crate::series::{format_exp, parse_exp, PuiseuxSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub field: String,
    pub q: i64,
    pub prec: String,
    pub terms: Vec<(i64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermJson {
    pub exp: Vec<u32>,
    pub coeff: SeriesJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesPolyJson {
    pub field: String,
    pub n_vars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneous_degree: Option<u32>,
    pub terms: Vec<PolyTermJson>,
}

pub fn series_to_json(s: &PuiseuxSeries) -> SeriesJson {
    let f = s.field();
    SeriesJson {
        field: f.to_string(),
        q: s.ram(),
        prec: s.precision().map_or_else(|| "inf".to_string(), |p| format_exp(&p)),
        terms: s.terms().map(|(k, c)| (k, f.format_scalar(c))).collect(),
    }
}

pub fn series_from_json(j: &SeriesJson) -> Result<PuiseuxSeries, SeriesError> {
    let field: Field = j.field.parse()?;
    let prec = match j.prec.trim() {
        "inf" => None,
        p => Some(parse_exp(p)?),
    };
    let mut terms = Vec::with_capacity(j.terms.len());
    for (k, c) in &j.terms {
        if let Some(mu) = prec {
            if num_rational::Ratio::new(*k, j.q.max(1)) >= mu {
                return Err(SeriesError::Parse(format!("term t^({k}/{}) lies beyond the precision", j.q)));
            }
        }
        terms.push((*k, field.parse_scalar(c)?));
    }
    PuiseuxSeries::new(field, j.q, terms, prec)
}

pub fn poly_to_json(p: &SeriesPoly) -> SeriesPolyJson {
    SeriesPolyJson {
        field: p.field().to_string(),
        n_vars: p.n_vars(),
        homogeneous_degree: p.homogeneous_degree(),
        terms: p.terms().map(|(m, c)| PolyTermJson { exp: m.clone(), coeff: series_to_json(c) }).collect(),
    }
}

pub fn poly_from_json(j: &SeriesPolyJson) -> Result<SeriesPoly, SeriesError> {
    let field: Field = j.field.parse()?;
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let c = series_from_json(&t.coeff)?;
        if c.field() != field {
            return Err(SeriesError::FieldMismatch { left: field.to_string(), right: c.field().to_string() });
        }
        terms.push((t.exp.clone(), c));
    }
    let p = SeriesPoly::from_terms(field, j.n_vars, terms)?;
    match j.homogeneous_degree {
        Some(d) => p.with_homogeneous_degree(d),
        None => Ok(p),
    }
}

pub fn parse_series(text: &str) -> Result<PuiseuxSeries, SeriesError> {
    let j: SeriesJson = serde_json::from_str(text).map_err(|e| SeriesError::Parse(e.to_string()))?;
    series_from_json(&j)
}

pub fn parse_poly(text: &str) -> Result<SeriesPoly, SeriesError> {
    let j: SeriesPolyJson = serde_json::from_str(text).map_err(|e| SeriesError::Parse(e.to_string()))?;
    poly_from_json(&j)
}

/// A system file is either one polynomial object or a JSON array of them.
pub fn parse_poly_list(text: &str) -> Result<Vec<SeriesPoly>, SeriesError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| SeriesError::Parse(e.to_string()))?;
    let items = match v {
        serde_json::Value::Array(items) => items,
        other => vec![other],
    };
    items
        .into_iter()
        .map(|it| {
            let j: SeriesPolyJson = serde_json::from_value(it).map_err(|e| SeriesError::Parse(e.to_string()))?;
            poly_from_json(&j)
        })
        .collect()
}

/// A point file: JSON array of series objects.
pub fn parse_series_list(text: &str) -> Result<Vec<PuiseuxSeries>, SeriesError> {
    let js: Vec<SeriesJson> = serde_json::from_str(text).map_err(|e| SeriesError::Parse(e.to_string()))?;
    js.iter().map(series_from_json).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{exp, exp_int};

    #[test]
    fn series_round_trip() {
        let f = Field::Rationals;
        let s = PuiseuxSeries::new(f, 2, vec![(0, f.one()), (1, f.parse_scalar("-1/2").unwrap())], Some(exp(5, 1)))
            .unwrap();
        let j = series_to_json(&s);
        assert_eq!(j.prec, "5");
        assert_eq!(j.terms[1].1, "-1/2");
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(parse_series(&text).unwrap(), s);
    }

    #[test]
    fn prime_field_residues_are_canonical() {
        let text = r#"{"field":"Fp:5","q":1,"prec":"inf","terms":[[0,"-1"],[2,"7"]]}"#;
        let s = parse_series(text).unwrap();
        let j = series_to_json(&s);
        assert_eq!(j.terms, vec![(0, "4".to_string()), (2, "2".to_string())]);
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(parse_series(r#"{"field":"Fp:4","q":1,"prec":"inf","terms":[]}"#).is_err());
        assert!(parse_series(r#"{"field":"Q","q":1,"prec":"2","terms":[[3,"1"]]}"#).is_err());
        assert!(parse_series(r#"{"field":"Q","q":0,"prec":"2","terms":[]}"#).is_err());
        assert!(parse_series(r#"{"field":"Q","q":1,"prec":"2","terms":[],"extra":1}"#).is_err());
        assert!(parse_poly("not json").is_err());
    }

    #[test]
    fn poly_round_trip() {
        let f = Field::Rationals;
        let p = SeriesPoly::var(f, 2, 0)
            .mul(&SeriesPoly::var(f, 2, 1))
            .sub(&SeriesPoly::var(f, 2, 1).pow(2).scale(&PuiseuxSeries::t_pow(f, exp_int(1))))
            .with_homogeneous_degree(2)
            .unwrap();
        let text = serde_json::to_string(&poly_to_json(&p)).unwrap();
        assert_eq!(parse_poly(&text).unwrap(), p);
        assert_eq!(parse_poly_list(&format!("[{text},{text}]")).unwrap().len(), 2);
    }
}
