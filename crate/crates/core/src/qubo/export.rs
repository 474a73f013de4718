//! JSON interchange for quadratic models:
//! `{"num_vars", "offset", "linear": {"i": c}, "quadratic": {"i,j": c}, "layout": {..}}`.

use super::{BitLayout, QuadraticModel};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    num_vars: usize,
    offset: f64,
    linear: BTreeMap<String, f64>,
    quadratic: BTreeMap<String, f64>,
    layout: BitLayout,
}

pub fn model_to_json(model: &QuadraticModel) -> String {
    let doc = ModelDoc {
        num_vars: model.num_vars(),
        offset: model.offset(),
        linear: model
            .linear()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (i.to_string(), c))
            .collect(),
        quadratic: model
            .quadratic()
            .iter()
            .map(|(&(i, j), &c)| (format!("{i},{j}"), c))
            .collect(),
        layout: model.layout().clone(),
    };
    serde_json::to_string_pretty(&doc).expect("model serialization cannot fail")
}

fn parse_var(key: &str, n: usize) -> Result<usize> {
    let v: usize = key
        .trim()
        .parse()
        .map_err(|_| Error::Malformed(format!("bad variable index `{key}`")))?;
    if v >= n {
        return Err(Error::Malformed(format!("variable {v} out of range 0..{n}")));
    }
    Ok(v)
}

pub fn model_from_json(text: &str) -> Result<QuadraticModel> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if doc.layout.total != doc.num_vars {
        return Err(Error::DimensionMismatch {
            path: "layout.total".into(),
            expected: doc.num_vars,
            found: doc.layout.total,
        });
    }
    let n = doc.num_vars;
    let mut m = QuadraticModel::zeros(doc.layout);
    m.add_offset(doc.offset);
    for (k, c) in doc.linear {
        m.add_linear(parse_var(&k, n)?, c);
    }
    for (k, c) in doc.quadratic {
        let (a, b) = k
            .split_once(',')
            .ok_or_else(|| Error::Malformed(format!("bad pair key `{k}`")))?;
        let (i, j) = (parse_var(a, n)?, parse_var(b, n)?);
        if i >= j {
            return Err(Error::Malformed(format!("pair key `{k}` must have i < j")));
        }
        m.add_quadratic(i, j, c);
    }
    Ok(m)
}
