use super::KnapsackInstance;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Wire form of an instance; validated on the way in.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario_id: Option<usize>,
    pub capacities: Vec<i64>,
    pub weights: Vec<i64>,
    pub values: Vec<Vec<i64>>,
}

fn positive(path: String, v: i64) -> Result<u64> {
    if v > 0 {
        Ok(v as u64)
    } else {
        Err(Error::NonPositive { path, value: v })
    }
}

impl TryFrom<RawInstance> for KnapsackInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        if raw.capacities.is_empty() {
            return Err(Error::Malformed("`capacities` must list at least one knapsack".into()));
        }
        if raw.weights.is_empty() {
            return Err(Error::Malformed("`weights` must list at least one item".into()));
        }
        let m = raw.capacities.len();
        if raw.values.len() != m {
            return Err(Error::DimensionMismatch {
                path: "values".into(),
                expected: m,
                found: raw.values.len(),
            });
        }
        // Item count comes from the value matrix so a short `weights` list is
        // reported against `weights` itself.
        let n = raw.values[0].len();
        for (k, row) in raw.values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    path: format!("values[{k}]"),
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if raw.weights.len() != n {
            return Err(Error::DimensionMismatch {
                path: "weights".into(),
                expected: n,
                found: raw.weights.len(),
            });
        }

        let capacities = raw
            .capacities
            .iter()
            .enumerate()
            .map(|(k, &c)| positive(format!("capacities[{k}]"), c))
            .collect::<Result<_>>()?;
        let weights = raw
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| positive(format!("weights[{i}]"), w))
            .collect::<Result<_>>()?;
        let values = raw
            .values
            .iter()
            .enumerate()
            .map(|(k, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, &v)| positive(format!("values[{k}][{i}]"), v))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        Ok(KnapsackInstance {
            scenario_id: raw.scenario_id,
            capacities,
            weights,
            values,
        })
    }
}

impl From<KnapsackInstance> for RawInstance {
    fn from(inst: KnapsackInstance) -> Self {
        let signed = |v: &[u64]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
        RawInstance {
            scenario_id: inst.scenario_id,
            capacities: signed(&inst.capacities),
            weights: signed(&inst.weights),
            values: inst.values.iter().map(|row| signed(row)).collect(),
        }
    }
}

/// Parses an instance document:
/// `{"scenario_id": 3, "capacities": [..], "weights": [..], "values": [[..], ..]}`.
pub fn parse_instance(text: &str) -> Result<KnapsackInstance> {
    let raw: RawInstance =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    raw.try_into()
}

pub fn serialize_instance(inst: &KnapsackInstance) -> String {
    serde_json::to_string_pretty(inst).expect("instance serialization cannot fail")
}
