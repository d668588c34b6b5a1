//! JSON file formats for instances and finite supports.
//!
//! Rationals appear either as JSON numbers (integers are taken exactly,
//! doubles by their exact binary value) or as `"p/q"` strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{BuiltinOracle, Instance, ItemDistribution};
use crate::error::{Error, Result};
use crate::rational::{format_rat, from_f64, parse_rat, Rat};

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RatDef {
    Num(serde_json::Number),
    Str(String),
}

impl RatDef {
    fn to_rat(&self, context: &str) -> Result<Rat> {
        match self {
            RatDef::Num(n) => {
                if let Some(i) = n.as_i64() {
                    return Ok(Rat::from_integer(BigInt::from(i)));
                }
                if let Some(u) = n.as_u64() {
                    return Ok(Rat::from_integer(BigInt::from(u)));
                }
                n.as_f64()
                    .and_then(from_f64)
                    .ok_or_else(|| Error::Format(format!("{context}: non-finite number")))
            }
            RatDef::Str(s) => {
                parse_rat(s).map_err(|_| Error::Format(format!("{context}: cannot parse {s:?}")))
            }
        }
    }

    fn from_rat(r: &Rat) -> Self {
        use num_traits::ToPrimitive;
        if r.is_integer() {
            if let Some(i) = r.numer().to_i64() {
                return RatDef::Num(i.into());
            }
        }
        RatDef::Str(format_rat(r))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum DistDef {
    Pmf {
        values: Vec<RatDef>,
        probs: Vec<RatDef>,
    },
    Uniform {
        lo: RatDef,
        hi: RatDef,
    },
    BuiltinOracle {
        name: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        rate: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        mean: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        std: Option<f64>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDef {
    a: Vec<u64>,
    d: Vec<RatDef>,
    delta: RatDef,
    b_lo: RatDef,
    b_hi: RatDef,
    dists: Vec<DistDef>,
}

fn rat_vec(defs: &[RatDef], field: &str) -> Result<Vec<Rat>> {
    defs.iter()
        .enumerate()
        .map(|(k, r)| r.to_rat(&format!("{field}[{k}]")))
        .collect()
}

/// Parses an instance from its JSON document.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let def: InstanceDef = serde_json::from_str(text)?;
    let mut dists = Vec::with_capacity(def.dists.len());
    for (i, d) in def.dists.iter().enumerate() {
        dists.push(match d {
            DistDef::Pmf { values, probs } => ItemDistribution::FinitePmf {
                values: rat_vec(values, &format!("dists[{i}].values"))?,
                probs: rat_vec(probs, &format!("dists[{i}].probs"))?,
            },
            DistDef::Uniform { lo, hi } => ItemDistribution::UniformInterval {
                lo: lo.to_rat(&format!("dists[{i}].lo"))?,
                hi: hi.to_rat(&format!("dists[{i}].hi"))?,
            },
            DistDef::BuiltinOracle {
                name,
                rate,
                mean,
                std,
            } => match name.as_str() {
                "exp" => {
                    let rate = rate.ok_or_else(|| {
                        Error::Format(format!("dists[{i}]: exp oracle needs a rate"))
                    })?;
                    ItemDistribution::Oracle(BuiltinOracle::Exponential { rate })
                }
                "normal" => {
                    let mean = mean.ok_or_else(|| {
                        Error::Format(format!("dists[{i}]: normal oracle needs a mean"))
                    })?;
                    let std = std.ok_or_else(|| {
                        Error::Format(format!("dists[{i}]: normal oracle needs a std"))
                    })?;
                    ItemDistribution::Oracle(BuiltinOracle::Normal {
                        mean,
                        std_dev: std,
                    })
                }
                other => {
                    return Err(Error::Format(format!(
                        "dists[{i}]: unknown oracle {other:?}"
                    )))
                }
            },
        });
    }
    Ok(Instance {
        a: def.a,
        d: rat_vec(&def.d, "d")?,
        delta: def.delta.to_rat("delta")?,
        b_lo: def.b_lo.to_rat("b_lo")?,
        b_hi: def.b_hi.to_rat("b_hi")?,
        dists,
    })
}

/// Serializes an instance to a JSON document.
pub fn instance_to_json(inst: &Instance) -> String {
    let def = InstanceDef {
        a: inst.a.clone(),
        d: inst.d.iter().map(RatDef::from_rat).collect(),
        delta: RatDef::from_rat(&inst.delta),
        b_lo: RatDef::from_rat(&inst.b_lo),
        b_hi: RatDef::from_rat(&inst.b_hi),
        dists: inst
            .dists
            .iter()
            .map(|d| match d {
                ItemDistribution::FinitePmf { values, probs } => DistDef::Pmf {
                    values: values.iter().map(RatDef::from_rat).collect(),
                    probs: probs.iter().map(RatDef::from_rat).collect(),
                },
                ItemDistribution::UniformInterval { lo, hi } => DistDef::Uniform {
                    lo: RatDef::from_rat(lo),
                    hi: RatDef::from_rat(hi),
                },
                ItemDistribution::Oracle(BuiltinOracle::Exponential { rate }) => {
                    DistDef::BuiltinOracle {
                        name: "exp".into(),
                        rate: Some(*rate),
                        mean: None,
                        std: None,
                    }
                }
                ItemDistribution::Oracle(BuiltinOracle::Normal { mean, std_dev }) => {
                    DistDef::BuiltinOracle {
                        name: "normal".into(),
                        rate: None,
                        mean: Some(*mean),
                        std: Some(*std_dev),
                    }
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&def).expect("instance serialization cannot fail")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDef {
    c: Vec<RatDef>,
    p: RatDef,
}

/// Parses a finite support file: a JSON list of `{"c": [...], "p": ...}`.
pub fn support_from_json(text: &str) -> Result<Vec<(Vec<Rat>, Rat)>> {
    let defs: Vec<ScenarioDef> = serde_json::from_str(text)?;
    defs.iter()
        .enumerate()
        .map(|(k, s)| {
            Ok((
                rat_vec(&s.c, &format!("support[{k}].c"))?,
                s.p.to_rat(&format!("support[{k}].p"))?,
            ))
        })
        .collect()
}

/// Serializes a finite support to its JSON file form.
pub fn support_to_json(scenarios: &[(Vec<Rat>, Rat)]) -> String {
    let defs: Vec<ScenarioDef> = scenarios
        .iter()
        .map(|(c, p)| ScenarioDef {
            c: c.iter().map(RatDef::from_rat).collect(),
            p: RatDef::from_rat(p),
        })
        .collect();
    serde_json::to_string_pretty(&defs).expect("support serialization cannot fail")
}
