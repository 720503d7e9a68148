//! JSON interchange for relation vectors.
//!
//! The wire form is a single object with fields in this order:
//!
//! ```json
//! {"weight":12,"g_coeff":"143","p_coeffs":[{"i":4,"j":8,"c":"42"},{"i":6,"j":6,"c":"25"}],"source":{"r":3,"s":5,"t":5}}
//! ```
//!
//! Rationals travel as strings, `"p"` or `"p/q"` in lowest terms with q > 0;
//! parsing is lenient (any integer pair normalizes) but emission is canonical.
//! `source` is omitted when the vector was not generated from a triple.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{Int, Rational};
use crate::relations::RelationVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDocument {
    pub weight: u64,
    pub g_coeff: String,
    pub p_coeffs: Vec<PCoeffEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<SourceTriple>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PCoeffEntry {
    pub i: u64,
    pub j: u64,
    pub c: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SourceTriple {
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |m: &str| Error::BadDocument(format!("bad rational {s:?}: {m}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = Int::from_str(n.trim()).map_err(|_| bad("unparseable numerator"))?;
    let d = Int::from_str(d.trim()).map_err(|_| bad("unparseable denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

impl RelationDocument {
    pub fn from_vector(v: &RelationVector) -> Self {
        Self {
            weight: v.weight(),
            g_coeff: format_rational(v.g_coeff()),
            p_coeffs: v
                .p_coeffs()
                .iter()
                .map(|(&(i, j), c)| PCoeffEntry {
                    i,
                    j,
                    c: format_rational(c),
                })
                .collect(),
            source: v.source().map(|(r, s, t)| SourceTriple { r, s, t }),
        }
    }

    /// Validates and rebuilds the vector; rejects duplicate or malformed
    /// product keys and unparseable coefficients.
    pub fn to_vector(&self) -> Result<RelationVector> {
        let g = parse_rational(&self.g_coeff)?;
        let mut p = BTreeMap::new();
        for e in &self.p_coeffs {
            if p.insert((e.i, e.j), parse_rational(&e.c)?).is_some() {
                return Err(Error::BadDocument(format!(
                    "duplicate product key ({}, {})",
                    e.i, e.j
                )));
            }
        }
        let v = RelationVector::from_parts(self.weight, g, p)?;
        Ok(match self.source {
            Some(s) => v.with_source(s.r, s.s, s.t),
            None => v,
        })
    }
}

pub fn to_json(v: &RelationVector) -> String {
    serde_json::to_string(&RelationDocument::from_vector(v)).expect("document serializes")
}

pub fn from_json(s: &str) -> Result<RelationVector> {
    let doc: RelationDocument =
        serde_json::from_str(s).map_err(|e| Error::BadDocument(e.to_string()))?;
    doc.to_vector()
}
