//! Spline basis files: one record per spline mapping face id → polynomial text.

use crate::complex::GrDomain;
use crate::error::{Error, Result};
use crate::poly::{Grading, Polynomial};
use crate::spline::{Spline, SplineBasis};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub domain: String,
    pub r: u32,
    pub grading: Grading,
    pub splines: Vec<BTreeMap<String, String>>,
}

pub fn spline_record(s: &Spline) -> BTreeMap<String, String> {
    s.pieces.iter().map(|(f, p)| (f.to_string(), p.to_string())).collect()
}

pub fn parse_spline_record(rec: &BTreeMap<String, String>, d: &GrDomain) -> Result<Spline> {
    let mut pieces = BTreeMap::new();
    for (k, v) in rec {
        let f: usize = k.parse().map_err(|_| Error::Format(format!("spline piece key `{k}` is not a face id")))?;
        pieces.insert(f, Polynomial::parse(v, &d.space).map_err(|e| Error::Format(format!("piece on face {f}: {e}")))?);
    }
    Ok(Spline { pieces })
}

impl BasisFile {
    pub fn from_basis(b: &SplineBasis) -> Self {
        Self { domain: b.domain.clone(), r: b.r, grading: b.grading, splines: b.splines.iter().map(spline_record).collect() }
    }

    pub fn to_basis(&self, d: &GrDomain) -> Result<SplineBasis> {
        let splines = self.splines.iter().map(|rec| parse_spline_record(rec, d)).collect::<Result<_>>()?;
        Ok(SplineBasis { domain: self.domain.clone(), r: self.r, grading: self.grading, space: d.space.clone(), splines })
    }
}

pub fn serialize_basis(b: &SplineBasis) -> Result<String> {
    Ok(serde_json::to_string_pretty(&BasisFile::from_basis(b))?)
}

pub fn parse_basis(text: &str, d: &GrDomain) -> Result<SplineBasis> {
    let f: BasisFile = serde_json::from_str(text).map_err(|e| Error::Format(format!("basis file: {e}")))?;
    f.to_basis(d)
}
