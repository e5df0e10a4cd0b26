//! The configuration file: one JSON object holding a point set, its
//! multiplicities, the field it lives in, and where it came from.
//!
//! ```json
//! {
//!   "generator": "fatpoints 0.1.0",
//!   "field": { "kind": "exact-rational" },
//!   "ambient_dim": 2,
//!   "points": [[0, 0, 1], [1, 0, 0]],
//!   "multiplicities": [2, 2],
//!   "provenance": { "kind": "c_dr", "d": 5, "r": 1 },
//!   "seed": 7
//! }
//! ```
//!
//! Over a prime field the coordinates are canonical residues in `[0, p)`.
//! Over the rationals they are integers (written as primitive vectors).

use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, PrimeField};
use crate::hilbert::FatPointScheme;
use crate::plane::{Configuration, ProjectivePoint, Provenance};

pub const TOOL_VERSION: &str = concat!("fatpoints ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldDescriptor {
    PrimeField { prime: u64 },
    ExactRational,
}

impl FieldDescriptor {
    pub fn to_spec(self) -> Result<FieldSpec> {
        match self {
            FieldDescriptor::PrimeField { prime } => Ok(FieldSpec::Prime(PrimeField::new(prime)?)),
            FieldDescriptor::ExactRational => Ok(FieldSpec::Rational),
        }
    }
}

impl From<FieldSpec> for FieldDescriptor {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Prime(p) => FieldDescriptor::PrimeField { prime: p.modulus() },
            FieldSpec::Rational => FieldDescriptor::ExactRational,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ProvenanceRecord {
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "c_d")]
    CD { d: usize },
    #[serde(rename = "c_dr")]
    CDR { d: usize, r: usize },
    #[serde(rename = "family")]
    Family { name: String },
    #[serde(rename = "file")]
    File,
}

impl From<&Provenance> for ProvenanceRecord {
    fn from(p: &Provenance) -> Self {
        match p {
            Provenance::Random => ProvenanceRecord::Random,
            Provenance::CD { d } => ProvenanceRecord::CD { d: *d },
            Provenance::CDR { d, r } => ProvenanceRecord::CDR { d: *d, r: *r },
            Provenance::Family(name) => ProvenanceRecord::Family { name: name.clone() },
            Provenance::File => ProvenanceRecord::File,
        }
    }
}

impl From<&ProvenanceRecord> for Provenance {
    fn from(p: &ProvenanceRecord) -> Self {
        match p {
            ProvenanceRecord::Random => Provenance::Random,
            ProvenanceRecord::CD { d } => Provenance::CD { d: *d },
            ProvenanceRecord::CDR { d, r } => Provenance::CDR { d: *d, r: *r },
            ProvenanceRecord::Family { name } => Provenance::Family(name.clone()),
            ProvenanceRecord::File => Provenance::File,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default)]
    pub generator: String,
    pub field: FieldDescriptor,
    pub ambient_dim: usize,
    pub points: Vec<Vec<i128>>,
    pub multiplicities: Vec<u32>,
    pub provenance: ProvenanceRecord,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn coords_to_i128(p: &ProjectivePoint) -> Result<Vec<i128>> {
    p.integer_coords()
        .iter()
        .map(|v| {
            v.to_i128()
                .ok_or_else(|| Error::Format(format!("coordinate {v} does not fit in 128 bits")))
        })
        .collect()
}

impl ConfigFile {
    pub fn from_configuration(x: &Configuration, multiplicities: Vec<u32>) -> Result<Self> {
        if multiplicities.len() != x.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} multiplicities",
                x.len(),
                multiplicities.len()
            )));
        }
        Ok(Self {
            generator: TOOL_VERSION.to_string(),
            field: x.field().into(),
            ambient_dim: 2,
            points: x
                .points()
                .iter()
                .map(coords_to_i128)
                .collect::<Result<_>>()?,
            multiplicities,
            provenance: x.provenance().into(),
            seed: x.seed(),
        })
    }

    /// Every point with multiplicity 1.
    pub fn simple(x: &Configuration) -> Result<Self> {
        Self::from_configuration(x, vec![1; x.len()])
    }

    pub fn from_scheme(
        z: &FatPointScheme,
        provenance: ProvenanceRecord,
        seed: Option<u64>,
    ) -> Result<Self> {
        Ok(Self {
            generator: TOOL_VERSION.to_string(),
            field: z.field().into(),
            ambient_dim: z.ambient_dim(),
            points: z
                .points()
                .iter()
                .map(coords_to_i128)
                .collect::<Result<_>>()?,
            multiplicities: z.multiplicities().to_vec(),
            provenance,
            seed,
        })
    }

    fn parsed_points(&self) -> Result<(FieldSpec, Vec<ProjectivePoint>)> {
        let field = self.field.to_spec()?;
        if self.points.len() != self.multiplicities.len() {
            return Err(Error::Format(format!(
                "{} points but {} multiplicities",
                self.points.len(),
                self.multiplicities.len()
            )));
        }
        let points = self
            .points
            .iter()
            .map(|coords| {
                if coords.len() != self.ambient_dim + 1 {
                    return Err(Error::Format(format!(
                        "point {coords:?} should have {} coordinates",
                        self.ambient_dim + 1
                    )));
                }
                if let FieldSpec::Prime(p) = field {
                    if let Some(c) = coords.iter().find(|&&c| c < 0 || c >= p.modulus() as i128) {
                        return Err(Error::Format(format!(
                            "coordinate {c} is not a canonical residue mod {}",
                            p.modulus()
                        )));
                    }
                }
                let ints: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
                ProjectivePoint::from_bigints(field, &ints)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((field, points))
    }

    /// The plane configuration, ignoring multiplicities.
    pub fn to_configuration(&self) -> Result<Configuration> {
        if self.ambient_dim != 2 {
            return Err(Error::Format(format!(
                "configurations live in the plane, file has ambient_dim {}",
                self.ambient_dim
            )));
        }
        let (field, points) = self.parsed_points()?;
        Configuration::new(points, field, (&self.provenance).into(), self.seed)
    }

    pub fn to_scheme(&self) -> Result<FatPointScheme> {
        let (_, points) = self.parsed_points()?;
        FatPointScheme::new(points, self.multiplicities.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
