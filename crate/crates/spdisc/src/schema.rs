//! JSON document types for expansions, index sets, point sets, witnesses and
//! bridge coefficient families, with conversions to and from domain values.
//!
//! Formats are human-writable and diff-friendly: sphere parameters are
//! numbers or the string `"inf"`, complex numbers are `[re, im]` pairs, and
//! collections serialize in sorted key order.

use crate::bridge::{BridgeError, CosExpansion1D, CosExpansion2D, TorusExpansion};
use crate::geometry::{GeometryError, ProductPoint, SpherePoint};
use crate::gram::Witness;
use crate::lattice::{Coset1D, CosetProduct, IndexSet2D, LatticeError};
use crate::polynomials::SphereParam;
use crate::spectrum::{CircleExpansion, CoeffKey, ProductExpansion, ValidationReport};
use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest admissible absolute value for index-set point coordinates; keeps
/// downstream progression arithmetic far from integer overflow.
pub const MAX_POINT_COORD: i64 = 1_000_000_000_000;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error(transparent)]
    Expansion(#[from] ValidationReport),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
    #[error(transparent)]
    Circle(#[from] crate::spectrum::CircleExpansionError),
    #[error("point coordinate {value} exceeds the supported range +-{max}", max = MAX_POINT_COORD)]
    PointOutOfRange { value: i64 },
    #[error("point {index} has a {slot} component of length {got}, expected {want}")]
    WrongPointDimension {
        index: usize,
        slot: &'static str,
        got: usize,
        want: usize,
    },
    #[error("duplicate coefficient entry for index {index:?}")]
    DuplicateCoefficient { index: (i64, i64, i64, i64) },
}

impl Serialize for SphereParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SphereParam::Finite(q) => serializer.serialize_u32(*q),
            SphereParam::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SphereParam {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(q) if q >= 1 => Ok(SphereParam::Finite(q)),
            Raw::Number(q) => Err(D::Error::custom(format!(
                "sphere parameter must be >= 1, got {q}"
            ))),
            Raw::Text(s) if s == "inf" => Ok(SphereParam::Infinite),
            Raw::Text(s) => Err(D::Error::custom(format!(
                "sphere parameter must be a positive integer or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffEntryDoc {
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub a: f64,
}

/// Expansion document: `{"q": 3, "p": "inf", "coefficients": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpansionDoc {
    pub q: SphereParam,
    pub p: SphereParam,
    pub coefficients: Vec<CoeffEntryDoc>,
}

impl ExpansionDoc {
    pub fn to_domain(&self) -> Result<ProductExpansion, SchemaError> {
        let mut coeffs: BTreeMap<CoeffKey, f64> = BTreeMap::new();
        for e in &self.coefficients {
            let key = CoeffKey::new(e.m, e.n, e.k, e.l);
            if coeffs.insert(key, e.a).is_some() {
                return Err(SchemaError::DuplicateCoefficient {
                    index: (e.m as i64, e.n as i64, e.k as i64, e.l as i64),
                });
            }
        }
        Ok(ProductExpansion::new(self.q, self.p, coeffs)?)
    }

    pub fn from_domain(e: &ProductExpansion) -> Self {
        ExpansionDoc {
            q: e.q(),
            p: e.p(),
            coefficients: e
                .coeffs()
                .iter()
                .map(|(key, &a)| CoeffEntryDoc {
                    m: key.m,
                    n: key.n,
                    k: key.k,
                    l: key.l,
                    a,
                })
                .collect(),
        }
    }
}

/// One coset product `(N Z + x) x (M Z + y)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CosetDoc {
    pub N: i64,
    pub x: i64,
    pub M: i64,
    pub y: i64,
}

impl CosetDoc {
    pub fn to_domain(&self) -> Result<CosetProduct, SchemaError> {
        Ok(CosetProduct::new(
            Coset1D::new(self.N, self.x)?,
            Coset1D::new(self.M, self.y)?,
        ))
    }

    pub fn from_domain(cp: &CosetProduct) -> Self {
        CosetDoc {
            N: cp.first.modulus(),
            x: cp.first.offset(),
            M: cp.second.modulus(),
            y: cp.second.offset(),
        }
    }
}

/// Index-set document: `{"cosets": [...], "points": [[a, b], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexSetDoc {
    #[serde(default)]
    pub cosets: Vec<CosetDoc>,
    #[serde(default)]
    pub points: Vec<[i64; 2]>,
}

impl IndexSetDoc {
    pub fn to_domain(&self) -> Result<IndexSet2D, SchemaError> {
        let cosets = self
            .cosets
            .iter()
            .map(|c| c.to_domain())
            .collect::<Result<Vec<_>, _>>()?;
        for &[a, b] in &self.points {
            for value in [a, b] {
                if value.abs() > MAX_POINT_COORD {
                    return Err(SchemaError::PointOutOfRange { value });
                }
            }
        }
        Ok(IndexSet2D::new(
            cosets,
            self.points.iter().map(|&[a, b]| (a, b)).collect(),
        ))
    }
}

fn complex_pairs(coords: &[Complex64]) -> Vec<[f64; 2]> {
    coords.iter().map(|c| [c.re, c.im]).collect()
}

fn pairs_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointDoc {
    pub z: Vec<[f64; 2]>,
    pub w: Vec<[f64; 2]>,
}

/// Point-set document: `{"q": 2, "p": 2, "points": [{"z": ..., "w": ...}]}`
/// where `q` and `p` are the ambient complex dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointsDoc {
    pub q: usize,
    pub p: usize,
    pub points: Vec<PointDoc>,
}

impl PointsDoc {
    pub fn to_domain(&self) -> Result<Vec<ProductPoint>, SchemaError> {
        self.points
            .iter()
            .enumerate()
            .map(|(index, doc)| {
                if doc.z.len() != self.q {
                    return Err(SchemaError::WrongPointDimension {
                        index,
                        slot: "z",
                        got: doc.z.len(),
                        want: self.q,
                    });
                }
                if doc.w.len() != self.p {
                    return Err(SchemaError::WrongPointDimension {
                        index,
                        slot: "w",
                        got: doc.w.len(),
                        want: self.p,
                    });
                }
                Ok(ProductPoint::new(
                    SpherePoint::new(pairs_complex(&doc.z))?,
                    SpherePoint::new(pairs_complex(&doc.w))?,
                ))
            })
            .collect()
    }

    pub fn from_domain(points: &[ProductPoint]) -> Self {
        let q = points.first().map_or(0, |p| p.z.dim());
        let p = points.first().map_or(0, |p| p.w.dim());
        PointsDoc {
            q,
            p,
            points: points
                .iter()
                .map(|pt| PointDoc {
                    z: complex_pairs(pt.z.coords()),
                    w: complex_pairs(pt.w.coords()),
                })
                .collect(),
        }
    }
}

/// Witness document: the progression, the point configuration, the
/// coefficient vector and the achieved quadratic-form value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub progression: CosetDoc,
    pub points: PointsDoc,
    pub c: Vec<[f64; 2]>,
    pub value: f64,
}

impl WitnessDoc {
    pub fn from_domain(w: &Witness) -> Self {
        WitnessDoc {
            progression: CosetDoc::from_domain(&w.progression),
            points: PointsDoc::from_domain(&w.points),
            c: w.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            value: w.value,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cos2DEntryDoc {
    pub m: u32,
    pub k: u32,
    pub a: f64,
}

/// Cosine-product coefficients: `{"coefficients": [{"m","k","a"}...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cos2DDoc {
    pub coefficients: Vec<Cos2DEntryDoc>,
}

impl Cos2DDoc {
    pub fn to_domain(&self) -> Result<CosExpansion2D, SchemaError> {
        let mut map = BTreeMap::new();
        for e in &self.coefficients {
            if map.insert((e.m, e.k), e.a).is_some() {
                return Err(SchemaError::DuplicateCoefficient {
                    index: (e.m as i64, e.k as i64, 0, 0),
                });
            }
        }
        Ok(CosExpansion2D::new(map)?)
    }

    pub fn from_domain(c: &CosExpansion2D) -> Self {
        Cos2DDoc {
            coefficients: c
                .coeffs()
                .iter()
                .map(|(&(m, k), &a)| Cos2DEntryDoc { m, k, a })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusEntryDoc {
    pub m: i64,
    pub k: i64,
    pub a: f64,
}

/// Bilateral torus coefficients: indices range over all integers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusDoc {
    pub coefficients: Vec<TorusEntryDoc>,
}

impl TorusDoc {
    pub fn to_domain(&self) -> Result<TorusExpansion, SchemaError> {
        let mut map = BTreeMap::new();
        for e in &self.coefficients {
            if map.insert((e.m, e.k), e.a).is_some() {
                return Err(SchemaError::DuplicateCoefficient {
                    index: (e.m, e.k, 0, 0),
                });
            }
        }
        Ok(TorusExpansion::new(map)?)
    }

    pub fn from_domain(t: &TorusExpansion) -> Self {
        TorusDoc {
            coefficients: t
                .coeffs()
                .iter()
                .map(|(&(m, k), &a)| TorusEntryDoc { m, k, a })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scalar1DEntryDoc {
    pub m: i64,
    pub a: f64,
}

/// One-variable coefficient list, used for both bilateral circle families
/// and one-sided cosine families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coeffs1DDoc {
    pub coefficients: Vec<Scalar1DEntryDoc>,
}

impl Coeffs1DDoc {
    pub fn to_circle(&self) -> Result<CircleExpansion, SchemaError> {
        let mut map = BTreeMap::new();
        for e in &self.coefficients {
            if map.insert(e.m, e.a).is_some() {
                return Err(SchemaError::DuplicateCoefficient {
                    index: (e.m, 0, 0, 0),
                });
            }
        }
        Ok(CircleExpansion::new(map)?)
    }

    pub fn to_cos1d(&self) -> Result<CosExpansion1D, SchemaError> {
        let mut map = BTreeMap::new();
        for e in &self.coefficients {
            if e.m < 0 {
                return Err(SchemaError::Bridge(BridgeError::NegativeCosineIndex {
                    index: e.m,
                }));
            }
            if map.insert(e.m as u32, e.a).is_some() {
                return Err(SchemaError::DuplicateCoefficient {
                    index: (e.m, 0, 0, 0),
                });
            }
        }
        Ok(CosExpansion1D::new(map)?)
    }

    pub fn from_circle(c: &CircleExpansion) -> Self {
        Coeffs1DDoc {
            coefficients: c
                .coeffs()
                .iter()
                .map(|(&m, &a)| Scalar1DEntryDoc { m, a })
                .collect(),
        }
    }

    pub fn from_cos1d(c: &CosExpansion1D) -> Self {
        Coeffs1DDoc {
            coefficients: c
                .coeffs()
                .iter()
                .map(|(&m, &a)| Scalar1DEntryDoc { m: m as i64, a })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_param_round_trips() {
        let q: SphereParam = serde_json::from_str("3").unwrap();
        assert_eq!(q, SphereParam::Finite(3));
        let q: SphereParam = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(q, SphereParam::Infinite);
        assert!(serde_json::from_str::<SphereParam>("0").is_err());
        assert!(serde_json::from_str::<SphereParam>("\"infinity\"").is_err());
        assert_eq!(serde_json::to_string(&SphereParam::Finite(2)).unwrap(), "2");
        assert_eq!(
            serde_json::to_string(&SphereParam::Infinite).unwrap(),
            "\"inf\""
        );
    }

    #[test]
    fn expansion_doc_round_trip() {
        let raw = r#"{"q": 3, "p": "inf", "coefficients": [
            {"m": 1, "n": 0, "k": 2, "l": 2, "a": 0.5},
            {"m": 0, "n": 0, "k": 0, "l": 0, "a": 1.0}
        ]}"#;
        let doc: ExpansionDoc = serde_json::from_str(raw).unwrap();
        let e = doc.to_domain().unwrap();
        assert_eq!(e.coeffs().len(), 2);
        assert!((e.total_mass() - 1.5).abs() < 1e-15);
        let back = ExpansionDoc::from_domain(&e);
        let again = back.to_domain().unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn expansion_doc_validation_failure() {
        let raw = r#"{"q": 1, "p": 2, "coefficients": [
            {"m": 1, "n": 1, "k": 0, "l": 0, "a": 1.0}
        ]}"#;
        let doc: ExpansionDoc = serde_json::from_str(raw).unwrap();
        assert!(matches!(
            doc.to_domain(),
            Err(SchemaError::Expansion(_))
        ));
    }

    #[test]
    fn expansion_doc_rejects_duplicate_keys() {
        let raw = r#"{"q": 2, "p": 2, "coefficients": [
            {"m": 1, "n": 0, "k": 0, "l": 0, "a": 1.0},
            {"m": 1, "n": 0, "k": 0, "l": 0, "a": 2.0}
        ]}"#;
        let doc: ExpansionDoc = serde_json::from_str(raw).unwrap();
        assert!(matches!(
            doc.to_domain(),
            Err(SchemaError::DuplicateCoefficient { .. })
        ));
    }

    #[test]
    fn index_set_doc_defaults_and_validation() {
        let doc: IndexSetDoc = serde_json::from_str(r#"{"cosets": [{"N":2,"x":5,"M":3,"y":-1}]}"#).unwrap();
        let s = doc.to_domain().unwrap();
        assert_eq!(s.cosets[0].first.offset(), 1);
        assert_eq!(s.cosets[0].second.offset(), 2);
        assert!(s.points.is_empty());

        let doc: IndexSetDoc =
            serde_json::from_str(r#"{"points": [[2000000000000, 0]]}"#).unwrap();
        assert!(matches!(
            doc.to_domain(),
            Err(SchemaError::PointOutOfRange { .. })
        ));

        let doc: IndexSetDoc = serde_json::from_str(r#"{"cosets": [{"N":0,"x":0,"M":1,"y":0}]}"#).unwrap();
        assert!(matches!(doc.to_domain(), Err(SchemaError::Lattice(_))));
    }

    #[test]
    fn points_doc_checks_dims_and_norms() {
        let raw = r#"{"q": 2, "p": 1, "points": [
            {"z": [[1.0, 0.0], [0.0, 0.0]], "w": [[0.0, 1.0]]}
        ]}"#;
        let doc: PointsDoc = serde_json::from_str(raw).unwrap();
        let pts = doc.to_domain().unwrap();
        assert_eq!(pts.len(), 1);

        let raw = r#"{"q": 2, "p": 1, "points": [
            {"z": [[1.0, 0.0]], "w": [[0.0, 1.0]]}
        ]}"#;
        let doc: PointsDoc = serde_json::from_str(raw).unwrap();
        assert!(matches!(
            doc.to_domain(),
            Err(SchemaError::WrongPointDimension { .. })
        ));

        let raw = r#"{"q": 1, "p": 1, "points": [
            {"z": [[0.5, 0.0]], "w": [[1.0, 0.0]]}
        ]}"#;
        let doc: PointsDoc = serde_json::from_str(raw).unwrap();
        assert!(matches!(doc.to_domain(), Err(SchemaError::Geometry(_))));
    }
}
