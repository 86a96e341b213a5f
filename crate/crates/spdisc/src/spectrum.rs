//! Product expansions `f(xi, eta) = sum a_{m,n,k,l} R_{m,n}(xi) R_{k,l}(eta)`
//! with positive summable coefficients, and the kernels they induce on
//! products of complex spheres.
//!
//! Coefficient families are finite maps. Infinite index families relevant to
//! the strict-positive-definiteness criterion are represented symbolically in
//! the `lattice` module; evaluation only ever needs finitely many terms.

use crate::geometry::{inner, GeometryError, ProductPoint};
use crate::polynomials::{disc_poly, DiscPoint, DomainError, SphereParam};
use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Index of one expansion coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffKey {
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub l: u32,
}

impl CoeffKey {
    pub fn new(m: u32, n: u32, k: u32, l: u32) -> Self {
        CoeffKey { m, n, k, l }
    }

    /// Projection (m, n, k, l) -> (m - n, k - l).
    pub fn shadow(&self) -> (i64, i64) {
        (
            self.m as i64 - self.n as i64,
            self.k as i64 - self.l as i64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationRule {
    /// Stored coefficients must be strictly positive.
    NonpositiveCoefficient(f64),
    /// Coefficients must be finite numbers.
    NonFiniteCoefficient(f64),
    /// With q = 1 every key must satisfy m * n = 0.
    CircleSupportFirst,
    /// With p = 1 every key must satisfy k * l = 0.
    CircleSupportSecond,
}

impl fmt::Display for ViolationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationRule::NonpositiveCoefficient(a) => {
                write!(f, "nonpositive coefficient {a}")
            }
            ViolationRule::NonFiniteCoefficient(a) => write!(f, "non-finite coefficient {a}"),
            ViolationRule::CircleSupportFirst => write!(f, "m*n > 0 while q = 1"),
            ViolationRule::CircleSupportSecond => write!(f, "k*l > 0 while p = 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub key: CoeffKey,
    pub rule: ViolationRule,
}

/// All invariant violations found in a coefficient family.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} invalid coefficient(s):", self.violations.len())?;
        for v in &self.violations {
            write!(
                f,
                " (m={},n={},k={},l={}): {};",
                v.key.m, v.key.n, v.key.k, v.key.l, v.rule
            )?;
        }
        Ok(())
    }
}

/// Checks the expansion invariants: positivity, finiteness, and the one-sided
/// support rules for circle parameters.
pub fn validate(
    q: SphereParam,
    p: SphereParam,
    coeffs: &BTreeMap<CoeffKey, f64>,
) -> Result<(), ValidationReport> {
    let mut violations = Vec::new();
    for (&key, &a) in coeffs {
        if !a.is_finite() {
            violations.push(Violation {
                key,
                rule: ViolationRule::NonFiniteCoefficient(a),
            });
        } else if a <= 0.0 {
            violations.push(Violation {
                key,
                rule: ViolationRule::NonpositiveCoefficient(a),
            });
        }
        if q.is_circle() && key.m > 0 && key.n > 0 {
            violations.push(Violation {
                key,
                rule: ViolationRule::CircleSupportFirst,
            });
        }
        if p.is_circle() && key.k > 0 && key.l > 0 {
            violations.push(Violation {
                key,
                rule: ViolationRule::CircleSupportSecond,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ValidationReport { violations })
    }
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A validated expansion with positive coefficients, immutable after
/// construction. The coefficient sum is cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExpansion {
    q: SphereParam,
    p: SphereParam,
    coeffs: BTreeMap<CoeffKey, f64>,
    total_mass: f64,
}

impl ProductExpansion {
    pub fn new(
        q: SphereParam,
        p: SphereParam,
        coeffs: BTreeMap<CoeffKey, f64>,
    ) -> Result<Self, ValidationReport> {
        validate(q, p, &coeffs)?;
        // BTreeMap iteration is already in sorted key order, which makes the
        // accumulated mass reproducible across platforms.
        let total_mass = coeffs.values().sum();
        Ok(ProductExpansion {
            q,
            p,
            coeffs,
            total_mass,
        })
    }

    pub fn q(&self) -> SphereParam {
        self.q
    }

    pub fn p(&self) -> SphereParam {
        self.p
    }

    pub fn coeffs(&self) -> &BTreeMap<CoeffKey, f64> {
        &self.coeffs
    }

    /// Cached coefficient sum; equals the kernel value at coinciding points.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Evaluates the finite expansion. Terms are accumulated in sorted key
    /// order for reproducibility.
    pub fn eval(&self, xi: DiscPoint, eta: DiscPoint) -> Result<Complex64, DomainError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, &a) in &self.coeffs {
            let first = disc_poly(self.q, key.m, key.n, xi)?;
            let second = disc_poly(self.p, key.k, key.l, eta)?;
            acc += a * first * second;
        }
        Ok(acc)
    }

    /// Kernel value `f(z . z', w . w')` at two product points.
    pub fn kernel_value(
        &self,
        u: &ProductPoint,
        v: &ProductPoint,
    ) -> Result<Complex64, KernelError> {
        self.check_dims(u)?;
        self.check_dims(v)?;
        let xi = DiscPoint::new(inner(&u.z, &v.z)?)?;
        let eta = DiscPoint::new(inner(&u.w, &v.w)?)?;
        Ok(self.eval(xi, eta)?)
    }

    /// Verifies a product point against the sphere parameters: finite
    /// parameters fix the ambient dimension, the infinite one admits any.
    pub fn check_dims(&self, point: &ProductPoint) -> Result<(), GeometryError> {
        if let Some(dim) = self.q.dimension() {
            if point.z.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    left: point.z.dim(),
                    right: dim,
                });
            }
        }
        if let Some(dim) = self.p.dimension() {
            if point.w.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    left: point.w.dim(),
                    right: dim,
                });
            }
        }
        Ok(())
    }

    /// Image of the support under (m, n, k, l) -> (m - n, k - l).
    pub fn index_shadow(&self) -> BTreeSet<(i64, i64)> {
        self.coeffs.keys().map(CoeffKey::shadow).collect()
    }
}

/// A finite expansion over the bilateral integer index, as used on the unit
/// circle: `f(xi) = sum_m a_m xi^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleExpansion {
    coeffs: BTreeMap<i64, f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleExpansionError {
    #[error("coefficient a_{index} = {value} must be positive and finite")]
    InvalidCoefficient { index: i64, value: f64 },
}

impl CircleExpansion {
    pub fn new(coeffs: BTreeMap<i64, f64>) -> Result<Self, CircleExpansionError> {
        for (&index, &value) in &coeffs {
            if !value.is_finite() || value <= 0.0 {
                return Err(CircleExpansionError::InvalidCoefficient { index, value });
            }
        }
        Ok(CircleExpansion { coeffs })
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, f64> {
        &self.coeffs
    }
}

/// Rearranges bilateral circle coefficients onto one-sided keys with
/// m * n = 0: `a_m` maps to `(m, 0)` for m >= 0 and to `(0, -m)` for m < 0.
pub fn circle_rearrange(c: &CircleExpansion) -> BTreeMap<(u32, u32), f64> {
    c.coeffs
        .iter()
        .map(|(&m, &a)| {
            if m >= 0 {
                ((m as u32, 0), a)
            } else {
                ((0, (-m) as u32), a)
            }
        })
        .collect()
}
