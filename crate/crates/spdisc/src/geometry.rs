//! Points on complex unit spheres and their products: inner products,
//! uniform sampling, antipodal detection, and enhanced-set machinery.
//!
//! The inner product is conjugate-linear in the SECOND argument, so
//! `inner(z, e^{i theta} z) = e^{-i theta}`. Expansions with nonnegative
//! coefficients are conjugation-symmetric, so either convention yields
//! Hermitian Gram matrices; this one is fixed here once and used everywhere.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Unit-norm tolerance for sphere membership.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Default tolerance for treating two points as equal up to phase. Two
/// points whose inner product modulus lies in (1 - tol, 1) are treated as
/// antipodal; genuinely near-antipodal inputs are the caller's risk.
pub const ANTIPODAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("sphere point must have at least one coordinate")]
    EmptyPoint,
    #[error("sphere point norm {norm} is not 1 within {tol}")]
    NotUnitNorm { norm: f64, tol: f64 },
    #[error("cannot normalize a (near-)zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("antipodal-free property violated by points {i} and {j} (inner modulus {modulus})")]
    NotAntipodalFree { i: usize, j: usize, modulus: f64 },
    #[error("angles {i} and {j} coincide within 1e-12")]
    DuplicateAngles { i: usize, j: usize },
}

/// A unit vector in some finite complex dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<Complex64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(GeometryError::NotUnitNorm {
                norm,
                tol: UNIT_NORM_TOL,
            });
        }
        Ok(SpherePoint { coords })
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn normalized(coords: Vec<Complex64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(GeometryError::ZeroVector);
        }
        Ok(SpherePoint {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// First standard basis vector of the given dimension.
    pub fn standard_basis(dim: usize) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::EmptyPoint);
        }
        let mut coords = vec![Complex64::new(0.0, 0.0); dim];
        coords[0] = Complex64::new(1.0, 0.0);
        Ok(SpherePoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Phase rotation e^{i theta} z.
    pub fn rotated(&self, theta: f64) -> SpherePoint {
        let phase = Complex64::from_polar(1.0, theta);
        SpherePoint {
            coords: self.coords.iter().map(|c| phase * c).collect(),
        }
    }

    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(other.coords.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Inner product, conjugate-linear in the second argument.
pub fn inner(a: &SpherePoint, b: &SpherePoint) -> Result<Complex64, GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.coords
        .iter()
        .zip(b.coords.iter())
        .map(|(x, y)| x * y.conj())
        .sum())
}

/// Draws a uniformly distributed point: 2 dim independent standard normals
/// form the complex coordinates, then the vector is normalized. The result
/// is invariant in distribution under every unitary map.
pub fn sample_uniform<R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<SpherePoint, GeometryError> {
    if dim == 0 {
        return Err(GeometryError::EmptyPoint);
    }
    loop {
        let coords: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        match SpherePoint::normalized(coords) {
            Ok(p) => return Ok(p),
            Err(GeometryError::ZeroVector) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// True when the points coincide up to a nontrivial phase: the inner product
/// modulus reaches 1 within `tol` while the points themselves differ.
pub fn is_antipodal(
    a: &SpherePoint,
    b: &SpherePoint,
    tol: f64,
) -> Result<bool, GeometryError> {
    let ip = inner(a, b)?;
    Ok(ip.norm() >= 1.0 - tol && !a.approx_eq(b, tol))
}

/// A point of a product of two spheres.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub z: SpherePoint,
    pub w: SpherePoint,
}

impl ProductPoint {
    pub fn new(z: SpherePoint, w: SpherePoint) -> Self {
        ProductPoint { z, w }
    }

    pub fn approx_eq(&self, other: &ProductPoint, tol: f64) -> bool {
        self.z.approx_eq(&other.z, tol) && self.w.approx_eq(&other.w, tol)
    }
}

/// Checks the antipodal-free property (AF) of a base set: distinct points
/// must not have phase-equal first coordinates unless those coordinates are
/// equal, and likewise for second coordinates. Returns the first violating
/// pair, separately for each coordinate slot.
fn af_violation(base: &[ProductPoint], tol: f64) -> Result<Option<(usize, usize, f64)>, GeometryError> {
    for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            if base[i].approx_eq(&base[j], tol) {
                return Err(GeometryError::DuplicatePoints { i, j });
            }
            if is_antipodal(&base[i].z, &base[j].z, tol)? {
                return Ok(Some((i, j, inner(&base[i].z, &base[j].z)?.norm())));
            }
            if is_antipodal(&base[i].w, &base[j].w, tol)? {
                return Ok(Some((i, j, inner(&base[i].w, &base[j].w)?.norm())));
            }
        }
    }
    Ok(None)
}

/// An antipodal-free base set together with two lists of rotation angles.
#[derive(Debug, Clone)]
pub struct EnhancedSpec {
    base: Vec<ProductPoint>,
    thetas: Vec<f64>,
    deltas: Vec<f64>,
}

fn check_angles(angles: &[f64]) -> Result<(), GeometryError> {
    use std::f64::consts::TAU;
    for (i, a) in angles.iter().enumerate() {
        for (j, b) in angles.iter().enumerate().skip(i + 1) {
            let d = (a - b).abs();
            if d.min(TAU - d) <= 1e-12 {
                return Err(GeometryError::DuplicateAngles { i, j });
            }
        }
    }
    Ok(())
}

impl EnhancedSpec {
    pub fn new(
        base: Vec<ProductPoint>,
        thetas: Vec<f64>,
        deltas: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        if let Some((i, j, modulus)) = af_violation(&base, ANTIPODAL_TOL)? {
            return Err(GeometryError::NotAntipodalFree { i, j, modulus });
        }
        check_angles(&thetas)?;
        check_angles(&deltas)?;
        Ok(EnhancedSpec {
            base,
            thetas,
            deltas,
        })
    }

    pub fn base(&self) -> &[ProductPoint] {
        &self.base
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// The full rotation grid `(e^{i theta} z_mu, e^{i delta} w_mu)`, in the
    /// fixed order: base point outer, theta middle, delta inner. Points in
    /// the output are pairwise distinct because the base is antipodal-free.
    pub fn enhance(&self) -> Vec<ProductPoint> {
        let mut out = Vec::with_capacity(self.base.len() * self.thetas.len() * self.deltas.len());
        for p in &self.base {
            for &theta in &self.thetas {
                for &delta in &self.deltas {
                    out.push(ProductPoint::new(p.z.rotated(theta), p.w.rotated(delta)));
                }
            }
        }
        out
    }
}

/// Greedy inverse of `enhance`: selects maximal antipodal-free representative
/// lists for each coordinate slot (in input order) and the angle lists that
/// reproduce every input coordinate as a phase rotation of a representative.
/// The returned base is the full product of the two representative lists, so
/// the input set is contained in the enhanced set of the result.
pub fn antipodal_free_decompose(points: &[ProductPoint]) -> Result<EnhancedSpec, GeometryError> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].approx_eq(&points[j], ANTIPODAL_TOL) {
                return Err(GeometryError::DuplicatePoints { i, j });
            }
        }
    }

    let greedy = |coords: Vec<&SpherePoint>| -> Result<(Vec<SpherePoint>, Vec<f64>), GeometryError> {
        use std::f64::consts::TAU;
        let mut reps: Vec<SpherePoint> = Vec::new();
        let mut angles: Vec<f64> = vec![0.0];
        for c in coords {
            let mut matched = false;
            for rep in &reps {
                let ip = inner(c, rep)?;
                if ip.norm() >= 1.0 - ANTIPODAL_TOL {
                    let mut theta = ip.arg();
                    if theta < 0.0 {
                        theta += TAU;
                    }
                    let dup = angles.iter().any(|&a| {
                        let d = (a - theta).abs();
                        d.min(TAU - d) <= 1e-12
                    });
                    if !dup {
                        angles.push(theta);
                    }
                    matched = true;
                    break;
                }
            }
            if !matched {
                reps.push(c.clone());
            }
        }
        Ok((reps, angles))
    };

    let (reps_z, thetas) = greedy(points.iter().map(|p| &p.z).collect())?;
    let (reps_w, deltas) = greedy(points.iter().map(|p| &p.w).collect())?;

    let mut base = Vec::with_capacity(reps_z.len() * reps_w.len());
    for z in &reps_z {
        for w in &reps_w {
            base.push(ProductPoint::new(z.clone(), w.clone()));
        }
    }
    // The reps are pairwise non-antipodal by construction and the angles are
    // deduplicated, so the constructor's invariants hold.
    EnhancedSpec::new(base, thetas, deltas)
}
