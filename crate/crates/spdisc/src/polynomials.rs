//! Normalized Jacobi polynomials and disc (generalized Zernike) polynomials.
//!
//! The disc polynomial of bidegree `(m, n)` attached to a sphere parameter `q`
//! is evaluated on the closed unit disc as
//! `r^|m-n| e^{i(m-n)phi} R_min(m,n)^{(q-2, |m-n|)}(2r^2 - 1)` for finite
//! `q >= 2`, and degenerates to the monomial `xi^m conj(xi)^n` for `q = 1`
//! (restricted to the unit circle) and for infinite `q`.

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Membership tolerance for the closed disc and the unit circle.
pub const TOL_UNIT: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("sphere parameter must be a positive integer or \"inf\"")]
    InvalidSphereParam,
    #[error("jacobi argument {t} lies outside [-1, 1]")]
    JacobiArgument { t: f64 },
    #[error("point with modulus {modulus} lies outside the closed unit disc")]
    OutsideDisc { modulus: f64 },
    #[error("sphere parameter 1 requires a point on the unit circle, got modulus {modulus}")]
    CircleRequired { modulus: f64 },
}

/// A sphere parameter: a positive integer or the distinguished infinite value.
///
/// `Finite(q)` labels the unit sphere of the q-dimensional complex space;
/// `Infinite` labels the unit sphere of square-summable complex sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SphereParam {
    Finite(u32),
    Infinite,
}

impl SphereParam {
    pub fn finite(q: u32) -> Result<Self, DomainError> {
        if q >= 1 {
            Ok(SphereParam::Finite(q))
        } else {
            Err(DomainError::InvalidSphereParam)
        }
    }

    /// True for the circle case `q = 1`, where kernels live on the boundary
    /// of the disc and expansion supports are one-sided.
    pub fn is_circle(&self) -> bool {
        matches!(self, SphereParam::Finite(1))
    }

    /// Jacobi parameter `q - 2` for finite `q >= 2`; `None` for the monomial
    /// cases `q = 1` and infinite `q`.
    pub fn jacobi_alpha(&self) -> Option<u32> {
        match self {
            SphereParam::Finite(q) if *q >= 2 => Some(q - 2),
            _ => None,
        }
    }

    /// Ambient complex dimension for finite parameters; `None` when infinite
    /// (any finite embedding dimension is admissible there).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SphereParam::Finite(q) => Some(*q as usize),
            SphereParam::Infinite => None,
        }
    }
}

impl fmt::Display for SphereParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereParam::Finite(q) => write!(f, "{q}"),
            SphereParam::Infinite => write!(f, "inf"),
        }
    }
}

/// A point of the closed unit disc, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(value: Complex64) -> Result<Self, DomainError> {
        Self::with_tolerance(value, TOL_UNIT)
    }

    /// Same as [`DiscPoint::new`] with a caller-chosen membership tolerance.
    pub fn with_tolerance(value: Complex64, tol: f64) -> Result<Self, DomainError> {
        let modulus = value.norm();
        if !modulus.is_finite() || modulus > 1.0 + tol {
            return Err(DomainError::OutsideDisc { modulus });
        }
        Ok(DiscPoint(value))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }
}

/// Binomial coefficient C(n, k) as a float. Exact integer arithmetic up to
/// n = 60, log-gamma beyond that to avoid overflow.
fn binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    if n <= 60 {
        let mut acc: u128 = 1;
        let k = k.min(n - k);
        for j in 1..=k as u128 {
            acc = acc * (n as u128 - k as u128 + j) / j;
        }
        acc as f64
    } else {
        let (n, k) = (n as f64, k as f64);
        (libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)).exp()
    }
}

/// Unnormalized Jacobi value P_k^{(alpha,beta)}(t) by the three-term
/// recurrence; valid for alpha, beta >= 0 and k >= 0.
fn jacobi_unnormalized(k: u32, alpha: u32, beta: u32, t: f64) -> f64 {
    let (a, b) = (alpha as f64, beta as f64);
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = ((a + b + 2.0) * t + (a - b)) / 2.0;
    for j in 2..=k {
        let n = j as f64;
        // Coefficients are nonzero for n >= 2 once alpha, beta >= 0.
        let c0 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0);
        let c1 = (2.0 * n + a + b - 1.0)
            * ((2.0 * n + a + b) * (2.0 * n + a + b - 2.0) * t + a * a - b * b);
        let c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b);
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial of degree `k` with integer parameters `(alpha, beta)`,
/// normalized to take the value 1 at `t = 1`.
pub fn jacobi_normalized(k: u32, alpha: u32, beta: u32, t: f64) -> Result<f64, DomainError> {
    if !t.is_finite() || t.abs() > 1.0 + TOL_UNIT {
        return Err(DomainError::JacobiArgument { t });
    }
    let t = t.clamp(-1.0, 1.0);
    Ok(jacobi_unnormalized(k, alpha, beta, t) / binomial(k + alpha, k))
}

fn monomial(m: u32, n: u32, z: Complex64) -> Complex64 {
    // xi^m conj(xi)^n = r^(m+n) e^{i(m-n)phi}; clamp the modulus so the
    // unit bound survives points that sit on the boundary up to rounding.
    let r = z.norm().min(1.0);
    let phase = z.arg();
    let theta = (m as f64 - n as f64) * phase;
    Complex64::from_polar(r.powi((m + n) as i32), theta)
}

/// Disc polynomial R_{m,n} for sphere parameter `q` at the point `xi`.
///
/// For `q = 1` the domain is the unit circle and the value is the monomial
/// `xi^m conj(xi)^n`; infinite `q` uses the same monomial on the whole disc.
pub fn disc_poly(
    q: SphereParam,
    m: u32,
    n: u32,
    xi: DiscPoint,
) -> Result<Complex64, DomainError> {
    let z = xi.value();
    match q {
        SphereParam::Finite(0) => Err(DomainError::InvalidSphereParam),
        SphereParam::Finite(1) => {
            let modulus = xi.modulus();
            if (modulus - 1.0).abs() > TOL_UNIT {
                return Err(DomainError::CircleRequired { modulus });
            }
            Ok(monomial(m, n, z))
        }
        SphereParam::Infinite => Ok(monomial(m, n, z)),
        SphereParam::Finite(q) => {
            let r = xi.modulus().min(1.0);
            let diff = m.abs_diff(n);
            if r == 0.0 && diff > 0 {
                // The factor r^|m-n| forces the value; the phase of 0 is
                // immaterial here.
                return Ok(Complex64::new(0.0, 0.0));
            }
            let jac = jacobi_normalized(m.min(n), q - 2, diff, 2.0 * r * r - 1.0)?;
            let theta = (m as f64 - n as f64) * z.arg();
            Ok(Complex64::from_polar(r.powi(diff as i32) * jac, theta))
        }
    }
}
