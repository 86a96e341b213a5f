//! Gram matrices of expansion kernels at finite point sets, their component
//! matrices, quadratic forms, eigenvalue checks, and the roots-of-unity
//! construction certifying failure of strict positive definiteness.
//!
//! Entries are stored row-major: `A[mu][nu] = f(z_mu . z_nu, w_mu . w_nu)`.
//! The quadratic form evaluated everywhere in this module is
//! `sum_{mu,nu} c_mu conj(c_nu) A[mu][nu]`, the pairing under which the
//! positive-definiteness inequality is stated; for Hermitian matrices it is
//! real either way.

use crate::geometry::{inner, GeometryError, ProductPoint};
use crate::lattice::{intersects, Coset1D, CosetProduct, IndexSet2D, LatticeError};
use crate::polynomials::{disc_poly, DiscPoint, DomainError, SphereParam};
use crate::spectrum::{KernelError, ProductExpansion};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Entrywise tolerance for the Hermitian-structure check.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GramError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("coefficient vector has length {got}, matrix has size {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("matrix is not Hermitian within {tol} (residual {residual})")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("gram diagonal deviates from the coefficient sum by {deviation}")]
    DiagonalDeviation { deviation: f64 },
    #[error("progression meets the expansion's index shadow; no witness exists there")]
    ProgressionIntersectsShadow,
    #[error("witness quadratic form {value} exceeds the tolerance {tol}")]
    WitnessToleranceExceeded { value: f64, tol: f64 },
    #[error("antipodal-free property violated by points {i} and {j}")]
    NotAntipodalFree { i: usize, j: usize },
}

impl From<KernelError> for GramError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::Domain(d) => GramError::Domain(d),
            KernelError::Geometry(g) => GramError::Geometry(g),
        }
    }
}

/// Kernel Gram matrix at a finite list of product points, Hermitian within
/// [`HERMITIAN_TOL`] with diagonal entries equal to the coefficient sum.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: DMatrix<Complex64>,
    points: Vec<ProductPoint>,
    source: ProductExpansion,
}

impl GramMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn points(&self) -> &[ProductPoint] {
        &self.points
    }

    pub fn source(&self) -> &ProductExpansion {
        &self.source
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|c| c.re).sum()
    }

    /// Largest entrywise deviation from Hermitian structure.
    pub fn hermitian_residual(&self) -> f64 {
        hermitian_residual(&self.entries)
    }
}

fn hermitian_residual(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_distinct(points: &[ProductPoint]) -> Result<(), GramError> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].approx_eq(&points[j], 1e-12) {
                return Err(GramError::DuplicatePoints { i, j });
            }
        }
    }
    Ok(())
}

/// Assembles the Gram matrix `A[mu][nu] = f(z_mu . z_nu, w_mu . w_nu)`,
/// row-parallel, and validates its structural invariants.
pub fn build_a(e: &ProductExpansion, points: &[ProductPoint]) -> Result<GramMatrix, GramError> {
    check_distinct(points)?;
    for p in points {
        e.check_dims(p)?;
    }
    let l = points.len();
    let rows: Vec<Vec<Complex64>> = crate::par::try_map_indexed(l, |mu| {
        (0..l)
            .map(|nu| e.kernel_value(&points[mu], &points[nu]))
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(GramError::from)?;
    let entries = DMatrix::from_fn(l, l, |i, j| rows[i][j]);

    let residual = hermitian_residual(&entries);
    if residual > HERMITIAN_TOL {
        return Err(GramError::NotHermitian {
            residual,
            tol: HERMITIAN_TOL,
        });
    }
    let deviation = entries
        .diagonal()
        .iter()
        .map(|d| (d - Complex64::new(e.total_mass(), 0.0)).norm())
        .fold(0.0f64, f64::max);
    if deviation > 1e-10 * e.total_mass().max(1.0) {
        return Err(GramError::DiagonalDeviation { deviation });
    }
    Ok(GramMatrix {
        entries,
        points: points.to_vec(),
        source: e.clone(),
    })
}

/// Component matrix `B[mu][nu] = R_{m,n}(z_mu . z_nu) R_{k,l}(w_mu . w_nu)`
/// for one expansion term.
pub fn build_b(
    q: SphereParam,
    p: SphereParam,
    (m, n, k, l): (u32, u32, u32, u32),
    points: &[ProductPoint],
) -> Result<DMatrix<Complex64>, GramError> {
    check_distinct(points)?;
    let size = points.len();
    let rows: Vec<Vec<Complex64>> = crate::par::try_map_indexed(size, |mu| {
        (0..size)
            .map(|nu| -> Result<Complex64, GramError> {
                let xi = DiscPoint::new(inner(&points[mu].z, &points[nu].z)?)?;
                let eta = DiscPoint::new(inner(&points[mu].w, &points[nu].w)?)?;
                Ok(disc_poly(q, m, n, xi)? * disc_poly(p, k, l, eta)?)
            })
            .collect()
    })?;
    Ok(DMatrix::from_fn(size, size, |i, j| rows[i][j]))
}

/// The (complex) value `sum_{mu,nu} c_mu conj(c_nu) M[mu][nu]` on a raw
/// matrix; real for Hermitian input.
pub fn raw_form(matrix: &DMatrix<Complex64>, c: &[Complex64]) -> Result<Complex64, GramError> {
    if c.len() != matrix.nrows() {
        return Err(GramError::LengthMismatch {
            got: c.len(),
            want: matrix.nrows(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for mu in 0..c.len() {
        for nu in 0..c.len() {
            acc += c[mu] * c[nu].conj() * matrix[(mu, nu)];
        }
    }
    Ok(acc)
}

/// Real quadratic form of a Gram matrix. The imaginary residual is asserted
/// against `1e-10 * ||c||^2 * trace`.
pub fn quadratic_form(a: &GramMatrix, c: &[Complex64]) -> Result<f64, GramError> {
    let value = raw_form(&a.entries, c)?;
    let norm_sq: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let scale = 1e-10 * norm_sq * a.trace().abs().max(1.0);
    assert!(
        value.im.abs() <= scale,
        "imaginary residual {} exceeds {scale}",
        value.im
    );
    Ok(value.re)
}

/// Deviation between the assembled quadratic form and its term-by-term
/// decomposition: `|cAc - sum_支 a * cBc|` over the expansion support.
pub fn additivity_residual(
    e: &ProductExpansion,
    points: &[ProductPoint],
    c: &[Complex64],
) -> Result<f64, GramError> {
    let a = build_a(e, points)?;
    let total = raw_form(&a.entries, c)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (key, &coeff) in e.coeffs() {
        let b = build_b(e.q(), e.p(), (key.m, key.n, key.k, key.l), points)?;
        sum += coeff * raw_form(&b, c)?;
    }
    Ok((total - sum).norm())
}

/// Smallest eigenvalue of the Gram matrix, computed on the explicitly
/// Hermitized matrix (A + A^H)/2 to suppress roundoff asymmetry.
pub fn min_eigenvalue(a: &GramMatrix) -> Result<f64, GramError> {
    min_eigenvalue_raw(&a.entries)
}

/// Smallest eigenvalue of a Hermitian matrix given as raw entries.
pub fn min_eigenvalue_raw(matrix: &DMatrix<Complex64>) -> Result<f64, GramError> {
    let residual = hermitian_residual(matrix);
    if residual > HERMITIAN_TOL * matrix.nrows().max(1) as f64 {
        return Err(GramError::NotHermitian {
            residual,
            tol: HERMITIAN_TOL * matrix.nrows().max(1) as f64,
        });
    }
    let hermitized = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let eigenvalues = hermitized.symmetric_eigenvalues();
    Ok(eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// A roots-of-unity point configuration together with the coefficient vector
/// whose Gram quadratic form vanishes, certifying that the expansion kernel
/// is not strictly positive definite.
#[derive(Debug, Clone)]
pub struct Witness {
    pub progression: CosetProduct,
    pub points: Vec<ProductPoint>,
    pub coeffs: Vec<Complex64>,
    pub value: f64,
}

fn at_least_two(c: &Coset1D) -> Coset1D {
    // A modulus-1 progression is all of Z; the sub-progression of modulus 2
    // with the same reduced offset preserves emptiness of intersections.
    if c.modulus() >= 2 {
        *c
    } else {
        Coset1D::new(2, c.offset()).expect("modulus 2 is valid")
    }
}

/// Builds the roots-of-unity witness for a progression product disjoint from
/// the expansion's index shadow: `N * M` phase rotations of the base point
/// and the coefficient vector `c_{tau,sigma} = e^{-2 pi i tau x / N} e^{-2 pi
/// i sigma y / M}`. The achieved quadratic form is verified against
/// `tol_scale * 1e-9 * (coefficient sum) * N * M`.
pub fn spd_witness(
    e: &ProductExpansion,
    progression: &CosetProduct,
    base: &ProductPoint,
    tol_scale: f64,
) -> Result<Witness, GramError> {
    let shadow = IndexSet2D::from_points(e.index_shadow());
    if intersects(&shadow, progression) {
        return Err(GramError::ProgressionIntersectsShadow);
    }
    e.check_dims(base)?;
    let progression = CosetProduct::new(
        at_least_two(&progression.first),
        at_least_two(&progression.second),
    );
    let n = progression.first.modulus();
    let m = progression.second.modulus();
    let x = progression.first.offset();
    let y = progression.second.offset();

    use std::f64::consts::TAU;
    let mut points = Vec::with_capacity((n * m) as usize);
    let mut coeffs = Vec::with_capacity((n * m) as usize);
    for tau in 1..=n {
        for sigma in 1..=m {
            let z = base.z.rotated(TAU * tau as f64 / n as f64);
            let w = base.w.rotated(TAU * sigma as f64 / m as f64);
            points.push(ProductPoint::new(z, w));
            coeffs.push(Complex64::from_polar(
                1.0,
                -TAU * (tau * x) as f64 / n as f64 - TAU * (sigma * y) as f64 / m as f64,
            ));
        }
    }

    let a = build_a(e, &points)?;
    let value = quadratic_form(&a, &coeffs)?;
    let tol = tol_scale * 1e-9 * e.total_mass() * (n * m) as f64;
    if value.abs() > tol {
        return Err(GramError::WitnessToleranceExceeded {
            value,
            tol,
        });
    }
    Ok(Witness {
        progression,
        points,
        coeffs,
        value,
    })
}

/// Scans degree pairs `(m+n, k+l)` in increasing order of total degree and
/// returns the first pair at which every component matrix with `m != n`,
/// `k != l` at those degrees is strictly diagonally dominant (off-diagonal
/// row sums below 1). `None` when no pair up to `degree_cap` qualifies.
pub fn diag_dominance_onset(
    base: &[ProductPoint],
    q: SphereParam,
    p: SphereParam,
    degree_cap: u32,
) -> Result<Option<(u32, u32)>, GramError> {
    check_distinct(base)?;
    for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            let af = crate::geometry::is_antipodal(&base[i].z, &base[j].z, crate::geometry::ANTIPODAL_TOL)?
                || crate::geometry::is_antipodal(&base[i].w, &base[j].w, crate::geometry::ANTIPODAL_TOL)?;
            if af {
                return Err(GramError::NotAntipodalFree { i, j });
            }
        }
    }

    let dominant = |matrix: &DMatrix<Complex64>| -> bool {
        (0..matrix.nrows()).all(|i| {
            let off: f64 = (0..matrix.ncols())
                .filter(|&j| j != i)
                .map(|j| matrix[(i, j)].norm())
                .sum();
            off < 1.0
        })
    };

    let splits = |degree: u32| -> Vec<(u32, u32)> {
        (0..=degree)
            .filter(|&m| 2 * m != degree)
            .map(|m| (m, degree - m))
            .collect()
    };

    for total in 2..=(2 * degree_cap) {
        for d1 in 1..total.min(degree_cap + 1) {
            let d2 = total - d1;
            if d2 < 1 || d2 > degree_cap {
                continue;
            }
            let mut all_dominant = true;
            'outer: for &(m, n) in &splits(d1) {
                for &(k, l) in &splits(d2) {
                    let b = build_b(q, p, (m, n, k, l), base)?;
                    if !dominant(&b) {
                        all_dominant = false;
                        break 'outer;
                    }
                }
            }
            if all_dominant {
                return Ok(Some((d1, d2)));
            }
        }
    }
    Ok(None)
}
