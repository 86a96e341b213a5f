//! Kernels on products of complex unit spheres built from disc (generalized
//! Zernike) polynomial expansions with nonnegative coefficients.
//!
//! The crate provides:
//!
//! * [`polynomials`]: normalized Jacobi and disc polynomial evaluation for
//!   every sphere parameter, including the circle and infinite cases;
//! * [`spectrum`]: finite product expansions, their validation, kernel
//!   evaluation and the index shadow `(m, n, k, l) -> (m - n, k - l)`;
//! * [`lattice`]: an exact decision of whether a symbolic subset of the
//!   integer plane meets every product of full arithmetic progressions, the
//!   criterion that separates strictly positive definite kernels from the
//!   rest, plus a scanning brute-force oracle;
//! * [`geometry`]: sphere points, inner products, uniform sampling and the
//!   antipodal-free decomposition behind the diagonal-dominance argument;
//! * [`gram`]: Gram matrices, quadratic forms, eigenvalue checks, and the
//!   roots-of-unity witness construction that certifies a kernel is not
//!   strictly positive definite;
//! * [`bridge`]: coefficient correspondences between cosine expansions on
//!   real circles and bilateral expansions on complex circles;
//! * [`schema`]: JSON document types for all of the above.
//!
//! Data-parallel inner loops (Gram assembly, residue scans) run on rayon
//! under the default `parallel` feature and fall back to sequential
//! iteration without it.

pub mod bridge;
pub mod geometry;
pub mod gram;
pub mod lattice;
mod par;
pub mod polynomials;
pub mod schema;
pub mod spectrum;

pub use polynomials::{DiscPoint, SphereParam};
pub use spectrum::{CoeffKey, ProductExpansion};
