//! Correspondences between cosine expansions on real circles and bilateral
//! monomial expansions on complex circles, in one and two variables.
//!
//! A cosine series `sum a_{m,k} cos(m phi) cos(k psi)` with nonnegative
//! coefficients translates to a four-fold symmetric bilateral family on the
//! torus and back; positivity patterns, and hence the progression criterion,
//! transfer exactly. Dyadic coefficient splits (/2, /4) are exact in binary
//! floating point, so the round trips are identities, not approximations.

use crate::lattice::{decide_spd_condition, IndexSet2D, LatticeError, SpdVerdict};
use crate::polynomials::SphereParam;
use crate::spectrum::{CircleExpansion, CoeffKey, ProductExpansion};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BridgeError {
    #[error("coefficient at {index:?} must be positive and finite, got {value}")]
    InvalidCoefficient { index: (i64, i64), value: f64 },
    #[error("symmetry violation on the orbit of {orbit:?}: the four signed copies must carry equal coefficients")]
    SymmetryViolation { orbit: (i64, i64) },
    #[error("symmetry violation at index {index}: coefficients at +-index must be equal")]
    SymmetryViolation1D { index: i64 },
    #[error("cosine index {index} must be nonnegative")]
    NegativeCosineIndex { index: i64 },
}

/// Cosine-product expansion with nonneg indices: `sum a_{m,k} cos cos`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosExpansion2D {
    coeffs: BTreeMap<(u32, u32), f64>,
}

impl CosExpansion2D {
    pub fn new(coeffs: BTreeMap<(u32, u32), f64>) -> Result<Self, BridgeError> {
        for (&(m, k), &a) in &coeffs {
            if !a.is_finite() || a <= 0.0 {
                return Err(BridgeError::InvalidCoefficient {
                    index: (m as i64, k as i64),
                    value: a,
                });
            }
        }
        Ok(CosExpansion2D { coeffs })
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.coeffs
    }

    /// Direct evaluation of the cosine series at an angle pair.
    pub fn eval(&self, phi: f64, psi: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&(m, k), &a)| a * (m as f64 * phi).cos() * (k as f64 * psi).cos())
            .sum()
    }
}

/// Bilateral expansion `sum a_{m,k} xi^m eta^k` over integer indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusExpansion {
    coeffs: BTreeMap<(i64, i64), f64>,
}

impl TorusExpansion {
    pub fn new(coeffs: BTreeMap<(i64, i64), f64>) -> Result<Self, BridgeError> {
        for (&index, &a) in &coeffs {
            if !a.is_finite() || a <= 0.0 {
                return Err(BridgeError::InvalidCoefficient { index, value: a });
            }
        }
        Ok(TorusExpansion { coeffs })
    }

    pub fn coeffs(&self) -> &BTreeMap<(i64, i64), f64> {
        &self.coeffs
    }

    /// Repackages the bilateral family as a circle-circle product expansion
    /// (both sphere parameters 1) by rearranging each variable onto one-sided
    /// keys, so evaluation reuses the single expansion engine.
    pub fn to_product_expansion(&self) -> ProductExpansion {
        let coeffs: BTreeMap<CoeffKey, f64> = self
            .coeffs
            .iter()
            .map(|(&(m, k), &a)| {
                let (mm, nn) = if m >= 0 { (m as u32, 0) } else { (0, (-m) as u32) };
                let (kk, ll) = if k >= 0 { (k as u32, 0) } else { (0, (-k) as u32) };
                (CoeffKey::new(mm, nn, kk, ll), a)
            })
            .collect();
        ProductExpansion::new(SphereParam::Finite(1), SphereParam::Finite(1), coeffs)
            .expect("one-sided keys with positive coefficients are always valid")
    }

    /// Evaluates at `(e^{i phi}, e^{i psi})` through the product expansion.
    pub fn eval_at_angles(&self, phi: f64, psi: f64) -> Complex64 {
        use crate::polynomials::DiscPoint;
        let xi = DiscPoint::new(Complex64::from_polar(1.0, phi)).expect("unit modulus");
        let eta = DiscPoint::new(Complex64::from_polar(1.0, psi)).expect("unit modulus");
        self.to_product_expansion()
            .eval(xi, eta)
            .expect("boundary points are in the circle domain")
    }

    /// The positivity-support of the family as a symbolic point set.
    pub fn support_index_set(&self) -> IndexSet2D {
        IndexSet2D::from_points(self.coeffs.keys().copied())
    }
}

/// Cosine-to-torus coefficient map: the constant term stays, single-sided
/// terms split in half over `(+-m, 0)`, and doubly-indexed terms split in
/// four over `(+-m, +-k)`. The output carries the four-fold symmetry.
pub fn cos_to_torus(c: &CosExpansion2D) -> TorusExpansion {
    let mut coeffs = BTreeMap::new();
    for (&(m, k), &a) in c.coeffs() {
        let (m, k) = (m as i64, k as i64);
        match (m, k) {
            (0, 0) => {
                coeffs.insert((0, 0), a);
            }
            (m, 0) => {
                coeffs.insert((m, 0), a / 2.0);
                coeffs.insert((-m, 0), a / 2.0);
            }
            (0, k) => {
                coeffs.insert((0, k), a / 2.0);
                coeffs.insert((0, -k), a / 2.0);
            }
            (m, k) => {
                coeffs.insert((m, k), a / 4.0);
                coeffs.insert((-m, k), a / 4.0);
                coeffs.insert((m, -k), a / 4.0);
                coeffs.insert((-m, -k), a / 4.0);
            }
        }
    }
    TorusExpansion { coeffs }
}

/// Exact inverse of [`cos_to_torus`]. Symmetry is checked exactly on the
/// stored values: coefficients are user inputs, not computed quantities.
pub fn torus_to_cos(t: &TorusExpansion) -> Result<CosExpansion2D, BridgeError> {
    let mut out: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (&(m, k), &a) in t.coeffs() {
        let orbit_rep = (m.abs(), k.abs());
        let orbit: Vec<(i64, i64)> = match (orbit_rep.0, orbit_rep.1) {
            (0, 0) => vec![(0, 0)],
            (m0, 0) => vec![(m0, 0), (-m0, 0)],
            (0, k0) => vec![(0, k0), (0, -k0)],
            (m0, k0) => vec![(m0, k0), (-m0, k0), (m0, -k0), (-m0, -k0)],
        };
        for member in &orbit {
            if t.coeffs().get(member) != Some(&a) {
                return Err(BridgeError::SymmetryViolation { orbit: orbit_rep });
            }
        }
        out.insert(
            (orbit_rep.0 as u32, orbit_rep.1 as u32),
            a * orbit.len() as f64,
        );
    }
    Ok(CosExpansion2D { coeffs: out })
}

/// Cosine expansion in one variable with nonnegative indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CosExpansion1D {
    coeffs: BTreeMap<u32, f64>,
}

impl CosExpansion1D {
    pub fn new(coeffs: BTreeMap<u32, f64>) -> Result<Self, BridgeError> {
        for (&m, &a) in &coeffs {
            if !a.is_finite() || a <= 0.0 {
                return Err(BridgeError::InvalidCoefficient {
                    index: (m as i64, 0),
                    value: a,
                });
            }
        }
        Ok(CosExpansion1D { coeffs })
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, f64> {
        &self.coeffs
    }
}

/// One-variable analogue of [`torus_to_cos`]: requires `a_m = a_{-m}` exactly
/// and merges each pair into `2 a_m` at index `|m|`.
pub fn circle_to_cos(c: &CircleExpansion) -> Result<CosExpansion1D, BridgeError> {
    let mut out = BTreeMap::new();
    for (&m, &a) in c.coeffs() {
        if m == 0 {
            out.insert(0u32, a);
            continue;
        }
        if c.coeffs().get(&(-m)) != Some(&a) {
            return Err(BridgeError::SymmetryViolation1D { index: m });
        }
        out.insert(m.unsigned_abs() as u32, 2.0 * a);
    }
    Ok(CosExpansion1D { coeffs: out })
}

/// One-variable analogue of [`cos_to_torus`].
pub fn cos_to_circle(c: &CosExpansion1D) -> CircleExpansion {
    let mut out = BTreeMap::new();
    for (&m, &a) in c.coeffs() {
        if m == 0 {
            out.insert(0i64, a);
        } else {
            out.insert(m as i64, a / 2.0);
            out.insert(-(m as i64), a / 2.0);
        }
    }
    CircleExpansion::new(out).expect("halving positive coefficients keeps them positive")
}

/// The symmetrized support `{(+-m, +-k): a_{m,k} > 0}` as a point set.
pub fn symmetrized_shadow(c: &CosExpansion2D) -> IndexSet2D {
    let mut points = std::collections::BTreeSet::new();
    for &(m, k) in c.coeffs().keys() {
        let (m, k) = (m as i64, k as i64);
        for sm in [-1i64, 1] {
            for sk in [-1i64, 1] {
                points.insert((sm * m, sk * k));
            }
        }
    }
    IndexSet2D::new(Vec::new(), points)
}

/// Progression criterion for a cosine-product expansion, decided on the
/// symmetrized support. Symbolic (infinite) families should be stated
/// directly as an [`IndexSet2D`] and passed to the lattice decision instead.
pub fn spd_condition_real(c: &CosExpansion2D) -> Result<SpdVerdict, LatticeError> {
    decide_spd_condition(&symmetrized_shadow(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cos2d(entries: &[((u32, u32), f64)]) -> CosExpansion2D {
        CosExpansion2D::new(entries.iter().copied().collect()).unwrap()
    }

    #[test]
    fn cos_to_torus_examples() {
        let t = cos_to_torus(&cos2d(&[((0, 0), 1.0)]));
        assert_eq!(t.coeffs(), &BTreeMap::from([((0, 0), 1.0)]));

        let t = cos_to_torus(&cos2d(&[((1, 1), 4.0)]));
        assert_eq!(
            t.coeffs(),
            &BTreeMap::from([((1, 1), 1.0), ((-1, 1), 1.0), ((1, -1), 1.0), ((-1, -1), 1.0)])
        );

        let t = cos_to_torus(&cos2d(&[((2, 0), 2.0)]));
        assert_eq!(
            t.coeffs(),
            &BTreeMap::from([((2, 0), 1.0), ((-2, 0), 1.0)])
        );
    }

    #[test]
    fn torus_to_cos_examples() {
        let t = TorusExpansion::new(BTreeMap::from([
            ((1, 2), 0.25),
            ((-1, 2), 0.25),
            ((1, -2), 0.25),
            ((-1, -2), 0.25),
        ]))
        .unwrap();
        let c = torus_to_cos(&t).unwrap();
        assert_eq!(c.coeffs(), &BTreeMap::from([((1, 2), 1.0)]));

        let asymmetric = TorusExpansion::new(BTreeMap::from([((1, 0), 1.0)])).unwrap();
        assert!(matches!(
            torus_to_cos(&asymmetric),
            Err(BridgeError::SymmetryViolation { orbit: (1, 0) })
        ));
    }

    #[test]
    fn round_trips_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let mut entries = BTreeMap::new();
            for _ in 0..rng.gen_range(1..10usize) {
                // Dyadic coefficients: exact under the /2 and /4 splits.
                let a = rng.gen_range(1..64u32) as f64 / 16.0;
                entries.insert((rng.gen_range(0..6u32), rng.gen_range(0..6u32)), a);
            }
            let c = CosExpansion2D::new(entries).unwrap();
            let back = torus_to_cos(&cos_to_torus(&c)).unwrap();
            assert_eq!(&back, &c);
        }
    }

    #[test]
    fn circle_bridge_examples() {
        let c1 = CosExpansion1D::new(BTreeMap::from([(0u32, 1.0)])).unwrap();
        let circ = cos_to_circle(&c1);
        assert_eq!(circ.coeffs(), &BTreeMap::from([(0i64, 1.0)]));
        assert_eq!(circle_to_cos(&circ).unwrap(), c1);

        let circ = CircleExpansion::new(BTreeMap::from([(3, 0.5), (-3, 0.5)])).unwrap();
        let c1 = circle_to_cos(&circ).unwrap();
        assert_eq!(c1.coeffs(), &BTreeMap::from([(3u32, 1.0)]));
        assert_eq!(cos_to_circle(&c1), circ);

        let lopsided = CircleExpansion::new(BTreeMap::from([(2, 1.0)])).unwrap();
        assert!(matches!(
            circle_to_cos(&lopsided),
            Err(BridgeError::SymmetryViolation1D { index: 2 })
        ));
    }

    #[test]
    fn finite_cosine_families_always_fail_the_criterion() {
        let c = cos2d(&[((1, 1), 1.0), ((2, 3), 0.5)]);
        let verdict = spd_condition_real(&c).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.counterexample.is_some());
    }

    #[test]
    fn verdict_agrees_with_torus_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let mut entries = BTreeMap::new();
            for _ in 0..rng.gen_range(1..8usize) {
                entries.insert(
                    (rng.gen_range(0..5u32), rng.gen_range(0..5u32)),
                    rng.gen_range(0.25..2.0),
                );
            }
            let c = CosExpansion2D::new(entries).unwrap();
            let via_real = spd_condition_real(&c).unwrap();
            let via_torus =
                decide_spd_condition(&cos_to_torus(&c).support_index_set()).unwrap();
            assert_eq!(via_real.holds, via_torus.holds);
        }
    }

    #[test]
    fn pointwise_agreement_with_torus_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let mut entries = BTreeMap::new();
            for _ in 0..rng.gen_range(1..8usize) {
                entries.insert(
                    (rng.gen_range(0..7u32), rng.gen_range(0..7u32)),
                    rng.gen_range(0.1..2.0),
                );
            }
            let c = CosExpansion2D::new(entries).unwrap();
            let t = cos_to_torus(&c);
            for _ in 0..30 {
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                let psi = rng.gen_range(0.0..std::f64::consts::TAU);
                let direct = c.eval(phi, psi);
                let via_torus = t.eval_at_angles(phi, psi);
                assert!(
                    (via_torus - Complex64::new(direct, 0.0)).norm() < 1e-12,
                    "phi={phi} psi={psi}"
                );
            }
        }
    }
}
