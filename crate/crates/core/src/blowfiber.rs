//! Local model of the exceptional fiber after blowing up a point of
//! the special fiber, and a sampling certificate that the model is
//! star-shaped, hence contractible.
//!
//! The divisor has `|I|` branches through the point; the blowup center
//! lies on the branches in `L`, which must be nonempty.  The fiber of
//! the exceptional set over the distinguished base point is
//!
//! ```text
//! { (r, z) in R_{>=0}^L x C^{I \ L} : sum r_i^2 + sum |z_j|^2 = 1 }
//! ```
//!
//! a sphere cut down to a convex cone that is closed under positive
//! scaling.  Radial segments toward an interior point of the cone stay
//! in the set after renormalization, which is what the Monte Carlo
//! check samples.  Floating point enters only here; every check
//! carries the explicit tolerance.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};

/// Sphere-membership tolerance for sampled and renormalized points.
pub const SPHERE_TOLERANCE: f64 = 1e-9;

/// Interpolation grid per sampled segment.
pub const SEGMENT_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowfiberError {
    /// The divisor needs at least one branch through the point.
    NoBranches,
    /// A center branch index that is not a divisor branch.
    BranchOutOfRange(usize),
    /// The blowup center must lie on at least one divisor branch,
    /// otherwise the construction degenerates to a plain sphere.
    CenterNotInDivisor,
    /// A region with no coordinates cannot be sampled.
    EmptyModel,
}

impl fmt::Display for BlowfiberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowfiberError::NoBranches => write!(f, "divisor has no branches at the point"),
            BlowfiberError::BranchOutOfRange(i) => write!(f, "branch index {i} out of range"),
            BlowfiberError::CenterNotInDivisor => {
                write!(f, "blowup center lies on no divisor branch")
            }
            BlowfiberError::EmptyModel => write!(f, "model has no coordinates"),
        }
    }
}

/// Local combinatorics at the blown-up point: which divisor branches
/// pass through it and which of those contain the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupLocalData {
    branches: usize,
    center: BTreeSet<usize>,
}

impl BlowupLocalData {
    pub fn new(branches: usize, center: &[usize]) -> Result<Self, BlowfiberError> {
        if branches == 0 {
            return Err(BlowfiberError::NoBranches);
        }
        if center.is_empty() {
            return Err(BlowfiberError::CenterNotInDivisor);
        }
        let mut set = BTreeSet::new();
        for &i in center {
            if i >= branches {
                return Err(BlowfiberError::BranchOutOfRange(i));
            }
            set.insert(i);
        }
        Ok(BlowupLocalData { branches, center: set })
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn center_branches(&self) -> impl Iterator<Item = usize> + '_ {
        self.center.iter().copied()
    }
}

/// The exceptional fiber: a unit sphere restricted to nonnegative
/// values in the log coordinates.  `log_coords` counts branches
/// through the center (real rays), `complex_coords` the remaining
/// branches (complex lines).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberModel {
    log_coords: usize,
    complex_coords: usize,
}

impl FiberModel {
    pub fn new(log_coords: usize, complex_coords: usize) -> Result<Self, BlowfiberError> {
        if log_coords == 0 {
            return Err(BlowfiberError::CenterNotInDivisor);
        }
        Ok(FiberModel { log_coords, complex_coords })
    }

    pub fn log_coords(&self) -> usize {
        self.log_coords
    }

    pub fn complex_coords(&self) -> usize {
        self.complex_coords
    }

    /// Real dimension of the fiber.
    pub fn dimension(&self) -> usize {
        self.log_coords + 2 * self.complex_coords - 1
    }
}

/// Fiber of the exceptional set over the distinguished point of the
/// base circle bundle.
pub fn fiber_of_simple_blowup(data: &BlowupLocalData) -> FiberModel {
    let log = data.center.len();
    let complex = data.branches - log;
    FiberModel::new(log, complex).expect("center is nonempty by construction")
}

/// A subset of a sphere cut out by a cone, star-shaped candidate.
/// The Monte Carlo verifier is generic over this so tests can feed it
/// regions that genuinely fail.
pub trait StarRegion {
    fn ambient_dim(&self) -> usize;
    /// A designated point of the region the segments retract to.
    fn center(&self) -> Vec<f64>;
    /// Membership in the cone over the region.
    fn in_cone(&self, p: &[f64]) -> bool;
    /// A point of the region (unit length, in the cone).
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<f64>;
}

impl StarRegion for FiberModel {
    fn ambient_dim(&self) -> usize {
        self.log_coords + 2 * self.complex_coords
    }

    fn center(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.ambient_dim()];
        c[0] = 1.0;
        c
    }

    fn in_cone(&self, p: &[f64]) -> bool {
        p.len() == self.ambient_dim() && p[..self.log_coords].iter().all(|&x| x >= 0.0)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        loop {
            let mut p: Vec<f64> = (0..self.ambient_dim()).map(|_| gaussian(rng)).collect();
            for x in p[..self.log_coords].iter_mut() {
                *x = x.abs();
            }
            let norm = norm(&p);
            if norm > 1e-6 {
                for x in p.iter_mut() {
                    *x /= norm;
                }
                return p;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub sample_index: usize,
    pub t: f64,
    pub point: Vec<f64>,
}

/// Outcome of the sampling run.  `cone_closure_ok` covers the
/// structural half (random nonnegative combinations of cone points
/// stay in the cone); `star_ok` covers the segments themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub samples: usize,
    pub steps_per_segment: usize,
    pub tolerance: f64,
    pub cone_closure_ok: bool,
    pub star_ok: bool,
    pub violation: Option<Violation>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.cone_closure_ok && self.star_ok
    }
}

/// Samples `samples` region points and walks the straight segment from
/// each to the center on a fixed grid, renormalizing back to the
/// sphere; any point that leaves the cone, collapses toward the
/// origin, or misses the sphere after renormalization is a violation.
/// Also samples random positive combinations to certify the cone is
/// closed under them.  Deterministic in `seed`.
pub fn verify_contractibility<R: StarRegion + ?Sized>(
    region: &R,
    samples: usize,
    seed: u64,
) -> Result<Certificate, BlowfiberError> {
    if region.ambient_dim() == 0 {
        return Err(BlowfiberError::EmptyModel);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let center = region.center();

    let mut cert = Certificate {
        samples,
        steps_per_segment: SEGMENT_STEPS,
        tolerance: SPHERE_TOLERANCE,
        cone_closure_ok: true,
        star_ok: true,
        violation: None,
    };

    if !region.in_cone(&center) || (norm(&center) - 1.0).abs() > SPHERE_TOLERANCE {
        cert.star_ok = false;
        cert.violation = Some(Violation { sample_index: 0, t: 1.0, point: center });
        return Ok(cert);
    }

    'outer: for i in 0..samples {
        let x = region.sample(&mut rng);
        if !region.in_cone(&x) || (norm(&x) - 1.0).abs() > SPHERE_TOLERANCE {
            cert.star_ok = false;
            cert.violation = Some(Violation { sample_index: i, t: 0.0, point: x });
            break;
        }
        for step in 1..=SEGMENT_STEPS {
            let t = step as f64 / SEGMENT_STEPS as f64;
            let p: Vec<f64> =
                x.iter().zip(&center).map(|(a, c)| (1.0 - t) * a + t * c).collect();
            let n = norm(&p);
            if !region.in_cone(&p) || n < SPHERE_TOLERANCE {
                cert.star_ok = false;
                cert.violation = Some(Violation { sample_index: i, t, point: p });
                break 'outer;
            }
            let q: Vec<f64> = p.iter().map(|a| a / n).collect();
            if !region.in_cone(&q) || (norm(&q) - 1.0).abs() > SPHERE_TOLERANCE {
                cert.star_ok = false;
                cert.violation = Some(Violation { sample_index: i, t, point: q });
                break 'outer;
            }
        }

        // Structural half: positive combinations of two cone points.
        let y = region.sample(&mut rng);
        let (a, b) = (uniform(&mut rng) * 2.0, uniform(&mut rng) * 2.0);
        let comb: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        if !region.in_cone(&comb) {
            cert.cone_closure_ok = false;
            cert.violation = Some(Violation { sample_index: i, t: 0.0, point: comb });
            break;
        }
    }
    Ok(cert)
}

fn norm(p: &[f64]) -> f64 {
    libm::sqrt(p.iter().map(|x| x * x).sum())
}

fn uniform(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn gaussian(rng: &mut dyn RngCore) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_data_validation() {
        assert!(matches!(BlowupLocalData::new(0, &[0]), Err(BlowfiberError::NoBranches)));
        assert!(matches!(
            BlowupLocalData::new(3, &[]),
            Err(BlowfiberError::CenterNotInDivisor)
        ));
        assert!(matches!(
            BlowupLocalData::new(3, &[3]),
            Err(BlowfiberError::BranchOutOfRange(3))
        ));
        let d = BlowupLocalData::new(3, &[0, 2, 0]).unwrap();
        assert_eq!(d.center_branches().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn model_dimensions() {
        // One branch, center on it: the fiber is a point.
        let d = BlowupLocalData::new(1, &[0]).unwrap();
        assert_eq!(fiber_of_simple_blowup(&d).dimension(), 0);
        // Three branches, center on one: quarter-sphere of dim 4.
        let d = BlowupLocalData::new(3, &[1]).unwrap();
        let m = fiber_of_simple_blowup(&d);
        assert_eq!((m.log_coords(), m.complex_coords()), (1, 2));
        assert_eq!(m.dimension(), 4);
    }

    #[test]
    fn certificates_pass_for_real_models() {
        for (branches, center) in [(1usize, &[0usize][..]), (2, &[0]), (3, &[0, 1]), (4, &[0, 1, 2, 3])] {
            let d = BlowupLocalData::new(branches, center).unwrap();
            let m = fiber_of_simple_blowup(&d);
            let cert = verify_contractibility(&m, 200, 7).unwrap();
            assert!(cert.passed(), "model {branches}/{center:?}: {:?}", cert.violation);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let d = BlowupLocalData::new(3, &[0]).unwrap();
        let m = fiber_of_simple_blowup(&d);
        let a = verify_contractibility(&m, 50, 11).unwrap();
        let b = verify_contractibility(&m, 50, 11).unwrap();
        assert_eq!(a, b);
    }

    /// Left half-circle with the center on the right: segments leave
    /// the region, so the certificate must fail.
    struct Sham;

    impl StarRegion for Sham {
        fn ambient_dim(&self) -> usize {
            2
        }
        fn center(&self) -> Vec<f64> {
            vec![1.0, 0.0]
        }
        fn in_cone(&self, p: &[f64]) -> bool {
            // The center itself is grandfathered in; everything else
            // must keep a nonpositive first coordinate.
            p[0] <= 0.0 || (p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12
        }
        fn sample(&self, rng: &mut dyn RngCore) -> Vec<f64> {
            let t = core::f64::consts::FRAC_PI_2 + core::f64::consts::PI * uniform(rng);
            vec![libm::cos(t), libm::sin(t)]
        }
    }

    #[test]
    fn sham_region_is_rejected() {
        let cert = verify_contractibility(&Sham, 50, 3).unwrap();
        assert!(!cert.passed());
        assert!(cert.violation.is_some());
    }
}
