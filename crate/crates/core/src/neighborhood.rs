//! Numerical exploration of the separable neighborhood around diagonal states.
//!
//! Two probes are offered: an isotropic Monte-Carlo scan at a fixed Frobenius
//! radius, and a directed search for the nearest state with a negative partial
//! transpose. For two qubits a positive partial transpose certifies
//! separability; for more qubits it only means no entanglement is detectable
//! by that test.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::thermal_state;
use crate::densmat::{is_psd_within, random_pure_vector, random_traceless_direction, stream_rng, ComplexSquareMatrix,
    DensityMatrix};
use crate::error::{Error, Result};
use crate::metrics::min_pt_over_cuts;
use crate::tolerance;

/// Diagonal state used as the center of a neighborhood.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalTarget {
    pub qubits: usize,
    pub diagonal: Vec<f64>,
}

impl DiagonalTarget {
    /// Entries must be non-negative and sum to one. Zero entries are accepted
    /// with a warning: the finite separable neighborhood is only guaranteed
    /// when every entry is strictly positive.
    pub fn new(diagonal: Vec<f64>) -> Result<Self> {
        let dim = diagonal.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if diagonal.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter("diagonal entries must be finite and non-negative".into()));
        }
        let sum: f64 = diagonal.iter().sum();
        if (sum - 1.0).abs() > tolerance::TRACE {
            return Err(Error::BadTrace { trace: sum });
        }
        let target = Self { qubits: dim.trailing_zeros() as usize, diagonal };
        if !target.is_strictly_positive() {
            log::warn!(
                "diagonal target {:?} has zero entries; states arbitrarily close to it may be entangled",
                target.diagonal
            );
        }
        Ok(target)
    }

    pub fn thermal(qubits: usize, nbar: f64) -> Result<Self> {
        Self::new(thermal_state(qubits, nbar)?.diagonal())
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        Self::new(vec![1.0 / dim as f64; dim])
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.diagonal.iter().all(|&p| p > 0.0)
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn state(&self) -> DensityMatrix<f64> {
        DensityMatrix::new_unchecked(ComplexSquareMatrix::diagonal(&self.diagonal))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    Accepted(DensityMatrix<f64>),
    /// ρ₀ + ε·X left the state space.
    Rejected,
}

/// ρ₀ + ε·X for a traceless Hermitian unit-Frobenius direction X.
pub fn perturb(target: &DiagonalTarget, direction: &ComplexSquareMatrix<f64>, epsilon: f64) -> Result<Perturbation> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be non-negative, got {epsilon}")));
    }
    if direction.dim() != target.dim() {
        return Err(Error::DimensionMismatch { expected: target.dim(), found: direction.dim() });
    }
    if direction.hermiticity_error() > tolerance::HERMITIAN
        || direction.trace().norm() > 1e-10
        || (direction.frobenius_norm() - 1.0).abs() > 1e-10
    {
        return Err(Error::InvalidParameter("direction must be traceless, Hermitian and of unit norm".into()));
    }
    if epsilon == 0.0 {
        return Ok(Perturbation::Accepted(target.state()));
    }
    let mut m = direction.scale(epsilon);
    for (i, &p) in target.diagonal.iter().enumerate() {
        m[(i, i)].re += p;
    }
    if is_psd_within(&m, tolerance::PERTURB_PSD) {
        Ok(Perturbation::Accepted(DensityMatrix::new_unchecked(m)))
    } else {
        Ok(Perturbation::Rejected)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighborhoodReport {
    pub epsilon: f64,
    pub samples: usize,
    /// Perturbed states that stayed inside the state space.
    pub accepted: usize,
    pub npt_found: usize,
    pub max_negativity: f64,
    /// Radius from [`directed_boundary`], when it was run.
    pub boundary_estimate: Option<f64>,
    /// True for two qubits, where a positive partial transpose proves separability.
    pub ppt_certifies_separability: bool,
}

#[derive(Default)]
struct ScanTally {
    accepted: usize,
    npt: usize,
    max_negativity: f64,
}

/// Monte-Carlo scan of `n_samples` random directions at radius `epsilon`.
///
/// Sample `i` draws from sub-stream `i` of `seed`, so the result does not
/// depend on how the work is scheduled.
pub fn random_scan(target: &DiagonalTarget, epsilon: f64, n_samples: usize, seed: u64) -> Result<NeighborhoodReport> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let tally = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| -> Result<ScanTally> {
            let mut rng = stream_rng(seed, i);
            let x = random_traceless_direction::<f64, _>(target.dim(), &mut rng);
            match perturb(target, &x, epsilon)? {
                Perturbation::Rejected => Ok(ScanTally::default()),
                Perturbation::Accepted(rho) => {
                    let m = min_pt_over_cuts(&rho)?;
                    Ok(ScanTally {
                        accepted: 1,
                        npt: usize::from(m < -tolerance::NPT),
                        max_negativity: (-m).max(0.0),
                    })
                }
            }
        })
        .try_reduce(ScanTally::default, |a, b| {
            Ok(ScanTally {
                accepted: a.accepted + b.accepted,
                npt: a.npt + b.npt,
                max_negativity: a.max_negativity.max(b.max_negativity),
            })
        })?;
    Ok(NeighborhoodReport {
        epsilon,
        samples: n_samples,
        accepted: tally.accepted,
        npt_found: tally.npt,
        max_negativity: tally.max_negativity,
        boundary_estimate: None,
        ppt_certifies_separability: target.qubits == 2,
    })
}

/// Nearest negative-partial-transpose state found by [`directed_boundary`].
#[derive(Clone, Debug)]
pub struct BoundaryEstimate {
    /// Frobenius distance from the target; an upper bound on the separable radius.
    pub radius: f64,
    pub state: DensityMatrix<f64>,
    pub min_pt_eigenvalue: f64,
}

/// Hill-climbing iterations per restart.
const CLIMB_ITERATIONS: usize = 80;
const CLIMB_INITIAL_STEP: f64 = 0.3;
/// Bracket width (in the mixing parameter) at which ray bisection stops.
const RAY_RESOLUTION: f64 = 1e-9;

/// Point on the segment from the target towards a pure state.
struct Ray {
    target: ComplexSquareMatrix<f64>,
    pure: ComplexSquareMatrix<f64>,
    length: f64,
}

impl Ray {
    fn new(target: &DiagonalTarget, psi: &[Complex<f64>]) -> Self {
        let t = ComplexSquareMatrix::diagonal(&target.diagonal);
        let pure = ComplexSquareMatrix::projector(psi);
        let length = pure.frobenius_distance(&t);
        Self { target: t, pure, length }
    }

    fn at(&self, s: f64) -> DensityMatrix<f64> {
        DensityMatrix::new_unchecked(&self.target.scale(1.0 - s) + &self.pure.scale(s))
    }

    fn min_pt(&self, s: f64) -> Result<f64> {
        min_pt_over_cuts(&self.at(s))
    }

    /// First NPT point along the segment. Every point of the segment is a
    /// state, and the minimum partial-transpose eigenvalue is concave along
    /// it, so the NPT part is a single interval ending at the pure state.
    fn first_npt(&self) -> Result<Option<(f64, f64)>> {
        let threshold = -tolerance::NPT;
        let end = self.min_pt(1.0)?;
        if end >= threshold || self.length == 0.0 {
            return Ok(None);
        }
        let (mut lo, mut hi, mut f_hi) = (0.0, 1.0, end);
        while hi - lo > RAY_RESOLUTION {
            let mid = 0.5 * (lo + hi);
            let f = self.min_pt(mid)?;
            if f < threshold {
                hi = mid;
                f_hi = f;
            } else {
                lo = mid;
            }
        }
        Ok(Some((hi, f_hi)))
    }

    fn radius(&self) -> Result<f64> {
        Ok(self.first_npt()?.map_or(f64::INFINITY, |(s, _)| s * self.length))
    }
}

fn normalise(v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Two-component superpositions of basis states, a cheap deterministic start set.
fn structured_candidates(dim: usize) -> Vec<Vec<Complex<f64>>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            for phase in [1.0, -1.0] {
                let mut v = vec![Complex::new(0.0, 0.0); dim];
                v[i] = Complex::new(h, 0.0);
                v[j] = Complex::new(phase * h, 0.0);
                out.push(v);
            }
        }
    }
    out
}

fn climb<R: Rng>(
    target: &DiagonalTarget,
    start: Vec<Complex<f64>>,
    rng: &mut R,
) -> Result<(f64, Vec<Complex<f64>>)> {
    let mut best = start;
    let mut best_r = Ray::new(target, &best).radius()?;
    let mut step = CLIMB_INITIAL_STEP;
    let mut failures = 0;
    for _ in 0..CLIMB_ITERATIONS {
        let kick = random_pure_vector::<f64, _>(target.dim(), rng);
        let cand = normalise(best.iter().zip(&kick).map(|(a, b)| a + b * step).collect());
        let r = Ray::new(target, &cand).radius()?;
        if r < best_r {
            best = cand;
            best_r = r;
            failures = 0;
        } else {
            failures += 1;
            if failures >= 4 {
                step *= 0.5;
                failures = 0;
            }
        }
    }
    Ok((best_r, best))
}

/// Estimate the distance from the target to the nearest NPT state.
///
/// Searches segments from the target towards pure states: a fixed set of
/// two-component superpositions, then `restarts` hill climbs (the first from
/// the best fixed candidate, the rest from Haar-random states) that shrink
/// the first-NPT distance along the segment. Restart `r` uses sub-stream `r`
/// of `seed`, so adding restarts never increases the estimate.
pub fn directed_boundary(target: &DiagonalTarget, restarts: usize, seed: u64) -> Result<BoundaryEstimate> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    if target.qubits < 2 {
        return Err(Error::InvalidParameter("a single qubit has no bipartition".into()));
    }
    let mut fixed_best: Option<(f64, Vec<Complex<f64>>)> = None;
    for psi in structured_candidates(target.dim()) {
        let r = Ray::new(target, &psi).radius()?;
        if fixed_best.as_ref().is_none_or(|(b, _)| r < *b) {
            fixed_best = Some((r, psi));
        }
    }
    let (fixed_r, fixed_psi) = fixed_best.expect("at least one candidate");

    let climbed: Vec<(f64, Vec<Complex<f64>>)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r);
            let start = if r == 0 { fixed_psi.clone() } else { random_pure_vector::<f64, _>(target.dim(), &mut rng) };
            climb(target, start, &mut rng)
        })
        .collect::<Result<_>>()?;

    let mut best = (fixed_r, fixed_psi);
    for cand in climbed {
        if cand.0 < best.0 {
            best = cand;
        }
    }
    let ray = Ray::new(target, &best.1);
    match ray.first_npt()? {
        Some((s, f)) => Ok(BoundaryEstimate { radius: s * ray.length, state: ray.at(s), min_pt_eigenvalue: f }),
        None => Err(Error::NumericalIntegrity("no NPT state found along any searched direction".into())),
    }
}
