//! Quantum discord with rank-1 projective qubit measurements and the
//! Koashi-Winter route to mixed-state entanglement of formation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace, purify, CMatrix, DensityMatrix, EIGEN_CLAMP,
};
use crate::measures::{binary_entropy, eof_pure_bipartite, von_neumann_entropy};

/// Rank-1 projective measurement on a qubit, Bloch angles of the first
/// projector axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitMeasurement {
    pub theta: f64,
    pub phi: f64,
}

impl QubitMeasurement {
    /// The two orthogonal rank-1 projectors; they sum to the identity.
    pub fn projectors(&self) -> (CMatrix, CMatrix) {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = Complex64::from_polar(1.0, self.phi);
        let v1 = [Complex64::new(c, 0.0), e * s];
        let v2 = [-e.conj() * s, Complex64::new(c, 0.0)];
        (CMatrix::outer(&v1), CMatrix::outer(&v2))
    }
}

/// Embed a single-qubit operator at `target` within `dims`.
fn embed(op: &CMatrix, dims: &[usize], target: usize) -> CMatrix {
    let mut out = CMatrix::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        if k == target {
            out = out.kron(op);
        } else {
            out = out.kron(&CMatrix::identity(d));
        }
    }
    out
}

/// Sum_k p_k S(rest | outcome k) for a projective measurement on the
/// `measured` qubit. Outcomes with p_k < 1e-12 contribute zero.
pub fn conditional_entropy_after_measurement(
    rho: &DensityMatrix,
    measured: usize,
    meas: &QubitMeasurement,
) -> Result<f64> {
    let dims = rho.dims();
    if measured >= dims.len() || dims[measured] != 2 {
        return Err(Error::InvalidSubsystems(format!(
            "measured subsystem {measured} must be a qubit of {dims:?}"
        )));
    }
    if dims == [2, 2] {
        return Ok(conditional_entropy_two_qubit(rho, measured, meas));
    }
    let keep_rest: Vec<usize> = (0..dims.len()).filter(|&i| i != measured).collect();
    let (p1, p2) = meas.projectors();
    let mut total = 0.0;
    for proj in [p1, p2] {
        let full = embed(&proj, dims, measured);
        let sandwiched = full.mul(rho.matrix()).mul(&full);
        let pk = sandwiched.trace().re;
        if pk < 1e-12 {
            continue;
        }
        let conditioned = DensityMatrix::new_unchecked(sandwiched.scale(1.0 / pk), dims.to_vec());
        let reduced = partial_trace(&conditioned, &keep_rest)?;
        total += pk * von_neumann_entropy(&reduced)?;
    }
    Ok(total)
}

/// Allocation-free path for the dominant two-qubit case. With the rank-1
/// projector |v><v| on the measured qubit, the unnormalized conditioned
/// state of the other qubit is rho'[i][j] = <v| B_ij |v> over the 2x2
/// blocks B_ij picked out by the kept index, and a 2x2 entropy follows from
/// the characteristic polynomial.
fn conditional_entropy_two_qubit(
    rho: &DensityMatrix,
    measured: usize,
    meas: &QubitMeasurement,
) -> f64 {
    let m = rho.matrix();
    let (s, c) = (0.5 * meas.theta).sin_cos();
    let e = Complex64::from_polar(1.0, meas.phi);
    let v1 = [Complex64::new(c, 0.0), e * s];
    let v2 = [-e.conj() * s, Complex64::new(c, 0.0)];
    // entry (a, b) of the 2x2 block with kept indices (i, j)
    let block = |i: usize, j: usize, a: usize, b: usize| -> Complex64 {
        if measured == 1 {
            m.get(2 * i + a, 2 * j + b)
        } else {
            m.get(2 * a + i, 2 * b + j)
        }
    };
    let mut total = 0.0;
    for v in [v1, v2] {
        let mut cond = [[crate::linalg::ZERO; 2]; 2];
        for (i, row) in cond.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = crate::linalg::ZERO;
                for a in 0..2 {
                    for b in 0..2 {
                        acc += v[a].conj() * block(i, j, a, b) * v[b];
                    }
                }
                *entry = acc;
            }
        }
        let pk = (cond[0][0] + cond[1][1]).re;
        if pk < 1e-12 {
            continue;
        }
        let d00 = cond[0][0].re / pk;
        let d11 = cond[1][1].re / pk;
        let det = d00 * d11 - (cond[0][1].norm_sqr()) / (pk * pk);
        let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
        let lambda = ((1.0 - disc) / 2.0).clamp(0.0, 1.0);
        total += pk * binary_entropy(lambda).expect("eigenvalue in [0,1]");
    }
    total
}

/// Grid plus compass-refined minimum of the measured conditional entropy.
/// Grid is 64 theta x 128 phi; refinement halves steps until the objective
/// moves by less than 1e-8.
pub fn min_conditional_entropy(
    rho: &DensityMatrix,
    measured: usize,
) -> Result<(f64, QubitMeasurement)> {
    let mut best = f64::INFINITY;
    let mut best_meas = QubitMeasurement { theta: 0.0, phi: 0.0 };
    for ti in 0..64 {
        let theta = PI * ti as f64 / 63.0;
        for pi_idx in 0..128 {
            let phi = 2.0 * PI * pi_idx as f64 / 128.0;
            let meas = QubitMeasurement { theta, phi };
            let v = conditional_entropy_after_measurement(rho, measured, &meas)?;
            if v < best {
                best = v;
                best_meas = meas;
            }
        }
    }
    // compass refinement with step halving
    let mut step_t = PI / 63.0;
    let mut step_p = 2.0 * PI / 128.0;
    for _ in 0..500 {
        let mut moved = false;
        for (dt, dp) in [(step_t, 0.0), (-step_t, 0.0), (0.0, step_p), (0.0, -step_p)] {
            let cand = QubitMeasurement {
                theta: (best_meas.theta + dt).clamp(0.0, PI),
                phi: (best_meas.phi + dp).rem_euclid(2.0 * PI),
            };
            let v = conditional_entropy_after_measurement(rho, measured, &cand)?;
            if v < best - 1e-15 {
                best = v;
                best_meas = cand;
                moved = true;
            }
        }
        if !moved {
            step_t *= 0.5;
            step_p *= 0.5;
            if step_t < 1e-7 {
                break;
            }
        }
    }
    Ok((best, best_meas))
}

/// Quantum discord D(rest | measured): the projective-measurement minimum of
/// sum_k p_k S(rest|k) minus the conditional entropy S(rho) - S(rho_measured).
pub fn discord(rho: &DensityMatrix, measured: usize) -> Result<(f64, QubitMeasurement)> {
    let (min_cond, meas) = min_conditional_entropy(rho, measured)?;
    let s_total = von_neumann_entropy(rho)?;
    let s_measured = von_neumann_entropy(&partial_trace(rho, &[measured])?)?;
    Ok((min_cond - (s_total - s_measured), meas))
}

/// E_f(focus | rest) through the Koashi-Winter relation: purify with a
/// single-qubit ancilla (rank <= 2 required) and minimize the measured
/// conditional entropy of the (focus, ancilla) pair.
pub fn eof_via_koashi_winter(rho: &DensityMatrix, focus: usize) -> Result<f64> {
    let n = rho.num_subsystems();
    if focus >= n {
        return Err(Error::InvalidSubsystems(format!("focus {focus} out of range 0..{n}")));
    }
    let rank = rho.rank()?;
    if rank == 1 {
        // pure input: the reduced entropy of the dominant eigenvector
        let psi = purify(rho)?; // trivial one-dimensional ancilla
        return eof_pure_bipartite(&psi, &[focus]);
    }
    if rank > 2 {
        return Err(Error::UnsupportedRank { rank, max: 2 });
    }
    let psi = purify(rho)?;
    debug_assert_eq!(*psi.dims().last().unwrap(), 2);
    let rho_fr = partial_trace(&psi.projector(), &[focus, n])?;
    let (value, _) = min_conditional_entropy(&rho_fr, 1)?;
    Ok(value)
}

/// Closed form for E_f(c1 | c2 r1) of the cavity-reservoir output state:
/// h(eta) with eta = (1-q)/2,
/// q = sqrt(1 - 4 beta^2 xi^2 (xi^2 + beta^2 chi^2 - beta^2 xi^2)).
pub fn eof_c1_c2r1_closed_form(alpha: f64, kappa_t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha={alpha} outside [0,1]")));
    }
    if kappa_t < 0.0 {
        return Err(Error::Domain(format!("kappa*t={kappa_t} must be nonnegative")));
    }
    let beta_sq = 1.0 - alpha * alpha;
    let xi_sq = (-kappa_t).exp();
    let chi_sq = 1.0 - xi_sq;
    let radicand =
        1.0 - 4.0 * beta_sq * xi_sq * (xi_sq + beta_sq * chi_sq - beta_sq * xi_sq);
    let q = radicand.max(0.0).sqrt();
    binary_entropy((1.0 - q) / 2.0)
}

/// Numeric rank helper shared with route selection.
pub fn numeric_rank(rho: &DensityMatrix) -> Result<usize> {
    let (evals, _) = crate::linalg::hermitian_eigendecompose(rho.matrix())?;
    Ok(evals.iter().filter(|&&l| l > EIGEN_CLAMP).count().max(1))
}
