//! Convex-roof minimization over pure-state decompositions.
//!
//! A rank-r density matrix is decomposed through an m x r isometry applied to
//! its weighted eigenvectors. The isometry is the first r columns of a
//! unitary built from Givens rotations with phases, parametrized by a real
//! vector, and minimized by seeded random-restart simplex descent. The
//! returned value is an upper bound on the true convex roof; restart 0 starts
//! at the spectral decomposition so the bound never exceeds the spectral
//! cost.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecompose, CMatrix, DensityMatrix, PureState, EIGEN_CLAMP, ZERO,
};
use crate::measures::{eof_pure_bipartite, three_tangle_pure};
use crate::rng::{Seed, SplitMix64};
use crate::states::psi_j_p;

/// Probability-weighted list of pure states reproducing a target matrix.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub probabilities: Vec<f64>,
    pub components: Vec<PureState>,
}

impl Decomposition {
    pub fn mixture(&self) -> Result<DensityMatrix> {
        let terms: Vec<(f64, PureState)> = self
            .probabilities
            .iter()
            .copied()
            .zip(self.components.iter().cloned())
            .collect();
        DensityMatrix::mixture(&terms)
    }

    /// Frobenius distance between the reassembled mixture and `target`.
    pub fn reassembly_error(&self, target: &DensityMatrix) -> Result<f64> {
        Ok(self.mixture()?.matrix().frobenius_diff(target.matrix()))
    }

    /// Probability-weighted average of a pure-state functional.
    pub fn average<F: Fn(&PureState) -> f64>(&self, f: F) -> f64 {
        self.probabilities
            .iter()
            .zip(&self.components)
            .filter(|(p, _)| **p > 1e-14)
            .map(|(p, psi)| p * f(psi))
            .sum()
    }
}

/// Optimizer configuration. `ensemble_size` defaults to min(rank^2, 8).
#[derive(Clone, Copy, Debug)]
pub struct RoofConfig {
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub tol: f64,
    pub seed: Seed,
}

impl Default for RoofConfig {
    fn default() -> Self {
        RoofConfig {
            ensemble_size: None,
            restarts: 32,
            max_sweeps: 2000,
            tol: 1e-8,
            seed: Seed::default(),
        }
    }
}

impl RoofConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts.max(1);
        self
    }

    pub fn with_seed(mut self, seed: Seed) -> Self {
        self.seed = seed;
        self
    }
}

/// Minimization outcome; `converged` is false when a restart exhausted the
/// sweep budget while still improving.
#[derive(Clone, Debug)]
pub struct RoofOutcome {
    pub value: f64,
    pub decomposition: Decomposition,
    pub converged: bool,
}

struct Spectral {
    evals: Vec<f64>,
    vecs: CMatrix,
    rank: usize,
}

fn spectral(rho: &DensityMatrix) -> Result<Spectral> {
    let (evals, vecs) = hermitian_eigendecompose(rho.matrix())?;
    let rank = evals.iter().filter(|&&l| l > EIGEN_CLAMP).count().max(1);
    Ok(Spectral { evals, vecs, rank })
}

/// Ensemble {p_i, |psi_i>} from an m x r isometry W applied to the weighted
/// eigenvectors: |u_i> = sum_k W(i,k) sqrt(lambda_k) |v_k>.
pub fn decomposition_from_isometry(rho: &DensityMatrix, w: &CMatrix) -> Result<Decomposition> {
    let spec = spectral(rho)?;
    if w.cols() != spec.rank {
        return Err(Error::DimensionMismatch { expected: spec.rank, got: w.cols() });
    }
    if w.rows() < w.cols() {
        return Err(Error::Domain(format!(
            "isometry must be tall, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    let gram = w.adjoint().mul(w);
    let defect = gram.max_abs_diff(&CMatrix::identity(w.cols()));
    if defect > 1e-9 {
        return Err(Error::NotIsometry(defect));
    }
    Ok(build_ensemble(rho, &spec, w))
}

fn build_ensemble(rho: &DensityMatrix, spec: &Spectral, w: &CMatrix) -> Decomposition {
    let n = rho.dim();
    let m = w.rows();
    let mut probabilities = Vec::with_capacity(m);
    let mut components = Vec::with_capacity(m);
    for i in 0..m {
        let mut amps = vec![ZERO; n];
        for k in 0..spec.rank {
            let wk = w.get(i, k) * spec.evals[k].max(0.0).sqrt();
            if wk == ZERO {
                continue;
            }
            for (x, amp) in amps.iter_mut().enumerate() {
                *amp += wk * spec.vecs.get(x, k);
            }
        }
        let p: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if p > 1e-14 {
            let inv = 1.0 / p.sqrt();
            for a in &mut amps {
                *a *= inv;
            }
            probabilities.push(p);
            components.push(PureState::normalized(amps, rho.dims().to_vec()).expect("normalized"));
        } else {
            // zero-weight member: keep the slot with the leading eigenvector
            probabilities.push(0.0);
            components.push(
                PureState::normalized(spec.vecs.column(0), rho.dims().to_vec())
                    .expect("eigenvector is normalized"),
            );
        }
    }
    Decomposition { probabilities, components }
}

/// Unitary from a parameter vector: a phased Givens rotation for every index
/// pair, parameter layout [(theta, phi) per pair (i<j)]. Together with the
/// row phases (irrelevant to the ensemble, so not parametrized) this spans
/// the unitary group.
fn unitary_from_params(m: usize, params: &[f64]) -> CMatrix {
    let mut u = CMatrix::identity(m);
    let mut idx = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            let theta = params[idx];
            let phi = params[idx + 1];
            idx += 2;
            let (s, c) = theta.sin_cos();
            let e = Complex64::from_polar(1.0, phi);
            // right-multiply by G(i,j): touches columns i and j
            for row in 0..m {
                let ui = u.get(row, i);
                let uj = u.get(row, j);
                u.set(row, i, ui * c - uj * e.conj() * s);
                u.set(row, j, ui * e * s + uj * c);
            }
        }
    }
    u
}

fn param_count(m: usize) -> usize {
    m * (m - 1)
}

fn isometry_from_params(m: usize, r: usize, params: &[f64]) -> CMatrix {
    let u = unitary_from_params(m, params);
    let mut w = CMatrix::zeros(m, r);
    for i in 0..m {
        for k in 0..r {
            w.set(i, k, u.get(i, k));
        }
    }
    w
}

/// Minimize the probability-weighted average of `f` over pure-state
/// decompositions of `rho`. Deterministic given (rho, config, seed).
pub fn minimize_roof<F: Fn(&PureState) -> f64>(
    rho: &DensityMatrix,
    f: F,
    config: &RoofConfig,
) -> Result<RoofOutcome> {
    let spec = spectral(rho)?;
    let r = spec.rank;

    if r == 1 {
        let psi = PureState::normalized(spec.vecs.column(0), rho.dims().to_vec())?;
        let value = f(&psi);
        return Ok(RoofOutcome {
            value,
            decomposition: Decomposition { probabilities: vec![1.0], components: vec![psi] },
            converged: true,
        });
    }

    let m = config.ensemble_size.unwrap_or_else(|| (r * r).min(8)).max(r);
    let np = param_count(m);
    let evaluate = |params: &[f64]| -> f64 {
        let w = isometry_from_params(m, r, params);
        build_ensemble(rho, &spec, &w).average(&f)
    };

    let mut best_value = f64::INFINITY;
    let mut best_params = vec![0.0; np];
    let mut all_converged = true;

    for restart in 0..config.restarts.max(1) {
        let mut start = vec![0.0; np];
        if restart > 0 {
            let mut rng = SplitMix64::substream(config.seed, restart as u64);
            for p in start.iter_mut() {
                *p = (rng.next_f64() - 0.5) * std::f64::consts::PI;
            }
        }
        let (value, params, converged) =
            nelder_mead(&evaluate, &start, 0.6, config.max_sweeps, config.tol);
        all_converged &= converged;
        if value < best_value {
            best_value = value;
            best_params = params;
        }
    }

    // re-seeded simplex polish around the winning restart
    for step in [0.05, 0.005] {
        let (value, params, converged) =
            nelder_mead(&evaluate, &best_params, step, config.max_sweeps, config.tol);
        all_converged &= converged;
        if value < best_value {
            best_value = value;
            best_params = params;
        }
    }

    let w = isometry_from_params(m, r, &best_params);
    let decomposition = build_ensemble(rho, &spec, &w);
    Ok(RoofOutcome { value: best_value, decomposition, converged: all_converged })
}

/// Standard Nelder-Mead simplex descent (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Returns (value, point, converged).
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    start: &[f64],
    initial_step: f64,
    max_iters: usize,
    tol: f64,
) -> (f64, Vec<f64>, bool) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for k in 0..n {
        let mut x = start.to_vec();
        x[k] += initial_step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let mut converged = false;

    for _ in 0..max_iters {
        // order best..worst
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        if values[worst] - values[best] < tol {
            converged = true;
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for &i in order.iter().take(n) {
            for (c, xi) in centroid.iter_mut().zip(&simplex[i]) {
                *c += xi / n as f64;
            }
        }

        let blend = |a: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + a * (c - w))
                .collect()
        };

        let reflected = blend(1.0);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = blend(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        let contracted = if fr < values[worst] { blend(0.5) } else { blend(-0.5) };
        let fc = f(&contracted);
        if fc < values[worst].min(fr) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let anchor = simplex[best].clone();
        for i in 0..=n {
            if i == best {
                continue;
            }
            for (xi, ai) in simplex[i].iter_mut().zip(&anchor) {
                *xi = ai + 0.5 * (*xi - ai);
            }
            values[i] = f(&simplex[i]);
        }
    }

    let mut best_idx = 0;
    for i in 1..=n {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    (values[best_idx], simplex[best_idx].clone(), converged)
}

/// Convex-roof upper bound on E_f across `left`|rest of a mixed state.
pub fn eof_mixed(rho: &DensityMatrix, left: &[usize], config: &RoofConfig) -> Result<f64> {
    let left = left.to_vec();
    let out = minimize_roof(
        rho,
        move |psi| eof_pure_bipartite(psi, &left).expect("valid partition"),
        config,
    )?;
    Ok(out.value)
}

/// Indicator tau1: minimized decomposition average of the pure-state
/// squared-EoF residual at `focus`.
pub fn tau1_mixed(rho: &DensityMatrix, focus: usize, config: &RoofConfig) -> Result<f64> {
    if focus >= rho.num_subsystems() {
        return Err(Error::InvalidSubsystems(format!("focus {focus} out of range")));
    }
    let out = minimize_roof(
        rho,
        move |psi| crate::indicators::tau1_pure(psi, focus).expect("qubit state"),
        config,
    )?;
    Ok(out.value)
}

/// Lemma-2 global indicator: minimized decomposition average of the mean
/// residual over all focus qubits.
pub fn tau1_global(rho: &DensityMatrix, config: &RoofConfig) -> Result<f64> {
    let n = rho.num_subsystems();
    let out = minimize_roof(
        rho,
        move |psi| {
            (0..n)
                .map(|l| crate::indicators::tau1_pure(psi, l).expect("qubit state"))
                .sum::<f64>()
                / n as f64
        },
        config,
    )?;
    Ok(out.value)
}

/// Convex-roof upper bound on the mixed three-tangle.
pub fn three_tangle_mixed(rho: &DensityMatrix, config: &RoofConfig) -> Result<f64> {
    if rho.dims() != [2, 2, 2] {
        return Err(Error::InvalidSubsystems("three_tangle_mixed requires three qubits".into()));
    }
    let out = minimize_roof(rho, |psi| three_tangle_pure(psi).expect("three qubits"), config)?;
    Ok(out.value)
}

/// Zero of the pure three-tangle on the GHZ/W superposition family,
/// bisecting on the slope sign in [0.5, 0.7] (the tangle touches zero
/// without changing sign).
pub fn find_p0() -> f64 {
    let tangle = |p: f64| three_tangle_pure(&psi_j_p(0, p).expect("valid p")).expect("3 qubits");
    let fd = 1e-6;
    let (mut lo, mut hi) = (0.5f64, 0.7f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let slope = tangle(mid + fd) - tangle(mid - fd);
        if slope < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
