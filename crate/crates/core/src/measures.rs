//! Scalar entanglement measures: entropies, concurrence, entanglement of
//! formation, the squared-EoF function of squared concurrence with its first
//! and second derivatives, and the three-tangle.
//!
//! Logarithms are base 2 (bits) except inside the verbatim derivative
//! formulas, which carry explicit ln and ln^2(2) factors.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecompose, matrix_sqrt_psd, partial_trace, CMatrix, DensityMatrix, PureState,
    EIGEN_CLAMP,
};
use num_complex::Complex64;

const LN2: f64 = std::f64::consts::LN_2;
const DOMAIN_SLACK: f64 = 1e-12;

/// ArcTanh(sqrt(1-x)) for x in (0,1): ln((1+y)/(1-y))/2 with the
/// denominator rewritten through 1 - sqrt(1-x) = x/(1 + sqrt(1-x)), so both
/// endpoint singularities evaluate without cancellation.
fn atanh_sqrt_one_minus(x: f64) -> f64 {
    let y = (1.0 - x).sqrt();
    (1.0 + y).ln() - 0.5 * x.ln()
}

/// h(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 := 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(Error::Domain(format!("binary_entropy argument {x} outside [0,1]")));
    }
    let x = x.clamp(0.0, 1.0);
    let mut h = 0.0;
    if x > 0.0 {
        h -= x * x.log2();
    }
    if x < 1.0 {
        h -= (1.0 - x) * (1.0 - x).log2();
    }
    Ok(h)
}

/// Von Neumann entropy in bits; eigenvalues below the clamp contribute 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let (evals, _) = hermitian_eigendecompose(rho.matrix())?;
    Ok(evals
        .iter()
        .filter(|&&l| l > EIGEN_CLAMP)
        .map(|&l| -l * l.log2())
        .sum())
}

fn sigma_y_pair() -> CMatrix {
    let mut sy = CMatrix::zeros(2, 2);
    sy.set(0, 1, Complex64::new(0.0, -1.0));
    sy.set(1, 0, Complex64::new(0.0, 1.0));
    sy.kron(&sy)
}

/// Wootters concurrence of a two-qubit density matrix via the Hermitian
/// equivalent sqrt(rho) rho~ sqrt(rho).
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::InvalidSubsystems(format!(
            "concurrence_two_qubit requires dims [2,2], got {:?}",
            rho.dims()
        )));
    }
    let yy = sigma_y_pair();
    let rho_tilde = yy.mul(&rho.matrix().conj()).mul(&yy);
    let root = matrix_sqrt_psd(rho.matrix())?;
    let r = root.mul(&rho_tilde).mul(&root);
    let (evals, _) = hermitian_eigendecompose(&r)?;
    // Exact zeros of the rank-deficient product come back as O(eps) noise;
    // the square root would amplify them to ~1e-8, so clamp relative to the
    // leading eigenvalue.
    let floor = evals[0].max(0.0) * 1e-13;
    let sq: Vec<f64> = evals.iter().map(|&l| if l > floor { l.sqrt() } else { 0.0 }).collect();
    Ok((sq[0] - sq[1] - sq[2] - sq[3]).max(0.0))
}

/// Bipartite concurrence of a pure state across `left`|rest:
/// sqrt(2 (1 - tr rho_left^2)).
pub fn concurrence_pure_bipartite(psi: &PureState, left: &[usize]) -> Result<f64> {
    let rho = psi.reduced(left)?;
    Ok((2.0 * (1.0 - rho.purity())).max(0.0).sqrt())
}

/// Wootters formula E_f = h((1 + sqrt(1 - C^2))/2).
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&c) {
        return Err(Error::Domain(format!("concurrence {c} outside [0,1]")));
    }
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// Two-qubit entanglement of formation (concurrence composed with the
/// Wootters formula).
pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    eof_from_concurrence(concurrence_two_qubit(rho)?)
}

/// E_f of a pure state across `left`|rest: the reduced-state entropy.
pub fn eof_pure_bipartite(psi: &PureState, left: &[usize]) -> Result<f64> {
    von_neumann_entropy(&psi.reduced(left)?)
}

/// E_f^2 as a function of squared concurrence x: [h((1+sqrt(1-x))/2)]^2.
pub fn sef(x: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(Error::Domain(format!("squared concurrence {x} outside [0,1]")));
    }
    let x = x.clamp(0.0, 1.0);
    let e = binary_entropy((1.0 + (1.0 - x).sqrt()) / 2.0)?;
    Ok(e * e)
}

fn require_open_unit(x: f64, what: &str) -> Result<()> {
    if x <= 0.0 || x >= 1.0 || !x.is_finite() {
        return Err(Error::Domain(format!("{what} argument {x} outside (0,1)")));
    }
    Ok(())
}

/// First derivative d(E_f^2)/dx in the factored form T1 T2 T3.
pub fn sef_d1(x: f64) -> Result<f64> {
    require_open_unit(x, "sef_d1")?;
    let s = (1.0 - x).sqrt();
    let t1 = -1.0 / (2.0 * s * LN2 * LN2);
    // ln(sqrt(x)/(1 - sqrt(1-x))) = ln((1 + sqrt(1-x))/sqrt(x)), which is
    // also ArcTanh(sqrt(1-x)); the rewritten form is stable at both ends.
    let t2 = atanh_sqrt_one_minus(x);
    let t3 = 2.0 * s * t2 + (x / 4.0).ln();
    Ok(t1 * t2 * t3)
}

/// Second derivative d^2(E_f^2)/dx^2 = g(x) M(x).
pub fn sef_d2(x: f64) -> Result<f64> {
    require_open_unit(x, "sef_d2")?;
    let g = 1.0 / (4.0 * (1.0 - x).powf(1.5) * x * LN2 * LN2);
    Ok(g * m_function(x)?)
}

/// M(x) = sqrt(1-x) ln(x/4) - ArcTanh(sqrt(1-x)) [2x - 2 + x ln(x/4)].
pub fn m_function(x: f64) -> Result<f64> {
    require_open_unit(x, "m_function")?;
    let s = (1.0 - x).sqrt();
    let l = (x / 4.0).ln();
    Ok(s * l - atanh_sqrt_one_minus(x) * (2.0 * x - 2.0 + x * l))
}

/// Critical point of M: x_c = 4/e^3.
pub fn m_function_critical_x() -> f64 {
    4.0 * (-3.0f64).exp()
}

/// Limit of sef_d2 as x -> 1: (3 - ln 4)/(6 ln^2 2).
pub fn sef_d2_limit_at_one() -> f64 {
    (3.0 - 4.0f64.ln()) / (6.0 * LN2 * LN2)
}

/// Pure three-qubit tangle: C^2(A|BC) - C^2(AB) - C^2(AC).
pub fn three_tangle_pure(psi: &PureState) -> Result<f64> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::InvalidSubsystems(format!(
            "three_tangle_pure requires three qubits, got {:?}",
            psi.dims()
        )));
    }
    ckw_residual_pure(psi, 0)
}

/// CKW residual C^2(focus|rest) - sum_j C^2(focus, j) for an N-qubit pure
/// state; nonnegative up to numerical noise.
pub fn ckw_residual_pure(psi: &PureState, focus: usize) -> Result<f64> {
    let n = psi.num_subsystems();
    if psi.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidSubsystems("ckw_residual_pure requires qubits".into()));
    }
    if focus >= n {
        return Err(Error::InvalidSubsystems(format!("focus {focus} out of range 0..{n}")));
    }
    let big = concurrence_pure_bipartite(psi, &[focus])?;
    let mut resid = big * big;
    for j in 0..n {
        if j == focus {
            continue;
        }
        let mut keep = [focus, j];
        keep.sort_unstable();
        let pair = partial_trace(&psi.projector(), &keep)?;
        let c = concurrence_two_qubit(&pair)?;
        resid -= c * c;
    }
    Ok(resid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{tensor_product_states, ONE, ZERO};
    use crate::rng::{Seed, SplitMix64};
    use crate::states::{ghz3, haar_random_pure, psi_j_p, w3};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)], vec![2, 2]).unwrap()
    }

    #[test]
    fn binary_entropy_basics() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        // symmetry
        for x in [0.1, 0.25, 0.4] {
            assert!((binary_entropy(x).unwrap() - binary_entropy(1.0 - x).unwrap()).abs() < 1e-14);
        }
        // h(0.872678) ~ 0.5500: the W-pair EoF cross-check
        let h = binary_entropy(0.872678).unwrap();
        assert!((h - 0.5500).abs() < 1e-4, "h = {h}");
        let viac = eof_from_concurrence(2.0 / 3.0).unwrap();
        assert!((viac - 0.5500477595827576).abs() < 1e-12);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn von_neumann_entropy_cases() {
        let pure = bell().reduced(&[0, 1]);
        assert!(von_neumann_entropy(&pure.unwrap()).unwrap().abs() < 1e-10);
        let mixed = bell().reduced(&[0]).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-10);
        // diag(3/4, 1/4) -> h(1/4)
        let mut m = CMatrix::zeros(2, 2);
        m.set(0, 0, c(0.75, 0.0));
        m.set(1, 1, c(0.25, 0.0));
        let rho = DensityMatrix::new(m, vec![2]).unwrap();
        assert!(
            (von_neumann_entropy(&rho).unwrap() - binary_entropy(0.25).unwrap()).abs() < 1e-12
        );
    }

    #[test]
    fn concurrence_bell_and_product() {
        assert!((concurrence_two_qubit(&bell().projector()).unwrap() - 1.0).abs() < 1e-9);
        let zero = PureState::new(vec![ONE, ZERO], vec![2]).unwrap();
        let prod = tensor_product_states(&zero, &zero);
        assert!(concurrence_two_qubit(&prod.projector()).unwrap() < 1e-9);
        let wrong = DensityMatrix::new_unchecked(CMatrix::identity(2).scale(0.5), vec![2]);
        assert!(concurrence_two_qubit(&wrong).is_err());
    }

    #[test]
    fn concurrence_w3_pair_is_two_thirds() {
        let pair = partial_trace(&w3().projector(), &[0, 1]).unwrap();
        let c = concurrence_two_qubit(&pair).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-9, "C = {c}");
    }

    #[test]
    fn concurrence_pure_matches_wootters_on_two_qubits() {
        let mut rng = SplitMix64::new(2);
        for i in 0..20 {
            let _ = rng.next_u64();
            let psi = haar_random_pure(&[2, 2], Seed(1000 + i)).unwrap();
            let via_purity = concurrence_pure_bipartite(&psi, &[0]).unwrap();
            let via_wootters = concurrence_two_qubit(&psi.projector()).unwrap();
            assert!(
                (via_purity - via_wootters).abs() < 1e-9,
                "mismatch {via_purity} vs {via_wootters}"
            );
        }
    }

    #[test]
    fn w_state_bipartite_concurrence() {
        // C(A1|rest) of W_N is sqrt(4(N-1))/N
        for n in [3usize, 5, 8] {
            let w = crate::states::w_n(n).unwrap();
            let c = concurrence_pure_bipartite(&w, &[0]).unwrap();
            let expect = (4.0 * (n as f64 - 1.0)).sqrt() / n as f64;
            assert!((c - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn eof_from_concurrence_limits() {
        assert!((eof_from_concurrence(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(eof_from_concurrence(0.0).unwrap().abs() < 1e-15);
        assert!(eof_from_concurrence(1.5).is_err());
    }

    #[test]
    fn eof_two_qubit_cases() {
        assert!((eof_two_qubit(&bell().projector()).unwrap() - 1.0).abs() < 1e-9);
        // diagonal Bell mixture with zero concurrence
        let mut m = CMatrix::zeros(4, 4);
        m.set(0, 0, c(0.5, 0.0));
        m.set(3, 3, c(0.5, 0.0));
        let rho = DensityMatrix::new(m, vec![2, 2]).unwrap();
        assert!(eof_two_qubit(&rho).unwrap() < 1e-9);
    }

    #[test]
    fn eof_pure_bipartite_cases() {
        assert!((eof_pure_bipartite(&ghz3(), &[0]).unwrap() - 1.0).abs() < 1e-10);
        let w_ef = eof_pure_bipartite(&w3(), &[0]).unwrap();
        assert!((w_ef - binary_entropy(1.0 / 3.0).unwrap()).abs() < 1e-10);
        assert!((w_ef - 0.9182958340544896).abs() < 1e-10);
        // both sides agree
        let mut rng = SplitMix64::new(4);
        let _ = rng.next_u64();
        for i in 0..10 {
            let psi = haar_random_pure(&[2, 2, 2], Seed(2000 + i)).unwrap();
            let a = eof_pure_bipartite(&psi, &[0]).unwrap();
            let b = eof_pure_bipartite(&psi, &[1, 2]).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn eof_consistency_of_entropy_and_wootters_on_pure_pairs() {
        for i in 0..20 {
            let psi = haar_random_pure(&[2, 2], Seed(3000 + i)).unwrap();
            let via_entropy = eof_pure_bipartite(&psi, &[0]).unwrap();
            let via_formula =
                eof_from_concurrence(concurrence_two_qubit(&psi.projector()).unwrap()).unwrap();
            assert!((via_entropy - via_formula).abs() < 1e-9);
        }
    }

    #[test]
    fn sef_endpoints_and_monotonicity() {
        assert!((sef(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(sef(0.0).unwrap().abs() < 1e-15);
        let mut prev = -1.0;
        for k in 1..200 {
            let v = sef(k as f64 / 200.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn sef_d1_matches_central_differences() {
        let step = 1e-6;
        for k in 1..99 {
            let x = k as f64 / 100.0;
            let fd = (sef(x + step).unwrap() - sef(x - step).unwrap()) / (2.0 * step);
            let an = sef_d1(x).unwrap();
            assert!(
                (fd - an).abs() <= 1e-6 * an.abs().max(1.0),
                "x={x}: analytic {an} vs fd {fd}"
            );
        }
    }

    #[test]
    fn sef_d2_matches_central_differences() {
        let step = 1e-4;
        for k in 2..98 {
            let x = k as f64 / 100.0;
            let fd = (sef_d1(x + step).unwrap() - sef_d1(x - step).unwrap()) / (2.0 * step);
            let an = sef_d2(x).unwrap();
            assert!(
                ((fd - an) / an.abs().max(1.0)).abs() < 1e-5,
                "x={x}: analytic {an} vs fd {fd}"
            );
        }
    }

    #[test]
    fn sef_d2_limit_value() {
        let lim = sef_d2_limit_at_one();
        assert!((lim - 0.55979).abs() < 1e-4);
        // evaluating just inside the boundary approaches the limit
        let near = sef_d2(1.0 - 1e-6).unwrap();
        assert!((near - lim).abs() < 1e-5, "sef_d2(1-1e-6) = {near}");
    }

    #[test]
    fn m_function_endpoints_and_argmax() {
        // endpoint limits are 0
        assert!(m_function(1e-12).unwrap().abs() < 1e-9);
        assert!(m_function(1.0 - 1e-12).unwrap().abs() < 1e-9);
        // positive inside, maximized at 4/e^3
        let xc = m_function_critical_x();
        assert!((xc - 0.199).abs() < 1e-3);
        let mut best_x = 0.0;
        let mut best = f64::MIN;
        for k in 1..1000 {
            let x = k as f64 / 1000.0;
            let v = m_function(x).unwrap();
            assert!(v > 0.0, "M({x}) = {v}");
            if v > best {
                best = v;
                best_x = x;
            }
        }
        assert!((best_x - xc).abs() <= 1e-3, "argmax {best_x} vs {xc}");
        assert!(m_function(0.0).is_err());
        assert!(m_function(1.0).is_err());
    }

    #[test]
    fn three_tangle_named_states() {
        assert!((three_tangle_pure(&ghz3()).unwrap() - 1.0).abs() < 1e-9);
        assert!(three_tangle_pure(&w3()).unwrap().abs() < 1e-9);
        let four = haar_random_pure(&[2, 2, 2, 2], Seed(1)).unwrap();
        assert!(three_tangle_pure(&four).is_err());
    }

    /// Cayley hyperdeterminant route: an independent oracle for the pure
    /// three-tangle, tau = 4 |d1 - 2 d2 + 4 d3|.
    fn tangle_via_hyperdeterminant(psi: &PureState) -> f64 {
        let a = psi.amplitudes();
        let idx = |i: usize, j: usize, k: usize| a[(i << 2) | (j << 1) | k];
        let d1 = idx(0, 0, 0).powu(2) * idx(1, 1, 1).powu(2)
            + idx(0, 0, 1).powu(2) * idx(1, 1, 0).powu(2)
            + idx(0, 1, 0).powu(2) * idx(1, 0, 1).powu(2)
            + idx(1, 0, 0).powu(2) * idx(0, 1, 1).powu(2);
        let d2 = idx(0, 0, 0) * idx(1, 1, 1) * idx(0, 1, 1) * idx(1, 0, 0)
            + idx(0, 0, 0) * idx(1, 1, 1) * idx(1, 0, 1) * idx(0, 1, 0)
            + idx(0, 0, 0) * idx(1, 1, 1) * idx(1, 1, 0) * idx(0, 0, 1)
            + idx(0, 1, 1) * idx(1, 0, 0) * idx(1, 0, 1) * idx(0, 1, 0)
            + idx(0, 1, 1) * idx(1, 0, 0) * idx(1, 1, 0) * idx(0, 0, 1)
            + idx(1, 0, 1) * idx(0, 1, 0) * idx(1, 1, 0) * idx(0, 0, 1);
        let d3 = idx(0, 0, 0) * idx(1, 1, 0) * idx(1, 0, 1) * idx(0, 1, 1)
            + idx(1, 1, 1) * idx(0, 0, 1) * idx(0, 1, 0) * idx(1, 0, 0);
        4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm()
    }

    #[test]
    fn three_tangle_matches_hyperdeterminant_oracle() {
        for i in 0..30 {
            let psi = haar_random_pure(&[2, 2, 2], Seed(4000 + i)).unwrap();
            let resid = three_tangle_pure(&psi).unwrap();
            let hdet = tangle_via_hyperdeterminant(&psi);
            assert!(
                (resid - hdet).abs() < 1e-8,
                "residual {resid} vs hyperdeterminant {hdet}"
            );
        }
        // and on the GHZ/W superposition family
        for (i, p) in [0.2, 0.45, 0.66, 0.9].iter().enumerate() {
            let psi = psi_j_p(i % 3, *p).unwrap();
            let resid = three_tangle_pure(&psi).unwrap();
            let hdet = tangle_via_hyperdeterminant(&psi);
            assert!((resid - hdet).abs() < 1e-9);
        }
    }

    #[test]
    fn three_tangle_focus_invariance() {
        for i in 0..10 {
            let psi = haar_random_pure(&[2, 2, 2], Seed(5000 + i)).unwrap();
            let t0 = ckw_residual_pure(&psi, 0).unwrap();
            let t1 = ckw_residual_pure(&psi, 1).unwrap();
            let t2 = ckw_residual_pure(&psi, 2).unwrap();
            assert!((t0 - t1).abs() < 1e-9 && (t0 - t2).abs() < 1e-9);
        }
    }

    #[test]
    fn ckw_residual_cases() {
        let zero = PureState::new(vec![ONE, ZERO], vec![2]).unwrap();
        let prod = tensor_product_states(&tensor_product_states(&zero, &zero), &zero);
        assert!(ckw_residual_pure(&prod, 0).unwrap().abs() < 1e-10);
        assert!((ckw_residual_pure(&ghz3(), 0).unwrap() - 1.0).abs() < 1e-9);
        for i in 0..50 {
            let psi = haar_random_pure(&[2, 2, 2, 2], Seed(6000 + i)).unwrap();
            assert!(ckw_residual_pure(&psi, 0).unwrap() >= -1e-9);
        }
    }
}
