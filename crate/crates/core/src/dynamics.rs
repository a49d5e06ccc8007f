//! Cavity-reservoir entanglement dynamics and the LOCC non-monotonicity
//! counterexample.
//!
//! The composite system is two cavity-reservoir pairs in the pure state of
//! [`crate::states::cavity_output`], qubit order (c1, r1, c2, r2).

use crate::discord::{eof_c1_c2r1_closed_form, eof_via_koashi_winter, numeric_rank};
use crate::error::{Error, Result};
use crate::indicators::IndicatorReport;
use crate::linalg::{partial_trace, CMatrix, DensityMatrix, ONE};
use crate::measures::eof_two_qubit;
use crate::roof::{eof_mixed, RoofConfig};
use crate::states::cavity_output;

/// Cavity family parameters with the derived amplitudes.
#[derive(Clone, Copy, Debug)]
pub struct CavityParams {
    pub alpha: f64,
    pub kappa_t: f64,
}

impl CavityParams {
    pub fn new(alpha: f64, kappa_t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha={alpha} outside [0,1]")));
        }
        if kappa_t < 0.0 {
            return Err(Error::Domain(format!("kappa*t={kappa_t} must be nonnegative")));
        }
        Ok(CavityParams { alpha, kappa_t })
    }

    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).sqrt()
    }

    pub fn xi(&self) -> f64 {
        (-self.kappa_t / 2.0).exp()
    }

    pub fn chi(&self) -> f64 {
        (1.0 - (-self.kappa_t).exp()).sqrt()
    }
}

/// Two-outcome diagonal POVM on one qubit: M1 = diag(a, b),
/// M2 = diag(sqrt(1-a^2), sqrt(1-b^2)).
#[derive(Clone, Copy, Debug)]
pub struct PovmPair {
    pub a: f64,
    pub b: f64,
}

impl PovmPair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a == 0.0 && b == 0.0 {
            return Err(Error::Domain(format!("POVM parameters (a={a}, b={b}) outside (0,1]")));
        }
        Ok(PovmPair { a, b })
    }

    pub fn operators(&self) -> (CMatrix, CMatrix) {
        let mut m1 = CMatrix::zeros(2, 2);
        m1.set(0, 0, ONE * self.a);
        m1.set(1, 1, ONE * self.b);
        let mut m2 = CMatrix::zeros(2, 2);
        m2.set(0, 0, ONE * (1.0 - self.a * self.a).sqrt());
        m2.set(1, 1, ONE * (1.0 - self.b * self.b).sqrt());
        (m1, m2)
    }

    /// max |M1^dag M1 + M2^dag M2 - I|.
    pub fn completeness_defect(&self) -> f64 {
        let (m1, m2) = self.operators();
        let sum = m1.adjoint().mul(&m1).add(&m2.adjoint().mul(&m2));
        sum.max_abs_diff(&CMatrix::identity(2))
    }
}

/// Applies the two-outcome POVM on `subsystem`; returns the branch
/// probabilities and normalized post-measurement states.
pub fn apply_local_povm(
    rho: &DensityMatrix,
    subsystem: usize,
    povm: &PovmPair,
) -> Result<Vec<(f64, DensityMatrix)>> {
    let dims = rho.dims();
    if subsystem >= dims.len() || dims[subsystem] != 2 {
        return Err(Error::InvalidSubsystems(format!(
            "POVM subsystem {subsystem} must be a qubit of {dims:?}"
        )));
    }
    let defect = povm.completeness_defect();
    if defect > 1e-12 {
        return Err(Error::Domain(format!("POVM completeness defect {defect:.3e}")));
    }
    let (m1, m2) = povm.operators();
    let mut out = Vec::with_capacity(2);
    for m in [m1, m2] {
        let mut full = CMatrix::identity(1);
        for (k, &d) in dims.iter().enumerate() {
            if k == subsystem {
                full = full.kron(&m);
            } else {
                full = full.kron(&CMatrix::identity(d));
            }
        }
        let branch = full.mul(rho.matrix()).mul(&full.adjoint());
        let p = branch.trace().re;
        if p > 1e-14 {
            out.push((p, DensityMatrix::new_unchecked(branch.scale(1.0 / p), dims.to_vec())));
        } else {
            out.push((0.0, rho.clone()));
        }
    }
    Ok(out)
}

/// One cell of the Fig.-2 surface.
#[derive(Clone, Copy, Debug)]
pub struct Fig2Cell {
    pub alpha: f64,
    pub kappa_t: f64,
    /// E_f^2(c1|c2 r1) from the closed form.
    pub ef2_big: f64,
    pub ef2_c1c2: f64,
    pub ef2_c1r1: f64,
    pub tau2: f64,
}

impl Fig2Cell {
    pub fn report(&self) -> IndicatorReport {
        IndicatorReport {
            name: "tau2[c1|c2r1]".into(),
            value: self.tau2,
            components: vec![
                ("ef2_c1|c2r1".into(), self.ef2_big, 1.0),
                ("ef2_c1c2".into(), self.ef2_c1c2, -1.0),
                ("ef2_c1r1".into(), self.ef2_c1r1, -1.0),
            ],
            metadata: vec![
                ("alpha".into(), format!("{:.12e}", self.alpha)),
                ("kappa_t".into(), format!("{:.12e}", self.kappa_t)),
            ],
        }
    }
}

/// tau2(c1|c2 r1) surface over the (alpha, kappa t) grid. The one-vs-rest
/// term uses the closed form; the pair terms are Wootters values on reduced
/// states of the pure four-qubit output. Cells are emitted row-major in
/// (alpha, kappa_t) order.
pub fn tau2_grid_c1_c2r1(alphas: &[f64], kappa_ts: &[f64]) -> Result<Vec<Fig2Cell>> {
    let mut out = Vec::with_capacity(alphas.len() * kappa_ts.len());
    for &alpha in alphas {
        for &kt in kappa_ts {
            let params = CavityParams::new(alpha, kt)?;
            let psi = cavity_output(params.alpha, params.kappa_t)?;
            let rho = psi.projector();
            let big = eof_c1_c2r1_closed_form(alpha, kt)?;
            // qubit order (c1, r1, c2, r2): c1c2 = {0, 2}, c1r1 = {0, 1}
            let e_c1c2 = eof_two_qubit(&partial_trace(&rho, &[0, 2])?)?;
            let e_c1r1 = eof_two_qubit(&partial_trace(&rho, &[0, 1])?)?;
            out.push(Fig2Cell {
                alpha,
                kappa_t: kt,
                ef2_big: big * big,
                ef2_c1c2: e_c1c2 * e_c1c2,
                ef2_c1r1: e_c1r1 * e_c1r1,
                tau2: big * big - e_c1c2 * e_c1c2 - e_c1r1 * e_c1r1,
            });
        }
    }
    Ok(out)
}

/// Outcome of the LOCC counterexample at the fixed parameters
/// alpha = 9/10, kappa t = 0.9, POVM (a, b) = (4/5, 3/7) on c1.
#[derive(Clone, Debug)]
pub struct LoccReport {
    pub tau2_before: f64,
    pub branch_probabilities: [f64; 2],
    pub branch_tau2: [f64; 2],
    pub average_after: f64,
    pub difference: f64,
    /// True when any branch exceeded rank 2 and fell back to the roof route.
    pub used_roof_fallback: bool,
    pub reports: Vec<IndicatorReport>,
}

/// tau2 of rho_{c1 c2 r2} with focus c1, selecting Koashi-Winter while the
/// rank allows it.
fn tau2_c1_c2r2(rho: &DensityMatrix, config: &RoofConfig) -> Result<(f64, IndicatorReport, bool)> {
    let rank = numeric_rank(rho)?;
    let (big, route, fallback) = if rank <= 2 {
        (eof_via_koashi_winter(rho, 0)?, "koashi-winter", false)
    } else {
        (eof_mixed(rho, &[0], config)?, "convex-roof", true)
    };
    let e_c1c2 = eof_two_qubit(&partial_trace(rho, &[0, 1])?)?;
    let e_c1r2 = eof_two_qubit(&partial_trace(rho, &[0, 2])?)?;
    let value = big * big - e_c1c2 * e_c1c2 - e_c1r2 * e_c1r2;
    let report = IndicatorReport {
        name: "tau2[c1|c2r2]".into(),
        value,
        components: vec![
            ("ef2_c1|c2r2".into(), big * big, 1.0),
            ("ef2_c1c2".into(), e_c1c2 * e_c1c2, -1.0),
            ("ef2_c1r2".into(), e_c1r2 * e_c1r2, -1.0),
        ],
        metadata: vec![("route".into(), route.into())],
    };
    Ok((value, report, fallback))
}

pub fn locc_counterexample(config: &RoofConfig) -> Result<LoccReport> {
    let psi = cavity_output(0.9, 0.9)?;
    // rho_{c1 c2 r2}: drop r1 (index 1)
    let rho = partial_trace(&psi.projector(), &[0, 2, 3])?;
    let (before, before_report, fb0) = tau2_c1_c2r2(&rho, config)?;

    let povm = PovmPair::new(0.8, 3.0 / 7.0)?;
    let branches = apply_local_povm(&rho, 0, &povm)?;
    let mut probs = [0.0; 2];
    let mut taus = [0.0; 2];
    let mut reports = vec![before_report];
    let mut fallback = fb0;
    for (k, (p, branch)) in branches.iter().enumerate() {
        let (t, rep, fb) = tau2_c1_c2r2(branch, config)?;
        probs[k] = *p;
        taus[k] = t;
        reports.push(rep);
        fallback |= fb;
    }
    let average = probs[0] * taus[0] + probs[1] * taus[1];
    Ok(LoccReport {
        tau2_before: before,
        branch_probabilities: probs,
        branch_tau2: taus,
        average_after: average,
        difference: average - before,
        used_roof_fallback: fallback,
        reports,
    })
}
