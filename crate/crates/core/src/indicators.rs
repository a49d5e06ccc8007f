//! Monogamy indicators, residual checks, closed forms for the special state
//! families, and the EoF lower bound.

use std::sync::OnceLock;

use crate::discord::eof_via_koashi_winter;
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, purify, DensityMatrix, PureState};
use crate::measures::{
    concurrence_pure_bipartite, concurrence_two_qubit, eof_pure_bipartite, eof_two_qubit, sef,
};
use crate::roof::{eof_mixed, find_p0, RoofConfig};
use crate::states::{psi_j_p, w3};

/// Named scalar result with its contributing components and provenance
/// metadata, for CSV emission.
#[derive(Clone, Debug)]
pub struct IndicatorReport {
    pub name: String,
    pub value: f64,
    /// (label, value, sign) with sign +-1; value = sum of sign * value.
    pub components: Vec<(String, f64, f64)>,
    pub metadata: Vec<(String, String)>,
}

impl IndicatorReport {
    fn from_components(
        name: &str,
        components: Vec<(String, f64, f64)>,
        metadata: Vec<(String, String)>,
    ) -> Self {
        let value = components.iter().map(|(_, v, s)| v * s).sum();
        IndicatorReport { name: name.to_string(), value, components, metadata }
    }

    /// The defining identity: value equals the signed sum of components.
    pub fn combination_defect(&self) -> f64 {
        let sum: f64 = self.components.iter().map(|(_, v, s)| v * s).sum();
        (self.value - sum).abs()
    }
}

/// Routes for the one-vs-rest mixed-state EoF inside tau2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EofRoute {
    /// Pure input -> reduced entropy; rank <= 2 -> Koashi-Winter; else roof.
    Auto,
    KoashiWinter,
    ConvexRoof,
}

/// Pure-state residual E_f^2(focus|rest) - sum_j E_f^2(focus, j).
pub fn tau1_pure(psi: &PureState, focus: usize) -> Result<f64> {
    let n = psi.num_subsystems();
    if psi.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidSubsystems("tau1_pure requires qubits".into()));
    }
    if focus >= n {
        return Err(Error::InvalidSubsystems(format!("focus {focus} out of range 0..{n}")));
    }
    let big = eof_pure_bipartite(psi, &[focus])?;
    let mut total = big * big;
    for j in 0..n {
        if j == focus {
            continue;
        }
        let mut keep = [focus, j];
        keep.sort_unstable();
        let e = eof_two_qubit(&partial_trace(&psi.projector(), &keep)?)?;
        total -= e * e;
    }
    Ok(total)
}

fn eof_one_vs_rest(
    rho: &DensityMatrix,
    focus: usize,
    route: EofRoute,
    config: &RoofConfig,
) -> Result<(f64, &'static str)> {
    match route {
        EofRoute::KoashiWinter => Ok((eof_via_koashi_winter(rho, focus)?, "koashi-winter")),
        EofRoute::ConvexRoof => Ok((eof_mixed(rho, &[focus], config)?, "convex-roof")),
        EofRoute::Auto => {
            if rho.is_pure() {
                let psi = purify(rho)?;
                Ok((eof_pure_bipartite(&psi, &[focus])?, "schmidt-entropy"))
            } else if rho.rank()? <= 2 {
                Ok((eof_via_koashi_winter(rho, focus)?, "koashi-winter"))
            } else {
                Ok((eof_mixed(rho, &[focus], config)?, "convex-roof"))
            }
        }
    }
}

/// tau2 indicator E_f^2(focus|rest) - sum_j E_f^2(focus, j), with the
/// one-vs-rest EoF computed by the selected route and every component
/// recorded.
pub fn tau2(
    rho: &DensityMatrix,
    focus: usize,
    route: EofRoute,
    config: &RoofConfig,
) -> Result<IndicatorReport> {
    let n = rho.num_subsystems();
    if rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidSubsystems("tau2 requires qubits".into()));
    }
    if focus >= n {
        return Err(Error::InvalidSubsystems(format!("focus {focus} out of range 0..{n}")));
    }
    let (big, route_name) = eof_one_vs_rest(rho, focus, route, config)?;
    let mut components = vec![(format!("ef2_{focus}|rest"), big * big, 1.0)];
    for j in 0..n {
        if j == focus {
            continue;
        }
        let mut keep = [focus, j];
        keep.sort_unstable();
        let e = eof_two_qubit(&partial_trace(rho, &keep)?)?;
        components.push((format!("ef2_{focus}{j}"), e * e, -1.0));
    }
    Ok(IndicatorReport::from_components(
        &format!("tau2[{focus}]"),
        components,
        vec![("route".into(), route_name.into()), ("focus".into(), focus.to_string())],
    ))
}

/// Partition-independent tau2: arithmetic mean over all focus choices.
pub fn tau2_partition_avg(rho: &DensityMatrix, route: EofRoute, config: &RoofConfig) -> Result<f64> {
    let n = rho.num_subsystems();
    let mut total = 0.0;
    for focus in 0..n {
        total += tau2(rho, focus, route, config)?.value;
    }
    Ok(total / n as f64)
}

/// Square-sum lower bound sqrt(sum_j E_f^2(pairs)) on E_f(focus|rest).
pub fn eof_lower_bound(pairwise_eofs: &[f64]) -> Result<f64> {
    for &e in pairwise_eofs {
        if !(-1e-12..=1.0 + 1e-12).contains(&e) {
            return Err(Error::Domain(format!("pairwise EoF {e} outside [0,1]")));
        }
    }
    Ok(pairwise_eofs.iter().map(|e| e * e).sum::<f64>().sqrt())
}

/// Unsquared monogamy score E_f(focus|rest) - sum_j E_f(focus, j); negative
/// for the W state.
pub fn monogamy_score_ef(
    rho: &DensityMatrix,
    focus: usize,
    route: EofRoute,
    config: &RoofConfig,
) -> Result<f64> {
    let n = rho.num_subsystems();
    let (big, _) = eof_one_vs_rest(rho, focus, route, config)?;
    let mut score = big;
    for j in 0..n {
        if j == focus {
            continue;
        }
        let mut keep = [focus, j];
        keep.sort_unstable();
        score -= eof_two_qubit(&partial_trace(rho, &keep)?)?;
    }
    Ok(score)
}

/// Minimum of the two chain residuals of the pure-state monogamy proof:
/// E_f^2(C^2_big) - E_f^2(sum C^2) and E_f^2(sum C^2) - sum E_f^2(C^2).
pub fn sef_monogamy_check_pure(psi: &PureState, focus: usize) -> Result<f64> {
    let n = psi.num_subsystems();
    if psi.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidSubsystems("requires qubits".into()));
    }
    let c_big = concurrence_pure_bipartite(psi, &[focus])?;
    let mut sum_c2 = 0.0;
    let mut sum_sef = 0.0;
    for j in 0..n {
        if j == focus {
            continue;
        }
        let mut keep = [focus, j];
        keep.sort_unstable();
        let c = concurrence_two_qubit(&partial_trace(&psi.projector(), &keep)?)?;
        sum_c2 += c * c;
        sum_sef += sef(c * c)?;
    }
    let first = sef((c_big * c_big).min(1.0))? - sef(sum_c2.min(1.0))?;
    let second = sef(sum_c2.min(1.0))? - sum_sef;
    Ok(first.min(second))
}

/// Mixed-state squared-EoF monogamy residual via the Koashi-Winter route
/// (rank <= 2).
pub fn sef_monogamy_check_mixed_rank2(rho: &DensityMatrix, focus: usize) -> Result<f64> {
    let n = rho.num_subsystems();
    let big = eof_via_koashi_winter(rho, focus)?;
    let mut resid = big * big;
    for j in 0..n {
        if j == focus {
            continue;
        }
        let mut keep = [focus, j];
        keep.sort_unstable();
        let e = eof_two_qubit(&partial_trace(rho, &keep)?)?;
        resid -= e * e;
    }
    Ok(resid)
}

/// Closed form for the W_N / |1^N> mixture indicator:
/// (N/(N+1)) [E_f^2(C^2 = 4(N-1)/N^2) - (N-1) E_f^2(C^2 = 4/N^2)].
pub fn table1_value(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("table1_value requires N >= 3, got {n}")));
    }
    let nf = n as f64;
    let c2_big = 4.0 * (nf - 1.0) / (nf * nf);
    let c2_pair = 4.0 / (nf * nf);
    let value = nf / (nf + 1.0) * (sef(c2_big)? - (nf - 1.0) * sef(c2_pair)?);
    Ok(value)
}

/// Constants of the GHZ/W family, recomputed from first principles once.
#[derive(Clone, Copy, Debug)]
pub struct GhzwConstants {
    pub p0: f64,
    pub s_p: f64,
    pub s_w: f64,
}

static GHZW: OnceLock<GhzwConstants> = OnceLock::new();

pub fn ghzw_constants() -> GhzwConstants {
    *GHZW.get_or_init(|| {
        let p0 = find_p0();
        let s_p = tau1_pure(&psi_j_p(0, p0).expect("p0 in range"), 0).expect("three qubits");
        let s_w = tau1_pure(&w3(), 0).expect("three qubits");
        GhzwConstants { p0, s_p, s_w }
    })
}

/// Closed-form tau1 of the GHZ/W mixture for p below p0:
/// (p/p0) s_p + (1 - p/p0) s_w, with p0, s_p, s_w recomputed at startup.
pub fn tau1_ghzw_closed_form(p: f64) -> Result<f64> {
    let k = ghzw_constants();
    if !(0.0..k.p0).contains(&p) {
        return Err(Error::Domain(format!("p={p} outside [0, p0={})", k.p0)));
    }
    let alpha = p / k.p0;
    Ok(alpha * k.s_p + (1.0 - alpha) * k.s_w)
}

/// The known optimal decomposition of the GHZ/W mixture: the three
/// phased superpositions at p0 plus the W remainder.
pub fn ghzw_optimal_decomposition(p: f64) -> Result<crate::roof::Decomposition> {
    let k = ghzw_constants();
    if !(0.0..k.p0).contains(&p) {
        return Err(Error::Domain(format!("p={p} outside [0, p0={})", k.p0)));
    }
    let alpha = p / k.p0;
    let mut probabilities = vec![alpha / 3.0; 3];
    let mut components = vec![
        psi_j_p(0, k.p0)?,
        psi_j_p(1, k.p0)?,
        psi_j_p(2, k.p0)?,
    ];
    probabilities.push(1.0 - alpha);
    components.push(w3());
    Ok(crate::roof::Decomposition { probabilities, components })
}
