//! Named states, seeded random state generators, and the plain-text state
//! file format.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, CMatrix, DensityMatrix, PureState, ONE, ZERO};
use crate::rng::{Seed, SplitMix64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// |GHZ_3> = (|000> + |111>)/sqrt(2).
pub fn ghz3() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 8];
    amps[0b000] = c(s, 0.0);
    amps[0b111] = c(s, 0.0);
    PureState::new(amps, vec![2, 2, 2]).expect("ghz3 is normalized")
}

/// |W_3> = (|100> + |010> + |001>)/sqrt(3).
pub fn w3() -> PureState {
    w_n(3).expect("N=3 is in range")
}

/// |W_N>: amplitude 1/sqrt(N) on every weight-1 basis state, 2 <= N <= 12.
pub fn w_n(n: usize) -> Result<PureState> {
    if !(2..=12).contains(&n) {
        return Err(Error::Domain(format!("w_n requires 2 <= N <= 12, got {n}")));
    }
    let a = 1.0 / (n as f64).sqrt();
    let mut amps = vec![ZERO; 1 << n];
    for k in 0..n {
        amps[1 << (n - 1 - k)] = c(a, 0.0);
    }
    PureState::new(amps, vec![2; n])
}

/// |1^N>: the all-ones computational basis state.
pub fn ones_n(n: usize) -> Result<PureState> {
    if !(2..=12).contains(&n) {
        return Err(Error::Domain(format!("ones_n requires 2 <= N <= 12, got {n}")));
    }
    let mut amps = vec![ZERO; 1 << n];
    amps[(1 << n) - 1] = ONE;
    PureState::new(amps, vec![2; n])
}

/// p |GHZ_3><GHZ_3| + (1-p) |W_3><W_3|.
pub fn ghzw_mixture(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("mixing parameter p={p} outside [0,1]")));
    }
    DensityMatrix::mixture(&[(p, ghz3()), (1.0 - p, w3())])
}

/// |psi^j(p)> = sqrt(p)|GHZ_3> - e^{(2 pi i/3) j} sqrt(1-p)|W_3>.
pub fn psi_j_p(j: usize, p: f64) -> Result<PureState> {
    if j > 2 {
        return Err(Error::Domain(format!("phase index j={j} outside {{0,1,2}}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("weight p={p} outside [0,1]")));
    }
    let phase = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 3.0);
    let g = ghz3();
    let w = w3();
    let amps: Vec<Complex64> = g
        .amplitudes()
        .iter()
        .zip(w.amplitudes())
        .map(|(ga, wa)| ga * p.sqrt() - phase * wa * (1.0 - p).sqrt())
        .collect();
    PureState::new(amps, vec![2, 2, 2])
}

/// alpha |1^N><1^N| + (1-alpha) |W_N><W_N| with alpha = 1/(N+1).
pub fn wn_ones_mixture(n: usize) -> Result<DensityMatrix> {
    if !(3..=12).contains(&n) {
        return Err(Error::Domain(format!("wn_ones_mixture requires 3 <= N <= 12, got {n}")));
    }
    let alpha = 1.0 / (n as f64 + 1.0);
    DensityMatrix::mixture(&[(alpha, ones_n(n)?), (1.0 - alpha, w_n(n)?)])
}

/// Parameters of the three-qubit standard form
/// l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>.
#[derive(Clone, Copy, Debug)]
pub struct AcinParams {
    pub lambda: [f64; 5],
    pub phi: f64,
}

impl AcinParams {
    pub fn validate(&self) -> Result<()> {
        if self.lambda.iter().any(|&l| !(0.0..=1.0).contains(&l)) {
            return Err(Error::Domain("lambda components must lie in [0,1]".into()));
        }
        if !(0.0..=PI).contains(&self.phi) {
            return Err(Error::Domain(format!("phi={} outside [0,pi]", self.phi)));
        }
        let sq: f64 = self.lambda.iter().map(|l| l * l).sum();
        if (sq - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(sq.sqrt()));
        }
        Ok(())
    }
}

pub fn acin_standard(params: &AcinParams) -> Result<PureState> {
    params.validate()?;
    let l = params.lambda;
    let mut amps = vec![ZERO; 8];
    amps[0b000] = c(l[0], 0.0);
    amps[0b100] = Complex64::from_polar(l[1], params.phi);
    amps[0b101] = c(l[2], 0.0);
    amps[0b110] = c(l[3], 0.0);
    amps[0b111] = c(l[4], 0.0);
    PureState::new(amps, vec![2, 2, 2])
}

/// Output state of the two cavity-reservoir pairs, qubit order (c1, r1, c2, r2):
/// alpha|0000> + beta |phi_t>_{c1 r1} |phi_t>_{c2 r2} with
/// |phi_t> = xi|10> + chi|01>, xi = e^{-kappa t/2}, chi = sqrt(1 - e^{-kappa t}).
pub fn cavity_output(alpha: f64, kappa_t: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha={alpha} outside [0,1]")));
    }
    if kappa_t < 0.0 {
        return Err(Error::Domain(format!("kappa*t={kappa_t} must be nonnegative")));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let xi = (-kappa_t / 2.0).exp();
    let chi = (1.0 - (-kappa_t).exp()).sqrt();
    let mut amps = vec![ZERO; 16];
    amps[0b0000] = c(alpha, 0.0);
    amps[0b1010] = c(beta * xi * xi, 0.0);
    amps[0b1001] = c(beta * xi * chi, 0.0);
    amps[0b0110] = c(beta * chi * xi, 0.0);
    amps[0b0101] = c(beta * chi * chi, 0.0);
    PureState::new(amps, vec![2, 2, 2, 2])
}

/// Haar-random pure state: normalized vector of iid complex Gaussians.
pub fn haar_random_pure(dims: &[usize], seed: Seed) -> Result<PureState> {
    if dims.is_empty() || dims.iter().any(|&d| d < 1) {
        return Err(Error::InvalidSubsystems("empty or zero-dimensional subsystem".into()));
    }
    let total: usize = dims.iter().product();
    let mut rng = SplitMix64::substream(seed, 0);
    // redraw on the (measure-zero) chance of a numerically zero vector
    loop {
        let amps: Vec<Complex64> = (0..total)
            .map(|_| c(rng.next_gaussian(), rng.next_gaussian()))
            .collect();
        if let Ok(psi) = PureState::normalized(amps, dims.to_vec()) {
            return Ok(psi);
        }
    }
}

/// Random mixed state of bounded rank: the reduced state of a Haar pure state
/// on system (x) rank-dimensional ancilla.
pub fn random_mixed(dims: &[usize], rank: usize, seed: Seed) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if rank == 0 || rank > total {
        return Err(Error::Domain(format!("rank {rank} outside 1..={total}")));
    }
    let mut full = dims.to_vec();
    full.push(rank);
    let psi = haar_random_pure(&full, seed)?;
    let keep: Vec<usize> = (0..dims.len()).collect();
    partial_trace(&psi.projector(), &keep)
}

/// A parsed state file.
#[derive(Clone, Debug)]
pub enum StateFile {
    Pure(PureState),
    Density(DensityMatrix),
}

/// Writes `dims d1 ... dk` then one `re im` line per amplitude.
pub fn write_pure_state<W: Write>(w: &mut W, psi: &PureState) -> std::io::Result<()> {
    write!(w, "dims")?;
    for d in psi.dims() {
        write!(w, " {d}")?;
    }
    writeln!(w)?;
    for a in psi.amplitudes() {
        writeln!(w, "{:.16e} {:.16e}", a.re, a.im)?;
    }
    Ok(())
}

/// Writes `dims ...`, `rows n`, then row-major `re im` lines.
pub fn write_density_matrix<W: Write>(w: &mut W, rho: &DensityMatrix) -> std::io::Result<()> {
    write!(w, "dims")?;
    for d in rho.dims() {
        write!(w, " {d}")?;
    }
    writeln!(w)?;
    writeln!(w, "rows {}", rho.dim())?;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            let z = rho.matrix().get(i, j);
            writeln!(w, "{:.16e} {:.16e}", z.re, z.im)?;
        }
    }
    Ok(())
}

pub fn read_state_file<R: BufRead>(r: R) -> Result<StateFile> {
    let mut lines = r.lines().enumerate();
    let (dims, mut lineno) = {
        let (i, line) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "empty file".into() })?;
        let line = line?;
        let mut it = line.split_whitespace();
        if it.next() != Some("dims") {
            return Err(Error::Parse { line: i + 1, msg: "expected `dims d1 d2 ...`".into() });
        }
        let dims: Vec<usize> = it
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad dimension `{t}`") })
            })
            .collect::<Result<_>>()?;
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Parse { line: i + 1, msg: "dimensions must all be >= 2".into() });
        }
        (dims, i + 1)
    };
    let total: usize = dims.iter().product();

    let mut entries: Vec<Complex64> = Vec::new();
    let mut rows: Option<usize> = None;
    for (i, line) in lines {
        lineno = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if entries.is_empty() && rows.is_none() && toks[0] == "rows" {
            if toks.len() != 2 {
                return Err(Error::Parse { line: lineno, msg: "expected `rows n`".into() });
            }
            let n = toks[1]
                .parse::<usize>()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad row count `{}`", toks[1]) })?;
            if n != total {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("rows {n} does not match dims product {total}"),
                });
            }
            rows = Some(n);
            continue;
        }
        if toks.len() != 2 {
            return Err(Error::Parse { line: lineno, msg: "expected `re im`".into() });
        }
        let re = toks[0]
            .parse::<f64>()
            .map_err(|_| Error::Parse { line: lineno, msg: format!("bad float `{}`", toks[0]) })?;
        let im = toks[1]
            .parse::<f64>()
            .map_err(|_| Error::Parse { line: lineno, msg: format!("bad float `{}`", toks[1]) })?;
        entries.push(c(re, im));
    }

    match rows {
        None => {
            if entries.len() != total {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {total} amplitudes, found {}", entries.len()),
                });
            }
            Ok(StateFile::Pure(PureState::new(entries, dims)?))
        }
        Some(n) => {
            if entries.len() != n * n {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {} entries, found {}", n * n, entries.len()),
                });
            }
            let mut mat = CMatrix::zeros(n, n);
            for (k, z) in entries.into_iter().enumerate() {
                mat.set(k / n, k % n, z);
            }
            Ok(StateFile::Density(DensityMatrix::new(mat, dims)?))
        }
    }
}
