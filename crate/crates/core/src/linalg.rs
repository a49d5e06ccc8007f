//! Dense complex linear algebra for small multiqubit Hilbert spaces.
//!
//! Everything here is self-contained: Hermitian eigendecomposition (cyclic
//! Jacobi with phased rotations), tensor products, partial traces, PSD matrix
//! square roots, purification, and Schmidt decomposition.
//!
//! Subsystem ordering convention: most-significant-first. For dims
//! `[d0, d1, ..., dk]` the amplitude index of the multi-index
//! `(i0, i1, ..., ik)` is `((i0*d1 + i1)*d2 + i2)...`, so qubit 0 is the
//! highest bit of a computational-basis index.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity / normalization tolerance on inputs.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues below this magnitude are clamped to zero before logs and roots.
pub const EIGEN_CLAMP: f64 = 1e-10;
/// Eigenvalues below this are a contract violation for PSD inputs.
pub const PSD_VIOLATION: f64 = -1e-8;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    /// Projector |psi><psi| from an amplitude vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j].conj());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// tr(M^2) for Hermitian M, as sum of |entries|^2.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// Complex amplitude vector over a tensor product of subsystems.
#[derive(Clone, Debug)]
pub struct PureState {
    amps: Vec<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.iter().any(|&d| d < 1) || dims.is_empty() {
            return Err(Error::InvalidSubsystems("empty or zero-dimensional subsystem".into()));
        }
        if total != amps.len() {
            return Err(Error::DimensionMismatch { expected: total, got: amps.len() });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite amplitude".into()));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > HERMITICITY_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { amps, dims })
    }

    /// Normalizes the vector; errors only on a zero vector.
    pub fn normalized(mut amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::NotNormalized(norm));
        }
        for a in &mut amps {
            *a /= norm;
        }
        PureState::new(amps, dims)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            mat: CMatrix::outer(&self.amps),
            dims: self.dims.clone(),
        }
    }

    /// Reduced density matrix on `keep` (strictly increasing subsystem indices).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(&self.projector(), keep)
    }

    /// Reorder subsystems; `order` must be a permutation of 0..k.
    pub fn permute_subsystems(&self, order: &[usize]) -> Result<PureState> {
        let k = self.dims.len();
        let mut seen = vec![false; k];
        if order.len() != k || order.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidSubsystems(format!("{order:?} is not a permutation")));
        }
        let new_dims: Vec<usize> = order.iter().map(|&i| self.dims[i]).collect();
        let mut new_amps = vec![ZERO; self.amps.len()];
        let mut digits = vec![0usize; k];
        for (idx, &a) in self.amps.iter().enumerate() {
            decompose_index(idx, &self.dims, &mut digits);
            let mut new_idx = 0;
            for (t, &src) in order.iter().enumerate() {
                new_idx = new_idx * new_dims[t] + digits[src];
            }
            new_amps[new_idx] = a;
        }
        PureState::new(new_amps, new_dims)
    }
}

/// Hermitian, PSD, unit-trace matrix with a subsystem dimension list.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Full validation: Hermitian within 1e-10, eigenvalues >= -1e-10,
    /// trace 1 within 1e-10.
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.rows(), mat.cols()));
        }
        if mat.rows() != total {
            return Err(Error::DimensionMismatch { expected: total, got: mat.rows() });
        }
        let rho = DensityMatrix { mat, dims };
        rho.validate()?;
        Ok(rho)
    }

    /// For internal paths where validity holds by construction.
    pub(crate) fn new_unchecked(mat: CMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { mat, dims }
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.mat.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > HERMITICITY_TOL || tr.im.abs() > HERMITICITY_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let (evals, _) = hermitian_eigendecompose(&self.mat)?;
        if let Some(&min) = evals.last() {
            if min < -EIGEN_CLAMP {
                return Err(Error::NotPsd(min));
            }
        }
        Ok(())
    }

    /// Probability-weighted mixture of pure states on matching subsystems.
    pub fn mixture(terms: &[(f64, PureState)]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("empty mixture".into()));
        }
        let dims = terms[0].1.dims().to_vec();
        let n = terms[0].1.dim();
        let mut mat = CMatrix::zeros(n, n);
        let mut total_p = 0.0;
        for (p, psi) in terms {
            if *p < -1e-12 {
                return Err(Error::Domain(format!("negative probability {p}")));
            }
            if psi.dims() != dims {
                return Err(Error::InvalidSubsystems("mixture over mismatched subsystems".into()));
            }
            total_p += p;
            for i in 0..n {
                for j in 0..n {
                    mat.add_to(i, j, psi.amplitudes()[i] * psi.amplitudes()[j].conj() * *p);
                }
            }
        }
        if (total_p - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidTrace(total_p));
        }
        Ok(DensityMatrix { mat, dims })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.mat.purity()
    }

    /// Number of eigenvalues above the clamping threshold.
    pub fn rank(&self) -> Result<usize> {
        let (evals, _) = hermitian_eigendecompose(&self.mat)?;
        Ok(evals.iter().filter(|&&l| l > EIGEN_CLAMP).count())
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() < 1e-10
    }
}

pub(crate) fn decompose_index(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi with phased
/// rotations. Returns eigenvalues in descending order and the matching
/// orthonormal eigenvector columns.
pub fn hermitian_eigendecompose(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize so rounding in the input cannot bias the iteration.
    for i in 0..n {
        for j in 0..n {
            let s = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, s);
        }
    }
    let mut v = CMatrix::identity(n);
    if n <= 1 {
        let evals = (0..n).map(|i| a.get(i, i).re).collect();
        return Ok((evals, v));
    }
    let scale = a.max_abs().max(1e-300);
    let stop = scale * 1e-15;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let b = apq.norm();
                if b <= stop * 1e-2 {
                    continue;
                }
                let phase = apq / b; // e^{i alpha}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_ph = phase * s; // s * e^{i alpha}
                // A <- R^dag A R with R = I except
                // R[p][p]=c, R[p][q]=s e^{ia}, R[q][p]=-s e^{-ia}, R[q][q]=c.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * s_ph.conj());
                    a.set(k, q, akp * s_ph + akq * c);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * s_ph);
                    a.set(q, k, apk * s_ph.conj() + aqk * c);
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * s_ph.conj());
                    v.set(k, q, vkp * s_ph + vkq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals_raw: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| evals_raw[j].partial_cmp(&evals_raw[i]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| evals_raw[i]).collect();
    let mut vs = CMatrix::zeros(n, n);
    for (newj, &oldj) in order.iter().enumerate() {
        for i in 0..n {
            vs.set(i, newj, v.get(i, oldj));
        }
    }
    Ok((evals, vs))
}

/// Trace out every subsystem not listed in `keep` (strictly increasing).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let k = dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems("empty keep set".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&i| i >= k) {
        return Err(Error::InvalidSubsystems(format!(
            "keep {keep:?} must be strictly increasing and within 0..{k}"
        )));
    }
    let traced: Vec<usize> = (0..k).filter(|i| !keep.contains(i)).collect();

    // Subsystem strides in the most-significant-first convention.
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let offsets = |subs: &[usize]| -> Vec<usize> {
        let sub_dims: Vec<usize> = subs.iter().map(|&i| dims[i]).collect();
        let total: usize = sub_dims.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; subs.len()];
        for idx in 0..total {
            decompose_index(idx, &sub_dims, &mut digits);
            out.push(digits.iter().zip(subs).map(|(&d, &s)| d * strides[s]).sum());
        }
        out
    };

    let keep_off = offsets(keep);
    let traced_off = offsets(&traced);
    let dk = keep_off.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (i, &oi) in keep_off.iter().enumerate() {
        for (j, &oj) in keep_off.iter().enumerate() {
            let mut acc = ZERO;
            for &ot in &traced_off {
                acc += rho.matrix().get(oi + ot, oj + ot);
            }
            out.set(i, j, acc);
        }
    }
    let new_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    Ok(DensityMatrix::new_unchecked(out, new_dims))
}

/// Kronecker product of pure states; dims concatenate.
pub fn tensor_product_states(a: &PureState, b: &PureState) -> PureState {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for &x in a.amplitudes() {
        for &y in b.amplitudes() {
            amps.push(x * y);
        }
    }
    let mut dims = a.dims().to_vec();
    dims.extend_from_slice(b.dims());
    PureState { amps, dims }
}

/// Kronecker product of density matrices; dims concatenate.
pub fn tensor_product_density(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let mut dims = a.dims().to_vec();
    dims.extend_from_slice(b.dims());
    DensityMatrix::new_unchecked(a.matrix().kron(b.matrix()), dims)
}

/// Square root of a PSD Hermitian matrix. Eigenvalues in
/// (PSD_VIOLATION, EIGEN_CLAMP) are clamped to zero; below PSD_VIOLATION is
/// a contract violation.
pub fn matrix_sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let (evals, v) = hermitian_eigendecompose(m)?;
    if let Some(&min) = evals.last() {
        if min < PSD_VIOLATION {
            return Err(Error::NotPsd(min));
        }
    }
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &l) in evals.iter().enumerate() {
        let s = if l <= EIGEN_CLAMP { continue } else { l.sqrt() };
        for i in 0..n {
            let vi = v.get(i, k);
            if vi == ZERO {
                continue;
            }
            for j in 0..n {
                out.add_to(i, j, vi * v.get(j, k).conj() * s);
            }
        }
    }
    Ok(out)
}

/// Purify a density matrix: appends an ancilla subsystem whose dimension is
/// the numeric rank (eigenvalue threshold EIGEN_CLAMP). Tracing the ancilla
/// back reproduces the input.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let (evals, v) = hermitian_eigendecompose(rho.matrix())?;
    let r = evals.iter().filter(|&&l| l > EIGEN_CLAMP).count().max(1);
    let n = rho.dim();
    let mut amps = vec![ZERO; n * r];
    for k in 0..r {
        let w = evals[k].max(0.0).sqrt();
        for i in 0..n {
            amps[i * r + k] = v.get(i, k) * w;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(r);
    PureState::normalized(amps, dims)
}

/// Schmidt decomposition across `left` (strictly increasing subsystem
/// indices) versus the complement.
#[derive(Clone, Debug)]
pub struct SchmidtResult {
    /// Descending nonnegative coefficients for ranks above the clamp.
    pub coefficients: Vec<f64>,
    /// Orthonormal vectors on the left factor, one per coefficient.
    pub left_basis: Vec<Vec<Complex64>>,
    /// Orthonormal vectors on the right factor, one per coefficient.
    pub right_basis: Vec<Vec<Complex64>>,
}

pub fn schmidt_decompose(psi: &PureState, left: &[usize]) -> Result<SchmidtResult> {
    let k = psi.num_subsystems();
    if left.is_empty() || left.len() >= k {
        return Err(Error::InvalidSubsystems("partition must be a proper nonempty subset".into()));
    }
    if left.windows(2).any(|w| w[0] >= w[1]) || left.iter().any(|&i| i >= k) {
        return Err(Error::InvalidSubsystems(format!(
            "left {left:?} must be strictly increasing and within 0..{k}"
        )));
    }
    let right: Vec<usize> = (0..k).filter(|i| !left.contains(i)).collect();
    let mut order = left.to_vec();
    order.extend_from_slice(&right);
    let perm = psi.permute_subsystems(&order)?;
    let dl: usize = left.iter().map(|&i| psi.dims()[i]).product();
    let dr: usize = right.iter().map(|&i| psi.dims()[i]).product();

    // rho_L = M M^dag with M the dl x dr amplitude matrix.
    let mut rho_l = CMatrix::zeros(dl, dl);
    let amp = perm.amplitudes();
    for i in 0..dl {
        for ip in 0..dl {
            let mut acc = ZERO;
            for j in 0..dr {
                acc += amp[i * dr + j] * amp[ip * dr + j].conj();
            }
            rho_l.set(i, ip, acc);
        }
    }
    let (evals, u) = hermitian_eigendecompose(&rho_l)?;
    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for (kk, &l) in evals.iter().enumerate() {
        if l <= EIGEN_CLAMP {
            continue;
        }
        let c = l.sqrt();
        let uk = u.column(kk);
        // r_k[j] = <u_k| M |j> / c
        let mut rk = vec![ZERO; dr];
        for j in 0..dr {
            let mut acc = ZERO;
            for i in 0..dl {
                acc += uk[i].conj() * amp[i * dr + j];
            }
            rk[j] = acc / c;
        }
        coefficients.push(c);
        left_basis.push(uk);
        right_basis.push(rk);
    }
    Ok(SchmidtResult { coefficients, left_basis, right_basis })
}

impl SchmidtResult {
    /// Rebuild the permuted state Sum_k c_k |l_k>|r_k> as a raw amplitude
    /// vector (left factor major).
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let dl = self.left_basis.first().map_or(0, Vec::len);
        let dr = self.right_basis.first().map_or(0, Vec::len);
        let mut amp = vec![ZERO; dl * dr];
        for ((c, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for i in 0..dl {
                for j in 0..dr {
                    amp[i * dr + j] += l[i] * r[j] * *c;
                }
            }
        }
        amp
    }
}
