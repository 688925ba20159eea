//! Complex state vectors and density operators for registers of one to three
//! labeled qubits.
//!
//! Basis ordering is fixed here, once, for the whole crate:
//!
//! * signal polarization: `H` = 0, `V` = 1;
//! * idler polarization: `H` = 0, `V` = 1;
//! * idler path (slit-mode basis): symmetric `F` = 0, antisymmetric `A` = 1.
//!
//! Where the idler path is expressed in the slit-transmission basis instead,
//! upper slit `+` = 0 and lower slit `−` = 1, with
//! `F = (+ + −)/√2` and `A = (+ − −)/√2`.
//!
//! A basis index packs the qubits in register order, first label most
//! significant: for labels `[s, i, p]` the amplitude of `|V⟩_s|H⟩_i|A⟩_p`
//! sits at index `0b101`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Norm, Hermiticity, and trace checks accept deviations up to this.
pub const VALIDATION_TOL: f64 = 1e-12;
/// Density-operator eigenvalues may undershoot zero by at most this.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

const MAX_STATE_QUBITS: usize = 3;
const MAX_DENSITY_QUBITS: usize = 2;

/// Physical identity of one qubit in the register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitLabel {
    SignalPol,
    IdlerPol,
    IdlerPath,
}

/// Pure state of a labeled register, `2^n` complex amplitudes, `n ∈ 1..=3`.
#[derive(Clone, Debug)]
pub struct RegisterState {
    labels: Vec<QubitLabel>,
    amps: Vec<Complex64>,
}

impl RegisterState {
    /// Builds a state and validates labels, dimension, and normalization.
    pub fn new(labels: Vec<QubitLabel>, amps: Vec<Complex64>) -> Result<Self> {
        let n = labels.len();
        if !(1..=MAX_STATE_QUBITS).contains(&n) {
            return Err(Error::RegisterSize(n, 1, MAX_STATE_QUBITS));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(*l));
            }
        }
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                got: amps.len(),
                qubits: n,
            });
        }
        let state = Self { labels, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Single-qubit state `amp0·|0⟩ + amp1·|1⟩`.
    pub fn qubit(label: QubitLabel, amp0: Complex64, amp1: Complex64) -> Result<Self> {
        Self::new(vec![label], vec![amp0, amp1])
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Position of `label` in register order.
    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .ok_or(Error::LabelNotFound(label))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Tensor product; label sets must be disjoint, result at most 3 qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits() + other.n_qubits();
        if n > MAX_STATE_QUBITS {
            return Err(Error::RegisterSize(n, 1, MAX_STATE_QUBITS));
        }
        for l in other.labels() {
            if self.labels.contains(l) {
                return Err(Error::DuplicateLabel(*l));
            }
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(other.labels());
        let mut amps = Vec::with_capacity(1 << n);
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::new(labels, amps)
    }

    /// `⟨self|other⟩`; requires identical label order.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Projects one qubit onto `⟨bra|` (`bra = [⟨bra|0⟩*, ⟨bra|1⟩*]` is given
    /// as the ket coefficients of the measured state) and removes it.
    ///
    /// Returns the renormalized remainder and the success probability.
    pub fn project_qubit(
        &self,
        label: QubitLabel,
        ket: [Complex64; 2],
    ) -> Result<(RegisterState, f64)> {
        let n = self.n_qubits();
        if n < 2 {
            return Err(Error::RegisterSize(n - 1, 1, MAX_STATE_QUBITS));
        }
        let pos = self.position(label)?;
        let ket_norm = ket[0].norm_sqr() + ket[1].norm_sqr();
        if (ket_norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidProjection("projector ket not normalized"));
        }
        let mut labels = self.labels.clone();
        labels.remove(pos);
        let mut amps = vec![Complex64::ZERO; 1 << (n - 1)];
        for (rest, slot) in amps.iter_mut().enumerate() {
            for (bit, coeff) in ket.iter().enumerate() {
                let full = insert_bit(rest, n - 1, pos, bit);
                *slot += coeff.conj() * self.amps[full];
            }
        }
        let prob: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if prob <= VALIDATION_TOL {
            return Err(Error::ProjectionVanishes);
        }
        let scale = prob.sqrt().recip();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((RegisterState { labels, amps }, prob))
    }

    /// `|ψ⟩⟨ψ|` as a density operator (registers of at most 2 qubits).
    pub fn density(&self) -> Result<DensityOp> {
        if self.n_qubits() > MAX_DENSITY_QUBITS {
            return Err(Error::RegisterSize(self.n_qubits(), 1, MAX_DENSITY_QUBITS));
        }
        let d = self.amps.len();
        let mut mat = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                mat[i * d + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityOp::new(self.labels.clone(), mat)
    }

    /// Traces out `remove`, returning the reduced density operator over the
    /// remaining labels in register order.
    pub fn partial_trace(&self, remove: &[QubitLabel]) -> Result<DensityOp> {
        let n = self.n_qubits();
        let mut removed_pos = Vec::new();
        for l in remove {
            let p = self.position(*l)?;
            if removed_pos.contains(&p) {
                return Err(Error::DuplicateLabel(*l));
            }
            removed_pos.push(p);
        }
        if removed_pos.is_empty() || removed_pos.len() == n {
            return Err(Error::PartialTraceScope);
        }
        let kept_pos: Vec<usize> = (0..n).filter(|p| !removed_pos.contains(p)).collect();
        let kept_labels: Vec<QubitLabel> = kept_pos.iter().map(|&p| self.labels[p]).collect();
        let kd = 1 << kept_pos.len();
        let td = 1 << removed_pos.len();
        let mut mat = vec![Complex64::ZERO; kd * kd];
        for i in 0..kd {
            for j in 0..kd {
                let mut sum = Complex64::ZERO;
                for t in 0..td {
                    let row = compose_index(n, &kept_pos, i, &removed_pos, t);
                    let col = compose_index(n, &kept_pos, j, &removed_pos, t);
                    sum += self.amps[row] * self.amps[col].conj();
                }
                mat[i * kd + j] = sum;
            }
        }
        DensityOp::new(kept_labels, mat)
    }
}

/// Concurrence of a pure two-qubit state, `2·|a·d − b·c|`.
pub fn concurrence_pure(state: &RegisterState) -> Result<f64> {
    if state.n_qubits() != 2 {
        return Err(Error::RegisterSize(state.n_qubits(), 2, 2));
    }
    let a = state.amps();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// `|⟨a|b⟩|²` for pure states over the same labels.
pub fn fidelity_pure(a: &RegisterState, b: &RegisterState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Density operator over one or two labeled qubits, row-major storage.
///
/// Construction validates Hermiticity and unit trace to 1e-12 and
/// positive semidefiniteness down to eigenvalue −1e-10.
#[derive(Clone, Debug)]
pub struct DensityOp {
    labels: Vec<QubitLabel>,
    mat: Vec<Complex64>,
}

impl DensityOp {
    pub fn new(labels: Vec<QubitLabel>, mat: Vec<Complex64>) -> Result<Self> {
        let n = labels.len();
        if !(1..=MAX_DENSITY_QUBITS).contains(&n) {
            return Err(Error::RegisterSize(n, 1, MAX_DENSITY_QUBITS));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(*l));
            }
        }
        let d = 1 << n;
        if mat.len() != d * d {
            return Err(Error::DimensionMismatch {
                got: mat.len(),
                qubits: n,
            });
        }
        let op = Self { labels, mat };
        let d = op.dim();
        for i in 0..d {
            for j in 0..d {
                let diff = (op.entry(i, j) - op.entry(j, i).conj()).norm();
                if diff > VALIDATION_TOL {
                    return Err(Error::InvalidDensity("not Hermitian"));
                }
            }
        }
        let trace: f64 = (0..d).map(|i| op.entry(i, i).re).sum();
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidDensity("trace differs from 1"));
        }
        if op.eigenvalues().iter().any(|&l| l < EIGENVALUE_FLOOR) {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(op)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[row * self.dim() + col]
    }

    /// `tr ρ²`; equals `Σ|ρ_ij|²` for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Real spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat, self.dim())
    }

    /// Traces out `remove`, keeping the remaining labels in order.
    pub fn partial_trace(&self, remove: &[QubitLabel]) -> Result<DensityOp> {
        let n = self.labels.len();
        let mut removed_pos = Vec::new();
        for l in remove {
            let p = self
                .labels
                .iter()
                .position(|x| x == l)
                .ok_or(Error::LabelNotFound(*l))?;
            if removed_pos.contains(&p) {
                return Err(Error::DuplicateLabel(*l));
            }
            removed_pos.push(p);
        }
        if removed_pos.is_empty() || removed_pos.len() == n {
            return Err(Error::PartialTraceScope);
        }
        let kept_pos: Vec<usize> = (0..n).filter(|p| !removed_pos.contains(p)).collect();
        let kept_labels: Vec<QubitLabel> = kept_pos.iter().map(|&p| self.labels[p]).collect();
        let kd = 1 << kept_pos.len();
        let td = 1 << removed_pos.len();
        let d = self.dim();
        let mut mat = vec![Complex64::ZERO; kd * kd];
        for i in 0..kd {
            for j in 0..kd {
                let mut sum = Complex64::ZERO;
                for t in 0..td {
                    let row = compose_index(n, &kept_pos, i, &removed_pos, t);
                    let col = compose_index(n, &kept_pos, j, &removed_pos, t);
                    sum += self.mat[row * d + col];
                }
                mat[i * kd + j] = sum;
            }
        }
        DensityOp::new(kept_labels, mat)
    }

    /// `U ρ U†` for a single-qubit operator, `u` row-major.
    pub fn conjugated(&self, u: &[[Complex64; 2]; 2]) -> Result<DensityOp> {
        if self.labels.len() != 1 {
            return Err(Error::RegisterSize(self.labels.len(), 1, 1));
        }
        let mut mat = vec![Complex64::ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut sum = Complex64::ZERO;
                for k in 0..2 {
                    for l in 0..2 {
                        sum += u[i][k] * self.entry(k, l) * u[j][l].conj();
                    }
                }
                mat[i * 2 + j] = sum;
            }
        }
        DensityOp::new(self.labels.clone(), mat)
    }
}

/// Places `kept` bits at `kept_pos` and `traced` bits at `traced_pos` in an
/// `n`-bit basis index (first register position = most significant bit).
fn compose_index(
    n: usize,
    kept_pos: &[usize],
    kept: usize,
    traced_pos: &[usize],
    traced: usize,
) -> usize {
    let mut idx = 0usize;
    for (b, &p) in kept_pos.iter().enumerate() {
        let bit = (kept >> (kept_pos.len() - 1 - b)) & 1;
        idx |= bit << (n - 1 - p);
    }
    for (b, &p) in traced_pos.iter().enumerate() {
        let bit = (traced >> (traced_pos.len() - 1 - b)) & 1;
        idx |= bit << (n - 1 - p);
    }
    idx
}

/// Expands an `(n−1)`-bit index by inserting `bit` at register position `pos`.
fn insert_bit(rest: usize, n_rest: usize, pos: usize, bit: usize) -> usize {
    // Split `rest` around the inserted position; high bits shift up by one.
    let low_bits = n_rest - pos;
    let high = rest >> low_bits;
    let low = rest & ((1 << low_bits) - 1);
    (high << (low_bits + 1)) | (bit << low_bits) | low
}

/// Eigenvalues of a Hermitian matrix (row-major, `dim ≤ 4`) by cyclic Jacobi
/// rotations, ascending.
pub fn hermitian_eigenvalues(mat: &[Complex64], dim: usize) -> Vec<f64> {
    debug_assert_eq!(mat.len(), dim * dim);
    let mut a = mat.to_vec();
    let idx = |i: usize, j: usize| i * dim + j;
    for _sweep in 0..60 {
        let off: f64 = (0..dim)
            .flat_map(|i| (0..dim).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[idx(i, j)].norm_sqr())
            .sum();
        if off < 1e-28 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[idx(p, q)];
                if apq.norm() < 1e-300 {
                    continue;
                }
                // Unitary 2×2 rotation that zeroes the (p,q) element:
                // diagonalize [[app, |apq|], [|apq|, aqq]] after absorbing
                // the phase of apq into column q.
                let phase = apq / apq.norm();
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column rotation: col_p' = c·col_p − s·phase*·col_q,
                //                  col_q' = s·phase·col_p + c·col_q,
                // then the same applied to rows with conjugate coefficients.
                for k in 0..dim {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * phase.conj() * akq;
                    a[idx(k, q)] = s * phase * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * phase * aqk;
                    a[idx(q, k)] = s * phase.conj() * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..dim).map(|i| a[idx(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}
