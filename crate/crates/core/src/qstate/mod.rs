//! Dense state-vector and density-matrix engine.
//!
//! Qubits are addressed with 1-based indices. Qubit 1 is the most
//! significant bit of the amplitude index, so a register `|z_1 z_2 … z_N⟩`
//! lives at index `Σ z_k 2^(N-k)`.

mod density;
mod gates;

pub use density::{dephase, partial_trace, DensityMatrix, DephasingChannel, PartialTrace};
pub(crate) use density::hermitian_eigenvalues;
pub use gates::{LocalGate, Mat2};
pub(crate) use gates::mat2_mul;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest register handled as a dense state vector.
pub const MAX_PURE_QUBITS: usize = 24;
/// Largest register handled as a dense density matrix.
pub const MAX_MIXED_QUBITS: usize = 12;

pub(crate) const NORM_TOL: f64 = 1e-9;
const FORCE_TOL: f64 = 1e-12;

/// A single-qubit input `amp0|0⟩ + amp1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputQubit {
    amp0: C64,
    amp1: C64,
}

impl InputQubit {
    pub fn new(amp0: C64, amp1: C64) -> Result<Self> {
        let n = amp0.norm_sqr() + amp1.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amp0, amp1 })
    }

    pub fn real(amp0: f64, amp1: f64) -> Result<Self> {
        Self::new(C64::new(amp0, 0.0), C64::new(amp1, 0.0))
    }

    /// `a|0⟩ + √(1-a²)|1⟩` with the second amplitude real and non-negative.
    pub fn from_first_amplitude(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a.abs()) {
            return Err(Error::InvalidParameter(format!("|a| = {a} exceeds 1")));
        }
        Self::real(a, (1.0 - a * a).max(0.0).sqrt())
    }

    pub fn zero() -> Self {
        Self { amp0: C64::new(1.0, 0.0), amp1: C64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        Self { amp0: C64::new(0.0, 0.0), amp1: C64::new(1.0, 0.0) }
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amp0: C64::new(h, 0.0), amp1: C64::new(h, 0.0) }
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amp0: C64::new(h, 0.0), amp1: C64::new(-h, 0.0) }
    }

    pub fn plus_y() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amp0: C64::new(h, 0.0), amp1: C64::new(0.0, h) }
    }

    pub fn amp0(&self) -> C64 {
        self.amp0
    }

    pub fn amp1(&self) -> C64 {
        self.amp1
    }

    pub fn to_state(self) -> PureState {
        PureState { num_qubits: 1, amps: vec![self.amp0, self.amp1] }
    }
}

/// Dense pure state of `num_qubits` qubits.
///
/// A register of zero qubits is a scalar; it appears when every qubit of a
/// register has been measured.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadDimension(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_PURE_QUBITS {
            return Err(Error::TooManyQubits(num_qubits, MAX_PURE_QUBITS));
        }
        let state = Self { num_qubits, amps };
        let n = state.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_PURE_QUBITS {
            return Err(Error::TooManyQubits(num_qubits, MAX_PURE_QUBITS));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        *amps.get_mut(index).ok_or(Error::BadDimension(index))? = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
    }

    /// Bit mask of qubit `q` (1-based) within the amplitude index.
    #[inline]
    pub(crate) fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - q)
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.num_qubits {
            Err(Error::QubitOutOfRange { index: q, num_qubits: self.num_qubits })
        } else {
            Ok(())
        }
    }

    /// In-place 2×2 unitary on qubit `q`.
    pub(crate) fn apply_mat2(&mut self, q: usize, m: &Mat2) {
        let mask = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub(crate) fn apply_pauli_x(&mut self, q: usize) {
        let mask = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                self.amps.swap(i, i | mask);
            }
        }
    }

    pub(crate) fn apply_pauli_z(&mut self, q: usize) {
        let mask = self.mask(q);
        self.amps
            .iter_mut()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .for_each(|(_, a)| *a = -*a);
    }

    pub(crate) fn apply_local_in_place(&mut self, q: usize, gate: &LocalGate) {
        match gate {
            LocalGate::PauliX => self.apply_pauli_x(q),
            LocalGate::PauliZ => self.apply_pauli_z(q),
            g => self.apply_mat2(q, &g.matrix()),
        }
    }

    /// Multiplies every amplitude with `z_a = z_b = 1` by `-e^{iθ}`.
    pub(crate) fn apply_cphase_in_place(&mut self, a: usize, b: usize, theta: f64) {
        let both = self.mask(a) | self.mask(b);
        let phase = -C64::from_polar(1.0, theta);
        self.amps
            .iter_mut()
            .enumerate()
            .filter(|(i, _)| i & both == both)
            .for_each(|(_, amp)| *amp *= phase);
    }

    /// Contracts qubit `q` with `⟨v|` and drops it from the register.
    /// Returns the unnormalized remainder.
    pub(crate) fn project_out(&self, q: usize, v: &[C64; 2]) -> PureState {
        let n = self.num_qubits;
        let mask = self.mask(q);
        let low = mask - 1;
        let (c0, c1) = (v[0].conj(), v[1].conj());
        let amps = (0..1usize << (n - 1))
            .map(|r| {
                let i0 = ((r & !low) << 1) | (r & low);
                c0 * self.amps[i0] + c1 * self.amps[i0 | mask]
            })
            .collect();
        PureState { num_qubits: n - 1, amps }
    }

    /// Moves qubits into the given order: `order[k]` is the current index of
    /// the qubit that ends up at position `k + 1`.
    pub fn permuted(&self, order: &[usize]) -> Result<PureState> {
        let n = self.num_qubits;
        if order.len() != n {
            return Err(Error::DimensionMismatch(order.len(), n));
        }
        let mut seen = vec![false; n + 1];
        for &q in order {
            self.check_qubit(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::IndexClash(q));
            }
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (old, &a) in self.amps.iter().enumerate() {
            let new = order.iter().enumerate().fold(0usize, |acc, (k, &q)| {
                let bit = (old >> (n - q)) & 1;
                acc | (bit << (n - 1 - k))
            });
            amps[new] = a;
        }
        Ok(PureState { num_qubits: n, amps })
    }
}

/// Tensor product of the inputs, qubit 1 first.
pub fn init_register(qubits: &[InputQubit]) -> Result<PureState> {
    if qubits.is_empty() {
        return Err(Error::EmptyRegister);
    }
    if qubits.len() > MAX_PURE_QUBITS {
        return Err(Error::TooManyQubits(qubits.len(), MAX_PURE_QUBITS));
    }
    for q in qubits {
        InputQubit::new(q.amp0, q.amp1)?;
    }
    let mut amps = vec![C64::new(1.0, 0.0)];
    for q in qubits {
        amps = amps.iter().flat_map(|&a| [a * q.amp0, a * q.amp1]).collect();
    }
    Ok(PureState { num_qubits: qubits.len(), amps })
}

pub fn apply_local(state: &PureState, qubit: usize, gate: LocalGate) -> Result<PureState> {
    state.check_qubit(qubit)?;
    let mut out = state.clone();
    out.apply_local_in_place(qubit, &gate);
    Ok(out)
}

/// Diagonal entangling gate `|11⟩_ab → -e^{iθ}|11⟩_ab`. `theta = 0` is the
/// ideal controlled-Z; `theta = π` is the identity.
pub fn apply_cphase(state: &PureState, a: usize, b: usize, theta: f64) -> Result<PureState> {
    state.check_qubit(a)?;
    state.check_qubit(b)?;
    if a == b {
        return Err(Error::IndexClash(a));
    }
    let mut out = state.clone();
    out.apply_cphase_in_place(a, b, theta);
    Ok(out)
}

/// Single-qubit projective measurement basis. Outcome 0 is always the
/// `+1` eigenvector of the measured observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementBasis {
    X,
    Y,
    Z,
    /// Projects onto `(|0⟩ ± e^{iα}|1⟩)/√2`.
    Planar(f64),
}

impl MeasurementBasis {
    /// Equatorial basis with the angle folded into `(-π, π]`.
    pub fn planar(alpha: f64) -> Self {
        let mut a = alpha.rem_euclid(2.0 * PI);
        if a > PI {
            a -= 2.0 * PI;
        }
        MeasurementBasis::Planar(a)
    }

    pub fn canonical(self) -> Self {
        match self {
            MeasurementBasis::Planar(a) => Self::planar(a),
            b => b,
        }
    }

    /// Basis vector for `outcome`.
    pub fn vector(self, outcome: u8) -> [C64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let alpha = match self {
            MeasurementBasis::Z => {
                return if outcome == 0 {
                    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
                } else {
                    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
                };
            }
            MeasurementBasis::X => 0.0,
            MeasurementBasis::Y => PI / 2.0,
            MeasurementBasis::Planar(a) => a,
        };
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        [C64::new(h, 0.0), C64::from_polar(sign * h, alpha)]
    }
}

pub enum MeasureMode<'a> {
    Sample(&'a mut dyn RngCore),
    Force(u8),
}

#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: u8,
    /// Born probability of `outcome` before the measurement.
    pub probability: f64,
    /// Post-measurement state with the measured qubit removed.
    pub state: PureState,
}

/// Projective measurement of `qubit`. The measured qubit leaves the register
/// and higher-indexed qubits shift down by one.
pub fn measure(
    state: &PureState,
    qubit: usize,
    basis: MeasurementBasis,
    mode: MeasureMode<'_>,
) -> Result<Measurement> {
    state.check_qubit(qubit)?;
    let branch0 = state.project_out(qubit, &basis.vector(0));
    let p0 = branch0.norm_sqr().clamp(0.0, 1.0);
    let (outcome, mut post, probability) = match mode {
        MeasureMode::Force(o) if o > 1 => {
            return Err(Error::InvalidParameter(format!("outcome {o} is not a bit")))
        }
        MeasureMode::Force(0) => (0, branch0, p0),
        MeasureMode::Force(_) => (1, state.project_out(qubit, &basis.vector(1)), 1.0 - p0),
        MeasureMode::Sample(rng) => {
            if rng.random::<f64>() < p0 {
                (0, branch0, p0)
            } else {
                (1, state.project_out(qubit, &basis.vector(1)), 1.0 - p0)
            }
        }
    };
    if probability < FORCE_TOL {
        return Err(Error::ZeroProbabilityOutcome { outcome, probability });
    }
    post.normalize();
    Ok(Measurement { outcome, probability, state: post })
}

/// `⟨s1|s2⟩`.
pub fn overlap(s1: &PureState, s2: &PureState) -> Result<C64> {
    if s1.num_qubits != s2.num_qubits {
        return Err(Error::DimensionMismatch(s1.num_qubits, s2.num_qubits));
    }
    Ok(s1.amps.iter().zip(&s2.amps).map(|(a, b)| a.conj() * b).sum())
}

/// `|⟨s1|s2⟩|²`.
pub fn fidelity(s1: &PureState, s2: &PureState) -> Result<f64> {
    overlap(s1, s2).map(|o| o.norm_sqr())
}

/// `⟨φ|ρ|φ⟩`.
pub fn fidelity_pure_mixed(phi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if phi.num_qubits() != rho.num_qubits() {
        return Err(Error::DimensionMismatch(phi.num_qubits(), rho.num_qubits()));
    }
    let m = rho.matrix();
    let a = phi.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        let row: C64 = a.iter().enumerate().map(|(j, aj)| m[(i, j)] * aj).sum();
        acc += ai.conj() * row;
    }
    Ok(acc.re)
}
