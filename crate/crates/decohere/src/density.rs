//! Wave packets and reduced-density-matrix evolution.
//!
//! Every matrix element is assembled from the closed forms in
//! [`crate::decoherence`]:
//!
//! * fully correlated — free phase (physical mass `m`) times the
//!   time-independent dressing factor,
//! * partially correlated — free phase (`m_ϖ`), step-cutoff `Γ̄_vac` and
//!   `Γ̄_i`, and the dressing factor of the modes above `ϖ`,
//! * uncorrelated — free phase (bare mass `m₀`, as the source formulas
//!   print it) and the exponential-cutoff `Γ_r`, `Γ_i`.
//!
//! Time is `τ = ϖt` except in the uncorrelated regime, where it is `Ωt`.
//!
//! The result is positive semidefinite by construction: each magnitude
//! suppression is a Gaussian kernel `exp(−f(τ)·|u_i − u_j|²)` with
//! `f(τ) ≥ 0` Schur-multiplied onto a rank-one matrix, and every phase
//! factors into per-index phases (it depends on `(i, j)` only through
//! `u_i² − u_j²`). Diagonal elements are pinned to `|C_i|²` exactly at all
//! times in every regime.

use crate::decoherence::{self, DecoherenceError, DressingMode, Regime};
use crate::model::{self, ModelError, MomentumPair, PhysicalParams};
use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

/// Dense Hermitian matrices stay cheap to diagonalize up to this size.
pub const MAX_PACKET_POINTS: usize = 256;

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("invalid wave packet: {0}")]
    InvalidPacket(String),
    #[error("regime/parameter mismatch: {0}")]
    RegimeMismatch(String),
    #[error("packet has {0} points, the dense evolution is capped at {MAX_PACKET_POINTS}")]
    PacketTooLarge(usize),
    #[error("invalid evolution time {0}: must be finite and >= 0")]
    InvalidTime(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decoherence(#[from] DecoherenceError),
}

pub type Result<T> = std::result::Result<T, DensityError>;

/// Collinear momentum grid with normalized complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    momenta: Vec<f64>,
    amplitudes: Vec<Complex64>,
}

impl WavePacket {
    /// Builds a packet from explicit `(u_i, C_i)` pairs; amplitudes are
    /// normalized so `Σ|C_i|² = 1`.
    pub fn new(momenta: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if momenta.is_empty() {
            return Err(DensityError::InvalidPacket("empty momentum grid".into()));
        }
        if momenta.len() != amplitudes.len() {
            return Err(DensityError::InvalidPacket(format!(
                "{} momenta but {} amplitudes",
                momenta.len(),
                amplitudes.len()
            )));
        }
        for w in momenta.windows(2) {
            if !(w[1] > w[0]) {
                return Err(DensityError::InvalidPacket(format!(
                    "momenta must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if momenta.iter().any(|u| !u.is_finite()) {
            return Err(DensityError::InvalidPacket("non-finite momentum".into()));
        }
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(DensityError::InvalidPacket("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !(norm_sq > 0.0) {
            return Err(DensityError::InvalidPacket(
                "amplitudes have zero norm".into(),
            ));
        }
        let scale = 1.0 / norm_sq.sqrt();
        let amplitudes = amplitudes.into_iter().map(|c| c * scale).collect();
        Ok(WavePacket {
            momenta,
            amplitudes,
        })
    }

    /// Gaussian packet: `n` evenly spaced momenta over
    /// `[center − span·width, center + span·width]` with
    /// `C_i ∝ exp(−(u_i − center)²/(4·width²))`.
    pub fn gaussian(center: f64, width: f64, n: usize, span: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(DensityError::InvalidPacket(format!(
                "width {width} must be finite and > 0"
            )));
        }
        if !(span > 0.0 && span.is_finite()) {
            return Err(DensityError::InvalidPacket(format!(
                "span {span} must be finite and > 0"
            )));
        }
        if n < 2 {
            return Err(DensityError::InvalidPacket(format!(
                "gaussian packet needs n >= 2, got {n}"
            )));
        }
        if !center.is_finite() {
            return Err(DensityError::InvalidPacket(format!(
                "center {center} must be finite"
            )));
        }
        let lo = center - span * width;
        let hi = center + span * width;
        let mut momenta = Vec::with_capacity(n);
        let mut amplitudes = Vec::with_capacity(n);
        for k in 0..n {
            let u = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let d = u - center;
            momenta.push(u);
            amplitudes.push(Complex64::new((-d * d / (4.0 * width * width)).exp(), 0.0));
        }
        WavePacket::new(momenta, amplitudes)
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn max_abs_momentum(&self) -> f64 {
        self.momenta.iter().fold(0.0, |m, u| m.max(u.abs()))
    }
}

/// Evolution switches beyond the physical parameters.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvolveOptions {
    /// Dressing-factor route; the exact series unless explicitly asked for
    /// the small-`r` leading-log form.
    pub dressing: DressingMode,
}

/// Momentum-space reduced density matrix at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    entries: Array2<Complex64>,
    time: f64,
    regime: Regime,
}

impl ReducedDensityMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Dimensionless time: `ϖt`, or `Ωt` for the uncorrelated regime.
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    /// Largest entrywise deviation from `ρ = ρ†`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `Tr(ρ²) = Σ_{ij} |ρ_ij|²` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ_{i≠j} |ρ_ij|`.
    pub fn coherence_l1(&self) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += self.entries[(i, j)].norm();
                }
            }
        }
        sum
    }

    /// Smallest eigenvalue, from cyclic Jacobi on the real symmetric
    /// embedding `[[A, −B], [B, A]]` of `ρ = A + iB` (each eigenvalue of
    /// `ρ` appears twice in the embedding).
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim();
        let mut m = vec![vec![0.0f64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[(i, j)];
                m[i][j] = z.re;
                m[i + n][j + n] = z.re;
                m[i][j + n] = -z.im;
                m[i + n][j] = z.im;
            }
        }
        symmetric_jacobi_eigenvalues(&mut m)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cyclic Jacobi eigenvalues of a real symmetric matrix; deterministic and
/// adequate for the capped dimensions handled here.
fn symmetric_jacobi_eigenvalues(m: &mut [Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    if n == 1 {
        return vec![m[0][0]];
    }
    let frobenius: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let stop = 1e-15 * frobenius.max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p][q] * m[p][q];
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq.abs() <= 0.1 * stop / n as f64 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// Evolves `packet` to dimensionless time `tau` with default options.
pub fn evolve(
    packet: &WavePacket,
    params: &PhysicalParams,
    regime: Regime,
    tau: f64,
) -> Result<ReducedDensityMatrix> {
    evolve_with_options(packet, params, regime, tau, &EvolveOptions::default())
}

pub fn evolve_with_options(
    packet: &WavePacket,
    params: &PhysicalParams,
    regime: Regime,
    tau: f64,
    options: &EvolveOptions,
) -> Result<ReducedDensityMatrix> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(DensityError::InvalidTime(tau));
    }
    let n = packet.len();
    if n > MAX_PACKET_POINTS {
        return Err(DensityError::PacketTooLarge(n));
    }
    if regime == Regime::PartiallyCorrelated && params.omega_ir() >= params.omega_uv() {
        return Err(DensityError::RegimeMismatch(format!(
            "partially correlated evolution needs omega_ir < omega_uv, got {} >= {}",
            params.omega_ir(),
            params.omega_uv()
        )));
    }

    let momenta = packet.momenta();
    let amplitudes = packet.amplitudes();
    let mut entries = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    for i in 0..n {
        entries[(i, i)] = Complex64::new(amplitudes[i].norm_sqr(), 0.0);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let pair = MomentumPair::new(momenta[i], momenta[j])?;
            let factor = off_diagonal_factor(&pair, params, regime, tau, options)?;
            let value = amplitudes[i] * amplitudes[j].conj() * factor;
            entries[(i, j)] = value;
            entries[(j, i)] = value.conj();
        }
    }
    Ok(ReducedDensityMatrix {
        entries,
        time: tau,
        regime,
    })
}

/// The scalar multiplying `C_i C_j^*` in the chosen regime.
fn off_diagonal_factor(
    pair: &MomentumPair,
    params: &PhysicalParams,
    regime: Regime,
    tau: f64,
    options: &EvolveOptions,
) -> Result<Complex64> {
    let q = model::q_factor(pair, params);
    let qp = model::qp_factor(pair, params);
    let chi = params.kinetic_scale_chi();
    let dressing = |q: f64| -> Result<f64> {
        let factor = match options.dressing {
            DressingMode::Series => decoherence::dressing_factor_full(q, params.cutoff_ratio())?,
            DressingMode::LogApprox => {
                decoherence::dressing_factor_log_approx(q, params.cutoff_ratio())?
            }
        };
        Ok(factor.value)
    };
    match regime {
        Regime::FullyCorrelated => {
            // Free phase with the physical mass m; dressing fixed at t = 0.
            let prefactor =
                pair.diff_of_squares() / params.mass_ratio_m_over_m0() * chi / 2.0;
            Ok(Complex64::from_polar(dressing(q)?, -prefactor * tau))
        }
        Regime::PartiallyCorrelated => {
            let gamma_vac = decoherence::gamma_vac_partial(q, tau)?;
            let gamma_i = decoherence::gamma_i_partial(qp, tau)?;
            let prefactor = model::phase_prefactor(pair, params);
            let magnitude = gamma_vac.exp() * dressing(q)?;
            Ok(Complex64::from_polar(magnitude, -prefactor * tau + gamma_i))
        }
        Regime::Uncorrelated => {
            // Free phase with the bare mass m₀; τ here is Ωt, so the
            // prefactor carries χ·r = m₀c²/(ħΩ).
            let gamma = decoherence::gamma_uncorrelated(q, qp, tau)?;
            let prefactor = pair.diff_of_squares() * chi * params.cutoff_ratio() / 2.0;
            Ok(Complex64::from_polar(
                gamma.gamma_real.exp(),
                -prefactor * tau + gamma.gamma_imag,
            ))
        }
    }
}
