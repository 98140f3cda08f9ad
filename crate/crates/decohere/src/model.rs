//! Physical parameters, dimensionless groups, and the mass-renormalization
//! chain `δm → δm_{>ϖ} → δm_{<ϖ} → m_ϖ`.
//!
//! Everything downstream consumes only dimensionless combinations:
//! the coupling `α`, momenta `u = p/(m₀c)`, the cutoff ratio `r = ϖ/Ω`,
//! dimensionless times `τ = ϖt` (or `Ωt`), and the kinetic scale
//! `χ = m₀c²/(ħϖ)`. SI quantities are converted at the CLI boundary.
//!
//! The UV energy scale `ħΩ/(m₀c²)` entering the mass variation is not an
//! independent input; it equals `1/(χ·r)`. In the pure-decoherence
//! configuration `χ = 0` the scale is undefined and the mass-variation
//! chain reports zero — with the kinetic phase switched off the mass shift
//! enters no observable.

use std::f64::consts::PI;
use thiserror::Error;

/// CODATA fine-structure constant.
pub const FINE_STRUCTURE_ALPHA: f64 = 7.297_352_569_3e-3;

/// Momenta above this fraction of `m₀c` leave the non-relativistic regime
/// the model assumes; callers emit a warning but the formulas stay total.
pub const NON_RELATIVISTIC_BOUND: f64 = 0.1;

/// Spectral weight shape used to split the mass variation at `ϖ`.
///
/// The high-frequency share of the dressing integral is `e^{−ϖ/Ω}` for the
/// exponential weight (the same regularization that defines `δm` itself)
/// and `1 − ϖ/Ω` for a sharp band `[ϖ, Ω]`. The step variant exists for
/// sensitivity checks only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MassCutoff {
    #[default]
    Exponential,
    Step,
}

impl MassCutoff {
    fn high_frequency_fraction(self, cutoff_ratio: f64) -> f64 {
        match self {
            MassCutoff::Exponential => (-cutoff_ratio).exp(),
            MassCutoff::Step => 1.0 - cutoff_ratio,
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid momentum {0}: must be finite")]
    InvalidMomentum(f64),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// The single source of every dimensionless group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    alpha: f64,
    omega_uv: f64,
    omega_ir: f64,
    mass_ratio_m_over_m0: f64,
    kinetic_scale_chi: f64,
    mass_cutoff: MassCutoff,
}

impl PhysicalParams {
    pub fn new(
        alpha: f64,
        omega_uv: f64,
        omega_ir: f64,
        mass_ratio_m_over_m0: f64,
        kinetic_scale_chi: f64,
    ) -> Result<Self> {
        let all_finite = alpha.is_finite()
            && omega_uv.is_finite()
            && omega_ir.is_finite()
            && mass_ratio_m_over_m0.is_finite()
            && kinetic_scale_chi.is_finite();
        if !all_finite {
            return Err(ModelError::InvalidParams("all fields must be finite".into()));
        }
        if !(alpha > 0.0) {
            return Err(ModelError::InvalidParams(format!("alpha {alpha} must be > 0")));
        }
        if !(omega_ir > 0.0 && omega_ir <= omega_uv) {
            return Err(ModelError::InvalidParams(format!(
                "need 0 < omega_ir <= omega_uv, got omega_ir {omega_ir}, omega_uv {omega_uv}"
            )));
        }
        if !(mass_ratio_m_over_m0 > 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "mass_ratio {mass_ratio_m_over_m0} must be > 0"
            )));
        }
        if !(kinetic_scale_chi >= 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "chi {kinetic_scale_chi} must be >= 0"
            )));
        }
        Ok(PhysicalParams {
            alpha,
            omega_uv,
            omega_ir,
            mass_ratio_m_over_m0,
            kinetic_scale_chi,
            mass_cutoff: MassCutoff::default(),
        })
    }

    pub fn with_mass_cutoff(mut self, cutoff: MassCutoff) -> Self {
        self.mass_cutoff = cutoff;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_uv(&self) -> f64 {
        self.omega_uv
    }

    pub fn omega_ir(&self) -> f64 {
        self.omega_ir
    }

    pub fn mass_ratio_m_over_m0(&self) -> f64 {
        self.mass_ratio_m_over_m0
    }

    pub fn kinetic_scale_chi(&self) -> f64 {
        self.kinetic_scale_chi
    }

    pub fn mass_cutoff(&self) -> MassCutoff {
        self.mass_cutoff
    }

    /// `r = ϖ/Ω ∈ (0, 1]`.
    pub fn cutoff_ratio(&self) -> f64 {
        self.omega_ir / self.omega_uv
    }

    /// `ħΩ/(m₀c²) = 1/(χ·r)`; `None` in the pure-decoherence mode `χ = 0`.
    pub fn uv_energy_scale(&self) -> Option<f64> {
        if self.kinetic_scale_chi == 0.0 {
            None
        } else {
            Some(1.0 / (self.kinetic_scale_chi * self.cutoff_ratio()))
        }
    }
}

/// A pair of dimensionless collinear momenta `u = p/(m₀c)`.
///
/// Every decoherence expression depends on the pair only through
/// `|u − u′|²` and `u² − u′²`, so collinear scalars lose nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPair {
    u: f64,
    u_prime: f64,
}

impl MomentumPair {
    pub fn new(u: f64, u_prime: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(ModelError::InvalidMomentum(u));
        }
        if !u_prime.is_finite() {
            return Err(ModelError::InvalidMomentum(u_prime));
        }
        Ok(MomentumPair { u, u_prime })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn u_prime(&self) -> f64 {
        self.u_prime
    }

    /// `|u − u′|²`.
    pub fn separation_sq(&self) -> f64 {
        let d = self.u - self.u_prime;
        d * d
    }

    /// `u² − u′²`, evaluated as `(u − u′)(u + u′)`.
    pub fn diff_of_squares(&self) -> f64 {
        (self.u - self.u_prime) * (self.u + self.u_prime)
    }

    /// True when either momentum exceeds the non-relativistic guard; the
    /// caller decides how to warn.
    pub fn exceeds_nonrelativistic_bound(&self) -> bool {
        self.u.abs() > NON_RELATIVISTIC_BOUND || self.u_prime.abs() > NON_RELATIVISTIC_BOUND
    }
}

/// Decoherence strength `Q = (2α/3π)·|u − u′|²`.
pub fn q_factor(pair: &MomentumPair, params: &PhysicalParams) -> f64 {
    2.0 * params.alpha / (3.0 * PI) * pair.separation_sq()
}

/// Phase strength `Qp = (2α/3π)·(u² − u′²)`, antisymmetric in the pair.
pub fn qp_factor(pair: &MomentumPair, params: &PhysicalParams) -> f64 {
    2.0 * params.alpha / (3.0 * PI) * pair.diff_of_squares()
}

/// Free-evolution phase prefactor `(u² − u′²)·(m₀/m_ϖ)·χ/2`; the phase at
/// dimensionless time `τ = ϖt` is `exp(−i·prefactor·τ)`.
pub fn phase_prefactor(pair: &MomentumPair, params: &PhysicalParams) -> f64 {
    pair.diff_of_squares() * m0_over_m_varpi(params) * params.kinetic_scale_chi / 2.0
}

/// `δm/m₀ = (4α/3π)·(ħΩ/m₀c²)·(m/m₀)²`; zero in pure-decoherence mode.
pub fn delta_m_over_m0(params: &PhysicalParams) -> f64 {
    let Some(scale) = params.uv_energy_scale() else {
        return 0.0;
    };
    let mass_ratio = params.mass_ratio_m_over_m0;
    4.0 * params.alpha / (3.0 * PI) * scale * mass_ratio * mass_ratio
}

/// High-frequency share `δm_{>ϖ}/m₀` of the mass variation.
pub fn delta_m_above(params: &PhysicalParams) -> f64 {
    delta_m_over_m0(params) * params.mass_cutoff.high_frequency_fraction(params.cutoff_ratio())
}

/// Low-frequency share `δm_{<ϖ}/m₀ = δm/m₀ − δm_{>ϖ}/m₀`.
pub fn delta_m_below(params: &PhysicalParams) -> f64 {
    delta_m_over_m0(params) - delta_m_above(params)
}

/// `m_ϖ/m = 1/(1 + δm_{<ϖ}/m)`.
pub fn m_varpi_over_m(params: &PhysicalParams) -> f64 {
    let delta_below_over_m = delta_m_below(params) / params.mass_ratio_m_over_m0;
    1.0 / (1.0 + delta_below_over_m)
}

/// `m₀/m_ϖ`, the ratio entering the partially-correlated kinetic phase.
pub fn m0_over_m_varpi(params: &PhysicalParams) -> f64 {
    1.0 / (params.mass_ratio_m_over_m0 * m_varpi_over_m(params))
}
