//! Scenario runners. Each returns the complete CSV payload as a string;
//! output order is fixed, so identical configurations give identical bytes.

use super::config::{ConfigError, ScenarioConfig};
use super::csv::{format_float, CsvBuilder};
use crate::decoherence::{self, AsymptoticBranch, DecoherenceError, Regime};
use crate::density::{self, DensityError, EvolveOptions};
use crate::model::{self, ModelError, MomentumPair};
use crate::oracle::{self, Cutoff, KernelKind, ModeGrid, OracleError, SpectralKernel};
use crate::specfun::{self, SpecFunError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Oracle(#[from] OracleError),
    #[error("numerical failure: {0}")]
    SpecFun(#[from] SpecFunError),
    #[error("numerical failure: {0}")]
    Decoherence(#[from] DecoherenceError),
    #[error("numerical failure: {0}")]
    Density(#[from] DensityError),
    #[error("numerical failure: {0}")]
    Model(#[from] ModelError),
}

impl RunError {
    /// Process exit code contract: 1 for configuration problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;

/// Single evolution: one row per grid time with the first off-diagonal
/// element, its decoherence exponents, and the global diagnostics.
pub fn run_evolve(config: &ScenarioConfig) -> Result<String> {
    let packet = config.build_packet()?;
    if packet.len() < 2 {
        return Err(RunError::Config(ConfigError::Invalid(
            "packet: evolve output reports element (1,2); the packet needs at least 2 momenta"
                .into(),
        )));
    }
    let options = EvolveOptions {
        dressing: config.dressing,
    };
    let pair = MomentumPair::new(packet.momenta()[0], packet.momenta()[1])?;
    let q = model::q_factor(&pair, &config.params);
    let qp = model::qp_factor(&pair, &config.params);

    let mut csv = CsvBuilder::new(&[
        "tau",
        "abs_rho_12",
        "arg_rho_12",
        "gamma_vac",
        "gamma_i",
        "purity",
        "coherence_l1",
    ]);
    for tau in config.tau_grid() {
        let rho = density::evolve_with_options(
            &packet,
            &config.params,
            config.regime,
            tau,
            &options,
        )?;
        let (gamma_vac, gamma_i) = match config.regime {
            Regime::PartiallyCorrelated => (
                decoherence::gamma_vac_partial(q, tau)?,
                decoherence::gamma_i_partial(qp, tau)?,
            ),
            Regime::Uncorrelated => {
                let g = decoherence::gamma_uncorrelated(q, qp, tau)?;
                (g.gamma_real, g.gamma_imag)
            }
            // Time-independent regime: the dressing shows up in abs_rho_12.
            Regime::FullyCorrelated => (0.0, 0.0),
        };
        let element = rho.entry(0, 1);
        csv.row(&[
            format_float(tau),
            format_float(element.norm()),
            format_float(element.arg()),
            format_float(gamma_vac),
            format_float(gamma_i),
            format_float(rho.purity()),
            format_float(rho.coherence_l1()),
        ]);
    }
    Ok(csv.finish())
}

/// `|Γ̄_vac(τ)|` columns for each requested `Q` over the configured grid.
pub fn run_figure1(config: &ScenarioConfig) -> Result<String> {
    let header: Vec<String> = std::iter::once("tau".to_string())
        .chain(config.figure1_q.iter().map(|q| format!("abs_gamma_vac_Q{q}")))
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = CsvBuilder::new(&header_refs);
    for tau in config.tau_grid() {
        let mut fields = vec![format_float(tau)];
        for &q in &config.figure1_q {
            fields.push(format_float(decoherence::gamma_vac_partial(q, tau)?.abs()));
        }
        csv.row(&fields);
    }
    Ok(csv.finish())
}

/// Long-format `Q` sweep of the vacuum exponent and its asymptotic laws.
pub fn run_sweep(config: &ScenarioConfig) -> Result<String> {
    let mut csv = CsvBuilder::new(&[
        "q",
        "tau",
        "gamma_vac",
        "gamma_asym_small",
        "gamma_asym_large",
    ]);
    for &q in &config.sweep_q {
        for tau in config.tau_grid() {
            csv.row(&[
                format_float(q),
                format_float(tau),
                format_float(decoherence::gamma_vac_partial(q, tau)?),
                format_float(decoherence::gamma_vac_asymptotic(
                    q,
                    tau,
                    AsymptoticBranch::SmallTau,
                )),
                format_float(decoherence::gamma_vac_asymptotic(
                    q,
                    tau,
                    AsymptoticBranch::LargeTau,
                )),
            ]);
        }
    }
    Ok(csv.finish())
}

/// One oracle-equivalence check: worst observed error against its bound.
struct Check {
    name: &'static str,
    observed: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.observed <= self.tolerance
    }
}

pub struct ValidationReport {
    pub csv: String,
    pub all_passed: bool,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Runs the oracle-equivalence suite; independent of the scenario config.
pub fn run_validate() -> Result<ValidationReport> {
    let mut checks = Vec::new();

    // Special functions against direct quadrature of their defining
    // integrals, on a coarser sibling of the acceptance grid.
    let grid = log_grid(1e-6, 1e6, 60);
    let mut worst_ci = 0.0f64;
    let mut worst_si = 0.0f64;
    let mut worst_e1 = 0.0f64;
    for &x in &grid {
        let cin_oracle = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::OneMinusCosOverOmega,
                Cutoff::Step { omega_ir: 1.0 },
                x,
            )?,
            1e-12,
        )?;
        let ci_oracle = specfun::EULER_GAMMA + x.ln() - cin_oracle;
        let ci = specfun::cosint(x)?.value;
        worst_ci = worst_ci.max(normalized_error(ci, ci_oracle));

        let deficit_oracle = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::TMinusSinOverOmega,
                Cutoff::Step { omega_ir: 1.0 },
                x,
            )?,
            1e-12,
        )?;
        let si_oracle = x - deficit_oracle;
        let si = specfun::sinint(x)?.value;
        worst_si = worst_si.max(normalized_error(si, si_oracle));

        let e1_oracle = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::OneOverOmega,
                Cutoff::StepLowExponential {
                    omega_ir: x,
                    omega_uv: 1.0,
                },
                0.0,
            )?,
            1e-12,
        )?;
        let e1 = specfun::expint_e1(x)?.value;
        worst_e1 = worst_e1.max(normalized_error(e1, e1_oracle));
    }
    checks.push(Check {
        name: "specfun_ci_vs_oracle",
        observed: worst_ci,
        tolerance: 1.0,
    });
    checks.push(Check {
        name: "specfun_si_vs_oracle",
        observed: worst_si,
        tolerance: 1.0,
    });
    checks.push(Check {
        name: "specfun_e1_vs_oracle",
        observed: worst_e1,
        tolerance: 1.0,
    });

    // Step-cutoff closed forms, relative 1e-8 over the standard grid.
    let mut worst_vac = 0.0f64;
    let mut worst_phase = 0.0f64;
    for &tau in &log_grid(1e-3, 1e3, 60) {
        let vac_oracle = -oracle::integrate(
            &SpectralKernel::new(
                KernelKind::OneMinusCosOverOmega,
                Cutoff::Step { omega_ir: 1.0 },
                tau,
            )?,
            1e-10,
        )?;
        let vac = decoherence::gamma_vac_partial(1.0, tau)?;
        worst_vac = worst_vac.max(relative_error(vac, vac_oracle));

        let phase_oracle = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::TMinusSinOverOmega,
                Cutoff::Step { omega_ir: 1.0 },
                tau,
            )?,
            1e-10,
        )?;
        let phase = decoherence::gamma_i_partial(1.0, tau)?;
        worst_phase = worst_phase.max(relative_error(phase, phase_oracle));
    }
    checks.push(Check {
        name: "gamma_vac_partial_vs_oracle",
        observed: worst_vac,
        tolerance: 1e-8,
    });
    checks.push(Check {
        name: "gamma_i_partial_vs_oracle",
        observed: worst_phase,
        tolerance: 1e-8,
    });

    // Exponential-cutoff closed forms of the uncorrelated regime.
    let mut worst_r = 0.0f64;
    let mut worst_i = 0.0f64;
    for &tau in &log_grid(1e-3, 1e3, 40) {
        let r_oracle = -oracle::integrate(
            &SpectralKernel::new(
                KernelKind::OneMinusCosOverOmega,
                Cutoff::Exponential { omega_uv: 1.0 },
                tau,
            )?,
            1e-10,
        )?;
        let i_oracle = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::TMinusSinOverOmega,
                Cutoff::Exponential { omega_uv: 1.0 },
                tau,
            )?,
            1e-10,
        )?;
        let g = decoherence::gamma_uncorrelated(1.0, 1.0, tau)?;
        worst_r = worst_r.max(relative_error(g.gamma_real, r_oracle));
        worst_i = worst_i.max(relative_error(g.gamma_imag, i_oracle));
    }
    checks.push(Check {
        name: "gamma_r_uncorrelated_vs_oracle",
        observed: worst_r,
        tolerance: 1e-8,
    });
    checks.push(Check {
        name: "gamma_i_uncorrelated_vs_oracle",
        observed: worst_i,
        tolerance: 1e-8,
    });

    // Dressing series against E1 through the analytic identity.
    let mut worst_identity = 0.0f64;
    for &r in &log_grid(1e-6, 1.0, 30) {
        let bracket = decoherence::dressing_exponent_bracket(r)?;
        let e1 = specfun::expint_e1(r)?.value;
        worst_identity = worst_identity.max((bracket + e1).abs());
    }
    checks.push(Check {
        name: "dressing_series_e1_identity",
        observed: worst_identity,
        tolerance: 1e-12,
    });

    // Discrete mode sum against the continuum integral over its support.
    let params = model::PhysicalParams::new(1.0 / 137.036, 1.0, 0.01, 1.0, 0.0)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let pair = MomentumPair::new(0.0, 0.05)?;
    let continuum = {
        let full = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::OneOverOmega,
                Cutoff::StepLowExponential {
                    omega_ir: 0.01,
                    omega_uv: 1.0,
                },
                0.0,
            )?,
            1e-12,
        )?;
        let tail = oracle::integrate(
            &SpectralKernel::new(
                KernelKind::OneOverOmega,
                Cutoff::StepLowExponential {
                    omega_ir: 10.0,
                    omega_uv: 1.0,
                },
                0.0,
            )?,
            1e-12,
        )?;
        0.5 * model::q_factor(&pair, &params) * (full - tail)
    };
    let mut previous = f64::INFINITY;
    let mut monotone = true;
    let mut final_rel = f64::NAN;
    for n in [25_000usize, 50_000, 100_000] {
        let grid = ModeGrid::new(0.01, 10.0, n).map_err(RunError::Oracle)?;
        let rel = (oracle::discrete_overlap_exponent(&pair, &grid, &params) - continuum).abs()
            / continuum;
        monotone &= rel < previous;
        previous = rel;
        final_rel = rel;
    }
    checks.push(Check {
        name: "discrete_overlap_convergence",
        observed: if monotone { final_rel } else { f64::INFINITY },
        tolerance: 1e-3,
    });

    let mut csv = CsvBuilder::new(&["check", "status", "observed", "tolerance"]);
    let mut all_passed = true;
    for check in &checks {
        all_passed &= check.passed();
        csv.row(&[
            check.name.to_string(),
            if check.passed() { "pass" } else { "fail" }.to_string(),
            format_float(check.observed),
            format_float(check.tolerance),
        ]);
    }
    Ok(ValidationReport {
        csv: csv.finish(),
        all_passed,
    })
}

/// `|a − b|` scaled by the acceptance allowance `max(1e-10, 1e-12·|b|)`;
/// values at or below 1 pass.
fn normalized_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1e-10f64.max(1e-12 * b.abs())
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = b.abs().max(1e-12);
    (a - b).abs() / scale
}
