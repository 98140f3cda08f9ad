//! Sine, cosine and exponential integrals.
//!
//! The decoherence closed forms need `Si`, `Ci`, `E1` and Euler's constant,
//! plus two cancellation-free combinations that appear directly in the
//! exponents:
//!
//! * [`cin`]: `Cin(x) = γ + ln x − Ci(x) = ∫₀ˣ (1 − cos u)/u du`,
//! * [`si_deficit`]: `x − Si(x) = ∫₀ˣ (1 − sin u / u) du`.
//!
//! Evaluating `γ − Ci(x) + ln x` or `x − Si(x)` by subtraction loses most
//! significant digits for small `x`; the dedicated entry points sum the
//! positive-leading-term series instead.
//!
//! Small arguments use the defining power series; large arguments use
//! modified-Lentz continued fractions, for `Ci`/`Si` through
//! `E1(ix) = −Ci(x) + i(Si(x) − π/2)`. Switch points: `x = 4` for `Ci`/`Si`
//! and their variants, `x = 1` for `E1`. Accuracy is anchored by the
//! quadrature oracle tests, not by the switch points themselves.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

/// Euler–Mascheroni constant to full double precision.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Argument below which `Ci`, `Si`, `cin` and `si_deficit` use the power
/// series; above it the continued fraction.
pub const CI_SI_SWITCH: f64 = 4.0;

/// Argument at and above which `E1` uses the continued fraction.
pub const E1_SWITCH: f64 = 1.0;

const MAX_SERIES_TERMS: usize = 200;
const MAX_CF_ITERATIONS: usize = 400;
const CF_TINY: f64 = 1e-300;

/// Value plus an a-posteriori absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_abs_error: f64,
}

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("{func}: argument {x} outside domain ({requirement})")]
    Domain {
        func: &'static str,
        x: f64,
        requirement: &'static str,
    },
    #[error("{func}: no convergence at argument {x}")]
    NoConvergence { func: &'static str, x: f64 },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

fn require(cond: bool, func: &'static str, x: f64, requirement: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(SpecFunError::Domain {
            func,
            x,
            requirement,
        })
    }
}

fn result(value: f64) -> SpecFunResult {
    SpecFunResult {
        value,
        est_abs_error: 8.0 * f64::EPSILON * (1.0 + value.abs()),
    }
}

/// `Cin(x) = ∫₀ˣ (1 − cos u)/u du`, the cancellation-free form of
/// `γ − Ci(x) + ln x`.
pub fn cin(x: f64) -> Result<SpecFunResult> {
    require(x >= 0.0 && x.is_finite(), "cin", x, "x >= 0")?;
    if x == 0.0 {
        return Ok(result(0.0));
    }
    if x <= CI_SI_SWITCH {
        Ok(result(cin_series(x)?))
    } else {
        let (ci_val, _si) = ci_si_continued_fraction(x)?;
        Ok(result(EULER_GAMMA + x.ln() - ci_val))
    }
}

/// `Ci(x) = γ + ln x + ∫₀ˣ (cos u − 1)/u du` for `x > 0`.
pub fn cosint(x: f64) -> Result<SpecFunResult> {
    require(x > 0.0 && x.is_finite(), "cosint", x, "x > 0")?;
    if x <= CI_SI_SWITCH {
        Ok(result(EULER_GAMMA + x.ln() - cin_series(x)?))
    } else {
        let (ci_val, _si) = ci_si_continued_fraction(x)?;
        Ok(result(ci_val))
    }
}

/// `Si(x) = ∫₀ˣ sin u / u du` for `x ≥ 0`.
pub fn sinint(x: f64) -> Result<SpecFunResult> {
    require(x >= 0.0 && x.is_finite(), "sinint", x, "x >= 0")?;
    if x == 0.0 {
        return Ok(result(0.0));
    }
    if x <= CI_SI_SWITCH {
        Ok(result(si_series(x)?))
    } else {
        let (_ci, si_val) = ci_si_continued_fraction(x)?;
        Ok(result(si_val))
    }
}

/// `x − Si(x) = ∫₀ˣ (1 − sin u / u) du`, cancellation-free for small `x`.
pub fn si_deficit(x: f64) -> Result<SpecFunResult> {
    require(x >= 0.0 && x.is_finite(), "si_deficit", x, "x >= 0")?;
    if x == 0.0 {
        return Ok(result(0.0));
    }
    if x <= CI_SI_SWITCH {
        Ok(result(si_deficit_series(x)?))
    } else {
        let (_ci, si_val) = ci_si_continued_fraction(x)?;
        Ok(result(x - si_val))
    }
}

/// `E1(x) = ∫ₓ^∞ e^{−u}/u du` for `x > 0`.
pub fn expint_e1(x: f64) -> Result<SpecFunResult> {
    require(x > 0.0 && x.is_finite(), "expint_e1", x, "x > 0")?;
    if x < E1_SWITCH {
        // E1 = −γ − ln x + Σ_{n≥1} (−1)^{n+1} xⁿ/(n·n!)
        let mut sum = 0.0;
        let mut power_over_fact = 1.0; // xⁿ/n!
        let mut converged = false;
        for n in 1..=MAX_SERIES_TERMS {
            power_over_fact *= x / n as f64;
            let term = power_over_fact / n as f64;
            sum += if n % 2 == 1 { term } else { -term };
            if term < f64::EPSILON * sum.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecFunError::NoConvergence {
                func: "expint_e1",
                x,
            });
        }
        Ok(result(-EULER_GAMMA - x.ln() + sum))
    } else {
        // Modified Lentz: E1(x) = e^{−x} / (x + 1 − 1/(x + 3 − 4/(x + 5 − ⋯)))
        let mut b = x + 1.0;
        let mut c = 1.0 / CF_TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut converged = false;
        for i in 1..=MAX_CF_ITERATIONS {
            let a = -((i * i) as f64);
            b += 2.0;
            d = a * d + b;
            if d.abs() < CF_TINY {
                d = CF_TINY;
            }
            c = b + a / c;
            if c.abs() < CF_TINY {
                c = CF_TINY;
            }
            d = 1.0 / d;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < f64::EPSILON {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecFunError::NoConvergence {
                func: "expint_e1",
                x,
            });
        }
        // Underflows cleanly to 0 for very large x.
        Ok(result((-x).exp() * h))
    }
}

/// Series for `Cin`; positive leading term `x²/4`, no cancellation.
fn cin_series(x: f64) -> Result<f64> {
    let x2 = x * x;
    let mut even_power_over_fact = x2 / 2.0; // x^{2k}/(2k)! at k = 1
    let mut sum = even_power_over_fact / 2.0;
    for k in 2..=MAX_SERIES_TERMS {
        let two_k = 2.0 * k as f64;
        even_power_over_fact *= x2 / ((two_k - 1.0) * two_k);
        let term = even_power_over_fact / two_k;
        sum += if k % 2 == 1 { term } else { -term };
        if term < f64::EPSILON * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence { func: "cin", x })
}

fn si_series(x: f64) -> Result<f64> {
    let x2 = x * x;
    let mut odd_power_over_fact = x; // x^{2k+1}/(2k+1)! at k = 0
    let mut sum = x;
    for k in 1..=MAX_SERIES_TERMS {
        let two_k = 2.0 * k as f64;
        odd_power_over_fact *= x2 / (two_k * (two_k + 1.0));
        let term = odd_power_over_fact / (two_k + 1.0);
        sum += if k % 2 == 1 { -term } else { term };
        if term < f64::EPSILON * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence { func: "sinint", x })
}

/// Series for `x − Si(x)`; leading term `x³/18`.
fn si_deficit_series(x: f64) -> Result<f64> {
    let x2 = x * x;
    let mut odd_power_over_fact = x;
    let mut sum = 0.0;
    for k in 1..=MAX_SERIES_TERMS {
        let two_k = 2.0 * k as f64;
        odd_power_over_fact *= x2 / (two_k * (two_k + 1.0));
        let term = odd_power_over_fact / (two_k + 1.0);
        sum += if k % 2 == 1 { term } else { -term };
        if term < f64::EPSILON * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence {
        func: "si_deficit",
        x,
    })
}

/// Evaluates `E1(ix)` by the complex modified-Lentz continued fraction and
/// returns `(Ci(x), Si(x))` through `E1(ix) = −Ci(x) + i(Si(x) − π/2)`.
fn ci_si_continued_fraction(x: f64) -> Result<(f64, f64)> {
    let z = Complex64::new(0.0, x);
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / CF_TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut converged = false;
    for i in 1..=MAX_CF_ITERATIONS {
        let a = -((i * i) as f64);
        b += 2.0;
        d = (a * d + b).inv();
        c = b + a / c;
        if c.norm_sqr() < CF_TINY {
            c = Complex64::new(CF_TINY, 0.0);
        }
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecFunError::NoConvergence { func: "cosint", x });
    }
    let e1_ix = (-z).exp() * h;
    Ok((-e1_ix.re, FRAC_PI_2 + e1_ix.im))
}
