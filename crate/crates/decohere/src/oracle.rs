//! Independent brute-force validators for every closed form in the crate.
//!
//! [`integrate`] evaluates the spectral integrals behind the decoherence
//! functions by adaptive Gauss–Kronrod quadrature, directly from their
//! defining kernels. [`discrete_overlap_exponent`] sums the coherent-state
//! overlap exponent over an explicit mode lattice and must reproduce the
//! continuum integral as the lattice is refined.
//!
//! Nothing in this module calls into [`crate::specfun`] or
//! [`crate::decoherence`]; the agreement tests are meaningful only because
//! the two routes share no code.

use crate::model::{MomentumPair, PhysicalParams};
use thiserror::Error;

/// Integrand numerator shape; the `1/ω` factor is part of every kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `(1 − cos ωt)/ω` — real decoherence exponent.
    OneMinusCosOverOmega,
    /// `t − sin(ωt)/ω` — imaginary (phase) exponent.
    TMinusSinOverOmega,
    /// `sin(ωt)/ω` — the direct sine-integral kernel; anchors `Si` without
    /// the cancellation the deficit route suffers at large `ωt`.
    SinOverOmega,
    /// `1/ω` — dressing/overlap integral.
    OneOverOmega,
}

/// Spectral weight and integration support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// `e^{−ω/Ω}` on `ω ∈ [0, ∞)`.
    Exponential { omega_uv: f64 },
    /// `Θ(ϖ − ω)` on `ω ∈ [0, ϖ]`.
    Step { omega_ir: f64 },
    /// `Θ(ω − ϖ)·e^{−ω/Ω}` on `ω ∈ [ϖ, ∞)`.
    StepLowExponential { omega_ir: f64, omega_uv: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralKernel {
    pub kind: KernelKind,
    pub cutoff: Cutoff,
    pub time: f64,
}

/// Uniform mode lattice over `[omega_min, omega_max]`, sampled at cell
/// midpoints so the excluded `ω = 0` mode is never touched. Angular and
/// polarization sums are already reduced to the scalar weight carried by
/// the coupling, so each cell contributes `w(ω_mid)·Δω`.
#[derive(Debug, Clone, Copy)]
pub struct ModeGrid {
    omega_min: f64,
    omega_max: f64,
    n_modes: usize,
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("relative tolerance {0} outside [1e-14, 1e-4]")]
    InvalidTolerance(f64),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid mode grid: {0}")]
    InvalidGrid(String),
    #[error(
        "quadrature did not converge: value {value}, achieved error estimate {achieved} > target {target}"
    )]
    NonConvergence {
        value: f64,
        achieved: f64,
        target: f64,
    },
    #[error("oscillation presplit needs {cells} cells (limit {limit})")]
    TooOscillatory { cells: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, OracleError>;

const MAX_PRESPLIT_CELLS: usize = 8_000_000;
const MAX_REFINEMENTS: usize = 200_000;
/// Below this many presplit cells the plain per-node evaluation is cheap
/// enough; above it the uniform-grid trig recurrence pays off.
const FAST_PATH_MIN_CELLS: usize = 64;
/// Beyond this multiple of `Ω` the exponential weight is below 1e-20 and
/// oscillation presplitting stops; the mapped tail is still integrated.
const EXP_NEGLIGIBLE: f64 = 46.0;

impl SpectralKernel {
    pub fn new(kind: KernelKind, cutoff: Cutoff, time: f64) -> Result<Self> {
        if !(time >= 0.0 && time.is_finite()) {
            return Err(OracleError::InvalidKernel(format!(
                "time {time} must be finite and >= 0"
            )));
        }
        match cutoff {
            Cutoff::Exponential { omega_uv } => {
                if !(omega_uv > 0.0 && omega_uv.is_finite()) {
                    return Err(OracleError::InvalidKernel(format!(
                        "omega_uv {omega_uv} must be finite and > 0"
                    )));
                }
            }
            Cutoff::Step { omega_ir } => {
                if !(omega_ir > 0.0 && omega_ir.is_finite()) {
                    return Err(OracleError::InvalidKernel(format!(
                        "omega_ir {omega_ir} must be finite and > 0"
                    )));
                }
            }
            Cutoff::StepLowExponential { omega_ir, omega_uv } => {
                if !(omega_ir > 0.0 && omega_ir.is_finite() && omega_uv > 0.0 && omega_uv.is_finite())
                {
                    return Err(OracleError::InvalidKernel(format!(
                        "cutoffs ({omega_ir}, {omega_uv}) must be finite and > 0"
                    )));
                }
            }
        }
        Ok(SpectralKernel { kind, cutoff, time })
    }

    /// Integrand at `ω > 0`, cutoff weight included, evaluated in
    /// cancellation-free form near `ω → 0`.
    fn integrand(&self, omega: f64) -> f64 {
        let base = match self.kind {
            KernelKind::OneMinusCosOverOmega => {
                let half = 0.5 * omega * self.time;
                2.0 * half.sin().powi(2) / omega
            }
            KernelKind::TMinusSinOverOmega => self.time * one_minus_sinc(omega * self.time),
            KernelKind::SinOverOmega => self.time * sinc(omega * self.time),
            KernelKind::OneOverOmega => 1.0 / omega,
        };
        match self.cutoff {
            Cutoff::Exponential { omega_uv } => base * (-omega / omega_uv).exp(),
            Cutoff::Step { .. } => base,
            Cutoff::StepLowExponential { omega_uv, .. } => base * (-omega / omega_uv).exp(),
        }
    }

    fn is_oscillatory(&self) -> bool {
        self.time > 0.0 && self.kind != KernelKind::OneOverOmega
    }
}

/// `1 − sin(x)/x`, series below 0.1 to avoid cancellation.
fn one_minus_sinc(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        1.0 - x.sin() / x
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// GK15 evaluation of every presplit panel of an oscillatory step-cutoff
/// kernel. The nodes sit at fixed offsets from each panel center, so the
/// sines at all 15 nodes unfold from one `sin_cos` per panel by angle
/// addition — the node offsets are identical across the uniform grid (up
/// to a final rounding that perturbs the angle by well under 1e-15, far
/// below the quadrature tolerance). Panels are mutually independent, so
/// the result is identical to evaluating them one by one.
fn oscillatory_step_panels(kernel: &SpectralKernel, breaks: &[f64]) -> Vec<Panel> {
    // Angle scale: sin(u/2) drives the cosine kernel, sin(u) the others.
    let angle_scale = match kernel.kind {
        KernelKind::OneMinusCosOverOmega => 0.5 * kernel.time,
        _ => kernel.time,
    };
    let width = breaks[1] - breaks[0];
    let half = 0.5 * width;
    let mut offset_sin = [0.0f64; 7];
    let mut offset_cos = [0.0f64; 7];
    for j in 0..7 {
        let (s, c) = (angle_scale * half * XGK[j]).sin_cos();
        offset_sin[j] = s;
        offset_cos[j] = c;
    }

    let assemble = |sin_value: f64, omega: f64| -> f64 {
        match kernel.kind {
            KernelKind::OneMinusCosOverOmega => 2.0 * sin_value * sin_value / omega,
            KernelKind::TMinusSinOverOmega => kernel.time - sin_value / omega,
            KernelKind::SinOverOmega => sin_value / omega,
            KernelKind::OneOverOmega => unreachable!("not an oscillatory kernel"),
        }
    };

    breaks
        .windows(2)
        .enumerate()
        .map(|(seq, w)| {
            let center = 0.5 * (w[0] + w[1]);
            let panel_half = 0.5 * (w[1] - w[0]);
            let (s0, c0) = (angle_scale * center).sin_cos();
            let mut fv = [0.0f64; 15];
            fv[7] = assemble(s0, center);
            for j in 0..7 {
                let x = panel_half * XGK[j];
                fv[j] = assemble(s0 * offset_cos[j] - c0 * offset_sin[j], center - x);
                fv[14 - j] = assemble(s0 * offset_cos[j] + c0 * offset_sin[j], center + x);
            }
            let (value, error) = gk15_from_values(&fv, panel_half);
            Panel {
                a: w[0],
                b: w[1],
                value,
                error,
                seq: seq as u64,
            }
        })
        .collect()
}

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Kronrod value and error estimate from the 15 node values; `fv[7]` is
/// the center, `fv[j]`/`fv[14 − j]` the `∓half·XGK[j]` pair.
fn gk15_from_values(fv: &[f64; 15], half: f64) -> (f64, f64) {
    let mut res_gauss = WG[3] * fv[7];
    let mut res_kronrod = WGK[7] * fv[7];
    let mut res_abs = WGK[7] * fv[7].abs();
    for j in 0..7 {
        let pair = fv[j] + fv[14 - j];
        res_kronrod += WGK[j] * pair;
        res_abs += WGK[j] * (fv[j].abs() + fv[14 - j].abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * pair;
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (fv[7] - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_kronrod * half;
    let raw_err = ((res_kronrod - res_gauss) * half).abs();
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    // QUADPACK error rescale.
    let mut err = raw_err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Kronrod value and error estimate over one panel.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 15];
    fv[7] = f(center);
    for j in 0..7 {
        let x = half * XGK[j];
        fv[j] = f(center - x);
        fv[14 - j] = f(center + x);
    }
    gk15_from_values(&fv, half)
}

/// Compensated (Neumaier) accumulator; panels are always added in ascending
/// interval order so the reduction is a deterministic fixed-order sum.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// One quadrature panel in the global-adaptive worklist. Ordered by error
/// estimate with the insertion sequence as a deterministic tie-break.
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Adaptive quadrature of `kernel` with target `rel_tol·|value| + 1e-14`.
///
/// The domain is pre-split so no panel spans more than `π/(4t)` in `ω`
/// wherever the kernel oscillates and the cutoff weight is non-negligible;
/// infinite upper limits are compactified by `ω = Ω·x/(1 − x)`. The result
/// is bit-deterministic for identical inputs.
pub fn integrate(kernel: &SpectralKernel, rel_tol: f64) -> Result<f64> {
    if !(1e-14..=1e-4).contains(&rel_tol) {
        return Err(OracleError::InvalidTolerance(rel_tol));
    }

    // Breakpoints in the integration variable (ω for Step, x otherwise).
    let breaks = match kernel.cutoff {
        Cutoff::Step { omega_ir } => {
            let cells = oscillation_cells(kernel, 0.0, omega_ir)?;
            uniform_breaks(0.0, omega_ir, cells)
        }
        Cutoff::Exponential { omega_uv } => mapped_breaks(kernel, 0.0, omega_uv)?,
        Cutoff::StepLowExponential { omega_ir, omega_uv } => {
            mapped_breaks(kernel, omega_ir, omega_uv)?
        }
    };

    match kernel.cutoff {
        Cutoff::Step { .. } => {
            let f = |omega: f64| kernel.integrand(omega);
            if kernel.is_oscillatory() && breaks.len() > FAST_PATH_MIN_CELLS {
                let initial = oscillatory_step_panels(kernel, &breaks);
                refine_until_converged(&f, initial, rel_tol)
            } else {
                run_adaptive(&f, &breaks, rel_tol)
            }
        }
        Cutoff::Exponential { omega_uv } | Cutoff::StepLowExponential { omega_uv, .. } => {
            let f = |x: f64| {
                let one_minus = 1.0 - x;
                let omega = omega_uv * x / one_minus;
                let jacobian = omega_uv / (one_minus * one_minus);
                let v = kernel.integrand(omega) * jacobian;
                // The weight underflows long before the jacobian overflows,
                // but guard the open endpoint anyway.
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            };
            run_adaptive(&f, &breaks, rel_tol)
        }
    }
}

fn run_adaptive<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], rel_tol: f64) -> Result<f64> {
    let mut initial = Vec::with_capacity(breaks.len() - 1);
    for (seq, w) in breaks.windows(2).enumerate() {
        let (value, error) = gauss_kronrod_15(f, w[0], w[1]);
        initial.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            seq: seq as u64,
        });
    }
    refine_until_converged(f, initial, rel_tol)
}

/// Fixed-order compensated reduction of a panel partition.
fn reduce_panels(panels: &[Panel]) -> (f64, f64) {
    let mut value = Accumulator::default();
    let mut achieved = Accumulator::default();
    for panel in panels {
        value.add(panel.value);
        achieved.add(panel.error);
    }
    (value.total(), achieved.total())
}

/// Worst-panel-first refinement until the summed error estimate meets
/// `rel_tol·|value| + 1e-14`. All ordering decisions are deterministic and
/// the returned value is a fixed-order compensated sum over the final
/// partition (ascending interval order), so identical inputs give
/// bit-identical results.
fn refine_until_converged<F: Fn(f64) -> f64>(
    f: &F,
    initial: Vec<Panel>,
    rel_tol: f64,
) -> Result<f64> {
    // The presplit usually already converges; keep that path heap-free.
    let (value, achieved) = reduce_panels(&initial);
    if achieved <= rel_tol * value.abs() + 1e-14 {
        return Ok(value);
    }

    let mut area = value;
    let mut errsum = achieved;
    let mut seq = initial.len() as u64;
    let mut heap = std::collections::BinaryHeap::from(initial);
    let mut refinements = 0usize;
    while errsum > rel_tol * area.abs() + 1e-14 && refinements < MAX_REFINEMENTS {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Panel narrower than the floating-point grid; put it back and
            // stop — the final check decides whether this is a failure.
            heap.push(worst);
            break;
        }
        let (left_value, left_error) = gauss_kronrod_15(f, worst.a, mid);
        let (right_value, right_error) = gauss_kronrod_15(f, mid, worst.b);
        area += left_value + right_value - worst.value;
        errsum += left_error + right_error - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: left_value,
            error: left_error,
            seq,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: right_value,
            error: right_error,
            seq: seq + 1,
        });
        seq += 2;
        refinements += 1;
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, achieved) = reduce_panels(&panels);
    let target = rel_tol * value.abs() + 1e-14;
    if achieved > target {
        return Err(OracleError::NonConvergence {
            value,
            achieved,
            target,
        });
    }
    Ok(value)
}

/// Number of presplit cells needed so each spans at most `π/(4t)` in `ω`.
fn oscillation_cells(kernel: &SpectralKernel, omega_lo: f64, omega_hi: f64) -> Result<usize> {
    if !kernel.is_oscillatory() {
        return Ok(1);
    }
    let cap = std::f64::consts::FRAC_PI_4 / kernel.time;
    let cells = ((omega_hi - omega_lo) / cap).ceil().max(1.0);
    if cells > MAX_PRESPLIT_CELLS as f64 {
        return Err(OracleError::TooOscillatory {
            cells: cells as usize,
            limit: MAX_PRESPLIT_CELLS,
        });
    }
    Ok(cells as usize)
}

fn uniform_breaks(lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(cells + 1);
    for k in 0..=cells {
        v.push(lo + (hi - lo) * k as f64 / cells as f64);
    }
    v
}

/// Breakpoints in the compactified variable `x` with `ω = Ω·x/(1 − x)`,
/// presplit up to the frequency where the exponential weight is negligible.
fn mapped_breaks(
    kernel: &SpectralKernel,
    omega_start: f64,
    omega_uv: f64,
) -> Result<Vec<f64>> {
    let to_x = |omega: f64| omega / (omega_uv + omega);
    let x_start = to_x(omega_start);
    let mut breaks = vec![x_start];
    if kernel.is_oscillatory() {
        let cap = std::f64::consts::FRAC_PI_4 / kernel.time;
        let omega_end = omega_start + EXP_NEGLIGIBLE * omega_uv;
        let cells = ((omega_end - omega_start) / cap).ceil().max(1.0);
        if cells > MAX_PRESPLIT_CELLS as f64 {
            return Err(OracleError::TooOscillatory {
                cells: cells as usize,
                limit: MAX_PRESPLIT_CELLS,
            });
        }
        let cells = cells as usize;
        for k in 1..=cells {
            let omega = omega_start + (omega_end - omega_start) * k as f64 / cells as f64;
            breaks.push(to_x(omega));
        }
    } else {
        // A few fixed interior points help the first rough pass on the
        // peaked 1/ω integrands; adaptivity does the rest.
        for factor in [0.25, 1.0, 4.0, EXP_NEGLIGIBLE] {
            let x = to_x(omega_start + factor * omega_uv);
            if x > *breaks.last().unwrap() {
                breaks.push(x);
            }
        }
    }
    breaks.push(1.0);
    Ok(breaks)
}

impl ModeGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_modes: usize) -> Result<Self> {
        if !(omega_min >= 0.0 && omega_max > omega_min && omega_max.is_finite()) {
            return Err(OracleError::InvalidGrid(format!(
                "need 0 <= omega_min < omega_max, got [{omega_min}, {omega_max}]"
            )));
        }
        if n_modes == 0 {
            return Err(OracleError::InvalidGrid("n_modes must be >= 1".into()));
        }
        Ok(ModeGrid {
            omega_min,
            omega_max,
            n_modes,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / self.n_modes as f64
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn support(&self) -> (f64, f64) {
        (self.omega_min, self.omega_max)
    }
}

/// Discrete coherent-overlap exponent `Σ_modes (Δg)²/(2ħ²ω²)` in
/// dimensionless form: midpoint samples of `(Q/2)·e^{−ω/Ω}/ω` times the
/// cell width. Converges monotonically from below to the continuum
/// integral over the grid support (the integrand is convex, so midpoint
/// sampling underestimates every cell).
pub fn discrete_overlap_exponent(
    pair: &MomentumPair,
    grid: &ModeGrid,
    params: &PhysicalParams,
) -> f64 {
    let strength = 0.5 * crate::model::q_factor(pair, params);
    let omega_uv = params.omega_uv();
    let delta = grid.spacing();
    let mut acc = Accumulator::default();
    for i in 0..grid.n_modes {
        let omega = grid.omega_min + (i as f64 + 0.5) * delta;
        acc.add(strength * (-omega / omega_uv).exp() / omega * delta);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MomentumPair, PhysicalParams};

    fn step_kernel(kind: KernelKind, omega_ir: f64, time: f64) -> SpectralKernel {
        SpectralKernel::new(kind, Cutoff::Step { omega_ir }, time).unwrap()
    }

    #[test]
    fn zero_time_step_integral_is_exactly_zero() {
        let k = step_kernel(KernelKind::OneMinusCosOverOmega, 1.0, 0.0);
        assert_eq!(integrate(&k, 1e-10).unwrap(), 0.0);
        let k = step_kernel(KernelKind::TMinusSinOverOmega, 1.0, 0.0);
        assert_eq!(integrate(&k, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn step_cosine_kernel_reproduces_cin_of_one() {
        // ∫₀¹ (1 − cos u)/u du = γ − Ci(1); 25-digit reference.
        let k = step_kernel(KernelKind::OneMinusCosOverOmega, 1.0, 1.0);
        let v = integrate(&k, 1e-12).unwrap();
        assert!((v - 0.239_811_742_000_564_73).abs() < 1e-12, "got {v}");
        // Cross-check against the closed-form route.
        let c = crate::specfun::cin(1.0).unwrap().value;
        assert!((v - c).abs() < 1e-12);
    }

    #[test]
    fn fast_presplit_path_matches_generic_evaluation() {
        // 1e3·4/π ≈ 1273 cells exercises the trig-recurrence path; the
        // generic path is forced through a kernel evaluated per node.
        for kind in [
            KernelKind::OneMinusCosOverOmega,
            KernelKind::TMinusSinOverOmega,
            KernelKind::SinOverOmega,
        ] {
            let kernel = step_kernel(kind, 1.0, 1e3);
            let fast = integrate(&kernel, 1e-10).unwrap();
            let cells = oscillation_cells(&kernel, 0.0, 1.0).unwrap();
            let breaks = uniform_breaks(0.0, 1.0, cells);
            let f = |omega: f64| kernel.integrand(omega);
            let generic = run_adaptive(&f, &breaks, 1e-10).unwrap();
            assert!(
                (fast - generic).abs() <= 1e-12 * generic.abs().max(1.0),
                "{kind:?}: {fast} vs {generic}"
            );
        }
    }

    #[test]
    fn sine_kernel_reproduces_si_of_one() {
        // ∫₀¹ sin u/u du = Si(1); 25-digit reference.
        let k = step_kernel(KernelKind::SinOverOmega, 1.0, 1.0);
        let v = integrate(&k, 1e-12).unwrap();
        assert!((v - 0.946_083_070_367_183_0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn lower_cutoff_dressing_integral_reproduces_e1() {
        let k = SpectralKernel::new(
            KernelKind::OneOverOmega,
            Cutoff::StepLowExponential {
                omega_ir: 0.1,
                omega_uv: 1.0,
            },
            0.0,
        )
        .unwrap();
        let v = integrate(&k, 1e-12).unwrap();
        assert!((v - 1.822_923_958_419_390_7).abs() < 1e-11, "got {v}");
        let e1 = crate::specfun::expint_e1(0.1).unwrap().value;
        assert!((v - e1).abs() < 1e-11);
    }

    #[test]
    fn integrate_is_bit_deterministic() {
        for kind in [
            KernelKind::OneMinusCosOverOmega,
            KernelKind::TMinusSinOverOmega,
        ] {
            let k = SpectralKernel::new(
                kind,
                Cutoff::Exponential { omega_uv: 1.0 },
                17.3,
            )
            .unwrap();
            let a = integrate(&k, 1e-10).unwrap();
            let b = integrate(&k, 1e-10).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn step_kernel_depends_only_on_the_product_cutoff_times_time() {
        let a = integrate(&step_kernel(KernelKind::OneMinusCosOverOmega, 1.0, 3.0), 1e-12).unwrap();
        let b = integrate(&step_kernel(KernelKind::OneMinusCosOverOmega, 3.0, 1.0), 1e-12).unwrap();
        assert!((a - b).abs() < 1e-11 * a.abs());
    }

    #[test]
    fn tolerance_domain_is_enforced() {
        let k = step_kernel(KernelKind::OneMinusCosOverOmega, 1.0, 1.0);
        assert!(matches!(
            integrate(&k, 1e-15),
            Err(OracleError::InvalidTolerance(_))
        ));
        assert!(matches!(
            integrate(&k, 1e-3),
            Err(OracleError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn discrete_overlap_is_zero_for_equal_momenta() {
        let params = PhysicalParams::new(1.0 / 137.036, 1.0, 0.01, 1.0, 0.0).unwrap();
        let pair = MomentumPair::new(0.05, 0.05).unwrap();
        let grid = ModeGrid::new(0.01, 10.0, 1000).unwrap();
        assert_eq!(discrete_overlap_exponent(&pair, &grid, &params), 0.0);
    }

    #[test]
    fn discrete_overlap_is_quadratic_in_momentum_separation() {
        let params = PhysicalParams::new(1.0 / 137.036, 1.0, 0.01, 1.0, 0.0).unwrap();
        let grid = ModeGrid::new(0.01, 10.0, 4096).unwrap();
        let small = discrete_overlap_exponent(
            &MomentumPair::new(0.0, 0.02).unwrap(),
            &grid,
            &params,
        );
        let large = discrete_overlap_exponent(
            &MomentumPair::new(0.0, 0.04).unwrap(),
            &grid,
            &params,
        );
        assert_eq!(large.to_bits(), (4.0 * small).to_bits());
    }

    #[test]
    fn discrete_overlap_converges_from_below_under_refinement() {
        let params = PhysicalParams::new(1.0 / 137.036, 1.0, 0.01, 1.0, 0.0).unwrap();
        let pair = MomentumPair::new(0.0, 0.05).unwrap();
        let continuum = continuum_overlap_exponent(&pair, &params, 0.01, 10.0);
        let mut previous_error = f64::INFINITY;
        let mut previous_value = f64::NEG_INFINITY;
        for n in [4_000usize, 8_000, 16_000, 32_000] {
            let grid = ModeGrid::new(0.01, 10.0, n).unwrap();
            let v = discrete_overlap_exponent(&pair, &grid, &params);
            assert!(v <= continuum, "midpoint sum {v} above continuum {continuum}");
            assert!(v >= previous_value, "not monotone from below at n = {n}");
            let err = continuum - v;
            assert!(err < previous_error, "error not decreasing at n = {n}");
            previous_error = err;
            previous_value = v;
        }
    }

    /// Continuum exponent over a finite support, via two oracle calls.
    pub(crate) fn continuum_overlap_exponent(
        pair: &MomentumPair,
        params: &PhysicalParams,
        omega_lo: f64,
        omega_hi: f64,
    ) -> f64 {
        let strength = 0.5 * crate::model::q_factor(pair, params);
        let full = integrate(
            &SpectralKernel::new(
                KernelKind::OneOverOmega,
                Cutoff::StepLowExponential {
                    omega_ir: omega_lo,
                    omega_uv: params.omega_uv(),
                },
                0.0,
            )
            .unwrap(),
            1e-12,
        )
        .unwrap();
        let tail = integrate(
            &SpectralKernel::new(
                KernelKind::OneOverOmega,
                Cutoff::StepLowExponential {
                    omega_ir: omega_hi,
                    omega_uv: params.omega_uv(),
                },
                0.0,
            )
            .unwrap(),
            1e-12,
        )
        .unwrap();
        strength * (full - tail)
    }
}
