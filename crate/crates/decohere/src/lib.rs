//! Momentum-space decoherence of a free charged particle coupled to the
//! zero-temperature electromagnetic vacuum.
//!
//! The crate computes the reduced density matrix of the particle for three
//! classes of particle–field initial conditions:
//!
//! * **fully correlated** — every field mode starts in the coherent state
//!   dressing the particle momentum; the off-diagonal suppression is fixed at
//!   `t = 0` and does not change in time,
//! * **partially correlated** — modes above the infrared cutoff `ϖ` are
//!   dressed, modes below it start in the bare vacuum and decohere the
//!   particle with the step-cutoff functions `Γ̄_vac` and `Γ̄_i`,
//! * **uncorrelated** — factorized initial state, exponential-cutoff
//!   decoherence functions `Γ_r` and `Γ_i`.
//!
//! All closed forms are cross-checked against the independent adaptive
//! quadrature in [`oracle`], which integrates the underlying spectral
//! kernels directly.
//!
//! Module layout mirrors the computation:
//!
//! * [`specfun`] — sine/cosine/exponential integrals and stable variants,
//! * [`model`] — physical parameters, dimensionless groups, mass
//!   renormalization chain,
//! * [`decoherence`] — the closed-form decoherence exponents,
//! * [`oracle`] — quadrature and discrete-mode validators,
//! * [`density`] — wave packets and reduced-density-matrix evolution,
//! * [`cli`] — scenario configuration, runners and CSV emission for the
//!   `decohere` binary.

pub mod cli;
pub mod decoherence;
pub mod density;
pub mod model;
pub mod oracle;
pub mod specfun;

pub use decoherence::{DecoherenceValue, Regime};
pub use density::{ReducedDensityMatrix, WavePacket};
pub use model::{MomentumPair, PhysicalParams};
