//! Gaussian phase-space simulation of continuous-variable quantum
//! teleportation through two-mode squeezed channels whose arms have been
//! decohered by different thermal environments.
//!
//! The crate is layered bottom-up:
//!
//! - [`gaussian`]: multimode Gaussian states (mean vector + covariance) and
//!   the operations the protocol needs: beam splitters, displacements,
//!   thermal loss, homodyne conditioning, Wigner/characteristic functions
//!   and overlap fidelity.
//! - [`channel`]: the decohered two-mode squeezed channel, its Gaussian
//!   moments `(m_a, m_b, c_a, c_b)`, separability and EPR-scaled variances.
//! - [`teleport`]: analytic average fidelities and a Monte-Carlo simulation
//!   of the full measure-and-displace protocol.
//! - [`optimize`]: golden-section search plus the closed-form optima for
//!   squeezing, receiver transmittance and feed-forward gain.
//! - [`cli`]: the `cvteleport` command-line front end.
//!
//! Quadrature convention: `α = q + i p` with vacuum variance `1/4`, so the
//! vacuum Wigner function is `(2/π) exp(-2|α|²)`.

pub mod channel;
pub mod cli;
mod error;
pub mod gaussian;
pub mod optimize;
pub mod teleport;

pub use channel::{ChannelMoments, ChannelParams, SeparabilityVerdict};
pub use error::{Error, Result};
pub use gaussian::{GaussianState, PhasePoint};
pub use optimize::{OptimumArgument, OptimumMethod, OptimumResult};
pub use teleport::{FidelityReport, ProtocolConfig};
