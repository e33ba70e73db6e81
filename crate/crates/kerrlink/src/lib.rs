//! Simulator for the degradation of Gaussian quantum correlations on a
//! ground-to-satellite optical link in the Earth's (Kerr) space-time.
//!
//! A two-mode squeezed photonic state is prepared on the ground; one mode is
//! sent to a satellite on a circular equatorial orbit. The combined
//! gravitational and special-relativistic frequency shift deforms the photon
//! wave packet, which acts on the state as a lossy bosonic channel with
//! transmissivity given by the wave-packet overlap. The crate evaluates the
//! Renyi-2 mutual information, one-way classical correlation and quantum
//! discord of the received state, and their change rates with orbit height.
//!
//! Pipeline: [`spacetime`] (shift parameter delta) -> [`wavepacket`]
//! (channel overlap Theta) -> [`gaussian`] (covariance algebra) ->
//! [`correlations`] (Renyi-2 measures) -> [`sweep`] (parameter sweeps, CSV
//! and plot-script output). The `kerrlink` binary exposes the sweeps on the
//! command line.
//!
//! All covariance matrices use the quadrature ordering (x1, p1, x2, p2, ...)
//! with vacuum variance 1, and all correlation values are in nats.

pub mod correlations;
pub mod gaussian;
pub mod spacetime;
pub mod sweep;
pub mod wavepacket;
