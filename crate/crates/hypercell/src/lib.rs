//! Simulation library for Poisson hyperplane tessellations.
//!
//! The crate samples the typical cell of a stationary Poisson hyperplane
//! tessellation exactly (tangent-simplex construction for absolutely
//! continuous directional distributions, window tessellations for general
//! ones), evaluates size and shape functionals on the sampled cells, and
//! ships the statistical machinery needed to verify the limit laws of small
//! cells: conditional facet-count probabilities, Gamma goodness-of-fit,
//! decay-rate fits and limit-shape integrals.
//!
//! See the `hypercell` binary for the experiment harness and the repository
//! README for the output formats.

pub mod cli;
pub mod directions;
pub mod estimators;
pub mod functionals;
pub mod geometry;
pub mod samplers;
