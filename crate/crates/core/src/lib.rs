//! Numerics for the hyperbolic Anderson equation driven by a time-independent
//! Gaussian noise.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised by subsystem:
//!
//! - [`greens`]: wave fundamental solution in d = 1, 2, 3 and the heat kernel
//! - [`covariance`]: noise covariance models, spectral measures and mollification
//! - [`wick`]: pair partitions, Gaussian moments and finite-dimensional
//!   Stratonovich / Itô calculus
//! - [`chaos`]: chaos kernels, their Laplace transforms and chaos moments
//! - [`pathmc`]: Brownian paths, intersection local times and the moment
//!   representation of the chaos terms
//! - [`dmt`]: Poisson jump-chain estimator for the wave equation with potential
//! - [`varopt`]: the variational constant governing intermittency
//! - [`intermit`]: Mittag-Leffler asymptotics and exponent predictions
//!
//! Monte Carlo estimators take a [`mc::Replicator`], which decides how
//! replicas are scheduled. Replica `i` always draws from its own stream derived
//! from `(seed, i)`, so results do not depend on the scheduler.

#![no_std]
#![allow(clippy::too_many_arguments, clippy::neg_cmp_op_on_partial_ord, clippy::len_without_is_empty)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chaos;
pub mod covariance;
pub mod dmt;
pub mod error;
pub mod greens;
pub mod intermit;
pub mod mc;
pub mod pathmc;
pub mod quad;
pub mod special;
pub mod varopt;
pub mod wick;

pub use crate::{
    covariance::CovarianceModel,
    error::{Error, Result},
    greens::{Dimension, GreenKernel, Point},
    mc::{MonteCarloEstimate, Replicator, Sequential},
};
