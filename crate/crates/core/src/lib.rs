//! Monte Carlo laboratory for posterior contraction rates in non-i.i.d.
//! Bayesian models.
//!
//! The crate has three layers:
//!
//! * metric and prior machinery: [`divergences`], [`covering`], [`priors`];
//! * one module per statistical model, each exposing a simulator, a
//!   posterior and a distance to the truth: [`whitenoise`], [`regression`],
//!   [`markov`], [`inid`], [`spectral`];
//! * checks and experiments: [`hypothesis`] estimates the error
//!   probabilities of the tests that drive the rate theorems, and
//!   [`harness`] runs replicated experiments, writes a CSV of posterior
//!   radii and fits the contraction exponent.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `divergences` | Hellinger, KL and moment divergences |
//! | `covering_numbers` | covers, brackets and entropy bounds |
//! | `priors` | sequence, histogram, Dirichlet process and Bernstein priors |
//! | `white_noise` | conjugate sequence-model posterior |
//! | `spline_regression` | B-spline regression posterior |
//! | `autoregression` | histogram prior for a nonlinear AR(1) chain |
//! | `poisson_sieve` | exact posterior over a monotone Poisson sieve |
//! | `binary_regression` | Dirichlet process link with importance sampling |
//! | `whittle` | Toeplitz moments and Whittle posterior |
//! | `test_errors` | error probabilities of likelihood ratio tests |
//! | `rate_experiment` | full experiment, CSV and rate fit |
//!
//! All randomness flows from explicit `u64` seeds through
//! [`rng::rng_from_seed`], so every sampler here is reproducible bit for bit.

pub mod covering;
pub mod divergences;
pub mod error;
pub mod harness;
pub mod hypothesis;
pub mod inid;
pub mod markov;
pub mod priors;
pub mod quad;
pub mod regression;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod whitenoise;

pub use error::{Error, Result};
