//! Mean and variance of the von Neumann entanglement entropy of random
//! fermionic Gaussian states, with independent numerical cross-checks.
//!
//! Two ensembles are covered: arbitrary particle number ([`Case::A`]) and
//! fixed particle number `p` ([`Case::B`]). A subsystem of `m` modes out of
//! `m + n` has entropy `S = -sum_i v(x_i)` over the eigenvalues of the
//! restricted covariance matrix.
//!
//! ```
//! use fgent::{moments, EnsembleSpec};
//! let spec = EnsembleSpec::case_a(1, 1).unwrap();
//! assert!((moments::mean_exact(&spec).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod error;
pub mod identities;
pub mod jacobi;
pub mod kernel;
pub mod moments;
pub mod oracles;
pub mod sampler;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
pub use kernel::{Case, EnsembleSpec, KernelContext};
pub use moments::{Method, MomentReport};
