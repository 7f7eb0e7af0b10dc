//! Numerical core for resonator-guided studies of extreme values of the
//! Riemann zeta function, its argument `S(t)` and the primitive `S₁(t)`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithm:
//!
//! - [`resonator`]: prime blocks, the multiplicative weight `f`, the
//!   cap-filtered support and the binned Dirichlet polynomial `R(t)`.
//! - [`zeta`]: `ζ(σ+it)`, Hardy's `Z(t)`, `N(t)`, `S(t)`, `S₁(t)`, `log ζ`
//!   and the von Mangoldt function.
//! - [`kernels`]: the Fejér kernel and the odd/even Gaussian kernels with
//!   their Fourier transforms and strip majorants.
//! - [`integrals`]: both sides of the convolution formulas and the
//!   resonated-integral identities and inequalities.
//! - [`hunt`]: resonator-guided search for large values and its control arm.
//!
//! File formats, the command line and parallel drivers live in the
//! companion `resonance` crate.
#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies float math on toolchains whose `core` has no
// inherent `f64` math; newer toolchains make the import redundant.
#![allow(unused_imports)]

extern crate alloc;

mod error;
pub mod hunt;
pub mod integrals;
pub mod kernels;
pub mod primes;
pub mod quadrature;
pub mod resonator;
pub mod special;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
