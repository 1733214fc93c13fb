//! Chern and Levi-Civita geometry of Hermitian metrics on local holomorphic charts.
//!
//! Everything in this crate is a pure function of its inputs. The crate is
//! `no_std` and only needs `alloc`; enable either the `std` feature (default)
//! or the `libm` feature to supply the floating point intrinsics.
//!
//! Layout:
//!
//! * [`linalg`], [`point`], [`fd`]: dense complex matrices, chart points and
//!   the Wirtinger finite-difference engine.
//! * [`dsl`]: a tiny expression language for real scalar fields.
//! * [`metric`]: the built-in metric zoo and the metric-spec string syntax.
//! * [`connection`], [`curvature`]: Levi-Civita coefficients, Chern and
//!   Levi-Civita curvature.
//! * [`forms`], [`hodge`]: differential forms in coordinates, the torsion form,
//!   `∂̄*ω` by two routes and the Gauduchon / balanced residuals.
//! * [`quadrature`]: integration over the Hopf fundamental domain.
#![no_std]
#![deny(unsafe_code)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("enable either the `std` or the `libm` feature of lcricci-core");

extern crate alloc;

pub mod connection;
pub mod curvature;
pub mod dsl;
mod error;
pub mod fd;
pub mod forms;
pub mod hodge;
pub mod jet;
pub mod linalg;
pub mod metric;
pub mod point;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// `√−1`.
pub const I: C64 = C64::new(0.0, 1.0);
