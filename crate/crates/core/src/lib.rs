//! Negative spectra of Schrödinger operators −Δ + V in one to three
//! dimensions, Riesz means, Lieb–Thirring constants and the kinetic-energy
//! form of the inequality.
//!
//! The guide in `book/` walks through each module with runnable examples.

pub mod acceptance;
pub mod birman_schwinger;
pub mod constants;
pub mod jacobi;
pub mod kinetic;
pub mod potentials;
pub mod quadrature;
pub mod special;
pub mod spectrum;
pub mod tridiag;
pub mod validity;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/potentials.md")]
    mod potentials {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/birman_schwinger.md")]
    mod birman_schwinger {}
    #[doc = include_str!("../../../book/src/kinetic.md")]
    mod kinetic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
