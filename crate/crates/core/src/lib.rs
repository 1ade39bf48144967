//! Non-existence certificates and radial verification tools for the
//! Lane-Emden equation `Δu + u^p = 0` in `R^N`.
//!
//! * [`exponents`] derives, with exact rational arithmetic, the exponent pair
//!   `(a, b)` of the feedback estimate `F(R)^b <= C R^{-a}` for subcritical
//!   `(N, p)` and re-verifies every identity behind it.
//! * [`radial`] integrates radial solutions from the origin, samples the
//!   critical bubble family and applies the scaling `u -> λ^{2/(p-1)} u(λ·)`.
//! * [`pohozaev`] evaluates the interior energy, the boundary integrals and
//!   both sides of the Rellich-Pohozaev identity on radial profiles.

pub mod cli;
pub mod exponents;
pub mod pohozaev;
pub mod radial;
pub mod rational;
pub mod sphere;
