//! Exact computation of Severi degrees on rational surfaces.
//!
//! The library has three layers:
//!
//! * an exact-arithmetic substrate ([`exactmath`]): big rationals, truncated
//!   power series over a generic coefficient ring, and sparse polynomials in
//!   the four Chern variables `w1 = L^2`, `w2 = L.K`, `w3 = K^2`, `w4 = c2`;
//! * Picard-lattice surface models ([`surfaces`]) and memoized degeneration
//!   recursions counting nodal curves on the plane ([`severi_plane`]) and on
//!   the quadric `P^1 x P^1` ([`severi_quadric`]);
//! * decision procedures ([`thresholds`]) certifying when the count agrees
//!   with the universal node polynomial, and the exact reconstruction of
//!   those polynomials from computed counts ([`universal`]).
//!
//! All arithmetic is exact; no floating point anywhere.

pub mod error;
pub mod exactmath;
pub mod severi_plane;
pub mod severi_quadric;
pub mod surfaces;
pub mod thresholds;
pub mod universal;

pub use error::{Error, Result};
