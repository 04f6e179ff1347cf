//! Exact computation of representation homology `HR_*(X, G)` of simply
//! connected spaces from Quillen and Sullivan models.
//!
//! The crate is organised bottom-up:
//! - [`linalg`]: exact sparse linear algebra over ℚ.
//! - [`series`]: truncated multivariate series with rational coefficients.
//! - [`gca`]: free graded-commutative algebras, derivations and block homology.
//! - [`lie`]: finite-dimensional Lie algebras, invariant polynomials, actions.
//! - [`models`]: Quillen and Sullivan models and the space catalog.
//! - [`rep`]: the representation complex `Λ(g* ⊗ V)` and its homology.
//! - [`ce`]: Chevalley–Eilenberg cochains of current Lie algebras.
//! - [`hodge`]: Hodge pieces of cyclic homology via Kähler forms.
//! - [`drinfeld`]: trace maps and the freeness check.
//! - [`macdonald`]: root systems and constant-term identities.
//! - [`report`], [`cli`], [`acceptance`]: orchestration.

pub mod acceptance;
pub mod ce;
pub mod cli;
pub mod drinfeld;
pub mod gca;
pub mod hodge;
pub mod lie;
pub mod linalg;
pub mod macdonald;
pub mod models;
pub mod rep;
pub mod report;
pub mod series;
