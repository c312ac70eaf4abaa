//! Numerical curvature toolkit for immersed submanifolds of nonnegatively
//! curved space forms.
//!
//! The crate assembles intrinsic curvature from second fundamental forms via
//! the Gauss equation, samples user-declared immersions to recover those
//! forms numerically, evaluates the scalar pinching functionals that drive
//! sphere-type rigidity checks, extremizes the frame-dependent quantities
//! behind stable-current and Ricci-flow hypotheses, and stress-tests the
//! supporting inequalities with seeded randomized trials.

pub mod error;
pub mod expr;
pub mod frame_search;
pub mod functionals;
pub mod immersion;
pub mod models;
pub mod oracle;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
