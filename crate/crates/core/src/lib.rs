//! Exact certificates for harmonic spinors, η-invariants and the
//! ν-invariant of the two 7-dimensional two-step nilmanifolds carrying
//! invariant closed G2-structures.
//!
//! The modules build on each other bottom-up:
//! [`exactnum`] → [`clifford`] / [`superalg`] / [`liealg`] → [`g2`] →
//! [`kirillov`] → [`dirac`] / [`mq`] / [`eta`] → [`nu`].

pub mod certificate;
pub mod dirac;
pub mod eta;
pub mod clifford;
pub mod exactnum;
pub mod g2;
pub mod kirillov;
pub mod liealg;
pub mod mq;
pub mod nu;
pub mod superalg;

pub use exactnum::{Assignment, ExactError, ExactMatrix, ExactScalar, RankCertificate, Var};
