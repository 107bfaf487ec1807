//! Determinantal curves and varieties over prime fields.
//!
//! The crate works with Hilbert-Burch matrices of forms, the ideals of their
//! maximal minors, Hilbert functions computed from Macaulay matrices, the
//! rank loci controlling multisecant lines, and explicit presentations of
//! blow-ups along determinantal subvarieties.

pub mod binary;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod upoly;
pub mod graded;
pub mod macaulay;
pub mod incremental;
pub mod hilburch;
pub mod bminimal;
pub mod liaison;
pub mod secants;
pub mod blowup;
