//! Generalized-torsion certificates for fundamental groups of Dehn-filled
//! knot exteriors: free-group words, presentations, replayable derivations,
//! certificate algebra, family constructors and independent oracles.

pub mod certificate;
pub mod constructors;
pub mod derivation;
pub mod oracle;
pub mod presentation;
pub mod word;
