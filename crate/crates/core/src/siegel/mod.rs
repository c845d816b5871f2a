//! Genus-2 spinor zeta functions: β-parameters from Satake triples, spinor
//! coefficients a_F(n), the normalized eigenvalues λ(n) = Σ_{d²m=n} μ(d)/d·a_F(m),
//! and ingestion of eigenvalue tables computed elsewhere.

mod ingest;
mod spinor;

pub use ingest::{ingest_eigenvalues, parse_eigenvalues, EigenSource, SiegelEigenData};
pub use spinor::{
    beta_parameters, normalized_eigenvalues, spinor_satake, spinor_series, synth_spinor_triples,
    SiegelLocalTriple,
};
