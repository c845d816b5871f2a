//! Level-1 holomorphic Hecke eigenforms: exact q-expansions, unitary
//! normalization, Satake angles and symmetric powers.

mod angles;
mod eigenform;
pub mod ntt;

pub use angles::{satake_angles, symmetric_power_data, symmetric_power_series};
pub use eigenform::{delta_q_expansion, level_one_eigenform, EigenformSeries};
