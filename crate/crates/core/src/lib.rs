//! Exact computations around orbit configuration spaces of 2-orbifolds.

pub mod arrangement;
pub mod covering;
pub mod exactfield;
pub mod groupoid;
pub mod linalg;
pub mod obstruction;
pub mod orbit_config;
pub mod orbmodel;
