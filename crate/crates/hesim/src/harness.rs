//! Synthetic experiment pipeline: scan grids with their expected rates,
//! reproducible Poisson draws, fringe fits, and the marginal-free curve
//! rebuilt from counted data exactly as an experiment would.

pub mod corrected;
pub mod experiment;
pub mod fit;
pub mod scan;
