//! Local fields k((s)) of characteristic p: truncated Laurent series,
//! Artin-Schreier extensions and weakly ramified towers.

mod artin_schreier;
mod series;
mod tower;
mod weierstrass;

pub use artin_schreier::{
    as_normalize, build_extension, default_jump_prec, extract_alpha_beta, measure_jump, ASExtension, Normalized,
};
pub use series::{LaurentSeries, EXACT};
pub use tower::{as_roots, build_tower, compose_action, find_tower_constants, Tower, TowerElement, TowerElementReport};
pub use weierstrass::{weierstrass_check, WeierstrassReport};
