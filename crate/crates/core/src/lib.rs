//! Exact integer machinery for Sasakian constructions on 5- and 7-manifolds:
//! lattice quotients and Smith normal form, Smale–Barden classification,
//! Sasaki joins, Brieskorn–Pham links, toric surfaces and circle bundles
//! over them.

pub mod brieskorn;
pub mod circle_bundle;
pub mod exact_lattice;
mod json;
pub mod sasaki_join;
pub mod smale_barden;
pub mod sweep;
pub mod toric_surface;
