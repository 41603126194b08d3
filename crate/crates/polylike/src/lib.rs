pub mod builder;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod real_bounds;
pub mod reports;
pub mod return_maps;
pub mod search;
