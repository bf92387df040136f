//! Exact computation with cluster algebras: seed and quiver mutation, Y-systems,
//! rank 2 combinatorics, compatible Poisson and quantum structures, and the pentagram map.

pub mod algebra;
pub mod battery;
pub mod exchange;
pub mod linalg;
pub mod models;
pub mod pentagram;
pub mod poisson;
pub mod quantum;
pub mod seed;
pub mod ydyn;
pub mod rank2;
pub mod zamolodchikov;
