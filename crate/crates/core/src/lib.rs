//! Exact computer algebra for the twisted Heisenberg-Virasoro algebra, its
//! twisted-sector algebras `L_t`, and their vacuum and Verma-type modules.

pub mod algebra;
pub mod cli;
pub mod fields;
pub mod kernel;
pub mod modules;
pub mod structure;
