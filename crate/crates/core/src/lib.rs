//! Exact arithmetic for the generic character table of the Sylow
//! `p`-subgroup `U(q)` of the Chevalley group `D4(q)`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cyclotomic;
pub mod ffield;
pub mod group;
pub mod classes;
pub mod params;
pub mod characters;
pub mod oracle;
pub mod table;
