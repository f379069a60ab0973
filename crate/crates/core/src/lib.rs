//! Serre weights, Kisin varieties and potentially Barsotti-Tate deformation rings
//! for two-dimensional mod p Galois representations of unramified extensions.

pub mod cli;
pub mod engeance;
pub mod ext1;
pub mod figures;
pub mod gf;
pub mod laurent;
pub mod phimod;
pub mod weights;
