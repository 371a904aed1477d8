//! Exact computational workbench for Iwahori-Hecke algebras over Z[t,t^-1]:
//! canonical bases and cells, q-permutation modules, endomorphism algebras,
//! and residue-field verification of stratified/quasi-hereditary structure.

pub mod algebra;
pub mod cells;
pub mod coxeter;
pub mod decomp;
pub mod fppoly;
pub mod hecke;
pub mod hmodules;
pub mod intfactor;
pub mod kpoly;
pub mod laurent;
pub mod linalg;
pub mod modrep;

pub mod qpoly;
pub mod radical;
pub mod schur;
pub mod spots;
pub mod stratcheck;
pub mod zlinalg;
