//! Representation zeta functions of p-adic analytic groups given by Lie
//! lattices, computed three ways: closed forms, certified p-adic integrals
//! and coadjoint orbit counts over finite quotients.

pub mod polyring;
pub mod lattice;
pub mod minors;
pub mod oracle;
pub mod integral;
pub mod catalog;
