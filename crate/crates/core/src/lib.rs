//! Exact and certified computations on products of modular curves: class
//! groups of imaginary quadratic orders, CM values of j, modular polynomials
//! and Hecke correspondences, multidegree bookkeeping, split-prime descent,
//! lattice trees and the finite groups SL₂(ℤ/N)/{±1}.

pub mod arith;
pub mod ball;
pub mod cache;
pub mod chowdeg;
pub mod cli;
pub mod cmfield;
pub mod config;
pub mod descent;
pub mod error;
pub mod lattices;
pub mod poly;
pub mod modpoly;
pub mod quadforms;
pub mod roots;
pub mod series;
pub mod sl2mod;

pub use error::{Error, Result};
