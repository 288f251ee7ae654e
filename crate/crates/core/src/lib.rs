//! Exact computation of the universal gl_N weight system on permutations and
//! chord diagrams.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`], [`series`], [`parse`] — exact sparse polynomials over ℚ in
//!   `N, C_k, p_k, K_k`, truncated power series over them, and a text parser;
//! * [`diagrams`] — permutations, chord diagrams, block decomposition and
//!   canonical forms;
//! * [`engine`] — the weight w of a permutation as a polynomial in N and the
//!   Casimir generators C_k, computed by a memoized structural recursion;
//! * [`hc`] — the Harish–Chandra image: conversion to shifted power sums p_k
//!   and exact eigenvalues on highest-weight modules;
//! * [`hopf`] — coproduct and projection onto primitives of the chord-diagram
//!   Hopf algebra, and the reduced weight built from it;
//! * [`oracle`] — brute-force evaluation in U(gl_N) for concrete small N via
//!   PBW normal ordering, the ground truth everything else is tested against.
//!
//! All arithmetic is exact; there is no floating point in the crate.

pub mod diagrams;
pub mod engine;
pub mod error;
pub mod hc;
pub mod hopf;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod series;

pub use error::{Error, Result};
