//! Exact checks for deferred statistical order convergence of sequences in
//! ℚ^d: index-set densities under deferred pairs, Cesàro means, certificate
//! checking with witnesses, and a line-oriented spec format with JSON reports.

pub mod cert;
pub mod corpus;
pub mod index_set;
pub mod iroot;
pub mod lattice;
pub mod lex;
pub mod pair;
pub mod poly;
pub mod rational;
pub mod sequence;
pub mod spec;
pub mod suite;
pub mod term;
pub mod verdict;
