//! Exact reduction of rational first-order ODEs `y' = M(x,y)/N(x,y)` to
//! generalized Abel form `t(x)·y' = Σ f_i(x)·y^i` through rational
//! transformations `y -> A(x,y)/B(x,y)`, including the canceled-factor
//! search, candidate degree tests, a power-case shortcut, and a Liouvillian
//! inverse-integrating-factor path for the quadratic case.
//!
//! All arithmetic is exact over the rationals; there is no floating point
//! anywhere in the pipeline.

pub mod rat;

pub mod poly;

pub mod factor;

pub mod linalg;
pub mod groebner;
pub mod candidates;
pub mod cancel;

pub mod forward;

pub mod iif;

pub mod reduce;
