// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod bingles;
pub mod bispace;
pub mod error;
pub mod geodesic;
pub mod poly;
pub mod quad;
pub mod random;
pub mod relative;
pub mod sampling;
pub mod selftest;
pub mod tringle;
