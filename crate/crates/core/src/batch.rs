//! Data-parallel evaluation of independent cases.
//!
//! Inputs are generated sequentially from a seed, results are collected in
//! input order, so output does not depend on the execution mode. Without the
//! `parallel` feature every mode runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::poly::Poly3;
use crate::quad::QuadratureCfg;
use crate::relative::f_integral;
use crate::tringle::{compare_closed, TringleComparison};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_seq(items, f)
}

pub fn map_with<T, R, F>(mode: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        Execution::Sequential => map_seq(items, f),
        Execution::Parallel => map_par(items, f),
    }
}

/// Largest value of `f` over the items; `NaN` results propagate.
pub fn max_of<T, F>(mode: Execution, items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    map_with(mode, items, f).into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

pub fn f_values(mode: Execution, xs: &[f64], cfg: &QuadratureCfg) -> Vec<Result<f64>> {
    map_with(mode, xs, |&x| f_integral(x, cfg))
}

pub fn compare_closed_batch(
    mode: Execution,
    triangles: &[[Poly3; 3]],
    cfg: &QuadratureCfg,
) -> Vec<Result<TringleComparison>> {
    map_with(mode, triangles, |[a, b, c]| compare_closed(a, b, c, cfg))
}
