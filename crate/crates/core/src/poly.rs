//! The commutative-associative algebra of 3-numbers.
//!
//! Elements are written in the isotropic basis `{e1, e2, e3}` with
//! `ei * ej = δij ei`, so every algebraic operation acts componentwise.
//! The unit is `I = e1 + e2 + e3`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A 3-number `c1 e1 + c2 e2 + c3 e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly3(pub [f64; 3]);

/// The two cyclic conjugations of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjugation {
    /// `(a1, a2, a3) -> (a3, a1, a2)`
    Dagger,
    /// `(a1, a2, a3) -> (a2, a3, a1)`
    Ddagger,
}

impl Poly3 {
    pub const ONE: Poly3 = Poly3([1.0, 1.0, 1.0]);
    pub const ZERO: Poly3 = Poly3([0.0, 0.0, 0.0]);
    pub const E1: Poly3 = Poly3([1.0, 0.0, 0.0]);
    pub const E2: Poly3 = Poly3([0.0, 1.0, 0.0]);
    pub const E3: Poly3 = Poly3([0.0, 0.0, 1.0]);

    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Poly3([c1, c2, c3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Zero divisors are exactly the elements with a vanishing component.
    pub fn is_degenerate(&self) -> bool {
        self.0.contains(&0.0)
    }

    pub fn is_first_octant(&self) -> bool {
        self.0.iter().all(|&c| c > 0.0)
    }

    /// Fails with [`Error::OutOfOctant`] unless every component is finite and positive.
    pub fn require_first_octant(&self) -> Result<()> {
        if self.is_finite() && self.is_first_octant() {
            Ok(())
        } else {
            Err(Error::OutOfOctant(self.0))
        }
    }

    pub fn scale(&self, k: f64) -> Poly3 {
        Poly3(self.0.map(|c| c * k))
    }

    pub fn div(&self, other: &Poly3) -> Result<Poly3> {
        if other.is_degenerate() {
            return Err(Error::DegenerateDivisor);
        }
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Ok(Poly3([a1 / b1, a2 / b2, a3 / b3]))
    }

    pub fn conj(&self, kind: Conjugation) -> Poly3 {
        let [a1, a2, a3] = self.0;
        match kind {
            Conjugation::Dagger => Poly3([a3, a1, a2]),
            Conjugation::Ddagger => Poly3([a2, a3, a1]),
        }
    }

    /// Quasi-norm `|a1 a2 a3|^(1/3)`; zero on the degenerate set.
    pub fn norm(&self) -> f64 {
        let [a1, a2, a3] = self.0;
        (a1 * a2 * a3).abs().cbrt()
    }

    /// Exponential series, which in the isotropic basis is componentwise.
    pub fn exp(&self) -> Poly3 {
        Poly3(self.0.map(f64::exp))
    }

    /// Componentwise natural logarithm; defined only in the first octant.
    pub fn ln(&self) -> Result<[f64; 3]> {
        self.require_first_octant()?;
        Ok(self.0.map(f64::ln))
    }

    /// Reorders the components: result `i` is `self[perm[i]]`.
    pub fn permute(&self, perm: [usize; 3]) -> Poly3 {
        Poly3([self.0[perm[0]], self.0[perm[1]], self.0[perm[2]]])
    }
}

/// 3-scalar product: the permanent of the matrix with rows `a`, `b`, `c`.
pub fn scalar3(a: &Poly3, b: &Poly3, c: &Poly3) -> f64 {
    // Factors and terms are multiplied and summed in sorted order so the
    // result is bitwise symmetric in its arguments.
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut terms = PERMS.map(|p| {
        let mut f = [a.0[p[0]], b.0[p[1]], c.0[p[2]]];
        f.sort_by(f64::total_cmp);
        f[0] * f[1] * f[2]
    });
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Real cube root that keeps the sign of its argument.
pub fn signed_cuberoot(x: f64) -> f64 {
    x.cbrt()
}

impl Index<usize> for Poly3 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Poly3 {
    type Output = Poly3;

    fn add(self, rhs: Poly3) -> Poly3 {
        Poly3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for Poly3 {
    type Output = Poly3;

    fn sub(self, rhs: Poly3) -> Poly3 {
        Poly3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for Poly3 {
    type Output = Poly3;

    fn neg(self) -> Poly3 {
        Poly3(self.0.map(|c| -c))
    }
}

impl Mul for Poly3 {
    type Output = Poly3;

    fn mul(self, rhs: Poly3) -> Poly3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = rhs.0;
        Poly3([a1 * b1, a2 * b2, a3 * b3])
    }
}

impl Mul<f64> for Poly3 {
    type Output = Poly3;

    fn mul(self, k: f64) -> Poly3 {
        self.scale(k)
    }
}

/// Sign pattern of a nondegenerate vector, one of the eight coordinate octants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Octant(pub [i8; 3]);

impl Octant {
    pub const FIRST: Octant = Octant([1, 1, 1]);

    /// Bisector `I_(j)` of the octant.
    pub fn bisector(&self) -> Poly3 {
        Poly3(self.0.map(f64::from))
    }
}

/// Splits `a` into its octant and the first-octant representative `a / I_(j)`.
pub fn normalize_octant(a: &Poly3) -> Result<(Poly3, Octant)> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.is_degenerate() {
        return Err(Error::NullComponent(a.0));
    }
    let signs = a.0.map(|c| if c > 0.0 { 1i8 } else { -1i8 });
    Ok((Poly3(a.0.map(f64::abs)), Octant(signs)))
}
