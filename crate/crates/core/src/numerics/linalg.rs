// SPDX-License-Identifier: Apache-2.0

//! Two-component states, 2x2 complex matrices and the closed-form 2x2
//! eigenproblem.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };
pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A two-level state `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVec2 {
    pub a: C64,
    pub b: C64,
}

impl CVec2 {
    pub const fn new(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    pub fn from_re(a: f64, b: f64) -> Self {
        Self::new(C64::new(a, 0.0), C64::new(b, 0.0))
    }

    pub fn basis(k: usize) -> Self {
        match k {
            0 => Self::new(ONE, ZERO),
            _ => Self::new(ZERO, ONE),
        }
    }

    /// Hermitian inner product `<self|other>`.
    pub fn dot(&self, other: &CVec2) -> C64 {
        self.a.conj() * other.a + self.b.conj() * other.b
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.a.norm().hypot(self.b.norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.a.norm().max(self.b.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn scale(&self, s: C64) -> CVec2 {
        CVec2::new(self.a * s, self.b * s)
    }

    /// Unit-norm copy. The zero vector is returned unchanged.
    pub fn normalized(&self) -> CVec2 {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            self.scale(C64::new(1.0 / n, 0.0))
        }
    }

    /// Unit-norm copy whose largest-magnitude component is real and
    /// positive (ties go to the first component).
    pub fn canonical(&self) -> CVec2 {
        let v = self.normalized();
        let pivot = if v.b.norm() > v.a.norm() { v.b } else { v.a };
        if pivot.norm() == 0.0 {
            return v;
        }
        let v = v.scale(pivot.conj() / pivot.norm());
        // the pivot is now real; remove the rounding residue
        if v.b.norm() > v.a.norm() {
            CVec2::new(v.a, C64::new(v.b.re, 0.0))
        } else {
            CVec2::new(C64::new(v.a.re, 0.0), v.b)
        }
    }

    /// `1 - |<u|v>|` for the normalized rays; zero iff the states are
    /// proportional.
    pub fn ray_distance(&self, other: &CVec2) -> f64 {
        let n = self.norm() * other.norm();
        if n == 0.0 {
            return 1.0;
        }
        (1.0 - self.dot(other).norm() / n).max(0.0)
    }
}

impl Add for CVec2 {
    type Output = CVec2;
    fn add(self, o: CVec2) -> CVec2 {
        CVec2::new(self.a + o.a, self.b + o.b)
    }
}

impl AddAssign for CVec2 {
    fn add_assign(&mut self, o: CVec2) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl Sub for CVec2 {
    type Output = CVec2;
    fn sub(self, o: CVec2) -> CVec2 {
        CVec2::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for CVec2 {
    type Output = CVec2;
    fn neg(self) -> CVec2 {
        CVec2::new(-self.a, -self.b)
    }
}

impl Mul<C64> for CVec2 {
    type Output = CVec2;
    fn mul(self, s: C64) -> CVec2 {
        self.scale(s)
    }
}

impl Mul<f64> for CVec2 {
    type Output = CVec2;
    fn mul(self, s: f64) -> CVec2 {
        CVec2::new(self.a * s, self.b * s)
    }
}

/// A 2x2 complex matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CMat2 {
    pub m: [[C64; 2]; 2],
}

impl CMat2 {
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(d0: C64, d1: C64) -> Self {
        Self::new(d0, ZERO, ZERO, d1)
    }

    pub fn from_columns(c0: CVec2, c1: CVec2) -> Self {
        Self::new(c0.a, c1.a, c0.b, c1.b)
    }

    pub fn column(&self, k: usize) -> CVec2 {
        CVec2::new(self.m[0][k], self.m[1][k])
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }

    pub fn scale(&self, s: C64) -> CMat2 {
        let m = &self.m;
        CMat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn adjoint(&self) -> CMat2 {
        let m = &self.m;
        CMat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn transpose(&self) -> CMat2 {
        let m = &self.m;
        CMat2::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<CMat2> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.m;
        let r = d.inv();
        Some(CMat2::new(
            m[1][1] * r,
            -m[0][1] * r,
            -m[1][0] * r,
            m[0][0] * r,
        ))
    }

    /// Squared 2-norm condition number bound `||M||_F^2 / |det M|`.
    pub fn condition(&self) -> f64 {
        let d = self.det().norm();
        if d == 0.0 {
            f64::INFINITY
        } else {
            self.norm().powi(2) / d
        }
    }

    /// `<u| self |u>`.
    pub fn expectation(&self, u: &CVec2) -> C64 {
        u.dot(&(*self * *u))
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.m, &o.m);
        CMat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for CMat2 {
    type Output = CMat2;
    fn sub(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.m, &o.m);
        CMat2::new(
            a[0][0] - b[0][0],
            a[0][1] - b[0][1],
            a[1][0] - b[1][0],
            a[1][1] - b[1][1],
        )
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.m, &o.m);
        CMat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<CVec2> for CMat2 {
    type Output = CVec2;
    fn mul(self, v: CVec2) -> CVec2 {
        let m = &self.m;
        CVec2::new(m[0][0] * v.a + m[0][1] * v.b, m[1][0] * v.a + m[1][1] * v.b)
    }
}

impl Mul<C64> for CMat2 {
    type Output = CMat2;
    fn mul(self, s: C64) -> CMat2 {
        self.scale(s)
    }
}

/// One eigenpair of a 2x2 matrix; the eigenvector has unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: C64,
    pub vector: CVec2,
}

/// Both eigenpairs of `m`.
///
/// Eigenvalues are the roots of `l^2 - tr(M) l + det(M)`, the larger one
/// taken from the quadratic formula and the other from `det / l1` so no
/// cancellation occurs. A scalar matrix returns the canonical basis. When
/// the eigenvalues coincide within `tol * ||M||` and the matrix is not
/// scalar, the eigenspace is defective and [`Error::DegenerateMatrix`] is
/// returned.
pub fn eig2(m: &CMat2, tol: f64) -> Result<[EigenPair; 2]> {
    if !m.is_finite() {
        return Err(Error::InvalidArgument("eig2: non-finite matrix".into()));
    }
    let scale = m.norm();
    let half_tr = m.trace() * 0.5;
    let disc = half_tr * half_tr - m.det();
    let mut s = disc.sqrt();
    if (half_tr.conj() * s).re < 0.0 {
        s = -s;
    }
    let l1 = half_tr + s;
    let l2 = if l1.norm() > 0.0 {
        m.det() / l1
    } else {
        half_tr - s
    };

    if (l1 - l2).norm() <= tol * scale {
        let mean = (l1 + l2) * 0.5;
        let off = *m - CMat2::identity().scale(mean);
        if off.norm() <= tol * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
            return Ok([
                EigenPair {
                    value: mean,
                    vector: CVec2::basis(0),
                },
                EigenPair {
                    value: mean,
                    vector: CVec2::basis(1),
                },
            ]);
        }
        return Err(Error::DegenerateMatrix);
    }
    Ok([
        EigenPair {
            value: l1,
            vector: null_vector(m, l1),
        },
        EigenPair {
            value: l2,
            vector: null_vector(m, l2),
        },
    ])
}

/// Unit vector spanning the kernel of `m - l I` (assumed rank one).
fn null_vector(m: &CMat2, l: C64) -> CVec2 {
    let a = m.m[0][0] - l;
    let b = m.m[0][1];
    let c = m.m[1][0];
    let d = m.m[1][1] - l;
    // Either row gives the kernel; take the better-conditioned one.
    let from_row0 = CVec2::new(b, -a);
    let from_row1 = CVec2::new(d, -c);
    if from_row0.norm_sqr() >= from_row1.norm_sqr() {
        from_row0.normalized()
    } else {
        from_row1.normalized()
    }
}

/// Principal-branch `-i log(l)`.
pub fn phase_of_multiplier(l: C64) -> C64 {
    -I * l.ln()
}
