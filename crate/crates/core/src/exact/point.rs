use std::fmt;
use std::ops::{Add, Neg, Sub};


use super::real::{ExactReal, Rational};

/// A point of the complex plane with exact coordinates.
///
/// Equality and hashing are component-wise on the canonical [`ExactReal`]
/// representation, so a point is usable as a map key.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactPoint {
    pub re: ExactReal,
    pub im: ExactReal,
}

impl ExactPoint {
    pub fn new(re: ExactReal, im: ExactReal) -> Self {
        ExactPoint { re, im }
    }

    pub fn origin() -> Self {
        ExactPoint::default()
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        ExactPoint::new(ExactReal::from_integer(re), ExactReal::from_integer(im))
    }

    pub fn is_origin(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Exact complex product.
    pub fn mul(&self, rhs: &ExactPoint) -> ExactPoint {
        ExactPoint {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    /// Complex conjugate (reflection across the real axis).
    pub fn conj(&self) -> ExactPoint {
        ExactPoint { re: self.re.clone(), im: -&self.im }
    }

    /// The `sqrt(33)` conjugation applied to both coordinates. Not a plane
    /// isometry, but fixes every rational distance, so it maps strict
    /// unit-distance graphs to strict unit-distance graphs.
    pub fn conj_sqrt33(&self) -> ExactPoint {
        ExactPoint { re: self.re.conj_sqrt33(), im: self.im.conj_sqrt33() }
    }

    /// Exact `|self|^2`.
    pub fn norm_sq(&self) -> ExactReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Exact squared Euclidean distance `|self - other|^2`.
    pub fn dist_sq(&self, other: &ExactPoint) -> ExactReal {
        (self - other).norm_sq()
    }

    /// True iff the two points are at Euclidean distance exactly 1.
    pub fn is_unit(&self, other: &ExactPoint) -> bool {
        self.dist_sq(other) == ExactReal::one()
    }

    /// Scale both coordinates by a rational factor.
    pub fn scale(&self, q: &Rational) -> ExactPoint {
        let f = ExactReal::from_rational(q.clone());
        ExactPoint { re: &self.re * &f, im: &self.im * &f }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &ExactPoint {
    type Output = ExactPoint;
    fn add(self, rhs: &ExactPoint) -> ExactPoint {
        ExactPoint { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ExactPoint {
    type Output = ExactPoint;
    fn sub(self, rhs: &ExactPoint) -> ExactPoint {
        ExactPoint { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Neg for &ExactPoint {
    type Output = ExactPoint;
    fn neg(self) -> ExactPoint {
        ExactPoint { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for ExactPoint {
    /// `(<re>; <im>)`, each coordinate in [`ExactReal`] canonical form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.re, self.im)
    }
}

impl fmt::Debug for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Names of the built-in transforms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RotorName {
    Eta,
    EtaInv,
    Rho,
    I,
    IOverSqrt3,
    ConjSqrt33,
}

/// A transform descriptor: either multiplication by a fixed complex number
/// or the `sqrt(33)` conjugation map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rotor {
    Multiplier(ExactPoint),
    ConjSqrt33,
}

impl Rotor {
    /// The named transforms:
    /// `eta = (sqrt33 + i*sqrt3)/6`, `rho = (7 + i*sqrt15)/8`, both of unit
    /// modulus; `i`; `i/sqrt3` of modulus `1/sqrt3`; and the `sqrt(33)`
    /// conjugation.
    pub fn named(name: RotorName) -> Rotor {
        let sixth = || Rational::new(1.into(), 6.into());
        match name {
            RotorName::Eta => Rotor::Multiplier(ExactPoint::new(
                ExactReal::sqrt_scaled(sixth(), 33),
                ExactReal::sqrt_scaled(sixth(), 3),
            )),
            RotorName::EtaInv => Rotor::Multiplier(ExactPoint::new(
                ExactReal::sqrt_scaled(sixth(), 33),
                -&ExactReal::sqrt_scaled(sixth(), 3),
            )),
            RotorName::Rho => Rotor::Multiplier(ExactPoint::new(
                ExactReal::ratio(7, 8),
                ExactReal::sqrt_scaled(Rational::new(1.into(), 8.into()), 15),
            )),
            RotorName::I => Rotor::Multiplier(ExactPoint::from_integers(0, 1)),
            RotorName::IOverSqrt3 => Rotor::Multiplier(ExactPoint::new(
                ExactReal::zero(),
                ExactReal::sqrt_scaled(Rational::new(1.into(), 3.into()), 3),
            )),
            RotorName::ConjSqrt33 => Rotor::ConjSqrt33,
        }
    }

    pub fn eta() -> ExactPoint {
        match Rotor::named(RotorName::Eta) {
            Rotor::Multiplier(p) => p,
            _ => unreachable!(),
        }
    }

    pub fn rho() -> ExactPoint {
        match Rotor::named(RotorName::Rho) {
            Rotor::Multiplier(p) => p,
            _ => unreachable!(),
        }
    }

    /// `eta^k` for any integer `k` (negative powers via the conjugate,
    /// since `|eta| = 1`).
    pub fn eta_pow(k: i32) -> ExactPoint {
        let base = if k >= 0 { Rotor::eta() } else { Rotor::eta().conj() };
        let mut acc = ExactPoint::from_integers(1, 0);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn apply(&self, p: &ExactPoint) -> ExactPoint {
        match self {
            Rotor::Multiplier(m) => m.mul(p),
            Rotor::ConjSqrt33 => p.conj_sqrt33(),
        }
    }
}
