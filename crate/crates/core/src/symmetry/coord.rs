use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{ExactPoint, ExactReal};

/// Integer label of a base-graph vertex: the point
/// `(a + b*sqrt33 + i*c*sqrt3 + i*d*sqrt11) / (4*3^h)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BaseCoord {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub h: u32,
}

/// Why a point has no `BaseCoord` form, or why a transform left the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordError {
    /// Coordinates involve radicals outside `{1, sqrt3, sqrt11, sqrt33}`.
    ForeignRadical,
    /// A denominator is not of the form `4*3^h` (e.g. contains 8 or 5).
    BadDenominator,
    /// A τ₁/τ₂ image was not integral; the input was not a lattice point
    /// with matching parity.
    NonIntegral,
    /// Mixed `h` values where a common `h` is required.
    MixedScale,
}

impl fmt::Display for CoordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordError::ForeignRadical => write!(f, "coordinate has a radical outside sqrt3/sqrt11/sqrt33"),
            CoordError::BadDenominator => write!(f, "coordinate denominator is not of the form 4*3^h"),
            CoordError::NonIntegral => write!(f, "transform produced a non-integral coordinate"),
            CoordError::MixedScale => write!(f, "coordinates do not share a common scale h"),
        }
    }
}

impl std::error::Error for CoordError {}

impl BaseCoord {
    pub fn new(a: i64, b: i64, c: i64, d: i64, h: u32) -> Self {
        BaseCoord { a, b, c, d, h }
    }

    pub fn origin() -> Self {
        BaseCoord::new(0, 0, 0, 0, 1)
    }

    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// The exact plane point this label denotes.
    pub fn to_point(&self) -> ExactPoint {
        let denom = BigInt::from(4) * BigInt::from(3).pow(self.h);
        let q = |n: i64| BigRational::new(BigInt::from(n), denom.clone());
        let re = &ExactReal::from_rational(q(self.a)) + &ExactReal::sqrt_scaled(q(self.b), 33);
        let im = &ExactReal::sqrt_scaled(q(self.c), 3) + &ExactReal::sqrt_scaled(q(self.d), 11);
        ExactPoint::new(re, im)
    }

    /// Canonical extraction: the unique form with minimal `h`, or an error
    /// describing why the point is outside the lattice. Points whose
    /// denominators contain primes other than 2 and 3 (as `rho`-rotated
    /// coordinates do) have no such form.
    pub fn from_point(p: &ExactPoint) -> Result<BaseCoord, CoordError> {
        let mut coeffs = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for (n, q) in p.re.terms() {
            match n {
                1 => coeffs[0] = q.clone(),
                33 => coeffs[1] = q.clone(),
                _ => return Err(CoordError::ForeignRadical),
            }
        }
        for (n, q) in p.im.terms() {
            match n {
                3 => coeffs[2] = q.clone(),
                11 => coeffs[3] = q.clone(),
                _ => return Err(CoordError::ForeignRadical),
            }
        }
        // Need q * 4 * 3^h integral: denominator must be 2^e2 * 3^e3, e2 <= 2.
        let mut h = 0u32;
        for q in &coeffs {
            let mut den = q.denom().clone();
            let mut e3 = 0u32;
            while (&den % BigInt::from(3)).is_zero() {
                den /= 3;
                e3 += 1;
            }
            let mut e2 = 0u32;
            while (&den % BigInt::from(2)).is_zero() {
                den /= 2;
                e2 += 1;
            }
            if !den.is_one() || e2 > 2 {
                return Err(CoordError::BadDenominator);
            }
            h = h.max(e3);
        }
        let denom = BigInt::from(4) * BigInt::from(3).pow(h);
        let mut ints = [0i64; 4];
        for (i, q) in coeffs.iter().enumerate() {
            let scaled = q * BigRational::from_integer(denom.clone());
            debug_assert!(scaled.denom().is_one());
            ints[i] = scaled
                .to_integer()
                .to_i64()
                .ok_or(CoordError::BadDenominator)?;
        }
        Ok(BaseCoord::new(ints[0], ints[1], ints[2], ints[3], h))
    }

    /// Rescale to a larger `h` (each step multiplies the integers by 3).
    pub fn with_h(&self, h: u32) -> Option<BaseCoord> {
        if h < self.h {
            return None;
        }
        let f = 3i64.checked_pow(h - self.h)?;
        Some(BaseCoord::new(self.a * f, self.b * f, self.c * f, self.d * f, h))
    }

    /// Squared Euclidean radius of the point, exactly.
    pub fn radius_sq(&self) -> ExactReal {
        self.to_point().norm_sq()
    }

    /// The τ₅ image: `b -> -b`, `d -> -d`.
    pub fn conj33(&self) -> BaseCoord {
        BaseCoord::new(self.a, -self.b, self.c, -self.d, self.h)
    }

    /// f64 squared radius, for shortlists only.
    pub fn radius_sq_f64(&self) -> f64 {
        const S33: f64 = 5.744562646538029; // sqrt(33)
        let denom = (4.0 * 3f64.powi(self.h as i32)).powi(2);
        let re2 = {
            let x = self.a as f64 + self.b as f64 * S33;
            x * x
        };
        let im2 = {
            let y = (self.c as f64) * 3f64.sqrt() + (self.d as f64) * 11f64.sqrt();
            y * y
        };
        (re2 + im2) / denom
    }
}

impl fmt::Display for BaseCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h == 1 {
            write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
        } else {
            write!(f, "({},{},{},{};h={})", self.a, self.b, self.c, self.d, self.h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_through_point() {
        for v in [
            BaseCoord::new(0, 4, 4, 0, 1),
            BaseCoord::new(-3, 1, 1, 3, 1),
            BaseCoord::new(12, 0, 0, 0, 1),
            BaseCoord::new(0, 0, 0, 0, 1),
        ] {
            let p = v.to_point();
            let back = BaseCoord::from_point(&p).unwrap();
            // Canonical extraction minimizes h: (12,0,0,0;h=1) = (4,0,0,0;h=0).
            assert_eq!(back.with_h(v.h).unwrap_or(back), v.with_h(back.h.max(v.h)).unwrap());
        }
    }

    #[test]
    fn canonical_extraction_minimizes_h() {
        let v = BaseCoord::new(12, 0, 0, 0, 1); // the point 1
        let p = v.to_point();
        assert_eq!(p, ExactPoint::from_integers(1, 0));
        let back = BaseCoord::from_point(&p).unwrap();
        assert_eq!(back, BaseCoord::new(4, 0, 0, 0, 0));
        assert_eq!(back.with_h(1).unwrap(), v);
    }

    #[test]
    fn spec_example_half_plus_half_sqrt33() {
        let p: ExactPoint = "(1/2 + 1/2*sqrt(33); 0)".parse().unwrap();
        let v = BaseCoord::from_point(&p).unwrap();
        assert_eq!(v.with_h(1).unwrap(), BaseCoord::new(6, 6, 0, 0, 1));
    }

    #[test]
    fn rho_coordinates_are_rejected() {
        use crate::exact::Rotor;
        let p = Rotor::rho().mul(&ExactPoint::from_integers(1, 0));
        assert!(matches!(
            BaseCoord::from_point(&p),
            Err(CoordError::BadDenominator) | Err(CoordError::ForeignRadical)
        ));
    }

    #[test]
    fn base_constraint_on_h1_vertices() {
        // a - b + c + d ≡ 0 (mod 4) on base-graph vertices with h = 1
        for v in [BaseCoord::new(0, 4, 4, 0, 1), BaseCoord::new(-3, 1, 1, 3, 1)] {
            assert_eq!((v.a - v.b + v.c + v.d).rem_euclid(4), 0);
        }
    }
}
