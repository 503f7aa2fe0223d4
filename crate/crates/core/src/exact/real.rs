use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, the coefficient type of [`ExactReal`].
pub type Rational = BigRational;

/// An exact element of a real field of nested square roots: a finite map
/// from squarefree positive integer `n` to a nonzero rational coefficient,
/// with value `Σ q_n * sqrt(n)`. The key `1` holds the rational part.
///
/// Invariants (maintained by every constructor and operation):
/// * every key is squarefree and positive,
/// * no zero coefficient is stored,
/// * coefficients are in lowest terms (guaranteed by `BigRational`).
///
/// Equality and hashing are structural, which by canonicity coincides with
/// numerical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactReal {
    terms: BTreeMap<u64, Rational>,
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ExactReal::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        ExactReal::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        ExactReal { terms }
    }

    /// `p/q` as an exact value. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        ExactReal::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `sqrt(n)` for any positive integer `n`; the square part is factored
    /// out, e.g. `sqrt(12) = 2*sqrt(3)`.
    pub fn sqrt(n: u64) -> Self {
        assert!(n > 0, "sqrt of non-positive integer");
        let (square, free) = split_square(n);
        let mut terms = BTreeMap::new();
        terms.insert(free, Rational::from_integer(BigInt::from(square)));
        ExactReal { terms }
    }

    /// `q * sqrt(n)`; `n` need not be squarefree.
    pub fn sqrt_scaled(q: Rational, n: u64) -> Self {
        &ExactReal::from_rational(q) * &ExactReal::sqrt(n)
    }

    /// Internal constructor from raw terms; drops zeros, checks keys.
    pub(crate) fn from_terms(terms: BTreeMap<u64, Rational>) -> Self {
        let terms: BTreeMap<u64, Rational> = terms
            .into_iter()
            .filter(|(_, q)| !q.is_zero())
            .inspect(|(n, _)| debug_assert!(*n > 0 && is_squarefree(*n), "non-canonical key {n}"))
            .collect();
        ExactReal { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the value is a plain rational (no radical part).
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&n| n == 1)
    }

    /// The coefficient of `sqrt(n)`, zero if absent. `n` must be squarefree.
    pub fn coeff(&self, n: u64) -> Rational {
        self.terms.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    /// Iterator over `(n, q_n)` in ascending `n`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(n, q)| (*n, q))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// If the value is rational, return it.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.terms.len() == 1 {
            self.terms.get(&1).cloned()
        } else {
            None
        }
    }

    /// The field automorphism fixing `sqrt(p)` for `p != 11` and negating
    /// `sqrt(11)`: coefficients of every key divisible by 11 are negated.
    /// On base-graph coordinates this is the conjugation by `sqrt(33)`
    /// (it sends `b -> -b`, `d -> -d`), and it preserves unit distances
    /// because it fixes every rational.
    pub fn conj_sqrt33(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&n, q)| (n, if n % 11 == 0 { -q.clone() } else { q.clone() }))
            .collect();
        ExactReal { terms }
    }

    /// Exact sign: `-1`, `0` or `+1`. Zero is decided symbolically (empty
    /// term map); otherwise interval evaluation at doubling precision ends
    /// once the interval excludes zero, which must happen since the exact
    /// value is nonzero.
    pub fn signum(&self) -> i32 {
        if self.terms.is_empty() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return sign_to_i32(q.numer().sign());
        }
        let mut bits = 32u32;
        loop {
            let (lo, hi) = self.eval_interval(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Exact comparison via the sign of the difference.
    pub fn cmp_exact(&self, other: &ExactReal) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self - other).signum() {
            0 => Ordering::Equal,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    /// Rigorous enclosure `[lo, hi]` with each `sqrt(n)` bounded to
    /// `2^-bits` absolute precision.
    pub fn eval_interval(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (&n, q) in &self.terms {
            let (slo, shi) = sqrt_bounds(n, bits);
            if q.is_positive() {
                lo += q * &slo;
                hi += q * &shi;
            } else {
                lo += q * &shi;
                hi += q * &slo;
            }
        }
        (lo, hi)
    }

    /// Double-precision approximation. Good to a few ulps per term; for a
    /// rigorous bound use [`ExactReal::eval_interval`].
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&n, q)| q.to_f64().unwrap_or(f64::NAN) * (n as f64).sqrt())
            .sum()
    }
}

fn sign_to_i32(s: Sign) -> i32 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `[s/2^bits, (s+1)/2^bits]` with `s = isqrt(n * 4^bits)`.
fn sqrt_bounds(n: u64, bits: u32) -> (Rational, Rational) {
    if n == 1 {
        return (Rational::one(), Rational::one());
    }
    let scaled = BigInt::from(n) << (2 * bits);
    let s = scaled.sqrt();
    let denom = BigInt::one() << bits;
    (
        Rational::new(s.clone(), denom.clone()),
        Rational::new(s + 1, denom),
    )
}

/// Split `n = square^2 * free` with `free` squarefree, by trial division.
fn split_square(n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += 1;
    }
    free *= m;
    (square, free)
}

fn is_squarefree(n: u64) -> bool {
    split_square(n).0 == 1
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        let mut terms = self.terms.clone();
        for (&n, q) in &rhs.terms {
            let entry = terms.entry(n).or_insert_with(Rational::zero);
            *entry += q;
            if entry.is_zero() {
                terms.remove(&n);
            }
        }
        ExactReal { terms }
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        self + &(-rhs)
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        let terms = self.terms.iter().map(|(&n, q)| (n, -q.clone())).collect();
        ExactReal { terms }
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        // sqrt(m)*sqrt(n) = g*sqrt(mn/g^2) with g = gcd(m, n); the product
        // of two squarefree numbers divided by their squared gcd is
        // squarefree, so no re-factoring is needed.
        let mut terms: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&m, p) in &self.terms {
            for (&n, q) in &rhs.terms {
                let g = m.gcd(&n);
                let key = (m / g) * (n / g);
                let coeff = p * q * Rational::from_integer(BigInt::from(g));
                let entry = terms.entry(key).or_insert_with(Rational::zero);
                *entry += coeff;
                if entry.is_zero() {
                    terms.remove(&key);
                }
            }
        }
        ExactReal { terms }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: ExactReal) -> ExactReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl fmt::Display for ExactReal {
    /// Canonical textual form: terms in ascending `n`, joined with
    /// ` + ` / ` - `; the rational part prints bare, radical terms print as
    /// `p/q*sqrt(n)` with unit coefficients elided. Zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&n, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = q.abs();
            if n == 1 {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "sqrt({n})")?;
            } else {
                write!(f, "{}*sqrt({n})", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: u64) -> ExactReal {
        ExactReal::sqrt(n)
    }

    #[test]
    fn radical_product_identity() {
        assert_eq!(&sqrt(3) * &sqrt(11), sqrt(33));
        assert_eq!(&sqrt(3) * &sqrt(3), ExactReal::from_integer(3));
        assert_eq!(&sqrt(6) * &sqrt(10), &ExactReal::from_integer(2) * &sqrt(15));
    }

    #[test]
    fn difference_of_squares() {
        let one = ExactReal::one();
        let a = &one + &sqrt(33);
        let b = &one - &sqrt(33);
        assert_eq!(&a * &b, ExactReal::from_integer(-32));
    }

    #[test]
    fn additive_inverse_cancels_to_empty_map() {
        let half_rt3 = ExactReal::sqrt_scaled(Rational::new(1.into(), 2.into()), 3);
        let sum = &half_rt3 + &(-&half_rt3);
        assert!(sum.is_zero());
        assert_eq!(sum.term_count(), 0);
    }

    #[test]
    fn sqrt_factors_square_part() {
        assert_eq!(sqrt(12), &ExactReal::from_integer(2) * &sqrt(3));
        assert_eq!(sqrt(4), ExactReal::from_integer(2));
        assert_eq!(sqrt(1), ExactReal::one());
        assert_eq!(sqrt(99), &ExactReal::from_integer(3) * &sqrt(11));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(ExactReal::zero().signum(), 0);
        // 6 - sqrt(33) > 0 since 33 < 36
        assert_eq!((&ExactReal::from_integer(6) - &sqrt(33)).signum(), 1);
        // 17/6 + sqrt(33)/6 - 4 < 0 since sqrt(33) < 7
        let x = &(&ExactReal::ratio(17, 6)
            + &ExactReal::sqrt_scaled(Rational::new(1.into(), 6.into()), 33))
            - &ExactReal::from_integer(4);
        assert_eq!(x.signum(), -1);
    }

    #[test]
    fn sign_of_tight_difference() {
        // sqrt(2) + sqrt(3) vs sqrt(5 + 2*sqrt(6)) are equal; perturb a bit.
        let x = &(&sqrt(2) + &sqrt(3)) - &ExactReal::ratio(31463, 10000);
        assert_eq!(x.signum(), -1); // sqrt2+sqrt3 = 3.14626...
        let y = &(&sqrt(2) + &sqrt(3)) - &ExactReal::ratio(31462, 10000);
        assert_eq!(y.signum(), 1);
    }

    #[test]
    fn conjugation_negates_sqrt11_multiples() {
        let x = &(&ExactReal::one() + &sqrt(33)) + &(&sqrt(3) + &sqrt(11));
        let c = x.conj_sqrt33();
        assert_eq!(c.coeff(1), Rational::one());
        assert_eq!(c.coeff(3), Rational::one());
        assert_eq!(c.coeff(33), -Rational::one());
        assert_eq!(c.coeff(11), -Rational::one());
        assert_eq!(c.conj_sqrt33(), x);
    }

    #[test]
    fn display_roundtrip_forms() {
        let x = &(&ExactReal::ratio(1, 2) + &ExactReal::sqrt_scaled(Rational::new(1.into(), 2.into()), 33))
            - &sqrt(3);
        assert_eq!(x.to_string(), "1/2 - sqrt(3) + 1/2*sqrt(33)");
        assert_eq!(ExactReal::zero().to_string(), "0");
        assert_eq!((-&sqrt(5)).to_string(), "-sqrt(5)");
    }

    #[test]
    fn interval_encloses_value() {
        let x = &(&sqrt(2) * &ExactReal::ratio(-7, 3)) + &sqrt(165);
        let (lo, hi) = x.eval_interval(64);
        assert!((&hi - &lo).to_f64().unwrap() < 1e-15);
        // the f64 approximation agrees with the rigorous midpoint
        let mid = (&lo + &hi).to_f64().unwrap() / 2.0;
        assert!((x.to_f64() - mid).abs() < 1e-9);
    }
}
