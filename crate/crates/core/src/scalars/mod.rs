//! Exact scalars: rationals and the field ℚ(ω) with ω a primitive 8th root of
//! unity.
//!
//! ℚ(ω) contains both ζ = ω² (a square root of −1) and √2 = ω − ω³, which is
//! every constant the rest of the crate needs. Elements are stored as four
//! rational coordinates on the power basis 1, ω, ω², ω³ with ω⁴ = −1.

mod rational;

pub use rational::Rational;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

/// An element c₀ + c₁ω + c₂ω² + c₃ω³ of ℚ(ω), ω⁴ = −1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyclo8 {
    c: [Rational; 4],
}

impl Cyclo8 {
    pub fn zero() -> Self {
        Cyclo8::default()
    }

    pub fn one() -> Self {
        Cyclo8::from_rational(Rational::ONE)
    }

    pub fn from_coeffs(c: [Rational; 4]) -> Self {
        Cyclo8 { c }
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclo8 { c: [r, Rational::ZERO, Rational::ZERO, Rational::ZERO] }
    }

    pub fn from_int(n: i64) -> Self {
        Cyclo8::from_rational(Rational::from_int(n))
    }

    /// The primitive 8th root of unity ω.
    pub fn omega() -> Self {
        Cyclo8::basis(1)
    }

    /// ζ = ω², the fixed square root of −1.
    pub fn zeta() -> Self {
        Cyclo8::basis(2)
    }

    /// √2 = ω − ω³.
    pub fn sqrt2() -> Self {
        let mut s = Cyclo8::basis(1);
        s.c[3] = Rational::from_int(-1);
        s
    }

    /// `a + bζ` with integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        let mut s = Cyclo8::from_int(a);
        s.c[2] = Rational::from_int(b);
        s
    }

    fn basis(i: usize) -> Self {
        let mut s = Cyclo8::zero();
        s.c[i] = Rational::ONE;
        s
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Rational::is_zero)
    }

    /// The value as a rational, if it lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.c[1..].iter().all(Rational::is_zero).then_some(&self.c[0])
    }

    fn is_gaussian(&self) -> bool {
        self.c[1].is_zero() && self.c[3].is_zero()
    }

    /// ω^e for any integer e.
    pub fn omega_pow(e: i64) -> Self {
        let e = e.rem_euclid(8) as usize;
        let mut s = Cyclo8::zero();
        if e < 4 {
            s.c[e] = Rational::ONE;
        } else {
            s.c[e - 4] = Rational::from_int(-1);
        }
        s
    }

    /// ζ^e for any integer e.
    pub fn zeta_pow(e: i64) -> Self {
        Cyclo8::omega_pow(2 * e)
    }

    /// The Galois automorphism ω ↦ ω^k, k odd.
    fn galois(&self, k: usize) -> Self {
        let mut out = Cyclo8::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let e = (j * k) % 8;
            if e < 4 {
                out.c[e] += cj;
            } else {
                out.c[e - 4] -= cj;
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_one() {
            return self.clone();
        }
        Cyclo8 { c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r] }
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if let Some(r) = self.as_rational() {
            return Ok(Cyclo8::from_rational(r.recip()?));
        }
        if self.is_gaussian() {
            // (a + bζ)⁻¹ = (a − bζ)/(a² + b²)
            let (a, b) = (&self.c[0], &self.c[2]);
            let norm = &(a * a) + &(b * b);
            let inv = norm.recip()?;
            let mut out = Cyclo8::from_rational(a * &inv);
            out.c[2] = -&(b * &inv);
            return Ok(out);
        }
        let partial = &(&self.galois(3) * &self.galois(5)) * &self.galois(7);
        let norm = self * &partial;
        let n = norm
            .as_rational()
            .expect("field norm of an element of Q(w) is rational")
            .clone();
        Ok(partial.scale(&n.recip()?))
    }

    pub fn checked_div(&self, other: &Cyclo8) -> Result<Self, ScalarError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Cyclo8::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Wire format `c0/d0,c1/d1,c2/d2,c3/d3`, every coordinate written as a fraction.
    pub fn to_wire(&self) -> String {
        self.c
            .iter()
            .map(|r| format!("{}/{}", r.numer(), r.denom()))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// 2^{k/2} as an exact element of ℚ(ω); odd `k` uses √2.
pub fn half_power_of_two(k: i64) -> Cyclo8 {
    let whole = k.div_euclid(2);
    let two_pow = if whole >= 0 {
        Rational::from_int(2).pow(whole as u32)
    } else {
        Rational::new(1, 2).pow((-whole) as u32)
    };
    if k.rem_euclid(2) == 0 {
        Cyclo8::from_rational(two_pow)
    } else {
        Cyclo8::sqrt2().scale(&two_pow)
    }
}

impl From<Rational> for Cyclo8 {
    fn from(r: Rational) -> Self {
        Cyclo8::from_rational(r)
    }
}

impl From<i64> for Cyclo8 {
    fn from(n: i64) -> Self {
        Cyclo8::from_int(n)
    }
}

impl<'a> Add<&'a Cyclo8> for &'a Cyclo8 {
    type Output = Cyclo8;
    #[inline]
    fn add(self, rhs: &'a Cyclo8) -> Cyclo8 {
        Cyclo8 {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a Cyclo8> for &'a Cyclo8 {
    type Output = Cyclo8;
    #[inline]
    fn sub(self, rhs: &'a Cyclo8) -> Cyclo8 {
        Cyclo8 {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
                &self.c[3] - &rhs.c[3],
            ],
        }
    }
}

impl<'a> Mul<&'a Cyclo8> for &'a Cyclo8 {
    type Output = Cyclo8;
    #[inline]
    fn mul(self, rhs: &'a Cyclo8) -> Cyclo8 {
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        let mut out = Cyclo8::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                if i + j < 4 {
                    out.c[i + j] += &p;
                } else {
                    out.c[i + j - 4] -= &p;
                }
            }
        }
        out
    }
}

impl<'a> Neg for &'a Cyclo8 {
    type Output = Cyclo8;
    fn neg(self) -> Cyclo8 {
        Cyclo8 { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

impl Neg for Cyclo8 {
    type Output = Cyclo8;
    fn neg(self) -> Cyclo8 {
        -&self
    }
}

impl Div<&Cyclo8> for &Cyclo8 {
    type Output = Cyclo8;
    /// Panics on division by zero; use [`Cyclo8::checked_div`] to recover.
    fn div(self, rhs: &Cyclo8) -> Cyclo8 {
        self.checked_div(rhs).expect("division by zero in Q(w)")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclo8> for Cyclo8 {
            type Output = Cyclo8;
            fn $m(self, rhs: Cyclo8) -> Cyclo8 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclo8> for Cyclo8 {
            type Output = Cyclo8;
            fn $m(self, rhs: &Cyclo8) -> Cyclo8 {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Cyclo8> for Cyclo8 {
    fn add_assign(&mut self, rhs: &Cyclo8) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&Cyclo8> for Cyclo8 {
    fn sub_assign(&mut self, rhs: &Cyclo8) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl MulAssign<&Cyclo8> for Cyclo8 {
    fn mul_assign(&mut self, rhs: &Cyclo8) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Cyclo8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const UNITS: [&str; 4] = ["", "ω", "ζ", "ω³"];
        let mut wrote = false;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let mag = c.abs();
            if wrote {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(UNITS[i])?,
                (_, false) => write!(f, "{mag}{}", UNITS[i])?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo8({self})")
    }
}

impl FromStr for Cyclo8 {
    type Err = ScalarError;

    /// Parses the wire format; bare integers in a slot are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(ScalarError::Parse(s.to_string()));
        }
        let mut c: [Rational; 4] = Default::default();
        for (slot, p) in c.iter_mut().zip(parts) {
            *slot = p.parse()?;
        }
        Ok(Cyclo8 { c })
    }
}

impl serde::Serialize for Cyclo8 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_wire())
    }
}

impl<'de> serde::Deserialize<'de> for Cyclo8 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn zeta_squares_to_minus_one() {
        let z = Cyclo8::zeta();
        assert_eq!(&z * &z, Cyclo8::from_int(-1));
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = Cyclo8::sqrt2();
        assert_eq!(&s * &s, Cyclo8::from_int(2));
    }

    #[test]
    fn one_plus_zeta_times_one_minus_zeta() {
        let a = Cyclo8::gaussian(1, 1);
        let b = Cyclo8::gaussian(1, -1);
        assert_eq!(&a * &b, Cyclo8::from_int(2));
    }

    #[test]
    fn omega_has_order_eight() {
        let w = Cyclo8::omega();
        assert_eq!(w.pow(4), Cyclo8::from_int(-1));
        assert_eq!(w.pow(8), Cyclo8::one());
        assert_eq!(Cyclo8::omega_pow(-1), -Cyclo8::omega_pow(3));
    }

    #[test]
    fn half_powers() {
        assert_eq!(half_power_of_two(2), Cyclo8::from_int(2));
        assert_eq!(half_power_of_two(1), Cyclo8::sqrt2());
        assert_eq!(half_power_of_two(-1), Cyclo8::sqrt2().scale(&r(1, 2)));
        assert_eq!(half_power_of_two(0), Cyclo8::one());
        assert_eq!(half_power_of_two(-4), Cyclo8::from_rational(r(1, 4)));
        assert_eq!(&half_power_of_two(3) * &half_power_of_two(-3), Cyclo8::one());
    }

    #[test]
    fn inverse_generic_element() {
        let a = Cyclo8::from_coeffs([r(1, 2), r(-3, 1), r(2, 7), r(5, 1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Cyclo8::one());
        assert_eq!(Cyclo8::zero().inverse(), Err(ScalarError::DivisionByZero));
        assert!(Cyclo8::one().checked_div(&Cyclo8::zero()).is_err());
    }

    #[test]
    fn wire_round_trip() {
        let a = Cyclo8::from_coeffs([r(1, 2), r(-3, 1), r(0, 1), r(5, 9)]);
        let w = a.to_wire();
        assert_eq!(w, "1/2,-3/1,0/1,5/9");
        assert_eq!(w.parse::<Cyclo8>().unwrap(), a);
        assert!("1,2,3".parse::<Cyclo8>().is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Cyclo8::gaussian(1, -1).to_string(), "1 - ζ");
        assert_eq!(Cyclo8::zero().to_string(), "0");
        assert_eq!(Cyclo8::sqrt2().to_string(), "ω - ω³");
    }
}
