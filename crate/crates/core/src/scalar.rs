//! Exact scalars over a prime field or the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Prime(u32),
    Rational,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub const F101: Field = Field::Prime(101);

    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) || p > 65_521 {
            return Err(Error::Field(format!("{p} is not a supported prime (need prime <= 65521)")));
        }
        Ok(Field::Prime(p))
    }

    /// Accepts `Q`, `QQ`, `F101`, `F_101`, `GF(101)`.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::Field(format!("unknown field `{t}`")))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Field(format!("unknown field `{t}`")))?;
        Field::prime(p)
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Prime(p) => p,
            Field::Rational => 0,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp { p, v: n.rem_euclid(p as i64) as u32 },
            Field::Rational => Scalar::Q(Box::new(BigRational::from_integer(BigInt::from(n)))),
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Field("zero denominator".into()));
        }
        let d = self.from_i64(den);
        let inv = d.inv().ok_or_else(|| Error::Field(format!("{den} is not invertible in {self}")))?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// (-1)^k in this field.
    pub fn sign(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { p: u32, v: u32 },
    Q(Box<BigRational>),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Q(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Fp { p, v } => {
                // Fermat: v^(p-2)
                let (p64, mut base, mut e, mut acc) = (*p as u64, *v as u64, *p as u64 - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p64;
                    }
                    base = base * base % p64;
                    e >>= 1;
                }
                Scalar::Fp { p: *p, v: acc as u32 }
            }
            Scalar::Q(q) => Scalar::Q(Box::new(q.recip())),
        })
    }

    /// Symmetric integer representative for prime fields; `None` for non-integral rationals.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Fp { p, v } => {
                let (p, v) = (*p as i64, *v as i64);
                Some(if v > p / 2 { v - p } else { v })
            }
            Scalar::Q(q) => {
                if q.is_integer() {
                    q.to_integer().to_i64()
                } else {
                    None
                }
            }
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalars from different fields combined");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { .. } => write!(f, "{}", self.to_i64().unwrap_or_default()),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Fp { p, v }, Scalar::Fp { v: w, .. }) => Scalar::Fp { p: *p, v: ((*v as u64 + *w as u64) % *p as u64) as u32 },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(&**a + &**b)),
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Fp { p, v }, Scalar::Fp { v: w, .. }) => Scalar::Fp { p: *p, v: ((*v as u64 * *w as u64) % *p as u64) as u32 },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(&**a * &**b)),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: if *v == 0 { 0 } else { *p - *v } },
            Scalar::Q(q) => Scalar::Q(Box::new(-&**q)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// (-1)^{pq} as a scalar of `field`.
pub fn koszul_sign(field: Field, p: i64, q: i64) -> Scalar {
    field.sign(p * q)
}

/// Parity of the Koszul sign picked up when the items with the given degrees
/// are rearranged so that position `m` holds the item originally at `order[m]`.
pub fn reorder_parity(degrees: &[i32], order: &[usize]) -> i64 {
    let mut parity = 0i64;
    for a in 0..order.len() {
        let da = degrees[order[a]] as i64;
        if da % 2 == 0 {
            continue;
        }
        for b in a + 1..order.len() {
            if order[a] > order[b] {
                parity += da * degrees[order[b]] as i64;
            }
        }
    }
    parity.rem_euclid(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn koszul_examples() {
        let f = Field::F101;
        assert_eq!(koszul_sign(f, 1, 1), f.from_i64(-1));
        assert_eq!(koszul_sign(f, 0, 5), f.one());
        assert_eq!(koszul_sign(f, 2, 3), f.one());
        assert_eq!(koszul_sign(Field::Rational, 3, 5), Field::Rational.from_i64(-1));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("F101").unwrap(), Field::F101);
        assert_eq!(Field::parse("F_7").unwrap(), Field::Prime(7));
        assert_eq!(Field::parse("GF(3)").unwrap(), Field::Prime(3));
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
        assert!(Field::parse("F100").is_err());
        assert!(Field::parse("R").is_err());
    }

    #[test]
    fn display_uses_symmetric_representative() {
        let f = Field::F101;
        assert_eq!(f.from_i64(-1).to_string(), "-1");
        assert_eq!(f.from_i64(50).to_string(), "50");
        assert_eq!(Field::Rational.from_ratio(3, -6).unwrap().to_string(), "-1/2");
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixing_fields_panics() {
        let _ = &Field::F101.one() + &Field::Prime(7).one();
    }

    #[test]
    fn reorder_parity_counts_odd_crossings() {
        // swapping two odd items
        assert_eq!(reorder_parity(&[1, 1], &[1, 0]), 1);
        assert_eq!(reorder_parity(&[1, 2], &[1, 0]), 0);
        // cyclic move of an odd item past two odd items
        assert_eq!(reorder_parity(&[1, 1, 1], &[2, 0, 1]), 0);
        assert_eq!(reorder_parity(&[1, 1, 0], &[2, 0, 1]), 0);
        assert_eq!(reorder_parity(&[1, 0, 1], &[2, 0, 1]), 1);
    }

    fn fp_field() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![Field::Prime(2), Field::Prime(3), Field::F101, Field::Prime(65521)])
    }

    proptest! {
        #[test]
        fn prime_field_axioms(f in fp_field(), a in -500i64..500, b in -500i64..500, c in -500i64..500) {
            let (x, y, z) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x - &x, f.zero());
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn rational_field_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
            let q = Field::Rational;
            let x = q.from_ratio(a, b).unwrap();
            let y = q.from_ratio(c, d).unwrap();
            prop_assert_eq!(&(&x * &y) - &(&y * &x), q.zero());
            prop_assert_eq!(q.from_ratio(a * d + c * b, b * d).unwrap(), &x + &y);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
    }
}
