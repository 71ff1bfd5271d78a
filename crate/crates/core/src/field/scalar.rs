//! Elements of a prime field: ℚ or 𝔽_p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    /// `value < p`.
    Fp {
        value: u64,
        p: u64,
    },
}

/// Characteristic 0 or a prime below 2³².
pub fn check_characteristic(p: u64) -> Result<()> {
    if p == 0 || (p < 1 << 32 && is_prime(p)) {
        Ok(())
    } else {
        Err(Error::Field(format!(
            "characteristic {p} is neither 0 nor a prime below 2^32"
        )))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn zero(p: u64) -> Scalar {
        Scalar::from_i64(0, p)
    }

    pub fn one(p: u64) -> Scalar {
        Scalar::from_i64(1, p)
    }

    pub fn from_i64(n: i64, p: u64) -> Scalar {
        if p == 0 {
            Scalar::Q(BigRational::from_integer(n.into()))
        } else {
            Scalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                p,
            }
        }
    }

    /// `n / d` in characteristic 0.
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(n.into(), d.into()))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Scalar::Q(_) => 0,
            Scalar::Fp { p, .. } => *p,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    fn same(&self, other: &Scalar) {
        assert_eq!(
            self.characteristic(),
            other.characteristic(),
            "mixed characteristics"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: (*a as u128 * *b as u128 % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        (0..e).fold(Scalar::one(self.characteristic()), |acc, _| acc.mul(self))
    }

    /// A square root in the prime field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => {
                let n = int_sqrt(q.numer())?;
                let d = int_sqrt(q.denom())?;
                Some(Scalar::Q(BigRational::new(n, d)))
            }
            Scalar::Fp { value, p } => {
                sqrt_mod(*value, *p).map(|value| Scalar::Fp { value, p: *p })
            }
        }
    }

    /// A cube root in the prime field, if one exists.
    pub fn cbrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => {
                let n = int_cbrt(q.numer())?;
                let d = int_cbrt(q.denom())?;
                Some(Scalar::Q(BigRational::new(n, d)))
            }
            Scalar::Fp { value, p } => {
                // brute force is fine for the small primes in use; larger
                // primes with p ≡ 2 mod 3 have a closed form
                if p % 3 == 2 {
                    let e = (2 * p - 1) / 3;
                    return Some(Scalar::Fp {
                        value: pow_mod(*value, e, *p),
                        p: *p,
                    });
                }
                (0..*p)
                    .find(|x| pow_mod(*x, 3, *p) == *value)
                    .map(|value| Scalar::Fp { value, p: *p })
            }
        }
    }

    /// Integer rendering used in JSON and display: `"3/2"` or `"5"`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_string(),
            Scalar::Q(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Fp { value, .. } => value.to_string(),
        }
    }

    pub fn parse(text: &str, p: u64) -> Result<Scalar> {
        let bad = || Error::Field(format!("bad scalar {text:?}"));
        if p == 0 {
            let (n, d) = match text.split_once('/') {
                Some((n, d)) => (n, d),
                None => (text, "1"),
            };
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::Q(BigRational::new(n, d)))
        } else {
            let v: u64 = text.trim().parse().map_err(|_| bad())?;
            Ok(Scalar::Fp { value: v % p, p })
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn int_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

/// Tonelli–Shanks.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q.is_even() {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("nonresidue exists");
    let mul = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}
