//! A finite field large enough for random evaluation: 𝔽_{2³¹−1} for
//! characteristic 0, and 𝔽_{p^k} with `p^k ≥ 2¹⁶` otherwise.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::field::scalar::Scalar;

const IMAGE_PRIME: u64 = 2_147_483_647;
const MIN_ORDER: u64 = 1 << 16;

/// Elements are coefficient vectors of length `k` over 𝔽_m, lowest first.
pub(crate) type Elem = Vec<u64>;

#[derive(Debug)]
pub(crate) struct ImageField {
    m: u64,
    k: usize,
    /// Monic irreducible of degree `k`, lowest coefficient first.
    modulus: Vec<u64>,
    order: u64,
}

thread_local! {
    static CACHE: RefCell<HashMap<u64, Rc<ImageField>>> = RefCell::new(HashMap::new());
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` by a monic `f` over 𝔽_m.
fn rem_monic(a: &mut Vec<u64>, f: &[u64], m: u64) {
    trim(a);
    let df = f.len() - 1;
    while a.len() > df {
        let lead = *a.last().expect("nonempty");
        let shift = a.len() - 1 - df;
        for (i, &c) in f.iter().enumerate() {
            a[i + shift] = (a[i + shift] + m - mul_mod(lead, c, m)) % m;
        }
        trim(a);
    }
}

/// Monic polynomial number `n` of degree `d` over 𝔽_m.
fn nth_monic(n: u64, d: usize, m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut n = n;
    for _ in 0..d {
        out.push(n % m);
        n /= m;
    }
    out.push(1);
    out
}

fn is_irreducible(f: &[u64], m: u64) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for n in 0..m.pow(d as u32) {
            let mut r = f.to_vec();
            rem_monic(&mut r, &nth_monic(n, d, m), m);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

impl ImageField {
    pub(crate) fn for_characteristic(p: u64) -> Rc<ImageField> {
        CACHE.with(|c| {
            c.borrow_mut()
                .entry(p)
                .or_insert_with(|| Rc::new(ImageField::build(p)))
                .clone()
        })
    }

    fn build(p: u64) -> ImageField {
        let m = if p == 0 { IMAGE_PRIME } else { p };
        let mut k = 1;
        let mut order = m;
        while order < MIN_ORDER {
            k += 1;
            order *= m;
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..)
                .map(|n| nth_monic(n, k, m))
                .find(|f| f[0] != 0 && is_irreducible(f, m))
                .expect("irreducibles exist in every degree")
        };
        ImageField {
            m,
            k,
            modulus,
            order,
        }
    }

    pub(crate) fn zero(&self) -> Elem {
        vec![0; self.k]
    }

    pub(crate) fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// The image of a prime-field scalar, if its denominator survives.
    pub(crate) fn scalar(&self, c: &Scalar) -> Option<Elem> {
        let v = match c {
            Scalar::Fp { value, .. } => *value,
            Scalar::Q(q) => {
                let big = BigInt::from(self.m);
                let n = q.numer().mod_floor(&big).to_u64()?;
                let d = q.denom().mod_floor(&big).to_u64()?;
                if d == 0 {
                    return None;
                }
                mul_mod(n, pow_mod(d, self.m - 2, self.m), self.m)
            }
        };
        let mut out = self.zero();
        out[0] = v;
        Some(out)
    }

    /// A pseudo-random element drawn from `next`.
    pub(crate) fn random(&self, next: &mut impl FnMut() -> u64) -> Elem {
        (0..self.k).map(|_| next() % self.m).collect()
    }

    pub(crate) fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.m).collect()
    }

    pub(crate) fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.m - y) % self.m)
            .collect()
    }

    pub(crate) fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, self.m)) % self.m;
            }
        }
        rem_monic(&mut prod, &self.modulus, self.m);
        prod.resize(self.k, 0);
        prod
    }

    pub(crate) fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut r = self.zero();
        r[0] = 1;
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub(crate) fn inv(&self, a: &Elem) -> Elem {
        self.pow(a, self.order - 2)
    }

    /// Degree of the gcd of two univariate polynomials, coefficients lowest
    /// first.
    pub(crate) fn gcd_degree(&self, mut a: Vec<Elem>, mut b: Vec<Elem>) -> usize {
        let strip = |v: &mut Vec<Elem>| {
            while v.last().is_some_and(|c| self.is_zero(c)) {
                v.pop();
            }
        };
        strip(&mut a);
        strip(&mut b);
        while !b.is_empty() {
            let inv = self.inv(b.last().expect("nonempty"));
            while a.len() >= b.len() {
                let f = self.mul(a.last().expect("nonempty"), &inv);
                let shift = a.len() - b.len();
                for (i, c) in b.iter().enumerate() {
                    a[i + shift] = self.sub(&a[i + shift], &self.mul(&f, c));
                }
                strip(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_characteristic_extension() {
        for p in [2u64, 3, 5, 257] {
            let f = ImageField::for_characteristic(p);
            assert!(f.order >= MIN_ORDER);
            let mut s = 12345u64;
            let mut next = || {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                s >> 17
            };
            for _ in 0..20 {
                let a = f.random(&mut next);
                if f.is_zero(&a) {
                    continue;
                }
                let one = f.mul(&a, &f.inv(&a));
                assert_eq!(one[0], 1);
                assert!(one[1..].iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn gcd_degrees() {
        let f = ImageField::for_characteristic(7);
        let c = |v: &[u64]| {
            v.iter()
                .map(|&x| f.scalar(&Scalar::from_i64(x as i64, 7)).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(f.gcd_degree(c(&[1, 2, 1]), c(&[1, 1])), 1);
        assert_eq!(f.gcd_degree(c(&[1, 0, 1]), c(&[1, 1])), 0);
    }
}
