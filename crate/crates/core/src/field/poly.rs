//! Sparse multivariate polynomials over a prime field.
//!
//! Monomials are exponent vectors of a fixed length; they are ordered
//! lexicographically with the highest-index variable most significant.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::field::image::{Elem, ImageField};
use crate::field::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    p: u64,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize, p: u64) -> Poly {
        Poly {
            nvars,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Poly {
        let p = c.characteristic();
        let mut out = Poly::zero(nvars, p);
        if !c.is_zero() {
            out.terms.insert(Monomial(vec![0; nvars]), c);
        }
        out
    }

    pub fn one(nvars: usize, p: u64) -> Poly {
        Poly::constant(Scalar::one(p), nvars)
    }

    /// The variable `b_{i+1}` (index `i`, zero-based).
    pub fn var(i: usize, nvars: usize, p: u64) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly {
            nvars,
            p,
            terms: [(Monomial(e), Scalar::one(p))].into(),
        }
    }

    pub fn from_terms(
        nvars: usize,
        p: u64,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Poly {
        let mut out = Poly::zero(nvars, p);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            out.add_term(Monomial(e), c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        let sum = match self.terms.get(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Scalar)> {
        self.terms.iter().map(|(m, c)| (&m.0[..], c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e == 0))
    }

    /// The constant coefficient of a constant polynomial.
    pub fn as_constant(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(|| Scalar::zero(self.p)),
        )
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Leading scalar coefficient, or 0.
    pub fn leading_scalar(&self) -> Scalar {
        self.leading()
            .map_or_else(|| Scalar::zero(self.p), |(_, c)| c.clone())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.p);
        }
        Poly {
            nvars: self.nvars,
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars, self.p);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.nvars, self.p), |acc, _| acc.mul(self))
    }

    /// Divides by the leading scalar coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let dinv = dc.inv().expect("nonzero");
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars, self.p);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let m = rm.div(dm);
            let c = rc.mul(&dinv);
            let t = Poly {
                nvars: self.nvars,
                p: self.p,
                terms: [(m.clone(), c.clone())].into(),
            };
            rem = rem.sub(&t.mul(d));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Highest variable index with a positive exponent.
    fn main_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.0.iter().rposition(|&e| e > 0))
            .max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Coefficients as a polynomial in variable `v`, lowest degree first.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.nvars, self.p); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let d = std::mem::replace(&mut e[v], 0);
            out[d as usize].add_term(Monomial(e), c.clone());
        }
        out
    }

    fn from_coeffs(v: usize, cs: &[Poly], nvars: usize, p: u64) -> Poly {
        let mut out = Poly::zero(nvars, p);
        for (d, c) in cs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut e = m.0.clone();
                e[v] += d as u32;
                out.add_term(Monomial(e), x.clone());
            }
        }
        out
    }

    /// Greatest common divisor, monic.
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd(self, other).monic()
    }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let v = match (a.main_var(), b.main_var()) {
        (None, _) | (_, None) => return Poly::one(a.nvars, a.p),
        (Some(x), Some(y)) => x.max(y),
    };
    if certainly_coprime(a, b) {
        return Poly::one(a.nvars, a.p);
    }
    if a.exact_div(b).is_some() {
        return b.monic();
    }
    if b.exact_div(a).is_some() {
        return a.monic();
    }
    let (ca, pa) = content_split(a, v);
    let (cb, pb) = content_split(b, v);
    let c = gcd(&ca, &cb);
    // primitive pseudo-remainder sequence in v
    let (mut x, mut y) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !y.is_zero() && y.degree_in(v) > 0 {
        let r = pseudo_rem(&x, &y, v);
        x = y;
        y = if r.is_zero() {
            r
        } else {
            content_split(&r, v).1
        };
    }
    let g = if y.is_zero() {
        x
    } else {
        Poly::one(a.nvars, a.p)
    };
    c.mul(&g).monic()
}

/// `a` with every variable but `v` replaced by `point`, as coefficients
/// lowest degree first.
fn univariate_image(f: &ImageField, a: &Poly, v: usize, point: &[Elem]) -> Option<Vec<Elem>> {
    let mut out = vec![f.zero(); a.degree_in(v) as usize + 1];
    for (mono, c) in &a.terms {
        let mut t = f.scalar(c)?;
        for (w, &e) in mono.0.iter().enumerate() {
            if w != v && e > 0 {
                t = f.mul(&t, &f.pow(&point[w], e as u64));
            }
        }
        let d = mono.0[v] as usize;
        out[d] = f.add(&out[d], &t);
    }
    Some(out)
}

/// True only when `gcd(a, b)` is certainly constant. For each variable `v`
/// that both involve, substitutes values for the others; as long as the
/// leading coefficient of `a` in `v` survives, the image of the gcd divides
/// the gcd of the images and keeps its degree in `v`, so a constant image
/// gcd rules out any common factor involving `v`.
fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    let f = ImageField::for_characteristic(a.p);
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for v in 0..a.nvars {
        let da = a.degree_in(v) as usize;
        if da == 0 || b.degree_in(v) == 0 {
            continue;
        }
        let mut settled = false;
        for _ in 0..4 {
            let point: Vec<Elem> = (0..a.nvars).map(|_| f.random(&mut next)).collect();
            let (Some(ia), Some(ib)) = (
                univariate_image(&f, a, v, &point),
                univariate_image(&f, b, v, &point),
            ) else {
                continue;
            };
            if f.is_zero(&ia[da]) {
                continue;
            }
            if f.gcd_degree(ia, ib) > 0 {
                return false;
            }
            settled = true;
            break;
        }
        if !settled {
            return false;
        }
    }
    true
}

/// Content in variable `v` (a polynomial in the other variables) and the
/// primitive part.
fn content_split(a: &Poly, v: usize) -> (Poly, Poly) {
    let cs = a.coeffs_in(v);
    let mut c = Poly::zero(a.nvars, a.p);
    for x in &cs {
        if !x.is_zero() {
            c = gcd(&c, x);
            if c.is_constant() {
                break;
            }
        }
    }
    let c = c.monic();
    let prim: Vec<Poly> = cs
        .iter()
        .map(|x| x.exact_div(&c).expect("content divides"))
        .collect();
    (c, Poly::from_coeffs(v, &prim, a.nvars, a.p))
}

fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.clone();
    loop {
        let rc = r.coeffs_in(v);
        let dr = rc.len() - 1;
        if r.is_zero() || dr < db {
            return r;
        }
        let lr = rc[dr].clone();
        let mut shift = vec![0; a.nvars];
        shift[v] = (dr - db) as u32;
        let xs = Poly {
            nvars: a.nvars,
            p: a.p,
            terms: [(Monomial(shift), Scalar::one(a.p))].into(),
        };
        r = r.mul(&lb).sub(&lr.mul(&xs).mul(b));
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("b{}", i + 1)
                        } else {
                            format!("b{}^{e}", i + 1)
                        }
                    })
                    .collect();
            let coef = c.render();
            let (sign, mag) = match coef.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coef),
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (vars.is_empty(), mag.as_str()) {
                (true, _) => f.write_str(&mag)?,
                (false, "1") => f.write_str(&vars.join("*"))?,
                (false, _) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(i: usize) -> Poly {
        Poly::var(i, 3, 0)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(Scalar::from_i64(n, 0), 3)
    }

    #[test]
    fn multiplication_and_division() {
        let x = b(0).add(&b(1));
        let y = b(1).add(&b(2));
        let xy = x.mul(&y);
        assert_eq!(xy.exact_div(&x), Some(y.clone()));
        assert_eq!(xy.exact_div(&b(0)), None);
        assert_eq!(x.to_string(), "b2 + b1");
    }

    #[test]
    fn gcd_examples() {
        let x = b(0).add(&b(1));
        let y = b(1).add(&b(2));
        let z = b(0).sub(&c(3));
        assert_eq!(x.mul(&y).gcd(&x.mul(&z)), x.monic());
        assert!(x.gcd(&y).as_constant().unwrap().is_one());
        assert_eq!(
            x.pow(2).mul(&y).gcd(&x.mul(&y).pow(2)),
            x.pow(2).mul(&y).monic()
        );
        assert_eq!(Poly::zero(3, 0).gcd(&z.scale(&Scalar::from_i64(5, 0))), z);
    }

    #[test]
    fn gcd_mod_p() {
        let v = |i| Poly::var(i, 2, 3);
        let x = v(0).add(&v(1));
        let y = v(0).sub(&v(1));
        assert_eq!(x.mul(&y).gcd(&x.pow(2)), x.monic());
    }

    #[test]
    fn coprimality_shortcut() {
        let x = b(0).add(&b(1));
        let y = b(1).add(&b(2));
        assert!(certainly_coprime(&x, &y));
        assert!(!certainly_coprime(&x.mul(&y), &x.mul(&b(2))));
        let v = |i| Poly::var(i, 2, 2);
        let w = v(0).add(&v(1));
        assert!(!certainly_coprime(&w.pow(2), &w.mul(&v(0))));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -3i64..4), 0..4).prop_map(
            |ts| {
                Poly::from_terms(
                    3,
                    0,
                    ts.into_iter().map(|(e, c)| (e, Scalar::from_i64(c, 0))),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly(), m in arb_poly()) {
            let (am, bm) = (a.mul(&m), b.mul(&m));
            let g = am.gcd(&bm);
            if !g.is_zero() {
                prop_assert!(am.exact_div(&g).is_some());
                prop_assert!(bm.exact_div(&g).is_some());
                if !m.is_zero() {
                    prop_assert!(g.exact_div(&m.monic()).is_some());
                }
            }
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
