//! Exact rationals and the fixed enumeration of ℚ.
//!
//! The enumeration lists rationals by height `max(|p|, q)` and, within a
//! height, by value.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Rational> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Rational {
        Rational(Ratio::from_integer(n))
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn height(&self) -> u64 {
        self.num().unsigned_abs().max(self.den() as u64)
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn midpoint(&self, other: &Rational) -> Rational {
        Rational((self.0 + other.0) / 2)
    }

    pub fn add_int(&self, n: i64) -> Rational {
        Rational(self.0 + n)
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.num(), self.den()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [n, q] = <[i64; 2]>::deserialize(d)?;
        Rational::new(n, q).map_err(serde::de::Error::custom)
    }
}

/// One side of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: Rational,
    pub inclusive: bool,
}

impl Bound {
    pub fn open(value: Rational) -> Bound {
        Bound {
            value,
            inclusive: false,
        }
    }

    pub fn closed(value: Rational) -> Bound {
        Bound {
            value,
            inclusive: true,
        }
    }
}

/// Integers `z` with `z·scale` strictly above (or at, if inclusive) `lo`.
fn least_multiple_above(lo: Option<Bound>, scale: i64) -> Option<i64> {
    lo.map(|b| {
        let t = b.value.ratio() * scale;
        let f = t.floor().to_integer();
        if b.inclusive && t.is_integer() {
            f
        } else {
            f + 1
        }
    })
}

fn greatest_multiple_below(hi: Option<Bound>, scale: i64) -> Option<i64> {
    hi.map(|b| {
        let t = b.value.ratio() * scale;
        let c = t.ceil().to_integer();
        if b.inclusive && t.is_integer() {
            c
        } else {
            c - 1
        }
    })
}

/// Denominators `q` in `1..h` with `h/q` strictly between (or at, if
/// inclusive) the bounds, which must be read on the positive half-line.
fn positive_q_range(h: i64, lo: Option<Bound>, hi: Option<Bound>) -> (i64, i64) {
    let h_over = |b: &Bound| Ratio::from_integer(h) / b.value.0;
    if let Some(b) = hi {
        if b.value.0 <= Ratio::from_integer(0) {
            return (1, 0);
        }
    }
    let qmin = hi.map_or(1, |b| {
        let t = h_over(&b);
        if b.inclusive {
            t.ceil().to_integer()
        } else {
            t.floor().to_integer() + 1
        }
    });
    let qmax = match lo {
        Some(b) if b.value.0 > Ratio::from_integer(0) => {
            let t = h_over(&b);
            if b.inclusive {
                t.floor().to_integer()
            } else {
                t.ceil().to_integer() - 1
            }
        }
        _ => h - 1,
    };
    (qmin.max(1), qmax.min(h - 1))
}

fn negate(b: Option<Bound>) -> Option<Bound> {
    b.map(|b| Bound {
        value: Rational(-b.value.0),
        inclusive: b.inclusive,
    })
}

/// Calls `visit` on the rationals of height exactly `h` between the bounds,
/// ascending, until it returns `false`.
pub fn visit_height(
    h: u64,
    lo: Option<Bound>,
    hi: Option<Bound>,
    mut visit: impl FnMut(Rational) -> bool,
) {
    let h = h as i64;
    if h < 1 {
        return;
    }
    // -h/q: h/q lies between -hi and -lo; ascending values mean ascending q
    let (a, b) = positive_q_range(h, negate(hi), negate(lo));
    for q in a..=b {
        if q.gcd(&h) == 1 && !visit(Rational(Ratio::new_raw(-h, q))) {
            return;
        }
    }
    // denominator h, |numerator| <= h
    let pmin = least_multiple_above(lo, h).map_or(-h, |p| p.max(-h));
    let pmax = greatest_multiple_below(hi, h).map_or(h, |p| p.min(h));
    for p in pmin..=pmax {
        if p.gcd(&h) == 1 && !visit(Rational(Ratio::new_raw(p, h))) {
            return;
        }
    }
    // h/q for q < h: ascending values mean descending q
    let (a, b) = positive_q_range(h, lo, hi);
    for q in (a..=b).rev() {
        if q.gcd(&h) == 1 && !visit(Rational(Ratio::new_raw(h, q))) {
            return;
        }
    }
}

/// Rationals of height exactly `h` between the bounds, ascending.
pub fn height_slice(h: u64, lo: Option<Bound>, hi: Option<Bound>) -> Vec<Rational> {
    let mut out = Vec::new();
    visit_height(h, lo, hi, |x| {
        out.push(x);
        true
    });
    out
}

/// All rationals of height `h`, ascending.
pub fn rationals_of_height(h: u64) -> Vec<Rational> {
    height_slice(h, None, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn contains(lo: Option<Bound>, hi: Option<Bound>, x: Ratio<i64>) -> bool {
        let above = lo.map_or(true, |b| {
            if b.inclusive {
                x >= b.value.0
            } else {
                x > b.value.0
            }
        });
        let below = hi.map_or(true, |b| {
            if b.inclusive {
                x <= b.value.0
            } else {
                x < b.value.0
            }
        });
        above && below
    }

    #[test]
    fn small_heights() {
        assert_eq!(rationals_of_height(1), vec![r(-1, 1), r(0, 1), r(1, 1)]);
        assert_eq!(
            rationals_of_height(2),
            vec![r(-2, 1), r(-1, 2), r(1, 2), r(2, 1)]
        );
        assert_eq!(rationals_of_height(3).len(), 8);
    }

    #[test]
    fn slices_agree_with_filtering() {
        let bounds = [
            (Some(Bound::open(r(0, 1))), Some(Bound::open(r(1, 1)))),
            (Some(Bound::closed(r(2, 1))), Some(Bound::open(r(3, 1)))),
            (Some(Bound::open(r(-7, 3))), Some(Bound::closed(r(5, 2)))),
            (None, Some(Bound::open(r(-1, 2)))),
        ];
        for h in 1..40 {
            for (lo, hi) in bounds {
                let all: Vec<Rational> = rationals_of_height(h)
                    .into_iter()
                    .filter(|x| contains(lo, hi, x.ratio()))
                    .collect();
                assert_eq!(height_slice(h, lo, hi), all, "h={h}");
            }
        }
    }

    #[test]
    fn heights() {
        assert_eq!(r(-3, 7).height(), 7);
        assert_eq!(r(9, 4).height(), 9);
        assert_eq!(r(0, 5).height(), 1);
    }

    #[test]
    fn json() {
        assert_eq!(serde_json::to_string(&r(-3, 6)).unwrap(), "[-1,2]");
        assert!(serde_json::from_str::<Rational>("[1,0]").is_err());
    }
}
