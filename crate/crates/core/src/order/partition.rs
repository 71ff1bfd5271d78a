//! A fixed partition of ℚ into countably many dense classes `Q_0, Q_1, ...`.
//!
//! Each unit cell `[c, c+1)` is handled on its own. Inside a cell the
//! rationals are taken in enumeration order and each one is handed to the
//! most urgent open obligation that it can discharge. An obligation `(a, s, k)`
//! asks for one rational of class `a` in the dyadic interval
//! `[c + k/2^s, c + (k+1)/2^s)`, and obligations are ranked by `(a + s, s, k)`.
//! Every rational sits in infinitely many open obligations, so it always gets a
//! class, and an obligation is outranked by only finitely many others, so it is
//! eventually discharged. Hence every class meets every open interval.
//!
//! The tables are computed lazily, only grow, and are shared by all threads.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::order::rational::{height_slice, rationals_of_height, visit_height, Bound, Rational};

pub type ClassId = u64;

/// Default cap on rationals examined by [`dense_pick`].
pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Slot {
    Small(u64),
    Big(BigUint),
}

#[derive(Default)]
struct Cell {
    done: u64,
    classes: HashMap<Rational, ClassId>,
    met: HashSet<(ClassId, u32, Slot)>,
}

impl Cell {
    fn slot(offset: &Rational, s: u32) -> Slot {
        // offset = p/q in [0, 1)
        let (p, q) = (offset.num() as u128, offset.den() as u128);
        if s <= 62 {
            Slot::Small(((p << s) / q) as u64)
        } else {
            Slot::Big((BigUint::from(p) << s) / BigUint::from(q))
        }
    }

    fn assign(&mut self, x: Rational, c: i64) {
        let offset = x.add_int(-c);
        let mut t: u64 = 0;
        loop {
            for s in 0..=t.min(u32::MAX as u64) as u32 {
                let a = t - s as u64;
                let key = (a, s, Cell::slot(&offset, s));
                if !self.met.contains(&key) {
                    self.met.insert(key);
                    self.classes.insert(x, a);
                    return;
                }
            }
            t += 1;
        }
    }

    fn extend(&mut self, c: i64, height: u64) {
        let lo = Some(Bound::closed(Rational::integer(c)));
        let hi = Some(Bound::open(Rational::integer(c + 1)));
        for h in self.done + 1..=height {
            for x in height_slice(h, lo, hi) {
                self.assign(x, c);
            }
        }
        self.done = self.done.max(height);
    }
}

fn cells() -> &'static RwLock<HashMap<i64, Cell>> {
    static CELLS: OnceLock<RwLock<HashMap<i64, Cell>>> = OnceLock::new();
    CELLS.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The class of `x`. Cost grows with the square of the height of `x`.
pub fn class_of(x: Rational) -> ClassId {
    let c = x.floor();
    {
        let read = cells().read().expect("partition lock");
        if let Some(cell) = read.get(&c) {
            if let Some(&a) = cell.classes.get(&x) {
                return a;
            }
        }
    }
    let mut write = cells().write().expect("partition lock");
    let cell = write.entry(c).or_default();
    cell.extend(c, x.height());
    cell.classes[&x]
}

/// The first rational of class `a` in the enumeration of ℚ.
pub fn first_in_class(a: ClassId) -> Rational {
    static FIRST: OnceLock<Mutex<HashMap<ClassId, Rational>>> = OnceLock::new();
    let memo = FIRST.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&x) = memo.lock().expect("memo lock").get(&a) {
        return x;
    }
    let x = (1..)
        .flat_map(rationals_of_height)
        .find(|&x| class_of(x) == a)
        .expect("every class is nonempty");
    memo.lock().expect("memo lock").insert(a, x);
    x
}

/// The first rational of class `a` strictly inside `(lo, hi)`, in enumeration
/// order. Either side may be unbounded.
pub fn dense_pick(a: ClassId, lo: Option<Rational>, hi: Option<Rational>) -> Result<Rational> {
    dense_pick_within(a, lo, hi, DEFAULT_STEP_CAP)
}

pub fn dense_pick_within(
    a: ClassId,
    lo: Option<Rational>,
    hi: Option<Rational>,
    step_cap: u64,
) -> Result<Rational> {
    if let (Some(l), Some(h)) = (lo, hi) {
        if l >= h {
            return Err(Error::Extension(format!("empty interval ({l}, {h})")));
        }
    }
    let (lo, hi) = (lo.map(Bound::open), hi.map(Bound::open));
    let mut steps = 0u64;
    for h in 1.. {
        let mut found = None;
        visit_height(h, lo, hi, |x| {
            steps += 1;
            if steps > step_cap {
                return false;
            }
            if class_of(x) == a {
                found = Some(x);
                return false;
            }
            true
        });
        if let Some(x) = found {
            return Ok(x);
        }
        if steps > step_cap || (steps == 0 && h > step_cap) {
            return Err(Error::StepCap(step_cap));
        }
    }
    unreachable!()
}
