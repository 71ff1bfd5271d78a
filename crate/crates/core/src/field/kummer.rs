//! Root membership for radicands built from the linear forms `b_i + b_j`.
//!
//! For `d = c · Π (b_i + b_j)^{n_ij}` with `c` a prime-field constant, `d`
//! has a square root (cube root in characteristic 2) in the field of a graph
//! exactly when `c` has one in the prime field and every `n_ij` that is not a
//! multiple of the radical degree sits on an edge. The forms are pairwise
//! non-associate irreducibles, so the exponent vector is unique.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::ratfun::RatFun;
use crate::field::scalar::Scalar;
use crate::field::tower::{FieldElement, FieldPresentation};
use crate::structure::FiniteStructure;

/// The class of a radicand modulo `degree`-th powers of the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicandClass {
    /// Exponents of `b_i + b_j` reduced modulo the degree, nonzero only.
    pub forms: BTreeMap<(usize, usize), u32>,
    /// Whether the constant factor is a `degree`-th power in the prime field.
    pub constant_is_power: bool,
}

/// Exponent of each linear form `b_i + b_j`, keyed by `(i, j)`.
pub type Exponents = BTreeMap<(usize, usize), i64>;

/// Splits `d` into a constant and exponents of the linear forms; errors if
/// anything else is left.
pub fn factor_radicand(f: &FieldPresentation, d: &RatFun) -> Result<(Scalar, Exponents)> {
    if d.is_zero() {
        return Err(Error::Shape("zero radicand".into()));
    }
    let mut exps = BTreeMap::new();
    let mut strip = |p: &Poly, sign: i64| -> Result<Scalar> {
        let mut rest = p.clone();
        for i in 0..f.nvars() {
            for j in i + 1..f.nvars() {
                let l = f.linear_form(i, j);
                let l = l.num();
                while let Some(q) = rest.exact_div(l) {
                    rest = q;
                    *exps.entry((i, j)).or_insert(0) += sign;
                }
            }
        }
        rest.as_constant()
            .ok_or_else(|| Error::Shape(format!("{rest} is not a product of forms b_i + b_j")))
    };
    let num = strip(d.num(), 1)?;
    let den = strip(d.den(), -1)?;
    exps.retain(|_, e| *e != 0);
    Ok((num.div(&den)?, exps))
}

pub fn radicand_class(f: &FieldPresentation, d: &RatFun) -> Result<RadicandClass> {
    let (c, exps) = factor_radicand(f, d)?;
    let m = f.degree() as i64;
    let forms = exps
        .into_iter()
        .filter_map(|(k, e)| {
            let r = e.rem_euclid(m) as u32;
            (r != 0).then_some((k, r))
        })
        .collect();
    let constant_is_power = if m == 2 {
        c.sqrt().is_some()
    } else {
        c.cbrt().is_some()
    };
    Ok(RadicandClass {
        forms,
        constant_is_power,
    })
}

/// Whether `d` has a square root (cube root in characteristic 2) in `f`.
pub fn has_root(f: &FieldPresentation, d: &RatFun) -> Result<bool> {
    let class = radicand_class(f, d)?;
    Ok(class.constant_is_power
        && class
            .forms
            .keys()
            .all(|&(i, j)| f.radical_index(i, j).is_some()))
}

/// An explicit root when one exists.
pub fn find_root(f: &FieldPresentation, d: &RatFun) -> Result<Option<FieldElement>> {
    if !has_root(f, d)? {
        return Ok(None);
    }
    let (c, exps) = factor_radicand(f, d)?;
    let m = f.degree() as i64;
    let c_root = if m == 2 { c.sqrt() } else { c.cbrt() }.expect("checked by has_root");
    let mut root = f.base(RatFun::constant(c_root, f.nvars()));
    for ((i, j), e) in exps {
        let l = f.base(f.linear_form(i, j));
        let (q, r) = (e.div_euclid(m), e.rem_euclid(m));
        let whole = if q >= 0 {
            f.pow(&l, q as u32)
        } else {
            f.inv(&f.pow(&l, (-q) as u32))?
        };
        root = f.mul(&root, &whole);
        if r > 0 {
            let s = f.radical(f.radical_index(i, j).expect("checked by has_root"));
            root = f.mul(&root, &f.pow(&s, r as u32));
        }
    }
    Ok(Some(root))
}

/// The graph read back from a presentation: an edge wherever `b_i + b_j` has
/// a root.
pub fn decode_field(f: &FieldPresentation) -> Result<FiniteStructure> {
    let mut g = FiniteStructure::graph(f.vertices().iter().copied(), [])?;
    for i in 0..f.nvars() {
        for j in i + 1..f.nvars() {
            if has_root(f, &f.linear_form(i, j))? {
                g.add_edge(f.vertices()[i], f.vertices()[j])?;
            }
        }
    }
    Ok(g)
}
