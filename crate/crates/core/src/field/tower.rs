//! The field of a graph: `k(b_1, ..., b_n)` with one radical per edge.
//!
//! In characteristic other than 2 the radical of edge `{i, j}` satisfies
//! `s² = b_i + b_j`; in characteristic 2 it satisfies `s³ = b_i + b_j`.
//! Elements are sums `Σ c_e · Π s_k^{e_k}` with exponents below the radical
//! degree and rational-function coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::ratfun::RatFun;
use crate::field::scalar::{check_characteristic, Scalar};
use crate::structure::{ElementId, FiniteStructure, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPresentation {
    characteristic: u64,
    /// `b_{k+1}` stands for `vertices[k]`.
    vertices: Vec<ElementId>,
    /// Edges as index pairs `i < j` into `vertices`, sorted.
    radicals: Vec<(usize, usize)>,
}

impl FieldPresentation {
    pub fn new(
        characteristic: u64,
        vertices: Vec<ElementId>,
        radicals: Vec<(usize, usize)>,
    ) -> Result<Self> {
        check_characteristic(characteristic)?;
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::Field("repeated vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for &(i, j) in &radicals {
            if i >= j || j >= vertices.len() || !seen.insert((i, j)) {
                return Err(Error::Field(format!(
                    "radical label ({i}, {j}) is not a simple edge"
                )));
            }
        }
        let mut radicals = radicals;
        radicals.sort_unstable();
        Ok(FieldPresentation {
            characteristic,
            vertices,
            radicals,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn vertices(&self) -> &[ElementId] {
        &self.vertices
    }

    pub fn radicals(&self) -> &[(usize, usize)] {
        &self.radicals
    }

    pub fn nvars(&self) -> usize {
        self.vertices.len()
    }

    /// 2 for square roots, 3 for cube roots.
    pub fn degree(&self) -> u32 {
        if self.characteristic == 2 {
            3
        } else {
            2
        }
    }

    pub fn radical_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.radicals.binary_search(&key).ok()
    }

    /// Index of `b` for a vertex id.
    pub fn vertex_index(&self, v: ElementId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    fn zero_exps(&self) -> Vec<u8> {
        vec![0; self.radicals.len()]
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.base(RatFun::one(self.nvars(), self.characteristic))
    }

    pub fn scalar(&self, n: i64) -> FieldElement {
        self.base(RatFun::constant(
            Scalar::from_i64(n, self.characteristic),
            self.nvars(),
        ))
    }

    pub fn base(&self, r: RatFun) -> FieldElement {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(self.zero_exps(), r);
        }
        FieldElement { terms }
    }

    /// `b_{i+1}`.
    pub fn b(&self, i: usize) -> FieldElement {
        self.base(RatFun::from_poly(Poly::var(
            i,
            self.nvars(),
            self.characteristic,
        )))
    }

    /// `b_i + b_j` as a base-field element.
    pub fn linear_form(&self, i: usize, j: usize) -> RatFun {
        let v = |k| Poly::var(k, self.nvars(), self.characteristic);
        RatFun::from_poly(v(i).add(&v(j)))
    }

    /// The radicand of radical `k`.
    pub fn radicand(&self, k: usize) -> RatFun {
        let (i, j) = self.radicals[k];
        self.linear_form(i, j)
    }

    /// The generator `s_k`.
    pub fn radical(&self, k: usize) -> FieldElement {
        let mut e = self.zero_exps();
        e[k] = 1;
        FieldElement {
            terms: [(e, RatFun::one(self.nvars(), self.characteristic))].into(),
        }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let mut terms = x.terms.clone();
        for (e, c) in &y.terms {
            let sum = match terms.get(e) {
                Some(old) => old.add(c),
                None => c.clone(),
            };
            if sum.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), sum);
            }
        }
        FieldElement { terms }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement {
            terms: x.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let deg = self.degree() as u8;
        let mut terms: BTreeMap<Vec<u8>, RatFun> = BTreeMap::new();
        for (e1, c1) in &x.terms {
            for (e2, c2) in &y.terms {
                let mut c = c1.mul(c2);
                let mut e = Vec::with_capacity(e1.len());
                for (k, (a, b)) in e1.iter().zip(e2).enumerate() {
                    let s = a + b;
                    if s >= deg {
                        c = c.mul(&self.radicand(k));
                        e.push(s - deg);
                    } else {
                        e.push(s);
                    }
                }
                match terms.get_mut(&e) {
                    Some(old) => *old = old.add(&c),
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        FieldElement { terms }
    }

    pub fn pow(&self, x: &FieldElement, e: u32) -> FieldElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.inv_below(x, self.radicals.len())
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// Inverse of an element using only the first `level` radicals:
    /// multiply by the conjugate cofactor, whose product with `x` lies one
    /// level down.
    fn inv_below(&self, x: &FieldElement, level: usize) -> Result<FieldElement> {
        if level == 0 {
            let c = x
                .terms
                .get(&self.zero_exps())
                .ok_or(Error::DivisionByZero)?;
            return Ok(self.base(c.inv()?));
        }
        let k = level - 1;
        if x.terms.keys().all(|e| e[k] == 0) {
            return self.inv_below(x, k);
        }
        let mut parts = vec![self.zero(); self.degree() as usize];
        for (e, c) in &x.terms {
            let mut e = e.clone();
            let d = std::mem::replace(&mut e[k], 0) as usize;
            parts[d].terms.insert(e, c.clone());
        }
        let s = self.radical(k);
        let dk = self.base(self.radicand(k));
        let cofactor = if self.degree() == 2 {
            let (u, v) = (&parts[0], &parts[1]);
            self.sub(u, &self.mul(v, &s))
        } else {
            let (u, v, w) = (&parts[0], &parts[1], &parts[2]);
            let a = self.sub(&self.mul(u, u), &self.mul(&self.mul(v, w), &dk));
            let b = self.sub(&self.mul(&self.mul(w, w), &dk), &self.mul(u, v));
            let c = self.sub(&self.mul(v, v), &self.mul(u, w));
            self.add(
                &a,
                &self.add(&self.mul(&b, &s), &self.mul(&c, &self.mul(&s, &s))),
            )
        };
        let norm = self.mul(x, &cofactor);
        if norm.terms.keys().any(|e| e[k] != 0) {
            return Err(Error::Field("norm left the subfield".into()));
        }
        Ok(self.mul(&cofactor, &self.inv_below(&norm, k)?))
    }

    /// JSON form: radical products as sorted edge lists (vertex ids), and
    /// numerator and denominator as lists of `[exponents, coefficient]`.
    pub fn element_to_json(&self, x: &FieldElement) -> Value {
        let poly = |p: &Poly| -> Value {
            Value::Array(p.terms().map(|(e, c)| json!([e, c.render()])).collect())
        };
        let terms: Vec<Value> = x
            .terms
            .iter()
            .map(|(e, c)| {
                let rads: Vec<Value> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(k, &pow)| {
                        let (i, j) = self.radicals[k];
                        json!({"edge": [self.vertices[i], self.vertices[j]], "power": pow})
                    })
                    .collect();
                json!({"radicals": rads, "num": poly(c.num()), "den": poly(c.den())})
            })
            .collect();
        Value::Array(terms)
    }

    /// Multi-line rendering with `b<vertex>` and `s<v>_<w>` names.
    pub fn describe(&self) -> String {
        let mut out = format!("characteristic {}\n", self.characteristic);
        for (k, v) in self.vertices.iter().enumerate() {
            out += &format!("b{} = vertex {v}\n", k + 1);
        }
        let power = if self.degree() == 2 { "^2" } else { "^3" };
        for &(i, j) in &self.radicals {
            out += &format!(
                "s{}_{}{power} = b{} + b{}\n",
                self.vertices[i],
                self.vertices[j],
                i + 1,
                j + 1
            );
        }
        out
    }
}

/// `Σ c_e · Π s_k^{e_k}`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    terms: BTreeMap<Vec<u8>, RatFun>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the empty radical product, if that is the only one.
    pub fn as_base(&self) -> Option<RatFun> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &RatFun)> {
        self.terms.iter().map(|(e, c)| (&e[..], c))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let rads: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(k, &p)| {
                        if p == 1 {
                            format!("s{}", k + 1)
                        } else {
                            format!("s{}^{p}", k + 1)
                        }
                    })
                    .collect();
                if rads.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", rads.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// One generator per vertex, in increasing vertex order, and one radical per
/// edge.
pub fn build_field(g: &FiniteStructure, characteristic: u64) -> Result<FieldPresentation> {
    Signature::graph().ensure_same(g.signature())?;
    if !g.is_undirected_graph() {
        return Err(Error::Structure(
            "expected a simple undirected graph".into(),
        ));
    }
    let vertices: Vec<ElementId> = g.universe().iter().copied().collect();
    let index: BTreeMap<ElementId, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let radicals = g
        .edges()
        .into_iter()
        .map(|(a, b)| (index[&a], index[&b]))
        .collect();
    FieldPresentation::new(characteristic, vertices, radicals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge_field(p: u64) -> FieldPresentation {
        build_field(&FiniteStructure::graph([1, 2], [(1, 2)]).unwrap(), p).unwrap()
    }

    #[test]
    fn presentations() {
        let g = FiniteStructure::graph([1, 2], []).unwrap();
        let f = build_field(&g, 0).unwrap();
        assert_eq!(f.nvars(), 2);
        assert!(f.radicals().is_empty());
        assert_eq!(edge_field(0).radicals(), &[(0, 1)]);
        assert_eq!(edge_field(2).degree(), 3);
        assert!(FieldPresentation::new(0, vec![1, 2], vec![(1, 1)]).is_err());
        assert!(FieldPresentation::new(6, vec![1], vec![]).is_err());
    }

    #[test]
    fn defining_relations() {
        for p in [0, 3, 2] {
            let f = edge_field(p);
            let s = f.radical(0);
            let d = f.add(&f.b(0), &f.b(1));
            assert_eq!(f.pow(&s, f.degree()), d, "char {p}");
        }
    }

    #[test]
    fn identities() {
        let f = edge_field(0);
        let x = f.add(&f.b(0), &f.radical(0));
        assert_eq!(f.add(&x, &f.zero()), x);
        let inv_b = f.inv(&f.b(0)).unwrap();
        assert_eq!(inv_b.to_string(), "((1) / (b1))");
        assert_eq!(f.mul(&f.b(0), &inv_b), f.one());
        assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
    }

    fn path4(p: u64) -> FieldPresentation {
        let g = FiniteStructure::graph(0..4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        build_field(&g, p).unwrap()
    }

    /// Random elements: small integer combinations of products of generators.
    fn element(f: &FieldPresentation, spec: &[(i64, usize, usize)]) -> FieldElement {
        spec.iter().fold(f.zero(), |acc, &(c, bi, rk)| {
            let t = f.mul(
                &f.mul(&f.scalar(c), &f.b(bi % f.nvars())),
                &f.radical(rk % f.radicals().len()),
            );
            f.add(&acc, &f.add(&t, &f.scalar(c)))
        })
    }

    fn spec() -> impl Strategy<Value = Vec<(i64, usize, usize)>> {
        proptest::collection::vec((-3i64..4, 0usize..4, 0usize..3), 1..3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn field_axioms(a in spec(), b in spec(), c in spec(), p in prop::sample::select(vec![0u64, 2, 5])) {
            let f = path4(p);
            let (x, y, z) = (element(&f, &a), element(&f, &b), element(&f, &c));
            prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
            prop_assert_eq!(f.mul(&x, &f.add(&y, &z)), f.add(&f.mul(&x, &y), &f.mul(&x, &z)));
            prop_assert_eq!(f.mul(&x, &y), f.mul(&y, &x));
            if !x.is_zero() {
                let xi = f.inv(&x).unwrap();
                prop_assert_eq!(f.mul(&x, &xi), f.one());
            }
        }
    }
}
