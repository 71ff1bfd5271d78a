//! Finite relational structures and their atomic diagrams.
//!
//! Function symbols are carried as graphs: an n-ary function is an
//! (n+1)-ary relation flagged `functional`, and [`FiniteStructure::validate`]
//! checks that such relations are total and single-valued.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ElementId = u64;

/// Name reserved for equality facts in atomic diagrams. `(=, [a, a])` asserts
/// that `a` belongs to the universe.
pub const EQUALITY: &str = "=";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    #[serde(default)]
    pub functional: bool,
}

impl Symbol {
    pub fn relation(name: &str, arity: usize) -> Symbol {
        Symbol {
            name: name.to_string(),
            arity,
            functional: false,
        }
    }

    pub fn function_graph(name: &str, arity: usize) -> Symbol {
        Symbol {
            name: name.to_string(),
            arity,
            functional: true,
        }
    }
}

/// An ordered list of relation symbols with distinct names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Symbol>", into = "Vec<Symbol>")]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl TryFrom<Vec<Symbol>> for Signature {
    type Error = Error;

    fn try_from(symbols: Vec<Symbol>) -> Result<Self> {
        Signature::new(symbols)
    }
}

impl From<Signature> for Vec<Symbol> {
    fn from(s: Signature) -> Self {
        s.symbols
    }
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Signature> {
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.arity == 0 {
                return Err(Error::Signature(format!("symbol {} has arity 0", s.name)));
            }
            if s.name == EQUALITY {
                return Err(Error::Signature("'=' is reserved".into()));
            }
            if s.functional && s.arity < 2 {
                return Err(Error::Signature(format!(
                    "function graph {} needs arity >= 2",
                    s.name
                )));
            }
            if !seen.insert(s.name.clone()) {
                return Err(Error::Signature(format!("duplicate symbol {}", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    /// `{E/2}`: undirected graphs, stored symmetric and irreflexive.
    pub fn graph() -> Signature {
        Signature {
            symbols: vec![Symbol::relation("E", 2)],
        }
    }

    /// A single binary relation named `name`.
    pub fn binary(name: &str) -> Signature {
        Signature {
            symbols: vec![Symbol::relation(name, 2)],
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub(crate) fn ensure_same(&self, other: &Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.describe(),
                right: other.describe(),
            })
        }
    }
}

/// A finite structure whose universe is a set of naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    signature: Signature,
    universe: BTreeSet<ElementId>,
    relations: Vec<BTreeSet<Vec<ElementId>>>,
}

impl FiniteStructure {
    pub fn new(signature: Signature, universe: impl IntoIterator<Item = ElementId>) -> Self {
        let relations = vec![BTreeSet::new(); signature.len()];
        FiniteStructure {
            signature,
            universe: universe.into_iter().collect(),
            relations,
        }
    }

    /// An undirected graph on `vertices`; each edge is stored in both directions.
    pub fn graph(
        vertices: impl IntoIterator<Item = ElementId>,
        edges: impl IntoIterator<Item = (ElementId, ElementId)>,
    ) -> Result<Self> {
        let mut g = FiniteStructure::new(Signature::graph(), vertices);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &BTreeSet<ElementId> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.universe.contains(&x)
    }

    /// Tuples of the relation at position `symbol` in the signature.
    pub fn relation(&self, symbol: usize) -> &BTreeSet<Vec<ElementId>> {
        &self.relations[symbol]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&BTreeSet<Vec<ElementId>>> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn holds(&self, symbol: usize, tuple: &[ElementId]) -> bool {
        self.relations[symbol].contains(tuple)
    }

    pub fn add_element(&mut self, x: ElementId) {
        self.universe.insert(x);
    }

    pub fn insert(&mut self, name: &str, tuple: Vec<ElementId>) -> Result<()> {
        let idx = self
            .signature
            .index_of(name)
            .ok_or_else(|| Error::Structure(format!("unknown symbol {name}")))?;
        self.insert_at(idx, tuple)
    }

    pub fn insert_at(&mut self, symbol: usize, tuple: Vec<ElementId>) -> Result<()> {
        let sym = &self.signature.symbols[symbol];
        if tuple.len() != sym.arity {
            return Err(Error::Structure(format!(
                "{} expects arity {}, got {:?}",
                sym.name, sym.arity, tuple
            )));
        }
        if let Some(x) = tuple.iter().find(|x| !self.universe.contains(x)) {
            return Err(Error::Structure(format!(
                "{}{:?} mentions {} outside the universe",
                sym.name, tuple, x
            )));
        }
        self.relations[symbol].insert(tuple);
        Ok(())
    }

    /// Adds `{a, b}` to the relation `E`, both orientations.
    pub fn add_edge(&mut self, a: ElementId, b: ElementId) -> Result<()> {
        if a == b {
            return Err(Error::Structure(format!("loop at {a}")));
        }
        self.insert("E", vec![a, b])?;
        self.insert("E", vec![b, a])
    }

    pub fn is_undirected_graph(&self) -> bool {
        let Some(e) = self.signature.index_of("E") else {
            return false;
        };
        self.signature.len() == 1
            && self.signature.symbols[e].arity == 2
            && self.relations[e]
                .iter()
                .all(|t| t[0] != t[1] && self.relations[e].contains(&vec![t[1], t[0]]))
    }

    /// Neighbours of `x` under `E`, ascending.
    pub fn neighbours(&self, x: ElementId) -> Vec<ElementId> {
        let Some(e) = self.signature.index_of("E") else {
            return Vec::new();
        };
        self.relations[e]
            .range(vec![x]..vec![x + 1])
            .map(|t| t[1])
            .collect()
    }

    /// Unordered edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(ElementId, ElementId)> {
        let Some(e) = self.signature.index_of("E") else {
            return Vec::new();
        };
        self.relations[e]
            .iter()
            .filter(|t| t[0] < t[1])
            .map(|t| (t[0], t[1]))
            .collect()
    }

    pub fn has_edge(&self, a: ElementId, b: ElementId) -> bool {
        self.relation_by_name("E")
            .is_some_and(|r| r.contains(&vec![a, b]))
    }

    /// Checks tuple ranges and, for functional symbols, totality and
    /// single-valuedness.
    pub fn validate(&self) -> Result<()> {
        for (sym, rel) in self.signature.symbols.iter().zip(&self.relations) {
            for t in rel {
                if t.len() != sym.arity || t.iter().any(|x| !self.universe.contains(x)) {
                    return Err(Error::Structure(format!("bad tuple {}{:?}", sym.name, t)));
                }
            }
            if sym.functional {
                let mut outputs: BTreeMap<&[ElementId], usize> = BTreeMap::new();
                for t in rel {
                    *outputs.entry(&t[..sym.arity - 1]).or_default() += 1;
                }
                if outputs.values().any(|&c| c > 1) {
                    return Err(Error::Structure(format!(
                        "{} is not single-valued",
                        sym.name
                    )));
                }
                let inputs = (self.universe.len() as u128).pow(sym.arity as u32 - 1);
                if outputs.len() as u128 != inputs {
                    return Err(Error::Structure(format!("{} is not total", sym.name)));
                }
            }
        }
        Ok(())
    }

    /// The structure with every element renamed through `map`.
    pub fn relabel(&self, map: &BTreeMap<ElementId, ElementId>) -> Result<FiniteStructure> {
        let image = |x: &ElementId| {
            map.get(x)
                .copied()
                .ok_or_else(|| Error::Structure(format!("relabel map misses {x}")))
        };
        let universe = self
            .universe
            .iter()
            .map(image)
            .collect::<Result<BTreeSet<_>>>()?;
        if universe.len() != self.universe.len() {
            return Err(Error::Structure("relabel map is not injective".into()));
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| t.iter().map(image).collect::<Result<Vec<_>>>())
                    .collect::<Result<BTreeSet<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteStructure {
            signature: self.signature.clone(),
            universe,
            relations,
        })
    }

    /// The substructure on `keep`.
    pub fn induced(&self, keep: &BTreeSet<ElementId>) -> FiniteStructure {
        let universe: BTreeSet<_> = self.universe.intersection(keep).copied().collect();
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .filter(|t| t.iter().all(|x| universe.contains(x)))
                    .cloned()
                    .collect()
            })
            .collect();
        FiniteStructure {
            signature: self.signature.clone(),
            universe,
            relations,
        }
    }

    /// Renames the universe to `0..n` in ascending order.
    pub fn normalized(&self) -> FiniteStructure {
        let map: BTreeMap<_, _> = self
            .universe
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as ElementId))
            .collect();
        self.relabel(&map)
            .expect("normalizing map is total and injective")
    }

    /// The complete atomic diagram, equality facts included.
    pub fn diagram(&self) -> AtomicDiagram {
        let mut d = AtomicDiagram::default();
        let elems: Vec<_> = self.universe.iter().copied().collect();
        for &a in &elems {
            for &b in &elems {
                d.facts.insert((EQUALITY.to_string(), vec![a, b]), a == b);
            }
        }
        for (i, sym) in self.signature.symbols.iter().enumerate() {
            for t in tuples(&elems, sym.arity) {
                let holds = self.relations[i].contains(&t);
                d.facts.insert((sym.name.clone(), t), holds);
            }
        }
        d
    }

    /// Reads a structure off the positive part of a diagram: equality facts
    /// `(=, [a, a])` give the universe, other positive facts the relations.
    pub fn from_positive_diagram(
        signature: Signature,
        d: &AtomicDiagram,
    ) -> Result<FiniteStructure> {
        d.check_consistent()?;
        let universe = d
            .facts
            .iter()
            .filter(|((s, t), &pos)| pos && s == EQUALITY && t[0] == t[1])
            .map(|((_, t), _)| t[0]);
        let mut out = FiniteStructure::new(signature, universe);
        for ((s, t), &pos) in &d.facts {
            if pos && s != EQUALITY {
                out.insert(s, t.clone())
                    .map_err(|e| Error::Inconsistent(e.to_string()))?;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StructureJson::from(self)).expect("structure serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&StructureJson::from(self)).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<FiniteStructure> {
        let raw: StructureJson = serde_json::from_str(text)?;
        FiniteStructure::try_from(raw)
    }

    /// DOT rendering of the binary relations. Symmetric irreflexive relations
    /// become undirected edges.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(|_| None)
    }

    /// Like [`to_dot`](Self::to_dot), with a fill colour per vertex.
    pub fn to_dot_with(&self, colour: impl Fn(ElementId) -> Option<&'static str>) -> String {
        let binary: Vec<usize> = (0..self.signature.len())
            .filter(|&i| self.signature.symbols[i].arity == 2)
            .collect();
        let symmetric = binary.iter().all(|&i| {
            self.relations[i]
                .iter()
                .all(|t| t[0] != t[1] && self.relations[i].contains(&vec![t[1], t[0]]))
        });
        let (kw, arrow) = if symmetric {
            ("graph", "--")
        } else {
            ("digraph", "->")
        };
        let mut out = format!("{kw} structure {{\n");
        for &x in &self.universe {
            let mut label = x.to_string();
            for (i, sym) in self.signature.symbols.iter().enumerate() {
                if sym.arity == 1 && self.relations[i].contains(&vec![x]) {
                    let _ = write!(label, "\\n{}", sym.name);
                }
            }
            match colour(x) {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "  {x} [label=\"{label}\", style=filled, fillcolor={c}];"
                    );
                }
                None => {
                    let _ = writeln!(out, "  {x} [label=\"{label}\"];");
                }
            }
        }
        for &i in &binary {
            let name = &self.signature.symbols[i].name;
            for t in &self.relations[i] {
                if symmetric && t[0] > t[1] {
                    continue;
                }
                if binary.len() > 1 {
                    let _ = writeln!(out, "  {} {arrow} {} [label=\"{name}\"];", t[0], t[1]);
                } else {
                    let _ = writeln!(out, "  {} {arrow} {};", t[0], t[1]);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// All tuples of length `k` over `elems`, lexicographic.
pub fn tuples(elems: &[ElementId], k: usize) -> Vec<Vec<ElementId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    signature: Signature,
    universe: Vec<ElementId>,
    relations: BTreeMap<String, Vec<Vec<ElementId>>>,
}

impl From<&FiniteStructure> for StructureJson {
    fn from(s: &FiniteStructure) -> Self {
        StructureJson {
            signature: s.signature.clone(),
            universe: s.universe.iter().copied().collect(),
            relations: s
                .signature
                .symbols
                .iter()
                .zip(&s.relations)
                .map(|(sym, rel)| (sym.name.clone(), rel.iter().cloned().collect()))
                .collect(),
        }
    }
}

impl TryFrom<StructureJson> for FiniteStructure {
    type Error = Error;

    fn try_from(raw: StructureJson) -> Result<Self> {
        let mut s = FiniteStructure::new(raw.signature, raw.universe);
        for (name, tuples) in raw.relations {
            for t in tuples {
                s.insert(&name, t)?;
            }
        }
        s.validate()?;
        Ok(s)
    }
}

/// Key of an atomic fact: symbol name and argument tuple.
pub type FactKey = (String, Vec<ElementId>);

/// A finite set of signed atomic facts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomicDiagram {
    facts: BTreeMap<FactKey, bool>,
}

impl AtomicDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a fact; asserting both polarities of one fact is an error.
    pub fn insert(&mut self, symbol: &str, tuple: Vec<ElementId>, positive: bool) -> Result<()> {
        let key = (symbol.to_string(), tuple);
        match self.facts.get(&key) {
            Some(&p) if p != positive => Err(Error::Inconsistent(format!(
                "{}{:?} asserted with both polarities",
                key.0, key.1
            ))),
            _ => {
                self.facts.insert(key, positive);
                Ok(())
            }
        }
    }

    /// Asserts `x ∈ universe`.
    pub fn insert_element(&mut self, x: ElementId) -> Result<()> {
        self.insert(EQUALITY, vec![x, x], true)
    }

    pub fn get(&self, symbol: &str, tuple: &[ElementId]) -> Option<bool> {
        self.facts
            .get(&(symbol.to_string(), tuple.to_vec()))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[ElementId], bool)> {
        self.facts
            .iter()
            .map(|((s, t), &p)| (s.as_str(), t.as_slice(), p))
    }

    pub fn positive(&self) -> impl Iterator<Item = (&str, &[ElementId])> {
        self.iter().filter(|f| f.2).map(|(s, t, _)| (s, t))
    }

    pub fn is_subset_of(&self, other: &AtomicDiagram) -> bool {
        self.facts
            .iter()
            .all(|(k, p)| other.facts.get(k) == Some(p))
    }

    /// Elements mentioned by any fact.
    pub fn elements(&self) -> BTreeSet<ElementId> {
        self.facts
            .keys()
            .flat_map(|(_, t)| t.iter().copied())
            .collect()
    }

    pub fn union(&self, other: &AtomicDiagram) -> Result<AtomicDiagram> {
        let mut out = self.clone();
        for ((s, t), &p) in &other.facts {
            out.insert(s, t.clone(), p)?;
        }
        Ok(out)
    }

    /// The facts whose tuples lie inside `keep`.
    pub fn restrict(&self, keep: &BTreeSet<ElementId>) -> AtomicDiagram {
        AtomicDiagram {
            facts: self
                .facts
                .iter()
                .filter(|((_, t), _)| t.iter().all(|x| keep.contains(x)))
                .map(|(k, &p)| (k.clone(), p))
                .collect(),
        }
    }

    /// Keeps the facts for which `pred` holds.
    pub fn filter(&self, mut pred: impl FnMut(&str, &[ElementId], bool) -> bool) -> AtomicDiagram {
        AtomicDiagram {
            facts: self
                .facts
                .iter()
                .filter(|((s, t), &p)| pred(s, t, p))
                .map(|(k, &p)| (k.clone(), p))
                .collect(),
        }
    }

    /// Equality facts must agree with identity of ids.
    pub fn check_consistent(&self) -> Result<()> {
        for ((s, t), &p) in &self.facts {
            if s == EQUALITY && (t.len() != 2 || p != (t[0] == t[1])) {
                return Err(Error::Inconsistent(format!(
                    "bad equality fact {t:?} = {p}"
                )));
            }
        }
        Ok(())
    }

    /// True when every `(symbol, tuple over universe)` of `signature`, and
    /// every equality between elements of `universe`, appears.
    pub fn is_complete_for(&self, signature: &Signature, universe: &BTreeSet<ElementId>) -> bool {
        let elems: Vec<_> = universe.iter().copied().collect();
        let eq_ok = tuples(&elems, 2)
            .into_iter()
            .all(|t| self.get(EQUALITY, &t).is_some());
        eq_ok
            && signature.symbols().iter().all(|s| {
                tuples(&elems, s.arity)
                    .into_iter()
                    .all(|t| self.get(&s.name, &t).is_some())
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> FiniteStructure {
        FiniteStructure::graph([0, 1, 2], [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn json_is_canonical_and_round_trips() {
        let g = p3();
        let text = g.to_json();
        assert_eq!(
            text,
            r#"{"signature":[{"name":"E","arity":2,"functional":false}],"universe":[0,1,2],"relations":{"E":[[0,1],[1,0],[1,2],[2,1]]}}"#
        );
        assert_eq!(FiniteStructure::from_json(&text).unwrap(), g);
    }

    #[test]
    fn rejects_out_of_universe_tuples() {
        let text =
            r#"{"signature":[{"name":"E","arity":2}],"universe":[0],"relations":{"E":[[0,1]]}}"#;
        assert!(FiniteStructure::from_json(text).is_err());
    }

    #[test]
    fn rejects_duplicate_symbols() {
        let sig = Signature::new(vec![Symbol::relation("R", 2), Symbol::relation("R", 1)]);
        assert!(matches!(sig, Err(Error::Signature(_))));
    }

    #[test]
    fn functional_symbols_are_checked() {
        let sig = Signature::new(vec![Symbol::function_graph("f", 2)]).unwrap();
        let mut s = FiniteStructure::new(sig, [0, 1]);
        s.insert("f", vec![0, 1]).unwrap();
        assert!(s.validate().is_err(), "not total");
        s.insert("f", vec![1, 1]).unwrap();
        s.validate().unwrap();
        s.insert("f", vec![1, 0]).unwrap();
        assert!(s.validate().is_err(), "not single-valued");
    }

    #[test]
    fn diagram_is_complete_and_consistent() {
        let g = p3();
        let d = g.diagram();
        assert!(d.is_complete_for(g.signature(), g.universe()));
        assert_eq!(d.len(), 9 + 9);
        let back = FiniteStructure::from_positive_diagram(Signature::graph(), &d).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn diagram_polarity_conflict() {
        let mut d = AtomicDiagram::new();
        d.insert("E", vec![0, 1], true).unwrap();
        assert!(d.insert("E", vec![0, 1], false).is_err());
    }

    #[test]
    fn dot_export_undirected() {
        let dot = p3().to_dot();
        assert!(dot.starts_with("graph"));
        assert!(dot.contains("0 -- 1;"));
        assert!(!dot.contains("1 -- 0;"));
    }
}
