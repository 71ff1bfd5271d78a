//! The back-and-forth relations `≡^α` and Scott ranks of finite structures.
//!
//! Extensions are by single elements. A tuple with repeated entries behaves
//! exactly like its deduplication (first occurrences kept) together with its
//! equality pattern, so the table only stores injective tuples; any tuple of a
//! finite structure `A` has an injective reduction of length at most `|A|`.
//!
//! Level 0 classes are quantifier-free types. A pair of tuples is in level
//! `α + 1` iff it is in level `α` and the sets of level-`α` classes reached by
//! one-point extensions with fresh elements coincide. That is the forth and
//! back clause with the repetition cases discharged: extending by an entry
//! already in the tuple forces the matching entry on the other side.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{check_budget, Error, Result};
use crate::iso::{automorphism_generators_within, UnionFind};
use crate::structure::{ElementId, FiniteStructure};

/// A tuple's class at the previous level and the sorted classes of its
/// one-point extensions.
type Extensions = (u32, Vec<u32>);

/// One level of the hierarchy restricted to tuples of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfLevel {
    pub alpha: usize,
    /// Classes of `(side, tuple)` pairs; side 0 is the left structure.
    pub classes: Vec<Vec<(usize, Vec<ElementId>)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fixpoint {
    pub levels: Vec<BfLevel>,
    /// First level after which the classes of this length never change.
    pub stable_at: usize,
}

/// Scott ranks of all injective tuples, and of the structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScottReport {
    pub tuple_ranks: Vec<TupleRank>,
    pub structure_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRank {
    pub tuple: Vec<ElementId>,
    pub rank: usize,
}

/// Injective tuples of one structure, grouped by length.
struct TupleSpace {
    ids: Vec<ElementId>,
    /// tuples[len] = all injective tuples of that length, lexicographic.
    tuples: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
}

impl TupleSpace {
    fn new(s: &FiniteStructure) -> TupleSpace {
        let ids: Vec<ElementId> = s.universe().iter().copied().collect();
        let n = ids.len();
        let mut tuples = vec![vec![Vec::new()]];
        for len in 1..=n {
            let next: Vec<Vec<u32>> = tuples[len - 1]
                .iter()
                .flat_map(|t: &Vec<u32>| {
                    (0..n as u32).filter(move |c| !t.contains(c)).map(move |c| {
                        let mut u = t.clone();
                        u.push(c);
                        u
                    })
                })
                .collect();
            tuples.push(next);
        }
        let index = tuples
            .iter()
            .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        TupleSpace { ids, tuples, index }
    }

    fn size(n: usize) -> u128 {
        let mut total = 1u128;
        let mut term = 1u128;
        for k in 0..n {
            term *= (n - k) as u128;
            total += term;
        }
        total
    }

    fn dense(&self, t: &[ElementId]) -> Result<Vec<u32>> {
        t.iter()
            .map(|x| {
                self.ids
                    .binary_search(x)
                    .map(|i| i as u32)
                    .map_err(|_| Error::Structure(format!("{x} is not in the universe")))
            })
            .collect()
    }
}

/// Deduplicates a tuple keeping first occurrences; returns the reduction and
/// the position of each original entry in it.
fn reduce<T: PartialEq + Copy>(t: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut red = Vec::new();
    let mut pattern = Vec::with_capacity(t.len());
    for &x in t {
        match red.iter().position(|&y| y == x) {
            Some(i) => pattern.push(i),
            None => {
                pattern.push(red.len());
                red.push(x);
            }
        }
    }
    (red, pattern)
}

/// The refining sequence of colourings over a pool of structures sharing a
/// signature. `colours[level][side][len][i]` is the class id of tuple `i`.
struct BfTable {
    spaces: Vec<TupleSpace>,
    colours: Vec<Vec<Vec<Vec<u32>>>>,
}

impl BfTable {
    fn build(pool: &[&FiniteStructure], budget: &Budget) -> Result<BfTable> {
        for w in pool.windows(2) {
            w[0].signature().ensure_same(w[1].signature())?;
        }
        let need: u128 = pool.iter().map(|s| TupleSpace::size(s.len())).sum();
        check_budget("back-and-forth tuple table", need, budget.bf_table_max)?;
        let spaces: Vec<TupleSpace> = pool.iter().map(|s| TupleSpace::new(s)).collect();

        // level 0: quantifier-free types
        let keys: Vec<Vec<Vec<Vec<bool>>>> = pool
            .iter()
            .zip(&spaces)
            .map(|(s, sp)| {
                sp.tuples
                    .iter()
                    .map(|ts| ts.iter().map(|t| qf_key(s, &sp.ids, t)).collect())
                    .collect()
            })
            .collect();
        let level0 = canonical_ids(&keys);
        let mut colours = vec![level0];
        let mut classes = count_classes(&colours[0]);
        loop {
            let prev = colours.last().expect("nonempty");
            let sigs: Vec<Vec<Vec<Extensions>>> = spaces
                .iter()
                .enumerate()
                .map(|(side, sp)| {
                    let n = sp.ids.len();
                    (0..sp.tuples.len())
                        .map(|len| {
                            sp.tuples[len]
                                .iter()
                                .enumerate()
                                .map(|(i, t)| {
                                    let mut ext: Vec<u32> = if len < n {
                                        (0..n as u32)
                                            .filter(|c| !t.contains(c))
                                            .map(|c| {
                                                let mut u = t.clone();
                                                u.push(c);
                                                prev[side][len + 1][sp.index[len + 1][&u]]
                                            })
                                            .collect()
                                    } else {
                                        Vec::new()
                                    };
                                    ext.sort_unstable();
                                    ext.dedup();
                                    (prev[side][len][i], ext)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let next = canonical_ids(&sigs);
            let c = count_classes(&next);
            if c == classes {
                break;
            }
            classes = c;
            colours.push(next);
        }
        Ok(BfTable { spaces, colours })
    }

    /// Index of the last level; every later level equals it.
    fn top(&self) -> usize {
        self.colours.len() - 1
    }

    fn colour(&self, level: usize, side: usize, t: &[u32]) -> u32 {
        let level = level.min(self.top());
        self.colours[level][side][t.len()][self.spaces[side].index[t.len()][t]]
    }

    fn equiv(&self, level: usize, side_a: usize, ta: &[u32], side_b: usize, tb: &[u32]) -> bool {
        let (ra, pa) = reduce(ta);
        let (rb, pb) = reduce(tb);
        pa == pb && self.colour(level, side_a, &ra) == self.colour(level, side_b, &rb)
    }
}

/// Quantifier-free type of an injective tuple: for each symbol, the truth
/// value of every atomic formula over the tuple's variables.
fn qf_key(s: &FiniteStructure, ids: &[ElementId], t: &[u32]) -> Vec<bool> {
    let mut key = Vec::new();
    for sym in 0..s.signature().len() {
        let arity = s.signature().symbols()[sym].arity;
        let mut pos = vec![0usize; arity];
        let total = t.len().pow(arity as u32);
        for _ in 0..total {
            let tuple: Vec<ElementId> = pos.iter().map(|&p| ids[t[p] as usize]).collect();
            key.push(s.holds(sym, &tuple));
            for slot in pos.iter_mut().rev() {
                *slot += 1;
                if *slot < t.len() {
                    break;
                }
                *slot = 0;
            }
        }
    }
    key
}

/// Replaces keys with dense ids ordered by key, shared across sides. Ids are
/// assigned per tuple length, offset so different lengths never collide.
fn canonical_ids<K: Ord + Clone>(keys: &[Vec<Vec<K>>]) -> Vec<Vec<Vec<u32>>> {
    let mut all: BTreeMap<(usize, K), u32> = BTreeMap::new();
    for side in keys {
        for (len, ks) in side.iter().enumerate() {
            for k in ks {
                all.entry((len, k.clone())).or_insert(0);
            }
        }
    }
    for (i, v) in all.values_mut().enumerate() {
        *v = i as u32;
    }
    keys.iter()
        .map(|side| {
            side.iter()
                .enumerate()
                .map(|(len, ks)| ks.iter().map(|k| all[&(len, k.clone())]).collect())
                .collect()
        })
        .collect()
}

fn count_classes(c: &[Vec<Vec<u32>>]) -> usize {
    let mut all: Vec<u32> = c.iter().flatten().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// `ta ≡^alpha tb`, with `ta` in `a` and `tb` in `b`.
pub fn bf_equiv(
    a: &FiniteStructure,
    ta: &[ElementId],
    b: &FiniteStructure,
    tb: &[ElementId],
    alpha: usize,
) -> Result<bool> {
    bf_equiv_within(a, ta, b, tb, alpha, &Budget::default())
}

pub fn bf_equiv_within(
    a: &FiniteStructure,
    ta: &[ElementId],
    b: &FiniteStructure,
    tb: &[ElementId],
    alpha: usize,
    budget: &Budget,
) -> Result<bool> {
    if ta.len() != tb.len() {
        return Err(Error::LengthMismatch(ta.len(), tb.len()));
    }
    let table = BfTable::build(&[a, b], budget)?;
    let da = table.spaces[0].dense(ta)?;
    let db = table.spaces[1].dense(tb)?;
    Ok(table.equiv(alpha, 0, &da, 1, &db))
}

/// Classes of all `len`-tuples of `a` and `b` at every level up to the point
/// where the whole table stops refining.
pub fn bf_fixpoint(a: &FiniteStructure, b: &FiniteStructure, len: usize) -> Result<Fixpoint> {
    bf_fixpoint_within(a, b, len, &Budget::default())
}

pub fn bf_fixpoint_within(
    a: &FiniteStructure,
    b: &FiniteStructure,
    len: usize,
    budget: &Budget,
) -> Result<Fixpoint> {
    let listed = ((a.len() + b.len()) as u128)
        .checked_pow(len as u32)
        .unwrap_or(u128::MAX);
    check_budget("back-and-forth tuple listing", listed, budget.bf_table_max)?;
    let table = BfTable::build(&[a, b], budget)?;
    let members: Vec<(usize, Vec<ElementId>, Vec<u32>)> = [a, b]
        .iter()
        .enumerate()
        .flat_map(|(side, s)| {
            let elems: Vec<ElementId> = s.universe().iter().copied().collect();
            let sp = &table.spaces[side];
            crate::structure::tuples(&elems, len)
                .into_iter()
                .map(move |t| {
                    let d = sp.dense(&t).expect("tuple over the universe");
                    (side, t, d)
                })
        })
        .collect();
    let mut levels = Vec::new();
    for alpha in 0..=table.top() {
        let mut classes: Vec<Vec<(usize, Vec<ElementId>)>> = Vec::new();
        let mut reps: Vec<(usize, Vec<u32>)> = Vec::new();
        for (side, t, d) in &members {
            match reps
                .iter()
                .position(|(rs, rd)| table.equiv(alpha, *rs, rd, *side, d))
            {
                Some(c) => classes[c].push((*side, t.clone())),
                None => {
                    reps.push((*side, d.clone()));
                    classes.push(vec![(*side, t.clone())]);
                }
            }
        }
        levels.push(BfLevel { alpha, classes });
    }
    let last = levels.last().map(|l| l.classes.len()).unwrap_or(0);
    let stable_at = levels
        .iter()
        .position(|l| l.classes.len() == last)
        .unwrap_or(0);
    Ok(Fixpoint { levels, stable_at })
}

/// Per-structure data for rank computations: the table over `[a]` and the
/// automorphism orbit label of every injective tuple.
struct RankContext {
    table: BfTable,
    orbits: Vec<Vec<u32>>,
}

impl RankContext {
    fn new(a: &FiniteStructure, budget: &Budget) -> Result<RankContext> {
        let table = BfTable::build(&[a], budget)?;
        let gens = automorphism_generators_within(a, budget)?;
        let sp = &table.spaces[0];
        let gens: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| {
                sp.ids
                    .iter()
                    .map(|&x| {
                        sp.ids
                            .binary_search(&g.apply(x).expect("total"))
                            .expect("onto") as u32
                    })
                    .collect()
            })
            .collect();
        let orbits = sp
            .tuples
            .iter()
            .enumerate()
            .map(|(len, ts)| {
                let mut uf = UnionFind::new(ts.len());
                for (i, t) in ts.iter().enumerate() {
                    for g in &gens {
                        let img: Vec<u32> = t.iter().map(|&x| g[x as usize]).collect();
                        uf.union(i, sp.index[len][&img]);
                    }
                }
                (0..ts.len()).map(|i| uf.find(i) as u32).collect()
            })
            .collect();
        Ok(RankContext { table, orbits })
    }

    /// Least level at which the class of every injective `len`-tuple is
    /// contained in its orbit.
    fn ranks_of_length(&self, len: usize) -> Vec<usize> {
        let sp = &self.table.spaces[0];
        let ts = &sp.tuples[len];
        let labels = &self.orbits[len];
        let mut rank = vec![usize::MAX; ts.len()];
        for level in 0..=self.table.top() {
            let cs = &self.table.colours[level][0][len];
            // a class is pure when all its members share one orbit label
            let mut first: HashMap<u32, Option<u32>> = HashMap::new();
            for (i, &c) in cs.iter().enumerate() {
                first
                    .entry(c)
                    .and_modify(|l| {
                        if *l != Some(labels[i]) {
                            *l = None
                        }
                    })
                    .or_insert(Some(labels[i]));
            }
            for (i, &c) in cs.iter().enumerate() {
                if rank[i] == usize::MAX && first[&c].is_some() {
                    rank[i] = level;
                }
            }
        }
        debug_assert!(
            rank.iter().all(|&r| r != usize::MAX),
            "fixpoint must separate orbits"
        );
        rank
    }
}

/// Least β such that `ta ≡^β tb` implies `(a, ta) ≅ (a, tb)` for all `tb`.
pub fn scott_rank_tuple(a: &FiniteStructure, ta: &[ElementId]) -> Result<usize> {
    scott_rank_tuple_within(a, ta, &Budget::default())
}

pub fn scott_rank_tuple_within(
    a: &FiniteStructure,
    ta: &[ElementId],
    budget: &Budget,
) -> Result<usize> {
    let ctx = RankContext::new(a, budget)?;
    let sp = &ctx.table.spaces[0];
    let (red, _) = reduce(&sp.dense(ta)?);
    let ranks = ctx.ranks_of_length(red.len());
    Ok(ranks[sp.index[red.len()][&red]])
}

/// `1 + max` of the tuple ranks.
pub fn scott_rank(a: &FiniteStructure) -> Result<usize> {
    Ok(scott_report(a)?.structure_rank)
}

pub fn scott_report(a: &FiniteStructure) -> Result<ScottReport> {
    scott_report_within(a, &Budget::default())
}

/// Ranks of every injective tuple (every tuple reduces to one of these).
pub fn scott_report_within(a: &FiniteStructure, budget: &Budget) -> Result<ScottReport> {
    let ctx = RankContext::new(a, budget)?;
    let sp = &ctx.table.spaces[0];
    let mut tuple_ranks = Vec::new();
    for len in 0..sp.tuples.len() {
        let ranks = ctx.ranks_of_length(len);
        for (t, r) in sp.tuples[len].iter().zip(ranks) {
            tuple_ranks.push(TupleRank {
                tuple: t.iter().map(|&i| sp.ids[i as usize]).collect(),
                rank: r,
            });
        }
    }
    let structure_rank = 1 + tuple_ranks.iter().map(|t| t.rank).max().unwrap_or(0);
    Ok(ScottReport {
        tuple_ranks,
        structure_rank,
    })
}
