//! Heaps of reduced words and the poset combinatorics built on them:
//! filters, linear extensions, order-preserving maps into chains, weighted
//! heaps of f-words and their labeled weighted embeddings.
//!
//! Positions are 0-based internally; printed positions are `p+1`.
//! Position 0 of a heap built from a word is maximal.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repmod::FWord;
use crate::rootdata::{RootDatum, WeylWord};

pub const MAX_HEAP_SIZE: usize = 64;

fn bit(p: usize) -> u64 {
    1u64 << p
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&p| mask & bit(p) != 0)
}

/// A labeled poset with a full strict-order table stored as bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heap {
    labels: Vec<usize>,
    /// `greater[p]`: positions strictly greater than `p`.
    greater: Vec<u64>,
}

/// An upward-closed subset of a heap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter(pub u64);

impl Filter {
    pub fn contains(&self, p: usize) -> bool {
        self.0 & bit(p) != 0
    }

    pub fn members(&self) -> Vec<usize> {
        bits(self.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn indicator(&self, size: usize) -> Vec<i64> {
        (0..size).map(|p| i64::from(self.contains(p))).collect()
    }
}

impl Heap {
    /// Build from labels and generating relations `(upper, lower)`; the order is
    /// the transitive closure. Fails on cycles.
    pub fn from_relations(labels: Vec<usize>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_HEAP_SIZE {
            return Err(Error::ScaleCap(format!("heap of size {n}")));
        }
        let mut greater = vec![0u64; n];
        for &(hi, lo) in relations {
            if hi >= n || lo >= n {
                return Err(Error::IndexOutOfRange {
                    index: hi.max(lo),
                    rank: n,
                });
            }
            greater[lo] |= bit(hi);
        }
        // Warshall closure on bitsets.
        for k in 0..n {
            for p in 0..n {
                if greater[p] & bit(k) != 0 {
                    greater[p] |= greater[k];
                }
            }
        }
        if (0..n).any(|p| greater[p] & bit(p) != 0) {
            return Err(Error::Parse("relations contain a cycle".into()));
        }
        Ok(Heap { labels, greater })
    }

    pub fn empty() -> Self {
        Heap {
            labels: Vec::new(),
            greater: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> usize {
        self.labels[p]
    }

    /// Strict order test `p > q`.
    pub fn gt(&self, p: usize, q: usize) -> bool {
        self.greater[q] & bit(p) != 0
    }

    pub fn greater_mask(&self, p: usize) -> u64 {
        self.greater[p]
    }

    pub fn less_mask(&self, p: usize) -> u64 {
        (0..self.size()).filter(|&q| self.gt(p, q)).fold(0, |m, q| m | bit(q))
    }

    fn full_mask(&self) -> u64 {
        if self.size() == 64 {
            u64::MAX
        } else {
            bit(self.size()) - 1
        }
    }

    /// Cover relations `(upper, lower)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for lo in 0..self.size() {
            for hi in bits(self.greater[lo]) {
                let between = bits(self.greater[lo]).any(|r| r != hi && self.gt(hi, r));
                if !between {
                    out.push((hi, lo));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A linear extension listed from the top down.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut placed = 0u64;
        let mut order = Vec::with_capacity(self.size());
        while order.len() < self.size() {
            let next = (0..self.size())
                .find(|&p| placed & bit(p) == 0 && self.greater[p] & !placed == 0)
                .expect("acyclic");
            placed |= bit(next);
            order.push(next);
        }
        order
    }

    pub fn is_filter(&self, mask: u64) -> bool {
        bits(mask).all(|p| self.greater[p] & !mask == 0)
    }

    /// All filters, sorted by indicator vector (position 1 most significant).
    pub fn filters(&self) -> Vec<Filter> {
        let order = self.top_down_order();
        let mut out = Vec::new();
        self.filters_rec(&order, 0, 0, &mut out);
        let n = self.size();
        out.sort_by_key(|f| f.indicator(n));
        out
    }

    fn filters_rec(&self, order: &[usize], k: usize, cur: u64, out: &mut Vec<Filter>) {
        if k == order.len() {
            out.push(Filter(cur));
            return;
        }
        let p = order[k];
        self.filters_rec(order, k + 1, cur, out);
        if self.greater[p] & !cur == 0 {
            self.filters_rec(order, k + 1, cur | bit(p), out);
        }
    }

    /// Number of linear extensions, by dynamic programming over filters.
    pub fn count_linear_extensions(&self) -> u128 {
        let mut filters = self.filters();
        filters.sort_by_key(|f| f.len());
        let mut count: HashMap<u64, u128> = HashMap::with_capacity(filters.len());
        for f in filters {
            if f.is_empty() {
                count.insert(0, 1);
                continue;
            }
            // remove a minimal element of f
            let total = bits(f.0)
                .filter(|&p| bits(f.0).all(|q| !self.gt(p, q)))
                .map(|p| count[&(f.0 & !bit(p))])
                .sum();
            count.insert(f.0, total);
        }
        count[&self.full_mask()]
    }

    /// Number of order-preserving maps into the chain `1 < 2 < ... < m+1`,
    /// counted as multichains of filters `F_1 ⊇ ... ⊇ F_m`.
    pub fn poset_morphism_count(&self, m: usize) -> u128 {
        let filters = self.filters();
        if m == 0 {
            return 1;
        }
        let mut counts: Vec<u128> = vec![1; filters.len()];
        for _ in 1..m {
            counts = filters
                .iter()
                .map(|g| {
                    filters
                        .iter()
                        .zip(&counts)
                        .filter(|(f, _)| f.0 & g.0 == g.0)
                        .map(|(_, c)| *c)
                        .sum()
                })
                .collect();
        }
        counts.iter().sum()
    }

    /// Canonical key for labeled-poset isomorphism classes of heaps: the Foata
    /// normal form of the trace (maximal elements peeled level by level, sorted
    /// by label, with weights).
    pub fn canonical_key(&self, weights: Option<&[u32]>) -> Vec<(usize, u32)> {
        let mut removed = 0u64;
        let mut out = Vec::with_capacity(self.size());
        while removed.count_ones() as usize != self.size() {
            let tops: Vec<usize> = (0..self.size())
                .filter(|&p| removed & bit(p) == 0 && self.greater[p] & !removed == 0)
                .collect();
            let mut level: Vec<(usize, u32)> = tops
                .iter()
                .map(|&p| (self.labels[p], weights.map_or(1, |w| w[p])))
                .collect();
            for &p in &tops {
                removed |= bit(p);
            }
            level.sort_unstable();
            out.extend(level);
            out.push((usize::MAX, 0));
        }
        out
    }

    pub fn is_isomorphic(&self, other: &Heap) -> bool {
        self.canonical_key(None) == other.canonical_key(None)
    }

    pub fn to_json(&self) -> HeapJson {
        HeapJson {
            size: self.size(),
            labels: self.labels.iter().map(|l| l + 1).collect(),
            covers: self.covers().into_iter().map(|(hi, lo)| [hi + 1, lo + 1]).collect(),
        }
    }

    pub fn from_json(j: &HeapJson) -> Result<Self> {
        if j.labels.len() != j.size || j.labels.iter().any(|&l| l == 0) {
            return Err(Error::Parse("heap labels do not match size".into()));
        }
        let labels = j.labels.iter().map(|l| l - 1).collect();
        let rel: Vec<(usize, usize)> = j
            .covers
            .iter()
            .map(|[a, b]| {
                if *a == 0 || *b == 0 {
                    Err(Error::Parse("positions are 1-based".into()))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<_>>()?;
        Heap::from_relations(labels, &rel)
    }
}

/// Serialized heap: 1-based positions and labels, covers as `[upper, lower]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeapJson {
    pub size: usize,
    pub labels: Vec<usize>,
    pub covers: Vec<[usize; 2]>,
}

/// Heap of a reduced word: `p_i > p_j` when `i < j` and the labels do not commute.
pub fn heap_of_word(datum: &RootDatum, w: &WeylWord) -> Result<Heap> {
    if !datum.is_reduced(w) {
        return Err(Error::NotReduced(w.to_string()));
    }
    heap_of_sequence(datum, w.positions())
}

fn heap_of_sequence(datum: &RootDatum, labels: &[usize]) -> Result<Heap> {
    let n = labels.len();
    if n > MAX_HEAP_SIZE {
        return Err(Error::ScaleCap(format!("heap of size {n}")));
    }
    let mut greater = vec![0u64; n];
    for j in 0..n {
        for i in 0..j {
            if datum.cartan_entry(labels[i], labels[j]) != 0 {
                greater[j] |= bit(i) | greater[i];
            }
        }
    }
    Ok(Heap {
        labels: labels.to_vec(),
        greater,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedHeap {
    pub heap: Heap,
    pub weights: Vec<u32>,
}

impl WeightedHeap {
    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn canonical_key(&self) -> Vec<(usize, u32)> {
        self.heap.canonical_key(Some(&self.weights))
    }
}

/// Weighted heap of `f_{i_L}^{d_L} ... f_{i_1}^{d_1}`: elements are the factors
/// with positive exponent, the first-applied factor on top.
pub fn weighted_heap_of_fword(datum: &RootDatum, fword: &FWord) -> Result<WeightedHeap> {
    let factors = fword.factors();
    if factors.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::AdjacentEqual);
    }
    for &(i, _) in factors {
        if i >= datum.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: datum.rank(),
            });
        }
    }
    let kept: Vec<(usize, u32)> = factors.iter().copied().filter(|&(_, d)| d > 0).collect();
    let labels: Vec<usize> = kept.iter().map(|&(i, _)| i).collect();
    let heap = heap_of_sequence(datum, &labels)?;
    Ok(WeightedHeap {
        heap,
        weights: kept.iter().map(|&(_, d)| d).collect(),
    })
}

/// A labeled weighted embedding, recorded per source element as the sorted
/// multiset of target positions receiving its copies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledEmbedding {
    pub images: Vec<Vec<usize>>,
}

impl LabeledEmbedding {
    /// Number of copies sent to each target position.
    pub fn image_weights(&self, target_size: usize) -> Vec<u32> {
        let mut k = vec![0u32; target_size];
        for set in &self.images {
            for &t in set {
                k[t] += 1;
            }
        }
        k
    }
}

/// Label-preserving maps of the expanded poset `wt·H` into `target` that are
/// strictly order-preserving on comparable elements, up to permuting copies.
/// Copies of one element may share a target position; the multiplicity is
/// the embedding weight.
pub fn weighted_embeddings(wh: &WeightedHeap, target: &Heap) -> Vec<LabeledEmbedding> {
    embeddings(wh, target, false)
}

/// As [`weighted_embeddings`], but every copy needs its own target position.
pub fn injective_weighted_embeddings(wh: &WeightedHeap, target: &Heap) -> Vec<LabeledEmbedding> {
    embeddings(wh, target, true)
}

struct EmbedSearch<'a> {
    wh: &'a WeightedHeap,
    target: &'a Heap,
    order: Vec<usize>,
    below: Vec<u64>,
    injective: bool,
}

fn embeddings(wh: &WeightedHeap, target: &Heap, injective: bool) -> Vec<LabeledEmbedding> {
    let h = &wh.heap;
    let mut need: HashMap<usize, u32> = HashMap::new();
    for (p, &w) in wh.weights.iter().enumerate() {
        *need.entry(h.label(p)).or_default() += if injective { w } else { 1 };
    }
    for (&label, &w) in &need {
        let have = target.labels().iter().filter(|&&l| l == label).count() as u32;
        if have < w {
            return Vec::new();
        }
    }
    let search = EmbedSearch {
        wh,
        target,
        order: h.top_down_order(),
        below: (0..target.size()).map(|q| target.less_mask(q)).collect(),
        injective,
    };
    let mut images: Vec<Vec<usize>> = vec![Vec::new(); h.size()];
    let mut out = Vec::new();
    search.rec(0, 0, &mut images, &mut out);
    out.sort();
    out
}

impl EmbedSearch<'_> {
    fn rec(&self, k: usize, used: u64, images: &mut Vec<Vec<usize>>, out: &mut Vec<LabeledEmbedding>) {
        if k == self.order.len() {
            out.push(LabeledEmbedding { images: images.clone() });
            return;
        }
        let x = self.order[k];
        let label = self.wh.heap.label(x);
        let mut allowed: u64 = (0..self.target.size())
            .filter(|&t| self.target.label(t) == label)
            .fold(0, |m, t| m | bit(t))
            & !used;
        for y in bits(self.wh.heap.greater_mask(x)) {
            for &q in &images[y] {
                allowed &= self.below[q];
            }
        }
        let candidates: Vec<usize> = bits(allowed).collect();
        let w = self.wh.weights[x] as usize;
        let mut chosen = Vec::with_capacity(w);
        choose_rec(&candidates, w, 0, !self.injective, &mut chosen, &mut |set| {
            let mask = set.iter().fold(0u64, |m, &t| m | bit(t));
            images[x] = set.to_vec();
            self.rec(k + 1, used | mask, images, out);
            images[x].clear();
        });
    }
}

/// Calls `f` on every `w`-element sub(multi)set of `items`, lexicographically.
fn choose_rec(
    items: &[usize],
    w: usize,
    start: usize,
    repeat: bool,
    chosen: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == w {
        f(chosen);
        return;
    }
    let remaining = w - chosen.len();
    for i in start..items.len() {
        if !repeat && items.len() - i < remaining {
            break;
        }
        chosen.push(items[i]);
        choose_rec(items, w, if repeat { i } else { i + 1 }, repeat, chosen, f);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    fn datum(s: &str) -> RootDatum {
        RootDatum::new(s.parse::<CartanType>().unwrap())
    }

    fn word(s: &str) -> WeylWord {
        WeylWord::parse(s).unwrap()
    }

    fn diamond() -> Heap {
        Heap::from_relations(vec![1, 0, 2, 1], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn b2_heap_is_chain() {
        let h = heap_of_word(&datum("B2"), &word("2 1 2")).unwrap();
        assert_eq!(h.labels(), &[1, 0, 1]);
        assert!(h.gt(0, 1) && h.gt(1, 2) && h.gt(0, 2));
        assert_eq!(h.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn a3_diamond() {
        let h = heap_of_word(&datum("A3"), &word("2 1 3 2")).unwrap();
        assert!(h.gt(0, 1) && h.gt(0, 2) && h.gt(1, 3) && h.gt(2, 3) && h.gt(0, 3));
        assert!(!h.gt(1, 2) && !h.gt(2, 1));
        assert!(h.is_isomorphic(&diamond()));
    }

    #[test]
    fn single_and_empty() {
        let h = heap_of_word(&datum("A1"), &word("1")).unwrap();
        assert_eq!(h.size(), 1);
        assert_eq!(Heap::empty().filters(), vec![Filter(0)]);
        assert!(heap_of_word(&datum("A2"), &word("1 1")).is_err());
    }

    #[test]
    fn chain_filters_in_order() {
        let h = heap_of_word(&datum("B2"), &word("2 1 2")).unwrap();
        let fs: Vec<Vec<usize>> = h.filters().iter().map(|f| f.members()).collect();
        assert_eq!(fs, vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]);
    }

    #[test]
    fn diamond_filters_brute_force() {
        let h = diamond();
        let brute = (0u64..16).filter(|&m| h.is_filter(m)).count();
        assert_eq!(brute, 6);
        assert_eq!(h.filters().len(), 6);
    }

    #[test]
    fn linear_extension_counts() {
        let chain = heap_of_word(&datum("B2"), &word("2 1 2")).unwrap();
        assert_eq!(chain.count_linear_extensions(), 1);
        assert_eq!(diamond().count_linear_extensions(), 2);
        // 2x3 grid: the Gr(2,5) minuscule poset
        let a4 = datum("A4");
        let w = a4.minimal_coset_word(&[1].into()).unwrap();
        let h = heap_of_word(&a4, &w).unwrap();
        assert_eq!(h.size(), 6);
        assert_eq!(h.count_linear_extensions(), 5);
    }

    #[test]
    fn morphism_counts() {
        let single = heap_of_word(&datum("A1"), &word("1")).unwrap();
        assert_eq!(single.poset_morphism_count(1), 2);
        let chain = heap_of_word(&datum("B2"), &word("2 1 2")).unwrap();
        assert_eq!(chain.poset_morphism_count(1), 4);
        assert_eq!(diamond().poset_morphism_count(2), 20);
    }

    #[test]
    fn weighted_heaps() {
        let b2 = datum("B2");
        let wh = weighted_heap_of_fword(&b2, &FWord::from_printed(&[(0, 1), (1, 3)])).unwrap();
        assert_eq!(wh.heap.labels(), &[1, 0]);
        assert_eq!(wh.weights, vec![3, 1]);
        assert!(wh.heap.gt(0, 1));
        let a3 = datum("A3");
        let wh = weighted_heap_of_fword(&a3, &FWord::from_printed(&[(0, 1), (2, 1)])).unwrap();
        assert!(!wh.heap.gt(0, 1) && !wh.heap.gt(1, 0));
        assert_eq!(
            weighted_heap_of_fword(&a3, &FWord::from_printed(&[(0, 1), (0, 2)])),
            Err(Error::AdjacentEqual)
        );
        // zero exponents are dropped
        let wh = weighted_heap_of_fword(&b2, &FWord::from_printed(&[(1, 1), (0, 0), (0, 1)])).unwrap_err();
        assert_eq!(wh, Error::AdjacentEqual);
        let wh = weighted_heap_of_fword(&b2, &FWord::from_printed(&[(1, 1), (0, 0), (1, 1)])).unwrap();
        assert_eq!(wh.heap.size(), 2);
    }

    #[test]
    fn embeddings() {
        let b2 = datum("B2");
        let target = heap_of_word(&b2, &word("2 1 2")).unwrap();
        let ident = WeightedHeap {
            heap: target.clone(),
            weights: vec![1, 1, 1],
        };
        let embs = weighted_embeddings(&ident, &target);
        assert!(embs.contains(&LabeledEmbedding {
            images: vec![vec![0], vec![1], vec![2]]
        }));
        let one = weighted_heap_of_fword(&b2, &FWord::from_printed(&[(1, 1)])).unwrap();
        assert_eq!(weighted_embeddings(&one, &target).len(), 2);
        let heavy = weighted_heap_of_fword(&b2, &FWord::from_printed(&[(0, 1), (1, 3)])).unwrap();
        assert!(injective_weighted_embeddings(&heavy, &target).is_empty());
        // all three copies of the top element sit on position 1
        let embs = weighted_embeddings(&heavy, &target);
        assert_eq!(
            embs,
            vec![LabeledEmbedding {
                images: vec![vec![0, 0, 0], vec![1]]
            }]
        );
        assert_eq!(embs[0].image_weights(3), vec![3, 1, 0]);
    }

    #[test]
    fn embedding_copies() {
        // f_2^2 into the chain 2 > 1 > 2: the two copies take both label-2 slots.
        let b2 = datum("B2");
        let target = heap_of_word(&b2, &word("2 1 2")).unwrap();
        let wh = weighted_heap_of_fword(&b2, &FWord::from_printed(&[(1, 2)])).unwrap();
        let embs = injective_weighted_embeddings(&wh, &target);
        assert_eq!(
            embs,
            vec![LabeledEmbedding {
                images: vec![vec![0, 2]]
            }]
        );
        assert_eq!(embs[0].image_weights(3), vec![1, 0, 1]);
        let all = weighted_embeddings(&wh, &target);
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let h = heap_of_word(&datum("A3"), &word("3 2 1 2 3")).unwrap();
        let j = h.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = Heap::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}
