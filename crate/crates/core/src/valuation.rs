//! Torus-orbit expansion of the highest-weight vector, coordinate
//! restrictions to the big cell, and the degrevlex valuation.
//!
//! Variables `a_1..a_ℓ` are indexed by heap positions; exponent vectors are
//! printed in the order `(a_1, ..., a_ℓ)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heap::{weighted_embeddings, weighted_heap_of_fword, Heap, WeightedHeap};
use crate::linalg::Q;
use crate::polytope::LatticePolytope;
use crate::repmod::{FWord, ModuleVector, WeightModule};
use crate::rootdata::WeylWord;

pub type Exponent = Vec<u32>;

/// Monomial order used to pick the minimal term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    /// Degree first, then the larger exponent of `a_1`, `a_2`, ... is smaller.
    #[default]
    Degrevlex,
    /// Degree first, then the smaller exponent of `a_ℓ`, `a_{ℓ-1}`, ... is smaller.
    Deglex,
}

impl TermOrder {
    pub fn cmp(&self, m: &[u32], n: &[u32]) -> Ordering {
        let dm: u32 = m.iter().sum();
        let dn: u32 = n.iter().sum();
        if dm != dn {
            return dm.cmp(&dn);
        }
        match self {
            TermOrder::Degrevlex => {
                for (x, y) in m.iter().zip(n) {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
            TermOrder::Deglex => {
                for (x, y) in m.iter().zip(n).rev() {
                    if x != y {
                        return x.cmp(y);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Polynomial in `a_1..a_ℓ` with rational coefficients and no zero terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPolynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl TorusPolynomial {
    pub fn zero(nvars: usize) -> Self {
        TorusPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn monomial(exp: Exponent, c: Q) -> Self {
        let mut p = Self::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable `a_p` (0-based `p`).
    pub fn var(nvars: usize, p: usize) -> Self {
        let mut e = vec![0; nvars];
        e[p] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &TorusPolynomial, c: &Q) {
        for (e, v) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
            *entry += v * c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn add(&self, other: &TorusPolynomial) -> TorusPolynomial {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &TorusPolynomial) -> TorusPolynomial {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> TorusPolynomial {
        let mut out = Self::zero(self.nvars);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        }
        out
    }

    pub fn mul(&self, other: &TorusPolynomial) -> TorusPolynomial {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e).or_insert_with(Q::zero);
                *entry += c1 * c2;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Multiply by `c · a_p^k`.
    pub fn mul_var_power(&self, p: usize, k: u32, c: &Q) -> TorusPolynomial {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            let mut e = e.clone();
            e[p] += k;
            out.terms.insert(e, v * c);
        }
        out
    }

    /// Minimal term under `order`, as `(exponent, coefficient)`.
    pub fn min_term(&self, order: TermOrder) -> Option<(&Exponent, &Q)> {
        self.terms.iter().min_by(|(a, _), (b, _)| order.cmp(a, b))
    }
}

impl fmt::Display for TorusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(p, &k)| {
                    if k == 1 {
                        format!("a{}", p + 1)
                    } else {
                        format!("a{}^{}", p + 1, k)
                    }
                })
                .collect();
            let sep = if first { "" } else { " + " };
            first = false;
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{sep}{c}")?,
                (false, true) => write!(f, "{sep}{}", mono.join("*"))?,
                (false, false) => write!(f, "{sep}{c}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Degrevlex-minimal exponent vector.
pub fn degrevlex_min(p: &TorusPolynomial) -> Result<Exponent> {
    valuation_with(p, TermOrder::Degrevlex)
}

pub fn valuation_with(p: &TorusPolynomial, order: TermOrder) -> Result<Exponent> {
    p.min_term(order).map(|(e, _)| e.clone()).ok_or(Error::ZeroPolynomial)
}

/// Compact printing: digits run together when all entries are below 10.
pub fn format_exponent(e: &[u32]) -> String {
    if e.iter().all(|&x| x < 10) {
        e.iter().map(|x| x.to_string()).collect()
    } else {
        let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Coefficients of `u₋ · v_ϖ` over the module basis.
#[derive(Clone, Debug)]
pub struct OrbitVector {
    pub coeffs: Vec<TorusPolynomial>,
}

fn check_support(m: &WeightModule, h: &Heap) -> Result<()> {
    if h.size() == 0 {
        return Ok(());
    }
    let support = m.highest_weight().support();
    // right descents of the word are the maximal heap elements
    let tops_ok = (0..h.size())
        .filter(|&p| h.greater_mask(p) == 0)
        .all(|p| support.contains(&h.label(p)));
    let covered = support.iter().all(|i| h.labels().contains(i));
    if tops_ok && covered {
        Ok(())
    } else {
        Err(Error::SupportMismatch)
    }
}

/// Apply the truncated exponentials `exp(a_p f_{label(p)})` for `p = 1..ℓ`
/// to the highest-weight vector.
pub fn torus_orbit(m: &WeightModule, h: &Heap) -> Result<OrbitVector> {
    check_support(m, h)?;
    let nvars = h.size();
    let dim = m.dim();
    let mut cur: Vec<TorusPolynomial> = vec![TorusPolynomial::zero(nvars); dim];
    cur[0] = TorusPolynomial::one(nvars);
    for p in 0..nvars {
        let i = h.label(p);
        let mut total = cur.clone();
        let mut term = cur;
        let mut k: u32 = 0;
        let mut fact = BigInt::one();
        loop {
            k += 1;
            fact *= k;
            let mut next = vec![TorusPolynomial::zero(nvars); dim];
            let mut any = false;
            for (src, poly) in term.iter().enumerate() {
                if poly.is_zero() {
                    continue;
                }
                for (dst, c) in m.f_column(i, src) {
                    next[dst].add_assign_scaled(poly, c);
                    any = true;
                }
            }
            if !any || next.iter().all(TorusPolynomial::is_zero) {
                break;
            }
            let c = Q::new(BigInt::one(), fact.clone());
            for (t, n) in total.iter_mut().zip(&next) {
                if !n.is_zero() {
                    *t = t.add(&n.mul_var_power(p, k, &c));
                }
            }
            term = next;
        }
        cur = total;
    }
    Ok(OrbitVector { coeffs: cur })
}

/// Restriction of the coordinate `p_b` to the big cell.
pub fn coordinate_restriction(orbit: &OrbitVector, b: usize) -> TorusPolynomial {
    orbit.coeffs[b].clone()
}

#[derive(Clone, Debug)]
pub struct ValuationEntry {
    /// Basis vector whose coordinate produced this value.
    pub basis: usize,
    pub valuation: Exponent,
    /// Reduced representative realizing the value.
    pub poly: TorusPolynomial,
}

/// Valuations of the degree-one part, by elimination on minimal terms within
/// each weight space.
pub fn degree_one_valuations(m: &WeightModule, h: &Heap) -> Result<Vec<ValuationEntry>> {
    degree_one_valuations_with(m, h, TermOrder::Degrevlex)
}

pub fn degree_one_valuations_with(m: &WeightModule, h: &Heap, order: TermOrder) -> Result<Vec<ValuationEntry>> {
    let orbit = torus_orbit(m, h)?;
    let mut out = Vec::with_capacity(m.dim());
    let mut spaces: Vec<&[usize]> = m.weight_spaces().map(|(_, s)| s).collect();
    spaces.sort_by_key(|s| s[0]);
    for space in spaces {
        let mut reps: BTreeMap<Exponent, TorusPolynomial> = BTreeMap::new();
        let mut owners: Vec<(Exponent, usize)> = Vec::new();
        for &b in space {
            let mut cand = coordinate_restriction(&orbit, b);
            loop {
                let Some((e, c)) = cand.min_term(order).map(|(e, c)| (e.clone(), c.clone())) else {
                    break;
                };
                match reps.get(&e) {
                    Some(rep) => {
                        let factor = -(c / rep.coeff(&e));
                        cand.add_assign_scaled(rep, &factor);
                    }
                    None => {
                        reps.insert(e.clone(), cand.clone());
                        owners.push((e, b));
                        break;
                    }
                }
            }
        }
        for (e, b) in owners {
            let poly = reps.remove(&e).expect("recorded");
            out.push(ValuationEntry {
                basis: b,
                valuation: e,
                poly,
            });
        }
    }
    let mut distinct: Vec<&Exponent> = out.iter().map(|v| &v.valuation).collect();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != m.dim() {
        return Err(Error::ValuationCount {
            found: distinct.len(),
            expected: m.dim(),
        });
    }
    Ok(out)
}

/// Convex hull of the degree-one valuations.
pub fn chevalley_polytope(m: &WeightModule, h: &Heap) -> Result<LatticePolytope> {
    let vals = degree_one_valuations(m, h)?;
    let pts: Vec<Vec<i64>> = vals
        .iter()
        .map(|v| v.valuation.iter().map(|&x| i64::from(x)).collect())
        .collect();
    LatticePolytope::from_points(&pts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationRow {
    pub basis_label: usize,
    pub fword: String,
    pub valuation: Vec<u32>,
}

pub fn valuation_table(m: &WeightModule, vals: &[ValuationEntry]) -> Vec<ValuationRow> {
    vals.iter()
        .map(|v| ValuationRow {
            basis_label: v.basis + 1,
            fword: m.basis()[v.basis].to_string(),
            valuation: v.valuation.clone(),
        })
        .collect()
}

pub const ORACLE_DIMENSION_CAP: usize = 64;

/// Restriction of `p_b` assembled from labeled weighted embeddings of
/// weighted heaps of f-words into `h`.
pub fn embedding_restriction_oracle(m: &WeightModule, b: usize, h: &Heap) -> Result<TorusPolynomial> {
    if m.dim() > ORACLE_DIMENSION_CAP {
        return Err(Error::ScaleCap(format!(
            "oracle limited to dimension {ORACLE_DIMENSION_CAP}"
        )));
    }
    check_support(m, h)?;
    let datum = m.datum();
    let nvars = h.size();
    let mut label_budget: HashMap<usize, u32> = HashMap::new();
    for &l in h.labels() {
        *label_budget.entry(l).or_default() += 1;
    }
    // f-words reaching nonzero vectors, one representative per weighted heap
    let mut classes: BTreeMap<Vec<(usize, u32)>, (WeightedHeap, Q)> = BTreeMap::new();
    let mut stack: Vec<(FWord, ModuleVector)> = vec![(FWord::empty(), ModuleVector::unit(m.dim(), 0))];
    while let Some((word, vec)) = stack.pop() {
        let wh = weighted_heap_of_fword(datum, &word)?;
        let key = wh.canonical_key();
        classes.entry(key).or_insert_with(|| (wh, vec.0[b].clone()));
        let last = word.factors().last().map(|&(i, _)| i);
        // each factor becomes one heap element, which needs a target position
        let mut used: HashMap<usize, u32> = HashMap::new();
        for &(l, _) in word.factors() {
            *used.entry(l).or_default() += 1;
        }
        for i in 0..datum.rank() {
            if Some(i) == last {
                continue;
            }
            let budget = label_budget.get(&i).copied().unwrap_or(0);
            if used.get(&i).copied().unwrap_or(0) >= budget {
                continue;
            }
            let mut v = vec.clone();
            let mut d = 0u32;
            loop {
                v = m.act_generator(crate::repmod::Generator::F, i, &v)?;
                d += 1;
                if v.is_zero() {
                    break;
                }
                let mut factors = word.factors().to_vec();
                factors.push((i, d));
                stack.push((FWord::from_factors(factors), v.clone()));
            }
        }
    }
    let mut out = TorusPolynomial::zero(nvars);
    for (key, (wh, coeff)) in &classes {
        if coeff.is_zero() {
            continue;
        }
        for emb in weighted_embeddings(wh, h) {
            let k = emb.image_weights(nvars);
            let merged = merged_word(h, &k);
            let canon = weighted_heap_of_fword(datum, &merged)?.canonical_key();
            if &canon != key {
                continue;
            }
            let mut denom = BigInt::one();
            for &x in &k {
                for t in 2..=x {
                    denom *= t;
                }
            }
            let c = coeff / Q::from_integer(denom);
            out.add_assign_scaled(&TorusPolynomial::monomial(k, Q::one()), &c);
        }
    }
    Ok(out)
}

/// `f_{r_ℓ}^{k_ℓ} ... f_{r_1}^{k_1}` with zero exponents dropped and equal
/// neighbours merged.
fn merged_word(h: &Heap, k: &[u32]) -> FWord {
    let factors: Vec<(usize, u32)> = (0..h.size()).map(|p| (h.label(p), k[p])).collect();
    FWord::from_factors(factors).canonical()
}

/// Convenience: the valuation table for a word in a module.
pub fn valuations_for_word(m: &WeightModule, w: &WeylWord) -> Result<Vec<ValuationEntry>> {
    let h = crate::heap::heap_of_word(m.datum(), w)?;
    degree_one_valuations(m, &h)
}
