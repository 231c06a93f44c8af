//! Irreducible highest-weight modules over the rationals, built from the
//! Shapovalov form on f-words.
//!
//! Basis vectors are images `f_w · v` of f-words on the highest-weight vector.
//! Each weight space keeps a maximal set of candidates with nonsingular Gram
//! matrix, which realizes the irreducible quotient without Serre relations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heap::{Filter, Heap};
use crate::linalg::{self, q, solve, Q};
use crate::rootdata::{RootDatum, Weight};

pub const DEFAULT_DIMENSION_CAP: usize = 512;

/// A monomial `f_{i_L}^{d_L} ... f_{i_1}^{d_1}`, stored in application order
/// (`factors[0]` is `(i_1, d_1)`). Indices are 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FWord {
    factors: Vec<(usize, u32)>,
}

impl FWord {
    pub fn empty() -> Self {
        FWord::default()
    }

    /// Factors as printed, leftmost first. No merging or validation.
    pub fn from_printed(printed: &[(usize, u32)]) -> Self {
        FWord {
            factors: printed.iter().rev().copied().collect(),
        }
    }

    /// Factors in application order. No merging or validation.
    pub fn from_factors(factors: Vec<(usize, u32)>) -> Self {
        FWord { factors }
    }

    /// Letters in application order, each repeated by its exponent.
    pub fn from_letters(letters: &[usize]) -> Self {
        let mut w = FWord::empty();
        for &l in letters {
            w = w.apply(l);
        }
        w
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    /// `f_i · self`, merging with the leftmost factor when it has index `i`.
    pub fn apply(&self, i: usize) -> FWord {
        let mut factors = self.factors.clone();
        match factors.last_mut() {
            Some((j, d)) if *j == i => *d += 1,
            _ => factors.push((i, 1)),
        }
        FWord { factors }
    }

    /// Drop zero exponents and merge equal neighbours.
    pub fn canonical(&self) -> FWord {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &(i, d) in &self.factors {
            if d == 0 {
                continue;
            }
            match out.last_mut() {
                Some((j, e)) if *j == i => *e += d,
                _ => out.push((i, d)),
            }
        }
        FWord { factors: out }
    }

    pub fn letters(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|&(i, d)| std::iter::repeat(i).take(d as usize))
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, d)| d).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Letters as printed, leftmost first.
    pub fn printed_letters(&self) -> Vec<usize> {
        let mut l = self.letters();
        l.reverse();
        l
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut printed = Vec::new();
        for tok in s.split_whitespace() {
            let tok = tok.trim_start_matches('f');
            let (i, d) = match tok.split_once('^') {
                Some((i, d)) => (i, d),
                None => (tok, "1"),
            };
            let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad f-word token {tok}")))?;
            let d: u32 = d.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok}")))?;
            if i == 0 {
                return Err(Error::Parse("generator indices are 1-based".into()));
            }
            printed.push((i - 1, d));
        }
        Ok(FWord::from_printed(&printed).canonical())
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .rev()
            .map(|&(i, d)| {
                if d == 1 {
                    format!("f{}", i + 1)
                } else {
                    format!("f{}^{}", i + 1, d)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Coordinates in the module basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector(pub Vec<Q>);

impl ModuleVector {
    pub fn zero(dim: usize) -> Self {
        ModuleVector(vec![Q::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[k] = Q::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    H,
}

type Sparse = BTreeMap<usize, Q>;

#[derive(Clone, Debug)]
pub struct WeightModule {
    datum: RootDatum,
    highest: Weight,
    basis: Vec<FWord>,
    weights: Vec<Weight>,
    local: Vec<usize>,
    spaces: BTreeMap<Vec<i64>, Vec<usize>>,
    gram: BTreeMap<Vec<i64>, Vec<Vec<Q>>>,
    f_action: Vec<Vec<Sparse>>,
    e_action: Vec<Vec<Sparse>>,
}

struct Candidate {
    word: FWord,
    gen: usize,
    parent: usize,
}

impl WeightModule {
    pub fn build(datum: &RootDatum, varpi: &Weight) -> Result<Self> {
        Self::build_with_cap(datum, varpi, DEFAULT_DIMENSION_CAP)
    }

    pub fn build_with_cap(datum: &RootDatum, varpi: &Weight, cap: usize) -> Result<Self> {
        let rank = datum.rank();
        if varpi.rank() != rank {
            return Err(Error::WeightLength {
                got: varpi.rank(),
                expected: rank,
            });
        }
        if !varpi.is_dominant() {
            return Err(Error::NotDominant(varpi.to_string()));
        }
        let projected = datum.weyl_dimension(varpi)?;
        let projected: u128 = projected.try_into().unwrap_or(u128::MAX);
        if projected > cap as u128 {
            return Err(Error::DimensionCap { dim: projected, cap });
        }
        let mut m = WeightModule {
            datum: datum.clone(),
            highest: varpi.clone(),
            basis: vec![FWord::empty()],
            weights: vec![varpi.clone()],
            local: vec![0],
            spaces: BTreeMap::from([(varpi.0.clone(), vec![0])]),
            gram: BTreeMap::from([(varpi.0.clone(), vec![vec![Q::one()]])]),
            f_action: vec![Vec::new(); rank],
            e_action: vec![vec![Sparse::new()]; rank],
        };
        let depth = datum.lowering_depth(varpi).max(0) as usize;
        let mut prev: Vec<usize> = vec![0];
        for _ in 1..=depth {
            let next = m.grow_level(&prev);
            if next.is_empty() {
                break;
            }
            prev = next;
        }
        for i in 0..rank {
            m.f_action[i].resize(m.basis.len(), Sparse::new());
        }
        Ok(m)
    }

    /// Adds the next level of basis vectors, filling the f-action on `prev`
    /// and the e-action on the new vectors.
    fn grow_level(&mut self, prev: &[usize]) -> Vec<usize> {
        let rank = self.datum.rank();
        let mut cands: Vec<Candidate> = Vec::new();
        for &b in prev {
            for i in 0..rank {
                cands.push(Candidate {
                    word: self.basis[b].apply(i),
                    gen: i,
                    parent: b,
                });
            }
        }
        cands.sort_by(|x, y| x.word.printed_letters().cmp(&y.word.printed_letters()));
        let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (k, c) in cands.iter().enumerate() {
            let mu = self.weights[c.parent].sub(&self.datum.simple_root(c.gen));
            groups.entry(mu.0).or_default().push(k);
        }

        let mut new_indices = Vec::new();
        // candidate index -> (weight key, pairings with kept vectors)
        let mut columns: HashMap<usize, (Vec<i64>, Vec<Q>)> = HashMap::new();
        for (mu, members) in &groups {
            let n = members.len();
            let mut c = vec![vec![Q::zero(); n]; n];
            for a in 0..n {
                for b in a..n {
                    let v = self.pair_candidates(&cands[members[a]], &cands[members[b]]);
                    c[a][b] = v.clone();
                    c[b][a] = v;
                }
            }
            let mut kept: Vec<usize> = Vec::new();
            for k in 0..n {
                let mut trial = kept.clone();
                trial.push(k);
                let sub: Vec<Vec<Q>> = trial
                    .iter()
                    .map(|&r| trial.iter().map(|&s| c[r][s].clone()).collect())
                    .collect();
                if linalg::rank(&sub) == trial.len() {
                    kept = trial;
                }
            }
            if kept.is_empty() {
                continue;
            }
            let g: Vec<Vec<Q>> = kept
                .iter()
                .map(|&r| kept.iter().map(|&s| c[r][s].clone()).collect())
                .collect();
            let mut idxs = Vec::new();
            for (loc, &k) in kept.iter().enumerate() {
                let cand = &cands[members[k]];
                let idx = self.basis.len();
                self.basis.push(cand.word.clone());
                self.weights.push(Weight(mu.clone()));
                self.local.push(loc);
                idxs.push(idx);
            }
            for (a, &cidx) in members.iter().enumerate() {
                let col = kept.iter().map(|&r| c[r][a].clone()).collect();
                columns.insert(cidx, (mu.clone(), col));
            }
            new_indices.extend(idxs.iter().copied());
            self.spaces.insert(mu.clone(), idxs);
            self.gram.insert(mu.clone(), g);
        }

        // f-action on the previous level.
        for i in 0..rank {
            self.f_action[i].resize(self.basis.len(), Sparse::new());
        }
        for (k, cand) in cands.iter().enumerate() {
            let mut image = Sparse::new();
            if let Some((mu, col)) = columns.get(&k) {
                if let Some(space) = self.spaces.get(mu) {
                    let x = solve(&self.gram[mu], col).expect("kept Gram matrix is nonsingular");
                    for (&idx, v) in space.iter().zip(x) {
                        if !v.is_zero() {
                            image.insert(idx, v);
                        }
                    }
                }
            }
            self.f_action[cand.gen][cand.parent] = image;
        }

        // e-action on the new vectors: e_k f_i b = f_i e_k b + δ_ki h_i b.
        for &x in &new_indices {
            let word = &self.basis[x];
            let cand = cands
                .iter()
                .find(|c| &c.word == word)
                .expect("basis vector comes from a candidate");
            let (i, b) = (cand.gen, cand.parent);
            for k in 0..rank {
                let mut out = self.apply_sparse(Generator::F, i, &self.e_action[k][b].clone());
                if k == i {
                    let h = q(self.weights[b].0[i]);
                    if !h.is_zero() {
                        *out.entry(b).or_insert_with(Q::zero) += h;
                    }
                }
                out.retain(|_, v| !v.is_zero());
                if self.e_action[k].len() <= x {
                    self.e_action[k].resize(x + 1, Sparse::new());
                }
                self.e_action[k][x] = out;
            }
        }
        new_indices
    }

    /// `⟨f_i b, f_j c⟩ = ⟨b, f_j e_i c⟩ + δ_ij ⟨wt c, α_i∨⟩ ⟨b, c⟩`.
    fn pair_candidates(&self, x: &Candidate, y: &Candidate) -> Q {
        let (i, b) = (x.gen, x.parent);
        let (j, c) = (y.gen, y.parent);
        let ec = self.e_action[i][c].clone();
        let mut v = self.apply_sparse(Generator::F, j, &ec);
        if i == j {
            *v.entry(c).or_insert_with(Q::zero) += q(self.weights[c].0[i]);
        }
        self.pair_basis_with(b, &v)
    }

    fn pair_basis_with(&self, b: usize, v: &Sparse) -> Q {
        let key = &self.weights[b].0;
        let g = &self.gram[key];
        let mut s = Q::zero();
        for (&k, coeff) in v {
            if &self.weights[k].0 == key {
                s += coeff * &g[self.local[b]][self.local[k]];
            }
        }
        s
    }

    fn apply_sparse(&self, kind: Generator, i: usize, v: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (&k, coeff) in v {
            match kind {
                Generator::H => {
                    let h = q(self.weights[k].0[i]) * coeff;
                    if !h.is_zero() {
                        out.insert(k, h);
                    }
                }
                Generator::E | Generator::F => {
                    let table = if kind == Generator::E {
                        &self.e_action
                    } else {
                        &self.f_action
                    };
                    if let Some(col) = table[i].get(k) {
                        for (&t, a) in col {
                            *out.entry(t).or_insert_with(Q::zero) += a * coeff;
                        }
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FWord] {
        &self.basis
    }

    pub fn weight_of(&self, k: usize) -> &Weight {
        &self.weights[k]
    }

    pub fn weight_space(&self, mu: &Weight) -> &[usize] {
        self.spaces.get(&mu.0).map_or(&[], |v| v.as_slice())
    }

    /// Distinct weights with their basis indices.
    pub fn weight_spaces(&self) -> impl Iterator<Item = (Weight, &[usize])> {
        self.spaces.iter().map(|(k, v)| (Weight(k.clone()), v.as_slice()))
    }

    pub fn gram(&self, mu: &Weight) -> Option<&Vec<Vec<Q>>> {
        self.gram.get(&mu.0)
    }

    /// Shapovalov form of two module vectors.
    pub fn pairing(&self, x: &ModuleVector, y: &ModuleVector) -> Q {
        let mut s = Q::zero();
        for (key, idxs) in &self.spaces {
            let g = &self.gram[key];
            for (a, &i) in idxs.iter().enumerate() {
                if x.0[i].is_zero() {
                    continue;
                }
                for (b, &j) in idxs.iter().enumerate() {
                    if !y.0[j].is_zero() {
                        s += &x.0[i] * &y.0[j] * &g[a][b];
                    }
                }
            }
        }
        s
    }

    /// Image of basis vector `k` under `f_i`, as sparse `(index, coefficient)`.
    pub fn f_column(&self, i: usize, k: usize) -> impl Iterator<Item = (usize, &Q)> {
        self.f_action[i][k].iter().map(|(&t, v)| (t, v))
    }

    pub fn e_column(&self, i: usize, k: usize) -> impl Iterator<Item = (usize, &Q)> {
        self.e_action[i][k].iter().map(|(&t, v)| (t, v))
    }

    pub fn act_generator(&self, kind: Generator, i: usize, v: &ModuleVector) -> Result<ModuleVector> {
        if i >= self.datum.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.datum.rank(),
            });
        }
        if v.0.len() != self.dim() {
            return Err(Error::DimensionMismatch(v.0.len(), self.dim()));
        }
        let sparse: Sparse =
            v.0.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
        let out = self.apply_sparse(kind, i, &sparse);
        let mut dense = ModuleVector::zero(self.dim());
        for (k, c) in out {
            dense.0[k] = c;
        }
        Ok(dense)
    }

    /// Apply an f-word to a vector, rightmost factor first.
    pub fn act_fword(&self, w: &FWord, v: &ModuleVector) -> Result<ModuleVector> {
        let mut cur = v.clone();
        for l in w.letters() {
            cur = self.act_generator(Generator::F, l, &cur)?;
        }
        Ok(cur)
    }

    /// The construction basis, each vector paired with its f-word.
    pub fn chevalley_basis(&self) -> Vec<(FWord, ModuleVector)> {
        self.basis
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), ModuleVector::unit(self.dim(), k)))
            .collect()
    }

    pub fn summary(&self) -> ModuleSummary {
        ModuleSummary {
            cartan_type: self.datum.cartan_type().to_string(),
            highest_weight: self.highest.0.clone(),
            dimension: self.dim(),
            basis: self
                .basis
                .iter()
                .zip(&self.weights)
                .map(|(w, mu)| BasisEntry {
                    word: w.to_string(),
                    weight: mu.0.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub word: String,
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSummary {
    pub cartan_type: String,
    pub highest_weight: Vec<i64>,
    pub dimension: usize,
    pub basis: Vec<BasisEntry>,
}

/// For a minuscule module, the map from filters of the minuscule poset to the
/// basis vector of weight `ϖ − Σ_{p∈F} α_{label(p)}`.
pub fn minuscule_filter_bijection(m: &WeightModule, mp: &Heap) -> Result<BTreeMap<Filter, usize>> {
    let datum = m.datum();
    let support: Vec<usize> = m.highest_weight().support().into_iter().collect();
    let ok = support.len() == 1 && m.highest_weight().0[support[0]] == 1 && datum.is_minuscule(support[0]);
    if !ok {
        return Err(Error::NotMinuscule {
            ctype: datum.cartan_type().to_string(),
            node: support.first().map_or(0, |k| k + 1),
        });
    }
    if let Some(bad) = m.spaces.values().map(Vec::len).find(|&d| d > 1) {
        return Err(Error::MultiplicityTooLarge(bad));
    }
    let mut out = BTreeMap::new();
    for f in mp.filters() {
        let mut mu = m.highest_weight().clone();
        for p in f.members() {
            mu = mu.sub(&datum.simple_root(mp.label(p)));
        }
        let idx = m
            .weight_space(&mu)
            .first()
            .copied()
            .ok_or_else(|| Error::Parse(format!("filter weight {mu} is not a weight of the module")))?;
        out.insert(f, idx);
    }
    if out.len() != m.dim() {
        return Err(Error::DimensionMismatch(out.len(), m.dim()));
    }
    Ok(out)
}

/// `⟨f_u v_λ, f_w v_λ⟩` on the Verma module, computed directly on free words.
pub fn shapovalov_pairing(datum: &RootDatum, lambda: &Weight, u: &FWord, w: &FWord) -> Result<Q> {
    if lambda.rank() != datum.rank() {
        return Err(Error::WeightLength {
            got: lambda.rank(),
            expected: datum.rank(),
        });
    }
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    // words in application order
    let mut state: HashMap<Vec<usize>, Q> = HashMap::from([(w.letters(), Q::one())]);
    for &i in u.printed_letters().iter() {
        let mut next: HashMap<Vec<usize>, Q> = HashMap::new();
        for (word, coeff) in &state {
            let mut mu = lambda.clone();
            for (t, &l) in word.iter().enumerate() {
                if l == i {
                    let h = mu.0[i];
                    if h != 0 {
                        let mut shorter = word.clone();
                        shorter.remove(t);
                        *next.entry(shorter).or_insert_with(Q::zero) += coeff * q(h);
                    }
                }
                mu = mu.sub(&datum.simple_root(l));
            }
        }
        next.retain(|_, v| !v.is_zero());
        state = next;
    }
    Ok(state.remove(&Vec::new()).unwrap_or_else(Q::zero))
}
