//! Root systems of the simple types, weights in the fundamental-weight basis,
//! and Weyl-word combinatorics. Nodes follow Bourbaki numbering.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::InvalidType(s.to_string())),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i] = 1;
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| k * a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad weight '{s}'"))))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// A word in the simple reflections. `letters[0]` is position 1, i.e. the
/// rightmost letter of `s_{r_l} ... s_{r_1}`. Letters are 0-based node indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeylWord {
    letters: Vec<usize>,
}

impl WeylWord {
    /// Build from letters in position order (position 1 first).
    pub fn from_positions(letters: Vec<usize>) -> Self {
        WeylWord { letters }
    }

    /// Build from letters as printed left to right (0-based).
    pub fn from_printed(printed: &[usize]) -> Self {
        WeylWord {
            letters: printed.iter().rev().copied().collect(),
        }
    }

    /// Parse the printed form with 1-based indices, e.g. `"3 2 1 2 3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let printed = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                let t = t.trim_start_matches(['s', 'S']);
                match t.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::Parse(format!("bad word letter '{t}'"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeylWord::from_printed(&printed))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in position order (position 1 first).
    pub fn positions(&self) -> &[usize] {
        &self.letters
    }

    /// Label at 0-based position `p` (position p+1).
    pub fn letter(&self, p: usize) -> usize {
        self.letters[p]
    }

    /// Letters in printed order (leftmost first).
    pub fn printed(&self) -> Vec<usize> {
        self.letters.iter().rev().copied().collect()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.printed().iter().map(|l| (l + 1).to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for WeylWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeylWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        WeylWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    ctype: CartanType,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    cartan: Vec<Vec<i64>>,
    /// Symmetrizer: `(alpha_i, alpha_j) = sym[i] * cartan[i][j]`.
    sym: Vec<i64>,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
}

fn cartan_matrix(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.family {
        Family::A | Family::B | Family::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Family::G => link(0, 1),
    }
    match t.family {
        // alpha_n short
        Family::B => a[n - 1][n - 2] = -2,
        // alpha_n long
        Family::C => a[n - 2][n - 1] = -2,
        // alpha_1, alpha_2 long
        Family::F => a[2][1] = -2,
        // alpha_1 short, alpha_2 long
        Family::G => a[0][1] = -3,
        _ => {}
    }
    a
}

fn symmetrizer(a: &[Vec<i64>]) -> Vec<i64> {
    // d_i a_ij = d_j a_ji, propagated along the (connected) Dynkin diagram.
    let n = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    d[0] = Some(BigRational::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                let di = d[i].clone().unwrap();
                d[j] = Some(di * BigRational::new(a[i][j].into(), a[j][i].into()));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.unwrap()).collect();
    let lcm = d
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let scaled: Vec<BigInt> = d.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = scaled
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    scaled
        .iter()
        .map(|x| i64::try_from(x / &g).expect("small symmetrizer"))
        .collect()
}

impl RootDatum {
    pub fn new(ctype: CartanType) -> Self {
        let cartan = cartan_matrix(ctype);
        let sym = symmetrizer(&cartan);
        let n = ctype.rank;
        let mut roots: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let p: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
                let mut image = beta.clone();
                image[i] -= p;
                if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) && seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
            roots.push(beta);
        }
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let coroots = roots
            .iter()
            .map(|beta| {
                let norm: i64 = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| beta[i] * beta[j] * sym[i] * cartan[i][j])
                    .sum();
                // beta^vee = 2 beta / (beta, beta), alpha_j = sym_j alpha_j^vee
                (0..n)
                    .map(|j| {
                        let num = 2 * beta[j] * sym[j];
                        debug_assert_eq!(num % norm, 0);
                        num / norm
                    })
                    .collect()
            })
            .collect();
        RootDatum {
            ctype,
            cartan,
            sym,
            positive_roots: roots,
            positive_coroots: coroots,
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ctype
    }

    pub fn rank(&self) -> usize {
        self.ctype.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    /// Whether `s_i` and `s_j` commute (distinct nodes, no edge).
    pub fn commute(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] == 0
    }

    /// Positive roots in simple-root coordinates, ordered by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Coroots matching [`positive_roots`](Self::positive_roots), in simple-coroot coordinates.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    /// Squared length of a root given in simple-root coordinates (short roots of
    /// a simply-laced or the shortest roots otherwise have the smallest value).
    pub fn root_norm(&self, beta: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += beta[i] * beta[j] * self.sym[i] * self.cartan[i][j];
            }
        }
        s
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// `alpha_i` in fundamental-weight coordinates (column i of the Cartan matrix).
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((0..self.rank()).map(|k| self.cartan[k][i]).collect())
    }

    /// A root given in simple-root coordinates, converted to a weight.
    pub fn root_to_weight(&self, beta: &[i64]) -> Weight {
        let n = self.rank();
        Weight(
            (0..n)
                .map(|k| (0..n).map(|j| beta[j] * self.cartan[k][j]).sum())
                .collect(),
        )
    }

    /// `<lambda, beta^vee>` for a coroot in simple-coroot coordinates.
    pub fn pairing(&self, lambda: &Weight, coroot: &[i64]) -> i64 {
        lambda.0.iter().zip(coroot).map(|(a, b)| a * b).sum()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            })
        }
    }

    fn check_weight(&self, lambda: &Weight) -> Result<()> {
        if lambda.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::WeightLength {
                got: lambda.rank(),
                expected: self.rank(),
            })
        }
    }

    /// `s_i lambda = lambda - <lambda, alpha_i^vee> alpha_i`.
    pub fn apply_reflection(&self, i: usize, lambda: &Weight) -> Result<Weight> {
        self.check_index(i)?;
        self.check_weight(lambda)?;
        Ok(self.reflect(i, lambda))
    }

    pub(crate) fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        let p = lambda.0[i];
        Weight(
            lambda
                .0
                .iter()
                .enumerate()
                .map(|(k, &c)| c - p * self.cartan[k][i])
                .collect(),
        )
    }

    /// Apply `w = s_{r_l} ... s_{r_1}` to a weight, position 1 first.
    pub fn act(&self, w: &WeylWord, lambda: &Weight) -> Weight {
        w.positions()
            .iter()
            .fold(lambda.clone(), |acc, &i| self.reflect(i, &acc))
    }

    fn check_letters(&self, w: &WeylWord) -> Result<()> {
        w.positions().iter().try_for_each(|&i| self.check_index(i))
    }

    /// Reduced-word test by tracking the image of rho: appending `s_i` on the
    /// left of `u` is length-increasing iff `<u rho, alpha_i^vee> > 0`.
    pub fn is_reduced(&self, w: &WeylWord) -> bool {
        if self.check_letters(w).is_err() {
            return false;
        }
        let mut img = self.rho();
        for &i in w.positions() {
            if img.0[i] <= 0 {
                return false;
            }
            img = self.reflect(i, &img);
        }
        true
    }

    /// Reduced word for the minimal coset representative `w^P` of `w_0 W_P`,
    /// where `P` corresponds to the index set `parabolic`.
    pub fn minimal_coset_word(&self, parabolic: &BTreeSet<usize>) -> Result<WeylWord> {
        if parabolic.is_empty() {
            return Err(Error::EmptyParabolic);
        }
        for &i in parabolic {
            self.check_index(i)?;
        }
        let mut mu = Weight::zero(self.rank());
        for &i in parabolic {
            mu.0[i] += 1;
        }
        let mut letters = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| mu.0[i] > 0) {
            mu = self.reflect(i, &mu);
            letters.push(i);
        }
        let w = WeylWord::from_positions(letters);
        debug_assert!(self.is_reduced(&w));
        Ok(w)
    }

    /// Reduced word for the longest element.
    pub fn longest_word(&self) -> WeylWord {
        let mut img = self.rho();
        let mut letters = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| img.0[i] > 0) {
            img = self.reflect(i, &img);
            letters.push(i);
        }
        WeylWord::from_positions(letters)
    }

    /// All reduced words of the element represented by `w`, up to `cap`.
    /// Enumerated by DFS over left descents; elements are tracked by their image of rho.
    pub fn reduced_words(&self, w: &WeylWord, cap: usize) -> Result<Vec<WeylWord>> {
        self.check_letters(w)?;
        if !self.is_reduced(w) {
            return Err(Error::NotReduced(w.to_string()));
        }
        let img = self.act(w, &self.rho());
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(w.len());
        self.reduced_words_rec(&img, &mut prefix, cap.max(1), &mut out);
        Ok(out)
    }

    fn reduced_words_rec(&self, img: &Weight, prefix: &mut Vec<usize>, cap: usize, out: &mut Vec<WeylWord>) {
        if out.len() >= cap {
            return;
        }
        if img.0.iter().all(|&c| c == 1) {
            out.push(WeylWord::from_printed(prefix));
            return;
        }
        for i in 0..self.rank() {
            if img.0[i] < 0 {
                prefix.push(i);
                let next = self.reflect(i, img);
                self.reduced_words_rec(&next, prefix, cap, out);
                prefix.pop();
                if out.len() >= cap {
                    return;
                }
            }
        }
    }

    /// Whether two words represent the same group element.
    pub fn same_element(&self, u: &WeylWord, v: &WeylWord) -> bool {
        let rho = self.rho();
        self.act(u, &rho) == self.act(v, &rho)
    }

    /// The involution `sigma_0` with `varpi_{sigma_0(i)} = -w_0 varpi_i`.
    pub fn w0_fundamental_permutation(&self) -> Vec<usize> {
        let w0 = self.longest_word();
        (0..self.rank())
            .map(|i| {
                let img = self.act(&w0, &Weight::fundamental(self.rank(), i)).neg();
                img.0
                    .iter()
                    .position(|&c| c == 1)
                    .expect("permutes fundamental weights")
            })
            .collect()
    }

    pub fn is_minuscule(&self, k: usize) -> bool {
        k < self.rank() && self.positive_coroots.iter().all(|c| c[k] <= 1)
    }

    /// Nodes `k` whose fundamental weight is minuscule.
    pub fn minuscule_nodes(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&k| self.is_minuscule(k)).collect()
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<BigInt> {
        self.check_weight(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let rho = self.rho();
        let shifted = lambda.add(&rho);
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for c in &self.positive_coroots {
            num *= self.pairing(&shifted, c);
            den *= self.pairing(&rho, c);
        }
        Ok(num / den)
    }

    /// Height of `varpi - w_0 varpi` in the simple-root basis.
    pub fn lowering_depth(&self, lambda: &Weight) -> i64 {
        let low = self.act(&self.longest_word(), lambda);
        let diff = lambda.sub(&low);
        self.weight_to_root_coords(&diff).map(|c| c.iter().sum()).unwrap_or(0)
    }

    /// Express a weight in simple-root coordinates, if integral there.
    pub fn weight_to_root_coords(&self, mu: &Weight) -> Option<Vec<i64>> {
        // Solve cartan^T-ish system: mu_k = sum_j c_j cartan[k][j].
        let n = self.rank();
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|k| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|j| BigRational::from_integer(self.cartan[k][j].into()))
                    .collect();
                row.push(BigRational::from_integer(mu.0[k].into()));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=n {
                        let v = &m[col][c] * &f;
                        m[r][c] = &m[r][c] - v;
                    }
                }
            }
        }
        m.iter()
            .map(|row| {
                let v = &row[n];
                if v.is_integer() {
                    i64::try_from(v.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}
