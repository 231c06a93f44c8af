//! Instance-level checks: the degree formula against polytope volumes,
//! lattice-point and decomposition tests, the minuscule suite and the
//! string parametrization of minuscule modules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heap::{heap_of_word, Heap};
use crate::linalg::Q;
use crate::polytope::{idp_check, minkowski_sum, order_polytope, IdpReport, LatticePolytope};
use crate::repmod::WeightModule;
use crate::rootdata::{CartanType, RootDatum, Weight, WeylWord};
use crate::valuation::{degree_one_valuations, ValuationEntry};

/// A triple (G/P, ϖ, word for w^P).
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub datum: RootDatum,
    pub parabolic: BTreeSet<usize>,
    pub varpi: Weight,
    pub word: WeylWord,
}

impl InstanceSpec {
    /// Validates the data; `word = None` picks the minimal coset word.
    pub fn new(ctype: CartanType, parabolic: BTreeSet<usize>, varpi: Weight, word: Option<WeylWord>) -> Result<Self> {
        let datum = RootDatum::new(ctype);
        if parabolic.is_empty() {
            return Err(Error::EmptyParabolic);
        }
        if let Some(&i) = parabolic.iter().find(|&&i| i >= datum.rank()) {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: datum.rank(),
            });
        }
        if varpi.rank() != datum.rank() {
            return Err(Error::WeightLength {
                got: varpi.rank(),
                expected: datum.rank(),
            });
        }
        if !varpi.is_dominant() {
            return Err(Error::NotDominant(varpi.to_string()));
        }
        if varpi.support() != parabolic {
            return Err(Error::SupportMismatch);
        }
        let coset = datum.minimal_coset_word(&parabolic)?;
        let word = match word {
            None => coset,
            Some(w) => {
                if !datum.is_reduced(&w) {
                    return Err(Error::NotReduced(w.to_string()));
                }
                if !datum.same_element(&w, &coset) {
                    return Err(Error::WrongCosetWord);
                }
                w
            }
        };
        Ok(InstanceSpec {
            datum,
            parabolic,
            varpi,
            word,
        })
    }

    pub fn heap(&self) -> Result<Heap> {
        heap_of_word(&self.datum, &self.word)
    }

    pub fn module(&self) -> Result<WeightModule> {
        WeightModule::build(&self.datum, &self.varpi)
    }

    pub fn label(&self) -> String {
        let p: Vec<String> = self.parabolic.iter().map(|i| (i + 1).to_string()).collect();
        format!(
            "{} P{{{}}} weight {} word \"{}\"",
            self.datum.cartan_type(),
            p.join(","),
            self.varpi,
            self.word
        )
    }
}

/// Borel–Hirzebruch degree of `G/P` in `P(V_ϖ)`.
pub fn bh_degree(datum: &RootDatum, parabolic: &BTreeSet<usize>, varpi: &Weight) -> Result<BigInt> {
    if varpi.rank() != datum.rank() {
        return Err(Error::WeightLength {
            got: varpi.rank(),
            expected: datum.rank(),
        });
    }
    if !varpi.is_dominant() {
        return Err(Error::NotDominant(varpi.to_string()));
    }
    if !varpi.support().is_subset(parabolic) {
        return Err(Error::SupportMismatch);
    }
    let rho = datum.rho();
    let mut dim = 0u64;
    let mut prod = Q::one();
    for c in datum.positive_coroots() {
        if parabolic.iter().any(|&i| c[i] != 0) {
            dim += 1;
        }
        let num = datum.pairing(varpi, c);
        if num != 0 {
            prod *= Q::new(BigInt::from(num), BigInt::from(datum.pairing(&rho, c)));
        }
    }
    let mut fact = BigInt::one();
    for t in 2..=dim {
        fact *= t;
    }
    let deg = prod * Q::from_integer(fact);
    if !deg.is_integer() || deg <= Q::from_integer(BigInt::from(0)) {
        return Err(Error::NonIntegralDegree(deg.to_string()));
    }
    Ok(deg.to_integer())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NobodyCheck {
    pub degree: String,
    pub volume: String,
    pub nobody_pass: bool,
    /// `equal`, `strict` (volume below degree) or `inconsistent`.
    pub containment: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhovanskiiCheck {
    pub lattice_points_are_valuations: bool,
    pub idp: IdpReport,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFactor {
    /// 1-based node `j` of the fundamental weight.
    pub node: usize,
    pub word: String,
    /// Positions of the word `bs` (1-based, position 1 rightmost) receiving the
    /// factor's coordinates `a_1, a_2, ...`.
    pub positions: Vec<usize>,
    pub vertices: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub witness: Option<Vec<DecompositionFactor>>,
    pub combinations_tried: usize,
    /// Set when a cap cut the search short.
    pub truncated: bool,
}

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub reduced_words: usize,
    pub occurrences: usize,
    pub combinations: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            reduced_words: 10_000,
            occurrences: 10_000,
            combinations: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationOutput {
    pub basis_label: usize,
    pub fword: String,
    pub weight: Vec<i64>,
    pub valuation: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub cartan_type: String,
    pub parabolic: Vec<usize>,
    pub weight: Vec<i64>,
    pub word: String,
    pub module_dimension: usize,
    pub valuations: Vec<ValuationOutput>,
    pub vertices: Vec<Vec<i64>>,
    pub degree: String,
    pub volume: String,
    pub nobody_pass: bool,
    pub containment: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub khovanskii: Option<KhovanskiiCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idp: Option<IdpReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_points_are_valuations: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_witness: Option<DecompositionCheck>,
}

impl VerificationReport {
    /// Overall verdict: volume equals degree and every requested sub-check passed.
    pub fn passed(&self) -> bool {
        self.nobody_pass
            && self.khovanskii.as_ref().map_or(true, |k| k.pass)
            && self
                .decomposition_witness
                .as_ref()
                .map_or(true, |d| d.witness.is_some())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p: Vec<String> = self.parabolic.iter().map(|i| i.to_string()).collect();
        let w: Vec<String> = self.weight.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(
            s,
            "type {}  parabolic {{{}}}  weight ({})",
            self.cartan_type,
            p.join(","),
            w.join(",")
        );
        let _ = writeln!(s, "word {}", self.word);
        let _ = writeln!(s, "module dimension {}", self.module_dimension);
        let _ = writeln!(s, "valuations:");
        for v in &self.valuations {
            let _ = writeln!(
                s,
                "  {:>3}  {:<24} {}",
                v.basis_label,
                v.fword,
                crate::valuation::format_exponent(&v.valuation)
            );
        }
        let _ = writeln!(s, "vertices {}", self.vertices.len());
        let _ = writeln!(
            s,
            "degree {}  volume {}  -> {}",
            self.degree,
            self.volume,
            verdict(self.nobody_pass)
        );
        if self.containment == "strict" {
            let _ = writeln!(s, "polytope is strictly smaller than the Newton-Okounkov body");
        }
        if let Some(k) = &self.khovanskii {
            let _ = writeln!(
                s,
                "lattice points = valuations: {}",
                verdict(k.lattice_points_are_valuations)
            );
            for l in &k.idp.levels {
                let _ = writeln!(s, "IDP k={} ({} points): {}", l.k, l.points, verdict(l.decomposable));
            }
            if let Some((k, x)) = &k.idp.counterexample {
                let _ = writeln!(s, "IDP counterexample at k={k}: {x:?}");
            }
        }
        if let Some(d) = &self.decomposition_witness {
            match &d.witness {
                Some(fs) => {
                    let _ = writeln!(
                        s,
                        "decomposition witness ({} combinations tried):",
                        d.combinations_tried
                    );
                    for f in fs {
                        let _ = writeln!(
                            s,
                            "  node {} word \"{}\" at positions {:?}",
                            f.node, f.word, f.positions
                        );
                    }
                }
                None => {
                    let _ = writeln!(
                        s,
                        "no decomposition found ({} combinations{})",
                        d.combinations_tried,
                        if d.truncated { ", truncated by caps" } else { "" }
                    );
                }
            }
        }
        s
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Everything computed once per instance.
pub struct Computed {
    pub module: WeightModule,
    pub heap: Heap,
    pub valuations: Vec<ValuationEntry>,
    pub polytope: LatticePolytope,
}

pub fn compute(spec: &InstanceSpec) -> Result<Computed> {
    let module = spec.module()?;
    let heap = spec.heap()?;
    let valuations = degree_one_valuations(&module, &heap)?;
    let pts: Vec<Vec<i64>> = valuations
        .iter()
        .map(|v| v.valuation.iter().map(|&x| i64::from(x)).collect())
        .collect();
    let polytope = LatticePolytope::from_points(&pts)?;
    Ok(Computed {
        module,
        heap,
        valuations,
        polytope,
    })
}

pub fn check_nobody_for(spec: &InstanceSpec, polytope: &LatticePolytope) -> Result<NobodyCheck> {
    let degree = bh_degree(&spec.datum, &spec.parabolic, &spec.varpi)?;
    let volume = polytope.normalized_volume().clone();
    let d = Q::from_integer(degree.clone());
    let containment = if volume == d {
        "equal"
    } else if volume < d {
        "strict"
    } else {
        "inconsistent"
    };
    Ok(NobodyCheck {
        degree: degree.to_string(),
        volume: volume.to_string(),
        nobody_pass: volume == d,
        containment: containment.into(),
    })
}

pub fn check_nobody(spec: &InstanceSpec) -> Result<NobodyCheck> {
    let c = compute(spec)?;
    check_nobody_for(spec, &c.polytope)
}

pub fn check_khovanskii_for(c: &Computed, kmax: u32) -> Result<KhovanskiiCheck> {
    let mut vals: Vec<Vec<i64>> = c
        .valuations
        .iter()
        .map(|v| v.valuation.iter().map(|&x| i64::from(x)).collect())
        .collect();
    vals.sort();
    let lp = c.polytope.lattice_points(1)?;
    let same = lp == vals;
    let idp = idp_check(&c.polytope, kmax)?;
    let pass = same && idp.passed();
    Ok(KhovanskiiCheck {
        lattice_points_are_valuations: same,
        idp,
        pass,
    })
}

pub fn check_khovanskii(spec: &InstanceSpec, kmax: u32) -> Result<KhovanskiiCheck> {
    check_khovanskii_for(&compute(spec)?, kmax)
}

/// Increasing index tuples of `word` spelling `pattern`, lexicographic.
pub fn subword_occurrences(word: &[usize], pattern: &[usize], cap: usize) -> (Vec<Vec<usize>>, bool) {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(pattern.len());
    let mut truncated = false;
    occ_rec(word, pattern, 0, &mut cur, &mut out, cap, &mut truncated);
    (out, truncated)
}

fn occ_rec(
    word: &[usize],
    pattern: &[usize],
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
    truncated: &mut bool,
) {
    if cur.len() == pattern.len() {
        if out.len() >= cap {
            *truncated = true;
            return;
        }
        out.push(cur.clone());
        return;
    }
    let need = pattern.len() - cur.len();
    for i in start..word.len() {
        if word.len() - i < need || *truncated {
            break;
        }
        if word[i] == pattern[cur.len()] {
            cur.push(i);
            occ_rec(word, pattern, i + 1, cur, out, cap, truncated);
            cur.pop();
        }
    }
}

struct Piece {
    node: usize,
    word: WeylWord,
    positions: Vec<usize>,
    embedded: LatticePolytope,
}

/// Embed a factor polytope along an occurrence (printed indices) of its word.
fn embed_factor(
    factor: &LatticePolytope,
    factor_len: usize,
    occurrence: &[usize],
    total: usize,
) -> Result<(LatticePolytope, Vec<usize>)> {
    // printed index i of bs is coordinate total-1-i; factor coordinate t is
    // printed index factor_len-1-t of the factor word
    let coord_of = |t: usize| total - 1 - occurrence[factor_len - 1 - t];
    let pts: Vec<Vec<i64>> = factor
        .integer_vertices()?
        .iter()
        .map(|v| {
            let mut x = vec![0i64; total];
            for (t, &val) in v.iter().enumerate() {
                x[coord_of(t)] = val;
            }
            x
        })
        .collect();
    let positions = (0..factor_len).map(|t| coord_of(t) + 1).collect();
    Ok((LatticePolytope::from_points(&pts)?, positions))
}

pub fn check_decomposition_for(
    spec: &InstanceSpec,
    target: &LatticePolytope,
    caps: Caps,
) -> Result<DecompositionCheck> {
    let datum = &spec.datum;
    let printed = spec.word.printed();
    let total = spec.word.len();
    let mut truncated = false;
    let mut groups: Vec<(usize, Vec<Piece>)> = Vec::new();
    for (j, &c) in spec.varpi.0.iter().enumerate() {
        if c <= 0 {
            continue;
        }
        let pj: BTreeSet<usize> = [j].into();
        let coset = datum.minimal_coset_word(&pj)?;
        let words = datum.reduced_words(&coset, caps.reduced_words)?;
        if words.len() >= caps.reduced_words {
            truncated = true;
        }
        let module = WeightModule::build(datum, &Weight::fundamental(datum.rank(), j))?;
        let mut pieces = Vec::new();
        for w in words {
            let heap = heap_of_word(datum, &w)?;
            let vals = degree_one_valuations(&module, &heap)?;
            let pts: Vec<Vec<i64>> = vals
                .iter()
                .map(|v| v.valuation.iter().map(|&x| i64::from(x)).collect())
                .collect();
            let factor = LatticePolytope::from_points(&pts)?;
            let (occs, cut) = subword_occurrences(&printed, &w.printed(), caps.occurrences);
            truncated |= cut;
            for occ in occs {
                let (embedded, positions) = embed_factor(&factor, w.len(), &occ, total)?;
                pieces.push(Piece {
                    node: j,
                    word: w.clone(),
                    positions,
                    embedded,
                });
            }
        }
        groups.push((c as usize, pieces));
    }

    // multisets of size c_j from each group, in lexicographic order
    let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
    for (c, pieces) in &groups {
        let mut sets = Vec::new();
        let mut cur = Vec::new();
        multisets(pieces.len(), *c, 0, &mut cur, &mut sets);
        choices.push(sets);
    }
    let mut tried = 0usize;
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(Vec::is_empty) {
        return Ok(DecompositionCheck {
            witness: None,
            combinations_tried: 0,
            truncated,
        });
    }
    loop {
        if tried >= caps.combinations {
            truncated = true;
            break;
        }
        tried += 1;
        let mut sum: Option<LatticePolytope> = None;
        let mut parts: Vec<&Piece> = Vec::new();
        for (g, &k) in idx.iter().enumerate() {
            for &p in &choices[g][k] {
                let piece = &groups[g].1[p];
                parts.push(piece);
                sum = Some(match sum {
                    None => piece.embedded.clone(),
                    Some(s) => minkowski_sum(&s, &piece.embedded)?,
                });
            }
        }
        if let Some(s) = &sum {
            if s.vertices() == target.vertices() {
                let witness = parts
                    .iter()
                    .map(|p| {
                        Ok(DecompositionFactor {
                            node: p.node + 1,
                            word: p.word.to_string(),
                            positions: p.positions.clone(),
                            vertices: p.embedded.integer_vertices()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(DecompositionCheck {
                    witness: Some(witness),
                    combinations_tried: tried,
                    truncated: false,
                });
            }
        }
        // odometer
        let mut g = idx.len();
        loop {
            if g == 0 {
                return Ok(DecompositionCheck {
                    witness: None,
                    combinations_tried: tried,
                    truncated,
                });
            }
            g -= 1;
            idx[g] += 1;
            if idx[g] < choices[g].len() {
                break;
            }
            idx[g] = 0;
        }
    }
    Ok(DecompositionCheck {
        witness: None,
        combinations_tried: tried,
        truncated,
    })
}

fn multisets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        multisets(n, k, i, cur, out);
        cur.pop();
    }
}

pub fn check_decomposition(spec: &InstanceSpec, caps: Caps) -> Result<DecompositionCheck> {
    let c = compute(spec)?;
    check_decomposition_for(spec, &c.polytope, caps)
}

/// Which checks to run in [`verify`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub kmax: Option<u32>,
    pub decomposition: bool,
    pub caps: Caps,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            kmax: Some(3),
            decomposition: true,
            caps: Caps::default(),
        }
    }
}

pub fn verify(spec: &InstanceSpec, opts: VerifyOptions) -> Result<VerificationReport> {
    let c = compute(spec)?;
    let nob = check_nobody_for(spec, &c.polytope)?;
    let khov = match opts.kmax {
        Some(k) if k >= 2 => Some(check_khovanskii_for(&c, k)?),
        _ => None,
    };
    let dec = if opts.decomposition {
        Some(check_decomposition_for(spec, &c.polytope, opts.caps)?)
    } else {
        None
    };
    let mut report = base_report(spec, &c)?;
    report.degree = nob.degree;
    report.volume = nob.volume;
    report.nobody_pass = nob.nobody_pass;
    report.containment = nob.containment;
    report.idp = khov.as_ref().map(|k| k.idp.clone());
    report.lattice_points_are_valuations = khov.as_ref().map(|k| k.lattice_points_are_valuations);
    report.khovanskii = khov;
    report.decomposition_witness = dec;
    Ok(report)
}

/// Report with valuations, vertices, degree and volume only.
pub fn polytope_report(spec: &InstanceSpec) -> Result<VerificationReport> {
    let c = compute(spec)?;
    let nob = check_nobody_for(spec, &c.polytope)?;
    let mut report = base_report(spec, &c)?;
    report.degree = nob.degree;
    report.volume = nob.volume;
    report.nobody_pass = nob.nobody_pass;
    report.containment = nob.containment;
    Ok(report)
}

fn base_report(spec: &InstanceSpec, c: &Computed) -> Result<VerificationReport> {
    Ok(VerificationReport {
        cartan_type: spec.datum.cartan_type().to_string(),
        parabolic: spec.parabolic.iter().map(|i| i + 1).collect(),
        weight: spec.varpi.0.clone(),
        word: spec.word.to_string(),
        module_dimension: c.module.dim(),
        valuations: c
            .valuations
            .iter()
            .map(|v| ValuationOutput {
                basis_label: v.basis + 1,
                fword: c.module.basis()[v.basis].to_string(),
                weight: c.module.weight_of(v.basis).0.clone(),
                valuation: v.valuation.clone(),
            })
            .collect(),
        vertices: c.polytope.integer_vertices()?,
        degree: String::new(),
        volume: String::new(),
        nobody_pass: false,
        containment: String::new(),
        khovanskii: None,
        idp: None,
        lattice_points_are_valuations: None,
        decomposition_witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusculeReport {
    pub cartan_type: String,
    pub node: usize,
    pub word: String,
    pub poset_size: usize,
    pub filters: usize,
    pub vertices: Vec<Vec<i64>>,
    pub equals_order_polytope: bool,
    pub linear_extensions: String,
    pub degree: String,
    pub volume: String,
    pub lattice_points_are_filters: bool,
    pub idp: IdpReport,
}

impl MinusculeReport {
    pub fn passed(&self) -> bool {
        self.equals_order_polytope
            && self.linear_extensions == self.degree
            && self.volume == self.degree
            && self.lattice_points_are_filters
            && self.idp.passed()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} node {}  word {}", self.cartan_type, self.node, self.word);
        let _ = writeln!(s, "poset size {}  filters {}", self.poset_size, self.filters);
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        let _ = writeln!(s, "vertices {}", vs.join(" "));
        let _ = writeln!(
            s,
            "Chevalley polytope = order polytope: {}",
            verdict(self.equals_order_polytope)
        );
        let _ = writeln!(
            s,
            "linear extensions {}  degree {}  volume {}",
            self.linear_extensions, self.degree, self.volume
        );
        let _ = writeln!(
            s,
            "lattice points = filters: {}",
            verdict(self.lattice_points_are_filters)
        );
        for l in &self.idp.levels {
            let _ = writeln!(s, "IDP k={} ({} points): {}", l.k, l.points, verdict(l.decomposable));
        }
        let _ = writeln!(s, "overall: {}", verdict(self.passed()));
        s
    }
}

pub fn minuscule_report(ctype: CartanType, k: usize, kmax: u32) -> Result<MinusculeReport> {
    let datum = RootDatum::new(ctype);
    if !datum.is_minuscule(k) {
        return Err(Error::NotMinuscule {
            ctype: ctype.to_string(),
            node: k + 1,
        });
    }
    let parabolic: BTreeSet<usize> = [k].into();
    let varpi = Weight::fundamental(datum.rank(), k);
    let spec = InstanceSpec::new(ctype, parabolic.clone(), varpi.clone(), None)?;
    let c = compute(&spec)?;
    let op = order_polytope(&c.heap)?;
    let filters: Vec<Vec<i64>> = c.heap.filters().iter().map(|f| f.indicator(c.heap.size())).collect();
    let mut sorted_filters = filters.clone();
    sorted_filters.sort();
    let lp = c.polytope.lattice_points(1)?;
    let degree = bh_degree(&datum, &parabolic, &varpi)?;
    let idp = idp_check(&c.polytope, kmax)?;
    Ok(MinusculeReport {
        cartan_type: ctype.to_string(),
        node: k + 1,
        word: spec.word.to_string(),
        poset_size: c.heap.size(),
        filters: filters.len(),
        vertices: c.polytope.integer_vertices()?,
        equals_order_polytope: op.vertices() == c.polytope.vertices(),
        linear_extensions: c.heap.count_linear_extensions().to_string(),
        degree: degree.to_string(),
        volume: c.polytope.normalized_volume().to_string(),
        lattice_points_are_filters: lp == sorted_filters,
        idp,
    })
}

/// String data of a minuscule module along a reduced word for `w_0`: for each
/// basis vector, the exponents of the lowering operators applied letter by
/// letter from the left of the printed word. Entries follow the printed order.
pub fn string_parametrization_minuscule(
    ctype: CartanType,
    k: usize,
    word_w0: &WeylWord,
) -> Result<BTreeMap<usize, Vec<i64>>> {
    let datum = RootDatum::new(ctype);
    if !datum.is_minuscule(k) {
        return Err(Error::NotMinuscule {
            ctype: ctype.to_string(),
            node: k + 1,
        });
    }
    if !datum.is_reduced(word_w0) {
        return Err(Error::NotReduced(word_w0.to_string()));
    }
    if !datum.same_element(word_w0, &datum.longest_word()) {
        return Err(Error::WrongCosetWord);
    }
    let m = WeightModule::build(&datum, &Weight::fundamental(datum.rank(), k))?;
    let mut out = BTreeMap::new();
    for b in 0..m.dim() {
        let mut mu = m.weight_of(b).clone();
        let mut string = Vec::with_capacity(word_w0.len());
        for i in word_w0.printed() {
            let mut steps = 0;
            loop {
                let next = mu.sub(&datum.simple_root(i));
                if m.weight_space(&next).is_empty() {
                    break;
                }
                mu = next;
                steps += 1;
            }
            string.push(steps);
        }
        out.insert(b, string);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringPoint {
    pub basis_label: usize,
    pub weight: Vec<i64>,
    pub string: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferencePolytopeCheck {
    pub vertices: Vec<Vec<String>>,
    pub dim: usize,
    pub volume: String,
    pub integral: bool,
    pub idp: IdpReport,
}

/// Minuscule string points against the Chevalley polytope of the same
/// space, optionally with a given string polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringComparison {
    pub cartan_type: String,
    pub node: usize,
    pub word_w0: String,
    pub points: Vec<StringPoint>,
    pub string_hull_dim: usize,
    pub chevalley_dim: usize,
    pub chevalley_volume: String,
    pub degree: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferencePolytopeCheck>,
}

impl StringComparison {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} node {}  w0 word {}", self.cartan_type, self.node, self.word_w0);
        for p in &self.points {
            let v: Vec<String> = p.string.iter().map(|x| x.to_string()).collect();
            let w: Vec<String> = p.weight.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                s,
                "  v{:<3} weight ({})  string ({})",
                p.basis_label,
                w.join(","),
                v.join(",")
            );
        }
        let _ = writeln!(s, "string points span dimension {}", self.string_hull_dim);
        let _ = writeln!(
            s,
            "Chevalley polytope: dimension {}  volume {}  degree {}",
            self.chevalley_dim, self.chevalley_volume, self.degree
        );
        if let Some(r) = &self.reference {
            let _ = writeln!(
                s,
                "given polytope: dimension {}  volume {}  integral {}",
                r.dim, r.volume, r.integral
            );
            match &r.idp.counterexample {
                Some((k, x)) => {
                    let _ = writeln!(s, "  IDP fails at k={k}: {x:?}");
                }
                None => {
                    let _ = writeln!(s, "  IDP holds up to k={}", r.idp.levels.last().map_or(1, |l| l.k));
                }
            }
        }
        s
    }
}

pub fn string_comparison(
    ctype: CartanType,
    k: usize,
    word_w0: &WeylWord,
    reference: Option<(&[Vec<Q>], u32)>,
) -> Result<StringComparison> {
    let strings = string_parametrization_minuscule(ctype, k, word_w0)?;
    let datum = RootDatum::new(ctype);
    let module = WeightModule::build(&datum, &Weight::fundamental(datum.rank(), k))?;
    let pts: Vec<Vec<i64>> = strings.values().cloned().collect();
    let hull = LatticePolytope::from_points(&pts)?;
    let spec = InstanceSpec::new(ctype, [k].into(), Weight::fundamental(datum.rank(), k), None)?;
    let c = compute(&spec)?;
    let degree = bh_degree(&datum, &spec.parabolic, &spec.varpi)?;
    let reference = match reference {
        None => None,
        Some((verts, kmax)) => {
            let p = LatticePolytope::from_rational_points(verts)?;
            Some(ReferencePolytopeCheck {
                vertices: p
                    .vertices()
                    .iter()
                    .map(|v| v.iter().map(|x| x.to_string()).collect())
                    .collect(),
                dim: p.dim(),
                volume: p.normalized_volume().to_string(),
                integral: p.is_integral(),
                idp: idp_check(&p, kmax)?,
            })
        }
    };
    Ok(StringComparison {
        cartan_type: ctype.to_string(),
        node: k + 1,
        word_w0: word_w0.to_string(),
        points: strings
            .into_iter()
            .map(|(b, string)| StringPoint {
                basis_label: b + 1,
                weight: module.weight_of(b).0.clone(),
                string,
            })
            .collect(),
        string_hull_dim: hull.dim(),
        chevalley_dim: c.polytope.dim(),
        chevalley_volume: c.polytope.normalized_volume().to_string(),
        degree: degree.to_string(),
        reference,
    })
}
