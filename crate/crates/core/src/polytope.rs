//! Exact polytopes: hull, facets, normalized volume, lattice points, the
//! integer decomposition property and Minkowski sums.
//!
//! Points are scaled to integers and expressed in a basis of the saturated
//! lattice of their affine hull, where the polytope is full-dimensional. A
//! beneath-beyond pass over that frame yields the boundary, a placing
//! triangulation and the volume at the same time.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heap::Heap;
use crate::linalg::{det_int, gcd_vec, integer_kernel, row_reduce, Q};

pub const LATTICE_DIMENSION_CAP: usize = 16;

/// Inequalities `⟨n, x⟩ ≤ c` and equations `⟨n, x⟩ = c`, with primitive
/// integer normals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HRep {
    pub inequalities: Vec<(Vec<BigInt>, BigInt)>,
    pub equations: Vec<(Vec<BigInt>, BigInt)>,
}

impl HRep {
    pub fn contains(&self, x: &[Q]) -> bool {
        let dot = |n: &[BigInt]| -> Q { n.iter().zip(x).map(|(a, b)| Q::from_integer(a.clone()) * b).sum() };
        self.inequalities
            .iter()
            .all(|(n, c)| dot(n) <= Q::from_integer(c.clone()))
            && self.equations.iter().all(|(n, c)| dot(n) == Q::from_integer(c.clone()))
    }
}

/// Full-dimensional integer coordinates `y` with `D·x = origin + Σ y_j basis_j`.
#[derive(Clone, Debug)]
struct Frame {
    scale: BigInt,
    origin: Vec<BigInt>,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    basis_inv: Vec<Vec<Q>>,
    equations: Vec<Vec<BigInt>>,
}

impl Frame {
    fn new(points: &[Vec<BigInt>], scale: BigInt) -> Frame {
        let n = points[0].len();
        let origin = points[0].clone();
        let diffs: Vec<Vec<BigInt>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .collect();
        let equations = integer_kernel(&diffs, n);
        let basis = integer_kernel(&equations, n);
        let d = basis.len();
        let mut bt: Vec<Vec<Q>> = basis
            .iter()
            .map(|b| b.iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect();
        let pivots = row_reduce(&mut bt);
        // B_R as d×d with rows = pivot coordinates, columns = basis vectors
        let br: Vec<Vec<Q>> = pivots
            .iter()
            .map(|&r| (0..d).map(|j| Q::from_integer(basis[j][r].clone())).collect())
            .collect();
        let basis_inv = invert(&br);
        Frame {
            scale,
            origin,
            basis,
            pivots,
            basis_inv,
            equations,
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn to_y(&self, xs: &[BigInt]) -> Vec<BigInt> {
        let rhs: Vec<Q> = self
            .pivots
            .iter()
            .map(|&r| Q::from_integer(&xs[r] - &self.origin[r]))
            .collect();
        self.basis_inv
            .iter()
            .map(|row| {
                let v: Q = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    /// Inequality `a·y ≤ c` as a primitive inequality on the original `x`.
    fn lift_inequality(&self, a: &[BigInt], c: &BigInt) -> (Vec<BigInt>, BigInt) {
        let n = self.origin.len();
        let d = self.dim();
        let mut normal = vec![Q::zero(); n];
        for (k, &r) in self.pivots.iter().enumerate() {
            let u: Q = (0..d)
                .map(|j| Q::from_integer(a[j].clone()) * &self.basis_inv[j][k])
                .sum();
            normal[r] = u;
        }
        let off: Q = normal
            .iter()
            .zip(&self.origin)
            .map(|(u, o)| u * Q::from_integer(o.clone()))
            .sum::<Q>()
            + Q::from_integer(c.clone());
        let scale = Q::from_integer(self.scale.clone());
        let lhs: Vec<Q> = normal.iter().map(|u| u * &scale).collect();
        primitive_rational(&lhs, &off)
    }

    fn lift_equation(&self, e: &[BigInt]) -> (Vec<BigInt>, BigInt) {
        let rhs: BigInt = e.iter().zip(&self.origin).map(|(a, b)| a * b).sum();
        let lhs: Vec<Q> = e.iter().map(|a| Q::from_integer(a * &self.scale)).collect();
        primitive_rational(&lhs, &Q::from_integer(rhs))
    }
}

fn invert(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let d = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    row_reduce(&mut aug);
    aug.into_iter().map(|r| r[d..].to_vec()).collect()
}

fn primitive_rational(lhs: &[Q], rhs: &Q) -> (Vec<BigInt>, BigInt) {
    let denom = lhs
        .iter()
        .chain(std::iter::once(rhs))
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = lhs
        .iter()
        .map(|x| (x * Q::from_integer(denom.clone())).to_integer())
        .collect();
    let c = (rhs * Q::from_integer(denom)).to_integer();
    let mut all = ints.clone();
    all.push(c.clone());
    let g = gcd_vec(&all);
    if g.is_zero() || g.is_one() {
        return (ints, c);
    }
    (ints.iter().map(|x| x / &g).collect(), c / g)
}

fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_vec(&a);
    if g.is_zero() || g.is_one() {
        a
    } else {
        a.into_iter().map(|x| x / &g).collect()
    }
}

fn dot(a: &[BigInt], y: &[BigInt]) -> BigInt {
    a.iter().zip(y).map(|(x, z)| x * z).sum()
}

#[derive(Clone, Debug)]
struct Facet {
    idx: Vec<usize>,
    normal: Vec<BigInt>,
    offset: BigInt,
}

struct HullY {
    facets: Vec<Facet>,
    simplices: Vec<Vec<usize>>,
    volume: BigInt,
}

fn simplex_det(ys: &[Vec<BigInt>], idx: &[usize]) -> BigInt {
    let base = &ys[idx[0]];
    let rows: Vec<Vec<BigInt>> = idx[1..]
        .iter()
        .map(|&i| ys[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    det_int(&rows).abs()
}

fn facet_through(ys: &[Vec<BigInt>], idx: Vec<usize>, center: &[BigInt], d: usize) -> Facet {
    let base = &ys[idx[0]];
    let rows: Vec<Vec<BigInt>> = idx[1..]
        .iter()
        .map(|&i| ys[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut kernel = integer_kernel(&rows, d);
    debug_assert_eq!(kernel.len(), 1);
    let mut normal = primitive(kernel.pop().expect("affinely independent ridge"));
    let mut offset = dot(&normal, base);
    // center is (d+1) times an interior point
    if dot(&normal, center) > &offset * BigInt::from(d + 1) {
        normal = normal.into_iter().map(|x| -x).collect();
        offset = -offset;
    }
    Facet { idx, normal, offset }
}

/// Beneath-beyond over full-dimensional integer points.
fn hull_y(ys: &[Vec<BigInt>], d: usize) -> HullY {
    if d == 0 {
        return HullY {
            facets: Vec::new(),
            simplices: vec![vec![0]],
            volume: BigInt::one(),
        };
    }
    let mut simplex = vec![0usize];
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (i, y) in ys.iter().enumerate().skip(1) {
        if simplex.len() == d + 1 {
            break;
        }
        let diff: Vec<Q> = y.iter().zip(&ys[0]).map(|(a, b)| Q::from_integer(a - b)).collect();
        let mut trial = rows.clone();
        trial.push(diff);
        if crate::linalg::rank(&trial) == trial.len() {
            rows = trial;
            simplex.push(i);
        }
    }
    assert_eq!(simplex.len(), d + 1, "frame is full-dimensional");
    let center: Vec<BigInt> = (0..d)
        .map(|j| simplex.iter().map(|&i| ys[i][j].clone()).sum())
        .collect();
    let mut facets: Vec<Facet> = (0..=d)
        .map(|skip| {
            let idx: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, &i)| i)
                .collect();
            facet_through(ys, idx, &center, d)
        })
        .collect();
    let mut volume = simplex_det(ys, &simplex);
    let mut simplices = vec![simplex.clone()];
    let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
    for q in 0..ys.len() {
        if in_simplex.contains(&q) {
            continue;
        }
        let (visible, keep): (Vec<Facet>, Vec<Facet>) =
            facets.into_iter().partition(|f| dot(&f.normal, &ys[q]) > f.offset);
        facets = keep;
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &visible {
            let mut s = f.idx.clone();
            s.push(q);
            s.sort_unstable();
            volume += simplex_det(ys, &s);
            simplices.push(s);
            for skip in 0..f.idx.len() {
                let mut r: Vec<usize> = f
                    .idx
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                r.sort_unstable();
                *ridges.entry(r).or_default() += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        for mut r in horizon {
            r.push(q);
            facets.push(facet_through(ys, r, &center, d));
        }
    }
    HullY {
        facets,
        simplices,
        volume,
    }
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    ambient: usize,
    vertices: Vec<Vec<Q>>,
    frame: Frame,
    hrep: HRep,
    /// facets in frame coordinates, deduplicated
    y_facets: Vec<(Vec<BigInt>, BigInt)>,
    y_vertices: Vec<Vec<BigInt>>,
    triangulation: Vec<Vec<usize>>,
    volume: Q,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

fn to_q(points: &[Vec<i64>]) -> Vec<Vec<Q>> {
    points
        .iter()
        .map(|p| p.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
        .collect()
}

impl LatticePolytope {
    pub fn from_points(points: &[Vec<i64>]) -> Result<Self> {
        Self::from_rational_points(&to_q(points))
    }

    pub fn from_rational_points(points: &[Vec<Q>]) -> Result<Self> {
        vertex_hull(points)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    /// Vertices as integers; fails when some vertex is not integral.
    pub fn integer_vertices(&self) -> Result<Vec<Vec<i64>>> {
        self.vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        if x.is_integer() {
                            x.to_integer().to_i64().ok_or(Error::NonIntegral)
                        } else {
                            Err(Error::NonIntegral)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    pub fn h_representation(&self) -> &HRep {
        &self.hrep
    }

    pub fn num_facets(&self) -> usize {
        self.hrep.inequalities.len()
    }

    /// Lattice-normalized volume in the affine hull (unit simplex ↦ 1).
    pub fn normalized_volume(&self) -> &Q {
        &self.volume
    }

    /// Placing triangulation as tuples of vertex indices.
    pub fn triangulation(&self) -> &[Vec<usize>] {
        &self.triangulation
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.ambient && self.hrep.contains(x)
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.contains(&to_q(&[x.to_vec()])[0])
    }

    pub fn lattice_points(&self, k: u32) -> Result<Vec<Vec<i64>>> {
        lattice_points(self, k)
    }

    pub fn to_json(&self) -> Value {
        let rows =
            |v: &[Vec<Q>]| -> Vec<Value> { v.iter().map(|p| Value::Array(p.iter().map(q_json).collect())).collect() };
        let ineq: Vec<Value> = self
            .hrep
            .inequalities
            .iter()
            .map(|(n, c)| {
                let mut r: Vec<Value> = n.iter().map(int_json).collect();
                r.push(int_json(c));
                Value::Array(r)
            })
            .collect();
        let eqs: Vec<Value> = self
            .hrep
            .equations
            .iter()
            .map(|(n, c)| {
                let mut r: Vec<Value> = n.iter().map(int_json).collect();
                r.push(int_json(c));
                Value::Array(r)
            })
            .collect();
        json!({
            "dim": self.ambient,
            "affine_dim": self.dim(),
            "vertices": rows(&self.vertices),
            "inequalities": ineq,
            "equations": eqs,
            "normalized_volume": q_json(&self.volume),
        })
    }

    /// Reads `{dim, vertices}`; other fields are recomputed.
    pub fn from_json(v: &Value) -> Result<Self> {
        let file: PolytopeFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("polytope json: {e}")))?;
        let pts: Vec<Vec<Q>> = file
            .vertices
            .iter()
            .map(|row| row.iter().map(parse_q_value).collect::<Result<Vec<Q>>>())
            .collect::<Result<_>>()?;
        if pts.iter().any(|p| p.len() != file.dim) {
            return Err(Error::DimensionMismatch(pts.first().map_or(0, Vec::len), file.dim));
        }
        Self::from_rational_points(&pts)
    }

    /// One vertex per line, entries separated by spaces.
    pub fn to_matrix(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", parts.join(" "));
        }
        s
    }

    pub fn from_matrix(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<Q> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<Q>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {t}")))
                })
                .collect::<Result<_>>()?;
            pts.push(row);
        }
        if let Some(first) = pts.first() {
            if let Some(bad) = pts.iter().find(|p| p.len() != first.len()) {
                return Err(Error::DimensionMismatch(bad.len(), first.len()));
            }
        }
        Self::from_rational_points(&pts)
    }
}

#[derive(Deserialize, Serialize)]
struct PolytopeFile {
    dim: usize,
    vertices: Vec<Vec<Value>>,
}

fn q_json(x: &Q) -> Value {
    if x.is_integer() {
        match x.to_integer().to_i64() {
            Some(v) => json!(v),
            None => json!(x.to_string()),
        }
    } else {
        json!(x.to_string())
    }
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn parse_q_value(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| Q::from_integer(BigInt::from(x)))
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}; use \"p/q\" strings"))),
        Value::String(s) => s.parse::<Q>().map_err(|_| Error::Parse(format!("bad rational {s}"))),
        other => Err(Error::Parse(format!("bad coordinate {other}"))),
    }
}

fn scale_points(points: &[Vec<Q>]) -> (BigInt, Vec<Vec<BigInt>>) {
    let d = points.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| (x * Q::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    (d, ints)
}

/// Convex hull with an irredundant, lexicographically sorted vertex list.
pub fn vertex_hull(points: &[Vec<Q>]) -> Result<LatticePolytope> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let n = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch(p.len(), n));
    }
    let distinct: Vec<Vec<Q>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

    // first pass: find the vertices among all points
    let (scale, ints) = scale_points(&distinct);
    let frame = Frame::new(&ints, scale.clone());
    let d = frame.dim();
    let ys: Vec<Vec<BigInt>> = ints.iter().map(|x| frame.to_y(x)).collect();
    let first = hull_y(&ys, d);
    let planes = dedup_planes(&first.facets);
    let vertex_idx: Vec<usize> = (0..ys.len())
        .filter(|&i| {
            if d == 0 {
                return true;
            }
            let tight: Vec<Vec<Q>> = planes
                .iter()
                .filter(|(a, c)| &dot(a, &ys[i]) == c)
                .map(|(a, _)| a.iter().map(|x| Q::from_integer(x.clone())).collect())
                .collect();
            crate::linalg::rank(&tight) == d
        })
        .collect();
    let vertices: Vec<Vec<Q>> = vertex_idx.iter().map(|&i| distinct[i].clone()).collect();

    // second pass on the vertices only
    let (scale, vints) = scale_points(&vertices);
    let frame = Frame::new(&vints, scale.clone());
    let y_vertices: Vec<Vec<BigInt>> = vints.iter().map(|x| frame.to_y(x)).collect();
    let hull = hull_y(&y_vertices, d);
    let y_facets = dedup_planes(&hull.facets);
    let mut inequalities: Vec<(Vec<BigInt>, BigInt)> =
        y_facets.iter().map(|(a, c)| frame.lift_inequality(a, c)).collect();
    inequalities.sort();
    let mut equations: Vec<(Vec<BigInt>, BigInt)> = frame.equations.iter().map(|e| frame.lift_equation(e)).collect();
    equations.sort();
    let denom = Q::from_integer(num_traits::pow(scale.clone(), d));
    let volume = Q::from_integer(hull.volume) / denom;
    Ok(LatticePolytope {
        ambient: n,
        vertices,
        frame,
        hrep: HRep {
            inequalities,
            equations,
        },
        y_facets,
        y_vertices,
        triangulation: hull.simplices,
        volume,
    })
}

fn dedup_planes(facets: &[Facet]) -> Vec<(Vec<BigInt>, BigInt)> {
    let set: BTreeSet<(Vec<BigInt>, BigInt)> = facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
    set.into_iter().collect()
}

pub fn h_representation(p: &LatticePolytope) -> &HRep {
    p.h_representation()
}

pub fn normalized_volume(p: &LatticePolytope) -> &Q {
    p.normalized_volume()
}

/// Order polytope of a poset: hull of filter indicator vectors.
pub fn order_polytope(h: &Heap) -> Result<LatticePolytope> {
    let pts: Vec<Vec<i64>> = h.filters().iter().map(|f| f.indicator(h.size())).collect();
    LatticePolytope::from_points(&pts)
}

struct Enumerator {
    ineqs: Vec<(Vec<i128>, i128)>,
    order: Vec<usize>,
    lo: Vec<i128>,
    hi: Vec<i128>,
}

impl Enumerator {
    fn run(&self) -> Vec<Vec<i128>> {
        let d = self.order.len();
        let mut y = vec![0i128; d];
        let mut assigned = vec![false; d];
        let mut out = Vec::new();
        self.rec(0, &mut y, &mut assigned, &mut out);
        out
    }

    fn rec(&self, depth: usize, y: &mut Vec<i128>, assigned: &mut Vec<bool>, out: &mut Vec<Vec<i128>>) {
        if depth == self.order.len() {
            if self
                .ineqs
                .iter()
                .all(|(a, c)| a.iter().zip(y.iter()).map(|(x, z)| x * z).sum::<i128>() <= *c)
            {
                out.push(y.clone());
            }
            return;
        }
        let v = self.order[depth];
        let (mut lo, mut hi) = (self.lo[v], self.hi[v]);
        for (a, c) in &self.ineqs {
            let av = a[v];
            if av == 0 {
                continue;
            }
            let mut rest = 0i128;
            for j in 0..a.len() {
                if j == v || a[j] == 0 {
                    continue;
                }
                rest += if assigned[j] {
                    a[j] * y[j]
                } else {
                    (a[j] * self.lo[j]).min(a[j] * self.hi[j])
                };
            }
            let room = c - rest;
            if av > 0 {
                hi = hi.min(room.div_euclid(av));
            } else {
                lo = lo.max(-(room.div_euclid(-av)));
            }
            if lo > hi {
                return;
            }
        }
        assigned[v] = true;
        for val in lo..=hi {
            y[v] = val;
            self.rec(depth + 1, y, assigned, out);
        }
        assigned[v] = false;
        y[v] = 0;
    }
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::ScaleCap("coordinate exceeds i128".into()))
}

/// Integer points of `k·P`, sorted lexicographically.
pub fn lattice_points(p: &LatticePolytope, k: u32) -> Result<Vec<Vec<i64>>> {
    if p.ambient > LATTICE_DIMENSION_CAP {
        return Err(Error::LatticeDimensionCap {
            dim: p.ambient,
            cap: LATTICE_DIMENSION_CAP,
        });
    }
    if !p.is_integral() {
        return lattice_points_rational(p, k);
    }
    let ys = lattice_points_y(p, k)?;
    let mut out: Vec<Vec<i64>> = ys.iter().map(|y| y_to_x(p, y, k)).collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

const RATIONAL_BOX_CAP: u128 = 5_000_000;

/// Ambient H-rep as `i128` inequalities, equations split into two.
fn ambient_ineqs(p: &LatticePolytope) -> Result<Vec<(Vec<i128>, i128)>> {
    let mut out = Vec::new();
    for (n, c) in &p.hrep.inequalities {
        out.push((n.iter().map(to_i128).collect::<Result<Vec<_>>>()?, to_i128(c)?));
    }
    for (n, c) in &p.hrep.equations {
        let a = n.iter().map(to_i128).collect::<Result<Vec<_>>>()?;
        out.push((a.iter().map(|x| -x).collect(), -to_i128(c)?));
        out.push((a, to_i128(c)?));
    }
    Ok(out)
}

/// Box enumeration for polytopes with rational vertices.
fn lattice_points_rational(p: &LatticePolytope, k: u32) -> Result<Vec<Vec<i64>>> {
    let kq = Q::from_integer(BigInt::from(k));
    let n = p.ambient;
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    let mut size: u128 = 1;
    for i in 0..n {
        let a = p
            .vertices
            .iter()
            .map(|v| &v[i] * &kq)
            .min()
            .unwrap()
            .ceil()
            .to_integer();
        let b = p
            .vertices
            .iter()
            .map(|v| &v[i] * &kq)
            .max()
            .unwrap()
            .floor()
            .to_integer();
        let (a, b) = (to_i128(&a)?, to_i128(&b)?);
        if b < a {
            return Ok(Vec::new());
        }
        size = size.saturating_mul((b - a + 1) as u128);
        lo.push(a);
        hi.push(b);
    }
    if size > RATIONAL_BOX_CAP {
        return Err(Error::ScaleCap(format!(
            "{size} candidate points for a rational polytope"
        )));
    }
    let ineqs = ambient_ineqs(p)?;
    let kk = i128::from(k);
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if ineqs
            .iter()
            .all(|(a, c)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<i128>() <= c * kk)
        {
            out.push(x.iter().map(|&v| v as i64).collect());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

fn idp_check_rational(p: &LatticePolytope, kmax: u32) -> Result<IdpReport> {
    let widen = |v: Vec<Vec<i64>>| -> Vec<Vec<i128>> {
        v.into_iter().map(|x| x.into_iter().map(i128::from).collect()).collect()
    };
    let base = widen(lattice_points_rational(p, 1)?);
    let mut dec = Decomposer {
        ineqs: ambient_ineqs(p)?,
        base,
        failed: HashSet::new(),
    };
    let mut levels = Vec::new();
    for k in 2..=kmax {
        let pts = lattice_points_rational(p, k)?;
        let bad = widen(pts.clone()).into_iter().position(|z| !dec.decompose(&z, k));
        levels.push(IdpLevel {
            k,
            points: pts.len(),
            decomposable: bad.is_none(),
        });
        if let Some(i) = bad {
            return Ok(IdpReport {
                levels,
                counterexample: Some((k, pts[i].clone())),
            });
        }
    }
    Ok(IdpReport {
        levels,
        counterexample: None,
    })
}

fn lattice_points_y(p: &LatticePolytope, k: u32) -> Result<Vec<Vec<i128>>> {
    let d = p.dim();
    let k = i128::from(k);
    let ineqs: Vec<(Vec<i128>, i128)> = p
        .y_facets
        .iter()
        .map(|(a, c)| Ok((a.iter().map(to_i128).collect::<Result<Vec<_>>>()?, to_i128(c)? * k)))
        .collect::<Result<_>>()?;
    let yv: Vec<Vec<i128>> = p
        .y_vertices
        .iter()
        .map(|y| y.iter().map(to_i128).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let lo: Vec<i128> = (0..d).map(|j| yv.iter().map(|y| y[j]).min().unwrap_or(0) * k).collect();
    let hi: Vec<i128> = (0..d).map(|j| yv.iter().map(|y| y[j]).max().unwrap_or(0) * k).collect();
    let mut order: Vec<usize> = (0..d).collect();
    let support = |j: usize| ineqs.iter().filter(|(a, _)| a[j] != 0).count();
    order.sort_by_key(|&j| (hi[j] - lo[j], std::cmp::Reverse(support(j)), j));
    Ok(Enumerator { ineqs, order, lo, hi }.run())
}

fn y_to_x(p: &LatticePolytope, y: &[i128], k: u32) -> Result<Vec<i64>> {
    let f = &p.frame;
    (0..p.ambient)
        .map(|i| {
            let mut v = &f.origin[i] * BigInt::from(k);
            for (j, b) in f.basis.iter().enumerate() {
                v += &b[i] * BigInt::from(y[j]);
            }
            // integral polytopes have scale 1
            debug_assert!(f.scale.is_one());
            v.to_i64().ok_or(Error::ScaleCap("coordinate exceeds i64".into()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpLevel {
    pub k: u32,
    pub points: usize,
    pub decomposable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpReport {
    pub levels: Vec<IdpLevel>,
    /// First point of some `kP` that is not a sum of `k` lattice points of `P`.
    pub counterexample: Option<(u32, Vec<i64>)>,
}

impl IdpReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Decomposer {
    ineqs: Vec<(Vec<i128>, i128)>,
    base: Vec<Vec<i128>>,
    failed: HashSet<(Vec<i128>, u32)>,
}

impl Decomposer {
    fn inside(&self, z: &[i128], k: u32) -> bool {
        let k = i128::from(k);
        self.ineqs
            .iter()
            .all(|(a, c)| a.iter().zip(z).map(|(x, y)| x * y).sum::<i128>() <= c * k)
    }

    fn decompose(&mut self, z: &[i128], k: u32) -> bool {
        if k == 1 {
            return self.inside(z, 1);
        }
        if self.failed.contains(&(z.to_vec(), k)) {
            return false;
        }
        for i in 0..self.base.len() {
            let rest: Vec<i128> = z.iter().zip(&self.base[i]).map(|(a, b)| a - b).collect();
            if self.inside(&rest, k - 1) && self.decompose(&rest, k - 1) {
                return true;
            }
        }
        self.failed.insert((z.to_vec(), k));
        false
    }
}

/// Checks that every lattice point of `kP`, `2 ≤ k ≤ kmax`, is a sum of `k`
/// lattice points of `P`.
pub fn idp_check(p: &LatticePolytope, kmax: u32) -> Result<IdpReport> {
    if p.ambient > LATTICE_DIMENSION_CAP {
        return Err(Error::LatticeDimensionCap {
            dim: p.ambient,
            cap: LATTICE_DIMENSION_CAP,
        });
    }
    if !p.is_integral() {
        return idp_check_rational(p, kmax);
    }
    let ineqs: Vec<(Vec<i128>, i128)> = p
        .y_facets
        .iter()
        .map(|(a, c)| Ok((a.iter().map(to_i128).collect::<Result<Vec<_>>>()?, to_i128(c)?)))
        .collect::<Result<_>>()?;
    let verts: Vec<Vec<i128>> = p
        .y_vertices
        .iter()
        .map(|y| y.iter().map(to_i128).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut base = verts.clone();
    for y in lattice_points_y(p, 1)? {
        if !verts.contains(&y) {
            base.push(y);
        }
    }
    let mut dec = Decomposer {
        ineqs,
        base,
        failed: HashSet::new(),
    };
    let mut levels = Vec::new();
    for k in 2..=kmax {
        let mut pts = lattice_points_y(p, k)?;
        pts.sort();
        let mut ok = true;
        let mut bad = None;
        for z in &pts {
            if !dec.decompose(z, k) {
                ok = false;
                bad = Some(y_to_x(p, z, k)?);
                break;
            }
        }
        levels.push(IdpLevel {
            k,
            points: pts.len(),
            decomposable: ok,
        });
        if let Some(x) = bad {
            return Ok(IdpReport {
                levels,
                counterexample: Some((k, x)),
            });
        }
    }
    Ok(IdpReport {
        levels,
        counterexample: None,
    })
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.ambient != q.ambient {
        return Err(Error::DimensionMismatch(p.ambient, q.ambient));
    }
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    vertex_hull(&pts)
}
