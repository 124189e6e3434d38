//! Planar networks on the triangular grid `{(i,j) : 0 <= i <= j <= J}`.
//!
//! Every vertex `(i,j)` with `i >= 1` has at most two outgoing edges: the
//! horizontal edge to `(i-1,j)` and the diagonal edge to `(i-1,j-1)`. Since
//! `i` strictly decreases along every edge the digraph is acyclic.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bijection::Letter;
use crate::error::{Error, Result};
use crate::poly::{PolyDoc, Polynomial, Scalar, Symbol, VarId, VariableTable};
use crate::triangle::Triangle;

/// `△(n) = n(n+1)/2`.
pub fn triangular(n: u64) -> u64 {
    n * (n + 1) / 2
}

pub fn is_triangular(t: u64) -> bool {
    tri_inverse(t).is_ok()
}

/// The `n` with `△(n) = t`.
pub fn tri_inverse(t: u64) -> Result<u64> {
    let mut n = ((2.0 * t as f64).sqrt()) as u64;
    while triangular(n) > t {
        n -= 1;
    }
    while triangular(n + 1) <= t {
        n += 1;
    }
    if triangular(n) == t {
        Ok(n)
    } else {
        Err(Error::NotTriangular(t))
    }
}

/// Smallest triangular number `>= k`.
pub fn triceil(k: u64) -> u64 {
    let mut n = 0;
    while triangular(n) < k {
        n += 1;
    }
    triangular(n)
}

pub fn tridefect(k: u64) -> u64 {
    triceil(k) - k
}

pub type Vertex = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal,
    Diagonal,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: Vertex,
    pub to: Vertex,
    pub weight: Polynomial,
    /// Set on coloured edges of the reduced network; black edges have `None`.
    pub letter: Option<Letter>,
}

#[derive(Clone, Debug)]
pub struct PlanarNetwork {
    name: String,
    table: Arc<VariableTable>,
    jmax: usize,
    // indexed by vertex id; [horizontal, diagonal]
    out: Vec<[Option<Edge>; 2]>,
    sources: Vec<Vertex>,
    sinks: Vec<Vertex>,
}

fn vid((i, j): Vertex) -> usize {
    j * (j + 1) / 2 + i
}

impl PlanarNetwork {
    fn empty(name: &str, table: &Arc<VariableTable>, jmax: usize) -> PlanarNetwork {
        let nv = vid((jmax, jmax)) + 1;
        PlanarNetwork {
            name: name.to_string(),
            table: Arc::clone(table),
            jmax,
            out: vec![[None, None]; nv],
            sources: Vec::new(),
            sinks: Vec::new(),
        }
    }

    fn set_edge(&mut self, kind: EdgeKind, from: Vertex, weight: Polynomial, letter: Option<Letter>) {
        if weight.is_zero() {
            return;
        }
        let (i, j) = from;
        let (to, slot) = match kind {
            EdgeKind::Horizontal => ((i - 1, j), 0),
            EdgeKind::Diagonal => ((i - 1, j - 1), 1),
        };
        self.out[vid(from)][slot] = Some(Edge {
            kind,
            from,
            to,
            weight,
            letter,
        });
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn contains(&self, (i, j): Vertex) -> bool {
        i <= j && j <= self.jmax
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..=self.jmax).flat_map(|j| (0..=j).map(move |i| (i, j)))
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> {
        self.out[vid(v)].iter().flatten()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.out.iter().flat_map(|e| e.iter().flatten())
    }

    pub fn edge(&self, from: Vertex, kind: EdgeKind) -> Option<&Edge> {
        let slot = match kind {
            EdgeKind::Horizontal => 0,
            EdgeKind::Diagonal => 1,
        };
        self.out.get(vid(from)).and_then(|e| e[slot].as_ref())
    }

    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    pub fn sinks(&self) -> &[Vertex] {
        &self.sinks
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// For every vertex, the sum of path weights from it to `target`.
    pub fn sums_to(&self, target: Vertex) -> Vec<Polynomial> {
        let zero = Polynomial::zero(&self.table);
        let mut sums = vec![zero; self.out.len()];
        sums[vid(target)] = Polynomial::one(&self.table);
        // every edge lowers i, so process vertices by increasing i
        for i in 1..=self.jmax {
            for j in i..=self.jmax {
                let mut acc = Polynomial::zero(&self.table);
                for e in self.out_edges((i, j)) {
                    let s = &sums[vid(e.to)];
                    if !s.is_zero() {
                        acc = &acc + &(&e.weight * s);
                    }
                }
                if (i, j) != target {
                    sums[vid((i, j))] = acc;
                }
            }
        }
        sums
    }

    /// Number of directed paths from every vertex to `target`.
    pub fn counts_to(&self, target: Vertex) -> Vec<BigInt> {
        let mut counts = vec![BigInt::from(0); self.out.len()];
        counts[vid(target)] = BigInt::from(1);
        for i in 1..=self.jmax {
            for j in i..=self.jmax {
                if (i, j) == target {
                    continue;
                }
                let c: BigInt = self.out_edges((i, j)).map(|e| &counts[vid(e.to)]).sum();
                counts[vid((i, j))] = c;
            }
        }
        counts
    }

    pub fn path_count(&self, from: Vertex, to: Vertex) -> BigInt {
        self.counts_to(to)[vid(from)].clone()
    }

    pub fn path_sum(&self, from: Vertex, to: Vertex) -> Polynomial {
        self.sums_to(to).swap_remove(vid(from))
    }

    /// All paths between two vertices, depth first, horizontal branch first.
    pub fn paths_between(&self, from: Vertex, to: Vertex, budget: usize) -> Result<Vec<Path>> {
        if !self.contains(from) {
            return Err(Error::NoSuchVertex(from.0, from.1));
        }
        if !self.contains(to) {
            return Err(Error::NoSuchVertex(to.0, to.1));
        }
        let counts = self.counts_to(to);
        let mut out = Vec::new();
        let mut stack: Vec<&Edge> = Vec::new();
        self.dfs(from, to, &counts, &mut stack, &mut out, budget)?;
        Ok(out)
    }

    fn dfs<'a>(
        &'a self,
        at: Vertex,
        to: Vertex,
        counts: &[BigInt],
        stack: &mut Vec<&'a Edge>,
        out: &mut Vec<Path>,
        budget: usize,
    ) -> Result<()> {
        if at == to {
            if out.len() >= budget {
                return Err(Error::PathBudget(budget));
            }
            out.push(Path::from_edges(self, at, stack));
            return Ok(());
        }
        for e in self.out_edges(at) {
            if counts[vid(e.to)] == BigInt::from(0) {
                continue;
            }
            stack.push(e);
            self.dfs(e.to, to, counts, stack, out, budget)?;
            stack.pop();
        }
        Ok(())
    }

    /// Paths from source `u_n` to sink `v_k`.
    pub fn enumerate_paths(&self, n: usize, k: usize, budget: usize) -> Result<Vec<Path>> {
        let u = *self.sources.get(n).ok_or(Error::SizeOutOfRange {
            n,
            rows: self.sources.len(),
        })?;
        let v = *self.sinks.get(k).ok_or(Error::SizeOutOfRange {
            n: k,
            rows: self.sinks.len(),
        })?;
        self.paths_between(u, v, budget)
    }

    /// `P(u_n -> v_k)` for `0 <= k <= n <= nmax`.
    pub fn path_matrix(&self, nmax: usize) -> Result<Triangle> {
        if nmax >= self.sources.len() || nmax >= self.sinks.len() {
            return Err(Error::SizeOutOfRange {
                n: nmax,
                rows: self.sources.len().min(self.sinks.len()),
            });
        }
        let mut rows: Vec<Vec<Polynomial>> =
            (0..=nmax).map(|n| vec![Polynomial::zero(&self.table); n + 1]).collect();
        for k in 0..=nmax {
            let sums = self.sums_to(self.sinks[k]);
            for (n, row) in rows.iter_mut().enumerate().skip(k) {
                row[k] = sums[vid(self.sources[n])].clone();
            }
        }
        Ok(Triangle::from_rows(
            &self.table,
            format!("path-matrix({})", self.name),
            BTreeMap::new(),
            rows,
        ))
    }

    /// Families of pairwise vertex-disjoint paths joining `sources[i]` to
    /// `sinks[i]` (the identity matching only).
    pub fn nonintersecting_families(
        &self,
        sources: &[usize],
        sinks: &[usize],
        budget: usize,
    ) -> Result<Vec<Vec<Path>>> {
        const MAX_FAMILY: usize = 4;
        if sources.len() != sinks.len() {
            return Err(Error::SelectionMismatch(sources.len(), sinks.len()));
        }
        if sources.len() > MAX_FAMILY {
            return Err(Error::GuardExceeded {
                what: "family size",
                got: sources.len(),
                limit: MAX_FAMILY,
            });
        }
        let words = self.out.len().div_ceil(64);
        let mut candidates = Vec::with_capacity(sources.len());
        for (&n, &k) in sources.iter().zip(sinks) {
            let paths = self.enumerate_paths(n, k, budget)?;
            let masks: Vec<Vec<u64>> = paths
                .iter()
                .map(|p| {
                    let mut m = vec![0u64; words];
                    for &v in &p.vertices {
                        m[vid(v) / 64] |= 1 << (vid(v) % 64);
                    }
                    m
                })
                .collect();
            candidates.push((paths, masks));
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        let mut used = vec![0u64; words];
        fn rec(
            level: usize,
            cands: &[(Vec<Path>, Vec<Vec<u64>>)],
            used: &mut Vec<u64>,
            chosen: &mut Vec<usize>,
            out: &mut Vec<Vec<Path>>,
        ) {
            if level == cands.len() {
                out.push(
                    chosen
                        .iter()
                        .enumerate()
                        .map(|(l, &p)| cands[l].0[p].clone())
                        .collect(),
                );
                return;
            }
            let (_, masks) = &cands[level];
            for (idx, m) in masks.iter().enumerate() {
                if m.iter().zip(used.iter()).any(|(a, b)| a & b != 0) {
                    continue;
                }
                for (u, x) in used.iter_mut().zip(m) {
                    *u |= x;
                }
                chosen.push(idx);
                rec(level + 1, cands, used, chosen, out);
                chosen.pop();
                for (u, x) in used.iter_mut().zip(m) {
                    *u &= !x;
                }
            }
        }
        rec(0, &candidates, &mut used, &mut chosen, &mut out);
        Ok(out)
    }

    pub fn to_doc(&self) -> NetworkDoc {
        NetworkDoc {
            name: self.name.clone(),
            jmax: self.jmax,
            sources: self.sources.clone(),
            sinks: self.sinks.clone(),
            edges: self
                .edges()
                .map(|e| EdgeDoc {
                    from: e.from,
                    to: e.to,
                    kind: e.kind,
                    weight: e.weight.to_doc(),
                    letter: e.letter.map(|l| l.to_string()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    /// Graphviz rendering; vertex `(i,j)` is placed at `x = -i`, `y = j`.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        writeln!(s, "digraph \"{}\" {{", self.name).unwrap();
        writeln!(s, "  node [shape=point];").unwrap();
        for (i, j) in self.vertices() {
            let mut attrs = format!("pos=\"{},{}!\"", -(i as i64), j);
            if let Some(n) = self.sources.iter().position(|&v| v == (i, j)) {
                write!(attrs, ", shape=circle, label=\"u{n}\"").unwrap();
            } else if let Some(k) = self.sinks.iter().position(|&v| v == (i, j)) {
                write!(attrs, ", shape=circle, label=\"v{k}\"").unwrap();
            }
            writeln!(s, "  \"{i},{j}\" [{attrs}];").unwrap();
        }
        for e in self.edges() {
            let label = match (&e.letter, e.weight.as_integer()) {
                (Some(l), _) => format!("label=\"{l}\", color=red"),
                (None, Some(w)) if w == BigInt::from(1) => "color=black".to_string(),
                _ => format!("label=\"{}\"", e.weight),
            };
            writeln!(
                s,
                "  \"{},{}\" -> \"{},{}\" [{label}];",
                e.from.0, e.from.1, e.to.0, e.to.1
            )
            .unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeDoc {
    pub from: Vertex,
    pub to: Vertex,
    pub kind: EdgeKind,
    pub weight: PolyDoc,
    pub letter: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NetworkDoc {
    pub name: String,
    pub jmax: usize,
    pub sources: Vec<Vertex>,
    pub sinks: Vec<Vertex>,
    pub edges: Vec<EdgeDoc>,
}

/// A directed path with its commutative weight and its coloured-letter word.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub vertices: Vec<Vertex>,
    pub weight: Polynomial,
    pub word: Vec<Letter>,
}

impl Path {
    fn from_edges(net: &PlanarNetwork, end: Vertex, edges: &[&Edge]) -> Path {
        let mut vertices: Vec<Vertex> = edges.iter().map(|e| e.from).collect();
        vertices.push(end);
        let weight = edges
            .iter()
            .fold(Polynomial::one(&net.table), |acc, e| &acc * &e.weight);
        let word = edges.iter().filter_map(|e| e.letter).collect();
        Path {
            vertices,
            weight,
            word,
        }
    }
}

/// The standard binomial-like network: horizontal edge out of `(i,j)` weighs
/// `alpha(i, j-i+1)`, diagonal edge weighs `beta(i, j-i)`. Sources
/// `u_n = (n,n)`, sinks `v_k = (0,k)`.
pub fn build_d(
    table: &Arc<VariableTable>,
    jmax: usize,
    alpha: impl Fn(usize, usize) -> Polynomial,
    beta: impl Fn(usize, usize) -> Polynomial,
) -> PlanarNetwork {
    let mut net = PlanarNetwork::empty("D", table, jmax);
    for j in 1..=jmax {
        for i in 1..=j {
            net.set_edge(EdgeKind::Horizontal, (i, j), alpha(i, j - i + 1), None);
            net.set_edge(EdgeKind::Diagonal, (i, j), beta(i, j - i), None);
        }
    }
    net.sources = (0..=jmax).map(|n| (n, n)).collect();
    net.sinks = (0..=jmax).map(|k| (0, k)).collect();
    net
}

/// Weight rule of a diagonal edge of the reduced network, `l >= 0`, `i >= 1`.
pub fn dprime_beta(i: u64, l: u64) -> EdgeRule {
    let s = i + l - 1;
    if s < triangular(l) {
        EdgeRule::Deleted
    } else if let Ok(t) = tri_inverse(s) {
        EdgeRule::Coloured(Letter::E {
            i: (t - l) as u32,
            l: l as u32,
        })
    } else {
        EdgeRule::Black
    }
}

/// Weight rule of a horizontal edge of the reduced network, `i, l >= 1`.
pub fn dprime_alpha(i: u64, l: u64) -> EdgeRule {
    let s = i + l - 1;
    let ceil = triceil(s);
    let t = tri_inverse(ceil).expect("triangular ceiling is triangular");
    let defect = ceil - s;
    if t >= l && t - l >= defect {
        EdgeRule::Coloured(Letter::A {
            i: (t - l) as u32,
            j: defect as u32,
            l: (l - 1) as u32,
        })
    } else if is_triangular(s) && s < triangular(l) {
        EdgeRule::Black
    } else {
        EdgeRule::Deleted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRule {
    Coloured(Letter),
    Black,
    Deleted,
}

/// The reduced network whose path matrix lives in `Z[A, E]`, built up to
/// row `△(nmax)`. Sources `u_n = (△(n), △(n))`, sinks `v_k = (0, △(k))`.
pub fn build_dprime(table: &Arc<VariableTable>, nmax: usize) -> PlanarNetwork {
    let jmax = triangular(nmax as u64) as usize;
    let mut net = PlanarNetwork::empty("D'", table, jmax);
    for j in 1..=jmax {
        for i in 1..=j {
            let rules = [
                (EdgeKind::Horizontal, dprime_alpha(i as u64, (j - i + 1) as u64)),
                (EdgeKind::Diagonal, dprime_beta(i as u64, (j - i) as u64)),
            ];
            for (kind, rule) in rules {
                match rule {
                    EdgeRule::Coloured(letter) => {
                        let w = Polynomial::variable(table, letter.symbol()).expect("valid letter");
                        net.set_edge(kind, (i, j), w, Some(letter));
                    }
                    EdgeRule::Black => net.set_edge(kind, (i, j), Polynomial::one(table), None),
                    EdgeRule::Deleted => {}
                }
            }
        }
    }
    net.sources = (0..=nmax)
        .map(|n| {
            let t = triangular(n as u64) as usize;
            (t, t)
        })
        .collect();
    net.sinks = (0..=nmax)
        .map(|k| (0, triangular(k as u64) as usize))
        .collect();
    net
}

/// The vertex `m` steps to the right of `u_n` in the reduced network.
pub fn u_shifted(n: usize, m: usize) -> Vertex {
    let t = triangular(n as u64) as usize;
    (t - m, t)
}

fn assignment_over(
    table: &Arc<VariableTable>,
    f: impl Fn(Symbol) -> Option<Polynomial>,
) -> HashMap<VarId, Polynomial> {
    table
        .symbols()
        .into_iter()
        .enumerate()
        .filter_map(|(id, s)| f(s).map(|p| (id as VarId, p)))
        .collect()
}

/// `e_{i,l} -> e`, `a_{i,0,l} -> c`, `a_{i,j,l} -> a` for `j > 0`.
pub fn specialize_ace(tri: &Triangle) -> Result<Triangle> {
    let t = tri.table();
    let [a, c, e] = [Scalar::A, Scalar::C, Scalar::E].map(|s| Polynomial::scalar(t, s));
    let assign = assignment_over(t, |s| match s {
        Symbol::E { .. } => Some(e.clone()),
        Symbol::A { j: 0, .. } => Some(c.clone()),
        Symbol::A { .. } => Some(a.clone()),
        _ => None,
    });
    tri.map(&format!("ace({})", tri.family()), |p| p.substitute(&assign))
}

/// `e_{i,l} -> e_i`, `a_{i,0,l} -> c_i`, `a_{i,j,l} -> a` for `j > 0`.
pub fn specialize_ace_seq(tri: &Triangle) -> Result<Triangle> {
    let t = tri.table();
    let a = Polynomial::scalar(t, Scalar::A);
    // snapshot first: interning below appends to the table
    let syms = t.symbols();
    let mut assign = HashMap::new();
    for (id, s) in syms.into_iter().enumerate() {
        let v = match s {
            Symbol::E { i, .. } => Polynomial::variable(t, Symbol::ESeq(i))?,
            Symbol::A { i, j: 0, .. } => Polynomial::variable(t, Symbol::CSeq(i))?,
            Symbol::A { .. } => a.clone(),
            _ => continue,
        };
        assign.insert(id as VarId, v);
    }
    tri.map(&format!("ace-seq({})", tri.family()), |p| p.substitute(&assign))
}

/// Shifts the `l` index of every family symbol by `m`.
pub fn shift_l(p: &Polynomial, m: u32) -> Result<Polynomial> {
    let t = p.table();
    let mut assign = HashMap::new();
    for id in p.variables() {
        let shifted = match t.symbol(id) {
            Symbol::A { i, j, l } => Symbol::A { i, j, l: l + m },
            Symbol::E { i, l } => Symbol::E { i, l: l + m },
            _ => continue,
        };
        assign.insert(id, Polynomial::variable(t, shifted)?);
    }
    p.substitute(&assign)
}
