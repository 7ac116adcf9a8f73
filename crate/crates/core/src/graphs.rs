//! Graph carriers: circulants, dihedral Cayley graphs and 2-regular cycle
//! types.
//!
//! Edges are stored canonically as `(min, max)` pairs. Dihedral vertices are
//! flattened to integers, `r_k -> k` and `s_k -> p + k`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numtheory::{is_prime, mul_mod};

pub type Edge = (u32, u32);

/// Canonical form of the unordered pair `{u, v}`.
#[inline]
pub fn edge(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("order {0} is too small")]
    OrderTooSmall(u32),
    #[error("connection set element {element} invalid for order {n}")]
    BadElement { n: u32, element: u32 },
    #[error("connection set is not symmetric: {element} present but {missing} absent")]
    NotSymmetric { element: u32, missing: u32 },
    #[error("invalid edge ({0}, {1})")]
    BadEdge(u32, u32),
    #[error("dihedral connection set is not inverse-closed or contains the identity")]
    BadDihedralSet,
    #[error("vertex {vertex} has degree {degree}, expected 2")]
    NotTwoRegular { vertex: u32, degree: usize },
    #[error("cycle length {0} is below 3")]
    ShortCycle(u32),
    #[error("cycle type is empty")]
    EmptyCycleType,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("parameter i must be a nonzero residue")]
    ZeroStep,
    #[error("cannot parse cycle list: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// A symmetric subset `S` of `Z_n \ {0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectionSet {
    n: u32,
    elements: BTreeSet<u32>,
}

impl ConnectionSet {
    pub fn new(n: u32, elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n < 3 {
            return Err(GraphError::OrderTooSmall(n));
        }
        let elements: BTreeSet<u32> = elements.into_iter().collect();
        for &s in &elements {
            if s == 0 || s >= n {
                return Err(GraphError::BadElement { n, element: s });
            }
            if !elements.contains(&(n - s)) {
                return Err(GraphError::NotSymmetric {
                    element: s,
                    missing: n - s,
                });
            }
        }
        Ok(ConnectionSet { n, elements })
    }

    /// `±{d_1, .., d_s}` reduced modulo `n`. Rejects elements that vanish
    /// mod `n`; duplicates collapse.
    pub fn symmetric(n: u32, positives: &[u32]) -> Result<Self> {
        if n < 3 {
            return Err(GraphError::OrderTooSmall(n));
        }
        let mut elements = BTreeSet::new();
        for &d in positives {
            let d = d % n;
            if d == 0 {
                return Err(GraphError::BadElement { n, element: d });
            }
            elements.insert(d);
            elements.insert(n - d);
        }
        Ok(ConnectionSet { n, elements })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn elements(&self) -> &BTreeSet<u32> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements `s <= n/2`, one from each `±` pair.
    pub fn half(&self) -> Vec<u32> {
        self.elements
            .iter()
            .copied()
            .filter(|&s| s <= self.n - s)
            .collect()
    }

    /// `alpha * S` elementwise modulo `n`.
    pub fn scaled(&self, alpha: u64) -> ConnectionSet {
        let n = self.n as u64;
        let elements = self
            .elements
            .iter()
            .map(|&s| mul_mod(s as u64, alpha, n) as u32)
            .collect();
        ConnectionSet {
            n: self.n,
            elements,
        }
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half: Vec<String> = self.half().iter().map(u32::to_string).collect();
        write!(f, "±{{{}}} mod {}", half.join(","), self.n)
    }
}

/// A simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexGraph {
    n: u32,
    edges: BTreeSet<Edge>,
}

impl VertexGraph {
    pub fn empty(n: u32) -> Self {
        VertexGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: u32, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = VertexGraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns whether the edge was new.
    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<bool> {
        if u == v || u >= self.n || v >= self.n {
            return Err(GraphError::BadEdge(u, v));
        }
        Ok(self.edges.insert(edge(u, v)))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&edge(u, v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n as usize];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n as usize];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let d = *deg.first()?;
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n as usize;
        self.edges.len() == n * (n - 1) / 2
    }

    /// Image of the graph under the vertex map `v -> map[v]`.
    pub fn relabel(&self, map: &[u32]) -> VertexGraph {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| edge(map[u as usize], map[v as usize]))
            .collect();
        VertexGraph { n: self.n, edges }
    }

    pub fn is_edge_disjoint(&self, other: &VertexGraph) -> bool {
        self.edges.is_disjoint(&other.edges)
    }

    pub fn union(&self, other: &VertexGraph) -> VertexGraph {
        VertexGraph {
            n: self.n.max(other.n),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn difference(&self, other: &VertexGraph) -> VertexGraph {
        VertexGraph {
            n: self.n,
            edges: self.edges.difference(&other.edges).copied().collect(),
        }
    }

    /// Vertices incident to at least one edge.
    pub fn support(&self) -> BTreeSet<u32> {
        self.edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    }
}

pub fn complete_graph(n: u32) -> VertexGraph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    VertexGraph { n, edges }
}

/// `Cay(Z_n; S)`.
pub fn circulant(n: u32, s: &ConnectionSet) -> Result<VertexGraph> {
    if s.n() != n {
        return Err(GraphError::BadElement { n, element: s.n() });
    }
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for &d in s.elements() {
            edges.insert(edge(i, (i + d) % n));
        }
    }
    Ok(VertexGraph { n, edges })
}

/// Disjoint union of cycles on consecutive vertices, in the order given.
pub fn disjoint_cycles(lengths: &[u32]) -> Result<VertexGraph> {
    let n: u32 = lengths.iter().sum();
    let mut g = VertexGraph::empty(n);
    let mut start = 0;
    for &len in lengths {
        if len < 3 {
            return Err(GraphError::ShortCycle(len));
        }
        for k in 0..len {
            g.add_edge(start + k, start + (k + 1) % len)?;
        }
        start += len;
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DihedralKind {
    R,
    S,
}

/// `r_index` or `s_index` in `D_2p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    pub kind: DihedralKind,
    pub index: u32,
}

impl DihedralElement {
    pub fn r(p: u32, index: i64) -> Self {
        DihedralElement {
            kind: DihedralKind::R,
            index: index.rem_euclid(p as i64) as u32,
        }
    }

    pub fn s(p: u32, index: i64) -> Self {
        DihedralElement {
            kind: DihedralKind::S,
            index: index.rem_euclid(p as i64) as u32,
        }
    }

    /// Flattened vertex number.
    pub fn encode(self, p: u32) -> u32 {
        match self.kind {
            DihedralKind::R => self.index,
            DihedralKind::S => p + self.index,
        }
    }

    pub fn decode(p: u32, v: u32) -> Self {
        if v < p {
            DihedralElement {
                kind: DihedralKind::R,
                index: v,
            }
        } else {
            DihedralElement {
                kind: DihedralKind::S,
                index: v - p,
            }
        }
    }

    pub fn inverse(self, p: u32) -> Self {
        match self.kind {
            DihedralKind::R => DihedralElement::r(p, -(self.index as i64)),
            DihedralKind::S => self,
        }
    }

    /// Group product `self * other`.
    pub fn mul(self, other: Self, p: u32) -> Self {
        let (a, b) = (self.index as i64, other.index as i64);
        match (self.kind, other.kind) {
            (DihedralKind::R, DihedralKind::R) => DihedralElement::r(p, a + b),
            (DihedralKind::R, DihedralKind::S) => DihedralElement::s(p, a + b),
            (DihedralKind::S, DihedralKind::R) => DihedralElement::s(p, a - b),
            (DihedralKind::S, DihedralKind::S) => DihedralElement::r(p, a - b),
        }
    }
}

/// `Cay(D_2p; conn)` on the flattened vertex set `0..2p`.
pub fn dihedral_cayley(p: u32, conn: &[DihedralElement]) -> Result<VertexGraph> {
    let set: BTreeSet<DihedralElement> = conn.iter().copied().collect();
    let identity = DihedralElement::r(p, 0);
    if set.contains(&identity) || set.iter().any(|c| !set.contains(&c.inverse(p))) {
        return Err(GraphError::BadDihedralSet);
    }
    if set.iter().any(|c| c.index >= p) {
        return Err(GraphError::BadDihedralSet);
    }
    let mut g = VertexGraph::empty(2 * p);
    for v in 0..2 * p {
        let x = DihedralElement::decode(p, v);
        for &c in &set {
            g.add_edge(v, x.mul(c, p).encode(p))?;
        }
    }
    Ok(g)
}

fn check_iso_params(p: u32, i: i64, min_p: u32) -> Result<u32> {
    if p < min_p || !is_prime(p as u64) {
        return Err(GraphError::NotPrime(p));
    }
    let i = i.rem_euclid(p as i64) as u32;
    if i == 0 {
        return Err(GraphError::ZeroStep);
    }
    Ok(i)
}

/// Vertex map sending `r_{ki} -> 2k` and `s_{ki+j} -> 2k + offset (mod 2p)`.
fn dihedral_interleave(p: u32, i: u32, j: i64, offset: i64) -> Vec<u32> {
    let two_p = 2 * p as i64;
    let j = j.rem_euclid(p as i64) as u64;
    let mut map = vec![0u32; 2 * p as usize];
    for k in 0..p as u64 {
        let r = (k * i as u64 % p as u64) as usize;
        let s = ((k * i as u64 + j) % p as u64) as usize;
        map[r] = (2 * k) as u32;
        map[p as usize + s] = (2 * k as i64 + offset).rem_euclid(two_p) as u32;
    }
    map
}

/// Isomorphism `Cay(D_2p; {r_±i, s_j, s_{i+j}}) -> Cay(Z_2p; ±{1,2})`,
/// returned as the image of each flattened dihedral vertex.
pub fn dihedral_iso_pm12(p: u32, i: i64, j: i64) -> Result<Vec<u32>> {
    let i = check_iso_params(p, i, 3)?;
    Ok(dihedral_interleave(p, i, j, -1))
}

/// Isomorphism `Cay(D_2p; {r_±i, r_±2i, s_j, s_{i+j}, s_{2i+j}, s_{3i+j}})
/// -> Cay(Z_2p; ±{1,2,3,4})`.
pub fn dihedral_iso_pm1234(p: u32, i: i64, j: i64) -> Result<Vec<u32>> {
    let i = check_iso_params(p, i, 5)?;
    Ok(dihedral_interleave(p, i, j, -3))
}

/// Connection set of `dihedral_iso_pm12`'s source graph.
pub fn pm12_dihedral_connection(p: u32, i: i64, j: i64) -> Vec<DihedralElement> {
    vec![
        DihedralElement::r(p, i),
        DihedralElement::r(p, -i),
        DihedralElement::s(p, j),
        DihedralElement::s(p, i + j),
    ]
}

/// Connection set of `dihedral_iso_pm1234`'s source graph.
pub fn pm1234_dihedral_connection(p: u32, i: i64, j: i64) -> Vec<DihedralElement> {
    vec![
        DihedralElement::r(p, i),
        DihedralElement::r(p, -i),
        DihedralElement::r(p, 2 * i),
        DihedralElement::r(p, -2 * i),
        DihedralElement::s(p, j),
        DihedralElement::s(p, i + j),
        DihedralElement::s(p, 2 * i + j),
        DihedralElement::s(p, 3 * i + j),
    ]
}

/// Multiset of cycle lengths of a 2-regular graph, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    lengths: Vec<u32>,
}

impl CycleType {
    pub fn new(mut lengths: Vec<u32>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(GraphError::EmptyCycleType);
        }
        if let Some(&bad) = lengths.iter().find(|&&l| l < 3) {
            return Err(GraphError::ShortCycle(bad));
        }
        lengths.sort_unstable();
        Ok(CycleType { lengths })
    }

    pub fn hamilton(n: u32) -> Self {
        CycleType { lengths: vec![n] }
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn order(&self) -> u32 {
        self.lengths.iter().sum()
    }

    /// `ν_m`: number of m-cycles.
    pub fn nu(&self, m: u32) -> usize {
        self.lengths.iter().filter(|&&l| l == m).count()
    }

    pub fn girth(&self) -> u32 {
        self.lengths[0]
    }

    pub fn is_hamilton(&self) -> bool {
        self.lengths.len() == 1
    }

    /// `ν_3 <= ν_5 + Σ_{i>=7} ν_i`, the triangle budget of the `±{1,2,3}`
    /// gadget construction.
    pub fn triangle_condition(&self) -> bool {
        let partners = self.lengths.iter().filter(|&&l| l == 5 || l >= 7).count();
        self.nu(3) <= partners
    }

    /// Every cycle type of order `n`, in lexicographic order of the sorted
    /// length lists.
    pub fn all_of_order(n: u32) -> Vec<CycleType> {
        fn rec(remaining: u32, min: u32, acc: &mut Vec<u32>, out: &mut Vec<CycleType>) {
            if remaining == 0 {
                out.push(CycleType {
                    lengths: acc.clone(),
                });
                return;
            }
            for l in min..=remaining {
                let rest = remaining - l;
                if rest != 0 && rest < l {
                    continue;
                }
                acc.push(l);
                rec(rest, l, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if n >= 3 {
            rec(n, 3, &mut Vec::new(), &mut out);
        }
        out.sort();
        out
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for CycleType {
    type Err = GraphError;

    /// Parses `3,4,5` (brackets and spaces tolerated).
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let lengths = trimmed
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| GraphError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        CycleType::new(lengths)
    }
}

/// Cycle lengths of a graph that is 2-regular on its non-isolated vertices.
pub fn cycle_type(g: &VertexGraph) -> Result<CycleType> {
    let adj = g.adjacency();
    for (v, row) in adj.iter().enumerate() {
        if !row.is_empty() && row.len() != 2 {
            return Err(GraphError::NotTwoRegular {
                vertex: v as u32,
                degree: row.len(),
            });
        }
    }
    let mut seen = vec![false; adj.len()];
    let mut lengths = Vec::new();
    for start in 0..adj.len() {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        let mut len = 0;
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            seen[cur] = true;
            len += 1;
            let next = if adj[cur][0] as usize != prev {
                adj[cur][0] as usize
            } else {
                adj[cur][1] as usize
            };
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        lengths.push(len);
    }
    CycleType::new(lengths)
}

/// Circulants of prime order are isomorphic exactly when one connection set
/// is a multiple of the other. Returns the least such multiplier `alpha`.
pub fn circulant_isomorphic(
    p: u32,
    s: &ConnectionSet,
    s_prime: &ConnectionSet,
) -> Result<Option<u64>> {
    if !is_prime(p as u64) {
        return Err(GraphError::NotPrime(p));
    }
    if s.n() != p || s_prime.n() != p {
        return Err(GraphError::BadElement { n: p, element: 0 });
    }
    if s.len() != s_prime.len() {
        return Ok(None);
    }
    Ok((1..p as u64).find(|&alpha| &s.scaled(alpha) == s_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn circulant_examples() {
        let k5 = circulant(5, &ConnectionSet::symmetric(5, &[1, 2]).unwrap()).unwrap();
        assert!(k5.is_complete());
        assert_eq!(k5.edge_count(), 10);
        let c7 = circulant(7, &ConnectionSet::symmetric(7, &[1]).unwrap()).unwrap();
        assert_eq!(cycle_type(&c7).unwrap(), CycleType::hamilton(7));
        let g = circulant(26, &ConnectionSet::symmetric(26, &[1, 2, 3, 4]).unwrap()).unwrap();
        assert_eq!(g.regular_degree(), Some(8));
        assert_eq!(g.edge_count(), 104);
        // n/2 in S contributes n/2 edges
        let h = circulant(10, &ConnectionSet::symmetric(10, &[1, 5]).unwrap()).unwrap();
        assert_eq!(h.edge_count(), 10 * (3 - 1) / 2 + 5);
    }

    #[test]
    fn connection_set_validation() {
        assert!(ConnectionSet::new(7, [1, 6]).is_ok());
        assert_eq!(
            ConnectionSet::new(7, [1, 5]),
            Err(GraphError::NotSymmetric {
                element: 1,
                missing: 6
            })
        );
        assert!(ConnectionSet::new(7, [0]).is_err());
        assert!(ConnectionSet::symmetric(7, &[7]).is_err());
    }

    #[test]
    fn dihedral_examples() {
        let x1 = dihedral_cayley(
            5,
            &[
                DihedralElement::r(5, 2),
                DihedralElement::r(5, -2),
                DihedralElement::s(5, 1),
                DihedralElement::s(5, 4),
            ],
        )
        .unwrap();
        assert_eq!(x1.n(), 10);
        assert_eq!(x1.regular_degree(), Some(4));
        let matching = dihedral_cayley(3, &[DihedralElement::s(3, 0)]).unwrap();
        assert_eq!(matching.edge_count(), 3);
        assert_eq!(matching.regular_degree(), Some(1));
        let mut conn: Vec<_> = [1, -1, 2, -2].map(|i| DihedralElement::r(5, i)).to_vec();
        conn.extend((0..4).map(|j| DihedralElement::s(5, j)));
        let g = dihedral_cayley(5, &conn).unwrap();
        assert_eq!(g.regular_degree(), Some(8));
    }

    #[test]
    fn dihedral_rejects_bad_sets() {
        assert!(dihedral_cayley(5, &[DihedralElement::r(5, 1)]).is_err());
        assert!(dihedral_cayley(5, &[DihedralElement::r(5, 0)]).is_err());
    }

    #[test]
    fn dihedral_map_table_values() {
        let map = dihedral_iso_pm12(5, 1, 0).unwrap();
        assert_eq!(map[0], 0); // r_0
        assert_eq!(map[1], 2); // r_1
        assert_eq!(map[5], 9); // s_0
        assert_eq!(map[6], 1); // s_1
        let map8 = dihedral_iso_pm1234(5, 1, 0).unwrap();
        assert_eq!(map8[5], 7); // s_0 -> 2p - 3
        assert_eq!(dihedral_iso_pm12(5, 0, 1), Err(GraphError::ZeroStep));
        assert!(dihedral_iso_pm1234(3, 1, 0).is_err());
    }

    fn assert_iso(p: u32, src: &VertexGraph, map: &[u32], target: &[u32]) {
        let mut seen: Vec<u32> = map.to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (0..2 * p).collect::<Vec<_>>(), "not a bijection");
        let tgt = circulant(2 * p, &ConnectionSet::symmetric(2 * p, target).unwrap()).unwrap();
        assert_eq!(src.relabel(map), tgt);
    }

    #[test]
    fn dihedral_maps_carry_edges_for_all_small_primes() {
        for p in (3..=101u32).filter(|&p| is_prime(p as u64)) {
            for i in 1..p as i64 {
                for j in 0..p as i64 {
                    let g = dihedral_cayley(p, &pm12_dihedral_connection(p, i, j)).unwrap();
                    assert_iso(p, &g, &dihedral_iso_pm12(p, i, j).unwrap(), &[1, 2]);
                    if p >= 5 {
                        let g = dihedral_cayley(p, &pm1234_dihedral_connection(p, i, j)).unwrap();
                        assert_iso(p, &g, &dihedral_iso_pm1234(p, i, j).unwrap(), &[1, 2, 3, 4]);
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_types() {
        let tri = VertexGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(cycle_type(&tri).unwrap().lengths(), &[3]);
        let c10 = circulant(10, &ConnectionSet::symmetric(10, &[1]).unwrap()).unwrap();
        assert_eq!(cycle_type(&c10).unwrap().lengths(), &[10]);
        let two =
            VertexGraph::from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (3, 6)])
                .unwrap();
        assert_eq!(cycle_type(&two).unwrap().lengths(), &[3, 4]);
        let path = VertexGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            cycle_type(&path),
            Err(GraphError::NotTwoRegular { .. })
        ));
    }

    #[test]
    fn cycle_type_parsing_and_counts() {
        let f: CycleType = "3,4, 5".parse().unwrap();
        assert_eq!(f.lengths(), &[3, 4, 5]);
        assert_eq!(f.order(), 12);
        assert!("2,7".parse::<CycleType>().is_err());
        assert!("x".parse::<CycleType>().is_err());
        let ten: Vec<String> = CycleType::all_of_order(10)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(ten, ["[3,3,4]", "[3,7]", "[4,6]", "[5,5]", "[10]"]);
        assert!(CycleType::new(vec![3, 5]).unwrap().triangle_condition());
        assert!(!CycleType::new(vec![3, 3, 4, 7])
            .unwrap()
            .triangle_condition());
    }

    #[test]
    fn turner_examples() {
        let s13 = ConnectionSet::symmetric(7, &[1, 3]).unwrap();
        let s12 = ConnectionSet::symmetric(7, &[1, 2]).unwrap();
        assert_eq!(circulant_isomorphic(7, &s13, &s13), Ok(Some(1)));
        assert_eq!(circulant_isomorphic(7, &s13, &s12), Ok(Some(2)));
        let a = ConnectionSet::symmetric(11, &[1, 2]).unwrap();
        let b = ConnectionSet::symmetric(11, &[1, 3]).unwrap();
        assert_eq!(circulant_isomorphic(11, &a, &b), Ok(None));
        let c = ConnectionSet::symmetric(9, &[1]).unwrap();
        assert_eq!(
            circulant_isomorphic(9, &c, &c),
            Err(GraphError::NotPrime(9))
        );
    }

    proptest! {
        #[test]
        fn turner_finds_every_multiplier(
            p in prop::sample::select(vec![5u32, 7, 11, 13, 17, 19, 23, 29, 31]),
            picks in prop::collection::vec(1u32..16, 1..4),
            alpha_seed in 1u64..1000,
        ) {
            let s = ConnectionSet::symmetric(p, &picks.iter().map(|x| 1 + x % (p - 1)).collect::<Vec<_>>()).unwrap();
            let alpha = 1 + alpha_seed % (p as u64 - 1);
            let found = circulant_isomorphic(p, &s, &s.scaled(alpha)).unwrap();
            prop_assert!(found.is_some());
            prop_assert_eq!(s.scaled(found.unwrap()), s.scaled(alpha));
        }

        #[test]
        fn cycle_type_recovers_disjoint_union(lengths in prop::collection::vec(3u32..12, 1..6)) {
            let g = disjoint_cycles(&lengths).unwrap();
            let mut sorted = lengths.clone();
            sorted.sort_unstable();
            let found = cycle_type(&g).unwrap();
            prop_assert_eq!(found.lengths(), sorted.as_slice());
        }

        #[test]
        fn circulant_is_s_regular(n in 5u32..60, picks in prop::collection::vec(1u32..30, 1..4)) {
            let picks: Vec<u32> = picks.iter().map(|x| 1 + x % (n - 1)).collect();
            let s = ConnectionSet::symmetric(n, &picks).unwrap();
            let g = circulant(n, &s).unwrap();
            if n % 2 == 1 || !s.elements().contains(&(n / 2)) {
                prop_assert_eq!(g.regular_degree(), Some(s.len()));
            }
        }
    }
}
