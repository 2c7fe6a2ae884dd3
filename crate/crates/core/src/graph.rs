//! Graph and Dirac-operator data model, validation, geodesic distances,
//! JSON I/O and random instance generation.
//!
//! Vertices are 1-based throughout the public API. An edge may carry the
//! weight `+inf`; the corresponding Dirac entry is zero but the edge stays
//! recorded, so edge membership is independent of the matrix.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::NcdError;
use crate::spectral::{self, ComplexMatrix};

/// Undirected weighted graph with no loops; weights in (0, +inf].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

fn normalize_edge(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl WeightedGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, NcdError> {
        let mut map = BTreeMap::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(NcdError::LoopEdge(u));
            }
            for &x in &[u, v] {
                if x == 0 || x > n {
                    return Err(NcdError::VertexOutOfRange { vertex: x, n });
                }
            }
            if !(w > 0.0) {
                return Err(NcdError::NonPositiveWeight { u, v, weight: w });
            }
            if map.insert(normalize_edge(u, v), w).is_some() {
                return Err(NcdError::DuplicateEdge(u, v));
            }
        }
        Ok(Self { n, edges: map })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order as (u, v, w) with u < v.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.edges.get(&normalize_edge(u, v)).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&normalize_edge(u, v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.keys().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Maximal vertex degree Δ(G); counts every incident edge.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n + 1];
        for &(u, v) in self.edges.keys() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    fn check_vertex(&self, v: usize) -> Result<(), NcdError> {
        if v == 0 || v > self.n {
            return Err(NcdError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Neighbors through finite-weight edges only.
    pub fn finite_neighbors(&self, v: usize) -> Vec<(usize, f64)> {
        self.edges
            .iter()
            .filter_map(|(&(a, b), &w)| {
                if !w.is_finite() {
                    None
                } else if a == v {
                    Some((b, w))
                } else if b == v {
                    Some((a, w))
                } else {
                    None
                }
            })
            .collect()
    }

    /// All neighbors, including through `+inf` edges.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Geodesic distances from `source` to every vertex; `+inf` off the
    /// finite-weight component.
    pub fn geodesics_from(&self, source: usize) -> Result<Vec<f64>, NcdError> {
        self.check_vertex(source)?;
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n + 1];
        for (&(u, v), &w) in &self.edges {
            if w.is_finite() {
                adj[u].push((v, w));
                adj[v].push((u, w));
            }
        }
        let mut dist = vec![f64::INFINITY; self.n + 1];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem {
            dist: 0.0,
            vertex: source,
        });
        while let Some(HeapItem { dist: d, vertex: v }) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, w) in &adj[v] {
                let nd = d + w;
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(HeapItem { dist: nd, vertex: u });
                }
            }
        }
        dist.remove(0);
        Ok(dist)
    }

    /// Shortest weighted path length ℓ(i, j); `+inf` across components.
    pub fn geodesic_distance(&self, i: usize, j: usize) -> Result<f64, NcdError> {
        self.check_vertex(j)?;
        Ok(self.geodesics_from(i)?[j - 1])
    }

    /// Vertices reachable from `v` through any edge (including `+inf`),
    /// sorted.
    pub fn structural_component(&self, v: usize) -> Result<Vec<usize>, NcdError> {
        self.check_vertex(v)?;
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for u in self.neighbors(x) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        Ok((1..=self.n).filter(|&u| seen[u]).collect())
    }

    /// Vertices reachable from `v` through finite-weight edges, sorted.
    pub fn finite_component(&self, v: usize) -> Result<Vec<usize>, NcdError> {
        self.check_vertex(v)?;
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for (u, _) in self.finite_neighbors(x) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        Ok((1..=self.n).filter(|&u| seen[u]).collect())
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.finite_component(1).map(|c| c.len() == self.n).unwrap_or(false)
    }

    /// Induced subgraph on `vertices` (deduplicated, sorted); vertices are
    /// relabelled 1..k, the returned map sends new labels to old ones.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Self, Vec<usize>), NcdError> {
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        if set.is_empty() {
            return Err(NcdError::EmptySubset);
        }
        for &v in &set {
            self.check_vertex(v)?;
        }
        let old: Vec<usize> = set.iter().copied().collect();
        let mut index = BTreeMap::new();
        for (i, &v) in old.iter().enumerate() {
            index.insert(v, i + 1);
        }
        let edges = self
            .edges
            .iter()
            .filter(|(&(u, v), _)| set.contains(&u) && set.contains(&v))
            .map(|(&(u, v), &w)| (index[&u], index[&v], w));
        let g = Self::new(old.len(), edges.collect::<Vec<_>>())?;
        Ok((g, old))
    }

    /// Reproducible pseudo-random connected graph. Each candidate edge is
    /// drawn with probability `edge_density`, then components are joined by
    /// extra random edges until the graph is connected.
    pub fn random_instance(
        seed: u64,
        n: usize,
        edge_density: f64,
        weight_range: (f64, f64),
    ) -> Result<Self, NcdError> {
        if n < 2 {
            return Err(NcdError::TooFewVertices(n));
        }
        if !(0.0..=1.0).contains(&edge_density) {
            return Err(NcdError::InvalidParameter(format!(
                "edge density {edge_density} outside [0,1]"
            )));
        }
        let (lo, hi) = weight_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(NcdError::InvalidParameter(format!(
                "weight range [{lo},{hi}] must be positive and finite"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw_weight = |rng: &mut ChaCha8Rng| {
            if lo == hi {
                lo
            } else {
                rng.gen_range(lo..hi)
            }
        };
        let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                if rng.gen::<f64>() < edge_density {
                    let w = draw_weight(&mut rng);
                    edges.insert((u, v), w);
                }
            }
        }
        // union-find to join remaining components
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(u, v) in edges.keys() {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
        loop {
            let mut roots = BTreeSet::new();
            for v in 1..=n {
                roots.insert(find(&mut parent, v));
            }
            if roots.len() <= 1 {
                break;
            }
            let roots: Vec<usize> = roots.into_iter().collect();
            let a = roots[0];
            let b = roots[1];
            let pick = |rng: &mut ChaCha8Rng, parent: &mut Vec<usize>, root: usize| {
                let members: Vec<usize> = (1..=n).filter(|&v| find(parent, v) == root).collect();
                members[rng.gen_range(0..members.len())]
            };
            let u = pick(&mut rng, &mut parent, a);
            let v = pick(&mut rng, &mut parent, b);
            let w = draw_weight(&mut rng);
            edges.insert(normalize_edge(u, v), w);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
        Ok(Self { n, edges })
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|(&(u, v), &w)| {
                let w_value = if w.is_finite() { json!(w) } else { json!("inf") };
                json!({"u": u, "v": v, "w": w_value})
            })
            .collect();
        json!({"n": self.n, "edges": edges})
    }
}

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // min-heap on distance
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Self-adjoint matrix supported on a declared edge set, zero diagonal.
#[derive(Debug, Clone)]
pub struct DiracOperator {
    n: usize,
    matrix: ComplexMatrix,
    edges: BTreeSet<(usize, usize)>,
}

impl DiracOperator {
    /// Validates self-adjointness, zero diagonal and edge compatibility.
    pub fn new(
        n: usize,
        matrix: ComplexMatrix,
        edges: BTreeSet<(usize, usize)>,
    ) -> Result<Self, NcdError> {
        if matrix.dim() != n {
            return Err(NcdError::DimensionMismatch(matrix.dim(), n));
        }
        for &(u, v) in &edges {
            if u == v {
                return Err(NcdError::LoopEdge(u));
            }
            for &x in &[u, v] {
                if x == 0 || x > n {
                    return Err(NcdError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u > v {
                return Err(NcdError::Parse(format!("edge ({u},{v}) not normalized")));
            }
        }
        let scale = matrix.max_abs().max(1.0);
        let defect = matrix.hermitian_defect();
        if defect > 1e-12 * scale {
            return Err(NcdError::NotHermitian(defect));
        }
        for i in 0..n {
            if matrix[(i, i)].norm() != 0.0 {
                return Err(NcdError::NonZeroDiagonal(i + 1));
            }
        }
        for r in 0..n {
            for c in (r + 1)..n {
                if matrix[(r, c)].norm() != 0.0 && !edges.contains(&(r + 1, c + 1)) {
                    return Err(NcdError::EntryOffEdgeSet(r + 1, c + 1));
                }
            }
        }
        // exact symmetrization so downstream code can rely on it
        let matrix = ComplexMatrix::from_fn(n, |r, c| {
            if r < c {
                matrix[(r, c)]
            } else if r > c {
                matrix[(c, r)].conj()
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { n, matrix, edges })
    }

    /// Canonical operator of a weighted graph: entry 1/w per edge (0 for
    /// weight `+inf`), real non-negative.
    pub fn from_weights(g: &WeightedGraph) -> Self {
        let n = g.vertex_count();
        let mut matrix = ComplexMatrix::zeros(n);
        let mut edges = BTreeSet::new();
        for (u, v, w) in g.edges() {
            edges.insert((u, v));
            if w.is_finite() {
                let x = Complex64::new(1.0 / w, 0.0);
                matrix[(u - 1, v - 1)] = x;
                matrix[(v - 1, u - 1)] = x;
            }
        }
        Self { n, matrix, edges }
    }

    /// Same as [`from_weights`](Self::from_weights) but with a phase
    /// (radians) per edge: entry e^{iφ}/w.
    pub fn from_weights_with_phases(
        g: &WeightedGraph,
        phases: &BTreeMap<(usize, usize), f64>,
    ) -> Result<Self, NcdError> {
        let n = g.vertex_count();
        let mut matrix = ComplexMatrix::zeros(n);
        let mut edges = BTreeSet::new();
        for (u, v, w) in g.edges() {
            edges.insert((u, v));
            if w.is_finite() {
                let phi = phases.get(&(u, v)).copied().unwrap_or(0.0);
                if !phi.is_finite() {
                    return Err(NcdError::InvalidParameter(format!(
                        "phase on edge ({u},{v}) must be finite"
                    )));
                }
                let x = Complex64::from_polar(1.0 / w, phi);
                matrix[(u - 1, v - 1)] = x;
                matrix[(v - 1, u - 1)] = x.conj();
            }
        }
        Ok(Self { n, matrix, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Entry D_{uv} with 1-based vertex labels.
    pub fn entry(&self, u: usize, v: usize) -> Complex64 {
        self.matrix[(u - 1, v - 1)]
    }

    /// Weighted graph with w = 1/|D_uv| per declared edge (`+inf` when the
    /// entry is zero).
    pub fn weights(&self) -> WeightedGraph {
        let mut map = BTreeMap::new();
        for &(u, v) in &self.edges {
            let m = self.entry(u, v).norm();
            let w = if m == 0.0 { f64::INFINITY } else { 1.0 / m };
            map.insert((u, v), w);
        }
        WeightedGraph {
            n: self.n,
            edges: map,
        }
    }

    /// Submatrix D_{V'} on the induced subgraph; vertices relabelled 1..k,
    /// returned map sends new labels to old ones.
    pub fn restrict(&self, vertices: &[usize]) -> Result<(Self, Vec<usize>), NcdError> {
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        if set.is_empty() {
            return Err(NcdError::EmptySubset);
        }
        for &v in &set {
            if v == 0 || v > self.n {
                return Err(NcdError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        let old: Vec<usize> = set.iter().copied().collect();
        let k = old.len();
        let matrix = ComplexMatrix::from_fn(k, |r, c| self.entry(old[r], old[c]));
        let mut edges = BTreeSet::new();
        for r in 0..k {
            for c in (r + 1)..k {
                if self.edges.contains(&normalize_edge(old[r], old[c])) {
                    edges.insert((r + 1, c + 1));
                }
            }
        }
        Ok((
            Self {
                n: k,
                matrix,
                edges,
            },
            old,
        ))
    }

    /// Commutator [D, π(a)] as a dense matrix.
    pub fn commutator(&self, a: &Potential) -> Result<ComplexMatrix, NcdError> {
        spectral::commutator(&self.matrix, a.as_slice())
    }

    /// Vertices reachable from `v` through nonzero entries, sorted.
    pub fn finite_component(&self, v: usize) -> Result<Vec<usize>, NcdError> {
        self.weights().finite_component(v)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.n * self.n)
            .map(|idx| {
                let z = self.matrix[(idx / self.n, idx % self.n)];
                json!([z.re, z.im])
            })
            .collect();
        let edges: Vec<Value> = self.edges.iter().map(|&(u, v)| json!({"u": u, "v": v})).collect();
        json!({"n": self.n, "dirac": entries, "edges": edges})
    }
}

/// Edge orientation: a (source, target) pair per edge.
#[derive(Debug, Clone)]
pub struct Orientation {
    map: BTreeMap<(usize, usize), (usize, usize)>,
}

impl Orientation {
    /// Canonical orientation: source = smaller endpoint.
    pub fn canonical(g: &WeightedGraph) -> Self {
        let map = g.edges().map(|(u, v, _)| ((u, v), (u, v))).collect();
        Self { map }
    }

    pub fn source_target(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        self.map.get(&normalize_edge(u, v)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        self.map.iter().map(|(&e, &st)| (e, st))
    }
}

/// Real-valued vertex potential (a function in the commutative algebra).
#[derive(Debug, Clone, PartialEq)]
pub struct Potential(Vec<f64>);

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self, NcdError> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(NcdError::InvalidParameter(format!(
                "potential entries must be finite, got {bad}"
            )));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Value at a 1-based vertex.
    pub fn value(&self, vertex: usize) -> f64 {
        self.0[vertex - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A parsed input document: either a weighted edge list or an explicit
/// Dirac matrix with its declared edge set.
#[derive(Debug, Clone)]
pub enum GraphDocument {
    Weighted(WeightedGraph),
    Dirac(DiracOperator),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: usize,
    edges: Vec<RawEdge>,
    #[serde(default)]
    dirac: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: usize,
    v: usize,
    #[serde(default)]
    w: Option<RawWeight>,
    #[serde(default)]
    phase: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWeight {
    Number(f64),
    Text(String),
}

impl RawWeight {
    fn value(&self) -> Result<f64, NcdError> {
        match self {
            RawWeight::Number(x) => Ok(*x),
            RawWeight::Text(s) if s == "inf" => Ok(f64::INFINITY),
            RawWeight::Text(s) => Err(NcdError::Parse(format!(
                "weight must be a positive number or \"inf\", got \"{s}\""
            ))),
        }
    }
}

/// Parses a JSON graph or Dirac document.
pub fn parse_graph(text: &str) -> Result<GraphDocument, NcdError> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| NcdError::Parse(e.to_string()))?;
    match raw.dirac {
        Some(entries) => {
            if entries.len() != raw.n * raw.n {
                return Err(NcdError::Parse(format!(
                    "dirac matrix needs {} entries, got {}",
                    raw.n * raw.n,
                    entries.len()
                )));
            }
            let matrix = ComplexMatrix::from_fn(raw.n, |r, c| {
                let [re, im] = entries[r * raw.n + c];
                Complex64::new(re, im)
            });
            let mut edges = BTreeSet::new();
            for e in &raw.edges {
                if e.w.is_some() || e.phase.is_some() {
                    return Err(NcdError::Parse(
                        "edges of a dirac document carry no weight or phase".into(),
                    ));
                }
                if e.u == e.v {
                    return Err(NcdError::LoopEdge(e.u));
                }
                if !edges.insert(normalize_edge(e.u, e.v)) {
                    return Err(NcdError::DuplicateEdge(e.u, e.v));
                }
            }
            Ok(GraphDocument::Dirac(DiracOperator::new(
                raw.n, matrix, edges,
            )?))
        }
        None => {
            let mut triples = Vec::new();
            let mut phases = BTreeMap::new();
            let mut any_phase = false;
            for e in &raw.edges {
                let w = match &e.w {
                    Some(w) => w.value()?,
                    None => {
                        return Err(NcdError::Parse(format!(
                            "edge ({},{}) is missing its weight",
                            e.u, e.v
                        )))
                    }
                };
                triples.push((e.u, e.v, w));
                if let Some(phi) = e.phase {
                    any_phase = true;
                    phases.insert(normalize_edge(e.u, e.v), phi);
                }
            }
            let graph = WeightedGraph::new(raw.n, triples)?;
            if any_phase {
                Ok(GraphDocument::Dirac(DiracOperator::from_weights_with_phases(
                    &graph, &phases,
                )?))
            } else {
                Ok(GraphDocument::Weighted(graph))
            }
        }
    }
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, NcdError> {
        parse_graph(text)
    }

    /// The canonical Dirac operator for this document.
    pub fn dirac(&self) -> DiracOperator {
        match self {
            GraphDocument::Weighted(g) => DiracOperator::from_weights(g),
            GraphDocument::Dirac(d) => d.clone(),
        }
    }

    /// The weighted graph for this document.
    pub fn graph(&self) -> WeightedGraph {
        match self {
            GraphDocument::Weighted(g) => g.clone(),
            GraphDocument::Dirac(d) => d.weights(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GraphDocument::Weighted(g) => g.to_json(),
            GraphDocument::Dirac(d) => d.to_json(),
        }
    }
}
