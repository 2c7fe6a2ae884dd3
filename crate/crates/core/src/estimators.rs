//! Distance estimates: blob-chain sandwich, split-graph constructions and
//! the degree lower bound, edge-perturbation intervals, and the
//! induced-path upper bound.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::chain::{self, Chain};
use crate::decomposition::{self, BlobChainDecomposition};
use crate::error::NcdError;
use crate::graph::{DiracOperator, Orientation, WeightedGraph};
use crate::solver::{self, SolverConfig};
use crate::spectral::ComplexMatrix;

/// An interval bracketing a distance, with per-bound provenance.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceEstimate {
    pub lower: f64,
    pub upper: f64,
    /// (bound name, value) pairs feeding the interval.
    pub provenance: Vec<(String, f64)>,
    pub exact: Option<f64>,
}

impl DistanceEstimate {
    /// Interval sanity: lower <= upper and the exact value, when present,
    /// lies inside (tolerances per the interval contract).
    pub fn is_consistent(&self) -> bool {
        if self.lower > self.upper + 1e-9 {
            return false;
        }
        match self.exact {
            Some(e) => self.lower - 1e-6 <= e && e <= self.upper + 1e-6,
            None => true,
        }
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<(), NcdError> {
    for &v in &[i, j] {
        if v == 0 || v > n {
            return Err(NcdError::VertexOutOfRange { vertex: v, n });
        }
    }
    Ok(())
}

/// λ of one blob: the distance between its entry and exit cutpoints,
/// computed on the blob alone.
fn blob_transverse_length(
    d: &DiracOperator,
    blob: &decomposition::Blob,
    cfg: &SolverConfig,
) -> Result<f64, NcdError> {
    if blob.is_degenerate() {
        return Ok(0.0);
    }
    let (sub, map) = d.restrict(&blob.vertices)?;
    let li = map.iter().position(|&v| v == blob.entry).unwrap() + 1;
    let lj = map.iter().position(|&v| v == blob.exit).unwrap() + 1;
    Ok(solver::nc_distance(&sub, li, lj, cfg)?.value)
}

/// Blob-chain sandwich:
/// max(Σλ(b) + Σλ(C'), Σλ(C)) <= d(i,j) <= Σλ(b) + Σλ(C),
/// with C' the chains amputated from their first and last edges.
pub fn blob_chain_bounds(
    d: &DiracOperator,
    i: usize,
    j: usize,
    cfg: &SolverConfig,
) -> Result<DistanceEstimate, NcdError> {
    check_pair(d.n(), i, j)?;
    let weights = d.weights();
    if !weights.finite_component(i)?.contains(&j) {
        return Err(NcdError::Disconnected);
    }
    // decomposition runs on the structural component (edge set including
    // +inf edges); the amputated-chain argument needs only the structure
    let component = weights.structural_component(i)?;
    let (sub, map) = weights.induced_subgraph(&component)?;
    let to_local = |v: usize| map.iter().position(|&x| x == v).unwrap() + 1;
    let bc_local = decomposition::blob_chain(&sub, to_local(i), to_local(j))?;
    let bc = BlobChainDecomposition {
        blobs: bc_local
            .blobs
            .iter()
            .map(|b| decomposition::Blob {
                vertices: b.vertices.iter().map(|&v| map[v - 1]).collect(),
                entry: map[b.entry - 1],
                exit: map[b.exit - 1],
            })
            .collect(),
        chains: bc_local
            .chains
            .iter()
            .map(|c| decomposition::BridgeChain {
                vertices: c.vertices.iter().map(|&v| map[v - 1]).collect(),
                weights: c.weights.clone(),
            })
            .collect(),
    };

    let mut blob_sum = 0.0;
    for blob in &bc.blobs {
        blob_sum += blob_transverse_length(d, blob, cfg)?;
    }
    let mut chain_sum = 0.0;
    let mut amputated_sum = 0.0;
    for piece in &bc.chains {
        let c = piece.chain()?;
        chain_sum += chain::lambda_chain(&c, cfg)?;
        if let Some(inner) = decomposition::amputate(&c) {
            amputated_sum += chain::lambda_chain(&inner, cfg)?;
        }
    }
    let lower_amputated = blob_sum + amputated_sum;
    let lower = lower_amputated.max(chain_sum);
    let upper = blob_sum + chain_sum;
    Ok(DistanceEstimate {
        lower,
        upper,
        provenance: vec![
            ("blob-chain-lower-amputated".into(), lower_amputated),
            ("blob-chain-lower-chains".into(), chain_sum),
            ("blob-chain-upper".into(), upper),
        ],
        exact: None,
    })
}

/// The split-graph spectral triple: one 2x2 block per edge.
#[derive(Debug, Clone)]
pub struct SplitTriple {
    /// Split vertices (edge, sign), sign false = source, true = target;
    /// index k of this list is the row/column of `split_dirac`.
    pub split_vertices: Vec<((usize, usize), bool)>,
    /// Projection p: split vertex index -> endpoint vertex.
    pub projection: Vec<usize>,
    /// Block-diagonal split Dirac, 2|E| x 2|E|, block norm 1/w(e).
    pub split_dirac: ComplexMatrix,
    /// Vertex degrees Δ(1..n).
    pub degrees: Vec<usize>,
    /// Scaled Dirac D_Δ = Δ^{-1/2} D Δ^{-1/2}.
    pub scaled_dirac: DiracOperator,
}

/// Builds the split triple of an oriented graph.
pub fn split_triple(d: &DiracOperator, orientation: &Orientation) -> SplitTriple {
    let weights = d.weights();
    let n = d.n();
    let mut split_vertices = Vec::new();
    let mut projection = Vec::new();
    let edges: Vec<(usize, usize, f64)> = weights.edges().collect();
    let mut split_dirac = ComplexMatrix::zeros(2 * edges.len());
    for (k, &(u, v, w)) in edges.iter().enumerate() {
        let (s, t) = orientation.source_target(u, v).unwrap_or((u, v));
        split_vertices.push(((u, v), false));
        split_vertices.push(((u, v), true));
        projection.push(s);
        projection.push(t);
        if w.is_finite() {
            let x = Complex64::new(1.0 / w, 0.0);
            split_dirac[(2 * k, 2 * k + 1)] = x;
            split_dirac[(2 * k + 1, 2 * k)] = x;
        }
    }
    let mut degrees = vec![0usize; n];
    for &(u, v, _) in &edges {
        degrees[u - 1] += 1;
        degrees[v - 1] += 1;
    }
    let scale: Vec<f64> = degrees
        .iter()
        .map(|&deg| 1.0 / (deg.max(1) as f64).sqrt())
        .collect();
    let scaled = ComplexMatrix::from_fn(n, |r, c| d.matrix()[(r, c)] * scale[r] * scale[c]);
    let scaled_dirac =
        DiracOperator::new(n, scaled, d.edge_set().clone()).expect("scaling preserves validity");
    SplitTriple {
        split_vertices,
        projection,
        split_dirac,
        degrees,
        scaled_dirac,
    }
}

/// Distance induced by the split triple. The commutator norm there is
/// `max_e |a(e+) - a(e-)|/w(e)`, and the supremum of `a(j) - a(i)` under
/// that constraint is attained by the Lipschitz extension `a = ℓ(i, ·)`,
/// so the value reduces to the geodesic distance.
pub fn split_distance(d: &DiracOperator, i: usize, j: usize) -> Result<f64, NcdError> {
    check_pair(d.n(), i, j)?;
    let value = d.weights().geodesic_distance(i, j)?;
    if value.is_infinite() {
        return Err(NcdError::Disconnected);
    }
    Ok(value)
}

/// Both degree-based lower bounds for a query pair.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeBound {
    /// Geodesic distance ℓ(i, j).
    pub geodesic: f64,
    /// Δ(G), the maximal vertex degree.
    pub max_degree: usize,
    /// The cheap bound ℓ/Δ(G); needs no eigensolve.
    pub cheap_lower: f64,
    /// d^{D_Δ}(i, j) on the degree-scaled operator.
    pub scaled_distance: f64,
    /// The sharper bound d^{D_Δ}/Δ(G).
    pub sharp_lower: f64,
}

/// Degree lower bound: ℓ ≤ d^{D_Δ} ≤ Δ(G)·d, hence
/// ℓ/Δ(G) ≤ d^{D_Δ}/Δ(G) ≤ d.
pub fn degree_lower_bound(
    d: &DiracOperator,
    i: usize,
    j: usize,
    cfg: &SolverConfig,
) -> Result<DegreeBound, NcdError> {
    check_pair(d.n(), i, j)?;
    let weights = d.weights();
    let geodesic = weights.geodesic_distance(i, j)?;
    if geodesic.is_infinite() {
        return Err(NcdError::Disconnected);
    }
    let max_degree = weights.max_degree();
    let triple = split_triple(d, &Orientation::canonical(&weights));
    let scaled_distance = solver::nc_distance(&triple.scaled_dirac, i, j, cfg)?.value;
    Ok(DegreeBound {
        geodesic,
        max_degree,
        cheap_lower: geodesic / max_degree as f64,
        scaled_distance,
        sharp_lower: scaled_distance / max_degree as f64,
    })
}

/// Toggles a set of pairwise vertex-disjoint edges (present -> removed,
/// absent -> added with the given weight) and brackets the perturbed
/// distance d'(x, y):
///
/// d/(1+m) <= d' <= (1+m') d,  m = max_s d(i_s, j_s)/w_s (and m' on D').
///
/// For a single toggled edge joining x and y the sharper interval from
/// |1/d - 1/d'| <= 1/w is intersected in. Returns the estimate and the
/// perturbed operator.
pub fn edge_perturbation_bounds(
    d: &DiracOperator,
    perturbation: &[(usize, usize, f64)],
    x: usize,
    y: usize,
    cfg: &SolverConfig,
) -> Result<(DistanceEstimate, DiracOperator), NcdError> {
    let n = d.n();
    check_pair(n, x, y)?;
    let mut touched = BTreeSet::new();
    for &(u, v, w) in perturbation {
        check_pair(n, u, v)?;
        if u == v {
            return Err(NcdError::LoopEdge(u));
        }
        if !(w > 0.0) {
            return Err(NcdError::NonPositiveWeight { u, v, weight: w });
        }
        if !touched.insert(u) || !touched.insert(v) {
            return Err(NcdError::EdgesNotDisjoint);
        }
    }

    // build D' by toggling entries
    let mut matrix = d.matrix().clone();
    let mut edges = d.edge_set().clone();
    let mut effective_weights = Vec::with_capacity(perturbation.len());
    for &(u, v, w) in perturbation {
        let key = (u.min(v), u.max(v));
        let existing = d.entry(u, v);
        if edges.contains(&key) {
            // removal: the perturbation magnitude is the current entry
            let current = existing.norm();
            effective_weights.push(if current == 0.0 { f64::INFINITY } else { 1.0 / current });
            matrix[(u - 1, v - 1)] = Complex64::new(0.0, 0.0);
            matrix[(v - 1, u - 1)] = Complex64::new(0.0, 0.0);
            edges.remove(&key);
        } else {
            effective_weights.push(w);
            if w.is_finite() {
                let z = Complex64::new(1.0 / w, 0.0);
                matrix[(u - 1, v - 1)] = z;
                matrix[(v - 1, u - 1)] = z;
            }
            edges.insert(key);
        }
    }
    let d_prime = DiracOperator::new(n, matrix, edges)?;

    let base = solver::nc_distance(d, x, y, cfg)?.value;
    let mut m = 0.0f64;
    let mut m_prime = 0.0f64;
    for (s, &(u, v, _)) in perturbation.iter().enumerate() {
        let w = effective_weights[s];
        let on_d = solver::nc_distance(d, u, v, cfg)?.value;
        let on_dp = solver::nc_distance(&d_prime, u, v, cfg)?.value;
        m = m.max(on_d / w);
        m_prime = m_prime.max(on_dp / w);
    }
    let mut lower = base / (1.0 + m);
    let mut upper = (1.0 + m_prime) * base;
    let mut provenance = vec![
        ("perturbation-lower".into(), lower),
        ("perturbation-upper".into(), upper),
    ];
    if perturbation.len() == 1 {
        let (u, v, _) = perturbation[0];
        if (u.min(v), u.max(v)) == (x.min(y), x.max(y)) {
            // single edge joining the query pair: |1/d - 1/d'| <= 1/w
            let w = effective_weights[0];
            let inv_lo = 1.0 / base + 1.0 / w;
            let inv_hi = 1.0 / base - 1.0 / w;
            let refine_lo = 1.0 / inv_lo;
            let refine_hi = if inv_hi > 0.0 { 1.0 / inv_hi } else { f64::INFINITY };
            provenance.push(("single-edge-lower".into(), refine_lo));
            provenance.push(("single-edge-upper".into(), refine_hi));
            lower = lower.max(refine_lo);
            upper = upper.min(refine_hi);
        }
    }
    Ok((
        DistanceEstimate {
            lower,
            upper,
            provenance,
            exact: None,
        },
        d_prime,
    ))
}

/// Minimum of λ over all induced paths from i to j (adjacency through
/// nonzero entries). Always an upper bound for the distance; equal to it
/// on trees. Errors once more than `cap` paths have been enumerated.
pub fn induced_path_upper_bound(
    d: &DiracOperator,
    i: usize,
    j: usize,
    cap: usize,
) -> Result<f64, NcdError> {
    check_pair(d.n(), i, j)?;
    if i == j {
        return Ok(0.0);
    }
    let weights = d.weights();
    let n = d.n();
    let mut adjacent = vec![vec![false; n + 1]; n + 1];
    for (u, v, w) in weights.edges() {
        if w.is_finite() {
            adjacent[u][v] = true;
            adjacent[v][u] = true;
        }
    }
    let cfg = SolverConfig::default();
    let mut best = f64::INFINITY;
    let mut count = 0usize;
    let mut path = vec![i];
    let mut on_path = vec![false; n + 1];
    on_path[i] = true;

    fn dfs(
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        adjacent: &Vec<Vec<bool>>,
        weights: &WeightedGraph,
        j: usize,
        cap: usize,
        count: &mut usize,
        best: &mut f64,
        cfg: &SolverConfig,
    ) -> Result<(), NcdError> {
        let v = *path.last().unwrap();
        if v == j {
            *count += 1;
            if *count > cap {
                return Err(NcdError::EnumerationCapExceeded(cap));
            }
            let w: Vec<f64> = path
                .windows(2)
                .map(|p| weights.weight(p[0], p[1]).unwrap())
                .collect();
            let lam = chain::lambda_chain(&Chain::new(w)?, cfg)?;
            if lam < *best {
                *best = lam;
            }
            return Ok(());
        }
        for u in 1..on_path.len() {
            if !adjacent[v][u] || on_path[u] {
                continue;
            }
            // induced: u may touch only the current path tip
            if path[..path.len() - 1].iter().any(|&p| adjacent[u][p]) {
                continue;
            }
            path.push(u);
            on_path[u] = true;
            let r = dfs(path, on_path, adjacent, weights, j, cap, count, best, cfg);
            path.pop();
            on_path[u] = false;
            r?;
        }
        Ok(())
    }
    dfs(
        &mut path,
        &mut on_path,
        &adjacent,
        &weights,
        j,
        cap,
        &mut count,
        &mut best,
        &cfg,
    )?;
    if best.is_infinite() {
        return Err(NcdError::Disconnected);
    }
    Ok(best)
}

pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Every bound merged into one interval (for the CLI `bounds` command).
pub fn merged_bounds(
    d: &DiracOperator,
    i: usize,
    j: usize,
    cfg: &SolverConfig,
    with_exact: bool,
) -> Result<DistanceEstimate, NcdError> {
    check_pair(d.n(), i, j)?;
    let weights = d.weights();
    let geodesic = weights.geodesic_distance(i, j)?;
    if geodesic.is_infinite() {
        return Err(NcdError::Disconnected);
    }
    let degree = degree_lower_bound(d, i, j, cfg)?;
    let blob = blob_chain_bounds(d, i, j, cfg)?;
    let mut provenance = vec![
        ("geodesic-upper".into(), geodesic),
        ("degree-cheap-lower".into(), degree.cheap_lower),
        ("degree-scaled-lower".into(), degree.sharp_lower),
    ];
    provenance.extend(blob.provenance.clone());
    let mut lower = degree
        .cheap_lower
        .max(degree.sharp_lower)
        .max(blob.lower);
    let mut upper = geodesic.min(blob.upper);
    if let Ok(induced) = induced_path_upper_bound(d, i, j, DEFAULT_PATH_CAP) {
        provenance.push(("induced-path-upper".into(), induced));
        upper = upper.min(induced);
    }
    let exact = if with_exact {
        let value = solver::nc_distance(d, i, j, cfg)?.value;
        provenance.push(("exact".into(), value));
        Some(value)
    } else {
        None
    };
    // bounds are certified only up to solver tolerance; keep the interval ordered
    if lower > upper {
        let mid = 0.5 * (lower + upper);
        lower = mid;
        upper = mid;
    }
    Ok(DistanceEstimate {
        lower,
        upper,
        provenance,
        exact,
    })
}
