//! Noncommutative lengths of chains: closed forms, the bare length, the
//! four bounds L1/L2/R1/R2 over admissible decompositions, and extremality.
//!
//! A decomposition cuts the weight sequence into subchains of length at
//! least 2. Parities of weights are always taken with respect to the total
//! chain: a subchain starting at global weight index g carries the offset
//! g - 1, and its parity sums are over global indices. The admissibility
//! test at a junction compares the 2x2 determinant of the two adjacent
//! parity-sum pairs against the parity of the cut index. The maximum
//! defining L1/R1 is evaluated with non-strict inequalities (the
//! boundary cases duplicate values of coarser decompositions, so the
//! maximum is unchanged); the extremality predicate is strict.

use serde::Serialize;

use crate::error::NcdError;
use crate::graph::{DiracOperator, WeightedGraph};
use crate::solver::{self, SolverConfig};

/// A finite positive weight sequence w_1..w_{n-1}; `|C| = n - 1` edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    weights: Vec<f64>,
}

impl Chain {
    pub fn new(weights: Vec<f64>) -> Result<Self, NcdError> {
        if weights.is_empty() {
            return Err(NcdError::EmptySequence);
        }
        for &w in &weights {
            if !(w > 0.0 && w.is_finite()) {
                return Err(NcdError::BadChainWeight(w));
            }
        }
        Ok(Self { weights })
    }

    /// Parses the CLI literal syntax `"1-2-1"` (dash-separated positive
    /// decimals; no scientific notation).
    pub fn parse(text: &str) -> Result<Self, NcdError> {
        let weights: Result<Vec<f64>, _> = text
            .split('-')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| NcdError::Parse(format!("bad chain weight \"{tok}\"")))
            })
            .collect();
        Self::new(weights?)
    }

    /// Graph-theoretic length |C| (number of edges).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// A chain always carries at least one weight.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len() + 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Geodesic length ℓ(C): the sum of the weights.
    pub fn geodesic_length(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn reversed(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.reverse();
        Self { weights }
    }

    /// The path-graph Dirac operator of the chain.
    pub fn to_dirac(&self) -> DiracOperator {
        let edges: Vec<(usize, usize, f64)> = self
            .weights
            .iter()
            .enumerate()
            .map(|(k, &w)| (k + 1, k + 2, w))
            .collect();
        DiracOperator::from_weights(&WeightedGraph::new(self.vertex_count(), edges).unwrap())
    }
}

/// Sums of weights at odd / even global index. `global_offset` is the
/// index of the subchain's first weight within the parent chain, minus 1.
pub fn parity_sums(c: &Chain, global_offset: usize) -> (f64, f64) {
    let mut odd = 0.0;
    let mut even = 0.0;
    for (t, &w) in c.weights.iter().enumerate() {
        if (global_offset + t + 1) % 2 == 1 {
            odd += w;
        } else {
            even += w;
        }
    }
    (odd, even)
}

/// Bare length L∅ = sqrt(Σ_odd² + Σ_even²).
pub fn bare_length(c: &Chain) -> f64 {
    let (odd, even) = parity_sums(c, 0);
    odd.hypot(even)
}

/// R∅ = max(Σ_odd, Σ_even).
pub fn r_bare(c: &Chain) -> f64 {
    let (odd, even) = parity_sums(c, 0);
    odd.max(even)
}

/// Cut indices i_1 < ... < i_p splitting the weights into subchains of
/// length at least 2 (empty = the trivial decomposition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    cuts: Vec<usize>,
}

impl ChainDecomposition {
    pub fn trivial() -> Self {
        Self { cuts: Vec::new() }
    }

    pub fn new(cuts: Vec<usize>, chain_len: usize) -> Result<Self, NcdError> {
        let mut prev = 0usize;
        for &i in &cuts {
            if i < 2 || i < prev + 2 {
                return Err(NcdError::InvalidParameter(format!(
                    "cut {i} leaves a subchain shorter than 2"
                )));
            }
            prev = i;
        }
        if !cuts.is_empty() && chain_len < prev + 2 {
            return Err(NcdError::InvalidParameter(format!(
                "cut {prev} leaves a final subchain shorter than 2"
            )));
        }
        Ok(Self { cuts })
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    /// The subchains together with their global offsets.
    pub fn subchains(&self, c: &Chain) -> Vec<(Chain, usize)> {
        let mut out = Vec::with_capacity(self.cuts.len() + 1);
        let mut start = 0usize;
        for &cut in self.cuts.iter().chain(std::iter::once(&c.len())) {
            let piece = Chain {
                weights: c.weights[start..cut].to_vec(),
            };
            out.push((piece, start));
            start = cut;
        }
        out
    }
}

/// Every decomposition into subchains of length >= 2, trivial one first.
pub fn enumerate_decompositions(c: &Chain) -> Vec<ChainDecomposition> {
    let m = c.len();
    let mut out = vec![ChainDecomposition::trivial()];
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(cuts) = stack.pop() {
        let lo = cuts.last().map(|&i| i + 2).unwrap_or(2);
        for i in lo..=m.saturating_sub(2) {
            let mut next = cuts.clone();
            next.push(i);
            out.push(ChainDecomposition { cuts: next.clone() });
            stack.push(next);
        }
    }
    out.sort_by(|a, b| (a.cuts.len(), &a.cuts).cmp(&(b.cuts.len(), &b.cuts)));
    out
}

/// Junction determinant: columns are the (even, odd) global parity sums
/// of the two adjacent subchains.
fn junction_det(left: (f64, f64), right: (f64, f64)) -> f64 {
    let (o1, e1) = left;
    let (o2, e2) = right;
    e1 * o2 - e2 * o1
}

fn admissible_l1(c: &Chain, d: &ChainDecomposition, strict: bool) -> bool {
    let pieces = d.subchains(c);
    for j in 0..d.cuts.len() {
        let delta = junction_det(
            parity_sums(&pieces[j].0, pieces[j].1),
            parity_sums(&pieces[j + 1].0, pieces[j + 1].1),
        );
        let cut_even = d.cuts[j] % 2 == 0;
        let ok = match (cut_even, strict) {
            (true, true) => delta < 0.0,
            (true, false) => delta <= 0.0,
            (false, true) => delta > 0.0,
            (false, false) => delta >= 0.0,
        };
        if !ok {
            return false;
        }
    }
    true
}

// The linear program behind R1 alternates x = s_j on odd and 1 - s_j on
// even global positions within each subchain, and its per-subchain
// optimum sits at s_j = 1 when Σ̃_odd > Σ̃_even, at s_j = 0 otherwise. A
// junction at an even cut index requires s_{j+1} <= s_j, at an odd one
// s_j <= s_{j+1}; spelled out on the parity sums this is the test below.
// (This orientation is the one consistent with R1 <= λ; cross-checked
// against direct LP solves.)
fn admissible_r1(c: &Chain, d: &ChainDecomposition, strict: bool) -> bool {
    let pieces = d.subchains(c);
    for j in 0..d.cuts.len() {
        let (o1, e1) = parity_sums(&pieces[j].0, pieces[j].1);
        let (o2, e2) = parity_sums(&pieces[j + 1].0, pieces[j + 1].1);
        let cut_even = d.cuts[j] % 2 == 0;
        let ok = if cut_even {
            if strict {
                o1 > e1 && o2 < e2
            } else {
                o1 >= e1 && o2 <= e2
            }
        } else if strict {
            o1 < e1 && o2 > e2
        } else {
            o1 <= e1 && o2 >= e2
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Non-strict L1 admissibility of a decomposition.
pub fn is_admissible_l1(c: &Chain, d: &ChainDecomposition) -> bool {
    admissible_l1(c, d, false)
}

/// Non-strict R1 admissibility of a decomposition.
pub fn is_admissible_r1(c: &Chain, d: &ChainDecomposition) -> bool {
    admissible_r1(c, d, false)
}

/// Strict L1 admissibility, the predicate behind extremality and the
/// coarse-graining property.
pub fn is_strictly_admissible_l1(c: &Chain, d: &ChainDecomposition) -> bool {
    admissible_l1(c, d, true)
}

/// L1 bound: max over admissible decompositions of the summed bare
/// lengths. Returns the value and the maximizing cut set.
pub fn l1(c: &Chain) -> (f64, Vec<usize>) {
    let mut best = f64::NEG_INFINITY;
    let mut best_cuts = Vec::new();
    for d in enumerate_decompositions(c) {
        if !is_admissible_l1(c, &d) {
            continue;
        }
        let value: f64 = d
            .subchains(c)
            .iter()
            .map(|(piece, offset)| {
                let (o, e) = parity_sums(piece, *offset);
                o.hypot(e)
            })
            .sum();
        if value > best {
            best = value;
            best_cuts = d.cuts().to_vec();
        }
    }
    (best, best_cuts)
}

/// R1 bound: max over admissible decompositions of the summed
/// max(Σ_even, Σ_odd). Returns the value and the maximizing cut set.
pub fn r1(c: &Chain) -> (f64, Vec<usize>) {
    let mut best = f64::NEG_INFINITY;
    let mut best_cuts = Vec::new();
    for d in enumerate_decompositions(c) {
        if !is_admissible_r1(c, &d) {
            continue;
        }
        let value: f64 = d
            .subchains(c)
            .iter()
            .map(|(piece, offset)| {
                let (o, e) = parity_sums(piece, *offset);
                o.max(e)
            })
            .sum();
        if value > best {
            best = value;
            best_cuts = d.cuts().to_vec();
        }
    }
    (best, best_cuts)
}

/// L2 = (n/2) max w_i, with n the vertex count.
pub fn l2(c: &Chain) -> f64 {
    let n = c.vertex_count() as f64;
    n / 2.0 * c.weights.iter().copied().fold(0.0, f64::max)
}

/// R2 = ℓ(C) / (2 cos(π/(n+1))), with n the vertex count.
pub fn r2(c: &Chain) -> f64 {
    let n = c.vertex_count() as f64;
    c.geodesic_length() / (2.0 * (std::f64::consts::PI / (n + 1.0)).cos())
}

const PATTERN_EPS: f64 = 1e-12;

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= PATTERN_EPS * a.abs().max(b.abs())
}

/// Noncommutative length λ(C). Dispatches to closed forms where they
/// exist, otherwise solves numerically on the path graph.
pub fn lambda_chain(c: &Chain, cfg: &SolverConfig) -> Result<f64, NcdError> {
    let w = &c.weights;
    let m = w.len();
    match m {
        1 => return Ok(w[0]),
        2 => return Ok(w[0].hypot(w[1])),
        3 => {
            return Ok(if w[1] > (w[0] * w[2]).sqrt() {
                w[0].hypot(w[1]) * w[2].hypot(w[1]) / w[1]
            } else {
                w[0] + w[2]
            })
        }
        _ => {}
    }
    if w.iter().all(|&x| nearly_equal(x, w[0])) {
        let k = m / 2;
        return Ok(if m % 2 == 0 {
            w[0] * ((k * (k + 1)) as f64).sqrt()
        } else {
            w[0] * (k + 1) as f64
        });
    }
    // (w1-w2)^k-w1 with w1 >= w2: λ = (k+1) w1
    if m % 2 == 1 {
        let w1 = w[0];
        let w2 = w[1];
        let alternating = w
            .iter()
            .enumerate()
            .all(|(t, &x)| nearly_equal(x, if t % 2 == 0 { w1 } else { w2 }));
        if alternating && w1 >= w2 {
            return Ok((m / 2 + 1) as f64 * w1);
        }
    }
    let d = c.to_dirac();
    Ok(solver::nc_distance(&d, 1, c.vertex_count(), cfg)?.value)
}

/// A chain is extremal iff it has no strictly admissible 2-decomposition
/// (equivalently L1 = L∅).
pub fn is_extremal(c: &Chain) -> bool {
    let m = c.len();
    if m < 4 {
        return true;
    }
    for cut in 2..=(m - 2) {
        let d = ChainDecomposition { cuts: vec![cut] };
        if admissible_l1(c, &d, true) {
            return false;
        }
    }
    true
}

/// All chain bounds at a glance.
#[derive(Debug, Clone, Serialize)]
pub struct ChainBoundsReport {
    pub bare: f64,
    pub r_bare: f64,
    pub l1: f64,
    pub l2: f64,
    pub r1: f64,
    pub r2: f64,
    pub lambda: Option<f64>,
    pub extremal: bool,
    pub best_decomposition_l1: Vec<usize>,
    pub best_decomposition_r1: Vec<usize>,
}

/// Computes every bound of the chain; λ is filled unless the numeric
/// solver fails.
pub fn chain_bounds_report(c: &Chain, cfg: &SolverConfig) -> ChainBoundsReport {
    let (l1_value, l1_cuts) = l1(c);
    let (r1_value, r1_cuts) = r1(c);
    ChainBoundsReport {
        bare: bare_length(c),
        r_bare: r_bare(c),
        l1: l1_value,
        l2: l2(c),
        r1: r1_value,
        r2: r2(c),
        lambda: lambda_chain(c, cfg).ok(),
        extremal: is_extremal(c),
        best_decomposition_l1: l1_cuts,
        best_decomposition_r1: r1_cuts,
    }
}
