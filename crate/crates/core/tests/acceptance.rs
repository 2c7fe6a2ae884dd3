//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! every line).
//!
//! Criterion 3 pins the published reference values for the four worked
//! chains. Two cells of the 1-2-1-2-1 row (lambda ≈ 4.4, L1 ≈ 5.1)
//! disagree with recomputation — the correct values are 2√5 ≈ 4.47 and
//! 5 exactly, confirmed by independent optimizers — so that test fails
//! by design and documents the discrepancy; `ncdist report` shows the
//! same two flags.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ncdist::chain::{self, Chain};
use ncdist::decomposition;
use ncdist::estimators;
use ncdist::graph::{DiracOperator, WeightedGraph};
use ncdist::solver::{self, SolverConfig};
use ncdist::spectral;

fn conclude(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("{criterion}: PASS");
    } else {
        println!("{criterion}: FAIL ({} issue(s))", failures.len());
        for f in &failures {
            println!("  {f}");
        }
        panic!("{criterion}: {}", failures.join("; "));
    }
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn complete_graph(n: usize, w: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            edges.push((u, v, w));
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

fn path_dirac(weights: &[f64]) -> DiracOperator {
    Chain::new(weights.to_vec()).unwrap().to_dirac()
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn criterion_01_closed_form_exactness() {
    let mut failures = Vec::new();
    let cfg = cfg();
    for n in 3..=8usize {
        for &w in &[0.5, 1.0, 2.0] {
            let d = DiracOperator::from_weights(&complete_graph(n, w));
            let got = solver::nc_distance(&d, 1, 2, &cfg).unwrap().value;
            let want = w * (2.0 / n as f64).sqrt();
            if rel_err(got, want) > 1e-6 {
                failures.push(format!("K{n} w={w}: {got} vs {want}"));
            }
        }
    }
    for n in 3..=8usize {
        for &w in &[0.5, 1.0, 2.0] {
            let mut g = complete_graph(n, w);
            let edges: Vec<(usize, usize, f64)> = g
                .edges()
                .map(|(u, v, wt)| {
                    if (u, v) == (1, 2) {
                        (u, v, f64::INFINITY)
                    } else {
                        (u, v, wt)
                    }
                })
                .collect();
            g = WeightedGraph::new(n, edges).unwrap();
            let d = DiracOperator::from_weights(&g);
            let got = solver::nc_distance(&d, 1, 2, &cfg).unwrap().value;
            let want = w * (2.0 / (n as f64 - 2.0)).sqrt();
            if rel_err(got, want) > 1e-6 {
                failures.push(format!("K{n} w={w} inf edge: {got} vs {want}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for t in 0..50 {
        let d12: f64 = rng.gen_range(0.2..2.5);
        let d13: f64 = rng.gen_range(0.2..2.5);
        let d23: f64 = rng.gen_range(0.2..2.5);
        let g = WeightedGraph::new(
            3,
            [(1, 2, 1.0 / d12), (1, 3, 1.0 / d13), (2, 3, 1.0 / d23)],
        )
        .unwrap();
        let d = DiracOperator::from_weights(&g);
        let want = ((d13 * d13 + d23 * d23)
            / (d12 * d12 * d13 * d13 + d12 * d12 * d23 * d23 + d23 * d23 * d13 * d13))
            .sqrt();
        let got = solver::nc_distance(&d, 1, 2, &cfg).unwrap().value;
        if rel_err(got, want) > 1e-6 {
            failures.push(format!("3-point trial {t}: {got} vs {want}"));
        }
    }
    conclude("criterion 1 (closed-form exactness)", failures);
}

#[test]
fn criterion_02_chain_formulas() {
    let mut failures = Vec::new();
    let cfg = cfg();
    // equal weights, numeric solve vs closed form
    for m in 1..=10usize {
        for &w in &[1.0, 0.7] {
            let d = path_dirac(&vec![w; m]);
            let got = solver::nc_distance(&d, 1, m + 1, &cfg).unwrap().value;
            let k = m / 2;
            let want = if m % 2 == 0 {
                w * ((k * (k + 1)) as f64).sqrt()
            } else {
                w * (k + 1) as f64
            };
            if rel_err(got, want) > 1e-5 {
                failures.push(format!("equal chain |C|={m} w={w}: {got} vs {want}"));
            }
        }
    }
    // three-weight closed form, both branches
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut per_branch = [0usize; 2];
    while per_branch[0] < 50 || per_branch[1] < 50 {
        let w1: f64 = rng.gen_range(0.2..3.0);
        let w2: f64 = rng.gen_range(0.2..3.0);
        let w3: f64 = rng.gen_range(0.2..3.0);
        let product_branch = w2 > (w1 * w3).sqrt();
        let idx = usize::from(product_branch);
        if per_branch[idx] >= 50 {
            continue;
        }
        per_branch[idx] += 1;
        let want = if product_branch {
            w1.hypot(w2) * w3.hypot(w2) / w2
        } else {
            w1 + w3
        };
        let d = path_dirac(&[w1, w2, w3]);
        let got = solver::nc_distance(&d, 1, 4, &cfg).unwrap().value;
        if rel_err(got, want) > 1e-5 {
            failures.push(format!(
                "3-chain {w1:.3}-{w2:.3}-{w3:.3}: {got} vs {want}"
            ));
        }
    }
    // branch continuity on the parabola w2 = sqrt(w1 w3)
    for _ in 0..100 {
        let w1: f64 = rng.gen_range(0.2..3.0);
        let w3: f64 = rng.gen_range(0.2..3.0);
        let w2 = (w1 * w3).sqrt();
        let product = w1.hypot(w2) * w3.hypot(w2) / w2;
        if (product - (w1 + w3)).abs() > 1e-9 {
            failures.push(format!("branch discontinuity at {w1},{w2},{w3}"));
        }
    }
    conclude("criterion 2 (chain formulas)", failures);
}

#[test]
fn criterion_03_reference_table_reproduction() {
    let mut failures = Vec::new();
    let cfg = cfg();
    let pi = std::f64::consts::PI;
    let k = 2.0f64;
    // (chain, bound, claimed, tolerance); 1e-6 for exact cells, 0.05 for
    // the approximate ones
    let exact = 1e-6;
    let approx = 0.05;
    let rows: Vec<(&str, Vec<f64>, Vec<(&str, f64, f64)>)> = vec![
        (
            "1-1-1",
            vec![1.0; 3],
            vec![
                ("R1", k, exact),
                ("R2", (k - 0.5) / (pi / (2.0 * k + 1.0)).cos(), exact),
                ("lambda", k, exact),
                ("L1", (k * k + (k - 1.0) * (k - 1.0)).sqrt(), exact),
                ("L2", k, exact),
            ],
        ),
        (
            "1-1-1-1",
            vec![1.0; 4],
            vec![
                ("R1", k, exact),
                ("R2", k / (pi / (2.0 * k + 2.0)).cos(), exact),
                ("lambda", (k * (k + 1.0)).sqrt(), exact),
                ("L1", k * 2.0f64.sqrt(), exact),
                ("L2", k + 0.5, exact),
            ],
        ),
        (
            "2-1-2-1-2",
            vec![2.0, 1.0, 2.0, 1.0, 2.0],
            vec![
                ("R1", 6.0, exact),
                ("R2", 4.4, approx),
                ("lambda", 6.0, exact),
                ("L1", 6.3, approx),
                ("L2", 6.0, exact),
            ],
        ),
        (
            "1-2-1-2-1",
            vec![1.0, 2.0, 1.0, 2.0, 1.0],
            vec![
                ("R1", 4.0, exact),
                ("R2", 3.9, approx),
                ("lambda", 4.4, approx),
                ("L1", 5.1, approx),
                ("L2", 6.0, exact),
            ],
        ),
    ];
    for (label, weights, claims) in rows {
        let c = Chain::new(weights).unwrap();
        for (bound, claimed, tolerance) in claims {
            let computed = match bound {
                "R1" => chain::r1(&c).0,
                "R2" => chain::r2(&c),
                "lambda" => chain::lambda_chain(&c, &cfg).unwrap(),
                "L1" => chain::l1(&c).0,
                "L2" => chain::l2(&c),
                _ => unreachable!(),
            };
            if (computed - claimed).abs() > tolerance {
                failures.push(format!(
                    "{label} {bound}: claimed {claimed}, recomputed {computed}"
                ));
            }
        }
    }
    conclude("criterion 3 (reference table reproduction)", failures);
}

#[test]
fn criterion_04_universal_sandwich() {
    let mut failures = Vec::new();
    let cfg = cfg();
    for seed in 0..200u64 {
        let n = 4 + (seed % 5) as usize; // 4..8
        let g = WeightedGraph::random_instance(seed, n, 0.45, (0.3, 3.0)).unwrap();
        let d = DiracOperator::from_weights(&g);
        let (i, j) = (1, n);
        let value = solver::nc_distance(&d, i, j, &cfg).unwrap().value;
        let bound = estimators::degree_lower_bound(&d, i, j, &cfg).unwrap();
        if bound.cheap_lower - 1e-6 > value {
            failures.push(format!(
                "seed {seed}: l/max_degree {} > d {value}",
                bound.cheap_lower
            ));
        }
        if value > bound.geodesic + 1e-6 {
            failures.push(format!("seed {seed}: d {value} > l {}", bound.geodesic));
        }
        if bound.geodesic > bound.scaled_distance + 1e-6 {
            failures.push(format!(
                "seed {seed}: l {} > scaled distance {}",
                bound.geodesic, bound.scaled_distance
            ));
        }
        if bound.scaled_distance > bound.max_degree as f64 * value + 1e-6 {
            failures.push(format!(
                "seed {seed}: scaled distance {} > degree * d {}",
                bound.scaled_distance,
                bound.max_degree as f64 * value
            ));
        }
    }
    conclude("criterion 4 (universal sandwich)", failures);
}

#[test]
fn criterion_05_split_triple_identity() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for seed in 0..100u64 {
        let n = 4 + (seed % 5) as usize;
        let g = WeightedGraph::random_instance(seed.wrapping_add(7000), n, 0.5, (0.3, 2.5))
            .unwrap();
        let d = DiracOperator::from_weights(&g);
        let o = ncdist::Orientation::canonical(&g);
        let triple = estimators::split_triple(&d, &o);
        let geo = g.geodesics_from(1).unwrap();
        for j in 2..=n {
            let split = estimators::split_distance(&d, 1, j).unwrap();
            if (split - geo[j - 1]).abs() > 1e-6 {
                failures.push(format!("seed {seed}: split {split} vs geodesic {}", geo[j - 1]));
            }
        }
        // verify the identity on the materialized split operator: the
        // lifted geodesic potential is feasible and attains the value,
        // and random feasible potentials never exceed it
        let m = triple.split_dirac.dim();
        let lift = |a: &[f64]| -> Vec<f64> {
            (0..m).map(|k| a[triple.projection[k] - 1]).collect()
        };
        let star = lift(&geo);
        let norm =
            spectral::operator_norm(&spectral::commutator(&triple.split_dirac, &star).unwrap())
                .unwrap();
        if norm > 1.0 + 1e-9 {
            failures.push(format!("seed {seed}: geodesic potential infeasible, norm {norm}"));
        }
        for _ in 0..10 {
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lifted = lift(&a);
            let norm = spectral::operator_norm(
                &spectral::commutator(&triple.split_dirac, &lifted).unwrap(),
            )
            .unwrap();
            if norm <= 1e-12 {
                continue;
            }
            for j in 2..=n {
                let value = (a[j - 1] - a[0]).abs() / norm;
                if value > geo[j - 1] + 1e-6 {
                    failures.push(format!(
                        "seed {seed}: feasible potential beats the geodesic at {j}: {value} > {}",
                        geo[j - 1]
                    ));
                }
            }
        }
    }
    conclude("criterion 5 (split-triple identity)", failures);
}

#[test]
fn criterion_06_pruning_invariance() {
    let mut failures = Vec::new();
    let cfg = cfg();
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 100 && seed < 4000 {
        seed += 1;
        let n = 5 + (seed % 4) as usize; // 5..8
        let g = WeightedGraph::random_instance(seed.wrapping_add(12000), n, 0.28, (0.4, 2.0))
            .unwrap();
        let tree = match decomposition::block_cut_tree(&g) {
            Ok(t) => t,
            Err(_) => continue,
        };
        if tree.cutpoints.is_empty() {
            continue;
        }
        checked += 1;
        let (i, j) = (1, n);
        let full = solver::nc_distance(&DiracOperator::from_weights(&g), i, j, &cfg)
            .unwrap()
            .value;
        let pruned = decomposition::prune(&g, i, j).unwrap();
        let d = DiracOperator::from_weights(&g);
        let (sub, map) = d.restrict(&pruned).unwrap();
        let li = map.iter().position(|&v| v == i).unwrap() + 1;
        let lj = map.iter().position(|&v| v == j).unwrap() + 1;
        let restricted = solver::nc_distance(&sub, li, lj, &cfg).unwrap().value;
        if (full - restricted).abs() > 1e-6 {
            failures.push(format!(
                "seed {seed}: full {full} vs pruned {restricted} (pruning {pruned:?})"
            ));
        }
    }
    if checked < 100 {
        failures.push(format!("only {checked} cutpoint instances found"));
    }
    conclude("criterion 6 (pruning invariance)", failures);
}

#[test]
fn criterion_07_heavy_edge_worked_example() {
    let mut failures = Vec::new();
    let cfg = cfg();
    let g = WeightedGraph::new(
        8,
        [
            (1, 2, 30.0),
            (1, 3, 1.0),
            (2, 4, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (5, 6, 1.0),
            (5, 7, 1.0),
            (6, 8, 30.0),
            (7, 8, 1.0),
        ],
    )
    .unwrap();
    let d = DiracOperator::from_weights(&g);
    let (_, d_prime) =
        estimators::edge_perturbation_bounds(&d, &[(1, 2, 30.0), (6, 8, 30.0)], 1, 8, &cfg)
            .unwrap();
    // after removal, the pruned query pair sits on a unit 5-chain
    let pruned = decomposition::prune(&d_prime.weights(), 1, 8).unwrap();
    let bc = decomposition::blob_chain(&d_prime.weights(), 1, 8).unwrap();
    if !(pruned.len() == 6 && bc.chains.len() == 1 && bc.chains[0].weights == vec![1.0; 5]) {
        failures.push(format!("unexpected pruned structure: {pruned:?}"));
    }
    let d_prime_chain =
        chain::lambda_chain(&Chain::new(vec![1.0; 5]).unwrap(), &cfg).unwrap();
    if (d_prime_chain - 3.0).abs() > 1e-12 {
        failures.push(format!("chain formula gives {d_prime_chain}, want 3"));
    }
    let d_prime_solved = solver::nc_distance(&d_prime, 1, 8, &cfg).unwrap().value;
    if (d_prime_solved - 3.0).abs() > 1e-6 {
        failures.push(format!("solved d' = {d_prime_solved}, want 3"));
    }
    let base = solver::nc_distance(&d, 1, 8, &cfg).unwrap().value;
    if base < 3.0 * 10.0 / 11.0 - 1e-6 || base > 3.0 * 11.0 / 10.0 + 1e-6 {
        failures.push(format!("d = {base} outside [30/11, 33/10]"));
    }
    conclude("criterion 7 (heavy-edge worked example)", failures);
}

/// Random 2-connected "blob" on `size` vertices: a cycle plus chords.
fn random_blob(rng: &mut ChaCha8Rng, size: usize) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for v in 1..=size {
        let u = v % size + 1;
        edges.push((v.min(u), v.max(u), rng.gen_range(0.4..2.0)));
    }
    for u in 1..=size {
        for v in (u + 2)..=size {
            if (u, v) == (1, size) {
                continue; // cycle edge already present
            }
            if rng.gen::<f64>() < 0.3 {
                edges.push((u, v, rng.gen_range(0.4..2.0)));
            }
        }
    }
    edges
}

#[test]
fn criterion_08_blob_chain_sandwich() {
    let mut failures = Vec::new();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for trial in 0..50 {
        let size1 = rng.gen_range(3..=5usize);
        let size2 = rng.gen_range(3..=5usize);
        let bridge_len = rng.gen_range(1..=3usize);
        // blob 1 on 1..size1, chain, blob 2 appended after
        let mut edges = random_blob(&mut rng, size1);
        let mut at = size1;
        for _ in 0..bridge_len {
            edges.push((at, at + 1, rng.gen_range(0.4..2.0)));
            at += 1;
        }
        let offset = at - 1;
        for (u, v, w) in random_blob(&mut rng, size2) {
            edges.push((u + offset, v + offset, w));
        }
        let n = offset + size2;
        let g = WeightedGraph::new(n, edges).unwrap();
        let d = DiracOperator::from_weights(&g);
        let (i, j) = (1, n);
        let est = estimators::blob_chain_bounds(&d, i, j, &cfg).unwrap();
        let exact = solver::nc_distance(&d, i, j, &cfg).unwrap().value;
        if !(est.lower - 1e-6 <= exact && exact <= est.upper + 1e-6) {
            failures.push(format!(
                "trial {trial}: {} <= {exact} <= {} violated",
                est.lower, est.upper
            ));
        }
    }
    // trees: the interval collapses onto the exact distance
    for seed in 0..25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + seed);
        let n = rng.gen_range(4..=8usize);
        let edges: Vec<(usize, usize, f64)> = (2..=n)
            .map(|v| {
                let parent = rng.gen_range(1..v);
                (parent, v, rng.gen_range(0.4..2.0))
            })
            .collect();
        let g = WeightedGraph::new(n, edges).unwrap();
        let d = DiracOperator::from_weights(&g);
        let est = estimators::blob_chain_bounds(&d, 1, n, &cfg).unwrap();
        let exact = solver::nc_distance(&d, 1, n, &cfg).unwrap().value;
        if (est.lower - est.upper).abs() > 1e-9
            || (est.lower - exact).abs() > 1e-6
        {
            failures.push(format!(
                "tree seed {seed}: interval [{}, {}] vs exact {exact}",
                est.lower, est.upper
            ));
        }
    }
    conclude("criterion 8 (blob-chain sandwich)", failures);
}

#[test]
fn criterion_09_chain_bounds_sandwich_and_properties() {
    let mut failures = Vec::new();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for trial in 0..500 {
        let m = rng.gen_range(1..=8usize);
        let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..5.0)).collect();
        let c = Chain::new(w.clone()).unwrap();
        let lam = solver::nc_distance(&c.to_dirac(), 1, m + 1, &cfg).unwrap().value;
        let (l1v, _) = chain::l1(&c);
        let (r1v, _) = chain::r1(&c);
        let lo = r1v.max(chain::r2(&c));
        let hi = l1v.min(chain::l2(&c));
        if lo - 1e-6 > lam || lam > hi + 1e-6 {
            failures.push(format!("trial {trial} {w:?}: {lo} <= {lam} <= {hi} violated"));
        }
        let r = c.reversed();
        if (chain::l1(&r).0 - l1v).abs() > 1e-9 || (chain::r1(&r).0 - r1v).abs() > 1e-9 {
            failures.push(format!("trial {trial}: reversal changed L1/R1"));
        }
    }
    // coarse graining, exhaustive over a 3-value grid, |C| <= 8
    let values = [0.5, 1.0, 2.0];
    for m in 4..=8usize {
        let mut idx = vec![0usize; m];
        'grid: loop {
            let w: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
            let c = Chain::new(w).unwrap();
            let mut sizes: Vec<usize> = chain::enumerate_decompositions(&c)
                .iter()
                .filter(|d| chain::is_strictly_admissible_l1(&c, d))
                .map(|d| d.cuts().len() + 1)
                .collect();
            sizes.sort_unstable();
            if let Some(&kmax) = sizes.last() {
                for k in 3..=kmax {
                    if sizes.contains(&k) && !sizes.contains(&(k - 1)) {
                        failures.push(format!(
                            "coarse-graining broken for {:?} at k={k}",
                            c.weights()
                        ));
                    }
                }
            }
            let mut pos = 0;
            loop {
                if pos == m {
                    break 'grid;
                }
                idx[pos] += 1;
                if idx[pos] < values.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
    conclude("criterion 9 (chain-bounds sandwich and properties)", failures);
}

#[test]
fn criterion_10_tridiagonal_norm_bounds() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    for trial in 0..1000 {
        let m = rng.gen_range(1..=11usize); // dimension n = m + 1 <= 12
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..4.0)).collect();
        let bc: Vec<num_complex::Complex64> =
            b.iter().map(|&x| num_complex::Complex64::new(x, 0.0)).collect();
        let norm = spectral::operator_norm(&spectral::skew_tridiagonal(&bc)).unwrap();
        let bounds = spectral::chain_norm_bounds(&b).unwrap();
        let lo = bounds.lower_pair.max(bounds.lower_mean);
        let hi = bounds.upper_pair.min(bounds.upper_toeplitz);
        if lo - norm > 1e-9 || norm - hi > 1e-9 {
            failures.push(format!(
                "trial {trial}: {lo} <= {norm} <= {hi} violated for {b:?}"
            ));
        }
    }
    for trial in 0..300 {
        let m = rng.gen_range(1..=11usize);
        let b: Vec<num_complex::Complex64> = (0..m)
            .map(|_| {
                num_complex::Complex64::from_polar(
                    rng.gen_range(0.05..4.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let with_phase = spectral::operator_norm(&spectral::skew_tridiagonal(&b)).unwrap();
        let abs: Vec<num_complex::Complex64> = b
            .iter()
            .map(|z| num_complex::Complex64::new(z.norm(), 0.0))
            .collect();
        let without = spectral::operator_norm(&spectral::skew_tridiagonal(&abs)).unwrap();
        if (with_phase - without).abs() > 1e-8 * without.max(1.0) {
            failures.push(format!(
                "trial {trial}: phase changed the norm, {with_phase} vs {without}"
            ));
        }
    }
    conclude("criterion 10 (tridiagonal norm bounds)", failures);
}

#[test]
fn criterion_11_oracle_agreement() {
    let mut failures = Vec::new();
    let cfg = cfg();
    for seed in 0..100u64 {
        let n = 4 + (seed % 3) as usize; // 4..6
        let g = WeightedGraph::random_instance(seed.wrapping_add(20000), n, 0.5, (0.4, 2.5))
            .unwrap();
        let d = DiracOperator::from_weights(&g);
        let (i, j) = (1, n);
        let exact = solver::nc_distance(&d, i, j, &cfg).unwrap().value;
        let oracle =
            solver::oracle_distance(&d, i, j, solver::DEFAULT_ORACLE_BUDGET).unwrap();
        if oracle > exact * (1.0 + 1e-4) {
            failures.push(format!(
                "seed {seed}: oracle {oracle} exceeds exact {exact}"
            ));
        }
        if oracle < exact * (1.0 - 1e-4) {
            failures.push(format!(
                "seed {seed}: oracle {oracle} below exact {exact} by more than 1e-4"
            ));
        }
    }
    conclude("criterion 11 (oracle agreement)", failures);
}

#[test]
fn criterion_12_edge_removal_conjecture_monitor() {
    // non-blocking: counterexamples are reported as findings, never as
    // test failures
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    let mut findings = 0usize;
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 500 && seed < 3000 {
        seed += 1;
        let n = 4 + (seed % 4) as usize;
        let g = WeightedGraph::random_instance(seed.wrapping_add(30000), n, 0.55, (0.4, 2.5))
            .unwrap();
        let edges: Vec<(usize, usize, f64)> = g.edges().collect();
        let (u, v, w) = edges[rng.gen_range(0..edges.len())];
        let d = DiracOperator::from_weights(&g);
        let (i, j) = (1, n);
        let before = solver::nc_distance(&d, i, j, &cfg).unwrap().value;
        let (_, d_prime) =
            match estimators::edge_perturbation_bounds(&d, &[(u, v, w)], i, j, &cfg) {
                Ok(x) => x,
                Err(_) => continue,
            };
        let after = solver::nc_distance(&d_prime, i, j, &cfg).unwrap().value;
        checked += 1;
        if after < before - 1e-6 {
            findings += 1;
            println!(
                "  finding: removing edge ({u},{v}) shrank d({i},{j}) from {before} to {after} (seed {seed})"
            );
        }
    }
    println!(
        "criterion 12 (edge-removal monotonicity monitor): PASS ({checked} removals, {findings} counterexample(s) logged)"
    );
}
