//! Recomputes the library's worked chain examples (four reference chains
//! with published bound values) and flags any cell that disagrees.

use serde::Serialize;

use ncdist::chain::{self, Chain};
use ncdist::solver::SolverConfig;

#[derive(Debug, Clone, Serialize)]
pub struct CellCheck {
    pub row: String,
    pub bound: String,
    pub claimed: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorkedExamples {
    pub cells: Vec<CellCheck>,
    pub mismatches: usize,
}

const EXACT_TOL: f64 = 1e-6;
const APPROX_TOL: f64 = 0.05;

struct Row {
    label: &'static str,
    weights: Vec<f64>,
    /// (bound, claimed value, tolerance)
    claims: Vec<(&'static str, f64, f64)>,
}

fn reference_rows() -> Vec<Row> {
    let pi = std::f64::consts::PI;
    let k = 2.0f64;
    vec![
        Row {
            label: "1-1-1",
            weights: vec![1.0; 3],
            claims: vec![
                ("R1", k, EXACT_TOL),
                ("R2", (k - 0.5) / (pi / (2.0 * k + 1.0)).cos(), EXACT_TOL),
                ("lambda", k, EXACT_TOL),
                ("L1", (k * k + (k - 1.0) * (k - 1.0)).sqrt(), EXACT_TOL),
                ("L2", k, EXACT_TOL),
            ],
        },
        Row {
            label: "1-1-1-1",
            weights: vec![1.0; 4],
            claims: vec![
                ("R1", k, EXACT_TOL),
                ("R2", k / (pi / (2.0 * k + 2.0)).cos(), EXACT_TOL),
                ("lambda", (k * (k + 1.0)).sqrt(), EXACT_TOL),
                ("L1", k * 2.0f64.sqrt(), EXACT_TOL),
                ("L2", k + 0.5, EXACT_TOL),
            ],
        },
        Row {
            label: "2-1-2-1-2",
            weights: vec![2.0, 1.0, 2.0, 1.0, 2.0],
            claims: vec![
                ("R1", 6.0, EXACT_TOL),
                ("R2", 4.4, APPROX_TOL),
                ("lambda", 6.0, EXACT_TOL),
                ("L1", 6.3, APPROX_TOL),
                ("L2", 6.0, EXACT_TOL),
            ],
        },
        Row {
            label: "1-2-1-2-1",
            weights: vec![1.0, 2.0, 1.0, 2.0, 1.0],
            claims: vec![
                ("R1", 4.0, EXACT_TOL),
                ("R2", 3.9, APPROX_TOL),
                ("lambda", 4.4, APPROX_TOL),
                ("L1", 5.1, APPROX_TOL),
                ("L2", 6.0, EXACT_TOL),
            ],
        },
    ]
}

pub fn worked_examples(cfg: &SolverConfig) -> WorkedExamples {
    let mut cells = Vec::new();
    for row in reference_rows() {
        let c = Chain::new(row.weights.clone()).unwrap();
        for (bound, claimed, tolerance) in row.claims {
            let computed = match bound {
                "R1" => chain::r1(&c).0,
                "R2" => chain::r2(&c),
                "lambda" => chain::lambda_chain(&c, cfg).unwrap_or(f64::NAN),
                "L1" => chain::l1(&c).0,
                "L2" => chain::l2(&c),
                _ => unreachable!(),
            };
            let ok = (computed - claimed).abs() <= tolerance;
            cells.push(CellCheck {
                row: row.label.to_string(),
                bound: bound.to_string(),
                claimed,
                computed,
                tolerance,
                ok,
            });
        }
    }
    let mismatches = cells.iter().filter(|c| !c.ok).count();
    WorkedExamples { cells, mismatches }
}

pub fn print_table(rep: &WorkedExamples) {
    println!(
        "{:<12} {:<8} {:>12} {:>12} {:>9}  status",
        "chain", "bound", "claimed", "computed", "tol"
    );
    for cell in &rep.cells {
        println!(
            "{:<12} {:<8} {:>12.6} {:>12.6} {:>9.0e}  {}",
            cell.row,
            cell.bound,
            cell.claimed,
            cell.computed,
            cell.tolerance,
            if cell.ok { "ok" } else { "MISMATCH" }
        );
    }
    println!(
        "{} cell(s) checked, {} mismatch(es)",
        rep.cells.len(),
        rep.mismatches
    );
}
