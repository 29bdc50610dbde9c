#![allow(dead_code)]

use std::path::PathBuf;

use cantilever_q::explorer::{DesignSpace, Objective};
use cantilever_q::io::{load_config, MaterialDatabase, RunConfig};
use cantilever_q::physics::{GasEnvironment, Geometry, Material};

/// Clamped-free eigenvalues evaluated at 50 significant digits with mpmath.
#[allow(clippy::excessive_precision)]
pub const FROZEN_EIGENVALUES: [f64; 6] = [
    1.8751040687119612,
    4.6940911329741746,
    7.8547574382376126,
    10.995540734875467,
    14.137168391046471,
    17.278759532088236,
];

/// Interior node positions x/L for modes 2..=6, same source.
pub const FROZEN_NODES: [&[f64]; 5] = [
    &[0.783444550500559],
    &[0.503547873377056, 0.867677591603008],
    &[0.358337517757339, 0.644087938165523, 0.905564006954792],
    &[
        0.278751710711853,
        0.499914826229016,
        0.723223587006749,
        0.926547001993773,
    ],
    &[
        0.22806799139451,
        0.409057549727752,
        0.590875774082916,
        0.773545020454314,
        0.93990219268388,
    ],
];

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn shipped_config(relative: &str) -> RunConfig {
    let path = repo_root().join("configs").join(relative);
    load_config(&path, &MaterialDatabase::builtin())
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn regression_cases() -> Vec<(String, RunConfig)> {
    let dir = repo_root().join("configs/regression");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let cfg = load_config(&p, &MaterialDatabase::builtin()).unwrap();
            (name, cfg)
        })
        .collect()
}

pub fn silicon() -> Material {
    MaterialDatabase::builtin()
        .material("silicon")
        .unwrap()
        .clone()
}

pub fn air(pressure: f64) -> GasEnvironment {
    GasEnvironment::air(pressure, 300.0)
}

pub fn beam(length_um: f64, width_um: f64, thickness_um: f64) -> Geometry {
    Geometry::new(length_um * 1e-6, width_um * 1e-6, thickness_um * 1e-6).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First `count` roots of 1 + cos k·cosh k from a dense scan and plain bisection.
pub fn oracle_eigenvalues(count: usize) -> Vec<f64> {
    let f = |k: f64| 1.0 + k.cos() * k.cosh();
    let step = 1e-3;
    let mut roots = Vec::new();
    let mut k = step;
    while roots.len() < count {
        if f(k).signum() != f(k + step).signum() {
            roots.push(bisect(f, k, k + step));
        }
        k += step;
    }
    roots
}

/// Interior zeros of the textbook mode shape cosh − cos − σ(sinh − sin).
pub fn oracle_nodes(k: f64) -> Vec<f64> {
    let sigma = (k.sinh() - k.sin()) / (k.cosh() + k.cos());
    let phi = |x: f64| {
        let z = k * x;
        z.cosh() - z.cos() - sigma * (z.sinh() - z.sin())
    };
    let cells = 20_000;
    let mut nodes = Vec::new();
    for i in 1..cells {
        let a = i as f64 / cells as f64;
        let b = (i + 1) as f64 / cells as f64;
        if phi(a).signum() != phi(b).signum() {
            nodes.push(bisect(phi, a, b));
        }
    }
    nodes
}

/// Exhaustive feasibility-aware grid over the design box, `n` points per axis.
/// Returns (cost, length, width) of the best feasible node.
pub fn grid_oracle(space: &DesignSpace, n: usize) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..n {
        for j in 0..n {
            let u = i as f64 / (n - 1) as f64;
            let v = j as f64 / (n - 1) as f64;
            let g = space.geometry_at(u, v);
            let c = space.cost(g);
            if c.is_finite() && best.is_none_or(|b| c < b.0) {
                best = Some((c, g.length, g.width));
            }
        }
    }
    best
}

pub fn cost_of(objective: Objective, value: f64) -> f64 {
    match objective {
        Objective::MaxQTotal => -value,
        Objective::MinDetectableMass => value,
    }
}
