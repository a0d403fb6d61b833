//! Global minimization of `h` over the unit hemisphere: a `(theta, phi)` grid
//! to locate basins, then Nelder-Mead in a tangent-plane chart around each
//! of the best grid minima.

use std::f64::consts::{PI, TAU};

use super::frame::{CorrelationFrame, Direction};
use super::objective::{h_at, objective_h};
use crate::error::{Error, Result};
use crate::linalg::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizerConfig {
    /// Grid nodes in `theta` over `[0, pi/2]`, both ends included.
    pub grid_theta: usize,
    /// Grid nodes in `phi` over `[0, 2 pi)`.
    pub grid_phi: usize,
    /// Number of grid minima refined locally.
    pub restarts: usize,
    /// Target accuracy in `h`. Local searches stop once the simplex is
    /// smaller than `tol / 100` radians.
    pub tol: f64,
    /// Also run the numeric path behind every closed form and compare.
    pub verify: bool,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        MinimizerConfig {
            grid_theta: 128,
            grid_phi: 256,
            restarts: 8,
            tol: 1e-10,
            verify: false,
        }
    }
}

impl MinimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_theta < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid_theta must be at least 2, got {}",
                self.grid_theta
            )));
        }
        if self.grid_phi < 3 {
            return Err(Error::InvalidConfig(format!(
                "grid_phi must be at least 3, got {}",
                self.grid_phi
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive and finite, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Minimum {
    pub h: f64,
    pub direction: Direction,
    pub grid_h: f64,
}

pub(crate) fn minimize_h(f: &CorrelationFrame, cfg: &MinimizerConfig) -> Result<Minimum> {
    cfg.validate()?;
    let (nt, np) = (cfg.grid_theta, cfg.grid_phi);
    let dtheta = (PI / 2.0) / (nt - 1) as f64;
    let dphi = TAU / np as f64;

    let mut values = vec![0.0; nt * np];
    for i in 0..nt {
        let theta = i as f64 * dtheta;
        for j in 0..np {
            values[i * np + j] = if i == 0 && j > 0 {
                values[0]
            } else {
                objective_h(f, &Direction::new(theta, j as f64 * dphi))
            };
        }
    }

    let seeds = select_seeds(&values, nt, np, cfg.restarts);
    let grid_best = seeds[0];
    let grid_h = values[grid_best];

    let xtol = cfg.tol * 1e-2;
    let mut best = (grid_h, Direction::new(node_theta(grid_best, np, dtheta), node_phi(grid_best, np, dphi)).e);
    for &node in &seeds {
        let start = Direction::new(node_theta(node, np, dtheta), node_phi(node, np, dphi));
        let (h, e) = refine(f, &start.e, values[node], dtheta.min(dphi), xtol);
        if h < best.0 {
            best = (h, e);
        }
    }

    Ok(Minimum {
        h: best.0,
        direction: Direction::from_vector(&best.1).upper_hemisphere(),
        grid_h,
    })
}

fn node_theta(node: usize, np: usize, dtheta: f64) -> f64 {
    (node / np) as f64 * dtheta
}

fn node_phi(node: usize, np: usize, dphi: f64) -> f64 {
    (node % np) as f64 * dphi
}

/// Up to `count` grid nodes to refine: local minima first, by value with ties
/// broken on smallest `(theta, phi)`, then the best remaining nodes.
fn select_seeds(values: &[f64], nt: usize, np: usize, count: usize) -> Vec<usize> {
    let half = np / 2;
    let neighbours = |i: usize, j: usize| {
        let mut out = Vec::with_capacity(8);
        for di in [-1i64, 0, 1] {
            for dj in [-1i64, 0, 1] {
                if di == 0 && dj == 0 {
                    continue;
                }
                let mut ii = i as i64 + di;
                let mut jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                // Crossing the equator or the pole lands on the antipodal node.
                if ii < 0 || ii >= nt as i64 {
                    ii = if ii < 0 { 1 } else { nt as i64 - 2 };
                    if np.is_multiple_of(2) {
                        jj = (jj + half) % np;
                    } else {
                        continue;
                    }
                }
                out.push(ii as usize * np + jj);
            }
        }
        out
    };

    let mut order: Vec<usize> = (0..nt * np).filter(|&k| k >= np || k == 0).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut seeds = Vec::with_capacity(count);
    for &k in &order {
        if seeds.len() == count {
            break;
        }
        let (i, j) = (k / np, k % np);
        let v = values[k];
        if neighbours(i, j).into_iter().all(|n| values[n] >= v) {
            seeds.push(k);
        }
    }
    for &k in &order {
        if seeds.len() == count {
            break;
        }
        if !seeds.contains(&k) {
            seeds.push(k);
        }
    }
    // Keep the global grid minimum first.
    seeds.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    seeds
}

/// Nelder-Mead around `e0` in the chart `(s, t) -> normalize(e0 + s t1 + t t2)`,
/// restarted from the incumbent until a restart no longer improves it.
fn refine(f: &CorrelationFrame, e0: &Vec3, h0: f64, step: f64, xtol: f64) -> (f64, Vec3) {
    let t1 = e0.any_orthogonal();
    let t2 = e0.cross(&t1);
    let chart = |p: [f64; 2]| (*e0 + t1 * p[0] + t2 * p[1]).normalized();
    let objective = |p: [f64; 2]| h_at(f, &chart(p));

    let mut best_p = [0.0, 0.0];
    let mut best_h = h0;
    let mut size = step;
    for _ in 0..6 {
        let (p, h) = nelder_mead(&objective, best_p, size, xtol, 4000);
        let improved = h < best_h;
        if improved {
            best_p = p;
            best_h = h;
        }
        if !improved && size <= step * 1e-3 {
            break;
        }
        size = (size * 1e-2).max(xtol * 10.0);
    }
    (best_h, chart(best_p))
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(
    f: &F,
    start: [f64; 2],
    size: f64,
    xtol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + size, start[1]],
        [start[0], start[1] + size],
    ];
    let mut values = simplex.map(f);

    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.map(|k| simplex[k]);
        values = idx.map(|k| values[k]);

        let diameter = (0..3)
            .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
            .map(|(a, b)| (simplex[a][0] - simplex[b][0]).hypot(simplex[a][1] - simplex[b][1]))
            .fold(0.0, f64::max);
        if diameter <= xtol {
            break;
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };

        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
            continue;
        }
        if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[2] {
            let c = along(-0.5);
            (c, f(c))
        } else {
            let c = along(0.5);
            (c, f(c))
        };
        if fc < values[2].min(fr) {
            simplex[2] = contracted;
            values[2] = fc;
            continue;
        }
        for k in 1..3 {
            simplex[k] = [
                simplex[0][0] + 0.5 * (simplex[k][0] - simplex[0][0]),
                simplex[0][1] + 0.5 * (simplex[k][1] - simplex[0][1]),
            ];
            values[k] = f(simplex[k]);
        }
    }

    let k = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[k], values[k])
}
