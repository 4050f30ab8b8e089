use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{EnergyFunctional, Problem};
use crate::error::{Error, Result};
use crate::fracops::DirichletFunction;
use crate::space::DiscreteSpace;

use super::geometry::{check_degenerate, estimate_geometry};
use super::precond::Preconditioner;
use super::{rounding_slack, SolveReport, SolverOptions};

const REDISTRIBUTE_EVERY: usize = 10;
const MAX_BACKTRACKS: usize = 60;

/// Scale `sigma > 0` maximizing `s -> I(s z)` for a pure power
/// nonlinearity: `sigma^(q-p) = p J(z) / (q H(z))`.
pub fn nehari_scale(energy: &EnergyFunctional, z: &[f64]) -> Result<f64> {
    let p = energy.p();
    let q = energy.problem().nonlinearity.q;
    let j = energy.j_value(z);
    let h = energy.h_value(z);
    if !(j > 0.0 && h > 0.0) {
        return Err(Error::Geometry("ray through the state has no energy maximum".into()));
    }
    Ok((p * j / (q * h)).powf(1.0 / (q - p)))
}

fn scaled(z: &[f64], s: f64) -> Vec<f64> {
    z.iter().map(|x| s * x).collect()
}

fn project(energy: &EnergyFunctional, z: &[f64]) -> Result<Vec<f64>> {
    Ok(scaled(z, nehari_scale(energy, z)?))
}

struct Path {
    points: Vec<Vec<f64>>,
    energies: Vec<f64>,
}

impl Path {
    /// Lowest index among the maximizers.
    fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, &e) in self.energies.iter().enumerate() {
            if e > self.energies[best] {
                best = j;
            }
        }
        best
    }

    /// Uniform arc-length reparameterization in the seminorm, keeping the
    /// point `pinned` as a node. Skipped when it would raise the path maximum.
    fn redistribute(&mut self, space: &DiscreteSpace, energy: &EnergyFunctional, pinned: usize) {
        let k = self.points.len() - 1;
        let seg: Vec<f64> = self
            .points
            .windows(2)
            .map(|w| {
                let d: Vec<f64> = w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect();
                space.seminorm_values(&d)
            })
            .collect();
        let total: f64 = seg.iter().sum();
        if total <= 0.0 {
            return;
        }
        let before: f64 = seg[..pinned].iter().sum();
        let new_pin = ((k as f64 * before / total).round() as usize).clamp(1, k - 1);
        let mut points = resample(&self.points[..=pinned], &seg[..pinned], new_pin);
        let tail = resample(&self.points[pinned..], &seg[pinned..], k - new_pin);
        points.extend(tail.into_iter().skip(1));
        let energies: Vec<f64> = points.iter().map(|z| energy.energy_values(z)).collect();
        let top = |e: &[f64]| e.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
        if top(&energies) > top(&self.energies) {
            return;
        }
        self.energies = energies;
        self.points = points;
    }
}

/// `count` equal arc-length segments along a polyline; endpoints preserved.
fn resample(points: &[Vec<f64>], seg: &[f64], count: usize) -> Vec<Vec<f64>> {
    let total: f64 = seg.iter().sum();
    let last = points.len() - 1;
    let mut out = Vec::with_capacity(count + 1);
    out.push(points[0].clone());
    let mut j = 0;
    let mut start = 0.0;
    for i in 1..count {
        let target = total * i as f64 / count as f64;
        while j < seg.len() - 1 && start + seg[j] < target {
            start += seg[j];
            j += 1;
        }
        let frac = if seg[j] > 0.0 {
            ((target - start) / seg[j]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(
            points[j]
                .iter()
                .zip(&points[j + 1])
                .map(|(a, b)| a + frac * (b - a))
                .collect(),
        );
    }
    out.push(points[last].clone());
    out
}

fn initial_path(
    energy: &EnergyFunctional,
    e: &DirichletFunction,
    opts: &SolverOptions,
) -> Result<Path> {
    let k = opts.path_points;
    let e = e.values();
    let mut points: Vec<Vec<f64>> = (0..=k).map(|j| scaled(e, j as f64 / k as f64)).collect();
    if opts.init_jitter > 0.0 {
        let amplitude = opts.init_jitter * e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let n = e.len() - 1;
        for z in points.iter_mut().take(k).skip(1) {
            for x in z.iter_mut().take(n).skip(1) {
                *x += amplitude * rng.random_range(-1.0..1.0);
            }
        }
    }
    // snap the point nearest the ray maximizer onto it
    let sigma = nehari_scale(energy, e)?;
    let j = ((sigma * k as f64).round() as usize).clamp(1, k - 1);
    points[j] = project(energy, &points[j])?;
    let energies = points.iter().map(|z| energy.energy_values(z)).collect();
    Ok(Path { points, energies })
}

/// Path-deformation mountain-pass method.
///
/// Each iteration moves the path maximizer `z` to its ray maximizer and takes
/// a preconditioned Armijo step, measured on the ray-maximized energy. The
/// stopping test is the dual gradient norm at the maximizer. Running out of
/// iterations yields a report with `converged == false`.
pub fn mountain_pass_solve(problem: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    opts.validate()?;
    check_degenerate(problem)?;
    let geometry = estimate_geometry(problem, opts)?;
    let energy = EnergyFunctional::with_regularization(problem, opts.eps_reg);
    let space = DiscreteSpace::new(problem.params, problem.grid)?;
    let mut pre = Preconditioner::new(&energy);
    let mut path = initial_path(&energy, &geometry.e, opts)?;
    let k = opts.path_points;

    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut grad_norm;
    let mut jstar;
    loop {
        jstar = path.argmax();
        if jstar == 0 || jstar == k || path.energies[jstar] <= 0.0 {
            return Err(Error::PathCollapse(jstar));
        }
        let z = project(&energy, &path.points[jstar])?;
        let (b, g) = energy.energy_and_gradient_values(&z);
        path.points[jstar] = z;
        path.energies[jstar] = b.i;
        history.push(space.seminorm_values(&path.points[jstar]));
        grad_norm = energy.dual_norm(&g);
        if grad_norm <= opts.tol_grad {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        iterations += 1;

        let z = &path.points[jstar];
        let cells = energy.derivative_cells(z);
        let d: Vec<f64> = pre.solve(&cells, &g)?.iter().map(|x| -x).collect();
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let slack = rounding_slack(&b);
        let mut s = opts.step_init;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a + s * b).collect();
            if let Ok(y) = project(&energy, &trial) {
                let value = energy.energy_values(&y);
                if value <= b.i + opts.armijo_c * s * slope + slack {
                    accepted = Some((y, value));
                    break;
                }
            }
            s *= opts.backtrack_factor;
        }
        match accepted {
            Some((y, value)) => {
                path.points[jstar] = y;
                path.energies[jstar] = value;
            }
            // no decrease representable in floating point: stationary
            None => break,
        }
        if iterations % REDISTRIBUTE_EVERY == 0 {
            let pin = path.argmax();
            if pin != 0 && pin != k {
                path.redistribute(&space, &energy, pin);
            }
        }
    }

    let u_star = DirichletFunction::clamped(problem.grid, path.points[jstar].clone())?;
    let breakdown = energy.breakdown(&u_star);
    Ok(SolveReport {
        energy_value: breakdown.i,
        breakdown,
        u_star,
        grad_norm,
        iterations,
        path_profile: path.energies,
        geometry: Some(geometry),
        iterate_norm_history: history,
        converged,
        multistart_spread: None,
    })
}
