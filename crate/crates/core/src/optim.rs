//! Derivative-free minimization: Nelder–Mead with multi-start.
//!
//! The objectives in this crate are smooth but periodic in angle-like
//! coordinates, with flat directions from unobservable phases. A simplex
//! search restarted from several seeded random points handles that well.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop when the spread of objective values across the simplex is below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter is below this.
    pub x_tol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// How many times to rebuild the simplex around the current best point
    /// after convergence.
    pub rebuilds: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            f_tol: 1e-12,
            x_tol: 1e-9,
            max_evals: 20_000,
            initial_step: 0.5,
            rebuilds: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from `x0`.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = simplex_run(&f, x0, opts.initial_step, opts);
    let mut evals = best.evals;
    for _ in 0..opts.rebuilds {
        if evals >= opts.max_evals {
            break;
        }
        let budget = NelderMeadOptions {
            max_evals: opts.max_evals - evals,
            ..opts.clone()
        };
        let step = (opts.initial_step * 0.1).max(opts.x_tol * 10.0);
        let next = simplex_run(&f, &best.x, step, &budget);
        evals += next.evals;
        let improved = next.f < best.f - opts.f_tol;
        if next.f <= best.f {
            best = Minimum { evals, ..next };
        }
        if !improved {
            break;
        }
    }
    best.evals = evals;
    best
}

fn simplex_run<F>(f: &F, x0: &[f64], step: f64, opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = x0.len();
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    points.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    let mut converged = false;

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        points = order.iter().map(|&i| points[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = points[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&points[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= opts.f_tol || diameter <= opts.x_tol {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for p in &points[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let worst = &points[n];
        for i in 0..n {
            trial[i] = centroid[i] + REFLECT * (centroid[i] - worst[i]);
        }
        let f_reflect = f(&trial);
        evals += 1;

        if f_reflect < values[0] {
            for i in 0..n {
                trial2[i] = centroid[i] + EXPAND * (trial[i] - centroid[i]);
            }
            let f_expand = f(&trial2);
            evals += 1;
            if f_expand < f_reflect {
                points[n].copy_from_slice(&trial2);
                values[n] = f_expand;
            } else {
                points[n].copy_from_slice(&trial);
                values[n] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[n - 1] {
            points[n].copy_from_slice(&trial);
            values[n] = f_reflect;
            continue;
        }

        // Contraction: outside if the reflection beat the worst point, inside otherwise.
        let outside = f_reflect < values[n];
        for i in 0..n {
            trial2[i] = if outside {
                centroid[i] + CONTRACT * (trial[i] - centroid[i])
            } else {
                centroid[i] + CONTRACT * (points[n][i] - centroid[i])
            };
        }
        let f_contract = f(&trial2);
        evals += 1;
        let threshold = if outside { f_reflect } else { values[n] };
        if f_contract < threshold {
            points[n].copy_from_slice(&trial2);
            values[n] = f_contract;
            continue;
        }

        let anchor = points[0].clone();
        for (p, v) in points.iter_mut().zip(values.iter_mut()).skip(1) {
            for (x, a) in p.iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            *v = f(p);
        }
        evals += n;
    }

    let (imin, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is never empty");
    Minimum {
        x: points[imin].clone(),
        f: values[imin],
        evals,
        converged,
    }
}

/// Multi-start settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStart {
    pub restarts: usize,
    pub seed: u64,
    /// Starting points are drawn uniformly from `[-range, range]` per coordinate.
    pub range: f64,
    pub local: NelderMeadOptions,
}

/// Result of a multi-start search.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMinimum {
    pub best: Minimum,
    pub total_evals: usize,
    pub all_converged: bool,
}

/// Runs `restarts` independent local searches from seeded random starts and
/// keeps the lowest. Restart `k` draws its start from stream `k` of a ChaCha
/// generator seeded with `seed`, so the result does not depend on scheduling.
/// Exact ties are resolved by the lexicographically smaller point.
pub fn multistart<F>(f: F, dim: usize, cfg: &MultiStart) -> MultiMinimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let runs: Vec<Minimum> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let x0: Vec<f64> = (0..dim)
                .map(|_| rng.gen_range(-cfg.range..=cfg.range))
                .collect();
            nelder_mead(&f, &x0, &cfg.local)
        })
        .collect();

    let total_evals = runs.iter().map(|r| r.evals).sum();
    let all_converged = runs.iter().all(|r| r.converged);
    let best = runs
        .into_iter()
        .reduce(|a, b| match a.f.total_cmp(&b.f) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => {
                if lexicographic_le(&a.x, &b.x) {
                    a
                } else {
                    b
                }
            }
        })
        .expect("at least one restart");
    MultiMinimum {
        best,
        total_evals,
        all_converged,
    }
}

fn lexicographic_le(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    true
}
