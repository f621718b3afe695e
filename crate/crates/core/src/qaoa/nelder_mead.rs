use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;
const NONZERO_NUDGE: f64 = 0.05;
const ZERO_NUDGE: f64 = 0.00025;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadConfig {
    pub max_iterations: usize,
    /// Stop once `max f − min f` over the simplex falls below this and
    /// the vertices lie within `x_tolerance` of the best one.
    pub tolerance: f64,
    pub x_tolerance: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            tolerance: 1e-10,
            x_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Downhill simplex minimization.
///
/// The initial simplex is `x0` plus one vertex per coordinate, that
/// coordinate scaled by 1.05 (or set to 0.00025 when it is zero).
pub fn nelder_mead<F>(
    mut objective: F,
    x0: &[f64],
    config: &NelderMeadConfig,
) -> Result<NelderMeadResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    if dim == 0 {
        return Err(Error::InvalidConfig(
            "Nelder-Mead needs at least one dimension".into(),
        ));
    }
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        objective(x)
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for k in 0..dim {
        let mut v = x0.to_vec();
        v[k] = if v[k] != 0.0 {
            (1.0 + NONZERO_NUDGE) * v[k]
        } else {
            ZERO_NUDGE
        };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let x_spread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if values[dim] - values[0] < config.tolerance && x_spread <= config.x_tolerance {
            converged = true;
            break;
        }
        if iterations >= config.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|v| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |from: &[f64], t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, x)| c + t * (x - c))
                .collect()
        };

        let worst = simplex[dim].clone();
        let reflected = toward(&worst, -REFLECTION);
        let f_reflected = eval(&reflected);

        if f_reflected < values[0] {
            let expanded = toward(&worst, -REFLECTION * EXPANSION);
            let f_expanded = eval(&expanded);
            if f_expanded < f_reflected {
                simplex[dim] = expanded;
                values[dim] = f_expanded;
            } else {
                simplex[dim] = reflected;
                values[dim] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = f_reflected;
            continue;
        }
        let (candidate, f_candidate, accept) = if f_reflected < values[dim] {
            let outside = toward(&worst, -REFLECTION * CONTRACTION);
            let f = eval(&outside);
            (outside, f, f <= f_reflected)
        } else {
            let inside = toward(&worst, CONTRACTION);
            let f = eval(&inside);
            (inside, f, f < values[dim])
        };
        if accept {
            simplex[dim] = candidate;
            values[dim] = f_candidate;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=dim {
            simplex[i] = best
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| b + SHRINK * (x - b))
                .collect();
            values[i] = eval(&simplex[i]);
        }
    }

    Ok(NelderMeadResult {
        x: simplex[0].clone(),
        f: values[0],
        iterations,
        evaluations,
        converged,
    })
}
