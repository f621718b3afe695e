use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{QuadraticForm, SamplerModel};
use crate::error::{Error, Result};
use crate::samples::{BitState, SampleSet};

/// Geometric inverse-temperature schedule for single-flip Metropolis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    /// Full passes over all variables per restart.
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    /// Independent restarts.
    pub reads: usize,
    pub seed: u64,
}

impl AnnealSchedule {
    pub const DEFAULT_SWEEPS: usize = 1000;
    pub const DEFAULT_READS: usize = 1000;
    pub const DEFAULT_BETA_START: f64 = 0.01;

    /// Default schedule for `model`: 1000 reads of 1000 sweeps, `β` from
    /// 0.01 to `10 / median |coefficient|`.
    pub fn for_model<M: SamplerModel>(model: &M, seed: u64) -> Self {
        Self {
            sweeps: Self::DEFAULT_SWEEPS,
            beta_start: Self::DEFAULT_BETA_START,
            beta_end: default_beta_end(&model.quadratic_form()),
            reads: Self::DEFAULT_READS,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::InvalidSchedule("sweeps must be at least 1".into()));
        }
        if self.reads == 0 {
            return Err(Error::InvalidSchedule("reads must be at least 1".into()));
        }
        if !(self.beta_start > 0.0 && self.beta_start.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "beta_start must be positive, got {}",
                self.beta_start
            )));
        }
        if !(self.beta_end > self.beta_start && self.beta_end.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "beta_end ({}) must exceed beta_start ({})",
                self.beta_end, self.beta_start
            )));
        }
        Ok(())
    }

    /// `β` for sweep `k`, interpolated geometrically.
    pub fn beta(&self, k: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_end;
        }
        let t = k as f64 / (self.sweeps - 1) as f64;
        self.beta_start * (self.beta_end / self.beta_start).powf(t)
    }
}

/// `10 / median` of the nonzero coefficient magnitudes (upper median), or
/// 1.0 for a model without coefficients.
fn default_beta_end(form: &QuadraticForm) -> f64 {
    let mut mags = form.coefficient_magnitudes();
    if mags.is_empty() {
        return 1.0;
    }
    mags.sort_by(f64::total_cmp);
    let beta = 10.0 / mags[mags.len() / 2];
    // keep the schedule increasing for very large coefficients
    beta.max(AnnealSchedule::DEFAULT_BETA_START * 2.0)
}

/// Simulated annealing: `reads` restarts from uniform random states, each
/// running `sweeps` in-order passes of single-flip Metropolis. Results are
/// aggregated by state and sorted by energy; identical inputs give identical
/// output regardless of thread count.
pub fn solve_sa<M: SamplerModel>(model: &M, schedule: &AnnealSchedule) -> Result<SampleSet> {
    schedule.validate()?;
    let form = model.quadratic_form();
    let n = form.num_variables();
    let betas: Vec<f64> = (0..schedule.sweeps).map(|k| schedule.beta(k)).collect();

    let finals: Vec<BitState> = (0..schedule.reads)
        .into_par_iter()
        .map(|read| {
            let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
            rng.set_stream(read as u64);
            anneal_once(&form, &betas, &mut rng)
        })
        .collect();

    let mut raw = SampleSet::with_capacity(form.vartype(), n, finals.len());
    for state in &finals {
        raw.push(state, form.energy(state), 1);
    }
    Ok(raw.aggregate())
}

fn anneal_once(form: &QuadraticForm, betas: &[f64], rng: &mut ChaCha8Rng) -> BitState {
    let n = form.num_variables();
    let mut state = BitState::zeros(n);
    for i in 0..n {
        state.set(i, rng.gen::<bool>());
    }
    let mut fields = form.local_fields(&state);
    for &beta in betas {
        for i in 0..n {
            let delta = form.flip_delta(i, state.get(i), fields[i]);
            let accept = delta <= 0.0 || {
                let x = beta * delta;
                // exp(-40) is below the resolution of a uniform f64 draw in practice
                x < 40.0 && rng.gen::<f64>() < (-x).exp()
            };
            if accept {
                form.apply_flip(i, &mut state, &mut fields);
            }
        }
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::IsingModel;
    use crate::qubo::QuboModel;
    use crate::samplers::solve_exact;

    fn schedule(reads: usize, sweeps: usize, seed: u64) -> AnnealSchedule {
        AnnealSchedule {
            sweeps,
            beta_start: 0.01,
            beta_end: 5.0,
            reads,
            seed,
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(schedule(1, 1, 0).validate().is_ok());
        assert!(schedule(0, 1, 0).validate().is_err());
        assert!(schedule(1, 0, 0).validate().is_err());
        let mut s = schedule(1, 1, 0);
        s.beta_end = s.beta_start;
        assert!(s.validate().is_err());
        s.beta_start = -1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn geometric_betas() {
        let s = AnnealSchedule {
            sweeps: 3,
            beta_start: 0.1,
            beta_end: 10.0,
            reads: 1,
            seed: 0,
        };
        assert!((s.beta(0) - 0.1).abs() < 1e-15);
        assert!((s.beta(1) - 1.0).abs() < 1e-12);
        assert!((s.beta(2) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn default_beta_end_uses_median_magnitude() {
        let m = IsingModel::from_parts(
            vec![-0.5, 0.0, 0.0],
            [((0, 1), -1000.0), ((1, 2), -0.1)],
            0.0,
        )
        .unwrap();
        let s = AnnealSchedule::for_model(&m, 0);
        assert_eq!(s.beta_end, 10.0 / 0.5);
        assert_eq!(
            AnnealSchedule::for_model(&QuboModel::zeros(3), 0).beta_end,
            1.0
        );
    }

    #[test]
    fn three_spin_modal_sample_is_ground_state() {
        let m = IsingModel::from_parts(
            vec![-0.5, 0.0, 0.0],
            [((0, 1), -1000.0), ((1, 2), -0.1)],
            0.0,
        )
        .unwrap();
        let mut s = solve_sa(&m, &AnnealSchedule::for_model(&m, 7)).unwrap();
        assert_eq!(s.total_count(), 1000);
        s.sort_by_count();
        assert_eq!(s.get(0).values(), [1, 1, 1]);
    }

    #[test]
    fn deterministic_given_seed() {
        let q = QuboModel::from_rows(&[
            vec![-1.0, 2.0, 0.0],
            vec![0.0, -1.0, 2.0],
            vec![0.5, 0.0, -1.0],
        ])
        .unwrap();
        let a = solve_sa(&q, &schedule(50, 20, 3)).unwrap();
        let b = solve_sa(&q, &schedule(50, 20, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn never_below_exact_minimum() {
        let q = QuboModel::from_rows(&[
            vec![-3.0, 2.0, 4.0, 0.0],
            vec![0.0, -1.0, 2.0, -2.5],
            vec![0.5, 0.0, -1.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.5],
        ])
        .unwrap();
        let exact_min = solve_exact(&q).unwrap().lowest_energy().unwrap();
        let sa = solve_sa(&q, &schedule(100, 50, 11)).unwrap();
        assert!(sa.lowest_energy().unwrap() >= exact_min - 1e-12);
        assert_eq!(sa.lowest_energy().unwrap(), exact_min);
    }

    #[test]
    fn zero_model_marginals_are_uniform() {
        let n = 8;
        let reads = 2000;
        let s = solve_sa(&QuboModel::zeros(n), &schedule(reads, 10, 5)).unwrap();
        assert_eq!(s.total_count(), reads as u64);
        // chi-square, 1 degree of freedom, p = 0.001
        let critical = 10.828;
        for i in 0..n {
            let ones: u64 = s.iter().filter(|x| x.bit(i)).map(|x| x.count).sum();
            let expected = reads as f64 / 2.0;
            let chi2 = 2.0 * (ones as f64 - expected).powi(2) / expected;
            assert!(chi2 < critical, "variable {i}: {ones} ones, chi2 {chi2}");
        }
    }
}
