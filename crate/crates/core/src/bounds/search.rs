//! Multi-start Nelder-Mead over `SU(d)`.
//!
//! Each start draws a Haar base point `w` and searches the chart
//! `θ ↦ w · exp(i Σ_k θ_k G_k)` over the `d²−1` generalized Gell-Mann
//! generators, beginning at `θ = 0`. The global phase is not parameterized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{gell_mann_basis, haar_random_unitary, ComplexMatrix, RngHandle, Unitary, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub starts: usize,
    pub max_iters: usize,
    /// Convergence tolerance on the simplex value spread.
    pub tol: f64,
    pub rng: RngHandle,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iters: 4000,
            tol: 1e-12,
            rng: RngHandle::new(1),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidConfig("starts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartTrace {
    pub start: usize,
    pub initial: f64,
    #[serde(rename = "final")]
    pub final_value: f64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub value: f64,
    pub minimizer: Unitary,
    pub starts: Vec<StartTrace>,
}

struct Chart {
    base: Unitary,
    generators: Vec<ComplexMatrix>,
}

impl Chart {
    fn point(&self, theta: &[f64]) -> Unitary {
        let d = self.base.dim();
        let h = self
            .generators
            .iter()
            .zip(theta)
            .fold(ComplexMatrix::zeros(d, d), |acc, (g, &t)| &acc + &g.scale(C64::new(t, 0.0)));
        self.base.compose(&Unitary::from_generator(&h))
    }
}

/// Minimizes `objective` over `U(d)`; starts are independent and merged in index order.
pub fn minimize_over_unitaries<F>(d: usize, objective: F, cfg: &SearchConfig) -> Result<SearchOutcome>
where
    F: Fn(&Unitary) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let generators = gell_mann_basis(d);
    let run = |start: usize| -> Result<(StartTrace, Unitary)> {
        let chart = Chart {
            base: haar_random_unitary(d, cfg.rng.derive(start as u64)),
            generators: generators.clone(),
        };
        let n = chart.generators.len();
        if n == 0 {
            let v = objective(&chart.base)?;
            let trace = StartTrace { start, initial: v, final_value: v };
            return Ok((trace, chart.base));
        }
        let f = |theta: &[f64]| objective(&chart.point(theta));
        let x0 = vec![0.0; n];
        let initial = f(&x0)?;
        let (x, value) = nelder_mead(f, x0, 0.4, cfg.max_iters, cfg.tol)?;
        let trace = StartTrace { start, initial, final_value: value };
        Ok((trace, chart.point(&x)))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Result<(StartTrace, Unitary)>> = {
        use rayon::prelude::*;
        (0..cfg.starts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(StartTrace, Unitary)>> = (0..cfg.starts).map(run).collect();

    let mut starts = Vec::with_capacity(cfg.starts);
    let mut best: Option<(f64, Unitary)> = None;
    for r in results {
        let (trace, u) = r?;
        if best.as_ref().is_none_or(|(v, _)| trace.final_value < *v) {
            best = Some((trace.final_value, u));
        }
        starts.push(trace);
    }
    let (value, minimizer) = best.expect("at least one start");
    Ok(SearchOutcome { value, minimizer, starts })
}

/// Nelder-Mead with restarts around the incumbent until a restart stops improving.
pub fn nelder_mead<F>(
    mut f: F,
    x0: Vec<f64>,
    step: f64,
    max_evals: usize,
    tol: f64,
) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut best_x = x0;
    let mut best_f = f(&best_x)?;
    let mut evals = 1;
    let mut scale = step;
    for _restart in 0..8 {
        if evals >= max_evals {
            break;
        }
        let (x, fx, used) = nelder_mead_once(&mut f, &best_x, best_f, scale, max_evals - evals, tol)?;
        evals += used;
        let improved = best_f - fx;
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
        if improved <= tol {
            break;
        }
        scale = (scale * 0.5).max(1e-3);
    }
    Ok((best_x, best_f))
}

fn nelder_mead_once<F>(
    f: &mut F,
    x0: &[f64],
    f0: f64,
    step: f64,
    budget: usize,
    tol: f64,
) -> Result<(Vec<f64>, f64, usize)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let n = x0.len();
    let mut evals = 0;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x)?;
        evals += 1;
        simplex.push((x, fx));
    }

    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= tol && size <= 1e-7 || size <= 1e-12 {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let toward = |coef: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + coef * (c - w)).collect()
        };

        let worst = simplex[n].0.clone();
        let xr = toward(ALPHA, &worst);
        let fr = f(&xr)?;
        evals += 1;

        if fr < simplex[0].1 {
            let xe = toward(GAMMA, &worst);
            let fe = f(&xe)?;
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = toward(RHO, &worst);
                let fc = f(&xc)?;
                (xc, fc)
            } else {
                let xc = toward(-RHO, &worst);
                let fc = f(&xc)?;
                (xc, fc)
            };
            evals += 1;
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + SIGMA * (*xi - bi);
                    }
                    *fx = f(x)?;
                    evals += 1;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    Ok((x, fx, evals))
}
