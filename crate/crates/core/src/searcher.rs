//! Numerical search for real covariant spin codes.
//!
//! With `|0> = sum_i x_i |m_i>` on the support lattice and `|1>` its mirror,
//! every reduced Knill-Laflamme condition is a real quadratic form
//! `x^T B x`. A code is a unit vector annihilated by all forms; we find one
//! by Levenberg-Marquardt on the sphere from random starts.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::{index_of, SphericalTensor};
use crate::bindihedral::{first_spin_with_freedom, support_lattice, Irrep};
use crate::dickemap::{bootstrap, MultiqubitCode};
use crate::klengine::{count_conditions_closed, kl_check_full, reduced_conditions, ConditionKind, KLReport, ReducedCondition, SpinCode};
use crate::{Error, HalfInt, Result};

/// Threshold for the independent full check of a found code.
pub const VERIFY_TOLERANCE: f64 = 1e-9;
const BATCH: usize = 64;
// keep polishing well below the acceptance threshold
const POLISH_TARGET: f64 = 1e-30;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSystem {
    pub rep: Irrep,
    pub j: HalfInt,
    pub d: u32,
    /// Support points of `|0>`, in descending `m`.
    pub lattice: Vec<HalfInt>,
    pub conditions: Vec<ReducedCondition>,
    pub forms: Vec<DMatrix<f64>>,
}

impl QuadraticSystem {
    pub fn dim(&self) -> usize {
        self.lattice.len()
    }

    pub fn residuals(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.forms.len(), self.forms.iter().map(|b| x.dot(&(b * x))))
    }

    /// `sum_i (x^T B_i x)^2`.
    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        self.residuals(x).norm_squared()
    }
}

/// Builds one symmetric form per reduced condition of `(rep, d)` at spin `j`.
pub fn build_system(rep: Irrep, j: HalfInt, d: u32) -> Result<QuadraticSystem> {
    let lattice = support_lattice(rep, j)?;
    if lattice.is_empty() {
        return Err(Error::NoDegreesOfFreedom);
    }
    let conditions = reduced_conditions(rep, d)?;
    if i64::from(d) > j.twice() + 1 {
        return Err(Error::RankOverflow { d, twice_j: j.twice() });
    }
    let mu = lattice.len();
    let idx: Vec<usize> = lattice.iter().map(|m| index_of(j, *m)).collect();
    let mirror: Vec<usize> = lattice.iter().map(|m| index_of(j, -*m)).collect();
    let forms = conditions
        .iter()
        .map(|c| {
            let t = SphericalTensor::new(j, c.k, c.q)?;
            let mut b = DMatrix::zeros(mu, mu);
            for i in 0..mu {
                for l in 0..mu {
                    b[(i, l)] = match c.kind {
                        // <0|T|0> - <1|T|1>
                        ConditionKind::OnDiag => t.entry(idx[i], idx[l]) - t.entry(mirror[i], mirror[l]),
                        // <0|T|1>
                        _ => t.entry(idx[i], mirror[l]),
                    };
                }
            }
            Ok((&b + b.transpose()) * 0.5)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadraticSystem { rep, j, d, lattice, conditions, forms })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { restarts: 256, max_iterations: 2000, tolerance: 1e-12, rng_seed: 0 }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("need restarts >= 1 and tolerance > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Unit vector in lattice order, first nonzero entry positive.
    pub amplitudes: Vec<f64>,
    pub residual: f64,
    /// 1-based index of the successful restart.
    pub restarts_used: usize,
}

fn random_start(dim: usize, seed: u64, index: usize) -> DVector<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    loop {
        let x: DVector<f64> = DVector::from_iterator(dim, (0..dim).map(|_| -> f64 { StandardNormal.sample(&mut rng) }));
        let norm = x.norm();
        if norm > 1e-8 {
            return x / norm;
        }
    }
}

/// Levenberg-Marquardt on the unit sphere. Returns the final point and its
/// objective value.
fn descend(system: &QuadraticSystem, mut x: DVector<f64>, max_iterations: usize) -> (DVector<f64>, f64) {
    let dim = x.len();
    let mut cost = system.objective(&x);
    let mut lambda = 1e-3;
    let mut stalled = 0;
    for _ in 0..max_iterations {
        if cost < POLISH_TARGET || stalled > 30 {
            break;
        }
        let r = system.residuals(&x);
        let proj = DMatrix::identity(dim, dim) - &x * x.transpose();
        let mut jac = DMatrix::zeros(system.forms.len(), dim);
        for (i, b) in system.forms.iter().enumerate() {
            let g = (b * &x) * 2.0;
            jac.set_row(i, &g.transpose());
        }
        let jac = jac * &proj;
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..12 {
            let mut lhs = jtj.clone();
            let scale = jtj.diagonal().max().max(1e-300);
            for k in 0..dim {
                lhs[(k, k)] += lambda * scale;
            }
            let Some(step) = lhs.cholesky().map(|c| c.solve(&(-&grad))) else {
                lambda *= 4.0;
                continue;
            };
            let cand = &x + &proj * step;
            let cand = &cand / cand.norm();
            let c = system.objective(&cand);
            if c < cost {
                let relative = (cost - c) / cost;
                x = cand;
                cost = c;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                stalled = if relative < 1e-6 { stalled + 1 } else { 0 };
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost)
}

fn canonical(mut x: DVector<f64>) -> Vec<f64> {
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            x.neg_mut();
        }
    }
    x.iter().copied().collect()
}

/// Runs restarts in fixed batches and returns the lowest-index success, so
/// the result depends only on the seed.
pub fn solve(system: &QuadraticSystem, cfg: &SearchConfig) -> Result<Solution> {
    cfg.validate()?;
    let dim = system.dim();
    if dim == 0 {
        return Err(Error::NoDegreesOfFreedom);
    }
    let mut best = f64::INFINITY;
    let mut start = 0;
    while start < cfg.restarts {
        let end = (start + BATCH).min(cfg.restarts);
        let results: Vec<(usize, DVector<f64>, f64)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let x0 = random_start(dim, cfg.rng_seed, i);
                let (x, cost) = descend(system, x0, cfg.max_iterations);
                (i, x, cost)
            })
            .collect();
        for (i, x, cost) in results {
            if cost < cfg.tolerance {
                return Ok(Solution { amplitudes: canonical(x), residual: cost, restarts_used: i + 1 });
            }
            best = best.min(cost);
        }
        start = end;
    }
    Err(Error::NotFound { restarts: cfg.restarts, best_residual: best })
}

/// A found code with its spin-side and multiqubit forms.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub spin: SpinCode,
    pub code: MultiqubitCode,
    pub solution: Solution,
    pub nu: u64,
    pub mu: u64,
    pub report: KLReport,
}

/// Searches at the spin predicted by `mu = nu + 1`.
pub fn search_code(rep: Irrep, d: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    search_code_escalating(rep, d, cfg, 0)
}

/// As [`search_code`], retrying at the next `escalations` lattice spins
/// (`mu + 1`, `mu + 2`, ...) when a spin yields no solution.
pub fn search_code_escalating(rep: Irrep, d: u32, cfg: &SearchConfig, escalations: u32) -> Result<SearchResult> {
    let nu = count_conditions_closed(rep, d)?;
    let mut last = None;
    for extra in 0..=u64::from(escalations) {
        let mu = nu + 1 + extra;
        let mu32 = u32::try_from(mu).map_err(|_| Error::OutOfRange(format!("mu = {mu}")))?;
        let j = first_spin_with_freedom(rep, mu32)?;
        match search_at(rep, j, d, cfg) {
            Ok((spin, solution, report)) => {
                let code = bootstrap(&spin);
                return Ok(SearchResult { spin, code, solution, nu, mu, report });
            }
            Err(e @ Error::NotFound { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Builds, solves and independently verifies at a fixed spin.
pub fn search_at(rep: Irrep, j: HalfInt, d: u32, cfg: &SearchConfig) -> Result<(SpinCode, Solution, KLReport)> {
    let system = build_system(rep, j, d)?;
    let solution = solve(&system, cfg)?;
    let spin = SpinCode::new(rep, j, system.lattice.iter().copied().zip(solution.amplitudes.iter().copied()))
        .map_err(|e| Error::Inconsistency(format!("solver returned an invalid code: {e}")))?;
    let report = kl_check_full(&spin, d, VERIFY_TOLERANCE)?;
    if !report.pass {
        return Err(Error::Inconsistency(format!(
            "residual {:e} below tolerance but full check gives {:e}",
            solution.residual, report.max_residual
        )));
    }
    Ok((spin, solution, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn d3_system_is_one_diagonal_form() {
        let sys = build_system(Irrep::new(4, 3).unwrap(), h(11), 3).unwrap();
        assert_eq!((sys.dim(), sys.forms.len()), (2, 1));
        let b = &sys.forms[0];
        assert!(b[(0, 1)].abs() < 1e-15);
        // proportional to diag(5/2, -11/2)
        assert!((b[(0, 0)] / b[(1, 1)] + 5.0 / 11.0).abs() < 1e-13);
    }

    #[test]
    fn distance_one_is_empty() {
        let sys = build_system(Irrep::new(4, 3).unwrap(), h(11), 1).unwrap();
        assert!(sys.forms.is_empty());
        let sol = solve(&sys, &SearchConfig::default()).unwrap();
        assert_eq!(sol.residual, 0.0);
    }

    #[test]
    fn finds_the_eleven_qubit_code() {
        let rep = Irrep::new(4, 3).unwrap();
        let r = search_code(rep, 3, &SearchConfig::default()).unwrap();
        assert_eq!(r.code.n(), 11);
        let a = &r.solution.amplitudes;
        assert!((a[0] - (11.0f64 / 16.0).sqrt()).abs() < 1e-7);
        assert!((a[1].abs() - (5.0f64 / 16.0).sqrt()).abs() < 1e-7);
        assert!(r.solution.residual < 1e-15);
    }

    #[test]
    fn definite_form_is_not_found() {
        let mut sys = build_system(Irrep::new(4, 3).unwrap(), h(11), 3).unwrap();
        sys.forms[0] = DMatrix::identity(2, 2);
        let cfg = SearchConfig { restarts: 8, ..SearchConfig::default() };
        match solve(&sys, &cfg) {
            Err(Error::NotFound { restarts, best_residual }) => {
                assert_eq!(restarts, 8);
                assert!((best_residual - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let rep = Irrep::new(1, 1).unwrap();
        let cfg = SearchConfig { rng_seed: 7, ..SearchConfig::default() };
        let a = search_code(rep, 5, &cfg).unwrap();
        let b = search_code(rep, 5, &cfg).unwrap();
        assert_eq!(a.code.n(), 19);
        assert_eq!(a.solution, b.solution);
    }
}
