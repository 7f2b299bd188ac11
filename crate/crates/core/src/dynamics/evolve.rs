use num_traits::Zero;

use super::integrate::{integrate_on_grid, Tolerance};
use super::master::{Channel, MasterEquation};
use super::{DriveField, DynamicsError, SystemParams};
use crate::hilbert::{DensityMatrix, HilbertError, Level, Operator};
use crate::scalar::{c, Cplx, Real};

/// Level populations summed over cavity photon number.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Populations<T> {
    pub ground: Vec<T>,
    pub exciton: Vec<T>,
    /// `|f⟩` population, three-level systems only.
    pub upper: Option<Vec<T>>,
    /// Mean cavity photon number ⟨a†a⟩.
    pub photons: Vec<T>,
}

/// Cumulative emitted photons per channel since the start of the run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EmittedPhotons<T> {
    /// ∫ γ′₁⟨σ₊σ₋⟩ dt
    pub emitter: Vec<T>,
    /// ∫ 2κ⟨a†a⟩ dt
    pub cavity: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult<T> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
    pub populations: Populations<T>,
    pub emitted: EmittedPhotons<T>,
    /// Largest |Tr ρ − 1| over the output samples. Not corrected.
    pub max_trace_drift: T,
}

impl<T: Real> EvolutionResult<T> {
    /// Smallest eigenvalue over every output state.
    pub fn min_eigenvalue(&self) -> T {
        self.states
            .iter()
            .map(|s| s.min_eigenvalue())
            .fold(T::infinity(), T::min)
    }

    pub fn final_emission(&self) -> (T, T) {
        (
            self.emitted.emitter.last().copied().unwrap_or_else(T::zero),
            self.emitted.cavity.last().copied().unwrap_or_else(T::zero),
        )
    }
}

fn check_grid<T: Real>(grid: &[T]) -> Result<(), DynamicsError> {
    if grid.is_empty() {
        return Err(DynamicsError::InvalidGrid("output grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(DynamicsError::InvalidGrid("output grid must be finite".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(DynamicsError::InvalidGrid("output grid must be sorted".into()));
    }
    Ok(())
}

/// Diagonal sum of `rho` over the basis states of `level`.
fn level_population<T: Real>(rho: &Operator<T>, fock_dim: usize, level: usize) -> T {
    (0..fock_dim)
        .map(|n| rho[(level * fock_dim + n, level * fock_dim + n)].re)
        .sum()
}

/// Integrates the master equation from `grid[0]` and samples on `grid`.
pub fn evolve<T: Real>(
    initial: &DensityMatrix<T>,
    params: &SystemParams<T>,
    drive: &DriveField<T>,
    grid: &[T],
    tol: Tolerance<T>,
) -> Result<EvolutionResult<T>, DynamicsError> {
    check_grid(grid)?;
    if !(tol.rtol > T::zero()) || !(tol.atol >= T::zero()) {
        return Err(DynamicsError::InvalidParameter {
            name: "tol",
            reason: "tolerances must be positive".into(),
        });
    }
    let me = MasterEquation::new(params, drive)?;
    let n = me.dim();
    if initial.dim() != n {
        return Err(HilbertError::DimensionMismatch {
            expected: n,
            found: initial.dim(),
        }
        .into());
    }
    let emitter_k = me
        .collapse_operators()
        .iter()
        .position(|l| l.channel == Channel::Emitter)
        .expect("emitter channel always present");
    let cavity_k = me
        .collapse_operators()
        .iter()
        .position(|l| l.channel == Channel::Cavity)
        .expect("cavity channel always present");

    let nn = n * n;
    let mut y0: Vec<Cplx<T>> = initial.as_operator().as_slice().to_vec();
    y0.extend([Cplx::zero(), Cplx::zero()]);

    let mut scratch = me.scratch();
    let rhs = |t: T, y: &[Cplx<T>], dy: &mut [Cplx<T>]| {
        let (rho, acc) = y.split_at(nn);
        let _ = acc;
        me.derivative_into(t, rho, &mut dy[..nn], &mut scratch);
        dy[nn] = c(me.channel_rate(emitter_k, rho));
        dy[nn + 1] = c(me.channel_rate(cavity_k, rho));
    };

    let samples = integrate_on_grid(rhs, grid[0], y0, grid, &drive.breakpoints(), tol)?;

    let fock_dim = params.space.fock_dim();
    let three = params.space.emitter_levels() == 3;
    let mut result = EvolutionResult {
        times: grid.to_vec(),
        states: Vec::with_capacity(grid.len()),
        populations: Populations {
            upper: three.then(Vec::new),
            ..Default::default()
        },
        emitted: EmittedPhotons::default(),
        max_trace_drift: T::zero(),
    };
    let number = &me.operators().number;
    for y in samples {
        let op = Operator::from_row_major(y[..nn].to_vec()).expect("square state");
        let drift = (op.trace().re - T::one()).abs();
        result.max_trace_drift = result.max_trace_drift.max(drift);
        let p = &mut result.populations;
        p.ground.push(level_population(&op, fock_dim, Level::Ground as usize));
        p.exciton.push(level_population(&op, fock_dim, Level::Exciton as usize));
        if let Some(u) = p.upper.as_mut() {
            u.push(level_population(&op, fock_dim, Level::Upper as usize));
        }
        let photons = (0..n).map(|i| number[(i, i)].re * op[(i, i)].re).sum();
        p.photons.push(photons);
        result.emitted.emitter.push(y[nn].re);
        result.emitted.cavity.push(y[nn + 1].re);
        result.states.push(DensityMatrix::from_operator_unchecked(op));
    }
    Ok(result)
}

/// Outcome of re-running at a larger Fock cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockConvergence<T> {
    pub cutoff: usize,
    pub max_population_difference: T,
    pub converged: bool,
}

/// Compares level populations at cutoff N and N+1 for an initial basis
/// state `(level, photons)`.
pub fn check_fock_convergence<T: Real>(
    params: &SystemParams<T>,
    drive: &DriveField<T>,
    initial: (Level, usize),
    grid: &[T],
    tol: Tolerance<T>,
    threshold: T,
) -> Result<FockConvergence<T>, DynamicsError> {
    let n = params.space.fock_cutoff();
    let bigger = params.clone().with_fock_cutoff(n + 1)?;
    let run = |p: &SystemParams<T>| {
        let rho = DensityMatrix::basis(&p.space, initial.0, initial.1);
        evolve(&rho, p, drive, grid, tol)
    };
    let a = run(params)?;
    let b = run(&bigger)?;
    let diff = |x: &[T], y: &[T]| x.iter().zip(y).map(|(p, q)| (*p - *q).abs()).fold(T::zero(), T::max);
    let mut d = diff(&a.populations.exciton, &b.populations.exciton)
        .max(diff(&a.populations.ground, &b.populations.ground));
    if let (Some(u), Some(v)) = (&a.populations.upper, &b.populations.upper) {
        d = d.max(diff(u, v));
    }
    Ok(FockConvergence {
        cutoff: n,
        max_population_difference: d,
        converged: d <= threshold,
    })
}

/// Default threshold for [`check_fock_convergence`].
pub const FOCK_CONVERGENCE_TOL: f64 = 1e-4;

/// Uniform grid with `n` intervals from `t0` to `t1` inclusive.
pub fn linspace<T: Real>(t0: T, t1: T, n: usize) -> Vec<T> {
    let n = n.max(1);
    let step = (t1 - t0) / T::from_usize_lossy(n);
    (0..=n).map(|k| t0 + step * T::from_usize_lossy(k)).collect()
}
