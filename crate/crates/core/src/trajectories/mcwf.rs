use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::TrajectoryError;
use crate::dynamics::{Channel, DriveField, MasterEquation, Stepper, SystemParams, Tolerance};
use crate::hilbert::{Level, Operator, PureState};
use crate::scalar::{Cplx, Real};

/// Jump times are located to this accuracy, ps.
pub const JUMP_TIME_TOL: f64 = 1e-3;

/// Default ensemble size.
pub const DEFAULT_TRAJECTORIES: usize = 10_000;

/// Seed of trajectory `index`: a SplitMix64 finaliser applied to the
/// master seed advanced by `index` golden-ratio increments.
///
/// Trajectories therefore draw from independent streams and the ensemble
/// does not depend on how work is split between threads.
pub fn trajectory_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryConfig<T> {
    pub n_trajectories: usize,
    pub master_seed: u64,
    /// Channels whose jumps count as detected photons.
    pub jump_channels: Vec<Channel>,
    /// Integration window; `None` runs from the first pulse edge until
    /// 14 radiative lifetimes after the last one.
    pub t_span: Option<(T, T)>,
    /// Times at which each trajectory records its exciton population.
    pub sample_times: Vec<T>,
    pub tol: Tolerance<T>,
    /// Worker threads; 0 uses the global pool. Never affects results.
    pub jobs: usize,
}

impl<T: Real> Default for TrajectoryConfig<T> {
    fn default() -> Self {
        Self {
            n_trajectories: DEFAULT_TRAJECTORIES,
            master_seed: 0,
            jump_channels: vec![Channel::Cavity],
            t_span: None,
            sample_times: Vec::new(),
            tol: Tolerance::default(),
            jobs: 0,
        }
    }
}

impl<T: Real> TrajectoryConfig<T> {
    pub fn validate(&self) -> Result<(), TrajectoryError> {
        if self.n_trajectories == 0 {
            return Err(TrajectoryError::InvalidConfig("n_trajectories must be at least 1".into()));
        }
        if self.jump_channels.is_empty() {
            return Err(TrajectoryError::InvalidConfig("no jump channels selected".into()));
        }
        if let Some((a, b)) = self.t_span {
            if !(a.is_finite() && b.is_finite() && b >= a) {
                return Err(TrajectoryError::InvalidConfig("t_span must be finite and ordered".into()));
            }
        }
        if self.sample_times.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(TrajectoryError::InvalidConfig("sample_times must be sorted".into()));
        }
        Ok(())
    }

    /// Window actually integrated for a given system and drive.
    pub fn resolve_span(&self, params: &SystemParams<T>, drive: &DriveField<T>) -> (T, T) {
        if let Some(span) = self.t_span {
            return span;
        }
        let b = drive.breakpoints();
        let start = b.first().copied().unwrap_or_else(T::zero);
        let end = b.last().copied().unwrap_or_else(T::zero);
        let mut tail = params.radiative_lifetime();
        if let Some(r) = params.relax {
            tail = tail.max(r.t1f);
        }
        (start, end + T::lit(14.0) * tail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump<T> {
    pub time: T,
    pub channel: Channel,
}

/// Everything one trajectory produced.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub seed: u64,
    pub jumps: Vec<Jump<T>>,
    /// Exciton population ⟨σ₊σ₋⟩ at each requested sample time.
    pub exciton: Vec<T>,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn count(&self, channels: &[Channel]) -> usize {
        self.jumps.iter().filter(|j| channels.contains(&j.channel)).count()
    }
}

fn exciton_population<T: Real>(psi: &[Cplx<T>], projector: &Operator<T>) -> T {
    let n = psi.len();
    let mut num = T::zero();
    let mut den = T::zero();
    for (i, z) in psi.iter().enumerate() {
        let p = z.norm_sqr();
        den = den + p;
        if !projector[(i, i)].is_zero() {
            num = num + p * projector[(i, i)].re;
        }
    }
    debug_assert!(n == projector.dim());
    if den > T::zero() {
        num / den
    } else {
        T::zero()
    }
}

fn norm_sqr<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn uniform<T: Real>(rng: &mut ChaCha8Rng) -> T {
    // (0, 1]: a zero threshold would never trigger
    T::lit(1.0 - rng.random::<f64>())
}

/// One Monte Carlo wavefunction trajectory from the ground state.
///
/// Between jumps ψ evolves under `H − (i/2) Σ L†L` without normalisation.
/// A jump fires when ‖ψ‖² falls to a uniform threshold drawn beforehand;
/// the crossing is bisected on the dense output to [`JUMP_TIME_TOL`], the
/// channel is picked with probability ∝ ‖Lₖψ‖², and ψ is renormalised.
pub fn run_trajectory<T: Real>(
    me: &MasterEquation<T>,
    config: &TrajectoryConfig<T>,
    seed: u64,
) -> Result<TrajectoryRecord<T>, TrajectoryError> {
    let (t0, t1) = config.resolve_span(me.params(), me.drive());
    let space = me.params().space;
    let n = me.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi0 = PureState::<T>::basis(&space, Level::Ground, 0);

    let mut h = Operator::zeros(n);
    let rhs = |t: T, y: &[Cplx<T>], dy: &mut [Cplx<T>]| {
        me.effective_hamiltonian_into(t, &mut h);
        h.apply_into(y, dy);
        let minus_i = -Cplx::<T>::i();
        dy.iter_mut().for_each(|z| *z = *z * minus_i);
    };
    let mut stepper = Stepper::new(rhs, t0, psi0.amplitudes().to_vec(), config.tol);
    let projector = &me.operators().exciton_projector;

    let mut record = TrajectoryRecord {
        seed,
        jumps: Vec::new(),
        exciton: Vec::with_capacity(config.sample_times.len()),
    };
    let samples = &config.sample_times;
    let mut si = 0;
    while si < samples.len() && samples[si] <= t0 {
        record.exciton.push(exciton_population(stepper.y(), projector));
        si += 1;
    }

    let stops: Vec<T> = me.drive().breakpoints().into_iter().filter(|&s| s > t0 && s < t1).collect();
    let mut stop_i = 0;
    let mut threshold: T = uniform(&mut rng);
    let mut buf = vec![Cplx::zero(); n];
    let tol_t = T::lit(JUMP_TIME_TOL);

    while stepper.t() < t1 {
        while stop_i < stops.len() && stops[stop_i] <= stepper.t() {
            stop_i += 1;
            stepper.invalidate();
        }
        let target = stops.get(stop_i).copied().unwrap_or(t1);
        stepper.step(target)?;

        if norm_sqr(stepper.y()) > threshold {
            while si < samples.len() && samples[si] <= stepper.t() {
                stepper.dense_into(samples[si], &mut buf);
                record.exciton.push(exciton_population(&buf, projector));
                si += 1;
            }
            continue;
        }

        // the norm crossed the threshold inside [t_prev, t]
        let (mut lo, mut hi) = (stepper.t_prev(), stepper.t());
        while hi - lo > tol_t {
            let mid = (lo + hi) * T::lit(0.5);
            stepper.dense_into(mid, &mut buf);
            if norm_sqr(&buf) > threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_jump = hi;
        while si < samples.len() && samples[si] < t_jump {
            stepper.dense_into(samples[si], &mut buf);
            record.exciton.push(exciton_population(&buf, projector));
            si += 1;
        }
        stepper.dense_into(t_jump, &mut buf);

        let weights: Vec<T> = me
            .collapse_operators()
            .iter()
            .map(|l| {
                let mut out = vec![Cplx::zero(); n];
                l.op.apply_into(&buf, &mut out);
                norm_sqr(&out)
            })
            .collect();
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) {
            // nothing can jump: numerical leakage of the norm only
            stepper.reset(t_jump, buf.clone());
            threshold = uniform(&mut rng);
            continue;
        }
        let mut u = uniform::<T>(&mut rng) * total;
        let mut k = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if u <= *w {
                k = i;
                break;
            }
            u = u - *w;
        }
        let l = &me.collapse_operators()[k];
        let mut next = vec![Cplx::zero(); n];
        l.op.apply_into(&buf, &mut next);
        let norm = norm_sqr(&next).sqrt();
        next.iter_mut().for_each(|z| *z = z.unscale(norm));
        record.jumps.push(Jump {
            time: t_jump,
            channel: l.channel,
        });
        stepper.reset(t_jump, next);
        threshold = uniform(&mut rng);
    }
    while si < samples.len() && samples[si] <= t1 {
        record.exciton.push(exciton_population(stepper.y(), projector));
        si += 1;
    }
    Ok(record)
}

/// Runs `config.n_trajectories` trajectories in parallel; the output is
/// ordered by trajectory index and independent of the thread count.
pub fn run_ensemble<T: Real>(
    params: &SystemParams<T>,
    drive: &DriveField<T>,
    config: &TrajectoryConfig<T>,
) -> Result<Vec<TrajectoryRecord<T>>, TrajectoryError> {
    config.validate()?;
    let me = MasterEquation::new(params, drive)?;
    let work = || {
        (0..config.n_trajectories as u64)
            .into_par_iter()
            .map(|i| run_trajectory(&me, config, trajectory_seed(config.master_seed, i)))
            .collect::<Result<Vec<_>, _>>()
    };
    if config.jobs == 0 {
        work()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| TrajectoryError::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(work)
    }
}

/// Ensemble mean and standard error of the sampled exciton population.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationEstimate<T> {
    pub times: Vec<T>,
    pub mean: Vec<T>,
    pub std_err: Vec<T>,
}

pub fn ensemble_population<T: Real>(
    records: &[TrajectoryRecord<T>],
    times: &[T],
) -> Result<PopulationEstimate<T>, TrajectoryError> {
    if records.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    let m = times.len();
    if records.iter().any(|r| r.exciton.len() != m) {
        return Err(TrajectoryError::InvalidConfig("records were sampled on a different grid".into()));
    }
    let n = T::from_usize_lossy(records.len());
    let mut mean = vec![T::zero(); m];
    let mut sq = vec![T::zero(); m];
    for r in records {
        for (k, p) in r.exciton.iter().enumerate() {
            mean[k] = mean[k] + *p;
            sq[k] = sq[k] + *p * *p;
        }
    }
    let mut std_err = Vec::with_capacity(m);
    for k in 0..m {
        mean[k] = mean[k] / n;
        let var = if records.len() > 1 {
            ((sq[k] / n - mean[k] * mean[k]) * n / (n - T::one())).max(T::zero())
        } else {
            T::zero()
        };
        std_err.push((var / n).sqrt());
    }
    Ok(PopulationEstimate {
        times: times.to_vec(),
        mean,
        std_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct() {
        let s: std::collections::HashSet<u64> = (0..10_000).map(|i| trajectory_seed(42, i)).collect();
        assert_eq!(s.len(), 10_000);
        assert_ne!(trajectory_seed(1, 0), trajectory_seed(2, 0));
    }
}
