//! Driven Lindblad generator in the frame rotating at the laser frequency.
//!
//! With `U = exp[iω₀ t (σ₊σ₋ + a†a)]` the lab-frame equation loses its
//! explicit `e^{∓iω₀t}` drive factors and the bare frequencies ω_A, ω_C are
//! replaced by the detunings δ_AL, δ_CL:
//!
//! ```text
//! H = δ_AL σ₊σ₋ + δ_CL a†a + i g (a†σ₋ − aσ₊) + Ē(t) b† + Ē*(t) b
//! dρ/dt = −i[H, ρ] + Σₖ (Lₖ ρ Lₖ† − ½{Lₖ†Lₖ, ρ})
//! ```
//!
//! where `b` is `a` (cavity drive) or `σ₋` (emitter drive), and the collapse
//! operators are `√γ′₁ σ₋`, `√(2κ) a`, optionally `√(1/T₁ᶠ) |X⟩⟨f|` and
//! `√(2/T₂*) σ₊σ₋`.

use num_traits::Zero;

use super::{DriveField, DriveTarget, DynamicsError, SystemParams};
use crate::hilbert::{DensityMatrix, Operator, SystemOperators};
use crate::scalar::{c, ci, Cplx, Real};

/// Dissipation channel labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    /// Emitter decay into non-cavity modes, rate γ′₁.
    Emitter,
    /// Cavity leakage, rate 2κ.
    Cavity,
    /// `|f⟩ → |X⟩` feeding, rate 1/T₁ᶠ.
    Relaxation,
    /// Pure dephasing of the exciton.
    Dephasing,
}

impl Channel {
    /// Whether a jump on this channel releases a photon.
    pub fn is_emission(self) -> bool {
        matches!(self, Self::Emitter | Self::Cavity)
    }
}

#[derive(Clone, Debug)]
pub struct CollapseOperator<T> {
    pub channel: Channel,
    /// Includes the square root of the rate.
    pub op: Operator<T>,
    pub op_dag: Operator<T>,
    /// `L†L`
    pub rate_op: Operator<T>,
}

/// Precomputed generator for a fixed set of parameters and drive.
#[derive(Clone, Debug)]
pub struct MasterEquation<T> {
    params: SystemParams<T>,
    drive: DriveField<T>,
    ops: SystemOperators<T>,
    /// Time-independent part of `H − (i/2) Σ L†L`.
    h_eff_static: Operator<T>,
    h_static: Operator<T>,
    raise: Operator<T>,
    lower: Operator<T>,
    collapse: Vec<CollapseOperator<T>>,
}

impl<T: Real> MasterEquation<T> {
    pub fn new(params: &SystemParams<T>, drive: &DriveField<T>) -> Result<Self, DynamicsError> {
        params.validate()?;
        drive.validate()?;
        let ops = SystemOperators::new(params.space);

        let coupling = (&(&ops.a_dag * &ops.sigma_minus) - &(&ops.a * &ops.sigma_plus)).scale(ci(params.g));
        let h_static = &(&ops.exciton_projector.scale_real(params.delta_al)
            + &ops.number.scale_real(params.delta_cl))
            + &coupling;

        let mut collapse = Vec::new();
        let mut push = |channel, op: Operator<T>, rate: T| {
            let op = op.scale_real(rate.sqrt());
            let op_dag = op.adjoint();
            let rate_op = &op_dag * &op;
            collapse.push(CollapseOperator { channel, op, op_dag, rate_op });
        };
        push(Channel::Emitter, ops.sigma_minus.clone(), params.gamma1_prime);
        push(Channel::Cavity, ops.a.clone(), params.kappa * T::lit(2.0));
        if let (Some(r), Some(low)) = (params.relax, ops.upper_lowering.as_ref()) {
            push(Channel::Relaxation, low.clone(), T::one() / r.t1f);
        }
        if let Some(t2s) = params.t2_star {
            push(Channel::Dephasing, ops.exciton_projector.clone(), T::lit(2.0) / t2s);
        }

        let mut h_eff_static = h_static.clone();
        for l in &collapse {
            h_eff_static = &h_eff_static - &l.rate_op.scale(ci(T::lit(0.5)));
        }

        let (raise, lower) = match drive.target {
            DriveTarget::Cavity => (ops.a_dag.clone(), ops.a.clone()),
            DriveTarget::Emitter => (ops.sigma_plus.clone(), ops.sigma_minus.clone()),
        };

        Ok(Self {
            params: params.clone(),
            drive: drive.clone(),
            ops,
            h_eff_static,
            h_static,
            raise,
            lower,
            collapse,
        })
    }

    pub fn dim(&self) -> usize {
        self.ops.space.total_dim()
    }

    pub fn params(&self) -> &SystemParams<T> {
        &self.params
    }

    pub fn drive(&self) -> &DriveField<T> {
        &self.drive
    }

    pub fn operators(&self) -> &SystemOperators<T> {
        &self.ops
    }

    pub fn collapse_operators(&self) -> &[CollapseOperator<T>] {
        &self.collapse
    }

    /// Hermitian Hamiltonian at time `t`.
    pub fn hamiltonian(&self, t: T) -> Operator<T> {
        let e = self.drive.amplitude(t, &self.params);
        &(&self.h_static + &self.raise.scale(e)) + &self.lower.scale(e.conj())
    }

    /// Non-Hermitian `H − (i/2) Σ L†L` at time `t`, written into `out`.
    pub fn effective_hamiltonian_into(&self, t: T, out: &mut Operator<T>) {
        out.clone_from(&self.h_eff_static);
        let e = self.drive.amplitude(t, &self.params);
        if e.is_zero() {
            return;
        }
        let ec = e.conj();
        let (o, r, l) = (out.as_mut_slice(), self.raise.as_slice(), self.lower.as_slice());
        for i in 0..o.len() {
            o[i] = o[i] + r[i] * e + l[i] * ec;
        }
    }

    /// `dρ/dt` for a row-major `dim × dim` slice.
    pub fn derivative_into(&self, t: T, rho: &[Cplx<T>], out: &mut [Cplx<T>], scratch: &mut Scratch<T>) {
        let n = self.dim();
        self.effective_hamiltonian_into(t, &mut scratch.h);
        let h = scratch.h.as_slice();
        let minus_i = -Cplx::<T>::i();
        // −i(H ρ − ρ H†)
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cplx::zero();
                for k in 0..n {
                    acc = acc + h[i * n + k] * rho[k * n + j] - rho[i * n + k] * h[j * n + k].conj();
                }
                out[i * n + j] = minus_i * acc;
            }
        }
        // Σ L ρ L†, exploiting sparsity of the jump operators
        for l in &self.collapse {
            let lo = l.op.as_slice();
            for a in 0..n {
                for b in 0..n {
                    let lab = lo[a * n + b];
                    if lab.is_zero() {
                        continue;
                    }
                    for cc in 0..n {
                        for d in 0..n {
                            let lcd = lo[cc * n + d];
                            if lcd.is_zero() {
                                continue;
                            }
                            // (LρL†)_{a,cc} += L_ab ρ_bd conj(L_cd)
                            out[a * n + cc] = out[a * n + cc] + lab * rho[b * n + d] * lcd.conj();
                        }
                    }
                }
            }
        }
    }

    /// Flux `Tr(Lₖ†Lₖ ρ)` through collapse operator `k`.
    pub fn channel_rate(&self, k: usize, rho: &[Cplx<T>]) -> T {
        let n = self.dim();
        let r = self.collapse[k].rate_op.as_slice();
        let mut acc = Cplx::zero();
        for i in 0..n {
            for j in 0..n {
                let rij = r[i * n + j];
                if !rij.is_zero() {
                    acc = acc + rij * rho[j * n + i];
                }
            }
        }
        acc.re
    }

    /// Flux into every collapse channel.
    pub fn channel_rates(&self, rho: &[Cplx<T>]) -> Vec<(Channel, T)> {
        (0..self.collapse.len())
            .map(|k| (self.collapse[k].channel, self.channel_rate(k, rho)))
            .collect()
    }

    pub fn scratch(&self) -> Scratch<T> {
        Scratch {
            h: Operator::zeros(self.dim()),
        }
    }
}

/// Reusable buffers for [`MasterEquation::derivative_into`].
#[derive(Clone, Debug)]
pub struct Scratch<T> {
    h: Operator<T>,
}

/// Time derivative of `rho` under the driven master equation.
pub fn lindblad_generator<T: Real>(
    params: &SystemParams<T>,
    drive: &DriveField<T>,
    t: T,
    rho: &DensityMatrix<T>,
) -> Result<Operator<T>, DynamicsError> {
    let me = MasterEquation::new(params, drive)?;
    if rho.dim() != me.dim() {
        return Err(DynamicsError::Hilbert(crate::hilbert::HilbertError::DimensionMismatch {
            expected: me.dim(),
            found: rho.dim(),
        }));
    }
    let mut out = Operator::zeros(me.dim());
    let mut scratch = me.scratch();
    me.derivative_into(t, rho.as_operator().as_slice(), out.as_mut_slice(), &mut scratch);
    Ok(out)
}

/// Reference generator built from plain matrix algebra; used to cross-check
/// the optimized path.
pub fn lindblad_generator_reference<T: Real>(me: &MasterEquation<T>, t: T, rho: &Operator<T>) -> Operator<T> {
    let h = me.hamiltonian(t);
    let mut out = h.commutator(rho).scale(-Cplx::i());
    for l in &me.collapse {
        let jump = &(&l.op * rho) * &l.op_dag;
        let anti = l.rate_op.anticommutator(rho).scale(c(T::lit(0.5)));
        out += &(&jump - &anti);
    }
    out
}
