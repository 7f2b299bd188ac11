use super::matrix::Operator;
use super::HilbertError;
use crate::scalar::{c, Real};

/// Number of emitter levels kept: ground and exciton, optionally a higher
/// state `|f⟩` that relaxes into the exciton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmitterLevels {
    Two,
    Three,
}

impl EmitterLevels {
    pub fn count(self) -> usize {
        match self {
            Self::Two => 2,
            Self::Three => 3,
        }
    }

    pub fn from_count(n: usize) -> Result<Self, HilbertError> {
        match n {
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            other => Err(HilbertError::InvalidLevels(other)),
        }
    }
}

/// Emitter level labels, also the emitter index in the product basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Ground = 0,
    Exciton = 1,
    Upper = 2,
}

/// Truncated emitter ⊗ cavity space. Basis index is
/// `level * (fock_cutoff + 1) + photons`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemSpace {
    levels: EmitterLevels,
    fock_cutoff: usize,
}

/// Default cavity truncation.
pub const DEFAULT_FOCK_CUTOFF: usize = 2;

impl SystemSpace {
    pub fn new(levels: EmitterLevels, fock_cutoff: usize) -> Result<Self, HilbertError> {
        if fock_cutoff < 1 {
            return Err(HilbertError::InvalidCutoff(fock_cutoff));
        }
        Ok(Self { levels, fock_cutoff })
    }

    pub fn two_level(fock_cutoff: usize) -> Result<Self, HilbertError> {
        Self::new(EmitterLevels::Two, fock_cutoff)
    }

    pub fn three_level(fock_cutoff: usize) -> Result<Self, HilbertError> {
        Self::new(EmitterLevels::Three, fock_cutoff)
    }

    pub fn levels(&self) -> EmitterLevels {
        self.levels
    }

    pub fn emitter_levels(&self) -> usize {
        self.levels.count()
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    pub fn total_dim(&self) -> usize {
        self.emitter_levels() * self.fock_dim()
    }

    pub fn index(&self, level: Level, photons: usize) -> usize {
        debug_assert!(photons <= self.fock_cutoff);
        debug_assert!((level as usize) < self.emitter_levels());
        level as usize * self.fock_dim() + photons
    }

    /// Same emitter, one more cavity photon allowed.
    pub fn with_cutoff(&self, fock_cutoff: usize) -> Result<Self, HilbertError> {
        Self::new(self.levels, fock_cutoff)
    }
}

impl Default for SystemSpace {
    fn default() -> Self {
        Self {
            levels: EmitterLevels::Two,
            fock_cutoff: DEFAULT_FOCK_CUTOFF,
        }
    }
}

/// Operators on the full product space.
#[derive(Clone, Debug)]
pub struct SystemOperators<T> {
    pub space: SystemSpace,
    pub identity: Operator<T>,
    /// `|X⟩⟨X| − |0⟩⟨0|`
    pub sigma_z: Operator<T>,
    /// `|0⟩⟨X|`
    pub sigma_minus: Operator<T>,
    pub sigma_plus: Operator<T>,
    pub a: Operator<T>,
    pub a_dag: Operator<T>,
    /// `a†a`
    pub number: Operator<T>,
    /// `σ₊σ₋ = |X⟩⟨X|`
    pub exciton_projector: Operator<T>,
    pub ground_projector: Operator<T>,
    /// `|f⟩⟨f|`, three-level spaces only.
    pub upper_projector: Option<Operator<T>>,
    /// `|X⟩⟨f|`, three-level spaces only.
    pub upper_lowering: Option<Operator<T>>,
}

impl<T: Real> SystemOperators<T> {
    pub fn new(space: SystemSpace) -> Self {
        let ne = space.emitter_levels();
        let nf = space.fock_dim();
        let id_e = Operator::identity(ne);
        let id_f = Operator::identity(nf);

        let ee = |r: Level, col: Level| Operator::unit(ne, r as usize, col as usize);
        let lift_e = |op: &Operator<T>| op.kron(&id_f);

        let mut a_f = Operator::zeros(nf);
        for n in 1..nf {
            a_f[(n - 1, n)] = c(T::from_usize_lossy(n).sqrt());
        }
        let a = id_e.kron(&a_f);
        let a_dag = a.adjoint();
        let number = &a_dag * &a;

        let sigma_minus = lift_e(&ee(Level::Ground, Level::Exciton));
        let sigma_plus = sigma_minus.adjoint();
        let exciton_projector = lift_e(&ee(Level::Exciton, Level::Exciton));
        let ground_projector = lift_e(&ee(Level::Ground, Level::Ground));
        let sigma_z = &exciton_projector - &ground_projector;

        let (upper_projector, upper_lowering) = match space.levels() {
            EmitterLevels::Two => (None, None),
            EmitterLevels::Three => (
                Some(lift_e(&ee(Level::Upper, Level::Upper))),
                Some(lift_e(&ee(Level::Exciton, Level::Upper))),
            ),
        };

        Self {
            space,
            identity: Operator::identity(space.total_dim()),
            sigma_z,
            sigma_minus,
            sigma_plus,
            a,
            a_dag,
            number,
            exciton_projector,
            ground_projector,
            upper_projector,
            upper_lowering,
        }
    }
}

/// Builds the operator set for `(emitter_levels, fock_cutoff)`.
pub fn build_system_operators<T: Real>(
    emitter_levels: usize,
    fock_cutoff: usize,
) -> Result<SystemOperators<T>, HilbertError> {
    let space = SystemSpace::new(EmitterLevels::from_count(emitter_levels)?, fock_cutoff)?;
    Ok(SystemOperators::new(space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::eigen::hermitian_eigenvalues;
    use crate::scalar::Cplx;

    type Ops = SystemOperators<f64>;

    #[test]
    fn rejects_zero_cutoff() {
        assert_eq!(
            build_system_operators::<f64>(2, 0).unwrap_err(),
            HilbertError::InvalidCutoff(0)
        );
        assert!(matches!(
            build_system_operators::<f64>(4, 2),
            Err(HilbertError::InvalidLevels(4))
        ));
    }

    #[test]
    fn dims() {
        assert_eq!(SystemSpace::three_level(2).unwrap().total_dim(), 9);
        assert_eq!(SystemSpace::two_level(3).unwrap().total_dim(), 8);
    }

    #[test]
    fn number_operator_single_photon() {
        let ops = Ops::new(SystemSpace::two_level(1).unwrap());
        let mut ev = hermitian_eigenvalues(&ops.number);
        ev.iter_mut().for_each(|e| *e = e.round());
        assert_eq!(ev, vec![0.0, 0.0, 1.0, 1.0]);
        // diagonal 0..N within each emitter sector
        let diag: Vec<f64> = (0..4).map(|i| ops.number[(i, i)].re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn truncated_commutator_against_hand_built() {
        // [a, a†] on a 4-level ladder is diag(1, 1, 1, -3)
        let ops = Ops::new(SystemSpace::two_level(3).unwrap());
        let comm = ops.a.commutator(&ops.a_dag);
        let block = [1.0, 1.0, 1.0, -3.0];
        let expected: Vec<f64> = block.iter().chain(block.iter()).copied().collect();
        assert!(comm.max_abs_diff(&Operator::diagonal(&expected)) < 1e-12);

        // hand-built 8×8 annihilation operator
        let s = [1.0_f64, 2.0_f64.sqrt(), 3.0_f64.sqrt()];
        let mut hand = Operator::<f64>::zeros(8);
        for sector in 0..2 {
            for n in 1..4 {
                hand[(sector * 4 + n - 1, sector * 4 + n)] = Cplx::new(s[n - 1], 0.0);
            }
        }
        assert!(ops.a.max_abs_diff(&hand) < 1e-15);
    }

    #[test]
    fn emitter_algebra() {
        let ops = Ops::new(SystemSpace::two_level(2).unwrap());
        let pp = &ops.sigma_plus * &ops.sigma_minus;
        assert!(pp.max_abs_diff(&ops.exciton_projector) < 1e-15);
        let sum = ops.sigma_plus.anticommutator(&ops.sigma_minus);
        assert!(sum.max_abs_diff(&ops.identity) < 1e-15);
        let n_diag: Vec<f64> = (0..6).map(|i| ops.number[(i, i)].re).collect();
        for (got, want) in n_diag.iter().zip([0.0, 1.0, 2.0, 0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn three_level_channels() {
        let ops = Ops::new(SystemSpace::three_level(1).unwrap());
        let low = ops.upper_lowering.as_ref().unwrap();
        let proj = ops.upper_projector.as_ref().unwrap();
        assert!((&low.adjoint() * low).max_abs_diff(proj) < 1e-15);
        // σ₊σ₋ + σ₋σ₊ is the identity only on the {0, X} sector
        let sum = ops.sigma_plus.anticommutator(&ops.sigma_minus);
        assert!((&sum + proj).max_abs_diff(&ops.identity) < 1e-15);
    }
}
