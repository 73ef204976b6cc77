use nalgebra::DVector;
use num_complex::Complex64;

use crate::channels::{hermitian_eigenvalues, vec_col, CMatrix, DensityMatrix, STRUCTURAL_TOL};
use crate::error::{RbError, Result};

/// Tolerance on the eigenvalues of the measurement effect.
pub const EFFECT_TOL: f64 = 1e-10;

/// Prepared state `ρ` and measured effect `E` (`0 ≤ E ≤ 𝟙`).
#[derive(Clone, Debug)]
pub struct SpamSpec {
    rho: DensityMatrix,
    effect: CMatrix,
    readout: DVector<Complex64>,
}

impl SpamSpec {
    pub fn new(rho: DensityMatrix, effect: CMatrix) -> Result<Self> {
        let d = rho.dim();
        if effect.nrows() != d || effect.ncols() != d {
            return Err(RbError::Shape(format!(
                "effect is {}x{}, state has d={d}",
                effect.nrows(),
                effect.ncols()
            )));
        }
        if (&effect - effect.adjoint()).iter().any(|z| z.norm() > STRUCTURAL_TOL) {
            return Err(RbError::Contract("effect is not Hermitian".into()));
        }
        for ev in hermitian_eigenvalues(&effect).iter() {
            if *ev < -EFFECT_TOL || *ev > 1.0 + EFFECT_TOL {
                return Err(RbError::Contract(format!(
                    "effect eigenvalue {ev:.3e} outside [0, 1]"
                )));
            }
        }
        let readout = vec_col(&effect.transpose());
        Ok(SpamSpec {
            rho,
            effect,
            readout,
        })
    }

    /// `ρ = E = |0…0⟩⟨0…0|`.
    pub fn ideal(n: usize) -> Self {
        let d = 1usize << n;
        let rho = DensityMatrix::basis_state(d, 0).expect("d ≥ 1");
        SpamSpec::new(rho.clone(), rho.matrix().clone()).expect("projector is a valid effect")
    }

    /// `ρ = (1−a)|0⟩⟨0| + a𝟙/d` and `E = (1−b)|0⟩⟨0| + b𝟙/d`.
    pub fn depolarized(n: usize, prep_error: f64, meas_error: f64) -> Result<Self> {
        for (name, v) in [("prep_error", prep_error), ("meas_error", meas_error)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(RbError::Domain(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        let d = 1usize << n;
        let mix = |e: f64| {
            let mut m = CMatrix::identity(d, d) * Complex64::new(e / d as f64, 0.0);
            m[(0, 0)] += Complex64::new(1.0 - e, 0.0);
            m
        };
        SpamSpec::new(DensityMatrix::new(mix(prep_error))?, mix(meas_error))
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn effect(&self) -> &CMatrix {
        &self.effect
    }

    /// `vec(ρ)`.
    pub fn rho_vec(&self) -> DVector<Complex64> {
        vec_col(self.rho.matrix())
    }

    /// `Tr(E X)` given `vec(X)`.
    pub fn measure_vec(&self, x: &DVector<Complex64>) -> f64 {
        self.readout.dot(x).re
    }

    /// `Tr(E X)`.
    pub fn measure(&self, x: &CMatrix) -> f64 {
        (&self.effect * x).trace().re
    }

    /// `Tr(E)`.
    pub fn effect_trace(&self) -> f64 {
        self.effect.trace().re
    }
}
