use serde::{Deserialize, Serialize};

/// Numerical knobs shared by the geometry and support computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Numerics {
    /// Smallest imaginary part at which transforms are evaluated.
    pub y_floor: f64,
    /// `g` values above this are reported as `+inf`.
    pub divergence_cap: f64,
    /// Uniform grid size for the `V_t+` component scan.
    pub grid_n: usize,
    /// Chebyshev samples per component of `V_t+`.
    pub samples_n: usize,
    /// Absolute tolerance on the root `f_t`.
    pub root_tol: f64,
    /// Absolute bisection tolerance for component endpoints.
    pub edge_tol: f64,
    /// Largest admissible `|Im psi_t|`.
    pub psi_tol: f64,
    /// `|F_mu|` below this marks a density singularity.
    pub zero_f_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            y_floor: 1e-9,
            divergence_cap: 1e12,
            grid_n: 2048,
            samples_n: 257,
            root_tol: 1e-12,
            edge_tol: 1e-9,
            psi_tol: 1e-6,
            zero_f_tol: 1e-7,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> crate::Result<()> {
        use crate::Error::InvalidArgument;
        if !(self.y_floor > 0.0 && self.y_floor < 1e-2) {
            return Err(InvalidArgument(format!(
                "y_floor must lie in (0, 1e-2), got {}",
                self.y_floor
            )));
        }
        if self.grid_n < 64 {
            return Err(InvalidArgument(format!(
                "grid_n must be at least 64, got {}",
                self.grid_n
            )));
        }
        if self.samples_n < 9 {
            return Err(InvalidArgument(format!(
                "samples_n must be at least 9, got {}",
                self.samples_n
            )));
        }
        if !(self.root_tol > 0.0 && self.edge_tol > 0.0 && self.psi_tol > 0.0) {
            return Err(InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}
