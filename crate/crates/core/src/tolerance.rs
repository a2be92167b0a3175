use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the sampler, the PPT test and the reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalues above `-psd` count as non-negative; above `+psd` as nonzero.
    pub psd: f64,
    /// A state is PPT when the smallest partial-transpose eigenvalue is `>= -ppt`.
    pub ppt: f64,
    /// A Wishart draw is rank deficient when `λ_min < rankdef · λ_max`.
    pub rankdef: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        psd: 1e-10,
        ppt: 1e-10,
        rankdef: 1e-13,
    };

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("psd", self.psd), ("ppt", self.ppt), ("rankdef", self.rankdef)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("tolerance `{name}` must be finite and non-negative, got {v}"));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
