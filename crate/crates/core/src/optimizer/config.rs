use crate::error::{Error, Result};

/// ASGF hyperparameters. `Default` gives the standard benchmark settings with
/// `sigma0 = 1`; use [`AsgfConfig::with_sigma0`] or [`sigma0_for_box`] to
/// scale the initial smoothing radius to the problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "harness", serde(default, deny_unknown_fields))]
pub struct AsgfConfig {
    pub sigma0: f64,
    /// Multiplicative smoothing decay.
    pub gamma_sigma: f64,
    /// Quadrature points along each auxiliary direction (odd, ≥ 3).
    pub aux_point_count: usize,
    pub a0: f64,
    pub b0: f64,
    pub a_minus: f64,
    pub a_plus: f64,
    pub b_minus: f64,
    pub b_plus: f64,
    /// Memory of the Lipschitz running average.
    pub gamma_l: f64,
    /// Starting value of the Lipschitz running average. `None` adopts the
    /// first main-direction estimate as is.
    pub lipschitz_prior: Option<f64>,
    pub reset_budget: usize,
    /// Reset when `sigma < reset_factor * sigma0`.
    pub reset_factor: f64,
    /// Convergence threshold for the adaptive main-direction quadrature.
    pub eps_m: f64,
    /// Stop once a step moves less than this.
    pub eps_x: f64,
    pub max_iterations: usize,
    pub max_main_points: usize,
    pub rng_seed: u64,
    /// Evaluate the directions of one step on the rayon pool.
    pub parallel: bool,
}

impl Default for AsgfConfig {
    fn default() -> Self {
        AsgfConfig {
            sigma0: 1.0,
            gamma_sigma: 0.9,
            aux_point_count: 5,
            a0: 0.1,
            b0: 0.9,
            a_minus: 0.95,
            a_plus: 1.02,
            b_minus: 0.98,
            b_plus: 1.01,
            gamma_l: 0.9,
            lipschitz_prior: Some(1.0),
            reset_budget: 2,
            reset_factor: 0.01,
            eps_m: 0.1,
            eps_x: 1e-6,
            max_iterations: 10_000,
            max_main_points: 41,
            rng_seed: 0,
            parallel: false,
        }
    }
}

impl AsgfConfig {
    pub fn with_sigma0(sigma0: f64) -> Self {
        AsgfConfig {
            sigma0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn open_unit(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must lie in (0, 1), got {v}")))
            }
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::invalid("sigma0", format!("must be positive, got {}", self.sigma0)));
        }
        open_unit("gamma_sigma", self.gamma_sigma)?;
        open_unit("a0", self.a0)?;
        open_unit("b0", self.b0)?;
        open_unit("reset_factor", self.reset_factor)?;
        if self.a0 >= self.b0 {
            return Err(Error::invalid("a0", "must be below b0"));
        }
        if !(self.a_minus > 0.0 && self.a_minus < 1.0 && self.a_plus > 1.0) {
            return Err(Error::invalid("a_minus/a_plus", "need 0 < a_minus < 1 < a_plus"));
        }
        if !(self.b_minus > 0.0 && self.b_minus < 1.0 && self.b_plus > 1.0) {
            return Err(Error::invalid("b_minus/b_plus", "need 0 < b_minus < 1 < b_plus"));
        }
        if !(0.0..1.0).contains(&self.gamma_l) {
            return Err(Error::invalid("gamma_l", format!("must lie in [0, 1), got {}", self.gamma_l)));
        }
        if let Some(prior) = self.lipschitz_prior {
            if !(prior > 0.0 && prior.is_finite()) {
                return Err(Error::invalid("lipschitz_prior", format!("must be positive, got {prior}")));
            }
        }
        if self.aux_point_count < 3 || self.aux_point_count.is_multiple_of(2) {
            return Err(Error::invalid("aux_point_count", "must be odd and at least 3"));
        }
        if self.max_main_points < 5 || self.max_main_points.is_multiple_of(2) {
            return Err(Error::invalid("max_main_points", "must be odd and at least 5"));
        }
        if self.max_main_points > crate::quadrature::DEFAULT_MAX_POINTS {
            return Err(Error::invalid("max_main_points", "exceeds the quadrature cap"));
        }
        if !(self.eps_m > 0.0) || !(self.eps_x > 0.0) {
            return Err(Error::invalid("eps_m/eps_x", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be positive"));
        }
        Ok(())
    }
}

/// Initial smoothing radius: one tenth of the Euclidean diameter of the box.
pub fn sigma0_for_box(bounds: &[(f64, f64)]) -> f64 {
    bounds.iter().map(|(lo, hi)| (hi - lo).powi(2)).sum::<f64>().sqrt() / 10.0
}
