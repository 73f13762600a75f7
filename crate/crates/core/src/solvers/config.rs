use thiserror::Error;

/// How the offline approximation factor ρ is instantiated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoMode {
    /// ρ = H(n') for a sub-instance with n' elements (the greedy guarantee).
    Greedy,
    /// A fixed ρ for every sub-instance.
    Custom(f64),
}

impl RhoMode {
    pub fn rho(self, size: usize) -> f64 {
        match self {
            RhoMode::Greedy => harmonic(size).max(1.0),
            RhoMode::Custom(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Query/approximation trade-off for the small-k algorithm.
    pub alpha: f64,
    pub eps: f64,
    /// Constant in the element-sample size.
    pub c_elt: f64,
    /// Constant in the set-sampling size test.
    pub c_set: f64,
    pub rho_mode: RhoMode,
    pub seed: u64,
    /// Multiplier on the feasibility-test threshold `ℓ (n/ℓ)^{1/(α-1)}`.
    pub feasibility_slack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha: 2.0,
            eps: 0.5,
            c_elt: 2.0,
            c_set: 2.0,
            rho_mode: RhoMode::Greedy,
            seed: 0,
            feasibility_slack: 1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("invalid solver configuration: {0}")]
pub struct ConfigError(pub String);

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.alpha > 1.0) {
            return Err(ConfigError(format!("alpha must exceed 1, got {}", self.alpha)));
        }
        if !(self.eps > 0.0) {
            return Err(ConfigError(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.c_elt >= 1.0) || !(self.c_set >= 1.0) {
            return Err(ConfigError("c_elt and c_set must be at least 1".into()));
        }
        if let RhoMode::Custom(r) = self.rho_mode {
            if !(r >= 1.0) {
                return Err(ConfigError(format!("custom rho must be at least 1, got {r}")));
            }
        }
        if !(self.feasibility_slack > 0.0) {
            return Err(ConfigError("feasibility_slack must be positive".into()));
        }
        Ok(())
    }
}

/// H(n) = Σ_{i=1}^{n} 1/i, with H(0) = 0.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// Natural log clamped below at 1, for formulas that would degenerate on
/// one- or two-element inputs.
pub(crate) fn ln_floor1(x: usize) -> f64 {
    (x as f64).ln().max(1.0)
}

/// Integer guesses covering `[lo, hi]` in ascending order, each at most a
/// `(1 + step)` factor above the previous (rounded up, always advancing),
/// always ending at `hi`.
pub fn guess_grid(lo: usize, hi: usize, step: f64) -> Vec<usize> {
    let lo = lo.max(1);
    if hi < lo {
        return Vec::new();
    }
    let mut out = vec![lo];
    let mut v = lo;
    while v < hi {
        let next = ((v as f64) * (1.0 + step)).ceil() as usize;
        v = next.max(v + 1).min(hi);
        out.push(v);
    }
    out
}
