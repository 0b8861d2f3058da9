//! Physical parameters of the oscillator, its mass and potential profiles,
//! the Hamiltonian and the Liénard-II coefficients.
//!
//! The mass `m(x) = a/x` and the potential `V(x) = a(2ω²x + 1/8x)` are both
//! singular at the origin, so every model lives on one half-line. The branch
//! is coupled to the sign of `a`: `a > 0` selects `x > 0`, `a < 0` selects
//! `x < 0`. Either way the mass is positive on the domain.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Evaluation requests with `|x|` below this are rejected.
pub const DEFAULT_WALL: f64 = 1e-12;

/// Tolerance on `α + β + γ = −1` for the full-triple constructor.
pub const AMBIGUITY_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("omega must be finite and > 0, got {0}")]
    InvalidOmega(f64),
    #[error("mass scale a must be finite and nonzero, got {0}")]
    InvalidMassScale(f64),
    #[error("sign of a = {a} is incompatible with the {branch} branch")]
    BranchMismatch { a: f64, branch: Branch },
    #[error("x = {x} is outside the {branch} branch domain (wall {wall})")]
    Domain { x: f64, branch: Branch, wall: f64 },
    #[error("ambiguity parameters must satisfy alpha + beta + gamma = -1 (sum = {sum})")]
    AmbiguityConstraint { sum: f64 },
    #[error("ambiguity parameter is not finite")]
    NonFiniteAmbiguity,
    #[error("wall must be finite and > 0, got {0}")]
    InvalidWall(f64),
}

/// Which half of the real line the model lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    /// `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Branch {
        match self {
            Branch::Positive => Branch::Negative,
            Branch::Negative => Branch::Positive,
        }
    }

    /// The branch on which `m(x) = a/x` is positive.
    pub fn for_mass_scale(a: f64) -> Branch {
        if a > 0.0 {
            Branch::Positive
        } else {
            Branch::Negative
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Positive => f.write_str("positive"),
            Branch::Negative => f.write_str("negative"),
        }
    }
}

/// The physical triple `(ω, a, branch)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    omega: f64,
    a: f64,
    branch: Branch,
    #[serde(skip)]
    wall: f64,
}

impl ModelParams {
    /// Builds parameters with the branch implied by the sign of `a`.
    pub fn new(omega: f64, a: f64) -> Result<Self, ModelError> {
        Self::with_branch(omega, a, Branch::for_mass_scale(a))
    }

    pub fn with_branch(omega: f64, a: f64, branch: Branch) -> Result<Self, ModelError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(ModelError::InvalidOmega(omega));
        }
        if !a.is_finite() || a == 0.0 {
            return Err(ModelError::InvalidMassScale(a));
        }
        if Branch::for_mass_scale(a) != branch {
            return Err(ModelError::BranchMismatch { a, branch });
        }
        Ok(Self {
            omega,
            a,
            branch,
            wall: DEFAULT_WALL,
        })
    }

    /// Replaces the singular-point guard width.
    pub fn with_wall(mut self, wall: f64) -> Result<Self, ModelError> {
        if !(wall.is_finite() && wall > 0.0) {
            return Err(ModelError::InvalidWall(wall));
        }
        self.wall = wall;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn wall(&self) -> f64 {
        self.wall
    }

    /// `a → −a` together with the branch flip `x → −x`.
    pub fn mirrored(&self) -> ModelParams {
        ModelParams {
            omega: self.omega,
            a: -self.a,
            branch: self.branch.flipped(),
            wall: self.wall,
        }
    }

    /// Is `x` strictly inside the branch, at least `wall` away from the origin?
    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && self.branch.sign() * x >= self.wall
    }

    pub fn check_domain(&self, x: f64) -> Result<(), ModelError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(ModelError::Domain {
                x,
                branch: self.branch,
                wall: self.wall,
            })
        }
    }

    /// Location of the potential minimum, `±1/(4ω)`.
    pub fn potential_minimizer(&self) -> f64 {
        self.branch.sign() / (4.0 * self.omega)
    }

    /// Minimum value of the potential, `|a|ω` (equal to `aω` for `a > 0`).
    pub fn potential_minimum(&self) -> f64 {
        self.a.abs() * self.omega
    }
}

/// Von Roos ordering exponents `(α, β, γ)` with `α + β + γ = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbiguityTriple {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl AmbiguityTriple {
    /// Derives `γ = −1 − α − β`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(ModelError::NonFiniteAmbiguity);
        }
        Ok(Self {
            alpha,
            beta,
            gamma: -1.0 - alpha - beta,
        })
    }

    /// Accepts an explicit triple, rejecting sums further than `1e-12` from −1.
    pub fn from_full(alpha: f64, beta: f64, gamma: f64) -> Result<Self, ModelError> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(ModelError::NonFiniteAmbiguity);
        }
        let sum = alpha + beta + gamma;
        if (sum + 1.0).abs() > AMBIGUITY_SUM_TOL {
            return Err(ModelError::AmbiguityConstraint { sum });
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// The symmetric ordering `α = γ = −1/4`, `β = −1/2`.
    pub fn symmetric() -> Self {
        Self {
            alpha: -0.25,
            beta: -0.5,
            gamma: -0.25,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ε = 4αγ`.
    pub fn epsilon(&self) -> f64 {
        epsilon_from_ambiguity(self)
    }

    /// Coefficient of `ψ/x` in the x-space Schrödinger equation, `α(α+β+1)`.
    pub fn centrifugal_coefficient(&self) -> f64 {
        self.alpha * (self.alpha + self.beta + 1.0)
    }
}

/// Position and velocity on one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub x: f64,
    pub xdot: f64,
}

impl ClassicalState {
    pub fn new(x: f64, xdot: f64) -> Self {
        Self { x, xdot }
    }
}

pub fn mass_profile(x: f64, params: &ModelParams) -> Result<f64, ModelError> {
    params.check_domain(x)?;
    Ok(params.a / x)
}

pub fn potential(x: f64, params: &ModelParams) -> Result<f64, ModelError> {
    params.check_domain(x)?;
    let w = params.omega;
    Ok(params.a * (2.0 * w * w * x + 1.0 / (8.0 * x)))
}

/// `dV/dx = a(2ω² − 1/8x²)`.
pub fn potential_derivative(x: f64, params: &ModelParams) -> Result<f64, ModelError> {
    params.check_domain(x)?;
    let w = params.omega;
    Ok(params.a * (2.0 * w * w - 1.0 / (8.0 * x * x)))
}

/// Canonical momentum `p = aẋ/x`.
pub fn momentum(state: &ClassicalState, params: &ModelParams) -> Result<f64, ModelError> {
    params.check_domain(state.x)?;
    Ok(params.a * state.xdot / state.x)
}

/// `H = xp²/2a + V(x)`.
pub fn hamiltonian(x: f64, p: f64, params: &ModelParams) -> Result<f64, ModelError> {
    let v = potential(x, params)?;
    Ok(x * p * p / (2.0 * params.a) + v)
}

/// Hamiltonian evaluated from position and velocity through `p = aẋ/x`.
pub fn hamiltonian_from_velocity(
    state: &ClassicalState,
    params: &ModelParams,
) -> Result<f64, ModelError> {
    let p = momentum(state, params)?;
    hamiltonian(state.x, p, params)
}

/// Coefficients `(f, g)` of `ẍ + f(x)ẋ² + g(x) = 0`.
pub fn lienard_coefficients(x: f64, params: &ModelParams) -> Result<(f64, f64), ModelError> {
    params.check_domain(x)?;
    let w = params.omega;
    Ok((-0.5 / x, 2.0 * w * w * x - 1.0 / (8.0 * x)))
}

/// `(m′/2m, V′/m)` built from the mass and potential profiles.
pub fn lienard_from_profiles(x: f64, params: &ModelParams) -> Result<(f64, f64), ModelError> {
    let m = mass_profile(x, params)?;
    let dm = -params.a / (x * x);
    let dv = potential_derivative(x, params)?;
    Ok((dm / (2.0 * m), dv / m))
}

pub fn epsilon_from_ambiguity(t: &AmbiguityTriple) -> f64 {
    4.0 * t.alpha * t.gamma
}

/// `a² + ε ≥ 1/4`.
pub fn bound_state_condition(a: f64, epsilon: f64) -> bool {
    a * a + epsilon >= 0.25
}
