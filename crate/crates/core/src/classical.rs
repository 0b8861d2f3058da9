//! Classical dynamics of `ẍ − ẋ²/2x + 2ω²x − 1/8x = 0`.
//!
//! Numerical integration with dense output, the closed-form orbit, period
//! measurement, fixed points, the nonlocal linearization witness and the
//! `a → −a, x → −x` mirror map.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::model::{ClassicalState, ModelError, ModelParams};
use crate::ode::{self, DenseOutput, Dop853Options, OdeError, OdeSystem};
use crate::specfun::{self, QuadratureRule, SpecfunError};

pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-3;

/// Orbits with `|E/aω| − 1` below this are treated as sitting at the fixed point.
pub const DEGENERATE_AMPLITUDE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("tolerance {0} outside [1e-13, 1e-3]")]
    InvalidTolerance(f64),
    #[error("integration span must be finite and positive, got t_end = {0}")]
    InvalidSpan(f64),
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("trajectory reached the singular wall near x = 0 at t = {t}")]
    SingularWallHit { t: f64 },
    #[error("integrator exceeded its step budget")]
    StepBudgetExhausted,
    #[error("|E/(a omega)| = {ratio} must exceed 1 for a bounded orbit")]
    AmplitudeDomain { ratio: f64 },
    #[error("|E/(a omega)| - 1 = {excess:e} is below the degenerate-amplitude threshold")]
    DegenerateAmplitude { excess: f64 },
    #[error("trajectory contains {maxima} maxima of x(t); at least 3 are needed")]
    InsufficientSpan { maxima: usize },
    #[error("trajectory too short for the witness stencil")]
    WitnessSpan,
    #[error(transparent)]
    Quadrature(#[from] SpecfunError),
}

/// `(ẋ, ÿ)` of the planar system `ẋ = y`, `ẏ = y²/2x − 2ω²x + 1/8x`.
pub fn rhs(state: &ClassicalState, params: &ModelParams) -> Result<(f64, f64), ModelError> {
    params.check_domain(state.x)?;
    let (x, y) = (state.x, state.xdot);
    let w = params.omega();
    Ok((y, y * y / (2.0 * x) - 2.0 * w * w * x + 1.0 / (8.0 * x)))
}

/// Energy from position and velocity: `E = a(ẋ²/2 + 2ω²x² + 1/8)/x`.
pub fn energy_from_state(state: &ClassicalState, params: &ModelParams) -> Result<f64, ModelError> {
    params.check_domain(state.x)?;
    let (x, v) = (state.x, state.xdot);
    let w = params.omega();
    Ok(params.a() * (0.5 * v * v + 2.0 * w * w * x * x + 0.125) / x)
}

struct Planar<'a> {
    params: &'a ModelParams,
    energy: f64,
}

impl OdeSystem<2> for Planar<'_> {
    type Error = ModelError;

    fn rhs(&self, _t: f64, y: &[f64; 2]) -> Result<[f64; 2], ModelError> {
        let (dx, dv) = rhs(&ClassicalState::new(y[0], y[1]), self.params)?;
        Ok([dx, dv])
    }

    /// Gradient projection onto `E(x, ẋ) = E₀`.
    fn project(&self, y: &mut [f64; 2]) {
        let a = self.params.a();
        let w = self.params.omega();
        for _ in 0..3 {
            let (x, v) = (y[0], y[1]);
            let Ok(e) = energy_from_state(&ClassicalState::new(x, v), self.params) else {
                return;
            };
            let de = e - self.energy;
            if de.abs() <= 2.0 * f64::EPSILON * self.energy.abs() {
                return;
            }
            let gx = a * (2.0 * w * w - (0.5 * v * v + 0.125) / (x * x));
            let gv = a * v / x;
            let g2 = gx * gx + gv * gv;
            if g2 == 0.0 {
                return;
            }
            let next = [x - de * gx / g2, v - de * gv / g2];
            if !self.params.contains(next[0]) {
                return;
            }
            *y = next;
        }
    }
}

/// Time-sampled classical solution with its dense interpolant.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<ClassicalState>,
    energies: Vec<f64>,
    params: ModelParams,
    tol: f64,
    dense: DenseOutput<2>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[ClassicalState] {
        &self.states
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Integrator tolerance the trajectory was produced with.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn dense(&self) -> &DenseOutput<2> {
        &self.dense
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    /// Interpolated state, `None` outside the integrated span.
    pub fn state_at(&self, t: f64) -> Option<ClassicalState> {
        if self.dense.segments().is_empty() {
            // Zero-length span.
            return (t == self.times[0]).then_some(self.states[0]);
        }
        self.dense.eval(t).map(|y| ClassicalState::new(y[0], y[1]))
    }

    /// `max |H(t) − H(0)| / |H(0)|` over the samples.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energies[0];
        self.energies
            .iter()
            .map(|e| (e - e0).abs() / e0.abs())
            .fold(0.0, f64::max)
    }

    /// The same solution sampled on `n ≥ 2` uniformly spaced times.
    pub fn resampled(&self, n: usize) -> Result<Trajectory, ClassicalError> {
        let n = n.max(2);
        let (t0, t1) = (self.t_start(), self.t_end());
        let mut times = Vec::with_capacity(n);
        let mut states = Vec::with_capacity(n);
        let mut energies = Vec::with_capacity(n);
        for i in 0..n {
            let t = if i + 1 == n {
                t1
            } else {
                t0 + (t1 - t0) * i as f64 / (n - 1) as f64
            };
            let s = self.state_at(t).ok_or(ClassicalError::WitnessSpan)?;
            energies.push(energy_from_state(&s, &self.params)?);
            times.push(t);
            states.push(s);
        }
        Ok(Trajectory {
            times,
            states,
            energies,
            params: self.params,
            tol: self.tol,
            dense: self.dense.clone(),
        })
    }
}

/// Integrates the equation of motion from `t = 0` to `t_end` with an
/// adaptive DOP853 scheme, `rtol = atol = tol`. Each accepted step is
/// projected back onto the initial energy level set, so the recorded
/// energies stay at the initial value up to rounding while positions carry
/// the usual integrator error.
pub fn integrate(
    initial: ClassicalState,
    t_end: f64,
    tol: f64,
    params: &ModelParams,
) -> Result<Trajectory, ClassicalError> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(ClassicalError::InvalidTolerance(tol));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(ClassicalError::InvalidSpan(t_end));
    }
    params.check_domain(initial.x)?;
    let opts = Dop853Options {
        rtol: tol,
        atol: tol,
        ..Default::default()
    };
    let system = Planar {
        params,
        energy: energy_from_state(&initial, params)?,
    };
    let sol =
        ode::dop853(&system, 0.0, [initial.x, initial.xdot], t_end, &opts).map_err(
            |e| match e {
                OdeError::Rhs {
                    t,
                    source: ModelError::Domain { .. },
                } => ClassicalError::SingularWallHit { t },
                OdeError::Rhs { source, .. } => ClassicalError::Model(source),
                OdeError::StepSizeUnderflow { t, .. } => ClassicalError::StepSizeUnderflow { t },
                OdeError::MaxSteps(_) => ClassicalError::StepBudgetExhausted,
                OdeError::InvalidInput => ClassicalError::InvalidSpan(t_end),
            },
        )?;
    let states: Vec<ClassicalState> = sol
        .states
        .iter()
        .map(|y| ClassicalState::new(y[0], y[1]))
        .collect();
    let energies = states
        .iter()
        .map(|s| energy_from_state(s, params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Trajectory {
        times: sol.times,
        states,
        energies,
        params: *params,
        tol,
        dense: sol.dense,
    })
}

/// Closed-form bounded orbit labelled by energy and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitSolution {
    energy: f64,
    theta0: f64,
    params: ModelParams,
}

impl OrbitSolution {
    pub fn new(energy: f64, theta0: f64, params: ModelParams) -> Result<Self, ClassicalError> {
        let ratio = energy / (params.a() * params.omega());
        if !(ratio.is_finite() && ratio.abs() > 1.0) || !theta0.is_finite() {
            return Err(ClassicalError::AmplitudeDomain { ratio });
        }
        Ok(Self {
            energy,
            theta0,
            params,
        })
    }

    /// The orbit through `state` at `t = 0`.
    pub fn from_state(
        state: &ClassicalState,
        params: &ModelParams,
    ) -> Result<Self, ClassicalError> {
        let energy = energy_from_state(state, params)?;
        let probe = Self::new(energy, 0.0, *params)?;
        let (c, amp) = (probe.center(), probe.amplitude_factor());
        let w = params.omega();
        let sin = (state.x / c - 1.0) / amp;
        let cos = state.xdot / (2.0 * w * c * amp);
        Self::new(energy, sin.atan2(cos), *params)
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `E/(4ω²a)`, the midpoint of the oscillation.
    pub fn center(&self) -> f64 {
        let w = self.params.omega();
        self.energy / (4.0 * w * w * self.params.a())
    }

    /// `√(1 − (aω/E)²)`.
    pub fn amplitude_factor(&self) -> f64 {
        let r = self.params.a() * self.params.omega() / self.energy;
        (1.0 - r * r).sqrt()
    }

    /// True when `|E/aω| − 1 < 1e-6`: the orbit is indistinguishable from
    /// the fixed point at double precision.
    pub fn is_degenerate(&self) -> bool {
        (self.energy / (self.params.a() * self.params.omega())).abs() - 1.0 < DEGENERATE_AMPLITUDE
    }

    pub fn position(&self, t: f64) -> f64 {
        let w = self.params.omega();
        self.center() * (1.0 + self.amplitude_factor() * (2.0 * w * t + self.theta0).sin())
    }

    pub fn velocity(&self, t: f64) -> f64 {
        let w = self.params.omega();
        self.center() * self.amplitude_factor() * 2.0 * w * (2.0 * w * t + self.theta0).cos()
    }

    pub fn state(&self, t: f64) -> ClassicalState {
        ClassicalState::new(self.position(t), self.velocity(t))
    }

    /// Turning point nearest the origin, `(E/4ω²a)(1 − √(1 − (aω/E)²))`.
    pub fn inner_turning_point(&self) -> f64 {
        self.center() * (1.0 - self.amplitude_factor())
    }

    pub fn outer_turning_point(&self) -> f64 {
        self.center() * (1.0 + self.amplitude_factor())
    }

    /// `π/ω`, independent of the energy.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI / self.params.omega()
    }
}

/// Position on the closed-form orbit. At `E = aω` exactly the orbit
/// collapses onto the fixed point `1/(4ω)`; that threshold is rejected by
/// [`OrbitSolution::new`].
pub fn analytic_orbit(sol: &OrbitSolution, t: f64) -> f64 {
    sol.position(t)
}

fn brent_root<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1 * xm.signum()
        };
        fb = f(b);
    }
    b
}

/// Times at which `ẋ` crosses zero from above, i.e. maxima of `x(t)` (or of
/// `|x(t)|`'s mirror on the negative branch), refined to `1e-12` in `t`.
pub fn velocity_downcrossings(traj: &Trajectory) -> Vec<f64> {
    const SUBDIVISIONS: usize = 8;
    let sign = traj.params.branch().sign();
    let mut out = Vec::new();
    for seg in traj.dense.segments() {
        let v = |t: f64| sign * seg.eval(t)[1];
        let mut ta = seg.t0;
        let mut va = v(ta);
        for k in 1..=SUBDIVISIONS {
            let tb = seg.t0 + seg.h * k as f64 / SUBDIVISIONS as f64;
            let vb = v(tb);
            if va > 0.0 && vb <= 0.0 {
                let root = brent_root(v, ta, tb, 1e-12);
                if out.last().is_none_or(|&last: &f64| root - last > 1e-9) {
                    out.push(root);
                }
            }
            ta = tb;
            va = vb;
        }
    }
    out
}

/// Mean oscillation period from successive maxima of `x(t)`.
pub fn measure_period(traj: &Trajectory) -> Result<f64, ClassicalError> {
    let maxima = velocity_downcrossings(traj);
    if maxima.len() < 3 {
        return Err(ClassicalError::InsufficientSpan {
            maxima: maxima.len(),
        });
    }
    Ok((maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64)
}

/// Integrates the orbit of energy `energy` (phase zero) over eight nominal
/// periods and measures its period.
pub fn period_at_energy(
    energy: f64,
    params: &ModelParams,
    tol: f64,
) -> Result<f64, ClassicalError> {
    let sol = OrbitSolution::new(energy, 0.0, *params)?;
    if sol.is_degenerate() {
        return Err(ClassicalError::DegenerateAmplitude {
            excess: (energy / (params.a() * params.omega())).abs() - 1.0,
        });
    }
    let span = 8.0 * std::f64::consts::PI / params.omega();
    let traj = integrate(sol.state(0.0), span, tol, params)?;
    measure_period(&traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Stability {
    /// Linearisation has eigenvalues `±iΩ`; the point is a potential minimum.
    StableCenter { frequency: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub state: ClassicalState,
    pub stability: Stability,
}

/// Jacobian of the planar vector field at `state`.
pub fn jacobian(state: &ClassicalState, params: &ModelParams) -> Result<[[f64; 2]; 2], ModelError> {
    params.check_domain(state.x)?;
    let (x, y) = (state.x, state.xdot);
    let w = params.omega();
    Ok([
        [0.0, 1.0],
        [
            -y * y / (2.0 * x * x) - 2.0 * w * w - 1.0 / (8.0 * x * x),
            y / x,
        ],
    ])
}

/// The single equilibrium `(±1/4ω, 0)` on the model's branch.
pub fn fixed_points(params: &ModelParams) -> Vec<FixedPoint> {
    let state = ClassicalState::new(params.potential_minimizer(), 0.0);
    let j = jacobian(&state, params).expect("minimizer lies inside the branch");
    // Trace is zero at y = 0, so the eigenvalues are ±√(j10).
    let frequency = (-j[1][0]).sqrt();
    vec![FixedPoint {
        state,
        stability: Stability::StableCenter { frequency },
    }]
}

/// Residual of `dF/dx + F² + F/2x = 0` at `x` for `F = 1/2x`.
pub fn f_equation_residual(x: f64) -> f64 {
    let f = 0.5 / x;
    let df = -0.5 / (x * x);
    df + f * f + f / (2.0 * x)
}

/// Residual of `dG/dx + 2FG = 0` for `G = i/4x`, `F = 1/2x`.
pub fn g_equation_residual(x: f64) -> Complex64 {
    let g = Complex64::new(0.0, 0.25 / x);
    let dg = Complex64::new(0.0, -0.25 / (x * x));
    dg + 2.0 * (0.5 / x) * g
}

/// Residual of `G² − F(2ω²x − 1/8x) + ω² = 0`.
pub fn frequency_equation_residual(x: f64, omega: f64) -> Complex64 {
    let g = Complex64::new(0.0, 0.25 / x);
    let f = 0.5 / x;
    g * g - f * (2.0 * omega * omega * x - 0.125 / x) + omega * omega
}

/// Output of [`linearization_witness`].
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub times: Vec<f64>,
    /// `|X(t)| = √|x(t)|`.
    pub magnitudes: Vec<f64>,
    /// `|Ẍ + ω²X|` per sample.
    pub residuals: Vec<f64>,
    /// `max |ω²X|` over the samples.
    pub scale: f64,
    /// Finite-difference step used for `Ẍ`.
    pub stencil_step: f64,
}

impl WitnessReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.max_residual() / self.scale
    }
}

// Sixth-order central stencil for the second derivative.
const D2_STENCIL: [f64; 7] = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
const D2_DENOM: f64 = 180.0;

/// Builds `X(t) = √|x| · exp(i∫₀ᵗ dt′/4x)` along the trajectory, i.e. the
/// nonlocal map with `F = 1/2x`, `G = i/4x`, and reports `|Ẍ + ω²X|`.
///
/// `Ẍ` comes from a sixth-order central difference on the dense output and
/// the phase integral from adaptive Gauss–Legendre quadrature. Samples
/// closer than three stencil steps to either end are skipped.
pub fn linearization_witness(traj: &Trajectory) -> Result<WitnessReport, ClassicalError> {
    let params = traj.params;
    let w = params.omega();
    let x_of = |t: f64| -> Result<f64, ClassicalError> {
        let s = traj.state_at(t).ok_or(ClassicalError::WitnessSpan)?;
        params.check_domain(s.x)?;
        Ok(s.x)
    };
    let x_min = traj
        .states
        .iter()
        .map(|s| s.x.abs())
        .fold(f64::INFINITY, f64::min);
    let local_rate = w.max(0.25 / x_min);
    let delta = 0.05 / local_rate;
    let (t0, t1) = (traj.t_start(), traj.t_end());
    if t1 - t0 <= 6.0 * delta {
        return Err(ClassicalError::WitnessSpan);
    }

    let rule = specfun::gauss_legendre(10)?;
    let phase_rate = |t: f64| 0.25 / traj.state_at(t).map_or(f64::NAN, |s| s.x);
    let integrate = |rule: &QuadratureRule, a: f64, b: f64| -> Result<f64, ClassicalError> {
        if a == b {
            return Ok(0.0);
        }
        let tol = 1e-14 * (b - a).abs() * local_rate;
        Ok(specfun::adaptive_integrate(rule, a, b, tol, phase_rate)?)
    };
    let x_complex = |t: f64, phase: f64| -> Result<Complex64, ClassicalError> {
        let x = x_of(t)?;
        Ok(Complex64::from_polar(x.abs().sqrt(), phase))
    };

    let mut report = WitnessReport {
        times: Vec::new(),
        magnitudes: Vec::new(),
        residuals: Vec::new(),
        scale: 0.0,
        stencil_step: delta,
    };
    let mut phase = 0.0;
    let mut t_prev = t0;
    for &t in &traj.times {
        phase += integrate(&rule, t_prev, t)?;
        t_prev = t;
        if t - 3.0 * delta < t0 || t + 3.0 * delta > t1 {
            continue;
        }
        let mut d2 = Complex64::new(0.0, 0.0);
        let mut centre = Complex64::new(0.0, 0.0);
        for (k, c) in D2_STENCIL.iter().enumerate() {
            let offset = k as f64 - 3.0;
            let tk = t + offset * delta;
            let dphi = if offset < 0.0 {
                -integrate(&rule, tk, t)?
            } else {
                integrate(&rule, t, tk)?
            };
            let xk = x_complex(tk, phase + dphi)?;
            if k == 3 {
                centre = xk;
            }
            d2 += *c * xk;
        }
        d2 /= D2_DENOM * delta * delta;
        let resid = (d2 + w * w * centre).norm();
        report.times.push(t);
        report.magnitudes.push(centre.norm());
        report.residuals.push(resid);
        report.scale = report.scale.max(w * w * centre.norm());
    }
    if report.times.is_empty() {
        return Err(ClassicalError::WitnessSpan);
    }
    Ok(report)
}

/// Applies `a → −a`, `x → −x` (hence `ẋ → −ẋ`). Energies are unchanged.
pub fn mirror_map(traj: &Trajectory) -> Trajectory {
    Trajectory {
        times: traj.times.clone(),
        states: traj
            .states
            .iter()
            .map(|s| ClassicalState::new(-s.x, -s.xdot))
            .collect(),
        energies: traj.energies.clone(),
        params: traj.params.mirrored(),
        tol: traj.tol,
        dense: traj.dense.map_linear(|_, v| -v),
    }
}
