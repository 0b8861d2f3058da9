//! Closed-form quantum solution.
//!
//! With von Roos ordering the position-dependent-mass Schrödinger equation
//! reduces, through `x = ηξ²` (`η = m₀/4a`) and `φ = √ξ ψ`, to a
//! constant-mass problem in the isotonic potential
//! `V_eff(ξ) = m₀ω²ξ²/2 + (a² + ε − 1/4)/(2m₀ξ²)`. Its levels are
//! `E_n = ω(2n + 1 + √(a² + ε))` and its eigenfunctions are
//! `φ_n = c_n ξ^ν e^{−m₀ωξ²/2} ₁F₁(−n; ν + 1/2; m₀ωξ²)` with
//! `ν = 1/2 + √(a² + ε)`.
//!
//! Normalisation uses the plain measure `dξ`. In the x coordinate the norm
//! is `2|η|` times the ξ norm.

use serde::Serialize;
use thiserror::Error;

use crate::model::{self, AmbiguityTriple, ModelError, ModelParams};
use crate::specfun::{self, SpecfunError};

/// Tolerance used to classify `a² + ε = 1/4` as the limit-circle boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// The Gaussian envelope `e^{−m₀ωξ²}` is below `e^{-92.1} ≈ 1e-40` past this.
const GAUSSIAN_TAIL: f64 = 92.1;

const NORM_PANELS: usize = 96;
const NORM_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("bound-state condition a^2 + epsilon >= 1/4 violated: a^2 + epsilon = {value}")]
    Unbound { value: f64 },
    #[error("auxiliary mass m0 must be finite and > 0, got {0}")]
    InvalidAuxiliaryMass(f64),
    #[error("coordinate {0} is outside the half-line")]
    Domain(f64),
    #[error(transparent)]
    Quadrature(#[from] SpecfunError),
    #[error("normalisation integral for level {n} is not positive and finite ({value})")]
    NormalizationFailure { n: usize, value: f64 },
}

/// Model, ordering and auxiliary mass for the quantum problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumConfig {
    params: ModelParams,
    ambiguity: AmbiguityTriple,
    m0: f64,
}

impl QuantumConfig {
    pub fn new(
        params: ModelParams,
        ambiguity: AmbiguityTriple,
        m0: f64,
    ) -> Result<Self, QuantumError> {
        if !(m0.is_finite() && m0 > 0.0) {
            return Err(QuantumError::InvalidAuxiliaryMass(m0));
        }
        let eps = ambiguity.epsilon();
        if !model::bound_state_condition(params.a(), eps) {
            return Err(QuantumError::Unbound {
                value: params.a() * params.a() + eps,
            });
        }
        Ok(Self {
            params,
            ambiguity,
            m0,
        })
    }

    /// `m₀ = 1`.
    pub fn with_unit_mass(
        params: ModelParams,
        ambiguity: AmbiguityTriple,
    ) -> Result<Self, QuantumError> {
        Self::new(params, ambiguity, 1.0)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn ambiguity(&self) -> &AmbiguityTriple {
        &self.ambiguity
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn omega(&self) -> f64 {
        self.params.omega()
    }

    pub fn epsilon(&self) -> f64 {
        self.ambiguity.epsilon()
    }

    /// `η = m₀/4a`; negative on the negative branch, so `x = ηξ²` lands there.
    pub fn eta(&self) -> f64 {
        self.m0 / (4.0 * self.params.a())
    }

    /// `a² + ε`.
    pub fn coupling(&self) -> f64 {
        self.params.a() * self.params.a() + self.epsilon()
    }

    /// Coefficient `a² + ε − 1/4` of the inverse-square term.
    pub fn centrifugal_strength(&self) -> f64 {
        self.coupling() - 0.25
    }

    /// `ν = 1/2 + √(a² + ε)`.
    pub fn nu(&self) -> f64 {
        0.5 + self.coupling().sqrt()
    }

    /// `m₀ω`, the Gaussian width parameter.
    pub fn width(&self) -> f64 {
        self.m0 * self.params.omega()
    }

    /// True on the limit-circle boundary `a² + ε = 1/4`, where the Dirichlet
    /// condition at the origin is a choice rather than forced.
    pub fn is_boundary_case(&self) -> bool {
        self.centrifugal_strength().abs() <= BOUNDARY_TOL
    }

    /// Same model and ordering with a different auxiliary mass.
    pub fn with_m0(&self, m0: f64) -> Result<Self, QuantumError> {
        Self::new(self.params, self.ambiguity, m0)
    }
}

pub fn effective_potential(xi: f64, cfg: &QuantumConfig) -> Result<f64, QuantumError> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(QuantumError::Domain(xi));
    }
    let w = cfg.omega();
    let m0 = cfg.m0;
    Ok(0.5 * m0 * w * w * xi * xi + cfg.centrifugal_strength() / (2.0 * m0 * xi * xi))
}

/// `ξ = √(x/η)`.
pub fn coordinate_map(x: f64, cfg: &QuantumConfig) -> Result<f64, QuantumError> {
    if !cfg.params.contains(x) {
        return Err(QuantumError::Domain(x));
    }
    Ok((x / cfg.eta()).sqrt())
}

/// `x = ηξ²`.
pub fn inverse_map(xi: f64, cfg: &QuantumConfig) -> Result<f64, QuantumError> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(QuantumError::Domain(xi));
    }
    Ok(cfg.eta() * xi * xi)
}

/// `E_n = ω(2n + 1 + √(a² + ε))`. Does not involve `m₀`.
pub fn analytic_energy(n: usize, cfg: &QuantumConfig) -> f64 {
    cfg.omega() * (2.0 * n as f64 + 1.0 + cfg.coupling().sqrt())
}

/// `E₀/(aω) = √(1 + ε/a²) + 1/a`.
pub fn ground_state_ratio(cfg: &QuantumConfig) -> f64 {
    let a = cfg.params.a();
    (1.0 + cfg.epsilon() / (a * a)).sqrt() + 1.0 / a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    Analytic,
    XiGrid,
    XGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub levels: Vec<Level>,
    pub method: SpectrumMethod,
    /// Grid descriptor, or `"closed-form"`.
    pub metadata: String,
    pub omega: f64,
}

impl SpectrumTable {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// `E_{n+1} − E_n`. Closed-form tables report the exact spacing `2ω`.
    pub fn gaps(&self) -> Vec<f64> {
        if self.method == SpectrumMethod::Analytic {
            return vec![2.0 * self.omega; self.levels.len().saturating_sub(1)];
        }
        self.levels
            .windows(2)
            .map(|p| p[1].energy - p[0].energy)
            .collect()
    }
}

/// The lowest `count` closed-form levels.
pub fn analytic_spectrum(cfg: &QuantumConfig, count: usize) -> SpectrumTable {
    let e0 = analytic_energy(0, cfg);
    let step = 2.0 * cfg.omega();
    SpectrumTable {
        levels: (0..count)
            .map(|n| Level {
                n,
                energy: e0 + step * n as f64,
            })
            .collect(),
        method: SpectrumMethod::Analytic,
        metadata: "closed-form".to_string(),
        omega: cfg.omega(),
    }
}

/// Upper integration limit in ξ for level `n`, past which
/// `ξ^{2ν} e^{−m₀ωξ²} [₁F₁]²` is negligible. With `t = m₀ωξ²` the limit is
/// `t_max = 92.1 + 3(2n + ν + 1/2)`: the `e^{−t}` envelope is below 1e−40
/// and the polynomial factor `t^{2n+ν−1/2}`, which peaks near
/// `t ≈ 2n + ν`, has decayed by more than `e^{-50}` from its maximum.
pub fn xi_max(n: usize, cfg: &QuantumConfig) -> f64 {
    let t_max = GAUSSIAN_TAIL + 3.0 * (2.0 * n as f64 + cfg.nu() + 0.5);
    (t_max / cfg.width()).sqrt()
}

/// `ξ^ν e^{−m₀ωξ²/2} ₁F₁(−n; ν + 1/2; m₀ωξ²)` without the constant.
fn phi_shape(n: usize, xi: f64, cfg: &QuantumConfig) -> f64 {
    let nu = cfg.nu();
    let z = cfg.width() * xi * xi;
    let poly = specfun::kummer_via_laguerre(n, nu + 0.5, z)
        .expect("nu + 1/2 >= 1 is a valid Kummer parameter");
    // Combine the power and Gaussian in log space to avoid overflow.
    (nu * xi.ln() - 0.5 * z).exp() * poly
}

/// Normalisation constant `c_n > 0` with `∫₀^∞ φ_n² dξ = 1`, computed by
/// composite Gauss–Legendre quadrature on `[0, xi_max]`.
pub fn normalize(n: usize, cfg: &QuantumConfig) -> Result<f64, QuantumError> {
    let rule = specfun::gauss_legendre(NORM_ORDER)?;
    let hi = xi_max(n, cfg);
    let breaks: Vec<f64> = (0..=NORM_PANELS)
        .map(|i| hi * i as f64 / NORM_PANELS as f64)
        .collect();
    let integral = rule.integrate_composite(&breaks, |xi| phi_shape(n, xi, cfg).powi(2));
    if !(integral.is_finite() && integral > 0.0) {
        return Err(QuantumError::NormalizationFailure { n, value: integral });
    }
    Ok(1.0 / integral.sqrt())
}

/// A normalised eigenfunction, evaluable in either coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Wavefunction {
    n: usize,
    nu: f64,
    c: f64,
    #[serde(skip)]
    cfg: QuantumConfig,
}

impl Wavefunction {
    pub fn new(n: usize, cfg: &QuantumConfig) -> Result<Self, QuantumError> {
        Ok(Self {
            n,
            nu: cfg.nu(),
            c: normalize(n, cfg)?,
            cfg: *cfg,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn normalization(&self) -> f64 {
        self.c
    }

    pub fn energy(&self) -> f64 {
        analytic_energy(self.n, &self.cfg)
    }

    pub fn config(&self) -> &QuantumConfig {
        &self.cfg
    }

    /// `φ_n(ξ)`.
    pub fn phi(&self, xi: f64) -> Result<f64, QuantumError> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(QuantumError::Domain(xi));
        }
        Ok(self.c * phi_shape(self.n, xi, &self.cfg))
    }

    /// `ψ_n(x) = φ_n(ξ(x))/√ξ(x)`.
    pub fn psi(&self, x: f64) -> Result<f64, QuantumError> {
        let xi = coordinate_map(x, &self.cfg)?;
        Ok(self.phi(xi)? / xi.sqrt())
    }
}

pub fn wavefunction_phi(n: usize, xi: f64, cfg: &QuantumConfig) -> Result<f64, QuantumError> {
    Wavefunction::new(n, cfg)?.phi(xi)
}

pub fn wavefunction_psi(n: usize, x: f64, cfg: &QuantumConfig) -> Result<f64, QuantumError> {
    Wavefunction::new(n, cfg)?.psi(x)
}

/// `⟨φ_i, φ_j⟩` for `i, j < count`, by the same quadrature as [`normalize`].
pub fn gram_matrix(cfg: &QuantumConfig, count: usize) -> Result<Vec<Vec<f64>>, QuantumError> {
    let wfs = (0..count)
        .map(|n| Wavefunction::new(n, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let rule = specfun::gauss_legendre(NORM_ORDER)?;
    let hi = xi_max(count.saturating_sub(1), cfg);
    let breaks: Vec<f64> = (0..=NORM_PANELS)
        .map(|i| hi * i as f64 / NORM_PANELS as f64)
        .collect();
    let mut g = vec![vec![0.0; count]; count];
    for i in 0..count {
        for j in i..count {
            let v = rule.integrate_composite(&breaks, |xi| {
                wfs[i].phi(xi).unwrap_or(0.0) * wfs[j].phi(xi).unwrap_or(0.0)
            });
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Strict sign changes in `values`, ignoring samples with
/// `|v| ≤ deadband · max|v|`.
pub fn count_sign_changes(values: &[f64], deadband: f64) -> usize {
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = deadband * peak;
    let mut last = 0.0_f64;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Interior zeros of `φ_n` counted on a fine grid over `(0, xi_max]`.
pub fn node_count(wf: &Wavefunction, samples: usize) -> Result<usize, QuantumError> {
    let hi = xi_max(wf.n, &wf.cfg);
    let values = (1..=samples)
        .map(|i| wf.phi(hi * i as f64 / samples as f64))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(count_sign_changes(&values, 1e-12))
}

/// Pointwise residual of a differential equation, normalised by the sum of
/// the magnitudes of its terms at the same point.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub points: Vec<f64>,
    pub residuals: Vec<f64>,
    pub scaled: Vec<f64>,
}

impl ResidualReport {
    pub fn max_scaled(&self) -> f64 {
        self.scaled.iter().copied().fold(0.0, f64::max)
    }
}

// Sixth-order central stencils.
const D1: [f64; 7] = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
const D1_DENOM: f64 = 60.0;
const D2: [f64; 7] = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
const D2_DENOM: f64 = 180.0;

fn stencil<F>(f: F, at: f64, h: f64) -> Result<(f64, f64, f64), QuantumError>
where
    F: Fn(f64) -> Result<f64, QuantumError>,
{
    let mut vals = [0.0; 7];
    for (k, v) in vals.iter_mut().enumerate() {
        *v = f(at + (k as f64 - 3.0) * h)?;
    }
    let d1 = D1.iter().zip(&vals).map(|(c, v)| c * v).sum::<f64>() / (D1_DENOM * h);
    let d2 = D2.iter().zip(&vals).map(|(c, v)| c * v).sum::<f64>() / (D2_DENOM * h * h);
    Ok((vals[3], d1, d2))
}

/// `−φ″/2m₀ + (V_eff − E_n)φ` at each `ξ`, derivatives by finite differences.
pub fn tise_xi_residual(wf: &Wavefunction, points: &[f64]) -> Result<ResidualReport, QuantumError> {
    let cfg = wf.cfg;
    let e = wf.energy();
    let mut rep = ResidualReport {
        points: points.to_vec(),
        residuals: Vec::with_capacity(points.len()),
        scaled: Vec::with_capacity(points.len()),
    };
    for &xi in points {
        let h = (xi / 50.0).min(0.01 / cfg.width().sqrt());
        let (phi, _, d2) = stencil(|s| wf.phi(s), xi, h)?;
        let v = effective_potential(xi, &cfg)?;
        let kinetic = -d2 / (2.0 * cfg.m0);
        let r = kinetic + (v - e) * phi;
        let size = kinetic.abs() + (v * phi).abs() + (e * phi).abs();
        rep.residuals.push(r.abs());
        rep.scaled.push(r.abs() / size);
    }
    Ok(rep)
}

/// Residual of the position-space equation
/// `xψ″ + ψ′ + α(α+β+1)ψ/x + 2a(E − V)ψ = 0` for the analytic `ψ_n`, `E_n`.
pub fn tise_xspace_residual(
    n: usize,
    cfg: &QuantumConfig,
    points: &[f64],
) -> Result<ResidualReport, QuantumError> {
    let wf = Wavefunction::new(n, cfg)?;
    let e = wf.energy();
    let a = cfg.params.a();
    let coeff = cfg.ambiguity.centrifugal_coefficient();
    let scale_len = 1.0 / (a.abs() * cfg.omega());
    let mut rep = ResidualReport {
        points: points.to_vec(),
        residuals: Vec::with_capacity(points.len()),
        scaled: Vec::with_capacity(points.len()),
    };
    for &x in points {
        let h = (x.abs() / 50.0).min(0.01 * scale_len);
        let (psi, d1, d2) = stencil(|s| wf.psi(s), x, h)?;
        let v = model::potential(x, &cfg.params)?;
        let terms = [x * d2, d1, coeff * psi / x, 2.0 * a * (e - v) * psi];
        let r: f64 = terms.iter().sum();
        let size: f64 = terms.iter().map(|t| t.abs()).sum();
        rep.residuals.push(r.abs());
        rep.scaled.push(r.abs() / size);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference() -> QuantumConfig {
        QuantumConfig::with_unit_mass(
            ModelParams::new(1.0, 1.0).unwrap(),
            AmbiguityTriple::new(-0.25, -0.5).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn config_validation() {
        let p = ModelParams::new(1.0, 0.1).unwrap();
        let r = QuantumConfig::with_unit_mass(p, AmbiguityTriple::new(0.0, -1.0).unwrap());
        assert!(matches!(r, Err(QuantumError::Unbound { .. })));
        let p = ModelParams::new(1.0, 0.5).unwrap();
        let cfg =
            QuantumConfig::with_unit_mass(p, AmbiguityTriple::new(0.0, -1.0).unwrap()).unwrap();
        assert!(cfg.is_boundary_case());
        assert_eq!(cfg.nu(), 1.0);
        assert!(!reference().is_boundary_case());
        assert!(QuantumConfig::new(*reference().params(), *reference().ambiguity(), 0.0).is_err());
        assert_eq!(reference().eta(), 0.25);
    }

    #[test]
    fn effective_potential_examples() {
        let cfg = reference();
        assert_relative_eq!(
            effective_potential(1.0, &cfg).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert!(effective_potential(0.0, &cfg).is_err());
        // minimiser ξ* = g^{1/4}/√(m₀ω) with g = a²+ε−1/4 = 1
        for &xi in &[0.98, 1.02] {
            assert!(effective_potential(xi, &cfg).unwrap() > 1.0);
        }
        let p = ModelParams::new(1.3, 0.5).unwrap();
        let harmonic =
            QuantumConfig::new(p, AmbiguityTriple::new(0.0, -1.0).unwrap(), 0.7).unwrap();
        for &xi in &[0.1, 1.0, 3.0] {
            assert_relative_eq!(
                effective_potential(xi, &harmonic).unwrap(),
                0.5 * 0.7 * 1.3 * 1.3 * xi * xi,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn coordinate_maps() {
        let cfg = reference();
        assert_relative_eq!(coordinate_map(1.0, &cfg).unwrap(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(
            coordinate_map(cfg.eta(), &cfg).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert!(coordinate_map(0.0, &cfg).is_err());
        assert!(coordinate_map(-1.0, &cfg).is_err());
        assert!(inverse_map(-1.0, &cfg).is_err());
        for i in 0..=50 {
            let x = 10f64.powf(-3.0 + 5.0 * i as f64 / 50.0);
            let back = inverse_map(coordinate_map(x, &cfg).unwrap(), &cfg).unwrap();
            assert!((back - x).abs() <= 1e-14 * x);
        }
    }

    #[test]
    fn analytic_levels() {
        let cfg = reference();
        let e0 = 1.0 + 1.25f64.sqrt();
        assert_relative_eq!(analytic_energy(0, &cfg), e0, epsilon = 1e-15);
        assert_relative_eq!(ground_state_ratio(&cfg), e0, epsilon = 1e-15);
        let table = analytic_spectrum(&cfg, 51);
        assert!(table.gaps().iter().all(|&g| g == 2.0));
        for l in &table.levels {
            assert_relative_eq!(l.energy, analytic_energy(l.n, &cfg), max_relative = 1e-15);
        }
    }

    #[test]
    fn ground_state_normalisation_matches_gaussian_moment() {
        let cfg = reference();
        let nu = cfg.nu();
        let expect = (2.0 * cfg.width().powf(nu + 0.5) / libm::tgamma(nu + 0.5)).sqrt();
        assert_relative_eq!(normalize(0, &cfg).unwrap(), expect, max_relative = 1e-12);
        let doubled = cfg.with_m0(2.0).unwrap();
        assert_relative_eq!(
            normalize(0, &doubled).unwrap() / normalize(0, &cfg).unwrap(),
            2f64.powf((nu + 0.5) / 2.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn sign_change_counter() {
        assert_eq!(
            count_sign_changes(&[1.0, 2.0, -1.0, 0.0, -2.0, 3.0], 1e-12),
            2
        );
        assert_eq!(count_sign_changes(&[1.0, 1e-20, -1e-20, 1.0], 1e-12), 0);
        assert_eq!(count_sign_changes(&[], 1e-12), 0);
    }

    #[test]
    fn psi_and_phi_agree() {
        let cfg = reference();
        let wf = Wavefunction::new(2, &cfg).unwrap();
        for i in 1..40 {
            let x = 0.1 * i as f64;
            let xi = coordinate_map(x, &cfg).unwrap();
            let rebuilt = xi.sqrt() * wf.psi(x).unwrap();
            assert!((rebuilt - wf.phi(xi).unwrap()).abs() < 1e-12);
        }
        assert!(wf.psi(0.0).is_err());
        assert!(wf.phi(-1.0).is_err());
    }
}
