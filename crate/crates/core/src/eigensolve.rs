//! Finite-difference eigensolvers for the two forms of the quantum problem.
//!
//! Both discretise a Sturm–Liouville operator on a uniform grid with
//! Dirichlet conditions one step beyond each end, giving a symmetric
//! tridiagonal matrix. Eigenvalues come from Sturm-sequence bisection,
//! eigenvectors from inverse iteration.

use serde::Serialize;
use thiserror::Error;

use crate::quantum::{self, QuantumConfig, QuantumError, SpectrumMethod, SpectrumTable};

pub const MIN_POINTS: usize = 64;
pub const DEFAULT_POINTS: usize = 4000;

const INVERSE_ITERATIONS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("invalid grid: lo = {lo}, hi = {hi}, n_points = {n_points}")]
    InvalidGrid { lo: f64, hi: f64, n_points: usize },
    #[error("requested {requested} levels but the grid supports at most {max}")]
    TooManyLevels { requested: usize, max: usize },
    #[error("level {level}: estimated error {estimate:e} exceeds tolerance {tol:e}")]
    GridTooCoarse {
        level: usize,
        estimate: f64,
        tol: f64,
    },
    #[error("spacing report needs at least two levels, got {0}")]
    TooFewLevels(usize),
}

/// Uniform grid `lo, lo + h, …, hi` of interior nodes. The solution is
/// pinned to zero at `lo − h` and `hi + h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenGrid {
    lo: f64,
    hi: f64,
    n_points: usize,
}

impl EigenGrid {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self, EigenError> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi && n_points >= MIN_POINTS) {
            return Err(EigenError::InvalidGrid { lo, hi, n_points });
        }
        Ok(Self { lo, hi, n_points })
    }

    /// First node one step from the origin: `h = hi/n_points`, `lo = h`.
    pub fn half_line(hi: f64, n_points: usize) -> Result<Self, EigenError> {
        if !(hi.is_finite() && hi > 0.0) || n_points < MIN_POINTS {
            return Err(EigenError::InvalidGrid {
                lo: f64::NAN,
                hi,
                n_points,
            });
        }
        Self::new(hi / n_points as f64, hi, n_points)
    }

    /// Drops the first `steps` nodes, moving the Dirichlet point away from
    /// the origin while keeping the spacing.
    pub fn shifted(&self, steps: usize) -> Result<Self, EigenError> {
        let h = self.spacing();
        Self::new(
            self.lo + steps as f64 * h,
            self.hi,
            self.n_points.saturating_sub(steps),
        )
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    /// Whether `lo` equals the spacing, so the left Dirichlet point is the origin.
    pub fn is_half_line(&self) -> bool {
        (self.lo - self.spacing()).abs() <= 1e-12 * self.hi
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Same `hi` and offset ratio `lo/h`, spacing scaled by `factor`.
    fn rescaled(&self, factor: f64) -> Result<Self, EigenError> {
        let g = self.rescaled_unchecked(factor);
        Self::new(g.lo, g.hi, g.n_points)
    }

    /// Coarse grids used only for error estimation may fall below
    /// [`MIN_POINTS`].
    fn rescaled_unchecked(&self, factor: f64) -> Self {
        let h = self.spacing() * factor;
        let offset = self.lo / self.spacing();
        let n = (((self.hi - offset * h) / h).round() as usize + 1).max(2);
        Self {
            lo: self.hi - (n - 1) as f64 * h,
            hi: self.hi,
            n_points: n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenWarning {
    /// `a² + ε = 1/4`: the Dirichlet condition at the origin is one of
    /// several admissible self-adjoint extensions.
    SingularEndpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub values: Vec<f64>,
    /// `vectors[n][i]` is level `n` at node `i`, unit norm under `h Σ v²`.
    pub vectors: Vec<Vec<f64>>,
    pub grid: EigenGrid,
    pub method: SpectrumMethod,
    pub est_error: Vec<f64>,
    /// Eigenvalues of the matrix on `grid`; equal to `values` unless the
    /// result came from [`refine`].
    pub grid_values: Vec<f64>,
    pub warnings: Vec<EigenWarning>,
    /// x-space results on the negative branch live at `x = −node`.
    pub mirrored: bool,
}

impl EigenResult {
    fn empty(grid: EigenGrid, method: SpectrumMethod, warnings: Vec<EigenWarning>) -> Self {
        Self {
            values: Vec::new(),
            vectors: Vec::new(),
            grid,
            method,
            est_error: Vec::new(),
            grid_values: Vec::new(),
            warnings,
            mirrored: false,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Physical coordinate of node `i`.
    pub fn coordinate(&self, i: usize) -> f64 {
        let c = self.grid.node(i);
        if self.mirrored {
            -c
        } else {
            c
        }
    }

    /// Piecewise-linear interpolation of level `n` at physical coordinate `at`,
    /// zero outside the Dirichlet points.
    pub fn sample(&self, n: usize, at: f64) -> f64 {
        let s = if self.mirrored { -at } else { at };
        let h = self.grid.spacing();
        let u = (s - self.grid.lo) / h + 1.0;
        if u.is_nan() || u <= 0.0 || u >= (self.grid.n_points + 1) as f64 {
            return 0.0;
        }
        let j = u.floor() as usize;
        let frac = u - j as f64;
        let v = &self.vectors[n];
        let at_node = |k: usize| {
            if k == 0 || k > v.len() {
                0.0
            } else {
                v[k - 1]
            }
        };
        (1.0 - frac) * at_node(j) + frac * at_node(j + 1)
    }

    /// Errors with [`EigenError::GridTooCoarse`] if any estimate exceeds `tol`.
    pub fn require_tolerance(self, tol: f64) -> Result<Self, EigenError> {
        if let Some((level, &estimate)) = self
            .est_error
            .iter()
            .enumerate()
            .find(|(_, e)| e.is_nan() || **e > tol)
        {
            return Err(EigenError::GridTooCoarse {
                level,
                estimate,
                tol,
            });
        }
        Ok(self)
    }

    pub fn to_spectrum_table(&self, omega: f64) -> SpectrumTable {
        SpectrumTable {
            levels: self
                .values
                .iter()
                .enumerate()
                .map(|(n, &energy)| quantum::Level { n, energy })
                .collect(),
            method: self.method,
            metadata: format!(
                "uniform grid lo={:e} hi={:e} n_points={}",
                self.grid.lo, self.grid.hi, self.grid.n_points
            ),
            omega,
        }
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, `off[i]` couples `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - lambda - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < self.dim() {
                self.off[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Solves `(T − shift) x = rhs` by LU with partial pivoting.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * (shift.abs() + 1.0);
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut du = self.off.clone();
        let mut dl = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut pivot = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                pivot[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut b = rhs.to_vec();
        for i in 0..n - 1 {
            if pivot[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= du2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        x
    }
}

/// `−φ″/2m₀ + V_eff φ` on `grid` (ξ coordinate).
pub fn xi_operator(cfg: &QuantumConfig, grid: &EigenGrid) -> Result<Tridiagonal, EigenError> {
    let h = grid.spacing();
    let kin = 1.0 / (2.0 * cfg.m0() * h * h);
    let pot = grid
        .nodes()
        .iter()
        .map(|&xi| quantum::effective_potential(xi, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<[f64; 3]> = pot.iter().map(|v| [-kin, 2.0 * kin + v, -kin]).collect();
    Ok(from_rows(&rows))
}

/// `[−(xψ′)′ + ((a² + ε)/4x + 4a²ω²x) ψ] / 2a` on `grid`, for `a > 0`.
///
/// The flux uses midpoint values `x_{i±1/2}`. The inverse-distance term is
/// replaced by the diagonal that makes the regular local solution `x^s`,
/// `s = √(a² + ε)/2`, an exact null vector of the discrete
/// `−(xψ′)′ + (a² + ε)ψ/4x`; away from the origin this differs from
/// `(a² + ε)/4x` by `O(h²)`, and near it restores second-order convergence
/// that a pointwise sample of the singular term loses.
pub fn x_operator(cfg: &QuantumConfig, grid: &EigenGrid) -> Tridiagonal {
    let a = cfg.params().a().abs();
    let w = cfg.omega();
    let h = grid.spacing();
    let lo = grid.lo();
    let weight = 2.0 * a;
    let s = cfg.coupling().sqrt() / 2.0;
    // nodes in units of h, so x^s stays well scaled
    let node = |i: f64| lo / h + i;
    let mid = |i: f64| node(i + 0.5);
    let fitted = |i: usize| {
        let k = i as f64;
        let u = |j: f64| node(j).max(0.0).powf(s);
        let ui = u(k);
        (mid(k) * (u(k + 1.0) - ui) - mid(k - 1.0) * (ui - u(k - 1.0))) / ui
    };
    let rows: Vec<[f64; 3]> = (0..grid.n_points())
        .map(|i| {
            let k = i as f64;
            let x = grid.node(i);
            let left = -mid(k - 1.0) / (h * weight);
            let right = -mid(k) / (h * weight);
            let q = fitted(i) / (h * weight) + 4.0 * a * a * w * w * x / weight;
            [left, -(left + right) + q, right]
        })
        .collect();
    from_rows(&rows)
}

/// Builds the matrix from per-row stencils `[left, centre, right]`,
/// checking that each coupling agrees bitwise with its transpose.
pub fn from_rows(rows: &[[f64; 3]]) -> Tridiagonal {
    for pair in rows.windows(2) {
        assert_eq!(
            pair[0][2].to_bits(),
            pair[1][0].to_bits(),
            "row stencils are not symmetric"
        );
    }
    Tridiagonal {
        diag: rows.iter().map(|r| r[1]).collect(),
        off: rows[..rows.len() - 1].iter().map(|r| r[2]).collect(),
    }
}

fn lowest_pairs(t: &Tridiagonal, k: usize, h: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let values: Vec<f64> = (0..k).map(|j| t.eigenvalue(j)).collect();
    let n = t.dim();
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for &lambda in &values {
        // deterministic start with components in every level
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0)
            .collect();
        for _ in 0..INVERSE_ITERATIONS {
            v = t.shifted_solve(lambda, &v);
            for _ in 0..2 {
                for u in &vectors {
                    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() * h;
                    v.iter_mut().zip(u).for_each(|(x, y)| *x -= dot * y);
                }
            }
            let norm = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        let lead = v.iter().copied().find(|x| x.abs() > 1e-8).unwrap_or(1.0);
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.push(v);
    }
    (values, vectors)
}

fn check_levels(grid: &EigenGrid, k: usize) -> Result<(), EigenError> {
    let max = grid.n_points / 4;
    if k > max {
        return Err(EigenError::TooManyLevels { requested: k, max });
    }
    Ok(())
}

fn warnings_for(cfg: &QuantumConfig) -> Vec<EigenWarning> {
    if cfg.is_boundary_case() {
        vec![EigenWarning::SingularEndpoint]
    } else {
        Vec::new()
    }
}

/// Outer classical turning point of `V_eff` at energy `e`.
fn xi_turning_point(cfg: &QuantumConfig, e: f64) -> f64 {
    let w = cfg.omega();
    let m0 = cfg.m0();
    let g = cfg.centrifugal_strength();
    let disc = (e * e - w * w * g).max(0.0);
    ((e + disc.sqrt()) / (m0 * w * w)).sqrt()
}

/// `hi = max(12/√(m₀ω), 1.5 × turning point of level k+2)`, 4000 points.
pub fn default_xi_grid(cfg: &QuantumConfig, k: usize) -> Result<EigenGrid, EigenError> {
    let e = quantum::analytic_energy(k + 2, cfg);
    let hi = (12.0 / cfg.width().sqrt()).max(1.5 * xi_turning_point(cfg, e));
    EigenGrid::half_line(hi, DEFAULT_POINTS)
}

/// `hi = max(16/|a|ω, 1.5 × turning point of level k+2)`, 4000 points. The
/// eigenfunctions carry `e^{−2|a|ωx}`, so the first bound puts the cut where
/// `ψ²` has fallen by `e^{−64}`.
pub fn default_x_grid(cfg: &QuantumConfig, k: usize) -> Result<EigenGrid, EigenError> {
    let e = quantum::analytic_energy(k + 2, cfg);
    let turn = cfg.eta().abs() * xi_turning_point(cfg, e).powi(2);
    let hi = (16.0 / (cfg.params().a().abs() * cfg.omega())).max(1.5 * turn);
    EigenGrid::half_line(hi, DEFAULT_POINTS)
}

fn solve_raw(
    cfg: &QuantumConfig,
    grid: &EigenGrid,
    k: usize,
    method: SpectrumMethod,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), EigenError> {
    let t = match method {
        SpectrumMethod::XGrid => x_operator(cfg, grid),
        _ => xi_operator(cfg, grid)?,
    };
    Ok(lowest_pairs(&t, k, grid.spacing()))
}

/// Eigenvalues only, from the matrix on a coarser grid.
fn values_only(
    cfg: &QuantumConfig,
    grid: &EigenGrid,
    k: usize,
    method: SpectrumMethod,
) -> Result<Vec<f64>, EigenError> {
    let t = match method {
        SpectrumMethod::XGrid => x_operator(cfg, grid),
        _ => xi_operator(cfg, grid)?,
    };
    Ok((0..k).map(|j| t.eigenvalue(j)).collect())
}

fn solve(
    cfg: &QuantumConfig,
    grid: &EigenGrid,
    k: usize,
    method: SpectrumMethod,
) -> Result<EigenResult, EigenError> {
    check_levels(grid, k)?;
    let warnings = warnings_for(cfg);
    if k == 0 {
        return Ok(EigenResult::empty(*grid, method, warnings));
    }
    let (values, vectors) = solve_raw(cfg, grid, k, method)?;
    let coarse = grid.rescaled_unchecked(2.0);
    let coarser = grid.rescaled_unchecked(4.0);
    let e2 = values_only(cfg, &coarse, k, method)?;
    let e4 = values_only(cfg, &coarser, k, method)?;
    let est_error = (0..k)
        .map(|j| richardson_estimate(values[j], e2[j], e4[j]))
        .collect();
    Ok(EigenResult {
        grid_values: values.clone(),
        values,
        vectors,
        grid: *grid,
        method,
        est_error,
        warnings,
        mirrored: method == SpectrumMethod::XGrid && cfg.params().a() < 0.0,
    })
}

/// Error of `fine` from values on grids with spacing `h`, `2h`, `4h`. The
/// convergence ratio is measured and clamped to `[2, 4]` (order one to two),
/// so an operator that has not reached its asymptotic rate, or whose rate is
/// reduced by the singular endpoint, is not credited with more than it shows.
fn richardson_estimate(fine: f64, coarse: f64, coarser: f64) -> f64 {
    let d1 = fine - coarse;
    let d2 = coarse - coarser;
    let ratio = if d1 != 0.0 {
        (d2 / d1).clamp(2.0, 4.0)
    } else {
        4.0
    };
    d1.abs() / (ratio - 1.0)
}

/// Lowest `k` levels of `−φ″/2m₀ + V_eff φ = Eφ`.
pub fn solve_xi_space(
    cfg: &QuantumConfig,
    grid: &EigenGrid,
    k: usize,
) -> Result<EigenResult, EigenError> {
    solve(cfg, grid, k, SpectrumMethod::XiGrid)
}

/// Lowest `k` levels of `−(xψ′)′ + (ε/4x + 2aV)ψ = 2aEψ`. On the negative
/// branch the problem is solved for `|x|` and reported mirrored.
pub fn solve_x_space(
    cfg: &QuantumConfig,
    grid: &EigenGrid,
    k: usize,
) -> Result<EigenResult, EigenError> {
    solve(cfg, grid, k, SpectrumMethod::XGrid)
}

/// Re-solves with half the spacing on the same `hi` and Richardson-extrapolates
/// the second-order grid values. The error estimate becomes the size of the
/// extrapolation correction.
pub fn refine(result: &EigenResult, cfg: &QuantumConfig) -> Result<EigenResult, EigenError> {
    let k = result.len();
    let fine_grid = result.grid.rescaled(0.5)?;
    check_levels(&fine_grid, k)?;
    if k == 0 {
        return Ok(EigenResult::empty(
            fine_grid,
            result.method,
            result.warnings.clone(),
        ));
    }
    let (fine, vectors) = solve_raw(cfg, &fine_grid, k, result.method)?;
    let r = result.grid.spacing() / fine_grid.spacing();
    let r2 = r * r;
    let values: Vec<f64> = fine
        .iter()
        .zip(&result.grid_values)
        .map(|(f, c)| (r2 * f - c) / (r2 - 1.0))
        .collect();
    let est_error = values
        .iter()
        .zip(&fine)
        .map(|(x, f)| (x - f).abs())
        .collect();
    Ok(EigenResult {
        values,
        vectors,
        grid: fine_grid,
        method: result.method,
        est_error,
        grid_values: fine,
        warnings: result.warnings.clone(),
        mirrored: result.mirrored,
    })
}

/// `E_{n+1} − E_n`.
pub fn spacing_report(result: &EigenResult) -> Result<Vec<f64>, EigenError> {
    if result.len() < 2 {
        return Err(EigenError::TooFewLevels(result.len()));
    }
    Ok(result.values.windows(2).map(|p| p[1] - p[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AmbiguityTriple, ModelParams};

    fn reference() -> QuantumConfig {
        QuantumConfig::with_unit_mass(
            ModelParams::new(1.0, 1.0).unwrap(),
            AmbiguityTriple::new(-0.25, -0.5).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(EigenGrid::half_line(10.0, 63).is_err());
        assert!(EigenGrid::new(0.0, 1.0, 100).is_err());
        assert!(EigenGrid::new(2.0, 1.0, 100).is_err());
        let g = EigenGrid::half_line(12.0, 4000).unwrap();
        assert!(g.is_half_line());
        assert!((g.spacing() - 0.003).abs() < 1e-15);
        assert_eq!(g.node(3999), 12.0);
        let s = g.shifted(1).unwrap();
        assert!(!s.is_half_line());
        assert_eq!(s.n_points(), 3999);
        assert!((s.spacing() - g.spacing()).abs() < 1e-15);
    }

    #[test]
    fn operators_are_exactly_symmetric() {
        let cfg = reference();
        let g = EigenGrid::half_line(12.0, 500).unwrap();
        for t in [xi_operator(&cfg, &g).unwrap(), x_operator(&cfg, &g)] {
            for i in 0..t.dim() - 1 {
                assert_eq!(t.entry(i, i + 1).to_bits(), t.entry(i + 1, i).to_bits());
            }
            assert_eq!(t.entry(0, 5), 0.0);
        }
    }

    #[test]
    fn sturm_count_on_small_matrix() {
        // eigenvalues of tridiag(-1, 2, -1), n = 4: 2 − 2cos(jπ/5)
        let t = Tridiagonal {
            diag: vec![2.0; 4],
            off: vec![-1.0; 3],
        };
        let exact: Vec<f64> = (1..=4)
            .map(|j| 2.0 - 2.0 * (j as f64 * std::f64::consts::PI / 5.0).cos())
            .collect();
        for (j, &e) in exact.iter().enumerate() {
            assert_eq!(t.sturm_count(e - 1e-9), j);
            assert_eq!(t.sturm_count(e + 1e-9), j + 1);
            assert!((t.eigenvalue(j) - e).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_iteration_vector() {
        let t = Tridiagonal {
            diag: vec![2.0; 6],
            off: vec![-1.0; 5],
        };
        let (vals, vecs) = lowest_pairs(&t, 2, 1.0);
        for (lam, v) in vals.iter().zip(&vecs) {
            for i in 0..6 {
                let mut tv = t.diag[i] * v[i];
                if i > 0 {
                    tv += t.off[i - 1] * v[i - 1];
                }
                if i < 5 {
                    tv += t.off[i] * v[i + 1];
                }
                assert!((tv - lam * v[i]).abs() < 1e-12);
            }
        }
        let dot: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-12);
    }

    #[test]
    fn zero_levels_is_empty() {
        let cfg = reference();
        let g = default_xi_grid(&cfg, 0).unwrap();
        assert!(solve_xi_space(&cfg, &g, 0).unwrap().is_empty());
        let small = EigenGrid::half_line(12.0, 64).unwrap();
        assert!(matches!(
            solve_xi_space(&cfg, &small, 17),
            Err(EigenError::TooManyLevels { .. })
        ));
    }
}
