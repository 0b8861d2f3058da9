//! Special functions used by the quantum layer: Pochhammer symbols, the
//! terminating confluent hypergeometric series `₁F₁(−n; b; z)`, associated
//! Laguerre polynomials and Gauss–Legendre quadrature.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("invalid Kummer parameter b = {0} (must be finite and not a nonpositive integer)")]
    InvalidKummerParameter(f64),
    #[error("quadrature order must be >= 1")]
    ZeroOrder,
    #[error("Newton iteration for Legendre node {index} of order {order} did not converge")]
    NonConvergence { order: usize, index: usize },
    #[error("adaptive quadrature on [{lo}, {hi}] did not reach tolerance {tol}")]
    AdaptiveFailure { lo: f64, hi: f64, tol: f64 },
}

/// Rising factorial `(x)_k = x(x+1)…(x+k−1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// Double-double arithmetic, enough of it to sum the Kummer series without
/// losing the cancellation between alternating terms.
mod dd {
    #[derive(Debug, Clone, Copy)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    #[inline]
    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    #[inline]
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        pub const fn new(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn add(self, o: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, o.hi);
            let (t, f) = two_sum(self.lo, o.lo);
            let e = e + t;
            let (s, e) = quick_two_sum(s, e);
            let e = e + f;
            let (hi, lo) = quick_two_sum(s, e);
            Dd { hi, lo }
        }

        pub fn sub(self, o: Dd) -> Dd {
            self.add(Dd {
                hi: -o.hi,
                lo: -o.lo,
            })
        }

        pub fn mul(self, o: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, o.hi);
            let e = e + (self.hi * o.lo + self.lo * o.hi);
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }

        pub fn div(self, o: Dd) -> Dd {
            let q1 = self.hi / o.hi;
            let r = self.sub(o.mul(Dd::new(q1)));
            let q2 = r.hi / o.hi;
            let r = r.sub(o.mul(Dd::new(q2)));
            let q3 = r.hi / o.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }.add(Dd::new(q3))
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }
    }
}

use dd::Dd;

fn is_nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b.fract() == 0.0
}

/// `₁F₁(−n; b; z) = Σ_{k=0}^{n} (−n)_k z^k / ((b)_k k!)`.
///
/// Terms are generated by forward ratio recursion and summed in
/// double-double precision, so the alternating cancellation at large `z`
/// costs roughly 16 extra digits before it reaches the `f64` result.
pub fn kummer_terminating(n: usize, b: f64, z: f64) -> Result<f64, SpecfunError> {
    if !b.is_finite() || is_nonpositive_integer(b) {
        return Err(SpecfunError::InvalidKummerParameter(b));
    }
    let zd = Dd::new(z);
    let bd = Dd::new(b);
    let mut term = Dd::new(1.0);
    let mut sum = term;
    for k in 0..n {
        let kf = k as f64;
        let num = Dd::new(kf - n as f64).mul(zd);
        let den = bd.add(Dd::new(kf)).mul(Dd::new(kf + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    Ok(sum.to_f64())
}

/// Associated Laguerre polynomial `L_n^{(α)}(z)` by the three-term recurrence.
pub fn assoc_laguerre(n: usize, alpha: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `n!/(α+1)_n`, the factor in `₁F₁(−n; α+1; z) = n!/(α+1)_n · L_n^{(α)}(z)`.
pub fn laguerre_to_kummer_factor(n: usize, alpha: f64) -> f64 {
    (0..n).fold(1.0, |acc, k| {
        acc * (k as f64 + 1.0) / (alpha + 1.0 + k as f64)
    })
}

/// `₁F₁(−n; b; z)` through the Laguerre recurrence. Stable for the large
/// `n`, `z` that occur when evaluating excited wavefunctions.
pub fn kummer_via_laguerre(n: usize, b: f64, z: f64) -> Result<f64, SpecfunError> {
    if !b.is_finite() || is_nonpositive_integer(b) {
        return Err(SpecfunError::InvalidKummerParameter(b));
    }
    Ok(laguerre_to_kummer_factor(n, b - 1.0) * assoc_laguerre(n, b - 1.0, z))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights affinely mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }

    /// Sum of the rule applied on each consecutive pair of `breaks`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks
            .windows(2)
            .map(|ab| self.integrate(ab[0], ab[1], &mut f))
            .sum()
    }
}

/// Legendre `P_n(x)` and `P_n′(x)`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn gauss_legendre(order: usize) -> Result<QuadratureRule, SpecfunError> {
    if order == 0 {
        return Err(SpecfunError::ZeroOrder);
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi's asymptotic guess for the i-th largest root.
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::EPSILON) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecfunError::NonConvergence { order, index: i });
        }
        if 2 * i + 1 == n {
            x = 0.0;
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Adaptive bisection with a fixed Gauss–Legendre panel rule. A panel is
/// accepted when its value agrees with the sum over its two halves.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(
    rule: &QuadratureRule,
    lo: f64,
    hi: f64,
    tol: f64,
    mut f: F,
) -> Result<f64, SpecfunError> {
    const MAX_DEPTH: u32 = 40;
    let mut stack = vec![(lo, hi, rule.integrate(lo, hi, &mut f), 0u32)];
    let mut total = 0.0;
    let span = (hi - lo).abs().max(f64::MIN_POSITIVE);
    while let Some((a, b, whole, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = rule.integrate(a, m, &mut f);
        let right = rule.integrate(m, b, &mut f);
        let err = (left + right - whole).abs();
        let local_tol = tol * ((b - a).abs() / span);
        if err <= local_tol.max(8.0 * f64::EPSILON * (left + right).abs()) {
            total += left + right;
        } else if depth >= MAX_DEPTH {
            return Err(SpecfunError::AdaptiveFailure { lo, hi, tol });
        } else {
            stack.push((m, b, right, depth + 1));
            stack.push((a, m, left, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn kummer_examples() {
        for &b in &[0.3, 1.0, 2.5] {
            for &z in &[0.0, 1.0, 40.0] {
                assert_eq!(kummer_terminating(0, b, z).unwrap(), 1.0);
            }
        }
        assert_eq!(kummer_terminating(1, 2.0, 2.0).unwrap(), 0.0);
        assert_relative_eq!(
            kummer_terminating(2, 1.5, 1.0).unwrap(),
            -1.0 / 15.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn kummer_rejects_bad_b() {
        for &b in &[0.0, -1.0, -3.0, f64::NAN, f64::INFINITY] {
            assert!(kummer_terminating(2, b, 1.0).is_err());
            assert!(kummer_via_laguerre(2, b, 1.0).is_err());
        }
        assert!(kummer_terminating(2, -0.5, 1.0).is_ok());
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(assoc_laguerre(0, 0.7, 3.0), 1.0);
        assert_eq!(assoc_laguerre(1, 0.0, 1.0), 0.0);
        // L_2^(a)(z) = ((a+1)(a+2) − 2(a+2)z + z²)/2
        let (a, z) = (0.618_f64, 1.3_f64);
        let expect = ((a + 1.0) * (a + 2.0) - 2.0 * (a + 2.0) * z + z * z) / 2.0;
        assert_relative_eq!(assoc_laguerre(2, a, z), expect, max_relative = 1e-14);
    }

    #[test]
    fn laguerre_kummer_identity_point() {
        let (n, alpha, z) = (3, 1.118, 0.7);
        let lhs = kummer_terminating(n, alpha + 1.0, z).unwrap();
        let rhs = laguerre_to_kummer_factor(n, alpha) * assoc_laguerre(n, alpha, z);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn gauss_legendre_small_orders() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_relative_eq!(r.weights()[0], 2.0, epsilon = 1e-15);
        let r = gauss_legendre(3).unwrap();
        assert_relative_eq!(r.integrate(-1.0, 1.0, |x| x.powi(4)), 0.4, epsilon = 1e-15);
        assert!(matches!(gauss_legendre(0), Err(SpecfunError::ZeroOrder)));
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for &n in &[2usize, 5, 16, 64, 257, 1000] {
            let r = gauss_legendre(n).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(r.nodes().iter().all(|&x| x > -1.0 && x < 1.0));
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let rule = gauss_legendre(10).unwrap();
        let v = adaptive_integrate(&rule, 0.0, 10.0, 1e-13, |x| {
            1.0 / (1e-3 + (x - 3.0).powi(2))
        })
        .unwrap();
        let c = 1e-3_f64.sqrt();
        let exact = (((10.0 - 3.0) / c).atan() - ((0.0 - 3.0) / c).atan()) / c;
        assert_relative_eq!(v, exact, max_relative = 1e-12);
    }
}
