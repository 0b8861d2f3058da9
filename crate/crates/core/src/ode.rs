//! Dormand–Prince 8(5,3) integrator with 7th-order dense output.
//!
//! Coefficients are the published DOP853 tableau. Step-size control follows
//! the classic implementation (combined 5th/3rd order error estimate, no
//! Lund stabilisation). Every accepted step stores its dense-output
//! polynomial so the solution can be evaluated anywhere in the span.
#![allow(clippy::excessive_precision)]

use thiserror::Error;

/// Right-hand side `dy/dt = f(t, y)`. A failing evaluation causes the
/// current step to be rejected and retried with a smaller step.
pub trait OdeSystem<const N: usize> {
    type Error;
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N], Self::Error>;

    /// Called on every accepted step end point; may move `y` back onto an
    /// invariant manifold. The default leaves `y` untouched.
    fn project(&self, _y: &mut [f64; N]) {}
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError<E> {
    #[error("step size underflow at t = {t} (h = {h})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("maximum number of steps ({0}) exceeded")]
    MaxSteps(usize),
    #[error("right-hand side failed at t = {t}")]
    Rhs { t: f64, source: E },
    #[error("invalid integration span or tolerance")]
    InvalidInput,
}

#[derive(Debug, Clone, Copy)]
pub struct Dop853Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: Option<f64>,
}

impl Default for Dop853Options {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_steps: 2_000_000,
            h_max: None,
        }
    }
}

/// Dense-output polynomial for one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    pub cont: [[f64; N]; 8],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        std::array::from_fn(|i| {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s
        })
    }

    /// Applies `f` to every coefficient component-wise. Linear maps of the
    /// state commute with the interpolant.
    pub fn map_linear(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        let mut cont = self.cont;
        for row in cont.iter_mut() {
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(i, *v);
            }
        }
        Self { cont, ..*self }
    }
}

/// Piecewise dense output over the whole integration span.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOutput<const N: usize> {
    segments: Vec<DenseSegment<N>>,
}

impl<const N: usize> DenseOutput<N> {
    pub fn new(segments: Vec<DenseSegment<N>>) -> Self {
        Self { segments }
    }

    pub fn segments(&self) -> &[DenseSegment<N>] {
        &self.segments
    }

    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.segments.first()?.t0, self.segments.last()?.t1()))
    }

    fn locate(&self, t: f64) -> Option<&DenseSegment<N>> {
        let (lo, hi) = self.span()?;
        if !(t >= lo && t <= hi) {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.t1() < t);
        self.segments.get(idx.min(self.segments.len() - 1))
    }

    /// Interpolated state, `None` outside the integrated span.
    pub fn eval(&self, t: f64) -> Option<[f64; N]> {
        self.locate(t).map(|s| s.eval(t))
    }

    pub fn map_linear(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        Self {
            segments: self.segments.iter().map(|s| s.map_linear(&f)).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub dense: DenseOutput<N>,
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| {
        let s: f64 = terms.iter().map(|(c, k)| c * k[i]).sum();
        y[i] + h * s
    })
}

fn lin<const N: usize>(terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| terms.iter().map(|(c, k)| c * k[i]).sum())
}

struct Counter<'a, S> {
    sys: &'a S,
    evals: usize,
}

impl<S> Counter<'_, S> {
    fn f<const N: usize>(&mut self, t: f64, y: &[f64; N]) -> Result<[f64; N], S::Error>
    where
        S: OdeSystem<N>,
    {
        self.evals += 1;
        self.sys.rhs(t, y)
    }
}

/// Integrates from `t0` to `t_end > t0`.
pub fn dop853<S, const N: usize>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Dop853Options,
) -> Result<OdeSolution<N>, OdeError<S::Error>>
where
    S: OdeSystem<N>,
{
    if !(t_end > t0 && t0.is_finite() && t_end.is_finite()) || !(opts.rtol > 0.0 && opts.atol > 0.0)
    {
        return Err(OdeError::InvalidInput);
    }
    let mut fc = Counter { sys, evals: 0 };
    let h_max = opts.h_max.unwrap_or(t_end - t0).min(t_end - t0);
    let (rtol, atol) = (opts.rtol, opts.atol);
    let scale = |a: &[f64; N], b: &[f64; N], i: usize| atol + rtol * a[i].abs().max(b[i].abs());

    let mut t = t0;
    let mut y = y0;
    let mut k1 = fc.f(t, &y).map_err(|e| OdeError::Rhs { t, source: e })?;

    // Initial step guess.
    let mut h = {
        let sk: [f64; N] = std::array::from_fn(|i| atol + rtol * y[i].abs());
        let dnf: f64 = (0..N).map(|i| (k1[i] / sk[i]).powi(2)).sum();
        let dny: f64 = (0..N).map(|i| (y[i] / sk[i]).powi(2)).sum();
        let h0 = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        }
        .min(h_max);
        let y1 = axpy(&y, h0, &[(1.0, &k1)]);
        let der2 = match fc.f(t + h0, &y1) {
            Ok(k2) => {
                (0..N)
                    .map(|i| ((k2[i] - k1[i]) / sk[i]).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    / h0
            }
            Err(_) => f64::INFINITY,
        };
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h0).min(h1).min(h_max)
    };

    const SAFE: f64 = 0.9;
    const FACC1: f64 = 1.0 / 0.333;
    const FACC2: f64 = 1.0 / 6.0;
    const EXPO1: f64 = 1.0 / 8.0;

    let mut times = vec![t];
    let mut states = vec![y];
    let mut segments = Vec::new();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut last_rejected = false;
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(OdeError::MaxSteps(opts.max_steps));
        }
        steps += 1;
        if t + 1.01 * h >= t_end {
            h = t_end - t;
        }
        if h.abs() <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(OdeError::StepSizeUnderflow { t, h });
        }

        let stages = (|| -> Result<_, S::Error> {
            let k2 = fc.f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = fc.f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = fc.f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A43, &k3)]))?;
            let k5 = fc.f(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = fc.f(
                t + C6 * h,
                &axpy(&y, h, &[(A61, &k1), (A64, &k4), (A65, &k5)]),
            )?;
            let k7 = fc.f(
                t + C7 * h,
                &axpy(&y, h, &[(A71, &k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
            )?;
            let k8 = fc.f(
                t + C8 * h,
                &axpy(
                    &y,
                    h,
                    &[(A81, &k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)],
                ),
            )?;
            let k9 = fc.f(
                t + C9 * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A91, &k1),
                        (A94, &k4),
                        (A95, &k5),
                        (A96, &k6),
                        (A97, &k7),
                        (A98, &k8),
                    ],
                ),
            )?;
            let k10 = fc.f(
                t + C10 * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A101, &k1),
                        (A104, &k4),
                        (A105, &k5),
                        (A106, &k6),
                        (A107, &k7),
                        (A108, &k8),
                        (A109, &k9),
                    ],
                ),
            )?;
            let k11 = fc.f(
                t + C11 * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A111, &k1),
                        (A114, &k4),
                        (A115, &k5),
                        (A116, &k6),
                        (A117, &k7),
                        (A118, &k8),
                        (A119, &k9),
                        (A1110, &k10),
                    ],
                ),
            )?;
            let yy1 = axpy(
                &y,
                h,
                &[
                    (A121, &k1),
                    (A124, &k4),
                    (A125, &k5),
                    (A126, &k6),
                    (A127, &k7),
                    (A128, &k8),
                    (A129, &k9),
                    (A1210, &k10),
                    (A1211, &k11),
                ],
            );
            let k12 = fc.f(t + h, &yy1)?;
            Ok((k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12))
        })();

        let (_k2, _k3, _k4, _k5, k6, k7, k8, k9, k10, k11, k12) = match stages {
            Ok(s) => s,
            Err(e) => {
                rejected += 1;
                last_rejected = true;
                let shrunk = 0.25 * h;
                if shrunk <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
                    return Err(OdeError::Rhs { t, source: e });
                }
                h = shrunk;
                continue;
            }
        };

        let incr = lin(&[
            (B1, &k1),
            (B6, &k6),
            (B7, &k7),
            (B8, &k8),
            (B9, &k9),
            (B10, &k10),
            (B11, &k11),
            (B12, &k12),
        ]);
        let y_new: [f64; N] = std::array::from_fn(|i| y[i] + h * incr[i]);

        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..N {
            let sk = scale(&y, &y_new, i);
            let e2 = incr[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
            err2 += (e2 / sk).powi(2);
            let e = ER1 * k1[i]
                + ER6 * k6[i]
                + ER7 * k7[i]
                + ER8 * k8[i]
                + ER9 * k9[i]
                + ER10 * k10[i]
                + ER11 * k11[i]
                + ER12 * k12[i];
            err += (e / sk).powi(2);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err * (1.0 / (deno * N as f64)).sqrt();

        let fac11 = err.powf(EXPO1);
        let fac = FACC2.max(FACC1.min(fac11 / SAFE));
        let mut h_new = h / fac;

        if err <= 1.0 {
            let k_new = match fc.f(t + h, &y_new) {
                Ok(k) => k,
                Err(e) => {
                    rejected += 1;
                    last_rejected = true;
                    let shrunk = 0.25 * h;
                    if shrunk <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
                        return Err(OdeError::Rhs { t, source: e });
                    }
                    h = shrunk;
                    continue;
                }
            };

            // Dense output coefficients.
            let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let cont3 = bspl;
            let cont4: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * k_new[i] - bspl[i]);
            let d_base = |d: &[f64; 12]| {
                lin(&[
                    (d[0], &k1),
                    (d[1], &k6),
                    (d[2], &k7),
                    (d[3], &k8),
                    (d[4], &k9),
                    (d[5], &k10),
                    (d[6], &k11),
                    (d[7], &k12),
                ])
            };
            let extra = (|| -> Result<_, S::Error> {
                let k14 = fc.f(
                    t + C14 * h,
                    &axpy(
                        &y,
                        h,
                        &[
                            (A141, &k1),
                            (A147, &k7),
                            (A148, &k8),
                            (A149, &k9),
                            (A1410, &k10),
                            (A1411, &k11),
                            (A1412, &k12),
                            (A1413, &k_new),
                        ],
                    ),
                )?;
                let k15 = fc.f(
                    t + C15 * h,
                    &axpy(
                        &y,
                        h,
                        &[
                            (A151, &k1),
                            (A156, &k6),
                            (A157, &k7),
                            (A158, &k8),
                            (A1511, &k11),
                            (A1512, &k12),
                            (A1513, &k_new),
                            (A1514, &k14),
                        ],
                    ),
                )?;
                let k16 = fc.f(
                    t + C16 * h,
                    &axpy(
                        &y,
                        h,
                        &[
                            (A161, &k1),
                            (A166, &k6),
                            (A167, &k7),
                            (A168, &k8),
                            (A169, &k9),
                            (A1613, &k_new),
                            (A1614, &k14),
                            (A1615, &k15),
                        ],
                    ),
                )?;
                Ok((k14, k15, k16))
            })();
            let (k14, k15, k16) = match extra {
                Ok(v) => v,
                Err(e) => {
                    rejected += 1;
                    last_rejected = true;
                    let shrunk = 0.25 * h;
                    if shrunk <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
                        return Err(OdeError::Rhs { t, source: e });
                    }
                    h = shrunk;
                    continue;
                }
            };
            let finish = |d: &[f64; 12]| -> [f64; N] {
                let base = d_base(d);
                let tail = lin(&[(d[8], &k_new), (d[9], &k14), (d[10], &k15), (d[11], &k16)]);
                std::array::from_fn(|i| h * (base[i] + tail[i]))
            };
            let mut y_end = y_new;
            sys.project(&mut y_end);
            let projected = y_end != y_new;
            // Blend the projection correction linearly into the interpolant
            // so consecutive segments stay continuous.
            let ydiff_end: [f64; N] = std::array::from_fn(|i| y_end[i] - y[i]);
            let cont = [
                y,
                ydiff_end,
                cont3,
                cont4,
                finish(&D4),
                finish(&D5),
                finish(&D6),
                finish(&D7),
            ];
            segments.push(DenseSegment { t0: t, h, cont });

            accepted += 1;
            k1 = if projected {
                match fc.f(t + h, &y_end) {
                    Ok(k) => k,
                    Err(e) => {
                        return Err(OdeError::Rhs {
                            t: t + h,
                            source: e,
                        })
                    }
                }
            } else {
                k_new
            };
            y = y_end;
            t = if (t_end - (t + h)).abs() <= 4.0 * f64::EPSILON * t_end.abs() {
                t_end
            } else {
                t + h
            };
            times.push(t);
            states.push(y);
            if last_rejected {
                h_new = h_new.min(h);
                last_rejected = false;
            }
        } else {
            h_new = h / FACC1.min(fac11 / SAFE);
            rejected += 1;
            last_rejected = true;
        }
        h = h_new.min(h_max);
    }

    Ok(OdeSolution {
        times,
        states,
        dense: DenseOutput::new(segments),
        accepted,
        rejected,
        evaluations: fc.evals,
    })
}

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

// Dense output rows, ordered as the stages they multiply:
// k1, k6, k7, k8, k9, k10, k11, k12, k13 (= f at step end), k14, k15, k16.
const D4: [f64; 12] = [
    -0.84289382761090128651353491142E+01,
    0.56671495351937776962531783590E+00,
    -0.30689499459498916912797304727E+01,
    0.23846676565120698287728149680E+01,
    0.21170345824450282767155149946E+01,
    -0.87139158377797299206789907490E+00,
    0.22404374302607882758541771650E+01,
    0.63157877876946881815570249290E+00,
    -0.88990336451333310820698117400E-01,
    0.18148505520854727256656404962E+02,
    -0.91946323924783554000451984436E+01,
    -0.44360363875948939664310572000E+01,
];
const D5: [f64; 12] = [
    0.10427508642579134603413151009E+02,
    0.24228349177525818288430175319E+03,
    0.16520045171727028198505394887E+03,
    -0.37454675472269020279518312152E+03,
    -0.22113666853125306036270938578E+02,
    0.77334326684722638389603898808E+01,
    -0.30674084731089398182061213626E+02,
    -0.93321305264302278729567221706E+01,
    0.15697238121770843886131091075E+02,
    -0.31139403219565177677282850411E+02,
    -0.93529243588444783865713862664E+01,
    0.35816841486394083752465898540E+02,
];
const D6: [f64; 12] = [
    0.19985053242002433820987653617E+02,
    -0.38703730874935176555105901742E+03,
    -0.18917813819516756882830838328E+03,
    0.52780815920542364900561016686E+03,
    -0.11573902539959630126141871134E+02,
    0.68812326946963000169666922661E+01,
    -0.10006050966910838403183860980E+01,
    0.77771377980534432092869265740E+00,
    -0.27782057523535084065932004339E+01,
    -0.60196695231264120758267380846E+02,
    0.84320405506677161018159903784E+02,
    0.11992291136182789328035130030E+02,
];
const D7: [f64; 12] = [
    -0.25693933462703749003312586129E+02,
    -0.15418974869023643374053993627E+03,
    -0.23152937917604549567536039109E+03,
    0.35763911791061412378285349910E+03,
    0.93405324183624310003907691704E+02,
    -0.37458323136451633156875139351E+02,
    0.10409964950896230045147246184E+03,
    0.29840293426660503123344363579E+02,
    -0.43533456590011143754432175058E+02,
    0.96324553959188282948394950600E+02,
    -0.39177261675615439165231486172E+02,
    -0.14972683625798562581422125276E+03,
];

#[cfg(test)]
mod tests {
    use super::*;

    struct Sho;
    impl OdeSystem<2> for Sho {
        type Error = ();
        fn rhs(&self, _t: f64, y: &[f64; 2]) -> Result<[f64; 2], ()> {
            Ok([y[1], -y[0]])
        }
    }

    #[test]
    fn harmonic_oscillator_endpoint_and_dense_output() {
        let opts = Dop853Options {
            rtol: 1e-12,
            atol: 1e-12,
            ..Default::default()
        };
        let sol = dop853(&Sho, 0.0, [1.0, 0.0], 20.0, &opts).unwrap();
        let last = *sol.states.last().unwrap();
        assert_eq!(*sol.times.last().unwrap(), 20.0);
        assert!((last[0] - 20f64.cos()).abs() < 1e-10);
        assert!((last[1] + 20f64.sin()).abs() < 1e-10);
        let mut worst: f64 = 0.0;
        for i in 0..=2000 {
            let t = 20.0 * i as f64 / 2000.0;
            let y = sol.dense.eval(t).unwrap();
            worst = worst
                .max((y[0] - t.cos()).abs())
                .max((y[1] + t.sin()).abs());
        }
        assert!(worst < 1e-10, "dense error {worst}");
        assert!(sol.dense.eval(20.5).is_none());
        assert!(sol.dense.eval(-0.1).is_none());
    }

    #[test]
    fn dense_output_is_continuous_across_steps() {
        let sol = dop853(&Sho, 0.0, [1.0, 0.0], 10.0, &Dop853Options::default()).unwrap();
        for pair in sol.dense.segments().windows(2) {
            let left = pair[0].eval(pair[0].t1());
            let right = pair[1].eval(pair[1].t0);
            for i in 0..2 {
                assert!((left[i] - right[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            dop853(&Sho, 1.0, [1.0, 0.0], 0.0, &Dop853Options::default()),
            Err(OdeError::InvalidInput)
        ));
    }

    struct Wall;
    impl OdeSystem<1> for Wall {
        type Error = &'static str;
        fn rhs(&self, _t: f64, y: &[f64; 1]) -> Result<[f64; 1], &'static str> {
            if y[0] <= 0.0 {
                Err("wall")
            } else {
                Ok([-1.0])
            }
        }
    }

    #[test]
    fn failing_rhs_is_reported_not_panicking() {
        let r = dop853(&Wall, 0.0, [1.0], 5.0, &Dop853Options::default());
        assert!(matches!(r, Err(OdeError::Rhs { .. })), "{r:?}");
    }
}
