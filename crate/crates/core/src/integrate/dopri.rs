//! Dormand–Prince 5(4) with PI step control and Hairer's dense output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const SAFE: f64 = 0.9;
/// Step ratio bounds `fac1 ≤ h_new/h ≤ fac2`.
const FAC1: f64 = 0.2;
const FAC2: f64 = 10.0;

pub const INTEGRATOR_ID: &str = "dopri5";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    /// Steps below this size abort the integration.
    pub h_min: f64,
    pub max_steps: usize,
}

impl Options {
    pub fn with_tolerance(tol: f64) -> Self {
        Options { rtol: tol, atol: tol, ..Default::default() }
    }
}

impl Default for Options {
    fn default() -> Self {
        Options { rtol: 1e-10, atol: 1e-10, h_min: 1e-12, max_steps: 50_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn initial_step<const D: usize, F: FnMut(f64, &[f64; D]) -> [f64; D]>(
    f: &mut F,
    t: f64,
    y: &[f64; D],
    k1: &[f64; D],
    opts: &Options,
    h_max: f64,
    stats: &mut Stats,
) -> f64 {
    let sk = |i: usize| opts.atol + opts.rtol * y[i].abs();
    let rms = |v: &[f64; D]| ((0..D).map(|i| (v[i] / sk(i)).powi(2)).sum::<f64>() / D as f64).sqrt();
    let (dnf, dny) = (rms(k1), rms(y));
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * dny / dnf };
    h = h.min(h_max);
    let y1 = axpy(y, h, &[(1.0, k1)]);
    let k2 = f(t + h, &y1);
    stats.evals += 1;
    let mut diff = [0.0; D];
    for i in 0..D {
        diff[i] = k2[i] - k1[i];
    }
    let der2 = rms(&diff) / h;
    let der12 = der2.max(dnf);
    let h1 = if der12 <= 1e-15 { (1e-6f64).max(h * 1e-3) } else { (0.01 / der12).powf(0.2) };
    (100.0 * h).min(h1).min(h_max)
}

/// Integrates `y' = f(t, y)` from `t = 0` and samples the dense output on
/// `grid` (ascending, starting at 0, ending at the final time).
pub fn solve<const D: usize, F>(mut f: F, y0: [f64; D], grid: &[f64], opts: &Options) -> Result<(Vec<[f64; D]>, Stats)>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    let mut stats = Stats::default();
    let mut out = Vec::with_capacity(grid.len());
    let Some(&t_end) = grid.last() else {
        return Ok((out, stats));
    };
    let mut t = grid[0];
    let mut y = y0;
    let mut next = 0;
    while next < grid.len() && grid[next] <= t {
        out.push(y);
        next += 1;
    }
    if t >= t_end {
        return Ok((out, stats));
    }
    let mut k1 = f(t, &y);
    stats.evals += 1;
    let h_max = t_end - t;
    let mut h = initial_step(&mut f, t, &y, &k1, opts, h_max, &mut stats);
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;

    while t < t_end {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::TooManySteps { t, max_steps: opts.max_steps });
        }
        if h < opts.h_min {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let last = t + 1.01 * h >= t_end;
        if last {
            h = t_end - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let y6 = axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let t_new = if last { t_end } else { t + h };
        let k6 = f(t_new, &y6);
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t_new, &y1);
        stats.evals += 6;

        let mut err = 0.0;
        for i in 0..D {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sk).powi(2);
        }
        let err = (err / D as f64).sqrt();
        if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
            if h * FAC1 < opts.h_min {
                return Err(Error::NonFinite { t });
            }
            h *= FAC1;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }

        let fac11 = err.powf(EXPO1);
        let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(1.0 / FAC2, 1.0 / FAC1);
        let mut h_new = h / fac;

        if err <= 1.0 {
            facold = err.max(1e-4);
            stats.accepted += 1;
            // dense output on [t, t_new]
            let mut rcont = [[0.0; D]; 5];
            for i in 0..D {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k7[i] - bspl;
                rcont[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while next < grid.len() && (grid[next] <= t_new || last) {
                let theta = (grid[next] - t) / h;
                let theta1 = 1.0 - theta;
                let mut v = [0.0; D];
                for i in 0..D {
                    v[i] = rcont[0][i]
                        + theta * (rcont[1][i] + theta1 * (rcont[2][i] + theta * (rcont[3][i] + theta1 * rcont[4][i])));
                }
                out.push(v);
                next += 1;
            }
            t = t_new;
            y = y1;
            k1 = k7;
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            h_new = h / (fac11 / SAFE).min(1.0 / FAC1);
            stats.rejected += 1;
            last_rejected = true;
            h = h_new;
        }
    }
    debug_assert_eq!(out.len(), grid.len());
    Ok((out, stats))
}
