use std::fmt;

use crate::algebra::{Gaussian, Monomial, Rational, TrigPoly, DIM};
use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::AveragedSystem;

/// Curvature below which a critical point is reported as marginal.
pub const MARGINAL_CURVATURE: f64 = 1e-10;

/// Effective potential of the averaged `Y` equation, in `Y`, `B` and `ω^{-1}`,
/// normalised by `V(0) = 0`.
pub fn symbolic_potential(order: usize) -> Result<TrigPoly<Gaussian>> {
    let t = |j: u8, b: u8, p: u8, num: i128, den: i128| {
        (Monomial::new(0, j, 0, b, 0, p), Gaussian::real(Rational::new(num, den)))
    };
    let mut terms = vec![t(2, 0, 0, -1, 2), t(2, 2, 0, 3, 4), t(4, 0, 0, 1, 4)];
    match order {
        1 => {}
        2 => terms.extend([
            t(1, 1, 1, -1, 1),
            t(1, 3, 1, 13, 6),
            t(1, 5, 1, -1, 1),
            t(3, 3, 1, 5, 6),
            t(5, 1, 1, -3, 5),
        ]),
        _ => return Err(Error::Validation(format!("effective potential of order {order} is not available (1 or 2)"))),
    }
    Ok(TrigPoly::from_terms(terms))
}

/// Real polynomial in `Y`, coefficients by ascending power.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub coeffs: Vec<f64>,
}

impl Potential {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Potential { coeffs }
    }

    /// Minus the antiderivative (vanishing at 0) of the `Φ`-independent part
    /// of the averaged `Y` equation.
    pub fn from_averaged(sys: &AveragedSystem) -> Self {
        let mut force = Vec::new();
        for &(mono, c) in sys.field().components[DIM - 1].terms() {
            if mono.m == 0 {
                let j = mono.j as usize;
                if force.len() <= j {
                    force.resize(j + 1, 0.0);
                }
                force[j] += c.re;
            }
        }
        let mut coeffs = vec![0.0];
        coeffs.extend(force.iter().enumerate().map(|(j, f)| -f / (j + 1) as f64));
        Potential::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    pub fn derivative(&self) -> Potential {
        Potential::new(self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect())
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| match j {
                0 => format!("{c:e}"),
                1 => format!("{c:e}*Y"),
                _ => format!("{c:e}*Y^{j}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The order-1 or order-2 effective potential at the given parameters.
pub fn effective_potential(params: &ModelParams, order: usize) -> Result<Potential> {
    let sym = symbolic_potential(order)?;
    let mut coeffs = vec![0.0; 6];
    for (mono, c) in sym.substitute(&params.point()).terms() {
        coeffs[mono.j as usize] += c.re;
    }
    Ok(Potential::new(coeffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    Min,
    Max,
    Marginal,
}

impl fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriticalKind::Min => "min",
            CriticalKind::Max => "max",
            CriticalKind::Marginal => "marginal",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub y: f64,
    pub kind: CriticalKind,
    pub value: f64,
    /// For minima: height of the lowest separating maximum above the minimum.
    pub depth: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WellAnalysis {
    pub points: Vec<CriticalPoint>,
}

impl WellAnalysis {
    pub fn minima(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|c| c.kind == CriticalKind::Min)
    }

    /// `true` when at most one well remains.
    pub fn merged(&self) -> bool {
        self.minima().count() <= 1
    }
}

fn bisect(p: &Potential, mut a: f64, mut b: f64) -> f64 {
    let mut fa = p.eval(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Real roots in `[lo, hi]`, bracketed between consecutive roots of the
/// derivative. Double roots are found where `|p|` vanishes at a critical point.
fn real_roots(p: &Potential, lo: f64, hi: f64) -> Vec<f64> {
    match p.degree() {
        0 => return Vec::new(),
        1 => {
            let r = -p.coeffs[0] / p.coeffs[1];
            return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
        }
        _ => {}
    }
    let scale = p.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max) * lo.abs().max(hi.abs()).max(1.0).powi(p.degree() as i32);
    let crit = real_roots(&p.derivative(), lo, hi);
    let mut knots = vec![lo];
    knots.extend(&crit);
    knots.push(hi);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (p.eval(a), p.eval(b));
        if fa.abs() <= 1e-14 * scale {
            roots.push(a);
        } else if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            roots.push(bisect(p, a, b));
        }
    }
    if p.eval(hi).abs() <= 1e-14 * scale {
        roots.push(hi);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots
}

/// Critical points of `V` on `[-3, 3]` (widened until one is found), with
/// type and well depth.
pub fn well_analysis(v: &Potential) -> WellAnalysis {
    let dv = v.derivative();
    let ddv = dv.derivative();
    let mut half = 3.0;
    let mut roots = real_roots(&dv, -half, half);
    while roots.is_empty() && half < 1e6 && dv.degree() > 0 {
        half *= 4.0;
        roots = real_roots(&dv, -half, half);
    }
    let mut points: Vec<CriticalPoint> = roots
        .into_iter()
        .map(|y| {
            let curv = ddv.eval(y);
            let kind = if curv > MARGINAL_CURVATURE {
                CriticalKind::Min
            } else if curv < -MARGINAL_CURVATURE {
                CriticalKind::Max
            } else {
                CriticalKind::Marginal
            };
            CriticalPoint { y, kind, value: v.eval(y), depth: None }
        })
        .collect();
    let min_idx: Vec<usize> = (0..points.len()).filter(|&i| points[i].kind == CriticalKind::Min).collect();
    for (n, &i) in min_idx.iter().enumerate() {
        // the highest point between this minimum and each neighbouring minimum
        let barrier = |range: std::ops::Range<usize>| {
            points[range]
                .iter()
                .filter(|c| c.kind == CriticalKind::Max)
                .map(|c| c.value)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let mut barriers = Vec::new();
        if n > 0 {
            barriers.push(barrier(min_idx[n - 1] + 1..i));
        }
        if n + 1 < min_idx.len() {
            barriers.push(barrier(i + 1..min_idx[n + 1]));
        }
        let lowest = barriers.into_iter().filter(|b| b.is_finite()).fold(f64::INFINITY, f64::min);
        if lowest.is_finite() {
            points[i].depth = Some(lowest - points[i].value);
        }
    }
    WellAnalysis { points }
}
