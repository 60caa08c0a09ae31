//! Numerical integration of the oscillatory and averaged systems on uniform
//! output grids.

mod dopri;

use std::f64::consts::PI;
use std::io::Write;

pub use dopri::{solve, Options, Stats, INTEGRATOR_ID};

use crate::averaging::{AveragedSystem, ChangeOfVariables, RESIDUE_LIMIT};
use crate::error::{Error, Result};
use crate::model::{vr1_rhs, ModelParams};

pub const REFERENCE_TOL: f64 = 1e-11;
pub const AVERAGED_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryMeta {
    pub integrator: &'static str,
    pub rtol: f64,
    pub atol: f64,
    pub stats: Stats,
    /// Largest imaginary residue met while evaluating series fields.
    pub max_residue: f64,
}

/// Named series sampled at `t_j = j·h_out`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.columns[i].as_slice())
    }

    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let cols: Vec<(&str, &[f64])> = self.names.iter().map(String::as_str).zip(self.columns.iter().map(Vec::as_slice)).collect();
        write_columns(w, &self.times, &cols)
    }
}

/// CSV with header `t,<names>` and 17 significant digits per value.
pub fn write_columns<W: Write>(mut w: W, times: &[f64], columns: &[(&str, &[f64])]) -> std::io::Result<()> {
    write!(w, "t")?;
    for (name, _) in columns {
        write!(w, ",{name}")?;
    }
    writeln!(w)?;
    for (j, t) in times.iter().enumerate() {
        write!(w, "{t:.16e}")?;
        for (_, c) in columns {
            write!(w, ",{:.16e}", c[j])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Output step `2π/(Pω)`, so every sample sits on a tabulated phase.
pub fn output_step(omega: f64, phases: usize) -> f64 {
    2.0 * PI / (phases as f64 * omega)
}

/// `t_j = j·h_out` for `0 ≤ t_j ≤ t_end`.
pub fn uniform_grid(t_end: f64, h_out: f64) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Validation(format!("final time must be positive, got {t_end}")));
    }
    if !(h_out > 0.0 && h_out <= t_end) {
        return Err(Error::Validation(format!("output step {h_out} must lie in (0, {t_end}]")));
    }
    let n = (t_end / h_out + 1e-9).floor() as usize;
    Ok((0..=n).map(|j| j as f64 * h_out).collect())
}

fn meta(opts: &Options, stats: Stats, max_residue: f64) -> TrajectoryMeta {
    TrajectoryMeta { integrator: INTEGRATOR_ID, rtol: opts.rtol, atol: opts.atol, stats, max_residue }
}

/// The original oscillatory equation for `z`, started at `z0`.
pub fn integrate_reference(params: &ModelParams, t_end: f64, h_out: f64, tol: f64) -> Result<Trajectory> {
    params.validate()?;
    let times = uniform_grid(t_end, h_out)?;
    let opts = Options::with_tolerance(tol);
    let (ys, stats) = solve(|t, z: &[f64; 1]| [vr1_rhs(z[0], t, params)], [params.z0], &times, &opts)?;
    Ok(Trajectory {
        names: vec!["z".into()],
        columns: vec![ys.iter().map(|y| y[0]).collect()],
        times,
        meta: meta(&opts, stats, 0.0),
    })
}

/// The averaged system from `x0 = (Φ0, Y0)`; columns `Phi` and `Y`.
pub fn integrate_averaged(sys: &AveragedSystem, x0: [f64; 2], t_end: f64, h_out: f64, tol: f64) -> Result<Trajectory> {
    let times = uniform_grid(t_end, h_out)?;
    let opts = Options::with_tolerance(tol);
    let mut residue: f64 = 0.0;
    let (xs, stats) = solve(
        |_, x: &[f64; 2]| {
            let (v, r) = sys.eval(x[0], x[1]);
            residue = residue.max(r);
            v
        },
        x0,
        &times,
        &opts,
    )?;
    if residue > RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue { residue, limit: RESIDUE_LIMIT });
    }
    Ok(Trajectory {
        names: vec!["Phi".into(), "Y".into()],
        columns: vec![xs.iter().map(|x| x[0]).collect(), xs.iter().map(|x| x[1]).collect()],
        times,
        meta: meta(&opts, stats, residue),
    })
}

/// `z̃(t_j) = [G_{p(j)}(X(t_j))]_y + B sin ωt_j` on an averaged trajectory.
pub fn apply_change(traj: &Trajectory, cov: &ChangeOfVariables, params: &ModelParams) -> Result<Trajectory> {
    let (Some(phi), Some(y)) = (traj.column("Phi"), traj.column("Y")) else {
        return Err(Error::Validation("change of variables needs Phi and Y columns".into()));
    };
    if (cov.omega - params.omega).abs() > 1e-12 * params.omega {
        return Err(Error::PhaseMisalignment(format!(
            "phase table built for omega = {}, trajectory uses {}",
            cov.omega, params.omega
        )));
    }
    let mut z = Vec::with_capacity(traj.len());
    let mut residue: f64 = traj.meta.max_residue;
    for (j, &t) in traj.times.iter().enumerate() {
        let p = cov.phase_of(t)?;
        let (x, r) = cov.eval(p, phi[j], y[j]);
        residue = residue.max(r);
        z.push(x[1] + params.b * (params.omega * t).sin());
    }
    if residue > RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue { residue, limit: RESIDUE_LIMIT });
    }
    Ok(Trajectory {
        times: traj.times.clone(),
        names: vec!["z".into()],
        columns: vec![z],
        meta: TrajectoryMeta { max_residue: residue, ..traj.meta },
    })
}

/// `max_j |a_j - b_j|`
pub fn max_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "series of different lengths");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
