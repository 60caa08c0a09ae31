//! Experiment drivers behind the command-line tool: the word census, the
//! error table, the figure data, averaged systems and potentials.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::algebra::{Gaussian, Mode, ZeroTest};
use crate::averaging::{build_averaged, build_change, effective_potential, well_analysis, CriticalKind, WellAnalysis};
use crate::basis::{census_with, CensusRow};
use crate::error::{Error, Result};
use crate::integrate::{
    apply_change, integrate_averaged, integrate_reference, max_error, output_step, write_columns, Trajectory,
    AVERAGED_TOL, REFERENCE_TOL,
};
use crate::model::{FourierModel, ModelParams};
use crate::words::N_MAX;

/// Largest order printed by `average` in exact mode.
pub const EXACT_AVERAGE_MAX: usize = 4;
/// Largest census order run in exact mode by default.
pub const EXACT_CENSUS_MAX: usize = 5;
/// Largest order of the default suite.
pub const DEFAULT_MAX: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// `params.b` is ignored in favour of `b_list`.
    pub params: ModelParams,
    pub b_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub t_end: f64,
    pub phases: usize,
    pub exact: bool,
    pub extended: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: ModelParams::default(),
            b_list: vec![0.52, 0.53],
            n_list: (1..=DEFAULT_MAX).collect(),
            t_end: 400.0,
            phases: 40,
            exact: false,
            extended: false,
            seed: crate::algebra::ZERO_TEST_SEED,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.b_list.is_empty() {
            return Err(Error::Validation("no value of B given".into()));
        }
        for &b in &self.b_list {
            self.params.with_b(b).validate()?;
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n == 0 || n > N_MAX) {
            return Err(Error::Validation(format!("order {n} outside 1..={N_MAX}")));
        }
        let limit = if self.extended { N_MAX } else { DEFAULT_MAX };
        if let Some(&n) = self.n_list.iter().find(|&&n| n > limit) {
            return Err(Error::Validation(format!("order {n} needs --extended (default suite stops at {DEFAULT_MAX})")));
        }
        if self.t_end.is_nan() || self.t_end <= 0.0 {
            return Err(Error::Validation(format!("final time must be positive, got {}", self.t_end)));
        }
        if self.phases == 0 {
            return Err(Error::Validation("phase table needs at least one phase".into()));
        }
        Ok(())
    }

    pub fn h_out(&self) -> f64 {
        output_step(self.params.omega, self.phases)
    }

    /// Header lines recording everything the outputs depend on.
    pub fn header(&self) -> String {
        let p = &self.params;
        format!(
            "# A={} nu={} omega={} z0={} B={:?} T={} phases={} seed={:#x}\n",
            p.a, p.nu, p.omega, p.z0, self.b_list, self.t_end, self.phases, self.seed
        )
    }
}

/// Counts of non-vanishing basis functions; `seed` drives the float-mode
/// zero test.
pub fn cmd_census(params: &ModelParams, n_max: usize, mode: Mode, seed: u64) -> Result<Vec<CensusRow>> {
    if n_max > N_MAX {
        return Err(Error::Validation(format!("census order {n_max} exceeds {N_MAX}")));
    }
    params.validate()?;
    let test = ZeroTest::new(seed);
    Ok(match mode {
        Mode::Exact => census_with(&FourierModel::exact(*params), n_max, &test),
        Mode::Float => census_with(&FourierModel::float(*params), n_max, &test),
    })
}

/// Exact arithmetic up to the default census order, floats beyond.
pub fn default_census_mode(n_max: usize) -> Mode {
    if n_max <= EXACT_CENSUS_MAX {
        Mode::Exact
    } else {
        Mode::Float
    }
}

pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut s = String::from("n,count\n");
    for r in rows {
        s.push_str(&format!("{},{}\n", r.n, r.count));
    }
    s
}

/// The reference solution and the averaged approximations for one `B`.
#[derive(Clone, Debug)]
pub struct ErrorCase {
    pub b: f64,
    pub reference: Trajectory,
    /// `(n, z̃_n, max error)`
    pub approximations: Vec<(usize, Trajectory, f64)>,
}

pub fn averaged_approximation(params: &ModelParams, n: usize, t_end: f64, phases: usize) -> Result<Trajectory> {
    let sys = build_averaged(*params, n, 0.0, Mode::Float)?;
    let traj = integrate_averaged(&sys, [0.0, params.z0], t_end, output_step(params.omega, phases), AVERAGED_TOL)?;
    let cov = build_change(&FourierModel::float(*params), n, 0.0, phases)?;
    apply_change(&traj, &cov, params)
}

pub fn error_case(config: &ExperimentConfig, b: f64) -> Result<ErrorCase> {
    let params = config.params.with_b(b);
    let reference = integrate_reference(&params, config.t_end, config.h_out(), REFERENCE_TOL)?;
    let z_ref = reference.columns[0].clone();
    let approximations = config
        .n_list
        .par_iter()
        .map(|&n| {
            let z = averaged_approximation(&params, n, config.t_end, config.phases)?;
            let err = max_error(&z_ref, &z.columns[0]);
            Ok((n, z, err))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorCase { b, reference, approximations })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub count: u64,
    /// One per entry of `b_list`.
    pub errors: Vec<f64>,
}

pub fn cmd_errors(config: &ExperimentConfig) -> Result<Vec<ErrorRow>> {
    config.validate()?;
    let n_max = config.n_list.iter().copied().max().unwrap_or(0);
    let counts = cmd_census(&config.params, n_max, default_census_mode(n_max), config.seed)?;
    let cases = config.b_list.par_iter().map(|&b| error_case(config, b)).collect::<Result<Vec<_>>>()?;
    Ok(config
        .n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| ErrorRow {
            n,
            count: counts[n - 1].count,
            errors: cases.iter().map(|c| c.approximations[i].2).collect(),
        })
        .collect())
}

pub fn errors_csv(config: &ExperimentConfig, rows: &[ErrorRow]) -> String {
    let mut s = config.header();
    s.push_str("n,count");
    for b in &config.b_list {
        s.push_str(&format!(",error_B={b}"));
    }
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{}", r.n, r.count));
        for e in &r.errors {
            s.push_str(&format!(",{e:.6e}"));
        }
        s.push('\n');
    }
    s
}

/// Figure data for one `B`: the oscillatory solution, the averaged solution
/// and its image under the change of variables.
#[derive(Clone, Debug)]
pub struct FigureData {
    pub b: f64,
    pub times: Vec<f64>,
    pub z_osc: Vec<f64>,
    /// Averaged solution mapped at the stroboscopic phase, the slowly
    /// varying centre curve.
    pub z_avg: Vec<f64>,
    /// Raw averaged `Y`.
    pub y_avg: Vec<f64>,
    /// Averaged solution mapped with the full time-dependent change of variables.
    pub z_change: Vec<f64>,
}

/// Order of the averaged system shown in the figure.
pub const FIGURE_ORDER: usize = 2;

pub fn figure_case(config: &ExperimentConfig, b: f64) -> Result<FigureData> {
    let params = config.params.with_b(b);
    let h = config.h_out();
    let reference = integrate_reference(&params, config.t_end, h, REFERENCE_TOL)?;
    let sys = build_averaged(params, FIGURE_ORDER, 0.0, Mode::Float)?;
    let traj = integrate_averaged(&sys, [0.0, params.z0], config.t_end, h, AVERAGED_TOL)?;
    let cov = build_change(&FourierModel::float(params), FIGURE_ORDER, 0.0, config.phases)?;
    let z_change = apply_change(&traj, &cov, &params)?.columns.remove(0);
    let (phi, y) = (traj.column("Phi").unwrap(), traj.column("Y").unwrap());
    let z_avg = phi.iter().zip(y).map(|(&f, &y)| cov.eval(0, f, y).0[1]).collect();
    Ok(FigureData {
        b,
        times: traj.times.clone(),
        z_osc: reference.columns[0].clone(),
        z_avg,
        y_avg: y.to_vec(),
        z_change,
    })
}

pub fn cmd_figure(config: &ExperimentConfig) -> Result<Vec<FigureData>> {
    config.validate()?;
    config.b_list.par_iter().map(|&b| figure_case(config, b)).collect()
}

impl FigureData {
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        write_columns(
            w,
            &self.times,
            &[("z_osc", &self.z_osc), ("z_avg", &self.z_avg), ("Y", &self.y_avg), ("z_change", &self.z_change)],
        )
    }

    /// Samples with `lo ≤ t ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.times.partition_point(|&t| t < lo);
        let end = self.times.partition_point(|&t| t <= hi);
        start..end
    }
}

/// Relative increment between consecutive values of `B`.
pub fn relative_increment(b_list: &[f64]) -> Option<f64> {
    match b_list {
        [a, b, ..] => Some((b - a) / a),
        _ => None,
    }
}

pub fn cmd_average(params: &ModelParams, n: usize, exact: bool) -> Result<String> {
    if exact && n > EXACT_AVERAGE_MAX {
        return Err(Error::Validation(format!(
            "exact averaged systems are printed up to {EXACT_AVERAGE_MAX} letters (expression-swell guard); use float mode for n = {n}"
        )));
    }
    let mode = if exact { Mode::Exact } else { Mode::Float };
    Ok(build_averaged(*params, n, 0.0, mode)?.to_text())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialRow {
    pub b: f64,
    pub analysis: WellAnalysis,
}

pub fn cmd_potential(params: &ModelParams, b_list: &[f64], order: usize) -> Result<Vec<PotentialRow>> {
    b_list
        .iter()
        .map(|&b| {
            let v = effective_potential(&params.with_b(b), order)?;
            Ok(PotentialRow { b, analysis: well_analysis(&v) })
        })
        .collect()
}

pub fn potential_csv(rows: &[PotentialRow]) -> String {
    let mut s = String::from("B,critical_points,depths,merged\n");
    for r in rows {
        let crit: Vec<String> = r.analysis.points.iter().map(|c| format!("{:.10}:{}", c.y, c.kind)).collect();
        let depths: Vec<String> = r
            .analysis
            .points
            .iter()
            .filter(|c| c.kind == CriticalKind::Min)
            .map(|c| c.depth.map_or("none".to_string(), |d| format!("{d:.10}")))
            .collect();
        s.push_str(&format!("{},{},{},{}\n", r.b, crit.join(" "), depths.join(" "), r.analysis.merged()));
    }
    s
}

/// `β̄_w` at `t0 = 0` for every word up to `n` letters with a non-zero value,
/// as `word,real,imag,omega_power` rows (exact rationals).
pub fn cmd_coeffs(n: usize) -> Result<String> {
    if n > N_MAX {
        return Err(Error::Validation(format!("coefficient order {n} exceeds {N_MAX}")));
    }
    let letters: Vec<i32> = (-3..=3).collect();
    let mut beta = crate::coefficients::symbolic_beta_bar();
    let mut s = String::from("word,re,im,omega_power\n");
    for w in crate::words::words_up_to(&letters, n) {
        let v = beta.get(&w);
        if !v.is_zero() {
            let Gaussian { re, im } = v.coeff;
            s.push_str(&format!("{w},{re},{im},{}\n", -(v.power as i32)));
        }
    }
    Ok(s)
}
