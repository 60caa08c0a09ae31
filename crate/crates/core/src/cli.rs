//! Command-line interface: argument and config-file handling, dispatch to
//! the experiment drivers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::algebra::Mode;
use crate::error::{Error, Result};
use crate::experiment::{self, ExperimentConfig, DEFAULT_MAX, EXACT_CENSUS_MAX};
use crate::integrate::{
    apply_change, integrate_averaged, integrate_reference, write_columns, AVERAGED_TOL, REFERENCE_TOL,
};
use crate::model::{FourierModel, ModelParams};
use crate::words::N_MAX;

#[derive(Parser, Debug)]
#[command(name = "wordavg", version, about = "High-order stroboscopic averaging with word series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Count words whose basis function does not vanish.
    Census,
    /// Print the averaged system built from words of up to n letters.
    Average,
    /// Integrate the oscillatory and averaged problems for one B.
    Simulate,
    /// Maximum errors of the averaged approximations (Table layout).
    Errors,
    /// Oscillatory and averaged solutions for each B.
    Figure,
    /// Critical points and well depths of the effective potential.
    Potential {
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Averaged-field coefficients at t0 = 0.
    Coeffs,
}

#[derive(Args, Debug, Clone, Default, PartialEq)]
pub struct GlobalArgs {
    /// Slow forcing amplitude.
    #[arg(long = "A", global = true)]
    pub a: Option<f64>,
    /// Vibration size(s), comma separated.
    #[arg(long = "B", global = true, value_delimiter = ',')]
    pub b: Option<Vec<f64>>,
    /// Vibration amplitude; sets B = C/omega.
    #[arg(long = "C", global = true)]
    pub c: Option<f64>,
    #[arg(long, global = true)]
    pub nu: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z0: Option<f64>,
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    /// Word lengths, comma separated; commands that need one value use the largest.
    #[arg(long, global = true, value_delimiter = ',')]
    pub letters: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub phases: Option<usize>,
    #[arg(long, global = true)]
    pub exact: bool,
    #[arg(long, global = true)]
    pub extended: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the settings above; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Settings accepted in a config file, e.g. `B = [0.52, 0.53]`.
#[derive(Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub nu: Option<f64>,
    pub omega: Option<f64>,
    pub z0: Option<f64>,
    pub t_end: Option<f64>,
    pub letters: Option<Vec<usize>>,
    pub phases: Option<usize>,
    pub exact: Option<bool>,
    pub extended: Option<bool>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Validation(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

/// Command-line values merged over the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub config: ExperimentConfig,
    /// Word lengths given explicitly, if any.
    pub letters: Option<Vec<usize>>,
}

pub fn resolve(args: &GlobalArgs, file: &FileConfig) -> Result<Settings> {
    let defaults = ExperimentConfig::default();
    let d = defaults.params;
    let omega = args.omega.or(file.omega).unwrap_or(d.omega);
    let c = args.c.or(file.c);
    let b = args.b.clone().or(file.b.clone());
    let b_list = match (b, c) {
        (Some(_), Some(_)) => return Err(Error::Validation("give either B or C, not both".into())),
        (Some(b), None) => b,
        (None, Some(c)) => vec![c / omega],
        (None, None) => defaults.b_list.clone(),
    };
    let params = ModelParams {
        a: args.a.or(file.a).unwrap_or(d.a),
        b: b_list.first().copied().unwrap_or(d.b),
        nu: args.nu.or(file.nu).unwrap_or(d.nu),
        omega,
        z0: args.z0.or(file.z0).unwrap_or(d.z0),
    };
    let extended = args.extended || file.extended.unwrap_or(false);
    let letters = args.letters.clone().or(file.letters.clone());
    let n_list = letters.clone().unwrap_or_else(|| (1..=if extended { N_MAX } else { DEFAULT_MAX }).collect());
    let config = ExperimentConfig {
        params,
        b_list,
        n_list,
        t_end: args.t_end.or(file.t_end).unwrap_or(defaults.t_end),
        phases: args.phases.or(file.phases).unwrap_or(defaults.phases),
        exact: args.exact || file.exact.unwrap_or(false),
        extended,
        seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
        out: args.out.clone().or(file.out.clone()),
    };
    config.params.validate()?;
    Ok(Settings { config, letters })
}

impl Settings {
    fn max_letters(&self, default: usize) -> usize {
        self.letters.as_ref().and_then(|l| l.iter().copied().max()).unwrap_or(default)
    }
}

/// Writes `text` to `out/name`, or to standard output.
fn emit(out: Option<&Path>, name: &str, text: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), text)?;
            eprintln!("wrote {}", dir.join(name).display());
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

pub fn run(cli: &Cli) -> Result<()> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let settings = resolve(&cli.global, &file)?;
    let cfg = &settings.config;
    for w in cfg.params.warnings() {
        eprintln!("warning: {w}");
    }
    let out = cfg.out.as_deref();
    match &cli.command {
        Command::Census => {
            let n = settings.max_letters(if cfg.extended { N_MAX } else { EXACT_CENSUS_MAX });
            let mode = if cfg.exact { Mode::Exact } else { experiment::default_census_mode(n) };
            let rows = experiment::cmd_census(&cfg.params, n, mode, cfg.seed)?;
            let text = format!("# mode={mode} seed={:#x}\n{}", cfg.seed, experiment::census_csv(&rows));
            emit(out, "census.csv", &text)
        }
        Command::Average => {
            let n = settings.max_letters(2);
            let text = experiment::cmd_average(&cfg.params, n, cfg.exact)?;
            emit(out, &format!("averaged_n{n}.txt"), &text)
        }
        Command::Simulate => {
            let n = settings.max_letters(2);
            let p = cfg.params;
            let h = cfg.h_out();
            let reference = integrate_reference(&p, cfg.t_end, h, REFERENCE_TOL)?;
            let sys = crate::averaging::build_averaged(p, n, 0.0, Mode::Float)?;
            let avg = integrate_averaged(&sys, [0.0, p.z0], cfg.t_end, h, AVERAGED_TOL)?;
            let cov = crate::averaging::build_change(&FourierModel::float(p), n, 0.0, cfg.phases)?;
            let z = apply_change(&avg, &cov, &p)?;
            eprintln!(
                "steps: reference {} averaged {}",
                reference.meta.stats.accepted, avg.meta.stats.accepted
            );
            let text = csv_string(|buf| {
                write!(buf, "{}", cfg.header())?;
                write_columns(
                    buf,
                    &reference.times,
                    &[
                        ("z_ref", &reference.columns[0]),
                        ("Phi", avg.column("Phi").unwrap()),
                        ("Y", avg.column("Y").unwrap()),
                        ("z_tilde", &z.columns[0]),
                    ],
                )
            })?;
            emit(out, &format!("simulate_B{}_n{n}.csv", p.b), &text)
        }
        Command::Errors => {
            let rows = experiment::cmd_errors(cfg)?;
            emit(out, "errors.csv", &experiment::errors_csv(cfg, &rows))
        }
        Command::Figure => {
            let data = experiment::cmd_figure(cfg)?;
            let mut summary = String::from("B,max_Y_100_400,min_Y_100_400\n");
            for d in &data {
                let w = d.window(100.0, cfg.t_end.min(400.0));
                let ys = &d.y_avg[w];
                let max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = ys.iter().copied().fold(f64::INFINITY, f64::min);
                summary.push_str(&format!("{},{max:.6},{min:.6}\n", d.b));
                if out.is_some() {
                    let text = csv_string(|buf| {
                        write!(buf, "{}", cfg.header())?;
                        d.write_csv(buf)
                    })?;
                    emit(out, &format!("figure_B{}.csv", d.b), &text)?;
                }
            }
            if let Some(inc) = experiment::relative_increment(&cfg.b_list) {
                summary.push_str(&format!("# relative increment in B: {:.1}%\n", 100.0 * inc));
            }
            emit(out, "figure_summary.csv", &summary)
        }
        Command::Potential { order } => {
            let rows = experiment::cmd_potential(&cfg.params, &cfg.b_list, *order)?;
            emit(out, &format!("potential_order{order}.csv"), &experiment::potential_csv(&rows))
        }
        Command::Coeffs => {
            let n = settings.max_letters(3);
            emit(out, &format!("coeffs_n{n}.csv"), &experiment::cmd_coeffs(n)?)
        }
    }
}
