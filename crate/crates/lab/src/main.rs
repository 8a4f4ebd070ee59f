use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bergman_core::gaf::sample_configuration;
use bergman_core::moments::{asymptotic_s_n1, expectation_bracket, expectation_parts, I_N2_MAX_SHELLS};
use bergman_lab::checks::run_checks;
use bergman_lab::experiments::{run_divergence, run_lln};
use bergman_lab::report::{write_json, write_report, Tabular};
use bergman_lab::{Format, LabError, LabResult, RunConfig};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bergman-lab", version, about = "Monte Carlo and quadrature experiments for the Bergman point process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one configuration covering U_N(z) for the largest N.
    Sample,
    /// Quadrature moments of S_N for each N.
    Moments,
    /// Monte Carlo mean and variance of S_N against quadrature.
    Lln,
    /// Per-trial growth rate of ||Θ_N||.
    Divergence,
    /// Run the consistency checks; exits with status 1 on any failure.
    Check,
}

#[derive(Args)]
struct Overrides {
    /// JSON file with RunConfig fields; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    s: Option<f64>,
    /// Centre as "re,im".
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<[f64; 2]>,
    /// Comma-separated shell counts, e.g. "2,3,4".
    #[arg(long, global = true, value_delimiter = ',')]
    n_list: Option<Vec<u32>>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([p(re)?, p(im)?])
}

impl Overrides {
    fn resolve(&self) -> LabResult<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.s {
            c.s = v;
        }
        if let Some(v) = self.z {
            c.z = v;
        }
        if let Some(v) = &self.n_list {
            c.n_list = v.clone();
        }
        if let Some(v) = self.trials {
            c.trials = v;
        }
        if let Some(v) = self.seed {
            c.master_seed = v;
        }
        if let Some(v) = self.threads {
            c.threads = Some(v);
        }
        if let Some(v) = self.eps {
            c.eps_truncation = v;
        }
        if let Some(v) = &self.out {
            c.output_path = Some(v.display().to_string());
        }
        c.validate()?;
        Ok(c)
    }
}

fn output(config: &RunConfig) -> LabResult<Box<dyn Write>> {
    Ok(match &config.output_path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_out<T: Serialize + Tabular>(config: &RunConfig, format: Format, report: &T) -> LabResult<()> {
    let mut out = output(config)?;
    write_report(report, format, &mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MomentRow {
    #[serde(rename = "N")]
    n: u32,
    expectation_s_n1: f64,
    asymptotic_s_n1: f64,
    i_n1: f64,
    i_n2: f64,
    expected_s_n: f64,
    abs_error_estimate: f64,
    bracket_lower: f64,
    bracket_upper: f64,
}

#[derive(Serialize)]
struct MomentTable {
    s: f64,
    z: [f64; 2],
    rows: Vec<MomentRow>,
}

impl Tabular for MomentTable {
    fn write_csv<W: Write>(&self, out: W) -> LabResult<()> {
        use bergman_lab::report::fmt_f64;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "N",
            "expectation_s_n1",
            "asymptotic_s_n1",
            "i_n1",
            "i_n2",
            "expected_s_n",
            "abs_error_estimate",
            "bracket_lower",
            "bracket_upper",
        ])?;
        for r in &self.rows {
            let mut rec = vec![r.n.to_string()];
            rec.extend(
                [
                    r.expectation_s_n1,
                    r.asymptotic_s_n1,
                    r.i_n1,
                    r.i_n2,
                    r.expected_s_n,
                    r.abs_error_estimate,
                    r.bracket_lower,
                    r.bracket_upper,
                ]
                .map(fmt_f64),
            );
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn moments(config: &RunConfig) -> LabResult<MomentTable> {
    if config.max_n() > I_N2_MAX_SHELLS {
        return Err(LabError::Config(format!("moments are available for N <= {I_N2_MAX_SHELLS}")));
    }
    let rows = config
        .n_list
        .iter()
        .map(|&n| {
            let p = config.params(n)?;
            let parts = expectation_parts(&p)?;
            let total = parts.total();
            let (lo, hi) = expectation_bracket(&p);
            Ok(MomentRow {
                n,
                expectation_s_n1: parts.s_n1.value,
                asymptotic_s_n1: asymptotic_s_n1(&p),
                i_n1: parts.i_n1.value,
                i_n2: parts.i_n2.value,
                expected_s_n: total.value,
                abs_error_estimate: total.abs_error_estimate,
                bracket_lower: lo,
                bracket_upper: hi,
            })
        })
        .collect::<LabResult<_>>()?;
    Ok(MomentTable { s: config.s, z: config.z, rows })
}

fn run(cli: &Cli) -> LabResult<()> {
    let config = cli.opts.resolve()?;
    let format = cli.opts.format;
    match cli.command {
        Command::Sample => {
            let p = config.params(config.max_n())?;
            let c = sample_configuration(&p, config.eps_truncation, config.master_seed)?;
            let mut out = output(&config)?;
            write_json(&c, &mut out)?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Moments => write_out(&config, format, &moments(&config)?)?,
        Command::Lln => match run_lln(&config) {
            Ok(r) => write_out(&config, format, &r)?,
            Err(LabError::Partial { report, failed_at, source }) => {
                write_out(&config, format, report.as_ref())?;
                return Err(LabError::Partial { report, failed_at, source });
            }
            Err(e) => return Err(e),
        },
        Command::Divergence => write_out(&config, format, &run_divergence(&config)?)?,
        Command::Check => {
            let report = run_checks(&config);
            write_out(&config, format, &report)?;
            let failed = report.failures().count();
            for f in report.failures() {
                eprintln!("FAILED {}: {}", f.name, f.detail);
            }
            if failed > 0 {
                return Err(LabError::ChecksFailed(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
