//! Command-line front end: design, analyze, simulate, and reproduce the
//! published reference artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use splinterp_core::bspline::{exact_sample_fractions, SplineBasis};
use splinterp_core::closed_form;
use splinterp_core::fir_lmi::{design_fir, FirDesignProblem};
use splinterp_core::lti::RationalFilter;
use splinterp_core::reconstruct::{
    butterworth_gain, butterworth_source, run_pipeline_on, sample, SimulationConfig,
};
use splinterp_core::refdata;

#[derive(Parser)]
#[command(name = "splinterp", version, about = "Causal spline interpolation filter design")]
struct Cli {
    /// Output directory for generated files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sampled FIR filter and Gram sequence of a B-spline basis.
    Basis {
        #[arg(long)]
        order: usize,
    },
    /// Design a causal direct filter.
    Design {
        #[command(subcommand)]
        which: DesignCommand,
    },
    /// Frequency responses and worst-case norms of reconstruction residuals
    /// for one or more filter files.
    Analyze(AnalyzeArgs),
    /// Run the sample/filter/hold pipeline on the demonstration signal.
    Simulate {
        /// JSON file with simulation parameters (missing fields take
        /// defaults).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Filter JSON file ({"num": [...], "den": [...]}).
        #[arg(long)]
        filter: PathBuf,
    },
    /// Regenerate a reference artifact and check it against the published
    /// values.
    Reproduce {
        /// One of: table1, table2, fig5, fig6, fig7, fig8, fig9.
        target: String,
    },
}

#[derive(Subcommand)]
enum DesignCommand {
    /// Closed-form cubic design of minimum worst-case residual.
    Cubic {
        #[arg(long)]
        delay: usize,
    },
    /// FIR design of any order via the bounded-real LMI.
    Fir {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        taps: usize,
        #[arg(long)]
        delay: usize,
        /// Weight filter JSON file (default: constant 1).
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Real points where the weighted error must vanish (e.g. 1.0 for
        /// exact DC reconstruction). Repeatable.
        #[arg(long = "zero")]
        zeros: Vec<f64>,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Spline order of the basis the filters invert.
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Reconstruction delay d of the error system z^-d - psi phi.
    #[arg(long, default_value_t = 3)]
    delay: usize,
    /// Filter JSON files. Repeatable.
    #[arg(long = "filter", required = true)]
    filters: Vec<PathBuf>,
    /// Frequency grid size.
    #[arg(long, default_value_t = 2048)]
    grid: usize,
}

#[derive(Serialize)]
struct Check {
    name: String,
    value: f64,
    expected: f64,
    tol: f64,
    pass: bool,
}

impl Check {
    fn new(name: &str, value: f64, expected: f64, tol: f64) -> Check {
        Check {
            name: name.to_string(),
            value,
            expected,
            tol,
            pass: (value - expected).abs() <= tol,
        }
    }
}

#[derive(Serialize)]
struct ReproductionManifest {
    target: String,
    outputs: Vec<String>,
    checks: Vec<Check>,
    all_pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more embedded checks failed");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    fs::create_dir_all(&cli.out)?;
    match cli.command {
        Command::Basis { order } => cmd_basis(order),
        Command::Design { which } => cmd_design(&cli.out, which),
        Command::Analyze(args) => cmd_analyze(&cli.out, &args),
        Command::Simulate { config, filter } => cmd_simulate(&cli.out, config, filter),
        Command::Reproduce { target } => cmd_reproduce(&cli.out, &target),
    }
}

fn load_filter(path: &Path) -> Result<RationalFilter, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read filter file {}: {e}", path.display()))?;
    let f: RationalFilter = serde_json::from_str(&text)?;
    RationalFilter::new(f.num, f.den).map_err(Into::into)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<String, std::io::Error> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path.display().to_string())
}

fn cmd_basis(order: usize) -> Result<bool, Box<dyn std::error::Error>> {
    let basis = SplineBasis::new(order)?;
    let gram: Vec<(i128, i128)> = basis
        .gram_sequence()
        .iter()
        .map(|q| (*q.numer(), *q.denom()))
        .collect();
    let bounds = basis.riesz_bounds(4096)?;
    let report = serde_json::json!({
        "order": order,
        "sampled_fir": basis.sampled_fir(),
        "sampled_fir_exact": exact_sample_fractions(&basis)
            .iter().map(|(n, d)| format!("{n}/{d}")).collect::<Vec<_>>(),
        "gram_sequence_exact": gram.iter().map(|(n, d)| format!("{n}/{d}")).collect::<Vec<_>>(),
        "riesz_bounds": bounds,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(true)
}

fn cmd_design(out: &Path, which: DesignCommand) -> Result<bool, Box<dyn std::error::Error>> {
    match which {
        DesignCommand::Cubic { delay } => {
            let psi = closed_form::optimal_cubic(delay);
            let value = closed_form::optimal_value(delay);
            let e = closed_form::cubic_residual(&psi, delay);
            let hinf_check = e.hinf_norm()?;
            let path = write_out(out, &format!("psi_cubic_d{delay}.json"),
                &serde_json::to_string_pretty(&psi)?)?;
            let report = serde_json::json!({
                "filter": psi,
                "filter_file": path,
                "optimal_value": value,
                "hinf_check": hinf_check,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok((hinf_check - value).abs() < 1e-5)
        }
        DesignCommand::Fir {
            order,
            taps,
            delay,
            weight,
            zeros,
        } => {
            let mut problem = FirDesignProblem::new(order, taps, delay)?;
            if let Some(wpath) = weight {
                problem = problem.with_weight(load_filter(&wpath)?)?;
            }
            if !zeros.is_empty() {
                let pts = zeros
                    .iter()
                    .map(|&v| splinterp_core::fir_lmi::real_zero(v))
                    .collect();
                problem = problem.with_zero_constraints(pts)?;
            }
            let result = design_fir(&problem)?;
            let psi = result.psi();
            let path = write_out(out, &format!("psi_fir_n{order}_t{taps}_d{delay}.json"),
                &serde_json::to_string_pretty(&psi)?)?;
            let report = serde_json::json!({
                "a": result.taps,
                "gamma": result.gamma,
                "p_min_eig": result.p_min_eig,
                "hinf_check": result.hinf_check,
                "filter_file": path,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
    }
}

fn error_filter_for(
    psi: &RationalFilter,
    order: usize,
    delay: usize,
) -> Result<RationalFilter, Box<dyn std::error::Error>> {
    let basis = SplineBasis::new(order)?;
    Ok(RationalFilter::delay(delay).sub(&psi.series(basis.sampled_fir())))
}

fn cmd_analyze(out: &Path, args: &AnalyzeArgs) -> Result<bool, Box<dyn std::error::Error>> {
    let mut norms = Vec::new();
    for path in &args.filters {
        let psi = load_filter(path)?;
        let e = error_filter_for(&psi, args.order, args.delay)?;
        let resp = e.frequency_response(args.grid)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "filter".into());
        let csv_path = write_out(out, &format!("{stem}_error_response.csv"), &resp.to_csv())?;
        let norm = e.hinf_norm()?;
        norms.push(serde_json::json!({
            "filter": path.display().to_string(),
            "response_csv": csv_path,
            "hinf_norm": norm,
            "hinf_norm_db": 20.0 * norm.log10(),
        }));
    }
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "norms": norms }))?);
    Ok(true)
}

fn cmd_simulate(
    out: &Path,
    config: Option<PathBuf>,
    filter: PathBuf,
) -> Result<bool, Box<dyn std::error::Error>> {
    let cfg: SimulationConfig = match config {
        Some(path) => serde_json::from_str(&fs::read_to_string(&path)?)?,
        None => SimulationConfig::default(),
    };
    cfg.validate()?;
    let psi = load_filter(&filter)?;
    let basis = SplineBasis::new(3)?;
    let x = butterworth_source(&cfg)?;
    let (y, metrics) = run_pipeline_on(&x, &psi, &basis, cfg.delay, cfg.transient_skip)?;

    let d_idx = cfg.delay * cfg.oversampling;
    let mut csv = String::from("t,x,x_delayed,y,e\n");
    for i in 0..x.samples.len() {
        let xd = if i >= d_idx { x.samples[i - d_idx] } else { 0.0 };
        csv.push_str(&format!(
            "{:.9},{:.9e},{:.9e},{:.9e},{:.9e}\n",
            x.time(i),
            x.samples[i],
            xd,
            y.samples[i],
            xd - y.samples[i]
        ));
    }
    let csv_path = write_out(out, "simulate.csv", &csv)?;
    let metrics_path = write_out(out, "metrics.json", &serde_json::to_string_pretty(&metrics)?)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "csv": csv_path,
            "metrics_file": metrics_path,
            "metrics": metrics,
        }))?
    );
    Ok(true)
}

fn cmd_reproduce(out: &Path, target: &str) -> Result<bool, Box<dyn std::error::Error>> {
    let manifest = match target {
        "table1" => reproduce_table1(out)?,
        "table2" => reproduce_table2(out)?,
        "fig5" => reproduce_fig5(out)?,
        "fig6" => reproduce_fig6(out)?,
        "fig7" => reproduce_fig7(out)?,
        "fig8" => reproduce_fig8(out)?,
        "fig9" => reproduce_fig9(out)?,
        other => return Err(format!("unknown reproduction target: {other}").into()),
    };
    let all_pass = manifest.all_pass;
    let path = write_out(out, &format!("{target}_manifest.json"),
        &serde_json::to_string_pretty(&manifest)?)?;
    println!("{}", serde_json::to_string_pretty(&manifest)?);
    eprintln!("manifest written to {path}");
    Ok(all_pass)
}

fn finish_manifest(target: &str, outputs: Vec<String>, checks: Vec<Check>) -> ReproductionManifest {
    let all_pass = checks.iter().all(|c| c.pass);
    ReproductionManifest {
        target: target.into(),
        outputs,
        checks,
        all_pass,
    }
}

fn reproduce_table1(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let result = design_fir(&FirDesignProblem::new(3, 5, 3)?)?;
    let mut checks = vec![Check {
        name: "gamma in published window".into(),
        value: result.gamma,
        expected: 0.0386,
        tol: 5e-4,
        pass: (0.0381..=0.0391).contains(&result.gamma),
    }];
    for (k, (got, want)) in result.taps.iter().zip(refdata::HINF_FIR_5TAP_D3).enumerate() {
        checks.push(Check::new(&format!("tap a_{k}"), *got, want, 2e-3));
    }
    let body = serde_json::json!({
        "designed": result.taps,
        "published_minimax": refdata::HINF_FIR_5TAP_D3,
        "least_squares": refdata::CLSD_5TAP_D3,
        "kaiser_window": refdata::KWA_5TAP_D3,
        "gamma": result.gamma,
    });
    let path = write_out(out, "table1.json", &serde_json::to_string_pretty(&body)?)?;
    Ok(finish_manifest("table1", vec![path], checks))
}

fn reproduce_table2(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let iir = closed_form::optimal_cubic(3);
    let rows = [
        ("minimax IIR", iir.clone(), refdata::NORM_IIR_OPT, 1e-5),
        (
            "minimax FIR (published taps)",
            RationalFilter::fir(refdata::HINF_FIR_5TAP_D3.to_vec()),
            refdata::NORM_FIR_OPT,
            1e-4,
        ),
        (
            "constrained least squares",
            RationalFilter::fir(refdata::CLSD_5TAP_D3.to_vec()),
            refdata::NORM_CLSD,
            1e-4,
        ),
        (
            "Kaiser window",
            RationalFilter::fir(refdata::KWA_5TAP_D3.to_vec()),
            refdata::NORM_KWA,
            5e-4,
        ),
    ];
    let mut checks = Vec::new();
    let mut body = Vec::new();
    for (label, psi, want, tol) in rows {
        let e = error_filter_for(&psi, 3, 3)?;
        let norm = e.hinf_norm()?;
        checks.push(Check::new(label, norm, want, tol));
        body.push(serde_json::json!({
            "method": label,
            "hinf_norm": norm,
            "hinf_norm_db": 20.0 * norm.log10(),
            "published": want,
        }));
    }
    let path = write_out(out, "table2.json", &serde_json::to_string_pretty(&body)?)?;
    Ok(finish_manifest("table2", vec![path], checks))
}

fn reproduce_fig5(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let psi = closed_form::optimal_cubic(3);
    let h = psi.impulse_response(48);
    let mut csv = String::from("n,h\n");
    for (n, v) in h.iter().enumerate() {
        csv.push_str(&format!("{n},{v:.12e}\n"));
    }
    let path = write_out(out, "fig5.csv", &csv)?;
    // tail decays with ratio alpha2
    let ratio = h[20] / h[19];
    let checks = vec![Check::new(
        "impulse tail decay ratio",
        ratio,
        closed_form::ALPHA2,
        1e-9,
    )];
    Ok(finish_manifest("fig5", vec![path], checks))
}

fn reproduce_fig6(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let filters = [
        ("iir", closed_form::optimal_cubic(3)),
        ("fir", RationalFilter::fir(refdata::HINF_FIR_5TAP_D3.to_vec())),
        ("clsd", RationalFilter::fir(refdata::CLSD_5TAP_D3.to_vec())),
        ("kwa", RationalFilter::fir(refdata::KWA_5TAP_D3.to_vec())),
    ];
    let grid = 2048usize;
    let mut columns = Vec::new();
    for (_, psi) in &filters {
        let e = error_filter_for(psi, 3, 3)?;
        columns.push(e.frequency_response(grid)?);
    }
    let mut csv = String::from("theta,mag_db_iir,mag_db_fir,mag_db_clsd,mag_db_kwa\n");
    for k in 0..grid / 2 {
        let theta = columns[0].grid[k];
        csv.push_str(&format!("{theta:.9}"));
        for col in &columns {
            csv.push_str(&format!(",{:.6}", 20.0 * col.values[k].norm().log10()));
        }
        csv.push('\n');
    }
    let path = write_out(out, "fig6.csv", &csv)?;
    let kwa_norm = error_filter_for(&filters[3].1, 3, 3)?.hinf_norm()?;
    let checks = vec![Check::new(
        "Kaiser-window peak (dB)",
        20.0 * kwa_norm.log10(),
        refdata::NORM_KWA_DB,
        0.01,
    )];
    Ok(finish_manifest("fig6", vec![path], checks))
}

fn reproduce_fig7(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let cfg = SimulationConfig {
        duration: 16.0 * std::f64::consts::PI,
        ..SimulationConfig::default()
    };
    let x = butterworth_source(&cfg)?;
    let dots = sample(&x)?;
    let mut csv = String::from("t,x\n");
    for i in 0..x.samples.len() {
        csv.push_str(&format!("{:.9},{:.9e}\n", x.time(i), x.samples[i]));
    }
    let mut dots_csv = String::from("n,x_n\n");
    for (n, v) in dots.iter().enumerate() {
        dots_csv.push_str(&format!("{n},{v:.9e}\n"));
    }
    let p1 = write_out(out, "fig7_signal.csv", &csv)?;
    let p2 = write_out(out, "fig7_samples.csv", &dots_csv)?;
    // the dots are exactly the dense signal at integer times
    let mut worst = 0.0f64;
    for (n, v) in dots.iter().enumerate() {
        let idx = n * cfg.oversampling;
        worst = worst.max((v - x.samples[idx]).abs());
    }
    let checks = vec![Check::new("sampler consistency", worst, 0.0, 1e-12)];
    Ok(finish_manifest("fig7", vec![p1, p2], checks))
}

fn reproduce_fig8(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let weight = RationalFilter::fir(vec![0.5, 0.5]);
    let mut csv = String::from("omega,butterworth_db,weight_db\n");
    let points = 600usize;
    for k in 0..=points {
        let omega = 10f64.powf(-2.0 + 3.0 * k as f64 / points as f64);
        let bg = butterworth_gain(8, 1.5, omega);
        // the weight is discrete-time: evaluate at theta = omega (1 s sampling)
        let wg = if omega <= std::f64::consts::PI {
            weight.eval_theta(omega).norm()
        } else {
            f64::NAN
        };
        csv.push_str(&format!(
            "{omega:.9},{:.6},{:.6}\n",
            20.0 * bg.log10(),
            if wg.is_nan() { f64::NAN } else { 20.0 * wg.log10() }
        ));
    }
    let path = write_out(out, "fig8.csv", &csv)?;
    let checks = vec![Check::new(
        "lowpass gain at cutoff (dB)",
        20.0 * butterworth_gain(8, 1.5, 1.5).log10(),
        -3.01,
        0.05,
    )];
    Ok(finish_manifest("fig8", vec![path], checks))
}

fn reproduce_fig9(out: &Path) -> Result<ReproductionManifest, Box<dyn std::error::Error>> {
    let basis = SplineBasis::new(3)?;
    let cfg = SimulationConfig::default();
    let clsd = RationalFilter::fir(refdata::CLSD_5TAP_D3.to_vec());
    let iir = closed_form::optimal_cubic(3);
    let weighted = design_fir(
        &FirDesignProblem::new(3, 5, 3)?
            .with_weight(RationalFilter::fir(vec![0.5, 0.5]))?,
    )?
    .psi();

    let x = butterworth_source(&cfg)?;
    let runs = [
        ("weighted", &weighted),
        ("iir", &iir),
        ("clsd", &clsd),
    ];
    let mut errors = Vec::new();
    let mut metrics = Vec::new();
    for (_, psi) in &runs {
        let (y, m) = run_pipeline_on(&x, psi, &basis, cfg.delay, cfg.transient_skip)?;
        let d_idx = cfg.delay * cfg.oversampling;
        let e: Vec<f64> = (0..x.samples.len())
            .map(|i| {
                let xd = if i >= d_idx { x.samples[i - d_idx] } else { 0.0 };
                xd - y.samples[i]
            })
            .collect();
        errors.push(e);
        metrics.push(m);
    }
    // plot window: the first 8 square-wave periods
    let window = ((16.0 * std::f64::consts::PI) / x.step) as usize;
    let mut csv = String::from("t,e_weighted,e_iir,e_clsd\n");
    let rows = window.min(x.samples.len());
    for (i, ((e0, e1), e2)) in errors[0][..rows]
        .iter()
        .zip(&errors[1][..rows])
        .zip(&errors[2][..rows])
        .enumerate()
    {
        csv.push_str(&format!(
            "{:.9},{e0:.9e},{e1:.9e},{e2:.9e}\n",
            x.time(i)
        ));
    }
    let p1 = write_out(out, "fig9.csv", &csv)?;
    let body: Vec<_> = runs
        .iter()
        .zip(&metrics)
        .map(|((label, _), m)| serde_json::json!({"filter": label, "l2_error": m.l2_error, "nsr": m.nsr}))
        .collect();
    let p2 = write_out(out, "fig9_metrics.json", &serde_json::to_string_pretty(&body)?)?;

    let mut checks = vec![
        Check::new("weighted FIR L2", metrics[0].l2_error, refdata::SIM_L2_WEIGHTED_FIR,
            0.20 * refdata::SIM_L2_WEIGHTED_FIR),
        Check::new("unweighted IIR L2", metrics[1].l2_error, refdata::SIM_L2_IIR_OPT,
            0.20 * refdata::SIM_L2_IIR_OPT),
        Check::new("least-squares L2", metrics[2].l2_error, refdata::SIM_L2_CLSD,
            0.20 * refdata::SIM_L2_CLSD),
    ];
    checks.push(Check {
        name: "strict ordering weighted < iir < clsd".into(),
        value: if metrics[0].l2_error < metrics[1].l2_error
            && metrics[1].l2_error < metrics[2].l2_error
        {
            1.0
        } else {
            0.0
        },
        expected: 1.0,
        tol: 0.0,
        pass: metrics[0].l2_error < metrics[1].l2_error
            && metrics[1].l2_error < metrics[2].l2_error,
    });
    Ok(finish_manifest("fig9", vec![p1, p2], checks))
}
