//! Browser demo bindings: thin JSON-in/JSON-out wrappers over the design and
//! simulation library, suitable for a static page with no framework. Every
//! export returns a JSON string so the page side stays a few lines of
//! vanilla JavaScript.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use splinterp_core::bspline::SplineBasis;
use splinterp_core::closed_form;
use splinterp_core::fir_lmi::{design_fir, FirDesignProblem};
use splinterp_core::lti::RationalFilter;
use splinterp_core::reconstruct::{butterworth_source, run_pipeline_on, SimulationConfig};
use splinterp_core::refdata;

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct DesignReport {
    label: String,
    num: Vec<f64>,
    den: Vec<f64>,
    gamma: f64,
    optimal_value: Option<f64>,
    /// |E(e^{j theta})| in dB over [0, pi].
    error_magnitude_db: Curve,
    impulse: Curve,
    error: Option<String>,
}

fn error_curve(psi: &RationalFilter, order: usize, delay: usize, grid: usize) -> Curve {
    let basis = SplineBasis::new(order).expect("valid order");
    let e = RationalFilter::delay(delay).sub(&psi.series(basis.sampled_fir()));
    let mut x = Vec::with_capacity(grid);
    let mut y = Vec::with_capacity(grid);
    for k in 0..grid {
        let theta = std::f64::consts::PI * k as f64 / (grid - 1) as f64;
        x.push(theta);
        y.push(20.0 * e.eval_theta(theta).norm().log10());
    }
    Curve { x, y }
}

fn impulse_curve(psi: &RationalFilter, len: usize) -> Curve {
    let h = psi.impulse_response(len);
    Curve {
        x: (0..h.len()).map(|n| n as f64).collect(),
        y: h,
    }
}

fn report_to_json(r: &DesignReport) -> String {
    serde_json::to_string(r).unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
}

/// Closed-form cubic design for a given reconstruction delay.
#[wasm_bindgen]
pub fn demo_design_cubic(delay: usize) -> String {
    let psi = closed_form::optimal_cubic(delay);
    let report = DesignReport {
        label: format!("closed-form cubic, delay {delay}"),
        num: psi.num.clone(),
        den: psi.den.clone(),
        gamma: closed_form::optimal_value(delay),
        optimal_value: Some(closed_form::optimal_value(delay)),
        error_magnitude_db: error_curve(&psi, 3, delay, 256),
        impulse: impulse_curve(&psi, 32),
        error: None,
    };
    report_to_json(&report)
}

/// FIR design via the bounded-real LMI; runs the interior-point solver in
/// the browser. `weighted` applies the half-band averaging weight,
/// `dc_zero` forces exact DC reconstruction.
#[wasm_bindgen]
pub fn demo_design_fir(
    order: usize,
    taps: usize,
    delay: usize,
    weighted: bool,
    dc_zero: bool,
) -> String {
    let build = || -> Result<DesignReport, String> {
        let mut problem =
            FirDesignProblem::new(order, taps, delay).map_err(|e| e.to_string())?;
        if weighted {
            problem = problem
                .with_weight(RationalFilter::fir(vec![0.5, 0.5]))
                .map_err(|e| e.to_string())?;
        }
        if dc_zero {
            problem = problem
                .with_zero_constraints(vec![splinterp_core::fir_lmi::real_zero(1.0)])
                .map_err(|e| e.to_string())?;
        }
        let result = design_fir(&problem).map_err(|e| e.to_string())?;
        let psi = result.psi();
        Ok(DesignReport {
            label: format!(
                "{taps}-tap FIR, order {order}, delay {delay}{}{}",
                if weighted { ", weighted" } else { "" },
                if dc_zero { ", DC-exact" } else { "" }
            ),
            num: psi.num.clone(),
            den: psi.den.clone(),
            gamma: result.gamma,
            optimal_value: None,
            error_magnitude_db: error_curve(&psi, order, delay, 256),
            impulse: impulse_curve(&psi, taps),
            error: None,
        })
    };
    match build() {
        Ok(r) => report_to_json(&r),
        Err(e) => format!("{{\"error\":{}}}", serde_json::to_string(&e).unwrap()),
    }
}

#[derive(Serialize)]
struct SimulationReport {
    t: Vec<f64>,
    x_delayed: Vec<f64>,
    y: Vec<f64>,
    e: Vec<f64>,
    l2_error: f64,
    nsr: f64,
    label: String,
    error: Option<String>,
}

/// Sample/filter/hold reconstruction of the demonstration signal with one of
/// the built-in filters: "cubic", "fir", "weighted", or "clsd".
#[wasm_bindgen]
pub fn demo_simulate(filter_kind: String, periods: usize, delay: usize) -> String {
    let build = || -> Result<SimulationReport, String> {
        let periods = periods.clamp(2, 16);
        let cfg = SimulationConfig {
            duration: 2.0 * std::f64::consts::PI * periods as f64,
            oversampling: 64,
            delay,
            transient_skip: 2.0 * std::f64::consts::PI,
            ..SimulationConfig::default()
        };
        let (psi, label) = match filter_kind.as_str() {
            "cubic" => (closed_form::optimal_cubic(delay), "closed-form cubic IIR"),
            "fir" => {
                let r = design_fir(&FirDesignProblem::new(3, 5, delay).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                (r.psi(), "5-tap minimax FIR")
            }
            "weighted" => {
                let r = design_fir(
                    &FirDesignProblem::new(3, 5, delay)
                        .map_err(|e| e.to_string())?
                        .with_weight(RationalFilter::fir(vec![0.5, 0.5]))
                        .map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                (r.psi(), "5-tap weighted FIR")
            }
            "clsd" => (
                RationalFilter::fir(refdata::CLSD_5TAP_D3.to_vec()),
                "published least-squares FIR",
            ),
            other => return Err(format!("unknown filter kind: {other}")),
        };
        let basis = SplineBasis::new(3).map_err(|e| e.to_string())?;
        let x = butterworth_source(&cfg).map_err(|e| e.to_string())?;
        let (y, metrics) =
            run_pipeline_on(&x, &psi, &basis, delay, cfg.transient_skip).map_err(|e| e.to_string())?;

        // decimate to keep the payload plot-sized
        let stride = 4usize;
        let d_idx = delay * cfg.oversampling;
        let mut t = Vec::new();
        let mut xd = Vec::new();
        let mut yv = Vec::new();
        let mut ev = Vec::new();
        for i in (0..x.samples.len()).step_by(stride) {
            let xdel = if i >= d_idx { x.samples[i - d_idx] } else { 0.0 };
            t.push(x.time(i));
            xd.push(xdel);
            yv.push(y.samples[i]);
            ev.push(xdel - y.samples[i]);
        }
        Ok(SimulationReport {
            t,
            x_delayed: xd,
            y: yv,
            e: ev,
            l2_error: metrics.l2_error,
            nsr: metrics.nsr,
            label: label.to_string(),
            error: None,
        })
    };
    match build() {
        Ok(r) => serde_json::to_string(&r).unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}")),
        Err(e) => format!("{{\"error\":{}}}", serde_json::to_string(&e).unwrap()),
    }
}
