//! ε-ladder experiments: regimes, scalings, slope fits and limit comparisons.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::format_float;
use crate::constants::{c_p, k_closed, k_p, sphere_moment};
use crate::error::{Error, Result};
use crate::geometry::{BaseDomain, FractionalParams, ThinFilm};
use crate::kernelquad::{self, Engine, QuadratureSpec};
use crate::testfns::{reference_seminorm_1d, TestFunction};

/// Absolute tolerance for deciding `s = 1/p`.
pub const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    Vertical,
    SubCritical,
    Critical,
    SuperCritical,
    #[serde(rename = "bbm-limit")]
    BbmLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub label: RegimeLabel,
    /// `λ` in `E ≈ L · ε^λ`, evaluated at the nominal `s`.
    pub scaling_exponent: f64,
    pub log_correction: bool,
    pub predicted_limit_descriptor: String,
}

impl Regime {
    /// Normalisation `λ(ε)` at the exponent `s` used on that rung.
    pub fn scale(&self, eps: f64, s: f64, p: f64) -> f64 {
        match self.label {
            RegimeLabel::Vertical => eps.powf(1.0 - s * p),
            RegimeLabel::SubCritical => eps * eps,
            RegimeLabel::Critical => eps * eps * eps.ln().abs(),
            RegimeLabel::SuperCritical => eps.powf(1.0 + p - s * p),
            RegimeLabel::BbmLimit => eps.powf(1.0 + p - s * p) / (1.0 - s),
        }
    }

    /// Exponent of `ε` in the normalisation at exponent `s`.
    pub fn exponent_at(&self, s: f64, p: f64) -> f64 {
        match self.label {
            RegimeLabel::Vertical => 1.0 - s * p,
            RegimeLabel::SubCritical | RegimeLabel::Critical => 2.0,
            RegimeLabel::SuperCritical | RegimeLabel::BbmLimit => 1.0 + p - s * p,
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeLabel::Vertical => "vertical",
            RegimeLabel::SubCritical => "sub-critical",
            RegimeLabel::Critical => "critical",
            RegimeLabel::SuperCritical => "super-critical",
            RegimeLabel::BbmLimit => "bbm-limit",
        })
    }
}

/// Dimension-reduction regime of `(s, p)`: sub-critical below `s = 1/p`,
/// critical at it, super-critical above.
pub fn classify_regime(params: &FractionalParams) -> Regime {
    let (s, p) = (params.s, params.p);
    let gap = s - 1.0 / p;
    if gap.abs() <= CRITICAL_TOL {
        Regime {
            label: RegimeLabel::Critical,
            scaling_exponent: 2.0,
            log_correction: true,
            predicted_limit_descriptor: "∫_{S^{d-2}}|ν₁|^p · ∫_ω|∇'u|^p (σ_{d-1}/(d-1) · Dirichlet for p = 2)".into(),
        }
    } else if gap < 0.0 {
        Regime {
            label: RegimeLabel::SubCritical,
            scaling_exponent: 2.0,
            log_correction: false,
            predicted_limit_descriptor: "⌊u⌋^p_{s+1/p}(ω)".into(),
        }
    } else {
        Regime {
            label: RegimeLabel::SuperCritical,
            scaling_exponent: 1.0 + p - s * p,
            log_correction: false,
            predicted_limit_descriptor: "K_{s,d;p}/(1-s) · ∫_ω|∇'u|^p".into(),
        }
    }
}

/// First scaling `ε^{1-sp}`, valid for every `(s, p)`.
pub fn vertical_regime(params: &FractionalParams) -> Regime {
    Regime {
        label: RegimeLabel::Vertical,
        scaling_exponent: 1.0 - params.s * params.p,
        log_correction: false,
        predicted_limit_descriptor: "C_{s,d;p} · ∫_ω ⌊v(x',·)⌋^p_s(0,1) dx'".into(),
    }
}

/// `s_ε → 1` with normalisation `ε^{1+p-sp}/(1-s)`.
pub fn bbm_regime(params: &FractionalParams) -> Regime {
    Regime {
        label: RegimeLabel::BbmLimit,
        scaling_exponent: 1.0 + params.p - params.s * params.p,
        log_correction: false,
        predicted_limit_descriptor: "½ ∫_{S^{d-1}}|ν₁|^p · ∫_ω|∇'u|^p (σ_d/(2d) · Dirichlet for p = 2)".into(),
    }
}

/// The two readings of the critical constant for `∫_ω |∇'u|^p = 1`:
/// the full moment `∫_{S^{d-2}} |ν₁|^p` (for `p = 2`, `σ_{d-1}/(d-1)`) and
/// half of it.
pub fn critical_candidates(d: u32, p: f64) -> Result<(f64, f64)> {
    let full = sphere_moment(d - 1, p)?;
    Ok((full, 0.5 * full))
}

fn planar_compatible(f: &TestFunction, regime: &Regime) -> Result<TestFunction> {
    if !f.is_planar() {
        return Err(Error::usage(format!(
            "{f} varies in the thin direction; the {} limit is only defined for planar functions",
            regime.label
        )));
    }
    Ok(f.clone())
}

/// The limit of `E(ε)/λ(ε)` predicted for `f` in `regime`, on the base `base`.
pub fn predicted_limit(
    f: &TestFunction,
    params: &FractionalParams,
    regime: &Regime,
    base: &BaseDomain,
) -> Result<f64> {
    f.check_dimension(params.d)?;
    let (s, d, p) = (params.s, params.d, params.p);
    match regime.label {
        RegimeLabel::Vertical => {
            if let Some((g, c)) = f.vertical_part() {
                let reference = reference_seminorm_1d(g, s, p)?;
                Ok(c_p(s, d, p)? * base.measure() * c.abs().powf(p) * reference.value)
            } else if f.is_constant() {
                Ok(0.0)
            } else {
                Err(Error::usage(format!("{f} has no vertical component; the first-scaling limit is trivial")))
            }
        }
        RegimeLabel::SubCritical => {
            let f = planar_compatible(f, regime)?;
            let spec = QuadratureSpec::default();
            Ok(kernelquad::planar_seminorm(&f, base, s + 1.0 / p, p, &spec)?.value)
        }
        RegimeLabel::Critical => {
            let f = planar_compatible(f, regime)?;
            let (full, _) = critical_candidates(d, p)?;
            Ok(full * f.dirichlet_planar(base, p)?)
        }
        RegimeLabel::SuperCritical => {
            let f = planar_compatible(f, regime)?;
            let k = if p == 2.0 { k_closed(s, d)? } else { k_p(s, d, p)? };
            Ok(k / (1.0 - s) * f.dirichlet_planar(base, p)?)
        }
        RegimeLabel::BbmLimit => {
            let f = planar_compatible(f, regime)?;
            Ok(0.5 * sphere_moment(d, p)? * f.dirichlet_planar(base, p)?)
        }
    }
}

/// `ε ↦ s_ε`.
#[derive(Clone)]
pub enum SSchedule {
    Const(f64),
    /// `s_ε = 1 - 1/log²(1/ε)`, so `ε^{1-s_ε} → 1`.
    BbmLog2,
    /// `s_ε = 1 - 1/|log ε|`, so `ε^{1-s_ε} = e^{-1}`.
    BbmLog,
    Custom {
        name: String,
        s_of_eps: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        /// Whether `s_ε → 1`.
        to_one: bool,
    },
}

impl SSchedule {
    pub fn s_at(&self, eps: f64) -> f64 {
        match self {
            SSchedule::Const(s) => *s,
            SSchedule::BbmLog2 => 1.0 - 1.0 / eps.ln().powi(2),
            SSchedule::BbmLog => 1.0 - 1.0 / eps.ln().abs(),
            SSchedule::Custom { s_of_eps, .. } => s_of_eps(eps),
        }
    }

    pub fn tends_to_one(&self) -> bool {
        match self {
            SSchedule::Const(_) => false,
            SSchedule::BbmLog2 | SSchedule::BbmLog => true,
            SSchedule::Custom { to_one, .. } => *to_one,
        }
    }
}

impl fmt::Debug for SSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SSchedule::Const(s) => write!(f, "const:{s}"),
            SSchedule::BbmLog2 => write!(f, "bbm-log2"),
            SSchedule::BbmLog => write!(f, "bbm-log"),
            SSchedule::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

impl std::str::FromStr for SSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bbm-log2" => Ok(SSchedule::BbmLog2),
            "bbm-log" => Ok(SSchedule::BbmLog),
            other => match other.strip_prefix("const:") {
                Some(v) => v
                    .parse()
                    .map(SSchedule::Const)
                    .map_err(|_| Error::Parse(format!("bad schedule value in '{other}'"))),
                None => Err(Error::Parse(format!(
                    "unknown schedule '{other}' (expected const:<s>, bbm-log2 or bbm-log)"
                ))),
            },
        }
    }
}

/// `ε = 2^{-k}` for `k = k_from..=k_to`.
pub fn dyadic_ladder(k_from: i32, k_to: i32) -> Vec<f64> {
    (k_from..=k_to).map(|k| 2f64.powi(-k)).collect()
}

/// Dyadic ladder from `eps_from` down to `eps_to`, halving each time.
pub fn ladder_between(eps_from: f64, eps_to: f64) -> Result<Vec<f64>> {
    if !(eps_from > 0.0 && eps_from <= 1.0 && eps_to > 0.0 && eps_to < eps_from) {
        return Err(Error::usage(format!("need 1 >= eps_from > eps_to > 0, got {eps_from} and {eps_to}")));
    }
    let mut v = vec![eps_from];
    while *v.last().expect("nonempty") * 0.5 >= eps_to * (1.0 - 1e-12) {
        v.push(v.last().expect("nonempty") * 0.5);
    }
    Ok(v)
}

/// Ordinary least squares slope and intercept of `y` against `x`.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFit {
    /// Slope of `E(ε)/ε²` against `|log ε|`.
    pub log_coefficient: f64,
    pub intercept: f64,
    /// `∫_{S^{d-2}}|ν₁|^p · Dirichlet`; `σ_{d-1}/(d-1) · Dirichlet` for `p = 2`.
    pub full_moment_constant: f64,
    /// Half of the above.
    pub half_moment_constant: f64,
    pub relative_error_full: f64,
    pub relative_error_half: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub d: u32,
    pub p: f64,
    pub schedule: String,
    pub engine: Engine,
    pub regime: Regime,
    pub eps_ladder: Vec<f64>,
    pub s_values: Vec<f64>,
    pub raw_energies: Vec<f64>,
    pub raw_errors: Vec<f64>,
    pub scaled_energies: Vec<f64>,
    /// OLS slope of `log E` against `log ε`; absent when degenerate.
    pub fitted_slope: Option<f64>,
    /// Slope between the last two rungs.
    pub tail_slope: Option<f64>,
    pub predicted_slope: f64,
    pub predicted_limit: Option<f64>,
    /// Scaled value at the smallest `ε`.
    pub extrapolated_limit: f64,
    /// Two-point Richardson value in the leading correction order, when known.
    pub richardson_limit: Option<f64>,
    pub relative_error: Option<f64>,
    pub degenerate: bool,
    pub critical: Option<CriticalFit>,
    /// `(1-s_ε) E/ε` on BBM sweeps.
    pub expansion_scaled: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

impl ConvergenceReport {
    /// CSV with columns `eps, raw, scaled, predicted`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let predicted = self.predicted_limit.map(format_float).unwrap_or_else(|| "n/a".into());
        w.write_record(["eps", "raw", "scaled", "predicted"]).expect("in-memory write");
        for i in 0..self.eps_ladder.len() {
            w.write_record([
                format_float(self.eps_ladder[i]),
                format_float(self.raw_energies[i]),
                format_float(self.scaled_energies[i]),
                predicted.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

/// A sweep that stopped early; `partial` holds the rungs that finished.
#[derive(Debug, Clone)]
pub struct SweepError {
    pub error: Error,
    pub partial: Box<ConvergenceReport>,
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (after {} of the requested rungs)",
            self.error,
            self.partial.raw_energies.len()
        )
    }
}

impl std::error::Error for SweepError {}

impl From<SweepError> for Error {
    fn from(e: SweepError) -> Self {
        e.error
    }
}

pub type SweepResult = std::result::Result<ConvergenceReport, SweepError>;

/// Leading relative correction order of the scaled energy, where known.
/// On the first scaling the lateral boundary layer of width `ε` dominates.
fn correction_order(label: RegimeLabel, s: f64, p: f64) -> Option<f64> {
    match label {
        RegimeLabel::Vertical => Some(1.0),
        RegimeLabel::SubCritical | RegimeLabel::SuperCritical => Some((p - 1.0 - s * p).abs()).filter(|q| *q > 0.0),
        RegimeLabel::Critical | RegimeLabel::BbmLimit => None,
    }
}

fn sweep_regime(f: &TestFunction, params: &FractionalParams, schedule: &SSchedule) -> Regime {
    if schedule.tends_to_one() {
        bbm_regime(params)
    } else if f.vertical_part().is_some() && f.is_vertical() {
        vertical_regime(params)
    } else {
        classify_regime(params)
    }
}

/// Runs `f` down the ladder and fits the scaling.
///
/// The regime is the first scaling for vertical families, the BBM limit when
/// the schedule tends to 1, and [`classify_regime`] otherwise. At the
/// critical exponent the report also carries a [`CriticalFit`].
pub fn run_sweep(
    f: &TestFunction,
    params: &FractionalParams,
    eps_ladder: &[f64],
    spec: &QuadratureSpec,
    s_schedule: Option<&SSchedule>,
) -> SweepResult {
    let schedule = s_schedule.cloned().unwrap_or(SSchedule::Const(params.s));
    let regime = sweep_regime(f, params, &schedule);
    let base = match BaseDomain::unit_for_dimension(params.d) {
        Ok(b) => b,
        Err(e) => return Err(empty_failure(e, f, params, &schedule, spec, regime)),
    };
    let mut report = empty_report(f, params, &schedule, spec, regime.clone());
    if eps_ladder.len() < 4 {
        return Err(SweepError {
            error: Error::usage(format!("a sweep needs at least 4 rungs, got {}", eps_ladder.len())),
            partial: Box::new(report),
        });
    }
    if eps_ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(SweepError {
            error: Error::usage("the ε ladder must be strictly decreasing"),
            partial: Box::new(report),
        });
    }
    let p = params.p;
    for &eps in eps_ladder {
        let s = schedule.s_at(eps);
        let step = (|| -> Result<(f64, f64)> {
            let rung_params = params.with_s(s)?;
            let film = ThinFilm::new(base.clone(), eps)?;
            let e = kernelquad::seminorm(f, &film, &rung_params, spec)?;
            Ok((e.value, e.error))
        })();
        match step {
            Ok((value, error)) => {
                report.eps_ladder.push(eps);
                report.s_values.push(s);
                report.raw_energies.push(value);
                report.raw_errors.push(error);
                report.scaled_energies.push(value / regime.scale(eps, s, p));
            }
            Err(error) => {
                return Err(SweepError {
                    error,
                    partial: Box::new(report),
                })
            }
        }
    }
    finish_report(&mut report, f, params, &schedule, &base);
    Ok(report)
}

fn empty_report(
    f: &TestFunction,
    params: &FractionalParams,
    schedule: &SSchedule,
    spec: &QuadratureSpec,
    regime: Regime,
) -> ConvergenceReport {
    ConvergenceReport {
        function: f.to_string(),
        d: params.d,
        p: params.p,
        schedule: schedule.to_string(),
        engine: spec.engine,
        regime,
        eps_ladder: Vec::new(),
        s_values: Vec::new(),
        raw_energies: Vec::new(),
        raw_errors: Vec::new(),
        scaled_energies: Vec::new(),
        fitted_slope: None,
        tail_slope: None,
        predicted_slope: 0.0,
        predicted_limit: None,
        extrapolated_limit: f64::NAN,
        richardson_limit: None,
        relative_error: None,
        degenerate: false,
        critical: None,
        expansion_scaled: None,
        notes: Vec::new(),
    }
}

fn empty_failure(
    error: Error,
    f: &TestFunction,
    params: &FractionalParams,
    schedule: &SSchedule,
    spec: &QuadratureSpec,
    regime: Regime,
) -> SweepError {
    SweepError {
        error,
        partial: Box::new(empty_report(f, params, schedule, spec, regime)),
    }
}

fn finish_report(
    report: &mut ConvergenceReport,
    f: &TestFunction,
    params: &FractionalParams,
    schedule: &SSchedule,
    base: &BaseDomain,
) {
    let p = params.p;
    let n = report.eps_ladder.len();
    let s_last = report.s_values[n - 1];
    report.predicted_slope = report.regime.exponent_at(s_last, p);
    report.extrapolated_limit = report.scaled_energies[n - 1];
    report.regime.scaling_exponent = report.predicted_slope;

    let (lo, hi) = ((1.0 / p).min(1.0 - 1.0 / p), (1.0 / p).max(1.0 - 1.0 / p));
    if report.regime.label != RegimeLabel::Vertical && lo < hi && s_last > lo && s_last < hi {
        report.notes.push(format!(
            "s = {s_last} lies between 1/p and 1-1/p: the {} limit constant is infinite here \
             (K_{{s,d;p}} needs p(1-s) < 1, the planar seminorm needs s + 1/p < 1)",
            report.regime.label
        ));
    }
    let limit_params = FractionalParams { s: s_last, ..*params };
    match predicted_limit(f, &limit_params, &report.regime, base) {
        Ok(v) => report.predicted_limit = Some(v),
        Err(e) => report.notes.push(format!("predicted limit unavailable: {e}")),
    }

    if report.raw_energies.iter().any(|v| *v <= 0.0) {
        report.degenerate = true;
        report.notes.push("zero energy on some rung: slope fit skipped".into());
    } else {
        let x: Vec<f64> = report.eps_ladder.iter().map(|e| e.ln()).collect();
        let y: Vec<f64> = report.raw_energies.iter().map(|e| e.ln()).collect();
        report.fitted_slope = Some(ols(&x, &y).0);
        report.tail_slope = Some((y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]));
    }

    if matches!(schedule, SSchedule::Const(_)) {
        if let Some(q) = correction_order(report.regime.label, s_last, p) {
            let ratio = report.eps_ladder[n - 2] / report.eps_ladder[n - 1];
            let r = ratio.powf(q);
            report.richardson_limit =
                Some((r * report.scaled_energies[n - 1] - report.scaled_energies[n - 2]) / (r - 1.0));
        }
    }

    if let Some(pred) = report.predicted_limit {
        if pred > 0.0 {
            report.relative_error = Some((report.extrapolated_limit - pred).abs() / pred);
        } else if pred == 0.0 && report.degenerate {
            report.relative_error = Some(0.0);
        }
    }

    if report.regime.label == RegimeLabel::Critical && !report.degenerate {
        let x: Vec<f64> = report.eps_ladder.iter().map(|e| e.ln().abs()).collect();
        let y: Vec<f64> = report
            .eps_ladder
            .iter()
            .zip(&report.raw_energies)
            .map(|(e, v)| v / (e * e))
            .collect();
        let (slope, intercept) = ols(&x, &y);
        let dirichlet = f.dirichlet_planar(base, p).unwrap_or(f64::NAN);
        if let Ok((full, half)) = critical_candidates(params.d, p) {
            let (full, half) = (full * dirichlet, half * dirichlet);
            report.critical = Some(CriticalFit {
                log_coefficient: slope,
                intercept,
                full_moment_constant: full,
                half_moment_constant: half,
                relative_error_full: (slope - full).abs() / full,
                relative_error_half: (slope - half).abs() / half,
            });
        }
    }

    if report.regime.label == RegimeLabel::BbmLimit {
        report.expansion_scaled = Some(
            report
                .eps_ladder
                .iter()
                .zip(&report.s_values)
                .zip(&report.raw_energies)
                .map(|((e, s), v)| (1.0 - s) * v / e)
                .collect(),
        );
    }
}

/// Sweep at `s = 1/p` with the `E/ε²` against `|log ε|` fit attached.
pub fn critical_sweep(
    f: &TestFunction,
    d: u32,
    p: f64,
    eps_ladder: &[f64],
    spec: &QuadratureSpec,
) -> SweepResult {
    let params = FractionalParams::new(d, 1.0 / p, p).map_err(|error| SweepError {
        partial: Box::new(empty_report(
            f,
            &FractionalParams { d, s: 1.0 / p, p },
            &SSchedule::Const(1.0 / p),
            spec,
            classify_regime(&FractionalParams { d, s: 1.0 / p, p }),
        )),
        error,
    })?;
    run_sweep(f, &params, eps_ladder, spec, None)
}

/// Sweep along a schedule `s_ε → 1`, scaled by `(1-s_ε)/ε^{1+p-s_ε p}`.
pub fn bbm_sweep(
    f: &TestFunction,
    d: u32,
    p: f64,
    eps_ladder: &[f64],
    s_schedule: &SSchedule,
    spec: &QuadratureSpec,
) -> SweepResult {
    let s0 = s_schedule.s_at(eps_ladder.first().copied().unwrap_or(0.5));
    let params = FractionalParams { d, s: s0, p };
    if !s_schedule.tends_to_one() {
        return Err(SweepError {
            error: Error::usage(format!("schedule {s_schedule} does not tend to 1")),
            partial: Box::new(empty_report(f, &params, s_schedule, spec, bbm_regime(&params))),
        });
    }
    run_sweep(f, &params, eps_ladder, spec, Some(s_schedule))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub function: String,
    pub eps_ladder: Vec<f64>,
    pub raw_energies: Vec<f64>,
    /// Coefficient of `ε^{1-sp}`.
    pub first_scale_term: f64,
    /// Predicted coefficient of the second scale; absent for purely vertical sums.
    pub second_scale_term: Option<f64>,
    pub second_regime: Regime,
    pub first_terms: Vec<f64>,
    /// `raw - first_term` per rung.
    pub residual_trace: Vec<f64>,
    /// `residual / λ₂(ε)` per rung.
    pub residual_scaled: Vec<f64>,
    pub notes: Vec<String>,
}

/// Two-scale decomposition of the energy of a planar + vertical sum.
///
/// This is descriptive: the expansion holds in the variational sense, so
/// cross terms between the two members are expected in the residual.
pub fn expansion_report(
    f: &TestFunction,
    params: &FractionalParams,
    eps_ladder: &[f64],
    spec: &QuadratureSpec,
) -> Result<ExpansionReport> {
    let crate::testfns::Family::Sum { .. } = f.family else {
        return Err(Error::usage(format!("{f} is not a planar + vertical sum")));
    };
    let base = BaseDomain::unit_for_dimension(params.d)?;
    let (s, p) = (params.s, params.p);
    let vregime = vertical_regime(params);
    let first = predicted_limit(f, params, &vregime, &base)?;
    let second_regime = classify_regime(params);
    let planar = f.planar_part().expect("sum has a planar member");
    let mut notes = vec![
        "cross terms between the members are expected in the residual".to_string(),
        "the first term carries a relative O(ε) lateral boundary correction, which dominates λ₂ when λ₁ ε ≫ λ₂".to_string(),
    ];
    let second = if planar.is_constant() {
        notes.push("planar member is constant: second-term comparison skipped".into());
        None
    } else {
        match predicted_limit(&planar, params, &second_regime, &base) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("second-term prediction unavailable: {e}"));
                None
            }
        }
    };
    let mut report = ExpansionReport {
        function: f.to_string(),
        eps_ladder: Vec::new(),
        raw_energies: Vec::new(),
        first_scale_term: first,
        second_scale_term: second,
        second_regime: second_regime.clone(),
        first_terms: Vec::new(),
        residual_trace: Vec::new(),
        residual_scaled: Vec::new(),
        notes,
    };
    for &eps in eps_ladder {
        let film = ThinFilm::new(base.clone(), eps)?;
        let raw = kernelquad::seminorm(f, &film, params, spec)?.value;
        let first_term = vregime.scale(eps, s, p) * first;
        let residual = raw - first_term;
        report.eps_ladder.push(eps);
        report.raw_energies.push(raw);
        report.first_terms.push(first_term);
        report.residual_trace.push(residual);
        report.residual_scaled.push(residual / second_regime.scale(eps, s, p));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{c_closed, surface_measure};
    use crate::testfns::Profile;
    use std::f64::consts::PI;

    fn params(d: u32, s: f64, p: f64) -> FractionalParams {
        FractionalParams::new(d, s, p).unwrap()
    }

    #[test]
    fn classification_examples() {
        let r = classify_regime(&params(2, 0.3, 2.0));
        assert_eq!(r.label, RegimeLabel::SubCritical);
        assert_eq!(r.scaling_exponent, 2.0);
        let r = classify_regime(&params(2, 0.5, 2.0));
        assert_eq!(r.label, RegimeLabel::Critical);
        assert!(r.log_correction);
        let r = classify_regime(&params(3, 0.75, 2.0));
        assert_eq!(r.label, RegimeLabel::SuperCritical);
        assert!((r.scaling_exponent - 1.5).abs() < 1e-15);
        assert_eq!(classify_regime(&params(2, 0.25, 4.0)).label, RegimeLabel::Critical);
    }

    #[test]
    fn predicted_limit_examples() {
        let line = BaseDomain::unit_interval();
        let v = TestFunction::vertical(Profile::Linear);
        let pp = params(2, 0.5, 2.0);
        let got = predicted_limit(&v, &pp, &vertical_regime(&pp), &line).unwrap();
        assert!((got - 2.0).abs() < 1e-13);

        let f = TestFunction::planar_linear(vec![1.0]);
        let pp = params(2, 0.75, 2.0);
        let got = predicted_limit(&f, &pp, &classify_regime(&pp), &line).unwrap();
        assert!((got - k_closed(0.75, 2).unwrap() / 0.25).abs() < 1e-13);

        let pp = params(2, 0.2, 2.0);
        let got = predicted_limit(&f, &pp, &classify_regime(&pp), &line).unwrap();
        assert!((got - 1.0 / (0.3 * 1.6)).abs() < 1e-12);

        assert!(matches!(
            predicted_limit(&v, &pp, &classify_regime(&pp), &line),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            predicted_limit(&f, &pp, &vertical_regime(&pp), &line),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn critical_candidates_match_surface_measures() {
        let (full, half) = critical_candidates(2, 2.0).unwrap();
        assert!((full - surface_measure(1).unwrap()).abs() < 1e-14);
        assert!((half - 1.0).abs() < 1e-14);
        let (full, _) = critical_candidates(3, 2.0).unwrap();
        assert!((full - PI).abs() < 1e-14);
    }

    #[test]
    fn blow_up_matching_on_constants() {
        // (2s-1) K_{s,d} and (1-s_eff) ⌊x⌋_{s_eff} both tend to σ_{d-1}/(2(d-1)) · Dirichlet
        let k = (2.0 * 0.51 - 1.0) * k_closed(0.51, 2).unwrap();
        assert!((k - 1.0).abs() < 0.02);
        let f = TestFunction::planar_linear(vec![1.0]);
        let sub = kernelquad::planar_seminorm(&f, &BaseDomain::unit_interval(), 0.99, 2.0, &QuadratureSpec::default())
            .unwrap()
            .value;
        assert!((0.01 * sub - 1.0).abs() <= 0.02);
        assert!(c_closed(0.51, 2).unwrap().is_finite());
    }

    #[test]
    fn ladders_and_schedules() {
        let l = ladder_between(0.125, 2f64.powi(-10)).unwrap();
        assert_eq!(l.len(), 8);
        assert_eq!(l, dyadic_ladder(3, 10));
        assert!(ladder_between(0.1, 0.2).is_err());
        let s: SSchedule = "bbm-log".parse().unwrap();
        let eps = 2f64.powi(-10);
        assert!((eps.powf(1.0 - s.s_at(eps)) - (-1.0f64).exp()).abs() < 1e-12);
        assert!(matches!("const:0.3".parse::<SSchedule>().unwrap(), SSchedule::Const(v) if v == 0.3));
        assert!("bbm-fast".parse::<SSchedule>().is_err());
    }

    #[test]
    fn constant_sweep_is_degenerate() {
        let f = TestFunction::constant(1.0);
        let r = run_sweep(&f, &params(2, 0.75, 2.0), &dyadic_ladder(3, 6), &QuadratureSpec::graded_grid(8), None).unwrap();
        assert!(r.degenerate);
        assert!(r.fitted_slope.is_none());
        assert!(r.raw_energies.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sweep_failure_keeps_partial_report() {
        let f = TestFunction::planar_linear(vec![1.0, 0.0]);
        let err = run_sweep(&f, &params(3, 0.75, 2.0), &dyadic_ladder(3, 6), &QuadratureSpec::graded_grid(8), None)
            .unwrap_err();
        assert!(matches!(err.error, Error::Unsupported(_)));
        assert!(err.partial.raw_energies.is_empty());
        let short = run_sweep(&f, &params(3, 0.75, 2.0), &dyadic_ladder(3, 4), &QuadratureSpec::graded_grid(8), None);
        assert!(matches!(short.unwrap_err().error, Error::Usage(_)));
    }

    #[test]
    fn supercritical_sweep_limit() {
        let f = TestFunction::planar_linear(vec![1.0]);
        let r = run_sweep(&f, &params(2, 0.75, 2.0), &dyadic_ladder(3, 10), &QuadratureSpec::graded_grid(16), None).unwrap();
        assert!(r.relative_error.unwrap() < 0.1);
        assert!(r.richardson_limit.is_some());
    }

    #[test]
    fn expansion_projections() {
        let pp = params(2, 0.75, 2.0);
        let ladder = dyadic_ladder(3, 7);
        let spec = QuadratureSpec::graded_grid(16);
        let planar_only = TestFunction::sum(
            TestFunction::planar_linear(vec![1.0]),
            TestFunction::vertical(Profile::Linear).scaled(0.0),
        )
        .unwrap();
        let r = expansion_report(&planar_only, &pp, &ladder, &spec).unwrap();
        assert_eq!(r.first_scale_term, 0.0);
        let sweep = run_sweep(&TestFunction::planar_linear(vec![1.0]), &pp, &ladder, &spec, None).unwrap();
        for (a, b) in r.residual_scaled.iter().zip(&sweep.scaled_energies) {
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
        let vertical_only =
            TestFunction::sum(TestFunction::constant(0.0), TestFunction::vertical(Profile::Linear)).unwrap();
        let r = expansion_report(&vertical_only, &pp, &ladder, &spec).unwrap();
        assert!(r.second_scale_term.is_none());
        let sweep = run_sweep(&TestFunction::vertical(Profile::Linear), &pp, &ladder, &spec, None).unwrap();
        for ((raw, e), scaled) in r.raw_energies.iter().zip(&ladder).zip(&sweep.scaled_energies) {
            let v = raw / e.powf(1.0 - 2.0 * 0.75);
            assert!((v - scaled).abs() <= 1e-12 * scaled);
        }
        assert!(expansion_report(&TestFunction::planar_linear(vec![1.0]), &pp, &ladder, &spec).is_err());
    }
}
