//! Acceptance criteria 1 to 12, grouped into suites.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    bbm_sweep, classify_regime, critical_sweep, dyadic_ladder, run_sweep, RegimeLabel, SSchedule,
};
use crate::constants::{
    c_closed, c_quadrature, i_one_closed, i_one_quadrature, j_recursion_residual, k_closed, k_p, k_quadrature,
    relative_gap, surface_measure,
};
use crate::error::{Error, Result};
use crate::geometry::{BaseDomain, FractionalParams, ThinFilm};
use crate::kernelquad::{self, QuadratureSpec};
use crate::testfns::{Profile, TestFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Constants,
    Scaling,
    Limits,
    Critical,
    Bbm,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Constants => &[1, 2, 3],
            Suite::Scaling => &[5, 10, 12],
            Suite::Limits => &[4, 6, 7, 11],
            Suite::Critical => &[8],
            Suite::Bbm => &[9],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constants" => Suite::Constants,
            "scaling" => Suite::Scaling,
            "limits" => Suite::Limits,
            "critical" => Suite::Critical,
            "bbm" => Suite::Bbm,
            "all" => Suite::All,
            other => {
                return Err(Error::Parse(format!(
                    "unknown suite '{other}' (expected constants, scaling, limits, critical, bbm or all)"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Constants => "constants",
            Suite::Scaling => "scaling",
            Suite::Limits => "limits",
            Suite::Critical => "critical",
            Suite::Bbm => "bbm",
            Suite::All => "all",
        })
    }
}

/// `Full` runs the stated ladders and sample counts; `Quick` shrinks them
/// for smoke runs and keeps the tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Quick,
    Full,
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Budget::Quick),
            "full" => Ok(Budget::Full),
            other => Err(Error::Parse(format!("unknown budget '{other}' (expected quick or full)"))),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Budget::Quick => "quick",
            Budget::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// One assertion inside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    /// Wall-clock seconds per criterion; excluded from reproducibility comparisons.
    pub elapsed_seconds: BTreeMap<u8, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub budget: Budget,
    pub passed: bool,
    pub failed: Vec<u8>,
    pub results: Vec<CriterionResult>,
    pub metadata: RunMetadata,
}

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
    metrics: BTreeMap<String, f64>,
    notes: Vec<String>,
}

impl Recorder {
    /// `|value - target| <= tol`, absolute.
    fn abs(&mut self, label: impl Into<String>, value: f64, target: f64, tol: f64) -> bool {
        let passed = (value - target).abs() <= tol;
        self.push(label.into(), value, target, tol, passed)
    }

    /// `|value - target| / |target| <= tol`.
    fn rel(&mut self, label: impl Into<String>, value: f64, target: f64, tol: f64) -> bool {
        let passed = relative_gap(target, value) <= tol;
        self.push(label.into(), value, target, tol, passed)
    }

    /// `value <= bound`.
    fn at_most(&mut self, label: impl Into<String>, value: f64, bound: f64) -> bool {
        let passed = value <= bound;
        self.push(label.into(), value, bound, 0.0, passed)
    }

    fn truth(&mut self, label: impl Into<String>, ok: bool) -> bool {
        self.push(label.into(), ok as u8 as f64, 1.0, 0.0, ok)
    }

    fn push(&mut self, label: String, value: f64, target: f64, tolerance: f64, passed: bool) -> bool {
        self.checks.push(Check {
            label,
            value,
            target,
            tolerance,
            passed: passed && value.is_finite(),
        });
        passed
    }

    fn metric(&mut self, key: impl Into<String>, v: f64) {
        self.metrics.insert(key.into(), v);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn(&mut Recorder, Budget) -> Result<()>,
}

const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "constants closed form vs quadrature", limit: Duration::from_secs(10), run: c1_constants },
    Criterion { id: 2, name: "appendix identities", limit: Duration::from_secs(5), run: c2_identities },
    Criterion { id: 3, name: "blow-up matching at the critical exponent", limit: Duration::from_secs(30), run: c3_blow_up },
    Criterion { id: 4, name: "first-scaling limit", limit: Duration::from_secs(300), run: c4_first_scaling },
    Criterion { id: 5, name: "scaling exponents", limit: Duration::from_secs(600), run: c5_slopes },
    Criterion { id: 6, name: "super-critical limit", limit: Duration::from_secs(300), run: c6_super },
    Criterion { id: 7, name: "sub-critical limit", limit: Duration::from_secs(300), run: c7_sub },
    Criterion { id: 8, name: "critical regime coefficient", limit: Duration::from_secs(600), run: c8_critical },
    Criterion { id: 9, name: "thin-film limit as s -> 1", limit: Duration::from_secs(300), run: c9_bbm },
    Criterion { id: 10, name: "general p", limit: Duration::from_secs(600), run: c10_general_p },
    Criterion { id: 11, name: "engine agreement", limit: Duration::from_secs(600), run: c11_engines },
    Criterion { id: 12, name: "property suite", limit: Duration::from_secs(300), run: c12_properties },
];

/// Runs one criterion by number.
pub fn run_criterion(id: u8, budget: Budget) -> Result<(CriterionResult, f64)> {
    let c = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::usage(format!("no criterion {id}; criteria are numbered 1 to 12")))?;
    let mut rec = Recorder::default();
    let start = Instant::now();
    let outcome = (c.run)(&mut rec, budget);
    let elapsed = start.elapsed();
    let mut passed = outcome.is_ok() && !rec.checks.is_empty() && rec.checks.iter().all(|k| k.passed);
    let failing: Vec<&str> = rec.checks.iter().filter(|k| !k.passed).map(|k| k.label.as_str()).collect();
    let mut detail = if let Err(e) = &outcome {
        format!("evaluation failed: {e}")
    } else if failing.is_empty() {
        format!("{} checks passed", rec.checks.len())
    } else {
        format!("failed: {}", failing.join("; "))
    };
    if elapsed > c.limit {
        passed = false;
        detail.push_str(&format!("; runtime {:.1} s exceeds {} s", elapsed.as_secs_f64(), c.limit.as_secs()));
    }
    if !rec.notes.is_empty() {
        detail.push_str(&format!(" [{}]", rec.notes.join("; ")));
    }
    Ok((
        CriterionResult {
            id,
            name: c.name.to_string(),
            passed,
            detail,
            metrics: rec.metrics,
            checks: rec.checks,
        },
        elapsed.as_secs_f64(),
    ))
}

/// Runs every criterion of `suite`, calling `on_result` as each finishes.
pub fn run_suite(suite: Suite, budget: Budget, mut on_result: impl FnMut(&CriterionResult)) -> Result<VerifyReport> {
    let mut results = Vec::new();
    let mut elapsed_seconds = BTreeMap::new();
    for &id in suite.criteria() {
        let (r, t) = run_criterion(id, budget)?;
        on_result(&r);
        elapsed_seconds.insert(id, t);
        results.push(r);
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    Ok(VerifyReport {
        suite,
        budget,
        passed: failed.is_empty(),
        failed,
        results,
        metadata: RunMetadata { elapsed_seconds },
    })
}

fn grid(budget: Budget) -> QuadratureSpec {
    QuadratureSpec::graded_grid(match budget {
        Budget::Quick => 8,
        Budget::Full => 16,
    })
}

fn mc_samples(budget: Budget) -> u64 {
    match budget {
        Budget::Quick => 1_000_000,
        Budget::Full => 10_000_000,
    }
}

fn film(d: u32, eps: f64) -> Result<ThinFilm> {
    ThinFilm::new(BaseDomain::unit_for_dimension(d)?, eps)
}

fn s_grid(from: f64) -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).filter(|s| *s >= from - 1e-12).collect()
}

fn c1_constants(rec: &mut Recorder, _: Budget) -> Result<()> {
    let mut worst_c: f64 = 0.0;
    let mut worst_k: f64 = 0.0;
    let mut worst_ck: f64 = 0.0;
    for d in [2, 3] {
        for s in s_grid(0.05) {
            let c = c_closed(s, d)?;
            worst_c = worst_c.max(relative_gap(c, c_quadrature(s, d)?));
            if s > 0.525 {
                let k = k_closed(s, d)?;
                worst_k = worst_k.max(relative_gap(k, k_quadrature(s, d)?));
                worst_ck = worst_ck.max((k * (2.0 * s - 1.0) * (3.0 - 2.0 * s) / c - 1.0).abs());
            }
        }
    }
    rec.at_most("max relative gap C closed vs quadrature", worst_c, 1e-8);
    rec.at_most("max relative gap K closed vs quadrature", worst_k, 1e-8);
    rec.at_most("max |K(2s-1)(3-2s)/C - 1|", worst_ck, 1e-8);
    rec.metric("c_gap", worst_c);
    rec.metric("k_gap", worst_k);
    rec.metric("ck_identity_gap", worst_ck);
    Ok(())
}

fn c2_identities(rec: &mut Recorder, _: Budget) -> Result<()> {
    let mut worst: f64 = 0.0;
    for s in [0.25, 0.5, 0.75] {
        for d in [4, 5] {
            worst = worst.max(j_recursion_residual(s, d)?);
        }
    }
    rec.at_most("max J recursion residual", worst, 1e-8);
    rec.metric("j_residual", worst);
    for d in [2, 3] {
        let gap = relative_gap(i_one_closed(d)?, i_one_quadrature(d)?);
        rec.at_most(format!("I^1_{d} identity"), gap, 1e-8);
        rec.metric(format!("i_one_gap_d{d}"), gap);
        let ratio = k_closed(0.999, d)? * 2.0 * d as f64 / surface_measure(d)?;
        rec.abs(format!("K(0.999,{d})·2d/σ_d"), ratio, 1.0, 5e-3);
        rec.metric(format!("k_limit_ratio_d{d}"), ratio);
    }
    Ok(())
}

fn c3_blow_up(rec: &mut Recorder, _: Budget) -> Result<()> {
    for d in [2, 3] {
        let target = surface_measure(d - 1)? / (2.0 * (d - 1) as f64);
        let v = (2.0 * 0.51 - 1.0) * k_closed(0.51, d)?;
        rec.rel(format!("(2s-1)K at s=0.51, d={d}"), v, target, 2e-2);
        rec.metric(format!("super_side_d{d}"), v);
    }
    let f = TestFunction::planar_linear(vec![1.0]);
    let base = BaseDomain::unit_interval();
    let sub = kernelquad::planar_seminorm(&f, &base, 0.99, 2.0, &QuadratureSpec::default())?.value;
    let dirichlet = f.dirichlet_planar(&base, 2.0)?;
    rec.rel("(1-s_eff)·planar seminorm at s_eff=0.99", 0.01 * sub, dirichlet, 2e-2);
    rec.metric("sub_side", 0.01 * sub);
    Ok(())
}

fn c4_first_scaling(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let eps = 2f64.powi(-10);
    let f = TestFunction::vertical(Profile::Linear);
    for s in [0.3, 0.5, 0.7] {
        let params = FractionalParams::quadratic(2, s)?;
        let e = kernelquad::seminorm(&f, &film(2, eps)?, &params, &grid(budget))?;
        let scaled = eps.powf(2.0 * s - 1.0) * e.value;
        let predicted = c_closed(s, 2)? / ((1.0 - s) * (3.0 - 2.0 * s));
        rec.rel(format!("ε^(2s-1)E at s={s}"), scaled, predicted, 0.05);
        rec.metric(format!("scaled_s{s}"), scaled);
        rec.metric(format!("predicted_s{s}"), predicted);
    }
    Ok(())
}

fn slope_check(
    rec: &mut Recorder,
    label: &str,
    f: &TestFunction,
    params: &FractionalParams,
    ladder: &[f64],
    spec: &QuadratureSpec,
    target: f64,
    tol: f64,
) -> Result<()> {
    let r = run_sweep(f, params, ladder, spec, None)?;
    let slope = r.fitted_slope.unwrap_or(f64::NAN);
    rec.abs(format!("{label} slope {slope:.4} vs {target}"), slope, target, tol);
    rec.metric(format!("{label}_fitted_slope"), slope);
    if let Some(t) = r.tail_slope {
        rec.metric(format!("{label}_tail_slope"), t);
    }
    Ok(())
}

fn slope_ladder(budget: Budget) -> Vec<f64> {
    match budget {
        Budget::Quick => dyadic_ladder(3, 7),
        Budget::Full => dyadic_ladder(3, 10),
    }
}

fn c5_slopes(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let ladder = slope_ladder(budget);
    let spec = grid(budget);
    let linear = TestFunction::planar_linear(vec![1.0]);
    slope_check(rec, "planar-linear s=0.75", &linear, &FractionalParams::quadratic(2, 0.75)?, &ladder, &spec, 1.5, 0.05)?;
    slope_check(rec, "planar-linear s=0.25", &linear, &FractionalParams::quadratic(2, 0.25)?, &ladder, &spec, 2.0, 0.05)?;
    slope_check(
        rec,
        "vertical-linear s=0.3",
        &TestFunction::vertical(Profile::Linear),
        &FractionalParams::quadratic(2, 0.3)?,
        &ladder,
        &spec,
        0.4,
        0.05,
    )?;
    Ok(())
}

fn c6_super(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let eps = 2f64.powi(-10);
    let params = FractionalParams::quadratic(2, 0.75)?;
    let e = kernelquad::seminorm(&TestFunction::planar_linear(vec![1.0]), &film(2, eps)?, &params, &grid(budget))?;
    let scaled = e.value / eps.powf(1.5);
    let predicted = k_closed(0.75, 2)? / 0.25;
    rec.rel("E/ε^1.5 at ε=2^-10", scaled, predicted, 0.1);
    rec.metric("scaled", scaled);
    rec.metric("predicted", predicted);
    Ok(())
}

fn c7_sub(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let eps = 2f64.powi(-10);
    let f = TestFunction::planar_sine(vec![1]);
    let params = FractionalParams::quadratic(2, 0.2)?;
    let e = kernelquad::seminorm(&f, &film(2, eps)?, &params, &grid(budget))?;
    let scaled = e.value / (eps * eps);
    let base = BaseDomain::unit_interval();
    let predicted = kernelquad::planar_seminorm(&f, &base, 0.7, 2.0, &QuadratureSpec::default())?.value;
    rec.rel("E/ε² at ε=2^-10", scaled, predicted, 0.1);
    let mc = kernelquad::planar_seminorm(&f, &base, 0.7, 2.0, &QuadratureSpec::monte_carlo(mc_samples(budget), 7))?;
    let z = (mc.value - predicted) / mc.error;
    rec.abs("planar seminorm oracle vs MC (z-score)", z, 0.0, 3.0);
    rec.metric("scaled", scaled);
    rec.metric("predicted", predicted);
    rec.metric("mc_value", mc.value);
    rec.metric("mc_std_error", mc.error);
    Ok(())
}

fn c8_critical(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let ladder = match budget {
        Budget::Quick => dyadic_ladder(4, 8),
        Budget::Full => dyadic_ladder(4, 12),
    };
    let r = critical_sweep(&TestFunction::planar_linear(vec![1.0]), 2, 2.0, &ladder, &grid(budget))?;
    let fit = r
        .critical
        .ok_or_else(|| Error::numeric("critical sweep returned no fit", f64::NAN))?;
    rec.rel("log coefficient vs σ₁/(d-1)·Dirichlet", fit.log_coefficient, fit.full_moment_constant, 0.1);
    rec.metric("log_coefficient", fit.log_coefficient);
    rec.metric("candidate_full_moment", fit.full_moment_constant);
    rec.metric("candidate_half_moment", fit.half_moment_constant);
    rec.metric("relative_error_full", fit.relative_error_full);
    rec.metric("relative_error_half", fit.relative_error_half);
    rec.note(format!(
        "coefficient {:.4}; candidates σ₁/(d-1) = {:.4}, σ₁/(2(d-1)) = {:.4}",
        fit.log_coefficient, fit.full_moment_constant, fit.half_moment_constant
    ));
    Ok(())
}

fn c9_bbm(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let ladder = slope_ladder(budget);
    let r = bbm_sweep(
        &TestFunction::planar_linear(vec![1.0]),
        2,
        2.0,
        &ladder,
        &SSchedule::BbmLog2,
        &grid(budget),
    )?;
    let target = std::f64::consts::FRAC_PI_2;
    rec.rel("(1-s)E/ε^(3-2s) at the ladder end", r.extrapolated_limit, target, 0.1);
    rec.metric("scaled_at_end", r.extrapolated_limit);
    rec.metric("s_at_end", *r.s_values.last().expect("nonempty ladder"));
    Ok(())
}

fn c10_general_p(rec: &mut Recorder, budget: Budget) -> Result<()> {
    for s in [0.6, 0.8] {
        for d in [2, 3] {
            let gap = relative_gap(k_closed(s, d)?, k_p(s, d, 2.0)?);
            rec.at_most(format!("k_p(s={s},d={d},2) vs k_closed"), gap, 1e-6);
        }
    }
    let label = classify_regime(&FractionalParams::new(2, 0.25, 4.0)?).label;
    rec.truth("(s,p)=(0.25,4) is critical", label == RegimeLabel::Critical);
    slope_check(
        rec,
        "planar-linear s=0.5 p=4",
        &TestFunction::planar_linear(vec![1.0]),
        &FractionalParams::new(2, 0.5, 4.0)?,
        &slope_ladder(budget),
        &grid(budget),
        3.0,
        0.1,
    )
}

fn c11_engines(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let configs = [
        ("planar-linear:a=1", 0.75, 0.05),
        ("planar-linear:a=1", 0.25, 0.1),
        ("vertical-linear", 0.3, 0.05),
        ("planar-sine:k=1", 0.5, 0.1),
        ("vertical-sine", 0.6, 0.1),
        ("planar-sine:k=1+vertical-linear", 0.4, 0.2),
    ];
    let mc = QuadratureSpec::monte_carlo(mc_samples(budget), 20_240_601);
    for (i, (tag, s, eps)) in configs.iter().enumerate() {
        let f: TestFunction = tag.parse()?;
        let params = FractionalParams::quadratic(2, *s)?;
        let film = film(2, *eps)?;
        let g = kernelquad::seminorm(&f, &film, &params, &QuadratureSpec::graded_grid(16))?;
        let m = kernelquad::seminorm(&f, &film, &params, &mc)?;
        let combined = m.error + g.error;
        rec.at_most(
            format!("{tag} s={s} ε={eps}: |MC-grid|/(MC σ + grid err)"),
            (m.value - g.value).abs() / combined,
            3.0,
        );
        rec.metric(format!("config{i}_grid"), g.value);
        rec.metric(format!("config{i}_mc"), m.value);
        rec.metric(format!("config{i}_mc_std_error"), m.error);
    }
    let f: TestFunction = "planar-sine:k=1".parse()?;
    let params = FractionalParams::quadratic(2, 0.5)?;
    let film = film(2, 0.1)?;
    let small = QuadratureSpec::monte_carlo(1_000_000, 99);
    let a = kernelquad::seminorm(&f, &film, &params, &small.clone().with_threads(1))?;
    let b = kernelquad::seminorm(&f, &film, &params, &small.with_threads(4))?;
    rec.truth(
        "MC bit-identical across 1 and 4 threads",
        a.value.to_bits() == b.value.to_bits() && a.error.to_bits() == b.error.to_bits(),
    );
    Ok(())
}

/// The standard family matrix used by the property suite.
pub fn standard_families() -> Vec<TestFunction> {
    [
        "planar-linear:a=1",
        "planar-sine:k=1",
        "vertical-linear",
        "vertical-sine",
        "planar-sine:k=1+vertical-linear",
    ]
    .iter()
    .map(|t| t.parse().expect("valid tag"))
    .collect()
}

/// Upper bound asserted on `C_{s,2}·V_ε(f)/⌊f⌋²_s(Ω_ε)`.
pub const SLICING_BOUND: f64 = 1.25;

fn c12_properties(rec: &mut Recorder, budget: Budget) -> Result<()> {
    let spec = QuadratureSpec::graded_grid(8);
    let mc = QuadratureSpec::monte_carlo(200_000, 5);
    let families = standard_families();
    let params = FractionalParams::quadratic(2, 0.5)?;
    let film01 = film(2, 0.1)?;
    for f in &families {
        let base = kernelquad::seminorm(f, &film01, &params, &spec)?;
        for c in [0.0, 1.0, -3.5] {
            let z = kernelquad::seminorm(&TestFunction::constant(c), &film01, &params, &spec)?;
            rec.abs(format!("constant {c} vanishes"), z.value, 0.0, 0.0);
        }
        let scaled = kernelquad::seminorm(&f.scaled(2.5), &film01, &params, &spec)?;
        rec.rel(format!("{f}: homogeneity |c|^p"), scaled.value, 2.5f64.powi(2) * base.value, 1e-10);
        let shifted = kernelquad::seminorm(&f.shifted(4.0), &film01, &params, &spec)?;
        rec.rel(format!("{f}: translation by a constant"), shifted.value, base.value, 1e-12);
        let negated = kernelquad::seminorm(&f.scaled(-1.0), &film01, &params, &spec)?;
        rec.rel(format!("{f}: negation"), negated.value, base.value, 1e-12);
        let m = kernelquad::seminorm(f, &film01, &params, &mc)?;
        let m3 = kernelquad::seminorm(&f.scaled(-3.0), &film01, &params, &mc)?;
        rec.rel(format!("{f}: MC homogeneity"), m3.value, 9.0 * m.value, 1e-10);
    }
    let eps_set: &[f64] = match budget {
        Budget::Quick => &[1e-1, 1e-2],
        Budget::Full => &[1e-1, 1e-2, 1e-3],
    };
    let mut worst: f64 = 0.0;
    for f in &families {
        for s in [0.25, 0.5, 0.75] {
            let params = FractionalParams::quadratic(2, s)?;
            let c = c_closed(s, 2)?;
            for &eps in eps_set {
                let film = film(2, eps)?.with_margin(0.1)?;
                let v = kernelquad::vertical_seminorm(f, &film, &params, &spec)?.value;
                let e = kernelquad::seminorm(f, &film, &params, &spec)?.value;
                worst = worst.max(c * v / e);
            }
        }
    }
    rec.at_most("max C_{s,2}·V_ε/E over the slicing matrix", worst, SLICING_BOUND);
    rec.metric("slicing_ratio_max", worst);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing_and_membership() {
        assert_eq!("bbm".parse::<Suite>().unwrap(), Suite::Bbm);
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(Suite::All.criteria().len(), 12);
        let mut union: Vec<u8> = [Suite::Constants, Suite::Scaling, Suite::Limits, Suite::Critical, Suite::Bbm]
            .iter()
            .flat_map(|s| s.criteria().iter().copied())
            .collect();
        union.sort_unstable();
        assert_eq!(union, Suite::All.criteria());
        assert!(run_criterion(13, Budget::Quick).is_err());
    }

    #[test]
    fn constants_suite_passes_quickly() {
        let report = run_suite(Suite::Constants, Budget::Quick, |_| {}).unwrap();
        assert!(report.passed, "{report:#?}");
    }
}
