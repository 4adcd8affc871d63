//! The seven independent derivations of the flagship double integral
//!
//! `∫₀^∞∫₀^∞ x^{α-1} y^{β-1} Ei(-x²y) K₀(x/y) dx dy`
//!
//! and the verification around them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::rational::{self, int};
use crate::algebra::symbol::{alpha, beta};
use crate::algebra::{AffineForm, NumericValue, Rational, Symbol};
use crate::bracket::BracketSeries;
use crate::derivation::{Derivation, TraceRecord};
use crate::error::{Error, Result};
use crate::eval::ClosedForm;
use crate::mellin_barnes::BracketIntegral;
use crate::numerics::{quad_2d_main_integral, QuadratureResult};
use crate::representations::{catalog_get, instantiate, mellin_series, Function, MellinEntry, RepKind, XI};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineId {
    Direct3,
    DivergentDivergent,
    DivergentNull,
    MellinParam,
    MellinBarnes,
    MixedMbDivergent,
    MixedBracketizedGamma,
}

impl PipelineId {
    pub const ALL: [PipelineId; 7] = [
        PipelineId::Direct3,
        PipelineId::DivergentDivergent,
        PipelineId::DivergentNull,
        PipelineId::MellinParam,
        PipelineId::MellinBarnes,
        PipelineId::MixedMbDivergent,
        PipelineId::MixedBracketizedGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PipelineId::Direct3 => "direct3",
            PipelineId::DivergentDivergent => "divergent-divergent",
            PipelineId::DivergentNull => "divergent-null",
            PipelineId::MellinParam => "mellin-param",
            PipelineId::MellinBarnes => "mellin-barnes",
            PipelineId::MixedMbDivergent => "mixed-mb-divergent",
            PipelineId::MixedBracketizedGamma => "mixed-bracketized-gamma",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            PipelineId::Direct3 => "integral representations of both factors, 5x5 system",
            PipelineId::DivergentDivergent => "divergent series for Ei and K0",
            PipelineId::DivergentNull => "divergent series for Ei, null series for K0",
            PipelineId::MellinParam => "series generated from the Mellin transforms",
            PipelineId::MellinBarnes => "Mellin-Barnes integrals for both factors",
            PipelineId::MixedMbDivergent => "Mellin-Barnes K0 with divergent Ei",
            PipelineId::MixedBracketizedGamma => "bracketized Mellin-Barnes K0 with divergent Ei",
        }
    }
}

impl fmt::Display for PipelineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PipelineId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PipelineId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pipeline `{s}`")))
    }
}

/// Generator parameters `(a, b)` for Ei and `(A, B)` for K₀.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MellinParams {
    pub a: Rational,
    pub b: Rational,
    pub big_a: Rational,
    pub big_b: Rational,
}

impl Default for MellinParams {
    fn default() -> Self {
        Self { a: int(1), b: int(0), big_a: int(2), big_b: int(0) }
    }
}

impl MellinParams {
    pub fn new(a: Rational, b: Rational, big_a: Rational, big_b: Rational) -> Result<Self> {
        if a.is_zero() || big_a.is_zero() {
            return Err(Error::InvalidArgument("Mellin scales a and A must be nonzero".into()));
        }
        Ok(Self { a, b, big_a, big_b })
    }
}

impl fmt::Display for MellinParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = rational::format;
        write!(f, "{},{},{},{}", r(&self.a), r(&self.b), r(&self.big_a), r(&self.big_b))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pipeline: PipelineId,
    /// `None` keeps the parameter symbolic.
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub verify: bool,
    pub tol: f64,
    pub mellin: MellinParams,
}

impl RunConfig {
    pub fn new(pipeline: PipelineId) -> Self {
        Self { pipeline, alpha: None, beta: None, verify: false, tol: 1e-6, mellin: MellinParams::default() }
    }

    pub fn at(mut self, alpha: Rational, beta: Rational) -> Self {
        self.alpha = Some(alpha);
        self.beta = Some(beta);
        self
    }

    fn point(&self) -> Option<(Rational, Rational)> {
        Some((self.alpha.clone()?, self.beta.clone()?))
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.verify && self.point().is_none() {
            return Err(Error::InvalidArgument("--verify needs concrete alpha and beta".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub quadrature: QuadratureResult,
    pub relative_difference: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub schema: u32,
    pub pipeline: PipelineId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mellin_params: Option<String>,
    pub closed_form: String,
    pub closed_form_expr: ClosedForm,
    pub divergent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// The closed form with the concrete parameters substituted exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at_point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRecord>,
}

impl PipelineReport {
    /// True when verification ran and disagreed.
    pub fn mismatch(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| !v.agrees)
    }
}

/// The symbolic part of a run: the closed form and its trace.
pub fn derive(id: PipelineId, mellin: &MellinParams) -> (Result<ClosedForm>, Vec<TraceRecord>) {
    let mut d = Derivation::new();
    let out = match id {
        PipelineId::Direct3 => direct3(&mut d),
        PipelineId::DivergentDivergent => series_pair(&mut d, RepKind::Divergent, RepKind::Divergent),
        PipelineId::DivergentNull => series_pair(&mut d, RepKind::Divergent, RepKind::Null),
        PipelineId::MellinParam => mellin_param(&mut d, mellin),
        PipelineId::MellinBarnes => mellin_barnes(&mut d),
        PipelineId::MixedMbDivergent => mixed_mb_divergent(&mut d),
        PipelineId::MixedBracketizedGamma => mixed_bracketized_gamma(&mut d),
    };
    (out, d.into_trace())
}

/// Runs a pipeline. Errors carry no trace; use [`derive`] to inspect a
/// failing derivation.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineReport> {
    cfg.validate()?;
    let (closed, trace) = derive(cfg.pipeline, &cfg.mellin);
    let closed = closed?;
    let mut report = PipelineReport {
        schema: SCHEMA_VERSION,
        pipeline: cfg.pipeline,
        mellin_params: (cfg.pipeline == PipelineId::MellinParam).then(|| cfg.mellin.to_string()),
        closed_form: closed.to_string(),
        divergent: closed.divergent,
        closed_form_expr: closed.clone(),
        alpha: cfg.alpha.as_ref().map(rational::format),
        beta: cfg.beta.as_ref().map(rational::format),
        at_point: None,
        value: None,
        verification: None,
        trace,
    };
    let Some((a, b)) = cfg.point() else {
        return Ok(report);
    };
    let exact = specialize(&closed, &a, &b);
    report.at_point = Some(exact.to_string());
    report.divergent |= exact.divergent;
    let value = match evaluate(&closed, rational::to_f64(&a), rational::to_f64(&b))? {
        NumericValue::Finite(v) => Some(v.re),
        NumericValue::Divergent => {
            report.divergent = true;
            None
        }
    };
    report.value = value;
    if cfg.verify {
        let quadrature = quad_2d_main_integral(rational::to_f64(&a), rational::to_f64(&b), cfg.tol)?;
        let (relative_difference, agrees) = match value {
            Some(v) => {
                let diff = (quadrature.value - v).abs();
                let rel = diff / v.abs();
                (rel, quadrature.converged && diff <= (cfg.tol * v.abs()).max(2.0 * quadrature.error))
            }
            None => (f64::INFINITY, false),
        };
        report.verification = Some(Verification { quadrature, relative_difference, agrees });
    }
    Ok(report)
}

/// `cf` with `α`, `β` replaced by exact values.
pub fn specialize(cf: &ClosedForm, a: &Rational, b: &Rational) -> ClosedForm {
    let values: BTreeMap<Symbol, Rational> = [(alpha(), a.clone()), (beta(), b.clone())].into();
    ClosedForm::new(cf.expr.eval_exact(&values))
}

/// Floating-point value of a closed form over `α`, `β`.
pub fn evaluate(cf: &ClosedForm, a: f64, b: f64) -> Result<NumericValue> {
    let values = [(alpha(), a.into()), (beta(), b.into())].into();
    cf.expr.eval_numeric(&values)
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub pipeline: PipelineId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    pub rows: Vec<CompareRow>,
    /// Pairwise relative differences of the values, `None` where a row
    /// failed or no point was given.
    pub agreement: Vec<Vec<Option<f64>>>,
    /// Pairwise canonical equality of the closed forms.
    pub symbolic_equal: Vec<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureResult>,
}

impl CompareReport {
    /// Largest off-diagonal relative difference, or `None` if any entry is
    /// missing.
    pub fn worst_agreement(&self) -> Option<f64> {
        let mut worst = 0.0f64;
        for row in &self.agreement {
            for v in row {
                worst = worst.max((*v)?);
            }
        }
        Some(worst)
    }
}

/// Runs each listed pipeline, isolating failures per row.
pub fn compare_all(
    pipelines: &[PipelineId],
    point: Option<(Rational, Rational)>,
    quadrature_tol: Option<f64>,
    mellin: &MellinParams,
) -> Result<CompareReport> {
    if pipelines.is_empty() {
        return Err(Error::InvalidArgument("at least one pipeline is required".into()));
    }
    let mut ids = pipelines.to_vec();
    ids.sort();
    ids.dedup();
    let quadrature = match (&point, quadrature_tol) {
        (Some((a, b)), Some(tol)) => Some(quad_2d_main_integral(rational::to_f64(a), rational::to_f64(b), tol)?),
        _ => None,
    };
    let mut forms = Vec::new();
    let mut rows = Vec::new();
    for &id in &ids {
        let (closed, _) = derive(id, mellin);
        let mut row =
            CompareRow { pipeline: id, closed_form: None, value: None, quadrature_difference: None, error: None };
        match closed {
            Ok(cf) => {
                row.closed_form = Some(cf.to_string());
                if let Some((a, b)) = &point {
                    match evaluate(&cf, rational::to_f64(a), rational::to_f64(b)) {
                        Ok(NumericValue::Finite(v)) => row.value = Some(v.re),
                        Ok(NumericValue::Divergent) => row.error = Some("divergent at this point".into()),
                        Err(e) => row.error = Some(e.to_string()),
                    }
                }
                if let (Some(v), Some(q)) = (row.value, &quadrature) {
                    row.quadrature_difference = Some((q.value - v).abs() / v.abs());
                }
                forms.push(Some(cf));
            }
            Err(e) => {
                row.error = Some(e.to_string());
                forms.push(None);
            }
        }
        rows.push(row);
    }
    let agreement = rows
        .iter()
        .map(|r| {
            rows.iter()
                .map(|s| match (r.value, s.value) {
                    (Some(x), Some(y)) => Some((x - y).abs() / x.abs().max(y.abs())),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let symbolic_equal = forms
        .iter()
        .map(|f| {
            forms
                .iter()
                .map(|g| match (f, g) {
                    (Some(f), Some(g)) => f.equivalent(g),
                    _ => false,
                })
                .collect()
        })
        .collect();
    Ok(CompareReport {
        schema: SCHEMA_VERSION,
        alpha: point.as_ref().map(|(a, _)| rational::format(a)),
        beta: point.as_ref().map(|(_, b)| rational::format(b)),
        rows,
        agreement,
        symbolic_equal,
        quadrature,
    })
}

fn scales(pairs: &[(&str, i64)]) -> BTreeMap<String, Rational> {
    pairs.iter().map(|(v, k)| (v.to_string(), int(*k))).collect()
}

/// `Ei(-x²y)`: the argument is `x² y`.
fn ei_argument() -> BTreeMap<String, Rational> {
    scales(&[("x", 2), ("y", 1)])
}

/// `K₀(x/y)`.
fn k0_argument() -> BTreeMap<String, Rational> {
    scales(&[("x", 1), ("y", -1)])
}

/// `x^{α-1} y^{β-1}`.
fn weight() -> BracketSeries {
    BracketSeries::weight([
        ("x".to_string(), AffineForm::symbol(alpha())),
        ("y".to_string(), AffineForm::symbol(beta())),
    ])
}

/// Multiplies two instantiated factors by the weight and integrates both
/// variables.
fn integrate_xy(d: &mut Derivation, ei: &BracketSeries, k0: &BracketSeries) -> Result<BracketSeries> {
    let s = d.product(ei, k0)?;
    let s = d.product(&s, &weight())?;
    let s = d.p1(&s, "x")?;
    d.p1(&s, "y")
}

/// The five-index, five-bracket series of the integral-representation route,
/// just before rule E2.
pub fn direct3_series(d: &mut Derivation) -> Result<BracketSeries> {
    let ei = catalog_get(d, Function::Ei, RepKind::BracketSeries2Index)?;
    let k0 = catalog_get(d, Function::K0, RepKind::BracketSeries3Index)?;
    let ei = instantiate(d, &ei, &ei_argument())?;
    let k0 = instantiate(d, &k0, &k0_argument())?;
    integrate_xy(d, &ei, &k0)
}

fn direct3(d: &mut Derivation) -> Result<ClosedForm> {
    let s = direct3_series(d)?;
    d.e2(&s)
}

fn series_pair(d: &mut Derivation, ei_kind: RepKind, k0_kind: RepKind) -> Result<ClosedForm> {
    let ei = catalog_get(d, Function::Ei, ei_kind)?;
    let k0 = catalog_get(d, Function::K0, k0_kind)?;
    let ei = instantiate(d, &ei, &ei_argument())?;
    let k0 = instantiate(d, &k0, &k0_argument())?;
    let s = integrate_xy(d, &ei, &k0)?;
    d.e2(&s)
}

fn mellin_param(d: &mut Derivation, p: &MellinParams) -> Result<ClosedForm> {
    let ei = mellin_series(d, Function::Ei, &p.a, &AffineForm::constant(p.b.clone()), "l")?;
    let k0 = mellin_series(d, Function::K0, &p.big_a, &AffineForm::constant(p.big_b.clone()), "n")?;
    let ei = instantiate(d, &ei, &ei_argument())?;
    let k0 = instantiate(d, &k0, &k0_argument())?;
    let s = integrate_xy(d, &ei, &k0)?;
    d.e2(&s)
}

fn mellin_barnes(d: &mut Derivation) -> Result<ClosedForm> {
    let bi = mellin_barnes_integral(d)?;
    d.e5(&bi)
}

/// The two-contour integral with brackets `<α - 2s - z>`, `<β - s + z>`,
/// just before rule E5.
pub fn mellin_barnes_integral(d: &mut Derivation) -> Result<BracketIntegral> {
    let ei = d.mellin_barnes(&MellinEntry::ei(), "s")?;
    let k0 = d.mellin_barnes(&MellinEntry::k0(), "z")?;
    let ei = d.distribute_contour(&ei, XI, &ei_argument())?;
    let k0 = d.distribute_contour(&k0, XI, &k0_argument())?;
    let bi = d.product_contour(&ei, &k0)?;
    let bi = d.times_series(&bi, &weight())?;
    let bi = d.integrate_contour(&bi, "x")?;
    d.integrate_contour(&bi, "y")
}

fn bracket_mentioning(bi: &BracketIntegral, v: &Symbol) -> Result<crate::bracket::Bracket> {
    bi.brackets()
        .iter()
        .find(|b| b.arg().contains(v))
        .cloned()
        .ok_or_else(|| Error::InvalidShape(format!("no bracket mentions {v}")))
}

fn mixed_mb_divergent(d: &mut Derivation) -> Result<ClosedForm> {
    let k0 = d.mellin_barnes(&MellinEntry::k0(), "z")?;
    let z = k0.contour_vars()[0].clone();
    let k0 = d.distribute_contour(&k0, XI, &k0_argument())?;
    let ei = catalog_get(d, Function::Ei, RepKind::Divergent)?;
    let l = ei.series.indices()[0].clone();
    let ei = instantiate(d, &ei, &ei_argument())?;
    let bi = d.times_series(&k0, &ei)?;
    let bi = d.times_series(&bi, &weight())?;
    let bi = d.integrate_contour(&bi, "x")?;
    let bi = d.integrate_contour(&bi, "y")?;
    // The x bracket <α + 2l - z> fixes z; what remains is a one-index series.
    let using = bracket_mentioning(&bi, &z)?;
    let s = d.e4(&bi, &z, &using)?.into_series()?;
    let s = d.lemma(&s, 0, &l)?;
    d.e1(&s)
}

fn mixed_bracketized_gamma(d: &mut Derivation) -> Result<ClosedForm> {
    let s = bracketized_series(d)?;
    d.e2(&s)
}

/// K₀ through its Mellin-Barnes integral with both gamma factors turned
/// into brackets, one contour integral removed by E4, and the result
/// multiplied by the divergent Ei series: three indices, three brackets.
pub fn bracketized_series(d: &mut Derivation) -> Result<BracketSeries> {
    let k0 = d.mellin_barnes(&MellinEntry::k0(), "z")?;
    let z = k0.contour_vars()[0].clone();
    let k0 = d.change_variable(&k0, &z, "t", &int(2))?;
    let t = k0.contour_vars()[0].clone();
    let tf = AffineForm::symbol(t.clone());
    let k0 = d.bracketize(&k0, &tf, "n")?;
    let k0 = d.bracketize(&k0, &tf, "m")?;
    let m = k0.residual_indices()[1].clone();
    let using = k0
        .brackets()
        .iter()
        .find(|b| b.arg().contains(&m))
        .cloned()
        .ok_or_else(|| Error::InvalidShape(format!("no bracket mentions {m}")))?;
    let k0 = d.e4(&k0, &t, &using)?.into_series()?;
    let k0 = d.distribute(&k0, XI, &k0_argument())?;
    let ei = catalog_get(d, Function::Ei, RepKind::Divergent)?;
    let ei = instantiate(d, &ei, &ei_argument())?;
    integrate_xy(d, &ei, &k0)
}
