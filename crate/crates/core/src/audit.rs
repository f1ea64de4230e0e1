//! The claim registry: every numbered statement the workbench can check,
//! mapped to a deterministic runner that produces a serializable verdict.
//!
//! Verdict taxonomy. Exact identities demand `exact-pass`. Inequalities
//! with unspecified constants are judged by their implied-constant
//! envelope: the claim's bound shape is divided out and the check passes
//! (`bounded-pass`) when the envelope stays finite and does not grow by
//! more than 50% over the top two decades of the grid. Asymptotic `~`
//! claims are `trend-consistent` when the fitted constant matches its
//! comparison oracle. Sign-change (omega) claims are always `report-only`.
//! A `counterexample` carries a witness that can be re-checked with a
//! single operation call. Counterexamples are findings, not failures.
//!
//! Reports are byte-identical across runs and worker counts: every claim
//! computation reduces in a fixed order, claims are assembled in registry
//! order, and floats are serialized at 12 significant digits.

use crate::arith::evaluate;
use crate::asymptotic::{
    fit, log_integral, montgomery_track, sign_changes, singular_series, zeta_and_deriv, FitModel,
    FitResult, ResidueRule,
};
use crate::dirichlet::{character_group, psi_ap_from_twisted, psi_twisted_all};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::sieve::{gcd, least_prime_in_ap, APClass, LeastPrime, PrimeTable};
use crate::sums::{
    inversion_decomposition, lambda_pair_trace, mertens_ap_trace, pair_count_trace,
    pair_weighted_sum, pair_weighted_trace, prime_power_pair_sum, psi_ap, sig12,
    twisted_mobius_sum, twisted_mobius_trace, GridSpec, LinearForm, LogPower, MertensWeight,
    MobiusCondition, PowerWeight, SumTrace,
};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    #[serde(rename = "exact-pass")]
    ExactPass,
    #[serde(rename = "bounded-pass")]
    BoundedPass,
    #[serde(rename = "trend-consistent")]
    TrendConsistent,
    #[serde(rename = "counterexample")]
    Counterexample,
    #[serde(rename = "report-only")]
    ReportOnly,
}

impl ClaimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStatus::ExactPass => "exact-pass",
            ClaimStatus::BoundedPass => "bounded-pass",
            ClaimStatus::TrendConsistent => "trend-consistent",
            ClaimStatus::Counterexample => "counterexample",
            ClaimStatus::ReportOnly => "report-only",
        }
    }
}

fn ser_f12<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round12(*v))
}

fn ser_opt_f12<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&round12(*v)),
        None => s.serialize_none(),
    }
}

fn ser_vec_f12<S: Serializer>(v: &Vec<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&round12(*x))?;
    }
    seq.end()
}

/// Round to 12 significant digits (the serialized precision).
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckpointOut {
    #[serde(serialize_with = "ser_f12")]
    pub x: f64,
    #[serde(serialize_with = "ser_f12")]
    pub value: f64,
    #[serde(serialize_with = "ser_opt_f12")]
    pub main: Option<f64>,
    #[serde(serialize_with = "ser_opt_f12")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitOut {
    pub model: String,
    #[serde(serialize_with = "ser_f12")]
    pub c: f64,
    #[serde(serialize_with = "ser_f12")]
    pub b: f64,
    #[serde(serialize_with = "ser_f12")]
    pub rms_residual: f64,
    #[serde(serialize_with = "ser_vec_f12")]
    pub window: Vec<f64>,
}

impl From<&FitResult> for FitOut {
    fn from(f: &FitResult) -> Self {
        FitOut {
            model: f.model.name().to_string(),
            c: f.c,
            b: f.b,
            rms_residual: f.rms_residual,
            window: vec![f.window.0, f.window.1],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimVerdict {
    pub claim_id: String,
    pub paper_ref: String,
    pub params: BTreeMap<String, String>,
    pub status: ClaimStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
    pub checkpoints: Vec<CheckpointOut>,
    pub fits: Vec<FitOut>,
    pub notes: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditConfig {
    /// Table limit; every grid is clamped to it.
    pub limit: u64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    #[serde(serialize_with = "ser_f12")]
    pub grid_ratio: f64,
    /// Largest modulus for progression-based claims.
    pub q_max: u64,
    /// Scan bound for the totient inequality claims.
    pub d_max: u64,
    /// Cap exponent for the least-prime search.
    #[serde(serialize_with = "ser_f12")]
    pub linnik_cap_exponent: f64,
    /// Primary linear form (m, k) for the trace claims.
    pub form_m: u64,
    pub form_k: i64,
    /// k values for the inversion-identity claim (m = 1).
    pub inversion_ks: Vec<i64>,
    /// Run only these claim ids (None = all).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub include: Option<Vec<String>>,
    /// Drop these claim ids.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<String>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            limit: 10_000_000,
            grid_lo: 1e4,
            grid_hi: 1e8,
            grid_ratio: 10f64.sqrt(),
            q_max: 100,
            d_max: 1000,
            linnik_cap_exponent: 6.0,
            form_m: 1,
            form_k: 2,
            inversion_ks: vec![2, 4, 6, 8, 10],
            include: None,
            exclude: Vec::new(),
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.limit < 100_000 {
            return Err(Error::usage("audit table limit must be at least 1e5"));
        }
        if self.q_max < 2 || self.d_max < 2 {
            return Err(Error::usage("q_max and d_max must be at least 2"));
        }
        LinearForm::new(self.form_m, self.form_k)?;
        for &k in &self.inversion_ks {
            LinearForm::new(1, k)?;
        }
        GridSpec::new(self.grid_lo, self.grid_hi, self.grid_ratio)?;
        Ok(())
    }

    fn form(&self) -> LinearForm {
        LinearForm::new(self.form_m, self.form_k).expect("validated")
    }

    /// Headroom above `limit` so that form images of grid points up to the
    /// configured limit stay inside the table.
    fn table_limit(&self) -> u64 {
        self.limit
            .saturating_add(64)
            .min(crate::sieve::LIMIT_CEILING)
    }

    /// The desk-scale grid, clamped to the configured limit and so that
    /// every image of the primary form stays inside the table.
    fn grid(&self, table_limit: u64) -> Vec<u64> {
        let hi_cap = ((table_limit as i128 - self.form_k as i128) / self.form_m as i128)
            .clamp(2, self.limit as i128) as u64;
        let hi = self.grid_hi.min(hi_cap as f64);
        let lo = self.grid_lo.min(hi);
        GridSpec {
            lo,
            hi,
            ratio: self.grid_ratio,
        }
        .checkpoints()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: AuditConfig,
    pub claims: Vec<ClaimVerdict>,
}

pub struct AuditContext {
    pub table: PrimeTable,
}

type Runner = fn(&AuditContext, &AuditConfig) -> Result<ClaimVerdict>;

pub struct ClaimSpec {
    pub id: &'static str,
    pub paper_ref: &'static str,
    run: Runner,
}

/// The registry, in report order. Each entry audits exactly one numbered
/// statement; `paper_ref` is the claim's source label.
pub static REGISTRY: &[ClaimSpec] = &[
    ClaimSpec { id: "C-02", paper_ref: "Eq. (2)", run: run_c02 },
    ClaimSpec { id: "C-04", paper_ref: "Eq. (4)", run: run_c04 },
    ClaimSpec { id: "C-05L", paper_ref: "Eq. (5), lower bound", run: run_c05l },
    ClaimSpec { id: "C-05U", paper_ref: "Eq. (5), upper bound", run: run_c05u },
    ClaimSpec { id: "C-06", paper_ref: "Eq. (6)", run: run_c06 },
    ClaimSpec { id: "C-08", paper_ref: "Eq. (8)", run: run_c08 },
    ClaimSpec { id: "C-10", paper_ref: "Eq. (10)", run: run_c10 },
    ClaimSpec { id: "C-13", paper_ref: "Eq. (13)", run: run_c13 },
    ClaimSpec { id: "C-14", paper_ref: "Eq. (14)", run: run_c14 },
    ClaimSpec { id: "C-18", paper_ref: "Eq. (18)", run: run_c18 },
    ClaimSpec { id: "C-22", paper_ref: "Theorem 3, Eq. (22)", run: run_c22 },
    ClaimSpec { id: "C-23", paper_ref: "Lemma 4, Eq. (23)", run: run_c23 },
    ClaimSpec { id: "C-25", paper_ref: "Lemma 5, Eq. (25)", run: run_c25 },
    ClaimSpec { id: "C-29", paper_ref: "Eq. (29), first constant", run: run_c29 },
    ClaimSpec { id: "C-31", paper_ref: "Theorem 6, Eq. (31)", run: run_c31 },
    ClaimSpec { id: "C-40", paper_ref: "Conjecture 7, Eq. (40)", run: run_c40 },
    ClaimSpec { id: "C-42", paper_ref: "Eq. (42)", run: run_c42 },
    ClaimSpec { id: "C-45", paper_ref: "Theorem 9, Eq. (45)", run: run_c45 },
    ClaimSpec { id: "C-46", paper_ref: "Lemma 10, Eq. (46)", run: run_c46 },
];

pub fn registry_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

/// Run one claim against a fresh table sized by the config.
pub fn run_claim(claim_id: &str, config: &AuditConfig) -> Result<ClaimVerdict> {
    config.validate()?;
    let spec = REGISTRY
        .iter()
        .find(|c| c.id == claim_id)
        .ok_or_else(|| Error::usage(format!("unknown claim id '{claim_id}'")))?;
    let ctx = AuditContext {
        table: PrimeTable::build(config.table_limit())?,
    };
    (spec.run)(&ctx, config)
}

/// Run every registered claim (after include/exclude filtering) in registry
/// order. Counterexamples are findings; only infrastructure failures error.
pub fn run_all(config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    let ctx = AuditContext {
        table: PrimeTable::build(config.table_limit())?,
    };
    let selected: Vec<&ClaimSpec> = REGISTRY
        .iter()
        .filter(|c| {
            config
                .include
                .as_ref()
                .map_or(true, |inc| inc.iter().any(|i| i == c.id))
        })
        .filter(|c| !config.exclude.iter().any(|e| e == c.id))
        .collect();
    // Claims run concurrently; assembly stays in registry order because the
    // parallel map preserves input order. A claim that cannot be evaluated
    // under this configuration degrades to a report-only verdict carrying
    // the reason; it never aborts the rest of the report.
    use rayon::prelude::*;
    let claims: Vec<ClaimVerdict> = selected
        .par_iter()
        .map(|spec| {
            (spec.run)(&ctx, config).unwrap_or_else(|e| ClaimVerdict {
                claim_id: spec.id.to_string(),
                paper_ref: spec.paper_ref.to_string(),
                params: BTreeMap::new(),
                status: ClaimStatus::ReportOnly,
                witness: None,
                checkpoints: vec![],
                fits: vec![],
                notes: format!("claim could not be evaluated under this configuration: {e}"),
            })
        })
        .collect();
    Ok(AuditReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        claims,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Json,
    Csv,
    Markdown,
}

impl RenderFormat {
    pub fn parse(s: &str) -> Result<RenderFormat> {
        match s {
            "json" => Ok(RenderFormat::Json),
            "csv" => Ok(RenderFormat::Csv),
            "markdown" | "md" => Ok(RenderFormat::Markdown),
            other => Err(Error::usage(format!(
                "unknown render format '{other}' (expected json | csv | markdown)"
            ))),
        }
    }
}

/// Serialize a report. JSON follows the stable schema, CSV has one row per
/// (claim, checkpoint), markdown is one table per claim.
pub fn render(report: &AuditReport, format: RenderFormat) -> Result<Vec<u8>> {
    match format {
        RenderFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)
                .map_err(|e| Error::internal(format!("json serialization: {e}")))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        RenderFormat::Csv => {
            let mut out = String::from("claim_id,x,value,main,residual,status\n");
            for c in &report.claims {
                for p in &c.checkpoints {
                    out.push_str(&c.claim_id);
                    out.push(',');
                    out.push_str(&sig12(p.x));
                    out.push(',');
                    out.push_str(&sig12(p.value));
                    out.push(',');
                    if let Some(m) = p.main {
                        out.push_str(&sig12(m));
                    }
                    out.push(',');
                    if let Some(r) = p.residual {
                        out.push_str(&sig12(r));
                    }
                    out.push(',');
                    out.push_str(c.status.as_str());
                    out.push('\n');
                }
            }
            Ok(out.into_bytes())
        }
        RenderFormat::Markdown => {
            let mut out = String::new();
            out.push_str("# Claim audit report\n\n");
            out.push_str(&format!(
                "schema {} | tool {} | limit {} | grid {}:{}:{}\n\n",
                report.schema_version,
                report.tool_version,
                report.config.limit,
                report.config.grid_lo,
                report.config.grid_hi,
                sig12(report.config.grid_ratio),
            ));
            for c in &report.claims {
                out.push_str(&format!("## {} - {}\n\n", c.claim_id, c.paper_ref));
                out.push_str(&format!("status: **{}**\n\n", c.status.as_str()));
                if !c.params.is_empty() {
                    out.push_str("params: ");
                    let parts: Vec<String> =
                        c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    out.push_str(&parts.join(", "));
                    out.push_str("\n\n");
                }
                if let Some(w) = &c.witness {
                    out.push_str("witness:\n\n");
                    for (k, v) in w {
                        out.push_str(&format!("- {k}: {v}\n"));
                    }
                    out.push('\n');
                }
                if !c.checkpoints.is_empty() {
                    out.push_str("| x | value | main | residual |\n|---|---|---|---|\n");
                    for p in &c.checkpoints {
                        out.push_str(&format!(
                            "| {} | {} | {} | {} |\n",
                            sig12(p.x),
                            sig12(p.value),
                            p.main.map(sig12).unwrap_or_default(),
                            p.residual.map(sig12).unwrap_or_default(),
                        ));
                    }
                    out.push('\n');
                }
                for f in &c.fits {
                    out.push_str(&format!(
                        "fit {}: c = {}, b = {}, rms = {}, window [{}, {}]\n\n",
                        f.model,
                        sig12(f.c),
                        sig12(f.b),
                        sig12(f.rms_residual),
                        sig12(f.window[0]),
                        sig12(f.window[1]),
                    ));
                }
                if !c.notes.is_empty() {
                    out.push_str(&format!("notes: {}\n\n", c.notes));
                }
            }
            Ok(out.into_bytes())
        }
    }
}

// ---------------------------------------------------------------------------
// shared helpers

fn params_of(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn trace_points(trace: &SumTrace) -> Vec<CheckpointOut> {
    trace
        .checkpoints
        .iter()
        .map(|c| CheckpointOut {
            x: c.x,
            value: c.value,
            main: c.main,
            residual: c.residual,
        })
        .collect()
}

/// Envelope stability over the top two decades of x: the envelope level of
/// the top decade must not exceed the level of the decade before it by more
/// than 50%. Levels are decade maxima, so the oscillation that error
/// envelopes naturally show (dips followed by recovery) does not register
/// as instability; only decade-over-decade growth does.
fn envelope_stable(points: &[(f64, f64)]) -> bool {
    let Some(&(x_max, _)) = points.last() else {
        return false;
    };
    let in_window = |x: f64| x >= x_max / 100.0;
    if points
        .iter()
        .any(|&(x, v)| in_window(x) && !v.is_finite())
    {
        return false;
    }
    let prev: Vec<f64> = points
        .iter()
        .filter(|p| in_window(p.0) && p.0 <= x_max / 10.0)
        .map(|p| p.1)
        .collect();
    let top: Vec<f64> = points
        .iter()
        .filter(|p| p.0 > x_max / 10.0)
        .map(|p| p.1)
        .collect();
    if prev.is_empty() || top.is_empty() {
        return false;
    }
    let level = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    level(&top) <= 1.5 * level(&prev)
}

fn reduced_residues(q: u64) -> Vec<u64> {
    (1..=q).filter(|&a| gcd(a, q) == 1).collect()
}

// ---------------------------------------------------------------------------
// claim runners

/// C-02: the sum of log p / p over a progression grows like a positive
/// multiple of log x. Envelope: value / log x per residue class.
fn run_c02(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let moduli: Vec<u64> = [3u64, 4, 5].into_iter().filter(|&q| q <= config.q_max).collect();
    let mut checkpoints = Vec::new();
    let mut all_stable = true;
    let mut min_ratio = f64::INFINITY;
    for &q in &moduli {
        for a in reduced_residues(q) {
            let ap = APClass::new(a, q)?;
            let tr = mertens_ap_trace(&ctx.table, &grid, ap, MertensWeight::LogOverP)?;
            let env: Vec<(f64, f64)> = tr
                .checkpoints
                .iter()
                .map(|c| (c.x, c.value / c.x.ln()))
                .collect();
            all_stable &= envelope_stable(&env);
            min_ratio = min_ratio.min(env.last().map(|e| e.1).unwrap_or(f64::NAN));
            for c in &tr.checkpoints {
                checkpoints.push(CheckpointOut {
                    x: c.x,
                    value: c.value,
                    main: Some(c.x.ln() / evaluate(q)?.phi as f64),
                    residual: Some(c.value / c.x.ln()),
                });
            }
        }
    }
    let status = if all_stable && min_ratio > 0.0 {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-02".into(),
        paper_ref: "Eq. (2)".into(),
        params: params_of(&[
            ("moduli", format!("{moduli:?}")),
            ("grid", format!("{}..{}", grid.first().unwrap(), grid.last().unwrap())),
        ]),
        status,
        witness: None,
        checkpoints,
        fits: vec![],
        notes: format!(
            "rows per reduced class; main = log(x)/phi(q), residual column holds the \
             envelope value/log(x); smallest top-grid envelope {}",
            sig12(min_ratio)
        ),
    })
}

/// C-04: the unrestricted inversion decomposition must equal the direct
/// weighted pair sum to 1e-9 relative. Exact identity.
fn run_c04(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let x = 10_000u64.min(ctx.table.limit().saturating_sub(30).max(2));
    let mut checkpoints = Vec::new();
    let mut worst_rel: f64 = 0.0;
    let mut witness = None;
    for &k in &config.inversion_ks {
        let form = LinearForm::new(1, k)?;
        let lhs = pair_weighted_sum(&ctx.table, x, form)?;
        let rhs = inversion_decomposition(&ctx.table, x, form, false)?.total;
        // Relative tolerance with an absolute floor where the sum vanishes.
        let rel = (lhs - rhs).abs() / lhs.abs().max(1.0);
        if rel > worst_rel {
            worst_rel = rel;
        }
        if rel > 1e-9 && witness.is_none() {
            witness = Some(BTreeMap::from([
                ("op".to_string(), "inversion_decomposition".to_string()),
                ("x".to_string(), x.to_string()),
                ("m".to_string(), "1".to_string()),
                ("k".to_string(), k.to_string()),
                ("lhs".to_string(), sig12(lhs)),
                ("rhs".to_string(), sig12(rhs)),
            ]));
        }
        checkpoints.push(CheckpointOut {
            x: k as f64,
            value: lhs,
            main: Some(rhs),
            residual: Some(lhs - rhs),
        });
    }
    let status = if witness.is_none() {
        ClaimStatus::ExactPass
    } else {
        ClaimStatus::Counterexample
    };
    Ok(ClaimVerdict {
        claim_id: "C-04".into(),
        paper_ref: "Eq. (4)".into(),
        params: params_of(&[
            ("x", x.to_string()),
            ("forms", format!("(1,k) for k in {:?}", config.inversion_ks)),
        ]),
        status,
        witness,
        checkpoints,
        fits: vec![],
        notes: format!(
            "x column holds k; value = direct sum, main = inverted double sum; \
             worst relative gap {}",
            sig12(worst_rel)
        ),
    })
}

/// C-05L: d / log d < phi(d). False at small d; the scan reports every
/// violation with the first as witness.
fn run_c05l(_ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let mut checkpoints = Vec::new();
    let mut witness = None;
    let mut violations = 0u64;
    for d in 2..=config.d_max {
        let phi = evaluate(d)?.phi as f64;
        let bound = d as f64 / (d as f64).ln();
        if phi <= bound {
            violations += 1;
            if witness.is_none() {
                witness = Some(BTreeMap::from([
                    ("op".to_string(), "evaluate".to_string()),
                    ("d".to_string(), d.to_string()),
                    ("phi".to_string(), sig12(phi)),
                    ("bound_d_over_log_d".to_string(), sig12(bound)),
                ]));
            }
            if checkpoints.len() < 64 {
                checkpoints.push(CheckpointOut {
                    x: d as f64,
                    value: phi,
                    main: Some(bound),
                    residual: Some(phi - bound),
                });
            }
        }
    }
    let status = if violations > 0 {
        ClaimStatus::Counterexample
    } else {
        ClaimStatus::BoundedPass
    };
    Ok(ClaimVerdict {
        claim_id: "C-05L".into(),
        paper_ref: "Eq. (5), lower bound".into(),
        params: params_of(&[("d_range", format!("2..={}", config.d_max))]),
        status,
        witness,
        checkpoints,
        fits: vec![],
        notes: format!(
            "{violations} violations of d/log d < phi(d) in range (rows list the first 64); \
             d = 1 excluded (log 1 = 0)"
        ),
    })
}

/// C-05U: phi(d) < d, true for every d >= 2.
fn run_c05u(_ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let mut witness = None;
    for d in 2..=config.d_max {
        let phi = evaluate(d)?.phi;
        if phi >= d {
            witness = Some(BTreeMap::from([
                ("op".to_string(), "evaluate".to_string()),
                ("d".to_string(), d.to_string()),
                ("phi".to_string(), phi.to_string()),
            ]));
            break;
        }
    }
    let status = if witness.is_none() {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::Counterexample
    };
    let d_top = config.d_max;
    let phi_top = evaluate(d_top)?.phi as f64;
    Ok(ClaimVerdict {
        claim_id: "C-05U".into(),
        paper_ref: "Eq. (5), upper bound".into(),
        params: params_of(&[("d_range", format!("2..={}", config.d_max))]),
        status,
        witness,
        checkpoints: vec![CheckpointOut {
            x: d_top as f64,
            value: phi_top,
            main: Some(d_top as f64),
            residual: Some(phi_top - d_top as f64),
        }],
        fits: vec![],
        notes: "phi(d) < d holds on the whole scan; d = 1 gives phi(1) = 1, not below d, \
                and is excluded as in the lower-bound scan"
            .into(),
    })
}

/// C-06: the least prime in a reduced class stays below q^6. The scan
/// records the observed exponent max log p(a,q) / log q.
fn run_c06(_ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let cap = config.linnik_cap_exponent;
    let mut checkpoints = Vec::new();
    let mut witness = None;
    let mut max_ratio: f64 = 0.0;
    let mut arg_max = (0u64, 0u64);
    for q in 2..=config.q_max {
        let mut q_worst: f64 = 0.0;
        let mut q_worst_p = 0u64;
        for a in reduced_residues(q) {
            let ap = APClass::new(a, q)?;
            match least_prime_in_ap(ap, cap) {
                LeastPrime::Found(p) => {
                    let ratio = (p as f64).ln() / (q as f64).ln();
                    if ratio > q_worst {
                        q_worst = ratio;
                        q_worst_p = p;
                    }
                    if ratio > max_ratio {
                        max_ratio = ratio;
                        arg_max = (a, q);
                    }
                }
                LeastPrime::CapExceeded { search_bound } => {
                    if witness.is_none() {
                        witness = Some(BTreeMap::from([
                            ("op".to_string(), "least_prime_in_ap".to_string()),
                            ("a".to_string(), a.to_string()),
                            ("q".to_string(), q.to_string()),
                            ("search_bound".to_string(), search_bound.to_string()),
                        ]));
                    }
                }
            }
        }
        checkpoints.push(CheckpointOut {
            x: q as f64,
            value: q_worst_p as f64,
            main: Some((q as f64).powf(cap)),
            residual: Some(q_worst),
        });
    }
    let status = if witness.is_none() {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::Counterexample
    };
    Ok(ClaimVerdict {
        claim_id: "C-06".into(),
        paper_ref: "Eq. (6)".into(),
        params: params_of(&[
            ("q_range", format!("2..={}", config.q_max)),
            ("cap_exponent", sig12(cap)),
        ]),
        status,
        witness,
        checkpoints,
        fits: vec![],
        notes: format!(
            "x column holds q; value = largest least-prime over reduced a; residual holds \
             the exponent log p / log q; observed max exponent {} at (a,q) = {:?} \
             (q = 1 excluded: log q = 0)",
            sig12(max_ratio),
            arg_max
        ),
    })
}

/// C-08: the weighted pair sum grows like c0 loglog x. The three
/// component sums of the lower-bound chain are tabulated alongside.
fn run_c08(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let form = config.form();
    let tr = pair_weighted_trace(&ctx.table, &grid, form)?;
    let env: Vec<(f64, f64)> = tr
        .checkpoints
        .iter()
        .map(|c| (c.x, c.value / c.x.ln().ln()))
        .collect();
    let stable = envelope_stable(&env);
    let fit_res = fit(&tr, FitModel::CLogLog, None).ok();

    // Component sums at the top grid point, with the coprimality side
    // condition gcd(d, km) = 1 and d running to m*x + k.
    let x_top = *grid.last().unwrap();
    let d_cap = form.value_at(x_top).unwrap_or(x_top);
    let km = form.m() * form.k().unsigned_abs();
    let comp_log2 = twisted_mobius_sum(d_cap, 1.0, LogPower::Two, MobiusCondition::CoprimeTo(km))?;
    let comp_log1 = twisted_mobius_sum(d_cap, 1.0, LogPower::One, MobiusCondition::CoprimeTo(km))?;

    let positive = env.last().map(|e| e.1 > 0.0).unwrap_or(false);
    let status = if stable && positive {
        ClaimStatus::TrendConsistent
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-08".into(),
        paper_ref: "Eq. (8)".into(),
        params: params_of(&[("form", form.label()), ("grid_top", x_top.to_string())]),
        status,
        witness: None,
        checkpoints: trace_points(&tr),
        fits: fit_res.iter().map(FitOut::from).collect(),
        notes: format!(
            "component sums at d <= {d_cap}, gcd(d, {km}) = 1: \
             sum mu(d) log^2 d / d = {}, sum mu(d) log d / d = {} (the error-term sum \
             has the same shape as the first); which lemma variant applies to which \
             component is ambiguous in the source, so all are reported",
            sig12(comp_log2.value),
            sig12(comp_log1.value),
        ),
    })
}

/// C-10: sign changes of the coprimality-restricted
/// sum mu(d) log^2 d / d. Strictly report-only.
fn run_c10(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let form = config.form();
    let km = form.m() * form.k().unsigned_abs();
    let hi = ctx.table.limit().min(config.grid_hi as u64);
    let dense = GridSpec {
        lo: 1e3,
        hi: hi as f64,
        ratio: 10f64.powf(0.125),
    }
    .checkpoints();
    let tr = twisted_mobius_trace(&dense, 1.0, LogPower::Two, MobiusCondition::CoprimeTo(km))?;
    let brackets = sign_changes(&tr);
    Ok(ClaimVerdict {
        claim_id: "C-10".into(),
        paper_ref: "Eq. (10)".into(),
        params: params_of(&[
            ("condition", format!("gcd(d, {km}) = 1")),
            ("grid", format!("1e3..{hi} ratio 10^(1/8)")),
        ]),
        status: ClaimStatus::ReportOnly,
        witness: None,
        checkpoints: trace_points(&tr),
        fits: vec![],
        notes: format!(
            "sign-change inventory: {} bracketing interval(s) {:?}; no assertion about \
             infinitude is made or checkable at finite scale",
            brackets.len(),
            brackets
                .iter()
                .map(|&(a, b)| (a, b))
                .collect::<Vec<_>>()
        ),
    })
}

/// C-13: partial sums of Lambda(n)/n^sigma stay below -zeta'/zeta, a
/// positive series bounded by its limit.
fn run_c13(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let x_max = *grid.last().unwrap();
    let sigmas = [1.5f64, 2.0, 3.0];
    let mut bounds = Vec::new();
    for &s in &sigmas {
        let (z, zp) = zeta_and_deriv(s)?;
        bounds.push(-zp / z);
    }
    let mut acc: Vec<KahanSum> = vec![KahanSum::new(); sigmas.len()];
    let mut checkpoints = Vec::new();
    let mut witness = None;
    let powers = crate::dirichlet::proper_prime_powers(&ctx.table, x_max);
    let mut pw = powers.iter().peekable();
    let mut gi = 0usize;
    let push_rows =
        |x: u64, acc: &[KahanSum], checkpoints: &mut Vec<CheckpointOut>| {
            for (si, a) in acc.iter().enumerate() {
                checkpoints.push(CheckpointOut {
                    x: x as f64,
                    value: a.value(),
                    main: Some(bounds[si]),
                    residual: Some(a.value() - bounds[si]),
                });
            }
        };
    let add = |n: u64, base: u64, acc: &mut [KahanSum], witness: &mut Option<_>| {
        let lam = (base as f64).ln();
        for (si, &s) in sigmas.iter().enumerate() {
            acc[si].add(lam / (n as f64).powf(s));
            if acc[si].value() > bounds[si] && witness.is_none() {
                *witness = Some(BTreeMap::from([
                    ("sigma".to_string(), sig12(s)),
                    ("x".to_string(), n.to_string()),
                    ("partial_sum".to_string(), sig12(acc[si].value())),
                    ("bound".to_string(), sig12(bounds[si])),
                ]));
            }
        }
    };
    for p in ctx.table.primes_in(2, x_max) {
        while let Some(&&(n, base)) = pw.peek() {
            if n >= p {
                break;
            }
            while gi < grid.len() && grid[gi] < n {
                push_rows(grid[gi], &acc, &mut checkpoints);
                gi += 1;
            }
            add(n, base, &mut acc, &mut witness);
            pw.next();
        }
        while gi < grid.len() && grid[gi] < p {
            push_rows(grid[gi], &acc, &mut checkpoints);
            gi += 1;
        }
        add(p, p, &mut acc, &mut witness);
    }
    for &(n, base) in pw {
        while gi < grid.len() && grid[gi] < n {
            push_rows(grid[gi], &acc, &mut checkpoints);
            gi += 1;
        }
        add(n, base, &mut acc, &mut witness);
    }
    while gi < grid.len() {
        push_rows(grid[gi], &acc, &mut checkpoints);
        gi += 1;
    }
    let status = if witness.is_none() {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::Counterexample
    };
    Ok(ClaimVerdict {
        claim_id: "C-13".into(),
        paper_ref: "Eq. (13)".into(),
        params: params_of(&[
            ("sigmas", format!("{sigmas:?}")),
            ("x_max", x_max.to_string()),
        ]),
        status,
        witness,
        checkpoints,
        fits: vec![],
        notes: "three rows per grid point (sigma = 1.5, 2, 3); main = -zeta'(s)/zeta(s); \
                every increment of the positive series was checked against the bound"
            .into(),
    })
}

/// C-14: S(x) ~ c loglog x; the fitted c is compared against the
/// Hardy-Littlewood singular series (a comparison target external to the
/// claim itself, which never names c).
fn run_c14(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let form = config.form();
    let tr = pair_weighted_trace(&ctx.table, &grid, form)?;
    // Prefer the window past 1e5 where loglog has some lever arm; fall back
    // to the whole grid when the configuration leaves too few points there.
    let window_lo = 1e5f64.min(*grid.last().unwrap() as f64);
    let fit_res = fit(&tr, FitModel::CLogLog, Some((window_lo, f64::INFINITY)))
        .or_else(|_| fit(&tr, FitModel::CLogLog, None));
    let oracle = singular_series(form, 10_000_000.min(ctx.table.limit()))?;
    let (status, cmp_note) = match (&fit_res, oracle.value > 0.0) {
        (Ok(f), true) => {
            let rel = (f.c - oracle.value).abs() / oracle.value;
            (
                if rel <= 0.25 {
                    ClaimStatus::TrendConsistent
                } else {
                    ClaimStatus::ReportOnly
                },
                format!(
                    "fit c = {} vs singular series {} (relative gap {})",
                    sig12(f.c),
                    sig12(oracle.value),
                    sig12(rel)
                ),
            )
        }
        (Err(e), _) => (
            ClaimStatus::ReportOnly,
            format!("fit unavailable on this grid: {e}"),
        ),
        (_, false) => (
            ClaimStatus::ReportOnly,
            "form is parity-obstructed; no positive density target".to_string(),
        ),
    };
    Ok(ClaimVerdict {
        claim_id: "C-14".into(),
        paper_ref: "Eq. (14)".into(),
        params: params_of(&[
            ("form", form.label()),
            ("fit_window_lo", sig12(window_lo)),
        ]),
        status,
        witness: None,
        checkpoints: trace_points(&tr),
        fits: fit_res.iter().map(FitOut::from).collect(),
        notes: format!(
            "{cmp_note}; the singular-series target is this workbench's choice of \
             comparison constant, not one named by the claim"
        ),
    })
}

/// C-18: pi_f(x) sandwiched between multiples of x / log^2 x.
/// Envelope: pi_f(x) log^2 x / x.
fn run_c18(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let form = config.form();
    let tr = pair_count_trace(&ctx.table, &grid, form)?;
    let env: Vec<(f64, f64)> = tr
        .checkpoints
        .iter()
        .map(|c| {
            let l = c.x.ln();
            (c.x, c.value * l * l / c.x)
        })
        .collect();
    let stable = envelope_stable(&env);
    let positive = env.last().map(|e| e.1 > 0.0).unwrap_or(false);
    let fit_res = fit(&tr, FitModel::CXOverLog2, None).ok();
    let oracle = singular_series(form, 10_000_000.min(ctx.table.limit()))?;
    let status = if stable && positive {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    let checkpoints: Vec<CheckpointOut> = tr
        .checkpoints
        .iter()
        .zip(&env)
        .map(|(c, e)| CheckpointOut {
            x: c.x,
            value: c.value,
            main: None,
            residual: Some(e.1),
        })
        .collect();
    Ok(ClaimVerdict {
        claim_id: "C-18".into(),
        paper_ref: "Eq. (18)".into(),
        params: params_of(&[("form", form.label())]),
        status,
        witness: None,
        checkpoints,
        fits: fit_res.iter().map(FitOut::from).collect(),
        notes: format!(
            "residual column holds the envelope pi_f(x) log^2 x / x; envelope at top {}; \
             fit c = {} vs singular series {}",
            sig12(env.last().map(|e| e.1).unwrap_or(f64::NAN)),
            fit_res
                .as_ref()
                .map(|f| sig12(f.c))
                .unwrap_or_else(|| "unavailable".into()),
            sig12(oracle.value)
        ),
    })
}

/// C-22: reciprocal Mertens sum in a progression against
/// loglog x / phi(q) + 1/p(a,q), with error envelope scaled by
/// log 2q / phi(q).
fn run_c22(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let moduli: Vec<u64> = [3u64, 4, 5, 7]
        .into_iter()
        .filter(|&q| q <= config.q_max)
        .collect();
    let mut checkpoints = Vec::new();
    let mut all_stable = true;
    let mut max_env: f64 = 0.0;
    for &q in &moduli {
        let scale = evaluate(q)?.phi as f64 / (2.0 * q as f64).ln();
        for a in reduced_residues(q) {
            let ap = APClass::new(a, q)?;
            let tr = mertens_ap_trace(&ctx.table, &grid, ap, MertensWeight::Reciprocal)?;
            let env: Vec<(f64, f64)> = tr
                .checkpoints
                .iter()
                .map(|c| (c.x, c.residual.unwrap_or(f64::NAN).abs() * scale))
                .collect();
            all_stable &= envelope_stable(&env);
            max_env = max_env.max(env.last().map(|e| e.1).unwrap_or(f64::NAN));
            checkpoints.extend(trace_points(&tr));
        }
    }
    let status = if all_stable {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-22".into(),
        paper_ref: "Theorem 3, Eq. (22)".into(),
        params: params_of(&[("moduli", format!("{moduli:?}"))]),
        status,
        witness: None,
        checkpoints,
        fits: vec![],
        notes: format!(
            "main = loglog x / phi(q) + 1/p(a,q); implied-constant envelope \
             |residual| phi(q) / log 2q reaches {} at the top grid point; the error-term \
             constant is unspecified in the source, so envelope stability is the \
             pass criterion",
            sig12(max_env)
        ),
    })
}

/// C-23: the reciprocal prime-power pair sum converges to a constant; the
/// top-decade variation estimates how settled it is.
fn run_c23(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let form = config.form();
    let mut checkpoints = Vec::new();
    let mut values = Vec::new();
    for &x in &grid {
        let v = prime_power_pair_sum(&ctx.table, x, form, PowerWeight::Reciprocal, None)?;
        values.push((x, v));
        checkpoints.push(CheckpointOut {
            x: x as f64,
            value: v,
            main: None,
            residual: None,
        });
    }
    let last = values.last().map(|&(_, v)| v).unwrap_or(f64::NAN);
    let two_decades_back = values
        .iter()
        .rev()
        .find(|&&(x, _)| (x as f64) <= *grid.last().unwrap() as f64 / 100.0)
        .map(|&(_, v)| v);
    let (status, note) = match two_decades_back {
        Some(prev) if last > 0.0 => {
            let rel = (last - prev).abs() / last;
            (
                if rel < 0.01 {
                    ClaimStatus::BoundedPass
                } else {
                    ClaimStatus::ReportOnly
                },
                format!(
                    "relative variation over the top two decades {} (pass threshold 1%); \
                     empirical constant c0 ~ {}",
                    sig12(rel),
                    sig12(last)
                ),
            )
        }
        _ => (
            ClaimStatus::ReportOnly,
            "grid too short to bracket two decades".to_string(),
        ),
    };
    Ok(ClaimVerdict {
        claim_id: "C-23".into(),
        paper_ref: "Lemma 4, Eq. (23)".into(),
        params: params_of(&[("form", form.label())]),
        status,
        witness: None,
        checkpoints,
        fits: vec![],
        notes: note,
    })
}

/// C-25: the twisted Mobius sum at s = 2 against zeta'(2)/zeta(2)^2, with
/// the conditioned variants tabulated for self-consistency.
fn run_c25(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let tr = twisted_mobius_trace(&grid, 2.0, LogPower::One, MobiusCondition::Unconditional)?;
    let env: Vec<(f64, f64)> = tr
        .checkpoints
        .iter()
        .map(|c| {
            let shape = c.x.powf(-1.0) * (-(c.x.ln().sqrt())).exp();
            (c.x, c.residual.unwrap_or(f64::NAN).abs() / shape)
        })
        .collect();
    let stable = envelope_stable(&env);
    let gap_top = tr
        .checkpoints
        .last()
        .and_then(|c| c.residual)
        .unwrap_or(f64::NAN);

    // Variants (ii)/(iii) at s = 1 for one residue class: empirical partial
    // sums only (their L-function limit targets are out of scope).
    let x_top = *grid.last().unwrap();
    let coprime = twisted_mobius_sum(x_top, 1.0, LogPower::One, MobiusCondition::CoprimeTo(4))?;
    let residue = twisted_mobius_sum(
        x_top,
        1.0,
        LogPower::One,
        MobiusCondition::Residue { a: 1, q: 4 },
    )?;

    let status = if stable && gap_top.abs() < 1e-3 {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-25".into(),
        paper_ref: "Lemma 5, Eq. (25)".into(),
        params: params_of(&[("s", "2".into()), ("x_max", x_top.to_string())]),
        status,
        witness: None,
        checkpoints: trace_points(&tr),
        fits: vec![],
        notes: format!(
            "main = zeta'(2)/zeta(2)^2 from the Euler-Maclaurin evaluator; gap at top {}; \
             envelope divides by x^(1-s) e^(-sqrt(log x)); conditioned partial sums at \
             s = 1, x = {x_top}: gcd(n,4)=1 -> {}, n ≡ 1 (mod 4) -> {} (L-function \
             limit targets out of scope)",
            sig12(gap_top),
            sig12(coprime.value),
            sig12(residue.value)
        ),
    })
}

/// C-29: sum mu(n) log n / n converges to -1.
fn run_c29(_ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let x = 10_000_000u64.min(config.limit);
    let r = twisted_mobius_sum(x, 1.0, LogPower::One, MobiusCondition::Unconditional)?;
    let gap = (r.value - (-1.0)).abs();
    let status = if gap <= 0.1 {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::Counterexample
    };
    let witness = if status == ClaimStatus::Counterexample {
        Some(BTreeMap::from([
            ("op".to_string(), "twisted_mobius_sum".to_string()),
            ("x".to_string(), x.to_string()),
            ("value".to_string(), sig12(r.value)),
            ("target".to_string(), "-1".to_string()),
        ]))
    } else {
        None
    };
    Ok(ClaimVerdict {
        claim_id: "C-29".into(),
        paper_ref: "Eq. (29), first constant".into(),
        params: params_of(&[("x", x.to_string()), ("tolerance", "0.1".into())]),
        status,
        witness,
        checkpoints: vec![CheckpointOut {
            x: x as f64,
            value: r.value,
            main: Some(-1.0),
            residual: Some(r.value + 1.0),
        }],
        fits: vec![],
        notes: format!("distance from -1: {}", sig12(gap)),
    })
}

/// C-31: sum Lambda(mp+k) against li(x), ratio compared to the
/// singular-series density.
fn run_c31(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let form = config.form();
    let tr = lambda_pair_trace(&ctx.table, &grid, form)?;
    let oracle = singular_series(form, 10_000_000.min(ctx.table.limit()))?;
    let checkpoints: Vec<CheckpointOut> = tr
        .checkpoints
        .iter()
        .map(|c| {
            let li = log_integral(c.x).unwrap_or(f64::NAN);
            CheckpointOut {
                x: c.x,
                value: c.value,
                main: Some(oracle.value * li),
                residual: Some(c.value / li),
            }
        })
        .collect();
    let ratio_top = checkpoints
        .last()
        .and_then(|c| c.residual)
        .unwrap_or(f64::NAN);
    let fit_res = fit(&tr, FitModel::CLi, None).ok();
    let (status, cmp) = if oracle.value > 0.0 {
        let rel = (ratio_top - oracle.value).abs() / oracle.value;
        (
            if rel <= 0.25 {
                ClaimStatus::TrendConsistent
            } else {
                ClaimStatus::ReportOnly
            },
            format!("top ratio/{} relative gap {}", sig12(oracle.value), sig12(rel)),
        )
    } else {
        (ClaimStatus::ReportOnly, "parity-obstructed form".to_string())
    };
    Ok(ClaimVerdict {
        claim_id: "C-31".into(),
        paper_ref: "Theorem 6, Eq. (31)".into(),
        params: params_of(&[("form", form.label())]),
        status,
        witness: None,
        checkpoints,
        fits: fit_res.iter().map(FitOut::from).collect(),
        notes: format!(
            "residual column holds value/li(x); {cmp}; the claim is conditional on an \
             unproven equidistribution conjecture, so only the trend is audited"
        ),
    })
}

/// C-40: normalized errors (psi(x,q,a) - x/phi(q)) sqrt(q)/sqrt(x) across
/// the grid and moduli.
fn run_c40(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let q_max = config.q_max.min(100);
    let trace = montgomery_track(&ctx.table, &grid, 1..=q_max, ResidueRule::AllReduced)?;
    // The reported normalization divides by sqrt(x/q) exactly (epsilon = 0,
    // so structure stays visible). The pass rule divides by the claim's full
    // x^(1/2+eps)/sqrt(q) shape at a fixed annotated epsilon, since at
    // epsilon = 0 the envelope is expected to carry the log-factor slack of
    // the O(.) and grows slowly.
    const PASS_EPSILON: f64 = 0.1;
    let mut all_stable = true;
    let mut worst_env: f64 = 0.0;
    let mut checkpoints = Vec::new();
    for q in 1..=q_max {
        let mut per_x: Vec<(f64, f64)> = Vec::new();
        let mut top_norm = f64::NAN;
        for &x in &grid {
            let m = trace
                .rows
                .iter()
                .filter(|r| r.q == q && r.x == x)
                .map(|r| r.normalized.abs())
                .fold(0.0f64, f64::max);
            per_x.push((x as f64, m / (x as f64).powf(PASS_EPSILON)));
            top_norm = m;
        }
        all_stable &= envelope_stable(&per_x);
        worst_env = worst_env.max(top_norm);
        checkpoints.push(CheckpointOut {
            x: q as f64,
            value: top_norm,
            main: None,
            residual: None,
        });
    }
    let status = if all_stable {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-40".into(),
        paper_ref: "Conjecture 7, Eq. (40)".into(),
        params: params_of(&[
            ("q_range", format!("1..={q_max}")),
            ("residues", "all reduced".into()),
            ("pass_epsilon", sig12(PASS_EPSILON)),
        ]),
        status,
        witness: None,
        checkpoints,
        fits: vec![],
        notes: format!(
            "x column holds q; value = max |(psi - x/phi(q)) sqrt(q)/sqrt(x)| over grid \
             and residues, epsilon = 0 (largest {}); the stability rule divides by \
             x^(1/2+eps)/sqrt(q) with eps = {PASS_EPSILON} because the eps = 0 envelope \
             legitimately carries the log-factor slack of the error term",
            sig12(worst_env)
        ),
    })
}

/// C-42: the character decomposition of psi(x, q, a) equals the direct
/// progression sum. Exact identity at rounding tolerance.
fn run_c42(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let x = 100_000u64.min(ctx.table.limit());
    let q_max = config.q_max.min(50);
    let psi_x = psi_ap(&ctx.table, x, 1, 1)?;
    let tol = 1e-9 * psi_x;
    let mut worst: f64 = 0.0;
    let mut witness = None;
    let mut checkpoints = Vec::new();
    let mut any_noncyclic = false;
    for q in 1..=q_max {
        let group = character_group(q)?;
        any_noncyclic |= !group.is_cyclic();
        let twisted = psi_twisted_all(&ctx.table, x, &group)?;
        let mut q_worst: f64 = 0.0;
        for a in reduced_residues(q) {
            let via = psi_ap_from_twisted(&group, &twisted, a)?;
            let direct = psi_ap(&ctx.table, x, q, a)?;
            let diff = (via - direct).abs();
            q_worst = q_worst.max(diff);
            if diff > tol && witness.is_none() {
                witness = Some(BTreeMap::from([
                    ("op".to_string(), "psi_ap_via_characters".to_string()),
                    ("x".to_string(), x.to_string()),
                    ("q".to_string(), q.to_string()),
                    ("a".to_string(), a.to_string()),
                    ("via_characters".to_string(), sig12(via)),
                    ("direct".to_string(), sig12(direct)),
                ]));
            }
        }
        worst = worst.max(q_worst);
        checkpoints.push(CheckpointOut {
            x: q as f64,
            value: q_worst,
            main: Some(tol),
            residual: Some(q_worst - tol),
        });
    }
    let status = if witness.is_none() {
        ClaimStatus::ExactPass
    } else {
        ClaimStatus::Counterexample
    };
    let mut notes = format!(
        "x column holds q; value = max |decomposition - direct| over reduced residues; \
         worst {} against tolerance {} = 1e-9 psi({x})",
        sig12(worst),
        sig12(tol)
    );
    if any_noncyclic {
        notes.push_str(
            "; moduli with non-cyclic unit groups use the multi-generator character \
             indexing (a single discrete logarithm only parameterizes cyclic cases)",
        );
    }
    Ok(ClaimVerdict {
        claim_id: "C-42".into(),
        paper_ref: "Eq. (42)".into(),
        params: params_of(&[("x", x.to_string()), ("q_range", format!("1..={q_max}"))]),
        status,
        witness,
        checkpoints,
        fits: vec![],
        notes,
    })
}

/// C-45: twisted psi against E0(chi) x with the sqrt(x) log x log(qx)
/// error shape divided out.
fn run_c45(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let moduli: Vec<u64> = [3u64, 4, 5, 8]
        .into_iter()
        .filter(|&q| q <= config.q_max)
        .collect();
    let mut all_stable = true;
    let mut worst_env: f64 = 0.0;
    let mut checkpoints = Vec::new();
    for &q in &moduli {
        let group = character_group(q)?;
        let chars = group.characters();
        let mut per_x_max: Vec<(f64, f64)> = Vec::new();
        for &x in &grid {
            let twisted = psi_twisted_all(&ctx.table, x, &group)?;
            let xf = x as f64;
            let shape = xf.sqrt() * xf.ln() * (q as f64 * xf).ln();
            let mut m = 0.0f64;
            for (chi, psi) in chars.iter().zip(&twisted) {
                let main = if chi.is_principal() { xf } else { 0.0 };
                let err = ((psi.re - main).powi(2) + psi.im.powi(2)).sqrt();
                m = m.max(err / shape);
            }
            per_x_max.push((xf, m));
            checkpoints.push(CheckpointOut {
                x: xf,
                value: m,
                main: Some(q as f64),
                residual: None,
            });
        }
        all_stable &= envelope_stable(&per_x_max);
        worst_env = worst_env.max(per_x_max.last().map(|e| e.1).unwrap_or(f64::NAN));
    }
    let status = if all_stable {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-45".into(),
        paper_ref: "Theorem 9, Eq. (45)".into(),
        params: params_of(&[("moduli", format!("{moduli:?}"))]),
        status,
        witness: None,
        checkpoints,
        fits: vec![],
        notes: format!(
            "value = max over characters of |psi(x,chi) - E0(chi) x| / \
             (sqrt(x) log x log qx); main column echoes q; worst top-grid envelope {}",
            sig12(worst_env)
        ),
    })
}

/// C-46: the unweighted prime-power pair sum against c x^(1/2).
fn run_c46(ctx: &AuditContext, config: &AuditConfig) -> Result<ClaimVerdict> {
    let grid = config.grid(ctx.table.limit());
    let form = config.form();
    let mut env = Vec::new();
    let mut checkpoints = Vec::new();
    for &x in &grid {
        let v = prime_power_pair_sum(&ctx.table, x, form, PowerWeight::Unweighted, None)?;
        let e = v / (x as f64).sqrt();
        env.push((x as f64, e));
        checkpoints.push(CheckpointOut {
            x: x as f64,
            value: v,
            main: None,
            residual: Some(e),
        });
    }
    let stable = envelope_stable(&env);
    let status = if stable {
        ClaimStatus::BoundedPass
    } else {
        ClaimStatus::ReportOnly
    };
    Ok(ClaimVerdict {
        claim_id: "C-46".into(),
        paper_ref: "Lemma 10, Eq. (46)".into(),
        params: params_of(&[("form", form.label())]),
        status,
        witness: None,
        checkpoints,
        fits: vec![],
        notes: format!(
            "residual column holds the envelope value/sqrt(x); top envelope {}",
            sig12(env.last().map(|e| e.1).unwrap_or(f64::NAN))
        ),
    })
}
