//! Command execution: core checks in, certificates and exit codes out.

use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use svcert_core::bounds::{self, BoundKind, BoundReport};
use svcert_core::contact::{self, ContactReport, ContactStatus};
use svcert_core::terracini::{self, SecantStatus};
use svcert_core::Format;

use crate::certificate::{big_string, points_strings, strings, BoundEntry, Certificate, CERTIFICATE_VERSION};

/// Exit codes: 0 certified / pass, 1 usage error, 2 inconclusive or defect
/// suggested, 3 verify-paper mismatch.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug)]
pub struct RunOutput {
    pub certificate: Certificate,
    pub exit: i32,
}

/// Common knobs shared by the sampling commands.
#[derive(Debug, Clone, Copy)]
pub struct SampleOpts {
    pub seed: u64,
    pub retries: usize,
    pub box_halfwidth: i64,
}

impl Default for SampleOpts {
    fn default() -> Self {
        Self {
            seed: 0,
            retries: terracini::DEFAULT_RETRIES,
            box_halfwidth: terracini::DEFAULT_BOX,
        }
    }
}

pub fn parse_format(n: &str, d: &str) -> Result<Format> {
    let parse = |s: &str, what: &str| -> Result<Vec<usize>> {
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .with_context(|| format!("cannot parse {what} entry {x:?}"))
            })
            .collect()
    };
    Format::new(parse(n, "--n")?, parse(d, "--d")?).map_err(|e| anyhow!("{e}"))
}

pub fn parse_orders(orders: &str) -> Result<Vec<usize>> {
    orders
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .with_context(|| format!("cannot parse --orders entry {x:?}"))
        })
        .collect()
}

/// `--s` accepts a dimension or `max` for `N - 1`.
pub fn parse_s(s: &str, fmt: &Format) -> Result<usize> {
    if s.trim().eq_ignore_ascii_case("max") {
        let n = fmt.ambient_dim().map_err(|e| anyhow!("{e}"))?;
        return Ok(n - 1);
    }
    s.trim()
        .parse::<usize>()
        .with_context(|| format!("cannot parse --s value {s:?}"))
}

fn base_certificate(command: &str, fmt: &Format) -> Certificate {
    Certificate {
        version: CERTIFICATE_VERSION.into(),
        command: command.into(),
        n: strings(fmt.n()),
        d: strings(fmt.d()),
        h: None,
        s: None,
        orders: None,
        seed: "0".into(),
        retries: None,
        box_halfwidth: None,
        expected_dim: None,
        computed_lower_bound: None,
        defect: None,
        span_dim: None,
        ranks: None,
        kernel_dims: None,
        certified_h: None,
        bounds: None,
        sampled_points: None,
        attempts: None,
        verdict: String::new(),
        wall_time_ms: "0".into(),
    }
}

fn fill_sample_opts(cert: &mut Certificate, opts: &SampleOpts) {
    cert.seed = opts.seed.to_string();
    cert.retries = Some(opts.retries.to_string());
    cert.box_halfwidth = Some(opts.box_halfwidth.to_string());
}

pub fn run_secant(fmt: &Format, h: usize, opts: SampleOpts) -> Result<RunOutput> {
    let start = Instant::now();
    let verdict = terracini::secant_defect_check_with(fmt, h, opts.seed, opts.retries, opts.box_halfwidth)
        .map_err(|e| anyhow!("{e}"))?;
    let mut cert = base_certificate("secant", fmt);
    cert.h = Some(h.to_string());
    fill_sample_opts(&mut cert, &opts);
    cert.expected_dim = Some(verdict.expected.to_string());
    cert.computed_lower_bound = Some(verdict.computed_lower_bound.to_string());
    cert.defect = Some(verdict.defect.to_string());
    cert.ranks = Some(verdict.ranks.iter().map(|r| r.to_string()).collect());
    cert.sampled_points = Some(points_strings(&verdict.decisive));
    cert.attempts = Some(verdict.attempts.to_string());
    cert.verdict = match verdict.status {
        SecantStatus::NonDefectiveCertified => "NonDefectiveCertified".into(),
        SecantStatus::DefectSuggested => "DefectSuggested".into(),
    };
    cert.wall_time_ms = start.elapsed().as_millis().to_string();
    let exit = match verdict.status {
        SecantStatus::NonDefectiveCertified => EXIT_OK,
        SecantStatus::DefectSuggested => EXIT_INCONCLUSIVE,
    };
    Ok(RunOutput {
        certificate: cert,
        exit,
    })
}

fn contact_certificate(
    command: &str,
    fmt: &Format,
    h: Option<usize>,
    opts: &SampleOpts,
    report: &ContactReport,
    elapsed_ms: u128,
) -> Certificate {
    let mut cert = base_certificate(command, fmt);
    cert.h = h.map(|h| h.to_string());
    fill_sample_opts(&mut cert, opts);
    cert.s = Some(report.s.to_string());
    cert.span_dim = Some(report.span_dim.to_string());
    cert.ranks = Some(report.span_ranks.iter().map(|r| r.to_string()).collect());
    cert.kernel_dims = Some(
        report
            .all_kernel_dims
            .iter()
            .map(|a| a.iter().map(|d| d.to_string()).collect())
            .collect(),
    );
    cert.sampled_points = report.decisive.as_ref().map(points_strings);
    cert.attempts = Some(report.attempts.to_string());
    cert.verdict = verdict_string(report.status).into();
    cert.wall_time_ms = elapsed_ms.to_string();
    cert
}

pub fn verdict_string(status: ContactStatus) -> &'static str {
    match status {
        ContactStatus::NotTwdCertified => "NotTWDCertified",
        ContactStatus::Inconclusive => "Inconclusive",
    }
}

fn contact_exit(status: ContactStatus) -> i32 {
    match status {
        ContactStatus::NotTwdCertified => EXIT_OK,
        ContactStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

pub fn run_contact_wd(fmt: &Format, h: usize, opts: SampleOpts) -> Result<RunOutput> {
    let start = Instant::now();
    let report = contact::wd_check_with(fmt, h, opts.seed, opts.retries, opts.box_halfwidth)
        .map_err(|e| anyhow!("{e}"))?;
    let cert = contact_certificate("contact wd", fmt, Some(h), &opts, &report, start.elapsed().as_millis());
    Ok(RunOutput {
        exit: contact_exit(report.status),
        certificate: cert,
    })
}

pub fn run_contact_twd(fmt: &Format, h: usize, opts: SampleOpts) -> Result<RunOutput> {
    let start = Instant::now();
    let report = contact::twd_check_with(fmt, h, opts.seed, opts.retries, opts.box_halfwidth)
        .map_err(|e| anyhow!("{e}"))?;
    let cert = contact_certificate("contact twd", fmt, Some(h), &opts, &report, start.elapsed().as_millis());
    Ok(RunOutput {
        exit: contact_exit(report.status),
        certificate: cert,
    })
}

pub fn run_contact_hstwd(fmt: &Format, h: usize, s: usize, opts: SampleOpts) -> Result<RunOutput> {
    let start = Instant::now();
    let report = contact::hs_twd_check_with(fmt, h, s, opts.seed, opts.retries, opts.box_halfwidth)
        .map_err(|e| anyhow!("{e}"))?;
    let cert = contact_certificate("contact hstwd", fmt, Some(h), &opts, &report, start.elapsed().as_millis());
    Ok(RunOutput {
        exit: contact_exit(report.status),
        certificate: cert,
    })
}

pub fn run_contact_osc(fmt: &Format, orders: &[usize], s: usize, opts: SampleOpts) -> Result<RunOutput> {
    if orders.is_empty() {
        bail!("--orders must list at least one order");
    }
    let start = Instant::now();
    let osc = contact::osculating_hypothesis_check(fmt, orders, s, opts.seed, opts.retries)
        .map_err(|e| anyhow!("{e}"))?;
    let mut cert = contact_certificate(
        "contact osc",
        fmt,
        None,
        &opts,
        &osc.contact,
        start.elapsed().as_millis(),
    );
    cert.orders = Some(strings(orders));
    cert.certified_h = osc.certified_h.as_ref().map(big_string);
    Ok(RunOutput {
        exit: contact_exit(osc.contact.status),
        certificate: cert,
    })
}

fn bound_entry(kind: &str, report: &BoundReport) -> BoundEntry {
    debug_assert!(matches!(
        report.kind,
        BoundKind::WdBound | BoundKind::TwdBound | BoundKind::OneSThreshold
    ));
    BoundEntry {
        kind: kind.into(),
        value: big_string(&report.value),
        branch: report.branch.clone(),
        iff: report.iff,
        assumptions_ok: report.assumptions_ok,
        asymptotic: report.asymptotic.as_ref().map(big_string),
    }
}

/// Evaluates every applicable closed-form statement for the format.
pub fn run_bounds(fmt: &Format) -> Result<RunOutput> {
    let start = Instant::now();
    let mut entries = Vec::new();
    entries.push(bound_entry("wd_bound", &bounds::wd_bound(fmt)));
    match bounds::one_wd_classify(fmt) {
        Ok(flag) => entries.push(BoundEntry {
            kind: "one_wd_classify".into(),
            value: if flag { "true".into() } else { "false".into() },
            branch: "linear factor dominating the remaining dimensions".into(),
            iff: true,
            assumptions_ok: true,
            asymptotic: None,
        }),
        Err(e) => entries.push(BoundEntry {
            kind: "one_wd_classify".into(),
            value: "degenerate".into(),
            branch: e.to_string(),
            iff: true,
            assumptions_ok: false,
            asymptotic: None,
        }),
    }
    if let Ok(report) = bounds::one_s_threshold(fmt) {
        entries.push(bound_entry("one_s_threshold", &report));
    }
    if let Ok(report) = bounds::twd_bound_linear_factor(fmt) {
        entries.push(bound_entry("twd_bound", &report));
    }
    let mut cert = base_certificate("bounds", fmt);
    cert.bounds = Some(entries);
    cert.verdict = "Reported".into();
    cert.wall_time_ms = start.elapsed().as_millis().to_string();
    Ok(RunOutput {
        certificate: cert,
        exit: EXIT_OK,
    })
}
