//! Request/report plumbing shared by the binary and the batch runner.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::{BufRead, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report, BoundsReport};
use crate::braid::{parse_braid_word, parse_power_blocks};
use crate::cocycle::shadow_multiset;
use crate::error::{Error, Result};
use crate::modp::{Prime, Residue, DEFAULT_CAP};
use crate::multiset::InvariantMultiset;
use crate::oracle::{verify_all, Verification};
use crate::quandle::{coloring_space, twist_acts_trivially};
use crate::toruscover::{
    phi_power_block, phi_simplified, shadow_power_block, BasisBraid, ExponentMode,
    TorusCoveringKnot,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Colorings,
    Shadow,
    Cocycle,
    Bounds,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Colorings => "colorings",
            Command::Shadow => "shadow",
            Command::Cocycle => "cocycle",
            Command::Bounds => "bounds",
            Command::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

fn default_n() -> i64 {
    1
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<String>,
    pub p: u64,
    #[serde(default = "default_n")]
    pub n: i64,
    #[serde(default)]
    pub mode: ExponentMode,
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default)]
    pub format: Format,
    /// Attach verifier results to the report.
    #[serde(default)]
    pub verify: bool,
}

impl Request {
    pub fn new(command: Command, p: u64) -> Self {
        Request {
            command,
            braid: None,
            blocks: None,
            p,
            n: default_n(),
            mode: ExponentMode::default(),
            cap: DEFAULT_CAP,
            format: Format::default(),
            verify: false,
        }
    }

    pub fn with_braid(mut self, braid: &str) -> Self {
        self.braid = Some(braid.into());
        self
    }

    pub fn with_blocks(mut self, blocks: &str) -> Self {
        self.blocks = Some(blocks.into());
        self
    }

    fn basis(&self) -> Result<BasisBraid> {
        match (&self.braid, &self.blocks) {
            (Some(b), None) => Ok(BasisBraid::Word(parse_braid_word(b)?)),
            (None, Some(b)) => Ok(BasisBraid::Blocks(parse_power_blocks(b)?)),
            _ => Err(Error::Hypothesis(
                "exactly one of braid or blocks is required".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiRoute {
    ClosedForm,
    Simplified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub request: Request,
    pub degree: usize,
    pub delta_exponent: i64,
    pub k: usize,
    /// `p^k`, as a decimal string.
    pub colorings: String,
    pub basis: Vec<Vec<Residue>>,
    pub components: usize,
    pub is_knot: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub multisets: BTreeMap<String, InvariantMultiset>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub a0: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_route: Option<PhiRoute>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<Verification>>,
    pub elapsed_us: u64,
}

impl Report {
    fn add_multiset(&mut self, name: &str, ms: InvariantMultiset) {
        self.a0.insert(name.into(), ms.a0().to_string());
        self.multisets.insert(name.into(), ms);
    }

    /// Whether every verifier that ran passed.
    pub fn verified(&self) -> bool {
        self.verification
            .as_ref()
            .is_none_or(|v| v.iter().all(|r| r.passed != Some(false)))
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

pub fn run(req: &Request) -> Result<Report> {
    let start = Instant::now();
    let p = Prime::new(req.p)?;
    let input = TorusCoveringKnot::new(req.basis()?, p, req.n, req.mode);
    let word = input.word();
    let space = coloring_space(&word, p);
    let components = word.closure_components();
    let mut report = Report {
        request: req.clone(),
        degree: word.degree(),
        delta_exponent: input.delta_exponent(),
        k: space.dimension(),
        colorings: space.size().to_string(),
        basis: space.basis.clone(),
        components,
        is_knot: components == 1,
        multisets: BTreeMap::new(),
        a0: BTreeMap::new(),
        phi_route: None,
        bounds: None,
        verification: None,
        elapsed_us: 0,
    };

    match req.command {
        Command::Colorings => {}
        Command::Shadow => {
            let ms = match input.basis.blocks() {
                Some(w) => shadow_power_block(w, p),
                None => shadow_multiset(&word, p, req.cap)?,
            };
            report.add_multiset("shadow", ms);
        }
        Command::Cocycle => {
            let e = input.delta_exponent();
            if !twist_acts_trivially(word.degree(), e, p) {
                return Err(Error::Hypothesis(format!(
                    "A_Δ^{e} is not the identity for m={}, p={p}",
                    word.degree()
                )));
            }
            let (route, ms) = match input.basis.blocks() {
                Some(w) if e % 2 == 0 => (PhiRoute::ClosedForm, phi_power_block(w, e / 2, p)),
                _ => (PhiRoute::Simplified, phi_simplified(&word, e, p, req.cap)?),
            };
            report.phi_route = Some(route);
            report.add_multiset("phi", ms);
        }
        Command::Bounds => {
            report.bounds = Some(bounds_report(&input, req.cap)?);
        }
        Command::Verify => {}
    }
    if req.verify || req.command == Command::Verify {
        report.verification = Some(verify_all(&word, p));
    }
    report.elapsed_us = start.elapsed().as_micros() as u64;
    Ok(report)
}

fn bool_word(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let req = &r.request;
    let input = req.braid.as_deref().or(req.blocks.as_deref()).unwrap_or("");
    let _ = writeln!(out, "command: {}", req.command);
    let _ = writeln!(out, "input: {input}");
    let _ = writeln!(
        out,
        "p = {}, n = {}, mode = {}, Δ exponent = {}",
        req.p, req.n, req.mode, r.delta_exponent
    );
    let _ = writeln!(out, "degree m = {}", r.degree);
    let _ = writeln!(out, "k = {}", r.k);
    let _ = writeln!(out, "colorings = {}", r.colorings);
    let _ = writeln!(
        out,
        "components = {} (knot: {})",
        r.components,
        bool_word(r.is_knot)
    );
    for (name, ms) in &r.multisets {
        let _ = writeln!(out, "{name}:");
        for (v, c) in ms.iter() {
            let _ = writeln!(out, "  {v:>5}  {c}");
        }
        let _ = writeln!(out, "  total  {}", ms.total());
        let _ = writeln!(out, "a0({name}) = {}", r.a0[name]);
    }
    if let Some(route) = r.phi_route {
        let _ = writeln!(
            out,
            "phi route: {}",
            serde_json::to_value(route).unwrap().as_str().unwrap()
        );
    }
    if let Some(b) = &r.bounds {
        render_bounds(&mut out, b);
    }
    if let Some(vs) = &r.verification {
        let _ = writeln!(out, "verification:");
        for v in vs {
            let status = match v.passed {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skipped",
            };
            let detail = v
                .detail
                .as_deref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default();
            let _ = writeln!(out, "  {:<18} {status}{detail}", v.name);
        }
    }
    let _ = writeln!(out, "elapsed: {} µs", r.elapsed_us);
    out
}

fn render_bounds(out: &mut String, b: &BoundsReport) {
    let _ = writeln!(out, "l = {}", b.l);
    if let Some(nu) = &b.nu {
        let _ = writeln!(out, "nu = {:?}", nu.as_slice());
    }
    if let Some(pp) = b.p_prime {
        let _ = writeln!(out, "p' = {pp}");
    }
    if let Some(a0) = &b.a0_shadow {
        let _ = writeln!(out, "a0(shadow) = {a0}");
    }
    if let Some(kp) = b.k_prime {
        let _ = writeln!(out, "k' = {kp}");
    }
    let _ = writeln!(out, "u <= {}", b.u_upper);
    if let Some(lower) = &b.u_lower {
        let _ = writeln!(out, "u >= {} [{}]", lower.value, lower.rule);
    }
    if let Some(u) = b.u_exact {
        let _ = writeln!(out, "u = {u}");
    }
    for t in &b.tau_lower {
        let _ = writeln!(out, "tau >= {} [{}]", t.value, t.rule);
    }
    if let Some(t) = b.tau_exact {
        let _ = writeln!(out, "tau = {t}");
    }
    let _ = writeln!(out, "rules:");
    for c in &b.checks {
        let state = if c.fired { "fired" } else { "did not fire" };
        let _ = writeln!(out, "  {} : {state}", c.rule);
        for h in &c.hypotheses {
            let _ = writeln!(out, "    [{}] {}", if h.holds { "x" } else { " " }, h.name);
        }
    }
    for note in &b.notes {
        let _ = writeln!(out, "note: {note}");
    }
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Text => render_text(r),
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
    }
}

/// Error record emitted by the batch runner in place of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchError {
    pub line: usize,
    pub error: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub ok: usize,
    pub failed: usize,
}

impl BatchSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            EXIT_PARTIAL
        } else {
            EXIT_OK
        }
    }
}

/// Processes newline-delimited JSON requests, writing one JSON line per
/// non-blank input line in input order.
pub fn batch<R: BufRead, W: Write>(input: R, mut output: W) -> std::io::Result<BatchSummary> {
    let mut summary = BatchSummary::default();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = serde_json::from_str::<Request>(&line)
            .map_err(|e| (format!("malformed request: {e}"), EXIT_USAGE))
            .and_then(|req| run(&req).map_err(|e| (e.to_string(), exit_code(&e))));
        let record = match outcome {
            Ok(report) => {
                summary.ok += 1;
                serde_json::to_string(&report)
            }
            Err((error, exit_code)) => {
                summary.failed += 1;
                serde_json::to_string(&BatchError {
                    line: idx + 1,
                    error,
                    exit_code,
                })
            }
        }
        .expect("records serialize");
        writeln!(output, "{record}")?;
    }
    output.flush()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colorings_example() {
        let r = run(&Request::new(Command::Colorings, 3).with_braid("m=3: (s1 s2^-1)^4")).unwrap();
        assert_eq!(r.k, 3);
        assert_eq!(r.colorings, "27");
    }

    #[test]
    fn bounds_example() {
        let mut req = Request::new(Command::Bounds, 7).with_blocks("m=3: 1:1 2:1");
        req.mode = ExponentMode::Twice;
        let r = run(&req).unwrap();
        let b = r.bounds.unwrap();
        assert_eq!(b.tau_exact, Some(2));
        assert_eq!(b.u_exact, Some(2));
    }

    #[test]
    fn shadow_example() {
        let r =
            run(&Request::new(Command::Shadow, 3).with_braid("m=5: s1^3 s2^3 s3^3 s4^3")).unwrap();
        assert_eq!(r.a0["shadow"], "297");
        let r = run(&Request::new(Command::Shadow, 3).with_blocks("m=5: 1:1 2:1 3:1 4:1")).unwrap();
        assert_eq!(r.a0["shadow"], "297");
    }

    #[test]
    fn cocycle_routes_agree() {
        for n in [1, 2] {
            let mut words = Request::new(Command::Cocycle, 5).with_braid("m=3: s1^5 s2^-5");
            words.n = n;
            words.mode = ExponentMode::Twice;
            let mut blocks = words.clone();
            blocks.braid = None;
            blocks.blocks = Some("m=3: 1:1 2:-1".into());
            let a = run(&words).unwrap();
            let b = run(&blocks).unwrap();
            assert_eq!(a.phi_route, Some(PhiRoute::Simplified));
            assert_eq!(b.phi_route, Some(PhiRoute::ClosedForm));
            assert_eq!(a.multisets["phi"], b.multisets["phi"]);
        }
    }

    #[test]
    fn error_exit_codes() {
        let e = run(&Request::new(Command::Colorings, 4).with_braid("m=2: s1")).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_USAGE);
        let e = run(&Request::new(Command::Colorings, 3).with_braid("m=2: s3")).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_USAGE);
        let mut req = Request::new(Command::Shadow, 3).with_braid("m=5: s1^3 s2^3 s3^3 s4^3");
        req.cap = 100;
        assert_eq!(exit_code(&run(&req).unwrap_err()), EXIT_BUDGET);
        let mut req = Request::new(Command::Cocycle, 3).with_braid("m=4: s1");
        req.mode = ExponentMode::Twice;
        assert!(matches!(run(&req), Err(Error::Hypothesis(_))));
        let both = Request::new(Command::Colorings, 3)
            .with_braid("m=2: s1")
            .with_blocks("m=2: 1:1");
        assert!(run(&both).is_err());
    }

    #[test]
    fn report_round_trips() {
        let mut req = Request::new(Command::Bounds, 3).with_blocks("m=5: 1:1 2:1 3:1 4:1");
        req.mode = ExponentMode::Twice;
        req.verify = true;
        let mut r = run(&req).unwrap();
        r.add_multiset(
            "shadow",
            shadow_power_block(
                &"m=5: 1:1 2:1 3:1 4:1".parse().unwrap(),
                r.bounds.as_ref().unwrap().p,
            ),
        );
        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.verified());
    }

    #[test]
    fn text_and_json_share_numbers() {
        let r = run(&Request::new(Command::Shadow, 3).with_braid("m=2: s1^3")).unwrap();
        let text = render_text(&r);
        let json: serde_json::Value = serde_json::from_str(&render(&r, Format::Json)).unwrap();
        for (v, c) in json["multisets"]["shadow"]["counts"].as_object().unwrap() {
            let line = format!("{:>5}  {}", v, c.as_str().unwrap());
            assert!(text.contains(&line), "missing {line:?} in\n{text}");
        }
        assert!(text.contains(&format!("k = {}", json["k"])));
    }

    #[test]
    fn batch_isolates_failures() {
        let input = concat!(
            r#"{"command":"colorings","braid":"m=2: s1","p":3}"#,
            "\n\n",
            "{not json\n",
            r#"{"command":"shadow","braid":"m=2: s1^3","p":3}"#,
            "\n"
        );
        let mut out = Vec::new();
        let summary = batch(input.as_bytes(), &mut out).unwrap();
        assert_eq!(summary, BatchSummary { ok: 2, failed: 1 });
        assert_eq!(summary.exit_code(), EXIT_PARTIAL);
        let lines: Vec<&str> = std::str::from_utf8(&out).unwrap().lines().collect();
        assert_eq!(lines.len(), 3);
        let err: BatchError = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(err.line, 3);
        let last: Report = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(last.request.command, Command::Shadow);
    }

    #[test]
    fn empty_batch() {
        let mut out = Vec::new();
        let summary = batch("".as_bytes(), &mut out).unwrap();
        assert_eq!(summary.exit_code(), EXIT_OK);
        assert!(out.is_empty());
    }
}
