//! Verbs behind the `splitauth` binary. Each verb takes file contents and
//! returns a [`CommandResult`]; the binary only does I/O.

use std::fmt::Write as _;
use std::time::Duration;

use splitauth_core::verify::coverage_histogram;
use splitauth_core::{
    code_to_design, design_to_code, encoding_rule_bound, feasibility, format_design, format_ratio,
    is_optimal, load_matrix, parse_design, search, store_matrix, verify_splitting_design, AuthCode,
    DesignParams, Error, Evaluator, Restarts, SearchConfig, SearchStatus, SecurityModel,
    SplittingDesign,
};

pub const EXIT_POSITIVE: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Kv,
}

/// Outcome of one verb: exit status, report in both renderings, and an
/// optional artifact (design or matrix file text).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: u8,
    pub report: String,
    pub kv: Vec<(String, String)>,
    pub artifact: Option<String>,
}

impl CommandResult {
    fn new(code: u8) -> Self {
        CommandResult {
            code,
            report: String::new(),
            kv: Vec::new(),
            artifact: None,
        }
    }

    pub fn usage(err: impl std::fmt::Display) -> Self {
        let mut r = Self::new(EXIT_USAGE);
        r.line(format!("error: {err}"));
        r.kv("error", err.to_string());
        r
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.report.push_str(s.as_ref());
        self.report.push('\n');
    }

    fn kv(&mut self, k: impl Into<String>, v: impl ToString) {
        self.kv.push((k.into(), v.to_string()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.report.clone(),
            Format::Kv => self.kv.iter().fold(String::new(), |mut s, (k, v)| {
                let _ = writeln!(s, "{k}={v}");
                s
            }),
        }
    }
}

fn failed(err: Error) -> CommandResult {
    match err {
        Error::Refused(_) | Error::Unsupported(_) => {
            let mut r = CommandResult::new(EXIT_NEGATIVE);
            r.line(format!("error: {err}"));
            r.kv("error", err.to_string());
            r
        }
        other => CommandResult::usage(other),
    }
}

fn names(design: &SplittingDesign, points: &[u32]) -> String {
    points
        .iter()
        .map(|&p| design.labels().name(p))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn cmd_verify(design_text: &str, t: Option<u64>, lambda: Option<u64>) -> CommandResult {
    let file = match parse_design(design_text) {
        Ok(f) => f,
        Err(e) => return failed(e),
    };
    let t = t.unwrap_or(file.params.t);
    let lambda = lambda.unwrap_or(file.params.lambda);
    let report = match verify_splitting_design(&file.design, t, lambda) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    let mut r = CommandResult::new(if report.passed {
        EXIT_POSITIVE
    } else {
        EXIT_NEGATIVE
    });
    let verdict = if report.passed { "passed" } else { "failed" };
    r.line(format!("design    {}", file.params));
    r.line(format!("check     t = {t}, lambda = {lambda}: {verdict}"));
    let hist: Vec<String> = report
        .histogram
        .iter()
        .map(|(k, n)| format!("{n} subsets x {k}"))
        .collect();
    r.line(format!("coverage  {}", hist.join(", ")));
    r.kv("verdict", verdict);
    r.kv("t", t);
    r.kv("lambda", lambda);
    r.kv("b", file.design.b());
    for (k, n) in &report.histogram {
        r.kv(format!("histogram.{k}"), n);
    }
    if let Some((subset, count)) = &report.counterexample {
        let s = names(&file.design, subset);
        r.line(format!(
            "counterexample {{{s}}} lies in {count} qualifying blocks"
        ));
        r.kv("counterexample", s);
        r.kv("counterexample.count", count);
    }
    r
}

pub fn cmd_feasible(params: &DesignParams) -> CommandResult {
    let rep = feasibility(params);
    let ok = rep.admissible();
    let mut r = CommandResult::new(if ok { EXIT_POSITIVE } else { EXIT_NEGATIVE });
    let yes = |b: bool| if b { "holds" } else { "fails" };
    r.line(format!("params         {params}"));
    r.line(format!("b              {}", format_ratio(&rep.blocks)));
    r.line(format!("(a) bl = vr    {}", yes(rep.relation_a_holds)));
    r.line(format!(
        "(b) C(v,t)lambda = b c^t C(u,t)  {}",
        yes(rep.relation_b_holds)
    ));
    let note = if params.t > 2 {
        " (reported only; not used for t > 2)"
    } else {
        ""
    };
    r.line(format!(
        "(c) r c^(t-1)(u-1) = lambda_2(v-1)  {}{note}",
        rep.relation_c
    ));
    r.line(format!(
        "pair identity r c (u-1) = lambda_2(v-1)  {}",
        rep.pair_identity
    ));
    let div = if rep.divisibility_failures.is_empty() {
        "ok".to_string()
    } else {
        format!("fails at s = {:?}", rep.divisibility_failures)
    };
    r.line(format!("divisibility   {div}"));
    r.line(format!("fisher b >= v/u  {}", rep.fisher));
    let ls: Vec<String> = rep.lambda_s_values.iter().map(format_ratio).collect();
    r.line(format!(
        "lambda_s       {} (s = 0..{})",
        ls.join(" "),
        params.t
    ));
    r.line(format!("admissible     {}", if ok { "yes" } else { "no" }));
    r.kv("b", format_ratio(&rep.blocks));
    r.kv("relation_a", yes(rep.relation_a_holds));
    r.kv("relation_b", yes(rep.relation_b_holds));
    r.kv("relation_c", rep.relation_c);
    r.kv("pair_identity", rep.pair_identity);
    r.kv(
        "divisibility_failures",
        rep.divisibility_failures
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    r.kv("fisher", rep.fisher);
    for (s, x) in rep.lambda_s_values.iter().enumerate() {
        r.kv(format!("lambda_s.{s}"), format_ratio(x));
    }
    r.kv("admissible", ok);
    r
}

pub fn cmd_search(params: &DesignParams, config: &SearchConfig) -> CommandResult {
    let out = match search(params, config) {
        Ok(o) => o,
        Err(e) => return failed(e),
    };
    let found = out.status == SearchStatus::Found;
    let mut r = CommandResult::new(if found { EXIT_POSITIVE } else { EXIT_NEGATIVE });
    r.line(format!("params    {params}"));
    r.line(format!("status    {}", out.status));
    if let Some(note) = &out.note {
        r.line(format!("note      {note}"));
    }
    r.line(format!(
        "stats     {} nodes, {} backtracks, {} run(s), {:.3} s",
        out.stats.nodes,
        out.stats.backtracks,
        out.stats.runs,
        out.stats.elapsed.as_secs_f64()
    ));
    r.kv("status", out.status);
    if let Some(b) = out.blocks {
        r.kv("b", b);
    }
    r.kv("nodes", out.stats.nodes);
    r.kv("backtracks", out.stats.backtracks);
    r.kv("runs", out.stats.runs);
    r.kv("elapsed_ms", out.stats.elapsed.as_millis());
    if let Some(note) = out.note {
        r.kv("note", note);
    }
    if let Some(d) = out.design {
        r.artifact = Some(format_design(&d, params.t, 1));
    }
    r
}

pub fn cmd_to_code(design_text: &str) -> CommandResult {
    let file = match parse_design(design_text) {
        Ok(f) => f,
        Err(e) => return failed(e),
    };
    if file.params.lambda != 1 {
        return failed(Error::Refused(format!(
            "lambda = {} (codes need lambda = 1)",
            file.params.lambda
        )));
    }
    match design_to_code(&file.design, file.params.t) {
        Ok(code) => {
            let mut r = CommandResult::new(EXIT_POSITIVE);
            r.line(format!(
                "code      {} rules, {} sources, {} messages, c = {}",
                code.rule_count(),
                code.source_count(),
                code.message_count(),
                file.params.c
            ));
            r.kv("rules", code.rule_count());
            r.kv("sources", code.source_count());
            r.kv("messages", code.message_count());
            r.artifact = Some(store_matrix(&code));
            r
        }
        Err(e) => failed(e),
    }
}

/// Highest strength `t <= u` at which the design is a uniform splitting
/// design, with its index.
fn detect_strength(design: &SplittingDesign) -> Option<(u64, u64)> {
    (1..=design.u()).rev().find_map(|t| {
        let (hist, _) = coverage_histogram(design, t, 0);
        match hist.keys().collect::<Vec<_>>()[..] {
            [&lambda] if lambda > 0 => Some((t as u64, lambda)),
            _ => None,
        }
    })
}

pub fn cmd_to_design(matrix_text: &str, t: Option<u64>) -> CommandResult {
    let code = match load_matrix(matrix_text) {
        Ok(c) => c,
        Err(e) => return failed(e),
    };
    let design = match code_to_design(&code) {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    let (t, lambda) = match t {
        Some(t) => match verify_splitting_design(&design, t, 1) {
            Ok(rep) if rep.passed => (t, 1),
            Ok(_) => {
                return failed(Error::Refused(format!(
                    "code does not yield a {t}-design with lambda = 1"
                )))
            }
            Err(e) => return failed(e),
        },
        None => match detect_strength(&design) {
            Some(x) => x,
            None => {
                return failed(Error::Refused(
                    "code does not yield a splitting design".into(),
                ))
            }
        },
    };
    let mut r = CommandResult::new(EXIT_POSITIVE);
    r.line(format!(
        "design    {}",
        design
            .params(t, lambda)
            .map(|p| p.to_string())
            .unwrap_or_default()
    ));
    r.kv("t", t);
    r.kv("lambda", lambda);
    r.kv("b", design.b());
    r.artifact = Some(format_design(&design, t, lambda));
    r
}

pub fn cmd_evaluate(
    matrix_text: &str,
    max_order: Option<usize>,
    allow_large: bool,
) -> CommandResult {
    let code = match load_matrix(matrix_text) {
        Ok(c) => c,
        Err(e) => return failed(e),
    };
    evaluate_code(&code, max_order, allow_large)
}

pub fn evaluate_code(
    code: &AuthCode,
    max_order: Option<usize>,
    allow_large: bool,
) -> CommandResult {
    let model = SecurityModel::Uniform;
    let ev = if allow_large {
        Evaluator::unguarded(code, model)
    } else {
        Evaluator::new(code, model)
    };
    let top = code.source_count().min(code.message_count()) - 1;
    let requested = max_order.unwrap_or(top);
    if requested > top {
        return CommandResult::usage(format!("max order {requested} exceeds u - 1 = {top}"));
    }
    let profile = match ev.and_then(|ev| ev.profile(Some(requested))) {
        Ok(p) => p,
        Err(e) => return failed(e),
    };
    let order = profile.security_order();
    let ok = order >= requested as i64;
    let mut r = CommandResult::new(if ok { EXIT_POSITIVE } else { EXIT_NEGATIVE });
    r.report.push_str(&profile.to_string());
    r.line(format!("security order  {order} (requested {requested})"));
    let t = requested + 1;
    let bound = encoding_rule_bound(code, t);
    if let Ok(bound) = &bound {
        let optimal = is_optimal(code, t).unwrap_or(false);
        r.line(format!(
            "rule bound      {} for t = {t}; {} rules -> {}",
            format_ratio(bound),
            code.rule_count(),
            if optimal { "optimal" } else { "not optimal" }
        ));
        r.kv("rule_bound", format_ratio(bound));
        r.kv("optimal", optimal);
    }
    r.line("accept-only counts any accepted insertion; P_d also requires a fresh source state");
    for o in &profile.orders {
        let i = o.order;
        r.kv(format!("order.{i}.p_d"), format_ratio(&o.probability));
        r.kv(format!("order.{i}.bound"), format_ratio(&o.bound));
        r.kv(format!("order.{i}.equal"), o.equal);
        r.kv(
            format!("order.{i}.accept_only"),
            format_ratio(&o.acceptance_only),
        );
        if let Some(w) = &o.witness {
            let obs: Vec<&str> = w
                .observed
                .iter()
                .map(|&m| code.messages().name(m))
                .collect();
            r.kv(format!("order.{i}.witness.observed"), obs.join(","));
            r.kv(
                format!("order.{i}.witness.inserted"),
                code.messages().name(w.inserted),
            );
        }
    }
    r.kv("security_order", order);
    r.kv("requested_order", requested);
    r
}

/// Search settings from the CLI flags.
pub fn search_config(
    time_limit: Option<f64>,
    node_limit: Option<u64>,
    seed: Option<u64>,
    restarts: bool,
    symmetry_breaking: bool,
) -> Result<SearchConfig, String> {
    let mut cfg = SearchConfig {
        seed,
        symmetry_breaking,
        ..Default::default()
    };
    if let Some(secs) = time_limit {
        if !(secs > 0.0 && secs.is_finite()) {
            return Err("--time-limit must be positive".into());
        }
        cfg.time_limit = Duration::from_secs_f64(secs);
    }
    if let Some(n) = node_limit {
        cfg.node_limit = n;
    }
    if restarts {
        cfg.restarts = Restarts::Geometric {
            initial_nodes: 10_000,
            factor: 2,
        };
    }
    Ok(cfg)
}
