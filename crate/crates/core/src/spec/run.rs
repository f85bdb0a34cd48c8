use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{AnalysisSpec, Arg, Certificate, Op, Task};
use crate::cert::{
    self, check_decrease, check_dstat_order_conv, check_order_conv, check_stat_order_conv, density_json,
    derive_lattice_cert, derive_linear_cert, equal_mod_null_transfer, falsify_whitelist, ideal_check, lift,
    monotone_order_check, order_preservation_check, stat_implies_deferred_check, subsequence_check,
    uniqueness_probe, CheckOptions, CheckVerdict, DStatOrderCert, LatticeOp,
};
use crate::index_set::{count_window, IndexSet};
use crate::lattice::{LatticeVector, OrderIdeal};
use crate::pair::{self, DeferredPair, GapGrowth, IndexRule};
use crate::rational::{self, Rational};
use crate::sequence::{self, LowerBound, RuleSequence};
use crate::suite::theorem_suite;
use crate::verdict::Verdict;

/// Bumped whenever the report layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub check: CheckOptions,
    pub seed: u64,
    /// Worker threads for tasks; 0 uses rayon's default.
    pub jobs: usize,
    /// Adds `wall_time_ms` to every task, which makes reports nondeterministic.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            check: CheckOptions::default(),
            seed: 0,
            jobs: 0,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Verdict(Verdict),
    /// A value was computed; there is no claim to verify.
    Computed,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Verdict(v) => v.as_str(),
            Status::Computed => "computed",
            Status::Error => "error",
        }
    }

    pub fn is_failure(&self) -> bool {
        match self {
            Status::Verdict(v) => v.is_failure(),
            Status::Computed => false,
            Status::Error => true,
        }
    }

    fn needs_flag(&self) -> bool {
        matches!(self, Status::Verdict(Verdict::Inconclusive | Verdict::Consistent))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskReport {
    pub id: String,
    pub op: Op,
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    pub result: Value,
    pub wall_time_ms: Option<u128>,
}

impl TaskReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "id": self.id,
            "op": self.op.as_str(),
            "inputs": self.inputs,
            "status": self.status.as_str(),
            "result": self.result,
        });
        if let Some(ms) = self.wall_time_ms {
            v["wall_time_ms"] = json!(ms);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub options: RunOptions,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    /// 0 unless some task is refuted, failed a precondition, or errored.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.tasks.iter().any(|t| t.status.is_failure()))
    }

    pub fn task(&self, id: &str) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn to_json(&self) -> Value {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for t in &self.tasks {
            *counts.entry(t.status.as_str()).or_default() += 1;
        }
        let flagged: Vec<Value> = self
            .tasks
            .iter()
            .filter(|t| t.status.needs_flag())
            .map(|t| json!({ "id": t.id, "status": t.status.as_str() }))
            .collect();
        let failed: Vec<&str> = self
            .tasks
            .iter()
            .filter(|t| t.status.is_failure())
            .map(|t| t.id.as_str())
            .collect();
        let o = &self.options;
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
            "options": {
                "prefix_n": o.check.prefix_n,
                "n_max": o.check.n_max,
                "budget": o.check.budget,
                "seed": o.seed,
            },
            "tasks": self.tasks.iter().map(TaskReport::to_json).collect::<Vec<_>>(),
            "summary": {
                "tasks": self.tasks.len(),
                "by_status": counts,
                "flagged": flagged,
                "failed": failed,
                "exit_code": self.exit_code(),
            },
        })
    }

    /// Pretty JSON with a trailing newline; byte-identical for identical input.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// Executes every task. Tasks may run in parallel; the report keeps spec order.
pub fn run(spec: &AnalysisSpec, options: &RunOptions) -> Report {
    let one = |task: &Task| {
        let start = options.timings.then(Instant::now);
        let (status, result) = match execute(spec, task, options) {
            Ok(r) => r,
            Err(message) => (Status::Error, json!({ "error": message })),
        };
        TaskReport {
            id: task.id.clone(),
            op: task.op,
            inputs: task.args.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            status,
            result,
            wall_time_ms: start.map(|s| s.elapsed().as_millis()),
        }
    };
    let tasks = if options.jobs == 1 {
        spec.tasks.iter().map(one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| spec.tasks.par_iter().map(one).collect())
    };
    Report {
        options: *options,
        tasks,
    }
}

type Outcome = Result<(Status, Value), String>;

struct Ctx<'a> {
    spec: &'a AnalysisSpec,
    task: &'a Task,
}

impl<'a> Ctx<'a> {
    fn arg(&self, key: &str) -> Option<&'a Arg> {
        self.task.arg(key)
    }

    fn seq(&self, key: &str) -> &'a RuleSequence {
        match self.arg(key) {
            Some(Arg::Name(n)) => self.spec.sequence(n).expect("names resolve after parsing"),
            _ => unreachable!("`{key}` is a required sequence"),
        }
    }

    fn set(&self, key: &str) -> IndexSet {
        self.arg(key)
            .and_then(|a| self.spec.resolve_set(a))
            .expect("sets resolve after parsing")
    }

    fn pair(&self, key: &str) -> DeferredPair {
        self.spec.resolve_pair(self.arg(key)).expect("pairs resolve after parsing")
    }

    fn cert(&self, key: &str) -> Option<&'a Certificate> {
        match self.arg(key) {
            Some(Arg::Name(n)) => Some(&self.spec.certificate(n).expect("names resolve after parsing").cert),
            _ => None,
        }
    }

    fn dstat(&self, key: &str) -> Option<&'a DStatOrderCert> {
        match self.cert(key) {
            Some(Certificate::DStat(c)) => Some(c),
            _ => None,
        }
    }

    fn count(&self, key: &str) -> Option<u64> {
        match self.arg(key) {
            Some(Arg::Count(k)) => Some(*k),
            _ => None,
        }
    }

    fn rational(&self, key: &str) -> Option<&'a Rational> {
        match self.arg(key) {
            Some(Arg::Rational(r)) => Some(r),
            _ => None,
        }
    }

    fn rule(&self, key: &str) -> Option<IndexRule> {
        match self.arg(key) {
            Some(Arg::Rule(r)) => Some(*r),
            _ => None,
        }
    }

    fn vector(&self, key: &str) -> &'a LatticeVector {
        match self.arg(key) {
            Some(Arg::Vector(v)) => v,
            _ => unreachable!("`{key}` is a required vector"),
        }
    }
}

fn verdict(v: CheckVerdict) -> (Status, Value) {
    (Status::Verdict(v.verdict), v.to_json())
}

fn canon(r: &Rational) -> String {
    rational::canonical(r)
}

fn cert_json(c: &DStatOrderCert) -> Value {
    json!({
        "x": c.x.to_string(),
        "limit": c.limit.canonical(),
        "z": c.z.to_string(),
        "k": c.k.to_string(),
        "zset": c.zset.to_string(),
        "pair": c.pair.to_string(),
    })
}

/// Re-checks a derived certificate and reports it alongside the verdict.
fn derived(d: Result<DStatOrderCert, cert::CertError>, opts: &CheckOptions) -> Outcome {
    let d = d.map_err(|e| e.to_string())?;
    let v = check_dstat_order_conv(&d, opts);
    Ok((
        Status::Verdict(v.verdict),
        json!({ "derived": cert_json(&d), "check": v.to_json() }),
    ))
}

fn execute(spec: &AnalysisSpec, task: &Task, options: &RunOptions) -> Outcome {
    let cx = Ctx { spec, task };
    let opts = &options.check;
    let computed = |v: Value| Ok((Status::Computed, v));
    match task.op {
        Op::Density => {
            let (set, pair) = (cx.set("set"), cx.pair("pair"));
            let d = pair::deferred_density(&set, &pair, opts.n_max, opts.budget).map_err(|e| e.to_string())?;
            let mut body = density_json(&d);
            body["set"] = json!(set.to_string());
            body["pair"] = json!(pair.to_string());
            computed(body)
        }
        Op::Count => {
            let (lo, hi) = (cx.count("lo").unwrap_or(0), cx.count("hi").unwrap_or(0));
            let w = count_window(&cx.set("set"), lo, hi, opts.budget).map_err(|e| e.to_string())?;
            computed(json!({ "lo": w.lo, "hi": w.hi, "count": w.count }))
        }
        Op::Contains => {
            let n = cx.count("n").unwrap_or(0);
            if n == 0 {
                return Err("indices start at 1".into());
            }
            computed(json!({ "n": n, "contains": cx.set("set").contains(n) }))
        }
        Op::Eval => {
            let n = cx.count("n").unwrap_or(0);
            if n == 0 {
                return Err("indices start at 1".into());
            }
            computed(json!({ "n": n, "value": cx.seq("seq").eval(n).canonical() }))
        }
        Op::Cesaro => {
            let (n, pair) = (cx.count("n").unwrap_or(0), cx.pair("pair"));
            if n == 0 {
                return Err("n starts at 1".into());
            }
            let v = sequence::deferred_cesaro(cx.seq("seq"), &pair, n, opts.budget).map_err(|e| e.to_string())?;
            let (lo, hi) = pair.window(n);
            computed(json!({ "n": n, "window": [lo, hi], "pair": pair.to_string(), "value": canon(&v) }))
        }
        Op::Strong => {
            let tol = cx.rational("tol").cloned().unwrap_or_else(|| rational::rat(1, 100));
            let l = cx.rational("limit").expect("required");
            let r = sequence::strong_dpq_check(cx.seq("seq"), l, &cx.pair("pair"), opts.n_max, &tol, opts.budget)
                .map_err(|e| e.to_string())?;
            let trace: Vec<Value> = r.trace.iter().map(|(n, v)| json!([n, canon(v)])).collect();
            let bound = match &r.lower_bound {
                None => Value::Null,
                Some(LowerBound::Finite(b)) => json!(canon(b)),
                Some(LowerBound::Infinite) => json!("infinite"),
            };
            Ok((
                Status::Verdict(r.verdict),
                json!({ "tol": canon(&tol), "trace": trace, "liminf_lower_bound": bound }),
            ))
        }
        Op::StatReal => {
            let l = cx.rational("limit").expect("required");
            let eps = cx.rational("eps").expect("required");
            let r = sequence::deferred_stat_check_real(cx.seq("seq"), l, eps, &cx.pair("pair"), opts.n_max, opts.budget)
                .map_err(|e| e.to_string())?;
            Ok((
                Status::Verdict(r.verdict),
                json!({
                    "exceedance_set": r.exceedance_set.as_ref().map(ToString::to_string),
                    "density": density_json(&r.density),
                }),
            ))
        }
        Op::Validate => {
            let (p, q) = (cx.rule("p").expect("required"), cx.rule("q").expect("required"));
            Ok(match DeferredPair::new(p, q) {
                Ok(pair) => (Status::Verdict(Verdict::Verified), json!({ "pair": pair.to_string() })),
                Err(e) => (
                    Status::Verdict(Verdict::Refuted),
                    json!({ "pair": format!("p: {p} q: {q}"), "reason": e.to_string() }),
                ),
            })
        }
        Op::Ratio => {
            let r = pair::ratio_bounded(&cx.pair("pair"));
            computed(json!({
                "bounded": r.bounded,
                "sup": r.sup.as_ref().map(canon),
                "limit": r.limit.as_ref().map(canon),
            }))
        }
        Op::Refine => {
            let (inner, outer) = (cx.pair("inner"), cx.pair("outer"));
            let gap = |g: &GapGrowth| match g {
                GapGrowth::Constant(k) => json!({ "kind": "bounded", "size": k }),
                GapGrowth::Growing { slope } => json!({ "kind": "growing", "slope": slope }),
            };
            Ok(match pair::refinement_check(&inner, &outer) {
                Ok(r) => (
                    Status::Verdict(Verdict::Verified),
                    json!({
                        "lower_gap": gap(&r.lower_gap),
                        "upper_gap": gap(&r.upper_gap),
                        "t": r.t.as_ref().map(canon),
                    }),
                ),
                Err(e) => (Status::Verdict(Verdict::Refuted), json!({ "reason": e.to_string() })),
            })
        }
        Op::Check => Ok(verdict(match cx.cert("cert").expect("required") {
            Certificate::Decrease(c) => check_decrease(c, opts),
            Certificate::Order(c) => check_order_conv(c, opts),
            Certificate::DStat(c) => check_dstat_order_conv(c, opts),
        })),
        Op::StatCheck => Ok(verdict(check_stat_order_conv(cx.dstat("cert").expect("required"), opts))),
        Op::Falsify => {
            let pair = cx.pair("pair");
            let report = falsify_whitelist(cx.seq("seq"), cx.vector("limit"), &pair, opts);
            let mut body = json!({
                "bounded_falsification": true,
                "whitelist": "c/n^e for c in 1..=10, e in 1..=3",
                "falsifier": report.to_json(),
                "all_density_one": report.all_density_one(),
            });
            if let (Some(p), Some(q)) = (cx.rule("printed_p"), cx.rule("printed_q")) {
                let printed = DeferredPair::new(p, q);
                body["printed_pair"] = json!(format!("p: {p} q: {q}"));
                body["printed_pair_valid"] = json!(printed.is_ok());
                body["printed_pair_error"] = json!(printed.as_ref().err().map(ToString::to_string));
                body["unverifiable_as_printed"] = json!(printed.is_err() && report.all_density_one());
            }
            computed(body)
        }
        Op::Linear => derived(
            derive_linear_cert(
                cx.dstat("a").expect("required"),
                cx.dstat("b").expect("required"),
                cx.rational("lambda").expect("required"),
                cx.rational("mu").expect("required"),
            ),
            opts,
        ),
        Op::Lattice => {
            let op: LatticeOp = match cx.arg("op") {
                Some(Arg::Word(w)) => w.parse()?,
                _ => unreachable!("required"),
            };
            derived(derive_lattice_cert(cx.dstat("a").expect("required"), cx.dstat("b"), op), opts)
        }
        Op::Unique => Ok(verdict(uniqueness_probe(
            cx.dstat("a").expect("required"),
            cx.dstat("b").expect("required"),
            opts,
        ))),
        Op::Monotone => Ok(verdict(monotone_order_check(cx.dstat("cert").expect("required"), opts))),
        Op::Subseq => Ok(verdict(subsequence_check(
            cx.dstat("cert").expect("required"),
            &cx.set("set"),
            opts,
        ))),
        Op::Retarget => Ok(verdict(stat_implies_deferred_check(
            cx.dstat("cert").expect("required"),
            &cx.pair("target"),
            opts,
        ))),
        Op::Ideal => {
            let support = match cx.arg("support") {
                Some(Arg::Ints(xs)) => xs.iter().map(|&i| i as usize),
                _ => unreachable!("required"),
            };
            Ok(verdict(ideal_check(
                cx.dstat("cert").expect("required"),
                &OrderIdeal::new(support),
                opts,
            )))
        }
        Op::Member => {
            let Some(Certificate::Decrease(dec)) = cx.cert("cert") else {
                unreachable!("checked while parsing")
            };
            let candidates = match cx.arg("candidates") {
                Some(Arg::Vectors(vs)) => vs,
                _ => unreachable!("required"),
            };
            let x = cx.seq("seq");
            let results = cert::class_membership(x, dec, candidates, opts);
            let rows: Vec<Value> = candidates
                .iter()
                .zip(&results)
                .map(|(c, v)| json!({ "candidate": c.canonical(), "check": v.to_json() }))
                .collect();
            let members: Vec<String> = candidates
                .iter()
                .zip(&results)
                .filter(|(_, v)| v.is_verified())
                .map(|(c, _)| c.canonical())
                .collect();
            computed(json!({ "candidates": rows, "verified_limits": members }))
        }
        Op::Transfer => Ok(verdict(equal_mod_null_transfer(
            cx.seq("seq"),
            cx.dstat("cert").expect("required"),
            opts,
        ))),
        Op::Preserve => Ok(verdict(order_preservation_check(
            cx.dstat("a").expect("required"),
            cx.dstat("b").expect("required"),
            opts,
        ))),
        Op::Lift => {
            let Some(Certificate::Order(c)) = cx.cert("cert") else {
                unreachable!("checked while parsing")
            };
            let order = check_order_conv(c, opts);
            if !order.is_verified() {
                return Ok((
                    Status::Verdict(Verdict::PreconditionFailed),
                    json!({ "order_check": order.to_json() }),
                ));
            }
            derived(Ok(lift(c, cx.pair("pair"))), opts)
        }
        Op::Theorems => {
            let trials = cx.count("trials").unwrap_or(0);
            if trials == 0 {
                return Err("trials must be at least 1".into());
            }
            let r = theorem_suite(cx.count("seed").unwrap_or(options.seed), trials, opts);
            let status = if r.all_passed() { Verdict::Verified } else { Verdict::Refuted };
            Ok((Status::Verdict(status), r.to_json()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn run_text(text: &str) -> Report {
        let opts = RunOptions {
            check: CheckOptions {
                prefix_n: 500,
                ..CheckOptions::default()
            },
            ..RunOptions::default()
        };
        run(&parse_spec(text).unwrap(), &opts)
    }

    #[test]
    fn density_and_cesaro() {
        let r = run_text("SEQ x = (n)\nTASK d = density set=POW(3)\nTASK c = cesaro seq=x n=9\n");
        let d = &r.task("d").unwrap().result;
        assert_eq!((d["kind"].as_str(), d["value"].as_str()), (Some("exact"), Some("0/1")));
        assert_eq!(r.task("c").unwrap().result["value"], "5/1");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn cube_check_verifies() {
        let r = run_text(
            "PAIR p: 0 q: n\nSEQ z = (0, 1/n^2) if NOT(POW(3)); (0, n^2)\n\
             CERT dec = decrease z=z k=NOT(POW(3))\nCERT bad = decrease z=z k=ALL\n\
             TASK ok = check cert=dec\nTASK no = check cert=bad\n",
        );
        assert_eq!(r.task("ok").unwrap().status, Status::Verdict(Verdict::Verified));
        assert_eq!(r.task("no").unwrap().status, Status::Verdict(Verdict::Refuted));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn task_errors_do_not_abort() {
        let r = run_text("SEQ x = (n, n)\nTASK c = cesaro seq=x n=3\nTASK e = eval seq=x n=2\n");
        assert_eq!(r.task("c").unwrap().status, Status::Error);
        assert_eq!(r.task("e").unwrap().result["value"], "(2/1, 2/1)");
        assert_eq!(r.exit_code(), 1);
    }
}
