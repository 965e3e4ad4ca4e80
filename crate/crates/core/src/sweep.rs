//! Catalogue sweep: every (M, N, C*) instance with an N-minor after some
//! contraction in C* is classified, replayed and cross-checked against the
//! corollary and the circuit form on the dual.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::catalogue::{Catalogue, Entry};
use crate::connectivity::is_3_connected;
use crate::constructions::{complete, uniform};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::minors::{GenericOracle, GENERIC_CAP};
use crate::props::{run_catalogue, Budget, PropertyReport, Sections};
use crate::set::ElementSet;
use crate::theorem::{duality_mismatch, thm1_bridge, Classifier, Mode};
use crate::witness::labels_of;

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub targets: Vec<(String, Matroid)>,
    pub mode: Mode,
    pub properties: Option<Sections>,
    pub budget: Budget,
    pub seed: u64,
    pub cap: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            targets: default_targets(),
            mode: Mode::All,
            properties: None,
            budget: Budget::default(),
            seed: 0,
            cap: GENERIC_CAP,
            jobs: None,
        }
    }
}

/// `U_{2,4}` and `M(K4)`.
pub fn default_targets() -> Vec<(String, Matroid)> {
    vec![
        ("U2,4".to_string(), uniform(2, 4).expect("U2,4")),
        ("M(K4)".to_string(), complete(4).expect("M(K4)")),
    ]
}

#[derive(Clone, Debug)]
pub struct InstanceRecord {
    pub matroid: String,
    pub target: String,
    pub cstar: Vec<String>,
    /// Every `x0 ∈ C*` with an N-minor in `M / x0`; the verdict does not depend on the choice.
    pub x0s: Vec<String>,
    pub branches: Vec<&'static str>,
    pub statements: Vec<&'static str>,
    pub verdict: Value,
    pub millis: f64,
}

impl InstanceRecord {
    fn to_json(&self) -> Value {
        json!({
            "matroid": self.matroid,
            "target": self.target,
            "cstar": self.cstar,
            "x0s": self.x0s,
            "branches": self.branches,
            "statements": self.statements,
            "verdict": self.verdict,
            "millis": self.millis,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub instances: Vec<InstanceRecord>,
    pub histogram: BTreeMap<String, usize>,
    /// Instances with no outcome, or whose classification errored.
    pub violations: Vec<String>,
    pub replay_failures: Vec<String>,
    pub bridge_failures: Vec<String>,
    pub duality_failures: Vec<String>,
    /// Outcome (iii)/(iv) with `|E - cl(L)| < 4`; reported, not failed.
    pub flags: Vec<String>,
    pub diagnostics: usize,
    /// (M, N) pairs not swept, with the reason.
    pub skipped: Vec<String>,
    pub properties: Option<PropertyReport>,
}

impl SweepReport {
    /// Associative merge; instance order follows argument order.
    pub fn merge(&mut self, other: SweepReport) {
        self.instances.extend(other.instances);
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
        self.violations.extend(other.violations);
        self.replay_failures.extend(other.replay_failures);
        self.bridge_failures.extend(other.bridge_failures);
        self.duality_failures.extend(other.duality_failures);
        self.flags.extend(other.flags);
        self.diagnostics += other.diagnostics;
        self.skipped.extend(other.skipped);
        match (&mut self.properties, other.properties) {
            (Some(a), Some(b)) => a.merge(b),
            (None, Some(b)) => self.properties = Some(b),
            _ => {}
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.replay_failures.is_empty()
            && self.bridge_failures.is_empty()
            && self.duality_failures.is_empty()
            && self.properties.as_ref().is_none_or(PropertyReport::all_pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instances": self.instances.iter().map(InstanceRecord::to_json).collect::<Vec<_>>(),
            "histogram": self.histogram,
            "violations": self.violations,
            "replay_failures": self.replay_failures,
            "bridge_failures": self.bridge_failures,
            "duality_failures": self.duality_failures,
            "flags": self.flags,
            "diagnostics": self.diagnostics,
            "skipped": self.skipped,
            "properties": self.properties.as_ref().map(PropertyReport::to_json),
            "passed": self.passed(),
        })
    }

    pub fn summary(&self) -> String {
        let hist: Vec<String> = self.histogram.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        let mut s = format!(
            "instances: {}\nhistogram: {}\nviolations: {}\nreplay failures: {}\nbridge failures: {}\nduality failures: {}\nflags: {}\nskipped pairs: {}\n",
            self.instances.len(),
            hist.join(", "),
            self.violations.len(),
            self.replay_failures.len(),
            self.bridge_failures.len(),
            self.duality_failures.len(),
            self.flags.len(),
            self.skipped.len(),
        );
        if let Some(p) = &self.properties {
            s.push_str(&p.summary());
        }
        for v in self.violations.iter().chain(&self.replay_failures).chain(&self.bridge_failures).chain(&self.duality_failures) {
            s.push_str(&format!("FAIL {v}\n"));
        }
        s.push_str(if self.passed() { "result: pass\n" } else { "result: FAIL\n" });
        s
    }
}

/// Sweeps every (entry, target) pair of the catalogue.
pub fn sweep(cat: &Catalogue, opts: &SweepOptions) -> Result<SweepReport> {
    let run = || {
        let jobs: Vec<(&Entry, &(String, Matroid))> =
            cat.entries.iter().flat_map(|e| opts.targets.iter().map(move |t| (e, t))).collect();
        let mut rep = jobs
            .par_iter()
            .map(|(entry, (tname, n))| sweep_pair(entry, tname, n, opts))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(SweepReport::default(), |mut a, b| {
                a.merge(b);
                a
            });
        if let Some(sections) = opts.properties {
            rep.properties = Some(run_catalogue(cat, &opts.targets, opts.budget, opts.seed, sections));
        }
        rep
    };
    match opts.jobs {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::BadParams(format!("thread pool: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

/// All instances for one host and one target, sharing one minor oracle.
pub fn sweep_pair(entry: &Entry, tname: &str, n: &Matroid, opts: &SweepOptions) -> SweepReport {
    let m = &entry.matroid;
    let mut rep = SweepReport::default();
    let pair_name = format!("{} / {tname}", entry.name);
    if n.n() < 4 || !is_3_connected(n) {
        rep.skipped.push(format!("{pair_name}: N is not a 3-connected matroid on at least 4 elements"));
        return rep;
    }
    if n.n() > m.n() || m.n() > opts.cap {
        let why = if n.n() > m.n() { "N is larger than M".to_string() } else { format!("|E(M)| > cap {}", opts.cap) };
        rep.skipped.push(format!("{pair_name}: {why}"));
        return rep;
    }
    let mut oracle = GenericOracle::with_cap(m.clone(), n.clone(), opts.cap);
    let mut cls = Classifier::new(&mut oracle);
    let mut dual_oracle = GenericOracle::with_cap(m.dual(), n.dual(), opts.cap);
    let mut dual_cls = Classifier::new(&mut dual_oracle);

    for cstar in m.cocircuits() {
        let start = Instant::now();
        let label = || format!("{pair_name}, C* = {}", cstar.display_with(m.labels()));
        let x0s = match qualifying(&mut cls, cstar) {
            Ok(v) => v,
            Err(e) => {
                rep.violations.push(format!("{}: {e}", label()));
                continue;
            }
        };
        let Some(&x0) = x0s.first() else { continue };
        match classify_instance(&mut cls, &mut dual_cls, cstar, x0, opts.mode) {
            Ok(out) => {
                if out.verdict.branches.is_empty() {
                    rep.violations.push(format!("{}: no outcome holds", label()));
                }
                if !out.verdict.replay(m, n) {
                    rep.replay_failures.push(label());
                }
                rep.bridge_failures.extend(out.bridge.into_iter().map(|b| format!("{}: {b}", label())));
                if let Some(d) = out.duality {
                    rep.duality_failures.push(format!("{}: {d}", label()));
                }
                rep.flags.extend(out.verdict.flags.iter().map(|f| format!("{}: {f}", label())));
                rep.diagnostics += out.verdict.diagnostics.len();
                let branches: Vec<&'static str> = out.verdict.tags().into_iter().collect();
                for b in &branches {
                    *rep.histogram.entry(format!("({b})")).or_insert(0) += 1;
                }
                rep.instances.push(InstanceRecord {
                    matroid: entry.name.clone(),
                    target: tname.to_string(),
                    cstar: labels_of(m, cstar),
                    x0s: x0s.iter().map(|&x| m.label(x).to_string()).collect(),
                    branches,
                    statements: out.statements,
                    verdict: out.verdict.to_json(m, n),
                    millis: start.elapsed().as_secs_f64() * 1e3,
                });
            }
            Err(e) => rep.violations.push(format!("{}: {e}", label())),
        }
    }
    rep
}

fn qualifying(cls: &mut Classifier<'_>, cstar: ElementSet) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for x in cstar.iter() {
        if cls.minor_after(x, false)?.is_some() {
            out.push(x);
        }
    }
    Ok(out)
}

struct InstanceOutcome {
    verdict: crate::theorem::TheoremVerdict,
    statements: Vec<&'static str>,
    bridge: Vec<String>,
    duality: Option<String>,
}

fn classify_instance(
    cls: &mut Classifier<'_>,
    dual_cls: &mut Classifier<'_>,
    cstar: ElementSet,
    x0: usize,
    mode: Mode,
) -> Result<InstanceOutcome> {
    let verdict = cls.main(cstar, x0, mode)?;
    let thm1 = cls.thm1(cstar, x0)?;
    let bridge = if mode == Mode::All { thm1_bridge(cls.host(), &verdict, &thm1) } else { Vec::new() };
    let circuit_form = dual_cls.dual(cstar, x0)?;
    let duality = duality_mismatch(&circuit_form, &thm1);
    Ok(InstanceOutcome { statements: thm1.statements().into_iter().collect(), verdict, bridge, duality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::CatalogueSpec;
    use crate::constructions::{theta_double, wheel};

    fn single(name: &str, m: Matroid) -> Catalogue {
        Catalogue { entries: vec![Entry { name: name.into(), matroid: m, graph: None }], skipped: Vec::new() }
    }

    fn strip_times(r: &SweepReport) -> Value {
        let mut v = r.to_json();
        for inst in v["instances"].as_array_mut().expect("array") {
            inst["millis"] = json!(0);
        }
        v
    }

    #[test]
    fn empty_catalogue_gives_empty_report() {
        let cat = Catalogue::build(&CatalogueSpec::empty()).unwrap();
        let r = sweep(&cat, &SweepOptions::default()).unwrap();
        assert!(r.instances.is_empty() && r.histogram.is_empty() && r.passed());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn repeated_sweep_is_idempotent() {
        let cat = single("W4", wheel(4).unwrap());
        let opts = SweepOptions::default();
        let a = sweep(&cat, &opts).unwrap();
        let b = sweep(&cat, &opts).unwrap();
        assert!(!a.instances.is_empty());
        assert_eq!(strip_times(&a), strip_times(&b));
        assert!(a.passed(), "{}", a.summary());
    }

    #[test]
    fn merge_is_associative_on_histograms() {
        let opts = SweepOptions::default();
        let parts: Vec<SweepReport> = [("W3", wheel(3).unwrap()), ("W4", wheel(4).unwrap()), ("T*", theta_double(3).unwrap().dual())]
            .into_iter()
            .map(|(n, m)| sweep(&single(n, m), &opts).unwrap())
            .collect();
        let mut left = parts[0].clone();
        left.merge(parts[1].clone());
        left.merge(parts[2].clone());
        let mut tail = parts[1].clone();
        tail.merge(parts[2].clone());
        let mut right = parts[0].clone();
        right.merge(tail);
        assert_eq!(strip_times(&left), strip_times(&right));
    }

    #[test]
    fn theta_double_dual_needs_segment_outcomes() {
        let r = sweep(&single("T*", theta_double(3).unwrap().dual()), &SweepOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert!(r.histogram.keys().any(|k| k == "(iii)" || k == "(iv)"));
    }

    #[test]
    fn first_branch_mode_stops_early() {
        let cat = single("W4", wheel(4).unwrap());
        let opts = SweepOptions { mode: Mode::FirstBranch, ..SweepOptions::default() };
        let r = sweep(&cat, &opts).unwrap();
        assert!(r.passed());
        assert!(r.instances.iter().all(|i| i.branches.len() == 1));
    }
}
