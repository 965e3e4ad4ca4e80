//! Named checks over the worked examples and the property suites.
//!
//! Each suite returns [`Check`] lines; `verify-paper` prints them and exits
//! nonzero on the first failure.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalogue::{Catalogue, CatalogueSpec};
use crate::connectivity::{
    find_minimal_partition, is_3_connected, is_minimal_partition, vertical_3_partitions, VerticalIndex,
};
use crate::constructions::{complete, fig1_graph, graphic, k5_minus_e, theta, theta_double, Graph};
use crate::error::{Error, Result};
use crate::iso::is_isomorphic;
use crate::matroid::Matroid;
use crate::minors::{graph_has_minor_capped, has_minor, naive_has_minor, GraphOracle, MinorOracle, GRAPH_VERTEX_CAP};
use crate::props::{run_catalogue, Budget, Sections};
use crate::set::ElementSet;
use crate::structures::fans;
use crate::sweep::{sweep, SweepOptions};
use crate::theorem::{classify_dual, classify_main, classify_thm1, co_si_of_contraction, si_of_contraction, Classifier, Mode};

/// FNV-1a over the normalized edge list of the bundled 24-edge graph.
pub const FIG1_CHECKSUM: u64 = 0x181b_9687_e7da_4a37;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Suite {
    Fig2,
    Theta,
    Fig1,
    Sweep,
    Props,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Fig2, Suite::Theta, Suite::Fig1, Suite::Sweep, Suite::Props, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fig2 => "fig2",
            Suite::Theta => "theta",
            Suite::Fig1 => "fig1",
            Suite::Sweep => "sweep",
            Suite::Props => "props",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown suite {s:?}; expected one of fig2, theta, fig1, sweep, props, oracle")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
}

impl Check {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{status} {}.{} ({:.0} ms)", self.suite, self.name, self.millis)
        } else {
            format!("{status} {}.{} ({:.0} ms): {}", self.suite, self.name, self.millis, self.detail)
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub only: Vec<Suite>,
    /// Replacement for the bundled 24-edge graph.
    pub fig1: Option<Graph>,
    pub seed: u64,
    pub cap: usize,
    pub graph_cap: usize,
    pub budget: Budget,
    pub jobs: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            only: Vec::new(),
            fig1: None,
            seed: 0,
            cap: crate::minors::GENERIC_CAP,
            graph_cap: GRAPH_VERTEX_CAP,
            budget: Budget::default(),
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks,
            "passed": self.passed(),
            "first_failure": self.first_failure().map(|c| format!("{}.{}", c.suite, c.name)),
        })
    }

    pub fn text(&self) -> String {
        let mut s: String = self.checks.iter().map(|c| c.line() + "\n").collect();
        match self.first_failure() {
            None => s.push_str(&format!("all {} checks passed\n", self.checks.len())),
            Some(c) => s.push_str(&format!("first failing check: {}.{}\n", c.suite, c.name)),
        }
        s
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
    clock: Instant,
}

impl Recorder {
    fn new(suite: Suite) -> Recorder {
        Recorder { suite, checks: Vec::new(), clock: Instant::now() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        let millis = self.clock.elapsed().as_secs_f64() * 1e3;
        self.checks.push(Check { suite: self.suite, name: name.to_string(), passed, detail: detail.into(), millis });
        self.clock = Instant::now();
    }

    /// Records a failing check for an error and returns `None`.
    fn ok<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, e.to_string());
                None
            }
        }
    }
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let suites: Vec<Suite> = if opts.only.is_empty() { Suite::ALL.to_vec() } else { opts.only.clone() };
    let mut rep = VerifyReport::default();
    for s in suites {
        rep.checks.extend(run_suite(s, opts));
    }
    rep
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    let mut r = Recorder::new(suite);
    match suite {
        Suite::Fig2 => fig2(&mut r),
        Suite::Theta => theta_suite(&mut r),
        Suite::Fig1 => fig1(&mut r, opts),
        Suite::Sweep => sweep_suite(&mut r, opts),
        Suite::Props => props_suite(&mut r, opts),
        Suite::Oracle => oracle_suite(&mut r),
    }
    r.checks
}

fn labels(m: &Matroid, xs: impl IntoIterator<Item = usize>) -> String {
    xs.into_iter().map(|x| m.label(x).to_string()).collect::<Vec<_>>().join(",")
}

fn fig2(r: &mut Recorder) {
    let m = k5_minus_e();
    let k4 = complete(4).expect("K4");
    let md = m.dual();
    let Some(c) = r.ok("circuit", m.set_of(&["a", "b", "c", "d"])) else { return };
    r.check("circuit", m.is_circuit(c), "{a,b,c,d} is a circuit of M");
    r.check("cocircuit_of_dual", md.is_cocircuit(c), "{a,b,c,d} is a cocircuit of M*");

    let mut minor = Vec::new();
    let mut si_bad = Vec::new();
    let mut co_si = Vec::new();
    for x in c.iter() {
        if md.contract_element(x).ok().and_then(|mx| has_minor(&mx, &k4).ok().flatten()).is_some() {
            minor.push(x);
        }
        if si_of_contraction(&md, x).is_ok_and(|s| !is_3_connected(&s.matroid)) {
            si_bad.push(x);
        }
        let good = co_si_of_contraction(&md, x)
            .is_ok_and(|s| is_3_connected(&s.matroid) && has_minor(&s.matroid, &k4).is_ok_and(|w| w.is_some()));
        if good {
            co_si.push(x);
        }
    }
    r.check("dual_contraction_has_k4", minor.len() == 4, format!("M*/x has an M(K4)-minor for x in {}", labels(&md, minor)));
    r.check("si_not_3_connected", si_bad.len() == 4, format!("si(M*/x) not 3-connected for x in {}", labels(&md, si_bad)));
    r.check("co_si_3_connected_with_k4", co_si.len() == 4, format!("co(si(M*/x)) 3-connected with M(K4)-minor for x in {}", labels(&md, co_si)));

    let mut ii = Vec::new();
    let mut i = Vec::new();
    for x in c.iter() {
        let Some(v) = r.ok("thm1_statement_ii", classify_thm1(&md, &k4, c, x)) else { return };
        if v.ii_elements().contains(x) {
            ii.push(x);
        }
        if !v.stmt_i.is_empty() {
            i.push(x);
        }
    }
    r.check("thm1_statement_ii", ii.len() == 4, format!("statement (ii) at x in {}", labels(&md, ii)));
    r.check("thm1_not_statement_i", i.is_empty(), format!("statement (i) at x in {{{}}}", labels(&md, i)));

    let x0 = c.first().expect("nonempty");
    if let Some(v) = r.ok("dual_form_statement_ii", classify_dual(&m, &k4, c, x0)) {
        let s = v.statements();
        r.check("dual_form_statement_ii", s.contains("ii") && !s.contains("i"), format!("circuit form on M: statements {s:?}"));
    }
}

fn theta_suite(r: &mut Recorder) {
    for rr in [3, 4] {
        if let Some(t) = r.ok("self_dual", theta(rr)) {
            r.check(&format!("theta{rr}_self_dual"), is_isomorphic(&t, &t.dual()).is_some(), format!("Θ_{rr} ≅ Θ_{rr}*"));
            let b = ElementSet::from_indices(2 * rr, rr..2 * rr);
            r.check(&format!("theta{rr}_b_is_a_line"), t.rank_of(b) == 2, "r(B) = 2");
        }
    }
    let Some(m3) = r.ok("double_is_k5_minus_e", theta_double(3)) else { return };
    r.check("double_is_k5_minus_e", is_isomorphic(&m3, &k5_minus_e()).is_some(), "theta_double(3) ≅ M(K5\\e)");
    for rr in [3, 4] {
        let Some(m) = r.ok("double_circuit", theta_double(rr)) else { return };
        let c = double_circuit(&m, rr);
        r.check(&format!("double{rr}_circuit"), m.is_circuit(c), format!("C = {} is a circuit", c.display_with(m.labels())));
        let md = m.dual();
        let Some(t) = r.ok("dual_contraction_has_theta", theta(rr)) else { return };
        let with: Vec<usize> = c
            .iter()
            .filter(|&x| md.contract_element(x).ok().and_then(|mx| has_minor(&mx, &t).ok().flatten()).is_some())
            .collect();
        r.check(
            &format!("double{rr}_dual_contraction_has_theta"),
            with.len() == c.len(),
            format!("M*/x has a Θ_{rr}-minor for x in {}", labels(&md, with)),
        );
    }

    let md = m3.dual();
    let c = double_circuit(&m3, 3);
    let a = ElementSet::from_indices(9, 0..3);
    let all_triangles = a.subsets_of_size(3).into_iter().all(|s| md.is_circuit(s));
    r.check("a_is_segment_of_dual", all_triangles, "every 3-subset of A is a circuit of M*");
    let t3 = theta(3).expect("checked above");
    for x in (c & a).iter() {
        let lx = md.label(x).to_string();
        match si_of_contraction(&md, x) {
            Ok(s) => {
                let pairs = s.matroid.cocircuits_of_size(2).len();
                r.check(&format!("si_{lx}_unique_series_pair"), pairs == 1, format!("{pairs} series pair(s) in si(M*/{lx})"));
                r.check(&format!("si_{lx}_not_3_connected"), !is_3_connected(&s.matroid), "");
            }
            Err(e) => r.check(&format!("si_{lx}_unique_series_pair"), false, e.to_string()),
        }
        let ok = co_si_of_contraction(&md, x)
            .is_ok_and(|s| is_3_connected(&s.matroid) && has_minor(&s.matroid, &t3).is_ok_and(|w| w.is_some()));
        r.check(&format!("co_si_{lx}_3_connected_with_theta3"), ok, "");
    }
    let k4 = complete(4).expect("K4");
    if let Some(x0) = c.first() {
        if let Some(v) = r.ok("classify_main", classify_main(&md, &k4, c, x0, Mode::All)) {
            let tags = v.tags();
            let ok = (tags.contains("iii") || tags.contains("iv")) && !tags.contains("i") && !tags.contains("ii");
            r.check("classify_main_segment_outcome", ok && v.replay(&md, &k4), format!("outcomes {tags:?}"));
        }
    }
}

/// `(A - a1) ∪ (A' - a1')` in the `a1..ar, a1'..ar', b1..br` order.
fn double_circuit(m: &Matroid, r: usize) -> ElementSet {
    ElementSet::from_indices(m.n(), (1..r).chain(r + 1..2 * r))
}

/// FNV-1a of `vertices n` followed by sorted `u v label` lines.
pub fn graph_checksum(g: &Graph) -> u64 {
    let mut lines: Vec<String> = g
        .edges()
        .iter()
        .map(|e| format!("{} {} {}", e.u.min(e.v), e.u.max(e.v), e.label))
        .collect();
    lines.sort();
    let text = format!("vertices {}\n{}\n", g.vertex_count(), lines.join("\n"));
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn fig1(r: &mut Recorder, opts: &VerifyOptions) {
    let g = opts.fig1.clone().unwrap_or_else(fig1_graph);
    let sum = graph_checksum(&g);
    r.check(
        "transcription_checksum",
        sum == FIG1_CHECKSUM && g.vertex_count() == 11 && g.edge_count() == 24,
        format!("{} vertices, {} edges, checksum {sum:016x} (expected {FIG1_CHECKSUM:016x})", g.vertex_count(), g.edge_count()),
    );
    let k6 = Graph::complete(6);
    let Some(mut oracle) = r.ok("graph_oracle", GraphOracle::with_cap(g.clone(), k6.clone(), opts.graph_cap)) else { return };
    let m = oracle.host().clone();
    let cstar = ElementSet::from_indices(m.n(), g.star(0));
    r.check("star_is_cocircuit", m.is_cocircuit(cstar), format!("C* = {}", cstar.display_with(m.labels())));

    let expected: Option<ElementSet> = ["ab", "ac", "ad", "ae", "af"]
        .iter()
        .map(|l| m.index_of(l).ok())
        .collect::<Option<Vec<_>>>()
        .map(|v| ElementSet::from_indices(m.n(), v));
    let mut with = m.empty();
    let mut replay_ok = true;
    for x in cstar.iter() {
        let (gx, _) = g.contract_edges(1 << x);
        let Some(found) = r.ok("k6_after_contraction", graph_has_minor_capped(&gx, &k6, opts.graph_cap)) else { return };
        if let Some(bw) = found {
            with.insert(x);
            replay_ok &= bw.verify(&gx, &k6);
            let lifted = oracle.query(m.empty(), m.set(&[x]));
            replay_ok &= lifted.is_ok_and(|w| w.is_some_and(|w| w.replay(&m, oracle.target())));
        }
    }
    r.check(
        "k6_after_contraction",
        Some(with) == expected,
        format!("G/x has a K6-minor exactly for x in {}", with.display_with(m.labels())),
    );
    r.check("k6_witness_replay", replay_ok, "branch sets and lifted matroid witnesses replay");

    let mut both_bad = m.empty();
    for x in with.iter() {
        let si = si_of_contraction(&m, x).is_ok_and(|s| !is_3_connected(&s.matroid));
        let co = co_si_of_contraction(&m, x).is_ok_and(|s| !is_3_connected(&s.matroid));
        if si && co {
            both_bad.insert(x);
        }
    }
    r.check("reductions_not_3_connected", both_bad == with && !with.is_empty(), format!("neither si(M/x) nor co(si(M/x)) 3-connected for x in {}", both_bad.display_with(m.labels())));

    let fan_labels = ["ad", "cd", "ac", "bc"];
    let fan = fans(&m).into_iter().find(|f| f.elements().iter().zip(fan_labels).all(|(&e, l)| m.label(e) == l));
    match fan {
        Some(f) => {
            r.check("fan_detected", cstar.contains(f.x1) && cstar.contains(f.x3), "(ad, cd, ac, bc) with ad, ac in C*");
            let si_cd = si_of_contraction(&m, f.x2);
            let ok = match si_cd {
                Ok(s) if is_3_connected(&s.matroid) => oracle.query(s.delete, s.contract).is_ok_and(|w| w.is_some()),
                _ => false,
            };
            r.check("si_cd_3_connected_with_k6", ok, "si(M/cd) is 3-connected with an M(K6)-minor");
        }
        None => r.check("fan_detected", false, "(ad, cd, ac, bc) is not a fan"),
    }

    let Ok(x0) = m.index_of("ad") else {
        r.check("classify_main", false, "no element ad");
        return;
    };
    let n = oracle.target().clone();
    let mut cls = Classifier::new(&mut oracle);
    if let Some(v) = r.ok("classify_main", cls.main(cstar, x0, Mode::All)) {
        let tags = v.tags();
        r.check("classify_main_outcome_ii", v.has("ii") && v.replay(&m, &n), format!("outcomes {tags:?}"));
    }
    if let Some(v) = r.ok("thm1_statement_iii", cls.thm1(cstar, x0)) {
        let named = v.stmt_iii.iter().any(|(f, _)| f.elements().iter().zip(fan_labels).all(|(&e, l)| m.label(e) == l));
        r.check("thm1_statement_iii", named, format!("statements {:?}", v.statements()));
    }
}

fn sweep_suite(r: &mut Recorder, opts: &VerifyOptions) {
    let Some(cat) = r.ok("catalogue", Catalogue::build(&CatalogueSpec::default())) else { return };
    let sopts = SweepOptions { cap: opts.cap, jobs: opts.jobs, seed: opts.seed, ..SweepOptions::default() };
    let Some(rep) = r.ok("main_theorem", sweep(&cat, &sopts)) else { return };
    let hist: Vec<String> = rep.histogram.iter().map(|(k, v)| format!("{k} {v}")).collect();
    r.check("main_theorem_totality", rep.violations.is_empty(), format!("{} instances, {} violations; {}", rep.instances.len(), rep.violations.len(), hist.join(", ")));
    r.check("witness_replay", rep.replay_failures.is_empty(), format!("{} replay failures", rep.replay_failures.len()));
    r.check("corollary_bridge", rep.bridge_failures.is_empty(), format!("{} bridge failures", rep.bridge_failures.len()));
    r.check("duality_bridge", rep.duality_failures.is_empty(), format!("{} duality mismatches", rep.duality_failures.len()));
    r.check("small_complement_flags", true, format!("{} flagged for review", rep.flags.len()));
}

fn props_suite(r: &mut Recorder, opts: &VerifyOptions) {
    let Some(cat) = r.ok("catalogue", Catalogue::build(&CatalogueSpec::extended())) else { return };
    let targets = crate::sweep::default_targets();
    let run = || run_catalogue(&cat, &targets, opts.budget, opts.seed, Sections::ALL);
    let rep = match opts.jobs {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                r.check("thread_pool", false, e.to_string());
                return;
            }
        },
        None => run(),
    };
    for (name, t) in &rep.tallies {
        let mut detail = format!("{} checked, {} failed", t.checked, t.failed);
        if t.flagged > 0 {
            detail.push_str(&format!(", {} flagged", t.flagged));
        }
        if let Some(e) = t.examples.first() {
            detail.push_str(&format!("; e.g. {e}"));
        }
        r.check(name, t.failed == 0 && t.checked > 0, detail);
    }
}

/// Minimal partitions against exhaustive re-checks, and the memoized minor
/// search against the naive one on small hosts.
fn oracle_suite(r: &mut Recorder) {
    let Some(cat) = r.ok("catalogue", Catalogue::build(&CatalogueSpec::extended())) else { return };
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for e in cat.entries.iter().filter(|e| e.matroid.n() >= 4) {
        let m = &e.matroid;
        let mut index = VerticalIndex::new(m);
        for a in m.cocircuits().into_iter().chain([m.ground()]) {
            for x in a.iter() {
                for seed in vertical_3_partitions(m, x).unwrap_or_default() {
                    checked += 1;
                    match find_minimal_partition(m, a, &seed) {
                        Ok(q) if is_minimal_partition(m, a, &q) && index.ordered(q.x).contains(&q) => {}
                        Ok(q) => bad.push(format!("{}: {}", e.name, q.display(m))),
                        Err(err) => bad.push(format!("{}: {err}", e.name)),
                    }
                }
            }
        }
    }
    r.check("minimal_partition", bad.is_empty() && checked > 0, format!("{checked} seeds, {} failures {:?}", bad.len(), bad.first()));

    let small: Vec<&Matroid> = cat.entries.iter().map(|e| &e.matroid).filter(|m| m.n() <= 9).collect();
    let mut targets: Vec<Matroid> = small.iter().filter(|m| m.n() <= 6).map(|m| (*m).clone()).collect();
    targets.push(graphic(&Graph::complete(4)).expect("K4"));
    let mut pairs = 0usize;
    let mut disagree = Vec::new();
    for m in &small {
        for n in &targets {
            pairs += 1;
            let fast = has_minor(m, n);
            let slow = naive_has_minor(m, n);
            let ok = match (&fast, &slow) {
                (Ok(Some(w)), Some(_)) => w.replay(m, n),
                (Ok(None), None) => true,
                _ => false,
            };
            if !ok {
                disagree.push(format!("n = {} into n = {}", n.n(), m.n()));
            }
        }
    }
    r.check("has_minor_vs_naive", disagree.is_empty(), format!("{pairs} pairs, {} disagreements {:?}", disagree.len(), disagree.first()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("fig3".parse::<Suite>().is_err());
    }

    #[test]
    fn fig2_suite_passes() {
        let checks = run_suite(Suite::Fig2, &VerifyOptions::default());
        assert!(checks.iter().all(|c| c.passed), "{:#?}", checks);
    }

    #[test]
    fn corrupted_fig1_names_the_checksum() {
        let mut g = fig1_graph();
        g.add_edge(1, 3, "bd").unwrap();
        let opts = VerifyOptions { only: vec![Suite::Fig1], fig1: Some(g), ..VerifyOptions::default() };
        let rep = run(&opts);
        assert!(!rep.passed());
        assert_eq!(rep.first_failure().unwrap().name, "transcription_checksum");
    }
}
