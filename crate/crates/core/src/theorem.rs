//! Branch classification for cocircuit contraction.
//!
//! An instance is `(M, N, C*, x0)` with `M`, `N` 3-connected, `|E(N)| >= 4`,
//! `C*` a cocircuit of `M`, `x0 ∈ C*` and `M / x0` with an `N`-minor. The
//! classifier evaluates the four outcomes of the main theorem, the three
//! statements of its cocircuit corollary and the three statements of the
//! dual (circuit) form. Every reported outcome carries witnesses that
//! [`Branch::replay`] checks again from scratch.
//!
//! All minors are described relative to the host `M` as `M \ D / C`, so a
//! single [`MinorOracle`] with a shared memo answers every query.

use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::connectivity::{is_3_connected, three_connectivity_violation};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::minors::{GenericOracle, MinorOracle, MinorWitness};
use crate::set::ElementSet;
use crate::structures::{fans, is_3conn_up_to_unique_spore, seg_coseg_pairs, Fan, SegCosegPair, Spore};
use crate::witness::labels_of;

/// `M \ delete / contract`, kept together with the sets that produce it.
#[derive(Clone, Debug)]
pub struct HostMinor {
    pub delete: ElementSet,
    pub contract: ElementSet,
    pub matroid: Matroid,
}

impl HostMinor {
    pub fn of(m: &Matroid, delete: ElementSet, contract: ElementSet) -> Result<HostMinor> {
        Ok(HostMinor { delete, contract, matroid: m.minor(delete, contract)? })
    }

    fn survivors(&self) -> Vec<usize> {
        (self.delete.complement() - self.contract).to_vec()
    }

    /// Host element to index in the minor.
    pub fn local(&self, e: usize) -> Option<usize> {
        self.survivors().iter().position(|&s| s == e)
    }

    pub fn simplify(self) -> Result<HostMinor> {
        let (matroid, red) = self.matroid.simplify()?;
        let surv = self.survivors();
        let extra = ElementSet::from_indices(self.delete.ground_size(), red.removed.iter().map(|&(e, _)| surv[e]));
        Ok(HostMinor { delete: self.delete | extra, contract: self.contract, matroid })
    }

    pub fn cosimplify(self) -> Result<HostMinor> {
        let (matroid, red) = self.matroid.cosimplify()?;
        let surv = self.survivors();
        let extra = ElementSet::from_indices(self.delete.ground_size(), red.removed.iter().map(|&(e, _)| surv[e]));
        Ok(HostMinor { delete: self.delete, contract: self.contract | extra, matroid })
    }

    /// A host-level witness certifies an `N`-minor of this minor when it
    /// removes at least what this minor removes.
    pub fn covers(&self, w: &MinorWitness) -> bool {
        self.delete.is_subset(w.delete) && self.contract.is_subset(w.contract)
    }
}

pub fn si_of_contraction(m: &Matroid, x: usize) -> Result<HostMinor> {
    HostMinor::of(m, m.empty(), m.set(&[x]))?.simplify()
}

pub fn co_si_of_contraction(m: &Matroid, x: usize) -> Result<HostMinor> {
    si_of_contraction(m, x)?.cosimplify()
}

pub fn co_of_deletion(m: &Matroid, x: usize) -> Result<HostMinor> {
    HostMinor::of(m, m.set(&[x]), m.empty())?.cosimplify()
}

pub fn si_co_of_deletion(m: &Matroid, x: usize) -> Result<HostMinor> {
    co_of_deletion(m, x)?.simplify()
}

/// Index of host element `e` in `M / x` (or `M \ x`).
fn shift(e: usize, x: usize) -> usize {
    e - usize::from(e > x)
}

fn shift_set(s: ElementSet, x: usize) -> ElementSet {
    ElementSet::from_indices(s.ground_size() - 1, s.iter().filter(|&e| e != x).map(|e| shift(e, x)))
}

/// Spore of `M / xi` in `M / xi`'s indexing.
fn expected_spore(p: ElementSet, s: usize, xi: usize) -> Spore {
    Spore { p: shift_set(p.without(xi), xi), s: shift(s, xi) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    All,
    FirstBranch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `x ∈ C*`, `si(M / x)` 3-connected with an `N`-minor.
    SiOk { x: usize, witness: MinorWitness },
    /// `x1, x3 ∈ C*`, `si(M / x2)` 3-connected with an `N`-minor.
    Fan { fan: Fan, witness: MinorWitness },
    /// `L ⊆ C*`, `cl(L) - L = {e}`.
    SegCosegWithE { pair: SegCosegPair, e: usize, si_e: MinorWitness, contract_cl: MinorWitness, spores: Vec<(usize, Spore)> },
    /// `L` a flat, `|L - C*| <= 1`.
    SegCosegFlat { pair: SegCosegPair, contract_l: MinorWitness, spores: Vec<(usize, Spore)> },
}

impl Branch {
    pub fn tag(&self) -> &'static str {
        match self {
            Branch::SiOk { .. } => "i",
            Branch::Fan { .. } => "ii",
            Branch::SegCosegWithE { .. } => "iii",
            Branch::SegCosegFlat { .. } => "iv",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Branch::SiOk { .. } => "SiOk",
            Branch::Fan { .. } => "Fan",
            Branch::SegCosegWithE { .. } => "SegCosegWithE",
            Branch::SegCosegFlat { .. } => "SegCosegFlat",
        }
    }

    /// Re-checks every claim of the branch without using any cache.
    pub fn replay(&self, m: &Matroid, n: &Matroid, cstar: ElementSet) -> bool {
        let minor_ok = |hm: Result<HostMinor>, w: &MinorWitness| {
            hm.is_ok_and(|hm| is_3_connected(&hm.matroid) && hm.covers(w)) && w.replay(m, n)
        };
        let spores_ok = |pair: &SegCosegPair, p: ElementSet, spores: &[(usize, Spore)]| {
            spores.len() == pair.t()
                && pair.pairs.iter().zip(spores).all(|(&(xi, yi), &(sx, sp))| {
                    let want = expected_spore(p, yi, xi);
                    sx == xi
                        && sp == want
                        && m.contract_element(xi).is_ok_and(|mx| is_3conn_up_to_unique_spore(&mx) == Some(want))
                })
        };
        match self {
            Branch::SiOk { x, witness } => cstar.contains(*x) && minor_ok(si_of_contraction(m, *x), witness),
            Branch::Fan { fan, witness } => {
                fan.is_valid(m)
                    && cstar.contains(fan.x1)
                    && cstar.contains(fan.x3)
                    && minor_ok(si_of_contraction(m, fan.x2), witness)
            }
            Branch::SegCosegWithE { pair, e, si_e, contract_cl, spores } => {
                let cl = m.closure(pair.l);
                pair.is_valid(m)
                    && pair.l.is_subset(cstar)
                    && cl - pair.l == m.set(&[*e])
                    && !cstar.contains(*e)
                    && minor_ok(si_of_contraction(m, *e), si_e)
                    && minor_ok(HostMinor::of(m, m.empty(), cl), contract_cl)
                    && spores_ok(pair, cl, spores)
            }
            Branch::SegCosegFlat { pair, contract_l, spores } => {
                pair.is_valid(m)
                    && m.is_flat(pair.l)
                    && (pair.l - cstar).len() <= 1
                    && minor_ok(HostMinor::of(m, m.empty(), pair.l), contract_l)
                    && spores_ok(pair, pair.l, spores)
            }
        }
    }

    pub fn to_json(&self, m: &Matroid, n: &Matroid) -> Value {
        let spores_json = |spores: &[(usize, Spore)]| {
            spores
                .iter()
                .map(|&(xi, sp)| {
                    let mx = m.contract_element(xi).expect("xi in ground set");
                    json!({ "x": m.label(xi), "P": labels_of(&mx, sp.p), "s": mx.label(sp.s) })
                })
                .collect::<Vec<_>>()
        };
        match self {
            Branch::SiOk { x, witness } => json!({
                "branch": self.tag(), "kind": self.name(), "x": m.label(*x), "minor": witness.to_json(m, n),
            }),
            Branch::Fan { fan, witness } => json!({
                "branch": self.tag(), "kind": self.name(),
                "fan": fan.elements().iter().map(|&e| m.label(e)).collect::<Vec<_>>(),
                "minor": witness.to_json(m, n),
            }),
            Branch::SegCosegWithE { pair, e, si_e, contract_cl, spores } => json!({
                "branch": self.tag(), "kind": self.name(), "pair": pair.to_json(m), "e": m.label(*e),
                "si_contract_e_minor": si_e.to_json(m, n), "contract_cl_minor": contract_cl.to_json(m, n),
                "spores": spores_json(spores),
            }),
            Branch::SegCosegFlat { pair, contract_l, spores } => json!({
                "branch": self.tag(), "kind": self.name(), "pair": pair.to_json(m),
                "contract_l_minor": contract_l.to_json(m, n), "spores": spores_json(spores),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TheoremVerdict {
    pub cstar: ElementSet,
    pub x0: usize,
    pub branches: Vec<Branch>,
    /// Pairs meeting the shape of outcome (iii) or (iv) whose attached claims failed.
    pub diagnostics: Vec<String>,
    /// Outcome (iii) or (iv) fired with `|E(M) - cl(L)| < 4`.
    pub flags: Vec<String>,
}

impl TheoremVerdict {
    pub fn holds(&self) -> bool {
        !self.branches.is_empty()
    }

    pub fn tags(&self) -> BTreeSet<&'static str> {
        self.branches.iter().map(Branch::tag).collect()
    }

    pub fn has(&self, tag: &str) -> bool {
        self.branches.iter().any(|b| b.tag() == tag)
    }

    pub fn replay(&self, m: &Matroid, n: &Matroid) -> bool {
        self.branches.iter().all(|b| b.replay(m, n, self.cstar))
    }

    pub fn to_json(&self, m: &Matroid, n: &Matroid) -> Value {
        json!({
            "cstar": labels_of(m, self.cstar),
            "x0": m.label(self.x0),
            "branches": self.branches.iter().map(|b| b.to_json(m, n)).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
            "flags": self.flags,
        })
    }
}

/// Statements of the cocircuit corollary (or, for [`Classifier::dual`], of
/// the circuit form), each with every element or fan that satisfies it.
#[derive(Clone, Debug)]
pub struct StatementVerdict {
    pub set: ElementSet,
    pub x0: usize,
    pub stmt_i: Vec<(usize, MinorWitness)>,
    pub stmt_ii: Vec<(usize, MinorWitness)>,
    pub stmt_iii: Vec<(Fan, MinorWitness)>,
}

impl StatementVerdict {
    fn new(set: ElementSet, x0: usize) -> StatementVerdict {
        StatementVerdict { set, x0, stmt_i: Vec::new(), stmt_ii: Vec::new(), stmt_iii: Vec::new() }
    }

    pub fn holds(&self) -> bool {
        !self.stmt_i.is_empty() || !self.stmt_ii.is_empty() || !self.stmt_iii.is_empty()
    }

    pub fn statements(&self) -> BTreeSet<&'static str> {
        let mut s = BTreeSet::new();
        if !self.stmt_i.is_empty() {
            s.insert("i");
        }
        if !self.stmt_ii.is_empty() {
            s.insert("ii");
        }
        if !self.stmt_iii.is_empty() {
            s.insert("iii");
        }
        s
    }

    pub fn i_elements(&self) -> ElementSet {
        ElementSet::from_indices(self.set.ground_size(), self.stmt_i.iter().map(|p| p.0))
    }

    pub fn ii_elements(&self) -> ElementSet {
        ElementSet::from_indices(self.set.ground_size(), self.stmt_ii.iter().map(|p| p.0))
    }

    pub fn to_json(&self, m: &Matroid, n: &Matroid) -> Value {
        let elems = |v: &[(usize, MinorWitness)]| {
            v.iter().map(|(x, w)| json!({ "x": m.label(*x), "minor": w.to_json(m, n) })).collect::<Vec<_>>()
        };
        json!({
            "set": labels_of(m, self.set),
            "x0": m.label(self.x0),
            "statements": self.statements(),
            "i": elems(&self.stmt_i),
            "ii": elems(&self.stmt_ii),
            "iii": self.stmt_iii.iter().map(|(f, w)| json!({
                "fan": f.elements().iter().map(|&e| m.label(e)).collect::<Vec<_>>(),
                "minor": w.to_json(m, n),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Reduce {
    SiContract,
    CoSiContract,
    CoDelete,
    SiCoDelete,
}

/// Classifier for a fixed host `M` and target `N`, caching per-element
/// reductions, structures and minor answers across instances.
pub struct Classifier<'a> {
    m: Matroid,
    oracle: &'a mut dyn MinorOracle,
    hypotheses: Option<std::result::Result<(), String>>,
    fans: Option<Vec<Fan>>,
    pairs: Option<Vec<SegCosegPair>>,
    reduced: HashMap<(Reduce, usize), Option<MinorWitness>>,
    contracted: HashMap<ElementSet, Option<MinorWitness>>,
    spore: HashMap<usize, Option<Spore>>,
    queries: HashMap<(ElementSet, ElementSet), Option<MinorWitness>>,
}

impl<'a> Classifier<'a> {
    pub fn new(oracle: &'a mut dyn MinorOracle) -> Classifier<'a> {
        let m = oracle.host().clone();
        Classifier {
            m,
            oracle,
            hypotheses: None,
            fans: None,
            pairs: None,
            reduced: HashMap::new(),
            contracted: HashMap::new(),
            spore: HashMap::new(),
            queries: HashMap::new(),
        }
    }

    pub fn host(&self) -> &Matroid {
        &self.m
    }

    pub fn target(&self) -> &Matroid {
        self.oracle.target()
    }

    fn query(&mut self, delete: ElementSet, contract: ElementSet) -> Result<Option<MinorWitness>> {
        if let Some(hit) = self.queries.get(&(delete, contract)) {
            return Ok(hit.clone());
        }
        let found = self.oracle.query(delete, contract)?;
        self.queries.insert((delete, contract), found.clone());
        Ok(found)
    }

    /// `M / x` (or `M \ x` when `delete`) has an `N`-minor.
    pub fn minor_after(&mut self, x: usize, delete: bool) -> Result<Option<MinorWitness>> {
        let s = self.m.set(&[x]);
        let e = self.m.empty();
        if delete {
            self.query(s, e)
        } else {
            self.query(e, s)
        }
    }

    fn check_global(&mut self) -> Result<()> {
        if self.hypotheses.is_none() {
            let n = self.oracle.target();
            let verdict = if n.n() < 4 {
                Err(format!("|E(N)| = {} < 4", n.n()))
            } else if !is_3_connected(n) {
                Err("N is not 3-connected".to_string())
            } else if let Some(sep) = three_connectivity_violation(&self.m) {
                Err(format!("M is not 3-connected: {}-separation {}", sep.k, sep.x.display_with(self.m.labels())))
            } else {
                Ok(())
            };
            self.hypotheses = Some(verdict);
        }
        match self.hypotheses.as_ref().expect("set above") {
            Ok(()) => Ok(()),
            Err(msg) => Err(Error::HypothesisViolated(msg.clone())),
        }
    }

    /// Checks the instance hypotheses; `dual` switches to circuit and deletion.
    pub fn check_instance(&mut self, set: ElementSet, x0: usize, dual: bool) -> Result<()> {
        self.check_global()?;
        let m = &self.m;
        if set.ground_size() != m.n() || x0 >= m.n() {
            return Err(Error::BadParams("instance does not match the host ground set".into()));
        }
        if dual && !m.is_circuit(set) {
            return Err(Error::HypothesisViolated(format!("{} is not a circuit", set.display_with(m.labels()))));
        }
        if !dual && !m.is_cocircuit(set) {
            return Err(Error::HypothesisViolated(format!("{} is not a cocircuit", set.display_with(m.labels()))));
        }
        if !set.contains(x0) {
            return Err(Error::HypothesisViolated(format!("{} is not in the given set", m.label(x0))));
        }
        if self.minor_after(x0, dual)?.is_none() {
            let op = if dual { "\\" } else { "/" };
            return Err(Error::HypothesisViolated(format!("M {op} {} has no N-minor", self.m.label(x0))));
        }
        Ok(())
    }

    /// The reduced minor is 3-connected and has an `N`-minor.
    fn reduced_ok(&mut self, kind: Reduce, x: usize) -> Result<Option<MinorWitness>> {
        if let Some(hit) = self.reduced.get(&(kind, x)) {
            return Ok(hit.clone());
        }
        let hm = match kind {
            Reduce::SiContract => si_of_contraction(&self.m, x)?,
            Reduce::CoSiContract => co_si_of_contraction(&self.m, x)?,
            Reduce::CoDelete => co_of_deletion(&self.m, x)?,
            Reduce::SiCoDelete => si_co_of_deletion(&self.m, x)?,
        };
        let found = if is_3_connected(&hm.matroid) { self.query(hm.delete, hm.contract)? } else { None };
        self.reduced.insert((kind, x), found.clone());
        Ok(found)
    }

    /// `M / s` is 3-connected and has an `N`-minor.
    fn contracted_ok(&mut self, s: ElementSet) -> Result<Option<MinorWitness>> {
        if let Some(hit) = self.contracted.get(&s) {
            return Ok(hit.clone());
        }
        let mc = self.m.contract(s)?;
        let found = if is_3_connected(&mc) { self.query(self.m.empty(), s)? } else { None };
        self.contracted.insert(s, found.clone());
        Ok(found)
    }

    fn unique_spore(&mut self, xi: usize) -> Result<Option<Spore>> {
        if let Some(hit) = self.spore.get(&xi) {
            return Ok(*hit);
        }
        let found = is_3conn_up_to_unique_spore(&self.m.contract_element(xi)?);
        self.spore.insert(xi, found);
        Ok(found)
    }

    fn fans(&mut self) -> Vec<Fan> {
        self.fans.get_or_insert_with(|| fans(&self.m)).clone()
    }

    fn pairs(&mut self) -> Vec<SegCosegPair> {
        self.pairs.get_or_insert_with(|| seg_coseg_pairs(&self.m)).clone()
    }

    fn spores_match(&mut self, pair: &SegCosegPair, p: ElementSet) -> Result<std::result::Result<Vec<(usize, Spore)>, String>> {
        let mut out = Vec::new();
        for &(xi, yi) in &pair.pairs {
            let want = expected_spore(p, yi, xi);
            match self.unique_spore(xi)? {
                Some(got) if got == want => out.push((xi, got)),
                Some(_) => return Ok(Err(format!("M/{} has a different unique spore", self.m.label(xi)))),
                None => return Ok(Err(format!("M/{} is not 3-connected up to a unique spore", self.m.label(xi)))),
            }
        }
        Ok(Ok(out))
    }

    /// Evaluates outcomes (i)-(iv) of the main theorem.
    pub fn main(&mut self, cstar: ElementSet, x0: usize, mode: Mode) -> Result<TheoremVerdict> {
        self.check_instance(cstar, x0, false)?;
        let mut v = TheoremVerdict { cstar, x0, branches: Vec::new(), diagnostics: Vec::new(), flags: Vec::new() };
        let stop = |v: &TheoremVerdict| mode == Mode::FirstBranch && v.holds();

        for x in cstar.iter() {
            if let Some(witness) = self.reduced_ok(Reduce::SiContract, x)? {
                v.branches.push(Branch::SiOk { x, witness });
                if stop(&v) {
                    return Ok(v);
                }
            }
        }
        for fan in self.fans() {
            if cstar.contains(fan.x1) && cstar.contains(fan.x3) {
                if let Some(witness) = self.reduced_ok(Reduce::SiContract, fan.x2)? {
                    v.branches.push(Branch::Fan { fan, witness });
                    if stop(&v) {
                        return Ok(v);
                    }
                }
            }
        }
        for pair in self.pairs() {
            let l = pair.l;
            let cl = self.m.closure(l);
            let rest = self.m.n() - cl.len();
            let extra = cl - l;
            if l.is_subset(cstar) && extra.len() == 1 {
                let e = extra.first().expect("one element");
                match self.branch_iii(&pair, e, cstar, cl)? {
                    Ok(b) => {
                        if rest < 4 {
                            v.flags.push(format!("outcome (iii) with |E - cl(L)| = {rest} for L = {}", l.display_with(self.m.labels())));
                        }
                        v.branches.push(b);
                    }
                    Err(why) => v.diagnostics.push(format!("(iii) shape at L = {}: {why}", l.display_with(self.m.labels()))),
                }
                if stop(&v) {
                    return Ok(v);
                }
            }
            if extra.is_empty() && (l - cstar).len() <= 1 {
                match self.branch_iv(&pair)? {
                    Ok(b) => {
                        if rest < 4 {
                            v.flags.push(format!("outcome (iv) with |E - cl(L)| = {rest} for L = {}", l.display_with(self.m.labels())));
                        }
                        v.branches.push(b);
                    }
                    Err(why) => v.diagnostics.push(format!("(iv) shape at L = {}: {why}", l.display_with(self.m.labels()))),
                }
                if stop(&v) {
                    return Ok(v);
                }
            }
        }
        Ok(v)
    }

    fn branch_iii(
        &mut self,
        pair: &SegCosegPair,
        e: usize,
        cstar: ElementSet,
        cl: ElementSet,
    ) -> Result<std::result::Result<Branch, String>> {
        if cstar.contains(e) {
            return Ok(Err(format!("e = {} lies in C*", self.m.label(e))));
        }
        let Some(si_e) = self.reduced_ok(Reduce::SiContract, e)? else {
            return Ok(Err(format!("si(M/{}) is not 3-connected with an N-minor", self.m.label(e))));
        };
        let Some(contract_cl) = self.contracted_ok(cl)? else {
            return Ok(Err("M/cl(L) is not 3-connected with an N-minor".into()));
        };
        Ok(match self.spores_match(pair, cl)? {
            Ok(spores) => Ok(Branch::SegCosegWithE { pair: pair.clone(), e, si_e, contract_cl, spores }),
            Err(why) => Err(why),
        })
    }

    fn branch_iv(&mut self, pair: &SegCosegPair) -> Result<std::result::Result<Branch, String>> {
        let Some(contract_l) = self.contracted_ok(pair.l)? else {
            return Ok(Err("M/L is not 3-connected with an N-minor".into()));
        };
        Ok(match self.spores_match(pair, pair.l)? {
            Ok(spores) => Ok(Branch::SegCosegFlat { pair: pair.clone(), contract_l, spores }),
            Err(why) => Err(why),
        })
    }

    /// Statements (i)-(iii) of the cocircuit corollary.
    pub fn thm1(&mut self, cstar: ElementSet, x0: usize) -> Result<StatementVerdict> {
        self.check_instance(cstar, x0, false)?;
        let mut v = StatementVerdict::new(cstar, x0);
        for x in cstar.iter() {
            if let Some(w) = self.reduced_ok(Reduce::SiContract, x)? {
                v.stmt_i.push((x, w));
            }
            if let Some(w) = self.reduced_ok(Reduce::CoSiContract, x)? {
                v.stmt_ii.push((x, w));
            }
        }
        for fan in self.fans() {
            if cstar.contains(fan.x1) && cstar.contains(fan.x3) {
                if let Some(w) = self.reduced_ok(Reduce::SiContract, fan.x2)? {
                    v.stmt_iii.push((fan, w));
                }
            }
        }
        Ok(v)
    }

    /// Statements (i)-(iii) of the circuit form: `co(M \ x)`, `si(co(M \ x))`,
    /// and fans with `x2, x4 ∈ C` and `co(M \ x3)` 3-connected with an `N`-minor.
    pub fn dual(&mut self, c: ElementSet, x0: usize) -> Result<StatementVerdict> {
        self.check_instance(c, x0, true)?;
        let mut v = StatementVerdict::new(c, x0);
        for x in c.iter() {
            if let Some(w) = self.reduced_ok(Reduce::CoDelete, x)? {
                v.stmt_i.push((x, w));
            }
            if let Some(w) = self.reduced_ok(Reduce::SiCoDelete, x)? {
                v.stmt_ii.push((x, w));
            }
        }
        for fan in self.fans() {
            if c.contains(fan.x2) && c.contains(fan.x4) {
                if let Some(w) = self.reduced_ok(Reduce::CoDelete, fan.x3)? {
                    v.stmt_iii.push((fan, w));
                }
            }
        }
        Ok(v)
    }
}

/// Outcome (iii)/(iv) with `|E - cl(L)| >= 4` must come with statement (ii)
/// of the corollary at some `xi ∈ L ∩ C*`. Returns the offending pairs.
pub fn thm1_bridge(m: &Matroid, main: &TheoremVerdict, thm1: &StatementVerdict) -> Vec<String> {
    let ii = thm1.ii_elements();
    let mut bad = Vec::new();
    for b in &main.branches {
        let pair = match b {
            Branch::SegCosegWithE { pair, .. } | Branch::SegCosegFlat { pair, .. } => pair,
            _ => continue,
        };
        if m.n() - m.closure(pair.l).len() < 4 {
            continue;
        }
        if (pair.l & main.cstar & ii).is_empty() {
            bad.push(format!("no xi in L = {} satisfies statement (ii)", pair.l.display_with(m.labels())));
        }
    }
    bad
}

/// The circuit-form verdict on `M` must equal the cocircuit-form verdict on
/// `M*` with target `N*`, fans read in reverse.
pub fn duality_mismatch(dual_on_m: &StatementVerdict, thm1_on_dual: &StatementVerdict) -> Option<String> {
    if dual_on_m.i_elements() != thm1_on_dual.i_elements() {
        return Some("statement (i) element sets differ".into());
    }
    if dual_on_m.ii_elements() != thm1_on_dual.ii_elements() {
        return Some("statement (ii) element sets differ".into());
    }
    let a: BTreeSet<[usize; 4]> = dual_on_m.stmt_iii.iter().map(|(f, _)| f.elements()).collect();
    let b: BTreeSet<[usize; 4]> = thm1_on_dual
        .stmt_iii
        .iter()
        .map(|(f, _)| {
            let [x1, x2, x3, x4] = f.elements();
            [x4, x3, x2, x1]
        })
        .collect();
    (a != b).then(|| "statement (iii) fans differ".into())
}

pub fn classify_main(m: &Matroid, n: &Matroid, cstar: ElementSet, x0: usize, mode: Mode) -> Result<TheoremVerdict> {
    let mut oracle = GenericOracle::new(m.clone(), n.clone());
    Classifier::new(&mut oracle).main(cstar, x0, mode)
}

pub fn classify_thm1(m: &Matroid, n: &Matroid, cstar: ElementSet, x0: usize) -> Result<StatementVerdict> {
    let mut oracle = GenericOracle::new(m.clone(), n.clone());
    Classifier::new(&mut oracle).thm1(cstar, x0)
}

pub fn classify_dual(m: &Matroid, n: &Matroid, c: ElementSet, x0: usize) -> Result<StatementVerdict> {
    let mut oracle = GenericOracle::new(m.clone(), n.clone());
    Classifier::new(&mut oracle).dual(c, x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, k5_minus_e, theta_double, uniform};

    #[test]
    fn uniform_instance_takes_outcome_one() {
        let m = uniform(3, 6).unwrap();
        let n = uniform(2, 4).unwrap();
        let cstar = m.set(&[0, 1, 2, 3]);
        let v = classify_main(&m, &n, cstar, 0, Mode::All).unwrap();
        assert!(v.has("i"));
        assert!(v.replay(&m, &n));
        let si = si_of_contraction(&m, 0).unwrap().matroid;
        assert!(crate::iso::is_isomorphic(&si, &uniform(2, 5).unwrap()).is_some());
        let t = classify_thm1(&m, &n, cstar, 0).unwrap();
        assert!(t.statements().contains("i"));
    }

    #[test]
    fn hypotheses_are_enforced() {
        let m = uniform(3, 6).unwrap();
        let n = uniform(2, 4).unwrap();
        let err = classify_main(&m, &n, m.set(&[0, 1, 2]), 0, Mode::All).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
        let small = uniform(1, 3).unwrap();
        assert!(classify_main(&m, &small, m.set(&[0, 1, 2, 3]), 0, Mode::All).is_err());
    }

    #[test]
    fn fig2_dual_instance() {
        let m = k5_minus_e();
        let ms = m.dual();
        let k4 = complete(4).unwrap();
        let c = m.set_of(&["a", "b", "c", "d"]).unwrap();
        for x in c.iter() {
            let t = classify_thm1(&ms, &k4, c, x).unwrap();
            assert!(t.i_elements().is_empty());
            assert_eq!(t.ii_elements(), c);
        }
        let d = classify_dual(&m, &k4, c, 0).unwrap();
        assert!(d.stmt_i.is_empty());
        assert_eq!(d.ii_elements(), c);
    }

    #[test]
    fn theta_double_dual_takes_segment_outcome() {
        let md = theta_double(3).unwrap();
        let m = md.dual();
        let k4 = complete(4).unwrap();
        let c = m.set_of(&["a2", "a3", "a2'", "a3'"]).unwrap();
        let v = classify_main(&m, &k4, c, m.index_of("a2").unwrap(), Mode::All).unwrap();
        assert!(!v.has("i") && !v.has("ii"));
        assert!(v.has("iii") || v.has("iv"));
        assert!(v.replay(&m, &k4));
        assert!(v.flags.is_empty());
        let t = classify_thm1(&m, &k4, c, m.index_of("a2").unwrap()).unwrap();
        assert!(thm1_bridge(&m, &v, &t).is_empty());
    }

    #[test]
    fn dual_form_matches_corollary_on_dual() {
        let m = k5_minus_e();
        let k4 = complete(4).unwrap();
        let c = m.set_of(&["a", "b", "c", "d"]).unwrap();
        let d = classify_dual(&m, &k4, c, 0).unwrap();
        let t = classify_thm1(&m.dual(), &k4.dual(), c, 0).unwrap();
        assert_eq!(duality_mismatch(&d, &t), None);
    }

    #[test]
    fn host_minor_bookkeeping() {
        let m = k5_minus_e().dual();
        let x = m.index_of("a").unwrap();
        let si = si_of_contraction(&m, x).unwrap();
        assert!(si.contract == m.set(&[x]));
        assert_eq!(si.matroid.n(), m.n() - 1 - si.delete.len());
        let direct = m.minor(si.delete, si.contract).unwrap();
        assert!(direct.same_structure(&si.matroid));
        let cosi = co_si_of_contraction(&m, x).unwrap();
        assert!(m.minor(cosi.delete, cosi.contract).unwrap().same_structure(&cosi.matroid));
    }
}
