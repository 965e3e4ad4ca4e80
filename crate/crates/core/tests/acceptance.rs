//! Acceptance criteria 1-8. Each prints one PASS/FAIL line with its wall
//! time against the budget; the process exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use matroid_lab::catalogue::{Catalogue, CatalogueSpec, Entry};
use matroid_lab::connectivity::{find_minimal_partition, lambda_bits, vertical_3_partitions};
use matroid_lab::constructions::{complete, fig1_matroid, k5_minus_e, theta_double};
use matroid_lab::minors::{has_minor, naive_has_minor};
use matroid_lab::props::{random_minor_of, run_catalogue, Budget, Sections};
use matroid_lab::structures::seg_coseg_pairs;
use matroid_lab::sweep::{default_targets, sweep, SweepOptions};
use matroid_lab::theorem::{classify_thm1, co_si_of_contraction, si_of_contraction};
use matroid_lab::verify::{run_suite, Suite, VerifyOptions};
use matroid_lab::{ElementSet, Matroid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion(id: u32, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(e) => (false, e),
    };
    println!(
        "{} criterion {id}: {title} ({:.2} s of {} s): {detail}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    passed
}

/// Every named check of a library suite must pass.
fn library_suite(suite: Suite) -> Outcome {
    let checks = run_suite(suite, &VerifyOptions::default());
    ensure(!checks.is_empty(), format!("{suite} ran no checks"))?;
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(c.line());
    }
    Ok(format!("{} library checks", checks.len()))
}

fn err(e: matroid_lab::Error) -> String {
    e.to_string()
}

fn fig2_suite() -> Outcome {
    let lib = library_suite(Suite::Fig2)?;
    let m = k5_minus_e();
    let md = m.dual();
    let k4 = complete(4).map_err(err)?;
    let c = m.set_of(&["a", "b", "c", "d"]).map_err(err)?;
    ensure(common::is_circuit(&m, c.bits()), "C is not a circuit of M")?;
    ensure(common::is_cocircuit(&md, c.bits()), "C is not a cocircuit of M*")?;
    for x in c.iter() {
        let l = md.label(x).to_string();
        let mx = md.contract_element(x).map_err(err)?;
        ensure(naive_has_minor(&mx, &k4).is_some(), format!("M*/{l} has no M(K4)-minor"))?;
        let si = si_of_contraction(&md, x).map_err(err)?;
        ensure(!common::is_3_connected(&si.matroid), format!("si(M*/{l}) is 3-connected"))?;
        let co = co_si_of_contraction(&md, x).map_err(err)?;
        ensure(common::is_3_connected(&co.matroid), format!("co(si(M*/{l})) is not 3-connected"))?;
        ensure(naive_has_minor(&co.matroid, &k4).is_some(), format!("co(si(M*/{l})) has no M(K4)-minor"))?;
        let v = classify_thm1(&md, &k4, c, x).map_err(err)?;
        let s = v.statements();
        ensure(s.contains("ii") && !s.contains("i"), format!("x0 = {l}: statements {s:?}"))?;
        ensure(v.ii_elements().contains(x), format!("x0 = {l}: statement (ii) not at x0"))?;
    }
    Ok(format!("{lib}; circuit, cocircuit, reductions and statement (ii) re-checked at every x in C"))
}

fn theta_suite() -> Outcome {
    let lib = library_suite(Suite::Theta)?;
    for r in [3, 4] {
        let d = theta_double(r).map_err(err)?;
        let c = (1..r).chain(r + 1..2 * r).fold(0u32, |acc, i| acc | 1 << i);
        ensure(common::is_circuit(&d, c), format!("C is not a circuit of the r = {r} double"))?;
    }
    let md = theta_double(3).map_err(err)?.dual();
    ensure(common::is_segment(&md, 0b111), "A is not a segment of M*")?;
    for x in [1usize, 2] {
        let l = md.label(x).to_string();
        let si = si_of_contraction(&md, x).map_err(err)?.matroid;
        let series = (1..=common::full(&si)).filter(|&p| p.count_ones() == 2 && common::is_cocircuit(&si, p)).count();
        ensure(series == 1, format!("si(M*/{l}) has {series} series pairs"))?;
        ensure(!common::is_3_connected(&si), format!("si(M*/{l}) is 3-connected"))?;
        let co = co_si_of_contraction(&md, x).map_err(err)?.matroid;
        ensure(common::is_3_connected(&co), format!("co(si(M*/{l})) is not 3-connected"))?;
    }
    Ok(format!("{lib}; circuit, segment and series-pair claims re-checked"))
}

fn fig1_suite() -> Outcome {
    let lib = library_suite(Suite::Fig1)?;
    let m = fig1_matroid();
    let md = m.dual();
    let star = m.set_of(&["ab", "ac", "ad", "ae", "af", "ah", "ai", "aj"]).map_err(err)?;
    ensure(common::is_circuit(&md, star.bits()), "star of a is not a cocircuit")?;
    let fan = m.set_of(&["ad", "cd", "ac", "bc"]).map_err(err)?.to_vec();
    let bit = |l: &str| m.index_of(l).map(|e| 1u32 << e).map_err(err);
    let tri = bit("ad")? | bit("cd")? | bit("ac")?;
    let triad = bit("cd")? | bit("ac")? | bit("bc")?;
    ensure(fan.len() == 4 && common::is_circuit(&m, tri) && common::is_circuit(&md, triad), "(ad, cd, ac, bc) is not a fan")?;
    Ok(format!("{lib}; cocircuit and fan re-checked from the rank function"))
}

fn sweep_suite() -> Outcome {
    let cat = Catalogue::build(&CatalogueSpec::default()).map_err(err)?;
    let rep = sweep(&cat, &SweepOptions::default()).map_err(err)?;
    ensure(!rep.instances.is_empty(), "no instances")?;
    ensure(rep.instances.iter().all(|i| !i.branches.is_empty()), "an instance has no outcome")?;
    ensure(rep.passed(), rep.summary())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("sweep.json");
    std::fs::write(&path, serde_json::to_string(&rep.to_json()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let back: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(back["instances"].as_array().map(Vec::len) == Some(rep.instances.len()), "written report does not parse back")?;
    Ok(format!("{} entries, {} instances, histogram {:?}, 0 violations", cat.len(), rep.instances.len(), rep.histogram))
}

fn extended() -> Result<Catalogue, String> {
    Catalogue::build(&CatalogueSpec::extended()).map_err(err)
}

fn property_suite(cat: &Catalogue, sections: Sections, names: &[&str]) -> Outcome {
    let rep = run_catalogue(cat, &default_targets(), Budget::default(), 0, sections);
    for name in names {
        ensure(rep.checked(name) > 0, format!("{name} never checked"))?;
    }
    ensure(rep.all_pass(), rep.summary())?;
    Ok(names.iter().map(|n| format!("{n} {}", rep.checked(n))).collect::<Vec<_>>().join(", "))
}

fn section2() -> Outcome {
    let cat = extended()?;
    let names = [
        "submodularity",
        "lambda_duality",
        "guts",
        "cosegment",
        "vertcl",
        "flowers3",
        "flowers1",
        "prop7",
        "bixby",
        "prop6",
        "two_sum_round_trip",
    ];
    let out = property_suite(&cat, Sections { s2: true, s3: false, s4: false }, &names)?;
    for e in &cat.entries {
        let m = &e.matroid;
        let d = m.dual();
        for x in 0..=common::full(m) {
            let l = common::lambda(m, x);
            ensure(l == lambda_bits(m, x) && l == common::lambda(&d, x), format!("{}: λ mismatch", e.name))?;
        }
    }
    Ok(format!("{out}; λ and λ* re-checked on every subset"))
}

fn section3() -> Outcome {
    let cat = extended()?;
    let out = property_suite(&cat, Sections { s2: false, s3: true, s4: false }, &["prop9", "prop10", "crocspore", "prop4"])?;
    let mut total = 0;
    for e in &cat.entries {
        let m = &e.matroid;
        let mut lib: Vec<(u32, Vec<(usize, usize)>)> = seg_coseg_pairs(m).into_iter().map(|p| (p.l.bits(), p.pairs)).collect();
        let mut reference = common::seg_coseg_pairs(m);
        lib.sort();
        reference.sort();
        ensure(lib == reference, format!("{}: {} pairs found, {} expected", e.name, lib.len(), reference.len()))?;
        if !common::is_3_connected(m) {
            continue;
        }
        for (l, pairs) in &reference {
            total += 1;
            let lstar = pairs.iter().fold(0u32, |acc, p| acc | 1 << p.1);
            ensure(common::is_cosegment(m, lstar), format!("{}: L* is not a cosegment", e.name))?;
            let cl = common::closure(m, *l);
            if cl != common::full(m) {
                let mc = m.contract(ElementSet::from_bits(m.n(), cl)).map_err(err)?;
                ensure(common::is_3_connected(&mc), format!("{}: M/cl(L) is not 3-connected", e.name))?;
            }
        }
    }
    Ok(format!("{out}; pair lists match the reference enumeration, {total} pairs re-checked"))
}

fn three_connected(cat: &Catalogue) -> Vec<&Entry> {
    cat.entries.iter().filter(|e| e.matroid.n() >= 4 && common::is_3_connected(&e.matroid)).collect()
}

fn all_parts(m: &Matroid) -> Vec<Vec<(u32, u32)>> {
    (0..m.n()).map(|x| common::vertical3(m, x)).collect()
}

fn cocircuits_and_ground(m: &Matroid) -> Vec<u32> {
    (1..=common::full(m)).filter(|&c| common::is_cocircuit(m, c)).chain([common::full(m)]).collect()
}

fn section4() -> Outcome {
    let cat = extended()?;
    let names = ["biglem", "prop11", "crossetc_i", "crossetc_ii", "crossetc_iii", "crossetc_iv", "crossetc_v", "crossetc_vi", "bigstep"];
    let out = property_suite(&cat, Sections { s2: false, s3: false, s4: true }, &names)?;
    let mut checked = 0;
    for e in three_connected(&cat) {
        let m = &e.matroid;
        let parts = all_parts(m);
        for a in cocircuits_and_ground(m) {
            for x in (0..m.n()).filter(|x| a >> x & 1 == 1) {
                for &(x1, x2) in &parts[x] {
                    if common::is_minimal(a, x1, x2, x, &mut |y| parts[y].clone()) {
                        checked += 1;
                        let f = x2 | 1 << x;
                        ensure(common::closure(m, f) == f, format!("{}: X2 ∪ x is not a flat", e.name))?;
                    }
                }
            }
        }
    }
    ensure(checked > 0, "no reference-minimal partitions found")?;
    Ok(format!("{out}; X2 ∪ x a flat for all {checked} reference-minimal partitions"))
}

fn oracle_equivalence() -> Outcome {
    let cat = extended()?;
    let mut seeds = 0;
    for e in three_connected(&cat) {
        let m = &e.matroid;
        let parts = all_parts(m);
        for (x, reference) in parts.iter().enumerate() {
            let lib: BTreeSet<(u32, u32)> = vertical_3_partitions(m, x)
                .map_err(err)?
                .iter()
                .flat_map(|p| [(p.x1.bits(), p.x2.bits()), (p.x2.bits(), p.x1.bits())])
                .collect();
            let reference: BTreeSet<(u32, u32)> = reference.iter().copied().collect();
            ensure(lib == reference, format!("{}: vertical 3-partitions at {} differ", e.name, m.label(x)))?;
        }
        for a in cocircuits_and_ground(m) {
            let aset = ElementSet::from_bits(m.n(), a);
            for z in aset.iter() {
                for seed in vertical_3_partitions(m, z).map_err(err)? {
                    for seed in [seed, seed.flipped()] {
                        seeds += 1;
                        let q = find_minimal_partition(m, aset, &seed).map_err(err)?;
                        let (x1, x2) = (q.x1.bits(), q.x2.bits());
                        let at = format!("{}: seed {}", e.name, seed.display(m));
                        ensure(parts[q.x].contains(&(x1, x2)), format!("{at}: result is not a vertical 3-partition"))?;
                        ensure(common::is_minimal(a, x1, x2, q.x, &mut |y| parts[y].clone()), format!("{at}: result is not minimal"))?;
                        ensure(x1 & !seed.x1.bits() == 0, format!("{at}: X1 not inside Z1"))?;
                        ensure(a >> q.x & 1 == 1 && (seed.x1.bits() | 1 << z) >> q.x & 1 == 1, format!("{at}: apex outside A ∩ (Z1 ∪ z)"))?;
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut hosts: Vec<Matroid> = cat.entries.iter().map(|e| e.matroid.clone()).filter(|m| m.n() <= 9).collect();
    for e in cat.entries.iter().filter(|e| e.matroid.n() > 9) {
        hosts.extend((0..3).filter_map(|_| random_minor_of(&e.matroid, 9, &mut rng)));
    }
    let mut targets: Vec<Matroid> = hosts.iter().filter(|m| m.n() <= 6).cloned().collect();
    targets.push(complete(4).map_err(err)?);
    let mut pairs = 0;
    for m in &hosts {
        for n in &targets {
            pairs += 1;
            let fast = has_minor(m, n).map_err(err)?;
            let slow = naive_has_minor(m, n);
            ensure(fast.is_some() == slow.is_some(), format!("has_minor disagrees on |E(M)| = {}, |E(N)| = {}", m.n(), n.n()))?;
            if let Some(w) = fast {
                ensure(w.replay(m, n), "witness does not replay")?;
            }
        }
    }
    Ok(format!("{seeds} seeds re-verified exhaustively; {pairs} minor queries agree with the naive search"))
}

fn main() {
    let results = [
        criterion(1, "Fig. 2 example", Duration::from_secs(10), fig2_suite),
        criterion(2, "Θ family", Duration::from_secs(60), theta_suite),
        criterion(3, "Fig. 1 example", Duration::from_secs(300), fig1_suite),
        criterion(4, "main-theorem sweep", Duration::from_secs(1800), sweep_suite),
        criterion(5, "connectivity properties", Duration::from_secs(600), section2),
        criterion(6, "segment-cosegment properties", Duration::from_secs(600), section3),
        criterion(7, "minimal-partition properties", Duration::from_secs(900), section4),
        criterion(8, "oracle equivalence", Duration::from_secs(300), oracle_equivalence),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
