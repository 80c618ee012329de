//! Acceptance criteria evaluated against the corpus and fixtures. Each
//! returns an [`Outcome`] rather than panicking, so the acceptance runner can
//! print every line.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use jicert_core::centprod::{central_decomposition, CentralProductWitnesses};
use jicert_core::certifier::{
    check_critical_stage, check_ep_proper, check_wilson_stage, derive_critical_marks, verify_critical_centralizer,
    CheckOptions, CheckStatus, CRITICAL_CENTRALIZER, CRITICAL_PAIR, DEFAULT_SUBGROUP_BOUND, WILSON_I, WILSON_II,
};
use jicert_core::class_spec::SchurTable;
use jicert_core::group::{subgroup_generated, wreath_product};
use jicert_core::library::alternating;
use jicert_core::normal::{
    check_refinement, composition_factors, critical_pairs, find_critical_refinement, normal_subgroups,
};
use jicert_core::system::{parse_system, SystemPrefix};
use jicert_core::{Mode, PermGroup, Permutation, DEFAULT_DENSE_BOUND};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::corpus::corpus;
use super::oracle::{is_prime_power, is_prime_power_of, Bits, Oracle};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn from_failures(failures: Vec<String>, summary: String) -> Outcome {
        if failures.is_empty() {
            Outcome {
                pass: true,
                detail: summary,
            }
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            Outcome {
                pass: false,
                detail: format!("{} failure(s): {}", failures.len(), shown.join("; ")),
            }
        }
    }
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> SystemPrefix {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    parse_system(&text, DEFAULT_DENSE_BOUND).unwrap()
}

/// Normal subgroups, critical pairs, composition factors and central
/// decomposability against the brute-force oracle.
pub fn corpus_oracles() -> Outcome {
    let mut failures = Vec::new();
    let (mut normals_seen, mut pairs_seen) = (0, 0);
    for e in corpus() {
        let (g, o) = (&e.group, e.oracle());
        let normals = o.normals();
        normals_seen += normals.len();

        let engine = normal_subgroups(g).unwrap();
        let engine_set: HashSet<Bits> = engine.iter().map(|h| o.sub_of(h)).collect();
        let expected: HashSet<Bits> = normals.iter().cloned().collect();
        if engine.len() != normals.len() || engine_set != expected {
            failures.push(format!(
                "{}: normal subgroups {} vs oracle {}",
                e.name,
                engine.len(),
                normals.len()
            ));
        }

        let pairs = critical_pairs(g).unwrap();
        pairs_seen += pairs.len();
        let engine_pairs: HashSet<(Bits, Bits)> = pairs.iter().map(|p| (o.sub_of(p.a()), o.sub_of(p.b()))).collect();
        let oracle_pairs: HashSet<(Bits, Bits)> = Oracle::critical_pairs(&normals)
            .into_iter()
            .map(|(a, b)| (normals[a].clone(), normals[b].clone()))
            .collect();
        if pairs.len() != oracle_pairs.len() || engine_pairs != oracle_pairs {
            failures.push(format!(
                "{}: critical pairs {} vs oracle {}",
                e.name,
                pairs.len(),
                oracle_pairs.len()
            ));
        }

        let mut engine_factors: BTreeMap<u64, usize> = BTreeMap::new();
        for (t, k) in &composition_factors(g).unwrap().0 {
            *engine_factors.entry(t.order()).or_default() += k;
        }
        let oracle_factors = o.composition_orders(&normals);
        if engine_factors != oracle_factors {
            failures.push(format!(
                "{}: composition factors {engine_factors:?} vs oracle {oracle_factors:?}",
                e.name
            ));
        }

        let engine_dec = central_decomposition(g).unwrap().is_some();
        if engine_dec != o.centrally_decomposable(&normals) {
            failures.push(format!("{}: central decomposability {engine_dec} disagrees", e.name));
        }
    }
    Outcome::from_failures(
        failures,
        format!(
            "{} groups, {normals_seen} normal subgroups, {pairs_seen} critical pairs agree",
            corpus().len()
        ),
    )
}

fn oracle_nilpotent(o: &Oracle, k: &Bits) -> bool {
    let k_gens = o.gens_of(k);
    let mut term = k.clone();
    loop {
        let comms: Vec<usize> = o
            .members(&term)
            .iter()
            .flat_map(|&x| k_gens.iter().map(move |&y| (x, y)))
            .map(|(x, y)| o.comm(x, y))
            .collect();
        let next = o.normal_closure(&comms, &k_gens);
        if o.is_trivial(&next) {
            return true;
        }
        if next == term {
            return false;
        }
        term = next;
    }
}

/// A normal `K` not centralising a critical `A/B` contains `A` and is not
/// nilpotent, for every corpus group, critical pair and normal subgroup.
pub fn centralizer_sweep() -> Outcome {
    let mut failures = Vec::new();
    let mut triples = 0;
    for e in corpus() {
        let (g, o) = (&e.group, e.oracle());
        let normals = normal_subgroups(g).unwrap();
        for pair in critical_pairs(g).unwrap() {
            let (a, b) = (o.sub_of(pair.a()), o.sub_of(pair.b()));
            let c = o.section_centralizer(&a, &b);
            for k in &normals {
                triples += 1;
                let kb = o.sub_of(k);
                let oracle = Oracle::le(&kb, &c) || (Oracle::le(&a, &kb) && !oracle_nilpotent(o, &kb));
                let engine = verify_critical_centralizer(g, &pair, k).unwrap();
                if !engine || !oracle {
                    failures.push(format!(
                        "{}: pair ({}, {}) K of order {} engine {engine} oracle {oracle}",
                        e.name,
                        pair.a().order(),
                        pair.b().order(),
                        k.order()
                    ));
                }
            }
        }
    }
    Outcome::from_failures(
        failures,
        format!("{triples} (group, critical pair, normal subgroup) triples hold"),
    )
}

/// Every chief factor refines to a critical pair with the same product,
/// isomorphic section and identical section centralizer.
pub fn refinement_sweep() -> Outcome {
    let mut failures = Vec::new();
    let mut factors = 0;
    for e in corpus() {
        let (g, o) = (&e.group, e.oracle());
        let normals = o.normals();
        let oracle_pairs: HashSet<(Bits, Bits)> = Oracle::critical_pairs(&normals)
            .into_iter()
            .map(|(a, b)| (normals[a].clone(), normals[b].clone()))
            .collect();
        for (ik, il) in Oracle::chief_factors(&normals) {
            factors += 1;
            let (k, l) = (&normals[ik], &normals[il]);
            let (kg, lg) = (o.group_of(g, k), o.group_of(g, l));
            let pair = match find_critical_refinement(g, &kg, &lg) {
                Ok(p) => p,
                Err(err) => {
                    failures.push(format!("{}: factor {}/{}: {err}", e.name, kg.order(), lg.order()));
                    continue;
                }
            };
            let (a, b) = (o.sub_of(pair.a()), o.sub_of(pair.b()));
            let ok = oracle_pairs.contains(&(a.clone(), b.clone()))
                && b == Oracle::meet(&a, l)
                && Oracle::le(&a, k)
                && Oracle::size(&a) * Oracle::size(l) == Oracle::size(k) * Oracle::size(&b)
                && o.section_orders(&a, &b) == o.section_orders(k, l)
                && o.section_centralizer(&a, &b) == o.section_centralizer(k, l)
                && check_refinement(g, &kg, &lg, &pair).unwrap().all();
            if !ok {
                failures.push(format!(
                    "{}: factor {}/{} refinement invalid",
                    e.name,
                    kg.order(),
                    lg.order()
                ));
            }
        }
    }
    Outcome::from_failures(failures, format!("{factors} chief factors refined"))
}

/// Where the hypotheses hold, `E^p(G) < G`; the engine's reading of the
/// hypotheses also matches the oracle.
pub fn ep_sweep() -> Outcome {
    let table = SchurTable::builtin();
    let mut failures = Vec::new();
    let (mut applicable, mut evaluated) = (0, 0);
    for e in corpus() {
        let (g, o) = (&e.group, e.oracle());
        let normals = o.normals();
        let series = Oracle::chief_series(&normals);
        for p in [2u64, 3, 5, 7] {
            evaluated += 1;
            let mut has = false;
            let mut central = true;
            let mut coprime = true;
            for w in series.windows(2) {
                let (top, bottom) = (&w[1], &w[0]);
                let q = Oracle::size(top) / Oracle::size(bottom);
                if is_prime_power_of(q, p as usize) {
                    has = true;
                    let tg = o.gens_of(top);
                    central &= tg.iter().all(|&x| o.gens.iter().all(|&y| bottom[o.comm(x, y)]));
                } else if !is_prime_power(q) {
                    let (s, _) = o.chief_factor_type(top, bottom);
                    match table.entries().iter().find(|t| t.order == s) {
                        Some(entry) => coprime &= entry.multiplier % p != 0,
                        None => coprime = false,
                    }
                }
            }
            let holds = has && central && coprime;
            let index_p = normals.iter().any(|n| Oracle::size(n) * p as usize == o.order());
            let v = check_ep_proper(g, p, table).unwrap();
            let engine_holds = v.has_factor_of_exponent_p && v.all_such_central && v.multipliers_coprime == Some(true);
            if holds {
                applicable += 1;
            }
            if v.status == CheckStatus::Fail
                || engine_holds != holds
                || (holds && (!index_p || v.status != CheckStatus::Pass))
            {
                failures.push(format!(
                    "{} p={p}: engine {:?}, oracle hypotheses {holds}",
                    e.name, v.status
                ));
            }
        }
    }
    Outcome::from_failures(
        failures,
        format!("{evaluated} (group, prime) cases, {applicable} with hypotheses holding, all proper"),
    )
}

/// Central product witnesses for every non-central `K` and nontrivial
/// normal `L` of each decomposable corpus group. Above the subgroup bound
/// `K` runs over one cyclic subgroup per conjugacy class.
pub fn central_product_sweep() -> Outcome {
    let mut failures = Vec::new();
    let (mut groups, mut calls) = (0, 0);
    for e in corpus() {
        let (g, o) = (&e.group, e.oracle());
        let normals = o.normals();
        if !o.centrally_decomposable(&normals) {
            continue;
        }
        groups += 1;
        let search = match CentralProductWitnesses::new(g) {
            Ok(s) => s,
            Err(err) => {
                failures.push(format!("{}: {err}", e.name));
                continue;
            }
        };
        let z = o.center();
        let subgroups = if o.order() <= DEFAULT_SUBGROUP_BOUND {
            o.all_subgroups()
        } else {
            o.cyclic_subgroup_reps()
        };
        let ks: Vec<(Bits, PermGroup)> = subgroups
            .into_iter()
            .filter(|k| !Oracle::le(k, &z))
            .map(|k| {
                let kg = o.group_of(g, &k);
                (k, kg)
            })
            .collect();
        for l in normals.iter().filter(|l| !o.is_trivial(l)) {
            let lg = o.group_of(g, l);
            let in_l = o.normals_under(l, &o.gens_of(l));
            for (k, kg) in &ks {
                calls += 1;
                let (h, m) = match search.witness(kg, &lg) {
                    Ok(x) => x,
                    Err(err) => {
                        failures.push(format!("{}: |K| = {}, |L| = {}: {err}", e.name, kg.order(), lg.order()));
                        continue;
                    }
                };
                let (hb, mb) = (o.sub_of(&h), o.sub_of(&m));
                let maximal = Oracle::lt(&mb, l)
                    && in_l.contains(&mb)
                    && !in_l.iter().any(|x| Oracle::lt(&mb, x) && Oracle::lt(x, l));
                if !(normals.contains(&hb) && maximal && !Oracle::le(&hb, &mb) && !Oracle::le(k, &hb)) {
                    failures.push(format!("{}: invalid witness for |K| = {}", e.name, kg.order()));
                }
            }
        }
    }
    Outcome::from_failures(failures, format!("{groups} decomposable groups, {calls} (K, L) cases"))
}

/// The cyclic tower passes Wilson's conditions at every stage with a
/// kernel and fails the critical-pair checks at every consecutive pair.
pub fn cyclic_contrast() -> Outcome {
    let prefix = load_fixture("cyclic_tower.json");
    let opts = CheckOptions::default();
    let mut failures = Vec::new();
    for n in 1..prefix.len() {
        let v = check_wilson_stage(n, prefix.group(n), prefix.b(n).unwrap(), &opts).unwrap();
        for name in [WILSON_I, WILSON_II] {
            if v.status(name) != Some(CheckStatus::Pass) {
                failures.push(format!("stage {n}: {name} is {:?}", v.status(name)));
            }
        }
    }
    for n in 0..prefix.len() - 1 {
        let v = check_critical_stage(
            n,
            prefix.rho(n).unwrap(),
            prefix.a_mark(n + 1).unwrap(),
            prefix.a_mark(n).unwrap(),
            prefix.b(n).unwrap(),
        )
        .unwrap();
        if ![CRITICAL_PAIR, CRITICAL_CENTRALIZER]
            .iter()
            .any(|c| v.status(c) == Some(CheckStatus::Fail))
        {
            failures.push(format!("stage {n}: critical checks did not fail"));
        }
    }
    Outcome::from_failures(
        failures,
        format!(
            "Wilson passes at stages 1..{}, critical checks fail at stages 0..{}",
            prefix.len() - 1,
            prefix.len() - 2
        ),
    )
}

/// Derived marks on the S3-wreath fixture pass both critical checks at
/// every stage that has a successor.
pub fn derivation_on_wreath() -> Outcome {
    let prefix = load_fixture("s3_wreath.json");
    let d = match derive_critical_marks(&prefix) {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: format!("derivation failed: {e}"),
            }
        }
    };
    let p = &d.prefix;
    let mut failures = Vec::new();
    for n in 0..p.len() - 1 {
        let v = check_critical_stage(
            n,
            p.rho(n).unwrap(),
            p.a_mark(n + 1).unwrap(),
            p.a_mark(n).unwrap(),
            p.b(n).unwrap(),
        )
        .unwrap();
        for name in [CRITICAL_PAIR, CRITICAL_CENTRALIZER] {
            if v.status(name) != Some(CheckStatus::Pass) {
                failures.push(format!(
                    "stage {n}: {name} {:?}: {}",
                    v.status(name),
                    v.checks[name].detail
                ));
            }
        }
    }
    let orders: Vec<String> = (0..p.len()).map(|n| p.a_mark(n).unwrap().order().to_string()).collect();
    Outcome::from_failures(
        failures,
        format!(
            "derived A orders [{}], B_0 order {}",
            orders.join(", "),
            d.report.b0_order
        ),
    )
}

/// Dense and chain mode agree on order and membership for every corpus
/// group, and the chain-mode order of A5 wr A5 comes out within ten
/// seconds.
pub fn mode_agreement() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(0);
    let mut probes = 0;
    for e in corpus() {
        let dense = &e.group;
        let chain = dense.to_mode(Mode::Chain).unwrap();
        if chain.order() != dense.order() {
            failures.push(format!(
                "{}: chain order {} vs dense {}",
                e.name,
                chain.order(),
                dense.order()
            ));
        }
        for x in dense.elements().unwrap() {
            if !chain.contains(x) {
                failures.push(format!("{}: chain mode rejects a member", e.name));
                break;
            }
        }
        let mut points: Vec<u32> = (0..dense.degree() as u32).collect();
        for _ in 0..500 {
            points.shuffle(&mut rng);
            let x = Permutation::from_images(points.clone()).unwrap();
            probes += 1;
            if dense.contains(&x) != chain.contains(&x) {
                failures.push(format!("{}: membership of {x} disagrees", e.name));
            }
        }
        let first = &dense.generators()[..dense.generators().len().min(1)];
        let sub = subgroup_generated(&chain, first).unwrap();
        let dsub = subgroup_generated(dense, first).unwrap();
        if sub.order() != dsub.order() {
            failures.push(format!("{}: cyclic subgroup orders disagree", e.name));
        }
    }
    let start = Instant::now();
    let a5 = alternating(5, Mode::Chain).unwrap();
    let w = wreath_product(&a5, &a5).unwrap();
    let order = w.order();
    let elapsed = start.elapsed();
    if order != 46_656_000_000 {
        failures.push(format!("A5 wr A5 order {order}"));
    }
    if elapsed > Duration::from_secs(10) {
        failures.push(format!("A5 wr A5 took {elapsed:?}"));
    }
    Outcome::from_failures(
        failures,
        format!(
            "{} groups, {probes} random probes agree; A5 wr A5 order {order} in {:.2}s",
            corpus().len(),
            elapsed.as_secs_f64()
        ),
    )
}
