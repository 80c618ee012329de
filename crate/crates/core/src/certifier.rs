//! Stage-level checks on inverse-system prefixes, mark derivation, and the
//! aggregated system verdict.
//!
//! Check names:
//!
//! | name | condition at stage `n` |
//! |---|---|
//! | `wilson.i` | every normal `L ⊄ K_n` contains `K_n` |
//! | `wilson.ii` | no normal `L ⊄ K_n` is generated by the commuting conjugates of a proper subgroup |
//! | `critical.pair` | `(A_n, B_n)` is a critical pair of `G_n` |
//! | `critical.centralizer` | `P_n C(P_n) ≤ B_n` with `P_n = ρ_n(A_{n+1})` |
//! | `star` | a subgroup with commuting conjugates whose normal closure contains `A_n` is normal |
//! | `strengthened.dichotomy` | a subgroup normalised by `A_n` contains `P_n C(P_n)` or lies in every maximal normal subgroup of `A_n` |
//! | `strengthened.indecomposable` | no normal subgroup containing `A_n` is a central product of proper subgroups |

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::centprod::central_decomposition_in;
use crate::class_spec::SchurTable;
use crate::dense::{DenseGroup, Sub};
use crate::error::{Error, Result};
use crate::group::{centralizer_of_section, e_p_subgroup, is_prime, normal_closure, subgroup_generated, PermGroup};
use crate::hom::GroupHom;
use crate::normal::{
    chief_factor_type, chief_series_in, critical_pairs_in, criticality_witness, maximal_normals, minimal_normals,
    normal_lattice, CriticalPair, SeriesChoice,
};
use crate::par;
use crate::perm::Permutation;
use crate::subgroups::{subgroup_classes, SubgroupClasses};
use crate::system::SystemPrefix;

pub const WILSON_I: &str = "wilson.i";
pub const WILSON_II: &str = "wilson.ii";
pub const CRITICAL_PAIR: &str = "critical.pair";
pub const CRITICAL_CENTRALIZER: &str = "critical.centralizer";
pub const STAR: &str = "star";
pub const DICHOTOMY: &str = "strengthened.dichotomy";
pub const INDECOMPOSABLE: &str = "strengthened.indecomposable";

/// Groups above this order only get a cyclic-subgroup search.
pub const DEFAULT_SUBGROUP_BOUND: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    NotApplicable,
    Inconclusive,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessGroup {
    pub order: String,
    pub generators: Vec<Permutation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subgroups: BTreeMap<String, WitnessGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn pass(detail: impl Into<String>) -> Self {
        CheckResult {
            status: CheckStatus::Pass,
            detail: detail.into(),
            witness: None,
        }
    }

    fn fail(detail: impl Into<String>, witness: Witness) -> Self {
        CheckResult {
            status: CheckStatus::Fail,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    fn not_applicable(detail: impl Into<String>) -> Self {
        CheckResult {
            status: CheckStatus::NotApplicable,
            detail: detail.into(),
            witness: None,
        }
    }

    fn inconclusive(detail: impl Into<String>) -> Self {
        CheckResult {
            status: CheckStatus::Inconclusive,
            detail: detail.into(),
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageInfo {
    pub order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_order: Option<String>,
    /// `A_n/B_n` as `S^k`, when the pair is critical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_factor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageVerdict {
    pub stage: usize,
    pub checks: BTreeMap<String, CheckResult>,
    pub notes: Vec<String>,
    pub info: StageInfo,
}

impl StageVerdict {
    fn new(stage: usize) -> Self {
        StageVerdict {
            stage,
            checks: BTreeMap::new(),
            notes: Vec::new(),
            info: StageInfo::default(),
        }
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.get(name).map(|c| c.status)
    }

    fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub wilson: bool,
    pub star: bool,
    pub strengthened: bool,
    pub subgroup_bound: usize,
    /// Derive A-marks when the input has none.
    pub derive_marks: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            wilson: false,
            star: false,
            strengthened: false,
            subgroup_bound: DEFAULT_SUBGROUP_BOUND,
            derive_marks: true,
        }
    }
}

// ---------------------------------------------------------------------------
// per-stage dense context

struct Stage<'a> {
    group: &'a PermGroup,
    ctx: Arc<DenseGroup>,
    whole: Sub,
    lattice: OnceLock<Vec<Sub>>,
    classes: OnceLock<SubgroupClasses>,
    subgroup_bound: usize,
}

impl<'a> Stage<'a> {
    fn new(group: &'a PermGroup, subgroup_bound: usize) -> Result<Self> {
        group.require_dense("stage checks")?;
        let ctx = group.dense_ctx()?;
        let whole = ctx.whole();
        Ok(Stage {
            group,
            ctx,
            whole,
            lattice: OnceLock::new(),
            classes: OnceLock::new(),
            subgroup_bound,
        })
    }

    fn sub(&self, g: &PermGroup) -> Result<Sub> {
        self.group.sub_of(&self.ctx, g)
    }

    fn lattice(&self) -> &[Sub] {
        self.lattice.get_or_init(|| normal_lattice(&self.ctx, &self.whole))
    }

    fn exhaustive(&self) -> bool {
        self.whole.order <= self.subgroup_bound
    }

    fn classes(&self) -> &SubgroupClasses {
        self.classes.get_or_init(|| {
            let layers = if self.exhaustive() { None } else { Some(1) };
            subgroup_classes(&self.ctx, layers)
        })
    }

    fn search_note(&self) -> String {
        if self.exhaustive() {
            "subgroup search exhaustive".to_string()
        } else {
            format!(
                "subgroup search bounded: order {} exceeds the subgroup bound {}, only cyclic subgroups examined",
                self.whole.order, self.subgroup_bound
            )
        }
    }

    fn bounded_result(&self, what: &str) -> CheckResult {
        CheckResult::inconclusive(format!(
            "bounded search: no {what} among cyclic subgroups, larger subgroups not examined"
        ))
    }

    fn wg(&self, s: &Sub) -> WitnessGroup {
        WitnessGroup {
            order: s.order.to_string(),
            generators: self.ctx.perms(&s.gens),
        }
    }

    fn witness(&self, parts: &[(&str, &Sub)]) -> Witness {
        Witness {
            subgroups: parts.iter().map(|(k, s)| (k.to_string(), self.wg(s))).collect(),
            element: None,
        }
    }

    fn ncl(&self, s: &Sub) -> Sub {
        self.ctx.normal_closure(s, self.ctx.gens())
    }

    /// Non-normal class representatives whose distinct conjugates commute,
    /// with their normal closures.
    fn commuting_families(&self) -> Vec<(Sub, Sub)> {
        let classes = &self.classes().classes;
        let found = par::map(classes, |c| {
            (!c.is_normal() && c.conjugates_commute(&self.ctx)).then(|| (c.rep.clone(), self.ncl(&c.rep)))
        });
        found.into_iter().flatten().collect()
    }
}

fn order_string(g: &PermGroup) -> String {
    g.order().to_string()
}

// ---------------------------------------------------------------------------
// individual checks on a dense stage

fn wilson_i(st: &Stage, k: &Sub) -> CheckResult {
    match st.lattice().iter().find(|l| !l.le(k) && !k.le(l)) {
        Some(l) => CheckResult::fail(
            format!(
                "normal subgroup of order {} is not inside K and does not contain K",
                l.order
            ),
            st.witness(&[("L", l), ("K", k)]),
        ),
        None => CheckResult::pass("every normal subgroup not inside K contains K"),
    }
}

fn wilson_ii(st: &Stage, k: &Sub) -> CheckResult {
    if let Some((u, l)) = st.commuting_families().into_iter().find(|(_, l)| !l.le(k)) {
        return CheckResult::fail(
            format!(
                "normal subgroup of order {} is generated by the commuting conjugates of a proper subgroup of order {}",
                l.order, u.order
            ),
            st.witness(&[("U", &u), ("L", &l)]),
        );
    }
    if !st.classes().complete {
        return st.bounded_result("commuting-conjugate family");
    }
    CheckResult::pass("no normal subgroup outside K is a product of commuting conjugates of a proper subgroup")
}

fn critical_pair(st: &Stage, a: &Sub, b: &Sub) -> CheckResult {
    if !b.lt(a) {
        return CheckResult::fail(
            "degenerate pair: B is not properly contained in A",
            st.witness(&[("A", a), ("B", b)]),
        );
    }
    match criticality_witness(st.lattice(), a, b) {
        Some(n) => CheckResult::fail(
            format!(
                "normal subgroup of order {} lies properly inside A but not inside B",
                n.order
            ),
            st.witness(&[("N", n)]),
        ),
        None => CheckResult::pass("every normal subgroup properly inside A lies in B"),
    }
}

fn critical_centralizer(st: &Stage, p: &Sub, b: &Sub) -> CheckResult {
    let c = st.ctx.centralizer(&st.whole, &p.gens);
    match p.gens.iter().chain(&c.gens).find(|&&x| !b.contains(x)) {
        Some(&x) => {
            let mut w = st.witness(&[("P", p), ("C", &c)]);
            w.element = Some(st.ctx.element(x).clone());
            CheckResult::fail(
                format!("P C(P) has order {} and is not inside B", st.ctx.product_size(p, &c)),
                w,
            )
        }
        None => CheckResult::pass("P C(P) lies in B"),
    }
}

fn star(st: &Stage, a: &Sub) -> CheckResult {
    if let Some((u, l)) = st.commuting_families().into_iter().find(|(_, l)| a.le(l)) {
        return CheckResult::fail(
            format!(
                "non-normal subgroup of order {} has commuting conjugates generating a subgroup of order {} that contains A",
                u.order, l.order
            ),
            st.witness(&[("U", &u), ("closure", &l)]),
        );
    }
    if !st.classes().complete {
        return st.bounded_result("commuting-conjugate family");
    }
    CheckResult::pass("every subgroup with commuting conjugates generating a subgroup over A is normal")
}

fn dichotomy(st: &Stage, a: &Sub, p: &Sub) -> CheckResult {
    let ctx = &st.ctx;
    let c = ctx.centralizer(&st.whole, &p.gens);
    let pc = ctx.join(p, &c);
    let maxes = maximal_normals(&normal_lattice(ctx, a), a);
    let classes = &st.classes().classes;
    let hit = par::find_map_first(classes, |cls| {
        let t = &cls.rep;
        if !ctx.is_normalized_by(t, &a.gens) || pc.le(t) {
            return None;
        }
        maxes.iter().find(|m| !t.le(m)).map(|m| (t.clone(), m.clone()))
    });
    if let Some((t, m)) = hit {
        return CheckResult::fail(
            format!(
                "subgroup of order {} normalised by A neither contains P C(P) (order {}) nor lies in the maximal normal subgroup of A of order {}",
                t.order, pc.order, m.order
            ),
            st.witness(&[("T", &t), ("PC", &pc), ("M", &m)]),
        );
    }
    if !st.classes().complete {
        return st.bounded_result("violating subgroup");
    }
    CheckResult::pass("every subgroup normalised by A contains P C(P) or lies in every maximal normal subgroup of A")
}

fn indecomposable(st: &Stage, a: &Sub) -> CheckResult {
    let above: Vec<&Sub> = st.lattice().iter().filter(|n| a.le(n)).collect();
    let hit = par::find_map_first(&above, |n| {
        central_decomposition_in(&st.ctx, n).map(|parts| ((*n).clone(), parts))
    });
    match hit {
        Some((n, parts)) => CheckResult::fail(
            format!(
                "normal subgroup of order {} containing A is the central product of subgroups of orders {} and {}",
                n.order, parts[0].order, parts[1].order
            ),
            st.witness(&[("N", &n), ("H1", &parts[0]), ("H2", &parts[1])]),
        ),
        None => CheckResult::pass("no normal subgroup containing A is centrally decomposable"),
    }
}

// ---------------------------------------------------------------------------
// public per-stage operations

/// Both conditions of Wilson's criterion at stage `n`, with `K_n` the
/// kernel of `G_n → G_{n-1}`.
pub fn check_wilson_stage(n: usize, g: &PermGroup, k: &PermGroup, opts: &CheckOptions) -> Result<StageVerdict> {
    g.check_normal(k, "K")?;
    let st = Stage::new(g, opts.subgroup_bound)?;
    let sk = st.sub(k)?;
    let mut v = StageVerdict::new(n);
    v.checks.insert(WILSON_I.into(), wilson_i(&st, &sk));
    v.checks.insert(WILSON_II.into(), wilson_ii(&st, &sk));
    v.note(st.search_note());
    Ok(v)
}

/// Criticality of `(A_n, B_n)` and `P_n C(P_n) ≤ B_n` where
/// `P_n = ρ_n(A_{n+1})`.
pub fn check_critical_stage(
    n: usize,
    rho: &GroupHom,
    a_next: &PermGroup,
    a: &PermGroup,
    b: &PermGroup,
) -> Result<StageVerdict> {
    if !rho.is_surjective() {
        return Err(Error::NotSurjective);
    }
    rho.source().check_normal(a_next, "A_{n+1}")?;
    let g = rho.target();
    g.check_normal(a, "A")?;
    g.check_normal(b, "B")?;
    if b.order() == g.order() {
        return Err(Error::Precondition("B_n must be a proper subgroup".into()));
    }
    let p = rho.image(a_next)?;
    let st = Stage::new(g, usize::MAX)?;
    let (sa, sb, sp) = (st.sub(a)?, st.sub(b)?, st.sub(&p)?);
    let mut v = StageVerdict::new(n);
    v.checks.insert(CRITICAL_PAIR.into(), critical_pair(&st, &sa, &sb));
    v.checks
        .insert(CRITICAL_CENTRALIZER.into(), critical_centralizer(&st, &sp, &sb));
    Ok(v)
}

/// Condition (*) at one stage.
pub fn check_star_stage(n: usize, g: &PermGroup, a: &PermGroup, opts: &CheckOptions) -> Result<StageVerdict> {
    g.check_normal(a, "A")?;
    let st = Stage::new(g, opts.subgroup_bound)?;
    let sa = st.sub(a)?;
    let mut v = StageVerdict::new(n);
    v.checks.insert(STAR.into(), star(&st, &sa));
    v.note(st.search_note());
    Ok(v)
}

/// The dichotomy over subgroups normalised by `A_n` and central
/// indecomposability of normal subgroups containing `A_n`.
pub fn check_strengthened_stage(
    n: usize,
    g: &PermGroup,
    a: &PermGroup,
    b: &PermGroup,
    p: &PermGroup,
    opts: &CheckOptions,
) -> Result<StageVerdict> {
    g.check_normal(a, "A")?;
    g.check_normal(b, "B")?;
    g.check_normal(p, "P")?;
    let st = Stage::new(g, opts.subgroup_bound)?;
    let (sa, sp) = (st.sub(a)?, st.sub(p)?);
    let mut v = StageVerdict::new(n);
    v.checks.insert(DICHOTOMY.into(), dichotomy(&st, &sa, &sp));
    v.checks.insert(INDECOMPOSABLE.into(), indecomposable(&st, &sa));
    v.note(st.search_note());
    Ok(v)
}

pub(crate) fn is_nilpotent_in(ctx: &DenseGroup, k: &Sub) -> bool {
    let mut term = k.clone();
    loop {
        let next = ctx.commutator(&term, k);
        if next.is_trivial() {
            return true;
        }
        if next == term {
            return false;
        }
        term = next;
    }
}

/// Self-test of the centralizer property of critical pairs: a normal `K`
/// that does not centralise `A/B` contains `A` and is not nilpotent.
/// `false` means an engine defect.
pub fn verify_critical_centralizer(g: &PermGroup, pair: &CriticalPair, k: &PermGroup) -> Result<bool> {
    g.check_normal(k, "K")?;
    if pair.parent() != g {
        return Err(Error::Precondition("critical pair belongs to another group".into()));
    }
    let ctx = g.dense_ctx()?;
    let whole = ctx.whole();
    let (sa, sb, sk) = (g.sub_of(&ctx, pair.a())?, g.sub_of(&ctx, pair.b())?, g.sub_of(&ctx, k)?);
    Ok(critical_centralizer_holds(&ctx, &whole, &sa, &sb, &sk))
}

pub(crate) fn critical_centralizer_holds(ctx: &DenseGroup, whole: &Sub, a: &Sub, b: &Sub, k: &Sub) -> bool {
    let c = ctx.section_centralizer(whole, a, b);
    k.le(&c) || (a.le(k) && !is_nilpotent_in(ctx, k))
}

/// Outcome of the `E^p(G) < G` check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpVerdict {
    pub prime: u64,
    /// `Pass`: hypotheses hold and `E^p(G) < G`. `NotApplicable`: some
    /// hypothesis fails. `Inconclusive`: a nonabelian composition factor
    /// is outside the Schur table. `Fail`: hypotheses hold but
    /// `E^p(G) = G`, an engine defect.
    pub status: CheckStatus,
    pub has_factor_of_exponent_p: bool,
    pub all_such_central: bool,
    /// `None` when the table does not cover some factor.
    pub multipliers_coprime: Option<bool>,
    pub e_p_order: String,
    pub detail: String,
}

/// Evaluates the hypotheses under which `E^p(G)` is proper (a chief
/// factor of exponent `p`, all such central, `p` coprime to the Schur
/// multipliers of the nonabelian composition factors) and checks the
/// conclusion when they hold.
pub fn check_ep_proper(g: &PermGroup, p: u64, table: &SchurTable) -> Result<EpVerdict> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    g.require_dense("E^p check")?;
    let ctx = g.dense_ctx()?;
    let whole = ctx.whole();
    let lattice = normal_lattice(&ctx, &whole);
    let series = chief_series_in(&lattice, &whole, SeriesChoice::Ascending);
    let mut has_factor = false;
    let mut all_central = true;
    let mut coprime = Some(true);
    let mut missing = Vec::new();
    for w in series.windows(2) {
        let (t, _) = chief_factor_type(&ctx, &w[1], &w[0])?;
        if t.prime() == Some(p) {
            has_factor = true;
            let central = w[1]
                .gens
                .iter()
                .all(|&x| ctx.gens().iter().all(|&y| w[0].contains(ctx.comm(x, y))));
            all_central &= central;
        } else if !t.is_abelian() {
            match table.multiplier(&t) {
                Some(m) if m % p == 0 => coprime = coprime.map(|_| false),
                Some(_) => {}
                None => {
                    missing.push(t.name().to_string());
                    if coprime == Some(true) {
                        coprime = None;
                    }
                }
            }
        }
    }
    let e = e_p_subgroup(g, p)?;
    let proper = e.order() < g.order();
    let (status, detail) = if !has_factor {
        (CheckStatus::NotApplicable, format!("no chief factor of exponent {p}"))
    } else if !all_central {
        (
            CheckStatus::NotApplicable,
            format!("a chief factor of exponent {p} is not central"),
        )
    } else if coprime == Some(false) {
        (
            CheckStatus::NotApplicable,
            format!("{p} divides the Schur multiplier of a nonabelian composition factor"),
        )
    } else if coprime.is_none() {
        (
            CheckStatus::Inconclusive,
            format!("table-incomplete: no multiplier for {}", missing.join(", ")),
        )
    } else if proper {
        (
            CheckStatus::Pass,
            format!("hypotheses hold and E^{p}(G) has index {}", g.order() / e.order()),
        )
    } else {
        (CheckStatus::Fail, format!("hypotheses hold but E^{p}(G) = G"))
    };
    Ok(EpVerdict {
        prime: p,
        status,
        has_factor_of_exponent_p: has_factor,
        all_such_central: all_central,
        multipliers_coprime: coprime,
        e_p_order: e.order().to_string(),
        detail,
    })
}

// ---------------------------------------------------------------------------
// mark derivation

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationLevel {
    pub stage: usize,
    pub a_order: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub levels: Vec<DerivationLevel>,
    pub b0_order: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Derivation {
    pub prefix: SystemPrefix,
    pub report: DerivationReport,
}

/// Chooses A-marks for an unmarked prefix. For `n ≥ 0` a minimal normal
/// subgroup `M_n` of `G_n` inside `K_n` (with `K_0 = G_0`) that `K_n` does
/// not centralise is pulled back: `A_{n+1} = ρ_n⁻¹(M_n)`. Stage 0 takes a
/// critical pair `(A_0, B_0)` of `G_0`, preferring one with
/// `P_0 C(P_0) ≤ B_0`.
pub fn derive_critical_marks(prefix: &SystemPrefix) -> Result<Derivation> {
    let len = prefix.len();
    let mut marks: Vec<Option<PermGroup>> = vec![None; len];
    let mut levels = Vec::new();
    let mut notes = Vec::new();
    let mut m0: Option<Sub> = None;
    // a single stage has no kernel to constrain; otherwise every level
    // including the last must satisfy the hypothesis
    let levels_checked = if len == 1 { 0 } else { len };
    for n in 0..levels_checked {
        let g = prefix.group(n);
        let st = Stage::new(g, usize::MAX)?;
        let k = match n {
            0 => st.whole.clone(),
            _ => st.sub(prefix.b(n).expect("kernel of a later stage"))?,
        };
        let m = minimal_normals(st.lattice())
            .into_iter()
            .find(|m| m.le(&k) && !st.ctx.commute(m, &k))
            .ok_or_else(|| Error::Derivation {
                level: n,
                reason: if n == 0 {
                    "G_0 has no non-central minimal normal subgroup".into()
                } else {
                    format!("every minimal normal subgroup of G_{n} inside K_{n} is central in K_{n}")
                },
            })?;
        if n + 1 == len {
            notes.push(format!(
                "G_{n} has a minimal normal subgroup of order {} inside K_{n} not centralised by K_{n}; its preimage would be A_{}",
                m.order,
                n + 1
            ));
            break;
        }
        let mg = PermGroup::from_sub(g, &st.ctx, &m);
        let a_next = prefix.rho(n).expect("map to stage n").preimage(&mg)?;
        levels.push(DerivationLevel {
            stage: n + 1,
            a_order: order_string(&a_next),
            detail: format!(
                "preimage of a minimal normal subgroup of G_{n} of order {} not centralised by K_{n}",
                m.order
            ),
        });
        marks[n + 1] = Some(a_next);
        if n == 0 {
            m0 = Some(m);
        }
    }
    let g0 = prefix.group(0);
    let st = Stage::new(g0, usize::MAX)?;
    let pairs = critical_pairs_in(&st.ctx, st.lattice());
    if pairs.is_empty() {
        return Err(Error::Derivation {
            level: 0,
            reason: "G_0 has no critical pair".into(),
        });
    }
    let good = m0.as_ref().and_then(|p| {
        let c = st.ctx.centralizer(&st.whole, &p.gens);
        pairs.iter().find(|(_, b)| p.le(b) && c.le(b))
    });
    let (a0, b0) = match good {
        Some(pair) => pair.clone(),
        None => {
            if m0.is_some() {
                notes
                    .push("no critical pair of G_0 has P_0 C(P_0) inside B_0; the first critical pair was used".into());
            }
            pairs[0].clone()
        }
    };
    let a0g = PermGroup::from_sub(g0, &st.ctx, &a0);
    let b0g = PermGroup::from_sub(g0, &st.ctx, &b0);
    levels.insert(
        0,
        DerivationLevel {
            stage: 0,
            a_order: a0.order.to_string(),
            detail: format!("critical pair of G_0 with B_0 of order {}", b0.order),
        },
    );
    marks[0] = Some(a0g);
    let derived = prefix.with_marks(marks, Some(b0g))?;
    Ok(Derivation {
        prefix: derived,
        report: DerivationReport {
            levels,
            b0_order: b0.order.to_string(),
            notes,
        },
    })
}

// ---------------------------------------------------------------------------
// whole-prefix certification

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub checks: Vec<String>,
    pub checked_stages: Vec<usize>,
    pub failing_stages: Vec<usize>,
    pub inconclusive_stages: Vec<usize>,
    pub holds_at_all_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemVerdict {
    pub overall: CheckStatus,
    pub families: BTreeMap<String, FamilySummary>,
    /// Stages at which condition (*) was checked and holds.
    pub star_stages: Vec<usize>,
    pub limit_claims: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationOutcome {
    pub attempted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<DerivationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Certification {
    pub stages: Vec<StageVerdict>,
    pub derivation: Option<DerivationOutcome>,
    pub summary: SystemVerdict,
    /// The prefix the checks ran on (with derived marks, if any).
    pub checked_prefix: SystemPrefix,
}

fn stage_verdict(prefix: &SystemPrefix, n: usize, opts: &CheckOptions) -> Result<StageVerdict> {
    let g = prefix.group(n);
    let mut v = StageVerdict::new(n);
    let a = prefix.a_mark(n);
    let b = prefix.b(n);
    let p = prefix.p(n)?;
    v.info = StageInfo {
        order: order_string(g),
        a_order: a.map(order_string),
        b_order: b.map(order_string),
        p_order: p.as_ref().map(order_string),
        critical_factor: None,
    };
    let st = match Stage::new(g, opts.subgroup_bound) {
        Ok(st) => st,
        Err(Error::NeedsDenseMode(_)) => {
            let mut names = vec![CRITICAL_PAIR, CRITICAL_CENTRALIZER];
            if opts.wilson {
                names.extend([WILSON_I, WILSON_II]);
            }
            if opts.star {
                names.push(STAR);
            }
            if opts.strengthened {
                names.extend([DICHOTOMY, INDECOMPOSABLE]);
            }
            for name in names {
                v.checks
                    .insert(name.into(), CheckResult::inconclusive("requires a dense-mode stage"));
            }
            v.note("chain-mode stage: only orders and maps were verified");
            return Ok(v);
        }
        Err(e) => return Err(e),
    };
    let sa = a.map(|x| st.sub(x)).transpose()?;
    let sb = b.map(|x| st.sub(x)).transpose()?;
    let sp = p.as_ref().map(|x| st.sub(x)).transpose()?;
    let mut searched = false;

    if opts.wilson {
        match &sb {
            Some(k) if n > 0 => {
                v.checks.insert(WILSON_I.into(), wilson_i(&st, k));
                v.checks.insert(WILSON_II.into(), wilson_ii(&st, k));
                searched = true;
            }
            _ => {
                let na = CheckResult::not_applicable("stage 0 has no kernel K_0");
                v.checks.insert(WILSON_I.into(), na.clone());
                v.checks.insert(WILSON_II.into(), na);
            }
        }
    }

    let pair = match (&sa, &sb) {
        (Some(a), Some(b)) => critical_pair(&st, a, b),
        (None, _) => CheckResult::not_applicable("no A-mark at this stage"),
        (_, None) => CheckResult::not_applicable("B_0 was not supplied"),
    };
    if pair.status == CheckStatus::Pass {
        let (a, b) = (sa.as_ref().unwrap(), sb.as_ref().unwrap());
        if let Ok((t, k)) = chief_factor_type(&st.ctx, a, b) {
            v.info.critical_factor = Some(if k == 1 {
                t.name().to_string()
            } else {
                format!("{}^{k}", t.name())
            });
        }
    }
    // the critical checks belong to consecutive pairs; the last stage has
    // no successor, so its pair is reported for information only
    let pair = if n + 1 == prefix.len() && pair.status != CheckStatus::NotApplicable {
        let outcome = if pair.status == CheckStatus::Pass {
            "critical"
        } else {
            "not critical"
        };
        CheckResult::not_applicable(format!(
            "last stage, no successor; the marked pair is {outcome}: {}",
            pair.detail
        ))
    } else {
        pair
    };
    v.checks.insert(CRITICAL_PAIR.into(), pair);
    let centralizer = match (&sp, &sb) {
        (Some(p), Some(b)) => critical_centralizer(&st, p, b),
        (None, _) if n + 1 == prefix.len() => CheckResult::not_applicable("last stage: no P_n"),
        (None, _) => CheckResult::not_applicable("next stage has no A-mark"),
        (_, None) => CheckResult::not_applicable("B_0 was not supplied"),
    };
    v.checks.insert(CRITICAL_CENTRALIZER.into(), centralizer);

    if opts.star {
        let r = match &sa {
            Some(a) => {
                searched = true;
                star(&st, a)
            }
            None => CheckResult::not_applicable("no A-mark at this stage"),
        };
        v.checks.insert(STAR.into(), r);
    }
    if opts.strengthened {
        let r = match (&sa, &sp) {
            (Some(a), Some(p)) => {
                searched = true;
                dichotomy(&st, a, p)
            }
            (None, _) => CheckResult::not_applicable("no A-mark at this stage"),
            (_, None) => CheckResult::not_applicable("no P_n at this stage"),
        };
        v.checks.insert(DICHOTOMY.into(), r);
        let r = match &sa {
            Some(a) => indecomposable(&st, a),
            None => CheckResult::not_applicable("no A-mark at this stage"),
        };
        v.checks.insert(INDECOMPOSABLE.into(), r);
    }
    if searched {
        v.note(st.search_note());
    }
    Ok(v)
}

const FAMILIES: &[(&str, &[&str])] = &[
    ("critical", &[CRITICAL_PAIR, CRITICAL_CENTRALIZER]),
    ("star", &[STAR]),
    ("strengthened", &[DICHOTOMY, INDECOMPOSABLE]),
    ("wilson", &[WILSON_I, WILSON_II]),
];

fn stage_list(stages: &[usize]) -> String {
    stages.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

/// Aggregates stage verdicts. A pure function of its inputs.
pub fn summarize(stages: &[StageVerdict], derivation_failed: bool) -> SystemVerdict {
    let mut families = BTreeMap::new();
    for (family, names) in FAMILIES {
        let mut checked = BTreeSet::new();
        let mut failing = BTreeSet::new();
        let mut inconclusive = BTreeSet::new();
        let mut present = false;
        for v in stages {
            for name in *names {
                let Some(status) = v.status(name) else { continue };
                present = true;
                match status {
                    CheckStatus::NotApplicable => {}
                    CheckStatus::Pass => {
                        checked.insert(v.stage);
                    }
                    CheckStatus::Fail => {
                        checked.insert(v.stage);
                        failing.insert(v.stage);
                    }
                    CheckStatus::Inconclusive => {
                        checked.insert(v.stage);
                        inconclusive.insert(v.stage);
                    }
                }
            }
        }
        if !present {
            continue;
        }
        let inconclusive: Vec<usize> = inconclusive.difference(&failing).copied().collect();
        families.insert(
            family.to_string(),
            FamilySummary {
                checks: names.iter().map(|s| s.to_string()).collect(),
                holds_at_all_checked: !checked.is_empty() && failing.is_empty() && inconclusive.is_empty(),
                checked_stages: checked.into_iter().collect(),
                failing_stages: failing.into_iter().collect(),
                inconclusive_stages: inconclusive,
            },
        );
    }
    let star_stages: Vec<usize> = stages
        .iter()
        .filter(|v| v.status(STAR) == Some(CheckStatus::Pass))
        .map(|v| v.stage)
        .collect();
    let worst = stages
        .iter()
        .flat_map(|v| v.checks.values().map(|c| c.status))
        .filter(|s| *s != CheckStatus::NotApplicable)
        .max();
    let overall = if derivation_failed {
        CheckStatus::Fail
    } else {
        match worst {
            Some(CheckStatus::Fail) => CheckStatus::Fail,
            Some(CheckStatus::Inconclusive) => CheckStatus::Inconclusive,
            Some(_) => CheckStatus::Pass,
            None => CheckStatus::NotApplicable,
        }
    };
    let limit_claims = limit_claims(&families, &star_stages);
    SystemVerdict {
        overall,
        families,
        star_stages,
        limit_claims,
    }
}

fn limit_claims(families: &BTreeMap<String, FamilySummary>, star_stages: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let describe = |f: &FamilySummary, what: &str, conclusion: &str| -> String {
        if f.checked_stages.is_empty() {
            format!("The {what} could not be evaluated at any stage.")
        } else if f.holds_at_all_checked {
            format!(
                "All checked stages ({}) satisfy the {what}; {conclusion}",
                stage_list(&f.checked_stages)
            )
        } else if !f.failing_stages.is_empty() && f.failing_stages == f.checked_stages {
            format!(
                "The {what} fail at every checked stage ({}).",
                stage_list(&f.failing_stages)
            )
        } else {
            let mut s = format!("The {what} hold at the checked stages except");
            if !f.failing_stages.is_empty() {
                s.push_str(&format!(" failing stages {{{}}}", stage_list(&f.failing_stages)));
            }
            if !f.inconclusive_stages.is_empty() {
                if !f.failing_stages.is_empty() {
                    s.push_str(" and");
                }
                s.push_str(&format!(
                    " inconclusive stages {{{}}}",
                    stage_list(&f.inconclusive_stages)
                ));
            }
            s.push_str(". A finite exception set is allowed, so the prefix alone does not decide the limit.");
            s
        }
    };
    if let Some(f) = families.get("critical") {
        out.push(describe(
            f,
            "critical-pair and centralizer hypotheses",
            "any inverse limit whose further stages continue to satisfy them is just infinite and not virtually pronilpotent.",
        ));
    }
    if families.contains_key("star") {
        let critical_ok = families.get("critical").is_some_and(|f| f.holds_at_all_checked);
        out.push(if star_stages.is_empty() {
            "Condition (*) holds at no checked stage.".to_string()
        } else if critical_ok {
            format!(
                "Condition (*) holds at stages {}; if it continues to hold at infinitely many further stages, with the critical-pair hypotheses, the limit is hereditarily just infinite.",
                stage_list(star_stages)
            )
        } else {
            format!(
                "Condition (*) holds at stages {}; it is only useful together with the critical-pair hypotheses.",
                stage_list(star_stages)
            )
        });
    }
    if let Some(f) = families.get("wilson") {
        out.push(describe(
            f,
            "Wilson conditions (i) and (ii)",
            "a limit whose further stages continue to satisfy them is just infinite and either virtually abelian or hereditarily just infinite.",
        ));
    }
    if let Some(f) = families.get("strengthened") {
        out.push(describe(
            f,
            "strengthened conditions (dichotomy and central indecomposability)",
            "these are the extra properties an inverse system for a hereditarily just infinite limit can be arranged to have.",
        ));
    }
    out
}

/// Fixed caveats attached to every certificate.
pub fn completeness_notes(opts: &CheckOptions) -> Vec<String> {
    vec![
        "Limit-level statements are conditional: a finite prefix cannot show that a condition holds for all but finitely many, or infinitely many, stages.".into(),
        "Criticality is checked in each G_n; whether (A_n, B_n) is the image of a critical pair of the limit is not decidable from a prefix.".into(),
        "Closed subgroups and continuous maps of the limit are modelled by all subgroups and maps of the finite stages.".into(),
        format!(
            "Subgroup searches are exhaustive for stages of order at most {}; larger stages get a cyclic-subgroup search and never a clean pass.",
            opts.subgroup_bound
        ),
        format!(
            "Simple composition factors are named against a table of simple groups of order at most {}.",
            SchurTable::builtin().order_bound()
        ),
    ]
}

/// Runs the requested checks on every stage.
pub fn certify_system(prefix: &SystemPrefix, opts: &CheckOptions) -> Result<Certification> {
    if prefix.is_empty() {
        return Err(Error::Malformed("empty prefix".into()));
    }
    let mut derivation = None;
    let mut working = prefix.clone();
    if !prefix.has_marks() && opts.derive_marks && prefix.stages().iter().all(|s| s.a_mark().is_none()) {
        derivation = Some(match derive_critical_marks(prefix) {
            Ok(d) => {
                working = d.prefix;
                DerivationOutcome {
                    attempted: true,
                    report: Some(d.report),
                    error: None,
                }
            }
            Err(e @ Error::Derivation { .. }) | Err(e @ Error::NeedsDenseMode(_)) => DerivationOutcome {
                attempted: true,
                report: None,
                error: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        });
    }
    let verdicts = par::map_range(working.len(), |n| stage_verdict(&working, n, opts));
    let stages = verdicts.into_iter().collect::<Result<Vec<_>>>()?;
    for v in &stages {
        for (name, check) in &v.checks {
            if check.status == CheckStatus::Fail && !verify_witness(&working, v.stage, name, check)? {
                return Err(Error::Internal(format!(
                    "stage {} check {name}: witness does not reproduce the failure",
                    v.stage
                )));
            }
        }
    }
    let derivation_failed = derivation.as_ref().is_some_and(|d| d.error.is_some());
    let summary = summarize(&stages, derivation_failed);
    Ok(Certification {
        stages,
        derivation,
        summary,
        checked_prefix: working,
    })
}

// ---------------------------------------------------------------------------
// witness re-verification, through the group-level API only

fn witness_group(g: &PermGroup, w: &Witness, key: &str) -> Result<PermGroup> {
    let wg = w
        .subgroups
        .get(key)
        .ok_or_else(|| Error::Malformed(format!("witness lacks subgroup {key}")))?;
    let h = subgroup_generated(g, &wg.generators)?;
    if h.order().to_string() != wg.order {
        return Err(Error::Malformed(format!("witness subgroup {key} has the wrong order")));
    }
    Ok(h)
}

fn le(a: &PermGroup, b: &PermGroup) -> bool {
    a.is_subgroup_of(b)
}

fn lt(a: &PermGroup, b: &PermGroup) -> bool {
    a.is_subgroup_of(b) && a.order() < b.order()
}

/// Distinct conjugates of `u` pairwise commute elementwise.
fn conjugates_commute(g: &PermGroup, u: &PermGroup) -> Result<bool> {
    let mut conjugates: Vec<PermGroup> = Vec::new();
    for x in g.elements()? {
        let c = subgroup_generated(g, &u.generators().iter().map(|y| y.conjugate_by(x)).collect::<Vec<_>>())?;
        if !conjugates.iter().any(|d| d == &c) {
            conjugates.push(c);
        }
    }
    Ok(conjugates.iter().enumerate().all(|(i, c)| {
        conjugates[i + 1..].iter().all(|d| {
            c.generators()
                .iter()
                .all(|x| d.generators().iter().all(|y| x.compose(y) == y.compose(x)))
        })
    }))
}

fn generated_by(g: &PermGroup, parts: &[&PermGroup]) -> Result<PermGroup> {
    let gens: Vec<Permutation> = parts.iter().flat_map(|p| p.generators().to_vec()).collect();
    subgroup_generated(g, &gens)
}

/// Re-evaluates the predicate behind a failed check on its witness.
/// Returns `true` when the witness reproduces the failure.
pub fn verify_witness(prefix: &SystemPrefix, n: usize, name: &str, check: &CheckResult) -> Result<bool> {
    let Some(w) = &check.witness else {
        return Ok(false);
    };
    let g = prefix.group(n);
    let a = prefix.a_mark(n);
    let b = prefix.b(n);
    let need = |x: Option<&PermGroup>, what: &str| -> Result<PermGroup> {
        x.cloned()
            .ok_or_else(|| Error::Malformed(format!("stage {n} has no {what}")))
    };
    Ok(match name {
        WILSON_I => {
            let (k, l) = (need(b, "kernel")?, witness_group(g, w, "L")?);
            l.is_normal_in(g) && !le(&l, &k) && !le(&k, &l)
        }
        WILSON_II => {
            let (k, u, l) = (need(b, "kernel")?, witness_group(g, w, "U")?, witness_group(g, w, "L")?);
            lt(&u, &l) && !u.is_normal_in(g) && normal_closure(g, &u)? == l && !le(&l, &k) && conjugates_commute(g, &u)?
        }
        CRITICAL_PAIR => {
            let (a, b) = (need(a, "A-mark")?, need(b, "B")?);
            if w.subgroups.contains_key("N") {
                let nn = witness_group(g, w, "N")?;
                nn.is_normal_in(g) && lt(&nn, &a) && !le(&nn, &b)
            } else {
                !lt(&b, &a)
            }
        }
        CRITICAL_CENTRALIZER => {
            let b = need(b, "B")?;
            let p = prefix
                .p(n)?
                .ok_or_else(|| Error::Malformed(format!("stage {n} has no P")))?;
            let x = w
                .element
                .as_ref()
                .ok_or_else(|| Error::Malformed("witness lacks an element".into()))?;
            let centralizes = p.generators().iter().all(|y| x.compose(y) == y.compose(x));
            g.contains(x) && (p.contains(x) || centralizes) && !b.contains(x)
        }
        STAR => {
            let (a, u) = (need(a, "A-mark")?, witness_group(g, w, "U")?);
            !u.is_normal_in(g) && conjugates_commute(g, &u)? && le(&a, &normal_closure(g, &u)?)
        }
        DICHOTOMY => {
            let a = need(a, "A-mark")?;
            let (t, m) = (witness_group(g, w, "T")?, witness_group(g, w, "M")?);
            let p = prefix
                .p(n)?
                .ok_or_else(|| Error::Malformed(format!("stage {n} has no P")))?;
            let one = PermGroup::trivial(g.degree(), g.mode());
            let c = centralizer_of_section(g, &p, &one)?;
            let pc = generated_by(g, &[&p, &c])?;
            let normalised = t
                .generators()
                .iter()
                .all(|y| a.generators().iter().all(|x| t.contains(&y.conjugate_by(x))));
            let a_own = PermGroup::new(a.degree(), a.generators().to_vec(), a.mode())?;
            let m_own = PermGroup::new(m.degree(), m.generators().to_vec(), m.mode())?;
            let m_maximal = crate::normal::maximal_normal_subgroups(&a_own)?
                .iter()
                .any(|x| x == &m_own);
            normalised && !le(&pc, &t) && m_maximal && !le(&t, &m)
        }
        INDECOMPOSABLE => {
            let a = need(a, "A-mark")?;
            let nn = witness_group(g, w, "N")?;
            let (h1, h2) = (witness_group(g, w, "H1")?, witness_group(g, w, "H2")?);
            let commute = h1
                .generators()
                .iter()
                .all(|x| h2.generators().iter().all(|y| x.compose(y) == y.compose(x)));
            nn.is_normal_in(g)
                && le(&a, &nn)
                && lt(&h1, &nn)
                && lt(&h2, &nn)
                && commute
                && generated_by(g, &[&h1, &h2])? == nn
        }
        _ => false,
    })
}
