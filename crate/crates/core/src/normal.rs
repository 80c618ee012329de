//! Normal subgroup lattices, chief factors and critical pairs.
//!
//! The lattice is built from the normal closures of conjugacy classes and
//! closed under joins; every normal subgroup is a join of such closures.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::dense::{lex_cmp, DenseGroup, Sub};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::par;
use crate::simple::SimpleTypeId;

// ---------------------------------------------------------------------------
// index-level machinery

/// All subgroups of `group` that are normal in `group`, in canonical order.
pub(crate) fn normal_lattice(ctx: &DenseGroup, group: &Sub) -> Vec<Sub> {
    let acting = &group.gens;
    let classes = ctx.classes(group, acting);
    let closures = par::map(&classes[1..], |class| {
        ctx.normal_closure(&ctx.generate(&class[..1]), acting)
    });
    let mut seen: HashSet<Sub> = HashSet::new();
    let mut atoms = Vec::new();
    for c in closures {
        if seen.insert(c.clone()) {
            atoms.push(c);
        }
    }
    let mut all: Vec<Sub> = vec![ctx.trivial()];
    seen.insert(ctx.trivial());
    all.extend(atoms.iter().cloned());
    let mut frontier = atoms.clone();
    while !frontier.is_empty() {
        let joins: Vec<Vec<Sub>> = par::map(&frontier, |n| {
            atoms.iter().filter(|a| !a.le(n)).map(|a| ctx.join(n, a)).collect()
        });
        let mut next = Vec::new();
        for j in joins.into_iter().flatten() {
            if seen.insert(j.clone()) {
                all.push(j.clone());
                next.push(j);
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| a.canonical_cmp(b));
    all
}

pub(crate) fn minimal_normals(lattice: &[Sub]) -> Vec<Sub> {
    lattice
        .iter()
        .filter(|n| !n.is_trivial())
        .filter(|n| !lattice.iter().any(|m| !m.is_trivial() && m.lt(n)))
        .cloned()
        .collect()
}

pub(crate) fn maximal_normals(lattice: &[Sub], group: &Sub) -> Vec<Sub> {
    lattice
        .iter()
        .filter(|n| n.lt(group))
        .filter(|n| !lattice.iter().any(|m| n.lt(m) && m.lt(group)))
        .cloned()
        .collect()
}

/// Join of all lattice members properly inside `a`.
pub(crate) fn join_below(ctx: &DenseGroup, lattice: &[Sub], a: &Sub) -> Sub {
    lattice
        .iter()
        .filter(|n| n.lt(a))
        .fold(ctx.trivial(), |acc, n| if n.le(&acc) { acc } else { ctx.join(&acc, n) })
}

/// A normal subgroup properly inside `a` and not inside `b`, if any.
pub(crate) fn criticality_witness<'a>(lattice: &'a [Sub], a: &Sub, b: &Sub) -> Option<&'a Sub> {
    lattice.iter().find(|n| n.lt(a) && !n.le(b))
}

pub(crate) fn critical_pairs_in(ctx: &DenseGroup, lattice: &[Sub]) -> Vec<(Sub, Sub)> {
    lattice
        .iter()
        .filter(|a| !a.is_trivial())
        .filter_map(|a| {
            let b = join_below(ctx, lattice, a);
            b.lt(a).then(|| (a.clone(), b))
        })
        .collect()
}

pub(crate) fn strictly_between<'a>(lattice: &'a [Sub], top: &Sub, bottom: &Sub) -> Option<&'a Sub> {
    lattice.iter().find(|n| bottom.lt(n) && n.lt(top))
}

/// Which chief series to build: `Ascending` climbs from 1 taking the
/// canonically first minimal cover; `Descending` walks down from the group
/// taking the canonically last maximal subgroup below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesChoice {
    Ascending,
    Descending,
}

pub(crate) fn chief_series_in(lattice: &[Sub], group: &Sub, choice: SeriesChoice) -> Vec<Sub> {
    match choice {
        SeriesChoice::Ascending => {
            let mut series = vec![lattice[0].clone()];
            while series.last().unwrap() != group {
                let cur = series.last().unwrap();
                // the lattice is sorted by order, so the first member strictly
                // above `cur` is a minimal cover
                let next = lattice.iter().find(|n| cur.lt(n)).expect("group is in the lattice");
                series.push(next.clone());
            }
            series
        }
        SeriesChoice::Descending => {
            let mut series = vec![group.clone()];
            while !series.last().unwrap().is_trivial() {
                let cur = series.last().unwrap();
                let next = lattice
                    .iter()
                    .rev()
                    .find(|n| n.lt(cur))
                    .expect("trivial group is in the lattice");
                series.push(next.clone());
            }
            series.reverse();
            series
        }
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..).take_while(|d| d * d <= n).find(|d| n % d == 0).unwrap_or(n)
}

/// `Some(k)` when `n = base^k` with `k ≥ 1`.
fn exact_log(n: u64, base: u64) -> Option<usize> {
    if base < 2 {
        return None;
    }
    let (mut m, mut k) = (n, 0);
    while m > 1 && m % base == 0 {
        m /= base;
        k += 1;
    }
    (m == 1 && k > 0).then_some(k)
}

/// Sorted `(order of xB, number of elements x ∈ top)` pairs, scaled down to
/// count cosets of `bottom`.
pub(crate) fn section_element_orders(ctx: &DenseGroup, top: &Sub, bottom: &Sub) -> Vec<(u64, u64)> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for r in ctx.right_transversal(top, bottom) {
        let mut y = r;
        let mut k = 1u64;
        while !bottom.contains(y) {
            y = ctx.mul(y, r);
            k += 1;
        }
        *counts.entry(k).or_default() += 1;
    }
    counts.into_iter().collect()
}

fn section_is_abelian(ctx: &DenseGroup, top: &Sub, bottom: &Sub) -> bool {
    top.gens
        .iter()
        .all(|&x| top.gens.iter().all(|&y| bottom.contains(ctx.comm(x, y))))
}

/// A subgroup `X` with `bottom < X ≤ top`, `X` normal in `top`, and minimal
/// with these properties.
fn minimal_normal_above(ctx: &DenseGroup, top: &Sub, bottom: &Sub) -> Sub {
    let acting = &top.gens;
    let closure = |x: u32| ctx.normal_closure(&ctx.extend(bottom, x), acting);
    let start = top.elements().find(|&x| !bottom.contains(x)).expect("bottom < top");
    let mut x_sub = closure(start);
    'shrink: loop {
        let mut done = ctx.empty_bits();
        for y in x_sub.element_vec() {
            if bottom.contains(y) || done.contains(y as usize) {
                continue;
            }
            let c = closure(y);
            if c.lt(&x_sub) {
                x_sub = c;
                continue 'shrink;
            }
            // conjugates of y give the same closure
            let mut stack = vec![y];
            done.insert(y as usize);
            while let Some(z) = stack.pop() {
                for &a in acting {
                    let w = ctx.conj(z, a);
                    if !done.contains(w as usize) {
                        done.insert(w as usize);
                        stack.push(w);
                    }
                }
            }
        }
        return x_sub;
    }
}

/// Type and multiplicity of a chief factor `top/bottom`. The caller
/// guarantees the factor is characteristically simple.
pub(crate) fn chief_factor_type(ctx: &DenseGroup, top: &Sub, bottom: &Sub) -> Result<(SimpleTypeId, usize)> {
    let index = (top.order / bottom.order) as u64;
    if index == 1 {
        return Err(Error::NotChiefFactor("the factor is trivial".into()));
    }
    if section_is_abelian(ctx, top, bottom) {
        let p = smallest_prime_factor(index);
        let k = exact_log(index, p).ok_or(Error::NotDirectPower)?;
        if !top.gens.iter().all(|&x| bottom.contains(ctx.pow(x, p))) {
            return Err(Error::NotDirectPower);
        }
        return Ok((SimpleTypeId::cyclic(p)?, k));
    }
    let x = minimal_normal_above(ctx, top, bottom);
    let s_order = (x.order / bottom.order) as u64;
    let k = exact_log(index, s_order).ok_or(Error::NotDirectPower)?;
    let id = SimpleTypeId::identify(s_order, || section_element_orders(ctx, &x, bottom));
    Ok((id, k))
}

// ---------------------------------------------------------------------------
// public API

/// A critical pair `(A, B)` of a group: every normal subgroup properly
/// inside `A` lies in `B`.
#[derive(Debug, Clone)]
pub struct CriticalPair {
    a: PermGroup,
    b: PermGroup,
    parent: PermGroup,
}

impl CriticalPair {
    /// Checks criticality before wrapping.
    pub fn new(parent: &PermGroup, a: &PermGroup, b: &PermGroup) -> Result<Self> {
        let check = is_critical_pair(parent, a, b)?;
        if !check.critical {
            return Err(Error::Precondition("(A, B) is not a critical pair".into()));
        }
        Ok(CriticalPair {
            a: a.clone(),
            b: b.clone(),
            parent: parent.clone(),
        })
    }

    pub fn a(&self) -> &PermGroup {
        &self.a
    }

    pub fn b(&self) -> &PermGroup {
        &self.b
    }

    pub fn parent(&self) -> &PermGroup {
        &self.parent
    }
}

#[derive(Debug, Clone)]
pub struct CriticalityCheck {
    pub critical: bool,
    /// On failure, a normal subgroup properly inside `A` and not inside `B`.
    pub witness: Option<PermGroup>,
}

#[derive(Debug, Clone)]
pub struct ChiefFactorDesc {
    pub top: PermGroup,
    pub bottom: PermGroup,
    pub simple_type: SimpleTypeId,
    pub multiplicity: usize,
}

/// Composition factors with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompositionFactors(pub BTreeMap<SimpleTypeId, usize>);

impl CompositionFactors {
    pub fn count(&self, t: &SimpleTypeId) -> usize {
        self.0.get(t).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn by_name(&self) -> BTreeMap<String, usize> {
        self.0.iter().map(|(t, &k)| (t.name().to_string(), k)).collect()
    }

    fn add(&mut self, t: SimpleTypeId, k: usize) {
        *self.0.entry(t).or_default() += k;
    }
}

fn lattice_of(g: &PermGroup) -> Result<(std::sync::Arc<DenseGroup>, Sub, Vec<Sub>)> {
    g.require_dense("normal subgroup lattice")?;
    let ctx = g.dense_ctx()?;
    let whole = ctx.whole();
    let lattice = normal_lattice(&ctx, &whole);
    Ok((ctx, whole, lattice))
}

fn wrap(g: &PermGroup, ctx: &DenseGroup, subs: &[Sub]) -> Vec<PermGroup> {
    subs.iter().map(|s| PermGroup::from_sub(g, ctx, s)).collect()
}

pub fn normal_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>> {
    let (ctx, _, lattice) = lattice_of(g)?;
    Ok(wrap(g, &ctx, &lattice))
}

pub fn minimal_normal_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>> {
    if g.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let (ctx, _, lattice) = lattice_of(g)?;
    Ok(wrap(g, &ctx, &minimal_normals(&lattice)))
}

pub fn maximal_normal_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>> {
    if g.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let (ctx, whole, lattice) = lattice_of(g)?;
    Ok(wrap(g, &ctx, &maximal_normals(&lattice, &whole)))
}

pub fn is_critical_pair(g: &PermGroup, a: &PermGroup, b: &PermGroup) -> Result<CriticalityCheck> {
    g.check_normal(a, "A")?;
    g.check_normal(b, "B")?;
    let (ctx, _, lattice) = lattice_of(g)?;
    let sa = g.sub_of(&ctx, a)?;
    let sb = g.sub_of(&ctx, b)?;
    if !sb.le(&sa) {
        return Err(Error::NotASubgroup("B is not contained in A".into()));
    }
    if sb == sa {
        return Err(Error::DegeneratePair);
    }
    let witness = criticality_witness(&lattice, &sa, &sb).map(|n| PermGroup::from_sub(g, &ctx, n));
    Ok(CriticalityCheck {
        critical: witness.is_none(),
        witness,
    })
}

pub fn critical_pairs(g: &PermGroup) -> Result<Vec<CriticalPair>> {
    let (ctx, _, lattice) = lattice_of(g)?;
    Ok(critical_pairs_in(&ctx, &lattice)
        .iter()
        .map(|(a, b)| CriticalPair {
            a: PermGroup::from_sub(g, &ctx, a),
            b: PermGroup::from_sub(g, &ctx, b),
            parent: g.clone(),
        })
        .collect())
}

/// Order, abelianness and element-order statistics of a section; the
/// isomorphism test used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionFingerprint {
    pub order: u64,
    pub abelian: bool,
    pub element_orders: Vec<(u64, u64)>,
}

pub(crate) fn section_fingerprint(ctx: &DenseGroup, top: &Sub, bottom: &Sub) -> SectionFingerprint {
    SectionFingerprint {
        order: (top.order / bottom.order) as u64,
        abelian: section_is_abelian(ctx, top, bottom),
        element_orders: section_element_orders(ctx, top, bottom),
    }
}

/// Outcome of the three checks on a refinement `(A, A ∩ L)` of `K/L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefinementCheck {
    pub critical: bool,
    pub product_is_k: bool,
    pub isomorphic_sections: bool,
    pub equal_centralizers: bool,
}

impl RefinementCheck {
    pub fn all(&self) -> bool {
        self.critical && self.product_is_k && self.isomorphic_sections && self.equal_centralizers
    }
}

/// Evaluates the refinement postconditions for `pair` against `K/L`.
pub fn check_refinement(g: &PermGroup, k: &PermGroup, l: &PermGroup, pair: &CriticalPair) -> Result<RefinementCheck> {
    let (ctx, whole, lattice) = lattice_of(g)?;
    let sk = g.sub_of(&ctx, k)?;
    let sl = g.sub_of(&ctx, l)?;
    let sa = g.sub_of(&ctx, pair.a())?;
    let sb = g.sub_of(&ctx, pair.b())?;
    Ok(refinement_check_in(&ctx, &whole, &lattice, &sk, &sl, &sa, &sb))
}

fn refinement_check_in(
    ctx: &DenseGroup,
    whole: &Sub,
    lattice: &[Sub],
    k: &Sub,
    l: &Sub,
    a: &Sub,
    b: &Sub,
) -> RefinementCheck {
    RefinementCheck {
        critical: b.lt(a) && criticality_witness(lattice, a, b).is_none(),
        product_is_k: a.le(k) && l.le(k) && ctx.product_size(a, l) == k.order,
        isomorphic_sections: section_fingerprint(ctx, k, l) == section_fingerprint(ctx, a, b),
        equal_centralizers: ctx.section_centralizer(whole, k, l) == ctx.section_centralizer(whole, a, b),
    }
}

/// Given a chief factor `K/L`, returns a critical pair `(A, A ∩ L)` with
/// `A L = K`: `A` is a minimal normal subgroup among those inside `K` and
/// not inside `L`, ties broken by the lexicographically least element list.
pub fn find_critical_refinement(g: &PermGroup, k: &PermGroup, l: &PermGroup) -> Result<CriticalPair> {
    g.check_normal(k, "K")?;
    g.check_normal(l, "L")?;
    let (ctx, whole, lattice) = lattice_of(g)?;
    let sk = g.sub_of(&ctx, k)?;
    let sl = g.sub_of(&ctx, l)?;
    if !sl.lt(&sk) {
        return Err(Error::NotChiefFactor("L is not properly contained in K".into()));
    }
    if let Some(n) = strictly_between(&lattice, &sk, &sl) {
        return Err(Error::NotChiefFactor(format!(
            "a normal subgroup of order {} lies strictly between L and K",
            n.order
        )));
    }
    let (a, b) = refine_in(&ctx, &lattice, &sk, &sl);
    let check = refinement_check_in(&ctx, &whole, &lattice, &sk, &sl, &a, &b);
    if !check.all() {
        return Err(Error::Internal(format!(
            "critical refinement postcondition failed: {check:?}"
        )));
    }
    Ok(CriticalPair {
        a: PermGroup::from_sub(g, &ctx, &a),
        b: PermGroup::from_sub(g, &ctx, &b),
        parent: g.clone(),
    })
}

pub(crate) fn refine_in(ctx: &DenseGroup, lattice: &[Sub], k: &Sub, l: &Sub) -> (Sub, Sub) {
    let candidates: Vec<&Sub> = lattice.iter().filter(|n| n.le(k) && !n.le(l)).collect();
    let a = candidates
        .iter()
        .filter(|n| !candidates.iter().any(|m| m.lt(n)))
        .min_by(|x, y| lex_cmp(x, y))
        .expect("K itself is a candidate");
    let b = ctx.intersection(a, l);
    ((*a).clone(), b)
}

pub fn chief_series(g: &PermGroup, choice: SeriesChoice) -> Result<Vec<PermGroup>> {
    let (ctx, whole, lattice) = lattice_of(g)?;
    Ok(wrap(g, &ctx, &chief_series_in(&lattice, &whole, choice)))
}

pub fn chief_factors(g: &PermGroup, choice: SeriesChoice) -> Result<Vec<ChiefFactorDesc>> {
    let (ctx, whole, lattice) = lattice_of(g)?;
    let series = chief_series_in(&lattice, &whole, choice);
    series
        .windows(2)
        .map(|w| {
            let (t, k) = chief_factor_type(&ctx, &w[1], &w[0])?;
            Ok(ChiefFactorDesc {
                top: PermGroup::from_sub(g, &ctx, &w[1]),
                bottom: PermGroup::from_sub(g, &ctx, &w[0]),
                simple_type: t,
                multiplicity: k,
            })
        })
        .collect()
}

pub(crate) fn composition_factors_in(
    ctx: &DenseGroup,
    lattice: &[Sub],
    group: &Sub,
    choice: SeriesChoice,
) -> Result<CompositionFactors> {
    let series = chief_series_in(lattice, group, choice);
    let mut out = CompositionFactors::default();
    for w in series.windows(2) {
        let (t, k) = chief_factor_type(ctx, &w[1], &w[0])?;
        out.add(t, k);
    }
    Ok(out)
}

/// Composition factors, read off an ascending chief series.
pub fn composition_factors(g: &PermGroup) -> Result<CompositionFactors> {
    composition_factors_along(g, SeriesChoice::Ascending)
}

pub fn composition_factors_along(g: &PermGroup, choice: SeriesChoice) -> Result<CompositionFactors> {
    let (ctx, whole, lattice) = lattice_of(g)?;
    composition_factors_in(&ctx, &lattice, &whole, choice)
}

/// Identifies a simple group.
pub fn identify_simple_type(s: &PermGroup) -> Result<SimpleTypeId> {
    let (ctx, whole, lattice) = lattice_of(s)?;
    if lattice.len() != 2 {
        return Err(Error::NotSimple);
    }
    let trivial = ctx.trivial();
    Ok(SimpleTypeId::identify(whole.order as u64, || {
        section_element_orders(&ctx, &whole, &trivial)
    }))
}

/// Writes a characteristically simple group as `S^k`.
pub fn decompose_char_simple(q: &PermGroup) -> Result<(SimpleTypeId, usize)> {
    let (ctx, whole, lattice) = lattice_of(q)?;
    if whole.is_trivial() {
        return Err(Error::NotDirectPower);
    }
    let trivial = ctx.trivial();
    if section_is_abelian(&ctx, &whole, &trivial) {
        return chief_factor_type(&ctx, &whole, &trivial);
    }
    let minimal = minimal_normals(&lattice);
    let s_order = minimal[0].order;
    let mut types = Vec::new();
    for m in &minimal {
        if m.order != s_order || normal_lattice(&ctx, m).len() != 2 {
            return Err(Error::NotDirectPower);
        }
        types.push(SimpleTypeId::identify(m.order as u64, || {
            section_element_orders(&ctx, m, &trivial)
        }));
    }
    let k = minimal.len();
    let join = minimal.iter().fold(trivial.clone(), |acc, m| ctx.join(&acc, m));
    let product_ok = (s_order as u128).checked_pow(k as u32) == Some(whole.order as u128);
    if join != whole || !product_ok || types.iter().any(|t| t != &types[0]) {
        return Err(Error::NotDirectPower);
    }
    Ok((types.swap_remove(0), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, subgroup_generated, Mode};
    use crate::library::{alternating, cyclic, klein_four, named_group, symmetric};
    use crate::perm::Permutation;

    fn p(n: usize, c: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, c).unwrap()
    }

    fn orders(gs: &[PermGroup]) -> Vec<u128> {
        gs.iter().map(|g| g.order()).collect()
    }

    fn s4() -> PermGroup {
        symmetric(4, Mode::Dense).unwrap()
    }

    fn v4_in_s4(s4: &PermGroup) -> PermGroup {
        subgroup_generated(s4, &[p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 2], &[1, 3]])]).unwrap()
    }

    fn a4_in_s4(s4: &PermGroup) -> PermGroup {
        subgroup_generated(s4, &[p(4, &[&[0, 1, 2]]), p(4, &[&[1, 2, 3]])]).unwrap()
    }

    #[test]
    fn lattices() {
        assert_eq!(orders(&normal_subgroups(&s4()).unwrap()), vec![1, 4, 12, 24]);
        assert_eq!(
            orders(&normal_subgroups(&alternating(5, Mode::Dense).unwrap()).unwrap()),
            vec![1, 60]
        );
        assert_eq!(
            orders(&normal_subgroups(&cyclic(6, Mode::Dense).unwrap()).unwrap()),
            vec![1, 2, 3, 6]
        );
        let chain = s4().to_mode(Mode::Chain).unwrap();
        assert!(matches!(normal_subgroups(&chain), Err(Error::NeedsDenseMode(_))));
    }

    #[test]
    fn minimal_and_maximal() {
        let g = s4();
        assert_eq!(orders(&minimal_normal_subgroups(&g).unwrap()), vec![4]);
        assert_eq!(orders(&maximal_normal_subgroups(&g).unwrap()), vec![12]);
        let v = klein_four(Mode::Dense).unwrap();
        assert_eq!(orders(&minimal_normal_subgroups(&v).unwrap()), vec![2, 2, 2]);
        assert_eq!(orders(&maximal_normal_subgroups(&v).unwrap()), vec![2, 2, 2]);
        let a5 = alternating(5, Mode::Dense).unwrap();
        assert_eq!(orders(&minimal_normal_subgroups(&a5).unwrap()), vec![60]);
        assert_eq!(orders(&maximal_normal_subgroups(&a5).unwrap()), vec![1]);
        let one = PermGroup::trivial(1, Mode::Dense);
        assert!(matches!(minimal_normal_subgroups(&one), Err(Error::TrivialGroup)));
    }

    #[test]
    fn criticality() {
        let g = s4();
        let one = PermGroup::trivial(4, Mode::Dense);
        assert!(is_critical_pair(&g, &v4_in_s4(&g), &one).unwrap().critical);
        let c6 = cyclic(6, Mode::Dense).unwrap();
        let gen = c6.generators()[0].clone();
        let c3 = subgroup_generated(&c6, &[gen.pow(2)]).unwrap();
        let check = is_critical_pair(&c6, &c6, &c3).unwrap();
        assert!(!check.critical);
        assert_eq!(check.witness.unwrap().order(), 2);
        let v = v4_in_s4(&g);
        assert!(matches!(is_critical_pair(&g, &v, &v), Err(Error::DegeneratePair)));
    }

    #[test]
    fn critical_pair_lists() {
        let pairs = critical_pairs(&s4()).unwrap();
        let shape: Vec<(u128, u128)> = pairs.iter().map(|c| (c.a().order(), c.b().order())).collect();
        assert_eq!(shape, vec![(4, 1), (12, 4), (24, 12)]);
        let v = klein_four(Mode::Dense).unwrap();
        let shape: Vec<(u128, u128)> = critical_pairs(&v)
            .unwrap()
            .iter()
            .map(|c| (c.a().order(), c.b().order()))
            .collect();
        assert_eq!(shape, vec![(2, 1), (2, 1), (2, 1)]);
        assert!(critical_pairs(&PermGroup::trivial(2, Mode::Dense)).unwrap().is_empty());
    }

    #[test]
    fn refinements() {
        let v = klein_four(Mode::Dense).unwrap();
        let c2a = subgroup_generated(&v, &[v.generators()[0].clone()]).unwrap();
        let pair = find_critical_refinement(&v, &v, &c2a).unwrap();
        assert_eq!(pair.a().order(), 2);
        assert!(!pair.a().is_subgroup_of(&c2a));
        assert!(pair.b().is_trivial());

        let g = s4();
        let pair = find_critical_refinement(&g, &a4_in_s4(&g), &v4_in_s4(&g)).unwrap();
        assert_eq!((pair.a().order(), pair.b().order()), (12, 4));
        let one = PermGroup::trivial(4, Mode::Dense);
        let pair = find_critical_refinement(&g, &v4_in_s4(&g), &one).unwrap();
        assert_eq!((pair.a().order(), pair.b().order()), (4, 1));
        assert!(matches!(
            find_critical_refinement(&g, &a4_in_s4(&g), &one),
            Err(Error::NotChiefFactor(_))
        ));
    }

    #[test]
    fn char_simple_decomposition() {
        let (t, k) = decompose_char_simple(&klein_four(Mode::Dense).unwrap()).unwrap();
        assert_eq!((t.name(), k), ("C2", 2));
        let a5 = alternating(5, Mode::Dense).unwrap();
        let (t, k) = decompose_char_simple(&a5).unwrap();
        assert_eq!((t.name(), k), ("A5", 1));
        let a5a5 = direct_product(&a5, &a5).unwrap();
        let (t, k) = decompose_char_simple(&a5a5).unwrap();
        assert_eq!((t.name(), k), ("A5", 2));
        assert!(matches!(decompose_char_simple(&s4()), Err(Error::NotDirectPower)));
        assert!(matches!(
            decompose_char_simple(&cyclic(4, Mode::Dense).unwrap()),
            Err(Error::NotDirectPower)
        ));
    }

    #[test]
    fn simple_types() {
        let a5 = alternating(5, Mode::Dense).unwrap();
        assert_eq!(identify_simple_type(&a5).unwrap().name(), "A5");
        assert_eq!(
            identify_simple_type(&cyclic(7, Mode::Dense).unwrap()).unwrap().name(),
            "C7"
        );
        let l27 = named_group("PSL(2,7)", Mode::Dense).unwrap();
        assert_eq!(identify_simple_type(&l27).unwrap().name(), "PSL(2,7)");
        assert!(matches!(identify_simple_type(&s4()), Err(Error::NotSimple)));
    }

    #[test]
    fn composition() {
        let f = composition_factors(&s4()).unwrap();
        assert_eq!(f.by_name(), BTreeMap::from([("C2".into(), 3), ("C3".into(), 1)]));
        let a5 = alternating(5, Mode::Dense).unwrap();
        assert_eq!(
            composition_factors(&a5).unwrap().by_name(),
            BTreeMap::from([("A5".into(), 1)])
        );
        let s3 = symmetric(3, Mode::Dense).unwrap();
        let w = crate::group::wreath_product(&s3, &s3).unwrap();
        let f = composition_factors(&w).unwrap();
        assert_eq!(f.by_name(), BTreeMap::from([("C2".into(), 4), ("C3".into(), 4)]));
        assert_eq!(f, composition_factors_along(&w, SeriesChoice::Descending).unwrap());
    }
}
