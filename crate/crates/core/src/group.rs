//! Permutation groups given by generators, in one of two execution modes.
//!
//! *Dense* groups are fully enumerated on construction (subject to a size
//! bound) and support every operation, including the exhaustive searches
//! used by the normal-structure and certifier modules. *Chain* groups keep
//! only a stabilizer chain: order, membership, closures and products work,
//! anything needing enumeration returns [`Error::NeedsDenseMode`].

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::chain::StabChain;
use crate::dense::{DenseGroup, Sub};
use crate::error::{Error, Result};
use crate::hom::GroupHom;
use crate::perm::Permutation;

pub const DEFAULT_DENSE_BOUND: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dense,
    Chain,
}

#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    mode: Mode,
    dense_bound: usize,
    order: OnceLock<u128>,
    dense: OnceLock<Arc<DenseGroup>>,
    chain: OnceLock<Arc<StabChain>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("mode", &self.mode)
            .field("gens", &self.gens)
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.order() == other.order() && self.gens.iter().all(|g| other.contains(g))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Builds `⟨gens⟩` on `degree` points with the default dense bound.
    pub fn new(degree: usize, gens: Vec<Permutation>, mode: Mode) -> Result<Self> {
        Self::with_dense_bound(degree, gens, mode, DEFAULT_DENSE_BOUND)
    }

    pub fn with_dense_bound(degree: usize, gens: Vec<Permutation>, mode: Mode, dense_bound: usize) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let group = PermGroup {
            degree,
            gens,
            mode,
            dense_bound,
            order: OnceLock::new(),
            dense: OnceLock::new(),
            chain: OnceLock::new(),
        };
        match mode {
            Mode::Dense => {
                let ctx = DenseGroup::build(degree, &group.gens, dense_bound)?;
                let _ = group.order.set(ctx.len() as u128);
                let _ = group.dense.set(Arc::new(ctx));
            }
            Mode::Chain => {
                let chain = StabChain::new(degree, &group.gens);
                let _ = group.order.set(chain.order());
                let _ = group.chain.set(Arc::new(chain));
            }
        }
        Ok(group)
    }

    pub fn trivial(degree: usize, mode: Mode) -> Self {
        Self::new(degree, Vec::new(), mode).expect("trivial group always fits")
    }

    /// Same generators, other mode.
    pub fn to_mode(&self, mode: Mode) -> Result<Self> {
        Self::with_dense_bound(self.degree, self.gens.clone(), mode, self.dense_bound)
    }

    /// Wraps a dense subgroup of `parent` as a group value of its own.
    pub(crate) fn from_sub(parent: &PermGroup, ctx: &DenseGroup, sub: &Sub) -> Self {
        let group = PermGroup {
            degree: parent.degree,
            gens: ctx.perms(&sub.gens),
            mode: parent.mode,
            dense_bound: parent.dense_bound,
            order: OnceLock::new(),
            dense: OnceLock::new(),
            chain: OnceLock::new(),
        };
        let _ = group.order.set(sub.order as u128);
        group
    }

    /// Group sharing `like`'s mode and bound, built from known-good
    /// generators.
    pub(crate) fn sibling(like: &PermGroup, degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_dense_bound(degree, gens, like.mode, like.dense_bound)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dense_bound(&self) -> usize {
        self.dense_bound
    }

    pub fn order(&self) -> u128 {
        *self.order.get_or_init(|| match self.mode {
            Mode::Dense => self.dense_ctx().map(|c| c.len() as u128).unwrap_or(0),
            Mode::Chain => self.stab_chain().order(),
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        match self.mode {
            Mode::Dense => self.dense_ctx().map(|c| c.index_of(p).is_some()).unwrap_or(false),
            Mode::Chain => self.stab_chain().contains(p),
        }
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other)
            && self
                .gens
                .iter()
                .all(|y| other.gens.iter().all(|g| self.contains(&y.conjugate_by(g))))
    }

    /// All elements in lexicographic order. Dense mode only.
    pub fn elements(&self) -> Result<&[Permutation]> {
        self.require_dense("element enumeration")?;
        self.dense_ctx()?;
        Ok(self.dense.get().expect("initialized above").elements())
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|a| self.gens.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub(crate) fn require_dense(&self, what: &'static str) -> Result<()> {
        match self.mode {
            Mode::Dense => Ok(()),
            Mode::Chain => Err(Error::NeedsDenseMode(what)),
        }
    }

    pub(crate) fn dense_ctx(&self) -> Result<Arc<DenseGroup>> {
        if let Some(ctx) = self.dense.get() {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(DenseGroup::build(self.degree, &self.gens, self.dense_bound)?);
        Ok(self.dense.get_or_init(|| ctx).clone())
    }

    pub(crate) fn stab_chain(&self) -> Arc<StabChain> {
        self.chain
            .get_or_init(|| Arc::new(StabChain::new(self.degree, &self.gens)))
            .clone()
    }

    /// `other` as a bitset subgroup of this group's dense table.
    pub(crate) fn sub_of(&self, ctx: &DenseGroup, other: &PermGroup) -> Result<Sub> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let idx = ctx
            .indices_of(&other.gens)
            .ok_or_else(|| Error::NotASubgroup("generator outside the ambient group".into()))?;
        Ok(ctx.generate(&idx))
    }

    pub(crate) fn check_subgroup(&self, other: &PermGroup, what: &str) -> Result<()> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if !other.is_subgroup_of(self) {
            return Err(Error::NotASubgroup(format!("{what} is not contained in the group")));
        }
        Ok(())
    }

    pub(crate) fn check_normal(&self, other: &PermGroup, what: &str) -> Result<()> {
        self.check_subgroup(other, what)?;
        if !other.is_normal_in(self) {
            return Err(Error::NotNormal(what.to_string()));
        }
        Ok(())
    }
}

/// `⟨gens⟩` on `degree` points.
pub fn group_from_generators(degree: usize, gens: Vec<Permutation>, mode: Mode) -> Result<PermGroup> {
    PermGroup::new(degree, gens, mode)
}

pub fn subgroup_generated(g: &PermGroup, elems: &[Permutation]) -> Result<PermGroup> {
    for e in elems {
        if e.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                expected: g.degree(),
                found: e.degree(),
            });
        }
        if !g.contains(e) {
            return Err(Error::NotASubgroup(format!("{e} is not an element of the group")));
        }
    }
    match g.mode() {
        Mode::Dense => {
            let ctx = g.dense_ctx()?;
            let idx = ctx.indices_of(elems).expect("membership checked");
            Ok(PermGroup::from_sub(g, &ctx, &ctx.generate(&idx)))
        }
        Mode::Chain => PermGroup::sibling(g, g.degree(), elems.to_vec()),
    }
}

/// Smallest normal subgroup of `g` containing `s`.
pub fn normal_closure(g: &PermGroup, s: &PermGroup) -> Result<PermGroup> {
    g.check_subgroup(s, "S")?;
    match g.mode() {
        Mode::Dense => {
            let ctx = g.dense_ctx()?;
            let sub = g.sub_of(&ctx, s)?;
            Ok(PermGroup::from_sub(g, &ctx, &ctx.normal_closure(&sub, ctx.gens())))
        }
        Mode::Chain => chain_normal_closure(g, s.generators().to_vec(), g.generators()),
    }
}

fn chain_normal_closure(like: &PermGroup, mut gens: Vec<Permutation>, acting: &[Permutation]) -> Result<PermGroup> {
    gens.retain(|p| !p.is_identity());
    let mut chain = StabChain::new(like.degree(), &gens);
    let mut queue = gens.clone();
    while let Some(y) = queue.pop() {
        for a in acting {
            let c = y.conjugate_by(a);
            if !chain.contains(&c) {
                gens.push(c.clone());
                chain = StabChain::new(like.degree(), &gens);
                queue.push(c);
            }
        }
    }
    PermGroup::sibling(like, like.degree(), gens)
}

/// `[A, B]` inside `g`.
pub fn commutator_subgroup(g: &PermGroup, a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    g.check_subgroup(a, "A")?;
    g.check_subgroup(b, "B")?;
    match g.mode() {
        Mode::Dense => {
            let ctx = g.dense_ctx()?;
            let sa = g.sub_of(&ctx, a)?;
            let sb = g.sub_of(&ctx, b)?;
            Ok(PermGroup::from_sub(g, &ctx, &ctx.commutator(&sa, &sb)))
        }
        Mode::Chain => {
            let comms: Vec<Permutation> = a
                .generators()
                .iter()
                .flat_map(|x| b.generators().iter().map(move |y| Permutation::commutator(x, y)))
                .collect();
            let acting: Vec<Permutation> = a.generators().iter().chain(b.generators()).cloned().collect();
            chain_normal_closure(g, comms, &acting)
        }
    }
}

/// `C_G(A/B) = { g : [a, g] ∈ B for all a ∈ A }`.
pub fn centralizer_of_section(g: &PermGroup, a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    g.require_dense("centralizer_of_section")?;
    g.check_normal(a, "A")?;
    g.check_normal(b, "B")?;
    if !b.is_subgroup_of(a) {
        return Err(Error::NotASubgroup("B is not contained in A".into()));
    }
    let ctx = g.dense_ctx()?;
    let sa = g.sub_of(&ctx, a)?;
    let sb = g.sub_of(&ctx, b)?;
    Ok(PermGroup::from_sub(
        g,
        &ctx,
        &ctx.section_centralizer(&ctx.whole(), &sa, &sb),
    ))
}

/// `γ₁ = G, γᵢ₊₁ = [γᵢ, G]`, stopping at the first repeated term.
pub fn lower_central_series(g: &PermGroup) -> Result<Vec<PermGroup>> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().unwrap();
        let next = commutator_subgroup(g, last, g)?;
        if next.order() == last.order() {
            return Ok(series);
        }
        series.push(next);
    }
}

pub fn is_nilpotent(g: &PermGroup) -> Result<bool> {
    Ok(lower_central_series(g)?.last().unwrap().is_trivial())
}

/// `G/N` in its regular action on the right cosets of `N`, with the
/// projection.
pub fn quotient(g: &PermGroup, n: &PermGroup) -> Result<(PermGroup, GroupHom)> {
    g.require_dense("quotient")?;
    g.check_normal(n, "N")?;
    let ctx = g.dense_ctx()?;
    let sn = g.sub_of(&ctx, n)?;
    let (q, images) = coset_action(&ctx, &sn, g.dense_bound())?;
    let q = PermGroup::with_dense_bound(q, images.clone(), Mode::Dense, g.dense_bound())?;
    let gen_images = g
        .generators()
        .iter()
        .map(|p| {
            let i = ctx.index_of(p).unwrap();
            ctx.gens()
                .iter()
                .position(|&x| x == i)
                .map(|j| images[j].clone())
                .unwrap_or_else(|| Permutation::identity(q.degree()))
        })
        .collect();
    let hom = GroupHom::new(g.clone(), q.clone(), gen_images)?;
    Ok((q, hom))
}

/// Regular action of the dense group's generators on right cosets of `n`.
fn coset_action(ctx: &DenseGroup, n: &Sub, bound: usize) -> Result<(usize, Vec<Permutation>)> {
    let reps = ctx.right_transversal(&ctx.whole(), n);
    let index = reps.len();
    if index > bound {
        return Err(Error::DenseBoundExceeded { bound });
    }
    let mut coset_of = vec![0u32; ctx.len()];
    let n_elems = n.element_vec();
    for (c, &r) in reps.iter().enumerate() {
        for &e in &n_elems {
            coset_of[ctx.mul(e, r) as usize] = c as u32;
        }
    }
    let images = ctx
        .gens()
        .iter()
        .map(|&s| {
            let imgs = reps.iter().map(|&r| coset_of[ctx.mul(r, s) as usize]).collect();
            Permutation::from_images(imgs).expect("coset action is a permutation")
        })
        .collect();
    Ok((index, images))
}

fn product_mode(a: &PermGroup, b: &PermGroup) -> Mode {
    if a.mode() == Mode::Dense && b.mode() == Mode::Dense {
        Mode::Dense
    } else {
        Mode::Chain
    }
}

/// `A × B` acting on disjoint point sets.
pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let degree = a.degree() + b.degree();
    let mode = product_mode(a, b);
    let bound = a.dense_bound().min(b.dense_bound());
    if mode == Mode::Dense && a.order() * b.order() > bound as u128 {
        return Err(Error::DenseBoundExceeded { bound });
    }
    let gens = a
        .generators()
        .iter()
        .map(|p| p.shifted(0, degree))
        .chain(b.generators().iter().map(|p| p.shifted(a.degree(), degree)))
        .collect();
    PermGroup::with_dense_bound(degree, gens, mode, bound)
}

/// Imprimitive wreath product: `top` permutes `top.degree()` blocks, each a
/// copy of `base`'s domain. Point `(block, i)` is numbered
/// `block * base.degree() + i`.
pub fn wreath_product(base: &PermGroup, top: &PermGroup) -> Result<PermGroup> {
    let m = base.degree();
    let d = top.degree();
    let degree = m * d;
    let mode = product_mode(base, top);
    let bound = base.dense_bound().min(top.dense_bound());
    let predicted = base
        .order()
        .checked_pow(d as u32)
        .and_then(|x| x.checked_mul(top.order()));
    if mode == Mode::Dense && predicted.is_none_or(|o| o > bound as u128) {
        return Err(Error::DenseBoundExceeded { bound });
    }
    let mut gens = Vec::new();
    for t in top.generators() {
        let images = (0..degree as u32)
            .map(|x| t.apply(x / m as u32) * m as u32 + x % m as u32)
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    // one base copy per orbit of the top group on blocks
    for block in block_orbit_reps(top) {
        for b in base.generators() {
            gens.push(b.shifted(block as usize * m, degree));
        }
    }
    PermGroup::with_dense_bound(degree, gens, mode, bound)
}

fn block_orbit_reps(top: &PermGroup) -> Vec<u32> {
    let d = top.degree();
    let mut seen = vec![false; d];
    let mut reps = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        reps.push(start as u32);
        let mut stack = vec![start as u32];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for g in top.generators() {
                let y = g.apply(x) as usize;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y as u32);
                }
            }
        }
    }
    reps
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `E^p(G)`: the intersection of all normal subgroups of index `p`, computed
/// as the normal closure of generator commutators and `p`-th powers.
pub fn e_p_subgroup(g: &PermGroup, p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let gens = g.generators();
    let mut seeds: Vec<Permutation> = gens.iter().map(|x| x.pow(p)).collect();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            seeds.push(Permutation::commutator(x, y));
        }
    }
    seeds.retain(|x| !x.is_identity());
    match g.mode() {
        Mode::Dense => {
            let ctx = g.dense_ctx()?;
            let idx = ctx.indices_of(&seeds).expect("words in generators");
            let seed = ctx.generate(&idx);
            Ok(PermGroup::from_sub(g, &ctx, &ctx.normal_closure(&seed, ctx.gens())))
        }
        Mode::Chain => chain_normal_closure(g, seeds, gens),
    }
}
