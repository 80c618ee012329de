//! Central products.
//!
//! A nontrivial group `G` is a central product of proper subgroups exactly
//! when one of the following holds:
//!
//! * some proper, non-central subgroup `H = C_G(C_G(H))` satisfies
//!   `H C_G(H) = G` (then `G` is the central product of `H` and `C_G(H)`);
//! * `G` is nonabelian and for some prime `p` the centre is not inside
//!   `E^p(G)`, so a normal subgroup `M` of index `p` misses part of the
//!   centre and `G = Z(G) M`;
//! * `G` is abelian with at least two maximal subgroups.
//!
//! If `G = ⟨H_i⟩` with commuting proper `H_i` and no `H_i` central, the
//! double centralizer of `H_1` is a subgroup of the first kind. If every
//! `H_i` is central then `G` is abelian. The remaining case, one
//! non-central factor `H_1` with the rest central, forces
//! `G = H_1 Z(G)` with `H_1` proper, and a maximal subgroup containing `H_1`
//! is normal of prime index and misses part of `Z(G)`. So the search only
//! visits centralizers.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use crate::dense::{DenseGroup, Sub};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::normal::{maximal_normals, normal_lattice};
use crate::par;

/// All subgroups of the form `C_G(X)`, as bitsets: intersections of
/// element centralizers.
fn centralizer_closed(ctx: &DenseGroup, group: &Sub) -> Vec<FixedBitSet> {
    let elems = group.element_vec();
    let singles = par::map(&elems, |&x| {
        let mut bits = ctx.empty_bits();
        for g in group.elements() {
            if ctx.mul(g, x) == ctx.mul(x, g) {
                bits.insert(g as usize);
            }
        }
        bits
    });
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut atoms = Vec::new();
    for b in singles {
        if seen.insert(b.clone()) {
            atoms.push(b);
        }
    }
    let mut all = atoms.clone();
    let mut frontier = atoms.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for a in &atoms {
                let mut m = f.clone();
                m.intersect_with(a);
                if seen.insert(m.clone()) {
                    all.push(m.clone());
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    all
}

/// Proper subgroups generating `group` and pairwise commuting, or `None`.
pub(crate) fn central_decomposition_in(ctx: &DenseGroup, group: &Sub) -> Option<Vec<Sub>> {
    if group.is_trivial() {
        return None;
    }
    let lattice_maximal = || maximal_normals(&normal_lattice(ctx, group), group);
    if ctx.commute(group, group) {
        let maxes = lattice_maximal();
        return (maxes.len() >= 2).then(|| maxes[..2].to_vec());
    }
    let z = ctx.center(group);
    for bits in centralizer_closed(ctx, group) {
        let size = bits.count_ones(..);
        if size == group.order || bits.is_subset(&z.bits) {
            continue;
        }
        let h = ctx.sub_from_bits(bits);
        let c = ctx.centralizer(group, &h.gens);
        if ctx.product_size(&h, &c) == group.order {
            return Some(vec![h, c]);
        }
    }
    // central factor case: a maximal normal subgroup of prime index that
    // misses part of the centre
    lattice_maximal()
        .into_iter()
        .find(|m| !z.le(m) && crate::group::is_prime((group.order / m.order) as u64))
        .map(|m| vec![z, m])
}

/// Checks the defining conditions of a central decomposition.
pub(crate) fn is_central_decomposition(ctx: &DenseGroup, group: &Sub, parts: &[Sub]) -> bool {
    parts.len() >= 2
        && parts.iter().all(|h| h.lt(group))
        && parts
            .iter()
            .enumerate()
            .all(|(i, h)| parts[i + 1..].iter().all(|k| ctx.commute(h, k)))
        && parts.iter().fold(ctx.trivial(), |acc, h| ctx.join(&acc, h)) == *group
}

/// Proper subgroups whose product is `g` and which pairwise commute, or
/// `None` when `g` is centrally indecomposable.
pub fn central_decomposition(g: &PermGroup) -> Result<Option<Vec<PermGroup>>> {
    g.require_dense("central decomposition")?;
    let ctx = g.dense_ctx()?;
    let whole = ctx.whole();
    let found = central_decomposition_in(&ctx, &whole);
    if let Some(parts) = &found {
        if !is_central_decomposition(&ctx, &whole, parts) {
            return Err(Error::Internal("central decomposition failed verification".into()));
        }
    }
    Ok(found.map(|parts| parts.iter().map(|h| PermGroup::from_sub(g, &ctx, h)).collect()))
}

/// For centrally decomposable `G`, non-central `K` and nontrivial normal
/// `L`, finds a normal `H` of `G` and a maximal normal `M` of `L` with
/// `H ⊄ M` and `K ⊄ H`. Candidates are tried in canonical order.
pub fn central_product_witness(g: &PermGroup, k: &PermGroup, l: &PermGroup) -> Result<(PermGroup, PermGroup)> {
    CentralProductWitnesses::new(g)?.witness(k, l)
}

/// Witness search for one centrally decomposable group, reusable across
/// many `(K, L)` queries.
pub struct CentralProductWitnesses<'g> {
    g: &'g PermGroup,
    ctx: Arc<DenseGroup>,
    center: Sub,
    normals: Vec<Sub>,
    l_maximals: Mutex<HashMap<FixedBitSet, Arc<Vec<Sub>>>>,
}

impl<'g> CentralProductWitnesses<'g> {
    pub fn new(g: &'g PermGroup) -> Result<Self> {
        g.require_dense("central product witness")?;
        let ctx = g.dense_ctx()?;
        let whole = ctx.whole();
        if central_decomposition_in(&ctx, &whole).is_none() {
            return Err(Error::Precondition("G is not centrally decomposable".into()));
        }
        Ok(CentralProductWitnesses {
            g,
            center: ctx.center(&whole),
            normals: normal_lattice(&ctx, &whole),
            ctx,
            l_maximals: Mutex::new(HashMap::new()),
        })
    }

    pub fn witness(&self, k: &PermGroup, l: &PermGroup) -> Result<(PermGroup, PermGroup)> {
        let g = self.g;
        g.check_subgroup(k, "K")?;
        g.check_normal(l, "L")?;
        let sk = g.sub_of(&self.ctx, k)?;
        let sl = g.sub_of(&self.ctx, l)?;
        if sl.is_trivial() {
            return Err(Error::Precondition(
                "L is trivial and has no maximal normal subgroup".into(),
            ));
        }
        if sk.le(&self.center) {
            return Err(Error::Precondition("K is central".into()));
        }
        let l_max = {
            let mut cache = self.l_maximals.lock().expect("cache lock");
            cache
                .entry(sl.bits.clone())
                .or_insert_with(|| Arc::new(maximal_normals(&normal_lattice(&self.ctx, &sl), &sl)))
                .clone()
        };
        let (h, m) = witness_in(&self.normals, &l_max, &sk).ok_or_else(|| {
            Error::Internal("no normal H and maximal normal M of L with H not in M and K not in H".into())
        })?;
        Ok((
            PermGroup::from_sub(g, &self.ctx, &h),
            PermGroup::from_sub(g, &self.ctx, &m),
        ))
    }
}

fn witness_in(normals: &[Sub], l_max: &[Sub], k: &Sub) -> Option<(Sub, Sub)> {
    normals
        .iter()
        .filter(|h| !k.le(h))
        .find_map(|h| l_max.iter().find(|m| !h.le(m)).map(|m| (h.clone(), m.clone())))
}
