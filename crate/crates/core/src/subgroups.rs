//! Enumeration of subgroups up to conjugacy.
//!
//! Every subgroup is generated by cyclic subgroups of prime-power order, so
//! classes are built in layers: layer `k` holds classes generated by `k`
//! such cyclic subgroups. A representative `H` is only extended by one
//! cyclic subgroup from each orbit of `N_G(H)`, which keeps the search to
//! one candidate per conjugacy class of pairs.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::dense::{DenseGroup, Sub};
use crate::par;

#[derive(Clone, Debug)]
pub(crate) struct SubgroupClass {
    pub rep: Sub,
    pub normalizer: Sub,
    /// Right transversal of the normalizer; conjugating the representative
    /// by these gives each class member exactly once.
    pub transversal: Vec<u32>,
}

impl SubgroupClass {
    pub fn is_normal(&self) -> bool {
        self.transversal.len() == 1
    }

    pub fn members(&self, ctx: &DenseGroup) -> Vec<Sub> {
        self.transversal
            .iter()
            .map(|&t| ctx.conjugate_sub(&self.rep, t))
            .collect()
    }

    /// Do the distinct conjugates of the representative pairwise commute
    /// elementwise? It suffices to test the representative against every
    /// other conjugate.
    pub fn conjugates_commute(&self, ctx: &DenseGroup) -> bool {
        self.transversal
            .iter()
            .filter(|&&t| !self.normalizer.contains(t))
            .all(|&t| ctx.commute(&self.rep, &ctx.conjugate_sub(&self.rep, t)))
    }
}

/// Outcome of a subgroup class enumeration.
#[derive(Clone, Debug)]
pub(crate) struct SubgroupClasses {
    pub classes: Vec<SubgroupClass>,
    /// False when the enumeration was cut off after `max_layers` layers.
    pub complete: bool,
}

fn is_prime_power(mut n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            return n == 1;
        }
        p += 1;
    }
    true
}

struct CyclicIndex {
    /// one generator per cyclic subgroup of prime-power order
    gens: Vec<u32>,
    /// element index -> id of the cyclic subgroup it generates
    of: Vec<u32>,
}

fn cyclic_index(ctx: &DenseGroup) -> CyclicIndex {
    let n = ctx.len();
    let mut of = vec![u32::MAX; n];
    let mut gens = Vec::new();
    for x in 1..n as u32 {
        if of[x as usize] != u32::MAX {
            continue;
        }
        let ord = ctx.element_order(x);
        if !is_prime_power(ord) {
            continue;
        }
        let id = gens.len() as u32;
        gens.push(x);
        let mut y = x;
        for k in 1..ord {
            if crate::perm::gcd(k, ord) == 1 {
                of[y as usize] = id;
            }
            y = ctx.mul(y, x);
        }
    }
    CyclicIndex { gens, of }
}

fn make_class(ctx: &DenseGroup, rep: Sub) -> SubgroupClass {
    let whole = ctx.whole();
    let normalizer = ctx.normalizer(&whole, &rep);
    let transversal = ctx.right_transversal(&whole, &normalizer);
    SubgroupClass {
        rep,
        normalizer,
        transversal,
    }
}

/// All conjugacy classes of subgroups, or those reachable within
/// `max_layers` cyclic generators.
pub(crate) fn subgroup_classes(ctx: &DenseGroup, max_layers: Option<usize>) -> SubgroupClasses {
    let cyc = cyclic_index(ctx);
    let mut known: HashSet<FixedBitSet> = HashSet::new();
    let mut classes: Vec<SubgroupClass> = Vec::new();

    let register = |sub: Sub, known: &mut HashSet<FixedBitSet>, classes: &mut Vec<SubgroupClass>| -> bool {
        if known.contains(&sub.bits) {
            return false;
        }
        let class = make_class(ctx, sub);
        for m in class.members(ctx) {
            known.insert(m.bits);
        }
        classes.push(class);
        true
    };

    register(ctx.trivial(), &mut known, &mut classes);
    let mut layer: Vec<usize> = Vec::new();
    for &g in &cyc.gens {
        let before = classes.len();
        if register(ctx.generate(&[g]), &mut known, &mut classes) {
            layer.push(before);
        }
    }

    let mut depth = 1;
    let mut complete = true;
    while !layer.is_empty() {
        if max_layers.is_some_and(|m| depth >= m) {
            complete = false;
            break;
        }
        depth += 1;
        let reps: Vec<(Sub, Sub)> = layer
            .iter()
            .map(|&i| (classes[i].rep.clone(), classes[i].normalizer.clone()))
            .collect();
        let known_ref = &known;
        let candidates: Vec<Vec<Sub>> = par::map(&reps, |(h, n)| {
            extensions(ctx, &cyc, h, n)
                .into_iter()
                .filter(|k| !known_ref.contains(&k.bits))
                .collect()
        });
        let mut next = Vec::new();
        for k in candidates.into_iter().flatten() {
            let before = classes.len();
            if register(k, &mut known, &mut classes) {
                next.push(before);
            }
        }
        layer = next;
    }
    SubgroupClasses { classes, complete }
}

/// `⟨H, Z⟩` for one cyclic `Z ⊄ H` from each `N_G(H)`-orbit.
fn extensions(ctx: &DenseGroup, cyc: &CyclicIndex, h: &Sub, normalizer: &Sub) -> Vec<Sub> {
    let count = cyc.gens.len();
    let mut visited = vec![false; count];
    let mut out = Vec::new();
    for id in 0..count {
        if visited[id] {
            continue;
        }
        visited[id] = true;
        let mut orbit = vec![id];
        let mut head = 0;
        while head < orbit.len() {
            let z = cyc.gens[orbit[head]];
            head += 1;
            for &n in &normalizer.gens {
                let w = cyc.of[ctx.conj(z, n) as usize] as usize;
                if !visited[w] {
                    visited[w] = true;
                    orbit.push(w);
                }
            }
        }
        let z = cyc.gens[id];
        if !h.contains(z) {
            out.push(ctx.extend(h, z));
        }
    }
    out
}

/// Every subgroup, each exactly once.
#[allow(dead_code)]
pub(crate) fn all_subgroups(ctx: &DenseGroup) -> Vec<Sub> {
    subgroup_classes(ctx, None)
        .classes
        .iter()
        .flat_map(|c| c.members(ctx))
        .collect()
}
