//! Brute-force reference computations on raw image arrays. Nothing here
//! goes through the engine's dense or chain structures: elements come from
//! a plain closure of the generators, subgroups are membership vectors.

use std::collections::{BTreeMap, HashMap, HashSet};

use jicert_core::{PermGroup, Permutation};

pub type Bits = Vec<bool>;

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub struct Oracle {
    pub elems: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    table: Vec<u32>,
    inverse: Vec<usize>,
    pub gens: Vec<usize>,
    pub identity: usize,
}

impl Oracle {
    pub fn new(g: &PermGroup) -> Oracle {
        let degree = g.degree();
        let raw: Vec<Vec<u32>> = g.generators().iter().map(|p| p.images().to_vec()).collect();
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for s in &raw {
                let y = compose(&x, s);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut elems: Vec<Vec<u32>> = seen.into_iter().collect();
        elems.sort();
        let index: HashMap<Vec<u32>, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = index[&compose(&elems[i], &elems[j])] as u32;
            }
        }
        let identity = 0;
        let inverse = (0..n)
            .map(|i| (0..n).find(|&j| table[i * n + j] as usize == identity).unwrap())
            .collect();
        let gens = raw.iter().map(|p| index[p]).collect();
        Oracle {
            elems,
            index,
            table,
            inverse,
            gens,
            identity,
        }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn elem_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn index_of(&self, p: &Permutation) -> usize {
        self.index[p.images()]
    }

    pub fn perm(&self, i: usize) -> Permutation {
        Permutation::from_images(self.elems[i].clone()).unwrap()
    }

    pub fn perms(&self, idx: &[usize]) -> Vec<Permutation> {
        idx.iter().map(|&i| self.perm(i)).collect()
    }

    pub fn whole(&self) -> Bits {
        vec![true; self.order()]
    }

    pub fn closure(&self, gens: &[usize]) -> Bits {
        let mut bits = vec![false; self.order()];
        bits[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !bits[y] {
                    bits[y] = true;
                    stack.push(y);
                }
            }
        }
        bits
    }

    /// Subgroup generated by the generators of an engine-built subgroup.
    pub fn sub_of(&self, h: &PermGroup) -> Bits {
        let gens: Vec<usize> = h.generators().iter().map(|p| self.index_of(p)).collect();
        self.closure(&gens)
    }

    pub fn members(&self, s: &Bits) -> Vec<usize> {
        (0..s.len()).filter(|&i| s[i]).collect()
    }

    pub fn gens_of(&self, s: &Bits) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = self.closure(&gens);
        for x in self.members(s) {
            if !cur[x] {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn group_of(&self, g: &PermGroup, s: &Bits) -> PermGroup {
        jicert_core::group::subgroup_generated(g, &self.perms(&self.gens_of(s))).unwrap()
    }

    /// Smallest subgroup containing `gens` and invariant under `acting`.
    pub fn normal_closure(&self, gens: &[usize], acting: &[usize]) -> Bits {
        let mut gens = gens.to_vec();
        loop {
            let s = self.closure(&gens);
            let extra: Vec<usize> = gens
                .iter()
                .flat_map(|&x| acting.iter().map(move |&g| (x, g)))
                .map(|(x, g)| self.conj(x, g))
                .filter(|&c| !s[c])
                .collect();
            if extra.is_empty() {
                return s;
            }
            gens.extend(extra);
        }
    }

    pub fn size(s: &Bits) -> usize {
        s.iter().filter(|&&b| b).count()
    }

    pub fn le(a: &Bits, b: &Bits) -> bool {
        a.iter().zip(b).all(|(&x, &y)| !x || y)
    }

    pub fn lt(a: &Bits, b: &Bits) -> bool {
        Self::le(a, b) && a != b
    }

    pub fn meet(a: &Bits, b: &Bits) -> Bits {
        a.iter().zip(b).map(|(&x, &y)| x && y).collect()
    }

    pub fn is_trivial(&self, s: &Bits) -> bool {
        Self::size(s) == 1
    }

    pub fn is_normalized_by(&self, s: &Bits, acting: &[usize]) -> bool {
        self.members(s)
            .iter()
            .all(|&x| acting.iter().all(|&g| s[self.conj(x, g)]))
    }

    pub fn commute(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().all(|&x| b.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn centralizer(&self, of: &[usize]) -> Bits {
        (0..self.order())
            .map(|g| of.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    pub fn center(&self) -> Bits {
        self.centralizer(&self.gens)
    }

    /// Elements `g` with `[a, g] ∈ b` for every generator `a` of `a`.
    pub fn section_centralizer(&self, a: &Bits, b: &Bits) -> Bits {
        let a_gens = self.gens_of(a);
        (0..self.order())
            .map(|g| a_gens.iter().all(|&x| b[self.comm(x, g)]))
            .collect()
    }

    /// Classes of elements of `within` under conjugation by `acting`.
    fn orbits(&self, within: &Bits, acting: &[usize]) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.order()];
        let mut out = Vec::new();
        for x in self.members(within) {
            if done[x] {
                continue;
            }
            let mut class = vec![x];
            done[x] = true;
            let mut i = 0;
            while i < class.len() {
                for &g in acting {
                    let y = self.conj(class[i], g);
                    if !done[y] {
                        done[y] = true;
                        class.push(y);
                    }
                }
                i += 1;
            }
            out.push(class);
        }
        out
    }

    /// Subgroups of `within` invariant under `acting`, smallest first.
    /// Every such subgroup is a union of orbits, reached from the trivial
    /// group by adding orbits one at a time.
    pub fn normals_under(&self, within: &Bits, acting: &[usize]) -> Vec<Bits> {
        let orbits = self.orbits(within, acting);
        let trivial = self.closure(&[]);
        let mut seen: HashSet<Bits> = HashSet::from([trivial.clone()]);
        let mut queue = vec![trivial];
        let mut i = 0;
        while i < queue.len() {
            let n = queue[i].clone();
            let base = self.gens_of(&n);
            for orbit in &orbits {
                if n[orbit[0]] {
                    continue;
                }
                let mut gens = base.clone();
                gens.push(orbit[0]);
                let m = self.normal_closure(&gens, acting);
                if seen.insert(m.clone()) {
                    queue.push(m);
                }
            }
            i += 1;
        }
        queue.sort_by_key(Self::size);
        queue
    }

    pub fn normals(&self) -> Vec<Bits> {
        self.normals_under(&self.whole(), &self.gens)
    }

    /// Every subgroup, as joins of cyclic subgroups.
    /// One cyclic subgroup from each conjugacy class of cyclic subgroups.
    pub fn cyclic_subgroup_reps(&self) -> Vec<Bits> {
        let mut seen = HashSet::new();
        let mut reps = Vec::new();
        for x in 0..self.order() {
            let c = self.closure(&[x]);
            if seen.contains(&c) {
                continue;
            }
            for g in 0..self.order() {
                let gens: Vec<usize> = [x].iter().map(|&y| self.conj(y, g)).collect();
                seen.insert(self.closure(&gens));
            }
            reps.push(c);
        }
        reps
    }

    pub fn all_subgroups(&self) -> Vec<Bits> {
        let cyclic: Vec<(usize, Bits)> = {
            let mut seen = HashSet::new();
            (0..self.order())
                .filter_map(|x| {
                    let c = self.closure(&[x]);
                    seen.insert(c.clone()).then_some((x, c))
                })
                .collect()
        };
        let mut seen: HashSet<Bits> = cyclic.iter().map(|(_, c)| c.clone()).collect();
        let mut all: Vec<Bits> = cyclic.iter().map(|(_, c)| c.clone()).collect();
        let mut i = 0;
        while i < all.len() {
            let h = all[i].clone();
            let hg = self.gens_of(&h);
            for (x, _) in &cyclic {
                if h[*x] {
                    continue;
                }
                let mut gens = hg.clone();
                gens.push(*x);
                let j = self.closure(&gens);
                if seen.insert(j.clone()) {
                    all.push(j);
                }
            }
            i += 1;
        }
        all.sort_by_key(Self::size);
        all
    }

    /// Critical pairs as indices into `normals`.
    pub fn critical_pairs(normals: &[Bits]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ia, a) in normals.iter().enumerate() {
            for (ib, b) in normals.iter().enumerate() {
                if Self::lt(b, a) && normals.iter().all(|n| !Self::lt(n, a) || Self::le(n, b)) {
                    out.push((ia, ib));
                }
            }
        }
        out
    }

    /// Covering pairs `(K, L)` of the normal lattice: the chief factors.
    pub fn chief_factors(normals: &[Bits]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ik, k) in normals.iter().enumerate() {
            for (il, l) in normals.iter().enumerate() {
                if Self::lt(l, k) && !normals.iter().any(|n| Self::lt(l, n) && Self::lt(n, k)) {
                    out.push((ik, il));
                }
            }
        }
        out
    }

    /// A chief series from the bottom, always taking the smallest cover.
    pub fn chief_series(normals: &[Bits]) -> Vec<Bits> {
        let mut series = vec![normals[0].clone()];
        loop {
            let cur = series.last().unwrap();
            match normals.iter().find(|n| Self::lt(cur, n)) {
                Some(n) => series.push(n.clone()),
                None => return series,
            }
        }
    }

    /// Order of the simple group `S` of a chief factor `a/b ≅ S^k`, and `k`:
    /// the smallest subgroup of `a` above `b` that is normal in `a`.
    pub fn chief_factor_type(&self, a: &Bits, b: &Bits) -> (u64, usize) {
        let q = Self::size(a) / Self::size(b);
        let s = self
            .normals_under(a, &self.gens_of(a))
            .iter()
            .filter(|n| Self::lt(b, n))
            .map(|n| Self::size(n) / Self::size(b))
            .min()
            .unwrap();
        let mut k = 0;
        let mut r = q;
        while r > 1 {
            assert_eq!(r % s, 0);
            r /= s;
            k += 1;
        }
        (s as u64, k)
    }

    /// Composition factors as simple order -> multiplicity.
    pub fn composition_orders(&self, normals: &[Bits]) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for w in Self::chief_series(normals).windows(2) {
            let (s, k) = self.chief_factor_type(&w[1], &w[0]);
            *out.entry(s).or_default() += k;
        }
        out
    }

    /// `G` is a central product of proper subgroups iff two proper normal
    /// subgroups commute and have product `G` (commuting factors of a
    /// product are normal).
    pub fn centrally_decomposable(&self, normals: &[Bits]) -> bool {
        let n = self.order();
        let proper: Vec<(&Bits, Vec<usize>)> = normals
            .iter()
            .filter(|h| Self::size(h) < n)
            .map(|h| (h, self.gens_of(h)))
            .collect();
        proper.iter().any(|(h, hg)| {
            proper.iter().any(|(k, kg)| {
                Self::size(h) * Self::size(k) == n * Self::size(&Self::meet(h, k)) && self.commute(hg, kg)
            })
        })
    }

    /// Multiset of coset orders in `a/b`, as order -> number of cosets.
    pub fn section_orders(&self, a: &Bits, b: &Bits) -> BTreeMap<u64, u64> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for x in self.members(a) {
            let mut y = x;
            let mut k = 1;
            while !b[y] {
                y = self.mul(y, x);
                k += 1;
            }
            *counts.entry(k).or_default() += 1;
        }
        let nb = Self::size(b) as u64;
        counts.values_mut().for_each(|v| *v /= nb);
        counts
    }
}

pub fn is_prime_power_of(q: usize, p: usize) -> bool {
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    r == 1 && q > 1
}

pub fn is_prime_power(q: usize) -> bool {
    q > 1 && is_prime_power_of(q, (2..=q).find(|d| q % d == 0).unwrap())
}
