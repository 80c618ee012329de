//! Dense representation: a fully enumerated group with elements indexed by
//! their lexicographic rank, and subgroups stored as bitsets over that
//! index. Everything that needs exhaustive search runs here.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 4096;

/// A subgroup of a [`DenseGroup`], as a set of element indices together with
/// a small generating set.
#[derive(Clone, Debug)]
pub(crate) struct Sub {
    pub bits: FixedBitSet,
    pub gens: Vec<u32>,
    pub order: usize,
}

impl PartialEq for Sub {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Sub {}

impl Hash for Sub {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl Sub {
    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    /// `self ⊆ other`
    pub fn le(&self, other: &Sub) -> bool {
        self.order <= other.order && self.bits.is_subset(&other.bits)
    }

    /// `self ⊊ other`
    pub fn lt(&self, other: &Sub) -> bool {
        self.order < other.order && self.bits.is_subset(&other.bits)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.ones().map(|i| i as u32)
    }

    pub fn element_vec(&self) -> Vec<u32> {
        self.elements().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Deterministic total order: by order, then lexicographically by the
    /// sorted element list.
    pub fn canonical_cmp(&self, other: &Sub) -> Ordering {
        self.order.cmp(&other.order).then_with(|| lex_cmp(self, other))
    }
}

/// Lexicographic comparison of the sorted element lists.
pub(crate) fn lex_cmp(a: &Sub, b: &Sub) -> Ordering {
    a.bits.ones().cmp(b.bits.ones())
}

enum Table {
    Full(Vec<u16>),
    None,
}

pub(crate) struct DenseGroup {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    gens: Vec<u32>,
    inv: Vec<u32>,
    table: Table,
}

impl std::fmt::Debug for DenseGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DenseGroup")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .finish()
    }
}

impl DenseGroup {
    /// Enumerates `⟨gens⟩` by breadth-first closure, giving up once more than
    /// `bound` elements have been found.
    pub fn build(degree: usize, gens: &[Permutation], bound: usize) -> Result<Self> {
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut seen: HashMap<Permutation, u32> = HashMap::new();
        seen.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in gens {
                let y = x.compose(g);
                if !seen.contains_key(&y) {
                    if elements.len() >= bound {
                        return Err(Error::DenseBoundExceeded { bound });
                    }
                    seen.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
        }
        Ok(Self::from_elements(degree, elements, gens))
    }

    fn from_elements(degree: usize, mut elements: Vec<Permutation>, gens: &[Permutation]) -> Self {
        elements.sort();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inv = elements.iter().map(|p| index[&p.inverse()]).collect();
        let gen_idx: Vec<u32> = gens.iter().filter(|g| !g.is_identity()).map(|g| index[g]).collect();
        let mut group = DenseGroup {
            degree,
            elements,
            index,
            gens: gen_idx,
            inv,
            table: Table::None,
        };
        if group.len() <= TABLE_LIMIT {
            group.table = Table::Full(group.build_table());
        }
        group
    }

    /// Fills the multiplication table from right-multiplication by
    /// generators, walking a spanning tree of the Cayley graph.
    fn build_table(&self) -> Vec<u16> {
        let n = self.len();
        let k = self.gens.len();
        let mut right = vec![0u32; n * k];
        for x in 0..n {
            for (j, &s) in self.gens.iter().enumerate() {
                right[x * k + j] = self.mul_slow(x as u32, s);
            }
        }
        // BFS tree: every y != 1 is parent[y] * gens[via[y]]
        let mut order = Vec::with_capacity(n);
        let mut parent = vec![u32::MAX; n];
        let mut via = vec![0usize; n];
        parent[0] = 0;
        order.push(0u32);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for j in 0..k {
                let y = right[x as usize * k + j];
                if parent[y as usize] == u32::MAX {
                    parent[y as usize] = x;
                    via[y as usize] = j;
                    order.push(y);
                }
            }
        }
        let mut table = vec![0u16; n * n];
        for x in 0..n {
            let row = x * n;
            table[row] = x as u16;
            for &y in &order[1..] {
                let y = y as usize;
                let prev = table[row + parent[y] as usize] as usize;
                table[row + y] = right[prev * k + via[y]] as u16;
            }
        }
        table
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.elements[a as usize].compose(&self.elements[b as usize]);
        self.index[&p]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    #[inline]
    pub fn identity(&self) -> u32 {
        0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Table::Full(t) => t[a as usize * self.len() + b as usize] as u32,
            Table::None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `a⁻¹ b⁻¹ a b`
    #[inline]
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, x: u32, k: u64) -> u32 {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: u32) -> u64 {
        self.elements[x as usize].order()
    }

    pub fn perms(&self, idx: &[u32]) -> Vec<Permutation> {
        idx.iter().map(|&i| self.elements[i as usize].clone()).collect()
    }

    pub fn empty_bits(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn trivial(&self) -> Sub {
        let mut bits = self.empty_bits();
        bits.insert(0);
        Sub {
            bits,
            gens: Vec::new(),
            order: 1,
        }
    }

    pub fn whole(&self) -> Sub {
        let mut bits = self.empty_bits();
        bits.insert_range(..);
        Sub {
            bits,
            gens: self.gens.clone(),
            order: self.len(),
        }
    }

    /// `⟨H, x⟩`, built coset by coset (Dimino).
    pub fn extend(&self, h: &Sub, x: u32) -> Sub {
        if h.contains(x) {
            return h.clone();
        }
        let h_elems = h.element_vec();
        let mut gens = h.gens.clone();
        gens.push(x);
        let mut bits = h.bits.clone();
        let mut reps = vec![self.identity()];
        let mut order = h.order;
        let mut add_coset = |g: u32, bits: &mut FixedBitSet, reps: &mut Vec<u32>| {
            for &e in &h_elems {
                bits.insert(self.mul(e, g) as usize);
            }
            order += h_elems.len();
            reps.push(g);
        };
        add_coset(x, &mut bits, &mut reps);
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            i += 1;
            for &s in &gens {
                let g = self.mul(r, s);
                if !bits.contains(g as usize) {
                    add_coset(g, &mut bits, &mut reps);
                }
            }
        }
        Sub { bits, gens, order }
    }

    pub fn generate(&self, gens: &[u32]) -> Sub {
        gens.iter().fold(self.trivial(), |acc, &g| self.extend(&acc, g))
    }

    pub fn join(&self, a: &Sub, b: &Sub) -> Sub {
        let (big, small) = if a.order >= b.order { (a, b) } else { (b, a) };
        small.gens.iter().fold(big.clone(), |acc, &g| self.extend(&acc, g))
    }

    /// Turns a bitset known to be a subgroup into a [`Sub`] with a greedy
    /// generating set.
    pub fn sub_from_bits(&self, bits: FixedBitSet) -> Sub {
        let mut cur = self.trivial();
        for e in bits.ones() {
            if !cur.contains(e as u32) {
                cur = self.extend(&cur, e as u32);
            }
        }
        debug_assert_eq!(cur.bits, bits, "bitset is not a subgroup");
        cur
    }

    pub fn intersection(&self, a: &Sub, b: &Sub) -> Sub {
        let mut bits = a.bits.clone();
        bits.intersect_with(&b.bits);
        self.sub_from_bits(bits)
    }

    /// Smallest subgroup containing `s` and normalized by `⟨acting⟩`.
    pub fn normal_closure(&self, s: &Sub, acting: &[u32]) -> Sub {
        let mut n = s.clone();
        let mut queue: Vec<u32> = n.gens.clone();
        while let Some(y) = queue.pop() {
            for &a in acting {
                let c = self.conj(y, a);
                if !n.contains(c) {
                    n = self.extend(&n, c);
                    queue.push(c);
                }
            }
        }
        n
    }

    pub fn is_normalized_by(&self, s: &Sub, acting: &[u32]) -> bool {
        s.gens
            .iter()
            .all(|&y| acting.iter().all(|&a| s.contains(self.conj(y, a))))
    }

    /// `[A, B]`: normal closure in `⟨A, B⟩` of the generator commutators.
    pub fn commutator(&self, a: &Sub, b: &Sub) -> Sub {
        let comms: Vec<u32> = a
            .gens
            .iter()
            .flat_map(|&x| b.gens.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.comm(x, y))
            .collect();
        let seed = self.generate(&comms);
        let acting: Vec<u32> = a.gens.iter().chain(b.gens.iter()).copied().collect();
        self.normal_closure(&seed, &acting)
    }

    /// Elements of `within` commuting with every element of `elems`.
    pub fn centralizer(&self, within: &Sub, elems: &[u32]) -> Sub {
        let mut bits = self.empty_bits();
        for g in within.elements() {
            if elems.iter().all(|&x| self.mul(g, x) == self.mul(x, g)) {
                bits.insert(g as usize);
            }
        }
        self.sub_from_bits(bits)
    }

    /// `{ g ∈ within : [a, g] ∈ B for every generator a of A }`.
    pub fn section_centralizer(&self, within: &Sub, a: &Sub, b: &Sub) -> Sub {
        let mut bits = self.empty_bits();
        for g in within.elements() {
            if a.gens.iter().all(|&x| b.contains(self.comm(x, g))) {
                bits.insert(g as usize);
            }
        }
        self.sub_from_bits(bits)
    }

    pub fn normalizer(&self, within: &Sub, s: &Sub) -> Sub {
        let mut bits = self.empty_bits();
        for g in within.elements() {
            if s.gens.iter().all(|&y| s.contains(self.conj(y, g))) {
                bits.insert(g as usize);
            }
        }
        self.sub_from_bits(bits)
    }

    pub fn center(&self, of: &Sub) -> Sub {
        self.centralizer(of, &of.gens)
    }

    /// Orbits of `within` under conjugation by `⟨acting⟩`, ordered by their
    /// smallest element.
    pub fn classes(&self, within: &Sub, acting: &[u32]) -> Vec<Vec<u32>> {
        let mut seen = self.empty_bits();
        let mut out = Vec::new();
        for x in within.elements() {
            if seen.contains(x as usize) {
                continue;
            }
            seen.insert(x as usize);
            let mut class = vec![x];
            let mut head = 0;
            while head < class.len() {
                let y = class[head];
                head += 1;
                for &a in acting {
                    let z = self.conj(y, a);
                    if !seen.contains(z as usize) {
                        seen.insert(z as usize);
                        class.push(z);
                    }
                }
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }

    /// Representatives of the right cosets `N g` of `n` in `within`.
    pub fn right_transversal(&self, within: &Sub, n: &Sub) -> Vec<u32> {
        let n_elems = n.element_vec();
        let mut seen = self.empty_bits();
        let mut reps = Vec::with_capacity(within.order / n.order.max(1));
        for g in within.elements() {
            if seen.contains(g as usize) {
                continue;
            }
            reps.push(g);
            for &e in &n_elems {
                seen.insert(self.mul(e, g) as usize);
            }
        }
        reps
    }

    pub fn conjugate_sub(&self, s: &Sub, g: u32) -> Sub {
        let mut bits = self.empty_bits();
        for e in s.elements() {
            bits.insert(self.conj(e, g) as usize);
        }
        Sub {
            bits,
            gens: s.gens.iter().map(|&y| self.conj(y, g)).collect(),
            order: s.order,
        }
    }

    /// Maps a permutation group's generators into this group's index space.
    pub fn indices_of(&self, perms: &[Permutation]) -> Option<Vec<u32>> {
        perms.iter().map(|p| self.index_of(p)).collect()
    }

    /// `|A B|` for subgroups `A`, `B`.
    pub fn product_size(&self, a: &Sub, b: &Sub) -> usize {
        let mut meet = a.bits.clone();
        meet.intersect_with(&b.bits);
        a.order * b.order / meet.count_ones(..)
    }

    /// Is every element of `a` commuting with every element of `b`?
    pub fn commute(&self, a: &Sub, b: &Sub) -> bool {
        a.gens
            .iter()
            .all(|&x| b.gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }
}
