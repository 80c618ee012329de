//! Homomorphisms between permutation groups, given by generator images.
//!
//! Dense homomorphisms are validated exhaustively: the images are propagated
//! along a spanning tree of the source Cayley graph and every edge is
//! checked. Chain-mode homomorphisms are validated through the graph group
//! `⟨(s, φ(s))⟩` on the disjoint union of both domains: the generator map
//! extends to a homomorphism exactly when that group has the same order as
//! the source.

use std::sync::{Arc, OnceLock};

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::group::{Mode, PermGroup};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct GroupHom {
    source: PermGroup,
    target: PermGroup,
    images: Vec<Permutation>,
    dense_map: OnceLock<Arc<Vec<u32>>>,
    graph_target_first: OnceLock<Arc<StabChain>>,
    graph_source_first: OnceLock<Arc<StabChain>>,
}

impl GroupHom {
    pub fn new(source: PermGroup, target: PermGroup, images: Vec<Permutation>) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::NotHomomorphism(format!(
                "{} generator images for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        for img in &images {
            if img.degree() != target.degree() {
                return Err(Error::DegreeMismatch {
                    expected: target.degree(),
                    found: img.degree(),
                });
            }
            if !target.contains(img) {
                return Err(Error::NotHomomorphism(format!(
                    "image {img} is not in the target group"
                )));
            }
        }
        let hom = GroupHom {
            source,
            target,
            images,
            dense_map: OnceLock::new(),
            graph_target_first: OnceLock::new(),
            graph_source_first: OnceLock::new(),
        };
        if hom.is_dense() {
            let map = hom.build_dense_map()?;
            let _ = hom.dense_map.set(Arc::new(map));
        } else {
            let graph = hom.graph_chain(true);
            if graph.order() != hom.source.order() {
                return Err(Error::NotHomomorphism(
                    "graph group is larger than the source: the map is not well defined".into(),
                ));
            }
        }
        Ok(hom)
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    pub fn generator_images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn is_dense(&self) -> bool {
        self.source.mode() == Mode::Dense && self.target.mode() == Mode::Dense
    }

    fn build_dense_map(&self) -> Result<Vec<u32>> {
        let src = self.source.dense_ctx()?;
        let tgt = self.target.dense_ctx()?;
        let pairs: Vec<(u32, u32)> = self
            .source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(s, t)| (src.index_of(s).unwrap(), tgt.index_of(t).unwrap()))
            .collect();
        let mut map = vec![u32::MAX; src.len()];
        map[0] = tgt.identity();
        let mut queue = vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &(s, t) in &pairs {
                let y = src.mul(x, s);
                let expect = tgt.mul(map[x as usize], t);
                match map[y as usize] {
                    u32::MAX => {
                        map[y as usize] = expect;
                        queue.push(y);
                    }
                    got if got != expect => {
                        return Err(Error::NotHomomorphism(format!(
                            "element {} would map to both {} and {}",
                            src.element(y),
                            tgt.element(got),
                            tgt.element(expect)
                        )));
                    }
                    _ => {}
                }
            }
        }
        Ok(map)
    }

    fn embed(&self, src: Option<&Permutation>, tgt: Option<&Permutation>) -> Permutation {
        let ds = self.source.degree();
        let dt = self.target.degree();
        let mut images: Vec<u32> = (0..(ds + dt) as u32).collect();
        if let Some(s) = src {
            images[..ds].copy_from_slice(s.images());
        }
        if let Some(t) = tgt {
            for (j, &x) in t.images().iter().enumerate() {
                images[ds + j] = ds as u32 + x;
            }
        }
        Permutation::from_images(images).expect("block permutation")
    }

    fn split(&self, p: &Permutation) -> (Permutation, Permutation) {
        let ds = self.source.degree();
        let s = Permutation::from_images(p.images()[..ds].to_vec()).expect("source block");
        let t =
            Permutation::from_images(p.images()[ds..].iter().map(|&x| x - ds as u32).collect()).expect("target block");
        (s, t)
    }

    fn graph_chain(&self, target_first: bool) -> Arc<StabChain> {
        let cell = if target_first {
            &self.graph_target_first
        } else {
            &self.graph_source_first
        };
        cell.get_or_init(|| {
            let ds = self.source.degree();
            let dt = self.target.degree();
            let gens: Vec<Permutation> = self
                .source
                .generators()
                .iter()
                .zip(&self.images)
                .map(|(s, t)| self.embed(Some(s), Some(t)))
                .collect();
            let prefix: Vec<u32> = if target_first {
                (ds as u32..(ds + dt) as u32).collect()
            } else {
                (0..ds as u32).collect()
            };
            Arc::new(StabChain::with_base_prefix(ds + dt, &gens, &prefix))
        })
        .clone()
    }

    pub fn apply(&self, g: &Permutation) -> Result<Permutation> {
        if !self.source.contains(g) {
            return Err(Error::NotASubgroup(format!("{g} is not in the source")));
        }
        if let Some(map) = self.dense_map.get() {
            let src = self.source.dense_ctx()?;
            let tgt = self.target.dense_ctx()?;
            return Ok(tgt.element(map[src.index_of(g).unwrap() as usize]).clone());
        }
        let chain = self.graph_chain(false);
        let word = chain
            .lift_prefix(&self.embed(Some(g), None), self.source.degree())
            .ok_or_else(|| Error::Internal("source element failed to sift".into()))?;
        Ok(self.split(&word).1)
    }

    pub fn image(&self, h: &PermGroup) -> Result<PermGroup> {
        if !h.is_subgroup_of(&self.source) {
            return Err(Error::NotASubgroup("H is not contained in the source".into()));
        }
        let gens = h
            .generators()
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<Vec<_>>>()?;
        crate::group::subgroup_generated(&self.target, &gens)
    }

    pub fn image_of_source(&self) -> Result<PermGroup> {
        crate::group::subgroup_generated(&self.target, &self.images)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_of_source()
            .map(|im| im.order() == self.target.order())
            .unwrap_or(false)
    }

    pub fn kernel(&self) -> Result<PermGroup> {
        if let Some(map) = self.dense_map.get() {
            let src = self.source.dense_ctx()?;
            let mut bits = src.empty_bits();
            for (x, &y) in map.iter().enumerate() {
                if y == 0 {
                    bits.insert(x);
                }
            }
            return Ok(PermGroup::from_sub(&self.source, &src, &src.sub_from_bits(bits)));
        }
        let chain = self.graph_chain(true);
        let gens = chain
            .stabilizer_gens(self.target.degree())
            .iter()
            .map(|p| self.split(p).0)
            .collect();
        PermGroup::sibling(&self.source, self.source.degree(), gens)
    }

    /// `φ⁻¹(K)` for a subgroup `K` of the target.
    pub fn preimage(&self, k: &PermGroup) -> Result<PermGroup> {
        if !k.is_subgroup_of(&self.target) {
            return Err(Error::NotASubgroup("K is not contained in the target".into()));
        }
        if let Some(map) = self.dense_map.get() {
            let src = self.source.dense_ctx()?;
            let tgt = self.target.dense_ctx()?;
            let sk = self.target.sub_of(&tgt, k)?;
            let mut bits = src.empty_bits();
            for (x, &y) in map.iter().enumerate() {
                if sk.contains(y) {
                    bits.insert(x);
                }
            }
            return Ok(PermGroup::from_sub(&self.source, &src, &src.sub_from_bits(bits)));
        }
        let chain = self.graph_chain(true);
        let mut gens: Vec<Permutation> = chain
            .stabilizer_gens(self.target.degree())
            .iter()
            .map(|p| self.split(p).0)
            .collect();
        for y in k.generators() {
            let word = chain
                .lift_prefix(&self.embed(None, Some(y)), self.target.degree())
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "{y} is outside the image; chain-mode preimage needs K within the image"
                    ))
                })?;
            let (s, t) = self.split(&word);
            if &t != y {
                return Err(Error::Precondition(format!("{y} is outside the image")));
            }
            gens.push(s);
        }
        PermGroup::sibling(&self.source, self.source.degree(), gens)
    }
}
