//! Stabilizer chains built by the incremental Schreier–Sims algorithm.
//!
//! The base is always complete (every point of the domain appears), with an
//! optional caller-chosen prefix. A complete base keeps sifting exact, and a
//! prefix lets callers read off pointwise stabilizers of a chosen point set
//! as a single level of the chain.

use crate::perm::Permutation;

#[derive(Debug, Clone)]
struct Level {
    point: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    // transversal[x] = u with point^u = x, for x in the orbit
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: u32, gens: Vec<Permutation>, degree: usize) -> Self {
        let mut level = Level {
            point,
            gens,
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        transversal[self.point as usize] = Some(Permutation::identity(degree));
        let mut orbit = vec![self.point];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for s in &self.gens {
                let y = s.apply(x);
                if transversal[y as usize].is_none() {
                    let u = transversal[x as usize].as_ref().unwrap().compose(s);
                    transversal[y as usize] = Some(u);
                    orbit.push(y);
                }
            }
        }
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[u32]) -> Self {
        let mut base: Vec<u32> = Vec::with_capacity(degree);
        let mut used = vec![false; degree];
        for &b in prefix.iter().chain((0..degree as u32).collect::<Vec<_>>().iter()) {
            if !used[b as usize] {
                used[b as usize] = true;
                base.push(b);
            }
        }
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let levels = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let fixing: Vec<Permutation> = gens
                    .iter()
                    .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                    .cloned()
                    .collect();
                Level::new(b, fixing, degree)
            })
            .collect();
        let mut chain = StabChain { degree, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let depth = self.levels.len();
        let mut i = depth as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut jump: Option<usize> = None;
            'scan: for bi in 0..self.levels[li].orbit.len() {
                let beta = self.levels[li].orbit[bi];
                for gi in 0..self.levels[li].gens.len() {
                    let level = &self.levels[li];
                    let gen = &level.gens[gi];
                    let image = gen.apply(beta);
                    let u1 = level.transversal[beta as usize].as_ref().unwrap();
                    let u2 = level.transversal[image as usize].as_ref().unwrap();
                    let schreier = u1.compose(gen).compose(&u2.inverse());
                    let (residue, dropped) = self.strip(schreier, li + 1);
                    if dropped < depth {
                        for l in li + 1..=dropped {
                            self.levels[l].gens.push(residue.clone());
                            self.levels[l].rebuild_orbit(self.degree);
                        }
                        jump = Some(dropped);
                        break 'scan;
                    }
                    debug_assert!(residue.is_identity());
                }
            }
            match jump {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` starting at level `from`. Returns the residue and the level
    /// at which sifting stopped (`depth` when it ran to completion).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(level.point);
            match &level.transversal[x as usize] {
                Some(u) => {
                    if x != level.point {
                        g = g.compose(&u.inverse());
                    }
                }
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, stop) = self.strip(g.clone(), 0);
        stop == self.levels.len() && residue.is_identity()
    }

    /// Strong generators of the pointwise stabilizer of the first `depth`
    /// base points.
    pub fn stabilizer_gens(&self, depth: usize) -> Vec<Permutation> {
        self.levels.get(depth).map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// Sifts the partial element `g` through the first `depth` levels only.
    /// On success returns the group element `w` that agrees with `g` on the
    /// first `depth` base points (and hence on every point those levels
    /// control).
    pub fn lift_prefix(&self, g: &Permutation, depth: usize) -> Option<Permutation> {
        let mut residue = g.clone();
        let mut word = Permutation::identity(self.degree);
        for level in self.levels.iter().take(depth) {
            let x = residue.apply(level.point);
            let u = level.transversal[x as usize].as_ref()?;
            residue = residue.compose(&u.inverse());
            word = u.compose(&word);
        }
        Some(word)
    }
}
