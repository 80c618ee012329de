//! Finite prefixes `G_0 ← G_1 ← … ← G_N` of inverse systems, their JSON
//! file format, and iterated wreath-product towers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{subgroup_generated, wreath_product, Mode, PermGroup, DEFAULT_DENSE_BOUND};
use crate::hom::GroupHom;
use crate::library::named_group;
use crate::perm::Permutation;

/// On-disk form of one stage. Permutations are 0-based image arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageFile {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_generators: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0_generators: Option<Vec<Vec<u32>>>,
    /// Images in the previous stage of each generator (stages 1..N).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_images: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    pub stages: Vec<StageFile>,
}

fn default_mode() -> Mode {
    Mode::Dense
}

#[derive(Debug, Clone)]
pub struct Stage {
    group: PermGroup,
    a_mark: Option<PermGroup>,
    b0: Option<PermGroup>,
    map: Option<GroupHom>,
    kernel: Option<PermGroup>,
}

impl Stage {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn a_mark(&self) -> Option<&PermGroup> {
        self.a_mark.as_ref()
    }

    /// The map to the previous stage; `None` at stage 0.
    pub fn map(&self) -> Option<&GroupHom> {
        self.map.as_ref()
    }
}

/// A validated prefix. Every connecting map is a surjective homomorphism,
/// every A-mark is normal, and kernels are recomputed.
#[derive(Debug, Clone)]
pub struct SystemPrefix {
    mode: Mode,
    stages: Vec<Stage>,
}

impl SystemPrefix {
    /// Assembles a prefix from groups, the generator images of each map
    /// `G_n → G_{n-1}` (one list per stage from 1 on), optional A-marks and
    /// an optional `B_0`.
    pub fn from_parts(
        groups: Vec<PermGroup>,
        map_images: Vec<Vec<Permutation>>,
        a_marks: Vec<Option<PermGroup>>,
        b0: Option<PermGroup>,
    ) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Malformed("empty prefix".into()));
        }
        if map_images.len() + 1 != groups.len() || a_marks.len() != groups.len() {
            return Err(Error::Malformed(
                "stage count mismatch between groups, maps and marks".into(),
            ));
        }
        let mode = groups[0].mode();
        let mut stages: Vec<Stage> = Vec::with_capacity(groups.len());
        for (n, (group, a_mark)) in groups.into_iter().zip(a_marks).enumerate() {
            let (map, kernel) = if n == 0 {
                (None, None)
            } else {
                let target = stages[n - 1].group.clone();
                let hom =
                    GroupHom::new(group.clone(), target, map_images[n - 1].clone()).map_err(|e| stage_error(n, e))?;
                if !hom.is_surjective() {
                    return Err(stage_error(n, Error::NotSurjective));
                }
                let kernel = hom.kernel()?;
                (Some(hom), Some(kernel))
            };
            if let Some(a) = &a_mark {
                check_normal(&group, a, n, "A-mark")?;
            }
            stages.push(Stage {
                group,
                a_mark,
                b0: None,
                map,
                kernel,
            });
        }
        if let Some(b) = b0 {
            check_normal(&stages[0].group, &b, 0, "B_0")?;
            stages[0].b0 = Some(b);
        }
        Ok(SystemPrefix { mode, stages })
    }

    /// Same groups and maps, new marks.
    pub fn with_marks(&self, a_marks: Vec<Option<PermGroup>>, b0: Option<PermGroup>) -> Result<Self> {
        if a_marks.len() != self.stages.len() {
            return Err(Error::Malformed("one A-mark slot per stage expected".into()));
        }
        let mut out = self.clone();
        for (n, (stage, a)) in out.stages.iter_mut().zip(a_marks).enumerate() {
            if let Some(a) = &a {
                check_normal(&stage.group, a, n, "A-mark")?;
            }
            stage.a_mark = a;
        }
        if let Some(b) = &b0 {
            check_normal(&out.stages[0].group, b, 0, "B_0")?;
        }
        out.stages[0].b0 = b0;
        Ok(out)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn group(&self, n: usize) -> &PermGroup {
        &self.stages[n].group
    }

    pub fn a_mark(&self, n: usize) -> Option<&PermGroup> {
        self.stages[n].a_mark.as_ref()
    }

    pub fn has_marks(&self) -> bool {
        self.stages.iter().all(|s| s.a_mark.is_some())
    }

    /// `B_n`: the supplied `B_0` at stage 0, the recomputed kernel of
    /// `G_n → G_{n-1}` afterwards.
    pub fn b(&self, n: usize) -> Option<&PermGroup> {
        if n == 0 {
            self.stages[0].b0.as_ref()
        } else {
            self.stages[n].kernel.as_ref()
        }
    }

    /// `ρ_n: G_{n+1} → G_n`.
    pub fn rho(&self, n: usize) -> Option<&GroupHom> {
        self.stages.get(n + 1).and_then(|s| s.map.as_ref())
    }

    /// `P_n = ρ_n(A_{n+1})`, when stage `n + 1` exists and is marked.
    pub fn p(&self, n: usize) -> Result<Option<PermGroup>> {
        match (self.rho(n), self.stages.get(n + 1).and_then(|s| s.a_mark.as_ref())) {
            (Some(rho), Some(a)) => rho.image(a).map(Some),
            _ => Ok(None),
        }
    }

    pub fn to_file(&self) -> SystemFile {
        let gens = |g: &PermGroup| g.generators().iter().map(|p| p.images().to_vec()).collect();
        SystemFile {
            mode: self.mode,
            stages: self
                .stages
                .iter()
                .map(|s| StageFile {
                    degree: s.group.degree(),
                    generators: gens(&s.group),
                    a_generators: s.a_mark.as_ref().map(gens),
                    b0_generators: s.b0.as_ref().map(gens),
                    map_images: s
                        .map
                        .as_ref()
                        .map(|m| m.generator_images().iter().map(|p| p.images().to_vec()).collect()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_file()).expect("prefix serializes");
        out.push('\n');
        out
    }
}

fn stage_error(n: usize, e: Error) -> Error {
    match e {
        Error::Malformed(m) => Error::Malformed(format!("stage {n}: {m}")),
        Error::NotHomomorphism(m) => Error::NotHomomorphism(format!("stage {n}: {m}")),
        Error::NotNormal(m) => Error::NotNormal(format!("stage {n}: {m}")),
        Error::NotASubgroup(m) => Error::NotASubgroup(format!("stage {n}: {m}")),
        Error::InvalidPermutation(m) => Error::InvalidPermutation(format!("stage {n}: {m}")),
        Error::NotSurjective => Error::Malformed(format!("stage {n}: connecting map is not surjective")),
        other => other,
    }
}

fn check_normal(g: &PermGroup, x: &PermGroup, n: usize, what: &str) -> Result<()> {
    if !x.is_subgroup_of(g) {
        return Err(Error::NotASubgroup(format!(
            "stage {n}: {what} is not contained in the group"
        )));
    }
    if !x.is_normal_in(g) {
        return Err(Error::NotNormal(format!("stage {n}: {what} is not normal")));
    }
    Ok(())
}

fn perms(list: &[Vec<u32>], degree: usize, n: usize, what: &str) -> Result<Vec<Permutation>> {
    list.iter()
        .map(|images| {
            let p = Permutation::from_images(images.clone()).map_err(|e| stage_error(n, e))?;
            if p.degree() != degree {
                return Err(Error::Malformed(format!(
                    "stage {n}: {what} has degree {} instead of {degree}",
                    p.degree()
                )));
            }
            Ok(p)
        })
        .collect()
}

/// Parses and validates a prefix file.
pub fn parse_system(text: &str, dense_bound: usize) -> Result<SystemPrefix> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    prefix_from_file(&file, dense_bound)
}

pub fn prefix_from_file(file: &SystemFile, dense_bound: usize) -> Result<SystemPrefix> {
    if file.stages.is_empty() {
        return Err(Error::Malformed("empty prefix".into()));
    }
    let mut groups = Vec::new();
    let mut maps = Vec::new();
    let mut marks = Vec::new();
    let mut b0 = None;
    for (n, s) in file.stages.iter().enumerate() {
        let gens = perms(&s.generators, s.degree, n, "generator")?;
        let group =
            PermGroup::with_dense_bound(s.degree, gens, file.mode, dense_bound).map_err(|e| stage_error(n, e))?;
        let sub = |list: &Vec<Vec<u32>>, what: &str| -> Result<PermGroup> {
            let elems = perms(list, s.degree, n, what)?;
            subgroup_generated(&group, &elems).map_err(|e| stage_error(n, e))
        };
        marks.push(
            s.a_generators
                .as_ref()
                .map(|l| sub(l, "A-mark generator"))
                .transpose()?,
        );
        match (&s.b0_generators, n) {
            (Some(l), 0) => b0 = Some(sub(l, "B_0 generator")?),
            (Some(_), _) => {
                return Err(Error::Malformed(format!(
                    "stage {n}: b0_generators is only allowed at stage 0; later B_n are recomputed kernels"
                )))
            }
            _ => {}
        }
        match (&s.map_images, n) {
            (None, 0) => {}
            (Some(_), 0) => return Err(Error::Malformed("stage 0: has no previous stage to map to".into())),
            (None, _) => return Err(Error::Malformed(format!("stage {n}: map_images missing"))),
            (Some(images), _) => {
                let prev_degree = file.stages[n - 1].degree;
                maps.push(perms(images, prev_degree, n, "map image")?);
            }
        }
        groups.push(group);
    }
    SystemPrefix::from_parts(groups, maps, marks, b0)
}

/// One level of a wreath tower: a named group in its natural action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    pub levels: Vec<String>,
    pub depth: usize,
}

impl std::str::FromStr for TowerSpec {
    type Err = Error;

    /// `NAME[,NAME...]@DEPTH`, e.g. `S3@2` or `C2,S3@3`. Level `n` uses the
    /// `n`-th name, the last one repeating.
    fn from_str(s: &str) -> Result<Self> {
        let (names, depth) = s
            .rsplit_once('@')
            .ok_or_else(|| Error::Malformed(format!("tower spec {s:?} lacks @DEPTH")))?;
        let depth: usize = depth
            .parse()
            .map_err(|_| Error::Malformed(format!("bad depth in {s:?}")))?;
        let levels: Vec<String> = names.split(',').map(|n| n.trim().to_string()).collect();
        if depth == 0 || levels.iter().any(|n| n.is_empty()) {
            return Err(Error::Malformed(format!("tower spec {s:?} needs names and depth ≥ 1")));
        }
        Ok(TowerSpec { levels, depth })
    }
}

/// Iterated wreath products `W_0 = L_0`, `W_n = L_n wr W_{n-1}`, where `L_n`
/// is the level group. The map `W_n → W_{n-1}` kills the new base layer.
pub fn build_wreath_tower(spec: &TowerSpec, mode: Mode, dense_bound: usize) -> Result<SystemPrefix> {
    let level = |n: usize| -> Result<PermGroup> {
        let name = &spec.levels[n.min(spec.levels.len() - 1)];
        let g = named_group(name, mode)?;
        PermGroup::with_dense_bound(g.degree(), g.generators().to_vec(), mode, dense_bound)
    };
    let mut groups = vec![level(0)?];
    let mut maps = Vec::new();
    for n in 1..spec.depth {
        let top = groups.last().unwrap().clone();
        let base = level(n)?;
        let w = wreath_product(&base, &top)?;
        // wreath generators: top generators first, then base copies
        let mut images: Vec<Permutation> = top.generators().to_vec();
        images.resize(w.generators().len(), top.identity());
        groups.push(w);
        maps.push(images);
    }
    let marks = vec![None; groups.len()];
    SystemPrefix::from_parts(groups, maps, marks, None)
}

/// Convenience: default dense bound.
pub fn build_wreath_tower_default(spec: &str, mode: Mode) -> Result<SystemPrefix> {
    build_wreath_tower(&spec.parse()?, mode, DEFAULT_DENSE_BOUND)
}
