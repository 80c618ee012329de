use std::sync::OnceLock;

use jicert_core::group::{direct_product, quotient, subgroup_generated, wreath_product};
use jicert_core::library::{cyclic, named_group, quaternion, symmetric};
use jicert_core::{Mode, PermGroup};

use super::oracle::Oracle;

pub struct Entry {
    pub name: &'static str,
    pub group: PermGroup,
    pub oracle: OnceLock<Oracle>,
}

impl Entry {
    pub fn oracle(&self) -> &Oracle {
        self.oracle.get_or_init(|| Oracle::new(&self.group))
    }
}

const NAMED: &[&str] = &[
    "C1", "C2", "C6", "C12", "C2xC2", "C2xC2xC2", "C3xC3", "C4xC2", "D8", "D10", "D12", "D16", "Q8", "S3", "S4", "S5",
    "S6", "A4", "A5", "A6", "SL(2,3)", "SL(2,5)", "PSL(2,7)", "C2xS3", "S3xS3", "A4xC3", "Q8xC3", "D8xC2", "A5xC2",
];

/// `Q8 ∘ C4`: `Q8 × C4` with the two central involutions identified.
fn pauli() -> PermGroup {
    let q = quaternion(Mode::Dense).unwrap();
    let c = cyclic(4, Mode::Dense).unwrap();
    let d = direct_product(&q, &c).unwrap();
    let z = q.generators()[0].pow(2).shifted(0, d.degree());
    let c2 = c.generators()[0].pow(2).shifted(q.degree(), d.degree());
    let n = subgroup_generated(&d, &[z.compose(&c2)]).unwrap();
    quotient(&d, &n).unwrap().0
}

fn wreath(base: PermGroup, top: PermGroup) -> PermGroup {
    wreath_product(&base, &top).unwrap()
}

/// The fixed test corpus: 32 groups, all dense.
pub fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut groups: Vec<(&'static str, PermGroup)> = NAMED
            .iter()
            .map(|&n| (n, named_group(n, Mode::Dense).unwrap()))
            .collect();
        groups.push(("Q8oC4", pauli()));
        let s3 = || symmetric(3, Mode::Dense).unwrap();
        groups.push(("S3wrS3", wreath(s3(), s3())));
        groups.push((
            "C2wrS5",
            wreath(cyclic(2, Mode::Dense).unwrap(), symmetric(5, Mode::Dense).unwrap()),
        ));
        groups
            .into_iter()
            .map(|(name, group)| Entry {
                name,
                group,
                oracle: OnceLock::new(),
            })
            .collect()
    })
}
