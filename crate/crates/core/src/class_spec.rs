//! Classes of finite simple groups, the Schur-multiplier table, and
//! counting class members among composition factors.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Mode, PermGroup};
use crate::normal::{composition_factors, normal_lattice};
use crate::simple::SimpleTypeId;

/// Largest simple-group order covered by the builtin table.
pub const BUILTIN_ORDER_BOUND: u64 = 1_000_000;

const BUILTIN_TABLE: &str = include_str!("../data/schur_multipliers.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchurEntry {
    pub name: String,
    pub order: u64,
    pub multiplier: u64,
}

#[derive(Debug, Clone)]
pub struct SchurTable {
    entries: Vec<SchurEntry>,
    types: Vec<SimpleTypeId>,
    order_bound: u64,
}

impl SchurTable {
    /// Parses `name<TAB>order<TAB>multiplier` lines; `#` starts a comment.
    pub fn parse(text: &str, order_bound: u64) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let syntax = |column: usize, message: &str| Error::Syntax {
                line: i + 1,
                column,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(syntax(1, "expected three tab-separated fields"));
            }
            let order: u64 = fields[1]
                .parse()
                .map_err(|_| syntax(fields[0].len() + 2, "order is not a positive integer"))?;
            let multiplier: u64 = fields[2].parse().map_err(|_| {
                syntax(
                    fields[0].len() + fields[1].len() + 3,
                    "multiplier is not a positive integer",
                )
            })?;
            if order == 0 || multiplier == 0 {
                return Err(syntax(1, "orders must be positive"));
            }
            if order > order_bound {
                return Err(syntax(1, "entry exceeds the table's order bound"));
            }
            entries.push(SchurEntry {
                name: fields[0].trim().to_string(),
                order,
                multiplier,
            });
        }
        let mut names = BTreeSet::new();
        let mut per_order: HashMap<u64, usize> = HashMap::new();
        for e in &entries {
            if !names.insert(e.name.clone()) {
                return Err(Error::Malformed(format!("duplicate entry {}", e.name)));
            }
            *per_order.entry(e.order).or_default() += 1;
        }
        let types = entries
            .iter()
            .map(|e| SimpleTypeId::for_table_row(&e.name, e.order, per_order[&e.order] > 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(SchurTable {
            entries,
            types,
            order_bound,
        })
    }

    /// The shipped table. Parsed once; a parse failure is a build defect.
    pub fn builtin() -> &'static SchurTable {
        static TABLE: OnceLock<SchurTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            SchurTable::parse(BUILTIN_TABLE, BUILTIN_ORDER_BOUND).expect("shipped Schur table is valid")
        })
    }

    pub fn entries(&self) -> &[SchurEntry] {
        &self.entries
    }

    /// Types in table order, parallel to [`entries`](Self::entries).
    pub fn types(&self) -> &[SimpleTypeId] {
        &self.types
    }

    pub fn order_bound(&self) -> u64 {
        self.order_bound
    }

    /// Multiplier order of a nonabelian type, if the table covers it.
    pub fn multiplier(&self, t: &SimpleTypeId) -> Option<u64> {
        self.types
            .iter()
            .position(|u| u == t)
            .map(|i| self.entries[i].multiplier)
    }
}

/// Sanity check for the table's order-60 entry: `SL(2,5)` is a perfect
/// central extension of the order-60 simple group with centre of order 2,
/// so the multiplier order recorded for that group must be even.
pub fn spot_check_order_60(table: &SchurTable) -> Result<()> {
    let g = crate::library::special_linear_2(5, Mode::Dense)?;
    let ext = perfect_central_extension(&g)?;
    if ext.quotient_order != 60 || !ext.quotient_simple {
        return Err(Error::Internal(
            "SL(2,5) mod its centre is not simple of order 60".into(),
        ));
    }
    let a5 = SimpleTypeId::named("A5")?;
    match table.multiplier(&a5) {
        Some(m) if m % ext.center_order as u64 == 0 => Ok(()),
        Some(m) => Err(Error::Malformed(format!(
            "A5 multiplier {m} is not divisible by {}, the centre of a known perfect central extension",
            ext.center_order
        ))),
        None => Err(Error::Malformed("table has no entry for A5".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralExtensionCheck {
    pub center_order: usize,
    pub quotient_order: usize,
    pub quotient_simple: bool,
}

/// Confirms `g` is perfect, and reports its centre and whether `g/Z(g)` is
/// simple.
pub fn perfect_central_extension(g: &PermGroup) -> Result<CentralExtensionCheck> {
    g.require_dense("perfect central extension check")?;
    let ctx = g.dense_ctx()?;
    let whole = ctx.whole();
    if ctx.commutator(&whole, &whole) != whole {
        return Err(Error::Precondition("group is not perfect".into()));
    }
    let z = ctx.center(&whole);
    let lattice = normal_lattice(&ctx, &whole);
    // normal subgroups of g/Z correspond to those of g above Z
    let above = lattice.iter().filter(|n| z.le(n)).count();
    Ok(CentralExtensionCheck {
        center_order: z.order,
        quotient_order: whole.order / z.order,
        quotient_simple: above == 2,
    })
}

/// The class of simple groups of the closure condition: explicit members,
/// with the primes of the cyclic members derived.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SimpleClass {
    members: BTreeSet<SimpleTypeId>,
}

impl SimpleClass {
    pub fn new(members: impl IntoIterator<Item = SimpleTypeId>) -> Self {
        SimpleClass {
            members: members.into_iter().collect(),
        }
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        Ok(Self::new(
            names
                .iter()
                .map(|n| SimpleTypeId::named(n))
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn members(&self) -> &BTreeSet<SimpleTypeId> {
        &self.members
    }

    pub fn primes(&self) -> BTreeSet<u64> {
        self.members.iter().filter_map(|t| t.prime()).collect()
    }

    pub fn contains(&self, t: &SimpleTypeId) -> bool {
        self.members.contains(t)
    }

    pub fn insert(&mut self, t: SimpleTypeId) {
        self.members.insert(t);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MissingMember {
    pub prime: u64,
    pub name: String,
    pub multiplier: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchurClosureVerdict {
    pub pass: bool,
    /// Conclusions only cover simple groups up to this order.
    pub order_bound: u64,
    pub missing: Vec<MissingMember>,
}

/// For each prime `p` with `C_p` in the class, every tabulated nonabelian
/// simple group whose multiplier order is divisible by `p` must be a member.
pub fn schur_closure_check(class: &SimpleClass, table: &SchurTable) -> SchurClosureVerdict {
    let mut missing = Vec::new();
    for p in class.primes() {
        for (entry, t) in table.entries().iter().zip(table.types()) {
            if entry.multiplier % p == 0 && !class.contains(t) {
                missing.push(MissingMember {
                    prime: p,
                    name: entry.name.clone(),
                    multiplier: entry.multiplier,
                });
            }
        }
    }
    SchurClosureVerdict {
        pass: missing.is_empty(),
        order_bound: table.order_bound(),
        missing,
    }
}

/// Number of composition factors of `g` (with multiplicity) in `class`.
pub fn count_class_factors(g: &PermGroup, class: &SimpleClass) -> Result<usize> {
    let factors = composition_factors(g)?;
    Ok(factors
        .0
        .iter()
        .filter(|(t, _)| class.contains(t))
        .map(|(_, k)| k)
        .sum())
}

/// Per-stage class-factor counts over a prefix. A strictly increasing
/// sequence is finite evidence only; the unbounded growth the closure
/// condition asks for cannot be seen on a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassFactorSequence {
    pub counts: Vec<usize>,
    pub strictly_increasing: bool,
}

pub fn class_factor_sequence(stages: &[PermGroup], class: &SimpleClass) -> Result<ClassFactorSequence> {
    let counts = stages
        .iter()
        .map(|g| count_class_factors(g, class))
        .collect::<Result<Vec<_>>>()?;
    let strictly_increasing = counts.windows(2).all(|w| w[0] < w[1]);
    Ok(ClassFactorSequence {
        counts,
        strictly_increasing,
    })
}
