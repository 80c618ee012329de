//! Labels for finite simple groups.
//!
//! A simple group is identified by its order plus, where the order alone is
//! ambiguous, the multiset of its element orders. Names come from the
//! shipped Schur-multiplier table.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::class_spec::SchurTable;
use crate::error::{Error, Result};
use crate::group::is_prime;

/// What distinguishes a simple type among groups of the same order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fingerprint {
    /// Cyclic of prime order.
    Prime,
    /// The only nonabelian simple group of its order.
    Unique,
    /// Sorted `(element order, count)` pairs.
    ElementOrders(Vec<(u64, u64)>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimpleTypeId {
    name: String,
    order: u64,
    fingerprint: Fingerprint,
}

impl PartialEq for SimpleTypeId {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.fingerprint == other.fingerprint
    }
}

impl Eq for SimpleTypeId {}

impl Hash for SimpleTypeId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.fingerprint.hash(state);
    }
}

impl PartialOrd for SimpleTypeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimpleTypeId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, &self.fingerprint).cmp(&(other.order, &other.fingerprint))
    }
}

impl fmt::Display for SimpleTypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Element-order statistics for the orders where two simple groups share an
/// order.
const SAME_ORDER_FINGERPRINTS: &[(&str, &[(u64, u64)])] = &[
    (
        "A8",
        &[
            (1, 1),
            (2, 315),
            (3, 1232),
            (4, 3780),
            (5, 1344),
            (6, 5040),
            (7, 5760),
            (15, 2688),
        ],
    ),
    (
        "PSL(3,4)",
        &[(1, 1), (2, 315), (3, 2240), (4, 3780), (5, 8064), (7, 5760)],
    ),
];

impl SimpleTypeId {
    pub fn cyclic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(SimpleTypeId {
            name: format!("C{p}"),
            order: p,
            fingerprint: Fingerprint::Prime,
        })
    }

    /// Looks up `Cp` or a name from the builtin Schur table.
    pub fn named(name: &str) -> Result<Self> {
        if let Some(p) = name.strip_prefix('C').and_then(|d| d.parse::<u64>().ok()) {
            return Self::cyclic(p);
        }
        let table = SchurTable::builtin();
        table
            .types()
            .iter()
            .find(|t| t.name == name)
            .cloned()
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    /// Type for a table row; `shared_order` says whether another row has the
    /// same order.
    pub(crate) fn for_table_row(name: &str, order: u64, shared_order: bool) -> Result<Self> {
        let fingerprint = if shared_order {
            let (_, orders) = SAME_ORDER_FINGERPRINTS
                .iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| {
                    Error::Malformed(format!(
                        "{name} shares order {order} with another entry but has no element-order fingerprint"
                    ))
                })?;
            Fingerprint::ElementOrders(orders.to_vec())
        } else {
            Fingerprint::Unique
        };
        Ok(SimpleTypeId {
            name: name.to_string(),
            order,
            fingerprint,
        })
    }

    /// Labels a simple group of the given order. `element_orders` is only
    /// evaluated when the order does not settle the type.
    pub(crate) fn identify(order: u64, element_orders: impl FnOnce() -> Vec<(u64, u64)>) -> Self {
        if is_prime(order) {
            return Self::cyclic(order).expect("prime order");
        }
        let same_order: Vec<&SimpleTypeId> = SchurTable::builtin()
            .types()
            .iter()
            .filter(|t| t.order == order)
            .collect();
        if let [only] = same_order.as_slice() {
            return (*only).clone();
        }
        let fingerprint = Fingerprint::ElementOrders(element_orders());
        same_order
            .into_iter()
            .find(|t| t.fingerprint == fingerprint)
            .cloned()
            .unwrap_or_else(|| SimpleTypeId {
                name: format!("Simple[{order}]"),
                order,
                fingerprint,
            })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn is_abelian(&self) -> bool {
        self.fingerprint == Fingerprint::Prime
    }

    /// `p` when this is `C_p`.
    pub fn prime(&self) -> Option<u64> {
        self.is_abelian().then_some(self.order)
    }
}
