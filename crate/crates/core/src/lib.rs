//! Finite permutation group kernel and a certifier for finite prefixes of
//! inverse systems of finite groups.

pub(crate) mod chain;
pub(crate) mod dense;
pub(crate) mod subgroups;

pub mod centprod;
pub mod certifier;
pub mod class_spec;
pub mod error;
pub mod group;
pub mod hom;
pub mod library;
pub mod normal;
pub mod par;
pub mod perm;
pub mod report;
pub mod simple;
pub mod system;

pub use error::{Error, Result};
pub use group::{Mode, PermGroup, DEFAULT_DENSE_BOUND};
pub use hom::GroupHom;
pub use perm::Permutation;
pub use simple::SimpleTypeId;
