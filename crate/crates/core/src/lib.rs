//! Exact enumeration of assembly trees of graphs.
//!
//! An assembly tree records how a graph is put together from its vertices:
//! leaves are the single vertices, every internal node is the union of its
//! (at least two) children, and the root is the whole vertex set. Gluing
//! rules restrict which merges are allowed. A time-dependent assembly tree
//! additionally stamps every node with the step at which it was formed.
//!
//! The crate counts these objects three independent ways:
//!
//! * [`assembly`] enumerates and counts trees directly on a [`graph::Graph`];
//! * [`formulas`] evaluates closed forms and recursions for the star, path,
//!   cycle and complete graph families;
//! * [`series`] rebuilds the matching generating functions over exact
//!   rationals and extracts their coefficients.
//!
//! ```
//! use asmtree::{assembly::{count_trees, GluingRule}, formulas, graph::Graph};
//!
//! let k3 = Graph::complete(3).unwrap();
//! assert_eq!(count_trees(&k3, GluingRule::Edge).unwrap(), 3u32.into());
//! assert_eq!(count_trees(&k3, GluingRule::Connected).unwrap(), formulas::connected_complete(3).unwrap());
//! ```

pub mod assembly;
pub mod bfile;
pub mod combinat;
mod error;
pub mod formulas;
pub mod graph;
pub mod series;

pub use combinat::Natural;
pub use error::{Error, Result};
