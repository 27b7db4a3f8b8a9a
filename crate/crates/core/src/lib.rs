//! Transportation optimization on restricted network topologies.
//!
//! The crate covers four problem families, each with an exact or
//! near-exact polynomial algorithm and an independent brute-force
//! reference in [`oracles`]:
//!
//! - [`ovrp`]: relaxed open vehicle routing on a rooted tree (minimize the
//!   total walk length of up to `p` vehicles leaving a root depot).
//! - [`fuel`]: minimum initial fuel for a single vehicle doing a full
//!   depth-first traversal of a tree while collecting fuel at vertices.
//! - [`jeep`]: the desert-crossing jeep problem on fixed and equal
//!   subdivisions, threshold refinement, and three graph extensions.
//! - [`hampath`]: shortest Hamiltonian paths through the vertices of a
//!   simple polygon, plus the curve-restricted (weighted) variants.
//!
//! Vertices are 0-based everywhere in this crate.

pub mod fuel;
pub mod generate;
pub mod geometry;
pub mod hampath;
pub mod jeep;
pub mod num;
pub mod oracles;
pub mod ovrp;
pub mod segtree;
pub mod tree;

pub use fuel::{Engine, FuelError, FuelInstance, FuelSolution, ValueMode};
pub use geometry::Point;
pub use hampath::{CurveInstance, DistanceMatrix, HamPath, PolygonError, SimplePolygon, VisibilityMatrix};
pub use jeep::{JeepError, JeepGraph, JeepParams, SegmentPlan, Subdivision, TransferMode};
pub use ovrp::{OvrpError, OvrpInstance, OvrpSolution};
pub use segtree::MaxSegmentTree;
pub use tree::{RootedTree, TreeError};
