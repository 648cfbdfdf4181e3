//! Tree-partitions, torsos, edge sums and the decomposition of graphs that
//! exclude a `θ_{k+1}` immersion.

mod decompose;
mod edge_sum;
mod immersion;
mod partition;
mod recompose;

pub use decompose::{decompose, is_k_tight, potential, split_node, Decomposition};
pub use edge_sum::{edge_sum, EdgeSumSpec};
pub use immersion::{is_almost_bounded, theta_free, FreeCertificate, ImmersionWitness, ThetaCheck};
pub use partition::{Satellite, Torso, TreePartition};
pub use recompose::{recompose, recompose_torsos};
