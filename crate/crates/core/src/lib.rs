//! Node embeddings that see both local and global structure.
//!
//! A graph is compressed level by level with Louvain-style modularity
//! optimization and community aggregation. An ordinary embedding learner
//! (DeepWalk, node2vec or LINE) is trained on every level, and each
//! original node's final vector is the concatenation of the vectors of the
//! communities containing it at every level.
//!
//! ```
//! use hsrl::{generators, pipeline, learners::{Learner, LearnerConfig}};
//!
//! let g = generators::planted_partition(&[12, 12], 0.6, 0.02, 1);
//! let cfg = LearnerConfig { dim: 8, walks_per_node: 2, walk_length: 10, ..Default::default() };
//! let result = pipeline::run_hsrl(&g, 3, &cfg, Learner::DeepWalk).unwrap();
//! let levels = result.hierarchy.achieved_levels();
//! assert_eq!(result.embeddings.dim(), 8 * (levels + 1));
//! ```

pub mod embedding;
pub mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod hierarchy;
pub mod learners;
pub mod louvain;
pub mod pipeline;
pub mod sampler;

pub use embedding::EmbeddingMatrix;
pub use error::{Error, Result};
pub use graph::{load_edge_list, Edge, Graph};
pub use hierarchy::{hierarchical_sampling, Hierarchy};
pub use learners::{Learner, LearnerConfig, LineOrder};
pub use louvain::{modularity, modularity_optimization, node_aggregation, Partition};
pub use pipeline::{run_hsrl, HsrlResult};
pub use sampler::WeightedSampler;
