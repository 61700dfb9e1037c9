//! k-means with fixed cluster sizes.
//!
//! The assignment step of ordinary k-means is replaced by a linear assignment
//! problem between `n` points and `n` pre-allocated cluster slots, solved
//! exactly with the Hungarian algorithm. Every cluster therefore ends up with
//! exactly the number of points requested. A classical MDS front end turns a
//! dissimilarity matrix into points, which drives the seating-plan workflow.
//!
//! ```
//! use fixed_kmeans::{cluster, PointSet, RunConfig, SizeSpec};
//!
//! let points = PointSet::from_rows(&[
//!     vec![0.0, 0.0],
//!     vec![0.0, 1.0],
//!     vec![10.0, 0.0],
//!     vec![10.0, 1.0],
//! ])
//! .unwrap();
//! let sizes = SizeSpec::new(vec![2, 2]).unwrap();
//! let result = cluster(&points, &sizes, &RunConfig::default()).unwrap();
//! assert_eq!(result.cluster_sizes(2), vec![2, 2]);
//! ```

pub mod bench;
pub mod eigen;
mod error;
pub mod hungarian;
pub mod io;
pub mod kmeans;
pub mod mds;
pub mod oracle;
mod points;
pub mod seatplan;

pub use error::{Error, Result};
pub use hungarian::{CostMatrix, Matching};
pub use kmeans::{
    assignment_step, build_layout, cluster, cluster_multi_restart, cluster_with_init, compute_mse,
    compute_weights, update_step, Assignment, Centroids, ClusteringResult, RunConfig, SlotLayout,
};
pub use mds::{embed, DissimilarityMatrix, Embedding};
pub use points::{PointSet, SizeSpec};
pub use seatplan::{plan, GuestList, SeatingPlan};
