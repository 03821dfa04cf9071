//! Exact search and audit tools for shifted k-th powers.
//!
//! The central predicate is "`a·b + m` is a k-th power of a positive
//! integer". On top of it the crate builds bipartite power graphs, grid
//! (`K_{s,t}`) search, gap-bound and forbidden-grid scanners, Zarankiewicz
//! edge bounds, and a finite multiplicative-decomposition decider.
//!
//! All verdicts are decided in exact integer arithmetic. Floating point only
//! appears in reported quantities, and where it bounds an inequality from one
//! side it is rounded in the conservative direction.

pub mod arith;
pub mod bigraph;
pub mod decomp;
pub mod error;
pub mod extremal;
pub mod gap;
pub mod parallel;
pub mod power_graph;
pub mod set;

pub use arith::{
    count_up_to, ge_threshold, integer_kth_root, kth_power_witness, shifted_power_witness, sk, tk, x0_threshold,
    ExactRational, Nat, ShiftParams,
};
pub use bigraph::{find_grid, Biclique, Bigraph, GridConstraints};
pub use decomp::{
    find_decomposition, perturbation_distance, product_set, rm_example, rm_untruncated, truncated_shifted_powers,
    Decomposition, Perturbation,
};
pub use error::{Error, Result};
pub use extremal::{
    claim31_audit, claim31_rhs, is_kst_free, kst_audit, kst_edge_bound, AuditStatus, Claim31Terms, ClaimAudit,
    KstAudit, KstBound,
};
pub use gap::{
    check_gap_instance, common_shift_pairs, cor24_scan, cor25_audit, cor25_sweep, gap_lower_bound, gap_scan,
    Cor24Report, GapScanReport, GapStatus, GapVerdict, PairCountReport,
};
pub use parallel::with_workers;
pub use power_graph::{
    build_graph, cor22_scan, prop21_check, right_neighbors, right_neighbors_in, Cor22Report, GridWitness, PowerGraph,
    Prop21Verdict,
};
pub use set::FiniteSet;
