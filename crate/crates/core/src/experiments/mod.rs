//! Numerical experiments on the quasi-one-dimensional limit.

pub mod overlap;
pub mod projection;
pub mod state;
pub mod sweep;

pub use overlap::{
    dressed_overlap, level_state, overlap_study, tg_eigenspace, OverlapOptions, OverlapPair,
    OverlapRow,
};
pub use projection::{phase_one_sided, project_phi_eps, Projection, XGrid};
pub use state::TwoAnyonState;
pub use sweep::{epsilon_sweep, gap_trend, SweepRow, TrendReport, DEFAULT_LADDER, TREND_NOISE};
