//! Learner-to-distinguisher experiments, baselines, TVD computations and the
//! verification suite.

mod distinguisher;
mod learners;
pub mod stats;
mod tvd;
pub mod verify;

pub use distinguisher::{
    advantage_report, empirical_error, hoeffding_distinguisher, hoeffding_failure_bound, truncation_shift,
    AdvantageConfig, AdvantageReport, CoinFlipDistinguisher, Distinguisher, DistinguisherConfig, DistinguisherOutcome,
    ErrorEstimate, HoeffdingDistinguisher, Learner, TruncationShift, Verdict,
};
pub use learners::{train_baseline, Classifier, Hypothesis, LearnerKind, LearnerSpec};
pub use tvd::{projection_tvd, truncation_tvd_bound, tvd_1d_numeric, SupportHint, TvdEstimate};
pub use verify::{verify_all, CheckRecord, CriterionSummary, GridPoint, Relation, Scale, VerificationReport, VerifyPlan};
