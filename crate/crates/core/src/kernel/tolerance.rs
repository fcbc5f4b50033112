/// Thresholds for the float backend's rank and positivity decisions.
///
/// The exact backend ignores both fields: every decision there is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    /// A singular value counts as nonzero iff it exceeds this fraction of the
    /// largest singular value.
    pub rank_rel_threshold: f64,
    /// Smallest eigenvalue may dip to `-psd_rel_slack` times the spectral scale.
    pub psd_rel_slack: f64,
}

impl ToleranceProfile {
    pub const DEFAULT_RANK_REL_THRESHOLD: f64 = 1e-10;
    pub const DEFAULT_PSD_REL_SLACK: f64 = 1e-8;

    pub fn with_rank_threshold(mut self, threshold: f64) -> Self {
        self.rank_rel_threshold = threshold;
        self
    }
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            rank_rel_threshold: Self::DEFAULT_RANK_REL_THRESHOLD,
            psd_rel_slack: Self::DEFAULT_PSD_REL_SLACK,
        }
    }
}

/// Relative slack for accepting a float matrix as Hermitian:
/// `max|M - M*| <= HERMITIAN_INPUT_SLACK * max|M|`.
pub const HERMITIAN_INPUT_SLACK: f64 = 1e-8;
