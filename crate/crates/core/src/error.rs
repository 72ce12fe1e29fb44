use crate::rfs::TrackLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("innovation covariance is not positive definite")]
    SingularInnovation,

    #[error("duplicate track label {0}")]
    DuplicateLabel(TrackLabel),

    #[error("degenerate update: no association hypothesis has positive weight")]
    DegenerateUpdate,

    #[error("exhaustive update refused: {tracks} tracks x {measurements} measurements exceeds the 8 x 8 guard")]
    TooLarge { tracks: usize, measurements: usize },

    #[error("group {group} members disagree on the group center")]
    InconsistentGroup { group: u32 },

    #[error("ground truth violates group proximity at step {step}: group {group}")]
    GroupSpread { step: usize, group: u32 },

    #[error("step {step}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("trial {trial} (seed {seed})")]
    AtTrial {
        trial: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed track record: {0}")]
    Record(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}
