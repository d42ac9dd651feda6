use thiserror::Error;

/// Everything that can go wrong while building or running a simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("discrete state {index} has |omega| = {omega} outside the band (|omega| < 2 kappa = {band_edge})")]
    EmbeddingViolation {
        index: usize,
        omega: f64,
        band_edge: f64,
    },
    #[error("attachment site {site} is used by states {first} and {second}")]
    DuplicateSite {
        site: i64,
        first: usize,
        second: usize,
    },
    #[error("lattice hopping must be positive, got kappa = {0}")]
    NonPositiveHopping(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("time {t} lies beyond the schedule's total duration {total}")]
    TimeBeyondSchedule { t: f64, total: f64 },
    #[error("time step dt = {dt} exceeds the stability guard dt*kappa <= {max}")]
    StepTooLarge { dt: f64, max: f64 },
    #[error("schedule boundary at t = {boundary} is not an integer multiple of dt = {dt}")]
    ScheduleMisaligned { boundary: f64, dt: f64 },
    #[error("frequency {omega} is within {tolerance} of the band edge")]
    BandEdgeSingularity { omega: f64, tolerance: f64 },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("epsilon extrapolation is unstable: {0}")]
    ExtrapolationUnstable(String),
    #[error("QR iteration did not converge after {0} iterations")]
    QRNonConvergence(usize),
    #[error("initial discrete-state population is zero")]
    ZeroInitialState,
    #[error("trajectory ends at t = {available}, need t = {required}")]
    TrajectoryTooShort { available: f64, required: f64 },
    #[error("{field}: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
