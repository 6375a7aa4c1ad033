use thiserror::Error;

pub type Result<T> = std::result::Result<T, TadError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TadError {
    /// A scenario field violates its invariant. `field` names the offending input.
    #[error("invalid scenario field `{field}`: {reason}")]
    InvalidScenario { field: &'static str, reason: String },

    #[error("attacker and defender coincide; the attacker-defender frame is undefined")]
    DegenerateFrame,

    #[error("gamma = {gamma} is outside the fast-defender regime (0 < gamma < 1 - 1e-6)")]
    UnsupportedRegime { gamma: f64 },

    #[error("target coincides with attacker; the attacker-target circle has zero diameter")]
    ZeroDiameter,

    #[error("target sits at the centre of the defender-attacker circle; polar angle undefined")]
    UndefinedAngle,

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(&'static str),

    #[error("root finder did not converge after {iterations} iterations (max correction {correction:e})")]
    RootingFailure { iterations: usize, correction: f64 },

    #[error("singular configuration: {0}")]
    SingularConfiguration(&'static str),

    #[error("undefined direction: {0}")]
    UndefinedDirection(&'static str),

    #[error("singular arc: {0}")]
    SingularArc(&'static str),

    #[error("no terminal co-state for theta_f = {theta_f}: negative discriminant")]
    InfeasibleTerminal { theta_f: f64 },

    #[error("shooting did not converge after {iterations} iterations (residual {residual:e}, best iterate {best:?})")]
    ShootingNonConvergence {
        iterations: usize,
        residual: f64,
        best: [f64; 3],
    },

    #[error("invalid simulation setting `{field}`: {reason}")]
    InvalidSimulation { field: &'static str, reason: String },

    #[error("solver failed at simulation step {step}: {source}")]
    SimulationStep {
        step: usize,
        #[source]
        source: Box<TadError>,
    },
}

impl TadError {
    /// True for input-validation failures, false for numerical ones.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            TadError::InvalidScenario { .. }
                | TadError::DegenerateFrame
                | TadError::UnsupportedRegime { .. }
                | TadError::ZeroDiameter
                | TadError::InvalidSimulation { .. }
        )
    }
}
