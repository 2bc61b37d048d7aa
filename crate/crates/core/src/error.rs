use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Values are carried as `f64` regardless of the scalar type in use so the
/// error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({re}, {im}) is not inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("point of modulus {modulus} lies beyond the series guard radius {rho_max}")]
    GuardRadius { modulus: f64, rho_max: f64 },

    #[error("boundary base point touched at ({re}, {im})")]
    PoleContact { re: f64, im: f64 },

    #[error("derivative order {order} exceeds the configured maximum {max}")]
    OrderCap { order: usize, max: usize },

    #[error("series tail bound {bound} exceeds tolerance {tol}")]
    SeriesTail { bound: f64, tol: f64 },

    #[error("linear combination of an empty list")]
    EmptyCombination,

    #[error("cannot combine {0} with {1} representations")]
    IncompatibleRepresentations(&'static str, &'static str),

    #[error("difference stencil of radius {step} around modulus {modulus} leaves the domain")]
    StencilOutside { modulus: f64, step: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-positive weight value {value} at r = {r}")]
    NonPositiveWeight { r: f64, value: f64 },

    #[error("kernel evaluation failed: {0}")]
    Kernel(String),

    #[error("symbol is not a self-map of the disk: grid sup |phi| = {sup}")]
    NotSelfMap { sup: f64 },

    #[error("integral diverges ({0})")]
    Divergent(String),

    #[error("certification failed for {what}: residual {residual} > {tol}")]
    Certification { what: String, residual: f64, tol: f64 },

    #[error("ill-conditioned delta system (condition estimate {cond})")]
    IllConditioned { cond: f64 },

    #[error("operator appears unbounded: sup {what} = {value}")]
    Unbounded { what: String, value: f64 },

    #[error("no grid point approaches the boundary although rho = {rho}")]
    InconsistentGrid { rho: f64 },

    #[error("estimator inconsistency: lower {lower} exceeds upper_sum {upper_sum}")]
    EstimatorInconsistency { lower: f64, upper_sum: f64 },

    #[error("operator kind does not match the estimator: {0}")]
    WrongOperatorKind(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
