use core::fmt;

/// Errors raised by the algebra, calculus, kernel and quadrature layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands live in Clifford algebras of different dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Dimension outside the supported range `[3, MAX_DIM]`.
    UnsupportedDimension(usize),
    /// A coefficient array had the wrong length or a non-finite entry.
    InvalidCoefficients(&'static str),
    /// Argument outside the domain of the operation.
    Domain(&'static str),
    /// A point that must lie in upper half space does not (`x_n <= 0`).
    NotInUpperHalfSpace { xn: f64 },
    /// Two kernel arguments are closer than the configured separation.
    Singular { separation: f64 },
    /// A finite-difference stencil left the domain of the field.
    StencilOutsideDomain,
    /// The element to be inverted is not invertible.
    NotInvertible,
    /// The Möbius transform sends the point to infinity.
    PointAtInfinity,
    /// An integrand produced NaN or infinity at the given node index.
    NonFiniteIntegrand { node: usize },
    /// Invalid region or rule parameters.
    InvalidRegion(&'static str),
    /// A calibration run did not produce a stable constant.
    CalibrationUnstable { spread: f64 },
    /// A target point is too close to the integration surface.
    TooCloseToSurface { distance: f64, spacing: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnsupportedDimension(n) => write!(f, "unsupported dimension {n}"),
            Error::InvalidCoefficients(why) => write!(f, "invalid coefficients: {why}"),
            Error::Domain(why) => write!(f, "domain error: {why}"),
            Error::NotInUpperHalfSpace { xn } => {
                write!(f, "point not in upper half space (x_n = {xn})")
            }
            Error::Singular { separation } => {
                write!(f, "singular kernel evaluation (separation {separation:e})")
            }
            Error::StencilOutsideDomain => write!(f, "finite-difference stencil outside domain"),
            Error::NotInvertible => write!(f, "element is not invertible"),
            Error::PointAtInfinity => write!(f, "point is mapped to infinity"),
            Error::NonFiniteIntegrand { node } => {
                write!(f, "non-finite integrand value at node {node}")
            }
            Error::InvalidRegion(why) => write!(f, "invalid region: {why}"),
            Error::CalibrationUnstable { spread } => {
                write!(f, "calibration unstable (relative spread {spread:e})")
            }
            Error::TooCloseToSurface { distance, spacing } => write!(
                f,
                "target at distance {distance:e} from surface (node spacing {spacing:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
