//! Exact computational kernels around Puiseux-series lifting, finite-field
//! point search, mod-d Milnor K-theory of iterated Laurent fields and norm
//! groups of conics over the rationals.

pub mod error;
pub mod field;
pub mod lifting;
pub mod linalg;
pub mod localglobal;
pub mod milnor;
pub mod newton_polygon;
pub mod pointfinder;
pub mod poly;
pub mod serial;
pub mod selftest;
pub mod series;

pub use error::{LiftError, LocalGlobalError, MilnorError, PointError, SeriesError};
pub use field::{Field, Scalar};
pub use newton_polygon::{newton_polygon, NewtonPolygon};
pub use poly::{FieldPoly, SeriesPoly};
pub use series::{Exp, PuiseuxSeries, Val};
