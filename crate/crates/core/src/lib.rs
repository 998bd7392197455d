//! Computational toolkit for Frobenius-iterate towers of p-adic fields.
//!
//! * [`padic`]: arithmetic in `Z_p` and unramified extensions modulo `p^M`,
//!   Frobenius lifts, Hensel lifting, Newton polygons.
//! * [`series`]: truncated univariate and multivariate power series.
//! * [`tower`]: the tower `K_n = K(u_n)`, Coleman's norm operator and
//!   recovery of Coleman power series from norm-compatible sequences.
//! * [`dynamics`]: Lubin's logarithm and series commuting with `P`.
//! * [`lubin_tate`]: relative Lubin-Tate formal groups and their endomorphisms.
//! * [`chebyshev`]: the shifted Chebyshev family and its cyclotomic tower.
//! * [`props`]: seeded randomized property suites.

pub mod chebyshev;
pub mod dynamics;
pub mod error;
pub mod json;
pub mod lubin_tate;
pub mod padic;
pub mod poly;
pub mod props;
pub mod ring;
pub mod series;
pub mod tower;

pub use error::{Error, Result};
pub use padic::{PadicElement, RingContext, Valuation};
pub use poly::Poly;
pub use ring::{CoeffRing, Rationals};
pub use series::{MultiTrunc, TruncSeries};
