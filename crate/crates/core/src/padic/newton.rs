use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::RingContext;
use crate::poly::Poly;
use crate::ring::{rational_valuation, Rationals};

/// One edge of a Newton polygon.
///
/// `slope` is the valuation of the roots the edge accounts for, `length` their number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Ratio<i64>,
    pub length: usize,
}

impl Serialize for Segment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Segment", 2)?;
        st.serialize_field("slope", &self.slope.to_string())?;
        st.serialize_field("length", &self.length)?;
        st.end()
    }
}

/// Lower convex hull of `{(i, val(c_i))}` with slopes negated, listed by increasing slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    #[serde(rename = "zeroOrder")]
    pub zero_order: usize,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.zero_order + self.segments.iter().map(|s| s.length).sum::<usize>()
    }

    /// Polygon of a product: root multiplicities per slope add up.
    pub fn merge(&self, other: &NewtonPolygon) -> NewtonPolygon {
        let mut segs: Vec<Segment> = self.segments.iter().chain(&other.segments).copied().collect();
        segs.sort_by(|a, b| a.slope.cmp(&b.slope));
        let mut out: Vec<Segment> = Vec::new();
        for s in segs {
            match out.last_mut() {
                Some(last) if last.slope == s.slope => last.length += s.length,
                _ => out.push(s),
            }
        }
        NewtonPolygon { zero_order: self.zero_order + other.zero_order, segments: out }
    }

    /// Single edge of slope `1/d` and length `d`: the Eisenstein shape.
    pub fn is_eisenstein_shape(&self) -> bool {
        let d = self.degree();
        self.zero_order == 0
            && d >= 1
            && self.segments.len() == 1
            && self.segments[0].slope == Ratio::new(1, d as i64)
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeroOrder {}", self.zero_order)?;
        for s in &self.segments {
            write!(f, ", slope {} x {}", s.slope, s.length)?;
        }
        Ok(())
    }
}

/// Newton polygon from coefficient valuations (`None` marks a zero coefficient).
pub fn newton_polygon_from_valuations(vals: &[Option<i64>]) -> Result<NewtonPolygon> {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v)))
        .collect();
    let Some(&(i0, _)) = pts.first() else {
        return Err(Error::ZeroPolynomial);
    };
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let cross = (x2 - x1) * (pt.1 - y1) - (y2 - y1) * (pt.0 - x1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments: Vec<Segment> = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            Segment { slope: Ratio::new(y1 - y2, x2 - x1), length: (x2 - x1) as usize }
        })
        .collect();
    segments.reverse();
    Ok(NewtonPolygon { zero_order: i0 as usize, segments })
}

/// Newton polygon of a polynomial over a p-adic ring.
///
/// Coefficients indistinguishable from zero at their precision are treated as zero.
pub fn newton_polygon(f: &Poly<RingContext>) -> Result<NewtonPolygon> {
    let r = f.ring();
    let vals: Vec<Option<i64>> = f
        .coeffs()
        .iter()
        .map(|c| r.valuation(c).finite().map(i64::from))
        .collect();
    newton_polygon_from_valuations(&vals)
}

/// Newton polygon of a rational polynomial with respect to `p`.
pub fn newton_polygon_rational(f: &Poly<Rationals>, p: u64) -> Result<NewtonPolygon> {
    let pb = num_bigint::BigInt::from(p);
    let vals: Vec<Option<i64>> = f.coeffs().iter().map(|c| rational_valuation(c, &pb)).collect();
    newton_polygon_from_valuations(&vals)
}

/// Monic with a single edge of slope `1/deg`.
pub fn is_eisenstein(f: &Poly<RingContext>) -> Result<bool> {
    Ok(f.is_monic() && newton_polygon(f)?.is_eisenstein_shape())
}
