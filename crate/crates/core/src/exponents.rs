//! Exact exponent calculus for `L^p -> L^q` bounds of the complex-order
//! spherical maximal operator.
//!
//! Points of the exponent plane are pairs `(1/p, 1/q)` of reciprocal Lebesgue
//! exponents, stored as exact rationals. All formulas here are piecewise
//! affine in `(1/p, 1/q)`, so exact arithmetic makes every identity between
//! them checkable without tolerances.
//!
//! The five-triangle partition of the admissible triangle `ODE` uses the
//! vertices
//!
//! ```text
//! O = (0, 0)
//! A = ((n-1)/(2(n+1)), (n-1)/(2(n+1)))
//! B = ((n-1)(n+3)/(2(n²+2n-1)), (n-1)(n+1)/(2(n²+2n-1)))
//! C = (1/2, 1/2)
//! D = (1, 1)
//! E = (1, 0)
//! ```
//!
//! and the triangles `AOE`, `ABE`, `BCE`, `ABC`, `CDE`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational used for every exponent value.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExponentError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("{what} requires dimension {requirement}, got {dim}")]
    WrongDimension {
        what: &'static str,
        requirement: &'static str,
        dim: u32,
    },
    #[error("reciprocal exponent {0} is outside [0, 1]")]
    OutOfRange(Rational),
    #[error("point (1/p, 1/q) = ({inv_p}, {inv_q}) is not admissible: need 1/q <= 1/p")]
    Inadmissible { inv_p: Rational, inv_q: Rational },
    #[error("malformed rational {0:?}: expected \"num/den\" or an integer")]
    Parse(String),
}

/// Parse `"num/den"` or a bare integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ExponentError> {
    Rational::from_str(text.trim()).map_err(|_| ExponentError::Parse(text.to_string()))
}

/// Render a rational as `"num/den"` (or `"num"` when the denominator is 1).
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

fn r(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// A point `(1/p, 1/q)` of the exponent plane in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentPoint {
    pub inv_p: Rational,
    pub inv_q: Rational,
    pub dim: u32,
}

impl ExponentPoint {
    /// Validates `0 <= 1/p, 1/q <= 1` and `dim >= 2`. Admissibility
    /// (`1/q <= 1/p`) is checked by the operations that need it.
    pub fn new(inv_p: Rational, inv_q: Rational, dim: u32) -> Result<Self, ExponentError> {
        if dim < 2 {
            return Err(ExponentError::DimensionTooSmall(dim));
        }
        for v in [inv_p, inv_q] {
            if v.is_negative() || v > Rational::one() {
                return Err(ExponentError::OutOfRange(v));
            }
        }
        Ok(Self { inv_p, inv_q, dim })
    }

    pub fn from_strs(inv_p: &str, inv_q: &str, dim: u32) -> Result<Self, ExponentError> {
        Self::new(parse_rational(inv_p)?, parse_rational(inv_q)?, dim)
    }

    /// `q >= p`, i.e. `1/q <= 1/p`.
    pub fn is_admissible(&self) -> bool {
        self.inv_q <= self.inv_p
    }

    fn require_admissible(&self) -> Result<(), ExponentError> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(ExponentError::Inadmissible {
                inv_p: self.inv_p,
                inv_q: self.inv_q,
            })
        }
    }

    fn n(&self) -> i64 {
        i64::from(self.dim)
    }

    fn xy(&self) -> (Rational, Rational) {
        (self.inv_p, self.inv_q)
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) [n={}]",
            format_rational(&self.inv_p),
            format_rational(&self.inv_q),
            self.dim
        )
    }
}

/// The three maximands of the necessary exponent, in order:
/// `1/p - n/q`, `(n+1)/(2p) - (n-1)/2 (1/q + 1)`, `n/p - n + 1`.
///
/// They are the growth rates of the focusing, plate and cone families
/// respectively. No admissibility check is made.
pub fn sigma_terms(point: &ExponentPoint) -> [Rational; 3] {
    let n = point.n();
    let (x, y) = point.xy();
    [
        x - int(n) * y,
        r(n + 1, 2) * x - r(n - 1, 2) * (y + Rational::one()),
        int(n) * x - int(n) + Rational::one(),
    ]
}

/// Necessary order `σₙ(p, q)`: boundedness forces `Re α >= σₙ`.
pub fn sigma(point: &ExponentPoint) -> Result<Rational, ExponentError> {
    point.require_admissible()?;
    let [a, b, c] = sigma_terms(point);
    Ok(a.max(b).max(c))
}

/// The additional maximand `1/(2p) - (n-2)/(2q) - (n-1)/4` of the
/// sufficient order in dimensions `n > 2`.
pub fn extra_term(point: &ExponentPoint) -> Rational {
    let n = point.n();
    let (x, y) = point.xy();
    x / int(2) - r(n - 2, 2) * y - r(n - 1, 4)
}

/// Sufficient order `dₙ(p, q) = max{σₙ, extra_term}` for `n > 2`.
pub fn d_exponent(point: &ExponentPoint) -> Result<Rational, ExponentError> {
    if point.dim < 3 {
        return Err(ExponentError::WrongDimension {
            what: "d_exponent",
            requirement: "n > 2 (use sigma for n = 2)",
            dim: point.dim,
        });
    }
    Ok(sigma(point)?.max(extra_term(point)))
}

/// Which of the three planar local-smoothing branches a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum S2Branch {
    /// `q >= 3p'`
    LargeQ,
    /// `p' <= q < 3p'`
    MiddleQ,
    /// `q < p'`
    SmallQ,
}

/// Branch selection in reciprocal form: with `1/p' = 1 - 1/p`,
/// `q >= 3p'` is `1/q <= (1 - 1/p)/3` and `q < p'` is `1/q > 1 - 1/p`.
/// For `p = 1` this sends `q = ∞` to `LargeQ` and every finite `q` to
/// `SmallQ`, which is the limiting form of the piecewise definition.
pub fn s2_branch(point: &ExponentPoint) -> S2Branch {
    let (x, y) = point.xy();
    let inv_p_conj = Rational::one() - x;
    if y <= inv_p_conj / int(3) {
        S2Branch::LargeQ
    } else if y <= inv_p_conj {
        S2Branch::MiddleQ
    } else {
        S2Branch::SmallQ
    }
}

/// Value of a given `s₂` branch at a point, regardless of whether the point
/// lies in that branch's range.
pub fn s2_branch_value(branch: S2Branch, point: &ExponentPoint) -> Rational {
    let (x, y) = point.xy();
    match branch {
        S2Branch::LargeQ => r(1, 2) + x - int(3) * y,
        S2Branch::MiddleQ => r(3, 2) * (x - y),
        S2Branch::SmallQ => int(2) * x - r(1, 2) - y,
    }
}

/// Planar local-smoothing order `s₂(p, q)` for the half-wave propagator.
pub fn s2(point: &ExponentPoint) -> Result<Rational, ExponentError> {
    if point.dim != 2 {
        return Err(ExponentError::WrongDimension {
            what: "s2",
            requirement: "n = 2",
            dim: point.dim,
        });
    }
    point.require_admissible()?;
    Ok(s2_branch_value(s2_branch(point), point))
}

/// Triangles of the exponent-plane partition, plus `Outside` for
/// inadmissible points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    #[serde(rename = "AOE")]
    Aoe,
    #[serde(rename = "ABE")]
    Abe,
    #[serde(rename = "BCE")]
    Bce,
    #[serde(rename = "ABC")]
    Abc,
    #[serde(rename = "CDE")]
    Cde,
    #[serde(rename = "OUTSIDE")]
    Outside,
}

impl RegionTag {
    /// Tie-break order: the first closed triangle in this list that contains
    /// a point owns it.
    pub const TRIANGLES: [RegionTag; 5] = [
        RegionTag::Aoe,
        RegionTag::Abe,
        RegionTag::Bce,
        RegionTag::Abc,
        RegionTag::Cde,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RegionTag::Aoe => "AOE",
            RegionTag::Abe => "ABE",
            RegionTag::Bce => "BCE",
            RegionTag::Abc => "ABC",
            RegionTag::Cde => "CDE",
            RegionTag::Outside => "OUTSIDE",
        }
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Owning triangle of a point. `boundary` is set when the point lies in more
/// than one closed triangle, i.e. on a shared edge or vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionLabel {
    pub tag: RegionTag,
    pub boundary: bool,
}

/// A point of the plane without dimension metadata.
pub type Vertex = (Rational, Rational);

/// The six labelled vertices of the exponent-plane partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Figure1 {
    pub dim: u32,
    pub o: Vertex,
    pub a: Vertex,
    pub b: Vertex,
    pub c: Vertex,
    pub d: Vertex,
    pub e: Vertex,
}

impl Figure1 {
    pub fn new(dim: u32) -> Result<Self, ExponentError> {
        if dim < 2 {
            return Err(ExponentError::DimensionTooSmall(dim));
        }
        let n = i64::from(dim);
        let a = r(n - 1, 2 * (n + 1));
        let den = 2 * (n * n + 2 * n - 1);
        Ok(Self {
            dim,
            o: (int(0), int(0)),
            a: (a, a),
            b: (r((n - 1) * (n + 3), den), r((n - 1) * (n + 1), den)),
            c: (r(1, 2), r(1, 2)),
            d: (int(1), int(1)),
            e: (int(1), int(0)),
        })
    }

    /// Corners of a triangle in the order its name spells them.
    pub fn triangle(&self, tag: RegionTag) -> Option<[Vertex; 3]> {
        let t = match tag {
            RegionTag::Aoe => [self.a, self.o, self.e],
            RegionTag::Abe => [self.a, self.b, self.e],
            RegionTag::Bce => [self.b, self.c, self.e],
            RegionTag::Abc => [self.a, self.b, self.c],
            RegionTag::Cde => [self.c, self.d, self.e],
            RegionTag::Outside => return None,
        };
        Some(t)
    }

    /// Named vertices in the order O, A, B, C, D, E.
    pub fn named_vertices(&self) -> [(&'static str, Vertex); 6] {
        [
            ("O", self.o),
            ("A", self.a),
            ("B", self.b),
            ("C", self.c),
            ("D", self.d),
            ("E", self.e),
        ]
    }
}

/// Twice the signed area of `(a, b, c)`; positive for counter-clockwise.
pub fn orientation(a: Vertex, b: Vertex, c: Vertex) -> Rational {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Closed point-in-triangle test with exact arithmetic.
pub fn triangle_contains(tri: &[Vertex; 3], p: Vertex) -> bool {
    let s = [
        orientation(tri[0], tri[1], p),
        orientation(tri[1], tri[2], p),
        orientation(tri[2], tri[0], p),
    ];
    let nonneg = s.iter().all(|v| !v.is_negative());
    let nonpos = s.iter().all(|v| !v.is_positive());
    nonneg || nonpos
}

/// Locate a point in the five-triangle partition of `ODE`.
///
/// Inadmissible points (`1/q > 1/p`) get [`RegionTag::Outside`]. Points on
/// shared edges go to the first containing triangle in
/// [`RegionTag::TRIANGLES`] order. The partition is defined for every
/// `n >= 2`, although the `s_n` formulas attached to it apply from `n = 3`.
pub fn classify_region(point: &ExponentPoint) -> RegionLabel {
    if !point.is_admissible() {
        return RegionLabel {
            tag: RegionTag::Outside,
            boundary: false,
        };
    }
    // dim >= 2 is guaranteed by the constructor
    let fig = Figure1::new(point.dim).expect("validated dimension");
    let p = point.xy();
    let mut owner = None;
    let mut hits = 0;
    for tag in RegionTag::TRIANGLES {
        let tri = fig.triangle(tag).expect("triangle tag");
        if triangle_contains(&tri, p) {
            hits += 1;
            owner.get_or_insert(tag);
        }
    }
    RegionLabel {
        tag: owner.unwrap_or(RegionTag::Outside),
        boundary: hits > 1,
    }
}

/// Value of the `s_n` formula attached to a triangle.
pub fn s_n_region_value(tag: RegionTag, point: &ExponentPoint) -> Option<Rational> {
    let n = point.n();
    let (x, y) = point.xy();
    let v = match tag {
        RegionTag::Aoe | RegionTag::Abe => x - int(n + 1) * y + r(n - 1, 2),
        RegionTag::Bce => r(n + 1, 2) * (x - y),
        RegionTag::Abc => x / int(2) - int(n) * y / int(2) + r(n - 1, 4),
        RegionTag::Cde => int(n) * x - y - r(n - 1, 2),
        RegionTag::Outside => return None,
    };
    Some(v)
}

/// Local-smoothing order `s_n(p, q)` for `n >= 3`, keyed on the owning
/// triangle of the point.
pub fn s_n(point: &ExponentPoint) -> Result<Rational, ExponentError> {
    if point.dim < 3 {
        return Err(ExponentError::WrongDimension {
            what: "s_n",
            requirement: "n >= 3",
            dim: point.dim,
        });
    }
    point.require_admissible()?;
    let label = classify_region(point);
    s_n_region_value(label.tag, point).ok_or(ExponentError::Inadmissible {
        inv_p: point.inv_p,
        inv_q: point.inv_q,
    })
}

/// Local-smoothing order at `(p, q)` in any dimension: `s₂` for `n = 2`,
/// `s_n` otherwise.
pub fn smoothing_order(point: &ExponentPoint) -> Result<Rational, ExponentError> {
    if point.dim == 2 {
        s2(point)
    } else {
        s_n(point)
    }
}

/// Maximal-operator order threshold `s - (n-1)/2 + 1/q` induced by a
/// local-smoothing estimate of order `s`.
pub fn transfer_alpha(s: Rational, point: &ExponentPoint) -> Rational {
    s - r(point.n() - 1, 2) + point.inv_q
}

/// The anchor estimate `(1/p₀, 1/q₀, s₀)` for frequency-localized data in
/// dimension `n >= 3`. `(1/p₀, 1/q₀)` coincides with vertex `B`.
pub fn smoothing_anchor(dim: u32) -> Result<(Rational, Rational, Rational), ExponentError> {
    if dim < 3 {
        return Err(ExponentError::WrongDimension {
            what: "smoothing_anchor",
            requirement: "n >= 3",
            dim,
        });
    }
    let n = i64::from(dim);
    let m = n * n + 2 * n - 1;
    let p0 = r(2 * m, (n - 1) * (n + 3));
    let q0 = r(2 * m, (n - 1) * (n + 1));
    let s0 = r((n - 1) * (n + 1), 2 * m);
    Ok((p0.recip(), q0.recip(), s0))
}

/// The closed necessary region for the `α = 0` maximal operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadrangleQ {
    pub dim: u32,
    /// `P₁..P₄`.
    pub corners: [Vertex; 4],
}

impl QuadrangleQ {
    /// Counter-clockwise boundary polygon `P₁, P₄, P₃, P₂` with the repeated
    /// corner removed when `n = 2` (where `P₂ = P₃`).
    pub fn polygon(&self) -> Vec<Vertex> {
        let [p1, p2, p3, p4] = self.corners;
        let mut poly = vec![p1, p4, p3];
        if p2 != p3 {
            poly.push(p2);
        }
        poly
    }

    pub fn is_triangle(&self) -> bool {
        self.corners[1] == self.corners[2]
    }

    fn edge_orientations(&self, p: Vertex) -> Vec<Rational> {
        let poly = self.polygon();
        (0..poly.len())
            .map(|i| orientation(poly[i], poly[(i + 1) % poly.len()], p))
            .collect()
    }

    pub fn contains_closed(&self, p: Vertex) -> bool {
        self.edge_orientations(p).iter().all(|o| !o.is_negative())
    }

    pub fn contains_interior(&self, p: Vertex) -> bool {
        self.edge_orientations(p).iter().all(|o| o.is_positive())
    }
}

pub fn quadrangle_q(dim: u32) -> Result<QuadrangleQ, ExponentError> {
    if dim < 2 {
        return Err(ExponentError::DimensionTooSmall(dim));
    }
    let n = i64::from(dim);
    let corners = [
        (int(0), int(0)),
        (r(n - 1, n), r(n - 1, n)),
        (r(n - 1, n), r(1, n)),
        (r(n * (n - 1), n * n + 1), r(n - 1, n * n + 1)),
    ];
    Ok(QuadrangleQ { dim, corners })
}

/// One row of an exponent table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentRow {
    pub point: ExponentPoint,
    pub sigma: Option<Rational>,
    pub d: Option<Rational>,
    pub s: Option<Rational>,
    pub region: RegionLabel,
}

/// Evaluate every exponent that is defined at a point. Entries that are not
/// defined there (inadmissible point, `d` in the plane) are `None`.
pub fn exponent_row(point: &ExponentPoint) -> ExponentRow {
    ExponentRow {
        point: *point,
        sigma: sigma(point).ok(),
        d: if point.dim == 2 {
            sigma(point).ok()
        } else {
            d_exponent(point).ok()
        },
        s: smoothing_order(point).ok(),
        region: classify_region(point),
    }
}

/// All admissible points `(a/k, b/k)` with `0 <= b <= a <= k`.
pub fn lattice_points(dim: u32, density: u32) -> Result<Vec<ExponentPoint>, ExponentError> {
    let k = i64::from(density.max(1));
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=a {
            out.push(ExponentPoint::new(r(a, k), r(b, k), dim)?);
        }
    }
    Ok(out)
}
