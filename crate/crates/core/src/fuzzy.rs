//! Membership functions, linguistic variables and universe partitions.
//!
//! Everything here is immutable after construction. Shape parameters are
//! checked when a [`MembershipFunction`] is built, so evaluation never fails.

use std::fmt;

use crate::error::{Error, Result};

/// Inputs this far beyond a universe endpoint (as a fraction of the universe
/// width) are clamped onto the endpoint. Anything farther is an error.
pub const CLAMP_FRACTION: f64 = 0.01;

/// `2·sqrt(2·ln 2)`: full width at half maximum of a unit Gaussian.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Triangular { a: f64, b: f64, c: f64 },
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
    Gaussian { center: f64, sigma: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        let mf = MembershipFunction::Triangular { a, b, c };
        mf.validate()?;
        Ok(mf)
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let mf = MembershipFunction::Trapezoidal { a, b, c, d };
        mf.validate()?;
        Ok(mf)
    }

    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        let mf = MembershipFunction::Gaussian { center, sigma };
        mf.validate()?;
        Ok(mf)
    }

    /// Rebuilds a function from the shape name and flat parameter list used
    /// by the FIS definition file.
    pub fn from_parts(shape: &str, params: &[f64]) -> Result<Self> {
        match (shape, params) {
            ("triangular", &[a, b, c]) => Self::triangular(a, b, c),
            ("trapezoidal", &[a, b, c, d]) => Self::trapezoidal(a, b, c, d),
            ("gaussian", &[center, sigma]) => Self::gaussian(center, sigma),
            ("triangular" | "trapezoidal" | "gaussian", _) => Err(Error::InvalidMembership(
                format!("wrong parameter count {} for {shape}", params.len()),
            )),
            _ => Err(Error::InvalidMembership(format!("unknown shape `{shape}`"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.params().iter().all(|p| p.is_finite());
        if !finite {
            return Err(Error::InvalidMembership(format!(
                "non-finite parameter in {self}"
            )));
        }
        let ok = match *self {
            MembershipFunction::Triangular { a, b, c } => a <= b && b <= c,
            MembershipFunction::Trapezoidal { a, b, c, d } => a <= b && b <= c && c <= d,
            MembershipFunction::Gaussian { sigma, .. } => sigma > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMembership(format!(
                "{self} violates its shape ordering"
            )))
        }
    }

    /// Degree of membership of `x`, always in `[0, 1]`.
    pub fn degree(&self, x: f64) -> f64 {
        match *self {
            MembershipFunction::Triangular { a, b, c } => {
                if x < a || x > c {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else if x > b {
                    (c - x) / (c - b)
                } else {
                    1.0
                }
            }
            MembershipFunction::Trapezoidal { a, b, c, d } => {
                if x < a || x > d {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else if x <= c {
                    1.0
                } else {
                    (d - x) / (d - c)
                }
            }
            MembershipFunction::Gaussian { center, sigma } => {
                let z = (x - center) / sigma;
                (-0.5 * z * z).exp()
            }
        }
    }

    /// Location of the peak (midpoint of the plateau for trapezoids).
    pub fn peak(&self) -> f64 {
        match *self {
            MembershipFunction::Triangular { b, .. } => b,
            MembershipFunction::Trapezoidal { b, c, .. } => 0.5 * (b + c),
            MembershipFunction::Gaussian { center, .. } => center,
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self {
            MembershipFunction::Triangular { .. } => "triangular",
            MembershipFunction::Trapezoidal { .. } => "trapezoidal",
            MembershipFunction::Gaussian { .. } => "gaussian",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            MembershipFunction::Triangular { a, b, c } => vec![a, b, c],
            MembershipFunction::Trapezoidal { a, b, c, d } => vec![a, b, c, d],
            MembershipFunction::Gaussian { center, sigma } => vec![center, sigma],
        }
    }
}

impl fmt::Display for MembershipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.shape_name(), params.join(", "))
    }
}

/// A closed real interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Universe {
    lo: f64,
    hi: f64,
}

impl Universe {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Universe { lo, hi })
        } else {
            Err(Error::Domain(format!(
                "empty or non-finite universe [{lo}, {hi}]"
            )))
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// `resolution` evenly spaced points from `lo` to `hi` inclusive.
    pub fn grid(&self, resolution: usize) -> Vec<f64> {
        let last = (resolution - 1) as f64;
        (0..resolution)
            .map(|i| {
                if i + 1 == resolution {
                    self.hi
                } else {
                    self.lo + self.width() * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub name: String,
    pub mf: MembershipFunction,
}

impl Term {
    pub fn new(name: impl Into<String>, mf: MembershipFunction) -> Self {
        Term {
            name: name.into(),
            mf,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    universe: Universe,
    terms: Vec<Term>,
}

impl LinguisticVariable {
    /// Builds a variable and checks name uniqueness and coverage of the
    /// universe (every point of a fine scan grid has some positive degree).
    pub fn new(name: impl Into<String>, universe: Universe, terms: Vec<Term>) -> Result<Self> {
        Self::build(name.into(), universe, terms, true)
    }

    /// Builds an output variable. Term validity and names are checked, but
    /// the terms need not cover the whole universe.
    pub fn output(name: impl Into<String>, universe: Universe, terms: Vec<Term>) -> Result<Self> {
        Self::build(name.into(), universe, terms, false)
    }

    fn build(name: String, universe: Universe, terms: Vec<Term>, covered: bool) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidVariable {
            variable: name.clone(),
            reason,
        };
        if terms.is_empty() {
            return Err(invalid("no terms".into()));
        }
        for (i, term) in terms.iter().enumerate() {
            if term.name.is_empty() {
                return Err(invalid(format!("term {i} has an empty name")));
            }
            if terms[..i].iter().any(|t| t.name == term.name) {
                return Err(invalid(format!("duplicate term `{}`", term.name)));
            }
            term.mf.validate()?;
        }
        let var = LinguisticVariable {
            name,
            universe,
            terms,
        };
        if !covered {
            return Ok(var);
        }
        let scan = var.universe.grid(2001).into_iter().chain(
            var.terms
                .iter()
                .map(|t| t.mf.peak())
                .filter(|p| universe.contains(*p)),
        );
        for x in scan {
            if var.terms.iter().all(|t| t.mf.degree(x) <= 0.0) {
                return Err(Error::InvalidVariable {
                    variable: var.name.clone(),
                    reason: format!("no term covers x = {x}"),
                });
            }
        }
        Ok(var)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name == name)
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// Applies the out-of-range policy: values within [`CLAMP_FRACTION`] of
    /// the universe width beyond an endpoint snap onto it.
    pub fn clamp_input(&self, x: f64) -> Result<f64> {
        let u = self.universe;
        let band = CLAMP_FRACTION * u.width();
        if x.is_nan() || x < u.lo - band || x > u.hi + band {
            return Err(Error::OutOfRange {
                variable: self.name.clone(),
                value: x,
                lo: u.lo,
                hi: u.hi,
            });
        }
        Ok(x.clamp(u.lo, u.hi))
    }

    /// Degrees for every term, in declaration order.
    pub fn degrees(&self, x: f64) -> Result<Vec<f64>> {
        let x = self.clamp_input(x)?;
        Ok(self.terms.iter().map(|t| t.mf.degree(x)).collect())
    }

    /// Term name to degree, in declaration order.
    pub fn fuzzify(&self, x: f64) -> Result<Vec<(&str, f64)>> {
        let degrees = self.degrees(x)?;
        Ok(self
            .terms
            .iter()
            .zip(degrees)
            .map(|(t, d)| (t.name.as_str(), d))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartitionShape {
    Triangular,
    Gaussian,
}

impl PartitionShape {
    /// Short tag used in estimator names (`TMF` / `GMF`).
    pub fn tag(&self) -> &'static str {
        match self {
            PartitionShape::Triangular => "TMF",
            PartitionShape::Gaussian => "GMF",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PartitionShape::Triangular => "triangular",
            PartitionShape::Gaussian => "gaussian",
        }
    }
}

impl std::str::FromStr for PartitionShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangular" | "tri" | "tmf" => Ok(PartitionShape::Triangular),
            "gaussian" | "gauss" | "gmf" => Ok(PartitionShape::Gaussian),
            other => Err(Error::Config(format!("unknown partition shape `{other}`"))),
        }
    }
}

impl fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordinal term names `prefix1..prefixN`.
pub fn ordinal_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Gaussian sigma that makes two Gaussians `spacing` apart cross at
/// membership `crossing`.
pub fn sigma_for_crossing(spacing: f64, crossing: f64) -> f64 {
    spacing / (2.0 * (2.0 * (1.0 / crossing).ln()).sqrt())
}

/// Partition `universe` into `n` equally spaced terms whose neighbours cross
/// at degree 0.5. Triangular partitions are Ruspini (degrees sum to one).
pub fn make_partition(
    name: &str,
    universe: Universe,
    n: usize,
    shape: PartitionShape,
    term_names: &[String],
) -> Result<LinguisticVariable> {
    make_partition_with_crossing(name, universe, n, shape, term_names, 0.5)
}

/// Like [`make_partition`], but Gaussian neighbours cross at `crossing`
/// instead of 0.5. Triangular partitions always cross at 0.5.
pub fn make_partition_with_crossing(
    name: &str,
    universe: Universe,
    n: usize,
    shape: PartitionShape,
    term_names: &[String],
    crossing: f64,
) -> Result<LinguisticVariable> {
    if n < 2 {
        return Err(Error::InvalidPartition(format!(
            "need at least 2 terms, got {n}"
        )));
    }
    if term_names.len() != n {
        return Err(Error::InvalidPartition(format!(
            "{} term names for {n} terms",
            term_names.len()
        )));
    }
    if !(crossing > 0.0 && crossing < 1.0) {
        return Err(Error::InvalidPartition(format!(
            "crossing degree {crossing} not in (0, 1)"
        )));
    }
    let spacing = universe.width() / (n - 1) as f64;
    let sigma = sigma_for_crossing(spacing, crossing);
    let terms = (0..n)
        .map(|i| {
            let center = if i + 1 == n {
                universe.hi()
            } else {
                universe.lo() + spacing * i as f64
            };
            let mf = match shape {
                PartitionShape::Triangular => {
                    MembershipFunction::triangular(center - spacing, center, center + spacing)?
                }
                PartitionShape::Gaussian => MembershipFunction::gaussian(center, sigma)?,
            };
            Ok(Term::new(term_names[i].clone(), mf))
        })
        .collect::<Result<Vec<_>>>()?;
    LinguisticVariable::new(name, universe, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        ordinal_names("s", n)
    }

    #[test]
    fn gaussian_examples() {
        let g = MembershipFunction::gaussian(50.0, 10.0).unwrap();
        assert_eq!(g.degree(50.0), 1.0);
        assert!((g.degree(60.0) - (-0.5f64).exp()).abs() < 1e-15);
        assert!((g.degree(60.0) - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn triangle_outside_support_is_zero() {
        let t = MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap();
        assert_eq!(t.degree(3.0), 0.0);
        assert_eq!(t.degree(-0.1), 0.0);
        assert_eq!(t.degree(1.0), 1.0);
        assert_eq!(t.degree(0.5), 0.5);
    }

    #[test]
    fn shoulders_reach_one_at_the_vertical_edge() {
        let left = MembershipFunction::trapezoidal(0.0, 0.0, 50.0, 70.0).unwrap();
        assert_eq!(left.degree(0.0), 1.0);
        assert_eq!(left.degree(60.0), 0.5);
        let right = MembershipFunction::trapezoidal(85.0, 95.0, 100.0, 100.0).unwrap();
        assert_eq!(right.degree(100.0), 1.0);
        assert_eq!(right.degree(90.0), 0.5);
    }

    #[test]
    fn invalid_shapes_rejected_at_construction() {
        assert!(MembershipFunction::triangular(2.0, 1.0, 3.0).is_err());
        assert!(MembershipFunction::trapezoidal(0.0, 2.0, 1.0, 3.0).is_err());
        assert!(MembershipFunction::gaussian(0.0, 0.0).is_err());
        assert!(MembershipFunction::gaussian(0.0, -1.0).is_err());
        assert!(MembershipFunction::gaussian(f64::NAN, 1.0).is_err());
        assert!(MembershipFunction::from_parts("gaussian", &[1.0]).is_err());
        assert!(MembershipFunction::from_parts("bell", &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn partition_centers_three_triangles() {
        let u = Universe::new(1.0, 100.0).unwrap();
        let v = make_partition("size", u, 3, PartitionShape::Triangular, &names(3)).unwrap();
        let peaks: Vec<f64> = v.terms().iter().map(|t| t.mf.peak()).collect();
        assert_eq!(peaks, vec![1.0, 50.5, 100.0]);
    }

    #[test]
    fn two_term_partition_midpoint() {
        let u = Universe::new(0.0, 1.0).unwrap();
        let v = make_partition("x", u, 2, PartitionShape::Triangular, &names(2)).unwrap();
        assert_eq!(v.degrees(0.5).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn seven_gaussians_spacing_and_sigma() {
        let u = Universe::new(1.0, 100.0).unwrap();
        let v = make_partition("size", u, 7, PartitionShape::Gaussian, &names(7)).unwrap();
        for (i, t) in v.terms().iter().enumerate() {
            let MembershipFunction::Gaussian { center, sigma } = t.mf else {
                panic!("expected gaussian")
            };
            assert!((center - (1.0 + 16.5 * i as f64)).abs() < 1e-12);
            assert!((sigma - 7.006).abs() < 1e-3, "sigma {sigma}");
        }
    }

    #[test]
    fn partition_needs_two_terms() {
        let u = Universe::new(0.0, 1.0).unwrap();
        let err = make_partition("x", u, 1, PartitionShape::Gaussian, &names(1)).unwrap_err();
        assert!(matches!(err, Error::InvalidPartition(_)));
    }

    #[test]
    fn fuzzify_examples() {
        let u = Universe::new(1.0, 100.0).unwrap();
        let names = vec!["low".to_string(), "mid".to_string(), "high".to_string()];
        let v = make_partition("size", u, 3, PartitionShape::Triangular, &names).unwrap();
        assert_eq!(
            v.fuzzify(1.0).unwrap(),
            vec![("low", 1.0), ("mid", 0.0), ("high", 0.0)]
        );
        let d = v.degrees(25.75).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-12 && (d[1] - 0.5).abs() < 1e-12 && d[2] == 0.0);

        let g = make_partition("size", u, 3, PartitionShape::Gaussian, &names).unwrap();
        assert_eq!(g.degrees(50.5).unwrap()[1], 1.0);
    }

    #[test]
    fn clamp_band_is_one_percent_of_width() {
        let u = Universe::new(1.0, 100.0).unwrap();
        let v = make_partition("size", u, 3, PartitionShape::Triangular, &names(3)).unwrap();
        assert_eq!(v.clamp_input(100.9).unwrap(), 100.0);
        assert_eq!(v.clamp_input(0.2).unwrap(), 1.0);
        assert!(matches!(
            v.clamp_input(101.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(v.clamp_input(200.0).is_err());
        assert!(v.clamp_input(f64::NAN).is_err());
    }

    #[test]
    fn variable_rejects_duplicates_and_gaps() {
        let u = Universe::new(0.0, 10.0).unwrap();
        let t = MembershipFunction::triangular(0.0, 2.0, 4.0).unwrap();
        assert!(
            LinguisticVariable::new("x", u, vec![Term::new("a", t), Term::new("a", t)]).is_err()
        );
        // nothing covers (4, 10]
        assert!(LinguisticVariable::new("x", u, vec![Term::new("a", t)]).is_err());
        assert!(Universe::new(1.0, 1.0).is_err());
    }

    #[test]
    fn crossing_sigma_places_degree_at_midpoint() {
        let s = sigma_for_crossing(10.0, 0.2);
        let g = MembershipFunction::gaussian(0.0, s).unwrap();
        assert!((g.degree(5.0) - 0.2).abs() < 1e-12);
    }
}
