use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn default_margin() -> f64 {
    1e-6
}

/// Piecewise-linear path through the open chamber `x_1 < … < x_N`.
///
/// Gaps `x_{i+1} - x_i` are affine along each segment, so checking the
/// waypoints against the margin covers every interpolated point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberPath {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
    pub waypoints: Vec<Vec<f64>>,
}

impl ChamberPath {
    /// Builds and validates a path with the default margin.
    pub fn new(waypoints: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_margin(waypoints, default_margin())
    }

    pub fn with_margin(waypoints: Vec<Vec<f64>>, margin: f64) -> Result<Self> {
        let n = waypoints.first().map_or(0, Vec::len);
        let path = Self {
            n,
            margin,
            waypoints,
        };
        path.validate()?;
        Ok(path)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let path: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.waypoints.is_empty() {
            return Err(Error::InvalidArgument("path has no waypoints".into()));
        }
        if !(self.margin > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "margin must be positive, got {}",
                self.margin
            )));
        }
        for (idx, w) in self.waypoints.iter().enumerate() {
            if w.len() != self.n {
                return Err(Error::ArityMismatch {
                    left: self.n,
                    right: w.len(),
                });
            }
            if w.iter().any(|v| !v.is_finite()) || min_gap(w) < self.margin {
                return Err(Error::OutsideChamber {
                    waypoint: idx,
                    margin: self.margin,
                });
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> impl Iterator<Item = (&[f64], &[f64])> {
        self.waypoints
            .windows(2)
            .map(|w| (w[0].as_slice(), w[1].as_slice()))
    }

    pub fn start(&self) -> &[f64] {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &[f64] {
        self.waypoints.last().expect("validated path is nonempty")
    }

    pub fn is_closed(&self) -> bool {
        self.waypoints.len() > 1 && self.start() == self.end()
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.waypoints.reverse();
        p
    }

    /// `self` followed by `other`; the junction point appears once.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.end() != other.start() {
            return Err(Error::InvalidArgument(
                "paths do not share the junction point".into(),
            ));
        }
        let mut p = self.clone();
        p.waypoints.extend(other.waypoints.iter().skip(1).cloned());
        p.margin = self.margin.min(other.margin);
        Ok(p)
    }
}

/// Smallest consecutive gap `x_{i+1} - x_i`.
pub(crate) fn min_gap(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_default_margin() {
        let p = ChamberPath::from_json(r#"{"N": 2, "waypoints": [[0, 1], [0, 2]]}"#).unwrap();
        assert_eq!(p.margin, 1e-6);
        assert_eq!(p.segments().count(), 1);
    }

    #[test]
    fn rejects_points_outside_the_chamber() {
        let err = ChamberPath::new(vec![vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::OutsideChamber { waypoint: 1, .. }));
        let err = ChamberPath::with_margin(vec![vec![0.0, 0.05]], 0.1).unwrap_err();
        assert!(matches!(err, Error::OutsideChamber { waypoint: 0, .. }));
        assert!(matches!(ChamberPath::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn reverse_and_concat() {
        let a = ChamberPath::new(vec![vec![0.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let b = ChamberPath::new(vec![vec![0.0, 2.0], vec![1.0, 3.0]]).unwrap();
        let ab = a.concat(&b).unwrap();
        assert_eq!(ab.waypoints.len(), 3);
        assert!(b.concat(&a).is_err());
        assert_eq!(a.reversed().start(), a.end());
        assert!(!ab.is_closed());
        assert!(ab.concat(&ab.reversed()).unwrap().is_closed());
    }
}
