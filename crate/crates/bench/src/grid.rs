use std::fmt;
use std::str::FromStr;

use crate::BenchError;

/// Evenly spaced values `start, …, stop` over `steps` intervals
/// (`steps + 1` points); `steps = 0` is the single point `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    stop: f64,
    steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self, BenchError> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(BenchError::Spec(format!("grid bounds {start}:{stop} must be finite")));
        }
        if steps == 0 && start != stop {
            return Err(BenchError::Spec("a grid with 0 steps needs start == stop".into()));
        }
        if steps > 0 && stop <= start {
            return Err(BenchError::Spec(format!("grid {start}:{stop} is not increasing")));
        }
        Ok(Self { start, stop, steps })
    }

    pub fn point(x: f64) -> Self {
        Self { start: x, stop: x, steps: 0 }
    }

    /// The last point is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 0 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / self.steps as f64;
        (0..=self.steps)
            .map(|k| if k == self.steps { self.stop } else { self.start + k as f64 * h })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = BenchError;

    /// `start:stop:steps`, or a single number.
    fn from_str(s: &str) -> Result<Self, BenchError> {
        let bad = || BenchError::Spec(format!("bad grid `{s}` (expected start:stop:steps)"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Self::point(x.trim().parse().map_err(|_| bad())?)),
            [a, b, n] => Self::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
                n.trim().parse().map_err(|_| bad())?,
            ),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}
