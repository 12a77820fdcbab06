/// Outcome of a sampled check: the verdict is `max_deviation < tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub samples: usize,
}

impl CheckReport {
    pub fn from_deviation(max_deviation: f64, tol: f64, samples: usize) -> Self {
        Self {
            pass: max_deviation.is_finite() && max_deviation < tol,
            max_deviation,
            samples,
        }
    }

    /// Report whose verdict is decided elsewhere (e.g. a rank test) but which
    /// still carries the largest observed residual.
    pub fn with_verdict(pass: bool, max_deviation: f64, samples: usize) -> Self {
        Self {
            pass,
            max_deviation,
            samples,
        }
    }
}

/// Running maximum of absolute deviations.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxTracker {
    pub max: f64,
    pub count: usize,
}

impl MaxTracker {
    pub fn push(&mut self, dev: f64) {
        self.count += 1;
        if dev.is_nan() || dev > self.max {
            self.max = if dev.is_nan() { f64::INFINITY } else { dev };
        }
    }

    pub fn report(&self, tol: f64) -> CheckReport {
        CheckReport::from_deviation(self.max, tol, self.count)
    }
}
