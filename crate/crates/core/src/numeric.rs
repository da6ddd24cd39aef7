//! Log-domain magnitudes and overflow-safe accumulation.

use serde::{Deserialize, Serialize};

/// Natural logarithm of a non-negative quantity. `-∞` encodes an exact zero.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogMagnitude(pub f64);

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude(f64::NEG_INFINITY);

    pub fn from_value(v: f64) -> Self {
        LogMagnitude(v.abs().ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

/// Streaming `log Σ exp(a_i)` with max factoring.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    pub fn push(&mut self, a: f64) {
        if a == f64::NEG_INFINITY {
            return;
        }
        if a <= self.max {
            self.scaled += (a - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - a).exp() + 1.0;
            self.max = a;
        }
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if other.max <= self.max {
            self.scaled += other.scaled * (other.max - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - other.max).exp() + other.scaled;
            self.max = other.max;
        }
    }

    pub fn result(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// `log (Σ_i e^{p·l_i} · cell)^{1/p}` for finite `p`, `max_i l_i` for `p = ∞`.
pub fn log_lp<I: IntoIterator<Item = f64>>(logs: I, p: f64, log_cell: f64) -> f64 {
    if p.is_infinite() {
        logs.into_iter().fold(f64::NEG_INFINITY, f64::max)
    } else {
        let mut acc = LogSumExp::new();
        for l in logs {
            acc.push(p * l);
        }
        let s = acc.result();
        if s == f64::NEG_INFINITY {
            s
        } else {
            (s + log_cell) / p
        }
    }
}

/// Validates a Lebesgue exponent.
pub fn check_exponent(p: f64) -> crate::Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(crate::Error::Parameter(format!("exponent {p} outside [1, ∞]")));
    }
    Ok(())
}
