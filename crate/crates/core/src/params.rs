use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("interval endpoints must satisfy a < b (got a = {a}, b = {b})")]
    EmptyInterval { a: f64, b: f64 },
    #[error("parameter components must be finite")]
    NonFinite,
}

/// The generator parameter `nu = lambda + i mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexParam {
    pub lambda: f64,
    pub mu: f64,
}

impl ComplexParam {
    pub fn new(lambda: f64, mu: f64) -> Result<Self, ParamError> {
        if !lambda.is_finite() || !mu.is_finite() {
            return Err(ParamError::NonFinite);
        }
        Ok(Self { lambda, mu })
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Self {
        Self {
            lambda: modulus * phase.cos(),
            mu: modulus * phase.sin(),
        }
    }

    pub fn nu(&self) -> Complex64 {
        Complex64::new(self.lambda, self.mu)
    }

    pub fn nu_bar(&self) -> Complex64 {
        self.nu().conj()
    }

    pub fn modulus(&self) -> f64 {
        self.lambda.hypot(self.mu)
    }

    /// `phi` with `nu = e^{i phi} |nu|`; undefined at `nu = 0`.
    pub fn phase(&self) -> Option<f64> {
        (self.modulus() > 0.0).then(|| self.mu.atan2(self.lambda))
    }

    /// `e^{i phi}`, or `None` at `nu = 0`.
    pub fn unit(&self) -> Option<Complex64> {
        let r = self.modulus();
        (r > 0.0).then(|| self.nu() / r)
    }

    pub fn is_zero(&self) -> bool {
        self.lambda == 0.0 && self.mu == 0.0
    }

    pub fn conjugated(&self) -> Self {
        Self {
            lambda: self.lambda,
            mu: -self.mu,
        }
    }
}

/// Half-open interval `[a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, ParamError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(ParamError::NonFinite);
        }
        if a >= b {
            return Err(ParamError::EmptyInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x < self.b
    }

    /// Reflection `x -> a + b - x`.
    pub fn reflect(&self, x: f64) -> f64 {
        self.a + self.b - x
    }
}
