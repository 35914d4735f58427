//! Level-zero discrete-series data.

use btchar_elliptic::GateData;
use serde::{Deserialize, Serialize};

use crate::error::{CharError, Result};

/// The unramified character of `F^×` with `p ↦ ζ_order^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Twist {
    pub order: u32,
    pub exponent: i64,
}

impl Default for Twist {
    fn default() -> Self {
        Twist { order: 1, exponent: 0 }
    }
}

/// How a uniformizer of the stabilizer of a simplex acts on its coefficient space,
/// beyond the parahoric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedAction {
    /// `Π` cyclically permutes the blocks and fixes the distinguished `ρ₀^{⊗e}` line.
    #[default]
    Monomial,
    /// `Π` acts on that line by `s = (−1)^{N−1}·ρ₀((−1)^{N−1})`, which reproduces the
    /// twisted Steinberg representation with `p ↦ 1` before the unramified twist.
    Signed,
    /// No extension: evaluating on a nontrivial `Π`-coset is an error.
    Unset,
}

impl ExtendedAction {
    pub fn name(self) -> &'static str {
        match self {
            ExtendedAction::Monomial => "monomial",
            ExtendedAction::Signed => "signed",
            ExtendedAction::Unset => "unset",
        }
    }
}

/// `N`, the period `e | N`, the prime `p`, a cuspidal `ρ₀` of `GL(N/e, p)` by its
/// finite-gl label, an unramified twist and the extended-action choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSeriesSpec {
    pub n: usize,
    pub e: usize,
    pub p: u32,
    pub rho0: String,
    #[serde(default)]
    pub twist: Twist,
    #[serde(default)]
    pub extension: ExtendedAction,
    #[serde(default)]
    pub level: u32,
}

impl DiscreteSeriesSpec {
    pub fn new(n: usize, e: usize, p: u32, rho0: &str) -> DiscreteSeriesSpec {
        DiscreteSeriesSpec {
            n,
            e,
            p,
            rho0: rho0.to_string(),
            twist: Twist::default(),
            extension: ExtendedAction::default(),
            level: 0,
        }
    }

    pub fn with_twist(mut self, order: u32, exponent: i64) -> Self {
        self.twist = Twist { order, exponent };
        self
    }

    pub fn with_extension(mut self, x: ExtendedAction) -> Self {
        self.extension = x;
        self
    }

    /// Size of the general linear group carrying `ρ₀`.
    pub fn block(&self) -> usize {
        self.n / self.e
    }

    /// `e(L/F) = 1`, `f(L/F) = N/e` for the unramified field `L` of the datum.
    pub fn gate_data(&self) -> GateData {
        GateData { e_l: 1, f_l: self.block() as u32 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.e == 0 || !self.n.is_multiple_of(self.e) {
            return Err(CharError::InvalidSpec(format!("e = {} does not divide N = {}", self.e, self.n)));
        }
        if self.e != 1 && self.e != self.n {
            return Err(CharError::UnsupportedShape(format!(
                "period e = {} with N = {}; only e = 1 and e = N are implemented",
                self.e, self.n
            )));
        }
        if self.p < 2 || !(2..self.p).take_while(|d| d * d <= self.p).all(|d| !self.p.is_multiple_of(d)) {
            return Err(CharError::InvalidSpec(format!("{} is not prime", self.p)));
        }
        if self.twist.order == 0 {
            return Err(CharError::InvalidSpec("twist order must be positive".into()));
        }
        Ok(())
    }
}
