//! Exact values: cyclotomic integers with a rational denominator, and character
//! values carrying their provenance.

use btchar_finite_gl::Cyclo;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::spec::ExtendedAction;

/// `num / den` with `num ∈ Z[ζ_m]`, `den > 0`, in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCyclo {
    pub num: Cyclo,
    pub den: i64,
}

impl QCyclo {
    pub fn zero(m: u32) -> QCyclo {
        QCyclo { num: Cyclo::zero(m), den: 1 }
    }

    pub fn from_cyclo(c: Cyclo) -> QCyclo {
        QCyclo { num: c, den: 1 }
    }

    fn normalized(num: Cyclo, den: i64) -> QCyclo {
        let g = num.c.iter().fold(den, |acc, &x| acc.gcd(&x));
        let g = if den < 0 { -g } else { g };
        QCyclo { num: Cyclo { m: num.m, c: num.c.iter().map(|x| x / g).collect() }, den: den / g }
    }

    pub fn add(&self, o: &QCyclo) -> QCyclo {
        let l = self.den.lcm(&o.den);
        let a = self.num.scale(l / self.den).add(&o.num.scale(l / o.den));
        QCyclo::normalized(a, l)
    }

    pub fn mul_ratio(&self, r: Ratio<i64>) -> QCyclo {
        QCyclo::normalized(self.num.scale(*r.numer()), self.den * r.denom())
    }

    pub fn as_cyclo(&self) -> Option<Cyclo> {
        (self.den == 1).then(|| self.num.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn render(&self) -> String {
        let s = self.num.render();
        if self.den == 1 {
            s
        } else {
            format!("({s})/{}", self.den)
        }
    }
}

/// The formula that produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Simple,
    FixedSum,
    Orbital,
    FrobeniusOracle,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Simple => "simple",
            Route::FixedSum => "fixed_sum",
            Route::Orbital => "orbital",
            Route::FrobeniusOracle => "frobenius_oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub value: Cyclo,
    pub route: Route,
    pub extension: ExtendedAction,
    /// Radius of the patch the value was computed on, if any.
    pub radius: Option<usize>,
    /// Set when every truncation involved is certified free of boundary effects.
    pub certified: bool,
    /// Outcome of the divisibility gate, for the simple formula.
    pub gate: Option<bool>,
    /// Number of nonzero summands.
    pub terms: usize,
}

impl CharacterValue {
    pub fn render(&self) -> String {
        self.value.render()
    }
}
