//! Reference probabilities for the shapes the tools are usually run on.
//!
//! Each entry pairs a shape with an exact conjectured (or proven) value and,
//! where one was published, the Monte Carlo estimate and sample size behind
//! it. Entries marked [`Origin::Halved`] are not independent conjectures:
//! they follow from the rank `N−1` halving rule applied to the full-rank value.

use crate::density::BipartiteShape;
use crate::numerics::Field;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Conjectured,
    Proven,
    Halved,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownValue {
    pub name: &'static str,
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub field: Field,
    pub num: i64,
    pub den: i64,
    pub origin: Origin,
    /// Published sample probability, or the printed decimal of the value.
    pub estimate: f64,
    /// Sample size behind `estimate`, when one was reported.
    pub estimate_trials: Option<u64>,
}

impl KnownValue {
    pub fn shape(&self) -> BipartiteShape {
        BipartiteShape::new(self.m, self.n, self.rank, self.field).expect("catalog shapes are valid")
    }

    pub fn exact(&self) -> Rational {
        Rational::new(self.num, self.den)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

const fn entry(
    name: &'static str,
    (m, n, rank): (usize, usize, usize),
    field: Field,
    (num, den): (i64, i64),
    origin: Origin,
    estimate: f64,
    estimate_trials: Option<u64>,
) -> KnownValue {
    KnownValue {
        name,
        m,
        n,
        rank,
        field,
        num,
        den,
        origin,
        estimate,
        estimate_trials,
    }
}

pub const KNOWN_VALUES: &[KnownValue] = &[
    entry("two-qubit", (2, 2, 4), Field::Complex, (8, 33), Origin::Conjectured, 0.242424, None),
    entry("two-qubit-rank3", (2, 2, 3), Field::Complex, (4, 33), Origin::Halved, 4.0 / 33.0, None),
    entry("two-rebit", (2, 2, 4), Field::Real, (29, 64), Origin::Proven, 0.453125, None),
    entry("two-rebit-rank3", (2, 2, 3), Field::Real, (29, 128), Origin::Halved, 29.0 / 128.0, None),
    entry("rebit-retrit", (2, 3, 6), Field::Real, (860, 6561), Origin::Conjectured, 0.1310775, Some(1_850_000_000)),
    entry("rebit-retrit-rank5", (2, 3, 5), Field::Real, (430, 6561), Origin::Halved, 430.0 / 6561.0, None),
    entry("rebit-retrit-rank4", (2, 3, 4), Field::Real, (387, 50000), Origin::Conjectured, 0.00774006, Some(800_000_000)),
    entry("qubit-qutrit", (2, 3, 6), Field::Complex, (27, 1000), Origin::Conjectured, 0.0270, Some(2_415_000_000)),
    entry("qubit-qutrit-rank5", (2, 3, 5), Field::Complex, (27, 2000), Origin::Halved, 0.0135, None),
    entry("qubit-qutrit-rank4", (2, 3, 4), Field::Complex, (7, 9900), Origin::Conjectured, 0.000707020, Some(100_000_000)),
    entry("qubit-ququart", (2, 4, 8), Field::Complex, (16, 12375), Origin::Conjectured, 0.0012929, None),
    entry("qubit-ququart-rank6", (2, 4, 6), Field::Complex, (169, 3093750), Origin::Conjectured, 0.0000546242, Some(149_000_000)),
];

pub fn find(name: &str) -> Option<&'static KnownValue> {
    KNOWN_VALUES.iter().find(|k| k.name == name)
}

pub fn for_shape(shape: &BipartiteShape) -> Option<&'static KnownValue> {
    KNOWN_VALUES.iter().find(|k| k.shape() == *shape)
}

/// The eight independently conjectured or proven values.
pub fn conjectured() -> impl Iterator<Item = &'static KnownValue> {
    KNOWN_VALUES.iter().filter(|k| k.origin != Origin::Halved)
}
