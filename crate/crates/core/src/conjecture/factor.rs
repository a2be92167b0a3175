use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::ConjectureError;
use crate::Rational;

/// Prime → exponent.
pub type Factorization = BTreeMap<u64, u32>;

/// Trial division with a 2-3 wheel. `1` factors as the empty map.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize expects n >= 1");
    let mut out = Factorization::new();
    let mut n = n;
    for p in [2u64, 3] {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut p = 5u64;
    let mut step = 2;
    while p.checked_mul(p).is_some_and(|pp| pp <= n) {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Product of prime powers; `None` on overflow.
pub fn reconstruct(f: &Factorization) -> Option<u64> {
    f.iter()
        .try_fold(1u64, |acc, (&p, &e)| acc.checked_mul(p.checked_pow(e)?))
}

/// `3^2·43` style; `1` for the empty factorization.
pub fn format_factors(f: &Factorization) -> String {
    if f.is_empty() {
        return "1".into();
    }
    f.iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

/// A reduced fraction together with the factorizations of its parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredRational {
    pub num: i64,
    pub den: i64,
    /// Factors of `|num|`.
    pub num_factors: Factorization,
    pub den_factors: Factorization,
}

impl FactoredRational {
    pub fn new(r: Rational) -> Self {
        let (num, den) = (*r.numer(), *r.denom());
        FactoredRational {
            num,
            den,
            num_factors: if num == 0 { Factorization::new() } else { factorize(num.unsigned_abs()) },
            den_factors: factorize(den.unsigned_abs()),
        }
    }

    pub fn rational(&self) -> Rational {
        Rational::new(self.num, self.den)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.num < 0 { "-" } else { "" };
        if self.num == 0 {
            return write!(f, "0/1 = 0");
        }
        write!(
            f,
            "{}/{} = {sign}{} / {}",
            self.num,
            self.den,
            format_factors(&self.num_factors),
            format_factors(&self.den_factors)
        )
    }
}

/// `a / b` in exact integer arithmetic.
pub fn exact_ratio(a: Rational, b: Rational) -> Result<FactoredRational, ConjectureError> {
    if *b.numer() == 0 {
        return Err(ConjectureError::InvalidInput("division by a zero rational".into()));
    }
    let mut num = i128::from(*a.numer()) * i128::from(*b.denom());
    let mut den = i128::from(*a.denom()) * i128::from(*b.numer());
    let g = num.gcd(&den);
    num /= g;
    den /= g;
    if den < 0 {
        num = -num;
        den = -den;
    }
    let overflow = || ConjectureError::InvalidInput("ratio does not fit in 64-bit integers".into());
    let num = i64::try_from(num).map_err(|_| overflow())?;
    let den = i64::try_from(den).map_err(|_| overflow())?;
    Ok(FactoredRational::new(Rational::new_raw(num, den)))
}
