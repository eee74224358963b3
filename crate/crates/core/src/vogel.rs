//! Universal dimension formulas in Vogel's parameters.
//!
//! Everything is evaluated pointwise in exact arithmetic. The distinguished
//! parameter is `α`: `dim_yk` gives the Cartan power `Y_k` with highest weight
//! `k·θ` when `α` is the parameter attached to that family (for the rows
//! used here, `α = -2`). Primed variants come from swapping `α` with `β` or `γ`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{parse_rational, rat, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VogelError {
    #[error("denominator factor {factor} vanishes")]
    Degenerate { factor: &'static str },
    #[error("k must be at least 1")]
    ZeroPower,
    #[error("expected three comma-separated rationals, got {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VogelParams {
    #[serde(with = "crate::linalg::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "crate::linalg::serde_rational")]
    pub beta: Rational,
    #[serde(with = "crate::linalg::serde_rational")]
    pub gamma: Rational,
}

impl VogelParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        VogelParams { alpha, beta, gamma }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        VogelParams::new(rat(a), rat(b), rat(c))
    }

    /// `(−2, 4, n−4)`.
    pub fn so(n: i64) -> Self {
        VogelParams::from_ints(-2, 4, n - 4)
    }

    /// `(−2, m+4, 2m+4)` for `m = 0, 1, 2, 4, 8` (so₈, f₄, e₆, e₇, e₈).
    pub fn exceptional(m: i64) -> Self {
        VogelParams::from_ints(-2, m + 4, 2 * m + 4)
    }

    pub fn t(&self) -> Rational {
        &self.alpha + &self.beta + &self.gamma
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        VogelParams::new(&self.alpha * s, &self.beta * s, &self.gamma * s)
    }

    /// Exchanges the roles of `α` and `β`.
    pub fn swap_alpha_beta(&self) -> Self {
        VogelParams::new(self.beta.clone(), self.alpha.clone(), self.gamma.clone())
    }

    /// Exchanges the roles of `α` and `γ`.
    pub fn swap_alpha_gamma(&self) -> Self {
        VogelParams::new(self.gamma.clone(), self.beta.clone(), self.alpha.clone())
    }
}

impl fmt::Display for VogelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::linalg::format_rational as r;
        write!(f, "({}, {}, {})", r(&self.alpha), r(&self.beta), r(&self.gamma))
    }
}

impl FromStr for VogelParams {
    type Err = VogelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(VogelError::Parse(s.to_string()));
        }
        let q = |p: &str| parse_rational(p).map_err(|_| VogelError::Parse(s.to_string()));
        Ok(VogelParams::new(q(parts[0])?, q(parts[1])?, q(parts[2])?))
    }
}

/// `(1+x)(2+x)⋯(y+x) / y!`, i.e. `binom(y+x, y)`.
pub fn rational_binomial(x: &Rational, y: u32) -> Rational {
    (1..=y).fold(Rational::one(), |acc, i| acc * (x + rat(i as i64)) / rat(i as i64))
}

fn nonzero(q: Rational, factor: &'static str) -> Result<Rational, VogelError> {
    if q.is_zero() {
        Err(VogelError::Degenerate { factor })
    } else {
        Ok(q)
    }
}

pub fn dim_g(p: &VogelParams) -> Result<Rational, VogelError> {
    let (a, b, c, t) = (&p.alpha, &p.beta, &p.gamma, p.t());
    let two_t = &t * rat(2);
    let den = nonzero(a.clone(), "α")? * nonzero(b.clone(), "β")? * nonzero(c.clone(), "γ")?;
    Ok((a - &two_t) * (b - &two_t) * (c - &two_t) / den)
}

pub fn dim_y2(p: &VogelParams) -> Result<Rational, VogelError> {
    let (a, b, c, t) = (&p.alpha, &p.beta, &p.gamma, p.t());
    let two_t = &t * rat(2);
    let den = nonzero(a * a, "α")?
        * nonzero(b.clone(), "β")?
        * nonzero(c.clone(), "γ")?
        * nonzero(a - b, "α−β")?
        * nonzero(a - c, "α−γ")?;
    let num = &t * (b - &two_t) * (c - &two_t) * (b + &t) * (c + &t) * (a * rat(3) - &two_t);
    Ok(-num / den)
}

/// Carries an overall `1/3` relative to the commonly printed display, which
/// overshoots the Cartan cube `3θ` by exactly that factor on every row.
pub fn dim_y3(p: &VogelParams) -> Result<Rational, VogelError> {
    let (a, b, c, t) = (&p.alpha, &p.beta, &p.gamma, p.t());
    let two_t = &t * rat(2);
    let den = nonzero(a * a * a * rat(3), "α")?
        * nonzero(b.clone(), "β")?
        * nonzero(c.clone(), "γ")?
        * nonzero(a - b, "α−β")?
        * nonzero(a - c, "α−γ")?
        * nonzero(a * rat(2) - b, "2α−β")?
        * nonzero(a * rat(2) - c, "2α−γ")?;
    let num = &t
        * (a - &two_t)
        * (b - &two_t)
        * (c - &two_t)
        * (b + &t)
        * (c + &t)
        * (&t + b - a)
        * (&t + c - a)
        * (a * rat(5) - &two_t);
    Ok(-num / den)
}

pub fn dim_yk(p: &VogelParams, k: u32) -> Result<Rational, VogelError> {
    if k == 0 {
        return Err(VogelError::ZeroPower);
    }
    let (a, b, c, t) = (&p.alpha, &p.beta, &p.gamma, p.t());
    let a = nonzero(a.clone(), "α")?;
    let kq = rat(k as i64);
    let two_t = &t * rat(2);
    let lead_num = &t - (&kq - ratio(1, 2)) * &a;
    let lead_den = nonzero(&t + &a / rat(2), "t+α/2")?;
    let num = rational_binomial(&(-&two_t / &a - rat(2)), k)
        * rational_binomial(&((b - &two_t) / &a - rat(1)), k)
        * rational_binomial(&((c - &two_t) / &a - rat(1)), k);
    let den = nonzero(rational_binomial(&(-b / &a - rat(1)), k), "binom(−β/α−1+k, k)")?
        * nonzero(rational_binomial(&(-c / &a - rat(1)), k), "binom(−γ/α−1+k, k)")?;
    Ok(lead_num / lead_den * num / den)
}
