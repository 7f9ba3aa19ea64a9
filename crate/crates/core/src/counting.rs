//! Exact counting for the permutation metric: derangement numbers, ball
//! sizes, harmonic numbers, and a consolidated bounds report for `f(n,s)`.
//!
//! Count-valued quantities use arbitrary-precision integers and bound
//! comparisons use exact rationals; only the harmonic upper bound and the
//! `3·s!·(n-s)·ln n` bound are floating point, and those are display-only.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("radius {k} exceeds degree {n}")]
    RadiusOutOfRange { n: u64, k: u64 },
    #[error("s must satisfy 1 <= s <= n (got n = {n}, s = {s})")]
    SOutOfRange { n: u64, s: u64 },
    #[error("s must be at least 3 (got {s})")]
    STooSmall { s: u64 },
    #[error("requires n - s >= 2 (got n = {n}, s = {s})")]
    GapTooSmall { n: u64, s: u64 },
}

/// Number of derangements of `[i]`, by the recurrence
/// `d_i = (i-1)(d_{i-1} + d_{i-2})` with `d_0 = 1`, `d_1 = 0`.
pub fn derangements(i: u64) -> BigUint {
    let mut prev = BigUint::one(); // d_0
    if i == 0 {
        return prev;
    }
    let mut cur = BigUint::zero(); // d_1
    for j in 2..=i {
        let next = (j - 1) * (&cur + &prev);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn factorial_big(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of permutations within Hamming distance `k` of a fixed centre in
/// `S_n`: the sum of `C(n,i)·d_i` for `i = 0..=k`.
pub fn ball_size(n: u64, k: u64) -> Result<BigUint, CountError> {
    if k > n {
        return Err(CountError::RadiusOutOfRange { n, k });
    }
    let mut acc = BigUint::zero();
    for i in 0..=k {
        acc += binomial(n, i) * derangements(i);
    }
    Ok(acc)
}

/// Partial harmonic sum `H_b = 1 + 1/2 + ... + 1/b`, Kahan-compensated.
pub fn harmonic(b: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=b {
        let y = 1.0 / i as f64 - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

// Harmonic value for display in reports: exact summation when feasible,
// otherwise the asymptotic expansion ln b + gamma + 1/(2b) - 1/(12b^2),
// whose error is below f64 resolution in that range.
fn harmonic_display(b: &BigUint) -> f64 {
    const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;
    match b.to_u64() {
        Some(b) if b <= 100_000_000 => harmonic(b),
        _ => {
            let bf = b.to_f64().unwrap_or(f64::INFINITY);
            bf.ln() + EULER_MASCHERONI + 1.0 / (2.0 * bf) - 1.0 / (12.0 * bf * bf)
        }
    }
}

/// The even theorem constant `2α` for `s ≥ 3`: the largest integer `m ≥ 1`
/// with `(2m-2)² ≤ 2s-2`, computed without floating point. The light
/// threshold of the guaranteed matching is `2α - 1`.
pub fn alpha2(s: u64) -> Result<u64, CountError> {
    if s < 3 {
        return Err(CountError::STooSmall { s });
    }
    let target = 2u128 * s as u128 - 2;
    let mut m = 1u64;
    while (2 * (m as u128 + 1) - 2).pow(2) <= target {
        m += 1;
    }
    Ok(m)
}

/// Exact check of the inequality `b/n! > 1/(3·s!)` used by the factorial
/// upper bound; requires `n - s ≥ 2`.
pub fn blowbnd_check(n: u64, s: u64) -> Result<bool, CountError> {
    if s < 1 || s > n {
        return Err(CountError::SOutOfRange { n, s });
    }
    if n - s < 2 {
        return Err(CountError::GapTooSmall { n, s });
    }
    let b = ball_size(n, n - s)?;
    Ok(3u32 * factorial_big(s) * b > factorial_big(n))
}

/// Whether a bound is inclusive, strict, or an exactly known value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `f(n,s) ≥ value`.
    LowerInclusive,
    /// `f(n,s) > value`.
    LowerStrict,
    /// `f(n,s) ≤ value`.
    Upper,
    /// `f(n,s) = value`.
    Exact,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::LowerInclusive => ">=",
            BoundKind::LowerStrict => ">",
            BoundKind::Upper => "<=",
            BoundKind::Exact => "=",
        }
    }
}

/// One populated bound of a [`BoundsReport`], for serialization.
#[derive(Debug, Clone)]
pub struct BoundEntry {
    pub name: &'static str,
    pub kind: BoundKind,
    /// Rendered value: exact rationals as `p/q`, floats in decimal.
    pub value: String,
    /// Exact rational value where the bound is exact arithmetic.
    pub exact: Option<BigRational>,
}

/// Consolidated lower/upper bounds on `f(n,s)`.
///
/// Exactly the fields applicable to `(n,s)` are populated. Each entry
/// records whether it is strict; the ball lower bound is inclusive while
/// the square-root, `3n/4`, and factorial lower bounds are strict.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub n: u64,
    pub s: u64,
    /// Ball size `b = B(n, n-s)`.
    pub b: BigUint,
    /// `n!/b`, inclusive lower bound (exact rational).
    pub lower_ball: BigRational,
    /// Ceiling of `lower_ball`, the integer form of the same bound.
    pub lower_ball_ceil: BigUint,
    /// `H_b · n!/b`, upper bound (display-only float).
    pub upper_harmonic: f64,
    /// `2s/(s+1)·s!`, strict lower bound; `s ≤ n-2` only.
    pub lower_factorial: Option<BigRational>,
    /// `3·s!·(n-s)·ln n`, upper bound (display-only float); `s ≤ n-2` only.
    pub upper_factorial_log: Option<f64>,
    /// `2α·n/2`, strict lower bound; `s ≥ 3` only.
    pub lower_sqrt: Option<BigRational>,
    /// `3n/4`, strict lower bound; `s = 2` only.
    pub lower_3n4: Option<BigRational>,
    /// `⌊n/2⌋+1`, the exact value of `f(n,1)`; `s = 1` only.
    pub exact_s1: Option<u64>,
    /// `n!`, the exact value for `s ∈ {n-1, n}`.
    pub trivial_top: Option<BigUint>,
}

fn big_ratio(p: BigUint, q: BigUint) -> BigRational {
    BigRational::new(p.into(), q.into())
}

impl BoundsReport {
    /// Populated bounds in a fixed serialization order.
    pub fn entries(&self) -> Vec<BoundEntry> {
        let mut out = Vec::new();
        if let Some(v) = self.exact_s1 {
            out.push(BoundEntry {
                name: "exact_s1",
                kind: BoundKind::Exact,
                value: v.to_string(),
                exact: Some(BigRational::from_integer(v.into())),
            });
        }
        if let Some(v) = &self.trivial_top {
            out.push(BoundEntry {
                name: "trivial_top",
                kind: BoundKind::Exact,
                value: v.to_string(),
                exact: Some(BigRational::from_integer(v.clone().into())),
            });
        }
        out.push(BoundEntry {
            name: "lower_ball",
            kind: BoundKind::LowerInclusive,
            value: format!("{} (ceil {})", self.lower_ball, self.lower_ball_ceil),
            exact: Some(self.lower_ball.clone()),
        });
        if let Some(v) = &self.lower_3n4 {
            out.push(BoundEntry {
                name: "lower_3n4",
                kind: BoundKind::LowerStrict,
                value: v.to_string(),
                exact: Some(v.clone()),
            });
        }
        if let Some(v) = &self.lower_sqrt {
            out.push(BoundEntry {
                name: "lower_sqrt",
                kind: BoundKind::LowerStrict,
                value: v.to_string(),
                exact: Some(v.clone()),
            });
        }
        if let Some(v) = &self.lower_factorial {
            out.push(BoundEntry {
                name: "lower_factorial",
                kind: BoundKind::LowerStrict,
                value: v.to_string(),
                exact: Some(v.clone()),
            });
        }
        out.push(BoundEntry {
            name: "upper_harmonic",
            kind: BoundKind::Upper,
            value: format!("{:.6}", self.upper_harmonic),
            exact: None,
        });
        if let Some(v) = self.upper_factorial_log {
            out.push(BoundEntry {
                name: "upper_factorial_log",
                kind: BoundKind::Upper,
                value: format!("{v:.6}"),
                exact: None,
            });
        }
        out
    }

    /// Strongest implied integer lower bound on `f(n,s)`, combining the
    /// exact-rational bounds (floats excluded): inclusive bounds round up,
    /// strict bounds take floor plus one, exact values stand as themselves.
    pub fn implied_minimum(&self) -> BigUint {
        let mut best = self
            .lower_ball
            .ceil()
            .to_integer()
            .to_biguint()
            .expect("nonnegative");
        let mut raise = |r: &BigRational| {
            let candidate = (r.floor().to_integer() + 1u32)
                .to_biguint()
                .expect("nonnegative");
            if candidate > best {
                best = candidate;
            }
        };
        if let Some(v) = &self.lower_3n4 {
            raise(v);
        }
        if let Some(v) = &self.lower_sqrt {
            raise(v);
        }
        if let Some(v) = &self.lower_factorial {
            raise(v);
        }
        if let Some(v) = self.exact_s1 {
            let v: BigUint = v.into();
            if v > best {
                best = v;
            }
        }
        if let Some(v) = &self.trivial_top {
            if *v > best {
                best = v.clone();
            }
        }
        best
    }
}

/// Assembles every bound applicable to `(n, s)`.
pub fn bounds_report(n: u64, s: u64) -> Result<BoundsReport, CountError> {
    if n == 0 || s < 1 || s > n {
        return Err(CountError::SOutOfRange { n, s });
    }
    let b = ball_size(n, n - s)?;
    let nfact = factorial_big(n);
    let lower_ball = big_ratio(nfact.clone(), b.clone());
    let lower_ball_ceil = lower_ball
        .ceil()
        .to_integer()
        .to_biguint()
        .expect("nonnegative");
    debug_assert!(
        (&lower_ball * BigRational::from_integer(b.clone().into()))
            .is_integer(),
        "lower_ball * b must equal n! exactly"
    );
    let upper_harmonic = harmonic_display(&b) * lower_ball.to_f64().unwrap_or(f64::INFINITY);

    let (lower_factorial, upper_factorial_log) = if n - s >= 2 {
        let sfact = factorial_big(s);
        let lf = big_ratio(2u32 * s * &sfact, (s + 1).into());
        let uf = 3.0
            * sfact.to_f64().unwrap_or(f64::INFINITY)
            * (n - s) as f64
            * (n as f64).ln();
        (Some(lf), Some(uf))
    } else {
        (None, None)
    };

    let lower_sqrt = if s >= 3 {
        Some(big_ratio(alpha2(s)? * n, 2u32.into()))
    } else {
        None
    };
    let lower_3n4 = if s == 2 {
        Some(big_ratio((3 * n).into(), 4u32.into()))
    } else {
        None
    };
    let exact_s1 = (s == 1).then_some(n / 2 + 1);
    let trivial_top = (s + 1 >= n).then(|| nfact.clone());

    Ok(BoundsReport {
        n,
        s,
        b,
        lower_ball,
        lower_ball_ceil,
        upper_harmonic,
        lower_factorial,
        upper_factorial_log,
        lower_sqrt,
        lower_3n4,
        exact_s1,
        trivial_top,
    })
}
