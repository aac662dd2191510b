//! Multicolor discrepancy over the rectangle family, in exact rationals.
//!
//! For a set `S` and value `y`,
//! `disc(A, S, y) = | |A^{-1}(y) ∩ S| - |S| / N | / n^2`, and the discrepancy of
//! `A` is the maximum over all non-empty rectangles and all values. The
//! balancing term uses the number of values `N`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{full_mask, ones};
use crate::cylinder::Rectangle;
use crate::error::{Error, Result};
use crate::function::{gen_trace, BaseFunction};

pub type Rational = Ratio<u64>;

/// Largest side handled by [`disc_rect_exact`].
pub const MAX_EXACT_SIDE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscFamily {
    Rectangles,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscResult {
    #[serde(with = "crate::report::rational_serde")]
    pub value: Rational,
    pub witness: Rectangle,
    pub witness_color: u32,
    pub family: DiscFamily,
}

impl DiscResult {
    pub fn is_exact(&self) -> bool {
        self.family == DiscFamily::Rectangles
    }
}

/// `-log2` of a positive rational.
pub fn neg_log2(r: &Rational) -> f64 {
    (*r.denom() as f64).log2() - (*r.numer() as f64).log2()
}

fn check_rect(a: &BaseFunction, r: &Rectangle) -> Result<()> {
    let n = a.side();
    if n > 64 || r.is_empty() || r.rows & !full_mask(n) != 0 || r.cols & !full_mask(n) != 0 {
        return Err(Error::OutOfRange(format!("rectangle {r:?} for side {n}")));
    }
    Ok(())
}

/// Signed deviation scaled by `N`: `N * count_y - |S|`.
fn scaled_deviation(a: &BaseFunction, r: &Rectangle, y: u32) -> i64 {
    let mut count = 0i64;
    for x in ones(r.rows) {
        for t in ones(r.cols) {
            if a.at(x, t) == y {
                count += 1;
            }
        }
    }
    a.colors() as i64 * count - r.area() as i64
}

fn to_rational(a: &BaseFunction, scaled: u64) -> Rational {
    let n = a.side() as u64;
    Rational::new(scaled, a.colors() as u64 * n * n)
}

/// Exact `disc(A, R, y)`.
pub fn disc_point(a: &BaseFunction, r: &Rectangle, y: u32) -> Result<Rational> {
    a.require_2d()?;
    check_rect(a, r)?;
    if y >= a.colors() {
        return Err(Error::OutOfRange(format!("value {y} (colors = {})", a.colors())));
    }
    Ok(to_rational(a, scaled_deviation(a, r, y).unsigned_abs()))
}

/// Best `(|scaled deviation|, rectangle, color)` so far; larger deviation
/// wins, then the smaller `(rows, cols, color)` key.
#[derive(Clone, Copy)]
struct Best {
    dev: u64,
    key: (u64, u64, u32),
}

impl Best {
    fn better(self, other: Best) -> Best {
        if other.dev > self.dev || (other.dev == self.dev && other.key < self.key) {
            other
        } else {
            self
        }
    }
}

/// Exact discrepancy over all rectangles.
///
/// For a fixed row set `R` and value `y`, the scaled deviation of `R x C` is
/// the sum over `t ∈ C` of the column deviations `N * count_y(R, t) - |R|`,
/// so the best column set is either all positive or all negative columns.
/// That makes the search `O(2^n * N * n)`.
pub fn disc_rect_exact(a: &BaseFunction) -> Result<DiscResult> {
    a.require_2d()?;
    let n = a.side();
    if n > MAX_EXACT_SIDE {
        return Err(Error::LimitExceeded(format!(
            "exact discrepancy supports side <= {MAX_EXACT_SIDE}, got {n}; use --samples"
        )));
    }
    let big_n = a.colors();
    // rows_with[y][t]: rows x with A(x, t) = y
    let mut rows_with = vec![vec![0u64; n]; big_n as usize];
    for x in 0..n {
        for t in 0..n {
            rows_with[a.at(x, t) as usize][t] |= 1 << x;
        }
    }
    let eval_rows = |rows: u64| -> Best {
        let size = rows.count_ones() as i64;
        let mut best = Best {
            dev: 0,
            key: (u64::MAX, u64::MAX, u32::MAX),
        };
        for y in 0..big_n {
            let (mut pos, mut neg) = (0u64, 0u64);
            let (mut pos_mask, mut neg_mask) = (0u64, 0u64);
            for t in 0..n {
                let d = big_n as i64 * (rows & rows_with[y as usize][t]).count_ones() as i64 - size;
                if d > 0 {
                    pos += d as u64;
                    pos_mask |= 1 << t;
                } else if d < 0 {
                    neg += d.unsigned_abs();
                    neg_mask |= 1 << t;
                }
            }
            let mut consider = |dev: u64, cols: u64| {
                best = best.better(Best {
                    dev,
                    key: (rows, cols, y),
                })
            };
            if pos == 0 && neg == 0 {
                consider(0, 1);
            } else {
                if pos > 0 {
                    consider(pos, pos_mask);
                }
                if neg > 0 {
                    consider(neg, neg_mask);
                }
            }
        }
        best
    };
    let best = (1..=full_mask(n))
        .into_par_iter()
        .map(eval_rows)
        .reduce(
            || Best {
                dev: 0,
                key: (u64::MAX, u64::MAX, u32::MAX),
            },
            Best::better,
        );
    let (rows, cols, color) = best.key;
    Ok(DiscResult {
        value: to_rational(a, best.dev),
        witness: Rectangle::new(rows, cols),
        witness_color: color,
        family: DiscFamily::Rectangles,
    })
}

/// Lower bound on the rectangle discrepancy from a seeded sample.
///
/// The family always contains the full square, every single row and every
/// single column, plus `samples` random rectangles where each row and column
/// is kept with probability 1/2 (resampled when empty).
pub fn disc_rect_sampled(a: &BaseFunction, samples: u64, seed: u64) -> Result<DiscResult> {
    a.require_2d()?;
    let n = a.side();
    if n > 64 {
        return Err(Error::LimitExceeded(format!("sampling supports side <= 64, got {n}")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let all = full_mask(n);
    let mut family = vec![Rectangle::new(all, all)];
    family.extend((0..n).map(|x| Rectangle::new(1 << x, all)));
    family.extend((0..n).map(|t| Rectangle::new(all, 1 << t)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let m = rng.gen::<u64>() & all;
        if m != 0 {
            return m;
        }
    };
    for _ in 0..samples {
        let rows = draw(&mut rng);
        let cols = draw(&mut rng);
        family.push(Rectangle::new(rows, cols));
    }
    let mut best = Best {
        dev: 0,
        key: (u64::MAX, u64::MAX, u32::MAX),
    };
    for r in &family {
        for y in 0..a.colors() {
            best = best.better(Best {
                dev: scaled_deviation(a, r, y).unsigned_abs(),
                key: (r.rows, r.cols, y),
            });
        }
    }
    let (rows, cols, color) = best.key;
    Ok(DiscResult {
        value: to_rational(a, best.dev),
        witness: Rectangle::new(rows, cols),
        witness_color: color,
        family: DiscFamily::Sampled { samples, seed },
    })
}

/// A bound that may not apply to the given parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundValue {
    Bits(f64),
    Inapplicable(String),
}

impl BoundValue {
    pub fn bits(&self) -> Option<f64> {
        match self {
            BoundValue::Bits(b) => Some(*b),
            BoundValue::Inapplicable(_) => None,
        }
    }
}

/// `log2((1 - 2^b / N) / disc)`: lower bound on deterministic complexity with
/// `b` help bits.
pub fn bhk_bound(disc: &Rational, b: u32, colors: u64) -> BoundValue {
    if *disc.numer() == 0 {
        return BoundValue::Inapplicable("discrepancy is zero".into());
    }
    let help_parts = 2f64.powi(b as i32);
    if b >= 64 || (1u64 << b) >= colors {
        return BoundValue::Inapplicable(format!("2^{b} >= N = {colors}"));
    }
    let numerator = 1.0 - help_parts / colors as f64;
    BoundValue::Bits(numerator.log2() + neg_log2(disc))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub q: u32,
    pub d: usize,
    pub k: usize,
    pub side: usize,
    /// `None` when the instance is out of reach; `skipped` says why.
    pub disc: Option<DiscResult>,
    pub neg_log2_disc: Option<f64>,
    /// `d^2 log2 q / (k^2 2^k)`
    pub predictor: f64,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendOptions {
    pub exact_side_limit: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for TrendOptions {
    fn default() -> Self {
        TrendOptions {
            exact_side_limit: MAX_EXACT_SIDE,
            samples: 2000,
            seed: 0,
        }
    }
}

/// Discrepancy of the trace function against its predicted decay, one row
/// per `(q, d)`. Instances over the memory budget or wider than 64 are kept
/// as skipped rows.
pub fn tmp_trend(qs: &[u32], ds: &[usize], k: usize, opts: TrendOptions) -> Result<Vec<TrendRow>> {
    if k != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, found: k });
    }
    let mut rows = Vec::new();
    for &q in qs {
        for &d in ds {
            let predictor = (d * d) as f64 * (q as f64).log2() / ((k * k) as f64 * 2f64.powi(k as i32));
            let side = (q as u128).checked_pow((d * d) as u32).map_or(usize::MAX, |s| s.min(usize::MAX as u128) as usize);
            let mut row = TrendRow {
                q,
                d,
                k,
                side,
                disc: None,
                neg_log2_disc: None,
                predictor,
                skipped: None,
            };
            if side > 64 {
                row.skipped = Some(format!("side {side} exceeds 64"));
                rows.push(row);
                continue;
            }
            let t = match gen_trace(q, d, k) {
                Ok(t) => t,
                Err(e @ Error::BudgetExceeded { .. }) => {
                    row.skipped = Some(e.to_string());
                    rows.push(row);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let disc = if t.side() <= opts.exact_side_limit.min(MAX_EXACT_SIDE) {
                disc_rect_exact(&t)?
            } else {
                disc_rect_sampled(&t, opts.samples, opts.seed)?
            };
            row.neg_log2_disc = Some(neg_log2(&disc.value));
            row.disc = Some(disc);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Aligned text rendering of a trend table.
pub fn format_trend_table(rows: &[TrendRow]) -> String {
    let mut out = format!(
        "{:>3} {:>2} {:>2} {:>6} {:>14} {:>8} {:>10} {:>9}\n",
        "q", "d", "k", "side", "disc", "mode", "-log2disc", "predictor"
    );
    for r in rows {
        let (disc, mode, neg) = match (&r.disc, r.neg_log2_disc) {
            (Some(d), Some(v)) => (
                d.value.to_string(),
                if d.is_exact() { "exact" } else { "sampled" },
                format!("{v:.4}"),
            ),
            _ => ("-".to_string(), "skipped", "-".to_string()),
        };
        out.push_str(&format!(
            "{:>3} {:>2} {:>2} {:>6} {:>14} {:>8} {:>10} {:>9.4}\n",
            r.q, r.d, r.k, r.side, disc, mode, neg, r.predictor
        ));
    }
    for r in rows.iter().filter(|r| r.skipped.is_some()) {
        out.push_str(&format!(
            "skipped q={} d={}: {}\n",
            r.q,
            r.d,
            r.skipped.as_deref().unwrap_or_default()
        ));
    }
    out
}
