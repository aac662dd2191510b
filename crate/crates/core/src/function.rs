//! Base functions `A: [n]^dims -> [N]`, their boolean lifts and the `noffn`
//! text format.
//!
//! Values are 0-based: the color set `[N]` is `{0, .., N-1}`. Tables are
//! stored row-major with the last coordinate varying fastest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, FormatError, Result};

/// A dense function on the cube `[side]^dims` with values in `[0, colors)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseFunction {
    dims: usize,
    side: usize,
    colors: u32,
    values: Vec<u32>,
}

impl BaseFunction {
    /// Build from a row-major value table, validating every invariant.
    pub fn new(dims: usize, side: usize, colors: u32, values: Vec<u32>) -> Result<Self> {
        if dims == 0 || side == 0 || colors == 0 {
            return Err(Error::InvalidParameter(format!(
                "dims, side and colors must be >= 1 (got {dims}, {side}, {colors})"
            )));
        }
        let expected = (side as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
        if values.len() as u128 != expected {
            return Err(Error::StructuralViolation(format!(
                "table has {} values, expected side^dims = {expected}",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| v >= colors) {
            return Err(Error::OutOfRange(format!(
                "value {v} at index {i} (colors = {colors})"
            )));
        }
        Ok(BaseFunction {
            dims,
            side,
            colors,
            values,
        })
    }

    /// Two-dimensional function from explicit rows.
    pub fn from_rows(colors: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let side = rows.len();
        if rows.iter().any(|r| r.len() != side) {
            return Err(Error::StructuralViolation("rows must form a square".into()));
        }
        Self::new(2, side, colors, rows.concat())
    }

    /// The constant function with value `value`.
    pub fn constant(dims: usize, side: usize, colors: u32, value: u32) -> Result<Self> {
        let len = budget::checked_entries(side, dims, budget::limit_bytes())?;
        Self::new(dims, side, colors, vec![value; len])
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Flat index of a coordinate tuple.
    pub fn index_of(&self, point: &[usize]) -> Result<usize> {
        if point.len() != self.dims {
            return Err(Error::OutOfRange(format!(
                "point of arity {} for a {}-dimensional function",
                point.len(),
                self.dims
            )));
        }
        let mut idx = 0usize;
        for &x in point {
            if x >= self.side {
                return Err(Error::OutOfRange(format!("coordinate {x} (side {})", self.side)));
            }
            idx = idx * self.side + x;
        }
        Ok(idx)
    }

    /// Coordinate tuple of a flat index.
    pub fn point_of(&self, mut idx: usize) -> Vec<usize> {
        let mut point = vec![0; self.dims];
        for slot in point.iter_mut().rev() {
            *slot = idx % self.side;
            idx /= self.side;
        }
        point
    }

    pub fn value(&self, point: &[usize]) -> Result<u32> {
        Ok(self.values[self.index_of(point)?])
    }

    /// `A(x, y)` for two-dimensional functions. Panics on out-of-range input.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> u32 {
        debug_assert_eq!(self.dims, 2);
        self.values[x * self.side + y]
    }

    pub(crate) fn require_2d(&self) -> Result<()> {
        if self.dims != 2 {
            return Err(Error::UnsupportedDimension {
                expected: 2,
                found: self.dims,
            });
        }
        Ok(())
    }

    /// Same table with values permuted by `perm` (`perm[v]` replaces `v`).
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.colors as usize {
            return Err(Error::InvalidParameter("permutation length must equal colors".into()));
        }
        Self::new(
            self.dims,
            self.side,
            self.colors,
            self.values.iter().map(|&v| perm[v as usize]).collect(),
        )
    }

    /// Transpose of a two-dimensional function.
    pub fn transpose(&self) -> Result<Self> {
        self.require_2d()?;
        let n = self.side;
        let mut values = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                values[y * n + x] = self.at(x, y);
            }
        }
        Self::new(2, n, self.colors, values)
    }
}

/// Uniform i.i.d. values from a ChaCha8 stream seeded with `seed`.
pub fn gen_random(dims: usize, side: usize, colors: u32, seed: u64) -> Result<BaseFunction> {
    gen_random_within(dims, side, colors, seed, budget::limit_bytes())
}

/// [`gen_random`] with an explicit byte budget.
pub fn gen_random_within(
    dims: usize,
    side: usize,
    colors: u32,
    seed: u64,
    limit_bytes: u64,
) -> Result<BaseFunction> {
    if dims == 0 || side == 0 || colors == 0 {
        return Err(Error::InvalidParameter(
            "dims, side and colors must be >= 1".into(),
        ));
    }
    let len = budget::checked_entries(side, dims, limit_bytes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..len).map(|_| rng.gen_range(0..colors)).collect();
    BaseFunction::new(dims, side, colors, values)
}

/// Cyclic Latin square `A(x, y) = (x + y) mod side`.
pub fn gen_latin(side: usize) -> Result<BaseFunction> {
    if side == 0 {
        return Err(Error::InvalidParameter("side must be >= 1".into()));
    }
    let len = budget::checked_entries(side, 2, budget::limit_bytes())?;
    let colors = u32::try_from(side)
        .map_err(|_| Error::InvalidParameter(format!("side {side} too large")))?;
    let mut values = Vec::with_capacity(len);
    for x in 0..side {
        for y in 0..side {
            values.push(((x + y) % side) as u32);
        }
    }
    BaseFunction::new(2, side, colors, values)
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= q {
        if q.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// A `dim x dim` matrix over the prime field `F_order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldMatrix {
    order: u32,
    dim: usize,
    entries: Vec<u32>,
}

impl FieldMatrix {
    pub fn new(order: u32, dim: usize, entries: Vec<u32>) -> Result<Self> {
        if !is_prime(order as u64) {
            return Err(Error::NotPrime(order as u64));
        }
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::StructuralViolation(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Ok(FieldMatrix {
            order,
            dim,
            entries: entries.into_iter().map(|e| e % order).collect(),
        })
    }

    pub fn identity(order: u32, dim: usize) -> Result<Self> {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self::new(order, dim, entries)
    }

    /// Decode a coordinate index: base-`order` digits, row-major, with the
    /// most significant digit holding entry `(0, 0)`.
    pub fn from_index(order: u32, dim: usize, mut index: u64) -> Result<Self> {
        let cells = dim * dim;
        let mut entries = vec![0u32; cells];
        for slot in entries.iter_mut().rev() {
            *slot = (index % order as u64) as u32;
            index /= order as u64;
        }
        if index != 0 {
            return Err(Error::OutOfRange("matrix index".into()));
        }
        Self::new(order, dim, entries)
    }

    /// Inverse of [`FieldMatrix::from_index`].
    pub fn to_index(&self) -> u64 {
        self.entries
            .iter()
            .fold(0u64, |acc, &e| acc * self.order as u64 + e as u64)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.dim + c]
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.order, other.order);
        assert_eq!(self.dim, other.dim);
        let (d, q) = (self.dim, self.order as u64);
        let mut entries = vec![0u32; d * d];
        for r in 0..d {
            for c in 0..d {
                let s: u64 = (0..d)
                    .map(|t| self.get(r, t) as u64 * other.get(t, c) as u64)
                    .sum();
                entries[r * d + c] = (s % q) as u32;
            }
        }
        FieldMatrix {
            order: self.order,
            dim: d,
            entries,
        }
    }

    pub fn trace(&self) -> u32 {
        let s: u64 = (0..self.dim).map(|i| self.get(i, i) as u64).sum();
        (s % self.order as u64) as u32
    }
}

/// The matrix trace function `T(B_1, .., B_k) = Tr(B_1 B_2 .. B_k)` over
/// `F_q`, one coordinate per matrix (side `q^(d^2)`, colors `q`).
pub fn gen_trace(q: u32, d: usize, k: usize) -> Result<BaseFunction> {
    gen_trace_within(q, d, k, budget::limit_bytes())
}

pub fn gen_trace_within(q: u32, d: usize, k: usize, limit_bytes: u64) -> Result<BaseFunction> {
    if !is_prime(q as u64) {
        return Err(Error::NotPrime(q as u64));
    }
    if d == 0 || k == 0 {
        return Err(Error::InvalidParameter("d and k must be >= 1".into()));
    }
    let cells = u32::try_from(d * d)
        .map_err(|_| Error::InvalidParameter("matrix dimension too large".into()))?;
    let side = (q as u128)
        .checked_pow(cells)
        .filter(|&s| s <= usize::MAX as u128)
        .ok_or(Error::BudgetExceeded {
            entries: u128::MAX,
            bytes: u128::MAX,
            limit_bytes,
        })? as usize;
    let len = budget::checked_entries(side, k, limit_bytes)?;
    let matrices: Vec<FieldMatrix> = (0..side as u64)
        .map(|i| FieldMatrix::from_index(q, d, i))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(len);
    let mut tuple = vec![0usize; k];
    for _ in 0..len {
        let mut acc = matrices[tuple[0]].clone();
        for &t in &tuple[1..] {
            acc = acc.mul(&matrices[t]);
        }
        values.push(acc.trace());
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < side {
                break;
            }
            *slot = 0;
        }
    }
    BaseFunction::new(k, side, q, values)
}

/// How a base function is turned into a boolean function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LiftKind {
    /// Indicator `f(x, y) = [A(x) = y]`: the graph function.
    Unary,
    /// `f(x, i)` = bit `i` of `A(x)`, least significant first.
    Binary,
    /// `f(x, y) = [A(x) >= y]`.
    GreaterThan,
}

/// A lifted function stored as an explicit truth table of fibers: fiber `x`
/// occupies `table[x * last_dim .. (x + 1) * last_dim]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanFunction {
    dims: usize,
    side: usize,
    colors: u32,
    kind: LiftKind,
    last_dim: usize,
    table: Vec<bool>,
}

/// Number of bits in the binary lift of `colors` values.
pub fn binary_width(colors: u32) -> usize {
    crate::bits::ceil_log2(colors as u64) as usize
}

fn last_dim_for(kind: LiftKind, colors: u32) -> usize {
    match kind {
        LiftKind::Unary | LiftKind::GreaterThan => colors as usize,
        LiftKind::Binary => binary_width(colors),
    }
}

impl BooleanFunction {
    /// Wrap an arbitrary truth table; only its length is checked here, the
    /// fiber structure is checked by [`base_of`].
    pub fn from_table(
        dims: usize,
        side: usize,
        colors: u32,
        kind: LiftKind,
        table: Vec<bool>,
    ) -> Result<Self> {
        let last_dim = last_dim_for(kind, colors);
        let points = (side as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
        if table.len() as u128 != points * last_dim as u128 {
            return Err(Error::StructuralViolation(format!(
                "truth table of length {} for {points} fibers of width {last_dim}",
                table.len()
            )));
        }
        Ok(BooleanFunction {
            dims,
            side,
            colors,
            kind,
            last_dim,
            table,
        })
    }

    pub fn kind(&self) -> LiftKind {
        self.kind
    }

    pub fn last_dim(&self) -> usize {
        self.last_dim
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn fiber(&self, flat: usize) -> &[bool] {
        &self.table[flat * self.last_dim..(flat + 1) * self.last_dim]
    }

    /// `f(x, y)` for a flat base index `x`.
    pub fn eval(&self, flat: usize, y: usize) -> Result<bool> {
        if y >= self.last_dim || (flat + 1) * self.last_dim > self.table.len() {
            return Err(Error::OutOfRange(format!("input ({flat}, {y})")));
        }
        Ok(self.table[flat * self.last_dim + y])
    }
}

pub fn lift(base: &BaseFunction, kind: LiftKind) -> Result<BooleanFunction> {
    if kind == LiftKind::Binary && base.colors() < 2 {
        return Err(Error::InvalidParameter("binary lift needs colors >= 2".into()));
    }
    let width = last_dim_for(kind, base.colors());
    let mut table = Vec::with_capacity(base.len() * width);
    for &v in base.values() {
        let v = v as usize;
        match kind {
            LiftKind::Unary => table.extend((0..width).map(|y| y == v)),
            LiftKind::Binary => table.extend((0..width).map(|i| (v >> i) & 1 == 1)),
            LiftKind::GreaterThan => table.extend((0..width).map(|y| v >= y)),
        }
    }
    BooleanFunction::from_table(base.dims(), base.side(), base.colors(), kind, table)
}

/// Recover the base function, rejecting fibers that violate the lift kind.
pub fn base_of(f: &BooleanFunction) -> Result<BaseFunction> {
    let points = f.table.len() / f.last_dim.max(1);
    let shape = BaseFunction {
        dims: f.dims,
        side: f.side,
        colors: f.colors,
        values: Vec::new(),
    };
    let mut values = Vec::with_capacity(points);
    for flat in 0..points {
        let fiber = f.fiber(flat);
        let bad = |why: &str| {
            Error::StructuralViolation(format!(
                "{:?} fiber at {:?} {why}: {:?}",
                f.kind,
                shape.point_of(flat),
                fiber.iter().map(|&b| b as u8).collect::<Vec<_>>()
            ))
        };
        let v = match f.kind {
            LiftKind::Unary => {
                let mut ones = fiber.iter().enumerate().filter(|(_, &b)| b);
                match (ones.next(), ones.next()) {
                    (Some((y, _)), None) => y,
                    (None, _) => return Err(bad("has no one")),
                    (Some(_), Some(_)) => return Err(bad("has more than one one")),
                }
            }
            LiftKind::Binary => fiber
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| 1usize << i)
                .sum(),
            LiftKind::GreaterThan => {
                let count = fiber.iter().take_while(|&&b| b).count();
                if count == 0 {
                    return Err(bad("is zero at y = 0"));
                }
                if fiber[count..].iter().any(|&b| b) {
                    return Err(bad("is not a prefix of ones"));
                }
                count - 1
            }
        };
        if v >= f.colors as usize {
            return Err(bad("encodes a value outside [0, colors)"));
        }
        values.push(v as u32);
    }
    BaseFunction::new(f.dims, f.side, f.colors, values)
}

/// Magic line of the function file format.
pub const FUNCTION_MAGIC: &str = "noffn 1";

/// `noffn 1\n<dims> <side> <colors>\n<values...>\n`
pub fn serialize(a: &BaseFunction) -> String {
    let mut out = format!("{FUNCTION_MAGIC}\n{} {} {}\n", a.dims, a.side, a.colors);
    join_into(&mut out, a.values.iter());
    out.push('\n');
    out
}

pub(crate) fn join_into<T: std::fmt::Display>(out: &mut String, items: impl Iterator<Item = T>) {
    use std::fmt::Write;
    for (i, v) in items.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
}

/// Strict decimal: digits only, no sign, no leading zeros except `0` itself.
pub(crate) fn parse_decimal(tok: &str) -> std::result::Result<u64, FormatError> {
    let ok = !tok.is_empty()
        && tok.bytes().all(|b| b.is_ascii_digit())
        && (tok == "0" || !tok.starts_with('0'));
    if !ok {
        return Err(FormatError::Malformed(format!("`{tok}` is not a decimal number")));
    }
    tok.parse::<u64>()
        .map_err(|_| FormatError::Malformed(format!("`{tok}` does not fit in 64 bits")))
}

/// Split a stream into exactly `count` newline-terminated lines of single
/// space-separated tokens.
pub(crate) fn strict_lines<'t>(
    text: &'t str,
    magic: &str,
    count: usize,
) -> std::result::Result<Vec<Vec<&'t str>>, FormatError> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| FormatError::Malformed("missing trailing newline".into()))?;
    let lines: Vec<&str> = body.split('\n').collect();
    let first = lines.first().copied().unwrap_or("");
    if first != magic {
        return Err(FormatError::BadMagic {
            expected: magic.into(),
            found: first.into(),
        });
    }
    if lines.len() != count {
        return Err(FormatError::Malformed(format!(
            "expected {count} lines, found {}",
            lines.len()
        )));
    }
    let mut out = Vec::with_capacity(count - 1);
    for (i, line) in lines[1..].iter().enumerate() {
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.iter().any(|t| t.is_empty()) {
            return Err(FormatError::Malformed(format!(
                "line {} has empty tokens or stray whitespace",
                i + 2
            )));
        }
        out.push(tokens);
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<BaseFunction> {
    let lines = strict_lines(text, FUNCTION_MAGIC, 3)?;
    let header = &lines[0];
    if header.len() != 3 {
        return Err(FormatError::Malformed("header must be `dims side colors`".into()).into());
    }
    let dims = parse_decimal(header[0])? as usize;
    let side = parse_decimal(header[1])? as usize;
    let colors = parse_decimal(header[2])?;
    if dims == 0 || side == 0 || colors == 0 || colors > u32::MAX as u64 {
        return Err(FormatError::Malformed("dims, side and colors must be positive".into()).into());
    }
    let expected = (side as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
    let tokens = &lines[1];
    if tokens.len() as u128 != expected {
        return Err(FormatError::Length {
            expected: expected.min(usize::MAX as u128) as usize,
            found: tokens.len(),
        }
        .into());
    }
    budget::checked_entries(side, dims, budget::limit_bytes())?;
    let mut values = Vec::with_capacity(tokens.len());
    for (position, tok) in tokens.iter().enumerate() {
        let value = parse_decimal(tok)?;
        if value >= colors {
            return Err(FormatError::OutOfRange {
                position,
                value,
                bound: colors,
            }
            .into());
        }
        values.push(value as u32);
    }
    BaseFunction::new(dims, side, colors as u32, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_random_function() {
        let a = gen_random(2, 1, 1, 7).unwrap();
        assert_eq!(a.values(), &[0]);
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let a = gen_random(2, 4, 3, 1).unwrap();
        let b = gen_random(2, 4, 3, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random(2, 4, 3, 2).unwrap());
    }

    #[test]
    fn random_frequencies_are_balanced() {
        // 4096 draws with p = 1/4: sigma of a frequency is sqrt(p(1-p)/m).
        let a = gen_random(2, 64, 4, 2).unwrap();
        let m = a.len() as f64;
        let sigma = (0.25f64 * 0.75 / m).sqrt();
        let mut counts = [0usize; 4];
        for &v in a.values() {
            counts[v as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / m - 0.25).abs() <= 4.0 * sigma, "{counts:?}");
        }
        // chi-square with 3 degrees of freedom, 0.999 quantile is 16.27
        let expected = m / 4.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn random_rejects_oversized_tables() {
        let err = gen_random_within(3, 1000, 2, 0, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn latin_small_cases() {
        assert_eq!(gen_latin(1).unwrap().values(), &[0]);
        assert_eq!(gen_latin(2).unwrap().values(), &[0, 1, 1, 0]);
    }

    #[test]
    fn latin_rows_and_columns_are_permutations() {
        for n in 1..=64 {
            let a = gen_latin(n).unwrap();
            for i in 0..n {
                let mut row: Vec<u32> = (0..n).map(|j| a.at(i, j)).collect();
                let mut col: Vec<u32> = (0..n).map(|j| a.at(j, i)).collect();
                row.sort_unstable();
                col.sort_unstable();
                let id: Vec<u32> = (0..n as u32).collect();
                assert_eq!(row, id);
                assert_eq!(col, id);
            }
        }
    }

    #[test]
    fn trace_q2_d1_is_and() {
        let t = gen_trace(2, 1, 2).unwrap();
        assert_eq!((t.dims(), t.side(), t.colors()), (2, 2, 2));
        assert_eq!(t.values(), &[0, 0, 0, 1]);
    }

    #[test]
    fn trace_identity_cases() {
        let t = gen_trace(3, 2, 2).unwrap();
        let id = FieldMatrix::identity(3, 2).unwrap().to_index() as usize;
        assert_eq!(t.value(&[id, id]).unwrap(), 2);

        let t = gen_trace(2, 2, 3).unwrap();
        let id = FieldMatrix::identity(2, 2).unwrap().to_index() as usize;
        assert_eq!(t.value(&[id, id, id]).unwrap(), 0);
    }

    #[test]
    fn trace_with_identities_is_trace_of_first() {
        let t = gen_trace(3, 2, 3).unwrap();
        let id = FieldMatrix::identity(3, 2).unwrap().to_index() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let b = rng.gen_range(0..t.side());
            let m = FieldMatrix::from_index(3, 2, b as u64).unwrap();
            assert_eq!(t.value(&[b, id, id]).unwrap(), m.trace());
        }
    }

    #[test]
    fn matrix_index_encoding_is_row_major_msd_first() {
        // entries (0,0)=1, (0,1)=0, (1,0)=0, (1,1)=1 in base 2 -> 0b1001
        let id = FieldMatrix::identity(2, 2).unwrap();
        assert_eq!(id.to_index(), 9);
        let m = FieldMatrix::from_index(3, 2, 5).unwrap();
        assert_eq!(m.entries(), &[0, 0, 1, 2]);
        assert_eq!(m.to_index(), 5);
    }

    #[test]
    fn trace_rejects_composite_order() {
        assert_eq!(gen_trace(4, 1, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            gen_trace_within(5, 2, 3, 1 << 20).unwrap_err(),
            Error::BudgetExceeded { .. }
        ));
    }

    #[test]
    fn lift_fibers() {
        let a = BaseFunction::new(1, 1, 4, vec![2]).unwrap();
        assert_eq!(lift(&a, LiftKind::Unary).unwrap().fiber(0), &[false, false, true, false]);
        assert_eq!(
            lift(&a, LiftKind::GreaterThan).unwrap().fiber(0),
            &[true, true, true, false]
        );
        let b = BaseFunction::new(1, 1, 8, vec![5]).unwrap();
        assert_eq!(lift(&b, LiftKind::Binary).unwrap().fiber(0), &[true, false, true]);
    }

    #[test]
    fn base_of_round_trips() {
        let l = gen_latin(2).unwrap();
        let f = lift(&l, LiftKind::Unary).unwrap();
        assert_eq!(base_of(&f).unwrap().values(), &[0, 1, 1, 0]);
        let a = gen_random(2, 4, 4, 3).unwrap();
        assert_eq!(base_of(&lift(&a, LiftKind::GreaterThan).unwrap()).unwrap(), a);
    }

    #[test]
    fn base_of_rejects_double_one() {
        let f = BooleanFunction::from_table(1, 1, 4, LiftKind::Unary, vec![true, true, false, false])
            .unwrap();
        let err = base_of(&f).unwrap_err();
        assert!(matches!(err, Error::StructuralViolation(ref m) if m.contains("[0]")), "{err}");
    }

    #[test]
    fn base_of_rejects_gaps_and_large_binary() {
        let f = BooleanFunction::from_table(1, 1, 4, LiftKind::GreaterThan, vec![true, false, true, false])
            .unwrap();
        assert!(base_of(&f).is_err());
        let f = BooleanFunction::from_table(1, 1, 3, LiftKind::Binary, vec![true, true]).unwrap();
        assert!(base_of(&f).is_err());
    }

    #[test]
    fn serialize_latin2() {
        let text = serialize(&gen_latin(2).unwrap());
        assert_eq!(text, "noffn 1\n2 2 2\n0 1 1 0\n");
        assert_eq!(parse(&text).unwrap(), gen_latin(2).unwrap());
    }

    #[test]
    fn parse_error_categories() {
        let out_of_range = parse("noffn 1\n1 2 2\n0 5\n").unwrap_err();
        assert!(matches!(out_of_range, Error::Format(FormatError::OutOfRange { value: 5, .. })));
        let short = parse("noffn 1\n2 2 2\n0 1 1\n").unwrap_err();
        assert!(matches!(short, Error::Format(FormatError::Length { expected: 4, found: 3 })));
        let magic = parse("noffn 2\n2 2 2\n0 1 1 0\n").unwrap_err();
        assert!(matches!(magic, Error::Format(FormatError::BadMagic { .. })));
        for bad in [
            "noffn 1\n2 2 2\n0 1 1 0",
            "noffn 1\n2 2 2\n0  1 1 0\n",
            "noffn 1\n2 2 2\n0 1 1 0 \n",
            "noffn 1\n2 2 2\n0 1 1 0\n\n",
            "noffn 1\n2 2 02\n0 1 1 0\n",
        ] {
            assert!(
                matches!(parse(bad).unwrap_err(), Error::Format(FormatError::Malformed(_))),
                "{bad:?}"
            );
        }
    }
}
