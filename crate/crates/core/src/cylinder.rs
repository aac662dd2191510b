//! Two-dimensional cylinder intersections, monochromatic covers and the
//! cover-based deterministic protocol.
//!
//! With two coordinates a cylinder intersection is a combinatorial rectangle
//! `rows x cols`. Entry sets are `u64` bitmasks over the row-major flat index,
//! so everything here works for sides up to 8.

use serde::{Deserialize, Serialize};

use crate::bits::{ceil_log2, full_mask, ones};
use crate::error::{Error, FormatError, Result};
use crate::function::{parse_decimal, strict_lines, BaseFunction};
use crate::stars::Entry;

/// Largest side for which entry sets fit in a `u64`.
pub const MAX_SET_SIDE: usize = 8;

/// A subset of the entries of `[side]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntrySet {
    side: usize,
    bits: u64,
}

impl EntrySet {
    pub fn new(side: usize, bits: u64) -> Result<Self> {
        if side == 0 || side > MAX_SET_SIDE {
            return Err(Error::LimitExceeded(format!(
                "entry sets support 1 <= side <= {MAX_SET_SIDE}, got {side}"
            )));
        }
        if bits & !full_mask(side * side) != 0 {
            return Err(Error::OutOfRange("entry set has bits beyond side^2".into()));
        }
        Ok(EntrySet { side, bits })
    }

    pub fn full(side: usize) -> Result<Self> {
        Self::new(side, full_mask(side * side))
    }

    pub fn empty(side: usize) -> Result<Self> {
        Self::new(side, 0)
    }

    pub fn from_entries(side: usize, entries: &[Entry]) -> Result<Self> {
        let mut bits = 0u64;
        for &(x, y) in entries {
            if x >= side || y >= side {
                return Err(Error::OutOfRange(format!("entry ({x}, {y})")));
            }
            bits |= 1 << (x * side + y);
        }
        Self::new(side, bits)
    }

    /// Entries of `a` carrying one of `values`.
    pub fn with_values(a: &BaseFunction, values: &[u32]) -> Result<Self> {
        a.require_2d()?;
        let mut bits = 0u64;
        for (i, v) in a.values().iter().enumerate() {
            if values.contains(v) {
                bits |= 1 << i;
            }
        }
        Self::new(a.side(), bits)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, (x, y): Entry) -> bool {
        x < self.side && y < self.side && self.bits >> (x * self.side + y) & 1 == 1
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        ones(self.bits).map(move |i| (i / self.side, i % self.side))
    }
}

/// `rows x cols` as bitmasks; ordered by `(rows, cols)` as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rectangle {
    pub rows: u64,
    pub cols: u64,
}

impl Rectangle {
    pub fn new(rows: u64, cols: u64) -> Self {
        Rectangle { rows, cols }
    }

    pub fn from_sets(rows: &[usize], cols: &[usize]) -> Self {
        let mask = |s: &[usize]| s.iter().fold(0u64, |m, &i| m | 1 << i);
        Rectangle::new(mask(rows), mask(cols))
    }

    pub fn full(side: usize) -> Self {
        Rectangle::new(full_mask(side), full_mask(side))
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn area(&self) -> u64 {
        (self.rows.count_ones() * self.cols.count_ones()) as u64
    }

    /// Entries of the rectangle as a flat bitmask for side `n`.
    pub fn entry_bits(&self, n: usize) -> u64 {
        let mut row_pattern = 0u64;
        for y in ones(self.cols) {
            row_pattern |= 1 << y;
        }
        ones(self.rows).fold(0u64, |m, x| m | row_pattern << (x * n))
    }
}

/// Membership in `R`: both coordinates must lie in the respective side sets.
pub fn rect_contains(r: &Rectangle, side: usize, (x, y): Entry) -> Result<bool> {
    if x >= side || y >= side || side > 64 {
        return Err(Error::OutOfRange(format!("entry ({x}, {y}) for side {side}")));
    }
    Ok(r.rows >> x & 1 == 1 && r.cols >> y & 1 == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonoValue {
    Value(u32),
    /// `R ∩ S` is empty; every value is consistent.
    EmptyIntersection,
    NotMonochromatic { first: Entry, second: Entry },
}

fn check_scope(a: &BaseFunction, scope: &EntrySet) -> Result<()> {
    a.require_2d()?;
    if scope.side != a.side() {
        return Err(Error::StructuralViolation(format!(
            "scope side {} does not match function side {}",
            scope.side,
            a.side()
        )));
    }
    Ok(())
}

/// The common value of `A` on `R ∩ S`, scanning row-major.
pub fn mono_value_of(a: &BaseFunction, scope: &EntrySet, r: &Rectangle) -> Result<MonoValue> {
    check_scope(a, scope)?;
    let live = r.entry_bits(a.side()) & scope.bits;
    let n = a.side();
    let mut first: Option<(Entry, u32)> = None;
    for i in ones(live) {
        let e = (i / n, i % n);
        let v = a.values()[i];
        match first {
            None => first = Some((e, v)),
            Some((f, fv)) if fv != v => {
                return Ok(MonoValue::NotMonochromatic {
                    first: f,
                    second: e,
                })
            }
            _ => {}
        }
    }
    Ok(match first {
        Some((_, v)) => MonoValue::Value(v),
        None => MonoValue::EmptyIntersection,
    })
}

/// A cover of `scope` by rectangles monochromatic on `scope`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoCover {
    pub scope: EntrySet,
    pub members: Vec<(Rectangle, u32)>,
}

impl MonoCover {
    pub fn chi(&self) -> usize {
        self.members.len()
    }

    /// Check both cover invariants by direct scan.
    pub fn validate(&self, a: &BaseFunction) -> Result<()> {
        check_scope(a, &self.scope)?;
        let n = a.side();
        let mut covered = 0u64;
        for (j, (r, v)) in self.members.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::StructuralViolation(format!("member {j} is empty")));
            }
            for x in ones(r.rows) {
                for y in ones(r.cols) {
                    if x >= n || y >= n {
                        return Err(Error::StructuralViolation(format!(
                            "member {j} leaves the square"
                        )));
                    }
                    if self.scope.contains((x, y)) && a.at(x, y) != *v {
                        return Err(Error::StructuralViolation(format!(
                            "member {j} has value {} at ({x}, {y}), not {v}",
                            a.at(x, y)
                        )));
                    }
                }
            }
            covered |= r.entry_bits(n);
        }
        if self.scope.bits & !covered != 0 {
            let missing = ones(self.scope.bits & !covered).next().unwrap_or(0);
            return Err(Error::StructuralViolation(format!(
                "entry ({}, {}) is not covered",
                missing / n,
                missing % n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLimits {
    /// Largest side solved exactly; larger inputs get the greedy cover.
    pub max_exact_side: usize,
    pub max_nodes: u64,
}

impl Default for CoverLimits {
    fn default() -> Self {
        CoverLimits {
            max_exact_side: 6,
            max_nodes: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverOutcome {
    Exact(MonoCover),
    /// Exact search was skipped or ran out of budget; `best` is valid but
    /// possibly not minimum.
    ExceedsLimit { best: MonoCover, reason: String },
}

impl CoverOutcome {
    pub fn cover(&self) -> &MonoCover {
        match self {
            CoverOutcome::Exact(c) => c,
            CoverOutcome::ExceedsLimit { best, .. } => best,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CoverOutcome::Exact(_))
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    rect: Rectangle,
    value: u32,
    bits: u64,
}

/// Inclusion-maximal rectangles monochromatic on `scope` that meet it, sorted.
fn maximal_mono_rectangles(a: &BaseFunction, scope: &EntrySet) -> Vec<Candidate> {
    let n = a.side();
    let live = scope.bits;
    let mut present: Vec<u32> = ones(live).map(|i| a.values()[i]).collect();
    present.sort_unstable();
    present.dedup();
    let mut out = Vec::new();
    for &v in &present {
        // good[x]: columns y where (x, y) is outside S or has value v
        let good: Vec<u64> = (0..n)
            .map(|x| {
                (0..n).fold(0u64, |m, y| {
                    let i = x * n + y;
                    if live >> i & 1 == 0 || a.values()[i] == v {
                        m | 1 << y
                    } else {
                        m
                    }
                })
            })
            .collect();
        for rows in 1..=full_mask(n) {
            let cols = ones(rows).fold(full_mask(n), |m, x| m & good[x]);
            if cols == 0 {
                continue;
            }
            let closure = (0..n).fold(0u64, |m, x| if good[x] & cols == cols { m | 1 << x } else { m });
            if closure != rows {
                continue;
            }
            let rect = Rectangle::new(rows, cols);
            let bits = rect.entry_bits(n) & live;
            if bits != 0 {
                out.push(Candidate { rect, value: v, bits });
            }
        }
    }
    out.sort_by_key(|c| c.rect);
    out
}

struct CoverSearch<'a> {
    cands: &'a [Candidate],
    max_size: u32,
    nodes: u64,
    max_nodes: u64,
}

struct OutOfNodes;

impl CoverSearch<'_> {
    /// Can `uncovered` be covered by at most `budget` candidates with index
    /// at least `from`? On success the chosen indices are left in `chosen`.
    fn feasible(
        &mut self,
        uncovered: u64,
        budget: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> std::result::Result<bool, OutOfNodes> {
        if uncovered == 0 {
            return Ok(true);
        }
        if budget == 0 || uncovered.count_ones() > budget as u32 * self.max_size {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(OutOfNodes);
        }
        // branch on the uncovered entry with the fewest usable candidates
        let mut best: Option<(usize, u32)> = None;
        for e in ones(uncovered) {
            let count = self.cands[from..]
                .iter()
                .filter(|c| c.bits >> e & 1 == 1)
                .count();
            if count == 0 {
                return Ok(false);
            }
            if best.is_none_or(|(_, b)| count < b as usize) {
                best = Some((e, count as u32));
            }
        }
        let (e, _) = best.expect("uncovered is non-empty");
        for j in from..self.cands.len() {
            if self.cands[j].bits >> e & 1 == 0 {
                continue;
            }
            chosen.push(j);
            if self.feasible(uncovered & !self.cands[j].bits, budget - 1, from, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

fn cover_from(scope: EntrySet, cands: &[Candidate], mut idx: Vec<usize>) -> MonoCover {
    idx.sort_unstable();
    idx.dedup();
    MonoCover {
        scope,
        members: idx.into_iter().map(|j| (cands[j].rect, cands[j].value)).collect(),
    }
}

/// Repeatedly take the candidate covering the most uncovered entries.
fn greedy_cover(scope: EntrySet, cands: &[Candidate]) -> Vec<usize> {
    let mut uncovered = scope.bits;
    let mut chosen = Vec::new();
    while uncovered != 0 {
        let mut best: Option<(usize, u32)> = None;
        for (j, c) in cands.iter().enumerate() {
            let gain = (c.bits & uncovered).count_ones();
            if gain > 0 && best.is_none_or(|(_, g)| gain > g) {
                best = Some((j, gain));
            }
        }
        let (j, _) = best.expect("every scope entry lies in some maximal rectangle");
        uncovered &= !cands[j].bits;
        chosen.push(j);
    }
    chosen
}

/// Minimum cover of `scope` by rectangles monochromatic on `scope`.
///
/// Candidates are the inclusion-maximal monochromatic rectangles; the
/// minimum is found by iterative deepening over element-branching set cover.
/// Among minimum covers the one with the lexicographically least sorted
/// member list is returned.
pub fn min_mono_cover(a: &BaseFunction, scope: &EntrySet, limits: CoverLimits) -> Result<CoverOutcome> {
    check_scope(a, scope)?;
    let n = a.side();
    let cands = maximal_mono_rectangles(a, scope);
    let greedy = greedy_cover(*scope, &cands);
    let greedy_cover = cover_from(*scope, &cands, greedy.clone());
    if n > limits.max_exact_side {
        return Ok(CoverOutcome::ExceedsLimit {
            best: greedy_cover,
            reason: format!("side {n} above exact limit {}", limits.max_exact_side),
        });
    }
    let mut search = CoverSearch {
        cands: &cands,
        max_size: cands.iter().map(|c| c.bits.count_ones()).max().unwrap_or(1),
        nodes: 0,
        max_nodes: limits.max_nodes,
    };
    let exhausted = |search: &CoverSearch| CoverOutcome::ExceedsLimit {
        best: greedy_cover.clone(),
        reason: format!("node budget {} exhausted", search.max_nodes),
    };

    let mut chi = greedy.len();
    for size in 0..greedy.len() {
        match search.feasible(scope.bits, size, 0, &mut Vec::new()) {
            Err(OutOfNodes) => return Ok(exhausted(&search)),
            Ok(true) => {
                chi = size;
                break;
            }
            Ok(false) => {}
        }
    }

    // fix members smallest-first: member t is the least index whose removal
    // still leaves a completion using later candidates only
    let mut members = Vec::with_capacity(chi);
    let mut uncovered = scope.bits;
    let mut from = 0;
    while members.len() < chi {
        let remaining = chi - members.len() - 1;
        let mut picked = None;
        for j in from..cands.len() {
            if cands[j].bits & uncovered == 0 {
                continue;
            }
            match search.feasible(uncovered & !cands[j].bits, remaining, j + 1, &mut Vec::new()) {
                Err(OutOfNodes) => return Ok(exhausted(&search)),
                Ok(true) => {
                    picked = Some(j);
                    break;
                }
                Ok(false) => {}
            }
        }
        let j = picked.ok_or_else(|| Error::InternalInvariant {
            iteration: members.len(),
            detail: "minimum cover lost while fixing canonical members".into(),
        })?;
        members.push(j);
        uncovered &= !cands[j].bits;
        from = j + 1;
    }
    let cover = cover_from(*scope, &cands, members);
    cover.validate(a)?;
    Ok(CoverOutcome::Exact(cover))
}

/// `ceil(log2 chi)`, the cover-based proxy for nondeterministic cost.
pub fn cover_cc(cover: &MonoCover) -> Result<u32> {
    if cover.members.is_empty() && !cover.scope.is_empty() {
        return Err(Error::StructuralViolation(
            "empty cover of a non-empty scope".into(),
        ));
    }
    Ok(ceil_log2(cover.chi() as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverProtocolRun {
    /// Row player's membership vector followed by the column player's index
    /// (most significant bit first).
    pub transcript: Vec<bool>,
    pub member: usize,
    pub output: u32,
    pub cost: u32,
}

/// Run the two-player protocol derived from a cover.
///
/// The row player announces which members contain its row; the column player
/// then names the first member containing the whole input. The member's value
/// is the output, so the transcript alone determines it.
pub fn simulate_cover_protocol(
    a: &BaseFunction,
    scope: &EntrySet,
    cover: &MonoCover,
    (x, y): Entry,
) -> Result<CoverProtocolRun> {
    check_scope(a, scope)?;
    if !scope.contains((x, y)) {
        return Err(Error::Precondition(format!("input ({x}, {y}) is outside the scope")));
    }
    let chi = cover.chi();
    let index_bits = ceil_log2(chi as u64);
    let mut transcript: Vec<bool> = cover.members.iter().map(|(r, _)| r.rows >> x & 1 == 1).collect();
    let member = transcript
        .iter()
        .zip(&cover.members)
        .position(|(&row_hit, (r, _))| row_hit && r.cols >> y & 1 == 1)
        .ok_or_else(|| {
            Error::StructuralViolation(format!("cover is invalid: no member contains ({x}, {y})"))
        })?;
    for bit in (0..index_bits).rev() {
        transcript.push(member >> bit & 1 == 1);
    }
    Ok(CoverProtocolRun {
        cost: transcript.len() as u32,
        transcript,
        member,
        output: cover.members[member].1,
    })
}

/// Largest communication cost accepted by [`det_sim_bound`].
pub const DET_SIM_MAX_CN: u32 = 40;

/// `(k - 1) * 2^c_n + c_n`: deterministic cost of simulating a
/// nondeterministic protocol with `c_n` bits among `k` players.
pub fn det_sim_bound(k: u64, c_n: u32) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
    }
    if c_n > DET_SIM_MAX_CN {
        return Err(Error::LimitExceeded(format!(
            "c_n = {c_n} exceeds the cap {DET_SIM_MAX_CN}"
        )));
    }
    (k - 1)
        .checked_mul(1u64 << c_n)
        .and_then(|v| v.checked_add(c_n as u64))
        .ok_or_else(|| Error::LimitExceeded("det_sim_bound overflows u64".into()))
}

pub const COVER_MAGIC: &str = "nofcover 1";

/// `nofcover 1\n<n> <chi>\n` then one `rows cols value` line per member,
/// bitmasks in decimal.
pub fn serialize_cover(cover: &MonoCover) -> String {
    let mut out = format!("{COVER_MAGIC}\n{} {}\n", cover.scope.side, cover.chi());
    for (r, v) in &cover.members {
        out.push_str(&format!("{} {} {}\n", r.rows, r.cols, v));
    }
    out
}

/// Members and side of a cover report.
pub fn parse_cover(text: &str) -> Result<(usize, Vec<(Rectangle, u32)>)> {
    let header_end = text.match_indices('\n').nth(1).map(|(i, _)| i + 1).unwrap_or(text.len());
    let head = strict_lines(&text[..header_end], COVER_MAGIC, 2)?;
    if head[0].len() != 2 {
        return Err(FormatError::Malformed("header must be `n chi`".into()).into());
    }
    let n = parse_decimal(head[0][0])? as usize;
    let chi = parse_decimal(head[0][1])? as usize;
    if n == 0 || n > 64 {
        return Err(FormatError::Malformed(format!("side {n} unsupported")).into());
    }
    let body = &text[header_end..];
    let lines: Vec<&str> = if body.is_empty() {
        Vec::new()
    } else {
        body.strip_suffix('\n')
            .ok_or_else(|| FormatError::Malformed("missing trailing newline".into()))?
            .split('\n')
            .collect()
    };
    if lines.len() != chi {
        return Err(FormatError::Length {
            expected: chi,
            found: lines.len(),
        }
        .into());
    }
    let limit = full_mask(n);
    let mut members = Vec::with_capacity(chi);
    for (position, line) in lines.iter().enumerate() {
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.len() != 3 {
            return Err(FormatError::Malformed(format!("member line {position}: `{line}`")).into());
        }
        let rows = parse_decimal(toks[0])?;
        let cols = parse_decimal(toks[1])?;
        let value = parse_decimal(toks[2])?;
        for mask in [rows, cols] {
            if mask == 0 || mask & !limit != 0 {
                return Err(FormatError::OutOfRange {
                    position,
                    value: mask,
                    bound: limit,
                }
                .into());
            }
        }
        if value > u32::MAX as u64 {
            return Err(FormatError::OutOfRange {
                position,
                value,
                bound: u32::MAX as u64,
            }
            .into());
        }
        members.push((Rectangle::new(rows, cols), value as u32));
    }
    Ok((n, members))
}
