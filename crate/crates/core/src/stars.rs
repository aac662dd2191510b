//! A-stars of two-dimensional base functions and star-free colorings.
//!
//! An A-star is a triple of entries `(x, y), (x', y), (x, y')` with
//! `x != x'`, `y != y'`, `A(x', y) = A(x, y') = z` and `A(x, y) != z`. A coloring
//! of the entries is star-free when no A-star has all three entries the same
//! color; the minimum number of colors for which one exists tracks the
//! deterministic complexity of the graph function `Lift(A)`.

use serde::{Deserialize, Serialize};

use crate::bits::{full_mask, ones};
use crate::error::{Error, FormatError, Result};
use crate::function::{join_into, parse_decimal, strict_lines, BaseFunction};

pub type Entry = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Star {
    pub base: Entry,
    pub row_partner: Entry,
    pub col_partner: Entry,
    pub shared_value: u32,
    pub base_value: u32,
}

impl Star {
    /// Flat indices of the three entries for side `n`.
    pub fn flat(&self, n: usize) -> [usize; 3] {
        [
            self.base.0 * n + self.base.1,
            self.row_partner.0 * n + self.row_partner.1,
            self.col_partner.0 * n + self.col_partner.1,
        ]
    }
}

/// An assignment of `colors_used` colors to the `n x n` entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    side: usize,
    colors_used: u32,
    assignment: Vec<u32>,
}

impl Coloring {
    pub fn new(side: usize, colors_used: u32, assignment: Vec<u32>) -> Result<Self> {
        if assignment.len() != side * side {
            return Err(Error::StructuralViolation(format!(
                "coloring has {} entries, expected {}",
                assignment.len(),
                side * side
            )));
        }
        if let Some(c) = assignment.iter().find(|&&c| c >= colors_used) {
            return Err(Error::OutOfRange(format!("color {c} (colors_used = {colors_used})")));
        }
        Ok(Coloring {
            side,
            colors_used,
            assignment,
        })
    }

    /// Colors used are `0..=max(assignment)`.
    pub fn from_assignment(side: usize, assignment: Vec<u32>) -> Result<Self> {
        let l = assignment.iter().max().map_or(0, |&m| m + 1);
        Self::new(side, l.max(1), assignment)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn colors_used(&self) -> u32 {
        self.colors_used
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> u32 {
        self.assignment[x * self.side + y]
    }
}

/// All A-stars in lexicographic order of `(x, y, x', y')`.
pub fn enumerate_stars(a: &BaseFunction) -> Result<Vec<Star>> {
    a.require_2d()?;
    let n = a.side();
    // positions[x][z]: columns of row x holding value z, ascending
    let mut positions = vec![vec![Vec::new(); a.colors() as usize]; n];
    for x in 0..n {
        for y in 0..n {
            positions[x][a.at(x, y) as usize].push(y);
        }
    }
    let mut stars = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let base_value = a.at(x, y);
            for x2 in (0..n).filter(|&x2| x2 != x) {
                let z = a.at(x2, y);
                if z == base_value {
                    continue;
                }
                // z != A(x, y) already rules out y' == y
                for &y2 in &positions[x][z as usize] {
                    stars.push(Star {
                        base: (x, y),
                        row_partner: (x2, y),
                        col_partner: (x, y2),
                        shared_value: z,
                        base_value,
                    });
                }
            }
        }
    }
    Ok(stars)
}

fn check_shape(a: &BaseFunction, coloring: &Coloring) -> Result<()> {
    a.require_2d()?;
    if coloring.side != a.side() {
        return Err(Error::StructuralViolation(format!(
            "coloring side {} does not match function side {}",
            coloring.side,
            a.side()
        )));
    }
    Ok(())
}

/// `None` when star-free, else the lexicographically first monochromatic star.
pub fn verify_star_free(a: &BaseFunction, coloring: &Coloring) -> Result<Option<Star>> {
    check_shape(a, coloring)?;
    let n = a.side();
    Ok(enumerate_stars(a)?.into_iter().find(|s| {
        let [p, q, r] = s.flat(n);
        let c = coloring.assignment[p];
        coloring.assignment[q] == c && coloring.assignment[r] == c
    }))
}

/// Star incidence: for each entry, the other two entries of every star
/// through it.
struct StarIncidence {
    partners: Vec<Vec<(usize, usize)>>,
}

impl StarIncidence {
    fn build(a: &BaseFunction) -> Result<Self> {
        let n = a.side();
        let mut partners = vec![Vec::new(); n * n];
        for s in enumerate_stars(a)? {
            let [p, q, r] = s.flat(n);
            partners[p].push((q, r));
            partners[q].push((p, r));
            partners[r].push((p, q));
        }
        Ok(StarIncidence { partners })
    }

    /// Would giving `entry` color `c` complete a monochromatic star?
    #[inline]
    fn conflicts(&self, entry: usize, c: u32, assignment: &[u32]) -> bool {
        self.partners[entry]
            .iter()
            .any(|&(q, r)| assignment[q] == c && assignment[r] == c)
    }
}

const UNSET: u32 = u32::MAX;

/// Row-major greedy: each entry takes the smallest color that does not
/// complete a monochromatic star with already colored entries.
pub fn color_greedy(a: &BaseFunction) -> Result<Coloring> {
    a.require_2d()?;
    let n = a.side();
    let inc = StarIncidence::build(a)?;
    let mut assignment = vec![UNSET; n * n];
    for e in 0..n * n {
        let mut c = 0;
        while inc.conflicts(e, c, &assignment) {
            c += 1;
        }
        assignment[e] = c;
    }
    let coloring = Coloring::from_assignment(n, assignment)?;
    if let Some(star) = verify_star_free(a, &coloring)? {
        return Err(Error::InternalInvariant {
            iteration: 0,
            detail: format!("greedy coloring left monochromatic star {star:?}"),
        });
    }
    Ok(coloring)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiLimits {
    /// Largest color count the search will try.
    pub max_colors: u32,
    /// Search nodes allowed across the whole computation.
    pub max_nodes: u64,
}

impl Default for ChiLimits {
    fn default() -> Self {
        ChiLimits {
            max_colors: 4,
            max_nodes: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChiOutcome {
    /// The minimum color count with its lexicographically least witness.
    Exact { colors: u32, witness: Coloring },
    /// No star-free coloring with at most `max_colors` colors exists.
    AboveColorLimit { max_colors: u32 },
    /// The node budget ran out before the answer was settled.
    NodeBudgetExhausted { nodes: u64 },
}

impl ChiOutcome {
    pub fn colors(&self) -> Option<u32> {
        match self {
            ChiOutcome::Exact { colors, .. } => Some(*colors),
            _ => None,
        }
    }
}

struct Exhausted;

struct ChiSearch<'a> {
    inc: &'a StarIncidence,
    order: Vec<usize>,
    colors: u32,
    nodes: u64,
    max_nodes: u64,
}

impl ChiSearch<'_> {
    /// Does the partial assignment extend to a star-free coloring?
    fn extends(&mut self, assignment: &mut [u32], pos: usize, used: u32) -> std::result::Result<bool, Exhausted> {
        let Some(offset) = self.order[pos..].iter().position(|&e| assignment[e] == UNSET) else {
            return Ok(true);
        };
        let pos = pos + offset;
        let e = self.order[pos];
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted);
        }
        // unused colors are interchangeable: only try the first of them
        let limit = (used + 1).min(self.colors);
        for c in 0..limit {
            if self.inc.conflicts(e, c, assignment) {
                continue;
            }
            assignment[e] = c;
            let ok = self.extends(assignment, pos + 1, used.max(c + 1))?;
            assignment[e] = UNSET;
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Exact star chromatic number by branch and bound.
///
/// Entries are branched in order of decreasing star degree and new colors are
/// only opened in increasing index order. Once the minimum `L` is known, the
/// canonical witness is fixed entry by entry in row-major order, each entry
/// taking the smallest color that still extends to a star-free `L`-coloring.
pub fn chi_star_exact(a: &BaseFunction, limits: ChiLimits) -> Result<ChiOutcome> {
    a.require_2d()?;
    let n = a.side();
    let cells = n * n;
    let inc = StarIncidence::build(a)?;
    let mut order: Vec<usize> = (0..cells).collect();
    order.sort_by_key(|&e| std::cmp::Reverse(inc.partners[e].len()));

    let mut search = ChiSearch {
        inc: &inc,
        order,
        colors: 0,
        nodes: 0,
        max_nodes: limits.max_nodes,
    };
    for colors in 1..=limits.max_colors {
        search.colors = colors;
        let mut assignment = vec![UNSET; cells];
        match search.extends(&mut assignment, 0, 0) {
            Err(Exhausted) => return Ok(ChiOutcome::NodeBudgetExhausted { nodes: search.nodes }),
            Ok(false) => continue,
            Ok(true) => {}
        }
        let mut used = 0;
        for e in 0..cells {
            let mut fixed = false;
            for c in 0..(used + 1).min(colors) {
                if inc.conflicts(e, c, &assignment) {
                    continue;
                }
                assignment[e] = c;
                match search.extends(&mut assignment, 0, used.max(c + 1)) {
                    Err(Exhausted) => {
                        return Ok(ChiOutcome::NodeBudgetExhausted { nodes: search.nodes })
                    }
                    Ok(true) => {
                        used = used.max(c + 1);
                        fixed = true;
                        break;
                    }
                    Ok(false) => assignment[e] = UNSET,
                }
            }
            if !fixed {
                return Err(Error::InternalInvariant {
                    iteration: e,
                    detail: "feasible coloring lost while fixing the canonical witness".into(),
                });
            }
        }
        let witness = Coloring::new(n, colors, assignment)?;
        return Ok(ChiOutcome::Exact { colors, witness });
    }
    Ok(ChiOutcome::AboveColorLimit {
        max_colors: limits.max_colors,
    })
}

/// One pass of the peeling loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelIteration {
    /// Current rectangle `E` as row and column bitmasks.
    pub rows: u64,
    pub cols: u64,
    /// Values consumed before this iteration.
    pub used_values: Vec<u32>,
    pub value: u32,
    pub color: u32,
    /// Entries of `E` with the chosen value and color.
    pub witness: Vec<Entry>,
    /// Smallest rectangle containing the witness set.
    pub enclosing_rows: u64,
    pub enclosing_cols: u64,
    /// `|S| * N * L / |E|`, logged only.
    pub density_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelingTrace {
    pub iterations: Vec<PeelIteration>,
    pub colors_used: u32,
}

impl PeelingTrace {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }
}

/// Run the peeling procedure on a star-free coloring.
///
/// Starting from the full square with no used values, each iteration picks
/// the most frequent unused value in `E`, the most abundant color among its
/// entries, and shrinks `E` to the bounding rectangle of the entries having
/// both. Ties go to the smallest index. Entries of the bounding rectangle
/// outside the witness set never carry the chosen color, so every iteration
/// consumes a fresh color and the iteration count is at most `L`; both facts
/// are checked on every step.
pub fn peel(a: &BaseFunction, coloring: &Coloring) -> Result<PeelingTrace> {
    check_shape(a, coloring)?;
    let n = a.side();
    if n > 64 {
        return Err(Error::LimitExceeded(format!("peel supports side <= 64, got {n}")));
    }
    if let Some(star) = verify_star_free(a, coloring)? {
        return Err(Error::Precondition(format!(
            "coloring is not star-free: monochromatic star {star:?}"
        )));
    }
    let big_n = a.colors() as usize;
    let big_l = coloring.colors_used as usize;
    let mut rows = full_mask(n);
    let mut cols = full_mask(n);
    let mut used = vec![false; big_n];
    let mut used_list = Vec::new();
    let mut chosen_colors: Vec<u32> = Vec::new();
    let mut iterations = Vec::new();

    loop {
        let mut freq = vec![0usize; big_n];
        for x in ones(rows) {
            for y in ones(cols) {
                let v = a.at(x, y) as usize;
                if !used[v] {
                    freq[v] += 1;
                }
            }
        }
        let Some(value) = argmax_first(&freq) else {
            break;
        };
        let mut color_freq = vec![0usize; big_l];
        for x in ones(rows) {
            for y in ones(cols) {
                if a.at(x, y) as usize == value {
                    color_freq[coloring.at(x, y) as usize] += 1;
                }
            }
        }
        let color = argmax_first(&color_freq).expect("chosen value occurs in E");
        let iteration = iterations.len() + 1;

        let mut witness = Vec::new();
        let (mut s_rows, mut s_cols) = (0u64, 0u64);
        for x in ones(rows) {
            for y in ones(cols) {
                if a.at(x, y) as usize == value && coloring.at(x, y) as usize == color {
                    witness.push((x, y));
                    s_rows |= 1 << x;
                    s_cols |= 1 << y;
                }
            }
        }
        let area = (rows.count_ones() * cols.count_ones()) as f64;
        let density_ratio = (witness.len() * big_n * big_l) as f64 / area;

        if s_rows & !rows != 0 || s_cols & !cols != 0 {
            return Err(Error::InternalInvariant {
                iteration,
                detail: "enclosing rectangle escapes E".into(),
            });
        }
        for x in ones(s_rows) {
            for y in ones(s_cols) {
                let in_s = a.at(x, y) as usize == value && coloring.at(x, y) as usize == color;
                if !in_s && coloring.at(x, y) as usize == color {
                    return Err(Error::InternalInvariant {
                        iteration,
                        detail: format!("entry ({x}, {y}) outside S carries color {color}"),
                    });
                }
            }
        }
        if chosen_colors.contains(&(color as u32)) {
            return Err(Error::InternalInvariant {
                iteration,
                detail: format!("color {color} chosen twice"),
            });
        }

        iterations.push(PeelIteration {
            rows,
            cols,
            used_values: used_list.clone(),
            value: value as u32,
            color: color as u32,
            witness,
            enclosing_rows: s_rows,
            enclosing_cols: s_cols,
            density_ratio,
        });
        chosen_colors.push(color as u32);
        used[value] = true;
        used_list.push(value as u32);
        rows = s_rows;
        cols = s_cols;
    }

    if iterations.len() > big_l {
        return Err(Error::InternalInvariant {
            iteration: iterations.len(),
            detail: format!("{} iterations exceed {big_l} colors", iterations.len()),
        });
    }
    Ok(PeelingTrace {
        iterations,
        colors_used: coloring.colors_used,
    })
}

/// Index of the largest positive count, smallest index on ties.
fn argmax_first(counts: &[usize]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 && best.is_none_or(|b| c > counts[b]) {
            best = Some(i);
        }
    }
    best
}

pub const COLORING_MAGIC: &str = "nofcol 1";

/// `nofcol 1\n<n> <L>\n<colors...>\n`
pub fn serialize_coloring(c: &Coloring) -> String {
    let mut out = format!("{COLORING_MAGIC}\n{} {}\n", c.side, c.colors_used);
    join_into(&mut out, c.assignment.iter());
    out.push('\n');
    out
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let lines = strict_lines(text, COLORING_MAGIC, 3)?;
    if lines[0].len() != 2 {
        return Err(FormatError::Malformed("header must be `n L`".into()).into());
    }
    let n = parse_decimal(lines[0][0])? as usize;
    let l = parse_decimal(lines[0][1])?;
    if n == 0 || l == 0 || l > u32::MAX as u64 {
        return Err(FormatError::Malformed("n and L must be positive".into()).into());
    }
    let expected = n.checked_mul(n).ok_or_else(|| FormatError::Malformed("n too large".into()))?;
    if lines[1].len() != expected {
        return Err(FormatError::Length {
            expected,
            found: lines[1].len(),
        }
        .into());
    }
    let mut assignment = Vec::with_capacity(expected);
    for (position, tok) in lines[1].iter().enumerate() {
        let value = parse_decimal(tok)?;
        if value >= l {
            return Err(FormatError::OutOfRange {
                position,
                value,
                bound: l,
            }
            .into());
        }
        assignment.push(value as u32);
    }
    Coloring::new(n, l as u32, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{gen_latin, gen_random};

    /// Plain quadruple loop over `(x, y, x', y')`.
    fn naive_stars(a: &BaseFunction) -> Vec<Star> {
        let n = a.side();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for x2 in 0..n {
                    for y2 in 0..n {
                        if x2 != x
                            && y2 != y
                            && a.at(x2, y) == a.at(x, y2)
                            && a.at(x, y) != a.at(x2, y)
                        {
                            out.push(Star {
                                base: (x, y),
                                row_partner: (x2, y),
                                col_partner: (x, y2),
                                shared_value: a.at(x2, y),
                                base_value: a.at(x, y),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    fn diagonal_coloring() -> Coloring {
        Coloring::new(2, 2, vec![0, 1, 1, 0]).unwrap()
    }

    #[test]
    fn constant_has_no_stars() {
        let a = BaseFunction::constant(2, 3, 2, 1).unwrap();
        assert!(enumerate_stars(&a).unwrap().is_empty());
    }

    #[test]
    fn latin2_has_one_star_per_entry() {
        let stars = enumerate_stars(&gen_latin(2).unwrap()).unwrap();
        assert_eq!(stars.len(), 4);
        let bases: Vec<Entry> = stars.iter().map(|s| s.base).collect();
        assert_eq!(bases, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn stars_match_naive_loop() {
        for seed in 0..20 {
            let a = gen_random(2, 4, 3, seed).unwrap();
            assert_eq!(enumerate_stars(&a).unwrap(), naive_stars(&a));
        }
    }

    #[test]
    fn stars_need_two_dims() {
        let a = gen_random(3, 2, 2, 0).unwrap();
        assert_eq!(
            enumerate_stars(&a).unwrap_err(),
            Error::UnsupportedDimension { expected: 2, found: 3 }
        );
    }

    #[test]
    fn verify_examples() {
        let constant = BaseFunction::constant(2, 3, 1, 0).unwrap();
        let one = Coloring::new(3, 1, vec![0; 9]).unwrap();
        assert_eq!(verify_star_free(&constant, &one).unwrap(), None);

        let latin = gen_latin(2).unwrap();
        let mono = Coloring::new(2, 1, vec![0; 4]).unwrap();
        let bad = verify_star_free(&latin, &mono).unwrap().unwrap();
        assert_eq!(bad.base, (0, 0));
        assert_eq!(verify_star_free(&latin, &diagonal_coloring()).unwrap(), None);

        let wrong_size = Coloring::new(3, 1, vec![0; 9]).unwrap();
        assert!(matches!(
            verify_star_free(&latin, &wrong_size),
            Err(Error::StructuralViolation(_))
        ));
    }

    #[test]
    fn greedy_examples() {
        let constant = BaseFunction::constant(2, 4, 3, 2).unwrap();
        assert_eq!(color_greedy(&constant).unwrap().colors_used(), 1);
        let latin = gen_latin(2).unwrap();
        let g = color_greedy(&latin).unwrap();
        assert!(g.colors_used() <= 3);
        assert_eq!(verify_star_free(&latin, &g).unwrap(), None);
    }

    #[test]
    fn chi_examples() {
        let constant = BaseFunction::constant(2, 3, 2, 0).unwrap();
        assert_eq!(chi_star_exact(&constant, ChiLimits::default()).unwrap().colors(), Some(1));
        let latin = gen_latin(2).unwrap();
        match chi_star_exact(&latin, ChiLimits::default()).unwrap() {
            ChiOutcome::Exact { colors, witness } => {
                assert_eq!(colors, 2);
                // lexicographically least 2-coloring killing all four stars
                assert_eq!(witness.assignment(), &[0, 0, 1, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chi_reports_limits() {
        let latin = gen_latin(2).unwrap();
        let tight = ChiLimits {
            max_colors: 1,
            max_nodes: 1000,
        };
        assert_eq!(
            chi_star_exact(&latin, tight).unwrap(),
            ChiOutcome::AboveColorLimit { max_colors: 1 }
        );
        let a = gen_random(2, 4, 3, 5).unwrap();
        let starved = ChiLimits {
            max_colors: 4,
            max_nodes: 3,
        };
        assert!(matches!(
            chi_star_exact(&a, starved).unwrap(),
            ChiOutcome::NodeBudgetExhausted { .. }
        ));
    }

    #[test]
    fn peel_latin2_diagonal() {
        let trace = peel(&gen_latin(2).unwrap(), &diagonal_coloring()).unwrap();
        assert_eq!(trace.len(), 2);
        let first = &trace.iterations[0];
        assert_eq!((first.value, first.color), (0, 0));
        assert_eq!((first.enclosing_rows, first.enclosing_cols), (0b11, 0b11));
        let second = &trace.iterations[1];
        assert_eq!((second.value, second.color), (1, 1));
        assert_eq!(second.used_values, vec![0]);
        assert_eq!((second.rows, second.cols), (0b11, 0b11));
    }

    #[test]
    fn peel_constant_single_iteration() {
        let a = BaseFunction::constant(2, 3, 2, 1).unwrap();
        let c = Coloring::new(3, 1, vec![0; 9]).unwrap();
        let trace = peel(&a, &c).unwrap();
        assert_eq!(trace.len(), 1);
        let it = &trace.iterations[0];
        assert_eq!(it.witness.len(), 9);
        assert_eq!((it.enclosing_rows, it.enclosing_cols), (0b111, 0b111));
    }

    #[test]
    fn peel_rejects_non_star_free() {
        let mono = Coloring::new(2, 1, vec![0; 4]).unwrap();
        assert!(matches!(
            peel(&gen_latin(2).unwrap(), &mono),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn coloring_format_round_trip() {
        let c = diagonal_coloring();
        let text = serialize_coloring(&c);
        assert_eq!(text, "nofcol 1\n2 2\n0 1 1 0\n");
        assert_eq!(parse_coloring(&text).unwrap(), c);
        assert!(matches!(
            parse_coloring("nofcol 1\n2 2\n0 1 2 0\n"),
            Err(Error::Format(FormatError::OutOfRange { .. }))
        ));
    }
}
