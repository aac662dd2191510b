//! Brute-force reference implementations, written directly from the
//! definitions and sharing no code with the library's searches.
#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::Ratio;
use nof_workbench::BaseFunction;

pub fn grid(a: &BaseFunction) -> Vec<Vec<u32>> {
    let n = a.side();
    (0..n).map(|x| (0..n).map(|y| a.at(x, y)).collect()).collect()
}

/// Every `(x, y, x', y')` with `A(x', y) = A(x, y') != A(x, y)`, in loop order.
pub fn naive_stars(a: &BaseFunction) -> Vec<(usize, usize, usize, usize)> {
    let g = grid(a);
    let n = g.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for x2 in 0..n {
                for y2 in 0..n {
                    if x2 != x && y2 != y && g[x2][y] == g[x][y2] && g[x][y] != g[x2][y] {
                        out.push((x, y, x2, y2));
                    }
                }
            }
        }
    }
    out
}

/// Smallest `L <= max_colors` admitting a coloring with no monochromatic
/// star, by plain backtracking over entries in row-major order.
pub fn naive_chi(a: &BaseFunction, max_colors: u32) -> Option<u32> {
    let n = a.side();
    let stars: Vec<[usize; 3]> = naive_stars(a)
        .into_iter()
        .map(|(x, y, x2, y2)| [x * n + y, x2 * n + y, x * n + y2])
        .collect();
    fn extend(i: usize, l: u32, colors: &mut Vec<u32>, stars: &[[usize; 3]], total: usize) -> bool {
        if i == total {
            return true;
        }
        for c in 0..l {
            colors.push(c);
            let ok = stars.iter().all(|s| {
                !s.iter().all(|&e| e <= i) || !(colors[s[0]] == colors[s[1]] && colors[s[1]] == colors[s[2]])
            });
            if ok && extend(i + 1, l, colors, stars, total) {
                return true;
            }
            colors.pop();
        }
        false
    }
    (1..=max_colors).find(|&l| extend(0, l, &mut Vec::new(), &stars, n * n))
}

/// All rectangles, each as the bitmask of its entries (row-major).
fn rectangle_masks(n: usize) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for rows in 1u64..1 << n {
        for cols in 1u64..1 << n {
            let mut m = 0u64;
            for x in 0..n {
                for y in 0..n {
                    if rows >> x & 1 == 1 && cols >> y & 1 == 1 {
                        m |= 1 << (x * n + y);
                    }
                }
            }
            out.push((rows, cols, m));
        }
    }
    out
}

/// Minimum number of monochromatic rectangles covering the entries of
/// `scope`, where a rectangle only needs to be constant on scope entries.
pub fn naive_min_cover(a: &BaseFunction, scope: u64) -> usize {
    let g = grid(a);
    let n = g.len();
    let mono: Vec<u64> = rectangle_masks(n)
        .into_iter()
        .map(|(_, _, m)| m & scope)
        .filter(|&m| {
            let vals: Vec<u32> = (0..n * n).filter(|i| m >> i & 1 == 1).map(|i| g[i / n][i % n]).collect();
            !vals.is_empty() && vals.iter().all(|&v| v == vals[0])
        })
        .collect();
    let mut memo = HashMap::new();
    fn solve(covered: u64, scope: u64, mono: &[u64], memo: &mut HashMap<u64, usize>) -> usize {
        let todo = scope & !covered;
        if todo == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&covered) {
            return v;
        }
        let low = todo & todo.wrapping_neg();
        let best = mono
            .iter()
            .filter(|&&m| m & low != 0)
            .map(|&m| 1 + solve(covered | m, scope, mono, memo))
            .min()
            .expect("singletons are monochromatic");
        memo.insert(covered, best);
        best
    }
    solve(0, scope, &mono, &mut memo)
}

/// `max_{R, y} | Pr[A = y and (x, y') in R] - |R| / (N n^2) |` over every
/// non-empty row set and column set.
pub fn naive_disc(a: &BaseFunction) -> Ratio<i64> {
    let g = grid(a);
    let n = g.len();
    let big_n = a.colors() as i64;
    let total = (n * n) as i64;
    let mut best = Ratio::from_integer(0);
    for rows in 1u32..1 << n {
        for cols in 1u32..1 << n {
            for y in 0..a.colors() {
                let (mut size, mut count) = (0i64, 0i64);
                for (x, row) in g.iter().enumerate() {
                    for (t, &v) in row.iter().enumerate() {
                        if rows >> x & 1 == 1 && cols >> t & 1 == 1 {
                            size += 1;
                            count += (v == y) as i64;
                        }
                    }
                }
                let d = Ratio::new(count, total) - Ratio::new(size, big_n * total);
                let d = if d < Ratio::from_integer(0) { -d } else { d };
                if d > best {
                    best = d;
                }
            }
        }
    }
    best
}

/// Two-player deterministic complexity of the full function by exhaustive
/// protocol search: a rectangle is a leaf when constant, otherwise one player
/// splits their side into two non-empty halves.
pub fn naive_det_cc(a: &BaseFunction) -> u32 {
    let g = grid(a);
    let n = g.len();
    let rows: Vec<usize> = (0..n).collect();
    let mut memo = HashMap::new();
    fn depth(
        rows: &[usize],
        cols: &[usize],
        g: &[Vec<u32>],
        memo: &mut HashMap<(Vec<usize>, Vec<usize>), u32>,
    ) -> u32 {
        let first = g[rows[0]][cols[0]];
        if rows.iter().all(|&x| cols.iter().all(|&y| g[x][y] == first)) {
            return 0;
        }
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(&d) = memo.get(&key) {
            return d;
        }
        let mut best = u32::MAX;
        for (side, other, alice) in [(rows, cols, true), (cols, rows, false)] {
            let m = side.len();
            // Fix the last element in the second half to visit each split once.
            for mask in 1u32..1 << (m - 1) {
                let a_half: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| side[i]).collect();
                let b_half: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| side[i]).collect();
                let (d1, d2) = if alice {
                    (depth(&a_half, other, g, memo), depth(&b_half, other, g, memo))
                } else {
                    (depth(other, &a_half, g, memo), depth(other, &b_half, g, memo))
                };
                best = best.min(1 + d1.max(d2));
            }
        }
        memo.insert(key, best);
        best
    }
    depth(&rows, &rows, &g, &mut memo)
}

/// Every function `[n]^2 -> [colors]`, in counting order.
pub fn all_functions(n: usize, colors: u32) -> impl Iterator<Item = BaseFunction> {
    let cells = (n * n) as u32;
    (0..(colors as u64).pow(cells)).map(move |mut code| {
        let values = (0..cells)
            .map(|_| {
                let v = (code % colors as u64) as u32;
                code /= colors as u64;
                v
            })
            .collect();
        BaseFunction::new(2, n, colors, values).unwrap()
    })
}
