#![allow(dead_code)]

use chromres::graph::{generate_gnp, GnpParams, Graph};

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    generate_gnp(&GnpParams::new(n, p, seed).unwrap()).unwrap()
}

/// Chromatic number by plain backtracking over vertices in index order.
pub fn brute_chi(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    fn fits(g: &Graph, colors: &mut Vec<usize>, k: usize, used: usize) -> bool {
        let v = colors.len();
        if v == g.n() {
            return true;
        }
        for c in 0..k.min(used + 1) {
            if (0..v).all(|u| !g.has_edge(u, v) || colors[u] != c) {
                colors.push(c);
                if fits(g, colors, k, used.max(c + 1)) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    (1..=n).find(|&k| fits(g, &mut Vec::new(), k, 0)).unwrap()
}

/// Independence number by scanning all subsets (n <= 20).
pub fn brute_alpha(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    let rows: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| g.has_edge(u, v))
                .fold(0, |m, u| m | 1 << u)
        })
        .collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || rows[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
