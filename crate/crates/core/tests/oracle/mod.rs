//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the code under test except for plain data types.
#![allow(dead_code)]

use rfpm_core::field::FieldRealization;
use rfpm_core::lattice::Site;

/// Bitboard over `Λ_N` padded by one empty ring, `w = 2N + 3` wide.
#[derive(Clone, Copy, Debug)]
pub struct Board {
    pub n: i32,
    pub w: u32,
    full: u128,
}

impl Board {
    pub fn new(n: u32) -> Self {
        let w = 2 * n + 3;
        assert!(w * w <= 128, "box too large for the bitboard oracle");
        let full = if w * w == 128 { u128::MAX } else { (1u128 << (w * w)) - 1 };
        Self { n: n as i32, w, full }
    }

    pub fn bit(&self, s: Site) -> u128 {
        let col = (s.x + self.n + 1) as u32;
        let row = (s.y + self.n + 1) as u32;
        1u128 << (row * self.w + col)
    }

    pub fn sites_of(&self, mask: u128) -> Vec<Site> {
        let mut out = Vec::new();
        let mut m = mask;
        while m != 0 {
            let k = m.trailing_zeros();
            m &= m - 1;
            let (row, col) = ((k / self.w) as i32, (k % self.w) as i32);
            out.push(Site::new(col - self.n - 1, row - self.n - 1));
        }
        out
    }

    fn spread(&self, m: u128) -> u128 {
        (m | m << 1 | m >> 1 | m << self.w | m >> self.w) & self.full
    }

    /// 4-connectivity by flood fill.
    pub fn connected(&self, m: u128) -> bool {
        if m == 0 {
            return false;
        }
        let mut f = m & m.wrapping_neg();
        loop {
            let g = self.spread(f) & m;
            if g == f {
                return f == m;
            }
            f = g;
        }
    }

    /// Complement in the padded frame is connected. The frame ring is always
    /// in the complement and stands in for the unbounded outside.
    pub fn simply_connected(&self, m: u128) -> bool {
        self.connected(m) && self.connected(self.full & !m)
    }

    /// Edges of Z² with exactly one endpoint in `m`.
    pub fn edge_boundary(&self, m: u128) -> u32 {
        let bonds = (m & (m >> 1)).count_ones() + (m & (m >> self.w)).count_ones();
        4 * m.count_ones() - 2 * bonds
    }

    /// Every subset of `Λ_N` that contains the origin, has at most
    /// `max_size` sites, and is simply connected.
    pub fn animals(&self, max_size: usize) -> Vec<u128> {
        let origin = self.bit(Site::ORIGIN);
        let others: Vec<u128> = (-self.n..=self.n)
            .flat_map(|y| (-self.n..=self.n).map(move |x| Site::new(x, y)))
            .map(|s| self.bit(s))
            .filter(|&b| b != origin)
            .collect();
        let mut out = Vec::new();
        let mut stack = vec![(origin, 0usize)];
        // Each subset is visited once: extensions only use later sites.
        while let Some((m, next)) = stack.pop() {
            if self.simply_connected(m) {
                out.push(m);
            }
            if (m.count_ones() as usize) < max_size {
                for (k, &b) in others.iter().enumerate().skip(next) {
                    stack.push((m | b, k + 1));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Row-major site order, as used for canonical forms.
pub fn sorted_sites(mut sites: Vec<Site>) -> Vec<Site> {
    sites.sort_by_key(|s| (s.y, s.x));
    sites
}

/// `Σ_{i∈A} Σ_α h_i^α / |∂A|`, accumulated site by site in row-major order.
pub fn naive_score(field: &FieldRealization, board: &Board, mask: u128) -> f64 {
    let mut total = 0.0;
    for s in sorted_sites(board.sites_of(mask)) {
        total += field.at(s).expect("site in box").iter().sum::<f64>();
    }
    total / board.edge_boundary(mask) as f64
}

/// Best animal by brute force: `(score, sites in row-major order)`.
pub fn naive_gla(field: &FieldRealization, board: &Board, animals: &[u128]) -> (f64, Vec<Site>) {
    let mut best: Option<(f64, u128)> = None;
    for &m in animals {
        let s = naive_score(field, board, m);
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, m));
        }
    }
    let (score, mask) = best.expect("origin alone is an animal");
    (score, sorted_sites(board.sites_of(mask)))
}
