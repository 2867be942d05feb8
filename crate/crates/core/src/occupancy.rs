//! Mutable animal state for the local-search optimizers: membership, the
//! growth frontier, boundary counts, and validity tests for single-site moves
//! that keep the set simply connected.

use std::collections::VecDeque;

use crate::lattice::{BoundaryKind, BoxSpec, Site};

const NONE: usize = usize::MAX;

/// Indexed set with O(1) insert, remove and uniform sampling.
#[derive(Clone, Debug)]
struct IndexedSet {
    items: Vec<usize>,
    pos: Vec<usize>,
}

impl IndexedSet {
    fn new(capacity: usize) -> Self {
        Self {
            items: Vec::new(),
            pos: vec![NONE; capacity],
        }
    }

    fn insert(&mut self, c: usize) {
        if self.pos[c] == NONE {
            self.pos[c] = self.items.len();
            self.items.push(c);
        }
    }

    fn remove(&mut self, c: usize) {
        let p = self.pos[c];
        if p == NONE {
            return;
        }
        let last = *self.items.last().expect("nonempty");
        self.items.swap_remove(p);
        if last != c {
            self.pos[last] = p;
        }
        self.pos[c] = NONE;
    }
}

/// Animal inside `Λ_N`, stored on the box padded by one ring of cells.
#[derive(Clone, Debug)]
pub(crate) struct Occupancy {
    n: i32,
    width: usize,
    member: Vec<bool>,
    in_box: Vec<bool>,
    adjacent: Vec<u8>,
    members: IndexedSet,
    frontier: IndexedSet,
    edge_boundary: u32,
    site_boundary: u32,
}

impl Occupancy {
    pub fn new(spec: BoxSpec) -> Self {
        let n = spec.n() as i32;
        let width = spec.side() + 2;
        let cells = width * width;
        let mut in_box = vec![false; cells];
        for y in -n..=n {
            for x in -n..=n {
                in_box[(y + n + 1) as usize * width + (x + n + 1) as usize] = true;
            }
        }
        Self {
            n,
            width,
            member: vec![false; cells],
            in_box,
            adjacent: vec![0; cells],
            members: IndexedSet::new(cells),
            frontier: IndexedSet::new(cells),
            edge_boundary: 0,
            site_boundary: 0,
        }
    }

    pub fn cell(&self, s: Site) -> Option<usize> {
        if s.linf() > self.n + 1 {
            return None;
        }
        Some((s.y + self.n + 1) as usize * self.width + (s.x + self.n + 1) as usize)
    }

    pub fn site(&self, c: usize) -> Site {
        Site::new(
            (c % self.width) as i32 - self.n - 1,
            (c / self.width) as i32 - self.n - 1,
        )
    }

    fn four(&self, c: usize) -> [usize; 4] {
        [c + 1, c + self.width, c - 1, c - self.width]
    }

    /// Ring around `c` starting east, counterclockwise: E NE N NW W SW S SE.
    fn ring(&self, c: usize) -> [usize; 8] {
        let w = self.width;
        [c + 1, c + w + 1, c + w, c + w - 1, c - 1, c - w - 1, c - w, c - w + 1]
    }

    pub fn len(&self) -> usize {
        self.members.items.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members.items
    }

    pub fn frontier(&self) -> &[usize] {
        &self.frontier.items
    }

    pub fn boundary(&self, kind: BoundaryKind) -> u32 {
        match kind {
            BoundaryKind::Edge => self.edge_boundary,
            BoundaryKind::Site => self.site_boundary,
        }
    }

    pub fn member_sites(&self) -> Vec<Site> {
        let mut out: Vec<Site> = self.members.items.iter().map(|&c| self.site(c)).collect();
        out.sort_unstable();
        out
    }

    fn member_neighbors(&self, c: usize) -> u32 {
        self.four(c).iter().filter(|&&t| self.member[t]).count() as u32
    }

    /// Boundary size after adding `c`, without mutating.
    pub fn boundary_after_add(&self, c: usize, kind: BoundaryKind) -> u32 {
        match kind {
            BoundaryKind::Edge => self.edge_boundary + 4 - 2 * self.member_neighbors(c),
            BoundaryKind::Site => {
                let mut b = self.site_boundary;
                if self.adjacent[c] > 0 {
                    b -= 1;
                }
                for t in self.four(c) {
                    if !self.member[t] && self.adjacent[t] == 0 {
                        b += 1;
                    }
                }
                b
            }
        }
    }

    /// Boundary size after removing `c`, without mutating.
    pub fn boundary_after_remove(&self, c: usize, kind: BoundaryKind) -> u32 {
        match kind {
            BoundaryKind::Edge => self.edge_boundary + 2 * self.member_neighbors(c) - 4,
            BoundaryKind::Site => {
                let mut b = self.site_boundary;
                for t in self.four(c) {
                    if !self.member[t] && self.adjacent[t] == 1 {
                        b -= 1;
                    }
                }
                if self.adjacent[c] > 0 {
                    b += 1;
                }
                b
            }
        }
    }

    pub fn add(&mut self, c: usize) {
        debug_assert!(!self.member[c] && self.in_box[c]);
        self.edge_boundary = self.boundary_after_add(c, BoundaryKind::Edge);
        self.site_boundary = self.boundary_after_add(c, BoundaryKind::Site);
        self.member[c] = true;
        self.members.insert(c);
        self.frontier.remove(c);
        for t in self.four(c) {
            self.adjacent[t] += 1;
            if !self.member[t] && self.in_box[t] {
                self.frontier.insert(t);
            }
        }
    }

    pub fn remove(&mut self, c: usize) {
        debug_assert!(self.member[c]);
        self.edge_boundary = self.boundary_after_remove(c, BoundaryKind::Edge);
        self.site_boundary = self.boundary_after_remove(c, BoundaryKind::Site);
        self.member[c] = false;
        self.members.remove(c);
        for t in self.four(c) {
            self.adjacent[t] -= 1;
            if !self.member[t] && self.adjacent[t] == 0 {
                self.frontier.remove(t);
            }
        }
        if self.adjacent[c] > 0 {
            self.frontier.insert(c);
        }
    }

    /// Number of groups of 4-neighbors of `c` satisfying `pred` that are
    /// joined to each other through the ring around `c`.
    fn ring_groups(&self, c: usize, pred: impl Fn(usize) -> bool) -> usize {
        let ring = self.ring(c);
        let on: Vec<bool> = ring.iter().map(|&t| pred(t)).collect();
        let sides = [0usize, 2, 4, 6];
        let count = sides.iter().filter(|&&p| on[p]).count();
        if count == 0 {
            return 0;
        }
        // Each joined consecutive pair merges two groups.
        let joins = sides
            .iter()
            .filter(|&&p| on[p] && on[(p + 1) % 8] && on[(p + 2) % 8])
            .count();
        if joins == 4 {
            1
        } else {
            count - joins
        }
    }

    /// True iff adding `c` keeps the set simply connected (caller guarantees
    /// `c` is on the frontier or the set is empty).
    pub fn can_add(&self, c: usize) -> bool {
        if !self.in_box[c] || self.member[c] {
            return false;
        }
        if self.len() > 0 && self.adjacent[c] == 0 {
            return false;
        }
        let free = |t: usize| !self.member[t];
        if self.ring_groups(c, free) <= 1 {
            return true;
        }
        self.complement_reaches_outside_after_adding(c)
    }

    /// True iff removing `c` keeps a nonempty simply connected set.
    pub fn can_remove(&self, c: usize) -> bool {
        if !self.member[c] || self.len() < 2 {
            return false;
        }
        if self.adjacent[c] == 4 {
            // Would open a hole at `c`.
            return false;
        }
        let inside = |t: usize| self.member[t];
        if self.ring_groups(c, inside) <= 1 {
            return true;
        }
        self.connected_without(c)
    }

    fn bbox_with(&self, extra: usize) -> (i32, i32, i32, i32) {
        let s = self.site(extra);
        let (mut x0, mut x1, mut y0, mut y1) = (s.x, s.x, s.y, s.y);
        for &m in &self.members.items {
            let t = self.site(m);
            x0 = x0.min(t.x);
            x1 = x1.max(t.x);
            y0 = y0.min(t.y);
            y1 = y1.max(t.y);
        }
        (x0, x1, y0, y1)
    }

    fn complement_reaches_outside_after_adding(&self, c: usize) -> bool {
        let (x0, x1, y0, y1) = self.bbox_with(c);
        let outside = |t: usize| {
            let s = self.site(t);
            s.x < x0 || s.x > x1 || s.y < y0 || s.y > y1
        };
        let mut seen = vec![false; self.member.len()];
        seen[c] = true;
        for start in self.four(c) {
            if self.member[start] || seen[start] {
                // Already reached from an earlier neighbor, hence outside.
                continue;
            }
            let mut escaped = false;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            'bfs: while let Some(i) = queue.pop_front() {
                if outside(i) {
                    escaped = true;
                    break 'bfs;
                }
                for t in self.four(i) {
                    if !seen[t] && !self.member[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
            if !escaped {
                return false;
            }
        }
        true
    }

    fn connected_without(&self, c: usize) -> bool {
        let Some(&start) = self.members.items.iter().find(|&&m| m != c) else {
            return false;
        };
        let mut seen = vec![false; self.member.len()];
        seen[c] = true;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for t in self.four(i) {
                if !seen[t] && self.member[t] {
                    seen[t] = true;
                    reached += 1;
                    queue.push_back(t);
                }
            }
        }
        reached == self.len() - 1
    }
}
