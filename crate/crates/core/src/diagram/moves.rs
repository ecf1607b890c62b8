//! Resolutions, mirror images and simplifying moves.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{DiagramError, PlanarDiagram, RawDiagram, Slot};
use crate::util::UnionFind;

/// Smoothing of a single crossing.
///
/// `Zero` joins legs 0-1 and 2-3, `One` joins legs 0-3 and 1-2. At a
/// positive crossing `Zero` is the orientation-respecting smoothing; at a
/// negative crossing it is `One`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resolution {
    Zero,
    One,
}

impl Resolution {
    pub fn bit(self) -> usize {
        match self {
            Resolution::Zero => 0,
            Resolution::One => 1,
        }
    }
}

/// Rebuild helper: removes `drop` crossings, merges arcs along `uf`, and
/// turns merged arcs that no longer touch a crossing into free loops.
struct Surgery<'a> {
    d: &'a PlanarDiagram,
    uf: UnionFind,
    drop: BTreeSet<usize>,
    replaced: Vec<(usize, [usize; 4], [bool; 4])>,
}

impl<'a> Surgery<'a> {
    fn new(d: &'a PlanarDiagram) -> Self {
        Surgery {
            d,
            uf: UnionFind::new(d.n_arcs),
            drop: BTreeSet::new(),
            replaced: Vec::new(),
        }
    }

    fn finish(mut self, priority: &[(Slot, bool)]) -> Result<PlanarDiagram, DiagramError> {
        let hints_old = self.d.incoming_table();
        let mut new_index = vec![usize::MAX; self.d.crossing_count()];
        let mut legs = Vec::new();
        let mut hints = Vec::new();
        for c in 0..self.d.crossing_count() {
            if self.drop.contains(&c) {
                continue;
            }
            new_index[c] = legs.len();
            let (l, h) = match self.replaced.iter().find(|r| r.0 == c) {
                Some(&(_, l, h)) => (l, h),
                None => (self.d.crossings[c], hints_old[c]),
            };
            legs.push(l.map(|a| self.uf.find(a)));
            hints.push(h);
        }
        let mut live = BTreeSet::new();
        for t in &legs {
            live.extend(t.iter().copied());
        }
        let mut dead = BTreeSet::new();
        for &c in &self.drop {
            for &a in &self.d.crossings[c] {
                let r = self.uf.find(a);
                if !live.contains(&r) {
                    dead.insert(r);
                }
            }
        }
        let marked = self
            .d
            .marked_arc
            .map(|a| self.uf.find(a))
            .filter(|r| live.contains(r));
        let priority: Vec<(Slot, bool)> = priority
            .iter()
            .map(|&((c, p), b)| ((new_index[c], p), b))
            .collect();
        let raw = RawDiagram {
            legs,
            hints: Some(hints),
            free_loops: self.d.free_loops + dead.len(),
            marked,
            name: self.d.name.clone(),
        };
        if raw.legs.is_empty() {
            return Ok(PlanarDiagram::unlink(raw.free_loops).with_optional_name(raw.name));
        }
        raw.finish(&priority)
    }
}

impl PlanarDiagram {
    fn with_optional_name(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    fn check_crossing(&self, k: usize) -> Result<(), DiagramError> {
        if k >= self.crossing_count() {
            return Err(DiagramError::IndexOutOfRange {
                index: k,
                count: self.crossing_count(),
            });
        }
        Ok(())
    }

    /// Smoothing that respects orientation at crossing `k`.
    pub fn oriented_resolution(&self, k: usize) -> Resolution {
        if self.signs[k] > 0 {
            Resolution::Zero
        } else {
            Resolution::One
        }
    }

    /// Smoothing that does not respect orientation at crossing `k`.
    pub fn unoriented_resolution(&self, k: usize) -> Resolution {
        match self.oriented_resolution(k) {
            Resolution::Zero => Resolution::One,
            Resolution::One => Resolution::Zero,
        }
    }

    /// The diagram with crossing `k` smoothed.
    ///
    /// After an unoriented smoothing the component through the smoothed
    /// site is oriented along the lower-indexed arc that entered `k`; all
    /// other components keep their orientation.
    pub fn resolve(&self, k: usize, kind: Resolution) -> Result<PlanarDiagram, DiagramError> {
        self.check_crossing(k)?;
        let t = self.crossings[k];
        let mut s = Surgery::new(self);
        s.drop.insert(k);
        match kind {
            Resolution::Zero => {
                s.uf.union(t[0], t[1]);
                s.uf.union(t[2], t[3]);
            }
            Resolution::One => {
                s.uf.union(t[0], t[3]);
                s.uf.union(t[1], t[2]);
            }
        }
        let mut priority = Vec::new();
        if kind != self.oriented_resolution(k) {
            let over_in = if self.signs[k] > 0 { 3 } else { 1 };
            let mut ins = [t[0], t[over_in]];
            ins.sort_unstable();
            let occ = self.occurrences();
            for a in ins {
                if let Some(&far) = occ[a].iter().find(|sl| sl.0 != k) {
                    priority.push((far, false));
                    break;
                }
            }
        }
        s.finish(&priority)
    }

    /// Mirror image: every crossing changes sign.
    pub fn mirror(&self) -> PlanarDiagram {
        let mut out = self.clone();
        for (t, s) in out.crossings.iter_mut().zip(out.signs.iter_mut()) {
            if *s > 0 {
                t.rotate_right(1);
            } else {
                t.rotate_left(1);
            }
            *s = -*s;
        }
        out
    }

    /// Applies Reidemeister I and II reductions and removes nugatory
    /// crossings until none apply. Never increases the crossing count.
    pub fn simplify(&self) -> PlanarDiagram {
        let mut d = self.clone();
        while let Some(next) = d
            .reduce_r1()
            .or_else(|| d.reduce_r2())
            .or_else(|| d.reduce_nugatory())
        {
            d = next;
        }
        d
    }

    fn reduce_r1(&self) -> Option<PlanarDiagram> {
        for (c, t) in self.crossings.iter().enumerate() {
            for i in 0..4 {
                if t[i] == t[(i + 1) % 4] {
                    let mut s = Surgery::new(self);
                    s.drop.insert(c);
                    s.uf.union(t[i], t[(i + 2) % 4]);
                    s.uf.union(t[i], t[(i + 3) % 4]);
                    return Some(s.finish(&[]).expect("R1 keeps planarity"));
                }
            }
        }
        None
    }

    fn reduce_r2(&self) -> Option<PlanarDiagram> {
        for f in self.faces() {
            if f.len() != 2 {
                continue;
            }
            let [(c1, i), (c2, j)] = [f.corners[0], f.corners[1]];
            if c1 == c2 || (i + 1) % 2 != j % 2 {
                continue;
            }
            let (a, b) = (self.crossings[c1], self.crossings[c2]);
            let x = a[(i + 1) % 4];
            let y = a[i];
            let mut s = Surgery::new(self);
            s.drop.insert(c1);
            s.drop.insert(c2);
            s.uf.union(x, a[(i + 3) % 4]);
            s.uf.union(x, b[(j + 2) % 4]);
            s.uf.union(y, a[(i + 2) % 4]);
            s.uf.union(y, b[(j + 3) % 4]);
            return Some(s.finish(&[]).expect("R2 keeps planarity"));
        }
        None
    }

    /// Crossings separated from crossing `c` by the legs `from`.
    fn side_of(&self, c: usize, from: [usize; 2], occ: &[[Slot; 2]]) -> BTreeSet<usize> {
        let mut side = BTreeSet::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for p in from {
            let a = self.crossings[c][p];
            for &(cc, _) in &occ[a] {
                if cc != c && side.insert(cc) {
                    queue.push_back(cc);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            for &a in &self.crossings[u] {
                for &(cc, _) in &occ[a] {
                    if cc != c && side.insert(cc) {
                        queue.push_back(cc);
                    }
                }
            }
        }
        side
    }

    fn reduce_nugatory(&self) -> Option<PlanarDiagram> {
        let occ = self.occurrences();
        for f in self.faces() {
            for &(c, r) in &f.corners {
                if !f.corners.contains(&(c, (r + 2) % 4)) {
                    continue;
                }
                let q = self.side_of(c, [(r + 3) % 4, r], &occ);
                let p = self.side_of(c, [(r + 1) % 4, (r + 2) % 4], &occ);
                if !q.is_disjoint(&p) {
                    continue;
                }
                let flip = if q.len() <= p.len() { q } else { p };
                let t = self.crossings[c];
                let hints = self.incoming_table();
                let mut s = Surgery::new(self);
                s.drop.insert(c);
                s.uf.union(t[r], t[(r + 2) % 4]);
                s.uf.union(t[(r + 1) % 4], t[(r + 3) % 4]);
                for u in flip {
                    let mut l = self.crossings[u];
                    let mut h = hints[u];
                    l.reverse();
                    h.reverse();
                    s.replaced.push((u, l, h));
                }
                return Some(
                    s.finish(&[])
                        .expect("removing a nugatory crossing keeps planarity"),
                );
            }
        }
        None
    }

    /// Inserts a Reidemeister I kink on `arc`.
    ///
    /// `over_first` decides whether the strand first passes the new
    /// crossing on the over-strand; `twist` picks which side the loop
    /// lies on, so the four choices give both crossing signs.
    pub fn add_kink(
        &self,
        arc: usize,
        over_first: bool,
        twist: bool,
    ) -> Result<PlanarDiagram, DiagramError> {
        if arc >= self.n_arcs {
            return Err(DiagramError::ArcOutOfRange {
                arc,
                count: self.n_arcs,
            });
        }
        let (_, head) = self.arc_endpoints(arc);
        let lp = self.n_arcs;
        let out = self.n_arcs + 1;
        let mut legs = self.crossings.clone();
        let mut hints = self.incoming_table();
        legs[head.0][head.1] = out;
        let s = usize::from(over_first);
        let t = if twist { (s + 1) % 4 } else { (s + 3) % 4 };
        let mut l = [0; 4];
        let mut h = [false; 4];
        l[s] = arc;
        h[s] = true;
        l[(s + 2) % 4] = lp;
        l[t] = lp;
        h[t] = true;
        l[(t + 2) % 4] = out;
        legs.push(l);
        hints.push(h);
        let marked = self.marked_arc;
        let raw = RawDiagram {
            legs,
            hints: Some(hints),
            free_loops: self.free_loops,
            marked,
            name: self.name.clone(),
        };
        raw.finish(&[])
    }
}
