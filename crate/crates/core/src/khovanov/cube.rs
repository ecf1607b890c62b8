use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{BigradedRanks, KhError, Ring};
use crate::diagram::PlanarDiagram;
use crate::linalg::{smith_invariants, BitMatrix};
use crate::util::UnionFind;

type Blocks = BTreeMap<(i64, i64), Vec<usize>>;

/// One vertex of the cube: circle index of every arc after smoothing.
#[derive(Clone, Debug)]
struct Vertex {
    arc_circle: Vec<usize>,
    circles: usize,
    marked: usize,
    offset: usize,
}

/// The reduced Khovanov complex of a marked diagram.
///
/// Generator `g` lives at cube vertex `vertex[g]` and labels circle `k`
/// with `x` when bit `k` of `labels[g]` is set.
#[derive(Clone, Debug)]
pub struct KhComplex {
    pub vertex: Vec<u32>,
    pub labels: Vec<u32>,
    /// `(i, 2j)` of each generator.
    pub grading: Vec<(i64, i64)>,
    /// Boundary terms with integer coefficients.
    pub boundary: Vec<Vec<(usize, i64)>>,
    pub components: usize,
}

/// Keeps the bits of `mask` other than `skip`, packed.
fn compact(mask: u32, skip: usize) -> u32 {
    let low = mask & ((1 << skip) - 1);
    let high = (mask >> (skip + 1)) << skip;
    low | high
}

fn expand(c: u32, skip: usize) -> u32 {
    let low = c & ((1 << skip) - 1);
    let high = (c >> skip) << (skip + 1);
    low | high | (1 << skip)
}

fn smooth(d: &PlanarDiagram, v: usize, marked_arc: Option<usize>) -> Vertex {
    let mut uf = UnionFind::new(d.n_arcs());
    for (c, t) in d.crossings().iter().enumerate() {
        if v >> c & 1 == 0 {
            uf.union(t[0], t[1]);
            uf.union(t[2], t[3]);
        } else {
            uf.union(t[0], t[3]);
            uf.union(t[1], t[2]);
        }
    }
    let mut id = vec![usize::MAX; d.n_arcs()];
    let mut arc_circle = vec![0; d.n_arcs()];
    let mut next = 0;
    for a in 0..d.n_arcs() {
        let r = uf.find(a);
        if id[r] == usize::MAX {
            id[r] = next;
            next += 1;
        }
        arc_circle[a] = id[r];
    }
    let marked = marked_arc.map_or(next, |a| arc_circle[a]);
    Vertex {
        arc_circle,
        circles: next + d.free_loops(),
        marked,
        offset: 0,
    }
}

impl KhComplex {
    pub fn build(d: &PlanarDiagram, limit: usize) -> Result<Self, KhError> {
        let n = d.crossing_count();
        if n > limit {
            return Err(KhError::CubeTooLarge { n, limit });
        }
        if d.n_arcs() == 0 && d.free_loops() == 0 {
            return Err(KhError::NoMarkedArc);
        }
        let marked_arc = match d.marked_arc() {
            Some(a) => Some(a),
            None if d.n_arcs() > 0 => Some(0),
            None => None,
        };
        let (np, nm) = (d.positive_count() as i64, d.negative_count() as i64);
        let mut vertices: Vec<Vertex> = (0..1usize << n)
            .into_par_iter()
            .map(|v| smooth(d, v, marked_arc))
            .collect();
        let mut total = 0;
        for vx in vertices.iter_mut() {
            vx.offset = total;
            total += 1 << (vx.circles - 1);
        }
        let mut vertex = Vec::with_capacity(total);
        let mut labels = Vec::with_capacity(total);
        let mut grading = Vec::with_capacity(total);
        for (v, vx) in vertices.iter().enumerate() {
            let h = v.count_ones() as i64;
            for c in 0..1u32 << (vx.circles - 1) {
                let mask = expand(c, vx.marked);
                let xs = mask.count_ones() as i64;
                vertex.push(v as u32);
                labels.push(mask);
                grading.push((h - nm, vx.circles as i64 - 2 * xs + h + np - 2 * nm + 1));
            }
        }
        let boundary: Vec<Vec<(usize, i64)>> = (0..total)
            .into_par_iter()
            .map(|g| edge_terms(d, &vertices, vertex[g] as usize, labels[g]))
            .collect();
        Ok(KhComplex {
            vertex,
            labels,
            grading,
            boundary,
            components: d.components(),
        })
    }

    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    /// `∂∘∂ = 0` with integer coefficients (hence also mod 2).
    pub fn d_squared_is_zero(&self) -> bool {
        (0..self.len()).into_par_iter().all(|g| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(h, a) in &self.boundary[g] {
                for &(k, b) in &self.boundary[h] {
                    *acc.entry(k).or_insert(0) += a * b;
                }
            }
            acc.values().all(|&c| c == 0)
        })
    }

    /// Whether each boundary term raises `i` by one and keeps `2j`.
    pub fn gradings_consistent(&self) -> bool {
        (0..self.len()).all(|g| {
            let (i, j) = self.grading[g];
            self.boundary[g]
                .iter()
                .all(|&(h, _)| self.grading[h] == (i + 1, j))
        })
    }

    fn blocks(&self) -> (Blocks, Vec<usize>) {
        let mut blocks = Blocks::new();
        let mut pos = vec![0; self.len()];
        for g in 0..self.len() {
            let b = blocks.entry(self.grading[g]).or_default();
            pos[g] = b.len();
            b.push(g);
        }
        (blocks, pos)
    }

    pub fn homology_f2(&self) -> BigradedRanks {
        let (blocks, pos) = self.blocks();
        let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
        let ranks: BTreeMap<(i64, i64), usize> = keys
            .par_iter()
            .map(|&(i, j)| {
                let src = &blocks[&(i, j)];
                let Some(dst) = blocks.get(&(i + 1, j)) else {
                    return ((i, j), 0);
                };
                let mut m = BitMatrix::zeros(src.len(), dst.len());
                for (r, &g) in src.iter().enumerate() {
                    for &(h, c) in &self.boundary[g] {
                        if c % 2 != 0 {
                            m.flip(r, pos[h]);
                        }
                    }
                }
                ((i, j), m.rank())
            })
            .collect();
        let mut out = BigradedRanks {
            ring: Some(Ring::F2),
            components: self.components,
            ..Default::default()
        };
        for (&(i, j), v) in &blocks {
            let h = v.len() - ranks[&(i, j)] - ranks.get(&(i - 1, j)).copied().unwrap_or(0);
            out.insert(i, j, h);
        }
        out
    }

    pub fn homology_z(&self) -> Result<BigradedRanks, KhError> {
        let (blocks, pos) = self.blocks();
        let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
        let divisors: Vec<((i64, i64), Vec<i64>)> = keys
            .par_iter()
            .map(|&(i, j)| {
                let src = &blocks[&(i, j)];
                let Some(dst) = blocks.get(&(i + 1, j)) else {
                    return Ok(((i, j), Vec::new()));
                };
                let mut m = vec![vec![0i64; dst.len()]; src.len()];
                for (r, &g) in src.iter().enumerate() {
                    for &(h, c) in &self.boundary[g] {
                        m[r][pos[h]] += c;
                    }
                }
                Ok(((i, j), smith_invariants(&m)?))
            })
            .collect::<Result<_, KhError>>()?;
        let divisors: BTreeMap<(i64, i64), Vec<i64>> = divisors.into_iter().collect();
        let mut out = BigradedRanks {
            ring: Some(Ring::Z),
            components: self.components,
            ..Default::default()
        };
        for (&(i, j), v) in &blocks {
            let r_out = divisors[&(i, j)].len();
            let incoming = divisors.get(&(i - 1, j));
            let r_in = incoming.map_or(0, |d| d.len());
            out.insert(i, j, v.len() - r_out - r_in);
            let tors: Vec<i64> = incoming
                .map(|d| d.iter().copied().filter(|&x| x > 1).collect())
                .unwrap_or_default();
            if !tors.is_empty() {
                out.torsion.insert((i, j), tors);
            }
        }
        Ok(out)
    }
}

/// Boundary of the generator `(v, mask)`: one edge per 0-bit of `v`.
fn edge_terms(d: &PlanarDiagram, vs: &[Vertex], v: usize, mask: u32) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let src = &vs[v];
    let arc_circles = src.circles - d.free_loops();
    for (c, t) in d.crossings().iter().enumerate() {
        if v >> c & 1 == 1 {
            continue;
        }
        let w = v | 1 << c;
        let dst = &vs[w];
        let dst_arc_circles = dst.circles - d.free_loops();
        let sign = if (v & ((1 << c) - 1)).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        };
        let (ca, cb) = (src.arc_circle[t[0]], src.arc_circle[t[2]]);
        // circles away from the crossing keep their arcs
        let mut phi = vec![usize::MAX; src.circles];
        for a in 0..d.n_arcs() {
            let k = src.arc_circle[a];
            if k != ca && k != cb {
                phi[k] = dst.arc_circle[a];
            }
        }
        for f in 0..d.free_loops() {
            phi[arc_circles + f] = dst_arc_circles + f;
        }
        let mut base = 0u32;
        for (k, &p) in phi.iter().enumerate() {
            if p != usize::MAX && mask >> k & 1 == 1 {
                base |= 1 << p;
            }
        }
        let bit = |k: usize| mask >> k & 1 == 1;
        let targets: Vec<u32> = if ca != cb {
            let to = dst.arc_circle[t[0]];
            match (bit(ca), bit(cb)) {
                (true, true) => vec![],
                (false, false) => vec![base],
                _ => vec![base | 1 << to],
            }
        } else {
            let (c1, c2) = (dst.arc_circle[t[0]], dst.arc_circle[t[1]]);
            if bit(ca) {
                vec![base | 1 << c1 | 1 << c2]
            } else {
                vec![base | 1 << c2, base | 1 << c1]
            }
        };
        for m in targets {
            debug_assert!(m >> dst.marked & 1 == 1);
            out.push((dst.offset + compact(m, dst.marked) as usize, sign));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_round_trip() {
        for skip in 0..5 {
            for c in 0..16u32 {
                assert_eq!(compact(expand(c, skip), skip), c);
            }
        }
    }

    #[test]
    fn unknot_and_unlink() {
        let r = KhComplex::build(&PlanarDiagram::unknot(), 14)
            .unwrap()
            .homology_f2();
        assert_eq!(r.entries, BTreeMap::from([((0, 0), 1)]));
        let r = KhComplex::build(&PlanarDiagram::unlink(2), 14)
            .unwrap()
            .homology_f2();
        assert_eq!(r.entries, BTreeMap::from([((0, 1), 1), ((0, -1), 1)]));
        assert!(KhComplex::build(&PlanarDiagram::unlink(0), 14).is_err());
    }
}
