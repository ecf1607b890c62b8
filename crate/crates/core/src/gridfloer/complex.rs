use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GridDiagram, GridError};
use crate::khovanov::DeltaRanks;
use crate::linalg::BitMatrix;
use crate::poly::Laurent;

/// The tilde grid complex: all `n!` generators with doubled gradings and
/// the boundary as sparse target lists.
#[derive(Clone, Debug)]
pub struct GridComplex {
    pub n: usize,
    pub generators: Vec<Vec<u8>>,
    pub m2: Vec<i64>,
    pub a2: Vec<i64>,
    pub boundary: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkReport {
    pub n: usize,
    pub components: usize,
    /// Tilde homology ranks keyed by `(2M, 2A)`.
    pub tilde: BTreeMap<(i64, i64), usize>,
    /// δ-ranks of the hat theory, `2δ = 2A - 2M`.
    pub delta: DeltaRanks,
    /// Symmetrized graded Euler characteristic of the hat theory in
    /// `t^{1/2}`: the Alexander polynomial for knots, and
    /// `(t^{1/2} - t^{-1/2})^{l-1}` times it for `l`-component links.
    pub alexander: Laurent,
    /// Shift applied to the Alexander grading to make it symmetric.
    pub recentered_by: i64,
}

/// `Σ_{p in P, q in Q} [p strictly below-left of q]` on doubled coordinates.
fn count_below_left(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    let mut s = 0;
    for a in p {
        for b in q {
            if a.0 < b.0 && a.1 < b.1 {
                s += 1;
            }
        }
    }
    s
}

/// `2J(P, Q)`.
fn j2(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    count_below_left(p, q) + count_below_left(q, p)
}

fn marker_points(rows: &[usize]) -> Vec<(i64, i64)> {
    rows.iter()
        .enumerate()
        .map(|(i, &r)| (2 * i as i64 + 1, 2 * r as i64 + 1))
        .collect()
}

fn maslov2(gen: &[(i64, i64)], markers: &[(i64, i64)], markers_j2: i64) -> i64 {
    // 2M = 2J(x,x) - 4J(x,O) + 2J(O,O) + 2
    j2(gen, gen) - 2 * j2(gen, markers) + markers_j2 + 2
}

impl GridDiagram {
    /// Doubled Maslov and Alexander gradings of the generator `perm`
    /// (point `(i, perm[i])` at the lower-left corner of cell `(i, perm[i])`).
    pub fn gradings(&self, perm: &[u8]) -> (i64, i64) {
        let os = marker_points(self.o_perm());
        let xs = marker_points(self.x_perm());
        self.gradings_with(perm, &os, &xs, j2(&os, &os), j2(&xs, &xs))
    }

    fn gradings_with(
        &self,
        perm: &[u8],
        os: &[(i64, i64)],
        xs: &[(i64, i64)],
        oo: i64,
        xx: i64,
    ) -> (i64, i64) {
        let pts: Vec<(i64, i64)> = perm
            .iter()
            .enumerate()
            .map(|(i, &r)| (2 * i as i64, 2 * r as i64))
            .collect();
        let mo = maslov2(&pts, os, oo);
        let mx = maslov2(&pts, xs, xx);
        let free = (self.size() - self.components()) as i64;
        // 2A = M_O - M_X - (n - l)
        (mo, (mo - mx) / 2 - free)
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Index of `p` in lexicographic order.
fn perm_rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut fact = vec![1usize; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i;
    }
    let mut used = 0u32;
    let mut r = 0;
    for (i, &v) in p.iter().enumerate() {
        let smaller = (0..v).filter(|&u| used >> u & 1 == 0).count();
        r += smaller * fact[n - 1 - i];
        used |= 1 << v;
    }
    r
}

impl GridDiagram {
    /// Targets of the boundary of `perm`: one per empty rectangle.
    fn rectangles_from(&self, perm: &[u8]) -> Vec<Vec<u8>> {
        let n = self.size();
        let (o, x) = (self.o_perm(), self.x_perm());
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (r0, r1) = (perm[i] as usize, perm[j] as usize);
                let w = (j + n - i) % n;
                let h = (r1 + n - r0) % n;
                let inside_rows = |r: usize| (r + n - r0) % n < h;
                let mut empty = true;
                for s in 0..w {
                    let c = (i + s) % n;
                    if inside_rows(o[c]) || inside_rows(x[c]) {
                        empty = false;
                        break;
                    }
                    if s > 0 {
                        let d = (perm[c] as usize + n - r0) % n;
                        if d > 0 && d < h {
                            empty = false;
                            break;
                        }
                    }
                }
                if empty {
                    let mut y = perm.to_vec();
                    y.swap(i, j);
                    out.push(y);
                }
            }
        }
        out
    }
}

/// Builds the tilde complex; rejects grids larger than `limit`.
pub fn tilde_complex(g: &GridDiagram, limit: usize) -> Result<GridComplex, GridError> {
    let n = g.size();
    if n > limit {
        return Err(GridError::GridTooLarge { n, limit });
    }
    let mut generators = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        generators.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let os = marker_points(g.o_perm());
    let xs = marker_points(g.x_perm());
    let (oo, xx) = (j2(&os, &os), j2(&xs, &xs));
    let data: Vec<((i64, i64), Vec<usize>)> = generators
        .par_iter()
        .map(|x| {
            let gr = g.gradings_with(x, &os, &xs, oo, xx);
            let targets = g.rectangles_from(x).iter().map(|y| perm_rank(y)).collect();
            (gr, targets)
        })
        .collect();
    let mut m2 = Vec::with_capacity(data.len());
    let mut a2 = Vec::with_capacity(data.len());
    let mut boundary = Vec::with_capacity(data.len());
    for ((m, a), b) in data {
        m2.push(m);
        a2.push(a);
        boundary.push(b);
    }
    Ok(GridComplex {
        n,
        generators,
        m2,
        a2,
        boundary,
    })
}

impl GridComplex {
    /// Whether the differential squares to zero over GF(2).
    pub fn d_squared_is_zero(&self) -> bool {
        self.boundary.par_iter().all(|targets| {
            let mut count: BTreeMap<usize, u32> = BTreeMap::new();
            for &y in targets {
                for &z in &self.boundary[y] {
                    *count.entry(z).or_insert(0) += 1;
                }
            }
            count.values().all(|c| c % 2 == 0)
        })
    }

    /// Whether every boundary term lowers `2M` by 2 and keeps `2A`.
    pub fn gradings_consistent(&self) -> bool {
        (0..self.generators.len()).all(|x| {
            self.boundary[x]
                .iter()
                .all(|&y| self.m2[y] == self.m2[x] - 2 && self.a2[y] == self.a2[x])
        })
    }

    /// Homology ranks keyed by `(2M, 2A)`.
    pub fn homology(&self) -> BTreeMap<(i64, i64), usize> {
        let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for x in 0..self.generators.len() {
            blocks.entry((self.m2[x], self.a2[x])).or_default().push(x);
        }
        let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
        let pos: Vec<usize> = {
            let mut pos = vec![0; self.generators.len()];
            for v in blocks.values() {
                for (k, &x) in v.iter().enumerate() {
                    pos[x] = k;
                }
            }
            pos
        };
        // rank of the map out of each block
        let ranks: BTreeMap<(i64, i64), usize> = keys
            .par_iter()
            .map(|&(m, a)| {
                let src = &blocks[&(m, a)];
                let Some(dst) = blocks.get(&(m - 2, a)) else {
                    return ((m, a), 0);
                };
                let mut mat = BitMatrix::zeros(src.len(), dst.len());
                for (r, &x) in src.iter().enumerate() {
                    for &y in &self.boundary[x] {
                        mat.flip(r, pos[y]);
                    }
                }
                ((m, a), mat.rank())
            })
            .collect();
        let mut out = BTreeMap::new();
        for (&(m, a), v) in &blocks {
            let r_out = ranks[&(m, a)];
            let r_in = ranks.get(&(m + 2, a)).copied().unwrap_or(0);
            let h = v.len() - r_out - r_in;
            if h > 0 {
                out.insert((m, a), h);
            }
        }
        out
    }
}

/// Hat-theory δ-ranks, the Alexander polynomial and the tilde ranks.
pub fn hfk_delta_ranks(g: &GridDiagram, limit: usize) -> Result<HfkReport, GridError> {
    let cx = tilde_complex(g, limit)?;
    let tilde = cx.homology();
    let n = g.size();
    let free = n - g.components();
    let factor = 1usize << free;
    let mut raw = DeltaRanks::default();
    let mut chi = Laurent::zero();
    for (&(m2, a2), &r) in &tilde {
        raw.add(a2 - m2, r);
        let sign = if (m2 / 2) % 2 == 0 { 1 } else { -1 };
        chi.add_term(sign * r as i64, a2);
    }
    let mut delta = DeltaRanks::default();
    for (&d, &r) in &raw.entries {
        if r % factor != 0 {
            return Err(GridError::NonDivisibleRanks(free));
        }
        delta.add(d, r / factor);
    }
    // each V factor contributes 1 - t^{-1}, i.e. 1 - s^{-2} with s = t^{1/2}
    let v = Laurent::from_terms([(0, 1), (-2, -1)]);
    let mut hat = chi.clone();
    for _ in 0..free {
        hat = hat
            .div_exact(&v)
            .ok_or(GridError::NonDivisibleRanks(free))?;
    }
    let recentered_by = match (hat.min_exp(), hat.max_exp()) {
        (Some(lo), Some(hi)) => -(lo + hi) / 2,
        _ => 0,
    };
    let alexander = hat.shift(recentered_by);
    if recentered_by != 0 {
        let mut shifted = DeltaRanks::default();
        for (&d, &r) in &delta.entries {
            shifted.add(d + recentered_by, r);
        }
        delta = shifted;
    }
    Ok(HfkReport {
        n,
        components: g.components(),
        tilde,
        delta,
        alexander,
        recentered_by,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_ranking() {
        let mut p: Vec<u8> = vec![0, 1, 2, 3];
        let mut k = 0;
        loop {
            assert_eq!(perm_rank(&p), k);
            k += 1;
            if !next_permutation(&mut p) {
                break;
            }
        }
        assert_eq!(k, 24);
    }

    #[test]
    fn unknot_grid() {
        let g = GridDiagram::parse("1,0 | 0,1").unwrap();
        let cx = tilde_complex(&g, 8).unwrap();
        assert_eq!(cx.generators.len(), 2);
        assert!(cx.boundary.iter().all(|b| b.is_empty()));
        let mut m: Vec<i64> = cx.m2.clone();
        m.sort_unstable();
        assert_eq!(m, vec![-2, 0]);
        assert_eq!((cx.a2[0] - cx.a2[1]).abs(), 2);
        let r = hfk_delta_ranks(&g, 8).unwrap();
        assert_eq!(r.delta.entries, BTreeMap::from([(0, 1)]));
        assert_eq!(r.alexander, Laurent::one());
    }

    #[test]
    fn trefoil_grid() {
        let g = GridDiagram::parse("0,1,2,3,4 | 2,3,4,0,1").unwrap();
        let cx = tilde_complex(&g, 8).unwrap();
        assert_eq!(cx.generators.len(), 120);
        assert!(cx.d_squared_is_zero());
        assert!(cx.gradings_consistent());
        let total: usize = cx.homology().values().sum();
        assert_eq!(total, 48);
        let r = hfk_delta_ranks(&g, 8).unwrap();
        assert_eq!(r.delta.total(), 3);
        assert_eq!(r.delta.entries.len(), 1);
        assert_eq!(r.alexander, Laurent::from_terms([(-2, 1), (0, -1), (2, 1)]));
    }

    #[test]
    fn size_limit() {
        let g = GridDiagram::parse("0,1,2,3,4 | 2,3,4,0,1").unwrap();
        assert!(matches!(
            tilde_complex(&g, 4),
            Err(GridError::GridTooLarge { n: 5, limit: 4 })
        ));
    }
}
