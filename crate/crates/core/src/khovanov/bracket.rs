use crate::diagram::PlanarDiagram;
use crate::poly::Laurent;
use crate::util::UnionFind;

/// Kauffman bracket `<D>` in the variable `A`, normalized so that a
/// single circle has bracket 1.
pub fn kauffman_bracket(d: &PlanarDiagram) -> Laurent {
    let n = d.crossing_count();
    let loop_value = Laurent::from_terms([(2, -1), (-2, -1)]);
    let mut total = Laurent::zero();
    for state in 0..1usize << n {
        let mut uf = UnionFind::new(d.n_arcs());
        for (c, t) in d.crossings().iter().enumerate() {
            if state >> c & 1 == 0 {
                uf.union(t[0], t[1]);
                uf.union(t[2], t[3]);
            } else {
                uf.union(t[0], t[3]);
                uf.union(t[1], t[2]);
            }
        }
        let circles = uf.count() + d.free_loops();
        let b = state.count_ones() as i64;
        let a = n as i64 - b;
        let term = loop_value.pow(circles as u32 - 1).shift(a - b);
        total = &total + &term;
    }
    total
}

/// Jones polynomial in `s = q^{1/2}`, with `t^{1/2} -> -s`, so that it
/// agrees with the graded Euler characteristic of reduced Khovanov
/// homology.
pub fn jones_polynomial(d: &PlanarDiagram) -> Laurent {
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let v = kauffman_bracket(d).shift(-3 * w);
    let mut out = Laurent::zero();
    for (k, c) in v.terms() {
        // A^k = t^{-k/4} = (t^{1/2})^{-k/2}
        debug_assert!(k % 2 == 0);
        let m = -k / 2;
        let s = if m % 2 == 0 { 1 } else { -1 };
        out.add_term(sign * s * c, m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_and_hopf() {
        let t = PlanarDiagram::parse_pd("X 1,5,2,4; X 3,1,4,6; X 5,3,6,2").unwrap();
        assert_eq!(kauffman_bracket(&t).len(), 3);
        assert_eq!(
            jones_polynomial(&t),
            Laurent::from_terms([(2, 1), (6, 1), (8, -1)])
        );
        let h = PlanarDiagram::parse_pd("X 1,3,2,4; X 3,1,4,2").unwrap();
        let j = jones_polynomial(&h);
        assert!(
            j == Laurent::from_terms([(1, 1), (5, 1)])
                || j == Laurent::from_terms([(-1, 1), (-5, 1)])
        );
        assert_eq!(jones_polynomial(&PlanarDiagram::unknot()), Laurent::one());
    }
}
