//! Oracles shared by the integration tests. They recompute invariants by
//! routes that do not go through the library's own algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use qathin::poly::Laurent;
use qathin::util::UnionFind;
use qathin::{PlanarDiagram, Resolution};

/// Bracket by recursive smoothing of whole diagrams, `<D> = A<D_0> + A^{-1}<D_1>`.
pub fn bracket_by_skein(d: &PlanarDiagram) -> Laurent {
    if d.crossing_count() == 0 {
        let delta = Laurent::from_terms([(2, -1), (-2, -1)]);
        return delta.pow(d.free_loops() as u32 - 1);
    }
    let last = d.crossing_count() - 1;
    let a = bracket_by_skein(&d.resolve(last, Resolution::Zero).unwrap()).shift(1);
    let b = bracket_by_skein(&d.resolve(last, Resolution::One).unwrap()).shift(-1);
    &a + &b
}

/// `|<D>|` at `A = e^{iπ/4}`, where `t = A^{-4} = -1`.
pub fn bracket_modulus_at_minus_one(p: &Laurent) -> u64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (k, c) in p.terms() {
        let angle = std::f64::consts::FRAC_PI_4 * k as f64;
        re += c as f64 * angle.cos();
        im += c as f64 * angle.sin();
    }
    re.hypot(im).round() as u64
}

pub fn laplace_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let term = laplace_det(&minor) * m[0][j];
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier, constant term first.
fn charpoly(m: &[Vec<i64>]) -> Vec<i128> {
    let n = m.len();
    let a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * mk[l][j]).sum::<i128>();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        mk = next;
        let trace: i128 = (0..n)
            .map(|i| (0..n).map(|l| a[i][l] * mk[l][i]).sum::<i128>())
            .sum();
        assert_eq!(trace % k as i128, 0);
        coeffs[n - k] = -trace / k as i128;
    }
    coeffs
}

fn sign_changes(c: impl Iterator<Item = i128>) -> i64 {
    let signs: Vec<i128> = c.filter(|&v| v != 0).map(i128::signum).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count() as i64
}

/// Signature of a symmetric matrix from Descartes' rule on its real-rooted
/// characteristic polynomial.
pub fn descartes_signature(m: &[Vec<i64>]) -> i64 {
    let p = charpoly(m);
    let pos = sign_changes(p.iter().copied());
    let neg = sign_changes(
        p.iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v } else { -v }),
    );
    pos - neg
}

/// Alexander polynomial of a knot from the Wirtinger presentation: any
/// `(n-1)`-minor of the Fox Jacobian, abelianized. Normalized to lowest
/// exponent 0 and positive leading coefficient.
pub fn alexander_by_fox(d: &PlanarDiagram) -> Laurent {
    let n = d.crossing_count();
    if n == 0 {
        return Laurent::one();
    }
    let mut uf = UnionFind::new(d.n_arcs());
    for t in d.crossings() {
        uf.union(t[1], t[3]);
    }
    let mut ids: Vec<usize> = (0..d.n_arcs()).map(|a| uf.find(a)).collect();
    let mut roots = ids.clone();
    roots.sort_unstable();
    roots.dedup();
    for id in ids.iter_mut() {
        *id = roots.binary_search(id).unwrap();
    }
    let one_minus_t = Laurent::from_terms([(0, 1), (1, -1)]);
    let t = Laurent::monomial(1, 1);
    let minus_one = Laurent::monomial(-1, 0);
    let mut m = vec![vec![Laurent::zero(); roots.len()]; n];
    for (c, legs) in d.crossings().iter().enumerate() {
        let (over, inc, out) = (ids[legs[1]], ids[legs[0]], ids[legs[2]]);
        // positive: x_out = x_over^{-1} x_in x_over; negative: conjugate the other way
        let (a, b) = if d.sign(c) > 0 {
            (&minus_one, &t)
        } else {
            (&t, &minus_one)
        };
        let row = &mut m[c];
        row[over] = &row[over] + &one_minus_t;
        row[inc] = &row[inc] + a;
        row[out] = &row[out] + b;
    }
    let minor: Vec<Vec<Laurent>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    normalize(&laurent_det(minor))
}

/// Fraction-free elimination over `Z[t, t^-1]`.
fn laurent_det(mut m: Vec<Vec<Laurent>>) -> Laurent {
    let n = m.len();
    if n == 0 {
        return Laurent::one();
    }
    let mut prev = Laurent::one();
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Laurent::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -&det
    } else {
        det
    }
}

/// Shifts to lowest exponent 0 and makes the leading coefficient positive.
pub fn normalize(p: &Laurent) -> Laurent {
    let Some(lo) = p.min_exp() else {
        return p.clone();
    };
    let q = p.shift(-lo);
    match q.max_exp().map(|e| q.coeff(e)) {
        Some(c) if c < 0 => -&q,
        _ => q,
    }
}
