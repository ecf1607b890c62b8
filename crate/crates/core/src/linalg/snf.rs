use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("integer overflow during Smith normal form reduction")]
    Overflow,
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix.
///
/// The length of the result is the rank; factors greater than one are
/// the torsion of the cokernel.
pub fn smith_invariants(m: &[Vec<i64>]) -> Result<Vec<i64>, SnfError> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    sub_row(&mut a, i, t, q)?;
                    dirty |= a[i][t] != 0;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut() {
                        let v = row[t].checked_mul(q).ok_or(SnfError::Overflow)?;
                        row[j] = row[j].checked_sub(v).ok_or(SnfError::Overflow)?;
                    }
                    dirty |= a[t][j] != 0;
                }
            }
            if dirty {
                let (pi, pj) = min_entry_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let p = a[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(SnfError::Overflow)?;
                    }
                }
                None => break,
            }
        }
        let d = a[t][t].abs();
        out.push(i64::try_from(d).map_err(|_| SnfError::Overflow)?);
    }
    Ok(out)
}

fn sub_row(a: &mut [Vec<i128>], i: usize, t: usize, q: i128) -> Result<(), SnfError> {
    let (top, bottom) = a.split_at_mut(i);
    let src = &top[t];
    for (x, &y) in bottom[0].iter_mut().zip(src) {
        let v = y.checked_mul(q).ok_or(SnfError::Overflow)?;
        *x = x.checked_sub(v).ok_or(SnfError::Overflow)?;
    }
    Ok(())
}

fn min_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|b| x.abs() < b.0) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smallest nonzero entry in row `t` or column `t`.
fn min_entry_cross(a: &[Vec<i128>], t: usize) -> (usize, usize) {
    let mut best = (a[t][t].abs(), t, t);
    for (i, row) in a.iter().enumerate().skip(t) {
        let x = row[t];
        if x != 0 && (best.0 == 0 || x.abs() < best.0) {
            best = (x.abs(), i, t);
        }
    }
    for (j, &x) in a[t].iter().enumerate().skip(t) {
        if x != 0 && (best.0 == 0 || x.abs() < best.0) {
            best = (x.abs(), t, j);
        }
    }
    (best.1, best.2)
}
