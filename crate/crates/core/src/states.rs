//! Kauffman states of a diagram with a marked edge and their δ-gradings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, PlanarDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("diagram projection is disconnected")]
    DisconnectedDiagram,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KauffmanState {
    /// Chosen corner (quadrant index 0..4) at each crossing.
    pub corners: Vec<usize>,
    /// Face occupied at each crossing.
    pub regions: Vec<usize>,
    pub delta2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSummary {
    pub marked_edge: usize,
    pub states: usize,
    pub single_delta: bool,
    pub delta2: Option<i64>,
}

/// Contribution `2δ(x, c)` of choosing corner `i` at crossing `c`: the
/// crossing sign when the corner lies between two incoming or two
/// outgoing legs, otherwise zero.
pub fn corner_delta2(d: &PlanarDiagram, c: usize, i: usize) -> i64 {
    let a = d.is_incoming((c, i));
    let b = d.is_incoming((c, (i + 1) % 4));
    if a == b {
        d.sign(c) as i64
    } else {
        0
    }
}

/// Default marked edge: the smallest arc on the unbounded face.
pub fn default_marked_edge(d: &PlanarDiagram) -> Option<usize> {
    let faces = d.faces();
    let u = d.unbounded_face(&faces)?;
    faces[u]
        .corners
        .iter()
        .map(|&(c, i)| d.crossings()[c][i])
        .min()
}

/// All Kauffman states avoiding the two regions `A_0`, `A_1` on either side
/// of `marked_edge`; `A_0` is the unbounded face when the edge touches it.
pub fn enumerate_states(
    d: &PlanarDiagram,
    marked_edge: Option<usize>,
) -> Result<Vec<KauffmanState>, StateError> {
    if !d.is_connected() {
        return Err(StateError::DisconnectedDiagram);
    }
    let n = d.crossing_count();
    if n == 0 {
        return Ok(vec![KauffmanState {
            corners: vec![],
            regions: vec![],
            delta2: 0,
        }]);
    }
    let edge = match marked_edge {
        Some(e) if e >= d.n_arcs() => {
            return Err(DiagramError::ArcOutOfRange {
                arc: e,
                count: d.n_arcs(),
            }
            .into())
        }
        Some(e) => e,
        None => default_marked_edge(d).expect("diagram with crossings has faces"),
    };
    let faces = d.faces();
    let mut face_of = vec![[0usize; 4]; n];
    for (f, face) in faces.iter().enumerate() {
        for &(c, i) in &face.corners {
            face_of[c][i] = f;
        }
    }
    // faces on either side of the edge: corners adjacent to one of its slots
    let (c, p) = d.occurrences()[edge][0];
    let sides = [face_of[c][p], face_of[c][(p + 3) % 4]];
    let u = d.unbounded_face(&faces).expect("faces exist");
    let (a0, a1) = if sides[1] == u {
        (sides[1], sides[0])
    } else {
        (sides[0], sides[1])
    };
    let excluded = |f: usize| f == a0 || f == a1;

    let options: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|c| {
            (0..4)
                .filter(|&i| !excluded(face_of[c][i]))
                .map(|i| (i, face_of[c][i]))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = vec![usize::MAX; n];
    let mut used = vec![false; faces.len()];
    search(&options, &mut chosen, &mut used, &mut out);
    let mut states: Vec<KauffmanState> = out
        .into_iter()
        .map(|corners| {
            let regions = corners
                .iter()
                .enumerate()
                .map(|(c, &i)| face_of[c][i])
                .collect();
            let delta2 = corners
                .iter()
                .enumerate()
                .map(|(c, &i)| corner_delta2(d, c, i))
                .sum();
            KauffmanState {
                corners,
                regions,
                delta2,
            }
        })
        .collect();
    states.sort();
    Ok(states)
}

/// Backtracking over crossings, always branching on the crossing with the
/// fewest remaining options so forced choices are taken first.
fn search(
    options: &[Vec<(usize, usize)>],
    chosen: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let mut best: Option<(usize, usize)> = None;
    for c in 0..options.len() {
        if chosen[c] != usize::MAX {
            continue;
        }
        let k = options[c].iter().filter(|&&(_, f)| !used[f]).count();
        if k == 0 {
            return;
        }
        if best.is_none_or(|(_, b)| k < b) {
            best = Some((c, k));
        }
    }
    let Some((c, _)) = best else {
        out.push(chosen.clone());
        return;
    };
    for &(i, f) in &options[c] {
        if used[f] {
            continue;
        }
        used[f] = true;
        chosen[c] = i;
        search(options, chosen, used, out);
        chosen[c] = usize::MAX;
        used[f] = false;
    }
}

/// Whether all states share one δ-grading, for the given marking.
pub fn state_thinness_predictor(
    d: &PlanarDiagram,
    marked_edge: Option<usize>,
) -> Result<StateSummary, StateError> {
    let edge = marked_edge.or_else(|| default_marked_edge(d)).unwrap_or(0);
    let states = enumerate_states(d, marked_edge)?;
    let first = states.first().map(|s| s.delta2);
    let single = first.is_some() && states.iter().all(|s| Some(s.delta2) == first);
    Ok(StateSummary {
        marked_edge: edge,
        states: states.len(),
        single_delta: single,
        delta2: if single { first } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X 1,5,2,4; X 3,1,4,6; X 5,3,6,2";
    const FIGURE8: &str = "X 4,2,5,1; X 8,6,1,5; X 6,3,7,4; X 2,7,3,8";

    #[test]
    fn trefoil_states() {
        let t = PlanarDiagram::parse_pd(TREFOIL).unwrap();
        let s = enumerate_states(&t, None).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|x| x.delta2 == 2));
        let m = enumerate_states(&t.mirror(), None).unwrap();
        assert!(m.iter().all(|x| x.delta2 == -2));
    }

    #[test]
    fn figure_eight_states() {
        let f = PlanarDiagram::parse_pd(FIGURE8).unwrap();
        let r = state_thinness_predictor(&f, None).unwrap();
        assert_eq!(r.states, 5);
        assert_eq!(r.delta2, Some(0));
    }

    #[test]
    fn states_are_matchings() {
        let f = PlanarDiagram::parse_pd(FIGURE8).unwrap();
        for s in enumerate_states(&f, Some(3)).unwrap() {
            let mut r = s.regions.clone();
            r.sort_unstable();
            r.dedup();
            assert_eq!(r.len(), f.crossing_count());
        }
    }

    #[test]
    fn crossingless_diagram_has_one_state() {
        let k = PlanarDiagram::parse_pd(TREFOIL)
            .unwrap()
            .add_kink(0, true, true)
            .unwrap();
        let u = PlanarDiagram::unknot();
        assert_eq!(enumerate_states(&u, None).unwrap().len(), 1);
        assert!(!enumerate_states(&k, None).unwrap().is_empty());
    }
}
