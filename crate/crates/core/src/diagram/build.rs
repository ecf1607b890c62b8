use std::collections::BTreeMap;

use super::{crossing_pieces, faces_of, DiagramError, PlanarDiagram, Slot};

/// Crossing data before orientation and labels are normalized.
///
/// `legs` use arbitrary labels with the under-strand on positions 0 and 2.
/// Without `hints` (parsing), position 0 is taken as incoming and the
/// over-strands are oriented by tracing. With `hints`, every component is
/// oriented to agree with the hint of its first slot unless a priority
/// seed lies on it, and tuples are rotated so position 0 is incoming.
pub(crate) struct RawDiagram {
    pub legs: Vec<[usize; 4]>,
    pub hints: Option<Vec<[bool; 4]>>,
    pub free_loops: usize,
    pub marked: Option<usize>,
    pub name: Option<String>,
}

impl RawDiagram {
    pub fn finish(self, priority: &[(Slot, bool)]) -> Result<PlanarDiagram, DiagramError> {
        let mut by_label: BTreeMap<usize, Vec<Slot>> = BTreeMap::new();
        for (c, legs) in self.legs.iter().enumerate() {
            for (p, &l) in legs.iter().enumerate() {
                by_label.entry(l).or_default().push((c, p));
            }
        }
        for (&label, slots) in &by_label {
            if slots.len() != 2 {
                return Err(DiagramError::BadArcMultiplicity {
                    label: label as u64,
                    count: slots.len(),
                });
            }
        }
        let labels: Vec<usize> = by_label.keys().copied().collect();
        let index: BTreeMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut crossings: Vec<[usize; 4]> =
            self.legs.iter().map(|t| t.map(|l| index[&l])).collect();
        let occ: Vec<[Slot; 2]> = by_label.values().map(|v| [v[0], v[1]]).collect();
        let n_arcs = labels.len();

        let mut incoming = vec![[false; 4]; crossings.len()];
        let mut seen = vec![false; n_arcs];
        for start in 0..n_arcs {
            if seen[start] {
                continue;
            }
            // passes in the provisional direction: (leave slot, enter slot, arc)
            let mut passes: Vec<(Slot, Slot, usize)> = Vec::new();
            let (mut leave, mut arc) = (occ[start][0], start);
            loop {
                seen[arc] = true;
                let enter = if occ[arc][0] == leave {
                    occ[arc][1]
                } else {
                    occ[arc][0]
                };
                passes.push((leave, enter, arc));
                leave = (enter.0, (enter.1 + 2) % 4);
                arc = crossings[leave.0][leave.1];
                if arc == start && leave == occ[start][0] {
                    break;
                }
                if passes.len() > n_arcs {
                    return Err(DiagramError::NonPlanarCode {
                        faces: 0,
                        expected: crossings.len() + 2,
                    });
                }
            }

            let forward = if let Some(&(slot, want_in)) = priority
                .iter()
                .find(|(s, _)| passes.iter().any(|&(l, e, _)| l == *s || e == *s))
            {
                let is_enter = passes.iter().any(|&(_, e, _)| e == slot);
                is_enter == want_in
            } else if let Some(hints) = &self.hints {
                let (_, e, _) = passes[0];
                hints[e.0][e.1]
            } else {
                let mut verdict: Option<bool> = None;
                for &(l, e, a) in &passes {
                    // position 0 must be entered and position 2 left
                    let votes = [
                        (e.1 == 0).then_some(true),
                        (e.1 == 2).then_some(false),
                        (l.1 == 2).then_some(true),
                        (l.1 == 0).then_some(false),
                    ];
                    for v in votes.into_iter().flatten() {
                        if verdict.is_some_and(|w| w != v) {
                            return Err(DiagramError::InconsistentOrientation(labels[a] as u64));
                        }
                        verdict = Some(v);
                    }
                }
                verdict.unwrap_or_else(|| {
                    // over-only component: follow increasing labels from the smallest arc
                    let arcs: Vec<usize> = passes.iter().map(|p| p.2).collect();
                    let m = arcs.len();
                    let i = (0..m).min_by_key(|&i| arcs[i]).unwrap();
                    arcs[(i + 1) % m] <= arcs[(i + m - 1) % m]
                })
            };

            for &(l, e, _) in &passes {
                incoming[e.0][e.1] = forward;
                incoming[l.0][l.1] = !forward;
            }
        }

        let mut signs = Vec::with_capacity(crossings.len());
        for (c, legs) in crossings.iter_mut().enumerate() {
            if !incoming[c][0] {
                legs.rotate_left(2);
                incoming[c].rotate_left(2);
            }
            debug_assert!(incoming[c][0] && !incoming[c][2]);
            debug_assert!(incoming[c][1] != incoming[c][3]);
            signs.push(if incoming[c][3] { 1 } else { -1 });
        }

        let faces = faces_of(&crossings, n_arcs).len();
        let expected = crossings.len() + 2 * crossing_pieces(&crossings, n_arcs);
        if faces != expected {
            return Err(DiagramError::NonPlanarCode { faces, expected });
        }

        let marked = self.marked.and_then(|l| index.get(&l).copied());
        Ok(PlanarDiagram::from_parts(
            crossings,
            signs,
            n_arcs,
            self.free_loops,
            marked,
            self.name,
        ))
    }
}
