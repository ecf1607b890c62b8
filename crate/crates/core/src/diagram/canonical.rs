//! Relabeling-invariant fingerprints.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DiagramError, PlanarDiagram};

/// Canonical text form of a diagram.
///
/// For connected diagrams this is the lexicographically least PD code over
/// all traversal relabelings, so two diagrams that differ only by arc and
/// crossing numbering share a fingerprint. Other diagrams get their plain
/// PD code. The free-loop count is appended when nonzero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint(String);

impl Fingerprint {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Rebuilds a diagram carrying this fingerprint.
    pub fn to_diagram(&self) -> Result<PlanarDiagram, DiagramError> {
        let (code, loops) = match self.0.split_once(" | loops=") {
            Some((c, l)) => (
                c,
                l.parse::<usize>()
                    .map_err(|_| DiagramError::MalformedRecord(self.0.clone()))?,
            ),
            None => (self.0.as_str(), 0),
        };
        if code.is_empty() {
            return Ok(PlanarDiagram::unlink(loops));
        }
        let mut d = PlanarDiagram::parse_pd(code)?;
        d.free_loops = loops;
        Ok(d)
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl PlanarDiagram {
    pub fn fingerprint(&self) -> Fingerprint {
        let code = if self.crossings.is_empty() {
            Vec::new()
        } else if super::crossing_pieces(&self.crossings, self.n_arcs) == 1 {
            (0..self.n_arcs)
                .map(|a| self.relabel_from(a))
                .min()
                .expect("nonempty diagram has arcs")
        } else {
            self.crossings.clone()
        };
        let mut s = code
            .iter()
            .map(|t| format!("X {},{},{},{}", t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1))
            .collect::<Vec<_>>()
            .join("; ");
        if self.crossings.is_empty() || self.free_loops > 0 {
            s.push_str(&format!(" | loops={}", self.free_loops));
        }
        Fingerprint(s)
    }

    /// Sorted crossing tuples after numbering arcs in traversal order from `start`.
    fn relabel_from(&self, start: usize) -> Vec<[usize; 4]> {
        let occ = self.occurrences();
        let mut label = vec![usize::MAX; self.n_arcs];
        let mut next = 0;
        let mut visited = vec![false; self.crossings.len()];
        let mut order: Vec<usize> = Vec::new();
        let mut walk = |from: usize, label: &mut Vec<usize>, order: &mut Vec<usize>| {
            let mut a = from;
            while label[a] == usize::MAX {
                label[a] = next;
                next += 1;
                let (_, head) = self.tail_head(&occ, a);
                if !visited[head.0] {
                    visited[head.0] = true;
                    order.push(head.0);
                }
                a = self.crossings[head.0][(head.1 + 2) % 4];
            }
        };
        walk(start, &mut label, &mut order);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            if let Some(&a) = self.crossings[c].iter().find(|&&a| label[a] == usize::MAX) {
                walk(a, &mut label, &mut order);
            } else {
                i += 1;
            }
        }
        let mut code: Vec<[usize; 4]> =
            self.crossings.iter().map(|t| t.map(|a| label[a])).collect();
        code.sort_unstable();
        code
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_ignores_numbering() {
        let a = PlanarDiagram::parse_pd("X 1,5,2,4; X 3,1,4,6; X 5,3,6,2").unwrap();
        let b = PlanarDiagram::parse_pd("X 3,1,4,6; X 5,3,6,2; X 1,5,2,4").unwrap();
        let c = PlanarDiagram::parse_pd("X 5,3,6,2; X 1,5,2,4; X 3,1,4,6").unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), c.fingerprint());
        assert_ne!(a.fingerprint(), a.mirror().fingerprint());
    }

    #[test]
    fn fingerprint_round_trips() {
        let a = PlanarDiagram::parse_pd("X 4,2,5,1; X 8,6,1,5; X 6,3,7,4; X 2,7,3,8").unwrap();
        let f = a.fingerprint();
        assert_eq!(f.to_diagram().unwrap().fingerprint(), f);
        let u = PlanarDiagram::unlink(2).fingerprint();
        assert_eq!(u.to_diagram().unwrap(), PlanarDiagram::unlink(2));
    }
}
