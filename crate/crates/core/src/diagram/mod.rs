//! Oriented planar link diagrams in PD notation.
//!
//! A crossing is stored as four arc indices listed counterclockwise,
//! starting from the incoming under-strand. The under-strand runs from
//! position 0 to position 2; the over-strand joins positions 1 and 3 and
//! its direction is recorded by the crossing sign (`+1` when it runs from
//! position 3 to position 1).
//!
//! Arc indices are dense and zero based internally. The text format uses
//! positive labels; [`PlanarDiagram::to_pd_string`] prints `index + 1`.

mod build;
mod canonical;
mod moves;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::Fingerprint;
pub use moves::Resolution;

pub(crate) use build::RawDiagram;

/// `(crossing, position)` pair addressing one leg of a crossing.
pub type Slot = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD record `{0}`")]
    MalformedRecord(String),
    #[error("arc label {label} occurs {count} times (expected 2)")]
    BadArcMultiplicity { label: u64, count: usize },
    #[error("PD code does not describe a planar diagram ({faces} faces, expected {expected})")]
    NonPlanarCode { faces: usize, expected: usize },
    #[error("under-strands of one component disagree on its orientation (arc {0})")]
    InconsistentOrientation(u64),
    #[error("crossing index {index} out of range (diagram has {count} crossings)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("arc {arc} out of range (diagram has {count} arcs)")]
    ArcOutOfRange { arc: usize, count: usize },
}

/// A region of the diagram complement, given by its corners.
///
/// Corner `(c, i)` is the quadrant at crossing `c` between legs `i` and
/// `i + 1` (counterclockwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub corners: Vec<Slot>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarDiagram {
    crossings: Vec<[usize; 4]>,
    signs: Vec<i8>,
    n_arcs: usize,
    free_loops: usize,
    marked_arc: Option<usize>,
    name: Option<String>,
}

impl Default for PlanarDiagram {
    fn default() -> Self {
        Self::unknot()
    }
}

impl PlanarDiagram {
    /// The crossingless one-component diagram.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `n` disjoint crossingless circles.
    pub fn unlink(n: usize) -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            signs: Vec::new(),
            n_arcs: 0,
            free_loops: n,
            marked_arc: None,
            name: None,
        }
    }

    /// Parses a PD code such as `"X 1,5,2,4; X 3,1,4,6; X 5,3,6,2"`.
    ///
    /// Records are separated by `;` or newlines; the leading `X` is
    /// optional, and a Mathematica-style `X[1,4,2,3]` is accepted too. The
    /// empty string is the unknot.
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let mut tuples = Vec::new();
        for record in text.split([';', '\n']) {
            let record = record.trim();
            if record.is_empty() {
                continue;
            }
            let body = record
                .strip_prefix('X')
                .unwrap_or(record)
                .trim()
                .trim_start_matches('[')
                .trim_end_matches(']');
            let labels: Result<Vec<u64>, _> =
                body.split(',').map(|s| s.trim().parse::<u64>()).collect();
            match labels {
                Ok(v) if v.len() == 4 && v.iter().all(|&l| l > 0) => {
                    tuples.push([v[0], v[1], v[2], v[3]])
                }
                _ => return Err(DiagramError::MalformedRecord(record.to_string())),
            }
        }
        Self::from_pd(&tuples)
    }

    /// Builds a diagram from PD tuples with arbitrary positive labels.
    pub fn from_pd(tuples: &[[u64; 4]]) -> Result<Self, DiagramError> {
        if tuples.is_empty() {
            return Ok(Self::unknot());
        }
        let legs: Vec<[usize; 4]> = tuples.iter().map(|t| t.map(|l| l as usize)).collect();
        let raw = RawDiagram {
            legs,
            hints: None,
            free_loops: 0,
            marked: None,
            name: None,
        };
        raw.finish(&[])
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, crossing: usize) -> i8 {
        self.signs[crossing]
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    /// Crossingless circles carried alongside the crossings.
    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn marked_arc(&self) -> Option<usize> {
        self.marked_arc
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_marked_arc(mut self, arc: usize) -> Result<Self, DiagramError> {
        if arc >= self.n_arcs {
            return Err(DiagramError::ArcOutOfRange {
                arc,
                count: self.n_arcs,
            });
        }
        self.marked_arc = Some(arc);
        Ok(self)
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// Whether the arc at `slot` points into the crossing.
    pub fn is_incoming(&self, slot: Slot) -> bool {
        let (c, p) = slot;
        match p {
            0 => true,
            2 => false,
            1 => self.signs[c] < 0,
            _ => self.signs[c] > 0,
        }
    }

    /// The two slots where `arc` ends, as `(tail, head)`.
    pub fn arc_endpoints(&self, arc: usize) -> (Slot, Slot) {
        let [s, t] = self.occurrences()[arc];
        if self.is_incoming(s) {
            (t, s)
        } else {
            (s, t)
        }
    }

    /// Both slots of every arc.
    pub fn occurrences(&self) -> Vec<[Slot; 2]> {
        let mut occ = vec![[(usize::MAX, 0); 2]; self.n_arcs];
        let mut seen = vec![0usize; self.n_arcs];
        for (c, legs) in self.crossings.iter().enumerate() {
            for (p, &a) in legs.iter().enumerate() {
                occ[a][seen[a]] = (c, p);
                seen[a] += 1;
            }
        }
        occ
    }

    /// Arc cycles in traversal order, one per component that meets a crossing.
    pub fn arc_cycles(&self) -> Vec<Vec<usize>> {
        let occ = self.occurrences();
        let mut seen = vec![false; self.n_arcs];
        let mut cycles = Vec::new();
        for start in 0..self.n_arcs {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut arc = start;
            loop {
                seen[arc] = true;
                cycle.push(arc);
                let (_, head) = self.tail_head(&occ, arc);
                let next = self.crossings[head.0][(head.1 + 2) % 4];
                if next == start {
                    break;
                }
                arc = next;
            }
            cycles.push(cycle);
        }
        cycles
    }

    fn tail_head(&self, occ: &[[Slot; 2]], arc: usize) -> (Slot, Slot) {
        let [s, t] = occ[arc];
        if self.is_incoming(s) {
            (t, s)
        } else {
            (s, t)
        }
    }

    /// Number of link components.
    pub fn components(&self) -> usize {
        self.arc_cycles().len() + self.free_loops
    }

    /// Component index of each arc (free loops are not included).
    pub fn arc_components(&self) -> Vec<usize> {
        let mut comp = vec![0; self.n_arcs];
        for (i, cycle) in self.arc_cycles().iter().enumerate() {
            for &a in cycle {
                comp[a] = i;
            }
        }
        comp
    }

    /// Regions of the complement of each connected piece of the projection.
    ///
    /// Free loops are not included.
    pub fn faces(&self) -> Vec<Face> {
        faces_of(&self.crossings, self.n_arcs)
    }

    /// Number of connected pieces of the projection, counting free loops.
    pub fn pieces(&self) -> usize {
        crossing_pieces(&self.crossings, self.n_arcs) + self.free_loops
    }

    /// Connected projection: a single piece.
    pub fn is_connected(&self) -> bool {
        self.pieces() == 1
    }

    /// The face taken as the unbounded region: the one with the most
    /// corners, ties broken by the smallest corner.
    pub fn unbounded_face(&self, faces: &[Face]) -> Option<usize> {
        faces
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                a.len().cmp(&b.len()).then_with(|| {
                    faces[*j]
                        .corners
                        .iter()
                        .min()
                        .cmp(&faces[*i].corners.iter().min())
                })
            })
            .map(|(i, _)| i)
    }

    /// PD code with 1-based labels.
    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|t| format!("X {},{},{},{}", t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Crossing counts per sign, keyed by sign.
    pub fn sign_census(&self) -> BTreeMap<i8, usize> {
        let mut m = BTreeMap::new();
        for &s in &self.signs {
            *m.entry(s).or_insert(0) += 1;
        }
        m
    }

    pub(crate) fn from_parts(
        crossings: Vec<[usize; 4]>,
        signs: Vec<i8>,
        n_arcs: usize,
        free_loops: usize,
        marked_arc: Option<usize>,
        name: Option<String>,
    ) -> Self {
        PlanarDiagram {
            crossings,
            signs,
            n_arcs,
            free_loops,
            marked_arc,
            name,
        }
    }

    /// Incoming flags per slot, used to seed rebuilds.
    pub(crate) fn incoming_table(&self) -> Vec<[bool; 4]> {
        (0..self.crossings.len())
            .map(|c| [0, 1, 2, 3].map(|p| self.is_incoming((c, p))))
            .collect()
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            return write!(f, "<{} free loop(s)>", self.free_loops);
        }
        f.write_str(&self.to_pd_string())?;
        if self.free_loops > 0 {
            write!(f, " + {} free loop(s)", self.free_loops)?;
        }
        Ok(())
    }
}

pub(crate) fn faces_of(crossings: &[[usize; 4]], n_arcs: usize) -> Vec<Face> {
    let mut occ = vec![Vec::with_capacity(2); n_arcs];
    for (c, legs) in crossings.iter().enumerate() {
        for (p, &a) in legs.iter().enumerate() {
            occ[a].push((c, p));
        }
    }
    let mut seen = vec![[false; 4]; crossings.len()];
    let mut faces = Vec::new();
    for c in 0..crossings.len() {
        for i in 0..4 {
            if seen[c][i] {
                continue;
            }
            let mut corners = Vec::new();
            let (mut cc, mut ii) = (c, i);
            while !seen[cc][ii] {
                seen[cc][ii] = true;
                corners.push((cc, ii));
                let leg = (ii + 1) % 4;
                let arc = crossings[cc][leg];
                let [s, t] = [occ[arc][0], occ[arc][1]];
                let other = if s == (cc, leg) { t } else { s };
                cc = other.0;
                ii = other.1;
            }
            faces.push(Face { corners });
        }
    }
    faces
}

pub(crate) fn crossing_pieces(crossings: &[[usize; 4]], n_arcs: usize) -> usize {
    if crossings.is_empty() {
        return 0;
    }
    let mut uf = crate::util::UnionFind::new(crossings.len());
    let mut first = vec![usize::MAX; n_arcs];
    for (c, legs) in crossings.iter().enumerate() {
        for &a in legs {
            if first[a] == usize::MAX {
                first[a] = c;
            } else {
                uf.union(first[a], c);
            }
        }
    }
    uf.count()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "X 1,5,2,4; X 3,1,4,6; X 5,3,6,2";
    pub(crate) const HOPF: &str = "X 1,3,2,4; X 3,1,4,2";

    #[test]
    fn empty_code_is_unknot() {
        let d = PlanarDiagram::parse_pd("").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.components(), 1);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn trefoil_traces_to_one_component() {
        let d = PlanarDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.components(), 1);
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.faces().len(), 5);
    }

    #[test]
    fn hopf_traces_to_two_components() {
        let d = PlanarDiagram::parse_pd(HOPF).unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.components(), 2);
        assert_eq!(d.faces().len(), 4);
    }

    #[test]
    fn mathematica_style_records() {
        let d = PlanarDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        assert_eq!(d, PlanarDiagram::parse_pd(TREFOIL).unwrap());
    }

    #[test]
    fn malformed_records_are_rejected() {
        assert!(matches!(
            PlanarDiagram::parse_pd("X 1,2,3"),
            Err(DiagramError::MalformedRecord(_))
        ));
        assert!(matches!(
            PlanarDiagram::parse_pd("X 1,a,2,3"),
            Err(DiagramError::MalformedRecord(_))
        ));
        assert!(matches!(
            PlanarDiagram::parse_pd("X 0,1,1,0"),
            Err(DiagramError::MalformedRecord(_))
        ));
    }

    #[test]
    fn arc_multiplicity_is_checked() {
        assert!(matches!(
            PlanarDiagram::parse_pd("X 1,5,2,4; X 3,1,4,6; X 5,3,6,7"),
            Err(DiagramError::BadArcMultiplicity { .. })
        ));
    }

    #[test]
    fn nonplanar_codes_are_rejected() {
        assert!(matches!(
            PlanarDiagram::parse_pd("X 1,2,1,2"),
            Err(DiagramError::NonPlanarCode { .. })
        ));
        // trefoil with one crossing listed clockwise
        assert!(matches!(
            PlanarDiagram::parse_pd("X 1,4,2,5; X 3,1,4,6; X 5,3,6,2"),
            Err(DiagramError::NonPlanarCode { .. })
        ));
        // a toroidal three-crossing code
        assert!(matches!(
            PlanarDiagram::parse_pd("X 1,4,2,3; X 3,6,4,5; X 5,2,6,1"),
            Err(DiagramError::NonPlanarCode { .. })
        ));
    }

    #[test]
    fn relabeling_keeps_structure() {
        let a = PlanarDiagram::parse_pd(TREFOIL).unwrap();
        let b = PlanarDiagram::parse_pd("X 10,50,20,40; X 30,10,40,60; X 50,30,60,20").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn arc_endpoints_follow_orientation() {
        let d = PlanarDiagram::parse_pd(TREFOIL).unwrap();
        for arc in 0..d.n_arcs() {
            let (tail, head) = d.arc_endpoints(arc);
            assert!(!d.is_incoming(tail));
            assert!(d.is_incoming(head));
        }
    }
}
