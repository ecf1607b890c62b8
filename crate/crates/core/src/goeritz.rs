//! Checkerboard colorings, Goeritz forms and the Gordon–Litherland signature.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, Face, PlanarDiagram, Slot};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoeritzError {
    #[error("diagram projection is disconnected")]
    DisconnectedDiagram,
    #[error("crossing {0} touches the same white region twice")]
    NugatoryCrossing(usize),
    #[error("crossing {0} is not positive")]
    NotPositiveCrossing(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingType {
    I,
    II,
}

/// Which color class is white.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhiteChoice {
    /// The class of the unbounded face.
    Unbounded,
    /// The class containing this corner.
    Corner(Slot),
}

#[derive(Clone, Debug)]
pub struct CheckerboardColoring {
    pub faces: Vec<Face>,
    pub color: Vec<Color>,
    /// Face indices of the white regions; the first one is `R_0`.
    pub white_regions: Vec<usize>,
    /// Per crossing, the positions in `white_regions` of its two white corners.
    pub white_at: Vec<(usize, usize)>,
    pub incidence: Vec<i8>,
    pub ctype: Vec<CrossingType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoeritzData {
    pub matrix: Vec<Vec<i64>>,
    pub mu_d: i64,
    pub white_count: usize,
}

impl CheckerboardColoring {
    /// Coloring with the unbounded face white; rejects nugatory crossings.
    pub fn new(d: &PlanarDiagram) -> Result<Self, GoeritzError> {
        let c = Self::with_white(d, WhiteChoice::Unbounded)?;
        if let Some(k) = c.white_at.iter().position(|&(a, b)| a == b) {
            return Err(GoeritzError::NugatoryCrossing(k));
        }
        Ok(c)
    }

    /// Coloring with a chosen white class. Crossings touching one white
    /// region twice are allowed; they only enter `μ(D)`.
    pub fn with_white(d: &PlanarDiagram, white: WhiteChoice) -> Result<Self, GoeritzError> {
        if !d.is_connected() {
            return Err(GoeritzError::DisconnectedDiagram);
        }
        if d.crossing_count() == 0 {
            return Ok(CheckerboardColoring {
                faces: vec![Face { corners: vec![] }, Face { corners: vec![] }],
                color: vec![Color::White, Color::Black],
                white_regions: vec![0],
                white_at: vec![],
                incidence: vec![],
                ctype: vec![],
            });
        }
        let faces = d.faces();
        let mut face_of = vec![[0usize; 4]; d.crossing_count()];
        for (f, face) in faces.iter().enumerate() {
            for &(c, i) in &face.corners {
                face_of[c][i] = f;
            }
        }
        // corners i and i+2 of a crossing share a color, so parity of the
        // corner index is a 2-coloring once fixed at one corner per piece
        let mut parity: Vec<Option<bool>> = vec![None; faces.len()];
        let start = match white {
            WhiteChoice::Unbounded => {
                let u = d.unbounded_face(&faces).expect("diagram has faces");
                faces[u].corners[0]
            }
            WhiteChoice::Corner(s) => s,
        };
        let mut stack = vec![(face_of[start.0][start.1], true)];
        while let Some((f, is_white)) = stack.pop() {
            match parity[f] {
                Some(p) if p != is_white => unreachable!("planar diagrams are 2-colorable"),
                Some(_) => continue,
                None => parity[f] = Some(is_white),
            }
            for &(c, i) in &faces[f].corners {
                stack.push((face_of[c][(i + 1) % 4], !is_white));
            }
        }
        let color: Vec<Color> = parity
            .iter()
            .map(|p| {
                if p.expect("connected") {
                    Color::White
                } else {
                    Color::Black
                }
            })
            .collect();
        let r0 = face_of[start.0][start.1];
        let mut white_regions = vec![r0];
        white_regions.extend((0..faces.len()).filter(|&f| f != r0 && color[f] == Color::White));
        let mut region = vec![usize::MAX; faces.len()];
        for (k, &f) in white_regions.iter().enumerate() {
            region[f] = k;
        }

        let mut white_at = Vec::new();
        let mut incidence = Vec::new();
        let mut ctype = Vec::new();
        for c in 0..d.crossing_count() {
            let even_white = color[face_of[c][0]] == Color::White;
            let w = if even_white { [0, 2] } else { [1, 3] };
            white_at.push((region[face_of[c][w[0]]], region[face_of[c][w[1]]]));
            // the oriented smoothing merges corners 1,3 at a positive crossing
            let merged_odd = d.sign(c) > 0;
            let t = if merged_odd != even_white {
                CrossingType::I
            } else {
                CrossingType::II
            };
            let s = d.sign(c);
            incidence.push(match t {
                CrossingType::I => -s,
                CrossingType::II => s,
            });
            ctype.push(t);
        }
        Ok(CheckerboardColoring {
            faces,
            color,
            white_regions,
            white_at,
            incidence,
            ctype,
        })
    }

    /// The `(n+1) x (n+1)` form over all white regions; rows sum to zero.
    pub fn full_form(&self) -> Vec<Vec<i64>> {
        let m = self.white_regions.len();
        let mut g = vec![vec![0i64; m]; m];
        for (&(a, b), &mu) in self.white_at.iter().zip(&self.incidence) {
            if a != b {
                g[a][b] -= mu as i64;
                g[b][a] -= mu as i64;
            }
        }
        for i in 0..m {
            g[i][i] = -(0..m).filter(|&j| j != i).map(|j| g[i][j]).sum::<i64>();
        }
        g
    }

    pub fn goeritz(&self) -> GoeritzData {
        let full = self.full_form();
        let matrix = full.iter().skip(1).map(|r| r[1..].to_vec()).collect();
        let mu_d = self
            .ctype
            .iter()
            .zip(&self.incidence)
            .filter(|(t, _)| **t == CrossingType::II)
            .map(|(_, &m)| m as i64)
            .sum();
        GoeritzData {
            matrix,
            mu_d,
            white_count: self.white_regions.len(),
        }
    }
}

impl GoeritzData {
    pub fn signature(&self) -> i64 {
        linalg::signature(&self.matrix) - self.mu_d
    }

    pub fn determinant(&self) -> u64 {
        linalg::determinant(&self.matrix)
            .abs()
            .to_u64()
            .expect("determinant fits in u64")
    }
}

/// Gordon–Litherland signature.
pub fn signature(d: &PlanarDiagram) -> Result<i64, GoeritzError> {
    Ok(CheckerboardColoring::with_white(d, WhiteChoice::Unbounded)?
        .goeritz()
        .signature())
}

/// Link determinant `|det G|`; split projections give 0.
pub fn determinant(d: &PlanarDiagram) -> Result<u64, GoeritzError> {
    match CheckerboardColoring::with_white(d, WhiteChoice::Unbounded) {
        Ok(c) => Ok(c.goeritz().determinant()),
        Err(GoeritzError::DisconnectedDiagram) => Ok(0),
        Err(e) => Err(e),
    }
}

/// Negative crossings of the unoriented resolution at `crossing` minus
/// those of `d`.
pub fn e_invariant(d: &PlanarDiagram, crossing: usize) -> Result<i64, GoeritzError> {
    if crossing >= d.crossing_count() {
        return Err(DiagramError::IndexOutOfRange {
            index: crossing,
            count: d.crossing_count(),
        }
        .into());
    }
    if d.sign(crossing) < 0 {
        return Err(GoeritzError::NotPositiveCrossing(crossing));
    }
    let h = d.resolve(crossing, d.unoriented_resolution(crossing))?;
    Ok(h.negative_count() as i64 - d.negative_count() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureLemmaReport {
    pub crossing: usize,
    /// The diagram was mirrored to make the crossing positive.
    pub mirrored: bool,
    pub det_plus: u64,
    pub det_v: u64,
    pub det_h: u64,
    pub hypothesis_holds: bool,
    pub sigma_plus: Option<i64>,
    pub sigma_v: Option<i64>,
    pub sigma_h: Option<i64>,
    pub e: i64,
    pub lemma_v_ok: Option<bool>,
    pub lemma_h_ok: Option<bool>,
    /// signature(G_+) = signature(G_h) = signature(G_v) - 1 with colorings
    /// that agree away from the crossing and make it type I in `D_+`.
    pub forms_ok: Option<bool>,
}

impl SignatureLemmaReport {
    pub fn passed(&self) -> bool {
        !self.hypothesis_holds
            || (self.lemma_v_ok == Some(true)
                && self.lemma_h_ok == Some(true)
                && self.forms_ok != Some(false))
    }
}

/// Evaluates the determinant hypothesis and both signature identities at
/// `crossing`. Negative crossings are handled on the mirror image.
pub fn check_signature_lemma(
    d: &PlanarDiagram,
    crossing: usize,
) -> Result<SignatureLemmaReport, GoeritzError> {
    if crossing >= d.crossing_count() {
        return Err(DiagramError::IndexOutOfRange {
            index: crossing,
            count: d.crossing_count(),
        }
        .into());
    }
    let mirrored = d.sign(crossing) < 0;
    let plus = if mirrored { d.mirror() } else { d.clone() };
    let v = plus.resolve(crossing, plus.oriented_resolution(crossing))?;
    let h = plus.resolve(crossing, plus.unoriented_resolution(crossing))?;
    let (det_plus, det_v, det_h) = (determinant(&plus)?, determinant(&v)?, determinant(&h)?);
    let hypothesis_holds = det_v > 0 && det_h > 0 && det_plus == det_v + det_h;
    let e = e_invariant(&plus, crossing)?;
    let sig = |x: &PlanarDiagram| signature(x).ok();
    let (sigma_plus, sigma_v, sigma_h) = (sig(&plus), sig(&v), sig(&h));
    let (mut lemma_v_ok, mut lemma_h_ok, mut forms_ok) = (None, None, None);
    if hypothesis_holds {
        lemma_v_ok = Some(matches!((sigma_v, sigma_plus), (Some(a), Some(b)) if a - b == 1));
        lemma_h_ok = Some(matches!((sigma_h, sigma_plus), (Some(a), Some(b)) if a - b == e));
        forms_ok = matched_forms(&plus, &v, &h, crossing);
    }
    Ok(SignatureLemmaReport {
        crossing,
        mirrored,
        det_plus,
        det_v,
        det_h,
        hypothesis_holds,
        sigma_plus,
        sigma_v,
        sigma_h,
        e,
        lemma_v_ok,
        lemma_h_ok,
        forms_ok,
    })
}

fn matched_forms(
    plus: &PlanarDiagram,
    v: &PlanarDiagram,
    h: &PlanarDiagram,
    c0: usize,
) -> Option<bool> {
    // white = corners merged by the oriented smoothing at c0 (corners 1, 3)
    let g_plus = CheckerboardColoring::with_white(plus, WhiteChoice::Corner((c0, 1))).ok()?;
    let reference = (0..plus.crossing_count()).find(|&c| c != c0);
    let pick = |x: &PlanarDiagram| -> Option<i64> {
        let choice = match reference {
            Some(c) => {
                let white_even = g_plus.color[face_index(&g_plus, (c, 0))?] == Color::White;
                let c = if c > c0 { c - 1 } else { c };
                WhiteChoice::Corner((c, usize::from(!white_even)))
            }
            None => WhiteChoice::Unbounded,
        };
        let col = CheckerboardColoring::with_white(x, choice).ok()?;
        Some(linalg::signature(&col.goeritz().matrix))
    };
    let s_plus = linalg::signature(&g_plus.goeritz().matrix);
    let (s_v, s_h) = (pick(v)?, pick(h)?);
    Some(s_plus == s_h && s_plus == s_v - 1)
}

fn face_index(col: &CheckerboardColoring, corner: Slot) -> Option<usize> {
    col.faces.iter().position(|f| f.corners.contains(&corner))
}
