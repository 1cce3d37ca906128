//! Finite Kochen-Specker satisfiability: can the directions of a triple
//! system be labeled with squared-spin values {0, 1} so that every listed
//! orthogonal triple carries exactly one 0 and two 1s?

use super::Direction;
use crate::error::{Error, Result};

/// Directions are identified up to sign and deduplicated within this
/// Euclidean tolerance; triple orthogonality is validated against it too.
pub const DIRECTION_TOLERANCE: f64 = 1e-6;

/// A set of rays together with the orthogonal triples that constrain them.
///
/// Directions are canonicalized (first nonzero coordinate positive, since a
/// value assignment lives on rays rather than vectors) and deduplicated;
/// triple indices always refer to the deduplicated list.
#[derive(Debug, Clone)]
pub struct TriplesSet {
    directions: Vec<Direction>,
    triples: Vec<[usize; 3]>,
}

fn canonical(direction: &Direction) -> Direction {
    let v = direction.components();
    for x in v {
        if x.abs() > DIRECTION_TOLERANCE {
            if x < 0.0 {
                return Direction::new([-v[0], -v[1], -v[2]]).expect("sign flip keeps unit norm");
            }
            break;
        }
    }
    *direction
}

fn distance(a: &Direction, b: &Direction) -> f64 {
    let va = a.components();
    let vb = b.components();
    va.iter()
        .zip(&vb)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl TriplesSet {
    /// Canonicalize and deduplicate the directions, remap the triple
    /// indices, and validate that every triple is mutually orthogonal.
    pub fn new(directions: Vec<Direction>, triples: Vec<[usize; 3]>) -> Result<Self> {
        let mut canonical_dirs: Vec<Direction> = Vec::new();
        let mut remap = Vec::with_capacity(directions.len());
        for dir in &directions {
            let canon = canonical(dir);
            let found = canonical_dirs
                .iter()
                .position(|existing| distance(existing, &canon) < DIRECTION_TOLERANCE);
            match found {
                Some(index) => remap.push(index),
                None => {
                    canonical_dirs.push(canon);
                    remap.push(canonical_dirs.len() - 1);
                }
            }
        }

        let mut remapped_triples = Vec::with_capacity(triples.len());
        for triple in &triples {
            if triple.iter().any(|&i| i >= directions.len()) {
                return Err(Error::InvalidSubsystem(format!(
                    "triple {triple:?} references a missing direction (only {} available)",
                    directions.len()
                )));
            }
            let mapped = [remap[triple[0]], remap[triple[1]], remap[triple[2]]];
            for a in 0..3 {
                for b in (a + 1)..3 {
                    let dot = canonical_dirs[mapped[a]].dot(&canonical_dirs[mapped[b]]);
                    if dot.abs() > DIRECTION_TOLERANCE {
                        return Err(Error::NonOrthogonalTriple {
                            triple: mapped,
                            dot,
                        });
                    }
                }
            }
            remapped_triples.push(mapped);
        }
        remapped_triples.sort_unstable();
        remapped_triples.dedup();
        Ok(Self {
            directions: canonical_dirs,
            triples: remapped_triples,
        })
    }

    /// Build a triple system from frames: each frame contributes its three
    /// axes as one orthogonal triple. Shared axes are merged.
    pub fn from_frames(frames: &[super::Frame]) -> Result<Self> {
        let mut directions = Vec::with_capacity(frames.len() * 3);
        let mut triples = Vec::with_capacity(frames.len());
        for (i, frame) in frames.iter().enumerate() {
            for axis in 0..3 {
                directions.push(frame.axis(axis));
            }
            triples.push([3 * i, 3 * i + 1, 3 * i + 2]);
        }
        Self::new(directions, triples)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }
}

/// Outcome of the satisfiability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KsOutcome {
    /// A witness assignment: `assignment[d]` is the squared-spin value of
    /// direction `d`.
    Satisfiable { assignment: Vec<u8> },
    /// No assignment exists; the node count certifies the exhausted search.
    Unsatisfiable { nodes_explored: u64 },
}

impl KsOutcome {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, KsOutcome::Satisfiable { .. })
    }
}

struct Search<'a> {
    triples: &'a [[usize; 3]],
    /// For each direction, the triples it participates in.
    membership: Vec<Vec<usize>>,
    assignment: Vec<Option<u8>>,
    nodes: u64,
}

impl Search<'_> {
    fn consistent_around(&self, direction: usize) -> bool {
        for &t in &self.membership[direction] {
            let values = self.triples[t].map(|d| self.assignment[d]);
            let zeros = values.iter().filter(|v| **v == Some(0)).count();
            let ones = values.iter().filter(|v| **v == Some(1)).count();
            if zeros > 1 || ones > 2 {
                return false;
            }
            if zeros + ones == 3 && zeros != 1 {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, next: usize) -> bool {
        if next == self.assignment.len() {
            return true;
        }
        for value in [1u8, 0u8] {
            self.assignment[next] = Some(value);
            self.nodes += 1;
            if self.consistent_around(next) && self.assign(next + 1) {
                return true;
            }
        }
        self.assignment[next] = None;
        false
    }
}

/// Decide by exhaustive backtracking whether the triple system admits a
/// {0,1}-labeling of its directions with exactly one 0 per triple.
pub fn ks_satisfiable(set: &TriplesSet) -> KsOutcome {
    let n = set.directions().len();
    let mut membership = vec![Vec::new(); n];
    for (t, triple) in set.triples().iter().enumerate() {
        for &d in triple {
            membership[d].push(t);
        }
    }
    let mut search = Search {
        triples: set.triples(),
        membership,
        assignment: vec![None; n],
        nodes: 0,
    };
    if search.assign(0) {
        let assignment = search
            .assignment
            .iter()
            .map(|v| v.expect("complete assignment"))
            .collect();
        KsOutcome::Satisfiable { assignment }
    } else {
        KsOutcome::Unsatisfiable {
            nodes_explored: search.nodes,
        }
    }
}

/// Check an assignment against every triple of the system.
pub fn assignment_satisfies(set: &TriplesSet, assignment: &[u8]) -> bool {
    assignment.len() == set.directions().len()
        && set.triples().iter().all(|triple| {
            let zeros = triple.iter().filter(|&&d| assignment[d] == 0).count();
            let ones = triple.iter().filter(|&&d| assignment[d] == 1).count();
            zeros == 1 && ones == 2
        })
}
