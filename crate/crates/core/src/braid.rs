//! Diagrams of closed braids.
//!
//! Handy for building large test diagrams with known twist structure, e.g.
//! a full twist of five strands as `(σ1 σ2 σ3 σ4)^5`.

use thiserror::Error;

use crate::diagram::{Dart, Diagram, DiagramError};
use crate::map::{Grid, PlanarMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("generator {generator} is out of range for {strands} strands")]
    BadGenerator { generator: i32, strands: usize },
    #[error("strand position {position} is never crossed; its closure would be a split unknot")]
    Untouched { position: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Standard closure of a braid word on `strands` strands.
///
/// Letter `k > 0` is σ_k (positions k and k+1, counted from 1, cross
/// positively); `-k` is its inverse. All strands run downward. Every
/// position has to be crossed at least once. The empty word on one strand
/// gives the crossingless unknot.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<Diagram, BraidError> {
    if strands == 0 {
        return Err(BraidError::NoStrands);
    }
    if strands == 1 && word.is_empty() {
        return Ok(Diagram::unknot());
    }
    let mut map = PlanarMap::new();
    let mut grid = Grid::new(strands);
    for &g in word {
        let k = g.unsigned_abs() as usize;
        if g == 0 || k >= strands {
            return Err(BraidError::BadGenerator {
                generator: g,
                strands,
            });
        }
        let v = grid.generator(&mut map, k - 1, g > 0);
        for s in [0, 1] {
            map.set_incoming(Dart::new(v, s), true);
        }
        for s in [2, 3] {
            map.set_incoming(Dart::new(v, s), false);
        }
    }
    for p in 0..strands {
        match (grid.top[p], grid.open[p]) {
            (Some(top), Some(bottom)) => map.link(bottom, top),
            _ => return Err(BraidError::Untouched { position: p }),
        }
    }
    Ok(map.export(None)?.diagram)
}

/// The half twist Δ on `strands` strands as a positive word:
/// σ1 (σ2 σ1) (σ3 σ2 σ1) ..., with `strands (strands - 1) / 2` letters.
pub fn half_twist_word(strands: usize) -> Vec<i32> {
    let mut w = Vec::new();
    for k in 1..strands as i32 {
        for g in (1..=k).rev() {
            w.push(g);
        }
    }
    w
}

/// `c` half twists on `strands` strands, shifted so that the lowest
/// position is `offset` (0-based), with every letter of sign `sign`.
pub fn twist_block(strands: usize, c: usize, offset: usize, sign: i32) -> Vec<i32> {
    let base = half_twist_word(strands);
    let mut w = Vec::with_capacity(base.len() * c);
    for _ in 0..c {
        w.extend(base.iter().map(|g| sign.signum() * (g + offset as i32)));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{compute_faces, link_components, Sign};

    #[test]
    fn trefoil_as_closure() {
        let d = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(link_components(&d).component_count, 1);
        assert!(d.signs().iter().all(|&s| s == Sign::Positive));
        let mut deg: Vec<usize> = compute_faces(&d).iter().map(|f| f.degree()).collect();
        deg.sort_unstable();
        assert_eq!(deg, vec![2, 2, 2, 3, 3]);
    }

    #[test]
    fn inverse_letters_are_negative() {
        let d = braid_closure(2, &[-1, -1]).unwrap();
        assert!(d.signs().iter().all(|&s| s == Sign::Negative));
        assert_eq!(link_components(&d).component_count, 2);
    }

    #[test]
    fn full_twist_of_five() {
        let w = twist_block(5, 2, 0, 1);
        assert_eq!(w.len(), 20);
        let d = braid_closure(5, &w).unwrap();
        assert_eq!(d.crossing_count(), 20);
        // pure braid: five components
        assert_eq!(link_components(&d).component_count, 5);
    }

    #[test]
    fn half_twist_lengths() {
        for m in 1..8 {
            assert_eq!(half_twist_word(m).len(), m * (m - 1) / 2);
        }
    }

    #[test]
    fn untouched_position_is_rejected() {
        assert_eq!(
            braid_closure(3, &[1, 1]),
            Err(BraidError::Untouched { position: 2 })
        );
        assert!(matches!(
            braid_closure(2, &[2]),
            Err(BraidError::BadGenerator { .. })
        ));
    }
}
