//! Two-cell vertical gridded permutations ("dominoes") whose bottom cell
//! avoids 132, top cell avoids 213 and underlying permutation avoids 1324,
//! and their bijection with primitives through the inverse permutation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::avoiders::generate_avoiders;
use crate::perm::{avoids_132, avoids_1324, avoids_213, Permutation};
use crate::primitive::is_primitive;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominoError {
    #[error("{0} is not a primitive")]
    NotPrimitive(String),
    #[error("invalid domino {domino}: {reason}")]
    Invalid { domino: String, reason: &'static str },
    #[error("cannot parse domino from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Bottom,
    Top,
}

/// Stored as the column tags plus the two reduced cell words; the
/// underlying permutation is always derived.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GriddedDomino {
    columns: Vec<Cell>,
    bottom: Permutation,
    top: Permutation,
}

impl GriddedDomino {
    pub fn new(columns: Vec<Cell>, bottom: Permutation, top: Permutation) -> Result<Self, DominoError> {
        let d = GriddedDomino { columns, bottom, top };
        d.validate()?;
        Ok(d)
    }

    pub fn empty() -> Self {
        GriddedDomino {
            columns: Vec::new(),
            bottom: Permutation::empty(),
            top: Permutation::empty(),
        }
    }

    pub fn columns(&self) -> &[Cell] {
        &self.columns
    }

    pub fn bottom(&self) -> &Permutation {
        &self.bottom
    }

    pub fn top(&self) -> &Permutation {
        &self.top
    }

    pub fn points(&self) -> usize {
        self.columns.len()
    }

    /// Bottom values `1..=b` and top values `b+1..=p` interleaved by column.
    pub fn underlying(&self) -> Vec<u32> {
        let b = self.bottom.len() as u32;
        let (mut bi, mut ti) = (0, 0);
        self.columns
            .iter()
            .map(|cell| match cell {
                Cell::Bottom => {
                    bi += 1;
                    self.bottom.at(bi)
                }
                Cell::Top => {
                    ti += 1;
                    self.top.at(ti) + b
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), DominoError> {
        let invalid = |reason| {
            Err(DominoError::Invalid {
                domino: self.to_string(),
                reason,
            })
        };
        let bottoms = self.columns.iter().filter(|&&c| c == Cell::Bottom).count();
        if bottoms != self.bottom.len() || self.columns.len() - bottoms != self.top.len() {
            return invalid("column tags do not match the cell sizes");
        }
        if !avoids_132(self.bottom.values()) {
            return invalid("bottom cell contains 132");
        }
        if !avoids_213(self.top.values()) {
            return invalid("top cell contains 213");
        }
        if !avoids_1324(&self.underlying()) {
            return invalid("underlying permutation contains 1324");
        }
        Ok(())
    }
}

impl fmt::Display for GriddedDomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: String = self
            .columns
            .iter()
            .map(|c| match c {
                Cell::Bottom => 'b',
                Cell::Top => 't',
            })
            .collect();
        write!(f, "B:{}|T:{}|cols:{cols}", self.bottom, self.top)
    }
}

impl FromStr for GriddedDomino {
    type Err = DominoError;

    /// `"B:<bottom>|T:<top>|cols:<b/t tags>"`, e.g. `"B:1|T:1|cols:bt"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DominoError::Parse(s.to_string());
        let mut parts = s.trim().split('|');
        let mut field = |prefix: &str| {
            parts
                .next()
                .and_then(|p| p.trim().strip_prefix(prefix))
                .ok_or_else(err)
        };
        let bottom: Permutation = field("B:")?.parse().map_err(|_| err())?;
        let top: Permutation = field("T:")?.parse().map_err(|_| err())?;
        let columns = field("cols:")?
            .chars()
            .map(|c| match c {
                'b' => Ok(Cell::Bottom),
                't' => Ok(Cell::Top),
                _ => Err(err()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parts.next().is_some() {
            return Err(err());
        }
        GriddedDomino::new(columns, bottom, top)
    }
}

/// Primitive of size n to domino with n - 2 points, read off the inverse:
/// the inverse starts with `i = pos(1)` and ends with `i + 1`; middle
/// entries below `i` go to the bottom cell and those above `i + 1` to the top.
pub fn to_domino(p: &Permutation) -> Result<GriddedDomino, DominoError> {
    if !is_primitive(p) {
        return Err(DominoError::NotPrimitive(p.compact()));
    }
    let q = p.inverse();
    let n = q.len();
    let i = q.at(1);
    let middle = &q.values()[1..n - 1];
    let mut columns = Vec::with_capacity(n - 2);
    let (mut bottom, mut top) = (Vec::new(), Vec::new());
    for &v in middle {
        if v < i {
            columns.push(Cell::Bottom);
            bottom.push(v);
        } else {
            columns.push(Cell::Top);
            top.push(v - i - 1);
        }
    }
    Ok(GriddedDomino {
        columns,
        bottom: Permutation::from_vec_unchecked(bottom),
        top: Permutation::from_vec_unchecked(top),
    })
}

/// Inverse of [`to_domino`].
pub fn from_domino(d: &GriddedDomino) -> Result<Permutation, DominoError> {
    d.validate()?;
    let b = d.bottom.len() as u32;
    let mut q = Vec::with_capacity(d.points() + 2);
    q.push(b + 1);
    for v in d.underlying() {
        q.push(if v <= b { v } else { v + 2 });
    }
    q.push(b + 2);
    Ok(Permutation::from_vec_unchecked(q).inverse())
}

/// Every valid domino with `points` points, built directly from the cell
/// definitions: each tag vector, each Av(132) bottom and Av(213) top word of
/// the matching sizes, kept when the underlying word avoids 1324. Sorted.
pub fn enumerate_dominoes(points: usize) -> Vec<GriddedDomino> {
    let av132: Vec<Vec<Permutation>> = (0..=points)
        .map(|m| generate_avoiders(m, &Permutation::new(vec![1, 3, 2]).expect("pattern")).collect())
        .collect();
    let av213: Vec<Vec<Permutation>> = (0..=points)
        .map(|m| generate_avoiders(m, &Permutation::new(vec![2, 1, 3]).expect("pattern")).collect())
        .collect();
    let mut out: Vec<GriddedDomino> = (0u64..1 << points)
        .into_par_iter()
        .flat_map_iter(|mask| {
            let columns: Vec<Cell> = (0..points)
                .map(|i| if mask >> i & 1 == 1 { Cell::Top } else { Cell::Bottom })
                .collect();
            let tops = mask.count_ones() as usize;
            let bottoms = points - tops;
            let mut found = Vec::new();
            for bottom in &av132[bottoms] {
                for top in &av213[tops] {
                    let d = GriddedDomino {
                        columns: columns.clone(),
                        bottom: bottom.clone(),
                        top: top.clone(),
                    };
                    if avoids_1324(&d.underlying()) {
                        found.push(d);
                    }
                }
            }
            found
        })
        .collect();
    out.sort();
    out
}
