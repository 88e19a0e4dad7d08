//! Cells and points, with exact rational coordinates inside edges.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One concrete cell: a family name and an index (0 for unit families).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub family: String,
    pub index: i64,
}

impl Cell {
    pub fn new(family: impl Into<String>, index: i64) -> Self {
        Cell {
            family: family.into(),
            index,
        }
    }

    pub fn unit(family: impl Into<String>) -> Self {
        Cell::new(family, 0)
    }
}

/// Position inside an edge, strictly between 0 (low end) and 1 (high end).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord(Ratio<i64>);

impl Coord {
    pub fn new(numer: i64, denom: i64) -> Option<Coord> {
        if denom == 0 {
            return None;
        }
        let r = Ratio::new(numer, denom);
        if r > Ratio::from_integer(0) && r < Ratio::from_integer(1) {
            Some(Coord(r))
        } else {
            None
        }
    }

    pub fn half() -> Coord {
        Coord(Ratio::new(1, 2))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_coord(&s).map_err(serde::de::Error::custom)
    }
}

/// A point of the leaf space: a vertex cell, or an interior point of an
/// edge cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Point {
    Vertex(Cell),
    Interior(Cell, Coord),
}

impl Point {
    pub fn vertex(family: &str, index: i64) -> Point {
        Point::Vertex(Cell::new(family, index))
    }

    pub fn mid(family: &str, index: i64) -> Point {
        Point::Interior(Cell::new(family, index), Coord::half())
    }

    pub fn cell(&self) -> &Cell {
        match self {
            Point::Vertex(c) | Point::Interior(c, _) => c,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bad point `{text}`: {reason}")]
pub struct PointSyntaxError {
    pub text: String,
    pub reason: String,
}

fn parse_coord(s: &str) -> Result<Coord, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad numerator `{n}`"))?;
    let d: i64 = d.parse().map_err(|_| format!("bad denominator `{d}`"))?;
    Coord::new(n, d).ok_or_else(|| format!("coordinate {n}/{d} not strictly between 0 and 1"))
}

/// Parse `name`, `name[i]`, `name:t` or `name[i]:t`.
pub fn parse_cell(s: &str) -> Result<Cell, String> {
    let s = s.trim();
    match s.find('[') {
        None => {
            if !is_ident(s) {
                return Err(format!("bad family name `{s}`"));
            }
            Ok(Cell::unit(s))
        }
        Some(open) => {
            let name = &s[..open];
            let rest = &s[open + 1..];
            let close = rest.strip_suffix(']').ok_or("missing `]`")?;
            if !is_ident(name) {
                return Err(format!("bad family name `{name}`"));
            }
            let index: i64 = close
                .trim()
                .parse()
                .map_err(|_| format!("bad index `{close}`"))?;
            Ok(Cell::new(name, index))
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for Point {
    type Err = PointSyntaxError;

    fn from_str(s: &str) -> Result<Point, PointSyntaxError> {
        let err = |reason: String| PointSyntaxError {
            text: s.to_string(),
            reason,
        };
        match s.rsplit_once(':') {
            Some((cell, t)) => {
                let cell = parse_cell(cell).map_err(err)?;
                let t = parse_coord(t).map_err(err)?;
                Ok(Point::Interior(cell, t))
            }
            None => Ok(Point::Vertex(parse_cell(s).map_err(err)?)),
        }
    }
}

/// Formats a cell as `name[i]`; unit cells are written without an index
/// by [`CellDisplay`] when the caller knows the family is a unit.
impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family, self.index)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(c) => write!(f, "{c}"),
            Point::Interior(c, t) => write!(f, "{c}:{t}"),
        }
    }
}

/// Display helper that omits the index of unit-family cells.
pub struct CellDisplay<'a> {
    pub cell: &'a Cell,
    pub unit: bool,
}

impl fmt::Display for CellDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit {
            f.write_str(&self.cell.family)
        } else {
            write!(f, "{}", self.cell)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_point_forms() {
        assert_eq!("E[0]:1/2".parse::<Point>().unwrap(), Point::mid("E", 0));
        assert_eq!("v[-3]".parse::<Point>().unwrap(), Point::vertex("v", -3));
        assert_eq!("a".parse::<Point>().unwrap(), Point::vertex("a", 0));
        assert_eq!("s:2/4".parse::<Point>().unwrap(), Point::mid("s", 0));
    }

    #[test]
    fn rejects_boundary_coordinates() {
        assert!("E[0]:0".parse::<Point>().is_err());
        assert!("E[0]:1/1".parse::<Point>().is_err());
        assert!("E[0]:3/2".parse::<Point>().is_err());
        assert!("E[x]".parse::<Point>().is_err());
    }

    #[test]
    fn display_round_trips() {
        let p = Point::Interior(Cell::new("ra", -2), Coord::new(2, 3).unwrap());
        assert_eq!(p.to_string(), "ra[-2]:2/3");
        assert_eq!(p.to_string().parse::<Point>().unwrap(), p);
    }
}
