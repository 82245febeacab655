//! Theatre layouts: segmented seat sets on the lattice, a line-oriented
//! layout file format, and the virtual rim `(S+T) \ S`.
//!
//! Layout files store canonical straight-line coordinates, so all set
//! algebra downstream stays exact and integer-only:
//!
//! ```text
//! geometry a=0.51 b=0.95 c=1.5
//! segment main
//! row 0: 1-6
//! row 1: 1-6
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{GeometryParams, Offset, OffsetSet};

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate seat ({r},{s})")]
    DuplicateSeat { line: usize, r: i32, s: i32 },
    #[error("theatre has no seats")]
    EmptyTheatre,
    #[error("segment {0:?} has no seats")]
    EmptySegment(String),
    #[error("square theatre needs k >= 1")]
    InvalidSquareSize,
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

fn syntax(line: usize, message: impl Into<String>) -> LayoutError {
    LayoutError::Syntax {
        line,
        message: message.into(),
    }
}

/// A seat in canonical straight-line coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seat {
    pub r: i32,
    pub s: i32,
}

impl Seat {
    pub const fn new(r: i32, s: i32) -> Self {
        Seat { r, s }
    }

    pub fn offset(self, by: Offset) -> Seat {
        Seat::new(self.r + by.dr, self.s + by.ds)
    }
}

/// A named block of seats; segments are the unit for show-relabeling
/// symmetry breaking, so they must be declared by the venue, not inferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub name: String,
    pub seats: BTreeSet<Seat>,
}

/// The seat set `S`, partitioned into segments, plus the hall geometry.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Theatre {
    segments: Vec<Segment>,
    geometry: GeometryParams,
    seats: BTreeSet<Seat>,
}

impl Theatre {
    pub fn new(segments: Vec<Segment>, geometry: GeometryParams) -> Result<Self, LayoutError> {
        let mut seats = BTreeSet::new();
        for seg in &segments {
            if seg.seats.is_empty() {
                return Err(LayoutError::EmptySegment(seg.name.clone()));
            }
            for &seat in &seg.seats {
                if !seats.insert(seat) {
                    return Err(LayoutError::DuplicateSeat {
                        line: 0,
                        r: seat.r,
                        s: seat.s,
                    });
                }
            }
        }
        if seats.is_empty() {
            return Err(LayoutError::EmptyTheatre);
        }
        Ok(Theatre {
            segments,
            geometry,
            seats,
        })
    }

    pub fn seats(&self) -> &BTreeSet<Seat> {
        &self.seats
    }

    pub fn seat_count(&self) -> usize {
        self.seats.len()
    }

    pub fn contains(&self, seat: Seat) -> bool {
        self.seats.contains(&seat)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn geometry(&self) -> &GeometryParams {
        &self.geometry
    }

    /// Same seats and segments under a replacement geometry.
    pub fn with_geometry(&self, geometry: GeometryParams) -> Theatre {
        Theatre {
            segments: self.segments.clone(),
            geometry,
            seats: self.seats.clone(),
        }
    }
}

/// Single-segment block of `k` rows of `k` seats, standard geometry.
pub fn make_square(k: usize) -> Result<Theatre, LayoutError> {
    if k == 0 {
        return Err(LayoutError::InvalidSquareSize);
    }
    let k = k as i32;
    let seats = (0..k)
        .flat_map(|r| (0..k).map(move |s| Seat::new(r, s)))
        .collect();
    Theatre::new(
        vec![Segment {
            name: "main".to_string(),
            seats,
        }],
        GeometryParams::standard(),
    )
}

/// Minkowski sum of a seat set with an offset zone.
pub fn seats_plus(seats: &BTreeSet<Seat>, zone: &OffsetSet) -> BTreeSet<Seat> {
    let mut out = BTreeSet::new();
    for &seat in seats {
        for o in zone.iter() {
            out.insert(seat.offset(o));
        }
    }
    out
}

/// The rim of virtual seats `(S+T) \ S` counted by the volume bound.
pub fn virtual_rim(theatre: &Theatre, zone: &OffsetSet) -> BTreeSet<Seat> {
    seats_plus(theatre.seats(), zone)
        .into_iter()
        .filter(|seat| !theatre.contains(*seat))
        .collect()
}

/// Parses the layout format. Comments start with `#`; blank lines are
/// ignored; the first significant line must be the geometry line.
pub fn parse_layout(text: &str) -> Result<Theatre, LayoutError> {
    let mut geometry: Option<GeometryParams> = None;
    let mut segments: Vec<Segment> = Vec::new();
    let mut all_seats: BTreeSet<Seat> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if geometry.is_none() {
            let rest = line
                .strip_prefix("geometry")
                .ok_or_else(|| syntax(line_no, "expected `geometry a=<f> b=<f> c=<f>`"))?;
            geometry = Some(parse_geometry(rest, line_no)?);
            continue;
        }

        if let Some(rest) = line.strip_prefix("segment") {
            let name = rest.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(line_no, "segment name must be a single token"));
            }
            if segments.iter().any(|s| s.name == name) {
                return Err(syntax(line_no, format!("segment {name:?} declared twice")));
            }
            segments.push(Segment {
                name: name.to_string(),
                seats: BTreeSet::new(),
            });
            continue;
        }

        if let Some(rest) = line.strip_prefix("row") {
            let seg = segments
                .last_mut()
                .ok_or_else(|| syntax(line_no, "row line before any segment"))?;
            let (row_part, runs_part) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line_no, "expected `row <r>: <runs>`"))?;
            let r: i32 = row_part
                .trim()
                .parse()
                .map_err(|_| syntax(line_no, format!("bad row index {:?}", row_part.trim())))?;
            let runs = parse_runs(runs_part, line_no)?;
            let mut prev_hi: Option<i32> = None;
            for (lo, hi) in runs {
                if let Some(p) = prev_hi {
                    if lo <= p {
                        return Err(syntax(line_no, "runs must be ascending and disjoint"));
                    }
                }
                prev_hi = Some(hi);
                for s in lo..=hi {
                    let seat = Seat::new(r, s);
                    if !all_seats.insert(seat) {
                        return Err(LayoutError::DuplicateSeat {
                            line: line_no,
                            r,
                            s,
                        });
                    }
                    seg.seats.insert(seat);
                }
            }
            continue;
        }

        return Err(syntax(line_no, format!("unrecognized line {line:?}")));
    }

    let geometry = geometry.ok_or(LayoutError::EmptyTheatre)?;
    Theatre::new(segments, geometry)
}

fn parse_geometry(rest: &str, line_no: usize) -> Result<GeometryParams, LayoutError> {
    let mut a = None;
    let mut b = None;
    let mut c = None;
    for token in rest.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| syntax(line_no, format!("bad geometry token {token:?}")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| syntax(line_no, format!("bad number {value:?}")))?;
        match key {
            "a" => a = Some(value),
            "b" => b = Some(value),
            "c" => c = Some(value),
            _ => return Err(syntax(line_no, format!("unknown geometry key {key:?}"))),
        }
    }
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => Ok(GeometryParams::new(a, b, c)?),
        _ => Err(syntax(line_no, "geometry line needs a=, b= and c=")),
    }
}

/// Parses `<lo>-<hi>[,<lo>-<hi>...]`; a bare integer is a one-seat run.
/// Handles negative endpoints (`-3--1`).
fn parse_runs(text: &str, line_no: usize) -> Result<Vec<(i32, i32)>, LayoutError> {
    let mut runs = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(syntax(line_no, "empty run"));
        }
        // Split on the first '-' that follows a digit.
        let bytes = part.as_bytes();
        let mut split_at = None;
        for i in 1..bytes.len() {
            if bytes[i] == b'-' && bytes[i - 1].is_ascii_digit() {
                split_at = Some(i);
                break;
            }
        }
        let (lo, hi) = match split_at {
            Some(i) => (&part[..i], &part[i + 1..]),
            None => (part, part),
        };
        let lo: i32 = lo
            .trim()
            .parse()
            .map_err(|_| syntax(line_no, format!("bad run endpoint {lo:?}")))?;
        let hi: i32 = hi
            .trim()
            .parse()
            .map_err(|_| syntax(line_no, format!("bad run endpoint {hi:?}")))?;
        if hi < lo {
            return Err(syntax(line_no, format!("run {lo}-{hi} is descending")));
        }
        runs.push((lo, hi));
    }
    Ok(runs)
}

/// Canonical text form; `parse_layout` of the result reproduces the theatre.
pub fn serialize_layout(theatre: &Theatre) -> String {
    let g = theatre.geometry();
    let mut out = String::new();
    writeln!(out, "geometry a={} b={} c={}", g.a, g.b, g.c).unwrap();
    for seg in theatre.segments() {
        writeln!(out, "segment {}", seg.name).unwrap();
        let mut rows: Vec<i32> = seg.seats.iter().map(|seat| seat.r).collect();
        rows.dedup();
        for r in rows {
            let seats: Vec<i32> = seg
                .seats
                .iter()
                .filter(|seat| seat.r == r)
                .map(|seat| seat.s)
                .collect();
            let mut runs: Vec<(i32, i32)> = Vec::new();
            for s in seats {
                match runs.last_mut() {
                    Some((_, hi)) if *hi + 1 == s => *hi = s,
                    _ => runs.push((s, s)),
                }
            }
            let rendered: Vec<String> = runs.iter().map(|(lo, hi)| format!("{lo}-{hi}")).collect();
            writeln!(out, "row {}: {}", r, rendered.join(",")).unwrap();
        }
    }
    out
}
