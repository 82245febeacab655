//! Seat-map rendering: classify each seat of `S` and the virtual rim, then
//! draw the result as staggered ASCII rows or as an SVG of seat circles at
//! physical coordinates `x = (s + r/2) a`, `y = r b`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arrangement::SeatingPlan;
use crate::geometry::{GeometryParams, OffsetSet};
use crate::layout::{virtual_rim, Seat, Theatre};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeatState {
    /// Occupied in the given show (1-based).
    Occupied(usize),
    /// Empty but inside some family's forbidden zone.
    Blocked,
    /// Empty and available.
    Free,
    /// Phantom seat of the rim `(S+T) \ S`.
    VirtualRim,
}

/// Show colors: shows 1 and 2 get the green/blue of printed floor plans,
/// further shows cycle the rest of the palette.
const PALETTE: [&str; 6] = [
    "#2e9e4f", "#3465c0", "#d97818", "#8e44ad", "#1a9e9e", "#7a5230",
];

pub fn show_color(show: usize) -> &'static str {
    PALETTE[(show - 1) % PALETTE.len()]
}

fn show_glyph(show: usize) -> char {
    char::from_digit(((show - 1) % 9 + 1) as u32, 10).unwrap()
}

/// Classifies every seat of `S` plus the rim cells: occupied seats carry
/// their show, unoccupied seats inside any family's forbidden zone (of any
/// show) are blocked, the rim `(S+T) \ S` is virtual.
pub fn classify(
    theatre: &Theatre,
    plan: &SeatingPlan,
    forbidden: &OffsetSet,
    trapezoid: &OffsetSet,
) -> BTreeMap<Seat, SeatState> {
    let mut states: BTreeMap<Seat, SeatState> = BTreeMap::new();
    for &seat in theatre.seats() {
        states.insert(seat, SeatState::Free);
    }
    for p in plan.placements() {
        for cell in p.zone(forbidden) {
            if let Some(state @ SeatState::Free) = states.get_mut(&cell) {
                *state = SeatState::Blocked;
            }
        }
    }
    for p in plan.placements() {
        for seat in p.seats() {
            states.insert(seat, SeatState::Occupied(p.show));
        }
    }
    for cell in virtual_rim(theatre, trapezoid) {
        states.entry(cell).or_insert(SeatState::VirtualRim);
    }
    states
}

/// One glyph per state (`1`/`2`/... occupied, `x` blocked, `.` free, `+`
/// rim), each row indented one extra half-cell to mirror the staggered
/// geometry. Cells are two characters wide so the half-cell offset is a
/// single space.
pub fn render_ascii(states: &BTreeMap<Seat, SeatState>) -> String {
    if states.is_empty() {
        return String::new();
    }
    let r_min = states.keys().map(|c| c.r).min().unwrap();
    let r_max = states.keys().map(|c| c.r).max().unwrap();
    let s_min = states.keys().map(|c| c.s).min().unwrap();
    let mut out = String::new();
    for r in r_min..=r_max {
        let mut line = " ".repeat((r - r_min) as usize);
        let mut cursor = s_min;
        for (seat, state) in states.range(Seat::new(r, i32::MIN)..=Seat::new(r, i32::MAX)) {
            while cursor < seat.s {
                line.push_str("  ");
                cursor += 1;
            }
            let glyph = match state {
                SeatState::Occupied(show) => show_glyph(*show),
                SeatState::Blocked => 'x',
                SeatState::Free => '.',
                SeatState::VirtualRim => '+',
            };
            line.push(glyph);
            line.push(' ');
            cursor += 1;
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// SVG seat circles at physical coordinates, 40 px per meter. Occupied
/// seats are filled with their show color, blocked seats red, free seats
/// white, rim cells black outlines.
pub fn render_svg(states: &BTreeMap<Seat, SeatState>, geometry: &GeometryParams) -> String {
    const SCALE: f64 = 40.0;
    let radius = geometry.a * 0.4 * SCALE;
    let pos = |seat: &Seat| -> (f64, f64) {
        (
            (seat.s as f64 + seat.r as f64 / 2.0) * geometry.a * SCALE,
            seat.r as f64 * geometry.b * SCALE,
        )
    };
    let (mut min_x, mut min_y) = (0.0f64, 0.0f64);
    let (mut max_x, mut max_y) = (0.0f64, 0.0f64);
    for (i, seat) in states.keys().enumerate() {
        let (x, y) = pos(seat);
        if i == 0 {
            (min_x, min_y, max_x, max_y) = (x, y, x, y);
        } else {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
    }
    let pad = radius + 4.0;
    let width = max_x - min_x + 2.0 * pad;
    let height = max_y - min_y + 2.0 * pad;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.2}\" height=\"{height:.2}\" viewBox=\"0 0 {width:.2} {height:.2}\">",
    )
    .unwrap();
    for (seat, state) in states {
        let (x, y) = pos(seat);
        let (x, y) = (x - min_x + pad, y - min_y + pad);
        let (fill, stroke) = match state {
            SeatState::Occupied(show) => (show_color(*show), "#444444"),
            SeatState::Blocked => ("#cc3333", "#444444"),
            SeatState::Free => ("#ffffff", "#444444"),
            SeatState::VirtualRim => ("none", "#000000"),
        };
        writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{radius:.2}\" fill=\"{fill}\" stroke=\"{stroke}\"/>",
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
