//! Seat-lattice geometry: physical distances, forbidden zones, and the
//! trapezoid half-zones whose Minkowski self-difference reproduces them.
//!
//! Rows are staggered by half a seat pitch, so the distance between seats
//! `(r, s)` and `(r', s')` is `sqrt(((s - s' + (r - r')/2) a)^2 + ((r - r') b)^2)`
//! with `a` the in-row pitch and `b` the row pitch. The forbidden zone of an
//! occupied seat is every offset strictly closer than the safety distance `c`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Offsets whose distance is within this band of `c` count as exactly at
/// distance `c` and are permitted. The canonical 1.5m and 1.0m regimes have
/// no lattice distance anywhere near the threshold, so they are unaffected.
pub const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("geometry parameters must all be positive (a={a}, b={b}, c={c})")]
    NonPositiveParams { a: f64, b: f64, c: f64 },
    #[error("family size must be at least 1")]
    ZeroFamilySize,
    #[error("candidate half-zone does not factor the forbidden zone: T + (-T) != F")]
    HalfZoneMismatch,
}

/// Physical seat spacing (meters): `a` in-row pitch, `b` row pitch, `c` the
/// minimum distance between members of different families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GeometryParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        if a > 0.0 && b > 0.0 && c > 0.0 {
            Ok(GeometryParams { a, b, c })
        } else {
            Err(GeometryError::NonPositiveParams { a, b, c })
        }
    }

    /// The measured hall spacing with the 1.5m distance rule.
    pub fn standard() -> Self {
        GeometryParams {
            a: 0.51,
            b: 0.95,
            c: 1.5,
        }
    }

    /// Same spacing with the relaxed 1.0m distance rule.
    pub fn short() -> Self {
        GeometryParams {
            a: 0.51,
            b: 0.95,
            c: 1.0,
        }
    }
}

/// Relative lattice position: `dr` rows over, `ds` seats over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Offset {
    pub dr: i32,
    pub ds: i32,
}

impl Offset {
    pub const fn new(dr: i32, ds: i32) -> Self {
        Offset { dr, ds }
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dr, self.ds)
    }
}

/// A finite set of lattice offsets. Equality is element-wise.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OffsetSet(BTreeSet<Offset>);

impl OffsetSet {
    pub fn new() -> Self {
        OffsetSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, o: Offset) -> bool {
        self.0.contains(&o)
    }

    pub fn insert(&mut self, o: Offset) -> bool {
        self.0.insert(o)
    }

    pub fn iter(&self) -> impl Iterator<Item = Offset> + '_ {
        self.0.iter().copied()
    }

    /// `{-o : o in self}`.
    pub fn negate(&self) -> OffsetSet {
        self.iter().map(|o| Offset::new(-o.dr, -o.ds)).collect()
    }

    pub fn translate(&self, by: Offset) -> OffsetSet {
        self.iter()
            .map(|o| Offset::new(o.dr + by.dr, o.ds + by.ds))
            .collect()
    }
}

impl FromIterator<Offset> for OffsetSet {
    fn from_iter<I: IntoIterator<Item = Offset>>(iter: I) -> Self {
        OffsetSet(iter.into_iter().collect())
    }
}

/// The two distance rules for which the forbidden zone factors as a
/// trapezoid self-difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRegime {
    /// 1.5m rule: 5-cell trapezoid, 13-cell forbidden zone.
    Standard,
    /// 1.0m rule: 3-cell trapezoid, 7-cell forbidden zone.
    Short,
}

impl DistanceRegime {
    pub fn params(self) -> GeometryParams {
        match self {
            DistanceRegime::Standard => GeometryParams::standard(),
            DistanceRegime::Short => GeometryParams::short(),
        }
    }

    pub fn trapezoid(self) -> OffsetSet {
        canonical_trapezoid(self)
    }

    /// The forbidden zone, derived as `T + (-T)` in exact integers.
    pub fn forbidden(self) -> OffsetSet {
        let t = self.trapezoid();
        minkowski_sum(&t, &t.negate())
    }

    /// Number of cells in the trapezoid of a family of size `t`.
    pub fn family_trapezoid_cells(self, t: usize) -> usize {
        match self {
            DistanceRegime::Standard => 2 * t + 3,
            DistanceRegime::Short => 2 * t + 1,
        }
    }

    pub fn safety_distance(self) -> f64 {
        self.params().c
    }

    /// Picks the regime whose trapezoid factors `forbidden_zone(params)`,
    /// if either does.
    pub fn resolve(params: &GeometryParams) -> Result<DistanceRegime, GeometryError> {
        let zone = forbidden_zone(params);
        for regime in [DistanceRegime::Standard, DistanceRegime::Short] {
            let t = regime.trapezoid();
            if minkowski_sum(&t, &t.negate()) == zone {
                return Ok(regime);
            }
        }
        Err(GeometryError::HalfZoneMismatch)
    }
}

impl fmt::Display for DistanceRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceRegime::Standard => write!(f, "1.5m"),
            DistanceRegime::Short => write!(f, "1.0m"),
        }
    }
}

/// Distance between seat centers `d` apart, under the staggered-row layout.
pub fn seat_distance(params: &GeometryParams, d: Offset) -> f64 {
    let in_row = (d.ds as f64 + d.dr as f64 / 2.0) * params.a;
    let across = d.dr as f64 * params.b;
    (in_row * in_row + across * across).sqrt()
}

/// All offsets strictly closer than `c` to the origin seat.
pub fn forbidden_zone(params: &GeometryParams) -> OffsetSet {
    let dr_max = (params.c / params.b).ceil() as i32;
    let mut zone = OffsetSet::new();
    for dr in -dr_max..=dr_max {
        let ds_reach = (params.c / params.a + dr.abs() as f64 / 2.0).ceil() as i32 + 1;
        for ds in -ds_reach..=ds_reach {
            let o = Offset::new(dr, ds);
            if seat_distance(params, o) < params.c - BOUNDARY_EPS {
                zone.insert(o);
            }
        }
    }
    zone
}

/// The half-zone based at the origin for the given regime.
pub fn canonical_trapezoid(regime: DistanceRegime) -> OffsetSet {
    let cells: &[Offset] = match regime {
        DistanceRegime::Standard => &[
            Offset::new(0, -1),
            Offset::new(0, 0),
            Offset::new(0, 1),
            Offset::new(1, -1),
            Offset::new(1, 0),
        ],
        DistanceRegime::Short => &[Offset::new(0, 0), Offset::new(0, 1), Offset::new(1, 0)],
    };
    cells.iter().copied().collect()
}

/// `{x + y : x in a, y in b}`.
pub fn minkowski_sum(a: &OffsetSet, b: &OffsetSet) -> OffsetSet {
    let mut out = OffsetSet::new();
    for x in a.iter() {
        for y in b.iter() {
            out.insert(Offset::new(x.dr + y.dr, x.ds + y.ds));
        }
    }
    out
}

/// Zone of a family of size `t`: the union of `base` shifted along the row
/// by `0..t` seats, i.e. `S_t + base` as a Minkowski sum.
pub fn family_zone(base: &OffsetSet, t: usize) -> Result<OffsetSet, GeometryError> {
    if t == 0 {
        return Err(GeometryError::ZeroFamilySize);
    }
    let run: OffsetSet = (0..t as i32).map(|i| Offset::new(0, i)).collect();
    Ok(minkowski_sum(base, &run))
}

/// Checks that `candidate + (-candidate)` equals the distance-derived
/// forbidden zone of `params`. This is the entry point for geometries
/// outside the two canonical regimes: the caller proposes a half-zone and
/// we accept it only if the factorization is exact.
pub fn verify_half_zone(
    params: &GeometryParams,
    candidate: &OffsetSet,
) -> Result<(), GeometryError> {
    if minkowski_sum(candidate, &candidate.negate()) == forbidden_zone(params) {
        Ok(())
    } else {
        Err(GeometryError::HalfZoneMismatch)
    }
}
