//! Seating plans and the predicates that define a valid solution: families
//! fit and don't overlap, no member sits in another family's forbidden
//! zone (checked two independent ways), seats are never reused across
//! shows, and realized family-size counts stay within the target profile.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num::rational::Rational64;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::{Offset, OffsetSet};
use crate::layout::{Seat, Theatre};

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("placement show {show} exceeds plan show count {shows}")]
    ShowOutOfRange { show: usize, shows: usize },
    #[error("profile fractions must lie in [0,1]")]
    FractionOutOfRange,
    #[error("profile fractions must sum to 1 (got {0})")]
    FractionSum(Rational64),
    #[error("epsilon must lie in (0,1]")]
    EpsilonOutOfRange,
    #[error("profile must cover at least one family size")]
    EmptyProfile,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot parse {0:?} as a decimal fraction")]
    BadDecimal(String),
}

/// A family of `size` people starting at seat `(r, s)` in show `show`
/// (1-based), occupying seats `(r, s) .. (r, s + size - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Placement {
    pub show: usize,
    pub r: i32,
    pub s: i32,
    pub size: usize,
}

impl Placement {
    pub fn new(show: usize, r: i32, s: i32, size: usize) -> Self {
        Placement { show, r, s, size }
    }

    pub fn seats(&self) -> impl Iterator<Item = Seat> + '_ {
        (0..self.size as i32).map(move |i| Seat::new(self.r, self.s + i))
    }

    /// Cells of the placement's zone: the occupied run Minkowski-added to
    /// `base` (use the trapezoid or the forbidden zone as `base`).
    pub fn zone(&self, base: &OffsetSet) -> BTreeSet<Seat> {
        let mut out = BTreeSet::new();
        for seat in self.seats() {
            for o in base.iter() {
                out.insert(seat.offset(o));
            }
        }
        out
    }

    pub fn shifted(&self, by: Offset) -> Placement {
        Placement {
            show: self.show,
            r: self.r + by.dr,
            s: self.s + by.ds,
            size: self.size,
        }
    }
}

/// A set of placements across `shows` consecutive shows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeatingPlan {
    placements: BTreeSet<Placement>,
    shows: usize,
}

impl SeatingPlan {
    pub fn new(
        placements: impl IntoIterator<Item = Placement>,
        shows: usize,
    ) -> Result<Self, PlanError> {
        let placements: BTreeSet<Placement> = placements.into_iter().collect();
        for p in &placements {
            if p.show == 0 || p.show > shows {
                return Err(PlanError::ShowOutOfRange {
                    show: p.show,
                    shows,
                });
            }
        }
        Ok(SeatingPlan { placements, shows })
    }

    pub fn empty(shows: usize) -> Self {
        SeatingPlan {
            placements: BTreeSet::new(),
            shows,
        }
    }

    pub fn placements(&self) -> impl Iterator<Item = &Placement> + '_ {
        self.placements.iter()
    }

    pub fn shows(&self) -> usize {
        self.shows
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn persons(&self) -> u64 {
        self.placements.iter().map(|p| p.size as u64).sum()
    }

    pub fn persons_in_show(&self, show: usize) -> u64 {
        self.placements
            .iter()
            .filter(|p| p.show == show)
            .map(|p| p.size as u64)
            .sum()
    }

    pub fn shifted(&self, by: Offset) -> SeatingPlan {
        SeatingPlan {
            placements: self.placements.iter().map(|p| p.shifted(by)).collect(),
            shows: self.shows,
        }
    }

    /// Relabels shows by `perm` (a permutation of `1..=shows`, 1-based).
    pub fn permute_shows(&self, perm: &[usize]) -> SeatingPlan {
        SeatingPlan {
            placements: self
                .placements
                .iter()
                .map(|p| Placement {
                    show: perm[p.show - 1],
                    ..*p
                })
                .collect(),
            shows: self.shows,
        }
    }

    /// One line per placement, sorted by (show, row, seat).
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for p in &self.placements {
            writeln!(
                out,
                "show={} row={} seat={} size={}",
                p.show, p.r, p.s, p.size
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<SeatingPlan, PlanError> {
        let mut placements = BTreeSet::new();
        let mut shows = 1;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut show = None;
            let mut r = None;
            let mut s = None;
            let mut size = None;
            for token in line.split_whitespace() {
                let (key, value) = token.split_once('=').ok_or_else(|| PlanError::Parse {
                    line: line_no,
                    message: format!("bad token {token:?}"),
                })?;
                let value: i64 = value.parse().map_err(|_| PlanError::Parse {
                    line: line_no,
                    message: format!("bad number {value:?}"),
                })?;
                match key {
                    "show" => show = Some(value),
                    "row" => r = Some(value),
                    "seat" => s = Some(value),
                    "size" => size = Some(value),
                    _ => {
                        return Err(PlanError::Parse {
                            line: line_no,
                            message: format!("unknown key {key:?}"),
                        })
                    }
                }
            }
            match (show, r, s, size) {
                (Some(v), Some(r), Some(s), Some(t)) if v >= 1 && t >= 1 => {
                    shows = shows.max(v as usize);
                    placements.insert(Placement::new(v as usize, r as i32, s as i32, t as usize));
                }
                _ => {
                    return Err(PlanError::Parse {
                        line: line_no,
                        message: "need show=, row=, seat=, size= with show,size >= 1".to_string(),
                    })
                }
            }
        }
        Ok(SeatingPlan { placements, shows })
    }
}

/// Families-per-size tally `n_t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyCounts {
    counts: BTreeMap<usize, u64>,
}

impl FamilyCounts {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u64)>) -> Self {
        FamilyCounts {
            counts: pairs.into_iter().filter(|&(_, n)| n > 0).collect(),
        }
    }

    pub fn get(&self, size: usize) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    pub fn families(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn persons(&self) -> u64 {
        self.counts.iter().map(|(t, n)| *t as u64 * n).sum()
    }

    pub fn sizes(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&t, &n)| (t, n))
    }
}

/// Target booking mix: a fraction per family size summing to one, plus the
/// multiplicative tolerance epsilon. Fractions are exact rationals so all
/// profile inequalities are decided without floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetProfile {
    fractions: BTreeMap<usize, Rational64>,
    epsilon: Rational64,
}

impl TargetProfile {
    pub fn new(
        fractions: impl IntoIterator<Item = (usize, Rational64)>,
        epsilon: Rational64,
    ) -> Result<Self, PlanError> {
        let fractions: BTreeMap<usize, Rational64> = fractions.into_iter().collect();
        if fractions.is_empty() {
            return Err(PlanError::EmptyProfile);
        }
        if fractions
            .values()
            .any(|p| p.is_negative() || *p > Rational64::one())
        {
            return Err(PlanError::FractionOutOfRange);
        }
        let sum: Rational64 = fractions.values().sum();
        if (sum - Rational64::one()).abs() > Rational64::new(1, 1_000_000_000) {
            return Err(PlanError::FractionSum(sum));
        }
        if epsilon <= Rational64::zero() || epsilon > Rational64::one() {
            return Err(PlanError::EpsilonOutOfRange);
        }
        Ok(TargetProfile { fractions, epsilon })
    }

    /// The four preset profiles over sizes 1..4, epsilon 0.02.
    pub fn preset(name: &str) -> Option<TargetProfile> {
        let hundredths = |v: &[i64]| -> Vec<(usize, Rational64)> {
            v.iter()
                .enumerate()
                .map(|(i, &h)| (i + 1, Rational64::new(h, 100)))
                .collect()
        };
        let fractions = match name {
            "mge1" => hundredths(&[18, 70, 6, 6]),
            "mge2" => hundredths(&[0, 100, 0, 0]),
            "mge3" => hundredths(&[20, 80, 0, 0]),
            "mge4" => hundredths(&[0, 50, 0, 50]),
            _ => return None,
        };
        Some(TargetProfile::new(fractions, Rational64::new(1, 50)).unwrap())
    }

    /// Equal fractions over the given sizes.
    pub fn uniform(sizes: &BTreeSet<usize>, epsilon: Rational64) -> Result<Self, PlanError> {
        if sizes.is_empty() {
            return Err(PlanError::EmptyProfile);
        }
        let share = Rational64::new(1, sizes.len() as i64);
        TargetProfile::new(sizes.iter().map(|&t| (t, share)), epsilon)
    }

    pub fn with_epsilon(&self, epsilon: Rational64) -> Result<Self, PlanError> {
        TargetProfile::new(self.fractions.clone(), epsilon)
    }

    /// Restriction to a subset of the sizes; valid only when the kept
    /// fractions still sum to one (dropped sizes must have fraction zero).
    pub fn restricted_to(&self, sizes: &BTreeSet<usize>) -> Result<Self, PlanError> {
        if sizes.iter().any(|t| !self.fractions.contains_key(t)) {
            return Err(PlanError::EmptyProfile);
        }
        TargetProfile::new(
            self.fractions
                .iter()
                .filter(|(t, _)| sizes.contains(t))
                .map(|(&t, &p)| (t, p)),
            self.epsilon,
        )
    }

    pub fn sizes(&self) -> BTreeSet<usize> {
        self.fractions.keys().copied().collect()
    }

    pub fn fraction(&self, size: usize) -> Rational64 {
        self.fractions
            .get(&size)
            .copied()
            .unwrap_or_else(Rational64::zero)
    }

    pub fn epsilon(&self) -> Rational64 {
        self.epsilon
    }

    /// Profile file: `epsilon=<f>` header then `t=<size> p=<fraction>` lines.
    pub fn parse(text: &str) -> Result<Self, PlanError> {
        let mut epsilon = None;
        let mut fractions = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(value) = line.strip_prefix("epsilon=") {
                epsilon = Some(parse_decimal(value.trim())?);
                continue;
            }
            let mut size = None;
            let mut frac = None;
            for token in line.split_whitespace() {
                match token.split_once('=') {
                    Some(("t", v)) => {
                        size = Some(v.parse::<usize>().map_err(|_| PlanError::Parse {
                            line: line_no,
                            message: format!("bad size {v:?}"),
                        })?)
                    }
                    Some(("p", v)) => frac = Some(parse_decimal(v)?),
                    _ => {
                        return Err(PlanError::Parse {
                            line: line_no,
                            message: format!("bad token {token:?}"),
                        })
                    }
                }
            }
            match (size, frac) {
                (Some(t), Some(p)) if t >= 1 => {
                    fractions.insert(t, p);
                }
                _ => {
                    return Err(PlanError::Parse {
                        line: line_no,
                        message: "need `t=<size> p=<fraction>` with size >= 1".to_string(),
                    })
                }
            }
        }
        let epsilon = epsilon.ok_or(PlanError::Parse {
            line: 0,
            message: "missing `epsilon=` header".to_string(),
        })?;
        TargetProfile::new(fractions, epsilon)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("epsilon={}\n", format_ratio(self.epsilon));
        for (&t, &p) in &self.fractions {
            writeln!(out, "t={} p={}", t, format_ratio(p)).unwrap();
        }
        out
    }
}

/// Exact rational from a plain decimal string like `0.18` or `1`.
pub fn parse_decimal(text: &str) -> Result<Rational64, PlanError> {
    let bad = || PlanError::BadDecimal(text.to_string());
    let t = text.trim();
    let (sign, digits) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 12
    {
        return Err(bad());
    }
    let int_val: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let mut numer = int_val;
    let mut denom = 1i64;
    for c in frac_part.chars() {
        numer = numer.checked_mul(10).ok_or_else(bad)?;
        denom = denom.checked_mul(10).ok_or_else(bad)?;
        numer += c.to_digit(10).unwrap() as i64;
    }
    Ok(Rational64::new(sign * numer, denom))
}

/// Shortest plain-decimal form when the denominator divides a power of ten
/// small enough to expand safely, `p/q` otherwise.
pub fn format_ratio(r: Rational64) -> String {
    let fallback = || format!("{}/{}", r.numer(), r.denom());
    let mut denom = *r.denom();
    let mut pow10 = 1i64;
    for _ in 0..15 {
        if denom == 1 {
            break;
        }
        if denom % 2 == 0 {
            denom /= 2;
        } else if denom % 5 == 0 {
            denom /= 5;
        } else {
            return fallback();
        }
    }
    if denom != 1 {
        return fallback();
    }
    while pow10 % r.denom() != 0 {
        pow10 *= 10;
    }
    let scaled = match r.numer().checked_mul(pow10 / r.denom()) {
        Some(v) => v,
        None => return fallback(),
    };
    if pow10 == 1 {
        return scaled.to_string();
    }
    let neg = scaled < 0;
    let digits = scaled.abs().to_string();
    let width = pow10.to_string().len() - 1;
    let padded = format!("{digits:0>width$}", width = width + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - width);
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

/// Every family fits inside `S` and, per show, occupied seat runs are
/// pairwise disjoint.
pub fn is_arrangement(plan: &SeatingPlan, theatre: &Theatre) -> bool {
    let mut occupied: BTreeSet<(usize, Seat)> = BTreeSet::new();
    for p in plan.placements() {
        for seat in p.seats() {
            if !theatre.contains(seat) {
                return false;
            }
            if !occupied.insert((p.show, seat)) {
                return false;
            }
        }
    }
    true
}

/// Per show, no family member sits in another family's forbidden zone.
pub fn is_safe_zones(plan: &SeatingPlan, _theatre: &Theatre, forbidden: &OffsetSet) -> bool {
    let placements: Vec<&Placement> = plan.placements().collect();
    for a in &placements {
        for b in &placements {
            if a == b || a.show != b.show {
                continue;
            }
            let zone_b = b.zone(forbidden);
            if a.seats().any(|seat| zone_b.contains(&seat)) {
                return false;
            }
        }
    }
    true
}

/// Per show, family trapezoids are pairwise disjoint. Agrees with
/// `is_safe_zones` on every input when the trapezoid factors the zone.
pub fn is_safe_trapezoids(plan: &SeatingPlan, _theatre: &Theatre, trapezoid: &OffsetSet) -> bool {
    let mut covered: BTreeSet<(usize, Seat)> = BTreeSet::new();
    for p in plan.placements() {
        for cell in p.zone(trapezoid) {
            if !covered.insert((p.show, cell)) {
                return false;
            }
        }
    }
    true
}

/// No seat is used in two different shows.
pub fn multi_show_valid(plan: &SeatingPlan, _theatre: &Theatre) -> bool {
    let mut used_in: BTreeMap<Seat, usize> = BTreeMap::new();
    for p in plan.placements() {
        for seat in p.seats() {
            match used_in.get(&seat) {
                Some(&show) if show != p.show => return false,
                _ => {
                    used_in.insert(seat, p.show);
                }
            }
        }
    }
    true
}

/// Family counts aggregated over all shows.
pub fn counts(plan: &SeatingPlan) -> FamilyCounts {
    let mut map: BTreeMap<usize, u64> = BTreeMap::new();
    for p in plan.placements() {
        *map.entry(p.size).or_insert(0) += 1;
    }
    FamilyCounts { counts: map }
}

/// Total persons across all shows divided by the seat count.
pub fn density(plan: &SeatingPlan, theatre: &Theatre) -> Rational64 {
    Rational64::new(plan.persons() as i64, theatre.seat_count() as i64)
}

/// `(p_t - eps) * N <= n_t <= (p_t + eps) * N` for every allowed size,
/// with `N` the total family count over the allowed sizes. Counts for
/// sizes outside the profile make the plan non-conforming.
pub fn profile_satisfied(counts: &FamilyCounts, profile: &TargetProfile) -> bool {
    let allowed = profile.sizes();
    if counts.sizes().any(|(t, _)| !allowed.contains(&t)) {
        return false;
    }
    let total = Rational64::from_integer(counts.families() as i64);
    for &t in &allowed {
        let n = Rational64::from_integer(counts.get(t) as i64);
        let lo = (profile.fraction(t) - profile.epsilon()) * total;
        let hi = (profile.fraction(t) + profile.epsilon()) * total;
        if n < lo || n > hi {
            return false;
        }
    }
    true
}
