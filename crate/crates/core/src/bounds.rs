//! Closed-form capacity and density bounds: the volume bound
//! `sum_t |T_t| n_t <= |S+T|`, the infinite-lattice ("Hilbert") densities
//! `d_t` with their alternating-row counterparts `d'_t`, and the
//! profile-weighted density ceiling `D(p) |S+T| / |S|`.

use num::rational::Rational64;
use num::Zero;

use crate::arrangement::{FamilyCounts, Placement, SeatingPlan, TargetProfile};
use crate::geometry::{DistanceRegime, OffsetSet};
use crate::layout::{seats_plus, Theatre};

/// Whether a density figure assumes every row usable or occupied rows
/// sandwiched between empty ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowVariant {
    FullRows,
    AlternatingRows,
}

/// One row of the density tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub size: usize,
    pub regime: DistanceRegime,
    pub variant: RowVariant,
    /// The density itself, exact.
    pub value: Rational64,
    /// Seats consumed per person, `1/value`.
    pub reciprocal: Rational64,
    /// For alternating rows: `d'_t / d_t`.
    pub ratio_to_full: Option<Rational64>,
}

/// Left side of the volume bound: each size-`t` family accounts for a
/// trapezoid of `|T_t|` cells.
pub fn volume_lhs(counts: &FamilyCounts, regime: DistanceRegime) -> u64 {
    counts
        .sizes()
        .map(|(t, n)| regime.family_trapezoid_cells(t) as u64 * n)
        .sum()
}

/// Right side of the volume bound: `|S+T|`, from the actual seat set.
pub fn volume_rhs(theatre: &Theatre, trapezoid: &OffsetSet) -> usize {
    seats_plus(theatre.seats(), trapezoid).len()
}

/// Right side from already-known component sizes: `|S| + |rim|`.
pub fn volume_rhs_parts(seats: usize, rim: usize) -> usize {
    seats + rim
}

/// Maximum occupancy density for families of size `t` on the unbounded
/// lattice: `t / (2t+3)` (standard) or `t / (2t+1)` (short), exact.
pub fn hilbert_density(t: usize, regime: DistanceRegime) -> DensityReport {
    assert!(t >= 1, "family size must be at least 1");
    let value = Rational64::new(t as i64, regime.family_trapezoid_cells(t) as i64);
    DensityReport {
        size: t,
        regime,
        variant: RowVariant::FullRows,
        value,
        reciprocal: value.recip(),
        ratio_to_full: None,
    }
}

/// Density ceiling when every occupied row is sandwiched between empty
/// rows: `t / (2t+4)` (standard) or `t / (2t+2)` (short).
pub fn alternating_density(t: usize, regime: DistanceRegime) -> DensityReport {
    assert!(t >= 1, "family size must be at least 1");
    let denom = match regime {
        DistanceRegime::Standard => 2 * t + 4,
        DistanceRegime::Short => 2 * t + 2,
    };
    let value = Rational64::new(t as i64, denom as i64);
    DensityReport {
        size: t,
        regime,
        variant: RowVariant::AlternatingRows,
        value,
        reciprocal: value.recip(),
        ratio_to_full: Some(value / hilbert_density(t, regime).value),
    }
}

/// `D(p) = sum_t p_t d_t` for a family-size mix `p`.
pub fn profile_weighted_density(profile: &TargetProfile, regime: DistanceRegime) -> Rational64 {
    profile
        .sizes()
        .iter()
        .map(|&t| profile.fraction(t) * hilbert_density(t, regime).value)
        .sum()
}

/// Density ceiling for any safe single-show arrangement whose family mix
/// follows `profile`: `D(p) * |S+T| / |S|`.
pub fn profile_density_bound(
    profile: &TargetProfile,
    theatre: &Theatre,
    trapezoid: &OffsetSet,
    regime: DistanceRegime,
) -> Rational64 {
    let ratio = Rational64::new(
        volume_rhs(theatre, trapezoid) as i64,
        theatre.seat_count() as i64,
    );
    profile_weighted_density(profile, regime) * ratio
}

/// Same ceiling evaluated at the realized mix `p(A)` of a produced plan
/// (audit direction). Zero-family plans get a zero bound.
pub fn realized_density_bound(
    counts: &FamilyCounts,
    theatre: &Theatre,
    trapezoid: &OffsetSet,
    regime: DistanceRegime,
) -> Rational64 {
    let families = counts.families();
    if families == 0 {
        return Rational64::zero();
    }
    let d: Rational64 = counts
        .sizes()
        .map(|(t, n)| Rational64::new(n as i64, families as i64) * hilbert_density(t, regime).value)
        .sum();
    let ratio = Rational64::new(
        volume_rhs(theatre, trapezoid) as i64,
        theatre.seat_count() as i64,
    );
    d * ratio
}

/// The guaranteed-safe lattice arrangement of size-`t` families restricted
/// to the `k`-by-`k` square: base seats are the lattice generated by
/// `(2,-1)` and `(1,t+1)`, i.e. rows `r`, seats `s` with
/// `(r + 2s) mod (2t+3) == 0`, kept when the whole family fits.
pub fn hilbert_arrangement(t: usize, k: usize) -> SeatingPlan {
    assert!(t >= 1 && k >= 1, "need t >= 1 and k >= 1");
    let modulus = (2 * t + 3) as i64;
    let mut placements = Vec::new();
    for r in 0..k as i64 {
        for s in 0..=(k as i64 - t as i64) {
            if (r + 2 * s).rem_euclid(modulus) == 0 {
                placements.push(Placement::new(1, r as i32, s as i32, t));
            }
        }
    }
    SeatingPlan::new(placements, 1).unwrap()
}

/// Half-up rounding to `decimals` places, exact.
pub fn round_half_up(value: Rational64, decimals: u32) -> Rational64 {
    let scale = Rational64::from_integer(10i64.pow(decimals));
    let scaled = value * scale + Rational64::new(1, 2);
    Rational64::from_integer(scaled.floor().to_integer()) / scale
}

/// Fixed-point rendering of a rounded value with trailing zeros trimmed
/// ("0.4" rather than "0.40", "5" rather than "5.00").
pub fn format_rounded(value: Rational64, decimals: u32) -> String {
    crate::arrangement::format_ratio(round_half_up(value, decimals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{counts, density, is_safe_trapezoids};
    use crate::geometry::{minkowski_sum, Offset};
    use crate::layout::make_square;
    use std::collections::BTreeSet;

    #[test]
    fn volume_sides() {
        assert_eq!(volume_rhs_parts(400, 133), 533);
        assert_eq!(volume_rhs_parts(1250, 458), 1708);
        let one_pair = FamilyCounts::from_pairs([(2, 1)]);
        assert_eq!(volume_lhs(&one_pair, DistanceRegime::Standard), 7);
        assert_eq!(volume_lhs(&one_pair, DistanceRegime::Short), 5);
    }

    #[test]
    fn volume_rhs_from_sets() {
        let theatre = make_square(3).unwrap();
        let t = DistanceRegime::Standard.trapezoid();
        assert_eq!(volume_rhs(&theatre, &t), 19);
    }

    #[test]
    fn hilbert_density_examples() {
        let d2 = hilbert_density(2, DistanceRegime::Standard);
        assert_eq!(d2.value, Rational64::new(2, 7));
        assert_eq!(d2.reciprocal, Rational64::new(7, 2));
        assert_eq!(format_rounded(d2.value, 2), "0.29");
        assert_eq!(format_rounded(d2.reciprocal, 2), "3.5");

        let d1 = hilbert_density(1, DistanceRegime::Standard);
        assert_eq!(format_rounded(d1.value, 2), "0.2");
        assert_eq!(d1.reciprocal, Rational64::from_integer(5));

        assert_eq!(
            hilbert_density(3, DistanceRegime::Short).value,
            Rational64::new(3, 7)
        );
    }

    #[test]
    fn alternating_density_examples() {
        let d1 = alternating_density(1, DistanceRegime::Standard);
        assert_eq!(d1.value, Rational64::new(1, 6));
        assert_eq!(format_rounded(d1.value, 2), "0.17");
        assert_eq!(
            format_rounded(d1.ratio_to_full.unwrap() * Rational64::from_integer(100), 0),
            "83"
        );

        let d4 = alternating_density(4, DistanceRegime::Standard);
        assert_eq!(d4.value, Rational64::new(1, 3));
        assert_eq!(
            format_rounded(d4.ratio_to_full.unwrap() * Rational64::from_integer(100), 0),
            "92"
        );

        assert_eq!(
            alternating_density(2, DistanceRegime::Short).value,
            Rational64::new(1, 3)
        );
    }

    #[test]
    fn densities_increase_and_stay_below_half() {
        let mut prev = Rational64::zero();
        for t in 1..=16 {
            let d = hilbert_density(t, DistanceRegime::Standard).value;
            assert!(d > prev && d < Rational64::new(1, 2), "t={t}");
            assert!(alternating_density(t, DistanceRegime::Standard).value < d);
            prev = d;
        }
    }

    #[test]
    fn profile_bound_examples() {
        // Rim-free limit: D(p) for pairs-only is 2/7.
        let mge2 = TargetProfile::preset("mge2").unwrap();
        assert_eq!(
            profile_weighted_density(&mge2, DistanceRegime::Standard),
            Rational64::new(2, 7)
        );

        let mge4 = TargetProfile::preset("mge4").unwrap();
        let d = profile_weighted_density(&mge4, DistanceRegime::Standard);
        // 0.5 * 2/7 + 0.5 * 4/11 = 25/77
        assert_eq!(d, Rational64::new(25, 77));
        let theatre = make_square(40).unwrap();
        let t = DistanceRegime::Standard.trapezoid();
        let bound = profile_density_bound(&mge4, &theatre, &t, DistanceRegime::Standard);
        assert_eq!(bound, Rational64::new(25, 77) * Rational64::new(1721, 1600));
    }

    #[test]
    fn hilbert_arrangement_is_safe_and_dense() {
        let trap = DistanceRegime::Standard.trapezoid();
        for (t, k) in [(1usize, 5usize), (2, 25), (3, 30), (1, 8), (2, 8)] {
            let plan = hilbert_arrangement(t, k);
            let theatre = make_square(k).unwrap();
            assert!(is_safe_trapezoids(&plan, &theatre, &trap), "t={t} k={k}");
            let d = density(&plan, &theatre);
            let dt = hilbert_density(t, DistanceRegime::Standard).value;
            let lower = dt - Rational64::new(t as i64, k as i64);
            let upper = dt
                * (Rational64::from_integer(1) + Rational64::new(3 * k as i64 + 3, (k * k) as i64));
            assert!(d >= lower, "t={t} k={k}: {d} < {lower}");
            assert!(d <= upper, "t={t} k={k}: {d} > {upper}");
            assert!(
                counts(&plan).persons() == plan.persons(),
                "count/person bookkeeping"
            );
        }
    }

    #[test]
    fn hilbert_arrangement_keeps_volume_bound() {
        let trap = DistanceRegime::Standard.trapezoid();
        for (t, k) in [(2usize, 25usize), (4, 12)] {
            let plan = hilbert_arrangement(t, k);
            let theatre = make_square(k).unwrap();
            let lhs = volume_lhs(&counts(&plan), DistanceRegime::Standard);
            assert!(lhs as usize <= volume_rhs(&theatre, &trap));
        }
    }

    #[test]
    fn unrestricted_lattice_tiles_exactly_once() {
        // Trapezoids of the full lattice arrangement cover an interior
        // window exactly once, so occupied-per-trapezoid is t/(2t+3).
        let t = 2usize;
        let modulus = (2 * t + 3) as i64;
        let trap = DistanceRegime::Standard.trapezoid();
        let mut coverage: std::collections::BTreeMap<(i64, i64), usize> = Default::default();
        for r in -20i64..20 {
            for s in -40i64..40 {
                if (r + 2 * s).rem_euclid(modulus) == 0 {
                    let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
                    for i in 0..t as i64 {
                        for o in trap.iter() {
                            cells.insert((r + o.dr as i64, s + i + o.ds as i64));
                        }
                    }
                    for cell in cells {
                        *coverage.entry(cell).or_insert(0) += 1;
                    }
                }
            }
        }
        for r in 0..6 {
            for s in 0..6 {
                assert_eq!(coverage.get(&(r, s)), Some(&1), "cell ({r},{s})");
            }
        }
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(
            round_half_up(Rational64::new(7, 8), 2),
            Rational64::new(88, 100)
        );
        assert_eq!(
            round_half_up(Rational64::new(15, 16), 2),
            Rational64::new(94, 100)
        );
        assert_eq!(
            round_half_up(Rational64::new(1, 40), 2),
            Rational64::new(3, 100)
        );
        assert_eq!(format_rounded(Rational64::new(2, 5), 2), "0.4");
    }

    #[test]
    fn square_plus_trapezoid_matches_brute_union() {
        // Closed form k^2 + 3k + 1 against a per-seat union built without
        // the Minkowski helper.
        let trap = DistanceRegime::Standard.trapezoid();
        for k in 1..=10usize {
            let theatre = make_square(k).unwrap();
            let mut union: BTreeSet<(i32, i32)> = BTreeSet::new();
            for seat in theatre.seats() {
                for o in trap.iter() {
                    union.insert((seat.r + o.dr, seat.s + o.ds));
                }
            }
            assert_eq!(union.len(), k * k + 3 * k + 1);
            assert_eq!(volume_rhs(&theatre, &trap), union.len());
        }
        // The same closed form also follows from the Minkowski identity.
        let t = DistanceRegime::Standard.trapezoid();
        let double = minkowski_sum(&t, &t);
        assert!(double.contains(Offset::new(2, 0)));
    }
}
