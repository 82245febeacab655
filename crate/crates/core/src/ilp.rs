//! The integer linear program for maximum profiled seating: binary
//! placement variables `y_{r,s,t,v}`, integer count variables `n_t`,
//! per-cell safety rows, seat-reuse rows across shows, profile rows,
//! L-triple clique cuts, and lexicographic show-symmetry-breaking rows.
//! Models are emitted in the common LP text format, byte-deterministically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num::rational::Rational64;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::arrangement::{counts, SeatingPlan, TargetProfile};
use crate::geometry::DistanceRegime;
use crate::layout::{seats_plus, Seat, Theatre};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("allowed family sizes must be nonempty")]
    EmptySizes,
    #[error("family size 0 is not allowed")]
    SizeZero,
    #[error("need at least one show")]
    ZeroShows,
    #[error("profile covers sizes {profile:?} but the model allows {sizes:?}")]
    ProfileSizesMismatch {
        profile: Vec<usize>,
        sizes: Vec<usize>,
    },
}

/// A binary placement variable: family of `size` at `(r, s)` in show `show`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct YVar {
    pub show: usize,
    pub r: i32,
    pub s: i32,
    pub size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRef {
    /// Index into the model's `y` variable list.
    Y(usize),
    /// Index into the model's size list (the `n_t` variables).
    N(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarRef, Rational64)>,
    pub sense: Sense,
    pub rhs: Rational64,
}

impl Constraint {
    pub fn evaluate(&self, y: &[Rational64], n: &[Rational64]) -> Rational64 {
        self.terms
            .iter()
            .map(|&(var, coeff)| {
                coeff
                    * match var {
                        VarRef::Y(i) => y[i],
                        VarRef::N(i) => n[i],
                    }
            })
            .sum()
    }

    pub fn satisfied(&self, y: &[Rational64], n: &[Rational64]) -> bool {
        let lhs = self.evaluate(y, n);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// The materialized model. Variables and rows are fixed in a deterministic
/// order: `y` by (show, row, seat, size), rows by class then position.
#[derive(Debug, Clone)]
pub struct IlpModel {
    y: Vec<YVar>,
    y_index: BTreeMap<YVar, usize>,
    sizes: Vec<usize>,
    objective: Vec<(VarRef, Rational64)>,
    constraints: Vec<Constraint>,
    shows: usize,
    regime: DistanceRegime,
}

impl IlpModel {
    pub fn y_vars(&self) -> &[YVar] {
        &self.y
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn shows(&self) -> usize {
        self.shows
    }

    pub fn regime(&self) -> DistanceRegime {
        self.regime
    }

    pub fn y_index(&self, var: YVar) -> Option<usize> {
        self.y_index.get(&var).copied()
    }

    /// 0/1 y-vector and count vector for a plan, if every placement has a
    /// variable in this model.
    pub fn assignment_from_plan(
        &self,
        plan: &SeatingPlan,
    ) -> Option<(Vec<Rational64>, Vec<Rational64>)> {
        let mut y = vec![Rational64::zero(); self.y.len()];
        for p in plan.placements() {
            let idx = self.y_index(YVar {
                show: p.show,
                r: p.r,
                s: p.s,
                size: p.size,
            })?;
            y[idx] = Rational64::one();
        }
        let tally = counts(plan);
        let n = self
            .sizes
            .iter()
            .map(|&t| Rational64::from_integer(tally.get(t) as i64))
            .collect();
        Some((y, n))
    }

    /// The plan whose placements are the support of a 0/1 y-vector.
    pub fn plan_from_assignment(&self, y: &[Rational64]) -> SeatingPlan {
        let placements = self
            .y
            .iter()
            .zip(y)
            .filter(|(_, v)| !v.is_zero())
            .map(|(var, _)| crate::arrangement::Placement::new(var.show, var.r, var.s, var.size));
        SeatingPlan::new(placements, self.shows).unwrap()
    }

    fn push(&mut self, name: String, terms: Vec<(VarRef, Rational64)>, sense: Sense, rhs: i64) {
        self.constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs: Rational64::from_integer(rhs),
        });
    }
}

fn coord_token(v: i32) -> String {
    if v < 0 {
        format!("m{}", -(v as i64))
    } else {
        v.to_string()
    }
}

pub fn y_name(var: &YVar) -> String {
    format!(
        "y_r{}_s{}_t{}_v{}",
        coord_token(var.r),
        coord_token(var.s),
        var.size,
        var.show
    )
}

pub fn n_name(size: usize) -> String {
    format!("n_t{size}")
}

/// Builds the base model: objective `sum t n_t`, one safety row per cell of
/// `S+T` per show, one seat-reuse row per seat when there are two or more
/// shows, count rows tying `n_t` to the placements, and the two profile
/// rows per size.
pub fn build_model(
    theatre: &Theatre,
    sizes: &BTreeSet<usize>,
    profile: &TargetProfile,
    shows: usize,
    regime: DistanceRegime,
) -> Result<IlpModel, ModelError> {
    if sizes.is_empty() {
        return Err(ModelError::EmptySizes);
    }
    if sizes.contains(&0) {
        return Err(ModelError::SizeZero);
    }
    if shows == 0 {
        return Err(ModelError::ZeroShows);
    }
    if profile.sizes() != *sizes {
        return Err(ModelError::ProfileSizesMismatch {
            profile: profile.sizes().into_iter().collect(),
            sizes: sizes.iter().copied().collect(),
        });
    }

    let trapezoid = regime.trapezoid();
    let size_list: Vec<usize> = sizes.iter().copied().collect();
    let size_pos: BTreeMap<usize, usize> =
        size_list.iter().enumerate().map(|(i, &t)| (t, i)).collect();

    let mut y: Vec<YVar> = Vec::new();
    for show in 1..=shows {
        for &seat in theatre.seats() {
            for &t in &size_list {
                let fits = (0..t as i32).all(|i| theatre.contains(Seat::new(seat.r, seat.s + i)));
                if fits {
                    y.push(YVar {
                        show,
                        r: seat.r,
                        s: seat.s,
                        size: t,
                    });
                }
            }
        }
    }
    // Seats iterate in (r, s) order and sizes ascend, so y is already
    // sorted; sort anyway to pin the (show, r, s, size) order.
    y.sort();
    let y_index: BTreeMap<YVar, usize> = y.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut model = IlpModel {
        objective: size_list
            .iter()
            .enumerate()
            .map(|(i, &t)| (VarRef::N(i), Rational64::from_integer(t as i64)))
            .collect(),
        y,
        y_index,
        sizes: size_list.clone(),
        constraints: Vec::new(),
        shows,
        regime,
    };

    // Which placements cover each lattice cell / occupy each seat.
    let mut covers: BTreeMap<(usize, Seat), Vec<usize>> = BTreeMap::new();
    let mut occupies: BTreeMap<Seat, Vec<usize>> = BTreeMap::new();
    for (idx, var) in model.y.iter().enumerate() {
        let placement = crate::arrangement::Placement::new(var.show, var.r, var.s, var.size);
        for cell in placement.zone(&trapezoid) {
            covers.entry((var.show, cell)).or_default().push(idx);
        }
        for seat in placement.seats() {
            occupies.entry(seat).or_default().push(idx);
        }
    }

    let cells = seats_plus(theatre.seats(), &trapezoid);
    for show in 1..=shows {
        for &cell in &cells {
            let terms = covers
                .get(&(show, cell))
                .map(|idxs| {
                    idxs.iter()
                        .map(|&i| (VarRef::Y(i), Rational64::one()))
                        .collect()
                })
                .unwrap_or_default();
            model.push(
                format!(
                    "safe_v{}_r{}_s{}",
                    show,
                    coord_token(cell.r),
                    coord_token(cell.s)
                ),
                terms,
                Sense::Le,
                1,
            );
        }
    }

    if shows >= 2 {
        for &seat in theatre.seats() {
            let terms = occupies
                .get(&seat)
                .map(|idxs| {
                    idxs.iter()
                        .map(|&i| (VarRef::Y(i), Rational64::one()))
                        .collect()
                })
                .unwrap_or_default();
            model.push(
                format!("reuse_r{}_s{}", coord_token(seat.r), coord_token(seat.s)),
                terms,
                Sense::Le,
                1,
            );
        }
    }

    for (pos, &t) in size_list.iter().enumerate() {
        let mut terms: Vec<(VarRef, Rational64)> = model
            .y
            .iter()
            .enumerate()
            .filter(|(_, var)| var.size == t)
            .map(|(i, _)| (VarRef::Y(i), Rational64::one()))
            .collect();
        terms.push((VarRef::N(pos), -Rational64::one()));
        model.push(format!("count_t{t}"), terms, Sense::Eq, 0);
    }

    // (p_t - eps) sum(n) - n_t <= 0 and n_t - (p_t + eps) sum(n) <= 0,
    // with the n_t coefficient folded in. Kept as stated even when
    // p_t - eps < 0 (the row is then vacuous for nonnegative n).
    for &t in &size_list {
        let lo = profile.fraction(t) - profile.epsilon();
        let terms = size_list
            .iter()
            .map(|&u| {
                let coeff = if u == t { lo - Rational64::one() } else { lo };
                (VarRef::N(size_pos[&u]), coeff)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        model.push(format!("proflo_t{t}"), terms, Sense::Le, 0);
    }
    for &t in &size_list {
        let hi = profile.fraction(t) + profile.epsilon();
        let terms = size_list
            .iter()
            .map(|&u| {
                let coeff = if u == t { Rational64::one() - hi } else { -hi };
                (VarRef::N(size_pos[&u]), coeff)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        model.push(format!("profhi_t{t}"), terms, Sense::Le, 0);
    }

    Ok(model)
}

/// Appends one clique cut per show and per L-triple
/// `X = {(r,s), (r+1,s-1), (r+1,s)}` inside `S`: among the placements whose
/// trapezoid covers at least two cells of `X`, at most one can be chosen.
/// Any two such trapezoids would overlap within the three cells, so every
/// safe integral plan satisfies the cut while fractional covers need not.
/// The sum ranges over placements of every allowed size.
pub fn add_clique_cuts(model: &mut IlpModel, theatre: &Theatre) {
    let trapezoid = model.regime.trapezoid();
    let mut zones: Vec<BTreeSet<Seat>> = Vec::with_capacity(model.y.len());
    for var in &model.y {
        let placement = crate::arrangement::Placement::new(var.show, var.r, var.s, var.size);
        zones.push(placement.zone(&trapezoid));
    }
    let mut rows = Vec::new();
    for show in 1..=model.shows {
        for &anchor in theatre.seats() {
            let x = [
                anchor,
                Seat::new(anchor.r + 1, anchor.s - 1),
                Seat::new(anchor.r + 1, anchor.s),
            ];
            if !x.iter().all(|&seat| theatre.contains(seat)) {
                continue;
            }
            let terms: Vec<(VarRef, Rational64)> = model
                .y
                .iter()
                .enumerate()
                .filter(|(i, var)| {
                    var.show == show
                        && x.iter().filter(|seat| zones[*i].contains(seat)).count() >= 2
                })
                .map(|(i, _)| (VarRef::Y(i), Rational64::one()))
                .collect();
            rows.push((
                format!(
                    "cut_v{}_r{}_s{}",
                    show,
                    coord_token(anchor.r),
                    coord_token(anchor.s)
                ),
                terms,
            ));
        }
    }
    for (name, terms) in rows {
        model.push(name, terms, Sense::Le, 1);
    }
}

/// Appends the per-segment show-relabeling rows: a family may start at seat
/// `(r', s')` in show `v'` only if every earlier show already starts a
/// family at some lexicographically earlier seat of the same segment.
/// No-op for single-show models; rows with an empty left side are skipped.
pub fn add_symmetry_breaking(model: &mut IlpModel, theatre: &Theatre) {
    if model.shows < 2 {
        return;
    }
    let mut rows = Vec::new();
    for segment in theatre.segments() {
        for v in 1..model.shows {
            for &anchor in &segment.seats {
                for v_later in (v + 1)..=model.shows {
                    let mut terms: Vec<(VarRef, Rational64)> = Vec::new();
                    for (i, var) in model.y.iter().enumerate() {
                        if var.show == v_later && var.r == anchor.r && var.s == anchor.s {
                            terms.push((VarRef::Y(i), Rational64::one()));
                        }
                    }
                    if terms.is_empty() {
                        continue;
                    }
                    for (i, var) in model.y.iter().enumerate() {
                        let seat = Seat::new(var.r, var.s);
                        if var.show == v && seat < anchor && segment.seats.contains(&seat) {
                            terms.push((VarRef::Y(i), -Rational64::one()));
                        }
                    }
                    rows.push((
                        format!(
                            "sym_{}_v{}_r{}_s{}_vv{}",
                            segment.name,
                            v,
                            coord_token(anchor.r),
                            coord_token(anchor.s),
                            v_later
                        ),
                        terms,
                    ));
                }
            }
        }
    }
    for (name, terms) in rows {
        model.push(name, terms, Sense::Le, 0);
    }
}

/// Plan-level form of the symmetry-breaking rows, used by the solver to
/// compare optima with and without them.
pub fn satisfies_lex_rows(plan: &SeatingPlan, theatre: &Theatre) -> bool {
    for segment in theatre.segments() {
        let mut starts: BTreeMap<usize, BTreeSet<Seat>> = BTreeMap::new();
        for p in plan.placements() {
            let seat = Seat::new(p.r, p.s);
            if segment.seats.contains(&seat) {
                starts.entry(p.show).or_default().insert(seat);
            }
        }
        for (&v_later, later_starts) in &starts {
            for &anchor in later_starts {
                for v in 1..v_later {
                    let ok = starts
                        .get(&v)
                        .map(|s| s.range(..anchor).next().is_some())
                        .unwrap_or(false);
                    if !ok {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn format_coeff(c: Rational64) -> String {
    if c.denom() == &1 {
        return c.numer().to_string();
    }
    let text = crate::arrangement::format_ratio(c);
    if text.contains('/') {
        // Non-terminating decimal: fall back to the shortest round-trip
        // float form for the LP text; the in-memory model stays exact.
        let approx = *c.numer() as f64 / *c.denom() as f64;
        format!("{approx}")
    } else {
        text
    }
}

fn write_terms(out: &mut String, terms: &[(VarRef, Rational64)], model: &IlpModel) {
    for (pos, &(var, coeff)) in terms.iter().enumerate() {
        let name = match var {
            VarRef::Y(i) => y_name(&model.y[i]),
            VarRef::N(i) => n_name(model.sizes[i]),
        };
        let magnitude = format_coeff(coeff.abs());
        if pos == 0 {
            if coeff.is_negative() {
                write!(out, "- {magnitude} {name}").unwrap();
            } else {
                write!(out, "{magnitude} {name}").unwrap();
            }
        } else if coeff.is_negative() {
            write!(out, " - {magnitude} {name}").unwrap();
        } else {
            write!(out, " + {magnitude} {name}").unwrap();
        }
    }
}

/// Renders the model as LP-format text: `Maximize`, `Subject To`, `Bounds`,
/// `Generals` (the `n_t`), `Binaries` (the `y`), `End`. Rows with no terms
/// (cells no placement can cover) are vacuous and not written. Output is
/// byte-deterministic for a given model.
pub fn emit_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("Maximize\n obj: ");
    write_terms(&mut out, &model.objective, model);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        if c.terms.is_empty() {
            continue;
        }
        write!(out, " {}: ", c.name).unwrap();
        write_terms(&mut out, &c.terms, model);
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(out, " {} {}", sense, format_coeff(c.rhs)).unwrap();
    }
    out.push_str("Bounds\n");
    for &t in &model.sizes {
        writeln!(out, " 0 <= {}", n_name(t)).unwrap();
    }
    out.push_str("Generals\n");
    for &t in &model.sizes {
        writeln!(out, " {}", n_name(t)).unwrap();
    }
    out.push_str("Binaries\n");
    for var in &model.y {
        writeln!(out, " {}", y_name(var)).unwrap();
    }
    out.push_str("End\n");
    out
}
