//! Exact solvers for maximum profiled seating.
//!
//! `solve_exact` runs depth-first branch-and-bound over candidate
//! placements in lexicographic (show, row, seat, size) order with
//! include/exclude branching. The pruning bound charges every future
//! family its full trapezoid against the cells of `S+T` that are still
//! coverable, so excluding candidates tightens the bound as cells run out
//! of potential coverers. The incumbent is seeded by profile-quota greedy
//! fills, plain and diagonal-lattice-primed. `brute_force` is the
//! independent oracle: plain exhaustive enumeration of feasible placement
//! subsets with no bounding at all.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num::rational::Rational64;
use thiserror::Error;

use crate::arrangement::{
    counts, is_arrangement, is_safe_trapezoids, multi_show_valid, profile_satisfied, Placement,
    SeatingPlan, TargetProfile,
};
use crate::geometry::DistanceRegime;
use crate::ilp::satisfies_lex_rows;
use crate::layout::{seats_plus, Seat, Theatre};

/// Instances with more per-show placements than this are refused by the
/// brute-force oracle.
pub const BRUTE_FORCE_PLACEMENT_LIMIT: usize = 40;

pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("allowed family sizes must be nonempty")]
    EmptySizes,
    #[error("family size 0 is not allowed")]
    SizeZero,
    #[error("need at least one show")]
    ZeroShows,
    #[error("profile does not cover the allowed sizes with fractions summing to 1")]
    ProfileMismatch,
    #[error("limits must be positive")]
    BadLimits,
    #[error("instance too large for brute force: {candidates} placements (limit {limit})")]
    InstanceTooLarge { candidates: usize, limit: usize },
    #[error("alternating mode supports 1 or 2 shows, got {0}")]
    AlternatingShows(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The returned objective is the exact maximum.
    Optimal,
    /// A limit was hit; the plan is feasible but possibly not maximal.
    FeasibleOnly,
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub sizes: BTreeSet<usize>,
    pub profile: TargetProfile,
    pub shows: usize,
    pub regime: DistanceRegime,
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    /// Accept only plans satisfying the lexicographic show-relabeling rows.
    pub lex_symmetry: bool,
    /// Swap which row parity serves show 1 in alternating mode.
    pub flip_parity: bool,
}

impl SolveConfig {
    pub fn new(profile: TargetProfile, shows: usize) -> Self {
        SolveConfig {
            sizes: profile.sizes(),
            profile,
            shows,
            regime: DistanceRegime::Standard,
            node_limit: DEFAULT_NODE_LIMIT,
            time_limit: None,
            lex_symmetry: false,
            flip_parity: false,
        }
    }

    fn validate(&self) -> Result<TargetProfile, SolveError> {
        if self.sizes.is_empty() {
            return Err(SolveError::EmptySizes);
        }
        if self.sizes.contains(&0) {
            return Err(SolveError::SizeZero);
        }
        if self.shows == 0 {
            return Err(SolveError::ZeroShows);
        }
        if self.node_limit == 0 || self.time_limit == Some(Duration::ZERO) {
            return Err(SolveError::BadLimits);
        }
        self.profile
            .restricted_to(&self.sizes)
            .map_err(|_| SolveError::ProfileMismatch)
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub plan: SeatingPlan,
    /// Persons seated, `sum t * n_t`.
    pub objective: u64,
    pub status: SolveStatus,
    pub nodes: u64,
}

#[derive(Clone)]
struct Candidate {
    show: usize,
    r: i32,
    s: i32,
    size: usize,
    size_pos: usize,
    /// Per-show cell ids of the family trapezoid within `S+T`.
    cells: Vec<u32>,
    /// Seat ids of the occupied run (shared across shows).
    seats: Vec<u32>,
}

impl Candidate {
    fn placement(&self) -> Placement {
        Placement::new(self.show, self.r, self.s, self.size)
    }
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    #[inline]
    fn get(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: u32) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }
    #[inline]
    fn clear(&mut self, i: u32) {
        self.0[(i / 64) as usize] &= !(1 << (i % 64));
    }
}

/// Candidate placements in lexicographic (show, row, seat, size) order,
/// optionally restricted to one row parity per show.
fn build_candidates(
    theatre: &Theatre,
    sizes: &BTreeSet<usize>,
    shows: usize,
    regime: DistanceRegime,
    alternating: Option<bool>, // Some(flip) restricts rows per show
) -> (Vec<Candidate>, usize, usize) {
    let trapezoid = regime.trapezoid();
    let cells: Vec<Seat> = seats_plus(theatre.seats(), &trapezoid)
        .into_iter()
        .collect();
    let cell_id: BTreeMap<Seat, u32> = cells
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i as u32))
        .collect();
    let seat_id: BTreeMap<Seat, u32> = theatre
        .seats()
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i as u32))
        .collect();
    let size_list: Vec<usize> = sizes.iter().copied().collect();
    let num_cells = cells.len();

    let mut out = Vec::new();
    for show in 1..=shows {
        for &seat in theatre.seats() {
            if let Some(flip) = alternating {
                // Show 1 uses even canonical rows (house-odd rows), show 2
                // the odd ones; `flip` swaps the parities.
                let want_even = (show == 1) != flip;
                if (seat.r.rem_euclid(2) == 0) != want_even {
                    continue;
                }
            }
            for (size_pos, &t) in size_list.iter().enumerate() {
                if !(0..t as i32).all(|i| theatre.contains(Seat::new(seat.r, seat.s + i))) {
                    continue;
                }
                let placement = Placement::new(show, seat.r, seat.s, t);
                let base = (show - 1) * num_cells;
                let cells: Vec<u32> = placement
                    .zone(&trapezoid)
                    .into_iter()
                    .map(|c| base as u32 + cell_id[&c])
                    .collect();
                let seats: Vec<u32> = placement.seats().map(|s| seat_id[&s]).collect();
                out.push(Candidate {
                    show,
                    r: seat.r,
                    s: seat.s,
                    size: t,
                    size_pos,
                    cells,
                    seats,
                });
            }
        }
    }
    (out, num_cells, theatre.seat_count())
}

struct Search<'a> {
    cands: Vec<Candidate>,
    /// Cells whose last potential coverer is the given candidate index.
    expiry_at: Vec<Vec<u32>>,
    num_cells: usize,
    shows: usize,
    covered: Bits,
    occupied: Bits,
    budgets: Vec<i64>,
    size_list: Vec<usize>,
    counts: Vec<i64>,
    persons: u64,
    chosen: Vec<u32>,
    expired_trail: Vec<u32>,

    // Profile rows in integer form: lo_num/den <= n_t/N <= hi_num/den.
    lo_num: Vec<i64>,
    lo_den: Vec<i64>,
    hi_num: Vec<i64>,
    hi_den: Vec<i64>,
    min_trap_cells: i64,
    dens_num: i64,
    dens_den: i64,

    best_value: u64,
    best_plan: Vec<u32>,
    best_from_search: bool,

    node_limit: u64,
    deadline: Option<Instant>,
    nodes: u64,
    aborted: bool,

    lex_filter: bool,
    theatre: &'a Theatre,
}

impl<'a> Search<'a> {
    fn new(
        theatre: &'a Theatre,
        cands: Vec<Candidate>,
        num_cells: usize,
        num_seats: usize,
        config: &SolveConfig,
        profile: &TargetProfile,
    ) -> Search<'a> {
        let size_list: Vec<usize> = config.sizes.iter().copied().collect();
        let shows = config.shows;

        // Budget per show: cells some candidate can still cover.
        let mut last_coverer: BTreeMap<u32, usize> = BTreeMap::new();
        for (idx, cand) in cands.iter().enumerate() {
            for &cell in &cand.cells {
                last_coverer.insert(cell, idx);
            }
        }
        let mut budgets = vec![0i64; shows];
        let mut expiry_at = vec![Vec::new(); cands.len()];
        for (&cell, &idx) in &last_coverer {
            budgets[cell as usize / num_cells.max(1)] += 1;
            expiry_at[idx].push(cell);
        }

        let mut lo_num = Vec::new();
        let mut lo_den = Vec::new();
        let mut hi_num = Vec::new();
        let mut hi_den = Vec::new();
        for &t in &size_list {
            let lo = profile.fraction(t) - profile.epsilon();
            let hi = profile.fraction(t) + profile.epsilon();
            lo_num.push(*lo.numer());
            lo_den.push(*lo.denom());
            hi_num.push(*hi.numer());
            hi_den.push(*hi.denom());
        }
        let min_trap_cells = size_list
            .iter()
            .map(|&t| config.regime.family_trapezoid_cells(t) as i64)
            .min()
            .unwrap();
        // Best persons-per-trapezoid-cell ratio over the allowed sizes;
        // the ratio increases with t, so the largest size attains it.
        let t_max = *size_list.last().unwrap();
        let dens_num = t_max as i64;
        let dens_den = config.regime.family_trapezoid_cells(t_max) as i64;

        Search {
            expiry_at,
            num_cells,
            shows,
            covered: Bits::new(num_cells * shows),
            occupied: Bits::new(num_seats),
            budgets,
            counts: vec![0; size_list.len()],
            size_list,
            persons: 0,
            chosen: Vec::new(),
            expired_trail: Vec::new(),
            lo_num,
            lo_den,
            hi_num,
            hi_den,
            min_trap_cells,
            dens_num,
            dens_den,
            best_value: 0,
            best_plan: Vec::new(),
            best_from_search: false,
            node_limit: config.node_limit,
            deadline: config.time_limit.map(|d| Instant::now() + d),
            nodes: 0,
            aborted: false,
            lex_filter: config.lex_symmetry,
            theatre,
            cands,
        }
    }

    fn plan_from(&self, chosen: &[u32]) -> SeatingPlan {
        SeatingPlan::new(
            chosen.iter().map(|&i| self.cands[i as usize].placement()),
            self.shows,
        )
        .unwrap()
    }

    fn counts_satisfy_profile(&self) -> bool {
        let n_total: i64 = self.counts.iter().sum();
        for i in 0..self.size_list.len() {
            let n = self.counts[i];
            if n * self.lo_den[i] < self.lo_num[i] * n_total {
                return false;
            }
            if n * self.hi_den[i] > self.hi_num[i] * n_total {
                return false;
            }
        }
        true
    }

    fn try_incumbent(&mut self) {
        let improves = self.persons > self.best_value
            || (self.persons == self.best_value && !self.best_from_search);
        if !improves || !self.counts_satisfy_profile() {
            return;
        }
        if self.lex_filter && !satisfies_lex_rows(&self.plan_from(&self.chosen), self.theatre) {
            return;
        }
        self.best_value = self.persons;
        self.best_plan = self.chosen.clone();
        self.best_from_search = true;
    }

    fn bound(&self) -> u64 {
        let mut total = self.persons as i64;
        for &b in &self.budgets {
            total += b * self.dens_num / self.dens_den;
        }
        total as u64
    }

    /// Conservative projection of the upper profile rows: if even with the
    /// cheapest possible filler families the most violated row cannot be
    /// repaired within the remaining trapezoid budget, no completion is
    /// profile-feasible.
    fn profile_hopeless(&self) -> bool {
        let n_total: i64 = self.counts.iter().sum();
        let mut need = 0i64;
        for i in 0..self.size_list.len() {
            let excess = self.counts[i] * self.hi_den[i] - self.hi_num[i] * n_total;
            if excess > 0 {
                // smallest M with n*den <= num*(N+M)
                let m = (excess + self.hi_num[i] - 1) / self.hi_num[i].max(1);
                need = need.max(m);
            }
        }
        if need == 0 {
            return false;
        }
        let budget: i64 = self.budgets.iter().sum();
        need * self.min_trap_cells > budget
    }

    fn compatible(&self, idx: usize) -> bool {
        let cand = &self.cands[idx];
        cand.cells.iter().all(|&c| !self.covered.get(c))
            && cand.seats.iter().all(|&s| !self.occupied.get(s))
    }

    fn apply(&mut self, idx: usize) {
        let cand = &self.cands[idx];
        let show = cand.show - 1;
        for &c in &cand.cells {
            self.covered.set(c);
        }
        self.budgets[show] -= cand.cells.len() as i64;
        for &s in &cand.seats {
            self.occupied.set(s);
        }
        self.counts[cand.size_pos] += 1;
        self.persons += cand.size as u64;
        self.chosen.push(idx as u32);
    }

    fn unapply(&mut self, idx: usize) {
        let cand = &self.cands[idx];
        let show = cand.show - 1;
        for &c in &cand.cells {
            self.covered.clear(c);
        }
        self.budgets[show] += cand.cells.len() as i64;
        for &s in &cand.seats {
            self.occupied.clear(s);
        }
        self.counts[cand.size_pos] -= 1;
        self.persons -= cand.size as u64;
        self.chosen.pop();
    }

    /// Retires cells whose last potential coverer is `idx` and that are
    /// still uncovered. Returns the trail length to rewind to.
    fn expire(&mut self, idx: usize) -> usize {
        let mark = self.expired_trail.len();
        for k in 0..self.expiry_at[idx].len() {
            let cell = self.expiry_at[idx][k];
            if !self.covered.get(cell) {
                self.budgets[cell as usize / self.num_cells] -= 1;
                self.expired_trail.push(cell);
            }
        }
        mark
    }

    fn unexpire(&mut self, mark: usize) {
        while self.expired_trail.len() > mark {
            let cell = self.expired_trail.pop().unwrap();
            self.budgets[cell as usize / self.num_cells] += 1;
        }
    }

    fn dfs(&mut self, idx: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes >= self.node_limit {
            self.aborted = true;
            return;
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(4096) && Instant::now() >= deadline {
                self.aborted = true;
                return;
            }
        }
        self.try_incumbent();
        if idx == self.cands.len() {
            return;
        }
        let needed = if self.best_from_search {
            self.best_value + 1
        } else {
            self.best_value
        };
        if self.bound() < needed || self.profile_hopeless() {
            return;
        }

        if self.compatible(idx) {
            self.apply(idx);
            let mark = self.expire(idx);
            self.dfs(idx + 1);
            self.unexpire(mark);
            self.unapply(idx);
        }
        if self.aborted {
            return;
        }
        let mark = self.expire(idx);
        self.dfs(idx + 1);
        self.unexpire(mark);
    }

    /// One pass over the positions accepted by `admit`, placing at each the
    /// size furthest below its target share that fits, is safe, and either
    /// stays under quota or keeps its upper profile row satisfied (tight
    /// profiles are infeasible at small family counts, so the quota clause
    /// lets the sweep pass through those states).
    fn sweep(
        &mut self,
        profile: &TargetProfile,
        by_position: &BTreeMap<(usize, i32, i32), Vec<usize>>,
        admit: &dyn Fn(usize, i32, i32) -> bool,
        placed: &mut Vec<u32>,
    ) {
        for (&(show, r, s), idxs) in by_position {
            if !admit(show, r, s) {
                continue;
            }
            let n_total: i64 = self.counts.iter().sum();
            let mut best: Option<(Rational64, usize, usize)> = None;
            for &idx in idxs {
                if !self.compatible(idx) {
                    continue;
                }
                let cand = &self.cands[idx];
                let i = cand.size_pos;
                let deficit = profile.fraction(cand.size) * Rational64::from_integer(n_total + 1)
                    - Rational64::from_integer(self.counts[i]);
                let upper_ok =
                    (self.counts[i] + 1) * self.hi_den[i] <= self.hi_num[i] * (n_total + 1);
                if deficit <= Rational64::from_integer(0) && !upper_ok {
                    continue;
                }
                let key = (deficit, cand.size, idx);
                if best.is_none_or(|(d, t, _)| (key.0, key.1) > (d, t)) {
                    best = Some(key);
                }
            }
            if let Some((_, _, idx)) = best {
                self.apply(idx);
                placed.push(idx as u32);
            }
        }
    }

    /// Greedy fill: deterministic variants, keeping whichever seats the
    /// most people after trimming to a profile-valid prefix.
    ///
    /// The plain variant sweeps every position; left-packed rows tend to
    /// block their neighbors completely, which caps the density near the
    /// alternating-row ceiling. The primed variants therefore start on a
    /// diagonal lattice of one family size (base seats with
    /// `r + 2s = c_v mod 2t+3`), whose trapezoids tile the lattice; each
    /// show gets its own coset (`c_v = c + 2t(v-1)`), so consecutive shows
    /// occupy disjoint seat classes and stack to nearly twice the
    /// single-show fill. Every size with positive target share and every
    /// base coset is tried. Follow-up unrestricted sweeps fill the
    /// leftovers in all variants.
    fn greedy(&mut self, profile: &TargetProfile) -> Vec<u32> {
        let mut by_position: BTreeMap<(usize, i32, i32), Vec<usize>> = BTreeMap::new();
        for (idx, cand) in self.cands.iter().enumerate() {
            by_position
                .entry((cand.show, cand.r, cand.s))
                .or_default()
                .push(idx);
        }

        let mut variants: Vec<Option<(usize, i64)>> = vec![None];
        for &t in &self.size_list {
            if profile.fraction(t) > Rational64::from_integer(0) {
                for coset in 0..(2 * t as i64 + 3) {
                    variants.push(Some((t, coset)));
                }
            }
        }

        let mut best_seed: Vec<u32> = Vec::new();
        let mut best_persons = 0u64;
        for variant in variants {
            let mut placed: Vec<u32> = Vec::new();
            if let Some((t, base_coset)) = variant {
                let modulus = 2 * t as i64 + 3;
                let on_lattice = move |show: usize, r: i32, s: i32| -> bool {
                    let coset = (base_coset + 2 * t as i64 * (show as i64 - 1)).rem_euclid(modulus);
                    (r as i64 + 2 * s as i64).rem_euclid(modulus) == coset
                };
                self.sweep(profile, &by_position, &on_lattice, &mut placed);
            }
            loop {
                let before = placed.len();
                self.sweep(profile, &by_position, &|_, _, _| true, &mut placed);
                if placed.len() == before {
                    break;
                }
            }
            // Longest prefix whose counts satisfy the full profile.
            let mut best_len = 0;
            {
                let mut counts = vec![0i64; self.size_list.len()];
                let prefix_ok = |counts: &[i64]| {
                    let n_total: i64 = counts.iter().sum();
                    (0..self.size_list.len()).all(|i| {
                        counts[i] * self.lo_den[i] >= self.lo_num[i] * n_total
                            && counts[i] * self.hi_den[i] <= self.hi_num[i] * n_total
                    })
                };
                for (k, &idx) in placed.iter().enumerate() {
                    counts[self.cands[idx as usize].size_pos] += 1;
                    if prefix_ok(&counts) {
                        best_len = k + 1;
                    }
                }
            }
            for &idx in placed.iter().rev() {
                self.unapply(idx as usize);
            }
            let seed = &placed[..best_len];
            let persons: u64 = seed
                .iter()
                .map(|&i| self.cands[i as usize].size as u64)
                .sum();
            // Ties keep the plain variant, which runs first.
            if persons > best_persons {
                best_persons = persons;
                best_seed = seed.to_vec();
            }
        }
        best_seed.sort();
        best_seed
    }

    fn seed_value(&self, seed: &[u32]) -> u64 {
        seed.iter()
            .map(|&i| self.cands[i as usize].size as u64)
            .sum()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n > 4 {
        return vec![(1..=n).collect()];
    }
    let mut perms = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in perms {
            for v in 1..=n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    perms
}

fn run_search(
    theatre: &Theatre,
    config: &SolveConfig,
    alternating: Option<bool>,
) -> Result<SolveResult, SolveError> {
    let profile = config.validate()?;
    let (cands, num_cells, num_seats) = build_candidates(
        theatre,
        &config.sizes,
        config.shows,
        config.regime,
        alternating,
    );
    let mut search = Search::new(theatre, cands, num_cells, num_seats, config, &profile);

    let seed = search.greedy(&profile);
    let mut seed_ok = !seed.is_empty();
    let mut seed_plan_indices = seed.clone();
    if seed_ok && config.lex_symmetry {
        // The greedy fill need not satisfy the relabeling rows; try the
        // show permutations of it and keep the first that does.
        let index_of: BTreeMap<(usize, i32, i32, usize), u32> = search
            .cands
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.show, c.r, c.s, c.size), i as u32))
            .collect();
        seed_ok = false;
        for perm in permutations(config.shows) {
            let plan = search.plan_from(&seed).permute_shows(&perm);
            if !satisfies_lex_rows(&plan, theatre) {
                continue;
            }
            let indices: Option<Vec<u32>> = plan
                .placements()
                .map(|p| index_of.get(&(p.show, p.r, p.s, p.size)).copied())
                .collect();
            if let Some(mut indices) = indices {
                indices.sort();
                seed_plan_indices = indices;
                seed_ok = true;
                break;
            }
        }
    }
    if seed_ok {
        search.best_value = search.seed_value(&seed_plan_indices);
        search.best_plan = seed_plan_indices;
        search.best_from_search = false;
    }

    search.dfs(0);

    let plan = search.plan_from(&search.best_plan);
    debug_assert!(is_arrangement(&plan, theatre));
    debug_assert!(is_safe_trapezoids(
        &plan,
        theatre,
        &config.regime.trapezoid()
    ));
    debug_assert!(multi_show_valid(&plan, theatre));
    debug_assert!(profile_satisfied(&counts(&plan), &profile));
    Ok(SolveResult {
        objective: search.best_value,
        status: if search.aborted {
            SolveStatus::FeasibleOnly
        } else {
            SolveStatus::Optimal
        },
        nodes: search.nodes,
        plan,
    })
}

/// Exact maximum profiled seating. Deterministic: among optimal plans the
/// lexicographically smallest placement sequence is returned; infeasible
/// profiles yield the empty plan with objective 0.
pub fn solve_exact(theatre: &Theatre, config: &SolveConfig) -> Result<SolveResult, SolveError> {
    run_search(theatre, config, None)
}

/// Restricted mode where every occupied row is sandwiched between empty
/// rows: show 1 uses even canonical rows, show 2 the odd ones (flip with
/// `config.flip_parity`).
pub fn solve_alternating(
    theatre: &Theatre,
    config: &SolveConfig,
) -> Result<SolveResult, SolveError> {
    if config.shows > 2 {
        return Err(SolveError::AlternatingShows(config.shows));
    }
    run_search(theatre, config, Some(config.flip_parity))
}

struct Brute<'a> {
    cands: Vec<Candidate>,
    covered: Vec<bool>,
    occupied: Vec<bool>,
    counts: Vec<i64>,
    persons: u64,
    chosen: Vec<u32>,
    shows: usize,
    nodes: u64,
    best_value: u64,
    best_plan: Vec<u32>,
    best_found: bool,
    profile: &'a TargetProfile,
    lex_filter: bool,
    theatre: &'a Theatre,
    size_list: Vec<usize>,
}

impl<'a> Brute<'a> {
    fn plan_from(&self, chosen: &[u32]) -> SeatingPlan {
        SeatingPlan::new(
            chosen.iter().map(|&i| self.cands[i as usize].placement()),
            self.shows,
        )
        .unwrap()
    }

    fn recurse(&mut self, start: usize) {
        self.nodes += 1;
        let improves = self.persons > self.best_value || !self.best_found;
        if improves {
            let tally = crate::arrangement::FamilyCounts::from_pairs(
                self.size_list
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| (t, self.counts[i] as u64)),
            );
            if profile_satisfied(&tally, self.profile)
                && (!self.lex_filter
                    || satisfies_lex_rows(&self.plan_from(&self.chosen), self.theatre))
            {
                self.best_value = self.persons;
                self.best_plan = self.chosen.clone();
                self.best_found = true;
            }
        }
        for idx in start..self.cands.len() {
            let ok = {
                let cand = &self.cands[idx];
                cand.cells.iter().all(|&c| !self.covered[c as usize])
                    && cand.seats.iter().all(|&s| !self.occupied[s as usize])
            };
            if !ok {
                continue;
            }
            {
                let cand = &self.cands[idx];
                for &c in &cand.cells {
                    self.covered[c as usize] = true;
                }
                for &s in &cand.seats {
                    self.occupied[s as usize] = true;
                }
                self.counts[cand.size_pos] += 1;
                self.persons += cand.size as u64;
                self.chosen.push(idx as u32);
            }
            self.recurse(idx + 1);
            {
                let cand = &self.cands[idx];
                for &c in &cand.cells {
                    self.covered[c as usize] = false;
                }
                for &s in &cand.seats {
                    self.occupied[s as usize] = false;
                }
                self.counts[cand.size_pos] -= 1;
                self.persons -= cand.size as u64;
                self.chosen.pop();
            }
        }
    }
}

/// Exhaustive enumeration of every feasible placement subset; the exact
/// optimum with no search shortcuts. Refuses instances with more than
/// [`BRUTE_FORCE_PLACEMENT_LIMIT`] per-show placements.
pub fn brute_force(theatre: &Theatre, config: &SolveConfig) -> Result<SolveResult, SolveError> {
    let profile = config.validate()?;
    let (cands, num_cells, num_seats) =
        build_candidates(theatre, &config.sizes, config.shows, config.regime, None);
    let per_show = cands.len() / config.shows;
    if per_show > BRUTE_FORCE_PLACEMENT_LIMIT {
        return Err(SolveError::InstanceTooLarge {
            candidates: per_show,
            limit: BRUTE_FORCE_PLACEMENT_LIMIT,
        });
    }
    let mut brute = Brute {
        covered: vec![false; num_cells * config.shows],
        occupied: vec![false; num_seats],
        counts: vec![0; config.sizes.len()],
        persons: 0,
        chosen: Vec::new(),
        shows: config.shows,
        nodes: 0,
        best_value: 0,
        best_plan: Vec::new(),
        best_found: false,
        profile: &profile,
        lex_filter: config.lex_symmetry,
        theatre,
        size_list: config.sizes.iter().copied().collect(),
        cands,
    };
    brute.recurse(0);
    let plan = brute.plan_from(&brute.best_plan);
    Ok(SolveResult {
        objective: brute.best_value,
        status: SolveStatus::Optimal,
        nodes: brute.nodes,
        plan,
    })
}
