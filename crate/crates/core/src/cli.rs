//! Command-line entry points: solve a layout, print bounds and density
//! tables, emit the LP model, render plans, and cross-check the exact
//! solver against the brute-force oracle.
//!
//! All commands print deterministically for fixed inputs. Exit codes:
//! 0 success (solve: proved optimal), 2 solve hit a limit (feasible only),
//! 3 oracle mismatch, 1 any error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::Rational64;

use crate::arrangement::{
    counts, density, format_ratio, is_arrangement, is_safe_trapezoids, multi_show_valid,
    parse_decimal, SeatingPlan, TargetProfile,
};
use crate::bounds::{
    alternating_density, format_rounded, hilbert_density, profile_density_bound, volume_rhs,
    volume_rhs_parts,
};
use crate::geometry::{DistanceRegime, GeometryParams};
use crate::ilp::{add_clique_cuts, add_symmetry_breaking, build_model, emit_lp};
use crate::layout::{parse_layout, virtual_rim, Theatre};
use crate::render::{classify, render_ascii, render_svg};
use crate::solver::{brute_force, solve_alternating, solve_exact, SolveConfig, SolveStatus};

#[derive(Parser)]
#[command(
    name = "seatpack",
    about = "Maximum-occupancy distance-safe theatre seating via trapezoid packing",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a maximum profiled seating plan for a layout.
    Solve(SolveArgs),
    /// Print seat, rim and capacity/density bounds.
    Bounds(BoundsArgs),
    /// Print the per-family-size density tables.
    Hilbert(HilbertArgs),
    /// Write the integer programming model in LP format.
    EmitLp(EmitLpArgs),
    /// Draw a stored plan as an ASCII or SVG seat map.
    Render(RenderArgs),
    /// Cross-check the exact solver against the brute-force oracle.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    /// Layout file.
    #[arg(long)]
    layout: PathBuf,
    /// Preset name (mge1..mge4) or profile file path.
    #[arg(long, default_value = "mge1")]
    profile: String,
    /// Override the profile tolerance (exact decimal, e.g. 0.02).
    #[arg(long)]
    epsilon: Option<String>,
    /// Number of consecutive shows.
    #[arg(long, default_value_t = 1)]
    shows: usize,
    /// Restrict occupied rows to alternate with empty rows.
    #[arg(long)]
    alternating: bool,
    /// Swap which row parity serves show 1 in alternating mode.
    #[arg(long)]
    flip_parity: bool,
    /// Safety distance in meters (1.5 or 1.0); default from the layout.
    #[arg(long)]
    distance: Option<String>,
    /// Check the returned plan against the clique-cut rows.
    #[arg(long)]
    cuts: bool,
    /// Accept only plans satisfying the show-relabeling rows.
    #[arg(long)]
    symbreak: bool,
    /// Search node limit.
    #[arg(long, default_value_t = crate::solver::DEFAULT_NODE_LIMIT)]
    node_limit: u64,
    /// Wall-clock limit in seconds (makes results run-dependent).
    #[arg(long)]
    time_limit: Option<u64>,
    /// Worker threads; execution is sequential and deterministic for any
    /// value.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the plan to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the plan.
    #[arg(long, value_enum)]
    render: Option<RenderFormat>,
    /// Render target file (defaults to stdout).
    #[arg(long)]
    render_out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Layout file.
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Seat count, for bound arithmetic without a layout.
    #[arg(long)]
    seats: Option<usize>,
    /// Rim size, for bound arithmetic without a layout.
    #[arg(long)]
    rim: Option<usize>,
    /// Preset name or profile file for the density bound.
    #[arg(long, default_value = "mge1")]
    profile: String,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    distance: Option<String>,
}

#[derive(Args)]
struct HilbertArgs {
    /// Safety distance in meters (1.5 or 1.0).
    #[arg(long, default_value = "1.5")]
    distance: String,
    /// Largest family size to tabulate.
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
}

#[derive(Args)]
struct EmitLpArgs {
    #[arg(long)]
    layout: PathBuf,
    #[arg(long, default_value = "mge1")]
    profile: String,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, default_value_t = 1)]
    shows: usize,
    /// Append the clique cuts.
    #[arg(long)]
    cuts: bool,
    /// Append the show-relabeling rows.
    #[arg(long)]
    symbreak: bool,
    #[arg(long)]
    distance: Option<String>,
    /// Output LP file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    layout: PathBuf,
    /// Plan file as written by `solve --out`.
    #[arg(long)]
    plan: PathBuf,
    #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
    format: RenderFormat,
    #[arg(long)]
    distance: Option<String>,
    /// Output file (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    layout: PathBuf,
    /// Comma-separated allowed family sizes.
    #[arg(long, default_value = "1,2")]
    sizes: String,
    #[arg(long, default_value_t = 1)]
    shows: usize,
    /// Tolerance for the uniform target profile used by both solvers.
    #[arg(long, default_value = "1")]
    epsilon: String,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Hilbert(args) => cmd_hilbert(args),
        Command::EmitLp(args) => cmd_emit_lp(args),
        Command::Render(args) => cmd_render(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            1
        }
    }
}

pub fn run_from_args() -> i32 {
    run(Cli::parse())
}

fn load_theatre(
    path: &Path,
    distance: &Option<String>,
) -> Result<(Theatre, DistanceRegime), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let mut theatre = parse_layout(&text)?;
    if let Some(d) = distance {
        let c: f64 = d
            .parse()
            .map_err(|_| Failure(format!("bad distance {d:?}")))?;
        let g = *theatre.geometry();
        theatre = theatre.with_geometry(GeometryParams::new(g.a, g.b, c)?);
    }
    let regime = DistanceRegime::resolve(theatre.geometry())?;
    Ok((theatre, regime))
}

fn load_profile(selector: &str, epsilon: &Option<String>) -> Result<TargetProfile, Failure> {
    let profile = match TargetProfile::preset(selector) {
        Some(p) => p,
        None => {
            let text = fs::read_to_string(selector)
                .map_err(|e| Failure(format!("profile {selector}: {e}")))?;
            TargetProfile::parse(&text)?
        }
    };
    match epsilon {
        Some(e) => Ok(profile.with_epsilon(parse_decimal(e)?)?),
        None => Ok(profile),
    }
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    if args.threads == 0 {
        return Err(Failure("--threads must be at least 1".to_string()));
    }
    let (theatre, regime) = load_theatre(&args.layout, &args.distance)?;
    let profile = load_profile(&args.profile, &args.epsilon)?;
    let mut config = SolveConfig::new(profile.clone(), args.shows);
    config.regime = regime;
    config.node_limit = args.node_limit;
    config.time_limit = args.time_limit.map(Duration::from_secs);
    config.lex_symmetry = args.symbreak;
    config.flip_parity = args.flip_parity;

    let result = if args.alternating {
        solve_alternating(&theatre, &config)?
    } else {
        solve_exact(&theatre, &config)?
    };

    let trapezoid = regime.trapezoid();
    let forbidden = regime.forbidden();
    let tally = counts(&result.plan);
    let d = density(&result.plan, &theatre);
    let rim = virtual_rim(&theatre, &trapezoid).len();
    let rhs = volume_rhs(&theatre, &trapezoid);
    let bound = profile_density_bound(&profile, &theatre, &trapezoid, regime);
    // The volume bound constrains each show's arrangement separately.
    let lhs_of_show = |v: usize| -> u64 {
        result
            .plan
            .placements()
            .filter(|p| p.show == v)
            .map(|p| regime.family_trapezoid_cells(p.size) as u64)
            .sum()
    };

    println!(
        "layout: {} (seats {}, segments {})",
        args.layout.display(),
        theatre.seat_count(),
        theatre.segments().len()
    );
    println!("distance: {regime}");
    println!(
        "profile: {} (epsilon {})",
        args.profile,
        format_ratio(profile.epsilon())
    );
    println!("shows: {}", args.shows);
    match result.status {
        SolveStatus::Optimal => println!("status: optimal"),
        SolveStatus::FeasibleOnly => println!("status: feasible-only (limit hit)"),
    }
    println!("nodes: {}", result.nodes);
    println!("objective: {} persons", result.objective);
    let count_parts: Vec<String> = config
        .sizes
        .iter()
        .map(|&t| format!("n_{t} = {}", tally.get(t)))
        .collect();
    println!("counts: {}", count_parts.join("  "));
    println!(
        "density: {} (raw {}/{})",
        format_rounded(d, 2),
        d.numer(),
        d.denom()
    );
    let balance: Vec<String> = (1..=args.shows)
        .map(|v| format!("show {v} = {}", result.plan.persons_in_show(v)))
        .collect();
    println!("show balance: {}", balance.join("  "));
    let sides: Vec<String> = (1..=args.shows)
        .map(|v| format!("show {v} = {} <= {rhs}", lhs_of_show(v)))
        .collect();
    println!(
        "volume bound: {} (seats {} + rim {rim})",
        sides.join("  "),
        theatre.seat_count()
    );
    println!(
        "density bound (declared profile, per show): {} (raw {})",
        format_rounded(bound, 2),
        format_ratio(bound)
    );

    if args.cuts {
        // Valid inequalities never cut off an integral safe plan; check the
        // returned plan against them as a self-audit.
        let mut model = build_model(
            &theatre,
            &config.sizes,
            &profile.restricted_to(&config.sizes)?,
            args.shows,
            regime,
        )?;
        add_clique_cuts(&mut model, &theatre);
        let (y, n) = model
            .assignment_from_plan(&result.plan)
            .ok_or_else(|| Failure("plan not representable in model".to_string()))?;
        let broken = model
            .constraints()
            .iter()
            .filter(|c| c.name.starts_with("cut_") && !c.satisfied(&y, &n))
            .count();
        println!(
            "clique cuts satisfied: {}",
            if broken == 0 { "yes" } else { "NO" }
        );
        if broken > 0 {
            return Err(Failure("plan violates a valid inequality".to_string()));
        }
    }

    if let Some(out) = &args.out {
        fs::write(out, result.plan.serialize())
            .map_err(|e| Failure(format!("{}: {e}", out.display())))?;
        println!("plan written to {}", out.display());
    }
    if let Some(format) = args.render {
        let states = classify(&theatre, &result.plan, &forbidden, &trapezoid);
        let rendered = match format {
            RenderFormat::Ascii => render_ascii(&states),
            RenderFormat::Svg => render_svg(&states, theatre.geometry()),
        };
        match &args.render_out {
            Some(path) => {
                fs::write(path, rendered)
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                println!("render written to {}", path.display());
            }
            None => print!("{rendered}"),
        }
    }

    Ok(match result.status {
        SolveStatus::Optimal => 0,
        SolveStatus::FeasibleOnly => 2,
    })
}

fn cmd_bounds(args: BoundsArgs) -> CmdResult {
    match (&args.layout, args.seats, args.rim) {
        (Some(path), None, None) => {
            let (theatre, regime) = load_theatre(path, &args.distance)?;
            let profile = load_profile(&args.profile, &args.epsilon)?;
            let trapezoid = regime.trapezoid();
            let rim = virtual_rim(&theatre, &trapezoid).len();
            let rhs = volume_rhs(&theatre, &trapezoid);
            println!("layout: {}", path.display());
            println!("distance: {regime}");
            println!("seats: {}", theatre.seat_count());
            println!("rim: {rim}");
            println!("seats+trapezoid: {rhs}");
            println!("volume bound rhs: {rhs}");
            let bound = profile_density_bound(&profile, &theatre, &trapezoid, regime);
            println!(
                "density bound ({}): {} (raw {})",
                args.profile,
                format_rounded(bound, 2),
                format_ratio(bound)
            );
            Ok(0)
        }
        (None, Some(seats), Some(rim)) => {
            let rhs = volume_rhs_parts(seats, rim);
            println!("seats: {seats}");
            println!("rim: {rim}");
            println!("volume bound rhs: {rhs} (seats {seats} + rim {rim})");
            Ok(0)
        }
        _ => Err(Failure(
            "pass either --layout or both --seats and --rim".to_string(),
        )),
    }
}

fn parse_regime(distance: &str) -> Result<DistanceRegime, Failure> {
    match distance {
        "1.5" => Ok(DistanceRegime::Standard),
        "1.0" | "1" => Ok(DistanceRegime::Short),
        other => Err(Failure(format!(
            "distance must be 1.5 or 1.0, got {other:?}"
        ))),
    }
}

fn cmd_hilbert(args: HilbertArgs) -> CmdResult {
    let regime = parse_regime(&args.distance)?;
    if args.max_size == 0 {
        return Err(Failure("--max-size must be at least 1".to_string()));
    }
    let rows: Vec<(usize, String, String, String, String, String)> = (1..=args.max_size)
        .map(|t| {
            let full = hilbert_density(t, regime);
            let alt = alternating_density(t, regime);
            let ratio = alt.ratio_to_full.unwrap() * Rational64::from_integer(100);
            (
                t,
                format_rounded(full.value, 2),
                format_rounded(full.reciprocal, 2),
                format_rounded(alt.value, 2),
                format_rounded(alt.reciprocal, 2),
                format!("{}%", format_rounded(ratio, 0)),
            )
        })
        .collect();
    match args.format {
        TableFormat::Csv => {
            println!("t,density,seats_per_person,alt_density,alt_seats_per_person,alt_ratio");
            for (t, d, i, da, ia, ratio) in rows {
                println!("{t},{d},{i},{da},{ia},{ratio}");
            }
        }
        TableFormat::Text => {
            println!("distance: {regime}");
            println!(
                "{:<4} {:<9} {:<10} {:<9} {:<10} {:<6}",
                "t", "d_t", "1/d_t", "d'_t", "1/d'_t", "d'/d"
            );
            for (t, d, i, da, ia, ratio) in rows {
                println!("{t:<4} {d:<9} {i:<10} {da:<9} {ia:<10} {ratio:<6}");
            }
        }
    }
    Ok(0)
}

fn cmd_emit_lp(args: EmitLpArgs) -> CmdResult {
    let (theatre, regime) = load_theatre(&args.layout, &args.distance)?;
    let profile = load_profile(&args.profile, &args.epsilon)?;
    let sizes = profile.sizes();
    let mut model = build_model(&theatre, &sizes, &profile, args.shows, regime)?;
    if args.cuts {
        add_clique_cuts(&mut model, &theatre);
    }
    if args.symbreak {
        add_symmetry_breaking(&mut model, &theatre);
    }
    let text = emit_lp(&model);
    fs::write(&args.out, &text).map_err(|e| Failure(format!("{}: {e}", args.out.display())))?;
    println!(
        "wrote {} variables ({} binary), {} rows to {}",
        model.y_vars().len() + model.sizes().len(),
        model.y_vars().len(),
        model.constraints().len(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_render(args: RenderArgs) -> CmdResult {
    let (theatre, regime) = load_theatre(&args.layout, &args.distance)?;
    let text = fs::read_to_string(&args.plan)
        .map_err(|e| Failure(format!("{}: {e}", args.plan.display())))?;
    let plan = SeatingPlan::parse(&text)?;
    let trapezoid = regime.trapezoid();
    let forbidden = regime.forbidden();
    if !is_arrangement(&plan, &theatre) {
        return Err(Failure("plan does not fit the layout".to_string()));
    }
    if !is_safe_trapezoids(&plan, &theatre, &trapezoid) {
        return Err(Failure("plan is not distance-safe".to_string()));
    }
    if !multi_show_valid(&plan, &theatre) {
        return Err(Failure("plan reuses a seat across shows".to_string()));
    }
    let states = classify(&theatre, &plan, &forbidden, &trapezoid);
    let rendered = match args.format {
        RenderFormat::Ascii => render_ascii(&states),
        RenderFormat::Svg => render_svg(&states, theatre.geometry()),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, rendered).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            println!("render written to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(0)
}

fn cmd_oracle(args: OracleArgs) -> CmdResult {
    let (theatre, regime) = load_theatre(&args.layout, &None)?;
    let mut sizes: BTreeSet<usize> = BTreeSet::new();
    for part in args.sizes.split(',') {
        let t: usize = part
            .trim()
            .parse()
            .map_err(|_| Failure(format!("bad size {part:?}")))?;
        sizes.insert(t);
    }
    let epsilon = parse_decimal(&args.epsilon)?;
    let profile = TargetProfile::uniform(&sizes, epsilon)?;
    let mut config = SolveConfig::new(profile, args.shows);
    config.regime = regime;

    let exact = solve_exact(&theatre, &config)?;
    let brute = brute_force(&theatre, &config)?;
    println!(
        "layout: {} sizes: {:?} shows: {} epsilon: {}",
        args.layout.display(),
        config.sizes.iter().collect::<Vec<_>>(),
        args.shows,
        format_ratio(epsilon)
    );
    println!(
        "exact: objective {} ({} nodes, {})",
        exact.objective,
        exact.nodes,
        match exact.status {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleOnly => "feasible-only",
        }
    );
    println!(
        "brute: objective {} ({} nodes)",
        brute.objective, brute.nodes
    );
    if exact.objective == brute.objective && exact.status == SolveStatus::Optimal {
        println!("MATCH");
        Ok(0)
    } else {
        println!("MISMATCH");
        Ok(3)
    }
}
