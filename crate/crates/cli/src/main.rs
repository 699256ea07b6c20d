//! Command-line front end: system construction, table printing,
//! verification suites, transversal search and JSON export.
//!
//! Exit codes: 0 for pass (including skips), 1 for a verification failure,
//! 2 for usage or parse errors.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use cosetcat::group::{Group, GroupSpec, Subgroup};
use cosetcat::report::{Outcome, Report};
use cosetcat::suites::run_suite;
use cosetcat::transversal::{
    build_coset_system, search_transversals, tables, tables_json, CosetSystem, TransversalFilter,
};
use cosetcat::{presets, Error};

#[derive(Parser)]
#[command(
    name = "cosetcat",
    about = "Coset-transversal algebra, tensor categories and the braided Hopf object, with exact verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dot, cocycle and cross-action tables of a system.
    Tables {
        #[command(flatten)]
        system: SystemArgs,
        /// Emit the tables as JSON instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite and report one line per check.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        /// One of: transversal, catC, H, double, catD, hopf, all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Worker threads for the parallel sweeps (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Cap on the largest exhaustive sweep (pairs in the coproduct
        /// consistency check); deterministic striding keeps within it.
        #[arg(long)]
        budget: Option<usize>,
        /// Object triple for the catD hexagon sweeps, e.g. `D,k,D`.
        #[arg(long, default_value = "D,D,D")]
        objects: String,
    },
    /// Enumerate transversals of a subgroup, filtered by structure flags.
    Search {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma list of required flags, each negatable with `!`, e.g.
        /// `contains_e,left_division,!tau_trivial`.
        #[arg(long, default_value = "")]
        require: String,
        /// Stop after this many matches.
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Stop after examining this many candidate transversals.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Export structure data as JSON: tables, H or D structure constants,
    /// the double's product table, or the braiding on D (x) D.
    Export {
        #[command(flatten)]
        system: SystemArgs,
        /// One of: tables, h, d, circ, psi.
        #[arg(long)]
        what: String,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Group: `symmetric:N`, `dihedral:N`, `perms:DEGREE:(cycles);(cycles)`,
    /// or inline JSON like `{"type":"symmetric","n":3}`.
    #[arg(long)]
    group: Option<String>,
    /// Subgroup: `gens:(12),(34)` or `stab:K` (1-based point).
    #[arg(long)]
    subgroup: Option<String>,
}

#[derive(Args)]
struct SystemArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Transversal as a comma list of cycle strings, e.g. `e,(13),(23)`.
    #[arg(long)]
    transversal: Option<String>,
    /// A built-in system: s3a, s3b, s3c, d6 or s5.
    #[arg(long)]
    preset: Option<String>,
    /// Import a system from a tables JSON file (as written by
    /// `export --what tables`), trusting its tables as given.
    #[arg(long)]
    import: Option<std::path::PathBuf>,
}

fn parse_group(text: &str) -> Result<Group, Error> {
    let text = text.trim();
    if text.starts_with('{') {
        let spec: GroupSpec = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("bad group JSON: {e}")))?;
        return spec.build();
    }
    if let Some(n) = text.strip_prefix("symmetric:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad symmetric degree {n:?}")))?;
        return Ok(Group::symmetric(n));
    }
    if let Some(n) = text.strip_prefix("dihedral:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad dihedral parameter {n:?}")))?;
        return Group::dihedral(n);
    }
    if let Some(rest) = text.strip_prefix("perms:") {
        let (degree, gens) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("expected perms:DEGREE:(cycles);...".into()))?;
        let degree: usize = degree
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree {degree:?}")))?;
        let gens: Result<Vec<_>, _> = gens
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| cosetcat::perm::Perm::parse(s, degree))
            .collect();
        return Group::closure(&gens?, degree);
    }
    Err(Error::Parse(format!(
        "unrecognised group spec {text:?}; expected symmetric:N, dihedral:N, perms:..., or JSON"
    )))
}

fn parse_subgroup(group: &Arc<Group>, text: &str) -> Result<Subgroup, Error> {
    let text = text.trim();
    if let Some(point) = text.strip_prefix("stab:") {
        let p: usize = point
            .parse()
            .map_err(|_| Error::Parse(format!("bad stabiliser point {point:?}")))?;
        if p == 0 || p > group.degree() {
            return Err(Error::Parse(format!(
                "stabiliser point {p} out of range 1..={}",
                group.degree()
            )));
        }
        return Ok(Subgroup::stabilizer(group, p - 1));
    }
    let gens_text = text.strip_prefix("gens:").unwrap_or(text);
    let mut gens = Vec::new();
    for tok in split_perm_list(gens_text) {
        gens.push(group.parse_elem(&tok)?);
    }
    Ok(Subgroup::generated(group, &gens))
}

/// Splits a comma list of cycle strings, keeping commas inside parentheses.
fn split_perm_list(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            ',' if depth == 0 => {
                if !current.trim().is_empty() {
                    out.push(current.trim().to_string());
                }
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

fn build_system(args: &SystemArgs) -> Result<CosetSystem, Error> {
    if let Some(path) = &args.import {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("read {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("bad JSON in {}: {e}", path.display())))?;
        return cosetcat::transversal::import_tables_json(&value);
    }
    if let Some(name) = &args.preset {
        return presets::by_name(name).ok_or_else(|| {
            Error::Parse(format!(
                "unknown preset {name:?}; expected one of {}",
                presets::PRESET_NAMES.join(", ")
            ))
        });
    }
    let group_text = args
        .group
        .group
        .as_deref()
        .ok_or_else(|| Error::Parse("need --preset or --group".into()))?;
    let group = Arc::new(parse_group(group_text)?);
    let subgroup_text = args
        .group
        .subgroup
        .as_deref()
        .ok_or_else(|| Error::Parse("need --subgroup with --group".into()))?;
    let g = parse_subgroup(&group, subgroup_text)?;
    let transversal_text = args
        .transversal
        .as_deref()
        .ok_or_else(|| Error::Parse("need --transversal with --group".into()))?;
    let mut m = Vec::new();
    for tok in split_perm_list(transversal_text) {
        m.push(group.parse_elem(&tok)?);
    }
    build_coset_system(&group, g, m)
}

fn render_aligned(title: &str, rows: &[String], cols: &[String], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = cols.iter().map(|c| c.len()).collect();
    for row in body {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    let row_w = rows.iter().map(|r| r.len()).max().unwrap_or(1);
    let mut out = format!("{title}:\n");
    out.push_str(&format!("{:row_w$} |", ""));
    for (j, c) in cols.iter().enumerate() {
        out.push_str(&format!(" {:>w$}", c, w = widths[j]));
    }
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        out.push_str(&format!("{:row_w$} |", r));
        for (j, cell) in body[i].iter().enumerate() {
            out.push_str(&format!(" {:>w$}", cell, w = widths[j]));
        }
        out.push('\n');
    }
    out
}

fn cmd_tables(system: &SystemArgs, json: bool) -> Result<(), Error> {
    let cs = build_system(system)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&tables_json(&cs)).unwrap()
        );
        return Ok(());
    }
    let t = tables(&cs);
    print!("{}", render_aligned("dot", &t.m, &t.m, &t.dot));
    println!();
    print!("{}", render_aligned("tau", &t.m, &t.m, &t.tau));
    println!();
    print!("{}", render_aligned("lact (s |> u)", &t.m, &t.g, &t.lact));
    println!();
    print!("{}", render_aligned("ract (s <| u)", &t.m, &t.g, &t.ract));
    Ok(())
}

fn report_exit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", report.render());
        let fails = report
            .checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Fail { .. }))
            .count();
        let skips = report
            .checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Skip { .. }))
            .count();
        println!(
            "{} checks, {} failed, {} skipped",
            report.checks.len(),
            fails,
            skips
        );
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn seed_from_env() -> u64 {
    std::env::var("TRANSVERSAL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20260809)
}

fn cmd_verify(
    system: &SystemArgs,
    suite: &str,
    json: bool,
    threads: Option<usize>,
    budget: Option<usize>,
    objects: &str,
) -> Result<ExitCode, Error> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    }
    let cs = build_system(system)?;
    let report = if suite == "catD" && objects != "D,D,D" {
        cosetcat::suites::suite_cat_d_with_objects(&cs, objects)?
    } else {
        run_suite(&cs, suite, budget, seed_from_env())?
    };
    Ok(report_exit(&report, json))
}

fn cmd_search(
    group_args: &GroupArgs,
    require: &str,
    limit: usize,
    budget: u64,
    json: bool,
) -> Result<(), Error> {
    let group_text = group_args
        .group
        .as_deref()
        .ok_or_else(|| Error::Parse("need --group".into()))?;
    let group = Arc::new(parse_group(group_text)?);
    let subgroup_text = group_args
        .subgroup
        .as_deref()
        .ok_or_else(|| Error::Parse("need --subgroup".into()))?;
    let g = parse_subgroup(&group, subgroup_text)?;
    let filter = TransversalFilter::parse(require)?;
    let outcome = search_transversals(&group, &g, &filter, limit, budget);
    if json {
        let lists: Vec<Vec<String>> = outcome
            .systems
            .iter()
            .map(|cs| (0..cs.m_len()).map(|s| cs.m_name(s)).collect())
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "transversals": lists,
                "examined": outcome.examined,
                "exhausted": outcome.exhausted,
            }))
            .unwrap()
        );
    } else {
        for cs in &outcome.systems {
            let names: Vec<String> = (0..cs.m_len()).map(|s| cs.m_name(s)).collect();
            println!("{}", names.join(","));
        }
        println!(
            "examined {} candidates{}",
            outcome.examined,
            if outcome.exhausted {
                ""
            } else {
                " (budget reached)"
            }
        );
    }
    Ok(())
}

fn cmd_export(
    system: &SystemArgs,
    what: &str,
    output: Option<&std::path::Path>,
) -> Result<(), Error> {
    let cs = build_system(system)?;
    let value = match what {
        "tables" => tables_json(&cs),
        "h" => {
            cosetcat::algebra::h_preconditions(&cs)?;
            let h = cosetcat::algebra::build_h(&cs).expect("preconditions checked");
            cosetcat::algebra::h_json(&cs, &h)
        }
        "d" => {
            let ds = cosetcat::double::build_double(&cs);
            let d = cosetcat::hopf::build_d(&ds)?;
            cosetcat::hopf::d_json(&ds, &d)
        }
        "circ" => cosetcat::double::build_double(&cs).circ_json(),
        "psi" => {
            let ds = cosetcat::double::build_double(&cs);
            let d = cosetcat::hopf::build_d(&ds)?;
            cosetcat::hopf::psi_json(&ds, &d)
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown export target {other:?}; expected tables, h, d, circ or psi"
            )))
        }
    };
    let text = serde_json::to_string_pretty(&value).unwrap();
    match output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Unsupported(format!("write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<ExitCode, Error> = match &cli.command {
        Command::Tables { system, json } => cmd_tables(system, *json).map(|()| ExitCode::SUCCESS),
        Command::Verify {
            system,
            suite,
            json,
            threads,
            budget,
            objects,
        } => cmd_verify(system, suite, *json, *threads, *budget, objects),
        Command::Search {
            group,
            require,
            limit,
            budget,
            json,
        } => cmd_search(group, require, *limit, *budget, *json).map(|()| ExitCode::SUCCESS),
        Command::Export {
            system,
            what,
            output,
        } => cmd_export(system, what, output.as_deref()).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
