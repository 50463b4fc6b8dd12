//! Command-line front end. Parses group specs and input files, dispatches
//! to the library, and prints deterministic JSON on standard output: keys
//! sorted, floats at 12 significant digits, identical bytes for identical
//! (argv, seed) pairs. Exit codes: 0 on success, 2 on any usage or
//! validation error (with a `{"detail": …, "error": tag}` object), and 1
//! from `verify` when a criterion fails.
//!
//! A group spec is either the mini-language (`C6`, `D4`, `S3xC2`, `Q8`,
//! `K4`) or `@path` naming a Cayley-table file: first line the order, then
//! one row of the table per line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgAction, Parser, Subcommand};
use num_complex::Complex64;

use crate::bundle::{
    check_transformation_rules, classify_over_orbit, roundtrip_bundle_isomorphic, seeded_bundle,
    EquivariantBundle, GammaSet,
};
use crate::character::{
    centralizer_type, character_table, decompose_character, enumerate_rep_types, CharacterTable,
};
use crate::cohomology::{
    cocycle_of_projective_rep, h2_with_mu_n, is_coboundary, omega_regular_classes,
    schur_multiplier, twisted_irrep_dims, Cocycle2,
};
use crate::config::{rng_for, stream, Config};
use crate::error::{Error, Result};
use crate::family::{close_family, LocalRepPair};
use crate::group::{
    conjugacy_classes, enumerate_homs, groups_isomorphic, hom_orbits, make_group,
    parse_cayley_table, subgroups, GroupRef, Subgroup,
};
use crate::jsonout::Json;
use crate::matrix::ComplexMatrix;
use crate::report::{
    report_finite_g, report_pu_stable, report_s1, report_un, Atom, Component, GroupSignature,
    SpaceDescription,
};
use crate::reps::{conjugator, orbit_separation_check, sup_distance, UnitaryRep};
use crate::verify::{run_all, run_criterion, CriterionReport, CRITERION_COUNT};

#[derive(Parser)]
#[command(name = "equiclass", version, about = "Classification invariants of equivariant principal bundles at finite scale")]
struct Cli {
    /// Emit JSON (default); use --json=false for plain text.
    #[arg(
        long,
        global = true,
        default_value_t = true,
        default_missing_value = "true",
        require_equals = true,
        num_args = 0..=1,
        action = ArgAction::Set,
        value_name = "BOOL"
    )]
    json: bool,

    /// Seed for every randomized (but reproducible) routine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Reject input groups above this order.
    #[arg(long, global = true, env = "EQUICLASS_MAX_ORDER", value_name = "N")]
    max_order: Option<usize>,

    /// Residual tolerance for recovered conjugators.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,

    /// Truncation degree for Poincaré series (report --target un:<n>).
    #[arg(long, global = true, value_name = "D")]
    degree: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group from a spec and print its basic data.
    Group {
        spec: String,
        /// Include the multiplication table.
        #[arg(long)]
        table: bool,
        /// Include all subgroups as member lists.
        #[arg(long)]
        subgroups: bool,
        /// Include the conjugacy classes.
        #[arg(long)]
        classes: bool,
        /// Include the character table.
        #[arg(long)]
        characters: bool,
    },
    /// Enumerate homomorphisms H -> G for a subgroup H of Gamma.
    Homs {
        gamma: String,
        /// Spec of the subgroup shape to use as the source.
        h: String,
        g: String,
        /// Group the homomorphisms into conjugation orbits.
        #[arg(long)]
        orbits: bool,
    },
    /// Close a seeded set of local-representation pairs into a family.
    Family {
        gamma: String,
        g: String,
        /// Number of random seed pairs.
        #[arg(long, default_value_t = 2, value_name = "N")]
        pairs: usize,
    },
    /// Generate a seeded test bundle, or validate one from a file.
    Bundle {
        gamma: Option<String>,
        g: Option<String>,
        /// Read a serialized bundle instead of generating one.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Also check transformation laws and the set/bundle round trip.
        #[arg(long)]
        check: bool,
    },
    /// Count bundle classes over the orbit Gamma/H with structure group G.
    Classify {
        gamma: String,
        h: String,
        g: String,
    },
    /// Types of n-dimensional representations with centralizer types.
    Partitions {
        group: String,
        n: Option<usize>,
        /// Decompose a character given as per-class [re, im] values
        /// (inline JSON or @file) instead of enumerating.
        #[arg(long, value_name = "VALUES")]
        chi: Option<String>,
    },
    /// Recover a unitary conjugating one representation onto another.
    Conjugate {
        rep_a: PathBuf,
        rep_b: PathBuf,
        /// Group the two representation files are over.
        #[arg(long, value_name = "SPEC")]
        group: String,
        /// Instead sample this many conjugates and report the least
        /// distance between the orbits.
        #[arg(long, value_name = "SAMPLES")]
        separation: Option<usize>,
    },
    /// Invariant factors of the Schur multiplier.
    Schur { group: String },
    /// Twisted representation data for 2-cocycle classes.
    Twisted {
        group: String,
        /// A cocycle file {"modulus": n, "values": [[g, h, exponent], …]}.
        #[arg(long, value_name = "FILE")]
        cocycle: Option<PathBuf>,
        /// Unitary lifts (rep-file format); their cocycle is extracted.
        #[arg(long, value_name = "FILE", conflicts_with = "cocycle")]
        lifts: Option<PathBuf>,
    },
    /// Describe a fixed-point space of the classifying space.
    Report {
        /// One of finite:<spec>, un:<n>, s1, pu-stable.
        #[arg(long, value_name = "TARGET")]
        target: String,
        /// The isotropy group H.
        #[arg(long, value_name = "SPEC")]
        isotropy: String,
    },
    /// Run the acceptance checks (all, or a single one).
    Verify {
        /// Criterion index 1–15.
        #[arg(long, value_name = "K")]
        criterion: Option<usize>,
    },
}

pub fn run() -> ExitCode {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    let line = e
                        .to_string()
                        .lines()
                        .find(|l| !l.trim().is_empty())
                        .unwrap_or("bad arguments")
                        .trim_start_matches("error: ")
                        .to_string();
                    println!("{}", error_json(&Error::Usage(line)).render());
                    ExitCode::from(2)
                }
            };
        }
    };
    let mut config = Config::with_seed(cli.seed);
    if let Some(tol) = cli.tol {
        config.conjugation_tol = tol;
    }
    if let Command::Verify { criterion } = &cli.command {
        return run_verify(*criterion, cli.json, &config);
    }
    match dispatch(&cli, &config) {
        Ok(value) => {
            emit(cli.json, &value);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!("{}", error_json(&e).render());
            } else {
                println!("error ({}): {e}", e.tag());
            }
            ExitCode::from(2)
        }
    }
}

fn error_json(e: &Error) -> Json {
    Json::object(vec![
        ("detail", Json::Str(e.to_string())),
        ("error", Json::Str(e.tag().to_string())),
    ])
}

fn emit(json: bool, value: &Json) {
    if json {
        println!("{}", value.render());
        return;
    }
    match value {
        Json::Object(map) => {
            for (k, v) in map {
                println!("{k}: {}", v.render());
            }
        }
        other => println!("{}", other.render()),
    }
}

fn run_verify(criterion: Option<usize>, json: bool, config: &Config) -> ExitCode {
    let reports: Vec<CriterionReport> = match criterion {
        Some(k) if !(1..=CRITERION_COUNT).contains(&k) => {
            let e = Error::Usage(format!("criterion must be 1–{CRITERION_COUNT}, got {k}"));
            println!("{}", error_json(&e).render());
            return ExitCode::from(2);
        }
        Some(k) => vec![run_criterion(k, config)],
        None => run_all(config),
    };
    let failed = reports.iter().filter(|r| !r.passed).count();
    for r in &reports {
        if json {
            let line = Json::object(vec![
                ("criterion", Json::usize(r.index)),
                ("detail", Json::Str(r.detail.clone())),
                ("name", Json::Str(r.name.to_string())),
                ("passed", Json::Bool(r.passed)),
            ]);
            println!("{}", line.render());
        } else {
            let status = if r.passed { "pass" } else { "FAIL" };
            println!("criterion {:2} {status} {} — {}", r.index, r.name, r.detail);
        }
    }
    let summary = Json::object(vec![
        ("criteria", Json::usize(reports.len())),
        ("failed", Json::usize(failed)),
        ("passed", Json::usize(reports.len() - failed)),
    ]);
    emit(json, &summary);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dispatch(cli: &Cli, config: &Config) -> Result<Json> {
    match &cli.command {
        Command::Group {
            spec,
            table,
            subgroups: subs,
            classes,
            characters,
        } => cmd_group(spec, *table, *subs, *classes, *characters, cli, config),
        Command::Homs { gamma, h, g, orbits } => cmd_homs(gamma, h, g, *orbits, cli, config),
        Command::Family { gamma, g, pairs } => cmd_family(gamma, g, *pairs, cli, config),
        Command::Bundle {
            gamma,
            g,
            input,
            check,
        } => cmd_bundle(gamma.as_deref(), g.as_deref(), input.as_deref(), *check, cli, config),
        Command::Classify { gamma, h, g } => cmd_classify(gamma, h, g, cli, config),
        Command::Partitions { group, n, chi } => {
            cmd_partitions(group, *n, chi.as_deref(), cli, config)
        }
        Command::Conjugate {
            rep_a,
            rep_b,
            group,
            separation,
        } => cmd_conjugate(rep_a, rep_b, group, *separation, cli, config),
        Command::Schur { group } => cmd_schur(group, cli, config),
        Command::Twisted {
            group,
            cocycle,
            lifts,
        } => cmd_twisted(group, cocycle.as_deref(), lifts.as_deref(), cli, config),
        Command::Report { target, isotropy } => cmd_report(target, isotropy, cli, config),
        Command::Verify { .. } => unreachable!("verify is handled before dispatch"),
    }
}

/// Resolve a group spec: the mini-language, or `@path` for a Cayley-table
/// file. Enforces `--max-order` / `EQUICLASS_MAX_ORDER`.
fn load_group(spec: &str, cli: &Cli, config: &Config) -> Result<GroupRef> {
    let group = if let Some(path) = spec.strip_prefix('@') {
        let name = Path::new(path)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("table");
        parse_cayley_table(name, &fs::read_to_string(path)?, config)?
    } else {
        make_group(spec, config)?
    };
    if let Some(cap) = cli.max_order {
        if group.order() > cap {
            return Err(Error::OrderOverflow {
                what: format!("group {}", group.name()),
                limit: cap,
                actual: group.order(),
            });
        }
    }
    Ok(Arc::new(group))
}

/// First subgroup of `gamma` isomorphic to the group the spec names.
fn subgroup_matching(gamma: &GroupRef, spec: &str, cli: &Cli, config: &Config) -> Result<Subgroup> {
    let model = load_group(spec, cli, config)?;
    for sub in subgroups(gamma, config)? {
        if sub.order() == model.order() && groups_isomorphic(&Arc::new(sub.as_group()), &model) {
            return Ok(sub);
        }
    }
    Err(Error::Usage(format!(
        "{} has no subgroup isomorphic to {spec}",
        gamma.name()
    )))
}

fn rows_json(rows: &[Vec<usize>]) -> Json {
    Json::Array(rows.iter().map(|r| Json::usizes(r)).collect())
}

fn matrix_json(m: &ComplexMatrix) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array((0..m.cols()).map(|j| Json::complex(m[(i, j)])).collect()))
            .collect(),
    )
}

fn character_table_json(t: &CharacterTable) -> Json {
    Json::object(vec![
        ("classes", rows_json(t.classes())),
        ("dims", Json::usizes(t.dims())),
        (
            "values",
            Json::Array(
                t.chars()
                    .iter()
                    .map(|row| Json::Array(row.iter().map(|z| Json::complex(*z)).collect()))
                    .collect(),
            ),
        ),
    ])
}

fn cmd_group(
    spec: &str,
    table: bool,
    subs: bool,
    classes: bool,
    characters: bool,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    let g = load_group(spec, cli, config)?;
    let mut items = vec![
        ("name", Json::Str(g.name().to_string())),
        ("order", Json::usize(g.order())),
    ];
    if table {
        items.push(("table", rows_json(&g.table_rows())));
    }
    if subs {
        let list = subgroups(&g, config)?;
        items.push((
            "subgroups",
            Json::Array(list.iter().map(|s| Json::usizes(s.members())).collect()),
        ));
    }
    if classes {
        items.push(("conjugacy_classes", rows_json(&conjugacy_classes(&g))));
    }
    if characters {
        items.push(("character_table", character_table_json(&character_table(&g, config)?)));
    }
    Ok(Json::object(items))
}

fn cmd_homs(
    gamma_spec: &str,
    h_spec: &str,
    g_spec: &str,
    orbits: bool,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    let gamma = load_group(gamma_spec, cli, config)?;
    let g = load_group(g_spec, cli, config)?;
    let sub = subgroup_matching(&gamma, h_spec, cli, config)?;
    let mut items = vec![("source", Json::usizes(sub.members()))];
    if orbits {
        let list = hom_orbits(&sub, &g, config)?;
        items.push(("count", Json::usize(list.len())));
        items.push((
            "orbits",
            Json::Array(
                list.iter()
                    .map(|o| {
                        Json::object(vec![
                            ("images", Json::usizes(o.canonical.image_table())),
                            ("size", Json::usize(o.orbit_size)),
                            ("stabilizer_order", Json::usize(o.stabilizer.order())),
                        ])
                    })
                    .collect(),
            ),
        ));
    } else {
        let list = enumerate_homs(&sub, &g, config)?;
        items.push(("count", Json::usize(list.len())));
        items.push((
            "images",
            Json::Array(list.iter().map(|p| Json::usizes(p.image_table())).collect()),
        ));
    }
    Ok(Json::object(items))
}

fn cmd_family(
    gamma_spec: &str,
    g_spec: &str,
    pairs: usize,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    if pairs == 0 {
        return Err(Error::Usage("--pairs must be at least 1".into()));
    }
    let gamma = load_group(gamma_spec, cli, config)?;
    let g = load_group(g_spec, cli, config)?;
    let mut rng = rng_for(config.seed, stream::FAMILY);
    let subs = subgroups(&gamma, config)?;
    let mut seed: Vec<LocalRepPair> = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        use rand::Rng;
        let sub = &subs[rng.random_range(0..subs.len())];
        let homs = enumerate_homs(sub, &g, config)?;
        seed.push(homs[rng.random_range(0..homs.len())].clone());
    }
    let family = close_family(gamma.clone(), g.clone(), &seed, config)?;
    Ok(Json::object(vec![
        ("closed", Json::Bool(family.is_closed())),
        ("count", Json::usize(family.len())),
        ("g_spec", Json::Str(g.name().to_string())),
        ("gamma_spec", Json::Str(gamma.name().to_string())),
        (
            "pairs",
            Json::Array(
                family
                    .pairs()
                    .iter()
                    .map(|p| {
                        Json::object(vec![
                            ("hom", Json::usizes(p.image_table())),
                            ("subgroup", Json::usizes(p.source().members())),
                        ])
                    })
                    .collect(),
            ),
        ),
    ]))
}

fn bundle_json(p: &EquivariantBundle) -> Json {
    Json::object(vec![
        ("base_action", rows_json(&p.base().rows())),
        ("g_spec", Json::Str(p.g().name().to_string())),
        ("gamma_spec", Json::Str(p.gamma().name().to_string())),
        ("projection", Json::usizes(p.proj_table())),
        ("total_g_action", rows_json(&p.g_rows())),
        ("total_gamma_action", rows_json(&p.gamma_rows())),
    ])
}

fn cmd_bundle(
    gamma_spec: Option<&str>,
    g_spec: Option<&str>,
    input: Option<&Path>,
    check: bool,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    match (gamma_spec, g_spec, input) {
        (Some(gamma_spec), Some(g_spec), None) => {
            let gamma = load_group(gamma_spec, cli, config)?;
            let g = load_group(g_spec, cli, config)?;
            let mut rng = rng_for(config.seed, stream::BUNDLE);
            let p = seeded_bundle(&gamma, &g, &mut rng, config)?;
            if check {
                check_transformation_rules(&p)?;
            }
            Ok(bundle_json(&p))
        }
        (None, None, Some(path)) => {
            let p = parse_bundle_file(path, cli, config)?;
            let mut items = vec![
                ("base_points", Json::usize(p.base().size())),
                ("total_points", Json::usize(p.total_size())),
                ("valid", Json::Bool(true)),
            ];
            if check {
                check_transformation_rules(&p)?;
                items.push((
                    "roundtrip",
                    Json::Bool(roundtrip_bundle_isomorphic(&p, config)?),
                ));
            }
            Ok(Json::object(items))
        }
        _ => Err(Error::Usage(
            "give GAMMA and G to generate a bundle, or --input FILE to validate one".into(),
        )),
    }
}

fn cmd_classify(
    gamma_spec: &str,
    h_spec: &str,
    g_spec: &str,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    let gamma = load_group(gamma_spec, cli, config)?;
    let g = load_group(g_spec, cli, config)?;
    let h = subgroup_matching(&gamma, h_spec, cli, config)?;
    let classes = classify_over_orbit(&h, &g, config)?;
    Ok(Json::object(vec![("classes", Json::usize(classes.len()))]))
}

fn cmd_partitions(
    group_spec: &str,
    n: Option<usize>,
    chi: Option<&str>,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    let g = load_group(group_spec, cli, config)?;
    let table = character_table(&g, config)?;
    if let Some(chi) = chi {
        let text = if let Some(path) = chi.strip_prefix('@') {
            fs::read_to_string(path)?
        } else {
            chi.to_string()
        };
        let values = parse_complex_list(&serde_json::from_str(&text)?)?;
        let t = decompose_character(&values, &table, config)?;
        return Ok(Json::object(vec![
            ("centralizer", Json::usizes(&centralizer_type(&t))),
            ("mults", Json::usizes(&t.mults)),
        ]));
    }
    let n = n.ok_or_else(|| Error::Usage("give a dimension, or --chi to decompose".into()))?;
    let types = enumerate_rep_types(&table, n);
    Ok(Json::object(vec![
        ("count", Json::usize(types.len())),
        ("dims", Json::usizes(table.dims())),
        (
            "types",
            Json::Array(
                types
                    .iter()
                    .map(|t| {
                        Json::object(vec![
                            ("centralizer", Json::usizes(&centralizer_type(t))),
                            ("mults", Json::usizes(&t.mults)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ]))
}

fn cmd_conjugate(
    rep_a: &Path,
    rep_b: &Path,
    group_spec: &str,
    separation: Option<usize>,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    let g = load_group(group_spec, cli, config)?;
    let alpha = UnitaryRep::new(g.clone(), parse_rep_file(rep_a)?, config)?;
    let beta = UnitaryRep::new(g.clone(), parse_rep_file(rep_b)?, config)?;
    if let Some(samples) = separation {
        let d = orbit_separation_check(&alpha, &beta, samples, config)?;
        return Ok(Json::object(vec![
            ("bound", Json::Float(1.0 / g.order() as f64)),
            ("min_distance", Json::Float(d)),
            ("samples", Json::usize(samples)),
        ]));
    }
    let sigma = conjugator(&alpha, &beta, config)?;
    let residual = sup_distance(&alpha.conjugated(&sigma), &beta, config)?;
    Ok(Json::object(vec![
        ("residual", Json::Float(residual)),
        ("sigma", matrix_json(&sigma)),
    ]))
}

fn cmd_schur(group_spec: &str, cli: &Cli, config: &Config) -> Result<Json> {
    let g = load_group(group_spec, cli, config)?;
    let m = schur_multiplier(&g, config)?;
    Ok(Json::object(vec![(
        "invariant_factors",
        Json::usizes(&m.invariant_factors),
    )]))
}

/// Twisted data of a single cocycle: split dimensions, regular classes and
/// triviality.
fn cocycle_json(omega: &Cocycle2, config: &Config) -> Result<Vec<(&'static str, Json)>> {
    Ok(vec![
        ("dims", Json::usizes(&twisted_irrep_dims(omega, config)?)),
        ("modulus", Json::usize(omega.modulus())),
        (
            "regular_classes",
            Json::usize(omega_regular_classes(omega).len()),
        ),
        ("trivial", Json::Bool(is_coboundary(omega, config)?)),
    ])
}

fn cmd_twisted(
    group_spec: &str,
    cocycle: Option<&Path>,
    lifts: Option<&Path>,
    cli: &Cli,
    config: &Config,
) -> Result<Json> {
    let g = load_group(group_spec, cli, config)?;
    if let Some(path) = cocycle {
        let omega = parse_cocycle_file(&g, path)?;
        return Ok(Json::object(cocycle_json(&omega, config)?));
    }
    if let Some(path) = lifts {
        let omega = cocycle_of_projective_rep(&g, &parse_rep_file(path)?, config)?;
        let n = g.order();
        let sparse: Vec<Json> = (0..n * n)
            .filter(|i| omega.values()[*i] != 0)
            .map(|i| Json::usizes(&[i / n, i % n, omega.values()[i]]))
            .collect();
        let mut items = cocycle_json(&omega, config)?;
        items.push(("values", Json::Array(sparse)));
        return Ok(Json::object(items));
    }
    let h2 = h2_with_mu_n(&g, config)?;
    let classes = h2
        .all_classes()
        .into_iter()
        .map(|omega| {
            Ok(Json::object(vec![
                (
                    "dims",
                    Json::usizes(&twisted_irrep_dims(&omega, config)?),
                ),
                (
                    "regular_classes",
                    Json::usize(omega_regular_classes(&omega).len()),
                ),
            ]))
        })
        .collect::<Result<Vec<Json>>>()?;
    Ok(Json::object(vec![
        ("count", Json::usize(h2.order())),
        ("classes", Json::Array(classes)),
        ("invariant_factors", Json::usizes(&h2.invariant_factors)),
        ("modulus", Json::usize(h2.modulus())),
    ]))
}

fn signature_json(s: &GroupSignature) -> Json {
    let (rank, factors): (usize, &[usize]) = match s {
        GroupSignature::Trivial => (0, &[]),
        GroupSignature::FreeAbelian(r) => (*r, &[]),
        GroupSignature::FiniteAbelian(f) => (0, f),
    };
    Json::object(vec![
        ("free_rank", Json::usize(rank)),
        ("invariant_factors", Json::usizes(factors)),
    ])
}

fn atom_json(a: &Atom) -> Json {
    match a {
        Atom::BU(m) => Json::object(vec![
            ("kind", Json::Str("BU".to_string())),
            ("rank", Json::usize(*m)),
        ]),
        Atom::KZ2 => Json::object(vec![("kind", Json::Str("KZ2".to_string()))]),
        Atom::BFinite {
            label,
            order,
            abelianization,
        } => Json::object(vec![
            ("abelianization", Json::usizes(abelianization)),
            ("kind", Json::Str("BFinite".to_string())),
            ("label", Json::Str(label.clone())),
            ("order", Json::usize(*order)),
        ]),
        Atom::Opaque { homotopy } => Json::object(vec![
            (
                "homotopy",
                Json::Array(
                    homotopy
                        .iter()
                        .map(|(k, s)| {
                            Json::object(vec![
                                ("degree", Json::usize(*k)),
                                ("group", signature_json(s)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("kind", Json::Str("opaque".to_string())),
        ]),
    }
}

fn component_json(c: &Component) -> Json {
    let mut items = vec![("atoms", Json::Array(c.atoms.iter().map(atom_json).collect()))];
    if let Some(p) = &c.poincare {
        items.push(("poincare", Json::usizes(&p.coefficients)));
    }
    if let Some(t) = &c.rep_type {
        items.push(("rep_type", Json::usizes(t)));
    }
    Json::object(items)
}

fn space_json(d: &SpaceDescription) -> Json {
    Json::object(vec![
        (
            "components",
            Json::Array(d.components.iter().map(component_json).collect()),
        ),
        ("count", Json::usize(d.component_count())),
    ])
}

fn cmd_report(target: &str, isotropy: &str, cli: &Cli, config: &Config) -> Result<Json> {
    let h = load_group(isotropy, cli, config)?;
    let description = if let Some(spec) = target.strip_prefix("finite:") {
        let g = load_group(spec, cli, config)?;
        report_finite_g(&h, &g, None, config)?
    } else if let Some(n) = target.strip_prefix("un:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Usage(format!("bad dimension in target `{target}`")))?;
        let degree = cli.degree.unwrap_or(config.degree_default);
        report_un(&h, n, degree, config)?
    } else if target == "s1" {
        report_s1(&h)
    } else if target == "pu-stable" {
        report_pu_stable(&h, config)?
    } else {
        return Err(Error::Usage(format!(
            "unknown target `{target}`; use finite:<spec>, un:<n>, s1 or pu-stable"
        )));
    };
    Ok(space_json(&description))
}

// ---------------------------------------------------------------- file input

fn read_json_file(path: &Path) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn field<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value> {
    v.get(key)
        .ok_or_else(|| Error::Usage(format!("missing key `{key}`")))
}

fn as_usize(v: &serde_json::Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Usage(format!("{what} must be a nonnegative integer")))
}

fn usize_row(v: &serde_json::Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| Error::Usage(format!("{what} must be an array")))?
        .iter()
        .map(|x| as_usize(x, what))
        .collect()
}

fn usize_rows(v: &serde_json::Value, what: &str) -> Result<Vec<Vec<usize>>> {
    v.as_array()
        .ok_or_else(|| Error::Usage(format!("{what} must be an array of rows")))?
        .iter()
        .map(|row| usize_row(row, what))
        .collect()
}

/// A complex entry: `[re, im]`, or a bare real number.
fn parse_complex(v: &serde_json::Value) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Usage("complex entries must be [re, im] pairs".into()))?;
    match (pair[0].as_f64(), pair[1].as_f64()) {
        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
        _ => Err(Error::Usage("complex entries must be [re, im] pairs".into())),
    }
}

fn parse_complex_list(v: &serde_json::Value) -> Result<Vec<Complex64>> {
    v.as_array()
        .ok_or_else(|| Error::Usage("expected an array of complex values".into()))?
        .iter()
        .map(parse_complex)
        .collect()
}

/// One matrix: a row-major array of complex entries of square length.
fn parse_matrix(v: &serde_json::Value) -> Result<ComplexMatrix> {
    let entries = parse_complex_list(v)?;
    let d = (entries.len() as f64).sqrt().round() as usize;
    if d * d != entries.len() {
        return Err(Error::Usage(format!(
            "matrix has {} entries, not a square count",
            entries.len()
        )));
    }
    ComplexMatrix::new(d, d, entries)
}

/// Rep file: a JSON array with one row-major matrix per group element.
fn parse_rep_file(path: &Path) -> Result<Vec<ComplexMatrix>> {
    read_json_file(path)?
        .as_array()
        .ok_or_else(|| Error::Usage("rep file must be a JSON array of matrices".into()))?
        .iter()
        .map(parse_matrix)
        .collect()
}

/// Cocycle file: {"modulus": n, "values": [[g, h, exponent], …]}.
fn parse_cocycle_file(group: &GroupRef, path: &Path) -> Result<Cocycle2> {
    let v = read_json_file(path)?;
    let modulus = as_usize(field(&v, "modulus")?, "modulus")?;
    let mut entries = Vec::new();
    for row in usize_rows(field(&v, "values")?, "values")? {
        let [g, h, e] = row[..] else {
            return Err(Error::Usage(
                "cocycle values must be [g, h, exponent] triples".into(),
            ));
        };
        entries.push((g, h, e));
    }
    Cocycle2::from_sparse(group.clone(), modulus, &entries)
}

/// Bundle file: the serialization `bundle` emits.
fn parse_bundle_file(path: &Path, cli: &Cli, config: &Config) -> Result<EquivariantBundle> {
    let v = read_json_file(path)?;
    let gamma = load_group(
        field(&v, "gamma_spec")?
            .as_str()
            .ok_or_else(|| Error::Usage("gamma_spec must be a string".into()))?,
        cli,
        config,
    )?;
    let g = load_group(
        field(&v, "g_spec")?
            .as_str()
            .ok_or_else(|| Error::Usage("g_spec must be a string".into()))?,
        cli,
        config,
    )?;
    let base_rows = usize_rows(field(&v, "base_action")?, "base_action")?;
    let gamma_rows = usize_rows(field(&v, "total_gamma_action")?, "total_gamma_action")?;
    let g_rows = usize_rows(field(&v, "total_g_action")?, "total_g_action")?;
    let proj = usize_row(field(&v, "projection")?, "projection")?;
    let base_size = base_rows.first().map_or(0, |r| r.len());
    let flatten = |rows: &[Vec<usize>], rows_expected: usize, what: &str| -> Result<Vec<usize>> {
        if rows.len() != rows_expected {
            return Err(Error::Usage(format!(
                "{what} must have one row per group element"
            )));
        }
        Ok(rows.iter().flatten().copied().collect())
    };
    let base = GammaSet::new(
        gamma.clone(),
        base_size,
        flatten(&base_rows, gamma.order(), "base_action")?,
    )?;
    EquivariantBundle::new(
        gamma.clone(),
        g.clone(),
        proj.len(),
        flatten(&gamma_rows, gamma.order(), "total_gamma_action")?,
        flatten(&g_rows, g.order(), "total_g_action")?,
        base,
        proj,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_entries_parse_both_shapes() {
        let v: serde_json::Value = serde_json::from_str("[[1.0, -2.0], 3, [0, 0.5]]").unwrap();
        let list = parse_complex_list(&v).unwrap();
        assert_eq!(list[0], Complex64::new(1.0, -2.0));
        assert_eq!(list[1], Complex64::new(3.0, 0.0));
        assert_eq!(list[2], Complex64::new(0.0, 0.5));
    }

    #[test]
    fn matrices_must_be_square() {
        let v: serde_json::Value = serde_json::from_str("[[1,0],[0,0],[0,0]]").unwrap();
        assert!(matches!(parse_matrix(&v), Err(Error::Usage(_))));
        let v: serde_json::Value =
            serde_json::from_str("[[1,0],[0,0],[0,0],[1,0]]").unwrap();
        let m = parse_matrix(&v).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
    }

    #[test]
    fn group_spec_with_at_reads_a_table_file() {
        let dir = std::env::temp_dir().join("equiclass-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("k4.txt");
        fs::write(&path, "4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
        let cli = Cli::try_parse_from(["equiclass", "group", "X"]).unwrap();
        let config = Config::default();
        let g = load_group(&format!("@{}", path.display()), &cli, &config).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.name(), "k4");
    }

    #[test]
    fn max_order_rejects_large_groups() {
        let cli =
            Cli::try_parse_from(["equiclass", "--max-order", "4", "group", "S3"]).unwrap();
        let config = Config::default();
        assert!(matches!(
            load_group("S3", &cli, &config),
            Err(Error::OrderOverflow { .. })
        ));
        assert!(load_group("C4", &cli, &config).is_ok());
    }
}
