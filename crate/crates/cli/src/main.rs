//! `rotsys`: verify, search, classify and exploit rotation systems of
//! complete graphs.
//!
//! Exit codes: 0 success or certified, 1 verification or certification
//! failure, 2 usage or input error, 3 internal invariant breach.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

use rotsys::bounds::{crossing_grid, known_range, render_table};
use rotsys::facetrace::faces_as_vertex_lists;
use rotsys::search::{complete_residual, run_search_with, CancelToken, PartialState, SearchError};
use rotsys::{
    best_insertion, classify, parse_rotation, plan_insertion, trace_faces, verify_embedding,
    DirectedEdge, FaceProfile, FaceWalk, InsertionPlan, RotationFile, RotationSystem, SearchConfig,
    Vertex,
};

const FAILED: u8 = 1;

#[derive(Parser)]
#[command(
    name = "rotsys",
    version,
    about = "Rotation systems of complete graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a rotation system against an expected genus and face profile.
    Verify {
        /// Text or JSON rotation file, `-` for stdin.
        file: PathBuf,
        #[arg(long)]
        genus: Option<i64>,
        /// Face sizes and counts, e.g. `3:22,6:1`.
        #[arg(long)]
        profile: Option<FaceProfile>,
        /// Include the face list in the report.
        #[arg(long)]
        faces: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the faces of a rotation system.
    Trace {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Complete rows 1-6 to every hexagon-plus-triangles embedding.
    Complete {
        file: PathBuf,
        /// Vertex count; must agree with the file when given.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate embeddings of K_n whose faces are one hexagon and triangles.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        genus: i64,
        /// Worker threads; 0 uses every core.
        #[arg(long, env = "ROTSYS_JOBS", default_value_t = 0)]
        jobs: usize,
        /// Stop after this many sequences.
        #[arg(long)]
        limit: Option<usize>,
        /// Write one text file per sequence plus summary.json here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Group rotation systems into isomorphism classes.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Only orientation-preserving isomorphisms.
        #[arg(long)]
        no_reflection: bool,
        #[arg(long)]
        json: bool,
    },
    /// Place a new vertex in a face and route edges to all others.
    #[command(group(ArgGroup::new("target").args(["face", "best"])))]
    Insert {
        file: PathBuf,
        /// Face as its boundary vertices in walk order, e.g. `1,2,3,4,5,6`.
        #[arg(long)]
        face: Option<String>,
        /// Try every face (the default).
        #[arg(long)]
        best: bool,
        #[arg(long)]
        json: bool,
    },
    /// Known range of cr_g(K_n), or the whole grid.
    #[command(group(ArgGroup::new("what").args(["table", "n"]).required(true)))]
    Bounds {
        #[arg(long)]
        table: bool,
        #[arg(long, requires = "genus")]
        n: Option<u64>,
        #[arg(long)]
        genus: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = matches!(
                e.downcast_ref::<SearchError>(),
                Some(SearchError::Internal(_))
            );
            ExitCode::from(if internal { 3 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Verify {
            file,
            genus,
            profile,
            faces,
            json,
        } => verify(&file, genus, profile, faces, json),
        Command::Trace { file, json } => verify(&file, None, None, true, json),
        Command::Complete {
            file,
            n,
            genus,
            json,
        } => complete(&file, n, genus, json),
        Command::Search {
            n,
            genus,
            jobs,
            limit,
            out,
            json,
        } => search(n, genus, jobs, limit, out.as_deref(), json),
        Command::Classify {
            files,
            no_reflection,
            json,
        } => classify_files(&files, !no_reflection, json),
        Command::Insert {
            file, face, json, ..
        } => insert(&file, face.as_deref(), json),
        Command::Bounds {
            table,
            n,
            genus,
            json,
        } => bounds(table, n.zip(genus), json),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_file(path: &Path) -> Result<RotationFile> {
    parse_rotation(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_full(path: &Path) -> Result<RotationSystem> {
    match read_file(path)? {
        RotationFile::Full(rs) => Ok(rs),
        RotationFile::Partial(p) => bail!(
            "{}: expected all {} rows, found {}",
            path.display(),
            p.n(),
            p.rows().len()
        ),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn verify(
    path: &Path,
    genus: Option<i64>,
    profile: Option<FaceProfile>,
    faces: bool,
    json: bool,
) -> Result<u8> {
    let rs = read_full(path)?;
    let mut report = verify_embedding(&rs, genus, profile.as_ref());
    if faces {
        report.faces = Some(faces_as_vertex_lists(&trace_faces(&rs)));
    }
    if json {
        print_json(&report)?;
    } else {
        let inv = &report.invariants;
        println!(
            "V={} E={} F={} euler={} genus={}",
            inv.v, inv.e, inv.f, inv.euler, inv.genus
        );
        println!("profile {}", report.profile);
        println!(
            "hexagon with distinct vertices: {}",
            if report.hexagon_distinct { "yes" } else { "no" }
        );
        println!(
            "vertex links: {}",
            if report.link_ok {
                "single cycles"
            } else {
                "broken"
            }
        );
        for face in report.faces.iter().flatten() {
            let vs: Vec<String> = face.iter().map(u8::to_string).collect();
            println!("({})", vs.join(" "));
        }
        for m in report.mismatches() {
            println!("mismatch: {m}");
        }
    }
    Ok(if report.expectations_met() { 0 } else { FAILED })
}

fn complete(path: &Path, n: Option<usize>, genus: i64, json: bool) -> Result<u8> {
    let partial = match read_file(path)? {
        RotationFile::Partial(p) => p,
        RotationFile::Full(_) => bail!("{}: already complete", path.display()),
    };
    if let Some(n) = n.filter(|&n| n != partial.n()) {
        bail!("--n {n} but the rows describe K{}", partial.n());
    }
    if partial.rows().len() != 6 {
        bail!("expected rows 1-6, found {}", partial.rows().len());
    }
    let cfg = SearchConfig::new(partial.n(), genus)?;
    let mut state = PartialState::new(&cfg);
    for (k, row) in partial.to_rows().iter().enumerate() {
        if let Err(rejection) = state.extend_row(row) {
            eprintln!("row {} rejected: {rejection}", k + 1);
            return Ok(FAILED);
        }
    }
    let done = complete_residual(&state)?;
    if json {
        let rows: Vec<serde_json::Value> = done
            .iter()
            .map(|rs| serde_json::from_str(&rs.to_json()))
            .collect::<Result<_, _>>()?;
        print_json(&rows)?;
    } else {
        for (k, rs) in done.iter().enumerate() {
            if k > 0 {
                println!();
            }
            print!("{}", rs.to_text());
        }
    }
    eprintln!(
        "{} completion(s); rows 1-6 mention {} of {} triangles",
        done.len(),
        state.triangle_count(),
        cfg.max_triangles()
    );
    Ok(if done.is_empty() { FAILED } else { 0 })
}

#[derive(Serialize)]
struct SearchSummary {
    n: usize,
    genus: i64,
    max_triangles: usize,
    complete: bool,
    total: usize,
    /// Sequences keyed by the number of triangles rows 1-6 mention.
    sequences_by_mentioned: std::collections::BTreeMap<usize, u64>,
    counters: rotsys::StageCounters,
    files: Vec<String>,
}

fn search(
    n: usize,
    genus: i64,
    jobs: usize,
    limit: Option<usize>,
    out: Option<&Path>,
    json: bool,
) -> Result<u8> {
    let cfg = SearchConfig::new(n, genus)?
        .with_jobs(jobs)
        .with_limit(limit);
    let token = CancelToken::new();
    {
        let token = token.clone();
        // A second handler cannot be installed; carry on without one.
        let _ = ctrlc::set_handler(move || token.cancel());
    }
    let result = run_search_with(&cfg, Some(&token))?;

    // Files follow canonical order so names do not depend on search order.
    let mut order: Vec<usize> = (0..result.sequences.len()).collect();
    let codes: Vec<_> = result
        .sequences
        .iter()
        .map(|s| rotsys::canonical_form(s, true))
        .collect();
    order.sort_by(|&a, &b| (&codes[a], a).cmp(&(&codes[b], b)));
    let mut files = Vec::new();
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (k, &i) in order.iter().enumerate() {
            let name = format!("K{n}_g{genus}_{:03}.txt", k + 1);
            let text = format!(
                "# K{n} on the genus-{genus} surface: one hexagon, {} triangles. Search output {} of {}.\n{}",
                cfg.max_triangles(),
                k + 1,
                order.len(),
                result.sequences[i].to_text()
            );
            fs::write(dir.join(&name), text)?;
            files.push(name);
        }
    }
    let summary = SearchSummary {
        n,
        genus,
        max_triangles: result.max_triangles,
        complete: result.complete,
        total: result.sequences.len(),
        sequences_by_mentioned: result
            .counters
            .completions
            .iter()
            .map(|(&k, c)| (k, c.sequences))
            .collect(),
        counters: result.counters.clone(),
        files,
    };
    if let Some(dir) = out {
        fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&summary)? + "\n",
        )?;
    }
    if json {
        print_json(&summary)?;
    } else {
        println!(
            "K{n} on genus {genus}: {} sequence(s){}",
            summary.total,
            if summary.complete {
                ""
            } else {
                " (incomplete run)"
            }
        );
        println!("row  opposite  faces  edges");
        for r in &result.counters.rows {
            println!(
                "{:>3}  {:>8}  {:>5}  {:>5}",
                r.row, r.opposite, r.faces, r.edges
            );
        }
        for (mentioned, c) in result.counters.completions.iter().rev() {
            println!(
                "{mentioned} triangles in rows 1-6: {} state(s), {} completable, {} sequence(s)",
                c.states, c.completed_states, c.sequences
            );
        }
        if !summary.complete {
            eprintln!("search stopped early; counts are partial");
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ClassOut {
    representative_code: rotsys::CanonicalCode,
    members: Vec<usize>,
    size: usize,
    files: Vec<String>,
}

fn classify_files(paths: &[PathBuf], reflection: bool, json: bool) -> Result<u8> {
    let systems: Vec<RotationSystem> = paths.iter().map(|p| read_full(p)).collect::<Result<_>>()?;
    let classes = classify(&systems, reflection)?;
    let out: Vec<ClassOut> = classes
        .into_iter()
        .map(|c| ClassOut {
            files: c
                .members
                .iter()
                .map(|&i| paths[i].display().to_string())
                .collect(),
            representative_code: c.representative_code,
            members: c.members,
            size: c.size,
        })
        .collect();
    if json {
        print_json(&out)?;
    } else {
        println!(
            "{} class(es), {}",
            out.len(),
            if reflection {
                "reflections allowed"
            } else {
                "orientation preserving"
            }
        );
        for (k, c) in out.iter().enumerate() {
            println!(
                "class {}: {} member(s): {}",
                k + 1,
                c.size,
                c.files.join(" ")
            );
        }
    }
    Ok(0)
}

fn parse_face(face_arg: &str) -> Result<FaceWalk> {
    let vs: Vec<u8> = face_arg
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| anyhow!("invalid vertex `{t}` in --face"))
        })
        .collect::<Result<_>>()?;
    if vs.len() < 3 || vs.contains(&0) {
        bail!("--face needs at least three vertex labels from 1");
    }
    let edges = (0..vs.len())
        .map(|k| DirectedEdge::new(Vertex::new(vs[k]), Vertex::new(vs[(k + 1) % vs.len()])))
        .collect();
    Ok(FaceWalk::new(edges))
}

fn insert(path: &Path, face: Option<&str>, json: bool) -> Result<u8> {
    let rs = read_full(path)?;
    let plan: InsertionPlan = match face {
        Some(face_arg) => {
            let walk = parse_face(face_arg)?;
            let fs = trace_faces(&rs);
            let found = fs
                .faces()
                .iter()
                .find(|f| f.same_face(&walk))
                .cloned()
                .ok_or_else(|| anyhow!("({face_arg}) is not a face of this embedding"))?;
            plan_insertion(&rs, &found)?
        }
        None => best_insertion(&rs)?,
    };
    if json {
        println!("{}", plan.to_json());
    } else {
        println!("face {}", plan.face);
        let costly: Vec<String> = plan
            .costs
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(v, c)| format!("{v}:{c}"))
            .collect();
        println!("off-face costs: {}", costly.join(" "));
        for (v, e) in &plan.assignment {
            println!("route to {v} crosses {e}");
        }
        if plan.certified {
            println!(
                "certified: K{} with at most {} crossing(s)",
                rs.n() + 1,
                plan.upper_bound
            );
        } else {
            println!(
                "not certified ({}); heuristic count {}",
                plan.note.as_deref().unwrap_or("unknown"),
                plan.upper_bound
            );
        }
    }
    Ok(if plan.certified { 0 } else { FAILED })
}

fn bounds(table: bool, cell: Option<(u64, u64)>, json: bool) -> Result<u8> {
    if table {
        if json {
            print_json(&crossing_grid())?;
        } else {
            print!("{}", render_table());
        }
        return Ok(0);
    }
    let (n, g) = cell.ok_or_else(|| anyhow!("give --table or both --n and --genus"))?;
    let r = known_range(n, g)?;
    if json {
        print_json(&r)?;
    } else {
        println!("cr_{g}(K{n}) in [{}, {}]", r.lower, r.upper);
        println!("lower: {}", r.lower_source);
        println!("upper: {}", r.upper_source);
        if r.partial {
            println!("outside the tabulated range: formulas only");
        }
    }
    Ok(0)
}
