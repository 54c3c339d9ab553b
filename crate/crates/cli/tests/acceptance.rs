//! Acceptance suite: one PASS or FAIL line per criterion, nonzero exit if any
//! criterion fails. Search, classification, insertion and the bounds grid go
//! through the `rotsys` binary; the rest calls the library.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

use rotsys::bounds::{
    genus_complete, guy_z, heawood_number, kainen_lower_bound, toroidal_bounds,
    triangulation_deficiency,
};
use rotsys::facetrace::surface_invariants;
use rotsys::search::{run_search, SearchConfig};
use rotsys::{canonical_form, parse_rotation, trace_faces, RotationFile, RotationSystem};

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.txt"))
}

fn rotsys(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rotsys"))
        .args(args)
        .stdin(Stdio::null())
        .output()
        .map_err(|e| format!("cannot run rotsys: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    if code >= 2 {
        return Err(format!(
            "rotsys {args:?} exited {code}: {}",
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    Ok((code, out.stdout))
}

fn rotsys_json(args: &[&str]) -> Result<(i32, Value), String> {
    let (code, out) = rotsys(args)?;
    let v = serde_json::from_slice(&out).map_err(|e| format!("rotsys {args:?}: bad JSON: {e}"))?;
    Ok((code, v))
}

fn load(path: &Path) -> RotationSystem {
    match parse_rotation(&fs::read_to_string(path).unwrap()).unwrap() {
        RotationFile::Full(rs) => rs,
        RotationFile::Partial(_) => panic!("{} is partial", path.display()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `search --out` and returns the written file paths in order.
fn search_files(dir: &Path, n: &str, genus: &str) -> Result<(Value, Vec<PathBuf>), String> {
    let d = dir.to_str().unwrap();
    rotsys(&["search", "--n", n, "--genus", genus, "--out", d])?;
    let summary: Value = serde_json::from_slice(&fs::read(dir.join("summary.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let files = summary["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| dir.join(f.as_str().unwrap()))
        .collect();
    Ok((summary, files))
}

fn verify_all(files: &[PathBuf], genus: &str, profile: &str) -> Result<(), String> {
    for f in files {
        let (code, v) = rotsys_json(&[
            "verify",
            f.to_str().unwrap(),
            "--genus",
            genus,
            "--profile",
            profile,
            "--json",
        ])?;
        ensure(code == 0 && v["hexagon_distinct"] == true, || {
            format!("{} fails verification: {v}", f.display())
        })?;
    }
    Ok(())
}

fn criterion_1(work: &Path) -> Outcome {
    let (summary, files) = search_files(&work.join("k9"), "9", "3")?;
    ensure(files.len() == 8 && summary["complete"] == true, || {
        format!(
            "expected 8 sequences from a complete run, got {}",
            files.len()
        )
    })?;
    verify_all(&files, "3", "3:22,6:1")?;
    let mut args: Vec<String> = vec!["classify".into(), "--json".into()];
    args.extend(files.iter().map(|f| f.display().to_string()));
    let case1 = fixture("case1").display().to_string();
    let case2 = fixture("case2").display().to_string();
    args.push(case1.clone());
    args.push(case2.clone());
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (_, classes) = rotsys_json(&args)?;
    let classes = classes.as_array().unwrap();
    // Each class holds 4 search outputs plus one of the two fixtures.
    let sizes: Vec<u64> = classes
        .iter()
        .map(|c| c["size"].as_u64().unwrap() - 1)
        .collect();
    ensure(sizes == [4, 4], || {
        format!("class sizes {sizes:?}, expected [4, 4]")
    })?;
    let class_of = |f: &str| {
        classes
            .iter()
            .position(|c| c["files"].as_array().unwrap().iter().any(|x| x == f))
    };
    let (a, b) = (class_of(&case1), class_of(&case2));
    ensure(a.is_some() && b.is_some() && a != b, || {
        format!("Case 1 in class {a:?}, Case 2 in class {b:?}")
    })?;
    Ok("8 sequences, genus 3, {3:22, 6:1}, distinct hexagon; 2 classes of 4 with Case 1 and Case 2 apart".into())
}

fn criterion_2(work: &Path) -> Outcome {
    let (summary, files) = search_files(&work.join("k10"), "10", "4")?;
    verify_all(&files, "4", "3:28,6:1")?;
    let by = &summary["sequences_by_mentioned"];
    let got: Vec<u64> = ["28", "27", "26"]
        .iter()
        .map(|k| by[k].as_u64().unwrap_or(0))
        .collect();
    let total = summary["total"].as_u64().unwrap();
    let expected = [0, 8, 11];
    ensure(got == expected && total == 19, || {
        format!(
            "28/27/26-triangle states gave {}/{}/{} = {total} sequences (all verified: genus 4, {{3:28, 6:1}}); expected 0/8/11 = 19",
            got[0], got[1], got[2]
        )
    })?;
    Ok("0/8/11 from 28/27/26-triangle states, 19 total, profile {3:28, 6:1}".into())
}

fn best_plan(file: &Path) -> Result<(i32, Value), String> {
    rotsys_json(&["insert", file.to_str().unwrap(), "--best", "--json"])
}

fn criterion_3(work: &Path) -> Outcome {
    let k9: Vec<PathBuf> = summary_files(&work.join("k9"))?;
    for f in &k9 {
        let (code, plan) = best_plan(f)?;
        ensure(code == 0 && plan["upper_bound"] == 3, || {
            format!("{}: {plan}", f.display())
        })?;
    }
    ensure(kainen_lower_bound(10, 3) == 3, || {
        "kainen(10,3) != 3".into()
    })?;

    let k10 = summary_files(&work.join("k10"))?;
    let target = canonical_form(&load(&fixture("k10_s4")), true).code;
    let published = k10
        .iter()
        .find(|f| canonical_form(&load(f), true).code == target)
        .ok_or("the K10 sequence of the fixture is not among the search outputs")?;
    let (code, plan) = best_plan(published)?;
    ensure(code == 0 && plan["upper_bound"] == 4, || {
        format!("{}: {plan}", published.display())
    })?;
    ensure(kainen_lower_bound(11, 4) == 4, || {
        "kainen(11,4) != 4".into()
    })?;
    let mut fours = 0;
    for f in &k10 {
        if let (0, plan) = best_plan(f)? {
            fours += usize::from(plan["upper_bound"] == 4);
        }
    }
    Ok(format!(
        "all 8 K9 outputs certify cr_3(K10) <= 3 = kainen(10,3); the K10 output matching the fixture certifies cr_4(K11) <= 4 = kainen(11,4) ({fours} of {} K10 outputs do)",
        k10.len()
    ))
}

fn summary_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let summary: Value = serde_json::from_slice(
        &fs::read(dir.join("summary.json")).map_err(|e| format!("{}: {e}", dir.display()))?,
    )
    .map_err(|e| e.to_string())?;
    Ok(summary["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| dir.join(f.as_str().unwrap()))
        .collect())
}

fn criterion_4() -> Outcome {
    let z: Vec<u64> = (8..=11).map(guy_z).collect();
    ensure(z == [18, 36, 60, 100], || format!("guy_z(8..=11) = {z:?}"))?;
    let t: Vec<i64> = (7..=18).map(triangulation_deficiency).collect();
    ensure(t == [0, 2, 3, 3, 2, 0, 3, 5, 0, 0, 5, 3], || {
        format!("deficiency(7..=18) = {t:?}")
    })?;
    let g: Vec<u64> = (8..=11).map(genus_complete).collect();
    ensure(g == [2, 3, 4, 5], || {
        format!("genus_complete(8..=11) = {g:?}")
    })?;
    ensure(heawood_number(1) == 7, || {
        format!("heawood_number(1) = {}", heawood_number(1))
    })?;
    let lower = toroidal_bounds(11).map_err(|e| e.to_string())?.lower;
    ensure(lower == 37, || {
        format!("toroidal lower bound for n = 11 is {lower}")
    })?;
    Ok("Z(8..11) = 18/36/60/100, deficiencies for n = 7..18, genus 2/3/4/5, H(1) = 7, toroidal bound 37".into())
}

fn criterion_5() -> Outcome {
    let expected = [
        ["g/n", "8", "9", "10", "11"],
        ["0", "18", "36", "60", "100"],
        ["1", "4", "9", "23", "[37, 42]"],
        ["2", "0", "4", "[9, 12]", "[16, 27]"],
        ["3", "-", "0", "3", "[10, 14]"],
        ["4", "-", "-", "0", "4"],
        ["5", "-", "-", "-", "0"],
    ];
    let (_, out) = rotsys(&["bounds", "--table"])?;
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    let cells: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split('|').map(|c| c.trim().to_owned()).collect())
        .collect();
    ensure(cells == expected, || format!("grid differs:\n{text}"))?;
    Ok("6 x 4 grid matches cell for cell".into())
}

fn random_system() -> impl Strategy<Value = RotationSystem> {
    (3usize..=9)
        .prop_flat_map(|n| {
            (1..=n as u8)
                .map(|v| {
                    Just((1..=n as u8).filter(|&x| x != v).collect::<Vec<u8>>()).prop_shuffle()
                })
                .collect::<Vec<_>>()
        })
        .prop_map(|rows| RotationSystem::from_rows(&rows).unwrap())
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn search_rows(n: usize, genus: i64) -> Vec<Vec<Vec<u8>>> {
    let r = run_search(&SearchConfig::new(n, genus).unwrap()).unwrap();
    let mut out: Vec<Vec<Vec<u8>>> = r
        .sequences
        .iter()
        .map(|s| {
            let mut rows = s.to_rows();
            for row in rows.iter_mut().skip(6) {
                let k = row.iter().position(|&x| x == 1).unwrap();
                row.rotate_left(k);
            }
            rows
        })
        .collect();
    out.sort();
    out
}

fn criterion_6() -> Outcome {
    const RANDOM: u32 = 10_000;
    const RELABELINGS: u32 = 200;

    runner(RANDOM)
        .run(&random_system(), |rs| {
            let fs = trace_faces(&rs);
            let n = rs.n();
            let mut seen = vec![false; n * n];
            for f in fs.faces() {
                for &e in f.boundary() {
                    let k = e.from.index() * n + e.to.index();
                    prop_assert!(!seen[k], "directed edge {} on two faces", e);
                    seen[k] = true;
                }
            }
            prop_assert_eq!(seen.iter().filter(|&&s| s).count(), 2 * rs.edge_count());
            prop_assert_eq!(surface_invariants(&rs).unwrap().euler % 2, 0);
            Ok(())
        })
        .map_err(|e| format!("face partition: {e}"))?;

    let fixtures = ["case1", "case2", "k10_s4", "tetrahedron"];
    for name in fixtures {
        let rs = load(&fixture(name));
        let n = rs.n();
        let labels = Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle();
        let codes = [
            canonical_form(&rs, true).code,
            canonical_form(&rs, false).code,
        ];
        runner(RELABELINGS)
            .run(&labels, |perm| {
                let other = rs.relabel(&perm).unwrap();
                prop_assert_eq!(&canonical_form(&other, true).code, &codes[0]);
                prop_assert_eq!(&canonical_form(&other, false).code, &codes[1]);
                Ok(())
            })
            .map_err(|e| format!("{name} relabeling: {e}"))?;
    }

    let k6 = oracle::brute_force_k6();
    ensure(!k6.is_empty() && search_rows(6, 1) == k6, || {
        "K6 search differs from prune-free enumeration".into()
    })?;
    let (leaves, k7) = oracle::prune_free_k7();
    ensure(search_rows(7, 1) == k7, || {
        "K7 search differs from prune-free enumeration".into()
    })?;
    let k9 = oracle::oracle_rows(9);
    ensure(search_rows(9, 3) == k9, || {
        "K9 search differs from the edge-ownership enumerator".into()
    })?;
    Ok(format!(
        "{RANDOM} random systems partition directed edges with even Euler characteristic; {RELABELINGS} relabelings per fixture ({}) keep the canonical code; search equals prune-free enumeration for K6 ({} systems) and K7 ({leaves} hexagon-row choices, {} found) and the edge-ownership enumerator for K9 ({} found)",
        fixtures.len(),
        k6.len(),
        k7.len(),
        k9.len()
    ))
}

fn criterion_7() -> Outcome {
    let (code, plan) = best_plan(&fixture("tetrahedron"))?;
    ensure(
        code == 0 && plan["certified"] == true && plan["upper_bound"] == 1,
        || format!("tetrahedron plan: {plan}"),
    )?;
    Ok("tetrahedron insertion certifies cr_0(K5) <= 1".into())
}

fn main() -> ExitCode {
    let work = tempfile::tempdir().expect("temporary directory");
    let w = work.path();
    let criteria: Vec<(&str, Check)> = vec![
        ("K9 search and classes", Box::new(|| criterion_1(w))),
        ("K10 search counts", Box::new(|| criterion_2(w))),
        ("insertion meets Kainen", Box::new(|| criterion_3(w))),
        ("closed forms", Box::new(criterion_4)),
        ("bounds grid", Box::new(criterion_5)),
        ("property suites", Box::new(criterion_6)),
        ("tetrahedron insertion", Box::new(criterion_7)),
    ];
    let mut results = BTreeMap::new();
    for (k, (title, check)) in criteria.iter().enumerate() {
        let outcome = check();
        match &outcome {
            Ok(detail) => println!("criterion {} PASS ({title}): {detail}", k + 1),
            Err(detail) => println!("criterion {} FAIL ({title}): {detail}", k + 1),
        }
        results.insert(k + 1, outcome.is_ok());
    }
    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, ok)| !**ok)
        .map(|(k, _)| *k)
        .collect();
    println!(
        "{} of {} criteria pass{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
