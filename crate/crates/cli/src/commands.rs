//! Subcommand implementations. Each returns the process exit code; input
//! and usage problems surface as errors and exit 1.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use matchsat::{
    analyze_structure, certificate_to_text, decode, encode, max_matching, parse_graph, solve_with,
    to_dimacs, validate_instance, verify, EncodeFlags, Family, Graph, Instance, SolveStatus,
    SolverConfig,
};

use crate::corpus::{run_corpus, CorpusSpec, KRange};
use crate::report::{
    Answer, CorpusReport, SolveReport, StatsBlock, StatsReport, SweepReport, SweepRow,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_GOLDEN_MISMATCH: u8 = 2;
pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;
pub const EXIT_DISCREPANCY: u8 = 30;
pub const EXIT_BUDGET: u8 = 40;

pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read graph file {}", path.display()))?;
    let mut g = parse_graph(&text).with_context(|| format!("in {}", path.display()))?;
    if g.name().is_none() {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            g = g.with_name(stem);
        }
    }
    Ok(g)
}

fn load_instance(path: &Path, k: u32) -> Result<Instance> {
    let g = load_graph(path)?;
    Ok(validate_instance(g, k)?)
}

fn instance_label(inst: &Instance) -> String {
    inst.graph.name().unwrap_or("unnamed").to_string()
}

pub fn cmd_encode(path: &Path, k: u32, flags: EncodeFlags) -> Result<u8> {
    let inst = load_instance(path, k)?;
    print!("{}", to_dimacs(&encode(&inst, flags)));
    Ok(EXIT_OK)
}

pub fn cmd_solve(
    path: &Path,
    k: u32,
    flags: EncodeFlags,
    json: bool,
    budget: Option<u64>,
    timing: bool,
) -> Result<u8> {
    let inst = load_instance(path, k)?;
    let cnf = encode(&inst, flags);
    let config = SolverConfig {
        budget,
        branch_order: None,
    };
    let result = solve_with(&cnf, &config);
    let answer = Answer::from_status(&result.status);

    let mut report = SolveReport {
        instance: instance_label(&inst),
        k,
        flags,
        answer,
        matched: None,
        index_table: None,
        stats: StatsBlock::new(&result.stats, timing),
    };
    if let SolveStatus::Sat(asn) = &result.status {
        let cert = decode(&cnf, asn).context("decoding the satisfying assignment")?;
        let verdict = verify(&cert, &inst.graph);
        if !verdict.is_valid() {
            bail!("model failed verification:\n{verdict}");
        }
        report.matched = Some(cert.matched.iter().copied().collect());
        report.index_table = Some(cert.index_table.clone());
        if json {
            println!("{}", serde_json::to_string_pretty(&report)?);
        } else {
            println!("SAT");
            print!("{}", certificate_to_text(&cert));
            print_stats_line(&report.stats);
        }
        return Ok(EXIT_SAT);
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{}", answer.label());
        print_stats_line(&report.stats);
    }
    Ok(match answer {
        Answer::Sat => unreachable!(),
        Answer::Unsat => EXIT_UNSAT,
        Answer::BudgetExhausted => EXIT_BUDGET,
    })
}

fn print_stats_line(stats: &StatsBlock) {
    print!(
        "decisions: {} propagations: {} conflicts: {}",
        stats.decisions, stats.propagations, stats.conflicts
    );
    match stats.wall_ms {
        Some(ms) => println!(" time: {ms:.2} ms"),
        None => println!(),
    }
}

pub fn cmd_sweep(path: &Path, flags: EncodeFlags, check: bool, json: bool) -> Result<u8> {
    let g = load_graph(path)?;
    let m = g.m();
    let mut rows = Vec::new();
    let mut max_sat_k = None;
    for k in 2..=m {
        let inst = validate_instance(g.clone(), k)?;
        let result = solve_with(&encode(&inst, flags), &SolverConfig::default());
        let answer = Answer::from_status(&result.status);
        if answer == Answer::Sat {
            max_sat_k = Some(k);
        }
        rows.push(SweepRow { k, answer });
    }

    let mut report = SweepReport {
        instance: g.name().unwrap_or("unnamed").to_string(),
        flags,
        rows,
        max_sat_k,
        oracle_max_matching: None,
        check_passed: None,
    };
    if check {
        let oracle_max = max_matching(&g)?.max_size;
        // The sweep starts at K=2, so the oracle value is only observable
        // through the sweep when it is at least 2.
        let passed = if oracle_max >= 2 {
            max_sat_k == Some(oracle_max as u32)
        } else {
            max_sat_k.is_none()
        };
        report.oracle_max_matching = Some(oracle_max);
        report.check_passed = Some(passed);
    }

    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for row in &report.rows {
            println!("K={} {}", row.k, row.answer.label());
        }
        match report.max_sat_k {
            Some(k) => println!("max SAT K = {k}"),
            None => println!("no satisfiable K in [2, {m}]"),
        }
        if let Some(oracle_max) = report.oracle_max_matching {
            println!("oracle max matching = {oracle_max}");
            if report.check_passed == Some(true) {
                println!("check: agree");
            } else {
                println!("check: DISAGREE");
            }
        }
    }
    if report.check_passed == Some(false) {
        return Ok(EXIT_DISCREPANCY);
    }
    Ok(EXIT_OK)
}

pub fn build_stats_report(inst: &Instance, flags: EncodeFlags) -> StatsReport {
    let cnf = encode(inst, flags);
    let structure = analyze_structure(&cnf);
    let family_counts: BTreeMap<String, usize> = Family::ALL
        .iter()
        .map(|&f| (f.label().to_string(), cnf.family_count(f)))
        .collect();
    StatsReport {
        instance: instance_label(inst),
        n: inst.graph.n(),
        m: inst.graph.m(),
        k: inst.k,
        flags,
        total_vars: cnf.num_vars(),
        clauses_after_dedup: cnf.len(),
        family_counts,
        structure,
    }
}

pub fn cmd_stats(
    path: &Path,
    k: u32,
    flags: EncodeFlags,
    json: bool,
    golden: Option<&Path>,
) -> Result<u8> {
    let inst = load_instance(path, k)?;
    let report = build_stats_report(&inst, flags);

    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("instance: {}", report.instance);
        println!("n={} m={} K={}", report.n, report.m, report.k);
        println!("flags: {flags}");
        println!("variables: {}", report.total_vars);
        println!("clauses: {} (after dedup)", report.clauses_after_dedup);
        println!("family counts (pre-dedup):");
        for family in Family::ALL {
            println!(
                "  {family} {}",
                report.family_counts.get(family.label()).unwrap_or(&0)
            );
        }
        println!("max clause width: {}", report.structure.max_clause_width);
        println!("horn: {}", report.structure.is_horn);
        let exceptions: Vec<&str> = report
            .structure
            .all_have_negative_except
            .iter()
            .map(|f| f.label())
            .collect();
        println!(
            "families with all-positive clauses: {}",
            if exceptions.is_empty() {
                "none".to_string()
            } else {
                exceptions.join(" ")
            }
        );
        println!("sign histogram (positives,negatives -> count):");
        for bucket in &report.structure.sign_histogram {
            println!(
                "  ({},{}) {}",
                bucket.positives, bucket.negatives, bucket.count
            );
        }
    }

    if let Some(golden_path) = golden {
        let text = fs::read_to_string(golden_path)
            .with_context(|| format!("cannot read golden file {}", golden_path.display()))?;
        let expected: StatsReport = serde_json::from_str(&text).with_context(|| {
            format!(
                "golden file {} is not a stats report",
                golden_path.display()
            )
        })?;
        if expected != report {
            eprintln!("stats differ from golden file {}", golden_path.display());
            return Ok(EXIT_GOLDEN_MISMATCH);
        }
        println!("golden: match");
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_corpus(
    max_n: u32,
    k_list: Option<Vec<u32>>,
    all_flags: bool,
    workers: usize,
    ordering_max_n: u32,
    report_path: Option<PathBuf>,
    json: bool,
    timing: bool,
) -> Result<u8> {
    if max_n < 2 {
        bail!("--max-n must be at least 2");
    }
    let spec = CorpusSpec {
        max_n,
        k_range: match k_list {
            Some(ks) => KRange::List(ks),
            None => KRange::All,
        },
        flag_variants: if all_flags {
            EncodeFlags::all_variants()
        } else {
            vec![EncodeFlags::default()]
        },
        workers,
        ordering_max_n,
    };
    let mut report = run_corpus(&spec);
    if !timing {
        report.wall_ms = None;
    }

    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_corpus_summary(&report);
    }

    let clean = report.clean();
    let path = match (&report_path, clean) {
        (Some(path), _) => Some(path.clone()),
        (None, false) => Some(PathBuf::from("discrepancies.json")),
        (None, true) => None,
    };
    if let Some(path) = path {
        fs::write(&path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("cannot write report to {}", path.display()))?;
        if !json {
            println!("report written to {}", path.display());
        }
    }
    Ok(if clean { EXIT_OK } else { EXIT_DISCREPANCY })
}

fn print_corpus_summary(report: &CorpusReport) {
    println!(
        "corpus: n <= {}, {} instances ({} from edge-ordering sweeps)",
        report.max_n, report.instances, report.ordering_instances
    );
    println!("agree-SAT: {}", report.agree_sat);
    println!("agree-UNSAT: {}", report.agree_unsat);
    println!("disagree: {}", report.disagree);
    println!("certificate failures: {}", report.certificate_failures);
    println!(
        "decided by propagation alone: {} of {}",
        report.propagation_decided, report.instances
    );
    if let Some(ms) = report.wall_ms {
        println!("wall time: {:.0} ms", ms);
    }
    for d in &report.discrepancies {
        println!(
            "discrepancy: K={} solver={} oracle_sat={} ({}); shrunk to K={} over:\n{}",
            d.k,
            d.sat_answer.label(),
            d.oracle_answer,
            d.flags,
            d.shrunk_k,
            d.shrunk_graph
        );
    }
    for f in &report.certificate_failure_details {
        println!("certificate failure: K={} ({}): {}", f.k, f.flags, f.detail);
    }
}

pub fn cmd_oracle(path: &Path, k: Option<u32>) -> Result<u8> {
    let g = load_graph(path)?;
    let result = max_matching(&g)?;
    println!("max matching: {}", result.max_size);
    let witness: Vec<String> = result.witness.iter().map(u32::to_string).collect();
    println!("witness: {}", witness.join(" "));
    if let Some(k) = k {
        println!(
            "matching of size {k}: {}",
            if result.max_size >= k as usize {
                "exists"
            } else {
                "does not exist"
            }
        );
    }
    Ok(EXIT_OK)
}
