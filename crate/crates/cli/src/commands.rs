//! One handler per subcommand. Each emits exactly one verdict line, except
//! `search`, which emits one line per instance followed by a summary.

use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};

use projent::entropy::{
    audit_box_certificate, box_certificate, check_submodularity, verify_gen1, verify_gen2,
    verify_madiman_tetali, verify_shearer, EntropyTable, JointDistribution,
};
use projent::groups::{abelian_groups, small_groups, torsion_free_groups, CatalogGroup};
use projent::io::{
    element_json, family_json, lattice_json, parse_catalog, parse_distribution, parse_family,
    parse_group, parse_gymr, parse_instance_in, parse_lattice,
};
use projent::lattice::{gen2_projection_counterexample, project, projection_size, verify_uniform_cover};
use projent::search::{record_json, run_search, SearchConfig};
use projent::set_families::{
    compare, cover_profile, elementary_compression, is_k_cover, is_uniform_k_cover,
    minimal_compression, potential, Comparison, SetFamily, SubsetMask,
};
use projent::sumsets::{
    marking_algorithm, verify_cauchy_davenport, verify_cover_deficit, verify_gymr,
    verify_sumset_cover, Conjecture, SumsetInstance,
};
use projent::{EntropyReport, Error, ExactReport, Result};

use crate::output::{Emitter, Inputs};
use crate::{Cli, Command, EntropyCmd, FamilyCmd, GroupOverride, LatticeCmd, SearchArgs, SumsetCmd};

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn holds_str(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "violated"
    }
}

/// Integers that fit in `i64` print as JSON numbers, larger ones as strings.
fn int_json(v: &impl ToString) -> Value {
    let s = v.to_string();
    s.parse::<i64>().map_or(Value::String(s), Value::from)
}

fn exact_json(r: &ExactReport) -> Value {
    json!({
        "lhs": int_json(&r.lhs),
        "rhs": int_json(&r.rhs),
        "slack": int_json(&r.slack()),
        "equality": r.is_equality(),
    })
}

fn report_json(r: &EntropyReport) -> Value {
    serde_json::to_value(r).expect("plain numbers")
}

fn describe(r: &EntropyReport) -> String {
    format!(
        "{} (lhs {:.9}, rhs {:.9}, slack {:.3e} bits)",
        r.verdict.as_str(),
        r.lhs,
        r.rhs,
        r.slack
    )
}

fn profile_json(f: &SetFamily) -> Value {
    json!(cover_profile(f).counts)
}

fn mask(elements: &[usize], n: usize, inputs: &mut Inputs) -> Result<SubsetMask> {
    inputs.absorb(format!("{elements:?}").as_bytes());
    SubsetMask::from_elements(elements.iter().copied(), n)
}

fn read_family(inputs: &mut Inputs, path: &Path) -> Result<SetFamily> {
    parse_family(&inputs.read(path)?)
}

fn read_distribution(inputs: &mut Inputs, path: &Path) -> Result<JointDistribution> {
    parse_distribution(&inputs.read(path)?)
}

fn read_instance(inputs: &mut Inputs, group: &GroupOverride, path: &Path) -> Result<SumsetInstance> {
    let ctx = match &group.group {
        Some(g) => Some(parse_group(&inputs.read(g)?)?),
        None => None,
    };
    let text = inputs.read(path)?;
    parse_instance_in(&text, path.parent(), ctx)
}

pub fn run(cli: &Cli, out: &mut Emitter) -> Result<ExitCode> {
    match &cli.command {
        Command::Family(cmd) => family(cmd, out),
        Command::Entropy(cmd) => entropy(cmd, out),
        Command::Lattice(cmd) => lattice(cmd, out),
        Command::Sumset(cmd) => sumset(cmd, out),
        Command::Search(args) => search(args, out),
    }
}

fn family(cmd: &FamilyCmd, out: &Emitter) -> Result<ExitCode> {
    let mut inputs = Inputs::default();
    match cmd {
        FamilyCmd::Sharp { family } => {
            let f = read_family(&mut inputs, family)?;
            let sharp = minimal_compression(&f);
            out.verdict(
                "family sharp",
                &inputs,
                "ok",
                json!({ "input": family_json(&f), "sharp": family_json(&sharp), "profile": profile_json(&f) }),
            );
            out.summary(format!("minimal compression: {sharp}"));
            Ok(ExitCode::SUCCESS)
        }
        FamilyCmd::Compress { i, j, family } => {
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(format!("{i},{j}").as_bytes());
            let g = elementary_compression(&f, *i, *j)?;
            out.verdict(
                "family compress",
                &inputs,
                "ok",
                json!({
                    "i": i,
                    "j": j,
                    "input": family_json(&f),
                    "output": family_json(&g),
                    "potential": [potential(&f), potential(&g)],
                }),
            );
            out.summary(format!("{f} -> {g}"));
            Ok(ExitCode::SUCCESS)
        }
        FamilyCmd::Check { k, family } => {
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(k.to_string().as_bytes());
            let cover = is_k_cover(&f, *k);
            let uniform = is_uniform_k_cover(&f, *k);
            out.verdict(
                "family check",
                &inputs,
                holds_str(cover),
                json!({ "k": k, "cover": cover, "uniform": uniform, "profile": profile_json(&f) }),
            );
            out.summary(format!("{k}-cover: {cover}, uniform: {uniform}"));
            Ok(exit(cover))
        }
        FamilyCmd::Compare { first, second } => {
            let a = read_family(&mut inputs, first)?;
            let b = read_family(&mut inputs, second)?;
            let relation = match compare(&a, &b)? {
                Comparison::Equal => "equal",
                Comparison::Compresses => "compresses",
                Comparison::Incomparable => "incomparable",
            };
            let ok = relation != "incomparable";
            out.verdict(
                "family compare",
                &inputs,
                holds_str(ok),
                json!({ "first": family_json(&a), "second": family_json(&b), "relation": relation }),
            );
            out.summary(format!("{a} vs {b}: {relation}"));
            Ok(exit(ok))
        }
    }
}

fn entropy(cmd: &EntropyCmd, out: &Emitter) -> Result<ExitCode> {
    let mut inputs = Inputs::default();
    let tol = out.tol();
    let (name, report, payload): (&str, EntropyReport, Value) = match cmd {
        EntropyCmd::Submod { a, b, distribution } => {
            let d = read_distribution(&mut inputs, distribution)?;
            let (ma, mb) = (mask(a, d.n(), &mut inputs)?, mask(b, d.n(), &mut inputs)?);
            let r = check_submodularity(&d, ma, mb)?.with_tol(tol);
            let payload = json!({ "a": ma.to_vec(), "b": mb.to_vec(), "report": report_json(&r) });
            ("entropy submod", r, payload)
        }
        EntropyCmd::Shearer { k, distribution, family } => {
            let d = read_distribution(&mut inputs, distribution)?;
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(k.to_string().as_bytes());
            let r = verify_shearer(&d, &f, *k)?.with_tol(tol);
            ("entropy shearer", r, json!({ "k": k, "report": report_json(&r) }))
        }
        EntropyCmd::Mt { k, distribution, family } => {
            let d = read_distribution(&mut inputs, distribution)?;
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(k.to_string().as_bytes());
            let (lo, hi) = verify_madiman_tetali(&d, &f, *k)?;
            let (lo, hi) = (lo.with_tol(tol), hi.with_tol(tol));
            let ok = lo.holds() && hi.holds();
            out.verdict(
                "entropy mt",
                &inputs,
                holds_str(ok),
                json!({ "k": k, "lower": report_json(&lo), "upper": report_json(&hi) }),
            );
            out.summary(format!("lower: {}\nupper: {}", describe(&lo), describe(&hi)));
            return Ok(exit(ok));
        }
        EntropyCmd::Gen1 { distribution, first, second } => {
            let d = read_distribution(&mut inputs, distribution)?;
            let a = read_family(&mut inputs, first)?;
            let b = read_family(&mut inputs, second)?;
            let relation = match compare(&a, &b)? {
                Comparison::Equal => "equal",
                _ => "compresses",
            };
            let r = verify_gen1(&d, &a, &b)?.with_tol(tol);
            ("entropy gen1", r, json!({ "relation": relation, "report": report_json(&r) }))
        }
        EntropyCmd::Gen2 { distribution, family } => {
            let d = read_distribution(&mut inputs, distribution)?;
            let f = read_family(&mut inputs, family)?;
            let r = verify_gen2(&d, &f)?.with_tol(tol);
            let payload = json!({ "sharp": family_json(&minimal_compression(&f)), "report": report_json(&r) });
            ("entropy gen2", r, payload)
        }
        EntropyCmd::Box { distribution } => {
            let d = read_distribution(&mut inputs, distribution)?;
            let table = EntropyTable::new(&d)?;
            let cert = box_certificate(&table);
            let audit = audit_box_certificate(&table, &cert, tol)?;
            out.verdict(
                "entropy box",
                &inputs,
                holds_str(audit.holds()),
                json!({
                    "h": cert.h,
                    "total": cert.total(),
                    "checks": audit.checks,
                    "violations": audit.violations,
                    "chain_rule": [report_json(&audit.chain_rule.0), report_json(&audit.chain_rule.1)],
                    "worst": report_json(&audit.worst),
                    "worst_subset": audit.worst_subset.map(|a| a.to_vec()),
                }),
            );
            out.summary(format!(
                "h = {:?}; {} checks, {} violations",
                cert.h, audit.checks, audit.violations
            ));
            return Ok(exit(audit.holds()));
        }
    };
    out.verdict(name, &inputs, holds_str(report.holds()), payload);
    out.summary(format!("{name}: {}", describe(&report)));
    Ok(exit(report.holds()))
}

fn fig2(command: &str, out: &Emitter) -> Result<ExitCode> {
    let c = gen2_projection_counterexample();
    let s = &c.set;
    let size = |bits: u32| projection_size(s, SubsetMask::from_bits(bits));
    out.verdict(
        command,
        &Inputs::default(),
        holds_str(!c.is_violation()),
        json!({
            "set": lattice_json(s),
            "family": family_json(&c.family),
            "compressed": family_json(&c.compressed),
            "compressed_product": c.compressed_product,
            "family_product": c.family_product,
            "sizes": { "S": s.len(), "S_1": size(0b001)?, "S_12": size(0b011)?, "S_13": size(0b101)? },
        }),
    );
    out.summary(format!(
        "|S| |S_1| = {} > {} = |S_12| |S_13|",
        c.compressed_product, c.family_product
    ));
    Ok(ExitCode::SUCCESS)
}

fn lattice(cmd: &LatticeCmd, out: &Emitter) -> Result<ExitCode> {
    let mut inputs = Inputs::default();
    match cmd {
        LatticeCmd::Project { a, lattice } => {
            let s = parse_lattice(&inputs.read(lattice)?)?;
            let m = mask(a, s.n(), &mut inputs)?;
            let p = project(&s, m)?;
            out.verdict(
                "lattice project",
                &inputs,
                "ok",
                json!({ "a": m.to_vec(), "projection": lattice_json(&p), "size": p.len() }),
            );
            out.summary(format!("|S_{m}| = {}", p.len()));
            Ok(ExitCode::SUCCESS)
        }
        LatticeCmd::Cover { k, lattice, family } => {
            let s = parse_lattice(&inputs.read(lattice)?)?;
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(k.to_string().as_bytes());
            let r = verify_uniform_cover(&s, &f, *k)?;
            out.verdict(
                "lattice cover",
                &inputs,
                holds_str(r.holds()),
                json!({ "k": k, "projection_sizes": r.projection_sizes, "report": exact_json(&r.report) }),
            );
            out.summary(format!("|S|^{k} = {} <= {} : {}", r.report.lhs, r.report.rhs, r.holds()));
            Ok(exit(r.holds()))
        }
        LatticeCmd::Fig2 => fig2("lattice fig2", out),
    }
}

fn sumset(cmd: &SumsetCmd, out: &Emitter) -> Result<ExitCode> {
    let mut inputs = Inputs::default();
    match cmd {
        SumsetCmd::Cover { k, group, instance, family } => {
            let inst = read_instance(&mut inputs, group, instance)?;
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(k.to_string().as_bytes());
            let r = verify_sumset_cover(&inst, &f, *k)?;
            out.verdict(
                "sumset cover",
                &inputs,
                holds_str(r.holds()),
                json!({
                    "k": k,
                    "report": exact_json(&r.report),
                    "embedded": exact_json(&r.embedded.report),
                    "containment": r.containment,
                    "lambda": r.lambdas.lambdas,
                    "lambda_feasible": r.lambdas.is_feasible(),
                    "lambda_reverified": r.lambdas.reverified,
                }),
            );
            out.summary(format!("|S|^{k} = {} <= {}: {}", r.report.lhs, r.report.rhs, r.holds()));
            Ok(exit(r.holds()))
        }
        SumsetCmd::Gymr { file } => {
            let g = parse_gymr(&inputs.read(file)?)?;
            let r = verify_gymr(&g.a, &g.b, &g.c)?;
            out.verdict(
                "sumset gymr",
                &inputs,
                holds_str(r.holds()),
                json!({
                    "k": r.k,
                    "report": exact_json(&r.report),
                    "cover": family_json(&r.cover),
                    "embedded": exact_json(&r.embedded.report),
                    "head_projection": [r.head_projection.0, r.head_projection.1],
                    "pair_projections": r.pair_projections.iter().map(|(p, s)| [*p, *s]).collect::<Vec<_>>(),
                    "projection_bounds_hold": r.projection_bounds_hold(),
                }),
            );
            out.summary(format!("|A+C|^{} = {} <= {}", r.k, r.report.lhs, r.report.rhs));
            Ok(exit(r.holds()))
        }
        SumsetCmd::Marking { k, group, instance, family } => {
            let inst = read_instance(&mut inputs, group, instance)?;
            let f = read_family(&mut inputs, family)?;
            inputs.absorb(k.to_string().as_bytes());
            let w = marking_algorithm(&inst, &f, *k)?;
            let audit = w.audit();
            let marks: Vec<Vec<Value>> = w
                .marks
                .iter()
                .map(|copy| {
                    copy.iter()
                        .map(|m| json!({ "column": m.column, "member": m.member + 1, "element": element_json(&m.element) }))
                        .collect()
                })
                .collect();
            out.verdict(
                "sumset marking",
                &inputs,
                holds_str(audit.passed()),
                json!({
                    "k": k,
                    "maxima": w.maxima.iter().map(|e| element_json(e)).collect::<Vec<_>>(),
                    "grid": w.grid.iter().map(|row| row.iter().map(|m| m + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "marks": marks,
                    "sumset_size": w.sumset_size,
                    "restricted_size": w.restricted_sumset.len(),
                    "member_sumset_sizes": w.member_sumset_sizes,
                    "chain": [audit.chain.0, audit.chain.1, audit.chain.2],
                    "audit": {
                        "grid_partition": audit.grid_partition,
                        "distinct_per_copy": audit.distinct_per_copy,
                        "marks_in_restricted": audit.marks_in_restricted,
                        "marks_cover_members": audit.marks_cover_members,
                    },
                }),
            );
            out.summary(format!(
                "k(|S|-1) = {} >= k(|S'|-1) = {} >= {} = sum(|S_A|-1); audit passed: {}",
                audit.chain.0,
                audit.chain.1,
                audit.chain.2,
                audit.passed()
            ));
            Ok(exit(audit.passed()))
        }
        SumsetCmd::Cd { group, instance, family, k } => {
            let inst = read_instance(&mut inputs, group, instance)?;
            match family {
                None => {
                    let r = verify_cauchy_davenport(&inst)?;
                    out.verdict(
                        "sumset cd",
                        &inputs,
                        holds_str(r.holds()),
                        json!({ "sumset_size": r.sumset_size, "deficit_sum": r.deficit_sum, "prime": r.prime }),
                    );
                    out.summary(format!(
                        "|S| = {}, p = {:?}, sum(|S_i|-1) = {}",
                        r.sumset_size, r.prime, r.deficit_sum
                    ));
                    Ok(exit(r.holds()))
                }
                Some(path) => {
                    let f = read_family(&mut inputs, path)?;
                    let k = k.ok_or_else(|| Error::Parse("--k is required with a family".into()))?;
                    inputs.absorb(k.to_string().as_bytes());
                    let r = verify_cover_deficit(&inst, &f, k)?;
                    out.verdict(
                        "sumset cd",
                        &inputs,
                        holds_str(r.holds()),
                        json!({ "k": k, "report": exact_json(&r) }),
                    );
                    out.summary(format!(
                        "sum(|S_A|-1) = {} vs k(|S|-1) = {}: {}",
                        r.lhs,
                        r.rhs,
                        holds_str(r.holds())
                    ));
                    Ok(exit(r.holds()))
                }
            }
        }
        SumsetCmd::Fig2 => fig2("sumset fig2", out),
    }
}

fn catalog(name: &str, inputs: &mut Inputs) -> Result<Vec<CatalogGroup>> {
    inputs.absorb(name.as_bytes());
    match name {
        "small" => Ok(small_groups()),
        "abelian" => Ok(abelian_groups()),
        "torsion-free" => Ok(torsion_free_groups()),
        path => parse_catalog(&inputs.read(Path::new(path))?),
    }
}

fn search(args: &SearchArgs, out: &Emitter) -> Result<ExitCode> {
    let mut inputs = Inputs::default();
    let conjecture = Conjecture::parse(&args.conjecture)
        .ok_or_else(|| Error::Parse(format!("unknown conjecture {}", args.conjecture)))?;
    let cfg = SearchConfig {
        conjecture,
        groups: catalog(&args.groups, &mut inputs)?,
        n: args.n,
        set_size_max: args.set_size_max,
        seed: out.seed(),
        budget: args.budget,
        sample: args.sample,
    };
    inputs.absorb(format!("{} {} {:?} {}", args.n, args.set_size_max, args.budget, args.sample).as_bytes());
    let outcome = run_search(&cfg)?;
    let command = format!("search {}", conjecture.label());
    for r in &outcome.records {
        let mut line = record_json(conjecture, r);
        line["command"] = json!(command);
        out.line(&line);
    }
    let s = outcome.summary;
    let candidates: Vec<&str> = outcome
        .counterexample_candidates()
        .map(|r| r.candidate.id.as_str())
        .collect();
    out.verdict(
        &command,
        &inputs,
        if s.infeasible == 0 { "feasible" } else { "infeasible" },
        json!({ "summary": s, "counterexample_candidates": candidates }),
    );
    out.summary(format!(
        "{command}: {} instances, {} feasible, {} infeasible, {} errors, {} unverified",
        s.instances, s.feasible, s.infeasible, s.errors, s.unverified
    ));
    Ok(exit(s.infeasible == 0))
}
