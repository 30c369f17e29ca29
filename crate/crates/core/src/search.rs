//! Exhaustive or sampled search for instances where one of the two
//! conjectured systems of constants is infeasible.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificates::Feasibility;
use crate::error::{Error, Result};
use crate::groups::{CatalogGroup, Element};
use crate::io::{element_json, group_json, rational_string};
use crate::sumsets::{conjecture_feasibility, Conjecture, ConjectureOutcome, ConjectureReport, SumsetInstance};

/// Instances are enumerated up front, so the search space is capped.
pub const MAX_SEARCH_INSTANCES: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub conjecture: Conjecture,
    pub groups: Vec<CatalogGroup>,
    /// Number of sets per instance.
    pub n: usize,
    pub set_size_max: usize,
    pub seed: u64,
    /// Maximum number of instances to run; `None` runs them all.
    pub budget: Option<usize>,
    /// Draw the budgeted instances uniformly with `seed` instead of taking
    /// the first ones in enumeration order.
    pub sample: bool,
}

/// One candidate instance, identified by its group and its position in the
/// enumeration of that group.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub id: String,
    pub group: String,
    pub instance: SumsetInstance,
}

/// Outcome for one instance.
#[derive(Clone, Debug)]
pub struct SearchRecord {
    pub candidate: Candidate,
    pub result: std::result::Result<ConjectureReport, Error>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub instances: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub errors: usize,
    /// Witnesses or certificates that failed their independent re-check.
    pub unverified: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub conjecture: Conjecture,
    pub records: Vec<SearchRecord>,
    pub summary: SearchSummary,
}

impl SearchOutcome {
    pub fn counterexample_candidates(&self) -> impl Iterator<Item = &SearchRecord> {
        self.records
            .iter()
            .filter(|r| matches!(&r.result, Ok(rep) if !rep.is_feasible()))
    }
}

/// All non-empty subsets of `pool` with at most `max` elements, by size and
/// then lexicographically by position.
fn small_subsets(pool: &[Element], max: usize) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn extend(
        pool: &[Element],
        size: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<Element>>,
    ) {
        if current.len() == size {
            out.push(current.iter().map(|&i| pool[i].clone()).collect());
            return;
        }
        for i in start..pool.len() {
            current.push(i);
            extend(pool, size, i + 1, current, out);
            current.pop();
        }
    }
    for size in 1..=max.min(pool.len()) {
        extend(pool, size, 0, &mut current, &mut out);
    }
    out
}

/// Every instance of the search space in canonical order: groups in catalog
/// order, then `n`-tuples of subsets in odometer order.
pub fn enumerate_candidates(cfg: &SearchConfig) -> Result<Vec<Candidate>> {
    if cfg.n == 0 {
        return Err(Error::InvalidSystem("at least one set per instance".into()));
    }
    let mut out = Vec::new();
    for group in &cfg.groups {
        let subsets = small_subsets(&group.pool, cfg.set_size_max);
        let count = u32::try_from(cfg.n)
            .ok()
            .and_then(|n| subsets.len().checked_pow(n))
            .filter(|&c| out.len() + c <= MAX_SEARCH_INSTANCES)
            .ok_or_else(|| {
                Error::InstanceTooLarge(format!(
                    "search space exceeds {MAX_SEARCH_INSTANCES} instances"
                ))
            })?;
        for index in 0..count {
            let mut rest = index;
            let mut sets = vec![Vec::new(); cfg.n];
            for slot in sets.iter_mut().rev() {
                *slot = subsets[rest % subsets.len()].clone();
                rest /= subsets.len();
            }
            out.push(Candidate {
                id: format!("{}#{index}", group.name),
                group: group.name.clone(),
                instance: SumsetInstance::new(group.ctx.clone(), sets)?,
            });
        }
    }
    Ok(out)
}

/// Applies the budget, keeping canonical order.
pub fn select_candidates(cfg: &SearchConfig, all: Vec<Candidate>) -> Vec<Candidate> {
    let Some(budget) = cfg.budget.filter(|&b| b < all.len()) else {
        return all;
    };
    if !cfg.sample {
        return all.into_iter().take(budget).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked = sample(&mut rng, all.len(), budget).into_vec();
    picked.sort_unstable();
    let mut all: Vec<Option<Candidate>> = all.into_iter().map(Some).collect();
    picked
        .into_iter()
        .map(|i| all[i].take().expect("indices are distinct"))
        .collect()
}

pub fn run_candidates(conjecture: Conjecture, candidates: Vec<Candidate>) -> SearchOutcome {
    let records: Vec<SearchRecord> = candidates
        .into_par_iter()
        .map(|candidate| {
            let result = conjecture_feasibility(&candidate.instance, conjecture);
            SearchRecord { candidate, result }
        })
        .collect();
    let mut summary = SearchSummary {
        instances: records.len(),
        ..SearchSummary::default()
    };
    for r in &records {
        match &r.result {
            Ok(rep) => {
                if rep.is_feasible() {
                    summary.feasible += 1;
                } else {
                    summary.infeasible += 1;
                }
                if !rep.reverified() {
                    summary.unverified += 1;
                }
            }
            Err(_) => summary.errors += 1,
        }
    }
    SearchOutcome {
        conjecture,
        records,
        summary,
    }
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.budget == Some(0) {
        return Ok(run_candidates(cfg.conjecture, Vec::new()));
    }
    let all = enumerate_candidates(cfg)?;
    Ok(run_candidates(cfg.conjecture, select_candidates(cfg, all)))
}

fn sizes_json(rep: &ConjectureReport) -> Value {
    rep.sizes
        .iter()
        .map(|(a, s)| (a.to_string(), json!(s)))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

/// The JSON line for one record: `instance`, `conjecture`, `feasible` and
/// either `witness` or `violation`.
pub fn record_json(conjecture: Conjecture, r: &SearchRecord) -> Value {
    let c = &r.candidate;
    let sets: Vec<Vec<Value>> = c
        .instance
        .sets()
        .iter()
        .map(|s| s.iter().map(|e| element_json(e)).collect())
        .collect();
    let instance = json!({
        "id": c.id,
        "group": c.group,
        "context": group_json(c.instance.ctx()).get("kind").cloned(),
        "sets": sets,
    });
    let mut line = json!({
        "instance": instance,
        "conjecture": conjecture.label(),
    });
    let obj = line.as_object_mut().expect("object literal");
    match &r.result {
        Err(e) => {
            obj.insert("feasible".into(), Value::Null);
            obj.insert("error".into(), json!(e.to_string()));
        }
        Ok(rep) => {
            obj.insert("feasible".into(), json!(rep.is_feasible()));
            obj.insert("reverified".into(), json!(rep.reverified()));
            obj.insert("sizes".into(), sizes_json(rep));
            match &rep.outcome {
                ConjectureOutcome::Product(b) => match &b.outcome {
                    Feasibility::Feasible(_) => {
                        obj.insert("witness".into(), json!({ "lambda": b.lambdas }));
                    }
                    Feasibility::Infeasible(cert) => {
                        obj.insert(
                            "violation".into(),
                            json!({
                                "rows": b.system.rows().iter().map(|r| r.label.clone()).collect::<Vec<_>>(),
                                "multipliers": cert.multipliers,
                                "combined_bound": cert.combined_bound,
                            }),
                        );
                    }
                },
                ConjectureOutcome::Additive(a) => match &a.outcome {
                    Feasibility::Feasible(x) => {
                        obj.insert(
                            "witness".into(),
                            json!({ "sigma": x.iter().map(rational_string).collect::<Vec<_>>() }),
                        );
                    }
                    Feasibility::Infeasible(cert) => {
                        obj.insert(
                            "violation".into(),
                            json!({
                                "rows": a.system.rows().iter().map(|r| r.label.clone()).collect::<Vec<_>>(),
                                "multipliers": cert.multipliers.iter().map(rational_string).collect::<Vec<_>>(),
                                "combined_bound": rational_string(&cert.combined_bound),
                            }),
                        );
                    }
                },
            }
        }
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{small_groups, torsion_free_groups};

    fn cfg(conjecture: Conjecture, groups: Vec<CatalogGroup>) -> SearchConfig {
        SearchConfig {
            conjecture,
            groups,
            n: 2,
            set_size_max: 2,
            seed: 7,
            budget: None,
            sample: false,
        }
    }

    #[test]
    fn subsets_are_counted() {
        let pool: Vec<Element> = (0..4).map(|v| vec![v]).collect();
        assert_eq!(small_subsets(&pool, 2).len(), 4 + 6);
        assert_eq!(small_subsets(&pool, 9).len(), 15);
    }

    #[test]
    fn zero_budget_is_empty() {
        let mut c = cfg(Conjecture::Additive, small_groups());
        c.budget = Some(0);
        let out = run_search(&c).unwrap();
        assert_eq!(out.summary, SearchSummary::default());
        assert!(out.records.is_empty());
    }

    #[test]
    fn enumeration_order_and_budget() {
        let groups: Vec<_> = small_groups().into_iter().take(3).collect();
        let c = cfg(Conjecture::Additive, groups);
        let all = enumerate_candidates(&c).unwrap();
        // C1: 1 subset, C2: 3, C3: 6
        assert_eq!(all.len(), 1 + 9 + 36);
        assert_eq!(all[0].id, "C1#0");
        let mut c2 = c.clone();
        c2.budget = Some(5);
        assert_eq!(select_candidates(&c2, all.clone()).len(), 5);
        c2.sample = true;
        let a: Vec<String> = select_candidates(&c2, all.clone()).into_iter().map(|x| x.id).collect();
        let b: Vec<String> = select_candidates(&c2, all).into_iter().map(|x| x.id).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn torsion_free_search_is_feasible() {
        let out = run_search(&cfg(Conjecture::Additive, torsion_free_groups())).unwrap();
        assert!(out.summary.instances > 0);
        assert_eq!(out.summary.infeasible, 0);
        assert_eq!(out.summary.unverified, 0);
    }

    #[test]
    fn records_serialize() {
        let groups: Vec<_> = small_groups().into_iter().skip(1).take(1).collect();
        let out = run_search(&cfg(Conjecture::Additive, groups)).unwrap();
        let lines: Vec<Value> = out.records.iter().map(|r| record_json(out.conjecture, r)).collect();
        assert!(lines.iter().all(|l| l["conjecture"] == "6.2"));
        assert!(lines.iter().any(|l| l.get("violation").is_some()));
        assert!(lines.iter().any(|l| l.get("witness").is_some()));
        assert_eq!(out.counterexample_candidates().count(), out.summary.infeasible);
    }
}
