//! Rough-set machinery: indiscernibility partitions, lower/upper
//! approximations, dependency degree, and reduct search.
//!
//! The dependency degree γ is kept as an exact integer fraction
//! ([`Gamma`]) and compared with integer cross-multiplication, never with
//! floating-point equality — reduct search decisions hinge on exact
//! comparisons like γ(R) = γ(C).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::DecisionTable;

/// Largest attribute count [`exhaustive_reducts`] accepts by default; the
/// subset lattice doubles per attribute.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

/// Dependency degree as the exact fraction |POS| / |U|.
///
/// Equality and ordering compare the fractions by cross-multiplication, so
/// `Gamma::new(2, 4)` equals `Gamma::new(1, 2)` and no rounding is involved.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "GammaData")]
pub struct Gamma {
    numerator: usize,
    denominator: usize,
}

#[derive(Deserialize)]
struct GammaData {
    numerator: usize,
    denominator: usize,
}

impl TryFrom<GammaData> for Gamma {
    type Error = Error;

    fn try_from(raw: GammaData) -> Result<Self> {
        Gamma::new(raw.numerator, raw.denominator)
    }
}

impl Gamma {
    pub fn new(numerator: usize, denominator: usize) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::invalid("gamma denominator must be nonzero".to_string()));
        }
        if numerator > denominator {
            return Err(Error::invalid(format!(
                "gamma {numerator}/{denominator} exceeds 1"
            )));
        }
        Ok(Gamma {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> usize {
        self.numerator
    }

    pub fn denominator(&self) -> usize {
        self.denominator
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialEq for Gamma {
    fn eq(&self, other: &Self) -> bool {
        (self.numerator as u128) * (other.denominator as u128)
            == (other.numerator as u128) * (self.denominator as u128)
    }
}

impl Eq for Gamma {}

impl PartialOrd for Gamma {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gamma {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let left = (self.numerator as u128) * (other.denominator as u128);
        let right = (other.numerator as u128) * (self.denominator as u128);
        left.cmp(&right)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// A partition of the sample indices `0..universe` into disjoint blocks.
///
/// Canonical form: each block is sorted ascending and blocks are ordered by
/// their smallest member, so two equal partitions compare equal field-wise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionData")]
pub struct Partition {
    universe: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct PartitionData {
    universe: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionData> for Partition {
    type Error = Error;

    fn try_from(raw: PartitionData) -> Result<Self> {
        Partition::new(raw.blocks, raw.universe)
    }
}

impl Partition {
    /// Validates that `blocks` are nonempty, disjoint, and cover exactly
    /// `0..universe`, then stores them in canonical order.
    pub fn new(mut blocks: Vec<Vec<usize>>, universe: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut total = 0usize;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::invalid("partition blocks must be nonempty".to_string()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= universe {
                    return Err(Error::invalid(format!(
                        "partition member {i} outside universe of size {universe}"
                    )));
                }
                if !seen.insert(i) {
                    return Err(Error::invalid(format!(
                        "partition blocks overlap at sample {i}"
                    )));
                }
            }
            total += block.len();
        }
        if total != universe {
            return Err(Error::invalid(format!(
                "partition covers {total} of {universe} samples"
            )));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { universe, blocks })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Groups `0..keys.len()` by equal key. Rows with the same key land in
    /// the same block.
    fn group_by_key<K: Ord>(keys: Vec<K>) -> Partition {
        let universe = keys.len();
        let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for (i, key) in keys.into_iter().enumerate() {
            groups.entry(key).or_default().push(i);
        }
        Partition::new(groups.into_values().collect(), universe)
            .expect("grouping always yields a valid partition")
    }
}

/// Indiscernibility partition of the samples with respect to a set of
/// condition attributes. The empty set makes every sample indiscernible,
/// giving a single block.
pub fn partition_by(table: &DecisionTable, attrs: &BTreeSet<usize>) -> Result<Partition> {
    for &a in attrs {
        if a >= table.n_attributes() {
            return Err(Error::AttributeOutOfRange {
                index: a,
                attributes: table.n_attributes(),
            });
        }
    }
    let keys: Vec<Vec<usize>> = (0..table.universe_size())
        .map(|i| attrs.iter().map(|&a| table.code(i, a)).collect())
        .collect();
    Ok(Partition::group_by_key(keys))
}

/// Partition of the samples by their decision class.
pub fn decision_partition(table: &DecisionTable) -> Partition {
    Partition::group_by_key(table.decision_codes().to_vec())
}

/// Union of the blocks entirely contained in `target`: the samples that can
/// be classified as members of `target` with certainty.
pub fn lower_approx(p: &Partition, target: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for block in p.blocks() {
        if block.iter().all(|i| target.contains(i)) {
            out.extend(block.iter().copied());
        }
    }
    out
}

/// Union of the blocks that intersect `target`: the samples that can only be
/// classified as possible members of `target`.
pub fn upper_approx(p: &Partition, target: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for block in p.blocks() {
        if block.iter().any(|i| target.contains(i)) {
            out.extend(block.iter().copied());
        }
    }
    out
}

/// Positive, boundary, and negative regions of partition `q` with respect to
/// partition `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionReport {
    pub positive: BTreeSet<usize>,
    pub boundary: BTreeSet<usize>,
    pub negative: BTreeSet<usize>,
}

/// Computes the three regions: positive is the union of lower approximations
/// of q's blocks, negative is everything outside all upper approximations,
/// and boundary is what remains between them.
pub fn regions(p: &Partition, q: &Partition) -> Result<RegionReport> {
    if p.universe_size() != q.universe_size() {
        return Err(Error::LengthMismatch {
            left: p.universe_size(),
            right: q.universe_size(),
        });
    }
    let mut positive = BTreeSet::new();
    let mut upper_union = BTreeSet::new();
    for block in q.blocks() {
        let target: BTreeSet<usize> = block.iter().copied().collect();
        positive.extend(lower_approx(p, &target));
        upper_union.extend(upper_approx(p, &target));
    }
    let boundary: BTreeSet<usize> = upper_union.difference(&positive).copied().collect();
    let negative: BTreeSet<usize> = (0..p.universe_size())
        .filter(|i| !upper_union.contains(i))
        .collect();
    Ok(RegionReport {
        positive,
        boundary,
        negative,
    })
}

/// Dependency degree γ_attrs(D): the fraction of samples in the positive
/// region of the decision with respect to the given condition attributes.
pub fn gamma(table: &DecisionTable, attrs: &BTreeSet<usize>) -> Result<Gamma> {
    let p = partition_by(table, attrs)?;
    let d = decision_partition(table);
    let report = regions(&p, &d)?;
    Gamma::new(report.positive.len(), table.universe_size())
}

/// Outcome of the greedy reduct search.
///
/// `selected` lists every attribute added, in order — including termination-
/// guard additions made at zero marginal gain. `gamma_trace` records only the
/// strictly improving additions with the γ reached by each, so its γ values
/// are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductResult {
    pub selected: Vec<usize>,
    pub gamma_trace: Vec<(usize, Gamma)>,
    pub gamma_full: Gamma,
    pub reached_full: bool,
}

impl ReductResult {
    /// The selected attributes as a set.
    pub fn reduct(&self) -> BTreeSet<usize> {
        self.selected.iter().copied().collect()
    }

    /// Serializable summary naming the attributes of `table`.
    pub fn report(&self, table: &DecisionTable) -> ReductReport {
        let name = |a: usize| table.attribute_names()[a].clone();
        ReductReport {
            selected_indices: self.selected.clone(),
            selected_names: self.selected.iter().map(|&a| name(a)).collect(),
            gamma_trace: self
                .gamma_trace
                .iter()
                .map(|&(a, g)| TraceEntry {
                    attribute_index: a,
                    attribute_name: name(a),
                    gamma: g,
                    gamma_value: g.as_f64(),
                })
                .collect(),
            gamma_full: self.gamma_full,
            gamma_full_value: self.gamma_full.as_f64(),
            reached_full: self.reached_full,
        }
    }
}

/// JSON-facing form of [`ReductResult`] with attribute names attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductReport {
    pub selected_indices: Vec<usize>,
    pub selected_names: Vec<String>,
    pub gamma_trace: Vec<TraceEntry>,
    pub gamma_full: Gamma,
    pub gamma_full_value: f64,
    pub reached_full: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub attribute_index: usize,
    pub attribute_name: String,
    pub gamma: Gamma,
    pub gamma_value: f64,
}

/// Greedy forward selection of condition attributes.
///
/// Starting from the empty set, each pass adds the attribute whose addition
/// yields the greatest γ (ties to the lowest index) provided it strictly
/// improves on the current γ; the loop stops when γ of the selected set
/// equals γ of all attributes. If a pass finds no strict improvement while γ
/// is still short of full (attributes that only help jointly), the lowest-
/// index unused attribute is added as a termination guard and the search
/// continues; such additions appear in `selected` but not in `gamma_trace`.
/// Because γ is exact, the guarded loop always reaches full γ within |C|
/// additions; `reached_full` is kept as a defensive signal.
pub fn quick_reduct(table: &DecisionTable) -> Result<ReductResult> {
    let n = table.n_attributes();
    if n == 0 {
        return Err(Error::invalid(
            "reduct search needs at least one condition attribute".to_string(),
        ));
    }
    let all: BTreeSet<usize> = (0..n).collect();
    let gamma_full = gamma(table, &all)?;

    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    let mut current = gamma(table, &chosen)?;
    let mut selected = Vec::new();
    let mut gamma_trace = Vec::new();

    while current < gamma_full {
        let candidates: Vec<usize> = (0..n).filter(|a| !chosen.contains(a)).collect();
        if candidates.is_empty() {
            break; // unreachable: γ of the full set equals gamma_full
        }
        let gains: Vec<(usize, Gamma)> = candidates
            .par_iter()
            .map(|&a| {
                let mut with_a = chosen.clone();
                with_a.insert(a);
                let g = gamma(table, &with_a).expect("candidate attribute is in range");
                (a, g)
            })
            .collect();
        // Lowest index wins ties: candidates are ascending and only a
        // strictly greater γ displaces the current best.
        let (mut best_a, mut best_g) = gains[0];
        for &(a, g) in &gains[1..] {
            if g > best_g {
                best_a = a;
                best_g = g;
            }
        }
        if best_g > current {
            chosen.insert(best_a);
            selected.push(best_a);
            gamma_trace.push((best_a, best_g));
            current = best_g;
        } else {
            // No single attribute helps; γ monotonicity means adding one
            // cannot hurt either, so take the lowest-index unused attribute
            // and keep going. γ of the grown set equals `current` exactly.
            let guard = candidates[0];
            chosen.insert(guard);
            selected.push(guard);
        }
    }

    let reached_full = current == gamma_full;
    Ok(ReductResult {
        selected,
        gamma_trace,
        gamma_full,
        reached_full,
    })
}

/// Every reduct of the table, found by explicit subset enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReducts {
    /// All attribute sets reaching full γ from which no attribute can be
    /// removed, in ascending cardinality then lexicographic order.
    pub reducts: Vec<BTreeSet<usize>>,
    /// The reducts of minimum cardinality.
    pub minimal: Vec<BTreeSet<usize>>,
    pub gamma_full: Gamma,
}

/// Enumerates all attribute subsets in ascending cardinality and keeps those
/// that reach the full-set γ and stay short of it after removing any single
/// attribute (removing one is enough to test: γ is monotone, so if any proper
/// subset reached full γ, some one-attribute removal would too).
///
/// A constant decision makes the empty set the unique reduct. Tables wider
/// than `cap` attributes are rejected — the lattice has 2^|C| subsets.
pub fn exhaustive_reducts(table: &DecisionTable, cap: usize) -> Result<ExhaustiveReducts> {
    let n = table.n_attributes();
    if n > cap {
        return Err(Error::ExhaustiveCapExceeded {
            attributes: n,
            cap,
        });
    }
    let all: BTreeSet<usize> = (0..n).collect();
    let gamma_full = gamma(table, &all)?;

    let mut reducts: Vec<BTreeSet<usize>> = Vec::new();
    let mut prev_full: BTreeSet<Vec<usize>> = BTreeSet::new();
    for k in 0..=n {
        let mut this_full: BTreeSet<Vec<usize>> = BTreeSet::new();
        for combo in (0..n).combinations(k) {
            let subset: BTreeSet<usize> = combo.iter().copied().collect();
            if gamma(table, &subset)? != gamma_full {
                continue;
            }
            let irreducible = combo.iter().all(|&a| {
                let without: Vec<usize> = combo.iter().copied().filter(|&b| b != a).collect();
                !prev_full.contains(&without)
            });
            if irreducible {
                reducts.push(subset);
            }
            this_full.insert(combo);
        }
        prev_full = this_full;
    }

    let min_len = reducts.first().map_or(0, |r| r.len());
    let minimal = reducts.iter().filter(|r| r.len() == min_len).cloned().collect();
    Ok(ExhaustiveReducts {
        reducts,
        minimal,
        gamma_full,
    })
}

/// Intersection of all given reducts: the attributes no reduct can do
/// without.
pub fn core_attributes(reducts: &[BTreeSet<usize>]) -> Result<BTreeSet<usize>> {
    let first = reducts
        .first()
        .ok_or_else(|| Error::invalid("core of an empty reduct list is undefined".to_string()))?;
    let mut core = first.clone();
    for r in &reducts[1..] {
        core = core.intersection(r).copied().collect();
    }
    Ok(core)
}
