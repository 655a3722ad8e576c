//! Coloring rules on n-element subsets of an ordinal below ω^ω.
//!
//! A [`GeneralColoringRule`] fixes, for each of its `n` element indices, the
//! summand the element comes from (its origin `c_i`) and its lead coefficient
//! `b_i`, plus a total preorder on the tail variables `a_{i,j}` (`j < c_i`).
//! The preorder is stored as an ordered sequence of equivalence classes, earlier
//! classes being strictly smaller. Rules on `ω^d·k` where every origin is `d`
//! are the plain coloring rules.
//!
//! Rule indices are 1-based and ordered by the lowest tail variable `a_{i,0}`;
//! elements without tail variables (origin 0) take the highest indices, in
//! increasing lead order.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::ordinal::{Edge, Ordinal, OrdinalElement};

/// Default cap on the number of partial rules visited by [`enumerate_rules`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("origin map has {origins} entries but lead map has {leads}")]
    LengthMismatch { origins: usize, leads: usize },
    #[error("element {elem}: origin {origin} is not a summand of the ambient ordinal")]
    OriginOutOfRange { elem: usize, origin: usize },
    #[error("element {elem}: lead {lead} must be below {bound}")]
    LeadOutOfRange { elem: usize, lead: u64, bound: u64 },
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("{0} is not a variable of this rule")]
    UnknownVariable(Var),
    #[error("{0} appears in more than one class")]
    RepeatedVariable(Var),
    #[error("{0} is not in any class")]
    MissingVariable(Var),
    #[error("enumeration exceeded the budget of {budget} partial rules")]
    BudgetExceeded { budget: u64 },
    #[error("interleaving must pick {expected} of {total} class positions, got {got:?}")]
    Interleaving {
        expected: usize,
        total: usize,
        got: Vec<usize>,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A tail variable `a_{elem,exp}`; `elem` is a 1-based rule index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub elem: usize,
    pub exp: usize,
}

impl Var {
    pub const fn new(elem: usize, exp: usize) -> Self {
        Var { elem, exp }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{},{}]", self.elem, self.exp)
    }
}

/// The six rule criteria, numbered as usual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    IndexOrdering = 1,
    SharedLead = 2,
    HighFirst = 3,
    SameExponent = 4,
    HighSplit = 5,
    OriginSplit = 6,
}

/// The triple `(C, Y, ⪯_X)`; see the module docs.
///
/// Ordering and equality are structural: lexicographic on `(C, Y, classes)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralColoringRule {
    origins: Vec<usize>,
    leads: Vec<u64>,
    classes: Vec<Vec<Var>>,
    ambient: Ordinal,
}

impl GeneralColoringRule {
    /// Builds a rule after checking that `classes` partitions the tail
    /// variables. The criteria are not checked; see [`Self::is_valid`].
    pub fn new(
        ambient: Ordinal,
        origins: Vec<usize>,
        leads: Vec<u64>,
        mut classes: Vec<Vec<Var>>,
    ) -> Result<Self, RuleError> {
        if origins.len() != leads.len() {
            return Err(RuleError::LengthMismatch {
                origins: origins.len(),
                leads: leads.len(),
            });
        }
        for (idx, (&c, &b)) in origins.iter().zip(&leads).enumerate() {
            let bound = ambient.coeff(c);
            if bound == 0 || c > ambient.degree() {
                return Err(RuleError::OriginOutOfRange {
                    elem: idx + 1,
                    origin: c,
                });
            }
            if b >= bound {
                return Err(RuleError::LeadOutOfRange {
                    elem: idx + 1,
                    lead: b,
                    bound,
                });
            }
        }
        let mut seen = HashSet::new();
        for (idx, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(RuleError::EmptyClass(idx));
            }
            class.sort();
            for &v in class.iter() {
                if v.elem == 0 || v.elem > origins.len() || v.exp >= origins[v.elem - 1] {
                    return Err(RuleError::UnknownVariable(v));
                }
                if !seen.insert(v) {
                    return Err(RuleError::RepeatedVariable(v));
                }
            }
        }
        for (idx, &c) in origins.iter().enumerate() {
            for exp in 0..c {
                let v = Var::new(idx + 1, exp);
                if !seen.contains(&v) {
                    return Err(RuleError::MissingVariable(v));
                }
            }
        }
        Ok(GeneralColoringRule {
            origins,
            leads,
            classes,
            ambient,
        })
    }

    /// The only rule on 0-element subsets.
    pub fn empty(ambient: Ordinal) -> Self {
        GeneralColoringRule {
            origins: Vec::new(),
            leads: Vec::new(),
            classes: Vec::new(),
            ambient,
        }
    }

    pub fn n(&self) -> usize {
        self.origins.len()
    }

    pub fn ambient(&self) -> &Ordinal {
        &self.ambient
    }

    /// `C`: origin exponent of each rule index.
    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    /// `Y`: lead coefficient of each rule index.
    pub fn leads(&self) -> &[u64] {
        &self.leads
    }

    pub fn classes(&self) -> &[Vec<Var>] {
        &self.classes
    }

    /// Number of equivalence classes.
    pub fn size(&self) -> usize {
        self.classes.len()
    }

    /// True when this is a plain coloring rule: single-summand ambient.
    pub fn is_plain(&self) -> bool {
        self.ambient.is_single_term()
    }

    // class index of every variable, as table[elem - 1][exp]
    fn class_table(&self) -> Vec<Vec<usize>> {
        let mut table: Vec<Vec<usize>> = self.origins.iter().map(|&c| vec![0; c]).collect();
        for (ci, class) in self.classes.iter().enumerate() {
            for v in class {
                table[v.elem - 1][v.exp] = ci;
            }
        }
        table
    }

    /// The lowest-numbered criterion this rule violates, if any.
    pub fn violation(&self) -> Option<Criterion> {
        let cls = self.class_table();
        let n = self.n();
        let c = &self.origins;
        let y = &self.leads;

        let index_ordering = if self.ambient.degree() == 0 {
            y.windows(2).all(|w| w[0] < w[1])
        } else {
            let tailful = c.iter().take_while(|&&ci| ci > 0).count();
            let tailless = &c[tailful..];
            tailless.iter().all(|&ci| ci == 0)
                && (1..tailful).all(|i| cls[i - 1][0] < cls[i][0])
                && y[tailful..].windows(2).all(|w| w[0] < w[1])
        };
        if !index_ordering {
            return Some(Criterion::IndexOrdering);
        }

        let same_exp_pairs = || {
            self.classes.iter().flat_map(|class| {
                class
                    .iter()
                    .tuple_combinations()
                    .filter(|(u, v): &(&Var, &Var)| u.exp == v.exp)
            })
        };
        if same_exp_pairs().any(|(u, v)| y[u.elem - 1] != y[v.elem - 1]) {
            return Some(Criterion::SharedLead);
        }
        if (0..n).any(|i| (1..c[i]).any(|j| cls[i][j] >= cls[i][j - 1])) {
            return Some(Criterion::HighFirst);
        }
        if self
            .classes
            .iter()
            .any(|class| class.iter().any(|v| v.exp != class[0].exp))
        {
            return Some(Criterion::SameExponent);
        }
        for (i, k) in (0..n).tuple_combinations() {
            let shared = c[i].min(c[k]);
            if (1..shared).any(|j| cls[i][j] != cls[k][j] && cls[i][j - 1] == cls[k][j - 1]) {
                return Some(Criterion::HighSplit);
            }
        }
        // different origins never share a class; equal leads across
        // different summands are allowed (they are different variables)
        if self
            .classes
            .iter()
            .any(|class| class.iter().any(|v| c[v.elem - 1] != c[class[0].elem - 1]))
        {
            return Some(Criterion::OriginSplit);
        }
        None
    }

    /// True iff all six criteria hold.
    pub fn is_valid(&self) -> bool {
        self.violation().is_none()
    }

    /// A structured, machine-readable view of the rule.
    pub fn record(&self) -> RuleRecord {
        RuleRecord {
            n: self.n(),
            ambient: self.ambient.to_string(),
            size: self.size(),
            c: self.origins.clone(),
            b: self.leads.clone(),
            classes: self
                .classes
                .iter()
                .map(|class| class.iter().map(|v| [v.elem, v.exp]).collect())
                .collect(),
        }
    }
}

/// Structured form of a rule: nested arrays, classes as lists of `[i, j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleRecord {
    pub n: usize,
    pub ambient: String,
    pub size: usize,
    pub c: Vec<usize>,
    pub b: Vec<u64>,
    pub classes: Vec<Vec<[usize; 2]>>,
}

impl Serialize for GeneralColoringRule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.record().serialize(serializer)
    }
}

impl fmt::Display for GeneralColoringRule {
    /// `c: 2,1; b: 0,6; a[1,1] < a[2,0] < a[1,0]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() == 0 {
            return f.write_str("(empty rule)");
        }
        write!(
            f,
            "c: {}; b: {}",
            self.origins.iter().join(","),
            self.leads.iter().join(",")
        )?;
        if !self.classes.is_empty() {
            let chain = self
                .classes
                .iter()
                .map(|class| class.iter().join(" = "))
                .join(" < ");
            write!(f, "; {chain}")?;
        }
        Ok(())
    }
}

/// Assigns rule indices to the elements of `e`.
///
/// Returns `order` with `order[r]` the position in `e.elements()` of the
/// element receiving rule index `r + 1`. Absent when two elements tie on `a_0`.
pub fn rule_index_assignment(e: &Edge) -> Option<Vec<usize>> {
    let (mut tailful, mut tailless): (Vec<_>, Vec<_>) = e
        .elements()
        .iter()
        .enumerate()
        .partition(|(_, el)| el.origin() > 0);
    tailful.sort_by_key(|(_, el)| el.lowest());
    if tailful
        .windows(2)
        .any(|w| w[0].1.lowest() == w[1].1.lowest())
    {
        return None;
    }
    tailless.sort_by_key(|(_, el)| el.lead());
    Some(
        tailful
            .into_iter()
            .chain(tailless)
            .map(|(idx, _)| idx)
            .collect(),
    )
}

/// Whether `e` satisfies `r`: origins and leads match under the rule-index
/// assignment, and the tail values induce exactly the preorder of `r`.
pub fn satisfies(e: &Edge, r: &GeneralColoringRule) -> bool {
    if e.ambient() != r.ambient() || e.len() != r.n() {
        return false;
    }
    let Some(order) = rule_index_assignment(e) else {
        return false;
    };
    let elems: Vec<&OrdinalElement> = order.iter().map(|&idx| &e.elements()[idx]).collect();
    let matches_map = elems
        .iter()
        .enumerate()
        .all(|(i, el)| el.origin() == r.origins()[i] && el.lead() == r.leads()[i]);
    if !matches_map {
        return false;
    }
    let vars: Vec<(usize, u64)> = r
        .classes()
        .iter()
        .enumerate()
        .flat_map(|(ci, class)| class.iter().map(move |v| (ci, v)).collect::<Vec<_>>())
        .map(|(ci, v)| (ci, elems[v.elem - 1].coeff(v.exp)))
        .collect();
    vars.iter()
        .all(|&(cu, au)| vars.iter().all(|&(cv, av)| (cu <= cv) == (au <= av)))
}

/// The rule induced by `e`'s own decomposition, when it is a valid rule.
pub fn canonical_rule_of(e: &Edge) -> Option<GeneralColoringRule> {
    let order = rule_index_assignment(e)?;
    let elems: Vec<&OrdinalElement> = order.iter().map(|&idx| &e.elements()[idx]).collect();
    let mut values: Vec<(u64, Var)> = elems
        .iter()
        .enumerate()
        .flat_map(|(i, el)| (0..el.origin()).map(move |j| (el.coeff(j), Var::new(i + 1, j))))
        .collect();
    values.sort();
    let classes = values
        .into_iter()
        .chunk_by(|(value, _)| *value)
        .into_iter()
        .map(|(_, group)| group.map(|(_, v)| v).collect())
        .collect();
    let rule = GeneralColoringRule::new(
        e.ambient().clone(),
        elems.iter().map(|el| el.origin()).collect(),
        elems.iter().map(|el| el.lead()).collect(),
        classes,
    )
    .ok()?;
    rule.is_valid().then_some(rule)
}

/// Every valid rule on `n`-element subsets of `ambient`, sorted, optionally
/// restricted to one size.
///
/// This is a direct search over origin/lead maps and ordered set partitions of
/// the tail variables, pruned by the criteria as classes are appended. It
/// never consults the counting recurrences.
pub fn enumerate_rules(
    n: usize,
    ambient: &Ordinal,
    size: Option<usize>,
    budget: u64,
) -> Result<Vec<GeneralColoringRule>, RuleError> {
    let mut search = Search {
        ambient,
        size,
        budget,
        nodes: 0,
        out: Vec::new(),
    };
    search.run(n)?;
    let mut rules = search.out;
    rules.sort();
    Ok(rules)
}

struct Search<'a> {
    ambient: &'a Ordinal,
    size: Option<usize>,
    budget: u64,
    nodes: u64,
    out: Vec<GeneralColoringRule>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), RuleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(RuleError::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn run(&mut self, n: usize) -> Result<(), RuleError> {
        let ambient = self.ambient;
        let tail_origins: Vec<usize> = (1..=ambient.degree())
            .filter(|&c| ambient.coeff(c) > 0)
            .collect();
        let finite = ambient.coeff(0);
        for tailful in 0..=n {
            let tailless = n - tailful;
            if (tailless as u64) > finite || (tailful > 0 && tail_origins.is_empty()) {
                continue;
            }
            // (origin, lead) choices for one tailful slot
            let slot: Vec<(usize, u64)> = tail_origins
                .iter()
                .flat_map(|&c| (0..ambient.coeff(c)).map(move |b| (c, b)))
                .collect();
            if tailful > 0 && slot.is_empty() {
                continue;
            }
            // odometer over slot choices for each tailful element
            let mut digits = vec![0usize; tailful];
            loop {
                let heads: Vec<(usize, u64)> = digits.iter().map(|&i| slot[i]).collect();
                for low in (0..finite).combinations(tailless) {
                    self.tick()?;
                    let origins: Vec<usize> = heads
                        .iter()
                        .map(|&(c, _)| c)
                        .chain(std::iter::repeat_n(0, tailless))
                        .collect();
                    let leads: Vec<u64> = heads.iter().map(|&(_, b)| b).chain(low).collect();
                    self.partitions(&origins, &leads, tailful)?;
                }
                let Some(pos) = digits.iter().rposition(|&i| i + 1 < slot.len()) else {
                    break;
                };
                digits[pos] += 1;
                digits[pos + 1..].iter_mut().for_each(|i| *i = 0);
            }
        }
        Ok(())
    }

    fn partitions(
        &mut self,
        origins: &[usize],
        leads: &[u64],
        tailful: usize,
    ) -> Result<(), RuleError> {
        let mut state = PartitionState {
            origins,
            leads,
            tailful,
            class_of: origins.iter().map(|&c| vec![None; c]).collect(),
            classes: Vec::new(),
            remaining: origins.iter().sum(),
        };
        self.grow(&mut state)
    }

    fn grow(&mut self, st: &mut PartitionState<'_>) -> Result<(), RuleError> {
        if st.remaining == 0 {
            let rule = GeneralColoringRule {
                origins: st.origins.to_vec(),
                leads: st.leads.to_vec(),
                classes: st.classes.clone(),
                ambient: self.ambient.clone(),
            };
            assert!(rule.size() <= rule.n() * self.ambient.degree());
            debug_assert!(rule.is_valid(), "enumerated invalid rule {rule}");
            if self.size.is_none_or(|p| p == rule.size()) {
                self.out.push(rule);
            }
            return Ok(());
        }
        if self.size.is_some_and(|p| st.classes.len() >= p) {
            return Ok(());
        }
        // a variable may open the next class once everything that must
        // precede it strictly is already placed
        let available: Vec<Var> = (0..st.tailful)
            .flat_map(|i| (0..st.origins[i]).map(move |j| Var::new(i + 1, j)))
            .filter(|v| {
                let i = v.elem - 1;
                st.class_of[i][v.exp].is_none()
                    && (v.exp + 1 == st.origins[i] || st.class_of[i][v.exp + 1].is_some())
                    && (v.exp > 0 || i == 0 || st.class_of[i - 1][0].is_some())
            })
            .collect();
        let groups = available
            .into_iter()
            .into_group_map_by(|v| (v.exp, st.origins[v.elem - 1], st.leads[v.elem - 1]));
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort();
        for key in keys {
            let group = &groups[&key];
            for mask in 1u64..(1u64 << group.len()) {
                let class: Vec<Var> = group
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                if key.0 == 0 && class.len() > 1 {
                    continue;
                }
                let split_ok = class.iter().tuple_combinations().all(|(u, v)| {
                    let above = u.exp + 1;
                    above >= st.origins[u.elem - 1]
                        || st.class_of[u.elem - 1][above] == st.class_of[v.elem - 1][above]
                });
                if !split_ok {
                    continue;
                }
                self.tick()?;
                st.place(class);
                self.grow(st)?;
                st.unplace();
            }
        }
        Ok(())
    }
}

struct PartitionState<'a> {
    origins: &'a [usize],
    leads: &'a [u64],
    tailful: usize,
    class_of: Vec<Vec<Option<usize>>>,
    classes: Vec<Vec<Var>>,
    remaining: usize,
}

impl PartitionState<'_> {
    fn place(&mut self, class: Vec<Var>) {
        for v in &class {
            self.class_of[v.elem - 1][v.exp] = Some(self.classes.len());
        }
        self.remaining -= class.len();
        self.classes.push(class);
    }

    fn unplace(&mut self) {
        let class = self.classes.pop().expect("class to remove");
        for v in &class {
            self.class_of[v.elem - 1][v.exp] = None;
        }
        self.remaining += class.len();
    }
}

/// The pieces [`combine`] assembles a rule from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Split {
    pub tau1: GeneralColoringRule,
    pub tau2: GeneralColoringRule,
    /// Positions (0-based, increasing) of `tau1`'s classes among the merged
    /// classes, not counting a prepended leading class.
    pub interleaving: Vec<usize>,
    /// The common lead of `tau1`'s elements; present exactly in plain mode.
    pub lead_choice: Option<u64>,
}

/// Merges two rules into one on a larger ordinal.
///
/// With `lead_choice = Some(b)` (plain mode) `tau1` is a rule on `ω^{d-1}` and
/// `tau2` one on `ω^d·k`: the result is a rule on `ω^d·k` whose leading class
/// collects the new top variables of `tau1`'s elements, all of which get lead
/// `b`. With `lead_choice = None` (general mode) `tau1` is a rule on
/// `ω^d·k_d` and `tau2` one on an ordinal below `ω^d`; the result lives on
/// their sum and has no extra class.
pub fn combine(
    tau1: &GeneralColoringRule,
    tau2: &GeneralColoringRule,
    interleaving: &[usize],
    lead_choice: Option<u64>,
) -> Result<GeneralColoringRule, RuleError> {
    let pre = |msg: &str| Err(RuleError::Precondition(msg.to_string()));
    if !tau1.is_valid() || !tau2.is_valid() {
        return pre("inputs must be valid rules");
    }
    let top = tau1.ambient().degree();
    let (ambient, lift) = match lead_choice {
        Some(b) => {
            let outer = tau2.ambient();
            let d = outer.degree();
            if !outer.is_single_term() || d == 0 {
                return pre("plain mode needs tau2 on ω^d·k with d ≥ 1");
            }
            if *tau1.ambient() != Ordinal::omega_power(d - 1, 1) {
                return pre("plain mode needs tau1 on ω^(d-1)");
            }
            if tau1.n() == 0 {
                return pre("plain mode needs tau1 to have at least one element");
            }
            if b >= outer.leading_coeff() {
                return pre("lead choice must be below k");
            }
            (outer.clone(), true)
        }
        None => {
            if !tau1.ambient().is_single_term() || top == 0 {
                return pre("general mode needs tau1 on ω^d·k with d ≥ 1");
            }
            if tau2.ambient().is_zero() || tau2.ambient().degree() >= top {
                return pre("general mode needs tau2 on a nonzero ordinal below ω^d");
            }
            let mut coeffs = tau2.ambient().coeffs().to_vec();
            coeffs.resize(top + 1, 0);
            coeffs[top] = tau1.ambient().leading_coeff();
            (Ordinal::new(coeffs), false)
        }
    };

    let total = tau1.size() + tau2.size();
    let well_formed = interleaving.len() == tau1.size()
        && interleaving.windows(2).all(|w| w[0] < w[1])
        && interleaving.iter().all(|&pos| pos < total);
    if !well_formed {
        return Err(RuleError::Interleaving {
            expected: tau1.size(),
            total,
            got: interleaving.to_vec(),
        });
    }

    let m = tau1.n();
    let shift = |v: &Var| Var::new(v.elem + m, v.exp);
    let mut first = tau1.classes().iter();
    let mut second = tau2.classes().iter();
    let mut classes: Vec<Vec<Var>> = Vec::with_capacity(total + 1);
    let d = ambient.degree();
    if lift {
        classes.push((1..=m).map(|i| Var::new(i, d - 1)).collect());
    }
    for pos in 0..total {
        if interleaving.contains(&pos) {
            classes.push(first.next().expect("tau1 class").clone());
        } else {
            classes.push(
                second
                    .next()
                    .expect("tau2 class")
                    .iter()
                    .map(shift)
                    .collect(),
            );
        }
    }

    let (origins, leads): (Vec<usize>, Vec<u64>) = match lead_choice {
        Some(b) => std::iter::repeat_n((d, b), m)
            .chain(tau2.leads().iter().map(|&y| (d, y)))
            .unzip(),
        None => tau1
            .origins()
            .iter()
            .copied()
            .zip(tau1.leads().iter().copied())
            .chain(
                tau2.origins()
                    .iter()
                    .copied()
                    .zip(tau2.leads().iter().copied()),
            )
            .unzip(),
    };
    let rule = reindex(ambient, origins, leads, classes)?;
    debug_assert!(rule.is_valid(), "combine produced invalid rule {rule}");
    Ok(rule)
}

// renumbers elements so that rule indices follow the first criterion
fn reindex(
    ambient: Ordinal,
    origins: Vec<usize>,
    leads: Vec<u64>,
    classes: Vec<Vec<Var>>,
) -> Result<GeneralColoringRule, RuleError> {
    let n = origins.len();
    let mut low_class = vec![usize::MAX; n];
    for (ci, class) in classes.iter().enumerate() {
        for v in class.iter().filter(|v| v.exp == 0) {
            low_class[v.elem - 1] = ci;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (origins[i] == 0, low_class[i], leads[i]));
    let mut new_index = vec![0; n];
    for (pos, &old) in order.iter().enumerate() {
        new_index[old] = pos + 1;
    }
    let classes = classes
        .into_iter()
        .map(|class| {
            class
                .into_iter()
                .map(|v| Var::new(new_index[v.elem - 1], v.exp))
                .collect()
        })
        .collect();
    GeneralColoringRule::new(
        ambient,
        order.iter().map(|&i| origins[i]).collect(),
        order.iter().map(|&i| leads[i]).collect(),
        classes,
    )
}

/// Inverts [`combine`]. The mode follows the ambient ordinal: plain for
/// `ω^d·k` with `d ≥ 1`, general for ordinals with two or more summands.
pub fn split(r: &GeneralColoringRule) -> Result<Split, RuleError> {
    let pre = |msg: &str| Err(RuleError::Precondition(msg.to_string()));
    if !r.is_valid() {
        return pre("split needs a valid rule");
    }
    let ambient = r.ambient();
    let d = ambient.degree();
    if ambient.is_zero() || d == 0 {
        return pre("rules on finite ordinals do not split");
    }
    let plain = ambient.is_single_term();
    let (in_first, rest): (Vec<bool>, &[Vec<Var>]) = if plain {
        let Some(lead_class) = r.classes().first() else {
            return pre("plain split needs a leading class");
        };
        if lead_class.iter().any(|v| v.exp != d - 1) {
            return pre("leading class must hold top variables");
        }
        let mut flags = vec![false; r.n()];
        for v in lead_class {
            flags[v.elem - 1] = true;
        }
        (flags, &r.classes()[1..])
    } else {
        (r.origins().iter().map(|&c| c == d).collect(), r.classes())
    };

    // new indices inside each part keep the original relative order
    let mut renumber = vec![0; r.n()];
    let (mut count1, mut count2) = (0, 0);
    for (i, &first) in in_first.iter().enumerate() {
        if first {
            count1 += 1;
            renumber[i] = count1;
        } else {
            count2 += 1;
            renumber[i] = count2;
        }
    }

    let mut classes1 = Vec::new();
    let mut classes2 = Vec::new();
    let mut interleaving = Vec::new();
    for (pos, class) in rest.iter().enumerate() {
        let side = in_first[class[0].elem - 1];
        if class.iter().any(|v| in_first[v.elem - 1] != side) {
            return pre("a class mixes elements of both parts");
        }
        let renamed: Vec<Var> = class
            .iter()
            .map(|v| Var::new(renumber[v.elem - 1], v.exp))
            .collect();
        if side {
            interleaving.push(pos);
            classes1.push(renamed);
        } else {
            classes2.push(renamed);
        }
    }

    let pick = |want: bool| -> (Vec<usize>, Vec<u64>) {
        (0..r.n())
            .filter(|&i| in_first[i] == want)
            .map(|i| (r.origins()[i], r.leads()[i]))
            .unzip()
    };
    let (origins1, leads1) = pick(true);
    let (origins2, leads2) = pick(false);

    if plain {
        let lead = leads1[0];
        if leads1.iter().any(|&b| b != lead) {
            return pre("leading class elements disagree on lead");
        }
        let tau1 = GeneralColoringRule::new(
            Ordinal::omega_power(d - 1, 1),
            vec![d - 1; count1],
            vec![0; count1],
            classes1,
        )?;
        let tau2 = GeneralColoringRule::new(ambient.clone(), origins2, leads2, classes2)?;
        Ok(Split {
            tau1,
            tau2,
            interleaving,
            lead_choice: Some(lead),
        })
    } else {
        let tau1 = GeneralColoringRule::new(
            Ordinal::omega_power(d, ambient.leading_coeff()),
            origins1,
            leads1,
            classes1,
        )?;
        let tau2 = GeneralColoringRule::new(ambient.lower_part(), origins2, leads2, classes2)?;
        Ok(Split {
            tau1,
            tau2,
            interleaving,
            lead_choice: None,
        })
    }
}
