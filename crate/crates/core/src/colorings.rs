//! Colorings that realize the lower bounds, and color counting on finite samples.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use thiserror::Error;

use crate::ordinal::{Edge, ElementError, Ordinal, OrdinalElement};
use crate::rules::{canonical_rule_of, enumerate_rules, GeneralColoringRule, RuleError};

/// A color; 1-based where colors are indices.
pub type ColorId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error("entry {0} appears twice")]
    Duplicate(i64),
    #[error("edge lives in {found}, coloring expects {expected}")]
    Ambient { expected: Ordinal, found: Ordinal },
    #[error("edge has {found} elements, coloring expects {expected}")]
    Size { expected: usize, found: usize },
}

/// Colors an `n`-edge by the position of the rule it satisfies in the sorted
/// rule list, falling back to color 1.
#[derive(Debug, Clone)]
pub struct RuleColoring {
    ambient: Ordinal,
    n: usize,
    rules: Vec<GeneralColoringRule>,
    index: HashMap<GeneralColoringRule, ColorId>,
}

impl RuleColoring {
    pub fn new(n: usize, ambient: &Ordinal, budget: u64) -> Result<Self, RuleError> {
        let rules = enumerate_rules(n, ambient, None, budget)?;
        let index = rules
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i as ColorId + 1))
            .collect();
        Ok(RuleColoring {
            ambient: ambient.clone(),
            n,
            rules,
            index,
        })
    }

    pub fn rules(&self) -> &[GeneralColoringRule] {
        &self.rules
    }

    /// The rule an edge satisfies, with its color.
    pub fn classify(
        &self,
        e: &Edge,
    ) -> Result<Option<(ColorId, &GeneralColoringRule)>, ColoringError> {
        if e.ambient() != &self.ambient {
            return Err(ColoringError::Ambient {
                expected: self.ambient.clone(),
                found: e.ambient().clone(),
            });
        }
        if e.len() != self.n {
            return Err(ColoringError::Size {
                expected: self.n,
                found: e.len(),
            });
        }
        Ok(canonical_rule_of(e).map(|r| {
            let color = self.index[&r];
            (color, &self.rules[color as usize - 1])
        }))
    }

    pub fn color(&self, e: &Edge) -> Result<ColorId, ColoringError> {
        Ok(self.classify(e)?.map_or(1, |(color, _)| color))
    }
}

/// One-shot [`RuleColoring::color`].
pub fn canonical_color(e: &Edge, budget: u64) -> Result<ColorId, ColoringError> {
    RuleColoring::new(e.len(), e.ambient(), budget)?.color(e)
}

/// Sign pattern of a set of integers read in order of absolute value,
/// negatives first on ties: 1 for entries ≥ 0, 0 for negatives.
pub fn zeta_color(entries: &[i64]) -> Result<Vec<u8>, ColoringError> {
    let mut sorted = entries.to_vec();
    sorted.sort_by_key(|&x| (x.unsigned_abs(), x >= 0));
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(ColoringError::Duplicate(w[0]));
    }
    Ok(sorted.iter().map(|&x| u8::from(x >= 0)).collect())
}

/// Reads a sign pattern as a binary number, first entry most significant,
/// shifted into `1..=2^n`.
pub fn sign_code(signs: &[u8]) -> u64 {
    signs.iter().fold(0, |acc, &s| acc << 1 | u64::from(s)) + 1
}

/// For pairs `(copy, x)` in `ω·k`: sort by `x`, then by copy, and keep the copies.
pub fn omega_k_color(pairs: &[(u64, u64)]) -> Vec<u64> {
    let mut sorted = pairs.to_vec();
    sorted.sort_by_key(|&(copy, x)| (x, copy));
    sorted.into_iter().map(|(copy, _)| copy).collect()
}

/// [`omega_k_color`] on an edge of `ω·k`, copies numbered from 1.
pub fn omega_k_color_edge(e: &Edge) -> Result<Vec<u64>, ColoringError> {
    let a = e.ambient();
    if !a.is_single_term() || a.degree() != 1 {
        return Err(ColoringError::Ambient {
            expected: Ordinal::omega_power(1, a.leading_coeff().max(1)),
            found: a.clone(),
        });
    }
    let pairs: Vec<(u64, u64)> = e
        .elements()
        .iter()
        .map(|el| {
            (
                el.lead() + 1,
                el.lowest().expect("elements of ω·k have a tail"),
            )
        })
        .collect();
    Ok(omega_k_color(&pairs))
}

/// Every color taken by `color` over the `n`-subsets of `sample`.
pub fn realized_colors<T, C, F>(sample: &[T], n: usize, mut color: F) -> BTreeSet<C>
where
    T: Clone,
    C: Ord,
    F: FnMut(&[T]) -> C,
{
    sample
        .iter()
        .cloned()
        .combinations(n)
        .map(|subset| color(&subset))
        .collect()
}

/// The edge that satisfies `r` with class `t` (0-based) taking value
/// `values[t]`; `values` must be strictly increasing.
pub fn realize_rule(r: &GeneralColoringRule, values: &[u64]) -> Result<Edge, ElementError> {
    let mut tails: Vec<Vec<u64>> = r.origins().iter().map(|&c| vec![0; c]).collect();
    for (t, class) in r.classes().iter().enumerate() {
        for v in class {
            let c = r.origins()[v.elem - 1];
            tails[v.elem - 1][c - 1 - v.exp] = values[t];
        }
    }
    let elements = r
        .origins()
        .iter()
        .zip(r.leads())
        .zip(tails)
        .map(|((&c, &b), tail)| OrdinalElement::new(c, b, tail))
        .collect::<Result<Vec<_>, _>>()?;
    Edge::new(r.ambient().clone(), elements)
}

/// A finite sample of `ambient` containing, for every rule on `n`-edges, an
/// edge satisfying it. Class `t` of each rule gets value `t`.
pub fn witness_sample(
    n: usize,
    ambient: &Ordinal,
    budget: u64,
) -> Result<Vec<OrdinalElement>, ColoringError> {
    let rules = enumerate_rules(n, ambient, None, budget)?;
    let values: Vec<u64> = (0..(n * ambient.degree()) as u64).collect();
    let mut sample = BTreeSet::new();
    for r in &rules {
        sample.extend(realize_rule(r, &values)?.elements().iter().cloned());
    }
    Ok(sample.into_iter().collect())
}
