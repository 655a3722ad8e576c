//! Finite prefixes of the sets `H ⊆ α` built from a ground sequence `G ≈ ω`,
//! on which every `n`-edge satisfies a rule.
//!
//! Construction happens on ground indices (as if `G` were `ℕ`) and is mapped
//! through `G` at the end, so the required ground length is known exactly.
//! Only tail coefficients come from `G`; leads are always `0..k`.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::counting::{degree, BigCount};
use crate::ordinal::{Edge, ElementError, Ordinal, OrdinalElement};
use crate::rules::{canonical_rule_of, GeneralColoringRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("ground sequence must be nonempty and strictly increasing")]
    BadGround,
    #[error("ground sequence too short: need {required} entries, have {available}")]
    InsufficientGround { required: u64, available: u64 },
    #[error("{ambient} has only {capacity} elements, asked for {count}")]
    InsufficientCapacity {
        ambient: Ordinal,
        capacity: u64,
        count: usize,
    },
    #[error("ground index overflow; use a smaller prefix")]
    Overflow,
    #[error(transparent)]
    Element(#[from] ElementError),
}

/// A prefix `a_0 < a_1 < ...` of `G`; `Identity` is `a_j = j` without end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundSequence {
    Identity,
    Prefix(Vec<u64>),
}

impl GroundSequence {
    pub fn prefix(values: Vec<u64>) -> Result<Self, ConstructionError> {
        if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConstructionError::BadGround);
        }
        Ok(GroundSequence::Prefix(values))
    }

    fn get(&self, index: u64) -> Result<u64, ConstructionError> {
        match self {
            GroundSequence::Identity => Ok(index),
            GroundSequence::Prefix(values) => usize::try_from(index)
                .ok()
                .and_then(|i| values.get(i).copied())
                .ok_or(ConstructionError::InsufficientGround {
                    required: index.saturating_add(1),
                    available: values.len() as u64,
                }),
        }
    }

    pub fn contains(&self, value: u64) -> bool {
        match self {
            GroundSequence::Identity => true,
            GroundSequence::Prefix(values) => values.binary_search(&value).is_ok(),
        }
    }
}

/// `A_i = {a_j : j = 2^i + t·2^{i+1}}` for `i < parts`, cut to the prefix.
pub fn partition_ground(g: &[u64], parts: usize) -> Result<Vec<Vec<u64>>, ConstructionError> {
    let required = 1u64
        .checked_shl(parts.saturating_sub(1) as u32)
        .filter(|_| parts < 64)
        .ok_or(ConstructionError::Overflow)?
        + 1;
    if parts == 0 || (g.len() as u64) < required {
        return Err(ConstructionError::InsufficientGround {
            required,
            available: g.len() as u64,
        });
    }
    Ok((0..parts)
        .map(|i| {
            g.iter()
                .skip(1 << i)
                .step_by(1 << (i + 1))
                .copied()
                .collect()
        })
        .collect())
}

// index of the t-th member of A_i
fn part_index(i: usize, t: u64) -> Result<u64, ConstructionError> {
    let base = 1u64
        .checked_shl(i as u32)
        .filter(|_| i < 63)
        .ok_or(ConstructionError::Overflow)?;
    t.checked_mul(2 * base)
        .and_then(|x| x.checked_add(base))
        .ok_or(ConstructionError::Overflow)
}

fn into_part(i: usize, tails: Vec<Vec<u64>>) -> Result<Vec<Vec<u64>>, ConstructionError> {
    tails
        .into_iter()
        .map(|tail| tail.into_iter().map(|t| part_index(i, t)).collect())
        .collect()
}

// `count` split as evenly as possible over `parts`, earlier parts larger
fn even_quotas(count: usize, parts: usize) -> impl Iterator<Item = usize> {
    (0..parts).map(move |i| count / parts + usize::from(i < count % parts))
}

// tails (index space) of the first elements of H ≈ ω^d
fn omega_power(d: usize, count: usize) -> Result<Vec<Vec<u64>>, ConstructionError> {
    match d {
        _ if count == 0 => Ok(Vec::new()),
        0 if count > 1 => Err(ConstructionError::InsufficientCapacity {
            ambient: Ordinal::finite(1),
            capacity: 1,
            count,
        }),
        0 => Ok(vec![Vec::new()]),
        1 => Ok((0..count as u64).map(|j| vec![j]).collect()),
        _ => {
            let mut copies = 1;
            while (copies as u128).pow(d as u32) < count as u128 {
                copies += 1;
            }
            let mut out = Vec::with_capacity(count);
            for (i, quota) in (1..=copies).zip(even_quotas(count, copies)) {
                let top = 2 * i as u64 - 1;
                for sub in into_part(i, omega_power(d - 1, quota)?)? {
                    out.push(std::iter::once(top).chain(sub).collect());
                }
            }
            Ok(out)
        }
    }
}

// (lead, tail) pairs in index space for H ≈ ω^d·k
fn omega_power_times(
    d: usize,
    k: u64,
    count: usize,
) -> Result<Vec<(u64, Vec<u64>)>, ConstructionError> {
    if d == 0 {
        if count as u64 > k {
            return Err(ConstructionError::InsufficientCapacity {
                ambient: Ordinal::finite(k),
                capacity: k,
                count,
            });
        }
        return Ok((0..count as u64).map(|b| (b, Vec::new())).collect());
    }
    if k == 1 {
        return Ok(omega_power(d, count)?.into_iter().map(|t| (0, t)).collect());
    }
    // first k copies of ω^d inside H' ≈ ω^{d+1}; copy i's leading ground
    // value a_{2i-1} is renamed to lead i-1
    let copies = usize::try_from(k).unwrap_or(usize::MAX).min(count.max(1));
    let mut out = Vec::with_capacity(count);
    for (i, quota) in (1..=copies).zip(even_quotas(count, copies)) {
        for tail in into_part(i, omega_power(d, quota)?)? {
            out.push((i as u64 - 1, tail));
        }
    }
    Ok(out)
}

/// The first `count` elements of `H ≈ ambient` built from `g`, plus the ground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPrefix {
    pub ambient: Ordinal,
    pub elements: Vec<OrdinalElement>,
    pub ground: GroundSequence,
}

/// Builds a prefix of `H`. Copies of `ω^{d-1}` share elements round-robin,
/// so the prefix samples every copy it touches rather than only the first.
pub fn build_h(
    ambient: &Ordinal,
    g: &GroundSequence,
    count: usize,
) -> Result<HPrefix, ConstructionError> {
    let parts: Vec<usize> = (0..=ambient.degree())
        .rev()
        .filter(|&j| ambient.coeff(j) > 0)
        .collect();
    let raw: Vec<(usize, u64, Vec<u64>)> = if parts.len() <= 1 {
        let d = ambient.degree();
        let k = ambient.coeff(d);
        if k == 0 {
            if count > 0 {
                return Err(ConstructionError::InsufficientCapacity {
                    ambient: ambient.clone(),
                    capacity: 0,
                    count,
                });
            }
            Vec::new()
        } else {
            omega_power_times(d, k, count)?
                .into_iter()
                .map(|(b, tail)| (d, b, tail))
                .collect()
        }
    } else {
        // summand j is built on A_{j+1}; only the finite summand is bounded
        let capacity = |j: usize| if j == 0 { ambient.coeff(0) } else { u64::MAX };
        let total_capacity: u64 = parts
            .iter()
            .map(|&j| capacity(j))
            .fold(0, u64::saturating_add);
        if (count as u64) > total_capacity {
            return Err(ConstructionError::InsufficientCapacity {
                ambient: ambient.clone(),
                capacity: total_capacity,
                count,
            });
        }
        let mut quotas = vec![0usize; parts.len()];
        let mut left = count;
        while left > 0 {
            for (slot, &j) in parts.iter().enumerate() {
                if left > 0 && (quotas[slot] as u64) < capacity(j) {
                    quotas[slot] += 1;
                    left -= 1;
                }
            }
        }
        let mut raw = Vec::with_capacity(count);
        for (&j, &quota) in parts.iter().zip(&quotas) {
            for (b, tail) in omega_power_times(j, ambient.coeff(j), quota)? {
                let tail = tail
                    .into_iter()
                    .map(|t| part_index(j + 1, t))
                    .collect::<Result<_, _>>()?;
                raw.push((j, b, tail));
            }
        }
        raw
    };

    let mut elements = Vec::with_capacity(raw.len());
    for (c, b, tail) in raw {
        let tail = tail
            .into_iter()
            .map(|t| g.get(t))
            .collect::<Result<Vec<_>, _>>();
        let tail = tail.map_err(|_| ConstructionError::InsufficientGround {
            required: required_ground(ambient, count).unwrap_or(u64::MAX),
            available: match g {
                GroundSequence::Identity => u64::MAX,
                GroundSequence::Prefix(v) => v.len() as u64,
            },
        })?;
        elements.push(OrdinalElement::new(c, b, tail)?);
    }
    elements.sort();
    Ok(HPrefix {
        ambient: ambient.clone(),
        elements,
        ground: g.clone(),
    })
}

/// Length of ground prefix that [`build_h`] needs for `count` elements.
pub fn required_ground(ambient: &Ordinal, count: usize) -> Result<u64, ConstructionError> {
    let h = build_h(ambient, &GroundSequence::Identity, count)?;
    Ok(h.elements
        .iter()
        .flat_map(|el| el.tail().iter().copied())
        .max()
        .map_or(0, |m| m + 1))
}

/// Outcome of scanning every `n`-edge of a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixReport {
    pub edges: u64,
    pub satisfied: u64,
    pub rules: BTreeSet<GeneralColoringRule>,
    pub degree: BigCount,
}

impl PrefixReport {
    pub fn all_satisfied(&self) -> bool {
        self.edges == self.satisfied
    }

    pub fn within_bound(&self) -> bool {
        BigCount::from(self.rules.len()) <= self.degree
    }
}

pub fn verify_prefix(h: &HPrefix, n: usize) -> Result<PrefixReport, ConstructionError> {
    let mut report = PrefixReport {
        edges: 0,
        satisfied: 0,
        rules: BTreeSet::new(),
        degree: degree(n, &h.ambient),
    };
    for subset in h.elements.iter().cloned().combinations(n) {
        let e = Edge::new(h.ambient.clone(), subset)?;
        report.edges += 1;
        if let Some(r) = canonical_rule_of(&e) {
            report.satisfied += 1;
            report.rules.insert(r);
        }
    }
    Ok(report)
}
