//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is stored as its coefficient vector `(k_0, k_1, ..., k_d)`,
//! index `j` holding the coefficient of `ω^j`. An element of an ordinal is kept
//! in the decomposed form used by coloring rules: the summand `ω^c·k_c` it
//! originated from, its coefficient `b < k_c` on `ω^c`, and the remaining
//! coefficients `a_{c-1}, ..., a_0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest exponent accepted by [`parse_ordinal`].
pub const DEFAULT_EXPONENT_LIMIT: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent {exp} appears more than once (position {pos})")]
    DuplicateExponent { exp: usize, pos: usize },
    #[error("exponent {exp} exceeds the limit {limit} (position {pos})")]
    ExponentTooLarge {
        exp: usize,
        limit: usize,
        pos: usize,
    },
    #[error("explicit zero coefficient at position {pos}")]
    ZeroCoefficient { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("element with origin {origin} needs {origin} tail coefficients, got {len}")]
    TailLength { origin: usize, len: usize },
    #[error("origin {origin} exceeds the degree {degree} of the ambient ordinal")]
    OriginOutOfRange { origin: usize, degree: usize },
    #[error("the ambient ordinal has no ω^{origin} summand")]
    EmptyPart { origin: usize },
    #[error("lead coefficient {lead} must be below {bound}")]
    LeadOutOfRange { lead: u64, bound: u64 },
    #[error("{value} is not below the ambient ordinal {ambient}")]
    NotBelow { value: Ordinal, ambient: Ordinal },
    #[error("edge contains the element {0} twice")]
    DuplicateElement(OrdinalElement),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An ordinal `ω^d·k_d + ⋯ + ω·k_1 + k_0` below ω^ω.
///
/// The coefficient vector never has trailing zeros; the empty vector is 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    coeffs: Vec<u64>,
}

impl Ordinal {
    /// Builds an ordinal from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ordinal { coeffs }
    }

    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn finite(k: u64) -> Self {
        Ordinal::new(vec![k])
    }

    /// `ω^d · k`.
    pub fn omega_power(d: usize, k: u64) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = k;
        Ordinal::new(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `ω^exp`, zero past the degree.
    pub fn coeff(&self, exp: usize) -> u64 {
        self.coeffs.get(exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest exponent with a nonzero coefficient; 0 for finite ordinals.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// True for ordinals of the form `ω^d · k` with `k ≥ 1`.
    pub fn is_single_term(&self) -> bool {
        !self.is_zero() && self.coeffs[..self.degree()].iter().all(|&c| c == 0)
    }

    /// The ordinal with the leading summand removed.
    pub fn lower_part(&self) -> Ordinal {
        Ordinal::new(self.coeffs[..self.degree()].to_vec())
    }

    /// `ω^d·k_d + ⋯ + ω^{exp+1}·k_{exp+1}`: every summand strictly above `exp`.
    pub fn part_above(&self, exp: usize) -> Ordinal {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j > exp { c } else { 0 })
            .collect();
        Ordinal::new(coeffs)
    }

    /// Nonzero summands `(exponent, coefficient)` in descending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (exp, k)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            match (exp, k) {
                (0, k) => write!(f, "{k}")?,
                (1, 1) => f.write_str("w")?,
                (1, k) => write!(f, "w*{k}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, k) => write!(f, "w^{e}*{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `term ("+" term)*` with `term := "w" ["^" nat] ["*" nat] | nat`.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, ParseError> {
    parse_ordinal_with_limit(text, DEFAULT_EXPONENT_LIMIT)
}

pub fn parse_ordinal_with_limit(text: &str, limit: usize) -> Result<Ordinal, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut coeffs: Vec<u64> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    let mut lone_zero = false;
    let mut terms = 0usize;
    loop {
        let term_pos = lexer.pos();
        let (exp, k) = lexer.term(limit)?;
        terms += 1;
        if k == 0 {
            // a bare "0" is the zero ordinal, but only on its own
            if exp.is_some() {
                return Err(ParseError::ZeroCoefficient { pos: term_pos });
            }
            lone_zero = true;
        } else {
            let exp = exp.unwrap_or(0);
            if seen.contains(&exp) {
                return Err(ParseError::DuplicateExponent { exp, pos: term_pos });
            }
            seen.push(exp);
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] = k;
        }
        if lexer.eat('+') {
            continue;
        }
        lexer.expect_end()?;
        break;
    }
    if lone_zero && terms > 1 {
        return Err(ParseError::ZeroCoefficient { pos: 0 });
    }
    Ok(Ordinal::new(coeffs))
}

struct Lexer<'a> {
    chars: Vec<char>,
    idx: usize,
    _text: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            idx: 0,
            _text: text,
        }
    }

    fn skip_ws(&mut self) {
        while self.idx < self.chars.len() && self.chars[self.idx].is_whitespace() {
            self.idx += 1;
        }
    }

    fn pos(&mut self) -> usize {
        self.skip_ws();
        self.idx
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&mut self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.syntax(format!("unexpected '{c}'")),
        }
    }

    fn natural(&mut self) -> Result<u64, ParseError> {
        let start = self.pos();
        let mut end = start;
        while end < self.chars.len() && self.chars[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return self.syntax("expected a natural number");
        }
        let digits: String = self.chars[start..end].iter().collect();
        self.idx = end;
        digits.parse().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: format!("number {digits} is too large"),
        })
    }

    /// One term; returns `(Some(exp), coeff)` for `w` terms and `(None, n)` for naturals.
    fn term(&mut self, limit: usize) -> Result<(Option<usize>, u64), ParseError> {
        match self.peek() {
            Some('w') | Some('ω') => {
                self.idx += 1;
                let exp_pos = self.pos();
                let exp = if self.eat('^') {
                    let e = self.natural()?;
                    usize::try_from(e).ok().filter(|&e| e <= limit).ok_or(
                        ParseError::ExponentTooLarge {
                            exp: e.try_into().unwrap_or(usize::MAX),
                            limit,
                            pos: exp_pos,
                        },
                    )?
                } else {
                    1
                };
                let k = if self.eat('*') { self.natural()? } else { 1 };
                Ok((Some(exp), k))
            }
            Some(c) if c.is_ascii_digit() => Ok((None, self.natural()?)),
            Some(c) => self.syntax(format!("unexpected '{c}'")),
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// An element of an ambient ordinal, decomposed as (origin `c`, lead `b`,
/// tail `a_{c-1}, ..., a_0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalElement {
    origin: usize,
    lead: u64,
    tail: Vec<u64>,
}

impl OrdinalElement {
    /// `tail` lists the coefficients from exponent `origin - 1` down to 0.
    pub fn new(origin: usize, lead: u64, tail: Vec<u64>) -> Result<Self, ElementError> {
        if tail.len() != origin {
            return Err(ElementError::TailLength {
                origin,
                len: tail.len(),
            });
        }
        Ok(OrdinalElement { origin, lead, tail })
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn lead(&self) -> u64 {
        self.lead
    }

    /// Tail coefficients, highest exponent first.
    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    /// The tail coefficient `a_exp` (the coefficient of `ω^exp`), for `exp < origin`.
    pub fn coeff(&self, exp: usize) -> u64 {
        self.tail[self.origin - 1 - exp]
    }

    /// `a_0`, absent for elements of the finite summand.
    pub fn lowest(&self) -> Option<u64> {
        self.tail.last().copied()
    }

    /// Checks that the element lies in `ambient`.
    pub fn check_in(&self, ambient: &Ordinal) -> Result<(), ElementError> {
        if self.origin > ambient.degree() || ambient.is_zero() {
            return Err(ElementError::OriginOutOfRange {
                origin: self.origin,
                degree: ambient.degree(),
            });
        }
        let bound = ambient.coeff(self.origin);
        if bound == 0 {
            return Err(ElementError::EmptyPart {
                origin: self.origin,
            });
        }
        if self.lead >= bound {
            return Err(ElementError::LeadOutOfRange {
                lead: self.lead,
                bound,
            });
        }
        Ok(())
    }

    /// Absolute Cantor-normal-form value inside `ambient`.
    pub fn value(&self, ambient: &Ordinal) -> Ordinal {
        let mut coeffs = ambient.part_above(self.origin).coeffs;
        coeffs.resize(ambient.degree().max(self.origin) + 1, 0);
        coeffs[self.origin] = self.lead;
        for (j, &a) in self.tail.iter().rev().enumerate() {
            coeffs[j] = a;
        }
        Ordinal::new(coeffs)
    }
}

impl Ord for OrdinalElement {
    /// Order within a shared ambient ordinal: earlier summands (larger origin)
    /// first, then `(b, a_{c-1}, ..., a_0)` lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .origin
            .cmp(&self.origin)
            .then_with(|| self.lead.cmp(&other.lead))
            .then_with(|| self.tail.cmp(&other.tail))
    }
}

impl PartialOrd for OrdinalElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={};b={};a=", self.origin, self.lead)?;
        for (idx, a) in self.tail.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Compares two elements of `ambient` as ordinals.
pub fn compare_elements(
    ambient: &Ordinal,
    x: &OrdinalElement,
    y: &OrdinalElement,
) -> Result<Ordering, ElementError> {
    x.check_in(ambient)?;
    y.check_in(ambient)?;
    Ok(x.cmp(y))
}

/// Decomposes an absolute value `value < ambient` into (origin, lead, tail).
pub fn element_from_value(
    ambient: &Ordinal,
    value: &Ordinal,
) -> Result<OrdinalElement, ElementError> {
    if value >= ambient {
        return Err(ElementError::NotBelow {
            value: value.clone(),
            ambient: ambient.clone(),
        });
    }
    // the origin is the largest c with value < ω^d·k_d + ⋯ + ω^c·k_c
    let origin = (0..=ambient.degree())
        .rev()
        .find(|&c| *value < ambient.part_above(c).plus_term(c, ambient.coeff(c)))
        .expect("value below ambient has an origin");
    let tail = (0..origin).rev().map(|j| value.coeff(j)).collect();
    OrdinalElement::new(origin, value.coeff(origin), tail)
}

impl Ordinal {
    // adds ω^exp·k to an ordinal whose summands all lie strictly above exp
    fn plus_term(mut self, exp: usize, k: u64) -> Ordinal {
        if self.coeffs.len() <= exp {
            self.coeffs.resize(exp + 1, 0);
        }
        self.coeffs[exp] += k;
        Ordinal::new(self.coeffs)
    }
}

/// A set of distinct elements of a fixed ambient ordinal, stored in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    ambient: Ordinal,
    elements: Vec<OrdinalElement>,
}

impl Edge {
    pub fn new(ambient: Ordinal, mut elements: Vec<OrdinalElement>) -> Result<Self, ElementError> {
        for e in &elements {
            e.check_in(&ambient)?;
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(ElementError::DuplicateElement(w[0].clone()));
        }
        Ok(Edge { ambient, elements })
    }

    /// Builds an edge from absolute Cantor-normal-form values.
    pub fn from_values(ambient: Ordinal, values: &[Ordinal]) -> Result<Self, ElementError> {
        let elements = values
            .iter()
            .map(|v| element_from_value(&ambient, v))
            .collect::<Result<Vec<_>, _>>()?;
        Edge::new(ambient, elements)
    }

    pub fn ambient(&self) -> &Ordinal {
        &self.ambient
    }

    pub fn elements(&self) -> &[OrdinalElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Parses one element of `ambient`. Accepted forms:
///
/// - `c=2;b=0;a=1,4` — the decomposition itself;
/// - `w*6 + 2` — an absolute value;
/// - `w*6 + 2 @origin1` — a value inside the `ω^1·k_1` summand.
pub fn parse_element(ambient: &Ordinal, text: &str) -> Result<OrdinalElement, ElementError> {
    let text = text.trim();
    let element = if text.starts_with("c=") || text.starts_with("c =") {
        parse_literal(text)?
    } else if let Some((value, origin)) = text.split_once('@') {
        let origin = origin.trim();
        let digits = origin
            .strip_prefix("origin")
            .ok_or_else(|| ParseError::Syntax {
                pos: text.len() - origin.len(),
                msg: "expected '@origin<N>'".into(),
            })?;
        let origin: usize = digits.trim().parse().map_err(|_| ParseError::Syntax {
            pos: text.len() - digits.len(),
            msg: "expected an origin exponent".into(),
        })?;
        let value = parse_ordinal(value)?;
        relative_element(ambient, origin, &value)?
    } else {
        element_from_value(ambient, &parse_ordinal(text)?)?
    };
    element.check_in(ambient)?;
    Ok(element)
}

fn relative_element(
    ambient: &Ordinal,
    origin: usize,
    value: &Ordinal,
) -> Result<OrdinalElement, ElementError> {
    let part = Ordinal::omega_power(origin, ambient.coeff(origin));
    if value >= &part {
        return Err(ElementError::NotBelow {
            value: value.clone(),
            ambient: part,
        });
    }
    let tail = (0..origin).rev().map(|j| value.coeff(j)).collect();
    OrdinalElement::new(origin, value.coeff(origin), tail)
}

fn literal_error(msg: &str) -> ElementError {
    ElementError::Parse(ParseError::Syntax {
        pos: 0,
        msg: msg.into(),
    })
}

fn parse_literal(text: &str) -> Result<OrdinalElement, ElementError> {
    let mut origin = None;
    let mut lead = None;
    let mut tail = Vec::new();
    for field in text.split(';') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| literal_error("expected key=value"))?;
        let value = value.trim();
        match key.trim() {
            "c" => origin = Some(value.parse().map_err(|_| literal_error("bad c"))?),
            "b" => lead = Some(value.parse().map_err(|_| literal_error("bad b"))?),
            "a" => {
                tail = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| literal_error("bad a")))
                    .collect::<Result<_, _>>()?
            }
            other => return Err(literal_error(&format!("unknown field '{other}'"))),
        }
    }
    let origin = origin.ok_or_else(|| literal_error("missing c"))?;
    let lead = lead.ok_or_else(|| literal_error("missing b"))?;
    OrdinalElement::new(origin, lead, tail)
}

/// Parses a comma-separated list of elements into an edge of `ambient`.
///
/// The `a=` list of an element literal consumes exactly `c` naturals, so
/// literals may be mixed with value forms: `c=2;b=0;a=1,4, w*6+2 @origin1`.
pub fn parse_edge(ambient: &Ordinal, text: &str) -> Result<Edge, ElementError> {
    let mut items: Vec<String> = Vec::new();
    let mut missing = 0usize;
    for seg in text.split(',') {
        let seg = seg.trim();
        if missing > 0 {
            let last = items.last_mut().expect("pending literal");
            last.push(',');
            last.push_str(seg);
            missing -= 1;
            continue;
        }
        if seg.is_empty() {
            if text.trim().is_empty() {
                continue;
            }
            return Err(literal_error("empty element"));
        }
        if seg.starts_with("c=") || seg.starts_with("c =") {
            let partial = parse_literal_prefix(seg)?;
            missing = partial;
        }
        items.push(seg.to_string());
    }
    if missing > 0 {
        return Err(literal_error("element literal has too few a-values"));
    }
    let elements = items
        .iter()
        .map(|item| parse_element(ambient, item))
        .collect::<Result<Vec<_>, _>>()?;
    Edge::new(ambient.clone(), elements)
}

// number of a-values a literal segment still needs from following segments
fn parse_literal_prefix(seg: &str) -> Result<usize, ElementError> {
    let mut origin = None;
    let mut have = 0usize;
    for field in seg.split(';') {
        if let Some((key, value)) = field.split_once('=') {
            match key.trim() {
                "c" => origin = value.trim().parse::<usize>().ok(),
                "a" => have = usize::from(!value.trim().is_empty()),
                _ => {}
            }
        }
    }
    let origin = origin.ok_or_else(|| literal_error("bad c"))?;
    Ok(origin.saturating_sub(have))
}
