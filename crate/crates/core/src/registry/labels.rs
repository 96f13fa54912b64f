//! Canonical label grammar and the synonym table used to match free text.
//!
//! Canonical forms:
//!
//! ```text
//! even numbers | odd numbers | squares | cubes | primes
//! multiples of K | powers of K | ends in K | 5n plus K
//! <rule> mapped by <transform>        e.g. "primes mapped by 2n+1"
//! interval A..B | all numbers | other
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::families::{Family, Transform};
use super::{Hypothesis, HypothesisKind};
use crate::Support;

/// Bumped whenever the synonym table changes matching behaviour.
pub const SYNONYM_TABLE_VERSION: u32 = 1;

/// Label of the residual candidate; never has executable support.
pub const OTHER_LABEL: &str = "other";
pub const ALL_NUMBERS_LABEL: &str = "all numbers";

const MAPPED_BY: &str = " mapped by ";

const NUMBER_WORDS: [(&str, &str); 12] = [
    ("one", "1"),
    ("two", "2"),
    ("three", "3"),
    ("four", "4"),
    ("five", "5"),
    ("six", "6"),
    ("seven", "7"),
    ("eight", "8"),
    ("nine", "9"),
    ("ten", "10"),
    ("eleven", "11"),
    ("twelve", "12"),
];

/// Whole-string synonyms, applied after whitespace and number-word cleanup.
const PHRASES: [(&str, &str); 16] = [
    ("even", "even numbers"),
    ("even number", "even numbers"),
    ("odd", "odd numbers"),
    ("odd number", "odd numbers"),
    ("square numbers", "squares"),
    ("perfect squares", "squares"),
    ("square", "squares"),
    ("cube numbers", "cubes"),
    ("perfect cubes", "cubes"),
    ("cube", "cubes"),
    ("prime numbers", "primes"),
    ("prime", "primes"),
    ("any number", ALL_NUMBERS_LABEL),
    ("every number", ALL_NUMBERS_LABEL),
    ("all integers", ALL_NUMBERS_LABEL),
    ("anything", ALL_NUMBERS_LABEL),
];

/// Canonical text of a hypothesis. The inverse of [`parse_label`] on supports.
pub fn format_label(family: Family, transform: Option<Transform>, support: &Support) -> String {
    match family {
        Family::Interval => interval_label(support),
        _ => match transform {
            None => family.label(),
            Some(t) => format!("{}{MAPPED_BY}{t}", family.label()),
        },
    }
}

pub(crate) fn interval_label(support: &Support) -> String {
    let (lo, hi) = (support.first().unwrap_or(1), support.last().unwrap_or(1));
    if lo == 1 && hi == support.domain_size() {
        ALL_NUMBERS_LABEL.to_string()
    } else {
        format!("interval {lo}..{hi}")
    }
}

/// Lowercases, trims and rewrites known synonyms into the canonical grammar.
pub fn canonicalize(text: &str) -> String {
    let lowered = text.trim().trim_end_matches('.').to_lowercase();
    let words: Vec<&str> = lowered
        .split_whitespace()
        .map(|w| {
            NUMBER_WORDS
                .iter()
                .find(|(word, _)| *word == w)
                .map_or(w, |(_, digit)| digit)
        })
        .collect();
    let mut s = words.join(" ");
    for prefix in ["the ", "numbers that are ", "numbers which are "] {
        if let Some(rest) = s.strip_prefix(prefix) {
            s = rest.to_string();
        }
    }
    if let Some((_, canon)) = PHRASES.iter().find(|(p, _)| *p == s) {
        return canon.to_string();
    }
    if let Some(interval) = interval_phrase(&s) {
        return interval;
    }
    for prefix in ["numbers ending in ", "ending in ", "ends with ", "numbers that end in ", "end in "] {
        if let Some(k) = s.strip_prefix(prefix) {
            return format!("ends in {k}");
        }
    }
    if let Some(k) = s.strip_prefix("powers of ") {
        return format!("powers of {k}");
    }
    s
}

fn interval_phrase(s: &str) -> Option<String> {
    let body = ["numbers between ", "between ", "numbers from ", "from "]
        .iter()
        .find_map(|p| s.strip_prefix(p))
        .unwrap_or(s);
    let (a, b) = body
        .split_once(" and ")
        .or_else(|| body.split_once(" to "))
        .or_else(|| body.split_once('-'))?;
    let a: u32 = a.trim().parse().ok()?;
    let b: u32 = b.trim().parse().ok()?;
    Some(format!("interval {a}..{b}"))
}

/// Resolves a label to an executable hypothesis over `{1, ..., d}`.
///
/// Returns `None` for free text outside the grammar, for `"other"`, and for
/// labels whose support would be empty.
pub fn parse_label(text: &str, d: u32) -> Option<Hypothesis> {
    let canon = canonicalize(text);
    let (base, transform) = match canon.split_once(MAPPED_BY) {
        Some((b, t)) => (b, Some(Transform::parse(t)?)),
        None => (canon.as_str(), None),
    };
    if transform.is_none() {
        if let Some(support) = parse_interval(base, d) {
            return Some(Hypothesis::new(
                HypothesisKind::Interval,
                Family::Interval,
                None,
                support,
            ));
        }
    }
    let family = parse_family(base)?;
    let support = Transform::map_support(transform, family, d);
    if support.is_empty() {
        return None;
    }
    Some(Hypothesis::new(HypothesisKind::Rule, family, transform, support))
}

fn parse_interval(text: &str, d: u32) -> Option<Support> {
    if text == ALL_NUMBERS_LABEL {
        return Some(Support::full(d));
    }
    let (a, b) = text.strip_prefix("interval ")?.split_once("..")?;
    let (a, b): (u32, u32) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (1 <= a && a <= b && b <= d).then(|| Support::range(d, a, b))
}

fn parse_family(text: &str) -> Option<Family> {
    let num = |prefix: &str| text.strip_prefix(prefix).and_then(|k| k.trim().parse::<u32>().ok());
    let family = match text {
        "even numbers" => Family::Even,
        "odd numbers" => Family::Odd,
        "squares" => Family::Squares,
        "cubes" => Family::Cubes,
        "primes" => Family::Primes,
        _ => {
            if let Some(k) = num("multiples of ") {
                Family::MultiplesOf(k)
            } else if let Some(k) = num("powers of ") {
                Family::PowersOf(k)
            } else if let Some(k) = num("ends in ") {
                Family::EndsIn(k)
            } else {
                Family::FiveNPlus(num("5n plus ").or_else(|| num("5n+"))?)
            }
        }
    };
    let valid = match family {
        Family::MultiplesOf(k) => k >= 2,
        Family::PowersOf(k) => k >= 2,
        Family::EndsIn(k) => k <= 9,
        Family::FiveNPlus(k) => k <= 4,
        _ => true,
    };
    valid.then_some(family)
}
