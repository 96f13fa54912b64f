//! Base rule families and the element-wise transforms applied to them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::Support;

/// A rule family before any transform, or the interval family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    Even,
    Odd,
    Squares,
    Cubes,
    Primes,
    MultiplesOf(u32),
    /// `{k, k^2, k^3, ...}`; `k^0 = 1` is not a member.
    PowersOf(u32),
    /// Numbers whose last decimal digit is `k`.
    EndsIn(u32),
    /// Numbers congruent to `k` modulo 5.
    FiveNPlus(u32),
    Interval,
}

impl Family {
    /// Stable machine tag used in exported spaces.
    pub fn tag(&self) -> String {
        match self {
            Family::Even => "even".into(),
            Family::Odd => "odd".into(),
            Family::Squares => "squares".into(),
            Family::Cubes => "cubes".into(),
            Family::Primes => "primes".into(),
            Family::MultiplesOf(k) => format!("multiples-of-{k}"),
            Family::PowersOf(k) => format!("powers-of-{k}"),
            Family::EndsIn(k) => format!("ends-in-{k}"),
            Family::FiveNPlus(k) => format!("5n+{k}"),
            Family::Interval => "interval".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        let num = |prefix: &str| tag.strip_prefix(prefix).and_then(|k| k.parse::<u32>().ok());
        Some(match tag {
            "even" => Family::Even,
            "odd" => Family::Odd,
            "squares" => Family::Squares,
            "cubes" => Family::Cubes,
            "primes" => Family::Primes,
            "interval" => Family::Interval,
            _ => {
                if let Some(k) = num("multiples-of-") {
                    Family::MultiplesOf(k)
                } else if let Some(k) = num("powers-of-") {
                    Family::PowersOf(k)
                } else if let Some(k) = num("ends-in-") {
                    Family::EndsIn(k)
                } else {
                    Family::FiveNPlus(num("5n+")?)
                }
            }
        })
    }

    /// Prompt-facing label of the untransformed family.
    pub fn label(&self) -> String {
        match self {
            Family::Even => "even numbers".into(),
            Family::Odd => "odd numbers".into(),
            Family::Squares => "squares".into(),
            Family::Cubes => "cubes".into(),
            Family::Primes => "primes".into(),
            Family::MultiplesOf(k) => format!("multiples of {k}"),
            Family::PowersOf(k) => format!("powers of {k}"),
            Family::EndsIn(k) => format!("ends in {k}"),
            Family::FiveNPlus(k) => format!("5n plus {k}"),
            Family::Interval => "interval".into(),
        }
    }

    /// Members of the family inside `{1, ..., d}`. Empty for `Interval`.
    pub fn extension(&self, d: u32) -> Vec<u64> {
        let d64 = d as u64;
        let upto = 1..=d64;
        match *self {
            Family::Even => upto.filter(|n| n % 2 == 0).collect(),
            Family::Odd => upto.filter(|n| n % 2 == 1).collect(),
            Family::Squares => (1..).map(|k: u64| k * k).take_while(|&v| v <= d64).collect(),
            Family::Cubes => (1..)
                .map(|k: u64| k * k * k)
                .take_while(|&v| v <= d64)
                .collect(),
            Family::Primes => primes_upto(d),
            Family::MultiplesOf(k) if k > 0 => upto.filter(|n| n % k as u64 == 0).collect(),
            Family::PowersOf(k) if k > 1 => {
                let mut out = Vec::new();
                let mut v = k as u64;
                while v <= d64 {
                    out.push(v);
                    v *= k as u64;
                }
                out
            }
            Family::EndsIn(k) if k < 10 => upto.filter(|n| n % 10 == k as u64).collect(),
            Family::FiveNPlus(k) if k < 5 => upto.filter(|n| n % 5 == k as u64).collect(),
            _ => Vec::new(),
        }
    }
}

fn primes_upto(d: u32) -> Vec<u64> {
    let n = d as usize;
    let mut composite = alloc::vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Element-wise map applied to every member of a base extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Transform {
    /// `mul * n + add`
    Affine { mul: u32, add: i32 },
    /// `2^(n + shift) + add`
    Exp2 { shift: u32, add: i32 },
}

impl Transform {
    pub fn apply(&self, n: u64) -> Option<u64> {
        let value = match *self {
            Transform::Affine { mul, add } => (mul as i64)
                .checked_mul(n as i64)?
                .checked_add(add as i64)?,
            Transform::Exp2 { shift, add } => {
                let e = n.checked_add(shift as u64)?;
                if e > 62 {
                    return None;
                }
                (1i64 << e) + add as i64
            }
        };
        u64::try_from(value).ok()
    }

    /// Support of `family` mapped through this transform, intersected with the domain.
    pub fn map_support(transform: Option<Transform>, family: Family, d: u32) -> Support {
        let base = family.extension(d);
        match transform {
            None => Support::from_values(d, base),
            Some(t) => Support::from_values(d, base.into_iter().filter_map(|n| t.apply(n))),
        }
    }

    pub fn parse(text: &str) -> Option<Transform> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let s = compact.as_str();
        if let Some(rest) = s.strip_prefix("2^") {
            let (shift, tail) = if let Some(r) = rest.strip_prefix("(n+") {
                let close = r.find(')')?;
                (r[..close].parse::<u32>().ok()?, &r[close + 1..])
            } else {
                (0, rest.strip_prefix('n')?)
            };
            return Some(Transform::Exp2 {
                shift,
                add: parse_offset(tail)?,
            });
        }
        let npos = s.find('n')?;
        let mul = if npos == 0 {
            1
        } else {
            s[..npos].parse::<u32>().ok()?
        };
        Some(Transform::Affine {
            mul,
            add: parse_offset(&s[npos + 1..])?,
        })
    }
}

fn parse_offset(tail: &str) -> Option<i32> {
    if tail.is_empty() {
        Some(0)
    } else if let Some(v) = tail.strip_prefix('+') {
        v.parse().ok()
    } else if let Some(v) = tail.strip_prefix('-') {
        v.parse::<i32>().ok().map(|v| -v)
    } else {
        None
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let offset = |f: &mut fmt::Formatter<'_>, add: i32| match add {
            0 => Ok(()),
            a if a > 0 => write!(f, "+{a}"),
            a => write!(f, "{a}"),
        };
        match *self {
            Transform::Affine { mul, add } => {
                if mul != 1 {
                    write!(f, "{mul}")?;
                }
                f.write_str("n")?;
                offset(f, add)
            }
            Transform::Exp2 { shift, add } => {
                if shift == 0 {
                    f.write_str("2^n")?;
                } else {
                    write!(f, "2^(n+{shift})")?;
                }
                offset(f, add)
            }
        }
    }
}

/// Rule families of the classic experiments, in dedup priority order.
pub fn tenenbaum_families() -> Vec<Family> {
    let mut fams = alloc::vec![
        Family::Even,
        Family::Odd,
        Family::Squares,
        Family::Cubes,
        Family::Primes,
    ];
    fams.extend((3..=12).map(Family::MultiplesOf));
    fams.extend((2..=10).map(Family::PowersOf));
    fams.extend((0..=9).map(Family::EndsIn));
    fams.extend((1..=4).map(Family::FiveNPlus));
    fams
}

/// The 15 primordial families; these double as the grouped prompt labels.
pub fn bigelow_families() -> Vec<Family> {
    let mut fams = alloc::vec![
        Family::Even,
        Family::Odd,
        Family::Squares,
        Family::Cubes,
        Family::Primes,
    ];
    fams.extend((3..=12).map(Family::MultiplesOf));
    fams
}

/// Transforms applied to every primordial family, after the identity.
pub const BIGELOW_TRANSFORMS: [Transform; 13] = [
    Transform::Affine { mul: 1, add: 1 },
    Transform::Affine { mul: 1, add: -1 },
    Transform::Affine { mul: 1, add: 2 },
    Transform::Affine { mul: 1, add: -2 },
    Transform::Affine { mul: 2, add: 0 },
    Transform::Affine { mul: 3, add: 0 },
    Transform::Affine { mul: 2, add: 1 },
    Transform::Affine { mul: 3, add: -1 },
    Transform::Affine { mul: 3, add: 1 },
    Transform::Exp2 { shift: 0, add: 0 },
    Transform::Exp2 { shift: 1, add: 0 },
    Transform::Exp2 { shift: 0, add: 1 },
    Transform::Exp2 { shift: 0, add: -1 },
];

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn base_extensions() {
        assert_eq!(Family::PowersOf(2).extension(100), vec![2, 4, 8, 16, 32, 64]);
        assert_eq!(Family::Cubes.extension(100), vec![1, 8, 27, 64]);
        assert_eq!(Family::Primes.extension(100).len(), 25);
        assert_eq!(Family::EndsIn(0).extension(30), vec![10, 20, 30]);
        assert_eq!(Family::FiveNPlus(2).extension(20), vec![2, 7, 12, 17]);
        assert_eq!(Family::PowersOf(5).extension(200), vec![5, 25, 125]);
    }

    #[test]
    fn transform_text_round_trip() {
        for t in BIGELOW_TRANSFORMS {
            assert_eq!(Transform::parse(&t.to_string()), Some(t), "{t}");
        }
        assert_eq!(Transform::parse("2n + 1"), Some(Transform::Affine { mul: 2, add: 1 }));
        assert_eq!(Transform::parse("banana"), None);
    }

    #[test]
    fn transform_maps_elements() {
        let t = Transform::Affine { mul: 2, add: 1 };
        let s = Transform::map_support(Some(t), Family::MultiplesOf(3), 100);
        assert_eq!(s.iter().take(3).collect::<Vec<_>>(), vec![7, 13, 19]);
        let pow = Transform::map_support(Some(Transform::Exp2 { shift: 0, add: 0 }), Family::Even, 100);
        assert_eq!(pow.iter().collect::<Vec<_>>(), vec![4, 16, 64]);
        assert_eq!(Family::from_tag(&Family::FiveNPlus(3).tag()), Some(Family::FiveNPlus(3)));
    }
}
