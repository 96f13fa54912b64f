//! Brute-force reference for the classic d=100/200 number game.
//!
//! Built from plain membership predicates and direct products, sharing no code
//! with the engine: no bitsets, no log-space, no registry.

type Predicate = Box<dyn Fn(u32) -> bool>;

pub struct OracleHypothesis {
    pub name: String,
    pub is_rule: bool,
    pub members: Vec<bool>, // index y - 1
    pub size: usize,
}

pub struct OracleSpace {
    pub d: u32,
    pub hypotheses: Vec<OracleHypothesis>,
    pub prior: Vec<f64>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

fn is_power_of(n: u32, k: u32) -> bool {
    let mut v = k;
    while v < n {
        v *= k;
    }
    v == n
}

fn is_perfect(n: u32, exp: u32) -> bool {
    (1..=n).any(|r| r.pow(exp) == n)
}

pub fn tenenbaum(d: u32) -> OracleSpace {
    let mut rules: Vec<(String, Predicate)> = vec![
        ("even numbers".into(), Box::new(|n| n % 2 == 0)),
        ("odd numbers".into(), Box::new(|n| n % 2 == 1)),
        ("squares".into(), Box::new(|n| is_perfect(n, 2))),
        ("cubes".into(), Box::new(|n| is_perfect(n, 3))),
        ("primes".into(), Box::new(is_prime)),
    ];
    for k in 3..=12 {
        rules.push((format!("multiples of {k}"), Box::new(move |n| n % k == 0)));
    }
    for k in 2..=10 {
        rules.push((format!("powers of {k}"), Box::new(move |n| is_power_of(n, k))));
    }
    for k in 0..=9 {
        rules.push((format!("ends in {k}"), Box::new(move |n| n % 10 == k)));
    }
    for k in 1..=4 {
        rules.push((format!("5n plus {k}"), Box::new(move |n| n % 5 == k)));
    }

    let mut hypotheses: Vec<OracleHypothesis> = Vec::new();
    for (name, pred) in rules {
        let members: Vec<bool> = (1..=d).map(&pred).collect();
        let size = members.iter().filter(|&&m| m).count();
        if size < 3 || hypotheses.iter().any(|h| h.members == members) {
            continue;
        }
        hypotheses.push(OracleHypothesis {
            name,
            is_rule: true,
            members,
            size,
        });
    }
    let n_rules = hypotheses.len();

    let mut ends = vec![1];
    ends.extend((5..=d).step_by(5));
    for (i, &lo) in ends.iter().enumerate() {
        for &hi in &ends[i..] {
            if lo == 1 && hi == d {
                continue;
            }
            hypotheses.push(OracleHypothesis {
                name: format!("interval {lo}..{hi}"),
                is_rule: false,
                members: (1..=d).map(|n| lo <= n && n <= hi).collect(),
                size: (hi - lo + 1) as usize,
            });
        }
    }

    let erlang = |s: f64| s / 100.0 * (-s / 10.0).exp();
    let interval_total: f64 = hypotheses[n_rules..].iter().map(|h| erlang(h.size as f64)).sum();
    let prior = hypotheses
        .iter()
        .map(|h| {
            if h.is_rule {
                0.6667 / n_rules as f64
            } else {
                (1.0 - 0.6667) * erlang(h.size as f64) / interval_total
            }
        })
        .collect();
    OracleSpace { d, hypotheses, prior }
}

impl OracleSpace {
    pub fn rule_count(&self) -> usize {
        self.hypotheses.iter().filter(|h| h.is_rule).count()
    }

    pub fn posterior(&self, examples: &[u32], alpha: f64, beta: f64) -> Vec<f64> {
        let raw: Vec<f64> = self
            .hypotheses
            .iter()
            .zip(&self.prior)
            .map(|(h, &p)| {
                if examples.iter().all(|&x| h.members[(x - 1) as usize]) {
                    p.powf(alpha) * (1.0 / h.size as f64).powf(beta * examples.len() as f64)
                } else {
                    0.0
                }
            })
            .collect();
        let z: f64 = raw.iter().sum();
        raw.iter().map(|w| w / z).collect()
    }

    pub fn predictive(&self, examples: &[u32], alpha: f64, beta: f64) -> Vec<f64> {
        let post = self.posterior(examples, alpha, beta);
        (1..=self.d)
            .map(|y| {
                self.hypotheses
                    .iter()
                    .zip(&post)
                    .filter(|(h, _)| h.members[(y - 1) as usize])
                    .map(|(_, m)| m)
                    .sum()
            })
            .collect()
    }

    pub fn map_name(&self, examples: &[u32], alpha: f64, beta: f64) -> &str {
        let post = self.posterior(examples, alpha, beta);
        let best = (0..post.len()).fold(0, |b, i| if post[i] > post[b] { i } else { b });
        &self.hypotheses[best].name
    }

    pub fn rule_mass(&self, examples: &[u32], alpha: f64, beta: f64) -> f64 {
        let post = self.posterior(examples, alpha, beta);
        self.hypotheses
            .iter()
            .zip(&post)
            .filter(|(h, _)| h.is_rule)
            .map(|(_, m)| m)
            .sum()
    }
}
