use super::{AnalysisError, CheckReport};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

/// Exhaustive sweeps are used up to this order.
pub const EXHAUSTIVE_MAX: usize = 10;
const FLOAT_MARGIN: f64 = 1e-9;

/// `(η_1, …, η_n)` with `Σ η_q = n`; stored from `η_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaSequence {
    pub n: usize,
    pub eta: Vec<usize>,
}

impl EtaSequence {
    pub fn new(eta: Vec<usize>) -> Result<Self, AnalysisError> {
        let n = eta.len();
        let total: usize = eta.iter().sum();
        if n == 0 || total != n {
            return Err(AnalysisError::InvalidEta { len: n, sum: total });
        }
        Ok(EtaSequence { n, eta })
    }

    /// From a histogram indexed by size, `hist[q] = η_q` with `hist[0]` unused.
    pub fn from_histogram(hist: &[usize]) -> Result<Self, AnalysisError> {
        Self::new(hist.iter().skip(1).copied().collect())
    }

    /// `η_q = n` for `q = size`, zero elsewhere.
    pub fn concentrated(n: usize, size: usize) -> Self {
        let mut eta = vec![0; n];
        eta[size - 1] = n;
        EtaSequence { n, eta }
    }

    pub fn get(&self, q: usize) -> usize {
        self.eta[q - 1]
    }
}

/// `ζ = (Σ_p η_p/p)(Σ_q (log₂ q) η_q/q)`.
pub fn zeta_of(eta: &EtaSequence) -> f64 {
    let mut comps = 0.0;
    let mut logs = 0.0;
    for (i, &e) in eta.eta.iter().enumerate() {
        let q = (i + 1) as f64;
        comps += e as f64 / q;
        logs += e as f64 / q * q.log2();
    }
    comps * logs
}

/// ζ written as `rational + Σ_r coeff_r · log₂ r` over odd primes `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactZeta {
    pub rational: BigRational,
    pub log_terms: BTreeMap<usize, BigRational>,
}

fn factorize(mut q: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= q {
        let mut e = 0;
        while q.is_multiple_of(d) {
            q /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ExactZeta {
    pub fn of(eta: &EtaSequence) -> Self {
        let mut comps = BigRational::zero();
        let mut two = BigRational::zero();
        let mut odd: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (i, &e) in eta.eta.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let q = i + 1;
            let share = ratio(e, q);
            comps += &share;
            for (r, k) in factorize(q) {
                let term = &share * BigRational::from_integer(BigInt::from(k));
                if r == 2 {
                    two += term;
                } else {
                    *odd.entry(r).or_insert_with(BigRational::zero) += term;
                }
            }
        }
        let log_terms = odd
            .into_iter()
            .map(|(r, c)| (r, &comps * c))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        ExactZeta {
            rational: comps * two,
            log_terms,
        }
    }

    /// Exact equality with a rational; logarithms of distinct odd primes are
    /// linearly independent over the rationals together with 1.
    pub fn equals(&self, value: &BigRational) -> bool {
        self.log_terms.is_empty() && self.rational == *value
    }

    pub fn to_f64(&self) -> f64 {
        let base = self.rational.to_f64().unwrap_or(f64::NAN);
        base + self
            .log_terms
            .iter()
            .map(|(&r, c)| c.to_f64().unwrap_or(f64::NAN) * (r as f64).log2())
            .sum::<f64>()
    }
}

/// Comparison of ζ against `n²/4`, exact whenever floating point cannot decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCmp {
    Below,
    Equal,
    /// Within the float margin but not exactly equal.
    Undecided,
    Above,
}

pub fn compare_to_bound(eta: &EtaSequence) -> (f64, BoundCmp) {
    let n = eta.n;
    let z = zeta_of(eta);
    let bound = (n * n) as f64 / 4.0;
    if z < bound - FLOAT_MARGIN {
        return (z, BoundCmp::Below);
    }
    if z > bound + FLOAT_MARGIN {
        return (z, BoundCmp::Above);
    }
    let exact = ExactZeta::of(eta);
    if exact.equals(&ratio(n * n, 4)) {
        (z, BoundCmp::Equal)
    } else {
        (z, BoundCmp::Undecided)
    }
}

/// Calls `visit` on every weak composition of `n` into `n` parts.
pub fn for_each_composition(n: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(slot: usize, left: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            visit(cur);
            return;
        }
        for v in (0..=left).rev() {
            cur[slot] = v;
            rec(slot + 1, left - v, cur, visit);
        }
    }
    if n == 0 {
        return;
    }
    rec(0, n, &mut vec![0; n], visit);
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaSweep {
    pub n: usize,
    pub exhaustive: bool,
    pub evaluated: u64,
    pub max_zeta: f64,
    pub argmax: Vec<usize>,
    pub bound: f64,
    /// Compositions with ζ exactly `n²/4`.
    pub equality_at: Vec<Vec<usize>>,
    pub above: Vec<Vec<usize>>,
    pub undecided: Vec<Vec<usize>>,
}

impl ZetaSweep {
    /// No composition above the bound, and equality exactly at `η₂ = n` (none for odd `n`).
    pub fn pass(&self) -> bool {
        let expected: Vec<Vec<usize>> = if self.n.is_multiple_of(2) && self.n >= 2 {
            vec![EtaSequence::concentrated(self.n, 2).eta]
        } else {
            vec![]
        };
        self.above.is_empty() && self.undecided.is_empty() && self.equality_at == expected
    }

    pub fn report(&self, seed: u64, trials: u64) -> CheckReport {
        CheckReport::new(
            "zeta_sweep",
            json!({ "n": self.n, "trials": trials, "exhaustive": self.exhaustive }),
            Some(seed),
            self.max_zeta,
            self.bound,
            self.pass(),
            serde_json::to_value(self).expect("serialisable"),
        )
    }
}

/// Maximises ζ over compositions of `n`: all of them for `n ≤ 10`, otherwise
/// `trials` uniform samples plus the concentrated sequences.
pub fn zeta_bound_sweep(n: usize, trials: u64, seed: u64) -> ZetaSweep {
    let mut sweep = ZetaSweep {
        n,
        exhaustive: n <= EXHAUSTIVE_MAX,
        evaluated: 0,
        max_zeta: f64::NEG_INFINITY,
        argmax: vec![],
        bound: (n * n) as f64 / 4.0,
        equality_at: vec![],
        above: vec![],
        undecided: vec![],
    };
    let mut consider = |eta: &[usize]| {
        let seq = EtaSequence {
            n,
            eta: eta.to_vec(),
        };
        let (z, cmp) = compare_to_bound(&seq);
        sweep.evaluated += 1;
        if z > sweep.max_zeta {
            sweep.max_zeta = z;
            sweep.argmax = eta.to_vec();
        }
        match cmp {
            BoundCmp::Below => {}
            BoundCmp::Equal => sweep.equality_at.push(eta.to_vec()),
            BoundCmp::Above => sweep.above.push(eta.to_vec()),
            BoundCmp::Undecided => sweep.undecided.push(eta.to_vec()),
        }
    };
    if n == 0 {
        return sweep;
    }
    if n <= EXHAUSTIVE_MAX {
        for_each_composition(n, &mut consider);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::BTreeSet::new();
        for size in 1..=n.min(3) {
            seen.insert(EtaSequence::concentrated(n, size).eta);
        }
        for _ in 0..trials {
            // stars and bars: n − 1 bars among 2n − 1 slots
            let mut bars = sample(&mut rng, 2 * n - 1, n - 1).into_vec();
            bars.sort_unstable();
            let mut eta = Vec::with_capacity(n);
            let mut prev = 0;
            for b in bars {
                eta.push(b - prev);
                prev = b + 1;
            }
            eta.push(2 * n - 1 - prev);
            seen.insert(eta);
        }
        for eta in &seen {
            consider(eta);
        }
    }
    sweep.equality_at.sort();
    sweep
}

/// `(x+y)²/8 − x²/9 − xy/3`.
pub fn claim_calc_gap(x: f64, y: f64) -> f64 {
    (x + y).powi(2) / 8.0 - x * x / 9.0 - x * y / 3.0
}

pub const CALC_TOLERANCE: f64 = 1e-12;

/// Evaluates the gap on a `steps × steps` grid over `[0, max]²`, checking
/// non-negativity and the closed form `(x − 3y)²/72` up to a relative 1e−12.
pub fn claim_calc_grid(steps: usize, max: f64) -> CheckReport {
    let mut min_gap = f64::INFINITY;
    let mut worst_err: f64 = 0.0;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = max * i as f64 / steps.max(1) as f64;
            let y = max * j as f64 / steps.max(1) as f64;
            let gap = claim_calc_gap(x, y);
            let closed = (x - 3.0 * y).powi(2) / 72.0;
            min_gap = min_gap.min(gap);
            let scale = 1.0f64.max((x + y).powi(2));
            worst_err = worst_err.max((gap - closed).abs() / scale);
        }
    }
    let pass = min_gap >= -CALC_TOLERANCE * max.max(1.0).powi(2) && worst_err <= CALC_TOLERANCE;
    CheckReport::new(
        "claim_calc",
        json!({ "steps": steps, "max": max }),
        None,
        min_gap,
        0.0,
        pass,
        json!({ "worst_relative_error": worst_err }),
    )
}
