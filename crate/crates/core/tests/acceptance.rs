use racklab::analysis::{self, irregular_components};
use racklab::codec::{self, CodecParams};
use racklab::enumerate::{enumerate_classes, enumerate_labeled, oracle_enumerate, oracle_labeled};
use racklab::families::{
    catalogue, conjugation_quandle_of, dihedral_quandle, symmetric_group, trivial_rack,
};
use racklab::perm::all_perms;
use racklab::rack::{check_conjugation, check_self_distributive};
use racklab::{Perm, Rack};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SEED: u64 = 20240601;
const ZETA_SLACK: f64 = 1e-9;
const CONFORMANCE: [u8; 16] = [
    0x52, 0x4B, 0x45, 0x31, 0x00, 0x03, 0x00, 0x02, 0x00, 0x02, 0xF0, 0xE1, 0xC3, 0x84, 0x00, 0x00,
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {took:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn table_of(n: usize, cols: &[Perm]) -> Vec<usize> {
    let mut t = vec![0; n * n];
    for (y, f) in cols.iter().enumerate() {
        for x in 0..n {
            t[x * n + y] = f.apply(x);
        }
    }
    t
}

fn axioms_agree(n: usize, cols: &[Perm]) -> bool {
    let sd = check_self_distributive(n, &table_of(n, cols)).is_empty();
    let conj = check_conjugation(cols).is_empty();
    sd == conj
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::from_images(v).unwrap()
}

fn axiom_equivalence() -> Outcome {
    let start = Instant::now();
    let s2 = all_perms(2);
    let mut checked = 0;
    let mut mismatches = 0;
    for a in &s2 {
        for b in &s2 {
            checked += 1;
            if !axioms_agree(2, &[a.clone(), b.clone()]) {
                mismatches += 1;
            }
        }
    }
    let family = catalogue(5);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut racks_seen = 0;
    for i in 0..10_000 {
        let cols: Vec<Perm> = if i % 2 == 0 {
            let n = rng.gen_range(1..=5);
            (0..n).map(|_| random_perm(n, &mut rng)).collect()
        } else {
            let (_, r) = &family[rng.gen_range(0..family.len())];
            let n = r.order();
            let r = r.relabel(&random_perm(n, &mut rng)).unwrap();
            let mut cols = r.maps().to_vec();
            if i % 4 == 1 && n > 1 {
                let y = rng.gen_range(0..n);
                let swap = Perm::from_cycles(n, &[&[0, 1]]).unwrap();
                cols[y] = cols[y].then(&swap);
            }
            cols
        };
        if check_conjugation(&cols).is_empty() {
            racks_seen += 1;
        }
        checked += 1;
        if !axioms_agree(cols.len(), &cols) {
            mismatches += 1;
        }
    }
    let time = within(start, Duration::from_secs(10));
    outcome(
        mismatches == 0 && time.is_ok(),
        format!(
            "{checked} tables, {racks_seen} racks, {mismatches} disagreements {}",
            time.err().unwrap_or_default()
        ),
    )
}

fn oracle_equality() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 1..=3 {
        let mut ours: Vec<Vec<usize>> = enumerate_labeled(n)
            .unwrap()
            .iter()
            .map(|r| r.table().to_vec())
            .collect();
        ours.sort();
        let theirs = oracle_labeled(n).unwrap();
        let a = enumerate_classes(n).unwrap();
        let b = oracle_enumerate(n).unwrap();
        let same =
            ours == theirs && a.witnesses == b.witnesses && a.labeled_count == b.labeled_count;
        pass &= same;
        notes.push(format!(
            "n={n}: {} labeled, {} classes",
            ours.len(),
            a.class_count
        ));
    }
    let two = enumerate_labeled(2).unwrap().len();
    pass &= two == 2;
    let time = within(start, Duration::from_secs(60));
    pass &= time.is_ok();
    outcome(
        pass,
        format!("{} {}", notes.join("; "), time.err().unwrap_or_default()),
    )
}

fn all_params(n: usize) -> Vec<CodecParams> {
    let mut out = Vec::new();
    for delta in 1..n.max(2) {
        for cap_l in 0..=n {
            out.push(CodecParams { delta, cap_l });
        }
    }
    out
}

/// Every labeled rack of order ≤ 4 and every family member of order ≤ 8 under
/// every parameter pair, plus random relabelings with random parameters.
fn codec_corpus() -> Vec<(Rack, CodecParams)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for r in enumerate_labeled(n).unwrap() {
            for p in all_params(n) {
                out.push((r.clone(), p));
            }
        }
    }
    let family = catalogue(8);
    for (_, r) in &family {
        for p in all_params(r.order()) {
            out.push((r.clone(), p));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for _ in 0..1000 {
        let (_, r) = &family[rng.gen_range(0..family.len())];
        let n = r.order();
        let r = r.relabel(&random_perm(n, &mut rng)).unwrap();
        let p = CodecParams {
            delta: rng.gen_range(1..n.max(2)),
            cap_l: rng.gen_range(0..=n),
        };
        out.push((r, p));
    }
    out
}

fn round_trip(corpus: &[(Rack, CodecParams)]) -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    for (r, p) in corpus {
        let ok = codec::encode(r, p)
            .and_then(|b| codec::decode(&b))
            .map(|back| &back == r)
            .unwrap_or(false);
        if !ok {
            failures += 1;
        }
    }
    let time = within(start, Duration::from_secs(300));
    outcome(
        failures == 0 && time.is_ok(),
        format!(
            "{} encodings, {failures} failures {}",
            corpus.len(),
            time.err().unwrap_or_default()
        ),
    )
}

fn residual_bound(corpus: &[(Rack, CodecParams)]) -> Outcome {
    let mut worst_margin = i64::MAX;
    let mut failures = 0;
    for (r, p) in corpus {
        let s = codec::encoding_stats(r, p).unwrap();
        let cap = (s.zeta - ZETA_SLACK).ceil().max(0.0) as u64 + s.cp as u64;
        worst_margin = worst_margin.min(cap as i64 - s.residual_bits as i64);
        if s.residual_bits > cap
            || s.zeta > s.bound + ZETA_SLACK
            || s.residual_bits > s.per_index_bits
        {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "{} encodings, {failures} failures, tightest margin {worst_margin} bits",
            corpus.len()
        ),
    )
}

fn zeta_sweep() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in (2..=10).step_by(2) {
        let s = analysis::zeta_bound_sweep(n, 10_000, SEED);
        pass &= s.pass();
        let r = s.report(SEED, 10_000);
        notes.push(format!("n={n} max {:.4} / {}", r.statistic, r.bound));
    }
    outcome(pass, notes.join("; "))
}

fn merge_calculus() -> Outcome {
    let start = Instant::now();
    let r = analysis::merge_calculus_check(10_000, 12, SEED);
    let time = within(start, Duration::from_secs(30));
    outcome(
        r.pass && time.is_ok(),
        format!(
            "{} violations {}",
            r.statistic,
            time.err().unwrap_or_default()
        ),
    )
}

fn regularity_and_orbits() -> Outcome {
    let mut irregular = 0;
    let mut racks = 0;
    for n in 1..=4 {
        for r in enumerate_labeled(n).unwrap() {
            racks += 1;
            let all: Vec<usize> = (0..n).collect();
            irregular += irregular_components(&r, &all).len();
        }
    }
    let orbits = analysis::orbit_check(1000, 12, SEED);
    outcome(
        irregular == 0 && orbits.pass,
        format!(
            "{racks} racks, {irregular} irregular components; orbit mismatches {}",
            orbits.statistic
        ),
    )
}

fn audit() -> Outcome {
    let mut runs = 0;
    let mut failures = 0;
    let mut racks: Vec<Rack> = (1..=4)
        .flat_map(|n| enumerate_labeled(n).unwrap())
        .collect();
    racks.extend(catalogue(8).into_iter().map(|(_, r)| r));
    for r in &racks {
        for p in all_params(r.order()) {
            runs += 1;
            if !codec::merge_bound_audit(r, &p)
                .map(|a| a.pass())
                .unwrap_or(false)
            {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{runs} audits, {failures} failures"))
}

fn probabilistic() -> Outcome {
    let chernoff = analysis::chernoff_check(1000, 0.1, 0.5, 100_000, SEED).unwrap();
    let subset =
        analysis::random_subset_check(&dihedral_quandle(1000), 0.1, 0.5, 100_000, SEED).unwrap();
    let s3 = conjugation_quandle_of(&symmetric_group(3));
    let w = analysis::find_w(&s3, 1, 0.8, 1.0, 100, SEED).unwrap();
    outcome(
        chernoff.pass() && subset.pass() && w.certified,
        format!(
            "chernoff {} (excess {:.2e}); random subset {} (worst excess {:.2e}); find_w certified {} after {} attempts",
            chernoff.pass(),
            chernoff.report().statistic - chernoff.report().bound,
            subset.pass(),
            subset.worst_excess(),
            w.certified,
            w.attempts
        ),
    )
}

fn conformance() -> Outcome {
    let rack = trivial_rack(3);
    let params = CodecParams::default_for(3);
    let mut pass = params == CodecParams { delta: 2, cap_l: 2 };
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let bytes = pool.install(|| codec::encode(&rack, &params)).unwrap();
        pass &= bytes == CONFORMANCE;
    }
    pass &= codec::decode(&CONFORMANCE)
        .map(|r| r == rack)
        .unwrap_or(false);
    let hex: Vec<String> = codec::encode(&rack, &params)
        .unwrap()
        .iter()
        .map(|b| format!("{b:02X}"))
        .collect();
    outcome(pass, hex.join(" "))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let corpus = codec_corpus();
    let criteria: Vec<Criterion> = vec![
        ("axiom_equivalence", Box::new(axiom_equivalence)),
        ("oracle_equality", Box::new(oracle_equality)),
        ("codec_round_trip", Box::new(|| round_trip(&corpus))),
        ("residual_bound", Box::new(|| residual_bound(&corpus))),
        ("zeta_bound_sweep", Box::new(zeta_sweep)),
        ("merge_calculus", Box::new(merge_calculus)),
        ("regularity_and_orbits", Box::new(regularity_and_orbits)),
        ("merge_bound_audit", Box::new(audit)),
        ("probabilistic_suite", Box::new(probabilistic)),
        ("conformance_vector", Box::new(conformance)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail.trim_end()
        );
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
