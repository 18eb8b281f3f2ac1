//! Exhaustive enumeration of racks of small order.
//!
//! Labeled racks are produced as tuples `(f_0, …, f_{n−1})` in lexicographic
//! order of the concatenated image lists. The search always decides the
//! smallest unassigned map and then closes the partial assignment under
//! `f_{(y)f_z} = f_z⁻¹ f_y f_z`, abandoning the branch on any clash.

use crate::iso::canonical_form;
use crate::perm::{all_perms, Perm};
use crate::rack::{rack_from_table, Rack};
use crate::text::format_table;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Largest order accepted.
pub const MAX_ORDER: usize = 7;
/// Largest order the naive oracle accepts.
pub const ORACLE_MAX_ORDER: usize = 3;

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("order {n} exceeds the cap of {cap}")]
    OrderTooLarge { n: usize, cap: usize },
    #[error("order must be positive")]
    ZeroOrder,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn check_order(n: usize, cap: usize) -> Result<(), EnumError> {
    match n {
        0 => Err(EnumError::ZeroOrder),
        n if n > cap => Err(EnumError::OrderTooLarge { n, cap }),
        _ => Ok(()),
    }
}

type Partial = Vec<Option<Perm>>;

/// Closes `maps` under the conjugation rule starting from the newly set `fresh`.
fn propagate(maps: &mut Partial, mut fresh: Vec<usize>) -> bool {
    while let Some(a) = fresh.pop() {
        let assigned: Vec<usize> = (0..maps.len()).filter(|&i| maps[i].is_some()).collect();
        for b in assigned {
            for (y, z) in [(a, b), (b, a)] {
                let (fy, fz) = (maps[y].as_ref().unwrap(), maps[z].as_ref().unwrap());
                let k = fz.apply(y);
                let forced = fy.conjugate_by(fz);
                match &maps[k] {
                    Some(fk) if *fk != forced => return false,
                    Some(_) => {}
                    None => {
                        maps[k] = Some(forced);
                        fresh.push(k);
                    }
                }
            }
        }
    }
    true
}

fn search(maps: &mut Partial, perms: &[Perm], visit: &mut dyn FnMut(&[Perm])) {
    let Some(col) = maps.iter().position(Option::is_none) else {
        let full: Vec<Perm> = maps.iter().map(|m| m.clone().unwrap()).collect();
        visit(&full);
        return;
    };
    for p in perms {
        let mut next = maps.clone();
        next[col] = Some(p.clone());
        if propagate(&mut next, vec![col]) {
            search(&mut next, perms, visit);
        }
    }
}

/// Runs `visit` on every labeled rack whose `f_0` is `f0`, in order.
fn visit_branch(n: usize, f0: &Perm, perms: &[Perm], visit: &mut dyn FnMut(&[Perm])) {
    let mut maps: Partial = vec![None; n];
    maps[0] = Some(f0.clone());
    if propagate(&mut maps, vec![0]) {
        search(&mut maps, perms, visit);
    }
}

fn rack_of(maps: &[Perm]) -> Rack {
    Rack::from_maps(maps.to_vec()).expect("search emits racks only")
}

/// Every labeled rack of order `n`, in lexicographic order of `f_0‖f_1‖…`.
pub fn enumerate_labeled(n: usize) -> Result<Vec<Rack>, EnumError> {
    check_order(n, MAX_ORDER)?;
    let perms = all_perms(n);
    let branches: Vec<Vec<Rack>> = perms
        .par_iter()
        .map(|f0| {
            let mut out = Vec::new();
            visit_branch(n, f0, &perms, &mut |m| out.push(rack_of(m)));
            out
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

/// Number of labeled racks of order `n`.
pub fn count_labeled(n: usize) -> Result<u64, EnumError> {
    check_order(n, MAX_ORDER)?;
    let perms = all_perms(n);
    Ok(perms
        .par_iter()
        .map(|f0| {
            let mut count = 0u64;
            visit_branch(n, f0, &perms, &mut |_| count += 1);
            count
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumReport {
    pub n: usize,
    pub labeled_count: u64,
    pub class_count: usize,
    pub quandle_class_count: usize,
    pub elapsed: Duration,
    /// Canonical row-major tables, one per class, ascending.
    pub witnesses: Vec<Vec<usize>>,
}

/// Published class counts for orders 1..=8, shown for comparison only.
pub const REFERENCE_RACK_CLASSES: [u64; 8] = [1, 2, 6, 19, 74, 353, 2080, 16023];
pub const REFERENCE_QUANDLE_CLASSES: [u64; 8] = [1, 1, 3, 7, 22, 73, 298, 1581];

#[derive(Debug, Clone, Serialize)]
pub struct EnumSummary {
    pub n: usize,
    pub labeled: u64,
    pub classes: usize,
    pub quandle_classes: usize,
    pub duration_ms: u128,
    pub reference_unverified: Reference,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    pub classes: Option<u64>,
    pub quandle_classes: Option<u64>,
}

impl EnumReport {
    pub fn summary(&self) -> EnumSummary {
        EnumSummary {
            n: self.n,
            labeled: self.labeled_count,
            classes: self.class_count,
            quandle_classes: self.quandle_class_count,
            duration_ms: self.elapsed.as_millis(),
            reference_unverified: Reference {
                classes: REFERENCE_RACK_CLASSES.get(self.n.wrapping_sub(1)).copied(),
                quandle_classes: REFERENCE_QUANDLE_CLASSES
                    .get(self.n.wrapping_sub(1))
                    .copied(),
            },
        }
    }

    pub fn witness_racks(&self) -> Vec<Rack> {
        self.witnesses
            .iter()
            .map(|t| Rack::from_flat(self.n, t.clone()).expect("witnesses are racks"))
            .collect()
    }

    /// Writes `class_NNNN.rack` per witness and `summary.json` into `dir`.
    pub fn write_witness_dir(&self, dir: &Path) -> Result<(), EnumError> {
        std::fs::create_dir_all(dir)?;
        for (i, t) in self.witnesses.iter().enumerate() {
            std::fs::write(
                dir.join(format!("class_{i:04}.rack")),
                format_table(self.n, t),
            )?;
        }
        let json = serde_json::to_string_pretty(&self.summary()).expect("summary serialises");
        std::fs::write(dir.join("summary.json"), json + "\n")?;
        Ok(())
    }
}

fn report_from(
    n: usize,
    labeled: u64,
    classes: BTreeSet<Vec<usize>>,
    start: Instant,
) -> EnumReport {
    let quandles = classes
        .iter()
        .filter(|t| (0..n).all(|x| t[x * n + x] == x))
        .count();
    EnumReport {
        n,
        labeled_count: labeled,
        class_count: classes.len(),
        quandle_class_count: quandles,
        elapsed: start.elapsed(),
        witnesses: classes.into_iter().collect(),
    }
}

/// Isomorphism classes of racks of order `n` via canonical forms.
pub fn enumerate_classes(n: usize) -> Result<EnumReport, EnumError> {
    check_order(n, MAX_ORDER)?;
    let start = Instant::now();
    let perms = all_perms(n);
    let (labeled, classes) = perms
        .par_iter()
        .map(|f0| {
            let mut count = 0u64;
            let mut seen = BTreeSet::new();
            visit_branch(n, f0, &perms, &mut |m| {
                count += 1;
                seen.insert(canonical_form(&rack_of(m)));
            });
            (count, seen)
        })
        .reduce(
            || (0, BTreeSet::new()),
            |(c1, mut s1), (c2, s2)| {
                s1.extend(s2);
                (c1 + c2, s1)
            },
        );
    Ok(report_from(n, labeled, classes, start))
}

/// Naive scan over all `(n!)ⁿ` tuples of permutations, sharing nothing with
/// the search above except table validation.
pub mod oracle {
    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..n {
            for rest in permutations(n - 1) {
                let mut p = vec![first];
                p.extend(rest.into_iter().map(|v| if v >= first { v + 1 } else { v }));
                out.push(p);
            }
        }
        out
    }

    fn tables(n: usize) -> Vec<Vec<Vec<usize>>> {
        let perms = permutations(n);
        let mut out = Vec::new();
        let total = perms.len().pow(n as u32);
        for mut code in 0..total {
            let mut cols = Vec::with_capacity(n);
            for _ in 0..n {
                cols.push(&perms[code % perms.len()]);
                code /= perms.len();
            }
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|x| (0..n).map(|y| cols[y][x]).collect())
                .collect();
            out.push(rows);
        }
        out
    }

    fn smallest_relabeling(rows: &[Vec<usize>]) -> Vec<usize> {
        let n = rows.len();
        permutations(n)
            .into_iter()
            .map(|s| {
                let mut t = vec![0; n * n];
                for x in 0..n {
                    for y in 0..n {
                        t[s[x] * n + s[y]] = s[rows[x][y]];
                    }
                }
                t
            })
            .min()
            .unwrap()
    }

    /// Flat tables of every labeled rack, ascending.
    pub fn oracle_labeled(n: usize) -> Result<Vec<Vec<usize>>, EnumError> {
        check_order(n, ORACLE_MAX_ORDER)?;
        let mut out: Vec<Vec<usize>> = tables(n)
            .into_iter()
            .filter(|t| rack_from_table(t).is_ok())
            .map(|t| t.concat())
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn oracle_enumerate(n: usize) -> Result<EnumReport, EnumError> {
        check_order(n, ORACLE_MAX_ORDER)?;
        let start = Instant::now();
        let racks: Vec<Vec<Vec<usize>>> = tables(n)
            .into_iter()
            .filter(|t| rack_from_table(t).is_ok())
            .collect();
        let classes: BTreeSet<Vec<usize>> = racks.iter().map(|t| smallest_relabeling(t)).collect();
        Ok(report_from(n, racks.len() as u64, classes, start))
    }
}

pub use oracle::{oracle_enumerate, oracle_labeled};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(count_labeled(1).unwrap(), 1);
        let two = enumerate_labeled(2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two[0].maps().iter().all(Perm::is_identity));
        assert!(two[1].maps().iter().all(|f| f.images() == [1, 0]));
    }

    #[test]
    fn lexicographic_order() {
        let racks = enumerate_labeled(4).unwrap();
        let keys: Vec<Vec<usize>> = racks
            .iter()
            .map(|r| r.maps().iter().flat_map(|f| f.images().to_vec()).collect())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(racks.len() as u64, count_labeled(4).unwrap());
    }

    #[test]
    fn caps() {
        assert!(matches!(
            enumerate_classes(8),
            Err(EnumError::OrderTooLarge { n: 8, cap: 7 })
        ));
        assert!(matches!(
            oracle_enumerate(4),
            Err(EnumError::OrderTooLarge { n: 4, cap: 3 })
        ));
        assert!(matches!(count_labeled(0), Err(EnumError::ZeroOrder)));
    }

    #[test]
    fn oracle_agrees_up_to_three() {
        for n in 1..=3 {
            let fast = enumerate_labeled(n).unwrap();
            let mut fast_tables: Vec<Vec<usize>> =
                fast.iter().map(|r| r.table().to_vec()).collect();
            fast_tables.sort();
            assert_eq!(fast_tables, oracle_labeled(n).unwrap());
            let (a, b) = (enumerate_classes(n).unwrap(), oracle_enumerate(n).unwrap());
            assert_eq!(a.witnesses, b.witnesses);
            assert_eq!(a.labeled_count, b.labeled_count);
            assert_eq!(a.quandle_class_count, b.quandle_class_count);
        }
    }
}
