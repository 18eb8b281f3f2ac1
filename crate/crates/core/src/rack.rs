//! Racks as validated operation tables.
//!
//! A rack on `0..n` is stored twice: as the row-major table `x ▷ y` and as the
//! right translations `f_y : x ↦ x ▷ y`. Both views are built once, at
//! construction, after the axioms have been checked.

use crate::error::RackError;
use crate::perm::Perm;
use serde::Serialize;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rack {
    n: usize,
    table: Vec<usize>,
    maps: Vec<Perm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// Column `y` (the map `f_y`) is not a bijection.
    NotBijective { y: usize },
    /// `(x▷y)▷z ≠ (x▷z)▷(y▷z)`.
    SelfDistributivityFail { x: usize, y: usize, z: usize },
    /// `f_{y▷z}` and `f_z⁻¹ f_y f_z` first disagree at `x`.
    ConjugationFail { x: usize, y: usize, z: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub is_rack: bool,
    pub is_quandle: bool,
    pub violations: Vec<Violation>,
}

fn validate_shape(rows: &[Vec<usize>]) -> Result<(usize, Vec<usize>), RackError> {
    let n = rows.len();
    if n == 0 {
        return Err(RackError::EmptyTable);
    }
    let mut flat = Vec::with_capacity(n * n);
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(RackError::RowLength {
                row,
                len: r.len(),
                expected: n,
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if value >= n {
                return Err(RackError::EntryOutOfRange { row, col, value, n });
            }
        }
        flat.extend_from_slice(r);
    }
    Ok((n, flat))
}

fn columns(n: usize, table: &[usize]) -> Vec<Vec<usize>> {
    (0..n)
        .map(|y| (0..n).map(|x| table[x * n + y]).collect())
        .collect()
}

/// Condition 3 on the raw table: one witness per failing `(y, z)`, scanned row-major.
pub fn check_self_distributive(n: usize, table: &[usize]) -> Vec<Violation> {
    let op = |a: usize, b: usize| table[a * n + b];
    let mut out = Vec::new();
    for y in 0..n {
        for z in 0..n {
            let yz = op(y, z);
            if let Some(x) = (0..n).find(|&x| op(op(x, y), z) != op(op(x, z), yz)) {
                out.push(Violation::SelfDistributivityFail { x, y, z });
            }
        }
    }
    out
}

/// `f_{(y)f_z} = f_z⁻¹ f_y f_z` for all `y, z`, evaluated by explicit inversion and
/// composition. Every map must already be a bijection.
pub fn check_conjugation(maps: &[Perm]) -> Vec<Violation> {
    let n = maps.len();
    let mut out = Vec::new();
    for y in 0..n {
        for z in 0..n {
            let k = maps[z].apply(y);
            let rhs = maps[y].conjugate_by(&maps[z]);
            if let Some(x) = (0..n).find(|&x| maps[k].apply(x) != rhs.apply(x)) {
                out.push(Violation::ConjugationFail { x, y, z });
            }
        }
    }
    out
}

fn quandle_law(n: usize, table: &[usize]) -> bool {
    (0..n).all(|x| table[x * n + x] == x)
}

/// Full axiom report for a flat row-major table whose entries lie in `0..n`.
///
/// With every column a bijection the conjugation identity is checked; otherwise
/// each non-bijective column is reported together with the self-distributivity
/// failures of the raw table.
pub fn axiom_report(n: usize, table: &[usize]) -> AxiomReport {
    let cols = columns(n, table);
    let mut violations: Vec<Violation> = cols
        .iter()
        .enumerate()
        .filter(|(_, c)| !crate::perm::is_bijection(c))
        .map(|(y, _)| Violation::NotBijective { y })
        .collect();
    if violations.is_empty() {
        let maps: Vec<Perm> = cols.into_iter().map(Perm::from_images_unchecked).collect();
        violations = check_conjugation(&maps);
    } else {
        violations.extend(check_self_distributive(n, table));
    }
    let is_rack = violations.is_empty();
    AxiomReport {
        is_rack,
        is_quandle: is_rack && quandle_law(n, table),
        violations,
    }
}

/// Validates an `n × n` table given as rows (`rows[x][y] = x ▷ y`).
pub fn rack_from_table(rows: &[Vec<usize>]) -> Result<Rack, RackError> {
    let (n, flat) = validate_shape(rows)?;
    Rack::from_flat(n, flat)
}

impl Rack {
    /// Validates a flat row-major table.
    pub fn from_flat(n: usize, table: Vec<usize>) -> Result<Rack, RackError> {
        if n == 0 {
            return Err(RackError::EmptyTable);
        }
        if table.len() != n * n {
            return Err(RackError::RowLength {
                row: table.len() / n,
                len: table.len() % n,
                expected: n,
            });
        }
        if let Some(i) = table.iter().position(|&v| v >= n) {
            return Err(RackError::EntryOutOfRange {
                row: i / n,
                col: i % n,
                value: table[i],
                n,
            });
        }
        let report = axiom_report(n, &table);
        if !report.is_rack {
            return Err(RackError::Axioms(report));
        }
        let maps = columns(n, &table)
            .into_iter()
            .map(Perm::from_images_unchecked)
            .collect();
        Ok(Rack { n, table, maps })
    }

    /// Builds a rack from its right translations, `maps[y] = f_y`.
    pub fn from_maps(maps: Vec<Perm>) -> Result<Rack, RackError> {
        let n = maps.len();
        if n == 0 {
            return Err(RackError::EmptyTable);
        }
        if let Some(y) = maps.iter().position(|m| m.len() != n) {
            return Err(RackError::RowLength {
                row: y,
                len: maps[y].len(),
                expected: n,
            });
        }
        let mut table = vec![0; n * n];
        for (y, f) in maps.iter().enumerate() {
            for x in 0..n {
                table[x * n + y] = f.apply(x);
            }
        }
        Rack::from_flat(n, table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `x ▷ y`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// The right translation `f_y`.
    #[inline]
    pub fn map(&self, y: usize) -> &Perm {
        &self.maps[y]
    }

    pub fn maps(&self) -> &[Perm] {
        &self.maps
    }

    /// Row-major flat table.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn is_quandle(&self) -> bool {
        quandle_law(self.n, &self.table)
    }

    pub fn report(&self) -> AxiomReport {
        AxiomReport {
            is_rack: true,
            is_quandle: self.is_quandle(),
            violations: Vec::new(),
        }
    }

    /// The rack transported along `phi`: `(x)φ ▷' (y)φ = (x ▷ y)φ`.
    pub fn relabel(&self, phi: &Perm) -> Result<Rack, RackError> {
        if phi.len() != self.n {
            return Err(RackError::RelabelLength {
                got: phi.len(),
                expected: self.n,
            });
        }
        let n = self.n;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[phi.apply(x) * n + phi.apply(y)] = phi.apply(self.op(x, y));
            }
        }
        Rack::from_flat(n, table)
    }

    /// Whether `subset` is closed under `▷` (and therefore a subrack).
    pub fn is_subrack(&self, subset: &[usize]) -> bool {
        if subset.is_empty() || subset.iter().any(|&v| v >= self.n) {
            return false;
        }
        let mut member = vec![false; self.n];
        for &v in subset {
            member[v] = true;
        }
        subset
            .iter()
            .all(|&y| subset.iter().all(|&z| member[self.op(z, y)]))
    }
}

impl std::fmt::Debug for Rack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rack")
            .field("n", &self.n)
            .field("rows", &self.rows())
            .finish()
    }
}

/// Free-function form of [`Rack::is_subrack`].
pub fn is_subrack(rack: &Rack, subset: &[usize]) -> bool {
    rack.is_subrack(subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dihedral_quandle, trivial_rack};

    #[test]
    fn trivial_table_is_rack() {
        let r = rack_from_table(&[vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        assert_eq!(r, trivial_rack(3));
        assert!(r.maps().iter().all(Perm::is_identity));
    }

    #[test]
    fn identity_and_swap_fails_conjugation() {
        // f_0 = id, f_1 = swap
        let err = rack_from_table(&[vec![0, 1], vec![1, 0]]).unwrap_err();
        let RackError::Axioms(report) = err else {
            panic!("expected axiom report")
        };
        assert!(!report.is_rack && !report.is_quandle);
        assert_eq!(
            report.violations[0],
            Violation::ConjugationFail { x: 0, y: 0, z: 1 }
        );
        assert_eq!(
            report.violations,
            vec![
                Violation::ConjugationFail { x: 0, y: 0, z: 1 },
                Violation::ConjugationFail { x: 0, y: 1, z: 1 },
            ]
        );
    }

    #[test]
    fn dihedral_three_is_quandle() {
        let rows: Vec<Vec<usize>> = (0..3)
            .map(|x| (0..3).map(|y| (2 * y + 3 - x) % 3).collect())
            .collect();
        let r = rack_from_table(&rows).unwrap();
        assert!(r.is_quandle());
        assert_eq!(r, dihedral_quandle(3));
    }

    #[test]
    fn malformed_tables_are_input_errors() {
        assert_eq!(rack_from_table(&[]), Err(RackError::EmptyTable));
        assert!(matches!(
            rack_from_table(&[vec![0, 1], vec![1]]),
            Err(RackError::RowLength {
                row: 1,
                len: 1,
                expected: 2
            })
        ));
        assert!(matches!(
            rack_from_table(&[vec![0, 2], vec![1, 1]]),
            Err(RackError::EntryOutOfRange {
                row: 0,
                col: 1,
                value: 2,
                n: 2
            })
        ));
    }

    #[test]
    fn non_bijective_columns_reported() {
        let err = rack_from_table(&[vec![0, 0], vec![0, 1]]).unwrap_err();
        let RackError::Axioms(report) = err else {
            panic!()
        };
        assert!(report
            .violations
            .contains(&Violation::NotBijective { y: 0 }));
        assert!(!report
            .violations
            .contains(&Violation::NotBijective { y: 1 }));
    }

    #[test]
    fn subracks() {
        let d3 = dihedral_quandle(3);
        assert!(d3.is_subrack(&[0, 1, 2]));
        for x in 0..3 {
            assert!(d3.is_subrack(&[x]));
        }
        // 0 ▷ 1 = 2
        assert_eq!(d3.op(0, 1), 2);
        assert!(!d3.is_subrack(&[0, 1]));
        assert!(!d3.is_subrack(&[]));
    }
}
