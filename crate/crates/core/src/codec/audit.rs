use super::info::{degree_split, greedy_order};
use super::{CodecError, CodecParams};
use crate::graph::{merged_part_indices, ColoredDigraph, EdgeSet};
use crate::rack::Rack;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuditFailKind {
    /// `x_i > x_{i-1}`.
    Increasing,
    /// `Σ x_i > n`.
    SumExceedsOrder,
    /// `cp(G_T) − cp(G_T + E_j) > x_{L+1}`.
    DropExceedsNextGain { j: usize },
    /// `|M_j| > 2 (cp(G_T) − cp(G_T + E_j))`.
    MergeCountExceedsTwiceDrop { j: usize },
}

/// `index` is 1-based into the `x` sequence, or the position of `j` in `S_≤Δ ∖ T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuditFail {
    pub index: usize,
    #[serde(flatten)]
    pub kind: AuditFailKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeDrop {
    pub j: usize,
    pub drop: usize,
    pub merged: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub params: CodecParams,
    pub greedy_order: Vec<usize>,
    /// `cp(H_0), cp(H_1), …` along the full greedy order of `S_≤Δ`.
    pub cp_sequence: Vec<usize>,
    /// `x_i = cp(H_{i−1}) − cp(H_i)`, `x[0]` being `x_1`.
    pub x: Vec<usize>,
    pub t_len: usize,
    pub drops: Vec<MergeDrop>,
    pub failure: Option<AuditFail>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replays the greedy construction and checks the merge bounds it implies.
pub fn merge_bound_audit(rack: &Rack, params: &CodecParams) -> Result<AuditReport, CodecError> {
    let n = rack.order();
    params.validate(n)?;
    let (s_low, _) = degree_split(rack, params.delta);
    let (order, cps) = greedy_order(rack, &s_low);
    let x: Vec<usize> = cps.windows(2).map(|w| w[0] - w[1]).collect();
    let t_len = params.cap_l.min(order.len());
    let t = &order[..t_len];
    let g_t = ColoredDigraph::from_rack(rack, t);
    let comps = g_t.components();

    let mut failure = None;
    if let Some(i) = (1..x.len()).find(|&i| x[i] > x[i - 1]) {
        failure = Some(AuditFail {
            index: i + 1,
            kind: AuditFailKind::Increasing,
        });
    } else if x.iter().sum::<usize>() > n {
        failure = Some(AuditFail {
            index: x.len(),
            kind: AuditFailKind::SumExceedsOrder,
        });
    }

    let mut drops = Vec::new();
    for (pos, &j) in order[t_len..].iter().enumerate() {
        let edges = EdgeSet::of_perm(rack.map(j));
        let drop = comps.cp() - g_t.cp_with(&edges);
        let merged = merged_part_indices(&comps, &edges).len();
        if failure.is_none() {
            if drop > x[t_len] {
                failure = Some(AuditFail {
                    index: pos + 1,
                    kind: AuditFailKind::DropExceedsNextGain { j },
                });
            } else if merged > 2 * drop {
                failure = Some(AuditFail {
                    index: pos + 1,
                    kind: AuditFailKind::MergeCountExceedsTwiceDrop { j },
                });
            }
        }
        drops.push(MergeDrop { j, drop, merged });
    }
    drops.sort_by_key(|d| d.j);
    Ok(AuditReport {
        n,
        params: *params,
        greedy_order: order,
        cp_sequence: cps,
        x,
        t_len,
        drops,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        conjugation_quandle_of, dihedral_quandle, permutation_rack, symmetric_group, trivial_rack,
    };
    use crate::perm::Perm;

    #[test]
    fn trivial_all_zero() {
        let rep = merge_bound_audit(&trivial_rack(5), &CodecParams { delta: 1, cap_l: 2 }).unwrap();
        assert_eq!(rep.x, vec![0; 5]);
        assert!(rep.pass());
        assert!(rep.drops.iter().all(|d| d.drop == 0 && d.merged == 0));
    }

    #[test]
    fn single_cycle_colour() {
        let n = 6;
        let c = Perm::from_cycles(n, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        let rep =
            merge_bound_audit(&permutation_rack(&c), &CodecParams { delta: 1, cap_l: 1 }).unwrap();
        let mut expected = vec![0; n];
        expected[0] = n - 1;
        assert_eq!(rep.x, expected);
        assert!(rep.pass());
    }

    #[test]
    fn families_pass() {
        let s3 = conjugation_quandle_of(&symmetric_group(3));
        for (r, p) in [
            (dihedral_quandle(6), CodecParams { delta: 5, cap_l: 1 }),
            (dihedral_quandle(9), CodecParams { delta: 8, cap_l: 2 }),
            (s3, CodecParams { delta: 3, cap_l: 1 }),
        ] {
            let rep = merge_bound_audit(&r, &p).unwrap();
            assert!(rep.pass(), "{rep:?}");
        }
    }
}
