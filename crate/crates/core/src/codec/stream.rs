use super::bits::{BitReader, BitWriter};
use super::info::{build_info, t_plus_from_restrictions, Derived, InfoTuple, PartialMap};
use super::{CodecError, CodecParams};
use crate::families::trivial_rack;
use crate::graph::ColoredDigraph;
use crate::perm::{big_bit_width, bit_width, factorial_bits, Perm};
use crate::rack::Rack;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::VecDeque;

pub const MAGIC: [u8; 4] = *b"RKE1";
const HEADER_LEN: usize = 10;

/// Stored image indices for one component representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualEntry {
    pub representative: usize,
    /// Minimum vertex of each unmerged component, ascending.
    pub component_minima: Vec<usize>,
    /// Size of each of those components.
    pub radices: Vec<usize>,
    /// Position of `(min D)f_v` inside sorted `D`, per component.
    pub indices: Vec<usize>,
}

impl ResidualEntry {
    /// The indices packed as one mixed-radix number, least significant component first.
    pub fn packed(&self) -> BigUint {
        let mut value = BigUint::zero();
        for (&idx, &radix) in self.indices.iter().zip(&self.radices).rev() {
            value = value * radix + idx;
        }
        value
    }

    pub fn bit_len(&self) -> u64 {
        big_bit_width(&radix_product(&self.radices))
    }

    /// Sum of per-index widths `⌈log₂|D|⌉`, an upper bound for [`bit_len`](Self::bit_len).
    pub fn naive_bit_len(&self) -> u64 {
        self.radices.iter().map(|&r| u64::from(bit_width(r))).sum()
    }
}

fn radix_product(radices: &[usize]) -> BigUint {
    radices.iter().fold(BigUint::from(1u8), |acc, &r| acc * r)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Residual {
    pub entries: Vec<ResidualEntry>,
}

impl Residual {
    pub fn index_count(&self) -> usize {
        self.entries.iter().map(|e| e.indices.len()).sum()
    }

    pub fn bit_len(&self) -> u64 {
        self.entries.iter().map(ResidualEntry::bit_len).sum()
    }
}

fn is_known(derived: &Derived, v: usize) -> bool {
    derived.s_high.binary_search(&v).is_ok() || derived.t_plus.binary_search(&v).is_ok()
}

/// Representatives (component minima) whose map is not carried by the tuple,
/// paired with their unmerged part indices.
fn residual_plan(
    info: &InfoTuple,
    derived: &Derived,
) -> Result<Vec<(usize, Vec<usize>)>, CodecError> {
    let mut plan = Vec::new();
    for part in derived.comps.parts() {
        let v = part[0];
        if is_known(derived, v) {
            continue;
        }
        let merged = info.merged_indices(&derived.comps, v).ok_or_else(|| {
            CodecError::CorruptStream(format!("no merge list for representative {v}"))
        })?;
        plan.push((v, derived.unmerged(&merged)));
    }
    Ok(plan)
}

/// The residual of `rack` relative to its information tuple.
pub fn extract_residual(rack: &Rack, info: &InfoTuple) -> Result<Residual, CodecError> {
    let derived = info.derive()?;
    extract_with(rack, info, &derived)
}

fn extract_with(rack: &Rack, info: &InfoTuple, derived: &Derived) -> Result<Residual, CodecError> {
    let parts = derived.comps.parts();
    let mut entries = Vec::new();
    for (v, unmerged) in residual_plan(info, derived)? {
        let f = rack.map(v);
        let mut entry = ResidualEntry {
            representative: v,
            component_minima: vec![],
            radices: vec![],
            indices: vec![],
        };
        for d in unmerged {
            let part = &parts[d];
            let image = f.apply(part[0]);
            let idx = part.binary_search(&image).map_err(|_| {
                CodecError::Internal(format!(
                    "({})f_{v} = {image} leaves its unmerged component",
                    part[0]
                ))
            })?;
            entry.component_minima.push(part[0]);
            entry.radices.push(part.len());
            entry.indices.push(idx);
        }
        entries.push(entry);
    }
    Ok(Residual { entries })
}

pub(crate) struct Encoded {
    pub bytes: Vec<u8>,
    pub info_bits: u64,
    pub residual_bits: u64,
    pub info: Option<InfoTuple>,
    pub residual: Residual,
}

fn header(n: usize, params: &CodecParams) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    for v in [n, params.delta, params.cap_l] {
        out.extend_from_slice(&(v as u16).to_be_bytes());
    }
    out
}

pub(crate) fn encode_detailed(rack: &Rack, params: &CodecParams) -> Result<Encoded, CodecError> {
    let n = rack.order();
    params.validate(n)?;
    let mut bytes = header(n, params);
    if n == 1 {
        return Ok(Encoded {
            bytes,
            info_bits: 0,
            residual_bits: 0,
            info: None,
            residual: Residual::default(),
        });
    }
    let info = build_info(rack, params)?;
    let derived = info.derive()?;
    let residual = extract_with(rack, &info, &derived)?;
    let mut w = BitWriter::new();
    write_info(&mut w, &info, &derived);
    let info_bits = w.bit_len();
    for e in &residual.entries {
        w.write_big(&e.packed(), e.bit_len());
    }
    let residual_bits = w.bit_len() - info_bits;
    bytes.extend(w.finish());
    Ok(Encoded {
        bytes,
        info_bits,
        residual_bits,
        info: Some(info),
        residual,
    })
}

/// Serialises `rack`: a 10-byte header (`RKE1`, then `n`, `delta`, `cap_l` as
/// big-endian `u16`) followed by the bit-packed information tuple and residual.
pub fn encode(rack: &Rack, params: &CodecParams) -> Result<Vec<u8>, CodecError> {
    Ok(encode_detailed(rack, params)?.bytes)
}

fn write_subset(w: &mut BitWriter, n: usize, members: &[usize]) {
    let mut bits = vec![false; n];
    for &v in members {
        bits[v] = true;
    }
    for b in bits {
        w.push_bit(b);
    }
}

fn write_partial(w: &mut BitWriter, n: usize, map: &PartialMap) {
    write_subset(w, n, &map.domain);
    for &img in &map.images {
        w.write(img as u64, bit_width(n));
    }
}

fn write_info(w: &mut BitWriter, info: &InfoTuple, derived: &Derived) {
    let n = info.n;
    let lehmer = factorial_bits(n);
    write_subset(w, n, &info.s_low);
    for (_, f) in &info.high_maps {
        w.write_big(&f.lehmer_rank(), lehmer);
    }
    w.write(info.t_set.len() as u64, bit_width(n + 1));
    for &t in &info.t_set {
        w.write(t as u64, bit_width(n));
    }
    for r in &info.t_restrictions {
        write_partial(w, n, r);
    }
    for (_, f) in &info.t_plus_maps {
        w.write_big(&f.lehmer_rank(), lehmer);
    }
    for (_, merged) in &info.merge_lists {
        let indices: Vec<usize> = merged.iter().map(|p| derived.comps.part_of(p[0])).collect();
        write_subset(w, derived.comps.cp(), &indices);
    }
    for (_, r) in &info.merged_restrictions {
        write_partial(w, n, r);
    }
}

fn corrupt<T>(msg: impl Into<String>) -> Result<T, CodecError> {
    Err(CodecError::CorruptStream(msg.into()))
}

fn read_subset(r: &mut BitReader, n: usize) -> Result<Vec<usize>, CodecError> {
    let mut out = Vec::new();
    for v in 0..n {
        if r.read_bit()? {
            out.push(v);
        }
    }
    Ok(out)
}

fn read_vertex(r: &mut BitReader, n: usize) -> Result<usize, CodecError> {
    let v = r.read(bit_width(n))? as usize;
    if v >= n {
        return corrupt(format!("vertex {v} out of range"));
    }
    Ok(v)
}

fn read_perm(r: &mut BitReader, n: usize) -> Result<Perm, CodecError> {
    let rank = r.read_big(factorial_bits(n))?;
    Perm::from_lehmer_rank(n, &rank)
        .ok_or_else(|| CodecError::CorruptStream("Lehmer rank ≥ n!".into()))
}

fn read_partial(
    r: &mut BitReader,
    n: usize,
    expected_domain: &[usize],
    what: &str,
) -> Result<PartialMap, CodecError> {
    let domain = read_subset(r, n)?;
    if domain != expected_domain {
        return corrupt(format!(
            "{what}: stored domain does not match the derived one"
        ));
    }
    let images = (0..domain.len())
        .map(|_| read_vertex(r, n))
        .collect::<Result<_, _>>()?;
    Ok(PartialMap { domain, images })
}

fn read_info(r: &mut BitReader, n: usize) -> Result<(InfoTuple, Derived), CodecError> {
    let s_low = read_subset(r, n)?;
    let s_high: Vec<usize> = (0..n).filter(|v| s_low.binary_search(v).is_err()).collect();
    let high_maps = s_high
        .iter()
        .map(|&j| Ok((j, read_perm(r, n)?)))
        .collect::<Result<Vec<_>, _>>()?;

    let count = r.read(bit_width(n + 1))? as usize;
    if count > s_low.len() {
        return corrupt("T larger than S_low");
    }
    let mut t_set = Vec::with_capacity(count);
    for _ in 0..count {
        let t = read_vertex(r, n)?;
        if s_low.binary_search(&t).is_err() || t_set.contains(&t) {
            return corrupt(format!("invalid T element {t}"));
        }
        t_set.push(t);
    }
    let mut t_sorted = t_set.clone();
    t_sorted.sort_unstable();
    let t_restrictions = (0..n)
        .map(|j| read_partial(r, n, &t_sorted, &format!("f_{j}|T")))
        .collect::<Result<Vec<_>, _>>()?;
    let t_plus = t_plus_from_restrictions(n, &t_set, &t_restrictions);
    let t_plus_maps = t_plus
        .iter()
        .map(|&k| Ok((k, read_perm(r, n)?)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut info = InfoTuple {
        n,
        s_low,
        high_maps,
        t_set,
        t_restrictions,
        t_plus_maps,
        merge_lists: Vec::new(),
        merged_restrictions: Vec::new(),
    };
    let derived = info.derive()?;
    let parts = derived.comps.parts();
    let rest: Vec<usize> = info
        .s_low
        .iter()
        .copied()
        .filter(|j| derived.t_sorted.binary_search(j).is_err())
        .collect();
    for &j in &rest {
        let merged = read_subset(r, derived.comps.cp())?;
        info.merge_lists
            .push((j, merged.iter().map(|&i| parts[i].clone()).collect()));
    }
    for (j, merged) in info.merge_lists.clone() {
        let mut y: Vec<usize> = merged.into_iter().flatten().collect();
        y.sort_unstable();
        let map = read_partial(r, n, &y, &format!("f_{j}|Y"))?;
        info.merged_restrictions.push((j, map));
    }
    Ok((info, derived))
}

fn read_residual(
    r: &mut BitReader,
    info: &InfoTuple,
    derived: &Derived,
) -> Result<Residual, CodecError> {
    let parts = derived.comps.parts();
    let mut entries = Vec::new();
    for (v, unmerged) in residual_plan(info, derived)? {
        let radices: Vec<usize> = unmerged.iter().map(|&d| parts[d].len()).collect();
        let bound = radix_product(&radices);
        let mut value = r.read_big(big_bit_width(&bound))?;
        if value >= bound {
            return corrupt(format!("residual for representative {v} out of range"));
        }
        let mut indices = Vec::with_capacity(radices.len());
        for &radix in &radices {
            indices.push((&value % radix).to_usize().expect("remainder below radix"));
            value /= radix;
        }
        entries.push(ResidualEntry {
            representative: v,
            component_minima: unmerged.iter().map(|&d| parts[d][0]).collect(),
            radices,
            indices,
        });
    }
    Ok(Residual { entries })
}

fn inconsistent<T>(msg: impl Into<String>) -> Result<T, CodecError> {
    Err(CodecError::InconsistentDecode(msg.into()))
}

fn out_edges(g: &ColoredDigraph) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        out[e.from].push((e.to, e.color));
    }
    out
}

/// Rebuilds every `f_j` from the tuple and the residual.
fn reconstruct(
    info: &InfoTuple,
    derived: &Derived,
    residual: &Residual,
) -> Result<Vec<Perm>, CodecError> {
    let n = info.n;
    let mut known: Vec<Option<Perm>> = vec![None; n];
    for (j, f) in info.high_maps.iter().chain(&info.t_plus_maps) {
        known[*j] = Some(f.clone());
    }
    let out = out_edges(&derived.g_t);
    let t_index = |i: usize| {
        derived
            .t_sorted
            .binary_search(&i)
            .expect("colours of G_T lie in T")
    };
    let parts = derived.comps.parts();

    for part in parts {
        let v = part[0];
        if known[v].is_none() {
            let mut img = vec![usize::MAX; n];
            let restricted = info.merged_restriction(v).ok_or_else(|| {
                CodecError::InconsistentDecode(format!("no restriction stored for {v}"))
            })?;
            for (&x, &y) in restricted.domain.iter().zip(&restricted.images) {
                img[x] = y;
            }
            let entry = residual
                .entries
                .iter()
                .find(|e| e.representative == v)
                .ok_or_else(|| CodecError::InconsistentDecode(format!("no residual for {v}")))?;
            for (&start, &idx) in entry.component_minima.iter().zip(&entry.indices) {
                let comp = &parts[derived.comps.part_of(start)];
                img[start] = comp[idx];
                // (u)f_v = ((w)f_v) f_k with k = (i)f_v along each edge w →i u
                let mut queue = VecDeque::from([start]);
                let mut reached = 1;
                let mut seen = vec![false; n];
                seen[start] = true;
                while let Some(w) = queue.pop_front() {
                    for &(u, i) in &out[w] {
                        if seen[u] {
                            continue;
                        }
                        let k = info.t_restrictions[v].images[t_index(i)];
                        let Some(fk) = &known[k] else {
                            return inconsistent(format!(
                                "map of {k} needed for propagation is unknown"
                            ));
                        };
                        img[u] = fk.apply(img[w]);
                        seen[u] = true;
                        reached += 1;
                        queue.push_back(u);
                    }
                }
                if reached != comp.len() {
                    return inconsistent(format!(
                        "propagation from {start} did not cover its component"
                    ));
                }
            }
            match Perm::from_images(img) {
                Some(f) => known[v] = Some(f),
                None => return inconsistent(format!("reconstructed f_{v} is not a permutation")),
            }
        }
        // every other map in the component by conjugation along directed edges
        let mut queue = VecDeque::from([v]);
        let mut seen = vec![false; n];
        seen[v] = true;
        while let Some(w) = queue.pop_front() {
            for &(u, c) in &out[w] {
                if seen[u] {
                    continue;
                }
                seen[u] = true;
                if known[u].is_none() {
                    let fw = known[w].as_ref().expect("visited vertices are known");
                    let fc = known[c].as_ref().expect("T maps are known");
                    known[u] = Some(fw.conjugate_by(fc));
                }
                queue.push_back(u);
            }
        }
    }
    known
        .into_iter()
        .enumerate()
        .map(|(j, f)| {
            f.ok_or_else(|| CodecError::InconsistentDecode(format!("f_{j} not determined")))
        })
        .collect()
}

/// Inverse of [`encode`]. Streams that decode to a rack whose canonical
/// encoding differs from the input are rejected.
pub fn decode(bytes: &[u8]) -> Result<Rack, CodecError> {
    if bytes.len() < HEADER_LEN {
        return corrupt("stream shorter than header");
    }
    if bytes[..4] != MAGIC {
        return corrupt("bad magic");
    }
    let word = |i: usize| u16::from_be_bytes([bytes[i], bytes[i + 1]]) as usize;
    let (n, params) = (
        word(4),
        CodecParams {
            delta: word(6),
            cap_l: word(8),
        },
    );
    if n == 0 {
        return corrupt("order 0");
    }
    params
        .validate(n)
        .map_err(|e| CodecError::CorruptStream(e.to_string()))?;
    let body = &bytes[HEADER_LEN..];
    if n == 1 {
        if !body.is_empty() {
            return corrupt("trailing bytes after header");
        }
        return Ok(trivial_rack(1));
    }
    let mut r = BitReader::new(body);
    let (info, derived) = read_info(&mut r, n)?;
    let residual = read_residual(&mut r, &info, &derived)?;
    r.expect_end()?;
    let maps = reconstruct(&info, &derived, &residual)?;
    let rack = Rack::from_maps(maps).map_err(|e| CodecError::InconsistentDecode(e.to_string()))?;
    if encode(&rack, &params)? != bytes {
        return inconsistent("stream is not the encoding of the rack it describes");
    }
    Ok(rack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        conjugation_quandle_of, dihedral_quandle, permutation_rack, symmetric_group,
    };

    fn p(delta: usize, cap_l: usize) -> CodecParams {
        CodecParams { delta, cap_l }
    }

    #[test]
    fn trivial_residual_is_fixed_point_indices() {
        let r = trivial_rack(5);
        let info = build_info(&r, &p(1, 2)).unwrap();
        let res = extract_residual(&r, &info).unwrap();
        // G_T has 5 singletons; 0 and 1 are in T, the rest store one index per component
        assert_eq!(
            res.entries
                .iter()
                .map(|e| e.representative)
                .collect::<Vec<_>>(),
            vec![2, 3, 4]
        );
        assert!(res
            .entries
            .iter()
            .all(|e| e.indices == vec![0; 5] && e.radices == vec![1; 5]));
        assert_eq!(res.bit_len(), 0);
    }

    #[test]
    fn dihedral_three_residual_is_empty() {
        let r = dihedral_quandle(3);
        let info = build_info(&r, &p(2, 1)).unwrap();
        assert!(extract_residual(&r, &info).unwrap().entries.is_empty());
    }

    #[test]
    fn permutation_rack_residual() {
        // all maps equal (0 1)(2 3)(4 5); T = {0}, T⁺ = {0, 1}
        let s = Perm::from_cycles(6, &[&[0, 1], &[2, 3], &[4, 5]]).unwrap();
        let r = permutation_rack(&s);
        let info = build_info(&r, &p(1, 1)).unwrap();
        assert_eq!(info.t_set, vec![0]);
        let res = extract_residual(&r, &info).unwrap();
        assert_eq!(res.entries.len(), 2);
        for (e, v) in res.entries.iter().zip([2, 4]) {
            assert_eq!(e.representative, v);
            assert_eq!(e.component_minima, vec![0, 2, 4]);
            assert_eq!(e.indices, vec![1, 1, 1]);
            assert_eq!(e.packed(), BigUint::from(7u8));
            assert_eq!(e.bit_len(), 3);
        }
        assert_eq!(decode(&encode(&r, &p(1, 1)).unwrap()).unwrap(), r);
    }

    #[test]
    fn round_trips() {
        let s3 = conjugation_quandle_of(&symmetric_group(3));
        for (r, params) in [
            (trivial_rack(1), CodecParams::default_for(1)),
            (trivial_rack(4), p(1, 2)),
            (dihedral_quandle(3), p(2, 1)),
            (dihedral_quandle(3), p(1, 1)),
            (dihedral_quandle(6), p(2, 1)),
            (s3.clone(), CodecParams::default_for(6)),
            (s3.clone(), p(1, 1)),
            (s3, p(1, 0)),
        ] {
            let bytes = encode(&r, &params).unwrap();
            assert_eq!(decode(&bytes).unwrap(), r, "params {params:?}");
        }
    }

    #[test]
    fn header_only_streams() {
        let bytes = encode(&trivial_rack(1), &CodecParams::default_for(1)).unwrap();
        assert_eq!(bytes, vec![0x52, 0x4B, 0x45, 0x31, 0, 1, 0, 1, 0, 0]);
        assert_eq!(decode(&bytes).unwrap(), trivial_rack(1));
    }

    #[test]
    fn corrupt_streams() {
        let bytes = encode(&dihedral_quandle(5), &p(2, 2)).unwrap();
        for cut in [0, 3, 9, 11, bytes.len() - 1] {
            assert!(
                matches!(decode(&bytes[..cut]), Err(CodecError::CorruptStream(_))),
                "cut {cut}"
            );
        }
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad), Err(CodecError::CorruptStream(_))));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(decode(&long), Err(CodecError::CorruptStream(_))));
    }

    #[test]
    fn bit_flips_never_yield_a_different_rack() {
        let r = conjugation_quandle_of(&symmetric_group(3));
        let bytes = encode(&r, &p(1, 1)).unwrap();
        for pos in 10 * 8..bytes.len() * 8 {
            let mut b = bytes.clone();
            b[pos / 8] ^= 0x80 >> (pos % 8);
            assert!(decode(&b).is_err(), "flip at bit {pos} accepted");
        }
    }
}
