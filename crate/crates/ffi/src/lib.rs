//! C interface to `racklab`.
//!
//! Racks are opaque `RlRack` handles released with `rl_rack_free`. Encoded
//! streams are returned as buffers released with `rl_bytes_free`. Every
//! fallible call returns an `RlStatus`.

use racklab::codec::{self, CodecError, CodecParams};
use racklab::{Rack, RackError};
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes; `RL_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlStatus {
    RlOk = 0,
    RlNullPointer = 1,
    RlInvalidTable = 2,
    RlNotARack = 3,
    RlInvalidParams = 4,
    RlCorruptStream = 5,
    RlInconsistentDecode = 6,
    RlOutOfRange = 7,
    RlInternal = 8,
}

/// Opaque rack handle.
pub struct RlRack {
    inner: Rack,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RlParams {
    pub delta: u32,
    pub cap_l: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlStats {
    pub components: usize,
    pub zeta: f64,
    pub bound: f64,
    pub residual_bits: u64,
    pub header_bits: u64,
    pub total_bytes: usize,
}

fn guard(f: impl FnOnce() -> RlStatus) -> RlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(RlStatus::RlInternal)
}

fn rack_status(e: &RackError) -> RlStatus {
    match e {
        RackError::Axioms(_) => RlStatus::RlNotARack,
        _ => RlStatus::RlInvalidTable,
    }
}

fn codec_status(e: &CodecError) -> RlStatus {
    match e {
        CodecError::InvalidParams { .. } => RlStatus::RlInvalidParams,
        CodecError::CorruptStream(_) => RlStatus::RlCorruptStream,
        CodecError::InconsistentDecode(_) => RlStatus::RlInconsistentDecode,
        CodecError::Internal(_) => RlStatus::RlInternal,
    }
}

fn params_of(p: RlParams) -> CodecParams {
    CodecParams {
        delta: p.delta as usize,
        cap_l: p.cap_l as usize,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn rl_status_message(status: RlStatus) -> *const c_char {
    let s: &'static CStr = match status {
        RlStatus::RlOk => c"ok",
        RlStatus::RlNullPointer => c"null pointer argument",
        RlStatus::RlInvalidTable => c"malformed operation table",
        RlStatus::RlNotARack => c"table violates the rack axioms",
        RlStatus::RlInvalidParams => c"invalid codec parameters",
        RlStatus::RlCorruptStream => c"corrupt encoded stream",
        RlStatus::RlInconsistentDecode => c"stream decodes to an inconsistent rack",
        RlStatus::RlOutOfRange => c"element out of range",
        RlStatus::RlInternal => c"internal error",
    };
    s.as_ptr()
}

/// Builds a rack from a row-major `n × n` table, `table[x * n + y] = x ▷ y`.
///
/// # Safety
/// `table` must point to `n * n` readable values and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn rl_rack_from_table(
    n: usize,
    table: *const u32,
    out: *mut *mut RlRack,
) -> RlStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return RlStatus::RlNullPointer;
        }
        let Some(len) = n.checked_mul(n) else {
            return RlStatus::RlInvalidTable;
        };
        let flat: Vec<usize> = std::slice::from_raw_parts(table, len)
            .iter()
            .map(|&v| v as usize)
            .collect();
        match Rack::from_flat(n, flat) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RlRack { inner }));
                RlStatus::RlOk
            }
            Err(e) => rack_status(&e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `rack` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_rack_free(rack: *mut RlRack) {
    if !rack.is_null() {
        drop(Box::from_raw(rack));
    }
}

/// Order of the rack, or 0 for null.
///
/// # Safety
/// `rack` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_rack_order(rack: *const RlRack) -> usize {
    rack.as_ref().map_or(0, |r| r.inner.order())
}

/// Writes `x ▷ y` to `out`.
///
/// # Safety
/// `rack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_rack_op(
    rack: *const RlRack,
    x: u32,
    y: u32,
    out: *mut u32,
) -> RlStatus {
    let (Some(r), false) = (rack.as_ref(), out.is_null()) else {
        return RlStatus::RlNullPointer;
    };
    let n = r.inner.order();
    if x as usize >= n || y as usize >= n {
        return RlStatus::RlOutOfRange;
    }
    *out = r.inner.op(x as usize, y as usize) as u32;
    RlStatus::RlOk
}

/// Writes whether `x ▷ x = x` for all `x`.
///
/// # Safety
/// `rack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_rack_is_quandle(rack: *const RlRack, out: *mut bool) -> RlStatus {
    let (Some(r), false) = (rack.as_ref(), out.is_null()) else {
        return RlStatus::RlNullPointer;
    };
    *out = r.inner.is_quandle();
    RlStatus::RlOk
}

/// Copies the row-major table into `buf`, which must hold `len ≥ n * n` values.
///
/// # Safety
/// `rack` must be a live handle and `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn rl_rack_table(rack: *const RlRack, buf: *mut u32, len: usize) -> RlStatus {
    let (Some(r), false) = (rack.as_ref(), buf.is_null()) else {
        return RlStatus::RlNullPointer;
    };
    let table = r.inner.table();
    if len < table.len() {
        return RlStatus::RlOutOfRange;
    }
    for (i, &v) in table.iter().enumerate() {
        *buf.add(i) = v as u32;
    }
    RlStatus::RlOk
}

/// Default codec parameters for order `n`.
#[no_mangle]
pub extern "C" fn rl_default_params(n: usize) -> RlParams {
    let p = CodecParams::default_for(n);
    RlParams {
        delta: p.delta as u32,
        cap_l: p.cap_l as u32,
    }
}

/// Encodes `rack`; the buffer written to `out_bytes` must be released with `rl_bytes_free`.
///
/// # Safety
/// `rack` must be a live handle; `out_bytes` and `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_encode(
    rack: *const RlRack,
    params: RlParams,
    out_bytes: *mut *mut u8,
    out_len: *mut usize,
) -> RlStatus {
    guard(|| {
        let (Some(r), false, false) = (rack.as_ref(), out_bytes.is_null(), out_len.is_null())
        else {
            return RlStatus::RlNullPointer;
        };
        match codec::encode(&r.inner, &params_of(params)) {
            Ok(bytes) => {
                let boxed = bytes.into_boxed_slice();
                *out_len = boxed.len();
                *out_bytes = Box::into_raw(boxed) as *mut u8;
                RlStatus::RlOk
            }
            Err(e) => codec_status(&e),
        }
    })
}

/// Releases a buffer from `rl_encode`.
///
/// # Safety
/// `bytes` and `len` must come from one `rl_encode` call, or `bytes` be null.
#[no_mangle]
pub unsafe extern "C" fn rl_bytes_free(bytes: *mut u8, len: usize) {
    if !bytes.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(bytes, len)));
    }
}

/// Decodes a stream produced by `rl_encode`.
///
/// # Safety
/// `bytes` must point to `len` readable bytes and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_decode(
    bytes: *const u8,
    len: usize,
    out: *mut *mut RlRack,
) -> RlStatus {
    guard(|| {
        if bytes.is_null() || out.is_null() {
            return RlStatus::RlNullPointer;
        }
        match codec::decode(std::slice::from_raw_parts(bytes, len)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RlRack { inner }));
                RlStatus::RlOk
            }
            Err(e) => codec_status(&e),
        }
    })
}

/// Size accounting of the encoding of `rack`.
///
/// # Safety
/// `rack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_encoding_stats(
    rack: *const RlRack,
    params: RlParams,
    out: *mut RlStats,
) -> RlStatus {
    guard(|| {
        let (Some(r), false) = (rack.as_ref(), out.is_null()) else {
            return RlStatus::RlNullPointer;
        };
        match codec::encoding_stats(&r.inner, &params_of(params)) {
            Ok(s) => {
                *out = RlStats {
                    components: s.cp,
                    zeta: s.zeta,
                    bound: s.bound,
                    residual_bits: s.residual_bits,
                    header_bits: s.header_bits,
                    total_bytes: s.total_bytes,
                };
                RlStatus::RlOk
            }
            Err(e) => codec_status(&e),
        }
    })
}
