use racklab_ffi::*;
use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn rack(n: usize, table: &[u32]) -> *mut RlRack {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { rl_rack_from_table(n, table.as_ptr(), &mut out) },
        RlStatus::RlOk
    );
    out
}

fn dihedral(n: u32) -> Vec<u32> {
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (2 * y + n - x) % n))
        .collect()
}

#[test]
fn round_trip_through_handles() {
    let table = dihedral(5);
    let r = rack(5, &table);
    unsafe {
        assert_eq!(rl_rack_order(r), 5);
        let mut v = 0;
        assert_eq!(rl_rack_op(r, 1, 3, &mut v), RlStatus::RlOk);
        assert_eq!(v, 0);
        assert_eq!(rl_rack_op(r, 5, 0, &mut v), RlStatus::RlOutOfRange);

        let params = RlParams { delta: 2, cap_l: 2 };
        let (mut bytes, mut len) = (ptr::null_mut(), 0);
        assert_eq!(rl_encode(r, params, &mut bytes, &mut len), RlStatus::RlOk);
        let mut back = ptr::null_mut();
        assert_eq!(rl_decode(bytes, len, &mut back), RlStatus::RlOk);
        let mut out = vec![0u32; 25];
        assert_eq!(rl_rack_table(back, out.as_mut_ptr(), 25), RlStatus::RlOk);
        assert_eq!(out, table);
        assert_eq!(
            rl_rack_table(back, out.as_mut_ptr(), 24),
            RlStatus::RlOutOfRange
        );

        let mut stats = RlStats {
            components: 0,
            zeta: 0.0,
            bound: 0.0,
            residual_bits: 0,
            header_bits: 0,
            total_bytes: 0,
        };
        assert_eq!(rl_encoding_stats(r, params, &mut stats), RlStatus::RlOk);
        assert_eq!(stats.total_bytes, len);
        assert!(stats.zeta <= stats.bound);

        assert_eq!(
            rl_decode(bytes, len - 1, &mut back),
            RlStatus::RlCorruptStream
        );
        rl_bytes_free(bytes, len);
        rl_rack_free(back);
        rl_rack_free(r);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            rl_rack_from_table(2, [0, 1, 1, 0].as_ptr(), &mut out),
            RlStatus::RlNotARack
        );
        assert_eq!(
            rl_rack_from_table(2, [0, 5, 1, 0].as_ptr(), &mut out),
            RlStatus::RlInvalidTable
        );
        assert_eq!(
            rl_rack_from_table(0, [0u32; 1].as_ptr(), &mut out),
            RlStatus::RlInvalidTable
        );
        assert_eq!(
            rl_rack_from_table(2, ptr::null(), &mut out),
            RlStatus::RlNullPointer
        );
        assert!(out.is_null());
        assert_eq!(rl_rack_order(ptr::null()), 0);
        let r = rack(3, &dihedral(3));
        let (mut bytes, mut len) = (ptr::null_mut(), 0);
        assert_eq!(
            rl_encode(r, RlParams { delta: 3, cap_l: 1 }, &mut bytes, &mut len),
            RlStatus::RlInvalidParams
        );
        rl_rack_free(r);
        rl_rack_free(ptr::null_mut());
        let msg = CStr::from_ptr(rl_status_message(RlStatus::RlNotARack));
        assert_eq!(msg.to_str().unwrap(), "table violates the rack axioms");
    }
    assert_eq!(rl_default_params(8), RlParams { delta: 7, cap_l: 9 });
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include").join("racklab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "rl_rack_from_table",
        "rl_encode",
        "rl_decode",
        "rl_bytes_free",
        "RL_NOT_A_RACK",
        "typedef struct RlRack RlRack",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let lib = target_dir().join("libracklab_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!(
            "skipping C link check: no cc or no static library at {}",
            lib.display()
        );
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "smoke exited with {:?}",
        out.status.code()
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "16 corrupt encoded stream"
    );
}
