use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    let header = cbindgen::Builder::new()
        .with_crate(&dir)
        .with_config(config)
        .generate()
        .expect("header generation");
    let target = dir.join("include").join("racklab.h");
    std::fs::create_dir_all(target.parent().unwrap()).unwrap();
    let mut bytes = Vec::new();
    header.write(&mut bytes);
    if std::fs::read(&target).ok().as_deref() != Some(&bytes[..]) {
        std::fs::write(&target, bytes).unwrap();
    }
}
