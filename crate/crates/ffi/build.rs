use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");

    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("ATOMIC_ARB_H".to_string()),
        documentation: true,
        documentation_style: cbindgen::DocumentationStyle::C,
        sys_includes: vec!["stdbool.h".into(), "stddef.h".into(), "stdint.h".into()],
        no_includes: true,
        cpp_compat: true,
        autogen_warning: Some(
            "/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */".to_string(),
        ),
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            ..Default::default()
        },
        ..Default::default()
    };

    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("Unable to generate bindings");

    let out_dir = crate_dir.join("include");
    std::fs::create_dir_all(&out_dir).expect("Failed to create include directory");
    bindings.write_to_file(out_dir.join("atomic_arb.h"));
}
