//! Regenerates the JSON model files in the workspace's `models/` directory
//! from the in-code constructors. Run after changing a constructor:
//!
//! ```text
//! cargo run -p ainfty --example regen_models
//! ```

use std::path::PathBuf;

use ainfty::format;
use ainfty_core::models::shipped_models;

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    std::fs::create_dir_all(&dir).expect("create models dir");
    for md in shipped_models() {
        let path = dir.join(format!("{}.json", md.name));
        format::save_model(&md, &path).expect("write model file");
        println!("wrote {}", path.display());
    }
}
