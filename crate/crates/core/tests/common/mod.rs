#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Mutex;

use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, ZeroSet, DEFAULT_RESIDUAL_TOL};

pub fn data_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("zeros_10k.txt")
}

static LOCK: Mutex<()> = Mutex::new(());

/// The first `count` zeros, enriched once and cached under the target tmpdir.
pub fn zeros(count: usize) -> ZeroSet {
    let _guard = LOCK.lock().unwrap_or_else(|e| e.into_inner());
    let cache = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("zeros_{count}.bin"));
    if let Ok(set) = ZeroSet::load(&cache) {
        if set.len() == count {
            return set;
        }
    }
    let ordinates = read_ordinates(data_file()).expect("zero table");
    let set = enrich(&ordinates[..count], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL).expect("enrich");
    set.save(&cache).expect("write cache");
    set
}

/// Truncation height selecting exactly the first `count` zeros.
pub fn height(set: &ZeroSet, count: usize) -> f64 {
    set.height_for_count(count).unwrap()
}

pub fn log_grid(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut xs: Vec<f64> =
        (0..count).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp()).collect();
    xs[0] = lo;
    xs[count - 1] = hi;
    xs
}

pub fn median(v: &[f64]) -> f64 {
    liouville_conv::report::median(v)
}
