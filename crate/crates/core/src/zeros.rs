//! Zeta-zero ordinates: parsing, enrichment with ζ′(ρ) and ζ(2ρ), a
//! checksummed binary cache and the SZ partial-sum diagnostic.
//!
//! Only positive ordinates are stored; ρ = ½ + iγ and its conjugate are both
//! accounted for when sums are formed. A truncation height T selects the
//! zeros with γ ≤ T, so T equal to the largest stored ordinate uses the
//! whole set.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;
use thiserror::Error;

use crate::specfun::{SpecfunError, ZetaEvaluator};

/// Default bound on |ζ(½+iγ)| accepted at ingestion.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-6;
/// |ζ′(ρ)| below this is treated as a multiple zero.
pub const SIMPLE_ZERO_TOL: f64 = 1e-8;
/// Lower bound for any ordinate (the first one is 14.1347...).
pub const MIN_ORDINATE: f64 = 14.0;

const CACHE_MAGIC: &[u8; 8] = b"LCZEROS\0";
const CACHE_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 8 + 8;
const RECORD_LEN: usize = 8 * 6;

#[derive(Debug, Error)]
pub enum ZeroError {
    #[error("line {line}: cannot parse `{text}`")]
    Parse { line: usize, text: String },
    #[error("line {line}: ordinate {gamma} is not positive")]
    NonPositive { line: usize, gamma: f64 },
    #[error("line {line}: non-monotone ordinate {gamma} after {previous}")]
    NonMonotone { line: usize, gamma: f64, previous: f64 },
    #[error("line {line}: index {found} where {expected} was expected")]
    IndexGap { line: usize, found: usize, expected: usize },
    #[error("zero #{index} at gamma = {gamma}: |zeta(1/2 + i gamma)| = {residual:.3e} exceeds {tol:.1e}")]
    Residual { index: usize, gamma: f64, residual: f64, tol: f64 },
    #[error("zero #{index} at gamma = {gamma}: |zeta'(rho)| = {modulus:.3e}, not a simple zero")]
    NotSimple { index: usize, gamma: f64, modulus: f64 },
    #[error("zero #{index} at gamma = {gamma}: {source}")]
    Evaluation { index: usize, gamma: f64, source: SpecfunError },
    #[error("T = {t} exceeds the largest stored ordinate {t_max}")]
    TooLarge { t: f64, t_max: f64 },
    #[error("{requested} zeros requested but only {available} available")]
    CountTooLarge { requested: usize, available: usize },
    #[error("not a zero cache file")]
    BadMagic,
    #[error("cache format version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("cache checksum mismatch (file truncated or corrupted)")]
    Checksum,
    #[error("cache contents violate zero-set invariants: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One zero ρ = ½ + iγ with its coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDatum {
    pub index: usize,
    pub gamma: f64,
    /// ζ′(½ + iγ)
    pub zprime: Complex64,
    /// ζ(1 + 2iγ)
    pub z2rho: Complex64,
}

impl ZeroDatum {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.gamma)
    }
}

/// Zeros 1..=K in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    zeros: Vec<ZeroDatum>,
    tolerance: f64,
}

/// Output of [`ZeroSet::sz_diagnostic`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SzDiagnostic {
    pub t: f64,
    pub zeros_used: usize,
    /// Σ 1/|ζ′(ρ)|
    pub sum_inv_zp: f64,
    /// Σ |ζ(2ρ)| / |ρ ζ′(ρ)|
    pub sum_z2_over_rho_zp: f64,
    /// sum_inv_zp / (T (log T)^{1/2})
    pub normalized: f64,
}

/// Parses ordinates, one per line, with an optional leading index column.
///
/// Blank lines and lines starting with `#` are skipped. When an index column
/// is present it must count 1, 2, 3, ... without gaps.
pub fn load_ordinates<R: BufRead>(source: R) -> Result<Vec<f64>, ZeroError> {
    let mut out: Vec<f64> = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty()).collect();
        let parse_err = || ZeroError::Parse { line: lineno, text: text.to_string() };
        let gamma_text = match fields.as_slice() {
            [g] => g,
            [idx, g] => {
                let found: usize = idx.parse().map_err(|_| parse_err())?;
                let expected = out.len() + 1;
                if found != expected {
                    return Err(ZeroError::IndexGap { line: lineno, found, expected });
                }
                g
            }
            _ => return Err(parse_err()),
        };
        let gamma: f64 = gamma_text.parse().map_err(|_| parse_err())?;
        if !gamma.is_finite() {
            return Err(parse_err());
        }
        if gamma <= 0.0 {
            return Err(ZeroError::NonPositive { line: lineno, gamma });
        }
        if let Some(&previous) = out.last() {
            if gamma <= previous {
                return Err(ZeroError::NonMonotone { line: lineno, gamma, previous });
            }
        }
        out.push(gamma);
    }
    Ok(out)
}

/// Reads an ordinate file from disk.
pub fn read_ordinates(path: impl AsRef<Path>) -> Result<Vec<f64>, ZeroError> {
    let file = fs::File::open(path)?;
    load_ordinates(io::BufReader::new(file))
}

/// Attaches ζ′(ρ) and ζ(2ρ) to every ordinate, checking |ζ(ρ)| < tolerance.
pub fn enrich<Z: ZetaEvaluator>(ordinates: &[f64], evaluator: &Z, tolerance: f64) -> Result<ZeroSet, ZeroError> {
    let zeros = ordinates
        .par_iter()
        .enumerate()
        .map(|(i, &gamma)| enrich_one(i + 1, gamma, evaluator, tolerance))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ZeroSet { zeros, tolerance })
}

fn enrich_one<Z: ZetaEvaluator>(index: usize, gamma: f64, evaluator: &Z, tol: f64) -> Result<ZeroDatum, ZeroError> {
    let wrap = |source| ZeroError::Evaluation { index, gamma, source };
    let rho = Complex64::new(0.5, gamma);
    let residual = evaluator.zeta(rho).map_err(wrap)?.norm();
    if gamma <= MIN_ORDINATE || residual >= tol {
        return Err(ZeroError::Residual { index, gamma, residual, tol });
    }
    let zprime = evaluator.zeta_derivative(rho).map_err(wrap)?;
    if zprime.norm() < SIMPLE_ZERO_TOL {
        return Err(ZeroError::NotSimple { index, gamma, modulus: zprime.norm() });
    }
    let z2rho = evaluator.zeta(rho * 2.0).map_err(wrap)?;
    Ok(ZeroDatum { index, gamma, zprime, z2rho })
}

/// Main term of the zero-counting function, (T/2π) log(T/2πe) + 7/8.
pub fn counting_estimate(t: f64) -> f64 {
    let u = t / (2.0 * std::f64::consts::PI);
    u * (u.ln() - 1.0) + 0.875
}

impl ZeroSet {
    pub fn empty() -> Self {
        Self { zeros: Vec::new(), tolerance: DEFAULT_RESIDUAL_TOL }
    }

    pub fn zeros(&self) -> &[ZeroDatum] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Residual tolerance used at ingestion.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Largest stored ordinate (0 for an empty set).
    pub fn t_max(&self) -> f64 {
        self.zeros.last().map_or(0.0, |z| z.gamma)
    }

    /// Number of zeros with γ ≤ T. Fails for T beyond the stored range,
    /// since zeros above t_max are unknown.
    pub fn count_up_to(&self, t: f64) -> Result<usize, ZeroError> {
        if t.is_nan() || (t > self.t_max() && t >= MIN_ORDINATE) {
            return Err(ZeroError::TooLarge { t, t_max: self.t_max() });
        }
        Ok(self.zeros.partition_point(|z| z.gamma <= t))
    }

    /// The zeros with γ ≤ T.
    pub fn up_to(&self, t: f64) -> Result<&[ZeroDatum], ZeroError> {
        Ok(&self.zeros[..self.count_up_to(t)?])
    }

    /// Truncation height that selects exactly the first `count` zeros.
    pub fn height_for_count(&self, count: usize) -> Result<f64, ZeroError> {
        match count {
            0 => Ok(MIN_ORDINATE / 2.0),
            k if k <= self.len() => Ok(self.zeros[k - 1].gamma),
            k => Err(ZeroError::CountTooLarge { requested: k, available: self.len() }),
        }
    }

    /// The first `count` zeros as a new set.
    pub fn first(&self, count: usize) -> Result<ZeroSet, ZeroError> {
        if count > self.len() {
            return Err(ZeroError::CountTooLarge { requested: count, available: self.len() });
        }
        Ok(Self { zeros: self.zeros[..count].to_vec(), tolerance: self.tolerance })
    }

    /// Re-evaluates |ζ(ρ)| for every zero.
    pub fn verify_residuals<Z: ZetaEvaluator>(&self, evaluator: &Z) -> Result<(), ZeroError> {
        self.zeros.par_iter().try_for_each(|z| {
            let residual = evaluator
                .zeta(z.rho())
                .map_err(|source| ZeroError::Evaluation { index: z.index, gamma: z.gamma, source })?
                .norm();
            if residual >= self.tolerance {
                return Err(ZeroError::Residual { index: z.index, gamma: z.gamma, residual, tol: self.tolerance });
            }
            Ok(())
        })
    }

    fn check_invariants(&self) -> Result<(), ZeroError> {
        let mut previous = 0.0;
        for (i, z) in self.zeros.iter().enumerate() {
            if z.index != i + 1 {
                return Err(ZeroError::Invalid(format!("index {} at position {}", z.index, i + 1)));
            }
            if !(z.gamma > previous && z.gamma > MIN_ORDINATE) {
                return Err(ZeroError::Invalid(format!("ordinate {} at index {}", z.gamma, z.index)));
            }
            if !(z.zprime.norm() >= SIMPLE_ZERO_TOL) || !z.z2rho.is_finite() {
                return Err(ZeroError::Invalid(format!("coefficients of zero {}", z.index)));
            }
            previous = z.gamma;
        }
        Ok(())
    }

    /// Versioned little-endian binary image followed by its SHA-256.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(HEADER_LEN + RECORD_LEN * self.len() + 32);
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(&self.tolerance.to_le_bytes());
        buf.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for z in &self.zeros {
            buf.extend_from_slice(&(z.index as u64).to_le_bytes());
            for v in [z.gamma, z.zprime.re, z.zprime.im, z.z2rho.re, z.z2rho.im] {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        let digest = Sha256::digest(&buf);
        buf.extend_from_slice(&digest);
        buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ZeroError> {
        if bytes.len() < 8 || &bytes[..8] != CACHE_MAGIC {
            return Err(ZeroError::BadMagic);
        }
        if bytes.len() < HEADER_LEN + 32 {
            return Err(ZeroError::Checksum);
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        let version = u32::from_le_bytes(body[8..12].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(ZeroError::Version { found: version, expected: CACHE_VERSION });
        }
        if Sha256::digest(body).as_slice() != digest {
            return Err(ZeroError::Checksum);
        }
        let f64_at = |at: usize| f64::from_le_bytes(body[at..at + 8].try_into().unwrap());
        let u64_at = |at: usize| u64::from_le_bytes(body[at..at + 8].try_into().unwrap());
        let tolerance = f64_at(12);
        let count = u64_at(20) as usize;
        if body.len() != HEADER_LEN + count * RECORD_LEN {
            return Err(ZeroError::Invalid(format!("{count} records declared, {} bytes present", body.len())));
        }
        let zeros = (0..count)
            .map(|i| {
                let at = HEADER_LEN + i * RECORD_LEN;
                ZeroDatum {
                    index: u64_at(at) as usize,
                    gamma: f64_at(at + 8),
                    zprime: Complex64::new(f64_at(at + 16), f64_at(at + 24)),
                    z2rho: Complex64::new(f64_at(at + 32), f64_at(at + 40)),
                }
            })
            .collect();
        let set = Self { zeros, tolerance };
        set.check_invariants()?;
        Ok(set)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ZeroError> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ZeroError> {
        Self::from_bytes(&fs::read(path)?)
    }

    /// CSV with header `index,gamma,zprime_re,zprime_im,z2_re,z2_im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), ZeroError> {
        writeln!(w, "index,gamma,zprime_re,zprime_im,z2_re,z2_im")?;
        for z in &self.zeros {
            writeln!(
                w,
                "{},{:?},{:?},{:?},{:?},{:?}",
                z.index, z.gamma, z.zprime.re, z.zprime.im, z.z2rho.re, z.z2rho.im
            )?;
        }
        w.flush()?;
        Ok(())
    }

    /// Partial sums of 1/|ζ′(ρ)| and |ζ(2ρ)|/|ρζ′(ρ)| over 0 < γ ≤ T.
    pub fn sz_diagnostic(&self, t: f64) -> Result<SzDiagnostic, ZeroError> {
        let zeros = self.up_to(t)?;
        let mut inv = crate::sum::Neumaier::new();
        let mut weighted = crate::sum::Neumaier::new();
        for z in zeros {
            let zp = z.zprime.norm();
            inv.add(1.0 / zp);
            weighted.add(z.z2rho.norm() / (z.rho().norm() * zp));
        }
        let sum_inv_zp = inv.value();
        let scale = t * t.ln().max(0.0).sqrt();
        let normalized = if scale > 0.0 { sum_inv_zp / scale } else { 0.0 };
        Ok(SzDiagnostic { t, zeros_used: zeros.len(), sum_inv_zp, sum_z2_over_rho_zp: weighted.value(), normalized })
    }
}

/// Stores `set` at `path` and reads it back.
pub fn cache_roundtrip(set: &ZeroSet, path: impl AsRef<Path>) -> Result<ZeroSet, ZeroError> {
    set.save(&path)?;
    ZeroSet::load(&path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::EulerMaclaurin;

    const FIRST: [f64; 5] = [14.134725141734694, 21.022039638771555, 25.01085758014569, 30.424876125859513, 32.93506158773919];

    fn small_set() -> ZeroSet {
        enrich(&FIRST, &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL).unwrap()
    }

    #[test]
    fn parses_plain_and_indexed() {
        let v = load_ordinates("14.134725142\n21.022039639\n".as_bytes()).unwrap();
        assert_eq!(v, vec![14.134725142, 21.022039639]);
        let v = load_ordinates("# header\n1 14.134725142\n\n2  21.022039639\n".as_bytes()).unwrap();
        assert_eq!(v.len(), 2);
        assert!(load_ordinates("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(load_ordinates("21.0\n14.1\n".as_bytes()), Err(ZeroError::NonMonotone { line: 2, .. })));
        assert!(matches!(load_ordinates("-3\n".as_bytes()), Err(ZeroError::NonPositive { line: 1, .. })));
        assert!(matches!(load_ordinates("14.1\nabc\n".as_bytes()), Err(ZeroError::Parse { line: 2, .. })));
        assert!(matches!(load_ordinates("1 14.1\n3 21.0\n".as_bytes()), Err(ZeroError::IndexGap { line: 2, .. })));
    }

    #[test]
    fn first_zero_coefficients() {
        let set = small_set();
        let z = set.zeros()[0];
        assert!((z.zprime.norm() - 0.793_160_433_356_506).abs() < 1e-11);
        assert!((z.zprime.re - 0.783_296_511_867_031).abs() < 1e-11);
        assert!((z.z2rho - Complex64::new(1.836_735_353_402_834, -0.651_197_596_522_268_7)).norm() < 1e-11);
        assert!(z.z2rho.norm() < 3.0);
        assert!(z.z2rho.is_finite());
    }

    #[test]
    fn perturbed_ordinate_is_rejected() {
        let err = enrich(&[14.0001, 21.022039638771555], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL);
        assert!(matches!(err, Err(ZeroError::Residual { index: 1, .. })));
        let err = enrich(&[14.2], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL);
        assert!(matches!(err, Err(ZeroError::Residual { .. })));
    }

    #[test]
    fn cache_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let set = small_set();
        let back = cache_roundtrip(&set, dir.path().join("z.bin")).unwrap();
        assert_eq!(back, set);
        back.verify_residuals(&EulerMaclaurin::default()).unwrap();
        let empty = cache_roundtrip(&ZeroSet::empty(), dir.path().join("e.bin")).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn corrupted_cache_is_rejected() {
        let bytes = small_set().to_bytes();
        assert!(matches!(ZeroSet::from_bytes(&bytes[..bytes.len() - 5]), Err(ZeroError::Checksum)));
        let mut flipped = bytes.clone();
        flipped[40] ^= 1;
        assert!(matches!(ZeroSet::from_bytes(&flipped), Err(ZeroError::Checksum)));
        let mut versioned = bytes;
        versioned[8] = 9;
        assert!(matches!(ZeroSet::from_bytes(&versioned), Err(ZeroError::Version { found: 9, .. })));
    }

    #[test]
    fn sz_partial_sums() {
        let set = small_set();
        let d = set.sz_diagnostic(10.0).unwrap();
        assert_eq!((d.zeros_used, d.sum_inv_zp, d.sum_z2_over_rho_zp), (0, 0.0, 0.0));
        let d = set.sz_diagnostic(15.0).unwrap();
        assert_eq!(d.zeros_used, 1);
        assert!((d.sum_inv_zp - 1.260_778_977_297_427).abs() < 1e-10);
        assert!(matches!(set.sz_diagnostic(40.0), Err(ZeroError::TooLarge { .. })));
        assert_eq!(set.sz_diagnostic(set.t_max()).unwrap().zeros_used, 5);
    }

    #[test]
    fn truncation_helpers() {
        let set = small_set();
        assert_eq!(set.count_up_to(21.022039638771555).unwrap(), 2);
        assert_eq!(set.count_up_to(3.0).unwrap(), 0);
        assert_eq!(set.height_for_count(3).unwrap(), FIRST[2]);
        assert_eq!(set.count_up_to(set.height_for_count(0).unwrap()).unwrap(), 0);
        assert!(set.first(6).is_err());
        assert_eq!(ZeroSet::empty().count_up_to(10.0).unwrap(), 0);
    }
}
