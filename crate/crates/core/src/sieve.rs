//! λ(n) and μ(n) tables with their summatory functions.
//!
//! Tables up to [`LINEAR_SIEVE_MAX`] are built with a linear (Euler) sieve
//! over a smallest-prime-factor array; larger tables are built segment by
//! segment by trial division with the primes up to √N, which keeps the
//! working set small and lets segments run in parallel. Both constructions
//! produce byte-identical tables.

use rayon::prelude::*;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

use crate::Kind;

/// Largest limit handled by the monolithic linear sieve.
pub const LINEAR_SIEVE_MAX: usize = 10_000_000;

/// Default cap on table size (values plus 64-bit prefix sums: 9 bytes per entry).
pub const DEFAULT_MAX_LIMIT: usize = 200_000_000;

const DEFAULT_SEGMENT: usize = 1 << 18;
const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("sieve limit must be at least 1")]
    ZeroLimit,
    #[error("sieve limit {limit} exceeds the configured maximum {max} (~{bytes} bytes needed); raise SieveOptions::max_limit")]
    TooLarge { limit: usize, max: usize, bytes: usize },
    #[error("x = {x} is beyond the table limit {limit}")]
    OutOfRange { x: f64, limit: usize },
    #[error("x = {0} is negative or not a number")]
    InvalidArgument(f64),
    #[error("malformed table file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// How a table is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Linear sieve up to [`LINEAR_SIEVE_MAX`], segmented above.
    Auto,
    Linear,
    Segmented { segment_len: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct SieveOptions {
    pub max_limit: usize,
    pub strategy: Strategy,
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self { max_limit: DEFAULT_MAX_LIMIT, strategy: Strategy::Auto }
    }
}

/// Values of λ or μ on 1..=N together with their running sums.
///
/// Both arrays have length N + 1; index 0 holds 0 so that `values()[n]` is
/// the value at n and `prefix()[k] = Σ_{n≤k} values()[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveTable {
    kind: Kind,
    values: Vec<i8>,
    prefix: Vec<i64>,
}

pub fn build_sieve(kind: Kind, limit: usize) -> Result<SieveTable, SieveError> {
    build_sieve_with(kind, limit, SieveOptions::default())
}

pub fn build_sieve_with(kind: Kind, limit: usize, opts: SieveOptions) -> Result<SieveTable, SieveError> {
    if limit == 0 {
        return Err(SieveError::ZeroLimit);
    }
    if limit > opts.max_limit {
        return Err(SieveError::TooLarge { limit, max: opts.max_limit, bytes: limit.saturating_mul(9) });
    }
    let values = match opts.strategy {
        Strategy::Linear => linear_sieve(kind, limit),
        Strategy::Segmented { segment_len } => segmented_sieve(kind, limit, segment_len.max(1)),
        Strategy::Auto if limit <= LINEAR_SIEVE_MAX => linear_sieve(kind, limit),
        Strategy::Auto => segmented_sieve(kind, limit, DEFAULT_SEGMENT),
    };
    Ok(SieveTable::from_values(kind, values))
}

fn linear_sieve(kind: Kind, limit: usize) -> Vec<i8> {
    let mut values = vec![0i8; limit + 1];
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    values[1] = 1;
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
            values[i] = -1;
        }
        let vi = values[i];
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip > limit {
                break;
            }
            spf[ip] = p;
            values[ip] = match kind {
                Kind::Liouville => -vi,
                Kind::Moebius if p == si => 0,
                Kind::Moebius => -vi,
            };
        }
    }
    values
}

fn small_primes(bound: usize) -> Vec<usize> {
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if !composite[i] {
            primes.push(i);
            let mut j = i * i;
            while j <= bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn segmented_sieve(kind: Kind, limit: usize, segment_len: usize) -> Vec<i8> {
    let mut root = (limit as f64).sqrt() as usize;
    while root * root > limit {
        root -= 1;
    }
    while (root + 1) * (root + 1) <= limit {
        root += 1;
    }
    let primes = small_primes(root);
    let mut values = vec![0i8; limit + 1];
    values[1..]
        .par_chunks_mut(segment_len)
        .enumerate()
        .for_each(|(seg, out)| {
            let lo = 1 + seg * segment_len;
            fill_segment(kind, lo, out, &primes);
        });
    values
}

fn fill_segment(kind: Kind, lo: usize, out: &mut [i8], primes: &[usize]) {
    let hi = lo + out.len();
    let mut rem: Vec<u64> = (lo..hi).map(|n| n as u64).collect();
    let mut omega = vec![0u8; out.len()];
    let mut squarefree = vec![true; out.len()];
    for &p in primes {
        if p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < hi {
            let i = m - lo;
            let mut e = 0u8;
            let pp = p as u64;
            while rem[i] % pp == 0 {
                rem[i] /= pp;
                e += 1;
            }
            omega[i] = omega[i].wrapping_add(e);
            if e >= 2 {
                squarefree[i] = false;
            }
            m += p;
        }
    }
    for (i, slot) in out.iter_mut().enumerate() {
        let mut parity = omega[i];
        if rem[i] > 1 {
            parity = parity.wrapping_add(1);
        }
        let sign = if parity % 2 == 0 { 1 } else { -1 };
        *slot = match kind {
            Kind::Liouville => sign,
            Kind::Moebius if squarefree[i] => sign,
            Kind::Moebius => 0,
        };
    }
}

impl SieveTable {
    fn from_values(kind: Kind, values: Vec<i8>) -> Self {
        let mut prefix = Vec::with_capacity(values.len());
        let mut acc = 0i64;
        for &v in &values {
            acc += v as i64;
            prefix.push(acc);
        }
        Self { kind, values, prefix }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// The largest n in the table.
    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// `values()[n]` for 0 ≤ n ≤ N, with `values()[0] = 0`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn prefix(&self) -> &[i64] {
        &self.prefix
    }

    pub fn value(&self, n: usize) -> i8 {
        self.values[n]
    }

    /// Σ_{n ≤ x} values[n]; zero for x < 1, and x = n includes n itself.
    pub fn summatory(&self, x: f64) -> Result<i64, SieveError> {
        if x.is_nan() || x < 0.0 {
            return Err(SieveError::InvalidArgument(x));
        }
        if x > self.limit() as f64 {
            return Err(SieveError::OutOfRange { x, limit: self.limit() });
        }
        Ok(self.prefix[x.floor() as usize])
    }

    fn magic(kind: Kind) -> [u8; 9] {
        match kind {
            Kind::Liouville => *b"LAMBDATBL",
            Kind::Moebius => *b"MOEBSTBL\0",
        }
    }

    /// Writes the 16-byte header (9-byte magic, version byte, 48-bit
    /// little-endian N) followed by N signed bytes.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), SieveError> {
        let n = self.limit() as u64;
        if n >= 1 << 48 {
            return Err(SieveError::Format("limit does not fit the 48-bit header field".into()));
        }
        let mut header = [0u8; HEADER_LEN];
        header[..9].copy_from_slice(&Self::magic(self.kind));
        header[9] = FORMAT_VERSION;
        header[10..16].copy_from_slice(&n.to_le_bytes()[..6]);
        w.write_all(&header)?;
        let bytes: Vec<u8> = self.values[1..].iter().map(|&v| v as u8).collect();
        w.write_all(&bytes)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, SieveError> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header)
            .map_err(|_| SieveError::Format("file shorter than the 16-byte header".into()))?;
        let kind = if header[..9] == Self::magic(Kind::Liouville) {
            Kind::Liouville
        } else if header[..9] == Self::magic(Kind::Moebius) {
            Kind::Moebius
        } else {
            return Err(SieveError::Format("unknown magic".into()));
        };
        if header[9] != FORMAT_VERSION {
            return Err(SieveError::Format(format!("unsupported version {}", header[9])));
        }
        let mut n_bytes = [0u8; 8];
        n_bytes[..6].copy_from_slice(&header[10..16]);
        let n = u64::from_le_bytes(n_bytes) as usize;
        if n == 0 {
            return Err(SieveError::Format("zero-length table".into()));
        }
        let mut body = vec![0u8; n];
        r.read_exact(&mut body)
            .map_err(|_| SieveError::Format(format!("expected {n} value bytes")))?;
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(SieveError::Format("trailing bytes after table".into()));
        }
        let mut values = Vec::with_capacity(n + 1);
        values.push(0i8);
        for (i, &b) in body.iter().enumerate() {
            let v = b as i8;
            let ok = match kind {
                Kind::Liouville => v == 1 || v == -1,
                Kind::Moebius => (-1..=1).contains(&v),
            };
            if !ok {
                return Err(SieveError::Format(format!("invalid value {v} at n = {}", i + 1)));
            }
            values.push(v);
        }
        if values[1] != 1 {
            return Err(SieveError::Format("value at n = 1 must be 1".into()));
        }
        Ok(Self::from_values(kind, values))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SieveError> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SieveError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}
