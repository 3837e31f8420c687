//! Exhaustive enumeration of linear threshold functions.
//!
//! Three independent strategies produce `(table, witness)` lists:
//! [`scan`] tests every Boolean function by exact linear programming,
//! [`vertex`] enumerates vertices of the feasibility regions, and [`walk`]
//! crosses walls between cells of the hyperplane arrangement inside the
//! proper cone. Results are reduced to canonical representatives under
//! variable permutations and input negations; full counts weight each
//! representative by its orbit size.

pub mod canonical;
pub mod scan;
pub mod vertex;
pub mod walk;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{check_dim, Error, Result};
use crate::hypercube::TruthTable;
use crate::ltf::ChowParameters;

pub use canonical::{canonicalize, group_order, Canonical, Transform};
pub use scan::{separability_witness, zero_threshold_witness};

/// Largest dimension in all-LTF mode.
pub const MAX_ALL_DIM: usize = 6;
/// Largest dimension in zero-threshold mode.
pub const MAX_ZERO_THRESHOLD_DIM: usize = 7;
/// Largest dimension for JSON catalog export.
pub const MAX_CATALOG_JSON_DIM: usize = 4;

const CATALOG_MAGIC: &[u8; 4] = b"LTFC";
/// Bumped whenever enumeration or the file layout changes.
pub const CATALOG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every LTF `sign(w·x − θ)`.
    All,
    /// LTFs `sign(w·x)` with `w·x ≠ 0` on the whole cube.
    ZeroThreshold,
}

impl Mode {
    fn tag(self) -> u8 {
        match self {
            Mode::All => 0,
            Mode::ZeroThreshold => 1,
        }
    }

    fn from_tag(t: u8) -> Result<Self> {
        match t {
            0 => Ok(Mode::All),
            1 => Ok(Mode::ZeroThreshold),
            _ => Err(Error::Format(format!("unknown catalog mode {t}"))),
        }
    }

    pub fn max_dim(self) -> usize {
        match self {
            Mode::All => MAX_ALL_DIM,
            Mode::ZeroThreshold => MAX_ZERO_THRESHOLD_DIM,
        }
    }

    fn is_zero_threshold(self) -> bool {
        self == Mode::ZeroThreshold
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::All => "all",
            Mode::ZeroThreshold => "zero-threshold",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Mode::All),
            "zero-threshold" | "zero" => Ok(Mode::ZeroThreshold),
            _ => Err(Error::Parse(format!("unknown mode {s:?} (expected all|zero-threshold)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Scan,
    Vertex,
    Walk,
}

impl Strategy {
    fn bit(self) -> u8 {
        match self {
            Strategy::Scan => 1,
            Strategy::Vertex => 2,
            Strategy::Walk => 4,
        }
    }

    /// Whether the strategy supports `(n, mode)` at desk scale.
    pub fn supports(self, n: usize, mode: Mode) -> bool {
        let extra = usize::from(mode.is_zero_threshold());
        n >= 1
            && match self {
                Strategy::Scan => n <= scan::MAX_SCAN_DIM + extra,
                Strategy::Vertex => n <= vertex::MAX_VERTEX_DIM + extra,
                Strategy::Walk => n <= mode.max_dim(),
            }
    }

    fn run(self, n: usize, mode: Mode) -> Result<Vec<(TruthTable, Vec<i64>, i64)>> {
        let zt = mode.is_zero_threshold();
        match self {
            Strategy::Scan => scan::scan_all(n, zt),
            Strategy::Vertex => vertex::vertex_enumeration(n, zt),
            Strategy::Walk => walk::chamber_walk(n, zt),
        }
    }

    /// Whether the output lists every function rather than one per cone cell.
    fn is_complete(self) -> bool {
        !matches!(self, Strategy::Walk)
    }
}

/// A canonical LTF with an integer witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LtfRecord {
    pub table: TruthTable,
    pub weights: Vec<i64>,
    pub threshold: i64,
    pub orbit_size: u64,
    pub chow: ChowParameters,
}

impl LtfRecord {
    pub fn new(table: TruthTable, weights: Vec<i64>, threshold: i64, orbit_size: u64) -> Self {
        let chow = ChowParameters::of(&table);
        Self {
            table,
            weights,
            threshold,
            orbit_size,
            chow,
        }
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    /// `Σ_i (2^n f̂(i))²`; `W^1 = w1_numerator / 4^n`.
    pub fn w1_numerator(&self) -> u128 {
        self.chow
            .degree1
            .iter()
            .map(|&c| (i128::from(c) * i128::from(c)) as u128)
            .sum()
    }

    pub fn w1_exact(&self) -> BigRational {
        BigRational::new(self.w1_numerator().into(), (1u128 << (2 * self.n())).into())
    }

    pub fn w1(&self) -> f64 {
        self.chow.w1()
    }

    /// Re-checks the witness against the table in integer arithmetic.
    pub fn verify(&self) -> bool {
        scan::verified(&self.table, &self.weights, self.threshold)
    }
}

#[derive(Serialize)]
struct RecordJson {
    table: Vec<i8>,
    weights: Vec<i64>,
    threshold: i64,
    orbit_size: u64,
    chow_constant: i64,
    chow_degree1: Vec<i64>,
    chow_denominator: i64,
    w1: f64,
}

/// A complete list of canonical LTF representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub n: usize,
    pub mode: Mode,
    /// Bit set of the strategies that produced and cross-checked the catalog.
    pub method: u8,
    /// Sorted by [`TruthTable::lex_cmp`].
    pub records: Vec<LtfRecord>,
}

impl Catalog {
    /// Number of canonical representatives.
    pub fn representative_count(&self) -> usize {
        self.records.len()
    }

    /// Number of functions, counting whole orbits.
    pub fn full_count(&self) -> u64 {
        self.records.iter().map(|r| r.orbit_size).sum()
    }

    pub fn strategies(&self) -> Vec<Strategy> {
        [Strategy::Scan, Strategy::Vertex, Strategy::Walk]
            .into_iter()
            .filter(|s| self.method & s.bit() != 0)
            .collect()
    }

    fn payload(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(CATALOG_MAGIC);
        buf.extend_from_slice(&CATALOG_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.n as u32).to_le_bytes());
        buf.push(self.mode.tag());
        buf.push(self.method);
        buf.extend_from_slice(&(self.records.len() as u64).to_le_bytes());
        let nbytes = table_bytes(self.n);
        for r in &self.records {
            let mut bytes = Vec::with_capacity(16);
            for w in r.table.words() {
                bytes.extend_from_slice(&w.to_le_bytes());
            }
            buf.extend_from_slice(&bytes[..nbytes]);
            for w in &r.weights {
                buf.extend_from_slice(&w.to_le_bytes());
            }
            buf.extend_from_slice(&r.threshold.to_le_bytes());
            buf.extend_from_slice(&r.orbit_size.to_le_bytes());
        }
        buf
    }

    /// SHA-256 of the serialized records and header.
    pub fn checksum(&self) -> [u8; 32] {
        Sha256::digest(self.payload()).into()
    }

    pub fn checksum_hex(&self) -> String {
        self.checksum().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let payload = self.payload();
        let digest: [u8; 32] = Sha256::digest(&payload).into();
        w.write_all(&payload)?;
        w.write_all(&digest)?;
        Ok(())
    }

    /// Reads and validates a catalog file, including its checksum.
    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut data = Vec::new();
        r.read_to_end(&mut data)?;
        if data.len() < 4 + 4 + 4 + 2 + 8 + 32 {
            return Err(Error::Format("catalog file truncated".into()));
        }
        let (payload, digest) = data.split_at(data.len() - 32);
        let actual: [u8; 32] = Sha256::digest(payload).into();
        if actual.as_slice() != digest {
            return Err(Error::Format("catalog checksum mismatch".into()));
        }
        let mut cur = Cursor { data: payload, pos: 0 };
        if cur.take(4)? != CATALOG_MAGIC {
            return Err(Error::Format("bad catalog magic".into()));
        }
        let version = u32::from_le_bytes(cur.take(4)?.try_into().unwrap());
        if version != CATALOG_VERSION {
            return Err(Error::Format(format!("catalog version {version} != {CATALOG_VERSION}")));
        }
        let n = u32::from_le_bytes(cur.take(4)?.try_into().unwrap()) as usize;
        check_dim(n, MAX_ZERO_THRESHOLD_DIM)?;
        let mode = Mode::from_tag(cur.take(1)?[0])?;
        let method = cur.take(1)?[0];
        let count = u64::from_le_bytes(cur.take(8)?.try_into().unwrap());
        let nbytes = table_bytes(n);
        let mut records = Vec::new();
        for _ in 0..count {
            let mut bytes = cur.take(nbytes)?.to_vec();
            bytes.resize(((1usize << n) + 63) / 64 * 8, 0);
            let words = bytes
                .chunks_exact(8)
                .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            let table = TruthTable::from_words(n, words)?;
            let weights = (0..n)
                .map(|_| cur.take(8).map(|b| i64::from_le_bytes(b.try_into().unwrap())))
                .collect::<Result<Vec<_>>>()?;
            let threshold = i64::from_le_bytes(cur.take(8)?.try_into().unwrap());
            let orbit_size = u64::from_le_bytes(cur.take(8)?.try_into().unwrap());
            records.push(LtfRecord::new(table, weights, threshold, orbit_size));
        }
        if cur.pos != payload.len() {
            return Err(Error::Format("trailing bytes in catalog".into()));
        }
        Ok(Self {
            n,
            mode,
            method,
            records,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        check_dim(self.n, MAX_CATALOG_JSON_DIM)?;
        let recs: Vec<RecordJson> = self
            .records
            .iter()
            .map(|r| RecordJson {
                table: r.table.signs(),
                weights: r.weights.clone(),
                threshold: r.threshold,
                orbit_size: r.orbit_size,
                chow_constant: r.chow.constant,
                chow_degree1: r.chow.degree1.clone(),
                chow_denominator: r.chow.denominator(),
                w1: r.w1(),
            })
            .collect();
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "schema": "bfc.catalog.v1",
            "n": self.n,
            "mode": self.mode,
            "strategies": self.strategies(),
            "representatives": self.records.len(),
            "full_count": self.full_count(),
            "records": recs,
        }))?)
    }

    /// File name used in the cache directory.
    pub fn file_name(n: usize, mode: Mode) -> String {
        format!("ltf-n{n}-{mode}-v{CATALOG_VERSION}.ltfc")
    }

    /// Loads a cached catalog, rebuilding it when missing or corrupt.
    pub fn load_or_build(n: usize, mode: Mode, dir: &Path) -> Result<Self> {
        let path = dir.join(Self::file_name(n, mode));
        if let Ok(f) = fs::File::open(&path) {
            if let Ok(c) = Self::read_from(std::io::BufReader::new(f)) {
                if c.n == n && c.mode == mode {
                    return Ok(c);
                }
            }
        }
        let c = enumerate_ltfs(n, mode)?;
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!("{}.tmp{}", Self::file_name(n, mode), std::process::id()));
        {
            let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
            c.write_to(&mut f)?;
            f.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(c)
    }
}

fn table_bytes(n: usize) -> usize {
    ((1usize << n) + 7) / 8
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.pos + k > self.data.len() {
            return Err(Error::Format("catalog file truncated".into()));
        }
        let s = &self.data[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }
}

/// Catalog cache directory: `BFC_CATALOG_DIR`, else a folder under the
/// system temporary directory.
pub fn default_catalog_dir() -> PathBuf {
    std::env::var_os("BFC_CATALOG_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("bfc-catalogs"))
}

/// Reduces a strategy's output to canonical records.
fn to_records(
    found: Vec<(TruthTable, Vec<i64>, i64)>,
    complete: bool,
) -> Result<Vec<LtfRecord>> {
    use rayon::prelude::*;
    let canon: Vec<(Canonical, Vec<i64>, i64)> = found
        .into_par_iter()
        .map(|(t, w, th)| canonicalize(&t).map(|c| (c, w, th)))
        .collect::<Result<_>>()?;
    let mut groups: BTreeMap<Vec<u64>, (Canonical, Vec<i64>, i64, u64)> = BTreeMap::new();
    for (c, w, th) in canon {
        groups
            .entry(c.table.words().to_vec())
            .and_modify(|g| g.3 += 1)
            .or_insert((c, w, th, 1));
    }
    let mut records = Vec::with_capacity(groups.len());
    for (c, w, th, members) in groups.into_values() {
        if complete && members != c.orbit_size {
            return Err(Error::StrategyDisagreement(format!(
                "orbit of {:?} has {} members but size {}",
                c.table, members, c.orbit_size
            )));
        }
        let weights = c.transform.apply_weights(&w);
        let rec = LtfRecord::new(c.table, weights, th, c.orbit_size);
        if !rec.verify() {
            return Err(Error::StrategyDisagreement(format!(
                "witness {:?}; {} does not reproduce {:?}",
                rec.weights, rec.threshold, rec.table
            )));
        }
        records.push(rec);
    }
    records.sort_by(|a, b| a.table.lex_cmp(&b.table));
    Ok(records)
}

/// Enumerates with the given strategies and requires identical results.
pub fn enumerate_with(n: usize, mode: Mode, strategies: &[Strategy]) -> Result<Catalog> {
    check_dim(n, mode.max_dim())?;
    if strategies.is_empty() {
        return Err(Error::Domain("no enumeration strategy selected".into()));
    }
    let mut result: Option<Vec<LtfRecord>> = None;
    let mut method = 0u8;
    for &s in strategies {
        if !s.supports(n, mode) {
            return Err(Error::Domain(format!("{s:?} does not support n={n} in {mode} mode")));
        }
        let recs = to_records(s.run(n, mode)?, s.is_complete())?;
        if let Some(prev) = &result {
            let a: Vec<_> = prev.iter().map(|r| (&r.table, r.orbit_size)).collect();
            let b: Vec<_> = recs.iter().map(|r| (&r.table, r.orbit_size)).collect();
            if a != b {
                return Err(Error::StrategyDisagreement(format!(
                    "n={n} {mode}: {} vs {} representatives ({s:?})",
                    a.len(),
                    b.len()
                )));
            }
        } else {
            result = Some(recs);
        }
        method |= s.bit();
    }
    Ok(Catalog {
        n,
        mode,
        method,
        records: result.unwrap(),
    })
}

/// Every strategy that supports `(n, mode)`.
pub fn default_strategies(n: usize, mode: Mode) -> Vec<Strategy> {
    [Strategy::Scan, Strategy::Vertex, Strategy::Walk]
        .into_iter()
        .filter(|s| s.supports(n, mode))
        .collect()
}

/// Complete catalog, cross-checked by every applicable strategy.
pub fn enumerate_ltfs(n: usize, mode: Mode) -> Result<Catalog> {
    enumerate_with(n, mode, &default_strategies(n, mode))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let expect_all = [4u64, 14, 104, 1882];
        for (i, &e) in expect_all.iter().enumerate() {
            let c = enumerate_ltfs(i + 1, Mode::All).unwrap();
            assert_eq!(c.full_count(), e, "n={}", i + 1);
        }
        for n in 2..=4 {
            let z = enumerate_ltfs(n, Mode::ZeroThreshold).unwrap();
            assert_eq!(z.full_count(), expect_all[n - 2], "n={n}");
        }
        let z3 = enumerate_ltfs(3, Mode::ZeroThreshold).unwrap();
        assert_eq!(z3.full_count(), 14);
        assert!(z3.records.iter().all(|r| r.w1() >= 0.5));
    }

    #[test]
    fn catalog_roundtrip_and_corruption() {
        let c = enumerate_ltfs(3, Mode::All).unwrap();
        let mut buf = Vec::new();
        c.write_to(&mut buf).unwrap();
        assert_eq!(Catalog::read_from(buf.as_slice()).unwrap(), c);
        let mid = buf.len() / 2;
        buf[mid] ^= 1;
        assert!(Catalog::read_from(buf.as_slice()).is_err());
        let json = c.to_json().unwrap();
        assert!(json.contains("\"full_count\": 104"));
    }

    #[test]
    fn cache_rebuilds_corrupt_files() {
        let dir = std::env::temp_dir().join(format!("bfc-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let c = Catalog::load_or_build(2, Mode::ZeroThreshold, &dir).unwrap();
        let path = dir.join(Catalog::file_name(2, Mode::ZeroThreshold));
        fs::write(&path, b"garbage").unwrap();
        let c2 = Catalog::load_or_build(2, Mode::ZeroThreshold, &dir).unwrap();
        assert_eq!(c, c2);
        assert_eq!(Catalog::read_from(fs::File::open(&path).unwrap()).unwrap(), c);
        fs::remove_dir_all(&dir).unwrap();
    }
}
