//! Precomputed sense-pair relatedness in a flat, sorted, binary-searchable file.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size | field                                         |
//! |--------|------|-----------------------------------------------|
//! | 0      | 8    | magic `SRPAIRS1`                              |
//! | 8      | 4    | format version (1)                            |
//! | 12     | 1    | measure code                                  |
//! | 13     | 1    | seeds mode (0 = all senses, 1 = seed subset)  |
//! | 14     | 1    | 1 when every candidate pair fit in the budget |
//! | 15     | 1    | reserved                                      |
//! | 16     | 32   | thesaurus fingerprint (SHA-256)               |
//! | 48     | 8    | budget                                        |
//! | 56     | 8    | seed count                                    |
//! | 64     | 8    | record count                                  |
//! | 72     | 8    | reserved                                      |
//! | 80     | 16·n | records `(lo: u32, hi: u32, value: f64)`      |
//!
//! Records are strictly sorted by `(lo, hi)` with `lo < hi`. Unreachable pairs
//! are not stored, so a miss only means "0" when the cache is exhaustive.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pathfinder::{Measure, PathFinder};
use crate::thesaurus::{SenseId, ThesaurusGraph};

pub const MAGIC: &[u8; 8] = b"SRPAIRS1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 80;
pub const RECORD_LEN: usize = 16;

const VERIFY_SEED: u64 = 0x5eed_ca5e;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheHeader {
    pub measure: Measure,
    pub all_seeds: bool,
    pub complete: bool,
    pub fingerprint: [u8; 32],
    pub budget: u64,
    pub seed_count: u64,
    pub record_count: u64,
}

impl CacheHeader {
    /// True when a miss for two distinct senses means they are unrelated.
    pub fn is_exhaustive(&self) -> bool {
        self.all_seeds && self.complete
    }

    fn encode(&self) -> [u8; HEADER_LEN] {
        let mut buf = [0u8; HEADER_LEN];
        buf[0..8].copy_from_slice(MAGIC);
        buf[8..12].copy_from_slice(&VERSION.to_le_bytes());
        buf[12] = self.measure.code();
        buf[13] = if self.all_seeds { 0 } else { 1 };
        buf[14] = self.complete as u8;
        buf[16..48].copy_from_slice(&self.fingerprint);
        buf[48..56].copy_from_slice(&self.budget.to_le_bytes());
        buf[56..64].copy_from_slice(&self.seed_count.to_le_bytes());
        buf[64..72].copy_from_slice(&self.record_count.to_le_bytes());
        buf
    }

    fn decode(buf: &[u8]) -> Result<Self> {
        if buf.len() < HEADER_LEN || &buf[0..8] != MAGIC {
            return Err(Error::CacheFormat("bad magic".into()));
        }
        let u64_at = |i: usize| u64::from_le_bytes(buf[i..i + 8].try_into().unwrap());
        let version = u32::from_le_bytes(buf[8..12].try_into().unwrap());
        if version != VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {version}")));
        }
        let measure = Measure::from_code(buf[12])
            .ok_or_else(|| Error::CacheFormat(format!("unknown measure code {}", buf[12])))?;
        if buf[13] > 1 || buf[14] > 1 {
            return Err(Error::CacheFormat("corrupt flags".into()));
        }
        let mut fingerprint = [0u8; 32];
        fingerprint.copy_from_slice(&buf[16..48]);
        Ok(CacheHeader {
            measure,
            all_seeds: buf[13] == 0,
            complete: buf[14] == 1,
            fingerprint,
            budget: u64_at(48),
            seed_count: u64_at(56),
            record_count: u64_at(64),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub lo: u32,
    pub hi: u32,
    pub value: f64,
}

impl Record {
    fn encode(&self) -> [u8; RECORD_LEN] {
        let mut buf = [0u8; RECORD_LEN];
        buf[0..4].copy_from_slice(&self.lo.to_le_bytes());
        buf[4..8].copy_from_slice(&self.hi.to_le_bytes());
        buf[8..16].copy_from_slice(&self.value.to_bits().to_le_bytes());
        buf
    }

    fn decode(buf: &[u8]) -> Record {
        Record {
            lo: u32::from_le_bytes(buf[0..4].try_into().unwrap()),
            hi: u32::from_le_bytes(buf[4..8].try_into().unwrap()),
            value: f64::from_bits(u64::from_le_bytes(buf[8..16].try_into().unwrap())),
        }
    }

    fn key(&self) -> (u32, u32) {
        (self.lo, self.hi)
    }
}

/// Read access shared by the in-memory and file-backed caches.
pub trait PairLookup: Send + Sync {
    fn header(&self) -> &CacheHeader;

    fn record_at(&self, index: u64) -> Result<Record>;

    /// Stored value for an unordered pair. `(s, s)` is never stored.
    fn get(&self, a: SenseId, b: SenseId) -> Result<Option<f64>> {
        if a == b {
            return Ok(None);
        }
        let key = if a < b { (a.0, b.0) } else { (b.0, a.0) };
        let (mut lo, mut hi) = (0u64, self.header().record_count);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let rec = self.record_at(mid)?;
            match rec.key().cmp(&key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Ok(Some(rec.value)),
            }
        }
        Ok(None)
    }

    /// Rejects use against a graph other than the one the cache was built from.
    fn check(&self, graph: &ThesaurusGraph) -> Result<()> {
        if self.header().fingerprint == graph.fingerprint() {
            Ok(())
        } else {
            Err(Error::FingerprintMismatch)
        }
    }
}

/// Which senses seed the precomputation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seeds {
    All,
    Subset(Vec<SenseId>),
}

/// A fully loaded cache.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCache {
    header: CacheHeader,
    records: Vec<Record>,
}

impl PairCache {
    /// Computes SR for every reachable pair that involves a seed, keeping the
    /// first `budget` pairs in `(lo, hi)` order.
    pub fn precompute(graph: &ThesaurusGraph, seeds: &Seeds, budget: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InvalidInput("budget must be at least 1".into()));
        }
        let seed_list: Vec<SenseId> = match seeds {
            Seeds::All => graph.sense_ids().collect(),
            Seeds::Subset(s) => {
                let set: BTreeSet<SenseId> = s.iter().copied().collect();
                for id in &set {
                    if !graph.contains(*id) {
                        return Err(Error::UnknownSense(format!("#{}", id.0)));
                    }
                }
                set.into_iter().collect()
            }
        };

        let mut candidates: BTreeSet<(SenseId, SenseId)> = BTreeSet::new();
        for &s in &seed_list {
            for t in reachable(graph, s) {
                if t != s {
                    candidates.insert(if s < t { (s, t) } else { (t, s) });
                }
            }
        }
        let complete = candidates.len() as u64 <= budget;
        let kept: Vec<(SenseId, SenseId)> = candidates.into_iter().take(budget as usize).collect();

        let finder = PathFinder::new(graph);
        let mut records = Vec::with_capacity(kept.len());
        let mut i = 0;
        while i < kept.len() {
            let lo = kept[i].0;
            let mut his = Vec::new();
            while i < kept.len() && kept[i].0 == lo {
                his.push(kept[i].1);
                i += 1;
            }
            for (hi, rel) in his.iter().zip(finder.relate_many(lo, &his, Measure::Sr)?) {
                if rel.value > 0.0 {
                    records.push(Record {
                        lo: lo.0,
                        hi: hi.0,
                        value: rel.value,
                    });
                }
            }
        }

        Ok(PairCache {
            header: CacheHeader {
                measure: Measure::Sr,
                all_seeds: matches!(seeds, Seeds::All),
                complete,
                fingerprint: graph.fingerprint(),
                budget,
                seed_count: seed_list.len() as u64,
                record_count: records.len() as u64,
            },
            records,
        })
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + RECORD_LEN * self.records.len());
        out.extend_from_slice(&self.header.encode());
        for r in &self.records {
            out.extend_from_slice(&r.encode());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header = CacheHeader::decode(bytes)?;
        let expected = HEADER_LEN as u64 + header.record_count * RECORD_LEN as u64;
        if bytes.len() as u64 != expected {
            return Err(Error::CacheFormat(format!(
                "expected {expected} bytes, found {}",
                bytes.len()
            )));
        }
        let records: Vec<Record> = bytes[HEADER_LEN..]
            .chunks_exact(RECORD_LEN)
            .map(Record::decode)
            .collect();
        validate(&records)?;
        Ok(PairCache { header, records })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        w.write_all(&self.to_bytes())
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

impl PairLookup for PairCache {
    fn header(&self) -> &CacheHeader {
        &self.header
    }

    fn record_at(&self, index: u64) -> Result<Record> {
        self.records
            .get(index as usize)
            .copied()
            .ok_or_else(|| Error::CacheFormat(format!("record {index} out of range")))
    }
}

fn validate(records: &[Record]) -> Result<()> {
    for r in records {
        if r.lo >= r.hi {
            return Err(Error::CacheFormat(format!("record ({}, {}) not ordered", r.lo, r.hi)));
        }
        if !(0.0..=1.0).contains(&r.value) {
            return Err(Error::CacheFormat(format!("value {} outside [0,1]", r.value)));
        }
    }
    if records.windows(2).any(|w| w[0].key() >= w[1].key()) {
        return Err(Error::CacheFormat("records not strictly sorted".into()));
    }
    Ok(())
}

fn reachable(graph: &ThesaurusGraph, source: SenseId) -> Vec<SenseId> {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![source];
    let mut out = Vec::new();
    seen[source.index()] = true;
    while let Some(u) = stack.pop() {
        out.push(u);
        for e in graph.edges(u) {
            if !seen[e.target.index()] {
                seen[e.target.index()] = true;
                stack.push(e.target);
            }
        }
    }
    out
}

/// A cache read record-by-record from disk; nothing beyond the header is
/// loaded up front.
#[derive(Debug)]
pub struct PairCacheFile {
    header: CacheHeader,
    file: File,
}

impl PairCacheFile {
    pub fn open(path: &Path) -> Result<Self> {
        let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut buf = [0u8; HEADER_LEN];
        file.read_exact(&mut buf).map_err(|e| Error::io(path, e))?;
        let header = CacheHeader::decode(&buf)?;
        let len = file.metadata().map_err(|e| Error::io(path, e))?.len();
        if len != HEADER_LEN as u64 + header.record_count * RECORD_LEN as u64 {
            return Err(Error::CacheFormat(format!("{}: truncated cache file", path.display())));
        }
        Ok(PairCacheFile { header, file })
    }
}

impl PairLookup for PairCacheFile {
    fn header(&self) -> &CacheHeader {
        &self.header
    }

    fn record_at(&self, index: u64) -> Result<Record> {
        use std::os::unix::fs::FileExt;
        if index >= self.header.record_count {
            return Err(Error::CacheFormat(format!("record {index} out of range")));
        }
        let mut buf = [0u8; RECORD_LEN];
        self.file
            .read_exact_at(&mut buf, HEADER_LEN as u64 + index * RECORD_LEN as u64)
            .map_err(|e| Error::io("<cache>", e))?;
        Ok(Record::decode(&buf))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub sampled: usize,
    pub mismatches: usize,
    pub max_abs_deviation: f64,
}

/// Recomputes a uniform sample of stored records (without replacement,
/// clamped to the record count) and compares them bit for bit.
pub fn verify_cache(cache: &dyn PairLookup, graph: &ThesaurusGraph, sample_size: usize) -> Result<VerifyReport> {
    cache.check(graph)?;
    let total = cache.header().record_count as usize;
    let n = sample_size.min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let mut indices = sample(&mut rng, total, n).into_vec();
    indices.sort_unstable();

    let finder = PathFinder::new(graph);
    let measure = cache.header().measure;
    let mut report = VerifyReport {
        sampled: n,
        mismatches: 0,
        max_abs_deviation: 0.0,
    };
    for i in indices {
        let rec = cache.record_at(i as u64)?;
        let live = finder
            .max_relatedness(SenseId(rec.lo), SenseId(rec.hi), measure)?
            .value;
        if live.to_bits() != rec.value.to_bits() {
            report.mismatches += 1;
            report.max_abs_deviation = report.max_abs_deviation.max((live - rec.value).abs());
        }
    }
    Ok(report)
}

/// Checked single lookup: fingerprint first, then binary search.
pub fn lookup(cache: &dyn PairLookup, graph: &ThesaurusGraph, s1: SenseId, s2: SenseId) -> Result<Option<f64>> {
    cache.check(graph)?;
    cache.get(s1, s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thesaurus::fixtures::vehicles;
    use crate::thesaurus::{EdgeKind, PartOfSpeech, ThesaurusBuilder};

    fn three() -> ThesaurusGraph {
        let mut b = ThesaurusBuilder::new();
        let a = b.add_sense("a", PartOfSpeech::Noun).unwrap();
        let c = b.add_sense("c", PartOfSpeech::Noun).unwrap();
        let d = b.add_sense("d", PartOfSpeech::Noun).unwrap();
        b.add_edge(a, EdgeKind::Hypernym, c);
        b.add_edge(d, EdgeKind::Similar, c);
        b.build()
    }

    #[test]
    fn precompute_matches_live_values() {
        let g = three();
        let cache = PairCache::precompute(&g, &Seeds::All, 100).unwrap();
        assert_eq!(cache.len(), 3);
        assert!(cache.header().is_exhaustive());
        let finder = PathFinder::new(&g);
        for r in cache.records() {
            let live = finder
                .max_relatedness(SenseId(r.lo), SenseId(r.hi), Measure::Sr)
                .unwrap()
                .value;
            assert_eq!(live.to_bits(), r.value.to_bits());
        }
    }

    #[test]
    fn zero_budget_rejected() {
        assert!(PairCache::precompute(&three(), &Seeds::All, 0).is_err());
    }

    #[test]
    fn disconnected_pairs_are_absent() {
        let mut b = ThesaurusBuilder::new();
        let ids: Vec<_> = ["a", "b", "c", "d"]
            .iter()
            .map(|k| b.add_sense(k, PartOfSpeech::Noun).unwrap())
            .collect();
        b.add_edge(ids[0], EdgeKind::Hypernym, ids[1]);
        b.add_edge(ids[2], EdgeKind::Hypernym, ids[3]);
        let g = b.build();
        let cache = PairCache::precompute(&g, &Seeds::All, 100).unwrap();
        assert_eq!(cache.len(), 2);
        assert_eq!(cache.get(ids[0], ids[2]).unwrap(), None);
        assert!(cache.get(ids[0], ids[1]).unwrap().is_some());
    }

    #[test]
    fn identity_and_out_of_scope_are_misses() {
        let g = vehicles();
        let car = g.senses_of("car")[0];
        let acc = g.senses_of("accelerator")[0];
        let bus = g.senses_of("bus")[0];
        let cache = PairCache::precompute(&g, &Seeds::Subset(vec![car]), 1000).unwrap();
        assert!(!cache.header().is_exhaustive());
        assert_eq!(cache.get(car, car).unwrap(), None);
        assert!(cache.get(acc, car).unwrap().is_some());
        assert_eq!(cache.get(acc, bus).unwrap(), None);
    }

    #[test]
    fn budget_truncates() {
        let g = vehicles();
        let cache = PairCache::precompute(&g, &Seeds::All, 5).unwrap();
        assert_eq!(cache.len(), 5);
        assert!(!cache.header().complete);
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let g = vehicles();
        let cache = PairCache::precompute(&g, &Seeds::All, 10_000).unwrap();
        let bytes = cache.to_bytes();
        let back = PairCache::from_bytes(&bytes).unwrap();
        assert_eq!(back, cache);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn corrupt_files_rejected() {
        let g = three();
        let bytes = PairCache::precompute(&g, &Seeds::All, 10).unwrap().to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(PairCache::from_bytes(&bad).is_err());
        assert!(PairCache::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut unsorted = bytes.clone();
        let (a, b) = (HEADER_LEN, HEADER_LEN + RECORD_LEN);
        let first: Vec<u8> = unsorted[a..b].to_vec();
        let second: Vec<u8> = unsorted[b..b + RECORD_LEN].to_vec();
        unsorted[a..b].copy_from_slice(&second);
        unsorted[b..b + RECORD_LEN].copy_from_slice(&first);
        assert!(PairCache::from_bytes(&unsorted).is_err());
    }

    #[test]
    fn file_backed_lookup_agrees() {
        let g = vehicles();
        let cache = PairCache::precompute(&g, &Seeds::All, 10_000).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.bin");
        cache.write(&path).unwrap();
        let file = PairCacheFile::open(&path).unwrap();
        assert_eq!(file.header(), cache.header());
        for a in g.sense_ids() {
            for b in g.sense_ids() {
                assert_eq!(file.get(a, b).unwrap(), cache.get(a, b).unwrap());
            }
        }
    }

    #[test]
    fn verify_fresh_and_edited() {
        let g = vehicles();
        let cache = PairCache::precompute(&g, &Seeds::All, 10_000).unwrap();
        let report = verify_cache(&cache, &g, 1_000_000).unwrap();
        assert_eq!(report.sampled, cache.len());
        assert_eq!(report.mismatches, 0);
        assert_eq!(report.max_abs_deviation, 0.0);

        let mut b = g.to_builder();
        b.remove_edge(g.senses_of("car")[0], EdgeKind::PartMeronym, g.senses_of("accelerator")[0]);
        let edited = b.build();
        assert!(matches!(verify_cache(&cache, &edited, 10), Err(Error::FingerprintMismatch)));
        assert!(matches!(
            lookup(&cache, &edited, SenseId(0), SenseId(1)),
            Err(Error::FingerprintMismatch)
        ));
    }
}
