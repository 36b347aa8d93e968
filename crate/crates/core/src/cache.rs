//! Append-only TSV cache of solved Weingarten values.
//!
//! One record per line: `TAG  k  class  dims  value`, e.g.
//! `U\t3\t2+1\td=5\t-1/120` or `AIII\t2\t1+1\td=5,dm=1\t6/25`.
//! Every field must be in canonical form, so a reload reproduces the
//! written text byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Result, WgError};
use crate::exact::{Engine, Family, SolveOptions, WgTable};
use crate::rational::{format_rational, parse_rational, ExactRational};
use crate::symcore::IntegerPartition;

/// Default share of records recomputed by [`verify`].
pub const DEFAULT_VERIFY_FRACTION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CacheKey {
    pub family: Family,
    pub level: usize,
    pub class: IntegerPartition,
    pub d: i64,
    pub dminus: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub value: ExactRational,
}

fn dims_field(d: i64, dminus: Option<i64>) -> String {
    match dminus {
        Some(dm) => format!("d={d},dm={dm}"),
        None => format!("d={d}"),
    }
}

impl fmt::Display for CacheRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.key;
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            k.family.tag(),
            k.level,
            k.class,
            dims_field(k.d, k.dminus),
            format_rational(&self.value)
        )
    }
}

impl CacheRecord {
    /// Parses one line; `line` is 1-based and only used in errors.
    pub fn parse(text: &str, line: usize) -> Result<CacheRecord> {
        let bad = |reason: String| WgError::CacheCorruption { line, reason };
        let fields: Vec<&str> = text.split('\t').collect();
        let [tag, level, class, dims, value] = fields[..] else {
            return Err(bad(format!("expected 5 tab-separated fields, found {}", fields.len())));
        };
        let family = Family::from_tag(tag).ok_or_else(|| bad(format!("unknown family tag {tag:?}")))?;
        let level: usize = level.parse().map_err(|_| bad(format!("bad level {level:?}")))?;
        if level.to_string() != fields[1] {
            return Err(bad(format!("non-canonical level {level:?}")));
        }
        let class: IntegerPartition = class.parse().map_err(|e| bad(format!("{e}")))?;
        if class.weight() != level {
            return Err(bad(format!("class {class} does not have weight {level}")));
        }
        let (d, dminus) = parse_dims(dims).ok_or_else(|| bad(format!("bad dimension field {dims:?}")))?;
        if dminus.is_some() != family.uses_dminus() {
            return Err(bad(format!("dimension field {dims:?} does not fit family {tag}")));
        }
        let value = parse_rational(value).map_err(|e| bad(format!("{e}")))?;
        let rec = CacheRecord {
            key: CacheKey {
                family,
                level,
                class,
                d,
                dminus,
            },
            value,
        };
        if rec.to_string() != text {
            return Err(bad("record is not in canonical form".into()));
        }
        Ok(rec)
    }
}

fn parse_dims(text: &str) -> Option<(i64, Option<i64>)> {
    let mut parts = text.split(',');
    let d = parts.next()?.strip_prefix("d=")?.parse().ok()?;
    let dm = match parts.next() {
        Some(p) => Some(p.strip_prefix("dm=")?.parse().ok()?),
        None => None,
    };
    parts.next().is_none().then_some((d, dm))
}

/// All records of a solved table, in class order.
pub fn records_from_table(table: &WgTable) -> Vec<CacheRecord> {
    table
        .values
        .iter()
        .map(|(class, value)| CacheRecord {
            key: CacheKey {
                family: table.family,
                level: table.level,
                class: class.clone(),
                d: table.d,
                dminus: table.dminus,
            },
            value: value.clone(),
        })
        .collect()
}

/// A loaded cache: one value per key, with the line it first appeared on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cache {
    pub entries: BTreeMap<CacheKey, (usize, ExactRational)>,
    pub lines: usize,
}

impl Cache {
    /// Parses cache text. Blank lines are skipped; identical duplicates are
    /// accepted and a duplicate with a different value is corruption.
    pub fn parse(text: &str) -> Result<Cache> {
        let mut cache = Cache::default();
        for (i, raw) in text.lines().enumerate() {
            cache.lines = i + 1;
            if raw.is_empty() {
                continue;
            }
            let rec = CacheRecord::parse(raw, i + 1)?;
            cache.insert(rec, i + 1)?;
        }
        Ok(cache)
    }

    fn insert(&mut self, rec: CacheRecord, line: usize) -> Result<()> {
        match self.entries.get(&rec.key) {
            Some((first, v)) if *v != rec.value => Err(WgError::CacheCorruption {
                line,
                reason: format!(
                    "value {} conflicts with {} on line {first}",
                    format_rational(&rec.value),
                    format_rational(v)
                ),
            }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(rec.key, (line, rec.value));
                Ok(())
            }
        }
    }

    pub fn load(path: &Path) -> Result<Cache> {
        if !path.exists() {
            return Ok(Cache::default());
        }
        let reader = BufReader::new(File::open(path)?);
        let mut cache = Cache::default();
        for (i, raw) in reader.lines().enumerate() {
            let raw = raw?;
            cache.lines = i + 1;
            if raw.is_empty() {
                continue;
            }
            cache.insert(CacheRecord::parse(&raw, i + 1)?, i + 1)?;
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CacheKey) -> Option<&ExactRational> {
        self.entries.get(key).map(|(_, v)| v)
    }

    /// Rebuilds a table if every class of the level is present.
    pub fn table(&self, family: Family, level: usize, d: i64, dminus: Option<i64>) -> Option<WgTable> {
        let values = IntegerPartition::all(level)
            .into_iter()
            .map(|class| {
                let key = CacheKey {
                    family,
                    level,
                    class: class.clone(),
                    d,
                    dminus,
                };
                self.get(&key).map(|v| (class, v.clone()))
            })
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(WgTable {
            family,
            level,
            d,
            dminus,
            values,
            notes: Vec::new(),
        })
    }
}

/// Appends records not already present; returns how many were written.
/// A record whose key exists with another value is refused.
pub fn store(path: &Path, records: &[CacheRecord]) -> Result<usize> {
    let mut cache = Cache::load(path)?;
    let mut fresh = Vec::new();
    for rec in records {
        match cache.get(&rec.key) {
            Some(v) if *v == rec.value => {}
            Some(v) => {
                return Err(WgError::CacheCorruption {
                    line: cache.entries[&rec.key].0,
                    reason: format!(
                        "stored value {} disagrees with new value {}",
                        format_rational(v),
                        format_rational(&rec.value)
                    ),
                })
            }
            None => {
                cache.lines += 1;
                cache.entries.insert(rec.key.clone(), (cache.lines, rec.value.clone()));
                fresh.push(rec);
            }
        }
    }
    if !fresh.is_empty() {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut text = String::new();
        for rec in &fresh {
            text.push_str(&rec.to_string());
            text.push('\n');
        }
        file.write_all(text.as_bytes())?;
    }
    Ok(fresh.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub records: usize,
    pub checked: usize,
    /// Line numbers of the recomputed records, ascending.
    pub lines: Vec<usize>,
}

/// Recomputes a seeded random share of the records (at least one when the
/// cache is not empty) and compares exactly. A mismatch is reported as
/// corruption at the record's line.
pub fn verify(engine: &Engine, cache: &Cache, fraction: f64, seed: u64) -> Result<VerifyReport> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(WgError::InvalidArgument {
            arg: "fraction",
            reason: format!("{fraction} is not in (0, 1]"),
        });
    }
    let all: Vec<(&CacheKey, &(usize, ExactRational))> = cache.entries.iter().collect();
    let n = all.len();
    let amount = if n == 0 { 0 } else { ((n as f64 * fraction).ceil() as usize).clamp(1, n) };
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut picked: Vec<usize> = index::sample(&mut rng, n, amount).into_vec();
    picked.sort_by_key(|&i| all[i].1 .0);
    let mut lines = Vec::with_capacity(amount);
    for i in picked {
        let (key, (line, stored)) = all[i];
        let corrupt = |reason: String| WgError::CacheCorruption { line: *line, reason };
        let table = engine
            .table(key.family, key.level, key.d, key.dminus, SolveOptions::forced())
            .map_err(|e| corrupt(format!("value cannot be recomputed: {e}")))?;
        let fresh = &table.values[&key.class];
        if fresh != stored {
            return Err(corrupt(format!(
                "stored {} but recomputed {}",
                format_rational(stored),
                format_rational(fresh)
            )));
        }
        lines.push(*line);
    }
    Ok(VerifyReport {
        records: n,
        checked: amount,
        lines,
    })
}
