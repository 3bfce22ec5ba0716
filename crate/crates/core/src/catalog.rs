//! Catalog records, catalog files, classification tables and verification.
//!
//! A catalog file is one JSON header line followed by one JSON record per
//! class, sorted by `(num_vertices, volume, vertices)`.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bounds::check_all;
use crate::enum_index::classify_index;
use crate::enum_local::{classify_by_max_local_index, LocalSearch};
use crate::error::{Error, Result};
use crate::invariants::invariant_set;
use crate::lattice::Rational;
use crate::normal_form::{parse_canonical, CanonicalForm};
use crate::polygon::Requirement;

pub const FORMAT_VERSION: u32 = 1;
pub const GENERATOR: &str = "ldp";

/// One equivalence class with all derived invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRecord {
    pub vertices: CanonicalForm,
    pub index: i64,
    pub order: i64,
    pub max_local_index: i64,
    pub volume: i64,
    pub boundary_points: i64,
    pub interior_points: i64,
    pub num_vertices: usize,
    pub is_triangle: bool,
    pub local_indices: Vec<i64>,
    pub dual_vertices: Vec<[Rational; 2]>,
}

impl CatalogRecord {
    pub fn new(c: CanonicalForm) -> Result<Self> {
        let inv = invariant_set(&c.to_polygon())?;
        Ok(CatalogRecord {
            vertices: c,
            index: inv.index,
            order: inv.order,
            max_local_index: inv.max_local_index,
            volume: inv.volume,
            boundary_points: inv.boundary_points,
            interior_points: inv.interior_points,
            num_vertices: inv.num_vertices,
            is_triangle: inv.is_triangle,
            local_indices: inv.local_indices,
            dual_vertices: inv.dual_vertices,
        })
    }

    fn sort_key(&self) -> (usize, i64, &CanonicalForm) {
        (self.num_vertices, self.volume, &self.vertices)
    }
}

/// Scalar fields written to CSV.
#[derive(Serialize)]
struct CsvRow {
    vertices: String,
    index: i64,
    order: i64,
    max_local_index: i64,
    volume: i64,
    boundary_points: i64,
    interior_points: i64,
    num_vertices: usize,
    is_triangle: bool,
}

/// What to classify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Query {
    Index(i64),
    MaxLocalIndex(i64),
    OrderVolume { order: i64, volume: i64 },
}

impl Query {
    pub fn run(&self) -> Result<BTreeSet<CanonicalForm>> {
        match *self {
            Query::Index(ell) => classify_index(ell),
            Query::MaxLocalIndex(k) => classify_by_max_local_index(k),
            Query::OrderVolume { order, volume } => LocalSearch::new(order, volume).classify(),
        }
    }

    fn params(&self) -> serde_json::Value {
        match *self {
            Query::Index(ell) => serde_json::json!({ "index": ell }),
            Query::MaxLocalIndex(k) => serde_json::json!({ "max_local_index": k }),
            Query::OrderVolume { order, volume } => serde_json::json!({ "order": order, "volume": volume }),
        }
    }

    /// Label used in the run summary, e.g. `index=2`.
    pub fn label(&self) -> String {
        match *self {
            Query::Index(ell) => format!("index={ell}"),
            Query::MaxLocalIndex(k) => format!("max_local_index={k}"),
            Query::OrderVolume { order, volume } => format!("order={order} volume={volume}"),
        }
    }
}

/// First line of a catalog file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format_version: u32,
    pub generator: String,
    pub params: serde_json::Value,
}

/// A classification result with records in catalog order.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub query: Query,
    pub records: Vec<CatalogRecord>,
}

impl Catalog {
    pub fn from_classes(query: Query, classes: impl IntoIterator<Item = CanonicalForm>) -> Result<Self> {
        let mut records = classes.into_iter().map(CatalogRecord::new).collect::<Result<Vec<_>>>()?;
        records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok(Catalog { query, records })
    }

    /// Runs `query` on a pool of `jobs` worker threads.
    pub fn build(query: Query, jobs: usize) -> Result<Self> {
        let classes = with_jobs(jobs, || query.run())??;
        Catalog::from_classes(query, classes)
    }

    pub fn header(&self) -> Header {
        Header { format_version: FORMAT_VERSION, generator: GENERATOR.into(), params: self.query.params() }
    }

    pub fn triangles(&self) -> usize {
        self.records.iter().filter(|r| r.is_triangle).count()
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer(&mut w, &self.header())?;
        writeln!(w)?;
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        w.flush()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::result::Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.records {
            out.serialize(CsvRow {
                vertices: r.vertices.to_json(),
                index: r.index,
                order: r.order,
                max_local_index: r.max_local_index,
                volume: r.volume,
                boundary_points: r.boundary_points,
                interior_points: r.interior_points,
                num_vertices: r.num_vertices,
                is_triangle: r.is_triangle,
            })?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Runs `f` on a dedicated rayon pool with `jobs` threads (0 = default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

/// A catalog file as read back: the header (absent for an empty file) and
/// one parse result per record line.
#[derive(Debug)]
pub struct CatalogFile {
    pub header: Option<Header>,
    pub records: Vec<Result<CatalogRecord>>,
}

pub fn read_catalog<R: BufRead>(reader: R) -> Result<CatalogFile> {
    let mut lines = reader.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let io = |e: std::io::Error| Error::Parse(e.to_string());
    let header = match lines.next() {
        None => return Ok(CatalogFile { header: None, records: Vec::new() }),
        Some((_, line)) => {
            let line = line.map_err(io)?;
            let h: Header = serde_json::from_str(&line).map_err(|e| Error::Parse(format!("line 1: bad header: {e}")))?;
            if h.format_version != FORMAT_VERSION {
                return Err(Error::Parse(format!("unsupported format_version {}", h.format_version)));
            }
            h
        }
    };
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(io)?;
        records.push(serde_json::from_str(&line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))));
    }
    Ok(CatalogFile { header: Some(header), records })
}

/// Verification result for one catalog line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordCheck {
    pub record: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<CanonicalForm>,
    pub ok: bool,
    /// Mismatches between stored and recomputed data.
    pub problems: Vec<String>,
    /// Violated bounds, as `name: actual > bound`.
    pub violations: Vec<String>,
}

impl fmt::Display for RecordCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Recomputes every field of a stored record and evaluates the bounds.
pub fn verify_record(position: usize, parsed: &Result<CatalogRecord>) -> RecordCheck {
    let mut check = RecordCheck { record: position, vertices: None, ok: false, problems: Vec::new(), violations: Vec::new() };
    let stored = match parsed {
        Ok(r) => r,
        Err(e) => {
            check.problems.push(e.to_string());
            return check;
        }
    };
    check.vertices = Some(stored.vertices.clone());
    let canon = match parse_canonical(stored.vertices.vertices().to_vec()) {
        Ok(c) => c,
        Err(e) => {
            check.problems.push(e.to_string());
            return check;
        }
    };
    let q = canon.to_polygon();
    if let Err(e) = crate::polygon::Polygon::from_ccw(q.vertices().to_vec(), Requirement::Ldp) {
        check.problems.push(e.to_string());
    }
    match CatalogRecord::new(canon) {
        Ok(fresh) => check.problems.extend(field_diffs(stored, &fresh)),
        Err(e) => check.problems.push(e.to_string()),
    }
    match check_all(&q) {
        Ok(report) => {
            check.violations = report.violations().map(|c| format!("{}: {} > {}", c.name, c.actual, c.bound)).collect()
        }
        Err(e) => check.problems.push(e.to_string()),
    }
    check.ok = check.problems.is_empty() && check.violations.is_empty();
    check
}

fn field_diffs(stored: &CatalogRecord, fresh: &CatalogRecord) -> Vec<String> {
    let (a, b) = (serde_json::to_value(stored).expect("serialisable"), serde_json::to_value(fresh).expect("serialisable"));
    let (a, b) = (a.as_object().expect("record is an object"), b.as_object().expect("record is an object"));
    b.iter()
        .filter(|(k, v)| a.get(*k) != Some(v))
        .map(|(k, v)| format!("{k}: stored {}, recomputed {v}", a.get(k).map_or("null".into(), |s| s.to_string())))
        .collect()
}

/// One row of the classification table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: i64,
    /// All classes of index `k`.
    pub n: usize,
    /// Triangles among them.
    pub m: usize,
}

/// Counts of classes and triangles by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub rows: Vec<TableRow>,
}

impl ClassificationTable {
    /// Classifies every index `1..=max_index`.
    pub fn compute(max_index: i64) -> Result<Self> {
        if max_index < 1 {
            return Err(Error::Domain(format!("max index {max_index} < 1")));
        }
        let mut rows = Vec::new();
        for k in 1..=max_index {
            let classes = classify_index(k)?;
            let m = classes.iter().filter(|c| c.num_vertices() == 3).count();
            log::info!("index {k}: {} classes, {m} triangles", classes.len());
            rows.push(TableRow { k, n: classes.len(), m });
        }
        Ok(ClassificationTable { rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

impl fmt::Display for ClassificationTable {
    /// Blocks of eight indices, each with rows `k`, `n(k)`, `m(k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.rows.chunks(8).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells = |label: &str, vals: Vec<String>| {
                let mut s = format!("{label:>4} |");
                for v in vals {
                    s.push_str(&format!(" {v:>5}"));
                }
                s
            };
            writeln!(f, "{}", cells("k", block.iter().map(|r| r.k.to_string()).collect()))?;
            writeln!(f, "{}", cells("n(k)", block.iter().map(|r| r.n.to_string()).collect()))?;
            writeln!(f, "{}", cells("m(k)", block.iter().map(|r| r.m.to_string()).collect()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_fields() {
        let c = crate::canonical(&crate::oracle::example_triangle(2, 3).unwrap()).unwrap();
        let r = CatalogRecord::new(c).unwrap();
        assert_eq!((r.order, r.max_local_index, r.index, r.volume, r.boundary_points), (3, 3, 6, 54, 24));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"dual_vertices\":[[\""));
        assert_eq!(serde_json::from_str::<CatalogRecord>(&json).unwrap(), r);
    }

    #[test]
    fn reflexive_catalog_roundtrip() {
        let cat = Catalog::build(Query::Index(1), 1).unwrap();
        assert_eq!((cat.records.len(), cat.triangles()), (16, 5));
        let mut buf = Vec::new();
        cat.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("{\"format_version\":1,\"generator\":\"ldp\",\"params\":{\"index\":1}}\n"));
        let file = read_catalog(text.as_bytes()).unwrap();
        assert_eq!(file.records.len(), 16);
        for (i, r) in file.records.iter().enumerate() {
            let c = verify_record(i + 1, r);
            assert!(c.ok, "{c}");
        }
        let keys: Vec<_> = cat.records.iter().map(|r| (r.num_vertices, r.volume)).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn tampered_volume_detected() {
        let c = crate::canonical(&crate::oracle::example_triangle(1, 2).unwrap()).unwrap();
        let mut r = CatalogRecord::new(c).unwrap();
        r.volume += 1;
        let check = verify_record(1, &Ok(r));
        assert!(!check.ok);
        assert!(check.problems.iter().any(|p| p.starts_with("volume")));
    }

    #[test]
    fn empty_file() {
        let file = read_catalog(&b""[..]).unwrap();
        assert!(file.header.is_none() && file.records.is_empty());
    }

    #[test]
    fn csv_header() {
        let cat = Catalog::build(Query::Index(1), 1).unwrap();
        let mut buf = Vec::new();
        cat.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "vertices,index,order,max_local_index,volume,boundary_points,interior_points,num_vertices,is_triangle"
        );
        assert_eq!(text.lines().count(), 17);
    }

    #[test]
    fn table_layout() {
        let t = ClassificationTable::compute(3).unwrap();
        assert_eq!(t.rows, vec![TableRow { k: 1, n: 16, m: 5 }, TableRow { k: 2, n: 30, m: 7 }, TableRow { k: 3, n: 99, m: 18 }]);
        let text = t.to_string();
        assert!(text.contains("n(k) |    16    30    99"));
        assert_eq!(t.to_json(), r#"{"rows":[{"k":1,"n":16,"m":5},{"k":2,"n":30,"m":7},{"k":3,"n":99,"m":18}]}"#);
    }
}
