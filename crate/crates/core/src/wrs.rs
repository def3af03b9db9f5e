//! The WRS1 container: one JSON header line, then little-endian `(re, im)`
//! `f64` pairs in row-major order. Several records may follow each other in
//! one stream.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};
use crate::spectral::SampledSignal;
use crate::wave::{AtomSolution, WaveSolution};

pub const MAGIC: &str = "WRS1";

/// One record: grid, values and any extra header fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub grid: Grid,
    pub values: Vec<C64>,
    pub extra: Map<String, Value>,
}

impl Record {
    pub fn new(grid: Grid, values: Vec<C64>) -> Self {
        Record {
            grid,
            values,
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

pub fn write_record<W: Write>(w: &mut W, rec: &Record) -> Result<()> {
    if rec.values.len() != rec.grid.len() {
        return Err(Error::Shape {
            expected: rec.grid.len(),
            found: rec.values.len(),
        });
    }
    let mut header = Map::new();
    header.insert("magic".into(), MAGIC.into());
    header.insert(
        "dims".into(),
        serde_json::to_value(&rec.grid.dims).map_err(|e| Error::Format(e.to_string()))?,
    );
    header.insert("dtype".into(), "c128".into());
    for (k, v) in &rec.extra {
        header.insert(k.clone(), v.clone());
    }
    let line = serde_json::to_string(&Value::Object(header)).map_err(|e| Error::Format(e.to_string()))?;
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(16 * rec.values.len());
    for v in &rec.values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads the next record, or `None` at a clean end of stream.
pub fn read_record<R: BufRead>(r: &mut R) -> Result<Option<Record>> {
    let mut line = Vec::new();
    if r.read_until(b'\n', &mut line)? == 0 {
        return Ok(None);
    }
    let header: Value = serde_json::from_slice(&line).map_err(|e| Error::Format(format!("header: {e}")))?;
    let Value::Object(mut header) = header else {
        return Err(Error::Format("header is not a JSON object".into()));
    };
    if header.remove("magic").and_then(|v| v.as_str().map(String::from)).as_deref() != Some(MAGIC) {
        return Err(Error::Format("missing magic \"WRS1\"".into()));
    }
    match header.remove("dtype") {
        Some(Value::String(s)) if s == "c128" => {}
        other => return Err(Error::Format(format!("unsupported dtype {other:?}"))),
    }
    let dims: Vec<Axis> = header
        .remove("dims")
        .ok_or_else(|| Error::Format("missing dims".into()))
        .and_then(|d| serde_json::from_value(d).map_err(|e| Error::Format(format!("dims: {e}"))))?;
    let grid = Grid::new(dims)?;
    let mut raw = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut raw)
        .map_err(|e| Error::Format(format!("payload shorter than {} values: {e}", grid.len())))?;
    let values = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            C64::new(re, im)
        })
        .collect();
    Ok(Some(Record {
        grid,
        values,
        extra: header,
    }))
}

pub fn read_all<R: Read>(r: R) -> Result<Vec<Record>> {
    let mut r = BufReader::new(r);
    let mut out = Vec::new();
    while let Some(rec) = read_record(&mut r)? {
        out.push(rec);
    }
    Ok(out)
}

pub fn write_file(path: &Path, records: &[Record]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for rec in records {
        write_record(&mut w, rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<Vec<Record>> {
    read_all(File::open(path)?)
}

pub fn write_signal(path: &Path, f: &SampledSignal) -> Result<()> {
    write_file(path, &[Record::new(f.grid.clone(), f.values.clone())])
}

/// Reads the first record of a file as a signal.
pub fn read_signal(path: &Path) -> Result<SampledSignal> {
    let rec = read_file(path)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Format("file holds no records".into()))?;
    SampledSignal::new(rec.grid, rec.values)
}

/// A wave solution as two records tagged `component: plus|minus` and `s`.
pub fn solution_records(sol: &WaveSolution) -> [Record; 2] {
    [
        Record::new(sol.p_grid.clone(), sol.plus.clone()).with("component", "plus").with("s", sol.s),
        Record::new(sol.p_grid.clone(), sol.minus.clone()).with("component", "minus").with("s", sol.s),
    ]
}

/// Inverse of [`solution_records`]. A lone `plus` record gives `f̂₋ = 0`;
/// `s` falls back to `default_s` when the header omits it.
pub fn solution_from_records(records: &[Record], default_s: Option<u32>) -> Result<WaveSolution> {
    let find = |name: &str| records.iter().find(|r| r.extra.get("component").and_then(Value::as_str) == Some(name));
    let plus = find("plus").ok_or_else(|| Error::Format("no record with component \"plus\"".into()))?;
    if plus.grid.ndim() != 1 {
        return Err(Error::Format(format!("wave spectra are 1-d, found {}-d", plus.grid.ndim())));
    }
    let s = match plus.extra.get("s") {
        Some(v) => v
            .as_u64()
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| Error::Format(format!("s = {v} is not a non-negative integer")))?,
        None => default_s.ok_or_else(|| Error::Format("header lacks s".into()))?,
    };
    let minus = match find("minus") {
        Some(m) if m.grid != plus.grid => return Err(Error::Format("plus and minus grids differ".into())),
        Some(m) => m.values.clone(),
        None => vec![C64::default(); plus.values.len()],
    };
    WaveSolution::new(plus.grid.clone(), plus.values.clone(), minus, s)
}

/// Atoms stored in a header under `atoms`, if any.
pub fn atoms_of(records: &[Record]) -> Result<Option<AtomSolution>> {
    match records.iter().find_map(|r| r.extra.get("atoms")) {
        None => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| Error::Format(format!("atoms: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_multiple_records() {
        let g = Grid::new(vec![Axis::new(3, 0.5, -1.0).unwrap(), Axis::new(2, 1.0, 0.0).unwrap()]).unwrap();
        let vals: Vec<C64> = (0..6).map(|k| C64::new(k as f64, -(k as f64) / 3.0)).collect();
        let a = Record::new(g.clone(), vals.clone()).with("component", "plus").with("s", 1);
        let b = Record::new(g, vals.iter().map(|v| v * 2.0).collect()).with("component", "minus");
        let mut buf = Vec::new();
        write_record(&mut buf, &a).unwrap();
        write_record(&mut buf, &b).unwrap();
        let back = read_all(&buf[..]).unwrap();
        assert_eq!(back, vec![a, b]);
        let first_line = buf.split(|&c| c == b'\n').next().unwrap();
        let head: Value = serde_json::from_slice(first_line).unwrap();
        assert_eq!(head["magic"], "WRS1");
        assert_eq!(head["dtype"], "c128");
    }

    #[test]
    fn rejects_truncated_payload() {
        let g = Grid::from_axis(Axis::new(4, 1.0, 0.0).unwrap());
        let mut buf = Vec::new();
        write_record(&mut buf, &Record::new(g, vec![C64::new(1.0, 0.0); 4])).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_all(&buf[..]).is_err());
        assert!(read_all(&b"{\"magic\":\"XXX1\"}\n"[..]).is_err());
    }

    #[test]
    fn solution_roundtrip() {
        let ax = crate::wave::default_p_axis(2.0, 0.25).unwrap();
        let sol = WaveSolution::from_fn(Grid::from_axis(ax), 2, |p| C64::new(p, 1.0), |p| C64::new(0.0, -p)).unwrap();
        let recs = solution_records(&sol);
        let mut buf = Vec::new();
        for r in &recs {
            write_record(&mut buf, r).unwrap();
        }
        let back = solution_from_records(&read_all(&buf[..]).unwrap(), None).unwrap();
        assert_eq!(back, sol);
        // plus only: minus defaults to zero
        let half = solution_from_records(&recs[..1], None).unwrap();
        assert!(half.minus.iter().all(|c| c.norm() == 0.0));
        assert!(solution_from_records(&recs[1..], None).is_err());
    }
}
