//! The frames file: one CSV row per point per frame.
//!
//! ```text
//! frame,time,point_id,color,x,y[,z]
//! ```
//!
//! Rows are sorted by `(frame, point_id)`, frame indices run from 0 without
//! gaps, and every row of a frame carries the same time stamp. Time stamps are
//! normalized to `[0, 1]` at ingestion.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::builder::{Trajectory, TrajectorySet};
use crate::error::{Error, Result};
use crate::geometry::{dequantize, quantize};
use crate::time::{fmt_decimal, parse_decimal, Rational, TimeGrid};

const HEADER_2D: [&str; 6] = ["frame", "time", "point_id", "color", "x", "y"];
const HEADER_3D: [&str; 7] = ["frame", "time", "point_id", "color", "x", "y", "z"];

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct Row {
    line: usize,
    frame: usize,
    time: Rational,
    id: u32,
    color: u32,
    coords: [i64; 3],
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str, line: usize) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(line, format!("invalid {name} {:?}", rec.get(i).unwrap_or(""))))
}

fn parse_row(rec: &csv::StringRecord, dim: usize, line: usize) -> Result<Row> {
    if rec.len() != 4 + dim {
        return Err(parse_err(line, format!("expected {} fields, found {}", 4 + dim, rec.len())));
    }
    let frame = field(rec, 0, "frame", line)?;
    let time = parse_decimal(&rec[1]).ok_or_else(|| parse_err(line, format!("invalid time {:?}", &rec[1])))?;
    let id = field(rec, 2, "point_id", line)?;
    let color: u32 = field(rec, 3, "color", line)?;
    if color == 0 {
        return Err(parse_err(line, "color must be a positive integer"));
    }
    let mut coords = [0i64; 3];
    for (k, c) in coords.iter_mut().take(dim).enumerate() {
        let v: f64 = field(rec, 4 + k, "coordinate", line)?;
        *c = quantize(v).ok_or_else(|| parse_err(line, format!("coordinate {v} out of range")))?;
    }
    Ok(Row { line, frame, time, id, color, coords })
}

/// Parses and validates a frames file.
pub fn parse_frames(text: &str) -> Result<TrajectorySet> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| parse_err(1, e.to_string()))?,
        None => return Err(parse_err(1, "missing header")),
    };
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    let dim = if names == HEADER_2D {
        2
    } else if names == HEADER_3D {
        3
    } else {
        return Err(parse_err(1, format!("expected header {} or {}", HEADER_2D.join(","), HEADER_3D.join(","))));
    };

    let mut rows: Vec<Row> = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let row = parse_row(&rec, dim, line)?;
        if let Some(prev) = rows.last() {
            if (row.frame, row.id) == (prev.frame, prev.id) {
                return Err(parse_err(line, format!("duplicate row for frame {} point {}", row.frame, row.id)));
            }
            if (row.frame, row.id) < (prev.frame, prev.id) {
                return Err(parse_err(line, "rows must be sorted by (frame, point_id)"));
            }
            if row.frame == prev.frame && row.time != prev.time {
                return Err(parse_err(line, format!("frame {} has more than one time stamp", row.frame)));
            }
            if row.frame > prev.frame + 1 {
                return Err(parse_err(line, format!("frame {} is missing", prev.frame + 1)));
            }
            if row.frame == prev.frame + 1 && row.time <= prev.time {
                return Err(parse_err(line, "times must increase strictly with the frame index"));
            }
        } else if row.frame != 0 {
            return Err(parse_err(line, "frames must start at 0"));
        }
        rows.push(row);
    }
    let Some(last) = rows.last() else {
        return Err(parse_err(1, "no data rows"));
    };
    let frames = last.frame + 1;
    if frames < 2 {
        return Err(parse_err(last.line, "at least two frames are required"));
    }
    let mut raw = vec![Rational::from_integer(0); frames];
    for r in &rows {
        raw[r.frame] = r.time;
    }
    let grid = TimeGrid::from_raw(raw)?;

    let mut by_id: BTreeMap<u32, Trajectory> = BTreeMap::new();
    for r in &rows {
        match by_id.get_mut(&r.id) {
            None => {
                by_id.insert(r.id, Trajectory { id: r.id, color: r.color, start: r.frame, positions: vec![r.coords] });
            }
            Some(t) => {
                if t.color != r.color {
                    return Err(parse_err(r.line, format!("point {} changes color", r.id)));
                }
                if r.frame != t.end() + 1 {
                    return Err(parse_err(r.line, format!("point {} skips frames; supports must be contiguous", r.id)));
                }
                t.positions.push(r.coords);
            }
        }
    }
    TrajectorySet::new(dim, grid, by_id.into_values().collect()).map_err(|e| match e {
        Error::PositionCollision { frame, a, b } => {
            let line = rows.iter().find(|r| r.frame == frame && r.id == b).map_or(0, |r| r.line);
            parse_err(line, format!("points {a} and {b} share a position in frame {frame}"))
        }
        other => other,
    })
}

/// Serializes a trajectory set. Times are the raw stamps in shortest exact
/// decimal form and coordinates are the shortest decimals that re-quantize to
/// the same values.
pub fn write_frames(ts: &TrajectorySet) -> String {
    let mut out = String::new();
    out.push_str(&if ts.dim == 2 { HEADER_2D.join(",") } else { HEADER_3D.join(",") });
    out.push('\n');
    for frame in 0..ts.frames() {
        let time = fmt_decimal(&ts.grid.raw()[frame]);
        for t in &ts.trajectories {
            if let Some(p) = t.position(frame) {
                let _ = write!(out, "{frame},{time},{},{}", t.id, t.color);
                for c in &p[..ts.dim] {
                    let _ = write!(out, ",{}", dequantize(*c));
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn round_trip_fixtures() {
        for ts in [fixtures::flip_gadget(), fixtures::hexagon_with_center(1.0), fixtures::single_point(3)] {
            let text = write_frames(&ts);
            let back = parse_frames(&text).unwrap();
            assert_eq!(back, ts);
            assert_eq!(write_frames(&back), text);
        }
    }

    #[test]
    fn times_are_normalized() {
        let text = "frame,time,point_id,color,x,y\n0,10,0,1,0,0\n1,12.5,0,1,0,0\n2,20,0,1,0,0\n";
        let ts = parse_frames(text).unwrap();
        assert_eq!(ts.grid.times(), &[Rational::new(0, 1), Rational::new(1, 4), Rational::new(1, 1)]);
        assert_eq!(ts.grid.affine_map(), (Rational::from_integer(10), Rational::from_integer(10)));
    }

    #[test]
    fn three_dimensional_header() {
        let text = "frame,time,point_id,color,x,y,z\n0,0,0,1,0,0,1.5\n1,1,0,1,0,0,1.5\n";
        let ts = parse_frames(text).unwrap();
        assert_eq!(ts.dim, 3);
        assert_eq!(ts.trajectories[0].positions[0][2], quantize(1.5).unwrap());
    }

    #[test]
    fn rejects_malformed_files_with_line_numbers() {
        let h = "frame,time,point_id,color,x,y\n";
        let dup = format!("{h}0,0,0,1,0,0\n0,0,0,1,1,0\n1,1,0,1,0,0\n");
        assert_eq!(line_of(parse_frames(&dup).unwrap_err()), 3);
        let unsorted = format!("{h}0,0,1,1,0,0\n0,0,0,1,1,0\n");
        assert_eq!(line_of(parse_frames(&unsorted).unwrap_err()), 3);
        let gap = format!("{h}0,0,0,1,0,0\n1,1,0,1,0,0\n2,2,1,1,0,0\n3,3,0,1,0,0\n");
        assert_eq!(line_of(parse_frames(&gap).unwrap_err()), 5);
        let times = format!("{h}0,0,0,1,0,0\n1,0,0,1,0,0\n");
        assert_eq!(line_of(parse_frames(&times).unwrap_err()), 3);
        let mixed = format!("{h}0,0,0,1,0,0\n0,0.5,1,1,1,0\n");
        assert_eq!(line_of(parse_frames(&mixed).unwrap_err()), 3);
        let color = format!("{h}0,0,0,0,0,0\n");
        assert_eq!(line_of(parse_frames(&color).unwrap_err()), 2);
        let recolor = format!("{h}0,0,0,1,0,0\n1,1,0,2,0,0\n");
        assert_eq!(line_of(parse_frames(&recolor).unwrap_err()), 3);
        let bad = format!("{h}0,0,0,1,zero,0\n");
        assert_eq!(line_of(parse_frames(&bad).unwrap_err()), 2);
        let collide = format!("{h}0,0,0,1,0,0\n0,0,1,1,0,0\n1,1,0,1,0,0\n");
        assert_eq!(line_of(parse_frames(&collide).unwrap_err()), 3);
        assert_eq!(line_of(parse_frames("frame,time,id,color,x,y\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_frames(h).unwrap_err()), 1);
        let single = format!("{h}0,0,0,1,0,0\n");
        assert_eq!(line_of(parse_frames(&single).unwrap_err()), 2);
    }
}
