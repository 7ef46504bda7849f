//! Text encodings of numbers and pairs.

use neggamma_core::SamplePair;
use serde::Serialize;
use std::io::{self, Write};

/// Scientific notation with 17 significant digits; parses back to the same `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv_header(out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "y1,y2")
}

pub fn write_csv_pair(out: &mut dyn Write, p: SamplePair) -> io::Result<()> {
    writeln!(out, "{},{}", sig17(p.y1), sig17(p.y2))
}

#[derive(Serialize)]
struct JsonPair {
    y1: f64,
    y2: f64,
}

pub fn write_jsonl_pair(out: &mut dyn Write, p: SamplePair) -> io::Result<()> {
    serde_json::to_writer(&mut *out, &JsonPair { y1: p.y1, y2: p.y2 })?;
    out.write_all(b"\n")
}
