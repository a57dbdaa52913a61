use std::io::Write;

use crate::codec::{encode_literal, encode_name, to_hex_upper};
use crate::cos::document::Document;
use crate::cos::object::{CosValue, Dictionary};

/// Writes the canonical form of `doc` with a single full xref table.
pub fn serialize_document(doc: &Document) -> Vec<u8> {
    let doc = doc.canonical();
    let mut out = Vec::new();
    out.extend_from_slice(format!("%PDF-{}\n", doc.version).as_bytes());
    out.extend_from_slice(b"%\xE2\xE3\xCF\xD3\n");

    let size = doc.trailer.get_i64("Size").unwrap_or(1) as u32;
    let mut offsets = vec![None; size as usize];
    for (id, value) in doc.objects() {
        offsets[id.number as usize] = Some(out.len());
        out.extend_from_slice(format!("{} 0 obj\n", id.number).as_bytes());
        write_value(&mut out, value);
        out.extend_from_slice(b"\nendobj\n");
    }

    let xref_at = out.len();
    out.extend_from_slice(format!("xref\n0 {size}\n").as_bytes());
    let free: Vec<u32> = (1..size).filter(|&n| offsets[n as usize].is_none()).collect();
    let next_free = |n: u32| free.iter().copied().find(|&f| f > n).unwrap_or(0);
    out.extend_from_slice(format!("{:010} 65535 f \n", next_free(0)).as_bytes());
    for n in 1..size {
        let line = match offsets[n as usize] {
            Some(at) => format!("{at:010} 00000 n \n"),
            None => format!("{:010} 00001 f \n", next_free(n)),
        };
        out.extend_from_slice(line.as_bytes());
    }
    out.extend_from_slice(b"trailer\n");
    write_dict(&mut out, &doc.trailer);
    out.extend_from_slice(format!("\nstartxref\n{xref_at}\n%%EOF\n").as_bytes());
    out
}

/// Serializes one value the way the document writer does.
pub fn serialize_value(value: &CosValue) -> Vec<u8> {
    let mut out = Vec::new();
    write_value(&mut out, value);
    out
}

pub(crate) fn write_value(out: &mut Vec<u8>, value: &CosValue) {
    match value {
        CosValue::Null => out.extend_from_slice(b"null"),
        CosValue::Boolean(b) => out.extend_from_slice(if *b { b"true" } else { b"false" }),
        CosValue::Integer(i) => {
            let _ = write!(out, "{i}");
        }
        CosValue::Real(r) => out.extend_from_slice(format_real(*r).as_bytes()),
        CosValue::LiteralString(bytes) => {
            out.push(b'(');
            out.extend_from_slice(&encode_literal(bytes));
            out.push(b')');
        }
        CosValue::HexString(bytes) => {
            out.push(b'<');
            out.extend_from_slice(to_hex_upper(bytes).as_bytes());
            out.push(b'>');
        }
        CosValue::Name(name) => {
            out.push(b'/');
            out.extend_from_slice(&encode_name(name));
        }
        CosValue::Array(items) => {
            out.push(b'[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(b' ');
                }
                write_value(out, item);
            }
            out.push(b']');
        }
        CosValue::Dictionary(dict) => write_dict(out, dict),
        CosValue::Stream(stream) => {
            write_dict(out, &stream.dict);
            out.extend_from_slice(b"\nstream\n");
            out.extend_from_slice(&stream.data);
            out.extend_from_slice(b"\nendstream");
        }
        CosValue::Reference(id) => {
            let _ = write!(out, "{} {} R", id.number, id.generation);
        }
    }
}

/// Only the first occurrence of a repeated key is written.
pub(crate) fn write_dict(out: &mut Vec<u8>, dict: &Dictionary) {
    out.extend_from_slice(b"<<");
    for (key, value) in dict.unique_entries() {
        out.extend_from_slice(b" /");
        out.extend_from_slice(&encode_name(key));
        out.push(b' ');
        write_value(out, value);
    }
    out.extend_from_slice(b" >>");
}

/// Shortest round-tripping decimal, never in exponent form, always with a
/// decimal point so it reads back as a real.
pub fn format_real(r: f64) -> String {
    if !r.is_finite() {
        return "0.0".into();
    }
    let s = format!("{r}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}
