//! The `.emb` embedding file: `b"EMB1"`, a little-endian `u32` dimension,
//! then that many little-endian `f32` values.

use std::fs;
use std::path::Path;

use crate::embedding::Embedding;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"EMB1";
const HEADER_LEN: usize = 8;

pub fn encode_embedding(e: &Embedding) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * e.dim());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&(e.dim() as u32).to_le_bytes());
    for v in e.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_embedding(bytes: &[u8]) -> Result<Embedding> {
    if bytes.len() < 4 {
        return Err(format_err(bytes.len(), "file shorter than magic"));
    }
    if bytes[..4] != MAGIC {
        return Err(format_err(0, "bad magic, expected \"EMB1\""));
    }
    if bytes.len() < HEADER_LEN {
        return Err(format_err(bytes.len(), "truncated dimension field"));
    }
    let dim = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if dim == 0 {
        return Err(format_err(4, "dimension is zero"));
    }
    let payload = &bytes[HEADER_LEN..];
    let expected = dim
        .checked_mul(4)
        .ok_or_else(|| format_err(4, "dimension overflows"))?;
    if payload.len() < expected {
        return Err(format_err(
            HEADER_LEN + payload.len() / 4 * 4,
            format!(
                "declared dim {dim} but only {} values present",
                payload.len() / 4
            ),
        ));
    }
    if payload.len() > expected {
        return Err(format_err(
            HEADER_LEN + expected,
            "trailing bytes after payload",
        ));
    }
    let values: Vec<f32> = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(format_err(HEADER_LEN + 4 * pos, "non-finite value"));
    }
    Embedding::new(values)
}

pub fn write_embedding_file(e: &Embedding, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_embedding(e)).map_err(|err| Error::io(path, err))
}

pub fn read_embedding_file(path: impl AsRef<Path>) -> Result<Embedding> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|err| Error::io(path, err))?;
    decode_embedding(&bytes).map_err(|err| err.context(path.display().to_string()))
}

fn format_err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Format {
        offset,
        reason: reason.into(),
    }
}
