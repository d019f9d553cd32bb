//! Binary container for datasets and secret sidecars.
//!
//! ```text
//! "CLWF" | version: u16 LE | manifest_len: u32 LE | manifest (UTF-8 JSON)
//!        | records | crc32: u32 LE
//! ```
//!
//! Dataset records are `m` rows of `n` little-endian `f64` followed by one
//! signed label byte. A secret sidecar carries the dataset manifest with
//! `payload = "secret"` and a single record of the secret direction's
//! coordinates. The CRC-32 (IEEE) covers every byte before it.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{Dataset, DatasetManifest, Label, PayloadKind};
use crate::error::FormatError;

pub const MAGIC: &[u8; 4] = b"CLWF";
pub const DATASET_FORMAT_VERSION: u16 = 1;

const HEADER_LEN: usize = 4 + 2 + 4;
const MAX_MANIFEST_LEN: usize = 16 << 20;

type FResult<T> = std::result::Result<T, FormatError>;

/// Hex SHA-256 of the little-endian bytes of `w`.
pub fn secret_digest(w: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in w {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn encode_container(manifest: &DatasetManifest, records: impl FnOnce(&mut Vec<u8>)) -> Vec<u8> {
    let json = serde_json::to_vec(manifest).expect("manifest serializes");
    let mut out = Vec::with_capacity(HEADER_LEN + json.len() + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&DATASET_FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    records(&mut out);
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

pub fn encode_dataset(ds: &Dataset) -> Vec<u8> {
    encode_container(&ds.manifest, |out| {
        out.reserve(ds.len() * (8 * ds.n() + 1));
        for (x, label) in ds.iter() {
            for v in x {
                out.extend_from_slice(&v.to_le_bytes());
            }
            out.push(label.as_i8() as u8);
        }
    })
}

/// Secret sidecar for a dataset manifest.
pub fn encode_secret(manifest: &DatasetManifest, w: &[f64]) -> Vec<u8> {
    let mut m = manifest.clone();
    m.payload = PayloadKind::Secret;
    m.secret_digest = Some(secret_digest(w));
    encode_container(&m, |out| {
        for v in w {
            out.extend_from_slice(&v.to_le_bytes());
        }
    })
}

fn parse_header(bytes: &[u8]) -> FResult<(u16, usize)> {
    if bytes.len() < MAGIC.len() {
        return if MAGIC.starts_with(bytes) {
            Err(FormatError::Truncated { needed: HEADER_LEN, found: bytes.len() })
        } else {
            Err(FormatError::BadMagic)
        };
    }
    if &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated { needed: HEADER_LEN, found: bytes.len() });
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != DATASET_FORMAT_VERSION {
        return Err(FormatError::VersionMismatch { found: version, expected: DATASET_FORMAT_VERSION });
    }
    let len = u32::from_le_bytes([bytes[6], bytes[7], bytes[8], bytes[9]]) as usize;
    if len > MAX_MANIFEST_LEN {
        return Err(FormatError::Manifest(format!("manifest length {len} exceeds {MAX_MANIFEST_LEN}")));
    }
    Ok((version, len))
}

fn parse_manifest(json: &[u8]) -> FResult<DatasetManifest> {
    let m: DatasetManifest = serde_json::from_slice(json).map_err(|e| FormatError::Manifest(e.to_string()))?;
    if m.format_version != DATASET_FORMAT_VERSION {
        return Err(FormatError::VersionMismatch { found: m.format_version, expected: DATASET_FORMAT_VERSION });
    }
    if m.n == 0 {
        return Err(FormatError::Manifest("n must be positive".into()));
    }
    if let Some(e) = &m.embedding {
        if e.dim != m.n {
            return Err(FormatError::Manifest(format!("embedding dim {} differs from n = {}", e.dim, m.n)));
        }
    }
    Ok(m)
}

/// Reads only the header and manifest; records and checksum are not touched.
pub fn decode_manifest(bytes: &[u8]) -> FResult<DatasetManifest> {
    let (_, len) = parse_header(bytes)?;
    let end = HEADER_LEN + len;
    if bytes.len() < end {
        return Err(FormatError::Truncated { needed: end, found: bytes.len() });
    }
    parse_manifest(&bytes[HEADER_LEN..end])
}

/// Splits a verified container into its manifest and record bytes.
fn open_container(
    bytes: &[u8],
    payload: PayloadKind,
    record_len: impl Fn(&DatasetManifest) -> Option<usize>,
) -> FResult<(DatasetManifest, &[u8])> {
    let manifest = decode_manifest(bytes)?;
    expect_payload(&manifest, payload)?;
    let (_, len) = parse_header(bytes)?;
    let start = HEADER_LEN + len;
    let body = record_len(&manifest)
        .ok_or_else(|| FormatError::Manifest(format!("record size overflows for n = {}, m = {}", manifest.n, manifest.m)))?;
    let needed = start
        .checked_add(body)
        .and_then(|v| v.checked_add(4))
        .ok_or_else(|| FormatError::Manifest("record size overflows".into()))?;
    if bytes.len() < needed {
        return Err(FormatError::Truncated { needed, found: bytes.len() });
    }
    if bytes.len() > needed {
        return Err(FormatError::TrailingBytes(bytes.len() - needed));
    }
    let crc_at = needed - 4;
    let stored = u32::from_le_bytes(bytes[crc_at..needed].try_into().expect("4 bytes"));
    let computed = crc32fast::hash(&bytes[..crc_at]);
    if stored != computed {
        return Err(FormatError::ChecksumMismatch { stored, computed });
    }
    Ok((manifest, &bytes[start..crc_at]))
}

fn expect_payload(m: &DatasetManifest, want: PayloadKind) -> FResult<()> {
    if m.payload != want {
        return Err(FormatError::WrongPayload { expected: want.name(), found: m.payload.name() });
    }
    Ok(())
}

pub fn decode_dataset(bytes: &[u8]) -> FResult<Dataset> {
    let (manifest, records) = open_container(bytes, PayloadKind::Samples, |m| {
        m.n.checked_mul(8)?.checked_add(1)?.checked_mul(m.m)
    })?;
    let n = manifest.n;
    let mut features = Vec::with_capacity(n * manifest.m);
    let mut labels = Vec::with_capacity(manifest.m);
    for rec in records.chunks_exact(8 * n + 1) {
        for chunk in rec[..8 * n].chunks_exact(8) {
            features.push(f64::from_le_bytes(chunk.try_into().expect("8 bytes")));
        }
        let raw = rec[8 * n] as i8;
        labels.push(Label::from_i8(raw).ok_or(FormatError::InvalidLabel(raw))?);
    }
    Dataset::from_parts(manifest, features, labels).map_err(|e| FormatError::Manifest(e.to_string()))
}

/// Decodes a secret sidecar and checks the stored digest.
pub fn decode_secret(bytes: &[u8]) -> FResult<(DatasetManifest, Vec<f64>)> {
    let (manifest, records) = open_container(bytes, PayloadKind::Secret, |m| m.ambient_n().checked_mul(8))?;
    let w: Vec<f64> = records.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    match &manifest.secret_digest {
        Some(d) if *d == secret_digest(&w) => Ok((manifest, w)),
        _ => Err(FormatError::DigestMismatch),
    }
}

fn write_bytes(path: &Path, bytes: &[u8]) -> FResult<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(bytes)?;
    f.flush()?;
    Ok(())
}

pub fn write_dataset(ds: &Dataset, path: impl AsRef<Path>) -> FResult<()> {
    write_bytes(path.as_ref(), &encode_dataset(ds))
}

pub fn read_dataset(path: impl AsRef<Path>) -> FResult<Dataset> {
    decode_dataset(&std::fs::read(path)?)
}

pub fn write_secret(manifest: &DatasetManifest, w: &[f64], path: impl AsRef<Path>) -> FResult<()> {
    write_bytes(path.as_ref(), &encode_secret(manifest, w))
}

pub fn read_secret(path: impl AsRef<Path>) -> FResult<(DatasetManifest, Vec<f64>)> {
    decode_secret(&std::fs::read(path)?)
}

/// Reads the manifest without loading any samples.
pub fn read_manifest(path: impl AsRef<Path>) -> FResult<DatasetManifest> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; HEADER_LEN];
    let mut got = 0;
    while got < HEADER_LEN {
        let k = r.read(&mut header[got..])?;
        if k == 0 {
            break;
        }
        got += k;
    }
    let (_, len) = parse_header(&header[..got])?;
    let mut json = vec![0u8; len];
    r.read_exact(&mut json).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => FormatError::Truncated { needed: HEADER_LEN + len, found: got },
        _ => FormatError::Io(e),
    })?;
    parse_manifest(&json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_mixture, generate_null, MixtureParams};
    use crate::samplers::ClweParams;

    fn planted() -> (Dataset, Vec<f64>) {
        let w = vec![0.6, 0.0, 0.8];
        let p = MixtureParams::new(ClweParams::new(8.0, 0.01, w.clone()).unwrap(), 0.04, None).unwrap();
        (generate_mixture(&p, 300, 3).unwrap(), w)
    }

    #[test]
    fn layout() {
        let (ds, _) = planted();
        let bytes = encode_dataset(&ds);
        assert_eq!(&bytes[..4], b"CLWF");
        assert_eq!(u16::from_le_bytes([bytes[4], bytes[5]]), 1);
        let len = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
        assert_eq!(bytes.len(), 10 + len + 300 * (3 * 8 + 1) + 4);
        let first = 10 + len;
        assert_eq!(f64::from_le_bytes(bytes[first..first + 8].try_into().unwrap()), ds.x(0)[0]);
        assert_eq!(bytes[first + 24] as i8, ds.labels()[0].as_i8());
    }

    #[test]
    fn round_trip() {
        let (ds, _) = planted();
        assert_eq!(decode_dataset(&encode_dataset(&ds)).unwrap(), ds);
        let null = generate_null(4, 50, 2).unwrap();
        assert_eq!(decode_dataset(&encode_dataset(&null)).unwrap(), null);
    }

    #[test]
    fn distinct_failures() {
        let (ds, _) = planted();
        let good = encode_dataset(&ds);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode_dataset(&bad), Err(FormatError::BadMagic)));

        let mut bad = good.clone();
        bad[4] = 9;
        assert!(matches!(decode_dataset(&bad), Err(FormatError::VersionMismatch { found: 9, .. })));

        assert!(matches!(decode_dataset(&good[..good.len() - 10]), Err(FormatError::Truncated { .. })));
        assert!(matches!(decode_dataset(&good[..7]), Err(FormatError::Truncated { .. })));

        let mut bad = good.clone();
        let at = bad.len() - 40;
        bad[at] ^= 0x10;
        assert!(matches!(decode_dataset(&bad), Err(FormatError::ChecksumMismatch { .. })));

        let mut bad = good.clone();
        bad.push(0);
        assert!(matches!(decode_dataset(&bad), Err(FormatError::TrailingBytes(1))));
    }

    #[test]
    fn invalid_label_detected_behind_valid_crc() {
        let (ds, _) = planted();
        let mut bytes = encode_dataset(&ds);
        let len = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
        bytes[10 + len + 24] = 0;
        let body = bytes.len() - 4;
        let crc = crc32fast::hash(&bytes[..body]);
        bytes[body..].copy_from_slice(&crc.to_le_bytes());
        assert!(matches!(decode_dataset(&bytes), Err(FormatError::InvalidLabel(0))));
    }

    #[test]
    fn manifest_only() {
        let (ds, _) = planted();
        let bytes = encode_dataset(&ds);
        let len = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
        // Records are not needed, even if missing.
        assert_eq!(decode_manifest(&bytes[..10 + len]).unwrap(), ds.manifest);
    }

    #[test]
    fn secret_sidecar() {
        let (ds, w) = planted();
        let bytes = encode_secret(&ds.manifest, &w);
        let (m, back) = decode_secret(&bytes).unwrap();
        assert_eq!(back, w);
        assert_eq!(m.payload, PayloadKind::Secret);
        assert_eq!(m.secret_digest, ds.manifest.secret_digest);
        assert!(matches!(decode_dataset(&bytes), Err(FormatError::WrongPayload { .. })));
        assert!(matches!(decode_secret(&encode_dataset(&ds)), Err(FormatError::WrongPayload { .. })));
    }

    #[test]
    fn files() {
        let dir = tempfile::tempdir().unwrap();
        let (ds, w) = planted();
        let p = dir.path().join("d.clwf");
        write_dataset(&ds, &p).unwrap();
        assert_eq!(read_dataset(&p).unwrap(), ds);
        assert_eq!(read_manifest(&p).unwrap(), ds.manifest);
        let s = dir.path().join("d.secret");
        write_secret(&ds.manifest, &w, &s).unwrap();
        assert_eq!(read_secret(&s).unwrap().1, w);
        assert!(matches!(read_dataset(dir.path().join("missing")), Err(FormatError::Io(_))));
    }
}
