//! Fitted module state and its portable byte envelope.
//!
//! Envelope layout: 8-byte magic, 2-byte format version (little endian),
//! length-prefixed type id, payload (fitted flag + module blob), and a
//! trailing CRC32 over everything before it.

use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"TSPSTATE";
const FORMAT_VERSION: u16 = 1;

/// The result of fitting a module: a fitted flag plus an opaque blob that
/// the owning module knows how to decode. Fit-free modules use
/// [`ModuleState::unfitted`]. Immutable once produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleState {
    fitted: bool,
    blob: Vec<u8>,
}

impl ModuleState {
    pub fn unfitted() -> Self {
        Self::default()
    }

    pub fn fitted(blob: Vec<u8>) -> Self {
        Self { fitted: true, blob }
    }

    pub fn is_fitted(&self) -> bool {
        self.fitted
    }

    pub fn blob(&self) -> &[u8] {
        &self.blob
    }
}

/// Serializes a state into the self-describing envelope for `type_id`.
pub fn encode_state(type_id: &str, state: &ModuleState) -> Vec<u8> {
    let mut out = Vec::with_capacity(MAGIC.len() + 2 + 2 + type_id.len() + 1 + state.blob.len() + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    let id = type_id.as_bytes();
    out.extend_from_slice(&(id.len() as u16).to_le_bytes());
    out.extend_from_slice(id);
    out.push(u8::from(state.fitted));
    out.extend_from_slice(&state.blob);
    let checksum = crc32fast::hash(&out);
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

/// Decodes an envelope, verifying magic, version, type id, and checksum.
pub fn decode_state(expected_type_id: &str, bytes: &[u8]) -> Result<ModuleState> {
    let corrupt = |message: &str| Error::CorruptState {
        message: message.to_string(),
    };

    if bytes.len() < MAGIC.len() + 2 + 2 + 1 + 4 {
        return Err(corrupt("truncated envelope"));
    }
    let (body, checksum_bytes) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(checksum_bytes.try_into().unwrap());
    if crc32fast::hash(body) != stored {
        return Err(corrupt("checksum mismatch"));
    }
    if &body[..MAGIC.len()] != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let mut pos = MAGIC.len();
    let version = u16::from_le_bytes(body[pos..pos + 2].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::CorruptState {
            message: format!("unsupported state format version {version}"),
        });
    }
    pos += 2;
    let id_len = u16::from_le_bytes(body[pos..pos + 2].try_into().unwrap()) as usize;
    pos += 2;
    if body.len() < pos + id_len + 1 {
        return Err(corrupt("truncated type id"));
    }
    let type_id = std::str::from_utf8(&body[pos..pos + id_len])
        .map_err(|_| corrupt("type id is not UTF-8"))?;
    if type_id != expected_type_id {
        return Err(Error::CorruptState {
            message: format!("state belongs to '{type_id}', expected '{expected_type_id}'"),
        });
    }
    pos += id_len;
    let fitted = match body[pos] {
        0 => false,
        1 => true,
        other => {
            return Err(Error::CorruptState {
                message: format!("invalid fitted flag {other}"),
            })
        }
    };
    pos += 1;
    Ok(ModuleState {
        fitted,
        blob: body[pos..].to_vec(),
    })
}

/// Little-endian binary reader/writer helpers for module blobs.
pub(crate) mod blob {
    use crate::error::{Error, Result};

    pub fn put_u32(out: &mut Vec<u8>, v: u32) {
        out.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_f64(out: &mut Vec<u8>, v: f64) {
        out.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_str(out: &mut Vec<u8>, s: &str) {
        put_u32(out, s.len() as u32);
        out.extend_from_slice(s.as_bytes());
    }

    pub struct Reader<'a> {
        bytes: &'a [u8],
        pos: usize,
    }

    impl<'a> Reader<'a> {
        pub fn new(bytes: &'a [u8]) -> Self {
            Self { bytes, pos: 0 }
        }

        fn take(&mut self, n: usize) -> Result<&'a [u8]> {
            if self.pos + n > self.bytes.len() {
                return Err(Error::CorruptState {
                    message: "truncated module blob".into(),
                });
            }
            let out = &self.bytes[self.pos..self.pos + n];
            self.pos += n;
            Ok(out)
        }

        pub fn u32(&mut self) -> Result<u32> {
            Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
        }

        pub fn f64(&mut self) -> Result<f64> {
            Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
        }

        pub fn str(&mut self) -> Result<String> {
            let len = self.u32()? as usize;
            let bytes = self.take(len)?;
            String::from_utf8(bytes.to_vec()).map_err(|_| Error::CorruptState {
                message: "module blob string is not UTF-8".into(),
            })
        }

        pub fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
            self.take(n)
        }

        pub fn done(&self) -> Result<()> {
            if self.pos == self.bytes.len() {
                Ok(())
            } else {
                Err(Error::CorruptState {
                    message: "trailing bytes in module blob".into(),
                })
            }
        }
    }
}
