//! Binary checkpoint file.
//!
//! Layout, all integers little endian:
//!
//! ```text
//! header:  b"TPCK" | version: u32 | digest: [u8; 32] | n: u32 | rmax: u32 | chunk_size: u64
//! record:  len: u32 | chunk_id: u64 | status: u8 | minors_done: u64 [| failure_index: u64]
//! ```
//!
//! Records are appended in chunk-id order, so the completed chunks always form
//! a prefix `0..cursor`.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"TPCK";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub digest: [u8; 32],
    pub n: u32,
    pub rmax: u32,
    pub chunk_size: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChunkStatus {
    Passed,
    /// Global enumeration index of the first failing minor in the chunk.
    Failed(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkRecord {
    pub chunk_id: u64,
    pub status: ChunkStatus,
    pub minors_done: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub header: Header,
    pub records: Vec<ChunkRecord>,
}

impl Checkpoint {
    /// Number of leading chunks completed.
    pub fn cursor(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn failure(&self) -> Option<u64> {
        self.records.iter().find_map(|r| match r.status {
            ChunkStatus::Failed(idx) => Some(idx),
            ChunkStatus::Passed => None,
        })
    }

    pub fn read(path: &Path) -> Result<Checkpoint> {
        let mut bytes = Vec::new();
        File::open(path)?.read_to_end(&mut bytes)?;
        Checkpoint::decode(&bytes)
    }

    pub fn decode(bytes: &[u8]) -> Result<Checkpoint> {
        let corrupt = |m: &str| Error::CorruptCheckpoint(m.to_string());
        let mut cur = Cursor { buf: bytes, pos: 0 };
        if cur.take(4).ok_or_else(|| corrupt("truncated header"))? != MAGIC {
            return Err(corrupt("bad magic"));
        }
        let version = cur.u32().ok_or_else(|| corrupt("truncated header"))?;
        if version != FORMAT_VERSION {
            return Err(corrupt(&format!("unsupported format version {version}")));
        }
        let mut digest = [0u8; 32];
        digest.copy_from_slice(cur.take(32).ok_or_else(|| corrupt("truncated header"))?);
        let n = cur.u32().ok_or_else(|| corrupt("truncated header"))?;
        let rmax = cur.u32().ok_or_else(|| corrupt("truncated header"))?;
        let chunk_size = cur.u64().ok_or_else(|| corrupt("truncated header"))?;
        let header = Header {
            digest,
            n,
            rmax,
            chunk_size,
        };
        let mut records = Vec::new();
        while cur.pos < bytes.len() {
            let len = cur.u32().ok_or_else(|| corrupt("truncated record length"))? as usize;
            let body = cur.take(len).ok_or_else(|| corrupt("truncated record"))?;
            let mut rc = Cursor { buf: body, pos: 0 };
            let chunk_id = rc.u64().ok_or_else(|| corrupt("short record"))?;
            let status = rc.take(1).ok_or_else(|| corrupt("short record"))?[0];
            let minors_done = rc.u64().ok_or_else(|| corrupt("short record"))?;
            let status = match status {
                0 => ChunkStatus::Passed,
                1 => ChunkStatus::Failed(rc.u64().ok_or_else(|| corrupt("short record"))?),
                s => return Err(corrupt(&format!("unknown chunk status {s}"))),
            };
            if rc.pos != body.len() {
                return Err(corrupt("record has trailing bytes"));
            }
            if chunk_id != records.len() as u64 {
                return Err(corrupt("chunk records are not a contiguous prefix"));
            }
            if matches!(records.last(), Some(ChunkRecord { status: ChunkStatus::Failed(_), .. })) {
                return Err(corrupt("records continue past a failed chunk"));
            }
            records.push(ChunkRecord {
                chunk_id,
                status,
                minors_done,
            });
        }
        Ok(Checkpoint { header, records })
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.buf.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }
}

/// Sole writer of a checkpoint file.
pub struct CheckpointWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CheckpointWriter {
    pub fn create(path: &Path, header: &Header) -> Result<CheckpointWriter> {
        let file = File::create(path)?;
        let mut out = BufWriter::new(file);
        out.write_all(MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&header.digest)?;
        out.write_all(&header.n.to_le_bytes())?;
        out.write_all(&header.rmax.to_le_bytes())?;
        out.write_all(&header.chunk_size.to_le_bytes())?;
        out.flush()?;
        Ok(CheckpointWriter {
            path: path.to_path_buf(),
            out,
        })
    }

    pub fn append_to(path: &Path) -> Result<CheckpointWriter> {
        let file = OpenOptions::new().append(true).open(path)?;
        Ok(CheckpointWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, records: &[ChunkRecord]) -> Result<()> {
        for r in records {
            let mut body = Vec::with_capacity(25);
            body.extend_from_slice(&r.chunk_id.to_le_bytes());
            match r.status {
                ChunkStatus::Passed => {
                    body.push(0);
                    body.extend_from_slice(&r.minors_done.to_le_bytes());
                }
                ChunkStatus::Failed(idx) => {
                    body.push(1);
                    body.extend_from_slice(&r.minors_done.to_le_bytes());
                    body.extend_from_slice(&idx.to_le_bytes());
                }
            }
            self.out.write_all(&(body.len() as u32).to_le_bytes())?;
            self.out.write_all(&body)?;
        }
        self.out.flush()?;
        self.out.get_ref().sync_data()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.bin");
        let header = Header {
            digest: [7; 32],
            n: 5,
            rmax: 5,
            chunk_size: 16,
        };
        let mut w = CheckpointWriter::create(&path, &header).unwrap();
        let recs = [
            ChunkRecord { chunk_id: 0, status: ChunkStatus::Passed, minors_done: 16 },
            ChunkRecord { chunk_id: 1, status: ChunkStatus::Failed(20), minors_done: 5 },
        ];
        w.append(&recs[..1]).unwrap();
        drop(w);
        let mut w = CheckpointWriter::append_to(&path).unwrap();
        w.append(&recs[1..]).unwrap();
        let ck = Checkpoint::read(&path).unwrap();
        assert_eq!(ck.header, header);
        assert_eq!(ck.records, recs);
        assert_eq!(ck.cursor(), 2);
        assert_eq!(ck.failure(), Some(20));
    }

    #[test]
    fn corrupt_inputs() {
        assert!(matches!(Checkpoint::decode(b"NOPE"), Err(Error::CorruptCheckpoint(_))));
        assert!(matches!(Checkpoint::decode(b"TPCK\x01\x00"), Err(Error::CorruptCheckpoint(_))));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.bin");
        let header = Header { digest: [0; 32], n: 2, rmax: 2, chunk_size: 1 };
        let mut w = CheckpointWriter::create(&path, &header).unwrap();
        w.append(&[ChunkRecord { chunk_id: 0, status: ChunkStatus::Passed, minors_done: 1 }]).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.pop();
        assert!(matches!(Checkpoint::decode(&bytes), Err(Error::CorruptCheckpoint(_))));
    }
}
