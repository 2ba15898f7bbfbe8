//! Versioned binary checkpoint: configuration, parameter tensors and
//! optimizer moments, all little-endian. The run's random streams are
//! derived from the seed, so the seed is the whole RNG state.
//!
//! Layout: magic, `u32` version, `u64`-prefixed config JSON, `i64` day,
//! `u64` seed, `u32` hidden and embedding sizes, `u32` tensor count, then per
//! tensor a `u16`-prefixed name and a `u64`-prefixed run of `f64`, then the
//! Adam step and its two moment vectors.

use std::path::Path;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::model::{AdamState, ModelParams};

pub const MAGIC: &[u8; 8] = b"SOCRECKP";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config: RunConfig,
    pub day: i64,
    pub params: ModelParams,
    pub adam: AdamState,
    pub seed: u64,
}

fn put_f64s(out: &mut Vec<u8>, xs: &[f64]) {
    out.extend_from_slice(&(xs.len() as u64).to_le_bytes());
    for x in xs {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

pub fn encode(ck: &Checkpoint) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    let cfg = serde_json::to_vec(&ck.config).expect("config serialises");
    out.extend_from_slice(&(cfg.len() as u64).to_le_bytes());
    out.extend_from_slice(&cfg);
    out.extend_from_slice(&ck.day.to_le_bytes());
    out.extend_from_slice(&ck.seed.to_le_bytes());
    out.extend_from_slice(&(ck.params.hidden() as u32).to_le_bytes());
    out.extend_from_slice(&(ck.params.embed() as u32).to_le_bytes());
    let tensors = ck.params.tensors();
    out.extend_from_slice(&(tensors.len() as u32).to_le_bytes());
    for (name, t) in tensors {
        out.extend_from_slice(&(name.len() as u16).to_le_bytes());
        out.extend_from_slice(name.as_bytes());
        put_f64s(&mut out, t);
    }
    out.extend_from_slice(&ck.adam.step.to_le_bytes());
    put_f64s(&mut out, &ck.adam.m);
    put_f64s(&mut out, &ck.adam.v);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::Checkpoint {
            path: self.path.to_path_buf(),
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(self.fail(format!(
                "truncated while reading {what}: need {n} bytes, {} left",
                self.buf.len() - self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn array<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        Ok(self.take(N, what)?.try_into().unwrap())
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array(what)?))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array(what)?))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array(what)?))
    }

    fn len(&mut self, what: &str, width: usize) -> Result<usize> {
        let n = self.u64(what)? as usize;
        if n.checked_mul(width).map_or(true, |b| b > self.buf.len() - self.pos) {
            return Err(self.fail(format!("truncated: {what} claims {n} entries past the end of the file")));
        }
        Ok(n)
    }

    fn f64s(&mut self, what: &str) -> Result<Vec<f64>> {
        let n = self.len(what, 8)?;
        let bytes = self.take(n * 8, what)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

pub fn decode(buf: &[u8], path: &Path) -> Result<Checkpoint> {
    let mut r = Reader { buf, pos: 0, path };
    if r.take(8, "magic")? != MAGIC {
        r.pos = 0;
        return Err(r.fail("not a checkpoint file"));
    }
    let version = r.u32("version")?;
    if version != FORMAT_VERSION {
        return Err(r.fail(format!("unsupported format version {version}")));
    }
    let n = r.len("config", 1)?;
    let at = r.pos;
    let cfg_bytes = r.take(n, "config")?;
    let config: RunConfig = serde_json::from_slice(cfg_bytes).map_err(|e| Error::Checkpoint {
        path: path.to_path_buf(),
        offset: at,
        msg: format!("bad config: {e}"),
    })?;
    let day = i64::from_le_bytes(r.array("day")?);
    let seed = r.u64("seed")?;
    let h = r.u32("hidden size")? as usize;
    let d = r.u32("embedding size")? as usize;
    let mut params = ModelParams::zeros(h, d);
    let count = r.u32("tensor count")? as usize;
    let expected = params.tensors().len();
    if count != expected {
        return Err(r.fail(format!("expected {expected} tensors, found {count}")));
    }
    for (name, dst) in params.tensors_mut() {
        let len = r.u16("tensor name")? as usize;
        let at = r.pos;
        let got = r.take(len, "tensor name")?;
        if got != name.as_bytes() {
            return Err(Error::Checkpoint {
                path: path.to_path_buf(),
                offset: at,
                msg: format!("expected tensor `{name}`, found `{}`", String::from_utf8_lossy(got)),
            });
        }
        let at = r.pos;
        let data = r.f64s(name)?;
        if data.len() != dst.len() {
            return Err(Error::Checkpoint {
                path: path.to_path_buf(),
                offset: at,
                msg: format!("tensor `{name}` has {} values, expected {}", data.len(), dst.len()),
            });
        }
        dst.copy_from_slice(&data);
    }
    let step = r.u64("optimizer step")?;
    let m = r.f64s("first moments")?;
    let v = r.f64s("second moments")?;
    if m.len() != params.len() || v.len() != params.len() {
        return Err(r.fail("optimizer moments do not match the parameter count"));
    }
    if r.pos != buf.len() {
        return Err(r.fail(format!("{} trailing bytes", buf.len() - r.pos)));
    }
    Ok(Checkpoint {
        config,
        day,
        params,
        adam: AdamState { m, v, step },
        seed,
    })
}

pub fn save_checkpoint(ck: &Checkpoint, path: &Path) -> Result<()> {
    std::fs::write(path, encode(ck)).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let buf = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&buf, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{init_params, ModelConfig};

    fn sample() -> Checkpoint {
        let cfg = ModelConfig { dim_embed: 5, dim_hidden: 3, ..Default::default() };
        let params = init_params(&cfg, 3);
        let mut adam = AdamState::for_params(&params);
        adam.step = 7;
        adam.m.iter_mut().enumerate().for_each(|(i, x)| *x = (i as f64).sin() / 3.0);
        adam.v.iter_mut().enumerate().for_each(|(i, x)| *x = (i as f64).cos().abs() * 1e-9);
        Checkpoint { config: RunConfig { seed: 42, ..Default::default() }, day: 12, params, adam, seed: 42 }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let ck = sample();
        let bytes = encode(&ck);
        let back = decode(&bytes, Path::new("x")).unwrap();
        assert_eq!(back, ck);
        let a: Vec<u64> = ck.params.to_flat().iter().map(|x| x.to_bits()).collect();
        let b: Vec<u64> = back.params.to_flat().iter().map(|x| x.to_bits()).collect();
        assert_eq!(a, b);
        assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn truncation_reports_offset() {
        let bytes = encode(&sample());
        for cut in [3, 20, bytes.len() / 2, bytes.len() - 1] {
            match decode(&bytes[..cut], Path::new("ck")) {
                Err(Error::Checkpoint { offset, msg, .. }) => {
                    assert!(offset <= cut, "offset {offset} cut {cut}");
                    assert!(msg.contains("truncated") || msg.contains("not a checkpoint"), "{msg}");
                }
                other => panic!("cut {cut}: {other:?}"),
            }
        }
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad, Path::new("ck")).is_err());
    }
}
