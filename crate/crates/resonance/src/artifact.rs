//! Self-describing output files. JSON artifacts wrap their payload in an
//! envelope carrying the run config and a SHA-256 content hash; CSV
//! artifacts carry the same as leading `#` lines. Files are written to a
//! temporary sibling and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub kind: String,
    pub version: u32,
    pub config: RunConfig,
    /// SHA-256 of the compact JSON of `[kind, version, config, payload]`.
    pub content_sha256: String,
    pub payload: T,
}

fn json_hash<T: Serialize>(kind: &str, version: u32, config: &RunConfig, payload: &T) -> String {
    let bytes = serde_json::to_vec(&(kind, version, config, payload)).expect("artifact payloads serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl<T: Serialize> Envelope<T> {
    pub fn new(kind: &str, version: u32, config: &RunConfig, payload: T) -> Self {
        let content_sha256 = json_hash(kind, version, config, &payload);
        Self { kind: kind.into(), version, config: config.clone(), content_sha256, payload }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("artifact payloads serialize");
        out.push(b'\n');
        out
    }
}

/// Reads an envelope, checking kind, version and hash.
pub fn read_envelope<T: Serialize + DeserializeOwned>(path: &Path, kind: &str, version: u32) -> Result<Envelope<T>> {
    let bad = |reason: String| CliError::Artifact { path: path.to_path_buf(), reason };
    let bytes = std::fs::read(path).map_err(|e| bad(e.to_string()))?;
    let env: Envelope<T> = serde_json::from_slice(&bytes).map_err(|e| bad(e.to_string()))?;
    if env.kind != kind {
        return Err(bad(format!("kind {:?}, expected {kind:?}", env.kind)));
    }
    if env.version != version {
        return Err(bad(format!("version {}, expected {version}", env.version)));
    }
    let hash = json_hash(&env.kind, env.version, &env.config, &env.payload);
    if hash != env.content_sha256 {
        return Err(bad(format!("content hash {} does not match {}", env.content_sha256, hash)));
    }
    Ok(env)
}

/// A CSV body with its `#` header lines.
pub struct CsvArtifact {
    pub bytes: Vec<u8>,
    pub content_sha256: String,
}

/// Renders `rows` as CSV. The hash covers the config JSON, the
/// `extra` comment lines and the CSV body.
pub fn csv_artifact<R: Serialize>(config: &RunConfig, extra: &[String], rows: &[R]) -> Result<CsvArtifact> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Config(format!("csv: {e}")))?;
    }
    let body = w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))?;
    let config_json = serde_json::to_string(config).expect("config serializes");
    let mut h = Sha256::new();
    h.update(config_json.as_bytes());
    for line in extra {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    h.update(&body);
    let content_sha256 = hex::encode(h.finalize());
    let mut bytes = Vec::new();
    writeln!(bytes, "# config: {config_json}").unwrap();
    writeln!(bytes, "# content_sha256: {content_sha256}").unwrap();
    for line in extra {
        writeln!(bytes, "# {line}").unwrap();
    }
    bytes.extend_from_slice(&body);
    Ok(CsvArtifact { bytes, content_sha256 })
}

/// Strips the `#` header of a CSV artifact and checks its hash.
pub fn read_csv_body(path: &Path) -> Result<(String, Vec<u8>)> {
    let bad = |reason: String| CliError::Artifact { path: path.to_path_buf(), reason };
    let bytes = std::fs::read(path).map_err(|e| bad(e.to_string()))?;
    let mut rest: &[u8] = &bytes;
    let mut config = None;
    let mut hash = None;
    let mut extra = Vec::new();
    while rest.first() == Some(&b'#') {
        let end = rest.iter().position(|&b| b == b'\n').ok_or_else(|| bad("unterminated header".into()))?;
        let line = std::str::from_utf8(&rest[2.min(end)..end]).map_err(|e| bad(e.to_string()))?;
        if let Some(c) = line.strip_prefix("config: ") {
            config = Some(c.to_string());
        } else if let Some(c) = line.strip_prefix("content_sha256: ") {
            hash = Some(c.to_string());
        } else {
            extra.push(line.to_string());
        }
        rest = &rest[end + 1..];
    }
    let (config, hash) = config.zip(hash).ok_or_else(|| bad("missing config or hash header".into()))?;
    let mut h = Sha256::new();
    h.update(config.as_bytes());
    for line in &extra {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    h.update(rest);
    if hex::encode(h.finalize()) != hash {
        return Err(bad("content hash mismatch".into()));
    }
    Ok((config, rest.to_vec()))
}

/// Files of one run, written together once every payload is ready.
#[derive(Default)]
pub struct Batch {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Batch {
    pub fn add(&mut self, name: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn names(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Writes every file under `dir`, each through a temporary sibling and
    /// a rename. Returns the final paths.
    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let mut staged = Vec::new();
        for (name, bytes) in &self.files {
            let target = dir.join(name);
            let tmp = dir.join(format!(
                ".{}.tmp-{}",
                name.file_name().and_then(|s| s.to_str()).unwrap_or("artifact"),
                std::process::id()
            ));
            let written = std::fs::File::create(&tmp).and_then(|mut f| {
                f.write_all(bytes)?;
                f.sync_all()
            });
            if let Err(e) = written {
                let _ = std::fs::remove_file(&tmp);
                for (t, _) in &staged {
                    let _ = std::fs::remove_file(t);
                }
                return Err(io(&target)(e));
            }
            staged.push((tmp, target));
        }
        let mut out = Vec::new();
        for (tmp, target) in staged {
            std::fs::rename(&tmp, &target).map_err(io(&target))?;
            out.push(target);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::default();
        let env = Envelope::new("demo", 1, &cfg, vec![0.1f64, 1.0 / 3.0, 2.5e-300]);
        let mut batch = Batch::default();
        batch.add("demo.json", env.to_bytes());
        let paths = batch.commit(dir.path()).unwrap();
        let back: Envelope<Vec<f64>> = read_envelope(&paths[0], "demo", 1).unwrap();
        assert_eq!(back.payload, env.payload);
        assert!(read_envelope::<Vec<f64>>(&paths[0], "demo", 2).is_err());
        let text = std::fs::read_to_string(&paths[0]).unwrap().replace("2.5e-300", "2.6e-300");
        std::fs::write(&paths[0], text).unwrap();
        assert!(read_envelope::<Vec<f64>>(&paths[0], "demo", 1).is_err());
        // no temporaries left behind
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn csv_header_and_hash() {
        #[derive(Serialize)]
        struct Row {
            a: u32,
            b: f64,
        }
        let cfg = RunConfig::default();
        let art = csv_artifact(&cfg, &["note: x".into()], &[Row { a: 1, b: 0.5 }, Row { a: 2, b: -1.0 }]).unwrap();
        let text = String::from_utf8(art.bytes.clone()).unwrap();
        assert!(text.starts_with("# config: {"));
        assert!(text.contains("\na,b\n1,0.5\n2,-1.0\n"));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(&p, &art.bytes).unwrap();
        let (_, body) = read_csv_body(&p).unwrap();
        assert_eq!(body, b"a,b\n1,0.5\n2,-1.0\n");
        std::fs::write(&p, text.replace("1,0.5", "1,0.6")).unwrap();
        assert!(read_csv_body(&p).is_err());
    }
}
