//! Artifact writing, the content-hash cache and the timing sidecar.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cli::Common;

/// Everything a command produces; cached as a unit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutput {
    pub result: Value,
    /// Extra files, `(name, contents)`, written next to the main artifact.
    pub files: Vec<(String, String)>,
    pub passed: bool,
    pub summary: Vec<String>,
}

/// Keys that never change the result and so stay out of the cache key.
const VOLATILE: [&str; 4] = ["out", "workers", "cache_dir", "no_cache"];

pub fn config_hash(config: &Value) -> String {
    let mut stable = config.clone();
    if let Some(common) = stable.get_mut("common").and_then(Value::as_object_mut) {
        for key in VOLATILE {
            common.remove(key);
        }
    }
    // serde_json maps are sorted, so this rendering is canonical
    let bytes = serde_json::to_vec(&stable).expect("config is plain JSON");
    hex::encode(Sha256::digest(&bytes))
}

fn cache_dir(common: &Common) -> Option<PathBuf> {
    if common.no_cache {
        return None;
    }
    common
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("SUMLAB_CACHE_DIR").map(PathBuf::from))
}

fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

pub struct Outcome {
    pub output: RunOutput,
    pub artifact: PathBuf,
}

/// Runs `work` unless the cache has a result for `config`, then writes
/// `<stem>.json` (config echo plus result), the extra files, and
/// `<stem>.run.json` with timings.
pub fn execute(
    stem: &str,
    common: &Common,
    config: Value,
    work: impl FnOnce() -> sumlab::Result<RunOutput>,
) -> sumlab::Result<Outcome> {
    let started = unix_ms();
    let clock = Instant::now();
    let hash = config_hash(&config);
    let cache_file = cache_dir(common).map(|d| d.join(format!("{hash}.json")));
    let cached = cache_file
        .as_ref()
        .and_then(|p| fs::read(p).ok())
        .and_then(|b| serde_json::from_slice::<RunOutput>(&b).ok());
    let cache_state = match (&cache_file, &cached) {
        (None, _) => "off",
        (Some(_), Some(_)) => "hit",
        (Some(_), None) => "miss",
    };
    let output = match cached {
        Some(o) => o,
        None => {
            let o = work()?;
            if let Some(p) = &cache_file {
                if let Some(dir) = p.parent() {
                    fs::create_dir_all(dir)?;
                }
                fs::write(p, serde_json::to_vec(&o)?)?;
            }
            o
        }
    };

    fs::create_dir_all(&common.out)?;
    let artifact = common.out.join(format!("{stem}.json"));
    let body = json!({ "config": config, "config_hash": hash, "passed": output.passed, "result": output.result });
    write_json(&artifact, &body)?;
    for (name, contents) in &output.files {
        fs::write(common.out.join(name), contents)?;
    }
    let sidecar = json!({
        "started_unix_ms": started as u64,
        "finished_unix_ms": unix_ms() as u64,
        "elapsed_ms": clock.elapsed().as_millis() as u64,
        "cache": cache_state,
        "config_hash": hash,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_json(&common.out.join(format!("{stem}.run.json")), &sidecar)?;
    Ok(Outcome { output, artifact })
}

fn write_json(path: &Path, v: &Value) -> sumlab::Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Renders rows as CSV text with the given header.
pub fn csv_text<I, R>(header: &[&str], rows: I) -> sumlab::Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| sumlab::Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| sumlab::Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
