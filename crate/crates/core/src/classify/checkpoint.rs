//! Line-oriented record of finished work units.
//!
//! ```text
//! covarray-checkpoint 1
//! params <run header>
//! rep <unit> <hex row words separated by ':'>
//! done <unit> <reps> <nodes> <canon> <rejected> <duplicates> <pruned>
//! ```
//!
//! A unit counts as finished only once its `done` line is present; `rep`
//! lines of an unfinished unit (a run cut off mid-write) are ignored.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::search::SearchStats;
use crate::error::{Error, Result};

/// Finished units: their canonical keys and statistics.
type Completed = BTreeMap<usize, (Vec<Vec<u64>>, SearchStats)>;

const MAGIC: &str = "covarray-checkpoint 1";

pub(crate) struct Checkpoint {
    path: PathBuf,
    file: File,
    completed: Completed,
}

impl Checkpoint {
    /// Opens or creates the file. An existing file must carry the same run
    /// header.
    pub(crate) fn open(path: &Path, header: &str) -> Result<Self> {
        let params = format!("params {header}");
        let mut completed = BTreeMap::new();
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        if !fresh {
            completed = read(path, &params)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if fresh {
            writeln!(file, "{MAGIC}\n{params}")?;
        } else if !std::fs::read(path)?.ends_with(b"\n") {
            // Terminate a torn line so new records start cleanly.
            writeln!(file)?;
        }
        file.flush()?;
        Ok(Checkpoint {
            path: path.to_path_buf(),
            file,
            completed,
        })
    }

    pub(crate) fn completed(&self) -> impl Iterator<Item = (usize, (&Vec<Vec<u64>>, &SearchStats))> {
        self.completed.iter().map(|(&i, (k, s))| (i, (k, s)))
    }

    pub(crate) fn record(&mut self, unit: usize, keys: &[Vec<u64>], st: &SearchStats) -> Result<()> {
        let mut buf = String::new();
        for key in keys {
            let words: Vec<String> = key.iter().map(|w| format!("{w:x}")).collect();
            buf.push_str(&format!("rep {unit} {}\n", words.join(":")));
        }
        buf.push_str(&format!(
            "done {unit} {} {} {} {} {} {}\n",
            keys.len(),
            st.nodes,
            st.canon_calls,
            st.rejected,
            st.duplicates,
            st.pruned
        ));
        self.file
            .write_all(buf.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", self.path.display())))?;
        self.completed.insert(unit, (keys.to_vec(), *st));
        Ok(())
    }
}

fn read(path: &Path, params: &str) -> Result<Completed> {
    let bad = |line: usize, what: &str| Error::Checkpoint(format!("{}:{line}: {what}", path.display()));
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();
    match lines.next() {
        Some((_, Ok(l))) if l == MAGIC => {}
        _ => return Err(bad(1, "not a checkpoint file")),
    }
    match lines.next() {
        Some((_, Ok(l))) if l == params => {}
        _ => return Err(bad(2, "checkpoint belongs to a different run")),
    }
    let mut pending: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
    let mut done = BTreeMap::new();
    for (i, line) in lines {
        let line = line?;
        let no = i + 1;
        let mut parts = line.split_whitespace();
        let tag = parts.next();
        let unit: usize = match parts.next().map(str::parse) {
            Some(Ok(u)) => u,
            // A torn final line is expected after a crash.
            _ => continue,
        };
        match tag {
            Some("rep") => {
                let Some(words) = parts.next() else { continue };
                let key: std::result::Result<Vec<u64>, _> =
                    words.split(':').map(|w| u64::from_str_radix(w, 16)).collect();
                // A malformed word can only come from a torn write; the
                // count check on `done` catches anything worse.
                if let Ok(k) = key {
                    pending.entry(unit).or_default().push(k);
                }
            }
            Some("done") => {
                let nums: std::result::Result<Vec<u64>, _> = parts.map(str::parse).collect();
                let Ok(nums) = nums else { continue };
                if nums.len() != 6 {
                    continue;
                }
                let keys = pending.remove(&unit).unwrap_or_default();
                if keys.len() as u64 != nums[0] {
                    return Err(bad(no, "representative count does not match"));
                }
                let st = SearchStats {
                    nodes: nums[1],
                    canon_calls: nums[2],
                    rejected: nums[3],
                    duplicates: nums[4],
                    pruned: nums[5],
                    ..SearchStats::default()
                };
                done.insert(unit, (keys, st));
            }
            _ => return Err(bad(no, "unknown record")),
        }
    }
    Ok(done)
}
