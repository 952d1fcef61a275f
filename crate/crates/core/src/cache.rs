//! Plain-text on-disk caches for class polynomials and modular polynomials.
//!
//! Files start with the line `format=1`. Writes go to a temporary file that
//! is renamed into place, so readers never see a partial file; a lock file
//! admits a single writer at a time.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Poly};

const HEADER: &str = "format=1";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hilbert_path(&self, d: &BigInt) -> PathBuf {
        self.dir.join(format!("hd_{}.txt", d.magnitude()))
    }

    pub fn phi_path(&self, m: u64) -> PathBuf {
        self.dir.join(format!("phi_{m}.txt"))
    }

    /// Coefficients in degree-descending order.
    pub fn load_hilbert(&self, d: &BigInt) -> Result<Option<Poly>> {
        let Some(body) = read(&self.hilbert_path(d))? else { return Ok(None) };
        let mut coeffs = body
            .iter()
            .map(|l| l.trim().parse::<BigInt>().map_err(|_| corrupt(&self.hilbert_path(d))))
            .collect::<Result<Vec<_>>>()?;
        coeffs.reverse();
        Ok(Some(Poly::new(coeffs)))
    }

    pub fn store_hilbert(&self, d: &BigInt, p: &Poly) -> Result<()> {
        let mut s = String::new();
        for c in p.coeffs().iter().rev() {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        write_atomic(&self.dir, &self.hilbert_path(d), &s)
    }

    /// Φ_m from its `i j c` lines with i ≥ j, filled in by symmetry.
    pub fn load_phi(&self, m: u64) -> Result<Option<BiPoly>> {
        let path = self.phi_path(m);
        let Some(body) = read(&path)? else { return Ok(None) };
        let mut terms = Vec::new();
        for line in body {
            let mut it = line.split_whitespace();
            let (Some(i), Some(j), Some(c), None) = (it.next(), it.next(), it.next(), it.next()) else {
                return Err(corrupt(&path));
            };
            let i: usize = i.parse().map_err(|_| corrupt(&path))?;
            let j: usize = j.parse().map_err(|_| corrupt(&path))?;
            let c: BigInt = c.parse().map_err(|_| corrupt(&path))?;
            if i < j {
                return Err(corrupt(&path));
            }
            if i != j {
                terms.push((j, i, c.clone()));
            }
            terms.push((i, j, c));
        }
        Ok(Some(BiPoly::from_terms(terms)))
    }

    pub fn store_phi(&self, m: u64, f: &BiPoly) -> Result<()> {
        let mut terms: Vec<_> = f.terms().into_iter().filter(|(i, j, _)| i >= j).collect();
        terms.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut s = String::new();
        for (i, j, c) in terms {
            s.push_str(&format!("{i} {j} {c}\n"));
        }
        write_atomic(&self.dir, &self.phi_path(m), &s)
    }
}

fn corrupt(path: &Path) -> Error {
    Error::Io(format!("malformed cache file {}", path.display()))
}

fn read(path: &Path) -> Result<Option<Vec<String>>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(corrupt(path));
    }
    Ok(Some(lines.filter(|l| !l.trim().is_empty()).map(str::to_string).collect()))
}

/// Writes `body` under the header. If another writer holds the lock the
/// write is skipped: the cache is only an accelerator.
fn write_atomic(dir: &Path, path: &Path, body: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let lock = dir.join(".lock");
    let guard = match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
        Ok(_) => LockGuard(lock),
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => return Ok(()),
        Err(e) => return Err(e.into()),
    };
    let tmp = dir.join(format!(".tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(HEADER.as_bytes())?;
        f.write_all(b"\n")?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    drop(guard);
    Ok(())
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let d = BigInt::from(-23);
        assert_eq!(c.load_hilbert(&d).unwrap(), None);
        let p = Poly::from_i64(&[-12771880859375, 5151296875, -3491750, 1]);
        c.store_hilbert(&d, &p).unwrap();
        assert_eq!(c.load_hilbert(&d).unwrap(), Some(p));
        let text = fs::read_to_string(c.hilbert_path(&d)).unwrap();
        assert!(text.starts_with("format=1\n1\n-3491750\n"));

        let f = BiPoly::from_terms([(2, 0, BigInt::from(1)), (1, 1, BigInt::from(-5)), (0, 2, BigInt::from(1)), (1, 0, BigInt::from(3)), (0, 1, BigInt::from(3))]);
        c.store_phi(7, &f).unwrap();
        assert_eq!(c.load_phi(7).unwrap(), Some(f));
        let text = fs::read_to_string(c.phi_path(7)).unwrap();
        assert_eq!(text, "format=1\n1 0 3\n1 1 -5\n2 0 1\n");
    }

    #[test]
    fn rejects_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        fs::write(c.phi_path(2), "junk\n").unwrap();
        assert!(c.load_phi(2).is_err());
    }
}
