#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn simgroup<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_simgroup"))
        .args(args)
        .output()
        .expect("spawn simgroup");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

/// Every file under `dir`, sorted by name, with its bytes.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

/// A few random sinusoids over a random linear trend.
pub fn smooth(rng: &mut rand_chacha::ChaCha8Rng, len: usize) -> Vec<f64> {
    use rand::Rng;
    use std::f64::consts::PI;
    let tones: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (
                rng.gen_range(0.1..3.0),
                rng.gen_range(1.0..len as f64 / 6.0),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let slope = rng.gen_range(-0.02..0.02);
    (0..len)
        .map(|t| {
            let t = t as f64;
            slope * t
                + tones
                    .iter()
                    .map(|(a, cycles, phase)| a * (2.0 * PI * cycles * t / len as f64 + phase).sin())
                    .sum::<f64>()
        })
        .collect()
}
