//! Benchmark problems behind the [`Problem`] interface, their reference
//! fronts, and the plaintext reference-front file format.

mod front;
mod lircmop;
mod synthetic;

use std::path::{Path, PathBuf};

pub use front::{nondominated_filter, FrontSource, ReferenceFront};
pub use lircmop::LirCmop;
pub use synthetic::SpecCmop;

use crate::model::Problem;
use crate::{Error, Result};

/// Names accepted by [`by_name`], in registry order.
pub fn names() -> Vec<String> {
    let mut names = vec!["SPEC-CMOP0".to_string(), "SPEC-CMOP1".to_string()];
    names.extend((1..=14).map(|i| format!("LIR-CMOP{i}")));
    names
}

fn canonical(name: &str) -> String {
    name.chars()
        .filter(|c| *c != '-' && *c != '_')
        .collect::<String>()
        .to_ascii_uppercase()
}

/// Looks up a benchmark by name. Hyphens and case are ignored, so
/// `lircmop5` and `LIR-CMOP5` are the same problem.
pub fn by_name(name: &str) -> Result<Box<dyn Problem>> {
    let key = canonical(name);
    match key.as_str() {
        "SPECCMOP0" => return Ok(Box::new(SpecCmop::unconstrained())),
        "SPECCMOP1" => return Ok(Box::new(SpecCmop::constrained())),
        _ => {}
    }
    if let Some(id) = key.strip_prefix("LIRCMOP").and_then(|s| s.parse::<u8>().ok()) {
        if let Some(problem) = LirCmop::new(id) {
            return Ok(Box::new(problem));
        }
    }
    Err(Error::UnknownProblem {
        name: name.to_string(),
        available: names().join(", "),
    })
}

/// A problem together with where its reference front comes from.
pub struct Registered {
    pub problem: Box<dyn Problem>,
    pub reference_file: Option<PathBuf>,
}

impl Registered {
    pub fn new(name: &str) -> Result<Self> {
        Ok(Self {
            problem: by_name(name)?,
            reference_file: None,
        })
    }

    /// Registers the problem with `<dir>/<NAME>.pf` as its reference front
    /// when that file exists.
    pub fn with_reference_dir(name: &str, dir: Option<&Path>) -> Result<Self> {
        let mut registered = Self::new(name)?;
        if let Some(dir) = dir {
            let path = dir.join(reference_file_name(registered.problem.name()));
            if path.is_file() {
                registered.reference_file = Some(path);
            }
        }
        Ok(registered)
    }

    pub fn reference(&self, density: usize) -> Result<ReferenceFront> {
        match &self.reference_file {
            Some(path) => ReferenceFront::load(path),
            None => self.problem.reference_front(density),
        }
    }
}

pub fn reference_file_name(problem: &str) -> String {
    format!("{problem}.pf")
}

/// Reference set `P*` for `problem` with at least `density` points.
pub fn pf_reference_set(problem: &dyn Problem, density: usize) -> Result<ReferenceFront> {
    problem.reference_front(density)
}
