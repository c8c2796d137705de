//! Bundled example problems in the `.vp` problem-file format.

use crate::poly::{PolyError, ProblemFile};

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub text: &'static str,
    /// Included for experimentation; no expectation is attached.
    pub exploratory: bool,
}

impl CatalogEntry {
    pub fn problem(&self) -> Result<ProblemFile, PolyError> {
        ProblemFile::parse(self.text)
    }

    pub fn file_name(&self) -> String {
        format!("{}.vp", self.name)
    }
}

macro_rules! entry {
    ($name:literal) => {
        entry!($name, false)
    };
    ($name:literal, $exploratory:expr) => {
        CatalogEntry {
            name: $name,
            text: include_str!(concat!("../catalog/", $name, ".vp")),
            exploratory: $exploratory,
        }
    };
}

pub const ENTRIES: &[CatalogEntry] = &[
    entry!("motzkin"),
    entry!("hyperbola"),
    entry!("unattained_front"),
    entry!("attained_front"),
    entry!("motzkin_lifted"),
    entry!("open_quadrant"),
    entry!("rabier_degenerate"),
    entry!("linear_indep"),
    entry!("kurdyka", true),
    entry!("degenerate_newton"),
    entry!("convenient_quartic"),
    entry!("plane_sum"),
];

/// Looks up an entry by name, with or without the `.vp` extension.
pub fn get(name: &str) -> Option<&'static CatalogEntry> {
    let stem = name.strip_suffix(".vp").unwrap_or(name);
    ENTRIES.iter().find(|e| e.name == stem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for e in ENTRIES {
            let p = e.problem().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(p.map.ncomponents() >= 1);
        }
        assert_eq!(get("motzkin.vp").unwrap().name, "motzkin");
        assert!(get("nope").is_none());
    }
}
