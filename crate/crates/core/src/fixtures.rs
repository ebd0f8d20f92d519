//! Built-in catalog: the tripartite inequality `I10` (2x2x2 settings, local
//! range `[0, 8]`), its homogenization `H10` (3x3x3, range `[-4, 4]`) as
//! entered by hand, and the bipartite CHSH expression.
//!
//! In `H10` the added setting of each party is stored as setting `1`, so the
//! original settings appear shifted up by one.

use crate::inequality::{BellInequality, Catalog};

pub const BUILTIN_CATALOG_JSON: &str = include_str!("../data/builtin_catalog.json");

pub fn builtin_catalog() -> Catalog {
    Catalog::parse(BUILTIN_CATALOG_JSON).expect("built-in catalog is valid")
}

fn builtin(name: &str) -> BellInequality {
    builtin_catalog().get(name).expect("built-in entry").clone()
}

pub fn i10() -> BellInequality {
    builtin("I10")
}

pub fn h10() -> BellInequality {
    builtin("H10")
}

pub fn chsh() -> BellInequality {
    builtin("CHSH")
}
