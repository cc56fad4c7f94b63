//! Bundled example teams.

use std::sync::Arc;

use crate::interpretation::Universe;
use crate::kteam::KTeam;
use crate::semiring::SemiringSpec;

pub const EXAMPLE_TEAM_CSV: &str = include_str!("../data/example_team.csv");
pub const EXAMPLE_MULTITEAM_CSV: &str = include_str!("../data/example_multiteam.csv");
pub const EXAMPLE_PROBABILISTIC_CSV: &str = include_str!("../data/example_probabilistic.csv");
pub const ZMOD4_MIXING_CSV: &str = include_str!("../data/zmod4_mixing.csv");

fn ab() -> Arc<Universe> {
    Arc::new(Universe::new(["a", "b"]).unwrap())
}

fn load(text: &str, universe: Arc<Universe>, spec: SemiringSpec) -> KTeam {
    KTeam::read_csv(text, Some(universe), &spec).expect("bundled team parses")
}

/// Boolean team over `{x, y}` with support `{aa, ab}`.
pub fn example_team() -> KTeam {
    load(EXAMPLE_TEAM_CSV, ab(), SemiringSpec::Boolean)
}

/// Multiteam `{aa ↦ 2, bb ↦ 5}`.
pub fn example_multiteam() -> KTeam {
    load(EXAMPLE_MULTITEAM_CSV, ab(), SemiringSpec::Natural)
}

/// Probabilistic team `{aa ↦ 1/4, ab ↦ 3/4}`.
pub fn example_probabilistic() -> KTeam {
    load(EXAMPLE_PROBABILISTIC_CSV, ab(), SemiringSpec::Rational)
}

/// The universe of the mod-4 mixing counterexample.
pub fn zmod4_mixing_universe() -> Arc<Universe> {
    Arc::new(Universe::new(["a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3", "c0", "c1"]).unwrap())
}

/// Eight-row team over `Z_4` that satisfies `x ⊥ y` and `xy ⊥ z` but not
/// `x ⊥ yz`.
pub fn zmod4_mixing_team() -> KTeam {
    load(
        ZMOD4_MIXING_CSV,
        zmod4_mixing_universe(),
        SemiringSpec::int_mod(4).unwrap(),
    )
}
