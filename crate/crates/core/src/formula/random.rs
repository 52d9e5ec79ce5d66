use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Formula, Language};

/// Seeded random formula over `atoms` with depth at most `max_depth`.
pub fn random_formula(seed: u64, max_depth: usize, atoms: &[&str], lang: Language) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_formula_with(&mut rng, max_depth, atoms, lang)
}

pub fn random_formula_with<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, atoms: &[&str], lang: Language) -> Formula {
    assert!(!atoms.is_empty(), "random formulas need at least one atom");
    if max_depth == 0 || rng.gen_bool(0.25) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let choices = if lang.allows_future() { 6 } else { 5 };
    let d = max_depth - 1;
    match rng.gen_range(0..choices) {
        0 => random_formula_with(rng, d, atoms, lang).not(),
        1 => {
            let a = random_formula_with(rng, d, atoms, lang);
            a.and(random_formula_with(rng, d, atoms, lang))
        }
        2 => random_formula_with(rng, d, atoms, lang).always_future(),
        3 => random_formula_with(rng, d, atoms, lang).always_past(),
        4 => random_formula_with(rng, d, atoms, lang).necessarily(),
        _ => random_formula_with(rng, d, atoms, lang).weak_future(),
    }
}
