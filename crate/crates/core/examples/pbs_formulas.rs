//! Imperfect-PBS fidelity: the two-leaf formula and its power law.
use microcluster::optics::NoiseModel;
use microcluster::protocols::{microcluster_fidelity, reference_formula, Formula, Settings};

fn main() -> microcluster::Result<()> {
    let noise = NoiseModel::symbolic_alpha_only();
    for n in 2..=4 {
        let sim = microcluster_fidelity(n, &noise, &Settings::branches())?;
        let formula = if n == 2 { Formula::Eq2 } else { Formula::Eq3 { leaves: n } };
        let reference = reference_formula(formula)?;
        println!("n={n}: {sim}");
        println!("      matches {formula}: {}", sim.equivalent(&reference));
    }
    Ok(())
}
