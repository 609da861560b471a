//! Symbolic fidelity of freshly built microclusters, then one float point.
use microcluster::algebra::Complex64;
use microcluster::optics::NoiseModel;
use microcluster::protocols::{closed_form_table1, in_terms_of_q, microcluster_fidelity, Settings};

fn main() -> microcluster::Result<()> {
    let noise = NoiseModel::symbolic_xy_symmetric();
    for n in 1..=4 {
        let f = microcluster_fidelity(n, &noise, &Settings::branches())?;
        let in_q = in_terms_of_q(&f.as_polynomial().expect("polynomial without PBS error"));
        let agrees = in_q == closed_form_table1(n)?;
        println!("n={n}: {in_q}  closed form agrees: {agrees}");
    }

    let c = |x| Complex64::new(x, 0.0);
    let noisy = NoiseModel::new(c(0.02), c(0.01), c(0.01), c(0.01));
    let f = microcluster_fidelity(4, &noisy, &Settings::dense())?;
    println!("n=4 at alpha=0.02, p=0.01: {f:.9}");
    Ok(())
}
