//! Bond two microclusters at a chosen attempt and read off the fidelity.
use microcluster::algebra::{BigRational, Complex64, GaussianRational};
use microcluster::optics::{ErrorPlacementPolicy, NoiseModel};
use microcluster::protocols::{fuse_pair, PairFusionSpec, Settings};

fn main() -> microcluster::Result<()> {
    let r = |n: i64, d: i64| GaussianRational::real(BigRational::new(n.into(), d.into()));
    let exact = NoiseModel::new(r(1, 100), r(1, 200), r(1, 200), r(1, 100));
    for (n, k) in [(2, 1), (3, 2), (4, 4)] {
        let spec = PairFusionSpec::new(n, k, exact.clone(), ErrorPlacementPolicy::default())?;
        let out = fuse_pair(&spec, &Settings::dense())?;
        println!("({n},{k}) F = {} ~ {:.10}", out.fidelity, out.fidelity.to_f64().0);
    }

    let c = |x| Complex64::new(x, 0.0);
    let spec = PairFusionSpec::new(3, 3, NoiseModel::equiprobable(c(0.05), c(0.01)), ErrorPlacementPolicy::default())?;
    println!("(3,3) float F = {:.10}", fuse_pair(&spec, &Settings::dense())?.fidelity);

    match PairFusionSpec::new(2, 3, exact, ErrorPlacementPolicy::default()) {
        Err(e) => println!("(2,3) rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
