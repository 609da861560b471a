//! Exact and float pipelines on the same rational point.
use microcluster::algebra::{BigRational, Complex64, GaussianRational};
use microcluster::optics::{ErrorPlacementPolicy, NoiseModel};
use microcluster::protocols::{fuse_pair, microcluster_fidelity, PairFusionSpec, Settings};
use microcluster::register::Backend;

fn main() -> microcluster::Result<()> {
    let rates = [(3, 100), (1, 100), (2, 100), (1, 50)];
    let exact = {
        let r = |(n, d): (i64, i64)| GaussianRational::real(BigRational::new(n.into(), d.into()));
        NoiseModel::new(r(rates[0]), r(rates[1]), r(rates[2]), r(rates[3]))
    };
    let float = {
        let r = |(n, d): (i64, i64)| Complex64::new(n as f64 / d as f64, 0.0);
        NoiseModel::new(r(rates[0]), r(rates[1]), r(rates[2]), r(rates[3]))
    };
    for n in 1..=4 {
        let e = microcluster_fidelity(n, &exact, &Settings::branches())?.to_f64().0;
        let d = microcluster_fidelity(n, &exact, &Settings::branches().with_backend(Backend::Dense))?.to_f64().0;
        let f = microcluster_fidelity(n, &float, &Settings::dense())?;
        println!("microcluster n={n}: branches {e:.15} dense {d:.15} float {f:.15}");
    }
    let policy = ErrorPlacementPolicy::default();
    let e = fuse_pair(&PairFusionSpec::new(3, 2, exact, policy)?, &Settings::dense())?.fidelity.to_f64().0;
    let f = fuse_pair(&PairFusionSpec::new(3, 2, float, policy)?, &Settings::dense())?.fidelity;
    println!("pair (3,2): exact {e:.15} float {f:.15} diff {:.1e}", (e - f).abs());
    Ok(())
}
