//! Low-order pair coefficients in alpha and p, and the policy ranking.
use microcluster::optics::ErrorPlacementPolicy;
use microcluster::protocols::{coefficient_expansion, policy_search, Settings};

fn main() -> microcluster::Result<()> {
    let settings = Settings::dense();
    for (n, k) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
        let report = coefficient_expansion(n, k, ErrorPlacementPolicy::default(), &settings)?;
        println!("{report}");
    }
    if std::env::args().any(|a| a == "--search") {
        // Takes about half a minute.
        print!("{}", policy_search(&settings)?);
    } else {
        println!("(pass --search to rank every error-placement policy)");
    }
    Ok(())
}
