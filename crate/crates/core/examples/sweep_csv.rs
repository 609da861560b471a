//! Pair fidelity over a grid of Pauli rates, written as CSV to stdout.
use microcluster::cli::emit_csv;
use microcluster::optics::ErrorPlacementPolicy;
use microcluster::protocols::{sweep_records, PGrid};

fn main() -> microcluster::Result<()> {
    let grid: PGrid = "0:0.04:5".parse()?;
    let records = sweep_records(0.01, &grid, &[2, 3], &[1, 2, 3], ErrorPlacementPolicy::default())?;
    emit_csv(&records, std::io::stdout().lock())?;
    Ok(())
}
