//! Check the byproduct corrections on every zero-noise measurement branch.
use microcluster::optics::{calibrate_from, verify_byproducts, ByproductTable};

fn main() -> microcluster::Result<()> {
    let table = ByproductTable::default();
    println!("default table: {} branches verified", verify_byproducts(&table, 3)?);
    let cal = calibrate_from(table, 3)?;
    println!("calibration searched {:?}; {} branches", cal.searched, cal.branches);
    Ok(())
}
