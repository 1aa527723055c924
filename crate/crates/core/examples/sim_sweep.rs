//! FER/SER sweep of the extended (8,4) code over GF(8), printed as CSV.

use std::sync::Arc;

use rspolar::osd::OsdParams;
use rspolar::sim::{simulate, write_csv, RsSimulator, SimConfig};
use rspolar::{FieldTable, RsCode};

fn main() -> rspolar::Result<()> {
    let code = RsCode::extended(Arc::new(FieldTable::new(3)?), 4)?;
    let sim = RsSimulator::new(code, OsdParams::new(1, 4))?;
    let config = SimConfig::new(vec![1.0, 2.0, 3.0, 4.0], 20_000, 100, 1);
    let points = simulate(&sim, &config)?;
    write_csv(std::io::stdout().lock(), &points, None)?;
    Ok(())
}
