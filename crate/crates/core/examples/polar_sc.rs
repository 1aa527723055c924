//! Encodes a (64,32) polar code with the 8x8 RS kernel over GF(8) and
//! decodes it with approximate and exact successive cancellation.

use std::sync::Arc;

use rspolar::channel::ChannelModel;
use rspolar::polar::{Kernel, PolarCode, ScParams};
use rspolar::FieldTable;

fn main() -> rspolar::Result<()> {
    let kernel = Arc::new(Kernel::reed_solomon(Arc::new(FieldTable::new(3)?), 8)?);
    println!("kernel rows:");
    for row in kernel.rows() {
        println!("  {row:?}");
    }
    // least reliable inputs come first in the natural order
    let frozen: Vec<usize> = (0..32).collect();
    let code = PolarCode::new(kernel, 2, &frozen)?;
    let info: Vec<u8> = (0..code.k()).map(|i| (i % 8) as u8).collect();
    let u = code.embed(&info)?;
    let cw = code.encode(&u)?;

    let channel = ChannelModel::awgn(3.0, code.rate(), 3, 5)?;
    let table = channel.symbol_llrs(&channel.transmit(&cw, 0))?;
    for t in 0..=2 {
        let out = code.sc_decode_approx(&table, ScParams::order(t, 8))?;
        let errors = out.u_hat.iter().zip(&u).filter(|(a, b)| a != b).count();
        println!(
            "approximate SC, t={t}: {errors} input errors, {} sum+cmp ops",
            out.ops.sum_and_compare()
        );
    }

    let small = PolarCode::new(
        Arc::new(Kernel::reed_solomon(Arc::new(FieldTable::new(2)?), 4)?),
        2,
        &[0, 1, 2, 4, 8],
    )?;
    let u = small.embed(&vec![1; small.k()])?;
    let channel = ChannelModel::awgn(2.0, small.rate(), 2, 5)?;
    let table = channel.symbol_llrs(&channel.transmit(&small.encode(&u)?, 0))?;
    let exact = small.sc_decode_exact(&table)?;
    println!(
        "exact SC on (16,{}) over GF(4): decoded correctly: {}",
        small.k(),
        exact.u_hat == u
    );
    Ok(())
}
