//! Monte-Carlo construction of a (64,32) polar code with the 4x4 RS kernel
//! over GF(4) at 2 dB.

use std::sync::Arc;

use rspolar::channel::ChannelModel;
use rspolar::construct::{mc_construct, write_frozen};
use rspolar::polar::{Kernel, ScParams};
use rspolar::FieldTable;

fn main() -> rspolar::Result<()> {
    let kernel = Arc::new(Kernel::reed_solomon(Arc::new(FieldTable::new(2)?), 4)?);
    let channel = ChannelModel::awgn(2.0, 0.5, 2, 7)?;
    let res = mc_construct(kernel, 3, 32, &channel, 2000, ScParams::order(2, 4))?;
    for (i, c) in res.error_counts.iter().enumerate() {
        println!(
            "input {i:2}: error rate {:.4}",
            *c as f64 / res.frames as f64
        );
    }
    println!("frozen set:");
    write_frozen(std::io::stdout().lock(), &res.frozen)?;
    Ok(())
}
