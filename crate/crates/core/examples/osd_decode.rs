//! Soft-decision decoding of the extended (8,4) code over GF(8) at several
//! reprocessing orders.

use std::sync::Arc;

use rspolar::channel::ChannelModel;
use rspolar::osd::{self, OsdParams};
use rspolar::{FieldTable, RsCode};

fn main() -> rspolar::Result<()> {
    let code = RsCode::extended(Arc::new(FieldTable::new(3)?), 4)?;
    let cw = code.encode(&[7, 0, 3, 5])?;
    let channel = ChannelModel::awgn(1.5, 0.5, 3, 11)?;
    let table = channel.symbol_llrs(&channel.transmit(&cw, 0))?;
    println!("sent:           {cw:?}");
    println!("hard decisions: {:?}", table.hard_decisions());

    let base = osd::order0(&table, &code)?;
    println!("order 0: {:?} EW {:.3}", base.codeword, base.ew);
    for t in 1..=2 {
        let res = osd::decode(&table, &code, OsdParams::new(t, 4))?;
        println!(
            "t={t}: {:?} EW {:.3} proven ML {} ({} candidates, {} sum+cmp ops)",
            res.codeword,
            res.ew,
            res.proven_ml,
            res.ops.candidates,
            res.ops.sum_and_compare()
        );
    }
    Ok(())
}
