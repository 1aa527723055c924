//! Symbol metrics of the binary image of GF(4) symbols sent over BPSK/AWGN.

use rspolar::channel::{snr_to_sigma2, ChannelModel, Observation};

fn main() -> rspolar::Result<()> {
    println!("sigma^2 at 3 dB, rate 1/2: {:.4}", snr_to_sigma2(3.0, 0.5));
    let channel = ChannelModel::awgn(3.0, 0.5, 2, 1)?;
    let cw = [0u8, 1, 2, 3];
    let obs = channel.transmit(&cw, 0);
    if let Observation::Soft(y) = &obs {
        println!("samples (LSB first): {y:.3?}");
    }
    let table = channel.symbol_llrs(&obs)?;
    for (i, sent) in cw.iter().enumerate() {
        println!(
            "position {i}: sent {sent} hard {} metrics {:.3?}",
            table.hard_decisions()[i],
            table.row(i)
        );
    }
    println!("reliability order: {:?}", table.reliability_order());
    Ok(())
}
