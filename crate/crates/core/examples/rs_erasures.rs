//! Encodes with the cyclic (7,5) code and fills erasures algebraically.

use std::sync::Arc;

use rspolar::{FieldTable, RsCode};

fn main() -> rspolar::Result<()> {
    let field = Arc::new(FieldTable::new(3)?);
    let code = RsCode::cyclic(field, 5, 1)?;
    let cw = code.encode(&[1, 2, 3, 4, 5])?;
    println!("(n, k, d) = ({}, {}, {})", code.n(), code.k(), code.d());
    println!("codeword:  {cw:?}");

    let mut rx: Vec<Option<u8>> = cw.iter().map(|&c| Some(c)).collect();
    rx[0] = None;
    rx[4] = None;
    println!("received:  {rx:?}");
    let filled = code.decode_erasures(&rx)?;
    println!("recovered: {filled:?}");
    assert_eq!(filled, cw);

    rx[6] = None;
    match code.decode_erasures(&rx) {
        Ok(_) => println!("three erasures unexpectedly recovered"),
        Err(e) => println!("three erasures: {e}"),
    }
    Ok(())
}
