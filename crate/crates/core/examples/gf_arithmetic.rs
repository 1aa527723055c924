//! Log/antilog arithmetic in GF(8).

use rspolar::FieldTable;

fn main() -> rspolar::Result<()> {
    let f = FieldTable::new(3)?;
    println!(
        "GF({}) with primitive polynomial {:#b}",
        f.q(),
        f.primitive_poly()
    );
    for e in 0..f.order() {
        let a = f.exp(e as i64);
        println!("alpha^{e} = {a} (binary {a:03b}), inverse {}", f.inv(a)?);
    }
    let (a, b) = (3, 6);
    println!("{a} + {b} = {}", f.add(a, b));
    println!("{a} * {b} = {}", f.mul(a, b));
    println!("{a} / {b} = {}", f.div(a, b)?);
    println!(
        "p(x) = 1 + x + x^2 at alpha: {}",
        f.eval_poly(&[1, 1, 1], f.alpha())
    );
    Ok(())
}
