//! ‖B f_eps‖/‖f_eps‖ on the Hartogs triangle as eps → 0.

use bergman::hartogs::blowup_table;

fn main() -> bergman::Result<()> {
    let eps: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
    let table = blowup_table(&eps)?;
    print!("{}", table.to_csv());
    println!("log-log slope {:.4}", table.slope);
    Ok(())
}
