//! The exponentiation identity behind the Chiodo formula, and a broken variant.
use drx::pixton::verify_grr_exponentiation;

fn main() {
    let good = verify_grr_exponentiation(6, 6, false);
    let bad = verify_grr_exponentiation(6, 6, true);
    println!("identity: {}, with a flipped sign: {}", good.passed(), bad.passed());
}
