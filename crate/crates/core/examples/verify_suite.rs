//! Run the verification suite, or selected criteria.
//!
//! `cargo run --release --example verify_suite -- full 5 12`

use shapeflow::verify::{self, Level};

fn main() -> shapeflow::Result<()> {
    let mut level = Level::Quick;
    let mut ids = Vec::new();
    for a in std::env::args().skip(1) {
        match a.as_str() {
            "quick" => level = Level::Quick,
            "full" => level = Level::Full,
            n => ids.extend(n.parse::<u32>().ok()),
        }
    }
    if ids.is_empty() {
        ids = (1..=verify::COUNT).collect();
    }
    for id in ids {
        let c = verify::criterion(id, level)?;
        println!("{}  ({:.1} s)", c.line(), c.seconds);
    }
    Ok(())
}
