//! The pilot stages q → q̄ → p for a small layout, and the marker scan.
//!
//!     cargo run --example pilot_structure

use tornpaper::constrained::{find_zero_runs, PilotLayout, PilotSequence};

fn main() {
    let layout = PilotLayout::new(4, 12, 4).unwrap();
    let pilot = PilotSequence::build(layout).unwrap();
    println!("q  ({:>2} bits, De Bruijn order {}): {}", pilot.q().len(), layout.window_order(), pilot.q());
    println!("q̄  ({:>2} bits): {}", pilot.q_bar().len(), pilot.q_bar());
    println!("p  ({:>2} bits): {}", pilot.p().len(), pilot.p());
    println!("β-zero windows: {:?}", find_zero_runs(pilot.p(), layout.beta));
    println!("marker slots:   {:?}", pilot.marker_slots().collect::<Vec<_>>());
}
