//! Reference spaces used throughout the lab and its test suites.

use std::sync::Arc;

use crate::carrier::Carrier;
use crate::convergence::Convergence;

/// Carrier {a,b}.
pub fn carrier_ab() -> Arc<Carrier> {
    Carrier::new(["a", "b"]).expect("fixture carrier")
}

/// Carrier {a,b,c}.
pub fn carrier_abc() -> Arc<Carrier> {
    Carrier::new(["a", "b", "c"]).expect("fixture carrier")
}

/// Discrete topology on {a,b}: the finest convergence.
pub fn disc2() -> Convergence {
    Convergence::discrete(carrier_ab())
}

/// Chaotic topology on {a,b}: the coarsest convergence.
pub fn chaos2() -> Convergence {
    Convergence::chaotic(carrier_ab())
}

/// Sierpiński topology on {0,1}, closed sets ∅, {0}, {0,1}.
///
/// Derived limit table: lim{0}↑ = {0}, lim{1}↑ = {0,1}, lim{0,1}↑ = {0}.
pub fn sier() -> Convergence {
    let c = Carrier::new(["0", "1"]).expect("fixture carrier");
    let opens = [0b00, 0b10, 0b11];
    let s = Convergence::from_open_sets(c, &opens);
    debug_assert_eq!(s.rows(), &[0b01, 0b11, 0b01]);
    s
}

/// Bourdaud pretopology on {0,1,2}: lim{0}↑ = {0,1}, lim{1}↑ = lim{2}↑ =
/// {0,1,2}, larger kernels completed pretopologically.
pub fn bour() -> Convergence {
    let c = Carrier::new(["0", "1", "2"]).expect("fixture carrier");
    // Vicinity kernels dual to the singleton rows above.
    let vicinities = [0b001, 0b111, 0b111];
    let b = Convergence::pretopology_from_vicinities(c, &vicinities);
    debug_assert_eq!(b.lim(0b001), 0b011);
    debug_assert_eq!(b.lim(0b010), 0b111);
    debug_assert_eq!(b.lim(0b100), 0b111);
    b
}

/// A convergence on {a,b,c} that is not a pseudotopology: singleton kernels
/// converge as below, every larger kernel converges nowhere.
pub fn np3() -> Convergence {
    let c = carrier_abc();
    let rows = c
        .kernels()
        .map(|k| match k {
            0b001 => 0b001, // lim{a} = {a}
            0b010 => 0b011, // lim{b} = {a,b}
            0b100 => 0b101, // lim{c} = {a,c}
            _ => 0,
        })
        .collect();
    Convergence::from_rows(c, rows).expect("fixture table")
}

/// Pretopology on {a,b,c} with vicinity kernels V(a) = {a,b}, V(b) = {b,c},
/// V(c) = {c}; a pretopology that is not a topology (its adherence is not
/// idempotent at {c}).
pub fn pt3() -> Convergence {
    Convergence::pretopology_from_vicinities(carrier_abc(), &[0b011, 0b110, 0b100])
}

/// All six fixture spaces.
pub fn all() -> Vec<Convergence> {
    vec![disc2(), chaos2(), sier(), bour(), np3(), pt3()]
}
