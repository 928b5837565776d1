//! Fault injection for mutation testing of the verification suites.
//!
//! Faults are per-thread, so concurrently running tests do not see each
//! other's injections.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Rounds the big-lattice exponent down instead of up.
    K1OffByOne,
    /// Adds a slack of one to the dominance comparator.
    Dominance,
    /// Shifts the first minor-valuation partial sum by one.
    MinorPartialSums,
}

impl Fault {
    pub fn parse(s: &str) -> Option<Fault> {
        match s {
            "k1" => Some(Fault::K1OffByOne),
            "dominance" => Some(Fault::Dominance),
            "minors" => Some(Fault::MinorPartialSums),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Fault::K1OffByOne => 1,
            Fault::Dominance => 2,
            Fault::MinorPartialSums => 4,
        }
    }
}

thread_local! {
    static ACTIVE: Cell<u8> = const { Cell::new(0) };
}

pub fn active(f: Fault) -> bool {
    ACTIVE.with(|a| a.get() & f.bit() != 0)
}

/// Enables `f` on this thread until the guard is dropped.
pub fn inject(f: Fault) -> FaultGuard {
    let prev = ACTIVE.with(|a| {
        let p = a.get();
        a.set(p | f.bit());
        p
    });
    FaultGuard { prev }
}

pub struct FaultGuard {
    prev: u8,
}

impl Drop for FaultGuard {
    fn drop(&mut self) {
        ACTIVE.with(|a| a.set(self.prev));
    }
}
