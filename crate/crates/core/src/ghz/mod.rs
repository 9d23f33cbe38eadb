//! Linearizable problems, iterated GHZ, its quantum solver and the
//! promise-based problem Π built on top of badGraph.

mod hard;
mod iterghz;
mod linearizable;
mod pi;
mod promise;
mod quantum;

pub use hard::{biregular, hard_instance};
pub use iterghz::{
    bits_to_labels, check_iterghz, iterghz_as_linearizable, labels_to_bits, Bits, GhzLabel,
};
pub use linearizable::LinearizableProblem;
pub use pi::{check_pi, solve_pi, Pi, PiOut, PiRun, PI_RADIUS};
pub use promise::{
    check_promise, linearizable_to_promise, promise_clean, promise_items, promise_to_linearizable, PROMISE_RADIUS,
};
pub use quantum::{ghz_measure, quantum_solve_iterghz, GhzError, GhzTriple, IterGhzRun, ITERGHZ_ROUNDS};
