//! Ball arithmetic, certified elementary functions and precision refinement.

pub mod adaptive;
pub mod ball;
pub mod elementary;
mod products;

pub use adaptive::{refine, refine_with, Outcome, Schedule};
pub use ball::Ball;
pub use products::{gn_from_nodes, gn_value, sine_factors};
