mod counting;
mod pipeline;

pub use counting::*;
pub use pipeline::*;
