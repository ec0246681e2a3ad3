pub mod error;
pub mod exactnum;
pub mod fgab;
pub mod prufer;
pub mod metric;
pub mod limits;
pub mod duality;
pub mod topo;
pub mod cli;
