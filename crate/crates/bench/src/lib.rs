//! Graph fixtures shared by the benchmarks.

use vecflow::io::parse_graph6;
use vecflow::Multigraph;

pub fn petersen() -> Multigraph {
    parse_graph6(b"IheA@GUAo").expect("valid graph6")
}

pub fn k33() -> Multigraph {
    parse_graph6(b"EFz_").expect("valid graph6")
}

pub fn cube() -> Multigraph {
    parse_graph6(b"Gr`HOk").expect("valid graph6")
}

pub fn k4() -> Multigraph {
    parse_graph6(b"C~").expect("valid graph6")
}
