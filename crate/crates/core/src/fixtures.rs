//! Named complexes and stacks used by tests, benchmarks and the `gen` command.

use std::sync::Arc;

use crate::complex::{Complex, Simplex};
use crate::manifold::generate_torus;
use crate::simplex;
use crate::stack::Stack;

/// The cycle graph on vertices `0..n`, edges `{i, i+1 mod n}`.
pub fn cycle(n: u32) -> Complex {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    Complex::closure((0..n).map(|i| simplex![i, (i + 1) % n]))
}

/// Boundary of the `n`-simplex on vertices `0..=n`: a normal `(n−1)`-sphere.
pub fn simplex_boundary(n: u32) -> Complex {
    let full = Simplex::new(0..=n).expect("distinct vertices");
    Complex::closure((0..=n as usize).filter_map(|i| full.without(i)))
}

/// Boundary of the octahedron: 6 vertices, 8 triangles.
pub fn octahedron() -> Complex {
    // antipodal pairs (0,1), (2,3), (4,5)
    let mut tris = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                tris.push(simplex![a, b, c]);
            }
        }
    }
    Complex::closure(tris)
}

/// Two boundaries of tetrahedra glued at vertex 0.
pub fn wedge() -> Complex {
    let mut tris = Vec::new();
    for quad in [[0u32, 1, 2, 3], [0, 4, 5, 6]] {
        let s = Simplex::new(quad).expect("distinct vertices");
        tris.extend((0..4).filter_map(|i| s.without(i)));
    }
    Complex::closure(tris)
}

/// Three triangles on the edge `{0, 1}`.
pub fn branch() -> Complex {
    Complex::closure([simplex![0, 1, 2], simplex![0, 1, 3], simplex![0, 1, 4]])
}

pub fn torus(n: u32, m: u32) -> Complex {
    generate_torus(n, m).expect("torus dimensions >= 3")
}

/// The 6-cycle stack with two minima `{0 1}` and `{3 4}` and maxima at
/// vertices 3 and 5.
pub fn cyc6_stack() -> Stack {
    let host = Arc::new(cycle(6));
    let values = [
        (simplex![0, 1], 0),
        (simplex![1, 2], 1),
        (simplex![2, 3], 2),
        (simplex![3, 4], 0),
        (simplex![4, 5], 1),
        (simplex![0, 5], 2),
        (simplex![0], 2),
        (simplex![1], 1),
        (simplex![2], 2),
        (simplex![3], 3),
        (simplex![4], 1),
        (simplex![5], 3),
    ];
    Stack::from_values(host, values).expect("fixture is a stack")
}

/// A stack on a graph with a branching vertex where an elementary collapse
/// merges two of its three minima.
///
/// Edges `{0 1}`, `{0 2}`, `{3 4}` sit at altitude 0; the edge `{0 3}` and
/// every vertex sit at altitude 1. Collapsing `({0}, {0 3})` lowers vertex 0
/// and joins `{0 1}` with `{0 2}`.
pub fn branching_stack() -> Stack {
    let host = Arc::new(Complex::closure([
        simplex![0, 1],
        simplex![0, 2],
        simplex![0, 3],
        simplex![3, 4],
    ]));
    let values = host
        .faces()
        .iter()
        .map(|f| {
            let low = f.dim() == 1 && *f != simplex![0, 3];
            (f.clone(), if low { 0 } else { 1 })
        })
        .collect::<Vec<_>>();
    Stack::from_values(host, values).expect("fixture is a stack")
}
