use serde::{Deserialize, Serialize};

use super::graph::PlaneGraph;
use crate::error::{Error, Result};
use crate::kgraph::Colour;

/// Outcome of the dual-cycle trace. `i_star` is 1-based on the outer cycle:
/// `x_{i*}` is Blue and `x_{i*+1}` is Red.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexWalk {
    pub i_star: usize,
    /// Red vertices from `x_1` to `x_{i*+1}`.
    pub red_walk: Vec<usize>,
    /// Blue vertices from `x_2` to `x_{i*}`.
    pub blue_walk: Vec<usize>,
    /// Inner faces crossed by the trace.
    pub faces_crossed: usize,
}

fn push_dedup(walk: &mut Vec<usize>, v: usize) {
    if walk.last() != Some(&v) {
        walk.push(v);
    }
}

/// Starting from the inner face on `x1 x2`, repeatedly leaves each triangle
/// through its other bichromatic edge until the outer face is reached. The
/// endpoints of the crossed edges give the two monochromatic walks.
pub fn hex_walk(plane: &PlaneGraph, colour: &[Colour]) -> Result<HexWalk> {
    let x = &plane.outer_cycle;
    if colour.len() != plane.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "{} colours for {} vertices",
            colour.len(),
            plane.vertex_count()
        )));
    }
    if x.len() < 2 || colour[x[0]] != Colour::Red || colour[x[1]] != Colour::Blue {
        return Err(Error::PreconditionViolation("need x1 Red and x2 Blue on the outer cycle".into()));
    }
    let mut red = vec![x[0]];
    let mut blue = vec![x[1]];
    let m = x.len();
    if m == 2 {
        return Ok(HexWalk {
            i_star: 2,
            red_walk: red,
            blue_walk: blue,
            faces_crossed: 0,
        });
    }
    let darts = plane.dart_faces();
    let (mut face, mut pos) = darts[&(x[0], x[1])];
    let mut crossed = 0;
    while face != plane.outer_face {
        crossed += 1;
        if crossed > plane.faces.len() {
            return Err(Error::InvariantViolated("dual trace does not terminate".into()));
        }
        let f = &plane.faces[face];
        if f.len() != 3 {
            return Err(Error::InvariantViolated(format!("inner face {f:?} is not a triangle")));
        }
        let (p, q, w) = (f[pos], f[(pos + 1) % 3], f[(pos + 2) % 3]);
        let bichromatic = [(p, q), (q, w), (w, p)]
            .iter()
            .filter(|(a, b)| colour[*a] != colour[*b])
            .count();
        if bichromatic != 2 {
            return Err(Error::InvariantViolated(format!(
                "face {f:?} has {bichromatic} bichromatic edges"
            )));
        }
        match colour[w] {
            Colour::Red => push_dedup(&mut red, w),
            Colour::Blue => push_dedup(&mut blue, w),
        }
        let exit = if colour[w] == colour[p] { (q, w) } else { (w, p) };
        (face, pos) = darts[&(exit.1, exit.0)];
    }
    // the trace entered the outer face through dart x_{a+1} -> x_a
    let f = &plane.faces[face];
    let (from, to) = (f[pos], f[(pos + 1) % f.len()]);
    let a = x.iter().position(|&v| v == to).unwrap();
    if x[(a + 1) % m] != from {
        return Err(Error::InvariantViolated("exit edge is not on the outer cycle".into()));
    }
    if colour[to] != Colour::Blue || colour[from] != Colour::Red {
        return Err(Error::InvariantViolated("exit edge has the wrong colours".into()));
    }
    Ok(HexWalk {
        i_star: a + 1,
        red_walk: red,
        blue_walk: blue,
        faces_crossed: crossed,
    })
}
