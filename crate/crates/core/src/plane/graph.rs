use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A connected plane graph given combinatorially: `rotation[v]` lists the
/// neighbours of `v` in counter-clockwise order. Inner faces are traced
/// counter-clockwise; the outer face is the one to the left of `x2 -> x1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraph {
    pub rotation: Vec<Vec<usize>>,
    pub faces: Vec<Vec<usize>>,
    pub outer_face: usize,
    pub outer_cycle: Vec<usize>,
}

impl PlaneGraph {
    /// Builds the graph from counter-clockwise triangles and the outer cycle
    /// (listed counter-clockwise around the bounded region).
    pub fn from_triangles(vertex_count: usize, triangles: &[[usize; 3]], outer_cycle: Vec<usize>) -> Result<Self> {
        let rotation = match outer_cycle.len() {
            0 => return Err(Error::InvalidInput("outer cycle is empty".into())),
            1 if triangles.is_empty() => vec![Vec::new(); vertex_count],
            2 if triangles.is_empty() => {
                let mut rot = vec![Vec::new(); vertex_count];
                rot[outer_cycle[0]].push(outer_cycle[1]);
                rot[outer_cycle[1]].push(outer_cycle[0]);
                rot
            }
            _ => rotation_from_triangles(vertex_count, triangles)?,
        };
        let mut graph = PlaneGraph {
            rotation,
            faces: Vec::new(),
            outer_face: 0,
            outer_cycle,
        };
        graph.faces = graph.trace_faces();
        graph.outer_face = graph.locate_outer_face().ok_or_else(|| {
            Error::ConstructionFailed("outer cycle does not bound a face".into())
        })?;
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rotation
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.rotation[u].contains(&v)
    }

    /// Successor of dart `u -> v` along the face on its left.
    fn next_dart(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        let rot = &self.rotation[v];
        let pos = rot.iter().position(|&w| w == u)?;
        Some((v, rot[(pos + rot.len() - 1) % rot.len()]))
    }

    /// Faces as vertex cycles; face `[a, b, c, ..]` consists of darts
    /// `a -> b`, `b -> c`, and so on. Darts are visited in vertex order, then
    /// rotation order.
    pub fn trace_faces(&self) -> Vec<Vec<usize>> {
        if self.edge_count() == 0 {
            return self.outer_cycle.first().map(|&x| vec![vec![x]]).unwrap_or_default();
        }
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        let mut faces = Vec::new();
        for (u, nb) in self.rotation.iter().enumerate() {
            for &v in nb {
                if seen.contains_key(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let mut dart = (u, v);
                while seen.insert(dart, ()).is_none() {
                    face.push(dart.0);
                    match self.next_dart(dart.0, dart.1) {
                        Some(d) => dart = d,
                        None => break,
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    /// `dart -> (face index, position of the dart's tail in the face)`.
    pub fn dart_faces(&self) -> HashMap<(usize, usize), (usize, usize)> {
        let mut map = HashMap::new();
        for (fi, face) in self.faces.iter().enumerate() {
            for (p, &a) in face.iter().enumerate() {
                let b = face[(p + 1) % face.len()];
                if face.len() > 1 || a != b {
                    map.insert((a, b), (fi, p));
                }
            }
        }
        map
    }

    /// The boundary the outer face must have: `x2, x1, x_m, .., x3`.
    pub fn expected_outer_face(&self) -> Vec<usize> {
        let x = &self.outer_cycle;
        match x.len() {
            0 | 1 => x.clone(),
            m => {
                let mut f = vec![x[1], x[0]];
                f.extend((2..m).rev().map(|i| x[i]));
                f
            }
        }
    }

    fn locate_outer_face(&self) -> Option<usize> {
        let x = &self.outer_cycle;
        if x.len() == 1 {
            return (self.faces.len() == 1).then_some(0);
        }
        self.faces.iter().position(|f| {
            f.iter()
                .enumerate()
                .any(|(p, &a)| a == x[1] && f[(p + 1) % f.len()] == x[0])
        })
    }

    /// Full consistency check of the combinatorial embedding.
    pub fn check(&self) -> std::result::Result<(), String> {
        let v = self.vertex_count();
        for (u, nb) in self.rotation.iter().enumerate() {
            for (p, &w) in nb.iter().enumerate() {
                if w >= v || w == u {
                    return Err(format!("vertex {u} has bad neighbour {w}"));
                }
                if nb[..p].contains(&w) {
                    return Err(format!("vertex {u} lists {w} twice"));
                }
                if !self.rotation[w].contains(&u) {
                    return Err(format!("edge {u}-{w} is not symmetric"));
                }
            }
        }
        if v == 0 {
            return Err("no vertices".into());
        }
        let mut reached = vec![false; v];
        reached[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.rotation[u] {
                if !std::mem::replace(&mut reached[w], true) {
                    queue.push_back(w);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err("graph is disconnected".into());
        }
        if self.faces != self.trace_faces() {
            return Err("stored faces differ from the faces of the rotation system".into());
        }
        let (e, f) = (self.edge_count(), self.faces.len());
        if v + f != e + 2 {
            return Err(format!("Euler characteristic V - E + F = {v} - {e} + {f} != 2"));
        }
        let x = &self.outer_cycle;
        let mut distinct = x.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != x.len() || x.iter().any(|&a| a >= v) {
            return Err("outer cycle repeats a vertex or leaves the graph".into());
        }
        if x.len() >= 2 && (0..x.len()).any(|i| !self.are_adjacent(x[i], x[(i + 1) % x.len()])) {
            return Err("outer cycle uses a non-edge".into());
        }
        let outer = self.faces.get(self.outer_face).ok_or("outer face index out of range")?;
        if !same_cycle(outer, &self.expected_outer_face()) {
            return Err(format!("outer face {outer:?} does not match the outer cycle"));
        }
        for (i, face) in self.faces.iter().enumerate() {
            if i != self.outer_face && face.len() != 3 {
                return Err(format!("inner face {face:?} is not a triangle"));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }
}

/// Equal as cyclic sequences (same orientation).
pub fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
}

/// At `v`, each counter-clockwise triangle `(v, a, b)` says `b` follows `a`.
/// Interior vertices close a cycle; boundary vertices form a single chain.
pub(super) fn rotation_from_triangles(vertex_count: usize, triangles: &[[usize; 3]]) -> Result<Vec<Vec<usize>>> {
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); vertex_count];
    for t in triangles {
        if t.iter().any(|&x| x >= vertex_count) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(Error::ConstructionFailed(format!("degenerate triangle {t:?}")));
        }
        for r in 0..3 {
            let (v, a, b) = (t[r], t[(r + 1) % 3], t[(r + 2) % 3]);
            if succ[v].insert(a, b).is_some() {
                return Err(Error::ConstructionFailed(format!(
                    "two triangles follow {v}-{a} on the same side"
                )));
            }
        }
    }
    let mut rotation = Vec::with_capacity(vertex_count);
    for (v, s) in succ.iter().enumerate() {
        if s.is_empty() {
            rotation.push(Vec::new());
            continue;
        }
        let mut has_pred: HashMap<usize, ()> = HashMap::new();
        for &b in s.values() {
            has_pred.insert(b, ());
        }
        let starts: Vec<usize> = {
            let mut st: Vec<usize> = s.keys().copied().filter(|a| !has_pred.contains_key(a)).collect();
            st.sort_unstable();
            st
        };
        let start = match starts.as_slice() {
            [] => *s.keys().min().unwrap(),
            [one] => *one,
            _ => {
                return Err(Error::ConstructionFailed(format!(
                    "vertex {v} is a pinch point of the triangle complex"
                )))
            }
        };
        let mut order = vec![start];
        let mut cur = start;
        while let Some(&nx) = s.get(&cur) {
            if nx == start {
                break;
            }
            if order.contains(&nx) {
                return Err(Error::ConstructionFailed(format!("inconsistent rotation at {v}")));
            }
            order.push(nx);
            cur = nx;
        }
        let neighbours = s.len() + usize::from(starts.len() == 1);
        if order.len() != neighbours {
            return Err(Error::ConstructionFailed(format!("rotation at {v} is not a single fan")));
        }
        rotation.push(order);
    }
    Ok(rotation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wheel() -> PlaneGraph {
        // outer 0..3 counter-clockwise, hub 4
        let tris: Vec<[usize; 3]> = (0..4).map(|i| [i, (i + 1) % 4, 4]).collect();
        PlaneGraph::from_triangles(5, &tris, vec![0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn single_triangle() {
        let g = PlaneGraph::from_triangles(3, &[[0, 1, 2]], vec![0, 1, 2]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.faces.len(), 2);
        assert!(same_cycle(&g.faces[g.outer_face], &[1, 0, 2]));
        g.check().unwrap();
    }

    #[test]
    fn wheel_is_valid() {
        let g = wheel();
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.faces.len(), 5);
        assert_eq!(g.rotation[4].len(), 4);
        g.check().unwrap();
    }

    #[test]
    fn degenerate_outer_cycles() {
        let one = PlaneGraph::from_triangles(1, &[], vec![0]).unwrap();
        one.check().unwrap();
        let two = PlaneGraph::from_triangles(2, &[], vec![0, 1]).unwrap();
        two.check().unwrap();
        assert_eq!(two.faces, vec![vec![0, 1]]);
    }

    #[test]
    fn detects_corruption() {
        let mut g = wheel();
        g.faces[0] = vec![0, 1, 2, 3];
        assert!(g.check().is_err());

        let mut g = wheel();
        g.rotation[4].swap(0, 1);
        assert!(g.check().is_err());

        let mut g = wheel();
        g.outer_cycle.swap(0, 1);
        assert!(g.check().is_err());

        // clockwise triangles put the outer face on the wrong side
        let tris: Vec<[usize; 3]> = (0..4).map(|i| [(i + 1) % 4, i, 4]).collect();
        assert!(PlaneGraph::from_triangles(5, &tris, vec![0, 1, 2, 3]).map_or(true, |g| g.check().is_err()));
    }
}
