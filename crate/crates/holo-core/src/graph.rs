//! Planar embedded weighted multigraphs given by rotation systems, face
//! tracing, Kasteleyn (Pfaffian) orientation, and PerfMatch both via the
//! Pfaffian and by brute-force matching enumeration.
//!
//! A dart is a directed copy of an edge; dart `2e` runs u -> v and `2e+1`
//! runs v -> u for edge `e = (u, v)`. Faces are the orbits of the map that
//! follows, at the head of a dart, the rotation successor of the reversed
//! dart; with counterclockwise rotations this traces every face with its
//! interior on the left.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("not a planar embedding: component of vertex {vertex} has V-E+F = {euler}, want 2")]
    NotPlanarEmbedding { vertex: usize, euler: i64 },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop on vertex {0} not supported")]
    SelfLoop(usize),
    #[error("rotation of vertex {vertex} does not list exactly its incident edges")]
    BadRotation { vertex: usize },
    #[error("edge bound exceeded: {edges} > {bound}")]
    BoundExceeded { edges: usize, bound: usize },
    #[error("outer face hint does not match any traced face")]
    OuterFaceNotFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Scalar,
}

/// A dart (half-edge). `2e` points `u -> v`, `2e + 1` points `v -> u`.
pub type Dart = usize;

/// Planar embedded weighted multigraph. Parallel edges are allowed,
/// self-loops are not.
#[derive(Debug, Clone)]
pub struct PlanarGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    /// Counterclockwise cyclic order of incident edge ids per vertex.
    rotations: Vec<Vec<usize>>,
    /// Outer face hint: the boundary vertex sequence in face-orbit order.
    outer_hint: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Darts of the boundary walk in orbit order.
    pub darts: Vec<Dart>,
}

impl Face {
    /// Tail vertices of the boundary darts, in orbit order.
    pub fn vertex_walk(&self, g: &PlanarGraph) -> Vec<usize> {
        self.darts.iter().map(|&d| g.tail(d)).collect()
    }
}

pub const DEFAULT_BRUTE_FORCE_EDGE_BOUND: usize = 24;

impl PlanarGraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, Scalar)>,
        rotations: Vec<Vec<usize>>,
        outer_hint: Option<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(u, v, weight)| Edge { u, v, weight })
            .collect();
        for e in &edges {
            if e.u >= vertex_count {
                return Err(GraphError::VertexOutOfRange(e.u));
            }
            if e.v >= vertex_count {
                return Err(GraphError::VertexOutOfRange(e.v));
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
        }
        if rotations.len() != vertex_count {
            return Err(GraphError::BadRotation { vertex: rotations.len() });
        }
        for v in 0..vertex_count {
            let mut incident: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.u == v || e.v == v)
                .map(|(i, _)| i)
                .collect();
            let mut listed = rotations[v].clone();
            incident.sort_unstable();
            listed.sort_unstable();
            if incident != listed {
                return Err(GraphError::BadRotation { vertex: v });
            }
        }
        Ok(PlanarGraph { vertex_count, edges, rotations, outer_hint })
    }

    /// Convenience constructor that derives a rotation system by placing
    /// the vertices in convex position (vertex id increasing
    /// counterclockwise): the rotation at v lists its neighbors in the
    /// cyclic order v+1, v+2, ..., v-1. Valid exactly for graphs drawn
    /// with non-crossing chords on a circle.
    pub fn convex(
        vertex_count: usize,
        edges: Vec<(usize, usize, Scalar)>,
        outer_hint: Option<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        let mut rotations = vec![Vec::new(); vertex_count];
        for v in 0..vertex_count {
            for step in 1..vertex_count {
                let u = (v + step) % vertex_count;
                for (i, (a, b, _)) in edges.iter().enumerate() {
                    if (*a == v && *b == u) || (*a == u && *b == v) {
                        rotations[v].push(i);
                    }
                }
            }
        }
        PlanarGraph::new(vertex_count, edges, rotations, outer_hint)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn outer_hint(&self) -> Option<&[usize]> {
        self.outer_hint.as_deref()
    }

    pub fn tail(&self, d: Dart) -> usize {
        let e = &self.edges[d / 2];
        if d % 2 == 0 {
            e.u
        } else {
            e.v
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        let e = &self.edges[d / 2];
        if d % 2 == 0 {
            e.v
        } else {
            e.u
        }
    }

    pub fn reverse(&self, d: Dart) -> Dart {
        d ^ 1
    }

    /// Darts leaving `v` in counterclockwise order.
    fn dart_rotation(&self, v: usize) -> Vec<Dart> {
        self.rotations[v]
            .iter()
            .map(|&e| if self.edges[e].u == v { 2 * e } else { 2 * e + 1 })
            .collect()
    }

    /// Next dart of the face walk through `d`.
    fn face_next(&self, d: Dart) -> Dart {
        let h = self.head(d);
        let rot = self.dart_rotation(h);
        let rev = self.reverse(d);
        let pos = rot.iter().position(|&x| x == rev).expect("reverse dart in rotation");
        rot[(pos + 1) % rot.len()]
    }

    /// Face orbits of the rotation system, with the Euler check per
    /// connected component.
    pub fn trace_faces(&self) -> Result<Vec<Face>, GraphError> {
        let faces = self.face_orbits();
        // Euler per component: V - E + F = 2, counting one face for an
        // edgeless component
        let comp = self.components();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut v_cnt = vec![0i64; ncomp];
        let mut e_cnt = vec![0i64; ncomp];
        let mut f_cnt = vec![0i64; ncomp];
        for v in 0..self.vertex_count {
            v_cnt[comp[v]] += 1;
        }
        for e in &self.edges {
            e_cnt[comp[e.u]] += 1;
        }
        for f in &faces {
            f_cnt[comp[self.tail(f.darts[0])]] += 1;
        }
        for c in 0..ncomp {
            if f_cnt[c] == 0 {
                f_cnt[c] = 1;
            }
            let euler = v_cnt[c] - e_cnt[c] + f_cnt[c];
            if euler != 2 {
                let vertex = (0..self.vertex_count).find(|&v| comp[v] == c).unwrap();
                return Err(GraphError::NotPlanarEmbedding { vertex, euler });
            }
        }
        Ok(faces)
    }

    fn face_orbits(&self) -> Vec<Face> {
        let nd = 2 * self.edges.len();
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                seen[d] = true;
                walk.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            faces.push(Face { darts: walk });
        }
        faces
    }

    /// Component id per vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut next = 0;
        for s in 0..self.vertex_count {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = next;
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// The face matching the outer hint, or the face containing dart 0 of
    /// the hint's component when no hint is set.
    pub fn outer_face_index(&self, faces: &[Face]) -> Result<usize, GraphError> {
        match &self.outer_hint {
            None => Ok(0),
            Some(hint) => {
                for (i, f) in faces.iter().enumerate() {
                    let walk = f.vertex_walk(self);
                    if walk.len() == hint.len() && cyclic_eq(&walk, hint) {
                        return Ok(i);
                    }
                }
                Err(GraphError::OuterFaceNotFound)
            }
        }
    }

    /// Pfaffian orientation: direction per edge (true = as stored, u -> v)
    /// such that every face except one per component has an odd number of
    /// boundary darts whose edge direction opposes the face walk.
    pub fn kasteleyn_orient(&self) -> Result<Vec<bool>, GraphError> {
        let faces = self.trace_faces()?;
        let nf = faces.len();
        let mut face_of_dart = vec![usize::MAX; 2 * self.edges.len()];
        for (i, f) in faces.iter().enumerate() {
            for &d in &f.darts {
                face_of_dart[d] = i;
            }
        }
        // the designated outer face, plus dart-0-of-component for the rest
        let comp = self.components();
        let mut outer_of_comp = vec![usize::MAX; self.vertex_count.max(1)];
        if nf > 0 {
            let global_outer = self.outer_face_index(&faces)?;
            let c0 = comp[self.tail(faces[global_outer].darts[0])];
            outer_of_comp[c0] = global_outer;
            for (i, f) in faces.iter().enumerate() {
                let c = comp[self.tail(f.darts[0])];
                if outer_of_comp[c] == usize::MAX {
                    outer_of_comp[c] = i;
                }
            }
        }

        // dual spanning forest rooted at each component's outer face
        let mut parent_edge = vec![usize::MAX; nf]; // primal edge to parent face
        let mut order = Vec::new();
        let mut visited = vec![false; nf];
        let mut decided = vec![false; self.edges.len()];
        let mut direction = vec![true; self.edges.len()];
        for root in outer_of_comp.iter().copied().filter(|&r| r != usize::MAX) {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(f) = queue.pop_front() {
                order.push(f);
                for &d in &faces[f].darts {
                    let g = face_of_dart[self.reverse(d)];
                    if g != f && !visited[g] {
                        visited[g] = true;
                        parent_edge[g] = d / 2;
                        decided[d / 2] = true; // reserved for face g
                        queue.push_back(g);
                    }
                }
            }
        }
        // every non-reserved edge keeps its stored direction
        let reserved = decided;
        let mut fixed: Vec<bool> = (0..self.edges.len()).map(|e| !reserved[e]).collect();

        // children first: each face's parent edge is its last undecided one
        for &f in order.iter().rev() {
            let pe = parent_edge[f];
            if pe == usize::MAX {
                continue; // component outer face
            }
            let mut opposing = 0usize;
            for &d in &faces[f].darts {
                if d / 2 == pe {
                    continue;
                }
                debug_assert!(fixed[d / 2], "non-parent boundary edge already decided");
                let along = d % 2 == 0; // dart agrees with stored direction
                if along != direction[d / 2] {
                    opposing += 1;
                }
            }
            // the parent edge appears exactly once on this face's walk
            let d = faces[f]
                .darts
                .iter()
                .copied()
                .find(|&d| d / 2 == pe)
                .expect("parent edge on face boundary");
            let along = d % 2 == 0;
            // choose direction so the total opposing count becomes odd
            direction[pe] = if opposing % 2 == 0 { !along } else { along };
            fixed[pe] = true;
        }
        Ok(direction)
    }

    /// Weighted perfect-matching sum via the signed Pfaffian of the
    /// Kasteleyn-oriented skew adjacency matrix, with the global sign fixed
    /// against one explicitly found matching.
    pub fn perfmatch(&self) -> Result<Scalar, GraphError> {
        if self.vertex_count == 0 {
            return Ok(Scalar::one());
        }
        if self.vertex_count % 2 == 1 {
            self.trace_faces()?; // still validate the embedding
            return Ok(Scalar::zero());
        }
        let Some(matching) = self.find_one_matching() else {
            self.trace_faces()?;
            return Ok(Scalar::zero());
        };
        let direction = self.kasteleyn_orient()?;
        let n = self.vertex_count;
        let mut a = Matrix::zero(n, n);
        for (i, e) in self.edges.iter().enumerate() {
            let (from, to) = if direction[i] { (e.u, e.v) } else { (e.v, e.u) };
            *a.at_mut(from, to) = a.at(from, to) + &e.weight;
            *a.at_mut(to, from) = a.at(to, from) - &e.weight;
        }
        let pf = a.pfaffian().expect("skew by construction");
        // sign of the found matching's Pfaffian term, weights factored out
        let mut pairs: Vec<(usize, usize, usize)> = matching
            .iter()
            .map(|&e| {
                let Edge { u, v, .. } = self.edges[e];
                (u.min(v), u.max(v), e)
            })
            .collect();
        pairs.sort_unstable();
        let mut seq = Vec::with_capacity(n);
        let mut orient_neg = false;
        for &(lo, hi, e) in &pairs {
            seq.push(lo);
            seq.push(hi);
            let stored_lo_hi = self.edges[e].u == lo;
            if direction[e] != stored_lo_hi {
                orient_neg = !orient_neg;
            }
        }
        let mut inversions = 0usize;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    inversions += 1;
                }
            }
        }
        let negative = (inversions % 2 == 1) != orient_neg;
        Ok(if negative { -pf } else { pf })
    }

    /// Exhaustive matching enumeration; the reference semantics for
    /// [`PlanarGraph::perfmatch`].
    pub fn perfmatch_bruteforce(&self) -> Result<Scalar, GraphError> {
        self.perfmatch_bruteforce_bounded(DEFAULT_BRUTE_FORCE_EDGE_BOUND)
    }

    pub fn perfmatch_bruteforce_bounded(&self, bound: usize) -> Result<Scalar, GraphError> {
        if self.edges.len() > bound {
            return Err(GraphError::BoundExceeded { edges: self.edges.len(), bound });
        }
        let mut incident = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
        let mut used = vec![false; self.vertex_count];
        Ok(self.matching_sum(&incident, &mut used, 0))
    }

    fn matching_sum(&self, incident: &[Vec<usize>], used: &mut [bool], from: usize) -> Scalar {
        let Some(v) = (from..self.vertex_count).find(|&v| !used[v]) else {
            return Scalar::one();
        };
        let mut total = Scalar::zero();
        used[v] = true;
        for &e in &incident[v] {
            let Edge { u: a, v: b, ref weight } = self.edges[e];
            let other = if a == v { b } else { a };
            if used[other] {
                continue;
            }
            used[other] = true;
            let sub = self.matching_sum(incident, used, v + 1);
            if !sub.is_zero() {
                total += &(weight * &sub);
            }
            used[other] = false;
        }
        used[v] = false;
        total
    }

    fn find_one_matching(&self) -> Option<Vec<usize>> {
        let mut incident = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
        let mut used = vec![false; self.vertex_count];
        let mut chosen = Vec::new();
        if self.try_match(&incident, &mut used, &mut chosen, 0) {
            Some(chosen)
        } else {
            None
        }
    }

    fn try_match(
        &self,
        incident: &[Vec<usize>],
        used: &mut [bool],
        chosen: &mut Vec<usize>,
        from: usize,
    ) -> bool {
        let Some(v) = (from..self.vertex_count).find(|&v| !used[v]) else {
            return true;
        };
        used[v] = true;
        for &e in &incident[v] {
            let Edge { u: a, v: b, .. } = self.edges[e];
            let other = if a == v { b } else { a };
            if used[other] {
                continue;
            }
            used[other] = true;
            chosen.push(e);
            if self.try_match(incident, used, chosen, v + 1) {
                used[v] = false; // restore irrelevant; keep chosen
                return true;
            }
            chosen.pop();
            used[other] = false;
        }
        used[v] = false;
        false
    }

    /// Face index of every dart, aligned with a `trace_faces` result.
    pub fn face_of_darts(&self, faces: &[Face]) -> Vec<usize> {
        let mut of = vec![usize::MAX; 2 * self.edges.len()];
        for (i, f) in faces.iter().enumerate() {
            for &d in &f.darts {
                of[d] = i;
            }
        }
        of
    }

    /// Rotation positions of `v` whose following wedge lies on face `face`:
    /// inserting a new edge at returned index `i` (before the current
    /// entry `i`) pokes it into that face.
    pub fn wedges_on_face(&self, v: usize, face: usize, face_of: &[usize]) -> Vec<usize> {
        let rot = self.dart_rotation(v);
        if rot.is_empty() {
            return vec![0];
        }
        (0..rot.len()).filter(|&i| face_of[rot[i]] == face).collect()
    }

    /// Whether `v` has any wedge on `face` (isolated vertices border all).
    pub fn borders_face(&self, v: usize, face: usize, face_of: &[usize]) -> bool {
        let rot = self.dart_rotation(v);
        rot.is_empty() || rot.iter().any(|&d| face_of[d] == face)
    }

    /// New graph with a weight edge joining `u` and `v`, inserted at the
    /// given rotation indices (the wedge positions).
    pub fn insert_edge_at_wedges(
        &self,
        u: usize,
        at_u: usize,
        v: usize,
        at_v: usize,
        weight: Scalar,
    ) -> PlanarGraph {
        let mut g = self.clone();
        let new_edge = g.edges.len();
        g.edges.push(Edge { u, v, weight });
        let cap_u = g.rotations[u].len();
        g.rotations[u].insert(at_u.min(cap_u), new_edge);
        let cap_v = g.rotations[v].len();
        g.rotations[v].insert(at_v.min(cap_v), new_edge);
        g.outer_hint = None;
        g
    }

    /// Joins `u` and `v` by a weight edge placed in faces that keep as
    /// many of the `keep_reachable` vertices on one face as possible:
    /// within one component the edge is a chord of a face bordering both
    /// endpoints; across components the two chosen faces merge.
    pub fn connect_planar(
        &self,
        u: usize,
        v: usize,
        weight: Scalar,
        keep_reachable: &[usize],
    ) -> Result<PlanarGraph, GraphError> {
        let faces = self.trace_faces()?;
        let face_of = self.face_of_darts(&faces);
        let score = |f: usize| -> i64 {
            keep_reachable
                .iter()
                .filter(|&&x| self.borders_face(x, f, &face_of))
                .count() as i64
        };
        let comp = self.components();
        let pick_best = |candidates: &[usize]| -> Option<usize> {
            candidates.iter().copied().max_by_key(|&f| (score(f), std::cmp::Reverse(f)))
        };
        let (at_u, at_v) = if !faces.is_empty() && comp[u] == comp[v] {
            let common: Vec<usize> = (0..faces.len())
                .filter(|&f| self.borders_face(u, f, &face_of) && self.borders_face(v, f, &face_of))
                .collect();
            let Some(f) = pick_best(&common) else {
                return Err(GraphError::OuterFaceNotFound);
            };
            (
                self.wedges_on_face(u, f, &face_of).first().copied().unwrap_or(0),
                self.wedges_on_face(v, f, &face_of).first().copied().unwrap_or(0),
            )
        } else if !faces.is_empty() {
            let at_u_faces: Vec<usize> =
                (0..faces.len()).filter(|&f| self.borders_face(u, f, &face_of)).collect();
            let at_v_faces: Vec<usize> =
                (0..faces.len()).filter(|&f| self.borders_face(v, f, &face_of)).collect();
            let fu = pick_best(&at_u_faces);
            let fv = pick_best(&at_v_faces);
            (
                fu.map(|f| self.wedges_on_face(u, f, &face_of).first().copied().unwrap_or(0))
                    .unwrap_or(0),
                fv.map(|f| self.wedges_on_face(v, f, &face_of).first().copied().unwrap_or(0))
                    .unwrap_or(0),
            )
        } else {
            (0, 0)
        };
        Ok(self.insert_edge_at_wedges(u, at_u, v, at_v, weight))
    }

    /// New graph with a fresh pendant vertex joined to `v`, the edge poked
    /// into face `face` at `v`'s first wedge there. Returns the new vertex.
    pub fn add_pendant_into_face(
        &self,
        v: usize,
        face: usize,
        weight: Scalar,
    ) -> Result<(PlanarGraph, usize), GraphError> {
        let faces = self.trace_faces()?;
        let face_of = self.face_of_darts(&faces);
        let wedges = self.wedges_on_face(v, face, &face_of);
        let Some(&at) = wedges.first() else {
            return Err(GraphError::OuterFaceNotFound);
        };
        let mut g = self.clone();
        let new_vertex = g.vertex_count;
        g.vertex_count += 1;
        let new_edge = g.edges.len();
        g.edges.push(Edge { u: v, v: new_vertex, weight });
        let cap = g.rotations[v].len();
        g.rotations[v].insert(at.min(cap), new_edge);
        g.rotations.push(vec![new_edge]);
        g.outer_hint = None;
        Ok((g, new_vertex))
    }

    /// Disjoint union; the right graph's vertex and edge ids are shifted.
    pub fn disjoint_union(&self, other: &PlanarGraph) -> PlanarGraph {
        let off_v = self.vertex_count;
        let off_e = self.edges.len();
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            u: e.u + off_v,
            v: e.v + off_v,
            weight: e.weight.clone(),
        }));
        let mut rotations = self.rotations.clone();
        rotations.extend(
            other
                .rotations
                .iter()
                .map(|rot| rot.iter().map(|&e| e + off_e).collect::<Vec<_>>()),
        );
        PlanarGraph {
            vertex_count: self.vertex_count + other.vertex_count,
            edges,
            rotations,
            outer_hint: None,
        }
    }

    pub fn set_outer_hint(&mut self, hint: Option<Vec<usize>>) {
        self.outer_hint = hint;
    }

    /// The subgraph with `removed` vertices (and incident edges) deleted;
    /// remaining vertices are re-indexed in order. The induced rotation
    /// system stays a planar embedding.
    pub fn remove_vertices(&self, removed: &[usize]) -> PlanarGraph {
        let mut gone = vec![false; self.vertex_count];
        for &v in removed {
            gone[v] = true;
        }
        let mut vmap = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if !gone[v] {
                vmap[v] = next;
                next += 1;
            }
        }
        let mut emap = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !gone[e.u] && !gone[e.v] {
                emap[i] = edges.len();
                edges.push(Edge { u: vmap[e.u], v: vmap[e.v], weight: e.weight.clone() });
            }
        }
        let mut rotations = Vec::with_capacity(next);
        for v in 0..self.vertex_count {
            if gone[v] {
                continue;
            }
            rotations.push(
                self.rotations[v]
                    .iter()
                    .filter(|&&e| emap[e] != usize::MAX)
                    .map(|&e| emap[e])
                    .collect(),
            );
        }
        PlanarGraph { vertex_count: next, edges, rotations, outer_hint: None }
    }
}

fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|shift| (0..a.len()).all(|i| a[(i + shift) % a.len()] == b[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn cycle(n: usize) -> PlanarGraph {
        let edges = (0..n).map(|i| (i, (i + 1) % n, w(1))).collect();
        PlanarGraph::convex(n, edges, None).unwrap()
    }

    #[test]
    fn single_edge_faces_and_perfmatch() {
        let g = PlanarGraph::convex(2, vec![(0, 1, w(5))], None).unwrap();
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(g.perfmatch().unwrap(), w(5));
        assert_eq!(g.perfmatch_bruteforce().unwrap(), w(5));
    }

    #[test]
    fn path3_has_no_perfect_matching() {
        let g = PlanarGraph::convex(3, vec![(0, 1, w(1)), (1, 2, w(1))], None).unwrap();
        assert_eq!(g.perfmatch().unwrap(), w(0));
        assert_eq!(g.perfmatch_bruteforce().unwrap(), w(0));
    }

    #[test]
    fn four_cycle_counts_two_matchings() {
        let g = cycle(4);
        assert_eq!(g.trace_faces().unwrap().len(), 2);
        assert_eq!(g.perfmatch().unwrap(), w(2));
        assert_eq!(g.perfmatch_bruteforce().unwrap(), w(2));
    }

    #[test]
    fn k4_standard_embedding() {
        // K4 drawn with vertex 3 inside the triangle 0,1,2
        let edges = vec![
            (0, 1, w(1)),
            (1, 2, w(1)),
            (2, 0, w(1)),
            (0, 3, w(1)),
            (1, 3, w(1)),
            (2, 3, w(1)),
        ];
        let rotations = vec![
            vec![0, 3, 2], // at 0 ccw: to 1, to 3, to 2
            vec![1, 4, 0], // at 1: to 2, to 3, to 0
            vec![2, 5, 1], // at 2: to 0, to 3, to 1
            vec![3, 1, 5], // at 3 (inner): to 0, wait fixed below
        ];
        // rotation at inner vertex 3: edges to 0, 1, 2 must wind ccw
        let mut rot = rotations;
        rot[3] = vec![3, 4, 5];
        let g = PlanarGraph::new(4, edges, rot, None).unwrap();
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 4);
        assert_eq!(g.perfmatch_bruteforce().unwrap(), w(3));
        assert_eq!(g.perfmatch().unwrap(), w(3));
    }

    #[test]
    fn triangle_kasteleyn_has_odd_bounded_face() {
        let g = cycle(3);
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 2);
        let dir = g.kasteleyn_orient().unwrap();
        let outer = g.outer_face_index(&faces).unwrap();
        for (i, f) in faces.iter().enumerate() {
            if i == outer {
                continue;
            }
            let opposing = f
                .darts
                .iter()
                .filter(|&&d| (d % 2 == 0) != dir[d / 2])
                .count();
            assert_eq!(opposing % 2, 1, "bounded face must be oddly oriented");
        }
    }

    #[test]
    fn weighted_and_parallel_edges() {
        // theta graph: 2 vertices, 3 parallel edges -> PerfMatch = w1+w2+w3
        let edges = vec![(0, 1, w(2)), (0, 1, w(3)), (0, 1, w(5))];
        let rotations = vec![vec![0, 1, 2], vec![2, 1, 0]];
        let g = PlanarGraph::new(2, edges, rotations, None).unwrap();
        assert_eq!(g.trace_faces().unwrap().len(), 3);
        assert_eq!(g.perfmatch_bruteforce().unwrap(), w(10));
        assert_eq!(g.perfmatch().unwrap(), w(10));
    }

    #[test]
    fn disconnected_is_product_of_components() {
        // two disjoint edges with rational weights
        let g = PlanarGraph::new(
            4,
            vec![(0, 1, Scalar::from_ratio(1, 2)), (2, 3, Scalar::from_ratio(3, 7))],
            vec![vec![0], vec![0], vec![1], vec![1]],
            None,
        )
        .unwrap();
        assert_eq!(g.perfmatch().unwrap(), Scalar::from_ratio(3, 14));
        assert_eq!(g.perfmatch_bruteforce().unwrap(), Scalar::from_ratio(3, 14));
    }

    #[test]
    fn isolated_vertex_gives_zero_and_empty_gives_one() {
        let g = PlanarGraph::new(1, vec![], vec![vec![]], None).unwrap();
        assert_eq!(g.perfmatch().unwrap(), w(0));
        let empty = PlanarGraph::new(0, vec![], vec![], None).unwrap();
        assert_eq!(empty.perfmatch().unwrap(), w(1));
    }

    #[test]
    fn bruteforce_bound_enforced() {
        let g = cycle(6);
        assert!(matches!(
            g.perfmatch_bruteforce_bounded(3),
            Err(GraphError::BoundExceeded { edges: 6, bound: 3 })
        ));
    }

    #[test]
    fn bad_rotation_rejected() {
        let r = PlanarGraph::new(2, vec![(0, 1, w(1))], vec![vec![], vec![0]], None);
        assert!(matches!(r, Err(GraphError::BadRotation { vertex: 0 })));
        let r = PlanarGraph::new(2, vec![(0, 0, w(1))], vec![vec![0], vec![]], None);
        assert!(matches!(r, Err(GraphError::SelfLoop(0))));
    }

    #[test]
    fn euler_rejects_torus_like_rotation() {
        // K4 with a rotation system of genus 1 fails the Euler check
        let edges = vec![
            (0, 1, w(1)),
            (1, 2, w(1)),
            (2, 0, w(1)),
            (0, 3, w(1)),
            (1, 3, w(1)),
            (2, 3, w(1)),
        ];
        let rot = vec![vec![0, 2, 3], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
        let g = PlanarGraph::new(4, edges, rot, None).unwrap();
        assert!(matches!(g.trace_faces(), Err(GraphError::NotPlanarEmbedding { .. })));
    }

    #[test]
    fn remove_vertices_keeps_embedding() {
        let g = cycle(6);
        let sub = g.remove_vertices(&[0, 3]);
        assert_eq!(sub.vertex_count(), 4);
        assert_eq!(sub.edges().len(), 2);
        assert_eq!(sub.perfmatch().unwrap(), w(1));
        assert_eq!(sub.perfmatch_bruteforce().unwrap(), w(1));
    }

    #[test]
    fn outer_face_hint_matching() {
        let g = PlanarGraph::convex(
            3,
            vec![(0, 1, w(1)), (1, 2, w(1)), (2, 0, w(1))],
            Some(vec![0, 2, 1]),
        )
        .unwrap();
        let faces = g.trace_faces().unwrap();
        let outer = g.outer_face_index(&faces).unwrap();
        assert_eq!(faces[outer].vertex_walk(&g).len(), 3);
        // the walk 0,2,1 is the clockwise-looking orbit of the outer face
        assert!(cyclic_eq(&faces[outer].vertex_walk(&g), &[0, 2, 1]));
        let bad = PlanarGraph::convex(
            3,
            vec![(0, 1, w(1)), (1, 2, w(1)), (2, 0, w(1))],
            Some(vec![0, 1, 2, 2]),
        )
        .unwrap();
        let faces = bad.trace_faces().unwrap();
        assert!(matches!(bad.outer_face_index(&faces), Err(GraphError::OuterFaceNotFound)));
    }

    #[test]
    fn kasteleyn_matches_bruteforce_on_wheels_and_grids() {
        // wheel W5: hub 0, rim 1..=5
        let mut edges = vec![];
        for i in 1..=5usize {
            edges.push((0, i, w(1)));
        }
        for i in 1..=5usize {
            let j = if i == 5 { 1 } else { i + 1 };
            edges.push((i, j, w(1)));
        }
        let mut rot = vec![vec![0, 1, 2, 3, 4]];
        for i in 1..=5usize {
            let spoke = i - 1;
            let next_rim = 5 + (i - 1);
            let prev_rim = 5 + (if i == 1 { 5 } else { i - 1 } - 1);
            rot.push(vec![spoke, prev_rim, next_rim]);
        }
        let g = PlanarGraph::new(6, edges, rot, None).unwrap();
        assert_eq!(g.perfmatch().unwrap(), g.perfmatch_bruteforce().unwrap());

        // 2x3 grid
        let idx = |r: usize, c: usize| r * 3 + c;
        let mut edges = vec![];
        for r in 0..2 {
            for c in 0..2 {
                edges.push((idx(r, c), idx(r, c + 1), w(1)));
            }
        }
        for c in 0..3 {
            edges.push((idx(0, c), idx(1, c), w(1)));
        }
        let mut rot = vec![Vec::new(); 6];
        for (i, (a, b, _)) in edges.iter().enumerate() {
            rot[*a].push(i);
            rot[*b].push(i);
        }
        // fix rotations by geometry: order neighbors ccw around each cell
        let order = |v: usize, edges: &[(usize, usize, Scalar)], ids: &mut Vec<usize>| {
            let (r, c) = (v / 3, v % 3);
            let pos = |u: usize| ((u / 3) as f64 - r as f64, (u % 3) as f64 - c as f64);
            ids.sort_by(|&a, &b| {
                let oa = {
                    let (dr, dc) = pos(if edges[a].0 == v { edges[a].1 } else { edges[a].0 });
                    (-dr).atan2(dc)
                };
                let ob = {
                    let (dr, dc) = pos(if edges[b].0 == v { edges[b].1 } else { edges[b].0 });
                    (-dr).atan2(dc)
                };
                oa.partial_cmp(&ob).unwrap()
            });
        };
        for v in 0..6 {
            let mut ids = rot[v].clone();
            order(v, &edges, &mut ids);
            rot[v] = ids;
        }
        let g = PlanarGraph::new(6, edges, rot, None).unwrap();
        assert_eq!(g.perfmatch().unwrap(), w(3));
        assert_eq!(g.perfmatch_bruteforce().unwrap(), w(3));
    }
}
