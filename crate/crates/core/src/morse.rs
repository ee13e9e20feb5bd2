//! Morse stacks: stacks in which every face belongs to at most one flat
//! pair. Flat pairs form the gradient vector field; gradient paths
//! (`Λ`-paths) alternate differential and flat pairs and let every
//! top-dimensional face be traced back to a unique minimum.

use std::sync::Arc;

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, FaceId};
use crate::error::{Error, Result};
use crate::manifold::require_normal;
use crate::stack::{stack_violation, Altitude, Stack};

/// Covering pairs `(x, y)` with `F(x) = F(y)`.
pub fn flat_pairs(stack: &Stack) -> Vec<(FaceId, FaceId)> {
    stack
        .host()
        .covering_pairs()
        .into_iter()
        .filter(|&(x, y)| stack.altitude(x) == stack.altitude(y))
        .collect()
}

/// First face (canonical order) lying in two flat pairs.
pub fn morse_witness(stack: &Stack) -> Option<FaceId> {
    let host = stack.host();
    host.ids().find(|&x| {
        let a = stack.altitude(x);
        let up = host.cofaces(x).iter().filter(|&&y| stack.altitude(y) == a).count();
        let down = host.boundary(x).iter().filter(|&&w| stack.altitude(w) == a).count();
        up + down > 1
    })
}

pub fn is_morse(stack: &Stack) -> bool {
    morse_witness(stack).is_none()
}

fn require_morse(stack: &Stack) -> Result<()> {
    match morse_witness(stack) {
        Some(f) => Err(Error::NotMorse(stack.host().face(f).clone())),
        None => Ok(()),
    }
}

/// A partial matching on covering pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientField {
    pairs: Vec<(FaceId, FaceId)>,
    partner: Vec<Option<FaceId>>,
}

impl GradientField {
    /// Checks that every pair is a covering pair and that no face repeats.
    pub fn from_pairs(host: &Complex, pairs: Vec<(FaceId, FaceId)>) -> Result<GradientField> {
        let mut partner = vec![None; host.len()];
        for &(x, y) in &pairs {
            if !host.is_covering_pair(x, y) {
                return Err(Error::NotCoveringPair {
                    x: host.face(x).clone(),
                    y: host.face(y).clone(),
                });
            }
            for (a, b) in [(x, y), (y, x)] {
                if partner[a.index()].is_some() {
                    return Err(Error::NotAMatching(host.face(a).clone()));
                }
                partner[a.index()] = Some(b);
            }
        }
        let mut pairs = pairs;
        pairs.sort_unstable();
        Ok(GradientField { pairs, partner })
    }

    pub fn pairs(&self) -> &[(FaceId, FaceId)] {
        &self.pairs
    }

    pub fn partner(&self, f: FaceId) -> Option<FaceId> {
        self.partner[f.index()]
    }

    pub fn is_regular(&self, f: FaceId) -> bool {
        self.partner[f.index()].is_some()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The gradient vector field: all flat pairs of a Morse stack.
pub fn gradient(stack: &Stack) -> Result<GradientField> {
    require_morse(stack)?;
    GradientField::from_pairs(stack.host(), flat_pairs(stack))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalReport {
    /// `critical[p]`: the `p`-critical faces, sorted.
    pub critical: Vec<Vec<FaceId>>,
    /// `regular[p]`: the `p`-regular faces, sorted.
    pub regular: Vec<Vec<FaceId>>,
}

impl CriticalReport {
    pub fn critical_count(&self) -> usize {
        self.critical.iter().map(Vec::len).sum()
    }

    pub fn is_critical(&self, f: FaceId) -> bool {
        self.critical.iter().any(|c| c.binary_search(&f).is_ok())
    }
}

/// Splits the faces of a Morse stack into regular and critical ones.
pub fn classify(stack: &Stack) -> Result<CriticalReport> {
    let grad = gradient(stack)?;
    let host = stack.host();
    let levels = (host.dim() + 1).max(0) as usize;
    let mut critical = vec![Vec::new(); levels];
    let mut regular = vec![Vec::new(); levels];
    for f in host.ids() {
        let p = host.face_dim(f);
        if grad.is_regular(f) {
            regular[p].push(f);
        } else {
            critical[p].push(f);
        }
    }
    Ok(CriticalReport { critical, regular })
}

/// A `Λ_p`-path, or its reversal `Λ̃_p` when `reversed` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPath {
    pub faces: Vec<FaceId>,
    pub p: usize,
    pub reversed: bool,
}

impl LambdaPath {
    pub fn new(faces: Vec<FaceId>, p: usize, reversed: bool) -> Self {
        LambdaPath { faces, p, reversed }
    }

    /// The same faces read in the opposite direction.
    pub fn reverse(&self) -> LambdaPath {
        let mut faces = self.faces.clone();
        faces.reverse();
        LambdaPath {
            faces,
            p: self.p,
            reversed: !self.reversed,
        }
    }

    fn forward_faces(&self) -> Vec<FaceId> {
        let mut f = self.faces.clone();
        if self.reversed {
            f.reverse();
        }
        f
    }

    /// Checks that consecutive faces alternate between `diff_p` and
    /// `grad_p` steps (read in the forward direction).
    pub fn check(&self, stack: &Stack) -> Result<()> {
        let host = stack.host();
        let faces = self.forward_faces();
        if faces.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        for &f in &faces {
            let d = host.face_dim(f);
            if d != self.p && d + 1 != self.p {
                return Err(Error::InvalidPath(format!(
                    "face {} has dimension {d}, expected {} or {}",
                    host.face(f),
                    self.p,
                    self.p.wrapping_sub(1)
                )));
            }
        }
        for w in faces.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ok = if host.face_dim(a) == self.p {
                // differential: b a face of a, strictly higher
                host.is_covering_pair(b, a) && stack.altitude(b) > stack.altitude(a)
            } else {
                // flat: a a face of b, same altitude
                host.is_covering_pair(a, b) && stack.altitude(a) == stack.altitude(b)
            };
            if !ok {
                return Err(Error::InvalidPath(format!(
                    "step {} -> {} is neither flat nor differential",
                    host.face(a),
                    host.face(b)
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of trying to extend a `Λ_d` or `Λ̃_d` path by one face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// The path continues through this face. For forward paths ending at a
    /// `d`-face several continuations may exist; the smallest id is given.
    Extended(FaceId),
    /// Reversed path ending at a minimum.
    AtMinimum,
    /// Forward path ending at a `(d−1)`-face with no flat coface left; the
    /// face is separating.
    Blocked(FaceId),
}

/// Extends a gradient path of a Morse stack on a normal `d`-pseudomanifold.
pub fn extend_path(stack: &Stack, path: &LambdaPath) -> Result<Extension> {
    let d = require_normal(stack.host())?;
    require_morse(stack)?;
    if path.p != d {
        return Err(Error::InvalidPath(format!(
            "path dimension {} but host dimension {d}",
            path.p
        )));
    }
    path.check(stack)?;
    let host = stack.host();
    let y = *path.faces.last().expect("checked non-empty");
    let prev = path.faces.len().checked_sub(2).map(|i| path.faces[i]);
    let fy = stack.altitude(y);

    if path.reversed {
        if host.face_dim(y) == d {
            return Ok(match host.boundary(y).iter().find(|&&w| stack.altitude(w) == fy) {
                Some(&w) => Extension::Extended(w),
                None => Extension::AtMinimum,
            });
        }
        let z = host
            .cofaces(y)
            .iter()
            .copied()
            .find(|&z| Some(z) != prev)
            .expect("non-branching");
        if stack.altitude(z) < fy {
            Ok(Extension::Extended(z))
        } else {
            Err(Error::InvalidPath(format!("{} has no lower coface", host.face(y))))
        }
    } else if host.face_dim(y) == d {
        host.boundary(y)
            .iter()
            .copied()
            .find(|&w| stack.altitude(w) > fy)
            .map(Extension::Extended)
            .ok_or_else(|| Error::InvalidPath(format!("{} has no higher face", host.face(y))))
    } else {
        Ok(
            match host
                .cofaces(y)
                .iter()
                .copied()
                .find(|&t| Some(t) != prev && stack.altitude(t) == fy)
            {
                Some(t) => Extension::Extended(t),
                None => Extension::Blocked(y),
            },
        )
    }
}

/// Backward walk from a `d`-face: flat face, then the lower coface on the
/// other side, until a face with no flat partner (a minimum).
struct Tracer<'a> {
    stack: &'a Stack,
    grad: GradientField,
}

impl<'a> Tracer<'a> {
    fn new(stack: &'a Stack) -> Result<Self> {
        require_normal(stack.host())?;
        Ok(Tracer {
            stack,
            grad: gradient(stack)?,
        })
    }

    /// One backward step from a `d`-face: `Some((w, z))` with `w` the flat
    /// face and `z` the other coface of `w`, or `None` at a minimum.
    fn step(&self, y: FaceId) -> Option<(FaceId, FaceId)> {
        let host = self.stack.host();
        let w = self.grad.partner(y)?;
        debug_assert!(host.face_dim(w) + 1 == host.face_dim(y));
        let z = host
            .cofaces(w)
            .iter()
            .copied()
            .find(|&z| z != y)
            .expect("non-branching");
        debug_assert!(self.stack.altitude(z) < self.stack.altitude(w));
        Some((w, z))
    }

    fn all(&self) -> Vec<Option<FaceId>> {
        let host = self.stack.host();
        let d = host.dim() as usize;
        let mut memo: Vec<Option<FaceId>> = vec![None; host.len()];
        let mut trail = Vec::new();
        for x in host.faces_of_dim(d) {
            if memo[x.index()].is_some() {
                continue;
            }
            trail.clear();
            let mut cur = x;
            let root = loop {
                if let Some(m) = memo[cur.index()] {
                    break m;
                }
                trail.push(cur);
                match self.step(cur) {
                    Some((_, z)) => cur = z,
                    None => break cur,
                }
            };
            for &t in &trail {
                memo[t.index()] = Some(root);
            }
        }
        memo
    }
}

/// The unique minimum linked to the `d`-face `x` and the unique `Λ_d`-path
/// from it to `x`.
pub fn trace_to_minimum(stack: &Stack, x: FaceId) -> Result<(FaceId, LambdaPath)> {
    let tracer = Tracer::new(stack)?;
    let d = stack.host().dim() as usize;
    if stack.host().face_dim(x) != d {
        return Err(Error::InvalidArgument(format!(
            "{} is not a top-dimensional face",
            stack.host().face(x)
        )));
    }
    let mut walk = vec![x];
    let mut cur = x;
    while let Some((w, z)) = tracer.step(cur) {
        walk.push(w);
        walk.push(z);
        cur = z;
    }
    walk.reverse();
    Ok((cur, LambdaPath::new(walk, d, false)))
}

/// For every face, the minimum its `d`-face traces to (`None` below
/// dimension `d`). Linear in the number of faces.
pub fn trace_all(stack: &Stack) -> Result<Vec<Option<FaceId>>> {
    Ok(Tracer::new(stack)?.all())
}

/// `(d−1)`-faces whose two cofaces trace to distinct minima.
pub fn biconnected_faces(stack: &Stack) -> Result<Vec<FaceId>> {
    let memo = trace_all(stack)?;
    let host = stack.host();
    let d = host.dim() as usize;
    Ok(host
        .faces_of_dim(d - 1)
        .filter(|&r| {
            let c = host.cofaces(r);
            memo[c[0].index()] != memo[c[1].index()]
        })
        .collect())
}

/// `(d−1)`-faces strictly above both of their cofaces. Any stack on a
/// normal pseudomanifold.
pub fn separating_faces(stack: &Stack) -> Result<Vec<FaceId>> {
    let d = require_normal(stack.host())?;
    let host = stack.host();
    Ok(host
        .faces_of_dim(d - 1)
        .filter(|&r| {
            let a = stack.altitude(r);
            host.cofaces(r).iter().all(|&c| stack.altitude(c) < a)
        })
        .collect())
}

/// Random Morse stack obtained by peeling the complex: each step removes a
/// uniformly drawn free pair when one exists, otherwise a random facet. A
/// face's altitude is the index of the step removing it.
pub fn random_morse_stack(host: Arc<Complex>, seed: u64) -> Stack {
    random_morse_stack_with(host, seed, 0.0)
}

/// Like [`random_morse_stack`], but with probability `critical_rate` a step
/// removes a random facet even when free pairs are available. Higher rates
/// give more critical faces (and more minima).
pub fn random_morse_stack_with(host: Arc<Complex>, seed: u64, critical_rate: f64) -> Stack {
    let n = host.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut live_cofaces: Vec<usize> = host.ids().map(|f| host.cofaces(f).len()).collect();
    let mut alive = vec![true; n];
    let mut free: IndexSet<FaceId> = IndexSet::new();
    let mut facets: IndexSet<FaceId> = IndexSet::new();
    for f in host.ids() {
        match live_cofaces[f.index()] {
            0 => {
                facets.insert(f);
            }
            1 => {
                free.insert(f);
            }
            _ => {}
        }
    }
    let mut altitude: Vec<Altitude> = vec![0; n];
    let mut step: Altitude = 0;

    let release = |f: FaceId,
                   live: &mut Vec<usize>,
                   free: &mut IndexSet<FaceId>,
                   facets: &mut IndexSet<FaceId>,
                   alive: &Vec<bool>| {
        for &w in host.boundary(f) {
            if !alive[w.index()] {
                continue;
            }
            live[w.index()] -= 1;
            match live[w.index()] {
                0 => {
                    free.swap_remove(&w);
                    facets.insert(w);
                }
                1 => {
                    free.insert(w);
                }
                _ => {}
            }
        }
    };

    while !facets.is_empty() {
        step += 1;
        let pick_facet = free.is_empty() || (critical_rate > 0.0 && rng.random_bool(critical_rate));
        if pick_facet {
            let i = rng.random_range(0..facets.len());
            let f = facets.swap_remove_index(i).expect("in range");
            alive[f.index()] = false;
            altitude[f.index()] = step;
            release(f, &mut live_cofaces, &mut free, &mut facets, &alive);
        } else {
            let i = rng.random_range(0..free.len());
            let x = free.swap_remove_index(i).expect("in range");
            let y = *host
                .cofaces(x)
                .iter()
                .find(|c| alive[c.index()])
                .expect("free face has a live coface");
            facets.swap_remove(&y);
            alive[x.index()] = false;
            alive[y.index()] = false;
            altitude[x.index()] = step;
            altitude[y.index()] = step;
            release(y, &mut live_cofaces, &mut free, &mut facets, &alive);
            release(x, &mut live_cofaces, &mut free, &mut facets, &alive);
        }
    }
    Stack::new(host, altitude).expect("peeling order yields a stack")
}

/// A Morse stack whose gradient is exactly `pairs`.
///
/// Matched pairs are contracted to single nodes; every unmatched covering
/// pair `(x, y)` adds an arc from `y`'s node to `x`'s node, and each node
/// gets one more than the largest value among its predecessors.
pub fn stack_from_gradient(host: Arc<Complex>, pairs: &[(FaceId, FaceId)]) -> Result<Stack> {
    let field = GradientField::from_pairs(&host, pairs.to_vec())?;
    let n = host.len();
    // node of each face: the smaller id of its pair, or itself
    let node: Vec<usize> = host
        .ids()
        .map(|f| match field.partner(f) {
            Some(g) => f.index().min(g.index()),
            None => f.index(),
        })
        .collect();
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (x, y) in host.covering_pairs() {
        if field.partner(x) == Some(y) {
            continue;
        }
        let (from, to) = (node[y.index()], node[x.index()]);
        out_arcs[from].push(to);
        indegree[to] += 1;
    }
    let mut value = vec![1 as Altitude; n];
    let mut ready: Vec<usize> = (0..n).filter(|&i| node[i] == i && indegree[i] == 0).collect();
    let mut done = 0usize;
    let node_count = (0..n).filter(|&i| node[i] == i).count();
    while let Some(u) = ready.pop() {
        done += 1;
        for &v in &out_arcs[u] {
            value[v] = value[v].max(value[u] + 1);
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    if done != node_count {
        let stuck = (0..n)
            .find(|&i| node[i] == i && indegree[i] > 0)
            .expect("some node is left");
        return Err(Error::GradientCycle(host.face(FaceId::new(stuck)).clone()));
    }
    let altitude = (0..n).map(|i| value[node[i]]).collect();
    Stack::new(host, altitude)
}

/// Checks that `F` is a Morse stack exactly when `−F` is a flat discrete
/// Morse function. The right-hand side is evaluated on the negated map
/// without reusing the stack predicates.
pub fn dmf_dual_check(stack: &Stack) -> bool {
    let lhs = stack_violation(stack.host(), stack.altitudes()).is_none() && is_morse(stack);

    let host = stack.host();
    let neg: Vec<Altitude> = stack.altitudes().iter().map(|a| -a).collect();
    let mut equal_pairs = vec![0usize; host.len()];
    let mut monotone = true;
    for (x, y) in host.covering_pairs() {
        let (gx, gy) = (neg[x.index()], neg[y.index()]);
        if gx > gy {
            monotone = false;
        }
        if gx >= gy {
            equal_pairs[x.index()] += 1;
            equal_pairs[y.index()] += 1;
        }
    }
    let rhs = monotone && equal_pairs.iter().all(|&c| c <= 1);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;
    use crate::fixtures;
    use crate::simplex;

    fn id(stack: &Stack, s: Simplex) -> FaceId {
        stack.host().require(&s).unwrap()
    }

    fn named(stack: &Stack, ids: &[FaceId]) -> Vec<Simplex> {
        ids.iter().map(|&f| stack.host().face(f).clone()).collect()
    }

    #[test]
    fn cyc6_is_morse() {
        let f = fixtures::cyc6_stack();
        assert!(is_morse(&f));
        let g = gradient(&f).unwrap();
        let pairs: Vec<(Simplex, Simplex)> = g
            .pairs()
            .iter()
            .map(|&(x, y)| (f.host().face(x).clone(), f.host().face(y).clone()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (simplex![0], simplex![0, 5]),
                (simplex![1], simplex![1, 2]),
                (simplex![2], simplex![2, 3]),
                (simplex![4], simplex![4, 5]),
            ]
        );
        // free pairs and flat pairs coincide
        let mut free = f.free_pairs(None);
        free.sort();
        assert_eq!(free, g.pairs());
    }

    #[test]
    fn constant_stack_is_not_morse() {
        let f = Stack::constant(Arc::new(fixtures::simplex_boundary(3)), 0);
        assert_eq!(morse_witness(&f), Some(id(&f, simplex![0])));
        assert!(matches!(gradient(&f), Err(Error::NotMorse(_))));
    }

    #[test]
    fn strictly_decreasing_stack_has_empty_gradient() {
        let host = Arc::new(fixtures::torus(3, 3));
        let alt = host.ids().map(|f| 10 - host.face_dim(f) as Altitude).collect();
        let f = Stack::new(host, alt).unwrap();
        assert!(is_morse(&f));
        assert!(gradient(&f).unwrap().is_empty());
        let r = classify(&f).unwrap();
        assert_eq!(r.critical_count(), f.host().len());
    }

    #[test]
    fn classify_cyc6() {
        let f = fixtures::cyc6_stack();
        let r = classify(&f).unwrap();
        assert_eq!(named(&f, &r.critical[1]), vec![simplex![0, 1], simplex![3, 4]]);
        assert_eq!(named(&f, &r.critical[0]), vec![simplex![3], simplex![5]]);
        assert_eq!(r.regular.iter().map(Vec::len).sum::<usize>(), 8);
    }

    #[test]
    fn extend_reversed_path_to_minimum() {
        let f = fixtures::cyc6_stack();
        let mut path = LambdaPath::new(vec![id(&f, simplex![2, 3])], 1, true);
        let expected = [simplex![2], simplex![1, 2], simplex![1], simplex![0, 1]];
        for s in expected {
            let ext = extend_path(&f, &path).unwrap();
            let next = id(&f, s);
            assert_eq!(ext, Extension::Extended(next));
            path.faces.push(next);
        }
        assert_eq!(extend_path(&f, &path).unwrap(), Extension::AtMinimum);

        let at_min = LambdaPath::new(vec![id(&f, simplex![0, 1])], 1, true);
        assert_eq!(extend_path(&f, &at_min).unwrap(), Extension::AtMinimum);
    }

    #[test]
    fn forward_path_blocks_at_separating_face() {
        let f = fixtures::cyc6_stack();
        let path = LambdaPath::new(
            vec![
                id(&f, simplex![3, 4]),
                id(&f, simplex![4]),
                id(&f, simplex![4, 5]),
                id(&f, simplex![5]),
            ],
            1,
            false,
        );
        assert_eq!(extend_path(&f, &path).unwrap(), Extension::Blocked(id(&f, simplex![5])));
        let bad = LambdaPath::new(vec![id(&f, simplex![3, 4]), id(&f, simplex![3])], 1, true);
        assert!(matches!(extend_path(&f, &bad), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn traces_of_cyc6() {
        let f = fixtures::cyc6_stack();
        let (m, path) = trace_to_minimum(&f, id(&f, simplex![2, 3])).unwrap();
        assert_eq!(m, id(&f, simplex![0, 1]));
        assert_eq!(
            named(&f, &path.faces),
            vec![simplex![0, 1], simplex![1], simplex![1, 2], simplex![2], simplex![2, 3]]
        );
        path.check(&f).unwrap();

        let (m, path) = trace_to_minimum(&f, id(&f, simplex![4, 5])).unwrap();
        assert_eq!(m, id(&f, simplex![3, 4]));
        assert_eq!(
            named(&f, &path.faces),
            vec![simplex![3, 4], simplex![4], simplex![4, 5]]
        );

        let (m, path) = trace_to_minimum(&f, id(&f, simplex![0, 1])).unwrap();
        assert_eq!(m, id(&f, simplex![0, 1]));
        assert_eq!(path.faces.len(), 1);
    }

    #[test]
    fn biconnected_and_separating_of_cyc6() {
        let f = fixtures::cyc6_stack();
        let b = biconnected_faces(&f).unwrap();
        assert_eq!(named(&f, &b), vec![simplex![3], simplex![5]]);
        assert_eq!(separating_faces(&f).unwrap(), b);
    }

    #[test]
    fn single_minimum_has_no_biconnected_face() {
        let host = Arc::new(fixtures::torus(3, 3));
        let f = random_morse_stack(host, 5);
        assert_eq!(f.minima().len(), 1);
        assert!(biconnected_faces(&f).unwrap().is_empty());
    }

    #[test]
    fn random_stack_on_triangle() {
        let host = Arc::new(Complex::closure([simplex![0, 1, 2]]));
        for seed in 0..100 {
            let f = random_morse_stack(Arc::clone(&host), seed);
            assert!(is_morse(&f));
            let r = classify(&f).unwrap();
            assert_eq!(r.critical_count(), 1);
            assert_eq!(r.critical[0].len(), 1);
            assert_eq!(gradient(&f).unwrap().len(), 3);
        }
    }

    #[test]
    fn random_stack_on_cycle() {
        let host = Arc::new(fixtures::cycle(6));
        for seed in 0..50 {
            let f = random_morse_stack(Arc::clone(&host), seed);
            let r = classify(&f).unwrap();
            assert_eq!(r.critical[1].len(), 1);
            assert_eq!(r.critical[0].len(), 1);
        }
    }

    #[test]
    fn random_stack_on_empty_complex() {
        let f = random_morse_stack(Arc::new(Complex::empty()), 1);
        assert!(f.altitudes().is_empty());
    }

    #[test]
    fn gradient_round_trip() {
        let host = Arc::new(Complex::closure([simplex![0, 1]]));
        let f = stack_from_gradient(Arc::clone(&host), &[]).unwrap();
        assert_eq!(f.at(&simplex![0, 1]).unwrap(), 1);
        assert_eq!(f.at(&simplex![0]).unwrap(), 2);
        assert_eq!(f.at(&simplex![1]).unwrap(), 2);

        let c = fixtures::cyc6_stack();
        let g = gradient(&c).unwrap();
        let f = stack_from_gradient(Arc::clone(c.host_arc()), g.pairs()).unwrap();
        assert_eq!(gradient(&f).unwrap(), g);
        assert_eq!(classify(&f).unwrap(), classify(&c).unwrap());

        let e = id(&c, simplex![0, 1]);
        let v = id(&c, simplex![0]);
        let w = id(&c, simplex![1]);
        assert!(matches!(
            stack_from_gradient(Arc::clone(c.host_arc()), &[(v, e), (w, e)]),
            Err(Error::NotAMatching(_))
        ));
    }

    #[test]
    fn gradient_cycle_is_rejected() {
        // around a triangle boundary, pairing every vertex with the next edge
        let host = Arc::new(fixtures::cycle(3));
        let pairs: Vec<(FaceId, FaceId)> = (0..3u32)
            .map(|i| {
                let v = host.require(&simplex![i]).unwrap();
                let e = host.require(&simplex![i, (i + 1) % 3]).unwrap();
                (v, e)
            })
            .collect();
        assert!(matches!(
            stack_from_gradient(host, &pairs),
            Err(Error::GradientCycle(_))
        ));
    }

    #[test]
    fn dual_check() {
        assert!(dmf_dual_check(&fixtures::cyc6_stack()));
        let c = Stack::constant(Arc::new(fixtures::simplex_boundary(3)), 0);
        assert!(!is_morse(&c));
        assert!(dmf_dual_check(&c));
    }

    #[test]
    fn morse_minima_are_single_facets() {
        let host = Arc::new(fixtures::torus(4, 4));
        for seed in 0..20 {
            let f = random_morse_stack_with(Arc::clone(&host), seed, 0.2);
            for m in &f.minima().minima {
                assert_eq!(m.faces.len(), 1);
                assert!(host.is_facet(m.faces[0]));
            }
        }
    }
}
