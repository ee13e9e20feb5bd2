//! Simplexes, simplicial complexes and subsets of their faces.
//!
//! A [`Complex`] is immutable once built. Faces are stored in canonical order
//! (by dimension, then lexicographically by vertex list) and addressed by
//! [`FaceId`]. Incidence (codimension-1 faces and cofaces) is indexed eagerly
//! in compressed-row form.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

pub type Vertex = u32;

/// A non-empty finite set of vertices, kept strictly sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex(SmallVec<[Vertex; 4]>);

/// Builds a [`Simplex`] from literal vertices, panicking on invalid input.
#[macro_export]
macro_rules! simplex {
    ($($v:expr),+ $(,)?) => {
        $crate::complex::Simplex::new([$($v),+]).expect("valid simplex literal")
    };
}

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: SmallVec<[Vertex; 4]> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex set".into()));
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("duplicate vertex {}", w[0])));
        }
        Ok(Simplex(v))
    }

    fn from_sorted(v: SmallVec<[Vertex; 4]>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_err())
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: SmallVec<[Vertex; 4]> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex::from_sorted(v)
    }

    /// `self ∖ other`, or `None` when nothing is left.
    pub fn difference(&self, other: &Simplex) -> Option<Simplex> {
        let v: SmallVec<[Vertex; 4]> = self
            .0
            .iter()
            .copied()
            .filter(|v| other.0.binary_search(v).is_err())
            .collect();
        (!v.is_empty()).then(|| Simplex::from_sorted(v))
    }

    /// The codimension-1 face obtained by dropping the `i`-th vertex.
    pub fn without(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Simplex::from_sorted(v))
    }

    /// All non-empty subsets, `self` included.
    pub fn subsets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(move |mask| Simplex::from_sorted((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Index of a face inside its host complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(u32);

impl FaceId {
    pub fn new(index: usize) -> Self {
        FaceId(u32::try_from(index).expect("face index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<FaceId>,
}

impl Csr {
    fn row(&self, i: usize) -> &[FaceId] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }
}

/// A finite simplicial complex.
#[derive(Debug)]
pub struct Complex {
    faces: Vec<Simplex>,
    index: HashMap<Simplex, FaceId>,
    /// `dim_start[p]..dim_start[p + 1]` are the ids of the `p`-faces.
    dim_start: Vec<usize>,
    boundary: Csr,
    cofaces: Csr,
    normal: OnceLock<bool>,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        Complex {
            faces: self.faces.clone(),
            index: self.index.clone(),
            dim_start: self.dim_start.clone(),
            boundary: self.boundary.clone(),
            cofaces: self.cofaces.clone(),
            normal: OnceLock::new(),
        }
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
    }
}

impl Eq for Complex {}

impl Complex {
    pub fn empty() -> Self {
        Complex::from_sorted_closed(Vec::new())
    }

    /// The smallest complex containing every generator.
    pub fn closure<I>(generators: I) -> Self
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut set: HashSet<Simplex> = HashSet::new();
        for g in generators {
            if set.contains(&g) {
                continue;
            }
            for s in g.subsets() {
                set.insert(s);
            }
        }
        let mut faces: Vec<Simplex> = set.into_iter().collect();
        faces.sort_unstable();
        Complex::from_sorted_closed(faces)
    }

    /// Builds a complex from a face set that must already be closed.
    pub fn from_faces<I>(faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut faces: Vec<Simplex> = faces.into_iter().collect();
        faces.sort_unstable();
        faces.dedup();
        let present: HashSet<&Simplex> = faces.iter().collect();
        for f in &faces {
            for i in 0..f.0.len() {
                if let Some(b) = f.without(i) {
                    if !present.contains(&b) {
                        return Err(Error::NotClosed(f.clone()));
                    }
                }
            }
        }
        Ok(Complex::from_sorted_closed(faces))
    }

    fn from_sorted_closed(faces: Vec<Simplex>) -> Self {
        let n = faces.len();
        let index: HashMap<Simplex, FaceId> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), FaceId::new(i)))
            .collect();

        let top = faces.last().map_or(0, |f| f.0.len());
        let dim_start: Vec<usize> = (0..=top).map(|p| faces.partition_point(|f| f.0.len() <= p)).collect();

        let mut boundary = Csr {
            offsets: Vec::with_capacity(n + 1),
            targets: Vec::new(),
        };
        let mut coface_count = vec![0u32; n];
        boundary.offsets.push(0);
        for f in &faces {
            if f.0.len() > 1 {
                for i in 0..f.0.len() {
                    let b = f.without(i).expect("dim >= 1");
                    let id = index[&b];
                    coface_count[id.index()] += 1;
                    boundary.targets.push(id);
                }
                let row_start = *boundary.offsets.last().unwrap() as usize;
                boundary.targets[row_start..].sort_unstable();
            }
            boundary.offsets.push(boundary.targets.len() as u32);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0u32);
        for c in &coface_count {
            offsets.push(offsets.last().unwrap() + c);
        }
        let mut fill: Vec<u32> = offsets[..n].to_vec();
        let mut targets = vec![FaceId(0); boundary.targets.len()];
        for y in 0..n {
            for &x in boundary.row(y) {
                targets[fill[x.index()] as usize] = FaceId::new(y);
                fill[x.index()] += 1;
            }
        }
        let cofaces = Csr { offsets, targets };

        Complex {
            faces,
            index,
            dim_start,
            boundary,
            cofaces,
            normal: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Largest face dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.dim_start.len() as isize - 2
    }

    pub fn face(&self, id: FaceId) -> &Simplex {
        &self.faces[id.index()]
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn id_of(&self, s: &Simplex) -> Option<FaceId> {
        self.index.get(s).copied()
    }

    /// Like [`Complex::id_of`] but reports a missing face as an error.
    pub fn require(&self, s: &Simplex) -> Result<FaceId> {
        self.id_of(s).ok_or_else(|| Error::FaceNotInComplex(s.clone()))
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = FaceId> + ExactSizeIterator {
        (0..self.faces.len()).map(FaceId::new)
    }

    pub fn face_dim(&self, id: FaceId) -> usize {
        self.faces[id.index()].dim()
    }

    /// Ids of all `p`-faces (a contiguous range).
    pub fn faces_of_dim(&self, p: usize) -> impl DoubleEndedIterator<Item = FaceId> + ExactSizeIterator {
        let (lo, hi) = if p + 1 < self.dim_start.len() {
            (self.dim_start[p], self.dim_start[p + 1])
        } else {
            (0, 0)
        };
        (lo..hi).map(FaceId::new)
    }

    pub fn count_of_dim(&self, p: usize) -> usize {
        self.faces_of_dim(p).len()
    }

    /// Codimension-1 faces of `id`, in canonical order.
    pub fn boundary(&self, id: FaceId) -> &[FaceId] {
        self.boundary.row(id.index())
    }

    /// Faces having `id` as a codimension-1 face, in canonical order.
    pub fn cofaces(&self, id: FaceId) -> &[FaceId] {
        self.cofaces.row(id.index())
    }

    pub fn is_facet(&self, id: FaceId) -> bool {
        self.cofaces(id).is_empty()
    }

    pub fn facets(&self) -> Vec<FaceId> {
        self.ids().filter(|&f| self.is_facet(f)).collect()
    }

    /// Number of incidence relations `x ⊊ y` between codimension-1 faces.
    pub fn incidence_count(&self) -> usize {
        self.boundary.targets.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.dim_start.len().saturating_sub(1))
            .map(|p| {
                let c = self.count_of_dim(p) as i64;
                if p % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// All covering pairs `(x, y)`: `x ⊂ y`, `dim x = dim y − 1`.
    pub fn covering_pairs(&self) -> Vec<(FaceId, FaceId)> {
        self.ids()
            .flat_map(|x| self.cofaces(x).iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn is_covering_pair(&self, x: FaceId, y: FaceId) -> bool {
        self.boundary(y).binary_search(&x).is_ok()
    }

    /// Covering pairs `(x, y)` where `y` is the only face containing `x`.
    pub fn free_pairs(&self) -> Vec<(FaceId, FaceId)> {
        self.ids()
            .filter_map(|x| match self.cofaces(x) {
                [y] => Some((x, *y)),
                _ => None,
            })
            .collect()
    }

    pub fn is_free_pair(&self, x: FaceId, y: FaceId) -> bool {
        self.cofaces(x) == [y]
    }

    /// Removes the free pair `{x, y}`.
    pub fn collapse(&self, x: FaceId, y: FaceId) -> Result<Complex> {
        if !self.is_free_pair(x, y) {
            return Err(Error::NotFreePair {
                x: self.face(x).clone(),
                y: self.face(y).clone(),
            });
        }
        Ok(self.filtered(|f| f != x && f != y))
    }

    /// Removes free pairs (of dimension `p` when given) until none is left.
    ///
    /// The pair removed at each step is drawn from the current candidates by
    /// a generator seeded with `seed`.
    pub fn ultimate_collapse(&self, p: Option<usize>, seed: u64) -> Complex {
        let n = self.len();
        let mut alive = vec![true; n];
        let mut count: Vec<usize> = self.ids().map(|f| self.cofaces(f).len()).collect();
        let dim_ok = |x: FaceId| p.is_none_or(|p| self.face_dim(x) + 1 == p);

        let mut queued = vec![false; n];
        let mut work: Vec<FaceId> = Vec::new();
        for x in self.ids() {
            if count[x.index()] == 1 && dim_ok(x) {
                queued[x.index()] = true;
                work.push(x);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while !work.is_empty() {
            let x = work.swap_remove(rng.random_range(0..work.len()));
            queued[x.index()] = false;
            if !alive[x.index()] || count[x.index()] != 1 {
                continue;
            }
            let y = *self
                .cofaces(x)
                .iter()
                .find(|c| alive[c.index()])
                .expect("one live coface");
            alive[x.index()] = false;
            alive[y.index()] = false;
            for &w in self.boundary(y).iter().chain(self.boundary(x)) {
                if !alive[w.index()] {
                    continue;
                }
                count[w.index()] -= 1;
                if count[w.index()] == 1 && dim_ok(w) && !queued[w.index()] {
                    queued[w.index()] = true;
                    work.push(w);
                }
            }
        }
        self.filtered(|f| alive[f.index()])
    }

    /// The subcomplex made of the faces accepted by `keep`; the caller
    /// guarantees the result is closed.
    pub(crate) fn filtered(&self, keep: impl Fn(FaceId) -> bool) -> Complex {
        let faces = self.ids().filter(|&f| keep(f)).map(|f| self.face(f).clone()).collect();
        Complex::from_sorted_closed(faces)
    }

    /// Maps the faces of `sub` (a subcomplex) to ids of `self`.
    pub fn ids_of_subcomplex(&self, sub: &Complex) -> Result<Vec<FaceId>> {
        sub.faces.iter().map(|f| self.require(f)).collect()
    }

    /// All faces of `id`, itself included.
    pub fn closure_of(&self, id: FaceId) -> Vec<FaceId> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            let f = out[i];
            out.extend_from_slice(self.boundary(f));
            i += 1;
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All faces containing `id`, itself included.
    pub fn star_of(&self, id: FaceId) -> Vec<FaceId> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            let f = out[i];
            out.extend_from_slice(self.cofaces(f));
            i += 1;
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Closure, inside `self`, of a set of face ids; sorted.
    pub fn closure_of_ids(&self, ids: impl IntoIterator<Item = FaceId>) -> Vec<FaceId> {
        let mut mark = vec![false; self.len()];
        let mut stack: Vec<FaceId> = Vec::new();
        for id in ids {
            if !mark[id.index()] {
                mark[id.index()] = true;
                stack.push(id);
            }
        }
        while let Some(f) = stack.pop() {
            for &b in self.boundary(f) {
                if !mark[b.index()] {
                    mark[b.index()] = true;
                    stack.push(b);
                }
            }
        }
        self.ids().filter(|f| mark[f.index()]).collect()
    }

    pub(crate) fn normal_cache(&self) -> &OnceLock<bool> {
        &self.normal
    }
}

/// A set of faces of a host complex.
#[derive(Clone, Debug)]
pub struct FaceSubset<'a> {
    host: &'a Complex,
    members: Vec<bool>,
    len: usize,
    open: bool,
    closed: bool,
}

impl<'a> FaceSubset<'a> {
    pub fn new(host: &'a Complex, ids: impl IntoIterator<Item = FaceId>) -> Self {
        let mut members = vec![false; host.len()];
        for id in ids {
            members[id.index()] = true;
        }
        FaceSubset::from_mask(host, members)
    }

    pub fn from_mask(host: &'a Complex, members: Vec<bool>) -> Self {
        assert_eq!(members.len(), host.len());
        let len = members.iter().filter(|&&m| m).count();
        let mut open = true;
        let mut closed = true;
        for x in host.ids() {
            if !members[x.index()] {
                continue;
            }
            if host.cofaces(x).iter().any(|y| !members[y.index()]) {
                open = false;
            }
            if host.boundary(x).iter().any(|y| !members[y.index()]) {
                closed = false;
            }
        }
        FaceSubset {
            host,
            members,
            len,
            open,
            closed,
        }
    }

    pub fn all(host: &'a Complex) -> Self {
        FaceSubset::from_mask(host, vec![true; host.len()])
    }

    pub fn host(&self) -> &'a Complex {
        self.host
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: FaceId) -> bool {
        self.members[id.index()]
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.host.ids().filter(|f| self.members[f.index()])
    }

    /// True iff every coface in the host of a member is a member.
    pub fn is_open(&self) -> bool {
        self.open
    }

    /// True iff the members form a complex.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn complement(&self) -> FaceSubset<'a> {
        FaceSubset::from_mask(self.host, self.members.iter().map(|m| !m).collect())
    }

    /// Members not contained in another member.
    pub fn facets(&self) -> Vec<FaceId> {
        self.iter().filter(|&f| !self.has_member_superset(f)).collect()
    }

    fn has_member_superset(&self, f: FaceId) -> bool {
        self.host
            .star_of(f)
            .into_iter()
            .any(|g| g != f && self.members[g.index()])
    }

    /// Maximal path-connected parts, where a path step is any inclusion
    /// between members. Components are sorted and ordered by smallest id.
    pub fn connected_components(&self) -> Vec<Vec<FaceId>> {
        let host = self.host;
        let mut dsu = DisjointSets::new(host.len());
        if self.open {
            // inclusions inside an open set factor through covering pairs
            for x in self.iter() {
                for &y in host.cofaces(x) {
                    dsu.union(x.index(), y.index());
                }
            }
        } else {
            let mut stamp = vec![u32::MAX; host.len()];
            let mut stack = Vec::new();
            for (round, y) in self.iter().enumerate() {
                let round = round as u32;
                stack.clear();
                stack.push(y);
                while let Some(f) = stack.pop() {
                    for &b in host.boundary(f) {
                        if stamp[b.index()] != round {
                            stamp[b.index()] = round;
                            if self.members[b.index()] {
                                dsu.union(y.index(), b.index());
                            }
                            stack.push(b);
                        }
                    }
                }
            }
        }
        group(self.iter(), |f| dsu.find(f.index()))
    }

    /// Partition by strong `d`-path reachability: `d`-faces are linked when
    /// they share a `(d−1)`-face lying in the subset. Every other member is
    /// attached to the component of its smallest-id `d`-face superset.
    pub fn strong_connected_components(&self, d: usize) -> Result<Vec<Vec<FaceId>>> {
        let host = self.host;
        let mut dsu = DisjointSets::new(host.len());
        if d > 0 {
            for r in host.faces_of_dim(d - 1) {
                if !self.members[r.index()] {
                    continue;
                }
                let cof: Vec<FaceId> = host
                    .cofaces(r)
                    .iter()
                    .copied()
                    .filter(|c| self.members[c.index()])
                    .collect();
                for c in &cof {
                    dsu.union(r.index(), c.index());
                }
            }
        }
        for x in self.iter() {
            let dx = host.face_dim(x);
            if dx == d {
                continue;
            }
            if dx > d {
                return Err(Error::NotPure(d));
            }
            if dx + 1 == d && host.cofaces(x).iter().any(|c| self.members[c.index()]) {
                continue;
            }
            let anchor = host
                .star_of(x)
                .into_iter()
                .find(|&g| host.face_dim(g) == d && self.members[g.index()])
                .ok_or(Error::NotPure(d))?;
            dsu.union(anchor.index(), x.index());
        }
        Ok(group(self.iter(), |f| dsu.find(f.index())))
    }
}

fn group(ids: impl Iterator<Item = FaceId>, mut key: impl FnMut(FaceId) -> usize) -> Vec<Vec<FaceId>> {
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Vec<FaceId>> = Vec::new();
    for f in ids {
        let k = key(f);
        let i = *slot.entry(k).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[i].push(f);
    }
    out
}
