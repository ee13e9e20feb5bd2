//! Simplicial stacks: integer altitudes that never increase from a face to
//! its cofaces, so that every upper section `F[λ] = {x : F(x) ≥ λ}` is a
//! subcomplex.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, FaceId, Simplex};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::manifold::require_normal;

pub type Altitude = i64;

/// How a free pair is lowered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CollapseMode {
    /// Decrement both altitudes by one.
    Unit,
    /// Lower both altitudes in one step to where repeated unit collapses of
    /// the same pair would stop. Needs a normal pseudomanifold host and a
    /// top-dimensional pair.
    #[default]
    Batch,
}

#[derive(Clone, Debug)]
pub struct Stack {
    host: Arc<Complex>,
    altitude: Vec<Altitude>,
    lambda_min: Altitude,
}

impl PartialEq for Stack {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.host, &other.host) || self.host == other.host) && self.altitude == other.altitude
    }
}

/// First covering pair `(x, y)` with `F(x) < F(y)`, in canonical order.
pub fn stack_violation(host: &Complex, altitude: &[Altitude]) -> Option<(FaceId, FaceId)> {
    host.ids().find_map(|x| {
        host.cofaces(x)
            .iter()
            .find(|y| altitude[x.index()] < altitude[y.index()])
            .map(|&y| (x, y))
    })
}

impl Stack {
    /// Checks monotonicity over all covering pairs.
    pub fn new(host: Arc<Complex>, altitude: Vec<Altitude>) -> Result<Stack> {
        assert_eq!(altitude.len(), host.len(), "one altitude per face");
        if let Some((x, y)) = stack_violation(&host, &altitude) {
            return Err(Error::StackViolation {
                face: host.face(x).clone(),
                coface: host.face(y).clone(),
            });
        }
        Ok(Stack::new_unchecked(host, altitude))
    }

    fn new_unchecked(host: Arc<Complex>, altitude: Vec<Altitude>) -> Stack {
        let lambda_min = altitude.iter().copied().min().unwrap_or(0);
        Stack {
            host,
            altitude,
            lambda_min,
        }
    }

    /// Builds a stack from per-face values; every face of `host` needs one.
    pub fn from_values<I>(host: Arc<Complex>, values: I) -> Result<Stack>
    where
        I: IntoIterator<Item = (Simplex, Altitude)>,
    {
        let mut alt: Vec<Option<Altitude>> = vec![None; host.len()];
        for (s, v) in values {
            alt[host.require(&s)?.index()] = Some(v);
        }
        let altitude = alt
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| Error::MissingAltitude(host.face(FaceId::new(i)).clone())))
            .collect::<Result<Vec<_>>>()?;
        Stack::new(host, altitude)
    }

    pub fn constant(host: Arc<Complex>, value: Altitude) -> Stack {
        let n = host.len();
        Stack::new_unchecked(host, vec![value; n])
    }

    pub fn host(&self) -> &Complex {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<Complex> {
        &self.host
    }

    pub fn altitude(&self, id: FaceId) -> Altitude {
        self.altitude[id.index()]
    }

    pub fn altitudes(&self) -> &[Altitude] {
        &self.altitude
    }

    /// Altitude of a face given by its vertices.
    pub fn at(&self, s: &Simplex) -> Result<Altitude> {
        Ok(self.altitude(self.host.require(s)?))
    }

    pub fn lambda_min(&self) -> Altitude {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> Altitude {
        self.altitude.iter().copied().max().unwrap_or(0)
    }

    /// `F[λ]`.
    pub fn section(&self, lambda: Altitude) -> Complex {
        self.host.filtered(|f| self.altitude(f) >= lambda)
    }

    /// Regional minima and the divide.
    ///
    /// A minimum is a component of `{F ≤ λ}` carrying no face below `λ`.
    /// Since `{F ≤ λ}` is open, its connectivity runs through covering
    /// pairs, so minima are the components of equal-altitude covering-pair
    /// adjacency that have no strictly lower coface.
    pub fn minima(&self) -> MinimaDecomposition {
        let host = &*self.host;
        let n = host.len();
        let mut dsu = DisjointSets::new(n);
        for x in host.ids() {
            for &y in host.cofaces(x) {
                if self.altitude(x) == self.altitude(y) {
                    dsu.union(x.index(), y.index());
                }
            }
        }
        let mut spoiled = vec![false; n];
        for x in host.ids() {
            if host.cofaces(x).iter().any(|&y| self.altitude(y) < self.altitude(x)) {
                let r = dsu.find(x.index());
                spoiled[r] = true;
            }
        }
        let mut slot: HashMap<usize, usize> = HashMap::new();
        let mut minima: Vec<Minimum> = Vec::new();
        let mut label = vec![None; n];
        for x in host.ids() {
            let r = dsu.find(x.index());
            if spoiled[r] {
                continue;
            }
            let i = *slot.entry(r).or_insert_with(|| {
                minima.push(Minimum {
                    faces: Vec::new(),
                    altitude: self.altitude(x),
                });
                minima.len() - 1
            });
            minima[i].faces.push(x);
            label[x.index()] = Some(i);
        }
        let divide = host.filtered(|f| label[f.index()].is_none());
        MinimaDecomposition { minima, divide, label }
    }

    /// The free pair of `F` whose lower face is `x`, if any: `x` has a single
    /// coface `y` at its own altitude and `F(x) > λ_m`.
    pub fn free_coface(&self, x: FaceId) -> Option<FaceId> {
        let a = self.altitude(x);
        if a <= self.lambda_min {
            return None;
        }
        let mut flat = self.host.cofaces(x).iter().filter(|&&y| self.altitude(y) == a);
        match (flat.next(), flat.next()) {
            (Some(&y), None) => Some(y),
            _ => None,
        }
    }

    pub fn is_free_pair(&self, x: FaceId, y: FaceId) -> bool {
        self.free_coface(x) == Some(y)
    }

    /// Free pairs `(x, y)` with `dim y = p`, or of every dimension.
    pub fn free_pairs(&self, p: Option<usize>) -> Vec<(FaceId, FaceId)> {
        let candidates: Box<dyn Iterator<Item = FaceId>> = match p {
            Some(0) => return Vec::new(),
            Some(p) => Box::new(self.host.faces_of_dim(p - 1)),
            None => Box::new(self.host.ids()),
        };
        candidates.filter_map(|x| self.free_coface(x).map(|y| (x, y))).collect()
    }

    /// Elementary collapse through the free pair `(x, y)`.
    pub fn collapse(&self, x: FaceId, y: FaceId, mode: CollapseMode) -> Result<Stack> {
        if !self.is_free_pair(x, y) {
            return Err(Error::NotFreePair {
                x: self.host.face(x).clone(),
                y: self.host.face(y).clone(),
            });
        }
        let target = match mode {
            CollapseMode::Unit => self.altitude(x) - 1,
            CollapseMode::Batch => {
                let d = require_normal(&self.host)?;
                if self.host.face_dim(y) != d {
                    return Err(Error::InvalidArgument(
                        "batch collapse needs a top-dimensional pair".into(),
                    ));
                }
                self.batch_target(x, y)
            }
        };
        let mut altitude = self.altitude.clone();
        altitude[x.index()] = target;
        altitude[y.index()] = target;
        Ok(Stack {
            host: Arc::clone(&self.host),
            altitude,
            lambda_min: self.lambda_min,
        })
    }

    /// Where repeated unit collapses of `(x, y)` stop: the altitude of the
    /// other coface of `x`, but never below `λ_m`.
    fn batch_target(&self, x: FaceId, y: FaceId) -> Altitude {
        let other = self
            .host
            .cofaces(x)
            .iter()
            .filter(|&&z| z != y)
            .map(|&z| self.altitude(z))
            .max()
            .unwrap_or(self.lambda_min);
        other.max(self.lambda_min)
    }

    /// Collapses free top-dimensional pairs until none is left.
    ///
    /// Candidate `(d−1)`-faces sit on a worklist; each round draws one at
    /// random (seeded), and after a collapse the other `(d−1)`-faces of the
    /// lowered `d`-face are re-queued. In unit mode the drawn pair is
    /// collapsed one step at a time for as long as it stays free, which
    /// lands on the same altitudes as batch mode.
    pub fn ultimate_d_collapse(&self, seed: u64, mode: CollapseMode) -> Result<Stack> {
        let d = require_normal(&self.host)?;
        let host = &*self.host;
        let mut h = Stack {
            host: Arc::clone(&self.host),
            altitude: self.altitude.clone(),
            lambda_min: self.lambda_min,
        };
        let mut queued = vec![false; host.len()];
        let mut work: Vec<FaceId> = host.faces_of_dim(d - 1).collect();
        for x in &work {
            queued[x.index()] = true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while !work.is_empty() {
            let x = work.swap_remove(rng.random_range(0..work.len()));
            queued[x.index()] = false;
            let Some(y) = h.free_coface(x) else { continue };
            match mode {
                CollapseMode::Batch => {
                    let t = h.batch_target(x, y);
                    h.altitude[x.index()] = t;
                    h.altitude[y.index()] = t;
                }
                CollapseMode::Unit => {
                    while h.is_free_pair(x, y) {
                        h.altitude[x.index()] -= 1;
                        h.altitude[y.index()] -= 1;
                    }
                }
            }
            for &w in host.boundary(y) {
                if w != x && !queued[w.index()] {
                    queued[w.index()] = true;
                    work.push(w);
                }
            }
        }
        Ok(h)
    }
}

/// Fills missing altitudes from the top down: a face without a value gets
/// the largest value among its cofaces. Facets must be given.
pub fn complete_from_facets(host: Arc<Complex>, values: &HashMap<Simplex, Altitude>) -> Result<Stack> {
    for s in values.keys() {
        host.require(s)?;
    }
    let mut altitude = vec![0; host.len()];
    for x in host.ids().rev() {
        altitude[x.index()] = match values.get(host.face(x)) {
            Some(&v) => v,
            None => host
                .cofaces(x)
                .iter()
                .map(|y| altitude[y.index()])
                .max()
                .ok_or_else(|| Error::MissingAltitude(host.face(x).clone()))?,
        };
    }
    Stack::new(host, altitude)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimum {
    /// Sorted face ids; an open, connected set.
    pub faces: Vec<FaceId>,
    pub altitude: Altitude,
}

#[derive(Clone, Debug)]
pub struct MinimaDecomposition {
    /// Ordered by smallest face id.
    pub minima: Vec<Minimum>,
    pub divide: Complex,
    label: Vec<Option<usize>>,
}

impl MinimaDecomposition {
    /// Index into [`MinimaDecomposition::minima`] of the minimum holding `f`.
    pub fn minimum_of(&self, f: FaceId) -> Option<usize> {
        self.label[f.index()]
    }

    pub fn divide_ids(&self) -> Vec<FaceId> {
        self.label
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_none())
            .map(|(i, _)| FaceId::new(i))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.minima.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minima.is_empty()
    }
}

/// Whether `after` is an extension of `before`: every minimum of `after`
/// contains exactly one minimum of `before`, and every minimum of `before`
/// lies inside a minimum of `after`.
pub fn minima_extend(before: &MinimaDecomposition, after: &MinimaDecomposition) -> bool {
    let mut hits = vec![0usize; after.len()];
    for m in &before.minima {
        let Some(host_min) = after.minimum_of(m.faces[0]) else {
            return false;
        };
        if m.faces.iter().any(|&f| after.minimum_of(f) != Some(host_min)) {
            return false;
        }
        hits[host_min] += 1;
    }
    hits.iter().all(|&h| h == 1)
}
