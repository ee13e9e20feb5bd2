//! Pseudomanifold and normal-pseudomanifold recognition.
//!
//! Normality is decided through the link condition: a pseudomanifold is
//! normal exactly when the link of every face of dimension at most `d − 2`
//! is connected. The definitional test (every connected open subset is
//! strongly connected) is exponential and only available as
//! [`strictly_connected_oracle`] for small complexes.

use std::collections::HashMap;
use std::fmt;

use crate::complex::{Complex, FaceId, FaceSubset, Simplex};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::simplex;

/// Largest complex accepted by [`strictly_connected_oracle`].
pub const ORACLE_FACE_LIMIT: usize = 25;

/// Offending face for each failed check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witnesses {
    pub pure: Option<Simplex>,
    pub connected: Option<Simplex>,
    pub non_branching: Option<Simplex>,
    pub strongly_connected: Option<Simplex>,
    pub link_condition: Option<Simplex>,
    pub strictly_connected: Option<Simplex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: isize,
    pub pure: bool,
    pub connected: bool,
    pub non_branching: bool,
    pub strongly_connected: bool,
    pub link_condition: bool,
    pub strictly_connected: bool,
    pub is_pseudomanifold: bool,
    pub is_normal: bool,
    pub witnesses: Witnesses,
}

impl ValidationReport {
    /// Connected, pure, non-branching and strictly connected.
    pub fn normal_by_definition(&self) -> bool {
        self.dim >= 1 && self.connected && self.pure && self.non_branching && self.strictly_connected
    }

    /// A pseudomanifold satisfying the link condition.
    pub fn normal_by_link_condition(&self) -> bool {
        self.is_pseudomanifold && self.link_condition
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim={}", self.dim)?;
        let flags = [
            ("pure", self.pure, &self.witnesses.pure),
            ("connected", self.connected, &self.witnesses.connected),
            ("non_branching", self.non_branching, &self.witnesses.non_branching),
            (
                "strongly_connected",
                self.strongly_connected,
                &self.witnesses.strongly_connected,
            ),
            ("link_condition", self.link_condition, &self.witnesses.link_condition),
            (
                "strictly_connected",
                self.strictly_connected,
                &self.witnesses.strictly_connected,
            ),
        ];
        for (name, value, _) in &flags {
            writeln!(f, "{name}={value}")?;
        }
        writeln!(f, "is_pseudomanifold={}", self.is_pseudomanifold)?;
        writeln!(f, "is_normal={}", self.is_normal)?;
        for (name, _, witness) in &flags {
            if let Some(w) = witness {
                writeln!(f, "witness.{name}={w}")?;
            }
        }
        Ok(())
    }
}

/// `lk(x, X) = {y : x ∩ y = ∅, x ∪ y ∈ X}`.
pub fn link(x: &Simplex, complex: &Complex) -> Result<Complex> {
    let id = complex.require(x)?;
    let faces = complex
        .star_of(id)
        .into_iter()
        .filter_map(|y| complex.face(y).difference(x));
    Complex::from_faces(faces)
}

/// `st(x, X)`: every face containing `x`.
pub fn star<'a>(x: &Simplex, complex: &'a Complex) -> Result<FaceSubset<'a>> {
    let id = complex.require(x)?;
    Ok(FaceSubset::new(complex, complex.star_of(id)))
}

/// `st*(x, X) = st(x, X) ∖ {x}`.
pub fn open_star<'a>(x: &Simplex, complex: &'a Complex) -> Result<FaceSubset<'a>> {
    let id = complex.require(x)?;
    Ok(FaceSubset::new(
        complex,
        complex.star_of(id).into_iter().filter(|&y| y != id),
    ))
}

/// Whether the link of `x` is connected, computed on the star of `x`: two
/// codimension-1 cofaces are linked when they lie in a common
/// codimension-2 coface. Returns `None` when `x` has no proper coface.
fn link_is_connected(complex: &Complex, x: FaceId) -> Option<bool> {
    let ring = complex.cofaces(x);
    if ring.is_empty() {
        return None;
    }
    let mut dsu = DisjointSets::new(ring.len());
    let mut seen: HashMap<FaceId, usize> = HashMap::new();
    for (i, &c) in ring.iter().enumerate() {
        for &e in complex.cofaces(c) {
            match seen.get(&e) {
                Some(&j) => {
                    dsu.union(i, j);
                }
                None => {
                    seen.insert(e, i);
                }
            }
        }
    }
    let root = dsu.find(0);
    Some((1..ring.len()).all(|i| dsu.find(i) == root))
}

/// Union-find over the vertices of `complex` (indexed by face id) through
/// its edges.
fn vertex_components(complex: &Complex) -> (DisjointSets, usize) {
    let nv = complex.count_of_dim(0);
    let mut dsu = DisjointSets::new(nv);
    for e in complex.faces_of_dim(1) {
        let b = complex.boundary(e);
        dsu.union(b[0].index(), b[1].index());
    }
    (dsu, nv)
}

/// Fills every flag of a [`ValidationReport`]. Never fails.
pub fn validate(complex: &Complex) -> ValidationReport {
    let d = complex.dim();
    let mut w = Witnesses::default();
    let facets = complex.facets();

    let pure = if d < 0 {
        false
    } else {
        match facets.iter().find(|&&f| complex.face_dim(f) as isize != d) {
            Some(&f) => {
                w.pure = Some(complex.face(f).clone());
                false
            }
            None => true,
        }
    };

    let (mut vdsu, nv) = vertex_components(complex);
    let connected = if nv == 0 {
        false
    } else {
        let root = vdsu.find(0);
        match (1..nv).find(|&v| vdsu.find(v) != root) {
            Some(v) => {
                w.connected = Some(complex.face(FaceId::new(v)).clone());
                false
            }
            None => true,
        }
    };

    let non_branching = if d < 1 {
        false
    } else {
        let ridges = complex.faces_of_dim(d as usize - 1);
        match ridges.into_iter().find(|&r| complex.cofaces(r).len() != 2) {
            Some(r) => {
                w.non_branching = Some(complex.face(r).clone());
                false
            }
            None => true,
        }
    };

    let strongly_connected = if !pure {
        w.strongly_connected = w.pure.clone();
        false
    } else {
        let top = d as usize;
        let tops: Vec<FaceId> = complex.faces_of_dim(top).collect();
        let base = tops[0].index();
        let mut dsu = DisjointSets::new(tops.len());
        if top > 0 {
            for r in complex.faces_of_dim(top - 1) {
                let cof = complex.cofaces(r);
                for pair in cof.windows(2) {
                    dsu.union(pair[0].index() - base, pair[1].index() - base);
                }
            }
        }
        let root = dsu.find(0);
        match (1..tops.len()).find(|&i| dsu.find(i) != root) {
            Some(i) => {
                w.strongly_connected = Some(complex.face(tops[i]).clone());
                false
            }
            None => true,
        }
    };

    let mut link_condition = true;
    if d >= 2 {
        for p in 0..=(d as usize - 2) {
            if let Some(x) = complex
                .faces_of_dim(p)
                .find(|&x| link_is_connected(complex, x) == Some(false))
            {
                w.link_condition = Some(complex.face(x).clone());
                link_condition = false;
                break;
            }
        }
    }

    let strictly_connected = strictly_connected_by_links(complex, &mut vdsu, &mut w);

    let is_pseudomanifold = d >= 1 && pure && non_branching && strongly_connected;
    let mut report = ValidationReport {
        dim: d,
        pure,
        connected,
        non_branching,
        strongly_connected,
        link_condition,
        strictly_connected,
        is_pseudomanifold,
        is_normal: false,
        witnesses: w,
    };
    let by_def = report.normal_by_definition();
    debug_assert_eq!(by_def, report.normal_by_link_condition());
    report.is_normal = by_def;
    report
}

/// Strict connectivity, one connected component at a time: a component
/// is strictly connected iff it is pure and every face of dimension at
/// most `dim − 2` has a connected link.
fn strictly_connected_by_links(complex: &Complex, vdsu: &mut DisjointSets, w: &mut Witnesses) -> bool {
    let vindex: HashMap<u32, usize> = complex
        .faces_of_dim(0)
        .map(|v| (complex.face(v).vertices()[0], v.index()))
        .collect();
    let comp = |f: FaceId, vdsu: &mut DisjointSets| {
        let v = complex.face(f).vertices()[0];
        vdsu.find(vindex[&v])
    };

    let mut comp_dim: HashMap<usize, usize> = HashMap::new();
    for f in complex.facets() {
        let c = comp(f, vdsu);
        let fd = complex.face_dim(f);
        match comp_dim.get(&c) {
            Some(&cd) if cd != fd => {
                w.strictly_connected = Some(complex.face(f).clone());
                return false;
            }
            _ => {
                comp_dim.insert(c, fd);
            }
        }
    }
    for x in complex.ids() {
        let cd = comp_dim[&comp(x, vdsu)];
        if complex.face_dim(x) + 2 <= cd && link_is_connected(complex, x) == Some(false) {
            w.strictly_connected = Some(complex.face(x).clone());
            return false;
        }
    }
    true
}

/// Cached normal-pseudomanifold test.
pub fn is_normal_pseudomanifold(complex: &Complex) -> bool {
    *complex.normal_cache().get_or_init(|| validate(complex).is_normal)
}

/// Returns the dimension of `complex` when it is a normal pseudomanifold.
pub fn require_normal(complex: &Complex) -> Result<usize> {
    if is_normal_pseudomanifold(complex) {
        Ok(complex.dim() as usize)
    } else {
        Err(Error::NotNormal)
    }
}

/// True iff the link of every face of dimension at most `d − 2` is a
/// pseudomanifold; the witness is the first face whose link is not.
pub fn links_are_pseudomanifolds(complex: &Complex) -> Result<(bool, Option<Simplex>)> {
    if !validate(complex).is_pseudomanifold {
        return Err(Error::NotPseudomanifold);
    }
    let d = complex.dim();
    if d < 2 {
        return Ok((true, None));
    }
    for x in complex.ids() {
        if complex.face_dim(x) as isize > d - 2 {
            break;
        }
        let lk = link(complex.face(x), complex)?;
        if !validate(&lk).is_pseudomanifold {
            return Ok((false, Some(complex.face(x).clone())));
        }
    }
    Ok((true, None))
}

/// Definitional strict connectivity: enumerates every open subset and
/// checks that each connected one is strongly connected.
pub fn strictly_connected_oracle(complex: &Complex) -> Result<bool> {
    if complex.len() > ORACLE_FACE_LIMIT {
        return Err(Error::SizeBound {
            what: "complex",
            size: complex.len(),
            limit: ORACLE_FACE_LIMIT,
        });
    }
    let n = complex.len();
    let mut mask = vec![false; n];
    Ok(enumerate_open(complex, n, &mut mask))
}

fn enumerate_open(complex: &Complex, remaining: usize, mask: &mut Vec<bool>) -> bool {
    if remaining == 0 {
        return open_subset_ok(complex, mask);
    }
    // cofaces have larger ids, so they are already decided
    let x = FaceId::new(remaining - 1);
    mask[x.index()] = false;
    if !enumerate_open(complex, remaining - 1, mask) {
        return false;
    }
    if complex.cofaces(x).iter().all(|c| mask[c.index()]) {
        mask[x.index()] = true;
        let ok = enumerate_open(complex, remaining - 1, mask);
        mask[x.index()] = false;
        if !ok {
            return false;
        }
    }
    true
}

fn open_subset_ok(complex: &Complex, mask: &[bool]) -> bool {
    let s = FaceSubset::from_mask(complex, mask.to_vec());
    if s.is_empty() || s.connected_components().len() != 1 {
        return true;
    }
    is_strongly_connected_subset(&s)
}

/// `S` is pure and any two of its facets are joined by a strong path in `S`.
fn is_strongly_connected_subset(s: &FaceSubset<'_>) -> bool {
    let host = s.host();
    let facets = s.facets();
    let q = host.face_dim(facets[0]);
    if facets.iter().any(|&f| host.face_dim(f) != q) {
        return false;
    }
    let mut dsu = DisjointSets::new(host.len());
    if q > 0 {
        for r in host.faces_of_dim(q - 1) {
            if !s.contains(r) {
                continue;
            }
            for &c in host.cofaces(r) {
                if s.contains(c) {
                    dsu.union(r.index(), c.index());
                }
            }
        }
    }
    let root = dsu.find(facets[0].index());
    facets.iter().all(|f| dsu.find(f.index()) == root)
}

/// Whether any two facets of `s` are joined by a chain of facets whose
/// consecutive intersections are faces of `s` of dimension at least `p`.
/// `s` must be open or closed in its host.
pub fn is_p_connected(s: &FaceSubset<'_>, p: usize) -> bool {
    let host = s.host();
    let facets = s.facets();
    if facets.is_empty() {
        return true;
    }
    let mut dsu = DisjointSets::new(host.len());
    let is_facet: Vec<bool> = {
        let mut v = vec![false; host.len()];
        for f in &facets {
            v[f.index()] = true;
        }
        v
    };
    for wf in s.iter() {
        if host.face_dim(wf) < p {
            continue;
        }
        let mut anchor: Option<FaceId> = None;
        for g in host.star_of(wf) {
            if is_facet[g.index()] {
                match anchor {
                    Some(a) => {
                        dsu.union(a.index(), g.index());
                    }
                    None => anchor = Some(g),
                }
            }
        }
    }
    let root = dsu.find(facets[0].index());
    facets.iter().all(|f| dsu.find(f.index()) == root)
}

/// Grid triangulation of the torus with `n·m` vertices, `3nm` edges and
/// `2nm` triangles.
pub fn generate_torus(n: u32, m: u32) -> Result<Complex> {
    if n < 3 || m < 3 {
        return Err(Error::InvalidArgument(format!("torus needs n, m >= 3 (got {n}, {m})")));
    }
    let v = |i: u32, j: u32| (i % n) * m + (j % m);
    let mut tris = Vec::with_capacity(2 * (n * m) as usize);
    for i in 0..n {
        for j in 0..m {
            let (a, b, c, d) = (v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1));
            tris.push(simplex![a, b, d]);
            tris.push(simplex![a, c, d]);
        }
    }
    Ok(Complex::closure(tris))
}
