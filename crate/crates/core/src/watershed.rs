//! Watershed cuts of stacks on normal pseudomanifolds, computed by
//! collapse, by the linear Morse flood, and from Λ-biconnected faces, along
//! with checkers for the cut and drop-of-water properties.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::complex::{Complex, FaceId};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::manifold::require_normal;
use crate::morse::{biconnected_faces, morse_witness};
use crate::stack::{CollapseMode, MinimaDecomposition, Stack};

/// Largest number of proper subcomplexes [`cut_report`] will enumerate.
pub const EXHAUSTIVE_SUBCOMPLEX_LIMIT: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Cut,
    Basin(u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Cut => f.write_str("W"),
            Label::Basin(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basin {
    /// Basin id, starting at 1.
    pub id: u32,
    /// Faces of the minimum of `F` inside the basin.
    pub minimum: Vec<FaceId>,
    /// All faces of the basin, sorted.
    pub faces: Vec<FaceId>,
}

/// Per-face labels of a watershed computation. Basin ids follow the order
/// of the minima of `F` by smallest face id.
#[derive(Clone, Debug)]
pub struct WatershedResult {
    host: Arc<Complex>,
    labels: Vec<Label>,
    basins: Vec<Basin>,
    seed: Option<u64>,
}

impl PartialEq for WatershedResult {
    fn eq(&self, other: &Self) -> bool {
        *self.host == *other.host && self.labels == other.labels
    }
}

impl WatershedResult {
    fn build(host: Arc<Complex>, labels: Vec<Label>, minima: Vec<Vec<FaceId>>, seed: Option<u64>) -> Self {
        let mut basins: Vec<Basin> = minima
            .into_iter()
            .enumerate()
            .map(|(i, m)| Basin {
                id: i as u32 + 1,
                minimum: m,
                faces: Vec::new(),
            })
            .collect();
        for (i, l) in labels.iter().enumerate() {
            if let Label::Basin(b) = l {
                basins[*b as usize - 1].faces.push(FaceId::new(i));
            }
        }
        WatershedResult {
            host,
            labels,
            basins,
            seed,
        }
    }

    pub fn host(&self) -> &Complex {
        &self.host
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, f: FaceId) -> Label {
        self.labels[f.index()]
    }

    /// Seed of the collapse order, for results of [`watershed_collapse`].
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn basins(&self) -> &[Basin] {
        &self.basins
    }

    pub fn cut_mask(&self) -> Vec<bool> {
        self.labels.iter().map(|l| *l == Label::Cut).collect()
    }

    /// Ids of the cut faces, sorted.
    pub fn cut_faces(&self) -> Vec<FaceId> {
        self.host
            .ids()
            .filter(|f| self.labels[f.index()] == Label::Cut)
            .collect()
    }

    /// The watershed as a complex of its own.
    pub fn cut_complex(&self) -> Complex {
        self.host.filtered(|f| self.labels[f.index()] == Label::Cut)
    }
}

/// Labels faces outside a closed cut by the minimum of `F` in their
/// component of the complement (0-based index into `minima`); `None` for
/// cut faces and for components without exactly one minimum.
fn component_minima(host: &Complex, cut: &[bool], minima: &MinimaDecomposition) -> Vec<Option<usize>> {
    let mut dsu = DisjointSets::new(host.len());
    for (x, y) in host.covering_pairs() {
        if !cut[x.index()] && !cut[y.index()] {
            dsu.union(x.index(), y.index());
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; host.len()];
    let mut clash = vec![false; host.len()];
    for (i, m) in minima.minima.iter().enumerate() {
        for &f in &m.faces {
            if cut[f.index()] {
                continue;
            }
            let r = dsu.find(f.index());
            match owner[r] {
                None => owner[r] = Some(i),
                Some(j) if j != i => clash[r] = true,
                _ => {}
            }
        }
    }
    host.ids()
        .map(|f| {
            if cut[f.index()] {
                return None;
            }
            let r = dsu.find(f.index());
            if clash[r] {
                None
            } else {
                owner[r]
            }
        })
        .collect()
}

fn labels_from_cut(host: &Complex, cut: &[bool], minima: &MinimaDecomposition) -> Vec<Label> {
    let owner = component_minima(host, cut, minima);
    host.ids()
        .map(|f| match (cut[f.index()], owner[f.index()]) {
            (true, _) => Label::Cut,
            (false, Some(i)) => Label::Basin(i as u32 + 1),
            (false, None) => unreachable!("complement of a watershed is an extension of the minima"),
        })
        .collect()
}

fn closure_mask(host: &Complex, seeds: impl IntoIterator<Item = FaceId>) -> Vec<bool> {
    let mut mask = vec![false; host.len()];
    for f in host.closure_of_ids(seeds) {
        mask[f.index()] = true;
    }
    mask
}

/// Watershed by ultimate `d`-collapse: collapse free `d`-pairs in a seeded
/// order, then cut along the `(d−1)`-faces whose cofaces lie in distinct
/// minima of the collapsed stack.
pub fn watershed_collapse(stack: &Stack, seed: u64) -> Result<WatershedResult> {
    let d = require_normal(stack.host())?;
    let h = stack.ultimate_d_collapse(seed, CollapseMode::Batch)?;
    let host = stack.host();
    let hm = h.minima();
    let ridges = host.faces_of_dim(d - 1).filter(|&r| {
        let c = host.cofaces(r);
        match (hm.minimum_of(c[0]), hm.minimum_of(c[1])) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        }
    });
    let cut = closure_mask(host, ridges);
    let fm = stack.minima();
    let labels = labels_from_cut(host, &cut, &fm);
    Ok(WatershedResult::build(
        Arc::clone(stack.host_arc()),
        labels,
        fm.minima.into_iter().map(|m| m.faces).collect(),
        Some(seed),
    ))
}

/// Linear-time watershed of a Morse stack.
///
/// Minima facets seed distinct labels; labels flow from a `d`-face across
/// each flat `(d−1)`-face to the face on the other side, and a `(d−1)`-face
/// between two differently labeled `d`-faces joins the cut. The cut is then
/// closed downward and each remaining lower face takes the label of the
/// first `d`-face (by id) containing it.
pub fn morse_watershed(stack: &Stack) -> Result<WatershedResult> {
    let d = require_normal(stack.host())?;
    if let Some(f) = morse_witness(stack) {
        return Err(Error::NotMorse(stack.host().face(f).clone()));
    }
    let host = stack.host();
    let n = host.len();
    let mut basin = vec![0u32; n];
    let mut cut = vec![false; n];
    let mut list: Vec<FaceId> = Vec::new();
    let mut minima = Vec::new();
    for x in host.faces_of_dim(d) {
        let fx = stack.altitude(x);
        if host.boundary(x).iter().all(|&z| stack.altitude(z) != fx) {
            minima.push(vec![x]);
            basin[x.index()] = minima.len() as u32;
            list.push(x);
        }
    }
    while let Some(x) = list.pop() {
        for &z in host.boundary(x) {
            let c = host.cofaces(z);
            let y = if c[0] == x { c[1] } else { c[0] };
            if stack.altitude(y) == stack.altitude(z) {
                basin[y.index()] = basin[x.index()];
                list.push(y);
            } else if basin[y.index()] > 0 && basin[y.index()] != basin[x.index()] {
                cut[z.index()] = true;
            }
        }
    }
    for x in host.ids().rev() {
        if cut[x.index()] {
            for &w in host.boundary(x) {
                cut[w.index()] = true;
            }
        }
    }
    let mut stack_walk = Vec::new();
    for x in host.faces_of_dim(d) {
        let b = basin[x.index()];
        stack_walk.push(x);
        while let Some(y) = stack_walk.pop() {
            for &w in host.boundary(y) {
                if !cut[w.index()] && basin[w.index()] == 0 {
                    basin[w.index()] = b;
                    stack_walk.push(w);
                }
            }
        }
    }
    let labels = (0..n)
        .map(|i| if cut[i] { Label::Cut } else { Label::Basin(basin[i]) })
        .collect();
    Ok(WatershedResult::build(
        Arc::clone(stack.host_arc()),
        labels,
        minima,
        None,
    ))
}

/// The Morse watershed by definition: the closure of the Λ-biconnected
/// faces.
pub fn morse_watershed_direct(stack: &Stack) -> Result<Complex> {
    let faces = biconnected_faces(stack)?;
    let host = stack.host();
    Ok(
        Complex::from_faces(host.closure_of_ids(faces).into_iter().map(|f| host.face(f).clone()))
            .expect("closure is closed"),
    )
}

fn cut_mask_of(stack: &Stack, cut: &Complex) -> Result<Vec<bool>> {
    let mut mask = vec![false; stack.host().len()];
    for f in stack.host().ids_of_subcomplex(cut)? {
        mask[f.index()] = true;
    }
    Ok(mask)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutReport {
    /// The complement is an extension of the minima.
    pub extension: bool,
    /// Deleting any single facet of the cut breaks the extension. When no
    /// facet of the cut is a facet of the host this alone decides
    /// minimality.
    pub facet_minimal: bool,
    /// Whether `facet_minimal` is decisive for this cut.
    pub facet_test_exact: bool,
    /// Deleting any facet together with the faces only it covers breaks
    /// the extension.
    pub closure_minimal: bool,
    /// No proper subcomplex of the cut has an extension as complement;
    /// `None` when there are too many subcomplexes to list.
    pub exhaustive_minimal: Option<bool>,
}

impl CutReport {
    pub fn is_minimal(&self) -> bool {
        self.facet_minimal
            && self.closure_minimal
            && match self.exhaustive_minimal {
                Some(m) => m,
                None => self.facet_test_exact,
            }
    }

    pub fn is_cut(&self) -> bool {
        self.extension && self.is_minimal()
    }
}

fn is_extension(host: &Complex, cut: &[bool], minima: &MinimaDecomposition) -> bool {
    if minima.minima.iter().any(|m| m.faces.iter().any(|f| cut[f.index()])) {
        return false;
    }
    component_minima(host, cut, minima)
        .iter()
        .zip(cut)
        .all(|(o, &c)| c || o.is_some())
}

/// Calls `visit` on every proper subcomplex of the cut, as a mask, until it
/// returns false or `budget` runs out. Returns `None` on budget exhaustion.
fn each_subcomplex(
    host: &Complex,
    mask: &[bool],
    budget: usize,
    mut visit: impl FnMut(&[bool]) -> bool,
) -> Option<bool> {
    // faces from the top down: a face may go once all its cofaces in the
    // cut are gone
    let order: Vec<FaceId> = host.ids().rev().filter(|f| mask[f.index()]).collect();
    let mut current = mask.to_vec();
    let mut seen = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn go(
        host: &Complex,
        order: &[FaceId],
        i: usize,
        current: &mut Vec<bool>,
        dropped: bool,
        seen: &mut usize,
        budget: usize,
        visit: &mut dyn FnMut(&[bool]) -> bool,
    ) -> Option<bool> {
        if i == order.len() {
            if !dropped {
                return Some(true);
            }
            *seen += 1;
            if *seen > budget {
                return None;
            }
            return Some(visit(current));
        }
        let f = order[i];
        if !go(host, order, i + 1, current, dropped, seen, budget, visit)? {
            return Some(false);
        }
        if host.cofaces(f).iter().all(|c| !current[c.index()]) {
            current[f.index()] = false;
            let r = go(host, order, i + 1, current, true, seen, budget, visit);
            current[f.index()] = true;
            return r;
        }
        Some(true)
    }

    go(host, &order, 0, &mut current, false, &mut seen, budget, &mut visit)
}

/// Cut checks for a subcomplex `W` of the host of `F`.
pub fn cut_report(stack: &Stack, cut: &Complex) -> Result<CutReport> {
    let mask = cut_mask_of(stack, cut)?;
    cut_report_mask(stack, &mask)
}

/// As [`cut_report`], with the cut given as a face mask.
pub fn cut_report_mask(stack: &Stack, mask: &[bool]) -> Result<CutReport> {
    let host = stack.host();
    for x in host.ids().filter(|x| mask[x.index()]) {
        if let Some(&w) = host.boundary(x).iter().find(|w| !mask[w.index()]) {
            return Err(Error::NotClosed(host.face(w).clone()));
        }
    }
    let minima = stack.minima();
    let extension = is_extension(host, mask, &minima);
    let facets: Vec<FaceId> = host
        .ids()
        .filter(|&x| mask[x.index()] && host.cofaces(x).iter().all(|y| !mask[y.index()]))
        .collect();
    let facet_test_exact = facets.iter().all(|&f| !host.is_facet(f));

    let facet_minimal = facets.iter().all(|&f| {
        let mut m = mask.to_vec();
        m[f.index()] = false;
        !is_extension(host, &m, &minima)
    });

    let closure_minimal = facets.iter().all(|&f| {
        let rest = closure_mask(host, facets.iter().copied().filter(|&g| g != f));
        let kept: Vec<bool> = mask.iter().zip(&rest).map(|(&a, &b)| a && b).collect();
        !is_extension(host, &kept, &minima)
    });

    let exhaustive_minimal = each_subcomplex(host, mask, EXHAUSTIVE_SUBCOMPLEX_LIMIT, |m| {
        !is_extension(host, m, &minima)
    });

    Ok(CutReport {
        extension,
        facet_minimal,
        facet_test_exact,
        closure_minimal,
        exhaustive_minimal,
    })
}

/// Whether `W` is a cut for the minima of `F`: its complement extends the
/// minima and no smaller subcomplex does.
pub fn verify_cut(stack: &Stack, cut: &Complex) -> Result<bool> {
    Ok(cut_report(stack, cut)?.is_cut())
}

/// For every face, up to two distinct minima (indices into
/// `stack.minima()`) reachable by a descending strong path avoiding the
/// cut and starting at a `d`-face containing it.
pub fn descending_minima(stack: &Stack, cut: &[bool]) -> Result<Vec<SmallVec<[usize; 2]>>> {
    let d = require_normal(stack.host())?;
    let host = stack.host();
    let minima = stack.minima();
    let n = host.len();
    let mut reach: Vec<SmallVec<[usize; 2]>> = vec![SmallVec::new(); n];
    let mut queue: Vec<(FaceId, usize)> = Vec::new();
    for (i, m) in minima.minima.iter().enumerate() {
        for &f in &m.faces {
            if host.face_dim(f) == d && !cut[f.index()] {
                reach[f.index()].push(i);
                queue.push((f, i));
            }
        }
    }
    // step t -> t' through u when F(u) = F(t) and F(t') <= F(u); walk it
    // backwards from t'
    while let Some((t2, label)) = queue.pop() {
        for &u in host.boundary(t2) {
            if cut[u.index()] || stack.altitude(t2) > stack.altitude(u) {
                continue;
            }
            for &t in host.cofaces(u) {
                if t == t2 || cut[t.index()] || stack.altitude(t) != stack.altitude(u) {
                    continue;
                }
                let r = &mut reach[t.index()];
                if r.len() < 2 && !r.contains(&label) {
                    r.push(label);
                    queue.push((t, label));
                }
            }
        }
    }
    for x in host.ids().rev() {
        if host.face_dim(x) == d {
            continue;
        }
        let mut acc: SmallVec<[usize; 2]> = SmallVec::new();
        for &y in host.cofaces(x) {
            for &l in &reach[y.index()] {
                if acc.len() < 2 && !acc.contains(&l) {
                    acc.push(l);
                }
            }
        }
        reach[x.index()] = acc;
    }
    Ok(reach)
}

/// Every face of `W` is reached by two descending strong paths in the
/// complement that end in distinct minima.
pub fn verify_drop_of_water(stack: &Stack, cut: &Complex) -> Result<bool> {
    let mask = cut_mask_of(stack, cut)?;
    verify_drop_of_water_mask(stack, &mask)
}

pub fn verify_drop_of_water_mask(stack: &Stack, mask: &[bool]) -> Result<bool> {
    if !mask.iter().any(|&m| m) {
        return Ok(true);
    }
    let reach = descending_minima(stack, mask)?;
    Ok(mask.iter().zip(&reach).all(|(&m, r)| !m || r.len() >= 2))
}

/// Both watershed checks on a computed result.
pub fn verify_result(stack: &Stack, result: &WatershedResult) -> Result<bool> {
    let mask = result.cut_mask();
    Ok(cut_report_mask(stack, &mask)?.is_cut() && verify_drop_of_water_mask(stack, &mask)?)
}
