//! Brute-force oracle on occupancy lattices in dimensions 2-4: exact
//! Euclidean distance transform, ball offsets, R-hulloid via double far
//! erosion, Hausdorff distance, connectivity, R-body and K2 membership,
//! boundary witnesses.
//!
//! All set comparisons go through the half-cell guard g = h*sqrt(d)/2,
//! which converts open/closed distinctions into lattice comparisons and
//! errs toward under-claiming membership.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circumsphere, max_clearance, Point};
use crate::report::VerificationReport;
use crate::shape::ShapeExpr;

/// Hard cap on cells per grid (memory budget for the distance transform).
pub const MAX_CELLS: usize = 1 << 28;

const INF: i64 = i64::MAX / 4;

/// Axis-aligned world window; grids place cell centers at lo + h/2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameters("window dims mismatch".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidParameters("empty window".into()));
        }
        Ok(Window { lo, hi })
    }

    pub fn inflate(&self, margin: f64) -> Window {
        Window {
            lo: self.lo.iter().map(|a| a - margin).collect(),
            hi: self.hi.iter().map(|a| a + margin).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

/// Bit-packed occupancy lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    origin: Vec<f64>, // world coordinates of the center of cell (0,...,0)
    h: f64,
    extents: Vec<usize>,
    bits: Vec<u64>,
}

impl Grid {
    pub fn new(origin: Vec<f64>, h: f64, extents: Vec<usize>) -> Result<Self> {
        let dim = extents.len();
        if !(2..=4).contains(&dim) || origin.len() != dim {
            return Err(Error::Unsupported(format!("dimension {dim} outside 2..4")));
        }
        if h <= 0.0 || !h.is_finite() {
            return Err(Error::InvalidParameters("spacing must be positive".into()));
        }
        if extents.iter().any(|&e| e == 0) {
            return Err(Error::InvalidParameters("zero extent".into()));
        }
        let n: usize = extents
            .iter()
            .try_fold(1usize, |a, &e| a.checked_mul(e))
            .ok_or_else(|| Error::ResourceLimit("extent product overflow".into()))?;
        if n > MAX_CELLS {
            return Err(Error::ResourceLimit(format!(
                "{n} cells exceed budget {MAX_CELLS}"
            )));
        }
        Ok(Grid {
            dim,
            origin,
            h,
            extents,
            bits: vec![0; (n + 63) / 64],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Half-cell guard g = h*sqrt(dim)/2.
    pub fn guard(&self) -> f64 {
        self.h * (self.dim as f64).sqrt() / 2.0
    }

    #[inline]
    pub fn get(&self, lin: usize) -> bool {
        (self.bits[lin >> 6] >> (lin & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, lin: usize, value: bool) {
        if value {
            self.bits[lin >> 6] |= 1 << (lin & 63);
        } else {
            self.bits[lin >> 6] &= !(1 << (lin & 63));
        }
    }

    pub fn count_occupied(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn occupied(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.get(i)).collect()
    }

    pub fn unravel(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = Vec::with_capacity(self.dim);
        for &e in &self.extents {
            idx.push(lin % e);
            lin /= e;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut lin = 0;
        for axis in (0..self.dim).rev() {
            lin = lin * self.extents[axis] + idx[axis];
        }
        lin
    }

    pub fn cell_center(&self, lin: usize) -> Vec<f64> {
        self.unravel(lin)
            .iter()
            .zip(&self.origin)
            .map(|(&i, o)| o + i as f64 * self.h)
            .collect()
    }

    /// Index of the cell whose center is nearest to p, if inside the grid.
    pub fn nearest_cell(&self, p: &[f64]) -> Option<usize> {
        let mut idx = Vec::with_capacity(self.dim);
        for axis in 0..self.dim {
            let t = ((p[axis] - self.origin[axis]) / self.h).round();
            if t < 0.0 || t >= self.extents[axis] as f64 {
                return None;
            }
            idx.push(t as usize);
        }
        Some(self.ravel(&idx))
    }

    pub fn same_lattice(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.extents == other.extents
            && (self.h - other.h).abs() <= 1e-12 * self.h
            && self
                .origin
                .iter()
                .zip(&other.origin)
                .all(|(a, b)| (a - b).abs() <= 1e-9 * self.h)
    }

    /// Complement of the occupied set within the window.
    pub fn invert(&self) -> Grid {
        let mut out = self.clone();
        let n = self.len();
        for w in out.bits.iter_mut() {
            *w = !*w;
        }
        if n % 64 != 0 {
            let last = out.bits.len() - 1;
            out.bits[last] &= (1u64 << (n % 64)) - 1;
        }
        out
    }

    fn empty_like(&self) -> Grid {
        Grid {
            dim: self.dim,
            origin: self.origin.clone(),
            h: self.h,
            extents: self.extents.clone(),
            bits: vec![0; self.bits.len()],
        }
    }

    pub(crate) fn from_raw(
        origin: Vec<f64>,
        h: f64,
        extents: Vec<usize>,
        bits: Vec<u64>,
    ) -> Result<Grid> {
        let mut g = Grid::new(origin, h, extents)?;
        if bits.len() != g.bits.len() {
            return Err(Error::Format("payload length mismatch".into()));
        }
        g.bits = bits;
        Ok(g)
    }

    pub(crate) fn raw_bits(&self) -> &[u64] {
        &self.bits
    }

    /// Index-space bounding box of occupied cells.
    pub fn occupied_bounds(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut lo = vec![usize::MAX; self.dim];
        let mut hi = vec![0usize; self.dim];
        let mut any = false;
        for lin in 0..self.len() {
            if self.get(lin) {
                any = true;
                let idx = self.unravel(lin);
                for a in 0..self.dim {
                    lo[a] = lo[a].min(idx[a]);
                    hi[a] = hi[a].max(idx[a]);
                }
            }
        }
        any.then_some((lo, hi))
    }

    /// World-space margin between occupied cells and the grid edge, per the
    /// convention that the window edge sits h/2 beyond the outermost centers.
    pub fn edge_margin(&self) -> Option<f64> {
        let (lo, hi) = self.occupied_bounds()?;
        let mut m = f64::INFINITY;
        for a in 0..self.dim {
            m = m.min(lo[a] as f64 * self.h + self.h / 2.0);
            m = m.min((self.extents[a] - 1 - hi[a]) as f64 * self.h + self.h / 2.0);
        }
        Some(m)
    }

    /// Max pairwise distance of occupied cell centers, computed over the
    /// occupied cells that touch the complement (the diameter is attained
    /// on the boundary).
    pub fn diameter(&self) -> f64 {
        let b = boundary_of(self);
        let cells: Vec<Vec<f64>> = b.occupied().iter().map(|&l| b.cell_center(l)).collect();
        let mut d2max: f64 = 0.0;
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let d2: f64 = cells[i]
                    .iter()
                    .zip(&cells[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                d2max = d2max.max(d2);
            }
        }
        d2max.sqrt()
    }
}

/// Exact squared-lattice-distance field from every cell to the nearest
/// occupied cell.
#[derive(Clone, Debug)]
pub struct DistanceField {
    origin: Vec<f64>,
    h: f64,
    extents: Vec<usize>,
    d2: Vec<i64>,
    pub all_infinite: bool,
}

impl DistanceField {
    /// Squared distance in lattice units.
    pub fn lattice_sq(&self, lin: usize) -> i64 {
        self.d2[lin]
    }

    /// Distance in world units.
    pub fn world(&self, lin: usize) -> f64 {
        if self.d2[lin] >= INF {
            f64::INFINITY
        } else {
            self.h * (self.d2[lin] as f64).sqrt()
        }
    }

    pub fn len(&self) -> usize {
        self.d2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d2.is_empty()
    }

    /// Grid of cells whose world distance satisfies the comparison
    /// (>= threshold when `ge`, < threshold otherwise).
    pub fn threshold(&self, thr: f64, ge: bool) -> Grid {
        let mut g = Grid {
            dim: self.extents.len(),
            origin: self.origin.clone(),
            h: self.h,
            extents: self.extents.clone(),
            bits: vec![0; (self.d2.len() + 63) / 64],
        };
        for lin in 0..self.d2.len() {
            let w = self.world(lin);
            let hit = if ge { w >= thr } else { w < thr };
            if hit {
                g.set(lin, true);
            }
        }
        g
    }
}

/// One-dimensional squared distance transform (lower envelope of
/// parabolas); INF inputs are skipped, so the envelope is exact in
/// integer arithmetic for all finite cells.
fn dt1d(f: &[i64], out: &mut [i64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    let mut any = false;
    for q in 0..n {
        if f[q] >= INF {
            continue;
        }
        if !any {
            any = true;
            v[0] = q;
            z[0] = f64::NEG_INFINITY;
            z[1] = f64::INFINITY;
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as i64) - (f[p] + (p * p) as i64)) as f64
                / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    if !any {
        out[..n].fill(INF);
        return;
    }
    let mut j = 0usize;
    for i in 0..n {
        while z[j + 1] < i as f64 {
            j += 1;
        }
        let p = v[j];
        let di = i as i64 - p as i64;
        out[i] = f[p] + di * di;
    }
}

/// Exact Euclidean distance transform of the occupied set, separable
/// lower-envelope per axis, linear time per axis, integer arithmetic.
pub fn distance_field(g: &Grid) -> DistanceField {
    let n = g.len();
    let mut d2: Vec<i64> = (0..n).map(|i| if g.get(i) { 0 } else { INF }).collect();
    let all_infinite = g.is_empty();
    if !all_infinite {
        let mut stride = 1usize;
        for axis in 0..g.dim {
            let e = g.extents[axis];
            let lines = n / e;
            let mut f = vec![0i64; e];
            let mut out = vec![0i64; e];
            let mut v = vec![0usize; e];
            let mut z = vec![0f64; e + 1];
            for line in 0..lines {
                let base = (line % stride) + (line / stride) * stride * e;
                for t in 0..e {
                    f[t] = d2[base + t * stride];
                }
                dt1d(&f, &mut out, &mut v, &mut z);
                for t in 0..e {
                    d2[base + t * stride] = out[t];
                }
            }
            stride *= e;
        }
    }
    DistanceField {
        origin: g.origin.clone(),
        h: g.h,
        extents: g.extents.clone(),
        d2,
        all_infinite,
    }
}

/// Rasterizes a shape expression: a cell is occupied iff its center
/// satisfies the expression (points primitives occupy the nearest cell).
pub fn rasterize(shape: &ShapeExpr, window: &Window, h: f64) -> Result<Grid> {
    let dim = shape.dim()?;
    if window.dim() != dim {
        return Err(Error::InvalidParameters("window dimension mismatch".into()));
    }
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::InvalidParameters("spacing must be positive".into()));
    }
    let mut extents = Vec::with_capacity(dim);
    for a in 0..dim {
        let n = ((window.hi[a] - window.lo[a]) / h).ceil().max(1.0);
        if n > MAX_CELLS as f64 {
            return Err(Error::ResourceLimit("window too large for spacing".into()));
        }
        extents.push(n as usize);
    }
    let origin: Vec<f64> = window.lo.iter().map(|l| l + h / 2.0).collect();
    let mut grid = Grid::new(origin.clone(), h, extents.clone())?;

    let nearest = {
        let origin = origin.clone();
        let extents = extents.clone();
        move |p: &[f64]| -> Option<usize> {
            let mut lin = 0usize;
            for axis in (0..origin.len()).rev() {
                let t = ((p[axis] - origin[axis]) / h).round();
                if t < 0.0 || t >= extents[axis] as f64 {
                    return None;
                }
                lin = lin * extents[axis] + t as usize;
            }
            Some(lin)
        }
    };

    let mut center = vec![0.0; dim];
    let mut idx = vec![0usize; dim];
    for lin in 0..grid.len() {
        for a in 0..dim {
            center[a] = origin[a] + idx[a] as f64 * h;
        }
        if shape.eval(&center, &nearest, lin) {
            grid.set(lin, true);
        }
        // odometer increment, lowest axis fastest
        for a in 0..dim {
            idx[a] += 1;
            if idx[a] < extents[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetMode {
    /// Open epsilon-neighborhood of the occupied set.
    DilateOpen,
    /// Cells at distance >= epsilon from the occupied set.
    ErodeFar,
}

/// Ball offset of the occupied set with the half-cell guard applied.
pub fn offset(g: &Grid, eps: f64, mode: OffsetMode) -> Result<Grid> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameters(
            "offset radius must be positive".into(),
        ));
    }
    let df = distance_field(g);
    let thr = eps - g.guard();
    Ok(match mode {
        OffsetMode::DilateOpen => df.threshold(thr, false),
        OffsetMode::ErodeFar => df.threshold(thr, true),
    })
}

/// Result of a grid hulloid computation; the whole-space case arises when
/// no admissible ball center exists within the window.
#[derive(Clone, Debug)]
pub enum HulloidResult {
    WholeSpace,
    Body(Grid),
}

impl HulloidResult {
    pub fn body(self) -> Result<Grid> {
        match self {
            HulloidResult::Body(g) => Ok(g),
            HulloidResult::WholeSpace => {
                Err(Error::Undefined("hulloid fills the whole space".into()))
            }
        }
    }
}

/// Requires the occupied bounding box to keep a 2R + 4h margin from the
/// window edge. Bodies that reach the window edge (complements and other
/// unbounded sets clipped to the window) are exempt: for them the window
/// is the region of interest and cells beyond it count as eroded away.
fn require_margin(g: &Grid, r: f64) -> Result<()> {
    let needed = 2.0 * r + 4.0 * g.h;
    let margin = g
        .edge_margin()
        .ok_or_else(|| Error::Undefined("empty grid".into()))?;
    if margin <= 1.5 * g.h {
        return Ok(());
    }
    if margin + 1e-9 * (1.0 + needed) < needed {
        return Err(Error::WindowTooSmall(format!(
            "margin {margin:.6} < required {needed:.6}"
        )));
    }
    Ok(())
}

/// Grid R-hulloid: double far erosion of the occupied set. Cells outside
/// the window are treated as belonging to the eroded complement, so the
/// second erosion also carves the band within R of the window edge.
pub fn hulloid_grid(e: &Grid, r: f64) -> Result<HulloidResult> {
    if r <= 0.0 {
        return Err(Error::InvalidParameters("radius must be positive".into()));
    }
    require_margin(e, r)?;
    let g = e.guard();
    let centers = distance_field(e).threshold(r - g, true);
    if centers.is_empty() {
        return Ok(HulloidResult::WholeSpace);
    }
    let thr = r - g;
    let mut co = distance_field(&centers).threshold(thr, true);
    for lin in 0..co.len() {
        if co.get(lin) {
            let idx = co.unravel(lin);
            let edge = (0..co.dim())
                .map(|a| (idx[a] + 1).min(co.extents()[a] - idx[a]) as f64 * co.spacing())
                .fold(f64::INFINITY, f64::min);
            if edge < thr {
                co.set(lin, false);
            }
        }
    }
    Ok(HulloidResult::Body(co))
}

/// Occupied cells with at least one unoccupied face neighbor (cells beyond
/// the window count as unoccupied).
pub fn boundary_of(g: &Grid) -> Grid {
    let mut out = g.empty_like();
    for lin in 0..g.len() {
        if !g.get(lin) {
            continue;
        }
        let idx = g.unravel(lin);
        let mut stride = 1usize;
        let mut exposed = false;
        for a in 0..g.dim {
            if idx[a] == 0 || !g.get(lin - stride) {
                exposed = true;
                break;
            }
            if idx[a] + 1 == g.extents[a] || !g.get(lin + stride) {
                exposed = true;
                break;
            }
            stride *= g.extents[a];
        }
        if exposed {
            out.set(lin, true);
        }
    }
    out
}

/// Compares the double-erosion hulloid against the independent boundary
/// representation: the R-neighborhood of E intersected with the far
/// erosion of its boundary sphere set.
pub fn boundary_formula_check(e: &Grid, r: f64) -> Result<VerificationReport> {
    let co = hulloid_grid(e, r)?.body()?;
    let g = e.guard();
    let e_r = distance_field(e).threshold(r - g, false);
    let rim = boundary_of(&e_r);
    // the rasterized rim sits up to a cell diagonal inside the true
    // boundary of E_R, so give the far erosion that much slack
    let slack = e.spacing() * (e.dim() as f64).sqrt();
    let far = distance_field(&rim).threshold(r - g - slack, true);
    let mut rhs = e_r.clone();
    for lin in 0..rhs.len() {
        if rhs.get(lin) && !far.get(lin) {
            rhs.set(lin, false);
        }
    }
    let tol = 3.0 * e.spacing() * (e.dim() as f64).sqrt();
    let d = hausdorff(&co, &rhs)?;
    let mut report = VerificationReport::new();
    report.check_le(
        "boundary_representation",
        "hulloid equals E_R intersected with the far erosion of its boundary",
        d,
        tol,
    );
    Ok(report)
}

/// Directed Hausdorff distance from g1 to g2 in world units.
pub fn directed_hausdorff(g1: &Grid, g2: &Grid) -> Result<f64> {
    if !g1.same_lattice(g2) {
        return Err(Error::MismatchedLattice(
            "grids on different lattices".into(),
        ));
    }
    if g1.is_empty() || g2.is_empty() {
        return Err(Error::Undefined("hausdorff of empty grid".into()));
    }
    let df = distance_field(g2);
    let mut worst: i64 = 0;
    for lin in 0..g1.len() {
        if g1.get(lin) {
            worst = worst.max(df.lattice_sq(lin));
        }
    }
    Ok(g1.spacing() * (worst as f64).sqrt())
}

/// Symmetric Hausdorff distance between two grids on the same lattice.
pub fn hausdorff(g1: &Grid, g2: &Grid) -> Result<f64> {
    Ok(directed_hausdorff(g1, g2)?.max(directed_hausdorff(g2, g1)?))
}

/// Connected components under face adjacency; labels are assigned in scan
/// order starting from 1, 0 marks unoccupied cells.
pub fn components(g: &Grid) -> (usize, Vec<u32>) {
    let n = g.len();
    let mut labels = vec![0u32; n];
    let mut count = 0u32;
    let mut stack: Vec<usize> = Vec::new();
    let strides: Vec<usize> = {
        let mut s = vec![1usize; g.dim];
        for a in 1..g.dim {
            s[a] = s[a - 1] * g.extents[a - 1];
        }
        s
    };
    for start in 0..n {
        if !g.get(start) || labels[start] != 0 {
            continue;
        }
        count += 1;
        labels[start] = count;
        stack.push(start);
        while let Some(lin) = stack.pop() {
            let idx = g.unravel(lin);
            for a in 0..g.dim {
                if idx[a] > 0 {
                    let nb = lin - strides[a];
                    if g.get(nb) && labels[nb] == 0 {
                        labels[nb] = count;
                        stack.push(nb);
                    }
                }
                if idx[a] + 1 < g.extents[a] {
                    let nb = lin + strides[a];
                    if g.get(nb) && labels[nb] == 0 {
                        labels[nb] = count;
                        stack.push(nb);
                    }
                }
            }
        }
    }
    (count as usize, labels)
}

/// Tests A = co_R(A) up to tol; on failure returns a farthest cell of
/// co_R(A) \ A as witness.
pub fn is_r_body(a: &Grid, r: f64, tol: f64) -> Result<(bool, Option<Point>)> {
    let co = match hulloid_grid(a, r)? {
        HulloidResult::WholeSpace => return Ok((false, None)),
        HulloidResult::Body(g) => g,
    };
    let df = distance_field(a);
    let mut worst: i64 = -1;
    let mut worst_lin = 0usize;
    for lin in 0..co.len() {
        if co.get(lin) && df.lattice_sq(lin) > worst {
            worst = df.lattice_sq(lin);
            worst_lin = lin;
        }
    }
    let hd = a.spacing() * (worst.max(0) as f64).sqrt();
    if hd <= tol {
        Ok((true, None))
    } else {
        Ok((false, Some(Point(co.cell_center(worst_lin)))))
    }
}

/// R-body check for a finite point set, exact in the point coordinates.
///
/// The lattice hulloid can neither confirm nor refute material whose
/// separation from carvability is below the cell size (tangency-critical
/// sets sit exactly there), so the lattice only proposes suspect
/// locations: hulloid cells away from the set, plus circumcenters of
/// point subsets, which is where measure-zero residues of the hulloid
/// live. Each suspect is then settled exactly: the blocking clearance
/// (`max_clearance` against the true points) is minimized over a
/// cell-sized neighborhood, and the point set fails to be an R-body
/// exactly when some suspect's clearance cannot exceed R.
pub fn pointset_is_r_body(points: &[Point], r: f64, h: f64) -> Result<(bool, Option<Point>)> {
    use itertools::Itertools;
    if points.is_empty() {
        return Err(Error::DegenerateInput("empty point set".into()));
    }
    let d = points[0].dim();
    let tol = 2.0 * h * (d as f64).sqrt();
    let dist_to_set = |x: &Point| {
        points
            .iter()
            .map(|p| x.dist(p))
            .fold(f64::INFINITY, f64::min)
    };

    let mut suspects: Vec<Point> = Vec::new();
    let cells = rasterize_points(points, 2.0 * r + 5.0 * h, h)?;
    if let HulloidResult::Body(co) = hulloid_grid(&cells, r)? {
        for lin in 0..co.len() {
            if co.get(lin) {
                let c = Point(co.cell_center(lin));
                if dist_to_set(&c) > tol {
                    suspects.push(c);
                }
            }
        }
    }
    for k in 2..=(d + 1).min(points.len()) {
        for subset in (0..points.len()).combinations(k) {
            let pts: Vec<Point> = subset.iter().map(|&i| points[i].clone()).collect();
            if let Ok((c, _)) = circumsphere(&pts) {
                if dist_to_set(&c) > tol {
                    suspects.push(c);
                }
            }
        }
    }

    // coordinate pattern search for the least clearance near a suspect;
    // the box keeps the search off the points themselves, where the
    // clearance dips to R trivially
    let threshold = r * (1.0 + 1e-9);
    for x0 in suspects {
        let mut x = x0.clone();
        let mut val = max_clearance(&x, r, points)?;
        let mut step = h;
        while step > 1e-9 * r {
            let mut improved = false;
            for a in 0..d {
                for s in [step, -step] {
                    let mut cand = x.clone();
                    cand.0[a] += s;
                    if cand.dist(&x0) > 2.0 * tol || dist_to_set(&cand) <= tol / 2.0 {
                        continue;
                    }
                    let v = max_clearance(&cand, r, points)?;
                    if v < val {
                        x = cand;
                        val = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        if val <= threshold {
            return Ok((false, Some(x)));
        }
    }
    Ok((true, None))
}

/// Membership in the class where every exterior point lies in a closed
/// R-ball whose interior misses int(A); searched over lattice centers.
pub fn k2_membership(a: &Grid, r: f64) -> Result<(bool, Option<Point>)> {
    require_margin(a, r)?;
    let g = a.guard();
    // interior cells: occupied with all face neighbors occupied
    let rim = boundary_of(a);
    let mut interior = a.clone();
    for lin in 0..interior.len() {
        if rim.get(lin) {
            interior.set(lin, false);
        }
    }
    if interior.is_empty() {
        // no interior: any closed ball through y qualifies
        return Ok((true, None));
    }
    let centers = distance_field(&interior).threshold(r - g, true);
    if centers.is_empty() {
        let witness = (0..a.len())
            .find(|&l| !a.get(l))
            .map(|l| Point(a.cell_center(l)));
        return Ok((false, witness));
    }
    let df_c = distance_field(&centers);
    let reach = r + g;
    let mut worst: f64 = -1.0;
    let mut worst_lin = None;
    for lin in 0..a.len() {
        if !a.get(lin) {
            let d = df_c.world(lin);
            if d > reach && d > worst {
                worst = d;
                worst_lin = Some(lin);
            }
        }
    }
    match worst_lin {
        None => Ok((true, None)),
        Some(lin) => Ok((false, Some(Point(a.cell_center(lin))))),
    }
}

/// For a boundary point y of an R-body A, finds a lattice center whose
/// radius-R sphere passes through y while its open ball avoids A.
pub fn boundary_witness(a: &Grid, r: f64, y: &Point) -> Result<(Point, f64)> {
    let tol = 2.0 * a.spacing() * (a.dim() as f64).sqrt();
    let df = distance_field(a);
    if df.all_infinite {
        return Err(Error::Undefined("empty grid".into()));
    }
    // search box: lattice points within r + tol of y
    let mut lo = vec![0usize; a.dim()];
    let mut hi = vec![0usize; a.dim()];
    for axis in 0..a.dim() {
        let c = (y.0[axis] - a.origin[axis]) / a.h;
        let rad = (r + tol) / a.h + 1.0;
        lo[axis] = (c - rad).floor().max(0.0) as usize;
        hi[axis] = ((c + rad).ceil() as usize).min(a.extents[axis] - 1);
    }
    // among admissible centers, prefer the one deepest inside the
    // complement of A, then the smallest sphere defect
    let mut best: Option<(f64, usize, f64)> = None;
    let mut idx = lo.clone();
    loop {
        let lin = a.ravel(&idx);
        let da = df.world(lin);
        if da >= r - tol {
            let center = a.cell_center(lin);
            let dy: f64 = center
                .iter()
                .zip(&y.0)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt();
            let defect = (dy - r).abs();
            if defect <= tol
                && best
                    .as_ref()
                    .map_or(true, |b| da > b.2 || (da == b.2 && defect < b.0))
            {
                best = Some((defect, lin, da));
            }
        }
        // advance odometer over the box
        let mut axis = 0;
        loop {
            if axis == a.dim() {
                break;
            }
            idx[axis] += 1;
            if idx[axis] <= hi[axis] {
                break;
            }
            idx[axis] = lo[axis];
            axis += 1;
        }
        if axis == a.dim() {
            break;
        }
    }
    match best {
        Some((defect, lin, da)) if defect <= tol => Ok((Point(a.cell_center(lin)), da)),
        _ => Err(Error::WitnessNotFound(format!(
            "no admissible center within {tol:.6} of the radius-{r} sphere through the query point"
        ))),
    }
}

/// Convenience: rasterize a finite point set with the window inflated by
/// `margin` around its bounding box.
pub fn rasterize_points(points: &[Point], margin: f64, h: f64) -> Result<Grid> {
    let dim = points[0].dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for a in 0..dim {
            lo[a] = lo[a].min(p.0[a]);
            hi[a] = hi[a].max(p.0[a]);
        }
    }
    let window = Window::new(
        lo.iter().map(|v| v - margin).collect(),
        hi.iter().map(|v| v + margin).collect(),
    )?;
    let shape = ShapeExpr::Points {
        points: points.iter().map(|p| p.0.clone()).collect(),
    };
    rasterize(&shape, &window, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disk(r: f64, window: f64, h: f64) -> Grid {
        let shape = ShapeExpr::ball(&[0.0, 0.0], r, true);
        let w = Window::new(vec![-window, -window], vec![window, window]).unwrap();
        rasterize(&shape, &w, h).unwrap()
    }

    /// O(n^2) nearest-occupied scan, the independent oracle for the EDT.
    fn brute_force_d2(g: &Grid) -> Vec<i64> {
        let occ: Vec<Vec<usize>> = g.occupied().iter().map(|&l| g.unravel(l)).collect();
        (0..g.len())
            .map(|lin| {
                let idx = g.unravel(lin);
                occ.iter()
                    .map(|o| {
                        o.iter()
                            .zip(&idx)
                            .map(|(&a, &b)| {
                                let d = a as i64 - b as i64;
                                d * d
                            })
                            .sum::<i64>()
                    })
                    .min()
                    .unwrap_or(INF)
            })
            .collect()
    }

    #[test]
    fn edt_single_cell() {
        let mut g = Grid::new(vec![0.0, 0.0], 0.5, vec![9, 9]).unwrap();
        g.set(g.ravel(&[0, 0]), true);
        let df = distance_field(&g);
        for i in 0..9 {
            for j in 0..9 {
                let lin = g.ravel(&[i, j]);
                let expect = 0.5 * ((i * i + j * j) as f64).sqrt();
                assert!((df.world(lin) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn edt_full_grid_zero() {
        let mut g = Grid::new(vec![0.0, 0.0, 0.0], 1.0, vec![4, 5, 6]).unwrap();
        for lin in 0..g.len() {
            g.set(lin, true);
        }
        let df = distance_field(&g);
        assert!((0..g.len()).all(|l| df.lattice_sq(l) == 0));
    }

    #[test]
    fn edt_matches_brute_force_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..30 {
            let dim = 2 + trial % 3;
            let extents: Vec<usize> = (0..dim)
                .map(|_| rng.gen_range(2..if dim == 4 { 7 } else { 14 }))
                .collect();
            let mut g = Grid::new(vec![0.0; dim], 1.0, extents).unwrap();
            for lin in 0..g.len() {
                if rng.gen_bool(0.12) {
                    g.set(lin, true);
                }
            }
            let df = distance_field(&g);
            let brute = brute_force_d2(&g);
            for lin in 0..g.len() {
                assert_eq!(df.lattice_sq(lin), brute[lin], "trial {trial} cell {lin}");
            }
        }
    }

    #[test]
    fn edt_empty_grid_flagged() {
        let g = Grid::new(vec![0.0, 0.0], 1.0, vec![4, 4]).unwrap();
        let df = distance_field(&g);
        assert!(df.all_infinite);
        assert!(df.world(0).is_infinite());
    }

    #[test]
    fn rasterize_disk_area() {
        let h = 0.01;
        let g = disk(1.0, 1.5, h);
        let area = g.count_occupied() as f64 * h * h;
        assert!((area - std::f64::consts::PI).abs() / std::f64::consts::PI < 0.01);
    }

    #[test]
    fn rasterize_open_closed_pair() {
        let w = Window::new(vec![-1.5, -1.5], vec![1.5, 1.5]).unwrap();
        let open_ball = ShapeExpr::ball(&[0.0, 0.0], 1.0, false);
        let s = ShapeExpr::intersection(vec![open_ball.clone().complement(), open_ball]);
        let g = rasterize(&s, &w, 0.05).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn pointset_far_pair_is_r_body() {
        // two points farther apart than 2R: hulloid adds nothing
        let w = [Point::xy(0.0, 0.0), Point::xy(3.0, 0.0)];
        let (ok, wit) = pointset_is_r_body(&w, 1.0, 1.0 / 40.0).unwrap();
        assert!(ok, "witness {wit:?}");
    }

    #[test]
    fn pointset_tetrahedron_critical() {
        // regular tetrahedron on the sphere of radius 2R/3: its R-hulloid
        // gains the origin, so the bare vertex set is not an R-body and
        // remains one for any smaller radius
        let s = 2.0 / 3.0 / 3f64.sqrt();
        let w: Vec<Point> = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
            .iter()
            .map(|c| Point::new(c))
            .collect();
        let h = 1.0 / 40.0;
        let (ok, wit) = pointset_is_r_body(&w, 1.0, h).unwrap();
        assert!(!ok);
        assert!(wit.unwrap().norm() < 2.0 * h * 3f64.sqrt());
        let (ok_small, _) = pointset_is_r_body(&w, 0.9, h).unwrap();
        assert!(ok_small);
    }

    #[test]
    fn rasterize_points_two_cells() {
        let a = Point::xy(0.1, 0.2);
        let b = Point::xy(0.8, -0.3);
        let g = rasterize_points(&[a.clone(), b.clone()], 0.5, 0.04).unwrap();
        assert_eq!(g.count_occupied(), 2);
        for (lin, p) in g.occupied().iter().map(|&l| (l, g.cell_center(l))) {
            let da: f64 = ((p[0] - a.x()).powi(2) + (p[1] - a.y()).powi(2)).sqrt();
            let db: f64 = ((p[0] - b.x()).powi(2) + (p[1] - b.y()).powi(2)).sqrt();
            assert!(da.min(db) <= g.spacing(), "cell {lin} not nearest");
        }
    }

    #[test]
    fn dilated_disk_radius_grows() {
        let h = 0.02;
        let g = disk(0.5, 2.0, h);
        let d = offset(&g, 0.4, OffsetMode::DilateOpen).unwrap();
        let target = disk(0.9, 2.0, h);
        assert!(hausdorff(&d, &target).unwrap() <= 1.5 * h * 2f64.sqrt());
    }

    #[test]
    fn erode_far_with_huge_radius_empties_window() {
        let h = 0.05;
        let g = disk(0.5, 1.0, h);
        let e = offset(&g, 10.0, OffsetMode::ErodeFar).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn double_erosion_inclusion_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let h = 0.05;
            let r = 0.4;
            let w = Window::new(vec![-1.6, -1.6], vec![1.6, 1.6]).unwrap();
            let mut parts = Vec::new();
            for _ in 0..rng.gen_range(1..4) {
                parts.push(ShapeExpr::ball(
                    &[rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)],
                    rng.gen_range(0.05..0.25),
                    true,
                ));
            }
            let e = rasterize(&ShapeExpr::union(parts), &w, h).unwrap();
            if e.is_empty() {
                continue;
            }
            let co = hulloid_grid(&e, r).unwrap().body().unwrap();
            let e_r = offset(&e, r, OffsetMode::DilateOpen).unwrap();
            for lin in 0..e.len() {
                if e.get(lin) {
                    assert!(co.get(lin), "E not inside hulloid");
                }
                if co.get(lin) {
                    assert!(e_r.get(lin), "hulloid outside E_R");
                }
            }
        }
    }

    #[test]
    fn hulloid_of_two_points_stays_discrete() {
        let r = 0.5;
        let a = Point::xy(0.0, 0.0);
        let b = Point::xy(1.2 * r, 0.0);
        let h = 0.02;
        let e = rasterize_points(&[a, b], 2.0 * r + 5.0 * h, h).unwrap();
        let co = hulloid_grid(&e, r).unwrap().body().unwrap();
        let d = hausdorff(&co, &e).unwrap();
        assert!(d <= h * 2f64.sqrt(), "spurious cells at distance {d}");
    }

    #[test]
    fn hulloid_of_convex_disk_is_identity() {
        let h = 0.02;
        let r = 0.4;
        let e = disk(0.45, 0.45 + 2.0 * r + 5.0 * h, h);
        let co = hulloid_grid(&e, r).unwrap().body().unwrap();
        assert!(hausdorff(&co, &e).unwrap() <= 2.0 * h * 2f64.sqrt());
    }

    #[test]
    fn hulloid_window_too_small() {
        let e = disk(0.5, 0.7, 0.05);
        assert!(matches!(
            hulloid_grid(&e, 1.0),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn hulloid_whole_space_when_no_centers() {
        // occupied everywhere: no admissible ball center in the window
        let mut g = Grid::new(vec![0.0, 0.0], 1.0, vec![8, 8]).unwrap();
        for lin in 0..g.len() {
            g.set(lin, true);
        }
        assert!(matches!(
            hulloid_grid(&g, 1.0),
            Ok(HulloidResult::WholeSpace)
        ));
    }

    #[test]
    fn hausdorff_translation() {
        let mut g1 = Grid::new(vec![0.0, 0.0], 0.25, vec![20, 20]).unwrap();
        let mut g2 = g1.clone();
        g1.set(g1.ravel(&[5, 5]), true);
        g2.set(g2.ravel(&[8, 5]), true);
        assert!((hausdorff(&g1, &g2).unwrap() - 3.0 * 0.25).abs() < 1e-12);
        assert_eq!(hausdorff(&g1, &g1).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_asymmetry_resolved_by_max() {
        let mut g1 = Grid::new(vec![0.0, 0.0], 1.0, vec![16, 16]).unwrap();
        let mut g2 = g1.clone();
        g1.set(g1.ravel(&[2, 2]), true);
        g2.set(g2.ravel(&[2, 2]), true);
        g2.set(g2.ravel(&[10, 2]), true);
        assert_eq!(directed_hausdorff(&g1, &g2).unwrap(), 0.0);
        assert_eq!(hausdorff(&g1, &g2).unwrap(), 8.0);
    }

    #[test]
    fn components_basics() {
        let mut g = Grid::new(vec![0.0, 0.0], 1.0, vec![10, 10]).unwrap();
        g.set(g.ravel(&[1, 1]), true);
        g.set(g.ravel(&[8, 8]), true);
        assert_eq!(components(&g).0, 2);
        for lin in 0..g.len() {
            g.set(lin, true);
        }
        assert_eq!(components(&g).0, 1);
    }

    #[test]
    fn components_annulus_and_center() {
        let w = Window::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let s = ShapeExpr::union(vec![
            ShapeExpr::difference(
                ShapeExpr::ball(&[0.0, 0.0], 0.8, true),
                ShapeExpr::ball(&[0.0, 0.0], 0.5, false),
            ),
            ShapeExpr::Points {
                points: vec![vec![0.0, 0.0]],
            },
        ]);
        let g = rasterize(&s, &w, 0.02).unwrap();
        assert_eq!(components(&g).0, 2);
    }

    #[test]
    fn ball_complement_is_r_body() {
        let h = 0.04;
        let r = 0.5;
        let w = Window::new(vec![-2.5, -2.5], vec![2.5, 2.5]).unwrap();
        let s = ShapeExpr::ball(&[0.0, 0.0], 0.6, false).complement();
        let a = rasterize(&s, &w, h).unwrap();
        let (ok, _) = is_r_body(&a, r, 2.0 * h * 2f64.sqrt()).unwrap();
        assert!(ok);
    }

    #[test]
    fn small_ball_complement_is_not_r_body() {
        let h = 0.04;
        let r = 1.0;
        let w = Window::new(vec![-3.2, -3.2], vec![3.2, 3.2]).unwrap();
        let s = ShapeExpr::ball(&[0.0, 0.0], 0.5, false).complement();
        let a = rasterize(&s, &w, h).unwrap();
        let (ok, witness) = is_r_body(&a, r, 2.0 * h * 2f64.sqrt()).unwrap();
        assert!(!ok);
        // the hulloid is the whole space: no admissible ball center exists
        assert!(witness.is_none());
        assert!(matches!(hulloid_grid(&a, r), Ok(HulloidResult::WholeSpace)));
    }

    #[test]
    fn circle_arc_is_r_body() {
        let h = 0.02;
        let r = 0.5;
        let w = Window::new(vec![-2.0, -2.0], vec![2.0, 2.0]).unwrap();
        // quarter arc of the radius-R circle
        let s = ShapeExpr::intersection(vec![
            ShapeExpr::SphereShell {
                center: vec![0.0, 0.0],
                radius: r,
                thickness: 1.5 * h,
            },
            ShapeExpr::Halfspace {
                normal: vec![-1.0, 0.0],
                offset: 0.0,
            },
            ShapeExpr::Halfspace {
                normal: vec![0.0, -1.0],
                offset: 0.0,
            },
        ]);
        let a = rasterize(&s, &w, h).unwrap();
        assert!(!a.is_empty());
        let (ok, _) = is_r_body(&a, r, 3.0 * h * 2f64.sqrt()).unwrap();
        assert!(ok);
    }

    #[test]
    fn r_body_implies_k2() {
        let h = 0.04;
        let r = 0.5;
        let w = Window::new(vec![-2.5, -2.5], vec![2.5, 2.5]).unwrap();
        let s = ShapeExpr::ball(&[0.0, 0.0], 0.7, true);
        let a = rasterize(&s, &w, h).unwrap();
        let (ok, _) = k2_membership(&a, r).unwrap();
        assert!(ok);
    }

    #[test]
    fn boundary_formula_on_blobs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let h = 0.04;
            let r = 0.35;
            let w = Window::new(vec![-1.8, -1.8], vec![1.8, 1.8]).unwrap();
            let parts: Vec<ShapeExpr> = (0..5)
                .map(|_| {
                    ShapeExpr::ball(
                        &[rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                        rng.gen_range(0.1..0.3),
                        true,
                    )
                })
                .collect();
            let e = rasterize(&ShapeExpr::union(parts), &w, h).unwrap();
            let report = boundary_formula_check(&e, r).unwrap();
            assert!(report.passed(), "{:?}", report.checks);
        }
    }

    #[test]
    fn boundary_formula_on_point_pair() {
        let h = 0.03;
        let r = 0.4;
        let e = rasterize_points(
            &[Point::xy(0.0, 0.0), Point::xy(0.5, 0.1)],
            2.0 * r + 5.0 * h,
            h,
        )
        .unwrap();
        assert!(boundary_formula_check(&e, r).unwrap().passed());
    }

    #[test]
    fn boundary_formula_on_single_point() {
        let h = 0.03;
        let r = 0.4;
        let e = rasterize_points(&[Point::xy(0.05, -0.02)], 2.0 * r + 5.0 * h, h).unwrap();
        assert!(boundary_formula_check(&e, r).unwrap().passed());
    }

    #[test]
    fn boundary_witness_ball_complement() {
        let h = 0.04;
        let r = 0.6;
        let w = Window::new(vec![-3.0, -3.0], vec![3.0, 3.0]).unwrap();
        let s = ShapeExpr::ball(&[0.2, -0.1], r, false).complement();
        let a = rasterize(&s, &w, h).unwrap();
        // boundary point of A on the sphere around (0.2, -0.1)
        let y = Point::xy(0.2 + r, -0.1);
        let (x0, da) = boundary_witness(&a, r, &y).unwrap();
        assert!(x0.dist(&Point::xy(0.2, -0.1)) <= 2.0 * h * 2f64.sqrt());
        assert!(da >= r - 2.0 * h * 2f64.sqrt());
    }

    #[test]
    fn boundary_witness_tangent_to_disk() {
        let h = 0.03;
        let r = 0.8;
        let w = Window::new(vec![-3.0, -3.0], vec![3.0, 3.0]).unwrap();
        let a = rasterize(&ShapeExpr::ball(&[0.0, 0.0], r / 2.0, true), &w, h).unwrap();
        let y = Point::xy(r / 2.0, 0.0);
        let (x0, _) = boundary_witness(&a, r, &y).unwrap();
        // witness sits on the outward normal ray at distance R from y
        let expect = Point::xy(r / 2.0 + r, 0.0);
        assert!(x0.dist(&expect) <= 3.0 * h * 2f64.sqrt(), "{x0:?}");
    }

    #[test]
    fn grid_budget_enforced() {
        assert!(matches!(
            Grid::new(vec![0.0, 0.0, 0.0], 0.001, vec![10_000, 10_000, 10_000]),
            Err(Error::ResourceLimit(_))
        ));
    }
}
