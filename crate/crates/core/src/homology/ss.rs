//! Spectral-sequence pages: the coniveau-style page whose second page is the
//! cohomology of the real points in rows q = 0 mod 4, the forced-consequence
//! analyzer for its abutment, and a general exact-couple engine for filtered
//! complexes of free groups with a strong-convergence check.

use std::collections::BTreeMap;

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::homology::group::{cohomology, localize_away_2, FGAbGroup};
use crate::homology::matrix::{
    express_in_basis, image_basis, kernel_basis, lattice_contains, lattice_intersection,
    lattice_preimage, IntMatrix,
};

/// The two differential-bidegree conventions for the coniveau-style page.
/// The degree analysis below is insensitive to the choice: under either one
/// a differential between nonzero rows needs page index r = 1 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PageBidegree {
    /// d_r of bidegree (r, r-1)
    RRMinus1,
    /// d_r of bidegree (r, 1-r)
    R1MinusR,
}

impl PageBidegree {
    pub fn of(self, r: i64) -> (i64, i64) {
        match self {
            PageBidegree::RRMinus1 => (r, r - 1),
            PageBidegree::R1MinusR => (r, 1 - r),
        }
    }
}

/// One page of a spectral sequence: groups on a (p, q) grid, optional
/// differential matrices where they have been computed.
#[derive(Debug, Clone)]
pub struct SSPage {
    pub r: u32,
    pub convention: PageBidegree,
    pub entries: BTreeMap<(i64, i64), FGAbGroup>,
    pub differentials: BTreeMap<(i64, i64), IntMatrix>,
}

impl SSPage {
    pub fn entry(&self, p: i64, q: i64) -> FGAbGroup {
        self.entries.get(&(p, q)).cloned().unwrap_or_else(FGAbGroup::zero)
    }
}

/// Build the second page from the cohomology of the real points: H^p, with 2
/// inverted, in every row q = 0 mod 4 and zero elsewhere. `groups[p]` is
/// H^p(X_r, Z), indexed 0..=d.
pub fn build_thm_a_e2(
    groups: &[FGAbGroup],
    d: usize,
    convention: PageBidegree,
) -> Result<SSPage> {
    if groups.len() != d + 1 {
        return Err(Error::BadPageShape(format!(
            "need groups for p = 0..={d}, got {}",
            groups.len()
        )));
    }
    let mut entries = BTreeMap::new();
    let localized: Vec<FGAbGroup> = groups.iter().map(localize_away_2).collect();
    let qmin = -4 * ((d as i64 + 3) / 4 + 1);
    for (p, g) in localized.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut q = qmin;
        while q <= 4 {
            entries.insert((p as i64, q), g.clone());
            q += 4;
        }
    }
    Ok(SSPage {
        r: 2,
        convention,
        entries,
        differentials: BTreeMap::new(),
    })
}

/// What the engine can assert about one Witt-group diagonal of the abutment.
#[derive(Debug, Clone)]
pub enum WittReport {
    /// W^degree[1/2] is isomorphic to the single surviving graded piece.
    Iso { degree: u32, group: FGAbGroup },
    /// Short exact 0 -> sub -> W^degree[1/2] -> quot -> 0.
    Extension {
        degree: u32,
        sub: FGAbGroup,
        quot: FGAbGroup,
    },
    /// Left-exact only: 0 -> sub -> W^degree[1/2] -> quot, the final map not
    /// known to be onto (a differential out of the edge may survive).
    LeftExact {
        degree: u32,
        sub: FGAbGroup,
        quot: FGAbGroup,
    },
    /// Not forced; only size bounds are claimed.
    Bounded {
        degree: u32,
        rank_bound: usize,
        exponent_bound: BigInt,
    },
}

impl WittReport {
    pub fn degree(&self) -> u32 {
        match self {
            WittReport::Iso { degree, .. }
            | WittReport::Extension { degree, .. }
            | WittReport::LeftExact { degree, .. }
            | WittReport::Bounded { degree, .. } => *degree,
        }
    }

    pub fn is_forced(&self) -> bool {
        matches!(self, WittReport::Iso { .. } | WittReport::Extension { .. })
    }
}

/// The forced-consequence report for the four Witt diagonals.
#[derive(Debug, Clone)]
pub struct AbutmentReport {
    pub affine: bool,
    pub diagonals: Vec<WittReport>,
}

fn thm_a_columns(page: &SSPage) -> Result<(usize, Vec<FGAbGroup>)> {
    let mut d = 0usize;
    for &(p, q) in page.entries.keys() {
        if p < 0 || q % 4 != 0 {
            return Err(Error::BadPageShape(format!(
                "entry at ({p},{q}) is outside the q = 0 mod 4 rows"
            )));
        }
        d = d.max(p as usize);
    }
    let mut columns = vec![FGAbGroup::zero(); d + 1];
    for (&(p, q), g) in &page.entries {
        let col = &mut columns[p as usize];
        if col.is_zero() {
            *col = g.clone();
        } else if col != g {
            return Err(Error::BadPageShape(format!(
                "rows disagree in column {p} at q = {q}"
            )));
        }
    }
    Ok((d, columns))
}

/// Whether a differential with the given source column can be nonzero on some
/// page, by degree reasons alone: it needs page index r = 1 mod 4 (so the
/// target stays in a nonzero row under either bidegree convention), a target
/// column inside the page, and nonzero groups at both ends.
fn live_outgoing(columns: &[FGAbGroup], p: usize, affine: bool) -> bool {
    if affine && p == 0 {
        return false;
    }
    if columns[p].is_zero() {
        return false;
    }
    let d = columns.len() - 1;
    let mut r = 5usize;
    while p + r <= d {
        if !columns[p + r].is_zero() {
            return true;
        }
        r += 4;
    }
    false
}

fn live_incoming(columns: &[FGAbGroup], p: usize, affine: bool) -> bool {
    if columns[p].is_zero() {
        return false;
    }
    let mut r = 5usize;
    while r <= p {
        let src = p - r;
        if !columns[src].is_zero() && !(affine && src == 0) {
            return true;
        }
        r += 4;
    }
    false
}

/// Extract every consequence of the page that follows from degree reasons
/// (and, over affine input, from the vanishing of differentials out of the
/// edge column). Diagonals whose differentials cannot all be killed get
/// interval-style bounds, never equalities.
pub fn run_forced(page: &SSPage, affine: bool) -> Result<AbutmentReport> {
    let (_, columns) = thm_a_columns(page)?;
    let d = columns.len() - 1;
    let mut diagonals = vec![];
    for degree in 0u32..4 {
        // contributing columns p = degree, degree+4, ... (q = degree - p
        // is then 0 mod 4), nonzero only
        let ps: Vec<usize> = (degree as usize..=d)
            .step_by(4)
            .filter(|&p| !columns[p].is_zero())
            .collect();
        let dead: Vec<bool> = ps
            .iter()
            .map(|&p| !live_outgoing(&columns, p, affine) && !live_incoming(&columns, p, affine))
            .collect();
        let report = if dead.iter().all(|&x| x) {
            match ps.len() {
                0 => WittReport::Iso {
                    degree,
                    group: FGAbGroup::zero(),
                },
                1 => WittReport::Iso {
                    degree,
                    group: columns[ps[0]].clone(),
                },
                2 => WittReport::Extension {
                    degree,
                    sub: columns[ps[1]].clone(),
                    quot: columns[ps[0]].clone(),
                },
                _ => bounded(degree, &ps, &columns),
            }
        } else if ps.len() == 2
            && dead[1]
            && !live_incoming(&columns, ps[0], affine)
        {
            // only the differential leaving the edge entry might survive:
            // its E-infinity term is a subgroup of the E2 entry, so the
            // sequence stays exact on the left
            WittReport::LeftExact {
                degree,
                sub: columns[ps[1]].clone(),
                quot: columns[ps[0]].clone(),
            }
        } else {
            bounded(degree, &ps, &columns)
        };
        diagonals.push(report);
    }
    Ok(AbutmentReport { affine, diagonals })
}

fn bounded(degree: u32, ps: &[usize], columns: &[FGAbGroup]) -> WittReport {
    let mut rank = 0usize;
    let mut expo = BigInt::one();
    for &p in ps {
        rank += columns[p].free_rank();
        expo *= columns[p].torsion_exponent();
    }
    WittReport::Bounded {
        degree,
        rank_bound: rank,
        exponent_bound: expo,
    }
}

/// The Betti-number bounds on the ranks of the four Witt groups:
/// bound_j = sum of betti[4i + j] for 0 <= i <= N_j, N_j = floor((d-j)/4)
/// clamped at zero.
pub fn betti_rank_bounds(betti: &[usize], d: usize) -> [usize; 4] {
    let mut out = [0usize; 4];
    for (j, slot) in out.iter_mut().enumerate() {
        let nj = if d <= j { 0 } else { (d - j) / 4 };
        for i in 0..=nj {
            *slot += betti.get(4 * i + j).copied().unwrap_or(0);
        }
    }
    out
}

/// A bounded cochain complex of free groups with a finite decreasing
/// filtration by subcomplexes. `diffs[i]` maps C^i to C^{i+1}; `filt[p][i]`
/// generates the sublattice F_p C^i. F_0 is the whole of C^i and the
/// filtration below `filt.len()` is zero.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub diffs: Vec<IntMatrix>,
    pub filt: Vec<Vec<IntMatrix>>,
}

impl FilteredComplex {
    pub fn terms(&self) -> usize {
        self.diffs.len() + 1
    }

    pub fn dim(&self, i: usize) -> usize {
        if i < self.diffs.len() {
            self.diffs[i].cols()
        } else {
            self.diffs[i - 1].rows()
        }
    }

    /// Filtration by basis weights: F_p C^i is spanned by the basis vectors
    /// of weight >= p. The differentials must not decrease weight.
    pub fn from_weights(diffs: Vec<IntMatrix>, weights: Vec<Vec<i64>>) -> Result<FilteredComplex> {
        let depth = weights
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        let mut filt = vec![];
        for p in 0..=depth {
            let mut level = vec![];
            for w in &weights {
                let idx: Vec<usize> = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x >= p as i64)
                    .map(|(k, _)| k)
                    .collect();
                let mut m = IntMatrix::zeros(w.len(), idx.len());
                for (j, &k) in idx.iter().enumerate() {
                    m.set(k, j, BigInt::one());
                }
                level.push(m);
            }
            filt.push(level);
        }
        let fc = FilteredComplex { diffs, filt };
        fc.validate()?;
        Ok(fc)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.terms();
        for level in &self.filt {
            if level.len() != n {
                return Err(Error::InvalidFiltration(
                    "each filtration level needs one lattice per term".into(),
                ));
            }
            for (i, m) in level.iter().enumerate() {
                if m.rows() != self.dim(i) {
                    return Err(Error::InvalidFiltration(format!(
                        "lattice at term {i} has {} rows, expected {}",
                        m.rows(),
                        self.dim(i)
                    )));
                }
            }
        }
        // d^2 = 0
        for i in 0..self.diffs.len().saturating_sub(1) {
            if !self.diffs[i + 1].mul(&self.diffs[i]).is_zero() {
                return Err(Error::NotAComplex(i + 1));
            }
        }
        // nesting and d(F_p) inside F_p
        for p in 0..self.filt.len() {
            for i in 0..n {
                if p + 1 < self.filt.len()
                    && !lattice_contains(&self.filt[p][i], &self.filt[p + 1][i])
                {
                    return Err(Error::InvalidFiltration(format!(
                        "level {} not inside level {p} at term {i}",
                        p + 1
                    )));
                }
                if p == 0 && !lattice_contains(&self.filt[0][i], &IntMatrix::identity(self.dim(i)))
                {
                    return Err(Error::InvalidFiltration(format!(
                        "level 0 must be all of the term at {i}"
                    )));
                }
                if i < self.diffs.len() {
                    let img = self.diffs[i].mul(&self.filt[p][i]);
                    if !lattice_contains(&self.filt[p][i + 1], &img) {
                        return Err(Error::InvalidFiltration(format!(
                            "differential leaves level {p} at term {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// F_p C^i with the index clamped: everything at p <= 0, zero at
    /// p >= depth.
    fn level(&self, p: i64, i: usize) -> IntMatrix {
        let ni = self.dim(i);
        if p <= 0 {
            IntMatrix::identity(ni)
        } else if (p as usize) < self.filt.len() {
            self.filt[p as usize][i].clone()
        } else {
            IntMatrix::zeros(ni, 0)
        }
    }

    /// Z_r^{p,q} = F_p C^{p+q} meet d^{-1}(F_{p+r} C^{p+q+1}), as a lattice
    /// in C^{p+q}.
    fn cycles(&self, r: i64, p: i64, q: i64) -> IntMatrix {
        let n = p + q;
        if n < 0 || n as usize >= self.terms() {
            return IntMatrix::zeros(0, 0);
        }
        let n = n as usize;
        let fp = self.level(p, n);
        if n == self.terms() - 1 {
            return image_basis(&fp);
        }
        let pre = lattice_preimage(&self.diffs[n], &self.level(p + r, n + 1));
        lattice_intersection(&fp, &pre)
    }

    /// E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}).
    fn page_entry(&self, r: i64, p: i64, q: i64) -> FGAbGroup {
        let n = p + q;
        if n < 0 || n as usize >= self.terms() {
            return FGAbGroup::zero();
        }
        let num = self.cycles(r, p, q);
        let mut den = self.cycles(r - 1, p + 1, q - 1);
        if n > 0 {
            let src = self.cycles(r - 1, p - r + 1, q + r - 2);
            let img = self.diffs[n as usize - 1].mul(&src);
            den = den.hstack(&img);
        }
        quotient_group(&num, &den)
    }

    /// Page index at which everything has stabilized: the filtration depth
    /// plus the complex length bounds every differential.
    pub fn stable_r(&self) -> i64 {
        (self.filt.len() + self.terms() + 1) as i64
    }
}

/// The quotient of nested lattices L2 inside L1 (both given by generators in
/// the same ambient Z^n) as an abstract group.
fn quotient_group(l1: &IntMatrix, l2: &IntMatrix) -> FGAbGroup {
    let basis = image_basis(l1);
    let rel = express_in_basis(&basis, l2).expect("denominator inside numerator");
    FGAbGroup::from_presentation(&rel)
}

/// Full run of the spectral sequence of a filtered complex: pages from r = 1
/// to stabilization, the limit page, and the strong-convergence verdicts
/// comparing every limit entry with the corresponding graded piece of the
/// cohomology of the total complex.
#[derive(Debug, Clone)]
pub struct FilteredSSRun {
    pub pages: Vec<SSPage>,
    pub infinity: SSPage,
    /// For each (p, q): does E-infinity match gr_p H^{p+q}? Strong
    /// convergence says all of these are true.
    pub convergence: Vec<((i64, i64), bool)>,
    pub total_cohomology: Vec<FGAbGroup>,
}

impl FilteredSSRun {
    pub fn converged(&self) -> bool {
        self.convergence.iter().all(|(_, ok)| *ok)
    }
}

pub fn filtered_complex_ss(fc: &FilteredComplex) -> Result<FilteredSSRun> {
    fc.validate()?;
    let depth = fc.filt.len() as i64;
    let terms = fc.terms() as i64;
    let rmax = fc.stable_r();
    let mut pages = vec![];
    for r in 1..=rmax {
        let mut entries = BTreeMap::new();
        for p in 0..=depth {
            for n in 0..terms {
                let q = n - p;
                let g = fc.page_entry(r, p, q);
                if !g.is_zero() {
                    entries.insert((p, q), g);
                }
            }
        }
        pages.push(SSPage {
            r: r as u32,
            convention: PageBidegree::R1MinusR,
            entries,
            differentials: BTreeMap::new(),
        });
    }
    let infinity = pages.last().cloned().expect("rmax >= 1");

    // total cohomology and its filtration-graded pieces
    let total = cohomology(&fc.diffs)?;
    let mut convergence = vec![];
    for n in 0..terms {
        let ni = fc.dim(n as usize);
        let kernel = if (n as usize) < fc.diffs.len() {
            kernel_basis(&fc.diffs[n as usize])
        } else {
            IntMatrix::identity(ni)
        };
        let image = if n > 0 {
            image_basis(&fc.diffs[n as usize - 1])
        } else {
            IntMatrix::zeros(ni, 0)
        };
        for p in 0..=depth {
            let q = n - p;
            // gr_p H^n = (F_p meet ker + im) / (F_{p+1} meet ker + im)
            let top = lattice_intersection(&fc.level(p, n as usize), &kernel).hstack(&image);
            let bot = lattice_intersection(&fc.level(p + 1, n as usize), &kernel).hstack(&image);
            let graded = quotient_group(&top, &bot);
            let einf = infinity.entry(p, q);
            if graded.is_zero() && einf.is_zero() {
                continue;
            }
            convergence.push(((p, q), graded == einf));
        }
    }
    Ok(FilteredSSRun {
        pages,
        infinity,
        convergence,
        total_cohomology: total,
    })
}
