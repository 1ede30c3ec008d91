//! Mod-p homology Bockstein spectral sequence of a free complex over `Z_(p)`.
//!
//! Pages are read off the elementary-complex decomposition: a piece
//! `y -> p^k x` contributes the pair `(y, x)` to every page `r <= k`, with
//! `β^k(y) = x`; free pieces are permanent cycles.

use crate::graded::{
    BasisRole, Decomposition, GradedBasis, GradedChainComplex, GradedError, GradedMap,
};
use crate::matrix::ExactMatrix;
use crate::scalar::{Fp, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BssError {
    #[error("r_max must be at least 1")]
    BadPageCount,
    #[error("map is not a chain map: d∘f ≠ f∘d from degree {degree}")]
    NotChainMap { degree: usize },
    #[error("image of a page-{page} class in degree {degree} does not survive to page {page}")]
    NotSurviving { page: u32, degree: usize },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Where a page class comes from in the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// Permanent cycle.
    Free,
    /// Source of a piece with the given exponent.
    Top { exponent: u32 },
    /// Target of a piece with the given exponent.
    Bottom { exponent: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageClass<S: Scalar> {
    pub name: String,
    pub degree: usize,
    /// Chain in `C_n`, original coordinates, with `d(c) ∈ p^r C`.
    pub representative: Vec<S>,
    pub kind: ClassKind,
    /// Index of the decomposed basis vector in its degree.
    pub(crate) slot: usize,
}

/// One page `E^r` in the trust window, with `β^r` over `F_p`.
#[derive(Clone, Debug)]
pub struct SpectralPage<S: Scalar> {
    pub r: u32,
    classes: Vec<Vec<PageClass<S>>>,
    beta: GradedMap<Fp>,
}

impl<S: Scalar> SpectralPage<S> {
    pub fn classes(&self, n: usize) -> &[PageClass<S>] {
        self.classes.get(n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self, n: usize) -> usize {
        self.classes(n).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.classes.iter().map(|v| v.len()).collect()
    }

    /// Highest reported degree.
    pub fn window(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn basis(&self) -> &GradedBasis {
        self.beta.source()
    }

    /// `β^r`, degree −1, in the page basis.
    pub fn beta(&self) -> &GradedMap<Fp> {
        &self.beta
    }

    /// Pairs `(top, bottom)` of class names joined by `β^r`.
    pub fn beta_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for n in 1..self.classes.len() {
            let b = self.beta.block(n);
            for j in 0..b.cols() {
                for i in 0..b.rows() {
                    if !b.get(i, j).is_zero() {
                        out.push((
                            self.classes[n][j].name.clone(),
                            self.classes[n - 1][i].name.clone(),
                        ));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct BssResult<S: Scalar> {
    pages: Vec<SpectralPage<S>>,
    stable_page: Option<u32>,
    decomposition: Decomposition<S>,
    basis: GradedBasis,
}

impl<S: Scalar> BssResult<S> {
    pub fn pages(&self) -> &[SpectralPage<S>] {
        &self.pages
    }

    /// Page `r` (1-based).
    pub fn page(&self, r: u32) -> Option<&SpectralPage<S>> {
        self.pages.get((r as usize).checked_sub(1)?)
    }

    pub fn r_max(&self) -> u32 {
        self.pages.len() as u32
    }

    /// First page from which all later pages agree in the window, if it is
    /// among the computed pages.
    pub fn stable_page(&self) -> Option<u32> {
        self.stable_page
    }

    /// Stable page as determined by the decomposition, computed or not.
    pub fn stabilizes_at(&self) -> u32 {
        self.decomposition.max_exponent() + 1
    }

    pub fn collapse_message(&self) -> String {
        match self.stable_page {
            Some(1) => "collapsed at page 1".to_string(),
            Some(s) => format!("collapses after page {}", s - 1),
            None => format!("not yet stable by page {}", self.r_max()),
        }
    }

    pub fn decomposition(&self) -> &Decomposition<S> {
        &self.decomposition
    }

    /// Highest reported degree (`N_max - 1`).
    pub fn window(&self) -> usize {
        self.pages[0].window()
    }

    /// Coordinates on page `r` of the class of `z ∈ C_n`, or `None` when
    /// `d(z) ∉ p^r C`.
    pub fn class_of(&self, r: u32, n: usize, z: &[S]) -> Option<Vec<Fp>> {
        let page = self.page(r)?;
        if n > page.window() {
            return None;
        }
        let w = self.decomposition.inverse(n).mul_vec(z).ok()?;
        // d(z) = Σ_tops w_j p^{k_j} x_j must be divisible by p^r.
        for (j, role) in self.decomposition.roles(n).iter().enumerate() {
            if let BasisRole::Top { piece } = role {
                let k = self.decomposition.pieces()[*piece].exponent;
                if k < r {
                    match w[j].valuation() {
                        None => {}
                        Some(v) if v + k >= r => {}
                        _ => return None,
                    }
                }
            }
        }
        Some(page.classes(n).iter().map(|c| w[c.slot].to_fp()).collect())
    }
}

fn class_name<S: Scalar>(names: &[String], v: &[S]) -> String {
    crate::graded::format_vector(names, v)
}

/// Pages `E^1 ..= E^{r_max}` of the mod-p homology BSS of `c`.
pub fn bockstein_pages<S: Scalar>(
    c: &GradedChainComplex<S>,
    r_max: u32,
) -> Result<BssResult<S>, BssError> {
    if r_max < 1 {
        return Err(BssError::BadPageCount);
    }
    let dec = c.decompose()?;
    let top = c.max_degree();
    let window = top.saturating_sub(1);
    let p = c.prime();

    // Classes available at every page, with the piece exponent (None for free).
    let mut candidates: Vec<Vec<(Option<u32>, ClassKind, usize, Vec<S>, String)>> =
        vec![Vec::new(); window + 1];
    for (n, slot_list) in candidates.iter_mut().enumerate().take(window + 1) {
        if n > top {
            break;
        }
        for (slot, role) in dec.roles(n).iter().enumerate() {
            let (exp, kind) = match role {
                BasisRole::Free => (None, ClassKind::Free),
                BasisRole::Top { piece } => {
                    let k = dec.pieces()[*piece].exponent;
                    (Some(k), ClassKind::Top { exponent: k })
                }
                BasisRole::Bottom { piece } => {
                    let k = dec.pieces()[*piece].exponent;
                    (Some(k), ClassKind::Bottom { exponent: k })
                }
            };
            if exp == Some(0) {
                continue;
            }
            let rep = dec.vector(n, slot);
            let name = class_name(c.basis().names(n), &rep);
            slot_list.push((exp, kind, slot, rep, name));
        }
        slot_list.sort_by(|a, b| a.4.cmp(&b.4).then(a.2.cmp(&b.2)));
    }

    let mut pages = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let mut classes: Vec<Vec<PageClass<S>>> = Vec::with_capacity(window + 1);
        let mut basis = GradedBasis::new(window);
        for (n, cands) in candidates.iter().enumerate() {
            let mut here = Vec::new();
            for (exp, kind, slot, rep, name) in cands {
                if exp.is_none_or(|k| k >= r) {
                    let mut display = name.clone();
                    let mut dup = 1;
                    while basis.index_of(n, &display).is_some() {
                        dup += 1;
                        display = format!("{name}#{dup}");
                    }
                    basis.push(n, display.clone())?;
                    here.push(PageClass {
                        name: display,
                        degree: n,
                        representative: rep.clone(),
                        kind: *kind,
                        slot: *slot,
                    });
                }
            }
            classes.push(here);
        }
        let mut beta = GradedMap::<Fp>::zero(basis.clone(), basis, -1, p);
        for n in 1..=window {
            let mut m = ExactMatrix::<Fp>::zeros(classes[n - 1].len(), classes[n].len(), p);
            let mut any = false;
            for (j, y) in classes[n].iter().enumerate() {
                if let (ClassKind::Top { exponent }, BasisRole::Top { piece }) =
                    (y.kind, dec.roles(n)[y.slot])
                {
                    if exponent == r {
                        let bottom = dec.pieces()[piece].bottom_index;
                        let i = classes[n - 1]
                            .iter()
                            .position(|x| x.slot == bottom)
                            .expect("partner survives");
                        m.set(i, j, Fp::new(1, p));
                        any = true;
                    }
                }
            }
            if any {
                beta.set_block(n, m)?;
            }
        }
        pages.push(SpectralPage { r, classes, beta });
    }

    let s = dec.max_exponent() + 1;
    let stable_page = if s <= r_max { Some(s) } else { None };
    Ok(BssResult {
        pages,
        stable_page,
        decomposition: dec,
        basis: c.basis().clone(),
    })
}

/// `E^r(f)` for every computed page, in the page bases.
pub fn bss_of_morphism<S: Scalar>(
    f: &GradedMap<S>,
    source_complex: &GradedChainComplex<S>,
    target_complex: &GradedChainComplex<S>,
    source: &BssResult<S>,
    target: &BssResult<S>,
) -> Result<Vec<GradedMap<Fp>>, BssError> {
    if f.degree() != 0 || f.source() != &source.basis || f.target() != &target.basis {
        return Err(GradedError::BasisMismatch.into());
    }
    for n in 1..=source_complex.max_degree().min(target_complex.max_degree()) {
        let lhs = target_complex
            .boundary(n)
            .mul(&f.block(n))
            .map_err(GradedError::from)?;
        let rhs = f
            .block(n - 1)
            .mul(&source_complex.boundary(n))
            .map_err(GradedError::from)?;
        if lhs != rhs {
            return Err(BssError::NotChainMap { degree: n });
        }
    }
    let p = f.prime();
    let rounds = source.r_max().min(target.r_max());
    let mut out = Vec::with_capacity(rounds as usize);
    for r in 1..=rounds {
        let sp = source.page(r).expect("computed");
        let tp = target.page(r).expect("computed");
        let mut map = GradedMap::<Fp>::zero(sp.basis().clone(), tp.basis().clone(), 0, p);
        for n in 0..=sp.window().min(tp.window()) {
            let mut m = ExactMatrix::<Fp>::zeros(tp.dim(n), sp.dim(n), p);
            for (j, c) in sp.classes(n).iter().enumerate() {
                let image = f.apply(n, &c.representative)?;
                let coords = target
                    .class_of(r, n, &image)
                    .ok_or(BssError::NotSurviving { page: r, degree: n })?;
                for (i, x) in coords.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            map.set_block(n, m)?;
        }
        out.push(map);
    }
    Ok(out)
}
