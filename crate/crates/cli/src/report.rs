//! Report types. Every report renders as text and serializes to JSON with
//! the same content.

use std::fmt::Write;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ViolationEntry {
    pub kind: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub prime: u64,
    pub nmax: usize,
    pub generators: usize,
    pub valid: bool,
    pub violations: Vec<ViolationEntry>,
}

impl ValidateReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "p = {}, N_max = {}, {} generators\n",
            self.prime, self.nmax, self.generators
        );
        if self.valid {
            out.push_str("valid\n");
        } else {
            out.push_str("invalid\n");
            for v in &self.violations {
                let _ = writeln!(out, "  {}: {}", v.kind, v.witness);
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyRow {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u32>,
    pub mod_p: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub target: String,
    pub prime: u64,
    pub nmax: usize,
    pub window: usize,
    /// Nonzero degrees only.
    pub rows: Vec<HomologyRow>,
}

fn group(p: u64, rank: usize, torsion: &[u32]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push(format!("Z_({p})")),
        r => parts.push(format!("Z_({p})^{r}")),
    }
    for k in torsion {
        if *k == 1 {
            parts.push(format!("Z/{p}"));
        } else {
            parts.push(format!("Z/{p}^{k}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl HomologyReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "homology of {}, p = {}, degrees 0..={}\n",
            self.target, self.prime, self.window
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "  H_{} = {}    dim over F_{}: {}",
                r.degree,
                group(self.prime, r.rank, &r.torsion),
                self.prime,
                r.mod_p
            );
        }
        if self.rows.is_empty() {
            out.push_str("  all groups vanish\n");
        } else {
            out.push_str("  all other degrees vanish\n");
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    pub name: String,
    pub role: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeEntry {
    pub degree: usize,
    pub classes: Vec<ClassEntry>,
    /// `β^r` from this degree, rows indexed by the classes one degree down.
    pub beta: Vec<Vec<u64>>,
    /// `β^r(class)` written out for each class with nonzero image.
    pub beta_images: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageEntry {
    pub r: u32,
    pub dims: Vec<usize>,
    pub degrees: Vec<DegreeEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem3Entry {
    pub r: u32,
    pub primitive_dims: Vec<usize>,
    pub lie_dims: Vec<usize>,
    pub closed_under_beta: Result<(), String>,
    pub pbw_series: Result<(), String>,
    pub lie_image: Result<(), String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageReport {
    pub target: String,
    pub prime: u64,
    pub nmax: usize,
    pub window: usize,
    pub r_max: u32,
    pub homology: HomologyReport,
    pub pages: Vec<PageEntry>,
    pub collapse: String,
    pub warnings: Vec<String>,
    pub theorem3: Option<Vec<Theorem3Entry>>,
}

fn dims_text(dims: &[usize]) -> String {
    let parts: Vec<String> = dims
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > 0)
        .map(|(n, d)| format!("{n}:{d}"))
        .collect();
    if parts.is_empty() {
        "none".to_string()
    } else {
        parts.join(" ")
    }
}

fn verdict(r: &Result<(), String>) -> String {
    match r {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("FAILED ({e})"),
    }
}

impl PageReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "Bockstein spectral sequence of {}, p = {}, N_max = {}, pages 1..={}, degrees 0..={}\n",
            self.target, self.prime, self.nmax, self.r_max, self.window
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out.push_str(&self.homology.text());
        for page in &self.pages {
            let _ = writeln!(out, "page {}: dims {}", page.r, dims_text(&page.dims));
            for d in &page.degrees {
                let classes: Vec<String> = d
                    .classes
                    .iter()
                    .map(|c| format!("{} [{}]", c.name, c.role))
                    .collect();
                let _ = writeln!(out, "  degree {}: {}", d.degree, classes.join(", "));
                for (src, img) in &d.beta_images {
                    let _ = writeln!(out, "    β^{}({}) = {}", page.r, src, img);
                }
            }
        }
        let _ = writeln!(out, "{}", self.collapse);
        if let Some(pages) = &self.theorem3 {
            out.push_str(
                "structure checks (L^r counted as P(E^r) minus p-th powers of even primitives; \
                 P(E^r) = L^r itself is not decided)\n",
            );
            for t in pages {
                let _ = writeln!(
                    out,
                    "  page {}: beta preserves primitives {}; PBW series {}; image of E^r(L) primitive {}",
                    t.r,
                    verdict(&t.closed_under_beta),
                    verdict(&t.pbw_series),
                    verdict(&t.lie_image)
                );
                let _ = writeln!(out, "    primitive dims {}", dims_text(&t.primitive_dims));
                let _ = writeln!(out, "    L^r dims {}", dims_text(&t.lie_dims));
            }
        }
        out
    }

    pub fn theorem3_passed(&self) -> bool {
        self.theorem3
            .iter()
            .flatten()
            .all(|t| t.closed_under_beta.is_ok() && t.pbw_series.is_ok() && t.lie_image.is_ok())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CochainGenerator {
    pub name: String,
    pub degree: usize,
    pub differential: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyRow {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CochainReport {
    pub prime: u64,
    pub top: usize,
    pub abelian: bool,
    pub zero_differential: bool,
    pub generators: Vec<CochainGenerator>,
    /// Nonzero degrees `<= top - 1` only.
    pub cohomology: Vec<CohomologyRow>,
}

impl CochainReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "Chevalley-Eilenberg cochains, p = {}, degrees 0..={}\n",
            self.prime, self.top
        );
        let _ = writeln!(
            out,
            "  d_1 {} (bracket), d_0 {} (differential)",
            if self.abelian { "= 0" } else { "!= 0" },
            if self.zero_differential {
                "= 0"
            } else {
                "!= 0"
            }
        );
        for g in &self.generators {
            let _ = writeln!(
                out,
                "  d({}) = {}    |{}| = {}",
                g.name, g.differential, g.name, g.degree
            );
        }
        let _ = writeln!(out, "cohomology, degrees 0..={}", self.top - 1);
        for r in &self.cohomology {
            let _ = writeln!(
                out,
                "  H^{} = {}",
                r.degree,
                group(self.prime, r.rank, &r.torsion)
            );
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismReport {
    pub prime: u64,
    pub hopf: Result<(), String>,
    pub direct: Option<Result<(), String>>,
    pub dual: Option<Result<(), String>>,
}

impl MorphismReport {
    pub fn lie_type(&self) -> Option<bool> {
        self.direct.as_ref().map(|d| d.is_ok())
    }

    pub fn agree(&self) -> bool {
        match (&self.direct, &self.dual) {
            (Some(a), Some(b)) => a.is_ok() == b.is_ok(),
            _ => false,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        match &self.hopf {
            Ok(()) => out.push_str("Hopf algebra map: yes\n"),
            Err(e) => {
                let _ = writeln!(out, "Hopf algebra map: no ({e})");
                return out;
            }
        }
        if let (Some(direct), Some(dual)) = (&self.direct, &self.dual) {
            let _ = writeln!(out, "lie-type: {}", direct.is_ok());
            match direct {
                Ok(()) => out.push_str("  direct: generators map into L\n"),
                Err(w) => {
                    let _ = writeln!(out, "  direct: image leaves L: {w}");
                }
            }
            match dual {
                Ok(()) => out.push_str("  dual: the dual map is a Γ-morphism\n"),
                Err(w) => {
                    let _ = writeln!(out, "  dual: not a Γ-morphism, witness {w}");
                }
            }
            let _ = writeln!(out, "verdicts agree: {}", self.agree());
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop61Entry {
    pub prime: u64,
    pub n: usize,
    pub window: usize,
    pub cochains_match: bool,
    pub quasi_iso: bool,
    pub wrong_power_quasi_iso: bool,
    pub generator_degrees: (usize, usize),
    pub ul_homology: Vec<usize>,
    pub expected_homology: Vec<usize>,
    pub cochain_cohomology: Vec<CohomologyRow>,
    pub passed: bool,
}

fn power_of_x(k: u64) -> String {
    match k {
        0 => String::new(),
        1 => "x".to_string(),
        k => format!("x^{k}"),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Prop61Entry {
    pub fn text(&self) -> String {
        let p = self.prime;
        let mut out = format!(
            "model of L_ab(e, f), d f = e, over F_{p}: |e| = {}, |f| = {}, degrees 0..={}\n",
            2 * self.n - 1,
            2 * self.n,
            self.window
        );
        let _ = writeln!(
            out,
            "  C*(L) = (Λ(x, y), dx = y): {}",
            yes_no(self.cochains_match)
        );
        let _ = writeln!(
            out,
            "  (Λ(x1, y1), 0) -> C*(L), x1 ↦ x^{p}, y1 ↦ {}y is a quasi-isomorphism: {}",
            power_of_x(p - 1),
            yes_no(self.quasi_iso)
        );
        let _ = writeln!(
            out,
            "  same with y1 ↦ {}y: {}",
            power_of_x(p - 2),
            yes_no(self.wrong_power_quasi_iso)
        );
        let _ = writeln!(
            out,
            "  H(UL) generated in degrees {} and {}",
            self.generator_degrees.0, self.generator_degrees.1
        );
        let _ = writeln!(out, "  dim H(UL; F_{p}) by degree: {:?}", self.ul_homology);
        let _ = writeln!(
            out,
            "  Hilbert series of U L_ab(e1, f1): {:?}",
            self.expected_homology
        );
        let dims: Vec<usize> = self.cochain_cohomology.iter().map(|r| r.rank).collect();
        let _ = writeln!(out, "  dim H^k(C*(L)) by degree: {dims:?}");
        let _ = writeln!(
            out,
            "{}",
            if self.passed {
                "verified"
            } else {
                "NOT verified"
            }
        );
        out
    }
}
