//! The computations behind each subcommand, returning reports.

use std::fmt;
use std::path::Path;

use dgl_core::bss::{bockstein_pages, BssResult, ClassKind, PageClass};
use dgl_core::cce::cochains;
use dgl_core::examples::{example1, example2, prop61, prop61_lie};
use dgl_core::graded::{format_vector, GradedChainComplex};
use dgl_core::lie::{DgLie, PbwAlgebra};
use dgl_core::scalar::{is_odd_prime, PLocal, Scalar};
use dgl_core::structure::{verify_theorem3, HopfMorphism};

use crate::dgl_file::{DglFile, ParseError};
use crate::map_file::MapFile;
use crate::report::*;

/// Exit code 2 for `Input`, 1 for `Math`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Math(m) => write!(f, "{m}"),
        }
    }
}

fn math(e: impl fmt::Display) -> CliError {
    CliError::Math(e.to_string())
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Lie,
    Ul,
}

impl Target {
    fn label(self) -> &'static str {
        match self {
            Target::Lie => "L",
            Target::Ul => "UL",
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: ParseError) -> CliError {
    input(format!("{}: {e}", path.display()))
}

pub fn load(path: &Path) -> Result<DglFile, CliError> {
    DglFile::parse(&read(path)?).map_err(|e| located(path, e))
}

pub fn validate(file: &DglFile) -> Result<ValidateReport, CliError> {
    let l = file.to_dgl().map_err(input)?;
    let report = l.validate();
    Ok(ValidateReport {
        prime: file.prime,
        nmax: file.max_degree,
        generators: file.generators.len(),
        valid: report.is_valid(),
        violations: report
            .violations
            .iter()
            .map(|v| ViolationEntry {
                kind: v.kind.label().to_string(),
                witness: v.witness.clone(),
            })
            .collect(),
    })
}

/// The DGL of `file`, optionally re-truncated, refusing invalid input.
pub fn valid_dgl(file: &DglFile, nmax: Option<usize>) -> Result<DgLie<PLocal>, CliError> {
    let mut l = file.to_dgl().map_err(input)?;
    if let Some(n) = nmax {
        l = l.with_max_degree(n).map_err(input)?;
    }
    let report = l.validate();
    if !report.is_valid() {
        return Err(CliError::Math(format!("invalid DGL\n{report}")));
    }
    Ok(l)
}

fn complex(
    l: &DgLie<PLocal>,
    target: Target,
) -> Result<(GradedChainComplex<PLocal>, Option<PbwAlgebra<PLocal>>), CliError> {
    match target {
        Target::Lie => Ok((l.chain_complex().map_err(math)?, None)),
        Target::Ul => {
            let ul = PbwAlgebra::build(l).map_err(math)?;
            Ok((ul.chain_complex().map_err(math)?, Some(ul)))
        }
    }
}

fn homology_report(
    c: &GradedChainComplex<PLocal>,
    target: Target,
) -> Result<HomologyReport, CliError> {
    let summary = c.homology().map_err(math)?;
    let window = c.max_degree().saturating_sub(1);
    let mod_p = summary.mod_p_dims();
    let mut rows = Vec::new();
    for n in 0..=window {
        let (rank, torsion) = summary.at(n).map_err(math)?;
        if rank > 0 || !torsion.is_empty() || mod_p[n] > 0 {
            rows.push(HomologyRow {
                degree: n,
                rank,
                torsion: torsion.to_vec(),
                mod_p: mod_p[n],
            });
        }
    }
    Ok(HomologyReport {
        target: target.label().to_string(),
        prime: c.prime(),
        nmax: c.max_degree(),
        window,
        rows,
    })
}

pub fn homology(l: &DgLie<PLocal>, target: Target) -> Result<HomologyReport, CliError> {
    let (c, _) = complex(l, target)?;
    homology_report(&c, target)
}

fn role(c: &PageClass<PLocal>, r: u32) -> String {
    match c.kind {
        ClassKind::Free => "permanent".to_string(),
        ClassKind::Top { exponent } if exponent == r => "source".to_string(),
        ClassKind::Bottom { exponent } if exponent == r => "target".to_string(),
        ClassKind::Top { exponent } | ClassKind::Bottom { exponent } => {
            format!("survives to page {exponent}")
        }
    }
}

fn pages(bss: &BssResult<PLocal>) -> Vec<PageEntry> {
    bss.pages()
        .iter()
        .map(|page| {
            let degrees = (0..=page.window())
                .filter(|&n| page.dim(n) > 0)
                .map(|n| {
                    let classes = page
                        .classes(n)
                        .iter()
                        .map(|c| ClassEntry {
                            name: c.name.clone(),
                            role: role(c, page.r),
                        })
                        .collect();
                    let (beta, beta_images) = if n == 0 {
                        (Vec::new(), Vec::new())
                    } else {
                        let b = page.beta().block(n);
                        let rows = (0..b.rows())
                            .map(|i| (0..b.cols()).map(|j| b.get(i, j).value()).collect())
                            .collect();
                        let images = (0..b.cols())
                            .filter_map(|j| {
                                let col = b.column(j);
                                col.iter().any(|x| !x.is_zero()).then(|| {
                                    (
                                        page.classes(n)[j].name.clone(),
                                        format_vector(page.basis().names(n - 1), &col),
                                    )
                                })
                            })
                            .collect();
                        (rows, images)
                    };
                    DegreeEntry {
                        degree: n,
                        classes,
                        beta,
                        beta_images,
                    }
                })
                .collect();
            PageEntry {
                r: page.r,
                dims: page.dims(),
                degrees,
            }
        })
        .collect()
}

/// Lowest degree where `β^r` is expected to be nonzero in `UL`, with the
/// generator responsible: an even generator `y` with `v_p(∂y) = v` gives
/// `β^{v+j}(y^{p^j}) != 0` in degree `|y| p^j`.
fn expected_beta_degree(l: &DgLie<PLocal>, r: u32) -> Option<(usize, String)> {
    let p = l.prime() as usize;
    (0..l.len())
        .filter(|&i| l.degree(i).is_multiple_of(2))
        .filter_map(|i| {
            let v = l
                .differential_of(i)
                .iter()
                .filter_map(|c| c.valuation())
                .min()?;
            let j = r.checked_sub(v)?;
            let deg = l.degree(i).checked_mul(p.checked_pow(j)?)?;
            Some((deg, l.names()[i].clone()))
        })
        .min()
}

fn window_warnings(l: &DgLie<PLocal>, target: Target, bss: &BssResult<PLocal>) -> Vec<String> {
    let nmax = l.max_degree();
    let window = bss.window();
    let mut out = Vec::new();
    match target {
        Target::Lie => {
            for (name, &d) in l.names().iter().zip(l.degrees()) {
                if d > window {
                    out.push(format!(
                        "generator {name} in degree {d} lies above the reported degrees; \
                         the minimal sufficient N_max is {}",
                        d + 1
                    ));
                }
            }
        }
        Target::Ul => {
            for page in bss.pages() {
                if !page.beta().is_zero() {
                    continue;
                }
                if let Some((deg, name)) = expected_beta_degree(l, page.r) {
                    if deg + 1 > nmax {
                        out.push(format!(
                            "page {r} shows no β^{r} in degrees 0..={window}, but powers of {name} \
                             reach β^{r} in degree {deg}; the minimal sufficient N_max is {}",
                            deg + 1,
                            r = page.r
                        ));
                    }
                }
            }
        }
    }
    out
}

pub fn bss(
    l: &DgLie<PLocal>,
    target: Target,
    r_max: u32,
    check_theorem3: bool,
) -> Result<PageReport, CliError> {
    if r_max == 0 {
        return Err(input("--rmax must be at least 1"));
    }
    if l.max_degree() < 2 {
        return Err(input("N_max must be at least 2"));
    }
    let (c, ul) = complex(l, target)?;
    let result = bockstein_pages(&c, r_max).map_err(math)?;
    let theorem3 = if check_theorem3 {
        let ul = match ul {
            Some(ul) => ul,
            None => PbwAlgebra::build(l).map_err(math)?,
        };
        let report = verify_theorem3(&ul, r_max).map_err(math)?;
        Some(
            report
                .pages
                .into_iter()
                .map(|t| Theorem3Entry {
                    r: t.r,
                    primitive_dims: t.primitive_dims,
                    lie_dims: t.lie_dims,
                    closed_under_beta: t.closed_under_beta,
                    pbw_series: t.pbw_series,
                    lie_image: t.lie_image,
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(PageReport {
        target: target.label().to_string(),
        prime: l.prime(),
        nmax: l.max_degree(),
        window: result.window(),
        r_max,
        homology: homology_report(&c, target)?,
        pages: pages(&result),
        collapse: result.collapse_message(),
        warnings: window_warnings(l, target, &result),
        theorem3,
    })
}

pub fn cochain_report(l: &DgLie<PLocal>) -> Result<CochainReport, CliError> {
    let cc = cochains(l).map_err(math)?;
    let alg = cc.algebra();
    let top = alg.max_degree();
    let generators = alg
        .generator_names()
        .iter()
        .enumerate()
        .map(|(g, name)| {
            let (deg, x) = alg.generator(g);
            let differential = if deg < top {
                let dx = cc.differential().apply(deg, &x).expect("shape");
                alg.format(deg + 1, &dx)
            } else {
                "(above the window)".to_string()
            };
            CochainGenerator {
                name: name.clone(),
                degree: deg,
                differential,
            }
        })
        .collect();
    let cohomology = cc
        .cochains()
        .cohomology()
        .into_iter()
        .enumerate()
        .take(top)
        .filter(|(_, h)| !h.is_zero())
        .map(|(degree, h)| CohomologyRow {
            degree,
            rank: h.rank,
            torsion: h.torsion,
        })
        .collect();
    Ok(CochainReport {
        prime: l.prime(),
        top,
        abelian: cc.d1().is_zero(),
        zero_differential: cc.d0().is_zero(),
        generators,
        cohomology,
    })
}

/// Hopf check, then both Lie-type verdicts, over `F_p`.
pub fn morphism(
    source: &DglFile,
    target: &DglFile,
    map: &MapFile,
) -> Result<MorphismReport, CliError> {
    if source.prime != target.prime {
        return Err(input(format!(
            "source has p = {} but target has p = {}",
            source.prime, target.prime
        )));
    }
    let src = valid_dgl(source, None)?.to_fp();
    let tgt = valid_dgl(target, None)?.to_fp();
    let src_ul = PbwAlgebra::build(&src).map_err(math)?;
    let tgt_ul = PbwAlgebra::build(&tgt).map_err(math)?;
    let images = map.images(&src_ul, &tgt_ul).map_err(input)?;
    let phi = match HopfMorphism::new(&src_ul, &tgt_ul, &images) {
        Ok(phi) => phi,
        Err(e) => {
            return Ok(MorphismReport {
                prime: source.prime,
                hopf: Err(e.to_string()),
                direct: None,
                dual: None,
            })
        }
    };
    let verdict = phi.is_lie_type().map_err(math)?;
    Ok(MorphismReport {
        prime: source.prime,
        hopf: Ok(()),
        direct: Some(verdict.direct),
        dual: Some(verdict.dual.map_err(|w| w.to_string())),
    })
}

pub fn load_map(path: &Path, p: u64) -> Result<MapFile, CliError> {
    MapFile::parse(&read(path)?, p).map_err(|e| located(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleName {
    Example1,
    Example2,
    Prop61,
}

impl ExampleName {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleName::Example1 => "example1",
            ExampleName::Example2 => "example2",
            ExampleName::Prop61 => "prop61",
        }
    }
}

/// Files of a built-in example, its golden report and whether every check
/// in it came out as expected.
#[derive(Clone, Debug)]
pub struct ExampleOutput {
    pub files: Vec<(String, String)>,
    pub expected: String,
    pub json: serde_json::Value,
    pub ok: bool,
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn example(
    name: ExampleName,
    p: u64,
    n: usize,
    r_max: u32,
    nmax: usize,
) -> Result<ExampleOutput, CliError> {
    if !is_odd_prime(p) {
        return Err(input(format!("{p} is not an odd prime")));
    }
    if n == 0 || r_max == 0 {
        return Err(input("--n and --rmax must be at least 1"));
    }
    let file = name.as_str();
    match name {
        ExampleName::Example1 | ExampleName::Example2 => {
            let l = if name == ExampleName::Example1 {
                example1(p, n, nmax)
            } else {
                example2(p, n, nmax)
            }
            .map_err(input)?;
            let dgl = DglFile::from_dgl(&l);
            let lie = bss(&l, Target::Lie, r_max, false)?;
            let ul = bss(&l, Target::Ul, r_max, true)?;
            let mut ok = ul.theorem3_passed();
            let mut expected = format!("{}\n{}", lie.text(), ul.text());
            let mut files = vec![(format!("{file}.dgl"), dgl.emit())];
            let mut json = serde_json::json!({ "lie": to_json(&lie), "ul": to_json(&ul) });
            if name == ExampleName::Example2 {
                let (target, map) = example2_files(p, n).map_err(input)?;
                let report = morphism(&target, &target, &map)?;
                ok &= report.hopf.is_ok() && report.agree() && report.lie_type() == Some(false);
                expected.push_str("\nb ↦ b + c^p on U L_ab(a, b, c)\n");
                expected.push_str(&report.text());
                files.push((format!("{file}_target.dgl"), target.emit()));
                files.push((format!("{file}.map"), map.emit()));
                json["morphism"] = to_json(&report);
            }
            Ok(ExampleOutput {
                files,
                expected,
                json,
                ok,
            })
        }
        ExampleName::Prop61 => {
            if nmax < 3 {
                return Err(input("prop61 needs N_max >= 3"));
            }
            let window = nmax - 1;
            let r = prop61(p, n, window).map_err(math)?;
            let entry = Prop61Entry {
                prime: p,
                n,
                window,
                cochains_match: r.cochains_match,
                quasi_iso: r.quasi_iso,
                wrong_power_quasi_iso: r.wrong_power_quasi_iso,
                generator_degrees: r.generator_degrees(),
                ul_homology: r.ul_homology.clone(),
                expected_homology: r.expected_homology.clone(),
                cochain_cohomology: r
                    .cochain_cohomology
                    .iter()
                    .enumerate()
                    .map(|(degree, h)| CohomologyRow {
                        degree,
                        rank: h.rank,
                        torsion: h.torsion.clone(),
                    })
                    .collect(),
                passed: r.passed(),
            };
            let lie = prop61_lie(p, n, nmax).map_err(input)?;
            let dgl = DglFile::from_dgl(&lie.map_scalars(|c| c.lift()));
            Ok(ExampleOutput {
                files: vec![(format!("{file}.dgl"), dgl.emit())],
                expected: entry.text(),
                json: to_json(&entry),
                ok: entry.passed,
            })
        }
    }
}

/// `L_ab(a, b, c)` with `|a| = 2np-1`, `|b| = 2np`, `|c| = 2n`, and the map
/// `a ↦ a`, `b ↦ b + c^p`, `c ↦ c`.
fn example2_files(p: u64, n: usize) -> Result<(DglFile, MapFile), String> {
    let pp = p as usize;
    let top = 2 * n * pp + 2;
    let l = DgLie::<PLocal>::new(
        p,
        top,
        &[("a", 2 * n * pp - 1), ("b", 2 * n * pp), ("c", 2 * n)],
    )
    .map_err(|e| e.to_string())?;
    let map = MapFile::parse(
        &format!("map a = 1 a\nmap b = 1 b, 1 c^{p}\nmap c = 1 c\n"),
        p,
    )
    .map_err(|e| e.to_string())?;
    Ok((DglFile::from_dgl(&l), map))
}
