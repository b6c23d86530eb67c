use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holonomy2_core::cochain::{connecting_map, CEComplex};
use holonomy2_core::crossed::{check_elementary_equivalence, skeletal_model, splice_crossed_module, splice_gamma_in_v};
use holonomy2_core::forms::{is_maurer_cartan, PolyForm};
use holonomy2_core::hochschild::{check_cycle, hochschild_d, mc_curvature, Chain, Element, FinDGA, GradedAlgebra};
use holonomy2_core::linf::{L3Normalization, TwoTermLinf};
use holonomy2_core::loopspace::{surface_holonomy, PairFields};
use holonomy2_core::numeric::Stencil;
use holonomy2_core::rational::format_q;
use holonomy2_core::simplicial::{
    circle_model, circle_to_hochschild, hhy_degree, higher_d, torus_model, validate_simplicial, FinSimpSet, HHYChain,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{CliError, Result};
use crate::formats::{
    from_json, q_in, read, surface_from_bytes, CrossedModuleFile, DgaFile, EquivalenceFile, LieAlgebraFile,
    McPairFile, ModuleFile, SequenceFile, SimpSetFile,
};
use crate::report::{Check, RunReport};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "holonomy2", version, about = "Crossed modules, L-infinity valued forms, surface holonomy and Hochschild chains")]
pub struct Cli {
    /// Record per-check wall times. Reports are then no longer byte-reproducible.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crossed modules of Lie algebras.
    #[command(subcommand)]
    Crossed(CrossedCmd),
    /// L-infinity valued differential forms.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Surface holonomy of a pair over a sampled torus.
    Holonomy(HolonomyArgs),
    /// Hochschild chains of a finite DGA.
    #[command(subcommand)]
    Hochschild(HochschildCmd),
    /// Higher Hochschild chains over finite simplicial sets.
    #[command(subcommand)]
    Hh(HhCmd),
    /// Run the invariant suites of every module on the shipped fixtures.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CrossedCmd {
    /// Check the crossed-module axioms.
    Validate { file: PathBuf },
    /// Skeletal model: coker mu, ker mu and the 3-cocycle.
    Skeletal { file: PathBuf },
    /// Splice representative of a sequence and 2-cocycle.
    Splice { file: PathBuf },
    /// Check that given maps form an elementary equivalence.
    Compare {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        maps: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Norm {
    Literal,
    Factorial,
}

impl From<Norm> for L3Normalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Literal => L3Normalization::Literal,
            Norm::Factorial => L3Normalization::Factorial,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum FormsCmd {
    /// Exact Maurer-Cartan check of a pair.
    CheckMc {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "literal")]
        l3: Norm,
    },
}

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[arg(long)]
    pub pair: PathBuf,
    /// JSON or flat binary `[p, m, n]` grid.
    #[arg(long)]
    pub surface: PathBuf,
    /// Expected grid, `PxM`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Comma-separated winding offset in τ.
    #[arg(long)]
    pub tau_winding: Option<String>,
    /// Comma-separated winding offset in σ.
    #[arg(long)]
    pub sigma_winding: Option<String>,
    /// Order of the central difference stencil.
    #[arg(long, default_value_t = 8)]
    pub stencil: usize,
    /// Comma-separated expected holonomy.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long, default_value_t = 1e-4)]
    pub rtol: f64,
}

#[derive(Debug, Subcommand)]
pub enum HochschildCmd {
    /// Check that the holonomy chain is a cycle exactly when the element is MC.
    CheckCycle {
        #[arg(long)]
        dga: PathBuf,
        /// Term `[coefficient ]name`; repeat for sums.
        #[arg(long, required = true, allow_hyphen_values = true)]
        element: Vec<String>,
        /// Largest tensor length checked.
        #[arg(long, default_value_t = 6)]
        trunc: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HhCmd {
    /// D^2 = 0 on random chains over a simplicial model.
    D2Check {
        /// `circle`, `torus` or a simpset.json file.
        #[arg(long, default_value = "torus")]
        model: String,
        #[arg(long, default_value_t = 5)]
        cutoff: usize,
        #[arg(long)]
        dga: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the circle model with the Hochschild differential on all basis words.
    CompareCircle {
        #[arg(long)]
        dga: PathBuf,
        #[arg(long, default_value_t = 3)]
        level: usize,
    },
}

/// Exit code and the text for standard output and standard error.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut report = RunReport::new(argv.iter().skip(1).cloned().collect(), cli.timings);
    match dispatch(cli.command, &mut report) {
        Ok(()) => Outcome { code: report.exit_code(), stdout: report.to_json(), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("holonomy2: {e}\n") },
    }
}

fn load(report: &mut RunReport, path: &Path) -> Result<Vec<u8>> {
    let bytes = read(path)?;
    report.input(&path.display().to_string(), &bytes);
    Ok(bytes)
}

fn dispatch(cmd: Command, report: &mut RunReport) -> Result<()> {
    match cmd {
        Command::Crossed(c) => crossed(c, report),
        Command::Forms(FormsCmd::CheckMc { file, l3 }) => check_mc(&file, l3.into(), report),
        Command::Holonomy(a) => holonomy(a, report),
        Command::Hochschild(HochschildCmd::CheckCycle { dga, element, trunc }) => {
            cycle(&dga, &element, trunc, report)
        }
        Command::Hh(HhCmd::D2Check { model, cutoff, dga, samples, seed }) => {
            report.seed = Some(seed);
            d2_check(&model, cutoff, &dga, samples, seed, report)
        }
        Command::Hh(HhCmd::CompareCircle { dga, level }) => compare_circle(&dga, level, report),
        Command::Selftest { seed } => {
            report.seed = Some(seed);
            selftest::run(seed, report);
            Ok(())
        }
    }
}

fn crossed(cmd: CrossedCmd, report: &mut RunReport) -> Result<()> {
    let module = |report: &mut RunReport, p: &Path| -> Result<_> {
        from_json::<CrossedModuleFile>(&load(report, p)?, "crossed module")?.to_crossed()
    };
    match cmd {
        CrossedCmd::Validate { file } => {
            let x = module(report, &file)?;
            let t = Instant::now();
            report.push(axioms_check(&x), t);
        }
        CrossedCmd::Skeletal { file } => {
            let x = module(report, &file)?;
            let t = Instant::now();
            let axioms = axioms_check(&x);
            let ok = axioms.passed();
            report.push(axioms, t);
            if !ok {
                return Ok(());
            }
            let t = Instant::now();
            let sk = match skeletal_model(&x, None) {
                Ok(sk) => sk,
                Err(e) => {
                    report.push(Check::new("skeletal model", false).detail(e.to_string()), t);
                    return Ok(());
                }
            };
            let tr = &sk.triplet;
            let cocycle = tr.validate();
            report.push(
                Check::new("gamma is a cocycle", cocycle.is_ok()).details(cocycle.err().map(|e| e.to_string())),
                t,
            );
            let t = Instant::now();
            let linf = TwoTermLinf::from_triplet(tr).map(|l| l.validate());
            let pass = matches!(&linf, Ok(v) if v.is_empty());
            let details: Vec<String> = match linf {
                Ok(v) => v.iter().map(|v| v.to_string()).collect(),
                Err(e) => vec![e.to_string()],
            };
            report.push(Check::new("skeletal L-infinity identities", pass).details(details), t);
            let zero = CEComplex::new(&tr.gbar, &tr.v).map(|cx| cx.is_coboundary(&tr.gamma)).ok();
            report.output = Some(json!({
                "gbar": LieAlgebraFile::from_lie(&tr.gbar),
                "v": ModuleFile::from_module(&tr.v),
                "gamma": tr.gamma.coeffs().iter().map(format_q).collect::<Vec<_>>(),
                "phi2": sk.phi2.coeffs().iter().map(format_q).collect::<Vec<_>>(),
                "class_is_zero": zero,
            }));
        }
        CrossedCmd::Splice { file } => {
            let (ses, alpha) = from_json::<SequenceFile>(&load(report, &file)?, "sequence")?.to_sequence()?;
            let t = Instant::now();
            let exact = ses.validate();
            let ok = exact.is_ok();
            report.push(Check::new("sequence is exact", ok).details(exact.err().map(|e| e.to_string())), t);
            if !ok {
                return Ok(());
            }
            let t = Instant::now();
            let x = match splice_crossed_module(&ses, &alpha) {
                Ok(x) => x,
                Err(e) => {
                    report.push(Check::new("splice", false).detail(e.to_string()), t);
                    return Ok(());
                }
            };
            report.push(axioms_check(&x), t);
            let t = Instant::now();
            let classes = splice_gamma_in_v(&ses, &x).and_then(|g| {
                let cm = connecting_map(&ses, &alpha, None)?;
                let cx = CEComplex::new(&ses.algebra, &ses.sub)?;
                Ok((cx.same_class(&g, &cm), cx.is_coboundary(&cm)))
            });
            let (same, zero) = match &classes {
                Ok((s, z)) => (*s, Some(*z)),
                Err(_) => (false, None),
            };
            report.push(
                Check::new("splice class equals connecting class", same)
                    .details(classes.err().map(|e| e.to_string())),
                t,
            );
            report.output = Some(json!({
                "crossed_module": CrossedModuleFile::from_crossed(&x),
                "class_is_zero": zero,
            }));
        }
        CrossedCmd::Compare { source, target, maps } => {
            let x = module(report, &source)?;
            let y = module(report, &target)?;
            let e = from_json::<EquivalenceFile>(&load(report, &maps)?, "maps")?.to_equivalence(&x, &y)?;
            for (name, m) in [("source axioms", &x), ("target axioms", &y)] {
                let t = Instant::now();
                let mut c = axioms_check(m);
                c.name = name.into();
                report.push(c, t);
            }
            let t = Instant::now();
            let f = check_elementary_equivalence(&x, &y, &e);
            report.push(
                Check::new("elementary equivalence", f.is_empty()).details(f.iter().map(|f| f.to_string())),
                t,
            );
        }
    }
    Ok(())
}

pub(crate) fn axioms_check(x: &holonomy2_core::crossed::CrossedModule) -> Check {
    let v = x.validate();
    let data: Vec<_> = v.iter().map(|e| json!({"axiom": e.axiom(), "message": e.to_string()})).collect();
    Check::new("crossed-module axioms", v.is_empty())
        .details(v.iter().map(|e| e.to_string()))
        .data(json!({ "violations": data }))
}

fn form_terms(f: &PolyForm) -> Vec<String> {
    f.terms()
        .map(|(k, c)| format!("{} x^{:?} dx{:?} e{}", format_q(c), k.exps, k.dx, k.value))
        .collect()
}

fn check_mc(file: &Path, norm: L3Normalization, report: &mut RunReport) -> Result<()> {
    let (pair, linf) = from_json::<McPairFile>(&load(report, file)?, "mc pair")?.to_pair()?;
    let t = Instant::now();
    let v = linf.validate();
    report.push(Check::new("target identities", v.is_empty()).details(v.iter().map(|v| v.to_string())), t);
    let t = Instant::now();
    match is_maurer_cartan(&pair, &linf, norm) {
        Ok(r) => {
            report.push(
                Check::new("fake curvature vanishes", r.fake_curvature.is_zero())
                    .details(form_terms(&r.fake_curvature)),
                t,
            );
            report.push(
                Check::new("3-curvature vanishes", r.three_curvature.is_zero())
                    .details(form_terms(&r.three_curvature)),
                t,
            );
        }
        Err(e) => report.push(Check::new("maurer-cartan", false).detail(e.to_string()), t),
    }
    Ok(())
}

fn floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{what}: not a number: {x:?}"))))
        .collect()
}

fn holonomy(a: HolonomyArgs, report: &mut RunReport) -> Result<()> {
    let (pair, linf) = from_json::<McPairFile>(&load(report, &a.pair)?, "mc pair")?.to_pair()?;
    let stencil = Stencil::from_order(a.stencil)
        .ok_or_else(|| CliError::Usage(format!("stencil order must be 2, 4, 6 or 8, got {}", a.stencil)))?;
    let tau = a.tau_winding.as_deref().map(|s| floats(s, "tau winding")).transpose()?;
    let sigma = a.sigma_winding.as_deref().map(|s| floats(s, "sigma winding")).transpose()?;
    let expect = a.expect.as_deref().map(|s| floats(s, "expect")).transpose()?;
    let surface = surface_from_bytes(&load(report, &a.surface)?, tau, sigma)?.with_stencil(stencil);
    let (p, m, _) = surface.shape();
    if let Some(g) = &a.grid {
        let want = g
            .split_once('x')
            .and_then(|(p, m)| Some((p.parse::<usize>().ok()?, m.parse::<usize>().ok()?)))
            .ok_or_else(|| CliError::Usage(format!("grid must look like 128x128, got {g:?}")))?;
        if want != (p, m) {
            return Err(CliError::Schema(format!("surface is {p}x{m}, expected {}x{}", want.0, want.1)));
        }
    }
    let t = Instant::now();
    let value = PairFields::new(&pair, &linf).and_then(|f| surface_holonomy(&f.problem(), &f.curving(), &surface));
    let h = match value {
        Ok(h) => h,
        Err(e) => {
            report.push(Check::new("surface holonomy", false).detail(e.to_string()), t);
            return Ok(());
        }
    };
    let finite = h.iter().all(|x| x.is_finite());
    report.push(Check::new("surface holonomy", finite).data(json!({ "value": h, "grid": [p, m] })), t);
    if let Some(want) = expect {
        let t = Instant::now();
        if want.len() != h.len() {
            return Err(CliError::Usage(format!("expected {} components, got {}", h.len(), want.len())));
        }
        let scale = want.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let err = h.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
        report.push(Check::new("matches expected value", err <= a.rtol).residual(err), t);
    }
    report.output = Some(json!({ "holonomy": h }));
    Ok(())
}

fn load_dga(report: &mut RunReport, path: &Path) -> Result<FinDGA> {
    from_json::<DgaFile>(&load(report, path)?, "dga")?.to_dga()
}

fn dga_axioms(dga: &FinDGA) -> Check {
    let v = dga.validate();
    Check::new("dga axioms", v.is_empty()).details(v.iter().map(|v| format!("{v:?}")))
}

/// Parses terms of the form `name` or `coefficient name`.
fn parse_element(dga: &FinDGA, terms: &[String]) -> Result<Element<usize>> {
    terms
        .iter()
        .map(|t| {
            let t = t.trim();
            let (c, name) = match t.rsplit_once(char::is_whitespace) {
                Some((c, n)) => (q_in(c.trim(), "element coefficient").map_err(|_| CliError::Usage(format!("bad term {t:?}")))?, n),
                None => (holonomy2_core::rational::one(), t),
            };
            let i = dga.index_of(name).ok_or_else(|| CliError::Usage(format!("unknown basis element {name:?}")))?;
            Ok((i, c))
        })
        .collect()
}

fn cycle(path: &Path, element: &[String], trunc: usize, report: &mut RunReport) -> Result<()> {
    let dga = load_dga(report, path)?;
    let elt = parse_element(&dga, element)?;
    let t = Instant::now();
    let axioms = dga_axioms(&dga);
    let ok = axioms.passed();
    report.push(axioms, t);
    if !ok {
        return Ok(());
    }
    let t = Instant::now();
    match check_cycle(&dga, &elt, trunc) {
        Ok(r) => {
            let curv: Vec<String> = mc_curvature(&dga, &elt)
                .iter()
                .map(|(i, c)| format!("{} {}", format_q(c), dga.names()[*i]))
                .collect();
            report.push(
                Check::new("cycle iff maurer-cartan", r.consistent()).data(json!({
                    "is_mc": r.is_mc,
                    "vanishing_by_length": r.vanishing,
                    "curvature": curv,
                })),
                t,
            );
        }
        Err(e) => report.push(Check::new("cycle iff maurer-cartan", false).detail(e.to_string()), t),
    }
    Ok(())
}

fn model(report: &mut RunReport, name: &str, cutoff: usize) -> Result<FinSimpSet> {
    match name {
        "circle" => circle_model(cutoff).map_err(|e| CliError::Usage(e.to_string())),
        "torus" => torus_model(cutoff).map_err(|e| CliError::Usage(e.to_string())),
        path => from_json::<SimpSetFile>(&load(report, Path::new(path))?, "simplicial set")?.to_simpset(),
    }
}

fn random_hhy(r: &mut ChaCha8Rng, y: &FinSimpSet, a: &FinDGA) -> HHYChain<usize> {
    let mut c = HHYChain::zero();
    for _ in 0..2 {
        let k = r.gen_range(0..=y.cutoff());
        let w = (0..y.size(k))
            .map(|_| if r.gen_bool(0.5) { a.unit_index() } else { r.gen_range(0..a.dim()) })
            .collect();
        c.add_term(k, w, holonomy2_core::rational::q(r.gen_range(1..=4)));
    }
    c
}

fn d2_check(name: &str, cutoff: usize, path: &Path, samples: usize, seed: u64, report: &mut RunReport) -> Result<()> {
    let y = model(report, name, cutoff)?;
    let dga = load_dga(report, path)?;
    let t = Instant::now();
    let v = validate_simplicial(&y);
    let ok = v.is_empty();
    report.push(Check::new("simplicial identities", ok).details(v.iter().map(|v| format!("{v:?}"))), t);
    let t = Instant::now();
    let axioms = dga_axioms(&dga);
    let ok = ok && axioms.passed();
    report.push(axioms, t);
    if !ok {
        return Ok(());
    }
    let t = Instant::now();
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let (mut bad, mut degree_bad) = (0usize, 0usize);
    for _ in 0..samples {
        let c = random_hhy(&mut r, &y, &dga);
        let d1 = match higher_d(&c, &y, &dga) {
            Ok(d) => d,
            Err(e) => {
                report.push(Check::new("D^2 = 0", false).detail(e.to_string()), t);
                return Ok(());
            }
        };
        for (k, ch) in c.levels() {
            for (w, _) in ch.terms() {
                let single = HHYChain::at_level(*k, Chain::word(w.clone()));
                let want = hhy_degree(&dga, *k, w) + 1;
                let image = higher_d(&single, &y, &dga).expect("checked above");
                if image.levels().any(|(l, ch)| ch.terms().any(|(u, _)| hhy_degree(&dga, *l, u) != want)) {
                    degree_bad += 1;
                }
            }
        }
        if !higher_d(&d1, &y, &dga).expect("checked above").is_zero() {
            bad += 1;
        }
    }
    report.push(
        Check::new("D^2 = 0", bad == 0)
            .residual(bad as f64)
            .data(json!({ "samples": samples, "cutoff": y.cutoff(), "failures": bad })),
        t,
    );
    report.push(Check::new("D raises total degree by one", degree_bad == 0).residual(degree_bad as f64), t);
    Ok(())
}

fn compare_circle(path: &Path, level: usize, report: &mut RunReport) -> Result<()> {
    let dga = load_dga(report, path)?;
    let t = Instant::now();
    let axioms = dga_axioms(&dga);
    let ok = axioms.passed();
    report.push(axioms, t);
    if !ok {
        return Ok(());
    }
    let t = Instant::now();
    if !dga.is_commutative() {
        report.push(Check::new("circle model matches Hochschild", false).detail("the simplicial differential needs a commutative DGA"), t);
        return Ok(());
    }
    let y = circle_model(level + 1).map_err(|e| CliError::Usage(e.to_string()))?;
    let n = dga.dim();
    let (mut words, mut bad) = (0usize, 0usize);
    for k in 0..=level {
        let mut w = vec![0usize; k + 1];
        loop {
            let ch = HHYChain::at_level(k, Chain::word(w.clone()));
            let lhs = circle_to_hochschild(&dga, &higher_d(&ch, &y, &dga).expect("commutative"));
            let rhs = hochschild_d(&dga, &circle_to_hochschild(&dga, &ch));
            if lhs != rhs {
                bad += 1;
            }
            words += 1;
            // Odometer over all words of this length.
            let Some(i) = w.iter().position(|&x| x + 1 < n) else { break };
            w[i] += 1;
            w[..i].iter_mut().for_each(|x| *x = 0);
        }
    }
    report.push(
        Check::new("circle model matches Hochschild", bad == 0)
            .residual(bad as f64)
            .data(json!({ "words": words, "max_level": level })),
        t,
    );
    Ok(())
}
