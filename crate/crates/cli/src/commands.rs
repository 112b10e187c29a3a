use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_rational::Rational64;
use racgdiv::analysis::{
    compare_exponent, emit_csv, loglog_fit, read_csv_file, sample_rows, Report, ReportSection,
    SampleRow,
};
use racgdiv::dot::{ball_dot, cayley_dot, graph_dot};
use racgdiv::explorer::sweep::{sweep, CapRadius, CapsPolicy, Measure};
use racgdiv::explorer::{
    avoidant_path_traced, ball, gersten_divergence, DivergenceSample, RegionMode,
};
use racgdiv::presentation::{parse_graph, serialize_graph};
use racgdiv::{
    build_gamma, build_omega, DefiningGraph, GeodesicSpec, NormalForm, RationalExponent,
};

use crate::args::*;
use crate::settings::{parse_span, usage, Settings};

fn with_config(mut flags: Settings, config: &Option<PathBuf>) -> Result<Settings> {
    if let Some(path) = config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        flags = flags.under(&Settings::parse_file(&text)?);
    }
    Ok(flags)
}

fn graph_from(s: &Settings) -> Result<DefiningGraph> {
    let sel = match (s.str("graph"), s.get::<u32>("m")?) {
        (Some(g), _) => g.to_string(),
        (None, Some(m)) => format!("gamma:{m}"),
        (None, None) => return usage("missing --graph"),
    };
    let Some((kind, arg)) = sel.split_once(':') else {
        return usage(format!(
            "invalid --graph {sel:?}, expected gamma:<m>, omega:<m> or file:<path>"
        ));
    };
    let param = || match arg.parse::<u32>() {
        Ok(m) => Ok(m),
        Err(_) => usage(format!("invalid family parameter {arg:?}")),
    };
    Ok(match kind {
        "gamma" => build_gamma(param()?)?,
        "omega" => build_omega(param()?)?,
        "file" => {
            let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
            parse_graph(&text).with_context(|| format!("parsing {arg}"))?
        }
        _ => return usage(format!("unknown graph family {kind:?}")),
    })
}

fn word_arg(s: &Settings) -> Result<&str> {
    match s.str("word") {
        Some(w) => Ok(w),
        None => usage("missing --word"),
    }
}

fn pair_from(g: &DefiningGraph, text: &str) -> Result<(racgdiv::Gen, racgdiv::Gen)> {
    let names: Vec<&str> = text.split_whitespace().collect();
    match names[..] {
        [u, v] => Ok((g.gen(u)?, g.gen(v)?)),
        _ => usage(format!("pair {text:?} must name two generators")),
    }
}

fn support(g: &DefiningGraph, ty: &str, pair: Option<&str>) -> Result<GeodesicSpec> {
    let ty = g.gen(ty)?;
    let e = NormalForm::identity(g);
    Ok(match pair {
        Some(p) => GeodesicSpec::support_ray_with_pair(g, ty, pair_from(g, p)?, &e)?,
        None => GeodesicSpec::support_ray(g, ty, &e)?,
    })
}

fn geodesic_from(s: &Settings, g: &DefiningGraph) -> Result<GeodesicSpec> {
    let kind = match (s.str("geodesic"), s.has("word")) {
        (Some(k), _) => k,
        (None, true) => "periodic",
        (None, false) => return usage("missing --geodesic"),
    };
    Ok(match kind {
        "periodic" => GeodesicSpec::periodic(g, &g.parse_word(word_arg(s)?)?)?,
        "gamma" => {
            let m = match s.get::<u32>("m")?.or(g.family().m()) {
                Some(m) => m,
                None => return usage("gamma geodesic needs --m"),
            };
            let t = s
                .get::<RationalExponent>("t")?
                .unwrap_or(RationalExponent::new(2, 1)?);
            GeodesicSpec::gamma_tm(g, m, t)?
        }
        "support" => match s.str("type") {
            Some(ty) => support(g, ty, s.str("pair"))?,
            None => return usage("support ray needs --type"),
        },
        other => return usage(format!("unknown geodesic kind {other:?}")),
    })
}

fn ray_from(g: &DefiningGraph, text: &str) -> Result<GeodesicSpec> {
    if let Some(w) = text.strip_prefix("periodic:") {
        return Ok(GeodesicSpec::periodic(g, &g.parse_word(w)?)?);
    }
    if let Some(rest) = text.strip_prefix("support:") {
        let (ty, pair) = match rest.split_once(':') {
            Some((ty, p)) => (ty, Some(p)),
            None => (rest, None),
        };
        return support(g, ty.trim(), pair);
    }
    usage(format!(
        "invalid ray {text:?}, expected periodic:<word> or support:<type>[:<u> <v>]"
    ))
}

fn radii(s: &Settings) -> Result<Vec<u32>> {
    if let Some(r) = s.get::<u32>("r")? {
        return Ok(vec![r]);
    }
    let lo = s.get::<u32>("r-min")?.unwrap_or(1);
    let Some(hi) = s.get::<u32>("r-max")? else {
        return usage("give --r or --r-max");
    };
    if lo > hi {
        return usage(format!("empty radius range {lo}..{hi}"));
    }
    Ok((lo..=hi).collect())
}

fn policy(s: &Settings, radii: &[u32]) -> Result<CapsPolicy> {
    let mut p = CapsPolicy::default();
    if let Some(c) = s.get::<u32>("cap-radius")? {
        p.radius = CapRadius::Fixed(c);
    } else if let Some(k) = s.get::<u32>("cap-factor")? {
        p.radius = CapRadius::Scaled(k);
    }
    if let Some(n) = s.get("cap-nodes")? {
        p.cap_nodes = n;
    }
    if let Some(d) = s.get("stab-delta")? {
        p.stabilization_delta = d;
    }
    p.region = match s.str("region") {
        None | Some("reduced") => RegionMode::Reduced,
        Some("capped") => RegionMode::Capped,
        Some(other) => {
            return usage(format!(
                "unknown region {other:?}, expected reduced or capped"
            ))
        }
    };
    for &r in radii {
        if let Err(e) = p.for_radius(r).validate(r) {
            return usage(e.to_string());
        }
    }
    Ok(p)
}

fn fit_section(
    s: &Settings,
    title: String,
    samples: Vec<DivergenceSample>,
) -> Result<ReportSection> {
    let (lo, hi) = match s.str("fit-range") {
        Some(text) => parse_span::<u32>("fit-range", text)?,
        None => (
            samples.iter().map(|x| x.r).min().unwrap_or(0),
            samples.iter().map(|x| x.r).max().unwrap_or(0),
        ),
    };
    let fit = loglog_fit(&samples, lo..=hi).map_err(|e| e.to_string());
    let expected = s.get::<Rational64>("expected-exponent")?;
    let tol = s.get::<f64>("tol")?.unwrap_or(0.5);
    let verdict = match (&fit, expected) {
        (Ok(f), Some(e)) => Some(compare_exponent(f, e, tol)),
        _ => None,
    };
    Ok(ReportSection {
        title,
        samples,
        fit: Some(fit),
        verdict,
    })
}

fn out_dir(s: &Settings) -> Result<Option<PathBuf>> {
    match s.str("out") {
        None => Ok(None),
        Some(d) => {
            let dir = PathBuf::from(d);
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            Ok(Some(dir))
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn csv_bytes(rows: &[SampleRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf)?;
    Ok(buf)
}

fn report_for(s: &Settings, sections: Vec<ReportSection>) -> Report {
    let config = s
        .entries()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Report {
        config,
        sections,
        notes: Vec::new(),
    }
}

/// Centre and endpoints whose avoidant path realises `sample`.
type PathQuery = (NormalForm, NormalForm, NormalForm);

fn path_query(
    g: &DefiningGraph,
    measure: &Measure,
    sample: &DivergenceSample,
) -> Result<Option<PathQuery>> {
    let r = sample.r;
    Ok(match measure {
        Measure::Geodesic(gamma) => Some((
            gamma.vertex(g, 0),
            gamma.vertex(g, -i64::from(r)),
            gamma.vertex(g, i64::from(r)),
        )),
        Measure::Pair(a, b) => Some((
            a.basepoint().clone(),
            a.vertex(g, i64::from(r)),
            b.vertex(g, i64::from(r)),
        )),
        Measure::Lower { gamma, .. } => sample.min_t.map(|t| {
            (
                gamma.vertex(g, t),
                gamma.vertex(g, t - i64::from(r)),
                gamma.vertex(g, t + i64::from(r)),
            )
        }),
        Measure::Gersten => gersten_divergence(g, r, &sample.caps)?
            .witness
            .map(|(x, y)| (NormalForm::identity(g), x, y)),
    })
}

fn emit_paths(
    g: &DefiningGraph,
    measure: &Measure,
    samples: &[DivergenceSample],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for sample in samples.iter().filter(|x| x.value().is_some()) {
        let Some((x0, p, q)) = path_query(g, measure, sample)? else {
            continue;
        };
        let (_, path) = avoidant_path_traced(g, &x0, sample.r, &p, &q, &sample.caps)?;
        if let Some(path) = path {
            let file = dir.join(format!("path_r{}.dot", sample.r));
            write_file(&file, cayley_dot(g, &[x0], &path).as_bytes())?;
            written.push(file);
        }
    }
    Ok(written)
}

/// Runs `measure` over the configured radii and writes or prints the output.
fn run_measure(
    s: &Settings,
    g: &DefiningGraph,
    measure: Measure,
    label: String,
    t: Option<RationalExponent>,
) -> Result<()> {
    let radii = radii(s)?;
    let policy = policy(s, &radii)?;
    let workers = s.get::<usize>("workers")?.unwrap_or(0);
    let samples = sweep(g, &measure, &radii, &policy, workers)?;
    let rows = sample_rows(g, &label, t, &samples);
    let csv = csv_bytes(&rows)?;
    let emit_dot = s.flag("emit-dot")?;
    match out_dir(s)? {
        None => {
            if emit_dot {
                return usage("--emit-dot needs --out");
            }
            std::io::stdout().write_all(&csv)?;
        }
        Some(dir) => {
            write_file(&dir.join("samples.csv"), &csv)?;
            let report = report_for(s, vec![fit_section(s, label, samples.clone())?]);
            write_file(&dir.join("report.txt"), report.to_string().as_bytes())?;
            print!("{report}");
            if emit_dot {
                emit_paths(g, &measure, &samples, &dir)?;
            }
        }
    }
    Ok(())
}

pub fn graph(cmd: GraphCmd) -> Result<()> {
    match cmd {
        GraphCmd::Gen(a) => {
            let mut s = Settings::default();
            a.push(&mut s);
            let g = graph_from(&with_config(s, &a.config)?)?;
            print!("{}", serialize_graph(&g));
        }
        GraphCmd::Validate { path } => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let g = parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
            println!(
                "ok: {} generators, {} edges, triangle-free: {}",
                g.len(),
                g.edge_count(),
                if g.is_triangle_free() { "yes" } else { "no" }
            );
        }
        GraphCmd::Dot(a) => {
            let mut s = Settings::default();
            a.push(&mut s);
            let g = graph_from(&with_config(s, &a.config)?)?;
            print!("{}", graph_dot(&g));
        }
    }
    Ok(())
}

pub fn word(cmd: WordCmd) -> Result<()> {
    let a = match &cmd {
        WordCmd::Reduce(a) | WordCmd::Geodesic(a) | WordCmd::Walls(a) => a,
    };
    let mut s = Settings::default();
    a.graph.push(&mut s);
    s.set_opt("word", &a.word);
    let s = with_config(s, &a.graph.config)?;
    let g = graph_from(&s)?;
    let w = g.parse_word(word_arg(&s)?)?;
    match cmd {
        WordCmd::Reduce(_) => {
            let x = g.reduce(&w)?;
            println!(
                "{}",
                if x.is_identity() {
                    "e".to_string()
                } else {
                    g.render_nf(&x)
                }
            );
        }
        WordCmd::Geodesic(_) => println!("{}", g.is_geodesic_word(&w)?),
        WordCmd::Walls(_) => {
            for wall in g.crossing_walls(&NormalForm::identity(&g), &w)? {
                println!("{}\t{}", g.name(wall.ty), g.render_nf(&wall.reflection));
            }
        }
    }
    Ok(())
}

pub fn ball_cmd(a: BallArgs) -> Result<()> {
    let mut s = Settings::default();
    a.graph.push(&mut s);
    s.set_opt("r", &a.r);
    s.set_opt("center", &a.center);
    s.set_opt("cap-nodes", &a.cap_nodes);
    a.output.push(&mut s);
    let s = with_config(s, &a.graph.config)?;
    let g = graph_from(&s)?;
    let r = s.require::<u32>("r")?;
    let center = match s.str("center") {
        Some(w) => g.reduce_str(w)?,
        None => NormalForm::identity(&g),
    };
    let cap = s
        .get::<u64>("cap-nodes")?
        .unwrap_or(racgdiv::explorer::DEFAULT_CAP_NODES);
    let b = ball(&g, &center, r, cap)?;
    if s.flag("emit-dot")? {
        let dot = ball_dot(&g, &b);
        match out_dir(&s)? {
            Some(dir) => write_file(&dir.join(format!("ball_r{r}.dot")), dot.as_bytes())?,
            None => print!("{dot}"),
        }
        return Ok(());
    }
    println!("radius\tsphere\tball");
    let mut total = 0;
    for (k, n) in b.sphere_sizes().iter().enumerate() {
        total += n;
        println!("{k}\t{n}\t{total}");
    }
    Ok(())
}

pub fn div(cmd: DivCmd) -> Result<()> {
    match cmd {
        DivCmd::Pair(a) => {
            let mut s = Settings::default();
            a.graph.push(&mut s);
            s.set_opt("ray1", &a.ray1);
            s.set_opt("ray2", &a.ray2);
            a.radius.push(&mut s);
            a.caps.push(&mut s);
            a.output.push(&mut s);
            a.fit.push(&mut s);
            let s = with_config(s, &a.graph.config)?;
            let g = graph_from(&s)?;
            let (Some(r1), Some(r2)) = (s.str("ray1"), s.str("ray2")) else {
                return usage("div pair needs --ray1 and --ray2");
            };
            let (a1, a2) = (ray_from(&g, r1)?, ray_from(&g, r2)?);
            let label = format!("pair({};{})", a1.label(&g), a2.label(&g));
            run_measure(&s, &g, Measure::Pair(a1, a2), label, None)
        }
        DivCmd::Geodesic(a) => {
            let mut s = Settings::default();
            a.push(&mut s);
            let s = with_config(s, &a.graph.config)?;
            let g = graph_from(&s)?;
            let gamma = geodesic_from(&s, &g)?;
            let (label, t) = (gamma.label(&g), gamma.exponent());
            run_measure(&s, &g, Measure::Geodesic(gamma), label, t)
        }
        DivCmd::Lower(a) => {
            let mut s = Settings::default();
            a.inner.push(&mut s);
            s.set_opt("window", &a.window);
            let s = with_config(s, &a.inner.graph.config)?;
            let g = graph_from(&s)?;
            let gamma = geodesic_from(&s, &g)?;
            let (lo, hi) = parse_span::<i64>("window", s.str("window").unwrap_or("-10:10"))?;
            if lo > hi {
                return usage("empty window");
            }
            let (label, t) = (
                format!("lower({};{lo}:{hi})", gamma.label(&g)),
                gamma.exponent(),
            );
            run_measure(
                &s,
                &g,
                Measure::Lower {
                    gamma,
                    window: lo..=hi,
                },
                label,
                t,
            )
        }
        DivCmd::Gersten(a) => {
            let mut s = Settings::default();
            a.graph.push(&mut s);
            a.radius.push(&mut s);
            a.caps.push(&mut s);
            a.output.push(&mut s);
            a.fit.push(&mut s);
            let s = with_config(s, &a.graph.config)?;
            let g = graph_from(&s)?;
            run_measure(&s, &g, Measure::Gersten, "gersten".into(), None)
        }
    }
}

pub fn fit(a: FitArgs) -> Result<()> {
    let mut s = Settings::default();
    s.set_opt("input", &a.input.as_ref().map(|p| p.display().to_string()));
    a.fit.push(&mut s);
    let s = with_config(s, &a.config)?;
    let input = s.require::<PathBuf>("input")?;
    let rows = read_csv_file(&input)?;
    let mut groups: Vec<((String, String), Vec<DivergenceSample>)> = Vec::new();
    for row in &rows {
        let key = (row.graph.clone(), row.geodesic.clone());
        let sample = row.to_sample()?;
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(sample),
            None => groups.push((key, vec![sample])),
        }
    }
    let sections = groups
        .into_iter()
        .map(|((graph, geo), samples)| fit_section(&s, format!("{graph} {geo}"), samples))
        .collect::<Result<Vec<_>>>()?;
    print!("{}", report_for(&s, sections));
    Ok(())
}

pub const PRESETS: &[&str] = &[
    "paper-flat",
    "paper-alpha",
    "paper-gamma",
    "paper-ldiv",
    "paper-freeproduct",
    "paper-gersten",
];

/// Defaults of a preset given the already-resolved user settings.
pub fn preset_defaults(name: &str, user: &Settings) -> Result<Settings> {
    let mut d = Settings::default();
    let m = user.get::<u32>("m")?;
    match name {
        "paper-flat" => {
            d.set("graph", "gamma:1");
            d.set("geodesic", "periodic");
            d.set("word", "a_0 b_0");
            d.set("r-min", 1);
            d.set("r-max", 8);
            d.set("fit-range", "2:8");
            d.set("expected-exponent", 1);
            d.set("tol", 0.3);
        }
        "paper-alpha" => {
            let m = m.unwrap_or(2);
            d.set("m", m);
            d.set("graph", format!("gamma:{m}"));
            d.set("geodesic", "periodic");
            d.set("word", format!("a_{m} b_{m}"));
            d.set("r-min", 1);
            d.set("r-max", 8);
            d.set("fit-range", "2:8");
            d.set("expected-exponent", m);
            d.set("tol", 0.5);
        }
        "paper-gamma" => {
            let m = m.unwrap_or(3);
            let t = user
                .get::<RationalExponent>("t")?
                .unwrap_or(RationalExponent::new(2, 1)?);
            let s = Rational64::from_integer(i64::from(m) - 1)
                + Rational64::new(t.denom() as i64, t.numer() as i64);
            d.set("m", m);
            d.set("graph", format!("gamma:{m}"));
            d.set("geodesic", "gamma");
            d.set("t", t);
            d.set("r-min", 1);
            d.set("r-max", 6);
            d.set("fit-range", "2:6");
            d.set("expected-exponent", s);
            d.set("tol", 0.5);
        }
        "paper-ldiv" => {
            d.set("m", 3);
            d.set("graph", "gamma:3");
            d.set("geodesic", "gamma");
            d.set("t", "2/1");
            d.set("window", "-10:10");
            d.set("r-min", 2);
            d.set("r-max", 5);
            d.set("fit-range", "2:5");
            d.set("expected-exponent", 2);
            d.set("tol", 0.5);
        }
        "paper-freeproduct" => {
            d.set("graph", "omega:3");
            d.set("geodesic", "periodic");
            d.set("word", "G2.a_2 G2.b_2");
            d.set("r-min", 1);
            d.set("r-max", 4);
            d.set("fit-range", "2:4");
            d.set("expected-exponent", 2);
            d.set("tol", 0.6);
        }
        "paper-gersten" => {
            let m = m.unwrap_or(2);
            d.set("m", m);
            d.set("graph", format!("gamma:{m}"));
            d.set("r-min", 1);
            d.set("r-max", 4);
            d.set("fit-range", "2:4");
            d.set("expected-exponent", m);
            d.set("tol", 0.6);
        }
        other => {
            return usage(format!(
                "unknown preset {other:?}; known presets: {}",
                PRESETS.join(", ")
            ))
        }
    }
    d.set("out", format!("out/{name}"));
    Ok(d)
}

pub fn experiment(a: ExperimentArgs) -> Result<()> {
    let mut flags = Settings::default();
    a.inner.push(&mut flags);
    flags.set_opt("window", &a.window);
    let user = with_config(flags, &a.inner.graph.config)?;
    let s = user.clone().under(&preset_defaults(&a.preset, &user)?);
    let g = graph_from(&s)?;

    let radii = radii(&s)?;
    let policy = policy(&s, &radii)?;
    let workers = s.get::<usize>("workers")?.unwrap_or(0);
    let (measure, label, t) = match a.preset.as_str() {
        "paper-gersten" => (Measure::Gersten, "gersten".to_string(), None),
        "paper-ldiv" => {
            let gamma = geodesic_from(&s, &g)?;
            let (lo, hi) = parse_span::<i64>("window", s.str("window").unwrap_or("-10:10"))?;
            let label = format!("lower({};{lo}:{hi})", gamma.label(&g));
            let t = gamma.exponent();
            (
                Measure::Lower {
                    gamma,
                    window: lo..=hi,
                },
                label,
                t,
            )
        }
        _ => {
            let gamma = geodesic_from(&s, &g)?;
            let (label, t) = (gamma.label(&g), gamma.exponent());
            (Measure::Geodesic(gamma), label, t)
        }
    };
    let samples = sweep(&g, &measure, &radii, &policy, workers)?;
    let mut rows = sample_rows(&g, &label, t, &samples);
    let mut sections = vec![fit_section(
        &s,
        format!("{} {label}", g.family()),
        samples.clone(),
    )?];
    let mut notes = Vec::new();

    if a.preset == "paper-freeproduct" {
        // the same geodesic inside its own factor
        let g2 = build_gamma(2)?;
        let alpha = GeodesicSpec::periodic(&g2, &g2.parse_word("a_2 b_2")?)?;
        let local = sweep(
            &g2,
            &Measure::Geodesic(alpha.clone()),
            &radii,
            &policy,
            workers,
        )?;
        let same = local
            .iter()
            .zip(&samples)
            .all(|(x, y)| x.status == y.status);
        notes.push(format!(
            "locality: values equal to the factor's own: {}",
            if same { "yes" } else { "no" }
        ));
        rows.extend(sample_rows(&g2, &alpha.label(&g2), None, &local));
        sections.push(fit_section(
            &s,
            format!("gamma:2 {}", alpha.label(&g2)),
            local,
        )?);
    }

    let mut report = report_for(&s, sections);
    report.notes = notes;
    let dir = out_dir(&s)?.expect("presets set an output directory");
    let csv_path = dir.join("samples.csv");
    let report_path = dir.join("report.txt");
    write_file(&csv_path, &csv_bytes(&rows)?)?;
    write_file(&report_path, report.to_string().as_bytes())?;
    print!("{report}");
    if s.flag("emit-dot")? {
        emit_paths(&g, &measure, &samples, &dir)?;
    }
    println!();
    println!("wrote {} and {}", csv_path.display(), report_path.display());
    Ok(())
}
