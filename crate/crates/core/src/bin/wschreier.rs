use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use wschreier::action::{enumerate_action_classes_with, is_action, weak_semidirect_product, ActionClass, PreAction};
use wschreier::constructions::{
    coarse_action_compatible, coarse_quotient, glueing_quotient, matrix_monoid, right_invertible_submonoid,
    semilattice_glueing,
};
use wschreier::formats::{
    format_action_class, format_pre_action, read_act, read_ext_parts, read_hom, read_monoid, read_quot,
    stem_of, write_bundle, ActFile,
};
use wschreier::oracle::{brute_force_classify, compare_with_classification};
use wschreier::quotient::enumerate_admissible_quotients_with;
use wschreier::split::{enumerate_schreier_retractions, is_schreier, is_weakly_schreier};
use wschreier::wact::{classify_extensions_with, extensions_isomorphic, morphism_exists, WActObject};
use wschreier::{ActionViolation, AdmissibleQuotient, Bounds, Error, FiniteMonoid, SplitExtension};

const AFTER_HELP: &str = "\
File formats (`#` starts a comment, blank lines are ignored):

  .mon   order, then the Cayley table row by row; element 0 is the identity
           2
           0 1
           1 1
  .hom   one line: the image of each domain element
           0 2
  .ext   six lines naming N.mon G.mon H.mon k.hom e.hom s.hom, relative to the .ext file
  .quot  header `N.mon H.mon`, then one line of |N| class labels per element of H
           S2.mon S2.mon
           0 1
           0 0
  .act   one line of |N| entries per element of H: element ids for a raw map,
         or `c:`-prefixed class ids (in the fiber over that row) for an action class
           c:0 c:1
           c:0 c:0

Exit codes: 0 success or true, 1 false or absent, 2 input or domain error.";

#[derive(Parser)]
#[command(name = "wschreier", version, about = "Weakly Schreier split extensions of finite monoids", after_help = AFTER_HELP)]
struct Cli {
    /// Emit a single JSON object instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores). Does not affect output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, default_value_t = Bounds::default().max_quotient_cells)]
    max_quotient_cells: usize,
    #[arg(long, global = true, default_value_t = Bounds::default().max_action_cells)]
    max_action_cells: usize,
    #[arg(long, global = true, default_value_t = Bounds::default().max_retractions)]
    max_retractions: u128,
    #[arg(long, global = true, default_value_t = Bounds::default().max_oracle_order)]
    max_oracle_order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the split extension axioms and the weakly Schreier condition.
    CheckExt { ext: PathBuf },
    /// Count or list the Schreier retractions.
    #[command(group(ArgGroup::new("mode").required(true).args(["count", "list"])))]
    Retractions {
        ext: PathBuf,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Enumerate the admissible quotients of N × H.
    Quotients {
        n: PathBuf,
        h: PathBuf,
        /// Write each quotient as DIR/q<i>.quot.
        #[arg(short, long)]
        out_dir: Option<PathBuf>,
    },
    /// Enumerate the action classes compatible with a quotient.
    Actions {
        quot: PathBuf,
        /// Write each class as DIR/a<i>.act.
        #[arg(short, long)]
        out_dir: Option<PathBuf>,
    },
    /// Build the weak semidirect product of a quotient and an action.
    Build {
        quot: PathBuf,
        act: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Classify all weakly Schreier extensions of H by N.
    Classify {
        n: PathBuf,
        h: PathBuf,
        /// Cross-check against brute-force enumeration of all middle monoids.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the unique morphism between two extensions, or NONE.
    Morphism { a: PathBuf, b: PathBuf },
    /// Glue along a homomorphism F: H -> N into a commutative N.
    Glueing {
        n: PathBuf,
        h: PathBuf,
        f: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The coarse quotient of N × H.
    Coarse {
        n: PathBuf,
        h: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The monoid of dim × dim matrices over F_p with the conjugation map.
    Matmon {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        field: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Brute-force enumeration of the extensions of H by N.
    Oracle { n: PathBuf, h: PathBuf },
}

/// What a subcommand produced.
struct Report {
    command: Vec<String>,
    inputs: Vec<PathBuf>,
    result: Value,
    text: String,
    exit: u8,
}

impl Report {
    fn new(command: Vec<String>) -> Self {
        Report { command, inputs: Vec::new(), result: json!({}), text: String::new(), exit: 0 }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn echo(parts: &[&dyn std::fmt::Display]) -> Vec<String> {
    parts.iter().map(|p| p.to_string()).collect()
}

fn digest(path: &Path) -> Value {
    let sha = std::fs::read(path).map(|b| hex::encode(Sha256::digest(&b))).unwrap_or_default();
    json!({ "path": path.display().to_string(), "sha256": sha })
}

fn monoid_json(m: &FiniteMonoid) -> Value {
    json!({ "order": m.order(), "table": m.to_rows() })
}

fn ext_json(x: &SplitExtension) -> Value {
    json!({
        "G": monoid_json(x.g()),
        "k": x.k().map(),
        "e": x.e().map(),
        "s": x.s().map(),
    })
}

fn quotient_json(q: &AdmissibleQuotient) -> Value {
    json!({ "fibers": q.fibers(), "classes": q.num_classes(), "discrete": q.is_discrete() })
}

fn object_json(o: &WActObject) -> Value {
    json!({ "quotient": quotient_json(o.quotient()), "action": o.action().to_rows() })
}

fn fmt_rows(rows: &[Vec<usize>]) -> String {
    rows.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: Threads: {e}");
            return ExitCode::from(2);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = t;
    }
    let bounds = Bounds {
        max_quotient_cells: cli.max_quotient_cells,
        max_action_cells: cli.max_action_cells,
        max_retractions: cli.max_retractions,
        max_oracle_order: cli.max_oracle_order,
    };
    let start = Instant::now();
    match run(&cli.command, &bounds) {
        Ok(report) => {
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let mut text = if cli.json {
                let mut out = json!({
                    "command": report.command,
                    "inputs": report.inputs.iter().map(|p| digest(p)).collect::<Vec<_>>(),
                    "result": report.result,
                    "exit_code": report.exit,
                });
                if cli.timing {
                    out["wall_time_ms"] = json!(elapsed);
                }
                serde_json::to_string_pretty(&out).expect("JSON values serialize") + "\n"
            } else {
                report.text
            };
            if cli.timing && !cli.json {
                text += &format!("wall time: {elapsed:.1} ms\n");
            }
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.exit)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": 2 }));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command, bounds: &Bounds) -> Result<Report, Error> {
    match command {
        Command::CheckExt { ext } => check_ext(ext),
        Command::Retractions { ext, count, list } => retractions(ext, *count, *list, bounds),
        Command::Quotients { n, h, out_dir } => quotients(n, h, out_dir.as_deref(), bounds),
        Command::Actions { quot, out_dir } => actions(quot, out_dir.as_deref(), bounds),
        Command::Build { quot, act, out } => build(quot, act, out),
        Command::Classify { n, h, oracle } => classify(n, h, *oracle, bounds),
        Command::Morphism { a, b } => morphism(a, b),
        Command::Glueing { n, h, f, out } => glueing(n, h, f, out.as_deref()),
        Command::Coarse { n, h, out } => coarse(n, h, out.as_deref()),
        Command::Matmon { dim, field, out } => matmon(*dim, *field, out.as_deref()),
        Command::Oracle { n, h } => oracle(n, h, bounds),
    }
}

fn check_ext(path: &Path) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"check-ext", &path.display()]));
    let parts = read_ext_parts(path)?;
    r.inputs = parts.files.clone();
    r.line(format!("N: order {}, G: order {}, H: order {}", parts.n.order(), parts.g.order(), parts.h.order()));
    let ext = match parts.validate() {
        Ok(ext) => ext,
        Err(e) => {
            r.line(format!("split extension axioms: FAIL {e}"));
            r.result = json!({ "valid": false, "violation": e.name(), "message": e.to_string() });
            r.exit = 2;
            return Ok(r);
        }
    };
    r.line("split extension axioms: ok");
    let (weak, witnesses) = is_weakly_schreier(&ext);
    let schreier = is_schreier(&ext);
    r.line(format!("weakly Schreier: {}", if weak { "yes" } else { "no" }));
    r.line(format!("Schreier: {}", if schreier { "yes" } else { "no" }));
    let count = witnesses.retraction_count();
    if weak {
        r.line(format!("Schreier retractions: {count}"));
    } else if let Some(g) = witnesses.first_empty() {
        r.line(format!("no witness for element {g}"));
    }
    r.result = json!({
        "valid": true,
        "weakly_schreier": weak,
        "schreier": schreier,
        "retraction_count": count.to_string(),
    });
    r.exit = if weak { 0 } else { 1 };
    Ok(r)
}

fn retractions(path: &Path, count: bool, list: bool, bounds: &Bounds) -> Result<Report, Error> {
    let flag = if count { "--count" } else { "--list" };
    let mut r = Report::new(echo(&[&"retractions", &path.display(), &flag]));
    let parts = read_ext_parts(path)?;
    r.inputs = parts.files.clone();
    let ext = parts.validate()?;
    let (weak, w) = is_weakly_schreier(&ext);
    if !weak {
        return Err(wschreier::SplitExtError::NotWeaklySchreier { g: w.first_empty().unwrap_or(0) }.into());
    }
    let n = w.retraction_count();
    if list {
        let all = enumerate_schreier_retractions(&ext, bounds)?;
        for q in &all {
            r.line(format!("{:?}", q.map()));
        }
        r.result = json!({ "count": n.to_string(), "retractions": all.iter().map(|q| q.map()).collect::<Vec<_>>() });
    } else {
        r.line(n.to_string());
        r.result = json!({ "count": n.to_string() });
    }
    Ok(r)
}

fn quotients(n_path: &Path, h_path: &Path, out_dir: Option<&Path>, bounds: &Bounds) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"quotients", &n_path.display(), &h_path.display()]));
    r.inputs = vec![n_path.to_path_buf(), h_path.to_path_buf()];
    let (n, h) = (read_monoid(n_path)?, read_monoid(h_path)?);
    let qs = enumerate_admissible_quotients_with(&n, &h, bounds)?;
    r.line(format!("{} admissible quotients", qs.len()));
    for (i, q) in qs.iter().enumerate() {
        r.line(format!("q{i}: {} classes, fibers {}", q.num_classes(), fmt_rows(q.fibers())));
        if let Some(dir) = out_dir {
            write_bundle(&dir.join(format!("q{i}")), &n, &h, Some(q), None, None)?;
        }
    }
    r.result = json!({ "count": qs.len(), "quotients": qs.iter().map(quotient_json).collect::<Vec<_>>() });
    Ok(r)
}

fn actions(quot: &Path, out_dir: Option<&Path>, bounds: &Bounds) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"actions", &quot.display()]));
    let qf = read_quot(quot)?;
    r.inputs = qf.files.clone();
    let classes = enumerate_action_classes_with(&qf.quotient, bounds)?;
    r.line(format!("{} action classes", classes.len()));
    for (i, a) in classes.iter().enumerate() {
        r.line(format!("a{i}: {}", fmt_rows(&a.to_rows())));
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(dir).map_err(|source| wschreier::FormatError::Io { path: dir.to_path_buf(), source })?;
            let p = dir.join(format!("a{i}.act"));
            std::fs::write(&p, format_action_class(a)).map_err(|source| wschreier::FormatError::Io { path: p, source })?;
        }
    }
    r.result = json!({ "count": classes.len(), "actions": classes.iter().map(ActionClass::to_rows).collect::<Vec<_>>() });
    r.exit = if classes.is_empty() { 1 } else { 0 };
    Ok(r)
}

fn action_from_file(q: &AdmissibleQuotient, act: &Path) -> Result<ActionClass, Error> {
    match read_act(act)? {
        ActFile::Raw(rows) => {
            let alpha = PreAction::new(q.n().order(), rows).ok_or(ActionViolation::ShapeMismatch)?;
            if alpha.h_order() != q.h().order() {
                return Err(ActionViolation::ShapeMismatch.into());
            }
            Ok(ActionClass::from_pre_action(q, &alpha)?)
        }
        ActFile::Classes(rows) => Ok(ActionClass::new(q, rows)?),
    }
}

fn build(quot: &Path, act: &Path, out: &Path) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"build", &quot.display(), &act.display(), &"-o", &out.display()]));
    let qf = read_quot(quot)?;
    r.inputs = qf.files.clone();
    r.inputs.push(act.to_path_buf());
    let q = &qf.quotient;
    let class = action_from_file(q, act)?;
    let ext = weak_semidirect_product(&class)?;
    write_bundle(&stem_of(out), q.n(), q.h(), Some(q), Some(&format_action_class(&class)), Some(&ext))?;
    r.line(format!("built G of order {} into {}", ext.g().order(), stem_of(out).with_extension("ext").display()));
    r.result = json!({ "extension": ext_json(&ext) });
    Ok(r)
}

fn classify(n_path: &Path, h_path: &Path, with_oracle: bool, bounds: &Bounds) -> Result<Report, Error> {
    let mut cmd = echo(&[&"classify", &n_path.display(), &h_path.display()]);
    if with_oracle {
        cmd.push("--oracle".into());
    }
    let mut r = Report::new(cmd);
    r.inputs = vec![n_path.to_path_buf(), h_path.to_path_buf()];
    let (n, h) = (read_monoid(n_path)?, read_monoid(h_path)?);
    let cl = classify_extensions_with(&n, &h, bounds)?;
    r.line(format!(
        "{} extensions over {} admissible quotients ({} without compatible actions)",
        cl.objects.len(),
        cl.quotients.len(),
        cl.quotients_without_actions.len()
    ));
    for (i, o) in cl.objects.iter().enumerate() {
        r.line(format!(
            "object {i}: |G| = {}, fibers {}, action {}",
            o.quotient().num_classes(),
            fmt_rows(o.quotient().fibers()),
            fmt_rows(&o.action().to_rows())
        ));
    }
    r.line("<= matrix (row <= column):");
    for row in &cl.leq {
        r.line(row.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" "));
    }
    r.result = json!({
        "count": cl.objects.len(),
        "quotient_count": cl.quotients.len(),
        "quotients_without_actions": cl.quotients_without_actions,
        "objects": cl.objects.iter().map(object_json).collect::<Vec<_>>(),
        "leq": cl.leq,
    });
    if with_oracle {
        let brute = brute_force_classify(&n, &h, bounds)?;
        let cmp = compare_with_classification(&brute, &cl)?;
        r.line(format!(
            "oracle: {} extensions, bijection {}, order preserving {}",
            brute.len(),
            cmp.bijection,
            cmp.order_preserving
        ));
        r.result["oracle"] = json!({
            "count": brute.len(),
            "matched": cmp.matched,
            "bijection": cmp.bijection,
            "order_preserving": cmp.order_preserving,
        });
        if !(cmp.bijection && cmp.order_preserving) {
            r.exit = 1;
        }
    }
    Ok(r)
}

fn morphism(a: &Path, b: &Path) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"morphism", &a.display(), &b.display()]));
    let pa = read_ext_parts(a)?;
    let pb = read_ext_parts(b)?;
    r.inputs = pa.files.iter().chain(&pb.files).cloned().collect();
    let (ea, eb) = (pa.validate()?, pb.validate()?);
    match morphism_exists(&ea, &eb)? {
        Some(m) => {
            let psi = m.map();
            r.line(format!("{:?}", psi.map()));
            r.line(format!("injective: {}, surjective: {}", psi.is_injective(), psi.is_surjective()));
            r.result = json!({
                "exists": true,
                "map": psi.map(),
                "injective": psi.is_injective(),
                "surjective": psi.is_surjective(),
            });
        }
        None => {
            r.line("NONE");
            r.result = json!({ "exists": false });
            r.exit = 1;
        }
    }
    Ok(r)
}

fn glueing(n_path: &Path, h_path: &Path, f_path: &Path, out: Option<&Path>) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"glueing", &n_path.display(), &h_path.display(), &f_path.display()]));
    r.inputs = vec![n_path.to_path_buf(), h_path.to_path_buf(), f_path.to_path_buf()];
    let (n, h) = (read_monoid(n_path)?, read_monoid(h_path)?);
    let f = read_hom(f_path, &h, &n)?;
    let (q, action) = glueing_quotient(&f)?;
    let product = weak_semidirect_product(&action)?;
    let (ext, pairs) = if n.is_semilattice() {
        let gl = semilattice_glueing(&f)?;
        let same = extensions_isomorphic(&gl, &product)?;
        r.line(format!("pair glueing isomorphic to the weak semidirect product: {same}"));
        r.result["pair_glueing_isomorphic"] = json!(same);
        (gl, true)
    } else {
        (product, false)
    };
    r.line(format!("glueing quotient: {} classes, fibers {}", q.num_classes(), fmt_rows(q.fibers())));
    r.line(format!("G: order {}", ext.g().order()));
    r.result["quotient"] = quotient_json(&q);
    r.result["pair_glueing"] = json!(pairs);
    r.result["extension"] = ext_json(&ext);
    if let Some(out) = out {
        write_bundle(&stem_of(out), &n, &h, Some(&q), Some(&format_action_class(&action)), Some(&ext))?;
    }
    Ok(r)
}

fn coarse(n_path: &Path, h_path: &Path, out: Option<&Path>) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"coarse", &n_path.display(), &h_path.display()]));
    r.inputs = vec![n_path.to_path_buf(), h_path.to_path_buf()];
    let (n, h) = (read_monoid(n_path)?, read_monoid(h_path)?);
    let d = right_invertible_submonoid(&h);
    let q = coarse_quotient(&n, &h);
    let trivial = PreAction::trivial(&n, &h);
    let compatible = coarse_action_compatible(&n, &h, &trivial);
    r.line(format!("L(H): {:?}", d.l.members()));
    r.line(format!("complement two-sided: {}", d.complement_is_two_sided()));
    r.line(format!("coarse quotient: {} classes", q.num_classes()));
    r.line(format!("trivial action compatible: {compatible}"));
    let ext = if compatible { Some(weak_semidirect_product(&ActionClass::from_pre_action(&q, &trivial)?)?) } else { None };
    if let Some(x) = &ext {
        r.line(format!("G: order {}", x.g().order()));
    }
    r.result = json!({
        "right_invertible": d.l.members(),
        "complement_two_sided": d.complement_is_two_sided(),
        "quotient": quotient_json(&q),
        "trivial_action_compatible": compatible,
        "extension": ext.as_ref().map(ext_json),
    });
    if let Some(out) = out {
        let act = compatible.then(|| format_pre_action(&trivial));
        write_bundle(&stem_of(out), &n, &h, Some(&q), act.as_deref(), ext.as_ref())?;
    }
    Ok(r)
}

fn matmon(dim: usize, field: usize, out: Option<&Path>) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"matmon", &"--dim", &dim, &"--field", &field]));
    let m = matrix_monoid(dim, field)?;
    let d = right_invertible_submonoid(&m.monoid);
    let q = coarse_quotient(&m.monoid, &m.monoid);
    let verdict = is_action(&q, &m.conjugation);
    r.line(format!("order: {}", m.monoid.order()));
    r.line(format!("right invertible: {}", d.l.len()));
    r.line(format!("coarse quotient classes: {}", q.num_classes()));
    let mut result = json!({
        "order": m.monoid.order(),
        "right_invertible": d.l.len(),
        "coarse_classes": q.num_classes(),
        "conjugation_is_action": verdict.is_ok(),
    });
    let mut ext = None;
    match &verdict {
        Ok(()) => {
            r.line("conjugation is an action: yes");
            let x = weak_semidirect_product(&ActionClass::from_pre_action(&q, &m.conjugation)?)?;
            let weak = is_weakly_schreier(&x).0;
            r.line(format!("extension: |G| = {}, weakly Schreier: {weak}", x.g().order()));
            result["extension_order"] = json!(x.g().order());
            result["weakly_schreier"] = json!(weak);
            ext = Some(x);
        }
        Err(v) => {
            r.line(format!("conjugation is an action: no ({v})"));
            result["violation"] = json!(v.to_string());
            r.exit = 1;
        }
    }
    r.result = result;
    if let Some(out) = out {
        write_bundle(&stem_of(out), &m.monoid, &m.monoid, Some(&q), Some(&format_pre_action(&m.conjugation)), ext.as_ref())?;
    }
    Ok(r)
}

fn oracle(n_path: &Path, h_path: &Path, bounds: &Bounds) -> Result<Report, Error> {
    let mut r = Report::new(echo(&[&"oracle", &n_path.display(), &h_path.display()]));
    r.inputs = vec![n_path.to_path_buf(), h_path.to_path_buf()];
    let (n, h) = (read_monoid(n_path)?, read_monoid(h_path)?);
    let exts = brute_force_classify(&n, &h, bounds)?;
    r.line(format!("{} weakly Schreier extensions up to isomorphism", exts.len()));
    for (i, x) in exts.iter().enumerate() {
        r.line(format!("ext {i}: |G| = {}, G = {}", x.g().order(), fmt_rows(&x.g().to_rows())));
    }
    r.result = json!({ "count": exts.len(), "extensions": exts.iter().map(ext_json).collect::<Vec<_>>() });
    Ok(r)
}
