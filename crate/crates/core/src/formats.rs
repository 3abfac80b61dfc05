//! Plain-text file formats. Everything after `#` on a line is a comment and
//! blank lines are skipped.
//!
//! * `.mon`: the order, then one row of the Cayley table per line. Element 0 is the identity.
//! * `.hom`: one line with the image of each domain element.
//! * `.ext`: six lines naming the files for `N`, `G`, `H` (`.mon`) and `k`, `e`, `s` (`.hom`),
//!   relative to the directory of the `.ext` file.
//! * `.quot`: a header line `N_file H_file`, then `|H|` lines of `|N|` class labels.
//! * `.act`: `|H|` lines of `|N|` entries, either all element ids (a raw map) or all
//!   `c:`-prefixed class ids in the fiber over that row.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::action::{ActionClass, PreAction};
use crate::monoid::{validate_hom, validate_monoid, FiniteMonoid, MonoidError, MonoidHom};
use crate::quotient::{AdmissibleQuotient, QuotientError};
use crate::split::{validate_split_extension, SplitExtError, SplitExtension};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("Io: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("Parse: {path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {source}")]
    Monoid { path: PathBuf, source: MonoidError },
    #[error(transparent)]
    Extension(#[from] SplitExtError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

fn numbers(path: &Path, line: usize, text: &str) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(path, line, format!("`{t}` is not a non-negative integer"))))
        .collect()
}

pub fn parse_monoid(path: &Path, text: &str) -> Result<FiniteMonoid, FormatError> {
    let mut lines = content_lines(text);
    let (l0, head) = lines.next().ok_or_else(|| parse_err(path, 0, "empty file"))?;
    let order = match numbers(path, l0, head)?.as_slice() {
        [o] => *o,
        _ => return Err(parse_err(path, l0, "first line must be the order")),
    };
    let rows = lines.map(|(l, t)| numbers(path, l, t)).collect::<Result<Vec<_>, _>>()?;
    if rows.len() != order {
        return Err(parse_err(path, l0, format!("expected {order} table rows, found {}", rows.len())));
    }
    validate_monoid(order, &rows).map_err(|source| FormatError::Monoid { path: path.to_path_buf(), source })
}

pub fn read_monoid(path: &Path) -> Result<FiniteMonoid, FormatError> {
    parse_monoid(path, &read(path)?)
}

pub fn format_monoid(m: &FiniteMonoid) -> String {
    let mut s = format!("{}\n", m.order());
    for row in m.rows() {
        s.push_str(&join(row));
        s.push('\n');
    }
    s
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_hom(path: &Path, text: &str, dom: &FiniteMonoid, cod: &FiniteMonoid) -> Result<MonoidHom, FormatError> {
    let mut lines = content_lines(text);
    let (l0, t) = lines.next().ok_or_else(|| parse_err(path, 0, "empty file"))?;
    if let Some((l, _)) = lines.next() {
        return Err(parse_err(path, l, "a homomorphism is a single line"));
    }
    validate_hom(dom, cod, numbers(path, l0, t)?).map_err(|source| FormatError::Monoid { path: path.to_path_buf(), source })
}

pub fn read_hom(path: &Path, dom: &FiniteMonoid, cod: &FiniteMonoid) -> Result<MonoidHom, FormatError> {
    parse_hom(path, &read(path)?, dom, cod)
}

pub fn format_hom(f: &MonoidHom) -> String {
    format!("{}\n", join(f.map()))
}

/// The six components of an `.ext` file, each checked on its own but not yet against each other.
#[derive(Clone, Debug)]
pub struct ExtParts {
    pub n: FiniteMonoid,
    pub g: FiniteMonoid,
    pub h: FiniteMonoid,
    pub k: MonoidHom,
    pub e: MonoidHom,
    pub s: MonoidHom,
    /// Every file read, `.ext` first.
    pub files: Vec<PathBuf>,
}

impl ExtParts {
    pub fn validate(&self) -> Result<SplitExtension, SplitExtError> {
        validate_split_extension(&self.n, &self.g, &self.h, &self.k, &self.e, &self.s)
    }
}

fn sibling(base: &Path, name: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new("")).join(name)
}

pub fn read_ext_parts(path: &Path) -> Result<ExtParts, FormatError> {
    let text = read(path)?;
    let lines: Vec<(usize, &str)> = content_lines(&text).collect();
    if lines.len() != 6 {
        return Err(parse_err(path, lines.last().map_or(0, |l| l.0), format!("expected 6 file names, found {}", lines.len())));
    }
    let files: Vec<PathBuf> = lines.iter().map(|(_, name)| sibling(path, name)).collect();
    let n = read_monoid(&files[0])?;
    let g = read_monoid(&files[1])?;
    let h = read_monoid(&files[2])?;
    let k = read_hom(&files[3], &n, &g)?;
    let e = read_hom(&files[4], &g, &h)?;
    let s = read_hom(&files[5], &h, &g)?;
    let mut all = vec![path.to_path_buf()];
    all.extend(files);
    Ok(ExtParts { n, g, h, k, e, s, files: all })
}

pub fn read_ext(path: &Path) -> Result<SplitExtension, FormatError> {
    Ok(read_ext_parts(path)?.validate()?)
}

/// A quotient together with the files it was read from.
#[derive(Clone, Debug)]
pub struct QuotFile {
    pub quotient: AdmissibleQuotient,
    pub files: Vec<PathBuf>,
}

pub fn read_quot(path: &Path) -> Result<QuotFile, FormatError> {
    let text = read(path)?;
    let mut lines = content_lines(&text);
    let (l0, head) = lines.next().ok_or_else(|| parse_err(path, 0, "empty file"))?;
    let names: Vec<&str> = head.split_whitespace().collect();
    let [n_name, h_name] = names.as_slice() else {
        return Err(parse_err(path, l0, "header must be `N_file H_file`"));
    };
    let (n_path, h_path) = (sibling(path, n_name), sibling(path, h_name));
    let n = read_monoid(&n_path)?;
    let h = read_monoid(&h_path)?;
    let fibers = lines.map(|(l, t)| numbers(path, l, t)).collect::<Result<Vec<_>, _>>()?;
    let quotient = AdmissibleQuotient::new(&n, &h, fibers)?;
    Ok(QuotFile { quotient, files: vec![path.to_path_buf(), n_path, h_path] })
}

pub fn format_quot(q: &AdmissibleQuotient, n_name: &str, h_name: &str) -> String {
    let mut s = format!("{n_name} {h_name}\n");
    for f in q.fibers() {
        s.push_str(&join(f));
        s.push('\n');
    }
    s
}

/// The contents of an `.act` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActFile {
    Raw(Vec<Vec<usize>>),
    Classes(Vec<Vec<usize>>),
}

pub fn parse_act(path: &Path, text: &str) -> Result<ActFile, FormatError> {
    let mut raw = Vec::new();
    let mut classes = Vec::new();
    for (l, t) in content_lines(text) {
        let mut r = Vec::new();
        let mut c = Vec::new();
        for tok in t.split_whitespace() {
            match tok.strip_prefix("c:") {
                Some(id) => c.push(id.parse().map_err(|_| parse_err(path, l, format!("bad class id `{tok}`")))?),
                None => r.push(tok.parse().map_err(|_| parse_err(path, l, format!("bad element id `{tok}`")))?),
            }
        }
        if !r.is_empty() && !c.is_empty() {
            return Err(parse_err(path, l, "a row mixes element ids and class ids"));
        }
        raw.push(r);
        classes.push(c);
    }
    let all_raw = classes.iter().all(Vec::is_empty);
    let all_classes = raw.iter().all(Vec::is_empty);
    match (all_raw, all_classes) {
        (true, false) => Ok(ActFile::Raw(raw)),
        (false, true) => Ok(ActFile::Classes(classes)),
        (true, true) => Err(parse_err(path, 0, "empty file")),
        (false, false) => Err(parse_err(path, 0, "the file mixes element ids and class ids")),
    }
}

pub fn read_act(path: &Path) -> Result<ActFile, FormatError> {
    parse_act(path, &read(path)?)
}

pub fn format_pre_action(a: &PreAction) -> String {
    a.rows().map(|r| join(r) + "\n").collect()
}

pub fn format_action_class(a: &ActionClass) -> String {
    a.rows()
        .map(|r| r.iter().map(|c| format!("c:{c}")).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

/// Writes whichever of a quotient, an action and an extension are given, as
/// `<stem>.quot`, `<stem>.act`, `<stem>.ext` with their component files
/// `<stem>.N.mon`, `<stem>.H.mon`, `<stem>.G.mon`, `<stem>.{k,e,s}.hom`.
/// Returns the files written.
pub fn write_bundle(
    stem: &Path,
    n: &FiniteMonoid,
    h: &FiniteMonoid,
    quotient: Option<&AdmissibleQuotient>,
    action: Option<&str>,
    ext: Option<&SplitExtension>,
) -> Result<Vec<PathBuf>, FormatError> {
    let base = stem.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let dir = stem.parent().unwrap_or(Path::new(""));
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(dir).map_err(|source| FormatError::Io { path: dir.to_path_buf(), source })?;
    }
    let name = |suffix: &str| format!("{base}.{suffix}");
    let mut written = Vec::new();
    let mut put = |file: String, text: String| -> Result<(), FormatError> {
        let p = dir.join(file);
        write(&p, &text)?;
        written.push(p);
        Ok(())
    };
    put(name("N.mon"), format_monoid(n))?;
    put(name("H.mon"), format_monoid(h))?;
    if let Some(q) = quotient {
        put(name("quot"), format_quot(q, &name("N.mon"), &name("H.mon")))?;
    }
    if let Some(a) = action {
        put(name("act"), a.to_string())?;
    }
    if let Some(x) = ext {
        put(name("G.mon"), format_monoid(x.g()))?;
        put(name("k.hom"), format_hom(x.k()))?;
        put(name("e.hom"), format_hom(x.e()))?;
        put(name("s.hom"), format_hom(x.s()))?;
        let listing = ["N.mon", "G.mon", "H.mon", "k.hom", "e.hom", "s.hom"].map(name).join("\n") + "\n";
        put(name("ext"), listing)?;
    }
    Ok(written)
}

/// `path` with its extension removed, used as the stem for [`write_bundle`].
pub fn stem_of(path: &Path) -> PathBuf {
    path.with_extension("")
}
