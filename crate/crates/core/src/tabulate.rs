//! The census pipeline: enumerate drawable prime codes, group them into
//! classes by move search, compute invariants of each class and tabulate how
//! many classes per crossing number the invariants tell apart.
//!
//! With a checkpoint directory every stage writes its result there, and
//! [`resume`] picks up after the last complete stage.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::alexander::{alexander_poly, LaurentPolynomial};
use crate::code::{par_enumerate_codes, PairCode};
use crate::colortests::{
    affine, conjugation, enumerate_tests, invariant_vector, irreducible, partitions, same_test, validate,
    ColorMatrix, InvariantVector, TestValue,
};
use crate::moves::{classify_with, refine, search_for, ClassStore, MoveError, SearchOptions};
use crate::realize::{is_realizable, realize};

const CONFIG_FILE: &str = "config.txt";
const CODES_FILE: &str = "codes.txt";
const CLASSES_FILE: &str = "classes.tsv";
const INVARIANTS_FILE: &str = "invariants.tsv";
const TABLE_FILE: &str = "table.txt";

#[derive(Debug, thiserror::Error)]
pub enum TabulateError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("checkpoint file {path} is damaged: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },
    #[error("checkpoint was written with {key}={stored}, this run asks for {key}={requested}")]
    ConfigMismatch { key: String, stored: String, requested: String },
    #[error("no checkpoint found in {0}")]
    MissingCheckpoint(PathBuf),
    #[error("checkpoint in {0} is incomplete")]
    Incomplete(PathBuf),
    #[error("resuming needs a checkpoint directory")]
    NoCheckpointDir,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Moves(#[from] MoveError),
}

/// Parameters of one census run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// Largest diagram the move search may pass through.
    pub max_crossings: usize,
    /// Largest input code. Must leave room below `max_crossings` for the
    /// search to grow diagrams.
    pub input_crossings: usize,
    /// Enumerated color tests with up to this many colors join the suite.
    pub max_colors: usize,
    pub affine_moduli: Vec<usize>,
    /// Conjugacy classes of `S_m` for `m` up to this join the suite.
    pub sym_max: usize,
    pub identify_mirrors: bool,
    pub budget: usize,
    pub refine_budget: usize,
    pub composite_budget: usize,
    pub checkpoint: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(max_crossings: usize) -> Self {
        RunConfig {
            max_crossings,
            input_crossings: max_crossings.saturating_sub(3),
            max_colors: 5,
            affine_moduli: vec![7],
            sym_max: 5,
            identify_mirrors: true,
            budget: 2_000,
            refine_budget: 20_000,
            composite_budget: 5_000,
            checkpoint: None,
            jobs: 0,
        }
    }

    /// The settings that determine the result, one `key=value` per line.
    /// Thread count and checkpoint location are left out.
    pub fn fingerprint(&self) -> String {
        let moduli: Vec<String> = self.affine_moduli.iter().map(|p| p.to_string()).collect();
        let mut s = String::new();
        for (k, v) in [
            ("max_crossings", self.max_crossings.to_string()),
            ("input_crossings", self.input_crossings.to_string()),
            ("max_colors", self.max_colors.to_string()),
            ("affine_moduli", moduli.join(",")),
            ("sym_max", self.sym_max.to_string()),
            ("identify_mirrors", self.identify_mirrors.to_string()),
            ("budget", self.budget.to_string()),
            ("refine_budget", self.refine_budget.to_string()),
            ("composite_budget", self.composite_budget.to_string()),
        ] {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    fn check(&self) -> Result<(), TabulateError> {
        if self.input_crossings > self.max_crossings {
            return Err(TabulateError::Config(format!(
                "input crossings {} exceed the search bound {}",
                self.input_crossings, self.max_crossings
            )));
        }
        if let Some(&p) = self.affine_moduli.iter().find(|&&p| p < 2) {
            return Err(TabulateError::Config(format!("affine modulus {p} is below 2")));
        }
        Ok(())
    }

    fn search(&self, budget: usize) -> SearchOptions {
        SearchOptions { max_crossings: self.max_crossings, identify_mirrors: self.identify_mirrors, budget }
    }
}

/// One class with its invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub id: u32,
    pub code: PairCode,
    /// False when the search found a diagram that splits into two
    /// nontrivial knots.
    pub prime: bool,
    pub invariants: InvariantVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub crossing_number: usize,
    pub class_count: usize,
    pub distinguished_count: usize,
    /// Pairs of class ids with equal invariants, listed under the larger
    /// crossing number of the two.
    pub unresolved_pairs: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<TableRow>,
    pub classes: ClassStore,
    pub entries: Vec<ClassEntry>,
}

impl Report {
    pub fn composite(&self) -> impl Iterator<Item = &ClassEntry> {
        self.entries.iter().filter(|e| !e.prime)
    }
}

/// The color tests used by a run: enumerated tests, then affine and
/// conjugation tests that are new up to renaming and mirror.
pub fn build_suite(config: &RunConfig) -> Vec<ColorMatrix> {
    let mut suite: Vec<ColorMatrix> = (2..=config.max_colors).flat_map(enumerate_tests).collect();
    let add = |m: ColorMatrix, suite: &mut Vec<ColorMatrix>| {
        let known = suite.iter().any(|s| s.size() == m.size() && same_test(s, &m).unwrap_or(false));
        if !known {
            suite.push(m);
        }
    };
    for &p in &config.affine_moduli {
        for k in 1..p as i64 {
            if let Ok(m) = affine(p, k) {
                add(m, &mut suite);
            }
        }
    }
    for m in 3..=config.sym_max {
        for part in partitions(m) {
            let t = conjugation(m, &part);
            if t.size() > 2 && validate(&t) && irreducible(&t) {
                add(t, &mut suite);
            }
        }
    }
    suite
}

/// Canonical, drawable, prime codes with up to `n` crossings.
pub fn input_codes(n: usize) -> Vec<PairCode> {
    (0..=n)
        .flat_map(|k| par_enumerate_codes(k, true).into_par_iter().filter(|c| !c.is_composite() && is_realizable(c)).collect::<Vec<_>>())
        .collect()
}

/// Coloring counts and Alexander polynomial of a drawable code.
pub fn invariants_of(code: &PairCode, suite: &[ColorMatrix]) -> InvariantVector {
    let d = realize(code).expect("class codes are drawable");
    let mut v = invariant_vector(&d, suite);
    v.polynomial = Some(alexander_poly(&d));
    v
}

/// Searches for a diagram of the class that is a connected sum of two
/// diagrams, each with nontrivial Alexander polynomial.
pub fn composite_witness(code: &PairCode, opts: &SearchOptions) -> Option<PairCode> {
    let knotted = |f: &PairCode| {
        f.crossing_count() >= 3
            && realize(f).map(|d| alexander_poly(&d) != LaurentPolynomial::one()).unwrap_or(false)
    };
    search_for(code, opts, |c| c.splits().iter().any(|(a, b)| knotted(a) && knotted(b)))
}

/// Polynomials that are a product of two nontrivial polynomials from the
/// list. A connected sum has the product of its summands' polynomials, so
/// only these classes need a search for a splitting diagram.
pub fn product_candidates(polys: &[&LaurentPolynomial]) -> std::collections::HashSet<LaurentPolynomial> {
    let one = LaurentPolynomial::one();
    let known: Vec<&LaurentPolynomial> = polys.iter().copied().filter(|p| **p != one).collect();
    let mut out = std::collections::HashSet::new();
    for (i, a) in known.iter().enumerate() {
        for b in &known[i..] {
            out.insert((*a * *b).normalized());
        }
    }
    out.retain(|p| polys.contains(&p));
    out
}

/// Groups the prime classes by invariants and counts, per crossing number,
/// the classes whose invariants no other class shares.
pub fn distinguish(entries: &[ClassEntry]) -> Vec<TableRow> {
    let primes: Vec<&ClassEntry> = entries.iter().filter(|e| e.prime).collect();
    let top = primes.iter().map(|e| e.code.crossing_count()).max().unwrap_or(0);
    let mut rows: Vec<TableRow> = (0..=top)
        .map(|n| TableRow { crossing_number: n, class_count: 0, distinguished_count: 0, unresolved_pairs: vec![] })
        .collect();
    let mut groups: BTreeMap<&InvariantVector, Vec<&ClassEntry>> = BTreeMap::new();
    for e in &primes {
        groups.entry(&e.invariants).or_default().push(e);
    }
    for group in groups.values() {
        for (i, a) in group.iter().enumerate() {
            let row = &mut rows[a.code.crossing_count()];
            row.class_count += 1;
            if group.len() == 1 {
                row.distinguished_count += 1;
            }
            for b in &group[i + 1..] {
                let (x, y) = if a.id < b.id { (a, b) } else { (b, a) };
                let n = x.code.crossing_count().max(y.code.crossing_count());
                rows[n].unresolved_pairs.push((x.id, y.id));
            }
        }
    }
    for r in &mut rows {
        r.unresolved_pairs.sort_unstable();
    }
    rows
}

/// Fixed-width table, followed by the unresolved pairs if there are any.
pub fn emit_table(rows: &[TableRow]) -> String {
    let mut s = format!("{:>9}  {:>7}  {:>13}  {:>10}\n", "crossings", "classes", "distinguished", "unresolved");
    for r in rows {
        let _ = writeln!(
            s,
            "{:>9}  {:>7}  {:>13}  {:>10}",
            r.crossing_number,
            r.class_count,
            r.distinguished_count,
            r.unresolved_pairs.len()
        );
    }
    let pairs: Vec<_> = rows.iter().flat_map(|r| r.unresolved_pairs.iter().map(move |p| (r.crossing_number, p))).collect();
    if !pairs.is_empty() {
        s.push_str("unresolved pairs:\n");
        for (n, (a, b)) in pairs {
            let _ = writeln!(s, "{n:>9}  #{a} #{b}");
        }
    }
    s
}

/// Runs every stage from scratch. An existing checkpoint in the configured
/// directory is replaced.
pub fn run(config: &RunConfig) -> Result<Report, TabulateError> {
    execute(config, false)
}

/// Continues a checkpointed run. Stages whose files are present and intact
/// are loaded instead of recomputed.
pub fn resume(config: &RunConfig) -> Result<Report, TabulateError> {
    execute(config, true)
}

fn execute(config: &RunConfig, reuse: bool) -> Result<Report, TabulateError> {
    config.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| TabulateError::Config(e.to_string()))?;
    pool.install(|| pipeline(config, reuse))
}

fn pipeline(config: &RunConfig, reuse: bool) -> Result<Report, TabulateError> {
    let ck = match &config.checkpoint {
        Some(dir) => Some(Checkpoint::open(dir, config, reuse)?),
        None if reuse => return Err(TabulateError::NoCheckpointDir),
        None => None,
    };
    let suite = build_suite(config);
    log::info!("suite has {} color tests", suite.len());

    let codes = match ck.as_ref().map(Checkpoint::load_codes).transpose()?.flatten() {
        Some(codes) => codes,
        None => {
            let codes = input_codes(config.input_crossings);
            log::info!("{} input codes", codes.len());
            if let Some(ck) = &ck {
                ck.save_codes(&codes)?;
            }
            codes
        }
    };

    let classes = match ck.as_ref().map(|ck| ck.load_classes(&codes)).transpose()?.flatten() {
        Some(store) => store,
        None => {
            let mut store = classify_with(&codes, &config.search(config.budget))?;
            log::info!("{} classes after the first search", store.representatives().count());
            let keys: HashMap<u32, InvariantVector> = representative_invariants(&store, &suite).into_iter().collect();
            refine(&mut store, &keys, &config.search(config.refine_budget));
            log::info!("{} classes after refinement", store.representatives().count());
            if let Some(ck) = &ck {
                ck.save(CLASSES_FILE, &store.to_tsv())?;
            }
            store
        }
    };

    let entries = match ck.as_ref().map(|ck| ck.load_entries(&classes, &suite)).transpose()?.flatten() {
        Some(entries) => entries,
        None => {
            let opts = config.search(config.composite_budget);
            let vectors = representative_invariants(&classes, &suite);
            let polys: Vec<&LaurentPolynomial> = vectors.iter().filter_map(|(_, v)| v.polynomial.as_ref()).collect();
            let suspects = product_candidates(&polys);
            let entries: Vec<ClassEntry> = vectors
                .par_iter()
                .map(|(id, invariants)| {
                    let code = classes.record(*id).canonical_code.clone();
                    let suspect = invariants.polynomial.as_ref().is_some_and(|p| suspects.contains(p));
                    let prime = !suspect || composite_witness(&code, &opts).is_none();
                    ClassEntry { id: *id, code, prime, invariants: invariants.clone() }
                })
                .collect();
            log::info!("{} composite classes", entries.iter().filter(|e| !e.prime).count());
            if let Some(ck) = &ck {
                ck.save(INVARIANTS_FILE, &write_entries(&entries, &suite))?;
            }
            entries
        }
    };

    let rows = distinguish(&entries);
    if let Some(ck) = &ck {
        ck.save(TABLE_FILE, &emit_table(&rows))?;
    }
    Ok(Report { rows, classes, entries })
}

fn representative_invariants(store: &ClassStore, suite: &[ColorMatrix]) -> Vec<(u32, InvariantVector)> {
    let reps: Vec<(u32, PairCode)> =
        store.representatives().map(|r| (r.permanent_id, r.canonical_code.clone())).collect();
    reps.into_par_iter().map(|(id, code)| (id, invariants_of(&code, suite))).collect()
}

/// Loads the table of a finished checkpointed run, checking every stage.
pub fn load_table(dir: &Path) -> Result<Vec<TableRow>, TabulateError> {
    let text = read(&dir.join(CONFIG_FILE))?.ok_or_else(|| TabulateError::MissingCheckpoint(dir.to_path_buf()))?;
    let config = parse_config(&dir.join(CONFIG_FILE), &text)?;
    let ck = Checkpoint { dir: dir.to_path_buf() };
    let suite = build_suite(&config);
    let incomplete = || TabulateError::Incomplete(dir.to_path_buf());
    let codes = ck.load_codes()?.ok_or_else(incomplete)?;
    let classes = ck.load_classes(&codes)?.ok_or_else(incomplete)?;
    let entries = ck.load_entries(&classes, &suite)?.ok_or_else(incomplete)?;
    Ok(distinguish(&entries))
}

struct Checkpoint {
    dir: PathBuf,
}

fn read(path: &Path) -> Result<Option<String>, TabulateError> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(source) => Err(TabulateError::Io { path: path.to_path_buf(), source }),
    }
}

fn corrupt(path: &Path, reason: impl Into<String>) -> TabulateError {
    TabulateError::CorruptCheckpoint { path: path.to_path_buf(), reason: reason.into() }
}

/// Strips the `#end <count>` trailer that marks a completely written file.
fn body<'a>(path: &Path, text: &'a str) -> Result<(Vec<&'a str>, usize), TabulateError> {
    let mut lines: Vec<&str> = text.lines().collect();
    let last = lines.pop().ok_or_else(|| corrupt(path, "empty file"))?;
    let count = last
        .strip_prefix("#end ")
        .and_then(|c| c.parse::<usize>().ok())
        .ok_or_else(|| corrupt(path, "missing end marker"))?;
    Ok((lines, count))
}

fn parse_config(path: &Path, text: &str) -> Result<RunConfig, TabulateError> {
    let mut map: HashMap<&str, &str> = HashMap::new();
    for line in text.lines() {
        let (k, v) = line.split_once('=').ok_or_else(|| corrupt(path, format!("bad line {line:?}")))?;
        map.insert(k, v);
    }
    let get = |k: &str| map.get(k).copied().ok_or_else(|| corrupt(path, format!("missing {k}")));
    let num = |k: &str| get(k)?.parse::<usize>().map_err(|_| corrupt(path, format!("bad {k}")));
    let moduli = get("affine_moduli")?;
    let affine_moduli = if moduli.is_empty() {
        vec![]
    } else {
        moduli.split(',').map(|p| p.parse().map_err(|_| corrupt(path, "bad affine_moduli"))).collect::<Result<_, _>>()?
    };
    let config = RunConfig {
        max_crossings: num("max_crossings")?,
        input_crossings: num("input_crossings")?,
        max_colors: num("max_colors")?,
        affine_moduli,
        sym_max: num("sym_max")?,
        identify_mirrors: get("identify_mirrors")?.parse().map_err(|_| corrupt(path, "bad identify_mirrors"))?,
        budget: num("budget")?,
        refine_budget: num("refine_budget")?,
        composite_budget: num("composite_budget")?,
        checkpoint: None,
        jobs: 0,
    };
    if config.fingerprint() != text {
        return Err(corrupt(path, "unexpected layout"));
    }
    Ok(config)
}

impl Checkpoint {
    fn open(dir: &Path, config: &RunConfig, reuse: bool) -> Result<Self, TabulateError> {
        let ck = Checkpoint { dir: dir.to_path_buf() };
        let io_err = |source| TabulateError::Io { path: dir.to_path_buf(), source };
        fs::create_dir_all(dir).map_err(io_err)?;
        let path = dir.join(CONFIG_FILE);
        if reuse {
            let text = read(&path)?.ok_or_else(|| TabulateError::MissingCheckpoint(dir.to_path_buf()))?;
            let stored = parse_config(&path, &text)?;
            let requested = config.fingerprint();
            for (a, b) in stored.fingerprint().lines().zip(requested.lines()) {
                if a != b {
                    let (key, s) = a.split_once('=').expect("fingerprint lines are key=value");
                    let r = b.split_once('=').expect("fingerprint lines are key=value").1;
                    return Err(TabulateError::ConfigMismatch {
                        key: key.to_string(),
                        stored: s.to_string(),
                        requested: r.to_string(),
                    });
                }
            }
        } else {
            for f in [CODES_FILE, CLASSES_FILE, INVARIANTS_FILE, TABLE_FILE] {
                match fs::remove_file(dir.join(f)) {
                    Err(e) if e.kind() != io::ErrorKind::NotFound => {
                        return Err(TabulateError::Io { path: dir.join(f), source: e })
                    }
                    _ => {}
                }
            }
            ck.save(CONFIG_FILE, &config.fingerprint())?;
        }
        Ok(ck)
    }

    /// Writes through a temporary file so a crash never leaves half a file
    /// under the final name.
    fn save(&self, name: &str, text: &str) -> Result<(), TabulateError> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!("{name}.tmp"));
        fs::write(&tmp, text).map_err(|source| TabulateError::Io { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path).map_err(|source| TabulateError::Io { path, source })
    }

    fn save_codes(&self, codes: &[PairCode]) -> Result<(), TabulateError> {
        let mut s = String::new();
        for c in codes {
            let _ = writeln!(s, "{c}");
        }
        let _ = writeln!(s, "#end {}", codes.len());
        self.save(CODES_FILE, &s)
    }

    fn load_codes(&self) -> Result<Option<Vec<PairCode>>, TabulateError> {
        let path = self.dir.join(CODES_FILE);
        let Some(text) = read(&path)? else { return Ok(None) };
        let (lines, count) = body(&path, &text)?;
        if lines.len() != count {
            return Err(corrupt(&path, format!("{} codes, marker says {count}", lines.len())));
        }
        let codes = lines
            .iter()
            .map(|l| match l.parse::<PairCode>() {
                Ok(c) if c.is_canonical() => Ok(c),
                Ok(c) => Err(corrupt(&path, format!("{c} is not canonical"))),
                Err(e) => Err(corrupt(&path, e.to_string())),
            })
            .collect::<Result<_, _>>()?;
        Ok(Some(codes))
    }

    fn load_classes(&self, codes: &[PairCode]) -> Result<Option<ClassStore>, TabulateError> {
        let path = self.dir.join(CLASSES_FILE);
        let Some(text) = read(&path)? else { return Ok(None) };
        let store = ClassStore::from_tsv(&text).map_err(|e| corrupt(&path, e.to_string()))?;
        // classification stores exactly the inputs, in input order
        let same = store.len() == codes.len()
            && store.records().iter().zip(codes).all(|(r, c)| &r.canonical_code == c);
        if !same {
            return Err(corrupt(&path, "records do not match the input codes"));
        }
        Ok(Some(store))
    }

    fn load_entries(&self, store: &ClassStore, suite: &[ColorMatrix]) -> Result<Option<Vec<ClassEntry>>, TabulateError> {
        let path = self.dir.join(INVARIANTS_FILE);
        let Some(text) = read(&path)? else { return Ok(None) };
        let entries = parse_entries(&path, &text, store, suite)?;
        Ok(Some(entries))
    }
}

/// One line per class: id, prime or composite, polynomial, then the test
/// values in suite order. The first line names the tests.
fn write_entries(entries: &[ClassEntry], suite: &[ColorMatrix]) -> String {
    let mut s = String::from("#tests");
    for m in suite {
        let _ = write!(s, "\t{m}");
    }
    s.push('\n');
    for e in entries {
        let poly = e.invariants.polynomial.as_ref().map(ToString::to_string).unwrap_or_default();
        let _ = write!(s, "{}\t{}\t{poly}", e.id, if e.prime { "prime" } else { "composite" });
        for v in e.invariants.counts() {
            let _ = write!(s, "\t{v}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "#end {}", entries.len());
    s
}

fn parse_entries(path: &Path, text: &str, store: &ClassStore, suite: &[ColorMatrix]) -> Result<Vec<ClassEntry>, TabulateError> {
    let (lines, count) = body(path, text)?;
    let Some((header, lines)) = lines.split_first() else {
        return Err(corrupt(path, "missing header"));
    };
    let names: Vec<String> = suite.iter().map(ToString::to_string).collect();
    let expected = std::iter::once("#tests".to_string()).chain(names.iter().cloned()).collect::<Vec<_>>().join("\t");
    if *header != expected {
        return Err(corrupt(path, "test list differs from the configured suite"));
    }
    let reps: Vec<u32> = store.representatives().map(|r| r.permanent_id).collect();
    if lines.len() != count || count != reps.len() {
        return Err(corrupt(path, format!("{} entries for {} classes", lines.len(), reps.len())));
    }
    lines
        .iter()
        .zip(reps)
        .map(|(line, rep)| {
            let bad = |what: &str| corrupt(path, format!("{what} in {line:?}"));
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 + suite.len() {
                return Err(bad("wrong field count"));
            }
            let id: u32 = fields[0].parse().map_err(|_| bad("bad id"))?;
            if id != rep {
                return Err(bad("unexpected class id"));
            }
            let prime = match fields[1] {
                "prime" => true,
                "composite" => false,
                _ => return Err(bad("bad primality flag")),
            };
            let polynomial: LaurentPolynomial = fields[2].parse().map_err(|_| bad("bad polynomial"))?;
            let values = names
                .iter()
                .zip(&fields[3..])
                .map(|(n, v)| v.parse::<TestValue>().map(|v| (n.clone(), v)).map_err(|_| bad("bad test value")))
                .collect::<Result<_, _>>()?;
            Ok(ClassEntry {
                id,
                code: store.record(id).canonical_code.clone(),
                prime,
                invariants: InvariantVector { values, polynomial: Some(polynomial) },
            })
        })
        .collect()
}
