//! Command-line interface. Exit codes: 0 success/PASS, 1 FAIL, 2 usage
//! error, 3 gated scenario skipped under --strict.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use classprod_core::classes::{
    all_classes_brute, class_product_decompose, commutator_decompose, enumerate_class,
};
use classprod_core::Perm;

use crate::error::AppError;
use crate::handle::{parse_group_spec, spec_name, ElemParams, GroupHandle};
use crate::ingest::{self, Fetched};
use crate::report::{self, Outcome, Report};
use crate::scenario::{self, RunOptions, ScenarioSpec};
use crate::cache;

#[derive(Parser)]
#[command(name = "classprod", version, about = "Conjugacy-class products in finite classical groups")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Clone)]
pub struct Common {
    /// RNG seed (all algorithms are deterministic given the seed)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// worker threads for catalog runs
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// largest conjugacy class that will be enumerated
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub cap_class: usize,
    /// largest total element count across a decomposition
    #[arg(long, global = true, default_value_t = 20_000_000)]
    pub cap_total: usize,
    /// memory cap in bytes for group construction
    #[arg(long, global = true)]
    pub memory_cap: Option<usize>,
    /// directory searched first for ingested data files
    #[arg(long, global = true, default_value = "data")]
    pub data_dir: PathBuf,
    /// cache directory for built groups and fetched files
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// base location (a directory path) to copy missing data files from
    #[arg(long, global = true)]
    pub base_url: Option<String>,
    /// exit 3 instead of 0 when a gated scenario is skipped
    #[arg(long, global = true)]
    pub strict: bool,
    /// cross-check against brute-force oracles on small groups
    #[arg(long, global = true)]
    pub oracle: bool,
    /// emit reports as JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Args, Clone, Default)]
pub struct ElemArgs {
    /// number of Jordan blocks / pseudoreflection eigenvalue
    #[arg(long)]
    pub a: Option<u8>,
    /// rank parameter for involutions
    #[arg(long)]
    pub k: Option<usize>,
    /// Jordan partition, e.g. "2^2.1^4"
    #[arg(long)]
    pub partition: Option<String>,
    /// comma-separated eigenvalue list
    #[arg(long, value_delimiter = ',')]
    pub eigenvalues: Option<Vec<u64>>,
    /// element order (for class searches)
    #[arg(long)]
    pub order: Option<u64>,
    /// class size (for class searches)
    #[arg(long)]
    pub size: Option<usize>,
}

impl ElemArgs {
    fn params(&self) -> ElemParams {
        ElemParams {
            a: self.a,
            k: self.k,
            partition: self.partition.clone(),
            eigenvalues: self.eigenvalues.clone(),
            order: self.order,
            size: self.size,
        }
    }
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Build a group and print its order and action degree
    Construct {
        #[arg(long)]
        group: String,
    },
    /// List conjugacy classes (representative order, class size); small groups
    Classes {
        #[arg(long)]
        group: String,
        /// element-count cap for the brute class listing
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    /// Decompose the class product C * D into classes
    Product {
        #[arg(long)]
        group: String,
        /// element kind for C (e.g. transvection, alt_involution)
        #[arg(long)]
        c: String,
        /// element kind for D
        #[arg(long)]
        d: String,
        #[command(flatten)]
        elem: ElemArgs,
    },
    /// Decompose the commutator set [C, D] into classes
    Commutator {
        #[arg(long)]
        group: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[command(flatten)]
        elem: ElemArgs,
    },
    /// Orbit lengths of a centralizer C_G(x) on a named point set
    Orbits {
        #[arg(long)]
        group: String,
        /// element kind for x
        #[arg(long)]
        x: String,
        /// point set: nonzero_vectors, nonsingular_points, points, ...
        #[arg(long)]
        set: String,
        /// act with the conformal extension instead of G itself
        #[arg(long)]
        conformal: bool,
        #[command(flatten)]
        elem: ElemArgs,
    },
    /// Scenario catalog operations
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
    /// Resolve a data file through data dir / cache / base location
    Fetch {
        /// file name, e.g. d4_2_s3_deg3510.txt
        name: String,
        /// expected SHA-256 checksum (hex)
        #[arg(long)]
        sha256: Option<String>,
    },
    /// Brute-force oracle: orbit count of C_G(x) on y's class by pair closure
    Oracle {
        #[arg(long)]
        group: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        d: String,
        #[command(flatten)]
        elem: ElemArgs,
    },
}

#[derive(Subcommand)]
pub enum ScenarioCmd {
    /// List catalog ids and titles
    List,
    /// Run one scenario by id or file, or the whole catalog with --all
    Run {
        /// builtin scenario id
        id: Option<String>,
        /// run every catalog scenario
        #[arg(long)]
        all: bool,
        /// run a scenario file instead of a builtin
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

pub fn dispatch(cli: Cli) -> i32 {
    match run(cli) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn options(common: &Common) -> RunOptions {
    RunOptions {
        seed: common.seed,
        cap_class: common.cap_class,
        cap_total: common.cap_total,
        memory_cap: common.memory_cap.unwrap_or(usize::MAX),
        threads: common.threads.max(1),
        data_dir: common.data_dir.clone(),
        cache_dir: common.cache_dir.clone(),
        base_url: common
            .base_url
            .clone()
            .or_else(|| std::env::var("CLASSPROD_BASE_URL").ok()),
        oracle: common.oracle,
    }
}

fn build_handle(name: &str, opts: &RunOptions) -> Result<GroupHandle, AppError> {
    let spec = parse_group_spec(name)?;
    let inner = cache::build_group(spec, opts.seed, opts.memory_cap, opts.cache_dir.as_deref())?;
    Ok(GroupHandle::new(spec_name(&spec), inner))
}

fn run(cli: Cli) -> Result<i32, AppError> {
    let opts = options(&cli.common);
    match cli.cmd {
        Cmd::Construct { group } => {
            let h = build_handle(&group, &opts)?;
            println!(
                "{}: order {}, degree {}, {} strong generators",
                h.name,
                h.inner.group.order(),
                h.inner.group.degree(),
                h.inner.group.strong_generators().len()
            );
            Ok(0)
        }
        Cmd::Classes { group, cap } => {
            let h = build_handle(&group, &opts)?;
            let mut classes = all_classes_brute(h.inner.group.generators(), cap)?;
            classes.sort_by_key(|(rep, size)| (*size, rep.order()));
            println!("{} classes of {}:", classes.len(), h.name);
            println!("{:>8} {:>10}", "order", "size");
            for (rep, size) in &classes {
                println!("{:>8} {:>10}", rep.order(), size);
            }
            Ok(0)
        }
        Cmd::Product { group, c, d, elem } => decompose_cmd(&group, &c, &d, &elem, &opts, false),
        Cmd::Commutator { group, c, d, elem } => decompose_cmd(&group, &c, &d, &elem, &opts, true),
        Cmd::Orbits {
            group,
            x,
            set,
            conformal,
            elem,
        } => {
            let mut spec = scenario_shell(&group);
            spec.elements.insert(
                "x".into(),
                element_spec_of(&x, &elem),
            );
            spec.checks.push(scenario::CheckSpec {
                kind: "orbit_lengths_eq".into(),
                x: Some("x".into()),
                set: Some(set),
                acting: conformal.then(|| "conformal".to_string()),
                lengths: Some(vec![]),
                sublist: Some(1),
                ..Default::default()
            });
            let rep = scenario::run_scenario(&spec, &opts);
            emit(&[rep], cli.common.json);
            Ok(0)
        }
        Cmd::Scenario { cmd } => scenario_cmd(cmd, &opts, cli.common.json, cli.common.strict),
        Cmd::Fetch { name, sha256 } => {
            let cache_dir = opts
                .cache_dir
                .clone()
                .unwrap_or_else(|| std::env::temp_dir().join("classprod-cache"));
            match ingest::fetch(&name, &opts.data_dir, &cache_dir, opts.base_url.as_deref(), sha256.as_deref())? {
                Fetched::File(p) => {
                    println!("{}", p.display());
                    Ok(0)
                }
                Fetched::Missing { name } => {
                    eprintln!("{name}: not available");
                    Ok(if cli.common.strict { 3 } else { 0 })
                }
            }
        }
        Cmd::Oracle { group, x, d, elem } => {
            let h = build_handle(&group, &opts)?;
            if h.inner.group.order() > 5000 {
                return Err(AppError::Usage(format!(
                    "oracle runs on groups of order <= 5000 ({} has order {})",
                    h.name,
                    h.inner.group.order()
                )));
            }
            let px = h.element_perm(&x, &elem.params())?;
            let pd = h.element_perm(&d, &elem.params())?;
            let count = brute_pair_orbits(&h.inner.group, &px, &pd, opts.cap_class, opts.seed)?;
            println!("{count} orbits on x^G x d^G (brute pair closure)");
            Ok(0)
        }
    }
}

fn element_spec_of(kind: &str, elem: &ElemArgs) -> scenario::ElementSpec {
    scenario::ElementSpec {
        kind: kind.to_string(),
        a: elem.a,
        k: elem.k,
        partition: elem.partition.clone(),
        eigenvalues: elem.eigenvalues.clone(),
        order: elem.order,
        size: elem.size,
        file: None,
    }
}

fn scenario_shell(group: &str) -> ScenarioSpec {
    let spec = parse_group_spec(group).ok();
    ScenarioSpec {
        id: "adhoc".into(),
        title: format!("ad-hoc run in {group}"),
        group: scenario::GroupSection {
            family: spec.map(|s| crate::handle::family_name(s.family).to_string()),
            n: spec.map(|s| s.n),
            q: spec.map(|s| s.q),
            source: None,
            file: None,
            format: None,
            order: None,
            p: None,
        },
        elements: Default::default(),
        checks: vec![],
        gated: vec![],
    }
}

fn decompose_cmd(
    group: &str,
    c: &str,
    d: &str,
    elem: &ElemArgs,
    opts: &RunOptions,
    commutator: bool,
) -> Result<i32, AppError> {
    let h = build_handle(group, opts)?;
    let pc = h.element_perm(c, &elem.params())?;
    let pd = h.element_perm(d, &elem.params())?;
    let g = &h.inner.group;
    let cc = enumerate_class(g, &pc, opts.cap_class, opts.seed)?;
    let cd = enumerate_class(g, &pd, opts.cap_class, opts.seed)?;
    let dec = if commutator {
        commutator_decompose(g, &cc, &cd, opts.cap_class, opts.cap_total, opts.seed)?
    } else {
        class_product_decompose(g, &cc, &cd, opts.cap_class, opts.cap_total, opts.seed)?
    };
    println!(
        "{} of |C| = {} and |D| = {} in {} (total {}):",
        if commutator { "[C, D]" } else { "C * D" },
        cc.size(),
        cd.size(),
        h.name,
        dec.total
    );
    println!("{:>8} {:>10} {:>12}", "order", "class", "multiplicity");
    for row in dec.sorted_rows() {
        println!(
            "{:>8} {:>10} {:>12}",
            row.fingerprint.order, row.class_size, row.multiplicity
        );
    }
    Ok(0)
}

fn scenario_cmd(
    cmd: ScenarioCmd,
    opts: &RunOptions,
    json: bool,
    strict: bool,
) -> Result<i32, AppError> {
    match cmd {
        ScenarioCmd::List => {
            for s in scenario::builtin_catalog() {
                let gated = if s.gated.is_empty() { "" } else { "  [gated]" };
                println!("{:24} {}{}", s.id, s.title, gated);
            }
            Ok(0)
        }
        ScenarioCmd::Run { id, all, file } => {
            let specs: Vec<ScenarioSpec> = if all {
                scenario::builtin_catalog()
            } else if let Some(path) = file {
                vec![scenario::load_scenario(&path)?]
            } else if let Some(id) = id {
                vec![scenario::builtin(&id).ok_or_else(|| {
                    AppError::Usage(format!("no builtin scenario '{id}' (see scenario list)"))
                })?]
            } else {
                return Err(AppError::Usage(
                    "scenario run needs an id, --file, or --all".into(),
                ));
            };
            let reports = run_all(&specs, opts);
            emit(&reports, json);
            let failed = reports.iter().any(|r| r.outcome == Outcome::Fail);
            let skipped = reports.iter().any(|r| r.outcome == Outcome::Skipped);
            Ok(if failed {
                1
            } else if skipped && strict {
                3
            } else {
                0
            })
        }
    }
}

/// Run scenarios, fanning out across `opts.threads` workers; report order
/// matches input order regardless of completion order.
pub fn run_all(specs: &[ScenarioSpec], opts: &RunOptions) -> Vec<Report> {
    if opts.threads <= 1 || specs.len() <= 1 {
        return specs.iter().map(|s| scenario::run_scenario(s, opts)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Report>> = (0..specs.len()).map(|_| None).collect();
    let slot_refs: Vec<std::sync::Mutex<&mut Option<Report>>> =
        slots.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..opts.threads.min(specs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let report = scenario::run_scenario(&specs[i], opts);
                **slot_refs[i].lock().unwrap() = Some(report);
            });
        }
    });
    drop(slot_refs);
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

fn emit(reports: &[Report], json: bool) {
    if json {
        println!("{}", report::to_json(reports));
    } else {
        print!("{}", report::to_text(reports));
    }
}

/// Orbits of G on x^G x d^G by direct closure on pairs (small groups only).
pub fn brute_pair_orbits(
    group: &classprod_core::BsgsGroup,
    x: &Perm,
    d: &Perm,
    cap: usize,
    seed: u64,
) -> Result<usize, AppError> {
    let cx = enumerate_class(group, x, cap, seed)?;
    let cd = enumerate_class(group, d, cap, seed)?;
    let mut seen: std::collections::HashSet<(Vec<u16>, Vec<u16>)> = Default::default();
    let mut count = 0usize;
    for i in 0..cx.size() {
        let a0 = cx.element_at(group, i)?;
        for j in 0..cd.size() {
            let b0 = cd.element_at(group, j)?;
            let key = (a0.images().to_vec(), b0.images().to_vec());
            if seen.contains(&key) {
                continue;
            }
            count += 1;
            let mut frontier = vec![(a0.clone(), b0.clone())];
            seen.insert(key);
            while let Some((a, b)) = frontier.pop() {
                for g in group.generators() {
                    let na = a.conjugate_by(g);
                    let nb = b.conjugate_by(g);
                    if seen.insert((na.images().to_vec(), nb.images().to_vec())) {
                        frontier.push((na, nb));
                    }
                }
            }
        }
    }
    Ok(count)
}
