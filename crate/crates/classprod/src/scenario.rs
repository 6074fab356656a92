//! Declarative scenarios: each one names a group, some elements, and a list
//! of checks with expected values, and compiles to class arithmetic. The
//! built-in catalog encodes the finite verifications the library exists for;
//! scenario files use a flat TOML grammar (strings, integers, integer lists —
//! no expressions) so they stay diff-able and hand-writable.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::time::Instant;

use classprod_core::classes::{
    all_classes_brute, are_conjugate, class_product_decompose, commutator_decompose,
    decompose_into_classes, enumerate_class, is_p_element, semisimple_part, ClassHandle,
};
use classprod_core::classical::orbit_lengths_projective;
use classprod_core::elements::mat_group_closure;
use classprod_core::flags::{common_flag_exists, triangularizable_over_closure};
use classprod_core::matrix::{jordan_type, partition_string};
use classprod_core::{Action, BsgsGroup, GroupSpec, Mat, Perm};
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::error::AppError;
use crate::handle::{default_action, parse_family, ElemParams, GroupHandle};
use crate::ingest::{self, Fetched};
use crate::report::{Caps, CheckReport, Outcome, Report};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u8>,
    /// "file" for ingested groups
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// known group order, decimal string (u128 range)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    /// characteristic for ingested groups
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// SLP file for ingested groups
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acting: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    /// flattened (inner size, outer size) pairs exempt from the sweep
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exception_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_class_of: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qs: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<usize>>,
    /// 1: expected lengths need only embed into the actual lengths
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sublist: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    /// 1: orbit-count mismatch by rational splitting degrades to WARN
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warn_on_split: Option<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GatedFile {
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScenarioSpec {
    pub id: String,
    pub title: String,
    pub group: GroupSection,
    #[serde(default)]
    pub elements: BTreeMap<String, ElementSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub gated: Vec<GatedFile>,
}

pub fn load_scenario_str(text: &str) -> Result<ScenarioSpec, AppError> {
    toml::from_str(text).map_err(|e| AppError::Parse(format!("scenario: {e}")))
}

pub fn load_scenario(path: &Path) -> Result<ScenarioSpec, AppError> {
    load_scenario_str(&std::fs::read_to_string(path)?)
}

pub fn serialize_scenario(spec: &ScenarioSpec) -> String {
    toml::to_string(spec).expect("scenario serializes")
}

macro_rules! builtin {
    ($($name:literal),+ $(,)?) => {
        &[$( ($name, include_str!(concat!("../scenarios/", $name, ".toml"))) ),+]
    };
}

pub const BUILTIN_SOURCES: &[(&str, &str)] = builtin![
    "ex3_2_s8",
    "ex3_3_go8",
    "thm3_6_a2",
    "thm3_6_s8",
    "thm3_6_go8_order4",
    "ex4_1_sl4_3",
    "ex4_2_go8_3",
    "ex4_3_go8_3",
    "lemma4_4_growth",
    "thm5_1_borel",
    "thm1_4_sl2_3",
    "thm1_4_sl3_2",
    "thm1_4_sp4_2",
    "thm1_4_sp4_3",
    "thm1_4_go6_2",
    "prop6_1_go4_q2",
    "prop6_1_go6_q2",
    "prop6_1_go4_q3",
    "prop6_1_go6_q3",
    "prop6_7_sp4_2",
    "prop6_7_sp6_2",
    "prop6_7_sp8_2",
    "prop6_8_so5_3",
    "prop6_8_so7_3",
    "table1_census",
    "prop6_2_g2_in_d4",
    "lemma7_5_triality",
    "ex7_6_triality",
    "thm3_6_so8_3",
];

pub fn builtin_catalog() -> Vec<ScenarioSpec> {
    BUILTIN_SOURCES
        .iter()
        .map(|(name, text)| {
            let spec = load_scenario_str(text)
                .unwrap_or_else(|e| panic!("builtin scenario {name}: {e}"));
            assert_eq!(&spec.id, name, "builtin scenario id must match file name");
            spec
        })
        .collect()
}

pub fn builtin(id: &str) -> Option<ScenarioSpec> {
    BUILTIN_SOURCES
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, text)| load_scenario_str(text).expect("builtin parses"))
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub cap_class: usize,
    pub cap_total: usize,
    pub memory_cap: usize,
    pub threads: usize,
    pub data_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub base_url: Option<String>,
    pub oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            cap_class: 5_000_000,
            cap_total: 20_000_000,
            memory_cap: usize::MAX,
            threads: 1,
            data_dir: PathBuf::from("data"),
            cache_dir: None,
            base_url: None,
            oracle: false,
        }
    }
}

impl RunOptions {
    pub fn caps(&self) -> Caps {
        Caps {
            cap_class: self.cap_class,
            cap_total: self.cap_total,
            memory_cap: self.memory_cap,
            threads: self.threads,
        }
    }
}

/// The group a scenario runs in: a built-in constructor or ingested data.
enum Ctx {
    Builtin(GroupHandle),
    Ingested { group: BsgsGroup, p: u8 },
}

impl Ctx {
    fn group(&self) -> &BsgsGroup {
        match self {
            Ctx::Builtin(h) => &h.inner.group,
            Ctx::Ingested { group, .. } => group,
        }
    }

    fn p(&self) -> u8 {
        match self {
            Ctx::Builtin(h) => h.p(),
            Ctx::Ingested { p, .. } => *p,
        }
    }

    fn handle(&self) -> Result<&GroupHandle, AppError> {
        match self {
            Ctx::Builtin(h) => Ok(h),
            Ctx::Ingested { .. } => {
                Err(AppError::Parse("check needs a built-in group".into()))
            }
        }
    }
}

struct Runner<'a> {
    spec: &'a ScenarioSpec,
    opts: &'a RunOptions,
    ctx: Ctx,
    perms: HashMap<String, Perm>,
    classes: HashMap<String, ClassHandle>,
}

pub fn run_scenario(spec: &ScenarioSpec, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let mut checks: Vec<CheckReport> = Vec::new();
    let outcome = match run_inner(spec, opts, &mut checks) {
        Ok(o) => o,
        Err(e) => {
            checks.push(CheckReport {
                kind: "setup".into(),
                expected: "scenario executes".into(),
                actual: e.to_string(),
                witness: None,
                pass: false,
            });
            Outcome::Fail
        }
    };
    Report {
        id: spec.id.clone(),
        outcome,
        checks,
        wall_ms: start.elapsed().as_millis() as u64,
        seed: opts.seed,
        caps: opts.caps(),
    }
}

fn run_inner(
    spec: &ScenarioSpec,
    opts: &RunOptions,
    checks: &mut Vec<CheckReport>,
) -> Result<Outcome, AppError> {
    // gating first: a scenario whose data files are absent is SKIPPED
    let mut gated_paths: HashMap<String, PathBuf> = HashMap::new();
    let cache_dir = opts
        .cache_dir
        .clone()
        .unwrap_or_else(|| std::env::temp_dir().join("classprod-cache"));
    for gf in &spec.gated {
        match ingest::fetch(
            &gf.file,
            &opts.data_dir,
            &cache_dir,
            opts.base_url.as_deref(),
            gf.sha256.as_deref(),
        )? {
            Fetched::File(p) => {
                gated_paths.insert(gf.file.clone(), p);
            }
            Fetched::Missing { .. } => return Ok(Outcome::Skipped),
        }
    }

    let ctx = build_ctx(spec, opts, &gated_paths)?;
    let mut runner = Runner {
        spec,
        opts,
        ctx,
        perms: HashMap::new(),
        classes: HashMap::new(),
    };
    // SLP-defined elements need the gated file table
    runner.bind_slp_elements(&gated_paths)?;

    let mut warned = false;
    for check in &spec.checks {
        let report = runner.run_check(check).unwrap_or_else(|e| CheckReport {
            kind: check.kind.clone(),
            expected: "check executes".into(),
            actual: e.to_string(),
            witness: None,
            pass: false,
        });
        if !report.pass
            && check.warn_on_split == Some(1)
            && report.kind.starts_with("orbit")
        {
            // Lemma 7.5 policy: the recorded counts are over the algebraic
            // closure; rational splitting is a warning, not a failure
            warned = true;
            checks.push(CheckReport {
                pass: true,
                actual: format!("{} (rational splitting tolerated)", report.actual),
                ..report
            });
            continue;
        }
        checks.push(report);
    }
    if checks.iter().any(|c| !c.pass) {
        Ok(Outcome::Fail)
    } else if warned {
        Ok(Outcome::Warn)
    } else {
        Ok(Outcome::Pass)
    }
}

fn build_ctx(
    spec: &ScenarioSpec,
    opts: &RunOptions,
    gated: &HashMap<String, PathBuf>,
) -> Result<Ctx, AppError> {
    let g = &spec.group;
    if g.source.as_deref() == Some("file") {
        let file = g
            .file
            .as_ref()
            .ok_or_else(|| AppError::Parse("file-sourced group needs 'file'".into()))?;
        let path = gated
            .get(file)
            .ok_or_else(|| AppError::Parse(format!("group file '{file}' not gated")))?;
        let text = std::fs::read_to_string(path)?;
        let gens = match g.format.as_deref().unwrap_or("images") {
            "images" => ingest::parse_images(&text)?,
            "cycles" => ingest::parse_cycles(&text)?,
            other => return Err(AppError::Parse(format!("unknown format '{other}'"))),
        };
        let order = g
            .order
            .as_ref()
            .map(|s| s.parse::<u128>().map_err(|_| AppError::Parse("bad order".into())))
            .transpose()?;
        let group = BsgsGroup::build(&gens, order, opts.seed)?;
        return Ok(Ctx::Ingested {
            group,
            p: g.p.unwrap_or(2),
        });
    }
    let family = parse_family(
        g.family
            .as_deref()
            .ok_or_else(|| AppError::Parse("group section needs 'family'".into()))?,
    )?;
    let n = g.n.ok_or_else(|| AppError::Parse("group section needs 'n'".into()))?;
    let q = g.q.ok_or_else(|| AppError::Parse("group section needs 'q'".into()))?;
    let gspec = GroupSpec::new(family, n, q, default_action(family));
    let inner = cache::build_group(gspec, opts.seed, opts.memory_cap, opts.cache_dir.as_deref())?;
    Ok(Ctx::Builtin(GroupHandle::new(
        crate::handle::spec_name(&gspec),
        inner,
    )))
}

impl Runner<'_> {
    fn bind_slp_elements(&mut self, gated: &HashMap<String, PathBuf>) -> Result<(), AppError> {
        for (name, espec) in &self.spec.elements {
            if espec.kind != "slp" {
                continue;
            }
            let file = espec
                .file
                .as_ref()
                .ok_or_else(|| AppError::Parse(format!("element {name} needs 'file'")))?;
            let path = gated
                .get(file)
                .ok_or_else(|| AppError::Parse(format!("SLP file '{file}' not gated")))?;
            let prog = ingest::parse_slp(&std::fs::read_to_string(path)?)?;
            let outs = ingest::eval_slp(&prog, self.ctx.group().generators())?;
            let perm = outs
                .into_iter()
                .next()
                .ok_or_else(|| AppError::Parse("SLP produced no output".into()))?;
            self.perms.insert(name.clone(), perm);
        }
        Ok(())
    }

    fn elem_spec(&self, name: &str) -> Result<&ElementSpec, AppError> {
        self.spec.elements.get(name).ok_or_else(|| {
            AppError::Scenario(self.spec.id.clone(), format!("undefined element '{name}'"))
        })
    }

    fn perm(&mut self, name: &str) -> Result<Perm, AppError> {
        if let Some(p) = self.perms.get(name) {
            return Ok(p.clone());
        }
        let espec = self.elem_spec(name)?.clone();
        let params = ElemParams {
            a: espec.a,
            k: espec.k,
            partition: espec.partition.clone(),
            eigenvalues: espec.eigenvalues.clone(),
            order: espec.order,
            size: espec.size,
        };
        let p = self.ctx.handle()?.element_perm(&espec.kind, &params)?;
        self.perms.insert(name.to_string(), p.clone());
        Ok(p)
    }

    fn class(&mut self, name: &str) -> Result<&ClassHandle, AppError> {
        if !self.classes.contains_key(name) {
            let rep = self.perm(name)?;
            let handle =
                enumerate_class(self.ctx.group(), &rep, self.opts.cap_class, self.opts.seed)?;
            self.classes.insert(name.to_string(), handle);
        }
        Ok(&self.classes[name])
    }

    fn run_check(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        match ck.kind.as_str() {
            "product_orders_subset" => self.ck_product_orders(ck),
            "all_p_elements" => self.ck_all_p_elements(ck),
            "contains_non_p_element" => self.ck_contains_non_p(ck),
            "orbit_count_eq" => self.ck_orbit_count(ck),
            "orbit_lengths_eq" => self.ck_orbit_lengths(ck),
            "class_rows_leq" => self.ck_class_rows(ck),
            "common_flag_for_all_witnesses" => self.ck_common_flag(ck),
            "jordan_census_eq" => self.ck_jordan_census(ck),
            "class_count_monotone_in_q" => self.ck_monotone(ck),
            other => Err(AppError::Scenario(
                self.spec.id.clone(),
                format!("unknown check kind '{other}'"),
            )),
        }
    }

    /// Orders of all pairwise products of two named matrix sets lie in the
    /// given set. The sweep sets are chosen so every relevant class pair is
    /// covered (order of x·y is an invariant of the class pair).
    fn ck_product_orders(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let c = need(&ck.c, "c")?;
        let d = need(&ck.d, "d")?;
        let orders = ck.orders.clone().unwrap_or_default();
        let cs = self.ctx.handle()?.element_set(c)?;
        let ds = self.ctx.handle()?.element_set(d)?;
        let mut bad: Option<(u64, &Mat, &Mat)> = None;
        let mut total = 0usize;
        'outer: for x in &cs {
            for y in &ds {
                total += 1;
                let o = x.mul(y).order();
                if !orders.contains(&o) {
                    bad = Some((o, x, y));
                    break 'outer;
                }
            }
        }
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("orders of {}x{} products within {:?}", cs.len(), ds.len(), orders),
            actual: match &bad {
                None => format!("all {total} products conform"),
                Some((o, _, _)) => format!("product of order {o} found"),
            },
            witness: bad.map(|(o, x, y)| format!("|x*y| = {o}, x = {:?}, y = {:?}", x.entries(), y.entries())),
            pass: bad.is_none(),
        })
    }

    /// Every product (fixed c-representative) x (full d-class) is a p-element.
    fn ck_all_p_elements(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let p = ck.p.unwrap_or_else(|| self.ctx.p());
        let x = self.perm(need(&ck.c, "c")?)?;
        let dname = need(&ck.d, "d")?.to_string();
        self.class(&dname)?;
        let group = self.ctx.group();
        let d = &self.classes[&dname];
        let mut bad: Option<u64> = None;
        for i in 0..d.size() {
            let y = d.element_at(group, i)?;
            let prod = x.compose(&y);
            if !is_p_element(&prod, p) {
                bad = Some(prod.order());
                break;
            }
        }
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("all {} products are {p}-elements", d.size()),
            actual: match bad {
                None => "all products conform".into(),
                Some(o) => format!("product of order {o}"),
            },
            witness: bad.map(|o| format!("|x*y| = {o}")),
            pass: bad.is_none(),
        })
    }

    fn ck_contains_non_p(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let p = ck.p.unwrap_or_else(|| self.ctx.p());
        match need(&ck.scope, "scope")? {
            "inner_x_outer_p_classes" => self.sweep_inner_outer(ck, p),
            "sylow_order4_inner_x_transvections" => self.sweep_sylow_order4(ck, p),
            "noncentral_p_classes_commutator" => self.sweep_commutators(ck, p),
            other => Err(AppError::Scenario(
                self.spec.id.clone(),
                format!("unknown scope '{other}'"),
            )),
        }
    }

    /// Dual-extension handles: every (inner nontrivial p-class, outer p-class)
    /// pair must meet a non-p class in its product — except the listed
    /// (inner size, outer size) pairs, whose products must all be p-elements.
    fn sweep_inner_outer(&mut self, ck: &CheckSpec, p: u8) -> Result<CheckReport, AppError> {
        let handle = self.ctx.handle()?;
        let inner_block = handle.inner.table.vectors.len() as u16;
        let group = self.ctx.group();
        let classes = all_classes_brute(group.generators(), 100_000)?;
        let exceptions: Vec<(usize, usize)> = ck
            .exception_sizes
            .clone()
            .unwrap_or_default()
            .chunks(2)
            .map(|c| (c[0], c[1]))
            .collect();
        let is_p = |g: &Perm| is_p_element(g, p);
        let mut pairs = 0usize;
        let mut violation: Option<String> = None;
        for (ri, si) in classes.iter().filter(|(r, _)| !r.is_identity() && is_p(r) && r.apply(0) < inner_block) {
            for (ro, so) in classes.iter().filter(|(r, _)| is_p(r) && r.apply(0) >= inner_block) {
                pairs += 1;
                let co = enumerate_class(group, ro, self.opts.cap_class, self.opts.seed)?;
                let mut non_p = None;
                for i in 0..co.size() {
                    let prod = ri.compose(&co.element_at(group, i)?);
                    if !is_p(&prod) {
                        non_p = Some(prod.order());
                        break;
                    }
                }
                let exempt = exceptions.contains(&(*si, *so));
                match (non_p, exempt) {
                    (None, false) => {
                        violation = Some(format!(
                            "unexpected all-{p} pair: inner (order {}, size {si}) x outer (order {}, size {so})",
                            ri.order(), ro.order()
                        ));
                    }
                    (Some(o), true) => {
                        violation = Some(format!(
                            "exempt pair (sizes {si}, {so}) produced a non-{p}-element of order {o}"
                        ));
                    }
                    _ => {}
                }
                if violation.is_some() {
                    break;
                }
            }
            if violation.is_some() {
                break;
            }
        }
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!(
                "every inner x outer {p}-class pair meets a non-{p} class (exceptions: {exceptions:?})"
            ),
            actual: match &violation {
                None => format!("{pairs} pairs conform"),
                Some(v) => v.clone(),
            },
            witness: violation.clone(),
            pass: violation.is_none(),
        })
    }

    /// Every order-4 element of the Sylow 2-subgroup with trivial Dickson
    /// invariant has some transvection product of non-2-power order. The
    /// Sylow meets every 2-element class, so this covers every inner order-4
    /// class paired with the (outer) transvections.
    fn sweep_sylow_order4(&mut self, ck: &CheckSpec, p: u8) -> Result<CheckReport, AppError> {
        let handle = self.ctx.handle()?;
        let xs = handle.element_set("sylow_order4_inner")?;
        let ts = handle.element_set("transvections")?;
        let mut stuck: Option<&Mat> = None;
        for m in &xs {
            let ok = ts.iter().any(|t| {
                let o = m.mul(t).order();
                !o.is_power_of_two()
            });
            if !ok {
                stuck = Some(m);
                break;
            }
        }
        let _ = p;
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("each of {} order-4 inner elements has a non-2-power product with some of {} transvections", xs.len(), ts.len()),
            actual: match stuck {
                None => "all conform".into(),
                Some(_) => "element with only 2-power products".into(),
            },
            witness: stuck.map(|m| format!("x = {:?}", m.entries())),
            pass: stuck.is_none(),
        })
    }

    /// Every noncentral p-element class C has a non-p element in [C, C].
    fn sweep_commutators(&mut self, ck: &CheckSpec, p: u8) -> Result<CheckReport, AppError> {
        let group = self.ctx.group();
        let classes = all_classes_brute(group.generators(), 100_000)?;
        let mut checked = 0usize;
        let mut stuck: Option<(u64, usize)> = None;
        for (rep, size) in &classes {
            if *size <= 1 || rep.is_identity() || !is_p_element(rep, p) {
                continue;
            }
            checked += 1;
            let c = enumerate_class(group, rep, self.opts.cap_class, self.opts.seed)?;
            let mut found = false;
            for i in 0..c.size() {
                let y = c.element_at(group, i)?;
                if !is_p_element(&rep.commutator(&y), p) {
                    found = true;
                    break;
                }
            }
            if !found {
                stuck = Some((rep.order(), *size));
                break;
            }
        }
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("[C,C] meets a non-{p} class for every noncentral {p}-class"),
            actual: match stuck {
                None => format!("{checked} classes conform"),
                Some((o, s)) => format!("class (order {o}, size {s}) has all-{p} commutators"),
            },
            witness: stuck.map(|(o, s)| format!("class order {o}, size {s}")),
            pass: stuck.is_none(),
        })
    }

    /// Orbit count of C_G(x) on the class of d = orbit count of G on
    /// x^G x d^G.
    fn ck_orbit_count(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let expected = need_num(ck.expected, "expected")?;
        let xname = need(&ck.x, "x")?.to_string();
        let dname = need(&ck.d, "d")?.to_string();
        self.class(&xname)?;
        self.class(&dname)?;
        let group = self.ctx.group();
        let cx = &self.classes[&xname];
        let cd = &self.classes[&dname];
        let mut lens = cx.centralizer_orbits_on(group, cd)?;
        lens.sort_unstable();
        let pass = lens.len() == expected
            && ck.lengths.as_ref().map_or(true, |want| {
                let mut want = want.clone();
                want.sort_unstable();
                want == lens
            });
        let oracle_note = if self.opts.oracle && group.order() <= 5000 {
            let brute = self.oracle_orbit_count(cx, cd)?;
            format!(" (oracle: {brute})")
        } else {
            String::new()
        };
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("{expected} orbits"),
            actual: format!("{} orbits, lengths {:?}{}", lens.len(), lens, oracle_note),
            witness: None,
            pass,
        })
    }

    /// Brute-force oracle: orbits of G on x^G x d^G by direct closure.
    fn oracle_orbit_count(&self, cx: &ClassHandle, cd: &ClassHandle) -> Result<usize, AppError> {
        let group = self.ctx.group();
        let mut pairs: std::collections::HashSet<(Perm, Perm)> = Default::default();
        let mut count = 0usize;
        for i in 0..cx.size() {
            let x = cx.element_at(group, i)?;
            for j in 0..cd.size() {
                let y = cd.element_at(group, j)?;
                if pairs.contains(&(x.clone(), y.clone())) {
                    continue;
                }
                count += 1;
                let mut frontier = vec![(x.clone(), y.clone())];
                pairs.insert((x.clone(), y.clone()));
                while let Some((a, b)) = frontier.pop() {
                    for g in group.generators() {
                        let next = (a.conjugate_by(g), b.conjugate_by(g));
                        if pairs.insert(next.clone()) {
                            frontier.push(next);
                        }
                    }
                }
            }
        }
        Ok(count)
    }

    fn ck_orbit_lengths(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let expected = ck.lengths.clone().unwrap_or_default();
        let xname = need(&ck.x, "x")?.to_string();
        let x = self.perm(&xname)?;
        let conformal = ck.acting.as_deref() == Some("conformal");

        // centralizer generators of x in the acting group, closed under inverse
        let acting: BsgsGroup;
        let cx_tmp;
        let cx: &ClassHandle = if conformal {
            acting = self.ctx.handle()?.inner.conformal_extension(self.opts.seed)?;
            cx_tmp = enumerate_class(&acting, &x, self.opts.cap_class, self.opts.seed)?;
            &cx_tmp
        } else {
            self.class(&xname)?;
            &self.classes[&xname]
        };
        let mut gens: Vec<Perm> = Vec::new();
        for g in cx.centralizer.generators() {
            gens.push(g.inverse());
            gens.push(g.clone());
        }

        let actual = self.resolve_set_lengths(need(&ck.set, "set")?, &gens)?;
        let pass = if ck.sublist == Some(1) {
            embeds(&expected, &actual)
        } else {
            actual == expected
        };
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("{expected:?}{}", if ck.sublist == Some(1) { " (sublist)" } else { "" }),
            actual: format!("{actual:?}"),
            witness: None,
            pass,
        })
    }

    fn resolve_set_lengths(&self, set: &str, gens: &[Perm]) -> Result<Vec<usize>, AppError> {
        if set == "points" {
            let all: Vec<u16> = (0..self.ctx.group().degree() as u16).collect();
            return Ok(classprod_core::bsgs::orbit_lengths_on_set(gens, &all)?);
        }
        let handle = self.ctx.handle()?;
        let table = &handle.inner.table;
        let form = handle
            .inner
            .form
            .as_ref()
            .ok_or_else(|| AppError::Parse(format!("set '{set}' needs a form")))?;
        match set {
            "nonzero_vectors" => {
                let all: Vec<u16> = (0..table.degree as u16).collect();
                Ok(classprod_core::bsgs::orbit_lengths_on_set(gens, &all)?)
            }
            "nonsingular_points" => {
                if handle.p() == 2 {
                    let pts: Vec<u16> = table
                        .vectors
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| form.q_value(v) != 0)
                        .map(|(i, _)| i as u16)
                        .collect();
                    Ok(classprod_core::bsgs::orbit_lengths_on_set(gens, &pts)?)
                } else {
                    // odd q, vector action: count orbits on 1-spaces
                    let proj = table.one_space_projection();
                    let reps: Vec<u32> = table
                        .vectors
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| form.q_value(v) != 0)
                        .map(|(i, _)| proj[i])
                        .collect::<std::collections::BTreeSet<_>>()
                        .into_iter()
                        .collect();
                    Ok(orbit_lengths_projective(gens, &proj, &reps))
                }
            }
            "nondegenerate_one_spaces_norm1" | "nondegenerate_one_spaces_norm2" => {
                if table.kind != Action::PointsProjective {
                    return Err(AppError::Parse("norm-class set needs a projective action".into()));
                }
                let norm = if set.ends_with('1') { 1 } else { 2 };
                let pts: Vec<u16> = table
                    .vectors
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| form.q_value(v) == norm)
                    .map(|(i, _)| i as u16)
                    .collect();
                Ok(classprod_core::bsgs::orbit_lengths_on_set(gens, &pts)?)
            }
            other => Err(AppError::Parse(format!("unknown set '{other}'"))),
        }
    }

    /// Decomposition-shaped bounds: the (mapped) products of a fixed
    /// c-representative with the d-class meet at most `max` classes.
    fn ck_class_rows(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let max = need_num(ck.max, "max")?;
        let cname = need(&ck.c, "c")?.to_string();
        let dname = need(&ck.d, "d")?.to_string();
        let map = ck.map.as_deref().unwrap_or("product");
        // the semisimple-part map only needs a representative of c
        let x_rep = self.perm(&cname)?;
        if map != "semisimple_part" {
            self.class(&cname)?;
        }
        self.class(&dname)?;
        let expect_rep = ck
            .expect_class_of
            .as_ref()
            .map(|e| self.perm(e))
            .transpose()?;
        let group = self.ctx.group();
        let d = &self.classes[&dname];

        let (nrows, row_desc, rows_ok_vs_expect) = match map {
            "product" | "commutator" => {
                let c = &self.classes[&cname];
                let dec = if map == "product" {
                    class_product_decompose(group, c, d, self.opts.cap_class, self.opts.cap_total, self.opts.seed)?
                } else {
                    commutator_decompose(group, c, d, self.opts.cap_class, self.opts.cap_total, self.opts.seed)?
                };
                debug_assert_eq!(dec.rows.iter().map(|r| r.multiplicity).sum::<usize>(), dec.total);
                let desc: Vec<String> = dec
                    .sorted_rows()
                    .iter()
                    .map(|r| format!("(order {}, size {}, mult {})", r.fingerprint.order, r.class_size, r.multiplicity))
                    .collect();
                let expect_ok = match &expect_rep {
                    None => true,
                    Some(target) => dec.rows.iter().all(|r| {
                        are_conjugate(group, &r.rep, target, self.opts.cap_class, self.opts.seed)
                            .map(|w| w.is_some())
                            .unwrap_or(false)
                    }),
                };
                (dec.rows.len(), desc.join(", "), expect_ok)
            }
            "semisimple_part" => {
                let p = ck.p.unwrap_or_else(|| self.ctx.p());
                let mut parts: hashbrown::HashSet<Perm> = Default::default();
                for i in 0..d.size() {
                    let y = d.element_at(group, i)?;
                    parts.insert(semisimple_part(&x_rep.compose(&y), p));
                }
                let rows = decompose_into_classes(group.generators(), &parts);
                let expect_ok = match &expect_rep {
                    None => true,
                    Some(target) => rows.iter().all(|(rep, _)| {
                        are_conjugate(group, rep, target, self.opts.cap_class, self.opts.seed)
                            .map(|w| w.is_some())
                            .unwrap_or(false)
                    }),
                };
                let desc: Vec<String> = rows
                    .iter()
                    .map(|(rep, sz)| format!("(order {}, size {sz})", rep.order()))
                    .collect();
                (rows.len(), desc.join(", "), expect_ok)
            }
            other => {
                return Err(AppError::Parse(format!("unknown map '{other}'")));
            }
        };
        let pass = nrows <= max && rows_ok_vs_expect;
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!(
                "at most {max} classes{}",
                ck.expect_class_of.as_deref().map(|e| format!(", all equal to class of '{e}'")).unwrap_or_default()
            ),
            actual: format!("{nrows} classes: {row_desc}"),
            witness: (!pass).then(|| row_desc.clone()),
            pass,
        })
    }

    /// Exhaustive over all pairs (x, y) in a small matrix group: whenever
    /// [x, y] is a transvection, x and y stabilize a common complete flag
    /// (rationally, or after extending to the closure).
    fn ck_common_flag(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let handle = self.ctx.handle()?;
        let spec = handle.inner.spec;
        let over_closure = ck.field.as_deref().unwrap_or("closure") == "closure";
        let all = mat_group_closure(&handle.inner.mat_gens, 100_000)
            .or_else(|_| crate::handle::sl_elements(spec.q, spec.n, 100_000))?;
        let mut transvection_jordan = vec![1usize; spec.n - 1];
        transvection_jordan[0] = 2;
        let mut pairs = 0usize;
        let mut bad = 0usize;
        let mut sample: Option<String> = None;
        for x in &all {
            for y in &all {
                let comm = x
                    .inverse()?
                    .mul(&y.inverse()?)
                    .mul(x)
                    .mul(y);
                if jordan_type(&comm).map(|j| j == transvection_jordan) != Ok(true) {
                    continue;
                }
                pairs += 1;
                let ok = if over_closure {
                    triangularizable_over_closure(x, y)
                } else {
                    common_flag_exists(&[x.clone(), y.clone()]).is_some()
                };
                if !ok {
                    bad += 1;
                    if sample.is_none() {
                        sample = Some(format!("x = {:?}, y = {:?}", x.entries(), y.entries()));
                    }
                }
            }
        }
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!(
                "common flag ({}) for every pair with transvection commutator",
                if over_closure { "over the closure" } else { "rational" }
            ),
            actual: format!("{bad} of {pairs} qualifying pairs lack one"),
            witness: sample,
            pass: bad == 0,
        })
    }

    /// The set of Jordan partitions of the nontrivial 2-elements in the outer
    /// (Dickson 1) coset, harvested from a Sylow 2-subgroup.
    fn ck_jordan_census(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let expected: std::collections::BTreeSet<String> =
            ck.partitions.clone().unwrap_or_default().into_iter().collect();
        let handle = self.ctx.handle()?;
        let outer = handle.element_set("sylow_outer_two_elements")?;
        let mut actual: std::collections::BTreeSet<String> = Default::default();
        for m in &outer {
            actual.insert(partition_string(&jordan_type(m)?));
        }
        let pass = actual == expected;
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?} ({} outer 2-elements)", outer.len()),
            witness: None,
            pass,
        })
    }

    /// Lemma 4.4 proxy: in SL2(q) wr 2, the classes met by C1*C2 for
    /// C1 = ((u,u)), C2 = the swap class, counted via the reduction
    /// (a,1)s ~ classes of SL2(q) met by u^SL2 * u^SL2 — strictly move up
    /// with q. The reduction is cross-validated against the full wreath
    /// product at small q in the test suite.
    fn ck_monotone(&mut self, ck: &CheckSpec) -> Result<CheckReport, AppError> {
        let qs = ck.qs.clone().unwrap_or_default();
        let expected = ck.counts.clone().unwrap_or_default();
        let mut actual = Vec::new();
        for &q in &qs {
            actual.push(wreath_met_classes_reduced(q)?);
        }
        let monotone = actual.windows(2).all(|w| w[0] < w[1]);
        let pass = monotone && (expected.is_empty() || actual == expected);
        Ok(CheckReport {
            kind: ck.kind.clone(),
            expected: format!("strictly increasing over q = {qs:?}{}", if expected.is_empty() { String::new() } else { format!(", counts {expected:?}") }),
            actual: format!("{actual:?}"),
            witness: None,
            pass,
        })
    }
}

/// Classes of SL2(q) met by u^G * u^G for u the standard transvection; equals
/// the number of wreath classes met by C1*C2 (outer classes (a,b)s correspond
/// to SL2-classes of ab).
pub fn wreath_met_classes_reduced(q: u8) -> Result<usize, AppError> {
    let gens = classprod_core::classical::sl_gens(q, 2);
    let all = mat_group_closure(&gens, 1000)?;
    let mut u = Mat::identity(q, 2);
    u.set(0, 1, 1);
    let ucl = mat_conj_class(&gens, &u);
    // class id per element, by closure from unvisited representatives
    let mut class_of: HashMap<Mat, usize> = HashMap::new();
    let mut nclasses = 0usize;
    for m in &all {
        if class_of.contains_key(m) {
            continue;
        }
        for c in mat_conj_class(&gens, m) {
            class_of.insert(c, nclasses);
        }
        nclasses += 1;
    }
    let mut met: std::collections::BTreeSet<usize> = Default::default();
    for a in &ucl {
        for b in &ucl {
            met.insert(class_of[&a.mul(b)]);
        }
    }
    Ok(met.len())
}

fn mat_conj_class(gens: &[Mat], rep: &Mat) -> Vec<Mat> {
    let mut out = vec![rep.clone()];
    let mut seen: std::collections::HashSet<Mat> = out.iter().cloned().collect();
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for g in gens {
            let c = g.inverse().expect("generators invert").mul(&cur).mul(g);
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out
}

/// Does `expected` embed into `actual` as a multiset?
fn embeds(expected: &[usize], actual: &[usize]) -> bool {
    let mut pool = actual.to_vec();
    for e in expected {
        match pool.iter().position(|a| a == e) {
            Some(i) => {
                pool.remove(i);
            }
            None => return false,
        }
    }
    true
}

fn need<'a>(opt: &'a Option<String>, what: &str) -> Result<&'a str, AppError> {
    opt.as_deref()
        .ok_or_else(|| AppError::Parse(format!("check needs '{what}'")))
}

fn need_num(opt: Option<usize>, what: &str) -> Result<usize, AppError> {
    opt.ok_or_else(|| AppError::Parse(format!("check needs '{what}'")))
}
