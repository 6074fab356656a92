//! Group construction by name and elements by name: the bridge from CLI and
//! scenario vocabulary ("GOplus:8:2", "transvection", "alt_involution") to the
//! core constructors.

use classprod_core::classical::{FormKind, FormSpec};
use classprod_core::elements::{
    self, dickson_invariant, gl_centralizer_element, is_alternating_involution,
    mat_group_closure, orthogonal_transvection, reflection, sp_transvection, sylow2_go8_2,
};
use classprod_core::matrix::parse_partition;
use classprod_core::{Action, ClassicalGroup, Family, GroupSpec, Mat, Perm};

use crate::error::AppError;

pub fn default_action(family: Family) -> Action {
    match family {
        Family::SOOdd => Action::PointsProjective,
        Family::SLDualExt => Action::VectorsPlusCovectors,
        _ => Action::VectorsNonzero,
    }
}

/// Parse "GOplus:8:2"-style group names; "S8ext" and "PGL27ext" are aliases
/// for the dual extensions SL4(2).2 and SL3(2).2 on points + hyperplanes.
pub fn parse_group_spec(s: &str) -> Result<GroupSpec, AppError> {
    match s {
        "S8ext" => {
            return Ok(GroupSpec::new(Family::SLDualExt, 4, 2, Action::VectorsPlusCovectors))
        }
        "PGL27ext" => {
            return Ok(GroupSpec::new(Family::SLDualExt, 3, 2, Action::VectorsPlusCovectors))
        }
        _ => {}
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(AppError::Usage(format!(
            "group '{s}' not of the form FAMILY:n:q (families: SL, Sp, GOplus, GOminus, SOodd, SLext, WrSL2)"
        )));
    }
    let family = parse_family(parts[0])?;
    let n: usize = parts[1]
        .parse()
        .map_err(|_| AppError::Usage(format!("bad dimension in '{s}'")))?;
    let q: u8 = parts[2]
        .parse()
        .map_err(|_| AppError::Usage(format!("bad field size in '{s}'")))?;
    let action = match parts.get(3) {
        None => default_action(family),
        Some(&"vectors") => Action::VectorsNonzero,
        Some(&"points") => Action::PointsProjective,
        Some(other) => return Err(AppError::Usage(format!("unknown action '{other}'"))),
    };
    Ok(GroupSpec::new(family, n, q, action))
}

pub fn parse_family(s: &str) -> Result<Family, AppError> {
    Ok(match s {
        "SL" => Family::SL,
        "Sp" => Family::Sp,
        "GOplus" => Family::GOPlus,
        "GOminus" => Family::GOMinus,
        "SOodd" => Family::SOOdd,
        "SLext" => Family::SLDualExt,
        "WrSL2" => Family::WreathSL2,
        other => return Err(AppError::Usage(format!("unknown family '{other}'"))),
    })
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::SL => "SL",
        Family::Sp => "Sp",
        Family::GOPlus => "GOplus",
        Family::GOMinus => "GOminus",
        Family::SOOdd => "SOodd",
        Family::SLDualExt => "SLext",
        Family::WreathSL2 => "WrSL2",
    }
}

pub fn spec_name(spec: &GroupSpec) -> String {
    format!("{}:{}:{}", family_name(spec.family), spec.n, spec.q)
}

/// Integer-or-list parameters for element constructors.
#[derive(Debug, Clone, Default)]
pub struct ElemParams {
    pub a: Option<u8>,
    pub k: Option<usize>,
    pub partition: Option<String>,
    pub eigenvalues: Option<Vec<u64>>,
    pub order: Option<u64>,
    pub size: Option<usize>,
}

pub struct GroupHandle {
    pub name: String,
    pub inner: ClassicalGroup,
}

impl GroupHandle {
    pub fn new(name: String, inner: ClassicalGroup) -> Self {
        GroupHandle { name, inner }
    }

    pub fn p(&self) -> u8 {
        self.inner.spec.q
    }

    fn form(&self) -> Result<&FormSpec, AppError> {
        self.inner
            .form
            .as_ref()
            .ok_or_else(|| AppError::Usage(format!("{} carries no form", self.name)))
    }

    fn basis_norm1(&self) -> Vec<u8> {
        // e_1 + f_1 has norm 1 in every quadratic layout used here
        let n = self.inner.spec.n;
        let mut v = vec![0u8; n];
        v[0] = 1;
        v[n - 1] = 1;
        v
    }

    /// Named element as a matrix (errors for the purely permutation-side
    /// names like graph_automorphism).
    pub fn element_mat(&self, kind: &str, params: &ElemParams) -> Result<Mat, AppError> {
        let spec = self.inner.spec;
        let (p, n) = (spec.q, spec.n);
        let m = match kind {
            "identity" => Mat::identity(p, n),
            "transvection" => match spec.family {
                Family::SL | Family::SLDualExt => {
                    let mut t = Mat::identity(p, n);
                    t.set(0, n - 1, 1);
                    t
                }
                Family::Sp => {
                    let mut e = vec![0u8; n];
                    e[0] = 1;
                    sp_transvection(self.form()?, &e, 1)
                }
                _ => orthogonal_transvection(self.form()?, &self.basis_norm1())?,
            },
            "reflection" => reflection(self.form()?, &self.basis_norm1())?,
            "long_root" => {
                elements::long_root_element(p, n, self.inner.form.as_ref())?
            }
            "pseudoreflection" => {
                let a = params.a.unwrap_or(if p > 2 { 2 } else { 1 });
                elements::pseudoreflection(p, n, a)
            }
            "alt_involution" => {
                elements::involution_alternating(self.form()?, params.k.unwrap_or(2))?
            }
            "gl_centralizer_involution" => gl_centralizer_element(self.form()?)?,
            "unipotent_jordan" => {
                let s = params
                    .partition
                    .as_deref()
                    .ok_or_else(|| AppError::Usage("unipotent_jordan needs partition".into()))?;
                elements::unipotent_by_jordan(p, n, self.inner.form.as_ref(), &parse_partition(s)?)?
            }
            "semisimple_eigenvalues" => {
                let eigs = params
                    .eigenvalues
                    .as_deref()
                    .ok_or_else(|| AppError::Usage("semisimple_eigenvalues needs eigenvalues".into()))?;
                elements::semisimple_by_eigenvalues(p, n, self.inner.form.as_ref(), eigs)?
            }
            "wreath_double_transvection" => {
                // (u, u) with u the standard transvection, diagonal in the base
                let mut u = Mat::identity(p, 2);
                u.set(0, 1, 1);
                classprod_core::classical::embed_block(&u, 0)
                    .mul(&classprod_core::classical::embed_block(&u, 2))
            }
            "block_swap" => classprod_core::classical::block_swap(p),
            other => {
                return Err(AppError::Usage(format!("unknown matrix element kind '{other}'")))
            }
        };
        Ok(m)
    }

    /// Named element as a permutation of the group's action.
    pub fn element_perm(&self, kind: &str, params: &ElemParams) -> Result<Perm, AppError> {
        match kind {
            "graph_automorphism" => self
                .inner
                .outer_rep
                .clone()
                .ok_or_else(|| AppError::Usage(format!("{} has no outer coset", self.name))),
            "outer_class_rep" => self.outer_class_rep(params),
            _ => Ok(self.inner.perm_of(&self.element_mat(kind, params)?)?),
        }
    }

    /// Brute-force search for the outer class of given element order and
    /// class size (small dual-extension handles only).
    fn outer_class_rep(&self, params: &ElemParams) -> Result<Perm, AppError> {
        let order = params
            .order
            .ok_or_else(|| AppError::Usage("outer_class_rep needs order".into()))?;
        let size = params
            .size
            .ok_or_else(|| AppError::Usage("outer_class_rep needs size".into()))?;
        let classes =
            classprod_core::classes::all_classes_brute(self.inner.group.generators(), 100_000)?;
        let inner_block = self.inner.table.vectors.len() as u16;
        let mut hits: Vec<Perm> = classes
            .into_iter()
            .filter(|(rep, sz)| {
                rep.order() == order && *sz == size && rep.apply(0) >= inner_block
            })
            .map(|(rep, _)| rep)
            .collect();
        match hits.len() {
            1 => Ok(hits.pop().unwrap()),
            0 => Err(AppError::Usage(format!(
                "no outer class of order {order} and size {size} in {}",
                self.name
            ))),
            _ => Err(AppError::Usage(format!(
                "outer class (order {order}, size {size}) is not unique in {}",
                self.name
            ))),
        }
    }

    /// Named element sets, as matrices.
    pub fn element_set(&self, kind: &str) -> Result<Vec<Mat>, AppError> {
        let spec = self.inner.spec;
        let (p, n) = (spec.q, spec.n);
        match kind {
            "transvections" => {
                let f = self.form()?;
                if p != 2 {
                    return Err(AppError::Usage("transvection sets are for characteristic 2".into()));
                }
                let mut out = Vec::new();
                for code in 1u32..1 << n {
                    let v: Vec<u8> = (0..n).map(|i| ((code >> i) & 1) as u8).collect();
                    if f.q_value(&v) != 0 {
                        out.push(orthogonal_transvection(f, &v)?);
                    }
                }
                Ok(out)
            }
            // every 2-element class of GO8+(2) meets its Sylow 2-subgroup, so
            // these sweeps cover all classes of the named shape
            "sylow_alternating_involutions" => {
                let syl = self.sylow2()?;
                let f = self.form()?;
                Ok(syl
                    .into_iter()
                    .filter(|m| {
                        m.order() == 2
                            && m.add(&Mat::identity(p, n)).rank() >= 2
                            && is_alternating_involution(f, m)
                    })
                    .collect())
            }
            "sylow_order4_inner" => {
                let syl = self.sylow2()?;
                Ok(syl
                    .into_iter()
                    .filter(|m| m.order() == 4 && dickson_invariant(m) == 0)
                    .collect())
            }
            "sylow_outer_two_elements" => {
                let syl = self.sylow2()?;
                Ok(syl
                    .into_iter()
                    .filter(|m| !m.is_identity() && dickson_invariant(m) == 1)
                    .collect())
            }
            other => Err(AppError::Usage(format!("unknown element set '{other}'"))),
        }
    }

    fn sylow2(&self) -> Result<Vec<Mat>, AppError> {
        let f = self.form()?;
        if f.kind != FormKind::QuadraticPlus || f.p != 2 || f.n != 8 {
            return Err(AppError::Usage("Sylow sweeps are specific to GOplus:8:2".into()));
        }
        let gens = sylow2_go8_2(f)?;
        Ok(mat_group_closure(&gens, 1 << 14)?)
    }
}

/// All elements of SL_n(p) as matrices, by closure (small n, p only).
pub fn sl_elements(p: u8, n: usize, cap: usize) -> Result<Vec<Mat>, AppError> {
    Ok(mat_group_closure(&classprod_core::classical::sl_gens(p, n), cap)?)
}
