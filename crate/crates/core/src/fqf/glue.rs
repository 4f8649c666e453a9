//! Gluing along sign-reversing isometries, and the even 2-elementary
//! classification.

use std::collections::HashMap;
use std::fmt;

use super::subgroup::{orthogonal_subgroup, quotient_form, subgroup_span, FqfSubgroup, Subquotient};
use super::{Fqf, FqfElement, QMod2};
use crate::error::{Error, Result};

/// A sign-reversing isometry `γ: Γ_M → Γ_N` between subgroups of two forms.
#[derive(Clone, Debug)]
pub struct GlueMap {
    source: FqfSubgroup,
    target: FqfSubgroup,
    images: Vec<FqfElement>,
}

impl GlueMap {
    /// `images[i]` is the image of `source.generators()[i]`. The map is
    /// checked to be a well-defined group isomorphism onto `target` with
    /// `q_N(γx) = -q_M(x)` and `b_N(γx, γy) = -b_M(x, y)`.
    pub fn new(source: FqfSubgroup, target: FqfSubgroup, images: Vec<FqfElement>) -> Result<GlueMap> {
        let qm = source.parent().clone();
        let qn = target.parent().clone();
        if images.len() != source.generators().len() {
            return Err(Error::InvalidGlue("one image per source generator required".into()));
        }
        for y in &images {
            if !target.contains(y) {
                return Err(Error::InvalidGlue(format!(
                    "image {y} lies outside the target subgroup"
                )));
            }
        }
        // extend along the generators; a conflict means the map is not well defined
        let mut map: HashMap<FqfElement, FqfElement> = HashMap::new();
        map.insert(qm.zero(), qn.zero());
        let mut frontier = vec![qm.zero()];
        while let Some(x) = frontier.pop() {
            let fx = map[&x].clone();
            for (g, y) in source.generators().iter().zip(&images) {
                let x2 = qm.add(&x, g);
                let y2 = qn.add(&fx, y);
                match map.get(&x2) {
                    Some(prev) if *prev != y2 => {
                        return Err(Error::InvalidGlue("generator images violate a relation".into()))
                    }
                    Some(_) => {}
                    None => {
                        map.insert(x2.clone(), y2);
                        frontier.push(x2);
                    }
                }
            }
        }
        let mut image_set: Vec<&FqfElement> = map.values().collect();
        image_set.sort();
        image_set.dedup();
        if image_set.len() as u64 != target.order() || map.len() as u64 != source.order() {
            return Err(Error::InvalidGlue(
                "map is not a bijection onto the target subgroup".into(),
            ));
        }
        for (x, y) in &map {
            if qn.norm(y) != -qm.norm(x) {
                return Err(Error::InvalidGlue(format!("q_N(γ{x}) != -q_M({x})")));
            }
        }
        for (g, y) in source.generators().iter().zip(&images) {
            for (h, z) in source.generators().iter().zip(&images) {
                if qn.pairing(y, z) != -qm.pairing(g, h) {
                    return Err(Error::InvalidGlue("pairing is not reversed".into()));
                }
            }
        }
        Ok(GlueMap { source, target, images })
    }

    pub fn source(&self) -> &FqfSubgroup {
        &self.source
    }

    pub fn target(&self) -> &FqfSubgroup {
        &self.target
    }

    pub fn images(&self) -> &[FqfElement] {
        &self.images
    }
}

/// Output of [`glue`].
#[derive(Clone, Debug)]
pub struct GlueResult {
    /// The pushout `Γ = {(x, γx)}` inside `q_M ⊕ q_N`.
    pub gamma: FqfSubgroup,
    /// `Γ^⊥/Γ` with its induced form `q_S`.
    pub glued: Subquotient,
    /// Nonzero element of `Γ_N^⊥ ⊂ A_N` when that group has order 2.
    pub z_n: Option<FqfElement>,
    /// Image of `(0, z_N)` in `q_S` (the patching element).
    pub v_m: Option<FqfElement>,
}

impl GlueResult {
    pub fn form(&self) -> &Fqf {
        self.glued.form()
    }
}

/// Glues `q_M` and `q_N` along `γ`: returns `q_S = Γ^⊥/Γ` and, when
/// `#Γ_N^⊥ = 2`, the distinguished elements `z_N` and `v_M`.
pub fn glue(q_m: &Fqf, q_n: &Fqf, gamma: &GlueMap) -> Result<GlueResult> {
    if gamma.source.parent() != q_m || gamma.target.parent() != q_n {
        return Err(Error::InvalidGlue("glue map does not belong to these forms".into()));
    }
    let sum = Fqf::direct_sum(&[q_m, q_n]);
    let lift_m = |x: &FqfElement| {
        let mut c = x.coeffs().to_vec();
        c.extend(std::iter::repeat_n(0, q_n.rank()));
        sum.element(&c)
    };
    let lift_n = |y: &FqfElement| {
        let mut c = vec![0; q_m.rank()];
        c.extend_from_slice(y.coeffs());
        sum.element(&c)
    };
    let gens: Vec<FqfElement> = gamma
        .source
        .generators()
        .iter()
        .zip(&gamma.images)
        .map(|(x, y)| sum.add(&lift_m(x), &lift_n(y)))
        .collect();
    let big_gamma = subgroup_span(&sum, &gens)?;
    if !big_gamma.is_isotropic() {
        return Err(Error::NotIsotropic);
    }
    let glued = quotient_form(&sum, &big_gamma)?;

    let perp_n = orthogonal_subgroup(q_n, &gamma.target)?;
    let (z_n, v_m) = if perp_n.order() == 2 {
        let z = perp_n
            .elements()
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("order-2 group has a nonzero element");
        let v = glued
            .project(&lift_n(&z))
            .ok_or_else(|| Error::InvalidGlue("(0, z_N) is not orthogonal to Γ".into()))?;
        if v.is_zero() {
            return Err(Error::CheckFailed("patching element vanishes".into()));
        }
        (Some(z), Some(v))
    } else {
        (None, None)
    };
    Ok(GlueResult {
        gamma: big_gamma,
        glued,
        z_n,
        v_m,
    })
}

/// Isometry class of a nondegenerate even 2-elementary form:
/// `u(2)^a` or `v(2) ⊕ u(2)^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct TwoElementaryClass {
    pub u_count: usize,
    pub has_v: bool,
}

impl TwoElementaryClass {
    pub fn to_fqf(&self) -> Fqf {
        let u = Fqf::u2().power(self.u_count);
        if self.has_v {
            Fqf::direct_sum(&[&Fqf::v2(), &u])
        } else {
            u
        }
    }

    /// Rank of the underlying `F_2`-vector space.
    pub fn length(&self) -> usize {
        2 * self.u_count + if self.has_v { 2 } else { 0 }
    }
}

impl fmt::Display for TwoElementaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = match self.u_count {
            0 => String::new(),
            1 => "u(2)".to_string(),
            n => format!("u(2)^{n}"),
        };
        match (self.has_v, u.is_empty()) {
            (false, true) => write!(f, "0"),
            (false, false) => write!(f, "{u}"),
            (true, true) => write!(f, "v(2)"),
            (true, false) => write!(f, "v(2)+{u}"),
        }
    }
}

/// Classifies a nondegenerate even 2-elementary form by its length and the
/// number of norm-0 elements (`2^{2k-1} ± 2^{k-1}` for length `2k`).
pub fn two_elementary_classify(q: &Fqf) -> Result<TwoElementaryClass> {
    if !q.is_two_elementary() {
        return Err(Error::NotTwoElementaryEven(format!("group orders {:?}", q.orders())));
    }
    if let Some(v) = q.qdiag().iter().find(|v| !v.is_integral()) {
        return Err(Error::NotTwoElementaryEven(format!("odd type: generator norm {v}")));
    }
    if !q.is_nondegenerate() {
        return Err(Error::NotTwoElementaryEven("form is degenerate".into()));
    }
    let a = q.rank();
    if a == 0 {
        return Ok(TwoElementaryClass {
            u_count: 0,
            has_v: false,
        });
    }
    if !a.is_multiple_of(2) {
        return Err(Error::CheckFailed(format!(
            "nondegenerate even 2-elementary form of odd length {a}"
        )));
    }
    let k = a / 2;
    let zeros = q.count_elements(None, Some(QMod2::zero()))?;
    let big = 1u64 << (a - 1);
    let small = 1u64 << (k - 1);
    if zeros == big + small {
        Ok(TwoElementaryClass {
            u_count: k,
            has_v: false,
        })
    } else if zeros == big - small {
        Ok(TwoElementaryClass {
            u_count: k - 1,
            has_v: true,
        })
    } else {
        Err(Error::CheckFailed(format!(
            "{zeros} isotropic elements fits neither family"
        )))
    }
}
