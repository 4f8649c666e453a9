//! The generic Kummer surface of product type `Km(C1 × C2)`: the 24-curve
//! configuration, its `u(2)^2` discriminant structure, the `E8(2)`
//! complement glue arithmetic and the fifteen patching elements.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{complement_rows, kernel_basis, IntMatrix, RatMatrix};
use crate::fqf::{
    glue, is_isometric, orthogonal_subgroup, subgroup_span, two_elementary_classify, Fqf, FqfElement, GlueMap,
    GlueResult, QMod1, QMod2, Rat,
};
use crate::lattice::{big_vec, same_genus, short_vectors, Lattice};

/// Index of `E_k` (`k` in `1..=4`).
pub fn e_index(k: usize) -> usize {
    k - 1
}

/// Index of `F_k`.
pub fn f_index(k: usize) -> usize {
    4 + k - 1
}

/// Index of `G_ij`, the exceptional curve over `(b_i, c_j)`.
pub fn g_index(i: usize, j: usize) -> usize {
    8 + 4 * (i - 1) + (j - 1)
}

/// The 24 curves `E_1..E_4, F_1..F_4, G_11..G_44` with their intersection matrix.
#[derive(Clone, Debug)]
pub struct Configuration {
    labels: Vec<String>,
    gram: IntMatrix,
}

impl Configuration {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * BigRational::from_integer(self.gram.get(i, j).clone()) * yj;
                }
            }
        }
        acc
    }
}

/// `E_k` is the image of `C1 × {c_k}`, so it meets `G_ij` iff `j = k`;
/// `F_k` is the image of `{b_k} × C2`, so it meets `G_ij` iff `i = k`.
/// Distinct `E`'s, distinct `F`'s, `E` with `F`, and distinct `G`'s are
/// disjoint; every curve is a `(-2)`-curve.
pub fn double_kummer_gram() -> Result<Configuration> {
    let mut labels: Vec<String> = (1..=4).map(|k| format!("E{k}")).collect();
    labels.extend((1..=4).map(|k| format!("F{k}")));
    for i in 1..=4 {
        for j in 1..=4 {
            labels.push(format!("G{i}{j}"));
        }
    }
    let mut gram = IntMatrix::diagonal(&[-2; 24]);
    for i in 1..=4 {
        for j in 1..=4 {
            let g = g_index(i, j);
            for (a, b) in [(e_index(j), g), (f_index(i), g)] {
                gram.set(a, b, BigInt::one());
                gram.set(b, a, BigInt::one());
            }
        }
    }
    let c = Configuration { labels, gram };
    if c.rank() != 18 {
        return Err(Error::CheckFailed(format!(
            "configuration Gram has rank {}, expected 18",
            c.rank()
        )));
    }
    Ok(c)
}

/// Names of the half classes in the order returned by [`half_classes`].
pub const HALF_CLASS_NAMES: [&str; 4] = ["e1", "f1", "e2", "f2"];

/// `e1 = (G11+G13+G31+G33)/2`, `f1 = (G22+G23+G32+G33)/2`,
/// `e2 = (G21+G23+G31+G33)/2`, `f2 = (G12+G13+G32+G33)/2`.
pub fn half_classes() -> [Vec<BigRational>; 4] {
    let make = |cells: [(usize, usize); 4]| {
        let mut v = vec![BigRational::zero(); 24];
        for (i, j) in cells {
            v[g_index(i, j)] = BigRational::new(BigInt::one(), BigInt::from(2));
        }
        v
    };
    [
        make([(1, 1), (1, 3), (3, 1), (3, 3)]),
        make([(2, 2), (2, 3), (3, 2), (3, 3)]),
        make([(2, 1), (2, 3), (3, 1), (3, 3)]),
        make([(1, 2), (1, 3), (3, 2), (3, 3)]),
    ]
}

/// The form on `(Z/2)^4` spanned by the half classes, with `q` and `b`
/// read off their intersection numbers mod `2Z` and mod `Z`.
pub fn half_class_form(c: &Configuration) -> Result<Fqf> {
    let h = half_classes();
    let to_rat = |r: BigRational| -> Rat {
        use num_traits::ToPrimitive;
        Rat::new(r.numer().to_i64().expect("small"), r.denom().to_i64().expect("small"))
    };
    let qd = h.iter().map(|x| to_rat(c.pair(x, x))).collect();
    let bm = h
        .iter()
        .map(|x| h.iter().map(|y| to_rat(c.pair(x, y))).collect())
        .collect();
    Fqf::new(vec![2; 4], qd, bm)
}

/// The half classes pair integrally with every curve.
pub fn half_classes_in_dual(c: &Configuration) -> bool {
    half_classes().iter().all(|h| {
        (0..24).all(|i| {
            let mut unit = vec![BigRational::zero(); 24];
            unit[i] = BigRational::one();
            c.pair(h, &unit).is_integer()
        })
    })
}

/// `U ⊕ E8 ⊕ D4^2`.
pub fn ns_lattice() -> Lattice {
    Lattice::direct_sum(&[&Lattice::u(), &Lattice::e8(), &Lattice::d4().power(2)])
}

/// The curve lattice extended by the half sums `(1/2) Σ_{x ∈ H} G_x` over
/// the 30 affine hyperplanes `H` of `F_2^4 = C1[2] × C2[2]`, together with
/// the classes of the four half classes in its discriminant group.
#[derive(Clone, Debug)]
pub struct CurveOverlattice {
    pub lattice: Lattice,
    pub half_class_images: Vec<FqfElement>,
    pub form: Fqf,
}

/// Builds [`CurveOverlattice`]. Any bijection `{1,2,3,4} → F_2^2` is
/// affine, so the set of hyperplanes does not depend on the labeling.
pub fn curve_overlattice(c: &Configuration) -> Result<CurveOverlattice> {
    let point = |i: usize| [((i - 1) & 1) as u8, ((i - 1) >> 1) as u8];
    // generators, doubled so that all entries are integers
    let mut rows: Vec<Vec<BigInt>> = (0..24)
        .map(|i| {
            let mut v = vec![BigInt::zero(); 24];
            v[i] = BigInt::from(2);
            v
        })
        .collect();
    for functional in 1u8..16 {
        for constant in 0..2u8 {
            let mut v = vec![BigInt::zero(); 24];
            for i in 1..=4 {
                for j in 1..=4 {
                    let [x0, x1] = point(i);
                    let [x2, x3] = point(j);
                    let x = x0 | x1 << 1 | x2 << 2 | x3 << 3;
                    if (functional & x).count_ones() as u8 % 2 == constant {
                        v[g_index(i, j)] = BigInt::one();
                    }
                }
            }
            rows.push(v);
        }
    }
    let w = IntMatrix::from_big_rows(rows, 24);
    let h4 = w.mul(c.gram()).mul(&w.transpose());
    let four = BigInt::from(4);
    let mut h = IntMatrix::zeros(h4.rows(), h4.cols());
    for i in 0..h4.rows() {
        for j in 0..h4.cols() {
            if (h4.get(i, j) % &four) != BigInt::zero() {
                return Err(Error::CheckFailed("hyperplane half sums are not integral".into()));
            }
            h.set(i, j, h4.get(i, j) / &four);
        }
    }
    let kernel = IntMatrix::from_big_rows(kernel_basis(&h), h.cols());
    let basis = complement_rows(&kernel);
    let gram = basis.mul(&h).mul(&basis.transpose());
    let lattice = Lattice::new(gram)?;
    let group = lattice.discriminant_group()?;

    // basis vectors over the curves (still doubled)
    let b2 = basis.mul(&w);
    let gram_inv = RatMatrix::from(lattice.gram()).inverse().ok_or(Error::Degenerate)?;
    let mut images = vec![];
    for hc in half_classes() {
        let mut p = RatMatrix::zeros(lattice.rank(), 1);
        for k in 0..lattice.rank() {
            let bk: Vec<BigRational> = b2
                .row(k)
                .iter()
                .map(|x| BigRational::new(x.clone(), BigInt::from(2)))
                .collect();
            p.set(k, 0, c.pair(&bk, &hc));
        }
        let x = gram_inv.mul(&p);
        let coords: Vec<BigRational> = (0..lattice.rank()).map(|k| x.get(k, 0).clone()).collect();
        images.push(group.class_of(lattice.gram(), &coords)?);
    }
    Ok(CurveOverlattice {
        form: group.form().clone(),
        lattice,
        half_class_images: images,
    })
}

/// Checks that the half classes carry the `u(2)^2` table, lie in the dual
/// of the curve lattice, and that `A_{U⊕E8⊕D4^2} ≅ u(2)^2`.
pub fn verify_u2_squared() -> Result<bool> {
    let c = double_kummer_gram()?;
    let q = half_class_form(&c)?;
    let half = QMod1::from_frac(1, 2);
    let mut table = q.qdiag().iter().all(|v| *v == QMod2::zero());
    for i in 0..4 {
        for j in 0..4 {
            let want = if (i, j) == (0, 1) || (i, j) == (1, 0) || (i, j) == (2, 3) || (i, j) == (3, 2) {
                half
            } else {
                QMod1::zero()
            };
            table &= q.bmat()[i][j] == want;
        }
    }
    let ns = ns_lattice().discriminant_form()?;
    let iso = is_isometric(&ns, &Fqf::u2().power(2))?.is_some();
    Ok(table && half_classes_in_dual(&c) && iso)
}

/// `f_0 = 0`, `f_j = e_1 + ... + e_j` (`j ≤ 7`) and
/// `f_8 = 2e1+3e2+4e3+5e4+6e5+4e6+2e7+3e8`.
pub fn e8_coset_vectors() -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::zero(); 8]];
    for j in 1..=7 {
        out.push((0..8).map(|i| BigInt::from(i64::from(i < j))).collect());
    }
    out.push(big_vec(&[2, 3, 4, 5, 6, 4, 2, 3]));
    out
}

/// Verifies that all 36 differences `f_j - f_i` are roots of `E8` (so the
/// nine `f_i` lie in distinct cosets of any root-free sublattice) and
/// returns the number of cosets certified.
pub fn e8_coset_check() -> Result<u32> {
    let e8 = Lattice::e8();
    let roots: BTreeSet<Vec<BigInt>> = short_vectors(&e8, -2)?.into_iter().collect();
    let f = e8_coset_vectors();
    for j in 0..f.len() {
        for i in 0..j {
            let d: Vec<BigInt> = f[j].iter().zip(&f[i]).map(|(a, b)| a - b).collect();
            let neg: Vec<BigInt> = d.iter().map(|x| -x).collect();
            if e8.norm(&d) != BigInt::from(-2) || !(roots.contains(&d) || roots.contains(&neg)) {
                return Err(Error::CheckFailed(format!("f{j} - f{i} is not a root of E8")));
            }
        }
    }
    Ok(f.len() as u32)
}

/// One named sub-check of a composite verification.
#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SubCheck {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> SubCheck {
        SubCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// An explicit glue of `u(2)^5` (for `U(2)⊕E8(2)`) with `u(2)^4` (for `E8(2)`).
#[derive(Clone, Debug)]
pub struct GlueWitness {
    pub q_m: Fqf,
    pub q_n: Fqf,
    pub map: GlueMap,
    pub result: GlueResult,
}

impl GlueWitness {
    pub fn z_norm(&self) -> QMod2 {
        self.q_n.norm(self.result.z_n.as_ref().expect("Γ_N^⊥ has order 2"))
    }

    pub fn v_norm(&self) -> QMod2 {
        self.result
            .form()
            .norm(self.result.v_m.as_ref().expect("patching element present"))
    }
}

/// Glue data with `z_N = c1` (norm 0) or `z_N = c1 + d1` (norm 1).
///
/// `u(2)^5` has basis `a1, b1, ..., a5, b5` and `u(2)^4` has basis
/// `c1, d1, ..., c4, d4`. The map sends `a_i ↦ c_i`, `b_i ↦ d_i` for
/// `i = 2, 3, 4` and `a1 ↦ c1` (resp. `a1 + b1 ↦ c1 + d1`); since all
/// values are integral and `1/2 ≡ -1/2`, this is sign-reversing.
pub fn glue_witness(norm_one: bool) -> Result<GlueWitness> {
    let q_m = Fqf::u2().power(5);
    let q_n = Fqf::u2().power(4);
    let gm = |idx: &[usize]| {
        let mut c = vec![0; 10];
        for &i in idx {
            c[i] = 1;
        }
        q_m.element(&c)
    };
    let gn = |idx: &[usize]| {
        let mut c = vec![0; 8];
        for &i in idx {
            c[i] = 1;
        }
        q_n.element(&c)
    };
    let first: &[usize] = if norm_one { &[0, 1] } else { &[0] };
    let mut src = vec![gm(first)];
    let mut tgt = vec![gn(first)];
    for i in 2..8 {
        src.push(gm(&[i]));
        tgt.push(gn(&[i]));
    }
    let source = subgroup_span(&q_m, &src)?;
    let target = subgroup_span(&q_n, &tgt)?;
    let map = GlueMap::new(source, target, tgt)?;
    let result = glue(&q_m, &q_n, &map)?;
    Ok(GlueWitness { q_m, q_n, map, result })
}

/// Outcome of [`e82_complement_check`].
#[derive(Clone, Debug)]
pub struct E82Report {
    pub checks: Vec<SubCheck>,
    pub witnesses: Vec<GlueWitness>,
}

impl E82Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The discriminant-form arithmetic behind `M^⊥ ≅ E8(2)` for a primitive
/// `M = U(2)⊕E8(2) ⊂ S = U⊕E8⊕D4^2` without roots in `M^⊥`, and the two
/// embedding classes distinguished by `q_N(z_N)`.
pub fn e82_complement_check() -> Result<E82Report> {
    let mut checks = vec![];
    let e82 = Lattice::e8().scaled(2)?;
    let sig_n = e82.signature().mod8();

    // (i) admissible 2-elementary even forms of length at most 8
    let cosets = e8_coset_check()?;
    let mut admissible = vec![];
    let mut notes = vec![];
    for a in 0..=4usize {
        for has_v in [false, true] {
            if has_v && a == 0 {
                continue;
            }
            let q = if has_v {
                Fqf::direct_sum(&[&Fqf::v2(), &Fqf::u2().power(a - 1)])
            } else {
                Fqf::u2().power(a)
            };
            let class = two_elementary_classify(&q)?;
            let sig = q.gauss_sum_signature()?;
            let index = 1u64 << (class.length() / 2);
            let ok = sig == sig_n && index >= u64::from(cosets);
            notes.push(format!("{class}: sig {sig}, index {index}"));
            if ok {
                admissible.push(class);
            }
        }
    }
    let actual = two_elementary_classify(&e82.discriminant_form()?)?;
    let pass_i = admissible.len() == 1 && admissible[0].to_string() == "u(2)^4" && actual == admissible[0];
    checks.push(SubCheck::new(
        "(i) A_N = u(2)^4",
        pass_i,
        format!(
            "{cosets} cosets; candidates [{}]; admissible {:?}",
            notes.join("; "),
            admissible.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        ),
    ));

    // (ii) N(1/2) is even unimodular negative definite of rank 8, so N = E8(2)
    let half = e82.rescale(&BigRational::new(BigInt::one(), BigInt::from(2)))?;
    let pass_ii = half.is_unimodular()
        && half.is_negative_definite()
        && half.rank() == 8
        && same_genus(&half, &Lattice::e8())?
        && is_isometric(&e82.discriminant_form()?, &Fqf::u2().power(4))?.is_some();
    checks.push(SubCheck::new(
        "(ii) N = E8(2)",
        pass_ii,
        "N(1/2) even unimodular negative definite of rank 8",
    ));

    // (iii) #Γ = (#A_M #A_N / #A_S)^{1/2} and #Γ_N^⊥ = #A_N / #Γ
    let a_m = Lattice::direct_sum(&[&Lattice::u().scaled(2)?, &e82])
        .discriminant_form()?
        .size();
    let a_n = e82.discriminant_form()?.size();
    let a_s = ns_lattice().discriminant_form()?.size();
    let sq = a_m * a_n / a_s;
    let gamma = (sq as f64).sqrt().round() as u64;
    let pass_iii = gamma * gamma == sq && gamma == 128 && a_n / gamma == 2;
    checks.push(SubCheck::new(
        "(iii) #Γ = 2^7, #Γ_N^⊥ = 2",
        pass_iii,
        format!(
            "#A_M = {a_m}, #A_N = {a_n}, #A_S = {a_s}, #Γ = {gamma}, #Γ_N^⊥ = {}",
            a_n / gamma.max(1)
        ),
    ));

    // (iv) explicit glue witnesses for q_N(z_N) = 0 and 1
    let q_s = ns_lattice().discriminant_form()?;
    let mut witnesses = vec![];
    for norm_one in [false, true] {
        let w = glue_witness(norm_one)?;
        let r = &w.result;
        let perp = orthogonal_subgroup(&w.q_n, w.map.target())?;
        let class = two_elementary_classify(r.form())?;
        let want = QMod2::from_frac(i64::from(norm_one), 1);
        let ok = r.gamma.order() == 128
            && perp.order() == 2
            && class.to_string() == "u(2)^2"
            && is_isometric(r.form(), &q_s)?.is_some()
            && w.z_norm() == want
            && w.v_norm() == want;
        checks.push(SubCheck::new(
            if norm_one {
                "(iv) glue with q(z_N) = 1"
            } else {
                "(iv) glue with q(z_N) = 0"
            },
            ok,
            format!(
                "#Γ = {}, q_S = {class}, z_N = {}, q(z_N) = {}, q(v_M) = {}",
                r.gamma.order(),
                r.z_n.as_ref().map(|z| z.to_string()).unwrap_or_default(),
                w.z_norm(),
                w.v_norm()
            ),
        ));
        witnesses.push(w);
    }
    let distinct = witnesses[0].v_norm() != witnesses[1].v_norm();
    checks.push(SubCheck::new(
        "pointed forms (q_S, v_M) differ",
        distinct,
        "isometries preserve q, and q(v_M) is 0 for one witness and 1 for the other",
    ));
    Ok(E82Report { checks, witnesses })
}

/// Which family of free involutions a patching element corresponds to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InvolutionKind {
    /// Norm 0.
    Lieberman,
    /// Norm 1.
    KondoMukai,
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionKind::Lieberman => write!(f, "Lieberman"),
            InvolutionKind::KondoMukai => write!(f, "Kondo-Mukai"),
        }
    }
}

/// One nonzero element of `u(2)^2` in the basis `e1, f1, e2, f2`.
#[derive(Clone, Debug, Serialize)]
pub struct PatchingEntry {
    pub label: String,
    pub coeffs: Vec<i64>,
    pub norm: String,
    pub kind: InvolutionKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchingTable {
    pub entries: Vec<PatchingEntry>,
}

impl PatchingTable {
    pub fn count(&self, kind: InvolutionKind) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }
}

/// Norm-0 labels listed with the Lieberman involutions.
pub const NORM0_LABELS: [&str; 9] = [
    "e1+f1+e2+f2",
    "e1+f2",
    "e2+f1",
    "e1+e2",
    "e1",
    "e2",
    "f1+f2",
    "f2",
    "f1",
];
/// Norm-1 labels listed with the Kondo–Mukai involutions.
pub const NORM1_LABELS: [&str; 6] = ["e2+f2", "f1+e2+f2", "e1+f1+e2", "e1+e2+f2", "e1+f1", "e1+f1+f2"];

/// Parses `e1+f2`-style labels into coefficients over `e1, f1, e2, f2`.
pub fn parse_patching_label(s: &str) -> Result<Vec<i64>> {
    let mut c = vec![0; 4];
    for (pos, part) in s.split('+').enumerate() {
        let part = part.trim();
        let i = HALF_CLASS_NAMES
            .iter()
            .position(|n| *n == part)
            .ok_or_else(|| Error::Parse {
                pos,
                msg: format!("unknown basis element {part:?}"),
            })?;
        c[i] ^= 1;
    }
    Ok(c)
}

pub fn patching_label(c: &[i64]) -> String {
    let parts: Vec<&str> = HALF_CLASS_NAMES
        .iter()
        .zip(c)
        .filter(|(_, &x)| x % 2 != 0)
        .map(|(n, _)| *n)
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// The fifteen nonzero elements of `A_NS = u(2)^2`, split by norm, checked
/// against the two label lists.
pub fn patching_table() -> Result<PatchingTable> {
    let q = Fqf::u2().power(2);
    let mut entries = vec![];
    for x in q.elements()? {
        if x.is_zero() {
            continue;
        }
        let norm = q.norm(&x);
        let kind = if norm == QMod2::zero() {
            InvolutionKind::Lieberman
        } else if norm == QMod2::from_frac(1, 1) {
            InvolutionKind::KondoMukai
        } else {
            return Err(Error::CheckFailed(format!("{x} has norm {norm}")));
        };
        entries.push(PatchingEntry {
            label: patching_label(x.coeffs()),
            coeffs: x.coeffs().to_vec(),
            norm: norm.to_string(),
            kind,
        });
    }
    let set = |kind| -> BTreeSet<Vec<i64>> {
        entries
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.coeffs.clone())
            .collect()
    };
    let want =
        |labels: &[&str]| -> Result<BTreeSet<Vec<i64>>> { labels.iter().map(|l| parse_patching_label(l)).collect() };
    if set(InvolutionKind::Lieberman) != want(&NORM0_LABELS)? || set(InvolutionKind::KondoMukai) != want(&NORM1_LABELS)?
    {
        return Err(Error::CheckFailed("norm classes differ from the label lists".into()));
    }
    Ok(PatchingTable { entries })
}

/// One row of the shipped parameter-to-element data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParameterEntry {
    pub parameter: serde_json::Value,
    pub element: String,
}

/// Parameter-to-element assignment for both involution families. Only the
/// image sets are checked; the pointwise assignment is data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParameterMap {
    pub basis: Vec<String>,
    pub pointwise_map_verified: bool,
    pub lieberman: Vec<ParameterEntry>,
    pub kondo_mukai: Vec<ParameterEntry>,
}

pub const PARAMETER_MAP_JSON: &str = include_str!("../data/patching_labels.json");

/// Loads the shipped parameter map and checks it against [`patching_table`]
/// at the level of sets.
pub fn parameter_map() -> Result<ParameterMap> {
    let m: ParameterMap = serde_json::from_str(PARAMETER_MAP_JSON).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: e.to_string(),
    })?;
    let table = patching_table()?;
    for (entries, kind) in [
        (&m.lieberman, InvolutionKind::Lieberman),
        (&m.kondo_mukai, InvolutionKind::KondoMukai),
    ] {
        let got: BTreeSet<Vec<i64>> = entries
            .iter()
            .map(|e| parse_patching_label(&e.element))
            .collect::<Result<_>>()?;
        let want: BTreeSet<Vec<i64>> = table
            .entries
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.coeffs.clone())
            .collect();
        if got != want || entries.len() != want.len() {
            return Err(Error::CheckFailed(format!(
                "{kind} parameter map does not cover its norm class"
            )));
        }
    }
    Ok(m)
}
