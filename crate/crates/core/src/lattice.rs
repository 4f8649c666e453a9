//! Even integral lattices given by Gram matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{
    kernel_basis, rows_primitive, saturate_rows, signature, snf, IntMatrix, RatMatrix, Signature,
};
use crate::fqf::{is_isometric, Fqf, FqfElement, Rat};

/// Converts a slice of machine integers to a lattice vector.
pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// An even integral lattice: a symmetric Gram matrix with even diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Lattice> {
        if !gram.is_square() {
            return Err(Error::Dimension(format!(
                "Gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for i in 0..gram.rows() {
            if gram.get(i, i).is_odd() {
                return Err(Error::NotEven(format!("diagonal entry {} is {}", i, gram.get(i, i))));
            }
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Lattice> {
        Lattice::new(IntMatrix::from_rows(rows))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Lattice {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().is_negative_definite()
    }

    pub fn norm(&self, v: &[BigInt]) -> BigInt {
        self.gram.bilinear(v, v)
    }

    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        self.gram.bilinear(v, w)
    }

    /// The hyperbolic plane `U`.
    pub fn u() -> Lattice {
        Lattice::from_rows(&[[0, 1], [1, 0]])
            .expect("U is even")
            .with_label("U")
    }

    /// Negative definite `E8`: chain `e1 - ... - e7` with `e8` attached to `e5`.
    pub fn e8() -> Lattice {
        let mut g = IntMatrix::diagonal(&[-2; 8]);
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
        for (i, j) in edges {
            g.set(i, j, BigInt::one());
            g.set(j, i, BigInt::one());
        }
        Lattice::new(g).expect("E8 is even").with_label("E8")
    }

    /// Negative definite `D4` with central node at index 1.
    pub fn d4() -> Lattice {
        let mut g = IntMatrix::diagonal(&[-2; 4]);
        for j in [0, 2, 3] {
            g.set(1, j, BigInt::one());
            g.set(j, 1, BigInt::one());
        }
        Lattice::new(g).expect("D4 is even").with_label("D4")
    }

    /// The rank-one lattice `<m>`, `m` even and nonzero.
    pub fn span(m: i64) -> Result<Lattice> {
        if m == 0 || m % 2 != 0 {
            return Err(Error::InvalidArgument(format!("<{m}> needs a nonzero even integer")));
        }
        Ok(Lattice::new(IntMatrix::from_rows(&[[m]]))?.with_label(format!("<{m}>")))
    }

    /// `L(m)`: same group, form multiplied by `m`.
    pub fn rescale(&self, m: &BigRational) -> Result<Lattice> {
        if m.is_zero() {
            return Err(Error::InvalidArgument("rescaling by 0".into()));
        }
        let n = self.rank();
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = m * BigRational::from_integer(self.gram.get(i, j).clone());
                if !v.is_integer() {
                    return Err(Error::NonIntegral);
                }
                g.set(i, j, v.to_integer());
            }
        }
        let label = self.label.as_ref().map(|l| format!("{l}({m})"));
        let mut out = Lattice::new(g)?;
        out.label = label;
        Ok(out)
    }

    pub fn scaled(&self, m: i64) -> Result<Lattice> {
        self.rescale(&BigRational::from_integer(BigInt::from(m)))
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Lattice {
        let grams: Vec<&IntMatrix> = parts.iter().map(|l| &l.gram).collect();
        let labels: Option<Vec<&str>> = parts.iter().map(|l| l.label()).collect();
        Lattice {
            gram: IntMatrix::block_diag(&grams),
            label: labels.map(|ls| ls.join("+")),
        }
    }

    pub fn power(&self, n: usize) -> Lattice {
        Lattice::direct_sum(&vec![self; n])
    }

    /// `L*/L` with its discriminant form, generators and coordinate map.
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        let s = snf(&self.gram);
        let n = self.rank();
        let mut keep = vec![];
        let mut orders = vec![];
        let mut gens = vec![];
        for (i, d) in s.divisors().into_iter().enumerate() {
            if d > BigInt::one() {
                keep.push(i);
                let col = s.v.column(i);
                gens.push(
                    col.into_iter()
                        .map(|c| BigRational::new(c, d.clone()))
                        .collect::<Vec<_>>(),
                );
                orders.push(
                    d.to_i64()
                        .ok_or_else(|| Error::CheckFailed("discriminant group too large".into()))?,
                );
            }
        }
        let g = RatMatrix::from(&self.gram);
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let mut acc = BigRational::zero();
            for i in 0..n {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    acc += &x[i] * g.get(i, j) * &y[j];
                }
            }
            acc
        };
        let k = gens.len();
        let qdiag = (0..k)
            .map(|i| reduce(&pair(&gens[i], &gens[i]), 2))
            .collect::<Result<Vec<_>>>()?;
        let bmat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| reduce(&pair(&gens[i], &gens[j]), 1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let form = Fqf::new(orders, qdiag, bmat)?;
        Ok(DiscriminantGroup {
            form,
            generators: gens,
            u: s.u,
            keep,
        })
    }

    pub fn discriminant_form(&self) -> Result<Fqf> {
        Ok(self.discriminant_group()?.form)
    }

    pub fn genus_invariants(&self) -> Result<GenusInvariants> {
        Ok(GenusInvariants {
            signature: self.signature(),
            form: self.discriminant_form()?,
        })
    }

    /// Signature mod 8 agrees with the Gauss-sum signature of `q_L`.
    pub fn milgram_holds(&self) -> Result<bool> {
        Ok(self.signature().mod8() == self.discriminant_form()?.gauss_sum_signature()?)
    }
}

fn reduce(r: &BigRational, modulus: i64) -> Result<Rat> {
    let m = BigInt::from(modulus) * r.denom();
    let num = r.numer().mod_floor(&m);
    match (num.to_i64(), r.denom().to_i64()) {
        (Some(a), Some(b)) => Ok(Rat::new(a, b)),
        _ => Err(Error::CheckFailed("discriminant value exceeds 64 bits".into())),
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "Lattice({l}, rank {})", self.rank()),
            None => write!(f, "Lattice({:?})", self.gram),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "lattice of rank {}", self.rank()),
        }
    }
}

/// The discriminant group of a lattice together with the data needed to
/// locate dual vectors in it.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    form: Fqf,
    generators: Vec<Vec<BigRational>>,
    u: IntMatrix,
    keep: Vec<usize>,
}

impl DiscriminantGroup {
    pub fn form(&self) -> &Fqf {
        &self.form
    }

    /// Dual vectors (in lattice coordinates) representing the generators.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    /// Class of a dual vector `x` (lattice coordinates over Q) in `L*/L`.
    pub fn class_of(&self, gram: &IntMatrix, x: &[BigRational]) -> Result<FqfElement> {
        let n = gram.rows();
        if x.len() != n {
            return Err(Error::Dimension(format!("vector of length {} in rank {n}", x.len())));
        }
        // y = G x must be integral, then z = U y gives SNF coordinates
        let mut y = vec![BigInt::zero(); n];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            for (j, xj) in x.iter().enumerate() {
                acc += BigRational::from_integer(gram.get(i, j).clone()) * xj;
            }
            if !acc.is_integer() {
                return Err(Error::InvalidArgument("vector is not in the dual lattice".into()));
            }
            *yi = acc.to_integer();
        }
        let z = self.u.apply(&y);
        let coeffs: Vec<i64> = self
            .keep
            .iter()
            .zip(self.form.orders())
            .map(|(&i, &d)| z[i].mod_floor(&BigInt::from(d)).to_i64().expect("reduced mod order"))
            .collect();
        Ok(self.form.element(&coeffs))
    }
}

/// Signature together with the discriminant form.
#[derive(Clone, Debug)]
pub struct GenusInvariants {
    pub signature: Signature,
    pub form: Fqf,
}

/// Same signature and isometric discriminant forms.
pub fn same_genus(a: &Lattice, b: &Lattice) -> Result<bool> {
    let ga = a.genus_invariants()?;
    let gb = b.genus_invariants()?;
    if ga.signature != gb.signature {
        return Ok(false);
    }
    Ok(is_isometric(&ga.form, &gb.form)?.is_some())
}

/// A sublattice spanned by independent integer vectors of an ambient lattice.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    /// `basis` rows are ambient coordinates; they must be independent.
    pub fn new(ambient: &Lattice, basis: IntMatrix) -> Result<Sublattice> {
        if basis.cols() != ambient.rank() {
            return Err(Error::Dimension(format!(
                "basis vectors of length {} in a lattice of rank {}",
                basis.cols(),
                ambient.rank()
            )));
        }
        if basis.rows() > 0 && basis.rank() != basis.rows() {
            return Err(Error::InvalidArgument("basis vectors are linearly dependent".into()));
        }
        Ok(Sublattice {
            ambient: ambient.clone(),
            basis,
        })
    }

    pub fn from_vectors(ambient: &Lattice, vecs: Vec<Vec<BigInt>>) -> Result<Sublattice> {
        let cols = ambient.rank();
        Sublattice::new(ambient, IntMatrix::from_big_rows(vecs, cols))
    }

    /// The sublattice spanned by the coordinate vectors with indices in `range`.
    pub fn coordinate(ambient: &Lattice, range: std::ops::Range<usize>) -> Result<Sublattice> {
        let n = ambient.rank();
        let vecs = range
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v
            })
            .collect();
        Sublattice::from_vectors(ambient, vecs)
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn gram(&self) -> IntMatrix {
        self.basis.mul(self.ambient.gram()).mul(&self.basis.transpose())
    }

    /// The sublattice as a lattice in its own right.
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.gram())
    }

    pub fn is_primitive(&self) -> bool {
        self.rank() == 0 || rows_primitive(&self.basis)
    }
}

/// `(Q S) ∩ L`.
pub fn saturation(s: &Sublattice) -> Sublattice {
    if s.rank() == 0 {
        return s.clone();
    }
    Sublattice {
        ambient: s.ambient.clone(),
        basis: saturate_rows(&s.basis),
    }
}

/// `{x ∈ L : b(x, s) = 0 for all s ∈ S}`, always primitive.
pub fn orthogonal_complement(s: &Sublattice) -> Result<Sublattice> {
    let amb = &s.ambient;
    if !amb.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let n = amb.rank();
    if s.rank() == 0 {
        return Sublattice::new(amb, IntMatrix::identity(n));
    }
    let m = s.basis.mul(amb.gram());
    Sublattice::from_vectors(amb, kernel_basis(&m))
}

/// Saturated fixed lattice `{x : g x = x}` of a finite-order isometry `g`
/// (acting on coordinate columns). The result is checked to be nondegenerate.
pub fn fixed_sublattice(l: &Lattice, g: &IntMatrix) -> Result<Sublattice> {
    let n = l.rank();
    if g.rows() != n || g.cols() != n {
        return Err(Error::Dimension(format!(
            "{}x{} map on a rank {n} lattice",
            g.rows(),
            g.cols()
        )));
    }
    if g.transpose().mul(l.gram()).mul(g) != *l.gram() {
        return Err(Error::NotIsometry("g^T G g != G".into()));
    }
    let id = IntMatrix::identity(n);
    let mut p = g.clone();
    let mut finite = false;
    for _ in 0..MAX_ISOMETRY_ORDER {
        if p == id {
            finite = true;
            break;
        }
        p = p.mul(g);
    }
    if !finite {
        return Err(Error::InvalidArgument(format!(
            "isometry has no order up to {MAX_ISOMETRY_ORDER}"
        )));
    }
    let mut diff = g.clone();
    for i in 0..n {
        diff.set(i, i, g.get(i, i) - BigInt::one());
    }
    let fixed = if n == 0 { vec![] } else { kernel_basis(&diff) };
    let sub = Sublattice::from_vectors(l, fixed)?;
    if sub.rank() > 0 && sub.gram().det().is_zero() {
        return Err(Error::CheckFailed(
            "fixed lattice of a finite-order isometry is degenerate".into(),
        ));
    }
    Ok(sub)
}

/// Search bound for the order of an isometry in `fixed_sublattice`.
pub const MAX_ISOMETRY_ORDER: usize = 1 << 12;

/// Vectors of norm `t` in a negative definite lattice, one per `±` pair
/// (first nonzero coordinate positive), sorted.
///
/// Fincke–Pohst enumeration on `-G` with an exact rational `LDL^T`
/// decomposition: `-v·v = Σ d_i (v_i + Σ_{j>i} μ_ij v_j)^2`.
pub fn short_vectors(l: &Lattice, t: i64) -> Result<Vec<Vec<BigInt>>> {
    if t >= 0 || t % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "norm {t} is not a negative even integer"
        )));
    }
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if !l.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    let n = l.rank();
    let mut q: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(-l.gram.get(i, j).clone()))
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for m in k..n {
                let delta = &q[k][i] * &q[i][m];
                q[k][m] -= delta;
            }
        }
    }
    let mut out = vec![];
    let mut x = vec![0i64; n];
    let budget = BigRational::from_integer(BigInt::from(-t));
    if n > 0 {
        fp_descend(&q, n - 1, budget, &mut x, &mut out);
    }
    out.retain(|v: &Vec<i64>| v.iter().find(|c| **c != 0).is_some_and(|c| *c > 0));
    out.sort();
    Ok(out.into_iter().map(|v| big_vec(&v)).collect())
}

fn fp_descend(q: &[Vec<BigRational>], i: usize, budget: BigRational, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let n = x.len();
    let mut center = BigRational::zero();
    for j in i + 1..n {
        center -= &q[i][j] * BigRational::from_integer(BigInt::from(x[j]));
    }
    let cost = |xi: i64| -> BigRational {
        let d = BigRational::from_integer(BigInt::from(xi)) - &center;
        &q[i][i] * &d * &d
    };
    let start = center.floor().to_integer().to_i64().expect("bounded coordinate");
    let visit = |xi: i64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>| -> bool {
        let c = cost(xi);
        if c > budget {
            return false;
        }
        x[i] = xi;
        let rest = &budget - c;
        if i == 0 {
            if rest.is_zero() {
                out.push(x.clone());
            }
        } else {
            fp_descend(q, i - 1, rest, x, out);
        }
        true
    };
    let mut xi = start;
    while visit(xi, x, out) {
        xi -= 1;
    }
    let mut xi = start + 1;
    while visit(xi, x, out) {
        xi += 1;
    }
    x[i] = 0;
}
