//! Finite quadratic forms `(A, q, b)`.
//!
//! A form is stored on a cyclic decomposition `A = ⊕ Z/d_i` by the values
//! of `q` on the generators (mod 2) and the pairing matrix (mod 1). All
//! group scans run on a common-denominator integer encoding of the same
//! data, so norms of arbitrary elements are a handful of integer
//! multiply-adds.

mod glue;
mod isometry;
mod subgroup;

pub use glue::{glue, two_elementary_classify, GlueMap, GlueResult, TwoElementaryClass};
pub use isometry::{is_isometric, orthogonal_group, Isometry};
pub use subgroup::{orthogonal_subgroup, quotient_form, subgroup_span, FqfSubgroup, Subquotient};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Cap for exhaustive counting and subgroup materialization.
pub const COUNT_CAP: u64 = 1 << 20;
/// Cap on each primary part for isometry search.
pub const ISOMETRY_CAP: u64 = 1 << 16;
/// Cap for materializing full orthogonal groups.
pub const ORTHOGONAL_GROUP_CAP: u64 = 1 << 8;

pub type Rat = Ratio<i64>;

fn reduce_mod(r: Rat, m: i64) -> Rat {
    let den = *r.denom();
    Rat::new(r.numer().rem_euclid(m * den), den)
}

/// A rational taken modulo 2, kept in `[0, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMod2(Rat);

/// A rational taken modulo 1, kept in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMod1(Rat);

impl QMod2 {
    pub fn new(r: Rat) -> Self {
        QMod2(reduce_mod(r, 2))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(Rat::new(num, den))
    }

    pub fn zero() -> Self {
        QMod2(Rat::zero())
    }

    pub fn value(&self) -> Rat {
        self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_mod1(self) -> QMod1 {
        QMod1::new(self.0)
    }
}

impl QMod1 {
    pub fn new(r: Rat) -> Self {
        QMod1(reduce_mod(r, 1))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(Rat::new(num, den))
    }

    pub fn zero() -> Self {
        QMod1(Rat::zero())
    }

    pub fn value(&self) -> Rat {
        self.0
    }

    /// Additive order of the class in `Q/Z`.
    pub fn order(&self) -> i64 {
        *self.0.denom()
    }
}

macro_rules! rat_display {
    ($t:ty) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_integer() {
                    write!(f, "{}", self.0.numer())
                } else {
                    write!(f, "{}/{}", self.0.numer(), self.0.denom())
                }
            }
        }

        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }
    };
}
rat_display!(QMod2);
rat_display!(QMod1);

impl std::ops::Neg for QMod2 {
    type Output = QMod2;
    fn neg(self) -> QMod2 {
        QMod2::new(-self.0)
    }
}

impl std::ops::Neg for QMod1 {
    type Output = QMod1;
    fn neg(self) -> QMod1 {
        QMod1::new(-self.0)
    }
}

/// Parses `P/Q` or `P` with optional sign.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("invalid rational '{s}'"),
    };
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = i64::from_str(n).map_err(|_| bad())?;
    let d = i64::from_str(d).map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Element of a finite quadratic form: canonical coefficient vector with
/// `0 <= coeffs[i] < d_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FqfElement(Vec<i64>);

impl FqfElement {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FqfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finite quadratic form on `⊕ Z/d_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Fqf {
    orders: Vec<i64>,
    q: Vec<QMod2>,
    b: Vec<Vec<QMod1>>,
    // integer encoding: q_i = qn[i]/den mod 2, b_ij = bn[i][j]/den mod 1
    den: i64,
    qn: Vec<i64>,
    bn: Vec<Vec<i64>>,
}

impl Fqf {
    /// Builds a form from generator orders, norms of generators and the
    /// pairing matrix. Diagonal pairings must agree with the norms mod 1.
    pub fn new(orders: Vec<i64>, qdiag: Vec<Rat>, bmat: Vec<Vec<Rat>>) -> Result<Fqf> {
        let k = orders.len();
        if qdiag.len() != k || bmat.len() != k || bmat.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("orders, norms and pairings disagree in length".into()));
        }
        if let Some(d) = orders.iter().find(|&&d| d < 2) {
            return Err(Error::IllFormed(format!("cyclic factor of order {d}")));
        }
        let q: Vec<QMod2> = qdiag.into_iter().map(QMod2::new).collect();
        let b: Vec<Vec<QMod1>> = bmat
            .into_iter()
            .map(|r| r.into_iter().map(QMod1::new).collect())
            .collect();
        for i in 0..k {
            let di = Rat::from_integer(orders[i]);
            if b[i][i] != q[i].to_mod1() {
                return Err(Error::IllFormed(format!("b(g{i},g{i}) != q(g{i}) mod 1")));
            }
            if !(q[i].value() * di * di / 2).is_integer() {
                return Err(Error::IllFormed(format!("q(d_{i} g_{i}) != 0 mod 2")));
            }
            for j in 0..k {
                if b[i][j] != b[j][i] {
                    return Err(Error::IllFormed("pairing matrix not symmetric".into()));
                }
                if !(b[i][j].value() * di).is_integer() {
                    return Err(Error::IllFormed(format!("d_{i} b(g{i},g{j}) != 0 mod 1")));
                }
            }
        }
        let mut den = 1i64;
        for v in q.iter().map(|x| x.value()).chain(b.iter().flatten().map(|x| x.value())) {
            den = den.lcm(v.denom());
        }
        let qn = q.iter().map(|x| (x.value() * den).to_integer()).collect();
        let bn = b
            .iter()
            .map(|r| r.iter().map(|x| (x.value() * den).to_integer()).collect())
            .collect();
        Ok(Fqf {
            orders,
            q,
            b,
            den,
            qn,
            bn,
        })
    }

    /// The zero form on the trivial group.
    pub fn trivial() -> Fqf {
        Fqf {
            orders: vec![],
            q: vec![],
            b: vec![],
            den: 1,
            qn: vec![],
            bn: vec![],
        }
    }

    /// `u(2)`: `(Z/2)^2`, both generators isotropic, pairing 1/2.
    pub fn u2() -> Fqf {
        let h = Rat::new(1, 2);
        Fqf::new(
            vec![2, 2],
            vec![Rat::zero(), Rat::zero()],
            vec![vec![Rat::zero(), h], vec![h, Rat::zero()]],
        )
        .expect("u(2) is well-formed")
    }

    /// `v(2)`: `(Z/2)^2`, both generators of norm 1, pairing 1/2.
    pub fn v2() -> Fqf {
        let h = Rat::new(1, 2);
        Fqf::new(
            vec![2, 2],
            vec![Rat::one(), Rat::one()],
            vec![vec![Rat::zero(), h], vec![h, Rat::zero()]],
        )
        .expect("v(2) is well-formed")
    }

    /// `c(m)`: the form of the rank-one lattice `<m>`, `Z/|m|` with `q(g) = 1/m`.
    pub fn cyclic(m: i64) -> Result<Fqf> {
        if m == 0 || m % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "c(m) requires m even and nonzero, got {m}"
            )));
        }
        let g = Rat::new(1, m);
        Fqf::new(vec![m.abs()], vec![g], vec![vec![g]])
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(parts: &[&Fqf]) -> Fqf {
        let mut orders = vec![];
        let mut q = vec![];
        let k: usize = parts.iter().map(|p| p.rank()).sum();
        let mut b = vec![vec![Rat::zero(); k]; k];
        let mut off = 0;
        for p in parts {
            orders.extend_from_slice(&p.orders);
            q.extend(p.q.iter().map(|x| x.value()));
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    b[off + i][off + j] = p.b[i][j].value();
                }
            }
            off += p.rank();
        }
        Fqf::new(orders, q, b).expect("direct sum of well-formed forms")
    }

    /// `n`-fold orthogonal sum of `self`.
    pub fn power(&self, n: usize) -> Fqf {
        let parts: Vec<&Fqf> = std::iter::repeat_n(self, n).collect();
        Fqf::direct_sum(&parts)
    }

    /// The form `-q`.
    pub fn negate(&self) -> Fqf {
        Fqf::new(
            self.orders.clone(),
            self.q.iter().map(|x| -x.value()).collect(),
            self.b.iter().map(|r| r.iter().map(|x| -x.value()).collect()).collect(),
        )
        .expect("negation of a well-formed form")
    }

    /// Number of cyclic factors in the stored decomposition.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn qdiag(&self) -> &[QMod2] {
        &self.q
    }

    pub fn bmat(&self) -> &[Vec<QMod1>] {
        &self.b
    }

    /// `|A|`, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
            .unwrap_or(u64::MAX)
    }

    pub(crate) fn require_cap(&self, cap: u64) -> Result<()> {
        let size = self.size();
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(())
    }

    pub fn zero(&self) -> FqfElement {
        FqfElement(vec![0; self.rank()])
    }

    /// Canonicalizes a coefficient vector.
    pub fn element(&self, coeffs: &[i64]) -> FqfElement {
        assert_eq!(coeffs.len(), self.rank(), "element has wrong length");
        FqfElement(coeffs.iter().zip(&self.orders).map(|(c, d)| c.rem_euclid(*d)).collect())
    }

    /// The `i`-th generator.
    pub fn generator(&self, i: usize) -> FqfElement {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        FqfElement(c)
    }

    pub fn generators(&self) -> Vec<FqfElement> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    pub fn add(&self, x: &FqfElement, y: &FqfElement) -> FqfElement {
        FqfElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((a, b), d)| (a + b) % d)
                .collect(),
        )
    }

    pub fn scalar(&self, k: i64, x: &FqfElement) -> FqfElement {
        FqfElement(
            x.0.iter()
                .zip(&self.orders)
                .map(|(a, d)| ((k % d) * a).rem_euclid(*d))
                .collect(),
        )
    }

    pub fn neg(&self, x: &FqfElement) -> FqfElement {
        self.scalar(-1, x)
    }

    /// Numerator of `q(x)` over `den`, reduced mod `2 den`.
    pub(crate) fn norm_num(&self, x: &[i64]) -> i64 {
        let m = 2 * self.den as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            acc += xi * xi % m * self.qn[i] as i128;
            let mut cross: i128 = 0;
            for j in i + 1..x.len() {
                if x[j] != 0 {
                    cross += x[j] as i128 * self.bn[i][j] as i128;
                }
            }
            acc += 2 * xi * (cross % m);
            acc %= m;
        }
        acc.rem_euclid(m) as i64
    }

    /// Numerator of `b(x, y)` over `den`, reduced mod `den`.
    pub(crate) fn pair_num(&self, x: &[i64], y: &[i64]) -> i64 {
        let m = self.den as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let mut s: i128 = 0;
            for j in 0..y.len() {
                if y[j] != 0 {
                    s += y[j] as i128 * self.bn[i][j] as i128;
                }
            }
            acc = (acc + x[i] as i128 * (s % m)) % m;
        }
        acc.rem_euclid(m) as i64
    }

    pub(crate) fn den(&self) -> i64 {
        self.den
    }

    /// `q(x)` in `Q/2Z`.
    pub fn norm(&self, x: &FqfElement) -> QMod2 {
        QMod2::from_frac(self.norm_num(&x.0), self.den)
    }

    /// `b(x, y)` in `Q/Z`.
    pub fn pairing(&self, x: &FqfElement, y: &FqfElement) -> QMod1 {
        QMod1::from_frac(self.pair_num(&x.0, &y.0), self.den)
    }

    /// Smallest `n >= 1` with `n x = 0`.
    pub fn element_order(&self, x: &FqfElement) -> i64 {
        x.0.iter()
            .zip(&self.orders)
            .fold(1i64, |acc, (c, d)| acc.lcm(&(d / c.gcd(d))))
    }

    pub(crate) fn order_of(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.orders)
            .fold(1i64, |acc, (c, d)| acc.lcm(&(d / c.gcd(d))))
    }

    /// Mixed-radix index of an element (first coordinate fastest).
    pub(crate) fn index_of(&self, x: &[i64]) -> u64 {
        let mut idx = 0u64;
        for i in (0..x.len()).rev() {
            idx = idx * self.orders[i] as u64 + x[i] as u64;
        }
        idx
    }

    pub(crate) fn element_at(&self, mut idx: u64) -> FqfElement {
        let mut c = Vec::with_capacity(self.rank());
        for &d in &self.orders {
            c.push((idx % d as u64) as i64);
            idx /= d as u64;
        }
        FqfElement(c)
    }

    /// Calls `f` on every element in index order. Caller enforces caps.
    pub(crate) fn for_each_coeffs(&self, mut f: impl FnMut(&[i64])) {
        let k = self.rank();
        let mut c = vec![0i64; k];
        loop {
            f(&c);
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                c[i] += 1;
                if c[i] < self.orders[i] {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }

    /// All elements, in index order (capped).
    pub fn elements(&self) -> Result<Vec<FqfElement>> {
        self.require_cap(COUNT_CAP)?;
        let mut out = Vec::with_capacity(self.size() as usize);
        self.for_each_coeffs(|c| out.push(FqfElement(c.to_vec())));
        Ok(out)
    }

    /// Exact count of elements with the given order and/or norm.
    pub fn count_elements(&self, order: Option<i64>, norm: Option<QMod2>) -> Result<u64> {
        self.require_cap(COUNT_CAP)?;
        let target = match norm {
            Some(n) => {
                let scaled = n.value() * self.den;
                if !scaled.is_integer() {
                    // no element can have a norm outside (1/den)Z
                    return Ok(0);
                }
                Some(scaled.to_integer().rem_euclid(2 * self.den))
            }
            None => None,
        };
        let mut count = 0u64;
        self.for_each_coeffs(|c| {
            if let Some(t) = target {
                if self.norm_num(c) != t {
                    return;
                }
            }
            if let Some(o) = order {
                if self.order_of(c) != o {
                    return;
                }
            }
            count += 1;
        });
        Ok(count)
    }

    /// Histogram of `(order, norm)` over the whole group.
    pub fn norm_histogram(&self) -> Result<BTreeMap<(i64, QMod2), u64>> {
        self.require_cap(COUNT_CAP)?;
        let mut h = BTreeMap::new();
        self.for_each_coeffs(|c| {
            *h.entry((self.order_of(c), QMod2::from_frac(self.norm_num(c), self.den)))
                .or_insert(0) += 1;
        });
        Ok(h)
    }

    /// Order of the radical `{x : b(x, A) = 0}`, computed by integer
    /// linear algebra (no enumeration).
    pub fn radical_order(&self) -> u64 {
        use crate::exact_linalg::{kernel_basis, snf, IntMatrix};
        use num_bigint::BigInt;
        let k = self.rank();
        if k == 0 {
            return 1;
        }
        // (x, y) with x·Bn - den·y = 0
        let mut rows = vec![vec![BigInt::zero(); k]; 2 * k];
        for i in 0..k {
            for j in 0..k {
                rows[i][j] = BigInt::from(self.bn[i][j]);
            }
            rows[k + i][i] = BigInt::from(-self.den);
        }
        let m = IntMatrix::from_big_rows(rows, k).transpose();
        let ker = kernel_basis(&m);
        let gens: Vec<Vec<BigInt>> = ker.into_iter().map(|v| v[..k].to_vec()).collect();
        let g = IntMatrix::from_big_rows(gens, k);
        let s = snf(&g);
        let det_rad: BigInt = s.divisors().into_iter().filter(|d| !d.is_zero()).product();
        let size = BigInt::from(self.size());
        let r = size / det_rad;
        u64::try_from(r).expect("radical order fits u64")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical_order() == 1
    }

    /// Gauss-sum signature: `σ mod 8` with
    /// `|A|^{-1/2} Σ_x exp(πi q(x)) = exp(2πi σ/8)`.
    pub fn gauss_sum_signature(&self) -> Result<u8> {
        self.require_cap(COUNT_CAP)?;
        let mut counts = vec![0u64; (2 * self.den) as usize];
        self.for_each_coeffs(|c| counts[self.norm_num(c) as usize] += 1);
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (n, &cnt) in counts.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            let theta = std::f64::consts::PI * n as f64 / self.den as f64;
            re += cnt as f64 * theta.cos();
            im += cnt as f64 * theta.sin();
        }
        let s = (self.size() as f64).sqrt();
        let (re, im) = (re / s, im / s);
        for sigma in 0..8u8 {
            let phi = std::f64::consts::PI * sigma as f64 / 4.0;
            if (re - phi.cos()).hypot(im - phi.sin()) < 1e-6 {
                return Ok(sigma);
            }
        }
        Err(Error::GaussSum(format!("{:.6}", re.hypot(im))))
    }

    /// Restriction to the `p`-Sylow subgroup, together with the embedding of
    /// its generators and the source factor index of each.
    pub(crate) fn p_part_with_embedding(&self, p: i64) -> (Fqf, Vec<FqfElement>, Vec<usize>) {
        let mut orders = vec![];
        let mut emb = vec![];
        let mut src = vec![];
        for (i, &d) in self.orders.iter().enumerate() {
            let mut pa = 1;
            let mut r = d;
            while r % p == 0 {
                r /= p;
                pa *= p;
            }
            if pa > 1 {
                orders.push(pa);
                let mut c = vec![0; self.rank()];
                c[i] = r;
                emb.push(FqfElement(c));
                src.push(i);
            }
        }
        let q = emb.iter().map(|x| self.norm(x).value()).collect();
        let b = emb
            .iter()
            .map(|x| emb.iter().map(|y| self.pairing(x, y).value()).collect())
            .collect();
        (
            Fqf::new(orders, q, b).expect("restriction of a well-formed form"),
            emb,
            src,
        )
    }

    /// The `p`-primary part with the restricted form.
    pub fn p_primary_part(&self, p: i64) -> Fqf {
        self.p_part_with_embedding(p).0
    }

    /// Minimal number of generators of the `p`-part.
    pub fn l_invariant(&self, p: i64) -> usize {
        self.orders.iter().filter(|&&d| d % p == 0).count()
    }

    /// Primes dividing `|A|`, ascending.
    pub fn primes(&self) -> Vec<i64> {
        let mut ps = vec![];
        for &d in &self.orders {
            for p in prime_factors(d) {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        ps.sort_unstable();
        ps
    }

    /// Every element is killed by 2.
    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|&d| d == 2)
    }
}

impl fmt::Debug for Fqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Fqf {{ orders: {:?}, q: {:?}, b: {:?} }}",
            self.orders, self.q, self.b
        )
    }
}

impl fmt::Display for Fqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return write!(f, "trivial form");
        }
        let orders: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        writeln!(f, "group: {}", orders.join(" + "))?;
        let q: Vec<String> = self.q.iter().map(|x| x.to_string()).collect();
        writeln!(f, "q(g_i) mod 2: [{}]", q.join(", "))?;
        write!(f, "b(g_i, g_j) mod 1:")?;
        for row in &self.b {
            let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "\n  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: i64) -> Vec<i64> {
    n = n.abs();
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
