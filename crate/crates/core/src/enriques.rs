//! Counting Enriques quotients: condition (B), Nikulin's surjectivity
//! criterion, Picard-11 classification and the `B0` table.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fqf::{prime_factors, Fqf, QMod2, COUNT_CAP};
use crate::lattice::{orthogonal_complement, short_vectors, Lattice, Sublattice};

/// The two families of rank-11 Néron–Severi lattices with an Enriques quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NsKind {
    /// `U(2) ⊕ E8(2) ⊕ <-2N>`, `N ≥ 2`.
    I,
    /// `U ⊕ E8(2) ⊕ <-4M>`, `M ≥ 1`.
    II,
}

/// A Picard-11 Néron–Severi type with the factorization `2^e p_1^e_1 ⋯ p_l^e_l`
/// of `2N` (Type I) or `4M` (Type II).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NsType {
    pub kind: NsKind,
    /// `N` for Type I, `M` for Type II.
    pub parameter: i64,
    pub e: u32,
    /// Odd primes with exponents.
    pub odd_part: Vec<(i64, u32)>,
}

impl NsType {
    pub fn type_one(n: i64) -> Result<NsType> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Type I needs N >= 2, got {n}")));
        }
        Ok(NsType::with_factorization(NsKind::I, n, 2 * n))
    }

    pub fn type_two(m: i64) -> Result<NsType> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("Type II needs M >= 1, got {m}")));
        }
        Ok(NsType::with_factorization(NsKind::II, m, 4 * m))
    }

    fn with_factorization(kind: NsKind, parameter: i64, mut d: i64) -> NsType {
        let mut e = 0;
        while d % 2 == 0 {
            d /= 2;
            e += 1;
        }
        let odd_part = prime_factors(d)
            .into_iter()
            .map(|p| {
                let mut k = 0;
                while d % p == 0 {
                    d /= p;
                    k += 1;
                }
                (p, k)
            })
            .collect();
        NsType {
            kind,
            parameter,
            e,
            odd_part,
        }
    }

    /// Number of distinct odd primes.
    pub fn l(&self) -> u32 {
        self.odd_part.len() as u32
    }

    /// `2N` (Type I) or `4M` (Type II): the order of the cyclic summand.
    pub fn cyclic_order(&self) -> i64 {
        match self.kind {
            NsKind::I => 2 * self.parameter,
            NsKind::II => 4 * self.parameter,
        }
    }

    pub fn lattice(&self) -> Lattice {
        let e82 = Lattice::e8().scaled(2).expect("E8(2) is even");
        let cyc = Lattice::span(-self.cyclic_order()).expect("even generator");
        let hyp = match self.kind {
            NsKind::I => Lattice::u().scaled(2).expect("U(2) is even"),
            NsKind::II => Lattice::u(),
        };
        Lattice::direct_sum(&[&hyp, &e82, &cyc])
    }

    /// The `B0` value from the case table.
    pub fn b0_table(&self) -> Result<u64> {
        let l = self.l();
        let e = self.e;
        let v = match self.kind {
            NsKind::I => match e {
                1 if l == 0 => {
                    return Err(Error::InvalidArgument("Type I with e = 1 needs l >= 1".into()));
                }
                1 => 1u64 << (l - 1),
                2 => 33u64 << (l + 4),
                _ => 1u64 << (l + 10),
            },
            NsKind::II => match (e, l) {
                (2, 0) => 1,
                (2, _) => 1u64 << (l - 1),
                _ => 1u64 << (2 * l + 5),
            },
        };
        Ok(v)
    }
}

impl fmt::Display for NsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, p, d) = match self.kind {
            NsKind::I => ("I", "N", "2N"),
            NsKind::II => ("II", "M", "4M"),
        };
        write!(f, "Type {name}, {p} = {}, {d} = 2^{}", self.parameter, self.e)?;
        for (q, k) in &self.odd_part {
            if *k == 1 {
                write!(f, "*{q}")?;
            } else {
                write!(f, "*{q}^{k}")?;
            }
        }
        write!(f, " (e = {}, l = {})", self.e, self.l())
    }
}

/// `B0` from the table, and from an independent element count when one
/// is available.
#[derive(Clone, Debug, Serialize)]
pub struct B0Report {
    pub ns_type: NsType,
    pub b0_table: u64,
    pub b0_counted: Option<u64>,
    pub notes: Vec<String>,
}

impl B0Report {
    pub fn consistent(&self) -> bool {
        self.b0_counted.is_none_or(|c| c == self.b0_table)
    }
}

/// Condition (B): no `(-2)`-vector of `NS` is orthogonal to `M`.
/// The complement of `M` must be negative definite.
pub fn condition_b(m: &Sublattice) -> Result<bool> {
    let comp = orthogonal_complement(m)?;
    if comp.rank() == 0 {
        return Ok(true);
    }
    let lat = comp.lattice()?;
    if !lat.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    Ok(short_vectors(&lat, -2)?.is_empty())
}

/// Nikulin's sufficient criterion for `O(L) → O(q_L)` to be onto (and
/// the genus of `L` to be a single class):
/// `rank ≥ l(A_p) + 2` for odd `p`, and a `u(2)` or `v(2)` summand of
/// `q_{L,2}` when `rank = l(A_2)`.
pub fn nikulin_surjectivity(l: &Lattice) -> Result<bool> {
    let sig = l.signature();
    if !sig.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if sig.is_definite() {
        return Err(Error::Definite);
    }
    let q = l.discriminant_form()?;
    let rank = l.rank();
    for p in q.primes() {
        if p != 2 && rank < q.l_invariant(p) + 2 {
            return Ok(false);
        }
    }
    if rank == q.l_invariant(2) {
        return has_hyperbolic_2_summand(&q.p_primary_part(2));
    }
    Ok(true)
}

/// Whether `q` (a 2-group) has an orthogonal summand `u(2)` or `v(2)`.
///
/// Such a summand is exactly a pair of order-2 elements `x, y` with
/// integral norms and `b(x, y) = 1/2`: the span is then nondegenerate of
/// even type and therefore splits off.
pub fn has_hyperbolic_2_summand(q: &Fqf) -> Result<bool> {
    let k = q.rank();
    q.require_cap(COUNT_CAP)?;
    let halves: Vec<_> = (0..k).map(|i| q.scalar(q.orders()[i] / 2, &q.generator(i))).collect();
    let mut t = vec![];
    for mask in 1u64..(1 << k) {
        let mut x = q.zero();
        for (i, h) in halves.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x = q.add(&x, h);
            }
        }
        if q.norm(&x).is_integral() {
            t.push(x);
        }
    }
    let half = crate::fqf::QMod1::from_frac(1, 2);
    for (i, x) in t.iter().enumerate() {
        if t[i + 1..].iter().any(|y| q.pairing(x, y) == half) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Picard-11 classification: candidates are read off `|det|` and decided
/// by genus (signature and discriminant-form isometry).
pub fn classify_picard11(l: &Lattice) -> Result<Option<NsType>> {
    let sig = l.signature();
    if sig.plus != 1 || sig.minus != 10 || sig.zero != 0 {
        return Err(Error::InvalidArgument(format!("signature {sig} is not (1, 10)")));
    }
    let det = l
        .det()
        .magnitude()
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument("determinant too large".into()))?;
    let mut candidates = vec![];
    if det % (1 << 11) == 0 && det / (1 << 11) >= 2 {
        candidates.push(NsType::type_one(det >> 11)?);
    }
    if det % (1 << 10) == 0 && det >> 10 >= 1 {
        candidates.push(NsType::type_two(det >> 10)?);
    }
    let q = l.discriminant_form()?;
    for c in candidates {
        let qc = c.lattice().discriminant_form()?;
        if q.l_invariant(2) == qc.l_invariant(2) && crate::fqf::is_isometric(&q, &qc)?.is_some() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `N = 4 p_1 ⋯ p_l` with distinct odd primes; returns `l`.
pub fn lemma_shape(n: i64) -> Result<u32> {
    if n < 4 || n % 4 != 0 || (n / 4) % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "N = {n} is not 4 times an odd squarefree number"
        )));
    }
    let odd = n / 4;
    let ps = prime_factors(odd);
    if ps.iter().product::<i64>() != odd {
        return Err(Error::InvalidArgument(format!(
            "N = {n} is not 4 times an odd squarefree number"
        )));
    }
    Ok(ps.len() as u32)
}

/// Counts in `c(-2N)` of elements of order `2N` with norm `-1/2N`, resp.
/// `1 - 1/2N`.
pub fn lemma_counts(n: i64) -> Result<(u64, u64)> {
    lemma_shape(n)?;
    let q = Fqf::cyclic(-2 * n)?;
    let a = q.count_elements(Some(2 * n), Some(QMod2::from_frac(-1, 2 * n)))?;
    let b = q.count_elements(Some(2 * n), Some(QMod2::from_frac(2 * n - 1, 2 * n)))?;
    Ok((a, b))
}

/// `u(2)^5 ⊕ c(-2N)`.
pub fn orbit_form(n: i64) -> Result<Fqf> {
    Ok(Fqf::direct_sum(&[&Fqf::u2().power(5), &Fqf::cyclic(-2 * n)?]))
}

/// Number of elements of norm `-1/2N` in `u(2)^5 ⊕ c(-2N)`. Every such
/// element is checked to have order `2N` and to span a nondegenerate
/// cyclic subgroup, hence an orthogonal summand.
pub fn orbit_count(n: i64) -> Result<u64> {
    lemma_shape(n)?;
    count_primitive_norm_elements(n)
}

fn count_primitive_norm_elements(n: i64) -> Result<u64> {
    let q = orbit_form(n)?;
    q.require_cap(COUNT_CAP)?;
    let target = QMod2::from_frac(-1, 2 * n);
    let mut count = 0u64;
    for x in q.elements()? {
        if q.norm(&x) != target {
            continue;
        }
        let ord = q.element_order(&x);
        if ord != 2 * n || q.pairing(&x, &x).order() != 2 * n {
            return Err(Error::CheckFailed(format!(
                "{x} does not span a nondegenerate summand of order {}",
                2 * n
            )));
        }
        count += 1;
    }
    Ok(count)
}

/// `B0` for a Picard-11 type; Type I with `e ≥ 3` also gets the count of
/// admissible elements of `u(2)^5 ⊕ c(-2N)` divided by `2` (for `±id`).
pub fn b0(ns: &NsType) -> Result<B0Report> {
    let b0_table = ns.b0_table()?;
    let mut notes = vec![format!("table value for {ns}")];
    let mut b0_counted = None;
    if ns.kind == NsKind::I && ns.e >= 3 {
        let size = (1u64 << 10).saturating_mul(ns.cyclic_order() as u64);
        if size <= COUNT_CAP {
            let c = count_primitive_norm_elements(ns.parameter)?;
            b0_counted = Some(c / 2);
            notes.push(format!(
                "{c} elements of order 2N and norm -1/2N in u(2)^5+c(-2N); divided by 2"
            ));
        } else {
            notes.push(format!("count skipped: group of order {size} exceeds cap {COUNT_CAP}"));
        }
    } else {
        notes.push("no independent count for this case".into());
    }
    Ok(B0Report {
        ns_type: ns.clone(),
        b0_table,
        b0_counted,
        notes,
    })
}

/// `NS(1/2)` is even and the `U(2) ⊕ E8(2)` summand is primitive with
/// complement `<-2N>`. Not applicable (false) for Type II.
pub fn unique_embedding_check(ns: &NsType) -> Result<bool> {
    let l = ns.lattice();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match l.rescale(&half) {
        Ok(_) => {}
        Err(Error::NonIntegral) | Err(Error::NotEven(_)) => return Ok(false),
        Err(e) => return Err(e),
    }
    let m = Sublattice::coordinate(&l, 0..10)?;
    if !m.is_primitive() {
        return Ok(false);
    }
    let comp = orthogonal_complement(&m)?;
    Ok(comp.rank() == 1 && comp.gram() == crate::exact_linalg::IntMatrix::from_rows(&[[-ns.cyclic_order()]]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        let t = NsType::type_one(60).unwrap();
        assert_eq!((t.e, t.l()), (3, 2));
        assert_eq!(t.to_string(), "Type I, N = 60, 2N = 2^3*3*5 (e = 3, l = 2)");
        let t = NsType::type_two(9).unwrap();
        assert_eq!((t.e, t.l()), (2, 1));
        assert_eq!(t.odd_part, vec![(3, 2)]);
        assert!(NsType::type_one(1).is_err());
        assert!(NsType::type_two(0).is_err());
    }

    #[test]
    fn b0_table_cases() {
        assert_eq!(NsType::type_one(3).unwrap().b0_table().unwrap(), 1);
        assert_eq!(NsType::type_one(2).unwrap().b0_table().unwrap(), 528);
        assert_eq!(NsType::type_one(4).unwrap().b0_table().unwrap(), 1024);
        assert_eq!(NsType::type_two(1).unwrap().b0_table().unwrap(), 1);
        assert_eq!(NsType::type_two(3).unwrap().b0_table().unwrap(), 1);
        assert_eq!(NsType::type_two(2).unwrap().b0_table().unwrap(), 32);
        assert_eq!(NsType::type_two(6).unwrap().b0_table().unwrap(), 128);
    }

    #[test]
    fn condition_b_examples() {
        for (n, expect) in [(4, true), (1, false), (2, true), (12, true)] {
            let l = Lattice::direct_sum(&[
                &Lattice::u().scaled(2).unwrap(),
                &Lattice::e8().scaled(2).unwrap(),
                &Lattice::span(-2 * n).unwrap(),
            ]);
            let m = Sublattice::coordinate(&l, 0..10).unwrap();
            assert_eq!(condition_b(&m).unwrap(), expect, "N = {n}");
        }
        let l = Lattice::direct_sum(&[&Lattice::u(), &Lattice::d4()]);
        let m = Sublattice::coordinate(&l, 0..2).unwrap();
        assert!(!condition_b(&m).unwrap());
        let m = Sublattice::coordinate(&l, 2..6).unwrap();
        assert!(matches!(condition_b(&m), Err(Error::NotNegativeDefinite)));
    }

    #[test]
    fn nikulin_examples() {
        let u2 = Lattice::u().scaled(2).unwrap();
        let e82 = Lattice::e8().scaled(2).unwrap();
        assert!(nikulin_surjectivity(&Lattice::direct_sum(&[&u2, &e82])).unwrap());
        assert!(nikulin_surjectivity(&u2.power(2)).unwrap());
        assert!(nikulin_surjectivity(&Lattice::direct_sum(&[&Lattice::u(), &Lattice::e8()])).unwrap());
        assert!(matches!(nikulin_surjectivity(&Lattice::e8()), Err(Error::Definite)));
        // <2> + <-2>: rank 2 = l(A_2), and c(2)+c(-2) only has norms in {0, 1/2, 3/2}
        let l = Lattice::from_rows(&[[2, 0], [0, -2]]).unwrap();
        assert!(!nikulin_surjectivity(&l).unwrap());
        // U + <-6>: rank 3 = l(A_3) + 2
        let l = Lattice::direct_sum(&[&Lattice::u(), &Lattice::span(-6).unwrap()]);
        assert!(nikulin_surjectivity(&l).unwrap());
        // <6> + <-6>: rank 2 < l(A_3) + 2 = 4
        let l = Lattice::from_rows(&[[6, 0], [0, -6]]).unwrap();
        assert!(!nikulin_surjectivity(&l).unwrap());
    }

    #[test]
    fn hyperbolic_summand_detection() {
        assert!(has_hyperbolic_2_summand(&Fqf::u2()).unwrap());
        assert!(has_hyperbolic_2_summand(&Fqf::v2()).unwrap());
        assert!(!has_hyperbolic_2_summand(&Fqf::cyclic(-8).unwrap()).unwrap());
        let mixed = Fqf::direct_sum(&[&Fqf::cyclic(-8).unwrap(), &Fqf::v2()]);
        assert!(has_hyperbolic_2_summand(&mixed).unwrap());
    }

    #[test]
    fn classification() {
        let t = classify_picard11(&NsType::type_one(4).unwrap().lattice())
            .unwrap()
            .unwrap();
        assert_eq!((t.kind, t.parameter, t.e, t.l()), (NsKind::I, 4, 3, 0));
        let t = classify_picard11(&NsType::type_two(1).unwrap().lattice())
            .unwrap()
            .unwrap();
        assert_eq!((t.kind, t.parameter, t.e, t.l()), (NsKind::II, 1, 2, 0));
        let l = Lattice::direct_sum(&[&Lattice::u(), &Lattice::e8(), &Lattice::span(-2).unwrap()]);
        assert_eq!(classify_picard11(&l).unwrap(), None);
        assert!(classify_picard11(&Lattice::u()).is_err());
        // det 2^12 admits both a Type I (N = 2) and a Type II (M = 4) reading
        let t = classify_picard11(&NsType::type_two(4).unwrap().lattice())
            .unwrap()
            .unwrap();
        assert_eq!((t.kind, t.parameter), (NsKind::II, 4));
        let t = classify_picard11(&NsType::type_one(2).unwrap().lattice())
            .unwrap()
            .unwrap();
        assert_eq!((t.kind, t.parameter), (NsKind::I, 2));
    }

    #[test]
    fn lemma_and_orbit_counts() {
        assert_eq!(lemma_counts(4).unwrap(), (2, 2));
        assert_eq!(lemma_counts(12).unwrap(), (4, 4));
        assert_eq!(lemma_counts(60).unwrap(), (8, 8));
        assert!(lemma_counts(8).is_err());
        assert!(lemma_counts(36).is_err());
        assert_eq!(orbit_count(4).unwrap(), 2048);
    }

    #[test]
    fn b0_reports() {
        let r = b0(&NsType::type_one(4).unwrap()).unwrap();
        assert_eq!((r.b0_table, r.b0_counted), (1024, Some(1024)));
        let r = b0(&NsType::type_one(2).unwrap()).unwrap();
        assert_eq!((r.b0_table, r.b0_counted), (528, None));
        let r = b0(&NsType::type_two(1).unwrap()).unwrap();
        assert_eq!((r.b0_table, r.b0_counted), (1, None));
        // e = 4: the count still matches 2^{l+10}
        let r = b0(&NsType::type_one(8).unwrap()).unwrap();
        assert_eq!((r.b0_table, r.b0_counted), (1024, Some(1024)));
    }

    #[test]
    fn unique_embedding() {
        assert!(unique_embedding_check(&NsType::type_one(4).unwrap()).unwrap());
        assert!(unique_embedding_check(&NsType::type_one(12).unwrap()).unwrap());
        assert!(!unique_embedding_check(&NsType::type_two(1).unwrap()).unwrap());
        // N odd: NS(1/2) contains <-N>, which is odd
        assert!(!unique_embedding_check(&NsType::type_one(3).unwrap()).unwrap());
    }
}
