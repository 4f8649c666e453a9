//! Subgroups, orthogonal complements and subquotients `H^⊥/H`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Fqf, FqfElement, COUNT_CAP};
use crate::error::{Error, Result};
use crate::exact_linalg::{snf, IntMatrix, RatMatrix};

/// A materialized subgroup of a finite quadratic form.
#[derive(Clone, Debug)]
pub struct FqfSubgroup {
    parent: Fqf,
    generators: Vec<FqfElement>,
    member: Vec<bool>,
    order: u64,
}

impl FqfSubgroup {
    fn trivial(parent: &Fqf) -> Result<Self> {
        parent.require_cap(COUNT_CAP)?;
        let mut member = vec![false; parent.size() as usize];
        member[0] = true;
        Ok(FqfSubgroup {
            parent: parent.clone(),
            generators: vec![],
            member,
            order: 1,
        })
    }

    /// Adds `g` to the generating set, closing under addition.
    fn adjoin(&mut self, g: &FqfElement) {
        if self.contains(g) {
            return;
        }
        let current: Vec<FqfElement> = self.elements();
        let mut mult = g.clone();
        while !self.contains(&mult) {
            for h in &current {
                let s = self.parent.add(h, &mult);
                let idx = self.parent.index_of(s.coeffs()) as usize;
                if !self.member[idx] {
                    self.member[idx] = true;
                    self.order += 1;
                }
            }
            mult = self.parent.add(&mult, g);
        }
        self.generators.push(g.clone());
    }

    pub fn parent(&self) -> &Fqf {
        &self.parent
    }

    pub fn generators(&self) -> &[FqfElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn contains(&self, x: &FqfElement) -> bool {
        self.member[self.parent.index_of(x.coeffs()) as usize]
    }

    /// Members in index order.
    pub fn elements(&self) -> Vec<FqfElement> {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.parent.element_at(i as u64))
            .collect()
    }

    /// `q|_H ≡ 0` (which forces `b|_{H×H} ≡ 0`).
    pub fn is_isotropic(&self) -> bool {
        let p = &self.parent;
        self.generators.iter().all(|g| p.norm_num(g.coeffs()) == 0)
            && self
                .generators
                .iter()
                .all(|g| self.generators.iter().all(|h| p.pair_num(g.coeffs(), h.coeffs()) == 0))
    }
}

/// Span of `gens` in `q`.
pub fn subgroup_span(q: &Fqf, gens: &[FqfElement]) -> Result<FqfSubgroup> {
    let mut h = FqfSubgroup::trivial(q)?;
    for g in gens {
        if g.coeffs().len() != q.rank() {
            return Err(Error::Dimension("generator does not belong to this form".into()));
        }
        h.adjoin(&q.element(g.coeffs()));
    }
    Ok(h)
}

/// `H^⊥ = {x : b(x, h) = 0 for all h in H}`.
pub fn orthogonal_subgroup(q: &Fqf, h: &FqfSubgroup) -> Result<FqfSubgroup> {
    q.require_cap(COUNT_CAP)?;
    let gens: Vec<&[i64]> = h.generators.iter().map(|g| g.coeffs()).collect();
    let mut out = FqfSubgroup::trivial(q)?;
    let mut members = vec![];
    q.for_each_coeffs(|c| {
        if gens.iter().all(|g| q.pair_num(c, g) == 0) {
            members.push(FqfElement(c.to_vec()));
        }
    });
    for m in &members {
        out.adjoin(m);
    }
    Ok(out)
}

/// The induced form on `big/small` together with the projection from `big`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    form: Fqf,
    big: FqfSubgroup,
    small: FqfSubgroup,
    basis_inv: RatMatrix,
    vprime: IntMatrix,
    keep: Vec<usize>,
    moduli: Vec<i64>,
    lifts: Vec<FqfElement>,
}

impl Subquotient {
    pub fn form(&self) -> &Fqf {
        &self.form
    }

    pub fn numerator(&self) -> &FqfSubgroup {
        &self.big
    }

    pub fn denominator(&self) -> &FqfSubgroup {
        &self.small
    }

    /// Representatives in the parent of the quotient generators.
    pub fn lifts(&self) -> &[FqfElement] {
        &self.lifts
    }

    /// Image of `x ∈ big` in the quotient form; `None` if `x ∉ big`.
    pub fn project(&self, x: &FqfElement) -> Option<FqfElement> {
        if !self.big.contains(x) {
            return None;
        }
        let k = x.coeffs().len();
        let mut row = RatMatrix::zeros(1, k);
        for (j, &c) in x.coeffs().iter().enumerate() {
            row.set(0, j, BigInt::from(c).into());
        }
        let coords = row
            .mul(&self.basis_inv)
            .to_integer()
            .expect("member of big lies in its lattice");
        let coords = coords.mul(&self.vprime);
        let c: Vec<i64> = self
            .keep
            .iter()
            .zip(&self.moduli)
            .map(|(&i, &t)| (coords.get(0, i) % BigInt::from(t)).to_i64().unwrap().rem_euclid(t))
            .collect();
        Some(self.form.element(&c))
    }
}

fn preimage_rows(q: &Fqf, gens: &[FqfElement]) -> Vec<Vec<BigInt>> {
    let k = q.rank();
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.coeffs().iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    for i in 0..k {
        let mut r = vec![BigInt::zero(); k];
        r[i] = BigInt::from(q.orders()[i]);
        rows.push(r);
    }
    rows
}

/// Builds the subquotient `big/small` with its induced form. Requires
/// `small ⊆ big ⊆ small^⊥` and `small` isotropic.
pub(crate) fn subquotient(q: &Fqf, big: FqfSubgroup, small: FqfSubgroup) -> Result<Subquotient> {
    let k = q.rank();
    if k == 0 {
        return Ok(Subquotient {
            form: Fqf::trivial(),
            big,
            small,
            basis_inv: RatMatrix::zeros(0, 0),
            vprime: IntMatrix::zeros(0, 0),
            keep: vec![],
            moduli: vec![],
            lifts: vec![],
        });
    }
    let big_rows = preimage_rows(q, big.generators());
    let s = snf(&IntMatrix::from_big_rows(big_rows, k));
    // basis of the preimage lattice: diag(s) · V^{-1}
    let divs = s.divisors();
    let mut basis = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            basis.set(i, j, &divs[i] * s.v_inv.get(i, j));
        }
    }
    let basis_inv = RatMatrix::from(&basis)
        .inverse()
        .expect("preimage lattice has full rank");
    let small_rows = IntMatrix::from_big_rows(preimage_rows(q, small.generators()), k);
    let rel = RatMatrix::from(&small_rows)
        .mul(&basis_inv)
        .to_integer()
        .ok_or_else(|| Error::InvalidArgument("subgroup is not contained in the numerator".into()))?;
    let s2 = snf(&rel);
    let t = s2.divisors();
    let mut keep = vec![];
    let mut moduli = vec![];
    let mut lifts = vec![];
    for (i, ti) in t.iter().enumerate() {
        let ti = ti.to_i64().expect("quotient order fits i64");
        if ti > 1 {
            keep.push(i);
            moduli.push(ti);
            // row i of V'^{-1} in basis coordinates, mapped to the ambient group
            let mut amb = vec![BigInt::zero(); k];
            for (l, a) in amb.iter_mut().enumerate() {
                for m in 0..k {
                    *a += s2.v_inv.get(i, m) * basis.get(m, l);
                }
            }
            let c: Vec<i64> = amb
                .iter()
                .zip(q.orders())
                .map(|(a, &d)| (a % BigInt::from(d)).to_i64().unwrap().rem_euclid(d))
                .collect();
            lifts.push(q.element(&c));
        }
    }
    // well-definedness on representatives
    for g in &lifts {
        for h in small.generators() {
            let gh = q.add(g, h);
            if q.norm(&gh) != q.norm(g) || q.pair_num(g.coeffs(), h.coeffs()) != 0 {
                return Err(Error::CheckFailed("induced form is not well defined on H^⊥/H".into()));
            }
        }
    }
    let qd = lifts.iter().map(|x| q.norm(x).value()).collect();
    let bm = lifts
        .iter()
        .map(|x| lifts.iter().map(|y| q.pairing(x, y).value()).collect())
        .collect();
    let form = Fqf::new(moduli.clone(), qd, bm)?;
    Ok(Subquotient {
        form,
        big,
        small,
        basis_inv,
        vprime: s2.v,
        keep,
        moduli,
        lifts,
    })
}

/// `H^⊥/H` for an isotropic subgroup `H`.
pub fn quotient_form(q: &Fqf, h: &FqfSubgroup) -> Result<Subquotient> {
    if !h.is_isotropic() {
        return Err(Error::NotIsotropic);
    }
    let perp = orthogonal_subgroup(q, h)?;
    subquotient(q, perp, h.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqf::{is_isometric, two_elementary_classify, QMod2};

    #[test]
    fn span_and_perp_in_u2() {
        let q = Fqf::u2();
        let e = q.generator(0);
        let h = subgroup_span(&q, std::slice::from_ref(&e)).unwrap();
        assert_eq!(h.order(), 2);
        let perp = orthogonal_subgroup(&q, &h).unwrap();
        assert_eq!(perp.order(), 2);
        assert!(perp.contains(&e));
    }

    #[test]
    fn whole_group_perp_is_radical() {
        let q = Fqf::u2().power(2);
        let all = subgroup_span(&q, &q.generators()).unwrap();
        assert_eq!(all.order(), 16);
        assert_eq!(orthogonal_subgroup(&q, &all).unwrap().order(), 1);
    }

    #[test]
    fn perp_of_nonzero_in_u2_four_has_index_two() {
        let q = Fqf::u2().power(4);
        for coeffs in [
            [1, 0, 0, 0, 0, 0, 0, 0],
            [1, 1, 0, 0, 0, 0, 0, 0],
            [1, 1, 1, 0, 1, 0, 0, 1],
        ] {
            let h = subgroup_span(&q, &[q.element(&coeffs)]).unwrap();
            let perp = orthogonal_subgroup(&q, &h).unwrap();
            assert_eq!(perp.order(), 1 << 7);
            assert_eq!(h.order() * perp.order(), q.size());
        }
    }

    #[test]
    fn quotient_by_trivial_is_identity() {
        let q = Fqf::cyclic(-8).unwrap();
        let h = subgroup_span(&q, &[]).unwrap();
        let sq = quotient_form(&q, &h).unwrap();
        assert!(is_isometric(&q, sq.form()).unwrap().is_some());
    }

    #[test]
    fn quotient_by_diagonal_isotropic() {
        let q = Fqf::u2().power(2);
        let h = subgroup_span(&q, &[q.element(&[1, 0, 1, 0])]).unwrap();
        let sq = quotient_form(&q, &h).unwrap();
        assert_eq!(sq.form().size(), 4);
        assert_eq!(two_elementary_classify(sq.form()).unwrap().to_string(), "u(2)");
        assert!(is_isometric(sq.form(), &Fqf::u2()).unwrap().is_some());
    }

    #[test]
    fn non_isotropic_rejected() {
        let q = Fqf::u2();
        let h = subgroup_span(&q, &[q.element(&[1, 1])]).unwrap();
        assert!(matches!(quotient_form(&q, &h), Err(Error::NotIsotropic)));
    }

    #[test]
    fn quotient_of_cyclic_by_isotropic_subgroup() {
        // c(-16): 4g has norm -16/16 = -1 ≡ 1, not isotropic; in c(-32), 8g has norm -2 ≡ 0
        let q = Fqf::cyclic(-32).unwrap();
        let h = subgroup_span(&q, &[q.element(&[8])]).unwrap();
        assert!(h.is_isotropic());
        let sq = quotient_form(&q, &h).unwrap();
        // H^⊥ = <4g>, quotient Z/2 generated by 4g with norm -16/32 = -1/2
        assert_eq!(sq.form().orders(), &[2]);
        assert_eq!(sq.form().qdiag()[0], QMod2::from_frac(-1, 2));
        assert_eq!(sq.project(&q.element(&[4])), Some(sq.form().element(&[1])));
        assert_eq!(sq.project(&q.element(&[12])), Some(sq.form().element(&[1])));
        assert_eq!(sq.project(&q.element(&[8])), Some(sq.form().zero()));
        assert_eq!(sq.project(&q.element(&[1])), None);
    }
}
