//! Isometry search between finite quadratic forms.
//!
//! Maps are found by backtracking over images of the source generators:
//! each generator may only go to an element of the same order and norm,
//! and must reproduce every pairing with the generators already placed.
//! `is_isometric` runs the search separately on each primary part, which
//! is exact because the primary decomposition is orthogonal and canonical.

use std::collections::HashMap;

use num_integer::Integer;

use super::{subgroup_span, Fqf, FqfElement, COUNT_CAP, ISOMETRY_CAP, ORTHOGONAL_GROUP_CAP};
use crate::error::{Error, Result};

/// A form-preserving isomorphism, given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Isometry {
    images: Vec<FqfElement>,
}

impl Isometry {
    pub fn images(&self) -> &[FqfElement] {
        &self.images
    }

    /// Image of `x` (an element of the source form) in `target`.
    pub fn apply(&self, target: &Fqf, x: &FqfElement) -> FqfElement {
        let mut acc = target.zero();
        for (c, y) in x.coeffs().iter().zip(&self.images) {
            acc = target.add(&acc, &target.scalar(*c, y));
        }
        acc
    }

    /// True iff the map preserves `q` and `b` on generators and is bijective.
    pub fn verify(&self, source: &Fqf, target: &Fqf) -> Result<bool> {
        if source.size() != target.size() || self.images.len() != source.rank() {
            return Ok(false);
        }
        for (i, y) in self.images.iter().enumerate() {
            let g = source.generator(i);
            if target.scalar(source.orders()[i], y) != target.zero() || target.norm(y) != source.norm(&g) {
                return Ok(false);
            }
            for (j, z) in self.images.iter().enumerate() {
                if target.pairing(y, z) != source.pairing(&g, &source.generator(j)) {
                    return Ok(false);
                }
            }
        }
        Ok(subgroup_span(target, &self.images)?.order() == target.size())
    }
}

struct Search<'a> {
    src: &'a Fqf,
    tgt: &'a Fqf,
    order: Vec<usize>,
    candidates: Vec<Vec<Vec<i64>>>,
    // expected b(g_i, g_j) as a numerator over the target denominator
    pair_target: Vec<Vec<Option<i64>>>,
    check_bijective: bool,
    find_all: bool,
    found: Vec<Vec<FqfElement>>,
}

impl<'a> Search<'a> {
    fn new(src: &'a Fqf, tgt: &'a Fqf, find_all: bool) -> Option<Self> {
        let k = src.rank();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(src.orders()[i]));

        let mut buckets: HashMap<(i64, i64), Vec<Vec<i64>>> = HashMap::new();
        tgt.for_each_coeffs(|c| {
            buckets
                .entry((tgt.order_of(c), tgt.norm_num(c)))
                .or_default()
                .push(c.to_vec());
        });
        let mut candidates = vec![vec![]; k];
        for i in 0..k {
            let g = src.generator(i);
            let nq = src.norm(&g).value() * tgt.den();
            if !nq.is_integer() {
                return None;
            }
            let key = (src.orders()[i], nq.to_integer().rem_euclid(2 * tgt.den()));
            candidates[i] = buckets.get(&key).cloned().unwrap_or_default();
            if candidates[i].is_empty() {
                return None;
            }
        }
        let pair_target = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let v = src.pairing(&src.generator(i), &src.generator(j)).value() * tgt.den();
                        v.is_integer().then(|| v.to_integer().rem_euclid(tgt.den()))
                    })
                    .collect()
            })
            .collect();
        Some(Search {
            src,
            tgt,
            order,
            candidates,
            pair_target,
            check_bijective: !src.is_nondegenerate(),
            find_all,
            found: vec![],
        })
    }

    fn run(&mut self) {
        let k = self.src.rank();
        let mut chosen: Vec<Option<Vec<i64>>> = vec![None; k];
        self.descend(0, &mut chosen);
    }

    // returns true when the search should stop
    fn descend(&mut self, depth: usize, chosen: &mut Vec<Option<Vec<i64>>>) -> bool {
        if depth == self.order.len() {
            let images: Vec<FqfElement> = chosen
                .iter()
                .map(|c| self.tgt.element(c.as_ref().expect("all placed")))
                .collect();
            if self.check_bijective {
                let ok = subgroup_span(self.tgt, &images)
                    .map(|h| h.order() == self.tgt.size())
                    .unwrap_or(false);
                if !ok {
                    return false;
                }
            }
            self.found.push(images);
            return !self.find_all;
        }
        let i = self.order[depth];
        for ci in 0..self.candidates[i].len() {
            let y = &self.candidates[i][ci];
            let consistent = self.order[..depth].iter().all(|&j| {
                let z = chosen[j].as_ref().expect("placed earlier");
                self.pair_target[i][j] == Some(self.tgt.pair_num(y, z))
            });
            if !consistent {
                continue;
            }
            chosen[i] = Some(y.clone());
            if self.descend(depth + 1, chosen) {
                return true;
            }
            chosen[i] = None;
        }
        false
    }
}

fn histograms_match(a: &Fqf, b: &Fqf) -> Result<bool> {
    Ok(a.norm_histogram()? == b.norm_histogram()?)
}

fn search_one(src: &Fqf, tgt: &Fqf) -> Result<Option<Vec<FqfElement>>> {
    if src.size() != tgt.size() {
        return Ok(None);
    }
    if src.rank() == 0 {
        return Ok(Some(vec![]));
    }
    if !histograms_match(src, tgt)? {
        return Ok(None);
    }
    let Some(mut s) = Search::new(src, tgt, false) else {
        return Ok(None);
    };
    s.run();
    Ok(s.found.pop())
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Decides whether `q1 ≅ q2`, returning a witness when they are.
///
/// Each primary part must have order at most [`ISOMETRY_CAP`].
pub fn is_isometric(q1: &Fqf, q2: &Fqf) -> Result<Option<Isometry>> {
    if q1.size() != q2.size() {
        return Ok(None);
    }
    let primes = q1.primes();
    if primes != q2.primes() {
        return Ok(None);
    }
    let mut images = vec![q2.zero(); q1.rank()];
    for &p in &primes {
        let (f1, _, src1) = q1.p_part_with_embedding(p);
        let (f2, emb2, _) = q2.p_part_with_embedding(p);
        for f in [&f1, &f2] {
            f.require_cap(ISOMETRY_CAP)?;
        }
        let Some(part) = search_one(&f1, &f2)? else {
            return Ok(None);
        };
        for (j, &i) in src1.iter().enumerate() {
            // g_i's p-component is e·h_j with h_j = (d_i/p^a) g_i
            let pa = f1.orders()[j];
            let cofactor = q1.orders()[i] / pa;
            let e = mod_inverse(cofactor % pa, pa);
            let mut img = q2.zero();
            for (l, &c) in part[j].coeffs().iter().enumerate() {
                img = q2.add(&img, &q2.scalar(c, &emb2[l]));
            }
            images[i] = q2.add(&images[i], &q2.scalar(e, &img));
        }
    }
    let iso = Isometry { images };
    if q2.size() <= COUNT_CAP && !iso.verify(q1, q2)? {
        return Err(Error::CheckFailed("assembled isometry witness does not verify".into()));
    }
    Ok(Some(iso))
}

/// All isometries of `q`, in lexicographic order of generator images.
pub fn orthogonal_group(q: &Fqf) -> Result<Vec<Isometry>> {
    q.require_cap(ORTHOGONAL_GROUP_CAP)?;
    if q.rank() == 0 {
        return Ok(vec![Isometry { images: vec![] }]);
    }
    let Some(mut s) = Search::new(q, q, true) else {
        return Err(Error::CheckFailed("identity is not an isometry".into()));
    };
    s.run();
    let mut out: Vec<Isometry> = s.found.into_iter().map(|images| Isometry { images }).collect();
    out.sort();
    Ok(out)
}
