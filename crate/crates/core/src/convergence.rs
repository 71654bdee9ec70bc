//! Convergence structures on finite carriers.
//!
//! A convergence assigns to every proper filter (every non-empty kernel) the
//! set of its limit points, subject to two axioms:
//!
//! * point axiom: each principal ultrafilter `x↑` converges to `x`;
//! * monotonicity: a finer filter converges to at least as many points, which
//!   in kernel form reads `K ⊆ K'  ⇒  lim K'↑ ⊆ lim K↑`.
//!
//! Tables are total over all `2^n - 1` kernels, stored row-per-kernel with the
//! row index `kernel - 1`. Totality keeps comparison rowwise; monotone
//! completion of partial tables is a serialization concern, not a core one.

use std::fmt;
use std::sync::Arc;

use crate::carrier::{same_carrier, Carrier, Mask};
use crate::error::{AxiomViolation, Error};
use crate::family::AtomMap;

/// A convergence: total limit table kernel → limit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergence {
    carrier: Arc<Carrier>,
    /// `rows[k - 1]` is `lim (k↑)` for each kernel mask `k` in `1..2^n`.
    rows: Vec<Mask>,
}

impl Convergence {
    /// Builds a convergence from a total table, checking both axioms.
    pub fn from_rows(carrier: Arc<Carrier>, rows: Vec<Mask>) -> Result<Self, Error> {
        let candidate = Convergence { carrier, rows };
        candidate.validate()?;
        Ok(candidate)
    }

    /// Builds without validating. For algorithm outputs that are valid by
    /// construction; debug builds still check.
    pub(crate) fn from_rows_unchecked(carrier: Arc<Carrier>, rows: Vec<Mask>) -> Self {
        let c = Convergence { carrier, rows };
        debug_assert_eq!(c.validate(), Ok(()));
        c
    }

    /// Checks the convergence axioms, reporting the first violation with
    /// witness kernels. Monotonicity is checked along single-atom extensions,
    /// which spans all inclusions by transitivity.
    pub fn validate(&self) -> Result<(), AxiomViolation> {
        let n = self.carrier.len();
        let expected = (1 << n) - 1;
        if self.rows.len() != expected {
            return Err(AxiomViolation::RowCount {
                expected,
                actual: self.rows.len(),
            });
        }
        for i in 0..n {
            let point = self.carrier.singleton(i);
            if self.lim(point) & point == 0 {
                return Err(AxiomViolation::Point {
                    atom: self.carrier.atom_name(i).to_string(),
                    kernel: self.carrier.show(point),
                });
            }
        }
        for k in self.carrier.kernels() {
            for i in 0..n {
                let bigger = k | (1 << i);
                if bigger == k {
                    continue;
                }
                let extra = self.lim(bigger) & !self.lim(k);
                if extra != 0 {
                    return Err(AxiomViolation::Monotonicity {
                        smaller: self.carrier.show(k),
                        larger: self.carrier.show(bigger),
                        extra: self.carrier.show(extra),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    /// Limit set of the principal filter `kernel↑`.
    pub fn lim(&self, kernel: Mask) -> Mask {
        debug_assert!(kernel != 0);
        self.rows[kernel as usize - 1]
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    /// The discrete topology: only `x↑` converges to `x`.
    pub fn discrete(carrier: Arc<Carrier>) -> Self {
        let rows = carrier
            .kernels()
            .map(|k| if k.count_ones() == 1 { k } else { 0 })
            .collect();
        Convergence::from_rows_unchecked(carrier, rows)
    }

    /// The chaotic topology: every filter converges to every point.
    pub fn chaotic(carrier: Arc<Carrier>) -> Self {
        let full = carrier.full();
        let rows = carrier.kernels().map(|_| full).collect();
        Convergence::from_rows_unchecked(carrier, rows)
    }

    /// Pretopology given by its vicinity kernels: `x ∈ lim K↑` iff
    /// `K ⊆ V(x)`. Vicinity kernels must contain their point.
    pub fn pretopology_from_vicinities(carrier: Arc<Carrier>, vicinities: &[Mask]) -> Self {
        debug_assert_eq!(vicinities.len(), carrier.len());
        debug_assert!((0..carrier.len()).all(|i| vicinities[i] & carrier.singleton(i) != 0));
        let rows = carrier
            .kernels()
            .map(|k| {
                let mut lim = 0;
                for (i, &v) in vicinities.iter().enumerate() {
                    if k & !v == 0 {
                        lim |= 1 << i;
                    }
                }
                lim
            })
            .collect();
        Convergence::from_rows_unchecked(carrier, rows)
    }

    /// Topological convergence of the topology whose open sets are given.
    /// `opens` must be closed under union and intersection and contain the
    /// empty set and the carrier.
    pub fn from_open_sets(carrier: Arc<Carrier>, opens: &[Mask]) -> Self {
        let vicinities: Vec<Mask> = (0..carrier.len())
            .map(|i| {
                opens
                    .iter()
                    .filter(|&&o| o & carrier.singleton(i) != 0)
                    .fold(carrier.full(), |acc, &o| acc & o)
            })
            .collect();
        Self::pretopology_from_vicinities(carrier, &vicinities)
    }

    /// `self` is finer than `other`: rowwise smaller limit sets, equivalently
    /// the identity map is continuous from `self` to `other`.
    pub fn is_finer(&self, other: &Convergence) -> Result<bool, Error> {
        same_carrier(&self.carrier, &other.carrier)?;
        Ok(self
            .rows
            .iter()
            .zip(&other.rows)
            .all(|(&a, &b)| a & !b == 0))
    }

    /// Supremum: rowwise intersection of limit tables.
    pub fn sup<'a>(items: impl IntoIterator<Item = &'a Convergence>) -> Result<Convergence, Error> {
        combine(items, |acc, row| acc & row)
    }

    /// Infimum: rowwise union of limit tables.
    pub fn inf<'a>(items: impl IntoIterator<Item = &'a Convergence>) -> Result<Convergence, Error> {
        combine(items, |acc, row| acc | row)
    }

    /// `lim F0 ∩ lim F1 ⊆ lim (F0 ∧ F1)` for all filter pairs; the kernel of
    /// the infimum filter is the union of kernels.
    pub fn is_finitely_deep(&self) -> bool {
        self.carrier.kernels().all(|k0| {
            self.carrier
                .kernels()
                .all(|k1| self.lim(k0) & self.lim(k1) & !self.lim(k0 | k1) == 0)
        })
    }
}

fn combine<'a>(
    items: impl IntoIterator<Item = &'a Convergence>,
    op: impl Fn(Mask, Mask) -> Mask,
) -> Result<Convergence, Error> {
    let mut iter = items.into_iter();
    let first = iter.next().ok_or(Error::EmptyCarrier)?;
    let mut rows = first.rows.clone();
    for item in iter {
        same_carrier(&first.carrier, &item.carrier)?;
        for (acc, &row) in rows.iter_mut().zip(&item.rows) {
            *acc = op(*acc, row);
        }
    }
    Ok(Convergence::from_rows_unchecked(first.carrier.clone(), rows))
}

impl fmt::Display for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in self.carrier.kernels() {
            writeln!(
                f,
                "lim {} = {}",
                self.carrier.show(k),
                self.carrier.show(self.lim(k))
            )?;
        }
        Ok(())
    }
}

/// A function between carriers with convergences attached to both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    pub domain: Convergence,
    pub codomain: Convergence,
    pub assignment: AtomMap,
}

impl SpaceMap {
    pub fn new(domain: Convergence, codomain: Convergence, assignment: AtomMap) -> Result<Self, Error> {
        same_carrier(&domain.carrier, &assignment.domain)?;
        same_carrier(&codomain.carrier, &assignment.codomain)?;
        Ok(SpaceMap {
            domain,
            codomain,
            assignment,
        })
    }

    /// `x ∈ lim F` entails `f(x) ∈ lim f[F]`, over all kernels.
    pub fn is_continuous(&self) -> bool {
        is_continuous(&self.assignment, &self.domain, &self.codomain)
    }

    pub fn is_surjective(&self) -> bool {
        self.assignment.is_surjective()
    }
}

pub fn is_continuous(f: &AtomMap, domain: &Convergence, codomain: &Convergence) -> bool {
    domain.carrier().kernels().all(|k| {
        let pushed = f.image(domain.lim(k));
        pushed & !codomain.lim(f.image(k)) == 0
    })
}

/// Initial convergence `f⁻τ`: the coarsest convergence on the domain carrier
/// making `f` continuous into `τ`; `lim K↑ = f⁻(lim_τ f(K)↑)`.
pub fn initial(f: &AtomMap, codomain: &Convergence) -> Result<Convergence, Error> {
    same_carrier(&codomain.carrier, &f.codomain)?;
    let rows = f
        .domain
        .kernels()
        .map(|k| f.preimage(codomain.lim(f.image(k))))
        .collect();
    Ok(Convergence::from_rows_unchecked(f.domain.clone(), rows))
}

/// Final convergence `fξ`: the finest convergence on the codomain carrier
/// making `f` continuous out of `ξ`.
///
/// Constructively: every kernel `K` of the domain forces
/// `f(lim_ξ K↑) ⊆ lim (f(K))↑`, monotonicity propagates each constraint to
/// the kernels below `f(K)`, and the point axiom seeds the singleton rows.
/// The row formula is therefore
/// `lim M↑ = ({x} if M = {x}) ∪ ⋃ { f(lim_ξ K↑) : f(K) ⊇ M }`,
/// which is the least table satisfying all constraints, hence the finest
/// valid convergence. The universal property is exercised by tests.
pub fn final_convergence(f: &AtomMap, domain: &Convergence) -> Result<Convergence, Error> {
    same_carrier(&domain.carrier, &f.domain)?;
    let mut rows: Vec<Mask> = f
        .codomain
        .kernels()
        .map(|m| if m.count_ones() == 1 { m } else { 0 })
        .collect();
    for k in domain.carrier().kernels() {
        let image_kernel = f.image(k);
        let pushed = f.image(domain.lim(k));
        for m in f.codomain.kernels() {
            if m & !image_kernel == 0 {
                rows[m as usize - 1] |= pushed;
            }
        }
    }
    Ok(Convergence::from_rows_unchecked(f.codomain.clone(), rows))
}

/// Carrier of a binary product, atoms named `(x,y)` in row-major order.
pub fn product_carrier(left: &Carrier, right: &Carrier) -> Result<Arc<Carrier>, Error> {
    let mut names = Vec::with_capacity(left.len() * right.len());
    for a in left.atoms() {
        for b in right.atoms() {
            names.push(format!("({a},{b})"));
        }
    }
    Carrier::new(names)
}

/// Projections of a product-carrier subset onto the two factors.
fn project(mask: Mask, left_len: usize, right_len: usize) -> (Mask, Mask) {
    let mut p1 = 0;
    let mut p2 = 0;
    for i in 0..left_len {
        for j in 0..right_len {
            if mask & (1 << (i * right_len + j)) != 0 {
                p1 |= 1 << i;
                p2 |= 1 << j;
            }
        }
    }
    (p1, p2)
}

/// Binary product convergence, the supremum of the initial convergences along
/// the two projections; in kernel form
/// `lim K↑ = lim_ξ p1(K)↑ × lim_τ p2(K)↑`.
///
/// The product carrier is materialized eagerly and refused (not truncated)
/// beyond `max_atoms`.
pub fn product(
    left: &Convergence,
    right: &Convergence,
    max_atoms: usize,
) -> Result<Convergence, Error> {
    let n = left.carrier.len();
    let m = right.carrier.len();
    if n * m > max_atoms {
        return Err(Error::BoundExceeded {
            what: "product carrier",
            limit: max_atoms,
            actual: n * m,
        });
    }
    let carrier = product_carrier(&left.carrier, &right.carrier)?;
    let rows = carrier
        .kernels()
        .map(|k| {
            let (p1, p2) = project(k, n, m);
            let l1 = left.lim(p1);
            let l2 = right.lim(p2);
            let mut lim = 0;
            for i in left.carrier.atoms_of(l1) {
                for j in right.carrier.atoms_of(l2) {
                    lim |= 1 << (i * m + j);
                }
            }
            lim
        })
        .collect();
    Ok(Convergence::from_rows_unchecked(carrier, rows))
}

/// The two projection maps of a product carrier.
pub fn projections(
    prod: &Arc<Carrier>,
    left: &Arc<Carrier>,
    right: &Arc<Carrier>,
) -> (AtomMap, AtomMap) {
    let m = right.len();
    let p1 = AtomMap {
        domain: prod.clone(),
        codomain: left.clone(),
        values: (0..prod.len()).map(|idx| idx / m).collect(),
    };
    let p2 = AtomMap {
        domain: prod.clone(),
        codomain: right.clone(),
        values: (0..prod.len()).map(|idx| idx % m).collect(),
    };
    (p1, p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn point_axiom_violation_reported() {
        let c = Carrier::new(["a", "b"]).unwrap();
        // lim {a}↑ = {b}
        let err = Convergence::from_rows(c, vec![0b10, 0b10, 0b00]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidTable(AxiomViolation::Point { ref atom, .. }) if atom == "a"
        ));
    }

    #[test]
    fn monotonicity_violation_carries_witness_kernels() {
        let c = Carrier::new(["a", "b"]).unwrap();
        // lim {a}↑ = {a,b}, lim {b}↑ = {b}, lim {a,b}↑ = {a,b}: the pair
        // ({b}, {a,b}) witnesses the failure.
        let err = Convergence::from_rows(c, vec![0b11, 0b10, 0b11]).unwrap_err();
        match err {
            Error::InvalidTable(AxiomViolation::Monotonicity { smaller, larger, .. }) => {
                assert_eq!(smaller, "{b}");
                assert_eq!(larger, "{a,b}");
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn np3_table_is_a_valid_convergence() {
        fixtures::np3().validate().unwrap();
    }

    #[test]
    fn sup_inf_of_discrete_and_chaotic() {
        let disc = fixtures::disc2();
        let chaos = fixtures::chaos2();
        assert_eq!(Convergence::sup([&disc, &chaos]).unwrap(), disc);
        assert_eq!(Convergence::inf([&disc, &chaos]).unwrap(), chaos);
        assert!(disc.is_finer(&chaos).unwrap());
        assert!(!chaos.is_finer(&disc).unwrap());
    }

    #[test]
    fn identity_into_coarser_codomain_is_continuous() {
        let disc = fixtures::disc2();
        let sier = fixtures::sier();
        let f = AtomMap::new(disc.carrier().clone(), sier.carrier().clone(), vec![0, 1]).unwrap();
        assert!(is_continuous(&f, &disc, &sier));
        let g = AtomMap::new(
            fixtures::chaos2().carrier().clone(),
            disc.carrier().clone(),
            vec![0, 1],
        )
        .unwrap();
        assert!(!is_continuous(&g, &fixtures::chaos2(), &disc));
    }

    #[test]
    fn constant_maps_are_continuous_between_all_fixtures() {
        let spaces = fixtures::all();
        for dom in &spaces {
            for cod in &spaces {
                for target in 0..cod.carrier().len() {
                    let f = AtomMap::new(
                        dom.carrier().clone(),
                        cod.carrier().clone(),
                        vec![target; dom.carrier().len()],
                    )
                    .unwrap();
                    assert!(is_continuous(&f, dom, cod));
                }
            }
        }
    }

    #[test]
    fn initial_and_final_along_identity_are_identity() {
        for conv in fixtures::all() {
            let id = AtomMap::new(conv.carrier().clone(), conv.carrier().clone(), (0..conv.carrier().len()).collect()).unwrap();
            assert_eq!(initial(&id, &conv).unwrap(), conv);
            assert_eq!(final_convergence(&id, &conv).unwrap(), conv);
        }
    }

    #[test]
    fn product_of_discrete_is_discrete() {
        let d = fixtures::disc2();
        let p = product(&d, &d, 9).unwrap();
        assert_eq!(p, Convergence::discrete(p.carrier().clone()));
        let c = fixtures::chaos2();
        let q = product(&c, &c, 9).unwrap();
        assert_eq!(q, Convergence::chaotic(q.carrier().clone()));
    }

    #[test]
    fn sierpinski_square_limit_row() {
        let s = fixtures::sier();
        let p = product(&s, &s, 9).unwrap();
        // Kernel {(0,1)}: componentwise limits {0} × {0,1}.
        let k = p.carrier().mask_of(&["(0,1)"]).unwrap();
        let expect = p.carrier().mask_of(&["(0,0)", "(0,1)"]).unwrap();
        assert_eq!(p.lim(k), expect);
    }

    #[test]
    fn product_bound_is_refused_not_truncated() {
        let b = fixtures::bour();
        assert!(matches!(
            product(&b, &b, 8),
            Err(Error::BoundExceeded { actual: 9, .. })
        ));
    }

    #[test]
    fn finite_depth_of_fixtures() {
        assert!(fixtures::disc2().is_finitely_deep());
        assert!(fixtures::pt3().is_finitely_deep());
        assert!(fixtures::sier().is_finitely_deep());
        assert!(fixtures::bour().is_finitely_deep());
        // lim{b}↑ ∩ lim{c}↑ = {a} but lim{b,c}↑ = ∅.
        assert!(!fixtures::np3().is_finitely_deep());
    }
}
