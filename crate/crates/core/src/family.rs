//! Families of subsets: isotone families, filters given by kernels, ideals,
//! and the grill / mesh operators.
//!
//! On a finite carrier every proper filter is principal, so a filter is
//! faithfully represented by the kernel (the intersection of its members) and
//! the whole filter lattice collapses to the subset lattice. Families are
//! stored as explicit extensions (sets of subset masks), never as minimal
//! antichains; at these carrier sizes simplicity wins.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::carrier::{same_carrier, Carrier, Mask};
use crate::error::Error;

/// What a [`SubsetFamily`] claims to be. `Raw` carries no promise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Raw,
    Isotone,
    Filter,
    Ideal,
    GrillOf,
}

/// A proper filter on a finite carrier, represented by its kernel.
///
/// The kernel must be non-empty: the improper filter of all subsets is kept
/// out of convergence domains. Where family algebra needs it (grill and mesh
/// edge cases), use [`SubsetFamily::principal_up`] with an empty mask instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterKernel {
    pub carrier: Arc<Carrier>,
    pub kernel: Mask,
}

impl FilterKernel {
    pub fn new(carrier: Arc<Carrier>, kernel: Mask) -> Result<Self, Error> {
        if kernel == 0 {
            return Err(Error::EmptyKernel);
        }
        Ok(FilterKernel { carrier, kernel })
    }

    /// The principal ultrafilter of a single atom.
    pub fn point(carrier: Arc<Carrier>, atom: usize) -> Self {
        let kernel = carrier.singleton(atom);
        FilterKernel { carrier, kernel }
    }

    /// The full extension `kernel↑` as a family.
    pub fn extension(&self) -> SubsetFamily {
        SubsetFamily::principal_up(self.carrier.clone(), self.kernel)
    }

    /// Ultrafilters finer than this filter, as the set of their defining
    /// atoms: on a finite carrier these are exactly the points of the kernel.
    pub fn finer_ultrafilters(&self) -> Vec<usize> {
        self.carrier.atoms_of(self.kernel).collect()
    }

    /// `self` is finer than `other` (converges more easily): every member of
    /// `other` belongs to `self`, i.e. the kernels compare by inclusion.
    pub fn is_finer(&self, other: &FilterKernel) -> bool {
        self.kernel & other.kernel == self.kernel
    }
}

/// A family of subsets of a carrier, stored by full extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    pub carrier: Arc<Carrier>,
    pub sets: BTreeSet<Mask>,
    pub kind: FamilyKind,
}

impl SubsetFamily {
    pub fn raw(carrier: Arc<Carrier>, sets: impl IntoIterator<Item = Mask>) -> Self {
        SubsetFamily {
            carrier,
            sets: sets.into_iter().collect(),
            kind: FamilyKind::Raw,
        }
    }

    pub fn empty(carrier: Arc<Carrier>) -> Self {
        Self::raw(carrier, [])
    }

    /// All supersets of `kernel`. With `kernel = 0` this is the extension of
    /// the improper filter: every subset of the carrier.
    pub fn principal_up(carrier: Arc<Carrier>, kernel: Mask) -> Self {
        let sets = carrier.subsets().filter(|s| s & kernel == kernel).collect();
        SubsetFamily {
            carrier,
            sets,
            kind: FamilyKind::Filter,
        }
    }

    /// All subsets of `top`: the principal ideal, which is the general ideal
    /// on a finite carrier.
    pub fn principal_down(carrier: Arc<Carrier>, top: Mask) -> Self {
        let sets = carrier.subsets().filter(|s| s & !top == 0).collect();
        SubsetFamily {
            carrier,
            sets,
            kind: FamilyKind::Ideal,
        }
    }

    pub fn contains(&self, set: Mask) -> bool {
        self.sets.contains(&set)
    }

    pub fn is_isotone(&self) -> bool {
        let full = self.carrier.full();
        self.sets.iter().all(|&s| {
            self.carrier
                .atoms_of(full & !s)
                .all(|i| self.sets.contains(&(s | (1 << i))))
        })
    }

    /// `P0 ∈ P and P1 ∈ P iff P0 ∪ P1 ∈ P`, which over a non-empty family is
    /// downward closure plus closure under union.
    pub fn is_ideal(&self) -> bool {
        if self.sets.is_empty() {
            return false;
        }
        let down = self.sets.iter().all(|&s| {
            self.carrier
                .atoms_of(s)
                .all(|i| self.sets.contains(&(s & !(1 << i))))
        });
        let union = self
            .sets
            .iter()
            .all(|&s| self.sets.iter().all(|&t| self.sets.contains(&(s | t))));
        down && union
    }

    /// Extension of some `kernel↑` (the improper case `0↑` included).
    pub fn is_filter_extension(&self) -> bool {
        if self.sets.is_empty() {
            return false;
        }
        let kernel = self.sets.iter().fold(self.carrier.full(), |acc, s| acc & s);
        *self == SubsetFamily::principal_up(self.carrier.clone(), kernel)
    }

    /// Least isotone family containing this one.
    pub fn isotone_closure(&self) -> SubsetFamily {
        let sets = self
            .carrier
            .subsets()
            .filter(|&s| self.sets.iter().any(|&m| m & s == m))
            .collect();
        SubsetFamily {
            carrier: self.carrier.clone(),
            sets,
            kind: FamilyKind::Isotone,
        }
    }
}

/// The grill of a family: all sets meeting every member.
///
/// The empty family yields every subset, by the convention that an
/// intersection over an empty index set is everything.
pub fn grill(family: &SubsetFamily) -> SubsetFamily {
    let sets = family
        .carrier
        .subsets()
        .filter(|&h| family.sets.iter().all(|&a| a & h != 0))
        .collect();
    SubsetFamily {
        carrier: family.carrier.clone(),
        sets,
        kind: FamilyKind::GrillOf,
    }
}

/// The mesh relation `a # b`: every member of `a` meets every member of `b`.
pub fn mesh(a: &SubsetFamily, b: &SubsetFamily) -> Result<bool, Error> {
    same_carrier(&a.carrier, &b.carrier)?;
    Ok(a.sets
        .iter()
        .all(|&x| b.sets.iter().all(|&y| x & y != 0)))
}

/// Memberwise complement: an ideal maps to a filter and conversely.
pub fn complements(family: &SubsetFamily) -> SubsetFamily {
    let full = family.carrier.full();
    let sets = family.sets.iter().map(|&s| full & !s).collect();
    SubsetFamily {
        carrier: family.carrier.clone(),
        sets,
        kind: FamilyKind::Raw,
    }
}

/// A total assignment of atoms between two carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomMap {
    pub domain: Arc<Carrier>,
    pub codomain: Arc<Carrier>,
    /// `values[i]` is the codomain atom index of domain atom `i`.
    pub values: Vec<usize>,
}

impl AtomMap {
    pub fn new(
        domain: Arc<Carrier>,
        codomain: Arc<Carrier>,
        values: Vec<usize>,
    ) -> Result<Self, Error> {
        if values.len() != domain.len() {
            return Err(Error::NotTotal {
                atom: domain.atom_name(values.len().min(domain.len() - 1)).to_string(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::UnknownAtom {
                name: format!("codomain index {bad}"),
            });
        }
        Ok(AtomMap {
            domain,
            codomain,
            values,
        })
    }

    pub fn apply(&self, atom: usize) -> usize {
        self.values[atom]
    }

    /// Image of a domain subset.
    pub fn image(&self, set: Mask) -> Mask {
        let mut out = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if set & (1 << i) != 0 {
                out |= 1 << v;
            }
        }
        out
    }

    /// Preimage of a codomain subset.
    pub fn preimage(&self, set: Mask) -> Mask {
        let mut out = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if set & (1 << v) != 0 {
                out |= 1 << i;
            }
        }
        out
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.domain.full()) == self.codomain.full()
    }

    /// All total maps between two carriers, in lexicographic value order.
    pub fn all(domain: &Arc<Carrier>, codomain: &Arc<Carrier>) -> Vec<AtomMap> {
        let n = domain.len();
        let k = codomain.len();
        let total = k.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut values = vec![0; n];
                for v in values.iter_mut() {
                    *v = code % k;
                    code /= k;
                }
                AtomMap {
                    domain: domain.clone(),
                    codomain: codomain.clone(),
                    values,
                }
            })
            .collect()
    }
}

/// Memberwise image of a family: a base of the image filter when `a` is a
/// filter (the image filter has kernel `f(kernel)`).
pub fn image_family(f: &AtomMap, a: &SubsetFamily) -> Result<SubsetFamily, Error> {
    same_carrier(&f.domain, &a.carrier)?;
    let sets = a.sets.iter().map(|&s| f.image(s)).collect();
    Ok(SubsetFamily {
        carrier: f.codomain.clone(),
        sets,
        kind: FamilyKind::Raw,
    })
}

/// Memberwise preimage of a family.
pub fn preimage_family(f: &AtomMap, b: &SubsetFamily) -> Result<SubsetFamily, Error> {
    same_carrier(&f.codomain, &b.carrier)?;
    let sets = b.sets.iter().map(|&s| f.preimage(s)).collect();
    Ok(SubsetFamily {
        carrier: f.domain.clone(),
        sets,
        kind: FamilyKind::Raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Carrier> {
        Carrier::new(["a", "b"]).unwrap()
    }

    fn abc() -> Arc<Carrier> {
        Carrier::new(["a", "b", "c"]).unwrap()
    }

    /// All families on a carrier, coded by which subsets are members.
    fn all_families(carrier: &Arc<Carrier>) -> Vec<SubsetFamily> {
        let subsets: Vec<Mask> = carrier.subsets().collect();
        (0..1u64 << subsets.len())
            .map(|code| {
                SubsetFamily::raw(
                    carrier.clone(),
                    subsets
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| code & (1 << i) != 0)
                        .map(|(_, &s)| s),
                )
            })
            .collect()
    }

    #[test]
    fn grill_of_single_atom_family() {
        let c = ab();
        let fam = SubsetFamily::raw(c.clone(), [0b01]);
        let g = grill(&fam);
        assert_eq!(g.sets, BTreeSet::from([0b01, 0b11]));
    }

    #[test]
    fn grill_of_principal_filter_is_sets_meeting_kernel() {
        let c = abc();
        let filt = FilterKernel::new(c.clone(), 0b001).unwrap().extension();
        let g = grill(&filt);
        // Sets meeting {a} = sets containing a.
        let expect: BTreeSet<Mask> = c.subsets().filter(|s| s & 0b001 != 0).collect();
        assert_eq!(g.sets, expect);
    }

    #[test]
    fn grill_of_empty_family_is_everything() {
        let c = ab();
        let g = grill(&SubsetFamily::empty(c.clone()));
        assert_eq!(g.sets.len(), c.subset_count());
    }

    #[test]
    fn grill_of_improper_filter_is_empty() {
        let c = ab();
        let improper = SubsetFamily::principal_up(c, 0);
        assert!(grill(&improper).sets.is_empty());
    }

    #[test]
    fn double_grill_is_isotone_closure_exhaustively() {
        for carrier in [ab(), abc()] {
            for fam in all_families(&carrier) {
                let gg = grill(&grill(&fam));
                assert_eq!(gg.sets, fam.isotone_closure().sets, "{:?}", fam.sets);
            }
        }
    }

    #[test]
    fn mesh_matches_kernel_intersection_for_principal_filters() {
        let c = abc();
        for k in c.kernels() {
            for m in c.kernels() {
                let a = FilterKernel::new(c.clone(), k).unwrap().extension();
                let b = FilterKernel::new(c.clone(), m).unwrap().extension();
                assert_eq!(mesh(&a, &b).unwrap(), k & m != 0);
            }
        }
    }

    #[test]
    fn mesh_is_symmetric_and_adjoint_to_grill() {
        let c = ab();
        let fams = all_families(&c);
        for a in &fams {
            let ga = grill(a);
            for b in &fams {
                let m = mesh(a, b).unwrap();
                assert_eq!(m, mesh(b, a).unwrap());
                assert_eq!(m, b.sets.is_subset(&ga.sets));
                assert_eq!(m, a.sets.is_subset(&grill(b).sets));
            }
        }
    }

    #[test]
    fn mesh_rejects_carrier_mismatch() {
        let a = SubsetFamily::empty(ab());
        let b = SubsetFamily::empty(abc());
        assert!(matches!(mesh(&a, &b), Err(Error::CarrierMismatch { .. })));
    }

    #[test]
    fn complements_single() {
        let c = ab();
        let fam = SubsetFamily::raw(c, [0b01]);
        assert_eq!(complements(&fam).sets, BTreeSet::from([0b10]));
    }

    #[test]
    fn complement_of_principal_ideal_is_principal_filter() {
        let c = ab();
        let ideal = SubsetFamily::principal_down(c.clone(), 0b01);
        let filt = complements(&ideal);
        assert_eq!(
            filt.sets,
            SubsetFamily::principal_up(c, 0b10).sets
        );
    }

    #[test]
    fn complements_is_an_involution() {
        for fam in all_families(&ab()) {
            assert_eq!(complements(&complements(&fam)).sets, fam.sets);
        }
    }

    #[test]
    fn complements_swaps_ideals_and_filters_exhaustively() {
        // On {a,b,c}: ideals are exactly the principal down-sets, filters the
        // principal up-sets (improper included); complementation is a
        // bijection between them.
        let c = abc();
        for fam in all_families(&c) {
            if fam.is_ideal() {
                assert!(complements(&fam).is_filter_extension());
            }
            if fam.is_filter_extension() {
                assert!(complements(&fam).is_ideal());
            }
        }
        for top in c.subsets() {
            let ideal = SubsetFamily::principal_down(c.clone(), top);
            assert!(ideal.is_ideal());
            let filt = complements(&ideal);
            assert_eq!(
                filt.sets,
                SubsetFamily::principal_up(c.clone(), c.full() & !top).sets
            );
        }
    }

    #[test]
    fn finer_ultrafilters_are_kernel_points() {
        let c = abc();
        let f = FilterKernel::new(c.clone(), 0b011).unwrap();
        assert_eq!(f.finer_ultrafilters(), vec![0, 1]);
        let u = FilterKernel::new(c, 0b001).unwrap();
        assert_eq!(u.finer_ultrafilters(), vec![0]);
    }

    #[test]
    fn refinement_order_matches_ultrafilter_sets() {
        // F ≥ D iff βF ⊆ βD, which for kernels is inclusion.
        let c = abc();
        for k in c.kernels() {
            for m in c.kernels() {
                let f = FilterKernel::new(c.clone(), k).unwrap();
                let d = FilterKernel::new(c.clone(), m).unwrap();
                let beta_f: BTreeSet<usize> = f.finer_ultrafilters().into_iter().collect();
                let beta_d: BTreeSet<usize> = d.finer_ultrafilters().into_iter().collect();
                assert_eq!(f.is_finer(&d), beta_f.is_subset(&beta_d));
            }
        }
    }

    #[test]
    fn image_of_principal_filter_has_image_kernel() {
        let c2 = ab();
        let c1 = Carrier::new(["x"]).unwrap();
        let f = AtomMap::new(c2.clone(), c1.clone(), vec![0, 0]).unwrap();
        let fam = FilterKernel::new(c2, 0b01).unwrap().extension();
        let img = image_family(&f, &fam).unwrap();
        assert_eq!(img.isotone_closure().sets, SubsetFamily::principal_up(c1, 0b1).sets);
    }

    #[test]
    fn preimage_of_point_filter_under_collapse() {
        let c2 = ab();
        let cxy = Carrier::new(["x", "y"]).unwrap();
        let f = AtomMap::new(c2.clone(), cxy.clone(), vec![0, 0]).unwrap();
        let fam = SubsetFamily::raw(cxy, [0b01]);
        let pre = preimage_family(&f, &fam).unwrap();
        assert_eq!(pre.sets, BTreeSet::from([0b11]));
    }

    #[test]
    fn image_grill_adjunction_exhaustive() {
        // f[A] # B  iff  A # f⁻[B], over all maps {a,b} → {x,y} and all
        // family pairs.
        let dom = ab();
        let cod = Carrier::new(["x", "y"]).unwrap();
        let dom_fams = all_families(&dom);
        let cod_fams = all_families(&cod);
        for f in AtomMap::all(&dom, &cod) {
            for a in &dom_fams {
                let fa = image_family(&f, a).unwrap();
                for b in &cod_fams {
                    let lhs = mesh(&fa, b).unwrap();
                    let rhs = mesh(a, &preimage_family(&f, b).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
