//! Adherence, closure, vicinity filters, paving numbers, and the reflector
//! calculus: the topologizer, the pretopologizer, the pseudotopologizer, the
//! generic adherence-determined reflector, and the exponential-hull functors.
//!
//! The pseudotopologizer is implemented by the ultrafilter formula even
//! though it coincides with the pretopologizer on finite carriers; both code
//! paths are kept and their agreement is a test, not an assumption — the
//! agreement is the finite-collapse theorem itself.

use crate::carrier::Mask;
use crate::convergence::{final_convergence, initial, is_continuous, Convergence, SpaceMap};
use crate::duality;
use crate::error::Error;
use crate::family::{AtomMap, FilterKernel};

/// Vicinity filter of a convergence at a point, as a kernel: the intersection
/// of all filters converging to the point, i.e. the principal filter of the
/// union of all converging kernels.
pub fn vicinity(conv: &Convergence, atom: usize) -> FilterKernel {
    let mut kernel = 0;
    for k in conv.carrier().kernels() {
        if conv.lim(k) & conv.carrier().singleton(atom) != 0 {
            kernel |= k;
        }
    }
    FilterKernel {
        carrier: conv.carrier().clone(),
        kernel,
    }
}

/// Set adherence via the vicinity grill: `x ∈ adh A` iff `A` meshes the
/// vicinity filter of `x`, i.e. meets its kernel.
pub fn adh_set(conv: &Convergence, set: Mask) -> Mask {
    let mut out = 0;
    for x in 0..conv.carrier().len() {
        if vicinity(conv, x).kernel & set != 0 {
            out |= 1 << x;
        }
    }
    out
}

/// Adherence of a family: the union of limits of all filters meshing it.
/// A filter `H↑` meshes the family iff `H` meets every member.
pub fn adh_family(conv: &Convergence, members: &[Mask]) -> Mask {
    let mut out = 0;
    for h in conv.carrier().kernels() {
        if members.iter().all(|&a| a & h != 0) {
            out |= conv.lim(h);
        }
    }
    out
}

/// Adherence of a proper filter given by its kernel: the union of the limits
/// of its finer ultrafilters.
pub fn adh_filter(conv: &Convergence, kernel: Mask) -> Mask {
    let mut out = 0;
    for x in conv.carrier().atoms_of(kernel) {
        out |= conv.lim(conv.carrier().singleton(x));
    }
    out
}

/// A set is closed when its adherence stays inside it.
pub fn is_closed(conv: &Convergence, set: Mask) -> bool {
    adh_set(conv, set) & !set == 0
}

/// Closure: the least adherence-closed superset, computed by iterating the
/// adherence to its fixpoint (at most one step per atom). The intersection
/// formula over closed supersets is the test oracle.
pub fn closure(conv: &Convergence, set: Mask) -> Mask {
    let mut current = set;
    loop {
        let next = current | adh_set(conv, current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Inherence: the complement of the adherence of the complement.
pub fn inherence(conv: &Convergence, set: Mask) -> Mask {
    let full = conv.carrier().full();
    full & !adh_set(conv, full & !set)
}

/// Classes of filters an adherence-determined reflector may quantify over.
/// On a finite carrier every filter is principal, so all four classes
/// coincide; the parameter keeps paratopology- and hypotopology-style
/// reflectors expressible, and the collapse is asserted by tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterClass {
    /// Principal (finitely based) filters.
    Principal,
    /// Countably based filters.
    CountablyBased,
    /// Countably deep filters.
    CountablyDeep,
    /// All filters.
    All,
}

impl FilterClass {
    /// Membership of a principal filter in the class. Every proper filter on
    /// a finite carrier is principal, countably based, and countably deep.
    pub fn contains_kernel(self, _kernel: Mask) -> bool {
        true
    }

    pub fn label(self) -> &'static str {
        match self {
            FilterClass::Principal => "principal",
            FilterClass::CountablyBased => "countably-based",
            FilterClass::CountablyDeep => "countably-deep",
            FilterClass::All => "all",
        }
    }
}

/// A named, parameterized transformer of convergences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functor {
    /// Identity functor.
    Identity,
    /// Pretopologizer: intersects set adherences over the grill of the filter.
    Pretopologizer,
    /// Pseudotopologizer: intersects limits over finer ultrafilters.
    Pseudotopologizer,
    /// Topologizer: intersects closures over the grill of the filter.
    Topologizer,
    /// Adherence-determined reflector for a class of filters.
    AdherenceDetermined(FilterClass),
    /// Exponential hull through the Sierpiński topology.
    EpiSierpinski,
    /// Exponential hull through the Bourdaud pretopology.
    EpiBourdaud,
}

impl Functor {
    pub fn label(&self) -> String {
        match self {
            Functor::Identity => "I".into(),
            Functor::Pretopologizer => "S0".into(),
            Functor::Pseudotopologizer => "S".into(),
            Functor::Topologizer => "T".into(),
            Functor::AdherenceDetermined(class) => format!("A[{}]", class.label()),
            Functor::EpiSierpinski => "Epi$".into(),
            Functor::EpiBourdaud => "Epi¥".into(),
        }
    }

    /// Applies the functor. Only the exponential hulls can fail, when the
    /// intermediate function space exceeds `duality::EPI_FUNCTION_BOUND`.
    pub fn apply(&self, conv: &Convergence) -> Result<Convergence, Error> {
        Ok(reflect(conv, *self)?)
    }
}

/// Applies a reflector to a convergence.
pub fn reflect(conv: &Convergence, functor: Functor) -> Result<Convergence, Error> {
    let carrier = conv.carrier().clone();
    match functor {
        Functor::Identity => Ok(conv.clone()),
        Functor::Pretopologizer => {
            // lim F = ⋂ { adh H : H in the grill of F }.
            let adh: Vec<Mask> = carrier.kernels().map(|h| adh_set(conv, h)).collect();
            let rows = carrier
                .kernels()
                .map(|k| {
                    carrier
                        .kernels()
                        .filter(|&h| h & k != 0)
                        .map(|h| adh[h as usize - 1])
                        .fold(carrier.full(), |acc, a| acc & a)
                })
                .collect();
            Ok(Convergence::from_rows_unchecked(carrier, rows))
        }
        Functor::Pseudotopologizer => {
            // lim F = ⋂ { lim U : U ultrafilter finer than F }.
            let rows = carrier
                .kernels()
                .map(|k| {
                    carrier
                        .atoms_of(k)
                        .map(|x| conv.lim(carrier.singleton(x)))
                        .fold(carrier.full(), |acc, l| acc & l)
                })
                .collect();
            Ok(Convergence::from_rows_unchecked(carrier, rows))
        }
        Functor::Topologizer => {
            // lim F = ⋂ { cl H : H in the grill of F }.
            let cl: Vec<Mask> = carrier.kernels().map(|h| closure(conv, h)).collect();
            let rows = carrier
                .kernels()
                .map(|k| {
                    carrier
                        .kernels()
                        .filter(|&h| h & k != 0)
                        .map(|h| cl[h as usize - 1])
                        .fold(carrier.full(), |acc, a| acc & a)
                })
                .collect();
            Ok(Convergence::from_rows_unchecked(carrier, rows))
        }
        Functor::AdherenceDetermined(class) => {
            // lim F = ⋂ { adh H : H a class filter meshing F }, quantified
            // over all kernels in the class rather than shortcut through
            // singletons.
            let adh: Vec<Mask> = carrier.kernels().map(|h| adh_filter(conv, h)).collect();
            let rows = carrier
                .kernels()
                .map(|k| {
                    carrier
                        .kernels()
                        .filter(|&h| h & k != 0 && class.contains_kernel(h))
                        .map(|h| adh[h as usize - 1])
                        .fold(carrier.full(), |acc, a| acc & a)
                })
                .collect();
            Ok(Convergence::from_rows_unchecked(carrier, rows))
        }
        Functor::EpiSierpinski => {
            let hull = duality::bidual_and_epi(conv, &crate::fixtures::sier(), duality::EPI_FUNCTION_BOUND)?;
            Ok(hull.epi)
        }
        Functor::EpiBourdaud => {
            let hull = duality::bidual_and_epi(conv, &crate::fixtures::bour(), duality::EPI_FUNCTION_BOUND)?;
            Ok(hull.epi)
        }
    }
}

/// Minimal pavement at a point, with its cardinality.
///
/// The witness is the antichain of inclusion-maximal converging kernels: any
/// pavement must contain every maximal converging kernel, and the maximal
/// ones already pave. A brute-force minimal-pavement search double-checks
/// this in tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PavingReport {
    pub atom: usize,
    pub paving_number: usize,
    pub witness_pavement: Vec<Mask>,
}

pub fn paving(conv: &Convergence, atom: usize) -> PavingReport {
    let bit = conv.carrier().singleton(atom);
    let converging: Vec<Mask> = conv
        .carrier()
        .kernels()
        .filter(|&k| conv.lim(k) & bit != 0)
        .collect();
    let witness: Vec<Mask> = converging
        .iter()
        .copied()
        .filter(|&k| !converging.iter().any(|&m| m != k && k & !m == 0))
        .collect();
    PavingReport {
        atom,
        paving_number: witness.len(),
        witness_pavement: witness,
    }
}

/// A convergence is a pretopology when every point converges along its own
/// vicinity filter; equivalently its paving number is 1 everywhere, and
/// equivalently it is fixed by the pretopologizer.
pub fn is_pretopology(conv: &Convergence) -> bool {
    (0..conv.carrier().len()).all(|x| {
        let v = vicinity(conv, x);
        conv.lim(v.kernel) & conv.carrier().singleton(x) != 0
    })
}

/// A pretopology is a topology exactly when its adherence is idempotent.
pub fn is_topology(conv: &Convergence) -> bool {
    is_pretopology(conv)
        && conv.carrier().subsets().skip(1).all(|s| {
            let a = adh_set(conv, s);
            adh_set(conv, a) == a
        })
}

/// A convergence is a pseudotopology when it is fixed by the
/// pseudotopologizer.
pub fn is_pseudotopology(conv: &Convergence) -> bool {
    reflect(conv, Functor::Pseudotopologizer).expect("no bounds involved") == *conv
}

/// Open sets of a topological convergence: complements of the closed sets.
pub fn open_sets(conv: &Convergence) -> Vec<Mask> {
    let full = conv.carrier().full();
    conv.carrier()
        .subsets()
        .filter(|&o| is_closed(conv, full & !o))
        .collect()
}

/// Laws a functor is checked against on a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctorLaw {
    /// `Jξ ≤ ξ`.
    Descending,
    /// `ξ ≤ ζ` implies `Jξ ≤ Jζ`.
    Increasing,
    /// `J(Jξ) = Jξ`.
    Idempotent,
    /// Continuous maps stay continuous after applying `J` to both ends.
    PreservesContinuity,
    /// `f(Jξ) ≥ J(fξ)` — the final-convergence inequality every concrete
    /// functor satisfies.
    FinalInequality,
    /// `J(f⁻τ) ≥ f⁻(Jτ)` — the initial-convergence inequality every concrete
    /// functor satisfies.
    InitialInequality,
    /// `J(f⁻τ) = f⁻(Jτ)` — full commutation with initial convergences,
    /// a law only for adherence-determined reflectors.
    InitialCommutation,
    /// `J(ξ×τ) = Jξ × Jτ` — commutation with binary products, the mark of an
    /// exponential reflector.
    ProductCommutation,
}

impl FunctorLaw {
    pub fn label(self) -> &'static str {
        match self {
            FunctorLaw::Descending => "descending",
            FunctorLaw::Increasing => "increasing",
            FunctorLaw::Idempotent => "idempotent",
            FunctorLaw::PreservesContinuity => "preserves-continuity",
            FunctorLaw::FinalInequality => "final-inequality",
            FunctorLaw::InitialInequality => "initial-inequality",
            FunctorLaw::InitialCommutation => "initial-commutation",
            FunctorLaw::ProductCommutation => "product-commutation",
        }
    }
}

/// The laws a functor asserts about itself. Laws outside this set may still
/// be explored in search mode, but never asserted: the topologizer, for one,
/// does not commute with initial convergences.
pub fn asserted_laws(functor: Functor) -> Vec<FunctorLaw> {
    let mut laws = vec![
        FunctorLaw::Descending,
        FunctorLaw::Increasing,
        FunctorLaw::Idempotent,
        FunctorLaw::PreservesContinuity,
        FunctorLaw::FinalInequality,
        FunctorLaw::InitialInequality,
    ];
    match functor {
        Functor::Identity => {
            laws.push(FunctorLaw::InitialCommutation);
            laws.push(FunctorLaw::ProductCommutation);
        }
        Functor::Pretopologizer | Functor::AdherenceDetermined(_) => {
            laws.push(FunctorLaw::InitialCommutation);
        }
        Functor::Pseudotopologizer => {
            laws.push(FunctorLaw::InitialCommutation);
            laws.push(FunctorLaw::ProductCommutation);
        }
        Functor::Topologizer | Functor::EpiSierpinski | Functor::EpiBourdaud => {}
    }
    laws
}

/// A single law failure, with enough data to replay it.
#[derive(Debug, Clone)]
pub struct LawViolation {
    pub law: FunctorLaw,
    pub detail: String,
}

/// Outcome of checking one functor over a corpus.
#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub checked: Vec<FunctorLaw>,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the asserted laws of `functor` on a corpus of convergences and
/// maps. Pair-based laws run over all ordered pairs of corpus spaces on a
/// common carrier; map-based laws run over the supplied maps. Violations are
/// reported in deterministic corpus order.
pub fn check_functor_laws(
    functor: Functor,
    spaces: &[Convergence],
    maps: &[SpaceMap],
    product_bound: usize,
) -> Result<LawReport, Error> {
    let laws = asserted_laws(functor);
    let mut report = LawReport {
        checked: laws.clone(),
        violations: Vec::new(),
    };
    let mut fail = |law: FunctorLaw, detail: String| {
        report.violations.push(LawViolation { law, detail });
    };

    let reflected: Vec<Convergence> = spaces
        .iter()
        .map(|s| reflect(s, functor))
        .collect::<Result<_, _>>()?;

    for (space, jspace) in spaces.iter().zip(&reflected) {
        if laws.contains(&FunctorLaw::Descending) && !jspace.is_finer(space)? {
            fail(FunctorLaw::Descending, format!("J not descending on\n{space}"));
        }
        if laws.contains(&FunctorLaw::Idempotent) && reflect(jspace, functor)? != *jspace {
            fail(FunctorLaw::Idempotent, format!("J J != J on\n{space}"));
        }
    }

    if laws.contains(&FunctorLaw::Increasing) {
        for (a, ja) in spaces.iter().zip(&reflected) {
            for (b, jb) in spaces.iter().zip(&reflected) {
                if a.carrier() == b.carrier() && a.is_finer(b)? && !ja.is_finer(jb)? {
                    fail(
                        FunctorLaw::Increasing,
                        format!("J not increasing on pair\n{a}vs\n{b}"),
                    );
                }
            }
        }
    }

    for map in maps {
        let jdom = reflect(&map.domain, functor)?;
        let jcod = reflect(&map.codomain, functor)?;
        if laws.contains(&FunctorLaw::PreservesContinuity)
            && map.is_continuous()
            && !is_continuous(&map.assignment, &jdom, &jcod)
        {
            fail(
                FunctorLaw::PreservesContinuity,
                format!("continuity lost along {:?}", map.assignment.values),
            );
        }
        if laws.contains(&FunctorLaw::FinalInequality) {
            let lhs = final_convergence(&map.assignment, &jdom)?;
            let rhs = reflect(&final_convergence(&map.assignment, &map.domain)?, functor)?;
            if !lhs.is_finer(&rhs)? {
                fail(
                    FunctorLaw::FinalInequality,
                    format!("f(Jξ) not finer than J(fξ) along {:?}", map.assignment.values),
                );
            }
        }
        let initial_j = initial(&map.assignment, &jcod)?;
        let j_initial = reflect(&initial(&map.assignment, &map.codomain)?, functor)?;
        if laws.contains(&FunctorLaw::InitialInequality) && !j_initial.is_finer(&initial_j)? {
            fail(
                FunctorLaw::InitialInequality,
                format!("J(f⁻τ) not finer than f⁻(Jτ) along {:?}", map.assignment.values),
            );
        }
        if laws.contains(&FunctorLaw::InitialCommutation) && j_initial != initial_j {
            fail(
                FunctorLaw::InitialCommutation,
                format!(
                    "J(f⁻τ) != f⁻(Jτ) along {:?} into\n{}",
                    map.assignment.values, map.codomain
                ),
            );
        }
    }

    if laws.contains(&FunctorLaw::ProductCommutation) {
        for (a, ja) in spaces.iter().zip(&reflected) {
            for (b, jb) in spaces.iter().zip(&reflected) {
                if a.carrier().len() * b.carrier().len() > product_bound {
                    continue;
                }
                let lhs = reflect(&crate::convergence::product(a, b, product_bound)?, functor)?;
                let rhs = crate::convergence::product(ja, jb, product_bound)?;
                if lhs != rhs {
                    fail(
                        FunctorLaw::ProductCommutation,
                        format!("J(ξ×τ) != Jξ×Jτ for\n{a}and\n{b}"),
                    );
                }
            }
        }
    }

    Ok(report)
}

/// Reports pairs where a functor fails to commute with binary products,
/// without asserting anything: discoveries, not laws.
pub fn product_commutation_search(
    functor: Functor,
    spaces: &[Convergence],
    product_bound: usize,
) -> Result<Vec<(Convergence, Convergence)>, Error> {
    let mut found = Vec::new();
    for a in spaces {
        for b in spaces {
            if a.carrier().len() * b.carrier().len() > product_bound {
                continue;
            }
            let lhs = reflect(&crate::convergence::product(a, b, product_bound)?, functor)?;
            let rhs = crate::convergence::product(
                &reflect(a, functor)?,
                &reflect(b, functor)?,
                product_bound,
            )?;
            if lhs != rhs {
                found.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(found)
}

/// Reports maps where a functor fails to commute with initial convergences;
/// search mode for functors that do not assert the commutation law.
pub fn initial_commutation_search(
    functor: Functor,
    maps: &[(AtomMap, Convergence)],
) -> Result<Vec<usize>, Error> {
    let mut found = Vec::new();
    for (i, (f, tau)) in maps.iter().enumerate() {
        let lhs = reflect(&initial(f, tau)?, functor)?;
        let rhs = initial(f, &reflect(tau, functor)?)?;
        if lhs != rhs {
            found.push(i);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn vicinity_kernels() {
        assert_eq!(vicinity(&fixtures::pt3(), 0).kernel, 0b011);
        assert_eq!(vicinity(&fixtures::disc2(), 0).kernel, 0b01);
        assert_eq!(vicinity(&fixtures::np3(), 0).kernel, 0b111);
    }

    #[test]
    fn adherence_of_sets() {
        assert_eq!(adh_set(&fixtures::pt3(), 0b100), 0b110); // adh{c} = {b,c}
        assert_eq!(adh_set(&fixtures::disc2(), 0b01), 0b01);
        // Adherence is expansive on every fixture.
        for conv in fixtures::all() {
            for s in conv.carrier().subsets() {
                assert_eq!(adh_set(&conv, s) & s, s);
            }
        }
    }

    #[test]
    fn adherence_routes_agree() {
        // Vicinity-grill form = meshing-family form on single sets, and both
        // match the ultrafilter form for the principal filter of the set.
        for conv in fixtures::all() {
            for s in conv.carrier().kernels() {
                let by_grill = adh_set(&conv, s);
                let by_family = adh_family(&conv, &[s]);
                let by_ultra = adh_filter(&conv, s);
                assert_eq!(by_grill, by_family);
                assert_eq!(by_grill, by_ultra);
            }
        }
    }

    #[test]
    fn closure_iterates_to_fixpoint() {
        let p = fixtures::pt3();
        assert_eq!(closure(&p, 0b100), 0b111); // {c} → {b,c} → {a,b,c}
        let d = fixtures::disc2();
        for s in d.carrier().subsets() {
            assert_eq!(closure(&d, s), s);
        }
    }

    #[test]
    fn closure_matches_intersection_of_closed_supersets() {
        for conv in fixtures::all() {
            for s in conv.carrier().subsets() {
                let by_formula = conv
                    .carrier()
                    .subsets()
                    .filter(|&h| s & !h == 0 && is_closed(&conv, h))
                    .fold(conv.carrier().full(), |acc, h| acc & h);
                assert_eq!(closure(&conv, s), by_formula);
            }
        }
    }

    #[test]
    fn inherence_of_sierpinski() {
        assert_eq!(inherence(&fixtures::sier(), 0b10), 0b10); // ih{1} = {1}
    }

    #[test]
    fn pretopologizer_on_np3() {
        let r = reflect(&fixtures::np3(), Functor::Pretopologizer).unwrap();
        assert_eq!(r.lim(0b110), 0b001); // lim{b,c} becomes {a}
        let p = fixtures::pt3();
        assert_eq!(reflect(&p, Functor::Pretopologizer).unwrap(), p);
    }

    #[test]
    fn topologizer_on_pt3() {
        let t = reflect(&fixtures::pt3(), Functor::Topologizer).unwrap();
        assert_eq!(t.lim(0b100), 0b111); // lim{c} = cl{c} = {a,b,c}
        assert!(is_topology(&t));
        assert!(t.is_finer(&fixtures::pt3()).err().is_none());
    }

    #[test]
    fn paving_reports() {
        let np3 = fixtures::np3();
        let r = paving(&np3, 0);
        assert_eq!(r.paving_number, 3);
        assert_eq!(r.witness_pavement, vec![0b001, 0b010, 0b100]);

        let pt3 = fixtures::pt3();
        let r = paving(&pt3, 0);
        assert_eq!(r.paving_number, 1);
        assert_eq!(r.witness_pavement, vec![0b011]);

        assert_eq!(paving(&fixtures::disc2(), 0).paving_number, 1);
    }

    #[test]
    fn class_predicates_on_fixtures() {
        let pt3 = fixtures::pt3();
        assert!(is_pretopology(&pt3));
        assert!(!is_topology(&pt3));

        let np3 = fixtures::np3();
        assert!(!is_pseudotopology(&np3));

        let sier = fixtures::sier();
        assert!(is_pretopology(&sier));
        assert!(is_topology(&sier));
        assert!(is_pseudotopology(&sier));
    }

    #[test]
    fn pretopology_iff_fixed_by_pretopologizer_on_fixtures() {
        for conv in fixtures::all() {
            let fixed = reflect(&conv, Functor::Pretopologizer).unwrap() == conv;
            assert_eq!(is_pretopology(&conv), fixed);
        }
    }

    #[test]
    fn open_sets_of_sierpinski() {
        assert_eq!(open_sets(&fixtures::sier()), vec![0b00, 0b10, 0b11]);
    }

    #[test]
    fn topologizer_laws_hold_on_fixture_corpus() {
        let spaces = fixtures::all();
        let report = check_functor_laws(Functor::Topologizer, &spaces, &[], 9).unwrap();
        assert!(report.all_hold(), "{:?}", report.violations);
    }
}
