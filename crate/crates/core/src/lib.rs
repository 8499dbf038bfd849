//! Exact computational toolkit for multiplicative subgroups of ℝ₊*: decides
//! quadratic freeness of the subgroup's logarithms, extracts the lattice of
//! quadratic relations, transports relations to integral quadratic forms on
//! the dual torus, and builds and verifies the associated degree-3 torus
//! cocycle together with its integral Bockstein representative.
//!
//! Everything on the exact path is rational/integer arithmetic; floating
//! point never enters cocycle values. Numeric mode (logarithms of given
//! positive reals) runs on fixed-point big floats and integer-relation
//! detection, and by design can certify dependence but never independence.

pub mod abgroup;
pub mod bigfloat;
pub mod cocycle;
pub mod exactreal;
pub mod fincoh;
pub mod qforms;
pub mod relations;

pub use abgroup::{
    hermite_normal_form, hnf_row_basis, integer_kernel, integer_kernel_int, pair_count,
    pair_index, pairs, parse_int_matrix, parse_rat_matrix, parse_rational, format_rational,
    row_lattice_contains, smith_normal_form, sym_tensor_square, unimodular_completion,
    AbgroupError, FgAbelianGroup, HermiteNormalForm, IntMatrix, RatMatrix, SmithNormalForm,
    SymSquare,
};
pub use bigfloat::{ln2, BigFloat, NumericError, DEFAULT_PRECISION};
pub use cocycle::{
    bockstein_rep, obstruction_cocycle, obstruction_lift, section, section_coboundary,
    verify_bockstein, verify_cocycle, verify_obstruction, Cochain, CocycleError, Pairing,
    TorusPoint, ValueRing, VerifyMode, VerifyReport,
};
pub use exactreal::{parse_generator, ExactReal, ExactRealError, RealBasis, RealBasisBuilder};
pub use fincoh::{
    class_equal, class_is_trivial, coboundary_matrix, cohomology, restrict_obstruction,
    restrict_torus, CochainTable, FincohError, FiniteAbelianGroup, DEFAULT_TABLE_LIMIT,
};
pub use qforms::{
    antisym_decompose, form_from_symsquare, polarize, quad_of_bilinear, symsquare_from_form,
    IntegralBilinearForm, IntegralQuadraticForm, QformsError, SymSquareElement,
};
pub use relations::{
    is_quadratically_free, isotropy_defect, pslq, quadratic_relation_lattice, reduce_to_basis,
    relation_to_form, BasisReduction, Certainty, FreenessCertificate, FreenessVerdict,
    LogGenerators,
    NumericOptions, QuadraticRelation, QuadraticRelationLattice, RelationsError,
};
