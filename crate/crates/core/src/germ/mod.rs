//! Symbolic germs of Hardy field functions and the checks built on them.

pub mod basis;
pub mod conditions;
pub mod expr;
pub mod interval;
pub mod linalg;
pub mod shift;

pub use basis::{parse_rational, plain_decimal, Basis, Constant, ProductEntry, SymbolicReal, ONE};
pub use conditions::{
    check_condition_inf, check_condition_int, check_property_p, choose_weight, combine, normal_form, poly_span,
    rational_hull, DependentMember, InfVerdict, InfWitness, IntFails, IntHolds, IntVerdict, NormalForm, PFailure,
    PVerdict, Verdict, Weight,
};
pub use expr::{
    characteristic_vector, cmp_signature, compare, degree, is_decaying, GermTerm, GrowthComparison, HardyExpr, Ratio,
    Signature,
};
pub use interval::Interval;
pub use shift::{shift_expansion, ShiftExpansion};

/// A basis of constants together with named germs.
#[derive(Clone, Debug)]
pub struct Family {
    pub basis: Basis,
    pub names: Vec<String>,
    pub functions: Vec<HardyExpr>,
}

impl Family {
    pub fn new(basis: Basis, functions: Vec<(String, HardyExpr)>) -> Self {
        let (names, functions) = functions.into_iter().unzip();
        Family { basis, names, functions }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&HardyExpr> {
        self.names.iter().position(|n| n == name).map(|i| &self.functions[i])
    }
}
