//! Exact polynomial arithmetic and linear algebra in truncated jet algebras.

mod jet;
mod parse;
mod poly;

pub use jet::{
    basis_element, member, span, unit_vector, EchelonBuilder, JetContext, ModuleElement, ModuleSpan, SparseVec,
    SubspaceBasis,
};
pub use parse::poly_parse;
pub use poly::{default_names, ratio, scalar, Monomial, MonomialDisplay, Poly, PolyDisplay, Scalar};

pub fn poly_add(a: &Poly, b: &Poly) -> crate::Result<Poly> {
    a.checked_add(b)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> crate::Result<Poly> {
    a.checked_mul(b)
}

pub fn truncate(a: &Poly, ctx: &JetContext) -> Poly {
    ctx.truncate(a)
}
