//! Exact p-adic and cyclotomic arithmetic for Λ-adic rigidity computations.

pub mod arith;
pub mod cyclo;
pub mod lambda;
pub mod modforms;
pub mod newton;
pub mod padic;
pub mod rigidity;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
    #[doc = include_str!("../../../book/src/lambda.md")]
    mod lambda {}
    #[doc = include_str!("../../../book/src/newton.md")]
    mod newton {}
    #[doc = include_str!("../../../book/src/cyclo.md")]
    mod cyclo {}
    #[doc = include_str!("../../../book/src/rigidity.md")]
    mod rigidity {}
    #[doc = include_str!("../../../book/src/modforms.md")]
    mod modforms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
