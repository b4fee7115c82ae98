//! Compiles the guide's code blocks as doc-tests.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(gauss_codes, "gauss-codes.md");
chapter!(affine_indices, "affine-indices.md");
chapter!(link_invariants, "link-invariants.md");
chapter!(cut_systems, "cut-systems.md");
chapter!(twisted, "twisted.md");
chapter!(moves_and_fuzzing, "moves-and-fuzzing.md");
chapter!(cli, "cli.md");
