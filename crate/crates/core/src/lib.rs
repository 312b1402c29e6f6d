//! Exact and ball arithmetic for refinable box splines with algebraic dilations.
//!
//! Field elements of `Q(t)`, `t^k = n`, carry directions, dilations and translations;
//! masks are exact quasi-trigonometric polynomials; numerics use certified balls
//! wherever a sign or a lower bound matters.
//!
//! ```
//! use refspline_core::{decide, Field, FieldElement};
//!
//! let f = Field::new(10, 2)?;
//! let lambda = FieldElement::theta(f);
//! let cols = [FieldElement::parse("1", f)?, FieldElement::parse("t/2", f)?];
//! let report = decide(&cols, &lambda)?;
//! assert!(report.is_refinable());
//! assert_eq!(report.mask().unwrap().mask().len(), 10);
//! # Ok::<(), refspline_core::Error>(())
//! ```

pub mod ball;
pub mod codec;
pub mod error;
pub mod exactreal;
pub mod instance;
pub mod poly;
pub mod powermod;
pub mod qtrig;
pub mod refinery;
pub mod splinecore;

pub use ball::{CBall, RBall};
pub use error::{Error, Result};
pub use exactreal::{Field, FieldElement};
pub use instance::Instance;
pub use poly::RatPoly;
pub use powermod::{erdos_construct, erdos_params, erdos_verify, ErdosCertificate, ErdosReport};
pub use qtrig::{CombineOp, MvTrigPoly, QTrigPoly, StdDecomposition};
pub use refinery::{
    coverage_oracle, decay_probe, decide, factorization_check, lawton_check, mask_construct, multivariate_decide,
    verify_mask_identity, MvReport, RefinabilityReport, Verdict, Witness,
};
pub use splinecore::{
    boxspline_ft, cascade_solve, convolution_factorization_check, fourier_product_eval, integer_dilation_box_mask,
    spline_time_eval, BoxSplineSpec, FactorizationReport, GridFunction, GridSpec, MaskSpec, MvMaskSpec,
};
