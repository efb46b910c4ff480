//! Compiles and runs the code samples of the guide in `book/` as doc-tests,
//! one module per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/signs-and-arcs.md")]
pub mod signs_and_arcs {}
#[doc = include_str!("../../../book/src/fact-format.md")]
pub mod fact_format {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/prediction.md")]
pub mod prediction {}
#[doc = include_str!("../../../book/src/explanation.md")]
pub mod explanation {}
#[doc = include_str!("../../../book/src/feedback-policy.md")]
pub mod feedback_policy {}
#[doc = include_str!("../../../book/src/localization.md")]
pub mod localization {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
