//! Exact and numeric verification engine for the dynamical quantum group
//! structures of `U_q(sl(n+1))`.

pub mod cgtwist;
pub mod coboundary;
pub mod dyncore;
pub mod linalg;
pub mod looprefl;
pub mod repspace;
pub mod rmatrix;
pub mod rootvec;
pub mod scalar;
pub mod report;
