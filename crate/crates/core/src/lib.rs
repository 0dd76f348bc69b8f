//! Steering flexible cables held at both ends, using closed-form Euler
//! elastica solutions.
//!
//! The crate is organised bottom-up:
//!
//! * [`elliptic`] – AGM-based complete integrals and Jacobi functions.
//! * [`elastica`] – cable shape, tangent, curvature, costates and the
//!   endpoint map `ψ` for planar and semi-spatial configurations.
//! * [`cspace`] – stability / non-self-intersection membership and the
//!   configuration grid.
//! * [`geometry`] – polygons, convex decomposition, bounding triangles and
//!   convex clipping.
//! * [`collision`] – cable-versus-obstacle checks in 2-D and 3-D.
//! * [`planner`] – weighted A* over the configuration grid.
//! * [`energy`] – elastic and gravitational energy, stability survey.
//! * [`oracle`] – brute-force reference checks used for verification.

pub mod collision;
pub mod cspace;
pub mod elastica;
pub mod elliptic;
pub mod energy;
pub mod geometry;
pub mod oracle;
pub mod planner;
pub mod predicates;
pub mod quad;
