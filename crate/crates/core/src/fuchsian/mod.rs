//! Fuchsian-invariant convex surfaces in AdS₃ with prescribed cone points.

pub mod dual;
pub mod group;
pub mod hull;
pub mod project;
pub mod pyramid;
pub mod solve;
pub mod sphere_star;

pub use dual::{fundamental_area, minkowski_dual, MinkowskiDual};
pub use group::{genus2_group, h2_dist, h2_polar, FuchsianGroup};
pub use hull::{orbit_hull, orbit_hull_at, ray_point, FuchsianConfig, FuchsianSurface, Neighbor, OrbitPoint, Star};
pub use project::ads_project;
pub use pyramid::{cone_angles, cone_angles_direct, curvatures, jacobian, JacobianMatrix, PyramidStar};
pub use solve::{check_targets, solve_prescribed_curvature, Solution, SolveOptions};
pub use sphere_star::{sph_star_jacobian, SphStar};
