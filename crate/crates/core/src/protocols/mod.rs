//! Schedule generators, geometry and validity checks, schedule files, and
//! the built-in adaptive policies.

mod geometry;
mod io;
mod policies;
mod schedule;
mod validity;

pub use geometry::{
    ceil_sqrt, check_line_properties, grid_prime, is_prime, label_of_point, line_members,
    line_points, on_line, point_of_label, smallest_prime_geq, verify_line_properties,
    GeometryReport, Line, PropertyCheck,
};
pub use io::{load_schedule, parse_descriptor, parse_schedule, save_schedule, schedule_to_string};
pub use policies::{
    builtin_policy, correct_policies, counting_height, CodewordPolicy, FirstSilence, Never,
    ObliviousPolicy, RoundRobinEcho, POLICY_NAMES,
};
pub use schedule::{Schedule, ScheduleDescriptor, Slot};
pub use validity::{verify_schedule_validity, verify_validity, ValidityReport};
