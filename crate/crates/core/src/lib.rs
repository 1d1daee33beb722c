pub mod cochain;
pub mod cohomology;
pub mod constructions;
pub mod field;
pub mod filiform;
pub mod io;
pub mod linalg;
pub mod report;
pub mod repr;
pub mod restricted;
pub mod superalg;
