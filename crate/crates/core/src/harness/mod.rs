pub mod constraints;
pub mod models;
pub mod probe;
pub mod verify;
