pub mod calibrate;
pub mod decouple;
pub mod evaluate;
pub mod simulate;
pub mod sysid;
