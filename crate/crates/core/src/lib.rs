pub mod error;
pub mod exactnum;
pub mod par;
pub mod sncmodel;
pub mod stability;
pub mod twistenum;
pub mod oracle;
