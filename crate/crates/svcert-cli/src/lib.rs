//! Library surface of the certificate CLI, shared with the integration
//! tests.

pub mod certificate;
pub mod run;
pub mod verify;
